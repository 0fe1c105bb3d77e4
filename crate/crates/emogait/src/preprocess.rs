//! Preprocessing pipeline: joint selection, recentering on SpineBase,
//! sliding-window Gaussian smoothing, per-frame differencing, heading
//! detection and front/back segmentation.
//!
//! Smoothing consumes four rows and differencing one more, so a matrix
//! with `T` rows leaves the pipeline with `T - 5`:
//!
//! ```
//! use emogait::preprocess::{differentiate, gaussian_filter, DEFAULT_KERNEL};
//! use emogait::skeleton::{JointSet, PoseMatrix, Stage};
//!
//! let cols = JointSet::Significant14.cols();
//! let m = PoseMatrix::from_rows(vec![2.0; 10 * cols], 10, JointSet::Significant14, Stage::Recentred);
//!
//! let smoothed = gaussian_filter(&m, &DEFAULT_KERNEL)?;
//! assert_eq!(smoothed.rows(), 6);
//! assert_eq!(smoothed.get(0, 0), 2.0);
//!
//! let velocity = differentiate(&smoothed)?;
//! assert_eq!(velocity.rows(), 5);
//! assert_eq!(velocity.get(0, 0), 0.0);
//! # Ok::<(), emogait::preprocess::PreprocessError>(())
//! ```

use thiserror::Error;

use crate::skeleton::{Direction, JointId, JointSet, PoseMatrix, Segment, Stage, Walk};

/// Normalized binomial smoothing kernel `[1, 4, 6, 4, 1] / 16`.
pub const DEFAULT_KERNEL: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];

#[derive(Debug, Error, PartialEq)]
pub enum PreprocessError {
    #[error("walk has no frames")]
    EmptyWalk,
    #[error("expected pose matrix at stage {expected:?}, got {got:?}")]
    WrongStage { expected: Stage, got: Stage },
    #[error("too short: {rows} rows, need at least {needed}")]
    TooShort { rows: usize, needed: usize },
    #[error("heading labels cover {labels} frames but matrix implies {expected}")]
    LabelLengthMismatch { labels: usize, expected: usize },
    #[error("invalid pipeline config: {0}")]
    InvalidConfig(String),
    #[error("no front or back segment of sufficient length found")]
    NoSegments,
}

/// Per-frame travel label relative to the camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heading {
    Front,
    Back,
    Turning,
}

/// Frame-aligned heading labels for a walk.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadingLabels(pub Vec<Heading>);

impl HeadingLabels {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Tunable parameters of the preprocessing pipeline.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub joint_set: JointSet,
    /// Smoothing kernel; must sum to 1.
    pub filter_kernel: [f64; 5],
    /// Minimum rows of the differenced matrix per emitted segment.
    pub min_segment_frames: usize,
    /// Width of the centered moving average applied to the SpineBase
    /// z-velocity before thresholding; odd.
    pub heading_smooth_window: usize,
    /// Speed floor in meters/frame below which a frame counts as Turning.
    pub min_heading_speed: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            joint_set: JointSet::Significant14,
            filter_kernel: DEFAULT_KERNEL,
            min_segment_frames: 40,
            heading_smooth_window: 15,
            min_heading_speed: 0.005,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PreprocessError> {
        let sum: f64 = self.filter_kernel.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(PreprocessError::InvalidConfig(format!(
                "filter kernel sums to {sum}, expected 1"
            )));
        }
        if self.min_segment_frames < 2 {
            return Err(PreprocessError::InvalidConfig(
                "min_segment_frames must be at least 2".into(),
            ));
        }
        if self.heading_smooth_window.is_multiple_of(2) || self.heading_smooth_window < 1 {
            return Err(PreprocessError::InvalidConfig(
                "heading_smooth_window must be odd and at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Flattens the walk's frames into a T×(3·|joint_set|) matrix of selected
/// joint coordinates, joint-major per row.
pub fn select_significant_joints(
    w: &Walk,
    joint_set: JointSet,
) -> Result<PoseMatrix, PreprocessError> {
    if w.frames.is_empty() {
        return Err(PreprocessError::EmptyWalk);
    }
    let joints = joint_set.joints();
    let mut data = Vec::with_capacity(w.frames.len() * joint_set.cols());
    for frame in &w.frames {
        for &joint in joints {
            let p = frame.position(joint);
            data.extend_from_slice(&p);
        }
    }
    Ok(PoseMatrix::from_rows(
        data,
        w.frames.len(),
        joint_set,
        Stage::Selected,
    ))
}

/// Rewrites every joint relative to that frame's SpineBase position and
/// zeroes the SpineBase columns themselves.
pub fn recenter_on_spinebase(p: &PoseMatrix) -> Result<PoseMatrix, PreprocessError> {
    if p.stage() != Stage::Selected {
        return Err(PreprocessError::WrongStage {
            expected: Stage::Selected,
            got: p.stage(),
        });
    }
    let cols = p.cols();
    let mut data = Vec::with_capacity(p.rows() * cols);
    for t in 0..p.rows() {
        let row = p.row(t);
        let origin = [row[0], row[1], row[2]];
        for (j, v) in row.iter().enumerate() {
            data.push(v - origin[j % 3]);
        }
    }
    Ok(PoseMatrix::from_rows(
        data,
        p.rows(),
        p.joint_set(),
        Stage::Recentred,
    ))
}

/// Convolves every column with the 5-tap kernel over a forward window:
/// `out[t] = sum_k kernel[k] * in[t + k]`. No padding, so the output has
/// `T - 4` rows.
pub fn gaussian_filter(p: &PoseMatrix, kernel: &[f64; 5]) -> Result<PoseMatrix, PreprocessError> {
    if p.rows() < 5 {
        return Err(PreprocessError::TooShort {
            rows: p.rows(),
            needed: 5,
        });
    }
    let cols = p.cols();
    let out_rows = p.rows() - 4;
    let mut data = Vec::with_capacity(out_rows * cols);
    for t in 0..out_rows {
        for j in 0..cols {
            let v: f64 = (0..5).map(|k| kernel[k] * p.get(t + k, j)).sum();
            data.push(v);
        }
    }
    Ok(PoseMatrix::from_rows(
        data,
        out_rows,
        p.joint_set(),
        Stage::Filtered,
    ))
}

/// First difference along time: `out[t] = in[t + 1] - in[t]`, `T - 1` rows.
pub fn differentiate(p: &PoseMatrix) -> Result<PoseMatrix, PreprocessError> {
    if p.rows() < 2 {
        return Err(PreprocessError::TooShort {
            rows: p.rows(),
            needed: 2,
        });
    }
    let cols = p.cols();
    let out_rows = p.rows() - 1;
    let mut data = Vec::with_capacity(out_rows * cols);
    for t in 0..out_rows {
        for j in 0..cols {
            data.push(p.get(t + 1, j) - p.get(t, j));
        }
    }
    Ok(PoseMatrix::from_rows(
        data,
        out_rows,
        p.joint_set(),
        Stage::Differenced,
    ))
}

/// Labels every frame Front, Back or Turning from the smoothed per-frame
/// z-velocity of SpineBase in camera coordinates (z is the distance from
/// the camera, so walking toward it means z decreases).
pub fn detect_heading(w: &Walk, cfg: &PipelineConfig) -> Result<HeadingLabels, PreprocessError> {
    if w.frames.is_empty() {
        return Err(PreprocessError::EmptyWalk);
    }
    cfg.validate()?;
    let z: Vec<f64> = w
        .frames
        .iter()
        .map(|f| f.position(JointId::SpineBase)[2])
        .collect();
    let n = z.len();
    // Forward difference; the last frame inherits the previous velocity.
    let mut dz = vec![0.0; n];
    for t in 0..n.saturating_sub(1) {
        dz[t] = z[t + 1] - z[t];
    }
    if n >= 2 {
        dz[n - 1] = dz[n - 2];
    }
    let half = cfg.heading_smooth_window / 2;
    let labels = (0..n)
        .map(|t| {
            let lo = t.saturating_sub(half);
            let hi = (t + half).min(n - 1);
            let mean: f64 = dz[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64;
            if mean < -cfg.min_heading_speed {
                Heading::Front
            } else if mean > cfg.min_heading_speed {
                Heading::Back
            } else {
                Heading::Turning
            }
        })
        .collect();
    Ok(HeadingLabels(labels))
}

/// Cuts the differenced matrix into maximal direction-uniform runs and
/// keeps those of at least `min_segment_frames` rows.
///
/// Row `t` of the differenced matrix was derived from original frames
/// `t..t+5` (5-tap filter window followed by the forward difference); it
/// is assigned the heading of original frame `t + 2`, the filter-window
/// center of the earlier frame of the difference pair.
pub fn segment_walk(
    p: &PoseMatrix,
    h: &HeadingLabels,
    cfg: &PipelineConfig,
) -> Result<(Vec<Segment>, Vec<Segment>), PreprocessError> {
    if p.stage() != Stage::Differenced {
        return Err(PreprocessError::WrongStage {
            expected: Stage::Differenced,
            got: p.stage(),
        });
    }
    if h.len() != p.rows() + 5 {
        return Err(PreprocessError::LabelLengthMismatch {
            labels: h.len(),
            expected: p.rows() + 5,
        });
    }
    cfg.validate()?;

    let row_label = |t: usize| h.0[t + 2];
    let mut front = Vec::new();
    let mut back = Vec::new();
    let mut run_start = 0usize;
    let mut t = 0usize;
    while t <= p.rows() {
        let run_ended = t == p.rows() || row_label(t) != row_label(run_start);
        if run_ended {
            let len = t - run_start;
            let dir = match row_label(run_start) {
                Heading::Front => Some(Direction::Front),
                Heading::Back => Some(Direction::Back),
                Heading::Turning => None,
            };
            if let Some(direction) = dir {
                if len >= cfg.min_segment_frames {
                    let cols = p.cols();
                    let mut data = Vec::with_capacity(len * cols);
                    for r in run_start..t {
                        data.extend_from_slice(p.row(r));
                    }
                    let seg = Segment {
                        direction,
                        data: PoseMatrix::from_rows(data, len, p.joint_set(), Stage::Differenced),
                        source_range: (run_start as u64, (t - 1 + 5) as u64),
                    };
                    match direction {
                        Direction::Front => front.push(seg),
                        Direction::Back => back.push(seg),
                    }
                }
            }
            run_start = t;
        }
        if t == p.rows() {
            break;
        }
        t += 1;
    }
    Ok((front, back))
}

/// Runs the whole preprocessing chain on one walk:
/// select → recenter → filter → differentiate → segment, with heading
/// labels computed from the raw walk before recentering (recentering
/// zeroes SpineBase, which carries the heading information).
pub fn preprocess_walk(
    w: &Walk,
    cfg: &PipelineConfig,
) -> Result<(Vec<Segment>, Vec<Segment>), PreprocessError> {
    let heading = detect_heading(w, cfg)?;
    let selected = select_significant_joints(w, cfg.joint_set)?;
    let recentred = recenter_on_spinebase(&selected)?;
    let filtered = gaussian_filter(&recentred, &cfg.filter_kernel)?;
    let differenced = differentiate(&filtered)?;
    let (front, back) = segment_walk(&differenced, &heading, cfg)?;
    if front.is_empty() && back.is_empty() {
        return Err(PreprocessError::NoSegments);
    }
    Ok((front, back))
}
