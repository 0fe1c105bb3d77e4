//! Domain types for skeleton recordings: the Kinect v2 joint taxonomy,
//! frames, labeled walks, pose matrices and walk segments.

use std::fmt;
use std::str::FromStr;

/// The 25 Kinect v2 body joints in canonical SDK index order (0–24).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum JointId {
    SpineBase = 0,
    SpineMid,
    Neck,
    Head,
    ShoulderLeft,
    ElbowLeft,
    WristLeft,
    HandLeft,
    ShoulderRight,
    ElbowRight,
    WristRight,
    HandRight,
    HipLeft,
    KneeLeft,
    AnkleLeft,
    FootLeft,
    HipRight,
    KneeRight,
    AnkleRight,
    FootRight,
    SpineShoulder,
    HandTipLeft,
    ThumbLeft,
    HandTipRight,
    ThumbRight,
}

impl JointId {
    /// All 25 joints in canonical index order.
    pub const ALL: [JointId; 25] = [
        JointId::SpineBase,
        JointId::SpineMid,
        JointId::Neck,
        JointId::Head,
        JointId::ShoulderLeft,
        JointId::ElbowLeft,
        JointId::WristLeft,
        JointId::HandLeft,
        JointId::ShoulderRight,
        JointId::ElbowRight,
        JointId::WristRight,
        JointId::HandRight,
        JointId::HipLeft,
        JointId::KneeLeft,
        JointId::AnkleLeft,
        JointId::FootLeft,
        JointId::HipRight,
        JointId::KneeRight,
        JointId::AnkleRight,
        JointId::FootRight,
        JointId::SpineShoulder,
        JointId::HandTipLeft,
        JointId::ThumbLeft,
        JointId::HandTipRight,
        JointId::ThumbRight,
    ];

    /// The 14 gait-significant joints, in the fixed order used for pose
    /// matrix columns. SpineBase is first so that its coordinates occupy
    /// the leading three columns.
    pub const SIGNIFICANT_14: [JointId; 14] = [
        JointId::SpineBase,
        JointId::Neck,
        JointId::ShoulderLeft,
        JointId::ShoulderRight,
        JointId::ElbowLeft,
        JointId::ElbowRight,
        JointId::WristLeft,
        JointId::WristRight,
        JointId::HipLeft,
        JointId::HipRight,
        JointId::KneeLeft,
        JointId::KneeRight,
        JointId::AnkleLeft,
        JointId::AnkleRight,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<JointId> {
        JointId::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            JointId::SpineBase => "SpineBase",
            JointId::SpineMid => "SpineMid",
            JointId::Neck => "Neck",
            JointId::Head => "Head",
            JointId::ShoulderLeft => "ShoulderLeft",
            JointId::ElbowLeft => "ElbowLeft",
            JointId::WristLeft => "WristLeft",
            JointId::HandLeft => "HandLeft",
            JointId::ShoulderRight => "ShoulderRight",
            JointId::ElbowRight => "ElbowRight",
            JointId::WristRight => "WristRight",
            JointId::HandRight => "HandRight",
            JointId::HipLeft => "HipLeft",
            JointId::KneeLeft => "KneeLeft",
            JointId::AnkleLeft => "AnkleLeft",
            JointId::FootLeft => "FootLeft",
            JointId::HipRight => "HipRight",
            JointId::KneeRight => "KneeRight",
            JointId::AnkleRight => "AnkleRight",
            JointId::FootRight => "FootRight",
            JointId::SpineShoulder => "SpineShoulder",
            JointId::HandTipLeft => "HandTipLeft",
            JointId::ThumbLeft => "ThumbLeft",
            JointId::HandTipRight => "HandTipRight",
            JointId::ThumbRight => "ThumbRight",
        }
    }

    pub fn from_name(s: &str) -> Option<JointId> {
        JointId::ALL.iter().copied().find(|j| j.name() == s)
    }
}

/// Emotional state under which a walk was recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EmotionLabel {
    Natural,
    Angry,
    Happy,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 3] = [
        EmotionLabel::Natural,
        EmotionLabel::Angry,
        EmotionLabel::Happy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Natural => "natural",
            EmotionLabel::Angry => "angry",
            EmotionLabel::Happy => "happy",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(EmotionLabel::Natural),
            "angry" => Ok(EmotionLabel::Angry),
            "happy" => Ok(EmotionLabel::Happy),
            other => Err(format!("unknown emotion label: {other:?}")),
        }
    }
}

/// One captured skeleton frame: 25 joint positions in the camera
/// coordinate system (meters; z is the distance from the camera).
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub frame_index: u64,
    /// Seconds since recording start.
    pub timestamp: f64,
    /// `(x, y, z)` per joint, canonical joint order. A valid frame has
    /// exactly 25 entries; `validate_walk` reports any deviation.
    pub positions: Vec<[f64; 3]>,
}

impl Frame {
    pub fn position(&self, joint: JointId) -> [f64; 3] {
        self.positions[joint.index()]
    }
}

/// One labeled recording of one subject walking: an ordered frame stream
/// plus identity and capture metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub walk_id: String,
    pub subject_id: String,
    pub camera_id: String,
    pub label: EmotionLabel,
    /// Capture rate in Hz; the pipeline assumes uniform sampling.
    pub sample_rate: f64,
    pub frames: Vec<Frame>,
}

/// Reports every invariant violation in `w`. An empty list means the walk
/// is valid. Violations are data, not failures: downstream stages are free
/// to decide what to do with an invalid walk.
pub fn validate_walk(w: &Walk) -> Vec<String> {
    let mut violations = Vec::new();
    if w.frames.is_empty() {
        violations.push("walk has no frames".to_string());
    }
    if w.sample_rate <= 0.0 || w.sample_rate.is_nan() {
        violations.push(format!(
            "sample_rate must be positive, got {}",
            w.sample_rate
        ));
    }
    for (i, frame) in w.frames.iter().enumerate() {
        if frame.positions.len() != 25 {
            violations.push(format!(
                "frame {i}: expected 25 joints, got {}",
                frame.positions.len()
            ));
        }
        for (j, p) in frame.positions.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                violations.push(format!("frame {i}: joint {j} has non-finite coordinate"));
            }
        }
        if i > 0 && frame.frame_index <= w.frames[i - 1].frame_index {
            violations.push("frame_index not strictly increasing".to_string());
            break;
        }
    }
    // Irregular timestamps are a warning; the pipeline does not resample.
    if w.frames.len() >= 3 && w.sample_rate > 0.0 {
        let dt = 1.0 / w.sample_rate;
        let irregular = w
            .frames
            .windows(2)
            .any(|p| ((p[1].timestamp - p[0].timestamp) - dt).abs() > 0.05 * dt);
        if irregular {
            violations.push(format!(
                "irregular timestamps: sampling deviates from uniform {} Hz",
                w.sample_rate
            ));
        }
    }
    violations
}

/// Which joint subset populates the pose matrix columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointSet {
    Significant14,
    All25,
}

impl JointSet {
    pub fn joints(self) -> &'static [JointId] {
        match self {
            JointSet::Significant14 => &JointId::SIGNIFICANT_14,
            JointSet::All25 => &JointId::ALL,
        }
    }

    pub fn joint_count(self) -> usize {
        self.joints().len()
    }

    /// Columns of the resulting pose matrix: three per joint.
    pub fn cols(self) -> usize {
        3 * self.joint_count()
    }
}

/// Pipeline position of a pose matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Selected,
    Recentred,
    Filtered,
    Differenced,
}

/// T×(3·|joint_set|) matrix of selected joint coordinates, joint-major
/// per row: `[x1, y1, z1, x2, y2, z2, ...]` with SpineBase in the first
/// three columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    joint_set: JointSet,
    stage: Stage,
}

impl PoseMatrix {
    pub fn from_rows(data: Vec<f64>, rows: usize, joint_set: JointSet, stage: Stage) -> PoseMatrix {
        let cols = joint_set.cols();
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        PoseMatrix {
            data,
            rows,
            cols,
            joint_set,
            stage,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn joint_set(&self) -> JointSet {
        self.joint_set
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.cols..(t + 1) * self.cols]
    }

    pub fn get(&self, t: usize, j: usize) -> f64 {
        self.data[t * self.cols + j]
    }

    /// One coordinate column as an owned series.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|t| self.get(t, j)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Travel direction of a straight-walking stretch relative to the camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Front,
    Back,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Front => "front",
            Direction::Back => "back",
        })
    }
}

/// A direction-uniform contiguous slice of a differenced pose matrix with
/// at least `min_segment_frames` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub direction: Direction,
    /// Stage is always `Differenced`.
    pub data: PoseMatrix,
    /// Inclusive range of original walk frame offsets this segment covers.
    pub source_range: (u64, u64),
}
