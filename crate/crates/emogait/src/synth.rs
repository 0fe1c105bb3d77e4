//! Deterministic synthetic walking-sequence generator: a sinusoidal
//! stick figure with controllable stride frequency, limb amplitudes,
//! footpath legs and seeded noise. Stands in for real captures in tests
//! and demos.
//!
//! ```
//! use emogait::skeleton::EmotionLabel;
//! use emogait::synth::{generate_walk, GaitParams, PathDirection, PathLeg, SAMPLE_RATE};
//!
//! let params = GaitParams {
//!     stride_freq: 2.0,
//!     arm_amp: 0.12,
//!     leg_amp: 0.15,
//!     torso_sway: 0.03,
//!     walk_speed: 1.2,
//!     phase_jitter: 0.0,
//!     noise_std: 0.0,
//!     extremity_noise_std: 0.0,
//!     path: vec![
//!         PathLeg { direction: PathDirection::TowardCamera, seconds: 3.0 },
//!         PathLeg { direction: PathDirection::AwayFromCamera, seconds: 3.0 },
//!     ],
//!     seed: 1,
//! };
//!
//! // Two 3-second legs plus a 1-second turn between them.
//! let walk = generate_walk(&params, EmotionLabel::Happy, "w0", "s0", "kinect1")?;
//! assert_eq!(walk.sample_rate, SAMPLE_RATE);
//! assert_eq!(walk.frames.len(), 210);
//! # Ok::<(), emogait::synth::SynthError>(())
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::Path;
use thiserror::Error;

use crate::ingest::{self, IngestError, Manifest, ManifestEntry};
use crate::skeleton::{EmotionLabel, Frame, JointId, Walk};

pub const SAMPLE_RATE: f64 = 30.0;

/// Seconds spent turning in place between consecutive footpath legs.
const TURN_SECONDS: f64 = 1.0;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid gait params: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

/// Travel direction of one footpath leg relative to the camera.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathDirection {
    TowardCamera,
    AwayFromCamera,
}

/// One straight stretch of the footpath.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PathLeg {
    pub direction: PathDirection,
    pub seconds: f64,
}

/// Kinematic and noise parameters of one synthetic walk.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GaitParams {
    /// Full gait cycles per second; must lie in (0.5, 4).
    pub stride_freq: f64,
    /// Arm swing amplitude in meters.
    pub arm_amp: f64,
    /// Leg swing amplitude in meters.
    pub leg_amp: f64,
    /// Lateral torso sway amplitude in meters.
    pub torso_sway: f64,
    /// Translation speed along the camera axis in m/s.
    pub walk_speed: f64,
    /// Std of the per-joint random phase offset in radians.
    #[serde(default)]
    pub phase_jitter: f64,
    /// Std of isotropic Gaussian position noise in meters, all joints.
    #[serde(default)]
    pub noise_std: f64,
    /// Extra position noise applied only to the 11 joints outside the
    /// gait-significant set (head, hands, feet, spine mid/shoulder).
    #[serde(default)]
    pub extremity_noise_std: f64,
    /// Footpath legs walked in order, separated by turn gaps.
    pub path: Vec<PathLeg>,
    #[serde(default)]
    pub seed: u64,
}

impl GaitParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if !(self.stride_freq > 0.5 && self.stride_freq < 4.0) {
            return Err(SynthError::InvalidParams(format!(
                "stride_freq must lie in (0.5, 4), got {}",
                self.stride_freq
            )));
        }
        for (name, v) in [
            ("arm_amp", self.arm_amp),
            ("leg_amp", self.leg_amp),
            ("torso_sway", self.torso_sway),
            ("noise_std", self.noise_std),
            ("extremity_noise_std", self.extremity_noise_std),
            ("phase_jitter", self.phase_jitter),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(SynthError::InvalidParams(format!(
                    "{name} must be >= 0, got {v}"
                )));
            }
        }
        if self.walk_speed <= 0.0 {
            return Err(SynthError::InvalidParams(
                "walk_speed must be positive".into(),
            ));
        }
        if self.path.is_empty() || self.path.iter().any(|l| l.seconds <= 0.0) {
            return Err(SynthError::InvalidParams(
                "path must contain at least one leg of positive duration".into(),
            ));
        }
        Ok(())
    }

    /// Total walk duration including the turn gaps between legs.
    pub fn total_duration(&self) -> f64 {
        let legs: f64 = self.path.iter().map(|l| l.seconds).sum();
        legs + TURN_SECONDS * (self.path.len().saturating_sub(1)) as f64
    }
}

/// Rest-pose offset of every joint relative to SpineBase, in meters.
/// A rough standing figure: y is up, x is lateral, z is depth.
fn rest_offset(joint: JointId) -> [f64; 3] {
    match joint {
        JointId::SpineBase => [0.0, 0.0, 0.0],
        JointId::SpineMid => [0.0, 0.25, 0.0],
        JointId::SpineShoulder => [0.0, 0.45, 0.0],
        JointId::Neck => [0.0, 0.52, 0.0],
        JointId::Head => [0.0, 0.65, 0.0],
        JointId::ShoulderLeft => [-0.18, 0.45, 0.0],
        JointId::ElbowLeft => [-0.22, 0.20, 0.0],
        JointId::WristLeft => [-0.24, -0.02, 0.0],
        JointId::HandLeft => [-0.25, -0.08, 0.0],
        JointId::HandTipLeft => [-0.25, -0.14, 0.0],
        JointId::ThumbLeft => [-0.22, -0.10, 0.0],
        JointId::ShoulderRight => [0.18, 0.45, 0.0],
        JointId::ElbowRight => [0.22, 0.20, 0.0],
        JointId::WristRight => [0.24, -0.02, 0.0],
        JointId::HandRight => [0.25, -0.08, 0.0],
        JointId::HandTipRight => [0.25, -0.14, 0.0],
        JointId::ThumbRight => [0.22, -0.10, 0.0],
        JointId::HipLeft => [-0.09, -0.05, 0.0],
        JointId::KneeLeft => [-0.10, -0.45, 0.0],
        JointId::AnkleLeft => [-0.10, -0.85, 0.0],
        JointId::FootLeft => [-0.10, -0.90, 0.08],
        JointId::HipRight => [0.09, -0.05, 0.0],
        JointId::KneeRight => [0.10, -0.45, 0.0],
        JointId::AnkleRight => [0.10, -0.85, 0.0],
        JointId::FootRight => [0.10, -0.90, 0.08],
    }
}

/// Oscillation gain and phase class of each joint: legs swing at the
/// stride frequency, left/right in antiphase; arms swing contralaterally.
fn swing(joint: JointId, arm_amp: f64, leg_amp: f64) -> (f64, f64) {
    match joint {
        JointId::KneeLeft | JointId::AnkleLeft | JointId::FootLeft => (leg_amp, 0.0),
        JointId::KneeRight | JointId::AnkleRight | JointId::FootRight => (leg_amp, PI),
        JointId::HipLeft => (0.25 * leg_amp, 0.0),
        JointId::HipRight => (0.25 * leg_amp, PI),
        JointId::ElbowLeft
        | JointId::WristLeft
        | JointId::HandLeft
        | JointId::HandTipLeft
        | JointId::ThumbLeft => (arm_amp, PI),
        JointId::ElbowRight
        | JointId::WristRight
        | JointId::HandRight
        | JointId::HandTipRight
        | JointId::ThumbRight => (arm_amp, 0.0),
        JointId::ShoulderLeft => (0.3 * arm_amp, PI),
        JointId::ShoulderRight => (0.3 * arm_amp, 0.0),
        _ => (0.0, 0.0),
    }
}

const NON_SIGNIFICANT: [JointId; 11] = [
    JointId::SpineMid,
    JointId::Head,
    JointId::HandLeft,
    JointId::HandRight,
    JointId::FootLeft,
    JointId::FootRight,
    JointId::SpineShoulder,
    JointId::HandTipLeft,
    JointId::ThumbLeft,
    JointId::HandTipRight,
    JointId::ThumbRight,
];

/// Generates one 30 Hz walk. SpineBase translates along the camera axis
/// per footpath leg with one-second near-stationary turn gaps between
/// legs; limb joints oscillate sinusoidally at the stride frequency.
/// Bit-identical output for identical `(params, label, ids)`.
pub fn generate_walk(
    p: &GaitParams,
    label: EmotionLabel,
    walk_id: &str,
    subject_id: &str,
    camera_id: &str,
) -> Result<Walk, SynthError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let jitter = Normal::new(0.0, p.phase_jitter.max(f64::MIN_POSITIVE)).unwrap();
    let joint_phase: Vec<f64> = JointId::ALL
        .iter()
        .map(|_| {
            if p.phase_jitter > 0.0 {
                jitter.sample(&mut rng)
            } else {
                0.0
            }
        })
        .collect();
    let noise = Normal::new(0.0, 1.0).unwrap();

    // Piecewise-linear z trajectory of SpineBase over time.
    let dt = 1.0 / SAMPLE_RATE;
    let total_frames = (p.total_duration() * SAMPLE_RATE).round() as usize;
    let mut z_path = Vec::with_capacity(total_frames);
    let mut z = 6.0;
    for (i, leg) in p.path.iter().enumerate() {
        let dir = match leg.direction {
            PathDirection::TowardCamera => -1.0,
            PathDirection::AwayFromCamera => 1.0,
        };
        let frames = (leg.seconds * SAMPLE_RATE).round() as usize;
        for _ in 0..frames {
            z_path.push(z);
            z += dir * p.walk_speed * dt;
        }
        if i + 1 < p.path.len() {
            for _ in 0..(TURN_SECONDS * SAMPLE_RATE).round() as usize {
                z_path.push(z);
            }
        }
    }

    let mut frames = Vec::with_capacity(z_path.len());
    for (t, &base_z) in z_path.iter().enumerate() {
        let time = t as f64 * dt;
        let theta = 2.0 * PI * p.stride_freq * time;
        let sway = p.torso_sway * (theta / 2.0).sin();
        let base = [0.6 + sway, 0.9, base_z];
        let mut positions = Vec::with_capacity(25);
        for (ji, &joint) in JointId::ALL.iter().enumerate() {
            let off = rest_offset(joint);
            let (amp, phase) = swing(joint, p.arm_amp, p.leg_amp);
            let osc = amp * (theta + phase + joint_phase[ji]).sin();
            let mut pos = [
                base[0] + off[0],
                base[1] + off[1] + 0.1 * osc.abs(),
                base[2] + off[2] + osc,
            ];
            let mut sigma = p.noise_std;
            if NON_SIGNIFICANT.contains(&joint) {
                sigma = (sigma * sigma + p.extremity_noise_std * p.extremity_noise_std).sqrt();
            }
            if sigma > 0.0 {
                for c in &mut pos {
                    *c += sigma * noise.sample(&mut rng);
                }
            }
            positions.push(pos);
        }
        frames.push(Frame {
            frame_index: t as u64,
            timestamp: time,
            positions,
        });
    }

    Ok(Walk {
        walk_id: walk_id.to_string(),
        subject_id: subject_id.to_string(),
        camera_id: camera_id.to_string(),
        label,
        sample_rate: SAMPLE_RATE,
        frames,
    })
}

/// Per-walk seed derivation: splitmix-style mixing of the corpus seed and
/// the walk index so every walk gets an independent stream.
pub fn derive_seed(corpus_seed: u64, index: u64) -> u64 {
    let mut x = corpus_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generates `n_per_class` walks for each of two parameterized classes,
/// entirely in memory. Walk seeds are derived from `seed` per index.
pub fn generate_walks(
    class_a: (&GaitParams, EmotionLabel),
    class_b: (&GaitParams, EmotionLabel),
    n_per_class: usize,
    seed: u64,
) -> Result<Vec<Walk>, SynthError> {
    if n_per_class < 2 {
        return Err(SynthError::InvalidParams(format!(
            "n_per_class must be at least 2, got {n_per_class}"
        )));
    }
    let mut walks = Vec::with_capacity(2 * n_per_class);
    for (class_no, (params, label)) in [class_a, class_b].into_iter().enumerate() {
        for i in 0..n_per_class {
            let index = (class_no * n_per_class + i) as u64;
            let p = GaitParams {
                seed: derive_seed(seed, index),
                ..params.clone()
            };
            let walk_id = format!("{}_{i:03}", label.as_str());
            walks.push(generate_walk(
                &p,
                label,
                &walk_id,
                &format!("subj{index:03}"),
                "kinect1",
            )?);
        }
    }
    Ok(walks)
}

/// Generates a corpus and writes it to `out_dir` in the frame CSV and
/// manifest formats: one `<walk_id>.csv` per walk plus `manifest.csv`.
pub fn generate_corpus(
    class_a: (&GaitParams, EmotionLabel),
    class_b: (&GaitParams, EmotionLabel),
    n_per_class: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<Manifest, SynthError> {
    let walks = generate_walks(class_a, class_b, n_per_class, seed)?;
    std::fs::create_dir_all(out_dir).map_err(IngestError::from)?;
    let mut entries = Vec::with_capacity(walks.len());
    for walk in &walks {
        let file_name = format!("{}.csv", walk.walk_id);
        ingest::write_frames_csv(&out_dir.join(&file_name), walk)?;
        entries.push(ManifestEntry {
            walk_id: walk.walk_id.clone(),
            file_path: file_name,
            subject_id: walk.subject_id.clone(),
            camera_id: walk.camera_id.clone(),
            label: walk.label,
        });
    }
    let manifest = Manifest { entries };
    ingest::write_manifest(&out_dir.join("manifest.csv"), &manifest)?;
    Ok(manifest)
}
