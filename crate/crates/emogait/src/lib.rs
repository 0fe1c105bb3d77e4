//! Gait-based emotion recognition from Kinect v2 skeleton streams.
//!
//! The pipeline turns a raw 25-joint frame stream into a fixed-width
//! walk descriptor and classifies it:
//!
//! 1. [`preprocess`]: joint selection, recentering on SpineBase,
//!    Gaussian smoothing, per-frame differencing and front/back
//!    segmentation,
//! 2. [`features`]: per-column main frequency and phase of every
//!    segment, averaged per direction and concatenated into a
//!    168-dimensional vector,
//! 3. [`classify`]: Gaussian naive Bayes or an SMO-trained linear SVM,
//!    evaluated with stratified k-fold cross-validation.
//!
//! [`synth`] generates deterministic synthetic walking corpora and
//! [`ingest`] defines the text formats used on disk.
//!
//! ```
//! use emogait::preprocess::{preprocess_walk, PipelineConfig};
//! use emogait::features::{walk_features, MissingSidePolicy, PhaseMean};
//! use emogait::synth::{generate_walk, GaitParams, PathDirection, PathLeg};
//! use emogait::skeleton::EmotionLabel;
//!
//! let params = GaitParams {
//!     stride_freq: 1.8,
//!     arm_amp: 0.12,
//!     leg_amp: 0.15,
//!     torso_sway: 0.03,
//!     walk_speed: 1.2,
//!     phase_jitter: 0.0,
//!     noise_std: 0.0,
//!     extremity_noise_std: 0.0,
//!     path: vec![
//!         PathLeg { direction: PathDirection::TowardCamera, seconds: 6.0 },
//!         PathLeg { direction: PathDirection::AwayFromCamera, seconds: 6.0 },
//!     ],
//!     seed: 7,
//! };
//! let walk = generate_walk(&params, EmotionLabel::Natural, "demo", "s1", "kinect1")?;
//!
//! let (front, back) = preprocess_walk(&walk, &PipelineConfig::default())?;
//! let features = walk_features(
//!     &front,
//!     &back,
//!     walk.sample_rate,
//!     MissingSidePolicy::Reject,
//!     PhaseMean::Arithmetic,
//! )?;
//! assert_eq!(features.values.len(), 168);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod classify;
pub mod features;
pub mod ingest;
pub mod preprocess;
pub mod skeleton;
pub mod synth;
