//! Fourier gait features: per-column main frequency and phase of each
//! segment, per-direction averaging, and the combined walk descriptor.
//!
//! ```
//! use emogait::features::main_frequency_phase;
//! use std::f64::consts::PI;
//!
//! let rate = 30.0;
//! let signal: Vec<f64> = (0..60)
//!     .map(|t| (2.0 * PI * 3.0 * t as f64 / rate).sin())
//!     .collect();
//!
//! let (freq, phase) = main_frequency_phase(&signal, rate)?;
//! assert!((freq - 3.0).abs() < 1e-9);
//! assert!((phase + PI / 2.0).abs() < 1e-9);
//! # Ok::<(), emogait::features::FeatureError>(())
//! ```

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::skeleton::{Direction, Segment};

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("empty input sequence")]
    EmptyInput,
    #[error("sequence too short: {0} samples, need at least 2")]
    TooShort(usize),
    #[error("no segments for direction {0}")]
    EmptyDirection(Direction),
    #[error("walk has neither front nor back segments")]
    BothSidesEmpty,
    #[error("walk has no {0} segments and the policy rejects missing sides")]
    MissingSide(Direction),
}

/// How to combine phases when averaging features across segments.
/// `Arithmetic` is the default; `Circular` averages unit phasors instead
/// and is available behind this switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMean {
    #[default]
    Arithmetic,
    Circular,
}

/// What to do when a walk yields segments for only one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingSidePolicy {
    #[default]
    Reject,
    ZeroFill,
}

/// The walk descriptor: per-direction `[f_1..f_C, phi_1..phi_C]` blocks
/// (frequencies in Hz, phases in radians), front block first. Width is
/// `4 * cols`: 168 for the 14-joint pipeline, 300 for the 25-joint one.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    /// True when the corresponding side had no segments and was zero-filled.
    pub zero_filled_front: bool,
    pub zero_filled_back: bool,
}

/// Discrete Fourier transform, `X[k] = sum_n x[n] * exp(-2*pi*i*k*n/N)`.
pub fn dft(x: &[f64]) -> Result<Vec<Complex<f64>>, FeatureError> {
    if x.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    Ok(buf)
}

/// Largest-magnitude non-DC bin of the half-spectrum, reported as a
/// frequency in Hz and its phase in radians. Ties break toward the lower
/// bin. Returns `(0, 0)` when every candidate magnitude is below 1e-12
/// (all-zero or constant input).
pub fn main_frequency_phase(x: &[f64], sample_rate: f64) -> Result<(f64, f64), FeatureError> {
    let n = x.len();
    if n < 2 {
        return Err(FeatureError::TooShort(n));
    }
    let spectrum = dft(x)?;
    let mut best: Option<(usize, f64)> = None;
    for (k, bin) in spectrum.iter().enumerate().take(n / 2 + 1).skip(1) {
        let mag = bin.norm();
        if best.is_none_or(|(_, m)| mag > m) {
            best = Some((k, mag));
        }
    }
    match best {
        Some((k, mag)) if mag >= 1e-12 => {
            let f = k as f64 * sample_rate / n as f64;
            Ok((f, spectrum[k].arg()))
        }
        _ => Ok((0.0, 0.0)),
    }
}

/// Per-segment feature block: main frequency of every column, then the
/// corresponding phases. Length `2 * cols`.
pub fn segment_features(s: &Segment, sample_rate: f64) -> Result<Vec<f64>, FeatureError> {
    let cols = s.data.cols();
    let mut freqs = Vec::with_capacity(cols);
    let mut phases = Vec::with_capacity(cols);
    for j in 0..cols {
        let (f, phi) = main_frequency_phase(&s.data.column(j), sample_rate)?;
        freqs.push(f);
        phases.push(phi);
    }
    freqs.extend(phases);
    Ok(freqs)
}

/// Elementwise mean of `segment_features` over all segments of one
/// direction.
pub fn aggregate_direction(
    segs: &[Segment],
    sample_rate: f64,
    phase_mean: PhaseMean,
) -> Result<Vec<f64>, FeatureError> {
    let first = segs
        .first()
        .ok_or(FeatureError::EmptyDirection(Direction::Front))?;
    let cols = first.data.cols();
    let width = 2 * cols;
    let features: Vec<Vec<f64>> = segs
        .iter()
        .map(|s| segment_features(s, sample_rate))
        .collect::<Result<_, _>>()?;
    let n = features.len() as f64;
    let mut out = vec![0.0; width];
    for (j, slot) in out.iter_mut().enumerate().take(cols) {
        *slot = features.iter().map(|f| f[j]).sum::<f64>() / n;
    }
    for j in cols..width {
        out[j] = match phase_mean {
            PhaseMean::Arithmetic => features.iter().map(|f| f[j]).sum::<f64>() / n,
            PhaseMean::Circular => {
                let (s, c) = features
                    .iter()
                    .fold((0.0, 0.0), |(s, c), f| (s + f[j].sin(), c + f[j].cos()));
                (s / n).atan2(c / n)
            }
        };
    }
    Ok(out)
}

/// Combines the per-direction means into the walk descriptor, front block
/// first. A side without segments is handled per `policy`.
pub fn walk_features(
    front: &[Segment],
    back: &[Segment],
    sample_rate: f64,
    policy: MissingSidePolicy,
    phase_mean: PhaseMean,
) -> Result<FeatureVector, FeatureError> {
    if front.is_empty() && back.is_empty() {
        return Err(FeatureError::BothSidesEmpty);
    }
    let cols = front
        .first()
        .or_else(|| back.first())
        .map(|s| s.data.cols())
        .unwrap();
    let half = 2 * cols;

    let side = |segs: &[Segment], dir: Direction| -> Result<(Vec<f64>, bool), FeatureError> {
        if segs.is_empty() {
            match policy {
                MissingSidePolicy::Reject => Err(FeatureError::MissingSide(dir)),
                MissingSidePolicy::ZeroFill => Ok((vec![0.0; half], true)),
            }
        } else {
            Ok((aggregate_direction(segs, sample_rate, phase_mean)?, false))
        }
    };

    let (front_vals, zero_front) = side(front, Direction::Front)?;
    let (back_vals, zero_back) = side(back, Direction::Back)?;
    let mut values = front_vals;
    values.extend(back_vals);
    Ok(FeatureVector {
        values,
        zero_filled_front: zero_front,
        zero_filled_back: zero_back,
    })
}
