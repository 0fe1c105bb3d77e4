//! Shared test helpers: the brute-force DFT oracle and synthetic corpus
//! parameter presets.

use emogait::synth::{GaitParams, PathDirection, PathLeg};
use rustfft::num_complex::Complex;
use std::f64::consts::PI;

/// Direct O(N^2) summation, independent of the production transform.
pub fn dft_oracle(x: &[f64]) -> Vec<Complex<f64>> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex::new(0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let angle = -2.0 * PI * (k as f64) * (t as f64) / n as f64;
                acc += v * Complex::new(angle.cos(), angle.sin());
            }
            acc
        })
        .collect()
}

/// Small deterministic generator for test inputs.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

/// Out-and-back walk with the given stride frequency and noise level.
pub fn gait_params(stride_freq: f64, noise_std: f64, seed: u64) -> GaitParams {
    GaitParams {
        stride_freq,
        arm_amp: 0.12,
        leg_amp: 0.15,
        torso_sway: 0.03,
        walk_speed: 1.2,
        phase_jitter: 0.2,
        noise_std,
        extremity_noise_std: 0.0,
        path: vec![
            PathLeg {
                direction: PathDirection::TowardCamera,
                seconds: 5.0,
            },
            PathLeg {
                direction: PathDirection::AwayFromCamera,
                seconds: 5.0,
            },
        ],
        seed,
    }
}
