//! SplitMix64 pseudo-random generator and complex Gaussian sampling.
//!
//! The generator is fixed so that instances are reproducible bit-for-bit
//! across platforms and implementations:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! Uniforms take the top 53 bits of an output. A standard complex normal
//! `(g1 + i g2) / sqrt(2)` is drawn by one Box-Muller step from two uniforms
//! `u1 ∈ (0, 1]` and `u2 ∈ [0, 1)`: radius `sqrt(-2 ln u1)`, angle `2π u2`.
//! Transcendentals come from `libm`, which is deterministic across targets.

use alloc::vec::Vec;

use crate::matrix::{Matrix, C64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard complex Gaussian: independent real and imaginary parts with
    /// variance 1/2 each.
    pub fn complex_normal(&mut self) -> C64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        let s = core::f64::consts::FRAC_1_SQRT_2;
        C64::new(radius * libm::cos(theta) * s, radius * libm::sin(theta) * s)
    }

    /// Row-major matrix of independent standard complex Gaussians.
    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn gaussian_vector(&mut self, len: usize) -> Vec<C64> {
        (0..len).map(|_| self.complex_normal()).collect()
    }
}
