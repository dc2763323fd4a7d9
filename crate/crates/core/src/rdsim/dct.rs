//! Type-I discrete cosine transform on an endpoint-inclusive uniform
//! grid, built on a mirrored complex FFT.
//!
//! With `M` grid points `x_j = L j/(M-1)` the basis is
//! `cos(pi n j/(M-1))`, `n = 0..M-1`; the transform is its own inverse
//! up to scaling and represents no-flux data exactly.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct CosineTransform {
    m: usize,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl CosineTransform {
    pub fn new(m: usize) -> Self {
        assert!(m >= 2);
        let n = 2 * (m - 1);
        let fft = FftPlanner::new().plan_fft_forward(n);
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        Self {
            m,
            fft,
            buf: vec![Complex64::default(); n],
            scratch,
        }
    }

    /// Grid values -> cosine coefficients.
    pub fn forward(&mut self, f: &[f64], coeffs: &mut [f64]) {
        let m = self.m;
        debug_assert!(f.len() == m && coeffs.len() == m);
        let n = 2 * (m - 1);
        for j in 0..m {
            self.buf[j] = Complex64::new(f[j], 0.0);
        }
        for j in 1..m - 1 {
            self.buf[n - j] = Complex64::new(f[j], 0.0);
        }
        self.fft
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        let inv = 1.0 / (m - 1) as f64;
        coeffs[0] = 0.5 * self.buf[0].re * inv;
        for k in 1..m - 1 {
            coeffs[k] = self.buf[k].re * inv;
        }
        coeffs[m - 1] = 0.5 * self.buf[m - 1].re * inv;
    }

    /// Cosine coefficients -> grid values.
    pub fn inverse(&mut self, coeffs: &[f64], f: &mut [f64]) {
        let m = self.m;
        debug_assert!(f.len() == m && coeffs.len() == m);
        let n = 2 * (m - 1);
        self.buf[0] = Complex64::new(coeffs[0], 0.0);
        self.buf[m - 1] = Complex64::new(coeffs[m - 1], 0.0);
        for k in 1..m - 1 {
            let half = Complex64::new(0.5 * coeffs[k], 0.0);
            self.buf[k] = half;
            self.buf[n - k] = half;
        }
        self.fft
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        for j in 0..m {
            f[j] = self.buf[j].re;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identity() {
        let m = 65;
        let mut t = CosineTransform::new(m);
        let f: Vec<f64> = (0..m)
            .map(|j| {
                let x = std::f64::consts::PI * j as f64 / (m - 1) as f64;
                0.3 + 0.2 * (3.0 * x).cos() - 0.05 * (7.0 * x).cos()
            })
            .collect();
        let mut c = vec![0.0; m];
        let mut g = vec![0.0; m];
        t.forward(&f, &mut c);
        t.inverse(&c, &mut g);
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() < 1e-12);
        }
        // Pure-mode input lands on one coefficient.
        assert!((c[0] - 0.3).abs() < 1e-12);
        assert!((c[3] - 0.2).abs() < 1e-12);
        assert!((c[7] + 0.05).abs() < 1e-12);
        assert!(c[1].abs() < 1e-12 && c[5].abs() < 1e-12);
    }

    #[test]
    fn non_power_of_two_sizes_work() {
        // 2(m-1) prime-ish sizes go through the generic FFT path.
        for m in [64, 100, 128] {
            let mut t = CosineTransform::new(m);
            let f: Vec<f64> = (0..m).map(|j| (j as f64 * 0.1).sin().abs() + 0.5).collect();
            let mut c = vec![0.0; m];
            let mut g = vec![0.0; m];
            t.forward(&f, &mut c);
            t.inverse(&c, &mut g);
            for (a, b) in f.iter().zip(&g) {
                assert!((a - b).abs() < 1e-11);
            }
        }
    }
}
