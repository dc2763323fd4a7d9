//! Real roots of low-degree real polynomials on an interval, via
//! companion-matrix eigenvalues plus a Newton polish. Robust against
//! close roots where naive bisection bracketing fails.

use nalgebra::DMatrix;

/// Horner evaluation of `c[0] + c[1] x + ... + c[n] x^n` and its derivative.
pub fn eval_with_derivative(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Real roots inside `[lo, hi]`, ascending coefficient order, sorted and
/// deduplicated. Eigenvalues with `|Im| <= im_tol * scale` count as real.
pub fn real_roots_in(coeffs: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    const IM_TOL: f64 = 1e-8;
    const DEDUP_TOL: f64 = 1e-9;

    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    // Trim a (near-)vanishing leading coefficient.
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    let coeffs = &coeffs[..=deg];

    let mut roots = match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        _ => {
            let lead = coeffs[deg];
            let mut m = DMatrix::<f64>::zeros(deg, deg);
            for i in 1..deg {
                m[(i, i - 1)] = 1.0;
            }
            for i in 0..deg {
                m[(i, deg - 1)] = -coeffs[i] / lead;
            }
            let eigs = m.complex_eigenvalues();
            let mag = eigs.iter().fold(1.0f64, |acc, e| acc.max(e.norm()));
            eigs.iter()
                .filter(|e| e.im.abs() <= IM_TOL * mag)
                .map(|e| e.re)
                .collect()
        }
    };

    // Newton polish; companion eigenvalues carry O(cond) rounding.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(coeffs, *r);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }

    roots.retain(|r| r.is_finite() && *r >= lo && *r <= hi);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= DEDUP_TOL * a.abs().max(1.0));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots_found() {
        // (x - 1)(x - 3) = x^2 - 4x + 3
        let r = real_roots_in(&[3.0, -4.0, 1.0], 0.0, 10.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn window_filters_roots() {
        let r = real_roots_in(&[3.0, -4.0, 1.0], 2.0, 10.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_rejected() {
        // x^2 + 1
        assert!(real_roots_in(&[1.0, 0.0, 1.0], -10.0, 10.0).is_empty());
    }

    #[test]
    fn near_double_root() {
        // (x - 2)^2 + tiny perturbation
        let eps = 1e-12;
        let r = real_roots_in(&[4.0 - eps, -4.0, 1.0], 0.0, 10.0);
        assert!(!r.is_empty());
        for root in &r {
            assert!((root - 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn degenerate_leading_coefficient() {
        // 0*x^2 + 2x - 4
        let r = real_roots_in(&[-4.0, 2.0, 0.0], 0.0, 10.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-14);
    }
}
