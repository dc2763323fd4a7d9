//! Per-wavenumber linear analysis at the coexistence equilibrium.
//!
//! On `(0, l*pi)` with no-flux boundaries, the linearization decomposes
//! over the cosine modes `cos(n x / l)`, giving one quadratic
//! characteristic polynomial per mode:
//!
//! ```text
//! lambda^2 - T_n(r, l) lambda + D_n(r, l) = 0
//! T_n = a0 - (d1 + d2) n^2/l^2 - r
//! D_n = d2 (n^2/l^2)(d1 n^2/l^2 - a0) + r (d1 n^2/l^2 - a0 - b0)
//! ```
//!
//! The sign changes of `T_n` and `D_n` are organized by the critical
//! curves `r_n^H(l)` (oscillatory) and `r_n^T(l)` (steady-state).

use crate::error::{Error, Result};
use crate::kinetics::{self, ModelParams};
use crate::report::fmt_g17;
use num_complex::Complex64;
use std::io::Write;

/// Marginality tolerance on `|r - r_critical|` used by the default
/// stability verdict; exact-boundary detection at double precision.
pub const MARGINAL_TOL: f64 = 1e-9;

/// The four numbers the per-mode analysis depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearData {
    pub a0: f64,
    pub b0: f64,
    pub d1: f64,
    pub d2: f64,
}

impl LinearData {
    pub fn new(a: f64, b: f64, d1: f64, d2: f64) -> Self {
        // r, l do not enter a0, b0; placeholders satisfy validation.
        let p = ModelParams::new_unchecked(a, b, d1, d2, 1.0, 1.0);
        let lin = kinetics::linearize(&p);
        Self {
            a0: lin.a0,
            b0: lin.b0,
            d1,
            d2,
        }
    }

    pub fn from_params(params: &ModelParams) -> Self {
        Self::new(params.a, params.b, params.d1, params.d2)
    }

    /// `g1(x) = d2 x (a0 - d1 x) / (d1 x - a0 - b0)`, so that
    /// `r_n^T(l) = g1(n^2/l^2)`.
    pub fn g1(&self, x: f64) -> f64 {
        self.d2 * x * (self.a0 - self.d1 * x) / (self.d1 * x - self.a0 - self.b0)
    }

    /// `g2(x) = a0 - (d1 + d2) x`, so that `r_n^H(l) = g2(n^2/l^2)`.
    pub fn g2(&self, x: f64) -> f64 {
        self.a0 - (self.d1 + self.d2) * x
    }
}

/// Trace/determinant pair of the mode-`n` characteristic quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeQuadratic {
    pub n: u32,
    pub tn: f64,
    pub dn: f64,
}

pub fn mode_quadratic(params: &ModelParams, n: u32) -> ModeQuadratic {
    let ld = LinearData::from_params(params);
    let x = (n as f64 / params.l).powi(2);
    ModeQuadratic {
        n,
        tn: ld.a0 - (ld.d1 + ld.d2) * x - params.r,
        dn: ld.d2 * x * (ld.d1 * x - ld.a0) + params.r * (ld.d1 * x - ld.a0 - ld.b0),
    }
}

/// Eigenvalue pair of one mode, ordered by descending real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEigenvalues {
    pub n: u32,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
}

impl ModeEigenvalues {
    pub fn max_re(&self) -> f64 {
        self.lambda_plus.re.max(self.lambda_minus.re)
    }
}

/// Roots of `lambda^2 - t lambda + d = 0` via a cancellation-free
/// quadratic formula.
pub fn quadratic_roots(t: f64, d: f64) -> (Complex64, Complex64) {
    let disc = t * t - 4.0 * d;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // Avoid subtracting nearly equal quantities.
        let big = 0.5 * (t + t.signum() * s);
        let (r1, r2) = if big == 0.0 {
            (0.5 * (t + s), 0.5 * (t - s))
        } else {
            (big, d / big)
        };
        let (hi, lo) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
        (Complex64::new(hi, 0.0), Complex64::new(lo, 0.0))
    } else {
        let w = 0.5 * (-disc).sqrt();
        (Complex64::new(0.5 * t, w), Complex64::new(0.5 * t, -w))
    }
}

pub fn mode_eigenvalues(params: &ModelParams, n: u32) -> ModeEigenvalues {
    let q = mode_quadratic(params, n);
    let (lambda_plus, lambda_minus) = quadratic_roots(q.tn, q.dn);
    ModeEigenvalues {
        n,
        lambda_plus,
        lambda_minus,
    }
}

/// Oscillatory critical curve `r_n^H(l) = a0 - (d1 + d2) n^2/l^2`.
/// May be negative; callers filter.
pub fn hopf_curve(ld: &LinearData, n: u32, l: f64) -> f64 {
    ld.g2((n as f64 / l).powi(2))
}

/// Steady-state critical curve `r_n^T(l) = g1(n^2/l^2)`.
///
/// The denominator `d1 n^2/l^2 - a0 - b0` cannot vanish when
/// `a0 + b0 < 0` (which holds identically here), but the guard stays.
pub fn turing_curve(ld: &LinearData, n: u32, l: f64) -> Result<f64> {
    let x = (n as f64 / l).powi(2);
    let den = ld.d1 * x - ld.a0 - ld.b0;
    if den == 0.0 {
        return Err(Error::DenominatorZero("turing_curve"));
    }
    Ok(ld.g1(x))
}

/// Largest `n` with `l_n^T < l`, i.e. the number of modes whose
/// steady-state curve is positive at this domain scale.
pub fn n2_count(ld: &LinearData, l: f64) -> u32 {
    if ld.a0 <= 0.0 {
        return 0;
    }
    let x = l * (ld.a0 / ld.d1).sqrt();
    (x.ceil() - 1.0).max(0.0) as u32
}

/// Scan cap: beyond this index both `T_n < 0` and `D_n > 0` hold for
/// every `r > 0`, so no instability witness is missed.
pub fn n_cap(ld: &LinearData, l: f64) -> u32 {
    let a0p = ld.a0.max(0.0);
    let c1 = (l * (a0p / ld.d1).sqrt()).ceil();
    let c2 = (l * ((a0p + ld.b0.abs()) / ld.d1).sqrt()).ceil();
    (c1 + c2) as u32 + 8
}

/// Relative tie tolerance for the arg-max mode set of `r_*`.
const R_STAR_TIE_TOL: f64 = 1e-11;

/// Maximum of the steady-state curves together with its arg-max set
/// (more than one mode when two curves are tied, the degenerate
/// steady-state/steady-state coincidence).
#[derive(Debug, Clone, PartialEq)]
pub struct RStar {
    pub value: f64,
    pub modes: Vec<u32>,
}

pub fn r_star(ld: &LinearData, l: f64) -> RStar {
    if ld.a0 <= 0.0 || l <= (ld.d1 / ld.a0).sqrt() {
        return RStar {
            value: 0.0,
            modes: Vec::new(),
        };
    }
    let n2 = n2_count(ld, l);
    let mut best = f64::NEG_INFINITY;
    let mut vals = Vec::with_capacity(n2 as usize);
    for n in 1..=n2 {
        let v = ld.g1((n as f64 / l).powi(2));
        if v > best {
            best = v;
        }
        vals.push((n, v));
    }
    let tol = R_STAR_TIE_TOL * best.abs().max(1.0);
    let modes = vals
        .into_iter()
        .filter(|(_, v)| (best - v).abs() <= tol)
        .map(|(n, _)| n)
        .collect();
    RStar { value: best, modes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

/// Verdict plus the modes that witness non-negative spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub status: Stability,
    pub witnesses: Vec<u32>,
    /// Max over scanned modes of the dominant eigenvalue real part.
    pub max_re_lambda: f64,
}

pub fn steady_state_stability(params: &ModelParams) -> StabilityVerdict {
    steady_state_stability_with_tol(params, MARGINAL_TOL)
}

pub fn steady_state_stability_with_tol(params: &ModelParams, tol: f64) -> StabilityVerdict {
    let ld = LinearData::from_params(params);
    let cap = n_cap(&ld, params.l);
    let max_re = (0..=cap)
        .map(|n| mode_eigenvalues(params, n).max_re())
        .fold(f64::NEG_INFINITY, f64::max);

    if ld.a0 <= 0.0 {
        return StabilityVerdict {
            status: Stability::Stable,
            witnesses: Vec::new(),
            max_re_lambda: max_re,
        };
    }

    let rc = ld.a0.max(r_star(&ld, params.l).value);
    let (status, slack) = if (params.r - rc).abs() < tol {
        (Stability::Marginal, tol)
    } else if params.r > rc {
        (Stability::Stable, 0.0)
    } else {
        (Stability::Unstable, 0.0)
    };

    let witnesses = match status {
        Stability::Stable => Vec::new(),
        _ => (0..=cap)
            .filter(|&n| {
                let q = mode_quadratic(params, n);
                q.tn >= -slack || q.dn <= slack
            })
            .collect(),
    };
    StabilityVerdict {
        status,
        witnesses,
        max_re_lambda: max_re,
    }
}

/// One sample of both critical curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: u32,
    pub l: f64,
    pub r_hopf: f64,
    pub r_turing: f64,
}

/// Uniform `l`-samples of `r_n^H` and `r_n^T` for `n = 0..=n_max`.
pub fn sample_curves(
    ld: &LinearData,
    n_max: u32,
    l_min: f64,
    l_max: f64,
    samples: usize,
) -> Vec<CurvePoint> {
    assert!(samples >= 2 && l_max > l_min && l_min > 0.0);
    let mut out = Vec::with_capacity((n_max as usize + 1) * samples);
    for n in 0..=n_max {
        for k in 0..samples {
            let l = l_min + (l_max - l_min) * k as f64 / (samples - 1) as f64;
            out.push(CurvePoint {
                n,
                l,
                r_hopf: hopf_curve(ld, n, l),
                r_turing: turing_curve(ld, n, l).unwrap_or(f64::NAN),
            });
        }
    }
    out
}

/// CSV with header `n,l,r_hopf,r_turing`, 17-significant-digit doubles,
/// LF line endings.
pub fn write_curve_csv<W: Write>(points: &[CurvePoint], w: &mut W) -> std::io::Result<()> {
    w.write_all(b"n,l,r_hopf,r_turing\n")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{}",
            p.n,
            fmt_g17(p.l),
            fmt_g17(p.r_hopf),
            fmt_g17(p.r_turing)
        )?;
    }
    Ok(())
}
