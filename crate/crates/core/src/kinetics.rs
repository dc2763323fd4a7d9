//! Dimensionless ratio-dependent Holling-Tanner kinetics.
//!
//! Reaction terms on the interval `(0, l*pi)`:
//!
//! ```text
//! f1(u, v) = u(1 - u) - a*u*v / (u + b)
//! f2(u, v) = r*v*(1 - v/u)
//! ```
//!
//! together with the coexistence equilibrium, the linearization and the
//! Taylor coefficients of the nonlinearity at that equilibrium.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dimensionless model parameters plus the domain scale `l`
/// (the spatial domain is the interval `(0, l*pi)`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Predation rate.
    pub a: f64,
    /// Half-saturation constant, `0 < b < 1`.
    pub b: f64,
    /// Prey diffusion coefficient.
    pub d1: f64,
    /// Predator diffusion coefficient.
    pub d2: f64,
    /// Birth ratio (predator over prey intrinsic growth).
    pub r: f64,
    /// Domain scale.
    pub l: f64,
}

impl ModelParams {
    /// Validating constructor; all downstream operations assume validity.
    pub fn new(a: f64, b: f64, d1: f64, d2: f64, r: f64, l: f64) -> Result<Self> {
        let p = Self { a, b, d1, d2, r, l };
        p.validate()?;
        Ok(p)
    }

    /// Skips validation. Test harness escape hatch (e.g. zero diffusion
    /// for kinetics-only integration checks); not for production use.
    pub fn new_unchecked(a: f64, b: f64, d1: f64, d2: f64, r: f64, l: f64) -> Self {
        Self { a, b, d1, d2, r, l }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("a", self.a),
            ("d1", self.d1),
            ("d2", self.d2),
            ("r", self.r),
            ("l", self.l),
        ];
        for (name, v) in pos {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "b must lie in (0, 1), got {}",
                self.b
            )));
        }
        Ok(())
    }

    /// Same kinetic parameters with a different `(r, l)` pair.
    pub fn with_rl(&self, r: f64, l: f64) -> Result<Self> {
        Self::new(self.a, self.b, self.d1, self.d2, r, l)
    }
}

/// Converts the dimensional model
/// `u' = r1 u (1 - u/k) - q u v/(u + m)`, `v' = r2 v (1 - v/(gamma u))`
/// with diffusivities `(cap_d1, cap_d2)` into dimensionless parameters.
/// The returned tuple is `(a, b, d1, d2, r)`; the domain scale is chosen
/// separately.
#[allow(clippy::too_many_arguments)]
pub fn nondimensionalize(
    r1: f64,
    r2: f64,
    k: f64,
    q: f64,
    m: f64,
    gamma: f64,
    cap_d1: f64,
    cap_d2: f64,
) -> Result<(f64, f64, f64, f64, f64)> {
    for (name, v) in [
        ("r1", r1),
        ("r2", r2),
        ("k", k),
        ("q", q),
        ("m", m),
        ("gamma", gamma),
        ("D1", cap_d1),
        ("D2", cap_d2),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be > 0, got {v}"
            )));
        }
    }
    if m >= k {
        return Err(Error::InvalidParameter(format!(
            "half-saturation m = {m} must be below the carrying capacity k = {k}"
        )));
    }
    Ok((q * gamma / r1, m / k, cap_d1 / r1, cap_d2 / r1, r2 / r1))
}

/// Coexistence steady state `(u0, v0)` with `u0 = v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub u0: f64,
    pub v0: f64,
}

impl Equilibrium {
    /// Residual of the defining polynomial `(u0 - 1)(u0 + b) + a*u0`.
    pub fn residual(&self, a: f64, b: f64) -> f64 {
        (self.u0 - 1.0) * (self.u0 + b) + a * self.u0
    }
}

/// Positive root of `(u - 1)(u + b) + a u = 0`; always lies in `(0, 1)`.
pub fn equilibrium(params: &ModelParams) -> Equilibrium {
    let (a, b) = (params.a, params.b);
    let u0 = 0.5 * ((1.0 - a - b) + ((a + b - 1.0).powi(2) + 4.0 * b).sqrt());
    Equilibrium { u0, v0: u0 }
}

/// The prey-only steady state `(1, 0)`. Always unstable; exposed for
/// completeness and excluded from the bifurcation machinery.
pub fn boundary_equilibrium() -> (f64, f64) {
    (1.0, 0.0)
}

/// Jacobian data of the kinetics at the coexistence equilibrium.
///
/// The Jacobian is `[[a0, b0], [r, -r]]` with closed forms
/// `a0 = u0 (1 - b - 2 u0)/(b + u0)` and `b0 = u0 - 1 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub a0: f64,
    pub b0: f64,
    pub jac: [[f64; 2]; 2],
}

pub fn linearize(params: &ModelParams) -> Linearization {
    let eq = equilibrium(params);
    let u0 = eq.u0;
    let a0 = u0 * (1.0 - params.b - 2.0 * u0) / (params.b + u0);
    let b0 = u0 - 1.0;
    Linearization {
        a0,
        b0,
        jac: [[a0, b0], [params.r, -params.r]],
    }
}

/// Threshold in `a` below which the equilibrium is linearly stable for
/// every `r, l > 0` (equivalently `a0 <= 0`).
pub fn a_threshold(b: f64) -> f64 {
    (b + 1.0).powi(2) / (2.0 * (1.0 - b))
}

/// Partial derivatives of `f1` and `f2` at `(u0, v0)`, orders two and
/// three. `f1` is linear in `v`, so its pure-`v` derivatives vanish;
/// `f2_vvv` vanishes because `f2` is quadratic in `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients {
    pub f1_uu: f64,
    pub f1_uv: f64,
    pub f1_vv: f64,
    pub f1_uuu: f64,
    pub f1_uuv: f64,
    pub f1_uvv: f64,
    pub f1_vvv: f64,
    pub f2_uu: f64,
    pub f2_uv: f64,
    pub f2_vv: f64,
    pub f2_uuu: f64,
    pub f2_uuv: f64,
    pub f2_uvv: f64,
    pub f2_vvv: f64,
}

/// Hand-differentiated closed forms; a finite-difference oracle
/// cross-checks these in the test suite.
pub fn taylor_coefficients(params: &ModelParams) -> TaylorCoefficients {
    let eq = equilibrium(params);
    let (u0, v0) = (eq.u0, eq.v0);
    let (a, b, r) = (params.a, params.b, params.r);
    let s = u0 + b;

    TaylorCoefficients {
        f1_uu: -2.0 + 2.0 * a * b * v0 / s.powi(3),
        f1_uv: -a * b / s.powi(2),
        f1_vv: 0.0,
        f1_uuu: -6.0 * a * b * v0 / s.powi(4),
        f1_uuv: 2.0 * a * b / s.powi(3),
        f1_uvv: 0.0,
        f1_vvv: 0.0,
        f2_uu: -2.0 * r * v0 * v0 / u0.powi(3),
        f2_uv: 2.0 * r * v0 / u0.powi(2),
        f2_vv: -2.0 * r / u0,
        f2_uuu: 6.0 * r * v0 * v0 / u0.powi(4),
        f2_uuv: -4.0 * r * v0 / u0.powi(3),
        f2_uvv: 2.0 * r / u0.powi(2),
        f2_vvv: 0.0,
    }
}

/// Reaction terms `(f1, f2)` at a state `(u, v)`.
pub fn kinetics_rhs(u: f64, v: f64, params: &ModelParams) -> Result<(f64, f64)> {
    if u <= 0.0 {
        return Err(Error::Singularity { u, t: f64::NAN });
    }
    Ok(rhs_unchecked(u, v, params.a, params.b, params.r))
}

/// Hot-path evaluation without the positivity guard; the simulator
/// performs its own min-u check per sweep.
#[inline(always)]
pub(crate) fn rhs_unchecked(u: f64, v: f64, a: f64, b: f64, r: f64) -> (f64, f64) {
    let f1 = u * (1.0 - u) - a * u * v / (u + b);
    let f2 = r * v * (1.0 - v / u);
    (f1, f2)
}
