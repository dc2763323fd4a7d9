//! Third-order reduction at a Turing-Hopf point and the planar
//! amplitude system it induces.
//!
//! At a point where the mode-0 pair `±i*omega0` and a single mode-`n*`
//! zero eigenvalue coincide, the flow on the center manifold reduces to
//!
//! ```text
//! z1' = i w0 z1 + (1/2) f_a1z1 a1 z1 + (1/2) f_a2z1 a2 z1
//!       + (1/6) g210 z1^2 conj(z1) + (1/6) g102 z1 z2^2
//! z2' =          (1/2) f_a1z2 a1 z2 + (1/2) f_a2z2 a2 z2
//!       + (1/6) g111 z1 conj(z1) z2 + (1/6) g003 z2^3
//! ```
//!
//! with `(a1, a2)` the offsets of `(r, l)` from the critical point.
//! In cylindrical coordinates and after rescaling the amplitudes this
//! becomes the planar system
//!
//! ```text
//! rho' = -rho (eps1 + rho^2 + b0 v^2)
//! v'   = -v   (eps2 + c0 rho^2 + d0 v^2)
//! ```
//!
//! whose equilibria and cycle map back to the PDE patterns.
//!
//! The quadratic terms of the reduced flow are all non-resonant (cosine
//! orthogonality kills the resonant ones), so the cubic coefficients
//! collect three contributions: the direct cubic projection, the
//! second-order manifold correction along the non-critical directions,
//! and the near-identity transformation that removes the non-resonant
//! quadratics.

use crate::critical_sets;
use crate::error::{Error, Result};
use crate::kinetics::{self, ModelParams, TaylorCoefficients};
use crate::spectrum::{self, LinearData};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;
type V2 = [C; 2];

/// Condition-number ceiling for the manifold-correction solves.
const COND_LIMIT: f64 = 1e10;

/// Angular tolerance for the boundary of a region.
pub const REGION_BOUNDARY_TOL: f64 = 1e-9;

/// A parameter point where the mode-0 pair and a mode-`n*` zero
/// eigenvalue coincide (`r_* = r_0^H = r_{n*}^T = a0`).
#[derive(Debug, Clone, PartialEq)]
pub struct TuringHopfPoint {
    pub r_star: f64,
    pub l_star: f64,
    pub hopf_mode: u32,
    pub turing_mode: u32,
    pub omega0: f64,
    /// Full parameter set at the critical point.
    pub params: ModelParams,
}

/// Smallest-`l` coincidence with Hopf mode 0 in the window.
pub fn locate_turing_hopf(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_window: (f64, f64),
) -> Result<TuringHopfPoint> {
    let ld = LinearData::new(a, b, d1, d2);
    let sets = match critical_sets::enumerate_codim2(&ld, l_window.0, l_window.1) {
        Ok(s) => s,
        Err(Error::WindowEmpty(lo, hi)) => return Err(Error::NoTuringHopf(lo, hi)),
        Err(e) => return Err(e),
    };
    let candidates: Vec<_> = sets.th.iter().filter(|p| p.hopf_mode == 0).collect();
    let l_min = candidates.iter().map(|p| p.l).fold(f64::INFINITY, f64::min);
    // Roots of a rounded triple coincidence split by ~1e-6; among the
    // merged ones, take the smallest spatial mode.
    let hit = candidates
        .into_iter()
        .filter(|p| p.l <= l_min + critical_sets::TRIPLE_MERGE_TOL * l_min.abs().max(1.0))
        .min_by_key(|p| p.turing_mode)
        .ok_or(Error::NoTuringHopf(l_window.0, l_window.1))?;
    let omega0 = (ld.a0 * (-ld.a0 - ld.b0)).sqrt();
    Ok(TuringHopfPoint {
        r_star: hit.r,
        l_star: hit.l,
        hopf_mode: 0,
        turing_mode: hit.turing_mode,
        omega0,
        params: ModelParams::new(a, b, d1, d2, hit.r, hit.l)?,
    })
}

/// Coefficients of the reduced flow at the critical point. The
/// conjugate `z1` row is determined by these, and the `z2` row is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormCoefficients {
    pub f_a1z1: C,
    pub f_a2z1: C,
    pub f_a1z2: f64,
    pub f_a2z2: f64,
    pub g210: C,
    pub g102: C,
    pub g111: f64,
    pub g003: f64,
}

fn cinner(psi: &V2, v: &V2) -> C {
    psi[0].conj() * v[0] + psi[1].conj() * v[1]
}

fn rdot(p: &[f64; 2], v: &V2) -> C {
    p[0] * v[0] + p[1] * v[1]
}

fn conj2(v: &V2) -> V2 {
    [v[0].conj(), v[1].conj()]
}

/// Symmetric bilinear form of the second-order kinetics derivatives.
fn q_form(t: &TaylorCoefficients, x: &V2, y: &V2) -> V2 {
    let uu = x[0] * y[0];
    let uv = x[0] * y[1] + x[1] * y[0];
    let vv = x[1] * y[1];
    [
        t.f1_uu * uu + t.f1_uv * uv + t.f1_vv * vv,
        t.f2_uu * uu + t.f2_uv * uv + t.f2_vv * vv,
    ]
}

/// Symmetric trilinear form of the third-order kinetics derivatives.
fn c_form(t: &TaylorCoefficients, x: &V2, y: &V2, z: &V2) -> V2 {
    let uuu = x[0] * y[0] * z[0];
    let uuv = x[0] * y[0] * z[1] + x[0] * y[1] * z[0] + x[1] * y[0] * z[0];
    let uvv = x[0] * y[1] * z[1] + x[1] * y[0] * z[1] + x[1] * y[1] * z[0];
    let vvv = x[1] * y[1] * z[1];
    [
        t.f1_uuu * uuu + t.f1_uuv * uuv + t.f1_uvv * uvv + t.f1_vvv * vvv,
        t.f2_uuu * uuu + t.f2_uuv * uuv + t.f2_uvv * uvv + t.f2_vvv * vvv,
    ]
}

fn cond_2x2(m: [[f64; 2]; 2]) -> f64 {
    let sq = |x: f64| x * x;
    let frob = sq(m[0][0]) + sq(m[0][1]) + sq(m[1][0]) + sq(m[1][1]);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 {
        f64::INFINITY
    } else {
        frob / det.abs()
    }
}

fn solve_2x2(m: [[f64; 2]; 2], rhs: [f64; 2]) -> [f64; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        (rhs[0] * m[1][1] - rhs[1] * m[0][1]) / det,
        (rhs[1] * m[0][0] - rhs[0] * m[1][0]) / det,
    ]
}

/// Computes the eight reduced-flow coefficients from the point data and
/// the kinetics Taylor coefficients at the same parameters.
pub fn normal_form_coefficients(
    point: &TuringHopfPoint,
    taylor: &TaylorCoefficients,
) -> Result<NormalFormCoefficients> {
    let p = &point.params;
    let lin = kinetics::linearize(p);
    let (a0, bk) = (lin.a0, lin.b0);
    let (r, l) = (p.r, p.l);
    let w0 = point.omega0;
    let iw = C::new(0.0, w0);
    let nstar = point.turing_mode as f64;
    let x = (nstar / l) * (nstar / l);

    // Mode-0 critical pair: right eigenvector and normalized adjoint.
    let phi: V2 = [C::from(1.0), (iw - a0) / bk];
    let psi_raw: V2 = [C::from(1.0), -(a0 + iw) / r];
    let scale = cinner(&psi_raw, &phi);
    if scale.norm() < 1e-12 {
        return Err(Error::NearResonance(1.0 / scale.norm()));
    }
    let psi: V2 = [psi_raw[0] / scale.conj(), psi_raw[1] / scale.conj()];
    let phi_bar = conj2(&phi);

    // Mode-n* kernel pair, zero/trace spectral split.
    let m11 = a0 - p.d1 * x;
    let m22 = -r - p.d2 * x;
    let sigma = m11 + m22;
    let phi3 = [1.0, -m11 / bk];
    let psi3_raw = [1.0, -m11 / r];
    let den3 = psi3_raw[0] * phi3[0] + psi3_raw[1] * phi3[1];
    if den3.abs() < 1e-12 {
        return Err(Error::NearResonance(1.0 / den3.abs()));
    }
    let psi3 = [psi3_raw[0] / den3, psi3_raw[1] / den3];
    // Complement direction inside mode n* (eigenvalue sigma) and its
    // adjoint covector.
    let w3 = [1.0, -(r + p.d2 * x) / bk];
    let chi_raw = [1.0, -(r + p.d2 * x) / r];
    let denw = chi_raw[0] * w3[0] + chi_raw[1] * w3[1];
    if denw.abs() < 1e-12 {
        return Err(Error::NearResonance(1.0 / denw.abs()));
    }
    let chi3 = [chi_raw[0] / denw, chi_raw[1] / denw];

    let phi3c: V2 = [C::from(phi3[0]), C::from(phi3[1])];
    let w3c: V2 = [C::from(w3[0]), C::from(w3[1])];

    // Parameter rows: d/dr brings the (0; u - v) kinetics column, d/dl
    // brings +2 n^2/l^3 diag(d1, d2) from the diffusion term. The l-row
    // vanishes at the diffusion-free mode 0.
    let lr_phi: V2 = [C::from(0.0), phi[0] - phi[1]];
    let f_a1z1 = 2.0 * cinner(&psi, &lr_phi);
    let f_a2z1 = C::from(0.0);
    let f_a1z2 = 2.0 * psi3[1] * (phi3[0] - phi3[1]);
    let f_a2z2 =
        4.0 * nstar * nstar / l.powi(3) * (psi3[0] * p.d1 * phi3[0] + psi3[1] * p.d2 * phi3[1]);

    // Products of normalized cosines: the constant mode has norm-factor
    // 1/sqrt(pi), the n* self-product splits over modes 0 and 2n*.
    let sp = 1.0 / PI.sqrt();
    let spp = 1.0 / (2.0 * PI).sqrt();

    // Quadratic monomial projections of the reduced flow.
    let a20 = 0.5 * sp * cinner(&psi, &q_form(taylor, &phi, &phi));
    let a11 = sp * cinner(&psi, &q_form(taylor, &phi, &phi_bar));
    let a02 = 0.5 * sp * cinner(&psi, &q_form(taylor, &phi_bar, &phi_bar));
    let a002 = 0.5 * sp * cinner(&psi, &q_form(taylor, &phi3c, &phi3c));
    let b101 = sp * rdot(&psi3, &q_form(taylor, &phi, &phi3c));

    // Second-order manifold corrections. Inside mode n* only the
    // trace-direction component survives; mode 2n* carries the z2^2
    // self-interaction.
    let gamma101 = sp * rdot(&chi3, &q_form(taylor, &phi, &phi3c));
    let eta101 = gamma101 / (iw - sigma);
    let eta011 = eta101.conj();

    let m2 = [[a0 - 4.0 * p.d1 * x, bk], [r, -r - 4.0 * p.d2 * x]];
    let cond = cond_2x2(m2);
    if cond > COND_LIMIT {
        return Err(Error::NearResonance(cond));
    }
    let q33 = q_form(taylor, &phi3c, &phi3c);
    let rhs = [-0.5 * spp * q33[0].re, -0.5 * spp * q33[1].re];
    let h002 = solve_2x2(m2, rhs);
    let h002c: V2 = [C::from(h002[0]), C::from(h002[1])];

    // Resonant cubics: direct projection + manifold correction +
    // removal of the non-resonant quadratics.
    let pi_inv = 1.0 / PI;
    let c210 = 0.5 * pi_inv * cinner(&psi, &c_form(taylor, &phi, &phi, &phi_bar))
        + (-a20 * a11 + a11.norm_sqr() + 2.0 / 3.0 * a02.norm_sqr()) / iw;
    let c102 = 0.5 * pi_inv * cinner(&psi, &c_form(taylor, &phi, &phi3c, &phi3c))
        + sp * eta101 * cinner(&psi, &q_form(taylor, &phi3c, &w3c))
        + (-2.0 * a20 * a002 + a11 * a002.conj() + 2.0 * a002 * b101) / iw;
    let c111 = pi_inv * rdot(&psi3, &c_form(taylor, &phi, &phi_bar, &phi3c))
        + sp * (eta101 * rdot(&psi3, &q_form(taylor, &phi_bar, &w3c))
            + eta011 * rdot(&psi3, &q_form(taylor, &phi, &w3c)))
        - 2.0 / w0 * (b101 * a11).im;
    let c003 = 0.25 * pi_inv * rdot(&psi3, &c_form(taylor, &phi3c, &phi3c, &phi3c))
        + spp * rdot(&psi3, &q_form(taylor, &phi3c, &h002c))
        - 2.0 / w0 * (b101 * a002).im;

    debug_assert!(c111.im.abs() < 1e-8 * c111.norm().max(1.0));
    debug_assert!(c003.im.abs() < 1e-8 * c003.norm().max(1.0));

    Ok(NormalFormCoefficients {
        f_a1z1,
        f_a2z1,
        f_a1z2,
        f_a2z2,
        g210: 6.0 * c210,
        g102: 6.0 * c102,
        g111: 6.0 * c111.re,
        g003: 6.0 * c003.re,
    })
}

/// The planar amplitude system: two linear parameter maps and three
/// cubic interaction constants, with the `rho` self-interaction
/// normalized to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSystem {
    /// `eps1(a1, a2) = eps1_map[0] a1 + eps1_map[1] a2`.
    pub eps1_map: [f64; 2],
    /// `eps2(a1, a2) = eps2_map[0] a1 + eps2_map[1] a2`.
    pub eps2_map: [f64; 2],
    pub b0: f64,
    pub c0: f64,
    pub d0: f64,
}

impl PlanarSystem {
    pub fn eps1(&self, a1: f64, a2: f64) -> f64 {
        self.eps1_map[0] * a1 + self.eps1_map[1] * a2
    }

    pub fn eps2(&self, a1: f64, a2: f64) -> f64 {
        self.eps2_map[0] * a1 + self.eps2_map[1] * a2
    }
}

/// Cylindrical coordinates plus amplitude rescaling. Requires
/// `Re(g210) < 0` (so the `rho^3` coefficient normalizes to `-1`) and
/// `g003 != 0`.
pub fn planar_reduction(coeffs: &NormalFormCoefficients) -> Result<PlanarSystem> {
    let re210 = coeffs.g210.re;
    if re210 == 0.0 || coeffs.g003 == 0.0 {
        return Err(Error::Degenerate(
            "planar reduction needs Re(g210) != 0 and g003 != 0".into(),
        ));
    }
    if re210 > 0.0 {
        return Err(Error::Degenerate(
            "positive rho self-interaction is outside the normalized planar form".into(),
        ));
    }
    Ok(PlanarSystem {
        eps1_map: [-0.5 * coeffs.f_a1z1.re, -0.5 * coeffs.f_a2z1.re],
        eps2_map: [-0.5 * coeffs.f_a1z2, -0.5 * coeffs.f_a2z2],
        b0: -coeffs.g102.re / coeffs.g003.abs(),
        c0: -coeffs.g111 / re210.abs(),
        d0: -coeffs.g003.signum(),
    })
}

/// Right-hand side of the planar system at amplitudes `(rho, v)`.
pub fn planar_flow(planar: &PlanarSystem, alpha: (f64, f64), state: (f64, f64)) -> (f64, f64) {
    let e1 = planar.eps1(alpha.0, alpha.1);
    let e2 = planar.eps2(alpha.0, alpha.1);
    let (rho, v) = state;
    (
        -rho * (e1 + rho * rho + planar.b0 * v * v),
        -v * (e2 + planar.c0 * rho * rho + planar.d0 * v * v),
    )
}

/// One planar equilibrium with its linearization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarEquilibrium {
    pub rho: f64,
    pub v: f64,
    pub jacobian: [[f64; 2]; 2],
    pub eigenvalues: (C, C),
    pub stable: bool,
}

fn equilibrium_info(
    planar: &PlanarSystem,
    e1: f64,
    e2: f64,
    rho: f64,
    v: f64,
) -> PlanarEquilibrium {
    let j = [
        [
            -(e1 + 3.0 * rho * rho + planar.b0 * v * v),
            -2.0 * planar.b0 * rho * v,
        ],
        [
            -2.0 * planar.c0 * rho * v,
            -(e2 + planar.c0 * rho * rho + 3.0 * planar.d0 * v * v),
        ],
    ];
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let eigs = spectrum::quadratic_roots(tr, det);
    PlanarEquilibrium {
        rho,
        v,
        jacobian: j,
        eigenvalues: eigs,
        stable: eigs.0.re.max(eigs.1.re) < 0.0,
    }
}

/// The up-to-four non-negative equilibria of the planar system at one
/// parameter offset. `e1` always exists; the others carry existence
/// flags through `Option`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarEquilibria {
    pub eps1: f64,
    pub eps2: f64,
    pub e1: PlanarEquilibrium,
    pub e2: Option<PlanarEquilibrium>,
    pub e3: Option<PlanarEquilibrium>,
    pub e4: Option<PlanarEquilibrium>,
}

pub fn planar_equilibria(planar: &PlanarSystem, alpha1: f64, alpha2: f64) -> PlanarEquilibria {
    let e1v = planar.eps1(alpha1, alpha2);
    let e2v = planar.eps2(alpha1, alpha2);

    let e1 = equilibrium_info(planar, e1v, e2v, 0.0, 0.0);
    let e2 = (e1v < 0.0).then(|| equilibrium_info(planar, e1v, e2v, (-e1v).sqrt(), 0.0));
    let v3sq = -e2v / planar.d0;
    let e3 = (v3sq > 0.0).then(|| equilibrium_info(planar, e1v, e2v, 0.0, v3sq.sqrt()));
    let den = planar.d0 - planar.b0 * planar.c0;
    let e4 = if den != 0.0 {
        let rho_sq = (planar.b0 * e2v - planar.d0 * e1v) / den;
        let v_sq = (planar.c0 * e1v - e2v) / den;
        (rho_sq > 0.0 && v_sq > 0.0)
            .then(|| equilibrium_info(planar, e1v, e2v, rho_sq.sqrt(), v_sq.sqrt()))
    } else {
        None
    };

    PlanarEquilibria {
        eps1: e1v,
        eps2: e2v,
        e1,
        e2,
        e3,
        e4,
    }
}

/// A ray from the origin of the `(alpha1, alpha2)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ray {
    /// `alpha1 = 0, alpha2 > 0`.
    VerticalUp,
    /// `alpha1 = 0, alpha2 < 0`.
    VerticalDown,
    /// `alpha2 = slope * alpha1` on the side with the given `alpha1` sign.
    Slanted { slope: f64, alpha1_positive: bool },
}

impl Ray {
    pub fn angle(&self) -> f64 {
        let theta = match *self {
            Ray::VerticalUp => 0.5 * PI,
            Ray::VerticalDown => -0.5 * PI,
            Ray::Slanted {
                slope,
                alpha1_positive,
            } => {
                if alpha1_positive {
                    slope.atan()
                } else {
                    slope.atan() + PI
                }
            }
        };
        theta.rem_euclid(2.0 * PI)
    }

    pub fn slope(&self) -> Option<f64> {
        match *self {
            Ray::Slanted { slope, .. } => Some(slope),
            _ => None,
        }
    }
}

/// The seven rays bounding the parameter regions, indexed 1..=7.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationLines {
    pub lines: [Ray; 7],
}

impl BifurcationLines {
    pub fn line(&self, index: usize) -> Ray {
        self.lines[index - 1]
    }
}

/// Positive-`alpha1` ray on which the mixed equilibrium's linearization
/// has zero trace (its oscillatory threshold), found by a bisection in
/// the ray angle.
fn mixed_state_hopf_ray(planar: &PlanarSystem, theta_lo: f64, theta_hi: f64) -> Result<Ray> {
    let trace_at = |theta: f64| -> Option<f64> {
        let (a1, a2) = (theta.cos(), theta.sin());
        planar_equilibria(planar, a1, a2)
            .e4
            .map(|e| e.jacobian[0][0] + e.jacobian[1][1])
    };
    let lo0 = theta_lo + 1e-9;
    let hi0 = theta_hi - 1e-9;
    let f_lo = trace_at(lo0).ok_or_else(|| {
        Error::Degenerate("mixed equilibrium absent next to its existence boundary".into())
    })?;
    let f_hi = trace_at(hi0).ok_or_else(|| {
        Error::Degenerate("mixed equilibrium absent near the vertical axis".into())
    })?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Degenerate(
            "mixed-equilibrium trace does not change sign; no oscillatory ray".into(),
        ));
    }
    let (mut lo, mut hi) = (lo0, hi0);
    let mut f_lo = f_lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = match trace_at(mid) {
            Some(v) => v,
            None => {
                return Err(Error::Degenerate(
                    "mixed equilibrium lost during bisection".into(),
                ))
            }
        };
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(Ray::Slanted {
        slope: theta.tan(),
        alpha1_positive: true,
    })
}

/// Builds the seven rays from the planar data. The vertical pair comes
/// from `eps1 = 0`, the `eps2 = 0` line contributes one ray on each
/// side, and the remaining slopes solve `c0 eps1 = eps2`,
/// `b0 eps2 = d0 eps1` and the mixed-state trace condition.
pub fn bifurcation_lines(planar: &PlanarSystem) -> Result<BifurcationLines> {
    if planar.d0 - planar.b0 * planar.c0 == 0.0 {
        return Err(Error::Degenerate("d0 - b0 c0 = 0".into()));
    }
    // eps1 must be a pure alpha1 multiple for the vertical pair; this is
    // structural (the constant mode carries no domain-scale dependence).
    if planar.eps1_map[1].abs() > 1e-10 * planar.eps1_map[0].abs().max(1.0) {
        return Err(Error::Degenerate(
            "eps1 depends on the domain-scale offset".into(),
        ));
    }
    let slope_of = |k1: f64, k2: f64| -> Result<f64> {
        if k2 == 0.0 {
            return Err(Error::Degenerate("vertical interaction line".into()));
        }
        Ok(-k1 / k2)
    };
    // eps2 = 0
    let s26 = slope_of(planar.eps2_map[0], planar.eps2_map[1])?;
    // c0 eps1 - eps2 = 0
    let s3 = slope_of(
        planar.c0 * planar.eps1_map[0] - planar.eps2_map[0],
        planar.c0 * planar.eps1_map[1] - planar.eps2_map[1],
    )?;
    // b0 eps2 - d0 eps1 = 0
    let s7 = slope_of(
        planar.b0 * planar.eps2_map[0] - planar.d0 * planar.eps1_map[0],
        planar.b0 * planar.eps2_map[1] - planar.d0 * planar.eps1_map[1],
    )?;

    let l7 = Ray::Slanted {
        slope: s7,
        alpha1_positive: true,
    };
    let l4 = Ray::VerticalUp;
    let l5 = mixed_state_hopf_ray(planar, l7.angle(), l4.angle())?;

    Ok(BifurcationLines {
        lines: [
            Ray::VerticalDown,
            Ray::Slanted {
                slope: s26,
                alpha1_positive: false,
            },
            Ray::Slanted {
                slope: s3,
                alpha1_positive: false,
            },
            l4,
            l5,
            Ray::Slanted {
                slope: s26,
                alpha1_positive: true,
            },
            l7,
        ],
    })
}

/// Open sectors cut out by the seven rays, plus the boundary case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    OnBoundary,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionLabel::D1 => "D1",
            RegionLabel::D2 => "D2",
            RegionLabel::D3 => "D3",
            RegionLabel::D4 => "D4",
            RegionLabel::D5 => "D5",
            RegionLabel::D6 => "D6",
            RegionLabel::D7 => "D7",
            RegionLabel::OnBoundary => "boundary",
        };
        f.write_str(s)
    }
}

/// Sector of `(alpha1, alpha2)`: each region is the sector swept
/// counter-clockwise from its same-numbered ray to the next ray.
pub fn classify_region(planar: &PlanarSystem, alpha1: f64, alpha2: f64) -> Result<RegionLabel> {
    if alpha1 == 0.0 && alpha2 == 0.0 {
        return Err(Error::InvalidParameter(
            "region classification needs (alpha1, alpha2) != (0, 0)".into(),
        ));
    }
    let lines = bifurcation_lines(planar)?;
    let theta = (alpha2.atan2(alpha1)).rem_euclid(2.0 * PI);

    let mut best: Option<(f64, usize)> = None;
    for (idx, ray) in lines.lines.iter().enumerate() {
        let a = ray.angle();
        let diff = (theta - a).rem_euclid(2.0 * PI);
        let wrap = (2.0 * PI - diff).min(diff);
        if wrap < REGION_BOUNDARY_TOL {
            return Ok(RegionLabel::OnBoundary);
        }
        if best.is_none_or(|(d, _)| diff < d) {
            best = Some((diff, idx));
        }
    }
    let idx = best.unwrap().1;
    Ok([
        RegionLabel::D1,
        RegionLabel::D2,
        RegionLabel::D3,
        RegionLabel::D4,
        RegionLabel::D5,
        RegionLabel::D6,
        RegionLabel::D7,
    ][idx])
}

/// Representative interior direction of a region (angular midpoint of
/// its sector), unit radius.
pub fn region_representative(planar: &PlanarSystem, region: RegionLabel) -> Result<(f64, f64)> {
    let idx = match region {
        RegionLabel::D1 => 0,
        RegionLabel::D2 => 1,
        RegionLabel::D3 => 2,
        RegionLabel::D4 => 3,
        RegionLabel::D5 => 4,
        RegionLabel::D6 => 5,
        RegionLabel::D7 => 6,
        RegionLabel::OnBoundary => {
            return Err(Error::NotApplicable("boundary has no interior".into()))
        }
    };
    let lines = bifurcation_lines(planar)?;
    let start = lines.lines[idx].angle();
    let next = lines
        .lines
        .iter()
        .map(|r| (r.angle() - start).rem_euclid(2.0 * PI))
        .filter(|d| *d > 1e-12)
        .fold(2.0 * PI, f64::min);
    let mid = start + 0.5 * next;
    Ok((mid.cos(), mid.sin()))
}

/// PDE pattern classes the planar objects map onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    ConstantSteady,
    NonconstantSteady,
    HomogeneousPeriodic,
    InhomogeneousPeriodic,
    InhomogeneousQuasiPeriodic,
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PatternKind::ConstantSteady => "constant-steady",
            PatternKind::NonconstantSteady => "nonconstant-steady",
            PatternKind::HomogeneousPeriodic => "homogeneous-periodic",
            PatternKind::InhomogeneousPeriodic => "inhomogeneous-periodic",
            PatternKind::InhomogeneousQuasiPeriodic => "inhomogeneous-quasi-periodic",
        };
        f.write_str(s)
    }
}

/// One predicted invariant object of the PDE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedAttractor {
    pub pattern: PatternKind,
    pub stable: bool,
    /// Reflection symmetry produces mirrored copies of the spatially
    /// structured objects.
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorPrediction {
    pub region: RegionLabel,
    pub objects: Vec<PredictedAttractor>,
}

impl AttractorPrediction {
    pub fn stable_patterns(&self) -> Vec<PatternKind> {
        self.objects
            .iter()
            .filter(|o| o.stable)
            .map(|o| o.pattern)
            .collect()
    }

    pub fn contains_stable(&self, pattern: PatternKind) -> bool {
        self.objects
            .iter()
            .any(|o| o.stable && o.pattern == pattern)
    }
}

/// Translates the planar objects present in a region into PDE pattern
/// predictions: the trivial state maps to the constant steady state, an
/// amplitude on the oscillatory axis to the homogeneous cycle, one on
/// the steady axis to a non-constant steady state, the mixed state to
/// an inhomogeneous cycle, and a planar limit cycle to a quasi-periodic
/// pattern. The cycle is born on line 5 and observed to persist through
/// regions 6 and 7.
pub fn predict_attractors(
    planar: &PlanarSystem,
    region: RegionLabel,
) -> Result<AttractorPrediction> {
    let (a1, a2) = region_representative(planar, region)?;
    let eqs = planar_equilibria(planar, a1, a2);

    let mut objects = vec![PredictedAttractor {
        pattern: PatternKind::ConstantSteady,
        stable: eqs.e1.stable,
        multiplicity: 1,
    }];
    if let Some(e2) = eqs.e2 {
        objects.push(PredictedAttractor {
            pattern: PatternKind::HomogeneousPeriodic,
            stable: e2.stable,
            multiplicity: 1,
        });
    }
    if let Some(e3) = eqs.e3 {
        objects.push(PredictedAttractor {
            pattern: PatternKind::NonconstantSteady,
            stable: e3.stable,
            multiplicity: 2,
        });
    }
    if let Some(e4) = eqs.e4 {
        objects.push(PredictedAttractor {
            pattern: PatternKind::InhomogeneousPeriodic,
            stable: e4.stable,
            multiplicity: 2,
        });
    }
    if matches!(region, RegionLabel::D6 | RegionLabel::D7) {
        objects.push(PredictedAttractor {
            pattern: PatternKind::InhomogeneousQuasiPeriodic,
            stable: true,
            multiplicity: 2,
        });
    }
    Ok(AttractorPrediction { region, objects })
}

/// Convenience pipeline: locate the point, build the reduction and the
/// region geometry in one call.
pub fn analyze_turing_hopf(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_window: (f64, f64),
) -> Result<(
    TuringHopfPoint,
    NormalFormCoefficients,
    PlanarSystem,
    BifurcationLines,
)> {
    let point = locate_turing_hopf(a, b, d1, d2, l_window)?;
    let taylor = kinetics::taylor_coefficients(&point.params);
    let coeffs = normal_form_coefficients(&point, &taylor)?;
    let planar = planar_reduction(&coeffs)?;
    let lines = bifurcation_lines(&planar)?;
    Ok((point, coeffs, planar, lines))
}
