//! Shared oracles and parameter sampling for the integration tests.
// Each test target uses its own subset of these helpers.
#![allow(dead_code)]

use rand::Rng;
use tanner_core::kinetics::{self, ModelParams, TaylorCoefficients};

pub const SEC3: (f64, f64, f64, f64) = (0.6018, 0.0077, 0.4, 19.37);
pub const EX1: (f64, f64, f64, f64) = (1.472554, 0.045949, 0.417243, 4.697383);

/// Random valid parameters; `turing_capable` additionally forces
/// `a0 > 0` and `d2 > d1`.
pub fn sample_params<R: Rng>(rng: &mut R, turing_capable: bool) -> ModelParams {
    loop {
        let b = rng.random_range(0.01..0.9);
        let a = if turing_capable {
            kinetics::a_threshold(b) * rng.random_range(1.05..5.0)
        } else {
            rng.random_range(0.05..5.0)
        };
        let d1 = rng.random_range(0.05..2.0);
        let d2 = if turing_capable {
            d1 * rng.random_range(1.5..40.0)
        } else {
            rng.random_range(0.05..20.0)
        };
        let r = rng.random_range(0.01..1.0);
        let l = rng.random_range(0.2..6.0);
        if let Ok(p) = ModelParams::new(a, b, d1, d2, r, l) {
            return p;
        }
    }
}

fn f1(u: f64, v: f64, a: f64, b: f64) -> f64 {
    u * (1.0 - u) - a * u * v / (u + b)
}

fn f2(u: f64, v: f64, r: f64) -> f64 {
    r * v * (1.0 - v / u)
}

/// Central finite differences of the reaction terms at the equilibrium,
/// independent of the closed forms under test.
pub fn taylor_by_finite_differences(params: &ModelParams) -> TaylorCoefficients {
    let eq = kinetics::equilibrium(params);
    let (u0, v0) = (eq.u0, eq.v0);
    let (a, b, r) = (params.a, params.b, params.r);
    let g1 = |u: f64, v: f64| f1(u, v, a, b);
    let g2 = |u: f64, v: f64| f2(u, v, r);

    let h2 = 1e-4 * u0.max(0.05);
    let h3 = 8e-3 * u0.max(0.05);

    let dxx = |f: &dyn Fn(f64, f64) -> f64| {
        (f(u0 + h2, v0) - 2.0 * f(u0, v0) + f(u0 - h2, v0)) / (h2 * h2)
    };
    let dyy = |f: &dyn Fn(f64, f64) -> f64| {
        (f(u0, v0 + h2) - 2.0 * f(u0, v0) + f(u0, v0 - h2)) / (h2 * h2)
    };
    let dxy = |f: &dyn Fn(f64, f64) -> f64| {
        (f(u0 + h2, v0 + h2) - f(u0 + h2, v0 - h2) - f(u0 - h2, v0 + h2) + f(u0 - h2, v0 - h2))
            / (4.0 * h2 * h2)
    };
    // Third-order stencils with one Richardson step (O(h^4) accuracy).
    let richardson = |stencil: &dyn Fn(f64) -> f64| (4.0 * stencil(0.5 * h3) - stencil(h3)) / 3.0;
    let dxxx = |f: &dyn Fn(f64, f64) -> f64| {
        richardson(&|h: f64| {
            (f(u0 + 2.0 * h, v0) - 2.0 * f(u0 + h, v0) + 2.0 * f(u0 - h, v0) - f(u0 - 2.0 * h, v0))
                / (2.0 * h * h * h)
        })
    };
    let dyyy = |f: &dyn Fn(f64, f64) -> f64| {
        richardson(&|h: f64| {
            (f(u0, v0 + 2.0 * h) - 2.0 * f(u0, v0 + h) + 2.0 * f(u0, v0 - h) - f(u0, v0 - 2.0 * h))
                / (2.0 * h * h * h)
        })
    };
    // d^3/du^2 dv as a centered v-derivative of the uu-stencil.
    let dxxy = |f: &dyn Fn(f64, f64) -> f64| {
        richardson(&|h: f64| {
            let fxx = |v: f64| (f(u0 + h, v) - 2.0 * f(u0, v) + f(u0 - h, v)) / (h * h);
            (fxx(v0 + h) - fxx(v0 - h)) / (2.0 * h)
        })
    };
    let dxyy = |f: &dyn Fn(f64, f64) -> f64| {
        richardson(&|h: f64| {
            let fyy = |u: f64| (f(u, v0 + h) - 2.0 * f(u, v0) + f(u, v0 - h)) / (h * h);
            (fyy(u0 + h) - fyy(u0 - h)) / (2.0 * h)
        })
    };

    TaylorCoefficients {
        f1_uu: dxx(&g1),
        f1_uv: dxy(&g1),
        f1_vv: dyy(&g1),
        f1_uuu: dxxx(&g1),
        f1_uuv: dxxy(&g1),
        f1_uvv: dxyy(&g1),
        f1_vvv: dyyy(&g1),
        f2_uu: dxx(&g2),
        f2_uv: dxy(&g2),
        f2_vv: dyy(&g2),
        f2_uuu: dxxx(&g2),
        f2_uuv: dxxy(&g2),
        f2_uvv: dxyy(&g2),
        f2_vvv: dyyy(&g2),
    }
}

/// Max relative disagreement over all fourteen coefficients.
pub fn taylor_disagreement(lhs: &TaylorCoefficients, rhs: &TaylorCoefficients) -> f64 {
    let pairs = [
        (lhs.f1_uu, rhs.f1_uu),
        (lhs.f1_uv, rhs.f1_uv),
        (lhs.f1_vv, rhs.f1_vv),
        (lhs.f1_uuu, rhs.f1_uuu),
        (lhs.f1_uuv, rhs.f1_uuv),
        (lhs.f1_uvv, rhs.f1_uvv),
        (lhs.f1_vvv, rhs.f1_vvv),
        (lhs.f2_uu, rhs.f2_uu),
        (lhs.f2_uv, rhs.f2_uv),
        (lhs.f2_vv, rhs.f2_vv),
        (lhs.f2_uuu, rhs.f2_uuu),
        (lhs.f2_uuv, rhs.f2_uuv),
        (lhs.f2_uvv, rhs.f2_uvv),
        (lhs.f2_vvv, rhs.f2_vvv),
    ];
    pairs
        .iter()
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

use tanner_core::rdsim::{simulate, FieldIc, Grid, IcSpec, Perturbation, SimConfig, Waveform};
use tanner_core::spectrum;

/// Growth rate of one cosine mode measured from a tiny perturbation.
pub fn measured_mode_rate(params: &ModelParams, n: u32, m: usize) -> f64 {
    let grid = Grid::new(params.l, m).unwrap();
    let u0 = kinetics::equilibrium(params).u0;
    let eig = spectrum::mode_eigenvalues(params, n);
    let dominant = eig.lambda_plus;
    let gap = (eig.lambda_plus.re - eig.lambda_minus.re).abs();

    // Window past the sub-dominant transient; for complex pairs measure
    // over whole oscillation periods so the phase factors cancel.
    let t_start: f64 = if dominant.im != 0.0 {
        0.0
    } else {
        (14.0 / gap).min(50.0)
    };
    let span = if dominant.im != 0.0 {
        let period = std::f64::consts::TAU / dominant.im.abs();
        let k = (30.0 / period).ceil().max(4.0);
        k * period
    } else {
        (4.0 / dominant.re.abs()).clamp(5.0, 200.0)
    };
    let t_end = t_start + span;

    let ic = IcSpec {
        u: FieldIc {
            base: u0,
            terms: vec![Perturbation {
                amplitude: 1e-6,
                wavenumber: n as f64 / params.l,
                shape: Waveform::Cos,
            }],
        },
        v: FieldIc::constant(u0),
    };
    let config = SimConfig {
        dt: 1e-3,
        t_end,
        save_stride: ((t_end / 1e-3) as usize / 400).max(1),
        ic,
        probes: vec![0.0],
        n_modes: (n as usize + 2).max(8),
    };
    let traj = simulate(params, &grid, &config).unwrap();

    // Mode 0 carries the base state; measure the deviation from it.
    let (off_u, off_v) = if n == 0 { (u0, u0) } else { (0.0, 0.0) };
    let amp = |k: usize| {
        let au = traj.mode_amp_u[k][n as usize] - off_u;
        let av = traj.mode_amp_v[k][n as usize] - off_v;
        (au * au + av * av).sqrt()
    };
    let k0 = traj.times.iter().position(|&t| t >= t_start).unwrap();
    let k1 = traj.times.len() - 1;
    (amp(k1) / amp(k0)).ln() / (traj.times[k1] - traj.times[k0])
}
