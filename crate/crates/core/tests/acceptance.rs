//! Acceptance suite: the published reference values and behaviors this
//! toolkit must reproduce, one test per criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them on success).

mod common;

use common::{
    measured_mode_rate, sample_params, taylor_by_finite_differences, taylor_disagreement,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tanner_core::critical_sets::{self, RegimeLabel};
use tanner_core::kinetics::{self, ModelParams};
use tanner_core::normal_form::{self, PatternKind};
use tanner_core::rdsim::{
    self, AttractorClass, ClassifierTolerances, FieldIc, Grid, IcSpec, Perturbation, SimConfig,
    Waveform,
};
use tanner_core::spectrum::{self, LinearData, Stability};

const SEC3: (f64, f64, f64, f64) = (0.6018, 0.0077, 0.4, 19.37);
const EX1: (f64, f64, f64, f64) = (1.472554, 0.045949, 0.417243, 4.697383);

struct Gate {
    id: &'static str,
    name: &'static str,
    failures: Vec<String>,
}

impl Gate {
    fn new(id: &'static str, name: &'static str) -> Self {
        Self {
            id,
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{what}: {detail}"));
        }
    }

    fn abs(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(
            what,
            (got - want).abs() <= tol,
            format!("got {got:.8}, want {want:.8} +- {tol:.1e}"),
        );
    }

    fn rel(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check(
            what,
            (got - want).abs() <= tol * want.abs().max(1e-12),
            format!("got {got:.6}, want {want:.6} (rel {tol:.1e})"),
        );
    }

    fn rel_c(&mut self, what: &str, got: Complex64, want: Complex64, tol: f64) {
        self.check(
            what,
            (got - want).norm() <= tol * want.norm().max(1e-12),
            format!("got {got}, want {want} (rel {tol:.1e})"),
        );
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("acceptance {} ({}): PASS", self.id, self.name);
        } else {
            println!("acceptance {} ({}): FAIL", self.id, self.name);
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!(
                "acceptance {} failed:\n{}",
                self.id,
                self.failures.join("\n")
            );
        }
    }
}

#[test]
fn acceptance_1_equilibrium_linearization() {
    let mut gate = Gate::new("1", "equilibrium and linearization");
    let p = ModelParams::new(SEC3.0, SEC3.1, SEC3.2, SEC3.3, 0.2, 1.6).unwrap();
    gate.abs("u0", kinetics::equilibrium(&p).u0, 0.4093, 5e-4);
    gate.abs("A0", kinetics::linearize(&p).a0, 0.170468, 5e-5);
    gate.finish();
}

#[test]
fn acceptance_2_critical_curve_regression() {
    let mut gate = Gate::new("2", "critical curves and coincidence sets");
    let ld = LinearData::new(EX1.0, EX1.1, EX1.2, EX1.3);
    let l = 3.022593;
    gate.abs("r_0^H", spectrum::hopf_curve(&ld, 0, l), 0.501219, 1e-5);
    gate.abs(
        "r_1^T",
        spectrum::turing_curve(&ld, 1, l).unwrap(),
        0.501219,
        1e-5,
    );
    gate.abs(
        "r_2^T",
        spectrum::turing_curve(&ld, 2, l).unwrap(),
        1.084062,
        1e-5,
    );
    gate.abs(
        "r_3^T",
        spectrum::turing_curve(&ld, 3, l).unwrap(),
        0.501219,
        1e-5,
    );

    let counts = critical_sets::mode_counts(&ld, l).unwrap();
    gate.check("N1", counts.n1 == 0, format!("got {}", counts.n1));
    gate.check("N2", counts.n2 == 3, format!("got {}", counts.n2));

    let sets = critical_sets::codim2_at(&ld, l).unwrap();
    let tt = sets.tt_lengths(1e-5);
    gate.check("|L_TT|", tt.len() == 2, format!("got {tt:?}"));
    if tt.len() == 2 {
        gate.abs("L_TT[0]", tt[0], 3.022593, 1e-5);
        gate.abs("L_TT[1]", tt[1], 3.617713, 1e-5);
    }
    let th = sets.th_lengths(1e-5);
    gate.check("|L_TH|", th.len() == 1, format!("got {th:?}"));
    if th.len() == 1 {
        gate.abs("L_TH[0]", th[0], 3.022593, 1e-5);
    }
    let tth = sets.tth_lengths(1e-5);
    gate.check("|L_TTH|", tth.len() == 1, format!("got {tth:?}"));
    if tth.len() == 1 {
        gate.abs("L_TTH[0]", tth[0], 3.022593, 1e-5);
    }
    gate.finish();
}

#[test]
fn acceptance_3_organizing_point() {
    let mut gate = Gate::new("3", "codimension-two point location");
    let point =
        normal_form::locate_turing_hopf(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (1.0, 2.0)).unwrap();
    gate.abs("l*", point.l_star, 1.593334, 1e-4);
    gate.abs("r*", point.r_star, 0.170468, 1e-5);
    gate.abs("omega0", point.omega0, 0.267646, 1e-4);
    gate.check(
        "n*",
        point.turing_mode == 1,
        format!("got {}", point.turing_mode),
    );
    gate.finish();
}

fn sec3_pipeline() -> (
    normal_form::TuringHopfPoint,
    normal_form::NormalFormCoefficients,
    normal_form::PlanarSystem,
    normal_form::BifurcationLines,
) {
    normal_form::analyze_turing_hopf(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (1.0, 2.0)).unwrap()
}

#[test]
fn acceptance_4_normal_form_coefficients() {
    let mut gate = Gate::new("4", "reduced-flow coefficients");
    let (_, nf, _, _) = sec3_pipeline();
    let tol = 5e-3;
    gate.rel_c("f_a1z1", nf.f_a1z1, Complex64::new(-1.0, 1.5701), tol);
    gate.check(
        "f_a2z1",
        nf.f_a2z1 == Complex64::new(0.0, 0.0),
        format!("got {}", nf.f_a2z1),
    );
    gate.rel("f_a1z2", nf.f_a1z2, -0.1484, tol);
    gate.rel("f_a2z2", nf.f_a2z2, 0.3645, tol);
    gate.rel_c("g210", nf.g210, Complex64::new(-0.3026, -4.8696), tol);
    gate.rel_c("g102", nf.g102, Complex64::new(1.3640, -10.1736), tol);
    gate.rel("g111", nf.g111, -1.3543, tol);
    gate.rel("g003", nf.g003, 0.1241, tol);
    gate.finish();
}

#[test]
fn acceptance_5_planar_reduction() {
    let mut gate = Gate::new("5", "planar constants and boundary rays");
    let (_, _, planar, lines) = sec3_pipeline();
    let tol = 5e-3;
    gate.rel("b0", planar.b0, -10.9918, tol);
    gate.rel("c0", planar.c0, 4.4751, tol);
    gate.check("d0", planar.d0 == -1.0, format!("got {}", planar.d0));
    gate.rel("eps1[a1]", planar.eps1_map[0], 0.5, tol);
    gate.check(
        "eps1[a2]",
        planar.eps1_map[1].abs() < 1e-10,
        format!("got {}", planar.eps1_map[1]),
    );
    gate.rel("eps2[a1]", planar.eps2_map[0], 0.0742, tol);
    gate.rel("eps2[a2]", planar.eps2_map[1], -0.1822, tol);
    gate.rel("L2 slope", lines.line(2).slope().unwrap(), 0.4072, tol);
    gate.rel("L3 slope", lines.line(3).slope().unwrap(), -11.8738, tol);
    gate.rel("L5 slope", lines.line(5).slope().unwrap(), 1.3614, tol);
    gate.rel("L6 slope", lines.line(6).slope().unwrap(), 0.4072, tol);
    gate.rel("L7 slope", lines.line(7).slope().unwrap(), 0.1575, tol);
    gate.finish();
}

#[test]
fn acceptance_6_region_oracle() {
    let mut gate = Gate::new("6", "region classification oracle");
    let (_, _, planar, _) = sec3_pipeline();
    let cases = [
        ((0.0373, -0.0543), RegimeLabelLike::D1),
        ((-0.0344, -0.0578), RegimeLabelLike::D2),
        ((-0.0325, 0.0356), RegimeLabelLike::D3),
        ((-0.0030, 0.0888), RegimeLabelLike::D4),
        ((0.0352, 0.0817), RegimeLabelLike::D5),
        ((0.0405, 0.0449), RegimeLabelLike::D6),
        ((0.0220, 0.0082), RegimeLabelLike::D7),
    ];
    for ((a1, a2), want) in cases {
        let got = normal_form::classify_region(&planar, a1, a2).unwrap();
        gate.check(
            &format!("({a1}, {a2})"),
            got == want.into_region(),
            format!("got {got}, want {}", want.into_region()),
        );
    }
    gate.finish();
}

#[derive(Clone, Copy)]
enum RegimeLabelLike {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
}

impl RegimeLabelLike {
    fn into_region(self) -> normal_form::RegionLabel {
        use normal_form::RegionLabel::*;
        match self {
            RegimeLabelLike::D1 => D1,
            RegimeLabelLike::D2 => D2,
            RegimeLabelLike::D3 => D3,
            RegimeLabelLike::D4 => D4,
            RegimeLabelLike::D5 => D5,
            RegimeLabelLike::D6 => D6,
            RegimeLabelLike::D7 => D7,
        }
    }
}

fn figure_ic(base: f64, amp_u: f64, amp_v: f64, k: f64) -> IcSpec {
    IcSpec {
        u: FieldIc {
            base,
            terms: vec![Perturbation {
                amplitude: amp_u,
                wavenumber: k,
                shape: Waveform::Sin,
            }],
        },
        v: FieldIc {
            base,
            terms: vec![Perturbation {
                amplitude: amp_v,
                wavenumber: k,
                shape: Waveform::Sin,
            }],
        },
    }
}

/// Desk-scale classifier settings: the spatial and temporal variance
/// floors absorb the residual of the slowest linear mode, whose decay
/// rate near the region-7 sliver (~1e-4) leaves an O(1e-3) amplitude at
/// the end of a 3000-unit run.
fn desk_tolerances() -> ClassifierTolerances {
    ClassifierTolerances {
        eps_spatial: 2e-5,
        eps_temporal: 3e-7,
        ..ClassifierTolerances::default()
    }
}

#[test]
fn acceptance_7_simulation_prediction_agreement() {
    let mut gate = Gate::new("7", "simulation vs captioned attractor classes");
    let point =
        normal_form::locate_turing_hopf(SEC3.0, SEC3.1, SEC3.2, SEC3.3, (1.0, 2.0)).unwrap();
    let u0 = kinetics::equilibrium(&point.params).u0;

    let cases: Vec<(&str, f64, f64, IcSpec, AttractorClass)> = vec![
        (
            "D1",
            0.0373,
            -0.0543,
            figure_ic(u0, 0.01, 0.01, 6.0),
            AttractorClass::ConstantSteady,
        ),
        (
            "D2",
            -0.0344,
            -0.0578,
            figure_ic(u0, 0.05, 0.05, 6.0),
            AttractorClass::HomogeneousPeriodic,
        ),
        (
            "D3",
            -0.0325,
            0.0356,
            figure_ic(u0, 0.05, 0.05, 6.0),
            AttractorClass::HomogeneousPeriodic,
        ),
        (
            "D4",
            -0.0030,
            0.0888,
            figure_ic(u0, 0.05, 0.05, 2.0),
            AttractorClass::InhomogeneousPeriodic,
        ),
        (
            "D5",
            0.0352,
            0.0817,
            figure_ic(u0, 0.05, 0.05, 2.0),
            AttractorClass::InhomogeneousPeriodic,
        ),
        (
            "D6",
            0.0405,
            0.0449,
            figure_ic(u0, 0.05, -0.05, 1.0),
            AttractorClass::InhomogeneousQuasiPeriodic,
        ),
        (
            "D7/sin-x",
            0.0220,
            0.0082,
            figure_ic(u0, 0.05, 0.05, 1.0),
            AttractorClass::InhomogeneousQuasiPeriodic,
        ),
        (
            "D7/sin-6x",
            0.0220,
            0.0082,
            figure_ic(u0, 0.05, 0.05, 6.0),
            AttractorClass::ConstantSteady,
        ),
    ];

    let results: Vec<(&str, Result<AttractorClass, String>, AttractorClass)> = cases
        .par_iter()
        .map(|(name, a1, a2, ic, expected)| {
            let outcome = (|| {
                let params = ModelParams::new(
                    SEC3.0,
                    SEC3.1,
                    SEC3.2,
                    SEC3.3,
                    point.r_star + a1,
                    point.l_star + a2,
                )
                .map_err(|e| e.to_string())?;
                let grid = Grid::new(params.l, 128).map_err(|e| e.to_string())?;
                let config = SimConfig {
                    dt: 1e-3,
                    t_end: 3000.0,
                    save_stride: 1000,
                    ic: ic.clone(),
                    probes: vec![0.0],
                    n_modes: 16,
                };
                let traj = rdsim::simulate(&params, &grid, &config).map_err(|e| e.to_string())?;
                rdsim::classify_attractor(&traj, &desk_tolerances()).map_err(|e| e.to_string())
            })();
            (*name, outcome, *expected)
        })
        .collect();

    for (name, outcome, expected) in &results {
        match outcome {
            Ok(got) => {
                let mut detail = format!("observed {got}, captioned {expected}");
                if *name == "D6" && *got != *expected {
                    detail.push_str(
                        "; at this finite offset the exactly integrated system locks onto a \
                         stable inhomogeneous periodic orbit (verified at dt = 1e-3 and 1e-2, \
                         spectral in space, 128 modes, horizon 9000): the mixed-mode state's \
                         oscillatory instability margin predicted by the cubic reduction \
                         (+8e-4) is below the truncation error at |alpha| ~ 0.06, so its \
                         torus is not realized by the exact dynamics here",
                    );
                }
                gate.check(name, got == expected, detail);
            }
            Err(e) => gate.check(name, false, format!("simulation failed: {e}")),
        }
    }
    gate.finish();
}

#[test]
fn acceptance_8_linear_regime_fidelity() {
    let mut gate = Gate::new("8", "perturbation growth rates vs eigenvalues");
    let params = ModelParams::new(SEC3.0, SEC3.1, SEC3.2, SEC3.3, 0.1, 1.593334).unwrap();
    for n in 0..=4u32 {
        let want = spectrum::mode_eigenvalues(&params, n).lambda_plus.re;
        let got = measured_mode_rate(&params, n, 128);
        gate.check(
            &format!("mode {n}"),
            (got - want).abs() <= 0.02 * want.abs(),
            format!("measured {got:.6e}, eigenvalue {want:.6e}"),
        );
    }
    gate.finish();
}

#[test]
fn acceptance_9_invariant_batteries() {
    let mut gate = Gate::new("9", "module invariant batteries (1000+ samples)");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    // Kinetics: equilibrium residual, jacobian identities, Taylor oracle.
    let mut worst_residual = 0.0f64;
    for _ in 0..1000 {
        let p = sample_params(&mut rng, false);
        let eq = kinetics::equilibrium(&p);
        worst_residual = worst_residual.max(eq.residual(p.a, p.b).abs());
        assert!(eq.u0 > 0.0 && eq.u0 < 1.0);
        let lin = kinetics::linearize(&p);
        assert_eq!(lin.b0, eq.u0 - 1.0);
        let thr = kinetics::a_threshold(p.b);
        if (p.a / thr - 1.0).abs() > 1e-9 {
            assert_eq!(lin.a0 > 0.0, p.a > thr, "{p:?}");
        }
    }
    gate.check(
        "equilibrium residual < 1e-12",
        worst_residual < 1e-12,
        format!("{worst_residual:.3e}"),
    );

    let mut worst_taylor = 0.0f64;
    for _ in 0..20 {
        let p = sample_params(&mut rng, false);
        worst_taylor = worst_taylor.max(taylor_disagreement(
            &kinetics::taylor_coefficients(&p),
            &taylor_by_finite_differences(&p),
        ));
    }
    gate.check(
        "taylor vs finite differences < 1e-5",
        worst_taylor < 1e-5,
        format!("{worst_taylor:.3e}"),
    );

    // Spectrum: root identities, curve zero-sets, stability oracle.
    let mut worst_vieta = 0.0f64;
    let mut worst_zero = 0.0f64;
    for _ in 0..1000 {
        let p = sample_params(&mut rng, false);
        let ld = LinearData::from_params(&p);
        for n in 0..6u32 {
            let q = spectrum::mode_quadratic(&p, n);
            let e = spectrum::mode_eigenvalues(&p, n);
            let scale = q.tn.abs().max(q.dn.abs()).max(1.0);
            worst_vieta = worst_vieta
                .max(((e.lambda_plus + e.lambda_minus).re - q.tn).abs() / scale)
                .max(((e.lambda_plus * e.lambda_minus).re - q.dn).abs() / scale);
            if n >= 1 {
                let x = (n as f64 / p.l).powi(2);
                let rh = spectrum::hopf_curve(&ld, n, p.l);
                worst_zero = worst_zero.max((ld.a0 - (ld.d1 + ld.d2) * x - rh).abs());
                let rt = spectrum::turing_curve(&ld, n, p.l).unwrap();
                worst_zero = worst_zero.max(
                    (ld.d2 * x * (ld.d1 * x - ld.a0) + rt * (ld.d1 * x - ld.a0 - ld.b0)).abs()
                        / (1.0 + rt.abs()),
                );
            }
        }
        let v = spectrum::steady_state_stability(&p);
        if v.status == Stability::Stable {
            assert!(v.max_re_lambda < 0.0 && v.witnesses.is_empty(), "{p:?}");
        }
        assert_eq!(spectrum::hopf_curve(&ld, 0, p.l), ld.a0);
        assert_eq!(spectrum::turing_curve(&ld, 0, p.l).unwrap(), 0.0);
    }
    gate.check(
        "eigenvalue identities < 1e-12",
        worst_vieta < 1e-12,
        format!("{worst_vieta:.3e}"),
    );
    gate.check(
        "critical curves are zero sets",
        worst_zero < 1e-9,
        format!("{worst_zero:.3e}"),
    );

    // Regime classification: total and ordered against r*.
    let mut count = 0;
    while count < 10_000 {
        let p = sample_params(&mut rng, false);
        let ld = LinearData::from_params(&p);
        if ld.a0 <= 0.0 {
            continue;
        }
        count += 1;
        let label = critical_sets::classify_regime(p.a, p.b, p.d1, p.d2, p.l).expect("total");
        let rs = spectrum::r_star(&ld, p.l).value;
        if label.dominant_oscillatory() {
            assert!(ld.a0 > rs - 1e-9, "{p:?} {label}");
        } else if label == RegimeLabel::A6DoublePrime {
            assert!(ld.a0 < rs + 1e-9, "{p:?}");
        } else {
            assert!((ld.a0 - rs).abs() < 1e-8, "{p:?}");
        }
    }
    gate.check(
        "regime classification total on 1e4 samples",
        true,
        String::new(),
    );

    // Coincidence sets re-verify their defining equalities.
    let mut windows = 0;
    while windows < 150 {
        let p = sample_params(&mut rng, true);
        let ld = LinearData::from_params(&p);
        let sets = match critical_sets::enumerate_codim2(&ld, 0.4 * p.l, 2.0 * p.l) {
            Ok(s) => s,
            Err(_) => continue,
        };
        windows += 1;
        for e in &sets.th {
            let rh = spectrum::hopf_curve(&ld, e.hopf_mode, e.l);
            let rt = spectrum::turing_curve(&ld, e.turing_mode, e.l).unwrap();
            assert!((rh - rt).abs() < 1e-9 && rh > 0.0, "{e:?}");
        }
        let th = sets.th_lengths(1e-5);
        for l in sets.tth_lengths(1e-5) {
            assert!(th.iter().any(|t| (t - l).abs() < 1e-4 * l.max(1.0)));
        }
    }
    gate.check("coincidence entries re-verify", true, String::new());

    // Planar system: equilibria satisfy the flow, regions direction-only.
    let (_, _, planar, _) = sec3_pipeline();
    use rand::Rng;
    for _ in 0..1000 {
        let a1 = rng.random_range(-0.1..0.1);
        let a2 = rng.random_range(-0.1..0.1);
        let eqs = normal_form::planar_equilibria(&planar, a1, a2);
        for e in [Some(eqs.e1), eqs.e2, eqs.e3, eqs.e4].into_iter().flatten() {
            let (dr, dv) = normal_form::planar_flow(&planar, (a1, a2), (e.rho, e.v));
            assert!(dr.abs() < 1e-12 && dv.abs() < 1e-12);
        }
        if a1 != 0.0 || a2 != 0.0 {
            let r1 = normal_form::classify_region(&planar, a1, a2).unwrap();
            let s = rng.random_range(1e-3..1e3);
            let r2 = normal_form::classify_region(&planar, s * a1, s * a2).unwrap();
            assert_eq!(r1, r2);
        }
    }
    gate.check("planar equilibria satisfy the flow", true, String::new());

    // Simulator battery: fixed-point preservation over 1e4 steps.
    let p = ModelParams::new(SEC3.0, SEC3.1, SEC3.2, SEC3.3, 0.2, 1.6).unwrap();
    let grid = Grid::new(1.6, 64).unwrap();
    let u0 = kinetics::equilibrium(&p).u0;
    let config = SimConfig {
        dt: 1e-3,
        t_end: 10.0,
        save_stride: 10_000,
        ic: IcSpec {
            u: FieldIc::constant(u0),
            v: FieldIc::constant(u0),
        },
        probes: vec![0.0],
        n_modes: 8,
    };
    let traj = rdsim::simulate(&p, &grid, &config).unwrap();
    let drift = traj
        .snapshots
        .last()
        .unwrap()
        .u
        .iter()
        .map(|x| (x - u0).abs())
        .fold(0.0, f64::max);
    gate.check(
        "fixed point preserved to 1e-10",
        drift < 1e-10,
        format!("{drift:.3e}"),
    );

    // Prediction table sanity at the reference planar data.
    let d1p = normal_form::predict_attractors(&planar, normal_form::RegionLabel::D1).unwrap();
    gate.check(
        "region-1 prediction",
        d1p.contains_stable(PatternKind::ConstantSteady),
        format!("{d1p:?}"),
    );
    let d4p = normal_form::predict_attractors(&planar, normal_form::RegionLabel::D4).unwrap();
    gate.check(
        "region-4 prediction",
        d4p.contains_stable(PatternKind::InhomogeneousPeriodic),
        format!("{d4p:?}"),
    );
    gate.finish();
}
