//! Command implementations and their JSON/CSV emission.

use crate::config::{Config, SimSection};
use crate::{CliError, CliResult};
use rayon::prelude::*;
use std::fs;
use std::path::{Path, PathBuf};
use tanner_core::bifurcation;
use tanner_core::critical_sets::{self, CodimTwoSets};
use tanner_core::kinetics::{self, ModelParams};
use tanner_core::normal_form::{self, PatternKind, PlanarSystem, Ray, RegionLabel};
use tanner_core::rdsim::{self, classify_report, ClassifierTolerances, Grid, IcSpec, SimConfig};
use tanner_core::report::{fmt_g17, json};
use tanner_core::spectrum::{self, LinearData, Stability};
use tanner_core::Error;

pub struct Ctx {
    pub config: Config,
    pub out: Option<PathBuf>,
    pub format: String,
    pub strict: bool,
    pub integrality_tol: f64,
}

impl Ctx {
    fn kinetic_params(&self) -> CliResult<(f64, f64, f64, f64)> {
        let p = &self.config.params;
        match (p.a, p.b, p.d1, p.d2) {
            (Some(a), Some(b), Some(d1), Some(d2)) => Ok((a, b, d1, d2)),
            _ => Err(CliError::Validation(
                "parameters a, b, d1, d2 are required (config `params` or flags)".into(),
            )),
        }
    }

    fn full_params(&self) -> CliResult<ModelParams> {
        let (a, b, d1, d2) = self.kinetic_params()?;
        let p = &self.config.params;
        match (p.r, p.l) {
            (Some(r), Some(l)) => Ok(ModelParams::new(a, b, d1, d2, r, l)?),
            _ => Err(CliError::Validation(
                "parameters r and l are required".into(),
            )),
        }
    }

    fn l_window(&self) -> CliResult<(f64, f64)> {
        if let Some([lo, hi]) = self.config.l_window {
            if !(lo > 0.0 && hi > lo) {
                return Err(CliError::Validation(format!(
                    "l_window must satisfy 0 < lo < hi, got [{lo}, {hi}]"
                )));
            }
            return Ok((lo, hi));
        }
        match self.config.params.l {
            Some(l) if l > 0.0 => Ok((0.5 * l, 1.5 * l)),
            _ => Err(CliError::Validation(
                "l_window (or params.l for a default window) is required".into(),
            )),
        }
    }

    fn classifier(&self) -> ClassifierTolerances {
        self.config.classifier.unwrap_or_default()
    }

    fn write_out(&self, name: &str, bytes: &[u8]) -> CliResult<()> {
        let dir = self
            .out
            .as_ref()
            .ok_or_else(|| CliError::Validation("--out <dir> is required here".into()))?;
        fs::create_dir_all(dir).map_err(|e| CliError::Validation(e.to_string()))?;
        fs::write(dir.join(name), bytes).map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(())
    }
}

fn sets_json(sets: &CodimTwoSets) -> (String, String, String) {
    let tt = json::arr(sets.tt.iter().map(|p| {
        json::obj(&[
            ("l", json::num(p.l)),
            ("r", json::num(p.r)),
            (
                "modes",
                json::arr([json::int(p.modes.0 as i64), json::int(p.modes.1 as i64)]),
            ),
        ])
    }));
    let th = json::arr(sets.th.iter().map(|p| {
        json::obj(&[
            ("l", json::num(p.l)),
            ("r", json::num(p.r)),
            (
                "modes",
                json::arr([
                    json::int(p.hopf_mode as i64),
                    json::int(p.turing_mode as i64),
                ]),
            ),
        ])
    }));
    let tth = json::arr(sets.tth.iter().map(|p| {
        json::obj(&[
            ("l", json::num(p.l)),
            ("r", json::num(p.r)),
            (
                "modes",
                json::arr([
                    json::int(p.hopf_mode as i64),
                    json::int(p.turing_modes.0 as i64),
                    json::int(p.turing_modes.1 as i64),
                ]),
            ),
        ])
    }));
    (tt, th, tth)
}

fn stability_json(params: &ModelParams) -> String {
    let v = spectrum::steady_state_stability(params);
    let status = match v.status {
        Stability::Stable => "stable",
        Stability::Unstable => "unstable",
        Stability::Marginal => "marginal",
    };
    json::obj(&[
        ("status", json::string(status)),
        (
            "witnesses",
            json::arr(v.witnesses.iter().map(|&n| json::int(n as i64))),
        ),
        ("max_re_lambda", json::num(v.max_re_lambda)),
    ])
}

fn regime_json(ctx: &Ctx, a: f64, b: f64, d1: f64, d2: f64, l: f64) -> CliResult<String> {
    let ld = LinearData::new(a, b, d1, d2);
    let label = critical_sets::classify_regime_with_tol(a, b, d1, d2, l, ctx.integrality_tol)?;
    let aux = critical_sets::aux_points(&ld)?;
    let th = critical_sets::regime_thresholds(b, d1, d2);
    let counts = critical_sets::mode_counts(&ld, l)?;
    let rs = spectrum::r_star(&ld, l);
    let sets = critical_sets::codim2_at(&ld, l)?;
    let (tt, thj, tth) = sets_json(&sets);

    let mut fields: Vec<(&str, String)> = vec![
        ("label", json::string(&label.to_string())),
        ("A0", json::num(ld.a0)),
        ("r_star", json::num(rs.value)),
        (
            "r_star_modes",
            json::arr(rs.modes.iter().map(|&n| json::int(n as i64))),
        ),
        ("x_hat", json::num(aux.x_hat)),
        ("x_bar", json::num(aux.x_bar)),
    ];
    if let Some(x) = aux.x_minus {
        fields.push(("x_minus", json::num(x)));
    }
    if let Some(x) = aux.x_plus {
        fields.push(("x_plus", json::num(x)));
    }
    fields.push(("b_star", json::num(th.b_star)));
    if let Some(x) = th.a_minus {
        fields.push(("a_minus", json::num(x)));
    }
    if let Some(x) = th.a_plus {
        fields.push(("a_plus", json::num(x)));
    }
    fields.push(("N1", json::int(counts.n1 as i64)));
    fields.push(("N2", json::int(counts.n2 as i64)));
    if let Some(m1) = counts.m1 {
        fields.push(("M1", json::int(m1 as i64)));
    }
    if let Some(m2) = counts.m2 {
        fields.push(("M2", json::int(m2 as i64)));
    }
    fields.push(("L_TT", tt));
    fields.push(("L_TH", thj));
    fields.push(("L_TTH", tth));
    Ok(json::obj(&fields))
}

pub fn cmd_analyze(ctx: &Ctx) -> CliResult<()> {
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    let ld = LinearData::new(a, b, d1, d2);

    if ctx.format == "csv" {
        let l =
            ctx.config.params.l.ok_or_else(|| {
                CliError::Validation("params.l required for curve sampling".into())
            })?;
        let n_max = spectrum::n2_count(&ld, 2.0 * l).max(2);
        let pts = spectrum::sample_curves(&ld, n_max, 0.25 * l, 2.0 * l, 256);
        let mut buf = Vec::new();
        spectrum::write_curve_csv(&pts, &mut buf).map_err(Error::from)?;
        print!("{}", String::from_utf8_lossy(&buf));
        if ctx.out.is_some() {
            ctx.write_out("curves.csv", &buf)?;
        }
        return Ok(());
    }

    let report = if ld.a0 <= 0.0 {
        // Below the kinetic threshold the state is stable for every r, l.
        json::obj(&[
            (
                "stability",
                json::obj(&[
                    ("status", json::string("stable")),
                    ("witnesses", json::arr([])),
                    ("note", json::string("stable for all r, l")),
                ]),
            ),
            ("regime", "null".to_string()),
        ])
    } else {
        let params = ctx.full_params()?;
        json::obj(&[
            ("stability", stability_json(&params)),
            ("regime", regime_json(ctx, a, b, d1, d2, params.l)?),
        ])
    };
    println!("{report}");
    if ctx.out.is_some() {
        ctx.write_out("report.json", report.as_bytes())?;
    }
    Ok(())
}

pub fn cmd_codim2(ctx: &Ctx) -> CliResult<()> {
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    let ld = LinearData::new(a, b, d1, d2);
    let sets = if ctx.config.l_window.is_some() {
        let (lo, hi) = ctx.l_window()?;
        critical_sets::enumerate_codim2(&ld, lo, hi)?
    } else {
        let l = ctx
            .config
            .params
            .l
            .ok_or_else(|| CliError::Validation("params.l or l_window required".into()))?;
        critical_sets::codim2_at(&ld, l)?
    };
    let (tt, th, tth) = sets_json(&sets);
    let report = json::obj(&[("L_TT", tt), ("L_TH", th), ("L_TTH", tth)]);
    println!("{report}");
    if ctx.out.is_some() {
        ctx.write_out("codim2.json", report.as_bytes())?;
    }
    Ok(())
}

pub fn cmd_diagram(ctx: &Ctx) -> CliResult<()> {
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    let section = ctx
        .config
        .diagram
        .as_ref()
        .ok_or_else(|| CliError::Validation("config `diagram` section required".into()))?;
    let sample = bifurcation::diagram(
        a,
        b,
        d1,
        d2,
        (section.r_min, section.r_max),
        (section.l_min, section.l_max),
        section.resolution,
    )?;
    let mut csv = Vec::new();
    bifurcation::write_diagram_csv(&sample, &mut csv).map_err(Error::from)?;
    let inter = bifurcation::intersections_json(&sample);
    if ctx.out.is_some() {
        ctx.write_out("diagram.csv", &csv)?;
        ctx.write_out("intersections.json", inter.as_bytes())?;
        println!(
            "{}",
            json::obj(&[
                ("curve_points", json::int(sample.curves.len() as i64)),
                (
                    "intersections",
                    json::int(sample.intersections.len() as i64)
                ),
            ])
        );
    } else if ctx.format == "csv" {
        print!("{}", String::from_utf8_lossy(&csv));
    } else {
        println!("{inter}");
    }
    Ok(())
}

fn complex_json(z: (f64, f64)) -> String {
    json::obj(&[("re", json::num(z.0)), ("im", json::num(z.1))])
}

fn ray_json(ray: Ray) -> String {
    match ray {
        Ray::VerticalUp => json::obj(&[
            ("kind", json::string("vertical")),
            ("alpha2_sign", json::int(1)),
        ]),
        Ray::VerticalDown => json::obj(&[
            ("kind", json::string("vertical")),
            ("alpha2_sign", json::int(-1)),
        ]),
        Ray::Slanted {
            slope,
            alpha1_positive,
        } => json::obj(&[
            ("kind", json::string("slanted")),
            ("slope", json::num(slope)),
            (
                "alpha1_sign",
                json::int(if alpha1_positive { 1 } else { -1 }),
            ),
        ]),
    }
}

fn normal_form_pipeline(
    ctx: &Ctx,
) -> CliResult<(
    normal_form::TuringHopfPoint,
    normal_form::NormalFormCoefficients,
    PlanarSystem,
    normal_form::BifurcationLines,
)> {
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    let window = ctx.l_window()?;
    Ok(normal_form::analyze_turing_hopf(a, b, d1, d2, window)?)
}

fn normal_form_json(
    point: &normal_form::TuringHopfPoint,
    nf: &normal_form::NormalFormCoefficients,
    planar: &PlanarSystem,
    lines: &normal_form::BifurcationLines,
) -> String {
    json::obj(&[
        (
            "point",
            json::obj(&[
                ("r", json::num(point.r_star)),
                ("l", json::num(point.l_star)),
                ("n_star", json::int(point.turing_mode as i64)),
                ("omega0", json::num(point.omega0)),
            ]),
        ),
        (
            "coefficients",
            json::obj(&[
                ("f_a1z1", complex_json((nf.f_a1z1.re, nf.f_a1z1.im))),
                ("f_a2z1", complex_json((nf.f_a2z1.re, nf.f_a2z1.im))),
                ("f_a1z2", json::num(nf.f_a1z2)),
                ("f_a2z2", json::num(nf.f_a2z2)),
                ("g210", complex_json((nf.g210.re, nf.g210.im))),
                ("g102", complex_json((nf.g102.re, nf.g102.im))),
                ("g111", json::num(nf.g111)),
                ("g003", json::num(nf.g003)),
            ]),
        ),
        (
            "planar",
            json::obj(&[
                ("b0", json::num(planar.b0)),
                ("c0", json::num(planar.c0)),
                ("d0", json::num(planar.d0)),
                (
                    "eps1",
                    json::arr([json::num(planar.eps1_map[0]), json::num(planar.eps1_map[1])]),
                ),
                (
                    "eps2",
                    json::arr([json::num(planar.eps2_map[0]), json::num(planar.eps2_map[1])]),
                ),
            ]),
        ),
        (
            "lines",
            json::obj(&[
                ("L1", ray_json(lines.line(1))),
                ("L2", ray_json(lines.line(2))),
                ("L3", ray_json(lines.line(3))),
                ("L4", ray_json(lines.line(4))),
                ("L5", ray_json(lines.line(5))),
                ("L6", ray_json(lines.line(6))),
                ("L7", ray_json(lines.line(7))),
            ]),
        ),
    ])
}

pub fn cmd_normalform(ctx: &Ctx) -> CliResult<()> {
    let (point, nf, planar, lines) = normal_form_pipeline(ctx)?;
    let report = normal_form_json(&point, &nf, &planar, &lines);
    println!("{report}");
    if ctx.out.is_some() {
        ctx.write_out("normalform.json", report.as_bytes())?;
        // Region labels on a small offset grid around the critical point.
        let mut csv = String::from("alpha1,alpha2,region\n");
        let n = 41;
        for i in 0..n {
            for j in 0..n {
                let a1 = -0.1 + 0.2 * i as f64 / (n - 1) as f64;
                let a2 = -0.1 + 0.2 * j as f64 / (n - 1) as f64;
                if a1 == 0.0 && a2 == 0.0 {
                    continue;
                }
                let region = normal_form::classify_region(&planar, a1, a2)?;
                csv.push_str(&format!("{},{},{}\n", fmt_g17(a1), fmt_g17(a2), region));
            }
        }
        ctx.write_out("regions.csv", csv.as_bytes())?;
    }
    Ok(())
}

fn equilibrium_json(e: &normal_form::PlanarEquilibrium) -> String {
    json::obj(&[
        ("rho", json::num(e.rho)),
        ("v", json::num(e.v)),
        ("stable", json::boolean(e.stable)),
        (
            "eigenvalues",
            json::arr([
                complex_json((e.eigenvalues.0.re, e.eigenvalues.0.im)),
                complex_json((e.eigenvalues.1.re, e.eigenvalues.1.im)),
            ]),
        ),
    ])
}

fn prediction_json(pred: &normal_form::AttractorPrediction) -> String {
    json::arr(pred.objects.iter().map(|o| {
        json::obj(&[
            ("pattern", json::string(&o.pattern.to_string())),
            ("stable", json::boolean(o.stable)),
            ("multiplicity", json::int(o.multiplicity as i64)),
        ])
    }))
}

pub fn cmd_planar(ctx: &Ctx) -> CliResult<()> {
    let (_, _, planar, _) = normal_form_pipeline(ctx)?;
    let [a1, a2] = ctx.config.alpha.ok_or_else(|| {
        CliError::Validation("alpha offsets required (config `alpha` or flags)".into())
    })?;
    let eqs = normal_form::planar_equilibria(&planar, a1, a2);
    let region = normal_form::classify_region(&planar, a1, a2)?;

    let mut fields: Vec<(&str, String)> = vec![
        ("alpha", json::arr([json::num(a1), json::num(a2)])),
        ("eps1", json::num(eqs.eps1)),
        ("eps2", json::num(eqs.eps2)),
        ("region", json::string(&region.to_string())),
        ("E1", equilibrium_json(&eqs.e1)),
    ];
    if let Some(e) = eqs.e2.as_ref() {
        fields.push(("E2", equilibrium_json(e)));
    }
    if let Some(e) = eqs.e3.as_ref() {
        fields.push(("E3", equilibrium_json(e)));
    }
    if let Some(e) = eqs.e4.as_ref() {
        fields.push(("E4", equilibrium_json(e)));
    }
    if region != RegionLabel::OnBoundary {
        let pred = normal_form::predict_attractors(&planar, region)?;
        fields.push(("predicted", prediction_json(&pred)));
    }
    let report = json::obj(&fields);
    println!("{report}");
    if ctx.out.is_some() {
        ctx.write_out("planar.json", report.as_bytes())?;
    }
    Ok(())
}

fn ic_json(ic: &IcSpec) -> String {
    let field = |f: &rdsim::FieldIc| {
        json::obj(&[
            ("base", json::num(f.base)),
            (
                "terms",
                json::arr(f.terms.iter().map(|t| {
                    json::obj(&[
                        ("amplitude", json::num(t.amplitude)),
                        ("wavenumber", json::num(t.wavenumber)),
                        (
                            "shape",
                            json::string(match t.shape {
                                rdsim::Waveform::Sin => "sin",
                                rdsim::Waveform::Cos => "cos",
                            }),
                        ),
                    ])
                })),
            ),
        ])
    };
    json::obj(&[("u", field(&ic.u)), ("v", field(&ic.v))])
}

fn sim_config_json(grid: &Grid, config: &SimConfig) -> String {
    json::obj(&[
        ("dt", json::num(config.dt)),
        ("t_end", json::num(config.t_end)),
        ("save_stride", json::int(config.save_stride as i64)),
        ("m", json::int(grid.m as i64)),
        ("ic", ic_json(&config.ic)),
        (
            "probes",
            json::arr(config.probes.iter().map(|&x| json::num(x))),
        ),
        ("n_modes", json::int(config.n_modes as i64)),
    ])
}

fn params_json(p: &ModelParams) -> String {
    json::obj(&[
        ("a", json::num(p.a)),
        ("b", json::num(p.b)),
        ("d1", json::num(p.d1)),
        ("d2", json::num(p.d2)),
        ("r", json::num(p.r)),
        ("l", json::num(p.l)),
    ])
}

fn classifier_report_json(rep: &rdsim::classify::ClassifierReport) -> String {
    json::obj(&[
        ("class", json::string(&rep.class.to_string())),
        ("temporal_variance", json::num(rep.temporal_variance)),
        ("spatial_variance", json::num(rep.spatial_variance)),
        ("higher_mode_max", json::num(rep.higher_mode_max)),
        (
            "dominant_mode",
            rep.dominant_mode
                .map_or("null".into(), |m| json::int(m as i64)),
        ),
        ("envelope_depth", json::num(rep.envelope_depth)),
        (
            "envelope_crossings",
            json::int(rep.envelope_crossings as i64),
        ),
        ("envelope_persistence", json::num(rep.envelope_persistence)),
        (
            "envelope_spectral_ratio",
            json::num(rep.envelope_spectral_ratio),
        ),
        (
            "fundamental_frequencies",
            json::arr(rep.fundamental_frequencies.iter().map(|&f| json::num(f))),
        ),
    ])
}

/// Resolves simulation parameters: explicit `(r, l)` or offsets from
/// the located critical point.
fn resolve_sim_params(ctx: &Ctx) -> CliResult<ModelParams> {
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    if let Some([a1, a2]) = ctx.config.alpha {
        let window = ctx.l_window()?;
        let point = normal_form::locate_turing_hopf(a, b, d1, d2, window)?;
        Ok(ModelParams::new(
            a,
            b,
            d1,
            d2,
            point.r_star + a1,
            point.l_star + a2,
        )?)
    } else {
        ctx.full_params()
    }
}

fn run_simulation(
    params: &ModelParams,
    sim: &SimSection,
    tol: &ClassifierTolerances,
    ic: IcSpec,
) -> CliResult<(
    Grid,
    SimConfig,
    rdsim::Trajectory,
    rdsim::classify::ClassifierReport,
)> {
    let grid = Grid::new(params.l, sim.m)?;
    let config = SimConfig {
        dt: sim.dt,
        t_end: sim.t_end,
        save_stride: sim.save_stride,
        ic,
        probes: sim.probes.clone(),
        n_modes: sim.n_modes,
    };
    let traj = rdsim::simulate(params, &grid, &config)?;
    let report = classify_report(&traj, tol)?;
    Ok((grid, config, traj, report))
}

pub fn cmd_simulate(ctx: &Ctx) -> CliResult<()> {
    let params = resolve_sim_params(ctx)?;
    let sim = ctx.config.sim.clone().unwrap_or_default();
    let u0 = kinetics::equilibrium(&params).u0;
    let ic = sim.ic.resolve(u0);
    let (grid, config, traj, report) = run_simulation(&params, &sim, &ctx.classifier(), ic)?;

    let mut snaps = Vec::new();
    let mut probes = Vec::new();
    let mut modes = Vec::new();
    rdsim::io::write_snapshots_csv(&traj, &mut snaps).map_err(Error::from)?;
    rdsim::io::write_probes_csv(&traj, &mut probes).map_err(Error::from)?;
    rdsim::io::write_modes_csv(&traj, &mut modes).map_err(Error::from)?;
    let manifest = json::obj(&[
        ("params", params_json(&params)),
        ("config", sim_config_json(&grid, &config)),
        ("verdict", json::string(&report.class.to_string())),
        ("report", classifier_report_json(&report)),
    ]);
    ctx.write_out("snapshots.csv", &snaps)?;
    ctx.write_out("probes.csv", &probes)?;
    ctx.write_out("modes.csv", &modes)?;
    ctx.write_out("manifest.json", manifest.as_bytes())?;
    println!(
        "{}",
        json::obj(&[("verdict", json::string(&report.class.to_string()))])
    );
    Ok(())
}

pub fn cmd_classify(ctx: &Ctx, run_dir_flag: Option<&str>) -> CliResult<()> {
    let dir = run_dir_flag
        .map(str::to_string)
        .or_else(|| ctx.config.classify.as_ref().map(|c| c.run_dir.clone()))
        .ok_or_else(|| {
            CliError::Validation("--run-dir (or config `classify.run_dir`) required".into())
        })?;
    let read = |name: &str| -> CliResult<String> {
        fs::read_to_string(Path::new(&dir).join(name))
            .map_err(|e| CliError::Validation(format!("cannot read {name} in {dir}: {e}")))
    };
    let traj = rdsim::io::read_trajectory(
        &read("snapshots.csv")?,
        &read("probes.csv")?,
        &read("modes.csv")?,
    )?;
    let report = classify_report(&traj, &ctx.classifier())?;
    println!(
        "{}",
        json::obj(&[
            ("verdict", json::string(&report.class.to_string())),
            ("report", classifier_report_json(&report)),
        ])
    );
    Ok(())
}

fn class_matches(observed: rdsim::AttractorClass, pattern: PatternKind) -> bool {
    matches!(
        (observed, pattern),
        (
            rdsim::AttractorClass::ConstantSteady,
            PatternKind::ConstantSteady
        ) | (
            rdsim::AttractorClass::NonconstantSteady,
            PatternKind::NonconstantSteady
        ) | (
            rdsim::AttractorClass::HomogeneousPeriodic,
            PatternKind::HomogeneousPeriodic
        ) | (
            rdsim::AttractorClass::InhomogeneousPeriodic,
            PatternKind::InhomogeneousPeriodic
        ) | (
            rdsim::AttractorClass::InhomogeneousQuasiPeriodic,
            PatternKind::InhomogeneousQuasiPeriodic
        )
    )
}

pub fn cmd_sweep(ctx: &Ctx) -> CliResult<()> {
    let sweep = ctx
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Validation("config `sweep` section required".into()))?;
    if sweep.points.is_empty() || sweep.ics.is_empty() {
        return Err(CliError::Validation("sweep needs points and ics".into()));
    }
    let (a, b, d1, d2) = ctx.kinetic_params()?;
    let window = ctx.l_window()?;
    let (point, _, planar, _) = normal_form::analyze_turing_hopf(a, b, d1, d2, window)?;
    let u0 = kinetics::equilibrium(&point.params).u0;
    let tol = ctx.classifier();

    struct Row {
        alpha: [f64; 2],
        ic_label: String,
        outcome: Result<(RegionLabel, Vec<PatternKind>, rdsim::AttractorClass, bool), Error>,
    }

    let jobs: Vec<([f64; 2], &crate::config::LabeledIc)> = sweep
        .points
        .iter()
        .flat_map(|&p| sweep.ics.iter().map(move |ic| (p, ic)))
        .collect();

    let rows: Vec<Row> = jobs
        .par_iter()
        .map(|&(alpha, labeled)| {
            let outcome = (|| {
                let region = normal_form::classify_region(&planar, alpha[0], alpha[1])?;
                let predicted: Vec<PatternKind> = if region == RegionLabel::OnBoundary {
                    Vec::new()
                } else {
                    normal_form::predict_attractors(&planar, region)?.stable_patterns()
                };
                let params = ModelParams::new(
                    a,
                    b,
                    d1,
                    d2,
                    point.r_star + alpha[0],
                    point.l_star + alpha[1],
                )?;
                let grid = Grid::new(params.l, sweep.sim.m)?;
                let config = SimConfig {
                    dt: sweep.sim.dt,
                    t_end: sweep.sim.t_end,
                    save_stride: sweep.sim.save_stride,
                    ic: labeled.ic.resolve(u0),
                    probes: sweep.sim.probes.clone(),
                    n_modes: sweep.sim.n_modes,
                };
                let traj = rdsim::simulate(&params, &grid, &config)?;
                let observed = rdsim::classify_attractor(&traj, &tol)?;
                let agree = predicted.iter().any(|&p| class_matches(observed, p));
                Ok((region, predicted, observed, agree))
            })();
            Row {
                alpha,
                ic_label: labeled.label.clone(),
                outcome,
            }
        })
        .collect();

    let mut any_disagree = false;
    let rows_json = json::arr(rows.iter().map(|row| {
        let mut fields: Vec<(&str, String)> = vec![
            ("alpha1", json::num(row.alpha[0])),
            ("alpha2", json::num(row.alpha[1])),
            ("ic", json::string(&row.ic_label)),
        ];
        match &row.outcome {
            Ok((region, predicted, observed, agree)) => {
                if !agree {
                    any_disagree = true;
                }
                fields.push(("region", json::string(&region.to_string())));
                fields.push((
                    "predicted",
                    json::arr(predicted.iter().map(|p| json::string(&p.to_string()))),
                ));
                fields.push(("observed", json::string(&observed.to_string())));
                fields.push(("agree", json::boolean(*agree)));
            }
            Err(e) => {
                any_disagree = true;
                fields.push(("error", json::string(&e.to_string())));
                fields.push(("agree", json::boolean(false)));
            }
        }
        json::obj(&fields)
    }));
    let report = json::obj(&[
        (
            "point",
            json::obj(&[
                ("r", json::num(point.r_star)),
                ("l", json::num(point.l_star)),
            ]),
        ),
        ("rows", rows_json),
    ]);
    if ctx.out.is_some() {
        ctx.write_out("sweep.json", report.as_bytes())?;
    }
    println!("{report}");
    if ctx.strict && any_disagree {
        return Err(CliError::Disagreement);
    }
    Ok(())
}
