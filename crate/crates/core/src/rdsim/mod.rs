//! Cosine-spectral simulator for the reaction-diffusion system on
//! `(0, l*pi)` with no-flux boundaries.
//!
//! Space is discretized in the no-flux cosine basis (the boundary
//! condition is exact there). Time stepping is Strang splitting: an
//! exact per-mode diffusion factor `exp(-d (n/l)^2 dt/2)` on both sides
//! of one explicit second-order (Heun) reaction step, second order
//! overall.

pub mod classify;
mod dct;
pub mod io;

pub use classify::{
    classify_attractor, classify_report, AttractorClass, ClassifierReport, ClassifierTolerances,
};

use crate::error::{Error, Result};
use crate::kinetics::{self, ModelParams};
use dct::CosineTransform;
use std::f64::consts::PI;

/// Fields larger than this abort the run.
pub const BLOWUP_LIMIT: f64 = 1e3;
/// Prey densities at or below this abort the run.
pub const SINGULAR_U: f64 = 1e-10;

/// Uniform endpoint-inclusive grid on `(0, l*pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub l: f64,
    pub m: usize,
}

impl Grid {
    pub fn new(l: f64, m: usize) -> Result<Self> {
        if !l.is_finite() || l <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid needs l > 0, got {l}"
            )));
        }
        if m < 64 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 64 collocation points, got {m}"
            )));
        }
        Ok(Self { l, m })
    }

    pub fn length(&self) -> f64 {
        self.l * PI
    }

    pub fn point(&self, j: usize) -> f64 {
        self.length() * j as f64 / (self.m - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.point(j)).collect()
    }
}

/// Prey/predator densities at the collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Waveform {
    Sin,
    Cos,
}

/// One sinusoidal perturbation term `amplitude * shape(wavenumber * x)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub shape: Waveform,
}

/// Base value plus perturbations for one field.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldIc {
    pub base: f64,
    #[serde(default)]
    pub terms: Vec<Perturbation>,
}

impl FieldIc {
    pub fn constant(base: f64) -> Self {
        Self {
            base,
            terms: Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut y = self.base;
        for t in &self.terms {
            let phase = t.wavenumber * x;
            y += t.amplitude
                * match t.shape {
                    Waveform::Sin => phase.sin(),
                    Waveform::Cos => phase.cos(),
                };
        }
        y
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSpec {
    pub u: FieldIc,
    pub v: FieldIc,
}

/// Pointwise evaluation of the perturbed base state; rejects initial
/// data with non-positive prey density anywhere.
pub fn initial_condition(grid: &Grid, ic: &IcSpec) -> Result<Field> {
    let mut u = Vec::with_capacity(grid.m);
    let mut v = Vec::with_capacity(grid.m);
    for j in 0..grid.m {
        let x = grid.point(j);
        u.push(ic.u.eval(x));
        v.push(ic.v.eval(x));
    }
    if let Some(&bad) = u.iter().find(|&&y| y <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "initial prey density must be positive everywhere (found {bad})"
        )));
    }
    Ok(Field { u, v })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Steps between recorded samples.
    pub save_stride: usize,
    pub ic: IcSpec,
    /// Probe locations in `[0, l*pi]`; `x = 0` is added when empty.
    #[serde(default)]
    pub probes: Vec<f64>,
    /// Number of recorded cosine modes (indices `0..=n_modes`).
    #[serde(default = "default_modes")]
    pub n_modes: usize,
}

fn default_modes() -> usize {
    16
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.t_end > self.dt) {
            return Err(Error::InvalidParameter(
                "simulation needs dt > 0 and t_end > dt".into(),
            ));
        }
        if self.save_stride == 0 {
            return Err(Error::InvalidParameter("save_stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Saved outputs of one run: full snapshots, probe series and cosine
/// mode amplitude series, all on the same strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub t_end: f64,
    pub times: Vec<f64>,
    pub snapshots: Vec<Field>,
    pub probe_x: Vec<f64>,
    /// `[probe][sample] -> (u, v)`.
    pub probes: Vec<Vec<(f64, f64)>>,
    /// `[sample][mode]`.
    pub mode_amp_u: Vec<Vec<f64>>,
    pub mode_amp_v: Vec<Vec<f64>>,
}

impl Trajectory {
    /// Linear interpolation of a saved snapshot at `x`.
    pub fn interpolate(&self, sample: usize, x: f64) -> Result<(f64, f64)> {
        let len = self.grid.length();
        if !(0.0..=len).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "probe x = {x} outside [0, {len}]"
            )));
        }
        let h = len / (self.grid.m - 1) as f64;
        let j = ((x / h).floor() as usize).min(self.grid.m - 2);
        let w = (x - h * j as f64) / h;
        let f = &self.snapshots[sample];
        Ok((
            f.u[j] * (1.0 - w) + f.u[j + 1] * w,
            f.v[j] * (1.0 - w) + f.v[j + 1] * w,
        ))
    }
}

/// Time series of `(u, v)` at an arbitrary in-domain location, one
/// entry per saved snapshot.
pub fn probe_series(traj: &Trajectory, x: f64) -> Result<Vec<(f64, f64)>> {
    (0..traj.times.len())
        .map(|k| traj.interpolate(k, x))
        .collect()
}

struct SpectralState {
    cu: Vec<f64>,
    cv: Vec<f64>,
}

/// Integrates the system from the configured initial data.
pub fn simulate(params: &ModelParams, grid: &Grid, config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    if (grid.l - params.l).abs() > 1e-12 * params.l.abs().max(1.0) {
        return Err(Error::InvalidParameter(
            "grid domain scale must match the model parameters".into(),
        ));
    }
    let m = grid.m;
    let field0 = initial_condition(grid, &config.ic)?;

    let mut probe_x = config.probes.clone();
    if probe_x.is_empty() {
        probe_x.push(0.0);
    }
    for &x in &probe_x {
        if !(0.0..=grid.length()).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "probe x = {x} outside [0, {}]",
                grid.length()
            )));
        }
    }
    let n_modes = config.n_modes.min(m - 1);

    let mut dct = CosineTransform::new(m);
    let mut state = SpectralState {
        cu: vec![0.0; m],
        cv: vec![0.0; m],
    };
    dct.forward(&field0.u, &mut state.cu);
    dct.forward(&field0.v, &mut state.cv);

    // Exact half-step diffusion factors per mode.
    let half_u: Vec<f64> = (0..m)
        .map(|n| (-params.d1 * (n as f64 / grid.l).powi(2) * 0.5 * config.dt).exp())
        .collect();
    let half_v: Vec<f64> = (0..m)
        .map(|n| (-params.d2 * (n as f64 / grid.l).powi(2) * 0.5 * config.dt).exp())
        .collect();

    let steps = (config.t_end / config.dt).round() as usize;
    let mut traj = Trajectory {
        grid: *grid,
        t_end: config.dt * steps as f64,
        times: Vec::new(),
        snapshots: Vec::new(),
        probe_x: probe_x.clone(),
        probes: vec![Vec::new(); probe_x.len()],
        mode_amp_u: Vec::new(),
        mode_amp_v: Vec::new(),
    };

    let mut u = field0.u.clone();
    let mut v = field0.v.clone();
    let mut k1u = vec![0.0; m];
    let mut k1v = vec![0.0; m];
    let mut u1 = vec![0.0; m];
    let mut v1 = vec![0.0; m];

    record(&mut traj, 0.0, &field0, &state, n_modes)?;

    let (a, b, r) = (params.a, params.b, params.r);
    for step in 1..=steps {
        let t = config.dt * step as f64;
        for n in 0..m {
            state.cu[n] *= half_u[n];
            state.cv[n] *= half_v[n];
        }
        dct.inverse(&state.cu, &mut u);
        dct.inverse(&state.cv, &mut v);

        guard(&u, &v, t)?;
        for j in 0..m {
            let (fu, fv) = kinetics::rhs_unchecked(u[j], v[j], a, b, r);
            k1u[j] = fu;
            k1v[j] = fv;
            u1[j] = u[j] + config.dt * fu;
            v1[j] = v[j] + config.dt * fv;
        }
        guard(&u1, &v1, t)?;
        for j in 0..m {
            let (fu, fv) = kinetics::rhs_unchecked(u1[j], v1[j], a, b, r);
            u[j] += 0.5 * config.dt * (k1u[j] + fu);
            v[j] += 0.5 * config.dt * (k1v[j] + fv);
        }

        dct.forward(&u, &mut state.cu);
        dct.forward(&v, &mut state.cv);
        for n in 0..m {
            state.cu[n] *= half_u[n];
            state.cv[n] *= half_v[n];
        }

        if step % config.save_stride == 0 || step == steps {
            dct.inverse(&state.cu, &mut u1);
            dct.inverse(&state.cv, &mut v1);
            let snap = Field {
                u: u1.clone(),
                v: v1.clone(),
            };
            guard(&snap.u, &snap.v, t)?;
            record(&mut traj, t, &snap, &state, n_modes)?;
        }
    }
    Ok(traj)
}

fn guard(u: &[f64], v: &[f64], t: f64) -> Result<()> {
    let mut min_u = f64::INFINITY;
    let mut max_abs = 0.0f64;
    for j in 0..u.len() {
        min_u = min_u.min(u[j]);
        max_abs = max_abs.max(u[j].abs()).max(v[j].abs());
    }
    if !max_abs.is_finite() || max_abs > BLOWUP_LIMIT {
        return Err(Error::Blowup { max: max_abs, t });
    }
    if min_u <= SINGULAR_U {
        return Err(Error::Singularity { u: min_u, t });
    }
    Ok(())
}

fn record(
    traj: &mut Trajectory,
    t: f64,
    field: &Field,
    state: &SpectralState,
    n_modes: usize,
) -> Result<()> {
    traj.times.push(t);
    traj.snapshots.push(field.clone());
    let idx = traj.snapshots.len() - 1;
    for (p, &x) in traj.probe_x.clone().iter().enumerate() {
        let val = traj.interpolate(idx, x)?;
        traj.probes[p].push(val);
    }
    traj.mode_amp_u.push(state.cu[..=n_modes].to_vec());
    traj.mode_amp_v.push(state.cv[..=n_modes].to_vec());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::equilibrium;

    fn sec3(r: f64, l: f64) -> ModelParams {
        ModelParams::new(0.6018, 0.0077, 0.4, 19.37, r, l).unwrap()
    }

    #[test]
    fn constant_ic_gives_constant_field() {
        let grid = Grid::new(1.6, 64).unwrap();
        let ic = IcSpec {
            u: FieldIc::constant(0.4),
            v: FieldIc::constant(0.4),
        };
        let f = initial_condition(&grid, &ic).unwrap();
        assert!(f.u.iter().all(|&x| x == 0.4));
    }

    #[test]
    fn negative_ic_rejected() {
        let grid = Grid::new(1.6, 64).unwrap();
        let ic = IcSpec {
            u: FieldIc {
                base: 0.01,
                terms: vec![Perturbation {
                    amplitude: -0.05,
                    wavenumber: 1.0,
                    shape: Waveform::Sin,
                }],
            },
            v: FieldIc::constant(0.4),
        };
        assert!(initial_condition(&grid, &ic).is_err());
    }

    #[test]
    fn equilibrium_is_preserved() {
        let p = sec3(0.2, 1.6);
        let grid = Grid::new(1.6, 64).unwrap();
        let u0 = equilibrium(&p).u0;
        let config = SimConfig {
            dt: 1e-3,
            t_end: 10.0,
            save_stride: 1000,
            ic: IcSpec {
                u: FieldIc::constant(u0),
                v: FieldIc::constant(u0),
            },
            probes: vec![0.0],
            n_modes: 8,
        };
        let traj = simulate(&p, &grid, &config).unwrap();
        let last = traj.snapshots.last().unwrap();
        for j in 0..grid.m {
            assert!((last.u[j] - u0).abs() < 1e-10);
            assert!((last.v[j] - u0).abs() < 1e-10);
        }
    }

    #[test]
    fn probe_series_interpolates_and_validates() {
        let p = sec3(0.2, 1.6);
        let grid = Grid::new(1.6, 64).unwrap();
        let u0 = equilibrium(&p).u0;
        let config = SimConfig {
            dt: 1e-3,
            t_end: 0.1,
            save_stride: 10,
            ic: IcSpec {
                u: FieldIc::constant(u0),
                v: FieldIc::constant(u0),
            },
            probes: vec![],
            n_modes: 4,
        };
        let traj = simulate(&p, &grid, &config).unwrap();
        let series = probe_series(&traj, 0.5 * grid.length()).unwrap();
        assert_eq!(series.len(), traj.times.len());
        assert!((series[0].0 - u0).abs() < 1e-12);
        assert!(probe_series(&traj, -0.1).is_err());
        assert!(probe_series(&traj, grid.length() + 0.1).is_err());
    }

    #[test]
    fn blowup_is_reported() {
        // Unchecked parameters with a sign-flipped reaction blow up fast.
        let p = ModelParams::new_unchecked(-5000.0, 0.5, 0.1, 0.1, 1.0, 1.6);
        let grid = Grid::new(1.6, 64).unwrap();
        let config = SimConfig {
            dt: 1e-2,
            t_end: 50.0,
            save_stride: 100,
            ic: IcSpec {
                u: FieldIc::constant(2.0),
                v: FieldIc::constant(2.0),
            },
            probes: vec![0.0],
            n_modes: 4,
        };
        match simulate(&p, &grid, &config) {
            Err(Error::Blowup { .. }) | Err(Error::Singularity { .. }) => {}
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
