//! Python bindings: the main types and operations of the analysis
//! pipeline, from kinetics through the reduced planar system to the
//! spectral simulator.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use tanner_core::kinetics;
use tanner_core::normal_form as nf_mod;
use tanner_core::rdsim;
use tanner_core::spectrum::{self, LinearData};
use tanner_core::{critical_sets, Error, ModelParams};

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::Io(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Dimensionless model parameters plus the domain scale.
#[pyclass(name = "Params", frozen, from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ModelParams,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(a: f64, b: f64, d1: f64, d2: f64, r: f64, l: f64) -> PyResult<Self> {
        Ok(Self {
            inner: ModelParams::new(a, b, d1, d2, r, l).map_err(err)?,
        })
    }

    #[getter]
    fn a(&self) -> f64 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    #[getter]
    fn d1(&self) -> f64 {
        self.inner.d1
    }

    #[getter]
    fn d2(&self) -> f64 {
        self.inner.d2
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.r
    }

    #[getter]
    fn l(&self) -> f64 {
        self.inner.l
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Params(a={}, b={}, d1={}, d2={}, r={}, l={})",
            p.a, p.b, p.d1, p.d2, p.r, p.l
        )
    }
}

/// Coexistence equilibrium `(u0, v0)`.
#[pyfunction]
fn equilibrium(params: &PyParams) -> (f64, f64) {
    let eq = kinetics::equilibrium(&params.inner);
    (eq.u0, eq.v0)
}

/// Jacobian entries `(a0, b0)` of the kinetics at the equilibrium.
#[pyfunction]
fn linearize(params: &PyParams) -> (f64, f64) {
    let lin = kinetics::linearize(&params.inner);
    (lin.a0, lin.b0)
}

/// Stability verdict: `("stable" | "unstable" | "marginal", witnesses)`.
#[pyfunction]
fn stability(params: &PyParams) -> (String, Vec<u32>) {
    let v = spectrum::steady_state_stability(&params.inner);
    let status = match v.status {
        spectrum::Stability::Stable => "stable",
        spectrum::Stability::Unstable => "unstable",
        spectrum::Stability::Marginal => "marginal",
    };
    (status.to_string(), v.witnesses)
}

/// Critical curves of mode `n` at domain scale `l`: `(r_hopf, r_turing)`.
#[pyfunction]
fn critical_curves(a: f64, b: f64, d1: f64, d2: f64, n: u32, l: f64) -> PyResult<(f64, f64)> {
    let ld = LinearData::new(a, b, d1, d2);
    Ok((
        spectrum::hopf_curve(&ld, n, l),
        spectrum::turing_curve(&ld, n, l).map_err(err)?,
    ))
}

/// Maximum of the steady-state curves and its arg-max modes.
#[pyfunction]
fn r_star(a: f64, b: f64, d1: f64, d2: f64, l: f64) -> (f64, Vec<u32>) {
    let rs = spectrum::r_star(&LinearData::new(a, b, d1, d2), l);
    (rs.value, rs.modes)
}

/// Regime label at the given domain scale.
#[pyfunction]
fn classify_regime(a: f64, b: f64, d1: f64, d2: f64, l: f64) -> PyResult<String> {
    Ok(critical_sets::classify_regime(a, b, d1, d2, l)
        .map_err(err)?
        .to_string())
}

/// Coincidence sets in a window of domain scales.
#[pyfunction]
fn codim2<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_lo: f64,
    l_hi: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ld = LinearData::new(a, b, d1, d2);
    let sets = critical_sets::enumerate_codim2(&ld, l_lo, l_hi).map_err(err)?;
    let out = PyDict::new(py);
    let tt = PyList::empty(py);
    for p in &sets.tt {
        let d = PyDict::new(py);
        d.set_item("l", p.l)?;
        d.set_item("r", p.r)?;
        d.set_item("modes", (p.modes.0, p.modes.1))?;
        tt.append(d)?;
    }
    let th = PyList::empty(py);
    for p in &sets.th {
        let d = PyDict::new(py);
        d.set_item("l", p.l)?;
        d.set_item("r", p.r)?;
        d.set_item("modes", (p.hopf_mode, p.turing_mode))?;
        th.append(d)?;
    }
    let tth = PyList::empty(py);
    for p in &sets.tth {
        let d = PyDict::new(py);
        d.set_item("l", p.l)?;
        d.set_item("r", p.r)?;
        d.set_item("modes", (p.hopf_mode, p.turing_modes.0, p.turing_modes.1))?;
        tth.append(d)?;
    }
    out.set_item("L_TT", tt)?;
    out.set_item("L_TH", th)?;
    out.set_item("L_TTH", tth)?;
    Ok(out)
}

/// Full reduction at the organizing point located in the window:
/// point data, reduced-flow coefficients, planar constants and the
/// region-boundary ray slopes.
#[pyfunction]
fn normal_form<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_lo: f64,
    l_hi: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let (point, nf, planar, lines) =
        nf_mod::analyze_turing_hopf(a, b, d1, d2, (l_lo, l_hi)).map_err(err)?;
    let out = PyDict::new(py);

    let p = PyDict::new(py);
    p.set_item("r", point.r_star)?;
    p.set_item("l", point.l_star)?;
    p.set_item("n_star", point.turing_mode)?;
    p.set_item("omega0", point.omega0)?;
    out.set_item("point", p)?;

    let c = PyDict::new(py);
    c.set_item("f_a1z1", (nf.f_a1z1.re, nf.f_a1z1.im))?;
    c.set_item("f_a2z1", (nf.f_a2z1.re, nf.f_a2z1.im))?;
    c.set_item("f_a1z2", nf.f_a1z2)?;
    c.set_item("f_a2z2", nf.f_a2z2)?;
    c.set_item("g210", (nf.g210.re, nf.g210.im))?;
    c.set_item("g102", (nf.g102.re, nf.g102.im))?;
    c.set_item("g111", nf.g111)?;
    c.set_item("g003", nf.g003)?;
    out.set_item("coefficients", c)?;

    let pl = PyDict::new(py);
    pl.set_item("b0", planar.b0)?;
    pl.set_item("c0", planar.c0)?;
    pl.set_item("d0", planar.d0)?;
    pl.set_item("eps1", (planar.eps1_map[0], planar.eps1_map[1]))?;
    pl.set_item("eps2", (planar.eps2_map[0], planar.eps2_map[1]))?;
    out.set_item("planar", pl)?;

    let ls = PyDict::new(py);
    for (i, ray) in lines.lines.iter().enumerate() {
        ls.set_item(format!("L{}", i + 1), ray.slope())?;
    }
    out.set_item("lines", ls)?;
    Ok(out)
}

/// Region of a parameter offset from the organizing point.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn classify_region(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_lo: f64,
    l_hi: f64,
    alpha1: f64,
    alpha2: f64,
) -> PyResult<String> {
    let (_, _, planar, _) = nf_mod::analyze_turing_hopf(a, b, d1, d2, (l_lo, l_hi)).map_err(err)?;
    Ok(nf_mod::classify_region(&planar, alpha1, alpha2)
        .map_err(err)?
        .to_string())
}

/// Predicted PDE attractors in a region: list of
/// `(pattern, stable, multiplicity)`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn predict_attractors(
    a: f64,
    b: f64,
    d1: f64,
    d2: f64,
    l_lo: f64,
    l_hi: f64,
    alpha1: f64,
    alpha2: f64,
) -> PyResult<Vec<(String, bool, u32)>> {
    let (_, _, planar, _) = nf_mod::analyze_turing_hopf(a, b, d1, d2, (l_lo, l_hi)).map_err(err)?;
    let region = nf_mod::classify_region(&planar, alpha1, alpha2).map_err(err)?;
    let pred = nf_mod::predict_attractors(&planar, region).map_err(err)?;
    Ok(pred
        .objects
        .iter()
        .map(|o| (o.pattern.to_string(), o.stable, o.multiplicity))
        .collect())
}

/// Integrates the PDE from a sinusoidally perturbed equilibrium and
/// classifies the long-time attractor. Perturbation terms are
/// `(amplitude, wavenumber, "sin" | "cos")` tuples.
#[pyfunction]
#[pyo3(signature = (params, terms_u, terms_v, dt=1e-3, t_end=500.0, m=128, save_stride=1000))]
#[allow(clippy::too_many_arguments)]
fn simulate_classify<'py>(
    py: Python<'py>,
    params: &PyParams,
    terms_u: Vec<(f64, f64, String)>,
    terms_v: Vec<(f64, f64, String)>,
    dt: f64,
    t_end: f64,
    m: usize,
    save_stride: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let to_terms = |ts: &[(f64, f64, String)]| -> PyResult<Vec<rdsim::Perturbation>> {
        ts.iter()
            .map(|(amp, k, shape)| {
                let shape = match shape.as_str() {
                    "sin" => rdsim::Waveform::Sin,
                    "cos" => rdsim::Waveform::Cos,
                    other => return Err(PyValueError::new_err(format!("bad waveform {other:?}"))),
                };
                Ok(rdsim::Perturbation {
                    amplitude: *amp,
                    wavenumber: *k,
                    shape,
                })
            })
            .collect()
    };
    let u0 = kinetics::equilibrium(&params.inner).u0;
    let ic = rdsim::IcSpec {
        u: rdsim::FieldIc {
            base: u0,
            terms: to_terms(&terms_u)?,
        },
        v: rdsim::FieldIc {
            base: u0,
            terms: to_terms(&terms_v)?,
        },
    };
    let grid = rdsim::Grid::new(params.inner.l, m).map_err(err)?;
    let config = rdsim::SimConfig {
        dt,
        t_end,
        save_stride,
        ic,
        probes: vec![0.0],
        n_modes: 16,
    };
    let traj = rdsim::simulate(&params.inner, &grid, &config).map_err(err)?;
    let report =
        rdsim::classify_report(&traj, &rdsim::ClassifierTolerances::default()).map_err(err)?;

    let out = PyDict::new(py);
    out.set_item("verdict", report.class.to_string())?;
    out.set_item("times", &traj.times)?;
    out.set_item(
        "probe_u",
        traj.probes[0].iter().map(|p| p.0).collect::<Vec<f64>>(),
    )?;
    out.set_item(
        "mode1_u",
        traj.mode_amp_u
            .iter()
            .map(|row| row[1])
            .collect::<Vec<f64>>(),
    )?;
    out.set_item("temporal_variance", report.temporal_variance)?;
    out.set_item("spatial_variance", report.spatial_variance)?;
    Ok(out)
}

#[pymodule]
fn tanner_patterns(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(linearize, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    m.add_function(wrap_pyfunction!(critical_curves, m)?)?;
    m.add_function(wrap_pyfunction!(r_star, m)?)?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(codim2, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(classify_region, m)?)?;
    m.add_function(wrap_pyfunction!(predict_attractors, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_classify, m)?)?;
    Ok(())
}
