//! Analysis and simulation toolkit for a diffusive ratio-dependent
//! Holling-Tanner predator-prey system on an interval with no-flux
//! boundaries.
//!
//! The crate covers the full chain from the kinetics to the patterns:
//!
//! * [`kinetics`] — reaction terms, coexistence equilibrium, Taylor data;
//! * [`spectrum`] — per-mode characteristic quadratics and critical curves;
//! * [`critical_sets`] — thresholds, mode counters and the finite sets of
//!   domain scales carrying codimension-two coincidences;
//! * [`bifurcation`] — classification of `(r, l)` points and diagram
//!   sampling;
//! * [`normal_form`] — the third-order reduction at a Turing-Hopf point
//!   and the planar amplitude system it induces;
//! * [`rdsim`] — a cosine-spectral IMEX simulator with an attractor
//!   classifier.

pub mod bifurcation;
pub mod critical_sets;
pub mod error;
pub mod kinetics;
pub mod normal_form;
pub mod poly;
pub mod rdsim;
pub mod report;
pub mod spectrum;

pub use error::{Error, Result};
pub use kinetics::ModelParams;
