//! Synthesis, analysis and tuning of decoupling and matching networks (DMNs)
//! for compact uniform circular arrays (UCAs) of quarter-wave monopoles,
//! together with the beamforming gain those networks make available.
//!
//! The crate is organised bottom-up:
//!
//! * [`netcore`] multiport S/Z/Y algebra, port termination, sweeps and bands.
//! * [`rfelements`] ideal lumped and transmission-line primitives.
//! * [`netlist`] nodal evaluation of transmission-line circuits.
//! * [`ucamodel`] array geometry, monopole pattern, overlap matrix and the
//!   minimum-scattering impedance model.
//! * [`dmnsynth`] closed-form two-stage and star-triangle DMN synthesis.
//! * [`beamform`] optimal beamforming and realized-gain engines.
//! * [`tuner`] bounded simplex optimisation of neutralization-line DMNs and
//!   broadband tuning of transmission-line realizations.
//! * [`io`] Touchstone v1 and CSV files.
//!
//! Data-parallel loops (sweeps, scan curves, quadrature) run on rayon when the
//! `parallel` feature is enabled and fall back to plain iterators otherwise;
//! see [`par`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamform;
pub mod dmnsynth;
pub mod error;
pub mod io;
pub mod linalg;
pub mod netcore;
pub mod netlist;
pub mod par;
pub mod rfelements;
pub mod special;
pub mod tuner;
pub mod ucamodel;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Free-space wave impedance in ohms.
pub const ETA0: f64 = 376.730_313_668;
