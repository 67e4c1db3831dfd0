//! Optimal beamforming and realized gain of a UCA: ideal (power-matched)
//! directivity, direct drive without a matching network, and drive through
//! an arbitrary DMN.
//!
//! The far field of port currents `i` in direction `r̂` is `eᵀi` with
//! `e_n = C(θ) exp(j k r_n·r̂)`. Under the minimum-scattering assumption the
//! radiated power is `½ρ iᴴAi` with `ρ = Re{z_in}/a₁₁`, so the realized
//! gain for source voltages `v` behind `z0` is `4 z0 ρ |eᵀi|² / ‖v‖²`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::netcore::{terminate, MultiportNetwork, Repr};
use crate::par::{self, Exec};
use crate::ucamodel::{monopole_pattern, OverlapMatrix, SymmetricArrayModel, UcaGeometry};

/// Allowed per-entry deviation of `Re{Z}` from `ρA` for the gain engines.
pub const CMS_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    pub theta: f64,
    pub phi: f64,
    pub entries: Vec<Complex64>,
}

impl SteeringVector {
    pub fn new(geom: &UcaGeometry, theta: f64, phi: f64) -> Self {
        let p = monopole_pattern(theta);
        let kr = 2.0 * std::f64::consts::PI * geom.radius_wavelengths() * theta.sin();
        let entries = (0..geom.n_elements())
            .map(|n| Complex64::from_polar(p, kr * (phi - geom.element_angle(n)).cos()))
            .collect();
        Self { theta, phi, entries }
    }

    fn column(&self) -> CMatrix {
        CMatrix::from_column_slice(self.entries.len(), 1, &self.entries)
    }
}

pub fn to_dbi(linear: f64) -> f64 {
    10.0 * linear.log10()
}

fn check_len(overlap: &OverlapMatrix, e: &SteeringVector) -> Result<()> {
    if overlap.n() != e.entries.len() {
        return Err(Error::InvalidInput(format!(
            "overlap is {}x{}, steering vector has {} entries",
            overlap.n(),
            overlap.n(),
            e.entries.len()
        )));
    }
    Ok(())
}

fn overlap_inverse(overlap: &OverlapMatrix) -> Result<CMatrix> {
    if overlap.entries().clone().cholesky().is_none() {
        return Err(Error::SingularOverlap);
    }
    linalg::checked_inverse(&overlap.to_complex()).map_err(|_| Error::SingularOverlap)
}

/// Directivity `|eᵀa|² / (aᴴAa)` of arbitrary weights (linear).
pub fn directivity_of(overlap: &OverlapMatrix, e: &SteeringVector, weights: &[Complex64]) -> f64 {
    let a = CMatrix::from_column_slice(weights.len(), 1, weights);
    let num = (e.column().transpose() * &a)[(0, 0)].norm_sqr();
    let den = (a.adjoint() * overlap.to_complex() * &a)[(0, 0)].re;
    num / den
}

/// Maximum directivity `eᴴA⁻¹e` (dBi) and weights `A⁻¹ē` achieving it.
pub fn max_directivity(overlap: &OverlapMatrix, e: &SteeringVector) -> Result<(f64, Vec<Complex64>)> {
    check_len(overlap, e)?;
    let inv = overlap_inverse(overlap)?;
    Ok(ideal_from_inverse(&inv, e))
}

fn ideal_from_inverse(inv: &CMatrix, e: &SteeringVector) -> (f64, Vec<Complex64>) {
    let ec = e.column().map(|z| z.conj());
    let a = inv * &ec;
    let d = (ec.adjoint() * &a)[(0, 0)].re;
    (to_dbi(d), a.iter().copied().collect())
}

/// `ρ = Re{z_in}/a₁₁` after checking that the impedance model agrees with
/// the pattern model.
pub fn cms_rho(model: &SymmetricArrayModel, overlap: &OverlapMatrix) -> Result<f64> {
    let deviation = model.cms_deviation(overlap)?;
    if !(deviation <= CMS_TOLERANCE) {
        return Err(Error::CmsInconsistent { deviation });
    }
    Ok(model.z_in().re / overlap.a_diag())
}

/// Maps source voltages to antenna port currents, `i = T v`, with the gain
/// scale `4 z0 ρ`.
#[derive(Debug, Clone)]
pub struct DriveMatrix {
    pub t: CMatrix,
    pub scale: f64,
}

impl DriveMatrix {
    /// Best realized gain (dBi) and the source voltages achieving it.
    pub fn gain(&self, e: &SteeringVector) -> (f64, Vec<Complex64>) {
        let w = self.t.transpose() * e.column();
        let g = self.scale * w.norm_squared();
        (to_dbi(g), w.iter().map(|z| z.conj()).collect())
    }

    /// Realized gain (linear) of given source voltages.
    pub fn gain_of(&self, e: &SteeringVector, v: &[Complex64]) -> f64 {
        let v = CMatrix::from_column_slice(v.len(), 1, v);
        let i = &self.t * &v;
        let field = (e.column().transpose() * i)[(0, 0)];
        self.scale * field.norm_sqr() / v.norm_squared()
    }
}

/// Sources behind `z0` connected directly to the antenna ports:
/// `T = (Z_A + z0 I)⁻¹`.
pub fn unmatched_drive(model: &SymmetricArrayModel, overlap: &OverlapMatrix, z0: f64) -> Result<DriveMatrix> {
    let rho = cms_rho(model, overlap)?;
    let n = model.n_elements();
    let m = model.z_matrix() + linalg::identity(n) * c(z0, 0.0);
    let t = linalg::checked_inverse(&m).map_err(|_| Error::SingularComposition)?;
    Ok(DriveMatrix { t, scale: 4.0 * z0 * rho })
}

/// Sources behind `z0` at the last `n` ports of the `2n`-port `dmn`, antenna
/// at its first `n` ports.
pub fn network_drive(
    dmn: &MultiportNetwork,
    model: &SymmetricArrayModel,
    overlap: &OverlapMatrix,
    z0: f64,
) -> Result<DriveMatrix> {
    let rho = cms_rho(model, overlap)?;
    let n = model.n_elements();
    if dmn.repr() != Repr::Y || dmn.n_ports() != 2 * n {
        return Err(Error::InvalidInput(format!(
            "DMN must be a {}-port admittance matrix",
            2 * n
        )));
    }
    let ya_net = crate::ucamodel::admittance_of(model)?.with_freq(dmn.freq());
    let ya = ya_net.matrix();
    let y = dmn.matrix();
    // nodal system [[Y_AA + Y_A, Y_AP], [Y_PA, Y_PP + I/z0]] [V_A; V_P] = [0; v/z0]
    let mut sys = y.clone();
    for i in 0..n {
        for j in 0..n {
            sys[(i, j)] += ya[(i, j)];
        }
        sys[(n + i, n + i)] += c(1.0 / z0, 0.0);
    }
    let inv = linalg::checked_inverse(&sys).map_err(|_| Error::SingularComposition)?;
    // columns for unit source voltages
    let cols = inv.columns(n, n).into_owned() * c(1.0 / z0, 0.0);
    let v_a = cols.rows(0, n).into_owned();
    let v_p = cols.rows(n, n).into_owned();
    let t = ya * v_a;

    // the input admittance implied by the solve must equal the reduction
    let i_p = (linalg::identity(n) - &v_p) * c(1.0 / z0, 0.0);
    let v_p_inv = linalg::checked_inverse(&v_p).map_err(|_| Error::SingularComposition)?;
    let implied = i_p * v_p_inv;
    let reduced = terminate(dmn, &ya_net, &(0..n).collect::<Vec<_>>())?;
    let scale = linalg::max_abs(reduced.matrix()).max(1.0 / z0);
    if linalg::max_abs_diff(&implied, reduced.matrix()) > 1e-10 * scale {
        return Err(Error::SingularComposition);
    }
    Ok(DriveMatrix { t, scale: 4.0 * z0 * rho })
}

pub fn realized_gain_unmatched(
    model: &SymmetricArrayModel,
    overlap: &OverlapMatrix,
    z0: f64,
    e: &SteeringVector,
) -> Result<(f64, Vec<Complex64>)> {
    check_len(overlap, e)?;
    Ok(unmatched_drive(model, overlap, z0)?.gain(e))
}

pub fn realized_gain_through_network(
    dmn: &MultiportNetwork,
    model: &SymmetricArrayModel,
    overlap: &OverlapMatrix,
    z0: f64,
    e: &SteeringVector,
) -> Result<(f64, Vec<Complex64>)> {
    check_len(overlap, e)?;
    Ok(network_drive(dmn, model, overlap, z0)?.gain(e))
}

#[derive(Debug, Clone, Copy)]
pub enum Engine<'a> {
    /// Ideal DMN: gain equals the maximum directivity.
    Ideal,
    Unmatched {
        model: &'a SymmetricArrayModel,
        z0: f64,
    },
    Network {
        dmn: &'a MultiportNetwork,
        model: &'a SymmetricArrayModel,
        z0: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainSample {
    pub phi0: f64,
    pub gain_dbi: f64,
    pub weights: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainCurve {
    pub theta_cut: f64,
    pub samples: Vec<GainSample>,
}

impl GainCurve {
    pub fn min_dbi(&self) -> f64 {
        self.samples.iter().map(|s| s.gain_dbi).fold(f64::INFINITY, f64::min)
    }

    pub fn max_dbi(&self) -> f64 {
        self.samples.iter().map(|s| s.gain_dbi).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Peak-to-peak variation over the scan.
    pub fn ripple_db(&self) -> f64 {
        self.max_dbi() - self.min_dbi()
    }
}

pub const MIN_SCAN_POINTS: usize = 36;

/// Best gain for each of `n_phi` equally spaced azimuths at polar angle
/// `theta_cut`.
pub fn scan_gain_curve(
    engine: Engine<'_>,
    geom: &UcaGeometry,
    overlap: &OverlapMatrix,
    theta_cut: f64,
    n_phi: usize,
) -> Result<GainCurve> {
    scan_gain_curve_with(engine, geom, overlap, theta_cut, n_phi, Exec::auto())
}

pub fn scan_gain_curve_with(
    engine: Engine<'_>,
    geom: &UcaGeometry,
    overlap: &OverlapMatrix,
    theta_cut: f64,
    n_phi: usize,
    exec: Exec,
) -> Result<GainCurve> {
    if n_phi < MIN_SCAN_POINTS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SCAN_POINTS} azimuth samples, got {n_phi}"
        )));
    }
    if overlap.n() != geom.n_elements() {
        return Err(Error::InvalidInput("overlap matrix does not match geometry".into()));
    }
    enum Prepared {
        Ideal(CMatrix),
        Drive(DriveMatrix),
    }
    let prepared = match engine {
        Engine::Ideal => Prepared::Ideal(overlap_inverse(overlap)?),
        Engine::Unmatched { model, z0 } => Prepared::Drive(unmatched_drive(model, overlap, z0)?),
        Engine::Network { dmn, model, z0 } => Prepared::Drive(network_drive(dmn, model, overlap, z0)?),
    };
    let samples = par::map_range(exec, n_phi, |k| {
        let phi0 = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
        let e = SteeringVector::new(geom, theta_cut, phi0);
        let (gain_dbi, weights) = match &prepared {
            Prepared::Ideal(inv) => ideal_from_inverse(inv, &e),
            Prepared::Drive(d) => d.gain(&e),
        };
        GainSample { phi0, gain_dbi, weights }
    });
    Ok(GainCurve { theta_cut, samples })
}
