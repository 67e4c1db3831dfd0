//! Uniform circular arrays of quarter-wave monopoles: geometry, element
//! pattern, array factor, the pattern-overlap (Gram) matrix and an
//! induced-EMF impedance model consistent with it.
//!
//! Lengths are in wavelengths at the design frequency unless noted.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, J};
use crate::netcore::{FrequencySweep, MultiportNetwork};
use crate::par::{self, Exec};
use crate::special::{ci, cin, cisi, gauss_legendre_on, si, EULER_GAMMA};
use crate::ETA0;

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UcaGeometry {
    n_elements: usize,
    radius_wavelengths: f64,
}

impl UcaGeometry {
    pub fn new(n_elements: usize, radius_wavelengths: f64) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::InvalidInput("array needs at least one element".into()));
        }
        if !(radius_wavelengths > 0.0 && radius_wavelengths.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "radius must be positive, got {radius_wavelengths}"
            )));
        }
        Ok(Self {
            n_elements,
            radius_wavelengths,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn radius_wavelengths(&self) -> f64 {
        self.radius_wavelengths
    }

    pub fn element_angle(&self, n: usize) -> f64 {
        TWO_PI * n as f64 / self.n_elements as f64
    }

    pub fn element_angles(&self) -> Vec<f64> {
        (0..self.n_elements).map(|n| self.element_angle(n)).collect()
    }

    /// Element position `(x, y)` in wavelengths.
    pub fn position(&self, n: usize) -> (f64, f64) {
        let (s, co) = self.element_angle(n).sin_cos();
        (self.radius_wavelengths * co, self.radius_wavelengths * s)
    }

    /// Distance between elements `m` and `n`: `r·√(2 − 2cos Δφ)`.
    pub fn distance(&self, m: usize, n: usize) -> f64 {
        let dphi = self.element_angle(m) - self.element_angle(n);
        self.radius_wavelengths * (2.0 - 2.0 * dphi.cos()).max(0.0).sqrt()
    }

    /// Distance between neighbouring elements.
    pub fn spacing(&self) -> f64 {
        if self.n_elements == 1 {
            0.0
        } else {
            self.distance(0, 1)
        }
    }

    /// Same array in wavelengths at `nu = f/f0`.
    pub fn at_relative_frequency(&self, nu: f64) -> Self {
        Self {
            radius_wavelengths: self.radius_wavelengths * nu,
            ..*self
        }
    }
}

/// Far-field pattern of a quarter-wave monopole over infinite ground,
/// `cos(π/2·cosθ)/sinθ` above the ground plane and zero below.
pub fn monopole_pattern(theta: f64) -> f64 {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return 0.0;
    }
    if theta < 1e-3 {
        // cos(π/2 cosθ)/sinθ = πθ/4 (1 + θ²/12 + ...) near zenith
        return PI * theta / 4.0 * (1.0 + theta * theta / 12.0);
    }
    // cos(π/2 cosθ) = sin(π sin²(θ/2)) avoids cancellation
    let s = (0.5 * theta).sin();
    (PI * s * s).sin() / theta.sin()
}

/// `Σ a_n exp(j2πr sinθ cos(φ − φ_n))`.
pub fn array_factor(geom: &UcaGeometry, weights: &[Complex64], theta: f64, phi: f64) -> Result<Complex64> {
    if weights.len() != geom.n_elements() {
        return Err(Error::InvalidInput(format!(
            "expected {} weights, got {}",
            geom.n_elements(),
            weights.len()
        )));
    }
    let kr = TWO_PI * geom.radius_wavelengths() * theta.sin();
    Ok(weights
        .iter()
        .enumerate()
        .map(|(n, w)| w * (J * (kr * (phi - geom.element_angle(n)).cos())).exp())
        .sum())
}

/// Real symmetric Gram matrix of the element patterns,
/// `A_mn = (1/4π) ∮ C(θ)² exp(jk(r_m − r_n)·r̂) dΩ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    entries: DMatrix<f64>,
    order: usize,
}

impl OverlapMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn a_diag(&self) -> f64 {
        self.entries[(0, 0)]
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Gauss-Legendre order actually used after adaptation.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn to_complex(&self) -> CMatrix {
        linalg::from_real(&self.entries)
    }
}

pub const DEFAULT_QUADRATURE_ORDER: usize = 128;

/// Tolerance on entry changes when the quadrature order is doubled,
/// relative to the diagonal entry.
const QUADRATURE_TOL: f64 = 1e-9;

/// Overlap matrix from Gauss-Legendre in `cosθ` on the upper hemisphere
/// times a trapezoid rule in `φ` (twice as many points). The order is raised
/// automatically for electrically large arrays, then checked by doubling.
pub fn overlap_matrix(geom: &UcaGeometry, quadrature_order: usize) -> Result<OverlapMatrix> {
    overlap_matrix_with(geom, quadrature_order, Exec::auto())
}

pub fn overlap_matrix_with(geom: &UcaGeometry, quadrature_order: usize, exec: Exec) -> Result<OverlapMatrix> {
    if quadrature_order < 32 {
        return Err(Error::InvalidInput(format!(
            "quadrature order must be at least 32, got {quadrature_order}"
        )));
    }
    let kd_max = TWO_PI * 2.0 * geom.radius_wavelengths();
    let order = quadrature_order.max((1.5 * kd_max).ceil() as usize + 32);
    let coarse = overlap_raw(geom, order, exec)?;
    let fine = overlap_raw(geom, 2 * order, exec)?;
    let scale = fine[(0, 0)];
    let change = (&fine - &coarse).amax() / scale;
    if !(change <= QUADRATURE_TOL) {
        return Err(Error::QuadratureNotConverged { change });
    }
    Ok(OverlapMatrix {
        entries: fine,
        order: 2 * order,
    })
}

fn overlap_raw(geom: &UcaGeometry, order: usize, exec: Exec) -> Result<DMatrix<f64>> {
    let n = geom.n_elements();
    let (u, w) = gauss_legendre_on(order, 0.0, 1.0);
    let kd_max = TWO_PI * 2.0 * geom.radius_wavelengths();
    let n_phi = (2 * order).max((2.0 * kd_max).ceil() as usize + 64);
    let dphi = TWO_PI / n_phi as f64;
    let trig: Vec<(f64, f64)> = (0..n_phi).map(|i| (i as f64 * dphi).sin_cos()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|m| (m + 1..n).map(move |k| (m, k))).collect();
    let deltas: Vec<(f64, f64)> = pairs
        .iter()
        .map(|&(m, k)| {
            let (xm, ym) = geom.position(m);
            let (xk, yk) = geom.position(k);
            (TWO_PI * (xm - xk), TWO_PI * (ym - yk))
        })
        .collect();

    // One row per θ-node: [self term, pair terms...]; summed below in node order.
    let rows: Vec<Vec<Complex64>> = par::map_range(exec, order, |i| {
        let cos_t = u[i];
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        let p = monopole_pattern(cos_t.acos());
        let g = w[i] * p * p;
        let mut row = Vec::with_capacity(1 + pairs.len());
        row.push(c(g, 0.0));
        for &(dx, dy) in &deltas {
            let mut s = Complex64::new(0.0, 0.0);
            for &(sp, cp) in &trig {
                s += (J * (sin_t * (dx * cp + dy * sp))).exp();
            }
            row.push(s * (g * dphi / TWO_PI));
        }
        row
    });
    let mut acc = vec![Complex64::new(0.0, 0.0); 1 + pairs.len()];
    for row in &rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    // (1/4π)∫dφ∫du → ½ ∫du (φ-average)
    let diag = 0.5 * acc[0].re;
    let mut m = DMatrix::from_element(n, n, 0.0);
    for k in 0..n {
        m[(k, k)] = diag;
    }
    for (idx, &(a, b)) in pairs.iter().enumerate() {
        let v = acc[idx + 1] * 0.5;
        if v.im.abs() > 1e-12 * diag.max(v.re.abs()) {
            return Err(Error::InvalidInput(format!(
                "overlap entry ({a},{b}) has imaginary part {:e}",
                v.im
            )));
        }
        m[(a, b)] = v.re;
        m[(b, a)] = v.re;
    }
    Ok(m)
}

/// Self impedance of a thin quarter-wave monopole at resonance length,
/// `(η/8π)(Cin(2π) + j Si(2π))` ≈ 36.54 + j21.26 Ω.
pub fn cms_self_impedance() -> Complex64 {
    let k = ETA0 / (8.0 * PI);
    c(k * cin(TWO_PI), k * si(TWO_PI))
}

/// Mutual impedance of two side-by-side quarter-wave monopoles at
/// separation `d` (wavelengths), half the parallel half-wave dipole value.
pub fn cms_mutual_impedance(separation_wavelengths: f64) -> Result<Complex64> {
    let d = separation_wavelengths;
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidInput(format!("separation must be positive, got {d}")));
    }
    let l = 0.5;
    let root = (d * d + l * l).sqrt();
    let u0 = TWO_PI * d;
    let u1 = TWO_PI * (root + l);
    // root - l without cancellation
    let u2 = TWO_PI * d * d / (root + l);
    let (c0, s0) = cisi(u0);
    let (c1, s1) = cisi(u1);
    let (c2, s2) = cisi(u2);
    let k = ETA0 / (8.0 * PI);
    Ok(c(k * (2.0 * c0 - c1 - c2), -k * (2.0 * s0 - s1 - s2)))
}

/// Induced-EMF model of a ring of monopoles of fixed physical height, valid
/// off the design frequency. At `f0` it coincides with
/// [`cms_self_impedance`] and [`cms_mutual_impedance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmsModel {
    pub f0: f64,
    /// Monopole height in design wavelengths.
    pub height_wl: f64,
    /// Wire radius in design wavelengths; only affects the self reactance
    /// away from `f0`.
    pub wire_radius_wl: f64,
}

const MUTUAL_NODES: usize = 96;

impl CmsModel {
    pub fn new(f0: f64) -> Self {
        Self {
            f0,
            height_wl: 0.25,
            wire_radius_wl: 0.005,
        }
    }

    fn nu(&self, f: f64) -> f64 {
        f / self.f0
    }

    fn at_design(&self, f: f64) -> bool {
        (f - self.f0).abs() <= 1e-12 * self.f0 && self.height_wl == 0.25
    }

    pub fn self_impedance(&self, f: f64) -> Complex64 {
        if self.at_design(f) {
            return cms_self_impedance();
        }
        let nu = self.nu(f);
        let kl = TWO_PI * nu * 2.0 * self.height_wl;
        let (s, co) = kl.sin_cos();
        let (c1, s1) = cisi(kl);
        let (c2, s2) = cisi(2.0 * kl);
        let ka2 = 2.0 * TWO_PI * nu * self.wire_radius_wl * self.wire_radius_wl / (2.0 * self.height_wl);
        let r = ETA0 / (2.0 * PI)
            * (EULER_GAMMA + kl.ln() - c1
                + 0.5 * s * (s2 - 2.0 * s1)
                + 0.5 * co * (EULER_GAMMA + (0.5 * kl).ln() + c2 - 2.0 * c1));
        let x = ETA0 / (4.0 * PI) * (2.0 * s1 + co * (2.0 * s1 - s2) - s * (2.0 * c1 - c2 - ci(ka2)));
        let sh = (0.5 * kl).sin();
        c(r, x) / (2.0 * sh * sh)
    }

    /// Mutual impedance at separation `d` (design wavelengths) and
    /// frequency `f`, by numerical integration of the induced EMF.
    pub fn mutual_impedance(&self, d: f64, f: f64) -> Result<Complex64> {
        if self.at_design(f) {
            return cms_mutual_impedance(d);
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidInput(format!("separation must be positive, got {d}")));
        }
        let k = TWO_PI * self.nu(f);
        let h = self.height_wl;
        let kh = k * h;
        let field = |z: f64| {
            let r1 = (d * d + (z - h) * (z - h)).sqrt();
            let r2 = (d * d + (z + h) * (z + h)).sqrt();
            let r0 = (d * d + z * z).sqrt();
            let e = (-J * (k * r1)).exp() / r1 + (-J * (k * r2)).exp() / r2
                - (-J * (k * r0)).exp() * (2.0 * kh.cos() / r0);
            e * (k * (h - z.abs())).sin()
        };
        // split at z = 0 where |z| has a kink; the integrand is even in z
        let (z, w) = gauss_legendre_on(MUTUAL_NODES, 0.0, h);
        let integral: Complex64 = z.iter().zip(&w).map(|(&zi, &wi)| field(zi) * wi).sum::<Complex64>() * 2.0;
        let sh = kh.sin();
        Ok(J * (ETA0 / (4.0 * PI * sh * sh)) * integral * 0.5)
    }

    pub fn array(&self, geom: &UcaGeometry, f: f64) -> Result<SymmetricArrayModel> {
        let n = geom.n_elements();
        let mut z = Vec::with_capacity(n);
        z.push(self.self_impedance(f));
        for k in 1..n {
            z.push(self.mutual_impedance(geom.distance(0, k), f)?);
        }
        SymmetricArrayModel::from_ring(z, f)
    }

    /// Impedance sweep of the array.
    pub fn sweep(&self, geom: &UcaGeometry, freqs: &[f64]) -> Result<FrequencySweep> {
        FrequencySweep::evaluate(freqs, |f| self.array(geom, f)?.z_network())
    }
}

/// Ring-symmetric N-port antenna: `Z_mn` depends only on `(n − m) mod N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricArrayModel {
    /// `ring[k]` is the impedance between element 0 and element k; `ring[0]`
    /// is the self impedance.
    ring: Vec<Complex64>,
    freq: f64,
}

impl SymmetricArrayModel {
    pub fn from_ring(ring: Vec<Complex64>, freq: f64) -> Result<Self> {
        let n = ring.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty ring".into()));
        }
        for k in 1..n {
            if (ring[k] - ring[n - k]).norm() > 1e-12 * ring[0].norm().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "ring impedances must satisfy z[k] = z[N-k] (k = {k})"
                )));
            }
        }
        Ok(Self { ring, freq })
    }

    /// All `N` elements mutually coupled through the same `z_c`.
    pub fn uniform(n: usize, z_in: Complex64, z_c: Complex64, freq: f64) -> Result<Self> {
        let mut ring = vec![z_c; n.max(1)];
        ring[0] = z_in;
        Self::from_ring(ring, freq)
    }

    pub fn n_elements(&self) -> usize {
        self.ring.len()
    }

    pub fn z_in(&self) -> Complex64 {
        self.ring[0]
    }

    /// Coupling to the nearest neighbour.
    pub fn z_c(&self) -> Complex64 {
        if self.ring.len() > 1 {
            self.ring[1]
        } else {
            c(0.0, 0.0)
        }
    }

    pub fn ring(&self) -> &[Complex64] {
        &self.ring
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn z_matrix(&self) -> CMatrix {
        linalg::circulant(&self.ring)
    }

    pub fn z_network(&self) -> Result<MultiportNetwork> {
        MultiportNetwork::z(self.z_matrix(), self.freq)
    }

    /// Largest per-entry deviation of `Re{Z}` from `ρ·A`, relative to
    /// `max(|ρA_mn|, 1e-3·ρ·a₁₁)`, with `ρ = Re{z_in}/a₁₁`.
    pub fn cms_deviation(&self, overlap: &OverlapMatrix) -> Result<f64> {
        let n = self.n_elements();
        if overlap.n() != n {
            return Err(Error::InvalidInput(format!(
                "overlap matrix is {}x{}, array has {n} elements",
                overlap.n(),
                overlap.n()
            )));
        }
        let rho = self.z_in().re / overlap.a_diag();
        let z = self.z_matrix();
        let floor = 1e-3 * rho * overlap.a_diag();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = rho * overlap.entries()[(i, j)];
                worst = worst.max((z[(i, j)].re - target).abs() / target.abs().max(floor));
            }
        }
        Ok(worst)
    }
}

/// `Y_A = Z_A⁻¹` by numerical inversion.
pub fn admittance_of(model: &SymmetricArrayModel) -> Result<MultiportNetwork> {
    let y = linalg::checked_inverse(&model.z_matrix()).map_err(|_| Error::SingularImpedance)?;
    MultiportNetwork::y(y, model.freq())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_values() {
        assert!((monopole_pattern(FRAC_PI_2 - 1e-12) - 1.0).abs() < 1e-12);
        assert_eq!(monopole_pattern(2.0 * PI / 3.0), 0.0);
        assert!((monopole_pattern(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert_eq!(monopole_pattern(FRAC_PI_2 + 1e-12), 0.0);
        assert_eq!(monopole_pattern(0.0), 0.0);
        assert!((monopole_pattern(1e-6) - PI * 1e-6 / 4.0).abs() < 1e-15);
        // continuity across the series switch
        let a = monopole_pattern(1e-3 - 1e-15);
        let b = monopole_pattern(1e-3 + 1e-15);
        assert!((a - b).abs() < 3e-15, "{a:e} {b:e}");
        assert!((monopole_pattern(1e-3) - 7.853_982_288_472_21e-4).abs() < 1e-18);
        let direct = (FRAC_PI_2 * 0.7f64.cos()).cos() / 0.7f64.sin();
        assert!((monopole_pattern(0.7) - direct).abs() < 1e-15);
    }

    #[test]
    fn geometry() {
        let g = UcaGeometry::new(3, 0.1).unwrap();
        assert!((g.spacing() - 0.1 * 3f64.sqrt()).abs() < 1e-15);
        assert!((g.distance(1, 2) - g.spacing()).abs() < 1e-15);
        assert!(UcaGeometry::new(0, 0.1).is_err());
        assert!(UcaGeometry::new(3, -1.0).is_err());
    }

    #[test]
    fn array_factor_basics() {
        let g = UcaGeometry::new(3, 0.1).unwrap();
        let w = vec![c(1.0, 0.0), c(0.5, 0.2), c(-0.1, 0.3)];
        let af = array_factor(&g, &w, 0.0, 1.0).unwrap();
        assert!((af - w.iter().sum::<Complex64>()).norm() < 1e-15);
        let e0 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!((array_factor(&g, &e0, 1.0, 0.3).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(array_factor(&g, &e0[..2], 1.0, 0.3).is_err());
    }

    #[test]
    fn self_impedance_value() {
        let z = cms_self_impedance();
        assert!((z.re - 36.5395).abs() < 1e-3, "{z}");
        assert!((z.im - 21.2576).abs() < 1e-3, "{z}");
    }

    #[test]
    fn mutual_impedance_decays() {
        assert!(cms_mutual_impedance(50.0).unwrap().norm() < 0.5);
        let z = cms_mutual_impedance(0.173).unwrap();
        assert!((z - c(28.236, -6.492)).norm() < 2e-3, "{z}");
        assert!(cms_mutual_impedance(0.0).is_err());
    }

    #[test]
    fn numeric_model_matches_closed_form_near_f0() {
        let f0 = 3.6e9;
        let m = CmsModel::new(f0);
        for d in [0.05, 0.173, 0.236, 0.6] {
            let closed = cms_mutual_impedance(d).unwrap();
            let numeric = m.mutual_impedance(d, f0 * (1.0 + 1e-9)).unwrap();
            assert!((closed - numeric).norm() < 1e-5 * closed.norm(), "{d}: {closed} vs {numeric}");
        }
        let z = m.self_impedance(f0 * (1.0 + 1e-9));
        assert!((z - cms_self_impedance()).norm() < 1e-5);
        let off = m.mutual_impedance(0.173, 1.05 * f0).unwrap();
        assert!((off - c(31.77, -8.08)).norm() < 0.02, "{off}");
    }

    #[test]
    fn self_impedance_frequency_trend() {
        let m = CmsModel::new(1e9);
        // longer than resonance: resistance and reactance rise
        let lo = m.self_impedance(0.95e9);
        let hi = m.self_impedance(1.05e9);
        assert!(hi.re > cms_self_impedance().re && lo.re < cms_self_impedance().re);
        assert!(hi.im > lo.im);
    }

    #[test]
    fn admittance_identity() {
        let y = admittance_of(&SymmetricArrayModel::uniform(3, c(50.0, 0.0), c(0.0, 0.0), 1e9).unwrap()).unwrap();
        assert!(linalg::max_abs_diff(y.matrix(), &(linalg::identity(3) * c(0.02, 0.0))) < 1e-16);
        let zin = c(36.5, 20.0);
        let y = admittance_of(&SymmetricArrayModel::uniform(3, zin, c(0.0, 0.0), 1e9).unwrap()).unwrap();
        assert!((y.get(0, 0) - 1.0 / zin).norm() < 1e-16);
        assert!(y.get(0, 1).norm() < 1e-16);
        let g = UcaGeometry::new(3, 0.136).unwrap();
        let model = CmsModel::new(1e9).array(&g, 1e9).unwrap();
        let y = admittance_of(&model).unwrap();
        let prod = model.z_matrix() * y.matrix();
        assert!(linalg::max_abs_diff(&prod, &linalg::identity(3)) < 1e-12);
        // α/β structure
        let m = y.matrix();
        assert!((m[(0, 0)] - m[(2, 2)]).norm() < 1e-15 && (m[(0, 1)] - m[(1, 2)]).norm() < 1e-15);
        let singular = SymmetricArrayModel::uniform(2, c(1.0, 0.0), c(1.0, 0.0), 1e9).unwrap();
        assert!(matches!(admittance_of(&singular), Err(Error::SingularImpedance)));
    }

    #[test]
    fn single_element_directivity() {
        let ov = overlap_matrix(&UcaGeometry::new(1, 0.1).unwrap(), 128).unwrap();
        assert!((ov.a_diag() - 0.304_706_674_132_153_1).abs() < 1e-12);
        let d = 10.0 * (1.0 / ov.a_diag()).log10();
        assert!((d - 5.161).abs() < 1e-3);
    }

    #[test]
    fn cms_consistency_at_quarter_wave() {
        let g = UcaGeometry::new(3, 0.25 / 3f64.sqrt()).unwrap();
        let ov = overlap_matrix(&g, 128).unwrap();
        let m = CmsModel::new(1e9).array(&g, 1e9).unwrap();
        assert!(m.cms_deviation(&ov).unwrap() < 1e-8);
    }

    #[test]
    fn overlap_rejects_low_order() {
        assert!(overlap_matrix(&UcaGeometry::new(2, 0.1).unwrap(), 16).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let g = UcaGeometry::new(5, 0.2).unwrap();
        let a = overlap_matrix_with(&g, 64, Exec::Sequential).unwrap();
        let b = overlap_matrix_with(&g, 64, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
