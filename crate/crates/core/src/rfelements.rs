//! Ideal circuit primitives: lumped susceptances with L/C frequency laws,
//! TEM transmission lines, open stubs, the quarter-wave equivalent of a
//! series reactance and the star/triangle three-ports.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, J};
use crate::netcore::MultiportNetwork;

/// Nepers per decibel.
const NP_PER_DB: f64 = std::f64::consts::LN_10 / 20.0;

/// Angles closer than this to a resonance are rejected.
const RESONANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Realization {
    Capacitor,
    Inductor,
    Null,
}

/// A lumped susceptance specified by its value `b0` at the design frequency.
///
/// Positive values are capacitors (`B ∝ f`), negative values inductors
/// (`B ∝ 1/f`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptance {
    pub b0: f64,
    pub f0: f64,
}

impl Susceptance {
    pub fn new(b0: f64, f0: f64) -> Self {
        Self { b0, f0 }
    }

    pub fn realization(&self) -> Realization {
        if self.b0 > 0.0 {
            Realization::Capacitor
        } else if self.b0 < 0.0 {
            Realization::Inductor
        } else {
            Realization::Null
        }
    }

    /// Value in siemens at `f`.
    pub fn at(&self, f: f64) -> f64 {
        susceptance_at(self, f)
    }
}

pub fn susceptance_at(s: &Susceptance, f: f64) -> f64 {
    debug_assert!(f > 0.0);
    if f == s.f0 {
        return s.b0;
    }
    match s.realization() {
        Realization::Capacitor => s.b0 * f / s.f0,
        Realization::Inductor => s.b0 * s.f0 / f,
        Realization::Null => 0.0,
    }
}

/// ABCD (chain) matrix of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Abcd {
    pub fn identity() -> Self {
        Self {
            a: c(1.0, 0.0),
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: c(1.0, 0.0),
        }
    }

    pub fn series(z: Complex64) -> Self {
        Self { b: z, ..Self::identity() }
    }

    pub fn shunt(y: Complex64) -> Self {
        Self { c: y, ..Self::identity() }
    }

    /// `self` followed by `next`.
    pub fn cascade(&self, next: &Abcd) -> Abcd {
        Abcd {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    pub fn input_impedance(&self, z_load: Complex64) -> Complex64 {
        (self.a * z_load + self.b) / (self.c * z_load + self.d)
    }

    /// S parameters at reference impedance `z0`.
    pub fn to_s(&self, z0: f64) -> CMatrix {
        let den = self.a + self.b / z0 + self.c * z0 + self.d;
        let det = self.a * self.d - self.b * self.c;
        let s11 = (self.a + self.b / z0 - self.c * z0 - self.d) / den;
        let s12 = 2.0 * det / den;
        let s21 = c(2.0, 0.0) / den;
        let s22 = (-self.a + self.b / z0 - self.c * z0 + self.d) / den;
        CMatrix::from_row_slice(2, 2, &[s11, s12, s21, s22])
    }

    /// Y parameters; `None` when `B = 0`.
    pub fn to_y(&self) -> Option<CMatrix> {
        if self.b.norm() == 0.0 {
            return None;
        }
        let det = self.a * self.d - self.b * self.c;
        Some(CMatrix::from_row_slice(
            2,
            2,
            &[self.d / self.b, -det / self.b, -c(1.0, 0.0) / self.b, self.a / self.b],
        ))
    }

    pub fn max_abs_diff(&self, other: &Abcd) -> f64 {
        [
            (self.a - other.a).norm(),
            (self.b - other.b).norm(),
            (self.c - other.c).norm(),
            (self.d - other.d).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Uniform TEM line. The electrical length scales linearly with frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionLine {
    pub z_c: f64,
    pub electrical_length_at_f0: f64,
    pub f0: f64,
    pub attenuation_db_per_wavelength: f64,
}

impl TransmissionLine {
    pub fn lossless(z_c: f64, theta0: f64, f0: f64) -> Self {
        Self {
            z_c,
            electrical_length_at_f0: theta0,
            f0,
            attenuation_db_per_wavelength: 0.0,
        }
    }

    pub fn with_attenuation(mut self, db_per_wavelength: f64) -> Self {
        self.attenuation_db_per_wavelength = db_per_wavelength;
        self
    }

    pub fn theta_at(&self, f: f64) -> f64 {
        self.electrical_length_at_f0 * f / self.f0
    }

    /// Complex propagation `γl = αl + jθ`.
    pub fn gamma_l(&self, f: f64) -> Complex64 {
        let theta = self.theta_at(f);
        let alpha_l = self.attenuation_db_per_wavelength * NP_PER_DB * theta / (2.0 * PI);
        c(alpha_l, theta)
    }

    fn is_lossless(&self) -> bool {
        self.attenuation_db_per_wavelength == 0.0
    }

    pub fn abcd(&self, f: f64) -> Abcd {
        if self.is_lossless() {
            let t = self.theta_at(f);
            let (s, co) = t.sin_cos();
            return Abcd {
                a: c(co, 0.0),
                b: J * (self.z_c * s),
                c: J * (s / self.z_c),
                d: c(co, 0.0),
            };
        }
        let gl = self.gamma_l(f);
        let (sh, ch) = (gl.sinh(), gl.cosh());
        Abcd {
            a: ch,
            b: sh * self.z_c,
            c: sh / self.z_c,
            d: ch,
        }
    }

    /// Two-port admittance matrix; singular when the line is a multiple of a
    /// half wavelength long.
    pub fn y_matrix(&self, f: f64) -> Result<CMatrix> {
        let theta = self.theta_at(f);
        if self.is_lossless() {
            let s = theta.sin();
            if s.abs() < RESONANCE_TOL {
                return Err(Error::LineResonance { theta });
            }
            let y11 = -J * (theta.cos() / (s * self.z_c));
            let y12 = J / (s * self.z_c);
            return Ok(CMatrix::from_row_slice(2, 2, &[y11, y12, y12, y11]));
        }
        let gl = self.gamma_l(f);
        let sh = gl.sinh();
        if sh.norm() < RESONANCE_TOL {
            return Err(Error::LineResonance { theta });
        }
        let y11 = gl.cosh() / (sh * self.z_c);
        let y12 = -c(1.0, 0.0) / (sh * self.z_c);
        Ok(CMatrix::from_row_slice(2, 2, &[y11, y12, y12, y11]))
    }
}

/// Input admittance of the line left open at its far end.
pub fn open_stub_admittance(tl: &TransmissionLine, f: f64) -> Result<Complex64> {
    let theta = tl.theta_at(f);
    let offset = (theta - FRAC_PI_2).rem_euclid(PI);
    if offset.min(PI - offset) < RESONANCE_TOL {
        return Err(Error::StubResonance { theta });
    }
    if tl.is_lossless() {
        Ok(J * (theta.tan() / tl.z_c))
    } else {
        Ok(tl.gamma_l(f).tanh() / tl.z_c)
    }
}

/// S-parameter two-port of the line at reference `z0`.
pub fn tl_two_port(tl: &TransmissionLine, f: f64, z0: f64) -> Result<MultiportNetwork> {
    MultiportNetwork::s(tl.abcd(f).to_s(z0), f, z0)
}

/// Open stub of characteristic impedance `z_stub` whose input susceptance at
/// `f0` equals `b`. The electrical length lies in `[0, π)`.
pub fn stub_for_susceptance(b: f64, z_stub: f64, f0: f64) -> TransmissionLine {
    let t = (b * z_stub).atan();
    let theta = if t < 0.0 { t + PI } else { t };
    TransmissionLine::lossless(z_stub, theta, f0)
}

/// Three-line network equivalent to a series reactance at one frequency:
/// an odd-quarter-wave series line of impedance `|x|` with an open stub of
/// the same impedance at each end.
///
/// Inductive reactances use a λ/4 line with 3λ/8 stubs, capacitive ones a
/// 3λ/4 line with λ/8 stubs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterWaveEquivalent {
    pub stub_in: TransmissionLine,
    pub series: TransmissionLine,
    pub stub_out: TransmissionLine,
}

impl QuarterWaveEquivalent {
    pub fn abcd(&self, f: f64) -> Result<Abcd> {
        let y1 = open_stub_admittance(&self.stub_in, f)?;
        let y2 = open_stub_admittance(&self.stub_out, f)?;
        Ok(Abcd::shunt(y1).cascade(&self.series.abcd(f)).cascade(&Abcd::shunt(y2)))
    }

    pub fn lines(&self) -> [TransmissionLine; 3] {
        [self.stub_in, self.series, self.stub_out]
    }
}

pub fn quarter_wave_equivalent(x_series: f64, f0: f64) -> Result<QuarterWaveEquivalent> {
    if x_series == 0.0 || !x_series.is_finite() {
        return Err(Error::InvalidInput(format!(
            "series reactance must be finite and nonzero, got {x_series}"
        )));
    }
    let z = x_series.abs();
    let (theta_series, theta_stub) = if x_series > 0.0 {
        (FRAC_PI_2, 3.0 * FRAC_PI_4)
    } else {
        (3.0 * FRAC_PI_2, FRAC_PI_4)
    };
    let stub = TransmissionLine::lossless(z, theta_stub, f0);
    Ok(QuarterWaveEquivalent {
        stub_in: stub,
        series: TransmissionLine::lossless(z, theta_series, f0),
        stub_out: stub,
    })
}

/// Star admittances `(Y_s, Y_s')` with `Y_s = −j/(z_s tan θ)` and
/// `Y_s' = −2j/(3 z_s sin 2θ)`.
pub fn star_admittances(z_s: f64, theta_s: f64) -> Result<(Complex64, Complex64)> {
    let s2 = (2.0 * theta_s).sin();
    if s2.abs() < RESONANCE_TOL {
        return Err(Error::StarResonance { theta: theta_s });
    }
    let ys = -J / (z_s * theta_s.tan());
    let ysp = -J * (2.0 / (3.0 * z_s * s2));
    Ok((ys, ysp))
}

/// Three equal lines joined at a floating centre node, seen from their outer
/// ends: diagonal `Y_s − Y_s'`, off-diagonal `−Y_s'`.
pub fn star_three_port(z_s: f64, theta_s: f64, f: f64) -> Result<MultiportNetwork> {
    let (ys, ysp) = star_admittances(z_s, theta_s)?;
    let m = CMatrix::from_fn(3, 3, |i, j| if i == j { ys - ysp } else { -ysp });
    MultiportNetwork::y(m, f)
}

/// Three equal lines joining each pair of ports: diagonal `2Y_t` with
/// `Y_t = −j/(z_t tan θ)`, off-diagonal `j/(z_t sin θ)`.
pub fn triangle_three_port(z_t: f64, theta_t: f64, f: f64) -> Result<MultiportNetwork> {
    let s = theta_t.sin();
    if s.abs() < RESONANCE_TOL {
        return Err(Error::ResonantAngle { theta: theta_t });
    }
    let yt = -J / (z_t * theta_t.tan());
    let ytp = J / (z_t * s);
    let m = CMatrix::from_fn(3, 3, |i, j| if i == j { yt * 2.0 } else { ytp });
    MultiportNetwork::y(m, f)
}

/// Characteristic impedance of a coaxial line.
pub fn coax_impedance(r_inner: f64, r_outer: f64, eps_r: f64) -> Result<f64> {
    if !(r_inner > 0.0 && r_outer > r_inner) {
        return Err(Error::GeometryInvalid(format!(
            "need r_outer > r_inner > 0, got {r_inner}, {r_outer}"
        )));
    }
    if !(eps_r >= 1.0) {
        return Err(Error::GeometryInvalid(format!("eps_r must be >= 1, got {eps_r}")));
    }
    Ok(crate::ETA0 / (2.0 * PI * eps_r.sqrt()) * (r_outer / r_inner).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::netcore::is_lossless;

    const F0: f64 = 3.6e9;

    #[test]
    fn susceptance_laws() {
        let cap = Susceptance::new(0.02, F0);
        let ind = Susceptance::new(-0.02, F0);
        assert_eq!(cap.at(F0), 0.02);
        assert!((cap.at(2.0 * F0) - 0.04).abs() < 1e-17);
        assert!((ind.at(2.0 * F0) + 0.01).abs() < 1e-17);
        assert_eq!(Susceptance::new(0.0, F0).realization(), Realization::Null);
    }

    #[test]
    fn stub_values() {
        let tl = TransmissionLine::lossless(50.0, FRAC_PI_4, F0);
        assert!((open_stub_admittance(&tl, F0).unwrap() - c(0.0, 0.02)).norm() < 1e-16);
        let tl = TransmissionLine::lossless(50.0, 1e-12, F0);
        assert!(open_stub_admittance(&tl, F0).unwrap().norm() < 1e-13);
        let tl = TransmissionLine::lossless(50.0, FRAC_PI_2, F0);
        assert!(matches!(open_stub_admittance(&tl, F0), Err(Error::StubResonance { .. })));
        let tl = TransmissionLine::lossless(50.0, 1.5 * PI, F0);
        assert!(matches!(open_stub_admittance(&tl, F0), Err(Error::StubResonance { .. })));
    }

    #[test]
    fn stub_matches_open_terminated_abcd() {
        let tl = TransmissionLine::lossless(70.0, 1.0, F0);
        let y = open_stub_admittance(&tl, F0).unwrap();
        assert!((y.im - 1.0f64.tan() / 70.0).abs() < 1e-15);
        assert!((y.im - 0.022_249).abs() < 1e-5);
        // open load: Z_in = A / C
        let abcd = tl.abcd(F0);
        let y_abcd = abcd.c / abcd.a;
        assert!((y - y_abcd).norm() < 1e-15);
        let lossy = tl.with_attenuation(0.3);
        let y = open_stub_admittance(&lossy, F0).unwrap();
        let abcd = lossy.abcd(F0);
        assert!((y - abcd.c / abcd.a).norm() < 1e-15);
    }

    #[test]
    fn full_wave_line_is_transparent() {
        let tl = TransmissionLine::lossless(37.0, 2.0 * PI, F0);
        let s = tl_two_port(&tl, F0, 50.0).unwrap();
        assert!((s.get(1, 0).norm() - 1.0).abs() < 1e-12);
        assert!(s.get(1, 0).arg().abs() < 1e-12);
        assert!(s.get(0, 0).norm() < 1e-12);
    }

    #[test]
    fn quarter_wave_inverter() {
        let tl = TransmissionLine::lossless(50.0, FRAC_PI_2, F0);
        let zin = tl.abcd(F0).input_impedance(c(100.0, 0.0));
        assert!((zin - c(25.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn input_impedance_two_routes() {
        let tl = TransmissionLine::lossless(60.0, PI / 3.0, F0);
        let zl = c(30.0, 10.0);
        let via_abcd = tl.abcd(F0).input_impedance(zl);
        // S route: Γ_in = S11 + S12 S21 Γ_L / (1 - S22 Γ_L)
        let z0 = 50.0;
        let s = tl_two_port(&tl, F0, z0).unwrap();
        let gl = (zl - z0) / (zl + z0);
        let gin = s.get(0, 0) + s.get(0, 1) * s.get(1, 0) * gl / (c(1.0, 0.0) - s.get(1, 1) * gl);
        let via_s = z0 * (c(1.0, 0.0) + gin) / (c(1.0, 0.0) - gin);
        assert!((via_abcd - via_s).norm() < 1e-12);
    }

    #[test]
    fn lossy_line_is_not_lossless() {
        // 0.1 dB total loss on a quarter-wave line
        let tl = TransmissionLine::lossless(50.0, FRAC_PI_2, F0).with_attenuation(0.4);
        let s = tl_two_port(&tl, F0, 50.0).unwrap();
        let s21 = s.get(1, 0).norm();
        assert!((20.0 * s21.log10() + 0.1).abs() < 1e-9);
        let g = s.matrix().adjoint() * s.matrix();
        let dev = linalg::max_abs_diff(&g, &linalg::identity(2));
        assert!(dev > 1e-6);
        assert!(!is_lossless(&s, 1e-6));
        let ideal = tl_two_port(&TransmissionLine::lossless(50.0, FRAC_PI_2, F0), F0, 50.0).unwrap();
        assert!(is_lossless(&ideal, 1e-12));
    }

    #[test]
    fn quarter_wave_equivalent_exact_only_at_f0() {
        for x in [50.0, -50.0, 3.0, -400.0] {
            let eq = quarter_wave_equivalent(x, F0).unwrap();
            let series = Abcd::series(c(0.0, x));
            assert!(eq.abcd(F0).unwrap().max_abs_diff(&series) < 1e-9 * x.abs().max(1.0));
            for f in [1.1 * F0, 0.95 * F0, 1.05 * F0] {
                // the series element is held at its f0 value
                assert!(eq.abcd(f).unwrap().max_abs_diff(&series) > 1e-4);
            }
        }
        assert!(quarter_wave_equivalent(0.0, F0).is_err());
    }

    #[test]
    fn star_formula_values() {
        let (ys, ysp) = star_admittances(50.0, FRAC_PI_4).unwrap();
        assert!((ys - c(0.0, -0.02)).norm() < 1e-15);
        assert!((ysp - c(0.0, -2.0 / 150.0)).norm() < 1e-15);
        assert!(matches!(star_admittances(50.0, FRAC_PI_2), Err(Error::StarResonance { .. })));
    }

    #[test]
    fn coax_values() {
        let z = coax_impedance(1.5e-3, 2.5e-3, 2.2).unwrap();
        assert!((z - 20.65).abs() < 0.01, "{z}");
        let z = coax_impedance(1.0, std::f64::consts::E, 1.0).unwrap();
        assert!((z - 59.9585).abs() < 1e-4);
        assert!(coax_impedance(1.0, 1.0 + 1e-12, 1.0).unwrap() < 1e-9);
        assert!(matches!(coax_impedance(2.0, 1.0, 1.0), Err(Error::GeometryInvalid(_))));
        assert!(coax_impedance(1.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn stub_design_inverts_admittance() {
        for b in [0.02, -0.013, 1e-4, -3.0] {
            let s = stub_for_susceptance(b, 50.0, F0);
            assert!((open_stub_admittance(&s, F0).unwrap().im - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }
}
