//! Frequency-domain multiport networks in S, Z or Y form.

mod sweep;
mod terminate;

pub use sweep::{band_below_threshold, worst_level_db, Band, FrequencySweep, Selection};
pub(crate) use sweep::{db20, FLOOR_DB};
pub use terminate::terminate;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Parameter representation of a [`MultiportNetwork`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Repr {
    S,
    Z,
    Y,
}

/// Dense complex n-port parameter matrix at one frequency.
///
/// `ref_impedance` is the reference impedance of S parameters. Z and Y
/// networks carry it along unchanged; it is the default used when they are
/// converted to S.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiportNetwork {
    repr: Repr,
    ref_impedance: f64,
    freq: f64,
    matrix: CMatrix,
}

impl MultiportNetwork {
    pub fn new(repr: Repr, matrix: CMatrix, freq: f64, ref_impedance: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "parameter matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !(ref_impedance > 0.0) || !ref_impedance.is_finite() {
            return Err(Error::InvalidInput(format!(
                "reference impedance must be positive, got {ref_impedance}"
            )));
        }
        if !(freq >= 0.0) || !freq.is_finite() {
            return Err(Error::InvalidInput(format!("invalid frequency {freq}")));
        }
        Ok(Self {
            repr,
            ref_impedance,
            freq,
            matrix,
        })
    }

    pub fn s(matrix: CMatrix, freq: f64, z0: f64) -> Result<Self> {
        Self::new(Repr::S, matrix, freq, z0)
    }

    pub fn z(matrix: CMatrix, freq: f64) -> Result<Self> {
        Self::new(Repr::Z, matrix, freq, 50.0)
    }

    pub fn y(matrix: CMatrix, freq: f64) -> Result<Self> {
        Self::new(Repr::Y, matrix, freq, 50.0)
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn n_ports(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn freq(&self) -> f64 {
        self.freq
    }

    pub fn ref_impedance(&self) -> f64 {
        self.ref_impedance
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    pub fn with_freq(mut self, freq: f64) -> Self {
        self.freq = freq;
        self
    }

    /// Converts to `target`, using `z0` as the reference impedance of S
    /// parameters on either side of the conversion.
    pub fn convert(&self, target: Repr, z0: f64) -> Result<Self> {
        convert(self, target, z0)
    }

    /// Shorthand for conversion to S at `z0`.
    pub fn to_s(&self, z0: f64) -> Result<Self> {
        convert(self, Repr::S, z0)
    }

    pub fn to_y(&self) -> Result<Self> {
        convert(self, Repr::Y, self.ref_impedance)
    }

    pub fn to_z(&self) -> Result<Self> {
        convert(self, Repr::Z, self.ref_impedance)
    }

    /// `max |M - M^T|`.
    pub fn reciprocity_error(&self) -> f64 {
        linalg::max_abs_diff(&self.matrix, &self.matrix.transpose())
    }
}

/// Converts between S, Z and Y.
///
/// When the source is S its own reference impedance is used; `z0` is the
/// reference of the result when the target is S. Every route that needs an
/// inverse checks its condition number and reports
/// [`Error::SingularConversion`] above `1e12`.
pub fn convert(net: &MultiportNetwork, target: Repr, z0: f64) -> Result<MultiportNetwork> {
    if !(z0 > 0.0) {
        return Err(Error::InvalidInput(format!("reference impedance must be positive, got {z0}")));
    }
    let n = net.n_ports();
    let id = linalg::identity(n);
    let m = &net.matrix;
    let inv = |x: &CMatrix| {
        linalg::checked_inverse(x).map_err(|condition| Error::SingularConversion { target, condition })
    };
    let src_z0 = net.ref_impedance;
    let matrix = match (net.repr, target) {
        (a, b) if a == b && a != Repr::S => m.clone(),
        (Repr::S, Repr::S) => {
            if (src_z0 - z0).abs() <= 1e-15 * z0 {
                m.clone()
            } else {
                let g = (z0 - src_z0) / (z0 + src_z0);
                let g = Complex64::new(g, 0.0);
                (m - &id * g) * inv(&(&id - m * g))?
            }
        }
        (Repr::Z, Repr::Y) | (Repr::Y, Repr::Z) => inv(m)?,
        (Repr::Z, Repr::S) => {
            let zc = Complex64::new(z0, 0.0);
            (m - &id * zc) * inv(&(m + &id * zc))?
        }
        (Repr::Y, Repr::S) => {
            let zc = Complex64::new(z0, 0.0);
            (&id - m * zc) * inv(&(&id + m * zc))?
        }
        (Repr::S, Repr::Z) => (&id + m) * inv(&(&id - m))? * Complex64::new(src_z0, 0.0),
        (Repr::S, Repr::Y) => (&id - m) * inv(&(&id + m))? / Complex64::new(src_z0, 0.0),
        _ => unreachable!(),
    };
    let reference = if target == Repr::S { z0 } else { net.ref_impedance };
    MultiportNetwork::new(target, matrix, net.freq, reference)
}

/// `‖SᴴS − I‖_max < tol`. Z and Y networks are converted to S at their
/// reference impedance first; a failed conversion counts as not lossless.
pub fn is_lossless(net: &MultiportNetwork, tol: f64) -> bool {
    let s = match net.repr {
        Repr::S => net.clone(),
        _ => match net.to_s(net.ref_impedance) {
            Ok(s) => s,
            Err(_) => return false,
        },
    };
    let n = s.n_ports();
    let g = s.matrix.adjoint() * &s.matrix;
    linalg::max_abs_diff(&g, &linalg::identity(n)) < tol
}

/// `‖M − Mᵀ‖_max < tol` in the network's own representation.
pub fn is_reciprocal(net: &MultiportNetwork, tol: f64) -> bool {
    net.reciprocity_error() < tol
}
