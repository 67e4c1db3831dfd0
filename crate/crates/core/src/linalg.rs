//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Largest condition number accepted before an inverse is declared singular.
pub const MAX_CONDITION: f64 = 1e12;

pub const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse guarded by a condition-number check. Returns the condition number
/// on failure.
pub fn checked_inverse(m: &CMatrix) -> Result<CMatrix, f64> {
    let cond = condition_number(m);
    if !(cond <= MAX_CONDITION) {
        return Err(cond);
    }
    m.clone().try_inverse().ok_or(cond)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Relative difference `max|a-b| / max(max|b|, tiny)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs_diff(a, b) / max_abs(b).max(f64::MIN_POSITIVE)
}

/// Symmetric circulant matrix from its first row.
pub fn circulant(first_row: &[Complex64]) -> CMatrix {
    let n = first_row.len();
    CMatrix::from_fn(n, n, |i, j| first_row[(j + n - i) % n])
}

pub fn from_real(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_matrix_is_rejected() {
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(checked_inverse(&m).is_err());
        let m = identity(3) * c(2.0, 1.0);
        let inv = checked_inverse(&m).unwrap();
        assert!(max_abs_diff(&(inv * m), &identity(3)) < 1e-15);
    }

    #[test]
    fn circulant_layout() {
        let m = circulant(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(m[(1, 0)], c(3.0, 0.0));
        assert_eq!(m[(1, 2)], c(2.0, 0.0));
        assert_eq!(m[(2, 0)], c(2.0, 0.0));
    }
}
