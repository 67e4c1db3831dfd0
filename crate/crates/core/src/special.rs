//! Special functions and quadrature rules used by the antenna models.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Cosine and sine integrals `(Ci(x), Si(x))` for `x > 0`.
///
/// Power series below `x = 4`, continued fraction for `E1(ix)` above.
pub fn cisi(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "cisi requires x > 0, got {x}");
    if x <= 4.0 {
        cisi_series(x)
    } else {
        // E1(ix) = -Ci(x) + i (Si(x) - pi/2)
        let e1 = expint_e1_cf(Complex64::new(0.0, x));
        (-e1.re, FRAC_PI_2 + e1.im)
    }
}

pub fn ci(x: f64) -> f64 {
    cisi(x).0
}

pub fn si(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 0.0 {
        -cisi(-x).1
    } else {
        cisi(x).1
    }
}

/// `Cin(x) = gamma + ln x - Ci(x)`, entire; evaluated by series for small x.
pub fn cin(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < 0.5 {
        // sum_{k>=1} (-1)^{k+1} x^{2k} / (2k (2k)!)
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..30 {
            let kk = k as f64;
            term *= -x2 / ((2.0 * kk - 1.0) * (2.0 * kk));
            let add = -term / (2.0 * kk);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    EULER_GAMMA + x.ln() - ci(x)
}

fn cisi_series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    // Si
    let mut term = x; // x^{2k+1}/(2k+1)!
    let mut si = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        let add = term / (2.0 * k + 1.0);
        si += add;
        if add.abs() < 1e-17 * si.abs() {
            break;
        }
    }
    // Ci
    let mut term = 1.0; // x^{2k}/(2k)!
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        let add = term / (2.0 * k);
        sum += add;
        if add.abs() < 1e-17 * (sum.abs() + 1.0) {
            break;
        }
    }
    (EULER_GAMMA + x.ln() + sum, si)
}

/// Exponential integral `E1(z)` by the modified Lentz continued fraction,
/// valid for `|z|` of order one and above away from the negative real axis.
fn expint_e1_cf(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    // E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
    let mut b = z + one;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = one / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - one).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}
