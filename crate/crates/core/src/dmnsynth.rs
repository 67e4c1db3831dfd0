//! Closed-form synthesis of decoupling and matching networks for
//! three-element symmetric arrays, and their transmission-line
//! realizations.
//!
//! Six-port conventions: ports 0..3 face the antenna (A), ports 3..6 face the
//! sources (P). Netlists use nodes 1..=3 for A and 4..=6 for P.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, J};
use crate::netcore::{terminate, FrequencySweep, MultiportNetwork, Repr};
use crate::netlist::Netlist;
use crate::rfelements::{quarter_wave_equivalent, stub_for_susceptance, TransmissionLine};

/// Characteristic impedance used for grounded open stubs.
pub const STUB_IMPEDANCE: f64 = 50.0;

/// Practical line-impedance window in ohms.
pub const REALIZABLE_Z: (f64, f64) = (5.0, 250.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the four closed-form solutions: sign of `B₂` and sign in front
/// of the square root `s = √(a² + 2ab − 3b²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Branch {
    pub b2_sign: Sign,
    pub sqrt_sign: Sign,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch { b2_sign: Sign::Plus, sqrt_sign: Sign::Plus },
        Branch { b2_sign: Sign::Plus, sqrt_sign: Sign::Minus },
        Branch { b2_sign: Sign::Minus, sqrt_sign: Sign::Plus },
        Branch { b2_sign: Sign::Minus, sqrt_sign: Sign::Minus },
    ];

    /// Parses `pp`, `pm`, `mp` or `mm`.
    pub fn parse(s: &str) -> Option<Branch> {
        let sign = |ch| match ch {
            'p' | '+' => Some(Sign::Plus),
            'm' | '-' => Some(Sign::Minus),
            _ => None,
        };
        let mut it = s.chars();
        let b = Branch {
            b2_sign: sign(it.next()?)?,
            sqrt_sign: sign(it.next()?)?,
        };
        it.next().is_none().then_some(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchChoice {
    /// Smallest `max_k |B_k|` over the four branches.
    MinMaxSusceptance,
    Fixed(Branch),
}

/// Diagonal `a` and off-diagonal `b` of `(Re{Y_A})⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPartDecomposition {
    pub a: f64,
    pub b: f64,
}

impl RealPartDecomposition {
    pub fn from_alpha_beta(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let l1 = alpha.re + 2.0 * beta.re;
        let l2 = alpha.re - beta.re;
        if !(l1 > 0.0 && l2 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Re{{Y_A}} is not positive definite (eigenvalues {l1:e}, {l2:e})"
            )));
        }
        Ok(Self {
            a: (1.0 / l1 + 2.0 / l2) / 3.0,
            b: (1.0 / l1 - 1.0 / l2) / 3.0,
        })
    }

    /// `a² + 2ab − 3b²`; synthesis needs it non-negative.
    pub fn feasibility(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        a * a + 2.0 * a * b - 3.0 * b * b
    }
}

/// Diagonal and off-diagonal entries of a symmetric three-port admittance.
pub fn alpha_beta(y: &MultiportNetwork) -> Result<(Complex64, Complex64)> {
    if y.repr() != Repr::Y || y.n_ports() != 3 {
        return Err(Error::InvalidInput("expected a three-port admittance matrix".into()));
    }
    Ok((y.get(0, 0), y.get(0, 1)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageDesign {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub branch: Branch,
    pub f0: f64,
    /// Set when the array is (numerically) uncoupled in its real part and the
    /// `b → 0` limit was used.
    pub degenerate_coupling: bool,
}

impl TwoStageDesign {
    pub fn susceptances(&self) -> [f64; 5] {
        [self.b1, self.b2, self.b3, self.b4, self.b5]
    }

    fn max_abs(&self) -> f64 {
        self.susceptances().iter().fold(0.0, |m, b| m.max(b.abs()))
    }
}

const DEGENERATE_B: f64 = 1e-14;

/// `B₃` that decouples the ports for a given `B₂` on the chosen root.
pub fn b3_for_decoupling(b2: f64, rp: &RealPartDecomposition, sqrt_sign: Sign) -> f64 {
    let (a, b) = (rp.a, rp.b);
    let s = rp.feasibility().max(0.0).sqrt();
    // t = B₃/B₂ = −(a + b ± s)/(2b); the "−" root in cancellation-free form
    let t = match sqrt_sign {
        Sign::Plus => -(a + b + s) / (2.0 * b),
        Sign::Minus => -2.0 * b / (a + b + s),
    };
    t * b2
}

/// Two-stage design for the array admittance entries `alpha`, `beta`.
pub fn synth_two_stage(
    alpha: Complex64,
    beta: Complex64,
    z0: f64,
    f0: f64,
    choice: BranchChoice,
) -> Result<TwoStageDesign> {
    match choice {
        BranchChoice::Fixed(br) => synth_two_stage_branch(alpha, beta, z0, f0, br),
        BranchChoice::MinMaxSusceptance => {
            let all = two_stage_branches(alpha, beta, z0, f0)?;
            let mut best = all[0];
            for d in &all[1..] {
                if d.max_abs() < best.max_abs() {
                    best = *d;
                }
            }
            Ok(best)
        }
    }
}

/// All four branch solutions, in [`Branch::ALL`] order.
pub fn two_stage_branches(alpha: Complex64, beta: Complex64, z0: f64, f0: f64) -> Result<Vec<TwoStageDesign>> {
    Branch::ALL
        .iter()
        .map(|&br| synth_two_stage_branch(alpha, beta, z0, f0, br))
        .collect()
}

fn synth_two_stage_branch(alpha: Complex64, beta: Complex64, z0: f64, f0: f64, br: Branch) -> Result<TwoStageDesign> {
    if !(z0 > 0.0) {
        return Err(Error::InvalidInput(format!("z0 must be positive, got {z0}")));
    }
    let rp = RealPartDecomposition::from_alpha_beta(alpha, beta)?;
    let deficit = rp.feasibility();
    if deficit < 0.0 {
        return Err(Error::Infeasible { deficit });
    }
    let (a, b) = (rp.a, rp.b);
    let s = deficit.sqrt();
    let q = a * a + a * b - 2.0 * b * b;
    let o = br.b2_sign.value();
    let degenerate = b.abs() <= DEGENERATE_B * a;
    let sgn_b = if b < 0.0 { -1.0 } else { 1.0 };
    // Rationalized forms of B₂ = ±√(2b²/(z0 q (a+b±s))), finite as b → 0.
    let (b2, b3) = match br.sqrt_sign {
        Sign::Plus => {
            let d = a + b + s;
            let b2 = o * b.abs() * (2.0 / (z0 * q * d)).sqrt();
            let b3 = -o * sgn_b * (d / (2.0 * z0 * q)).sqrt();
            (b2, b3)
        }
        Sign::Minus => {
            let b2 = o * ((a + b + s) / (2.0 * z0 * q)).sqrt();
            (b2, b3_for_decoupling(b2, &rp, Sign::Minus))
        }
    };
    let b1 = beta.im;
    let b4 = -(alpha + 2.0 * beta).im - b2 - b3;
    let b5 = -b2 - b3;
    let d = TwoStageDesign {
        b1,
        b2,
        b3,
        b4,
        b5,
        branch: br,
        f0,
        degenerate_coupling: degenerate,
    };
    if d.susceptances().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite susceptance in two-stage synthesis".into()));
    }
    Ok(d)
}

/// `j[[A, Bᵀ], [B, C]]` of the two-stage network.
pub fn two_stage_six_port(d: &TwoStageDesign) -> Result<MultiportNetwork> {
    let mut m = DMatrix::<f64>::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = if i == j { 2.0 * d.b1 + d.b2 + d.b3 + d.b4 } else { -d.b1 };
        }
        m[(3 + i, 3 + i)] = d.b2 + d.b3 + d.b5;
        // P_i–A_i through B₂, P_i–A_{i−1} through B₃
        let prev = (i + 2) % 3;
        m[(3 + i, i)] = -d.b2;
        m[(i, 3 + i)] = -d.b2;
        m[(3 + i, prev)] = -d.b3;
        m[(prev, 3 + i)] = -d.b3;
    }
    MultiportNetwork::y(linalg::from_real(&m) * J, d.f0)
}

/// Lumped netlist of the two-stage network (L/C frequency laws).
pub fn two_stage_lumped_netlist(d: &TwoStageDesign) -> Netlist {
    let mut nl = Netlist::new(d.f0, (1..=6).collect());
    for i in 0..3 {
        let (ai, pi) = (i + 1, i + 4);
        let a_next = (i + 1) % 3 + 1;
        let a_prev = (i + 2) % 3 + 1;
        nl.lumped(d.b1, ai, a_next);
        nl.lumped(d.b2, pi, ai);
        nl.lumped(d.b3, pi, a_prev);
        nl.lumped(d.b4, ai, 0);
        nl.lumped(d.b5, pi, 0);
    }
    nl
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageReport {
    pub xi: f64,
    pub gamma: f64,
    pub decoupled: bool,
    pub matched: bool,
}

/// Recomputes the decoupling entry `ξ` and matching entry `γ` of the
/// combined network's real part.
pub fn verify_two_stage_identities(d: &TwoStageDesign, rp: &RealPartDecomposition, z0: f64) -> TwoStageReport {
    let (a, b) = (rp.a, rp.b);
    let (b2, b3) = (d.b2, d.b3);
    let xi = b2 * b3 * a + (b2 * b2 + b2 * b3 + b3 * b3) * b;
    let gamma = a * (b2 * b2 + b3 * b3) + 2.0 * b * b2 * b3;
    TwoStageReport {
        xi,
        gamma,
        decoupled: xi.abs() <= 1e-12 / z0,
        matched: (gamma * z0 - 1.0).abs() <= 1e-12,
    }
}

/// Which admissible root of the star-triangle quartic to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPolicy {
    MinBc,
    /// Index into the admissible real roots sorted ascending.
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarTriangleDesign {
    pub b_a: f64,
    pub b_b: f64,
    /// Series susceptance at each antenna port; `None` means a direct
    /// connection.
    pub b_c: Option<f64>,
    pub b_s: f64,
    pub b_t: f64,
    /// Diagonal `e` of the augmented impedance matrix for the chosen root.
    pub chosen_root: Complex64,
    /// All roots of the quartic in `Im e` (empty for an uncoupled array).
    pub roots: Vec<Complex64>,
    pub f0: f64,
}

/// Real roots are those with `|Im| < 1e-9 (1 + |Re|)`.
pub fn is_real_root(r: Complex64) -> bool {
    r.im.abs() < 1e-9 * (1.0 + r.re.abs())
}

// Polynomials in ascending powers.
fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| p.get(i).copied().unwrap_or_default() + q.get(i).copied().unwrap_or_default())
        .collect()
}

/// Coefficients (ascending) of `Re{c(c − e)·conj(e³ + 2c³ − 3c²e)}` with
/// `e = r + jx`, as a polynomial in `x`.
pub fn star_triangle_quartic(r: f64, cpl: Complex64) -> [f64; 5] {
    let e = [c(r, 0.0), J];
    let u = poly_mul(&[cpl], &poly_add(&[cpl], &[-e[0], -e[1]]));
    let e2 = poly_mul(&e, &e);
    let e3 = poly_mul(&e2, &e);
    let v = poly_add(&poly_add(&e3, &[2.0 * cpl * cpl * cpl]), &poly_mul(&[-3.0 * cpl * cpl], &e));
    let vc: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    let q = poly_mul(&u, &vc);
    let mut out = [0.0; 5];
    for (o, z) in out.iter_mut().zip(q) {
        *o = z.re;
    }
    out
}

/// Roots of a real polynomial (ascending coefficients) from the eigenvalues
/// of its companion matrix. Leading coefficients below `1e-14` of the
/// largest are dropped.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let scale = coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let mut roots: Vec<Complex64> = comp.complex_eigenvalues().iter().copied().collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Largest deviation between `coeffs` and `lead·Π(x − r_k)`, relative to
/// the largest coefficient.
pub fn vieta_residual(coeffs: &[f64], roots: &[Complex64]) -> f64 {
    let deg = roots.len();
    let lead = coeffs[deg];
    let mut p = vec![c(lead, 0.0)];
    for r in roots {
        p = poly_mul(&p, &[-r, c(1.0, 0.0)]);
    }
    let scale = coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &a)| (p.get(i).copied().unwrap_or_default() - a).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Star-triangle design for a three-element array with self impedance
/// `z_in` and coupling `z_c`.
///
/// A series element `1/(jB_c)` at each antenna port makes the augmented
/// array's admittance off-diagonal purely imaginary; the remaining
/// star-triangle core then decouples and matches.
pub fn synth_star_triangle(
    z_in: Complex64,
    z_c: Complex64,
    z0: f64,
    f0: f64,
    policy: RootPolicy,
) -> Result<StarTriangleDesign> {
    if !(z0 > 0.0) {
        return Err(Error::InvalidInput(format!("z0 must be positive, got {z0}")));
    }
    let (b_c, chosen_root, roots) = if z_c.norm() <= 1e-12 * z_in.norm() {
        (None, z_in, Vec::new())
    } else {
        let q = star_triangle_quartic(z_in.re, z_c);
        let roots = poly_roots(&q);
        let mut real: Vec<f64> = roots.iter().filter(|r| is_real_root(**r)).map(|r| r.re).collect();
        if real.is_empty() {
            return Err(Error::NoRealRoot { roots });
        }
        real.sort_by(f64::total_cmp);
        let bc_of = |x: f64| {
            let gap = z_in.im - x;
            (gap.abs() > 1e-12 * z_in.norm()).then(|| 1.0 / gap)
        };
        let x = match policy {
            RootPolicy::Index(k) => *real.get(k).ok_or_else(|| {
                Error::InvalidInput(format!("root index {k} out of range ({} real roots)", real.len()))
            })?,
            RootPolicy::MinBc => *real
                .iter()
                .min_by(|a, b| {
                    let m = |x: f64| bc_of(x).map_or(f64::INFINITY, f64::abs);
                    m(**a).total_cmp(&m(**b))
                })
                .expect("nonempty"),
        };
        (bc_of(x), c(z_in.re, x), roots)
    };
    let e = chosen_root;
    // Y_B = Z_B⁻¹ for the circulant Z_B with diagonal e, off-diagonal c
    let den = (e - z_c) * (e + 2.0 * z_c);
    let alpha = (e + z_c) / den;
    let beta = -z_c / den;
    if !(alpha.re > 0.0) {
        return Err(Error::InvalidInput("augmented array has non-positive conductance".into()));
    }
    let b_t = beta.im;
    let b_b = (alpha.re / z0).sqrt();
    let b_s = -(alpha + 2.0 * beta).im - b_b;
    Ok(StarTriangleDesign {
        b_a: -b_b,
        b_b,
        b_c,
        b_s,
        b_t,
        chosen_root,
        roots,
        f0,
    })
}

/// Core six-port (without the series elements): A block diagonal
/// `2B_t + B_s + B_b`, off-diagonal `−B_t`; `B = −B_b·I`; `C = (B_a + B_b)·I`.
pub fn star_triangle_six_port(d: &StarTriangleDesign) -> Result<MultiportNetwork> {
    let mut m = DMatrix::<f64>::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = if i == j { 2.0 * d.b_t + d.b_s + d.b_b } else { -d.b_t };
        }
        m[(3 + i, i)] = -d.b_b;
        m[(i, 3 + i)] = -d.b_b;
        m[(3 + i, 3 + i)] = d.b_a + d.b_b;
    }
    MultiportNetwork::y(linalg::from_real(&m) * J, d.f0)
}

fn core_node(d: &StarTriangleDesign, i: usize) -> usize {
    if d.b_c.is_some() {
        7 + i
    } else {
        1 + i
    }
}

/// Lumped netlist of the complete star-triangle network including the
/// series elements (core nodes 7..=9).
pub fn star_triangle_lumped_netlist(d: &StarTriangleDesign) -> Netlist {
    let mut nl = Netlist::new(d.f0, (1..=6).collect());
    for i in 0..3 {
        let k = core_node(d, i);
        let k_next = core_node(d, (i + 1) % 3);
        if let Some(bc) = d.b_c {
            nl.lumped(bc, i + 1, k);
        }
        nl.lumped(d.b_t, k, k_next);
        nl.lumped(d.b_s, k, 0);
        nl.lumped(d.b_b, k, i + 4);
        nl.lumped(d.b_a, i + 4, 0);
    }
    nl
}

/// Complete star-triangle six-port at `f0`.
pub fn star_triangle_dmn(d: &StarTriangleDesign) -> Result<MultiportNetwork> {
    star_triangle_lumped_netlist(d).evaluate(d.f0)
}

/// Source-side admittance of `dmn` with its first `k` ports loaded by `load`.
pub fn feed_admittance(dmn: &MultiportNetwork, load: &MultiportNetwork) -> Result<MultiportNetwork> {
    let k = load.n_ports();
    let idx: Vec<usize> = (0..k).collect();
    terminate(dmn, load, &idx)
}

/// S parameters at the source ports of `dmn` terminated in the antenna
/// sweep (interpolated), at reference `z0`.
pub fn feed_port_sweep(dmn: &Netlist, antenna: &FrequencySweep, freqs: &[f64], z0: f64) -> Result<FrequencySweep> {
    FrequencySweep::evaluate(freqs, |f| {
        let ya = antenna.interpolate(f)?.to_y()?;
        let y = feed_admittance(&dmn.evaluate(f)?, &ya)?;
        y.to_s(z0)
    })
}

/// Line impedances of the star-triangle core at fixed electrical lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlCore {
    pub z_t: f64,
    pub theta_t: f64,
    pub z_s: f64,
    pub theta_s: f64,
}

/// Solves for `Z_t`, `Z_s` so that the triangle of lines (length `θ_t`) and
/// the star of lines (length `θ_s`) reproduce a three-port with diagonal
/// `j(2B_t + B_s)` and off-diagonal `−jB_t`.
pub fn star_triangle_tl_core(b_t: f64, b_s: f64, theta_t: f64, theta_s: f64) -> Result<TlCore> {
    let (st, ct) = theta_t.sin_cos();
    if st.abs() < 1e-9 {
        return Err(Error::ResonantAngle { theta: theta_t });
    }
    let s2 = (2.0 * theta_s).sin();
    if s2.abs() < 1e-9 {
        return Err(Error::ResonantAngle { theta: theta_s });
    }
    let cot_s = theta_s.cos() / theta_s.sin();
    let star_off = 2.0 / (3.0 * s2);
    // off-diagonal: −B_t = g_t/sinθ_t + g_s·2/(3 sin2θ_s)
    // diagonal:  2B_t + B_s = −2g_t cotθ_t + g_s(2/(3 sin2θ_s) − cotθ_s)
    let m = [[1.0 / st, star_off], [-2.0 * ct / st, star_off - cot_s]];
    let rhs = [-b_t, 2.0 * b_t + b_s];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-12 * (m[0][0].abs() + m[0][1].abs()) * (m[1][0].abs() + m[1][1].abs()) {
        return Err(Error::ResonantAngle { theta: theta_t });
    }
    let g_t = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let g_s = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
    let check = |g: f64| {
        let z = 1.0 / g;
        if g > 0.0 && (REALIZABLE_Z.0..=REALIZABLE_Z.1).contains(&z) {
            Ok(z)
        } else {
            Err(Error::UnrealizableImpedance { z })
        }
    };
    Ok(TlCore {
        z_t: check(g_t)?,
        theta_t,
        z_s: check(g_s)?,
        theta_s,
    })
}

/// Grid search for core line lengths whose impedances lie in the realizable
/// window, preferring impedances close to 50 Ω.
pub fn suggest_core_angles(b_t: f64, b_s: f64) -> Result<TlCore> {
    let steps = 240;
    let mut best: Option<(f64, TlCore)> = None;
    for i in 1..steps {
        let theta_t = 2.0 * PI * i as f64 / steps as f64;
        for j in 1..steps {
            let theta_s = PI * j as f64 / steps as f64;
            if let Ok(core) = star_triangle_tl_core(b_t, b_s, theta_t, theta_s) {
                let score = (core.z_t / 50.0).ln().abs().max((core.z_s / 50.0).ln().abs());
                if best.as_ref().is_none_or(|(s, _)| score < *s) {
                    best = Some((score, core));
                }
            }
        }
    }
    best.map(|(_, c)| c).ok_or(Error::UnrealizableImpedance { z: f64::NAN })
}

/// Three-port admittance of the core lines (triangle + star), for checks.
pub fn tl_core_matrix(core: &TlCore, f: f64, f0: f64) -> Result<CMatrix> {
    let mut nl = Netlist::new(f0, vec![1, 2, 3]);
    push_core(&mut nl, core, [1, 2, 3], 4, f0);
    Ok(nl.evaluate(f)?.into_matrix())
}

fn push_core(nl: &mut Netlist, core: &TlCore, nodes: [usize; 3], centre: usize, f0: f64) {
    let tri = TransmissionLine::lossless(core.z_t, core.theta_t, f0);
    let star = TransmissionLine::lossless(core.z_s, core.theta_s, f0);
    for i in 0..3 {
        nl.line(&tri, nodes[i], nodes[(i + 1) % 3]);
    }
    for &n in &nodes {
        nl.line(&star, n, centre);
    }
}

/// Floating susceptance `b` between two nodes as a pi of three lines.
fn push_floating(nl: &mut Netlist, b: f64, n1: usize, n2: usize, f0: f64) -> Result<()> {
    if b == 0.0 {
        return Ok(());
    }
    let eq = quarter_wave_equivalent(-1.0 / b, f0)?;
    nl.stub(&eq.stub_in, n1);
    nl.line(&eq.series, n1, n2);
    nl.stub(&eq.stub_out, n2);
    Ok(())
}

fn push_grounded(nl: &mut Netlist, b: f64, node: usize, f0: f64) {
    nl.stub(&stub_for_susceptance(b, STUB_IMPEDANCE, f0), node);
}

/// Transmission-line version of the two-stage network: every floating
/// susceptance as a series line with an open stub at each end, every
/// grounded one as an open stub. Exact at `f0` only.
pub fn two_stage_tl_realization(d: &TwoStageDesign) -> Result<Netlist> {
    let f0 = d.f0;
    let mut nl = Netlist::new(f0, (1..=6).collect());
    for i in 0..3 {
        let (ai, pi) = (i + 1, i + 4);
        push_floating(&mut nl, d.b1, ai, (i + 1) % 3 + 1, f0)?;
        push_floating(&mut nl, d.b2, pi, ai, f0)?;
        push_floating(&mut nl, d.b3, pi, (i + 2) % 3 + 1, f0)?;
    }
    for i in 0..3 {
        push_grounded(&mut nl, d.b4, i + 1, f0);
        push_grounded(&mut nl, d.b5, i + 4, f0);
    }
    Ok(nl)
}

/// Transmission-line version of the star-triangle network with the given
/// core. Node 10 is the star centre.
pub fn star_triangle_tl_realization(d: &StarTriangleDesign, core: &TlCore) -> Result<Netlist> {
    let f0 = d.f0;
    let mut nl = Netlist::new(f0, (1..=6).collect());
    let nodes = [core_node(d, 0), core_node(d, 1), core_node(d, 2)];
    push_core(&mut nl, core, nodes, 10, f0);
    for (i, &k) in nodes.iter().enumerate() {
        if let Some(bc) = d.b_c {
            push_floating(&mut nl, bc, i + 1, k, f0)?;
        }
        push_floating(&mut nl, d.b_b, k, i + 4, f0)?;
        push_grounded(&mut nl, d.b_a, i + 4, f0);
    }
    Ok(nl)
}
