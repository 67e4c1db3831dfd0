//! Derivative-free tuning of transmission-line DMNs: the neutralization-line
//! network (no closed form) and broadband refinement of closed-form
//! realizations.

use std::f64::consts::PI;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dmnsynth::{feed_admittance, REALIZABLE_Z};
use crate::error::{Error, Result};
use crate::netcore::{db20, Band, FrequencySweep, MultiportNetwork, FLOOR_DB};
use crate::netlist::{Element, Netlist};
use crate::par::{self, Exec};

/// Penalty standing in for a failed evaluation (resonance, singular
/// network) so the simplex sees a wall instead of a NaN.
const WALL: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub band: Band,
    pub target_db: f64,
    pub w_match: f64,
    pub w_couple: f64,
    /// Frequency samples across the band (ignored for a single-point band).
    pub n_samples: usize,
}

impl ObjectiveSpec {
    pub fn new(f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(f_lo > 0.0 && f_lo <= f_hi) {
            return Err(Error::InvalidInput(format!("bad band [{f_lo}, {f_hi}]")));
        }
        Ok(Self {
            band: Band { f_lo, f_hi },
            target_db: -16.0,
            w_match: 1.0,
            w_couple: 1.0,
            n_samples: 9,
        })
    }

    /// Band of relative half-width `frac` around `f0`.
    pub fn around(f0: f64, frac: f64) -> Result<Self> {
        Self::new(f0 * (1.0 - frac), f0 * (1.0 + frac))
    }

    pub fn with_target(mut self, target_db: f64) -> Self {
        self.target_db = target_db;
        self
    }

    pub fn with_samples(mut self, n: usize) -> Self {
        self.n_samples = n.max(2);
        self
    }

    pub fn sample_freqs(&self) -> Vec<f64> {
        let Band { f_lo, f_hi } = self.band;
        if f_hi == f_lo {
            return vec![f_lo];
        }
        let n = self.n_samples.max(2);
        (0..n).map(|k| f_lo + (f_hi - f_lo) * k as f64 / (n - 1) as f64).collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.target_db < 0.0) {
            return Err(Error::InvalidInput(format!("target must be negative, got {}", self.target_db)));
        }
        Ok(())
    }
}

/// Worst matching and worst coupling level of one S matrix, in dB.
pub fn match_and_coupling_db(s: &MultiportNetwork) -> (f64, f64) {
    let n = s.n_ports();
    let (mut m, mut c) = (FLOOR_DB, FLOOR_DB);
    for i in 0..n {
        for j in 0..n {
            let v = db20(s.get(i, j).norm());
            if i == j {
                m = m.max(v);
            } else {
                c = c.max(v);
            }
        }
    }
    (m, c)
}

fn hinge(x: f64) -> f64 {
    x.max(0.0)
}

/// `w_m·max(worst S_ii − target)₊ + w_c·max(worst S_ij − target)₊` over the
/// sweep; zero exactly when the target holds at every sample.
pub fn objective_from_sweep(s: &FrequencySweep, spec: &ObjectiveSpec) -> f64 {
    let (mut m, mut c) = (FLOOR_DB, FLOOR_DB);
    for p in s.points() {
        let (pm, pc) = match_and_coupling_db(p);
        m = m.max(pm);
        c = c.max(pc);
    }
    spec.w_match * hinge(m - spec.target_db) + spec.w_couple * hinge(c - spec.target_db)
}

/// Objective of a DMN netlist (antenna on its first ports) against an
/// antenna sweep; evaluation failures count as `+∞`.
pub fn evaluate_objective(dmn: &Netlist, antenna: &FrequencySweep, spec: &ObjectiveSpec, z0: f64) -> Result<f64> {
    spec.validate()?;
    let loads = antenna_loads(antenna, &spec.sample_freqs())?;
    Ok(match feed_sweep(dmn, &loads, z0) {
        Ok(s) => objective_from_sweep(&s, spec),
        Err(e) => {
            debug!("objective evaluation failed: {e}");
            f64::INFINITY
        }
    })
}

fn antenna_loads(antenna: &FrequencySweep, freqs: &[f64]) -> Result<Vec<MultiportNetwork>> {
    freqs.iter().map(|&f| antenna.interpolate(f)?.to_y()).collect()
}

fn feed_sweep(dmn: &Netlist, loads: &[MultiportNetwork], z0: f64) -> Result<FrequencySweep> {
    let pts = loads
        .iter()
        .map(|ya| feed_admittance(&dmn.evaluate(ya.freq())?, ya)?.to_s(z0))
        .collect::<Result<Vec<_>>>()?;
    FrequencySweep::new(pts)
}

/// Best-so-far record of the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub evals: usize,
    pub objective: f64,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Best point in the unit box.
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub log: Vec<IterRecord>,
}

fn reflect_unit(x: f64) -> f64 {
    let mut y = x;
    // fold into [0, 2) then mirror
    y = y.rem_euclid(2.0);
    if y > 1.0 {
        2.0 - y
    } else {
        y
    }
}

struct Counter<'a, F: Fn(&[f64]) -> f64> {
    f: &'a F,
    evals: usize,
    budget: usize,
    best_x: Vec<f64>,
    best: f64,
    log: Vec<IterRecord>,
    iter: usize,
}

impl<F: Fn(&[f64]) -> f64> Counter<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        if self.evals >= self.budget {
            return WALL;
        }
        self.evals += 1;
        let v = (self.f)(x);
        let v = if v.is_finite() { v } else { WALL };
        if v < self.best {
            self.best = v;
            self.best_x = x.to_vec();
        }
        v
    }

    fn record(&mut self) {
        self.iter += 1;
        self.log.push(IterRecord {
            iter: self.iter,
            evals: self.evals,
            objective: self.best,
            params: self.best_x.clone(),
        });
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.budget || self.best <= 0.0
    }
}

/// One bounded Nelder–Mead run in the unit box with adaptive coefficients;
/// points leaving the box are mirrored back.
fn nelder_mead<F: Fn(&[f64]) -> f64>(ctr: &mut Counter<'_, F>, x0: &[f64], step: f64, cap: usize) {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);
    let stop_at = (ctr.evals + cap).min(ctr.budget);
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] = if v[i] + step <= 1.0 { v[i] + step } else { v[i] - step };
        simplex.push(v);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|x| ctr.eval(x)).collect();
    let clip = |v: Vec<f64>| v.into_iter().map(reflect_unit).collect::<Vec<f64>>();
    while ctr.evals < stop_at && !ctr.exhausted() {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fv = order.iter().map(|&i| fv[i]).collect();
        ctr.record();
        let diam = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .fold(0.0f64, f64::max);
        if diam < 1e-10 || (fv[n] - fv[0]).abs() < 1e-14 * (1.0 + fv[0].abs()) && diam < 1e-6 {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / nf)
            .collect();
        let along = |t: f64| clip((0..n).map(|k| centroid[k] + t * (simplex[n][k] - centroid[k])).collect());
        let xr = along(-alpha);
        let fr = ctr.eval(&xr);
        if fr < fv[0] {
            let xe = along(-alpha * gamma);
            let fe = ctr.eval(&xe);
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            let (xc, fc) = if fr < fv[n] {
                let x = along(-alpha * rho);
                let f = ctr.eval(&x);
                (x, f)
            } else {
                let x = along(rho);
                let f = ctr.eval(&x);
                (x, f)
            };
            if fc < fv[n].min(fr) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for i in 1..=n {
                    simplex[i] = (0..n).map(|k| simplex[0][k] + sigma * (simplex[i][k] - simplex[0][k])).collect();
                    fv[i] = ctr.eval(&simplex[i]);
                }
            }
        }
    }
}

/// Budget split of [`minimize_unit_box`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Share of the budget spent on uniform sampling.
    pub sample_fraction: f64,
    /// Evaluation cap of one simplex run, per dimension.
    pub run_cap_per_dim: usize,
    /// Initial simplex edge in the unit box.
    pub step: f64,
    /// Edges of the restarts made at each run's optimum.
    pub restart_steps: Vec<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            sample_fraction: 0.1,
            run_cap_per_dim: 60,
            step: 0.15,
            restart_steps: vec![0.05, 0.01],
        }
    }
}

/// Restarted bounded Nelder–Mead over the unit box `[0, 1]^dim`.
///
/// Part of the budget goes to seeded uniform sampling (evaluated in
/// parallel); simplex runs then start alternately from the best samples and
/// from fresh random points, each followed by restarts at its optimum,
/// until the budget is spent or the objective reaches zero. `start`, when
/// given, is evaluated first and seeds the first run instead.
pub fn minimize_unit_box<F>(f: F, dim: usize, budget: usize, seed: u64, start: Option<&[f64]>) -> OptResult
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    minimize_unit_box_with(f, dim, budget, seed, start, &SearchConfig::default())
}

pub fn minimize_unit_box_with<F>(
    f: F,
    dim: usize,
    budget: usize,
    seed: u64,
    start: Option<&[f64]>,
    config: &SearchConfig,
) -> OptResult
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let mut ctr = Counter {
        f: &f,
        evals: 0,
        budget,
        best_x: start.map(|s| s.to_vec()).unwrap_or_else(|| vec![0.5; dim]),
        best: f64::INFINITY,
        log: Vec::new(),
        iter: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(s) = start {
        ctr.eval(s);
        ctr.record();
        starts.push(s.to_vec());
    }
    let n_random = if start.is_some() {
        0
    } else {
        ((budget as f64 * config.sample_fraction) as usize).min(budget.saturating_sub(ctr.evals))
    };
    if n_random > 0 {
        let pts: Vec<Vec<f64>> = (0..n_random).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect();
        let vals = par::map(Exec::auto(), &pts, |x| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                WALL
            }
        });
        ctr.evals += n_random;
        let mut idx: Vec<usize> = (0..n_random).collect();
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        if vals[idx[0]] < ctr.best {
            ctr.best = vals[idx[0]];
            ctr.best_x = pts[idx[0]].clone();
        }
        ctr.record();
        starts.extend(idx.into_iter().map(|i| pts[i].clone()));
    }
    let run_cap = (config.run_cap_per_dim * dim).max(2 * dim + 2);
    let mut k = 0;
    while !ctr.exhausted() {
        // alternate between the best samples and fresh points for diversity
        let fresh: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
        let x0 = match starts.get(k / 2) {
            Some(x) if k % 2 == 0 => x.clone(),
            _ => fresh,
        };
        k += 1;
        nelder_mead(&mut ctr, &x0, config.step, run_cap);
        let mut local = ctr.best_x.clone();
        // restart on the incumbent with a fresh, smaller simplex
        for &s in &config.restart_steps {
            if ctr.exhausted() {
                break;
            }
            nelder_mead(&mut ctr, &local, s, run_cap / 2);
            local = ctr.best_x.clone();
        }
        debug!("simplex run {k}: best {:.6} after {} evals", ctr.best, ctr.evals);
    }
    OptResult {
        x: ctr.best_x,
        value: ctr.best,
        evals: ctr.evals,
        log: ctr.log,
    }
}

/// Characteristic impedance and electrical length at `f0` of one line role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParams {
    pub z: f64,
    pub theta: f64,
}

/// Ring DMN of neutralization lines: per element a line from the antenna
/// port to a junction node and a line from the junction to the source port;
/// one decoupling line between neighbouring junctions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralizationDesign {
    pub n_elements: usize,
    pub f0: f64,
    pub tl_ant: LineParams,
    pub tl_dec: LineParams,
    pub tl_port: LineParams,
}

pub const THETA_BOUNDS: (f64, f64) = (0.05 * 2.0 * PI, 0.75 * 2.0 * PI);

impl NeutralizationDesign {
    /// Netlist with antenna ports `1..=N`, source ports `N+1..=2N` and
    /// junction nodes `2N+1..=3N`.
    pub fn to_netlist(&self) -> Netlist {
        let n = self.n_elements;
        let mut nl = Netlist::new(self.f0, (1..=2 * n).collect());
        let line = |p: LineParams, a, b| Element::Line { z_c: p.z, theta: p.theta, a, b };
        for i in 0..n {
            let junction = 2 * n + 1 + i;
            nl.push(line(self.tl_ant, i + 1, junction));
            nl.push(line(self.tl_port, junction, n + 1 + i));
            nl.push(line(self.tl_dec, junction, 2 * n + 1 + (i + 1) % n));
        }
        nl
    }

    fn from_unit(n_elements: usize, f0: f64, x: &[f64]) -> Self {
        let (zl, zh) = (REALIZABLE_Z.0.ln(), REALIZABLE_Z.1.ln());
        let z = |u: f64| (zl + (zh - zl) * u).exp();
        let t = |u: f64| THETA_BOUNDS.0 + (THETA_BOUNDS.1 - THETA_BOUNDS.0) * u;
        Self {
            n_elements,
            f0,
            tl_ant: LineParams { z: z(x[0]), theta: t(x[1]) },
            tl_dec: LineParams { z: z(x[2]), theta: t(x[3]) },
            tl_port: LineParams { z: z(x[4]), theta: t(x[5]) },
        }
    }
}

#[derive(Debug, Clone)]
pub struct NeutralizationResult {
    pub design: NeutralizationDesign,
    /// Objective at the requested target.
    pub objective: f64,
    /// Worst `|S_ij|` over the band samples, dB.
    pub worst_db: f64,
    pub met_target: bool,
    pub evals: usize,
    pub log: Vec<LogRow>,
}

/// One optimizer iteration in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub iter: usize,
    pub evals: usize,
    /// Objective of the best-so-far design at the requested target, dB.
    pub objective_db: f64,
    /// Search score of the best-so-far design; non-increasing.
    pub score: f64,
    /// `z_ant, theta_ant, z_dec, theta_dec, z_port, theta_port`.
    pub params: Vec<f64>,
}

impl NeutralizationDesign {
    pub fn params(&self) -> [f64; 6] {
        [
            self.tl_ant.z,
            self.tl_ant.theta,
            self.tl_dec.z,
            self.tl_dec.theta,
            self.tl_port.z,
            self.tl_port.theta,
        ]
    }
}

/// The search ends once every sample is this far below the target, which
/// leaves room for the level between samples.
pub const STOP_MARGIN_DB: f64 = 0.5;

/// Searches line impedances and lengths of a neutralization-line DMN for
/// the antenna sweep (`n_elements` ports). Reproducible for a fixed seed.
pub fn optimize_neutralization(
    n_elements: usize,
    f0: f64,
    antenna: &FrequencySweep,
    spec: &ObjectiveSpec,
    z0: f64,
    seed: u64,
    budget: usize,
) -> Result<NeutralizationResult> {
    optimize_neutralization_with(n_elements, f0, antenna, spec, z0, seed, budget, &SearchConfig::default())
}

#[allow(clippy::too_many_arguments)]
pub fn optimize_neutralization_with(
    n_elements: usize,
    f0: f64,
    antenna: &FrequencySweep,
    spec: &ObjectiveSpec,
    z0: f64,
    seed: u64,
    budget: usize,
    config: &SearchConfig,
) -> Result<NeutralizationResult> {
    spec.validate()?;
    if n_elements < 3 {
        return Err(Error::InvalidInput("neutralization ring needs at least three elements".into()));
    }
    if antenna.n_ports() != n_elements {
        return Err(Error::InvalidInput(format!(
            "antenna sweep has {} ports, expected {n_elements}",
            antenna.n_ports()
        )));
    }
    if budget < 1000 {
        return Err(Error::InvalidInput(format!("budget must be at least 1000, got {budget}")));
    }
    let loads = antenna_loads(antenna, &spec.sample_freqs())?;
    let stop = spec.clone().with_target(spec.target_db - STOP_MARGIN_DB);
    let score = |x: &[f64]| {
        let nl = NeutralizationDesign::from_unit(n_elements, f0, x).to_netlist();
        match feed_sweep(&nl, &loads, z0) {
            // zero ends the search
            Ok(s) if objective_from_sweep(&s, &stop) == 0.0 => 0.0,
            Ok(s) => peak_power_sum(&s, spec).max(f64::MIN_POSITIVE),
            Err(_) => WALL,
        }
    };
    let res = minimize_unit_box_with(score, 6, budget, seed, None, config);
    let design = NeutralizationDesign::from_unit(n_elements, f0, &res.x);
    let s = feed_sweep(&design.to_netlist(), &loads, z0)?;
    let worst_db = worst_db(&s);
    let objective = objective_from_sweep(&s, spec);
    info!("neutralization N={n_elements}: worst {worst_db:.2} dB after {} evaluations", res.evals);
    let mut log = Vec::with_capacity(res.log.len());
    let mut cached: Option<(Vec<f64>, f64)> = None;
    for r in res.log {
        let obj = match &cached {
            Some((x, v)) if *x == r.params => *v,
            _ => {
                let d = NeutralizationDesign::from_unit(n_elements, f0, &r.params);
                let v = feed_sweep(&d.to_netlist(), &loads, z0).map_or(f64::INFINITY, |s| objective_from_sweep(&s, spec));
                cached = Some((r.params.clone(), v));
                v
            }
        };
        log.push(LogRow {
            iter: r.iter,
            evals: r.evals,
            objective_db: obj,
            score: r.objective,
            params: NeutralizationDesign::from_unit(n_elements, f0, &r.params).params().to_vec(),
        });
    }
    Ok(NeutralizationResult {
        design,
        objective,
        worst_db,
        met_target: objective == 0.0,
        evals: res.evals,
        log,
    })
}

fn worst_db(s: &FrequencySweep) -> f64 {
    s.points()
        .iter()
        .map(|p| {
            let (m, c) = match_and_coupling_db(p);
            m.max(c)
        })
        .fold(FLOOR_DB, f64::max)
}

/// Search surrogate of the neutralization optimizer: the weighted peak
/// `|S_ij|²` of each sample, summed over samples. Smooth away from ties and
/// informative far from the target, where the dB hinge is flat in the
/// other entries.
fn peak_power_sum(s: &FrequencySweep, spec: &ObjectiveSpec) -> f64 {
    s.points()
        .iter()
        .map(|p| {
            let n = p.n_ports();
            let mut peak = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    let w = if i == j { spec.w_match } else { spec.w_couple };
                    peak = peak.max(w * p.get(i, j).norm_sqr());
                }
            }
            peak
        })
        .sum()
}

/// Hinge terms summed over frequency samples rather than maximized.
fn sample_hinge_sum(s: &FrequencySweep, spec: &ObjectiveSpec) -> f64 {
    s.points()
        .iter()
        .map(|p| {
            let (m, c) = match_and_coupling_db(p);
            spec.w_match * hinge(m - spec.target_db) + spec.w_couple * hinge(c - spec.target_db)
        })
        .sum()
}

#[derive(Debug, Clone)]
pub struct TuneResult {
    pub netlist: Netlist,
    pub objective_before: f64,
    pub objective_after: f64,
    /// True when no search was run (zero budget or start already optimal).
    pub unchanged: bool,
    pub evals: usize,
}

/// Relative range of the broadband search around the starting values.
pub const TUNE_RANGE: f64 = 0.2;

/// Refines every line impedance and length of `start` within ±20 % to
/// improve the objective over the band. The element list and connectivity
/// are kept. The search is constrained so that, on the sample grid, the
/// starting below-target band can only grow.
pub fn broadband_tune(
    start: &Netlist,
    antenna: &FrequencySweep,
    spec: &ObjectiveSpec,
    z0: f64,
    seed: u64,
    budget: usize,
) -> Result<TuneResult> {
    spec.validate()?;
    let freqs = spec.sample_freqs();
    let loads = antenna_loads(antenna, &freqs)?;
    let s0 = feed_sweep(start, &loads, z0)?;
    let before = objective_from_sweep(&s0, spec);
    let unchanged = |evals| TuneResult {
        netlist: start.clone(),
        objective_before: before,
        objective_after: before,
        unchanged: true,
        evals,
    };
    if budget == 0 || before == 0.0 {
        return Ok(unchanged(0));
    }
    let levels0: Vec<f64> = s0
        .points()
        .iter()
        .map(|p| {
            let (m, c) = match_and_coupling_db(p);
            m.max(c)
        })
        .collect();
    // Ceilings that keep the starting band: points at a band edge (on either
    // side of the crossing) may not rise, so the interpolated crossing can
    // only move outward; interior points only have to stay below target.
    let inside: Vec<bool> = levels0.iter().map(|&l| l < spec.target_db).collect();
    let last = freqs.len() - 1;
    let ceilings: Vec<(usize, f64)> = (0..freqs.len())
        .filter_map(|k| {
            let left = k > 0 && inside[k - 1] != inside[k];
            let right = k < last && inside[k + 1] != inside[k];
            if left || right {
                Some((k, levels0[k]))
            } else if inside[k] {
                Some((k, spec.target_db - 1e-9))
            } else {
                None
            }
        })
        .collect();

    let segs: Vec<usize> = (0..start.elements.len()).filter(|&i| start.elements[i].is_line_segment()).collect();
    let apply = |x: &[f64]| {
        let mut nl = start.clone();
        for (k, &i) in segs.iter().enumerate() {
            let sz = 1.0 + TUNE_RANGE * (2.0 * x[2 * k] - 1.0);
            let st = 1.0 + TUNE_RANGE * (2.0 * x[2 * k + 1] - 1.0);
            match &mut nl.elements[i] {
                Element::Line { z_c, theta, .. } | Element::Stub { z_c, theta, .. } => {
                    *z_c *= sz;
                    *theta *= st;
                }
                Element::Lumped { .. } => {}
            }
        }
        nl
    };
    let score = |x: &[f64]| {
        let nl = apply(x);
        let s = match feed_sweep(&nl, &loads, z0) {
            Ok(s) => s,
            Err(_) => return WALL,
        };
        let mut v = objective_from_sweep(&s, spec) + sample_hinge_sum(&s, spec) / freqs.len() as f64;
        for &(k, ceiling) in &ceilings {
            let (m, c) = match_and_coupling_db(&s.points()[k]);
            v += 1e3 * hinge(m.max(c) - ceiling);
        }
        v
    };
    let x0 = vec![0.5; 2 * segs.len()];
    let start_score = score(&x0);
    let res = minimize_unit_box(score, x0.len(), budget, seed, Some(&x0));
    if !(res.value < start_score) {
        return Ok(unchanged(res.evals));
    }
    let tuned = apply(&res.x);
    let after = objective_from_sweep(&feed_sweep(&tuned, &loads, z0)?, spec);
    if after > before {
        return Ok(unchanged(res.evals));
    }
    Ok(TuneResult {
        netlist: tuned,
        objective_before: before,
        objective_after: after,
        unchanged: false,
        evals: res.evals,
    })
}
