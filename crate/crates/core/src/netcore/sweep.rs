use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::par::{self, Exec};

use super::{MultiportNetwork, Repr};

/// Networks sampled at strictly increasing frequencies, all with the same
/// port count and representation.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweep {
    points: Vec<MultiportNetwork>,
}

impl FrequencySweep {
    pub fn new(points: Vec<MultiportNetwork>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptySweep)?;
        let (n, repr) = (first.n_ports(), first.repr());
        for w in points.windows(2) {
            if !(w[1].freq() > w[0].freq()) {
                return Err(Error::InvalidInput(format!(
                    "sweep frequencies must be strictly increasing ({} then {})",
                    w[0].freq(),
                    w[1].freq()
                )));
            }
        }
        if points.iter().any(|p| p.n_ports() != n || p.repr() != repr) {
            return Err(Error::InvalidInput(
                "all sweep points must share port count and representation".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Evaluates `f` at every frequency (in parallel when enabled).
    pub fn evaluate<F>(freqs: &[f64], f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<MultiportNetwork> + Sync + Send,
    {
        Self::new(par::try_map(Exec::auto(), freqs, |&fr| f(fr))?)
    }

    pub fn points(&self) -> &[MultiportNetwork] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_ports(&self) -> usize {
        self.points[0].n_ports()
    }

    pub fn repr(&self) -> Repr {
        self.points[0].repr()
    }

    pub fn freqs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.freq()).collect()
    }

    pub fn convert(&self, target: Repr, z0: f64) -> Result<Self> {
        let pts = par::try_map(Exec::auto(), &self.points, |p| p.convert(target, z0))?;
        Self::new(pts)
    }

    /// Linear interpolation of the matrix entries in the sweep's own
    /// representation. A single-point sweep is treated as frequency
    /// independent.
    pub fn interpolate(&self, freq: f64) -> Result<MultiportNetwork> {
        let pts = &self.points;
        if pts.len() == 1 {
            return Ok(pts[0].clone().with_freq(freq));
        }
        let lo = pts[0].freq();
        let hi = pts[pts.len() - 1].freq();
        let tol = 1e-12 * hi;
        if freq < lo - tol || freq > hi + tol {
            return Err(Error::OutOfRange { freq, lo, hi });
        }
        let k = pts.partition_point(|p| p.freq() < freq);
        if k == 0 {
            return Ok(pts[0].clone().with_freq(freq));
        }
        if k >= pts.len() {
            return Ok(pts[pts.len() - 1].clone().with_freq(freq));
        }
        let (a, b) = (&pts[k - 1], &pts[k]);
        if b.freq() == freq {
            return Ok(b.clone());
        }
        let t = (freq - a.freq()) / (b.freq() - a.freq());
        let m: CMatrix = a.matrix().map(|x| x * (1.0 - t)) + b.matrix().map(|x| x * t);
        MultiportNetwork::new(a.repr(), m, freq, a.ref_impedance())
    }
}

/// Which S-parameter entries a band measurement looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Diagonal entries `S_ii`.
    Matching,
    /// Off-diagonal entries `S_ij`, `i != j`.
    Coupling,
    Both,
}

impl Selection {
    fn includes(self, i: usize, j: usize) -> bool {
        match self {
            Selection::Matching => i == j,
            Selection::Coupling => i != j,
            Selection::Both => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.f_hi - self.f_lo
    }

    pub fn contains(&self, f: f64) -> bool {
        f >= self.f_lo && f <= self.f_hi
    }
}

/// Lowest level reported for an entry, in dB; keeps interpolation finite.
pub(crate) const FLOOR_DB: f64 = -400.0;

pub(crate) fn db20(x: f64) -> f64 {
    if x > 0.0 {
        (20.0 * x.log10()).max(FLOOR_DB)
    } else {
        FLOOR_DB
    }
}

/// Worst selected level `max 20 log10 |S_ij|` of one S matrix, in dB.
pub fn worst_level_db(s: &MultiportNetwork, which: Selection) -> f64 {
    let n = s.n_ports();
    let mut worst = FLOOR_DB;
    for i in 0..n {
        for j in 0..n {
            if which.includes(i, j) {
                worst = worst.max(db20(s.get(i, j).norm()));
            }
        }
    }
    worst
}

/// Maximal frequency intervals where the worst selected `|S_ij|` stays below
/// `threshold_db`. Edges are interpolated linearly in dB against frequency.
pub fn band_below_threshold(
    sweep: &FrequencySweep,
    threshold_db: f64,
    which: Selection,
) -> Result<Vec<Band>> {
    if sweep.is_empty() {
        return Err(Error::EmptySweep);
    }
    if sweep.repr() != Repr::S {
        return Err(Error::WrongRepresentation {
            expected: Repr::S,
            found: sweep.repr(),
        });
    }
    if !(threshold_db < 0.0) {
        return Err(Error::InvalidInput(format!("threshold must be negative, got {threshold_db}")));
    }
    let freqs = sweep.freqs();
    let g: Vec<f64> = sweep
        .points()
        .iter()
        .map(|p| worst_level_db(p, which) - threshold_db)
        .collect();
    let mut bands = Vec::new();
    let mut start: Option<f64> = if g[0] < 0.0 { Some(freqs[0]) } else { None };
    for k in 1..g.len() {
        let (f0, f1) = (freqs[k - 1], freqs[k]);
        let crossing = || f0 + (0.0 - g[k - 1]) / (g[k] - g[k - 1]) * (f1 - f0);
        match (start, g[k] < 0.0) {
            (None, true) => start = Some(crossing()),
            (Some(lo), false) => {
                bands.push(Band { f_lo: lo, f_hi: crossing() });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(lo) = start {
        bands.push(Band {
            f_lo: lo,
            f_hi: freqs[freqs.len() - 1],
        });
    }
    Ok(bands)
}
