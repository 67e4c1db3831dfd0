//! Touchstone v1 and CSV files.
//!
//! Z and Y data are stored normalized to the option-line resistance `R`, as
//! version 1 requires. Two-port records use the `11 21 12 22` order; larger
//! networks are written row by row, at most four value pairs per line.
//! Every write goes to a temporary file in the target directory that is then
//! renamed over the destination.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use tempfile::NamedTempFile;

use crate::beamform::GainCurve;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::netcore::{FrequencySweep, MultiportNetwork, Repr};
use crate::tuner::LogRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Ri,
    Ma,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    pub fn scale(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn label(self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }
}

/// Contents of the `#` option line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionLine {
    pub unit: FreqUnit,
    pub repr: Repr,
    pub format: DataFormat,
    pub resistance: f64,
}

impl Default for OptionLine {
    fn default() -> Self {
        Self {
            unit: FreqUnit::GHz,
            repr: Repr::S,
            format: DataFormat::Ma,
            resistance: 50.0,
        }
    }
}

impl OptionLine {
    fn parse(line: &str, lineno: usize) -> Result<Self> {
        let mut opt = OptionLine::default();
        let mut tokens = line.trim_start_matches('#').split_whitespace();
        while let Some(t) = tokens.next() {
            match t.to_ascii_uppercase().as_str() {
                "HZ" => opt.unit = FreqUnit::Hz,
                "KHZ" => opt.unit = FreqUnit::KHz,
                "MHZ" => opt.unit = FreqUnit::MHz,
                "GHZ" => opt.unit = FreqUnit::GHz,
                "S" => opt.repr = Repr::S,
                "Y" => opt.repr = Repr::Y,
                "Z" => opt.repr = Repr::Z,
                "RI" => opt.format = DataFormat::Ri,
                "MA" => opt.format = DataFormat::Ma,
                "DB" => opt.format = DataFormat::Db,
                "R" => {
                    let v = tokens.next().ok_or_else(|| parse_err(lineno, "missing value after R"))?;
                    opt.resistance = parse_num(v, lineno)?;
                    if !(opt.resistance > 0.0) {
                        return Err(parse_err(lineno, format!("reference resistance must be positive, got {v}")));
                    }
                }
                "G" | "H" => return Err(parse_err(lineno, format!("unsupported parameter type {t}"))),
                _ => return Err(parse_err(lineno, format!("unknown option {t:?}"))),
            }
        }
        Ok(opt)
    }

    fn render(&self) -> String {
        let p = match self.repr {
            Repr::S => "S",
            Repr::Y => "Y",
            Repr::Z => "Z",
        };
        let f = match self.format {
            DataFormat::Ri => "RI",
            DataFormat::Ma => "MA",
            DataFormat::Db => "DB",
        };
        format!("# {} {p} {f} R {}", self.unit.label(), fmt_num(self.resistance))
    }
}

/// A parsed Touchstone file: the sweep plus what is needed to write it back.
#[derive(Debug, Clone, PartialEq)]
pub struct Touchstone {
    pub options: OptionLine,
    /// Comment lines without the leading `!`.
    pub comments: Vec<String>,
    pub sweep: FrequencySweep,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num(t: &str, line: usize) -> Result<f64> {
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_err(line, format!("not a number: {t:?}")))
}

/// Port count from an `.sNp` extension.
pub fn ports_from_path(path: &Path) -> Result<usize> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    ext.strip_prefix('s')
        .and_then(|r| r.strip_suffix('p'))
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("cannot infer port count from {}", path.display())))
}

fn pair_to_complex(a: f64, b: f64, format: DataFormat) -> Complex64 {
    match format {
        DataFormat::Ri => Complex64::new(a, b),
        DataFormat::Ma => Complex64::from_polar(a, b.to_radians()),
        DataFormat::Db => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
    }
}

/// Lowest magnitude written in DB format, dB.
const DB_FLOOR: f64 = -400.0;

fn complex_to_pair(z: Complex64, format: DataFormat) -> (f64, f64) {
    match format {
        DataFormat::Ri => (z.re, z.im),
        DataFormat::Ma => (z.norm(), z.arg().to_degrees()),
        DataFormat::Db => {
            let db = if z.norm() > 0.0 { (20.0 * z.norm().log10()).max(DB_FLOOR) } else { DB_FLOOR };
            (db, z.arg() * 180.0 / PI)
        }
    }
}

/// File-order index `(i, j)` of the `k`-th value pair.
fn pair_index(n: usize, k: usize) -> (usize, usize) {
    if n == 2 {
        [(0, 0), (1, 0), (0, 1), (1, 1)][k]
    } else {
        (k / n, k % n)
    }
}

/// Parses Touchstone v1 text for an `n_ports` network.
pub fn parse_touchstone(text: &str, n_ports: usize) -> Result<Touchstone> {
    if n_ports == 0 {
        return Err(Error::InvalidInput("port count must be positive".into()));
    }
    let arity = 1 + 2 * n_ports * n_ports;
    let mut options: Option<OptionLine> = None;
    let mut comments = Vec::new();
    let mut records: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut current: Vec<f64> = Vec::new();
    let mut current_line = 0;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let (data, comment) = match raw.find('!') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if data.trim().is_empty() {
                comments.push(c.to_string());
            }
        }
        let data = data.trim();
        if data.is_empty() {
            continue;
        }
        if data.starts_with('[') {
            return Err(Error::UnsupportedVersion(format!(
                "line {lineno}: keyword {data:?} belongs to Touchstone 2"
            )));
        }
        if data.starts_with('#') {
            // only the first option line counts
            if options.is_none() {
                options = Some(OptionLine::parse(data, lineno)?);
            }
            continue;
        }
        if options.is_none() {
            return Err(parse_err(lineno, "data before the option line"));
        }
        if current.is_empty() {
            current_line = lineno;
        }
        let values = data.split_whitespace().map(|t| parse_num(t, lineno)).collect::<Result<Vec<_>>>()?;
        if n_ports <= 2 && values.len() != arity {
            return Err(Error::Arity(format!(
                "line {lineno}: expected {arity} values for a {n_ports}-port record, found {}",
                values.len()
            )));
        }
        current.extend(values);
        if current.len() > arity {
            return Err(Error::Arity(format!(
                "line {lineno}: record starting on line {current_line} has {} values, expected {arity}",
                current.len()
            )));
        }
        if current.len() == arity {
            records.push((current_line, std::mem::take(&mut current)));
        }
        last_line = lineno;
    }
    if !current.is_empty() {
        return Err(Error::Arity(format!(
            "line {last_line}: record starting on line {current_line} ends after {} of {arity} values",
            current.len()
        )));
    }
    let options = options.ok_or_else(|| parse_err(text.lines().count().max(1), "missing option line"))?;
    if records.is_empty() {
        return Err(parse_err(last_line.max(1), "no data records"));
    }
    let mut points = Vec::with_capacity(records.len());
    let mut prev: Option<f64> = None;
    for (line, rec) in records {
        let freq = rec[0] * options.unit.scale();
        if let Some(p) = prev {
            if !(freq > p) {
                return Err(parse_err(line, format!("frequency {freq} Hz does not increase")));
            }
        }
        prev = Some(freq);
        let mut m = CMatrix::zeros(n_ports, n_ports);
        for k in 0..n_ports * n_ports {
            let (i, j) = pair_index(n_ports, k);
            m[(i, j)] = pair_to_complex(rec[1 + 2 * k], rec[2 + 2 * k], options.format);
        }
        let r = options.resistance;
        let m = match options.repr {
            Repr::S => m,
            Repr::Z => m * Complex64::new(r, 0.0),
            Repr::Y => m / Complex64::new(r, 0.0),
        };
        points.push(MultiportNetwork::new(options.repr, m, freq, r).map_err(|e| parse_err(line, e.to_string()))?);
    }
    Ok(Touchstone {
        options,
        comments,
        sweep: FrequencySweep::new(points)?,
    })
}

pub fn read_touchstone_file(path: &Path) -> Result<Touchstone> {
    let n = ports_from_path(path)?;
    parse_touchstone(&fs::read_to_string(path)?, n)
}

/// Sweep in the file's own representation, frequencies in hertz.
pub fn read_touchstone(path: &Path) -> Result<FrequencySweep> {
    Ok(read_touchstone_file(path)?.sweep)
}

fn fmt_num(v: f64) -> String {
    // 12 significant digits; normalize negative zero for stable output
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

/// Renders Touchstone v1 text. Z and Y sweeps are normalized by their own
/// reference resistance, S sweeps use theirs on the option line.
pub fn render_touchstone(sweep: &FrequencySweep, format: DataFormat, unit: FreqUnit, comments: &[String]) -> String {
    let first = &sweep.points()[0];
    let n = first.n_ports();
    let options = OptionLine {
        unit,
        repr: first.repr(),
        format,
        resistance: first.ref_impedance(),
    };
    let mut out = String::new();
    for c in comments {
        out.push('!');
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&options.render());
    out.push('\n');
    let r = options.resistance;
    for p in sweep.points() {
        let m = match options.repr {
            Repr::S => p.matrix().clone(),
            Repr::Z => p.matrix() / Complex64::new(r, 0.0),
            Repr::Y => p.matrix() * Complex64::new(r, 0.0),
        };
        let pairs: Vec<String> = (0..n * n)
            .map(|k| {
                let (i, j) = pair_index(n, k);
                let (a, b) = complex_to_pair(m[(i, j)], format);
                format!("{} {}", fmt_num(a), fmt_num(b))
            })
            .collect();
        let freq = fmt_num(p.freq() / unit.scale());
        if n <= 2 {
            out.push_str(&format!("{freq} {}\n", pairs.join(" ")));
        } else {
            for (row, chunk) in pairs.chunks(n).enumerate() {
                for (l, line) in chunk.chunks(4).enumerate() {
                    let lead = if row == 0 && l == 0 { freq.clone() } else { " ".repeat(freq.len()) };
                    out.push_str(&format!("{lead} {}\n", line.join(" ")));
                }
            }
        }
    }
    out
}

pub fn write_touchstone(sweep: &FrequencySweep, path: &Path, format: DataFormat) -> Result<()> {
    write_touchstone_with(sweep, path, format, FreqUnit::Hz, &[])
}

pub fn write_touchstone_with(
    sweep: &FrequencySweep,
    path: &Path,
    format: DataFormat,
    unit: FreqUnit,
    comments: &[String],
) -> Result<()> {
    let n = ports_from_path(path)?;
    if n != sweep.n_ports() {
        return Err(Error::InvalidInput(format!(
            "{} expects {n} ports, sweep has {}",
            path.display(),
            sweep.n_ports()
        )));
    }
    write_atomic(path, render_touchstone(sweep, format, unit, comments).as_bytes())
}

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn csv_bytes(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// `freq_hz, s11_db, s11_deg, s12_db, ...` in row-major order. Z and Y
/// sweeps are converted to S at their reference impedance.
pub fn sweep_csv(sweep: &FrequencySweep) -> Result<Vec<u8>> {
    let s = match sweep.repr() {
        Repr::S => sweep.clone(),
        _ => sweep.convert(Repr::S, sweep.points()[0].ref_impedance())?,
    };
    let n = s.n_ports();
    let mut header = vec!["freq_hz".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("s{i}{j}_db"));
            header.push(format!("s{i}{j}_deg"));
        }
    }
    let rows = s.points().iter().map(|p| {
        let mut r = vec![fmt_num(p.freq())];
        for i in 0..n {
            for j in 0..n {
                let (db, deg) = complex_to_pair(p.get(i, j), DataFormat::Db);
                r.push(fmt_num(db));
                r.push(fmt_num(deg));
            }
        }
        r
    });
    csv_bytes(header, rows)
}

pub fn write_sweep_csv(sweep: &FrequencySweep, path: &Path) -> Result<()> {
    write_atomic(path, &sweep_csv(sweep)?)
}

/// `phi0_deg, gain_dbi, re_w1, im_w1, ...`.
pub fn gain_csv(curve: &GainCurve) -> Result<Vec<u8>> {
    let n = curve.samples.first().map_or(0, |s| s.weights.len());
    let mut header = vec!["phi0_deg".to_string(), "gain_dbi".to_string()];
    for k in 1..=n {
        header.push(format!("re_w{k}"));
        header.push(format!("im_w{k}"));
    }
    let rows = curve.samples.iter().map(|s| {
        let mut r = vec![fmt_num(s.phi0.to_degrees()), fmt_num(s.gain_dbi)];
        for w in &s.weights {
            r.push(fmt_num(w.re));
            r.push(fmt_num(w.im));
        }
        r
    });
    csv_bytes(header, rows)
}

pub fn write_gain_csv(curve: &GainCurve, path: &Path) -> Result<()> {
    write_atomic(path, &gain_csv(curve)?)
}

/// `iter, objective_db, evals, score, <param names>`.
pub fn log_csv(log: &[LogRow], param_names: &[&str]) -> Result<Vec<u8>> {
    let mut header: Vec<String> = ["iter", "objective_db", "evals", "score"].iter().map(|s| s.to_string()).collect();
    header.extend(param_names.iter().map(|s| s.to_string()));
    let rows = log.iter().map(|r| {
        let mut row = vec![r.iter.to_string(), fmt_num(r.objective_db), r.evals.to_string(), fmt_num(r.score)];
        row.extend(r.params.iter().map(|&v| fmt_num(v)));
        row
    });
    csv_bytes(header, rows)
}

pub fn write_log_csv(log: &[LogRow], param_names: &[&str], path: &Path) -> Result<()> {
    write_atomic(path, &log_csv(log, param_names)?)
}
