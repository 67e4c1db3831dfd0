use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use num_complex::Complex64;

use ucadmn::beamform::{scan_gain_curve, Engine};
use ucadmn::dmnsynth::{
    alpha_beta, feed_port_sweep, star_triangle_tl_realization, suggest_core_angles, synth_star_triangle,
    synth_two_stage, two_stage_tl_realization, Branch, BranchChoice, RootPolicy,
};
use ucadmn::io::{self, DataFormat};
use ucadmn::netcore::{band_below_threshold, FrequencySweep, Repr, Selection};
use ucadmn::netlist::Netlist;
use ucadmn::tuner::{optimize_neutralization, ObjectiveSpec};
use ucadmn::ucamodel::{admittance_of, overlap_matrix, CmsModel, SymmetricArrayModel, UcaGeometry, DEFAULT_QUADRATURE_ORDER};
use ucadmn::Error;

mod complex;

use complex::parse_complex;

#[derive(Parser)]
#[command(name = "ucadmn", version, about = "DMN synthesis and beamforming analysis for compact monopole UCAs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form DMN synthesis for a symmetric three-element array.
    #[command(subcommand)]
    Synth(Synth),
    /// Array impedance model.
    #[command(subcommand)]
    Model(Model),
    /// Feed-port S parameters of a DMN netlist loaded by an antenna file.
    Sweep(SweepArgs),
    /// Best realized gain versus steering azimuth.
    ScanGain(ScanArgs),
    /// Numerical DMN design.
    #[command(subcommand)]
    Optimize(Optimize),
    /// Converts a Touchstone file between S, Z and Y.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct ArrayImpedance {
    /// Input impedance, e.g. 36.54+21.26j.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    zin: Complex64,
    /// Mutual impedance between neighbours.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    zc: Complex64,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    #[arg(long, default_value_t = 3.6e9)]
    f0: f64,
    /// Writes the transmission-line realization as a netlist.
    #[arg(long)]
    emit_netlist: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Synth {
    TwoStage {
        #[command(flatten)]
        array: ArrayImpedance,
        /// Sign branch (b2 sign, root sign); smallest susceptances by default.
        #[arg(long)]
        branch: Option<String>,
    },
    StarTriangle {
        #[command(flatten)]
        array: ArrayImpedance,
        /// `min-bc` or `index=K`.
        #[arg(long, default_value = "min-bc")]
        root_policy: String,
    },
}

#[derive(Subcommand)]
enum Model {
    Uca {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius_wl: f64,
        #[arg(long, default_value_t = 3.6e9)]
        f0: f64,
        /// Writes the Z matrix as Touchstone (`.sNp`).
        #[arg(long)]
        emit_z: Option<PathBuf>,
        /// Sweep start; a single point at f0 when omitted.
        #[arg(long, requires = "to")]
        from: Option<f64>,
        #[arg(long, requires = "from")]
        to: Option<f64>,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    dmn: PathBuf,
    #[arg(long)]
    antenna: PathBuf,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// `.sNp` or `.csv`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    #[arg(long, default_value_t = -16.0, allow_hyphen_values = true)]
    threshold_db: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineKind {
    Ideal,
    Unmatched,
    Network,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum)]
    engine: EngineKind,
    #[arg(long, default_value_t = 70.0)]
    theta_deg: f64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 0.1)]
    radius_wl: f64,
    #[arg(long, default_value_t = 3.6e9)]
    f0: f64,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    #[arg(long, default_value_t = 72)]
    points: usize,
    /// DMN netlist for the network engine; the two-stage design for the
    /// model array when omitted.
    #[arg(long)]
    dmn: Option<PathBuf>,
    /// CSV path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Optimize {
    Neutralization {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius_wl: Option<f64>,
        #[arg(long, default_value_t = 3.6e9)]
        f0: f64,
        /// Relative half-width of the band; 0 for f0 only.
        #[arg(long, default_value_t = 0.01)]
        band: f64,
        #[arg(long, default_value_t = -16.0, allow_hyphen_values = true)]
        target_db: f64,
        #[arg(long, default_value_t = 7)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50.0)]
        z0: f64,
        #[arg(long)]
        emit_netlist: Option<PathBuf>,
        /// Optimization log CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    S,
    Z,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Ri,
    Ma,
    Db,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ri => DataFormat::Ri,
            FormatArg::Ma => DataFormat::Ma,
            FormatArg::Db => DataFormat::Db,
        }
    }
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    to: ReprArg,
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "ri")]
    format: FormatArg,
}

fn stdout_line(s: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}")?;
    Ok(())
}

fn write_netlist(path: &Path, nl: &Netlist) -> anyhow::Result<()> {
    io::write_atomic(path, nl.to_text().as_bytes()).with_context(|| format!("writing {}", path.display()))?;
    info!("netlist with {} segments written to {}", nl.segment_count(), path.display());
    Ok(())
}

fn array_admittance(a: &ArrayImpedance) -> anyhow::Result<(Complex64, Complex64)> {
    let model = SymmetricArrayModel::uniform(3, a.zin, a.zc, a.f0)?;
    Ok(alpha_beta(&admittance_of(&model)?)?)
}

fn synth(cmd: Synth) -> anyhow::Result<()> {
    match cmd {
        Synth::TwoStage { array, branch } => {
            let choice = match branch {
                Some(b) => BranchChoice::Fixed(Branch::parse(&b).with_context(|| format!("bad branch {b:?}"))?),
                None => BranchChoice::MinMaxSusceptance,
            };
            let (alpha, beta) = array_admittance(&array)?;
            let d = synth_two_stage(alpha, beta, array.z0, array.f0, choice)?;
            stdout_line("name,value")?;
            for (k, b) in d.susceptances().iter().enumerate() {
                stdout_line(&format!("b{},{b:.12e}", k + 1))?;
            }
            if let Some(p) = array.emit_netlist {
                write_netlist(&p, &two_stage_tl_realization(&d)?)?;
            }
        }
        Synth::StarTriangle { array, root_policy } => {
            let policy = match root_policy.as_str() {
                "min-bc" => RootPolicy::MinBc,
                s => match s.strip_prefix("index=").and_then(|k| k.parse().ok()) {
                    Some(k) => RootPolicy::Index(k),
                    None => bail!("bad root policy {s:?}; use min-bc or index=K"),
                },
            };
            let d = synth_star_triangle(array.zin, array.zc, array.z0, array.f0, policy)?;
            stdout_line("name,value")?;
            let bc = d.b_c.map_or("direct".to_string(), |b| format!("{b:.12e}"));
            stdout_line(&format!("b_c,{bc}"))?;
            for (name, v) in [("b_t", d.b_t), ("b_s", d.b_s), ("b_b", d.b_b), ("b_a", d.b_a)] {
                stdout_line(&format!("{name},{v:.12e}"))?;
            }
            if let Some(p) = array.emit_netlist {
                let core = suggest_core_angles(d.b_t, d.b_s)?;
                write_netlist(&p, &star_triangle_tl_realization(&d, &core)?)?;
            }
        }
    }
    Ok(())
}

fn linspace(a: f64, b: f64, n: usize) -> anyhow::Result<Vec<f64>> {
    if n < 2 || b.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
        bail!("need at least two points and an increasing range, got {n} over [{a}, {b}]");
    }
    Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
}

fn model(cmd: Model) -> anyhow::Result<()> {
    let Model::Uca { n, radius_wl, f0, emit_z, from, to, points } = cmd;
    let geom = UcaGeometry::new(n, radius_wl)?;
    let cms = CmsModel::new(f0);
    let m = cms.array(&geom, f0)?;
    stdout_line("k,re_z,im_z")?;
    for (k, z) in m.ring().iter().enumerate() {
        stdout_line(&format!("{k},{:.12e},{:.12e}", z.re, z.im))?;
    }
    if let Some(p) = emit_z {
        let freqs = match (from, to) {
            (Some(a), Some(b)) => linspace(a, b, points)?,
            _ => vec![f0],
        };
        io::write_touchstone(&cms.sweep(&geom, &freqs)?, &p, DataFormat::Ri)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&a.dmn).with_context(|| format!("reading {}", a.dmn.display()))?;
    let nl = Netlist::parse(&text)?;
    let antenna = io::read_touchstone(&a.antenna)?;
    if 2 * antenna.n_ports() != nl.ports.len() {
        bail!("netlist has {} ports, antenna file {}", nl.ports.len(), antenna.n_ports());
    }
    let freqs = linspace(a.from, a.to, a.points)?;
    let s = feed_port_sweep(&nl, &antenna, &freqs, a.z0)?;
    match a.out.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => io::write_sweep_csv(&s, &a.out)?,
        _ => io::write_touchstone(&s, &a.out, DataFormat::Db)?,
    }
    stdout_line("f_lo_hz,f_hi_hz")?;
    for b in band_below_threshold(&s, a.threshold_db, Selection::Both)? {
        stdout_line(&format!("{:.12e},{:.12e}", b.f_lo, b.f_hi))?;
    }
    Ok(())
}

fn scan(a: ScanArgs) -> anyhow::Result<()> {
    let geom = UcaGeometry::new(a.n, a.radius_wl)?;
    let overlap = overlap_matrix(&geom, DEFAULT_QUADRATURE_ORDER)?;
    let model = CmsModel::new(a.f0).array(&geom, a.f0)?;
    let dmn = match (a.engine, &a.dmn) {
        (EngineKind::Network, Some(p)) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(Netlist::parse(&text)?.evaluate(a.f0)?)
        }
        (EngineKind::Network, None) => {
            if a.n != 3 {
                bail!("the built-in network engine needs --n 3; pass --dmn for other arrays");
            }
            let (alpha, beta) = alpha_beta(&admittance_of(&model)?)?;
            let d = synth_two_stage(alpha, beta, a.z0, a.f0, BranchChoice::MinMaxSusceptance)?;
            Some(two_stage_tl_realization(&d)?.evaluate(a.f0)?)
        }
        _ => None,
    };
    let engine = match a.engine {
        EngineKind::Ideal => Engine::Ideal,
        EngineKind::Unmatched => Engine::Unmatched { model: &model, z0: a.z0 },
        EngineKind::Network => Engine::Network {
            dmn: dmn.as_ref().expect("built above"),
            model: &model,
            z0: a.z0,
        },
    };
    let curve = scan_gain_curve(engine, &geom, &overlap, a.theta_deg * PI / 180.0, a.points)?;
    info!("gain {:.3} .. {:.3} dBi", curve.min_dbi(), curve.max_dbi());
    if a.out == "-" {
        std::io::stdout().lock().write_all(&io::gain_csv(&curve)?)?;
    } else {
        io::write_gain_csv(&curve, Path::new(&a.out))?;
    }
    Ok(())
}

fn optimize(cmd: Optimize) -> anyhow::Result<()> {
    let Optimize::Neutralization { n, radius_wl, f0, band, target_db, samples, budget, seed, z0, emit_netlist, log } = cmd;
    let r = radius_wl.unwrap_or(if n == 4 { 0.16 } else { 0.1 });
    let geom = UcaGeometry::new(n, r)?;
    let spec = ObjectiveSpec::around(f0, band)?.with_target(target_db).with_samples(samples);
    let antenna = CmsModel::new(f0).sweep(&geom, &spec.sample_freqs())?;
    let res = optimize_neutralization(n, f0, &antenna, &spec, z0, seed, budget)?;
    stdout_line("name,value")?;
    let names = ["z_ant", "theta_ant", "z_dec", "theta_dec", "z_port", "theta_port"];
    for (name, v) in names.iter().zip(res.design.params()) {
        stdout_line(&format!("{name},{v:.12e}"))?;
    }
    stdout_line(&format!("worst_db,{:.6}", res.worst_db))?;
    stdout_line(&format!("evaluations,{}", res.evals))?;
    stdout_line(&format!("met_target,{}", res.met_target))?;
    if let Some(p) = emit_netlist {
        write_netlist(&p, &res.design.to_netlist())?;
    }
    if let Some(p) = log {
        io::write_log_csv(&res.log, &names, &p)?;
    }
    Ok(())
}

fn convert(a: ConvertArgs) -> anyhow::Result<()> {
    let t = io::read_touchstone_file(&a.input)?;
    let target = match a.to {
        ReprArg::S => Repr::S,
        ReprArg::Z => Repr::Z,
        ReprArg::Y => Repr::Y,
    };
    let pts = t
        .sweep
        .points()
        .iter()
        .map(|p| {
            let q = p.convert(target, a.z0)?;
            // Z and Y files are normalized by the requested resistance
            ucadmn::netcore::MultiportNetwork::new(q.repr(), q.into_matrix(), p.freq(), a.z0)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = FrequencySweep::new(pts)?;
    io::write_touchstone_with(&out, &a.out, a.format.into(), t.options.unit, &t.comments)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Command::Synth(s) => synth(s),
        Command::Model(m) => model(m),
        Command::Sweep(a) => sweep(a),
        Command::ScanGain(a) => scan(a),
        Command::Optimize(o) => optimize(o),
        Command::Convert(a) => convert(a),
    }
}

/// 2 for infeasible synthesis, 3 for malformed input files, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(e) if e.is_infeasible() => 2,
        Some(e) if e.is_parse() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
