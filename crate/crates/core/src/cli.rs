//! Command-line front end.
//!
//! Exit codes: `0` when every certificate passes, `1` when a certificate
//! fails, `2` on invalid input. Reports go to stdout, diagnostics to stderr.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::{
    build_bessel, build_riesz, build_sampling, exhaust_general, ConstructionReport, ExhaustMode, SamplingSet, SetKind,
    CSV_COLUMNS, CSV_COMMENT,
};
use crate::selection::rit_constant;
use crate::spectrum::{quantize_inner, quantize_outer, GridSpectrum, Spectrum};
use crate::verify::{densities, duality_check, montecarlo_timedomain, riesz_bounds, sampling_bounds};
use crate::{Density, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "pwsample", version, about = "Construct and certify periodic sampling, Bessel and Riesz sets")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a sampling, Bessel or Riesz set for a spectrum.
    Construct(ConstructArgs),
    /// Recompute the bounds of a given residue set.
    Verify(VerifyArgs),
    /// Compare the sampling bound with the Riesz bound of the complement.
    Duality(DualityArgs),
    /// Run one construction per grid order on the inner quantization.
    Exhaust(ExhaustArgs),
    /// Bound-versus-density table over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sampling,
    Bessel,
    Riesz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Spectrum descriptor: a JSON file path or inline JSON.
    #[arg(long)]
    pub spectrum: String,
    /// Grid order used to quantize an interval spectrum (outer cover for
    /// sampling and Bessel sets, inner cells for Riesz sets).
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[arg(long, value_enum, default_value = "sampling")]
    pub mode: Mode,
    #[arg(long)]
    pub d: Option<f64>,
    /// Number of residues for Bessel sets (default n + 1).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Residues `J` of `Λ = J + mℤ`, comma separated.
    #[arg(long)]
    pub residues: String,
    #[arg(long, value_enum, default_value = "sampling")]
    pub mode: Mode,
    /// Also run the time-domain check truncated to this many periods.
    #[arg(long)]
    pub periods: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DualityArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    #[arg(long)]
    pub residues: String,
}

#[derive(Debug, Args)]
pub struct ExhaustArgs {
    #[arg(long)]
    pub spectrum: String,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// Strictly increasing grid orders, e.g. "16,32,64".
    #[arg(long)]
    pub schedule: String,
    /// `sampling` or `bessel`.
    #[arg(long, value_enum, default_value = "sampling")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Grid orders, comma separated.
    #[arg(long, default_value = "64")]
    pub m: String,
    /// Spectrum measures `|S|`, e.g. "1/16,1/8".
    #[arg(long, default_value = "1/16,1/8")]
    pub fractions: String,
    /// Values of `d`, comma separated.
    #[arg(long, default_value = "0.5,1,3")]
    pub d: String,
    /// Random spectra per grid point.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&config, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "pwsample: {e}");
            exit_code(&e)
        }
    }
}

/// `1` for failed certificates, `2` for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CertificateFailed { .. } | Error::NoFeasibleCandidate { .. } => 1,
        _ => 2,
    }
}

/// Runs a parsed command, writing the report to `out`. Returns whether
/// every certificate passed.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    match &config.command {
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Duality(a) => duality(a, out),
        Command::Exhaust(a) => exhaust(a, out),
        Command::Sweep(a) => sweep(a, out),
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("output: {e}"))
}

fn load_spectrum(arg: &str) -> Result<Spectrum> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    Spectrum::from_json(&text)
}

fn grid_for(args: &SpectrumArgs, mode: Mode) -> Result<GridSpectrum> {
    match load_spectrum(&args.spectrum)? {
        Spectrum::Grid(g) => {
            if let Some(m) = args.m.filter(|&m| m != g.m()) {
                return Err(Error::PeriodMismatch { spectrum: g.m(), set: m });
            }
            Ok(g)
        }
        Spectrum::Intervals(s) => {
            let m = args.m.ok_or_else(|| Error::InvalidParameter("--m is required for an interval spectrum".into()))?;
            match mode {
                Mode::Riesz => quantize_inner(&s, m),
                _ => quantize_outer(&s, m),
            }
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}"))))
        .collect()
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io)?;
    writeln!(out).map_err(io)
}

fn csv_writer(out: &mut dyn Write, extra: &[&str], tail: &[&str]) -> Result<csv::Writer<Vec<u8>>> {
    writeln!(out, "{CSV_COMMENT}").map_err(io)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = extra.iter().chain(CSV_COLUMNS.iter()).chain(tail).copied().collect();
    w.write_record(&header).map_err(io)?;
    Ok(w)
}

fn finish_csv(out: &mut dyn Write, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(io)?;
    out.write_all(&bytes).map_err(io)
}

fn construct(a: &ConstructArgs, out: &mut dyn Write) -> Result<bool> {
    let g = grid_for(&a.spectrum, a.mode)?;
    let report = match a.mode {
        Mode::Sampling => {
            if a.k.is_some() {
                return Err(Error::InvalidParameter("--k applies to bessel mode only".into()));
            }
            let d = a.d.ok_or_else(|| Error::InvalidParameter("--d is required".into()))?;
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
            }
            build_sampling(&g, d)?
        }
        Mode::Bessel => {
            if a.d.is_some() {
                return Err(Error::InvalidParameter("--d does not apply to bessel mode".into()));
            }
            build_bessel(&g, a.k)?
        }
        Mode::Riesz => {
            if a.k.is_some() {
                return Err(Error::InvalidParameter("--k applies to bessel mode only".into()));
            }
            let d = a.d.ok_or_else(|| Error::InvalidParameter("--d is required".into()))?;
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::InvalidParameter(format!("d = {d} must lie in (0, 1) for riesz mode")));
            }
            build_riesz(&g, d)?
        }
    };
    match a.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv_writer(out, &[], &[])?;
            w.write_record(report.csv_record()).map_err(io)?;
            finish_csv(out, w)?;
        }
    }
    Ok(report.pass)
}

#[derive(Serialize)]
struct VerifyReport {
    spectrum: crate::construct::GridSpectrumRecord,
    set: SamplingSet,
    bounds: crate::verify::BoundReport,
    densities: crate::verify::Densities,
    landau_violation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    montecarlo: Option<crate::verify::MonteCarloReport>,
}

fn residue_set(text: &str, m: usize, kind: SetKind) -> Result<SamplingSet> {
    SamplingSet::new(m, parse_list(text, "residue")?, kind)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let g = grid_for(&a.spectrum, a.mode)?;
    let (set, bounds) = match a.mode {
        Mode::Riesz => {
            let set = residue_set(&a.residues, g.m(), SetKind::Riesz)?;
            let b = riesz_bounds(&g, &set)?;
            (set, b)
        }
        Mode::Sampling | Mode::Bessel => {
            let kind = if a.mode == Mode::Bessel { SetKind::Bessel } else { SetKind::Sampling };
            let set = residue_set(&a.residues, g.m(), kind)?;
            let b = sampling_bounds(&g, &set)?;
            (set, b)
        }
    };
    let landau_violation = match a.mode {
        Mode::Riesz => bounds.density > g.measure(),
        _ => bounds.density < g.measure(),
    };
    let montecarlo = match a.periods {
        Some(k) if a.mode != Mode::Riesz => Some(montecarlo_timedomain(&g, &set, a.seed, k)?),
        Some(_) => return Err(Error::InvalidParameter("--periods applies to sampling sets".into())),
        None => None,
    };
    let pass = montecarlo.as_ref().is_none_or(|r| r.pass);
    let report =
        VerifyReport { spectrum: (&g).into(), densities: densities(&set), set, bounds, landau_violation, montecarlo };
    match a.format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv_writer(out, &[], &["landau_violation"])?;
            let b = &report.bounds;
            w.write_record([
                g.m().to_string(),
                g.n().to_string(),
                report.set.len().to_string(),
                b.density.to_string(),
                b.landau_floor.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                String::new(),
                pass.to_string(),
                landau_violation.to_string(),
            ])
            .map_err(io)?;
            finish_csv(out, w)?;
        }
    }
    Ok(pass)
}

fn duality(a: &DualityArgs, out: &mut dyn Write) -> Result<bool> {
    let g = grid_for(&a.spectrum, Mode::Sampling)?;
    let set = residue_set(&a.residues, g.m(), SetKind::Sampling)?;
    let report = duality_check(&g, &set)?;
    write_json(out, &report)?;
    Ok(report.factor_two_pass && report.exact_identity_pass)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::InvalidParameter("--jobs must be positive".into()));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

fn exhaust(a: &ExhaustArgs, out: &mut dyn Write) -> Result<bool> {
    let s = match load_spectrum(&a.spectrum)? {
        Spectrum::Intervals(s) => s,
        Spectrum::Grid(g) => g.to_intervals(),
    };
    let mode = match a.mode {
        Mode::Sampling => ExhaustMode::Sampling,
        Mode::Bessel => ExhaustMode::Bessel,
        Mode::Riesz => return Err(Error::InvalidParameter("exhaust supports sampling and bessel modes".into())),
    };
    if mode == ExhaustMode::Sampling && !(a.d.is_finite() && a.d > 0.0) {
        return Err(Error::InvalidParameter(format!("d = {} must be positive", a.d)));
    }
    let schedule: Vec<usize> = parse_list(&a.schedule, "grid order")?;
    let stages = pool(a.jobs)?.install(|| exhaust_general(&s, a.d, &schedule, mode))?;
    let pass = stages.iter().all(|st| st.report.pass);
    match a.format {
        Format::Json => write_json(out, &stages)?,
        Format::Csv => {
            let mut w = csv_writer(out, &["stage"], &["measure", "gamma", "gamma_riesz_lower"])?;
            for (i, st) in stages.iter().enumerate() {
                let mut row = vec![i.to_string()];
                row.extend(st.report.csv_record());
                row.push(st.measure.to_string());
                row.push(st.gamma.len().to_string());
                row.push(st.gamma_riesz_lower.map(|x| x.to_string()).unwrap_or_default());
                w.write_record(&row).map_err(io)?;
            }
            finish_csv(out, w)?;
        }
    }
    Ok(pass)
}

/// `(1−√(1−d'))²·(1−|S|)` with `d' = d|S|/(1−|S|)`: the sampling bound
/// obtained from a Riesz set for the complement of density
/// `(1−d')(1−|S|) = 1 − (1+d)|S|`. It scales like `|S|²`. `None` when
/// `d' ≥ 1`.
pub fn complement_route_bound(measure: f64, d: f64) -> Option<f64> {
    if measure >= 1.0 {
        return None;
    }
    let dp = d * measure / (1.0 - measure);
    (dp > 0.0 && dp < 1.0).then(|| rit_constant(dp) * (1.0 - measure))
}

#[derive(Serialize)]
struct SweepRow {
    trial: usize,
    d: f64,
    report: ConstructionReport,
    complement_route_target: Option<f64>,
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<bool> {
    let ms: Vec<usize> = parse_list(&a.m, "grid order")?;
    let fractions: Vec<Density> = parse_list(&a.fractions, "fraction")?;
    let ds: Vec<f64> = parse_list(&a.d, "d")?;
    if ms.is_empty() || fractions.is_empty() || ds.is_empty() || a.trials == 0 {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    if let Some(d) = ds.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    let mut spectra = Vec::new();
    for &m in &ms {
        for f in &fractions {
            let n = (f.to_f64() * m as f64).round() as usize;
            if n == 0 || n > m {
                return Err(Error::InvalidParameter(format!("|S| = {f} gives no cells at m = {m}")));
            }
            spectra.extend((0..a.trials).map(|trial| (m, n, trial)));
        }
    }
    // spectrum `i` is drawn from stream `i`, so every d sees the same one
    let points: Vec<(usize, f64)> = (0..spectra.len()).flat_map(|i| ds.iter().map(move |&d| (i, d))).collect();
    let run_point = |&(i, d): &(usize, f64)| -> Result<SweepRow> {
        let (m, n, trial) = spectra[i];
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        rng.set_stream(i as u64);
        let g = GridSpectrum::new(m, sample(&mut rng, m, n).into_vec())?;
        let report = build_sampling(&g, d)?;
        let complement_route_target = complement_route_bound(g.measure().to_f64(), d);
        Ok(SweepRow { trial, d, report, complement_route_target })
    };
    let rows: Vec<SweepRow> = pool(a.jobs)?.install(|| {
        use rayon::prelude::*;
        points.par_iter().map(run_point).collect::<Result<Vec<_>>>()
    })?;
    let pass = rows.iter().all(|r| r.report.pass);
    match a.format {
        Format::Json => write_json(out, &rows)?,
        Format::Csv => {
            let mut w = csv_writer(out, &["trial", "d"], &["complement_route_target"])?;
            for r in &rows {
                let mut row = vec![r.trial.to_string(), r.d.to_string()];
                row.extend(r.report.csv_record());
                row.push(r.complement_route_target.map(|x| x.to_string()).unwrap_or_default());
                w.write_record(&row).map_err(io)?;
            }
            finish_csv(out, w)?;
        }
    }
    Ok(pass)
}
