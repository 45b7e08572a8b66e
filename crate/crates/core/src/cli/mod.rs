//! Batch front end behind the `wavestab` binary.
//!
//! Every subcommand resolves a [`RunConfig`] (JSON file plus flag
//! overrides), runs the pipeline and writes a deterministic report.
//! Exit codes: 0 pass, 1 verification failure, 2 usage or numerical error.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{Family, RunConfig};
pub use output::{cell, to_json};

use crate::error::{Error, Result};
use crate::indexcount::{find_kstar, IndexReport, KStar};
use crate::operators::assemble_m;
use crate::pipeline::{run_index, run_verify, VerifyReport};
use crate::waves::{stationary_residual, Provenance};

#[derive(Debug, Parser)]
#[command(
    name = "wavestab",
    version,
    about = "Stability spectra and index counts for KdV-type traveling waves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a profile and write it as CSV.
    Wave(CaseArgs),
    /// Full pipeline with the closure identity; writes an index report.
    Index(CaseArgs),
    /// Sweep the family parameter; writes one CSV row per point.
    Scan(ScanArgs),
    /// Locate the sign change of <L^+ 1, 1> along the cn family.
    Kstar(KstarArgs),
    /// Run every countable identity and assumption check.
    Verify(CaseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Wave family.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Elliptic modulus in (0, 1) for dn and cn.
    #[arg(long)]
    pub k: Option<f64>,
    /// Wave speed for the fifth-order family.
    #[arg(long)]
    pub c: Option<f64>,
    /// Grid points, even and at least 16 (default 256).
    #[arg(long)]
    pub n: Option<usize>,
    /// Domain length for the fifth-order family (default 80).
    #[arg(long)]
    pub period: Option<f64>,
    /// Fifth-order coefficients; unset ones keep the sech^4 fixture values.
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long)]
    pub a3: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long)]
    pub b3: Option<f64>,
    /// Classification tolerance, relative to sqrt(radius of D L).
    #[arg(long)]
    pub class_tol: Option<f64>,
    /// Krein-form tolerance.
    #[arg(long)]
    pub krein_tol: Option<f64>,
    /// Zero-cluster radius, relative to sqrt(radius of D L).
    #[arg(long)]
    pub zero_radius: Option<f64>,
    /// Pencil shift; chosen from the spectral gap when absent.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Main output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Spectrum CSV (index only).
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Debug: write dense L and M matrices into this directory.
    #[arg(long, hide = true)]
    pub dump_operators: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// First parameter value.
    #[arg(long)]
    pub from: f64,
    /// Last parameter value.
    #[arg(long)]
    pub to: f64,
    /// Number of parameter points, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct KstarArgs {
    /// Grid points.
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    /// Lower end of the modulus bracket.
    #[arg(long, default_value_t = 0.85)]
    pub lo: f64,
    /// Upper end of the modulus bracket.
    #[arg(long, default_value_t = 0.95)]
    pub hi: f64,
    /// Bracket width at which bisection stops.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl CaseArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(f) = self.family {
            cfg.family = f;
        }
        cfg.k = self.k.or(cfg.k);
        cfg.c = self.c.or(cfg.c);
        cfg.n = self.n.unwrap_or(cfg.n);
        cfg.period = self.period.unwrap_or(cfg.period);
        let co = &mut cfg.coefficients;
        for (slot, flag) in [
            (&mut co.a1, self.a1),
            (&mut co.a2, self.a2),
            (&mut co.a3, self.a3),
            (&mut co.b1, self.b1),
            (&mut co.b2, self.b2),
            (&mut co.b3, self.b3),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        let t = &mut cfg.tolerances;
        t.class_tol = self.class_tol.unwrap_or(t.class_tol);
        t.krein_tol = self.krein_tol.unwrap_or(t.krein_tol);
        t.zero_radius = self.zero_radius.unwrap_or(t.zero_radius);
        cfg.delta = self.delta.or(cfg.delta);
        cfg.output = self.output.clone().or(cfg.output);
        cfg.spectrum = self.spectrum.clone().or(cfg.spectrum);
        cfg.dump_operators = self.dump_operators.clone().or(cfg.dump_operators);
        Ok(cfg)
    }
}

/// Parses `args`, runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    // Reports must not depend on thread scheduling inside faer.
    faer::set_global_parallelism(faer::Par::Seq);
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Wave(a) => cmd_wave(&a.resolve()?),
        Command::Index(a) => cmd_index(&a.resolve()?),
        Command::Verify(a) => cmd_verify(&a.resolve()?),
        Command::Scan(a) => cmd_scan(&a.case.resolve()?, a.from, a.to, a.steps, a.workers),
        Command::Kstar(a) => cmd_kstar(a),
    }
}

pub fn cmd_wave(cfg: &RunConfig) -> Result<i32> {
    let profile = cfg.case()?.build()?;
    let mut out = output::sink(cfg.output.as_deref())?;
    profile.write_csv(&mut out)?;
    out.flush()?;
    let mut summary = format!(
        "c={} period={} residual={:e} sup={}",
        profile.speed,
        profile.grid.period,
        stationary_residual(&profile),
        profile.sup_norm()
    );
    if let Provenance::Newton { iterations, .. } = profile.provenance {
        summary.push_str(&format!(" newton_iterations={iterations}"));
    }
    if cfg.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(0)
}

#[derive(Serialize)]
struct WithConfig<'a, T: Serialize> {
    #[serde(flatten)]
    report: &'a T,
    config: &'a RunConfig,
}

pub fn cmd_index(cfg: &RunConfig) -> Result<i32> {
    let (analysis, report) = run_index(&cfg.case()?, &cfg.tolerances)?;
    if let Some(path) = &cfg.spectrum {
        let mut out = output::sink(Some(path))?;
        analysis.classification.write_csv(&mut out)?;
        out.flush()?;
    }
    if let Some(dir) = &cfg.dump_operators {
        std::fs::create_dir_all(dir)?;
        analysis
            .l
            .write_csv(std::io::BufWriter::new(std::fs::File::create(
                dir.join("L.csv"),
            )?))?;
        assemble_m(&analysis.l).write_csv(std::io::BufWriter::new(std::fs::File::create(
            dir.join("M.csv"),
        )?))?;
    }
    write_report(cfg, &report)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn write_report<T: Serialize>(cfg: &RunConfig, report: &T) -> Result<()> {
    let mut out = output::sink(cfg.output.as_deref())?;
    out.write_all(
        to_json(&WithConfig {
            report,
            config: cfg,
        })?
        .as_bytes(),
    )?;
    out.flush()?;
    Ok(())
}

/// A verification run, or the numerical error that stopped it.
#[derive(Serialize)]
struct VerifyOutcome {
    pass: bool,
    error: Option<String>,
    report: Option<VerifyReport>,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let case = cfg.case()?;
    let outcome = match run_verify(&case, &cfg.tolerances, cfg.delta) {
        Ok(r) => VerifyOutcome {
            pass: r.pass,
            error: None,
            report: Some(r),
        },
        // Numerical errors still produce a report, then exit 2.
        Err(e) if !e.is_usage() => VerifyOutcome {
            pass: false,
            error: Some(e.to_string()),
            report: None,
        },
        Err(e) => return Err(e),
    };
    write_report(cfg, &outcome)?;
    Ok(match (&outcome.error, outcome.pass) {
        (Some(_), _) => 2,
        (None, true) => 0,
        (None, false) => 1,
    })
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub parameter: f64,
    pub report: std::result::Result<ScanValues, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanValues {
    pub n_l: usize,
    pub correction: usize,
    /// `<L^+ 1, 1>` for periodic waves, `<L^+ phi, phi>` for solitary ones.
    pub f: f64,
    pub n_r: usize,
    pub n_c: usize,
    pub n_i_minus: usize,
    pub pass: bool,
}

fn scan_point(cfg: &RunConfig, parameter: f64) -> ScanRow {
    let result =
        run_index(&cfg.case_at(parameter), &cfg.tolerances).map(|(a, r)| scan_values(&a, &r));
    ScanRow {
        parameter,
        report: result.map_err(|e| e.to_string()),
    }
}

fn scan_values(a: &crate::pipeline::Analysis, r: &IndexReport) -> ScanValues {
    let c = &r.classification;
    ScanValues {
        n_l: r.n_l,
        correction: r.n0.or(r.n_d).unwrap_or_default(),
        f: a.n0_form.unwrap_or(a.matrix_d.entries[1][1]),
        n_r: c.n_r,
        n_c: c.n_c,
        n_i_minus: c.n_i_minus,
        pass: r.pass,
    }
}

/// Evenly spaced parameter points, endpoints included.
pub fn scan_points(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(from.is_finite() && to.is_finite()) || from > to || (steps > 1 && from == to)
    {
        return Err(Error::Usage(format!(
            "empty scan range [{from}, {to}] with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    Ok((0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect())
}

/// Runs the sweep on `workers` threads; rows come back in parameter order.
pub fn scan(cfg: &RunConfig, points: &[f64], workers: usize) -> Result<Vec<ScanRow>> {
    let mut probe = cfg.clone();
    match cfg.family {
        Family::Fifth => probe.c = points.first().copied(),
        _ => probe.k = points.first().copied(),
    }
    probe.tolerances.validate()?;
    if probe.n < 16 || !probe.n.is_multiple_of(2) {
        return Err(Error::Usage(format!(
            "grid size must be even and at least 16, got {}",
            probe.n
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("worker pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|&p| scan_point(cfg, p)).collect()))
}

pub fn write_scan_csv<W: Write>(cfg: &RunConfig, rows: &[ScanRow], mut out: W) -> Result<()> {
    let correction = if cfg.family == Family::Fifth {
        "n0"
    } else {
        "n_D"
    };
    writeln!(
        out,
        "parameter,n_L,{correction},F,N_r,N_c,N_i_minus,pass,error"
    )?;
    for row in rows {
        match &row.report {
            Ok(v) => writeln!(
                out,
                "{},{},{},{},{},{},{},{},",
                cell(row.parameter),
                v.n_l,
                v.correction,
                cell(v.f),
                v.n_r,
                v.n_c,
                v.n_i_minus,
                v.pass
            )?,
            Err(e) => writeln!(
                out,
                "{},,,,,,,false,\"{}\"",
                cell(row.parameter),
                e.replace('"', "'")
            )?,
        }
    }
    Ok(())
}

pub fn cmd_scan(cfg: &RunConfig, from: f64, to: f64, steps: usize, workers: usize) -> Result<i32> {
    let points = scan_points(from, to, steps)?;
    let rows = scan(cfg, &points, workers)?;
    let mut out = output::sink(cfg.output.as_deref())?;
    write_scan_csv(cfg, &rows, &mut out)?;
    out.flush()?;
    if rows.iter().any(|r| r.report.is_err()) {
        return Ok(2);
    }
    let all_pass = rows.iter().all(|r| matches!(&r.report, Ok(v) if v.pass));
    Ok(if all_pass { 0 } else { 1 })
}

pub fn cmd_kstar(a: &KstarArgs) -> Result<i32> {
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        result: &'a KStar,
        tol: f64,
    }
    let result = find_kstar(a.n, a.lo, a.hi, a.tol)?;
    let mut out = output::sink(a.output.as_deref())?;
    out.write_all(
        to_json(&Out {
            result: &result,
            tol: a.tol,
        })?
        .as_bytes(),
    )?;
    out.flush()?;
    Ok(0)
}
