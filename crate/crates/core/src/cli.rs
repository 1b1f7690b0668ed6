//! Command-line front end.
//!
//! Primary output (CSV, JSON or SVG) goes to stdout or `--out`. When `--out`
//! is given a `<out>.meta.json` sidecar records the configuration, the tool
//! version, the SHA-256 of any zero table read and a timestamp; the primary
//! file itself never contains run-dependent data.
//!
//! Exit codes: 0 on success, 1 on usage, domain or validation errors, 2 on
//! I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{comparison_table, render_svg, DEFAULT_EPS};
use crate::density::{DensityEstimate, UNIT_CONSTANT_NOTE};
use crate::error::{LabError, Result};
use crate::explicit_formula::{audit_split, residual, split_sums, SplitAudit, SplitSums};
use crate::omega::{minimize_grid, OmegaResult};
use crate::par::Parallelism;
use crate::regions::{RegionFamily, ZeroFreeRegion};
use crate::sieve::{build_tables, build_tables_with, li, log_spaced_checkpoints, Deltas};
use crate::zeros::{
    bundled_table_path, load_zero_set, synthesis_feasible, synthesize_zero_set_with, Zero,
    DEFAULT_SYNTHETIC_TARGET,
};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "pnt-lab",
    version,
    about = "Prime number theorem error-term laboratory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Write primary output here (plus a `.meta.json` sidecar) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Minimize η(t) log x + log t over t.
    Omega {
        /// Region preset, e.g. classical:5.573412, vk:53.989, power:c1,c2,c3.
        #[arg(long)]
        region: String,
        /// A single value or a grid start:stop:count:log|lin.
        #[arg(long)]
        logx: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sieve ψ, θ, π at checkpoints and report Δ₁, Δ₂, Δ₃.
    Sieve {
        #[arg(long)]
        limit: u64,
        /// Comma-separated integers or logspaced:k.
        #[arg(long)]
        checkpoints: String,
        #[arg(long, default_value_t = crate::sieve::DEFAULT_SEGMENT)]
        segment: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Load or synthesize zero sets.
    Zeros {
        #[command(subcommand)]
        action: ZerosCommand,
    },
    /// Compare the truncated explicit formula with sieved ψ(x).
    VerifyExplicitFormula {
        /// Evaluation point; must not be an integer.
        #[arg(long)]
        x: f64,
        /// Ordinate table (defaults to the bundled table).
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// Truncation height(s), comma-separated.
        #[arg(long = "T")]
        t: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate all error bounds in log space over a grid of log x.
    Compare {
        #[arg(long)]
        region: String,
        #[arg(long)]
        density: String,
        #[arg(long = "logx-grid")]
        logx_grid: String,
        #[arg(long, default_value_t = DEFAULT_EPS)]
        eps: f64,
        /// Also write a static SVG plot here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Sieve up to this limit to fill the measured Δ₃ column.
        #[arg(long = "sieve-limit", default_value_t = 10_000_000)]
        sieve_limit: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the s₁/s₂/s₃ split and the s₃ chain audit end to end.
    AuditProof {
        #[arg(long)]
        region: String,
        #[arg(long)]
        density: String,
        #[arg(long)]
        logx: f64,
        /// Zero set file (ordinates or `beta gamma`); synthesized when absent.
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of synthetic zeros to attempt.
        #[arg(long, default_value_t = DEFAULT_SYNTHETIC_TARGET)]
        count: usize,
        /// Insert a zero with β = 1 − η(t₀)/2 at t₀.
        #[arg(long)]
        plant_violator: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ZerosCommand {
    /// Parse a table and print a summary; `--out` re-serializes it.
    Load {
        path: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Synthesize a hypothetical zero set.
    Synth {
        #[arg(long)]
        region: String,
        #[arg(long)]
        density: String,
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SYNTHETIC_TARGET)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `value` or `start:stop:count:log|lin`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || {
        LabError::Usage(format!(
            "bad grid {spec:?}; expected v or start:stop:count:log|lin"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![v.trim().parse().map_err(|_| bad())?]),
        [start, stop, count, scale] => {
            let start: f64 = start.parse().map_err(|_| bad())?;
            let stop: f64 = stop.parse().map_err(|_| bad())?;
            let count: usize = count.parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(bad());
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let at = |k: usize| k as f64 / (count - 1) as f64;
            match *scale {
                "lin" => Ok((0..count).map(|k| start + (stop - start) * at(k)).collect()),
                "log" if start > 0.0 && stop > 0.0 => {
                    let (a, b) = (start.ln(), stop.ln());
                    Ok((0..count)
                        .map(|k| match k {
                            0 => start,
                            k if k + 1 == count => stop,
                            k => (a + (b - a) * at(k)).exp(),
                        })
                        .collect())
                }
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

/// 12 significant digits, shortest form.
fn sig12(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{rounded}")
}

fn region_from(spec: &str) -> Result<ZeroFreeRegion> {
    ZeroFreeRegion::new(spec.parse::<RegionFamily>()?)
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| LabError::io(path, e))?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        }))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a Cli,
    zero_table_sha256: Option<String>,
    bound_constants: &'static str,
    notes: Vec<String>,
    generated_at_unix: u64,
}

struct Emitter<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    zero_table: Option<PathBuf>,
    notes: Vec<String>,
}

impl Emitter<'_> {
    fn emit(&mut self, output: &OutputArgs, body: &str) -> Result<()> {
        let Some(path) = &output.out else {
            return self
                .stdout
                .write_all(body.as_bytes())
                .map_err(|e| LabError::io("<stdout>", e));
        };
        fs::write(path, body).map_err(|e| LabError::io(path, e))?;
        let sidecar = Sidecar {
            tool: "pnt-lab",
            version: env!("CARGO_PKG_VERSION"),
            config: self.cli,
            zero_table_sha256: self.zero_table.as_deref().map(sha256_file).transpose()?,
            bound_constants: UNIT_CONSTANT_NOTE,
            notes: self.notes.clone(),
            generated_at_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        };
        let mut meta = path.as_os_str().to_owned();
        meta.push(".meta.json");
        let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        fs::write(&meta, json + "\n").map_err(|e| LabError::io(PathBuf::from(&meta), e))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn require_format(output: &OutputArgs, allowed: &[OutputFormat]) -> Result<()> {
    if allowed.contains(&output.format) {
        Ok(())
    } else {
        Err(LabError::Usage(format!(
            "format {:?} is not available for this subcommand",
            output.format
        )))
    }
}

pub const OMEGA_HEADER: &str = "log_x,omega,log_t0,cond1,cond2,boundary_flag";
pub const SIEVE_HEADER: &str = "x,pi,theta,psi,li,d1,d2,d3";
pub const EXPLICIT_HEADER: &str = "x,T,truncated_psi,psi_sieve,residual,envelope";
pub const ZEROS_HEADER: &str = "entries,gamma_first,gamma_max,source";

fn omega_csv(results: &[OmegaResult]) -> String {
    let mut out = format!("{OMEGA_HEADER}\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.log_x,
            sig12(r.omega),
            sig12(r.t0_log),
            r.conditions.omega_ge_2loglogx,
            r.conditions.omega_small_vs_logx,
            r.boundary
        );
    }
    out
}

#[derive(Serialize)]
struct SieveRow {
    x: u64,
    pi: u64,
    theta: f64,
    psi: f64,
    li: f64,
    #[serde(flatten)]
    deltas: Deltas,
}

#[derive(Serialize)]
struct AuditReport {
    region: String,
    estimate: String,
    zero_source: String,
    entries: usize,
    split: SplitSums,
    audit: SplitAudit,
    passed: bool,
}

fn audit_csv(r: &AuditReport) -> String {
    let s = &r.split;
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    let mut out = String::from("check,status,log_slack,detail\n");
    let _ = writeln!(
        out,
        "omega,pass,,omega={} T=exp({}) sigma1={} sigma2={}",
        sig12(s.omega),
        sig12(2.0 * s.omega),
        sig12(s.sigma1),
        sig12(s.sigma2)
    );
    let _ = writeln!(
        out,
        "split,info,,s1={:e} s2={:e} s3={:e} counts={}/{}/{}",
        s.s1, s.s2, s.s3, s.counts[0], s.counts[1], s.counts[2]
    );
    let _ = writeln!(
        out,
        "partition,{},,rel_error={:e}",
        verdict(r.audit.partition_ok),
        r.audit.partition_error
    );
    let _ = writeln!(
        out,
        "s1_bound,{},{},s1/(log T)^2={:e}",
        verdict(r.audit.s1_ok),
        r.audit.s1_slack,
        r.audit.s1_over_log_t_sq
    );
    let _ = writeln!(
        out,
        "s2_bound,{},{},",
        verdict(r.audit.s2_ok),
        r.audit.s2_slack
    );
    let _ = writeln!(
        out,
        "s3_termwise,{},{},strip_zeros={}",
        verdict(s.chain.termwise_ok),
        s.chain.termwise_slack,
        s.chain.strip_count
    );
    let _ = writeln!(
        out,
        "s3_aggregate,{},{},",
        verdict(s.chain.aggregate_ok),
        s.chain.aggregate_slack
    );
    for v in &s.chain.violators {
        let _ = writeln!(
            out,
            "violator,fail,{},kind={} beta={} gamma={}",
            -v.excess, v.kind, v.zero.beta, v.zero.gamma
        );
    }
    let _ = writeln!(out, "chain_ok,{},,", verdict(s.chain_ok));
    let _ = writeln!(out, "overall,{},,", verdict(r.passed));
    out
}

/// Runs a parsed command, writing primary output to `stdout` unless `--out`.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let mut em = Emitter {
        cli,
        stdout,
        zero_table: None,
        notes: Vec::new(),
    };
    match &cli.command {
        Command::Omega {
            region,
            logx,
            output,
        } => {
            require_format(output, &[OutputFormat::Csv, OutputFormat::Json])?;
            let region = region_from(region)?;
            let grid = parse_grid(logx)?;
            let results = minimize_grid(&region, &grid, Parallelism::default())
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            let body = match output.format {
                OutputFormat::Json => to_json(&results),
                _ => omega_csv(&results),
            };
            em.emit(output, &body)
        }
        Command::Sieve {
            limit,
            checkpoints,
            segment,
            output,
        } => {
            require_format(output, &[OutputFormat::Csv, OutputFormat::Json])?;
            let cps = match checkpoints.strip_prefix("logspaced:") {
                Some(k) => log_spaced_checkpoints(
                    *limit,
                    k.parse()
                        .map_err(|_| LabError::Usage(format!("bad checkpoint count {k:?}")))?,
                ),
                None => checkpoints
                    .split(',')
                    .map(|c| c.trim().parse::<u64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| LabError::Usage(format!("bad checkpoint list {checkpoints:?}")))?,
            };
            if let Some(bad) = cps.iter().find(|&&c| c < 2) {
                return Err(LabError::domain(format!(
                    "checkpoint {bad} must be at least 2"
                )));
            }
            let tables = build_tables_with(*limit, &cps, *segment, Parallelism::default())?;
            let rows = tables
                .checkpoints()
                .iter()
                .map(|(&x, c)| {
                    Ok(SieveRow {
                        x,
                        pi: c.pi,
                        theta: c.theta,
                        psi: c.psi,
                        li: li(x as f64)?,
                        deltas: crate::sieve::deltas(&tables, x)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let body = match output.format {
                OutputFormat::Json => to_json(&rows),
                _ => {
                    let mut out = format!("{SIEVE_HEADER}\n");
                    for r in &rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{},{}",
                            r.x, r.pi, r.theta, r.psi, r.li, r.deltas.d1, r.deltas.d2, r.deltas.d3
                        );
                    }
                    out
                }
            };
            em.emit(output, &body)
        }
        Command::Zeros { action } => match action {
            ZerosCommand::Load { path, output } => {
                let zs = load_zero_set(path)?;
                em.zero_table = Some(path.clone());
                let body = match output.format {
                    OutputFormat::Svg => return require_format(output, &[]),
                    OutputFormat::Json => to_json(&serde_json::json!({
                        "entries": zs.len(),
                        "gamma_first": zs.entries().first().map(|z| z.gamma),
                        "gamma_max": zs.gamma_max(),
                        "source": zs.source(),
                        "sha256": sha256_file(path)?,
                    })),
                    OutputFormat::Csv if output.out.is_some() => match zs.source() {
                        crate::zeros::ZeroSource::RealTable => zs.to_ordinate_text(),
                        crate::zeros::ZeroSource::Synthetic => zs.to_two_column_text(),
                    },
                    OutputFormat::Csv => format!(
                        "{ZEROS_HEADER}\n{},{},{},{:?}\n",
                        zs.len(),
                        zs.entries()
                            .first()
                            .map_or(String::new(), |z| z.gamma.to_string()),
                        zs.gamma_max(),
                        zs.source()
                    ),
                };
                em.emit(output, &body)
            }
            ZerosCommand::Synth {
                region,
                density,
                t,
                seed,
                count,
                output,
            } => {
                require_format(output, &[OutputFormat::Csv])?;
                let region = region_from(region)?;
                let est: DensityEstimate = density.parse()?;
                if !synthesis_feasible(&region, &est, *t) {
                    eprintln!(
                        "warning: region {region} leaves no room above σ₀ = {} below T = {t}; empty set",
                        est.sigma0
                    );
                    em.notes.push("infeasible: empty synthetic set".to_string());
                }
                let zs = synthesize_zero_set_with(&region, &est, *t, *seed, *count)?;
                em.notes.push(format!("seed={seed}"));
                em.emit(output, &zs.to_two_column_text())
            }
        },
        Command::VerifyExplicitFormula {
            x,
            zeros,
            t,
            output,
        } => {
            require_format(output, &[OutputFormat::Csv, OutputFormat::Json])?;
            let path = zeros.clone().unwrap_or_else(bundled_table_path);
            let zs = load_zero_set(&path)?;
            em.zero_table = Some(path);
            em.notes.push(
                "truncated_psi includes the constant terms -log(2pi) - log(1 - x^-2)/2".to_string(),
            );
            let heights: Vec<f64> = t
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| LabError::Usage(format!("bad --T list {t:?}")))?;
            if !(*x >= 2.0) {
                return Err(LabError::domain(format!("x must be at least 2, got {x}")));
            }
            let n = x.floor() as u64;
            let psi_true = build_tables(n, &[n])?.get(n)?.psi;
            let rows = heights
                .iter()
                .map(|&h| residual(*x, &zs, h, psi_true))
                .collect::<Result<Vec<_>>>()?;
            let body = match output.format {
                OutputFormat::Json => to_json(&rows),
                _ => {
                    let mut out = format!("{EXPLICIT_HEADER}\n");
                    for r in &rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            r.x, r.t, r.truncated_psi, r.psi_true, r.residual, r.envelope
                        );
                    }
                    out
                }
            };
            em.emit(output, &body)
        }
        Command::Compare {
            region,
            density,
            logx_grid,
            eps,
            svg,
            sieve_limit,
            output,
        } => {
            let region = region_from(region)?;
            let est: DensityEstimate = density.parse()?;
            let grid = parse_grid(logx_grid)?;
            let sieve_cps: Vec<u64> = grid
                .iter()
                .map(|lx| lx.exp().floor())
                .filter(|&x| x >= 2.0 && x <= *sieve_limit as f64)
                .map(|x| x as u64)
                .collect();
            let tables = if sieve_cps.is_empty() {
                None
            } else {
                Some(build_tables(*sieve_limit, &sieve_cps)?)
            };
            let table = comparison_table(
                &region,
                &est,
                &grid,
                *eps,
                tables.as_ref(),
                Parallelism::default(),
            )?;
            if let Some(svg_path) = svg {
                fs::write(svg_path, render_svg(&table)).map_err(|e| LabError::io(svg_path, e))?;
            }
            em.notes.push(format!(
                "{UNIT_CONSTANT_NOTE}; delta3_measured is ln(Delta_3)"
            ));
            for c in &table.crossovers {
                em.notes.push(format!(
                    "crossover {} / {} at log_x = {:.9e}",
                    c.first, c.second, c.log_x
                ));
            }
            let body = match output.format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => to_json(&table),
                OutputFormat::Svg => render_svg(&table),
            };
            em.emit(output, &body)
        }
        Command::AuditProof {
            region,
            density,
            logx,
            zeros,
            seed,
            count,
            plant_violator,
            output,
        } => {
            require_format(output, &[OutputFormat::Csv, OutputFormat::Json])?;
            let report = audit_proof(
                &region_from(region)?,
                &density.parse()?,
                *logx,
                zeros.as_deref(),
                *seed,
                *count,
                *plant_violator,
            )?;
            em.zero_table = zeros.clone();
            em.notes.push(format!("seed={seed}"));
            let body = match output.format {
                OutputFormat::Json => to_json(&report),
                _ => audit_csv(&report),
            };
            em.emit(output, &body)
        }
    }
}

fn audit_proof(
    region: &ZeroFreeRegion,
    est: &DensityEstimate,
    log_x: f64,
    zeros: Option<&Path>,
    seed: u64,
    count: usize,
    plant_violator: bool,
) -> Result<AuditReport> {
    let om = crate::omega::minimize_f(region, log_x)?;
    let t = (2.0 * om.omega).exp();
    let (mut zs, source) = match zeros {
        Some(path) => (load_zero_set(path)?, path.display().to_string()),
        None => (
            synthesize_zero_set_with(region, est, t, seed, count)?,
            format!("synthetic(seed={seed}, target={count})"),
        ),
    };
    if plant_violator {
        let beta = 1.0 - region.eta_log(om.t0_log)? / 2.0;
        zs = zs.with_zero(Zero {
            beta,
            gamma: om.t0_log.exp(),
        })?;
    }
    let split = split_sums(log_x, &zs, region, est)?;
    let audit = audit_split(&split, &zs)?;
    let passed = split.chain_ok && audit.s1_ok && audit.s2_ok && audit.partition_ok;
    Ok(AuditReport {
        region: region.to_string(),
        estimate: est.to_string(),
        zero_source: source,
        entries: zs.len(),
        split,
        audit,
        passed,
    })
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(&cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("pnt-lab").chain(args.iter().copied()))
            .map_err(|e| LabError::Usage(e.to_string()))?;
        let mut buf = Vec::new();
        execute(&cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("100").unwrap(), vec![100.0]);
        assert_eq!(parse_grid("1:3:3:lin").unwrap(), vec![1.0, 2.0, 3.0]);
        let g = parse_grid("1e3:1e6:4:log").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!((g[0], g[3]), (1e3, 1e6));
        assert!((g[1] - 1e4).abs() < 1e-8);
        assert!(parse_grid("1:2:0:log").is_err());
        assert!(parse_grid("0:2:3:log").is_err());
        assert!(parse_grid("1:2:3:cubic").is_err());
    }

    #[test]
    fn omega_row() {
        let out = run_capture(&["omega", "--region", "classical:1", "--logx", "100"]).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some(OMEGA_HEADER));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "100");
        assert_eq!(row[1].parse::<f64>().unwrap(), 20.0);
        assert_eq!(row[2].parse::<f64>().unwrap(), 10.0);
        assert_eq!(&row[3..], ["true", "true", "false"]);
    }

    #[test]
    fn sig12_rounds_to_twelve_digits() {
        assert_eq!(sig12(20.000000000000004), "20");
        assert_eq!(sig12(84.71228709914876), "84.7122870991");
    }
}
