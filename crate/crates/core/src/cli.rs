//! `mertens-lab` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check reports a violation, 2 on usage,
//! capacity or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::MEM_ENV_VAR;
use crate::conjecture::{scan, Claim, ScanOptions, DEFAULT_SCAN_CEILING};
use crate::identities::{self, asymptotic_ratios, lehman_sweep, run_suite, IdentityReport, SuiteOptions};
use crate::matrices::{determinant_exact, sum_identity_check, DivisibilityMatrix, MatrixKind};
use crate::mertens::{mertens_sieved, MertensQuotientTable};
use crate::numeric::ceil_two_thirds;
use crate::records::{self, FigureOptions, HcnOptions, RecordSeries};
use crate::sieves::{ArithFunction, SieveTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mertens-lab", version, about = "Mertens function evaluation and divisor-sum checks")]
pub struct RunConfig {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    /// Memory ceiling in GB for table builders (overrides MERTENS_LAB_MEM_GB).
    #[arg(long, global = true)]
    pub mem_gb: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump n,mu,phi,lambda,omega,sigma0 for n = 1..=N as CSV.
    Sieve {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate M(x).
    Mertens {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long)]
        json: bool,
        /// Sieve threshold B (default ⌈x^{2/3}⌉).
        #[arg(long)]
        threshold: Option<u64>,
    },
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Scan(Scan),
    /// Build a divisibility matrix and check its determinant or sum identities.
    Redheffer {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        x: u64,
        #[arg(long, value_enum, default_value_t = MatrixArg::Redheffer)]
        matrix: MatrixArg,
        /// Compare det with M(x) (Redheffer), 1 (R′) or Π M(⌊x/i⌋)·w(i) (T, U).
        #[arg(long)]
        check_det: bool,
        /// Check row, column and total sums (T and U only).
        #[arg(long)]
        check_sums: bool,
        /// Emit the matrix to stdout.
        #[arg(long, value_enum)]
        dump: Option<DumpFormat>,
    },
    /// Write fig1.csv … fig10.csv.
    Figures {
        #[arg(long)]
        outdir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        fig1_xmax: u64,
        #[arg(long, default_value_t = 10_000)]
        fig3_xmax: u64,
        #[arg(long, default_value_t = records::DEFAULT_J_LIMIT)]
        j_limit: u64,
        #[arg(long, default_value_t = records::DEFAULT_Q_LIMIT)]
        hcn_limit: u64,
        #[arg(long, default_value_t = records::DEFAULT_Q_LIMIT)]
        q_limit: u64,
    },
    /// Time M(x) at seeded random points, cross-checked against the sieve or a second threshold.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, default_value_t = 1_000_000_000)]
        max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Divisor-sum identity suite for x = 1..=xmax.
    Identities {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        xmax: u64,
        #[arg(long, default_value_t = identities::DEFAULT_EXACT_CAP)]
        exact_cap: u64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2, 3])]
        k: Vec<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also run the asymptotic ratio checks at this x.
        #[arg(long)]
        ratios: Option<u64>,
        /// Also run Σ_i M(⌊x/(in)⌋) = 1 for every n ≤ x ≤ this bound.
        #[arg(long)]
        lehman_xmax: Option<u64>,
    },
    /// log(x!) > Q(x) > ψ(x) and √(log x!) > |M(x)| over a range.
    Conjecture {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write x,log_factorial,q_sum,psi for the scanned range.
        #[arg(long)]
        keep_series: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SCAN_CEILING)]
        ceiling: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Scan {
    /// Records of j(x) = Σ_{d|x} M(x/d)².
    JRecords {
        #[arg(long, default_value_t = records::DEFAULT_J_LIMIT)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Highly composite numbers with M, Q and j at each.
    Hcn {
        #[arg(long)]
        limit: u64,
        /// Enumerate exponent patterns instead of scanning σ₀ directly.
        #[arg(long)]
        generate: bool,
        #[arg(long, default_value_t = records::DEFAULT_Q_LIMIT)]
        q_limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MatrixArg {
    Redheffer,
    RPrime,
    T,
    UPhi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DumpFormat {
    Csv,
}

/// Parses `argv` (including the program name) and runs it; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to(argv, &mut std::io::stdout())
}

/// [`run`] with results written to `out`; diagnostics still go to stderr.
pub fn run_to<I, T>(argv: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(gb) = cfg.mem_gb {
        std::env::set_var(MEM_ENV_VAR, gb.to_string());
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        builder = builder.num_threads(t as usize);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cfg.command, out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn write_out(path: Option<&Path>, text: &str, out: &mut (dyn Write + Send)) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn dispatch(cmd: &Command, out: &mut (dyn Write + Send)) -> anyhow::Result<i32> {
    match cmd {
        Command::Sieve { n, out: path } => {
            let s = SieveTable::build(*n, &[])?;
            let mut csv = String::from("n,mu,phi,lambda,omega,sigma0\n");
            for i in 1..=*n {
                csv.push_str(&format!(
                    "{i},{},{},{},{},{}\n",
                    s.mu(i),
                    s.phi(i),
                    s.liouville(i),
                    s.omega(i),
                    s.sigma0(i)
                ));
            }
            write_out(path.as_deref(), &csv, out)?;
            Ok(EXIT_OK)
        }
        Command::Mertens { x, json, threshold } => {
            let t0 = Instant::now();
            let table = match threshold {
                Some(b) => MertensQuotientTable::with_threshold(*x, *b)?,
                None => MertensQuotientTable::new(*x)?,
            };
            let m = table.at_x();
            let secs = t0.elapsed().as_secs_f64();
            if *json {
                writeln!(out, "{}", serde_json::json!({ "x": x, "M": m, "seconds": secs }))?;
            } else {
                writeln!(out, "M({x}) = {m}")?;
                writeln!(out, "elapsed: {secs:.3} s")?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify(v) => verify(v, out),
        Command::Scan(s) => scan_records(s, out),
        Command::Redheffer { x, matrix, check_det, check_sums, dump } => {
            let kind = match matrix {
                MatrixArg::Redheffer => MatrixKind::Redheffer,
                MatrixArg::RPrime => MatrixKind::RPrime,
                MatrixArg::T => MatrixKind::T,
                MatrixArg::UPhi => MatrixKind::U(ArithFunction::Phi),
            };
            let m = DivisibilityMatrix::build(kind, *x)?;
            let mut pass = true;
            if dump.is_some() {
                write_out(None, &m.to_csv(), out)?;
            }
            if *check_det {
                let det = determinant_exact(&m);
                let table = mertens_sieved(*x)?;
                let mx = table.get(*x);
                let expected = match kind {
                    MatrixKind::Redheffer => BigInt::from(mx),
                    MatrixKind::RPrime => BigInt::one(),
                    MatrixKind::T => (1..=*x).map(|i| BigInt::from(table.get(*x / i))).product(),
                    MatrixKind::U(_) => {
                        let s = SieveTable::build(*x, &[])?;
                        (1..=*x).map(|i| BigInt::from(table.get(*x / i)) * s.phi(i)).product()
                    }
                };
                let expected = expected.to_string();
                let ok = det.to_string() == expected;
                pass &= ok;
                writeln!(out, "det = {det}, M({x}) = {mx}, {}", if ok { "match" } else { "mismatch" })?;
            }
            if *check_sums {
                let r = sum_identity_check(&m)?;
                pass &= r.pass;
                writeln!(out, "{} x={}: lhs = {}, rhs = {}, {}", r.id, r.x, r.lhs, r.rhs, pass_word(r.pass))?;
            }
            Ok(verdict(pass))
        }
        Command::Figures { outdir, fig1_xmax, fig3_xmax, j_limit, hcn_limit, q_limit } => {
            let opts = FigureOptions {
                fig1_xmax: *fig1_xmax,
                fig3_xmax: *fig3_xmax,
                j_limit: *j_limit,
                hcn_limit: *hcn_limit,
                q_limit: *q_limit,
            };
            for p in records::write_figures(outdir, &opts)? {
                writeln!(out, "{}", p.display())?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { seed, points, max } => bench(*seed, *points, *max, out),
    }
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify(v: &Verify, out: &mut (dyn Write + Send)) -> anyhow::Result<i32> {
    match v {
        Verify::Identities { xmax, exact_cap, k, json, ratios, lehman_xmax } => {
            let mut reports: Vec<IdentityReport> =
                run_suite(&SuiteOptions { xmax: *xmax, ks: k.clone(), exact_cap: *exact_cap })?;
            if let Some(lx) = lehman_xmax {
                let failures = lehman_sweep(*lx)?;
                writeln!(out, "LEHMAN_GEN: x ≤ {lx}, {} failures", failures.len())?;
                reports.extend(failures);
            }
            if let Some(rx) = ratios {
                reports.extend(asymptotic_ratios(*rx, k, identities::DEFAULT_RATIO_BAND)?);
            }
            let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                writeln!(out, "FAIL {} x={}: lhs = {}, rhs = {}, margin = {:e}", r.id, r.x, r.lhs, r.rhs, r.margin)?;
            }
            writeln!(out, "identities: {} checked, {} failed", reports.len(), failed.len())?;
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&reports)?;
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(verdict(failed.is_empty()))
        }
        Verify::Conjecture { from, to, report, keep_series, ceiling } => {
            if to < from {
                bail!("--to must be ≥ --from");
            }
            let opts = ScanOptions { ceiling: *ceiling, keep_series: keep_series.is_some(), ..Default::default() };
            let rep = scan(*from, *to, &[Claim::Upper, Claim::Lower, Claim::SqrtBound], &opts)?;
            for v in &rep.out_of_claim {
                writeln!(out, "out-of-claim x={} {:?}: lhs = {}, rhs = {}", v.x, v.side, v.lhs, v.rhs)?;
            }
            for v in &rep.violations {
                writeln!(out, "VIOLATION x={} {:?}: lhs = {}, rhs = {}", v.x, v.side, v.lhs, v.rhs)?;
            }
            writeln!(
                out,
                "conjecture [{from}, {to}]: {} checked, {} violations, {} exact rechecks",
                rep.checked,
                rep.violations.len(),
                rep.exact_rechecks
            )?;
            if let Some(path) = keep_series {
                let rows = rep.series.as_deref().unwrap_or_default();
                let ds = records::Dataset {
                    header: vec!["x", "log_factorial", "q_sum", "psi"],
                    rows: rows
                        .iter()
                        .map(|r| {
                            vec![
                                records::Cell::Int(r.x as i128),
                                records::Cell::Float(r.log_factorial),
                                records::Cell::Int(r.q_sum as i128),
                                records::Cell::Float(r.psi),
                            ]
                        })
                        .collect(),
                };
                ds.write_csv(path)?;
            }
            if let Some(path) = report {
                fs::write(path, serde_json::to_string_pretty(&rep)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(verdict(rep.passed()))
        }
    }
}

fn scan_records(s: &Scan, out: &mut (dyn Write + Send)) -> anyhow::Result<i32> {
    let (series, path): (RecordSeries, &Option<PathBuf>) = match s {
        Scan::JRecords { limit, out } => (records::scan_j_records(*limit)?, out),
        Scan::Hcn { limit, generate, q_limit, out } => {
            (records::scan_hcn(*limit, &HcnOptions { generate: *generate, q_limit: *q_limit })?, out)
        }
    };
    write_out(path.as_deref(), &records::series_to_csv(&series), out)?;
    if path.is_some() {
        writeln!(out, "{} champions up to {}", series.points.len(), series.limit)?;
    }
    Ok(EXIT_OK)
}

fn bench(seed: u64, points: usize, max: u64, out: &mut (dyn Write + Send)) -> anyhow::Result<i32> {
    if max == 0 {
        bail!("--max must be ≥ 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<u64> = (0..points).map(|_| rng.gen_range(1..=max)).collect();
    let sieve_top = xs.iter().copied().filter(|&x| x <= 10_000_000).max();
    let sieved = sieve_top.map(mertens_sieved).transpose()?;
    let mut pass = true;
    for x in xs {
        let t0 = Instant::now();
        let table = MertensQuotientTable::new(x)?;
        let m = table.at_x();
        let secs = t0.elapsed().as_secs_f64();
        let reference = match &sieved {
            Some(s) if x <= s.limit() => s.get(x),
            _ => MertensQuotientTable::with_threshold(x, (ceil_two_thirds(x) / 2).max(1))?.at_x(),
        };
        let ok = reference == m;
        pass &= ok;
        writeln!(out, "x = {x}, M = {m}, {:.3} s, {}", secs, if ok { "agree" } else { "DISAGREE" })?;
    }
    Ok(verdict(pass))
}
