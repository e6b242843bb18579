//! `fermatlab` command-line front end.
//!
//! [`run`] parses arguments and returns captured output plus an exit code so
//! the commands can be driven in-process by tests. Exit codes:
//!
//! | code | meaning                                        |
//! |------|------------------------------------------------|
//! | 0    | success                                        |
//! | 1    | usage or domain error                          |
//! | 2    | bit budget exceeded / invalid budget           |
//! | 3    | inconsistency finding (scan vs Pépin, or an identity off its expected value) |

pub mod identities;
pub mod report;
pub mod table;

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fermatlab::primality::{self, SCAN_FLOOR};
use fermatlab::{Budget, Error, OpCounter};
use rayon::prelude::*;

use report::ReportRecord;
use table::opt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fermatlab", version, about = "Probe Fermat-number primality through A_1 = 6, A_(q+1) = A_q^2 - 2")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pépin's test (base 3) on F_n.
    Pepin { n: u32 },
    /// Scan A_q mod F_n for a zero; none in the window certifies F_n composite.
    PaperTest {
        n: u32,
        /// Scan 1 <= q <= 2^n instead of n <= q < 2^n.
        #[arg(long)]
        full_range: bool,
    },
    /// Run Pépin and the scan for each n and compare verdicts.
    CrossCheck {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Worker threads; output order does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the Z[sqrt 2] identities, the interleaving and the gcd property.
    VerifyIdentities {
        #[arg(long)]
        max_n: u32,
    },
    /// Search divisors k * 2^(n+2) + 1 of F_n.
    Factor {
        n: u32,
        #[arg(long, default_value_t = 1000)]
        k_limit: u64,
    },
    /// Squaring counts and wall times, Pépin vs scan.
    Bench {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn fail(code: i32, message: impl AsRef<str>) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", message.as_ref()),
            code,
        }
    }

    fn from_error(err: &Error) -> Self {
        let code = if err.is_budget() { EXIT_BUDGET } else { EXIT_USAGE };
        Outcome::fail(code, err.to_string())
    }
}

pub fn run<I, S>(args: I, budget: Result<Budget, Error>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: rendered,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome {
                    stdout: rendered,
                    stderr: String::new(),
                    code: EXIT_OK,
                }
            };
        }
    };
    let budget = match budget {
        Ok(b) => b,
        Err(e) => return Outcome::from_error(&e),
    };
    match execute(&cli, budget) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::from_error(&e),
    }
}

fn execute(cli: &Cli, budget: Budget) -> Result<Outcome, Error> {
    let format = cli.format;
    match cli.command {
        Command::Pepin { n } => cmd_pepin(n, budget, format),
        Command::PaperTest { n, full_range } => cmd_paper_test(n, full_range, budget, format),
        Command::CrossCheck { from, to, jobs } => cmd_cross_check(from, to, jobs, budget, format),
        Command::VerifyIdentities { max_n } => identities::cmd_verify_identities(max_n, budget, format),
        Command::Factor { n, k_limit } => cmd_factor(n, k_limit, budget, format),
        Command::Bench { from, to } => cmd_bench(from, to, budget, format),
    }
}

fn emit(records: &[ReportRecord], format: Format, table: impl FnOnce(&[ReportRecord]) -> String) -> String {
    match format {
        Format::Table => table(records),
        Format::Json => records.iter().map(|r| report::to_json_line(r) + "\n").collect(),
        Format::Csv => report::to_csv(records),
    }
}

fn ms(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into())
}

pub fn cmd_pepin(n: u32, budget: Budget, format: Format) -> Result<Outcome, Error> {
    if n < 1 {
        return Ok(Outcome::fail(
            EXIT_USAGE,
            "pepin needs n >= 1 (F_0 = 3 is outside Pépin's test)\nusage: fermatlab pepin <N>",
        ));
    }
    let mut counter = OpCounter::new();
    let started = Instant::now();
    let verdict = primality::pepin_test_counted(n, budget, &mut counter)?;
    let mut record = ReportRecord::new("pepin", n).with_pepin(&verdict, counter.squarings());
    record.elapsed_ms = Some(report::round_ms(started.elapsed().as_secs_f64() * 1e3));
    let stdout = emit(&[record], format, |rs| {
        table::render(
            &["n", "bits", "verdict", "squarings", "elapsed_ms"],
            &rs.iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.bits.to_string(),
                        opt(r.verdict_pepin.clone()),
                        opt(r.squarings_pepin),
                        ms(r.elapsed_ms),
                    ]
                })
                .collect::<Vec<_>>(),
        )
    });
    Ok(Outcome {
        stdout,
        ..Default::default()
    })
}

pub fn cmd_paper_test(n: u32, full_range: bool, budget: Budget, format: Format) -> Result<Outcome, Error> {
    if n < SCAN_FLOOR {
        return Ok(Outcome::fail(
            EXIT_USAGE,
            format!(
                "paper-test needs n >= {SCAN_FLOOR}: the divisor criterion does not hold for F_1 = 5 \
                 (neither A_1 = 6 nor A_2 = 34 is a multiple of 5)"
            ),
        ));
    }
    let started = Instant::now();
    let scan = primality::paper_scan(n, full_range, budget)?;
    let mut record = ReportRecord::new("paper-test", n).with_scan(&scan);
    record.elapsed_ms = Some(report::round_ms(started.elapsed().as_secs_f64() * 1e3));
    let mut stderr = String::new();
    for q in &scan.anomalies {
        stderr.push_str(&format!("warning: A_{q} = 0 mod F_{n} below the window start {}\n", scan.window.lo));
    }
    let stdout = emit(&[record], format, |rs| {
        table::render(
            &["n", "bits", "window", "found_q", "verdict", "squarings", "elapsed_ms", "trace_hash"],
            &rs.iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.bits.to_string(),
                        format!("[{}, {})", opt(r.window_lo), opt(r.window_hi)),
                        opt(r.found_q),
                        opt(r.verdict_paper.clone()),
                        opt(r.squarings_scan),
                        ms(r.elapsed_ms),
                        opt(r.trace_hash.clone()),
                    ]
                })
                .collect::<Vec<_>>(),
        )
    });
    Ok(Outcome {
        stdout,
        stderr,
        code: EXIT_OK,
    })
}

fn check_range(command: &str, from: u32, to: u32) -> Option<Outcome> {
    if from < SCAN_FLOOR || from > to {
        return Some(Outcome::fail(
            EXIT_USAGE,
            format!("{command} needs {SCAN_FLOOR} <= --from <= --to (got --from {from} --to {to})"),
        ));
    }
    None
}

fn cross_check_records(command: &str, from: u32, to: u32, jobs: usize, budget: Budget) -> Result<Vec<ReportRecord>, Error> {
    // Fail fast on the widest modulus before spending time on the rest.
    fermatlab::FermatModulus::new(to, budget)?;
    let one = |n: u32| primality::cross_check(n, budget).map(|r| ReportRecord::from_test_report(command, &r));
    if jobs <= 1 {
        return (from..=to).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool");
    pool.install(|| (from..=to).into_par_iter().map(one).collect())
}

fn consistency_rows(rs: &[ReportRecord]) -> Vec<Vec<String>> {
    rs.iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.bits.to_string(),
                opt(r.verdict_pepin.clone()),
                opt(r.verdict_paper.clone()),
                opt(r.found_q),
                opt(r.consistent),
                opt(r.squarings_pepin),
                opt(r.squarings_scan),
                ms(r.elapsed_ms),
            ]
        })
        .collect()
}

pub fn cmd_cross_check(from: u32, to: u32, jobs: usize, budget: Budget, format: Format) -> Result<Outcome, Error> {
    if let Some(fail) = check_range("cross-check", from, to) {
        return Ok(fail);
    }
    if jobs == 0 {
        return Ok(Outcome::fail(EXIT_USAGE, "--jobs must be at least 1"));
    }
    let records = cross_check_records("cross-check", from, to, jobs, budget)?;
    let agreeing = records.iter().filter(|r| r.consistent == Some(true)).count();
    let summary = format!("consistent: {agreeing}/{} (n = {from}..={to})\n", records.len());
    let mut stdout = emit(&records, format, |rs| {
        table::render(
            &["n", "bits", "pepin", "paper", "found_q", "consistent", "sq_pepin", "sq_scan", "elapsed_ms"],
            &consistency_rows(rs),
        )
    });
    let mut stderr = String::new();
    match format {
        Format::Table => stdout.push_str(&summary),
        _ => stderr.push_str(&summary),
    }
    let code = if agreeing == records.len() {
        EXIT_OK
    } else {
        for r in records.iter().filter(|r| r.consistent != Some(true)) {
            stderr.push_str(&format!(
                "INCONSISTENT at n = {}: pepin {} vs scan {}\n",
                r.n,
                opt(r.verdict_pepin.clone()),
                opt(r.verdict_paper.clone())
            ));
        }
        EXIT_INCONSISTENT
    };
    Ok(Outcome { stdout, stderr, code })
}

pub fn cmd_factor(n: u32, k_limit: u64, budget: Budget, format: Format) -> Result<Outcome, Error> {
    if n < SCAN_FLOOR {
        return Ok(Outcome::fail(EXIT_USAGE, format!("factor needs n >= {SCAN_FLOOR}")));
    }
    if k_limit == 0 {
        return Ok(Outcome::fail(EXIT_USAGE, "--k-limit must be at least 1"));
    }
    let started = Instant::now();
    let witness = primality::trial_factor_search(n, k_limit, budget)?;
    let mut record = ReportRecord::new("factor", n).with_factor(witness.as_ref());
    record.elapsed_ms = Some(report::round_ms(started.elapsed().as_secs_f64() * 1e3));
    let stdout = match format {
        Format::Table => match &witness {
            Some(w) => table::render(
                &["n", "k", "factor", "cofactor"],
                &[vec![n.to_string(), w.k.to_string(), w.factor.to_string(), w.cofactor.to_string()]],
            ),
            None => format!("F_{n}: none up to k-limit {k_limit}\n"),
        },
        other => emit(&[record], other, |_| unreachable!()),
    };
    Ok(Outcome {
        stdout,
        ..Default::default()
    })
}

pub fn cmd_bench(from: u32, to: u32, budget: Budget, format: Format) -> Result<Outcome, Error> {
    if let Some(fail) = check_range("bench", from, to) {
        return Ok(fail);
    }
    fermatlab::FermatModulus::new(to, budget)?;
    let reports = (from..=to)
        .map(|n| primality::cross_check(n, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let stdout = match format {
        Format::Table => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let ratio = if r.elapsed_ms_scan > 0.0 {
                        format!("{:.2}", r.elapsed_ms_pepin / r.elapsed_ms_scan)
                    } else {
                        "-".into()
                    };
                    vec![
                        r.n.to_string(),
                        r.bits.to_string(),
                        r.squarings_pepin.to_string(),
                        r.squarings_scan.to_string(),
                        format!("{:.3}", r.elapsed_ms_pepin),
                        format!("{:.3}", r.elapsed_ms_scan),
                        ratio,
                        r.paper.label().to_string(),
                    ]
                })
                .collect();
            table::render(
                &["n", "bits", "sq_pepin", "sq_scan", "pepin_ms", "scan_ms", "pepin/scan", "paper"],
                &rows,
            )
        }
        other => {
            let records: Vec<ReportRecord> = reports.iter().map(|r| ReportRecord::from_test_report("bench", r)).collect();
            emit(&records, other, |_| unreachable!())
        }
    };
    Ok(Outcome {
        stdout,
        ..Default::default()
    })
}
