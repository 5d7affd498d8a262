//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mixmaxd_core::levels::{family_for, CandidateFamily, LevelSet, Member};
use mixmaxd_core::search::{construct_scaled, SearchError};
use mixmaxd_core::space::{scale, to_f64, unscale_design};
use mixmaxd_core::{Regime, SearchOptions};

use crate::io::{design_csv, parse_csv, read_space, write_atomic, Certificate, format_sig};
use crate::{golden, report, verify};

/// Stdout writes that tolerate a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! sayln {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mixmaxd", version, about = "Interleaved-lattice maximin distance designs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Auto,
    Exhaustive,
    Qrs,
    Extend,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Auto => Regime::Auto,
            RegimeArg::Exhaustive => Regime::Exhaustive,
            RegimeArg::Qrs => Regime::Qrs,
            RegimeArg::Extend => Regime::Extend,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a design for a space document.
    Construct {
        #[arg(long)]
        space: PathBuf,
        /// Overrides "n" in the document.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        regime: RegimeArg,
        /// Candidate pool size for the qrs and extend regimes.
        #[arg(long)]
        t_pool: Option<usize>,
        #[arg(long, default_value_t = 64)]
        tie_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Re-check a certificate against a design file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        design: PathBuf,
        /// Also run the brute-force oracles.
        #[arg(long)]
        deep: bool,
    },
    /// Print the candidate level sets of one dimension.
    Family {
        #[arg(long)]
        space: PathBuf,
        /// 1-based.
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        s: usize,
    },
    /// Run the reference cases.
    Golden {
        #[arg(long)]
        filter: Option<String>,
    },
}

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            if let Some(SearchError::Infeasible(_)) = e.downcast_ref::<SearchError>() {
                eprintln!("infeasible: {e}");
                return EXIT_INFEASIBLE;
            }
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Construct { space, n, regime, t_pool, tie_cap, out, cert, json } => {
            let named = read_space(&space, n)?;
            let scaled = scale(&named.space);
            let opts = SearchOptions {
                regime: regime.into(),
                pool: t_pool,
                tie_cap,
                ..SearchOptions::default()
            };
            let start = Instant::now();
            let outcome = construct_scaled(&scaled, &opts)?;
            let summary = report::summarize(&outcome, scaled.n(), start.elapsed());
            let design = unscale_design(&outcome.design, &scaled)?;
            let rows: Vec<Vec<f64>> = design.rows().map(<[f64]>::to_vec).collect();
            if let Some(path) = &out {
                write_atomic(path, &design_csv(&named.names, &rows))?;
            }
            if let Some(path) = &cert {
                let c = Certificate::new(outcome.certificate(), outcome.rho, &scaled, &named.names);
                write_atomic(path, &(serde_json::to_string_pretty(&c)? + "\n"))?;
            }
            if json {
                sayln!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                say!("{}", report::human(&summary, &named.names));
            }
            if out.is_none() && !json {
                say!("{}", design_csv(&named.names, &rows));
            }
            Ok(EXIT_OK)
        }
        Command::Verify { cert, design, deep } => {
            let text = fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let c: Certificate = serde_json::from_str(&text).context("malformed certificate")?;
            let text = fs::read_to_string(&design).with_context(|| format!("reading {}", design.display()))?;
            let (names, rows) = parse_csv(&text)?;
            if names.len() != c.p {
                sayln!("design has {} columns, certificate has p = {}", names.len(), c.p);
                return Ok(EXIT_VERIFY);
            }
            let r = verify::verify(&c, &rows, deep)?;
            say!("{}", r.table());
            if r.passed() {
                sayln!("verified");
                Ok(EXIT_OK)
            } else {
                sayln!("verification FAILED");
                Ok(EXIT_VERIFY)
            }
        }
        Command::Family { space, dim, s } => {
            let named = read_space(&space, Some(2))?;
            let scaled = scale(&named.space);
            if dim == 0 || dim > scaled.p() {
                bail!("--dim must be in 1..={}", scaled.p());
            }
            let fam = family_for(scaled.dim(dim - 1), s)?;
            let w = to_f64(&scaled.weights()[dim - 1]);
            sayln!("{} (scaled by weight {}), s = {s}", named.names[dim - 1], format_sig(w));
            let show = |y: &LevelSet| {
                let cells: Vec<String> = y.values().iter().map(|&v| format_sig(v)).collect();
                let dp = y.d_plus().map_or("inf".into(), format_sig);
                sayln!("{{{}}}  d* = {}  d+ = {}", cells.join(", "), format_sig(y.d_star()), dp);
            };
            match &fam {
                CandidateFamily::Discrete(list) => list.iter().for_each(show),
                CandidateFamily::ContinuousEven { width, size } => {
                    let cap = width / (*size as f64 - 1.0);
                    sayln!("one-parameter family, adjacent gap v1 in [0, {}]; endpoints:", format_sig(cap));
                    show(&fam.level_set(Member::Spacing(cap)));
                    show(&fam.level_set(Member::Spacing(0.0)));
                }
                _ => show(&fam.level_set(fam.max_dstar_member())),
            }
            Ok(EXIT_OK)
        }
        Command::Golden { filter } => {
            let results = golden::run(filter.as_deref());
            for r in &results {
                sayln!("{} {:<22} {:>8.3} s  {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.seconds, r.detail);
            }
            let passed = results.iter().filter(|r| r.passed).count();
            let summary = serde_json::json!({
                "passed": passed,
                "failed": results.len() - passed,
                "cases": results,
            });
            sayln!("{}", serde_json::to_string(&summary)?);
            Ok(if passed == results.len() { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}
