//! `forest-kernel` command line: `count`, `enumerate`, `kernel`, `verify`.
//!
//! Exit status is 0 when every executed check passed, 1 when a check failed,
//! and 2 for usage, parse, limit, and kernel-domain errors.

pub mod config;
pub mod dot;
pub mod report;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::corpus::RandomCase;
use crate::count::{closed_form_count, count_recursion, CountQuery};
use crate::enumerate::{brute_force_count_with, enumerate_forests_with};
use crate::error::{Error, Result};
use crate::kernel::{q_count, q_eval, q_eval_by_enumeration_with, Boundary, PivotRule, QOptions};
use crate::model::{Configuration, NumericMode, DEFAULT_REL_TOL};
use crate::Limits;

pub use config::ConfigFile;
pub use report::RunReport;
pub use verify::{run_verify, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "forest-kernel", version, about = "Rooted labeled forests: enumeration, counting, and the forest-sum kernel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print N(m|n) = m(n+m)^(n-1), optionally cross-checked.
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Compare against the binomial recursion.
        #[arg(long)]
        check_recursion: bool,
        /// Compare against brute-force parent-map enumeration.
        #[arg(long)]
        check_enumeration: bool,
        /// Compare against the collapsed kernel recursion at h = ν = 1.
        #[arg(long)]
        check_kernel: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Emit every forest of a configuration file.
    Enumerate {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate Q_{h,ν}(η|γ) for a configuration file.
    Kernel {
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        check_enumeration: bool,
        /// Root label to peel first.
        #[arg(long)]
        pivot: Option<String>,
        /// Re-derive memo hits and compare all pivots.
        #[arg(long)]
        verify_memo: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Run the full property battery on a seeded random corpus.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_total: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Extra configuration file added to the corpus.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        timing: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(report: &mut RunReport, json: bool, timing: Option<Instant>, out: &mut dyn Write) -> Result<i32> {
    if let Some(start) = timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = if json { report.to_json() + "\n" } else { report.render_text() };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Parse(format!("cannot write output: {e}")))?;
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    let limits = Limits::from_env();
    match command {
        Command::Count {
            m,
            n,
            check_recursion,
            check_enumeration,
            check_kernel,
            json,
            timing,
        } => {
            let start = timing.then(Instant::now);
            if check_enumeration && m + n > limits.enumeration {
                return Err(Error::ResourceLimit {
                    what: "count --check-enumeration",
                    size: m + n,
                    limit: limits.enumeration,
                });
            }
            let mut report = RunReport::new("count");
            report.input("m", m);
            report.input("n", n);
            let q = CountQuery::new(m, n);
            let value = closed_form_count(q);
            report.output(&format!("N({m}|{n})"), &value);
            if check_recursion {
                report.check("recursion", &value, count_recursion(q), "exact", value == count_recursion(q));
            }
            if check_enumeration {
                let brute = brute_force_count_with(&Configuration::anonymous(m, n), limits.enumeration)?;
                report.check("enumeration", &value, &brute, "exact", value == brute);
            }
            if check_kernel {
                let k = q_count(m, n);
                report.check("kernel", &value, &k, "exact", value == k);
            }
            emit(&mut report, json, start, out)
        }
        Command::Enumerate { config, format, output } => {
            let loaded = ConfigFile::read(&config)?.load()?;
            let set = enumerate_forests_with(&loaded.configuration, limits.enumeration)?;
            let text = match format {
                Format::Dot => dot::forests_to_dot(&set),
                Format::Json => {
                    let maps: Vec<_> = set.iter().map(|f| f.to_parent_map(&set.configuration)).collect();
                    serde_json::to_string_pretty(&maps).expect("maps serialize") + "\n"
                }
            };
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?,
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| Error::Parse(format!("cannot write output: {e}")))?,
            }
            Ok(EXIT_OK)
        }
        Command::Kernel {
            config,
            mode,
            check_enumeration,
            pivot,
            verify_memo,
            json,
            timing,
        } => {
            let start = timing.then(Instant::now);
            let loaded = ConfigFile::read(&config)?.load()?;
            let opts = QOptions {
                pivot: pivot.map(PivotRule::Given).unwrap_or_default(),
                mode: mode.map(|m| match m {
                    ModeArg::Exact => NumericMode::Exact,
                    ModeArg::Float => NumericMode::Float,
                }),
                verify: verify_memo,
                limit: limits.kernel,
            };
            let c = &loaded.configuration;
            let eval = q_eval(c, &loaded.h, &loaded.kernel, &opts)?;
            let mut report = RunReport::new("kernel");
            report.input("config", config.display());
            report.input("m", c.m());
            report.input("n", c.n());
            report.input("h", &loaded.h);
            report.output("Q", &eval.value);
            report.output("mode", eval.mode);
            report.output("states", eval.states);
            match eval.boundary {
                Some(Boundary::Overlap) => report
                    .notes
                    .push(format!("boundary: roots and vertices share {:?}, so Q = 0", c.overlap())),
                Some(Boundary::NoRoots) => report.notes.push("boundary: no roots and nonempty vertices, so Q = 0".into()),
                Some(Boundary::Empty) => report.notes.push("boundary: empty configuration, so Q = 1".into()),
                None => {}
            }
            if check_enumeration {
                if eval.boundary == Some(Boundary::Overlap) {
                    report.notes.push("enumeration check skipped: no forests on overlapping labels".into());
                } else {
                    let by_enum = q_eval_by_enumeration_with(c, &loaded.h, &loaded.kernel, limits.enumeration)?;
                    let (cmp, ok) = if eval.mode == NumericMode::Exact && by_enum.is_exact() {
                        ("exact".to_string(), eval.value == by_enum)
                    } else {
                        (
                            format!("rel-tol {DEFAULT_REL_TOL:e}"),
                            eval.value.approx_eq(&by_enum, DEFAULT_REL_TOL),
                        )
                    };
                    report.check("enumeration", &eval.value, &by_enum, &cmp, ok);
                }
            }
            emit(&mut report, json, start, out)
        }
        Command::Verify {
            max_total,
            seed,
            trials,
            config,
            json,
            timing,
        } => {
            let start = timing.then(Instant::now);
            let mut extra = Vec::new();
            if let Some(path) = &config {
                let loaded = ConfigFile::read(path)?.load()?;
                extra.push(RandomCase {
                    configuration: loaded.configuration,
                    kernel: loaded.kernel,
                    h: loaded.h,
                });
            }
            let opts = VerifyOptions {
                max_total,
                seed,
                trials,
                extra,
                limits,
            };
            let mut report = run_verify(&opts)?;
            emit(&mut report, json, start, out)
        }
    }
}
