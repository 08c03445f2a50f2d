//! The `cayley-markov` command line.
//!
//! JSON summaries go to stdout, data files to disk. Exit codes: 0 ok,
//! 1 a check failed, 2 bad configuration, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::classical::{euclid_path, markov_path, PathWord, MARKOV_DEPTH_CAP};
use crate::ergodic::{
    benettin_lyapunov, box_discrepancy, export_orbit, orbit, period_bound, period_detect,
    surface_residual, write_atomic, NamedStart, OrbitFormat, OrbitRecord,
};
use crate::error::{Error, Result};
use crate::farey::{cf_to_word, estimate, ContinuedFraction, Estimator, LambdaEstimate};
use crate::sample::{random_generator_word, random_torus_point, rng, DEFAULT_SEED};
use crate::scalar::{format_rat, parse_rat, Mode, Rat, Scalar};
use crate::torus::{semiconj_residual, IntMatrix2, TorusPoint};
use crate::tropical::GeneratorWord;
use crate::verify::{parse_suites, run_suites, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cayley-markov",
    version,
    about = "Tropical Cayley-Markov dynamics toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run exact property suites and print pass/fail counts.
    Verify {
        /// classical, tropical, semiconj, torus, farey or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        word_len: usize,
    },
    /// Iterate a toral automorphism, optionally folding onto the tetrahedron.
    Orbit {
        /// Row-major `a,b,c,d` with determinant ±1.
        #[arg(long, allow_hyphen_values = true)]
        matrix: IntMatrix2,
        /// `sqrt2`, `sqrt3`, `golden` or `p/q,p/q`.
        #[arg(long, allow_hyphen_values = true)]
        start: Start,
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long)]
        fold: bool,
        /// Defaults to exact for rational starts and float for named ones.
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: OrbitFormat,
        /// Report box discrepancy on a `grid × grid` partition.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Benettin estimate of the Lyapunov exponent against `ln ρ(M)`.
    Lyapunov {
        #[arg(long, allow_hyphen_values = true)]
        matrix: IntMatrix2,
        #[arg(long, value_parser = positive)]
        n: usize,
        #[arg(long, default_value = "sqrt2")]
        start: NamedStart,
        /// Measure stretching on the tetrahedron instead of the torus.
        #[arg(long)]
        fold: bool,
    },
    /// Estimates of Λ along a continued fraction or a path word.
    Lambda {
        #[arg(long, conflicts_with = "word", required_unless_present = "word")]
        cf: Option<ContinuedFraction>,
        #[arg(long)]
        word: Option<PathWord>,
        /// Defaults to the word length.
        #[arg(long, value_parser = positive)]
        n: Option<usize>,
        #[arg(long, default_value = "matrices")]
        estimator: Estimator,
        #[arg(long)]
        out: Option<PathBuf>,
        /// `csv` writes `k,lambda_k` rows; `json` prints values and limsup.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Dump the Markov (or Euclid) triples along a path word.
    Markov {
        #[arg(long)]
        word: PathWord,
        #[arg(long)]
        euclid: bool,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Scan semi-conjugation residuals over random words and rational points.
    Semiconj {
        /// Check one word instead of random ones.
        #[arg(long)]
        word: Option<GeneratorWord>,
        #[arg(long, default_value_t = 20)]
        word_len: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    Named(NamedStart),
    Rational(TorusPoint<Rat>),
}

impl FromStr for Start {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(named) = s.parse() {
            return Ok(Start::Named(named));
        }
        let (phi, psi) = s.split_once(',').ok_or_else(|| {
            Error::parse(format!(
                "start `{s}` is neither a named start nor `p/q,p/q`"
            ))
        })?;
        Ok(Start::Rational(TorusPoint::new(
            parse_rat(phi)?,
            parse_rat(psi)?,
        )))
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::DepthExceeded { .. }
        | Error::CapExceeded { .. }
        | Error::Overflow(_)
        | Error::EmptyOrbit => EXIT_CHECK_FAILED,
        _ => EXIT_BAD_CONFIG,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_BAD_CONFIG
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(value).map_err(|e| Error::Domain(e.to_string()))?
    )?;
    Ok(())
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Verify {
            suite,
            seed,
            samples,
            word_len,
        } => {
            let suites = parse_suites(&suite)?;
            let report = run_suites(
                &suites,
                &VerifyOptions {
                    seed,
                    samples,
                    word_len,
                },
            );
            print_json(
                stdout,
                &serde_json::to_value(&report).map_err(|e| Error::Domain(e.to_string()))?,
            )?;
            Ok(if report.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Orbit {
            matrix,
            start,
            n,
            fold,
            mode,
            out,
            format,
            grid,
        } => {
            let mode = mode.unwrap_or(match start {
                Start::Named(_) => Mode::Float,
                Start::Rational(_) => Mode::Exact,
            });
            let summary = match (mode, start) {
                (Mode::Exact, Start::Named(name)) => {
                    return Err(Error::Domain(format!(
                        "exact mode needs a rational start, got `{name}`"
                    )))
                }
                (Mode::Exact, Start::Rational(t)) => {
                    let mut summary =
                        orbit_summary(&orbit(&matrix, t, n, fold), out.as_ref(), format, grid)?;
                    summary["period"] = json!(period_detect(&matrix, t, period_bound(&t))?);
                    summary
                }
                (Mode::Float, Start::Named(name)) => orbit_summary(
                    &orbit(&matrix, name.point(), n, fold),
                    out.as_ref(),
                    format,
                    grid,
                )?,
                (Mode::Float, Start::Rational(t)) => orbit_summary(
                    &orbit(&matrix, t.to_f64(), n, fold),
                    out.as_ref(),
                    format,
                    grid,
                )?,
            };
            print_json(stdout, &summary)?;
            Ok(EXIT_OK)
        }
        Command::Lyapunov {
            matrix,
            n,
            start,
            fold,
        } => {
            let report = benettin_lyapunov(&matrix, start.point(), n, fold)?;
            print_json(
                stdout,
                &serde_json::to_value(report).map_err(|e| Error::Domain(e.to_string()))?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Lambda {
            cf,
            word,
            n,
            estimator,
            out,
            format,
        } => {
            let json_out = match format.as_str() {
                "csv" => false,
                "json" => true,
                other => return Err(Error::parse(format!("unknown format `{other}` (csv|json)"))),
            };
            let (word, n) = match (cf, word) {
                (Some(cf), _) => {
                    let n = n.ok_or_else(|| Error::parse("--n is required with --cf"))?;
                    (cf_to_word(&cf, n), n)
                }
                (None, Some(word)) => {
                    let n = n.unwrap_or(word.len());
                    (word, n)
                }
                (None, None) => return Err(Error::parse("one of --cf or --word is required")),
            };
            let est = estimate(estimator, &word, n)?;
            let summary =
                json!({"estimator": estimator, "n": n, "last": est.last(), "limsup": est.limsup});
            if json_out {
                let mut full = summary;
                full["values"] = json!(est.values);
                match out {
                    Some(path) => {
                        write_atomic(&path, |w| writeln!(w, "{full}"))?;
                    }
                    None => print_json(stdout, &full)?,
                }
                return Ok(EXIT_OK);
            }
            match out {
                Some(path) => {
                    write_atomic(&path, |w| write_lambda_csv(&est, w))?;
                    print_json(stdout, &summary)?;
                }
                None => {
                    write_lambda_csv(&est, stdout)?;
                    print_json(stderr, &summary)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Markov {
            word,
            euclid,
            format,
        } => {
            if !euclid && word.len() > MARKOV_DEPTH_CAP {
                return Err(Error::DepthExceeded {
                    requested: word.len(),
                    cap: MARKOV_DEPTH_CAP,
                });
            }
            let rows: Vec<[String; 3]> = if euclid {
                euclid_path(&word)
                    .iter()
                    .map(|t| t.entries().map(|e| e.to_string()))
                    .collect()
            } else {
                markov_path(&word)
                    .iter()
                    .map(|t| t.entries().map(|e| e.to_string()))
                    .collect()
            };
            match format.as_str() {
                "csv" => {
                    writeln!(stdout, "{}", if euclid { "k,a,b,c" } else { "k,x,y,z" })?;
                    for (k, [a, b, c]) in rows.iter().enumerate() {
                        writeln!(stdout, "{k},{a},{b},{c}")?;
                    }
                }
                "json" => print_json(stdout, &json!(rows))?,
                other => return Err(Error::parse(format!("unknown format `{other}` (csv|json)"))),
            }
            Ok(EXIT_OK)
        }
        Command::Semiconj {
            word,
            word_len,
            samples,
            points,
            seed,
        } => {
            let mut r = rng(seed);
            let words: Vec<GeneratorWord> = match word {
                Some(w) => vec![w],
                None => (0..samples)
                    .map(|_| random_generator_word(&mut r, word_len))
                    .collect(),
            };
            let pts: Vec<TorusPoint<Rat>> = (0..points)
                .map(|_| random_torus_point(&mut r, 16))
                .collect();
            let worst = words
                .iter()
                .map(|w| semiconj_residual(w, &pts))
                .fold(Rat::zero(), Ord::max);
            let passed = worst == Rat::zero();
            print_json(
                stdout,
                &json!({"words": words.len(), "points": pts.len(), "max_residual": format_rat(&worst), "passed": passed}),
            )?;
            Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn write_lambda_csv(est: &LambdaEstimate, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "k,lambda_k")?;
    for (i, v) in est.values.iter().enumerate() {
        writeln!(w, "{},{v}", i + 1)?;
    }
    Ok(())
}

fn orbit_summary<S: Scalar>(
    rec: &OrbitRecord<S>,
    out: Option<&PathBuf>,
    format: OrbitFormat,
    grid: Option<usize>,
) -> Result<Value> {
    if let Some(path) = out {
        export_orbit(rec, path, format)?;
    }
    let mut summary = json!({"length": rec.len(), "mode": rec.mode(), "folded": rec.is_folded()});
    if let Some(points) = rec.folded_points() {
        summary["surface_residual"] = json!(surface_residual(points));
    }
    if let Some(k) = grid {
        let points = rec
            .torus_points()
            .ok_or_else(|| Error::Domain("--grid needs a torus orbit (drop --fold)".into()))?;
        summary["discrepancy"] = json!(box_discrepancy(points, k)?);
    }
    if let Some(path) = out {
        summary["out"] = json!(path.display().to_string());
    }
    Ok(summary)
}
