//! Exact property suites over seeded random samples.
//!
//! Each suite counts individual checks; a check passes only on exact
//! equality over [`Rat`] or big integers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::classical::{euclid_path, markov_path, Slot};
use crate::error::{Error, Result};
use crate::farey::{farey_interval, path_matrix};
use crate::sample::{
    hyperbolic_matrices, random_generator_word, random_path_word, random_point3,
    random_surface_point, random_torus_point, rng, DEFAULT_SEED,
};
use crate::scalar::{format_rat, Rat, Scalar};
use crate::torus::{fold, induced_map, semiconj_residual, unfold, IntMatrix2};
use crate::tropical::{phi, psi, rho, sigma, trop_markov_step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Classical,
    Tropical,
    Semiconj,
    Torus,
    Farey,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Classical,
        Suite::Tropical,
        Suite::Semiconj,
        Suite::Torus,
        Suite::Farey,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Classical => "classical",
            Suite::Tropical => "tropical",
            Suite::Semiconj => "semiconj",
            Suite::Torus => "torus",
            Suite::Farey => "farey",
        })
    }
}

/// `all` expands to every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    Ok(match s {
        "all" => Suite::ALL.to_vec(),
        "classical" => vec![Suite::Classical],
        "tropical" => vec![Suite::Tropical],
        "semiconj" => vec![Suite::Semiconj],
        "torus" => vec![Suite::Torus],
        "farey" => vec![Suite::Farey],
        other => {
            return Err(Error::parse(format!(
                "unknown suite `{other}` (classical|tropical|semiconj|torus|farey|all)"
            )))
        }
    })
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_suites(s)?.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::parse("`all` names several suites".to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub word_len: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            samples: 1000,
            word_len: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub failed: u64,
    /// Largest semi-conjugation residual, `p/q`; only for the `semiconj` suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

#[derive(Default)]
struct Tally {
    checks: u64,
    failed: u64,
}

impl Tally {
    fn check(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

pub fn run_suites(suites: &[Suite], opts: &VerifyOptions) -> VerifyReport {
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, opts)).collect();
    let passed = reports.iter().all(SuiteReport::passed);
    VerifyReport {
        seed: opts.seed,
        samples: opts.samples,
        suites: reports,
        passed,
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let mut tally = Tally::default();
    let mut max_residual = None;
    match suite {
        Suite::Classical => classical(opts, &mut tally),
        Suite::Tropical => tropical(opts, &mut tally),
        Suite::Semiconj => max_residual = Some(format_rat(&semiconj(opts, &mut tally))),
        Suite::Torus => torus(opts, &mut tally),
        Suite::Farey => farey(opts, &mut tally),
    }
    SuiteReport {
        suite,
        checks: tally.checks,
        failed: tally.failed,
        max_residual,
    }
}

fn classical(opts: &VerifyOptions, tally: &mut Tally) {
    let mut r = rng(opts.seed);
    let depth = opts.word_len.min(crate::classical::MARKOV_DEPTH_CAP);
    for _ in 0..opts.samples {
        let word = random_path_word(&mut r, depth);
        for t in markov_path(&word) {
            tally.check(t.is_markov());
            for slot in Slot::ALL {
                tally.check(
                    t.vieta_ratio(slot)
                        .is_ok_and(|v| v == t.vieta(slot) && v.vieta(slot) == t),
                );
            }
        }
        tally.check(euclid_path(&word).iter().all(|e| e.is_valid()));
    }
}

fn tropical(opts: &VerifyOptions, tally: &mut Tally) {
    let mut r = rng(opts.seed);
    for _ in 0..opts.samples {
        let p = random_point3(&mut r, 4, 12);
        tally.check(psi(sigma(p)) == psi(p));
        tally.check(psi(rho(p)) == psi(p));
        tally.check(sigma(sigma(p)) == p);
        tally.check(rho(rho(rho(p))) == p);
        tally.check(phi(trop_markov_step(p)) == phi(p));
        tally.check(trop_markov_step(trop_markov_step(p)) == p);
    }
}

fn semiconj(opts: &VerifyOptions, tally: &mut Tally) -> Rat {
    const POINTS_PER_WORD: usize = 8;
    let mut r = rng(opts.seed);
    let mut worst = Rat::zero();
    for _ in 0..opts.samples {
        let word = random_generator_word(&mut r, opts.word_len);
        let pts: Vec<_> = (0..POINTS_PER_WORD)
            .map(|_| random_torus_point(&mut r, 16))
            .collect();
        let res = semiconj_residual(&word, &pts);
        worst = Ord::max(worst, res);
        tally.check(res == Rat::zero());
    }
    worst
}

fn torus(opts: &VerifyOptions, tally: &mut Tally) {
    let mut r = rng(opts.seed);
    let matrices = hyperbolic_matrices();
    for i in 0..opts.samples {
        let p = random_surface_point(&mut r, 16);
        let Ok(pre) = unfold(p) else {
            tally.check(false);
            continue;
        };
        tally.check(pre.iter().all(|&t| fold(t) == p));
        let m: &IntMatrix2 = &matrices[i % matrices.len()];
        let images: Vec<_> = pre
            .iter()
            .map(|&t| fold(crate::torus::torus_act(m, t)))
            .collect();
        tally.check(images.windows(2).all(|w| w[0] == w[1]));
        tally.check(induced_map(m, p).is_ok_and(|q| q == images[0] && psi(q) == Rat::two()));
    }
}

fn farey(opts: &VerifyOptions, tally: &mut Tally) {
    let mut r = rng(opts.seed);
    let flip = IntMatrix2::new(0, 1, 1, 0).expect("unimodular");
    for _ in 0..opts.samples {
        let word = random_path_word(&mut r, opts.word_len.min(40));
        let (Ok(m), Ok((left, right))) = (path_matrix(&word), farey_interval(&word)) else {
            tally.check(false);
            continue;
        };
        let [[p, q], [rr, s]] = m.entries();
        tally.check(m.det() == 1);
        tally.check((p as u64, rr as u64) == (right.numer(), right.denom()));
        tally.check((q as u64, s as u64) == (left.numer(), left.denom()));
        tally.check(path_matrix(&word.swapped()).is_ok_and(|sw| sw == flip * m * flip));
    }
}
