//! Paths in the Farey tree and the tree Lyapunov exponent `Λ(ξ)`.
//!
//! A continued fraction `[a₀; a₁, a₂, …]` is read as the path
//! `R^{a₀} L^{a₁} R^{a₂} …`. After a word `w` the columns of
//! `path_matrix(w)` are the two Farey parents of the current interval, and
//! the Euclid triple reached by `w` has `c` equal to the sum of the entries.
//!
//! `Λ` is estimated three ways: from spectral radii of the path matrices,
//! from `ln c_n / n` on the Euclid tree, and from `ln ln z_n / n` on the
//! Markov tree. Finite runs cannot see a limsup, so each estimator also
//! reports the maximum over the last quarter of its indices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::classical::{ln_big, loglog_growth, markov_path, PathWord, Turn, MARKOV_DEPTH_CAP};
use crate::error::{Error, Result};
use crate::torus::IntMatrix2;

/// `[a₀; a₁, a₂, …]` with an optional periodic tail.
///
/// A finite expansion stands for a rational `ξ`; its path is continued by
/// an infinite run of the next letter, which converges to `ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    digits: Vec<u64>,
    period: Vec<u64>,
}

impl ContinuedFraction {
    /// `digits[0]` may be zero; every later digit and every periodic digit must be positive.
    pub fn new(digits: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InsufficientDigits {
                needed: 1,
                available: 0,
            });
        }
        if digits[1..].iter().chain(&period).any(|&d| d == 0) {
            return Err(Error::Domain(
                "continued fraction digits after a0 must be positive".into(),
            ));
        }
        Ok(ContinuedFraction { digits, period })
    }

    pub fn finite(digits: Vec<u64>) -> Result<Self> {
        Self::new(digits, Vec::new())
    }

    /// `[1; 1, 1, …]`.
    pub fn golden() -> Self {
        ContinuedFraction {
            digits: vec![1],
            period: vec![1],
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Value as a double, from the first `terms` partial quotients.
    pub fn approx_value(&self, terms: usize) -> f64 {
        let ds: Vec<u64> = self
            .digits
            .iter()
            .chain(self.period.iter().cycle())
            .take(terms.max(1))
            .copied()
            .collect();
        let (&last, rest) = ds.split_last().expect("at least one digit");
        rest.iter()
            .rev()
            .fold(last as f64, |acc, &d| d as f64 + 1.0 / acc)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ds: &[u64]| ds.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{};", self.digits[0])?;
        let mut tail = list(&self.digits[1..]);
        if self.is_periodic() {
            if !tail.is_empty() {
                tail.push(',');
            }
            tail.push_str(&format!("({})", list(&self.period)));
        }
        write!(f, "{tail}]")
    }
}

/// Syntax `[a0;a1,a2,...]` with `(…)` marking the periodic tail, e.g. `[1;(1)]`.
impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::parse(format!("continued fraction `{s}`: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| bad("expected [a0;a1,...]"))?;
        let (head, tail) = inner.split_once(';').unwrap_or((inner, ""));
        let num = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| bad(&format!("`{t}` is not a nonnegative integer")))
        };
        let list = |t: &str| -> Result<Vec<u64>> {
            if t.is_empty() {
                Ok(Vec::new())
            } else {
                t.split(',').map(num).collect()
            }
        };
        let mut digits = vec![num(head)?];
        let period = match tail.find('(') {
            Some(open) => {
                let rest = &tail[open..];
                let body = rest
                    .strip_prefix('(')
                    .and_then(|x| x.strip_suffix(')'))
                    .ok_or_else(|| bad("unclosed period"))?;
                let before = tail[..open].strip_suffix(',').unwrap_or(&tail[..open]);
                digits.extend(list(before)?);
                let period = list(body)?;
                if period.is_empty() {
                    return Err(bad("empty period"));
                }
                period
            }
            None => {
                digits.extend(list(tail)?);
                Vec::new()
            }
        };
        ContinuedFraction::new(digits, period)
    }
}

/// `p/q` in lowest terms; `1/0` is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyFraction {
    p: u64,
    q: u64,
}

impl FareyFraction {
    pub const ZERO: FareyFraction = FareyFraction { p: 0, q: 1 };
    pub const INFINITY: FareyFraction = FareyFraction { p: 1, q: 0 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if (p, q) == (0, 0) || p.gcd(&q) != 1 {
            return Err(Error::Domain(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(FareyFraction { p, q })
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    /// `p·s − q·r` against `other = q'/s'` written as `p/r`, `q/s`.
    pub fn cross(&self, other: &FareyFraction) -> i128 {
        self.p as i128 * other.q as i128 - other.p as i128 * self.q as i128
    }

    pub fn is_neighbor(&self, other: &FareyFraction) -> bool {
        self.cross(other).abs() == 1
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// `(p + q)/(r + s)` of Farey neighbours `p/r`, `q/s`.
pub fn farey_mediant(a: FareyFraction, b: FareyFraction) -> Result<FareyFraction> {
    if !a.is_neighbor(&b) {
        return Err(Error::NotNeighbors {
            left: a.to_string(),
            right: b.to_string(),
        });
    }
    Ok(FareyFraction {
        p: a.p + b.p,
        q: a.q + b.q,
    })
}

/// Walks the Farey tree by mediants: returns the interval `(left, right)`
/// reached by the word, starting from `(0/1, 1/0)`. `R` keeps the right
/// end, `L` keeps the left.
pub fn farey_interval(word: &PathWord) -> Result<(FareyFraction, FareyFraction)> {
    word.letters().iter().try_fold(
        (FareyFraction::ZERO, FareyFraction::INFINITY),
        |(left, right), t| {
            let mid = farey_mediant(left, right)?;
            Ok(match t {
                Turn::R => (mid, right),
                Turn::L => (left, mid),
            })
        },
    )
}

/// First `n` letters of the path `R^{a₀} L^{a₁} R^{a₂} …`.
pub fn cf_to_word(cf: &ContinuedFraction, n: usize) -> PathWord {
    let turn_for = |i: usize| {
        if i.is_multiple_of(2) {
            Turn::R
        } else {
            Turn::L
        }
    };
    let runs = cf.digits.iter().chain(cf.period.iter().cycle()).enumerate();
    let mut letters = Vec::with_capacity(n);
    let mut next_run = cf.digits.len();
    for (i, &d) in runs {
        if letters.len() >= n {
            break;
        }
        let take = (d as usize).min(n - letters.len());
        letters.extend(std::iter::repeat_n(turn_for(i), take));
        next_run = i + 1;
    }
    // A finite expansion ends with an infinite run of the following letter.
    if letters.len() < n {
        letters.resize(n, turn_for(next_run));
    }
    PathWord::new(letters)
}

/// Product of `L = [[1,0],[1,1]]` and `R = [[1,1],[0,1]]`, left to right.
pub fn path_matrix(word: &PathWord) -> Result<IntMatrix2> {
    let [[mut p, mut q], [mut r, mut s]] = IntMatrix2::IDENTITY.entries();
    for t in word.letters() {
        match t {
            // Right-multiplying by L adds the second column to the first.
            Turn::L => {
                p = p.checked_add(q).ok_or(Error::Overflow("path_matrix"))?;
                r = r.checked_add(s).ok_or(Error::Overflow("path_matrix"))?;
            }
            Turn::R => {
                q = q.checked_add(p).ok_or(Error::Overflow("path_matrix"))?;
                s = s.checked_add(r).ok_or(Error::Overflow("path_matrix"))?;
            }
        }
    }
    IntMatrix2::new(p, q, r, s)
}

/// Traces of `path_matrix` of every nonempty prefix, in big integers.
pub fn prefix_traces(word: &PathWord) -> Vec<BigUint> {
    let (mut p, mut q, mut r, mut s) =
        (BigUint::one(), BigUint::ZERO, BigUint::ZERO, BigUint::one());
    word.letters()
        .iter()
        .map(|t| {
            match t {
                Turn::L => {
                    p += &q;
                    r += &s;
                }
                Turn::R => {
                    q += &p;
                    s += &r;
                }
            }
            &p + &s
        })
        .collect()
}

/// `ln ρ(A)` for `A ∈ SL₂` with trace `t ≥ 2`:
/// `ln t + ln((1 + √(1 − 4/t²))/2)`, safe for traces far beyond `f64`.
pub fn ln_spectral_radius_from_trace(trace: &BigUint) -> f64 {
    let lt = ln_big(trace);
    let inv_sq = (2.0 * std::f64::consts::LN_2 - 2.0 * lt).exp();
    lt + ((1.0 + (1.0 - inv_sq).max(0.0).sqrt()) / 2.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Matrices,
    Euclid,
    Markov,
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrices" => Ok(Estimator::Matrices),
            "euclid" => Ok(Estimator::Euclid),
            "markov" => Ok(Estimator::Markov),
            other => Err(Error::parse(format!(
                "unknown estimator `{other}` (matrices|euclid|markov)"
            ))),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Matrices => "matrices",
            Estimator::Euclid => "euclid",
            Estimator::Markov => "markov",
        })
    }
}

/// `values[k - 1]` is the estimate at index `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub values: Vec<f64>,
    /// Maximum over the last quarter of the indices.
    pub limsup: f64,
}

impl LambdaEstimate {
    fn from_values(values: Vec<f64>) -> Self {
        let tail = values.len().div_ceil(4).max(1).min(values.len());
        let limsup = values[values.len() - tail..]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        LambdaEstimate { values, limsup }
    }

    pub fn at(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("estimates are nonempty")
    }
}

fn check_length(word: &PathWord, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("estimators need n >= 1".into()));
    }
    if word.len() < n {
        return Err(Error::WordTooShort {
            needed: n,
            available: word.len(),
        });
    }
    Ok(())
}

/// `ln ρ(A_k)/k` along `cf_to_word(cf, n)`.
pub fn lambda_via_matrices(cf: &ContinuedFraction, n: usize) -> Result<LambdaEstimate> {
    lambda_via_matrices_word(&cf_to_word(cf, n), n)
}

pub fn lambda_via_matrices_word(word: &PathWord, n: usize) -> Result<LambdaEstimate> {
    check_length(word, n)?;
    let values = prefix_traces(&word.prefix(n))
        .iter()
        .enumerate()
        .map(|(i, t)| ln_spectral_radius_from_trace(t) / (i + 1) as f64)
        .collect();
    Ok(LambdaEstimate::from_values(values))
}

/// `ln c_k / k` with `c_k` the largest entry of the `k`-th Euclid triple.
pub fn lambda_via_euclid(word: &PathWord, n: usize) -> Result<LambdaEstimate> {
    check_length(word, n)?;
    let (mut first, mut second) = (BigUint::one(), BigUint::one());
    let values = word.letters()[..n]
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let sum = &first + &second;
            match t {
                Turn::L => first = sum,
                Turn::R => second = sum,
            }
            ln_big(&(&first + &second)) / (i + 1) as f64
        })
        .collect();
    Ok(LambdaEstimate::from_values(values))
}

/// `ln ln z_k / k` on the Markov tree; `n` is capped at [`MARKOV_DEPTH_CAP`].
pub fn lambda_via_markov(word: &PathWord, n: usize) -> Result<LambdaEstimate> {
    if n > MARKOV_DEPTH_CAP {
        return Err(Error::DepthExceeded {
            requested: n,
            cap: MARKOV_DEPTH_CAP,
        });
    }
    check_length(word, n)?;
    let triples = markov_path(&word.prefix(n));
    Ok(LambdaEstimate::from_values(loglog_growth(&triples[1..])?))
}

pub fn estimate(estimator: Estimator, word: &PathWord, n: usize) -> Result<LambdaEstimate> {
    match estimator {
        Estimator::Matrices => lambda_via_matrices_word(word, n),
        Estimator::Euclid => lambda_via_euclid(word, n),
        Estimator::Markov => lambda_via_markov(word, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::spectral_radius;

    fn ff(p: u64, q: u64) -> FareyFraction {
        FareyFraction::new(p, q).unwrap()
    }

    fn w(s: &str) -> PathWord {
        s.parse().unwrap()
    }

    fn ln_golden() -> f64 {
        ((1.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn mediant_examples() {
        assert_eq!(farey_mediant(ff(0, 1), ff(1, 1)).unwrap(), ff(1, 2));
        assert_eq!(farey_mediant(ff(1, 2), ff(1, 1)).unwrap(), ff(2, 3));
        assert_eq!(farey_mediant(ff(1, 3), ff(1, 2)).unwrap(), ff(2, 5));
        assert!(matches!(
            farey_mediant(ff(1, 3), ff(2, 3)),
            Err(Error::NotNeighbors { .. })
        ));
        assert!(FareyFraction::new(2, 4).is_err());
    }

    #[test]
    fn mediant_is_neighbor_of_both() {
        let (a, b) = (ff(3, 5), ff(2, 3));
        let m = farey_mediant(a, b).unwrap();
        assert!(m.is_neighbor(&a) && m.is_neighbor(&b));
    }

    #[test]
    fn cf_parsing() {
        let g: ContinuedFraction = "[1;(1)]".parse().unwrap();
        assert_eq!(g, ContinuedFraction::golden());
        assert_eq!(g.to_string(), "[1;(1)]");
        let c: ContinuedFraction = "[0; 2, 3, (1, 4)]".parse().unwrap();
        assert_eq!(c.digits(), &[0, 2, 3]);
        assert_eq!(c.period(), &[1, 4]);
        assert_eq!(c.to_string(), "[0;2,3,(1,4)]");
        let z: ContinuedFraction = "[0;]".parse().unwrap();
        assert_eq!(z.digits(), &[0]);
        assert_eq!("[2]".parse::<ContinuedFraction>().unwrap().digits(), &[2]);
        for bad in ["1;2", "[1;0]", "[1;()]", "[x]", "[1;(1]", "[1;2,,3]"] {
            assert!(bad.parse::<ContinuedFraction>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cf_approx_value() {
        let g = ContinuedFraction::golden();
        assert!((g.approx_value(40) - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        let s2: ContinuedFraction = "[1;(2)]".parse().unwrap();
        assert!((s2.approx_value(30) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cf_to_word_examples() {
        assert_eq!(cf_to_word(&ContinuedFraction::golden(), 6), w("RLRLRL"));
        assert_eq!(cf_to_word(&"[2]".parse().unwrap(), 2), w("RR"));
        assert_eq!(cf_to_word(&ContinuedFraction::golden(), 0), w(""));
        assert_eq!(
            cf_to_word(&"[0;3,(1,2)]".parse().unwrap(), 9),
            w("LLLRLLRLL")
        );
    }

    #[test]
    fn finite_cf_converges_to_its_value() {
        assert_eq!(cf_to_word(&"[0;]".parse().unwrap(), 3), w("LLL"));
        assert_eq!(cf_to_word(&"[2]".parse().unwrap(), 5), w("RRLLL"));
        let (left, right) = farey_interval(&cf_to_word(&"[1;2]".parse().unwrap(), 40)).unwrap();
        // ξ = 3/2 is an endpoint of every interval on its path.
        assert!(left == ff(3, 2) || right == ff(3, 2));
    }

    #[test]
    fn path_matrix_examples() {
        assert_eq!(path_matrix(&w("")).unwrap(), IntMatrix2::IDENTITY);
        assert_eq!(path_matrix(&w("RL")).unwrap(), IntMatrix2::CAT);
        assert_eq!(
            path_matrix(&w("RRR")).unwrap(),
            IntMatrix2::new(1, 3, 0, 1).unwrap()
        );
        assert_eq!(
            path_matrix(&w("L")).unwrap(),
            IntMatrix2::new(1, 0, 1, 1).unwrap()
        );
    }

    #[test]
    fn path_matrix_overflow_is_reported() {
        let long = PathWord::alternating(Turn::R, 200);
        assert!(matches!(path_matrix(&long), Err(Error::Overflow(_))));
    }

    #[test]
    fn columns_are_farey_parents() {
        for word in ["", "R", "L", "RL", "LRRLL", "RRRLRLLR", "LLLLLLRRRRRR"] {
            let word = w(word);
            let [[p, q], [r, s]] = path_matrix(&word).unwrap().entries();
            let (left, right) = farey_interval(&word).unwrap();
            assert_eq!(
                (p as u64, r as u64),
                (right.numer(), right.denom()),
                "{word}"
            );
            assert_eq!((q as u64, s as u64), (left.numer(), left.denom()), "{word}");
        }
    }

    #[test]
    fn swapping_letters_conjugates_by_the_flip() {
        let flip = IntMatrix2::new(0, 1, 1, 0).unwrap();
        for word in ["RL", "RRLRL", "LLRLLLR"] {
            let word = w(word);
            let a = path_matrix(&word).unwrap();
            let b = path_matrix(&word.swapped()).unwrap();
            assert_eq!(b, flip * a * flip);
            assert_eq!(spectral_radius(&a), spectral_radius(&b));
        }
    }

    #[test]
    fn big_trace_route_matches_int_matrix_route() {
        for word in ["RL", "RRL", "RLRLRLRL", "RRRRLLLR", "RRRR"] {
            let word = w(word);
            let tr = prefix_traces(&word).pop().unwrap();
            let m = path_matrix(&word).unwrap();
            assert_eq!(tr, BigUint::from(m.trace() as u64));
            assert!((ln_spectral_radius_from_trace(&tr) - spectral_radius(&m).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn lambda_via_matrices_examples() {
        let golden = ContinuedFraction::golden();
        let est = lambda_via_matrices(&golden, 20).unwrap();
        assert!((est.at(2) - ln_golden()).abs() < 1e-12);
        assert!((est.at(2) - 0.481_211_825_1).abs() < 1e-10);
        assert!((est.at(20) - ln_golden()).abs() < 1e-6);
        let one = lambda_via_matrices(&"[1]".parse().unwrap(), 1).unwrap();
        assert_eq!(one.values, vec![0.0]);
        assert!(lambda_via_matrices(&golden, 0).is_err());
    }

    #[test]
    fn lambda_via_euclid_examples() {
        let fib = PathWord::alternating(Turn::L, 10);
        let est = lambda_via_euclid(&fib, 10).unwrap();
        assert!((est.at(10) - 233f64.ln() / 10.0).abs() < 1e-15);
        assert!((est.at(10) - 0.5451).abs() < 1e-4);
        for first in [Turn::L, Turn::R] {
            let est = lambda_via_euclid(&PathWord::constant(first, 1), 1).unwrap();
            assert!((est.at(1) - 3f64.ln()).abs() < 1e-15);
        }
        let est = lambda_via_euclid(&PathWord::constant(Turn::R, 50), 50).unwrap();
        for k in 1..=50 {
            assert!((est.at(k) - ((k + 2) as f64).ln() / k as f64).abs() < 1e-14);
        }
        assert!(matches!(
            lambda_via_euclid(&fib, 11),
            Err(Error::WordTooShort { .. })
        ));
    }

    #[test]
    fn lambda_via_markov_examples() {
        let est = lambda_via_markov(&w("L"), 1).unwrap();
        assert!((est.at(1) - 5f64.ln().ln()).abs() < 1e-15);
        assert!((est.at(1) - 0.4759).abs() < 1e-4);
        let golden = PathWord::alternating(Turn::R, 40);
        assert!(matches!(
            lambda_via_markov(&golden, 31),
            Err(Error::DepthExceeded {
                requested: 31,
                cap: 30
            })
        ));
    }

    #[test]
    fn limsup_is_max_of_last_quarter() {
        let e = LambdaEstimate::from_values(vec![5.0, 1.0, 2.0, 3.0, 0.5, 0.1, 0.2, 0.3]);
        assert_eq!(e.limsup, 0.3);
        let e = LambdaEstimate::from_values(vec![2.0]);
        assert_eq!(e.limsup, 2.0);
        let e = LambdaEstimate::from_values(vec![1.0, 4.0, 2.0]);
        assert_eq!(e.limsup, 2.0);
    }
}
