//! Markov and Euclid trees over big integers, and the smooth Cayley cubic.
//!
//! Both trees are walked with an ordered state `(first, second, newest)`:
//! the two "parents" and the entry created by the last move. A letter says
//! which parent is replaced by the newest entry, exactly as the columns of
//! the Farey path matrix are updated (`L`: first, `R`: second). Triples are
//! reported sorted.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum word length for exact Markov paths.
pub const MARKOV_DEPTH_CAP: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turn {
    L,
    R,
}

impl Turn {
    pub fn flipped(self) -> Turn {
        match self {
            Turn::L => Turn::R,
            Turn::R => Turn::L,
        }
    }
}

/// A finite path in the binary tree, as a word over `{L, R}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PathWord(Vec<Turn>);

impl PathWord {
    pub fn new(letters: Vec<Turn>) -> Self {
        PathWord(letters)
    }

    pub fn letters(&self) -> &[Turn] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, n: usize) -> PathWord {
        PathWord(self.0[..n.min(self.0.len())].to_vec())
    }

    /// `first, other, first, …` of length `n`.
    pub fn alternating(first: Turn, n: usize) -> PathWord {
        PathWord(
            (0..n)
                .map(|i| if i % 2 == 0 { first } else { first.flipped() })
                .collect(),
        )
    }

    pub fn constant(turn: Turn, n: usize) -> PathWord {
        PathWord(vec![turn; n])
    }

    /// Every `L` replaced by `R` and vice versa.
    pub fn swapped(&self) -> PathWord {
        PathWord(self.0.iter().map(|t| t.flipped()).collect())
    }
}

impl FromIterator<Turn> for PathWord {
    fn from_iter<I: IntoIterator<Item = Turn>>(iter: I) -> Self {
        PathWord(iter.into_iter().collect())
    }
}

impl FromStr for PathWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'L' => Ok(Turn::L),
                'R' => Ok(Turn::R),
                other => Err(Error::parse(format!(
                    "path words use only L and R, found `{other}`"
                ))),
            })
            .collect()
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            f.write_str(match t {
                Turn::L => "L",
                Turn::R => "R",
            })?;
        }
        Ok(())
    }
}

/// Coordinate position inside a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
    Third,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::First, Slot::Second, Slot::Third];

    /// 1-based index as used on the command line.
    pub fn from_index(i: usize) -> Result<Slot> {
        match i {
            1 => Ok(Slot::First),
            2 => Ok(Slot::Second),
            3 => Ok(Slot::Third),
            _ => Err(Error::Domain(format!("slot index {i} is not in 1..=3"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkovTriple {
    pub x: BigUint,
    pub y: BigUint,
    pub z: BigUint,
}

impl MarkovTriple {
    pub fn new(x: impl Into<BigUint>, y: impl Into<BigUint>, z: impl Into<BigUint>) -> Self {
        MarkovTriple {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    /// `x² + y² + z² = 3xyz`, exactly.
    pub fn is_markov(&self) -> bool {
        let lhs = &self.x * &self.x + &self.y * &self.y + &self.z * &self.z;
        let rhs = BigUint::from(3u8) * &self.x * &self.y * &self.z;
        lhs == rhs
    }

    pub fn max_entry(&self) -> &BigUint {
        (&self.x).max(&self.y).max(&self.z)
    }

    /// Entries in ascending order.
    pub fn sorted(&self) -> MarkovTriple {
        let mut v = [self.x.clone(), self.y.clone(), self.z.clone()];
        v.sort();
        let [x, y, z] = v;
        MarkovTriple { x, y, z }
    }

    pub fn entries(&self) -> [&BigUint; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Split into (entry at `slot`, the other two).
    fn take(&self, slot: Slot) -> (&BigUint, &BigUint, &BigUint) {
        match slot {
            Slot::First => (&self.x, &self.y, &self.z),
            Slot::Second => (&self.y, &self.x, &self.z),
            Slot::Third => (&self.z, &self.x, &self.y),
        }
    }

    fn with(&self, slot: Slot, value: BigUint) -> MarkovTriple {
        let mut t = self.clone();
        match slot {
            Slot::First => t.x = value,
            Slot::Second => t.y = value,
            Slot::Third => t.z = value,
        }
        t
    }

    /// Vieta move `e ↦ 3·p·q − e` at `slot`, where `p, q` are the other entries.
    ///
    /// The triple must lie on the Markov equation; then the other root is
    /// `(p² + q²)/e > 0`. Panics if the subtraction would go negative, which
    /// can only happen off the equation.
    pub fn vieta(&self, slot: Slot) -> MarkovTriple {
        let (e, p, q) = self.take(slot);
        let prod = BigUint::from(3u8) * p * q;
        assert!(
            &prod >= e,
            "Vieta move left the positive integers; {self} is not a Markov triple"
        );
        self.with(slot, prod - e)
    }

    /// Vieta move written as `e ↦ (p² + q²)/e`, which avoids the subtraction.
    ///
    /// On the Markov equation `(p² + q²)/e = 3pq − e`, so both moves agree.
    pub fn vieta_ratio(&self, slot: Slot) -> Result<MarkovTriple> {
        let (e, p, q) = self.take(slot);
        let numerator = p * p + q * q;
        if e.is_zero() {
            return Err(Error::NotDivisible {
                numerator: numerator.to_string(),
                divisor: "0".into(),
            });
        }
        let (quot, rem) = numerator.div_rem(e);
        if !rem.is_zero() {
            return Err(Error::NotDivisible {
                numerator: numerator.to_string(),
                divisor: e.to_string(),
            });
        }
        Ok(self.with(slot, quot))
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

fn serialize_decimal_triple<S: Serializer>(
    entries: [&BigUint; 3],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(3))?;
    for e in entries {
        seq.serialize_element(&e.to_string())?;
    }
    seq.end()
}

fn deserialize_decimal_triple<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> Result<[BigUint; 3], D::Error> {
    let raw: [String; 3] = Deserialize::deserialize(deserializer)?;
    let mut out: [BigUint; 3] = Default::default();
    for (slot, s) in out.iter_mut().zip(raw.iter()) {
        *slot = s
            .parse()
            .map_err(|_| de::Error::custom(format!("`{s}` is not a decimal integer")))?;
    }
    Ok(out)
}

/// JSON form: an array of three decimal strings.
impl Serialize for MarkovTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_decimal_triple(self.entries(), serializer)
    }
}

impl<'de> Deserialize<'de> for MarkovTriple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y, z] = deserialize_decimal_triple(deserializer)?;
        Ok(MarkovTriple { x, y, z })
    }
}

/// Coprime `a + b = c`, stored as `a ≤ b < c` (except the root `1, 1, 2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EuclidTriple {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
}

impl EuclidTriple {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>, c: impl Into<BigUint>) -> Self {
        EuclidTriple {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn is_valid(&self) -> bool {
        &self.a + &self.b == self.c && self.a.gcd(&self.b).is_one()
    }

    pub fn entries(&self) -> [&BigUint; 3] {
        [&self.a, &self.b, &self.c]
    }
}

impl fmt::Display for EuclidTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Serialize for EuclidTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_decimal_triple(self.entries(), serializer)
    }
}

impl<'de> Deserialize<'de> for EuclidTriple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b, c] = deserialize_decimal_triple(deserializer)?;
        Ok(EuclidTriple { a, b, c })
    }
}

/// Root `(1, 1, 2)` followed by one triple per letter.
pub fn markov_path(word: &PathWord) -> Vec<MarkovTriple> {
    let three = BigUint::from(3u8);
    let (mut first, mut second, mut newest) = (BigUint::one(), BigUint::one(), BigUint::from(2u8));
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(MarkovTriple::new(
        first.clone(),
        second.clone(),
        newest.clone(),
    ));
    for turn in word.letters() {
        match turn {
            Turn::L => {
                let next = &three * &newest * &second - &first;
                first = std::mem::replace(&mut newest, next);
            }
            Turn::R => {
                let next = &three * &first * &newest - &second;
                second = std::mem::replace(&mut newest, next);
            }
        }
        out.push(MarkovTriple::new(first.clone(), second.clone(), newest.clone()).sorted());
    }
    out
}

/// Root `(1, 1, 2)` followed by one triple per letter; `c` is always the sum.
pub fn euclid_path(word: &PathWord) -> Vec<EuclidTriple> {
    let (mut first, mut second) = (BigUint::one(), BigUint::one());
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(EuclidTriple::new(1u8, 1u8, 2u8));
    for turn in word.letters() {
        let sum = &first + &second;
        match turn {
            Turn::L => first = sum,
            Turn::R => second = sum,
        }
        let (a, b) = if first <= second {
            (&first, &second)
        } else {
            (&second, &first)
        };
        out.push(EuclidTriple::new(a.clone(), b.clone(), a + b));
    }
    out
}

/// Natural logarithm of a big integer.
///
/// Values up to 64 bits go through `f64` directly; larger ones use the top
/// 64 bits and add `shift · ln 2`.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().expect("fits in 64 bits") as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("top 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(ln z_n)/n` for `n = 1, 2, …` over the given triples, `z_n` the max entry.
pub fn loglog_growth(triples: &[MarkovTriple]) -> Result<Vec<f64>> {
    let three = BigUint::from(3u8);
    triples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let z = t.max_entry();
            if z < &three {
                return Err(Error::Domain(format!(
                    "max entry {z} of triple {} is below 3",
                    i + 1
                )));
            }
            Ok(ln_big(z).ln() / (i + 1) as f64)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl RealTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        RealTriple { x, y, z }
    }
}

/// `|x² + y² + z² − xyz − 4| ≤ tol`.
pub fn is_cayley(t: RealTriple, tol: f64) -> bool {
    cayley_residual(t).abs() <= tol
}

pub fn cayley_residual(t: RealTriple) -> f64 {
    t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z - 4.0
}

/// Positive sheet: `(2 cosh a, 2 cosh b, 2 cosh(a + b))`.
pub fn cosh_param(a: f64, b: f64) -> RealTriple {
    RealTriple::new(2.0 * a.cosh(), 2.0 * b.cosh(), 2.0 * (a + b).cosh())
}

/// Middle component: `(2 cos a, 2 cos b, 2 cos(a + b))`.
pub fn cos_param(a: f64, b: f64) -> RealTriple {
    RealTriple::new(2.0 * a.cos(), 2.0 * b.cos(), 2.0 * (a + b).cos())
}

/// Determinant of the unit-diagonal symmetric matrix with off-diagonal
/// entries `x/2, y/2, z/2`, by cofactor expansion along the first row.
pub fn gram_det(t: RealTriple) -> f64 {
    let (p, q, r) = (t.x / 2.0, t.y / 2.0, t.z / 2.0);
    let m = [[1.0, p, q], [p, 1.0, r], [q, r, 1.0]];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, LN_2};

    fn mt(x: u64, y: u64, z: u64) -> MarkovTriple {
        MarkovTriple::new(x, y, z)
    }

    fn et(a: u64, b: u64, c: u64) -> EuclidTriple {
        EuclidTriple::new(a, b, c)
    }

    fn w(s: &str) -> PathWord {
        s.parse().unwrap()
    }

    #[test]
    fn markov_equation_examples() {
        assert!(mt(1, 1, 1).is_markov());
        assert!(mt(1, 2, 5).is_markov());
        assert!(!mt(1, 1, 3).is_markov());
    }

    #[test]
    fn vieta_examples() {
        assert_eq!(mt(1, 1, 1).vieta(Slot::Third), mt(1, 1, 2));
        assert_eq!(mt(1, 1, 2).vieta(Slot::Third), mt(1, 1, 1));
        assert_eq!(mt(1, 2, 5).vieta(Slot::First), mt(29, 2, 5));
    }

    #[test]
    fn vieta_ratio_examples() {
        assert_eq!(mt(1, 2, 5).vieta_ratio(Slot::Third).unwrap(), mt(1, 2, 1));
        assert_eq!(mt(1, 1, 1).vieta_ratio(Slot::Third).unwrap(), mt(1, 1, 2));
        assert_eq!(mt(2, 5, 29).vieta_ratio(Slot::Third).unwrap(), mt(2, 5, 1));
    }

    #[test]
    fn vieta_ratio_rejects_off_equation() {
        assert!(matches!(
            mt(1, 1, 3).vieta_ratio(Slot::Third),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            mt(1, 2, 0).vieta_ratio(Slot::Third),
            Err(Error::NotDivisible { .. })
        ));
    }

    #[test]
    fn slot_index_bounds() {
        assert_eq!(Slot::from_index(2).unwrap(), Slot::Second);
        assert!(Slot::from_index(0).is_err());
        assert!(Slot::from_index(4).is_err());
    }

    #[test]
    fn markov_path_examples() {
        assert_eq!(markov_path(&w("")), vec![mt(1, 1, 2)]);
        assert_eq!(markov_path(&w("L")), vec![mt(1, 1, 2), mt(1, 2, 5)]);
        // Repeating a direction keeps the smallest entry.
        assert_eq!(
            markov_path(&w("LL")),
            vec![mt(1, 1, 2), mt(1, 2, 5), mt(1, 5, 13)]
        );
        // Turning keeps the two largest.
        assert_eq!(
            markov_path(&w("LR")),
            vec![mt(1, 1, 2), mt(1, 2, 5), mt(2, 5, 29)]
        );
    }

    #[test]
    fn euclid_path_examples() {
        assert_eq!(euclid_path(&w("")), vec![et(1, 1, 2)]);
        assert_eq!(euclid_path(&w("L")), vec![et(1, 1, 2), et(1, 2, 3)]);
        assert_eq!(
            euclid_path(&w("LL")),
            vec![et(1, 1, 2), et(1, 2, 3), et(1, 3, 4)]
        );
        assert_eq!(
            euclid_path(&w("LR")),
            vec![et(1, 1, 2), et(1, 2, 3), et(2, 3, 5)]
        );
    }

    #[test]
    fn first_letter_is_symmetric_at_root() {
        assert_eq!(markov_path(&w("R"))[1], mt(1, 2, 5));
        assert_eq!(euclid_path(&w("R"))[1], et(1, 2, 3));
    }

    #[test]
    fn alternating_euclid_maxima_are_fibonacci() {
        // c_n = F_{n+3}; F_1 = F_2 = 1.
        let mut fib = vec![BigUint::from(0u8), BigUint::one()];
        for i in 2..40 {
            let next = &fib[i - 1] + &fib[i - 2];
            fib.push(next);
        }
        let path = euclid_path(&PathWord::alternating(Turn::L, 30));
        for (n, t) in path.iter().enumerate() {
            assert_eq!(t.c, fib[n + 3], "n = {n}");
        }
    }

    #[test]
    fn constant_euclid_path_grows_linearly() {
        for (k, t) in euclid_path(&PathWord::constant(Turn::R, 12))
            .iter()
            .enumerate()
        {
            assert_eq!(t.c, BigUint::from(k as u64 + 2));
        }
    }

    #[test]
    fn ln_big_matches_f64_and_large_values() {
        for v in [3u64, 89, 1 << 40, u64::MAX] {
            let got = ln_big(&BigUint::from(v));
            assert!((got - (v as f64).ln()).abs() <= 1e-12 * (v as f64).ln());
        }
        // 10^300 = 2^k · m ; compare with 300 ln 10.
        let big = BigUint::from(10u8).pow(300);
        let expect = 300.0 * 10f64.ln();
        assert!((ln_big(&big) - expect).abs() / expect < 1e-12);
        let huge = BigUint::one() << 100_000usize;
        let expect = 100_000.0 * LN_2;
        assert!((ln_big(&huge) - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn loglog_growth_examples() {
        let v = loglog_growth(&[mt(1, 2, 5)]).unwrap();
        assert!((v[0] - 5f64.ln().ln()).abs() < 1e-15);
        assert!((v[0] - 0.4759).abs() < 1e-4);
        let v = loglog_growth(&[mt(1, 1, 3)]).unwrap();
        assert!((v[0] - 0.0940).abs() < 1e-4);
        // z = 89 placed fifth.
        let seq = [
            mt(1, 2, 5),
            mt(1, 5, 13),
            mt(1, 13, 34),
            mt(1, 34, 89),
            mt(1, 34, 89),
        ];
        let v = loglog_growth(&seq).unwrap();
        assert!((v[4] - 0.3003).abs() < 1e-4);
    }

    #[test]
    fn loglog_growth_domain() {
        assert!(matches!(
            loglog_growth(&[mt(1, 2, 5), mt(1, 1, 2)]),
            Err(Error::Domain(_))
        ));
        assert!(loglog_growth(&[]).unwrap().is_empty());
    }

    #[test]
    fn cayley_examples() {
        assert!(is_cayley(RealTriple::new(2.0, 2.0, 2.0), 0.0));
        assert!(is_cayley(RealTriple::new(0.0, 0.0, 2.0), 0.0));
        assert!(!is_cayley(RealTriple::new(1.0, 1.0, 1.0), 1e-9));
    }

    #[test]
    fn cosh_param_examples() {
        assert_eq!(cosh_param(0.0, 0.0), RealTriple::new(2.0, 2.0, 2.0));
        let t = cosh_param(LN_2, 0.0);
        assert!((t.x - 2.5).abs() < 1e-15 && t.y == 2.0 && (t.z - 2.5).abs() < 1e-15);
        let t = cosh_param(1.0, 1.0);
        assert!((t.z - 2.0 * 2f64.cosh()).abs() < 1e-15);
        assert!(is_cayley(t, 1e-9));
    }

    #[test]
    fn cos_param_examples() {
        assert_eq!(cos_param(0.0, 0.0), RealTriple::new(2.0, 2.0, 2.0));
        let t = cos_param(FRAC_PI_2, FRAC_PI_2);
        assert!(t.x.abs() < 1e-15 && t.y.abs() < 1e-15 && (t.z + 2.0).abs() < 1e-15);
        let t = cos_param(FRAC_PI_3, FRAC_PI_3);
        assert!((t.x - 1.0).abs() < 1e-15 && (t.z + 1.0).abs() < 1e-15);
        assert!(is_cayley(t, 1e-9));
    }

    #[test]
    fn gram_det_examples() {
        assert_eq!(gram_det(RealTriple::new(0.0, 0.0, 0.0)), 1.0);
        assert_eq!(gram_det(RealTriple::new(2.0, 2.0, 2.0)), 0.0);
        assert!((gram_det(RealTriple::new(1.0, 1.0, 1.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gram_det_matches_closed_form() {
        // Two algebraic routes: cofactor expansion vs 1 − Σx²/4 + xyz/4.
        for &(x, y, z) in &[
            (0.3, -1.2, 1.9),
            (2.5, 0.0, -0.7),
            (-2.0, 2.0, 1.0),
            (7.0, 3.0, -4.0),
        ] {
            let closed = 1.0 - (x * x + y * y + z * z) / 4.0 + x * y * z / 4.0;
            assert!((gram_det(RealTriple::new(x, y, z)) - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn markov_triple_json_is_decimal_strings() {
        let t = mt(1, 2, 5);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"["1","2","5"]"#);
        let back: MarkovTriple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<MarkovTriple>(r#"["1","x","5"]"#).is_err());
    }

    #[test]
    fn path_word_parsing() {
        assert_eq!(w("LRL").to_string(), "LRL");
        assert!("LXR".parse::<PathWord>().is_err());
        assert_eq!(w("LRR").swapped(), w("RLL"));
        assert_eq!(PathWord::alternating(Turn::R, 5), w("RLRLR"));
    }
}
