//! Scalars shared by the exact and floating code paths.
//!
//! [`Rat`] is the default: every piecewise-linear map in this crate uses only
//! `max`, sign changes, doubling and integer combinations, so rational inputs
//! stay rational with bounded denominators. `f64` is used for long orbits
//! started at "irrational" points, where equality is replaced by a tolerance.

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = Ratio<i64>;

/// Representation mode of a point or orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::parse(format!(
                "unknown mode `{other}` (expected exact|float)"
            ))),
        }
    }
}

pub trait Scalar:
    Copy
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_i64(n: i64) -> Self;

    fn abs(self) -> Self;

    /// Largest integer not above `self`, as a scalar.
    fn floor(self) -> Self;

    fn half(self) -> Self;

    fn to_f64(self) -> f64;

    /// Equality for exact scalars, `|a - b| <= 1e-9` for floats.
    fn near(self, other: Self) -> bool;

    /// Text form used in CSV/JSON output (`p/q` for rationals).
    fn to_field(&self) -> String;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn two() -> Self {
        Self::from_i64(2)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Float tolerance behind [`Scalar::near`] for `f64`.
pub const FLOAT_TOL: f64 = 1e-9;

impl Scalar for Rat {
    const MODE: Mode = Mode::Exact;

    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn abs(self) -> Self {
        Signed::abs(&self)
    }

    fn floor(self) -> Self {
        Ratio::floor(&self)
    }

    fn half(self) -> Self {
        self / 2
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn near(self, other: Self) -> bool {
        self == other
    }

    fn to_field(&self) -> String {
        format_rat(self)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn floor(self) -> Self {
        f64::floor(self)
    }

    fn half(self) -> Self {
        0.5 * self
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn near(self, other: Self) -> bool {
        (self - other).abs() <= FLOAT_TOL
    }

    fn to_field(&self) -> String {
        format!("{self}")
    }
}

/// Canonical representative of `x` modulo 2 in `[-1, 1)`.
pub fn wrap2<S: Scalar>(x: S) -> S {
    let turns = (x + S::one()).half().floor();
    let mut r = x - turns * S::two();
    // Only reachable through float rounding; exact arithmetic lands in range.
    if r >= S::one() {
        r = r - S::two();
    } else if r < -S::one() {
        r = r + S::two();
    }
    r
}

pub fn max3<S: Scalar>(a: S, b: S, c: S) -> S {
    a.max(b).max(c)
}

pub fn max4<S: Scalar>(a: S, b: S, c: S, d: S) -> S {
    a.max(b).max(c).max(d)
}

/// Always `p/q`, including integers (`2/1`).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad numerator in `{s}`")))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| Error::parse(format!("bad denominator in `{s}`")))?;
            if q == 0 {
                return Err(Error::parse(format!("zero denominator in `{s}`")));
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(
            s.parse()
                .map_err(|_| Error::parse(format!("bad rational `{s}`")))?,
        ),
    };
    Ok(parsed)
}

pub fn rat(p: i64, q: i64) -> Rat {
    Ratio::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_rational_into_half_open_interval() {
        assert_eq!(wrap2(rat(3, 2)), rat(-1, 2));
        assert_eq!(wrap2(rat(1, 1)), rat(-1, 1));
        assert_eq!(wrap2(rat(-1, 1)), rat(-1, 1));
        assert_eq!(wrap2(rat(5, 2)), rat(1, 2));
        assert_eq!(wrap2(rat(-3, 1)), rat(-1, 1));
        assert_eq!(wrap2(rat(-7, 3)), rat(-1, 3));
        assert_eq!(wrap2(rat(0, 1)), rat(0, 1));
    }

    #[test]
    fn wrap_float_stays_in_range() {
        for x in [
            -5.0,
            -1.0,
            -0.999_999_999_999,
            0.0,
            0.5,
            1.0,
            2.999_999,
            1e6 + 0.25,
        ] {
            let r = wrap2(x);
            assert!((-1.0..1.0).contains(&r), "{x} -> {r}");
            let turns = (x - r) / 2.0;
            assert!((turns - turns.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(format_rat(&rat(2, 1)), "2/1");
        assert_eq!(format_rat(&rat(-4, 6)), "-2/3");
        assert_eq!(parse_rat("-2/3").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat(" 4 ").unwrap(), rat(4, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}
