//! Piecewise-linear Markov dynamics.
//!
//! Two systems live here. The tropical Markov step
//! `(X, Y, Z) ↦ (X, Y, max(2X, 2Y) − Z)` with invariant `Φ`, and the
//! Cayley–Markov action generated by the involution `σ` and the cyclic shift
//! `ρ`, which preserves `Ψ` and hence every tetrahedron surface `Ψ = c`.

use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{max3, max4, Rat, Scalar};

/// Right-hand side of the tropical Cayley equation.
pub const SURFACE_LEVEL: i64 = 2;

/// A point `(u, v, w)`; in the tropical Markov context read as `(X, Y, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TropPoint3<S = Rat> {
    pub u: S,
    pub v: S,
    pub w: S,
}

impl<S: Scalar> TropPoint3<S> {
    pub fn new(u: S, v: S, w: S) -> Self {
        TropPoint3 { u, v, w }
    }

    pub fn scale(self, k: S) -> Self {
        TropPoint3::new(self.u * k, self.v * k, self.w * k)
    }

    /// Largest coordinate-wise distance.
    pub fn max_abs_diff(&self, other: &Self) -> S {
        max3(
            (self.u - other.u).abs(),
            (self.v - other.v).abs(),
            (self.w - other.w).abs(),
        )
    }

    pub fn near(&self, other: &Self) -> bool {
        self.u.near(other.u) && self.v.near(other.v) && self.w.near(other.w)
    }

    pub fn fields(&self) -> [String; 3] {
        [self.u.to_field(), self.v.to_field(), self.w.to_field()]
    }
}

impl TropPoint3<Rat> {
    pub fn from_ints(u: i64, v: i64, w: i64) -> Self {
        TropPoint3::new(
            Rat::from_integer(u),
            Rat::from_integer(v),
            Rat::from_integer(w),
        )
    }

    pub fn to_f64(&self) -> TropPoint3<f64> {
        TropPoint3::new(self.u.to_f64(), self.v.to_f64(), self.w.to_f64())
    }
}

impl<S: Scalar> fmt::Display for TropPoint3<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v, w] = self.fields();
        write!(f, "{u},{v},{w}")
    }
}

/// JSON form: a triple of strings (`p/q` in exact mode).
impl<S: Scalar> Serialize for TropPoint3<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        for field in self.fields() {
            seq.serialize_element(&field)?;
        }
        seq.end()
    }
}

/// `(X, Y, Z) ↦ (X, Y, max(2X, 2Y) − Z)`.
pub fn trop_markov_step<S: Scalar>(p: TropPoint3<S>) -> TropPoint3<S> {
    let m = (S::two() * p.u).max(S::two() * p.v);
    TropPoint3::new(p.u, p.v, m - p.w)
}

/// `Φ = max(X − Y − Z, Y − X − Z, Z − X − Y)`.
pub fn phi<S: Scalar>(p: TropPoint3<S>) -> S {
    let (x, y, z) = (p.u, p.v, p.w);
    max3(x - y - z, y - x - z, z - x - y)
}

/// The folding function of the tropical Vieta involution.
///
/// ```text
///  v   if  u ≥ |v|
///  u   if  v ≥ |u|
/// −v   if −u ≥ |v|
/// −u   if −v ≥ |u|
/// ```
pub fn f<S: Scalar>(u: S, v: S) -> S {
    if u >= v.abs() {
        v
    } else if v >= u.abs() {
        u
    } else if -u >= v.abs() {
        -v
    } else {
        debug_assert!(-v >= u.abs());
        -u
    }
}

/// Tropical Vieta involution `(u, v, w) ↦ (u, v, 2f(u, v) − w)`.
pub fn sigma<S: Scalar>(p: TropPoint3<S>) -> TropPoint3<S> {
    TropPoint3::new(p.u, p.v, S::two() * f(p.u, p.v) - p.w)
}

/// Cyclic shift `(u, v, w) ↦ (v, w, u)`.
pub fn rho<S: Scalar>(p: TropPoint3<S>) -> TropPoint3<S> {
    TropPoint3::new(p.v, p.w, p.u)
}

/// `Ψ = max(−u + v + w, u − v + w, u + v − w, −u − v − w)`.
pub fn psi<S: Scalar>(p: TropPoint3<S>) -> S {
    let (u, v, w) = (p.u, p.v, p.w);
    max4(-u + v + w, u - v + w, u + v - w, -u - v - w)
}

/// `Ψ(p) = c` (exact for rationals). The level `c` should be positive.
pub fn on_surface<S: Scalar>(p: TropPoint3<S>, c: S) -> bool {
    psi(p).near(c)
}

/// Vertices `(c,c,c), (c,−c,−c), (−c,c,−c), (−c,−c,c)` of the level set `Ψ = c`.
pub fn vertices<S: Scalar>(c: S) -> [TropPoint3<S>; 4] {
    [
        TropPoint3::new(c, c, c),
        TropPoint3::new(c, -c, -c),
        TropPoint3::new(-c, c, -c),
        TropPoint3::new(-c, -c, c),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// The involution `σ`.
    S,
    /// The cyclic shift `ρ`.
    R,
}

/// A word over `{s, r}`, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GeneratorWord(Vec<Generator>);

impl GeneratorWord {
    pub fn new(letters: Vec<Generator>) -> Self {
        GeneratorWord(letters)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Generator> for GeneratorWord {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        GeneratorWord(iter.into_iter().collect())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                's' => Ok(Generator::S),
                'r' => Ok(Generator::R),
                other => Err(Error::parse(format!(
                    "generator words use only s and r, found `{other}`"
                ))),
            })
            .collect()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            f.write_str(match g {
                Generator::S => "s",
                Generator::R => "r",
            })?;
        }
        Ok(())
    }
}

pub fn apply_word<S: Scalar>(p: TropPoint3<S>, word: &GeneratorWord) -> TropPoint3<S> {
    word.letters().iter().fold(p, |q, g| match g {
        Generator::S => sigma(q),
        Generator::R => rho(q),
    })
}

/// Sheet of the double cover `T → square` a point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> i8 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

/// Projection to the `(u, v)` square plus the sheet, the sign of `w − f(u, v)`.
///
/// Points on the fold edges (`w = f(u, v)`) are tagged [`Branch::Plus`];
/// `σ` fixes them.
pub fn project_uv<S: Scalar>(p: TropPoint3<S>, c: S) -> Result<(S, S, Branch)> {
    if !on_surface(p, c) {
        return Err(Error::NotOnSurface {
            point: p.to_string(),
            level: c.to_field(),
        });
    }
    let branch = if p.w - f(p.u, p.v) >= S::zero() {
        Branch::Plus
    } else {
        Branch::Minus
    };
    Ok((p.u, p.v, branch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(u: i64, v: i64, w: i64) -> TropPoint3 {
        TropPoint3::from_ints(u, v, w)
    }

    fn r(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn trop_markov_step_examples() {
        assert_eq!(trop_markov_step(p(0, 0, 0)), p(0, 0, 0));
        assert_eq!(trop_markov_step(p(1, 2, 3)), p(1, 2, 1));
        assert_eq!(trop_markov_step(p(1, 1, 2)), p(1, 1, 0));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(p(1, 1, 2)), r(0));
        assert_eq!(phi(p(0, 0, 0)), r(0));
        assert_eq!(phi(p(1, 1, 1)), r(-1));
    }

    #[test]
    fn phi_zero_on_euclid_triples() {
        for (a, b) in [(1, 2), (2, 3), (3, 5), (5, 7), (4, 9)] {
            assert_eq!(phi(p(a, b, a + b)), r(0));
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f(r(2), r(1)), r(1));
        assert_eq!(f(r(1), r(2)), r(1));
        assert_eq!(f(r(-2), r(1)), r(-1));
        assert_eq!(f(r(0), r(0)), r(0));
        assert_eq!(f(r(1), r(-2)), r(-1));
        assert_eq!(f(r(-1), r(-2)), r(1));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(p(2, 2, 2)), p(2, 2, 2));
        assert_eq!(sigma(p(0, 0, 2)), p(0, 0, -2));
        assert_eq!(sigma(p(2, 1, 1)), p(2, 1, 1));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(p(1, 2, 3)), p(2, 3, 1));
        let q = p(5, -1, 0);
        assert_eq!(rho(rho(rho(q))), q);
        assert_eq!(psi(rho(p(2, 0, 0))), psi(p(2, 0, 0)));
        assert_eq!(psi(p(2, 0, 0)), r(2));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(p(2, 2, 2)), r(2));
        assert_eq!(psi(p(0, 0, 0)), r(0));
        assert_eq!(psi(p(1, 0, 0)), r(1));
    }

    #[test]
    fn on_surface_examples() {
        assert!(on_surface(p(2, 2, 2), r(2)));
        assert!(!on_surface(p(0, 0, 0), r(2)));
        assert!(on_surface(p(0, 0, -2), r(2)));
    }

    #[test]
    fn apply_word_examples() {
        let q = TropPoint3::new(rat(1, 3), rat(-2, 5), r(1));
        assert_eq!(apply_word(q, &"".parse().unwrap()), q);
        assert_eq!(apply_word(p(0, 0, 2), &"ss".parse().unwrap()), p(0, 0, 2));
        assert_eq!(apply_word(p(2, 0, 0), &"rrr".parse().unwrap()), p(2, 0, 0));
        assert_eq!(
            apply_word(p(0, 0, 2), &"sr".parse().unwrap()),
            rho(sigma(p(0, 0, 2)))
        );
    }

    #[test]
    fn project_uv_examples() {
        let two = r(2);
        assert_eq!(
            project_uv(p(0, 0, 2), two).unwrap(),
            (r(0), r(0), Branch::Plus)
        );
        assert_eq!(
            project_uv(p(0, 0, -2), two).unwrap(),
            (r(0), r(0), Branch::Minus)
        );
        assert_eq!(
            project_uv(p(2, 2, 2), two).unwrap(),
            (r(2), r(2), Branch::Plus)
        );
        assert!(matches!(
            project_uv(p(1, 1, 1), two),
            Err(Error::NotOnSurface { .. })
        ));
    }

    #[test]
    fn sigma_swaps_sheets() {
        let two = r(2);
        let q = TropPoint3::new(rat(1, 1), rat(2, 3), rat(-1, 3));
        assert!(on_surface(q, two));
        let (u, v, b) = project_uv(q, two).unwrap();
        let (u2, v2, b2) = project_uv(sigma(q), two).unwrap();
        assert_eq!((u, v), (u2, v2));
        assert_ne!(b, b2);
    }

    #[test]
    fn vertices_on_surface_and_permuted() {
        for c in [rat(1, 3), r(2), r(7)] {
            let vs = vertices(c);
            for v in vs {
                assert!(on_surface(v, c));
                assert!(vs.contains(&rho(v)));
                assert!(vs.contains(&sigma(v)));
            }
        }
    }

    #[test]
    fn generator_word_parse() {
        let w: GeneratorWord = "srrs".parse().unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "srrs");
        assert!("sx".parse::<GeneratorWord>().is_err());
    }

    #[test]
    fn point_serialization() {
        let q = TropPoint3::new(rat(1, 2), r(-2), r(0));
        assert_eq!(q.to_string(), "1/2,-2/1,0/1");
        assert_eq!(
            serde_json::to_string(&q).unwrap(),
            r#"["1/2","-2/1","0/1"]"#
        );
    }
}
