//! The torus `R²/(2Z)²`, its fold onto the tetrahedron surface and the
//! integer-matrix actions that descend to it.
//!
//! The fold is `(φ, ψ) ↦ (2cos_T φ, 2cos_T ψ, 2cos_T(φ + ψ))` with `cos_T` the
//! period-2 triangle wave. It identifies `t` with `−t`, so any matrix action
//! commuting with `−id` induces a well-defined map on `T`.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{wrap2, Rat, Scalar};
use crate::tropical::{apply_word, on_surface, Generator, GeneratorWord, TropPoint3};

/// A point of the torus, stored by its canonical representative in `[−1, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusPoint<S = Rat> {
    phi: S,
    psi: S,
}

/// The centrally symmetric point `−t`.
impl<S: Scalar> Neg for TorusPoint<S> {
    type Output = Self;

    fn neg(self) -> Self {
        TorusPoint::new(-self.phi, -self.psi)
    }
}

impl<S: Scalar> TorusPoint<S> {
    pub fn new(phi: S, psi: S) -> Self {
        TorusPoint {
            phi: wrap2(phi),
            psi: wrap2(psi),
        }
    }

    pub fn phi(&self) -> S {
        self.phi
    }

    pub fn psi(&self) -> S {
        self.psi
    }

    pub fn near(&self, other: &Self) -> bool {
        self.phi.near(other.phi) && self.psi.near(other.psi)
    }

    pub fn fields(&self) -> [String; 2] {
        [self.phi.to_field(), self.psi.to_field()]
    }
}

impl TorusPoint<Rat> {
    pub fn to_f64(&self) -> TorusPoint<f64> {
        TorusPoint::new(self.phi.to_f64(), self.psi.to_f64())
    }
}

impl<S: Scalar> fmt::Display for TorusPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.fields();
        write!(f, "{a},{b}")
    }
}

/// A 2×2 integer matrix with determinant ±1 (row-major `[[a, b], [c, d]]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const NEG_IDENTITY: IntMatrix2 = IntMatrix2 {
        a: -1,
        b: 0,
        c: 0,
        d: -1,
    };
    /// Arnold's cat map.
    pub const CAT: IntMatrix2 = IntMatrix2 {
        a: 2,
        b: 1,
        c: 1,
        d: 1,
    };
    /// Lift of the involution `σ`.
    pub const SIGMA: IntMatrix2 = IntMatrix2 {
        a: 1,
        b: 0,
        c: 0,
        d: -1,
    };
    /// Lift of the cyclic shift `ρ`.
    pub const RHO: IntMatrix2 = IntMatrix2 {
        a: 0,
        b: 1,
        c: -1,
        d: -1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 && det != -1 {
            return Err(Error::InvalidDeterminant(det));
        }
        Ok(IntMatrix2 { a, b, c, d })
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Always ±1; evaluated in `i128` so large entries cannot overflow.
    pub fn det(&self) -> i64 {
        (self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128) as i64
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// `det = 1` and `|tr| > 2`.
    pub fn is_hyperbolic(&self) -> bool {
        self.det() == 1 && self.trace().abs() > 2
    }

    pub fn checked_mul(&self, rhs: &IntMatrix2) -> Option<IntMatrix2> {
        let dot = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(IntMatrix2 {
            a: dot(self.a, rhs.a, self.b, rhs.c)?,
            b: dot(self.a, rhs.b, self.b, rhs.d)?,
            c: dot(self.c, rhs.a, self.d, rhs.c)?,
            d: dot(self.c, rhs.b, self.d, rhs.d)?,
        })
    }

    pub fn checked_pow(&self, n: u32) -> Option<IntMatrix2> {
        (0..n).try_fold(IntMatrix2::IDENTITY, |acc, _| acc.checked_mul(self))
    }

    pub fn transpose(&self) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }
}

impl Mul for IntMatrix2 {
    type Output = IntMatrix2;

    /// Panics on `i64` overflow; use [`IntMatrix2::checked_mul`] for long products.
    fn mul(self, rhs: IntMatrix2) -> IntMatrix2 {
        self.checked_mul(&rhs)
            .expect("IntMatrix2 product overflowed i64")
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Command-line form `a,b,c,d`.
impl FromStr for IntMatrix2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::parse(format!("bad matrix entry `{x}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts[..] {
            [a, b, c, d] => IntMatrix2::new(a, b, c, d),
            _ => Err(Error::parse(format!(
                "matrix needs four entries a,b,c,d, got `{s}`"
            ))),
        }
    }
}

/// JSON form `[[a,b],[c,d]]`.
impl Serialize for IntMatrix2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[i64; 2]; 2]>::deserialize(deserializer)?;
        IntMatrix2::new(a, b, c, d).map_err(de::Error::custom)
    }
}

/// Triangle wave: `1 − 2|x|` on `[−1, 1]`, extended with period 2.
pub fn cos_t<S: Scalar>(x: S) -> S {
    S::one() - S::two() * wrap2(x).abs()
}

/// Inverse of `u = 2 cos_T φ` on the branch `φ ∈ [0, 1]`: `φ = (2 − u)/4`.
pub fn acos_t<S: Scalar>(u: S) -> Result<S> {
    if u.abs() > S::two() {
        return Err(Error::Domain(format!(
            "{} is outside [-2, 2]",
            u.to_field()
        )));
    }
    Ok((S::two() - u).half().half())
}

pub fn fold<S: Scalar>(t: TorusPoint<S>) -> TropPoint3<S> {
    let two = S::two();
    TropPoint3::new(
        two * cos_t(t.phi),
        two * cos_t(t.psi),
        two * cos_t(t.phi + t.psi),
    )
}

/// Both preimages `{t, −t}` of a surface point, or one at the four vertices.
///
/// When the pair is genuine, the representative with `ψ ≥ 0` comes first.
pub fn unfold<S: Scalar>(p: TropPoint3<S>) -> Result<Vec<TorusPoint<S>>> {
    let two = S::two();
    let not_on_surface = || Error::NotOnSurface {
        point: p.to_string(),
        level: two.to_field(),
    };
    if !on_surface(p, two) {
        return Err(not_on_surface());
    }
    let phi = acos_t(p.u)?;
    let psi = acos_t(p.v)?;
    let plus = TorusPoint::new(phi, psi);
    let minus = TorusPoint::new(phi, -psi);
    let miss = |t: &TorusPoint<S>| (fold(*t).w - p.w).abs();
    let t = if miss(&plus) <= miss(&minus) {
        plus
    } else {
        minus
    };
    if !fold(t).w.near(p.w) {
        return Err(not_on_surface());
    }
    let other = -t;
    if other.near(&t) {
        return Ok(vec![t]);
    }
    let t_first = t.psi > other.psi || (t.psi == other.psi && t.phi >= other.phi);
    Ok(if t_first {
        vec![t, other]
    } else {
        vec![other, t]
    })
}

/// `(φ, ψ) ↦ (aφ + bψ, cφ + dψ)` modulo 2.
pub fn torus_act<S: Scalar>(m: &IntMatrix2, t: TorusPoint<S>) -> TorusPoint<S> {
    let k = S::from_i64;
    TorusPoint::new(
        k(m.a) * t.phi + k(m.b) * t.psi,
        k(m.c) * t.phi + k(m.d) * t.psi,
    )
}

/// The map on `T` covered by `m`: fold the image of either preimage.
pub fn induced_map<S: Scalar>(m: &IntMatrix2, p: TropPoint3<S>) -> Result<TropPoint3<S>> {
    let pre = unfold(p)?;
    Ok(fold(torus_act(m, pre[0])))
}

/// Lift of a generator word: `s ↦ diag(1, −1)`, `r ↦ [[0, 1], [−1, −1]]`.
///
/// Letters act left to right, so the product is `G_n ⋯ G_1`; then
/// `fold ∘ torus_act(M) = apply_word(·, w) ∘ fold`.
pub fn word_to_matrix(word: &GeneratorWord) -> IntMatrix2 {
    word.letters().iter().fold(IntMatrix2::IDENTITY, |acc, g| {
        let gen = match g {
            Generator::S => IntMatrix2::SIGMA,
            Generator::R => IntMatrix2::RHO,
        };
        gen * acc
    })
}

/// Largest coordinate deviation between the two routes around the
/// semi-conjugacy square; zero over an empty sample set.
pub fn semiconj_residual<S: Scalar>(word: &GeneratorWord, samples: &[TorusPoint<S>]) -> S {
    let m = word_to_matrix(word);
    samples.iter().fold(S::zero(), |worst, &t| {
        let via_torus = fold(torus_act(&m, t));
        let via_surface = apply_word(fold(t), word);
        worst.max(via_torus.max_abs_diff(&via_surface))
    })
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &IntMatrix2) -> f64 {
    let tr = m.trace().abs() as f64;
    if m.det() == 1 {
        if tr > 2.0 {
            (tr + (tr * tr - 4.0).sqrt()) / 2.0
        } else {
            1.0
        }
    } else {
        (tr + (tr * tr + 4.0).sqrt()) / 2.0
    }
}

/// `ln ρ(M)` for hyperbolic `M ∈ SL₂(Z)`; the Lyapunov exponent and entropy
/// of the toral automorphism.
pub fn entropy(m: &IntMatrix2) -> Result<f64> {
    if !m.is_hyperbolic() {
        return Err(Error::NotHyperbolic {
            trace: m.trace(),
            det: m.det(),
        });
    }
    Ok(spectral_radius(m).ln())
}
