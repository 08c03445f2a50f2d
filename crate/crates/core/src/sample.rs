//! Seeded sampling of rational test points.
//!
//! All randomness goes through [`XorShiftRng`] seeded from a `u64`, so every
//! suite and statistical run is bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

use crate::classical::{PathWord, Turn};
use crate::scalar::{rat, Rat};
use crate::torus::{fold, IntMatrix2, TorusPoint};
use crate::tropical::{Generator, GeneratorWord, TropPoint3};

pub const DEFAULT_SEED: u64 = 0x5EED;

pub fn rng(seed: u64) -> XorShiftRng {
    XorShiftRng::seed_from_u64(seed)
}

/// Uniform numerator over `[-bound, bound]` for a denominator in `1..=max_den`.
pub fn random_rat<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rat {
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(-bound * den..=bound * den);
    rat(num, den)
}

pub fn random_point3<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> TropPoint3 {
    TropPoint3::new(
        random_rat(rng, bound, max_den),
        random_rat(rng, bound, max_den),
        random_rat(rng, bound, max_den),
    )
}

pub fn random_torus_point<R: Rng>(rng: &mut R, max_den: i64) -> TorusPoint {
    TorusPoint::new(random_rat(rng, 1, max_den), random_rat(rng, 1, max_den))
}

/// A rational point on `Ψ = 2`, obtained by folding a torus point.
pub fn random_surface_point<R: Rng>(rng: &mut R, max_den: i64) -> TropPoint3 {
    fold(random_torus_point(rng, max_den))
}

pub fn random_generator_word<R: Rng>(rng: &mut R, max_len: usize) -> GeneratorWord {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Generator::S
            } else {
                Generator::R
            }
        })
        .collect()
}

pub fn random_path_word<R: Rng>(rng: &mut R, max_len: usize) -> PathWord {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Turn::L
            } else {
                Turn::R
            }
        })
        .collect()
}

/// Ten fixed hyperbolic elements of `SL₂(Z)` used by the suites.
pub fn hyperbolic_matrices() -> Vec<IntMatrix2> {
    [
        (2, 1, 1, 1),
        (1, 1, 1, 2),
        (3, 2, 1, 1),
        (2, 3, 1, 2),
        (5, 2, 2, 1),
        (1, 3, 1, 4),
        (3, 1, -1, 0),
        (4, 1, 3, 1),
        (-3, 1, -1, 0),
        (1, 2, 1, 3),
    ]
    .into_iter()
    .map(|(a, b, c, d)| IntMatrix2::new(a, b, c, d).expect("unimodular"))
    .filter(IntMatrix2::is_hyperbolic)
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::tropical::{on_surface, psi};

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<Rat> = (0..20)
            .scan(rng(7), |r, _| Some(random_rat(r, 3, 9)))
            .collect();
        let b: Vec<Rat> = (0..20)
            .scan(rng(7), |r, _| Some(random_rat(r, 3, 9)))
            .collect();
        let c: Vec<Rat> = (0..20)
            .scan(rng(8), |r, _| Some(random_rat(r, 3, 9)))
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_respect_bounds() {
        let mut r = rng(DEFAULT_SEED);
        for _ in 0..500 {
            let x = random_rat(&mut r, 3, 9);
            assert!(x.abs() <= rat(3, 1) && *x.denom() <= 9);
            let p = random_surface_point(&mut r, 12);
            assert!(on_surface(p, Rat::two()));
            assert_eq!(psi(p), Rat::two());
        }
    }

    #[test]
    fn ten_hyperbolic_matrices() {
        let ms = hyperbolic_matrices();
        assert_eq!(ms.len(), 10);
        assert!(ms.iter().all(IntMatrix2::is_hyperbolic));
    }
}
