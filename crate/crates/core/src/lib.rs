//! Tropical Cayley–Markov dynamics.
//!
//! The crate collects the pieces needed to study the piecewise-linear
//! "tropical" Markov action on the surface of the regular tetrahedron
//! `T = {Ψ = 2}` and its folding from the torus `R²/(2Z)²`:
//!
//! * [`classical`]: big-integer Markov and Euclid trees, Vieta moves and the
//!   smooth Cayley cubic parametrizations.
//! * [`tropical`]: the piecewise-linear maps `σ`, `ρ`, the tropical Markov
//!   step and the invariants `Φ`, `Ψ`, all in exact rational arithmetic.
//! * [`torus`]: the triangle-wave cosine, the 2-to-1 fold of the torus onto
//!   `T`, integer matrix actions and the induced map on `T`.
//! * [`farey`]: continued fractions, Farey mediants, `SL₂(N)` path matrices
//!   and the three estimators of the tree Lyapunov exponent `Λ(ξ)`.
//! * [`ergodic`]: orbits, Benettin Lyapunov estimation, Birkhoff averages,
//!   box discrepancy, periodicity of rational orbits and orbit export.
//! * [`verify`]: the exact property suites driven by the `verify` command.
//!
//! Exact work is done over [`Rat`]; long statistical orbits use `f64`. Both
//! implement [`Scalar`], so the geometric maps are written once.

pub mod classical;
pub mod cli;
pub mod ergodic;
pub mod error;
pub mod farey;
pub mod sample;
pub mod scalar;
pub mod torus;
pub mod tropical;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Mode, Rat, Scalar};
