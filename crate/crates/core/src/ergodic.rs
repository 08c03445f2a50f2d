//! Orbits of toral automorphisms and their folded images on `T`.
//!
//! The statistics here are the desk-scale face of ergodicity: Benettin
//! estimates of the Lyapunov exponent, Birkhoff averages of box indicators
//! and grid discrepancy. Exact rational orbits are periodic, which
//! [`period_detect`] witnesses.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Rat, Scalar};
use crate::torus::{entropy, fold, torus_act, IntMatrix2, TorusPoint};
use crate::tropical::{psi, TropPoint3};

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitPoints<S = Rat> {
    Torus(Vec<TorusPoint<S>>),
    Folded(Vec<TropPoint3<S>>),
}

/// `points` are the iterates `M¹x, …, Mⁿx`; the start is kept separately.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitRecord<S = Rat> {
    pub matrix: IntMatrix2,
    pub start: TorusPoint<S>,
    pub points: OrbitPoints<S>,
}

impl<S: Scalar> OrbitRecord<S> {
    pub fn mode(&self) -> Mode {
        S::MODE
    }

    pub fn len(&self) -> usize {
        match &self.points {
            OrbitPoints::Torus(p) => p.len(),
            OrbitPoints::Folded(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_folded(&self) -> bool {
        matches!(self.points, OrbitPoints::Folded(_))
    }

    pub fn torus_points(&self) -> Option<&[TorusPoint<S>]> {
        match &self.points {
            OrbitPoints::Torus(p) => Some(p),
            OrbitPoints::Folded(_) => None,
        }
    }

    pub fn folded_points(&self) -> Option<&[TropPoint3<S>]> {
        match &self.points {
            OrbitPoints::Folded(p) => Some(p),
            OrbitPoints::Torus(_) => None,
        }
    }
}

pub fn orbit<S: Scalar>(
    m: &IntMatrix2,
    start: TorusPoint<S>,
    n: usize,
    folded: bool,
) -> OrbitRecord<S> {
    let iterates = std::iter::successors(Some(start), |&t| Some(torus_act(m, t)))
        .skip(1)
        .take(n);
    let points = if folded {
        OrbitPoints::Folded(iterates.map(fold).collect())
    } else {
        OrbitPoints::Torus(iterates.collect())
    };
    OrbitRecord {
        matrix: *m,
        start,
        points,
    }
}

/// Largest `|Ψ − 2|` over folded points; zero for an empty slice.
pub fn surface_residual<S: Scalar>(points: &[TropPoint3<S>]) -> f64 {
    points
        .iter()
        .map(|&p| (psi(p) - S::two()).to_f64().abs())
        .fold(0.0, f64::max)
}

/// Fixed "generic" float starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedStart {
    /// `(√2 − 1, √3 − 1)`
    Sqrt2,
    /// `(√3 − 1, √5 − 2)`
    Sqrt3,
    /// `(φ − 1, √2 − 1)`
    Golden,
}

impl NamedStart {
    pub const ALL: [NamedStart; 3] = [NamedStart::Sqrt2, NamedStart::Sqrt3, NamedStart::Golden];

    pub fn point(self) -> TorusPoint<f64> {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        match self {
            NamedStart::Sqrt2 => TorusPoint::new(2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0),
            NamedStart::Sqrt3 => TorusPoint::new(3f64.sqrt() - 1.0, 5f64.sqrt() - 2.0),
            NamedStart::Golden => TorusPoint::new(golden - 1.0, 2f64.sqrt() - 1.0),
        }
    }
}

impl FromStr for NamedStart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt2" => Ok(NamedStart::Sqrt2),
            "sqrt3" => Ok(NamedStart::Sqrt3),
            "golden" => Ok(NamedStart::Golden),
            other => Err(Error::parse(format!(
                "unknown named start `{other}` (sqrt2|sqrt3|golden)"
            ))),
        }
    }
}

impl fmt::Display for NamedStart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedStart::Sqrt2 => "sqrt2",
            NamedStart::Sqrt3 => "sqrt3",
            NamedStart::Golden => "golden",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub estimate: f64,
    pub n: usize,
    pub reference: Option<f64>,
    pub rel_error: Option<f64>,
}

impl EstimatorReport {
    pub fn new(estimate: f64, n: usize, reference: Option<f64>) -> Self {
        let rel_error = reference.map(|r| (estimate - r).abs() / r.abs());
        EstimatorReport {
            estimate,
            n,
            reference,
            rel_error,
        }
    }
}

/// Norm of the image of a torus tangent vector under the fold.
///
/// On each face the fold is affine with derivative rows `±4e₁`, `±4e₂`,
/// `±4(e₁ + e₂)`; the signs drop out of the norm and the factor 4 out of
/// every ratio.
fn surface_norm(v: (f64, f64)) -> f64 {
    (v.0 * v.0 + v.1 * v.1 + (v.0 + v.1) * (v.0 + v.1)).sqrt()
}

/// Benettin estimate of the top Lyapunov exponent of `M` along the orbit of `start`.
///
/// A unit tangent vector is pushed by `M`, the log of its stretch is
/// accumulated and the vector is renormalized. With `folded` the stretch is
/// measured on `T` rather than on the torus; the limit is the same. The
/// reference is `entropy(M)` when `M` is hyperbolic.
pub fn benettin_lyapunov(
    m: &IntMatrix2,
    start: TorusPoint<f64>,
    n: usize,
    folded: bool,
) -> Result<EstimatorReport> {
    if n == 0 {
        return Err(Error::Domain("benettin_lyapunov needs n >= 1".into()));
    }
    let [[a, b], [c, d]] = m.entries().map(|row| row.map(|x| x as f64));
    let norm = |v: (f64, f64)| {
        if folded {
            surface_norm(v)
        } else {
            v.0.hypot(v.1)
        }
    };
    let mut v = (0.5f64.cos(), 0.5f64.sin());
    v = (v.0 / norm(v), v.1 / norm(v));
    let mut t = start;
    let mut sum = 0.0;
    for _ in 0..n {
        t = torus_act(m, t);
        debug_assert!(!folded || surface_residual(&[fold(t)]) <= 1e-9);
        let w = (a * v.0 + b * v.1, c * v.0 + d * v.1);
        let stretch = norm(w);
        sum += stretch.ln();
        v = (w.0 / stretch, w.1 / stretch);
    }
    Ok(EstimatorReport::new(sum / n as f64, n, entropy(m).ok()))
}

/// Indicator of an axis-aligned box `[φ₀, φ₁) × [ψ₀, ψ₁)` inside `[−1, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxIndicator {
    phi: (f64, f64),
    psi: (f64, f64),
}

impl BoxIndicator {
    pub fn new(phi: (f64, f64), psi: (f64, f64)) -> Result<Self> {
        let ok = |(lo, hi): (f64, f64)| {
            (-1.0..=1.0).contains(&lo) && (-1.0..=1.0).contains(&hi) && lo < hi
        };
        if !ok(phi) || !ok(psi) {
            return Err(Error::Domain(format!(
                "box {phi:?} x {psi:?} is not inside [-1, 1)^2"
            )));
        }
        Ok(BoxIndicator { phi, psi })
    }

    /// Fraction of the torus area covered by the box.
    pub fn area(&self) -> f64 {
        (self.phi.1 - self.phi.0) * (self.psi.1 - self.psi.0) / 4.0
    }

    pub fn eval<S: Scalar>(&self, t: &TorusPoint<S>) -> f64 {
        let (x, y) = (t.phi().to_f64(), t.psi().to_f64());
        let inside = self.phi.0 <= x && x < self.phi.1 && self.psi.0 <= y && y < self.psi.1;
        if inside {
            1.0
        } else {
            0.0
        }
    }
}

/// Mean of `observable` over the points.
pub fn birkhoff_average<P>(points: &[P], observable: impl Fn(&P) -> f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    Ok(points.iter().map(observable).sum::<f64>() / points.len() as f64)
}

/// `max |empirical cell frequency − 1/k²|` over the uniform `k × k` grid on `[−1, 1)²`.
pub fn box_discrepancy<S: Scalar>(points: &[TorusPoint<S>], k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("grid size {k} is below 2")));
    }
    if points.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    let ks = S::from_i64(k as i64);
    // Exact cell index for rationals, so points on grid lines land in the upper cell.
    let cell = |x: S| (((x + S::one()) * ks).half().floor().to_f64() as usize).min(k - 1);
    let mut counts = vec![0u64; k * k];
    for t in points {
        counts[cell(t.phi()) * k + cell(t.psi())] += 1;
    }
    let total = points.len() as f64;
    let uniform = 1.0 / (k * k) as f64;
    Ok(counts
        .iter()
        .map(|&c| (c as f64 / total - uniform).abs())
        .fold(0.0, f64::max))
}

/// Least `n ≥ 1` with `Mⁿ x = x` for a rational start.
///
/// With `q` the common denominator of `x`, the orbit stays in the
/// `(2q)²` points with denominator dividing `q`, so a cap below that bound
/// is rejected up front.
pub fn period_detect(m: &IntMatrix2, start: TorusPoint<Rat>, cap: u64) -> Result<u64> {
    let bound = period_bound(&start);
    if cap < bound {
        return Err(Error::CapExceeded { cap, bound });
    }
    let mut t = start;
    for n in 1..=cap {
        t = torus_act(m, t);
        if t == start {
            return Ok(n);
        }
    }
    Err(Error::CapExceeded { cap, bound })
}

/// `(2q)²` for the start's common denominator `q`.
pub fn period_bound(start: &TorusPoint<Rat>) -> u64 {
    let q = start.phi().denom().lcm(start.psi().denom()) as u64;
    4 * q * q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitFormat {
    Csv,
    JsonLines,
}

impl FromStr for OrbitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OrbitFormat::Csv),
            "json" | "jsonl" => Ok(OrbitFormat::JsonLines),
            other => Err(Error::parse(format!("unknown format `{other}` (csv|json)"))),
        }
    }
}

fn json_field<S: Scalar>(x: S) -> serde_json::Value {
    match S::MODE {
        Mode::Exact => json!(x.to_field()),
        Mode::Float => json!(x.to_f64()),
    }
}

/// Rows are numbered from 1; exact coordinates are written as `p/q`.
pub fn write_orbit<S: Scalar, W: Write>(
    rec: &OrbitRecord<S>,
    out: &mut W,
    format: OrbitFormat,
) -> io::Result<()> {
    match (&rec.points, format) {
        (OrbitPoints::Torus(pts), OrbitFormat::Csv) => {
            writeln!(out, "n,phi,psi")?;
            for (i, t) in pts.iter().enumerate() {
                let [x, y] = t.fields();
                writeln!(out, "{},{x},{y}", i + 1)?;
            }
        }
        (OrbitPoints::Folded(pts), OrbitFormat::Csv) => {
            writeln!(out, "n,u,v,w")?;
            for (i, p) in pts.iter().enumerate() {
                writeln!(out, "{},{p}", i + 1)?;
            }
        }
        (OrbitPoints::Torus(pts), OrbitFormat::JsonLines) => {
            for (i, t) in pts.iter().enumerate() {
                let row =
                    json!({"n": i + 1, "phi": json_field(t.phi()), "psi": json_field(t.psi())});
                writeln!(out, "{row}")?;
            }
        }
        (OrbitPoints::Folded(pts), OrbitFormat::JsonLines) => {
            for (i, p) in pts.iter().enumerate() {
                let row = json!({"n": i + 1, "u": json_field(p.u), "v": json_field(p.v), "w": json_field(p.w)});
                writeln!(out, "{row}")?;
            }
        }
    }
    Ok(())
}

/// Writes to a temporary file beside `path` and renames it into place, so
/// a failed run never leaves a partial file.
pub fn export_orbit<S: Scalar>(
    rec: &OrbitRecord<S>,
    path: &Path,
    format: OrbitFormat,
) -> Result<()> {
    write_atomic(path, |w| write_orbit(rec, w, format))
}

pub fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut io::BufWriter<&mut std::fs::File>) -> io::Result<()>,
) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
