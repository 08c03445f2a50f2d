//! Browser front end for `cayley-markov`.
//!
//! Three operations are exported to JavaScript: the folded orbit cloud of a
//! toral automorphism on the tetrahedron, the `Λ(ξ)` estimator curves for a
//! continued fraction, and a Lyapunov readout. Each wraps a plain function
//! that is tested natively.

use cayley_markov::ergodic::{
    benettin_lyapunov, orbit, surface_residual, EstimatorReport, NamedStart,
};
use cayley_markov::farey::{cf_to_word, estimate, ContinuedFraction, Estimator};
use cayley_markov::torus::{entropy, IntMatrix2, TorusPoint};
use cayley_markov::{Error, Result};
use wasm_bindgen::prelude::*;

/// Upper bound on orbit length so a slider cannot freeze the tab.
pub const MAX_CLOUD_POINTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Cloud {
    /// `u, v, w` triples, flattened.
    pub coords: Vec<f32>,
    pub surface_residual: f64,
    pub entropy: Option<f64>,
}

fn parse_start(start: &str) -> Result<TorusPoint<f64>> {
    if let Ok(named) = start.parse::<NamedStart>() {
        return Ok(named.point());
    }
    let (phi, psi) = start.split_once(',').ok_or_else(|| {
        Error::Parse(format!(
            "start `{start}` is neither sqrt2|sqrt3|golden nor `x,y`"
        ))
    })?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad coordinate `{s}`")))
    };
    Ok(TorusPoint::new(num(phi)?, num(psi)?))
}

pub fn folded_cloud(matrix: &str, start: &str, n: usize) -> Result<Cloud> {
    let m: IntMatrix2 = matrix.parse()?;
    let rec = orbit(&m, parse_start(start)?, n.min(MAX_CLOUD_POINTS), true);
    let points = rec.folded_points().expect("folded orbit");
    Ok(Cloud {
        coords: points
            .iter()
            .flat_map(|p| [p.u as f32, p.v as f32, p.w as f32])
            .collect(),
        surface_residual: surface_residual(points),
        entropy: entropy(&m).ok(),
    })
}

/// `Λ` estimates at `k = 1..=n`; the Markov estimator stops at its depth cap.
pub fn lambda_series(cf: &str, n: usize, estimator: &str) -> Result<Vec<f64>> {
    let cf: ContinuedFraction = cf.parse()?;
    let estimator: Estimator = estimator.parse()?;
    let n = match estimator {
        Estimator::Markov => n.min(cayley_markov::classical::MARKOV_DEPTH_CAP),
        _ => n,
    };
    Ok(estimate(estimator, &cf_to_word(&cf, n), n)?.values)
}

pub fn lyapunov_report(matrix: &str, n: usize) -> Result<EstimatorReport> {
    let m: IntMatrix2 = matrix.parse()?;
    benettin_lyapunov(&m, NamedStart::Sqrt2.point(), n, true)
}

fn to_js(e: Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Flattened `[u0, v0, w0, u1, …]` of the folded orbit.
#[wasm_bindgen(js_name = foldedCloud)]
pub fn folded_cloud_js(
    matrix: &str,
    start: &str,
    n: usize,
) -> std::result::Result<Vec<f32>, JsValue> {
    folded_cloud(matrix, start, n)
        .map(|c| c.coords)
        .map_err(to_js)
}

#[wasm_bindgen(js_name = lambdaSeries)]
pub fn lambda_series_js(
    cf: &str,
    n: usize,
    estimator: &str,
) -> std::result::Result<Vec<f64>, JsValue> {
    lambda_series(cf, n, estimator).map_err(to_js)
}

/// JSON object with `estimate, n, reference, rel_error`.
#[wasm_bindgen(js_name = lyapunovReport)]
pub fn lyapunov_report_js(matrix: &str, n: usize) -> std::result::Result<String, JsValue> {
    let report = lyapunov_report(matrix, n).map_err(to_js)?;
    serde_json::to_string(&report).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_lies_on_the_tetrahedron() {
        let cloud = folded_cloud("2,1,1,1", "sqrt2", 5000).unwrap();
        assert_eq!(cloud.coords.len(), 15_000);
        assert!(cloud.surface_residual <= 1e-9);
        assert!((cloud.entropy.unwrap() - 0.962_423_650_1).abs() < 1e-9);
        for p in cloud.coords.chunks(3) {
            let (u, v, w) = (p[0] as f64, p[1] as f64, p[2] as f64);
            let psi = (-u + v + w).max(u - v + w).max(u + v - w).max(-u - v - w);
            assert!((psi - 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn cloud_accepts_numeric_starts_and_caps_length() {
        let cloud = folded_cloud("1,1,1,2", "0.1, -0.3", MAX_CLOUD_POINTS + 10).unwrap();
        assert_eq!(cloud.coords.len(), 3 * MAX_CLOUD_POINTS);
        assert!(folded_cloud("1,1,1,1", "sqrt2", 10).is_err());
        assert!(folded_cloud("2,1,1,1", "nowhere", 10).is_err());
    }

    #[test]
    fn golden_lambda_curves() {
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let m = lambda_series("[1;(1)]", 100, "matrices").unwrap();
        assert!((m[99] - golden).abs() < 1e-12);
        let e = lambda_series("[1;(1)]", 100, "euclid").unwrap();
        assert!((e[99] - golden).abs() < 0.02);
        let k = lambda_series("[1;(1)]", 100, "markov").unwrap();
        assert_eq!(k.len(), 30);
        assert!(lambda_series("[1;(1)]", 10, "bogus").is_err());
    }

    #[test]
    fn lyapunov_readout() {
        let r = lyapunov_report("2,1,1,1", 20_000).unwrap();
        assert!(r.rel_error.unwrap() < 1e-3);
        let r = lyapunov_report("1,1,0,1", 20_000).unwrap();
        assert!(r.reference.is_none());
    }
}
