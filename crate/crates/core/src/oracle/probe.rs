//! Empirical convergence rates of an expansion against an oracle.

use serde::Serialize;

use super::OracleResult;
use crate::error::{Error, Result};
use crate::moments::ExpansionSeries;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbePoint {
    pub n: u64,
    pub expansion: f64,
    pub oracle: OracleResult,
    pub diff: f64,
    /// False when `diff` is within the oracle's own uncertainty.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateProbe {
    /// Fitted exponent of `|oracle - expansion|` against `n`; absent when saturated.
    pub slope: Option<f64>,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub saturated: bool,
    pub points: Vec<ProbePoint>,
}

/// Least-squares line through `(ln x, ln y)`: returns slope, intercept and
/// root-mean-square residual.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (slope, intercept, (ss / k).sqrt())
}

fn noise_floor(r: &OracleResult) -> f64 {
    r.abs_error.max(4.0 * r.std_error).max(1e-13 * r.value.abs())
}

/// Evaluate `series` and `oracle` on `n_grid` and fit the decay exponent of
/// their difference.
pub fn convergence_rate_probe<F>(series: &ExpansionSeries<f64>, mut oracle: F, n_grid: &[u64]) -> Result<RateProbe>
where
    F: FnMut(u64) -> Result<OracleResult>,
{
    if n_grid.len() < 3 {
        return Err(Error::InvalidArgument("the n grid needs at least three points".into()));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("n grid {n_grid:?} must be positive and increasing")));
    }
    let steps: Vec<f64> = n_grid.windows(2).map(|w| (w[1] as f64 / w[0] as f64).ln()).collect();
    let mean_step = steps.iter().sum::<f64>() / steps.len() as f64;
    if steps.iter().any(|s| (s - mean_step).abs() > 0.25 * mean_step) {
        return Err(Error::InvalidArgument(format!("n grid {n_grid:?} is not geometrically spaced")));
    }
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let o = oracle(n)?;
        let expansion = series.evaluate(n as f64).value;
        let diff = (o.value - expansion).abs();
        points.push(ProbePoint {
            n,
            expansion,
            oracle: o,
            diff,
            resolved: diff > noise_floor(&o),
        });
    }
    if points.iter().any(|p| !p.resolved) {
        return Ok(RateProbe {
            slope: None,
            residual: 0.0,
            saturated: true,
            points,
        });
    }
    let x: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let y: Vec<f64> = points.iter().map(|p| p.diff).collect();
    let (slope, _, residual) = fit_loglog(&x, &y);
    Ok(RateProbe {
        slope: Some(slope),
        residual,
        saturated: false,
        points,
    })
}
