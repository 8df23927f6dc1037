//! Independent ground truth for the expansions: exact order-statistic
//! densities, quadrature moments, Monte Carlo and convergence-rate fits.

pub mod mc;
pub mod probe;
pub mod quad;

pub use mc::{batch_functional, mc_batches, mc_top_order_stats, BatchStats, McPlan};
pub use probe::{convergence_rate_probe, ProbePoint, RateProbe};

use serde::Serialize;

use crate::catalog::Distribution;
use crate::error::{Error, Result};
use crate::special::{choose, ln_beta};
use quad::{integrate_with_points, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Quad1d,
    Quad2d,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    /// Monte Carlo standard error; zero for quadrature, infinite when the
    /// estimator has no finite variance.
    pub std_error: f64,
    /// Quadrature error estimate; zero for Monte Carlo.
    pub abs_error: f64,
    pub method: OracleMethod,
    /// Integrand evaluations or replications.
    pub cost: u64,
}

impl OracleResult {
    fn exact(value: f64, method: OracleMethod) -> Self {
        OracleResult {
            value,
            std_error: 0.0,
            abs_error: 0.0,
            method,
            cost: 0,
        }
    }

    /// Multiply value and uncertainties by a constant.
    pub fn scaled(&self, k: f64) -> Self {
        OracleResult {
            value: self.value * k,
            std_error: self.std_error * k.abs(),
            abs_error: self.abs_error * k.abs(),
            ..*self
        }
    }
}

/// Joint density of the uniform order statistics `U_{n,r_1} < ... < U_{n,r_k}`.
pub fn order_stat_density(n: u64, r: &[u64], u: &[f64]) -> Result<f64> {
    if r.is_empty() || r.len() != u.len() {
        return Err(Error::InvalidArgument("rank and point vectors differ in length".into()));
    }
    if r.windows(2).any(|w| w[0] >= w[1]) || r[0] < 1 || r[r.len() - 1] > n {
        return Err(Error::InvalidArgument(format!("ranks {r:?} must increase strictly within [1, {n}]")));
    }
    if u.windows(2).any(|w| w[0] >= w[1]) || !(u[0] > 0.0) || !(u[u.len() - 1] < 1.0) {
        return Err(Error::Domain(format!("point {u:?} is not ordered inside (0, 1)")));
    }
    let mut log = 0.0;
    let (mut prev_r, mut prev_u) = (0u64, 0.0);
    for (&ri, &ui) in r.iter().zip(u) {
        let gap = ri - prev_r;
        log -= ln_beta(gap as f64, (n - ri + 1) as f64);
        log += (gap - 1) as f64 * (ui - prev_u).ln();
        prev_r = ri;
        prev_u = ui;
    }
    log += (n - prev_r) as f64 * (-prev_u).ln_1p();
    Ok(log.exp())
}

fn check_moment(dist: &Distribution, s: u64, psibar: f64) -> Result<()> {
    if !dist.has_quantile() {
        return Err(Error::Capability {
            dist: dist.to_string(),
            capability: "quantile",
        });
    }
    if !(s as f64 + 1.0 - psibar > 0.0) {
        return Err(Error::InfiniteMoment {
            index: 1,
            reason: format!("s + 1 - theta/alpha = {} <= 0", s as f64 + 1.0 - psibar),
        });
    }
    Ok(())
}

fn power(x: f64, theta: f64) -> f64 {
    if theta.fract() == 0.0 && theta.abs() < 64.0 {
        x.powi(theta as i32)
    } else {
        x.powf(theta)
    }
}

/// Exponent `p` for `v = w^p`, chosen so that a `v^{e-1}` endpoint
/// behaviour becomes bounded in `w`.
fn stretch(e: f64) -> f64 {
    if e < 1.0 {
        1.0 / e
    } else {
        1.0
    }
}

fn breakpoints(center: f64, p: f64) -> Vec<f64> {
    [0.05, 0.25, 1.0, 4.0, 16.0, 64.0]
        .iter()
        .map(|k| k * center)
        .filter(|v| *v < 1.0)
        .map(|v| v.powf(1.0 / p))
        .collect()
}

const INNER_TOL: Tolerance = Tolerance {
    abs: 1e-300,
    rel: 1e-13,
    max_intervals: 400,
};

/// `E X_{n,n-s}^θ` by adaptive quadrature against the order-statistic density.
pub fn quad_moment(dist: &Distribution, n: u64, s: u64, theta: f64) -> Result<OracleResult> {
    if s >= n {
        return Err(Error::InvalidArgument(format!("s = {s} must be below n = {n}")));
    }
    if theta == 0.0 {
        return Ok(OracleResult::exact(1.0, OracleMethod::Quad1d));
    }
    let psi = theta / dist.tail_index();
    check_moment(dist, s, psi)?;
    // V = 1 - U_{n,n-s} has density norm * v^s (1-v)^{n-s-1}
    let norm = n as f64 * choose(n - 1, s);
    let p = stretch(s as f64 + 1.0 - psi);
    let failure = std::cell::Cell::new(None);
    let f = |w: f64| -> f64 {
        if w <= 0.0 || w >= 1.0 {
            return 0.0;
        }
        let v = w.powf(p);
        match dist.upper_quantile(v) {
            Ok(q) => {
                let log_weight = s as f64 * v.ln() + (n - s - 1) as f64 * (-v).ln_1p() + (p - 1.0) * w.ln();
                norm * p * power(q, theta) * log_weight.exp()
            }
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let center = (s as f64 + 1.0) / n as f64;
    let r = integrate_with_points(f, 0.0, 1.0, &breakpoints(center, p), Tolerance::new(1e-300, 1e-12));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    if !r.value.is_finite() {
        return Err(Error::Numerical(format!("quadrature for {dist} produced {}", r.value)));
    }
    Ok(OracleResult {
        value: r.value,
        std_error: 0.0,
        abs_error: r.abs_error,
        method: OracleMethod::Quad1d,
        cost: r.evaluations as u64,
    })
}

/// `E X_{n,n-s1}^{θ1} X_{n,n-s2}^{θ2}` by nested adaptive quadrature.
pub fn quad_joint_moment(dist: &Distribution, n: u64, s1: u64, s2: u64, theta1: f64, theta2: f64) -> Result<OracleResult> {
    if s1 < s2 {
        return quad_joint_moment(dist, n, s2, s1, theta2, theta1);
    }
    if s1 == s2 {
        let mut r = quad_moment(dist, n, s1, theta1 + theta2)?;
        r.method = OracleMethod::Quad2d;
        return Ok(r);
    }
    if s1 >= n {
        return Err(Error::InvalidArgument(format!("s = {s1} must be below n = {n}")));
    }
    if theta1 == 0.0 && theta2 == 0.0 {
        return Ok(OracleResult::exact(1.0, OracleMethod::Quad2d));
    }
    let alpha = dist.tail_index();
    let (psi1, psi2) = (theta1 / alpha, theta2 / alpha);
    check_moment(dist, s1, psi1 + psi2)?;
    check_moment(dist, s2, psi2)?;
    // V2 < V1 with density K v2^{s2} (v1 - v2)^{s1-s2-1} (1 - v1)^{n-s1-1};
    // inner variable v2 = v1 t, t = w^{p2}
    let k = n as f64 * choose(n - 1, s1) * s1 as f64 * choose(s1 - 1, s2);
    let p1 = stretch(s1 as f64 + 1.0 - psi1 - psi2);
    let p2 = stretch(s2 as f64 + 1.0 - psi2);
    let failure = std::cell::Cell::new(None);
    let evaluations = std::cell::Cell::new(0usize);
    let record = |e: Error| {
        failure.set(Some(e));
        0.0
    };
    let inner = |v1: f64| -> f64 {
        let g = |w: f64| -> f64 {
            if w <= 0.0 || w >= 1.0 {
                return 0.0;
            }
            let t = w.powf(p2);
            match dist.upper_quantile(v1 * t) {
                Ok(q) => {
                    let lw = s2 as f64 * t.ln() + (s1 - s2 - 1) as f64 * (-t).ln_1p() + (p2 - 1.0) * w.ln();
                    p2 * power(q, theta2) * lw.exp()
                }
                Err(e) => record(e),
            }
        };
        let r = integrate_with_points(g, 0.0, 1.0, &[], INNER_TOL);
        evaluations.set(evaluations.get() + r.evaluations);
        r.value
    };
    let outer = |w: f64| -> f64 {
        if w <= 0.0 || w >= 1.0 {
            return 0.0;
        }
        let v1 = w.powf(p1);
        match dist.upper_quantile(v1) {
            Ok(q) => {
                let lw = s1 as f64 * v1.ln() + (n - s1 - 1) as f64 * (-v1).ln_1p() + (p1 - 1.0) * w.ln();
                k * p1 * power(q, theta1) * lw.exp() * inner(v1)
            }
            Err(e) => record(e),
        }
    };
    let center = (s1 as f64 + 1.0) / n as f64;
    let r = integrate_with_points(outer, 0.0, 1.0, &breakpoints(center, p1), Tolerance::new(1e-300, 1e-11));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(OracleResult {
        value: r.value,
        std_error: 0.0,
        abs_error: r.abs_error,
        method: OracleMethod::Quad2d,
        cost: evaluations.get() as u64 + r.evaluations as u64,
    })
}
