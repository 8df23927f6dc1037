//! Distributions with Pareto-type upper tails: their tail coefficients,
//! quantiles and samplers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use statrs::function::beta::beta_reg;
use crate::quantile::TailModel;
use crate::series::FormalSeries;
use crate::special::{binomial, factorial, ln_beta, ln_gamma};

pub const MAX_TAIL_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// `1 - F(x) = c0 x^{-α}` for `x >= c0^{1/α}`.
    Pareto { alpha: f64, c0: f64 },
    Cauchy,
    StudentT { dof: u32 },
    /// Snedecor F with `m` numerator and `n` denominator degrees of freedom.
    FDist { m: f64, n: f64 },
    /// Feller parametrisation; `gamma = -alpha` is the positive one-sided law
    /// with Laplace transform `exp(-s^α)`.
    Stable { alpha: f64, gamma: f64 },
    /// `F(x) = exp(-x^{-α})`.
    Frechet { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub exact_quantile: bool,
    pub numeric_quantile: bool,
    pub sampler: bool,
}

impl Distribution {
    pub fn new(self) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self {
            Distribution::Pareto { alpha, c0 } if !(alpha > 0.0 && c0 > 0.0 && alpha.is_finite() && c0.is_finite()) => {
                bad(format!("pareto needs alpha > 0 and c0 > 0, got ({alpha}, {c0})"))
            }
            Distribution::StudentT { dof: 0 } => bad("student_t needs N >= 1".into()),
            Distribution::FDist { m, n } if !(m > 0.0 && n > 2.0 && m.is_finite() && n.is_finite()) => {
                bad(format!("f_dist needs M > 0 and N > 2, got ({m}, {n})"))
            }
            Distribution::Stable { alpha, gamma } if !(alpha > 0.0 && alpha < 1.0 && gamma.abs() <= alpha) => {
                bad(format!("stable needs 0 < alpha < 1 and |gamma| <= alpha, got ({alpha}, {gamma})"))
            }
            Distribution::Frechet { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                bad(format!("frechet needs alpha > 0, got {alpha}"))
            }
            d => Ok(d),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Distribution::Pareto { .. } => "pareto",
            Distribution::Cauchy => "cauchy",
            Distribution::StudentT { .. } => "student_t",
            Distribution::FDist { .. } => "f_dist",
            Distribution::Stable { .. } => "stable",
            Distribution::Frechet { .. } => "frechet",
        }
    }

    pub fn capabilities(&self) -> Capabilities {
        match self {
            Distribution::Pareto { .. } | Distribution::Cauchy | Distribution::Frechet { .. } => Capabilities {
                exact_quantile: true,
                numeric_quantile: false,
                sampler: true,
            },
            Distribution::StudentT { dof: 1 } => Capabilities {
                exact_quantile: true,
                numeric_quantile: false,
                sampler: true,
            },
            Distribution::StudentT { .. } | Distribution::FDist { .. } => Capabilities {
                exact_quantile: false,
                numeric_quantile: true,
                sampler: true,
            },
            Distribution::Stable { alpha, gamma } => Capabilities {
                exact_quantile: false,
                numeric_quantile: false,
                sampler: *gamma == -*alpha,
            },
        }
    }

    pub fn has_quantile(&self) -> bool {
        let c = self.capabilities();
        c.exact_quantile || c.numeric_quantile
    }

    /// Tail index `α`.
    pub fn tail_index(&self) -> f64 {
        match *self {
            Distribution::Pareto { alpha, .. } | Distribution::Frechet { alpha } | Distribution::Stable { alpha, .. } => alpha,
            Distribution::Cauchy => 1.0,
            Distribution::StudentT { dof } => dof as f64,
            Distribution::FDist { n, .. } => n / 2.0,
        }
    }

    /// `(α, β, c_0..c_order)`.
    pub fn tail(&self, order: usize) -> Result<TailModel<f64>> {
        if order > MAX_TAIL_ORDER {
            return Err(Error::UnsupportedOrder(format!("catalog tails stop at order {MAX_TAIL_ORDER}")));
        }
        let (alpha, beta, c): (f64, f64, Vec<f64>) = match *self {
            Distribution::Pareto { alpha, c0 } => {
                let mut c = vec![0.0; order + 1];
                c[0] = c0;
                (alpha, alpha, c)
            }
            Distribution::Cauchy => (
                1.0,
                2.0,
                (0..=order).map(|i| sign(i) / ((2 * i + 1) as f64 * PI)).collect(),
            ),
            Distribution::StudentT { dof } => {
                let nn = dof as f64;
                let gamma = (nn + 1.0) / 2.0;
                let g = student_norm(nn);
                let c = (0..=order)
                    .map(|i| {
                        let d = binomial(&-gamma, i) * nn.powf(gamma + i as f64) * g;
                        d / (nn + 2.0 * i as f64)
                    })
                    .collect();
                (nn, 2.0, c)
            }
            Distribution::FDist { m, n } => {
                let nu = m / n;
                let gamma = (m + n) / 2.0;
                let h = (-(n / 2.0) * nu.ln() - ln_beta(m / 2.0, n / 2.0)).exp();
                let c = (0..=order)
                    .map(|i| h * binomial(&-gamma, i) * nu.powi(-(i as i32)) / (n / 2.0 + i as f64))
                    .collect();
                (n / 2.0, 1.0, c)
            }
            Distribution::Stable { alpha, gamma } => {
                let c = (0..=order)
                    .map(|i| stable_density_coeff(alpha, gamma, i + 1) / (alpha * (i + 1) as f64))
                    .collect();
                (alpha, alpha, c)
            }
            Distribution::Frechet { alpha } => (
                alpha,
                alpha,
                (0..=order).map(|i| sign(i) / factorial::<f64>(i + 1)).collect(),
            ),
        };
        TailModel::new(alpha, beta, FormalSeries::new(c)?)
    }

    /// `P(X > x)`.
    pub fn survival(&self, x: f64) -> Result<f64> {
        match *self {
            Distribution::Pareto { alpha, c0 } => Ok((c0 * x.powf(-alpha)).min(1.0)),
            Distribution::Cauchy => Ok(0.5 - x.atan() / PI),
            Distribution::StudentT { dof } => Ok(student_survival(dof as f64, x)),
            Distribution::FDist { m, n } => Ok(f_survival(m, n, x)),
            Distribution::Frechet { alpha } => Ok(if x <= 0.0 { 1.0 } else { -(-x.powf(-alpha)).exp_m1() }),
            Distribution::Stable { .. } => Err(self.missing("cdf")),
        }
    }

    fn density(&self, x: f64) -> f64 {
        match *self {
            Distribution::StudentT { dof } => {
                let nn = dof as f64;
                student_norm(nn) * (1.0 + x * x / nn).powf(-(nn + 1.0) / 2.0)
            }
            Distribution::FDist { m, n } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let nu = m / n;
                let log = (m / 2.0) * nu.ln() - ln_beta(m / 2.0, n / 2.0) + (m / 2.0 - 1.0) * x.ln()
                    - (m + n) / 2.0 * (nu * x).ln_1p();
                log.exp()
            }
            Distribution::Cauchy => 1.0 / (PI * (1.0 + x * x)),
            _ => f64::NAN,
        }
    }

    fn missing(&self, capability: &'static str) -> Error {
        Error::Capability {
            dist: self.to_string(),
            capability,
        }
    }

    /// `F^{-1}(u)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!("u = {u} outside (0, 1)")));
        }
        self.upper_quantile(1.0 - u)
    }

    /// `F^{-1}(1 - v)`, accurate for small `v`.
    pub fn upper_quantile(&self, v: f64) -> Result<f64> {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!("1 - u = {v} outside (0, 1)")));
        }
        match *self {
            Distribution::Pareto { alpha, c0 } => Ok((c0 / v).powf(1.0 / alpha)),
            Distribution::Cauchy | Distribution::StudentT { dof: 1 } => Ok(1.0 / (PI * v).tan()),
            Distribution::Frechet { alpha } => Ok((-(-v).ln_1p()).powf(-1.0 / alpha)),
            Distribution::StudentT { .. } => {
                if v == 0.5 {
                    Ok(0.0)
                } else if v > 0.5 {
                    Ok(-self.solve_upper(1.0 - v)?)
                } else {
                    self.solve_upper(v)
                }
            }
            Distribution::FDist { .. } => self.solve_upper(v),
            Distribution::Stable { .. } => Err(self.missing("quantile")),
        }
    }

    /// Solve `P(X > x) = v` for `x > 0` by safeguarded Newton in `ln x`.
    fn solve_upper(&self, v: f64) -> Result<f64> {
        let tail = self.tail(0)?;
        let target = v.ln();
        let g = |y: f64| -> Result<(f64, f64)> {
            let x = y.exp();
            let s = self.survival(x)?;
            // d ln S / d ln x = -x f(x) / S
            Ok((s.ln() - target, -x * self.density(x) / s))
        };
        let mut y = ((tail.c0() / v).ln() / tail.alpha()).clamp(-30.0, 300.0);
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for _ in 0..200 {
            let (val, der) = g(y)?;
            if val == 0.0 {
                return Ok(y.exp());
            }
            if val > 0.0 {
                lo = lo.max(y);
            } else {
                hi = hi.min(y);
            }
            let mut next = y - val / der;
            if !next.is_finite() || next <= lo || next >= hi {
                next = match (lo.is_finite(), hi.is_finite()) {
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => y + 1.0,
                    (false, true) => y - 1.0,
                    (false, false) => y,
                };
            }
            if (next - y).abs() <= 1e-15 * y.abs().max(1.0) || (hi - lo) <= 1e-15 * y.abs().max(1.0) {
                return Ok(next.exp());
            }
            y = next;
        }
        Err(Error::Numerical(format!("quantile solve for {self} at 1 - u = {v} did not converge")))
    }

    /// One draw: inverse-CDF sampling where a quantile exists, otherwise the
    /// Kanter representation for the positive stable law.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        match *self {
            Distribution::Stable { alpha, gamma } if gamma == -alpha => {
                let u: f64 = PI * rng.sample::<f64, _>(Open01);
                let e: f64 = rng.sample(Exp1);
                let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
                let b = (((1.0 - alpha) * u).sin() / e).powf((1.0 - alpha) / alpha);
                Ok(a * b)
            }
            Distribution::Stable { .. } => Err(self.missing("sampler")),
            _ => self.upper_quantile(rng.sample(Open01)),
        }
    }
}

fn sign(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `g_N = Γ((N+1)/2) / (sqrt(Nπ) Γ(N/2))`
fn student_norm(nn: f64) -> f64 {
    (ln_gamma((nn + 1.0) / 2.0) - ln_gamma(nn / 2.0)).exp() / (nn * PI).sqrt()
}

fn student_survival(nn: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - student_survival(nn, -x);
    }
    0.5 * beta_reg(nn / 2.0, 0.5, nn / (nn + x * x))
}

fn f_survival(m: f64, n: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    beta_reg(n / 2.0, m / 2.0, n / (n + m * x))
}

/// Coefficient `a_k` of `x^{-1-kα}` in the series for the stable density.
fn stable_density_coeff(alpha: f64, gamma: f64, k: usize) -> f64 {
    let kf = k as f64;
    (ln_gamma(kf * alpha + 1.0) - ln_gamma(kf + 1.0)).exp() * sign(k) * (kf * PI * (gamma - alpha) / 2.0).sin() / PI
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Distribution::Pareto { alpha, c0 } => write!(f, "pareto({alpha},{c0})"),
            Distribution::Cauchy => write!(f, "cauchy"),
            Distribution::StudentT { dof } => write!(f, "student_t({dof})"),
            Distribution::FDist { m, n } => write!(f, "f_dist({m},{n})"),
            Distribution::Stable { alpha, gamma } => write!(f, "stable({alpha},{gamma})"),
            Distribution::Frechet { alpha } => write!(f, "frechet({alpha})"),
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// `name` or `name(p1,p2,...)` with decimal parameters.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, params) = match spec.find('(') {
            None => (spec, Vec::new()),
            Some(open) => {
                let inner = spec[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in {spec:?}")))?;
                let params = inner
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad parameter {p:?} in {spec:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                (spec[..open].trim(), params)
            }
        };
        let arity = |want: &[usize]| -> Result<()> {
            if want.contains(&params.len()) {
                Ok(())
            } else {
                Err(Error::Parse(format!("{name} takes {want:?} parameters, got {}", params.len())))
            }
        };
        let dist = match name {
            "pareto" => {
                arity(&[0, 1, 2])?;
                Distribution::Pareto {
                    alpha: params.first().copied().unwrap_or(1.0),
                    c0: params.get(1).copied().unwrap_or(1.0),
                }
            }
            "cauchy" => {
                arity(&[0])?;
                Distribution::Cauchy
            }
            "student_t" => {
                arity(&[1])?;
                let nn = params[0];
                if nn.fract() != 0.0 || !(1.0..=1e6).contains(&nn) {
                    return Err(Error::Parse(format!("student_t needs an integer N >= 1, got {nn}")));
                }
                Distribution::StudentT { dof: nn as u32 }
            }
            "f_dist" => {
                arity(&[2])?;
                Distribution::FDist { m: params[0], n: params[1] }
            }
            "stable" => {
                arity(&[2])?;
                Distribution::Stable { alpha: params[0], gamma: params[1] }
            }
            "frechet" => {
                arity(&[0, 1])?;
                Distribution::Frechet {
                    alpha: params.first().copied().unwrap_or(1.0),
                }
            }
            other => return Err(Error::Parse(format!("unknown distribution {other:?}"))),
        };
        dist.new()
    }
}

/// One entry per catalog family, with default parameters.
pub fn catalog() -> Vec<Distribution> {
    vec![
        Distribution::Pareto { alpha: 1.0, c0: 1.0 },
        Distribution::Cauchy,
        Distribution::StudentT { dof: 3 },
        Distribution::FDist { m: 4.0, n: 6.0 },
        Distribution::Stable { alpha: 0.5, gamma: -0.5 },
        Distribution::Frechet { alpha: 1.0 },
    ]
}

#[cfg(test)]
mod tests;
