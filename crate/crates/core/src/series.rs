//! Truncated formal power series and partial Bell polynomials.
//!
//! A [`FormalSeries`] of order `m` stores `x_0..=x_m` of `S = sum x_j t^j`.
//! Products and sums are only meaningful up to the smaller order of the
//! operands, and that is the order of the result.


use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::{binomial, factorial};

#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries<S = f64> {
    coeffs: Vec<S>,
}

impl<S: Scalar> FormalSeries<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a series needs at least one coefficient".into()));
        }
        if let Some(pos) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::InvalidArgument(format!("coefficient {pos} is not finite")));
        }
        Ok(FormalSeries { coeffs })
    }

    pub fn zeros(order: usize) -> Self {
        FormalSeries {
            coeffs: vec![S::zero(); order + 1],
        }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = S::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }

    pub fn get(&self, i: usize) -> Option<&S> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OutOfRange(format!(
                "cannot extend a series of order {} to order {order}",
                self.order()
            )));
        }
        Ok(FormalSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn map(&self, f: impl Fn(usize, &S) -> S) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(i, c)| f(i, c)).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|_, c| c.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        FormalSeries {
            coeffs: (0..=m)
                .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    /// Truncated (Cauchy) product.
    pub fn mul(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        let coeffs = (0..=m)
            .map(|r| {
                (0..=r).fold(S::zero(), |acc, i| {
                    acc + self.coeffs[i].clone() * other.coeffs[r - i].clone()
                })
            })
            .collect();
        FormalSeries { coeffs }
    }

    /// `self^k` by repeated truncated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.order()), |acc, _| acc.mul(self))
    }

    /// `self^p` for a series with nonzero constant term.
    pub fn pow(&self, p: &S) -> Result<Self> {
        let z0 = self.coeffs[0].clone();
        if z0.is_zero() {
            return Err(Error::Singular("real power of a series with zero constant term".into()));
        }
        let lead = z0.pow_real(p)?;
        Ok(series_power(self, p, &(S::one() / z0)).scale(&lead))
    }

    /// `sum_i self_i * inner^i`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidArgument(
                "inner series of a composition must have zero constant term".into(),
            ));
        }
        let m = self.order().min(inner.order());
        let table = BellTable::new(&inner.truncate(m)?);
        let coeffs = (0..=m)
            .map(|r| {
                (0..=r).fold(S::zero(), |acc, i| {
                    acc + self.coeffs[i].clone() * table.value(r, i).clone()
                })
            })
            .collect();
        Ok(FormalSeries { coeffs })
    }
}

/// Triangular table of partial ordinary Bell polynomials `B̂_{ri}(x)`, the
/// coefficient of `t^r` in `(sum_{j>=1} x_j t^j)^i`. `x_0` is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct BellTable<S = f64> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> BellTable<S> {
    pub fn new(x: &FormalSeries<S>) -> Self {
        let m = x.order();
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(m + 1);
        for r in 0..=m {
            let mut row = vec![S::zero(); r + 1];
            row[0] = if r == 0 { S::one() } else { S::zero() };
            for i in 1..=r {
                let mut acc = S::zero();
                for j in 1..=(r + 1 - i) {
                    let prev = &rows[r - j];
                    if i - 1 < prev.len() {
                        acc = acc + x.coeff(j).clone() * prev[i - 1].clone();
                    }
                }
                row[i] = acc;
            }
            rows.push(row);
        }
        BellTable { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, r: usize, i: usize) -> Result<&S> {
        if r > self.order() {
            return Err(Error::OutOfRange(format!("r = {r} exceeds order {}", self.order())));
        }
        if i > r {
            return Err(Error::OutOfRange(format!("i = {i} exceeds r = {r}")));
        }
        Ok(&self.rows[r][i])
    }

    fn value(&self, r: usize, i: usize) -> &S {
        &self.rows[r][i]
    }
}

pub fn bell_partial_ordinary<S: Scalar>(x: &FormalSeries<S>, r: usize, i: usize) -> Result<S> {
    if r > x.order() {
        return Err(Error::OutOfRange(format!("r = {r} exceeds order {}", x.order())));
    }
    BellTable::new(&x.truncate(r)?).get(r, i).cloned()
}

/// Coefficients `Ĉ_r` of `(1 + λS)^α`.
pub fn series_power<S: Scalar>(x: &FormalSeries<S>, alpha: &S, lambda: &S) -> FormalSeries<S> {
    series_power_from_table(&BellTable::new(x), alpha, lambda)
}

pub fn series_power_from_table<S: Scalar>(
    table: &BellTable<S>,
    alpha: &S,
    lambda: &S,
) -> FormalSeries<S> {
    let m = table.order();
    // weights binom(α, i) λ^i
    let mut weights = Vec::with_capacity(m + 1);
    let mut w = S::one();
    for i in 0..=m {
        weights.push(w.clone());
        w = w * (alpha.clone() - S::int(i as i64)) / S::int(i as i64 + 1) * lambda.clone();
    }
    weighted_sum(table, &weights)
}

/// Coefficients `D̂_r` of `log(1 + λS)`; the constant term is zero.
pub fn series_log<S: Scalar>(x: &FormalSeries<S>, lambda: &S) -> FormalSeries<S> {
    let table = BellTable::new(x);
    let m = table.order();
    let mut weights = vec![S::zero()];
    let neg = -lambda.clone();
    let mut p = S::one();
    for i in 1..=m {
        p = p * neg.clone();
        weights.push(-(p.clone() / S::int(i as i64)));
    }
    weighted_sum(&table, &weights)
}

/// Coefficients `B̂_r` of `exp(λS)`, with `B̂_0 = 1`.
pub fn series_exp<S: Scalar>(x: &FormalSeries<S>, lambda: &S) -> FormalSeries<S> {
    let table = BellTable::new(x);
    weighted_sum(&table, &exp_weights(table.order(), lambda))
}

/// `exp(λS)` for a series whose even coefficients vanish, through the Bell
/// table of `X_j = x_{2j-1}`: `B̂_k = sum_r B̂_{r,2r-k}(X) λ^{2r-k}/(2r-k)!`.
pub fn series_exp_odd<S: Scalar>(x: &FormalSeries<S>, lambda: &S) -> Result<FormalSeries<S>> {
    let m = x.order();
    if let Some(j) = (2..=m).step_by(2).find(|&j| !x.coeff(j).is_zero()) {
        return Err(Error::InvalidArgument(format!("coefficient {j} of an odd series is nonzero")));
    }
    // X_j beyond the input order stay zero; they only feed rows r > k that are never read.
    let mut big_x = vec![S::zero(); m + 1];
    for (j, slot) in big_x.iter_mut().enumerate().skip(1) {
        if 2 * j - 1 <= m {
            *slot = x.coeff(2 * j - 1).clone();
        }
    }
    let table = BellTable::new(&FormalSeries::new(big_x)?);
    let weights = exp_weights(m, lambda);
    let coeffs = (0..=m)
        .map(|k| {
            ((k + 1) / 2..=k).fold(S::zero(), |acc, r| {
                let i = 2 * r - k;
                acc + table.value(r, i).clone() * weights[i].clone()
            })
        })
        .collect();
    FormalSeries::new(coeffs)
}

fn exp_weights<S: Scalar>(m: usize, lambda: &S) -> Vec<S> {
    let mut weights = Vec::with_capacity(m + 1);
    let mut w = S::one();
    for i in 0..=m {
        weights.push(w.clone());
        w = w * lambda.clone() / S::int(i as i64 + 1);
    }
    weights
}

fn weighted_sum<S: Scalar>(table: &BellTable<S>, weights: &[S]) -> FormalSeries<S> {
    let m = table.order();
    let coeffs = (0..=m)
        .map(|r| {
            (0..=r).fold(S::zero(), |acc, i| {
                acc + table.value(r, i).clone() * weights[i].clone()
            })
        })
        .collect();
    FormalSeries { coeffs }
}

/// Exponential-generating-function views: `y_j = j! x_j`, so that every
/// exponential quantity is `r!` (or `r!/i!`) times its ordinary counterpart.
pub mod exponential {
    use super::*;

    pub fn to_exponential<S: Scalar>(x: &FormalSeries<S>) -> FormalSeries<S> {
        x.map(|j, c| c.clone() * factorial::<S>(j))
    }

    pub fn from_exponential<S: Scalar>(y: &FormalSeries<S>) -> FormalSeries<S> {
        y.map(|j, c| c.clone() / factorial::<S>(j))
    }

    /// `B_{ri}(y) = r!/i! B̂_{ri}(x)`.
    pub fn bell_partial_exponential<S: Scalar>(y: &FormalSeries<S>, r: usize, i: usize) -> Result<S> {
        let ordinary = bell_partial_ordinary(&from_exponential(y), r, i)?;
        Ok(ordinary * factorial::<S>(r) / factorial::<S>(i))
    }

    /// `C_r` with `(1 + λ sum y_j t^j/j!)^α = sum C_r t^r/r!`.
    pub fn series_power_exponential<S: Scalar>(y: &FormalSeries<S>, alpha: &S, lambda: &S) -> FormalSeries<S> {
        to_exponential(&series_power(&from_exponential(y), alpha, lambda))
    }

    pub fn series_log_exponential<S: Scalar>(y: &FormalSeries<S>, lambda: &S) -> FormalSeries<S> {
        to_exponential(&series_log(&from_exponential(y), lambda))
    }

    pub fn series_exp_exponential<S: Scalar>(y: &FormalSeries<S>, lambda: &S) -> FormalSeries<S> {
        to_exponential(&series_exp(&from_exponential(y), lambda))
    }
}

/// `binom(α, i) λ^i`, exposed for closed-form checks.
pub fn power_weight<S: Scalar>(alpha: &S, lambda: &S, i: usize) -> S {
    binomial(alpha, i) * lambda.powi(i as i64)
}
