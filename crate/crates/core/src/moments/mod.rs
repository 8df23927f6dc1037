//! Asymptotic expansions of joint moments of the top order statistics in
//! powers of `n^{-1}` and `n^{-a}`.

mod expansion;
mod specialized;

pub use expansion::{evaluate_expansion, Evaluation, ExpansionSeries};
pub use specialized::{
    covariance_expansion, covariance_series, ec, leading_product_moment, mean_expansion,
    pair_moment_expansion, product_moment_factors, third_cumulant_expansion, CovarianceReport,
    LeadingProductMoment, ThirdCumulant,
};

use std::collections::BTreeMap;


use crate::beta::{cumulative_tail, gamma_ratio_coeffs, n_free_factor, MAX_E_ORDER};
use crate::error::{Error, Result};
use crate::quantile::{quantile_series, QuantilePowerSeries, TailModel};
use crate::scalar::Scalar;

/// `E prod_i X_{n,n-s_i}^{θ_i}` for a given tail, truncated at `imax` in the
/// Gamma-ratio series and `jmax` in the tail series.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentQuery<S = f64> {
    tail: TailModel<S>,
    s: Vec<u64>,
    theta: Vec<S>,
    imax: usize,
    jmax: usize,
}

impl<S: Scalar> MomentQuery<S> {
    pub fn new(tail: TailModel<S>, s: Vec<u64>, theta: Vec<S>, imax: usize, jmax: usize) -> Result<Self> {
        if s.is_empty() || s.len() != theta.len() {
            return Err(Error::InvalidArgument("s and theta must be nonempty and of equal length".into()));
        }
        if s.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("s = {s:?} must be nonincreasing")));
        }
        if imax > MAX_E_ORDER {
            return Err(Error::UnsupportedOrder(format!("imax = {imax} exceeds {MAX_E_ORDER}")));
        }
        if jmax > tail.order() {
            return Err(Error::OutOfRange(format!(
                "jmax = {jmax} exceeds the tail order {}",
                tail.order()
            )));
        }
        let q = MomentQuery { tail, s, theta, imax, jmax };
        q.check_finite()?;
        Ok(q)
    }

    /// All moments exist iff `θ̄_i < (s_i + 1) α` at every untied position.
    fn check_finite(&self) -> Result<()> {
        let tb = cumulative_tail(&self.theta);
        for i in 0..self.s.len() {
            if i > 0 && self.s[i] == self.s[i - 1] {
                continue;
            }
            let bound = S::int(self.s[i] as i64 + 1) * self.tail.alpha().clone();
            if !(tb[i] < bound) {
                return Err(Error::infinite(
                    i + 1,
                    format!("thetabar = {} is not below (s + 1) alpha = {}", tb[i], bound),
                ));
            }
        }
        Ok(())
    }

    pub fn tail(&self) -> &TailModel<S> {
        &self.tail
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    pub fn imax(&self) -> usize {
        self.imax
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    /// `ψ = θ/α`
    pub fn psi(&self) -> Vec<S> {
        self.theta.iter().map(|t| t.clone() / self.tail.alpha().clone()).collect()
    }

    /// `ψ̄_1 = sum ψ_i`
    pub fn psibar1(&self) -> S {
        self.psi().into_iter().fold(S::zero(), |acc, p| acc + p)
    }

    fn quantile_series(&self) -> Result<Vec<QuantilePowerSeries<S>>> {
        let tail = self.tail.truncate(self.jmax)?;
        let mut out: Vec<QuantilePowerSeries<S>> = Vec::with_capacity(self.k());
        for (m, t) in self.theta.iter().enumerate() {
            match self.theta[..m].iter().position(|u| u == t) {
                Some(p) => out.push(out[p].clone()),
                None => out.push(quantile_series(&tail, t)?),
            }
        }
        Ok(out)
    }
}

/// Every composition of `j` into `k` nonnegative parts.
fn compositions(j: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![j]];
    }
    let mut out = Vec::new();
    for first in 0..=j {
        for mut rest in compositions(j - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn cj_with_series<S: Scalar>(
    query: &MomentQuery<S>,
    series: &[QuantilePowerSeries<S>],
    j: usize,
) -> Result<S> {
    let a = query.tail.a();
    let psibar = cumulative_tail(&query.psi());
    let mut total = S::zero();
    for comp in compositions(j, query.k()) {
        let mut prod = S::one();
        for (m, &im) in comp.iter().enumerate() {
            prod = prod * series[m].coeff(im).clone();
        }
        if prod.is_zero() {
            continue;
        }
        let ibar = cumulative_tail(&comp.iter().map(|&i| S::int(i as i64)).collect::<Vec<_>>());
        let phibar: Vec<S> = ibar
            .into_iter()
            .zip(&psibar)
            .map(|(ib, pb)| ib * a.clone() - pb.clone())
            .collect();
        total = total + prod * n_free_factor(&query.s, &phibar)?;
    }
    Ok(total)
}

/// `C_j(s:ψ) = sum over compositions of j of prod C_{i_m,ψ_m} B(s : ī a - ψ̄)`.
pub fn cj_coeff<S: Scalar>(query: &MomentQuery<S>, j: usize) -> Result<S> {
    if j > query.jmax {
        return Err(Error::OutOfRange(format!("j = {j} exceeds jmax = {}", query.jmax)));
    }
    cj_with_series(query, &query.quantile_series()?, j)
}

/// Raw expansion `E prod X^θ = n^{ψ̄_1} sum_{i,j} e_i(ja - ψ̄_1) C_j(s:ψ) n^{-i-ja}`.
pub fn moment_expansion<S: Scalar>(query: &MomentQuery<S>) -> Result<ExpansionSeries<S>> {
    let series = query.quantile_series()?;
    let a = query.tail.a();
    let psibar1 = query.psibar1();
    let mut terms = BTreeMap::new();
    for j in 0..=query.jmax {
        let cj = cj_with_series(query, &series, j)?;
        let shift = a.clone() * S::int(j as i64) - psibar1.clone();
        for (i, ei) in gamma_ratio_coeffs(&shift, query.imax)?.into_iter().enumerate() {
            terms.insert((i, j), ei * cj.clone());
        }
    }
    ExpansionSeries::new(psibar1, a, terms, query.imax, query.jmax)
}

/// Regrouping on the `n^{-1/N}` grid when `a = M/N`:
/// `d_m = sum { e_i(ja - ψ̄_1) C_j : iN + jM = m }`.
pub fn dm_coeffs<S: Scalar>(query: &MomentQuery<S>, big_m: u32, big_n: u32, mmax: usize) -> Result<Vec<S>> {
    if big_m == 0 || big_n == 0 || gcd(big_m, big_n) != 1 {
        return Err(Error::InvalidArgument(format!("{big_m}/{big_n} is not a reduced positive fraction")));
    }
    let a = query.tail.a().to_f64_lossy();
    if (a - big_m as f64 / big_n as f64).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("a = {a} differs from {big_m}/{big_n}")));
    }
    let (bm, bn) = (big_m as usize, big_n as usize);
    if mmax > bn * query.imax || mmax / bm > query.jmax {
        return Err(Error::OutOfRange(format!(
            "mmax = {mmax} needs imax >= {} and jmax >= {}",
            mmax.div_ceil(bn),
            mmax / bm
        )));
    }
    let series = moment_expansion(query)?;
    let mut out = vec![S::zero(); mmax + 1];
    for ((i, j), c) in series.terms() {
        let m = i * bn + j * bm;
        if m <= mmax {
            out[m] = out[m].clone() + c.clone();
        }
    }
    Ok(out)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests;
