//! Named special cases of the generic pipeline: means, pair moments,
//! covariances, third cumulants and leading product moments of the
//! normalised order statistics `Y_{ns} = X_{n,n-s}/(n c0)^{1/α}`.

use serde::Serialize;

use super::{moment_expansion, ExpansionSeries, MomentQuery};
use crate::beta::n_free_factor;
use crate::error::{Error, Result};
use crate::quantile::TailModel;
use crate::scalar::Scalar;
use crate::series::FormalSeries;

/// `E prod_i Y_{n s_i}` (all powers one), normalised.
fn unit_product<S: Scalar>(tail: &TailModel<S>, s: &[u64], imax: usize, jmax: usize) -> Result<ExpansionSeries<S>> {
    let mut s = s.to_vec();
    s.sort_unstable_by(|x, y| y.cmp(x));
    let theta = vec![S::one(); s.len()];
    let q = MomentQuery::new(tail.clone(), s, theta, imax, jmax)?;
    moment_expansion(&q)?.normalized(tail.c0())
}

/// `E Y_{ns}`.
pub fn mean_expansion<S: Scalar>(tail: &TailModel<S>, s: u64, imax: usize, jmax: usize) -> Result<ExpansionSeries<S>> {
    unit_product(tail, &[s], imax, jmax)
}

/// `E Y_{n s1} Y_{n s2}`; the order of `s1`, `s2` does not matter.
pub fn pair_moment_expansion<S: Scalar>(
    tail: &TailModel<S>,
    s1: u64,
    s2: u64,
    imax: usize,
    jmax: usize,
) -> Result<ExpansionSeries<S>> {
    unit_product(tail, &[s1, s2], imax, jmax)
}

/// `Cov(Y_{n s1}, Y_{n s2})` as an expansion.
pub fn covariance_series<S: Scalar>(
    tail: &TailModel<S>,
    s1: u64,
    s2: u64,
    imax: usize,
    jmax: usize,
) -> Result<ExpansionSeries<S>> {
    let pair = pair_moment_expansion(tail, s1, s2, imax, jmax)?;
    let m1 = mean_expansion(tail, s1, imax, jmax)?;
    let m2 = mean_expansion(tail, s2, imax, jmax)?;
    pair.sub(&m1.mul(&m2)?)
}

/// `E_c = λ c0^{-a-1} c1`
pub fn ec<S: Scalar>(tail: &TailModel<S>) -> Result<S> {
    let c1 = tail.c().get(1).cloned().unwrap_or_else(S::zero);
    let e = -(tail.a() + S::one());
    Ok(tail.lambda() * tail.c0().pow_real(&e)? * c1)
}

/// Tail with `c0 = 1`, `c1 = α`, so that `E_c = 1`. Normalised coefficients
/// depend on the tail only through `E_c` at first order in `n^{-a}`.
fn unit_ec_tail<S: Scalar>(tail: &TailModel<S>) -> Result<TailModel<S>> {
    let c = FormalSeries::new(vec![S::one(), tail.alpha().clone()])?;
    TailModel::new(tail.alpha().clone(), tail.beta().clone(), c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport<S = f64> {
    pub f0: S,
    pub f1: S,
    pub f2: S,
    pub ec: S,
    pub b20: S,
    pub da: S,
    /// `min(a, 1)`
    pub a0: f64,
    /// The remainder is `O(n^{-2 a0})`.
    pub remainder_exponent: f64,
}

/// `Cov(Y_{n s1}, Y_{n s2}) = F0 + F1/n + E_c F2/n^a + O(n^{-2 a0})`.
pub fn covariance_expansion<S: Scalar>(tail: &TailModel<S>, s1: u64, s2: u64) -> Result<CovarianceReport<S>> {
    let unit = unit_ec_tail(tail)?;
    let cov = covariance_series(&unit, s1, s2, 1, 1)?;
    let pair = pair_moment_expansion(&unit, s1, s2, 1, 1)?;
    let a0 = tail.a().to_f64_lossy().min(1.0);
    Ok(CovarianceReport {
        f0: cov.coefficient(0, 0),
        f1: cov.coefficient(1, 0),
        f2: cov.coefficient(0, 1),
        ec: ec(tail)?,
        b20: pair.coefficient(0, 0),
        da: pair.coefficient(0, 1),
        a0,
        remainder_exponent: 2.0 * a0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdCumulant<S = f64> {
    pub kappa0: S,
    pub kappa1: S,
    pub kappa_a: S,
    /// Full expansion of the joint cumulant on the requested grid.
    pub series: ExpansionSeries<S>,
}

fn require_unit_alpha<S: Scalar>(tail: &TailModel<S>) -> Result<()> {
    if !tail.alpha().is_one() {
        return Err(Error::InvalidArgument(format!("alpha = {} but this form needs alpha = 1", tail.alpha())));
    }
    Ok(())
}

/// Joint cumulant `κ(Y_{n s1}, Y_{n s2}, Y_{n s3}) = κ0 + κ1/n + E_c κ_a/n^a + ...`
/// for `α = 1`, built from the moment expansions.
pub fn third_cumulant_expansion<S: Scalar>(
    tail: &TailModel<S>,
    s: [u64; 3],
    imax: usize,
    jmax: usize,
) -> Result<ThirdCumulant<S>> {
    require_unit_alpha(tail)?;
    if s[0] < s[1] || s[1] < s[2] {
        return Err(Error::InvalidArgument(format!("s = {s:?} must be nonincreasing")));
    }
    let series = third_cumulant_series(tail, s, imax, jmax)?;
    let unit = third_cumulant_series(&unit_ec_tail(tail)?, s, 1, 1)?;
    Ok(ThirdCumulant {
        kappa0: unit.coefficient(0, 0),
        kappa1: unit.coefficient(1, 0),
        kappa_a: unit.coefficient(0, 1),
        series,
    })
}

fn third_cumulant_series<S: Scalar>(tail: &TailModel<S>, s: [u64; 3], imax: usize, jmax: usize) -> Result<ExpansionSeries<S>> {
    let m = |v: &[u64]| unit_product(tail, v, imax, jmax);
    let [a, b, c] = s;
    let (ma, mb, mc) = (m(&[a])?, m(&[b])?, m(&[c])?);
    let mut out = m(&[a, b, c])?;
    out = out.sub(&m(&[a, b])?.mul(&mc)?)?;
    out = out.sub(&m(&[a, c])?.mul(&mb)?)?;
    out = out.sub(&m(&[b, c])?.mul(&ma)?)?;
    out.add(&ma.mul(&mb)?.mul(&mc)?.scale(&S::int(2)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingProductMoment<S = f64> {
    pub m0: S,
    pub m1: S,
    /// Includes the factor `E_c`.
    pub ma: S,
    pub ec: S,
    pub b_k0: S,
    /// `B_{k1}..B_{kk}`
    pub b_kj: Vec<S>,
}

/// `B_{k0} = B(s : -1̄)` and `B_{kj} = B(s : a I_j - 1̄)`, where `I_j` has ones
/// in its first `j` places.
pub fn product_moment_factors<S: Scalar>(s: &[u64], a: &S) -> Result<(S, Vec<S>)> {
    let k = s.len();
    let base: Vec<S> = (0..k).map(|m| -S::int((k - m) as i64)).collect();
    let b0 = n_free_factor(s, &base)?;
    let mut bj = Vec::with_capacity(k);
    for j in 1..=k {
        let phibar: Vec<S> = base
            .iter()
            .enumerate()
            .map(|(m, b)| if m < j { b.clone() + a.clone() } else { b.clone() })
            .collect();
        bj.push(n_free_factor(s, &phibar)?);
    }
    Ok((b0, bj))
}

/// `E prod Y_{n s_i} = m0 + m1/n + ma/n^a + O(n^{-2 a0})` for `α = 1`.
pub fn leading_product_moment<S: Scalar>(tail: &TailModel<S>, s: &[u64]) -> Result<LeadingProductMoment<S>> {
    require_unit_alpha(tail)?;
    if s.is_empty() || s.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("s = {s:?} must be nonempty and nonincreasing")));
    }
    let series = unit_product(tail, s, 1, 1.min(tail.order()))?;
    let (b_k0, b_kj) = product_moment_factors(s, &tail.a())?;
    Ok(LeadingProductMoment {
        m0: series.coefficient(0, 0),
        m1: series.coefficient(1, 0),
        ma: series.coefficient(0, 1),
        ec: ec(tail)?,
        b_k0,
        b_kj,
    })
}
