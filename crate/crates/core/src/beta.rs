//! Moments of uniform order statistics and the `n!/Γ(n+1+θ)` expansion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::{gamma_ratio, ln_gamma_ratio, ln_gamma_ratio_correction, rising};

/// Ranks `1 <= r_1 <= ... <= r_k <= n` of uniform order statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSpec {
    n: u64,
    r: Vec<u64>,
}

impl RankSpec {
    pub fn new(n: u64, r: Vec<u64>) -> Result<Self> {
        if n == 0 || r.is_empty() {
            return Err(Error::InvalidArgument("need n >= 1 and at least one rank".into()));
        }
        if r.iter().any(|&ri| ri < 1 || ri > n) {
            return Err(Error::InvalidArgument(format!("ranks {r:?} must lie in [1, {n}]")));
        }
        if r.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!("ranks {r:?} must be nondecreasing")));
        }
        Ok(RankSpec { n, r })
    }

    /// Ranks from depths below the maximum, `r_i = n - s_i`.
    pub fn from_depths(n: u64, s: &[u64]) -> Result<Self> {
        if s.iter().any(|&si| si >= n) {
            return Err(Error::InvalidArgument(format!("depths {s:?} must be below n = {n}")));
        }
        RankSpec::new(n, s.iter().map(|&si| n - si).collect())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ranks(&self) -> &[u64] {
        &self.r
    }

    /// `s_i = n - r_i`, nonincreasing.
    pub fn depths(&self) -> Vec<u64> {
        self.r.iter().map(|&ri| self.n - ri).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector<S = f64> {
    theta: Vec<S>,
}

impl<S: Scalar> ThetaVector<S> {
    pub fn new(theta: Vec<S>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite_value()) {
            return Err(Error::InvalidArgument("theta entries must be finite".into()));
        }
        Ok(ThetaVector { theta })
    }

    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Cumulative tails `θ̄_i = sum_{j>=i} θ_j`.
    pub fn thetabar(&self) -> Vec<S> {
        cumulative_tail(&self.theta)
    }
}

pub fn cumulative_tail<S: Scalar>(v: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); v.len()];
    let mut acc = S::zero();
    for i in (0..v.len()).rev() {
        acc = acc + v[i].clone();
        out[i] = acc.clone();
    }
    out
}

/// `b(α, β : θ) = B(α, β+θ) / B(α, β)`.
///
/// Integer `α`, `β` use `prod_{j=β}^{α+β-1} j/(j+θ)`, which is 1 at `α = 0`.
pub fn beta_ratio<S: Scalar>(alpha: &S, beta: &S, theta: &S) -> Result<S> {
    if alpha.is_negative() || !(beta > &S::zero()) {
        return Err(Error::InvalidArgument(format!("b({alpha}, {beta} : {theta}) needs alpha >= 0, beta > 0")));
    }
    if alpha.is_zero() || theta.is_zero() {
        return Ok(S::one());
    }
    if !(beta.clone() + theta.clone() > S::zero()) {
        return Err(Error::infinite(0, format!("beta + theta = {} <= 0", beta.clone() + theta.clone())));
    }
    if let (Some(a), Some(b)) = (alpha.as_i64(), beta.as_i64()) {
        let mut acc = S::one();
        for j in b..a + b {
            let j = S::int(j);
            acc = acc * j.clone() / (j + theta.clone());
        }
        return Ok(acc);
    }
    let num = gamma_ratio(beta, theta)?;
    let den = gamma_ratio(&(alpha.clone() + beta.clone()), theta)?;
    Ok(num / den)
}

/// `E prod (1 - U_{n,r_i})^{θ_i} = prod b(r_i - r_{i-1}, n - r_i + 1 : θ̄_i)`.
pub fn joint_beta_moment<S: Scalar>(ranks: &RankSpec, theta: &ThetaVector<S>) -> Result<S> {
    if ranks.r.len() != theta.len() {
        return Err(Error::InvalidArgument("rank and theta vectors differ in length".into()));
    }
    let n = ranks.n as i64;
    let tb = theta.thetabar();
    let mut prev = 0i64;
    let mut acc = S::one();
    for (i, (&ri, tbi)) in ranks.r.iter().zip(&tb).enumerate() {
        let ri = ri as i64;
        let beta = S::int(n - ri + 1);
        if ri != prev && !(beta.clone() + tbi.clone() > S::zero()) {
            return Err(Error::infinite(
                i + 1,
                format!("n - r + 1 + thetabar = {} <= 0", beta + tbi.clone()),
            ));
        }
        acc = acc * beta_ratio(&S::int(ri - prev), &beta, tbi)?;
        prev = ri;
    }
    Ok(acc)
}

/// n-free factor `B(s : φ̄) = Γ(s_1+1+φ̄_1)/s_1! prod_{i>=2} b(s_{i-1}-s_i, s_i+1 : φ̄_i)`
/// for already-accumulated `φ̄`.
pub fn n_free_factor<S: Scalar>(s: &[u64], thetabar: &[S]) -> Result<S> {
    if s.is_empty() || s.len() != thetabar.len() {
        return Err(Error::InvalidArgument("depth and theta vectors differ in length".into()));
    }
    if s.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(format!("depths {s:?} must be nonincreasing")));
    }
    let s1 = S::int(s[0] as i64 + 1);
    if !(s1.clone() + thetabar[0].clone() > S::zero()) {
        return Err(Error::infinite(1, format!("s_1 + 1 + thetabar_1 = {} <= 0", s1 + thetabar[0].clone())));
    }
    let mut acc = gamma_ratio(&s1, &thetabar[0])?;
    for i in 1..s.len() {
        let gap = S::int((s[i - 1] - s[i]) as i64);
        let base = S::int(s[i] as i64 + 1);
        if s[i - 1] != s[i] && !(base.clone() + thetabar[i].clone() > S::zero()) {
            return Err(Error::infinite(
                i + 1,
                format!("s + 1 + thetabar = {} <= 0", base + thetabar[i].clone()),
            ));
        }
        acc = acc * beta_ratio(&gap, &base, &thetabar[i])?;
    }
    Ok(acc)
}

/// `n_free_factor` with `θ̄` accumulated from a theta vector.
pub fn n_free_factor_theta<S: Scalar>(s: &[u64], theta: &ThetaVector<S>) -> Result<S> {
    n_free_factor(s, &theta.thetabar())
}

pub const MAX_E_ORDER: usize = 7;

/// Coefficients `e_0(θ)..e_imax(θ)` of `n!/Γ(n+1+θ) = n^{-θ} sum e_i(θ) n^{-i}`.
pub fn gamma_ratio_coeffs<S: Scalar>(theta: &S, imax: usize) -> Result<Vec<S>> {
    if imax > MAX_E_ORDER {
        return Err(Error::UnsupportedOrder(format!("imax = {imax} exceeds {MAX_E_ORDER}")));
    }
    let t = theta.clone();
    let poly = |c: &[i64]| c.iter().fold(S::zero(), |acc, &k| acc * t.clone() + S::int(k));
    let r = |i: usize| rising(&t, i);
    let all = [
        S::one(),
        -r(2) / S::int(2),
        r(3) * poly(&[3, 1]) / S::int(24),
        -r(4) * r(2) / S::int(48),
        r(5) * poly(&[15, 30, 5, -2]) / S::int(120 * 48),
        -r(6) * r(2) * poly(&[3, 7, -2]) / S::int(720 * 16),
        r(7) * poly(&[63, 315, 315, -91, -42, 16]) / S::int(5040 * 576),
        -r(8) * r(2) * poly(&[9, 54, 51, -58, 16]) / S::int(40320 * 144),
    ];
    Ok(all[..=imax].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRatioEval {
    /// `n!/Γ(n+1+θ)`
    pub exact: f64,
    /// `n^{-θ} sum_{i<=imax} e_i n^{-i}`
    pub series: f64,
    /// `n^θ exact - sum_{i<=imax} e_i n^{-i}`, computed without cancellation.
    pub scaled_remainder: f64,
}

pub fn gamma_ratio_eval(n: u64, theta: f64, imax: usize) -> Result<GammaRatioEval> {
    let nf = n as f64;
    if n == 0 || !(nf + 1.0 + theta > 0.0) {
        return Err(Error::infinite(0, format!("n + 1 + theta = {} <= 0", nf + 1.0 + theta)));
    }
    let e = gamma_ratio_coeffs(&theta, imax)?;
    // log of n^θ n!/Γ(n+1+θ)
    let z = nf + 1.0;
    let log_scaled = if z >= 15.0 + 2.0 * theta.abs() && theta.abs() <= 40.0 {
        -theta * (1.0 / nf).ln_1p() - ln_gamma_ratio_correction(z, theta)
    } else {
        theta * nf.ln() - ln_gamma_ratio(z, theta)
    };
    let tail: f64 = e.iter().enumerate().skip(1).rev().map(|(i, ei)| ei * nf.powi(-(i as i32))).sum();
    let scale = nf.powf(-theta);
    Ok(GammaRatioEval {
        exact: scale * log_scaled.exp(),
        series: scale * (1.0 + tail),
        scaled_remainder: log_scaled.exp_m1() - tail,
    })
}
