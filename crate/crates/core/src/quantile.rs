//! Tail models `1 - F(x) = x^{-α} sum c_i x^{-iβ}` and the matching quantile
//! power series `F^{-1}(u)^θ = sum C_{iψ} (1-u)^{ia-ψ}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inversion::invert_series;
use crate::scalar::Scalar;
use crate::series::{series_power, FormalSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct TailModel<S = f64> {
    alpha: S,
    beta: S,
    c: FormalSeries<S>,
}

impl<S: Scalar> TailModel<S> {
    pub fn new(alpha: S, beta: S, c: FormalSeries<S>) -> Result<Self> {
        if !(alpha > S::zero()) || !alpha.is_finite_value() {
            return Err(Error::InvalidArgument(format!("tail index alpha = {alpha} must be positive")));
        }
        if !(beta > S::zero()) || !beta.is_finite_value() {
            return Err(Error::InvalidArgument(format!("gap beta = {beta} must be positive")));
        }
        if !(c.coeff(0).clone() > S::zero()) {
            return Err(Error::InvalidArgument(format!("c_0 = {} must be positive", c.coeff(0))));
        }
        Ok(TailModel { alpha, beta, c })
    }

    /// Pure Pareto tail `c0 x^{-α}`, padded with zeros to `order`.
    pub fn pareto(alpha: S, c0: S, order: usize) -> Result<Self> {
        let mut c = FormalSeries::zeros(order).into_coeffs();
        c[0] = c0;
        let beta = alpha.clone();
        TailModel::new(alpha, beta, FormalSeries::new(c)?)
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    /// `a = β/α`
    pub fn a(&self) -> S {
        self.beta.clone() / self.alpha.clone()
    }

    /// `λ = 1/α`
    pub fn lambda(&self) -> S {
        S::one() / self.alpha.clone()
    }

    pub fn c(&self) -> &FormalSeries<S> {
        &self.c
    }

    pub fn c0(&self) -> &S {
        self.c.coeff(0)
    }

    pub fn order(&self) -> usize {
        self.c.order()
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        Ok(TailModel {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            c: self.c.truncate(order)?,
        })
    }

    /// Tail of `scale * X`: `c_i -> scale^{α+iβ} c_i`.
    pub fn scaled(&self, scale: &S) -> Result<Self> {
        let mut c = Vec::with_capacity(self.order() + 1);
        for (i, ci) in self.c.coeffs().iter().enumerate() {
            let e = self.alpha.clone() + self.beta.clone() * S::int(i as i64);
            c.push(ci.clone() * scale.pow_real(&e)?);
        }
        TailModel::new(self.alpha.clone(), self.beta.clone(), FormalSeries::new(c)?)
    }
}

impl TailModel<f64> {
    /// Truncated tail sum `x^{-α} sum_{i<=m} c_i x^{-iβ}`.
    pub fn survival(&self, x: f64) -> f64 {
        let w = x.powf(-self.beta);
        let poly = self.c.coeffs().iter().rev().fold(0.0, |acc, c| acc * w + c);
        x.powf(-self.alpha) * poly
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantilePowerSeries<S = f64> {
    theta: S,
    psi: S,
    a: S,
    coeffs: FormalSeries<S>,
}

impl<S: Scalar> QuantilePowerSeries<S> {
    pub fn theta(&self) -> &S {
        &self.theta
    }

    pub fn psi(&self) -> &S {
        &self.psi
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn coeffs(&self) -> &FormalSeries<S> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &S {
        self.coeffs.coeff(i)
    }

    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    /// Exponent of `(1-u)` carried by coefficient `i`.
    pub fn exponent(&self, i: usize) -> S {
        self.a.clone() * S::int(i as i64) - self.psi.clone()
    }

    /// Product of two powers of the same quantile function.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let gap = (self.a.clone() - other.a.clone()).abs().to_f64_lossy();
        if gap > 1e-12 {
            return Err(Error::InvalidArgument("quantile series live on different grids".into()));
        }
        Ok(QuantilePowerSeries {
            theta: self.theta.clone() + other.theta.clone(),
            psi: self.psi.clone() + other.psi.clone(),
            a: self.a.clone(),
            coeffs: self.coeffs.mul(&other.coeffs),
        })
    }
}

/// `C_{iψ} = c0^ψ Ĉ_i(-ψ, c0, x*)` with `x*` the reversion of the tail at `k = 1`.
pub fn quantile_series<S: Scalar>(tail: &TailModel<S>, theta: &S) -> Result<QuantilePowerSeries<S>> {
    if !theta.is_finite_value() {
        return Err(Error::InvalidArgument(format!("theta = {theta} is not finite")));
    }
    let a = tail.a();
    let psi = theta.clone() / tail.alpha.clone();
    let x_star = invert_series(&tail.c, &a, 1)?;
    let c0 = tail.c0().clone();
    let lead = c0.pow_real(&psi)?;
    let coeffs = series_power(&x_star, &-psi.clone(), &c0).scale(&lead);
    Ok(QuantilePowerSeries {
        theta: theta.clone(),
        psi,
        a,
        coeffs,
    })
}

/// Rebase known `θ = 1` quantile coefficients `d_i` to power `θ`:
/// `C_{iψ} = d0^θ Ĉ_i(θ, 1/d0, d)`.
pub fn quantile_from_known<S: Scalar>(
    d: &FormalSeries<S>,
    alpha: &S,
    a: &S,
    theta: &S,
) -> Result<QuantilePowerSeries<S>> {
    let d0 = d.coeff(0).clone();
    if d0.is_zero() {
        return Err(Error::Singular("d_0 = 0".into()));
    }
    let lead = d0.pow_real(theta)?;
    let coeffs = series_power(d, theta, &(S::one() / d0)).scale(&lead);
    Ok(QuantilePowerSeries {
        theta: theta.clone(),
        psi: theta.clone() / alpha.clone(),
        a: a.clone(),
        coeffs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialSum {
    pub value: f64,
    /// Magnitude of the last retained term.
    pub last_term: f64,
}

/// Partial sum of the quantile power series at `u`.
pub fn eval_quantile_partial<S: Scalar>(q: &QuantilePowerSeries<S>, u: f64) -> Result<PartialSum> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!("u = {u} outside (0, 1)")));
    }
    eval_upper_partial(q, 1.0 - u)
}

/// Same as [`eval_quantile_partial`] but parameterised by the upper-tail
/// probability `v = 1 - u`, which avoids rounding `u` near 1.
pub fn eval_upper_partial<S: Scalar>(q: &QuantilePowerSeries<S>, v: f64) -> Result<PartialSum> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("1 - u = {v} outside (0, 1)")));
    }
    let lv = v.ln();
    let mut value = 0.0;
    let mut last = 0.0;
    for i in 0..=q.order() {
        let term = q.coeff(i).to_f64_lossy() * (q.exponent(i).to_f64_lossy() * lv).exp();
        value += term;
        last = term.abs();
    }
    Ok(PartialSum { value, last_term: last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cauchy_tail(order: usize) -> TailModel<f64> {
        let c = (0..=order)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / ((2 * i + 1) as f64 * PI))
            .collect();
        TailModel::new(1.0, 2.0, FormalSeries::new(c).unwrap()).unwrap()
    }

    #[test]
    fn pareto_inverts_exactly() {
        let tail = TailModel::pareto(1.0, 1.0, 4).unwrap();
        let q = quantile_series(&tail, &1.0).unwrap();
        assert_eq!(q.coeffs().coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = eval_quantile_partial(&q, 0.9).unwrap();
        assert!((p.value - 10.0).abs() < 1e-12);
    }

    #[test]
    fn first_coefficient_closed_form() {
        let c = vec![Exact::ratio(5, 2), Exact::ratio(-3, 4), Exact::ratio(1, 3)];
        let tail = TailModel::new(Exact::int(2), Exact::int(4), FormalSeries::new(c.clone()).unwrap()).unwrap();
        let theta = Exact::int(4);
        let q = quantile_series(&tail, &theta).unwrap();
        let (psi, a) = (Exact::int(2), Exact::int(2));
        let expect = psi.clone() * c[0].powi(2 - 2 - 1) * c[1].clone();
        assert_eq!(q.coeff(1).clone(), expect);
        assert_eq!(q.coeff(0).clone(), c[0].powi(2));
        // C_2 = ψ c0^{ψ-2a-2}{c0 c2 + (ψ-2a-1) c1^2/2}
        let c2 = psi.clone() * c[0].powi(2 - 4 - 2)
            * (c[0].clone() * c[2].clone()
                + (psi - Exact::int(2) * a - Exact::int(1)) * c[1].powi(2) / Exact::int(2));
        assert_eq!(q.coeff(2).clone(), c2);
    }

    #[test]
    fn cauchy_quantile() {
        let q = quantile_series(&cauchy_tail(6), &1.0).unwrap();
        assert!((q.coeff(0) - 1.0 / PI).abs() < 1e-15);
        assert!((q.coeff(1) + PI / 3.0).abs() < 1e-14);
        let p = eval_quantile_partial(&q, 0.99).unwrap();
        let truth = 1.0 / (0.01 * PI).tan();
        assert!((p.value - truth).abs() <= p.last_term.max(1e-12));
        assert!((truth - 31.820515953773935).abs() < 1e-9);
    }

    #[test]
    fn frechet_quantile() {
        let c = (0..=6).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / crate::special::factorial::<f64>(i + 1)).collect();
        let tail = TailModel::new(1.0, 1.0, FormalSeries::new(c).unwrap()).unwrap();
        let q = quantile_series(&tail, &1.0).unwrap();
        let p = eval_quantile_partial(&q, 0.99).unwrap();
        let truth = -1.0 / 0.99f64.ln();
        assert!((truth - 99.49916247).abs() < 1e-7);
        assert!((p.value - truth).abs() <= 10.0 * p.last_term);
    }

    #[test]
    fn known_coefficients_rebase() {
        let d = FormalSeries::new(vec![2.0, 0.0, 0.0]).unwrap();
        let q = quantile_from_known(&d, &1.0, &1.0, &3.0).unwrap();
        assert_eq!(q.coeffs().coeffs(), &[8.0, 0.0, 0.0]);
        let d = FormalSeries::new(vec![0.7, -0.2, 0.05]).unwrap();
        let q = quantile_from_known(&d, &1.0, &2.0, &1.0).unwrap();
        for i in 0..3 {
            assert!((q.coeff(i) - d.coeff(i)).abs() < 1e-15);
        }
        let tail = cauchy_tail(5);
        let d = quantile_series(&tail, &1.0).unwrap();
        let rebased = quantile_from_known(d.coeffs(), &1.0, &2.0, &2.0).unwrap();
        let direct = quantile_series(&tail, &2.0).unwrap();
        for i in 0..=5 {
            assert!((rebased.coeff(i) - direct.coeff(i)).abs() < 1e-12 * direct.coeff(i).abs().max(1.0));
        }
        assert!(quantile_from_known(&FormalSeries::new(vec![0.0, 1.0]).unwrap(), &1.0, &1.0, &1.0).is_err());
    }

    #[test]
    fn domain_checks() {
        let q = quantile_series(&cauchy_tail(2), &1.0).unwrap();
        assert!(eval_quantile_partial(&q, 1.0).is_err());
        assert!(eval_quantile_partial(&q, 0.0).is_err());
        assert!(TailModel::new(1.0, 1.0, FormalSeries::new(vec![-1.0]).unwrap()).is_err());
        assert!(TailModel::new(0.0, 1.0, FormalSeries::new(vec![1.0]).unwrap()).is_err());
    }

    fn tail_strategy() -> impl Strategy<Value = TailModel<f64>> {
        (0.5f64..3.0, 0.5f64..3.0, 0.3f64..2.0, prop::collection::vec(-1.0f64..1.0, 6)).prop_map(
            |(alpha, beta, c0, rest)| {
                let mut c = vec![c0];
                c.extend(rest);
                TailModel::new(alpha, beta, FormalSeries::new(c).unwrap()).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn scale_equivariance(tail in tail_strategy(), lam in 0.5f64..2.0, theta in -2.0f64..3.0) {
            let q = quantile_series(&tail, &theta).unwrap();
            let qs = quantile_series(&tail.scaled(&lam).unwrap(), &theta).unwrap();
            let k = lam.powf(theta);
            let scale = qs.coeffs().coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..=q.order() {
                let (p, r) = (qs.coeff(i), q.coeff(i) * k);
                prop_assert!((p - r).abs() <= 1e-10 * scale.max(1.0), "{} {}", p, r);
            }
        }

        #[test]
        fn scale_equivariance_exact(
            beta in 1i64..4,
            c in prop::collection::vec((-9i64..10, 1i64..6), 4),
            lam in (1i64..5, 1i64..5),
            theta in -3i64..4,
        ) {
            let mut c: Vec<Exact> = c.into_iter().map(|(p, q)| Exact::ratio(p, q)).collect();
            c[0] = c[0].clone() * c[0].clone() + Exact::int(1);
            let tail = TailModel::new(Exact::int(1), Exact::int(beta), FormalSeries::new(c).unwrap()).unwrap();
            let lam = Exact::ratio(lam.0, lam.1);
            let theta = Exact::int(theta);
            let q = quantile_series(&tail, &theta).unwrap();
            let qs = quantile_series(&tail.scaled(&lam).unwrap(), &theta).unwrap();
            let k = lam.pow_real(&theta).unwrap();
            for i in 0..=q.order() {
                prop_assert_eq!(qs.coeff(i).clone(), q.coeff(i).clone() * k.clone());
            }
        }

        #[test]
        fn power_consistency(tail in tail_strategy(), t1 in -2.0f64..3.0, t2 in -2.0f64..3.0) {
            let prod = quantile_series(&tail, &t1).unwrap().mul(&quantile_series(&tail, &t2).unwrap()).unwrap();
            let direct = quantile_series(&tail, &(t1 + t2)).unwrap();
            let scale = direct.coeffs().coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..=direct.order() {
                prop_assert!((prod.coeff(i) - direct.coeff(i)).abs() <= 1e-10 * scale.max(1.0));
            }
        }
    }
}
