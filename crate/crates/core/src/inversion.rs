//! Series reversion on a stretched grid.
//!
//! Given `v/u = sum x_i u^{ia}`, produce `(u/v)^k = sum x*_i v^{ia}`.


use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{exponential, BellTable, FormalSeries};
use crate::special::{factorial, rising};

pub fn invert_series<S: Scalar>(x: &FormalSeries<S>, a: &S, k: u32) -> Result<FormalSeries<S>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be a positive integer".into()));
    }
    if !a.is_finite_value() {
        return Err(Error::InvalidArgument(format!("a = {a} is not finite")));
    }
    let x0 = x.coeff(0).clone();
    if x0.is_zero() {
        return Err(Error::Singular("x_0 = 0 cannot be inverted".into()));
    }
    let kk = S::int(k as i64);
    let table = BellTable::new(x);
    let neg_inv = -(S::one() / x0.clone());
    let mut out = Vec::with_capacity(x.order() + 1);
    out.push(x0.powi(-(k as i64)));
    for i in 1..=x.order() {
        let n = kk.clone() + a.clone() * S::int(i as i64);
        let n1 = n.clone() + S::one();
        let mut acc = S::zero();
        let mut neg_pow = S::one();
        for j in 1..=i {
            neg_pow = neg_pow * neg_inv.clone();
            let term = rising(&n1, j - 1) * table.get(i, j)?.clone() * neg_pow.clone()
                / factorial::<S>(j);
            acc = acc + term;
        }
        let lead = x0.pow_real(&-n)?;
        out.push(kk.clone() * lead * acc);
    }
    FormalSeries::new(out)
}

/// Exponential-weight variant: with `v/u = sum y_i u^{ia}/i!`, returns `y*`
/// such that `(u/v)^k = sum y*_i v^{ia}/i!`, i.e. `y*_i = i! x*_i`.
pub fn invert_series_exponential<S: Scalar>(y: &FormalSeries<S>, a: &S, k: u32) -> Result<FormalSeries<S>> {
    let x = exponential::from_exponential(y);
    Ok(exponential::to_exponential(&invert_series(&x, a, k)?))
}

/// `X*(t X(t)^a) X(t)^k - 1` on the `t = u^a` grid; identically zero when
/// `x_star` inverts `x`.
pub fn round_trip_residual<S: Scalar>(
    x: &FormalSeries<S>,
    x_star: &FormalSeries<S>,
    a: &S,
    k: u32,
) -> Result<FormalSeries<S>> {
    let m = x.order().min(x_star.order());
    let x = x.truncate(m)?;
    let xa = x.pow(a)?;
    // t * X(t)^a, shifted one place
    let mut tau = vec![S::zero(); m + 1];
    for i in 1..=m {
        tau[i] = xa.coeff(i - 1).clone();
    }
    let tau = FormalSeries::new(tau)?;
    let composed = x_star.truncate(m)?.compose(&tau)?;
    let product = composed.mul(&x.powi(k));
    Ok(product.sub(&FormalSeries::one(m)))
}
