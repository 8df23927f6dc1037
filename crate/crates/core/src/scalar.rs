//! Scalar abstraction so the same coefficient code runs in `f64` and in
//! exact rational arithmetic.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used by the closed-form regeneration suite.
pub type Exact = BigRational;

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn int(v: i64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_integer(&self) -> bool;

    fn is_finite_value(&self) -> bool;

    /// Integer power. A zero base with a negative exponent is not checked.
    fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `self^e` for real `e`.
    fn pow_real(&self, e: &Self) -> Result<Self>;

    /// `Γ(x + d) / Γ(x)` when `d` is not an integer.
    fn gamma_ratio_nonint(x: &Self, d: &Self) -> Result<Self>;

    /// Integer part, when the value is an integer that fits in i64.
    fn as_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_i64()
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_integer(&self) -> bool {
        self.is_finite() && self.fract() == 0.0
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn powi(&self, e: i64) -> Self {
        match i32::try_from(e) {
            Ok(e) => f64::powi(*self, e),
            Err(_) => self.powf(e as f64),
        }
    }

    fn pow_real(&self, e: &Self) -> Result<Self> {
        let (x, e) = (*self, *e);
        if x > 0.0 {
            return Ok(x.powf(e));
        }
        if x == 0.0 {
            return if e > 0.0 {
                Ok(0.0)
            } else if e == 0.0 {
                Ok(1.0)
            } else {
                Err(Error::Singular(format!("0^{e}")))
            };
        }
        if e.is_integer() {
            Ok(Scalar::powi(&x, e as i64))
        } else {
            Err(Error::Domain(format!("negative base {x} with exponent {e}")))
        }
    }

    fn gamma_ratio_nonint(x: &Self, d: &Self) -> Result<Self> {
        let (x, d) = (*x, *d);
        let (lg_num, s_num) = libm::lgamma_r(x + d);
        let (lg_den, s_den) = libm::lgamma_r(x);
        if !lg_num.is_finite() {
            return Err(Error::infinite(0, format!("Gamma pole at {}", x + d)));
        }
        if !lg_den.is_finite() {
            return Ok(0.0);
        }
        if x > 0.0 && x + d > 0.0 {
            return Ok(crate::special::ln_gamma_ratio(x, d).exp());
        }
        Ok((s_num * s_den) as f64 * (lg_num - lg_den).exp())
    }
}

fn exact_root(v: &BigInt, q: u32) -> Option<BigInt> {
    if v.is_negative() && q % 2 == 0 {
        return None;
    }
    let r = v.nth_root(q);
    if num_traits::pow(r.clone(), q as usize) == *v {
        Some(r)
    } else {
        None
    }
}

impl Scalar for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_integer(&self) -> bool {
        BigRational::is_integer(self)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn pow_real(&self, e: &Self) -> Result<Self> {
        if BigRational::is_integer(e) {
            let k = e
                .to_i64()
                .ok_or_else(|| Error::Inexact(format!("exponent {e} too large")))?;
            if self.is_zero() && k < 0 {
                return Err(Error::Singular(format!("0^{e}")));
            }
            return Ok(Scalar::powi(self, k));
        }
        if self.is_one() {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e.is_positive() {
                Ok(Self::zero())
            } else {
                Err(Error::Singular(format!("0^{e}")))
            };
        }
        // p/q power: exact only when numerator and denominator are perfect q-th powers
        let q = e.denom().to_u32();
        let p = e.numer().to_i64();
        if let (Some(q), Some(p)) = (q, p) {
            if let (Some(rn), Some(rd)) = (exact_root(self.numer(), q), exact_root(self.denom(), q)) {
                let root = BigRational::new(rn, rd);
                return Ok(Scalar::powi(&root, p));
            }
        }
        Err(Error::Inexact(format!("{self}^({e})")))
    }

    fn gamma_ratio_nonint(x: &Self, d: &Self) -> Result<Self> {
        Err(Error::Inexact(format!("Gamma({x} + {d}) / Gamma({x})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rational_powers() {
        let x = Exact::ratio(9, 4);
        assert_eq!(x.pow_real(&Exact::ratio(1, 2)).unwrap(), Exact::ratio(3, 2));
        assert_eq!(x.pow_real(&Exact::ratio(-3, 2)).unwrap(), Exact::ratio(8, 27));
        assert!(matches!(
            Exact::int(2).pow_real(&Exact::ratio(1, 2)),
            Err(Error::Inexact(_))
        ));
        assert_eq!(Scalar::powi(&Exact::ratio(2, 3), -2), Exact::ratio(9, 4));
    }

    #[test]
    fn float_powers() {
        assert_eq!(Scalar::powi(&2.0f64, 10), 1024.0);
        assert!((-8.0f64).pow_real(&(1.0 / 3.0)).is_err());
        assert_eq!((-2.0f64).pow_real(&3.0).unwrap(), -8.0);
        assert!(0.0f64.pow_real(&-1.0).is_err());
    }
}
