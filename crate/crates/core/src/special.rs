//! Factorial powers, Gamma ratios and Bernoulli numbers.


use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorialKind {
    /// `(x)_i = x(x+1)...(x+i-1)`
    Rising,
    /// `<x>_i = x(x-1)...(x-i+1)`
    Falling,
}

pub fn factorial_power<S: Scalar>(x: &S, i: usize, kind: FactorialKind) -> S {
    let mut acc = S::one();
    let mut t = x.clone();
    for _ in 0..i {
        acc = acc * t.clone();
        t = match kind {
            FactorialKind::Rising => t + S::one(),
            FactorialKind::Falling => t - S::one(),
        };
    }
    acc
}

pub fn rising<S: Scalar>(x: &S, i: usize) -> S {
    factorial_power(x, i, FactorialKind::Rising)
}

pub fn falling<S: Scalar>(x: &S, i: usize) -> S {
    factorial_power(x, i, FactorialKind::Falling)
}

pub fn factorial<S: Scalar>(i: usize) -> S {
    rising(&S::one(), i)
}

/// Generalised binomial coefficient `alpha choose i`.
pub fn binomial<S: Scalar>(alpha: &S, i: usize) -> S {
    falling(alpha, i) / factorial::<S>(i)
}

/// `Γ(x + d) / Γ(x)`.
///
/// Integer shifts use the product form, which is the analytic continuation
/// and never touches a Gamma pole of the denominator. A pole of the numerator
/// is reported as an infinite moment.
pub fn gamma_ratio<S: Scalar>(x: &S, d: &S) -> Result<S> {
    if let Some(k) = d.as_i64() {
        if k >= 0 {
            return Ok(rising(x, k as usize));
        }
        let den = falling(&(x.clone() - S::one()), k.unsigned_abs() as usize);
        if den.is_zero() {
            return Err(Error::infinite(0, format!("Gamma({} + {}) has a pole", x, d)));
        }
        return Ok(S::one() / den);
    }
    S::gamma_ratio_nonint(x, d)
}

/// Bernoulli numbers `B_0 ..= B_22` (with `B_1 = -1/2`).
pub const BERNOULLI: [f64; 23] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
];

/// Exact Bernoulli number `B_{2m}` for `m <= 11`.
pub fn bernoulli_even<S: Scalar>(m: usize) -> Result<S> {
    const TABLE: [(i64, i64); 12] = [
        (1, 1),
        (1, 6),
        (-1, 30),
        (1, 42),
        (-1, 30),
        (5, 66),
        (-691, 2730),
        (7, 6),
        (-3617, 510),
        (43867, 798),
        (-174611, 330),
        (854513, 138),
    ];
    TABLE
        .get(m)
        .map(|&(p, q)| S::ratio(p, q))
        .ok_or_else(|| Error::UnsupportedOrder(format!("B_{} not tabulated", 2 * m)))
}

/// Bernoulli polynomial `B_m(x)` for `m <= 22`.
pub fn bernoulli_poly(m: usize, x: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=m {
        acc += binom * BERNOULLI[j] * x.powi((m - j) as i32);
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    acc
}

const ASYMPTOTIC_TERMS: usize = 21;

/// Correction part of the asymptotic expansion of
/// `ln Γ(z + d) - ln Γ(z) - d ln z`, summed smallest term first.
pub(crate) fn ln_gamma_ratio_correction(z: f64, d: f64) -> f64 {
    let mut acc = 0.0;
    for k in (1..=ASYMPTOTIC_TERMS).rev() {
        let diff = bernoulli_poly(k + 1, d) - BERNOULLI[k + 1];
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * diff / ((k * (k + 1)) as f64 * z.powi(k as i32));
    }
    acc
}

/// `ln Γ(z + d) - ln Γ(z)` for `z > 0`, `z + d > 0`, accurate to a few ulps of
/// the result even when `d` is small compared to `z`.
pub fn ln_gamma_ratio(z: f64, d: f64) -> f64 {
    if d == 0.0 {
        return 0.0;
    }
    if d.abs() > 40.0 || z <= 0.0 || z + d <= 0.0 {
        return libm::lgamma(z + d) - libm::lgamma(z);
    }
    let target = 20.0 + 2.0 * d.abs();
    let mut z = z;
    let mut acc = 0.0;
    while z < target {
        acc -= (d / z).ln_1p();
        z += 1.0;
    }
    acc + d * z.ln() + ln_gamma_ratio_correction(z, d)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln B(a, b)`
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Integer `n choose k` as f64, computed multiplicatively.
pub fn choose(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
