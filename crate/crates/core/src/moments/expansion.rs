use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `n^{lead} sum_{(i,j)} t_{ij} n^{-i-ja}`, truncated at `i <= imax`, `j <= jmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSeries<S = f64> {
    lead: S,
    a: S,
    terms: BTreeMap<(usize, usize), S>,
    imax: usize,
    jmax: usize,
    remainder_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    /// Magnitude of the highest-order retained correction at this `n`.
    pub last_term: f64,
}

impl<S: Scalar> ExpansionSeries<S> {
    pub fn new(lead: S, a: S, terms: BTreeMap<(usize, usize), S>, imax: usize, jmax: usize) -> Result<Self> {
        if !(a > S::zero()) {
            return Err(Error::InvalidArgument(format!("a = {a} must be positive")));
        }
        if terms.keys().any(|&(i, j)| i > imax || j > jmax) {
            return Err(Error::OutOfRange("term outside the truncation grid".into()));
        }
        let af = a.to_f64_lossy();
        Ok(ExpansionSeries {
            lead,
            remainder_exponent: ((imax + 1) as f64).min(af * (jmax + 1) as f64),
            a,
            terms,
            imax,
            jmax,
        })
    }

    /// The series `1` on a grid.
    pub fn constant(value: S, a: S, imax: usize, jmax: usize) -> Result<Self> {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), value);
        ExpansionSeries::new(S::zero(), a, terms, imax, jmax)
    }

    pub fn lead(&self) -> &S {
        &self.lead
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn imax(&self) -> usize {
        self.imax
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    /// Exponent `r` of the first omitted order, `O(n^{lead - r})`.
    pub fn remainder_exponent(&self) -> f64 {
        self.remainder_exponent
    }

    pub fn coefficient(&self, i: usize, j: usize) -> S {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &S)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    /// `i + j a`, the decay exponent of term `(i, j)` relative to the lead.
    pub fn offset(&self, i: usize, j: usize) -> f64 {
        i as f64 + j as f64 * self.a.to_f64_lossy()
    }

    /// Coefficients summed over equal offsets, in increasing offset order.
    pub fn by_offset(&self) -> Vec<(f64, f64)> {
        let mut groups: Vec<(f64, f64)> = Vec::new();
        let mut keyed: Vec<(f64, f64)> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| (self.offset(i, j), c.to_f64_lossy()))
            .collect();
        keyed.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (e, c) in keyed {
            match groups.last_mut() {
                Some(last) if (last.0 - e).abs() < 1e-12 => last.1 += c,
                _ => groups.push((e, c)),
            }
        }
        groups
    }

    pub fn evaluate(&self, n: f64) -> Evaluation {
        let ln_n = n.ln();
        let lead = self.lead.to_f64_lossy();
        let groups = self.by_offset();
        let mut value = 0.0;
        for &(e, c) in groups.iter().rev() {
            value += c * ((lead - e) * ln_n).exp();
        }
        let last_term = groups
            .iter()
            .rev()
            .find(|&&(e, c)| e > 0.0 && c != 0.0)
            .map(|&(e, c)| (c * ((lead - e) * ln_n).exp()).abs())
            .unwrap_or(0.0);
        Evaluation { value, last_term }
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        let gap = (self.a.clone() - other.a.clone()).abs().to_f64_lossy();
        if gap > 1e-12 {
            return Err(Error::InvalidArgument("expansions use different exponent grids".into()));
        }
        Ok(())
    }

    fn with_terms(&self, other: &Self, lead: S, terms: BTreeMap<(usize, usize), S>) -> Self {
        ExpansionSeries {
            lead,
            a: self.a.clone(),
            terms,
            imax: self.imax.min(other.imax),
            jmax: self.jmax.min(other.jmax),
            remainder_exponent: self.remainder_exponent.min(other.remainder_exponent),
        }
    }

    /// Product, truncated to the common grid.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        let (imax, jmax) = (self.imax.min(other.imax), self.jmax.min(other.jmax));
        let mut terms = BTreeMap::new();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                if key.0 <= imax && key.1 <= jmax {
                    let slot = terms.entry(key).or_insert_with(S::zero);
                    *slot = slot.clone() + c1.clone() * c2.clone();
                }
            }
        }
        let lead = self.lead.clone() + other.lead.clone();
        Ok(self.with_terms(other, lead, terms))
    }

    /// Sum of two expansions with equal lead exponents.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        if (self.lead.clone() - other.lead.clone()).abs().to_f64_lossy() > 1e-12 {
            return Err(Error::InvalidArgument("cannot add expansions with different leads".into()));
        }
        let (imax, jmax) = (self.imax.min(other.imax), self.jmax.min(other.jmax));
        let mut terms = BTreeMap::new();
        for (&key, c) in self.terms.iter().chain(other.terms.iter()) {
            if key.0 <= imax && key.1 <= jmax {
                let slot = terms.entry(key).or_insert_with(S::zero);
                *slot = slot.clone() + c.clone();
            }
        }
        Ok(self.with_terms(other, self.lead.clone(), terms))
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * k.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Rescale `E prod X^θ` to `E prod Y^θ` with `Y = X/(n c0)^{1/α}`:
    /// divide by `c0^{lead}` and drop the `n^{lead}` prefactor.
    pub fn normalized(&self, c0: &S) -> Result<Self> {
        let k = c0.pow_real(&-self.lead.clone())?;
        let mut out = self.scale(&k);
        out.lead = S::zero();
        Ok(out)
    }

    /// Keep only terms with offset below `cutoff`; the remainder tag becomes
    /// the smallest dropped offset.
    pub fn truncated(&self, cutoff: f64) -> Self {
        let mut out = self.clone();
        let mut dropped = f64::INFINITY;
        out.terms.retain(|&(i, j), _| {
            let e = i as f64 + j as f64 * self.a.to_f64_lossy();
            if e < cutoff - 1e-12 {
                true
            } else {
                dropped = dropped.min(e);
                false
            }
        });
        out.remainder_exponent = self.remainder_exponent.min(dropped);
        out
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExpansionSeries<T> {
        ExpansionSeries {
            lead: f(&self.lead),
            a: f(&self.a),
            terms: self.terms.iter().map(|(k, v)| (*k, f(v))).collect(),
            imax: self.imax,
            jmax: self.jmax,
            remainder_exponent: self.remainder_exponent,
        }
    }
}

/// Partial-sum evaluation at `n` with a truncation indicator.
pub fn evaluate_expansion<S: Scalar>(e: &ExpansionSeries<S>, n: u64) -> Evaluation {
    e.evaluate(n as f64)
}
