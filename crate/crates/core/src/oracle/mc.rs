//! Monte Carlo for the top order statistics.
//!
//! Each replicate draws the `smax + 1` smallest uniform spacings
//! `V_j = Γ_j / Γ_{n+1}` from partial sums of unit exponentials, with the
//! remaining `n - smax` summands collapsed into one gamma variate, and maps
//! them through the upper quantile. Laws without a quantile but with a
//! sampler fall back to drawing all `n` values and selecting the top block.
//!
//! Replicates are split into batches of `batch_size`. Batch `b` uses a
//! ChaCha8 generator seeded with `seed` on stream `b`, batches run in
//! parallel and are merged in batch order, so results depend only on
//! `(seed, reps, batch_size)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1, Gamma};
use rayon::prelude::*;

use super::{OracleMethod, OracleResult};
use crate::catalog::Distribution;
use crate::error::{Error, Result};

pub const DEFAULT_BATCH_SIZE: u64 = 10_000;
pub const MIN_REPS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McPlan {
    pub n: u64,
    pub smax: u64,
    pub reps: u64,
    pub seed: u64,
    pub batch_size: u64,
}

impl McPlan {
    pub fn new(n: u64, smax: u64, reps: u64, seed: u64) -> Self {
        McPlan {
            n,
            smax,
            reps,
            seed,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }

    pub fn with_batch_size(self, batch_size: u64) -> Self {
        McPlan { batch_size, ..self }
    }

    pub fn batches(&self) -> u64 {
        self.reps.div_ceil(self.batch_size)
    }

    fn validate(&self) -> Result<()> {
        if self.smax >= self.n {
            return Err(Error::InvalidArgument(format!("smax = {} must be below n = {}", self.smax, self.n)));
        }
        if self.reps < MIN_REPS {
            return Err(Error::InvalidArgument(format!("reps = {} is below the minimum {MIN_REPS}", self.reps)));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be positive".into()));
        }
        Ok(())
    }
}

/// Running mean and centred second moment for a vector of statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchStats {
    pub count: u64,
    pub mean: Vec<f64>,
    pub m2: Vec<f64>,
}

impl BatchStats {
    pub fn new(dim: usize) -> Self {
        BatchStats {
            count: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let k = self.count as f64;
        for ((m, q), &xi) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = xi - *m;
            *m += d / k;
            *q += d * (xi - *m);
        }
    }

    pub fn merge(&mut self, other: &BatchStats) {
        if other.count == 0 {
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / total;
            self.m2[i] += other.m2[i] + d * d * na * nb / total;
        }
        self.count += other.count;
    }

    /// Sample variance of statistic `i`.
    pub fn variance(&self, i: usize) -> f64 {
        if self.count < 2 {
            f64::INFINITY
        } else {
            self.m2[i] / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self, i: usize) -> f64 {
        (self.variance(i) / self.count as f64).sqrt()
    }
}

fn top_block<R: Rng + ?Sized>(
    dist: &Distribution,
    plan: &McPlan,
    rng: &mut R,
    tail_draw: &Gamma<f64>,
    scratch: &mut Vec<f64>,
    top: &mut [f64],
) -> Result<()> {
    let m = top.len();
    if dist.has_quantile() {
        let mut g = 0.0;
        for slot in top.iter_mut() {
            let e: f64 = Exp1.sample(rng);
            g += e;
            *slot = g;
        }
        let total = g + tail_draw.sample(rng);
        for slot in top.iter_mut() {
            *slot = dist.upper_quantile(*slot / total)?;
        }
    } else {
        scratch.clear();
        for _ in 0..plan.n {
            scratch.push(dist.sample(rng)?);
        }
        let desc = |a: &f64, b: &f64| b.total_cmp(a);
        scratch.select_nth_unstable_by(m - 1, desc);
        scratch[..m].sort_unstable_by(desc);
        top.copy_from_slice(&scratch[..m]);
    }
    Ok(())
}

/// Run the simulation and return one accumulator per batch, in batch order.
///
/// `stat` receives the top block (`top[s] = X_{n,n-s}`) and writes `dim`
/// statistics for that replicate.
pub fn mc_batches<F>(dist: &Distribution, plan: &McPlan, dim: usize, stat: F) -> Result<Vec<BatchStats>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    plan.validate()?;
    if !dist.has_quantile() && !dist.capabilities().sampler {
        return Err(Error::Capability {
            dist: dist.to_string(),
            capability: "sampler",
        });
    }
    let tail_draw = Gamma::new((plan.n - plan.smax) as f64, 1.0)
        .map_err(|e| Error::Numerical(format!("gamma sampler: {e}")))?;
    (0..plan.batches())
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(b);
            let reps = plan.batch_size.min(plan.reps - b * plan.batch_size);
            let mut top = vec![0.0; plan.smax as usize + 1];
            let mut out = vec![0.0; dim];
            let mut scratch = Vec::new();
            let mut acc = BatchStats::new(dim);
            for _ in 0..reps {
                top_block(dist, plan, &mut rng, &tail_draw, &mut scratch, &mut top)?;
                stat(&top, &mut out);
                acc.push(&out);
            }
            Ok(acc)
        })
        .collect()
}

/// Pool batch accumulators in order.
pub fn pooled(batches: &[BatchStats]) -> BatchStats {
    let dim = batches.first().map_or(0, |b| b.mean.len());
    batches.iter().fold(BatchStats::new(dim), |mut acc, b| {
        acc.merge(b);
        acc
    })
}

/// Smooth functional of the statistic means with a batch-means standard
/// error: the value uses the pooled means and the error the spread of the
/// per-batch values.
pub fn batch_functional<F: Fn(&[f64]) -> f64>(batches: &[BatchStats], f: F) -> OracleResult {
    let all = pooled(batches);
    let per: Vec<f64> = batches.iter().map(|b| f(&b.mean)).collect();
    let k = per.len() as f64;
    let std_error = if per.len() < 2 {
        f64::INFINITY
    } else {
        let m = per.iter().sum::<f64>() / k;
        (per.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1.0) / k).sqrt()
    };
    OracleResult {
        value: f(&all.mean),
        std_error,
        abs_error: 0.0,
        method: OracleMethod::Mc,
        cost: all.count,
    }
}

/// Third joint cumulant from raw moments ordered as
/// `[E1, E2, E3, E12, E13, E23, E123]`.
pub fn third_cumulant_from_moments(m: &[f64]) -> f64 {
    let [e1, e2, e3, e12, e13, e23, e123] = [m[0], m[1], m[2], m[3], m[4], m[5], m[6]];
    e123 - e1 * e23 - e2 * e13 - e3 * e12 + 2.0 * e1 * e2 * e3
}

/// Covariance from raw moments ordered as `[E1, E2, E12]`.
pub fn covariance_from_moments(m: &[f64]) -> f64 {
    m[2] - m[0] * m[1]
}

/// Whether `E ∏ X_{n,n-s}^θ` is finite: with the factors merged by rank and
/// sorted by decreasing `s`, every tail sum of `θ/α` must stay below `s + 1`.
pub fn product_moment_exists(alpha: f64, factors: &[(u64, f64)]) -> bool {
    let mut merged: Vec<(u64, f64)> = Vec::new();
    let mut sorted = factors.to_vec();
    sorted.sort_by(|x, y| y.0.cmp(&x.0));
    for (s, t) in sorted {
        match merged.last_mut() {
            Some(last) if last.0 == s => last.1 += t,
            _ => merged.push((s, t)),
        }
    }
    let mut tail = 0.0;
    for &(s, t) in merged.iter().rev() {
        tail += t;
        if tail / alpha >= s as f64 + 1.0 {
            return false;
        }
    }
    true
}

/// Estimate `E ∏_j X_{n,n-s_j}^{θ_j}` for each requested product, given as
/// a list of `(s, θ)` factors with every `s ≤ smax`.
pub fn mc_top_order_stats(dist: &Distribution, plan: &McPlan, moments: &[Vec<(u64, f64)>]) -> Result<Vec<OracleResult>> {
    let alpha = dist.tail_index();
    for (idx, factors) in moments.iter().enumerate() {
        if let Some(&(s, _)) = factors.iter().find(|f| f.0 > plan.smax) {
            return Err(Error::InvalidArgument(format!("s = {s} exceeds smax = {}", plan.smax)));
        }
        if !product_moment_exists(alpha, factors) {
            return Err(Error::InfiniteMoment {
                index: idx + 1,
                reason: format!("moment {factors:?} is infinite for alpha = {alpha}"),
            });
        }
    }
    let active: Vec<usize> = (0..moments.len())
        .filter(|&i| moments[i].iter().any(|f| f.1 != 0.0))
        .collect();
    let batches = if active.is_empty() {
        Vec::new()
    } else {
        mc_batches(dist, plan, active.len(), |top, out| {
            for (slot, &i) in out.iter_mut().zip(&active) {
                *slot = moments[i].iter().map(|&(s, t)| super::power(top[s as usize], t)).product();
            }
        })?
    };
    let all = pooled(&batches);
    Ok((0..moments.len())
        .map(|i| match active.iter().position(|&a| a == i) {
            None => OracleResult::exact(1.0, OracleMethod::Mc),
            Some(slot) => {
                let doubled: Vec<(u64, f64)> = moments[i].iter().map(|&(s, t)| (s, 2.0 * t)).collect();
                let std_error = if product_moment_exists(alpha, &doubled) {
                    all.std_error(slot)
                } else {
                    f64::INFINITY
                };
                OracleResult {
                    value: all.mean[slot],
                    std_error,
                    abs_error: 0.0,
                    method: OracleMethod::Mc,
                    cost: all.count,
                }
            }
        })
        .collect())
}
