//! Regeneration of printed closed forms from the generic pipeline.
//!
//! Every check evaluates a transcribed closed form and the corresponding
//! pipeline quantity in exact rational arithmetic at a set of points. A check
//! either matches everywhere, or carries the id of the typo-ledger entry that
//! records the derived replacement. A ledgered check that matches, or an
//! unledgered check that does not, is inconsistent.

use std::fmt::Debug;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::beta::{beta_ratio, gamma_ratio_coeffs, n_free_factor, MAX_E_ORDER};
use crate::error::Result;
use crate::inversion::invert_series;
use crate::moments::{
    cj_coeff, covariance_expansion, covariance_series, dm_coeffs, ec, leading_product_moment, mean_expansion,
    moment_expansion, pair_moment_expansion, product_moment_factors, third_cumulant_expansion, ExpansionSeries,
    MomentQuery,
};
use crate::quantile::{quantile_series, TailModel};
use crate::scalar::{Exact, Scalar};
use crate::series::{series_exp, FormalSeries};
use crate::special::{bernoulli_even, binomial, factorial, falling, gamma_ratio, rising};
use crate::typos;

type Q = Exact;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormCheck {
    pub form: &'static str,
    pub ledger_id: Option<&'static str>,
    pub points: usize,
    pub mismatches: usize,
    /// First disagreeing point with printed and derived values.
    pub example: Option<String>,
}

impl FormCheck {
    pub fn matches(&self) -> bool {
        self.mismatches == 0
    }

    /// A mismatch must be ledgered and a ledgered form must mismatch.
    pub fn consistent(&self) -> bool {
        self.matches() == self.ledger_id.is_none() && self.ledger_id.is_none_or(|id| typos::find(id).is_some())
    }
}

fn q(n: i64, d: i64) -> Q {
    Q::ratio(n, d)
}

fn z(n: i64) -> Q {
    Q::int(n)
}

fn zu(n: u64) -> Q {
    Q::int(n as i64)
}

/// `<x>_m = Γ(x+1)/Γ(x+1-m)` for integer `m` of either sign.
fn fall(x: &Q, m: i64) -> Q {
    if m >= 0 {
        falling(x, m as usize)
    } else {
        Q::one() / rising(&(x.clone() + Q::one()), m.unsigned_abs() as usize)
    }
}

/// `<x>_m` for an integer-valued exact `m`.
fn fall_q(x: &Q, m: &Q) -> Q {
    fall(x, m.as_i64().expect("integer factorial-power order"))
}

/// `π_s(λ) = b(s1 - s2, s2 + 1 : λ)`
fn pi_s(s1: u64, s2: u64, lam: &Q) -> Result<Q> {
    beta_ratio(&zu(s1 - s2), &zu(s2 + 1), lam)
}

fn pw(x: &Q, e: &Q) -> Result<Q> {
    x.pow_real(e)
}

fn tail(alpha: Q, a: Q, c: &[Q]) -> Result<TailModel<Q>> {
    let beta = a * alpha.clone();
    TailModel::new(alpha, beta, FormalSeries::new(c.to_vec())?)
}

/// Sum of the coefficients of an expansion at decay exponent `offset`.
fn at_offset(e: &ExpansionSeries<Q>, offset: &Q) -> Q {
    e.terms()
        .filter(|((i, j), _)| &(zu(*i as u64) + zu(*j as u64) * e.a().clone()) == offset)
        .fold(Q::zero(), |acc, (_, v)| acc + v.clone())
}

#[derive(Default)]
struct Runner {
    checks: Vec<FormCheck>,
}

impl Runner {
    fn check<P: Debug>(
        &mut self,
        form: &'static str,
        ledger_id: Option<&'static str>,
        points: impl IntoIterator<Item = P>,
        f: impl Fn(&P) -> Result<(Q, Q)>,
    ) -> Result<()> {
        let mut out = FormCheck {
            form,
            ledger_id,
            points: 0,
            mismatches: 0,
            example: None,
        };
        for p in points {
            let (printed, derived) = f(&p)?;
            out.points += 1;
            if printed != derived {
                out.mismatches += 1;
                if out.example.is_none() {
                    out.example = Some(format!("at {p:?}: printed {printed}, derived {derived}"));
                }
            }
        }
        self.checks.push(out);
        Ok(())
    }
}

fn pairs() -> Vec<(u64, u64)> {
    vec![(3, 1), (4, 2), (5, 3), (6, 6), (7, 2), (9, 4)]
}

fn triples() -> Vec<[u64; 3]> {
    vec![[3, 2, 1], [5, 3, 2], [4, 4, 1], [6, 2, 2], [7, 5, 3], [8, 8, 8]]
}

fn quads() -> Vec<[u64; 4]> {
    vec![[6, 5, 3, 2], [7, 4, 4, 1], [9, 6, 3, 3], [8, 8, 5, 2]]
}

fn sample_c() -> Vec<Q> {
    vec![q(2, 1), q(-1, 3), q(5, 4), q(3, 11)]
}

/// `e_i(θ)` as the coefficients of
/// `exp(-sum_k (-1)^{k+1} [B_{k+1}(1+θ) - B_{k+1}(1)] x^k / (k(k+1)))`,
/// the Bernoulli-polynomial expansion of `ln Γ(n+1+θ) - ln Γ(n+1) - θ ln n`.
pub fn e_coeffs_from_bernoulli(theta: &Q, imax: usize) -> Result<Vec<Q>> {
    let bern = |m: usize| -> Result<Q> {
        match m {
            1 => Ok(q(-1, 2)),
            m if m % 2 == 1 => Ok(Q::zero()),
            m => bernoulli_even(m / 2),
        }
    };
    let poly = |m: usize, x: &Q| -> Result<Q> {
        let mut acc = Q::zero();
        for k in 0..=m {
            acc = acc + binomial(&zu(m as u64), k) * bern(k)? * x.powi((m - k) as i64);
        }
        Ok(acc)
    };
    let mut log = vec![Q::zero()];
    for k in 1..=imax {
        let d = poly(k + 1, &(Q::one() + theta.clone()))? - poly(k + 1, &Q::one())?;
        let sign = if k % 2 == 1 { Q::one() } else { -Q::one() };
        log.push(sign * d / zu((k * (k + 1)) as u64));
    }
    Ok(series_exp(&FormalSeries::new(log)?, &-Q::one()).into_coeffs())
}

/// Run every regeneration check.
pub fn regenerate() -> Result<Vec<FormCheck>> {
    let mut r = Runner::default();
    quantile_forms(&mut r)?;
    inversion_forms(&mut r)?;
    e_forms(&mut r)?;
    leading_forms(&mut r)?;
    lambda_forms(&mut r)?;
    unit_alpha_forms(&mut r)?;
    product_forms(&mut r)?;
    second_order_forms(&mut r)?;
    cauchy_forms(&mut r)?;
    Ok(r.checks)
}

fn quantile_forms(r: &mut Runner) -> Result<()> {
    let mut pts = Vec::new();
    for a in [q(1, 2), z(1), z(2), q(3, 2)] {
        for psi in [z(-1), q(1, 2), z(1), z(2), q(5, 2)] {
            for c0 in [z(1), z(4), q(9, 4)] {
                pts.push((a.clone(), psi.clone(), c0));
            }
        }
    }
    let derived = |p: &(Q, Q, Q), i: usize| -> Result<(Vec<Q>, Q)> {
        let (a, psi, c0) = p;
        let mut c = sample_c();
        c[0] = c0.clone();
        let t = tail(Q::one(), a.clone(), &c)?;
        Ok((c, quantile_series(&t, psi)?.coeff(i).clone()))
    };
    r.check("quantile coefficient C_0psi = c0^psi", None, pts.clone(), |p| {
        let (_, d) = derived(p, 0)?;
        Ok((pw(&p.2, &p.1)?, d))
    })?;
    r.check("quantile coefficient C_1psi = psi c0^(psi-a-1) c1", None, pts.clone(), |p| {
        let (c, d) = derived(p, 1)?;
        let (a, psi, c0) = p;
        Ok((psi.clone() * pw(c0, &(psi.clone() - a.clone() - Q::one()))? * c[1].clone(), d))
    })?;
    r.check(
        "quantile coefficient C_2psi = psi c0^(psi-2a-2) {c0 c2 + (psi-2a-1) c1^2/2}",
        None,
        pts.clone(),
        |p| {
            let (c, d) = derived(p, 2)?;
            let (a, psi, c0) = p;
            let two_a = z(2) * a.clone();
            let inner = c0.clone() * c[2].clone()
                + (psi.clone() - two_a.clone() - Q::one()) * c[1].clone() * c[1].clone() / z(2);
            Ok((psi.clone() * pw(c0, &(psi.clone() - two_a - z(2)))? * inner, d))
        },
    )?;
    r.check(
        "quantile coefficient C_3psi as printed",
        Some("quantile-c3"),
        pts.clone(),
        |p| {
            let (c, d) = derived(p, 3)?;
            let (a, psi, c0) = p;
            let three_a = z(3) * a.clone();
            let cube = rising(&(psi.clone() + Q::one()), 2) / z(6)
                * (psi.clone() + three_a.clone() / z(2))
                * (a.clone() + Q::one());
            let inner = c0.clone() * c0.clone() * c[2].clone()
                + (psi.clone() - three_a.clone() - Q::one()) * c0.clone() * c[1].clone() * c[2].clone()
                + cube * c[1].powi(3);
            Ok((psi.clone() * pw(c0, &(psi.clone() - three_a - z(3)))? * inner, d))
        },
    )?;
    r.check("quantile coefficient C_3psi as derived", None, pts, |p| {
        let (c, d) = derived(p, 3)?;
        let (a, psi, c0) = p;
        let g = psi.clone() - z(3) * a.clone();
        let inner = c0.clone() * c0.clone() * c[3].clone()
            + (g.clone() - Q::one()) * c0.clone() * c[1].clone() * c[2].clone()
            + (g.clone() - Q::one()) * (g.clone() - z(2)) * c[1].powi(3) / z(6);
        Ok((psi.clone() * pw(c0, &(g - z(3)))? * inner, d))
    })?;
    Ok(())
}

fn inversion_forms(r: &mut Runner) -> Result<()> {
    let mut pts = Vec::new();
    for a in [q(1, 2), z(1), z(2), q(5, 2)] {
        for c0 in [z(1), z(4)] {
            pts.push((a.clone(), c0));
        }
    }
    let derived = |p: &(Q, Q), i: usize| -> Result<(Vec<Q>, Q)> {
        let mut c = sample_c();
        c[0] = p.1.clone();
        let xs = invert_series(&FormalSeries::new(c.clone())?, &p.0, 1)?;
        Ok((c, xs.coeff(i).clone()))
    };
    r.check("inversion coefficient x0* = 1/c0", None, pts.clone(), |p| {
        let (_, d) = derived(p, 0)?;
        Ok((Q::one() / p.1.clone(), d))
    })?;
    r.check("inversion coefficient x1* as printed", Some("inversion-x1-sign"), pts.clone(), |p| {
        let (c, d) = derived(p, 1)?;
        Ok((pw(&p.1, &(-p.0.clone() - z(2)))? * c[1].clone(), d))
    })?;
    r.check("inversion coefficient x2* = c0^(-2a-3) {-c0 c2 + (a+1) c1^2}", None, pts.clone(), |p| {
        let (c, d) = derived(p, 2)?;
        let (a, c0) = p;
        let inner = -(c0.clone() * c[2].clone()) + (a.clone() + Q::one()) * c[1].clone() * c[1].clone();
        Ok((pw(c0, &(-z(2) * a.clone() - z(3)))? * inner, d))
    })?;
    r.check("inversion coefficient x3* as printed", Some("inversion-x3-degree"), pts, |p| {
        let (c, d) = derived(p, 3)?;
        let (a, c0) = p;
        let k = z(2) + z(3) * a.clone();
        let inner = -(c0.clone() * c0.clone() * c[3].clone()) + k.clone() * c0.clone() * c[1].clone() * c[2].clone()
            - k * (Q::one() + a.clone()) * c[1].clone() * c[1].clone() / z(2);
        Ok((pw(c0, &(-z(3) * a.clone() - z(4)))? * inner, d))
    })?;
    Ok(())
}

/// The e-table transcribed term by term.
fn printed_e(i: usize, t: &Q) -> Q {
    let p = |c: &[i64]| c.iter().fold(Q::zero(), |acc, &k| acc * t.clone() + z(k));
    let r = |m: usize| rising(t, m);
    let f = |m: usize| factorial::<Q>(m);
    match i {
        0 => Q::one(),
        1 => -r(2) / z(2),
        2 => r(3) * (z(3) * t.clone() + Q::one()) / z(24),
        3 => -r(4) * r(2) / (f(4) * z(2)),
        4 => r(5) * p(&[15, 30, 5, -2]) / (f(5) * z(48)),
        5 => -r(6) * r(2) * p(&[3, 7, -2]) / (f(6) * z(16)),
        6 => r(7) * p(&[63, 315, 315, -91, -42, 16]) / (f(7) * z(576)),
        7 => -r(8) * r(2) * p(&[9, 54, 51, -58, 16]) / (f(8) * z(144)),
        _ => unreachable!("e-table has eight entries"),
    }
}

const E_FORMS: [&str; 8] = [
    "gamma-ratio coefficient e_0",
    "gamma-ratio coefficient e_1",
    "gamma-ratio coefficient e_2",
    "gamma-ratio coefficient e_3",
    "gamma-ratio coefficient e_4",
    "gamma-ratio coefficient e_5",
    "gamma-ratio coefficient e_6",
    "gamma-ratio coefficient e_7",
];

fn e_forms(r: &mut Runner) -> Result<()> {
    let pts: Vec<Q> = (0..20).map(|k| q(k - 7, 3)).collect();
    for (i, form) in E_FORMS.iter().enumerate() {
        r.check(form, None, pts.clone(), |t| Ok((printed_e(i, t), e_coeffs_from_bernoulli(t, MAX_E_ORDER)?[i].clone())))?;
    }
    r.check("library e-table against the Bernoulli expansion", None, pts, |t| {
        let lib = gamma_ratio_coeffs(t, MAX_E_ORDER)?;
        let der = e_coeffs_from_bernoulli(t, MAX_E_ORDER)?;
        let bad = lib.iter().zip(&der).position(|(x, y)| x != y);
        Ok((bad.map_or(Q::zero(), |i| lib[i].clone()), bad.map_or(Q::zero(), |i| der[i].clone())))
    })?;
    Ok(())
}

/// Points `(a, θ, s)` for the general leading-term displays, `α = 1`.
fn leading_points() -> Vec<(Q, Vec<Q>, Vec<u64>)> {
    let mut pts = Vec::new();
    for a in [z(1), z(2)] {
        for th in [vec![z(1), z(1)], vec![z(2), z(1)], vec![z(1), z(2)]] {
            for (s1, s2) in [(4, 2), (5, 3), (6, 6), (7, 3)] {
                pts.push((a.clone(), th.clone(), vec![s1, s2]));
            }
        }
    }
    pts
}

fn leading_query(p: &(Q, Vec<Q>, Vec<u64>), imax: usize) -> Result<MomentQuery<Q>> {
    let t = tail(Q::one(), p.0.clone(), &sample_c()[..2])?;
    MomentQuery::new(t, p.2.clone(), p.1.clone(), imax, 1)
}

fn neg_thetabar(theta: &[Q]) -> Vec<Q> {
    crate::beta::cumulative_tail(theta).into_iter().map(|x| -x).collect()
}

fn leading_forms(r: &mut Runner) -> Result<()> {
    let pts = leading_points();
    r.check("leading display: n^-1 term -<psibar_1>_2/2 C_0", None, pts.clone(), |p| {
        let qy = leading_query(p, 1)?;
        let e = moment_expansion(&qy)?;
        let pb = qy.psibar1();
        Ok((-fall_q(&pb, &z(2)) / z(2) * cj_coeff(&qy, 0)?, e.coefficient(1, 0)))
    })?;
    r.check("leading display: n^-a term as printed", Some("leading-n-a-term"), pts.clone(), |p| {
        let qy = leading_query(p, 1)?;
        Ok((cj_coeff(&qy, 0)?, moment_expansion(&qy)?.coefficient(0, 1)))
    })?;
    r.check("leading display: C_0(s:psi) as printed", Some("c0-power"), pts.clone(), |p| {
        let qy = leading_query(p, 0)?;
        let c0 = sample_c()[0].clone();
        Ok((c0 * n_free_factor(&p.2, &neg_thetabar(&p.1))?, cj_coeff(&qy, 0)?))
    })?;
    r.check("leading display: C_0(s:psi) = c0^psibar_1 B(s:-psibar)", None, pts.clone(), |p| {
        let qy = leading_query(p, 0)?;
        let c0 = sample_c()[0].clone();
        Ok((pw(&c0, &qy.psibar1())? * n_free_factor(&p.2, &neg_thetabar(&p.1))?, cj_coeff(&qy, 0)?))
    })?;
    let c1_form = |p: &(Q, Vec<Q>, Vec<u64>), shift: i64| -> Result<(Q, Q)> {
        let qy = leading_query(p, 0)?;
        let c = sample_c();
        let nb = neg_thetabar(&p.1);
        let mut sum = Q::zero();
        for j in 0..p.1.len() {
            let phibar: Vec<Q> = nb
                .iter()
                .enumerate()
                .map(|(m, x)| if m <= j { x.clone() + p.0.clone() } else { x.clone() })
                .collect();
            sum = sum + p.1[j].clone() * n_free_factor(&p.2, &phibar)?;
        }
        let e = qy.psibar1() - p.0.clone() - z(shift);
        Ok((pw(&c[0], &e)? * c[1].clone() * sum, cj_coeff(&qy, 1)?))
    };
    r.check("leading display: C_1(s:psi) as printed", Some("c1-power"), pts.clone(), |p| c1_form(p, 2))?;
    r.check("leading display: C_1(s:psi) with c0^(psibar_1-a-1)", None, pts, |p| c1_form(p, 1))?;

    // single order statistic
    let mut single = Vec::new();
    for a in [z(1), z(2)] {
        for psi in [z(1), z(2)] {
            for s in [2u64, 3, 5] {
                single.push((a.clone(), psi.clone(), s));
            }
        }
    }
    let one = |p: &(Q, Q, u64)| -> Result<(MomentQuery<Q>, Vec<Q>)> {
        let t = tail(Q::one(), p.0.clone(), &sample_c()[..3])?;
        let qs = quantile_series(&t, &p.1)?.coeffs().coeffs().to_vec();
        Ok((MomentQuery::new(t, vec![p.2], vec![p.1.clone()], 0, 2)?, qs))
    };
    r.check("single statistic: C_j(s:psi) = C_jpsi (s+1)_(ja-psi)", None, single.clone(), |p| {
        let (qy, cs) = one(p)?;
        let mut printed = Q::zero();
        let mut derived = Q::zero();
        for (j, cj) in cs.iter().enumerate().take(3) {
            let w = z(j as i64 + 1);
            let sh = zu(j as u64) * p.0.clone() - p.1.clone();
            printed = printed + w.clone() * cj.clone() * gamma_ratio(&zu(p.2 + 1), &sh)?;
            derived = derived + w * cj_coeff(&qy, j)?;
        }
        Ok((printed, derived))
    })?;
    r.check("single statistic: C_0(s:psi) = c0^psi/<s>_psi", None, single.clone(), |p| {
        let (qy, _) = one(p)?;
        Ok((pw(&sample_c()[0], &p.1)? / fall_q(&zu(p.2), &p.1), cj_coeff(&qy, 0)?))
    })?;
    r.check("single statistic: C_1(s:psi) = psi c0^(psi-a-1) c1/<s>_(psi-a)", None, single, |p| {
        let (qy, _) = one(p)?;
        let c = sample_c();
        let printed = p.1.clone() * pw(&c[0], &(p.1.clone() - p.0.clone() - Q::one()))? * c[1].clone()
            / fall_q(&zu(p.2), &(p.1.clone() - p.0.clone()));
        Ok((printed, cj_coeff(&qy, 1)?))
    })?;

    // pairs with equal powers λ
    let mut lam_pts = Vec::new();
    for a in [z(1), z(2), z(3)] {
        for lam in [1i64, 2] {
            for (s1, s2) in [(5, 4), (6, 6), (8, 5), (9, 4)] {
                lam_pts.push((a.clone(), lam, s1, s2));
            }
        }
    }
    let pair_q = |p: &(Q, i64, u64, u64)| -> Result<MomentQuery<Q>> {
        let t = tail(Q::one(), p.0.clone(), &sample_c()[..2])?;
        MomentQuery::new(t, vec![p.2, p.3], vec![z(p.1), z(p.1)], 0, 1)
    };
    r.check("pair: C_0(s:lambda 1) = c0^(2 lambda) <s1>_(2 lambda)^-1 pi_s(-lambda)", None, lam_pts.clone(), |p| {
        let c0 = sample_c()[0].clone();
        let printed = c0.powi(2 * p.1) / fall(&zu(p.2), 2 * p.1) * pi_s(p.2, p.3, &z(-p.1))?;
        Ok((printed, cj_coeff(&pair_q(p)?, 0)?))
    })?;
    let lam1: Vec<_> = lam_pts.iter().filter(|p| p.1 == 1).cloned().collect();
    let lam2: Vec<_> = lam_pts.iter().filter(|p| p.1 == 2).cloned().collect();
    r.check("pair: C_0(s:1) as printed for lambda = 1", Some("pair-c0-lambda-one"), lam1.clone(), |p| {
        let c0 = sample_c()[0].clone();
        Ok((c0.powi(2) / zu(p.2 - 1) * zu(p.3), cj_coeff(&pair_q(p)?, 0)?))
    })?;
    r.check("pair: C_0(s:2) as printed for lambda = 2", Some("pair-c0-lambda-two"), lam2.clone(), |p| {
        let c0 = sample_c()[0].clone();
        let printed = c0.powi(2) / fall(&(zu(p.3) - z(2)), 2) / fall(&zu(p.3), 2);
        Ok((printed, cj_coeff(&pair_q(p)?, 0)?))
    })?;
    r.check("pair: C_1(s:lambda 1) general form", None, lam_pts, |p| {
        let c = sample_c();
        let (a, lam) = (p.0.clone(), z(p.1));
        let printed = lam.clone() * pw(&c[0], &(z(2) * lam.clone() - a.clone() - Q::one()))? * c[1].clone()
            / fall_q(&zu(p.2), &(z(2) * lam.clone() - a.clone()))
            * (pi_s(p.2, p.3, &-lam.clone())? + pi_s(p.2, p.3, &(a - lam))?);
        Ok((printed, cj_coeff(&pair_q(p)?, 1)?))
    })?;
    r.check("pair: C_1(s:1) for lambda = 1", None, lam1, |p| {
        let c = sample_c();
        let a = p.0.clone();
        let printed = pw(&c[0], &(Q::one() - a.clone()))? * c[1].clone() / fall_q(&zu(p.2), &(z(2) - a.clone()))
            * (zu(p.2) / zu(p.3) + pi_s(p.2, p.3, &(a - Q::one()))?);
        Ok((printed, cj_coeff(&pair_q(p)?, 1)?))
    })?;
    r.check("pair: C_1(s:2) for lambda = 2", None, lam2, |p| {
        let c = sample_c();
        let a = p.0.clone();
        let printed = z(2) * pw(&c[0], &(z(3) - a.clone()))? * c[1].clone() / fall_q(&zu(p.2), &(z(4) - a.clone()))
            * (fall(&zu(p.2), 2) / fall(&zu(p.3), 2) + pi_s(p.2, p.3, &(a - z(2)))?);
        Ok((printed, cj_coeff(&pair_q(p)?, 1)?))
    })?;
    r.check("pi_s(1) = (s2+1)/(s1+1) and pi_s(-1) = s1/s2", None, pairs(), |&(s1, s2)| {
        let printed = zu(s2 + 1) / zu(s1 + 1) + z(10) * zu(s1) / zu(s2);
        Ok((printed, pi_s(s1, s2, &z(1))? + z(10) * pi_s(s1, s2, &z(-1))?))
    })?;
    Ok(())
}

/// Normalised mean, pair and covariance displays for general `λ = 1/α`.
fn lambda_forms(r: &mut Runner) -> Result<()> {
    let mut pts = Vec::new();
    for alpha in [z(1), q(1, 2)] {
        for a in [z(1), z(2)] {
            for (s1, s2) in [(4, 2), (5, 3), (6, 6), (9, 4)] {
                pts.push((alpha.clone(), a.clone(), s1, s2));
            }
        }
    }
    let lt = |p: &(Q, Q, u64, u64)| tail(p.0.clone(), p.1.clone(), &sample_c()[..2]);
    let lam = |p: &(Q, Q, u64, u64)| Q::one() / p.0.clone();
    r.check("normalised mean: leading <s>_lambda^-1 and n^-1 term -<lambda>_2/2 <s>_lambda^-1", None, pts.clone(), |p| {
        let l = lam(p);
        let m = mean_expansion(&lt(p)?, p.2, 1, 1)?;
        let lead = Q::one() / fall_q(&zu(p.2), &l);
        let printed = lead.clone() + z(10) * (-fall_q(&l, &z(2)) / z(2) * lead);
        Ok((printed, m.coefficient(0, 0) + z(10) * m.coefficient(1, 0)))
    })?;
    r.check("normalised mean: n^-a term E_c <s>_(lambda-a)^-1", None, pts.clone(), |p| {
        let t = lt(p)?;
        let m = mean_expansion(&t, p.2, 1, 1)?;
        Ok((ec(&t)? / fall_q(&zu(p.2), &(lam(p) - p.1.clone())), m.coefficient(0, 1)))
    })?;
    let b20 = |p: &(Q, Q, u64, u64)| -> Result<Q> {
        let l = lam(p);
        Ok(pi_s(p.2, p.3, &-l.clone())? / fall_q(&zu(p.2), &(z(2) * l)))
    };
    let da = |p: &(Q, Q, u64, u64)| -> Result<Q> {
        let l = lam(p);
        let a = p.1.clone();
        Ok((pi_s(p.2, p.3, &-l.clone())? + pi_s(p.2, p.3, &(a.clone() - l.clone()))?)
            / fall_q(&zu(p.2), &(z(2) * l - a)))
    };
    r.check("normalised pair moment: B_20 and n^-1 term -<2 lambda>_2/2 B_20", None, pts.clone(), |p| {
        let l = lam(p);
        let m = pair_moment_expansion(&lt(p)?, p.2, p.3, 1, 1)?;
        let printed = b20(p)? + z(10) * (-fall_q(&(z(2) * l), &z(2)) / z(2) * b20(p)?);
        Ok((printed, m.coefficient(0, 0) + z(10) * m.coefficient(1, 0)))
    })?;
    r.check("normalised pair moment: n^-a term E_c D_a", None, pts.clone(), |p| {
        let t = lt(p)?;
        let m = pair_moment_expansion(&t, p.2, p.3, 1, 1)?;
        Ok((ec(&t)? * da(p)?, m.coefficient(0, 1)))
    })?;
    let inv = |s: u64, m: &Q| Q::one() / fall_q(&zu(s), m);
    r.check("covariance: F_0 = B_20 - <s1>_lambda^-1 <s2>_lambda^-1", None, pts.clone(), |p| {
        let l = lam(p);
        let rep = covariance_expansion(&lt(p)?, p.2, p.3)?;
        Ok((b20(p)? - inv(p.2, &l) * inv(p.3, &l), rep.f0))
    })?;
    r.check("covariance: F_1 = <lambda>_2 <s1>_lambda^-1 <s2>_lambda^-1 - <2 lambda>_2 B_20/2", None, pts.clone(), |p| {
        let l = lam(p);
        let rep = covariance_expansion(&lt(p)?, p.2, p.3)?;
        let printed = fall_q(&l, &z(2)) * inv(p.2, &l) * inv(p.3, &l) - fall_q(&(z(2) * l), &z(2)) * b20(p)? / z(2);
        Ok((printed, rep.f1))
    })?;
    r.check("covariance: F_2 = D_a - <s1>_lambda^-1 <s2>_(lambda-a)^-1 - <s1>_(lambda-a)^-1 <s2>_lambda^-1", None, pts, |p| {
        let l = lam(p);
        let la = l.clone() - p.1.clone();
        let rep = covariance_expansion(&lt(p)?, p.2, p.3)?;
        let printed = da(p)? - inv(p.2, &l) * inv(p.3, &la) - inv(p.2, &la) * inv(p.3, &l);
        Ok((printed, rep.f2))
    })?;
    Ok(())
}

/// Displays specialised to `α = 1`.
fn unit_alpha_forms(r: &mut Runner) -> Result<()> {
    let mut pts = Vec::new();
    for a in [z(1), z(2), z(3)] {
        for (s1, s2) in pairs() {
            pts.push((a.clone(), s1, s2));
        }
    }
    let t = |a: &Q| tail(Q::one(), a.clone(), &sample_c()[..2]);
    r.check("unit alpha: E_c as printed", Some("unit-alpha-ec"), [z(1), z(2), z(3)], |a| {
        let c0 = sample_c()[0].clone();
        Ok((pw(&c0, &(-a.clone() - Q::one()))? * c0, ec(&t(a)?)?))
    })?;
    r.check("unit alpha: B_20 = -F_1 = (s1-1)^-1 s2^-1", None, pts.clone(), |p| {
        let rep = covariance_expansion(&t(&p.0)?, p.1, p.2)?;
        let printed = Q::one() / (zu(p.1 - 1) * zu(p.2));
        Ok((printed.clone() + z(10) * printed, rep.b20 - z(10) * rep.f1))
    })?;
    r.check("unit alpha: F_0 = <s1>_2^-1 s2^-1", None, pts.clone(), |p| {
        let rep = covariance_expansion(&t(&p.0)?, p.1, p.2)?;
        Ok((Q::one() / (fall(&zu(p.1), 2) * zu(p.2)), rep.f0))
    })?;
    r.check("unit alpha: D_a = <s1>_(2-a)^-1 G_a", None, pts.clone(), |p| {
        let rep = covariance_expansion(&t(&p.0)?, p.1, p.2)?;
        let g = if p.1 == p.2 {
            z(2)
        } else {
            zu(p.1) / zu(p.2) + pi_s(p.1, p.2, &(p.0.clone() - Q::one()))?
        };
        Ok((g / fall_q(&zu(p.1), &(z(2) - p.0.clone())), rep.da))
    })?;
    r.check("unit alpha: F_2 = D_a - s1^-1 <s2>_(1-a)^-1 - s2^-1 <s1>_(1-a)^-1", None, pts.clone(), |p| {
        let rep = covariance_expansion(&t(&p.0)?, p.1, p.2)?;
        let oa = Q::one() - p.0.clone();
        let printed = rep.da.clone()
            - Q::one() / (zu(p.1) * fall_q(&zu(p.2), &oa))
            - Q::one() / (zu(p.2) * fall_q(&zu(p.1), &oa));
        Ok((printed, rep.f2))
    })?;
    r.check("unit alpha: mean s^-1 + n^-a E_c <s>_(1-a)^-1", None, pts.clone(), |p| {
        let tl = t(&p.0)?;
        let m = mean_expansion(&tl, p.1, 1, 1)?;
        let printed = Q::one() / zu(p.1) + z(10) * ec(&tl)? / fall_q(&zu(p.1), &(Q::one() - p.0.clone()));
        Ok((printed, m.coefficient(0, 0) + z(10) * m.coefficient(0, 1) + z(100) * m.coefficient(1, 0)))
    })?;
    let a1: Vec<(u64, u64)> = pairs();
    r.check("unit alpha, a = 1: E_c = c0^-2 c1, D_a = s1^-1 + s2^-1, F_2 = 0", None, a1.clone(), |p| {
        let tl = t(&z(1))?;
        let rep = covariance_expansion(&tl, p.0, p.1)?;
        let c = sample_c();
        let printed = c[1].clone() / c[0].powi(2) + z(10) * (Q::one() / zu(p.0) + Q::one() / zu(p.1));
        Ok((printed, rep.ec + z(10) * rep.da + z(100) * rep.f2))
    })?;
    r.check("unit alpha, a = 1: mean s^-1 + n^-1 E_c", None, [1u64, 2, 3, 5, 8], |&s| {
        let tl = t(&z(1))?;
        let m = mean_expansion(&tl, s, 1, 1)?;
        let printed = Q::one() / zu(s) + z(10) * ec(&tl)?;
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(1))))
    })?;
    r.check("unit alpha, a = 1: pair (1 - n^-1) B_20 + n^-1 E_c D_a", None, a1.clone(), |p| {
        let tl = t(&z(1))?;
        let m = pair_moment_expansion(&tl, p.0, p.1, 1, 1)?;
        let b = Q::one() / (zu(p.0 - 1) * zu(p.1));
        let d = Q::one() / zu(p.0) + Q::one() / zu(p.1);
        let printed = b.clone() + z(10) * (-b + ec(&tl)? * d);
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(1))))
    })?;
    r.check("unit alpha, a = 1: covariance leading factor as printed", Some("covariance-leading-factor"), a1.clone(), |p| {
        let m = covariance_series(&t(&z(1))?, p.0, p.1, 1, 1)?;
        let printed = zu(p.0 + p.1) / (fall(&zu(p.0), 2) * zu(p.1));
        Ok((printed, m.coefficient(0, 0)))
    })?;
    r.check("unit alpha, a = 1: covariance <s1>_2^-1 s2^-1 (1 - n^-1 s1)", None, a1, |p| {
        let m = covariance_series(&t(&z(1))?, p.0, p.1, 1, 1)?;
        let f = Q::one() / (fall(&zu(p.0), 2) * zu(p.1));
        let printed = f.clone() + z(10) * (-f * zu(p.0));
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(1))))
    })?;
    Ok(())
}

/// `B_kj` as printed when `rising_factor` is false, with the rising factorial
/// `(s_j - k + j + 1)_{a-1}` in place of `<s_j - k + j + 1>_{a-1}` otherwise.
fn b_general(s: &[u64], j: usize, a: &Q, rising_factor: bool) -> Q {
    let k = s.len() as i64;
    let mut acc = Q::one();
    for (i0, &si) in s.iter().enumerate() {
        let i = i0 as i64 + 1;
        let si = zu(si);
        if i < j as i64 {
            acc = acc / (si - z(k) + a.clone() + z(i));
        } else if i > j as i64 {
            acc = acc / (si - z(k) + z(i));
        }
    }
    let sj = zu(s[j - 1]);
    if j < s.len() {
        let x = sj - z(k) + z(j as i64) + Q::one();
        let m = a.clone() - Q::one();
        if rising_factor {
            acc * rising(&x, m.as_i64().expect("integer a") as usize)
        } else {
            acc * fall_q(&x, &m)
        }
    } else {
        acc / fall_q(&sj, &(Q::one() - a.clone()))
    }
}

fn product_forms(r: &mut Runner) -> Result<()> {
    let mut svecs: Vec<Vec<u64>> = vec![vec![1], vec![3], vec![6]];
    svecs.extend(pairs().into_iter().map(|(a, b)| vec![a, b]));
    svecs.extend(triples().into_iter().map(|s| s.to_vec()));
    svecs.extend(quads().into_iter().map(|s| s.to_vec()));
    let mut pts = Vec::new();
    for a in [z(1), z(2), z(3)] {
        for s in &svecs {
            pts.push((a.clone(), s.clone()));
        }
    }
    let factors = |p: &(Q, Vec<u64>)| product_moment_factors(&p.1, &p.0);
    r.check("B_k0 general product as printed", Some("b-k0-index"), svecs.clone(), |s| {
        let k = s.len() as i64;
        Ok((Q::one() / (zu(s[0]) - z(k) + Q::one()).powi(k), product_moment_factors(s, &z(1))?.0))
    })?;
    r.check("B_k0 = prod (s_i - k + i)^-1", None, svecs.clone(), |s| {
        let k = s.len() as i64;
        let printed = s
            .iter()
            .enumerate()
            .fold(Q::one(), |acc, (i, &si)| acc / (zu(si) - z(k) + z(i as i64 + 1)));
        Ok((printed, product_moment_factors(s, &z(1))?.0))
    })?;
    r.check("B_10 example as printed", Some("b-10-example"), [1u64, 2, 3, 7], |&s| {
        Ok((zu(s), product_moment_factors(&[s], &z(1))?.0))
    })?;
    r.check("B_20 and B_30 examples", None, triples(), |s| {
        let printed = Q::one() / (zu(s[0] - 1) * zu(s[1]))
            + z(10) / (zu(s[0] - 2) * zu(s[1] - 1) * zu(s[2]));
        Ok((printed, product_moment_factors(&s[..2], &z(1))?.0 + z(10) * product_moment_factors(s, &z(1))?.0))
    })?;
    let off_diag: Vec<_> = pts.iter().filter(|p| p.1.len() > 1).cloned().collect();
    let bkj = |p: &(Q, Vec<u64>), rising_factor: bool| -> Result<(Q, Q)> {
        let (_, bj) = factors(p)?;
        let k = p.1.len();
        let printed = (1..k).fold(Q::zero(), |acc, j| acc * z(1000) + b_general(&p.1, j, &p.0, rising_factor));
        let derived = (1..k).fold(Q::zero(), |acc, j| acc * z(1000) + bj[j - 1].clone());
        Ok((printed, derived))
    };
    r.check("B_kj general form as printed, j < k", Some("b-kj-factorial"), off_diag.clone(), |p| bkj(p, false))?;
    r.check("B_kj with (s_j - k + j + 1)_(a-1), j < k", None, off_diag, |p| bkj(p, true))?;
    r.check("B_kk general form", None, pts.clone(), |p| {
        let (_, bj) = factors(p)?;
        Ok((b_general(&p.1, p.1.len(), &p.0, false), bj[p.1.len() - 1].clone()))
    })?;
    let ones: Vec<u64> = vec![1, 2, 3, 5];
    r.check("B_1. as printed", Some("b-1-dot"), ones, |&s| {
        let (_, bj) = product_moment_factors(&[s], &z(1))?;
        Ok((bj[0].clone() - Q::one(), bj.iter().fold(Q::zero(), |x, y| x + y.clone())))
    })?;
    r.check("B_22 as printed (1/s2)", Some("b-2j-line"), pairs(), |&(s1, s2)| {
        Ok((Q::one() / zu(s2), product_moment_factors(&[s1, s2], &z(1))?.1[1].clone()))
    })?;
    r.check("B_22 as printed (s1)", Some("b-2j-line"), pairs(), |&(s1, s2)| {
        Ok((zu(s1), product_moment_factors(&[s1, s2], &z(1))?.1[1].clone()))
    })?;
    r.check("B_21 = 1/s2 and B_22 = 1/s1", None, pairs(), |&(s1, s2)| {
        let (_, bj) = product_moment_factors(&[s1, s2], &z(1))?;
        Ok((Q::one() / zu(s2) + z(10) / zu(s1), bj[0].clone() + z(10) * bj[1].clone()))
    })?;
    let dot = |s: &[u64]| -> Result<Q> {
        Ok(product_moment_factors(s, &z(1))?.1.into_iter().fold(Q::zero(), |x, y| x + y))
    };
    r.check("B_2. = (s1 + s2)/(s1 s2)", None, pairs(), |&(s1, s2)| {
        Ok((zu(s1 + s2) / (zu(s1) * zu(s2)), dot(&[s1, s2])?))
    })?;
    r.check("B_31, B_32, B_33", None, triples(), |s| {
        let (_, bj) = product_moment_factors(s, &z(1))?;
        let (s1, s2, s3) = (zu(s[0]), zu(s[1]), zu(s[2]));
        let printed = [
            Q::one() / ((s2.clone() - Q::one()) * s3.clone()),
            Q::one() / ((s1.clone() - Q::one()) * s3),
            Q::one() / ((s1 - Q::one()) * s2),
        ];
        let fold = |v: &[Q]| v.iter().fold(Q::zero(), |acc, x| acc * z(1000) + x.clone());
        Ok((fold(&printed), fold(&bj)))
    })?;
    r.check("B_3. closed form", None, triples(), |s| {
        let (s1, s2, s3) = (zu(s[0]), zu(s[1]), zu(s[2]));
        let sdot = s1.clone() + s2.clone() + s3.clone();
        let printed = (s2.clone() * (sdot - z(2)) - s3.clone())
            / ((s1 - Q::one()) * fall(&s2, 2) * s3);
        Ok((printed, dot(s)?))
    })?;
    r.check("B_41, B_42, B_43, B_44", None, quads(), |s| {
        let (_, bj) = product_moment_factors(s, &z(1))?;
        let v: Vec<Q> = s.iter().map(|&x| zu(x)).collect();
        let one = Q::one();
        let printed = [
            one.clone() / ((v[1].clone() - z(2)) * (v[2].clone() - one.clone()) * v[3].clone()),
            one.clone() / ((v[0].clone() - z(2)) * (v[2].clone() - one.clone()) * v[3].clone()),
            one.clone() / ((v[0].clone() - z(2)) * (v[1].clone() - one.clone()) * v[3].clone()),
            one.clone() / ((v[0].clone() - z(2)) * (v[1].clone() - one.clone()) * v[2].clone()),
        ];
        let fold = |w: &[Q]| w.iter().fold(Q::zero(), |acc, x| acc * z(1000) + x.clone());
        Ok((fold(&printed), fold(&bj)))
    })?;
    r.check("B_4. closed form as printed", Some("b-4-dot"), quads(), |s| {
        let v: Vec<Q> = s.iter().map(|&x| zu(x)).collect();
        let sdot = v.iter().fold(Q::zero(), |x, y| x + y.clone());
        let num = sdot * v[2].clone() * (v[1].clone() - z(2))
            + v[2].clone() * (v[1].clone() - z(4) * v[1].clone() + z(4))
            - v[1].clone() * v[3].clone();
        let den = (v[0].clone() - z(2)) * fall(&(v[1].clone() - z(2)), 2) * fall(&v[2], 2) * v[3].clone();
        Ok((num / den, dot(s)?))
    })?;

    // products and cumulants for α = 1
    let tl = |a: &Q| tail(Q::one(), a.clone(), &sample_c()[..2]);
    let prod_pts: Vec<_> = pts.iter().filter(|p| p.1.len() > 1 && p.0 != z(3)).cloned().collect();
    r.check("product moment: n^-1 term as printed", Some("product-leading-sign"), prod_pts.clone(), |p| {
        let m = leading_product_moment(&tl(&p.0)?, &p.1)?;
        let k = zu(p.1.len() as u64);
        Ok((fall(&k, 2) / z(2) * m.b_k0.clone(), m.m1))
    })?;
    r.check("product moment: m_0 = B_k0 and m_a = E_c B_k.", None, prod_pts.clone(), |p| {
        let m = leading_product_moment(&tl(&p.0)?, &p.1)?;
        let bdot = m.b_kj.iter().fold(Q::zero(), |x, y| x + y.clone());
        Ok((m.b_k0.clone() + z(10) * m.ec.clone() * bdot, m.m0 + z(10) * m.ma))
    })?;
    r.check("product moment: C_0(s:1) = c0^k B_k0, C_1(s:1) = c0^(k-a-1) c1 B_k.", None, prod_pts, |p| {
        let t = tl(&p.0)?;
        let k = p.1.len();
        let qy = MomentQuery::new(t, p.1.clone(), vec![Q::one(); k], 0, 1)?;
        let (b0, bj) = product_moment_factors(&p.1, &p.0)?;
        let c = sample_c();
        let bdot = bj.iter().fold(Q::zero(), |x, y| x + y.clone());
        let printed = c[0].powi(k as i64) * b0
            + z(10) * pw(&c[0], &(zu(k as u64) - p.0.clone() - Q::one()))? * c[1].clone() * bdot;
        Ok((printed, cj_coeff(&qy, 0)? + z(10) * cj_coeff(&qy, 1)?))
    })?;
    let dd = |s: &[u64; 3]| fall(&zu(s[0]), 3) * fall(&zu(s[1]), 2) * zu(s[2]);
    let cum = |s: &[u64; 3]| third_cumulant_expansion(&tl(&z(1))?, *s, 1, 1);
    r.check("third cumulant: kappa_0 as printed (times D)", Some("kappa0-times-d"), triples(), |s| {
        Ok((z(2) * (zu(s[0] + s[1]) - z(2)) * dd(s), cum(s)?.kappa0))
    })?;
    r.check("third cumulant: kappa_0 = 2(s1 + s2 - 2)/D", None, triples(), |s| {
        Ok((z(2) * (zu(s[0] + s[1]) - z(2)) / dd(s), cum(s)?.kappa0))
    })?;
    r.check("third cumulant: kappa_1 as printed", Some("kappa1-numerator"), triples(), |s| {
        let (s1, s2) = (zu(s[0]), zu(s[1]));
        let num = s2 * (Q::one() - z(2) * s1.clone()) + s1.clone() - s1.clone() * s1;
        Ok((z(2) * num / dd(s), cum(s)?.kappa1))
    })?;
    r.check("third cumulant: kappa_a = 0 at a = 1", None, triples(), |s| Ok((Q::zero(), cum(s)?.kappa_a)))?;
    Ok(())
}

/// `n^-2` refinements for `α = 1` with `a = 1` and `a = 2`.
fn second_order_forms(r: &mut Runner) -> Result<()> {
    let c = sample_c();
    let t1 = tail(Q::one(), z(1), &c[..3])?;
    let t2 = tail(Q::one(), z(2), &c[..2])?;
    let fc = (c[0].clone() * c[2].clone() - c[1].clone() * c[1].clone()) / c[0].powi(3);
    let hc = (c[0].clone() * c[2].clone() - c[1].clone() * c[1].clone()) / c[0].powi(2);
    let d2s = |s1: u64, s2: u64| zu(s2 + 1) / zu(s1 + 1) + zu(s1) / zu(s2);
    let f3s = |s1: u64, s2: u64| zu(s2 + 1) / fall(&zu(s1), 2) + Q::one() / zu(s2);
    let f3s_derived = |s1: u64, s2: u64| zu(s2 + 1) / fall(&zu(s1 + 1), 2) + Q::one() / zu(s2);
    let singles = [1u64, 2, 3, 5, 8];

    r.check("a = 1: C_2psi = psi c0^(psi-4) {c0 c2 + (psi-3) c1^2/2}", None, [z(1), z(2), z(-1), z(3)], |psi| {
        let printed = psi.clone()
            * pw(&c[0], &(psi.clone() - z(4)))?
            * (c[0].clone() * c[2].clone() + (psi.clone() - z(3)) * c[1].clone() * c[1].clone() / z(2));
        Ok((printed, quantile_series(&t1, psi)?.coeff(2).clone()))
    })?;
    r.check("a = 1: d_2(s:1) = (s+1) F_c", None, singles, |&s| {
        let qy = MomentQuery::new(t1.clone(), vec![s], vec![Q::one()], 2, 2)?;
        Ok((zu(s + 1) * fc.clone(), dm_coeffs(&qy, 1, 1, 2)?[2].clone()))
    })?;
    r.check("a = 1: normalised mean n^-2 term (s+1) F_c/c0", None, singles, |&s| {
        let m = mean_expansion(&t1, s, 2, 2)?;
        Ok((zu(s + 1) * fc.clone() / c[0].clone(), at_offset(&m, &z(2))))
    })?;
    let pair_q1 = |s1: u64, s2: u64| MomentQuery::new(t1.clone(), vec![s1, s2], vec![Q::one(), Q::one()], 2, 2);
    r.check("a = 1: C_2(s:1) as a sum over pi_s", None, pairs(), |&(s1, s2)| {
        let qs = quantile_series(&t1, &Q::one())?;
        let (c01, c11, c21) = (qs.coeff(0).clone(), qs.coeff(1).clone(), qs.coeff(2).clone());
        let printed = c01 * c21 * (pi_s(s1, s2, &z(1))? + pi_s(s1, s2, &z(-1))?) + c11.clone() * c11;
        Ok((printed, cj_coeff(&pair_q1(s1, s2)?, 2)?))
    })?;
    r.check("a = 1: d_2(s:1) for pairs as printed", Some("pair-d2-extra-terms"), pairs(), |&(s1, s2)| {
        let qy = pair_q1(s1, s2)?;
        let printed = cj_coeff(&qy, 2)? - d2s(s1, s2) * hc.clone() + c[1].clone() * c[1].clone() / c[0].powi(2);
        Ok((printed, dm_coeffs(&qy, 1, 1, 2)?[2].clone()))
    })?;
    r.check("a = 1: d_2(s:1) = C_2(s:1) for pairs", None, pairs(), |&(s1, s2)| {
        let qy = pair_q1(s1, s2)?;
        Ok((cj_coeff(&qy, 2)?, dm_coeffs(&qy, 1, 1, 2)?[2].clone()))
    })?;
    r.check("a = 1: covariance n^-2 term -c0^-2 H_c F_3s as printed", Some("f3s-definition"), pairs(), |&(s1, s2)| {
        let m = covariance_series(&t1, s1, s2, 2, 2)?;
        Ok((-hc.clone() * f3s(s1, s2) / c[0].powi(2), at_offset(&m, &z(2))))
    })?;
    r.check("a = 1: covariance n^-2 term with F_3s = (s2+1)/<s1+1>_2 + 1/s2", None, pairs(), |&(s1, s2)| {
        let m = covariance_series(&t1, s1, s2, 2, 2)?;
        Ok((-hc.clone() * f3s_derived(s1, s2) / c[0].powi(2), at_offset(&m, &z(2))))
    })?;

    let mut psi_s = Vec::new();
    for psi in [1i64, 2] {
        for s in singles.into_iter().filter(|&s| s as i64 >= psi) {
            psi_s.push((psi, s));
        }
    }
    r.check("a = 2: C_1(s:psi) = psi c0^(psi-3) c1 <s>_(psi-2)^-1", None, psi_s.clone(), |&(psi, s)| {
        let qy = MomentQuery::new(t2.clone(), vec![s], vec![z(psi)], 0, 1)?;
        let printed = z(psi) * c[0].powi(psi - 3) * c[1].clone() / fall(&zu(s), psi - 2);
        let special = if psi == 1 {
            c[1].clone() * zu(s + 1) / c[0].powi(2)
        } else {
            z(2) * c[1].clone() / c[0].clone()
        };
        let d = cj_coeff(&qy, 1)?;
        Ok((printed + z(10) * special, d.clone() + z(10) * d))
    })?;
    r.check("a = 2: d_2(s:psi) = C_1(s:psi)", None, psi_s, |&(psi, s)| {
        let qy = MomentQuery::new(t2.clone(), vec![s], vec![z(psi)], 2, 1)?;
        Ok((cj_coeff(&qy, 1)?, dm_coeffs(&qy, 2, 1, 2)?[2].clone()))
    })?;
    r.check("a = 2: normalised mean s^-1 + c0^-3 c1 (s+1) n^-2", None, singles, |&s| {
        let m = mean_expansion(&t2, s, 2, 1)?;
        let printed = Q::one() / zu(s) + z(10) * c[1].clone() * zu(s + 1) / c[0].powi(3);
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(2)) + z(100) * at_offset(&m, &z(1))))
    })?;
    r.check("a = 2: C_1(s:1) = c0^-1 c1 D_2s and d_2 = C_1 for pairs", None, pairs(), |&(s1, s2)| {
        let qy = MomentQuery::new(t2.clone(), vec![s1, s2], vec![Q::one(), Q::one()], 2, 1)?;
        let printed = c[1].clone() * d2s(s1, s2) / c[0].clone();
        Ok((printed.clone() + z(10) * printed, cj_coeff(&qy, 1)? + z(10) * dm_coeffs(&qy, 2, 1, 2)?[2].clone()))
    })?;
    r.check("a = 2: normalised pair (1 - n^-1)(s1-1)^-1 s2^-1 + n^-2 c0^-3 c1 D_2s", None, pairs(), |&(s1, s2)| {
        let m = pair_moment_expansion(&t2, s1, s2, 2, 1)?;
        let b = Q::one() / (zu(s1 - 1) * zu(s2));
        let printed = b.clone() + z(10) * (-b) + z(100) * c[1].clone() * d2s(s1, s2) / c[0].powi(3);
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(1)) + z(100) * at_offset(&m, &z(2))))
    })?;
    r.check("a = 2: covariance n^-2 term -c0^-3 c1 F_3s as printed", Some("f3s-definition"), pairs(), |&(s1, s2)| {
        let m = covariance_series(&t2, s1, s2, 2, 1)?;
        Ok((-c[1].clone() * f3s(s1, s2) / c[0].powi(3), at_offset(&m, &z(2))))
    })?;
    r.check("a = 2: covariance n^-2 term with F_3s = (s2+1)/<s1+1>_2 + 1/s2", None, pairs(), |&(s1, s2)| {
        let m = covariance_series(&t2, s1, s2, 2, 1)?;
        Ok((-c[1].clone() * f3s_derived(s1, s2) / c[0].powi(3), at_offset(&m, &z(2))))
    })?;
    Ok(())
}

/// Cauchy displays, in units where every coefficient carries its power of π:
/// the tail `c_i = (-1)^i/(2i+1)` gives the coefficient of `π^(2i-ψ)` in
/// `C_iψ` and of `π^2` in the normalised `n^-2` terms.
fn cauchy_forms(r: &mut Runner) -> Result<()> {
    let c: Vec<Q> = (0..8).map(|i| q(if i % 2 == 0 { 1 } else { -1 }, 2 * i + 1)).collect();
    let t = tail(Q::one(), z(2), &c)?;
    let psis = [z(1), z(2), z(3), z(-1), q(1, 2)];
    let coeff = |psi: &Q, i: usize| -> Result<Q> { Ok(quantile_series(&t, psi)?.coeff(i).clone()) };
    r.check("Cauchy: C_0psi = pi^-psi, C_1psi = -psi pi^(2-psi)/3", None, psis.clone(), |psi| {
        Ok((Q::one() + z(10) * (-psi.clone() / z(3)), coeff(psi, 0)? + z(10) * coeff(psi, 1)?))
    })?;
    r.check("Cauchy: C_2psi as printed", Some("cauchy-c2-divisor"), psis.clone(), |psi| {
        Ok((psi.clone() * (q(1, 5) + (psi.clone() - z(5)) / z(2)), coeff(psi, 2)?))
    })?;
    r.check("Cauchy: C_2psi = psi pi^(4-psi) {1/5 + (psi-5)/18}", None, psis.clone(), |psi| {
        Ok((psi.clone() * (q(1, 5) + (psi.clone() - z(5)) / z(18)), coeff(psi, 2)?))
    })?;
    r.check("Cauchy: C_3psi as printed", Some("cauchy-c3"), psis, |psi| {
        let inner = q(1, 105) - z(2) * psi.clone() / z(15) + rising(&(psi.clone() + Q::one()), 2) / z(162);
        Ok((-psi.clone() * inner, coeff(psi, 3)?))
    })?;
    r.check("Cauchy: C_i1 = (-4)^i B_2i/(2i)! in units of pi^(2i-1)", None, 0..=6usize, |&i| {
        let printed = z(-4).powi(i as i64) * bernoulli_even::<Q>(i)? / factorial::<Q>(2 * i);
        Ok((printed, coeff(&Q::one(), i)?))
    })?;
    let singles = [1u64, 2, 3, 5, 8];
    r.check("Cauchy: normalised mean n^-2 term as printed", Some("cauchy-mean-third"), singles, |&s| {
        let m = mean_expansion(&t, s, 2, 1)?;
        Ok((-zu(s + 1), at_offset(&m, &z(2))))
    })?;
    r.check("Cauchy: normalised mean n^-2 term -pi^2 (s+1)/3", None, singles, |&s| {
        let m = mean_expansion(&t, s, 2, 1)?;
        Ok((-zu(s + 1) / z(3), at_offset(&m, &z(2))))
    })?;
    let d2s = |s1: u64, s2: u64| zu(s2 + 1) / zu(s1 + 1) + zu(s1) / zu(s2);
    let f3s = |s1: u64, s2: u64| zu(s2 + 1) / fall(&zu(s1), 2) + Q::one() / zu(s2);
    let f3s_derived = |s1: u64, s2: u64| zu(s2 + 1) / fall(&zu(s1 + 1), 2) + Q::one() / zu(s2);
    r.check("Cauchy: pair (1 - n^-1)(s1-1)^-1 s2^-1 - n^-2 pi^2 D_2s/3", None, pairs(), |&(s1, s2)| {
        let m = pair_moment_expansion(&t, s1, s2, 2, 1)?;
        let b = Q::one() / (zu(s1 - 1) * zu(s2));
        let printed = b.clone() - z(10) * b - z(100) * d2s(s1, s2) / z(3);
        Ok((printed, m.coefficient(0, 0) + z(10) * at_offset(&m, &z(1)) + z(100) * at_offset(&m, &z(2))))
    })?;
    r.check("Cauchy: covariance n^-2 term pi^2 F_3s/3 as printed", Some("f3s-definition"), pairs(), |&(s1, s2)| {
        let m = covariance_series(&t, s1, s2, 2, 1)?;
        Ok((f3s(s1, s2) / z(3), at_offset(&m, &z(2))))
    })?;
    r.check("Cauchy: covariance n^-2 term with F_3s = (s2+1)/<s1+1>_2 + 1/s2", None, pairs(), |&(s1, s2)| {
        let m = covariance_series(&t, s1, s2, 2, 1)?;
        Ok((f3s_derived(s1, s2) / z(3), at_offset(&m, &z(2))))
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_route_reproduces_low_orders() {
        let t = q(2, 3);
        let e = e_coeffs_from_bernoulli(&t, 3).unwrap();
        assert_eq!(e[0], Q::one());
        assert_eq!(e[1], -rising(&t, 2) / z(2));
        assert_eq!(e[2], rising(&t, 3) * (z(3) * t.clone() + Q::one()) / z(24));
    }

    #[test]
    fn every_check_is_consistent_with_the_ledger() {
        let checks = regenerate().unwrap();
        let bad: Vec<_> = checks.iter().filter(|c| !c.consistent()).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
