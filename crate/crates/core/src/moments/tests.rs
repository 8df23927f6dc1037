use super::*;
use crate::beta::{joint_beta_moment, RankSpec, ThetaVector};
use crate::scalar::Exact;
use crate::series::FormalSeries;
use proptest::prelude::*;
use std::f64::consts::PI;

fn tail_f(alpha: f64, beta: f64, c: &[f64]) -> TailModel<f64> {
    TailModel::new(alpha, beta, FormalSeries::new(c.to_vec()).unwrap()).unwrap()
}

fn cauchy(order: usize) -> TailModel<f64> {
    let c: Vec<f64> = (0..=order)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / ((2 * i + 1) as f64 * PI))
        .collect();
    tail_f(1.0, 2.0, &c)
}

fn frechet1(order: usize) -> TailModel<f64> {
    let c: Vec<f64> = (0..=order)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } / crate::special::factorial::<f64>(i + 1))
        .collect();
    tail_f(1.0, 1.0, &c)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn pareto_mean_is_exact() {
    let tail = TailModel::pareto(1.0, 1.0, 3).unwrap();
    let q = MomentQuery::new(tail.clone(), vec![2], vec![1.0], 7, 3).unwrap();
    let raw = moment_expansion(&q).unwrap();
    let ev = evaluate_expansion(&raw, 5);
    assert!((ev.value - 2.5).abs() < 1e-14);
    assert_eq!(ev.last_term, 0.0);
    let norm = mean_expansion(&tail, 2, 7, 3).unwrap();
    let ev = evaluate_expansion(&norm, 5);
    assert!((ev.value - 0.5).abs() < 1e-15);
    assert_eq!(ev.last_term, 0.0);
}

#[test]
fn zero_powers_give_one() {
    let q = MomentQuery::new(cauchy(4), vec![3, 1], vec![0.0, 0.0], 7, 4).unwrap();
    let e = moment_expansion(&q).unwrap();
    for ((i, j), c) in e.terms() {
        let expect = if (i, j) == (0, 0) { 1.0 } else { 0.0 };
        assert!((c - expect).abs() < 1e-14, "({i},{j}) = {c}");
    }
    assert_eq!(evaluate_expansion(&ExpansionSeries::constant(1.0, 1.0, 3, 3).unwrap(), 7).value, 1.0);
    assert_eq!(evaluate_expansion(&ExpansionSeries::constant(1.0, 1.0, 3, 3).unwrap(), 7).last_term, 0.0);
}

#[test]
fn cauchy_mean_second_order() {
    let m = mean_expansion(&cauchy(4), 1, 7, 4).unwrap();
    assert!((m.coefficient(0, 0) - 1.0).abs() < 1e-14);
    assert!((m.coefficient(0, 1) + 2.0 * PI * PI / 3.0).abs() < 1e-12);
    let two_term = m.truncated(3.0);
    assert_eq!(two_term.remainder_exponent(), 3.0);
    let ev = evaluate_expansion(&two_term, 100);
    assert!((ev.value - (1.0 - 2.0 * PI * PI / 3.0 * 1e-4)).abs() < 1e-15);
    assert!((ev.value - 0.999342026).abs() < 1e-9);
}

#[test]
fn frechet_mean_first_order() {
    let m = mean_expansion(&frechet1(3), 1, 7, 3).unwrap();
    assert!((m.coefficient(0, 0) - 1.0).abs() < 1e-15);
    let n1: f64 = m.terms().filter(|(k, _)| k.0 + k.1 == 1).map(|(_, c)| *c).sum();
    assert!((n1 + 0.5).abs() < 1e-14);
}

#[test]
fn single_order_statistic_coefficients() {
    // k = 1: C_j(s:ψ) = C_{jψ} (s+1)_{ja-ψ}
    let tail = tail_f(1.5, 0.75, &[0.8, 0.3, -0.2, 0.1]);
    let theta = 1.2;
    let s = 3u64;
    let q = MomentQuery::new(tail.clone(), vec![s], vec![theta], 3, 3).unwrap();
    let qs = crate::quantile::quantile_series(&tail, &theta).unwrap();
    for j in 0..=3 {
        let shift = 0.5 * j as f64 - theta / 1.5;
        let expect = qs.coeff(j) * crate::special::gamma_ratio(&(s as f64 + 1.0), &shift).unwrap();
        assert!(close(cj_coeff(&q, j).unwrap(), expect, 1e-12));
    }
    assert!(cj_coeff(&q, 4).is_err());
}

#[test]
fn pair_leading_coefficient() {
    let c0 = Exact::ratio(3, 5);
    let tail = TailModel::new(Exact::int(1), Exact::int(1), FormalSeries::new(vec![c0.clone(), Exact::ratio(1, 7)]).unwrap()).unwrap();
    let q = MomentQuery::new(tail, vec![5, 2], vec![Exact::int(1), Exact::int(1)], 1, 1).unwrap();
    let expect = c0.clone() * c0 / (Exact::int(4) * Exact::int(2));
    assert_eq!(cj_coeff(&q, 0).unwrap(), expect);
}

#[test]
fn finiteness_is_enforced() {
    let err = MomentQuery::new(cauchy(2), vec![0], vec![1.0], 2, 2).unwrap_err();
    assert!(err.is_infinite_moment());
    let err = MomentQuery::new(cauchy(2), vec![1, 0], vec![1.0, 1.0], 2, 2).unwrap_err();
    assert!(matches!(err, Error::InfiniteMoment { index: 1, .. }));
    assert!(MomentQuery::new(cauchy(2), vec![2, 1], vec![1.0, 1.0], 8, 2).is_err());
    assert!(MomentQuery::new(cauchy(2), vec![2, 1], vec![1.0, 1.0], 2, 3).is_err());
}

#[test]
fn regrouped_coefficients() {
    let tail = TailModel::pareto(0.5, 1.0, 2).unwrap();
    let tail = TailModel::new(0.5, 1.0, tail.c().clone()).unwrap();
    assert_eq!(tail.a(), 2.0);
    let tail = TailModel::new(1.0, 2.0, FormalSeries::new(vec![1.0, 0.0, 0.0]).unwrap()).unwrap();
    let q = MomentQuery::new(tail, vec![2], vec![1.0], 7, 2).unwrap();
    let d = dm_coeffs(&q, 2, 1, 4).unwrap();
    assert_eq!(d[1], 0.0);
    assert!(dm_coeffs(&q, 1, 1, 4).is_err());
    assert!(dm_coeffs(&q, 4, 2, 4).is_err());

    // a = 1: anti-diagonal sums; d_2 = (s+1) F_c
    let c = [Exact::ratio(2, 3), Exact::ratio(-1, 4), Exact::ratio(5, 9)];
    let tail = TailModel::new(Exact::int(1), Exact::int(1), FormalSeries::new(c.to_vec()).unwrap()).unwrap();
    let s = 4u64;
    let q = MomentQuery::new(tail, vec![s], vec![Exact::int(1)], 2, 2).unwrap();
    let d = dm_coeffs(&q, 1, 1, 2).unwrap();
    let fc = c[0].powi(-3) * (c[0].clone() * c[2].clone() - c[1].clone() * c[1].clone());
    assert_eq!(d[2], Exact::int(s as i64 + 1) * fc);
    let e = moment_expansion(&q).unwrap();
    assert_eq!(d[1], e.coefficient(1, 0) + e.coefficient(0, 1));
}

#[test]
fn covariance_alpha_one() {
    let report = covariance_expansion(&frechet1(2), 5, 3).unwrap();
    assert!(close(report.f0, 1.0 / (5.0 * 4.0 * 3.0), 1e-13));
    assert!(report.f2.abs() < 1e-14);
    assert!(close(report.ec, -0.5, 1e-15));
    assert_eq!(report.remainder_exponent, 2.0);
    // s = (2,1), n = 100: 0.5 (1 - 2/100)
    let cov = covariance_series(&frechet1(2), 2, 1, 1, 1).unwrap();
    let ev = cov.evaluate(100.0);
    assert!((ev.value - 0.49).abs() < 1e-14, "{}", ev.value);
}

#[test]
fn covariance_matches_printed_pieces() {
    // general α: F0 = B20 - <s1>_λ^{-1}<s2>_λ^{-1}, F1 = <λ>_2 <s1>^{-1}<s2>^{-1} - <2λ>_2 B20/2
    let tail = tail_f(2.5, 1.25, &[1.3, -0.4]);
    let (s1, s2) = (4u64, 2u64);
    let lam = 0.4;
    let r = covariance_expansion(&tail, s1, s2).unwrap();
    let fall = |s: u64, p: f64| crate::special::gamma_ratio(&(s as f64 + 1.0 - p), &p).unwrap();
    let inv = 1.0 / (fall(s1, lam) * fall(s2, lam));
    assert!(close(r.f0, r.b20 - inv, 1e-12));
    let f1 = lam * (lam - 1.0) * inv - 2.0 * lam * (2.0 * lam - 1.0) * r.b20 / 2.0;
    assert!(close(r.f1, f1, 1e-12));
    let a = 0.5;
    let f2 = r.da - 1.0 / (fall(s1, lam) * fall(s2, lam - a)) - 1.0 / (fall(s1, lam - a) * fall(s2, lam));
    assert!(close(r.f2, f2, 1e-12));
    assert!(close(r.ec, 0.4 * 1.3f64.powf(-1.5) * -0.4, 1e-14));
    assert!(r.f0 >= 0.0 || s1 != s2);
    let v = covariance_expansion(&tail, 3, 3).unwrap();
    assert!(v.f0 >= 0.0);
}

#[test]
fn third_cumulant_leading_terms() {
    let k = third_cumulant_expansion(&frechet1(2), [3, 2, 1], 1, 1).unwrap();
    assert!(close(k.kappa0, 0.5, 1e-13));
    assert!(k.kappa_a.abs() < 1e-13);
    assert!(close(k.kappa1, -13.0 / 6.0, 1e-12));
    assert!(third_cumulant_expansion(&cauchy(2), [3, 2, 1], 1, 1).is_ok());
    assert!(third_cumulant_expansion(&tail_f(2.0, 1.0, &[1.0, 0.0]), [3, 2, 1], 1, 1).is_err());
    assert!(third_cumulant_expansion(&frechet1(2), [2, 2, 1], 1, 1).unwrap_err().is_infinite_moment());
}

#[test]
fn leading_product_examples() {
    let t = frechet1(2);
    let l = leading_product_moment(&t, &[3, 2, 1]).unwrap();
    assert!(close(l.b_k0, 1.0, 1e-14));
    assert!(close(l.m0, 1.0, 1e-14));
    assert!(close(l.m1, -3.0, 1e-13));
    let l = leading_product_moment(&t, &[2, 1]).unwrap();
    assert!(close(l.b_k0, 1.0, 1e-14));
    let l = leading_product_moment(&t, &[4]).unwrap();
    assert!(close(l.m0, 0.25, 1e-15));
    assert_eq!(l.m1, 0.0);
    let sum: f64 = l.b_kj.iter().sum();
    assert!(close(l.ma, l.ec * sum, 1e-13));
}

#[test]
fn specialisations_agree_with_generic_pipeline() {
    let tail = cauchy(3);
    let pair = pair_moment_expansion(&tail, 4, 2, 5, 3).unwrap();
    let q = MomentQuery::new(tail.clone(), vec![4, 2], vec![1.0, 1.0], 5, 3).unwrap();
    let generic = moment_expansion(&q).unwrap().normalized(tail.c0()).unwrap();
    for ((i, j), c) in generic.terms() {
        assert!(close(*c, pair.coefficient(i, j), 1e-10) || (c - pair.coefficient(i, j)).abs() < 1e-14);
    }
    assert_eq!(pair_moment_expansion(&tail, 2, 4, 5, 3).unwrap(), pair);
}

#[test]
fn raw_pareto_matches_beta_moment_in_two_dimensions() {
    // Pareto α = 1: E X_{n,n-2} X_{n,n-1} = b_n(r : (-2, -1))
    let tail = TailModel::pareto(1.0, 1.0, 2).unwrap();
    let q = MomentQuery::new(tail, vec![2, 1], vec![1.0, 1.0], 7, 2).unwrap();
    let e = moment_expansion(&q).unwrap();
    let exact = joint_beta_moment(
        &RankSpec::from_depths(6, &[2, 1]).unwrap(),
        &ThetaVector::new(vec![-1.0, -1.0]).unwrap(),
    )
    .unwrap();
    assert!(close(e.evaluate(6.0).value, exact, 1e-13));
}

fn tail_strategy() -> impl Strategy<Value = TailModel<f64>> {
    (0.8f64..3.0, 0.5f64..2.5, 0.3f64..2.0, prop::collection::vec(-1.0f64..1.0, 3)).prop_map(|(alpha, beta, c0, rest)| {
        let mut c = vec![c0];
        c.extend(rest);
        tail_f(alpha, beta, &c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scale_equivariance(tail in tail_strategy(), lam in 0.5f64..2.0, t1 in 0.1f64..1.0, t2 in 0.1f64..1.0, n in 20u64..500) {
        let q = MomentQuery::new(tail.clone(), vec![5, 3], vec![t1, t2], 4, 3).unwrap();
        let qs = MomentQuery::new(tail.scaled(&lam).unwrap(), vec![5, 3], vec![t1, t2], 4, 3).unwrap();
        let v = evaluate_expansion(&moment_expansion(&q).unwrap(), n).value;
        let vs = evaluate_expansion(&moment_expansion(&qs).unwrap(), n).value;
        prop_assert!(close(vs, v * lam.powf(t1 + t2), 1e-12));
    }

    #[test]
    fn tie_invariance(tail in tail_strategy(), s in 3u64..8) {
        let pair = pair_moment_expansion(&tail, s, s, 4, 3).unwrap();
        let q = MomentQuery::new(tail.clone(), vec![s], vec![2.0], 4, 3).unwrap();
        let merged = moment_expansion(&q).unwrap().normalized(tail.c0()).unwrap();
        for ((i, j), c) in merged.terms() {
            let p = pair.coefficient(i, j);
            prop_assert!((c - p).abs() <= 1e-10 * c.abs().max(p.abs()).max(1e-12));
        }
    }

    #[test]
    fn pareto_exactness(alpha in prop::sample::select(vec![0.5, 1.0, 2.0]), c0 in 0.5f64..2.0, s in 1u64..6, n in 20u64..200) {
        let theta = alpha;
        let tail = TailModel::pareto(alpha, c0, 3).unwrap();
        let q = MomentQuery::new(tail, vec![s], vec![theta], 7, 3).unwrap();
        let v = evaluate_expansion(&moment_expansion(&q).unwrap(), n).value;
        let exact = c0 * joint_beta_moment(
            &RankSpec::from_depths(n, &[s]).unwrap(),
            &ThetaVector::new(vec![-1.0]).unwrap(),
        ).unwrap();
        prop_assert!(close(v, exact, 1e-12));
    }
}
