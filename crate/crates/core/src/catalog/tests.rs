use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn tail_coefficients() {
    let c = Distribution::Cauchy.tail(6).unwrap();
    assert!(rel(c.c().coeffs()[0], 1.0 / PI) < 1e-15);
    assert!(rel(c.c().coeffs()[1], -1.0 / (3.0 * PI)) < 1e-15);
    let f = Distribution::Frechet { alpha: 1.0 }.tail(3).unwrap();
    assert_eq!(&f.c().coeffs()[..3], &[1.0, -0.5, 1.0 / 6.0]);
    let t1 = Distribution::StudentT { dof: 1 }.tail(6).unwrap();
    for i in 0..=6 {
        // the Student t tail covers both signs of x only in the two-sided sense;
        // for N = 1 it must reproduce the Cauchy upper tail
        assert!(rel(t1.c().coeffs()[i], c.c().coeffs()[i]) < 1e-13, "i = {i}");
    }
    assert_eq!((t1.alpha(), t1.beta()), (&1.0, &2.0));
    assert!(Distribution::Cauchy.tail(13).is_err());
}

#[test]
fn stable_half_is_levy() {
    // stable(1/2, -1/2): P(X > x) = erf(1/(2 sqrt x))
    let d: Distribution = "stable(0.5,-0.5)".parse().unwrap();
    let tail = d.tail(8).unwrap();
    assert!(rel(*tail.c0(), 1.0 / PI.sqrt()) < 1e-14);
    assert!(tail.c().coeffs()[1].abs() < 1e-16);
    assert!(rel(tail.c().coeffs()[2], -1.0 / (12.0 * PI.sqrt())) < 1e-13);
    for x in [5.0, 10.0, 20.0] {
        let truth = libm::erf(0.5 / f64::sqrt(x));
        assert!(rel(tail.survival(x), truth) < 1e-6);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let reps = 200_000;
    let x = 25.0;
    let hits = (0..reps).filter(|_| d.sample(&mut rng).unwrap() > x).count() as f64 / reps as f64;
    let p = libm::erf(0.1);
    let se = (p * (1.0 - p) / reps as f64).sqrt();
    assert!((hits - p).abs() < 4.0 * se, "{hits} vs {p}");
    assert!(!"stable(0.5,0.2)".parse::<Distribution>().unwrap().capabilities().sampler);
}

#[test]
fn exact_quantiles() {
    assert!((Distribution::Cauchy.quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
    let f1 = Distribution::Frechet { alpha: 1.0 };
    assert!((f1.quantile((-1.0f64).exp()).unwrap() - 1.0).abs() < 1e-14);
    assert!((Distribution::StudentT { dof: 1 }.quantile(0.75).unwrap() - 1.0).abs() < 1e-15);
    assert!(Distribution::Cauchy.quantile(1.0).is_err());
    assert!(matches!(
        "stable(0.5,0.3)".parse::<Distribution>().unwrap().quantile(0.5),
        Err(Error::Capability { .. })
    ));
}

#[test]
fn numeric_quantiles() {
    let t3 = Distribution::StudentT { dof: 3 };
    assert!(rel(t3.quantile(0.975).unwrap(), 3.182446305284263) < 1e-12);
    assert!(rel(t3.quantile(0.999).unwrap(), 10.214531852405331) < 1e-12);
    assert!(rel(t3.quantile(0.025).unwrap(), -3.182446305284263) < 1e-12);
    assert!(rel(t3.survival(10.0).unwrap(), 0.0010641995292070747) < 1e-12);
    let f = Distribution::FDist { m: 4.0, n: 6.0 };
    assert!(rel(f.quantile(0.95).unwrap(), 4.533676950275243) < 1e-12);
    assert!(rel(f.quantile(0.999).unwrap(), 21.923541361676325) < 1e-12);
    assert!(rel(f.survival(10.0).unwrap(), 0.008008118896087421) < 1e-12);
    // deep tail through the upper-probability entry point
    let x = t3.upper_quantile(1e-9).unwrap();
    assert!(rel(t3.survival(x).unwrap(), 1e-9) < 1e-10);
}

#[test]
fn tail_series_matches_truth() {
    let m = 4;
    for d in [
        Distribution::Cauchy,
        Distribution::StudentT { dof: 3 },
        Distribution::StudentT { dof: 5 },
        Distribution::FDist { m: 4.0, n: 6.0 },
        Distribution::FDist { m: 3.0, n: 5.0 },
        Distribution::Frechet { alpha: 1.5 },
    ] {
        let tail = d.tail(m).unwrap();
        let next = d.tail(m + 1).unwrap();
        let c_next = next.c().coeffs()[m + 1].abs();
        for x in [5.0, 10.0, 20.0] {
            let truth = d.survival(x).unwrap();
            let bound = 2.0 * c_next * x.powf(-tail.alpha() - (m + 1) as f64 * tail.beta());
            let err = (truth - tail.survival(x)).abs();
            assert!(err <= bound + 1e-15 * truth, "{d} x = {x}: {err} > {bound}");
        }
    }
}

#[test]
fn samplers() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000;
    let mut draws: Vec<f64> = (0..n).map(|_| Distribution::Cauchy.sample(&mut rng).unwrap()).collect();
    draws.sort_by(f64::total_cmp);
    assert!(draws[n / 2].abs() < 0.02);
    let fr = Distribution::Frechet { alpha: 2.0 };
    let below = (0..n).filter(|_| fr.sample(&mut rng).unwrap() <= 1.0).count() as f64 / n as f64;
    assert!((below - (-1.0f64).exp()).abs() < 0.01);
    let pa = Distribution::Pareto { alpha: 1.0, c0: 1.0 };
    let above = (0..n).filter(|_| pa.sample(&mut rng).unwrap() > 2.0).count() as f64 / n as f64;
    assert!((above - 0.5).abs() < 0.01);
    // reproducible stream
    let mut a = ChaCha8Rng::seed_from_u64(5);
    let mut b = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        assert_eq!(Distribution::Cauchy.sample(&mut a).unwrap(), Distribution::Cauchy.sample(&mut b).unwrap());
    }
}

#[test]
fn parsing() {
    assert_eq!("student_t(3)".parse::<Distribution>().unwrap(), Distribution::StudentT { dof: 3 });
    assert_eq!("stable(0.5,0.3)".parse::<Distribution>().unwrap(), Distribution::Stable { alpha: 0.5, gamma: 0.3 });
    assert_eq!("pareto".parse::<Distribution>().unwrap(), Distribution::Pareto { alpha: 1.0, c0: 1.0 });
    assert_eq!(" frechet( 2 ) ".parse::<Distribution>().unwrap(), Distribution::Frechet { alpha: 2.0 });
    for bad in ["student_t(2.5)", "student_t", "f_dist(3,2)", "stable(1.5,0)", "stable(0.5,0.7)", "nope", "cauchy(1)", "pareto(1,"] {
        assert!(bad.parse::<Distribution>().is_err(), "{bad}");
    }
    for d in catalog() {
        assert_eq!(d.to_string().parse::<Distribution>().unwrap(), d);
    }
}
