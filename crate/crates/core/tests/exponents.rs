use approx::assert_abs_diff_eq;
use mixnorm::exponents::*;
use mixnorm::Error;
use proptest::prelude::*;

const INF: f64 = f64::INFINITY;

fn ev(v: &[f64]) -> ExponentVector {
    ExponentVector::new(v.to_vec()).unwrap()
}

fn bh(m: usize) -> ProblemSpec {
    ProblemSpec::scalar(m)
}

#[test]
fn conjugates_and_alpha() {
    assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
    assert_eq!(conjugate_exponent(1.0).unwrap(), INF);
    assert_eq!(conjugate_exponent(INF).unwrap(), 1.0);
    assert_abs_diff_eq!(conjugate_exponent(4.0 / 3.0).unwrap(), 4.0, epsilon = 1e-12);
    assert!(conjugate_exponent(0.9).is_err());

    assert_eq!(ksz_alpha(INF).unwrap(), 0.5);
    assert_eq!(ksz_alpha(2.0).unwrap(), 0.0);
    assert_eq!(ksz_alpha(1.0).unwrap(), 0.0);
    assert_abs_diff_eq!(ksz_alpha(4.0).unwrap(), 0.25, epsilon = 1e-15);
}

#[test]
fn lambda_and_rho() {
    assert_eq!(lambda_base(&bh(4)).unwrap(), 1.0);
    let hilbert = ProblemSpec::new(ExponentVector::infinite(3), 1.5, 1.5, Field::Real).unwrap();
    assert_abs_diff_eq!(lambda_base(&hilbert).unwrap(), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(rho_exponent(&hilbert).unwrap(), 2.0, epsilon = 1e-12);

    let p44 = ProblemSpec::new(ev(&[4.0, 4.0]), 1.0, 2.0, Field::Real).unwrap();
    assert_abs_diff_eq!(lambda_base(&p44).unwrap(), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(rho_exponent(&p44).unwrap(), 2.0, epsilon = 1e-12);

    assert_abs_diff_eq!(rho_exponent(&bh(3)).unwrap(), 1.5, epsilon = 1e-15);
    for m in 1..10 {
        let m_f = m as f64;
        assert_abs_diff_eq!(rho_exponent(&bh(m)).unwrap(), 2.0 * m_f / (m_f + 1.0), epsilon = 1e-14);
    }

    let too_small = ProblemSpec::new(ev(&[2.0, 2.0]), 1.0, 2.0, Field::Real).unwrap();
    assert!(matches!(lambda_base(&too_small), Err(Error::InfeasibleSpec { .. })));
}

#[test]
fn feasibility_examples() {
    let f = feasibility(&ev(&[4.0 / 3.0, 4.0 / 3.0]), &bh(2)).unwrap();
    assert!(f.feasible);
    assert_abs_diff_eq!(f.slack, 0.0, epsilon = 1e-12);
    assert_eq!(f.lambda, 1.0);

    for m in 1..8 {
        let r = 2.0 * m as f64 / (m as f64 + 1.0);
        let f = feasibility(&ExponentVector::uniform(m, r).unwrap(), &bh(m)).unwrap();
        assert!(f.feasible, "m = {m}");
        assert!(f.slack.abs() <= 1e-12);
    }

    let f = feasibility(&ev(&[1.2, 1.2]), &bh(2)).unwrap();
    assert!(!f.feasible);
    assert_abs_diff_eq!(f.slack, -1.0 / 6.0, epsilon = 1e-12);

    assert!(feasibility(&ev(&[2.5, 2.0]), &bh(2)).is_err());
    let p44 = ProblemSpec::new(ev(&[4.0, 4.0]), 1.0, 2.0, Field::Real).unwrap();
    assert!(matches!(
        feasibility(&ev(&[1.5, 2.0]), &p44),
        Err(Error::RangeViolation { index: 1, .. })
    ));
}

#[test]
fn hull_examples() {
    let t = hull_decompose(&ev(&[4.0 / 3.0, 4.0 / 3.0]), 1.0).unwrap();
    assert_abs_diff_eq!(t[0], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(t[1], 0.5, epsilon = 1e-12);
    assert_eq!(hull_decompose(&ev(&[1.0, 2.0]), 1.0).unwrap(), vec![1.0, 0.0]);
    let t = hull_decompose(&ev(&[1.5, 2.0, 2.0]), 1.5).unwrap();
    assert_abs_diff_eq!(t[0], 1.0, epsilon = 1e-12);
    assert!(t[1].abs() < 1e-12 && t[2].abs() < 1e-12);

    assert!(matches!(hull_decompose(&ev(&[1.2, 1.2]), 1.0), Err(Error::NotOnFace { .. })));
    assert!(hull_decompose(&ev(&[2.0, 2.0]), 2.0).is_ok());
}

#[test]
fn interpolation_and_bennett_carl() {
    let p = ev(&[1.0, 2.0]);
    let q = ev(&[2.0, 1.0]);
    assert_eq!(interpolate_exponents(&p, &q, 0.0).unwrap(), q);
    assert_eq!(interpolate_exponents(&p, &q, 1.0).unwrap(), p);
    let r = interpolate_exponents(&p, &q, 0.5).unwrap();
    assert_abs_diff_eq!(r.values()[0], 4.0 / 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(r.values()[1], 4.0 / 3.0, epsilon = 1e-12);
    assert!(interpolate_exponents(&p, &ev(&[2.0]), 0.5).is_err());

    assert_abs_diff_eq!(bennett_carl_r(1.0, 2.0).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(bennett_carl_r(1.5, 1.5).unwrap(), 2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(bennett_carl_r(1.0, 4.0 / 3.0).unwrap(), 4.0 / 3.0, epsilon = 1e-12);
    assert!(bennett_carl_r(2.0, 1.5).is_err());
}

#[test]
fn constant_examples() {
    let d = ConstantSpec::scalar_default(Field::Real);
    let b2 = constant_bounds(2, Field::Real, &d).unwrap();
    assert_abs_diff_eq!(b2.bh_upper, 2f64.sqrt(), epsilon = 1e-15);
    assert_eq!(constant_bounds(1, Field::Real, &d).unwrap().bh_upper, 1.0);
    assert_abs_diff_eq!(b2.bilinear_sharp(4.0 / 3.0, 4.0 / 3.0).unwrap(), 2f64.sqrt(), epsilon = 1e-12);

    let c = ConstantSpec::scalar_default(Field::Complex);
    let b3 = constant_bounds(3, Field::Complex, &c).unwrap();
    assert_abs_diff_eq!(b3.bh_upper, 4.0 / std::f64::consts::PI, epsilon = 1e-15);
    assert!(matches!(
        constant_bounds(2, Field::Complex, &c).unwrap().bilinear_sharp(1.0, 2.0),
        Err(Error::Unsupported(_))
    ));

    let spec = ConstantSpec::new(1.5, 2.0, 2f64.sqrt()).unwrap();
    let b = constant_bounds(3, Field::Real, &spec).unwrap();
    assert_abs_diff_eq!(b.mixed_upper, (2f64.sqrt() * 1.5).powi(2) * 2.0, epsilon = 1e-12);
    assert!(ConstantSpec::new(0.0, 1.0, 1.0).is_err());
}

#[test]
fn parse_exponents() {
    assert_eq!(parse_exponent("inf").unwrap(), INF);
    assert_eq!(parse_exponent("4/3").unwrap(), 4.0 / 3.0);
    assert_eq!(parse_exponent("1.5").unwrap(), 1.5);
    assert!(parse_exponent("x").is_err());
    let v: ExponentVector = "4/3, inf,2".parse().unwrap();
    assert_eq!(v.values(), &[4.0 / 3.0, INF, 2.0]);
    assert!("0.5,2".parse::<ExponentVector>().is_err());
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), Just(INF), 1.0f64..50.0]
}

proptest! {
    #[test]
    fn conjugate_is_an_involution(p in exponent()) {
        let back = conjugate_exponent(conjugate_exponent(p).unwrap()).unwrap();
        if p.is_infinite() || p == 1.0 {
            prop_assert_eq!(back, p);
        } else {
            prop_assert!((back - p).abs() <= 1e-12 * p.max(1.0) * 10.0);
        }
    }

    #[test]
    fn interpolation_stays_between(p in exponent(), q in exponent(), theta in 0.0f64..=1.0) {
        let r = interpolate_exponents(&ev(&[p]), &ev(&[q]), theta).unwrap();
        let (rp, rq, rr) = (recip(p), recip(q), recip(r.values()[0]));
        prop_assert!(rr >= rp.min(rq) - 1e-15 && rr <= rp.max(rq) + 1e-15);
    }

    #[test]
    fn feasibility_is_monotone(m in 1usize..6, base in 1.0f64..2.0, bump in 0.0f64..1.0, i in 0usize..6) {
        let q = ExponentVector::uniform(m, base).unwrap();
        let mut raised = q.values().to_vec();
        let i = i % m;
        raised[i] = (raised[i] + bump).min(2.0);
        let spec = bh(m);
        let before = feasibility(&q, &spec).unwrap();
        let after = feasibility(&ev(&raised), &spec).unwrap();
        prop_assert!(!before.feasible || after.feasible);
        prop_assert!(after.slack >= before.slack - 1e-15);
    }

    #[test]
    fn scalar_feasibility_is_the_bh_condition(m in 1usize..7, q in proptest::collection::vec(1.0f64..=2.0, 1..7)) {
        let m = m.min(q.len());
        let q = ev(&q[..m]);
        let f = feasibility(&q, &bh(m)).unwrap();
        prop_assert!((f.slack - ((m as f64 + 1.0) / 2.0 - q.reciprocal_sum())).abs() <= 1e-12);
        prop_assert_eq!(f.lambda, 1.0);
    }

    #[test]
    fn rho_has_zero_slack(m in 1usize..9, s in 1.0f64..=2.0, t in 0.0f64..=1.0, used in 0.0f64..=1.0) {
        let q_cod = s + t * (2.0 - s);
        let room = 1.0 / s - 1.0 / q_cod;
        let p = ExponentVector::uniform(m, from_recip(used * room / m as f64)).unwrap();
        let spec = ProblemSpec::new(p, s, q_cod, Field::Real).unwrap();
        let rho = rho_exponent(&spec).unwrap();
        let f = feasibility(&ExponentVector::uniform(m, rho).unwrap(), &spec).unwrap();
        prop_assert!(f.slack.abs() <= 1e-12);
        prop_assert!(f.feasible);
    }

    #[test]
    fn hull_reconstructs(m in 1usize..8, lambda in 1.0f64..2.0, w in proptest::collection::vec(0.0f64..1.0, 8)) {
        let w = &w[..m];
        let sum: f64 = w.iter().sum::<f64>() + 1e-9;
        let (a, b) = (0.5, 1.0 / lambda);
        let q = ev(&w.iter().map(|x| 1.0 / (a + (x + 1e-9 / m as f64) / sum * (b - a))).collect::<Vec<_>>());
        let theta = hull_decompose(&q, lambda).unwrap();
        prop_assert!((theta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (i, r) in q.reciprocals().enumerate() {
            let rebuilt: f64 = theta.iter().enumerate().map(|(k, t)| t * if k == i { b } else { a }).sum();
            prop_assert!((rebuilt - r).abs() < 1e-12);
        }
    }
}
