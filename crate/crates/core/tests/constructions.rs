use approx::assert_relative_eq;
use mixnorm::constructions::*;
use mixnorm::exponents::ExponentVector;
use mixnorm::opnorm::{exact_sign_enumeration, operator_norm, Evaluation, Method, MultilinearForm, NormKind, NormOptions};
use mixnorm::tensor::{mixed_norm, uniform_norm_tensor, MixedNormSpec};
use mixnorm::Scalar;
use num_complex::Complex64;

const INF: f64 = f64::INFINITY;

fn ev(v: &[f64]) -> ExponentVector {
    ExponentVector::new(v.to_vec()).unwrap()
}

fn quick() -> NormOptions {
    NormOptions {
        restarts: 8,
        ..NormOptions::default()
    }
}

#[test]
fn ksz_predicted_exponents() {
    let a = ksz_random::<f64>(2, 4, &ev(&[INF, INF]), 1, 3, &quick()).unwrap();
    assert_relative_eq!(a.predicted_norm_exponent, 1.5, max_relative = 1e-15);
    let b = ksz_random::<f64>(2, 4, &ev(&[2.0, 2.0]), 1, 3, &quick()).unwrap();
    assert_relative_eq!(b.predicted_norm_exponent, 0.5, max_relative = 1e-15);
    assert_eq!(a.trials_used, 3);
    assert_eq!(a.seed, 1);

    for seed in 0..4 {
        let one = ksz_random::<f64>(3, 1, &ev(&[INF, 2.0, 1.0]), seed, 2, &quick()).unwrap();
        assert_eq!(one.form.tensor().entries()[0].abs(), 1.0);
        assert_relative_eq!(one.norm.value, 1.0, max_relative = 1e-12);
    }
}

#[test]
fn ksz_entries_are_unimodular_and_reproducible() {
    let a = ksz_random::<f64>(2, 6, &ev(&[INF, INF]), 42, 4, &quick()).unwrap();
    let b = ksz_random::<f64>(2, 6, &ev(&[INF, INF]), 42, 4, &quick()).unwrap();
    assert_eq!(a, b);
    assert!(a.form.tensor().entries().iter().all(|x| x.abs() == 1.0));
    assert_eq!(a.norm.kind, NormKind::Exact);

    let c = ksz_random::<Complex64>(2, 5, &ev(&[2.0, 2.0]), 42, 2, &quick()).unwrap();
    assert!(c.form.tensor().entries().iter().all(|z| (z.modulus() - 1.0).abs() < 1e-15));

    // The selected trial is the smallest-norm one.
    let one_trial: Vec<f64> = (0..4)
        .map(|t| {
            let seed = mixnorm::rng::derive_seed(42, mixnorm::rng::stream::FORM_ENTRIES, t);
            let f = MultilinearForm::new(random_unimodular_tensor::<f64>(vec![6, 6], None, seed).unwrap(), ev(&[INF, INF])).unwrap();
            exact_sign_enumeration(&f).unwrap().value
        })
        .collect();
    assert_eq!(a.norm.value, one_trial.iter().cloned().fold(INF, f64::min));
}

#[test]
fn ksz_norm_tracks_the_predicted_power() {
    for n in [4usize, 8, 16, 32] {
        let k = ksz_random::<f64>(2, n, &ev(&[INF, INF]), 9, 4, &quick()).unwrap();
        let scaled = k.norm.value / (n as f64).powf(1.5);
        assert!(scaled <= 3.0 && scaled >= 0.5, "n = {n}: {scaled}");
    }
}

#[test]
fn ksz_vector_forms() {
    let a = ksz_vector::<f64>(2, 3, &ev(&[INF, INF]), 1.0, 0, 2, &quick()).unwrap();
    assert_relative_eq!(a.predicted_norm_exponent, 2.0, max_relative = 1e-15);
    let b = ksz_vector::<f64>(2, 3, &ev(&[INF, INF]), 2.0, 0, 2, &quick()).unwrap();
    assert_relative_eq!(b.predicted_norm_exponent, 1.5, max_relative = 1e-15);
    assert!(b.form.is_vector_valued());
    assert_eq!(b.form.codomain_s(), Some(2.0));

    // ||A(e_i, e_j)||_q = n^{1/q} for every basis pair.
    let n = 3;
    for q in [1.0, 1.5, 2.0] {
        for i in 0..n {
            for j in 0..n {
                let mut x = vec![0.0; n];
                let mut y = vec![0.0; n];
                x[i] = 1.0;
                y[j] = 1.0;
                let v = mixnorm::opnorm::evaluate(&b.form, &[x, y]).unwrap();
                assert!(matches!(v, Evaluation::Vector(_)));
                assert_relative_eq!(v.norm(Some(q)), (n as f64).powf(1.0 / q), max_relative = 1e-14);
            }
        }
    }
    assert!(ksz_vector::<f64>(2, 3, &ev(&[INF, INF]), INF, 0, 2, &quick()).is_err());
}

#[test]
fn flattening_round_trips_and_preserves_norms() {
    let k = ksz_vector::<f64>(2, 4, &ev(&[INF, INF]), 2.0, 3, 1, &quick()).unwrap();
    let flat = flatten_vector_form(&k.form).unwrap();
    assert_eq!(flat.arity(), 3);
    assert_eq!(flat.p().values(), &[INF, INF, 2.0]);
    assert_eq!(flat.tensor().entries(), k.form.tensor().entries());
    let back = unflatten_scalar_form(&flat).unwrap();
    assert_eq!(back, k.form);

    let a = operator_norm(&k.form, Method::Auto, &NormOptions::default(), 0).unwrap();
    let b = operator_norm(&flat, Method::Auto, &NormOptions::default(), 0).unwrap();
    assert_eq!(a.kind, NormKind::Exact);
    assert_relative_eq!(a.value, b.value, max_relative = 1e-8);

    // The extremizer read as a 1-linear map into l_1^2 flattens back to itself.
    let ext = littlewood_extremizer();
    let vector = unflatten_scalar_form(&ext).unwrap();
    assert_eq!(vector.codomain_s(), Some(1.0));
    assert_eq!(flatten_vector_form(&vector).unwrap(), ext);
    assert!(flatten_vector_form(&ext).is_err());
}

#[test]
fn extremizer_facts() {
    let ext = littlewood_extremizer();
    assert_eq!(exact_sign_enumeration(&ext).unwrap().value, 2.0);
    for (p, q) in [(1.0, 2.0), (4.0 / 3.0, 4.0 / 3.0), (1.25, 1.5)] {
        let v = mixed_norm(ext.tensor(), &MixedNormSpec::new(ev(&[p, q]))).unwrap();
        assert_relative_eq!(v, 2f64.powf(1.0 / p + 1.0 / q), max_relative = 1e-14);
    }
}

#[test]
fn degenerate_forms() {
    for (m, p) in [(2usize, vec![1.0, INF]), (3, vec![INF, INF, INF]), (3, vec![2.0, 2.0, INF])] {
        let n = 3;
        let d = degenerate_counterexample(m, n, &ev(&p), 5, 2, &quick()).unwrap();
        let f = d.inner.form.tensor().entries();
        let a = d.form.tensor().entries();
        for (i, chunk) in a.chunks(n).enumerate() {
            assert_eq!(chunk[0], f[i]);
            assert!(chunk[1..].iter().all(|&x| x == 0.0));
        }
        let lhs = uniform_norm_tensor(d.form.tensor(), m - 1, 1.0, None).unwrap();
        assert_relative_eq!(lhs, (n as f64).powf((m as f64 - 1.0) / 2.0), max_relative = 1e-12);
    }

    let d = degenerate_counterexample(3, 3, &ExponentVector::infinite(3), 8, 3, &quick()).unwrap();
    let a = exact_sign_enumeration(&d.form).unwrap().value;
    let f = exact_sign_enumeration(&d.inner.form).unwrap().value;
    assert_eq!(a, f);
    assert!(degenerate_counterexample(1, 3, &ev(&[INF]), 0, 1, &quick()).is_err());
}

#[test]
fn form_files_round_trip() {
    let k = ksz_random::<f64>(2, 3, &ev(&[INF, 2.0]), 4, 2, &quick()).unwrap();
    let text = form_to_string(&k.form, Some(4));
    assert!(text.contains("p: inf,2"));
    match parse_form(&text).unwrap() {
        AnyForm::Real(f) => assert_eq!(f, k.form),
        AnyForm::Complex(_) => panic!("read back as complex"),
    }
    let v = ksz_vector::<Complex64>(1, 2, &ev(&[INF]), 1.5, 1, 1, &quick()).unwrap();
    match parse_form(&form_to_string(&v.form, None)).unwrap() {
        AnyForm::Complex(f) => assert_eq!(f, v.form),
        AnyForm::Real(_) => panic!("read back as real"),
    }
    assert!(parse_form("shape: 2\ncodomain_s: 2\n1\n1\n").is_err());
}
