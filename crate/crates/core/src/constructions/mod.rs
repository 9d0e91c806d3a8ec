//! Random and explicit forms: Kahane–Salem–Zygmund sign forms, the 2×2
//! bilinear extremizer, degenerate product forms, and the correspondence
//! between vector-valued `d`-linear and scalar `(d+1)`-linear forms.

mod io;

pub use io::{form_from_file, form_to_string, parse_form, write_form, AnyForm};

use num_complex::Complex64;
use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{conjugate_exponent, ksz_alpha, ExponentVector};
use crate::opnorm::{operator_norm, Method, MultilinearForm, NormEstimate, NormOptions};
use crate::rng::{derive_seed, stream, stream_rng, unit_f64};
use crate::scalar::Scalar;
use crate::tensor::CoefficientTensor;

/// Default number of sign tensors sampled per KSZ form.
pub const DEFAULT_TRIALS: usize = 16;

/// A unimodular form selected for small operator norm.
#[derive(Debug, Clone, PartialEq)]
pub struct KszForm<S> {
    pub form: MultilinearForm<S>,
    /// Exponent `δ` in the bound `‖A‖ ≤ C n^δ`.
    pub predicted_norm_exponent: f64,
    pub trials_used: usize,
    pub seed: u64,
    /// Norm estimate of the selected trial.
    pub norm: NormEstimate<S>,
}

/// Scalars with the two random models used for test forms.
pub trait RandomScalar: Scalar {
    /// A sign (real) or a uniform phase (complex) from one 64-bit word.
    fn from_bits(bits: u64) -> Self;
    /// Standard Gaussian; complex values have `E|z|² = 1`.
    fn gaussian(rng: &mut ChaCha8Rng) -> Self;
}

impl RandomScalar for f64 {
    fn from_bits(bits: u64) -> Self {
        if bits >> 63 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    fn gaussian(rng: &mut ChaCha8Rng) -> Self {
        StandardNormal.sample(rng)
    }
}

impl RandomScalar for Complex64 {
    fn from_bits(bits: u64) -> Self {
        Complex64::from_polar(1.0, unit_f64(bits) * std::f64::consts::TAU)
    }

    fn gaussian(rng: &mut ChaCha8Rng) -> Self {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

fn entry_words(seed: u64, len: usize) -> impl Iterator<Item = u64> {
    let mut rng = stream_rng(seed, stream::FORM_ENTRIES);
    (0..len).map(move |_| rng.next_u64())
}

/// Unimodular tensor whose entry `j` depends only on `(seed, j)`.
pub fn random_unimodular_tensor<S: RandomScalar>(
    shape: Vec<usize>,
    codomain: Option<usize>,
    seed: u64,
) -> Result<CoefficientTensor<S>> {
    let len = shape.iter().product::<usize>() * codomain.unwrap_or(1);
    let e: Vec<S> = entry_words(seed, len).map(S::from_bits).collect();
    match codomain {
        Some(c) => CoefficientTensor::with_codomain(shape, c, e),
        None => CoefficientTensor::new(shape, e),
    }
}

/// Tensor with independent standard Gaussian entries.
pub fn random_gaussian_tensor<S: RandomScalar>(
    shape: Vec<usize>,
    codomain: Option<usize>,
    seed: u64,
) -> Result<CoefficientTensor<S>> {
    let len = shape.iter().product::<usize>() * codomain.unwrap_or(1);
    let mut rng = stream_rng(seed, stream::FORM_ENTRIES);
    let e = (0..len).map(|_| S::gaussian(&mut rng)).collect();
    match codomain {
        Some(c) => CoefficientTensor::with_codomain(shape, c, e),
        None => CoefficientTensor::new(shape, e),
    }
}

fn check_dims(m: usize, n: usize, p: &ExponentVector, trials: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::domain("m and n must be positive"));
    }
    if p.m() != m {
        return Err(Error::domain(format!("{} exponents given for arity {m}", p.m())));
    }
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    Ok(())
}

/// `1/2 + Σ α(p_k)`.
pub fn ksz_exponent(p: &ExponentVector) -> Result<f64> {
    p.values()
        .iter()
        .try_fold(0.5, |acc, &pk| Ok(acc + ksz_alpha(pk)?))
}

fn select<S: RandomScalar>(
    trials: usize,
    seed: u64,
    opts: &NormOptions,
    build: impl Fn(u64) -> Result<MultilinearForm<S>> + Sync,
) -> Result<(MultilinearForm<S>, NormEstimate<S>)> {
    let candidates: Vec<(MultilinearForm<S>, NormEstimate<S>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let form = build(derive_seed(seed, stream::FORM_ENTRIES, t as u64))?;
            let est = operator_norm(
                &form,
                Method::Auto,
                opts,
                derive_seed(seed, stream::TRIAL_SEED, t as u64),
            )?;
            Ok((form, est))
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, c) in candidates.iter().enumerate() {
        if c.1.value < candidates[best].1.value {
            best = i;
        }
    }
    Ok(candidates.into_iter().nth(best).expect("trials ≥ 1"))
}

/// Smallest-norm of `trials` random sign (or phase) `m`-linear forms on `n^m`.
pub fn ksz_random<S: RandomScalar>(
    m: usize,
    n: usize,
    p: &ExponentVector,
    seed: u64,
    trials: usize,
    opts: &NormOptions,
) -> Result<KszForm<S>> {
    check_dims(m, n, p, trials)?;
    let (form, norm) = select(trials, seed, opts, |s| {
        MultilinearForm::new(random_unimodular_tensor(vec![n; m], None, s)?, p.clone())
    })?;
    Ok(KszForm {
        form,
        predicted_norm_exponent: ksz_exponent(p)?,
        trials_used: trials,
        seed,
        norm,
    })
}

/// Vector-valued sign form `Σ ± z_{i_1}⋯z_{i_d} e_{i_{d+1}}` into `ℓ_s^n`.
pub fn ksz_vector<S: RandomScalar>(
    d: usize,
    n: usize,
    p: &ExponentVector,
    s: f64,
    seed: u64,
    trials: usize,
    opts: &NormOptions,
) -> Result<KszForm<S>> {
    check_dims(d, n, p, trials)?;
    if !(s >= 1.0) || s.is_infinite() {
        return Err(Error::domain(format!("codomain exponent s = {s} must lie in [1, inf)")));
    }
    let sstar = conjugate_exponent(s)?;
    let flat_p = p.pushed(sstar)?;
    let (form, norm) = select(trials, seed, opts, |seed| {
        let flat = MultilinearForm::new(random_unimodular_tensor(vec![n; d + 1], None, seed)?, flat_p.clone())?;
        unflatten_scalar_form(&flat)
    })?;
    Ok(KszForm {
        form,
        predicted_norm_exponent: ksz_exponent(p)? + ksz_alpha(sstar)?,
        trials_used: trials,
        seed,
        norm,
    })
}

/// The scalar `(d+1)`-linear form with last exponent `s*`; coefficients unchanged.
pub fn flatten_vector_form<S: Scalar>(form: &MultilinearForm<S>) -> Result<MultilinearForm<S>> {
    if !form.is_vector_valued() {
        return Err(Error::domain("form has no codomain axis to flatten"));
    }
    form.to_scalar()
}

/// Inverse of [`flatten_vector_form`]: the last slot becomes a codomain `ℓ_s`
/// with `s = p_last*`.
pub fn unflatten_scalar_form<S: Scalar>(form: &MultilinearForm<S>) -> Result<MultilinearForm<S>> {
    if form.is_vector_valued() {
        return Err(Error::domain("form is already vector-valued"));
    }
    let m = form.arity();
    if m < 2 {
        return Err(Error::domain("need at least two slots to split off a codomain"));
    }
    let s = conjugate_exponent(form.p().values()[m - 1])?;
    MultilinearForm::vector_valued(
        form.tensor().clone().demote_last_axis()?,
        form.p().prefix(m - 1)?,
        s,
    )
}

/// `A(x, y) = x_1y_1 + x_1y_2 + x_2y_1 − x_2y_2` on `ℓ_∞^2 × ℓ_∞^2`, of norm 2.
pub fn littlewood_extremizer() -> MultilinearForm<f64> {
    MultilinearForm::new(
        CoefficientTensor::new(vec![2, 2], vec![1.0, 1.0, 1.0, -1.0]).expect("valid shape"),
        ExponentVector::infinite(2),
    )
    .expect("arity matches")
}

/// `A(z^{(1)}, …, z^{(m)}) = z^{(m)}_1 F(z^{(1)}, …, z^{(m−1)})` with `F` a KSZ form.
#[derive(Debug, Clone, PartialEq)]
pub struct Degenerate {
    pub form: MultilinearForm<f64>,
    pub inner: KszForm<f64>,
}

pub fn degenerate_counterexample(
    m: usize,
    n: usize,
    p: &ExponentVector,
    seed: u64,
    trials: usize,
    opts: &NormOptions,
) -> Result<Degenerate> {
    if m < 2 {
        return Err(Error::domain("degenerate forms need m ≥ 2"));
    }
    check_dims(m, n, p, trials)?;
    let inner = ksz_random::<f64>(m - 1, n, &p.prefix(m - 1)?, seed, trials, opts)?;
    let f = inner.form.tensor().entries();
    let mut e = vec![0.0; f.len() * n];
    for (j, &v) in f.iter().enumerate() {
        e[j * n] = v;
    }
    let form = MultilinearForm::new(CoefficientTensor::new(vec![n; m], e)?, p.clone())?;
    Ok(Degenerate { form, inner })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opnorm::{evaluate, exact_sign_enumeration, ratio};
    use crate::tensor::{mixed_norm, uniform_norm_tensor, MixedNormSpec};
    use approx::assert_relative_eq;


    fn opts() -> NormOptions {
        NormOptions {
            restarts: 8,
            ..NormOptions::default()
        }
    }

    #[test]
    fn predicted_exponents() {
        let k = ksz_random::<f64>(2, 3, &ExponentVector::infinite(2), 1, 2, &opts()).unwrap();
        assert_eq!(k.predicted_norm_exponent, 1.5);
        let k = ksz_random::<f64>(2, 3, &ExponentVector::uniform(2, 2.0).unwrap(), 1, 2, &opts()).unwrap();
        assert_eq!(k.predicted_norm_exponent, 0.5);
        let v = ksz_vector::<f64>(2, 2, &ExponentVector::infinite(2), 1.0, 1, 2, &opts()).unwrap();
        assert_eq!(v.predicted_norm_exponent, 2.0);
        let v = ksz_vector::<f64>(2, 2, &ExponentVector::infinite(2), 2.0, 1, 2, &opts()).unwrap();
        assert_eq!(v.predicted_norm_exponent, 1.5);
    }

    #[test]
    fn single_entry_has_norm_one() {
        let k = ksz_random::<f64>(3, 1, &ExponentVector::infinite(3), 4, 3, &opts()).unwrap();
        assert_eq!(k.form.tensor().entries().len(), 1);
        assert_eq!(k.norm.value, 1.0);
    }

    #[test]
    fn entries_unimodular_and_reproducible() {
        let a = ksz_random::<f64>(2, 5, &ExponentVector::infinite(2), 99, 4, &opts()).unwrap();
        let b = ksz_random::<f64>(2, 5, &ExponentVector::infinite(2), 99, 4, &opts()).unwrap();
        assert_eq!(a, b);
        assert!(a.form.tensor().entries().iter().all(|e| e.abs() == 1.0));
        let c = ksz_random::<Complex64>(2, 4, &ExponentVector::infinite(2), 99, 2, &opts()).unwrap();
        for e in c.form.tensor().entries() {
            assert!((e.norm() - 1.0).abs() < 1e-15);
        }
        // selected trial has the smallest norm among candidates
        let t0 = MultilinearForm::<f64>::new(
            random_unimodular_tensor(vec![5, 5], None, derive_seed(99, stream::FORM_ENTRIES, 0)).unwrap(),
            ExponentVector::infinite(2),
        )
        .unwrap();
        assert!(a.norm.value <= exact_sign_enumeration(&t0).unwrap().value);
    }

    #[test]
    fn vector_codomain_norms() {
        let n = 3;
        let k = ksz_vector::<f64>(2, n, &ExponentVector::infinite(2), 1.0, 5, 2, &opts()).unwrap();
        assert_eq!(k.form.tensor().codomain(), Some(n));
        for q in [1.0, 1.5, 2.0] {
            for i in 0..n {
                for j in 0..n {
                    let mut x = vec![0.0; n];
                    let mut y = vec![0.0; n];
                    x[i] = 1.0;
                    y[j] = 1.0;
                    let v = evaluate(&k.form, &[x, y]).unwrap().norm(Some(q));
                    assert_relative_eq!(v, (n as f64).powf(1.0 / q), max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn flatten_round_trip_and_isometry() {
        let a = littlewood_extremizer();
        let v = unflatten_scalar_form(&a).unwrap();
        assert_eq!(v.codomain_s(), Some(1.0));
        let back = flatten_vector_form(&v).unwrap();
        assert_eq!(back, a);
        assert!(flatten_vector_form(&a).is_err());

        let t = random_unimodular_tensor::<f64>(vec![4, 4], Some(4), 17).unwrap();
        let f = MultilinearForm::vector_valued(t, ExponentVector::infinite(2), 2.0).unwrap();
        let flat = flatten_vector_form(&f).unwrap();
        let a = exact_sign_enumeration(&f).unwrap().value;
        let b = exact_sign_enumeration(&flat).unwrap().value;
        assert_relative_eq!(a, b, max_relative = 1e-8);
    }

    #[test]
    fn extremizer_values() {
        let a = littlewood_extremizer();
        assert_eq!(exact_sign_enumeration(&a).unwrap().value, 2.0);
        let (p, q) = (1.25, 1.75);
        let spec = MixedNormSpec::new(ExponentVector::new(vec![p, q]).unwrap());
        assert_relative_eq!(mixed_norm(a.tensor(), &spec).unwrap(), 2f64.powf(1.0 / p + 1.0 / q), max_relative = 1e-14);
        let n = exact_sign_enumeration(&a).unwrap();
        assert_relative_eq!(ratio(&a, &spec, &n).unwrap(), 2f64.powf(1.0 / p + 1.0 / q - 1.0), max_relative = 1e-14);
    }

    #[test]
    fn degenerate_structure() {
        let n = 4;
        let p = ExponentVector::infinite(3);
        let d = degenerate_counterexample(3, n, &p, 8, 2, &opts()).unwrap();
        let f = d.inner.form.tensor();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let want = if k == 0 { f.get(&[i, j]).unwrap() } else { 0.0 };
                    assert_eq!(d.form.tensor().get(&[i, j, k]).unwrap(), want);
                }
            }
        }
        let lhs = uniform_norm_tensor(d.form.tensor(), 2, 1.0, None).unwrap();
        assert_relative_eq!(lhs, (n as f64).powf(1.0), max_relative = 1e-12);
        let a = exact_sign_enumeration(&d.form).unwrap().value;
        let b = exact_sign_enumeration(&d.inner.form).unwrap().value;
        assert_eq!(a, b);
        assert!(degenerate_counterexample(1, n, &ExponentVector::infinite(1), 8, 2, &opts()).is_err());
    }

    #[test]
    fn gaussian_reproducible() {
        let a = random_gaussian_tensor::<f64>(vec![3, 3], None, 5).unwrap();
        assert_eq!(a, random_gaussian_tensor(vec![3, 3], None, 5).unwrap());
        assert_ne!(a, random_gaussian_tensor(vec![3, 3], None, 6).unwrap());
        let z = random_gaussian_tensor::<Complex64>(vec![2], Some(2), 5).unwrap();
        assert_eq!(z.entries().len(), 4);
    }
}
