//! Alternating maximization: each slot in turn is replaced by the closed-form
//! maximizer of the linear functional left after contracting the others.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use super::dual::{dual_maximizer, dual_norm};
use super::{contract_except, evaluate, MultilinearForm, NormEstimate, NormKind};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream, stream_rng};
use crate::scalar::Scalar;
use crate::tensor::norms_lp;

/// Uniform point on the unit sphere of `ℓ_p^n` (cone measure).
pub(crate) fn random_sphere_point<S: Scalar>(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<S> {
    let mut v: Vec<S> = if p.is_infinite() {
        (0..n).map(|_| random_scalar::<S>(rng.random::<f64>(), rng)).collect()
    } else {
        // |x_i|^p ~ Gamma(d/p) with d = 1 (real) or 2 (complex)
        let d = if S::IS_COMPLEX { 2.0 } else { 1.0 };
        let gamma = Gamma::new(d / p, 1.0).expect("positive shape");
        (0..n)
            .map(|_| {
                let r = gamma.sample(rng).powf(1.0 / p);
                random_scalar::<S>(r, rng)
            })
            .collect()
    };
    let moduli: Vec<f64> = v.iter().map(|x| x.modulus()).collect();
    let norm = norms_lp(&moduli, p);
    if norm == 0.0 {
        v[0] = S::one();
        return v;
    }
    for x in &mut v {
        *x = x.scale(1.0 / norm);
    }
    v
}

fn random_scalar<S: Scalar>(r: f64, rng: &mut ChaCha8Rng) -> S {
    if S::IS_COMPLEX {
        let phi = rng.random::<f64>() * std::f64::consts::TAU;
        S::from_parts(r * phi.cos(), r * phi.sin())
    } else if rng.random::<bool>() {
        S::from_real(r)
    } else {
        S::from_real(-r)
    }
}

pub(crate) struct Run<S> {
    pub value: f64,
    pub xs: Vec<Vec<S>>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after the start and after every sweep.
    #[cfg_attr(not(test), allow(dead_code))]
    pub trace: Vec<f64>,
}

/// Ascent on a scalar-valued form from the given start.
pub(crate) fn ascend<S: Scalar>(
    form: &MultilinearForm<S>,
    mut xs: Vec<Vec<S>>,
    max_iters: usize,
    tol: f64,
) -> Result<Run<S>> {
    let t = form.tensor();
    let shape = t.shape();
    let p = form.p().values();
    let m = shape.len();
    let mut value = evaluate(form, &xs)?.norm(None);
    let mut trace = vec![value];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        let mut sweep_value = value;
        for k in 0..m {
            let views: Vec<&[S]> = xs.iter().map(|v| v.as_slice()).collect();
            let g = contract_except(t.entries(), shape, &views, Some(k));
            match dual_maximizer(&g, p[k]) {
                Ok(x) => {
                    let v = dual_norm(&g, p[k]);
                    // keep the old point unless the step does not lose ground
                    if v >= sweep_value {
                        xs[k] = x;
                        sweep_value = v;
                    }
                }
                Err(Error::DegenerateGradient) => {}
                Err(e) => return Err(e),
            }
        }
        let improvement = sweep_value - value;
        value = sweep_value;
        trace.push(value);
        if improvement <= tol * value {
            converged = true;
            break;
        }
    }
    let value = evaluate(form, &xs)?.norm(None);
    Ok(Run {
        value,
        xs,
        iterations,
        converged,
        trace,
    })
}

/// Best of `restarts` ascents from random sphere points. Always a lower bound.
pub fn alternating_ascent<S: Scalar>(
    form: &MultilinearForm<S>,
    restarts: usize,
    max_iters: usize,
    tol: f64,
    seed: u64,
) -> Result<NormEstimate<S>> {
    if restarts == 0 {
        return Err(Error::domain("restarts must be at least 1"));
    }
    if !(tol >= 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be nonnegative")));
    }
    let flat = form.to_scalar()?;
    let shape = flat.tensor().shape().to_vec();
    let p = flat.p().values().to_vec();
    let runs: Vec<Run<S>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(derive_seed(seed, stream::ASCENT_START, r as u64), 0);
            let xs = shape
                .iter()
                .zip(&p)
                .map(|(&n, &pk)| random_sphere_point::<S>(n, pk, &mut rng))
                .collect();
            ascend(&flat, xs, max_iters, tol)
        })
        .collect::<Result<_>>()?;
    let converged = runs.iter().all(|r| r.converged);
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let run = runs.into_iter().nth(best).expect("at least one restart");
    let mut witness = run.xs;
    let value = if form.is_vector_valued() {
        witness.pop();
        evaluate(form, &witness)?.norm(form.codomain_s())
    } else {
        run.value
    };
    Ok(NormEstimate {
        value,
        kind: NormKind::LowerBound,
        witness,
        iterations: run.iterations,
        restarts_used: restarts,
        converged,
    })
}
