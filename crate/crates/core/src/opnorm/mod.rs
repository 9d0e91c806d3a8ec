//! Operator norms of multilinear forms over products of `ℓ_p` balls.
//!
//! `‖A‖ = sup |A(x^{(1)}, …, x^{(m)})|` over `‖x^{(k)}‖_{p_k} ≤ 1` (or
//! `sup ‖A(x)‖_s` for forms into `ℓ_s`). [`exact_sign_enumeration`] visits the
//! extreme points of the leading balls and is exact; [`alternating_ascent`]
//! gives a lower bound for every other configuration.
//!
//! Vector-valued forms are handled through the isometry with scalar forms
//! carrying one more slot of exponent `s*` (see [`MultilinearForm::to_scalar`]).

mod ascent;
mod dual;
mod oracle;

pub use ascent::alternating_ascent;
pub use dual::{dual_maximizer, dual_norm};
pub use oracle::{exact_norm_with_budget, exact_sign_enumeration, oracle_cost, DEFAULT_BUDGET};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{conjugate_exponent, ExponentVector};
use crate::scalar::Scalar;
use crate::tensor::{mixed_norm, CoefficientTensor, MixedNormSpec};

/// A coefficient tensor together with its domain exponents and, for
/// vector-valued forms, the codomain exponent `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForm<S> {
    tensor: CoefficientTensor<S>,
    p: ExponentVector,
    codomain_s: Option<f64>,
}

impl<S: Scalar> MultilinearForm<S> {
    pub fn new(tensor: CoefficientTensor<S>, p: ExponentVector) -> Result<Self> {
        Self::build(tensor, p, None)
    }

    pub fn vector_valued(tensor: CoefficientTensor<S>, p: ExponentVector, s: f64) -> Result<Self> {
        Self::build(tensor, p, Some(s))
    }

    fn build(tensor: CoefficientTensor<S>, p: ExponentVector, codomain_s: Option<f64>) -> Result<Self> {
        if p.m() != tensor.arity() {
            return Err(Error::domain(format!(
                "form has arity {} but {} domain exponents",
                tensor.arity(),
                p.m()
            )));
        }
        match (tensor.codomain(), codomain_s) {
            (Some(_), None) => {
                return Err(Error::domain("vector-valued tensor needs a codomain exponent s"))
            }
            (None, Some(_)) => {
                return Err(Error::domain("codomain exponent given for a scalar-valued tensor"))
            }
            (_, Some(s)) if s.is_nan() || s < 1.0 => {
                return Err(Error::domain(format!("codomain exponent s = {s} below 1")))
            }
            _ => {}
        }
        Ok(Self {
            tensor,
            p,
            codomain_s,
        })
    }

    pub fn tensor(&self) -> &CoefficientTensor<S> {
        &self.tensor
    }

    pub fn p(&self) -> &ExponentVector {
        &self.p
    }

    pub fn codomain_s(&self) -> Option<f64> {
        self.codomain_s
    }

    pub fn arity(&self) -> usize {
        self.tensor.arity()
    }

    pub fn is_vector_valued(&self) -> bool {
        self.codomain_s.is_some()
    }

    /// The scalar form with the codomain turned into a last slot of
    /// exponent `s*`; scalar forms are returned unchanged.
    pub fn to_scalar(&self) -> Result<MultilinearForm<S>> {
        match self.codomain_s {
            None => Ok(self.clone()),
            Some(s) => {
                let p = self.p.pushed(conjugate_exponent(s)?)?;
                MultilinearForm::new(self.tensor.clone().promote_codomain(), p)
            }
        }
    }

    pub fn scaled(&self, c: S) -> Self {
        Self {
            tensor: self.tensor.scaled(c),
            p: self.p.clone(),
            codomain_s: self.codomain_s,
        }
    }
}

/// Result of applying a form to arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation<S> {
    Scalar(S),
    Vector(Vec<S>),
}

impl<S: Scalar> Evaluation<S> {
    /// Modulus of a scalar value, `ℓ_s` norm of a vector value.
    pub fn norm(&self, s: Option<f64>) -> f64 {
        match self {
            Evaluation::Scalar(v) => v.modulus(),
            Evaluation::Vector(v) => {
                let moduli: Vec<f64> = v.iter().map(|x| x.modulus()).collect();
                crate::tensor::norms_lp(&moduli, s.unwrap_or(2.0))
            }
        }
    }
}

/// Contracts every axis except `keep` against `xs` (indexed by axis).
///
/// Returns a vector of length `shape[keep]`, or of length 1 when `keep` is
/// `None`.
pub(crate) fn contract_except<S: Scalar>(
    data: &[S],
    shape: &[usize],
    xs: &[&[S]],
    keep: Option<usize>,
) -> Vec<S> {
    let m = shape.len();
    let stop = keep.map_or(0, |k| k + 1);
    let mut cur: Vec<S> = Vec::new();
    let mut first = true;
    for axis in (stop..m).rev() {
        let x = xs[axis];
        let src: &[S] = if first { data } else { &cur };
        let next: Vec<S> = src
            .chunks(shape[axis])
            .map(|chunk| {
                let mut acc = S::zero();
                for (&c, &xi) in chunk.iter().zip(x) {
                    acc += c * xi;
                }
                acc
            })
            .collect();
        cur = next;
        first = false;
    }
    if first {
        cur = data.to_vec();
    }
    if let Some(k) = keep {
        for (axis, x) in xs.iter().enumerate().take(k) {
            let n = shape[axis];
            let rest = cur.len() / n;
            let mut next = vec![S::zero(); rest];
            for (i, &xi) in x.iter().enumerate() {
                for (acc, &c) in next.iter_mut().zip(&cur[i * rest..(i + 1) * rest]) {
                    *acc += c * xi;
                }
            }
            cur = next;
        }
    }
    cur
}

/// Full contraction `Σ_i T_i x^{(1)}_{i_1} ⋯ x^{(m)}_{i_m}`.
pub fn evaluate<S: Scalar>(form: &MultilinearForm<S>, args: &[Vec<S>]) -> Result<Evaluation<S>> {
    let t = form.tensor();
    if args.len() != t.arity() {
        return Err(Error::domain(format!(
            "form takes {} arguments, got {}",
            t.arity(),
            args.len()
        )));
    }
    for (k, (a, &n)) in args.iter().zip(t.shape()).enumerate() {
        if a.len() != n {
            return Err(Error::domain(format!(
                "argument {} has length {}, expected {n}",
                k + 1,
                a.len()
            )));
        }
    }
    let views: Vec<&[S]> = args.iter().map(|a| a.as_slice()).collect();
    match t.codomain() {
        None => Ok(Evaluation::Scalar(
            contract_except(t.entries(), t.shape(), &views, None)[0],
        )),
        Some(_) => Ok(Evaluation::Vector(contract_except(
            t.entries(),
            &t.full_shape(),
            &views,
            Some(t.arity()),
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Exact,
    LowerBound,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::Exact => "exact",
            NormKind::LowerBound => "lower_bound",
        })
    }
}

/// An operator-norm value with the arguments that attain it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate<S> {
    pub value: f64,
    pub kind: NormKind,
    /// One unit-ball vector per domain slot.
    pub witness: Vec<Vec<S>>,
    /// Sweeps used by the winning restart (0 for enumeration).
    pub iterations: usize,
    pub restarts_used: usize,
    /// False when some restart hit `max_iters` before the tolerance.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub budget: u128,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 200,
            tol: 1e-10,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Enumeration when applicable and within budget, ascent otherwise.
    #[default]
    Auto,
    Oracle,
    Ascent,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "oracle" => Ok(Method::Oracle),
            "ascent" => Ok(Method::Ascent),
            other => Err(Error::domain(format!("unknown method '{other}'"))),
        }
    }
}

/// Whether exact enumeration applies to `form` within `budget`.
pub fn oracle_applies<S: Scalar>(form: &MultilinearForm<S>, budget: u128) -> bool {
    matches!(oracle_cost(form), Ok(cost) if cost <= budget)
}

pub fn operator_norm<S: Scalar>(
    form: &MultilinearForm<S>,
    method: Method,
    opts: &NormOptions,
    seed: u64,
) -> Result<NormEstimate<S>> {
    match method {
        Method::Oracle => exact_norm_with_budget(form, opts.budget),
        Method::Ascent => alternating_ascent(form, opts.restarts, opts.max_iters, opts.tol, seed),
        Method::Auto => {
            if oracle_applies(form, opts.budget) {
                exact_norm_with_budget(form, opts.budget)
            } else {
                alternating_ascent(form, opts.restarts, opts.max_iters, opts.tol, seed)
            }
        }
    }
}

/// `mixed_norm(A) / ‖A‖`. With a lower-bound norm this over-estimates the
/// true ratio.
pub fn ratio<S: Scalar>(
    form: &MultilinearForm<S>,
    spec: &MixedNormSpec,
    norm: &NormEstimate<S>,
) -> Result<f64> {
    if !(norm.value > 0.0) {
        return Err(Error::DegenerateForm);
    }
    Ok(mixed_norm(form.tensor(), spec)? / norm.value)
}
