use serde::{Deserialize, Serialize};

use super::CoefficientTensor;
use crate::error::{Error, Result};
use crate::exponents::ExponentVector;
use crate::scalar::Scalar;

/// Exponents and nesting order of a mixed norm.
///
/// `sigma` is 0-based: the outermost sum runs over axis `sigma[0]` with
/// exponent `q[0]`, the innermost over axis `sigma[m-1]` with `q[m-1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedNormSpec {
    pub q: ExponentVector,
    pub sigma: Vec<usize>,
    pub codomain_q: Option<f64>,
}

impl MixedNormSpec {
    /// Identity nesting, no codomain norm.
    pub fn new(q: ExponentVector) -> Self {
        let sigma = (0..q.m()).collect();
        Self {
            q,
            sigma,
            codomain_q: None,
        }
    }

    pub fn with_sigma(mut self, sigma: Vec<usize>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_codomain(mut self, q: f64) -> Self {
        self.codomain_q = Some(q);
        self
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.q.m() != m {
            return Err(Error::domain(format!(
                "mixed norm has {} exponents, tensor arity is {m}",
                self.q.m()
            )));
        }
        check_permutation(&self.sigma, m)?;
        if let Some(&bad) = self.q.values().iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("mixed-norm exponent {bad} must be finite")));
        }
        if let Some(c) = self.codomain_q {
            check_exponent(c)?;
        }
        Ok(())
    }
}

fn check_exponent(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("exponent {q} must be finite and >= 1")));
    }
    Ok(())
}

fn check_permutation(sigma: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if sigma.len() != m {
        return Err(Error::domain(format!("sigma has {} entries, need {m}", sigma.len())));
    }
    for &s in sigma {
        if s >= m || std::mem::replace(&mut seen[s], true) {
            return Err(Error::domain(format!("sigma {sigma:?} is not a permutation of 0..{m}")));
        }
    }
    Ok(())
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn power(x: f64, q: f64) -> f64 {
    if q == 1.0 {
        x
    } else if q == 2.0 {
        x * x
    } else if x == 0.0 {
        0.0
    } else {
        (q * x.ln()).exp()
    }
}

/// `(Σ x_i^q)^{1/q}` for nonnegative `x`, scaled by the maximum to avoid
/// overflow.
pub(crate) fn lp_of_nonneg(values: &[f64], q: f64) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return max;
    }
    if q == 1.0 {
        return compensated_sum(values.iter().copied());
    }
    let s = compensated_sum(values.iter().map(|&v| power(v / max, q)));
    let root = if q == 2.0 { s.sqrt() } else { power(s, 1.0 / q) };
    max * root
}

fn reduce_innermost(data: &[f64], inner: usize, q: f64) -> Vec<f64> {
    data.chunks(inner).map(|c| lp_of_nonneg(c, q)).collect()
}

/// Reorders axes so that new axis `j` is old axis `order[j]`.
fn transpose(data: &[f64], shape: &[usize], order: &[usize]) -> Vec<f64> {
    if order.iter().enumerate().all(|(j, &o)| j == o) {
        return data.to_vec();
    }
    let m = shape.len();
    let mut strides = vec![1usize; m];
    for a in (0..m.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * shape[a + 1];
    }
    let new_shape: Vec<usize> = order.iter().map(|&o| shape[o]).collect();
    let new_strides: Vec<usize> = order.iter().map(|&o| strides[o]).collect();
    let mut out = Vec::with_capacity(data.len());
    let mut idx = vec![0usize; m];
    let mut src = 0usize;
    for _ in 0..data.len() {
        out.push(data[src]);
        for a in (0..m).rev() {
            idx[a] += 1;
            src += new_strides[a];
            if idx[a] < new_shape[a] {
                break;
            }
            src -= new_strides[a] * new_shape[a];
            idx[a] = 0;
        }
    }
    out
}

/// Moduli after the codomain reduction, laid out over the m domain axes.
fn domain_moduli<S: Scalar>(t: &CoefficientTensor<S>, codomain_q: Option<f64>) -> Result<Vec<f64>> {
    let moduli = t.moduli();
    match t.codomain() {
        None => Ok(moduli),
        Some(len) => {
            let q = codomain_q.ok_or_else(|| {
                Error::Spec("tensor is vector-valued but no codomain exponent was given".into())
            })?;
            check_exponent(q)?;
            Ok(reduce_innermost(&moduli, len, q))
        }
    }
}

/// Nested norm `ℓ_{q_1}(ℓ_{q_2}(…ℓ_{q_m}))` of the coefficients, nested
/// along `spec.sigma`.
///
/// Vector-valued tensors are first reduced along the codomain axis with
/// `‖·‖_{codomain_q}`.
pub fn mixed_norm<S: Scalar>(t: &CoefficientTensor<S>, spec: &MixedNormSpec) -> Result<f64> {
    spec.validate(t.arity())?;
    let moduli = domain_moduli(t, spec.codomain_q)?;
    let mut data = transpose(&moduli, t.shape(), &spec.sigma);
    for (level, &axis) in spec.sigma.iter().enumerate().rev() {
        let q = spec.q.values()[level];
        data = reduce_innermost(&data, t.shape()[axis], q);
    }
    debug_assert_eq!(data.len(), 1);
    Ok(data[0])
}

/// `(Σ_{i_k} (Σ_{î_k} |x_i|²)^{λ/2})^{1/λ}`: exponent `λ` on axis `k`
/// (0-based) outermost, `2` on every other axis.
pub fn uniform_norm_tensor<S: Scalar>(
    t: &CoefficientTensor<S>,
    k: usize,
    lambda: f64,
    codomain_q: Option<f64>,
) -> Result<f64> {
    let m = t.arity();
    if k >= m {
        return Err(Error::domain(format!("axis {k} out of range for arity {m}")));
    }
    let mut q = vec![2.0; m];
    q[0] = lambda;
    let sigma = std::iter::once(k).chain((0..m).filter(|&a| a != k)).collect();
    let spec = MixedNormSpec {
        q: ExponentVector::new(q)?,
        sigma,
        codomain_q,
    };
    mixed_norm(t, &spec)
}

/// `‖T‖_{ℓ_b(ℓ_a)} − ‖T‖_{ℓ_a(ℓ_b)}` where exponent `b` belongs to
/// `axes.0` and `a` to `axes.1`.
///
/// The first term nests `axes.0` outside, the second nests it inside. All
/// other axes (codomain included) are first collapsed with `ℓ_2`. For
/// `a ≤ b` Minkowski's inequality makes the result nonpositive.
pub fn minkowski_exchange_gap<S: Scalar>(
    t: &CoefficientTensor<S>,
    a: f64,
    b: f64,
    axes: (usize, usize),
) -> Result<f64> {
    check_exponent(a)?;
    check_exponent(b)?;
    if a > b {
        return Err(Error::domain(format!(
            "exchange needs a <= b, got a = {a}, b = {b}"
        )));
    }
    let full = t.full_shape();
    let (i, j) = axes;
    if i == j || i >= t.arity() || j >= t.arity() {
        return Err(Error::domain(format!("bad axis pair {axes:?} for arity {}", t.arity())));
    }
    let order: Vec<usize> = [i, j]
        .into_iter()
        .chain((0..full.len()).filter(|&x| x != i && x != j))
        .collect();
    let data = transpose(&t.moduli(), &full, &order);
    let (ni, nj) = (full[i], full[j]);
    let rest = data.len() / (ni * nj);
    let matrix = reduce_innermost(&data, rest, 2.0);

    let rows: Vec<f64> = matrix.chunks(nj).map(|r| lp_of_nonneg(r, a)).collect();
    let outer_b = lp_of_nonneg(&rows, b);

    let cols: Vec<f64> = (0..nj)
        .map(|c| {
            let col: Vec<f64> = (0..ni).map(|r| matrix[r * nj + c]).collect();
            lp_of_nonneg(&col, b)
        })
        .collect();
    let outer_a = lp_of_nonneg(&cols, a);
    Ok(outer_b - outer_a)
}
