//! Dense coefficient tensors and nested mixed norms.

mod norms;
pub mod text;

pub use norms::{minkowski_exchange_gap, mixed_norm, uniform_norm_tensor, MixedNormSpec};
pub use text::{parse_tensor_file, read_tensor, tensor_to_string, write_tensor, AnyTensor, TensorFile};
pub(crate) use norms::lp_of_nonneg as norms_lp;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coefficients `A(e_{i_1}, …, e_{i_m})` in row-major order, optionally
/// followed by a trailing codomain axis for vector-valued forms.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor<S> {
    shape: Vec<usize>,
    codomain: Option<usize>,
    entries: Vec<S>,
}

impl<S: Scalar> CoefficientTensor<S> {
    pub fn new(shape: Vec<usize>, entries: Vec<S>) -> Result<Self> {
        Self::build(shape, None, entries)
    }

    pub fn with_codomain(shape: Vec<usize>, codomain: usize, entries: Vec<S>) -> Result<Self> {
        Self::build(shape, Some(codomain), entries)
    }

    fn build(shape: Vec<usize>, codomain: Option<usize>, entries: Vec<S>) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::domain("tensor arity must be at least 1"));
        }
        if shape.iter().chain(codomain.iter()).any(|&n| n == 0) {
            return Err(Error::domain("every axis length must be positive"));
        }
        let expected: usize = shape.iter().product::<usize>() * codomain.unwrap_or(1);
        if entries.len() != expected {
            return Err(Error::domain(format!(
                "expected {expected} entries for shape {shape:?}{}, got {}",
                codomain.map(|c| format!(" codomain {c}")).unwrap_or_default(),
                entries.len()
            )));
        }
        if let Some(i) = entries.iter().position(|e| !e.is_finite()) {
            return Err(Error::domain(format!("entry #{i} is not finite")));
        }
        Ok(Self {
            shape,
            codomain,
            entries,
        })
    }

    /// Builds a tensor by evaluating `f` on every multi-index (codomain index last).
    pub fn from_fn(
        shape: Vec<usize>,
        codomain: Option<usize>,
        mut f: impl FnMut(&[usize]) -> S,
    ) -> Result<Self> {
        let mut full = shape.clone();
        full.extend(codomain);
        let total: usize = full.iter().product();
        let mut idx = vec![0usize; full.len()];
        let mut entries = Vec::with_capacity(total);
        for _ in 0..total {
            entries.push(f(&idx));
            for axis in (0..full.len()).rev() {
                idx[axis] += 1;
                if idx[axis] < full[axis] {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Self::build(shape, codomain, entries)
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let total = shape.iter().product();
        Self::new(shape, vec![S::zero(); total])
    }

    /// Arity `m` (codomain axis excluded).
    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn codomain(&self) -> Option<usize> {
        self.codomain
    }

    /// Shape including the codomain axis, if any.
    pub fn full_shape(&self) -> Vec<usize> {
        let mut s = self.shape.clone();
        s.extend(self.codomain);
        s
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    fn flat_index(&self, index: &[usize]) -> Result<usize> {
        let full = self.full_shape();
        if index.len() != full.len() {
            return Err(Error::domain(format!(
                "index has {} components, tensor has {} axes",
                index.len(),
                full.len()
            )));
        }
        let mut flat = 0;
        for (&i, &n) in index.iter().zip(&full) {
            if i >= n {
                return Err(Error::domain(format!("index {index:?} out of bounds {full:?}")));
            }
            flat = flat * n + i;
        }
        Ok(flat)
    }

    pub fn get(&self, index: &[usize]) -> Result<S> {
        Ok(self.entries[self.flat_index(index)?])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.modulus() == 0.0)
    }

    pub fn scaled(&self, c: S) -> Self {
        Self {
            shape: self.shape.clone(),
            codomain: self.codomain,
            entries: self.entries.iter().map(|&e| e * c).collect(),
        }
    }

    /// Reinterprets the codomain axis as an ordinary last axis.
    pub fn promote_codomain(self) -> Self {
        let mut shape = self.shape;
        shape.extend(self.codomain);
        Self {
            shape,
            codomain: None,
            entries: self.entries,
        }
    }

    /// Reinterprets the last axis as a codomain axis.
    pub fn demote_last_axis(self) -> Result<Self> {
        if self.codomain.is_some() {
            return Err(Error::domain("tensor already has a codomain axis"));
        }
        if self.shape.len() < 2 {
            return Err(Error::domain("need at least two axes to split off a codomain"));
        }
        let mut shape = self.shape;
        let last = shape.pop();
        Ok(Self {
            shape,
            codomain: last,
            entries: self.entries,
        })
    }

    /// Entry moduli, same layout.
    pub(crate) fn moduli(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.modulus()).collect()
    }
}
