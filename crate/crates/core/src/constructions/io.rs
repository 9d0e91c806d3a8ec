//! Forms in the tensor text format with `p:`, `codomain_s:` and `seed:` headers.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponents::{parse_exponent, ExponentVector};
use crate::numfmt::sig15;
use crate::opnorm::MultilinearForm;
use crate::scalar::Scalar;
use crate::tensor::{parse_tensor_file, write_tensor, AnyTensor, TensorFile};

#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Real(MultilinearForm<f64>),
    Complex(MultilinearForm<Complex64>),
}

fn exponent_text(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

pub fn write_form<S: Scalar, W: Write>(form: &MultilinearForm<S>, seed: Option<u64>, w: W) -> Result<()> {
    let p: Vec<String> = form.p().values().iter().map(|&x| exponent_text(x)).collect();
    let mut headers = vec![("p".to_string(), p.join(","))];
    if let Some(s) = form.codomain_s() {
        headers.push(("codomain_s".to_string(), exponent_text(s)));
    }
    if let Some(seed) = seed {
        headers.push(("seed".to_string(), seed.to_string()));
    }
    write_tensor(form.tensor(), &headers, w)
}

pub fn form_to_string<S: Scalar>(form: &MultilinearForm<S>, seed: Option<u64>) -> String {
    let mut buf = Vec::new();
    write_form(form, seed, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

/// Builds a form from a parsed file. `p` and `s` override the headers; with
/// neither, `p` defaults to all `∞` and `s` to 2.
pub fn form_from_file(file: TensorFile, p: Option<ExponentVector>, s: Option<f64>) -> Result<AnyForm> {
    let m = file.tensor.arity();
    let p = match (p, file.header("p")) {
        (Some(p), _) => p,
        (None, Some(text)) => text.parse()?,
        (None, None) => ExponentVector::infinite(m),
    };
    let s = match (s, file.header("codomain_s")) {
        (Some(s), _) => Some(s),
        (None, Some(text)) => Some(parse_exponent(text)?),
        (None, None) => None,
    };
    let s = match (file.tensor.codomain(), s) {
        (Some(_), None) => Some(2.0),
        (None, Some(s)) => {
            return Err(Error::domain(format!(
                "codomain_s = {} given for a scalar-valued tensor",
                sig15(s)
            )))
        }
        (_, s) => s,
    };
    Ok(match file.tensor {
        AnyTensor::Real(t) => AnyForm::Real(build(t, p, s)?),
        AnyTensor::Complex(t) => AnyForm::Complex(build(t, p, s)?),
    })
}

fn build<S: Scalar>(t: crate::tensor::CoefficientTensor<S>, p: ExponentVector, s: Option<f64>) -> Result<MultilinearForm<S>> {
    match s {
        Some(s) => MultilinearForm::vector_valued(t, p, s),
        None => MultilinearForm::new(t, p),
    }
}

pub fn parse_form(text: &str) -> Result<AnyForm> {
    form_from_file(parse_tensor_file(text)?, None, None)
}
