//! Plain-text tensor format.
//!
//! ```text
//! shape: 2 2
//! 1
//! 1
//! 1
//! -1
//! ```
//!
//! The first header line is `shape: n_1 … n_m`, optionally followed by
//! `codomain n`. Further `key: value` header lines may follow and are handed
//! back to the caller. Entries come one per line in row-major order; a
//! complex entry is written `re im`. Blank lines and `#` comments are
//! ignored.

use std::io::Write;

use num_complex::Complex64;

use super::CoefficientTensor;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A tensor read from text, real or complex depending on its entries.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Real(CoefficientTensor<f64>),
    Complex(CoefficientTensor<Complex64>),
}

impl AnyTensor {
    pub fn arity(&self) -> usize {
        match self {
            AnyTensor::Real(t) => t.arity(),
            AnyTensor::Complex(t) => t.arity(),
        }
    }

    pub fn codomain(&self) -> Option<usize> {
        match self {
            AnyTensor::Real(t) => t.codomain(),
            AnyTensor::Complex(t) => t.codomain(),
        }
    }
}

/// A parsed file: tensor plus any extra header lines, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFile {
    pub tensor: AnyTensor,
    pub headers: Vec<(String, String)>,
}

impl TensorFile {
    pub fn header(&self, key: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn parse_shape(value: &str, line: usize) -> Result<(Vec<usize>, Option<usize>)> {
    let mut shape = Vec::new();
    let mut codomain = None;
    let mut tokens = value.split_whitespace();
    while let Some(tok) = tokens.next() {
        if tok == "codomain" {
            let n = tokens.next().ok_or_else(|| Error::Parse {
                line,
                msg: "'codomain' needs a length".into(),
            })?;
            codomain = Some(n.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad codomain length '{n}'"),
            })?);
            if let Some(extra) = tokens.next() {
                return Err(Error::Parse {
                    line,
                    msg: format!("unexpected '{extra}' after codomain length"),
                });
            }
        } else {
            shape.push(tok.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad axis length '{tok}'"),
            })?);
        }
    }
    if shape.is_empty() {
        return Err(Error::Parse {
            line,
            msg: "shape needs at least one axis".into(),
        });
    }
    Ok((shape, codomain))
}

/// Parses the text format, keeping extra header lines.
pub fn parse_tensor_file(text: &str) -> Result<TensorFile> {
    let mut shape = None;
    let mut headers = Vec::new();
    let mut values: Vec<(f64, f64)> = Vec::new();
    let mut complex = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if values.is_empty() {
            if let Some((key, value)) = line.split_once(':') {
                let key = key.trim();
                if shape.is_none() {
                    if key != "shape" {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("expected 'shape:' header, found '{key}:'"),
                        });
                    }
                    shape = Some(parse_shape(value, line_no)?);
                } else {
                    headers.push((key.to_string(), value.trim().to_string()));
                }
                continue;
            }
        }
        if shape.is_none() {
            return Err(Error::Parse {
                line: line_no,
                msg: "missing 'shape:' header".into(),
            });
        }
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad number '{t}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        match nums.as_slice() {
            [re] => values.push((*re, 0.0)),
            [re, im] => {
                complex = true;
                values.push((*re, *im));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected one real or a 're im' pair".into(),
                })
            }
        }
    }

    let (shape, codomain) = shape.ok_or(Error::Parse {
        line: 0,
        msg: "empty tensor file".into(),
    })?;
    let tensor = if complex {
        let e = values.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
        AnyTensor::Complex(build(shape, codomain, e)?)
    } else {
        let e = values.into_iter().map(|(r, _)| r).collect();
        AnyTensor::Real(build(shape, codomain, e)?)
    };
    Ok(TensorFile { tensor, headers })
}

fn build<S: Scalar>(
    shape: Vec<usize>,
    codomain: Option<usize>,
    entries: Vec<S>,
) -> Result<CoefficientTensor<S>> {
    match codomain {
        Some(c) => CoefficientTensor::with_codomain(shape, c, entries),
        None => CoefficientTensor::new(shape, entries),
    }
}

/// Parses the text format, ignoring extra headers.
pub fn read_tensor(text: &str) -> Result<AnyTensor> {
    Ok(parse_tensor_file(text)?.tensor)
}

/// Writes the text format. Entries use the shortest representation that
/// round-trips exactly.
pub fn write_tensor<S: Scalar, W: Write>(
    t: &CoefficientTensor<S>,
    headers: &[(String, String)],
    mut w: W,
) -> Result<()> {
    let dims: Vec<String> = t.shape().iter().map(|n| n.to_string()).collect();
    write!(w, "shape: {}", dims.join(" "))?;
    if let Some(c) = t.codomain() {
        write!(w, " codomain {c}")?;
    }
    writeln!(w)?;
    for (k, v) in headers {
        writeln!(w, "{k}: {v}")?;
    }
    for e in t.entries() {
        if S::IS_COMPLEX {
            writeln!(w, "{} {}", e.re(), e.im())?;
        } else {
            writeln!(w, "{}", e.re())?;
        }
    }
    Ok(())
}

/// [`write_tensor`] into a `String`.
pub fn tensor_to_string<S: Scalar>(t: &CoefficientTensor<S>, headers: &[(String, String)]) -> String {
    let mut buf = Vec::new();
    write_tensor(t, headers, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_extremizer() {
        let t = read_tensor("shape: 2 2\n1\n1\n1\n-1\n").unwrap();
        assert_eq!(
            t,
            AnyTensor::Real(CoefficientTensor::new(vec![2, 2], vec![1.0, 1.0, 1.0, -1.0]).unwrap())
        );
    }

    #[test]
    fn parses_codomain_complex_and_headers() {
        let text = "# form\nshape: 1 codomain 2\np: inf\nseed: 7\n1 0.5\n-2\n";
        let f = parse_tensor_file(text).unwrap();
        assert_eq!(f.header("p"), Some("inf"));
        assert_eq!(f.header("seed"), Some("7"));
        match f.tensor {
            AnyTensor::Complex(t) => {
                assert_eq!(t.codomain(), Some(2));
                assert_eq!(t.entries()[0], Complex64::new(1.0, 0.5));
                assert_eq!(t.entries()[1], Complex64::new(-2.0, 0.0));
            }
            _ => panic!("expected complex"),
        }
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_tensor("").is_err());
        assert!(read_tensor("1\n2\n").is_err());
        assert!(read_tensor("shape: 2\n1\n").is_err());
        assert!(read_tensor("shape: 2\n1\nx\n").is_err());
        assert!(read_tensor("shape: 2\n1 2 3\n4\n").is_err());
        assert!(read_tensor("shape: 0\n").is_err());
        assert!(read_tensor("shape: 2 codomain\n1\n1\n").is_err());
        assert!(read_tensor("dims: 2\n1\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trips_bit_exact(shape in prop::collection::vec(1usize..4, 1..4), seed in any::<u64>(), complex in any::<bool>()) {
            let len: usize = shape.iter().product();
            let mut x = seed | 1;
            let mut next = || { x ^= x << 13; x ^= x >> 7; x ^= x << 17; (x as f64 / u64::MAX as f64 - 0.5) * 1e3 };
            let headers = vec![("seed".to_string(), seed.to_string())];
            if complex {
                let e: Vec<Complex64> = (0..len).map(|_| Complex64::new(next(), next())).collect();
                let t = CoefficientTensor::new(shape, e).unwrap();
                let f = parse_tensor_file(&tensor_to_string(&t, &headers)).unwrap();
                prop_assert_eq!(f.tensor, AnyTensor::Complex(t));
                prop_assert_eq!(f.headers, headers);
            } else {
                let e: Vec<f64> = (0..len).map(|_| next()).collect();
                let t = CoefficientTensor::new(shape, e).unwrap();
                prop_assert_eq!(read_tensor(&tensor_to_string(&t, &headers)).unwrap(), AnyTensor::Real(t));
            }
        }
    }
}
