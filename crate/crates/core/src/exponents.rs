//! Summability-exponent calculus.
//!
//! Exponents live in `[1, ∞]` and are stored as `f64`, with `f64::INFINITY`
//! standing for ∞. Every formula here is linear in reciprocals, so
//! [`recip`] (which maps ∞ to exactly 0) is the workhorse.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on feasibility slack and on simplex-face membership.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// `1/p`, with `1/∞ = 0` exactly.
pub fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Inverse of [`recip`]: `1/0 = ∞`.
pub fn from_recip(r: f64) -> f64 {
    if r == 0.0 {
        f64::INFINITY
    } else {
        1.0 / r
    }
}

/// Parses `inf`, decimals, or small fractions such as `4/3`.
pub fn parse_exponent(text: &str) -> Result<f64> {
    let t = text.trim();
    let value = match t.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" | "+inf" => f64::INFINITY,
        _ => match t.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::domain(format!("bad numerator in '{t}'")))?;
                let den: f64 = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::domain(format!("bad denominator in '{t}'")))?;
                if den == 0.0 {
                    return Err(Error::domain(format!("zero denominator in '{t}'")));
                }
                num / den
            }
            None => t
                .parse()
                .map_err(|_| Error::domain(format!("cannot parse exponent '{t}'")))?,
        },
    };
    if value.is_nan() {
        return Err(Error::domain(format!("exponent '{t}' is NaN")));
    }
    Ok(value)
}

/// An m-tuple of exponents, each in `[1, ∞]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentVector(Vec<f64>);

impl ExponentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("exponent vector must have m >= 1 entries"));
        }
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || v < 1.0 {
                return Err(Error::domain(format!("exponent #{} = {v} is below 1", i + 1)));
            }
        }
        Ok(Self(values))
    }

    /// `m` copies of `value`.
    pub fn uniform(m: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; m])
    }

    /// `(∞, …, ∞)`, the c_0 domain.
    pub fn infinite(m: usize) -> Self {
        Self(vec![f64::INFINITY; m.max(1)])
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn reciprocals(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|&p| recip(p))
    }

    /// `|1/p| = 1/p_1 + ⋯ + 1/p_m`.
    pub fn reciprocal_sum(&self) -> f64 {
        self.reciprocals().sum()
    }

    pub fn all_infinite(&self) -> bool {
        self.0.iter().all(|p| p.is_infinite())
    }

    /// Appends one more exponent.
    pub fn pushed(&self, value: f64) -> Result<Self> {
        let mut v = self.0.clone();
        v.push(value);
        Self::new(v)
    }

    /// The first `k` entries.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Self::new(self.0[..k.min(self.0.len())].to_vec())
    }
}

impl TryFrom<Vec<f64>> for ExponentVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ExponentVector> for Vec<f64> {
    fn from(v: ExponentVector) -> Self {
        v.0
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// Comma- or whitespace-separated exponents.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(parse_exponent)
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|&v| crate::numfmt::sig15(v)).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    #[default]
    Real,
    Complex,
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::domain(format!("unknown field '{other}'"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

/// Domain exponents `p`, codomain pair `ℓ_s → ℓ_{q_cod}` and the scalar field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub p: ExponentVector,
    pub s: f64,
    pub q_cod: f64,
    pub field: Field,
}

impl ProblemSpec {
    pub fn new(p: ExponentVector, s: f64, q_cod: f64, field: Field) -> Result<Self> {
        if !(1.0..=2.0).contains(&s) || !(s..=2.0).contains(&q_cod) {
            return Err(Error::domain(format!(
                "need 1 <= s <= q_cod <= 2, got s = {s}, q_cod = {q_cod}"
            )));
        }
        Ok(Self { p, s, q_cod, field })
    }

    /// The classical scalar setting: `s = 1`, `q_cod = 2`, `p = (∞, …, ∞)`.
    pub fn scalar(m: usize) -> Self {
        Self {
            p: ExponentVector::infinite(m),
            s: 1.0,
            q_cod: 2.0,
            field: Field::Real,
        }
    }

    pub fn m(&self) -> usize {
        self.p.m()
    }

    /// `1/s − 1/q_cod − |1/p|`, which must be nonnegative.
    pub fn excess(&self) -> f64 {
        1.0 / self.s - 1.0 / self.q_cod - self.p.reciprocal_sum()
    }
}

/// Constants entering the upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantSpec {
    pub cotype2_constant: f64,
    pub summing_norm: f64,
    pub khintchine_base: f64,
}

impl ConstantSpec {
    pub fn new(cotype2_constant: f64, summing_norm: f64, khintchine_base: f64) -> Result<Self> {
        for (name, v) in [
            ("cotype2_constant", cotype2_constant),
            ("summing_norm", summing_norm),
            ("khintchine_base", khintchine_base),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            cotype2_constant,
            summing_norm,
            khintchine_base,
        })
    }

    /// Scalar codomain, identity summing operator; `√2` (real) or `2/√π`
    /// (complex) Khintchine base.
    pub fn scalar_default(field: Field) -> Self {
        let khintchine_base = match field {
            Field::Real => std::f64::consts::SQRT_2,
            Field::Complex => 2.0 / std::f64::consts::PI.sqrt(),
        };
        Self {
            cotype2_constant: 1.0,
            summing_norm: 1.0,
            khintchine_base,
        }
    }
}

/// Conjugate exponent `p*` with `1/p + 1/p* = 1`.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("conjugate of {p} < 1 is undefined")));
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    if p.is_infinite() {
        return Ok(1.0);
    }
    Ok(p / (p - 1.0))
}

/// `max(1/2 − 1/p, 0)`: the per-slot growth exponent of random sign forms.
pub fn ksz_alpha(p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("alpha({p}) undefined for p < 1")));
    }
    Ok(if p >= 2.0 { 0.5 - recip(p) } else { 0.0 })
}

/// `λ = 1/(1/2 + 1/s − 1/q_cod − |1/p|)`, required to land in `[1, 2]`.
pub fn lambda_base(spec: &ProblemSpec) -> Result<f64> {
    let denom = 0.5 + spec.excess();
    let lambda = 1.0 / denom;
    if denom <= 0.0 || !(1.0 - FEASIBILITY_TOL..=2.0 + FEASIBILITY_TOL).contains(&lambda) {
        return Err(Error::InfeasibleSpec {
            what: "lambda",
            value: lambda,
        });
    }
    Ok(lambda.clamp(1.0, 2.0))
}

/// `ρ = 2m/(m + 2(1/s − 1/q_cod − |1/p|))`, the equal-exponent boundary.
pub fn rho_exponent(spec: &ProblemSpec) -> Result<f64> {
    let excess = spec.excess();
    if excess < -FEASIBILITY_TOL {
        return Err(Error::InfeasibleSpec {
            what: "1/s - 1/q_cod - |1/p|",
            value: excess,
        });
    }
    let m = spec.m() as f64;
    Ok(2.0 * m / (m + 2.0 * excess.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub slack: f64,
    pub lambda: f64,
}

/// Checks the exponent budget `Σ 1/q_i ≤ m/2 + 1/s − 1/q_cod − |1/p|`.
///
/// Each `q_i` must lie in `[λ, 2]`; values outside are errors rather than
/// infeasible verdicts.
pub fn feasibility(q: &ExponentVector, spec: &ProblemSpec) -> Result<Feasibility> {
    if q.m() != spec.m() {
        return Err(Error::domain(format!(
            "q has {} entries but the spec has m = {}",
            q.m(),
            spec.m()
        )));
    }
    for (i, &qi) in q.values().iter().enumerate() {
        if !(1.0..=2.0).contains(&qi) {
            return Err(Error::domain(format!("q_{} = {qi} lies outside [1, 2]", i + 1)));
        }
    }
    let lambda = lambda_base(spec)?;
    for (i, &qi) in q.values().iter().enumerate() {
        if qi < lambda * (1.0 - FEASIBILITY_TOL) {
            return Err(Error::RangeViolation {
                index: i + 1,
                q: qi,
                lambda,
            });
        }
    }
    let budget = spec.m() as f64 / 2.0 + spec.excess();
    let slack = budget - q.reciprocal_sum();
    Ok(Feasibility {
        feasible: slack >= -FEASIBILITY_TOL,
        slack,
        lambda,
    })
}

/// Vertices `M_k = (2, …, λ, …, 2)` (λ in slot k) of the exponent simplex.
pub fn hull_vertices(m: usize, lambda: f64) -> Vec<ExponentVector> {
    (0..m)
        .map(|k| {
            let mut v = vec![2.0; m];
            v[k] = lambda;
            ExponentVector(v)
        })
        .collect()
}

/// Barycentric weights of `q` on the face spanned by the vertices
/// `(2, …, λ, …, 2)`, in reciprocal coordinates.
///
/// With `a = 1/2` and `b = 1/λ`, the weights are `θ_k ∝ 1/q_k − a`.
pub fn hull_decompose(q: &ExponentVector, lambda: f64) -> Result<Vec<f64>> {
    if !(1.0..=2.0).contains(&lambda) {
        return Err(Error::domain(format!("lambda = {lambda} outside [1, 2]")));
    }
    let m = q.m();
    let a = 0.5;
    let b = 1.0 / lambda;
    for (i, r) in q.reciprocals().enumerate() {
        if r < a - FEASIBILITY_TOL || r > b + FEASIBILITY_TOL {
            return Err(Error::domain(format!(
                "1/q_{} = {r} outside [1/2, 1/lambda = {b}]",
                i + 1
            )));
        }
    }
    let target = (m as f64 - 1.0) * a + b;
    let residual = q.reciprocal_sum() - target;
    if residual.abs() > FEASIBILITY_TOL {
        return Err(Error::NotOnFace { residual });
    }
    if b - a <= FEASIBILITY_TOL {
        // every vertex is (2, …, 2); only the target (2, …, 2) itself survives
        // the range check above, and any weights reproduce it
        if q.values().iter().any(|&v| v != 2.0) {
            return Err(Error::DegenerateSimplex);
        }
        return Ok(vec![1.0 / m as f64; m]);
    }
    // On the face Σ(1/q_k − a) = b − a; dividing by the computed sum keeps
    // Σθ = 1 to rounding even when b − a is tiny.
    let diffs: Vec<f64> = q.reciprocals().map(|r| (r - a).max(0.0)).collect();
    let total: f64 = diffs.iter().sum();
    let theta: Vec<f64> = diffs.iter().map(|d| d / total).collect();

    let reconstruction_error = theta
        .iter()
        .zip(q.reciprocals())
        .enumerate()
        .map(|(i, (_, r))| {
            let rebuilt: f64 = theta
                .iter()
                .enumerate()
                .map(|(k, &t)| t * if k == i { b } else { a })
                .sum();
            (rebuilt - r).abs()
        })
        .fold(0.0, f64::max);
    if reconstruction_error > 1e-12 {
        return Err(Error::NotOnFace {
            residual: reconstruction_error,
        });
    }
    Ok(theta)
}

/// Componentwise `1/r_i = θ/p_i + (1 − θ)/q_i`.
pub fn interpolate_exponents(
    p: &ExponentVector,
    q: &ExponentVector,
    theta: f64,
) -> Result<ExponentVector> {
    if p.m() != q.m() {
        return Err(Error::domain(format!(
            "length mismatch: {} vs {}",
            p.m(),
            q.m()
        )));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::domain(format!("theta = {theta} outside [0, 1]")));
    }
    if theta == 0.0 {
        return Ok(q.clone());
    }
    if theta == 1.0 {
        return Ok(p.clone());
    }
    let values = p
        .reciprocals()
        .zip(q.reciprocals())
        .map(|(rp, rq)| from_recip(theta * rp + (1.0 - theta) * rq))
        .collect();
    ExponentVector::new(values)
}

/// `r = 1/(1/2 + 1/s − 1/q_cod)`, the summing exponent of `ℓ_s ↪ ℓ_{q_cod}`.
pub fn bennett_carl_r(s: f64, q_cod: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&s) || !(s..=2.0).contains(&q_cod) {
        return Err(Error::domain(format!(
            "need 1 <= s <= q_cod <= 2, got s = {s}, q_cod = {q_cod}"
        )));
    }
    Ok(1.0 / (0.5 + (1.0 / s - 1.0 / q_cod)))
}

/// Upper constants for a given arity and field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantBounds {
    pub m: usize,
    pub field: Field,
    /// `khintchine_base^{m−1}`.
    pub bh_upper: f64,
    /// `(√2 · C_2(Y))^{m−1} · π_{r,1}(v)`.
    pub mixed_upper: f64,
}

impl ConstantBounds {
    /// The optimal real bilinear constant `2^{1/p + 1/q − 1}`.
    pub fn bilinear_sharp(&self, p: f64, q: f64) -> Result<f64> {
        if self.field == Field::Complex {
            return Err(Error::Unsupported(
                "the sharp bilinear constant is only known for real scalars".into(),
            ));
        }
        if self.m != 2 {
            return Err(Error::Unsupported(format!(
                "the sharp bilinear constant needs m = 2, got m = {}",
                self.m
            )));
        }
        Ok(2f64.powf(recip(p) + recip(q) - 1.0))
    }
}

pub fn constant_bounds(m: usize, field: Field, consts: &ConstantSpec) -> Result<ConstantBounds> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let e = (m - 1) as i32;
    Ok(ConstantBounds {
        m,
        field,
        bh_upper: consts.khintchine_base.powi(e),
        mixed_upper: (std::f64::consts::SQRT_2 * consts.cotype2_constant).powi(e)
            * consts.summing_norm,
    })
}
