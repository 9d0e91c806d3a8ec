use crate::error::{Error, Result};
use crate::exponents::conjugate_exponent;
use crate::scalar::Scalar;
use crate::tensor::norms_lp;

/// `‖g‖_{p*}`, the value of the linear functional `g` on the unit ball of `ℓ_p`.
pub fn dual_norm<S: Scalar>(g: &[S], p: f64) -> f64 {
    if p.is_infinite() {
        let mut acc = 0.0;
        for x in g {
            acc += x.modulus();
        }
        return acc;
    }
    if p == 1.0 {
        return g.iter().map(|x| x.modulus()).fold(0.0, f64::max);
    }
    let moduli: Vec<f64> = g.iter().map(|x| x.modulus()).collect();
    norms_lp(&moduli, p / (p - 1.0))
}

/// Unit vector `x` of `ℓ_p` with `⟨g, x⟩ = ‖g‖_{p*}` (bilinear pairing, no conjugation).
///
/// `p = ∞` gives the phase vector `conj(g_i)/|g_i|` (zeros map to 1); `p = 1`
/// picks the first index of largest modulus.
pub fn dual_maximizer<S: Scalar>(g: &[S], p: f64) -> Result<Vec<S>> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("exponent {p} below 1")));
    }
    let gmax = g.iter().map(|x| x.modulus()).fold(0.0, f64::max);
    if gmax == 0.0 {
        return Err(Error::DegenerateGradient);
    }
    if p.is_infinite() {
        return Ok(g.iter().map(|x| x.phase_conj()).collect());
    }
    if p == 1.0 {
        let j = g.iter().position(|x| x.modulus() == gmax).unwrap_or(0);
        let mut x = vec![S::zero(); g.len()];
        x[j] = g[j].phase_conj();
        return Ok(x);
    }
    let pstar = conjugate_exponent(p)?;
    let rel: Vec<f64> = g.iter().map(|x| x.modulus() / gmax).collect();
    let norm = norms_lp(&rel, pstar);
    let x = if p == 2.0 {
        g.iter()
            .zip(&rel)
            .map(|(gi, r)| gi.phase_conj().scale(r / norm))
            .collect()
    } else {
        let denom = norm.powf(pstar - 1.0);
        g.iter()
            .zip(&rel)
            .map(|(gi, &r)| {
                let w = if r == 0.0 { 0.0 } else { r.powf(pstar - 1.0) };
                gi.phase_conj().scale(w / denom)
            })
            .collect()
    };
    Ok(x)
}
