//! Exact norms by enumerating extreme points of the leading balls.
//!
//! The extreme points of the real `ℓ_∞^n` ball are the `2^n` sign vectors and
//! those of `ℓ_1^n` are `±e_i`. A multilinear form is convex in each slot, so
//! its supremum is attained at extreme points of the first `m − 1` balls, and
//! the last slot is closed by the dual norm for any exponent.

use std::ops::Range;

use rayon::prelude::*;

use super::dual::{dual_maximizer, dual_norm};
use super::{contract_except, evaluate, MultilinearForm, NormEstimate, NormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default cap on the number of enumerated extreme-point tuples.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

const CHUNKS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    /// Sign vectors; `fixed` pins the first coordinate to +1.
    Signs { fixed: bool },
    Basis,
}

/// Number of extreme-point tuples the enumeration visits, or why it does not apply.
pub fn oracle_cost<S: Scalar>(form: &MultilinearForm<S>) -> Result<u128> {
    let flat = form.to_scalar()?;
    let slots = slots(&flat)?;
    let mut cost: u128 = 1;
    for (slot, &n) in slots.iter().zip(flat.tensor().shape()) {
        let c = match slot {
            Slot::Signs { .. } if n >= 127 => u128::MAX,
            Slot::Signs { .. } => 1u128 << n,
            Slot::Basis => n as u128,
        };
        cost = cost.saturating_mul(c);
    }
    Ok(cost)
}

fn slots<S: Scalar>(flat: &MultilinearForm<S>) -> Result<Vec<Slot>> {
    let m = flat.arity();
    let mut out = Vec::with_capacity(m.saturating_sub(1));
    let mut fixed_used = false;
    for (k, &p) in flat.p().values()[..m - 1].iter().enumerate() {
        if p.is_infinite() {
            if S::IS_COMPLEX {
                return Err(Error::Unsupported(format!(
                    "slot {} has p = inf over the complex field; its extreme points are not finite",
                    k + 1
                )));
            }
            out.push(Slot::Signs { fixed: !fixed_used });
            fixed_used = true;
        } else if p == 1.0 {
            out.push(Slot::Basis);
        } else {
            return Err(Error::Unsupported(format!(
                "slot {} has p = {p}; enumeration needs p in {{1, inf}} on every slot but the last",
                k + 1
            )));
        }
    }
    Ok(out)
}

/// Exact operator norm within [`DEFAULT_BUDGET`].
pub fn exact_sign_enumeration<S: Scalar>(form: &MultilinearForm<S>) -> Result<NormEstimate<S>> {
    exact_norm_with_budget(form, DEFAULT_BUDGET)
}

pub fn exact_norm_with_budget<S: Scalar>(
    form: &MultilinearForm<S>,
    budget: u128,
) -> Result<NormEstimate<S>> {
    let flat = form.to_scalar()?;
    let required = oracle_cost(form)?;
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let slots = slots(&flat)?;
    let shape = flat.tensor().shape().to_vec();
    let m = shape.len();
    let last_p = flat.p().values()[m - 1];
    let en = Enumerator {
        shape: &shape,
        slots: &slots,
        last_p,
    };
    let data = flat.tensor().entries();

    let best = if m == 1 {
        Best {
            value: dual_norm(data, last_p),
            codes: Vec::new(),
        }
    } else {
        let top = en.full_range(0);
        let len = top.end - top.start;
        let chunks = CHUNKS.min(len);
        let parts: Vec<Best> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = top.start + len * c / chunks;
                let hi = top.start + len * (c + 1) / chunks;
                let mut scratch: Vec<Vec<S>> = Vec::new();
                let mut rest = data.len();
                for &n in &shape[..m - 1] {
                    rest /= n;
                    scratch.push(vec![S::zero(); rest]);
                }
                let mut codes = vec![0u64; m - 1];
                let mut best = Best {
                    value: f64::NEG_INFINITY,
                    codes: codes.clone(),
                };
                en.descend(0, data, lo..hi, &mut scratch, &mut codes, &mut best);
                best
            })
            .collect();
        let mut best = parts[0].clone();
        for p in &parts[1..] {
            if p.value > best.value {
                best = p.clone();
            }
        }
        best
    };

    let mut witness: Vec<Vec<S>> = best
        .codes
        .iter()
        .enumerate()
        .map(|(k, &code)| decode(slots[k], shape[k], code))
        .collect();
    let views: Vec<&[S]> = witness.iter().map(|v| v.as_slice()).chain([&[][..]]).collect();
    let g = contract_except(data, &shape, &views, Some(m - 1));
    let last = match dual_maximizer(&g, last_p) {
        Ok(x) => x,
        Err(Error::DegenerateGradient) => {
            let mut e = vec![S::zero(); shape[m - 1]];
            e[0] = S::one();
            e
        }
        Err(e) => return Err(e),
    };
    witness.push(last);
    if form.is_vector_valued() {
        witness.pop();
    }
    let value = evaluate(form, &witness)?.norm(form.codomain_s());
    Ok(NormEstimate {
        value,
        kind: NormKind::Exact,
        witness,
        iterations: 0,
        restarts_used: 0,
        converged: true,
    })
}

#[derive(Debug, Clone)]
struct Best {
    value: f64,
    codes: Vec<u64>,
}

fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

fn decode<S: Scalar>(slot: Slot, n: usize, code: u64) -> Vec<S> {
    match slot {
        Slot::Basis => {
            let mut e = vec![S::zero(); n];
            e[code as usize] = S::one();
            e
        }
        Slot::Signs { fixed } => {
            let off = usize::from(fixed);
            (0..n)
                .map(|i| {
                    if i >= off && (code >> (i - off)) & 1 == 1 {
                        -S::one()
                    } else {
                        S::one()
                    }
                })
                .collect()
        }
    }
}

struct Enumerator<'a> {
    shape: &'a [usize],
    slots: &'a [Slot],
    last_p: f64,
}

impl Enumerator<'_> {
    fn full_range(&self, level: usize) -> Range<u64> {
        let n = self.shape[level];
        match self.slots[level] {
            Slot::Basis => 0..n as u64,
            Slot::Signs { fixed } => 0..1u64 << (n - usize::from(fixed)),
        }
    }

    /// Enumerates slot `level` over `range` given the partially contracted
    /// tensor `c` of shape `(n_level, rest)`.
    fn descend<S: Scalar>(
        &self,
        level: usize,
        c: &[S],
        range: Range<u64>,
        scratch: &mut [Vec<S>],
        codes: &mut [u64],
        best: &mut Best,
    ) {
        if level == self.shape.len() - 1 {
            let v = dual_norm(c, self.last_p);
            if v > best.value {
                best.value = v;
                best.codes.copy_from_slice(codes);
            }
            return;
        }
        let n = self.shape[level];
        let rest = c.len() / n;
        let (acc, deeper) = scratch.split_first_mut().expect("one buffer per level");
        match self.slots[level] {
            Slot::Basis => {
                for i in range {
                    codes[level] = i;
                    let row = &c[i as usize * rest..(i as usize + 1) * rest];
                    self.descend(level + 1, row, self.full_range_next(level), deeper, codes, best);
                }
            }
            Slot::Signs { fixed } => {
                if range.is_empty() {
                    return;
                }
                let off = usize::from(fixed);
                let start = gray(range.start);
                acc.iter_mut().for_each(|a| *a = S::zero());
                for i in 0..n {
                    let negative = i >= off && (start >> (i - off)) & 1 == 1;
                    let row = &c[i * rest..(i + 1) * rest];
                    for (a, &r) in acc.iter_mut().zip(row) {
                        if negative {
                            *a = *a - r;
                        } else {
                            *a += r;
                        }
                    }
                }
                codes[level] = start;
                self.descend(level + 1, acc, self.full_range_next(level), deeper, codes, best);
                let mut pattern = start;
                for t in range.start + 1..range.end {
                    let bit = t.trailing_zeros() as usize;
                    pattern ^= 1 << bit;
                    let i = bit + off;
                    let row = &c[i * rest..(i + 1) * rest];
                    let now_negative = (pattern >> bit) & 1 == 1;
                    for (a, &r) in acc.iter_mut().zip(row) {
                        let two_r = r.scale(2.0);
                        if now_negative {
                            *a = *a - two_r;
                        } else {
                            *a += two_r;
                        }
                    }
                    codes[level] = pattern;
                    self.descend(level + 1, acc, self.full_range_next(level), deeper, codes, best);
                }
            }
        }
    }

    fn full_range_next(&self, level: usize) -> Range<u64> {
        if level + 1 < self.slots.len() {
            self.full_range(level + 1)
        } else {
            0..1
        }
    }
}
