//! Exact arithmetic primitives shared by every other module.

mod enumerate;
mod expvec;
mod rat;

pub(crate) use enumerate::{ceil_div, visit_box};
#[cfg(test)]
pub(crate) use expvec::dot;
pub use expvec::ExpVec;
pub use rat::Rat;

use num_integer::Integer;

use crate::{Error, Result};

fn check_weights(weights: &[u64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("empty weight sequence".into()));
    }
    if let Some(pos) = weights.iter().position(|&w| w == 0) {
        return Err(Error::InvalidWeights(format!(
            "weight {} (position {}) is not positive",
            weights[pos],
            pos + 1
        )));
    }
    Ok(())
}

/// Divides out the gcd of a positive weight sequence.
///
/// Returns `(weights / g, g)`.
pub fn normalize_weights(weights: &[u64]) -> Result<(Vec<u64>, u64)> {
    check_weights(weights)?;
    let g = weights.iter().fold(0u64, |acc, &w| acc.gcd(&w));
    Ok((weights.iter().map(|w| w / g).collect(), g))
}

/// Least common multiple of positive weights. Errors when it does not fit in
/// a `u64`, since it is used as a weight afterwards.
pub fn lcm_of(weights: &[u64]) -> Result<u64> {
    check_weights(weights)?;
    let mut acc: u128 = 1;
    for &w in weights {
        let w = w as u128;
        acc = acc / acc.gcd(&w) * w;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow(format!("lcm of {weights:?} exceeds u64")));
        }
    }
    Ok(acc as u64)
}

/// Monomial divisibility: `s <= t` entrywise.
pub fn divides(s: &ExpVec, t: &ExpVec) -> Result<bool> {
    s.divides(t)
}

/// Removes every element divisible by another one, and duplicates.
/// Output is sorted by total degree, then lexicographically descending.
pub(crate) fn minimalize(mut elems: Vec<ExpVec>) -> Vec<ExpVec> {
    elems.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| b.cmp(a))
    });
    elems.dedup();
    let mut kept: Vec<ExpVec> = Vec::new();
    for e in elems {
        if !kept.iter().any(|k| k.divides_unchecked(&e)) {
            kept.push(e);
        }
    }
    kept
}
