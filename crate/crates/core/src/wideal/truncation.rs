//! Comparing the truncation `I(db)` with the power `I(b)^d`.

use serde::Serialize;

use super::{ideal_generators, WeightSystem};
use crate::arith::minimalize;
use crate::{Error, ExpVec, Rat, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationComparison {
    pub b: Rat,
    pub d: u64,
    /// Minimal generators of `I(db)`.
    pub truncation_gens: Vec<ExpVec>,
    /// Minimal generators of `I(b)^d`.
    pub power_gens: Vec<ExpVec>,
    pub equal: bool,
    /// A generator of `I(db)` outside `I(b)^d`, when the two differ.
    pub witness: Option<ExpVec>,
}

/// Generators of a product of monomial ideals are the pairwise sums of
/// generators, so `I(b)^d` is built by `d - 1` rounds of summing and
/// minimalizing. `I(b)^d` is always inside `I(db)`; that is re-checked here.
pub fn product_vs_truncation(w: &WeightSystem, b: &Rat, d: u64) -> Result<TruncationComparison> {
    if d < 2 {
        return Err(Error::InvalidInstance(format!("power d = {d} must be at least 2")));
    }
    let single = ideal_generators(w, b)?;
    let truncation = ideal_generators(w, &(b * &Rat::from(d)))?;

    let mut power = single.gens.clone();
    for _ in 1..d {
        let mut sums = Vec::with_capacity(power.len() * single.gens.len());
        for p in &power {
            for g in &single.gens {
                sums.push(p.checked_add(g)?);
            }
        }
        power = minimalize(sums);
    }

    for p in &power {
        if !truncation.contains_monomial(p)? {
            return Err(Error::Consistency(format!(
                "product generator {p} has weight below {}",
                truncation.k
            )));
        }
    }
    let witness = truncation
        .gens
        .iter()
        .find(|t| !power.iter().any(|p| p.divides_unchecked(t)))
        .cloned();
    Ok(TruncationComparison {
        b: b.clone(),
        d,
        equal: witness.is_none(),
        truncation_gens: truncation.gens,
        power_gens: power,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableB {
    /// `b = multiple * M / m`
    pub multiple: u64,
    pub b: Rat,
}

/// Smallest `b = c M / m`, `1 <= c <= search_limit`, with `I(db) = I(b)^d` for
/// every `2 <= d <= d_max`.
pub fn find_stable_b(w: &WeightSystem, d_max: u64, search_limit: u64) -> Result<Option<StableB>> {
    if d_max < 2 {
        return Err(Error::InvalidInstance(format!("d_max = {d_max} must be at least 2")));
    }
    for c in 1..=search_limit {
        let b = Rat::ratio(c as u128 * w.lcm() as u128, w.m());
        let mut stable = true;
        for d in 2..=d_max {
            if !product_vs_truncation(w, &b, d)?.equal {
                stable = false;
                break;
            }
        }
        if stable {
            return Ok(Some(StableB { multiple: c, b }));
        }
    }
    Ok(None)
}
