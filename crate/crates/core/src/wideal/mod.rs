//! The weight valuation `sigma-wt` and the weighted monomial ideals
//! `I(k) = (x^s : sum s_j a_j / m >= k)`.
//!
//! Thresholds are exact rationals. Internally every ideal is held in
//! numerator form `sum s_j a_j >= t` with the integer `t = ceil(k m)`.

mod truncation;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use truncation::{find_stable_b, product_vs_truncation, StableB, TruncationComparison};

use crate::arith::{ceil_div, lcm_of, visit_box};
use crate::limits::check_box;
use crate::quotient::CyclicQuotientType;
use crate::{Error, ExpVec, Polynomial, Rat, Result};

/// Blow-up weights `sigma = (a_1, ..., a_n)` with `gcd = 1`, together with the
/// group order `m` of the ambient quotient `1/m(a_1, ..., a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightSystem {
    sigma: Vec<u64>,
    m: u64,
    #[serde(rename = "lcm")]
    big_m: u64,
}

impl WeightSystem {
    pub fn new(sigma: &[u64], m: u64) -> Result<Self> {
        let (reduced, g) = crate::arith::normalize_weights(sigma)?;
        if g != 1 {
            return Err(Error::InvalidWeights(format!(
                "weights {sigma:?} have gcd {g}; use {reduced:?}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidWeights("group order must be positive".into()));
        }
        Ok(WeightSystem {
            sigma: sigma.to_vec(),
            big_m: lcm_of(sigma)?,
            m,
        })
    }

    /// Divides out the gcd first and returns it alongside the system.
    pub fn normalized(sigma: &[u64], m: u64) -> Result<(Self, u64)> {
        let (reduced, g) = crate::arith::normalize_weights(sigma)?;
        Ok((WeightSystem::new(&reduced, m)?, g))
    }

    pub fn sigma(&self) -> &[u64] {
        &self.sigma
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// `M = lcm(a_1, ..., a_n)`.
    pub fn lcm(&self) -> u64 {
        self.big_m
    }

    pub fn quotient_type(&self) -> CyclicQuotientType {
        CyclicQuotientType::new(self.m, &self.sigma).expect("validated")
    }

    /// `sum s_i a_i`, the numerator of the weight.
    pub fn numerator(&self, s: &ExpVec) -> Result<u128> {
        s.weighted_sum(&self.sigma)
    }

    /// Smallest integer `t >= k m`, clamped at 0: `wt >= k` iff `numerator >= t`.
    pub fn numerator_threshold(&self, k: &Rat) -> Result<u128> {
        let t = (k * &Rat::from(self.m)).ceil();
        if t <= BigInt::from(0) {
            return Ok(0);
        }
        t.to_u128()
            .ok_or_else(|| Error::Overflow(format!("threshold {k} is too large")))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: n,
            });
        }
        Ok(())
    }
}

/// `sum s_i a_i / m`.
pub fn sigma_wt_monomial(s: &ExpVec, w: &WeightSystem) -> Result<Rat> {
    Ok(Rat::ratio(w.numerator(s)?, w.m))
}

/// Minimum of the monomial weights over the support of `f`.
pub fn sigma_wt_poly(f: &Polynomial, w: &WeightSystem) -> Result<Rat> {
    w.check_dim(f.nvars())?;
    let mut best: Option<u128> = None;
    for s in f.support() {
        let v = w.numerator(s)?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    best.map(|v| Rat::ratio(v, w.m)).ok_or(Error::UndefinedWeight)
}

/// The ideal `I(k)` with its unique minimal monomial generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedIdeal {
    pub system: WeightSystem,
    pub k: Rat,
    /// Numerator-form threshold `ceil(k m)`.
    pub threshold: u128,
    /// Sorted by weight, then lexicographically descending.
    pub gens: Vec<ExpVec>,
}

impl WeightedIdeal {
    pub fn is_unit(&self) -> bool {
        self.threshold == 0
    }

    /// Membership by the weight inequality.
    pub fn contains_monomial(&self, s: &ExpVec) -> Result<bool> {
        Ok(self.system.numerator(s)? >= self.threshold)
    }

    /// Membership by divisibility by a generator.
    pub fn generated_contains(&self, s: &ExpVec) -> Result<bool> {
        self.system.check_dim(s.len())?;
        Ok(self.gens.iter().any(|g| g.divides_unchecked(s)))
    }
}

/// Minimal generators of the numerator-form ideal `(x^s : sum s_j a_j >= t)`.
///
/// Every minimal generator lies in the box `s_i <= ceil(t / a_i)` and has
/// `sum s_j a_j < t + max a_j`, so only that region is enumerated. Within it,
/// `s` is minimal iff it is a member and no `s - e_i` is.
pub fn threshold_generators(sigma: &[u64], t: u128) -> Result<Vec<ExpVec>> {
    let n = sigma.len();
    if n == 0 || sigma.contains(&0) {
        return Err(Error::InvalidWeights(format!("{sigma:?}")));
    }
    if t == 0 {
        return Ok(vec![ExpVec::zero(n)]);
    }
    let bounds = box_bounds(sigma, t)?;
    check_box(&bounds)?;
    let max_a = *sigma.iter().max().unwrap() as u128;
    let mut gens = Vec::new();
    visit_box(&bounds, sigma, t + max_a - 1, |s, wt| {
        if wt < t {
            return;
        }
        let minimal = s
            .iter()
            .zip(sigma)
            .all(|(&e, &a)| e == 0 || wt - (a as u128) < t);
        if minimal {
            gens.push((wt, ExpVec::new(s.to_vec()).expect("nonempty")));
        }
    });
    gens.sort_by(|(wa, a), (wb, b)| wa.cmp(wb).then_with(|| b.cmp(a)));
    Ok(gens.into_iter().map(|(_, s)| s).collect())
}

/// `ceil(t / a_i)` for each coordinate.
pub(crate) fn box_bounds(sigma: &[u64], t: u128) -> Result<Vec<u32>> {
    sigma
        .iter()
        .map(|&a| {
            let b = ceil_div(t, a as u128);
            u32::try_from(b).map_err(|_| Error::EnumerationLimit {
                requested: b,
                cap: crate::limits::max_enum(),
            })
        })
        .collect()
}

pub fn ideal_generators(w: &WeightSystem, k: &Rat) -> Result<WeightedIdeal> {
    let threshold = w.numerator_threshold(k)?;
    Ok(WeightedIdeal {
        gens: threshold_generators(&w.sigma, threshold)?,
        system: w.clone(),
        k: k.clone(),
        threshold,
    })
}

/// `sigma-wt(f) >= k`. The zero polynomial is contained in every ideal.
///
/// Both the weight inequality and divisibility of each support monomial by a
/// generator are evaluated; disagreement is a consistency failure.
pub fn contains(ideal: &WeightedIdeal, f: &Polynomial) -> Result<bool> {
    ideal.system.check_dim(f.nvars())?;
    if f.is_zero() {
        return Ok(true);
    }
    let by_weight = sigma_wt_poly(f, &ideal.system)? >= ideal.k;
    let mut by_generators = true;
    for s in f.support() {
        if !ideal.generated_contains(s)? {
            by_generators = false;
            break;
        }
    }
    if by_weight != by_generators {
        return Err(Error::Consistency(format!(
            "membership of {f} in I({}) differs: weight route {by_weight}, generator route {by_generators}",
            ideal.k
        )));
    }
    Ok(by_weight)
}

/// Number of monomials with `sigma-wt < k`, optionally only the invariant ones.
pub fn count_below(w: &WeightSystem, k: &Rat, invariant_only: bool) -> Result<u64> {
    let t = w.numerator_threshold(k)?;
    if t == 0 {
        return Ok(0);
    }
    let bounds: Vec<u32> = box_bounds(&w.sigma, t)?;
    check_box(&bounds)?;
    let m = w.m as u128;
    let mut count = 0u64;
    visit_box(&bounds, &w.sigma, t - 1, |_, wt| {
        if !invariant_only || wt % m == 0 {
            count += 1;
        }
    });
    Ok(count)
}
