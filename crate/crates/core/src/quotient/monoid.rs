//! Hilbert bases of the monoid of invariant exponent vectors.

use num_integer::Integer;
use serde::Serialize;

use super::CyclicQuotientType;
use crate::limits::max_enum;
use crate::{Error, ExpVec, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertBasis {
    pub elements: Vec<ExpVec>,
    pub degree_bound: u64,
    /// True when `degree_bound` is at least the group order. Every minimal
    /// invariant has total degree at most the order (Noether's bound), so the
    /// list is then the whole basis.
    pub complete: bool,
}

/// Minimal additive generators of `{s : sum s_i a_i = 0 mod m}`, up to total
/// degree `degree_bound`.
///
/// Enumerates degree by degree. A nonzero invariant `s` is reducible exactly
/// when some nonzero invariant `t != s` satisfies `t <= s` (then `s - t` is
/// invariant too), and such a `t` can be taken from the basis elements found at
/// lower degrees.
///
/// The practical ceiling is set by the enumeration cap: the number of vectors
/// of total degree at most `degree_bound` must stay below it.
pub fn invariant_monoid_basis(q: &CyclicQuotientType, degree_bound: u64) -> Result<HilbertBasis> {
    let n = q.dim();
    let points = simplex_points(n as u128, degree_bound as u128);
    let cap = max_enum();
    if points > cap as u128 {
        return Err(Error::EnumerationLimit {
            requested: points,
            cap,
        });
    }
    let mut basis: Vec<ExpVec> = Vec::new();
    let mut current = vec![0u32; n];
    for degree in 1..=degree_bound {
        let mut layer = Vec::new();
        compositions(degree as u32, 0, &mut current, &mut |s| {
            let s = ExpVec::new(s.to_vec()).expect("nonempty");
            if q.is_invariant(&s).unwrap_or(false)
                && !basis.iter().any(|b| b.divides_unchecked(&s))
            {
                layer.push(s);
            }
        });
        layer.sort_by(|a, b| b.cmp(a));
        basis.extend(layer);
    }
    Ok(HilbertBasis {
        elements: basis,
        degree_bound,
        complete: degree_bound >= q.order(),
    })
}

/// Number of `s` in `N^n` with total degree at most `d`: `C(d + n, n)`.
fn simplex_points(n: u128, d: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=n {
        acc = acc.saturating_mul(d + i) / i;
    }
    acc
}

/// Visits every `s` with `s_k + ... + s_{n-1} = remaining` beyond position `k`,
/// in lexicographically descending order.
fn compositions(remaining: u32, k: usize, current: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    let n = current.len();
    if k == n - 1 {
        current[k] = remaining;
        visit(current);
        current[k] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[k] = e;
        compositions(remaining - e, k + 1, current, visit);
    }
    current[k] = 0;
}

/// The single relation `X^alpha * Y^beta = Z^gamma` among three plane
/// invariants `X = x^p`, `Y = y^q` and a mixed `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialRelation {
    pub x: ExpVec,
    pub y: ExpVec,
    pub z: ExpVec,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl BinomialRelation {
    pub fn holds(&self) -> bool {
        (0..2).all(|i| {
            self.alpha * self.x.get(i) as u64 + self.beta * self.y.get(i) as u64
                == self.gamma * self.z.get(i) as u64
        })
    }
}

pub fn binomial_relation_2d(q: &CyclicQuotientType) -> Result<BinomialRelation> {
    if q.dim() != 2 {
        return Err(Error::UnsupportedShape(format!(
            "binomial relation needs 2 variables, got {}",
            q.dim()
        )));
    }
    let basis = invariant_monoid_basis(q, q.order())?;
    if basis.elements.len() != 3 {
        return Err(Error::UnsupportedShape(format!(
            "invariant basis of {q} has {} elements, not 3",
            basis.elements.len()
        )));
    }
    let pick = |pred: &dyn Fn(&ExpVec) -> bool| basis.elements.iter().find(|s| pred(s)).cloned();
    let x = pick(&|s| s.get(1) == 0);
    let y = pick(&|s| s.get(0) == 0);
    let z = pick(&|s| s.get(0) > 0 && s.get(1) > 0);
    let (Some(x), Some(y), Some(z)) = (x, y, z) else {
        return Err(Error::Consistency(format!(
            "basis {:?} lacks the two pure powers",
            basis.elements
        )));
    };
    let (p, qy) = (x.get(0) as u64, y.get(1) as u64);
    let (z1, z2) = (z.get(0) as u64, z.get(1) as u64);
    let gamma = (p / p.gcd(&z1)).lcm(&(qy / qy.gcd(&z2)));
    let rel = BinomialRelation {
        alpha: gamma * z1 / p,
        beta: gamma * z2 / qy,
        gamma,
        x,
        y,
        z,
    };
    if !rel.holds() {
        return Err(Error::Consistency(format!("relation {rel:?} does not hold")));
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ev;
    use std::collections::BTreeSet;

    fn set(v: &[ExpVec]) -> BTreeSet<ExpVec> {
        v.iter().cloned().collect()
    }

    /// Independent oracle: all invariants in the box `[0, bound]^n`, minus
    /// every sum of two nonzero invariants.
    fn brute_force_basis(q: &CyclicQuotientType, bound: u32) -> BTreeSet<ExpVec> {
        let n = q.dim();
        let mut all = Vec::new();
        let total = (bound as usize + 1).pow(n as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut v = vec![0u32; n];
            for slot in v.iter_mut() {
                *slot = (rest % (bound as usize + 1)) as u32;
                rest /= bound as usize + 1;
            }
            let s = ExpVec::new(v).unwrap();
            if !s.is_zero() && q.is_invariant(&s).unwrap() {
                all.push(s);
            }
        }
        let members: BTreeSet<_> = all.iter().cloned().collect();
        let mut sums = BTreeSet::new();
        for a in &all {
            for b in &all {
                let c = a.checked_add(b).unwrap();
                if members.contains(&c) {
                    sums.insert(c);
                }
            }
        }
        members.difference(&sums).cloned().collect()
    }

    #[test]
    fn surface_a1_basis() {
        let q = CyclicQuotientType::new(2, &[1, 1]).unwrap();
        let hb = invariant_monoid_basis(&q, 4).unwrap();
        assert!(hb.complete);
        assert_eq!(hb.elements, vec![ev![2, 0], ev![1, 1], ev![0, 2]]);
    }

    #[test]
    fn trivial_group_gives_unit_vectors() {
        let q = CyclicQuotientType::new(1, &[3, 4, 5]).unwrap();
        let hb = invariant_monoid_basis(&q, 1).unwrap();
        assert!(hb.complete);
        assert_eq!(set(&hb.elements), set(&[ev![1, 0, 0], ev![0, 1, 0], ev![0, 0, 1]]));
    }

    #[test]
    fn order_four_basis_matches_brute_force() {
        let q = CyclicQuotientType::new(4, &[1, 3]).unwrap();
        let hb = invariant_monoid_basis(&q, 8).unwrap();
        let oracle = brute_force_basis(&q, 8);
        assert_eq!(set(&hb.elements), oracle);
        assert_eq!(oracle, set(&[ev![4, 0], ev![0, 4], ev![1, 1]]));
    }

    #[test]
    fn matches_brute_force_on_small_groups() {
        for m in 1..=7u64 {
            for a in 0..m {
                for b in 0..m {
                    for c in [0, 1, m.saturating_sub(1)] {
                        let q = CyclicQuotientType::new(m, &[a, b, c]).unwrap();
                        let hb = invariant_monoid_basis(&q, m).unwrap();
                        assert_eq!(set(&hb.elements), brute_force_basis(&q, m as u32), "{q}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_bound_is_flagged_incomplete() {
        let q = CyclicQuotientType::new(5, &[1, 2]).unwrap();
        let hb = invariant_monoid_basis(&q, 3).unwrap();
        assert!(!hb.complete);
        assert!(hb.elements.iter().all(|s| s.total_degree() <= 3));
    }

    #[test]
    fn minimality_and_invariance() {
        let q = CyclicQuotientType::new(7, &[1, 3, 5]).unwrap();
        let hb = invariant_monoid_basis(&q, 7).unwrap();
        for s in &hb.elements {
            assert!(q.is_invariant(s).unwrap());
        }
        for a in &hb.elements {
            for b in &hb.elements {
                let sum = a.checked_add(b).unwrap();
                assert!(!hb.elements.contains(&sum));
            }
        }
    }

    #[test]
    fn a_n_relations() {
        let q = CyclicQuotientType::from_signed(2, &[1, -1]).unwrap();
        let rel = binomial_relation_2d(&q).unwrap();
        assert_eq!(
            (rel.x.clone(), rel.y.clone(), rel.z.clone()),
            (ev![2, 0], ev![0, 2], ev![1, 1])
        );
        assert_eq!((rel.alpha, rel.beta, rel.gamma), (1, 1, 2));

        let q6 = CyclicQuotientType::new(6, &[1, 5]).unwrap();
        let rel6 = binomial_relation_2d(&q6).unwrap();
        assert_eq!((rel6.alpha, rel6.beta, rel6.gamma), (1, 1, 6));
        assert_eq!(rel6.z, ev![1, 1]);
    }

    #[test]
    fn relation_with_unequal_exponents() {
        // 2 s_1 + s_2 = 0 mod 4: basis (2,0), (0,4), (1,2); (2,0)+(0,4) = 2(1,2).
        let q = CyclicQuotientType::new(4, &[2, 1]).unwrap();
        let rel = binomial_relation_2d(&q).unwrap();
        assert_eq!(rel.z, ev![1, 2]);
        assert_eq!((rel.alpha, rel.beta, rel.gamma), (1, 1, 2));
    }

    #[test]
    fn unsupported_shapes() {
        let smooth = CyclicQuotientType::new(1, &[1, 1]).unwrap();
        assert!(matches!(
            binomial_relation_2d(&smooth),
            Err(Error::UnsupportedShape(_))
        ));
        let three = CyclicQuotientType::new(3, &[1, 1]).unwrap();
        assert!(matches!(
            binomial_relation_2d(&three),
            Err(Error::UnsupportedShape(_))
        ));
        let solid = CyclicQuotientType::new(2, &[1, 1, 1]).unwrap();
        assert!(binomial_relation_2d(&solid).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let q = CyclicQuotientType::new(2, &[1, 1, 1, 1]).unwrap();
        assert!(matches!(
            invariant_monoid_basis(&q, 1_000_000),
            Err(Error::EnumerationLimit { .. })
        ));
    }
}
