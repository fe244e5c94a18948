//! Exhaustive checker for the monomial identities behind lifting a weighted
//! blow-up from a hyperplane section to the ambient space.
//!
//! With `b = M = lcm(sigma')` and `a_n = a M`, the sequence
//! `0 -> N((d-a)b) --x_n--> N(db) -> N'(db) -> 0` of numerator-form ideals
//! `N(t) = (x^s : sum s_j a_j >= t)` is checked monomial by monomial.

mod chain;

use rayon::prelude::*;
use serde::Serialize;

pub use chain::{chain_report, ChainReport, ChainStage};

use crate::arith::{lcm_of, minimalize, normalize_weights, visit_box};
use crate::limits::check_box;
use crate::wideal::threshold_generators;
use crate::{Error, ExpVec, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftInstance {
    /// Normalized to gcd 1.
    pub sigma_prime: Vec<u64>,
    /// `gcd` divided out of the requested `sigma'`.
    pub normalization_factor: u64,
    pub m: u64,
    pub a: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub a_n: u64,
    pub sigma: Vec<u64>,
    pub b: u64,
    /// Set when `a_n` was overridden and differs from `a M`.
    pub mutated: bool,
}

impl LiftInstance {
    pub fn new(sigma_prime: &[u64], m: u64, a: u64) -> Result<Self> {
        let (sigma_prime, normalization_factor) = normalize_weights(sigma_prime)?;
        if m == 0 {
            return Err(Error::InvalidInstance("group order m must be positive".into()));
        }
        if a == 0 {
            return Err(Error::InvalidInstance("a must be positive".into()));
        }
        let big_m = lcm_of(&sigma_prime)?;
        let a_n = a
            .checked_mul(big_m)
            .ok_or_else(|| Error::Overflow(format!("a_n = {a} * {big_m}")))?;
        let mut sigma = sigma_prime.clone();
        sigma.push(a_n);
        Ok(LiftInstance {
            sigma_prime,
            normalization_factor,
            m,
            a,
            big_m,
            a_n,
            sigma,
            b: big_m,
            mutated: false,
        })
    }

    /// Same instance with the last weight replaced.
    pub fn with_last_weight(&self, a_n: u64) -> Result<Self> {
        if a_n == 0 {
            return Err(Error::InvalidWeights("last weight must be positive".into()));
        }
        let mut out = self.clone();
        out.a_n = a_n;
        *out.sigma.last_mut().expect("nonempty") = a_n;
        out.mutated = a_n != self.a * self.big_m;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    fn level(&self, d: u64) -> Result<u128> {
        Ok(d as u128 * self.b as u128)
    }

    /// `(d - a) b`, or `None` for the unit ideal when `d <= a`.
    fn shifted_level(&self, d: u64) -> Option<u128> {
        (d > self.a).then(|| (d - self.a) as u128 * self.b as u128)
    }

    /// Sufficient box `s_i <= ceil(db / a_i) + 1`.
    pub fn box_bounds(&self, d: u64) -> Result<Vec<u32>> {
        let t = self.level(d)?;
        self.sigma
            .iter()
            .map(|&ai| {
                let v = t.div_ceil(ai as u128) + 1;
                u32::try_from(v).map_err(|_| Error::EnumerationLimit {
                    requested: v,
                    cap: crate::limits::max_enum(),
                })
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `s_n >= 1`: multiplication by `x_n`.
    Shift,
    /// `s_n = 0`: restriction to the hyperplane.
    Section,
    /// Minimal generator sets differ.
    Generators,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub d: u64,
    pub s: ExpVec,
    pub clause: Clause,
    pub explanation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub instance: LiftInstance,
    /// Inclusive.
    pub d_range: (u64, u64),
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub points_checked: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn report(inst: &LiftInstance, d_range: (u64, u64), cx: Option<Counterexample>, points: u64) -> CheckReport {
    CheckReport {
        instance: inst.clone(),
        d_range,
        status: if cx.is_some() { Status::Fail } else { Status::Pass },
        counterexample: cx,
        points_checked: points,
    }
}

fn check_d(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidInstance("degree d must be at least 1".into()));
    }
    Ok(())
}

/// Checks both clauses on every `s` of the sufficient box (enlarged to
/// `degree_bound` per coordinate when that is bigger).
///
/// Only the weight shell where the clauses are not trivially equivalent is
/// visited: for `s_n >= 1` both sides are true once `wt(s) >= db + a_n`, and
/// both are false below `min(db, (d-a)b + a_n)` when `d > a`.
pub fn verify_decomposition(inst: &LiftInstance, d: u64, degree_bound: Option<u32>) -> Result<CheckReport> {
    check_d(d)?;
    let mut bounds = inst.box_bounds(d)?;
    if let Some(extra) = degree_bound {
        for b in &mut bounds {
            *b = (*b).max(extra);
        }
    }
    check_box(&bounds)?;
    let n = inst.n();
    let t = inst.level(d)?;
    let shifted = inst.shifted_level(d);
    let a_n = inst.a_n as u128;
    let upper = t + a_n;
    let lower = match shifted {
        Some(ts) => t.min(ts + a_n),
        None => 0,
    };
    let head_weights = &inst.sigma[..n - 1];
    let last_bound = bounds[n - 1] as u128;

    let mut points = 0u64;
    let mut first: Option<Counterexample> = None;
    visit_box(&bounds[..n - 1], head_weights, upper, |head, w_head| {
        if first.is_some() {
            return;
        }
        let lo = if lower > w_head { (lower - w_head).div_ceil(a_n) } else { 0 };
        let hi = ((upper - w_head) / a_n).min(last_bound);
        for sn in lo..=hi {
            points += 1;
            let wt = w_head + sn * a_n;
            let lhs = wt >= t;
            let (rhs, clause) = if sn >= 1 {
                let below = wt - a_n;
                (shifted.is_none_or(|ts| below >= ts), Clause::Shift)
            } else {
                (w_head >= t, Clause::Section)
            };
            if lhs != rhs {
                let mut s = head.to_vec();
                s.push(sn as u32);
                let explanation = match clause {
                    Clause::Shift => format!(
                        "weight {wt} vs level {t} gives {lhs}, but s - e_n has weight {} against {} giving {rhs}",
                        wt - a_n,
                        shifted.map_or("the unit ideal".to_string(), |ts| ts.to_string()),
                    ),
                    _ => format!("weight {wt} vs level {t} gives {lhs}, section gives {rhs}"),
                };
                first = Some(Counterexample {
                    d,
                    s: ExpVec::new(s).expect("nonempty"),
                    clause,
                    explanation,
                });
                return;
            }
        }
    });
    Ok(report(inst, (d, d), first, points))
}

/// Runs [`verify_decomposition`] for `d = 1..=d_max` in parallel and reports
/// the smallest failing degree.
pub fn verify_decomposition_range(
    inst: &LiftInstance,
    d_max: u64,
    degree_bound: Option<u32>,
) -> Result<CheckReport> {
    check_d(d_max)?;
    let slices: Vec<CheckReport> = (1..=d_max)
        .into_par_iter()
        .map(|d| verify_decomposition(inst, d, degree_bound))
        .collect::<Result<_>>()?;
    let points = slices.iter().map(|r| r.points_checked).sum();
    let cx = slices.into_iter().find_map(|r| r.counterexample);
    Ok(report(inst, (1, d_max), cx, points))
}

/// Compares the minimal generators of `N(db)` with those of
/// `x_n N((d-a)b) + N'(db)`.
pub fn verify_generator_lift(inst: &LiftInstance, d: u64) -> Result<CheckReport> {
    check_d(d)?;
    let n = inst.n();
    let t = inst.level(d)?;
    let direct = threshold_generators(&inst.sigma, t)?;
    let shifted = threshold_generators(&inst.sigma, inst.shifted_level(d).unwrap_or(0))?;
    let section = threshold_generators(&inst.sigma_prime, t)?;
    let mut combined: Vec<ExpVec> = Vec::with_capacity(shifted.len() + section.len());
    for g in &shifted {
        combined.push(g.checked_add(&ExpVec::unit(n, n - 1))?);
    }
    for g in &section {
        combined.push(g.with_appended(0));
    }
    let mut lifted = minimalize(combined);
    let mut direct_sorted = minimalize(direct);
    lifted.sort();
    direct_sorted.sort();
    let points = (direct_sorted.len() + lifted.len()) as u64;
    let cx = if lifted == direct_sorted {
        None
    } else {
        let missing = direct_sorted.iter().find(|g| !lifted.contains(g));
        let extra = lifted.iter().find(|g| !direct_sorted.contains(g));
        let (s, explanation) = match (missing, extra) {
            (Some(g), _) => (g.clone(), format!("{g} generates N({t}) but not the lifted ideal")),
            (None, Some(g)) => (g.clone(), format!("{g} generates the lifted ideal but not N({t})")),
            (None, None) => unreachable!("sets differ"),
        };
        Some(Counterexample {
            d,
            s,
            clause: Clause::Generators,
            explanation,
        })
    };
    Ok(report(inst, (d, d), cx, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::dot;
    use crate::ev;
    use std::collections::BTreeSet;

    /// Tests membership over the whole box directly from the definition.
    fn brute_force(inst: &LiftInstance, d: u64) -> bool {
        let bounds = inst.box_bounds(d).unwrap();
        let t = d as u128 * inst.b as u128;
        let ts = d as i128 - inst.a as i128;
        let ts = ts * inst.b as i128;
        let n = inst.n();
        let mut ok = true;
        visit_box(&bounds, &inst.sigma, u128::MAX, |s, wt| {
            let lhs = wt >= t;
            let rhs = if s[n - 1] >= 1 {
                (wt - inst.a_n as u128) as i128 >= ts
            } else {
                dot(&s[..n - 1], &inst.sigma_prime) >= t
            };
            ok &= lhs == rhs;
        });
        ok
    }

    #[test]
    fn instance_fields() {
        let i = LiftInstance::new(&[1, 1], 1, 1).unwrap();
        assert_eq!((i.sigma.clone(), i.b, i.a_n), (vec![1, 1, 1], 1, 1));
        let i = LiftInstance::new(&[1, 2], 1, 1).unwrap();
        assert_eq!((i.big_m, i.a_n, i.sigma.clone(), i.b), (2, 2, vec![1, 2, 2], 2));
        let i = LiftInstance::new(&[2, 3], 1, 2).unwrap();
        assert_eq!((i.big_m, i.a_n, i.sigma.clone(), i.b), (6, 12, vec![2, 3, 12], 6));
        let i = LiftInstance::new(&[4, 6], 3, 1).unwrap();
        assert_eq!((i.sigma_prime.clone(), i.normalization_factor), (vec![2, 3], 2));
        assert!(matches!(LiftInstance::new(&[0, 1], 1, 1), Err(Error::InvalidWeights(_))));
        assert!(LiftInstance::new(&[1, 1], 1, 0).is_err());
        assert!(LiftInstance::new(&[1, 1], 0, 1).is_err());
    }

    #[test]
    fn ordinary_and_small_instances_pass() {
        let i = LiftInstance::new(&[1, 1], 1, 1).unwrap();
        assert!(verify_decomposition(&i, 3, None).unwrap().passed());
        let j = LiftInstance::new(&[1, 2], 1, 1).unwrap();
        let r = verify_decomposition_range(&j, 5, None).unwrap();
        assert!(r.passed());
        assert_eq!(r.d_range, (1, 5));
        assert!(r.points_checked > 0);
        assert!(verify_decomposition(&j, 1, Some(20)).unwrap().passed());
    }

    #[test]
    fn mutation_is_caught_with_witness() {
        let inst = LiftInstance::new(&[1, 2], 1, 1).unwrap();
        let bad = inst.with_last_weight(inst.a_n + 1).unwrap();
        assert!(bad.mutated);
        let r = verify_decomposition_range(&bad, 3, None).unwrap();
        assert_eq!(r.status, Status::Fail);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.clause, Clause::Shift);
        assert_eq!(cx.s.get(2), 1);
        // raising a_n by 1 leaves exactly one bad weight, wt(s) = db
        let wt: u128 = dot(cx.s.entries(), &bad.sigma);
        assert_eq!((cx.d, wt), (2, 4));

        // lowering a_n by 1 leaves exactly wt(s) = db - 1
        let lower = inst.with_last_weight(inst.a_n - 1).unwrap();
        let cx = verify_decomposition_range(&lower, 3, None).unwrap().counterexample.unwrap();
        let wt: u128 = dot(cx.s.entries(), &lower.sigma);
        assert_eq!(cx.s.get(2), 1);
        let db = cx.d as u128 * lower.b as u128;
        assert_eq!(wt, db - 1);
        assert!(inst.with_last_weight(0).is_err());
        assert!(!inst.with_last_weight(inst.a_n).unwrap().mutated);
    }

    #[test]
    fn generator_lift_examples() {
        let i = LiftInstance::new(&[1, 1], 1, 1).unwrap();
        assert!(verify_generator_lift(&i, 2).unwrap().passed());
        let gens: BTreeSet<ExpVec> = threshold_generators(&i.sigma, 2).unwrap().into_iter().collect();
        let expect: BTreeSet<ExpVec> = [ev![2, 0, 0], ev![1, 1, 0], ev![0, 2, 0], ev![1, 0, 1], ev![0, 1, 1], ev![0, 0, 2]]
            .into_iter()
            .collect();
        assert_eq!(gens, expect);
        let j = LiftInstance::new(&[1, 2], 1, 1).unwrap();
        assert!(verify_generator_lift(&j, 1).unwrap().passed());
        let k = LiftInstance::new(&[2, 3], 1, 3).unwrap();
        for d in 1..=3 {
            assert!(verify_generator_lift(&k, d).unwrap().passed());
        }
        assert!(verify_decomposition(&k, 0, None).is_err());
    }

    #[test]
    fn shell_pruning_matches_full_box() {
        for sp in [vec![1u64, 1], vec![1, 2], vec![2, 3], vec![1, 2, 3], vec![3, 4, 5]] {
            for a in 1..=3 {
                let inst = LiftInstance::new(&sp, 1, a).unwrap();
                let mutants = [inst.a_n + 1, inst.a_n + 2, inst.a_n.saturating_sub(1).max(1), inst.a_n]
                    .map(|v| inst.with_last_weight(v).unwrap());
                for m in mutants.iter().chain([&inst]) {
                    for d in 1..=5 {
                        let fast = verify_decomposition(m, d, None).unwrap().passed();
                        assert_eq!(fast, brute_force(m, d), "{:?} d={d}", m.sigma);
                        let gens = verify_generator_lift(m, d).unwrap().passed();
                        assert_eq!(fast, gens, "{:?} d={d}", m.sigma);
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let inst = LiftInstance::new(&[1, 1, 1], 1, 1).unwrap();
        assert!(matches!(
            verify_decomposition(&inst, 1, Some(100_000)),
            Err(Error::EnumerationLimit { .. })
        ));
    }
}
