//! Exceptional divisor data and the monomial form of `pi_* O(-aE) = I(a)`.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::chart::chart;
use crate::limits::check_box;
use crate::quotient::semi_invariant_class;
use crate::wideal::{ideal_generators, sigma_wt_poly, WeightedIdeal};
use crate::{Error, ExpVec, Polynomial, Rat, Result, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalInfo {
    pub lcm: u64,
    pub m: u64,
    pub exceptional: String,
    pub cartier_generator: String,
    pub restriction_rule: String,
    /// Product of the weights, as a decimal string.
    pub weight_product: String,
    /// Recorded, never computed.
    pub vanishing_fact: String,
}

impl ExceptionalInfo {
    pub fn weight_product(&self) -> BigUint {
        self.weight_product.parse().expect("decimal string")
    }

    /// Degree `m a` of `O(-aE)|_E` on the weighted projective space, defined
    /// for `a` divisible by the product of the weights.
    pub fn restriction(&self, a: u64) -> Result<u128> {
        if BigUint::from(a) % self.weight_product() != BigUint::from(0u32) {
            return Err(Error::OutOfDomain(format!(
                "restriction is recorded only for a divisible by {}, got {a}",
                self.weight_product
            )));
        }
        Ok(self.m as u128 * a as u128)
    }

    pub fn restriction_descriptor(&self, a: u64) -> Result<String> {
        Ok(format!("O_P({})", self.restriction(a)?))
    }
}

pub fn exceptional_info(w: &WeightSystem) -> ExceptionalInfo {
    let list = w
        .sigma()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let product: BigUint = w.sigma().iter().map(|&a| BigUint::from(a)).product();
    let lcm = w.lcm();
    ExceptionalInfo {
        lcm,
        m: w.m(),
        exceptional: format!("E = P({list})"),
        cartier_generator: if lcm == 1 {
            "H = -E".to_string()
        } else {
            format!("H = -{lcm}E")
        },
        restriction_rule: format!("O(-aE)|E = O_P({}a) for a divisible by {product}", w.m()),
        weight_product: product.to_string(),
        vanishing_fact: "R^j pi_* O(iL) = 0 for j > 0 and every integer i".to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardLevel {
    pub a: u64,
    /// `pi_* O(-aE)`.
    pub ideal: WeightedIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardDecomposition {
    /// Multiplicity of `E` in the pullback of `(f = 0)`.
    pub multiplicity: Rat,
    pub class: u64,
    pub levels: Vec<PushforwardLevel>,
}

pub fn pushforward_decomposition(
    f: &Polynomial,
    w: &WeightSystem,
    a_max: u64,
) -> Result<PushforwardDecomposition> {
    if f.is_zero() {
        return Err(Error::UndefinedWeight);
    }
    let class = semi_invariant_class(f, &w.quotient_type())?;
    let multiplicity = sigma_wt_poly(f, w)?;
    let levels = (0..=a_max)
        .map(|a| {
            Ok(PushforwardLevel {
                a,
                ideal: ideal_generators(w, &Rat::from(a))?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PushforwardDecomposition {
        multiplicity,
        class,
        levels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushforwardCheck {
    pub a: u64,
    /// Box bounds `ceil(a m / a_i) + 1`.
    pub bounds: Vec<u32>,
    pub points: u64,
    pub members: u64,
    /// First monomial where the two memberships differ.
    pub mismatch: Option<ExpVec>,
}

impl PushforwardCheck {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares, on every monomial of the box `s_i <= ceil(a m / a_i) + 1`, the
/// condition "`x^s` vanishes to order `>= a` along `E` in every chart" with
/// membership in the ideal generated by `ideal_generators(w, a)`.
pub fn pushforward_monomial_check(w: &WeightSystem, a: u64) -> Result<PushforwardCheck> {
    let n = w.n();
    let ideal = ideal_generators(w, &Rat::from(a))?;
    let bounds: Vec<u32> = w
        .sigma()
        .iter()
        .map(|&ai| {
            let b = (ideal.threshold).div_ceil(ai as u128) + 1;
            u32::try_from(b).map_err(|_| Error::EnumerationLimit {
                requested: b,
                cap: crate::limits::max_enum(),
            })
        })
        .collect::<Result<_>>()?;
    check_box(&bounds)?;

    let charts: Vec<(Vec<u128>, u128)> = (1..=n)
        .map(|i| chart(w, i).map(|c| c.e_order_scaled()))
        .collect::<Result<_>>()?;

    // mixed radix, last coordinate fastest: lexicographic order
    let mut strides = vec![1usize; n];
    for j in (0..n.saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * (bounds[j + 1] as usize + 1);
    }
    let total = strides[0] * (bounds[0] as usize + 1);
    let flat = |s: &[u32]| s.iter().zip(&strides).map(|(&e, &st)| e as usize * st).sum::<usize>();
    let gens: HashSet<usize> = ideal.gens.iter().map(|g| flat(g.entries())).collect();

    let mut closure = vec![false; total];
    let mut s = vec![0u32; n];
    let mut members = 0u64;
    let mut mismatch = None;
    for idx in 0..total {
        let generated = gens.contains(&idx)
            || (0..n).any(|j| s[j] > 0 && closure[idx - strides[j]]);
        closure[idx] = generated;

        let mut chart_member = None;
        for (i, (nums, den)) in charts.iter().enumerate() {
            let num: u128 = s.iter().zip(nums).map(|(&e, &c)| e as u128 * c).sum();
            let here = num >= a as u128 * den;
            match chart_member {
                None => chart_member = Some(here),
                Some(prev) if prev != here => {
                    return Err(Error::Consistency(format!(
                        "charts 1 and {} disagree on the E-order of {:?}",
                        i + 1,
                        s
                    )));
                }
                _ => {}
            }
        }
        let chart_member = chart_member.expect("at least one chart");
        if chart_member {
            members += 1;
        }
        if chart_member != generated && mismatch.is_none() {
            mismatch = Some(ExpVec::new(s.clone())?);
        }

        let mut k = n;
        while k > 0 {
            k -= 1;
            if s[k] < bounds[k] {
                s[k] += 1;
                break;
            }
            s[k] = 0;
        }
    }
    Ok(PushforwardCheck {
        a,
        bounds,
        points: total as u64,
        members,
        mismatch,
    })
}
