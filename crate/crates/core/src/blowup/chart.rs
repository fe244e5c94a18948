//! Affine charts of the weighted blow-up.
//!
//! In chart `i` the blow-up is `x_j = xb_j * xb_i^{a_j/m}` for `j != i` and
//! `x_i = xb_i^{a_i/m}`, on the quotient `1/a_i(-a_1, ..., m, ..., -a_n)`.
//! The exceptional divisor is `xb_i = 0`. Fractional exponents are kept as
//! exact formal rationals.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::lattice::{inverse, row_times};
use crate::quotient::{semi_invariant_class, write_coefficient_and_body, CyclicQuotientType};
use crate::wideal::sigma_wt_poly;
use crate::{Error, ExpVec, Polynomial, Rat, Result, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    /// 1-based.
    pub index: usize,
    pub quotient_type: CyclicQuotientType,
    /// `substitution[j][k]` is the exponent of `xb_k` in the image of `x_j`.
    pub substitution: Vec<Vec<Rat>>,
}

pub(crate) fn check_index(w: &WeightSystem, i: usize) -> Result<()> {
    if i == 0 || i > w.n() {
        return Err(Error::IndexOutOfRange { index: i, n: w.n() });
    }
    Ok(())
}

pub fn chart(w: &WeightSystem, i: usize) -> Result<Chart> {
    check_index(w, i)?;
    let n = w.n();
    let c = i - 1;
    let sigma = w.sigma();
    let order = sigma[c];
    let weights: Vec<u64> = (0..n)
        .map(|j| {
            if j == c {
                w.m() % order
            } else {
                (order - sigma[j] % order) % order
            }
        })
        .collect();
    let substitution = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    if k == c {
                        Rat::ratio(sigma[j], w.m())
                    } else if k == j {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(Chart {
        index: i,
        quotient_type: CyclicQuotientType::new(order, &weights)?,
        substitution,
    })
}

impl Chart {
    pub fn n(&self) -> usize {
        self.substitution.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.quotient_type.order() == 1
    }

    /// Exponents of the image of `x^s` in the barred variables.
    pub fn map_exponents(&self, s: &ExpVec) -> Result<Vec<Rat>> {
        if s.len() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: s.len(),
            });
        }
        let x: Vec<Rat> = s.entries().iter().map(|&e| Rat::from(e)).collect();
        Ok(row_times(&x, &self.substitution))
    }

    /// Order of vanishing of `x^s` along `xb_i = 0`.
    pub fn e_order(&self, s: &ExpVec) -> Result<Rat> {
        Ok(self.map_exponents(s)?.swap_remove(self.index - 1))
    }

    /// Column `i` of the substitution over a common denominator, for fast
    /// exact evaluation of [`Chart::e_order`] in bulk.
    pub fn e_order_scaled(&self) -> (Vec<u128>, u128) {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let col: Vec<&Rat> = self.substitution.iter().map(|r| &r[self.index - 1]).collect();
        let den = col
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, r| acc.lcm(r.denom()));
        let nums = col
            .iter()
            .map(|r| (r.numer() * (&den / r.denom())).to_u128().expect("non-negative"))
            .collect();
        (nums, den.to_u128().expect("positive"))
    }

    /// Inverse of [`Chart::map_exponents`]; errors when the barred monomial is
    /// not the image of a polynomial monomial.
    pub fn pull_back(&self, t: &[Rat]) -> Result<ExpVec> {
        let inv = inverse(&self.substitution)
            .ok_or_else(|| Error::Consistency("chart substitution is singular".into()))?;
        let s = row_times(t, &inv);
        let mut out = Vec::with_capacity(s.len());
        for e in s {
            if !e.is_integer() || e.is_negative() {
                return Err(Error::OutOfDomain(format!(
                    "barred exponents {t:?} do not come from a monomial"
                )));
            }
            out.push(u32::try_from(e.numer()).map_err(|_| Error::Overflow("exponent".into()))?);
        }
        ExpVec::new(out)
    }

    pub fn substitute(&self, f: &Polynomial) -> Result<ChartPolynomial> {
        let mut terms = BTreeMap::new();
        for (s, c) in f.terms() {
            // the map on exponents is injective, so no two terms collide
            terms.insert(self.map_exponents(s)?, c.clone());
        }
        Ok(ChartPolynomial {
            chart: self.index,
            terms,
        })
    }
}

/// Polynomial in the barred variables of one chart, with rational exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartPolynomial {
    pub chart: usize,
    #[serde(serialize_with = "serialize_terms")]
    pub terms: BTreeMap<Vec<Rat>, Rat>,
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<Vec<Rat>, Rat>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Term<'a> {
        exponents: &'a [Rat],
        coefficient: &'a Rat,
    }
    let mut seq = serializer.serialize_seq(Some(terms.len()))?;
    for (exponents, coefficient) in terms.iter().rev() {
        seq.serialize_element(&Term {
            exponents,
            coefficient,
        })?;
    }
    seq.end()
}

impl ChartPolynomial {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent of the exceptional variable over all terms.
    pub fn min_e_exponent(&self) -> Option<Rat> {
        let c = self.chart - 1;
        self.terms.keys().map(|t| &t[c]).min().cloned()
    }

    fn shifted(&self, by: &Rat) -> ChartPolynomial {
        let c = self.chart - 1;
        let terms = self
            .terms
            .iter()
            .map(|(t, coeff)| {
                let mut t = t.clone();
                t[c] = &t[c] + by;
                (t, coeff.clone())
            })
            .collect();
        ChartPolynomial {
            chart: self.chart,
            terms,
        }
    }

    /// Terms with zero exponent on the exceptional variable.
    pub fn restrict_to_exceptional(&self) -> ChartPolynomial {
        let c = self.chart - 1;
        ChartPolynomial {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t[c].is_zero())
                .map(|(t, coeff)| (t.clone(), coeff.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for ChartPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (t, c)) in self.terms.iter().rev().enumerate() {
            let mut body = String::new();
            for (k, e) in t.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if !body.is_empty() {
                    body.push('*');
                }
                body.push_str(&format!("xb{}", k + 1));
                if *e != Rat::one() {
                    if e.is_integer() {
                        body.push_str(&format!("^{e}"));
                    } else {
                        body.push_str(&format!("^({e})"));
                    }
                }
            }
            write_coefficient_and_body(f, c, idx == 0, &body)?;
        }
        Ok(())
    }
}

/// Order of `f` along the exceptional divisor read off in chart `via_chart`.
///
/// The result is checked against `sigma_wt_poly`; a mismatch is reported as a
/// consistency failure.
pub fn valuation_ord_e(f: &Polynomial, w: &WeightSystem, via_chart: usize) -> Result<Rat> {
    if f.is_zero() {
        return Err(Error::UndefinedWeight);
    }
    let ch = chart(w, via_chart)?;
    let order = ch
        .substitute(f)?
        .min_e_exponent()
        .ok_or(Error::UndefinedWeight)?;
    let weight = sigma_wt_poly(f, w)?;
    if order != weight {
        return Err(Error::Consistency(format!(
            "chart {via_chart} gives order {order} for {f}, weight is {weight}"
        )));
    }
    Ok(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictTransform {
    pub chart: usize,
    /// Power of `xb_i` factored out: the weight of `g`.
    pub multiplicity: Rat,
    /// Equation of the strict transform; its minimal `xb_i` exponent is 0.
    pub residual: ChartPolynomial,
    /// Residual restricted to `xb_i = 0`.
    pub exceptional_equation: ChartPolynomial,
}

impl StrictTransform {
    /// Multiplies the factor back and inverts the substitution.
    pub fn recover(&self, ch: &Chart) -> Result<Polynomial> {
        let total = self.residual.shifted(&self.multiplicity);
        let mut out = Polynomial::zero(ch.n());
        for (t, c) in &total.terms {
            out.add_term(ch.pull_back(t)?, c.clone())?;
        }
        Ok(out)
    }
}

pub fn strict_transform_in_chart(g: &Polynomial, w: &WeightSystem, i: usize) -> Result<StrictTransform> {
    if g.is_zero() {
        return Err(Error::UndefinedWeight);
    }
    semi_invariant_class(g, &w.quotient_type())?;
    let ch = chart(w, i)?;
    let image = ch.substitute(g)?;
    let multiplicity = image.min_e_exponent().ok_or(Error::UndefinedWeight)?;
    let weight = sigma_wt_poly(g, w)?;
    if multiplicity != weight {
        return Err(Error::Consistency(format!(
            "chart {i} factors out {multiplicity} from {g}, weight is {weight}"
        )));
    }
    let residual = image.shifted(&-&multiplicity);
    Ok(StrictTransform {
        chart: i,
        exceptional_equation: residual.restrict_to_exceptional(),
        residual,
        multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ev;
    use crate::notation::parse_polynomial;

    fn ws(sigma: &[u64], m: u64) -> WeightSystem {
        WeightSystem::new(sigma, m).unwrap()
    }

    #[test]
    fn ordinary_blowup_chart() {
        let w = ws(&[1, 1, 1], 1);
        for i in 1..=3 {
            let ch = chart(&w, i).unwrap();
            assert!(ch.is_smooth());
            assert_eq!(ch.quotient_type.order(), 1);
            // x_j = xb_j xb_i
            let img = ch.map_exponents(&ExpVec::unit(3, i % 3)).unwrap();
            let mut expect = vec![Rat::zero(); 3];
            expect[i % 3] = Rat::one();
            expect[i - 1] = Rat::one();
            assert_eq!(img, expect);
        }
    }

    #[test]
    fn chart_types() {
        let w = ws(&[1, 2, 3], 1);
        assert_eq!(chart(&w, 2).unwrap().quotient_type.to_string(), "1/2(1,1,1)");
        assert_eq!(chart(&w, 3).unwrap().quotient_type.to_string(), "1/3(2,1,1)");
        assert_eq!(chart(&w, 1).unwrap().quotient_type.to_string(), "1/1(0,0,0)");
        let w5 = ws(&[2, 3], 5);
        assert_eq!(chart(&w5, 1).unwrap().quotient_type.to_string(), "1/2(1,1)");
        assert!(matches!(chart(&w5, 3), Err(Error::IndexOutOfRange { .. })));
        assert!(chart(&w5, 0).is_err());
    }

    #[test]
    fn valuations_agree_with_weights() {
        let w = ws(&[2, 3], 1);
        let f = parse_polynomial("x1^2*x2", 2).unwrap();
        for i in 1..=2 {
            assert_eq!(valuation_ord_e(&f, &w, i).unwrap(), Rat::from(7));
        }
        let w3 = ws(&[1, 2, 1], 3);
        let g = parse_polynomial("x1*x2 + x3^3", 3).unwrap();
        for i in 1..=3 {
            assert_eq!(valuation_ord_e(&g, &w3, i).unwrap(), Rat::one());
        }
        let coord = ws(&[3, 5, 7], 4);
        for j in 0..3 {
            let x = Polynomial::variable(3, j);
            for i in 1..=3 {
                assert_eq!(
                    valuation_ord_e(&x, &coord, i).unwrap(),
                    Rat::ratio(coord.sigma()[j], 4)
                );
            }
        }
        assert_eq!(
            valuation_ord_e(&Polynomial::zero(2), &w, 1),
            Err(Error::UndefinedWeight)
        );
    }

    #[test]
    fn node_strict_transform() {
        let w = ws(&[1, 1], 1);
        let g = parse_polynomial("x1^2 + x2^2", 2).unwrap();
        let st = strict_transform_in_chart(&g, &w, 1).unwrap();
        assert_eq!(st.multiplicity, Rat::from(2));
        assert_eq!(st.residual.to_string(), "xb2^2+1");
        assert_eq!(st.exceptional_equation.to_string(), "xb2^2+1");
        let ch = chart(&w, 1).unwrap();
        assert_eq!(st.recover(&ch).unwrap(), g);
    }

    #[test]
    fn monomial_strict_transform_is_a_unit_times_monomial() {
        let w = ws(&[2, 3, 5], 7);
        let g = parse_polynomial("4*x1^3*x3", 3).unwrap();
        for i in 1..=3 {
            let st = strict_transform_in_chart(&g, &w, i).unwrap();
            assert_eq!(st.residual.terms.len(), 1);
            let (t, c) = st.residual.terms.iter().next().unwrap();
            assert!(t[i - 1].is_zero());
            assert_eq!(c, &Rat::from(4));
        }
    }

    #[test]
    fn hypersurface_strict_transform_has_weight_zero_term() {
        // xy + z^3 + t^2 on 1/3(1,2,1,0)-like weights (1, 2, 1, 3) with m = 3
        let w = ws(&[1, 2, 1, 3], 3);
        let g = parse_polynomial("x1*x2 + x3^3 + x4^2", 4).unwrap();
        let st = strict_transform_in_chart(&g, &w, 3).unwrap();
        assert_eq!(st.multiplicity, Rat::one());
        assert!(!st.exceptional_equation.is_zero());
        assert_eq!(st.residual.min_e_exponent(), Some(Rat::zero()));
        assert_eq!(st.recover(&chart(&w, 3).unwrap()).unwrap(), g);
    }

    #[test]
    fn non_invariant_rejected() {
        let w = ws(&[1, 2], 3);
        let g = parse_polynomial("x1 + x2", 2).unwrap();
        assert!(matches!(
            strict_transform_in_chart(&g, &w, 1),
            Err(Error::NotSemiInvariant { .. })
        ));
    }

    #[test]
    fn pull_back_rejects_non_images() {
        let w = ws(&[1, 2], 3);
        let ch = chart(&w, 2).unwrap();
        let img = ch.map_exponents(&ev![2, 5]).unwrap();
        assert_eq!(ch.pull_back(&img).unwrap(), ev![2, 5]);
        assert!(ch.pull_back(&[Rat::one(), Rat::zero()]).is_err());
    }

    #[test]
    fn scaled_order_matches_rational_order() {
        let w = ws(&[3, 4, 5], 7);
        for i in 1..=3 {
            let ch = chart(&w, i).unwrap();
            let (nums, den) = ch.e_order_scaled();
            let s = ev![2, 0, 3];
            let fast = Rat::ratio(crate::arith::dot(s.entries(), &nums.iter().map(|&x| x as u64).collect::<Vec<_>>()), den as u64);
            assert_eq!(fast, ch.e_order(&s).unwrap());
        }
    }
}
