//! Cyclic quotient and hyperquotient singularity types.

mod action;
mod monoid;
mod poly;

use std::fmt;

use serde::Serialize;

pub use action::{action_lift_check, ActionLiftReport};
pub use monoid::{binomial_relation_2d, invariant_monoid_basis, BinomialRelation, HilbertBasis};
pub(crate) use poly::write_coefficient_and_body;
pub use poly::Polynomial;

use crate::{Error, ExpVec, Result};

/// `1/m(a_1, ..., a_n)`: affine n-space modulo the diagonal action of the
/// cyclic group of order `m` with the given weights.
///
/// Weights are stored reduced into `[0, m)`, so `1/3(1,-1)` and `1/3(1,2)`
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicQuotientType {
    m: u64,
    weights: Vec<u64>,
}

impl CyclicQuotientType {
    pub fn new(m: u64, weights: &[u64]) -> Result<Self> {
        Self::check_shape(m, weights.len())?;
        Ok(CyclicQuotientType {
            m,
            weights: weights.iter().map(|w| w % m).collect(),
        })
    }

    /// Accepts negative weights, e.g. `1/r(a, -a, 1)`.
    pub fn from_signed(m: u64, weights: &[i64]) -> Result<Self> {
        Self::check_shape(m, weights.len())?;
        Ok(CyclicQuotientType {
            m,
            weights: weights.iter().map(|&w| reduce_signed(w, m)).collect(),
        })
    }

    fn check_shape(m: u64, n: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidWeights("group order must be positive".into()));
        }
        if n == 0 {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_smooth_presentation(&self) -> bool {
        self.m == 1
    }

    /// Character of the monomial `x^s`: `sum s_i a_i mod m`.
    pub fn monomial_class(&self, s: &ExpVec) -> Result<u64> {
        Ok((s.weighted_sum(&self.weights)? % self.m as u128) as u64)
    }

    pub fn is_invariant(&self, s: &ExpVec) -> Result<bool> {
        Ok(self.monomial_class(s)? == 0)
    }
}

pub(crate) fn reduce_signed(w: i64, m: u64) -> u64 {
    (w as i128).rem_euclid(m as i128) as u64
}

impl fmt::Display for CyclicQuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(", self.m)?;
        write_list(f, &self.weights)?;
        write!(f, ")")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    for (i, w) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

/// `1/m(a_0, ..., a_n; e)` together with the defining equation `g`.
///
/// `g` must be semi-invariant of class `e`; this is checked on construction.
/// `g = 0` stands for the ambient cyclic quotient itself and forces `e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperquotientType {
    ambient: CyclicQuotientType,
    g: Polynomial,
    e: u64,
}

impl HyperquotientType {
    /// When `e` is `None` the class is computed from `g`.
    pub fn new(ambient: CyclicQuotientType, g: Polynomial, e: Option<u64>) -> Result<Self> {
        if g.nvars() != ambient.dim() {
            return Err(Error::Dimension {
                expected: ambient.dim(),
                found: g.nvars(),
            });
        }
        let class = if g.is_zero() {
            0
        } else {
            semi_invariant_class(&g, &ambient)?
        };
        if let Some(given) = e {
            let given = given % ambient.order();
            if given != class {
                return Err(Error::InvalidInstance(format!(
                    "equation {g} has class {class} mod {}, not the declared {given}",
                    ambient.order()
                )));
            }
        }
        Ok(HyperquotientType {
            ambient,
            g,
            e: class,
        })
    }

    pub fn ambient(&self) -> &CyclicQuotientType {
        &self.ambient
    }

    pub fn equation(&self) -> &Polynomial {
        &self.g
    }

    pub fn eigenvalue_class(&self) -> u64 {
        self.e
    }
}

impl fmt::Display for HyperquotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(", self.ambient.m)?;
        write_list(f, &self.ambient.weights)?;
        write!(f, ";{}){{g={}}}", self.e, self.g)
    }
}

/// Either kind of singularity the notation can describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Singularity {
    Cyclic(CyclicQuotientType),
    Hyper(HyperquotientType),
}

impl Singularity {
    pub fn ambient(&self) -> &CyclicQuotientType {
        match self {
            Singularity::Cyclic(q) => q,
            Singularity::Hyper(h) => h.ambient(),
        }
    }
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Cyclic(q) => q.fmt(f),
            Singularity::Hyper(h) => h.fmt(f),
        }
    }
}

/// The class `e` with `sum s_i a_i = e (mod m)` for every monomial of `g`.
pub fn semi_invariant_class(g: &Polynomial, q: &CyclicQuotientType) -> Result<u64> {
    if g.nvars() != q.dim() {
        return Err(Error::Dimension {
            expected: q.dim(),
            found: g.nvars(),
        });
    }
    let mut first: Option<(&ExpVec, u64)> = None;
    for s in g.support() {
        let class = q.monomial_class(s)?;
        match first {
            None => first = Some((s, class)),
            Some((t, c)) if c != class => {
                return Err(Error::NotSemiInvariant {
                    m: q.order(),
                    first: monomial_string(t),
                    first_class: c,
                    second: monomial_string(s),
                    second_class: class,
                });
            }
            Some(_) => {}
        }
    }
    first.map(|(_, c)| c).ok_or(Error::UndefinedWeight)
}

fn monomial_string(s: &ExpVec) -> String {
    Polynomial::monomial(s.clone(), crate::Rat::one()).to_string()
}

/// Drops coordinate `i` (1-based): the type of the hyperplane `x_i = 0`.
pub fn section_type(q: &CyclicQuotientType, i: usize) -> Result<CyclicQuotientType> {
    let n = q.dim();
    if n < 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: n,
        });
    }
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let mut weights = q.weights.clone();
    weights.remove(i - 1);
    CyclicQuotientType::new(q.m, &weights)
}

/// Appends `a_n mod m` as a last weight.
pub fn lift_type(q: &CyclicQuotientType, a_n: i64) -> CyclicQuotientType {
    let mut weights = q.weights.clone();
    weights.push(reduce_signed(a_n, q.m));
    CyclicQuotientType { m: q.m, weights }
}
