use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponent vector `(s_1, ..., s_n)` of the monomial `x_1^{s_1} ... x_n^{s_n}`.
///
/// The length is fixed at construction and is at least one. Operations that
/// combine two vectors reject mismatched lengths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ExpVec(Vec<u32>);

impl ExpVec {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        Ok(ExpVec(entries))
    }

    /// The unit monomial in `n >= 1` variables.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "exponent vectors have at least one coordinate");
        ExpVec(vec![0; n])
    }

    /// `e_i` for a 0-based coordinate `i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn same_len(&self, other: &ExpVec) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    /// Entrywise `self <= other`, i.e. the monomial `self` divides `other`.
    pub fn divides(&self, other: &ExpVec) -> Result<bool> {
        self.same_len(other)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &ExpVec) -> Result<ExpVec> {
        self.same_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExpVec)
            .ok_or_else(|| Error::Overflow("exponent exceeds u32".into()))
    }

    /// `self - other`, or `None` when `other` does not divide `self`.
    pub fn checked_sub(&self, other: &ExpVec) -> Result<Option<ExpVec>> {
        self.same_len(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExpVec))
    }

    /// `sum s_i w_i`. Exact: `u64 * u32` products summed in `u128`.
    pub fn weighted_sum(&self, weights: &[u64]) -> Result<u128> {
        if weights.len() != self.len() {
            return Err(Error::Dimension {
                expected: weights.len(),
                found: self.len(),
            });
        }
        Ok(dot(&self.0, weights))
    }

    /// Copy with coordinate `i` (0-based) removed.
    pub fn without(&self, i: usize) -> Result<ExpVec> {
        let mut v = self.0.clone();
        if i >= v.len() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                n: v.len(),
            });
        }
        v.remove(i);
        ExpVec::new(v)
    }

    /// Copy with `value` appended as a new last coordinate.
    pub fn with_appended(&self, value: u32) -> ExpVec {
        let mut v = self.0.clone();
        v.push(value);
        ExpVec(v)
    }
}

pub(crate) fn dot(exps: &[u32], weights: &[u64]) -> u128 {
    exps.iter()
        .zip(weights)
        .map(|(&s, &a)| s as u128 * a as u128)
        .sum()
}

impl TryFrom<Vec<u32>> for ExpVec {
    type Error = Error;
    fn try_from(value: Vec<u32>) -> Result<Self> {
        ExpVec::new(value)
    }
}

impl From<ExpVec> for Vec<u32> {
    fn from(value: ExpVec) -> Self {
        value.0
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building exponent vectors in tests and examples.
#[macro_export]
macro_rules! ev {
    ($($e:expr),+ $(,)?) => {
        $crate::ExpVec::new(vec![$($e as u32),+]).unwrap()
    };
}
