use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, ExpVec, Rat, Result};

/// Sparse polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored and every exponent vector has length
/// `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<ExpVec, Rat>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "polynomials have at least one variable");
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponents: ExpVec, coeff: Rat) -> Self {
        let mut p = Polynomial::zero(exponents.len());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// The coordinate function `x_i` for a 0-based index `i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        Polynomial::monomial(ExpVec::unit(nvars, i), Rat::one())
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExpVec, Rat)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (s, c) in terms {
            p.add_term(s, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exponents: ExpVec, coeff: Rat) -> Result<()> {
        if exponents.len() != self.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: exponents.len(),
            });
        }
        let slot = self.terms.entry(exponents.clone()).or_insert_with(Rat::zero);
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> {
        self.terms.keys()
    }

    pub fn coefficient(&self, s: &ExpVec) -> Rat {
        self.terms.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        for (s, c) in other.terms() {
            out.add_term(s.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(s, a)| (s.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.nvars != other.nvars {
            return Err(Error::Dimension {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (s, a) in self.terms() {
            for (t, b) in other.terms() {
                out.add_term(s.checked_add(t)?, a * b)?;
            }
        }
        Ok(out)
    }
}

/// Writes `x_{i+1}` in the notation's variable syntax.
pub(crate) fn write_variable(f: &mut impl fmt::Write, index0: usize) -> fmt::Result {
    let k = index0 + 1;
    if k <= 9 {
        write!(f, "x{k}")
    } else {
        write!(f, "x{{{k}}}")
    }
}

pub(crate) fn write_coefficient_and_body(
    f: &mut impl fmt::Write,
    coeff: &Rat,
    first: bool,
    body: &str,
) -> fmt::Result {
    let negative = coeff.is_negative();
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if negative { "-" } else { "+" })?;
    }
    let mag = coeff.abs();
    let unit = mag == Rat::one();
    match (unit, body.is_empty()) {
        (true, true) => write!(f, "1"),
        (true, false) => write!(f, "{body}"),
        (false, _) => {
            if mag.is_integer() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "({mag})")?;
            }
            if body.is_empty() {
                Ok(())
            } else {
                write!(f, "*{body}")
            }
        }
    }
}

impl fmt::Display for Polynomial {
    /// Canonical notation: terms in descending lexicographic order of
    /// exponents, e.g. `x1*x2+x3^3-2*x4^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (s, c)) in self.terms.iter().rev().enumerate() {
            let mut body = String::new();
            for (i, &e) in s.entries().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !body.is_empty() {
                    body.push('*');
                }
                write_variable(&mut body, i)?;
                if e > 1 {
                    body.push_str(&format!("^{e}"));
                }
            }
            write_coefficient_and_body(f, c, idx == 0, &body)?;
        }
        Ok(())
    }
}
