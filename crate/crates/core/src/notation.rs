//! Text notation for singularities and polynomials.
//!
//! ```text
//! singularity := "1/" m "(" w ("," w)* [";" e] ")" ["{" "g=" poly "}"]
//! poly        := ["+"|"-"] term (("+"|"-") term)*
//! term        := factor ("*"? factor)*
//! factor      := int | "(" int ["/" int] ")" | var ["^" int]
//! var         := "x" digit | "x{" int "}"
//! ```
//!
//! Whitespace is ignored everywhere. Weights may be negative and are reduced
//! mod `m` once a type is built. Error positions are 1-based character
//! offsets into the original text; the end of input is `len + 1`.

use num_bigint::BigInt;
use num_traits::One;

use crate::quotient::{reduce_signed, CyclicQuotientType, HyperquotientType, Polynomial, Singularity};
use crate::{Error, ExpVec, Rat, Result, WeightSystem};

/// Parsed notation before weights are reduced mod `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Notation {
    pub m: u64,
    pub weights: Vec<i64>,
    pub eigenvalue: Option<i64>,
    pub equation: Option<Polynomial>,
    pub hyper: bool,
}

impl Notation {
    pub fn singularity(&self) -> Result<Singularity> {
        let ambient = CyclicQuotientType::from_signed(self.m, &self.weights)?;
        if !self.hyper {
            return Ok(Singularity::Cyclic(ambient));
        }
        let g = self
            .equation
            .clone()
            .unwrap_or_else(|| Polynomial::zero(self.weights.len()));
        let e = self.eigenvalue.map(|e| reduce_signed(e, self.m));
        HyperquotientType::new(ambient, g, e).map(Singularity::Hyper)
    }

    /// Reads the weights literally as blow-up weights `sigma`, with the group
    /// order as `m`. The weights must be positive with gcd 1.
    pub fn weight_system(&self) -> Result<WeightSystem> {
        let mut sigma = Vec::with_capacity(self.weights.len());
        for (i, &w) in self.weights.iter().enumerate() {
            if w <= 0 {
                return Err(Error::InvalidWeights(format!(
                    "blow-up weight {w} at position {} is not positive",
                    i + 1
                )));
            }
            sigma.push(w as u64);
        }
        WeightSystem::new(&sigma, self.m)
    }
}

pub fn parse_notation(text: &str) -> Result<Notation> {
    let mut p = Parser::new(text);
    let n = p.singularity()?;
    p.expect_end()?;
    Ok(n)
}

pub fn parse_singularity(text: &str) -> Result<Singularity> {
    parse_notation(text)?.singularity()
}

/// Parses a polynomial in the variables `x1..x{nvars}`.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut p = Parser::new(text);
    let poly = p.polynomial(nvars)?;
    p.expect_end()?;
    Ok(poly)
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Parser {
            chars,
            idx: 0,
            end: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars.get(self.idx).map_or(self.end, |&(p, _)| p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.position(),
            message: message.into(),
        })
    }

    fn bump(&mut self) {
        self.idx += 1;
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected trailing '{c}'")),
        }
    }

    fn digits(&mut self) -> Result<String> {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return self.error("expected a number");
        }
        Ok(s)
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let start = self.position();
        let s = self.digits()?;
        s.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("{what} {s} is out of range"),
        })
    }

    fn signed(&mut self, what: &str) -> Result<i64> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let start = self.position();
        let s = self.digits()?;
        let text = if negative { format!("-{s}") } else { s };
        text.parse().map_err(|_| Error::Parse {
            position: start,
            message: format!("{what} {text} is out of range"),
        })
    }

    fn singularity(&mut self) -> Result<Notation> {
        let one_pos = self.position();
        let one: u64 = self.number("numerator")?;
        if one != 1 {
            return Err(Error::Parse {
                position: one_pos,
                message: "notation must start with 1/".into(),
            });
        }
        self.expect('/')?;
        let m_pos = self.position();
        let m: u64 = self.number("group order")?;
        if m == 0 {
            return Err(Error::Parse {
                position: m_pos,
                message: "group order must be positive".into(),
            });
        }
        self.expect('(')?;
        let mut weights = vec![self.signed("weight")?];
        while self.eat(',') {
            weights.push(self.signed("weight")?);
        }
        let mut hyper = false;
        let mut eigenvalue = None;
        if self.eat(';') {
            hyper = true;
            eigenvalue = Some(self.signed("eigenvalue class")?);
        }
        self.expect(')')?;
        let mut equation = None;
        if self.eat('{') {
            hyper = true;
            self.expect('g')?;
            self.expect('=')?;
            equation = Some(self.polynomial(weights.len())?);
            self.expect('}')?;
        }
        Ok(Notation {
            m,
            weights,
            eigenvalue,
            equation,
            hyper,
        })
    }

    fn polynomial(&mut self, nvars: usize) -> Result<Polynomial> {
        if nvars == 0 {
            return self.error("polynomial needs at least one variable");
        }
        let mut poly = Polynomial::zero(nvars);
        let mut sign = Rat::one();
        if self.eat('-') {
            sign = Rat::from(-1);
        } else {
            self.eat('+');
        }
        loop {
            let (s, c) = self.term(nvars)?;
            poly.add_term(s, sign * c)?;
            if self.eat('+') {
                sign = Rat::one();
            } else if self.eat('-') {
                sign = Rat::from(-1);
            } else {
                break;
            }
        }
        Ok(poly)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c == 'x' || c == '(' || c.is_ascii_digit())
    }

    fn term(&mut self, nvars: usize) -> Result<(ExpVec, Rat)> {
        let mut exps = vec![0u32; nvars];
        let mut coeff = Rat::one();
        if !self.starts_factor() {
            return self.error("expected a term");
        }
        loop {
            self.factor(&mut exps, &mut coeff)?;
            if self.eat('*') {
                if !self.starts_factor() {
                    return self.error("expected a factor after '*'");
                }
                continue;
            }
            if !self.starts_factor() {
                break;
            }
        }
        Ok((ExpVec::new(exps)?, coeff))
    }

    fn factor(&mut self, exps: &mut [u32], coeff: &mut Rat) -> Result<()> {
        match self.peek() {
            Some('x') => {
                let pos = self.position();
                self.bump();
                let index: usize = if self.eat('{') {
                    let k = self.number("variable index")?;
                    self.expect('}')?;
                    k
                } else {
                    match self.peek() {
                        Some(c) if c.is_ascii_digit() => {
                            self.bump();
                            c.to_digit(10).unwrap() as usize
                        }
                        _ => return self.error("expected a variable index after 'x'"),
                    }
                };
                if index == 0 || index > exps.len() {
                    return Err(Error::Parse {
                        position: pos,
                        message: format!(
                            "variable x{index} outside x1..x{}",
                            exps.len()
                        ),
                    });
                }
                let power: u32 = if self.eat('^') {
                    self.number("exponent")?
                } else {
                    1
                };
                let slot = &mut exps[index - 1];
                *slot = slot.checked_add(power).ok_or_else(|| Error::Parse {
                    position: pos,
                    message: "exponent out of range".into(),
                })?;
            }
            Some('(') => {
                self.bump();
                let neg = self.eat('-');
                let num: BigInt = self.digits()?.parse().expect("digits");
                let den: BigInt = if self.eat('/') {
                    let pos = self.position();
                    let d: BigInt = self.digits()?.parse().expect("digits");
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            position: pos,
                            message: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::one()
                };
                self.expect(')')?;
                let value = Rat::new(if neg { -num } else { num }, den)?;
                *coeff = &*coeff * &value;
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                *coeff = &*coeff * &Rat::from_integer(num);
            }
            _ => return self.error("expected a factor"),
        }
        Ok(())
    }
}
