//! Text grammar for polynomials.
//!
//! ```text
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (['*'] factor)*
//! factor  := number ['/' number] | var ['^' number]
//! var     := 'x' digits | 'x' | 'y' | 'z' | 'w'      (primal)
//!          | 'u' digits                               (dual)
//! ```
//! `x`, `y`, `z`, `w` alias `x1`…`x4`. Whitespace is ignored.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{DualPolynomial, ExponentVector, Polynomial};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableStyle {
    /// `x1, x2, …`
    Primal,
    /// `u1, u2, …`
    Dual,
}

impl VariableStyle {
    fn prefix(self) -> char {
        match self {
            VariableStyle::Primal => 'x',
            VariableStyle::Dual => 'u',
        }
    }
}

/// Parses a polynomial in `x` variables. When `n_vars` is `None` the number
/// of variables is the largest index used.
pub fn parse_polynomial(text: &str, n_vars: Option<usize>) -> Result<Polynomial> {
    Parser::new(text, VariableStyle::Primal).parse(n_vars)
}

/// Parses a dual form written in `u1, u2, …`.
pub fn parse_dual(text: &str, n_vars: Option<usize>) -> Result<DualPolynomial> {
    Parser::new(text, VariableStyle::Dual).parse(n_vars).map(DualPolynomial)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    style: VariableStyle,
}

struct RawTerm {
    coefficient: Rational,
    powers: Vec<(usize, u32)>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, style: VariableStyle) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0, style }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii"))
    }

    fn parse(mut self, n_vars: Option<usize>) -> Result<Polynomial> {
        let mut raw = Vec::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            None => return Err(self.error("empty polynomial")),
            _ => {}
        }
        loop {
            let mut term = self.term()?;
            term.coefficient *= &sign;
            raw.push(term);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                Some(c) => return Err(self.error(format!("unexpected character '{}'", c as char))),
            }
        }
        let max_index = raw
            .iter()
            .flat_map(|t| t.powers.iter().map(|&(i, _)| i + 1))
            .max()
            .unwrap_or(0);
        let n = match n_vars {
            Some(n) if max_index > n => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("variable index {max_index} exceeds {n} variables"),
                })
            }
            Some(n) => n,
            None => max_index.max(1),
        };
        let terms = raw.into_iter().map(|t| {
            let mut e = vec![0u32; n];
            for (i, a) in t.powers {
                e[i] += a;
            }
            (ExponentVector::new(e), t.coefficient)
        });
        Polynomial::from_terms(n, terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut term = RawTerm { coefficient: Rational::one(), powers: Vec::new() };
        self.factor(&mut term)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.factor(&mut term)?;
                }
                Some(c) if c.is_ascii_alphanumeric() => self.factor(&mut term)?,
                _ => return Ok(term),
            }
        }
    }

    fn factor(&mut self, term: &mut RawTerm) -> Result<()> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let numer: BigInt = self.digits().expect("digit present").parse().expect("digits");
                let mut value = Rational::from_integer(numer);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let denom: BigInt = self
                        .digits()
                        .ok_or_else(|| self.error("expected denominator"))?
                        .parse()
                        .expect("digits");
                    if denom.is_zero() {
                        return Err(self.error("zero denominator"));
                    }
                    value /= Rational::from_integer(denom);
                }
                term.coefficient *= value;
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let index = self.variable_index(c)?;
                let mut power = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    power = self
                        .digits()
                        .ok_or_else(|| self.error("expected exponent"))?
                        .parse()
                        .map_err(|_| self.error("exponent too large"))?;
                }
                term.powers.push((index, power));
                Ok(())
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn variable_index(&mut self, c: u8) -> Result<usize> {
        let prefix = self.style.prefix() as u8;
        if c == prefix {
            if let Some(d) = self.digits() {
                let k: usize = d.parse().map_err(|_| self.error("variable index too large"))?;
                if k == 0 {
                    return Err(self.error("variables are numbered from 1"));
                }
                return Ok(k - 1);
            }
        }
        match (self.style, c) {
            (VariableStyle::Primal, b'x') => Ok(0),
            (VariableStyle::Primal, b'y') => Ok(1),
            (VariableStyle::Primal, b'z') => Ok(2),
            (VariableStyle::Primal, b'w') => Ok(3),
            _ => {
                self.pos -= 1;
                Err(self.error(format!("unknown variable '{}'", c as char)))
            }
        }
    }
}

/// Formats terms in descending graded-lexicographic order, e.g.
/// `x1^3 + 3*x1^2*x2 - 1/2*x2^3`.
pub(super) fn format_polynomial(p: &Polynomial, style: VariableStyle) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let magnitude = c.abs();
        let mut factors = Vec::new();
        if !magnitude.is_one() || e.degree() == 0 {
            factors.push(magnitude.to_string());
        }
        for (i, &a) in e.as_slice().iter().enumerate() {
            match a {
                0 => {}
                1 => factors.push(format!("{}{}", style.prefix(), i + 1)),
                _ => factors.push(format!("{}{}^{}", style.prefix(), i + 1, a)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let f = parse_polynomial("x^3+y^3", None).unwrap();
        assert_eq!(f.n_vars(), 2);
        assert_eq!(f.len(), 2);
        assert_eq!(f.coefficient(&ExponentVector::new(vec![3, 0])), int(1));

        let g = parse_polynomial("1/2*x1^2*x2", None).unwrap();
        assert_eq!(g.coefficient(&ExponentVector::new(vec![2, 1])), frac(1, 2));

        let h = parse_polynomial("x^3 + 3*x^2*y - 1/2*y^3", Some(3)).unwrap();
        assert_eq!(h.n_vars(), 3);
        assert_eq!(h.coefficient(&ExponentVector::new(vec![0, 3, 0])), frac(-1, 2));
    }

    #[test]
    fn implicit_multiplication_and_signs() {
        let a = parse_polynomial("-2x^2y + 3 x y^2", None).unwrap();
        let b = parse_polynomial("-2*x^2*y+3*x*y^2", None).unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial("x*x*y", None).unwrap();
        assert_eq!(c, parse_polynomial("x^2*y", None).unwrap());
    }

    #[test]
    fn inhomogeneous_input_is_detected_downstream() {
        let f = parse_polynomial("x^2+y^3", None).unwrap();
        assert!(!f.is_homogeneous());
    }

    #[test]
    fn reports_error_positions() {
        match parse_polynomial("x^2 + q", None) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x^", None).is_err());
        assert!(parse_polynomial("1/0*x", None).is_err());
        assert!(parse_polynomial("", None).is_err());
        assert!(parse_polynomial("x3", Some(2)).is_err());
        assert!(parse_polynomial("x + + y", None).is_err());
    }

    #[test]
    fn formats_in_descending_order() {
        let f = parse_polynomial("x^3 + 3*x^2*y - 1/2*y^3", None).unwrap();
        assert_eq!(f.to_string(), "x1^3 + 3*x1^2*x2 - 1/2*x2^3");
        let d = parse_dual("1/36*u1*u2", Some(2)).unwrap();
        assert_eq!(d.to_string(), "1/36*u1*u2");
        assert_eq!(parse_polynomial("-x", None).unwrap().to_string(), "-x1");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
        assert_eq!(parse_polynomial("5", Some(1)).unwrap().to_string(), "5");
    }

    proptest! {
        #[test]
        fn display_round_trips(f in crate::poly::tests::arb_form(3, 3)) {
            let printed = f.to_string();
            prop_assert_eq!(parse_polynomial(&printed, Some(3)).unwrap(), f);
        }
    }
}
