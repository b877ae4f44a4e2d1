//! Textual grammar for elements, monomials `V(s,t)`, and algebra
//! expressions like `V(ab,b) + 2*V(a,a)` or `(1/2+i)*V(e,a)`.
//!
//! Element syntax is instance-specific and round-trips with `Display`:
//! words (`e`, `ab`), vectors (`(1,2)`, or a bare integer at rank 1),
//! positive integers, and rationals (`0`, `3/2`). Parse errors carry the
//! byte offset where scanning stopped.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::monoid::{Elem, Monoid, MonoidKind};
use crate::monomial::Monomial;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Parse one element of the given instance from the entire input.
pub fn parse_elem(monoid: &Monoid, input: &str) -> Result<Elem, ParseError> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    let e = cur.elem(monoid)?;
    cur.skip_ws();
    if !cur.at_end() {
        return err(cur.pos, "trailing input after element");
    }
    Ok(e)
}

/// Parse a monomial `V(s,t)` or `0` from the entire input.
pub fn parse_monomial(monoid: &Monoid, input: &str) -> Result<Monomial, ParseError> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    let m = cur.monomial(monoid)?;
    cur.skip_ws();
    if !cur.at_end() {
        return err(cur.pos, "trailing input after monomial");
    }
    Ok(m)
}

/// Parse a linear combination of monomials from the entire input.
pub fn parse_algebra(monoid: &Monoid, input: &str) -> Result<AlgebraElement, ParseError> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    let mut acc = AlgebraElement::zero(*monoid);
    let mut first = true;
    loop {
        let mut sign = Scalar::one();
        if first {
            if cur.eat('-') {
                sign = -Scalar::one();
            } else {
                let _ = cur.eat('+');
            }
        } else if cur.eat('+') {
        } else if cur.eat('-') {
            sign = -Scalar::one();
        } else {
            return err(cur.pos, "expected '+' or '-' between terms");
        }
        cur.skip_ws();
        let term = cur.term(monoid)?;
        acc = &acc + &term.scale(&sign);
        cur.skip_ws();
        if cur.at_end() {
            return Ok(acc);
        }
        first = false;
    }
}

struct Cursor<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c as u8) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{c}'"))
        }
    }

    fn digits(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return err(start, "expected a digit");
        }
        self.input[start..self.pos]
            .parse::<u64>()
            .map_err(|_| ParseError {
                pos: start,
                message: "integer literal too large".into(),
            })
    }

    fn unsigned_rational(&mut self) -> Result<BigRational, ParseError> {
        let n = self.digits()?;
        let num = BigInt::from(n);
        if self.eat('/') {
            let d = self.digits()?;
            if d == 0 {
                return err(self.pos, "zero denominator");
            }
            Ok(BigRational::new(num, BigInt::from(d)))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    fn elem(&mut self, monoid: &Monoid) -> Result<Elem, ParseError> {
        let start = self.pos;
        match monoid.kind() {
            MonoidKind::FreeMonoid { rank } => {
                if self.eat('e') {
                    return Ok(Elem::Word(vec![]));
                }
                let mut w = vec![];
                while let Some(c @ b'a'..=b'z') = self.peek() {
                    let l = c - b'a';
                    if l >= rank {
                        return err(self.pos, format!("letter '{}' out of range", c as char));
                    }
                    w.push(l);
                    self.pos += 1;
                }
                if w.is_empty() {
                    return err(start, "expected a word ('e' or letters)");
                }
                Ok(Elem::Word(w))
            }
            MonoidKind::FreeAbelian { rank } => {
                if self.eat('e') {
                    return Ok(Elem::Vector(vec![0; rank as usize]));
                }
                if rank == 1 && matches!(self.peek(), Some(b'0'..=b'9')) {
                    return Ok(Elem::Vector(vec![self.digits()?]));
                }
                self.expect('(')?;
                let mut v = vec![];
                loop {
                    self.skip_ws();
                    v.push(self.digits()?);
                    self.skip_ws();
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
                if v.len() != rank as usize {
                    return err(start, format!("expected {rank} coordinates, got {}", v.len()));
                }
                Ok(Elem::Vector(v))
            }
            MonoidKind::Divisibility => {
                if self.eat('e') {
                    return Ok(Elem::Integer(1));
                }
                let n = self.digits()?;
                if n == 0 {
                    return err(start, "divisibility elements are positive");
                }
                Ok(Elem::Integer(n))
            }
            MonoidKind::HalfLine { .. } => {
                if self.eat('e') {
                    return Ok(Elem::Rational(BigRational::zero()));
                }
                let r = self.unsigned_rational()?;
                if !r.is_zero() && r < BigRational::one() {
                    return err(start, "half-line elements are 0 or at least 1");
                }
                Ok(Elem::Rational(r))
            }
        }
    }

    fn monomial(&mut self, monoid: &Monoid) -> Result<Monomial, ParseError> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(Monomial::Zero);
        }
        self.expect('V')?;
        self.expect('(')?;
        self.skip_ws();
        let s = self.elem(monoid)?;
        self.skip_ws();
        if self.eat(')') {
            // V(u) abbreviates the projection V(u,u).
            return Ok(Monomial::pair(s.clone(), s));
        }
        self.expect(',')?;
        self.skip_ws();
        let t = self.elem(monoid)?;
        self.skip_ws();
        self.expect(')')?;
        Ok(Monomial::pair(s, t))
    }

    /// `i`, a rational, `3/2*i`, or a parenthesized `a+b*i` form.
    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        if self.eat('i') {
            return Ok(Scalar::i());
        }
        if self.eat('(') {
            self.skip_ws();
            let neg = self.eat('-');
            self.skip_ws();
            let mut first = self.scalar()?;
            if neg {
                first = -first;
            }
            self.skip_ws();
            let mut total = first;
            while !self.eat(')') {
                let sign = if self.eat('+') {
                    Scalar::one()
                } else if self.eat('-') {
                    -Scalar::one()
                } else {
                    return err(self.pos, "expected '+', '-' or ')' in scalar");
                };
                self.skip_ws();
                let next = self.scalar()?;
                total = &total + &(&sign * &next);
                self.skip_ws();
            }
            return Ok(total);
        }
        let q = self.unsigned_rational()?;
        let mut s = Scalar::real(q);
        if self.eat('*') {
            self.expect('i')?;
            s = &s * &Scalar::i();
        } else if self.eat('i') {
            s = &s * &Scalar::i();
        }
        Ok(s)
    }

    fn term(&mut self, monoid: &Monoid) -> Result<AlgebraElement, ParseError> {
        // A term is an optional scalar, an optional '*', then a monomial —
        // or a bare scalar-free monomial, or a lone '0'.
        let has_coeff = matches!(self.peek(), Some(b'0'..=b'9') | Some(b'i') | Some(b'('))
            && self.peek() != Some(b'V');
        // '(' is ambiguous: vectors also start with '('. Only treat it as a
        // scalar when a monomial cannot start here.
        let coeff = if has_coeff {
            let save = self.pos;
            match self.scalar() {
                Ok(c) => {
                    self.skip_ws();
                    let _ = self.eat('*');
                    self.skip_ws();
                    Some(c)
                }
                Err(_) => {
                    self.pos = save;
                    None
                }
            }
        } else {
            None
        };
        match coeff {
            Some(c) => {
                if self.at_end() || matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    // A bare scalar term: only 0 keeps the element in the span.
                    if c.is_zero() {
                        return Ok(AlgebraElement::zero(*monoid));
                    }
                    return err(self.pos, "expected a monomial after the coefficient");
                }
                let m = self.monomial(monoid)?;
                Ok(AlgebraElement::from_monomial(*monoid, m).scale(&c))
            }
            None => {
                let m = self.monomial(monoid)?;
                Ok(AlgebraElement::from_monomial(*monoid, m))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_errors_carry_positions() {
        let fm = Monoid::free_monoid(2);
        let e = parse_elem(&fm, "ac").unwrap_err();
        assert_eq!(e.pos, 1);
        let e = parse_elem(&fm, "a b").unwrap_err();
        assert_eq!(e.pos, 2);
    }

    #[test]
    fn monomial_roundtrip() {
        let fm = Monoid::free_monoid(2);
        let m = parse_monomial(&fm, "V(ab,b)").unwrap();
        assert_eq!(m.to_string(), "V(ab,b)");
        assert_eq!(parse_monomial(&fm, "0").unwrap(), Monomial::Zero);
        let p = parse_monomial(&fm, "V(a)").unwrap();
        assert_eq!(p.to_string(), "V(a,a)");
    }

    #[test]
    fn algebra_expressions() {
        let fm = Monoid::free_monoid(2);
        let x = parse_algebra(&fm, "V(ab,b) + 2 V(a,a)").unwrap();
        assert_eq!(x.terms().count(), 2);
        let y = parse_algebra(&fm, "(1/2+i)*V(e,a) - i*V(b,b)").unwrap();
        assert_eq!(y.terms().count(), 2);
        // Cancellation prunes to zero.
        let z = parse_algebra(&fm, "V(a,b) - V(a,b)").unwrap();
        assert!(z.is_zero());
        let z = parse_algebra(&fm, "0").unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn vector_instance_expressions() {
        let ab = Monoid::free_abelian(2);
        let x = parse_algebra(&ab, "V((0,0)) - V((1,0)) - V((0,1)) + V((1,1))").unwrap();
        assert_eq!(x.terms().count(), 4);
        let hl = Monoid::half_line(4);
        let y = parse_algebra(&hl, "V(3/2, 0) + 1/2*V(1)").unwrap();
        assert_eq!(y.terms().count(), 2);
    }
}
