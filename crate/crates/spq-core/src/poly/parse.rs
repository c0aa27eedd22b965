//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! poly     := ['-'] term (('+'|'-') term)* ;
//! term     := coef ['*' monomial] | monomial ;
//! monomial := factor ('*' factor)* ;
//! factor   := 'x' INDEX ['^' POSINT] ;
//! coef     := INT | INT '/' POSINT | DECIMAL ;
//! ```
//!
//! Whitespace-insensitive. In exact mode, decimal literals are converted
//! exactly (power-of-ten denominator) and fractions stay rational.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::pow::Pow;

use crate::scalar::{Mode, Scalar};

use super::{DensePoly, ExponentVector, PolyError};

/// Parses `text` as a polynomial in `n` variables.
pub fn parse_poly(text: &str, n: usize, mode: Mode) -> Result<DensePoly, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n, mode };
    p.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
    mode: Mode,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(&mut self) -> Result<DensePoly, PolyError> {
        let mut poly = DensePoly::zero(self.n, self.mode);
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let (m, c) = self.term()?;
            let c = if sign < 0 { c.neg() } else { c };
            poly.add_term(m, c);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(_) => return Err(self.error("expected '+' or '-'")),
                None => break,
            }
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(ExponentVector, Scalar), PolyError> {
        match self.peek() {
            Some(b'x') => {
                let m = self.monomial()?;
                Ok((m, Scalar::one(self.mode)))
            }
            Some(c) if c.is_ascii_digit() => {
                let coef = self.coef()?;
                // A following '*' may introduce a monomial.
                let save = self.pos;
                if self.eat(b'*') {
                    if self.peek() == Some(b'x') {
                        let m = self.monomial()?;
                        return Ok((m, coef));
                    }
                    self.pos = save;
                    return Err(self.error("expected monomial after '*'"));
                }
                Ok((ExponentVector::constant(self.n), coef))
            }
            Some(_) => Err(self.error("expected coefficient or monomial")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn monomial(&mut self) -> Result<ExponentVector, PolyError> {
        let mut exps = vec![0u32; self.n];
        loop {
            let (idx, pow) = self.factor()?;
            exps[idx] += pow;
            let save = self.pos;
            if self.eat(b'*') {
                if self.peek() == Some(b'x') {
                    continue;
                }
                self.pos = save;
            }
            break;
        }
        Ok(ExponentVector(exps))
    }

    fn factor(&mut self) -> Result<(usize, u32), PolyError> {
        if self.bump() != Some(b'x') {
            return Err(self.error("expected variable"));
        }
        let idx = self.uint()? as usize;
        if idx == 0 || idx > self.n {
            return Err(PolyError::IndexOutOfRange { index: idx, n: self.n });
        }
        let pow = if self.eat(b'^') { self.uint()? } else { 1 };
        if pow == 0 {
            return Err(self.error("exponent must be positive"));
        }
        Ok((idx - 1, pow))
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| self.error("integer too large"))
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_owned())
    }

    fn coef(&mut self) -> Result<Scalar, PolyError> {
        let int_part = self.digits()?;
        // Fraction: INT '/' POSINT.  Only treat '/' as part of the literal
        // when followed by a digit.
        if self.peek() == Some(b'/') && self.src.get(self.pos + 1).map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
            let den = self.digits()?;
            return match self.mode {
                Mode::Exact => {
                    let num: BigInt = int_part.parse().unwrap();
                    let den: BigInt = den.parse().unwrap();
                    if den == BigInt::from(0) {
                        return Err(self.error("zero denominator"));
                    }
                    Ok(Scalar::rational(BigRational::new(num, den)))
                }
                Mode::Float => {
                    let num: f64 = int_part.parse().unwrap();
                    let den: f64 = den.parse().unwrap();
                    Ok(Scalar::from_f64(num / den))
                }
            };
        }
        // Decimal literal.
        if self.peek() == Some(b'.') {
            self.pos += 1;
            let frac = self.digits()?;
            return match self.mode {
                Mode::Exact => {
                    let digits: BigInt = format!("{int_part}{frac}").parse().unwrap();
                    let den = BigInt::from(10u32).pow(frac.len() as u32);
                    Ok(Scalar::rational(BigRational::new(digits, den)))
                }
                Mode::Float => {
                    let v: f64 = format!("{int_part}.{frac}").parse().unwrap();
                    Ok(Scalar::from_f64(v))
                }
            };
        }
        match self.mode {
            Mode::Exact => Ok(Scalar::rational(BigRational::from_integer(int_part.parse().unwrap()))),
            Mode::Float => Ok(Scalar::from_f64(int_part.parse().unwrap())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector(e.to_vec())
    }

    #[test]
    fn quadratic_in_one_variable() {
        let p = parse_poly("x1^2 - 2*x1 + 1", 1, Mode::Exact).unwrap();
        assert_eq!(p.coeff(&ev(&[2])), Scalar::from_int(1, Mode::Exact));
        assert_eq!(p.coeff(&ev(&[1])), Scalar::from_int(-2, Mode::Exact));
        assert_eq!(p.coeff(&ev(&[0])), Scalar::from_int(1, Mode::Exact));
        assert_eq!(p.num_terms(), 3);
    }

    #[test]
    fn exact_fraction_constant() {
        let p = parse_poly("12/5", 2, Mode::Exact).unwrap();
        assert_eq!(p.coeff(&ev(&[0, 0])), Scalar::from_ratio(12, 5, Mode::Exact));
    }

    #[test]
    fn exact_decimal_is_converted_exactly() {
        let p = parse_poly("1.25*x1", 1, Mode::Exact).unwrap();
        assert_eq!(p.coeff(&ev(&[1])), Scalar::from_ratio(5, 4, Mode::Exact));
    }

    #[test]
    fn index_out_of_range_is_reported() {
        let err = parse_poly("x3 + 1", 2, Mode::Exact).unwrap_err();
        assert_eq!(err, PolyError::IndexOutOfRange { index: 3, n: 2 });
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_poly("x1 + + x2", 2, Mode::Exact).unwrap_err();
        match err {
            PolyError::Parse { pos, .. } => assert_eq!(pos, 5),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn display_round_trips() {
        let texts = [
            "17*x1^6 - 20*x1^4 + 7*x1^2 + 18*x1 + 18*x2^4 - 19*x2^2 - 19*x2 + 21 - 20*x1*x2",
            "x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1",
            "-x1 + 12/5",
        ];
        for t in texts {
            let p = parse_poly(t, 2, Mode::Exact).unwrap();
            let q = parse_poly(&p.to_string(), 2, Mode::Exact).unwrap();
            assert_eq!(p, q, "round trip failed for {t}");
        }
    }
}
