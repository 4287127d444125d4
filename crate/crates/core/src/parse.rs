//! Text format for maps and forms.
//!
//! A map is a `;`-separated list of coordinates. Each coordinate is a sum of
//! terms `[+|-] [k '*'] X<i> ['^' e] ('*' X<j> ['^' e])*`; a bare integer
//! is also accepted as a term and a lone `0` denotes the zero form.
//! Whitespace is insignificant. The number of coordinates fixes `n`.

use malachite_base::num::basic::traits::One;
use malachite_nz::integer::Integer;

use crate::error::{Error, Result};
use crate::map::RationalMap;
use crate::poly::{HomogPoly, Monomial};

struct Term {
    pos: usize,
    coeff: Integer,
    vars: Vec<(usize, u32)>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            base,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.base + self.pos,
            msg: msg.into(),
        }
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

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn variable(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'X') | Some(b'x') => self.pos += 1,
            _ => return Err(self.err("expected variable X<i>")),
        }
        // the index must follow the X directly
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected variable index after X"));
        }
        let idx: usize = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("variable index out of range"))?;
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            exp = e.parse().map_err(|_| self.err("exponent out of range"))?;
        }
        Ok((idx, exp))
    }

    fn term(&mut self, negative: bool) -> Result<Term> {
        let pos = self.base + self.pos;
        let mut coeff = Integer::ONE;
        let mut vars = Vec::new();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.digits().unwrap();
                coeff = k.parse().map_err(|_| self.err("bad integer"))?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    vars.push(self.variable()?);
                }
            }
            _ => vars.push(self.variable()?),
        }
        while !vars.is_empty() && self.peek() == Some(b'*') {
            self.pos += 1;
            vars.push(self.variable()?);
        }
        if negative {
            coeff = -coeff;
        }
        Ok(Term { pos, coeff, vars })
    }

    fn sum(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                None => {
                    if first {
                        return Err(self.err("empty expression"));
                    }
                    break;
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(c) => return Err(self.err(format!("unexpected character '{}'", c as char))),
            };
            terms.push(self.term(negative)?);
            first = false;
        }
        Ok(terms)
    }
}

/// Parses one form. `nvars` bounds the variable indices.
fn parse_form(text: &str, base: usize, nvars: usize, coord: usize) -> Result<HomogPoly> {
    let terms = Parser::new(text, base).sum()?;
    let mut degree: Option<u32> = None;
    let mut poly: Option<HomogPoly> = None;
    for t in terms {
        let mut exps = vec![0u32; nvars];
        for (i, e) in t.vars {
            if i >= nvars {
                return Err(Error::Syntax {
                    pos: t.pos,
                    msg: format!("variable X{i} out of range for {nvars} variables"),
                });
            }
            exps[i] += e;
        }
        let m = Monomial::new(exps);
        match degree {
            None => degree = Some(m.degree()),
            Some(d) if d != m.degree() => return Err(Error::Inhomogeneous { coord }),
            Some(_) => {}
        }
        poly.get_or_insert_with(|| HomogPoly::zero(nvars, m.degree()))
            .add_term(m, t.coeff);
    }
    Ok(poly.expect("at least one term"))
}

/// Splits on `;` and keeps each piece's byte offset.
fn split_coords(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == ';' {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

/// Parses a map `phi_0; phi_1; ...; phi_n` into canonical form.
pub fn parse_map(text: &str) -> Result<RationalMap> {
    let mut pieces = split_coords(text.trim_end());
    if pieces.len() > 1 && pieces.last().is_some_and(|(_, s)| s.trim().is_empty()) {
        pieces.pop();
    }
    let nvars = pieces.len();
    let forms = pieces
        .iter()
        .enumerate()
        .map(|(i, (off, s))| parse_form(s, *off, nvars, i))
        .collect::<Result<Vec<_>>>()?;
    let d = forms
        .iter()
        .find(|f| !f.is_zero())
        .map(|f| f.degree())
        .ok_or(Error::AllZero)?;
    for (i, f) in forms.iter().enumerate() {
        if !f.is_zero() && f.degree() != d {
            return Err(Error::DegreeMismatch {
                coord: i,
                expected: d,
                found: f.degree(),
            });
        }
    }
    RationalMap::new(forms)
}

/// Parses a `;`-separated list of forms in `nvars` variables (degrees may
/// differ between forms).
pub fn parse_forms(text: &str, nvars: usize) -> Result<Vec<HomogPoly>> {
    split_coords(text)
        .into_iter()
        .filter(|(_, s)| !s.trim().is_empty())
        .enumerate()
        .map(|(i, (off, s))| parse_form(s, off, nvars, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intro_map() {
        let phi = parse_map("X0^2; X1^2; X0*X2").unwrap();
        assert_eq!(phi.n(), 2);
        assert_eq!(phi.degree(), 2);
        assert_eq!(phi.to_string(), "X0^2; X1^2; X0*X2");
    }

    #[test]
    fn content_is_removed() {
        let phi = parse_map("2*X0^2; 4*X1^2; 6*X0*X2").unwrap();
        assert_eq!(phi.to_string(), "X0^2; 2*X1^2; 3*X0*X2");
        let phi = parse_map("-2*X0; 2*X1").unwrap();
        assert_eq!(phi.to_string(), "X0; -X1");
    }

    #[test]
    fn degree_errors() {
        assert!(matches!(
            parse_map("X0^2; X1"),
            Err(Error::DegreeMismatch { coord: 1, expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_map("X0^2 + X1; X1^2"),
            Err(Error::Inhomogeneous { coord: 0 })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_map("X0^2; X1^2; X0*Y2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_map("X0; X5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_map("X0 X1; X1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_map(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn whitespace_signs_and_repeats() {
        let phi = parse_map("  X0 * X0 - 3*X1^2 ;X1*X0;  - X2^2 + X0^2 ").unwrap();
        assert_eq!(phi.to_string(), "X0^2 - 3*X1^2; X0*X1; X0^2 - X2^2");
        let phi = parse_map("X0; 0; X2").unwrap();
        assert_eq!(phi.to_string(), "X0; 0; X2");
    }

    #[test]
    fn forms() {
        let f = parse_forms("X0; X0*X1*X2", 3).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[1].degree(), 3);
    }
}
