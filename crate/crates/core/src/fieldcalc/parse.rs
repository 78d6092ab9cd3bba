//! Recursive-descent parser for the field-expression grammar:
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := coeff ['z^' INT] '*' factor | factor
//! factor := NAME '(' 'e^' INT ' z' ')' | 'D^' INT '[' expr ']' | ':' expr expr ':'
//!         | '(' expr ')' | 'Id' | '0' | '<' NAME '>'
//! coeff  := ['-'] INT ['/' INT] | '(' scalar ')'
//! ```
//!
//! `<name>` is handed to a caller-supplied resolver (catalog references).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::expr::{FieldExpr, LinearTerm};

type Resolver<'r> = dyn Fn(&str) -> Result<FieldExpr> + 'r;

pub fn parse_expr(text: &str, order: u32) -> Result<FieldExpr> {
    parse_expr_with(text, order, &|name: &str| Err(Error::UnknownName(name.to_string())))
}

pub fn parse_expr_with(text: &str, order: u32, resolve: &Resolver<'_>) -> Result<FieldExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, order, resolve };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a, 'r> {
    src: &'a [u8],
    pos: usize,
    order: u32,
    resolve: &'a Resolver<'r>,
}

impl Parser<'_, '_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "expected an integer".into() })
    }

    fn name(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
    }

    fn expr(&mut self) -> Result<FieldExpr> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        if terms.len() == 1 {
            return Ok(match terms.pop().unwrap() {
                (None, e) => e,
                (Some((coeff, zpow)), expr) => FieldExpr::Linear(vec![LinearTerm { coeff, zpow, expr }]),
            });
        }
        Ok(FieldExpr::Linear(
            terms
                .into_iter()
                .map(|(c, expr)| {
                    let (coeff, zpow) = c.unwrap_or((Scalar::one(), 0));
                    LinearTerm { coeff, zpow, expr }
                })
                .collect(),
        ))
    }

    fn term(&mut self) -> Result<(Option<(Scalar, i32)>, FieldExpr)> {
        let save = self.pos;
        if let Some(c) = self.try_coeff()? {
            return Ok((Some(c), self.factor()?));
        }
        self.pos = save;
        Ok((None, self.factor()?))
    }

    /// A coefficient prefix `c [z^l] *`, or `None` (position unspecified) if absent.
    fn try_coeff(&mut self) -> Result<Option<(Scalar, i32)>> {
        let coeff = match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                let Some(close) = self.matching_paren(open) else { return Ok(None) };
                let inner = std::str::from_utf8(&self.src[open + 1..close]).unwrap();
                match Scalar::parse(inner, self.order) {
                    Ok(c) => {
                        self.pos = close + 1;
                        c
                    }
                    Err(_) => return Ok(None),
                }
            }
            Some(b'-' | b'0'..=b'9') => {
                let Ok(num) = self.int() else { return Ok(None) };
                let den = if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    match self.int() {
                        Ok(d) if d != 0 => d,
                        _ => return Err(self.err("bad denominator")),
                    }
                } else {
                    1
                };
                Scalar::frac(num, den)
            }
            _ => return Ok(None),
        };
        let mut zpow = 0;
        if self.eat("z") {
            zpow = if self.eat("^") { self.int()? as i32 } else { 1 };
        }
        if !self.eat("*") {
            return Ok(None);
        }
        Ok(Some((coeff, zpow)))
    }

    fn matching_paren(&self, open: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, b) in self.src.iter().enumerate().skip(open) {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn factor(&mut self) -> Result<FieldExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(b':') => {
                self.pos += 1;
                let a = self.expr()?;
                let b = self.expr()?;
                self.expect(":")?;
                Ok(FieldExpr::nprod(a, b))
            }
            Some(b'<') => {
                self.pos += 1;
                let start = self.pos;
                let name = self.name()?;
                self.expect(">")?;
                (self.resolve)(&name).map_err(|e| match e {
                    Error::UnknownName(_) => Error::Parse { pos: start, msg: format!("unknown reference <{name}>") },
                    other => other,
                })
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(FieldExpr::zero())
            }
            Some(b'D') if self.src[self.pos..].starts_with(b"D^") => {
                self.pos += 2;
                let k = self.int()?;
                if k < 0 {
                    return Err(self.err("negative derivative order"));
                }
                self.expect("[")?;
                let e = self.expr()?;
                self.expect("]")?;
                Ok(FieldExpr::derivative(k as u32, e))
            }
            Some(_) => {
                let start = self.pos;
                let name = self.name()?;
                if name == "Id" {
                    return Ok(FieldExpr::Identity);
                }
                if !self.eat("(") {
                    self.pos = start;
                    return Err(self.err("expected a field"));
                }
                let dilation = if self.eat("e^") {
                    let k = self.int()?;
                    if k < 0 {
                        return Err(self.err("negative dilation exponent"));
                    }
                    k as u32
                } else {
                    0
                };
                self.expect("z")?;
                self.expect(")")?;
                Ok(FieldExpr::gen(&name, dilation))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}
