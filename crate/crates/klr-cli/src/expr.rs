//! The expression grammar for KLR words.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := atom ['^' int]
//! atom   := int | 'e' '(' int (',' int)* ')' | 'y' '(' int ')' | 'psi' '(' int ')' | '(' expr ')'
//! ```
//! Whitespace is ignored. `^` is accepted so that printed normal forms parse back.

use std::collections::HashMap;
use std::fmt;

use klr_core::affine_algebra::{AffineElement, GeneratorWord, Klr, Letter};
use klr_core::{KlrError, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

const MAX_POWER: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 0-based character offset.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for KlrError {
    fn from(e: ParseError) -> Self {
        KlrError::Parse(e.to_string())
    }
}

/// A formal sum of generator words with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(BigInt, Vec<Letter>)>,
}

impl Combination {
    fn scalar(c: BigInt) -> Self {
        Combination { terms: vec![(c, Vec::new())] }
    }

    fn letter(l: Letter) -> Self {
        Combination { terms: vec![(BigInt::one(), vec![l])] }
    }

    fn collect(terms: impl IntoIterator<Item = (BigInt, Vec<Letter>)>) -> Self {
        let mut out: Vec<(BigInt, Vec<Letter>)> = Vec::new();
        let mut seen: HashMap<Vec<Letter>, usize> = HashMap::new();
        for (c, w) in terms {
            match seen.get(&w) {
                Some(&i) => out[i].0 += c,
                None => {
                    seen.insert(w.clone(), out.len());
                    out.push((c, w));
                }
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Combination { terms: out }
    }

    fn plus(self, other: Combination, sign: i32) -> Self {
        let other = other.terms.into_iter().map(|(c, w)| (c * sign, w));
        Combination::collect(self.terms.into_iter().chain(other))
    }

    fn times(&self, other: &Combination) -> Self {
        let mut terms = Vec::new();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                terms.push((a * b, w));
            }
        }
        Combination::collect(terms)
    }

    /// The strand count fixed by the idempotents in the expression, if any.
    pub fn strands(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(_, w)| w).find_map(|l| match l {
            Letter::E(i) => Some(i.len()),
            _ => None,
        })
    }

    /// Normal form in `R_n`; fails on indices that do not fit `n` strands.
    pub fn to_element(&self, klr: &Klr, n: usize) -> Result<AffineElement> {
        let mut out = AffineElement::zero(n);
        for (c, w) in &self.terms {
            let mut word = GeneratorWord::new(n, w.clone())?;
            word.scalar = c.clone();
            out = out.plus(&klr.normal_form(&word)?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "()+-*^,".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> std::result::Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> std::result::Result<BigInt, ParseError> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn small(&mut self) -> std::result::Result<usize, ParseError> {
        let pos = self.pos();
        let v = self.int()?;
        usize::try_from(&v).map_err(|_| ParseError { pos, msg: format!("{v} is not a valid strand index") })
    }

    fn expr(&mut self) -> std::result::Result<Combination, ParseError> {
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        let mut acc = Combination::default();
        loop {
            let t = self.term()?;
            acc = acc.plus(t, sign);
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Combination, ParseError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.times(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> std::result::Result<Combination, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let k = self.int()?;
        let k = u32::try_from(&k)
            .ok()
            .filter(|&k| k <= MAX_POWER)
            .ok_or_else(|| ParseError { pos, msg: format!("exponent must be between 0 and {MAX_POWER}") })?;
        let mut acc = Combination::scalar(BigInt::one());
        for _ in 0..k {
            acc = acc.times(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> std::result::Result<Combination, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(Combination::scalar(v))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                self.expect('(')?;
                let l = match name.as_str() {
                    "e" => {
                        let mut res = vec![];
                        loop {
                            let pos = self.pos();
                            let v = self.int()?;
                            res.push(i64::try_from(&v).map_err(|_| ParseError { pos, msg: "residue out of range".into() })?);
                            if !self.eat(',') {
                                break;
                            }
                        }
                        Letter::E(res)
                    }
                    "y" => Letter::Y(self.small()?),
                    "psi" => Letter::Psi(self.small()?),
                    _ => {
                        self.at -= 2;
                        return self.err(format!("unknown generator {name:?}"));
                    }
                };
                self.expect(')')?;
                Ok(Combination::letter(l))
            }
            _ => self.err("expected a generator, an integer or '('"),
        }
    }
}

pub fn parse_expression(text: &str) -> std::result::Result<Combination, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.chars().count() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses and checks every index against `n` strands.
pub fn parse_for(text: &str, n: usize) -> Result<Combination> {
    let c = parse_expression(text)?;
    for (_, w) in &c.terms {
        for l in w {
            l.validate(n)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_sums() {
        let c = parse_expression("e(0,1)*psi(1)*y(2)").unwrap();
        assert_eq!(c.terms, vec![(BigInt::one(), vec![Letter::E(vec![0, 1]), Letter::Psi(1), Letter::Y(2)])]);
        let c = parse_expression("2*e(0,0) - e(0,0)*y(1)").unwrap();
        assert_eq!(c.terms.len(), 2);
        assert_eq!(c.terms[1].0, BigInt::from(-1));
        let c = parse_expression(" (y(1) + y(2))^2 - y(1)^2 ").unwrap();
        assert_eq!(c.terms.len(), 3);
        assert!(parse_expression("e(0)-e(0)").unwrap().terms.is_empty());
        assert_eq!(parse_expression("e(-1,0)").unwrap().strands(), Some(2));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_expression("y(1) * ").unwrap_err().pos, 7);
        assert_eq!(parse_expression("y(1) $").unwrap_err().pos, 5);
        assert_eq!(parse_expression("phi(1)").unwrap_err().pos, 0);
        assert_eq!(parse_expression("psi(1").unwrap_err().pos, 5);
        assert!(parse_expression("").is_err());
        assert!(parse_expression("y(1)^99").is_err());
        assert!(parse_for("psi(5)", 2).is_err());
        assert!(parse_for("e(0,1,2)", 2).is_err());
        assert!(parse_for("psi(1)", 2).is_ok());
    }
}
