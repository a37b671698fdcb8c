use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::perm::Perm;
use crate::error::{KlrError, Result};
use crate::quiver::{Block, QuiverData, Residue};

/// `e(i)·y^a·ψ_w` with `i` the top residue sequence and `ψ_w` spelled by the staircase word of `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KLMonomial {
    top: Vec<Residue>,
    perm: Perm,
    ys: Vec<u32>,
}

impl KLMonomial {
    pub fn new(top: Vec<Residue>, ys: Vec<u32>, perm: Perm) -> Self {
        assert!(top.len() == ys.len() && top.len() == perm.n(), "strand counts disagree");
        KLMonomial { top, perm, ys }
    }

    pub fn idempotent(top: Vec<Residue>) -> Self {
        let n = top.len();
        KLMonomial { top, perm: Perm::identity(n), ys: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    pub fn top(&self) -> &[Residue] {
        &self.top
    }

    pub fn ys(&self) -> &[u32] {
        &self.ys
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn word(&self) -> Vec<usize> {
        self.perm.canonical_word()
    }

    /// The residues at the bottom of the diagram, `i · w`.
    pub fn bottom(&self) -> Vec<Residue> {
        self.perm.act(&self.top)
    }

    pub fn block(&self, q: &QuiverData) -> Block {
        Block::of_sequence(q, &self.top)
    }

    /// `2·Σa_r` plus `−a_{i_p,i_q}` over every crossing pair of strands.
    pub fn degree(&self, q: &QuiverData) -> i64 {
        2 * self.ys.iter().map(|&a| a as i64).sum::<i64>() + psi_degree(q, &self.top, &self.perm)
    }

    pub fn psi_count(&self) -> usize {
        self.perm.length()
    }

    pub(crate) fn with_extra_y(&self, extra: &[u32]) -> Self {
        let mut m = self.clone();
        for (a, b) in m.ys.iter_mut().zip(extra) {
            *a += b;
        }
        m
    }

    /// The letters `E(i), Y…, PSI…` spelling this monomial.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = vec![Letter::E(self.top.clone())];
        for (r, &a) in self.ys.iter().enumerate() {
            out.extend(std::iter::repeat_n(Letter::Y(r + 1), a as usize));
        }
        out.extend(self.word().into_iter().map(Letter::Psi));
        out
    }
}

/// Degree of `e(i) ψ_w`.
pub fn psi_degree(q: &QuiverData, top: &[Residue], perm: &Perm) -> i64 {
    let n = top.len();
    let mut d = 0;
    for a in 1..=n {
        for b in a + 1..=n {
            if perm.crosses(a, b) {
                d -= q.cartan(top[a - 1], top[b - 1]);
            }
        }
    }
    d
}

/// A generator of the KLR algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    E(Vec<Residue>),
    Y(usize),
    Psi(usize),
}

impl Letter {
    /// Checks the indices against `n` strands.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ok = match self {
            Letter::E(i) => i.len() == n,
            Letter::Y(r) => (1..=n).contains(r),
            Letter::Psi(r) => *r >= 1 && *r < n,
        };
        if ok {
            Ok(())
        } else {
            Err(KlrError::InvalidInput(format!("{self} is out of range for {n} strands")))
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::E(i) => write!(f, "e({})", i.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")),
            Letter::Y(r) => write!(f, "y({r})"),
            Letter::Psi(r) => write!(f, "psi({r})"),
        }
    }
}

/// A scalar times a product of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    pub n: usize,
    pub scalar: BigInt,
    pub letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        let w = GeneratorWord { n, scalar: BigInt::one(), letters };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        self.letters.iter().try_for_each(|l| l.validate(self.n))
    }

    pub fn reversed(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        GeneratorWord { n: self.n, scalar: self.scalar.clone(), letters }
    }

    /// The top residue sequence forced by the first idempotent letter, if any.
    pub fn forced_top(&self) -> Option<Vec<Residue>> {
        let first = self.letters.iter().position(|l| matches!(l, Letter::E(_)))?;
        let Letter::E(i) = &self.letters[first] else { unreachable!() };
        let mut top = i.clone();
        for l in self.letters[..first].iter().rev() {
            if let Letter::Psi(r) = l {
                top.swap(r - 1, *r);
            }
        }
        Some(top)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        if self.scalar.is_one() && !body.is_empty() {
            write!(f, "{}", body.join("*"))
        } else if body.is_empty() {
            write!(f, "{}", self.scalar)
        } else {
            write!(f, "{}*{}", self.scalar, body.join("*"))
        }
    }
}

/// Degree data of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// A finite integer combination of monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    n: usize,
    terms: BTreeMap<KLMonomial, BigInt>,
}

impl AffineElement {
    pub fn zero(n: usize) -> Self {
        AffineElement { n, terms: BTreeMap::new() }
    }

    pub fn monomial(m: KLMonomial) -> Self {
        let n = m.n();
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        AffineElement { n, terms }
    }

    pub fn idempotent(top: Vec<Residue>) -> Self {
        AffineElement::monomial(KLMonomial::idempotent(top))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (KLMonomial, BigInt)>) -> Self {
        let mut e = AffineElement::zero(n);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&KLMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &KLMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: KLMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.n(), self.n);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &AffineElement, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = AffineElement::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &AffineElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    pub fn minus(&self, other: &AffineElement) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-BigInt::one());
        out
    }

    pub fn degree(&self, q: &QuiverData) -> Degree {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(q);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Degree::Inhomogeneous,
                _ => {}
            }
        }
        deg.map_or(Degree::Zero, Degree::Homogeneous)
    }

    /// Homogeneous single-block pieces keyed by (block, degree).
    pub fn components(&self, q: &QuiverData) -> BTreeMap<(Block, i64), AffineElement> {
        let mut out: BTreeMap<(Block, i64), AffineElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry((m.block(q), m.degree(q)))
                .or_insert_with(|| AffineElement::zero(self.n))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Serializable records `{residues, y_exponents, word, coefficient}`.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                residues: m.top.clone(),
                y_exponents: m.ys.clone(),
                word: m.word(),
                coefficient: c.to_string(),
            })
            .collect()
    }

    pub fn from_records(n: usize, records: &[TermRecord]) -> Result<Self> {
        let mut out = AffineElement::zero(n);
        for r in records {
            if r.residues.len() != n || r.y_exponents.len() != n || r.word.iter().any(|&s| s == 0 || s >= n) {
                return Err(KlrError::Parse(format!("record does not describe {n} strands")));
            }
            let perm = Perm::from_word(n, &r.word);
            if perm.canonical_word() != r.word {
                return Err(KlrError::Parse(format!("word {:?} is not in staircase form", r.word)));
            }
            let c: BigInt = r
                .coefficient
                .parse()
                .map_err(|_| KlrError::Parse(format!("bad coefficient {:?}", r.coefficient)))?;
            out.add_term(KLMonomial::new(r.residues.clone(), r.y_exponents.clone(), perm), c);
        }
        Ok(out)
    }
}

/// One term of an element in serialized form. Integers are written as decimal strings;
/// bare JSON numbers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    #[serde(with = "decimal_list")]
    pub residues: Vec<Residue>,
    #[serde(with = "decimal_list")]
    pub y_exponents: Vec<u32>,
    #[serde(with = "decimal_list")]
    pub word: Vec<usize>,
    pub coefficient: String,
}

mod decimal_list {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Text(String),
        Number(i64),
    }

    pub fn serialize<T: Display, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| {
                let text = match e {
                    Entry::Text(t) => t,
                    Entry::Number(n) => n.to_string(),
                };
                text.parse().map_err(|_| D::Error::custom(format!("bad integer {text:?}")))
            })
            .collect()
    }
}

impl fmt::Display for KLMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.top.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))?;
        for (r, &a) in self.ys.iter().enumerate() {
            match a {
                0 => {}
                1 => write!(f, "*y({})", r + 1)?,
                _ => write!(f, "*y({})^{a}", r + 1)?,
            }
        }
        for s in self.word() {
            write!(f, "*psi({s})")?;
        }
        Ok(())
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}{sign}{}{m}", if k > 0 { " " } else { "" })?;
            } else {
                write!(f, "{sep}{sign}{}{mag}*{m}", if k > 0 { " " } else { "" })?;
            }
        }
        Ok(())
    }
}
