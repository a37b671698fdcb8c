//! The quiver Γ_e, its Cartan matrix, weights, multicharges and blocks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{KlrError, Result};

/// A vertex of Γ_e. Normalized into `[0, e)` when `e > 0`; any integer when `e = 0`.
pub type Residue = i64;

/// The quantum characteristic `e`, either 0 or at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuiverData {
    e: u32,
}

impl QuiverData {
    pub fn new(e: u32) -> Result<Self> {
        if e == 1 {
            return Err(KlrError::InvalidInput("e = 1 is not allowed".into()));
        }
        Ok(QuiverData { e })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn normalize(&self, i: Residue) -> Residue {
        if self.e == 0 {
            i
        } else {
            i.rem_euclid(self.e as Residue)
        }
    }

    /// Is `j = i + 1` in Γ_e, i.e. is there an edge `i → j`?
    pub fn is_successor(&self, i: Residue, j: Residue) -> bool {
        self.normalize(i + 1) == self.normalize(j)
    }

    pub fn adjacent(&self, i: Residue, j: Residue) -> bool {
        self.is_successor(i, j) || self.is_successor(j, i)
    }

    /// The Cartan entry `a_{ij}`.
    pub fn cartan(&self, i: Residue, j: Residue) -> i64 {
        let (i, j) = (self.normalize(i), self.normalize(j));
        if i == j {
            2
        } else if !self.adjacent(i, j) {
            0
        } else if self.e == 2 {
            -2
        } else {
            -1
        }
    }

    /// All residues when `e > 0`. Panics for `e = 0`, where `I` is infinite.
    pub fn residues(&self) -> Vec<Residue> {
        assert!(self.e > 0, "the vertex set is infinite when e = 0");
        (0..self.e as Residue).collect()
    }
}

/// A dominant weight `Λ = Σ a_i Λ_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    coeffs: BTreeMap<Residue, u32>,
}

impl Weight {
    pub fn new(q: &QuiverData, coeffs: impl IntoIterator<Item = (Residue, u32)>) -> Self {
        let mut w = Weight::default();
        for (i, a) in coeffs {
            w.add(q, i, a);
        }
        w
    }

    pub fn fundamental(q: &QuiverData, i: Residue) -> Self {
        Weight::new(q, [(i, 1)])
    }

    pub fn add(&mut self, q: &QuiverData, i: Residue, a: u32) {
        if a > 0 {
            *self.coeffs.entry(q.normalize(i)).or_insert(0) += a;
        }
    }

    /// `(Λ, α_i)`.
    pub fn pairing(&self, q: &QuiverData, i: Residue) -> u32 {
        self.coeffs.get(&q.normalize(i)).copied().unwrap_or(0)
    }

    pub fn level(&self) -> u32 {
        self.coeffs.values().sum()
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (Residue, u32)> + '_ {
        self.coeffs.iter().map(|(&i, &a)| (i, a))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Weight) -> bool {
        self.coeffs.iter().all(|(i, a)| other.coeffs.get(i).copied().unwrap_or(0) >= *a)
    }

    pub fn of_multicharge(q: &QuiverData, charge: &Multicharge) -> Self {
        Weight::new(q, charge.entries().iter().map(|&k| (k, 1)))
    }

    /// The multicharge listing residues in ascending order.
    pub fn default_multicharge(&self) -> Multicharge {
        Multicharge {
            entries: self
                .coeffs
                .iter()
                .flat_map(|(&i, &a)| std::iter::repeat_n(i, a as usize))
                .collect(),
        }
    }

    /// The multicharge with the given residue ordering, checked against the multiplicities.
    pub fn multicharge_with(&self, q: &QuiverData, ordering: &[Residue]) -> Result<Multicharge> {
        let charge = Multicharge::new(q, ordering.to_vec());
        if Weight::of_multicharge(q, &charge) != *self {
            return Err(KlrError::InvalidInput(format!(
                "ordering {charge} does not realize the weight {self}"
            )));
        }
        Ok(charge)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(i, a)| format!("{a}*L{i}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Weight {
    /// Parses `"2*L0+L1"`; a bare `Lk` has coefficient 1. Residues are normalized for `q`.
    pub fn parse(q: &QuiverData, text: &str) -> Result<Self> {
        let mut w = Weight::default();
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "0" {
            return Ok(w);
        }
        for term in text.split('+') {
            let (coef, name) = match term.split_once('*') {
                Some((c, n)) => (c.parse::<u32>().map_err(|_| bad_weight(term))?, n),
                None => (1, term),
            };
            let idx = name
                .strip_prefix('L')
                .and_then(|s| s.parse::<Residue>().ok())
                .ok_or_else(|| bad_weight(term))?;
            w.add(q, idx, coef);
        }
        Ok(w)
    }
}

fn bad_weight(term: &str) -> KlrError {
    KlrError::Parse(format!("bad weight term {term:?}, expected a*Li"))
}

/// A multicharge `(κ_1, …, κ_ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multicharge {
    entries: Vec<Residue>,
}

impl Multicharge {
    pub fn new(q: &QuiverData, entries: Vec<Residue>) -> Self {
        Multicharge { entries: entries.into_iter().map(|k| q.normalize(k)).collect() }
    }

    pub fn entries(&self) -> &[Residue] {
        &self.entries
    }

    pub fn level(&self) -> usize {
        self.entries.len()
    }

    /// `κ_l` for a 1-based component index.
    pub fn get(&self, l: usize) -> Option<Residue> {
        l.checked_sub(1).and_then(|i| self.entries.get(i).copied())
    }

    pub fn parse(q: &QuiverData, text: &str) -> Result<Self> {
        let entries = text
            .split(',')
            .map(|s| s.trim().parse::<Residue>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| KlrError::Parse(format!("bad multicharge {text:?}")))?;
        if entries.is_empty() {
            return Err(KlrError::Parse("empty multicharge".into()));
        }
        Ok(Multicharge::new(q, entries))
    }
}

impl fmt::Display for Multicharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An element `α = Σ α_i` of the positive root lattice, as a residue multiset.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    mult: BTreeMap<Residue, u32>,
}

impl Block {
    pub fn of_sequence(q: &QuiverData, seq: &[Residue]) -> Self {
        let mut mult = BTreeMap::new();
        for &i in seq {
            *mult.entry(q.normalize(i)).or_insert(0) += 1;
        }
        Block { mult }
    }

    pub fn size(&self) -> usize {
        self.mult.values().map(|&m| m as usize).sum()
    }

    pub fn multiplicity(&self, i: Residue) -> u32 {
        self.mult.get(&i).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = Residue> + '_ {
        self.mult.keys().copied()
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = (Residue, u32)> + '_ {
        self.mult.iter().map(|(&i, &m)| (i, m))
    }

    /// All sequences in `I^α`, lexicographically ordered.
    pub fn sequences(&self) -> Vec<Vec<Residue>> {
        let mut out = Vec::new();
        let mut remaining: Vec<(Residue, u32)> = self.multiplicities().collect();
        let mut cur = Vec::with_capacity(self.size());
        fn rec(rem: &mut [(Residue, u32)], cur: &mut Vec<Residue>, n: usize, out: &mut Vec<Vec<Residue>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for idx in 0..rem.len() {
                if rem[idx].1 > 0 {
                    rem[idx].1 -= 1;
                    cur.push(rem[idx].0);
                    rec(rem, cur, n, out);
                    cur.pop();
                    rem[idx].1 += 1;
                }
            }
        }
        let n = self.size();
        rec(&mut remaining, &mut cur, n, &mut out);
        out
    }

    /// `a_α = min_{i ∈ I^α} (Λ, α_{i_1})`.
    pub fn min_pairing(&self, q: &QuiverData, weight: &Weight) -> u32 {
        self.support().map(|i| weight.pairing(q, i)).min().unwrap_or(0)
    }

    /// Parses a comma-separated residue multiset such as `"0,0,1"`, or the root form
    /// `"2*a0+a1"` printed by `Display`.
    pub fn parse(q: &QuiverData, text: &str) -> Result<Self> {
        let bad = || KlrError::Parse(format!("bad block {text:?}"));
        if text.contains('a') {
            let mut seq = Vec::new();
            for part in text.split('+') {
                let part = part.trim();
                let (m, root) = match part.split_once('*') {
                    Some((m, r)) => (m.trim().parse::<usize>().map_err(|_| bad())?, r.trim()),
                    None => (1, part),
                };
                let i = root.strip_prefix('a').and_then(|r| r.parse::<Residue>().ok()).ok_or_else(bad)?;
                seq.extend(std::iter::repeat_n(i, m));
            }
            return Ok(Block::of_sequence(q, &seq));
        }
        let seq = text
            .split(',')
            .map(|s| s.trim().parse::<Residue>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Ok(Block::of_sequence(q, &seq))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(i, m)| if *m == 1 { format!("a{i}") } else { format!("{m}*a{i}") })
            .collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join("+") })
    }
}

impl FromStr for QuiverData {
    type Err = KlrError;
    fn from_str(s: &str) -> Result<Self> {
        let e = s.trim().parse::<u32>().map_err(|_| KlrError::Parse(format!("bad e {s:?}")))?;
        QuiverData::new(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: u32) -> QuiverData {
        QuiverData::new(e).unwrap()
    }

    #[test]
    fn block_text_round_trips() {
        let b = Block::parse(&q(3), "0,1,0,4").unwrap();
        assert_eq!(b.to_string(), "2*a0+2*a1");
        assert_eq!(Block::parse(&q(3), "2*a0+2*a1").unwrap(), b);
        assert_eq!(Block::parse(&q(0), "a-1+a0").unwrap(), Block::parse(&q(0), "-1,0").unwrap());
        assert!(Block::parse(&q(3), "a0+b1").is_err());
    }

    #[test]
    fn cartan_entries() {
        assert_eq!(q(4).cartan(1, 1), 2);
        assert_eq!(q(4).cartan(0, 2), 0);
        assert_eq!(q(2).cartan(0, 1), -2);
        assert_eq!(q(4).cartan(3, 0), -1);
        assert_eq!(q(0).cartan(-1, 0), -1);
        assert_eq!(q(0).cartan(3, 0), 0);
        assert_eq!(q(3).cartan(0, 2), -1);
    }

    #[test]
    fn e_one_rejected() {
        assert!(QuiverData::new(1).is_err());
    }

    #[test]
    fn weight_from_charge() {
        let q4 = q(4);
        let w = Weight::of_multicharge(&q4, &Multicharge::new(&q4, vec![0, 0, 2, 1]));
        assert_eq!(w, Weight::new(&q4, [(0, 2), (1, 1), (2, 1)]));
        assert_eq!(w.to_string(), "2*L0+1*L1+1*L2");
        assert_eq!(Weight::parse(&q4, "2*L0+L1+L2").unwrap(), w);
        let q3 = q(3);
        let w = Weight::new(&q3, [(1, 1), (2, 1)]);
        assert_eq!(w.multicharge_with(&q3, &[2, 1]).unwrap().entries(), &[2, 1]);
        assert!(w.multicharge_with(&q3, &[2, 2]).is_err());
    }

    #[test]
    fn block_sequences() {
        let q2 = q(2);
        assert_eq!(Block::of_sequence(&q2, &[0, 1]).sequences(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(Block::of_sequence(&q2, &[0, 0]).sequences(), vec![vec![0, 0]]);
        assert_eq!(Block::of_sequence(&q(3), &[0, 1, 2]).sequences().len(), 6);
    }
}
