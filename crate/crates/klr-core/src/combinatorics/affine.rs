use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::partition::{partitions, Multipartition};
use super::tableau::StandardTableau;
use crate::error::{KlrError, Result};
use crate::quiver::{Block, Multicharge, QuiverData, Residue, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    /// `Λ^(k) = Λ^(k−1) + Λ_i` with `i ≡ k (mod e)`.
    Cyclic,
    /// `e = 0`: `Λ^(k) = Λ^(k−1) + Λ_i` with `i = k − m² + m − 1` for `(m−1)² < k ≤ m²`.
    Spiral,
}

impl std::str::FromStr for SequenceKind {
    type Err = KlrError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(SequenceKind::Cyclic),
            "spiral" => Ok(SequenceKind::Spiral),
            _ => Err(KlrError::Parse(format!("unknown sequence kind {s:?}"))),
        }
    }
}

/// A standard weight sequence `Λ^(1) < Λ^(2) < ⋯` with its inverse multicharge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSequence {
    kind: SequenceKind,
    q: QuiverData,
    seed: Weight,
}

impl WeightSequence {
    pub fn new(kind: SequenceKind, q: &QuiverData, seed: Weight) -> Result<Self> {
        match (kind, q.e()) {
            (SequenceKind::Cyclic, 0) => {
                return Err(KlrError::InvalidInput("the cyclic sequence needs e > 0".into()))
            }
            (SequenceKind::Spiral, e) if e > 0 => {
                return Err(KlrError::InvalidInput("the spiral sequence needs e = 0".into()))
            }
            _ => {}
        }
        if seed.level() == 0 {
            return Err(KlrError::InvalidInput("the seed weight must have positive level".into()));
        }
        Ok(WeightSequence { kind, q: *q, seed })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn quiver(&self) -> &QuiverData {
        &self.q
    }

    pub fn seed(&self) -> &Weight {
        &self.seed
    }

    /// The residue added in passing from `Λ^(k−1)` to `Λ^(k)`, `k ≥ 2`.
    pub fn increment(&self, k: usize) -> Residue {
        match self.kind {
            SequenceKind::Cyclic => self.q.normalize(k as Residue),
            SequenceKind::Spiral => {
                let mut m = 1usize;
                while m * m < k {
                    m += 1;
                }
                let (k, m) = (k as Residue, m as Residue);
                k - m * m + m - 1
            }
        }
    }

    /// `Λ^(k)`, 1-based.
    pub fn weight(&self, k: usize) -> Weight {
        let mut w = self.seed.clone();
        for j in 2..=k {
            w.add(&self.q, self.increment(j), 1);
        }
        w
    }

    /// `ℓ_k`, the level of `Λ^(k)`.
    pub fn level(&self, k: usize) -> usize {
        self.seed.level() as usize + k.saturating_sub(1)
    }

    /// `κ_1, …, κ_len` of the inverse multicharge `(…, κ_2, κ_1)`.
    pub fn inverse_multicharge(&self, len: usize) -> Vec<Residue> {
        let mut out = self.seed.default_multicharge().entries().to_vec();
        let mut k = 2;
        while out.len() < len {
            out.push(self.increment(k));
            k += 1;
        }
        out.truncate(len);
        out
    }

    /// The multicharge `(κ_ℓ, …, κ_1)` used for level-ℓ multipartitions.
    pub fn multicharge(&self, level: usize) -> Multicharge {
        let mut entries = self.inverse_multicharge(level);
        entries.reverse();
        Multicharge::new(&self.q, entries)
    }

    /// `a_α^(k) = min_{i ∈ I^α} (Λ^(k), α_{i_1})`.
    pub fn a_alpha(&self, k: usize, alpha: &Block) -> u32 {
        alpha.min_pairing(&self.q, &self.weight(k))
    }
}

/// An affine multipartition `(…, λ^(2), λ^(1))`; only nonempty components are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineMultipartition {
    comps: BTreeMap<usize, Vec<usize>>,
}

impl AffineMultipartition {
    pub fn new(comps: impl IntoIterator<Item = (usize, Vec<usize>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, part) in comps {
            if idx == 0 || part.windows(2).any(|w| w[0] < w[1]) {
                return Err(KlrError::InvalidInput(format!("bad affine component {idx}: {part:?}")));
            }
            let part: Vec<usize> = part.into_iter().filter(|&p| p > 0).collect();
            if !part.is_empty() {
                map.insert(idx, part);
            }
        }
        Ok(AffineMultipartition { comps: map })
    }

    /// The largest index of a nonempty component (0 for the empty one).
    pub fn level(&self) -> usize {
        self.comps.keys().next_back().copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.comps.values().flatten().sum()
    }

    pub fn component(&self, idx: usize) -> &[usize] {
        self.comps.get(&idx).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// `p_ℓ`: the level-ℓ multipartition `(λ^(ℓ) | … | λ^(1))`.
    pub fn project(&self, level: usize) -> Result<Multipartition> {
        if level < self.level() {
            return Err(KlrError::InvalidInput(format!("level {level} is below {}", self.level())));
        }
        Ok(Multipartition::new((1..=level).rev().map(|i| self.component(i).to_vec()).collect()))
    }

    /// Inverse of `p_ℓ`.
    pub fn from_projection(shape: &Multipartition) -> Self {
        let l = shape.level();
        AffineMultipartition {
            comps: shape
                .components()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty())
                .map(|(j, c)| (l - j, c.clone()))
                .collect(),
        }
    }

    /// All affine multipartitions of `n` whose level is exactly `level`.
    pub fn all_of_level(n: usize, level: usize) -> Vec<Self> {
        if level == 0 {
            return if n == 0 { vec![AffineMultipartition { comps: BTreeMap::new() }] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for top in 1..=n {
            for lam_top in partitions(top) {
                for rest in Multipartition::all(n - top, level - 1) {
                    let mut comps: Vec<Vec<usize>> = vec![lam_top.clone()];
                    comps.extend(rest.components().iter().cloned());
                    out.push(AffineMultipartition::from_projection(&Multipartition::new(comps)));
                }
            }
        }
        out
    }
}

/// `q_ℓ`: standard affine tableaux correspond to standard tableaux of `p_ℓ(λ̂)`.
pub fn affine_tableaux(shape: &AffineMultipartition, level: usize) -> Result<Vec<StandardTableau>> {
    Ok(StandardTableau::all(&shape.project(level)?))
}

impl fmt::Display for AffineMultipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(…")?;
        for i in (1..=self.level()).rev() {
            let c = self.component(i);
            if c.is_empty() {
                write!(f, "|0")?;
            } else {
                write!(f, "|{}", c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))?;
            }
        }
        write!(f, ")")
    }
}
