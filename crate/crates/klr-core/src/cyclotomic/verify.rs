//! ψ-vectors against an ideal slice: rank, unimodularity and integral expansion.
//!
//! With `D` free columns and `k` ψ-vectors we reduce the augmented lattice
//! `[L | 0 ; ψ_j | e_j]` of width `D + k`. The ψ's form a Z-basis of the quotient slice
//! exactly when its pivots are the columns `0..D` and all of them equal 1: then every `v`
//! reduces to `[0 | τ]` and `v ≡ −Σ τ_j ψ_j`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::slice::IdealComponent;
use crate::error::{KlrError, Result};
use crate::intlinalg::{RowLattice, SparseVec};
use crate::quiver::Block;

#[derive(Clone, Debug)]
pub struct PsiSlice {
    pub block: Block,
    pub degree: i64,
    /// Indices into the algebra's ψ-basis.
    pub members: Vec<usize>,
    /// Coordinates of the members modulo `span(M)`.
    pub rows: Vec<SparseVec>,
    pub quotient_rank: usize,
    pub unimodular: bool,
    aug: RowLattice,
    width: usize,
}

impl PsiSlice {
    pub fn new(ideal: &IdealComponent, members: Vec<usize>, rows: Vec<SparseVec>) -> Result<Self> {
        let d = ideal.width();
        let k = rows.len();
        let mut aug = RowLattice::new(d + k);
        for r in ideal.lattice.hnf_rows() {
            aug.insert(&r)?;
        }
        for (j, r) in rows.iter().enumerate() {
            let mut v = r.clone();
            v.push((d + j, BigInt::one()));
            aug.insert(&v)?;
        }
        let pivots = aug.pivots();
        let unimodular = pivots.len() == d
            && pivots.iter().enumerate().all(|(a, &b)| a == b)
            && aug.pivot_values().iter().all(|v| v.is_one());
        Ok(PsiSlice {
            block: ideal.block.clone(),
            degree: ideal.degree,
            members,
            rows,
            quotient_rank: ideal.quotient_rank(),
            unimodular,
            aug,
            width: d,
        })
    }

    pub fn psi_count(&self) -> usize {
        self.members.len()
    }

    /// Integers `c_j` with `v ≡ Σ c_j ψ_{members[j]}` modulo the ideal.
    pub fn expand(&self, v: &[(usize, BigInt)]) -> Result<Vec<(usize, BigInt)>> {
        let r = self.aug.reduce(v)?;
        if let Some((c, _)) = r.iter().find(|(c, _)| *c < self.width) {
            return Err(KlrError::Mismatch(format!(
                "slice ({}, {}): column {c} is not reached by the ψ-vectors",
                self.block, self.degree
            )));
        }
        Ok(r.into_iter()
            .filter(|(_, t)| !t.is_zero())
            .map(|(c, t)| (self.members[c - self.width], -t))
            .collect())
    }

    pub fn report(&self) -> SliceReport {
        SliceReport {
            alpha: self.block.to_string(),
            degree: self.degree,
            quotient_rank: self.quotient_rank,
            psi_count: self.psi_count(),
            unimodular: self.unimodular,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceReport {
    pub alpha: String,
    pub degree: i64,
    pub quotient_rank: usize,
    pub psi_count: usize,
    pub unimodular: bool,
}

impl SliceReport {
    pub fn ok(&self) -> bool {
        self.quotient_rank == self.psi_count && self.unimodular
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub e: u32,
    pub charge: String,
    pub n: usize,
    pub slices: Vec<SliceReport>,
    /// Blocks carrying no ψ-element, checked to vanish in degree 0.
    pub empty_blocks: Vec<SliceReport>,
    pub psi_total: usize,
    pub rank_total: usize,
    pub expected: String,
    pub ok: bool,
    pub note: String,
}
