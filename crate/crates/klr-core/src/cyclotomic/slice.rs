//! Graded pieces `R_{α,d}` and the ideal slices `N^Λ_{α,d}`.
//!
//! Every monomial `e(i) y^b ψ_w` with `b_1 ≥ (Λ, α_{i_1})` lies in `N^Λ`; call these the
//! M-monomials. Their span is the right ideal generated by the `e(i) y_1^{(Λ,α_{i_1})}`, and
//! left multiplication by `e(j)`, `y_r` or `ψ_r` with `r ≥ 2` preserves it. Hence
//! `N^Λ = span(M) + Σ_k ψ_k ψ_{k−1} ⋯ ψ_1 · span(M)`, the `s_k ⋯ s_1` being the minimal
//! coset representatives for the stabilizer of strand 1. Modulo `span(M)` a slice is the free
//! module on the remaining monomials, so `N` is stored as a lattice there.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::affine_algebra::{psi_degree, AffineElement, KLMonomial, Klr, Letter, Perm};
use crate::error::{KlrError, Result};
use crate::intlinalg::{RowLattice, SparseVec};
use crate::par;
use crate::quiver::{Block, QuiverData, Residue, Weight};

/// Compositions of `total` into `parts` nonnegative parts, lexicographic.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomials `e(top) y^b ψ_w` of degree `d`, optionally with `b_1 ≥ min_y1`.
pub(crate) fn monomials_with_top(q: &QuiverData, top: &[Residue], d: i64, min_y1: u32) -> Vec<KLMonomial> {
    let n = top.len();
    let mut out = Vec::new();
    for w in Perm::all(n) {
        let rest = d - psi_degree(q, top, &w);
        if rest < 0 || rest % 2 != 0 {
            continue;
        }
        let total = (rest / 2) as u32;
        if total < min_y1 {
            continue;
        }
        for mut ys in compositions(total - min_y1, n) {
            ys[0] += min_y1;
            out.push(KLMonomial::new(top.to_vec(), ys, w.clone()));
        }
    }
    out
}

/// All monomials of degree `d` in block `α`, sorted by `(i, w, b)`.
pub fn component_monomials(q: &QuiverData, block: &Block, d: i64) -> Vec<KLMonomial> {
    let mut out: Vec<KLMonomial> =
        block.sequences().iter().flat_map(|top| monomials_with_top(q, top, d, 0)).collect();
    out.sort();
    out
}

/// Whether a monomial lies in the span of the M-monomials.
pub(crate) fn in_m_span(q: &QuiverData, weight: &Weight, m: &KLMonomial) -> bool {
    m.ys()[0] >= weight.pairing(q, m.top()[0])
}

/// The slice `N^Λ_{α,d}`, stored modulo the M-monomials.
#[derive(Clone, Debug)]
pub struct IdealComponent {
    pub block: Block,
    pub degree: i64,
    /// Monomials of the slice outside `span(M)`; coordinates refer to this order.
    pub columns: Vec<KLMonomial>,
    index: HashMap<KLMonomial, usize>,
    /// The image of `N` in the free module on `columns`.
    pub lattice: RowLattice,
    /// Number of monomials in the whole slice.
    pub slice_dimension: usize,
}

/// `ψ_k ψ_{k−1} ⋯ ψ_1` letters.
fn coset_letters(k: usize) -> Vec<Letter> {
    (1..=k).rev().map(Letter::Psi).collect()
}

/// Top residues and degree of `ψ_k ⋯ ψ_1 e(bottom)`.
fn coset_top_and_degree(q: &QuiverData, k: usize, bottom: &[Residue]) -> (Vec<Residue>, i64) {
    let mut top = bottom.to_vec();
    for r in 1..=k {
        top.swap(r - 1, r);
    }
    let mut cur = top.clone();
    let mut d = 0;
    for r in (1..=k).rev() {
        d -= q.cartan(cur[r - 1], cur[r]);
        cur.swap(r - 1, r);
    }
    debug_assert_eq!(cur, bottom);
    (top, d)
}

impl IdealComponent {
    fn assemble(block: &Block, degree: i64, columns: Vec<KLMonomial>, lattice: RowLattice, full: usize) -> Self {
        let index = columns.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        IdealComponent { block: block.clone(), degree, columns, index, lattice, slice_dimension: full }
    }

    /// Monomials outside `span(M)` and the dimension of the whole slice.
    pub fn free_columns(q: &QuiverData, weight: &Weight, block: &Block, degree: i64) -> (Vec<KLMonomial>, usize) {
        let all = component_monomials(q, block, degree);
        let full = all.len();
        (all.into_iter().filter(|m| !in_m_span(q, weight, m)).collect(), full)
    }

    /// Builds the slice from the coset-reduced generators.
    pub fn compute(klr: &Klr, weight: &Weight, block: &Block, degree: i64) -> Result<Self> {
        let (columns, full) = IdealComponent::free_columns(klr.quiver(), weight, block, degree);
        let mut comp = IdealComponent::assemble(block, degree, columns, RowLattice::new(0), full);
        comp.lattice = RowLattice::new(comp.columns.len());
        if comp.columns.is_empty() {
            return Ok(comp);
        }
        let rows = comp.generator_rows(klr, weight)?;
        for r in rows {
            comp.lattice.insert(&r)?;
            if comp.lattice.is_full() {
                break;
            }
        }
        Ok(comp)
    }

    /// Restores a slice from cached columns and Hermite rows.
    pub fn from_parts(block: &Block, degree: i64, columns: Vec<KLMonomial>, hnf: Vec<SparseVec>, full: usize) -> Result<Self> {
        let lattice = RowLattice::from_echelon_rows(columns.len(), hnf)?;
        Ok(IdealComponent::assemble(block, degree, columns, lattice, full))
    }

    /// Projected generator rows, deduplicated and sorted sparsest first.
    fn generator_rows(&self, klr: &Klr, weight: &Weight) -> Result<Vec<SparseVec>> {
        let q = klr.quiver();
        let n = self.block.size();
        let mut jobs: Vec<(usize, KLMonomial)> = Vec::new();
        for k in 1..n {
            for bottom in self.block.sequences() {
                let (_, dc) = coset_top_and_degree(q, k, &bottom);
                let a = weight.pairing(q, bottom[0]);
                for m in monomials_with_top(q, &bottom, self.degree - dc, a) {
                    jobs.push((k, m));
                }
            }
        }
        let rows = par::try_map(&jobs, |(k, m)| -> Result<SparseVec> {
            let (top, _) = coset_top_and_degree(q, *k, m.top());
            let mut letters = coset_letters(*k);
            letters.extend(m.letters());
            let x = klr.fold(AffineElement::idempotent(top), &letters);
            self.project(q, weight, &x)
        })?;
        let unique: BTreeSet<(usize, SparseVec)> =
            rows.into_iter().filter(|r| !r.is_empty()).map(|r| (r.len(), r)).collect();
        Ok(unique.into_iter().map(|(_, r)| r).collect())
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn column_of(&self, m: &KLMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of `x` modulo `span(M)`; `x` must lie in this slice.
    pub fn project(&self, q: &QuiverData, weight: &Weight, x: &AffineElement) -> Result<SparseVec> {
        let mut out: SparseVec = Vec::new();
        for (m, c) in x.terms() {
            if in_m_span(q, weight, m) {
                continue;
            }
            match self.index.get(m) {
                Some(&i) => out.push((i, c.clone())),
                None => {
                    return Err(KlrError::InvalidInput(format!(
                        "{m} is not in the slice ({}, {})",
                        self.block, self.degree
                    )))
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn element_of(&self, v: &[(usize, BigInt)]) -> AffineElement {
        let n = self.block.size();
        AffineElement::from_terms(n, v.iter().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (self.columns[*i].clone(), c.clone())))
    }

    /// The canonical representative of `x` modulo `N`.
    pub fn reduce(&self, q: &QuiverData, weight: &Weight, x: &AffineElement) -> Result<AffineElement> {
        let v = self.project(q, weight, x)?;
        Ok(self.element_of(&self.lattice.reduce(&v)?))
    }

    /// Rank of the quotient slice `R^Λ_{α,d}`.
    pub fn quotient_rank(&self) -> usize {
        self.width() - self.lattice.rank()
    }

    /// Whether `N^Λ_{α,d}` itself is nonzero.
    pub fn ideal_nonzero(&self) -> bool {
        self.slice_dimension > self.width() || self.lattice.rank() > 0
    }

    /// Hermite rows of `N^Λ_{α,d}` over all monomials of the slice, in the order of
    /// `component_monomials`.
    pub fn full_hnf(&self, q: &QuiverData, weight: &Weight) -> Result<Vec<SparseVec>> {
        let all = component_monomials(q, &self.block, self.degree);
        let mut free = Vec::with_capacity(self.width());
        let mut lattice = RowLattice::new(all.len());
        for (j, m) in all.iter().enumerate() {
            if in_m_span(q, weight, m) {
                lattice.insert(&[(j, BigInt::from(1))])?;
            } else {
                free.push(j);
            }
        }
        for r in self.lattice.hnf_rows() {
            let lifted: SparseVec = r.into_iter().map(|(c, v)| (free[c], v)).collect();
            lattice.insert(&lifted)?;
        }
        Ok(lattice.hnf_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        let q3 = QuiverData::new(3).unwrap();
        let b = Block::parse(&q3, "0").unwrap();
        let ms = component_monomials(&q3, &b, 4);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].ys(), &[2]);
        let q2 = QuiverData::new(2).unwrap();
        let ms = component_monomials(&q2, &Block::parse(&q2, "0,0").unwrap(), -2);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].word(), vec![1]);
        assert_eq!(component_monomials(&q3, &Block::parse(&q3, "0,1").unwrap(), 1).len(), 2);
    }

    #[test]
    fn coset_degrees() {
        let q3 = QuiverData::new(3).unwrap();
        let (top, d) = coset_top_and_degree(&q3, 2, &[0, 1, 1]);
        assert_eq!(top, vec![1, 1, 0]);
        assert_eq!(d, 2);
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }
}
