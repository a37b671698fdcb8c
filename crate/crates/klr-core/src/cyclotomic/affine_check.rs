//! Minimum ideal degrees and the affine basis `{ψ_{ŝt̂}}` of `R_α`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basis::PsiBasisElement;
use super::slice::component_monomials;
use super::CyclotomicAlgebra;
use crate::affine_algebra::Klr;
use crate::combinatorics::{AffineMultipartition, StandardTableau, WeightSequence};
use crate::error::{KlrError, Result};
use crate::intlinalg::{RowLattice, SparseVec};
use crate::par;
use crate::quiver::Block;

/// The least `d` with `N^Λ_{α,d} ≠ 0`, found by scanning up from `2a_α − 2n(n−1)`.
pub fn min_degree(alg: &CyclotomicAlgebra, block: &Block) -> Result<i64> {
    let q = alg.klr().quiver();
    let n = block.size() as i64;
    let a = i64::from(block.min_pairing(q, alg.weight()));
    // e(i) y_1^{a} with (Λ, α_{i_1}) = a lies in the ideal, so the scan stops by 2a.
    for d in 2 * a - 2 * n * (n - 1)..=2 * a {
        if alg.ideal(block, d)?.ideal_nonzero() {
            return Ok(d);
        }
    }
    Err(KlrError::Mismatch(format!("no ideal element of degree at most {} in block {block}", 2 * a)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSliceReport {
    pub alpha: String,
    pub degree: i64,
    /// Levels of the affine multipartitions that can contribute in this degree.
    pub levels: Vec<usize>,
    pub elements: usize,
    pub monomials: usize,
    pub square: bool,
    pub unimodular: bool,
    /// Elements of level above the seed level.
    pub high_level: usize,
    /// Whether those span exactly `N^{Λ^(1)}_{α,d}`.
    pub spans_ideal: bool,
}

impl AffineSliceReport {
    pub fn ok(&self) -> bool {
        self.square && self.unimodular && self.spans_ideal
    }
}

/// Levels `L` whose ψ-elements can reach degree `d`. The first strand of such an element
/// carries `y_1^{c(L)}` with `c(L) = #{j < L : κ_j = κ_L}` and the two crossing words have
/// degree at least `−n(n−1)` together with the idempotent, so `2c(L) − 2n(n−1) ≤ d`.
fn candidate_levels(ws: &WeightSequence, block: &Block, d: i64) -> Result<Vec<usize>> {
    let n = block.size() as i64;
    let bound = d + 2 * n * (n - 1);
    if bound < 0 {
        return Ok(Vec::new());
    }
    let cmax = (bound / 2) as usize;
    let support: Vec<i64> = block.support().collect();
    const LEVEL_CAP: usize = 4096;
    let mut counts = std::collections::HashMap::new();
    let mut out = Vec::new();
    let stream = ws.inverse_multicharge(LEVEL_CAP);
    for (j, &k) in stream.iter().enumerate() {
        let c = counts.entry(k).or_insert(0usize);
        if support.contains(&k) && *c <= cmax {
            out.push(j + 1);
        }
        *c += 1;
        if support.iter().all(|i| counts.get(i).copied().unwrap_or(0) > cmax) {
            return Ok(out);
        }
    }
    Err(KlrError::InvalidInput(format!("the weight sequence does not revisit every residue of {block}")))
}

/// Square-and-unimodular check of the `ψ_{ŝt̂}` of degree `d` in block `α`, and the
/// ideal-spanning property of those of level above `ℓ(Λ^(1))`.
pub fn affine_basis_check(klr: Arc<Klr>, ws: &WeightSequence, block: &Block, d: i64) -> Result<AffineSliceReport> {
    let q = *klr.quiver();
    let n = block.size();
    let levels = candidate_levels(ws, block, d)?;
    let mut jobs = Vec::new();
    for &level in &levels {
        let charge = ws.multicharge(level);
        for shape in AffineMultipartition::all_of_level(n, level) {
            let proj = shape.project(level)?;
            let tabs = StandardTableau::all(&proj);
            for s in &tabs {
                if Block::of_sequence(&q, &s.residue_sequence(&charge, &q)?) != *block {
                    continue;
                }
                for t in &tabs {
                    jobs.push((level, charge.clone(), proj.clone(), s.clone(), t.clone()));
                }
            }
        }
    }
    let built = par::try_map(&jobs, |(level, charge, shape, s, t)| {
        PsiBasisElement::build(&klr, charge, shape, s, t).map(|b| (*level, b))
    })?;
    let elements: Vec<(usize, PsiBasisElement)> = built.into_iter().filter(|(_, b)| b.degree == d).collect();

    let columns = component_monomials(&q, block, d);
    let index: std::collections::HashMap<_, _> = columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let coords = |b: &PsiBasisElement| -> Result<SparseVec> {
        let mut v: SparseVec = b
            .element
            .terms()
            .map(|(m, c)| {
                index.get(m).map(|&i| (i, c.clone())).ok_or_else(|| KlrError::Mismatch(format!("{b} leaves the slice")))
            })
            .collect::<Result<_>>()?;
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    };
    let mut all = RowLattice::new(columns.len());
    let mut high = RowLattice::new(columns.len());
    let seed_level = ws.seed().level() as usize;
    let mut high_level = 0;
    for (level, b) in &elements {
        let v = coords(b)?;
        all.insert(&v)?;
        if *level > seed_level {
            high.insert(&v)?;
            high_level += 1;
        }
    }
    let square = elements.len() == columns.len();
    let unimodular = square && all.is_full() && all.pivot_values().iter().all(|p| p == &1.into());

    let seed = CyclotomicAlgebra::new(klr.clone(), ws.multicharge(seed_level), n)?;
    let ideal = seed.ideal(block, d)?;
    let spans_ideal = ideal.full_hnf(&q, seed.weight())? == high.hnf_rows() && high.rank() == high_level;

    Ok(AffineSliceReport {
        alpha: block.to_string(),
        degree: d,
        levels,
        elements: elements.len(),
        monomials: columns.len(),
        square,
        unimodular,
        high_level,
        spans_ideal,
    })
}
