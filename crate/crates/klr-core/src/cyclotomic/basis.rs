use std::fmt;

use crate::affine_algebra::{AffineElement, Degree, Klr};
use crate::combinatorics::{Multipartition, StandardTableau};
use crate::error::{KlrError, Result};
use crate::par;
use crate::quiver::{Block, Multicharge};

/// `ψ_{st}` with its affine normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiBasisElement {
    pub shape: Multipartition,
    pub s: StandardTableau,
    pub t: StandardTableau,
    pub element: AffineElement,
    pub degree: i64,
    pub block: Block,
}

impl PsiBasisElement {
    pub fn build(
        klr: &Klr,
        charge: &Multicharge,
        shape: &Multipartition,
        s: &StandardTableau,
        t: &StandardTableau,
    ) -> Result<Self> {
        let element = klr.psi_st(shape, charge, s, t)?;
        let degree = match element.degree(klr.quiver()) {
            Degree::Homogeneous(d) => d,
            Degree::Zero => return Err(KlrError::Mismatch(format!("psi({s},{t}) vanishes in the affine algebra"))),
            Degree::Inhomogeneous => return Err(KlrError::Inhomogeneous),
        };
        let block = Block::of_sequence(klr.quiver(), &t.residue_sequence(charge, klr.quiver())?);
        Ok(PsiBasisElement { shape: shape.clone(), s: s.clone(), t: t.clone(), element, degree, block })
    }

    pub fn label(&self) -> String {
        format!("{};{};{}", self.shape, self.s, self.t)
    }
}

impl fmt::Display for PsiBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi[{} | {} | {}]", self.shape, self.s, self.t)
    }
}

/// All `ψ_{st}` for multipartitions of `n` at the level of `charge`, ordered by shape
/// (lexicographically decreasing), then `s`, then `t`.
pub fn psi_basis(klr: &Klr, charge: &Multicharge, n: usize) -> Result<Vec<PsiBasisElement>> {
    let mut jobs = Vec::new();
    for shape in Multipartition::all(n, charge.level()) {
        let tabs = StandardTableau::all(&shape);
        for s in &tabs {
            for t in &tabs {
                jobs.push((shape.clone(), s.clone(), t.clone()));
            }
        }
    }
    par::try_map(&jobs, |(shape, s, t)| PsiBasisElement::build(klr, charge, shape, s, t))
}
