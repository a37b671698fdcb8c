//! Words for `e_λ y_λ` and the ψ-basis elements `ψ_{st} = ψ*_{d(s)} e_λ y_λ ψ_{d(t)}`.

use super::element::{AffineElement, GeneratorWord, Letter};
use super::engine::Klr;
use crate::combinatorics::{y_exponents, Multipartition, StandardTableau};
use crate::error::{KlrError, Result};
use crate::quiver::{Multicharge, Residue};

/// `e(i_λ) y_λ` as a word.
pub fn e_lambda_y_lambda(klr: &Klr, shape: &Multipartition, charge: &Multicharge) -> Result<GeneratorWord> {
    let q = klr.quiver();
    let top = StandardTableau::initial(shape).residue_sequence(charge, q)?;
    let mut letters = vec![Letter::E(top)];
    for (r, a) in y_exponents(shape, charge, q)?.into_iter().enumerate() {
        letters.extend(std::iter::repeat_n(Letter::Y(r + 1), a as usize));
    }
    GeneratorWord::new(shape.size(), letters)
}

/// `e(i_λ ∨ k) y_λ y_{n+1}^b`, the word that adds one node of residue `k` to `λ`.
pub fn add_node_word(klr: &Klr, shape: &Multipartition, charge: &Multicharge, k: Residue, b: u32) -> Result<GeneratorWord> {
    let q = klr.quiver();
    let n = shape.size();
    let mut top = StandardTableau::initial(shape).residue_sequence(charge, q)?;
    top.push(q.normalize(k));
    let mut letters = vec![Letter::E(top)];
    for (r, a) in y_exponents(shape, charge, q)?.into_iter().enumerate() {
        letters.extend(std::iter::repeat_n(Letter::Y(r + 1), a as usize));
    }
    letters.extend(std::iter::repeat_n(Letter::Y(n + 1), b as usize));
    GeneratorWord::new(n + 1, letters)
}

/// `ψ*_{d(s)} e_λ y_λ ψ_{d(t)}` spelled with standard expressions.
pub fn psi_st_word(
    klr: &Klr,
    shape: &Multipartition,
    charge: &Multicharge,
    s: &StandardTableau,
    t: &StandardTableau,
) -> Result<GeneratorWord> {
    if s.shape() != shape || t.shape() != shape {
        return Err(KlrError::InvalidInput(format!("tableaux {s} and {t} do not have shape {shape}")));
    }
    let middle = e_lambda_y_lambda(klr, shape, charge)?;
    let mut letters: Vec<Letter> = s.standard_expression().into_iter().rev().map(Letter::Psi).collect();
    letters.extend(middle.letters);
    letters.extend(t.standard_expression().into_iter().map(Letter::Psi));
    GeneratorWord::new(shape.size(), letters)
}

impl Klr {
    pub fn e_lambda_y_lambda(&self, shape: &Multipartition, charge: &Multicharge) -> Result<AffineElement> {
        self.normal_form(&e_lambda_y_lambda(self, shape, charge)?)
    }

    pub fn add_node(&self, shape: &Multipartition, charge: &Multicharge, k: Residue, b: u32) -> Result<AffineElement> {
        self.normal_form(&add_node_word(self, shape, charge, k, b)?)
    }

    pub fn psi_st(
        &self,
        shape: &Multipartition,
        charge: &Multicharge,
        s: &StandardTableau,
        t: &StandardTableau,
    ) -> Result<AffineElement> {
        self.normal_form(&psi_st_word(self, shape, charge, s, t)?)
    }
}
