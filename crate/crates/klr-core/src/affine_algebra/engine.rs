//! Rewriting words in the KLR generators into Khovanov–Lauda normal form.
//!
//! Every element is kept as a combination of monomials `e(i) y^a ψ_{c(w)}`. Right multiplication
//! by a generator is the only primitive: `y_s` is pushed left through the crossings, and `ψ_r`
//! is absorbed by walking a braid-move path to the new staircase word (or to a word ending in
//! `r`, where the quadratic relation fires). Each relation's correction term has strictly
//! fewer crossings, so recursion terminates. Results of both primitives on `e(i) ψ_{c(w)}` are
//! memoized; the `y^a` prefix of a monomial simply rides along.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use parking_lot::RwLock;

use super::braid::{find_path, Move};
use super::element::{AffineElement, GeneratorWord, KLMonomial, Letter};
use super::perm::Perm;
use crate::error::{KlrError, Result};
use crate::quiver::{QuiverData, Residue};

/// How a word is folded into normal form. All strategies must agree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Fold {
    /// Multiply generators in from the left, one at a time.
    #[default]
    LeftToRight,
    /// Normalize both halves recursively, then multiply the results.
    Balanced,
    /// Normalize the reversed word, then apply `*` term by term.
    ViaStar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub fold: Fold,
    /// Search braid paths scanning moves right to left.
    pub reverse_braids: bool,
}

type MemoKey = (Vec<Residue>, Perm, usize);

/// The affine KLR algebra `R_n` of type `Γ_e`, with rewriting caches.
pub struct Klr {
    q: QuiverData,
    strategy: Strategy,
    psi_memo: RwLock<HashMap<MemoKey, Arc<AffineElement>>>,
    y_memo: RwLock<HashMap<MemoKey, Arc<AffineElement>>>,
    paths: RwLock<HashMap<(Perm, usize), Arc<Vec<Move>>>>,
}

/// A polynomial in the `y`'s: coefficient and the multiset of `y` indices.
type YPoly = Vec<(i64, Vec<usize>)>;

impl Klr {
    pub fn new(q: QuiverData) -> Self {
        Klr::with_strategy(q, Strategy::default())
    }

    pub fn with_strategy(q: QuiverData, strategy: Strategy) -> Self {
        Klr {
            q,
            strategy,
            psi_memo: RwLock::new(HashMap::new()),
            y_memo: RwLock::new(HashMap::new()),
            paths: RwLock::new(HashMap::new()),
        }
    }

    pub fn quiver(&self) -> &QuiverData {
        &self.q
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Normal form of a generator word.
    pub fn normal_form(&self, word: &GeneratorWord) -> Result<AffineElement> {
        word.validate()?;
        let tops = match word.forced_top() {
            Some(i) => vec![i.iter().map(|&r| self.q.normalize(r)).collect()],
            None if self.q.e() > 0 => all_sequences(&self.q.residues(), word.n),
            None => {
                return Err(KlrError::InvalidInput(
                    "a word without an idempotent has infinite support when e = 0".into(),
                ))
            }
        };
        let letters: Vec<Letter> = word.letters.iter().map(|l| self.normalize_letter(l)).collect();
        let mut out = AffineElement::zero(word.n);
        for top in tops {
            let piece = match self.strategy.fold {
                Fold::LeftToRight => self.fold(AffineElement::idempotent(top), &letters),
                Fold::Balanced => self.balanced(&top, &letters),
                Fold::ViaStar => {
                    let mut rev = letters.clone();
                    rev.reverse();
                    let reversed_top = GeneratorWord { n: word.n, scalar: BigInt::one(), letters: rev.clone() }
                        .forced_top()
                        .unwrap_or_else(|| Perm::from_word(word.n, &psi_letters(&letters)).act(&top));
                    self.star(&self.fold(AffineElement::idempotent(reversed_top), &rev))
                }
            };
            out.add_scaled(&piece, &word.scalar);
        }
        Ok(out)
    }

    fn normalize_letter(&self, l: &Letter) -> Letter {
        match l {
            Letter::E(i) => Letter::E(i.iter().map(|&r| self.q.normalize(r)).collect()),
            other => other.clone(),
        }
    }

    /// Right-multiply `x` by a sequence of generators.
    pub fn fold(&self, mut x: AffineElement, letters: &[Letter]) -> AffineElement {
        for l in letters {
            if x.is_zero() {
                break;
            }
            x = self.mul_letter(&x, l);
        }
        x
    }

    fn balanced(&self, top: &[Residue], letters: &[Letter]) -> AffineElement {
        if letters.len() <= 2 {
            return self.fold(AffineElement::idempotent(top.to_vec()), letters);
        }
        let mid = letters.len() / 2;
        let left = self.balanced(top, &letters[..mid]);
        let mut rights: HashMap<Vec<Residue>, AffineElement> = HashMap::new();
        let mut out = AffineElement::zero(top.len());
        for (m, c) in left.terms() {
            let b = m.bottom();
            let right = rights.entry(b.clone()).or_insert_with(|| self.balanced(&b, &letters[mid..]));
            let prod = self.multiply(&AffineElement::monomial(m.clone()), right);
            out.add_scaled(&prod, c);
        }
        out
    }

    /// `x · g` for a single generator `g`.
    pub fn mul_letter(&self, x: &AffineElement, l: &Letter) -> AffineElement {
        let mut out = AffineElement::zero(x.n());
        match l {
            Letter::E(j) => {
                for (m, c) in x.terms() {
                    if m.bottom() == *j {
                        out.add_term(m.clone(), c.clone());
                    }
                }
            }
            Letter::Y(s) => {
                for (m, c) in x.terms() {
                    let base = self.y_times(m.top(), m.perm(), *s);
                    add_shifted(&mut out, &base, m.ys(), c);
                }
            }
            Letter::Psi(r) => {
                for (m, c) in x.terms() {
                    let base = self.psi_times(m.top(), m.perm(), *r);
                    add_shifted(&mut out, &base, m.ys(), c);
                }
            }
        }
        out
    }

    /// `x · y`.
    pub fn multiply(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let mut out = AffineElement::zero(x.n());
        for (m2, c2) in y.terms() {
            let letters = m2.letters();
            let prod = self.fold(x.clone(), &letters);
            out.add_scaled(&prod, c2);
        }
        out
    }

    pub fn multiply_checked(&self, x: &AffineElement, y: &AffineElement) -> Result<AffineElement> {
        if x.n() != y.n() {
            return Err(KlrError::StrandMismatch(x.n(), y.n()));
        }
        Ok(self.multiply(x, y))
    }

    /// The anti-automorphism fixing every generator.
    pub fn star(&self, x: &AffineElement) -> AffineElement {
        let mut out = AffineElement::zero(x.n());
        for (m, c) in x.terms() {
            let mut letters = m.letters();
            letters.reverse();
            let top = m.bottom();
            out.add_scaled(&self.fold(AffineElement::idempotent(top), &letters), c);
        }
        out
    }

    /// `θ_i`: a new rightmost strand of residue `i`.
    pub fn theta(&self, x: &AffineElement, i: Residue) -> AffineElement {
        let i = self.q.normalize(i);
        AffineElement::from_terms(
            x.n() + 1,
            x.terms().map(|(m, c)| {
                let mut top = m.top().to_vec();
                top.push(i);
                let mut ys = m.ys().to_vec();
                ys.push(0);
                (KLMonomial::new(top, ys, m.perm().extend()), c.clone())
            }),
        )
    }

    /// `θ̂_j`: new leftmost strands with residues `j`, shifting every index by `|j|`.
    pub fn theta_hat(&self, x: &AffineElement, j: &[Residue]) -> AffineElement {
        let shift = j.len();
        AffineElement::from_terms(
            x.n() + shift,
            x.terms().map(|(m, c)| {
                let mut top: Vec<Residue> = j.iter().map(|&r| self.q.normalize(r)).collect();
                top.extend_from_slice(m.top());
                let mut ys = vec![0; shift];
                ys.extend_from_slice(m.ys());
                (KLMonomial::new(top, ys, m.perm().shift(shift)), c.clone())
            }),
        )
    }

    /// Normal form of `e(top) ψ_{c(w)} y_s`.
    fn y_times(&self, top: &[Residue], w: &Perm, s: usize) -> Arc<AffineElement> {
        let key = (top.to_vec(), w.clone(), s);
        if let Some(hit) = self.y_memo.read().get(&key) {
            return hit.clone();
        }
        let n = top.len();
        let word = w.canonical_word();
        let levels = residue_levels(top, &word);
        let mut out = AffineElement::zero(n);
        let mut pos = s;
        for t in (0..word.len()).rev() {
            let a = word[t];
            let below = &levels[t + 1];
            let equal = below[a - 1] == below[a];
            let sign = if pos == a + 1 {
                pos = a;
                1
            } else if pos == a {
                pos = a + 1;
                -1
            } else {
                0
            };
            if sign != 0 && equal {
                let mut rest: Vec<usize> = word[..t].to_vec();
                rest.extend_from_slice(&word[t + 1..]);
                let corr = self.psi_word(top, &rest);
                out.add_scaled(&corr, &BigInt::from(sign));
            }
        }
        let mut ys = vec![0; n];
        ys[pos - 1] = 1;
        out.add_term(KLMonomial::new(top.to_vec(), ys, w.clone()), BigInt::one());
        let out = Arc::new(out);
        self.y_memo.write().insert(key, out.clone());
        out
    }

    /// Normal form of `e(top) ψ_{c(w)} ψ_r`.
    fn psi_times(&self, top: &[Residue], w: &Perm, r: usize) -> Arc<AffineElement> {
        let key = (top.to_vec(), w.clone(), r);
        if let Some(hit) = self.psi_memo.read().get(&key) {
            return hit.clone();
        }
        let n = top.len();
        let mut out = AffineElement::zero(n);
        let ascent = w.is_ascent(r);
        let mut cur: Vec<u8> = w.canonical_word().iter().map(|&a| a as u8).collect();
        if ascent {
            cur.push(r as u8);
        }
        let path = self.path(w, r);
        for mv in path.iter() {
            if let Some((pos, poly)) = self.braid_correction(top, &cur, mv) {
                let mut letters: Vec<Letter> = cur[..pos].iter().map(|&a| Letter::Psi(a as usize)).collect();
                let suffix: Vec<Letter> = cur[pos + 3..].iter().map(|&a| Letter::Psi(a as usize)).collect();
                for (coef, ys) in poly {
                    let mut word = letters.clone();
                    word.extend(ys.into_iter().map(Letter::Y));
                    word.extend(suffix.iter().cloned());
                    if !ascent {
                        word.push(Letter::Psi(r));
                    }
                    let corr = self.fold(AffineElement::idempotent(top.to_vec()), &word);
                    out.add_scaled(&corr, &BigInt::from(coef));
                }
                letters.clear();
            }
            mv.apply(&mut cur);
        }
        if ascent {
            let mut ws = w.clone();
            ws.mul_simple(r);
            debug_assert_eq!(ws.canonical_word().iter().map(|&a| a as u8).collect::<Vec<_>>(), cur);
            out.add_term(KLMonomial::new(top.to_vec(), vec![0; n], ws), BigInt::one());
        } else {
            debug_assert_eq!(cur.last(), Some(&(r as u8)));
            let u: Vec<usize> = cur[..cur.len() - 1].iter().map(|&a| a as usize).collect();
            let below = Perm::from_word(n, &u).act(top);
            for (coef, ys) in self.quadratic(&below, r) {
                let mut word: Vec<Letter> = u.iter().map(|&a| Letter::Psi(a)).collect();
                word.extend(ys.into_iter().map(Letter::Y));
                let main = self.fold(AffineElement::idempotent(top.to_vec()), &word);
                out.add_scaled(&main, &BigInt::from(coef));
            }
        }
        let out = Arc::new(out);
        self.psi_memo.write().insert(key, out.clone());
        out
    }

    /// Normal form of `e(top) ψ_{s_1} ⋯ ψ_{s_k}` for an arbitrary word.
    fn psi_word(&self, top: &[Residue], word: &[usize]) -> AffineElement {
        let letters: Vec<Letter> = word.iter().map(|&a| Letter::Psi(a)).collect();
        self.fold(AffineElement::idempotent(top.to_vec()), &letters)
    }

    /// Braid path for `c(w)·r`: to `c(w s_r)` when `r` is an ascent, else to a word ending in `r`.
    fn path(&self, w: &Perm, r: usize) -> Arc<Vec<Move>> {
        let key = (w.clone(), r);
        if let Some(hit) = self.paths.read().get(&key) {
            return hit.clone();
        }
        let mut start: Vec<u8> = w.canonical_word().iter().map(|&a| a as u8).collect();
        let path = if w.is_ascent(r) {
            start.push(r as u8);
            let mut ws = w.clone();
            ws.mul_simple(r);
            let target: Vec<u8> = ws.canonical_word().iter().map(|&a| a as u8).collect();
            find_path(&start, |x| x == target.as_slice(), self.strategy.reverse_braids)
        } else {
            find_path(&start, |x| x.last() == Some(&(r as u8)), self.strategy.reverse_braids)
        }
        .expect("reduced words of a permutation are connected by braid moves");
        let path = Arc::new(path);
        self.paths.write().insert(key, path.clone());
        path
    }

    /// For a braid move, the position and the polynomial `C` with
    /// `ψ_a ψ_{a+1} ψ_a e(k) = ψ_{a+1} ψ_a ψ_{a+1} e(k) + C e(k)`, signed for the move direction.
    fn braid_correction(&self, top: &[Residue], cur: &[u8], mv: &Move) -> Option<(usize, YPoly)> {
        let (pos, sign, a) = match *mv {
            Move::Commute { .. } => return None,
            Move::BraidUp { pos } => (pos, 1, cur[pos] as usize),
            Move::BraidDown { pos } => (pos, -1, cur[pos + 1] as usize),
        };
        let mut k = top.to_vec();
        for &l in &cur[..pos + 3] {
            k.swap(l as usize - 1, l as usize);
        }
        let (x, y, z) = (k[a - 1], k[a], k[a + 1]);
        if x != z {
            return None;
        }
        let poly: YPoly = if self.q.e() == 2 {
            if x == y {
                return None;
            }
            vec![(sign, vec![a]), (-2 * sign, vec![a + 1]), (sign, vec![a + 2])]
        } else if self.q.is_successor(x, y) {
            vec![(sign, vec![])]
        } else if self.q.is_successor(y, x) {
            vec![(-sign, vec![])]
        } else {
            return None;
        };
        Some((pos, poly))
    }

    /// `ψ_r² e(k)` as a polynomial in `y_r, y_{r+1}`.
    fn quadratic(&self, k: &[Residue], r: usize) -> YPoly {
        let (a, b) = (k[r - 1], k[r]);
        if a == b {
            Vec::new()
        } else if !self.q.adjacent(a, b) {
            vec![(1, vec![])]
        } else if self.q.e() == 2 {
            vec![(-1, vec![r, r]), (2, vec![r, r + 1]), (-1, vec![r + 1, r + 1])]
        } else if self.q.is_successor(a, b) {
            vec![(1, vec![r + 1]), (-1, vec![r])]
        } else {
            vec![(1, vec![r]), (-1, vec![r + 1])]
        }
    }

    pub fn memo_sizes(&self) -> (usize, usize) {
        (self.psi_memo.read().len(), self.y_memo.read().len())
    }
}

fn add_shifted(out: &mut AffineElement, base: &AffineElement, ys: &[u32], c: &BigInt) {
    if ys.iter().all(|&a| a == 0) {
        out.add_scaled(base, c);
        return;
    }
    for (m, d) in base.terms() {
        out.add_term(m.with_extra_y(ys), d * c);
    }
}

/// Residue sequences between the letters of a word, starting from `top`.
fn residue_levels(top: &[Residue], word: &[usize]) -> Vec<Vec<Residue>> {
    let mut levels = Vec::with_capacity(word.len() + 1);
    let mut cur = top.to_vec();
    levels.push(cur.clone());
    for &a in word {
        cur.swap(a - 1, a);
        levels.push(cur.clone());
    }
    levels
}

fn psi_letters(letters: &[Letter]) -> Vec<usize> {
    letters
        .iter()
        .filter_map(|l| if let Letter::Psi(r) = l { Some(*r) } else { None })
        .collect()
}

/// All of `I^n` for a finite residue set, lexicographically.
pub fn all_sequences(residues: &[Residue], n: usize) -> Vec<Vec<Residue>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                residues.iter().map(move |&r| {
                    let mut t = s.clone();
                    t.push(r);
                    t
                })
            })
            .collect();
    }
    out
}
