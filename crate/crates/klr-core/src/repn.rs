//! Cell modules, their bilinear forms and the simple heads `D^λ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_algebra::Letter;
use crate::combinatorics::{KleshchevOracle, Multipartition, StandardTableau};
use crate::cyclotomic::CyclotomicAlgebra;
use crate::error::{KlrError, Result};
use crate::intlinalg::{rank, IntMatrix};
use crate::par;

/// The cell module `S^λ` with basis `ψ_{t^λ t}`, `t ∈ Std(λ)`.
#[derive(Clone, Debug)]
pub struct SpechtModule {
    pub shape: Multipartition,
    pub basis: Vec<StandardTableau>,
    initial: StandardTableau,
}

impl SpechtModule {
    pub fn new(alg: &CyclotomicAlgebra, shape: &Multipartition) -> Result<Self> {
        check_shape(alg, shape)?;
        Ok(SpechtModule {
            shape: shape.clone(),
            basis: StandardTableau::all(shape),
            initial: StandardTableau::initial(shape),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The matrix of `g` acting on the right of row vectors: row `t` holds the coordinates of
    /// `ψ_{t^λ t} · g` modulo the cells above `λ`.
    pub fn action(&self, alg: &CyclotomicAlgebra, g: &Letter) -> Result<Vec<Vec<BigInt>>> {
        let basis = alg.basis()?;
        let column: BTreeMap<&StandardTableau, usize> = self.basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        self.basis
            .iter()
            .map(|t| {
                let mut row = vec![BigInt::zero(); self.dim()];
                for (i, c) in alg.structure_constants(&self.shape, &self.initial, t, g)? {
                    let b = &basis.elements[i];
                    if b.shape != self.shape {
                        continue;
                    }
                    if b.s != self.initial {
                        return Err(KlrError::Mismatch(format!("ψ_(t^λ,{t})·{g} has a term {b}")));
                    }
                    row[column[&b.t]] = c;
                }
                Ok(row)
            })
            .collect()
    }
}

fn check_shape(alg: &CyclotomicAlgebra, shape: &Multipartition) -> Result<()> {
    if !shape.is_multipartition() || shape.size() != alg.n() || shape.level() != alg.charge().level() {
        return Err(KlrError::InvalidInput(format!(
            "{shape} is not a multipartition of {} with {} components",
            alg.n(),
            alg.charge().level()
        )));
    }
    Ok(())
}

/// The Gram matrix of the cellular form on `S^λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub shape: Multipartition,
    pub tableaux: Vec<StandardTableau>,
    pub entries: Vec<Vec<BigInt>>,
}

impl GramMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.entries.len();
        (0..k).all(|i| (0..k).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Rank over the rationals, or over `F_p` when a prime is given.
    pub fn rank(&self, prime: Option<u64>) -> Result<usize> {
        let k = self.entries.len();
        match prime {
            None => Ok(rank(&IntMatrix::new(k, self.entries.clone())?)),
            Some(p) => rank_mod_p(&self.entries, p),
        }
    }
}

fn rank_mod_p(rows: &[Vec<BigInt>], p: u64) -> Result<usize> {
    if p < 2 || !(2..).take_while(|d| d * d <= p).all(|d| p % d != 0) {
        return Err(KlrError::InvalidInput(format!("{p} is not a prime")));
    }
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced mod p")).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let inv = |a: u64| {
        let (mut r, mut base, mut ex) = (1u64, a, p - 2);
        while ex > 0 {
            if ex & 1 == 1 {
                r = mulmod(r, base);
            }
            base = mulmod(base, base);
            ex >>= 1;
        }
        r
    };
    let mut rk = 0;
    for c in 0..cols {
        let Some(piv) = (rk..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rk, piv);
        let s = inv(m[rk][c]);
        for x in m[rk].iter_mut() {
            *x = mulmod(*x, s);
        }
        for r in 0..m.len() {
            if r != rk && m[r][c] != 0 {
                let f = m[r][c];
                for j in 0..cols {
                    let sub = mulmod(f, m[rk][j]);
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        rk += 1;
    }
    Ok(rk)
}

/// `⟨s,t⟩`: the coefficient of `ψ_{t^λ t^λ}` in `ψ_{t^λ s} ψ_{t t^λ}`.
pub fn gram_matrix(alg: &CyclotomicAlgebra, shape: &Multipartition) -> Result<GramMatrix> {
    check_shape(alg, shape)?;
    let basis = alg.basis()?;
    let init = StandardTableau::initial(shape);
    let tabs = StandardTableau::all(shape);
    let target = basis.position(shape, &init, &init).expect("t^λ is standard");
    let left: Vec<usize> = tabs.iter().map(|s| basis.position(shape, &init, s).expect("standard")).collect();
    let right: Vec<usize> = tabs.iter().map(|t| basis.position(shape, t, &init).expect("standard")).collect();
    let jobs: Vec<(usize, usize)> = (0..tabs.len()).flat_map(|i| (0..tabs.len()).map(move |j| (i, j))).collect();
    let vals = par::try_map(&jobs, |&(i, j)| -> Result<BigInt> {
        let x = alg.klr().multiply(&basis.elements[left[i]].element, &basis.elements[right[j]].element);
        Ok(alg.expand_in_psi(&x)?.into_iter().find(|(k, _)| *k == target).map(|(_, c)| c).unwrap_or_default())
    })?;
    let mut entries = vec![vec![BigInt::zero(); tabs.len()]; tabs.len()];
    for (&(i, j), v) in jobs.iter().zip(vals) {
        entries[i][j] = v;
    }
    Ok(GramMatrix { shape: shape.clone(), tableaux: tabs, entries })
}

/// Whether `D^λ = S^λ / rad S^λ` is nonzero, over `Q` or over `F_p`.
pub fn d_nonzero(alg: &CyclotomicAlgebra, shape: &Multipartition, prime: Option<u64>) -> Result<bool> {
    Ok(gram_matrix(alg, shape)?.rank(prime)? > 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub simples: Vec<Multipartition>,
    pub kleshchev: Vec<Multipartition>,
    pub agree: bool,
}

/// All `λ` with `D^λ ≠ 0`, compared with the Kleshchev multipartitions.
pub fn classify_simples(alg: &CyclotomicAlgebra, prime: Option<u64>) -> Result<Classification> {
    let shapes = Multipartition::all(alg.n(), alg.charge().level());
    let nonzero = par::try_map(&shapes, |s| d_nonzero(alg, s, prime))?;
    let simples: Vec<Multipartition> =
        shapes.iter().zip(&nonzero).filter(|(_, &z)| z).map(|(s, _)| s.clone()).collect();
    let mut oracle = KleshchevOracle::new(alg.charge(), alg.klr().quiver());
    let mut kleshchev = Vec::new();
    for s in &shapes {
        if oracle.is_kleshchev(s)? {
            kleshchev.push(s.clone());
        }
    }
    let agree = simples == kleshchev;
    Ok(Classification { simples, kleshchev, agree })
}

/// `Σ q^{deg ψ_{st}}` as a map from degree to coefficient.
pub fn graded_dimension(alg: &CyclotomicAlgebra) -> Result<BTreeMap<i64, BigInt>> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    for b in &alg.basis()?.elements {
        *out.entry(b.degree).or_default() += 1;
    }
    Ok(out)
}
