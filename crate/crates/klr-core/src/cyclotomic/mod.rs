//! The cyclotomic quotient `R^Λ_n` and its ψ-basis.

mod affine_check;
mod basis;
mod cache;
mod slice;
mod verify;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use parking_lot::RwLock;

pub use affine_check::{affine_basis_check, min_degree, AffineSliceReport};
pub use basis::{psi_basis, PsiBasisElement};
pub use cache::{
    decode_monomial, decode_row, encode_monomial, encode_row, MonomialRecord, PsiRow, SliceCache, SliceRecord,
    CACHE_VERSION,
};
pub use slice::{component_monomials, IdealComponent};
pub use verify::{PsiSlice, RankReport, SliceReport};

use crate::affine_algebra::{AffineElement, Klr, Letter};
use crate::combinatorics::{Comparison, Multipartition, StandardTableau};
use crate::error::{KlrError, Result};
use crate::par;
use crate::quiver::{Block, Multicharge, Weight};

type Key = (Block, i64);

pub struct Basis {
    pub elements: Vec<PsiBasisElement>,
    index: HashMap<(Multipartition, StandardTableau, StandardTableau), usize>,
    by_slice: BTreeMap<Key, Vec<usize>>,
}

impl Basis {
    fn new(elements: Vec<PsiBasisElement>) -> Self {
        let mut index = HashMap::new();
        let mut by_slice: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
        for (i, b) in elements.iter().enumerate() {
            index.insert((b.shape.clone(), b.s.clone(), b.t.clone()), i);
            by_slice.entry((b.block.clone(), b.degree)).or_default().push(i);
        }
        Basis { elements, index, by_slice }
    }

    pub fn position(&self, shape: &Multipartition, s: &StandardTableau, t: &StandardTableau) -> Option<usize> {
        self.index.get(&(shape.clone(), s.clone(), t.clone())).copied()
    }

    /// Basis indices of the given block and degree.
    pub fn slice(&self, block: &Block, degree: i64) -> &[usize] {
        self.by_slice.get(&(block.clone(), degree)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn blocks(&self) -> BTreeSet<Block> {
        self.by_slice.keys().map(|(b, _)| b.clone()).collect()
    }

    /// `(min, max)` ψ-degree within a block.
    pub fn degree_range(&self, block: &Block) -> Option<(i64, i64)> {
        let ds: Vec<i64> = self.by_slice.keys().filter(|(b, _)| b == block).map(|(_, d)| *d).collect();
        Some((*ds.iter().min()?, *ds.iter().max()?))
    }
}

/// `R^Λ_n` for a fixed multicharge, with memoized ideal slices.
pub struct CyclotomicAlgebra {
    klr: Arc<Klr>,
    charge: Multicharge,
    weight: Weight,
    n: usize,
    basis: OnceLock<Arc<Basis>>,
    ideals: RwLock<HashMap<Key, Arc<IdealComponent>>>,
    slices: RwLock<HashMap<Key, Arc<PsiSlice>>>,
    cache: Option<SliceCache>,
}

impl CyclotomicAlgebra {
    pub fn new(klr: Arc<Klr>, charge: Multicharge, n: usize) -> Result<Self> {
        if charge.level() == 0 {
            return Err(KlrError::InvalidInput("the multicharge must have level at least 1".into()));
        }
        if n == 0 {
            return Err(KlrError::InvalidInput("n must be positive".into()));
        }
        let weight = Weight::of_multicharge(klr.quiver(), &charge);
        Ok(CyclotomicAlgebra {
            klr,
            charge,
            weight,
            n,
            basis: OnceLock::new(),
            ideals: RwLock::new(HashMap::new()),
            slices: RwLock::new(HashMap::new()),
            cache: None,
        })
    }

    pub fn with_cache(mut self, cache: Option<SliceCache>) -> Self {
        self.cache = cache;
        self
    }

    pub fn klr(&self) -> &Klr {
        &self.klr
    }

    pub fn charge(&self) -> &Multicharge {
        &self.charge
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> Result<Arc<Basis>> {
        if let Some(b) = self.basis.get() {
            return Ok(b.clone());
        }
        let b = Arc::new(Basis::new(psi_basis(&self.klr, &self.charge, self.n)?));
        Ok(self.basis.get_or_init(|| b).clone())
    }

    fn cache_material(&self, block: &Block, degree: i64) -> String {
        format!(
            "klr-slice/{CACHE_VERSION};e={};charge={};n={};alpha={block};d={degree};weight={}",
            self.klr.quiver().e(),
            self.charge,
            self.n,
            self.weight
        )
    }

    fn load_ideal(&self, material: &str, block: &Block, degree: i64) -> Result<Option<(IdealComponent, SliceRecord)>> {
        let Some(cache) = &self.cache else { return Ok(None) };
        let Some(rec) = cache.load(material)? else { return Ok(None) };
        let columns = rec.monomials.iter().map(decode_monomial).collect::<Result<Vec<_>>>()?;
        let hnf = rec.hnf.iter().map(|r| decode_row(r)).collect::<Result<Vec<_>>>()?;
        let full: usize = rec.slice_dimension.parse().map_err(|_| KlrError::Cache("slice dimension".into()))?;
        let comp = IdealComponent::from_parts(block, degree, columns, hnf, full)?;
        // A stale or foreign record is ignored rather than trusted.
        let fresh = IdealComponent::free_columns(self.klr.quiver(), &self.weight, block, degree);
        if fresh.0 != comp.columns || fresh.1 != full {
            return Ok(None);
        }
        Ok(Some((comp, rec)))
    }

    fn store(&self, material: &str, comp: &IdealComponent, psi: Option<Vec<PsiRow>>) -> Result<()> {
        let Some(cache) = &self.cache else { return Ok(()) };
        let rec = SliceRecord {
            version: CACHE_VERSION.into(),
            key: material.into(),
            slice_dimension: comp.slice_dimension.to_string(),
            monomials: comp.columns.iter().map(encode_monomial).collect(),
            hnf: comp.lattice.hnf_rows().iter().map(|r| encode_row(r)).collect(),
            psi,
        };
        cache.store(material, &rec)
    }

    /// The ideal slice `N^Λ_{α,d}`.
    pub fn ideal(&self, block: &Block, degree: i64) -> Result<Arc<IdealComponent>> {
        if block.size() != self.n {
            return Err(KlrError::InvalidInput(format!("block {block} does not have size {}", self.n)));
        }
        let key = (block.clone(), degree);
        if let Some(c) = self.ideals.read().get(&key) {
            return Ok(c.clone());
        }
        let material = self.cache_material(block, degree);
        let comp = match self.load_ideal(&material, block, degree)? {
            Some((c, _)) => c,
            None => {
                let c = IdealComponent::compute(&self.klr, &self.weight, block, degree)?;
                self.store(&material, &c, None)?;
                c
            }
        };
        let comp = Arc::new(comp);
        Ok(self.ideals.write().entry(key).or_insert(comp).clone())
    }

    /// The ψ-vectors of a slice reduced against its ideal.
    pub fn slice(&self, block: &Block, degree: i64) -> Result<Arc<PsiSlice>> {
        let key = (block.clone(), degree);
        if let Some(s) = self.slices.read().get(&key) {
            return Ok(s.clone());
        }
        let ideal = self.ideal(block, degree)?;
        let basis = self.basis()?;
        let members = basis.slice(block, degree).to_vec();
        let q = self.klr.quiver();
        let rows = members
            .iter()
            .map(|&i| ideal.project(q, &self.weight, &basis.elements[i].element))
            .collect::<Result<Vec<_>>>()?;
        if self.cache.is_some() {
            let material = self.cache_material(block, degree);
            let cached = self.load_ideal(&material, block, degree)?.and_then(|(_, r)| r.psi);
            let psi: Vec<PsiRow> = members
                .iter()
                .zip(&rows)
                .map(|(&i, r)| PsiRow { label: basis.elements[i].label(), row: encode_row(r) })
                .collect();
            if cached.as_ref() != Some(&psi) {
                self.store(&material, &ideal, Some(psi))?;
            }
        }
        let s = Arc::new(PsiSlice::new(&ideal, members, rows)?);
        Ok(self.slices.write().entry(key).or_insert(s).clone())
    }

    /// The canonical representative of `x` modulo `N^Λ`, component by component.
    pub fn reduce(&self, x: &AffineElement) -> Result<AffineElement> {
        if x.n() != self.n {
            return Err(KlrError::StrandMismatch(x.n(), self.n));
        }
        let q = self.klr.quiver();
        let mut out = AffineElement::zero(self.n);
        for ((block, d), part) in x.components(q) {
            let r = self.ideal(&block, d)?.reduce(q, &self.weight, &part)?;
            out.add_scaled(&r, &BigInt::from(1));
        }
        Ok(out)
    }

    pub fn is_zero(&self, x: &AffineElement) -> Result<bool> {
        Ok(self.reduce(x)?.is_zero())
    }

    /// Integers `c_{st}` with `x ≡ Σ c_{st} ψ_{st}`, keyed by basis index.
    pub fn expand_in_psi(&self, x: &AffineElement) -> Result<Vec<(usize, BigInt)>> {
        if x.n() != self.n {
            return Err(KlrError::StrandMismatch(x.n(), self.n));
        }
        let q = self.klr.quiver();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for ((block, d), part) in x.components(q) {
            let ideal = self.ideal(&block, d)?;
            let v = ideal.project(q, &self.weight, &part)?;
            for (i, c) in self.slice(&block, d)?.expand(&v)? {
                *acc.entry(i).or_default() += c;
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| c != &BigInt::from(0)).collect())
    }

    /// The expansion of `ψ_{st} · g`.
    pub fn structure_constants(
        &self,
        shape: &Multipartition,
        s: &StandardTableau,
        t: &StandardTableau,
        g: &Letter,
    ) -> Result<Vec<(usize, BigInt)>> {
        g.validate(self.n)?;
        let basis = self.basis()?;
        let i = basis
            .position(shape, s, t)
            .ok_or_else(|| KlrError::InvalidInput(format!("({s}, {t}) are not standard tableaux of shape {shape}")))?;
        let x = self.klr.mul_letter(&basis.elements[i].element, g);
        self.expand_in_psi(&x)
    }

    /// Ways in which the expansion of `ψ_{st} · g` breaks the cellular straightening rules:
    /// residues of `u` and `v`, support on `(u,v) ▷ (s,t)`, and a unit leading term
    /// `ψ_{s,t·s_r}` when `t·s_r` is standard with `d(t)s_r` reduced.
    pub fn straightening_violations(
        &self,
        shape: &Multipartition,
        s: &StandardTableau,
        t: &StandardTableau,
        g: &Letter,
    ) -> Result<Vec<String>> {
        let q = self.klr.quiver();
        let basis = self.basis()?;
        let exp = self.structure_constants(shape, s, t, g)?;
        let me = basis.position(shape, s, t).expect("checked by structure_constants");
        let res = |x: &StandardTableau| x.residue_sequence(&self.charge, q);
        let (res_s, mut res_v) = (res(s)?, res(t)?);
        let mut bad = Vec::new();
        let mut leading = None;
        match g {
            Letter::E(i) => {
                let want: Vec<(usize, BigInt)> =
                    if res_v == *i { vec![(me, BigInt::from(1))] } else { Vec::new() };
                if exp != want {
                    bad.push(format!("ψ({s},{t})·{g} is not δ·ψ({s},{t})"));
                }
                return Ok(bad);
            }
            Letter::Y(_) => {}
            Letter::Psi(r) => {
                res_v.swap(r - 1, *r);
                if let Some(v) = t.swap(*r) {
                    if v.perm().length() == t.perm().length() + 1 {
                        leading = Some(basis.position(shape, s, &v).expect("standard"));
                    }
                }
            }
        }
        let dominates = |a: &StandardTableau, b: &StandardTableau| -> Result<bool> {
            Ok(matches!(a.dominance(b)?, Comparison::Greater | Comparison::Equal))
        };
        if let Some(l) = leading {
            if !exp.iter().any(|(i, c)| *i == l && c == &BigInt::from(1)) {
                bad.push(format!("ψ({s},{t})·{g} lacks the unit leading term {}", basis.elements[l]));
            }
        }
        for (i, c) in &exp {
            let b = &basis.elements[*i];
            if Some(*i) == leading {
                continue;
            }
            if res(&b.s)? != res_s || res(&b.t)? != res_v {
                bad.push(format!("ψ({s},{t})·{g} has {c}·{b} with the wrong residues"));
            }
            if !(dominates(&b.s, s)? && dominates(&b.t, t)? && (b.s != *s || b.t != *t)) {
                bad.push(format!("ψ({s},{t})·{g} has {c}·{b} outside (u,v) ▷ (s,t)"));
            }
        }
        Ok(bad)
    }

    /// Whether `e(i)` is nonzero in `R^Λ_n`.
    pub fn idempotent_survives(&self, i: &[i64]) -> Result<bool> {
        let top = i.iter().map(|&r| self.klr.quiver().normalize(r)).collect();
        Ok(!self.is_zero(&AffineElement::idempotent(top))?)
    }

    /// Blocks of size `n`. For `e = 0` only those reachable from the multicharge.
    fn all_blocks(&self) -> Vec<Block> {
        let q = self.klr.quiver();
        let residues: Vec<i64> = if q.e() > 0 {
            q.residues()
        } else {
            let lo = self.charge.entries().iter().min().copied().unwrap_or(0) - self.n as i64;
            let hi = self.charge.entries().iter().max().copied().unwrap_or(0) + self.n as i64;
            (lo..=hi).collect()
        };
        let mut out = Vec::new();
        fn rec(res: &[i64], left: usize, cur: &mut Vec<i64>, q: &crate::quiver::QuiverData, out: &mut Vec<Block>) {
            if left == 0 {
                out.push(Block::of_sequence(q, cur));
                return;
            }
            let Some((&first, rest)) = res.split_first() else { return };
            for m in (0..=left).rev() {
                cur.extend(std::iter::repeat_n(first, m));
                rec(rest, left - m, cur, q, out);
                cur.truncate(cur.len() - m);
            }
        }
        rec(&residues, self.n, &mut Vec::new(), q, &mut out);
        out
    }

    /// Compares quotient slice ranks with ψ-counts in every block and every degree from two
    /// below the least ψ-degree to two above the greatest.
    pub fn verify_rank(&self) -> Result<RankReport> {
        let basis = self.basis()?;
        let blocks = basis.blocks();
        let mut jobs: Vec<Key> = Vec::new();
        for b in &blocks {
            let (lo, hi) = basis.degree_range(b).expect("block has ψ-elements");
            jobs.extend((lo - 2..=hi + 2).map(|d| (b.clone(), d)));
        }
        let slices = par::try_map(&jobs, |(b, d)| self.slice(b, *d).map(|s| s.report()))?;
        let empty: Vec<Key> = if self.klr.quiver().e() > 0 {
            self.all_blocks().into_iter().filter(|b| !blocks.contains(b)).map(|b| (b, 0)).collect()
        } else {
            Vec::new()
        };
        let empty_blocks = par::try_map(&empty, |(b, d)| self.slice(b, *d).map(|s| s.report()))?;
        let psi_total = basis.elements.len();
        let rank_total: usize = slices.iter().map(|s| s.quotient_rank).sum();
        let level = self.charge.level();
        let mut expected = BigInt::from(1);
        for k in 1..=self.n {
            expected *= BigInt::from(level) * BigInt::from(k);
        }
        let ok = slices.iter().chain(&empty_blocks).all(SliceReport::ok)
            && BigInt::from(psi_total) == expected
            && rank_total == psi_total;
        let mut note = String::from(
            "degrees checked: two beyond the ψ-degree range of each block; \
             blocks without ψ-elements are checked to vanish in degree 0",
        );
        if self.klr.quiver().e() == 0 {
            note = String::from("degrees checked: two beyond the ψ-degree range of each block");
        }
        Ok(RankReport {
            e: self.klr.quiver().e(),
            charge: self.charge.to_string(),
            n: self.n,
            slices,
            empty_blocks,
            psi_total,
            rank_total,
            expected: expected.to_string(),
            ok,
            note,
        })
    }
}
