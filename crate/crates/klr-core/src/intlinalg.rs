//! Exact integer linear algebra: row-style Hermite normal form, coset reduction, solving.
//!
//! Lattices are kept as sparse echelon bases built incrementally with extended-gcd pivoting.
//! Arithmetic runs on `i64` with overflow checks and is promoted to `BigInt` on the first
//! overflow, so results are always exact.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KlrError, Result};

/// A sparse integer vector: `(column, nonzero value)` sorted by column.
pub type SparseVec = Vec<(usize, BigInt)>;

pub(crate) trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Floor division.
    fn div_floor(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    /// `(g, s, t)` with `s·a + t·b = g > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn to_big(&self) -> BigInt;
    fn from_big(b: &BigInt) -> Option<Self>;
}

impl Scalar for i64 {
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        o % self == 0
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (g, s, t) = if e.gcd < 0 { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
        Some((g.try_into().ok()?, s.try_into().ok()?, t.try_into().ok()?))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
}

impl Scalar for BigInt {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        Zero::is_zero(&(o % self))
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        Some(if Signed::is_negative(&e.gcd) { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) })
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

type Row<T> = Vec<(usize, T)>;

/// `a·x + b·y`.
fn combine<T: Scalar>(a: &T, x: &Row<T>, b: &T, y: &Row<T>) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(x.len().max(y.len()));
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            i += 1;
            (x[i - 1].0, a.mul(&x[i - 1].1)?)
        } else if i == x.len() || y[j].0 < x[i].0 {
            j += 1;
            (y[j - 1].0, b.mul(&y[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a.mul(&x[i - 1].1)?.add(&b.mul(&y[j - 1].1)?)?)
        };
        if !v.is_nil() {
            out.push((col, v));
        }
    }
    Some(out)
}

/// `x − c·y`.
fn sub_multiple<T: Scalar>(x: &Row<T>, c: &T, y: &Row<T>) -> Option<Row<T>> {
    let one = T::from_big(&BigInt::one())?;
    combine(&one, x, &c.neg()?, y)
}

fn negate<T: Scalar>(x: &Row<T>) -> Option<Row<T>> {
    x.iter().map(|(c, v)| Some((*c, v.neg()?))).collect()
}

/// Sparse echelon basis keyed by pivot column; every pivot is positive.
#[derive(Clone, Debug)]
struct Echelon<T> {
    rows: BTreeMap<usize, Row<T>>,
}

enum Insert<T> {
    Done { changed: bool },
    Overflow { pending: Row<T>, changed: bool },
}

impl<T: Scalar> Echelon<T> {
    fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut v: Row<T>) -> Insert<T> {
        let mut changed = false;
        macro_rules! tryo {
            ($e:expr) => {
                match $e {
                    Some(x) => x,
                    None => return Insert::Overflow { pending: v, changed },
                }
            };
        }
        loop {
            let Some(&(col, ref lead)) = v.first() else {
                return Insert::Done { changed };
            };
            let lead = lead.clone();
            let Some(row) = self.rows.get(&col) else {
                if lead.is_neg() {
                    v = tryo!(negate(&v));
                }
                self.rows.insert(col, v);
                return Insert::Done { changed: true };
            };
            let p = row[0].1.clone();
            if p.divides(&lead) {
                v = tryo!(sub_multiple(&v, &lead.div_floor(&p), row));
                continue;
            }
            let (g, s, t) = tryo!(T::ext_gcd(&p, &lead));
            let new_row = tryo!(combine(&s, row, &t, &v));
            let (pa, lb) = (p.div_floor(&g), lead.div_floor(&g));
            let rest = tryo!(combine(&pa, &v, &tryo!(lb.neg()), row));
            self.rows.insert(col, new_row);
            changed = true;
            v = rest;
        }
    }

    /// Canonical coset representative; `None` on overflow.
    fn reduce(&self, v: &Row<T>) -> Option<Row<T>> {
        let mut v = v.clone();
        let mut cursor = 0;
        loop {
            let hit = v.iter().find(|(c, _)| *c >= cursor && self.rows.contains_key(c)).cloned();
            let Some((col, val)) = hit else { return Some(v) };
            let row = &self.rows[&col];
            let q = val.div_floor(&row[0].1);
            if !q.is_nil() {
                v = sub_multiple(&v, &q, row)?;
            }
            cursor = col + 1;
        }
    }

    fn to_big(&self) -> Echelon<BigInt> {
        Echelon {
            rows: self
                .rows
                .iter()
                .map(|(&c, r)| (c, r.iter().map(|(j, v)| (*j, v.to_big())).collect()))
                .collect(),
        }
    }
}

fn to_big_row<T: Scalar>(r: &Row<T>) -> SparseVec {
    r.iter().map(|(j, v)| (*j, v.to_big())).collect()
}

fn from_big_row<T: Scalar>(r: &[(usize, BigInt)]) -> Option<Row<T>> {
    r.iter().map(|(j, v)| Some((*j, T::from_big(v)?))).collect()
}

#[derive(Clone, Debug)]
enum Inner {
    Small(Echelon<i64>),
    Big(Echelon<BigInt>),
}

/// A sublattice of `Z^width` given by an echelon basis.
#[derive(Clone, Debug)]
pub struct RowLattice {
    width: usize,
    inner: Inner,
}

impl RowLattice {
    pub fn new(width: usize) -> Self {
        RowLattice { width, inner: Inner::Small(Echelon::new()) }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Inner::Small(e) => e.rows.len(),
            Inner::Big(e) => e.rows.len(),
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        match &self.inner {
            Inner::Small(e) => e.rows.keys().copied().collect(),
            Inner::Big(e) => e.rows.keys().copied().collect(),
        }
    }

    fn check(&self, v: &[(usize, BigInt)]) -> Result<()> {
        match v.last() {
            Some((c, _)) if *c >= self.width => {
                Err(KlrError::InvalidInput(format!("column {c} is outside width {}", self.width)))
            }
            _ => Ok(()),
        }
    }

    /// Adds a row; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[(usize, BigInt)]) -> Result<bool> {
        self.check(v)?;
        let mut v: SparseVec = v.iter().filter(|(_, x)| !Zero::is_zero(x)).cloned().collect();
        v.sort_by_key(|(c, _)| *c);
        Ok(self.insert_sorted(v))
    }

    fn insert_sorted(&mut self, v: SparseVec) -> bool {
        match &mut self.inner {
            Inner::Small(e) => {
                let out = match from_big_row::<i64>(&v) {
                    Some(small) => e.insert(small),
                    None => Insert::Overflow { pending: Vec::new(), changed: false },
                };
                match out {
                    Insert::Done { changed } => changed,
                    Insert::Overflow { pending, changed } => {
                        let pending = if pending.is_empty() { v } else { to_big_row(&pending) };
                        let mut big = e.to_big();
                        let grew = match big.insert(pending) {
                            Insert::Done { changed } => changed,
                            Insert::Overflow { .. } => unreachable!("BigInt arithmetic cannot overflow"),
                        };
                        self.inner = Inner::Big(big);
                        changed || grew
                    }
                }
            }
            Inner::Big(e) => match e.insert(v) {
                Insert::Done { changed } => changed,
                Insert::Overflow { .. } => unreachable!("BigInt arithmetic cannot overflow"),
            },
        }
    }

    pub fn insert_dense(&mut self, v: &[BigInt]) -> Result<bool> {
        if v.len() != self.width {
            return Err(KlrError::InvalidInput(format!("vector of length {} for width {}", v.len(), self.width)));
        }
        self.insert(&dense_to_sparse(v))
    }

    /// Canonical coset representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[(usize, BigInt)]) -> Result<SparseVec> {
        self.check(v)?;
        let mut v: SparseVec = v.iter().filter(|(_, x)| !Zero::is_zero(x)).cloned().collect();
        v.sort_by_key(|(c, _)| *c);
        Ok(match &self.inner {
            Inner::Small(e) => match from_big_row::<i64>(&v).and_then(|s| e.reduce(&s)) {
                Some(r) => to_big_row(&r),
                None => e.to_big().reduce(&v).expect("BigInt arithmetic cannot overflow"),
            },
            Inner::Big(e) => e.reduce(&v).expect("BigInt arithmetic cannot overflow"),
        })
    }

    pub fn reduce_dense(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.width {
            return Err(KlrError::InvalidInput(format!("vector of length {} for width {}", v.len(), self.width)));
        }
        Ok(sparse_to_dense(&self.reduce(&dense_to_sparse(v))?, self.width))
    }

    pub fn contains(&self, v: &[(usize, BigInt)]) -> Result<bool> {
        Ok(self.reduce(v)?.is_empty())
    }

    /// True when the lattice is all of `Z^width`.
    pub fn is_full(&self) -> bool {
        self.rank() == self.width && self.pivot_values().iter().all(|p| p.is_one())
    }

    pub fn pivot_values(&self) -> Vec<BigInt> {
        match &self.inner {
            Inner::Small(e) => e.rows.values().map(|r| BigInt::from(r[0].1)).collect(),
            Inner::Big(e) => e.rows.values().map(|r| r[0].1.clone()).collect(),
        }
    }

    /// The Hermite normal form: echelon rows with entries above each pivot reduced into `[0, pivot)`.
    pub fn hnf_rows(&self) -> Vec<SparseVec> {
        let rows: Vec<(usize, SparseVec)> = match &self.inner {
            Inner::Small(e) => e.rows.iter().map(|(&c, r)| (c, to_big_row(r))).collect(),
            Inner::Big(e) => e.rows.iter().map(|(&c, r)| (c, r.clone())).collect(),
        };
        let mut done: Vec<(usize, SparseVec)> = Vec::with_capacity(rows.len());
        // bottom-up: each row is reduced by the already-canonical rows below it
        for (col, row) in rows.into_iter().rev() {
            let mut below = Echelon::<BigInt>::new();
            below.rows = done.iter().cloned().collect();
            let head = row[0].clone();
            let tail: SparseVec = row[1..].to_vec();
            let mut reduced = below.reduce(&tail).expect("BigInt arithmetic cannot overflow");
            reduced.insert(0, head);
            done.push((col, reduced));
        }
        done.reverse();
        done.into_iter().map(|(_, r)| r).collect()
    }

    /// Rebuilds from rows already in Hermite normal form (for example, loaded from a cache).
    pub fn from_echelon_rows(width: usize, rows: Vec<SparseVec>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for r in rows {
            let Some((c, p)) = r.first() else {
                return Err(KlrError::InvalidInput("empty echelon row".into()));
            };
            if !p.is_positive() || map.contains_key(c) || r.last().is_some_and(|(j, _)| *j >= width) {
                return Err(KlrError::InvalidInput("rows are not in echelon form".into()));
            }
            map.insert(*c, r);
        }
        let big = Echelon { rows: map };
        let inner = match big
            .rows
            .iter()
            .map(|(&c, r)| Some((c, from_big_row::<i64>(r)?)))
            .collect::<Option<BTreeMap<_, _>>>()
        {
            Some(rows) => Inner::Small(Echelon { rows }),
            None => Inner::Big(big),
        };
        Ok(RowLattice { width, inner })
    }
}

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(KlrError::InvalidInput("matrix is not rectangular".into()));
        }
        Ok(IntMatrix { cols, rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::new(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

pub fn dense_to_sparse(v: &[BigInt]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !Zero::is_zero(*x)).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense(v: &[(usize, BigInt)], width: usize) -> Vec<BigInt> {
    let mut out = vec![<BigInt as Zero>::zero(); width];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Row lattice of `m`.
pub fn hnf(m: &IntMatrix) -> RowLattice {
    let mut l = RowLattice::new(m.cols);
    for r in &m.rows {
        l.insert_dense(r).expect("rows have matrix width");
    }
    l
}

pub fn rank(m: &IntMatrix) -> usize {
    hnf(m).rank()
}

/// Some `c` with `cᵀ·m = b`, or `None` when `b` is not in the row lattice of `m`.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.cols {
        return Err(KlrError::InvalidInput(format!("right-hand side of length {} for width {}", b.len(), m.cols)));
    }
    let k = m.rows.len();
    let mut aug = RowLattice::new(m.cols + k);
    for (i, r) in m.rows.iter().enumerate() {
        let mut v = dense_to_sparse(r);
        v.push((m.cols + i, BigInt::one()));
        aug.insert(&v)?;
    }
    let reduced = aug.reduce(&dense_to_sparse(b))?;
    if reduced.iter().any(|(c, _)| *c < m.cols) {
        return Ok(None);
    }
    // remaining tags record −c; any kernel relations among the rows are harmless
    let mut c = vec![<BigInt as Zero>::zero(); k];
    for (j, v) in reduced {
        c[j - m.cols] = -v;
    }
    Ok(Some(c))
}
