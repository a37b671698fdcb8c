use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KlrError, Result};
use crate::quiver::{Multicharge, QuiverData, Residue, Weight};

/// A node `(r, c, l)` of a Young diagram; all indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
    pub comp: usize,
}

impl Node {
    pub fn new(row: usize, col: usize, comp: usize) -> Self {
        Node { row, col, comp }
    }

    /// `self` lies below `other`: a later component, or the same component and a lower row.
    pub fn is_below(&self, other: &Node) -> bool {
        self.comp > other.comp || (self.comp == other.comp && self.row > other.row)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.row, self.col, self.comp)
    }
}

/// `res(r, c, l) = c − r + κ_l`.
pub fn residue(nd: &Node, charge: &Multicharge, q: &QuiverData) -> Result<Residue> {
    let k = charge.get(nd.comp).ok_or_else(|| {
        KlrError::InvalidInput(format!("node {nd} lies outside a level-{} multicharge", charge.level()))
    })?;
    Ok(q.normalize(nd.col as Residue - nd.row as Residue + k))
}

/// Outcome of comparing two elements of a partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// A multicomposition `(λ^(1)|…|λ^(ℓ))`. Multipartitions are the special case with
/// weakly decreasing components; trailing zero parts are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multicomposition {
    components: Vec<Vec<usize>>,
}

pub type Multipartition = Multicomposition;

impl Multicomposition {
    pub fn new(components: Vec<Vec<usize>>) -> Self {
        let components = components
            .into_iter()
            .map(|mut c| {
                while c.last() == Some(&0) {
                    c.pop();
                }
                c
            })
            .collect();
        Multicomposition { components }
    }

    pub fn empty(level: usize) -> Self {
        Multicomposition { components: vec![Vec::new(); level] }
    }

    /// A multipartition, rejecting non-decreasing components.
    pub fn partition(components: Vec<Vec<usize>>) -> Result<Self> {
        let m = Multicomposition::new(components);
        if !m.is_multipartition() {
            return Err(KlrError::InvalidInput(format!("{m} is not a multipartition")));
        }
        Ok(m)
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn size(&self) -> usize {
        self.components.iter().flatten().sum()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Component `l`, 1-based.
    pub fn component(&self, l: usize) -> &[usize] {
        &self.components[l - 1]
    }

    /// Length of row `r` of component `l` (0 when absent).
    pub fn row_len(&self, r: usize, l: usize) -> usize {
        self.components.get(l - 1).and_then(|c| c.get(r - 1)).copied().unwrap_or(0)
    }

    pub fn is_multipartition(&self) -> bool {
        self.components.iter().all(|c| c.windows(2).all(|w| w[0] >= w[1]))
    }

    pub fn contains(&self, nd: &Node) -> bool {
        nd.comp >= 1
            && nd.comp <= self.level()
            && nd.row >= 1
            && nd.col >= 1
            && nd.col <= self.row_len(nd.row, nd.comp)
    }

    /// Nodes in the order `t^λ` fills them: component by component, rows top-down.
    pub fn nodes(&self) -> Vec<Node> {
        let mut out = Vec::with_capacity(self.size());
        for (l, comp) in self.components.iter().enumerate() {
            for (r, &len) in comp.iter().enumerate() {
                for c in 1..=len {
                    out.push(Node::new(r + 1, c, l + 1));
                }
            }
        }
        out
    }

    pub fn with_node(&self, nd: &Node) -> Self {
        let mut comps = self.components.clone();
        let comp = &mut comps[nd.comp - 1];
        if comp.len() < nd.row {
            comp.resize(nd.row, 0);
        }
        comp[nd.row - 1] += 1;
        Multicomposition::new(comps)
    }

    pub fn without_node(&self, nd: &Node) -> Self {
        let mut comps = self.components.clone();
        comps[nd.comp - 1][nd.row - 1] -= 1;
        Multicomposition::new(comps)
    }

    /// Addable nodes, in reading order (component by component, rows top-down).
    pub fn addable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (l, comp) in self.components.iter().enumerate() {
            for r in 0..=comp.len() {
                let len = comp.get(r).copied().unwrap_or(0);
                if r == 0 || comp[r - 1] > len {
                    out.push(Node::new(r + 1, len + 1, l + 1));
                }
            }
        }
        out
    }

    /// Removable nodes, in reading order.
    pub fn removable_nodes(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for (l, comp) in self.components.iter().enumerate() {
            for (r, &len) in comp.iter().enumerate() {
                let next = comp.get(r + 1).copied().unwrap_or(0);
                if len > 0 && next < len {
                    out.push(Node::new(r + 1, len, l + 1));
                }
            }
        }
        out
    }

    /// Addable and removable nodes, optionally restricted to a residue and to nodes below `below`.
    pub fn addable_removable(
        &self,
        charge: &Multicharge,
        q: &QuiverData,
        filter: Option<Residue>,
        below: Option<&Node>,
    ) -> Result<(Vec<Node>, Vec<Node>)> {
        let keep = |nd: &Node| -> Result<bool> {
            let res_ok = match filter {
                Some(i) => residue(nd, charge, q)? == q.normalize(i),
                None => true,
            };
            Ok(res_ok && below.is_none_or(|b| nd.is_below(b)))
        };
        let mut add = Vec::new();
        for nd in self.addable_nodes() {
            if keep(&nd)? {
                add.push(nd);
            }
        }
        let mut rem = Vec::new();
        for nd in self.removable_nodes() {
            if keep(&nd)? {
                rem.push(nd);
            }
        }
        Ok((add, rem))
    }

    /// The last node of `t^λ`, i.e. the end of the last nonempty row.
    pub fn last_node(&self) -> Option<Node> {
        for (l, comp) in self.components.iter().enumerate().rev() {
            if let Some((r, &len)) = comp.iter().enumerate().rev().find(|(_, &len)| len > 0) {
                return Some(Node::new(r + 1, len, l + 1));
            }
        }
        None
    }

    /// `λ⁺`: one more node at the end of the last nonempty row.
    pub fn plus(&self) -> Option<Self> {
        let nd = self.last_node()?;
        Some(self.with_node(&Node::new(nd.row, nd.col + 1, nd.comp)))
    }

    /// `λ₋ = λ|_{n−1}`.
    pub fn minus(&self) -> Result<Self> {
        let nd = self
            .last_node()
            .ok_or_else(|| KlrError::InvalidInput("the empty multipartition has no λ₋".into()))?;
        Ok(self.without_node(&nd))
    }

    /// `Shape(t^λ|_m)`.
    pub fn restrict(&self, m: usize) -> Self {
        let mut comps = vec![Vec::new(); self.level()];
        for nd in self.nodes().into_iter().take(m) {
            let comp = &mut comps[nd.comp - 1];
            if comp.len() < nd.row {
                comp.resize(nd.row, 0);
            }
            comp[nd.row - 1] += 1;
        }
        Multicomposition::new(comps)
    }

    /// Dominance order: compares all prefix sums taken in reading order.
    pub fn dominance(&self, other: &Self) -> Result<Comparison> {
        if self.size() != other.size() || self.level() != other.level() {
            return Err(KlrError::InvalidInput(format!("cannot compare {self} with {other}")));
        }
        let (mut ge, mut le) = (true, true);
        let (mut sa, mut sb) = (0usize, 0usize);
        for l in 0..self.level() {
            let (ca, cb) = (&self.components[l], &other.components[l]);
            for r in 0..ca.len().max(cb.len()) {
                sa += ca.get(r).copied().unwrap_or(0);
                sb += cb.get(r).copied().unwrap_or(0);
                ge &= sa >= sb;
                le &= sa <= sb;
            }
        }
        Ok(match (ge, le) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Greater,
            (false, true) => Comparison::Less,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// Lexicographic order: first differing component, then first differing row.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for l in 0..self.level().max(other.level()) {
            let empty = Vec::new();
            let ca = self.components.get(l).unwrap_or(&empty);
            let cb = other.components.get(l).unwrap_or(&empty);
            for r in 0..ca.len().max(cb.len()) {
                let (a, b) = (ca.get(r).copied().unwrap_or(0), cb.get(r).copied().unwrap_or(0));
                if a != b {
                    return a.cmp(&b);
                }
            }
        }
        Ordering::Equal
    }

    /// All multipartitions of `n` with `level` components, in decreasing lexicographic order.
    pub fn all(n: usize, level: usize) -> Vec<Self> {
        let mut out = Vec::new();
        fn compositions(n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if parts == 1 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for k in (0..=n).rev() {
                cur.push(k);
                compositions(n - k, parts - 1, cur, out);
                cur.pop();
            }
        }
        if level == 0 {
            return if n == 0 { vec![Multicomposition::empty(0)] } else { out };
        }
        let mut sizes = Vec::new();
        compositions(n, level, &mut Vec::new(), &mut sizes);
        for sz in sizes {
            let per: Vec<Vec<Vec<usize>>> = sz.iter().map(|&k| partitions(k)).collect();
            let mut idx = vec![0usize; level];
            'outer: loop {
                out.push(Multicomposition::new(
                    (0..level).map(|l| per[l][idx[l]].clone()).collect(),
                ));
                for l in (0..level).rev() {
                    idx[l] += 1;
                    if idx[l] < per[l].len() {
                        continue 'outer;
                    }
                    idx[l] = 0;
                }
                break;
            }
        }
        out.sort_by(|a, b| b.lex_cmp(a));
        out
    }

    /// Cut at row `a` of the last component: `μ = λ|_m` and the remaining rows `γ`.
    pub fn cut(&self, a: usize, charge: &Multicharge, q: &QuiverData) -> Result<Cut> {
        let level = self.level();
        let last = self.components.last().cloned().unwrap_or_default();
        if level == 0 || a > last.len() {
            return Err(KlrError::InvalidInput(format!("row {a} is not a cut row of {self}")));
        }
        let m = self.components[..level - 1].iter().flatten().sum::<usize>()
            + last[..a].iter().sum::<usize>();
        let residue = residue(&Node::new(a + 1, 1, level), charge, q)?;
        Ok(Cut {
            m,
            mu: self.restrict(m),
            gamma: last[a..].to_vec(),
            residue,
            weight: Weight::fundamental(q, residue),
        })
    }

    /// `λ ∨ μ`: the rows of `μ` appended to the last component of `λ`.
    pub fn concatenate(&self, rows: &[usize]) -> Self {
        let mut comps = self.components.clone();
        let last = comps.last_mut().expect("level at least one");
        last.extend_from_slice(rows);
        Multicomposition { components: comps }
    }

    /// Parses `"3,1|2"`; an empty component is written as nothing, `0`, `-` or `∅`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut comps = Vec::new();
        for comp in text.split('|') {
            let comp = comp.trim();
            if comp.is_empty() || comp == "0" || comp == "-" || comp == "∅" {
                comps.push(Vec::new());
                continue;
            }
            let mut parts = Vec::new();
            for p in comp.split(',') {
                let p = p.trim();
                let (base, rep) = match p.split_once('^') {
                    Some((b, r)) => (b, r.parse::<usize>().map_err(|_| bad_shape(text))?),
                    None => (p, 1),
                };
                let v = base.parse::<usize>().map_err(|_| bad_shape(text))?;
                parts.extend(std::iter::repeat_n(v, rep));
            }
            comps.push(parts);
        }
        Ok(Multicomposition::new(comps))
    }
}

fn bad_shape(text: &str) -> KlrError {
    KlrError::Parse(format!("bad multipartition {text:?}"))
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Result of cutting a multicomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub m: usize,
    pub mu: Multicomposition,
    pub gamma: Vec<usize>,
    pub residue: Residue,
    pub weight: Weight,
}

impl fmt::Display for Multicomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                if c.is_empty() {
                    "-".to_string()
                } else {
                    c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
                }
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}
