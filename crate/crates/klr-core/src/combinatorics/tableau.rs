use std::fmt;

use serde::{Deserialize, Serialize};

use super::partition::{residue, Comparison, Multicomposition, Multipartition, Node};
use crate::affine_algebra::Perm;
use crate::error::{KlrError, Result};
use crate::quiver::{Multicharge, QuiverData, Residue};

/// A standard tableau: rows of entries per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardTableau {
    shape: Multipartition,
    rows: Vec<Vec<Vec<usize>>>,
}

impl StandardTableau {
    /// `t^λ`: entries 1..n in reading order.
    pub fn initial(shape: &Multipartition) -> Self {
        let mut k = 0;
        let rows = shape
            .components()
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|&len| {
                        let row: Vec<usize> = (k + 1..=k + len).collect();
                        k += len;
                        row
                    })
                    .collect()
            })
            .collect();
        StandardTableau { shape: shape.clone(), rows }
    }

    /// Build from rows of entries, checking standardness.
    pub fn from_rows(rows: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let shape = Multicomposition::new(rows.iter().map(|c| c.iter().map(|r| r.len()).collect()).collect());
        let rows: Vec<Vec<Vec<usize>>> =
            rows.into_iter().map(|c| c.into_iter().filter(|r| !r.is_empty()).collect()).collect();
        let t = StandardTableau { shape, rows };
        if !t.shape.is_multipartition() || !t.is_standard() {
            return Err(KlrError::InvalidInput(format!("{t} is not a standard tableau")));
        }
        Ok(t)
    }

    fn is_standard(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n + 1];
        for comp in &self.rows {
            for (r, row) in comp.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    if v == 0 || v > n || seen[v] {
                        return false;
                    }
                    seen[v] = true;
                    if c > 0 && row[c - 1] >= v {
                        return false;
                    }
                    if r > 0 && comp[r - 1][c] >= v {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn shape(&self) -> &Multipartition {
        &self.shape
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn rows(&self) -> &[Vec<Vec<usize>>] {
        &self.rows
    }

    pub fn entry(&self, nd: &Node) -> Option<usize> {
        self.rows.get(nd.comp - 1)?.get(nd.row - 1)?.get(nd.col - 1).copied()
    }

    /// Node holding entry `k`.
    pub fn node_of(&self, k: usize) -> Node {
        for (l, comp) in self.rows.iter().enumerate() {
            for (r, row) in comp.iter().enumerate() {
                if let Some(c) = row.iter().position(|&v| v == k) {
                    return Node::new(r + 1, c + 1, l + 1);
                }
            }
        }
        panic!("entry {k} not in tableau {self}")
    }

    /// Node positions of entries 1..n.
    pub fn positions(&self) -> Vec<Node> {
        let mut out = vec![Node::new(0, 0, 0); self.size()];
        for (l, comp) in self.rows.iter().enumerate() {
            for (r, row) in comp.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    out[v - 1] = Node::new(r + 1, c + 1, l + 1);
                }
            }
        }
        out
    }

    pub fn residue_sequence(&self, charge: &Multicharge, q: &QuiverData) -> Result<Vec<Residue>> {
        self.positions().iter().map(|nd| residue(nd, charge, q)).collect()
    }

    /// `Shape(t|_k)`.
    pub fn restrict_shape(&self, k: usize) -> Multicomposition {
        Multicomposition::new(
            self.rows
                .iter()
                .map(|comp| comp.iter().map(|row| row.iter().filter(|&&v| v <= k).count()).collect())
                .collect(),
        )
    }

    /// `t·s_r`, if standard.
    pub fn swap(&self, r: usize) -> Option<Self> {
        let rows = self
            .rows
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| if v == r { r + 1 } else if v == r + 1 { r } else { v })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let t = StandardTableau { shape: self.shape.clone(), rows };
        t.is_standard().then_some(t)
    }

    /// `d(t)` with `t^λ·d(t) = t`.
    pub fn perm(&self) -> Perm {
        let init = StandardTableau::initial(&self.shape);
        let mut images = vec![0; self.size()];
        for (k, nd) in init.positions().iter().enumerate() {
            images[k] = self.entry(nd).unwrap();
        }
        Perm::from_images(&images).expect("tableaux are bijections")
    }

    /// The standard expression `w_n ⋯ w_1` of `d(t)`, built along the chain of restrictions.
    pub fn standard_expression(&self) -> Vec<usize> {
        let mut word = Vec::new();
        for i in (1..=self.size()).rev() {
            let mu = self.restrict_shape(i);
            let a = StandardTableau::initial(&mu).entry(&self.node_of(i)).unwrap();
            word.extend(a..i);
        }
        word
    }

    /// Dominance: `s ⊵ t` iff `Shape(s|_k) ⊵ Shape(t|_k)` for all k.
    pub fn dominance(&self, other: &Self) -> Result<Comparison> {
        if self.size() != other.size() {
            return Err(KlrError::InvalidInput("tableaux of different sizes".into()));
        }
        let (mut ge, mut le) = (true, true);
        for k in 1..=self.size() {
            match self.restrict_shape(k).dominance(&other.restrict_shape(k))? {
                Comparison::Greater => le = false,
                Comparison::Less => ge = false,
                Comparison::Incomparable => return Ok(Comparison::Incomparable),
                Comparison::Equal => {}
            }
        }
        Ok(match (ge, le) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Greater,
            (false, true) => Comparison::Less,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// All standard tableaux of shape `λ`; `t^λ` comes first.
    pub fn all(shape: &Multipartition) -> Vec<Self> {
        let n = shape.size();
        let mut out = Vec::new();
        let mut rows: Vec<Vec<Vec<usize>>> =
            shape.components().iter().map(|c| vec![Vec::new(); c.len()]).collect();
        fn rec(shape: &Multipartition, k: usize, n: usize, rows: &mut Vec<Vec<Vec<usize>>>, out: &mut Vec<StandardTableau>) {
            if k > n {
                out.push(StandardTableau { shape: shape.clone(), rows: rows.clone() });
                return;
            }
            for l in 0..rows.len() {
                for r in 0..rows[l].len() {
                    let len = rows[l][r].len();
                    let fits = len < shape.components()[l][r] && (r == 0 || rows[l][r - 1].len() > len);
                    if fits {
                        rows[l][r].push(k);
                        rec(shape, k + 1, n, rows, out);
                        rows[l][r].pop();
                    }
                }
            }
        }
        rec(shape, 1, n, &mut rows, &mut out);
        out
    }

    /// Parses `"1,2,4;3,5|6"`: rows separated by `;`, components by `|`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut comps = Vec::new();
        for comp in text.split('|') {
            let comp = comp.trim();
            if comp.is_empty() || comp == "-" || comp == "∅" {
                comps.push(Vec::new());
                continue;
            }
            let mut rows = Vec::new();
            for row in comp.split(';') {
                let entries = row
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| KlrError::Parse(format!("bad tableau {text:?}")))?;
                rows.push(entries);
            }
            comps.push(rows);
        }
        StandardTableau::from_rows(comps)
    }
}

/// `y_λ` exponents: the number of addable nodes of `Shape(t^λ|_k)` below the node of `k`
/// sharing its residue.
pub fn y_exponents(shape: &Multipartition, charge: &Multicharge, q: &QuiverData) -> Result<Vec<u32>> {
    let nodes = shape.nodes();
    let mut out = Vec::with_capacity(nodes.len());
    for (k, nd) in nodes.iter().enumerate() {
        let mu = shape.restrict(k + 1);
        let (add, _) = mu.addable_removable(charge, q, Some(residue(nd, charge, q)?), Some(nd))?;
        out.push(add.len() as u32);
    }
    Ok(out)
}

/// `b_k^λ`; for `λ = ∅` this is `(Λ, α_k)`.
pub fn b_k(shape: &Multipartition, k: Residue, charge: &Multicharge, q: &QuiverData) -> Result<u32> {
    let Some(last) = shape.last_node() else {
        return Ok(charge.entries().iter().filter(|&&c| c == q.normalize(k)).count() as u32);
    };
    let (add, _) = shape.addable_removable(charge, q, Some(k), Some(&last))?;
    let mut b = add.len() as u32;
    let bumped = shape.plus().is_some_and(|p| p.is_multipartition());
    if bumped && q.normalize(residue(&last, charge, q)? + 1) == q.normalize(k) {
        b += 1;
    }
    Ok(b)
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .rows
            .iter()
            .map(|comp| {
                if comp.is_empty() {
                    "-".to_string()
                } else {
                    comp.iter()
                        .map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                        .collect::<Vec<_>>()
                        .join(";")
                }
            })
            .collect();
        write!(f, "{}", comps.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e: u32) -> QuiverData {
        QuiverData::new(e).unwrap()
    }

    #[test]
    fn residue_string_of_initial_tableau() {
        let q4 = q(4);
        let k = Multicharge::new(&q4, vec![0, 0, 0]);
        let lam = Multicomposition::parse("3,1|4^2,2|5,1").unwrap();
        let res = StandardTableau::initial(&lam).residue_sequence(&k, &q4).unwrap();
        let s: String = res.iter().map(|r| r.to_string()).collect();
        assert_eq!(s, "01230123301223012303");
        // the printed string drops the residue of node (3,2,2)
        let mut printed = s.clone();
        printed.remove(13);
        assert_eq!(printed, "0123012330122012303");
        let ys = y_exponents(&lam, &k, &q4).unwrap();
        let support: Vec<(usize, u32)> =
            ys.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, &a)| (i + 1, a)).collect();
        assert_eq!(support, vec![(1, 2), (5, 1), (8, 1), (10, 1), (12, 1), (18, 1)]);
    }

    #[test]
    fn standard_expression_example() {
        let t = StandardTableau::parse("1,2,4,6,7;3,5").unwrap();
        assert_eq!(t.standard_expression(), vec![5, 6, 4, 5, 3]);
        assert_eq!(t.perm().canonical_word(), t.standard_expression());
        let init = StandardTableau::initial(t.shape());
        assert!(init.standard_expression().is_empty());
    }

    #[test]
    fn b_k_example() {
        let q4 = q(4);
        let k = Multicharge::new(&q4, vec![0, 0, 2, 1]);
        let lam = Multicomposition::parse("4,3|2,1|-|-").unwrap();
        let b: Vec<u32> = (0..4).map(|i| b_k(&lam, i, &k, &q4).unwrap()).collect();
        assert_eq!(b, vec![1, 1, 2, 0]);
    }

    #[test]
    fn small_y_exponents() {
        let q3 = q(3);
        let k = Multicharge::new(&q3, vec![0]);
        assert_eq!(y_exponents(&Multicomposition::parse("2").unwrap(), &k, &q3).unwrap(), vec![0, 0]);
        assert_eq!(y_exponents(&Multicomposition::parse("3").unwrap(), &k, &q3).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn tableau_counts() {
        assert_eq!(StandardTableau::all(&Multicomposition::parse("3,2").unwrap()).len(), 5);
        assert_eq!(StandardTableau::all(&Multicomposition::parse("1|1").unwrap()).len(), 2);
        let lam = Multicomposition::parse("2,1").unwrap();
        assert_eq!(StandardTableau::all(&lam)[0], StandardTableau::initial(&lam));
    }
}
