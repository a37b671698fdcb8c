use super::partition::{Comparison, Multipartition, Node};
use super::tableau::StandardTableau;
use crate::error::{KlrError, Result};

/// A Garnir belt and its Garnir tableau.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Garnir {
    pub belt: Vec<Node>,
    pub tableau: StandardTableau,
}

/// The Garnir belt at `nd = (a, b, m)`: row `a` from column `b` on, and row `a+1` up to column `b`.
/// The tableau agrees with `t^λ` off the belt and is the least dominant such standard tableau,
/// which is the one whose `d(t)` is longest.
pub fn garnir(shape: &Multipartition, nd: &Node) -> Result<Garnir> {
    let below = Node::new(nd.row + 1, nd.col, nd.comp);
    if !shape.contains(nd) || !shape.contains(&below) {
        return Err(KlrError::InvalidInput(format!("no Garnir belt at {nd} in {shape}")));
    }
    let top_len = shape.row_len(nd.row, nd.comp);
    let top: Vec<Node> = (nd.col..=top_len).map(|c| Node::new(nd.row, c, nd.comp)).collect();
    let bottom: Vec<Node> = (1..=nd.col).map(|c| Node::new(nd.row + 1, c, nd.comp)).collect();
    let init = StandardTableau::initial(shape);
    let mut entries: Vec<usize> = top.iter().chain(&bottom).map(|x| init.entry(x).unwrap()).collect();
    entries.sort_unstable();

    let mut best: Option<StandardTableau> = None;
    for chosen in combinations(entries.len(), bottom.len()) {
        let mut rows = init.rows().to_vec();
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for (i, &v) in entries.iter().enumerate() {
            if chosen.contains(&i) {
                lo.push(v);
            } else {
                hi.push(v);
            }
        }
        for (x, v) in top.iter().zip(&hi) {
            rows[x.comp - 1][x.row - 1][x.col - 1] = *v;
        }
        for (x, v) in bottom.iter().zip(&lo) {
            rows[x.comp - 1][x.row - 1][x.col - 1] = *v;
        }
        let Ok(t) = StandardTableau::from_rows(rows) else { continue };
        best = match best {
            None => Some(t),
            Some(b) => match t.dominance(&b)? {
                Comparison::Less => Some(t),
                Comparison::Incomparable => {
                    return Err(KlrError::Mismatch(format!("no least Garnir tableau at {nd} in {shape}")))
                }
                _ => Some(b),
            },
        };
    }
    let tableau = best.expect("t^λ itself is always a candidate");
    Ok(Garnir { belt: top.into_iter().chain(bottom).collect(), tableau })
}

/// The Garnir tableau at `(k−1, λ^(ℓ)_k, ℓ)` for the last row `k` of the last component,
/// with the entry `r` at that node.
pub fn last_garnir(shape: &Multipartition) -> Result<(StandardTableau, usize)> {
    let l = shape.level();
    let comp = shape.component(l);
    if comp.len() < 2 {
        return Err(KlrError::InvalidInput(format!("last component of {shape} has fewer than two rows")));
    }
    let k = comp.len();
    let nd = Node::new(k - 1, comp[k - 1], l);
    let g = garnir(shape, &nd)?;
    let r = g.tableau.entry(&nd).unwrap();
    Ok((g.tableau, r))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
