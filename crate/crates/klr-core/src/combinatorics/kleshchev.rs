use std::collections::HashMap;

use super::partition::{residue, Multipartition, Node};
use crate::error::Result;
use crate::quiver::{Multicharge, QuiverData, Residue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    Addable,
    Removable,
}

/// Cancels `R…A` pairs (a removable symbol followed by an addable one with only cancelled
/// symbols between) until none remain. Cancelled positions become `None`.
pub fn reduce_signature(seq: &[Signature]) -> Vec<Option<Signature>> {
    let mut out: Vec<Option<Signature>> = seq.iter().copied().map(Some).collect();
    let mut open: Vec<usize> = Vec::new();
    for i in 0..out.len() {
        match out[i] {
            Some(Signature::Removable) => open.push(i),
            Some(Signature::Addable) => {
                if let Some(j) = open.pop() {
                    out[i] = None;
                    out[j] = None;
                }
            }
            None => {}
        }
    }
    out
}

/// The `i`-signature of `λ`, reading rows of each component top-down.
pub fn signature(
    shape: &Multipartition,
    i: Residue,
    charge: &Multicharge,
    q: &QuiverData,
) -> Result<Vec<(Signature, Node)>> {
    let (add, rem) = shape.addable_removable(charge, q, Some(i), None)?;
    let mut seq: Vec<(Signature, Node)> = add
        .into_iter()
        .map(|nd| (Signature::Addable, nd))
        .chain(rem.into_iter().map(|nd| (Signature::Removable, nd)))
        .collect();
    // each row carries at most one i-node; ties in (comp, row) cannot occur for e ≠ 1
    seq.sort_by_key(|(_, nd)| (nd.comp, nd.row));
    Ok(seq)
}

/// The good `i`-node: the leftmost removable symbol surviving cancellation.
pub fn good_node(shape: &Multipartition, i: Residue, charge: &Multicharge, q: &QuiverData) -> Result<Option<Node>> {
    let sig = signature(shape, i, charge, q)?;
    let symbols: Vec<Signature> = sig.iter().map(|(s, _)| *s).collect();
    let reduced = reduce_signature(&symbols);
    Ok(reduced
        .iter()
        .position(|s| *s == Some(Signature::Removable))
        .map(|pos| sig[pos].1))
}

/// Kleshchev multipartitions: `∅`, and anything whose removal of a good node is Kleshchev.
pub struct KleshchevOracle {
    charge: Multicharge,
    q: QuiverData,
    memo: HashMap<Multipartition, bool>,
}

impl KleshchevOracle {
    pub fn new(charge: &Multicharge, q: &QuiverData) -> Self {
        KleshchevOracle { charge: charge.clone(), q: *q, memo: HashMap::new() }
    }

    pub fn is_kleshchev(&mut self, shape: &Multipartition) -> Result<bool> {
        if shape.size() == 0 {
            return Ok(true);
        }
        if let Some(&b) = self.memo.get(shape) {
            return Ok(b);
        }
        let mut residues: Vec<Residue> = shape
            .removable_nodes()
            .iter()
            .map(|nd| residue(nd, &self.charge, &self.q))
            .collect::<Result<_>>()?;
        residues.sort_unstable();
        residues.dedup();
        let mut result = false;
        for i in residues {
            if let Some(nd) = good_node(shape, i, &self.charge, &self.q)? {
                if self.is_kleshchev(&shape.without_node(&nd))? {
                    result = true;
                    break;
                }
            }
        }
        self.memo.insert(shape.clone(), result);
        Ok(result)
    }
}

pub fn is_kleshchev(shape: &Multipartition, charge: &Multicharge, q: &QuiverData) -> Result<bool> {
    KleshchevOracle::new(charge, q).is_kleshchev(shape)
}
