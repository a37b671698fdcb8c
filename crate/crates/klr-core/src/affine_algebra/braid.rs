//! Paths between reduced words through commutation and braid moves.

use std::collections::{HashMap, VecDeque};

/// One rewriting step on a reduced word, applied at `pos` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// `s_a s_b → s_b s_a` with `|a − b| > 1`.
    Commute { pos: usize },
    /// `s_a s_{a+1} s_a → s_{a+1} s_a s_{a+1}`.
    BraidUp { pos: usize },
    /// `s_{a+1} s_a s_{a+1} → s_a s_{a+1} s_a`.
    BraidDown { pos: usize },
}

impl Move {
    pub fn apply(&self, word: &mut [u8]) {
        match *self {
            Move::Commute { pos } => word.swap(pos, pos + 1),
            Move::BraidUp { pos } => {
                let a = word[pos];
                word[pos] = a + 1;
                word[pos + 1] = a;
                word[pos + 2] = a + 1;
            }
            Move::BraidDown { pos } => {
                let a = word[pos + 1];
                word[pos] = a;
                word[pos + 1] = a + 1;
                word[pos + 2] = a;
            }
        }
    }
}

/// All moves applicable to `word`, left to right.
pub fn moves(word: &[u8]) -> Vec<Move> {
    let mut out = Vec::new();
    for pos in 0..word.len().saturating_sub(1) {
        let (a, b) = (word[pos], word[pos + 1]);
        if a.abs_diff(b) > 1 {
            out.push(Move::Commute { pos });
        }
        if pos + 2 < word.len() && word[pos + 2] == a {
            if b == a + 1 {
                out.push(Move::BraidUp { pos });
            } else if a == b + 1 {
                out.push(Move::BraidDown { pos });
            }
        }
    }
    out
}

/// Breadth-first search from `start` to the first word accepted by `accept`. `reverse`
/// explores moves right to left, which generally yields a different path.
pub fn find_path(start: &[u8], accept: impl Fn(&[u8]) -> bool, reverse: bool) -> Option<Vec<Move>> {
    if accept(start) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<Vec<u8>, (Vec<u8>, Move)> = HashMap::new();
    let mut queue = VecDeque::from([start.to_vec()]);
    parent.insert(start.to_vec(), (Vec::new(), Move::Commute { pos: usize::MAX }));
    while let Some(word) = queue.pop_front() {
        let mut ms = moves(&word);
        if reverse {
            ms.reverse();
        }
        for m in ms {
            let mut next = word.clone();
            m.apply(&mut next);
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), (word.clone(), m));
            if accept(&next) {
                let mut path = Vec::new();
                let mut cur = next;
                while cur != start {
                    let (prev, mv) = parent[&cur].clone();
                    path.push(mv);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}
