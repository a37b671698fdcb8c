use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KlrError, Result};

/// A permutation of `{1..n}` acting on the right: `(i)(uv) = ((i)u)v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n < 256, "at most 255 strands");
        Perm { images: (0..n as u8).collect() }
    }

    /// Build from 1-based images `(1)w, …, (n)w`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(KlrError::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i - 1] = true;
        }
        Ok(Perm { images: images.iter().map(|&i| (i - 1) as u8).collect() })
    }

    /// The product `s_{r_1} s_{r_2} ⋯` of simple transpositions.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        let mut p = Perm::identity(n);
        for &r in word {
            p.mul_simple(r);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `(i)w`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k == i as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i as usize] = k as u8;
        }
        Perm { images: inv }
    }

    /// `self · other`.
    pub fn then(&self, other: &Perm) -> Self {
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    /// `w ↦ w·s_r`.
    pub fn mul_simple(&mut self, r: usize) {
        for i in self.images.iter_mut() {
            if *i as usize == r - 1 {
                *i = r as u8;
            } else if *i as usize == r {
                *i = (r - 1) as u8;
            }
        }
    }

    /// `l(w s_r) > l(w)`.
    pub fn is_ascent(&self, r: usize) -> bool {
        self.inverse_pos(r) < self.inverse_pos(r + 1)
    }

    fn inverse_pos(&self, v: usize) -> usize {
        self.images.iter().position(|&i| i as usize == v - 1).unwrap()
    }

    /// The Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let mut len = 0;
        for a in 0..self.n() {
            for b in a + 1..self.n() {
                if self.images[a] > self.images[b] {
                    len += 1;
                }
            }
        }
        len
    }

    /// Does the pair of positions `a < b` (1-based, top) cross?
    pub fn crosses(&self, a: usize, b: usize) -> bool {
        self.images[a - 1] > self.images[b - 1]
    }

    /// The staircase word `w_n ⋯ w_2` with `w_i = s_{a_i} ⋯ s_{i−1}` (possibly empty).
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        for i in (2..=self.n()).rev() {
            let a = w.inverse_pos(i) + 1;
            word.extend(a..i);
            // w ← w_i^{-1} w, which fixes everything from i on
            let mut block = Perm::identity(self.n());
            for r in (a..i).rev() {
                block.mul_simple(r);
            }
            w = block.then(&w);
        }
        word
    }

    /// The place permutation `seq · w`: the entry at position `k` moves to position `(k)w`.
    pub fn act<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        let mut out = seq.to_vec();
        for (k, &i) in self.images.iter().enumerate() {
            out[i as usize] = seq[k].clone();
        }
        out
    }

    /// `w` embedded in `S_{n+m}` acting on the last `n` points.
    pub fn shift(&self, m: usize) -> Self {
        let mut images: Vec<u8> = (0..m as u8).collect();
        images.extend(self.images.iter().map(|&i| i + m as u8));
        Perm { images }
    }

    /// `w` embedded in `S_{n+1}` fixing `n+1`.
    pub fn extend(&self) -> Self {
        let mut images = self.images.clone();
        images.push(self.n() as u8);
        Perm { images }
    }

    /// All permutations of `{1..n}`.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = vec![Perm::identity(n)];
        let mut frontier = out.clone();
        let mut seen: std::collections::HashSet<Perm> = out.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for r in 1..n {
                    if p.is_ascent(r) {
                        let mut q = p.clone();
                        q.mul_simple(r);
                        if seen.insert(q.clone()) {
                            next.push(q);
                        }
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.canonical_word().iter().map(|r| format!("s{r}")).collect();
        if w.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", w.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_examples() {
        assert!(Perm::identity(4).canonical_word().is_empty());
        let w0 = Perm::from_images(&[3, 2, 1]).unwrap();
        assert_eq!(w0.canonical_word(), vec![1, 2, 1]);
        assert_eq!(Perm::from_word(3, &[2, 1, 2]).canonical_word(), vec![1, 2, 1]);
    }

    #[test]
    fn canonical_word_is_reduced_and_exact() {
        for n in 1..=5 {
            let all = Perm::all(n);
            assert_eq!(all.len(), (1..=n).product::<usize>());
            for p in all {
                let w = p.canonical_word();
                assert_eq!(w.len(), p.length());
                assert_eq!(Perm::from_word(n, &w), p);
            }
        }
    }

    #[test]
    fn right_action_on_sequences() {
        let s1 = Perm::from_word(3, &[1]);
        assert_eq!(s1.act(&[7, 8, 9]), vec![8, 7, 9]);
        let w = Perm::from_word(3, &[1, 2]);
        assert_eq!(w.act(&[7, 8, 9]), Perm::from_word(3, &[2]).act(&s1.act(&[7, 8, 9])));
    }
}
