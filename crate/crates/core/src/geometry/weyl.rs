//! The Weyl group of signed permutations acting on `a`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `s = (epsilon, sigma)` acting by `(s t)_j = epsilon_j t_{sigma(j)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub signs: Vec<i8>,
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn new(signs: Vec<i8>, perm: Vec<usize>) -> Result<Self> {
        let r = signs.len();
        let mut seen = vec![false; r];
        let ok = perm.len() == r
            && signs.iter().all(|&s| s == 1 || s == -1)
            && perm.iter().all(|&p| p < r && !std::mem::replace(&mut seen[p], true));
        if ok {
            Ok(WeylElement { signs, perm })
        } else {
            Err(Error::Domain {
                function: "WeylElement::new",
                detail: format!("invalid signed permutation {signs:?} {perm:?}"),
            })
        }
    }

    pub fn identity(r: usize) -> Self {
        WeylElement {
            signs: vec![1; r],
            perm: (0..r).collect(),
        }
    }

    /// All `2^r r!` elements, identity first.
    pub fn all(r: usize) -> Vec<WeylElement> {
        let mut perms: Vec<Vec<usize>> = vec![vec![]];
        for k in 0..r {
            let mut next = Vec::new();
            for p in &perms {
                for pos in 0..=k {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    next.push(q);
                }
            }
            perms = next;
        }
        perms.sort();
        let mut out = Vec::with_capacity(perms.len() << r);
        for mask in 0..(1usize << r) {
            for p in &perms {
                let signs = (0..r)
                    .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
                    .collect();
                out.push(WeylElement {
                    signs,
                    perm: p.clone(),
                });
            }
        }
        out
    }

    pub fn apply<T>(&self, t: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Neg<Output = T>,
    {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| if s < 0 { -t[p] } else { t[p] })
            .collect()
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        let r = self.signs.len();
        WeylElement {
            signs: (0..r).map(|j| self.signs[j] * o.signs[self.perm[j]]).collect(),
            perm: (0..r).map(|j| o.perm[self.perm[j]]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let r = self.signs.len();
        let mut signs = vec![1; r];
        let mut perm = vec![0; r];
        for j in 0..r {
            perm[self.perm[j]] = j;
            signs[self.perm[j]] = self.signs[j];
        }
        WeylElement { signs, perm }
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.signs.len())
    }
}
