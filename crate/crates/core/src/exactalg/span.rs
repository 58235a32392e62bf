//! Incremental linear independence over the rationals for sparse vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::rat::Rat;

/// Echelon basis of the span of the vectors inserted so far.
#[derive(Clone, Debug, Default)]
pub struct LinearSpan<K: Ord + Clone> {
    basis: Vec<(K, BTreeMap<K, Rat>)>,
}

impl<K: Ord + Clone> LinearSpan<K> {
    pub fn new() -> Self {
        LinearSpan { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut v: BTreeMap<K, Rat>) -> BTreeMap<K, Rat> {
        for (pivot, b) in &self.basis {
            let Some(f) = v.get(pivot).cloned() else {
                continue;
            };
            for (k, c) in b {
                let e = v.entry(k.clone()).or_insert_with(Rat::zero);
                *e -= &f * c;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: BTreeMap<K, Rat>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns `true` if it was independent of the span.
    pub fn insert(&mut self, v: BTreeMap<K, Rat>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rat::one() / lead;
        let r: BTreeMap<K, Rat> = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.basis.push((pivot, r));
        true
    }
}

/// Dense vector as a sparse map keyed by coordinate index.
pub fn dense_key(v: &[Rat]) -> BTreeMap<usize, Rat> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::int;

    #[test]
    fn detects_dependence() {
        let mut s = LinearSpan::new();
        assert!(s.insert(dense_key(&[int(1), int(2), int(0)])));
        assert!(s.insert(dense_key(&[int(0), int(1), int(1)])));
        assert!(!s.insert(dense_key(&[int(2), int(5), int(1)])));
        assert!(!s.insert(dense_key(&[int(0), int(0), int(0)])));
        assert!(s.insert(dense_key(&[int(0), int(0), int(1)])));
        assert_eq!(s.dim(), 3);
    }
}
