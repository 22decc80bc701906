//! Basis wedges `v_{i_1} ∧ ⋯ ∧ v_{i_d}` with 1-based indices.

use std::fmt;

use crate::error::{Error, Result};
use crate::products::IncFn;

/// A strictly increasing index list over the alphabet `[1..alphabet]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExteriorMonomial {
    alphabet: usize,
    indices: Vec<u32>,
}

impl ExteriorMonomial {
    pub fn new(alphabet: usize, indices: Vec<u32>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(indices));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i as usize > alphabet) {
            return Err(Error::IndexOutOfRange { index: bad, bound: alphabet });
        }
        Ok(Self { alphabet, indices })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_sorted(alphabet: usize, indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { alphabet, indices }
    }

    pub fn empty(alphabet: usize) -> Self {
        Self { alphabet, indices: Vec::new() }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn width(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// `self ∧ other`: `None` when an index repeats, otherwise the sign of the
    /// merge permutation and the sorted union.
    pub fn wedge(&self, other: &Self) -> Result<Option<(i8, Self)>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, other.alphabet));
        }
        Ok(merge_signed(&self.indices, &other.indices)
            .map(|(sign, indices)| (sign, Self { alphabet: self.alphabet, indices })))
    }

    /// Pointwise image under an increasing map; the sign is always +1.
    pub fn relabel(&self, g: &IncFn) -> Result<Self> {
        let indices = self
            .indices
            .iter()
            .map(|&i| g.apply(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { alphabet: g.codomain(), indices })
    }
}

/// Linear merge of two increasing lists. Each time an element of `b` is
/// emitted ahead of the remaining elements of `a` it passes over all of them.
pub(crate) fn merge_signed(a: &[u32], b: &[u32]) -> Option<(i8, Vec<u32>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((if inversions % 2 == 0 { 1 } else { -1 }, out))
}

/// Sign of the permutation sorting `seq`, or 0 if it has a repeat.
pub fn sort_sign(seq: &[u32]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return 0;
            }
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl fmt::Display for ExteriorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn em(n: usize, ix: &[u32]) -> ExteriorMonomial {
        ExteriorMonomial::new(n, ix.to_vec()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let (s, w) = em(4, &[1, 2]).wedge(&em(4, &[3, 4])).unwrap().unwrap();
        assert_eq!((s, w.indices()), (1, &[1, 2, 3, 4][..]));
        let (s, w) = em(4, &[1, 3]).wedge(&em(4, &[2, 4])).unwrap().unwrap();
        assert_eq!((s, w.indices()), (-1, &[1, 2, 3, 4][..]));
        assert!(em(4, &[1, 2]).wedge(&em(4, &[2, 3])).unwrap().is_none());
        assert!(matches!(em(4, &[1]).wedge(&em(5, &[2])), Err(Error::AlphabetMismatch(4, 5))));
    }

    #[test]
    fn constructor_rejects_bad_lists() {
        assert!(ExteriorMonomial::new(4, vec![2, 1]).is_err());
        assert!(ExteriorMonomial::new(4, vec![1, 1]).is_err());
        assert!(ExteriorMonomial::new(4, vec![0]).is_err());
        assert!(ExteriorMonomial::new(4, vec![5]).is_err());
    }

    #[test]
    fn relabel_examples() {
        let g = IncFn::new(5, vec![2, 3, 4, 5]).unwrap();
        assert_eq!(em(4, &[1, 2]).relabel(&g).unwrap().indices(), &[2, 3]);
        assert_eq!(em(4, &[2, 3]).relabel(&g).unwrap().indices(), &[3, 4]);
        assert_eq!(em(4, &[]).relabel(&g).unwrap().width(), 0);
        let short = IncFn::new(5, vec![1, 2]).unwrap();
        assert!(em(4, &[3]).relabel(&short).is_err());
    }

    #[test]
    fn sort_sign_matches_merge() {
        assert_eq!(sort_sign(&[1, 3, 2, 4]), -1);
        assert_eq!(sort_sign(&[2, 3, 1]), 1);
        assert_eq!(sort_sign(&[1, 1]), 0);
    }

    fn subset(n: u32) -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::btree_set(1..=n, 0..=n as usize).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn wedge_anticommutes(a in subset(8), b in subset(8)) {
            let (a, b) = (em(8, &a), em(8, &b));
            match (a.wedge(&b).unwrap(), b.wedge(&a).unwrap()) {
                (Some((s1, w1)), Some((s2, w2))) => {
                    prop_assert_eq!(w1, w2);
                    let parity = if (a.width() * b.width()) % 2 == 0 { 1 } else { -1 };
                    prop_assert_eq!(s1, parity * s2);
                }
                (None, None) => {}
                _ => prop_assert!(false, "asymmetric annihilation"),
            }
        }

        #[test]
        fn relabel_commutes_with_wedge(a in subset(6), b in subset(6), img in proptest::collection::btree_set(1u32..=10, 6)) {
            let g = IncFn::new(10, img.into_iter().collect()).unwrap();
            let (a, b) = (em(6, &a), em(6, &b));
            let lhs = a.wedge(&b).unwrap().map(|(s, w)| (s, w.relabel(&g).unwrap()));
            let rhs = a.relabel(&g).unwrap().wedge(&b.relabel(&g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
