//! Reading-list divisibility `≤_RL`, the lexicographic monomial order, and
//! the labeled-tree encoding of reading lists.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::{Combination, Monomial, TensorMonomial};
use crate::error::{Error, Result};
use crate::exterior::ExteriorMonomial;
use crate::products::IncFn;
use crate::rational::Rational;

/// Positions `k_1 < ⋯ < k_n` of the larger list and the increasing map `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RlWitness {
    pub positions: Vec<u32>,
    pub g: Vec<u32>,
}

/// Bitmask of the slots (among `slots`) whose wedge contains `letter`.
fn membership(m: &TensorMonomial, slots: &[usize], letter: u32) -> u64 {
    slots
        .iter()
        .enumerate()
        .filter(|(_, &k)| m.factor(k).contains(letter))
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Greedy leftmost embedding of the membership word of `s` into that of `t`
/// restricted to the chosen slots. Leftmost matching is optimal for
/// subsequence embedding, so `None` means no increasing `g` exists.
fn embed_letters(s: &TensorMonomial, t: &TensorMonomial, s_slots: &[usize], t_slots: &[usize]) -> Option<Vec<u32>> {
    let (src, dst) = (s.d() * s.mult(), t.d() * t.mult());
    let mut g = Vec::with_capacity(src);
    let mut b = 1u32;
    for a in 1..=src as u32 {
        let want = membership(s, s_slots, a);
        loop {
            if b as usize > dst {
                return None;
            }
            let have = membership(t, t_slots, b);
            b += 1;
            if have == want {
                g.push(b - 1);
                break;
            }
        }
    }
    Some(g)
}

/// Decides `S ≤_RL T`: slots `k_1 < ⋯ < k_n` of `T` and an increasing
/// `g: [Md] → [Me]` with `T^{k_i} ∩ g([Md]) = g(S^i)` for every `i`, which is
/// exactly when `T` is a multiple of `S` under `·_σ` and `∗_g`.
pub fn rl_leq(s: &TensorMonomial, t: &TensorMonomial) -> Result<Option<RlWitness>> {
    if s.mult() != t.mult() {
        return Err(Error::Shape(format!("multiplier mismatch: {} vs {}", s.mult(), t.mult())));
    }
    let (n, m) = (s.n(), t.n());
    if n > m || s.d() > t.d() || n > 64 {
        return Ok(None);
    }
    let mut chosen = Vec::with_capacity(n);
    Ok(search(s, t, &mut chosen, 0).map(|(positions, g)| RlWitness {
        positions: positions.iter().map(|&k| k as u32 + 1).collect(),
        g,
    }))
}

fn search(s: &TensorMonomial, t: &TensorMonomial, chosen: &mut Vec<usize>, from: usize) -> Option<(Vec<usize>, Vec<u32>)> {
    let depth = chosen.len();
    let s_slots: Vec<usize> = (0..depth).collect();
    let g = embed_letters(s, t, &s_slots, chosen)?;
    if depth == s.n() {
        return Some((chosen.clone(), g));
    }
    let remaining = s.n() - depth;
    for k in from..=t.n() - remaining {
        chosen.push(k);
        if let Some(found) = search(s, t, chosen, k + 1) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Checks a witness directly against the defining condition.
pub fn check_witness(s: &TensorMonomial, t: &TensorMonomial, w: &RlWitness) -> bool {
    let Ok(g) = IncFn::new(t.d() * t.mult(), w.g.clone()) else {
        return false;
    };
    if g.domain() != s.d() * s.mult() || w.positions.len() != s.n() {
        return false;
    }
    if w.positions.windows(2).any(|p| p[0] >= p[1]) || w.positions.iter().any(|&k| k == 0 || k as usize > t.n()) {
        return false;
    }
    w.positions.iter().enumerate().all(|(i, &k)| {
        let target = t.factor(k as usize - 1);
        let image: Vec<u32> = s.factor(i).indices().iter().map(|&a| g.image()[a as usize - 1]).collect();
        let hit: Vec<u32> = target.indices().iter().copied().filter(|b| g.image().contains(b)).collect();
        hit == image
    })
}

/// The lexicographic order on `(Z^d)^n`.
pub fn monomial_cmp<K: Monomial>(a: &K, b: &K) -> Result<Ordering> {
    if a.bidegree() != b.bidegree() {
        return Err(Error::BidegreeMismatch(a.bidegree(), b.bidegree()));
    }
    Ok(a.factors().cmp(b.factors()))
}

/// `init(f)`: the largest monomial with its coefficient.
pub fn leading_term<K: Monomial>(f: &Combination<K>) -> Result<(Rational, K)> {
    f.term_map()
        .iter()
        .next_back()
        .map(|(m, c)| (c.clone(), m.clone()))
        .ok_or(Error::ZeroElement)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeVertex {
    pub k: u32,
    pub j: u32,
    pub psi: Vec<u32>,
}

/// A root with `n` path branches; vertex `k` of branch `j` is labeled
/// `(k, j, ψ(k, S))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTree {
    pub d: usize,
    #[serde(rename = "M")]
    pub mult: usize,
    pub root: TreeVertex,
    pub branches: Vec<Vec<TreeVertex>>,
}

/// `ψ(k, S)`: entry `i` is `i` when `k ∈ S^i`, else 0.
pub fn psi(s: &TensorMonomial, k: u32) -> Vec<u32> {
    (0..s.n())
        .map(|i| if s.factor(i).contains(k) { i as u32 + 1 } else { 0 })
        .collect()
}

pub fn encode_tree(s: &TensorMonomial) -> LabeledTree {
    let n = s.n();
    let letters = (s.d() * s.mult()) as u32;
    let branches = (1..=n as u32)
        .map(|j| (1..=letters).map(|k| TreeVertex { k, j, psi: psi(s, k) }).collect())
        .collect();
    LabeledTree {
        d: s.d(),
        mult: s.mult(),
        root: TreeVertex { k: 0, j: 0, psi: vec![n as u32 + 1; n] },
        branches,
    }
}

pub fn decode_tree(t: &LabeledTree) -> Result<TensorMonomial> {
    let n = t.branches.len();
    let alphabet = t.d * t.mult;
    let mut slots = vec![Vec::new(); n];
    if let Some(branch) = t.branches.first() {
        for v in branch {
            for (i, &p) in v.psi.iter().enumerate() {
                if p != 0 {
                    slots.get_mut(i).ok_or_else(|| Error::Shape("ψ longer than branch count".into()))?.push(v.k);
                }
            }
        }
    }
    let factors = slots
        .into_iter()
        .map(|ix| ExteriorMonomial::new(alphabet, ix))
        .collect::<Result<Vec<_>>>()?;
    TensorMonomial::new(t.d, t.mult, factors)
}

/// Branch-wise subsequence embedding with `k ≤ k′` and equal `(j, ψ)`.
pub fn tree_leq(a: &LabeledTree, b: &LabeledTree) -> bool {
    if a.branches.len() != b.branches.len() || a.root.psi != b.root.psi {
        return false;
    }
    a.branches.iter().zip(&b.branches).all(|(x, y)| {
        let mut it = y.iter();
        x.iter().all(|v| it.any(|w| v.k <= w.k && v.j == w.j && v.psi == w.psi))
    })
}

/// The `≤_RL`-minimal elements, in input order with duplicates removed.
pub fn minimal_elements(set: &[TensorMonomial]) -> Result<Vec<TensorMonomial>> {
    let mut uniq: Vec<TensorMonomial> = Vec::new();
    for s in set {
        if !uniq.contains(s) {
            uniq.push(s.clone());
        }
    }
    let keep: Vec<bool> = uniq
        .par_iter()
        .map(|t| {
            for s in &uniq {
                if s != t && s.mult() == t.mult() && rl_leq(s, t)?.is_some() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(uniq.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect())
}
