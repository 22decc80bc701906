//! Passing between tensors, invariant tensors and coinvariants: `π`, `π′`,
//! the symmetrization isomorphism `𝔊` and its inverse, and the
//! comultiplications `Δ` on both sides.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::element::{Bidegree, Combination, Element, Monomial, SymElement, SymMonomial, TensorMonomial};
use crate::error::{Error, Result};
use crate::products::{self, IncFn};
use crate::rational::{self, Rational};

fn permuted(m: &TensorMonomial, p: &[usize]) -> TensorMonomial {
    let factors = p.iter().map(|&k| m.factor(k).clone()).collect();
    TensorMonomial::from_parts(m.d(), m.mult(), factors)
}

/// `(1/n!) Σ_σ w_{σ(1)} ⊗ ⋯ ⊗ w_{σ(n)}`.
pub fn pi(f: &Element) -> Element {
    let n = f.bidegree().n;
    pi_prime(f).scale(&Rational::new(BigInt::one(), rational::factorial(n)))
}

/// `n!·π`, the plain sum over all permutations.
pub fn pi_prime(f: &Element) -> Element {
    let n = f.bidegree().n;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut acc = Element::zero(f.bidegree());
    for (m, c) in f.terms() {
        for p in &perms {
            acc.add_term(permuted(m, p), c.clone());
        }
    }
    acc
}

/// Invariance under adjacent transpositions, which generate `Σ_n`.
pub fn is_invariant(f: &Element) -> bool {
    let n = f.bidegree().n;
    f.terms().all(|(m, c)| {
        (0..n.saturating_sub(1)).all(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(k, k + 1);
            f.coeff(&permuted(m, &p)) == *c
        })
    })
}

/// `𝔊`: `w_1 ⋯ w_n ↦ (1/n!) Σ_σ w_{σ(1)} ⊗ ⋯ ⊗ w_{σ(n)}`.
pub fn symmetrize(f: &SymElement) -> Element {
    let b = f.bidegree();
    let weight = Rational::new(BigInt::one(), rational::factorial(b.n));
    let perms: Vec<Vec<usize>> = (0..b.n).permutations(b.n).collect();
    let mut acc = Element::zero(b);
    for (m, c) in f.terms() {
        let c = c * &weight;
        for p in &perms {
            acc.add_term(permuted(m.as_tensor(), p), c.clone());
        }
    }
    acc
}

/// `𝔊⁻¹`, defined on invariant tensors: project each tensor to its class.
pub fn desymmetrize(f: &Element) -> Result<SymElement> {
    if !is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    Ok(coinvariant_class(f))
}

/// The natural projection `P → P_Σ`, without any invariance check.
pub fn coinvariant_class(f: &Element) -> SymElement {
    let b = f.bidegree();
    let mut acc = SymElement::zero(b);
    for (m, c) in f.terms() {
        acc.add_term(SymMonomial::from_parts(b.d, b.mult, m.factors().to_vec()), c.clone());
    }
    acc
}

/// A sparse element of `A ⊗ A` for `A = P_Σ` or `A = P^Σ`. Both sides share
/// `d` and `M`; their lengths may differ term by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair<K: Monomial> {
    d: usize,
    mult: usize,
    terms: BTreeMap<(K, K), Rational>,
}

pub type SymPair = Pair<SymMonomial>;
pub type TensorPair = Pair<TensorMonomial>;

impl<K: Monomial> Pair<K> {
    pub fn zero(d: usize, mult: usize) -> Self {
        Self { d, mult, terms: BTreeMap::new() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(K, K), &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn add_term(&mut self, left: K, right: K, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_tensor(&mut self, a: &Combination<K>, b: &Combination<K>, c: &Rational) {
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                self.add_term(ma.clone(), mb.clone(), ca * cb * c);
            }
        }
    }

    pub fn tensor(a: &Combination<K>, b: &Combination<K>) -> Self {
        let mut out = Self::zero(a.bidegree().d, a.bidegree().mult);
        out.add_tensor(a, b, &Rational::one());
        out
    }

    pub fn add_pair(&mut self, other: &Self, c: &Rational) {
        for ((l, r), v) in &other.terms {
            self.add_term(l.clone(), r.clone(), v * c);
        }
    }

    pub fn to_json(&self) -> PairJson {
        PairJson {
            d: self.d,
            mult: self.mult,
            terms: self
                .terms
                .iter()
                .map(|((l, r), c)| PairTermJson {
                    coeff: rational::to_fraction_string(c),
                    left: l.index_lists(),
                    right: r.index_lists(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTermJson {
    pub coeff: String,
    pub left: Vec<Vec<u32>>,
    pub right: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub d: usize,
    #[serde(rename = "M")]
    pub mult: usize,
    pub terms: Vec<PairTermJson>,
}

/// The `(i, n−i)` part of `Δ(v_1 ⋯ v_n) = Σ_S v_S ⊗ v_{[n]∖S}` for one
/// monomial, with subsets giving equal multisets merged.
pub fn delta_monomial(m: &SymMonomial, i: usize) -> Vec<(SymMonomial, SymMonomial, u64)> {
    let groups: Vec<(usize, usize)> = {
        let f = m.factors();
        let mut g: Vec<(usize, usize)> = Vec::new();
        for (k, w) in f.iter().enumerate() {
            match g.last_mut() {
                Some((start, count)) if f[*start] == *w => *count += 1,
                _ => g.push((k, 1)),
            }
        }
        g
    };
    let mut out = Vec::new();
    let mut pick = vec![0usize; groups.len()];
    fn rec(
        m: &SymMonomial,
        groups: &[(usize, usize)],
        pick: &mut Vec<usize>,
        at: usize,
        left: usize,
        out: &mut Vec<(SymMonomial, SymMonomial, u64)>,
    ) {
        if at == groups.len() {
            if left != 0 {
                return;
            }
            let f = m.factors();
            let (mut l, mut r, mut weight) = (Vec::new(), Vec::new(), 1u64);
            for (&(start, count), &k) in groups.iter().zip(pick.iter()) {
                l.extend(std::iter::repeat(f[start].clone()).take(k));
                r.extend(std::iter::repeat(f[start].clone()).take(count - k));
                weight *= binom_u64(count, k);
            }
            out.push((
                SymMonomial::from_parts(m.d(), m.mult(), l),
                SymMonomial::from_parts(m.d(), m.mult(), r),
                weight,
            ));
            return;
        }
        let count = groups[at].1;
        for k in 0..=count.min(left) {
            pick[at] = k;
            rec(m, groups, pick, at + 1, left - k, out);
        }
    }
    if i <= m.n() {
        rec(m, &groups, &mut pick, 0, i, &mut out);
    }
    out
}

fn binom_u64(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
}

/// `Δ` on `P_Σ`.
pub fn delta_sym(f: &SymElement) -> SymPair {
    let b = f.bidegree();
    let mut out = SymPair::zero(b.d, b.mult);
    for (m, c) in f.terms() {
        for i in 0..=b.n {
            for (l, r, w) in delta_monomial(m, i) {
                out.add_term(l, r, c * rational::int(w as i64));
            }
        }
    }
    out
}

/// `Δ` on `P^Σ`, the algebra map for `·` that makes degree-one elements
/// primitive. On invariant tensors this is deconcatenation
/// `Σ_j (t_1 ⊗ ⋯ ⊗ t_j) ⊗ (t_{j+1} ⊗ ⋯ ⊗ t_n)`.
pub fn delta_inv(f: &Element) -> Result<TensorPair> {
    if !is_invariant(f) {
        return Err(Error::NotInvariant);
    }
    let b = f.bidegree();
    let mut out = TensorPair::zero(b.d, b.mult);
    for (m, c) in f.terms() {
        for j in 0..=b.n {
            let (l, r) = m.factors().split_at(j);
            out.add_term(
                TensorMonomial::from_parts(b.d, b.mult, l.to_vec()),
                TensorMonomial::from_parts(b.d, b.mult, r.to_vec()),
                c.clone(),
            );
        }
    }
    Ok(out)
}

/// `𝔊 ⊗ 𝔊`.
pub fn symmetrize_pair(p: &SymPair) -> TensorPair {
    let mut out = TensorPair::zero(p.d, p.mult);
    for ((l, r), c) in p.terms() {
        let gl = symmetrize(&SymElement::from_monomial(l.clone(), Rational::one()));
        let gr = symmetrize(&SymElement::from_monomial(r.clone(), Rational::one()));
        out.add_tensor(&gl, &gr, c);
    }
    out
}

fn pair_product<K: Monomial>(
    a: &Pair<K>,
    b: &Pair<K>,
    d: usize,
    mult: usize,
    op: impl Fn(&K, &K) -> Result<Option<Combination<K>>>,
) -> Result<Pair<K>> {
    let mut out = Pair::zero(d, mult);
    for ((al, ar), ca) in a.terms() {
        for ((bl, br), cb) in b.terms() {
            let (Some(l), Some(r)) = (op(al, bl)?, op(ar, br)?) else {
                continue;
            };
            out.add_tensor(&l, &r, &(ca * cb));
        }
    }
    Ok(out)
}

/// Componentwise `·` on `P_Σ ⊗ P_Σ`.
pub fn pair_sym_shuffle(a: &SymPair, b: &SymPair) -> Result<SymPair> {
    pair_product(a, b, a.d, a.mult, |u, v| {
        Ok(Some(SymElement::from_monomial(products::sym_monomial_product(u, v), Rational::one())))
    })
}

/// Componentwise `∗_g` on `P_Σ ⊗ P_Σ`; components of different lengths
/// multiply to zero.
pub fn pair_sym_star(a: &SymPair, b: &SymPair, g: &IncFn) -> Result<SymPair> {
    pair_product(a, b, a.d + b.d, a.mult, |u, v| {
        if u.n() != v.n() {
            return Ok(None);
        }
        let one = Rational::one();
        products::sym_star(
            &SymElement::from_monomial(u.clone(), one.clone()),
            &SymElement::from_monomial(v.clone(), one),
            g,
        )
        .map(Some)
    })
}

/// Componentwise `·` (sum over splits) on `P^Σ ⊗ P^Σ`.
pub fn pair_inv_shuffle(a: &TensorPair, b: &TensorPair) -> Result<TensorPair> {
    pair_product(a, b, a.d, a.mult, |u, v| {
        let one = Rational::one();
        products::shuffle_sum(
            &Element::from_monomial(u.clone(), one.clone()),
            &Element::from_monomial(v.clone(), one),
        )
        .map(Some)
    })
}

/// Componentwise `∗_g` on `P^Σ ⊗ P^Σ`.
pub fn pair_inv_star(a: &TensorPair, b: &TensorPair, g: &IncFn) -> Result<TensorPair> {
    pair_product(a, b, a.d + b.d, a.mult, |u, v| {
        if u.n() != v.n() {
            return Ok(None);
        }
        let out = Bidegree::new(u.d() + v.d(), u.n(), u.mult());
        let mut acc = Element::zero(out);
        if let Some((s, m)) = products::star_monomials(u, v, g)? {
            acc.add_term(m, rational::int(s as i64));
        }
        Ok(Some(acc))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn tm(d: usize, mult: usize, l: &[&[u32]]) -> TensorMonomial {
        TensorMonomial::from_lists(d, mult, &l.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn sm(d: usize, mult: usize, l: &[&[u32]]) -> SymMonomial {
        SymMonomial::from_lists(d, mult, &l.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn pi_examples() {
        let f = Element::from_monomial(tm(1, 2, &[&[1], &[2]]), int(1));
        let expected = Element::from_terms(
            f.bidegree(),
            [(tm(1, 2, &[&[1], &[2]]), frac(1, 2)), (tm(1, 2, &[&[2], &[1]]), frac(1, 2))],
        )
        .unwrap();
        assert_eq!(pi(&f), expected);
        assert_eq!(pi(&expected), expected);
        let sq = Element::from_monomial(tm(1, 2, &[&[1], &[1]]), int(1));
        assert_eq!(pi(&sq), sq);
        assert_eq!(pi_prime(&f), expected.scale(&int(2)));
    }

    #[test]
    fn symmetrize_examples() {
        let x = SymElement::from_monomial(sm(2, 2, &[&[1, 2], &[3, 4]]), int(1));
        let gx = symmetrize(&x);
        let expected = Element::from_terms(
            gx.bidegree(),
            [(tm(2, 2, &[&[1, 2], &[3, 4]]), frac(1, 2)), (tm(2, 2, &[&[3, 4], &[1, 2]]), frac(1, 2))],
        )
        .unwrap();
        assert_eq!(gx, expected);
        assert_eq!(desymmetrize(&gx).unwrap(), x);

        let sq = SymElement::from_monomial(sm(2, 2, &[&[1, 2], &[1, 2]]), int(1));
        assert_eq!(symmetrize(&sq), Element::from_monomial(tm(2, 2, &[&[1, 2], &[1, 2]]), int(1)));

        let one = SymElement::from_monomial(sm(2, 2, &[&[1, 3]]), int(3));
        assert_eq!(symmetrize(&one), Element::from_monomial(tm(2, 2, &[&[1, 3]]), int(3)));

        let v11 = Element::from_monomial(tm(1, 2, &[&[1], &[1]]), int(1));
        assert_eq!(desymmetrize(&v11).unwrap(), SymElement::from_monomial(sm(1, 2, &[&[1], &[1]]), int(1)));
        let v12 = Element::from_monomial(tm(1, 2, &[&[1], &[2]]), int(1));
        assert!(matches!(desymmetrize(&v12), Err(Error::NotInvariant)));
    }

    #[test]
    fn delta_examples() {
        let x12 = sm(2, 2, &[&[1, 2]]);
        let unit = SymMonomial::unit(2, 2);
        let d = delta_sym(&SymElement::from_monomial(x12.clone(), int(1)));
        let mut expected = SymPair::zero(2, 2);
        expected.add_term(unit.clone(), x12.clone(), int(1));
        expected.add_term(x12.clone(), unit.clone(), int(1));
        assert_eq!(d, expected);

        let x34 = sm(2, 2, &[&[3, 4]]);
        let both = sm(2, 2, &[&[1, 2], &[3, 4]]);
        let d = delta_sym(&SymElement::from_monomial(both.clone(), int(1)));
        let mut expected = SymPair::zero(2, 2);
        expected.add_term(unit.clone(), both.clone(), int(1));
        expected.add_term(x12.clone(), x34.clone(), int(1));
        expected.add_term(x34.clone(), x12.clone(), int(1));
        expected.add_term(both.clone(), unit.clone(), int(1));
        assert_eq!(d, expected);

        let sq = sm(2, 2, &[&[1, 2], &[1, 2]]);
        let d = delta_sym(&SymElement::from_monomial(sq.clone(), int(1)));
        let mut expected = SymPair::zero(2, 2);
        expected.add_term(unit.clone(), sq.clone(), int(1));
        expected.add_term(x12.clone(), x12.clone(), int(2));
        expected.add_term(sq.clone(), unit.clone(), int(1));
        assert_eq!(d, expected);
    }

    #[test]
    fn delta_inv_primitive_in_degree_one() {
        let v = Element::from_monomial(tm(1, 3, &[&[2]]), int(1));
        let d = delta_inv(&v).unwrap();
        let mut expected = TensorPair::zero(1, 3);
        expected.add_term(TensorMonomial::unit(1, 3), tm(1, 3, &[&[2]]), int(1));
        expected.add_term(tm(1, 3, &[&[2]]), TensorMonomial::unit(1, 3), int(1));
        assert_eq!(d, expected);
    }

    #[test]
    fn pair_json_shape() {
        let d = delta_sym(&SymElement::from_monomial(sm(2, 2, &[&[1, 2]]), int(1)));
        let j = serde_json::to_value(d.to_json()).unwrap();
        assert_eq!(j["M"], 2);
        assert_eq!(j["terms"].as_array().unwrap().len(), 2);
        assert_eq!(j["terms"][0]["coeff"], "1/1");
    }
}
