//! Enumeration of monomial bases and increasing maps, always in a fixed order.

use itertools::Itertools;

use crate::element::{Bidegree, SymMonomial, TensorMonomial};
use crate::exterior::ExteriorMonomial;
use crate::products::IncFn;

/// All `k`-subsets of `[1..n]`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<u32>> {
    (1..=n as u32).combinations(k).collect()
}

/// Basis wedges of `∧^d k^alphabet`, lexicographic.
pub fn exterior_basis(d: usize, alphabet: usize) -> Vec<ExteriorMonomial> {
    subsets(alphabet, d)
        .into_iter()
        .map(|ix| ExteriorMonomial::from_sorted(alphabet, ix))
        .collect()
}

/// Monomials of `Sym^n(∧^d k^{Md})` in increasing monomial order.
pub fn sym_monomials(b: Bidegree) -> Vec<SymMonomial> {
    let basis = exterior_basis(b.d, b.alphabet());
    if b.n == 0 {
        return vec![SymMonomial::unit(b.d, b.mult)];
    }
    basis
        .into_iter()
        .combinations_with_replacement(b.n)
        .map(|f| SymMonomial::from_parts(b.d, b.mult, f))
        .collect()
}

/// Monomials of `(∧^d k^{Md})^{⊗n}` in increasing monomial order.
pub fn tensor_monomials(b: Bidegree) -> Vec<TensorMonomial> {
    let basis = exterior_basis(b.d, b.alphabet());
    if b.n == 0 {
        return vec![TensorMonomial::unit(b.d, b.mult)];
    }
    (0..b.n)
        .map(|_| basis.iter().cloned())
        .multi_cartesian_product()
        .map(|f| TensorMonomial::from_parts(b.d, b.mult, f))
        .collect()
}

/// Every increasing injection `[a] → [b]`.
pub fn inc_fns(a: usize, b: usize) -> Vec<IncFn> {
    subsets(b, a)
        .into_iter()
        .map(|image| IncFn::from_sorted(b, image))
        .collect()
}

/// All `k`-subsets of the positions `[1..n]` as splits.
pub fn splits(total: usize, left: usize) -> Vec<crate::products::Split> {
    subsets(total, left)
        .into_iter()
        .map(|l| crate::products::Split::new(total, l).expect("subsets are valid splits"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Monomial;

    #[test]
    fn counts() {
        assert_eq!(subsets(8, 4).len(), 70);
        assert_eq!(exterior_basis(2, 6).len(), 15);
        assert_eq!(sym_monomials(Bidegree::new(2, 2, 2)).len(), 21);
        assert_eq!(sym_monomials(Bidegree::new(2, 3, 3)).len(), 680);
        assert_eq!(tensor_monomials(Bidegree::new(1, 2, 3)).len(), 9);
        assert_eq!(inc_fns(4, 8).len(), 70);
        assert_eq!(sym_monomials(Bidegree::new(2, 0, 2)).len(), 1);
        assert_eq!(sym_monomials(Bidegree::new(0, 2, 2))[0].n(), 2);
    }

    #[test]
    fn sorted_output() {
        let s = sym_monomials(Bidegree::new(2, 2, 2));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        let t = tensor_monomials(Bidegree::new(1, 3, 2));
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }
}
