use std::collections::BTreeMap;

use proptest::prelude::*;
use psa_core::element::{Bidegree, Element, Monomial, SymElement, SymMonomial};
use psa_core::enumerate;
use psa_core::products::{self, invariant_shuffle, shuffle_product, star_product, sym_shuffle, sym_star};
use psa_core::rational::{binomial, int, Rational};
use psa_core::symmetry::{self, delta_monomial, delta_sym, desymmetrize, pi, symmetrize, SymPair};
use psa_core::verify::{random_element, random_sym_element};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Triple = BTreeMap<(SymMonomial, SymMonomial, SymMonomial), Rational>;

fn add(t: &mut Triple, key: (SymMonomial, SymMonomial, SymMonomial), c: Rational) {
    let e = t.entry(key).or_default();
    *e += c;
}

fn left_then_split(p: &SymPair) -> Triple {
    let mut out = Triple::new();
    for ((l, r), c) in p.terms() {
        for i in 0..=l.n() {
            for (a, b, w) in delta_monomial(l, i) {
                add(&mut out, (a, b, r.clone()), c * int(w as i64));
            }
        }
    }
    out.retain(|_, v| *v != int(0));
    out
}

fn right_then_split(p: &SymPair) -> Triple {
    let mut out = Triple::new();
    for ((l, r), c) in p.terms() {
        for i in 0..=r.n() {
            for (a, b, w) in delta_monomial(r, i) {
                add(&mut out, (l.clone(), a, b), c * int(w as i64));
            }
        }
    }
    out.retain(|_, v| *v != int(0));
    out
}

fn shape(rng: &mut ChaCha8Rng) -> (usize, usize) {
    (rng.gen_range(1..=2), rng.gen_range(1..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delta_is_coassociative_and_cocommutative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let n = rng.gen_range(0..=4);
        let f = random_sym_element(&mut rng, Bidegree::new(d, n, mult), 3);
        let p = delta_sym(&f);
        prop_assert_eq!(left_then_split(&p), right_then_split(&p));
        let mut swapped = SymPair::zero(d, mult);
        for ((l, r), c) in p.terms() {
            swapped.add_term(r.clone(), l.clone(), c.clone());
        }
        prop_assert_eq!(swapped, p);
    }

    #[test]
    fn delta_counit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let n = rng.gen_range(0..=4);
        let f = random_sym_element(&mut rng, Bidegree::new(d, n, mult), 3);
        let mut left = SymElement::zero(f.bidegree());
        for ((l, r), c) in delta_sym(&f).terms() {
            if l.n() == 0 {
                left.add_term(r.clone(), c.clone());
            }
        }
        prop_assert_eq!(left, f);
    }

    #[test]
    fn projection_commutes_with_star(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let e = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let f = pi(&random_element(&mut rng, Bidegree::new(d, n, mult), 3));
        let h = random_element(&mut rng, Bidegree::new(e, n, mult), 3);
        let gs = enumerate::inc_fns(mult * d, mult * (d + e));
        let g = &gs[rng.gen_range(0..gs.len())];
        prop_assert_eq!(pi(&star_product(&f, &h, g).unwrap()), star_product(&f, &pi(&h), g).unwrap());
    }

    #[test]
    fn projection_of_shuffles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let n = rng.gen_range(0..=2);
        let m = rng.gen_range(0..=2);
        let f = random_element(&mut rng, Bidegree::new(d, n, mult), 3);
        let h = random_element(&mut rng, Bidegree::new(d, m, mult), 3);
        let rhs = invariant_shuffle(&pi(&f), &pi(&h)).unwrap();
        for sigma in enumerate::splits(n + m, n) {
            let lhs = pi(&shuffle_product(&f, &h, &sigma).unwrap()).scale(&Rational::from_integer(binomial(n + m, n)));
            prop_assert_eq!(&lhs, &rhs);
        }
    }

    #[test]
    fn desymmetrize_inverts_symmetrize(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let n = rng.gen_range(0..=3);
        let f = random_sym_element(&mut rng, Bidegree::new(d, n, mult), 4);
        let g = symmetrize(&f);
        prop_assert!(symmetry::is_invariant(&g));
        prop_assert_eq!(desymmetrize(&g).unwrap(), f);
    }

    #[test]
    fn sym_star_matches_definition(seed in any::<u64>()) {
        // f ∗_g h = 𝔊⁻¹(𝔊(f) ∗_g 𝔊(h))
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let e = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let f = random_sym_element(&mut rng, Bidegree::new(d, n, mult), 2);
        let h = random_sym_element(&mut rng, Bidegree::new(e, n, mult), 2);
        let gs = enumerate::inc_fns(mult * d, mult * (d + e));
        let g = &gs[rng.gen_range(0..gs.len())];
        let via = desymmetrize(&star_product(&symmetrize(&f), &symmetrize(&h), g).unwrap()).unwrap();
        prop_assert_eq!(sym_star(&f, &h, g).unwrap(), via);
    }

    #[test]
    fn sym_shuffle_is_commutative_and_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let a = random_sym_element(&mut rng, Bidegree::new(d, 1, mult), 2);
        let b = random_sym_element(&mut rng, Bidegree::new(d, 2, mult), 2);
        let c = random_sym_element(&mut rng, Bidegree::new(d, 1, mult), 2);
        prop_assert_eq!(sym_shuffle(&a, &b).unwrap(), sym_shuffle(&b, &a).unwrap());
        prop_assert_eq!(
            sym_shuffle(&sym_shuffle(&a, &b).unwrap(), &c).unwrap(),
            sym_shuffle(&a, &sym_shuffle(&b, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn modified_associativity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (df, mult) = shape(&mut rng);
        let da = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(0..=2);
        let f = random_element(&mut rng, Bidegree::new(df, n, mult), 2);
        let b = random_element(&mut rng, Bidegree::new(df, m, mult), 1);
        let a = random_element(&mut rng, Bidegree::new(da, n + m, mult), 1);
        let (bm, am) = (b.terms().next().unwrap().0.clone(), a.terms().next().unwrap().0.clone());
        let splits = enumerate::splits(n + m, n);
        let sigma = &splits[rng.gen_range(0..splits.len())];
        let gs = enumerate::inc_fns(mult * df, mult * (df + da));
        let g = &gs[rng.gen_range(0..gs.len())];
        let (p, h) = products::associativity_witness(&bm, &am, sigma, g).unwrap();
        let one = int(1);
        let lhs = star_product(&shuffle_product(&f, &Element::from_monomial(bm, one.clone()), sigma).unwrap(), &Element::from_monomial(am, one.clone()), g).unwrap();
        let rhs = shuffle_product(&star_product(&f, &Element::from_monomial(p, one), g).unwrap(), &h, sigma).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn deconcatenation_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, mult) = shape(&mut rng);
        let n = rng.gen_range(0..=2);
        let m = rng.gen_range(0..=2);
        let y = pi(&random_element(&mut rng, Bidegree::new(d, n, mult), 2));
        let v = pi(&random_element(&mut rng, Bidegree::new(d, m, mult), 2));
        let lhs = symmetry::delta_inv(&invariant_shuffle(&y, &v).unwrap()).unwrap();
        let rhs = symmetry::pair_inv_shuffle(&symmetry::delta_inv(&y).unwrap(), &symmetry::delta_inv(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn delta_examples() {
    let x = |l: &[&[u32]]| SymMonomial::from_lists(2, 2, &l.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap();
    let sq = SymElement::from_monomial(x(&[&[1, 2], &[1, 2]]), int(1));
    let p = delta_sym(&sq);
    assert_eq!(p.len(), 3);
    let mid: Vec<_> = p.terms().filter(|((l, _), _)| l.n() == 1).collect();
    assert_eq!(mid.len(), 1);
    assert_eq!(mid[0].1, &int(2));
    let two = SymElement::from_monomial(x(&[&[1, 2], &[3, 4]]), int(1));
    assert_eq!(delta_sym(&two).len(), 4);
}

#[test]
fn non_invariant_tensors_are_rejected() {
    let t = psa_core::TensorMonomial::from_lists(1, 2, &[vec![1], vec![2]]).unwrap();
    let v = Element::from_monomial(t, int(1));
    assert!(desymmetrize(&v).is_err());
    assert!(symmetry::delta_inv(&v).is_err());
    assert!(invariant_shuffle(&v, &v).is_err());
}
