use itertools::Itertools;
use proptest::prelude::*;
use psa_core::element::{Bidegree, Monomial, TensorMonomial};
use psa_core::enumerate;
use psa_core::poset::{check_witness, decode_tree, encode_tree, minimal_elements, rl_leq, tree_leq};
use psa_core::products::star_monomials;

fn monomial(max_d: usize, max_n: usize) -> impl Strategy<Value = TensorMonomial> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        let basis = enumerate::exterior_basis(d, 2 * d);
        proptest::collection::vec(proptest::sample::select(basis), n)
            .prop_map(move |f| TensorMonomial::new(d, 2, f).unwrap())
    })
}

/// `t` lies in the monomial ideal generated by `s` under `∗` and `·`.
fn brute_force(s: &TensorMonomial, t: &TensorMonomial) -> bool {
    if t.d() < s.d() || t.n() < s.n() {
        return false;
    }
    let lifts = enumerate::tensor_monomials(Bidegree::new(t.d() - s.d(), s.n(), 2));
    let gs = enumerate::inc_fns(2 * s.d(), 2 * t.d());
    (0..t.n()).combinations(s.n()).any(|pos| {
        let sub = TensorMonomial::new(t.d(), 2, pos.iter().map(|&k| t.factor(k).clone()).collect()).unwrap();
        gs.iter().any(|g| {
            lifts
                .iter()
                .any(|a| matches!(star_monomials(s, a, g).unwrap(), Some((_, m)) if m == sub))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_brute_force(s in monomial(2, 2), t in monomial(3, 3)) {
        let w = rl_leq(&s, &t).unwrap();
        prop_assert_eq!(w.is_some(), brute_force(&s, &t));
        if let Some(w) = w {
            prop_assert!(check_witness(&s, &t, &w));
        }
    }

    #[test]
    fn partial_order(a in monomial(2, 3), b in monomial(2, 3), c in monomial(3, 3)) {
        prop_assert!(rl_leq(&a, &a).unwrap().is_some());
        if rl_leq(&a, &b).unwrap().is_some() && rl_leq(&b, &a).unwrap().is_some() {
            prop_assert_eq!(&a, &b);
        }
        if rl_leq(&a, &b).unwrap().is_some() && rl_leq(&b, &c).unwrap().is_some() {
            prop_assert!(rl_leq(&a, &c).unwrap().is_some());
        }
    }

    #[test]
    fn trees_round_trip(s in monomial(3, 3)) {
        let t = encode_tree(&s);
        prop_assert_eq!(t.branches.len(), s.n());
        prop_assert!(t.branches.iter().all(|b| b.len() == 2 * s.d()));
        prop_assert_eq!(decode_tree(&t).unwrap(), s);
        prop_assert!(tree_leq(&t, &t));
    }

    #[test]
    fn minimal_elements_form_an_antichain(set in proptest::collection::vec(monomial(2, 2), 1..8)) {
        let min = minimal_elements(&set).unwrap();
        for (a, b) in min.iter().tuple_combinations() {
            prop_assert!(rl_leq(a, b).unwrap().is_none() && rl_leq(b, a).unwrap().is_none());
        }
        for s in &set {
            prop_assert!(min.iter().any(|m| rl_leq(m, s).unwrap().is_some()));
        }
    }
}

#[test]
fn tree_json_round_trip() {
    let s = TensorMonomial::from_lists(2, 2, &[vec![1, 2], vec![2, 3], vec![1, 4]]).unwrap();
    let t = encode_tree(&s);
    let text = serde_json::to_string(&t).unwrap();
    assert!(text.contains("\"M\":2"));
    let back: psa_core::poset::LabeledTree = serde_json::from_str(&text).unwrap();
    assert_eq!(back, t);
}
