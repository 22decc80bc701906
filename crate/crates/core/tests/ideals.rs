use std::fs;
use std::sync::Arc;

use psa_core::element::{Bidegree, SymElement};
use psa_core::enumerate;
use psa_core::ideals::{ComponentStore, DiIdeal, Ideal, Subspace};
use psa_core::join::{join_component, secant_ideal, Join};
use psa_core::plucker::{basic_plucker, pfaffian, weyman_quadrics, PluckerIdeal};
use psa_core::products::{sym_shuffle, sym_star};
use psa_core::rational::int;
use psa_core::verify::random_sym_element;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gr26() -> Arc<dyn Ideal> {
    Arc::new(DiIdeal::new(3, weyman_quadrics(2, 6).unwrap()).unwrap())
}

#[test]
fn plucker_components_have_expected_dimensions() {
    let p = PluckerIdeal::new(2);
    // Sym^n of the 6 coordinates of Gr(2,4) minus the Hilbert function of Gr(2,4).
    assert_eq!(p.component(2, 2).unwrap().dim(), 1);
    assert_eq!(p.component(2, 3).unwrap().dim(), 6);
    assert_eq!(p.component(1, 3).unwrap().dim(), 0);
    assert_eq!(p.quotient_basis(2, 2).unwrap().len(), 20);
    assert!(p.contains(&basic_plucker(1).unwrap()).unwrap());
}

#[test]
fn membership_rejects_foreign_bidegree() {
    let p = PluckerIdeal::new(3);
    assert!(p.contains(&basic_plucker(1).unwrap()).is_err());
}

#[test]
fn joins_are_commutative_and_bounded() {
    let i = gr26();
    let z: Arc<dyn Ideal> = Arc::new(DiIdeal::new(3, vec![pfaffian(&[1, 2, 3, 4, 5, 6], 6).unwrap()]).unwrap());
    let ij = join_component(i.as_ref(), z.as_ref(), 2, 3).unwrap();
    let ji = join_component(z.as_ref(), i.as_ref(), 2, 3).unwrap();
    assert_eq!(ij, ji);
    let both = [i.component(2, 3).unwrap(), z.component(2, 3).unwrap()];
    assert!(ij.basis().iter().all(|v| both.iter().all(|s| s.contains(v).unwrap())));
}

#[test]
fn zero_join_zero_is_zero() {
    let z: Arc<dyn Ideal> = Arc::new(DiIdeal::new(2, vec![]).unwrap());
    for (d, n) in [(1, 1), (2, 2), (2, 3)] {
        assert!(join_component(z.as_ref(), z.as_ref(), d, n).unwrap().is_zero());
    }
}

#[test]
fn secant_of_gr26() {
    let sec = secant_ideal(gr26(), 1, None).unwrap();
    assert_eq!(sec.component(2, 2).unwrap().dim(), 0);
    let c3 = sec.component(2, 3).unwrap();
    assert_eq!(c3.dim(), 1);
    assert!(c3.contains(&pfaffian(&[1, 2, 3, 4, 5, 6], 6).unwrap()).unwrap());
    // r = 0 is the ideal itself.
    let same = secant_ideal(gr26(), 0, None).unwrap();
    assert_eq!(same.component(2, 2).unwrap().dim(), 15);
}

#[test]
fn secant_components_are_closed_under_products() {
    let sec = secant_ideal(gr26(), 1, None).unwrap();
    let c3 = sec.component(2, 3).unwrap();
    let c4 = sec.component(2, 4).unwrap();
    assert_eq!(c4.dim(), 15);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let h = random_sym_element(&mut rng, Bidegree::new(2, 1, 3), 3);
        let prod = sym_shuffle(&c3.basis()[0], &h).unwrap();
        assert!(c4.contains(&prod).unwrap());
    }
    // ∗ with a width-0 unit lifts nothing.
    let unit = SymElement::from_monomial(enumerate::sym_monomials(Bidegree::new(0, 3, 3))[0].clone(), int(1));
    let g = psa_core::IncFn::identity(6);
    assert!(c3.contains(&sym_star(&c3.basis()[0], &unit, &g).unwrap()).unwrap());
}

#[test]
fn subspaces_are_canonical() {
    let b = Bidegree::new(2, 2, 3);
    let quadrics = weyman_quadrics(2, 6).unwrap();
    let a = Subspace::from_spanning(b, quadrics.clone()).unwrap();
    let mut shuffled = quadrics;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for k in (1..shuffled.len()).rev() {
        shuffled.swap(k, rng.gen_range(0..=k));
    }
    let scaled: Vec<SymElement> = shuffled.iter().map(|f| f.scale(&int(-3))).collect();
    assert_eq!(Subspace::from_spanning(b, scaled).unwrap(), a);
    assert_eq!(a.dim(), 15);
    assert_eq!(a.standard_monomials().len() + a.dim(), enumerate::sym_monomials(b).len());
    let f = &a.basis()[3];
    assert!(a.contains(f).unwrap());
    assert!(!a.contains(&SymElement::from_monomial(enumerate::sym_monomials(b)[0].clone(), int(1))).unwrap());
}

#[test]
fn cache_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(ComponentStore::new(dir.path()).unwrap());
    let fresh = DiIdeal::new(3, weyman_quadrics(2, 6).unwrap()).unwrap().with_store(store.clone());
    let c = fresh.component(2, 3).unwrap();
    let path = store.path_for(&fresh.fingerprint(), Bidegree::new(2, 3, 3));
    assert!(path.exists());

    let again = DiIdeal::new(3, weyman_quadrics(2, 6).unwrap()).unwrap().with_store(store.clone());
    assert_eq!(*again.component(2, 3).unwrap(), *c);
    assert_eq!(store.regenerated(), 0);

    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("\"1/1\"", "\"2/1\"", 1)).unwrap();
    let tampered = DiIdeal::new(3, weyman_quadrics(2, 6).unwrap()).unwrap().with_store(store.clone());
    assert_eq!(*tampered.component(2, 3).unwrap(), *c);
    assert_eq!(store.regenerated(), 1);
    let repaired = store.load(&fresh.fingerprint(), Bidegree::new(2, 3, 3)).unwrap().unwrap();
    assert_eq!(repaired, *c);

    fs::write(&path, "not json").unwrap();
    assert!(store.load(&fresh.fingerprint(), Bidegree::new(2, 3, 3)).is_err());
}

#[test]
fn join_store_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(ComponentStore::new(dir.path()).unwrap());
    let j = Join::new(gr26(), gr26()).unwrap().with_store(store.clone());
    assert_eq!(j.component(2, 3).unwrap().dim(), 1);
    assert!(store.path_for(&j.fingerprint(), Bidegree::new(2, 3, 3)).exists());
}
