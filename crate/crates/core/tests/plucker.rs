use psa_core::ideals::Subspace;
use psa_core::plucker::{
    basic_plucker, evaluate, evaluation_kernel, gamma, pfaffian, plucker_coordinates, random_secant_point,
    weyman_quadrics, GrassmannConfig,
};
use psa_core::probe::{degree_probe, ProbeLimits};
use psa_core::rational::{int, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(cfg: &GrassmannConfig, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    random_secant_point(cfg, rng).into_iter().map(Rational::from_integer).collect()
}

#[test]
fn quadrics_vanish_on_the_grassmannian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, n) in [(2, 4), (2, 6), (3, 6)] {
        let cfg = GrassmannConfig::new(d, n, 0).unwrap();
        let quadrics = weyman_quadrics(d, n).unwrap();
        assert!(!quadrics.is_empty());
        for _ in 0..20 {
            let p = point(&cfg, &mut rng);
            assert!(quadrics.iter().all(|f| evaluate(f, &p).unwrap() == int(0)));
        }
    }
}

#[test]
fn quadrics_do_not_vanish_on_secants() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cfg = GrassmannConfig::new(2, 4, 1).unwrap();
    let p = point(&cfg, &mut rng);
    assert_ne!(evaluate(&basic_plucker(1).unwrap(), &p).unwrap(), int(0));
}

#[test]
fn pfaffian_vanishes_on_first_secant_of_gr26() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cfg = GrassmannConfig::new(2, 6, 1).unwrap();
    let pf = pfaffian(&[1, 2, 3, 4, 5, 6], 6).unwrap();
    for _ in 0..20 {
        assert_eq!(evaluate(&pf, &point(&cfg, &mut rng)).unwrap(), int(0));
    }
    let cfg2 = GrassmannConfig::new(2, 6, 2).unwrap();
    assert_ne!(evaluate(&pf, &point(&cfg2, &mut rng)).unwrap(), int(0));
}

#[test]
fn minors_of_a_coordinate_plane() {
    let p = plucker_coordinates(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
    assert_eq!(p.len(), 6);
    assert_eq!(p[0], 1.into());
    assert!(p[1..].iter().all(|v| *v == 0.into()));
    assert!(plucker_coordinates(&[vec![1, 0], vec![0]]).is_err());
}

#[test]
fn evaluation_kernel_examples() {
    let k = evaluation_kernel(&GrassmannConfig::new(2, 4, 0).unwrap(), 2, None, 0).unwrap();
    assert_eq!(k.subspace.dim(), 1);
    assert_eq!(k.subspace, Subspace::from_spanning(k.subspace.bidegree(), vec![basic_plucker(1).unwrap()]).unwrap());
    let linear = evaluation_kernel(&GrassmannConfig::new(1, 3, 0).unwrap(), 2, None, 0).unwrap();
    assert_eq!(linear.subspace.dim(), 0);
    let sec = evaluation_kernel(&GrassmannConfig::new(2, 6, 1).unwrap(), 2, None, 0).unwrap();
    assert_eq!(sec.subspace.dim(), 0);
}

#[test]
fn evaluation_kernel_is_reproducible() {
    let cfg = GrassmannConfig::new(2, 6, 0).unwrap();
    let a = evaluation_kernel(&cfg, 2, Some(3), 5).unwrap();
    let b = evaluation_kernel(&cfg, 2, Some(3), 5).unwrap();
    assert_eq!(a.subspace, b.subspace);
    assert_eq!(a.points, b.points);
    assert_eq!(a.subspace.dim(), 15);
}

#[test]
fn config_validation() {
    assert!(GrassmannConfig::new(2, 5, 0).is_err());
    let c = GrassmannConfig::with_mult(2, 1, None).unwrap();
    assert_eq!((c.mult, c.ambient), (3, 6));
}

#[test]
fn gamma_values_are_even() {
    for n in 1..=10 {
        let g = gamma(n);
        assert!(g.is_integer());
        assert_eq!(g.numer() % 2, 0.into());
    }
}

#[test]
fn probe_in_degree_one_finds_nothing() {
    let cfg = GrassmannConfig::with_mult(2, 0, None).unwrap();
    let r = degree_probe(&cfg, 1, None, &ProbeLimits::default()).unwrap();
    assert!(r.complete);
    assert!(r.rows.iter().all(|row| row.new_generators == 0 && row.dim == 0));
    assert_eq!(r.flagged_degree, None);
}

#[test]
fn probe_time_limit_marks_report_incomplete() {
    let cfg = GrassmannConfig::with_mult(2, 1, None).unwrap();
    let limits = ProbeLimits { time: Some(std::time::Duration::ZERO), max_coeff_bits: None };
    let r = degree_probe(&cfg, 3, None, &limits).unwrap();
    assert!(!r.complete);
    assert!(r.stopped.is_some());
}
