//! The verification suite: each check recomputes one worked result or
//! property from scratch and compares exactly.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::element::{Bidegree, Element, Monomial, SymElement, SymMonomial, TensorMonomial};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::ideals::{ComponentStore, Ideal, Subspace};
use crate::join::secant_ideal;
use crate::plucker::{self, GrassmannConfig};
use crate::poset::{self, LabeledTree, TreeVertex};
use crate::probe::{degree_probe, ProbeLimits};
use crate::products::{self, IncFn, Split};
use crate::rational::{self, to_fraction_string, Rational};
use crate::symmetry::{self, TensorPair};

/// Check names in suite order; check `k` is the `k`-th entry.
pub const CHECKS: [&str; 10] =
    ["fonesum", "census", "gamma", "tree", "poset", "hopf", "plucker2", "secant26", "closure", "probe"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub store: Option<Arc<ComponentStore>>,
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    CHECKS.iter().map(|name| run_check(name, opts)).collect()
}

pub fn run_check(name: &str, opts: &VerifyOptions) -> Result<CheckResult> {
    let id = CHECKS
        .iter()
        .position(|c| *c == name)
        .ok_or_else(|| Error::Config(format!("unknown check {name:?}; known: {}", CHECKS.join(", "))))?;
    let start = Instant::now();
    let (passed, summary, details) = match id {
        0 => check_fonesum()?,
        1 => check_census()?,
        2 => check_gamma(),
        3 => check_tree()?,
        4 => check_poset()?,
        5 => check_hopf(opts.seed)?,
        6 => check_plucker2(opts)?,
        7 => check_secant26(opts)?,
        8 => check_closure(opts.seed)?,
        _ => check_probe(opts)?,
    };
    Ok(CheckResult { id: id + 1, name: CHECKS[id], passed, summary, details, elapsed: start.elapsed() })
}

type Outcome = (bool, String, Value);

fn multiple(a: &SymElement, b: &SymElement) -> Value {
    match plucker::proportionality(a, b) {
        Some(c) => json!(to_fraction_string(&c)),
        None => Value::Null,
    }
}

fn check_fonesum() -> Result<Outcome> {
    let s = plucker::fonesum()?;
    let nine = s.f2.scale(&rational::int(9));
    let signed_ok = s.signed == nine;
    let unsigned_ok = s.unsigned == nine;
    let signed_multiple = multiple(&s.signed, &s.f2);
    let unsigned_multiple = multiple(&s.unsigned, &s.f2);
    let summary = format!(
        "signed sum = {} x f2, unsigned sum {}; expected 9 x f2",
        signed_multiple.as_str().unwrap_or("not a multiple of"),
        match unsigned_multiple.as_str() {
            Some(c) => format!("= {c} x f2"),
            None => format!("is not a multiple of f2 ({} terms)", s.unsigned.len()),
        }
    );
    let details = json!({
        "maps": plucker::fonesum_maps().len(),
        "cosets": plucker::fonesum_cosets().len(),
        "signed_equals_9f2": signed_ok,
        "unsigned_equals_9f2": unsigned_ok,
        "signed_multiple_of_f2": signed_multiple,
        "unsigned_multiple_of_f2": unsigned_multiple,
        "signed_terms": s.signed.len(),
        "unsigned_terms": s.unsigned.len(),
        "f2_terms": s.f2.len(),
    });
    Ok((signed_ok || unsigned_ok, summary, details))
}

fn check_census() -> Result<Outcome> {
    let beta = SymMonomial::from_lists(4, 2, &[vec![1, 4, 5, 7], vec![2, 3, 6, 8]])?;
    let paired = plucker::census(&beta, true)?;
    let symmetrized = plucker::census(&beta, false)?;
    let counts: Vec<usize> = paired.iter().map(|(_, c)| *c).collect();
    let expected = [2, 11, 5];
    let passed = counts == expected;
    let labels: Vec<String> = paired.iter().map(|(t, _)| t.to_string()).collect();
    let summary = format!(
        "{} = {}, expected 2+11+5 = 18",
        counts.iter().join("+"),
        counts.iter().sum::<usize>()
    );
    let details = json!({
        "target": beta.to_string(),
        "terms": labels,
        "paired_counts": counts,
        "symmetrized_counts": symmetrized.iter().map(|(_, c)| *c).collect::<Vec<_>>(),
    });
    Ok((passed, summary, details))
}

fn check_gamma() -> Outcome {
    let values: Vec<Rational> = (1..=10).map(plucker::gamma).collect();
    let even = values.iter().all(|v| v.is_integer() && (v.numer() % 2u32).is_zero());
    let first = values[0] == rational::int(18);
    let summary = format!("gamma(1) = {}, gamma(1..10) even integers: {even}", to_fraction_string(&values[0]));
    let details = json!({ "values": values.iter().map(to_fraction_string).collect::<Vec<_>>() });
    (even && first, summary, details)
}

/// The trees as drawn: every branch repeats the same labels with its own `j`.
fn displayed_tree(d: usize, n: usize, labels: &[(u32, [u32; 3])]) -> LabeledTree {
    let branches = (1..=n as u32)
        .map(|j| labels.iter().map(|(k, psi)| TreeVertex { k: *k, j, psi: psi.to_vec() }).collect())
        .collect();
    LabeledTree { d, mult: 2, root: TreeVertex { k: 0, j: 0, psi: vec![4, 4, 4] }, branches }
}

fn check_tree() -> Result<Outcome> {
    let s1 = TensorMonomial::from_lists(2, 2, &[vec![1, 2], vec![2, 3], vec![1, 4]])?;
    let s2 = TensorMonomial::from_lists(3, 2, &[vec![1, 2, 3], vec![1, 3, 4], vec![2, 5, 6]])?;
    let t1 = displayed_tree(2, 3, &[(1, [1, 0, 3]), (2, [1, 2, 0]), (3, [0, 2, 0]), (4, [0, 0, 3])]);
    let t2 = displayed_tree(
        3,
        3,
        &[(1, [1, 2, 0]), (2, [1, 0, 3]), (3, [1, 2, 0]), (4, [0, 2, 0]), (5, [0, 0, 3]), (6, [0, 0, 3])],
    );
    let enc1 = poset::encode_tree(&s1) == t1;
    let enc2 = poset::encode_tree(&s2) == t2;
    let dec = poset::decode_tree(&t1)? == s1 && poset::decode_tree(&t2)? == s2;
    let leq = poset::tree_leq(&t1, &t2);
    let witness = poset::rl_leq(&s1, &s2)?;
    let witness_ok = witness.as_ref().is_some_and(|w| poset::check_witness(&s1, &s2, w));
    let passed = enc1 && enc2 && dec && leq && witness_ok;
    let summary = format!(
        "encodings match: {enc1}/{enc2}, tree_leq: {leq}, witness g = {}",
        witness.as_ref().map_or("none".to_string(), |w| format!("{:?}", w.g))
    );
    let details = json!({ "decode_roundtrip": dec, "witness": witness, "witness_valid": witness_ok });
    Ok((passed, summary, details))
}

/// Every `S ∗_g a` with `a` of width `e − d`, as tensor monomials.
fn starred_monomials(s: &TensorMonomial, e: usize) -> Result<HashSet<TensorMonomial>> {
    let (d, n, mult) = (s.d(), s.n(), s.mult());
    let mut out = HashSet::new();
    for g in enumerate::inc_fns(mult * d, mult * e) {
        for a in enumerate::tensor_monomials(Bidegree::new(e - d, n, mult)) {
            if let Some((_, m)) = products::star_monomials(s, &a, &g)? {
                out.insert(m);
            }
        }
    }
    Ok(out)
}

/// Brute-force membership of `t` in the monomial di-ideal generated by the
/// products in `starred`: some ordered choice of `n` slots of `t` is one of them.
fn oracle_member(starred: &HashSet<TensorMonomial>, n: usize, t: &TensorMonomial) -> bool {
    (0..t.n()).combinations(n).any(|pos| {
        let factors = pos.iter().map(|&k| t.factor(k).clone()).collect();
        starred.contains(&TensorMonomial::from_parts(t.d(), t.mult(), factors))
    })
}

fn check_poset() -> Result<Outcome> {
    let mult = 2;
    let mut sources = Vec::new();
    for d in 1..=2 {
        for n in 1..=2 {
            sources.extend(enumerate::tensor_monomials(Bidegree::new(d, n, mult)));
        }
    }
    let mut targets = Vec::new();
    for e in 1..=3 {
        for m in 1..=3 {
            targets.extend(enumerate::tensor_monomials(Bidegree::new(e, m, mult)));
        }
    }
    let results: Vec<(usize, usize, Vec<String>)> = sources
        .par_iter()
        .map(|s| -> Result<(usize, usize, Vec<String>)> {
            let mut starred = Vec::new();
            for e in 0..=3 {
                starred.push(if e >= s.d() { starred_monomials(s, e)? } else { HashSet::new() });
            }
            let (mut pairs, mut members, mut mismatches) = (0, 0, Vec::new());
            for t in &targets {
                let fast = poset::rl_leq(s, t)?;
                let slow = t.d() >= s.d() && t.n() >= s.n() && oracle_member(&starred[t.d()], s.n(), t);
                if let Some(w) = &fast {
                    if !poset::check_witness(s, t, w) {
                        mismatches.push(format!("{s} <= {t}: invalid witness"));
                    }
                }
                if fast.is_some() != slow {
                    mismatches.push(format!("{s} vs {t}: rl_leq {} oracle {slow}", fast.is_some()));
                }
                pairs += 1;
                members += usize::from(slow);
            }
            Ok((pairs, members, mismatches))
        })
        .collect::<Result<_>>()?;
    let pairs: usize = results.iter().map(|r| r.0).sum();
    let members: usize = results.iter().map(|r| r.1).sum();
    let mismatches: Vec<String> = results.into_iter().flat_map(|r| r.2).collect();
    let summary = format!("{pairs} pairs, {members} comparable, {} disagreements", mismatches.len());
    let details = json!({
        "sources": sources.len(),
        "targets": targets.len(),
        "pairs": pairs,
        "comparable": members,
        "disagreements": mismatches.iter().take(20).collect::<Vec<_>>(),
    });
    Ok((mismatches.is_empty(), summary, details))
}

fn random_coeff(rng: &mut impl Rng) -> Rational {
    let v = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rational::int(v)
}

fn random_tensor_monomial(rng: &mut impl Rng, b: Bidegree) -> TensorMonomial {
    let basis = enumerate::exterior_basis(b.d, b.alphabet());
    let factors = (0..b.n).map(|_| basis.choose(rng).expect("nonempty basis").clone()).collect();
    TensorMonomial::from_parts(b.d, b.mult, factors)
}

/// A nonzero element with at most `terms` terms and small integer coefficients.
pub fn random_element(rng: &mut impl Rng, b: Bidegree, terms: usize) -> Element {
    loop {
        let mut f = Element::zero(b);
        for _ in 0..terms.max(1) {
            let m = random_tensor_monomial(rng, b);
            f.add_term(m, random_coeff(rng));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_sym_element(rng: &mut impl Rng, b: Bidegree, terms: usize) -> SymElement {
    loop {
        let f = symmetry::coinvariant_class(&random_element(rng, b, terms));
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_inc_fn(rng: &mut impl Rng, a: usize, b: usize) -> IncFn {
    enumerate::inc_fns(a, b).choose(rng).expect("a ≤ b").clone()
}

fn random_split(rng: &mut impl Rng, total: usize, left: usize) -> Split {
    enumerate::splits(total, left).choose(rng).expect("left ≤ total").clone()
}

/// `n!·𝔊`, the unnormalized symmetrization.
fn symmetrize_unnormalized(f: &SymElement) -> Element {
    let n = f.bidegree().n;
    symmetry::symmetrize(f).scale(&Rational::from_integer(rational::factorial(n)))
}

fn sym_pair_unnormalized(p: &symmetry::SymPair) -> TensorPair {
    let mut out = TensorPair::zero(p.d(), p.mult());
    for ((l, r), c) in p.terms() {
        let gl = symmetrize_unnormalized(&SymElement::from_monomial(l.clone(), Rational::one()));
        let gr = symmetrize_unnormalized(&SymElement::from_monomial(r.clone(), Rational::one()));
        out.add_tensor(&gl, &gr, c);
    }
    out
}

#[derive(Default)]
struct Tally {
    rows: Vec<(&'static str, usize, usize)>,
}

impl Tally {
    fn run(&mut self, name: &'static str, trials: usize, mut f: impl FnMut(usize) -> Result<bool>) -> Result<()> {
        let mut ok = 0;
        for t in 0..trials {
            ok += usize::from(f(t)?);
        }
        self.rows.push((name, ok, trials));
        Ok(())
    }
}

/// Random shape with `d ≤ 2`, `M ≤ 3`.
fn random_dm(rng: &mut impl Rng) -> (usize, usize) {
    (rng.gen_range(1..=2), rng.gen_range(1..=3))
}

fn check_hopf(seed: u64) -> Result<Outcome> {
    const TRIALS: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut required = Tally::default();
    let mut diagnostic = Tally::default();

    required.run("pi(f *g h) = f *g pi(h)", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let e = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let f = symmetry::pi(&random_element(&mut rng, Bidegree::new(d, n, mult), 3));
        let h = random_element(&mut rng, Bidegree::new(e, n, mult), 3);
        let g = random_inc_fn(&mut rng, mult * d, mult * (d + e));
        Ok(symmetry::pi(&products::star_product(&f, &h, &g)?) == products::star_product(&f, &symmetry::pi(&h), &g)?)
    })?;
    required.run("pi(h *g f) = pi(h) *g f", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let e = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let h = random_element(&mut rng, Bidegree::new(d, n, mult), 3);
        let f = symmetry::pi(&random_element(&mut rng, Bidegree::new(e, n, mult), 3));
        let g = random_inc_fn(&mut rng, mult * d, mult * (d + e));
        Ok(symmetry::pi(&products::star_product(&h, &f, &g)?) == products::star_product(&symmetry::pi(&h), &f, &g)?)
    })?;
    required.run("C(n+m,n) pi(f .s h) = pi(f) . pi(h)", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=(3 - n).max(1));
        let f = random_element(&mut rng, Bidegree::new(d, n, mult), 3);
        let h = random_element(&mut rng, Bidegree::new(d, m, mult), 3);
        let sigma = random_split(&mut rng, n + m, n);
        let lhs = symmetry::pi(&products::shuffle_product(&f, &h, &sigma)?)
            .scale(&Rational::from_integer(rational::binomial(n + m, n)));
        Ok(lhs == products::invariant_shuffle(&symmetry::pi(&f), &symmetry::pi(&h))?)
    })?;
    required.run("D(y.v) = D(y).D(v)", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=(3 - n).max(1));
        let y = symmetry::pi(&random_element(&mut rng, Bidegree::new(d, n, mult), 3));
        let v = symmetry::pi(&random_element(&mut rng, Bidegree::new(d, m, mult), 3));
        let lhs = symmetry::delta_inv(&products::invariant_shuffle(&y, &v)?)?;
        let rhs = symmetry::pair_inv_shuffle(&symmetry::delta_inv(&y)?, &symmetry::delta_inv(&v)?)?;
        Ok(lhs == rhs)
    })?;
    required.run("D(x *g v) = D(x) *g D(v)", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let e = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=3);
        let x = symmetry::pi(&random_element(&mut rng, Bidegree::new(d, n, mult), 3));
        let v = symmetry::pi(&random_element(&mut rng, Bidegree::new(e, n, mult), 3));
        let g = random_inc_fn(&mut rng, mult * d, mult * (d + e));
        let lhs = symmetry::delta_inv(&products::star_product(&x, &v, &g)?)?;
        let rhs = symmetry::pair_inv_star(&symmetry::delta_inv(&x)?, &symmetry::delta_inv(&v)?, &g)?;
        Ok(lhs == rhs)
    })?;

    let mut product_pairs = Vec::new();
    let mut coproduct_inputs = Vec::new();
    for _ in 0..TRIALS {
        let (d, mult) = random_dm(&mut rng);
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=(4 - n).min(3));
        product_pairs.push((
            random_sym_element(&mut rng, Bidegree::new(d, n, mult), 3),
            random_sym_element(&mut rng, Bidegree::new(d, m, mult), 3),
        ));
        let k = rng.gen_range(1..=3);
        coproduct_inputs.push(random_sym_element(&mut rng, Bidegree::new(d, k, mult), 3));
    }
    required.run("G(f.h) = G(f).G(h)", TRIALS, |t| {
        let (f, h) = &product_pairs[t];
        let lhs = symmetry::symmetrize(&products::sym_shuffle(f, h)?);
        Ok(lhs == products::invariant_shuffle(&symmetry::symmetrize(f), &symmetry::symmetrize(h))?)
    })?;
    required.run("D G(f) = (G x G) D(f)", TRIALS, |t| {
        let f = &coproduct_inputs[t];
        Ok(symmetry::delta_inv(&symmetry::symmetrize(f))? == symmetry::symmetrize_pair(&symmetry::delta_sym(f)))
    })?;
    diagnostic.run("n! G(f.h) = n! G(f) . n! G(h)", TRIALS, |t| {
        let (f, h) = &product_pairs[t];
        let lhs = symmetrize_unnormalized(&products::sym_shuffle(f, h)?);
        Ok(lhs == products::invariant_shuffle(&symmetrize_unnormalized(f), &symmetrize_unnormalized(h))?)
    })?;
    diagnostic.run("D n!G(f) = (n!G x n!G) D(f)", TRIALS, |t| {
        let f = &coproduct_inputs[t];
        Ok(symmetry::delta_inv(&symmetrize_unnormalized(f))? == sym_pair_unnormalized(&symmetry::delta_sym(f)))
    })?;

    required.run("(f .s b) *g a = (f *g p) .s h", TRIALS, |_| {
        let (df, mult) = random_dm(&mut rng);
        let da = rng.gen_range(0..=2);
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(0..=1);
        let f = random_element(&mut rng, Bidegree::new(df, n, mult), 2);
        let b = random_tensor_monomial(&mut rng, Bidegree::new(df, m, mult));
        let a = random_tensor_monomial(&mut rng, Bidegree::new(da, n + m, mult));
        let sigma = random_split(&mut rng, n + m, n);
        let g = random_inc_fn(&mut rng, mult * df, mult * (df + da));
        let (p, h) = products::associativity_witness(&b, &a, &sigma, &g)?;
        let bf = Element::from_monomial(b, Rational::one());
        let af = Element::from_monomial(a, Rational::one());
        let pf = Element::from_monomial(p, Rational::one());
        let lhs = products::star_product(&products::shuffle_product(&f, &bf, &sigma)?, &af, &g)?;
        Ok(lhs == products::shuffle_product(&products::star_product(&f, &pf, &g)?, &h, &sigma)?)
    })?;
    required.run("G^-1 G = id", TRIALS, |_| {
        let (d, mult) = random_dm(&mut rng);
        let n = rng.gen_range(0..=3);
        let f = random_sym_element(&mut rng, Bidegree::new(d, n, mult), 4);
        Ok(symmetry::desymmetrize(&symmetry::symmetrize(&f))? == f)
    })?;

    let passed = required.rows.iter().all(|(_, ok, total)| ok == total);
    let failing: Vec<String> = required
        .rows
        .iter()
        .filter(|(_, ok, total)| ok != total)
        .map(|(name, ok, total)| format!("{name} {ok}/{total}"))
        .collect();
    let summary = if failing.is_empty() {
        format!("{} identities x {TRIALS} instances all exact", required.rows.len())
    } else {
        let diag: Vec<String> = diagnostic.rows.iter().map(|(n, ok, t)| format!("{n} {ok}/{t}")).collect();
        format!("failing: {}; with n!G instead of G: {}", failing.join(", "), diag.join(", "))
    };
    let table = |t: &Tally| -> Vec<Value> {
        t.rows.iter().map(|(n, ok, total)| json!({ "identity": n, "exact": ok, "instances": total })).collect()
    };
    let details = json!({ "identities": table(&required), "unnormalized_symmetrization": table(&diagnostic) });
    Ok((passed, summary, details))
}

fn same_span(a: &Subspace, vectors: Vec<SymElement>) -> Result<bool> {
    Ok(*a == Subspace::from_spanning(a.bidegree(), vectors)?)
}

fn check_plucker2(opts: &VerifyOptions) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut passed = true;
    for (d, ambient) in [(2, 4), (2, 6), (3, 6)] {
        let cfg = GrassmannConfig::new(d, ambient, 0)?;
        let kernel = plucker::evaluation_kernel(&cfg, 2, opts.samples, opts.seed)?;
        let quadrics = plucker::weyman_quadrics(d, ambient)?;
        let count = quadrics.len();
        let weyman_ok = same_span(&kernel.subspace, quadrics)?;
        let f1_ok = (d, ambient) != (2, 4)
            || (kernel.subspace.dim() == 1 && same_span(&kernel.subspace, vec![plucker::basic_plucker(1)?])?);
        passed &= weyman_ok && f1_ok;
        rows.push(json!({
            "d": d, "N": ambient, "kernel_dim": kernel.subspace.dim(), "quadrics": count,
            "weyman_span_equals_kernel": weyman_ok, "batches": kernel.batches,
        }));
    }
    let summary = rows
        .iter()
        .map(|r| format!("Gr({},{}) dim {} match {}", r["d"], r["N"], r["kernel_dim"], r["weyman_span_equals_kernel"]))
        .join(", ");
    Ok((passed, summary, json!({ "grassmannians": rows })))
}

fn check_secant26(opts: &VerifyOptions) -> Result<Outcome> {
    let mut base = plucker::PluckerIdeal::new(3);
    if let Some(s) = &opts.store {
        base = base.with_store(s.clone());
    }
    let sec = secant_ideal(Arc::new(base), 1, opts.store.clone())?;
    let c2 = sec.component(2, 2)?;
    let c3 = sec.component(2, 3)?;
    let pf = plucker::pfaffian(&[1, 2, 3, 4, 5, 6], 6)?;
    let pf_ok = c3.dim() == 1 && same_span(&c3, vec![pf])?;
    let cfg = GrassmannConfig::new(2, 6, 1)?;
    let e2 = plucker::evaluation_kernel(&cfg, 2, opts.samples, opts.seed)?;
    let e3 = plucker::evaluation_kernel(&cfg, 3, opts.samples, opts.seed)?;
    let agree = e2.subspace == *c2 && e3.subspace == *c3;
    let passed = c2.dim() == 0 && pf_ok && agree;
    let summary = format!(
        "dim (2,2) = {}, dim (2,3) = {}, Pfaffian span: {pf_ok}, oracle agrees: {agree}",
        c2.dim(),
        c3.dim()
    );
    let details = json!({
        "dim_2_2": c2.dim(), "dim_2_3": c3.dim(), "pfaffian": pf_ok, "oracle_agrees": agree,
        "basis_2_3": c3.to_json(),
    });
    Ok((passed, summary, details))
}

fn check_closure(seed: u64) -> Result<Outcome> {
    const PRODUCTS: usize = 50;
    const POINTS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let ideals = [plucker::PluckerIdeal::new(2), plucker::PluckerIdeal::new(3)];
    let mut failures = Vec::new();
    // (kind, products, products with a nonzero value)
    let mut tally: Vec<(String, usize, usize)> = Vec::new();
    let mut evaluations = 0;
    for t in 0..PRODUCTS {
        let ideal = &ideals[rng.gen_range(0..ideals.len())];
        let mult = ideal.mult();
        let n = rng.gen_range(2..=3);
        let component = ideal.component(2, n)?;
        let mut u = SymElement::zero(Bidegree::new(2, n, mult));
        for v in component.basis().choose_multiple(&mut rng, 3) {
            u.add_scaled_in_place(v, &random_coeff(&mut rng))?;
        }
        let (product, kind, label) = if t % 2 == 0 {
            let e = rng.gen_range(1..=2);
            let m = random_tensor_monomial(&mut rng, Bidegree::new(e, n, mult));
            let m = SymMonomial::from_parts(e, mult, m.factors().to_vec());
            let g = random_inc_fn(&mut rng, 2 * mult, (2 + e) * mult);
            let label = format!("u *g m with m = {m}, g = {:?}", g.image());
            let m = SymElement::from_monomial(m, Rational::one());
            (products::sym_star(&u, &m, &g)?, format!("u *g m, m of width {e}"), label)
        } else {
            let k = rng.gen_range(1..=2);
            let m = random_tensor_monomial(&mut rng, Bidegree::new(2, k, mult));
            let m = SymMonomial::from_parts(2, mult, m.factors().to_vec());
            let label = format!("u . m with m = {m}");
            let m = SymElement::from_monomial(m, Rational::one());
            (products::sym_shuffle(&u, &m)?, "u . m".to_string(), label)
        };
        let b = product.bidegree();
        let cfg = GrassmannConfig::new(b.d, b.alphabet(), 0)?;
        let mut nonzero = 0;
        for _ in 0..POINTS {
            let p: Vec<Rational> =
                plucker::random_secant_point(&cfg, &mut rng).into_iter().map(Rational::from_integer).collect();
            evaluations += 1;
            nonzero += usize::from(!plucker::evaluate(&product, &p)?.is_zero());
        }
        if nonzero > 0 {
            failures.push(format!("product {t} (M={mult}, n={n}, {label}) nonzero at {nonzero}/{POINTS} points"));
        }
        match tally.iter_mut().find(|(k, _, _)| *k == kind) {
            Some(row) => {
                row.1 += 1;
                row.2 += usize::from(nonzero > 0);
            }
            None => tally.push((kind, 1, usize::from(nonzero > 0))),
        }
    }
    tally.sort();
    let breakdown = tally.iter().map(|(k, total, bad)| format!("{k}: {bad}/{total}")).join(", ");
    let summary = format!(
        "{PRODUCTS} products x {POINTS} points, {} products nonvanishing ({breakdown})",
        failures.len()
    );
    let details = json!({
        "evaluations": evaluations,
        "by_kind": tally.iter().map(|(k, total, bad)| json!({ "kind": k, "products": total, "nonvanishing": bad })).collect::<Vec<_>>(),
        "nonvanishing": failures,
    });
    Ok((failures.is_empty(), summary, details))
}

fn check_probe(opts: &VerifyOptions) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut passed = true;
    for (r, mult, expected) in [(0, 2, 2), (1, 3, 3)] {
        let cfg = GrassmannConfig::with_mult(2, r, Some(mult))?;
        let report = degree_probe(&cfg, 4, opts.store.clone(), &ProbeLimits::default())?;
        passed &= report.complete && report.generator_degrees == [expected];
        reports.push(report);
    }
    let summary = reports
        .iter()
        .map(|p| format!("r={} M={}: new generators at n = {:?}", p.config.r, p.config.mult, p.generator_degrees))
        .join("; ");
    Ok((passed, summary, serde_json::to_value(&reports)?))
}
