//! Plücker relations, Pfaffians, evaluation at random points of secant
//! varieties of Grassmannians, and the `f_1 → f_2` identity.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{Bidegree, Monomial, SymElement, SymMonomial};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::exterior::{sort_sign, ExteriorMonomial};
use crate::ideals::{sha256_hex, ComponentStore, DiIdeal, Ideal, Subspace};
use crate::linalg::{Echelon, IntRow};
use crate::products::sym_star;
use crate::rational::{self, Rational};

/// `Gr(d, N)` with secant index `r`, seen inside `P_M` with `N = M·d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannConfig {
    pub d: usize,
    #[serde(rename = "N")]
    pub ambient: usize,
    pub r: usize,
    #[serde(rename = "M")]
    pub mult: usize,
}

impl GrassmannConfig {
    /// From `d` and `N`; `N` must be a multiple of `d`.
    pub fn new(d: usize, ambient: usize, r: usize) -> Result<Self> {
        if d == 0 || ambient % d != 0 {
            return Err(Error::Config(format!("N={ambient} is not a positive multiple of d={d}")));
        }
        Ok(Self { d, ambient, r, mult: ambient / d })
    }

    /// From `d` and `M`, defaulting to `M = r + 2`.
    pub fn with_mult(d: usize, r: usize, mult: Option<usize>) -> Result<Self> {
        let mult = mult.unwrap_or(r + 2);
        if d == 0 || mult == 0 {
            return Err(Error::Config("d and M must be positive".into()));
        }
        Ok(Self { d, ambient: mult * d, r, mult })
    }

    pub fn bidegree(&self, n: usize) -> Bidegree {
        Bidegree::new(self.d, n, self.mult)
    }
}

fn one() -> Rational {
    Rational::one()
}

fn x(mult: usize, d: usize, lists: &[Vec<u32>]) -> SymMonomial {
    SymMonomial::from_lists(d, mult, lists).expect("valid index lists")
}

/// `f_n = Σ_{S ∋ 1, |S| = 2n} sgn(S, S^c) x_S x_{S^c}` over `[4n]`, one term
/// per unordered pair `{S, S^c}`.
pub fn basic_plucker(n: usize) -> Result<SymElement> {
    if n == 0 {
        return Err(Error::Config("f_n needs n ≥ 1".into()));
    }
    let all: Vec<u32> = (1..=4 * n as u32).collect();
    let mut f = SymElement::zero(Bidegree::new(2 * n, 2, 2));
    for s in enumerate::subsets(4 * n, 2 * n).into_iter().filter(|s| s[0] == 1) {
        let c: Vec<u32> = all.iter().copied().filter(|i| !s.contains(i)).collect();
        let sign = sort_sign(&[s.clone(), c.clone()].concat());
        f.add_term(x(2, 2 * n, &[s, c]), rational::int(sign as i64));
    }
    Ok(f)
}

/// Sorts `ix` and returns the sign of the sorting permutation, or `None` on
/// a repeated index.
fn signed_sorted(mut ix: Vec<u32>) -> Option<(i8, Vec<u32>)> {
    let s = sort_sign(&ix);
    if s == 0 {
        return None;
    }
    ix.sort_unstable();
    Some((s, ix))
}

/// One quadric for fixed `i`, `j`, `l`:
/// `Σ_β sgn(β) x_{i j_{β(1..d−u)}} x_{j_{β(d−u+1..)} l}`.
pub fn weyman_quadric(d: usize, ambient: usize, i: &[u32], j: &[u32], l: &[u32]) -> Result<SymElement> {
    let (u, v) = (i.len(), l.len());
    if d == 0 || ambient % d != 0 || u > d || v > d || j.len() + u + v != 2 * d {
        return Err(Error::Shape(format!("index sets of sizes {u}, {}, {v} for d={d}", j.len())));
    }
    let mult = ambient / d;
    let mut f = SymElement::zero(Bidegree::new(d, 2, mult));
    let positions: Vec<u32> = (0..j.len() as u32).collect();
    for first in positions.iter().copied().combinations(d - u) {
        let rest: Vec<u32> = positions.iter().copied().filter(|p| !first.contains(p)).collect();
        let beta = sort_sign(&[first.clone(), rest.clone()].concat());
        let a = [i.to_vec(), first.iter().map(|&p| j[p as usize]).collect()].concat();
        let b = [rest.iter().map(|&p| j[p as usize]).collect::<Vec<_>>(), l.to_vec()].concat();
        let (Some((sa, a)), Some((sb, b))) = (signed_sorted(a), signed_sorted(b)) else {
            continue;
        };
        if let Some(&bad) = a.iter().chain(&b).find(|&&k| k == 0 || k as usize > ambient) {
            return Err(Error::IndexOutOfRange { index: bad, bound: ambient });
        }
        f.add_term(x(mult, d, &[a, b]), rational::int((beta * sa * sb) as i64));
    }
    Ok(f)
}

/// Every quadric from Weyman's construction: `u + v < d`, `i` and `l` any
/// increasing index sets of sizes `u` and `v`, and `j` of size `2d − u − v`
/// disjoint from both. Zero quadrics are dropped.
pub fn weyman_quadrics(d: usize, ambient: usize) -> Result<Vec<SymElement>> {
    if d == 0 || ambient % d != 0 {
        return Err(Error::Config(format!("N={ambient} is not a positive multiple of d={d}")));
    }
    let mut out = Vec::new();
    for u in 0..d {
        for v in 0..d - u {
            let jn = 2 * d - u - v;
            for i in enumerate::subsets(ambient, u) {
                for l in enumerate::subsets(ambient, v) {
                    let free: Vec<u32> =
                        (1..=ambient as u32).filter(|k| !i.contains(k) && !l.contains(k)).collect();
                    for j in free.iter().copied().combinations(jn) {
                        let f = weyman_quadric(d, ambient, &i, &j, &l)?;
                        if !f.is_zero() {
                            out.push(f);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `S_M`: component `(d, n)` is the degree-`n` part of the Plücker ideal of
/// `Gr(d, M·d)`, generated by that Grassmannian's own quadrics.
pub struct PluckerIdeal {
    mult: usize,
    levels: Mutex<HashMap<usize, Arc<DiIdeal>>>,
    store: Option<Arc<ComponentStore>>,
}

impl PluckerIdeal {
    pub fn new(mult: usize) -> Self {
        Self { mult, levels: Mutex::new(HashMap::new()), store: None }
    }

    pub fn with_store(mut self, store: Arc<ComponentStore>) -> Self {
        self.store = Some(store);
        self
    }

    /// The ordinary ideal of `Gr(d, M·d)` as a di-ideal with generators in
    /// width `d` only.
    pub fn level(&self, d: usize) -> Result<Arc<DiIdeal>> {
        if let Some(l) = self.levels.lock().expect("level lock").get(&d) {
            return Ok(l.clone());
        }
        let gens = if d >= 2 { weyman_quadrics(d, self.mult * d)? } else { Vec::new() };
        let mut ideal = DiIdeal::new(self.mult, gens)?;
        if let Some(s) = &self.store {
            ideal = ideal.with_store(s.clone());
        }
        let ideal = Arc::new(ideal);
        self.levels.lock().expect("level lock").insert(d, ideal.clone());
        Ok(ideal)
    }
}

impl Ideal for PluckerIdeal {
    fn mult(&self) -> usize {
        self.mult
    }

    fn fingerprint(&self) -> String {
        sha256_hex(format!("plucker M={}", self.mult).as_bytes())
    }

    fn component(&self, d: usize, n: usize) -> Result<Arc<Subspace>> {
        self.level(d)?.component(d, n)
    }
}

/// Pfaffian of the generic skew matrix `(x_{ab})` restricted to `indices`.
pub fn pfaffian(indices: &[u32], ambient: usize) -> Result<SymElement> {
    if indices.len() % 2 == 1 {
        return Err(Error::Shape(format!("Pfaffian of odd size {}", indices.len())));
    }
    if ambient % 2 != 0 {
        return Err(Error::Config(format!("N={ambient} is not a multiple of d=2")));
    }
    if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k as usize > ambient) {
        return Err(Error::IndexOutOfRange { index: bad, bound: ambient });
    }
    let Some((_, sorted)) = signed_sorted(indices.to_vec()) else {
        return Err(Error::NotIncreasing(indices.to_vec()));
    };
    let mult = ambient / 2;
    let mut f = SymElement::zero(Bidegree::new(2, sorted.len() / 2, mult));
    fn rec(rest: &[u32], pairs: &mut Vec<Vec<u32>>, sign: i64, out: &mut Vec<(Vec<Vec<u32>>, i64)>) {
        if rest.is_empty() {
            out.push((pairs.clone(), sign));
            return;
        }
        for k in 1..rest.len() {
            pairs.push(vec![rest[0], rest[k]]);
            let remaining: Vec<u32> = rest[1..].iter().copied().filter(|&v| v != rest[k]).collect();
            let s = if k % 2 == 1 { sign } else { -sign };
            rec(&remaining, pairs, s, out);
            pairs.pop();
        }
    }
    let mut matchings = Vec::new();
    rec(&sorted, &mut Vec::new(), 1, &mut matchings);
    for (pairs, sign) in matchings {
        f.add_term(x(mult, 2, &pairs), rational::int(sign));
    }
    Ok(f)
}

/// Position of each `d`-subset of `[N]` in lexicographic order.
pub fn coordinate_index(d: usize, ambient: usize) -> HashMap<Vec<u32>, usize> {
    enumerate::subsets(ambient, d).into_iter().enumerate().map(|(k, s)| (s, k)).collect()
}

fn check_point(b: Bidegree, coords: usize) -> Result<()> {
    let expected = rational::binomial(b.alphabet(), b.d);
    if BigInt::from(coords) != expected {
        return Err(Error::DimensionMismatch {
            expected: usize::try_from(&expected).unwrap_or(usize::MAX),
            got: coords,
        });
    }
    Ok(())
}

/// `f` evaluated at the point whose Plücker coordinates (lexicographic in the
/// `d`-subsets) are `coords`.
pub fn evaluate(f: &SymElement, coords: &[Rational]) -> Result<Rational> {
    let b = f.bidegree();
    check_point(b, coords.len())?;
    let index = coordinate_index(b.d, b.alphabet());
    let mut total = Rational::zero();
    for (m, c) in f.terms() {
        let mut v = c.clone();
        for w in m.factors() {
            v *= &coords[index[w.indices()]];
        }
        total += v;
    }
    Ok(total)
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut total = BigInt::zero();
    for p in (0..n as u32).permutations(n) {
        let mut term = BigInt::from(sort_sign(&p));
        for (row, &col) in p.iter().enumerate() {
            term *= &m[row][col as usize];
        }
        total += term;
    }
    total
}

/// Plücker coordinates (maximal minors) of the row span of a `d × N` matrix.
pub fn plucker_coordinates(rows: &[Vec<i64>]) -> Result<Vec<BigInt>> {
    let d = rows.len();
    let ambient = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, got: bad.len() });
    }
    Ok(enumerate::subsets(ambient, d)
        .into_iter()
        .map(|cols| {
            let minor: Vec<Vec<BigInt>> =
                rows.iter().map(|r| cols.iter().map(|&c| BigInt::from(r[c as usize - 1])).collect()).collect();
            det(&minor)
        })
        .collect())
}

/// A point of the `r`-th secant variety: the sum of `r + 1` decomposable
/// vectors with entries drawn from `{−9, …, 9}`.
pub fn random_secant_point(cfg: &GrassmannConfig, rng: &mut impl Rng) -> Vec<BigInt> {
    let mut total = vec![BigInt::zero(); rational::binomial(cfg.ambient, cfg.d).try_into().unwrap_or(0)];
    for _ in 0..=cfg.r {
        let rows: Vec<Vec<i64>> =
            (0..cfg.d).map(|_| (0..cfg.ambient).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let p = plucker_coordinates(&rows).expect("rectangular");
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Point `k` of batch `batch`: every point has its own reproducible stream.
fn sample_point(cfg: &GrassmannConfig, seed: u64, batch: u64, k: u64) -> Vec<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ batch.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(k);
    random_secant_point(cfg, &mut rng)
}

#[derive(Clone, Debug)]
pub struct EvaluationKernel {
    pub subspace: Subspace,
    /// Sampling rounds used by the slowest weight block.
    pub batches: usize,
    pub points: usize,
}

/// Polynomials of degree `n` vanishing at sampled points of `Sec_r Gr(d, N)`.
///
/// Monomials are grouped by torus weight, which the ideal respects. Each block
/// takes batches of fresh points until its rank is unchanged for two
/// consecutive batches. `samples` fixes the batch size; by default it is the
/// block size plus four.
pub fn evaluation_kernel(cfg: &GrassmannConfig, n: usize, samples: Option<usize>, seed: u64) -> Result<EvaluationKernel> {
    let b = cfg.bidegree(n);
    let index = coordinate_index(cfg.d, cfg.ambient);
    let mut blocks: BTreeMap<Vec<u16>, Vec<SymMonomial>> = BTreeMap::new();
    for m in enumerate::sym_monomials(b) {
        blocks.entry(m.weight()).or_default().push(m);
    }
    let results: Vec<(Vec<SymElement>, usize, usize)> = blocks
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|monos| block_kernel(cfg, b, &index, &monos, samples, seed))
        .collect::<Result<_>>()?;
    let batches = results.iter().map(|r| r.1).max().unwrap_or(0);
    let points = results.iter().map(|r| r.2).sum();
    let vectors = results.into_iter().flat_map(|r| r.0).collect();
    Ok(EvaluationKernel { subspace: Subspace::from_spanning(b, vectors)?, batches, points })
}

fn block_kernel(
    cfg: &GrassmannConfig,
    b: Bidegree,
    index: &HashMap<Vec<u32>, usize>,
    monos: &[SymMonomial],
    samples: Option<usize>,
    seed: u64,
) -> Result<(Vec<SymElement>, usize, usize)> {
    let per_batch = samples.unwrap_or(monos.len() + 4).max(1);
    let coords: Vec<Vec<usize>> =
        monos.iter().map(|m| m.factors().iter().map(|w| index[w.indices()]).collect()).collect();
    let mut e = Echelon::new();
    let mut history: Vec<usize> = Vec::new();
    let mut batch = 0u64;
    let mut points = 0;
    while history.len() < 3 || history[history.len() - 3] != history[history.len() - 1] {
        let rows: Vec<IntRow> = (0..per_batch as u64)
            .into_par_iter()
            .map(|k| {
                let p = sample_point(cfg, seed, batch, k);
                coords
                    .iter()
                    .enumerate()
                    .map(|(c, ix)| (c, ix.iter().fold(BigInt::one(), |acc, &i| acc * &p[i])))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        for row in rows {
            if e.rank() == monos.len() {
                break;
            }
            e.insert(row);
        }
        points += per_batch;
        history.push(e.rank());
        batch += 1;
        if e.rank() == monos.len() {
            break;
        }
    }
    let kernel = crate::linalg::kernel_from_rref(monos.len(), &e.into_rref());
    let vectors = kernel
        .into_iter()
        .map(|v| {
            SymElement::from_terms(
                b,
                v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (monos[k].clone(), c)),
            )
        })
        .collect::<Result<_>>()?;
    Ok((vectors, batch as usize, points))
}

/// `γ(n) = C(4n,2n)·6·C(4n+3,2n+1) / C(4n+4,2n+2)`, exactly.
pub fn gamma(n: usize) -> Rational {
    let num = rational::binomial(4 * n, 2 * n) * 6 * rational::binomial(4 * n + 3, 2 * n + 1);
    Rational::new(num, rational::binomial(4 * n + 4, 2 * n + 2))
}

/// `c` with `a = c·b`, if there is one and `b ≠ 0`.
pub fn proportionality(a: &SymElement, b: &SymElement) -> Option<Rational> {
    let (m, cb) = b.terms().next()?;
    let c = a.coeff(m) / cb;
    (a.bidegree() == b.bidegree() && a == &b.scale(&c)).then_some(c)
}

/// The 35 maps `g : [4] → [8]` with `g(1) = 1`.
pub fn fonesum_maps() -> Vec<crate::products::IncFn> {
    enumerate::inc_fns(4, 8).into_iter().filter(|g| g.image()[0] == 1).collect()
}

/// The six `σ ∈ Σ_4` with `σ(1) < σ(2)` and `σ(3) < σ(4)`.
pub fn fonesum_cosets() -> Vec<[u32; 4]> {
    (1..=4u32)
        .permutations(4)
        .filter(|s| s[0] < s[1] && s[2] < s[3])
        .map(|s| [s[0], s[1], s[2], s[3]])
        .collect()
}

/// `(−1)^{sgn T}` for `T = (g(1), g(2), j_{σ1}, j_{σ2}, g(3), g(4), j_{σ3}, j_{σ4})`.
pub fn fonesum_sign(g: &crate::products::IncFn, sigma: &[u32; 4]) -> i8 {
    let j = g.complement();
    let (gi, ji) = (g.image(), j.image());
    let t = [gi[0], gi[1], ji[sigma[0] as usize - 1], ji[sigma[1] as usize - 1], gi[2], gi[3], ji[sigma[2] as usize - 1], ji[sigma[3] as usize - 1]];
    sort_sign(&t)
}

fn coset_monomial(sigma: &[u32; 4]) -> SymElement {
    SymElement::from_monomial(x(2, 2, &[vec![sigma[0], sigma[1]], vec![sigma[2], sigma[3]]]), one())
}

#[derive(Clone, Debug)]
pub struct FoneSum {
    pub signed: SymElement,
    pub unsigned: SymElement,
    pub f2: SymElement,
}

/// `Σ_{g, σ} ε f_1 ∗_g x_{σ(1)σ(2)} x_{σ(3)σ(4)}` with `ε = (−1)^{sgn T}` and
/// with `ε = 1`.
pub fn fonesum() -> Result<FoneSum> {
    let f1 = basic_plucker(1)?;
    let out = Bidegree::new(4, 2, 2);
    let (mut signed, mut unsigned) = (SymElement::zero(out), SymElement::zero(out));
    for g in fonesum_maps() {
        for sigma in fonesum_cosets() {
            let term = sym_star(&f1, &coset_monomial(&sigma), &g)?;
            unsigned.add_scaled_in_place(&term, &one())?;
            signed.add_scaled_in_place(&term, &rational::int(fonesum_sign(&g, &sigma) as i64))?;
        }
    }
    Ok(FoneSum { signed, unsigned, f2: basic_plucker(2)? })
}

/// For each term of `f_1`, the number of `(g, σ)` producing `target`.
/// `paired` pairs slot `k` of the term with factor `k` of the coset monomial,
/// as the sign `T` does; otherwise the symmetrized product is used.
pub fn census(target: &SymMonomial, paired: bool) -> Result<Vec<(SymMonomial, usize)>> {
    let f1 = basic_plucker(1)?;
    let mut out = Vec::new();
    for (t, c) in f1.terms() {
        let mut count = 0;
        for g in fonesum_maps() {
            let gc = g.complement();
            for sigma in fonesum_cosets() {
                let hit = if paired {
                    let h = [vec![sigma[0], sigma[1]], vec![sigma[2], sigma[3]]];
                    let mut slots = Vec::new();
                    let mut ok = true;
                    for (fk, hk) in t.factors().iter().zip(&h) {
                        let a: Vec<u32> = fk.indices().iter().map(|&i| g.image()[i as usize - 1]).collect();
                        let b: Vec<u32> = hk.iter().map(|&i| gc.image()[i as usize - 1]).collect();
                        match signed_sorted([a, b].concat()) {
                            Some((_, w)) => slots.push(ExteriorMonomial::new(8, w)?),
                            None => ok = false,
                        }
                    }
                    ok && SymMonomial::new(4, 2, slots)? == *target
                } else {
                    let single = SymElement::from_monomial(t.clone(), c.clone());
                    !sym_star(&single, &coset_monomial(&sigma), &g)?.coeff(target).is_zero()
                };
                count += usize::from(hit);
            }
        }
        out.push((t.clone(), count));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn f1_terms() {
        let f1 = basic_plucker(1).unwrap();
        assert_eq!(f1.len(), 3);
        assert_eq!(f1.coeff(&x(2, 2, &[vec![1, 3], vec![2, 4]])), int(-1));
        assert_eq!(basic_plucker(2).unwrap().len(), 35);
        assert_eq!(pfaffian(&[1, 2, 3, 4], 4).unwrap(), f1);
    }

    #[test]
    fn weyman_example() {
        let f = weyman_quadric(2, 4, &[], &[1, 2, 3], &[4]).unwrap();
        assert_eq!(f, basic_plucker(1).unwrap());
        assert!(weyman_quadrics(1, 3).unwrap().is_empty());
    }

    #[test]
    fn pfaffian_sizes() {
        assert_eq!(pfaffian(&[1, 2, 3, 4, 5, 6], 6).unwrap().len(), 15);
        let p = pfaffian(&[2, 5], 6).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&x(3, 2, &[vec![2, 5]])), int(1));
        assert!(pfaffian(&[1, 2, 3], 6).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f1 = basic_plucker(1).unwrap();
        let mut p = vec![int(0); 6];
        p[0] = int(1);
        assert_eq!(evaluate(&f1, &p).unwrap(), int(0));
        p[5] = int(1);
        assert_eq!(evaluate(&f1, &p).unwrap(), int(1));
        assert!(evaluate(&f1, &p[..5]).is_err());
    }

    #[test]
    fn gamma_one() {
        assert_eq!(gamma(1), int(18));
    }
}
