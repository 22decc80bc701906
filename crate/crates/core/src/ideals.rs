//! Bigraded subspaces of `P_Σ` in reduced echelon form, di-ideals given by
//! generators, and the on-disk component cache.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::element::{Bidegree, ElementJson, Monomial, SymElement, SymMonomial};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, RatRow};
use crate::products::{sym_shuffle, sym_star};
use crate::rational::Rational;

/// A subspace of `(P_Σ)_{d,n}` held as its reduced echelon basis with respect
/// to the monomial order: every basis element has leading coefficient 1, and
/// no leading monomial occurs in any other basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    bidegree: Bidegree,
    basis: Vec<SymElement>,
    pivots: HashMap<SymMonomial, usize>,
}

fn weight_key(f: &SymElement) -> Option<Vec<u16>> {
    let mut it = f.terms().map(|(m, _)| m.weight());
    let first = it.next()?;
    it.all(|w| w == first).then_some(first)
}

/// Reduced echelon basis of the span of `vectors`, all of the same weight
/// class. Columns are numbered so that larger monomials come first.
fn echelon_block(b: Bidegree, vectors: &[&SymElement]) -> Vec<SymElement> {
    let monomials: BTreeSet<&SymMonomial> = vectors.iter().flat_map(|v| v.terms().map(|(m, _)| m)).collect();
    let order: Vec<&SymMonomial> = monomials.into_iter().rev().collect();
    let index: HashMap<&SymMonomial, usize> = order.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut e = Echelon::new();
    for v in vectors {
        let mut row: RatRow = v.terms().map(|(m, c)| (index[m], c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        e.insert_rational(&row);
        if e.rank() == order.len() {
            break;
        }
    }
    e.into_rref()
        .into_iter()
        .map(|row| {
            SymElement::from_terms(b, row.into_iter().map(|(c, v)| (order[c].clone(), v)))
                .expect("rows stay in their bidegree")
        })
        .collect()
}

impl Subspace {
    pub fn zero(bidegree: Bidegree) -> Self {
        Self { bidegree, basis: Vec::new(), pivots: HashMap::new() }
    }

    /// The whole of `(P_Σ)_{d,n}`.
    pub fn full(bidegree: Bidegree) -> Self {
        let basis = enumerate::sym_monomials(bidegree)
            .into_iter()
            .rev()
            .map(|m| SymElement::from_monomial(m, Rational::from_integer(1.into())))
            .collect();
        Self::from_rref(bidegree, basis)
    }

    fn from_rref(bidegree: Bidegree, mut basis: Vec<SymElement>) -> Self {
        basis.sort_by(|a, b| lead(b).cmp(lead(a)));
        let pivots = basis.iter().enumerate().map(|(i, v)| (lead(v).clone(), i)).collect();
        Self { bidegree, basis, pivots }
    }

    /// Row-reduces a spanning set. Weight-homogeneous spanning sets are
    /// reduced one weight block at a time, in parallel.
    pub fn from_spanning(bidegree: Bidegree, vectors: Vec<SymElement>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.bidegree() != bidegree) {
            return Err(Error::BidegreeMismatch(v.bidegree(), bidegree));
        }
        let vectors: Vec<SymElement> = vectors.into_iter().filter(|v| !v.is_zero()).collect();
        let keys: Option<Vec<Vec<u16>>> = vectors.iter().map(weight_key).collect();
        let mut blocks: HashMap<Vec<u16>, Vec<&SymElement>> = HashMap::new();
        match keys {
            Some(keys) => {
                for (v, k) in vectors.iter().zip(keys) {
                    blocks.entry(k).or_default().push(v);
                }
            }
            None => {
                blocks.insert(Vec::new(), vectors.iter().collect());
            }
        }
        let blocks: Vec<Vec<&SymElement>> = blocks.into_values().collect();
        let basis: Vec<SymElement> = blocks.par_iter().flat_map(|vs| echelon_block(bidegree, vs)).collect();
        Ok(Self::from_rref(bidegree, basis))
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SymElement] {
        &self.basis
    }

    pub fn is_weight_homogeneous(&self) -> bool {
        self.basis.iter().all(|v| weight_key(v).is_some())
    }

    /// `f` minus its projection along the basis; zero iff `f` lies in the span.
    pub fn reduce(&self, f: &SymElement) -> SymElement {
        let mut out = f.clone();
        for (m, c) in f.terms() {
            if let Some(&i) = self.pivots.get(m) {
                out.add_scaled_in_place(&self.basis[i], &-c.clone()).expect("same bidegree");
            }
        }
        out
    }

    pub fn contains(&self, f: &SymElement) -> Result<bool> {
        if f.bidegree() != self.bidegree {
            return Err(Error::BidegreeMismatch(f.bidegree(), self.bidegree));
        }
        Ok(self.reduce(f).is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.bidegree == self.bidegree && other.basis.iter().all(|v| self.reduce(v).is_zero())
    }

    /// Leading monomials, largest first.
    pub fn leading_monomials(&self) -> Vec<SymMonomial> {
        self.basis.iter().map(|v| lead(v).clone()).collect()
    }

    pub fn is_pivot(&self, m: &SymMonomial) -> bool {
        self.pivots.contains_key(m)
    }

    /// Monomials that are not leading terms, in increasing order. Their
    /// classes form a basis of the quotient.
    pub fn standard_monomials(&self) -> Vec<SymMonomial> {
        enumerate::sym_monomials(self.bidegree)
            .into_iter()
            .filter(|m| !self.pivots.contains_key(m))
            .collect()
    }

    /// The class of `m` in the quotient, written in standard monomials.
    pub fn quotient_image(&self, m: &SymMonomial) -> SymElement {
        match self.pivots.get(m) {
            Some(&i) => {
                let mut out = self.basis[i].scale(&-Rational::from_integer(1.into()));
                out.add_term(m.clone(), Rational::from_integer(1.into()));
                out
            }
            None => SymElement::from_monomial(m.clone(), Rational::from_integer(1.into())),
        }
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.basis.iter().map(SymElement::max_coeff_bits).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Vec<ElementJson> {
        self.basis.iter().map(SymElement::to_json).collect()
    }
}

fn lead(v: &SymElement) -> &SymMonomial {
    v.term_map().keys().next_back().expect("basis vectors are nonzero")
}

/// Anything that can produce its `(d, n)` components.
pub trait Ideal: Send + Sync {
    fn mult(&self) -> usize;

    /// Content hash identifying the ideal, used for caching.
    fn fingerprint(&self) -> String;

    fn component(&self, d: usize, n: usize) -> Result<Arc<Subspace>>;

    fn contains(&self, f: &SymElement) -> Result<bool> {
        let b = f.bidegree();
        if b.mult != self.mult() {
            return Err(Error::BidegreeMismatch(b, Bidegree::new(b.d, b.n, self.mult())));
        }
        self.component(b.d, b.n)?.contains(f)
    }

    fn quotient_basis(&self, d: usize, n: usize) -> Result<Vec<SymMonomial>> {
        Ok(self.component(d, n)?.standard_monomials())
    }

    fn initial_component(&self, d: usize, n: usize) -> Result<Vec<SymMonomial>> {
        Ok(self.component(d, n)?.leading_monomials())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
struct StoredComponent {
    fingerprint: String,
    bidegree: [usize; 3],
    basis: Vec<ElementJson>,
    sha256: String,
}

fn basis_hash(basis: &[ElementJson]) -> String {
    sha256_hex(serde_json::to_string(basis).expect("serializable").as_bytes())
}

/// One JSON file per `(M, d, n)` component, named by the ideal's fingerprint
/// and guarded by a hash of its contents.
#[derive(Debug)]
pub struct ComponentStore {
    dir: PathBuf,
    regenerated: AtomicUsize,
    writes: AtomicUsize,
}

impl ComponentStore {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, regenerated: AtomicUsize::new(0), writes: AtomicUsize::new(0) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, fingerprint: &str, b: Bidegree) -> PathBuf {
        let short = &fingerprint[..fingerprint.len().min(16)];
        self.dir.join(format!("M{}_d{}_n{}_{short}.json", b.mult, b.d, b.n))
    }

    /// Number of entries found corrupt and recomputed so far.
    pub fn regenerated(&self) -> usize {
        self.regenerated.load(Ordering::Relaxed)
    }

    pub fn load(&self, fingerprint: &str, b: Bidegree) -> Result<Option<Subspace>> {
        let path = self.path_for(fingerprint, b);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = || Error::CacheCorrupt(path.display().to_string());
        let stored: StoredComponent = serde_json::from_str(&text).map_err(|_| corrupt())?;
        if stored.fingerprint != fingerprint
            || stored.bidegree != [b.d, b.n, b.mult]
            || stored.sha256 != basis_hash(&stored.basis)
        {
            return Err(corrupt());
        }
        let basis = stored
            .basis
            .iter()
            .map(SymElement::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| corrupt())?;
        if basis.iter().any(|v| v.bidegree() != b || v.is_zero()) {
            return Err(corrupt());
        }
        Ok(Some(Subspace::from_rref(b, basis)))
    }

    /// Writes to a temporary file in the same directory, then renames.
    pub fn save(&self, fingerprint: &str, s: &Subspace) -> Result<()> {
        let b = s.bidegree;
        let basis = s.to_json();
        let stored = StoredComponent {
            fingerprint: fingerprint.to_string(),
            bidegree: [b.d, b.n, b.mult],
            sha256: basis_hash(&basis),
            basis,
        };
        let path = self.path_for(fingerprint, b);
        let seq = self.writes.fetch_add(1, Ordering::Relaxed);
        let tmp = path.with_extension(format!("tmp.{}.{seq}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&stored)?)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Cached lookup with recomputation on a miss or a corrupt entry.
    pub fn get_or_compute(
        &self,
        fingerprint: &str,
        b: Bidegree,
        compute: impl FnOnce() -> Result<Subspace>,
    ) -> Result<Subspace> {
        match self.load(fingerprint, b) {
            Ok(Some(s)) => return Ok(s),
            Ok(None) => {}
            Err(Error::CacheCorrupt(p)) => {
                warn!("cache entry {p} failed verification, recomputing");
                self.regenerated.fetch_add(1, Ordering::Relaxed);
            }
            Err(e) => return Err(e),
        }
        let s = compute()?;
        self.save(fingerprint, &s)?;
        Ok(s)
    }
}

/// Memo of computed components shared by ideal implementations.
#[derive(Default)]
pub(crate) struct ComponentMemo {
    map: Mutex<HashMap<(usize, usize), Arc<Subspace>>>,
}

impl ComponentMemo {
    pub(crate) fn get_or_compute(
        &self,
        fingerprint: &str,
        b: Bidegree,
        store: Option<&ComponentStore>,
        compute: impl FnOnce() -> Result<Subspace>,
    ) -> Result<Arc<Subspace>> {
        if let Some(s) = self.map.lock().expect("memo lock").get(&(b.d, b.n)) {
            return Ok(s.clone());
        }
        let s = match store {
            Some(store) => store.get_or_compute(fingerprint, b, compute)?,
            None => compute()?,
        };
        let s = Arc::new(s);
        self.map.lock().expect("memo lock").insert((b.d, b.n), s.clone());
        Ok(s)
    }
}

/// The smallest subspace of `P_Σ` containing the generators and closed under
/// `·` and every `∗_g`.
pub struct DiIdeal {
    mult: usize,
    generators: Vec<SymElement>,
    fingerprint: String,
    memo: ComponentMemo,
    store: Option<Arc<ComponentStore>>,
}

impl DiIdeal {
    pub fn new(mult: usize, generators: Vec<SymElement>) -> Result<Self> {
        if let Some(f) = generators.iter().find(|f| f.bidegree().mult != mult) {
            return Err(Error::Shape(format!("generator of bidegree {} in an ideal with M={mult}", f.bidegree())));
        }
        let generators: Vec<SymElement> = generators.into_iter().filter(|f| !f.is_zero()).collect();
        let payload: Vec<ElementJson> = generators.iter().map(SymElement::to_json).collect();
        let fingerprint = sha256_hex(
            format!("di-ideal M={mult} {}", serde_json::to_string(&payload).expect("serializable")).as_bytes(),
        );
        Ok(Self { mult, generators, fingerprint, memo: ComponentMemo::default(), store: None })
    }

    pub fn with_store(mut self, store: Arc<ComponentStore>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn generators(&self) -> &[SymElement] {
        &self.generators
    }

    /// Spanning set `{ h · (f_i ∗_g a) }` row-reduced, without caching.
    pub fn compute_component(&self, d: usize, n: usize) -> Result<Subspace> {
        let target = Bidegree::new(d, n, self.mult);
        let mut spanning = Vec::new();
        for f in &self.generators {
            let fb = f.bidegree();
            if fb.d > d || fb.n > n {
                continue;
            }
            let inner = starred_span(f, d)?;
            let hs = enumerate::sym_monomials(Bidegree::new(d, n - fb.n, self.mult));
            let products: Vec<SymElement> = inner
                .basis()
                .par_iter()
                .flat_map_iter(|u| {
                    hs.iter().map(move |h| {
                        sym_shuffle(u, &SymElement::from_monomial(h.clone(), Rational::from_integer(1.into())))
                    })
                })
                .collect::<Result<_>>()?;
            spanning.extend(products);
        }
        debug!("component {target}: {} spanning vectors", spanning.len());
        Subspace::from_spanning(target, spanning)
    }
}

/// Span of `f ∗_g a` over every increasing `g` and every monomial `a` that
/// lifts `f` to width `d`.
fn starred_span(f: &SymElement, d: usize) -> Result<Subspace> {
    let fb = f.bidegree();
    let out = Bidegree::new(d, fb.n, fb.mult);
    let gs = enumerate::inc_fns(fb.mult * fb.d, fb.mult * d);
    let as_ = enumerate::sym_monomials(Bidegree::new(d - fb.d, fb.n, fb.mult));
    let one = Rational::from_integer(1.into());
    let pairs: Vec<(usize, usize)> = (0..gs.len()).flat_map(|i| (0..as_.len()).map(move |j| (i, j))).collect();
    let vectors: Vec<SymElement> = pairs
        .par_iter()
        .map(|&(i, j)| sym_star(f, &SymElement::from_monomial(as_[j].clone(), one.clone()), &gs[i]))
        .collect::<Result<_>>()?;
    Subspace::from_spanning(out, vectors)
}

impl Ideal for DiIdeal {
    fn mult(&self) -> usize {
        self.mult
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }

    fn component(&self, d: usize, n: usize) -> Result<Arc<Subspace>> {
        let b = Bidegree::new(d, n, self.mult);
        self.memo
            .get_or_compute(&self.fingerprint, b, self.store.as_deref(), || self.compute_component(d, n))
    }
}
