//! Sparse exact-rational elements of `P` (tensor monomials) and `P_Σ`
//! (canonically sorted multisets of wedges).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::ExteriorMonomial;
use crate::rational::{self, Rational};

/// `(d, n, M)`: wedge width, tensor length and multiplier. The alphabet of
/// every factor is `[M·d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub d: usize,
    pub n: usize,
    pub mult: usize,
}

impl Bidegree {
    pub fn new(d: usize, n: usize, mult: usize) -> Self {
        Self { d, n, mult }
    }

    pub fn alphabet(&self) -> usize {
        self.d * self.mult
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, n={}, M={})", self.d, self.n, self.mult)
    }
}

/// Common surface of the two monomial kinds.
pub trait Monomial: Clone + Ord + std::hash::Hash + fmt::Debug + Send + Sync {
    fn from_factors(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Result<Self>;
    fn factors(&self) -> &[ExteriorMonomial];
    fn d(&self) -> usize;
    fn mult(&self) -> usize;

    fn n(&self) -> usize {
        self.factors().len()
    }

    fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.d(), self.n(), self.mult())
    }

    fn index_lists(&self) -> Vec<Vec<u32>> {
        self.factors().iter().map(|f| f.indices().to_vec()).collect()
    }

    /// How often each letter occurs: the weight under the diagonal torus.
    fn weight(&self) -> Vec<u16> {
        let mut w = vec![0u16; self.d() * self.mult()];
        for f in self.factors() {
            for &i in f.indices() {
                w[i as usize - 1] += 1;
            }
        }
        w
    }
}

fn check_factors(d: usize, mult: usize, factors: &[ExteriorMonomial]) -> Result<()> {
    let alphabet = d * mult;
    for f in factors {
        if f.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch(f.alphabet(), alphabet));
        }
        if f.width() != d {
            return Err(Error::Shape(format!("factor {f} has width {}, expected {d}", f.width())));
        }
    }
    Ok(())
}

fn parse_factors(d: usize, mult: usize, lists: &[Vec<u32>]) -> Result<Vec<ExteriorMonomial>> {
    lists
        .iter()
        .map(|l| ExteriorMonomial::new(d * mult, l.clone()))
        .collect()
}

/// An ordered tensor `w_1 ⊗ ⋯ ⊗ w_n` of basis wedges (a reading list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorMonomial {
    d: usize,
    mult: usize,
    factors: Vec<ExteriorMonomial>,
}

impl TensorMonomial {
    pub fn new(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Result<Self> {
        check_factors(d, mult, &factors)?;
        Ok(Self { d, mult, factors })
    }

    pub fn from_lists(d: usize, mult: usize, lists: &[Vec<u32>]) -> Result<Self> {
        Self::new(d, mult, parse_factors(d, mult, lists)?)
    }

    pub(crate) fn from_parts(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Self {
        Self { d, mult, factors }
    }

    pub fn unit(d: usize, mult: usize) -> Self {
        Self { d, mult, factors: Vec::new() }
    }

    pub fn factor(&self, k: usize) -> &ExteriorMonomial {
        &self.factors[k]
    }

    pub fn into_factors(self) -> Vec<ExteriorMonomial> {
        self.factors
    }
}

impl Monomial for TensorMonomial {
    fn from_factors(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Result<Self> {
        Self::new(d, mult, factors)
    }
    fn factors(&self) -> &[ExteriorMonomial] {
        &self.factors
    }
    fn d(&self) -> usize {
        self.d
    }
    fn mult(&self) -> usize {
        self.mult
    }
}

/// Sorts factors into the canonical nondecreasing order used for `P_Σ`.
pub fn canonicalize(mut factors: Vec<ExteriorMonomial>) -> Result<Vec<ExteriorMonomial>> {
    if let Some(first) = factors.first() {
        let (w, a) = (first.width(), first.alphabet());
        if let Some(bad) = factors.iter().find(|f| f.width() != w || f.alphabet() != a) {
            return Err(Error::Shape(format!("inhomogeneous factor {bad} among width-{w} factors")));
        }
    }
    factors.sort();
    Ok(factors)
}

/// A monomial of `Sym^n(∧^d k^{Md})`, stored by its sorted representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMonomial(TensorMonomial);

impl SymMonomial {
    pub fn new(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Result<Self> {
        check_factors(d, mult, &factors)?;
        Ok(Self(TensorMonomial { d, mult, factors: canonicalize(factors)? }))
    }

    pub fn from_lists(d: usize, mult: usize, lists: &[Vec<u32>]) -> Result<Self> {
        Self::new(d, mult, parse_factors(d, mult, lists)?)
    }

    /// Caller guarantees the factors are valid; they are sorted here.
    pub(crate) fn from_parts(d: usize, mult: usize, mut factors: Vec<ExteriorMonomial>) -> Self {
        factors.sort();
        Self(TensorMonomial { d, mult, factors })
    }

    pub fn unit(d: usize, mult: usize) -> Self {
        Self(TensorMonomial::unit(d, mult))
    }

    pub fn as_tensor(&self) -> &TensorMonomial {
        &self.0
    }

    /// Number of distinct orderings of the factors, `n! / ∏ mult_i!`.
    pub fn orbit_size(&self) -> usize {
        let f = &self.0.factors;
        let mut size = 1usize;
        let mut run = 0usize;
        for (k, _) in f.iter().enumerate() {
            run = if k > 0 && f[k] == f[k - 1] { run + 1 } else { 1 };
            size = size * (k + 1) / run;
        }
        size
    }
}

impl Monomial for SymMonomial {
    fn from_factors(d: usize, mult: usize, factors: Vec<ExteriorMonomial>) -> Result<Self> {
        Self::new(d, mult, factors)
    }
    fn factors(&self) -> &[ExteriorMonomial] {
        &self.0.factors
    }
    fn d(&self) -> usize {
        self.0.d
    }
    fn mult(&self) -> usize {
        self.0.mult
    }
}

/// A finite linear combination of monomials of a single bidegree. The zero
/// element keeps its bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combination<K: Monomial> {
    bidegree: Bidegree,
    terms: BTreeMap<K, Rational>,
}

pub type Element = Combination<TensorMonomial>;
pub type SymElement = Combination<SymMonomial>;

impl<K: Monomial> Combination<K> {
    pub fn zero(bidegree: Bidegree) -> Self {
        Self { bidegree, terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: K, c: Rational) -> Self {
        let mut out = Self::zero(m.bidegree());
        out.add_term(m, c);
        out
    }

    pub fn unit(d: usize, mult: usize) -> Self
    where
        K: Monomial,
    {
        Self::from_monomial(
            K::from_factors(d, mult, Vec::new()).expect("empty factor list is valid"),
            Rational::one(),
        )
    }

    pub fn from_terms(bidegree: Bidegree, terms: impl IntoIterator<Item = (K, Rational)>) -> Result<Self> {
        let mut out = Self::zero(bidegree);
        for (m, c) in terms {
            if m.bidegree() != bidegree {
                return Err(Error::BidegreeMismatch(m.bidegree(), bidegree));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn bidegree(&self) -> Bidegree {
        self.bidegree
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

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<K, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: &K) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c·m` in place. The caller is responsible for `m` having this
    /// element's bidegree.
    pub fn add_term(&mut self, m: K, c: Rational) {
        debug_assert_eq!(m.bidegree(), self.bidegree);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    /// `self + c·other`.
    pub fn add_scale(&self, other: &Self, c: &Rational) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled_in_place(other, c)?;
        Ok(out)
    }

    pub fn add_scaled_in_place(&mut self, other: &Self, c: &Rational) -> Result<()> {
        if self.bidegree != other.bidegree {
            return Err(Error::BidegreeMismatch(self.bidegree, other.bidegree));
        }
        if c.is_zero() {
            return Ok(());
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.bidegree);
        }
        Self {
            bidegree: self.bidegree,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(rational::coeff_bits).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> ElementJson {
        let b = self.bidegree;
        ElementJson {
            bidegree: [b.d, b.n, b.mult],
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { coeff: rational::to_fraction_string(c), monomial: m.index_lists() })
                .collect(),
        }
    }

    pub fn from_json(json: &ElementJson) -> Result<Self> {
        let [d, n, mult] = json.bidegree;
        let bidegree = Bidegree::new(d, n, mult);
        let mut out = Self::zero(bidegree);
        for t in &json.terms {
            if t.monomial.len() != n {
                return Err(Error::Shape(format!("monomial of length {} in bidegree {bidegree}", t.monomial.len())));
            }
            let m = K::from_factors(d, mult, parse_factors(d, mult, &t.monomial)?)?;
            out.add_term(m, rational::parse_fraction(&t.coeff)?);
        }
        Ok(out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("element JSON is always serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.factors.iter().try_for_each(|w| write!(f, "{w}"))
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<K: Monomial> fmt::Display for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for w in m.factors() {
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub bidegree: [usize; 3],
    pub terms: Vec<TermJson>,
}
