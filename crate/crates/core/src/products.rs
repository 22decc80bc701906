//! The shuffle product `·_σ` and star product `∗_g`, on `P` and on `P_Σ`.

use itertools::Itertools;
use crate::element::{Bidegree, Combination, Element, Monomial, SymElement, SymMonomial, TensorMonomial};
use crate::error::{Error, Result};
use crate::exterior::{merge_signed, ExteriorMonomial};
use crate::rational::{self, Rational};

/// An increasing injection `[a] → [b]`, stored by its image.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncFn {
    codomain: usize,
    image: Vec<u32>,
}

impl IncFn {
    pub fn new(codomain: usize, image: Vec<u32>) -> Result<Self> {
        if image.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(image));
        }
        if let Some(&bad) = image.iter().find(|&&i| i == 0 || i as usize > codomain) {
            return Err(Error::IndexOutOfRange { index: bad, bound: codomain });
        }
        Ok(Self { codomain, image })
    }

    pub(crate) fn from_sorted(codomain: usize, image: Vec<u32>) -> Self {
        Self { codomain, image }
    }

    pub fn identity(n: usize) -> Self {
        Self { codomain: n, image: (1..=n as u32).collect() }
    }

    pub fn domain(&self) -> usize {
        self.image.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn apply(&self, i: u32) -> Result<u32> {
        match (i as usize).checked_sub(1).and_then(|k| self.image.get(k)) {
            Some(&v) => Ok(v),
            None => Err(Error::IndexOutOfRange { index: i, bound: self.domain() }),
        }
    }

    /// `[b] ∖ g([a])` as an increasing map `[b − a] → [b]`.
    pub fn complement(&self) -> Self {
        let mut image = Vec::with_capacity(self.codomain - self.domain());
        let mut taken = self.image.iter().peekable();
        for v in 1..=self.codomain as u32 {
            if taken.peek() == Some(&&v) {
                taken.next();
            } else {
                image.push(v);
            }
        }
        Self { codomain: self.codomain, image }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &IncFn) -> Result<Self> {
        if inner.codomain != self.domain() {
            return Err(Error::Shape(format!(
                "cannot compose [{}]→[{}] after [{}]→[{}]",
                self.domain(),
                self.codomain,
                inner.domain(),
                inner.codomain
            )));
        }
        let image = inner.image.iter().map(|&i| self.image[i as usize - 1]).collect();
        Ok(Self { codomain: self.codomain, image })
    }
}

/// The left positions `{i_1 < ⋯ < i_n}` of a split of `[n+m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    total: usize,
    left: Vec<u32>,
}

impl Split {
    pub fn new(total: usize, left: Vec<u32>) -> Result<Self> {
        let g = IncFn::new(total, left)?;
        Ok(Self { total, left: g.image })
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn left(&self) -> &[u32] {
        &self.left
    }

    pub fn right(&self) -> Vec<u32> {
        IncFn::from_sorted(self.total, self.left.clone()).complement().image
    }
}

fn signed(c: Rational, sign: i8) -> Rational {
    if sign < 0 {
        -c
    } else {
        c
    }
}

/// Extends a monomial-level product bilinearly.
fn bilinear<A: Monomial, B: Monomial, C: Monomial>(
    f: &Combination<A>,
    h: &Combination<B>,
    out: Bidegree,
    mut op: impl FnMut(&A, &B, &mut Combination<C>, &Rational) -> Result<()>,
) -> Result<Combination<C>> {
    let mut acc = Combination::zero(out);
    for (mf, cf) in f.terms() {
        for (mh, ch) in h.terms() {
            op(mf, mh, &mut acc, &(cf * ch))?;
        }
    }
    Ok(acc)
}

fn check_shuffle_shapes(f: Bidegree, h: Bidegree) -> Result<()> {
    if f.d != h.d || f.mult != h.mult {
        return Err(Error::Shape(format!("shuffle needs matching d and M, got {f} and {h}")));
    }
    Ok(())
}

/// Places the factors of `u` at the left positions of `sigma` and those of
/// `v` at the remaining ones.
pub fn shuffle_monomials(u: &TensorMonomial, v: &TensorMonomial, sigma: &Split) -> Result<TensorMonomial> {
    check_shuffle_shapes(u.bidegree(), v.bidegree())?;
    if sigma.total != u.n() + v.n() || sigma.left.len() != u.n() {
        return Err(Error::Shape(format!(
            "split of [{}] with {} left positions does not fit lengths {} and {}",
            sigma.total,
            sigma.left.len(),
            u.n(),
            v.n()
        )));
    }
    let mut factors = Vec::with_capacity(sigma.total);
    let (mut i, mut j) = (0, 0);
    for pos in 1..=sigma.total as u32 {
        if sigma.left.get(i) == Some(&pos) {
            factors.push(u.factor(i).clone());
            i += 1;
        } else {
            factors.push(v.factor(j).clone());
            j += 1;
        }
    }
    Ok(TensorMonomial::from_parts(u.d(), u.mult(), factors))
}

pub fn shuffle_product(f: &Element, h: &Element, sigma: &Split) -> Result<Element> {
    let (bf, bh) = (f.bidegree(), h.bidegree());
    check_shuffle_shapes(bf, bh)?;
    if sigma.total != bf.n + bh.n || sigma.left.len() != bf.n {
        return Err(Error::Shape(format!("split does not fit lengths {} and {}", bf.n, bh.n)));
    }
    bilinear(f, h, Bidegree::new(bf.d, bf.n + bh.n, bf.mult), |u, v, acc, c| {
        acc.add_term(shuffle_monomials(u, v, sigma)?, c.clone());
        Ok(())
    })
}

fn check_star_shapes(f: Bidegree, h: Bidegree, g: &IncFn) -> Result<Bidegree> {
    if f.n != h.n || f.mult != h.mult {
        return Err(Error::Shape(format!("star product needs matching n and M, got {f} and {h}")));
    }
    let (from, to) = (f.mult * f.d, f.mult * (f.d + h.d));
    if g.domain() != from || g.codomain() != to {
        return Err(Error::Shape(format!(
            "g must map [{from}] → [{to}], got [{}] → [{}]",
            g.domain(),
            g.codomain()
        )));
    }
    Ok(Bidegree::new(f.d + h.d, f.n, f.mult))
}

/// Relabels every factor by `g`, keeping raw index lists.
fn relabel_all(m: &[ExteriorMonomial], g: &IncFn) -> Vec<Vec<u32>> {
    m.iter()
        .map(|w| w.indices().iter().map(|&i| g.image[i as usize - 1]).collect())
        .collect()
}

/// Slot-wise `g(f_k) ∧ g^c(h_k)` for already relabeled factors, in the given
/// pairing order of the left factors.
fn star_slots(fl: &[&Vec<u32>], hl: &[Vec<u32>], alphabet: usize) -> Option<(i8, Vec<ExteriorMonomial>)> {
    let mut sign = 1i8;
    let mut out = Vec::with_capacity(hl.len());
    for (a, b) in fl.iter().zip(hl) {
        let (s, w) = merge_signed(a, b)?;
        sign *= s;
        out.push(ExteriorMonomial::from_sorted(alphabet, w));
    }
    Some((sign, out))
}

/// `f ∗_g h` on monomials: `None` when some slot vanishes.
pub fn star_monomials(f: &TensorMonomial, h: &TensorMonomial, g: &IncFn) -> Result<Option<(i8, TensorMonomial)>> {
    let out = check_star_shapes(f.bidegree(), h.bidegree(), g)?;
    let gc = g.complement();
    let fl = relabel_all(f.factors(), g);
    let hl = relabel_all(h.factors(), &gc);
    let refs: Vec<&Vec<u32>> = fl.iter().collect();
    Ok(star_slots(&refs, &hl, out.alphabet())
        .map(|(s, w)| (s, TensorMonomial::from_parts(out.d, out.mult, w))))
}

pub fn star_product(f: &Element, h: &Element, g: &IncFn) -> Result<Element> {
    let out = check_star_shapes(f.bidegree(), h.bidegree(), g)?;
    bilinear(f, h, out, |u, v, acc, c| {
        if let Some((s, m)) = star_monomials(u, v, g)? {
            acc.add_term(m, signed(c.clone(), s));
        }
        Ok(())
    })
}

/// `f ∗_g h` on `P_Σ`: `(1/n!) Σ_ρ ∏_k g(f_{ρ(k)}) ∧ g^c(h_k)`, canonicalized.
pub fn sym_star(f: &SymElement, h: &SymElement, g: &IncFn) -> Result<SymElement> {
    let out = check_star_shapes(f.bidegree(), h.bidegree(), g)?;
    let gc = g.complement();
    let n = out.n;
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let weight = Rational::new(1.into(), rational::factorial(n));
    let hs: Vec<(Vec<Vec<u32>>, &Rational)> = h.terms().map(|(m, c)| (relabel_all(m.factors(), &gc), c)).collect();
    let mut acc = SymElement::zero(out);
    for (mf, cf) in f.terms() {
        let fl = relabel_all(mf.factors(), g);
        for (hl, ch) in &hs {
            let c = cf * *ch * &weight;
            for p in &perms {
                let order: Vec<&Vec<u32>> = p.iter().map(|&k| &fl[k]).collect();
                if let Some((s, w)) = star_slots(&order, hl, out.alphabet()) {
                    acc.add_term(SymMonomial::from_parts(out.d, out.mult, w), signed(c.clone(), s));
                }
            }
        }
    }
    Ok(acc)
}

/// The commutative product on `P_Σ`: multiset union of factors.
pub fn sym_shuffle(f: &SymElement, h: &SymElement) -> Result<SymElement> {
    let (bf, bh) = (f.bidegree(), h.bidegree());
    check_shuffle_shapes(bf, bh)?;
    bilinear(f, h, Bidegree::new(bf.d, bf.n + bh.n, bf.mult), |u, v, acc, c| {
        let factors = u.factors().iter().chain(v.factors()).cloned().collect();
        acc.add_term(SymMonomial::from_parts(bf.d, bf.mult, factors), c.clone());
        Ok(())
    })
}

pub fn sym_monomial_product(u: &SymMonomial, v: &SymMonomial) -> SymMonomial {
    let factors = u.factors().iter().chain(v.factors()).cloned().collect();
    SymMonomial::from_parts(u.d(), u.mult(), factors)
}

/// `Σ_σ f ·_σ h` over every split, on arbitrary tensors.
pub fn shuffle_sum(f: &Element, h: &Element) -> Result<Element> {
    let (bf, bh) = (f.bidegree(), h.bidegree());
    check_shuffle_shapes(bf, bh)?;
    let mut acc = Element::zero(Bidegree::new(bf.d, bf.n + bh.n, bf.mult));
    let one = rational::int(1);
    for sigma in crate::enumerate::splits(bf.n + bh.n, bf.n) {
        acc.add_scaled_in_place(&shuffle_product(f, h, &sigma)?, &one)?;
    }
    Ok(acc)
}

/// The product on invariant tensors: the sum of `f ·_σ h` over every split.
pub fn invariant_shuffle(f: &Element, h: &Element) -> Result<Element> {
    if !crate::symmetry::is_invariant(f) || !crate::symmetry::is_invariant(h) {
        return Err(Error::NotInvariant);
    }
    shuffle_sum(f, h)
}

/// Pieces for rewriting `(f ·_σ b) ∗_g a` without touching `f`: returns `p`
/// and `h` with `(f ·_σ b) ∗_g a = (f ∗_g p) ·_σ h` for every `f` of the
/// matching shape. `p` collects the slots of `a` at the left positions of
/// `σ`, and `h = b ∗_g a_R` the rest.
pub fn associativity_witness(
    b: &TensorMonomial,
    a: &TensorMonomial,
    sigma: &Split,
    g: &IncFn,
) -> Result<(TensorMonomial, Element)> {
    if a.n() != sigma.total || b.n() + sigma.left.len() != sigma.total {
        return Err(Error::Shape("witness needs a of length n+m and b of length m".into()));
    }
    let right = sigma.right();
    let pick = |pos: &[u32]| pos.iter().map(|&k| a.factor(k as usize - 1).clone()).collect::<Vec<_>>();
    let p = TensorMonomial::from_parts(a.d(), a.mult(), pick(&sigma.left));
    let a_right = TensorMonomial::from_parts(a.d(), a.mult(), pick(&right));
    let out = check_star_shapes(b.bidegree(), a_right.bidegree(), g)?;
    let mut h = Element::zero(out);
    if let Some((s, m)) = star_monomials(b, &a_right, g)? {
        h.add_term(m, signed(rational::int(1), s));
    }
    Ok((p, h))
}
