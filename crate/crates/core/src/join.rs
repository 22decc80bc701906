//! Joins of ideals of `P_Σ` and secant ideals.
//!
//! `(I ⋆ J)_{d,n}` is the kernel of
//! `(P_Σ)_{d,n} → ⊕_i (P_Σ/I)_{d,i} ⊗ (P_Σ/J)_{d,n−i}` induced by `Δ`.

use std::collections::HashMap;
use std::sync::Arc;

use log::debug;
use rayon::prelude::*;

use crate::element::{Bidegree, Monomial, SymElement, SymMonomial};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::ideals::{sha256_hex, ComponentMemo, ComponentStore, Ideal, Subspace};
use crate::linalg::{kernel_sparse, to_int_row};
use crate::rational::Rational;
use crate::symmetry::delta_monomial;

pub struct Join {
    left: Arc<dyn Ideal>,
    right: Arc<dyn Ideal>,
    fingerprint: String,
    memo: ComponentMemo,
    store: Option<Arc<ComponentStore>>,
}

impl Join {
    pub fn new(left: Arc<dyn Ideal>, right: Arc<dyn Ideal>) -> Result<Self> {
        if left.mult() != right.mult() {
            return Err(Error::Shape(format!("join of ideals with M={} and M={}", left.mult(), right.mult())));
        }
        let fingerprint = sha256_hex(format!("join({},{})", left.fingerprint(), right.fingerprint()).as_bytes());
        Ok(Self { left, right, fingerprint, memo: ComponentMemo::default(), store: None })
    }

    pub fn with_store(mut self, store: Arc<ComponentStore>) -> Self {
        self.store = Some(store);
        self
    }
}

impl Ideal for Join {
    fn mult(&self) -> usize {
        self.left.mult()
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }

    fn component(&self, d: usize, n: usize) -> Result<Arc<Subspace>> {
        let b = Bidegree::new(d, n, self.mult());
        self.memo.get_or_compute(&self.fingerprint, b, self.store.as_deref(), || {
            join_component(self.left.as_ref(), self.right.as_ref(), d, n)
        })
    }
}

/// `I^{⋆(r+1)}`: `r = 0` gives `I` itself.
pub fn secant_ideal(base: Arc<dyn Ideal>, r: usize, store: Option<Arc<ComponentStore>>) -> Result<Arc<dyn Ideal>> {
    let mut current = base.clone();
    for _ in 0..r {
        let mut j = Join::new(base.clone(), current)?;
        if let Some(s) = &store {
            j = j.with_store(s.clone());
        }
        current = Arc::new(j);
    }
    Ok(current)
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

/// Computes one component of `I ⋆ J` directly.
pub fn join_component(i: &dyn Ideal, j: &dyn Ideal, d: usize, n: usize) -> Result<Subspace> {
    if i.mult() != j.mult() {
        return Err(Error::Shape(format!("join of ideals with M={} and M={}", i.mult(), j.mult())));
    }
    let b = Bidegree::new(d, n, i.mult());
    let left: Vec<Arc<Subspace>> = (0..=n).map(|k| i.component(d, k)).collect::<Result<_>>()?;
    let right: Vec<Arc<Subspace>> = (0..=n).map(|k| j.component(d, k)).collect::<Result<_>>()?;

    let start: Vec<SymElement> = if left[0].is_zero() {
        right[n].basis().to_vec()
    } else {
        enumerate::sym_monomials(b).into_iter().map(|m| SymElement::from_monomial(m, one())).collect()
    };
    let homogeneous = left.iter().chain(right.iter()).all(|s| s.is_weight_homogeneous());
    let mut blocks: HashMap<Vec<u16>, Vec<SymElement>> = HashMap::new();
    for v in start {
        let key = if homogeneous {
            v.terms().next().map(|(m, _)| m.weight()).unwrap_or_default()
        } else {
            Vec::new()
        };
        blocks.entry(key).or_default().push(v);
    }
    let mut summands = vec![];
    if n > 0 {
        summands.push(n);
        summands.extend(1..n);
    }
    debug!("join component {b}: {} blocks", blocks.len());
    let blocks: Vec<Vec<SymElement>> = blocks.into_values().collect();
    let kernels: Vec<Vec<SymElement>> = blocks
        .into_par_iter()
        .map(|mut k| {
            for &s in &summands {
                if k.is_empty() {
                    break;
                }
                k = restrict_kernel(k, s, &left[s], &right[n - s]);
            }
            k
        })
        .collect();
    Subspace::from_spanning(b, kernels.into_iter().flatten().collect())
}

/// Vectors in the span of `k` killed by the summand `(P/I)_s ⊗ (P/J)_{n−s}`.
fn restrict_kernel(k: Vec<SymElement>, s: usize, qi: &Subspace, qj: &Subspace) -> Vec<SymElement> {
    let mut qi_memo: HashMap<SymMonomial, SymElement> = HashMap::new();
    let mut qj_memo: HashMap<SymMonomial, SymElement> = HashMap::new();
    let mut rows: HashMap<(SymMonomial, SymMonomial), usize> = HashMap::new();
    let mut equations: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (col, v) in k.iter().enumerate() {
        let mut image: HashMap<(SymMonomial, SymMonomial), Rational> = HashMap::new();
        for (mu, c) in v.terms() {
            for (l, r, w) in delta_monomial(mu, s) {
                let a = qi_memo.entry(l.clone()).or_insert_with(|| qi.quotient_image(&l)).clone();
                let bq = qj_memo.entry(r.clone()).or_insert_with(|| qj.quotient_image(&r));
                let cw = c * Rational::from_integer(w.into());
                for (lm, lc) in a.terms() {
                    for (rm, rc) in bq.terms() {
                        *image.entry((lm.clone(), rm.clone())).or_insert_with(Rational::default) += &cw * lc * rc;
                    }
                }
            }
        }
        for (key, val) in image {
            if val == Rational::default() {
                continue;
            }
            let next = rows.len();
            let row = *rows.entry(key).or_insert(next);
            if row == equations.len() {
                equations.push(Vec::new());
            }
            equations[row].push((col, val));
        }
    }
    if equations.is_empty() {
        return k;
    }
    let eqs = equations.into_iter().map(|mut e| {
        e.sort_by_key(|(c, _)| *c);
        to_int_row(&e)
    });
    kernel_sparse(k.len(), eqs)
        .into_iter()
        .map(|x| {
            let mut out = SymElement::zero(k[0].bidegree());
            for (c, v) in x {
                out.add_scaled_in_place(&k[c], &v).expect("same bidegree");
            }
            out
        })
        .filter(|v| !v.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::DiIdeal;

    #[test]
    fn join_of_zero_ideals_is_zero() {
        let z: Arc<dyn Ideal> = Arc::new(DiIdeal::new(2, vec![]).unwrap());
        let j = Join::new(z.clone(), z).unwrap();
        assert_eq!(j.component(1, 2).unwrap().dim(), 0);
        assert_eq!(j.component(2, 1).unwrap().dim(), 0);
    }

    #[test]
    fn join_with_everything_in_degree_one() {
        let b = Bidegree::new(1, 1, 2);
        let gens: Vec<SymElement> = enumerate::sym_monomials(b)
            .into_iter()
            .map(|m| SymElement::from_monomial(m, one()))
            .collect();
        let all: Arc<dyn Ideal> = Arc::new(DiIdeal::new(2, gens).unwrap());
        let z: Arc<dyn Ideal> = Arc::new(DiIdeal::new(2, vec![]).unwrap());
        let j = Join::new(all.clone(), z).unwrap();
        assert_eq!(j.component(1, 1).unwrap().dim(), 0);
        let jj = Join::new(all.clone(), all).unwrap();
        assert_eq!(jj.component(1, 1).unwrap().dim(), 2);
        assert_eq!(jj.component(1, 2).unwrap().dim(), 3);
    }
}
