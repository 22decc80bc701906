//! Which degrees of a secant ideal need new generators.

use std::sync::Arc;
use std::time::{Duration, Instant};

use log::info;
use serde::Serialize;

use crate::element::SymElement;
use crate::error::Result;
use crate::ideals::{ComponentStore, DiIdeal, Subspace};
use crate::join::secant_ideal;
use crate::plucker::{GrassmannConfig, PluckerIdeal};

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub d: usize,
    pub n: usize,
    pub dim: usize,
    pub from_below: usize,
    pub new_generators: usize,
    /// Basis vectors of the generated part that fall outside the component;
    /// nonzero means the closure left the ideal.
    pub escaped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub config: GrassmannConfig,
    pub max_n: usize,
    pub rows: Vec<ProbeRow>,
    /// Largest `n` that needed a new generator.
    pub flagged_degree: Option<usize>,
    pub generator_degrees: Vec<usize>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped: Option<String>,
    #[serde(skip)]
    pub generators: Vec<SymElement>,
}

#[derive(Clone, Debug, Default)]
pub struct ProbeLimits {
    pub time: Option<Duration>,
    pub max_coeff_bits: Option<u64>,
}

/// For `n = 1..=max_n` and `d' = 1..=d`, compares `(I^{⋆(r+1)})_{d',n}` for
/// the Plücker ideal `I` with the part generated by what was found before.
pub fn degree_probe(
    cfg: &GrassmannConfig,
    max_n: usize,
    store: Option<Arc<ComponentStore>>,
    limits: &ProbeLimits,
) -> Result<ProbeReport> {
    let start = Instant::now();
    let mut base = PluckerIdeal::new(cfg.mult);
    if let Some(s) = &store {
        base = base.with_store(s.clone());
    }
    let target = secant_ideal(Arc::new(base), cfg.r, store)?;
    let mut generators: Vec<SymElement> = Vec::new();
    let mut rows = Vec::new();
    let mut stopped = None;
    'outer: for n in 1..=max_n {
        for d in 1..=cfg.d {
            if let Some(t) = limits.time {
                if start.elapsed() > t {
                    stopped = Some(format!("time limit of {}s reached before (d={d}, n={n})", t.as_secs_f64()));
                    break 'outer;
                }
            }
            let component = target.component(d, n)?;
            if let Some(bits) = limits.max_coeff_bits {
                if component.max_coeff_bits() > bits {
                    stopped = Some(format!("coefficient size exceeded {bits} bits at (d={d}, n={n})"));
                    break 'outer;
                }
            }
            let below = DiIdeal::new(cfg.mult, generators.clone())?.compute_component(d, n)?;
            let fresh = new_generators(&component, &below);
            let escaped = below.basis().iter().filter(|v| !component.reduce(v).is_zero()).count();
            info!("probe (d={d}, n={n}): dim {} from below {} new {}", component.dim(), below.dim(), fresh.len());
            rows.push(ProbeRow { d, n, dim: component.dim(), from_below: below.dim(), new_generators: fresh.len(), escaped });
            generators.extend(fresh);
        }
    }
    let mut generator_degrees: Vec<usize> = rows.iter().filter(|r| r.new_generators > 0).map(|r| r.n).collect();
    generator_degrees.dedup();
    Ok(ProbeReport {
        config: *cfg,
        max_n,
        flagged_degree: generator_degrees.last().copied(),
        generator_degrees,
        complete: stopped.is_none(),
        stopped,
        rows,
        generators,
    })
}

/// Basis vectors of `component` completing a basis of `below` inside it,
/// reduced against `below`.
fn new_generators(component: &Subspace, below: &Subspace) -> Vec<SymElement> {
    let mut reduced = Vec::new();
    let mut span = below.clone();
    for v in component.basis() {
        let r = span.reduce(v);
        if !r.is_zero() {
            reduced.push(r);
            let mut all = span.basis().to_vec();
            all.push(reduced.last().expect("just pushed").clone());
            span = Subspace::from_spanning(span.bidegree(), all).expect("same bidegree");
        }
    }
    reduced
}
