//! Exact computer algebra for the shuffle-star algebra
//! `P_M = ⊕_{d,n} (∧^d k^{Md})^{⊗n}`, its symmetric-group invariants and
//! coinvariants, the reading-list divisibility poset, and join/secant ideals of
//! Plücker-embedded Grassmannians.
//!
//! All arithmetic is over the rationals; nothing here touches floating point.

pub mod element;
pub mod enumerate;
pub mod error;
pub mod exterior;
pub mod ideals;
pub mod join;
pub mod linalg;
pub mod plucker;
pub mod poset;
pub mod probe;
pub mod products;
pub mod rational;
pub mod symmetry;
pub mod verify;

pub use element::{Bidegree, Element, SymElement, SymMonomial, TensorMonomial};
pub use error::{Error, Result};
pub use exterior::ExteriorMonomial;
pub use products::{IncFn, Split};
pub use rational::Rational;
