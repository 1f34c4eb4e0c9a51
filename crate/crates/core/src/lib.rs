//! Good-for-MDP automata for LTL planning objectives.
//!
//! The crate covers the whole path from a formula to an optimal strategy:
//!
//! * [`ltl`]: parsing, normal forms, the af derivative and benchmark patterns;
//! * [`automata`]: explicit-alphabet automata, HOA interchange and the exact
//!   language oracles (lasso membership, co-Büchi containment, 0/1 checks);
//! * [`gf_direct`]: the direct good-for-MDP construction for `GF φ` with `φ`
//!   co-safety, plus an independent deterministic reference automaton;
//! * [`redux`] and [`gfg_min`]: the four-step reduction from a good-for-MDP
//!   Büchi automaton to a small probabilistic automaton;
//! * [`mdp`]: MDP products, end components, reachability and strategy synthesis.

pub mod automata;
mod error;
pub mod gf_direct;
pub mod gfg_min;
pub mod graph;
pub mod linalg;
pub mod ltl;
pub mod mdp;
pub mod rational;
pub mod redux;

pub use error::{Error, Result};
pub use num_rational::BigRational;

/// Exact rational used for every probability.
pub type Rational = BigRational;
