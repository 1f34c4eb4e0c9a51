//! Explicit-alphabet ω-automata with transition-based acceptance.

mod alphabet;
mod automaton;
mod hoa;
mod lasso;
mod oracles;
mod prob;

pub use alphabet::{Alphabet, Letter};
pub use automaton::{AcceptanceKind, Automaton, Edge};
pub use hoa::{hoa_export, hoa_import};
pub use lasso::LassoWord;
pub use oracles::{
    containment_matrix, dcw_contained, dcw_counterexample, lasso_member, pa_lasso_prob,
    state_lang_equiv,
};
pub use prob::{ProbAutomaton, ProbEdge};
