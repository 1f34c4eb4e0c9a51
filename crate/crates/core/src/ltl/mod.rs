//! LTL syntax, normal forms, the af derivative and benchmark patterns.

mod af;
mod formula;
mod nnf;
mod parse;
mod patterns;
mod semantics;

pub use af::{af_clause, af_step, af_word, clause_formula, dnf, mk_and, mk_or, prop_equiv, Clause};
pub use formula::{AtomSet, DisplayLtl, Ltl, MAX_ATOMS};
pub use nnf::{is_cosafety, is_nnf, to_nnf};
pub use parse::{parse, parse_extending, parse_with};
pub use patterns::{gen_pattern, Family};
pub use semantics::eval_lasso;
