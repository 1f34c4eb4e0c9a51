//! Labelled MDPs, their products with automata, and optimal strategies for
//! Büchi objectives.

mod json;
mod mec;
mod model;
mod product;
mod random;
mod reach;
mod synth;

pub use json::{mdp_from_json, mdp_to_json};
pub use mec::{maximal_end_components, mec_decompose, Mec};
pub use model::{Action, Mdp};
pub use product::{
    product_deterministic, product_nba, product_pa, ProductAction, ProductEdge, ProductKind,
    ProductMdp,
};
pub use random::random_mdp;
pub use reach::{max_reach, Dist, Reach, SolveMode, Values, EXACT_LIMIT};
pub use synth::{
    induce_mc, quotient_optimize, solve_nba, solve_pa, strategy_to_json, synthesize,
    QuotientSolution, Solution, Strategy,
};
