use num_traits::{One, Zero};
use serde::Serialize;

use super::mec::{mec_decompose, Mec};
use super::model::Mdp;
use super::product::{product_deterministic, product_nba, product_pa, ProductMdp};
use super::reach::{max_reach, Reach, SolveMode, Values};
use crate::automata::{containment_matrix, AcceptanceKind, Automaton, ProbAutomaton};
use crate::error::{Error, Result};
use crate::graph::{reachable, scc_ids};
use crate::linalg::reach_probabilities;
use crate::rational::format_rational;
use crate::redux::{dba_to_dca, ReduxOutput};
use crate::Rational;

/// Memoryless randomised strategy on a product: for each product state a
/// distribution over its action positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub dist: Vec<Vec<(usize, Rational)>>,
    /// States inside accepting MECs, where the strategy randomises over all
    /// retained actions.
    pub randomising: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub product: ProductMdp,
    pub mecs: Vec<Mec>,
    /// States inside accepting end components.
    pub goal: Vec<bool>,
    pub reach: Reach,
    pub strategy: Strategy,
}

impl Solution {
    /// Exact value at the initial product state, if solved exactly.
    pub fn value(&self) -> Option<Rational> {
        self.reach.values.exact(0).cloned()
    }

    pub fn value_f64(&self) -> f64 {
        self.reach.values.as_f64(0)
    }
}

fn uniform(actions: &[usize]) -> Vec<(usize, Rational)> {
    let p = Rational::new(1.into(), (actions.len() as i64).into());
    actions.iter().map(|&a| (a, p.clone())).collect()
}

/// Maximal probability of visiting marked edges infinitely often: the
/// maximal probability of reaching an accepting MEC. Inside accepting MECs
/// the strategy plays all retained actions uniformly; elsewhere it follows
/// an optimal reachability choice.
pub fn synthesize(product: ProductMdp, mode: SolveMode) -> Result<Solution> {
    let mecs = mec_decompose(&product);
    let n = product.num_states();
    let mut goal = vec![false; n];
    let mut inside: Vec<Option<&[usize]>> = vec![None; n];
    for mec in mecs.iter().filter(|m| m.accepting) {
        for (&s, acts) in mec.states.iter().zip(&mec.actions) {
            goal[s] = true;
            inside[s] = Some(acts);
        }
    }
    let reach = max_reach(&product.distributions(), &goal, mode)?;
    let dist = (0..n)
        .map(|s| match inside[s] {
            Some(acts) => uniform(acts),
            None => vec![(reach.choice[s], Rational::one())],
        })
        .collect();
    let strategy = Strategy {
        dist,
        randomising: goal.clone(),
    };
    Ok(Solution {
        product,
        mecs,
        goal,
        reach,
        strategy,
    })
}

/// Solves `M ⊗ A` for a good-for-MDP Büchi automaton `A`.
pub fn solve_nba(m: &Mdp, a: &Automaton, mode: Option<SolveMode>) -> Result<Solution> {
    let p = product_nba(m, a)?;
    let mode = mode.unwrap_or_else(|| SolveMode::for_size(p.num_states()));
    synthesize(p, mode)
}

/// Solves `M ⊗ P` for a probabilistic automaton `P`.
pub fn solve_pa(m: &Mdp, pa: &ProbAutomaton, mode: Option<SolveMode>) -> Result<Solution> {
    let p = product_pa(m, pa)?;
    let mode = mode.unwrap_or_else(|| SolveMode::for_size(p.num_states()));
    synthesize(p, mode)
}

/// Exact acceptance probability of the Markov chain a strategy induces on a
/// product, computed from scratch: bottom SCCs that use a marked edge with
/// positive probability are accepting.
pub fn induce_mc(p: &ProductMdp, strategy: &Strategy) -> Result<Rational> {
    let n = p.num_states();
    let mut chain: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut marked: Vec<Vec<usize>> = vec![Vec::new(); n];
    let adj_of = |chain: &Vec<Vec<(usize, Rational)>>, s: usize| -> Vec<usize> {
        chain[s].iter().map(|(t, _)| *t).collect()
    };
    for s in 0..n {
        for (a, w) in &strategy.dist[s] {
            if w.is_zero() {
                continue;
            }
            for e in &p.actions[s][*a].succ {
                match chain[s].iter_mut().find(|(t, _)| *t == e.to) {
                    Some((_, q)) => *q += w * &e.prob,
                    None => chain[s].push((e.to, w * &e.prob)),
                }
                if e.marked {
                    marked[s].push(e.to);
                }
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|s| adj_of(&chain, s)).collect();
    let live = reachable(&adj, [0]);
    if let Some(s) = (0..n).find(|&s| live[s] && chain[s].is_empty()) {
        return Err(Error::UndefinedStrategy(s));
    }
    let (comp, count) = scc_ids(&adj);
    let mut bottom = vec![true; count];
    let mut accepting = vec![false; count];
    for s in (0..n).filter(|&s| live[s]) {
        for &t in &adj[s] {
            if comp[t] != comp[s] {
                bottom[comp[s]] = false;
            }
        }
        if marked[s].iter().any(|&t| comp[t] == comp[s]) {
            accepting[comp[s]] = true;
        }
    }
    let target: Vec<bool> = (0..n)
        .map(|s| live[s] && bottom[comp[s]] && accepting[comp[s]])
        .collect();
    Ok(reach_probabilities(&chain, &target)[0].clone())
}

#[derive(Debug, Clone)]
pub struct QuotientSolution {
    /// Deterministic automaton over the language classes of the DBA.
    pub classes: Automaton,
    /// Language class of every DBA state.
    pub class_of: Vec<usize>,
    pub product: ProductMdp,
    pub goal: Vec<bool>,
    pub reach: Reach,
}

impl QuotientSolution {
    pub fn value(&self) -> Option<Rational> {
        self.reach.values.exact(0).cloned()
    }
}

/// Optimises on `M' × R`, where `R` tracks the language class of the
/// deterministic automaton behind `redux`, and the goal is read off the
/// accepting end components of `M' ⊗ PA` through the PA's class labels.
/// `m` must be the indexed MDP over the PA's alphabet.
pub fn quotient_optimize(m: &Mdp, out: &ReduxOutput, mode: SolveMode) -> Result<QuotientSolution> {
    let dba = &out.dba;
    let cm = containment_matrix(&dba_to_dca(dba)?)?;
    let n = dba.num_states();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for q in 0..n {
        if class_of[q] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(q);
        for r in q..n {
            if cm[q][r] && cm[r][q] {
                class_of[r] = c;
            }
        }
    }
    let mut classes = Automaton::new(
        dba.alphabet().clone(),
        AcceptanceKind::Buchi,
        reps.len(),
        class_of[dba.initial()],
    );
    for (c, &q) in reps.iter().enumerate() {
        for l in dba.alphabet().letters() {
            let e = dba.succ(q, l)[0];
            classes.add_edge(c, l, class_of[e.to], false);
        }
    }

    let pa_product = product_pa(m, &out.pa)?;
    let mut good = std::collections::HashSet::new();
    for mec in mec_decompose(&pa_product).iter().filter(|m| m.accepting) {
        for &s in &mec.states {
            let (ms, p) = pa_product.states[s];
            good.insert((ms, class_of[out.rep_of[p]]));
        }
    }
    let product = product_deterministic(m, &classes)?;
    let goal: Vec<bool> = product.states.iter().map(|s| good.contains(s)).collect();
    let reach = max_reach(&product.distributions(), &goal, mode)?;
    Ok(QuotientSolution {
        classes,
        class_of,
        product,
        goal,
        reach,
    })
}

#[derive(Serialize)]
struct ChoiceEntry {
    state: (usize, usize),
    dist: Vec<(String, String)>,
}

#[derive(Serialize)]
struct StrategyFile {
    product_states: Vec<(usize, usize)>,
    choice: Vec<ChoiceEntry>,
}

/// Strategy file: product states in id order and the action distribution of
/// each, with product actions named after their MDP actions.
pub fn strategy_to_json(m: &Mdp, sol: &Solution) -> String {
    let p = &sol.product;
    let choice = (0..p.num_states())
        .map(|s| ChoiceEntry {
            state: p.states[s],
            dist: sol.strategy.dist[s]
                .iter()
                .map(|(a, w)| (p.action_label(m, s, *a), format_rational(w)))
                .collect(),
        })
        .collect();
    let file = StrategyFile {
        product_states: p.states.clone(),
        choice,
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

impl Values {
    /// Exact values, if available.
    pub fn into_exact(self) -> Option<Vec<Rational>> {
        match self {
            Values::Exact(v) => Some(v),
            Values::Approx(_) => None,
        }
    }
}
