use std::collections::{HashMap, VecDeque};

use super::model::Mdp;
use crate::automata::{AcceptanceKind, Alphabet, Automaton, ProbAutomaton};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductKind {
    /// Actions pick an MDP action and a successor index of the automaton.
    NbaIndexed,
    /// The automaton moves randomly alongside the MDP.
    PaRandom,
    /// Product with a deterministic automaton whose acceptance is supplied
    /// separately.
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEdge {
    pub to: usize,
    pub prob: Rational,
    pub marked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductAction {
    /// Position of the MDP action in its state's action list.
    pub action: usize,
    /// 1-based automaton successor index; always 1 for random products.
    pub index: u32,
    pub succ: Vec<ProductEdge>,
}

/// Reachable part of an MDP-automaton product. State 0 is the initial state.
#[derive(Debug, Clone)]
pub struct ProductMdp {
    pub kind: ProductKind,
    pub states: Vec<(usize, usize)>,
    pub actions: Vec<Vec<ProductAction>>,
}

impl ProductMdp {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    pub fn num_edges(&self) -> usize {
        self.actions.iter().flatten().map(|a| a.succ.len()).sum()
    }

    /// Human-readable action name, e.g. `go` or `go[2]` when the automaton
    /// offers several successors for the same MDP action.
    pub fn action_label(&self, m: &Mdp, state: usize, a: usize) -> String {
        let act = &self.actions[state][a];
        let name = &m.actions(self.states[state].0)[act.action].name;
        let siblings = self.actions[state]
            .iter()
            .filter(|b| b.action == act.action)
            .count();
        if siblings > 1 {
            format!("{name}[{}]", act.index)
        } else {
            name.clone()
        }
    }

    /// Successor lists without probabilities, one per action.
    pub fn action_graph(&self) -> Vec<Vec<Vec<usize>>> {
        self.actions
            .iter()
            .map(|acts| {
                acts.iter()
                    .map(|a| a.succ.iter().map(|e| e.to).collect())
                    .collect()
            })
            .collect()
    }

    /// Distributions without marks, one per action.
    pub fn distributions(&self) -> Vec<Vec<Vec<(usize, Rational)>>> {
        self.actions
            .iter()
            .map(|acts| {
                acts.iter()
                    .map(|a| a.succ.iter().map(|e| (e.to, e.prob.clone())).collect())
                    .collect()
            })
            .collect()
    }
}

fn check_alphabets(m: &Alphabet, a: &Alphabet) -> Result<()> {
    if m.atoms() != a.atoms() || m.index_arity() != a.index_arity() {
        return Err(Error::AlphabetMismatch(format!(
            "MDP over {m}, automaton over {a}"
        )));
    }
    Ok(())
}

struct Builder {
    index: HashMap<(usize, usize), usize>,
    states: Vec<(usize, usize)>,
    queue: VecDeque<usize>,
}

impl Builder {
    fn new(start: (usize, usize)) -> Self {
        let mut b = Builder {
            index: HashMap::new(),
            states: Vec::new(),
            queue: VecDeque::new(),
        };
        b.id(start);
        b
    }

    fn id(&mut self, s: (usize, usize)) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.states.len();
        self.states.push(s);
        self.index.insert(s, i);
        self.queue.push_back(i);
        i
    }
}

/// `M ⊗ A` for a Büchi automaton `A`, which is completed first. From
/// `(s, q)`, action `(a, i)` exists for every `i ≤ |δ(q, λ(s, a))|` and moves
/// to `(s', q_i)` where `q_i` is the `i`-th successor in ascending order.
pub fn product_nba(m: &Mdp, a: &Automaton) -> Result<ProductMdp> {
    check_alphabets(m.alphabet(), a.alphabet())?;
    if a.kind() != AcceptanceKind::Buchi {
        return Err(Error::WrongKind {
            expected: "Büchi",
            found: a.kind().name(),
        });
    }
    let a = a.complete();
    let mut b = Builder::new((m.initial(), a.initial()));
    let mut actions = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        let (s, q) = b.states[i];
        let mut acts = Vec::new();
        for (ai, act) in m.actions(s).iter().enumerate() {
            for (k, e) in a.succ(q, act.letter).iter().enumerate() {
                let succ = act
                    .succ
                    .iter()
                    .map(|(t, p)| ProductEdge {
                        to: b.id((*t, e.to)),
                        prob: p.clone(),
                        marked: e.marked,
                    })
                    .collect();
                acts.push(ProductAction {
                    action: ai,
                    index: k as u32 + 1,
                    succ,
                });
            }
        }
        actions.push(acts);
    }
    Ok(ProductMdp {
        kind: ProductKind::NbaIndexed,
        states: b.states,
        actions,
    })
}

/// `M ⊗ P`: the automaton resolves its own choices randomly, so every product
/// action corresponds to exactly one MDP action.
pub fn product_pa(m: &Mdp, pa: &ProbAutomaton) -> Result<ProductMdp> {
    check_alphabets(m.alphabet(), pa.alphabet())?;
    let mut b = Builder::new((m.initial(), pa.initial()));
    let mut actions = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        let (s, q) = b.states[i];
        let acts = m
            .actions(s)
            .iter()
            .enumerate()
            .map(|(ai, act)| {
                let mut succ = Vec::new();
                for (t, p) in &act.succ {
                    for e in pa.succ(q, act.letter) {
                        succ.push(ProductEdge {
                            to: b.id((*t, e.to)),
                            prob: p * &e.prob,
                            marked: e.marked,
                        });
                    }
                }
                ProductAction {
                    action: ai,
                    index: 1,
                    succ,
                }
            })
            .collect();
        actions.push(acts);
    }
    Ok(ProductMdp {
        kind: ProductKind::PaRandom,
        states: b.states,
        actions,
    })
}

/// Product with a complete deterministic automaton; acceptance marks are
/// ignored and every edge is unmarked.
pub fn product_deterministic(m: &Mdp, d: &Automaton) -> Result<ProductMdp> {
    check_alphabets(m.alphabet(), d.alphabet())?;
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if !d.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut p = product_nba(m, &d.with_kind(AcceptanceKind::Buchi))?;
    for e in p
        .actions
        .iter_mut()
        .flatten()
        .flat_map(|a| a.succ.iter_mut())
    {
        e.marked = false;
    }
    p.kind = ProductKind::Quotient;
    Ok(p)
}
