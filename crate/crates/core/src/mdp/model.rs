use num_traits::{One, Zero};

use crate::automata::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    /// Label of the state-action pair.
    pub letter: Letter,
    /// Successor distribution, sorted by successor and duplicate-free.
    pub succ: Vec<(usize, Rational)>,
}

/// A finite MDP whose state-action pairs are labelled with letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdp {
    alphabet: Alphabet,
    initial: usize,
    actions: Vec<Vec<Action>>,
}

impl Mdp {
    /// Validates and normalises the model: every state needs an action,
    /// action names are unique per state, labels fit the alphabet and each
    /// distribution is positive and sums to one. Repeated successors are
    /// merged.
    pub fn new(alphabet: Alphabet, initial: usize, actions: Vec<Vec<Action>>) -> Result<Self> {
        let n = actions.len();
        let invalid = |msg: String| Err(Error::InvalidMdp(msg));
        if initial >= n {
            return invalid(format!("initial state {initial} out of range"));
        }
        let mut actions = actions;
        for (s, acts) in actions.iter_mut().enumerate() {
            if acts.is_empty() {
                return invalid(format!("state {s} has no action"));
            }
            for (i, a) in acts.iter().enumerate() {
                if acts[..i].iter().any(|b| b.name == a.name) {
                    return invalid(format!("state {s} repeats action '{}'", a.name));
                }
            }
            for a in acts.iter_mut() {
                if a.letter as usize >= alphabet.letter_count() {
                    return invalid(format!("label of ({s}, {}) outside the alphabet", a.name));
                }
                a.succ.sort_by_key(|(t, _)| *t);
                let mut merged: Vec<(usize, Rational)> = Vec::with_capacity(a.succ.len());
                for (t, p) in a.succ.drain(..) {
                    if t >= n {
                        return invalid(format!("successor {t} of ({s}, {}) out of range", a.name));
                    }
                    if p <= Rational::zero() {
                        return invalid(format!("non-positive probability at ({s}, {})", a.name));
                    }
                    match merged.last_mut() {
                        Some((u, q)) if *u == t => *q += p,
                        _ => merged.push((t, p)),
                    }
                }
                let total: Rational = merged.iter().map(|(_, p)| p.clone()).sum();
                if !total.is_one() {
                    return invalid(format!("probabilities of ({s}, {}) sum to {total}", a.name));
                }
                a.succ = merged;
            }
        }
        Ok(Mdp {
            alphabet,
            initial,
            actions,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self, s: usize) -> &[Action] {
        &self.actions[s]
    }

    pub fn num_actions(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    /// `M'`: every action `a` becomes `a#1 .. a#k`, the `i`-th copy labelled
    /// with index `i`. Already indexed labels `(σ, j)` get index `(j-1)·k + i`.
    pub fn indexed(&self, k: u32) -> Mdp {
        assert!(k >= 1);
        let alphabet = self.alphabet.extend_index(k);
        let actions = self
            .actions
            .iter()
            .map(|acts| {
                acts.iter()
                    .flat_map(|a| {
                        (1..=k).map(move |i| Action {
                            name: format!("{}#{i}", a.name),
                            letter: a.letter * k + (i - 1),
                            succ: a.succ.clone(),
                        })
                    })
                    .collect()
            })
            .collect();
        Mdp {
            alphabet,
            initial: self.initial,
            actions,
        }
    }
}
