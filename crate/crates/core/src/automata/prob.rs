use num_traits::{One, Zero};

use super::alphabet::{Alphabet, Letter};
use super::automaton::{AcceptanceKind, Automaton};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbEdge {
    pub to: usize,
    pub prob: Rational,
    pub marked: bool,
}

/// Probabilistic Büchi automaton: each (state, letter) carries a distribution
/// over successors, and marked transitions are accepting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbAutomaton {
    alphabet: Alphabet,
    initial: usize,
    trans: Vec<Vec<Vec<ProbEdge>>>,
}

impl ProbAutomaton {
    /// Checks that every (state, letter) distribution is positive, sums to one
    /// and has no repeated successor.
    pub fn new(alphabet: Alphabet, initial: usize, trans: Vec<Vec<Vec<ProbEdge>>>) -> Result<Self> {
        let n = trans.len();
        if initial >= n {
            return Err(Error::InvalidAutomaton("initial state out of range".into()));
        }
        for (q, per_letter) in trans.iter().enumerate() {
            if per_letter.len() != alphabet.letter_count() {
                return Err(Error::InvalidAutomaton(format!(
                    "state {q} has {} letter rows, expected {}",
                    per_letter.len(),
                    alphabet.letter_count()
                )));
            }
            for (l, dist) in per_letter.iter().enumerate() {
                let mut sum = Rational::zero();
                let mut seen = Vec::with_capacity(dist.len());
                for e in dist {
                    if e.to >= n {
                        return Err(Error::InvalidAutomaton(format!(
                            "successor {} of state {q} out of range",
                            e.to
                        )));
                    }
                    if e.prob <= Rational::zero() {
                        return Err(Error::InvalidAutomaton(format!(
                            "non-positive probability at state {q}, letter {l}"
                        )));
                    }
                    if seen.contains(&e.to) {
                        return Err(Error::InvalidAutomaton(format!(
                            "repeated successor {} at state {q}, letter {l}",
                            e.to
                        )));
                    }
                    seen.push(e.to);
                    sum += &e.prob;
                }
                if !sum.is_one() {
                    return Err(Error::InvalidAutomaton(format!(
                        "probabilities at state {q}, letter {l} sum to {sum}"
                    )));
                }
            }
        }
        Ok(ProbAutomaton {
            alphabet,
            initial,
            trans,
        })
    }

    /// Resolves every nondeterministic choice uniformly. The automaton must be
    /// a complete Büchi or co-Büchi automaton; co-Büchi marks are kept as they
    /// are, so callers convert kinds first when they need Büchi semantics.
    pub fn uniform(a: &Automaton) -> Result<Self> {
        if a.kind() == AcceptanceKind::Finite {
            return Err(Error::WrongKind {
                expected: "Büchi or co-Büchi",
                found: a.kind().name(),
            });
        }
        if !a.is_complete() {
            return Err(Error::NotComplete);
        }
        let trans = a
            .states()
            .map(|q| {
                a.alphabet()
                    .letters()
                    .map(|l| {
                        let succ = a.succ(q, l);
                        let p = Rational::new(1.into(), (succ.len() as i64).into());
                        succ.iter()
                            .map(|e| ProbEdge {
                                to: e.to,
                                prob: p.clone(),
                                marked: e.marked,
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ProbAutomaton::new(a.alphabet().clone(), a.initial(), trans)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn succ(&self, q: usize, letter: Letter) -> &[ProbEdge] {
        &self.trans[q][letter as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, &ProbEdge)> + '_ {
        self.trans.iter().enumerate().flat_map(|(q, per_letter)| {
            per_letter
                .iter()
                .enumerate()
                .flat_map(move |(l, es)| es.iter().map(move |e| (q, l as Letter, e)))
        })
    }

    pub fn marked_count(&self) -> usize {
        self.edges().filter(|(_, _, e)| e.marked).count()
    }

    /// The underlying Büchi automaton (support of every distribution).
    pub fn support(&self) -> Automaton {
        let mut a = Automaton::new(
            self.alphabet.clone(),
            AcceptanceKind::Buchi,
            self.num_states(),
            self.initial,
        );
        for (q, l, e) in self.edges() {
            a.add_edge(q, l, e.to, e.marked);
        }
        a
    }
}
