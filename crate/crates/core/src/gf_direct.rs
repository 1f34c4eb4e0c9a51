//! Direct good-for-MDP Büchi automata for `GF φ` with `φ` co-safety.
//!
//! `φ` is first turned into an NFA whose finite-word language `L` satisfies
//! `L · Σ^ω = [φ]`. The Büchi automaton then runs that NFA but may restart it
//! from the initial state on every step; reaching a final state fires an
//! accepting restart.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automata::{AcceptanceKind, Alphabet, Automaton};
use crate::error::{Error, Result};
use crate::graph::{reachable, transpose};
use crate::ltl::{af_clause, dnf, is_cosafety, to_nnf, AtomSet, Clause, Ltl};

/// NFA for a co-safety formula.
///
/// States are clauses (conjunctions of literals and `X`/`F`/`U` formulas) of
/// af-residuals in disjunctive normal form; reading a letter from a clause
/// moves to each clause of its residual. The empty clause is the single final
/// state and an explicit dead state absorbs empty residuals, so the result is
/// complete. When the formula itself has several clauses, a dedicated initial
/// state branches into all of them.
pub fn cosafety_to_nfa(f: &Ltl, atoms: &AtomSet) -> Result<Automaton> {
    Ok(clause_nfa(f, atoms)?.0)
}

/// Same as [`cosafety_to_nfa`], also returning a printable label per state.
pub fn cosafety_to_nfa_labelled(f: &Ltl, atoms: &AtomSet) -> Result<(Automaton, Vec<String>)> {
    let (nfa, labels) = clause_nfa(f, atoms)?;
    let names = labels
        .into_iter()
        .map(|l| match l {
            StateLabel::Start => "init".to_string(),
            StateLabel::Dead => "ff".to_string(),
            StateLabel::Clause(c) if c.is_empty() => "tt".to_string(),
            StateLabel::Clause(c) => c
                .iter()
                .map(|x| x.display(atoms).to_string())
                .collect::<Vec<_>>()
                .join(" & "),
        })
        .collect();
    Ok((nfa, names))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum StateLabel {
    Start,
    Clause(Clause),
    Dead,
}

fn clause_nfa(f: &Ltl, atoms: &AtomSet) -> Result<(Automaton, Vec<StateLabel>)> {
    if !is_cosafety(f) {
        return Err(Error::NotCoSafety);
    }
    if f.atom_bound() > atoms.len() {
        return Err(Error::InvalidAutomaton(format!(
            "formula uses {} atoms but only {} are declared",
            f.atom_bound(),
            atoms.len()
        )));
    }
    let alphabet = Alphabet::plain(atoms.clone())?;
    let f = to_nnf(f);
    let top = dnf(&f);

    let mut labels: Vec<StateLabel> = Vec::new();
    let mut index: HashMap<StateLabel, usize> = HashMap::new();
    let mut intern = |label: StateLabel, labels: &mut Vec<StateLabel>| -> usize {
        *index.entry(label.clone()).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };
    let init = match top.as_slice() {
        [] => intern(StateLabel::Dead, &mut labels),
        [single] => intern(StateLabel::Clause(single.clone()), &mut labels),
        _ => intern(StateLabel::Start, &mut labels),
    };
    let mut succ: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        let label = labels[i].clone();
        let mut row = Vec::with_capacity(alphabet.letter_count());
        for letter in alphabet.letters() {
            let clauses: Vec<Clause> = match &label {
                StateLabel::Dead => vec![],
                StateLabel::Clause(c) => af_clause(c, letter),
                StateLabel::Start => {
                    let mut all: Vec<Clause> =
                        top.iter().flat_map(|c| af_clause(c, letter)).collect();
                    all.sort();
                    all.dedup();
                    if all.iter().any(Clause::is_empty) {
                        vec![Clause::new()]
                    } else {
                        all
                    }
                }
            };
            let targets: Vec<usize> = if clauses.is_empty() {
                vec![intern(StateLabel::Dead, &mut labels)]
            } else {
                clauses
                    .into_iter()
                    .map(|c| intern(StateLabel::Clause(c), &mut labels))
                    .collect()
            };
            row.push(targets);
        }
        succ.push(row);
        i += 1;
    }

    let mut nfa = Automaton::new(alphabet, AcceptanceKind::Finite, labels.len(), init);
    for (q, row) in succ.iter().enumerate() {
        for (letter, targets) in row.iter().enumerate() {
            for &t in targets {
                nfa.add_edge(q, letter as u32, t, false);
            }
        }
        if labels[q] == StateLabel::Clause(Clause::new()) {
            nfa.set_final(q, true);
        }
    }
    Ok((nfa, labels))
}

fn require_finite(n: &Automaton) -> Result<()> {
    if n.kind() != AcceptanceKind::Finite {
        return Err(Error::WrongKind {
            expected: AcceptanceKind::Finite.name(),
            found: n.kind().name(),
        });
    }
    Ok(())
}

/// States that can reach a final state.
fn co_reachable(n: &Automaton) -> Vec<bool> {
    reachable(&transpose(&n.adjacency()), n.finals())
}

fn universal(alphabet: &Alphabet) -> Automaton {
    let mut a = Automaton::new(alphabet.clone(), AcceptanceKind::Buchi, 1, 0);
    for l in alphabet.letters() {
        a.add_edge(0, l, 0, true);
    }
    a
}

/// The good-for-MDP Büchi automaton for `GF φ` from an NFA for `φ`.
///
/// States are the initial NFA state plus the non-final NFA states that can
/// still reach a final state, restricted to those reachable. Every letter
/// keeps the NFA successors and adds a restart to the initial state, which is
/// accepting exactly when some NFA successor is final. An NFA whose initial
/// state is final yields the one-state universal automaton.
pub fn nfa_to_gfm_gf(n: &Automaton) -> Result<Automaton> {
    require_finite(n)?;
    let q0 = n.initial();
    if n.is_final(q0) {
        return Ok(universal(n.alphabet()));
    }
    let live = co_reachable(n);
    let keep = |q: usize| live[q] && !n.is_final(q);

    let mut id: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order = vec![q0];
    id.insert(q0, 0);
    let mut edges: Vec<(usize, u32, usize, bool)> = Vec::new();
    let mut queue = VecDeque::from([q0]);
    while let Some(q) = queue.pop_front() {
        let from = id[&q];
        for l in n.alphabet().letters() {
            let succ = n.succ(q, l);
            let fires = succ.iter().any(|e| n.is_final(e.to));
            edges.push((from, l, 0, fires));
            for e in succ.iter().filter(|e| keep(e.to)) {
                let next = *id.entry(e.to).or_insert_with(|| {
                    order.push(e.to);
                    queue.push_back(e.to);
                    order.len() - 1
                });
                edges.push((from, l, next, false));
            }
        }
    }
    let mut a = Automaton::new(n.alphabet().clone(), AcceptanceKind::Buchi, order.len(), 0);
    for (from, l, to, marked) in edges {
        a.add_edge(from, l, to, marked);
    }
    Ok(a)
}

/// Deterministic Büchi automaton for `GF φ` by a subset construction that
/// restarts the NFA every step and collapses to `{q0}` with an accepting
/// transition whenever some tracked run completes.
pub fn reset_subset_dba(n: &Automaton) -> Result<Automaton> {
    require_finite(n)?;
    let q0 = n.initial();
    if n.is_final(q0) {
        return Ok(universal(n.alphabet()));
    }
    let live = co_reachable(n);
    let start = vec![q0];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let s = subsets[i].clone();
        for l in n.alphabet().letters() {
            let mut next: Vec<usize> = s.iter().flat_map(|&q| n.succ(q, l)).map(|e| e.to).collect();
            let fires = next.iter().any(|&q| n.is_final(q));
            if fires {
                next = vec![q0];
            } else {
                next.retain(|&q| live[q]);
                next.push(q0);
                next.sort_unstable();
                next.dedup();
            }
            let to = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                subsets.len() - 1
            });
            edges.push((i, l, to, fires));
        }
        i += 1;
    }
    let mut d = Automaton::new(
        n.alphabet().clone(),
        AcceptanceKind::Buchi,
        subsets.len(),
        0,
    );
    for (from, l, to, marked) in edges {
        d.add_edge(from, l, to, marked);
    }
    Ok(d)
}

/// `GF φ` to its direct good-for-MDP automaton.
pub fn ltl_to_gfm_gf(f: &Ltl, atoms: &AtomSet) -> Result<Automaton> {
    let body = f.gf_body().ok_or(Error::NotGfCoSafety)?;
    if !is_cosafety(body) {
        return Err(Error::NotGfCoSafety);
    }
    nfa_to_gfm_gf(&cosafety_to_nfa(body, atoms)?)
}
