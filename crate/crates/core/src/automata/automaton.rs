use std::collections::VecDeque;
use std::fmt;

use super::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::ltl::AtomSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AcceptanceKind {
    /// Accepts runs that take a marked transition infinitely often.
    Buchi,
    /// Accepts runs that take marked transitions only finitely often.
    CoBuchi,
    /// Finite-word acceptance through final states.
    Finite,
}

impl AcceptanceKind {
    pub fn name(self) -> &'static str {
        match self {
            AcceptanceKind::Buchi => "Büchi",
            AcceptanceKind::CoBuchi => "co-Büchi",
            AcceptanceKind::Finite => "finite-word",
        }
    }
}

impl fmt::Display for AcceptanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub to: usize,
    pub marked: bool,
}

/// Explicit-alphabet automaton with transition-based acceptance.
///
/// Successor lists are kept sorted by target and duplicate-free; the position
/// of a successor in its list (1-based) is its choice index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    kind: AcceptanceKind,
    initial: usize,
    trans: Vec<Vec<Vec<Edge>>>,
    finals: Vec<bool>,
}

impl Automaton {
    pub fn new(
        alphabet: Alphabet,
        kind: AcceptanceKind,
        num_states: usize,
        initial: usize,
    ) -> Self {
        assert!(initial < num_states.max(1), "initial state out of range");
        let letters = alphabet.letter_count();
        Automaton {
            alphabet,
            kind,
            initial,
            trans: vec![vec![Vec::new(); letters]; num_states.max(1)],
            finals: vec![false; num_states.max(1)],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> AcceptanceKind {
        self.kind
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.trans.len()
    }

    pub fn add_state(&mut self) -> usize {
        self.trans
            .push(vec![Vec::new(); self.alphabet.letter_count()]);
        self.finals.push(false);
        self.trans.len() - 1
    }

    /// Adds `(from, letter, to)`. Re-adding an existing transition only ever
    /// sets its mark.
    pub fn add_edge(&mut self, from: usize, letter: Letter, to: usize, marked: bool) {
        assert!(to < self.trans.len(), "target state out of range");
        debug_assert!(!(marked && self.kind == AcceptanceKind::Finite));
        let list = &mut self.trans[from][letter as usize];
        match list.binary_search_by_key(&to, |e| e.to) {
            Ok(pos) => list[pos].marked |= marked,
            Err(pos) => list.insert(pos, Edge { to, marked }),
        }
    }

    pub fn set_final(&mut self, q: usize, is_final: bool) {
        debug_assert_eq!(self.kind, AcceptanceKind::Finite);
        self.finals[q] = is_final;
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, f)| **f)
            .map(|(q, _)| q)
    }

    pub fn succ(&self, q: usize, letter: Letter) -> &[Edge] {
        &self.trans[q][letter as usize]
    }

    /// 1-based position of `to` among the `letter`-successors of `q`.
    pub fn idx(&self, q: usize, letter: Letter, to: usize) -> Option<usize> {
        self.succ(q, letter)
            .binary_search_by_key(&to, |e| e.to)
            .ok()
            .map(|p| p + 1)
    }

    /// All transitions as `(source, letter, edge)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, Edge)> + '_ {
        self.trans.iter().enumerate().flat_map(|(q, per_letter)| {
            per_letter
                .iter()
                .enumerate()
                .flat_map(move |(l, es)| es.iter().map(move |e| (q, l as Letter, *e)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn marked_count(&self) -> usize {
        self.edges().filter(|(_, _, e)| e.marked).count()
    }

    pub fn max_out_degree(&self) -> usize {
        self.trans
            .iter()
            .flat_map(|per_letter| per_letter.iter().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    pub fn is_deterministic(&self) -> bool {
        self.max_out_degree() <= 1
    }

    pub fn is_complete(&self) -> bool {
        self.trans
            .iter()
            .all(|per_letter| per_letter.iter().all(|es| !es.is_empty()))
    }

    /// Same structure read with another acceptance kind.
    pub fn with_kind(&self, kind: AcceptanceKind) -> Automaton {
        let mut out = self.clone();
        out.kind = kind;
        if kind == AcceptanceKind::Finite {
            for per_letter in &mut out.trans {
                for es in per_letter {
                    for e in es {
                        e.marked = false;
                    }
                }
            }
        } else {
            out.finals = vec![false; out.trans.len()];
        }
        out
    }

    /// The same automaton over a superset of its atoms, in any order: a
    /// letter over `atoms` is read through its restriction to the
    /// automaton's own atoms. Choice indices are kept.
    pub fn over_atoms(&self, atoms: &AtomSet) -> Result<Automaton> {
        let own = self.alphabet.atoms();
        if own == atoms {
            return Ok(self.clone());
        }
        let pos = own
            .names()
            .iter()
            .map(|n| {
                atoms.index_of(n).ok_or_else(|| {
                    Error::AlphabetMismatch(format!(
                        "atom '{n}' is not among {{{}}}",
                        atoms.names().join(",")
                    ))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let alphabet = Alphabet::new(atoms.clone(), self.alphabet.index_arity())?;
        let mut out = Automaton::new(alphabet.clone(), self.kind, self.num_states(), self.initial);
        out.finals = self.finals.clone();
        for l in alphabet.letters() {
            let bits = alphabet.bits(l);
            let own_bits = pos
                .iter()
                .enumerate()
                .filter(|(_, &p)| bits >> p & 1 == 1)
                .fold(0, |acc, (i, _)| acc | 1 << i);
            let ol = self.alphabet.letter(own_bits, alphabet.index(l));
            for q in self.states() {
                out.trans[q][l as usize] = self.trans[q][ol as usize].clone();
            }
        }
        Ok(out)
    }

    /// Same automaton started from `q`.
    pub fn with_initial(&self, q: usize) -> Automaton {
        assert!(q < self.num_states());
        let mut out = self.clone();
        out.initial = q;
        out
    }

    /// Successor lists ignoring letters and marks.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.trans
            .iter()
            .map(|per_letter| {
                let mut v: Vec<usize> = per_letter.iter().flatten().map(|e| e.to).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }

    pub fn reachable(&self) -> Vec<bool> {
        crate::graph::reachable(&self.adjacency(), [self.initial])
    }

    /// Keeps the states for which `keep` holds, renumbered in ascending order.
    /// Transitions into dropped states are removed. Returns the new automaton
    /// and the old-to-new map.
    pub fn restrict(&self, keep: &[bool]) -> (Automaton, Vec<Option<usize>>) {
        assert!(keep[self.initial], "initial state must be kept");
        let mut map = vec![None; self.num_states()];
        let mut n = 0;
        for q in self.states() {
            if keep[q] {
                map[q] = Some(n);
                n += 1;
            }
        }
        let mut out = Automaton::new(
            self.alphabet.clone(),
            self.kind,
            n,
            map[self.initial].unwrap(),
        );
        for q in self.states().filter(|&q| keep[q]) {
            let nq = map[q].unwrap();
            out.finals[nq] = self.finals[q];
            for l in self.alphabet.letters() {
                for e in self.succ(q, l) {
                    if let Some(t) = map[e.to] {
                        out.add_edge(nq, l, t, e.marked);
                    }
                }
            }
        }
        (out, map)
    }

    /// Drops unreachable states, keeping relative order.
    pub fn trim_unreachable(&self) -> (Automaton, Vec<Option<usize>>) {
        self.restrict(&self.reachable())
    }

    /// Adds a sink for missing transitions. Büchi sinks are unmarked and
    /// co-Büchi sink loops are marked, so the sink is rejecting either way;
    /// finite-word sinks are non-final.
    pub fn complete(&self) -> Automaton {
        if self.is_complete() {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.add_state();
        let sink_marked = self.kind == AcceptanceKind::CoBuchi;
        for q in out.states() {
            for l in self.alphabet.letters() {
                if out.succ(q, l).is_empty() {
                    let marked = q == sink && sink_marked;
                    out.add_edge(q, l, sink, marked);
                }
            }
        }
        out
    }

    /// States in breadth-first order from the initial state (letters ascending,
    /// successors ascending); unreachable states come last in id order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::with_capacity(self.num_states());
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for l in self.alphabet.letters() {
                for e in self.succ(q, l) {
                    if !seen[e.to] {
                        seen[e.to] = true;
                        queue.push_back(e.to);
                    }
                }
            }
        }
        order.extend(self.states().filter(|&q| !seen[q]));
        order
    }
}
