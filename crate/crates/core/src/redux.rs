//! Reduction of a good-for-MDP Büchi automaton to a small 0/1 probabilistic
//! automaton:
//!
//! 1. [`gfm_to_dba`] makes every nondeterministic choice part of the input
//!    letter, giving a deterministic Büchi automaton over `Σ × [k]`;
//! 2. [`dba_to_dca`] reads the same structure as co-Büchi (the complement);
//! 3. [`crate::gfg_min::minimize`] shrinks it to a good-for-games co-Büchi
//!    automaton;
//! 4. [`nca_to_pa`] reads that as Büchi again and resolves its choices
//!    uniformly at random.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::automata::{AcceptanceKind, Alphabet, Automaton, ProbAutomaton, ProbEdge};
use crate::error::{Error, Result};
use crate::gfg_min::minimize;
use crate::rational::{format_rational, parse_rational};

/// Deterministic Büchi automaton over `Σ × [k]` whose letter `(σ, i)` follows
/// the `i`-th `σ`-successor, where `k` is the maximal out-degree. Indices with
/// no matching successor lead to a rejecting sink. An already indexed input
/// alphabet `Σ × [k0]` becomes `Σ × [k0·k]`.
pub fn gfm_to_dba(a: &Automaton) -> Result<Automaton> {
    if a.kind() != AcceptanceKind::Buchi {
        return Err(Error::WrongKind {
            expected: AcceptanceKind::Buchi.name(),
            found: a.kind().name(),
        });
    }
    let a = a.complete();
    let k = a.max_out_degree().max(1);
    let alphabet = a.alphabet().extend_index(k as u32);
    let needs_sink = a
        .states()
        .any(|q| a.alphabet().letters().any(|l| a.succ(q, l).len() < k));
    let n = a.num_states() + usize::from(needs_sink);
    let mut d = Automaton::new(alphabet.clone(), AcceptanceKind::Buchi, n, a.initial());
    let sink = a.num_states();
    for q in a.states() {
        for l in a.alphabet().letters() {
            let succ = a.succ(q, l);
            for j in 0..k {
                let letter = l * k as u32 + j as u32;
                match succ.get(j) {
                    Some(e) => d.add_edge(q, letter, e.to, e.marked),
                    None => d.add_edge(q, letter, sink, false),
                }
            }
        }
    }
    if needs_sink {
        for l in alphabet.letters() {
            d.add_edge(sink, l, sink, false);
        }
    }
    Ok(d)
}

/// The same deterministic structure read as a co-Büchi automaton, which
/// accepts exactly the complement language.
pub fn dba_to_dca(d: &Automaton) -> Result<Automaton> {
    if d.kind() != AcceptanceKind::Buchi {
        return Err(Error::WrongKind {
            expected: AcceptanceKind::Buchi.name(),
            found: d.kind().name(),
        });
    }
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if !d.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(d.with_kind(AcceptanceKind::CoBuchi))
}

/// Reads a complete co-Büchi automaton as Büchi and resolves each choice
/// uniformly.
pub fn nca_to_pa(n: &Automaton) -> Result<ProbAutomaton> {
    if !n.is_complete() {
        return Err(Error::NotComplete);
    }
    ProbAutomaton::uniform(&n.with_kind(AcceptanceKind::Buchi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub states: usize,
    pub marked: usize,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduxReport {
    pub input_states: usize,
    pub index_arity: u32,
    pub stages: Vec<StageReport>,
    /// Good-for-MDP-ness of the input is taken on trust.
    pub gfm_asserted_by_caller: bool,
}

impl ReduxReport {
    pub fn final_states(&self) -> usize {
        self.stages.last().map_or(self.input_states, |s| s.states)
    }
}

#[derive(Debug, Clone)]
pub struct ReduxOutput {
    pub pa: ProbAutomaton,
    /// The Step-1 deterministic Büchi automaton.
    pub dba: Automaton,
    /// The minimised co-Büchi automaton the PA randomises.
    pub nca: Automaton,
    /// For each PA state, the DBA state it represents.
    pub rep_of: Vec<usize>,
    pub report: ReduxReport,
}

/// Runs the whole pipeline on a Büchi automaton the caller vouches is
/// good-for-MDP.
pub fn redux(a: &Automaton) -> Result<ReduxOutput> {
    let mut stages = Vec::with_capacity(4);
    let mut record = |name: &str, states: usize, marked: usize, started: Instant| {
        stages.push(StageReport {
            name: name.to_string(),
            states,
            marked,
            elapsed_s: started.elapsed().as_secs_f64(),
        });
    };

    let t = Instant::now();
    let dba = gfm_to_dba(a)?;
    record("gfm_to_dba", dba.num_states(), dba.marked_count(), t);

    let t = Instant::now();
    let dca = dba_to_dca(&dba)?;
    record("dba_to_dca", dca.num_states(), dca.marked_count(), t);

    let t = Instant::now();
    let min = minimize(&dca)?;
    record("minimize", min.nca.num_states(), min.nca.marked_count(), t);

    let t = Instant::now();
    let pa = nca_to_pa(&min.nca)?;
    record("nca_to_pa", pa.num_states(), pa.marked_count(), t);

    let report = ReduxReport {
        input_states: a.num_states(),
        index_arity: dba.alphabet().index_arity(),
        stages,
        gfm_asserted_by_caller: true,
    };
    Ok(ReduxOutput {
        pa,
        dba,
        nca: min.nca,
        rep_of: min.rep_of,
        report,
    })
}

// ------------------------------------------------------------ PA as JSON

#[derive(Debug, Serialize, Deserialize)]
struct PaTransition {
    from: usize,
    letter: Vec<String>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    index: u32,
    to: usize,
    prob: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    marked: bool,
}

fn one() -> u32 {
    1
}

fn is_one(i: &u32) -> bool {
    *i == 1
}

#[derive(Debug, Serialize, Deserialize)]
struct PaFile {
    aps: Vec<String>,
    index_arity: u32,
    states: usize,
    initial: usize,
    transitions: Vec<PaTransition>,
}

pub fn pa_to_json(pa: &ProbAutomaton) -> String {
    let al = pa.alphabet();
    let file = PaFile {
        aps: al.atoms().names().to_vec(),
        index_arity: al.index_arity(),
        states: pa.num_states(),
        initial: pa.initial(),
        transitions: pa
            .edges()
            .map(|(q, l, e)| PaTransition {
                from: q,
                letter: al.atoms().atoms_of(al.bits(l)),
                index: al.index(l),
                to: e.to,
                prob: format_rational(&e.prob),
                marked: e.marked,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}

pub fn pa_from_json(text: &str) -> Result<ProbAutomaton> {
    let file: PaFile = serde_json::from_str(text)?;
    let atoms = crate::ltl::AtomSet::new(file.aps)?;
    let al = Alphabet::new(atoms, file.index_arity)?;
    let mut trans: Vec<Vec<Vec<ProbEdge>>> = vec![vec![Vec::new(); al.letter_count()]; file.states];
    for t in file.transitions {
        let invalid = |msg: String| Error::InvalidAutomaton(msg);
        if t.from >= file.states || t.to >= file.states {
            return Err(invalid(format!(
                "transition {} -> {} out of range",
                t.from, t.to
            )));
        }
        if t.index == 0 || t.index > al.index_arity() {
            return Err(invalid(format!("index {} out of range", t.index)));
        }
        let bits = al.atoms().letter_of(&t.letter)?;
        let prob = parse_rational(&t.prob)
            .ok_or_else(|| invalid(format!("bad probability '{}'", t.prob)))?;
        trans[t.from][al.letter(bits, t.index) as usize].push(ProbEdge {
            to: t.to,
            prob,
            marked: t.marked,
        });
    }
    for per_letter in &mut trans {
        for dist in per_letter {
            dist.sort_by_key(|e| e.to);
        }
    }
    ProbAutomaton::new(al, file.initial, trans)
}
