//! MDP files:
//!
//! ```json
//! { "aps": ["a", "b"], "states": 2, "initial": 0,
//!   "actions": [["go"], ["stay"]],
//!   "transitions": [{"from": 0, "action": "go", "to": 1, "prob": "1/2"}, ...],
//!   "labels": [{"state": 0, "action": "go", "letter": ["a"]}, ...] }
//! ```
//!
//! Indexed MDPs add `"index_arity": k` and a per-label `"index"`.

use serde::{Deserialize, Serialize};

use super::model::{Action, Mdp};
use crate::automata::Alphabet;
use crate::error::{Error, Result};
use crate::ltl::AtomSet;
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Serialize, Deserialize)]
struct TransitionEntry {
    from: usize,
    action: String,
    to: usize,
    prob: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelEntry {
    state: usize,
    action: String,
    letter: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MdpFile {
    aps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index_arity: Option<u32>,
    states: usize,
    initial: usize,
    actions: Vec<Vec<String>>,
    transitions: Vec<TransitionEntry>,
    labels: Vec<LabelEntry>,
}

pub fn mdp_from_json(text: &str) -> Result<Mdp> {
    let file: MdpFile = serde_json::from_str(text)?;
    let invalid = |msg: String| Error::InvalidMdp(msg);
    let alphabet = Alphabet::new(AtomSet::new(file.aps)?, file.index_arity.unwrap_or(1))?;
    if file.actions.len() != file.states {
        return Err(invalid(format!(
            "{} action lists for {} states",
            file.actions.len(),
            file.states
        )));
    }
    let mut actions: Vec<Vec<Action>> = file
        .actions
        .iter()
        .map(|names| {
            names
                .iter()
                .map(|n| Action {
                    name: n.clone(),
                    letter: 0,
                    succ: Vec::new(),
                })
                .collect()
        })
        .collect();
    let mut labelled: Vec<Vec<bool>> = actions.iter().map(|a| vec![false; a.len()]).collect();
    let find = |actions: &[Vec<Action>], s: usize, name: &str| -> Result<usize> {
        actions
            .get(s)
            .and_then(|acts| acts.iter().position(|a| a.name == name))
            .ok_or_else(|| invalid(format!("state {s} has no action '{name}'")))
    };
    for t in file.transitions {
        let i = find(&actions, t.from, &t.action)?;
        let p = parse_rational(&t.prob)
            .ok_or_else(|| invalid(format!("bad probability '{}'", t.prob)))?;
        actions[t.from][i].succ.push((t.to, p));
    }
    for l in file.labels {
        let i = find(&actions, l.state, &l.action)?;
        let bits = alphabet.atoms().letter_of(&l.letter)?;
        let index = l.index.unwrap_or(1);
        if index == 0 || index > alphabet.index_arity() {
            return Err(invalid(format!("label index {index} out of range")));
        }
        actions[l.state][i].letter = alphabet.letter(bits, index);
        labelled[l.state][i] = true;
    }
    for (s, flags) in labelled.iter().enumerate() {
        if let Some(i) = flags.iter().position(|f| !f) {
            return Err(invalid(format!(
                "({s}, {}) has no label",
                actions[s][i].name
            )));
        }
    }
    Mdp::new(alphabet, file.initial, actions)
}

pub fn mdp_to_json(m: &Mdp) -> String {
    let al = m.alphabet();
    let indexed = al.index_arity() > 1;
    let mut transitions = Vec::new();
    let mut labels = Vec::new();
    let mut names = Vec::new();
    for s in 0..m.num_states() {
        names.push(m.actions(s).iter().map(|a| a.name.clone()).collect());
        for a in m.actions(s) {
            for (t, p) in &a.succ {
                transitions.push(TransitionEntry {
                    from: s,
                    action: a.name.clone(),
                    to: *t,
                    prob: format_rational(p),
                });
            }
            labels.push(LabelEntry {
                state: s,
                action: a.name.clone(),
                letter: al.atoms().atoms_of(al.bits(a.letter)),
                index: indexed.then(|| al.index(a.letter)),
            });
        }
    }
    let file = MdpFile {
        aps: al.atoms().names().to_vec(),
        index_arity: indexed.then(|| al.index_arity()),
        states: m.num_states(),
        initial: m.initial(),
        actions: names,
        transitions,
        labels,
    };
    serde_json::to_string_pretty(&file).expect("serialisable") + "\n"
}
