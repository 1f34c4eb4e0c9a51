//! Minimisation of deterministic co-Büchi automata into small good-for-games
//! nondeterministic co-Büchi automata.
//!
//! The construction works on the *safe* structure of the automaton: the
//! subgraph of unmarked transitions. Unmarked transitions that leave their
//! safe component can only be taken finitely often, so they are marked first
//! without changing the language. States are then grouped by language and by
//! safe language; only states with a maximal safe language inside their
//! language class survive, one per safe language. Unmarked transitions are
//! redirected to the surviving copy of their target, and marked transitions
//! may jump to any survivor of the target's language class.
//!
//! Every result is checked before it is returned: language equivalence in both
//! directions (the reverse direction through an explicit resolver, which also
//! certifies good-for-games-ness) and the two structural certificates.

use crate::automata::{
    containment_matrix, dcw_counterexample, AcceptanceKind, Automaton, LassoWord, Letter,
};
use crate::error::{Error, Result};
use crate::graph::{bfs_path, reachable, scc_ids};

fn require_dca(d: &Automaton) -> Result<()> {
    if d.kind() != AcceptanceKind::CoBuchi {
        return Err(Error::WrongKind {
            expected: AcceptanceKind::CoBuchi.name(),
            found: d.kind().name(),
        });
    }
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if !d.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

fn step(d: &Automaton, q: usize, l: Letter) -> (usize, bool) {
    let e = d.succ(q, l)[0];
    (e.to, e.marked)
}

/// Safe components and safe-language classes of a deterministic automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeStructure {
    /// SCC of each state in the unmarked subgraph.
    pub component: Vec<usize>,
    /// Whether the component has an internal unmarked transition.
    pub component_nontrivial: Vec<bool>,
    /// Lowest state with the same safe language.
    pub signature: Vec<usize>,
    /// `contained[p][q]` iff `safe(p) ⊆ safe(q)`.
    pub contained: Vec<Vec<bool>>,
}

impl SafeStructure {
    pub fn new(d: &Automaton) -> Result<Self> {
        require_dca(d)?;
        let n = d.num_states();
        let unmarked: Vec<Vec<usize>> = d
            .states()
            .map(|q| {
                d.alphabet()
                    .letters()
                    .filter_map(|l| {
                        let (to, m) = step(d, q, l);
                        (!m).then_some(to)
                    })
                    .collect()
            })
            .collect();
        let (component, count) = scc_ids(&unmarked);
        let mut component_nontrivial = vec![false; count];
        for q in 0..n {
            if unmarked[q].iter().any(|&t| component[t] == component[q]) {
                component_nontrivial[component[q]] = true;
            }
        }
        let contained = safe_containment_matrix(d);
        let signature = (0..n)
            .map(|q| {
                (0..n)
                    .find(|&p| contained[p][q] && contained[q][p])
                    .unwrap()
            })
            .collect();
        Ok(SafeStructure {
            component,
            component_nontrivial,
            signature,
            contained,
        })
    }
}

/// Pairwise safe-language containment. `safe(p) ⊄ safe(q)` iff some pair
/// reachable from `(p, q)` by synchronous unmarked moves has a letter on which
/// the left state moves unmarked and the right one does not.
fn safe_containment_matrix(d: &Automaton) -> Vec<Vec<bool>> {
    let n = d.num_states();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    let mut bad_start = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let pair = u * n + v;
            for l in d.alphabet().letters() {
                let (u2, mu) = step(d, u, l);
                let (v2, mv) = step(d, v, l);
                if !mu {
                    if mv {
                        bad_start.push(pair);
                    } else {
                        rev[u2 * n + v2].push(pair);
                    }
                }
            }
        }
    }
    let bad = reachable(&rev, bad_start);
    (0..n)
        .map(|p| (0..n).map(|q| !bad[p * n + q]).collect())
        .collect()
}

/// `safe(p) ⊆ safe(q)` in a deterministic complete co-Büchi automaton.
pub fn safe_contained(d: &Automaton, p: usize, q: usize) -> Result<bool> {
    require_dca(d)?;
    if p == q {
        return Ok(true);
    }
    let n = d.num_states();
    let mut seen = vec![false; n * n];
    let mut stack = vec![(p, q)];
    seen[p * n + q] = true;
    while let Some((u, v)) = stack.pop() {
        for l in d.alphabet().letters() {
            let (u2, mu) = step(d, u, l);
            let (v2, mv) = step(d, v, l);
            if mu {
                continue;
            }
            if mv {
                return Ok(false);
            }
            if !seen[u2 * n + v2] {
                seen[u2 * n + v2] = true;
                stack.push((u2, v2));
            }
        }
    }
    Ok(true)
}

/// Marks unmarked transitions that leave their safe component.
fn normalize(d: &Automaton) -> Automaton {
    let unmarked: Vec<Vec<usize>> = d
        .states()
        .map(|q| {
            d.alphabet()
                .letters()
                .filter_map(|l| {
                    let (to, m) = step(d, q, l);
                    (!m).then_some(to)
                })
                .collect()
        })
        .collect();
    let (comp, _) = scc_ids(&unmarked);
    let mut out = Automaton::new(
        d.alphabet().clone(),
        AcceptanceKind::CoBuchi,
        d.num_states(),
        d.initial(),
    );
    for q in d.states() {
        for l in d.alphabet().letters() {
            let (to, m) = step(d, q, l);
            out.add_edge(q, l, to, m || comp[to] != comp[q]);
        }
    }
    out
}

/// Result of [`minimize`].
#[derive(Debug, Clone)]
pub struct Minimized {
    /// The good-for-games co-Büchi automaton.
    pub nca: Automaton,
    /// For every state of `nca`, the state of the input it stands for.
    pub rep_of: Vec<usize>,
}

/// Minimises a deterministic complete co-Büchi automaton.
///
/// Fails with [`Error::Validation`] (carrying a lasso when one is available)
/// if the result does not pass its own equivalence and certificate checks.
pub fn minimize(d: &Automaton) -> Result<Minimized> {
    require_dca(d)?;
    let (trimmed, map) = d.trim_unreachable();
    let mut original = vec![0; trimmed.num_states()];
    for (old, new) in map.iter().enumerate() {
        if let Some(new) = new {
            original[*new] = old;
        }
    }
    let norm = normalize(&trimmed);
    let n = norm.num_states();
    let lang = containment_matrix(&norm)?;
    let safe = safe_containment_matrix(&norm);

    let lclass: Vec<usize> = (0..n)
        .map(|q| (0..n).find(|&p| lang[p][q] && lang[q][p]).unwrap())
        .collect();
    let strong: Vec<usize> = (0..n)
        .map(|q| {
            (0..n)
                .find(|&p| lclass[p] == lclass[q] && safe[p][q] && safe[q][p])
                .unwrap()
        })
        .collect();
    let maximal: Vec<bool> = (0..n)
        .map(|q| !(0..n).any(|p| lclass[p] == lclass[q] && safe[q][p] && !safe[p][q]))
        .collect();
    let reps_of_class = |c: usize| -> Vec<usize> {
        (0..n)
            .filter(|&q| lclass[q] == c && maximal[q] && strong[q] == q)
            .collect()
    };

    // retained member of each strong class, closed under unmarked successors
    let mut retained_of: Vec<Option<usize>> = vec![None; n];
    let mut work: Vec<usize> = Vec::new();
    for q in 0..n {
        if maximal[q] && strong[q] == q {
            retained_of[q] = Some(q);
            work.push(q);
        }
    }
    while let Some(r) = work.pop() {
        for l in norm.alphabet().letters() {
            let (s, m) = step(&norm, r, l);
            if !m && retained_of[strong[s]].is_none() {
                retained_of[strong[s]] = Some(s);
                work.push(s);
            }
        }
    }
    let q0 = norm.initial();
    let start = retained_of[strong[q0]].unwrap_or_else(|| {
        reps_of_class(lclass[q0])
            .into_iter()
            .find(|&r| safe[q0][r])
            .expect("some maximal state covers the initial safe language")
    });

    let mut retained: Vec<usize> = retained_of.iter().flatten().copied().collect();
    retained.sort_unstable();
    let mut id = vec![usize::MAX; n];
    for (i, &r) in retained.iter().enumerate() {
        id[r] = i;
    }
    let mut nca = Automaton::new(
        norm.alphabet().clone(),
        AcceptanceKind::CoBuchi,
        retained.len(),
        id[start],
    );
    for &r in &retained {
        for l in norm.alphabet().letters() {
            let (s, m) = step(&norm, r, l);
            if m {
                for t in reps_of_class(lclass[s]) {
                    nca.add_edge(id[r], l, id[t], true);
                }
            } else {
                let t = retained_of[strong[s]].expect("closed under unmarked moves");
                nca.add_edge(id[r], l, id[t], false);
            }
        }
    }
    let (nca, keep) = nca.trim_unreachable();
    let mut rep_of = vec![0; nca.num_states()];
    for (i, &r) in retained.iter().enumerate() {
        if let Some(k) = keep[i] {
            rep_of[k] = r;
        }
    }

    validate(&norm, &nca, &rep_of, &lclass, &safe)?;
    let rep_of = rep_of.into_iter().map(|q| original[q]).collect();
    Ok(Minimized { nca, rep_of })
}

/// Re-determinises a co-Büchi automaton by moving its choices into the
/// letter: over `Σ × [k]`, letter `(σ, i)` follows the `i`-th `σ`-successor,
/// and indices beyond a state's out-degree repeat its last successor.
pub fn lift(n: &Automaton) -> Result<Automaton> {
    if n.kind() != AcceptanceKind::CoBuchi {
        return Err(Error::WrongKind {
            expected: AcceptanceKind::CoBuchi.name(),
            found: n.kind().name(),
        });
    }
    if !n.is_complete() {
        return Err(Error::NotComplete);
    }
    let k = n.max_out_degree();
    let alphabet = n.alphabet().extend_index(k as u32);
    let mut d = Automaton::new(
        alphabet,
        AcceptanceKind::CoBuchi,
        n.num_states(),
        n.initial(),
    );
    for q in n.states() {
        for l in n.alphabet().letters() {
            let succ = n.succ(q, l);
            for j in 0..k {
                let e = succ[j.min(succ.len() - 1)];
                d.add_edge(q, l * k as u32 + j as u32, e.to, e.marked);
            }
        }
    }
    Ok(d)
}

fn fail(msg: impl Into<String>, witness: Option<LassoWord>) -> Error {
    Error::Validation {
        msg: msg.into(),
        witness,
    }
}

/// `d` is the normalised deterministic input, `rep_of` maps `nca` states to
/// states of `d`.
fn validate(
    d: &Automaton,
    nca: &Automaton,
    rep_of: &[usize],
    lclass: &[usize],
    safe: &[Vec<bool>],
) -> Result<()> {
    if let Some(w) = dcw_counterexample(nca, d)? {
        return Err(fail(
            "minimised automaton accepts a word the input rejects",
            Some(w),
        ));
    }
    if let Some(w) = resolver_counterexample(d, nca, rep_of, safe) {
        return Err(fail(
            "resolver of the minimised automaton rejects a word the input accepts",
            Some(w),
        ));
    }
    for q in nca.states() {
        for l in nca.alphabet().letters() {
            let succ = nca.succ(q, l);
            if succ.is_empty() {
                return Err(fail(format!("state {q} has no successor"), None));
            }
            let c = lclass[rep_of[succ[0].to]];
            if succ.iter().any(|e| lclass[rep_of[e.to]] != c) {
                return Err(fail(
                    format!("successors of state {q} are not language-equivalent"),
                    None,
                ));
            }
            if succ.iter().filter(|e| !e.marked).count() > 1 {
                return Err(fail(
                    format!("state {q} has two unmarked successors on one letter"),
                    None,
                ));
            }
        }
    }
    Ok(())
}

/// Runs `nca` alongside `d` with the resolver that follows the unmarked move
/// when there is one and otherwise picks the first successor whose safe
/// language covers the input's current safe language. Returns a word accepted
/// by `d` on which the resolved run is rejecting, if any.
fn resolver_counterexample(
    d: &Automaton,
    nca: &Automaton,
    rep_of: &[usize],
    safe: &[Vec<bool>],
) -> Option<LassoWord> {
    let m = nca.num_states();
    let node = |p: usize, r: usize| p * m + r;
    let total = d.num_states() * m;
    // (letter, target, d marked, nca marked)
    let mut edges: Vec<Vec<(Letter, usize, bool, bool)>> = vec![Vec::new(); total];
    for p in d.states() {
        for r in nca.states() {
            for l in d.alphabet().letters() {
                let (p2, dm) = step(d, p, l);
                let succ = nca.succ(r, l);
                let choice = succ
                    .iter()
                    .find(|e| !e.marked)
                    .or_else(|| succ.iter().find(|e| safe[p2][rep_of[e.to]]))
                    .unwrap_or(&succ[0]);
                edges[node(p, r)].push((l, node(p2, choice.to), dm, choice.marked));
            }
        }
    }
    let all: Vec<Vec<usize>> = edges
        .iter()
        .map(|es| es.iter().map(|e| e.1).collect())
        .collect();
    let start = node(d.initial(), nca.initial());
    let reach = reachable(&all, [start]);
    let accepting_d: Vec<Vec<usize>> = edges
        .iter()
        .enumerate()
        .map(|(u, es)| {
            if reach[u] {
                es.iter().filter(|e| !e.2).map(|e| e.1).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let (comp, _) = scc_ids(&accepting_d);
    let (u, l, v) = (0..total).filter(|&u| reach[u]).find_map(|u| {
        edges[u]
            .iter()
            .find(|e| !e.2 && e.3 && comp[e.1] == comp[u])
            .map(|e| (u, e.0, e.1))
    })?;
    let labelled =
        |x: usize| -> Vec<(Letter, usize)> { edges[x].iter().map(|e| (e.0, e.1)).collect() };
    let (prefix, _) = bfs_path(total, &[start], labelled, |x| x == u)?;
    let c = comp[u];
    let inside = |x: usize| -> Vec<(Letter, usize)> {
        edges[x]
            .iter()
            .filter(|e| !e.2 && comp[e.1] == c)
            .map(|e| (e.0, e.1))
            .collect()
    };
    let (back, _) = bfs_path(total, &[v], inside, |x| x == u)?;
    let mut cycle = vec![l];
    cycle.extend(back);
    Some(LassoWord::new(prefix, cycle))
}
