//! Exact language oracles: lasso membership, co-Büchi containment and the
//! acceptance probability of a lasso under a probabilistic automaton.

use num_traits::Zero;

use super::alphabet::Letter;
use super::automaton::{AcceptanceKind, Automaton};
use super::lasso::LassoWord;
use super::prob::ProbAutomaton;
use crate::error::{Error, Result};
use crate::graph::{bfs_path, reachable, scc_ids, transpose};
use crate::Rational;

fn require_kind(a: &Automaton, kind: AcceptanceKind) -> Result<()> {
    if a.kind() != kind {
        return Err(Error::WrongKind {
            expected: kind.name(),
            found: a.kind().name(),
        });
    }
    Ok(())
}

fn require_same_alphabet(a: &Automaton, b: &Automaton) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "{} vs {}",
            a.alphabet(),
            b.alphabet()
        )));
    }
    Ok(())
}

fn require_dca(d: &Automaton) -> Result<()> {
    require_kind(d, AcceptanceKind::CoBuchi)?;
    if !d.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    if !d.is_complete() {
        return Err(Error::NotComplete);
    }
    Ok(())
}

/// Does `a` accept `w`? Decided on the product of `a` with the positions of
/// the lasso; every cycle of that product lies in the loop region.
pub fn lasso_member(a: &Automaton, w: &LassoWord) -> Result<bool> {
    let buchi = match a.kind() {
        AcceptanceKind::Buchi => true,
        AcceptanceKind::CoBuchi => false,
        AcceptanceKind::Finite => {
            return Err(Error::WrongKind {
                expected: "Büchi or co-Büchi",
                found: a.kind().name(),
            })
        }
    };
    let len = w.len();
    let node = |q: usize, pos: usize| q * len + pos;
    let total = a.num_states() * len;
    let mut all = vec![Vec::new(); total];
    let mut unmarked = vec![Vec::new(); total];
    let mut marked_edges = Vec::new();
    for q in a.states() {
        for pos in 0..len {
            let next = w.next_pos(pos);
            for e in a.succ(q, w.letter(pos)) {
                let (u, v) = (node(q, pos), node(e.to, next));
                all[u].push(v);
                if e.marked {
                    marked_edges.push((u, v));
                } else {
                    unmarked[u].push(v);
                }
            }
        }
    }
    let reach = reachable(&all, [node(a.initial(), 0)]);
    if buchi {
        let (comp, _) = scc_ids(&all);
        Ok(marked_edges
            .iter()
            .any(|&(u, v)| reach[u] && comp[u] == comp[v]))
    } else {
        let (comp, count) = scc_ids(&unmarked);
        let mut size = vec![0usize; count];
        for u in 0..total {
            size[comp[u]] += 1;
        }
        Ok((0..total).any(|u| {
            reach[u]
                && unmarked[u]
                    .iter()
                    .any(|&v| comp[v] == comp[u] && (size[comp[u]] > 1 || v == u))
        }))
    }
}

struct PairProduct {
    nodes: Vec<(usize, usize)>,
    /// `(letter, target, d1 marked, d2 marked)`
    edges: Vec<Vec<(Letter, usize, bool, bool)>>,
}

/// Reachable part of `d1 × d2` for deterministic `d2`.
fn pair_product(d1: &Automaton, d2: &Automaton) -> PairProduct {
    let n2 = d2.num_states();
    let mut index = std::collections::HashMap::new();
    let mut nodes = vec![(d1.initial(), d2.initial())];
    index.insert(d1.initial() * n2 + d2.initial(), 0usize);
    let mut edges: Vec<Vec<(Letter, usize, bool, bool)>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (p, q) = nodes[i];
        let mut out = Vec::new();
        for l in d1.alphabet().letters() {
            let e2 = d2.succ(q, l)[0];
            for e1 in d1.succ(p, l) {
                let key = e1.to * n2 + e2.to;
                let id = *index.entry(key).or_insert_with(|| {
                    nodes.push((e1.to, e2.to));
                    nodes.len() - 1
                });
                out.push((l, id, e1.marked, e2.marked));
            }
        }
        edges.push(out);
        i += 1;
    }
    PairProduct { nodes, edges }
}

/// A lasso in `L(d1) \ L(d2)`, if any. `d2` must be a deterministic complete
/// co-Büchi automaton; `d1` may be nondeterministic.
pub fn dcw_counterexample(d1: &Automaton, d2: &Automaton) -> Result<Option<LassoWord>> {
    require_kind(d1, AcceptanceKind::CoBuchi)?;
    require_dca(d2)?;
    require_same_alphabet(d1, d2)?;
    let prod = pair_product(d1, d2);
    let n = prod.nodes.len();
    let safe: Vec<Vec<usize>> = prod
        .edges
        .iter()
        .map(|es| es.iter().filter(|e| !e.2).map(|e| e.1).collect())
        .collect();
    let (comp, _) = scc_ids(&safe);
    let mut witness_edge = None;
    'search: for u in 0..n {
        for &(l, v, m1, m2) in &prod.edges[u] {
            if !m1 && m2 && comp[u] == comp[v] {
                witness_edge = Some((u, l, v));
                break 'search;
            }
        }
    }
    let Some((u, l, v)) = witness_edge else {
        return Ok(None);
    };
    let all_edges =
        |x: usize| -> Vec<(Letter, usize)> { prod.edges[x].iter().map(|e| (e.0, e.1)).collect() };
    let (prefix, _) = bfs_path(n, &[0], all_edges, |x| x == u).expect("node is reachable");
    let c = comp[u];
    let inside = |x: usize| -> Vec<(Letter, usize)> {
        prod.edges[x]
            .iter()
            .filter(|e| !e.2 && comp[e.1] == c)
            .map(|e| (e.0, e.1))
            .collect()
    };
    let (back, _) = bfs_path(n, &[v], inside, |x| x == u).expect("same component");
    let mut cycle = vec![l];
    cycle.extend(back);
    Ok(Some(LassoWord::new(prefix, cycle)))
}

/// `L(d1) ⊆ L(d2)` for co-Büchi `d1` and deterministic complete co-Büchi `d2`.
pub fn dcw_contained(d1: &Automaton, d2: &Automaton) -> Result<bool> {
    Ok(dcw_counterexample(d1, d2)?.is_none())
}

/// Do states `p` and `q` of a deterministic complete co-Büchi automaton
/// accept the same language?
pub fn state_lang_equiv(d: &Automaton, p: usize, q: usize) -> Result<bool> {
    require_dca(d)?;
    if p == q {
        return Ok(true);
    }
    let (dp, dq) = (d.with_initial(p), d.with_initial(q));
    Ok(dcw_contained(&dp, &dq)? && dcw_contained(&dq, &dp)?)
}

/// `m[p][q]` iff `L(d, p) ⊆ L(d, q)`, for all pairs of states of a
/// deterministic complete co-Büchi automaton, from one product over all pairs.
pub fn containment_matrix(d: &Automaton) -> Result<Vec<Vec<bool>>> {
    require_dca(d)?;
    let n = d.num_states();
    let total = n * n;
    let mut all = vec![Vec::new(); total];
    let mut safe = vec![Vec::new(); total];
    let mut flagged = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let u = p * n + q;
            for l in d.alphabet().letters() {
                let (e1, e2) = (d.succ(p, l)[0], d.succ(q, l)[0]);
                let v = e1.to * n + e2.to;
                all[u].push(v);
                if !e1.marked {
                    safe[u].push(v);
                    if e2.marked {
                        flagged.push((u, v));
                    }
                }
            }
        }
    }
    let (comp, _) = scc_ids(&safe);
    let bad_starts: Vec<usize> = flagged
        .iter()
        .filter(|&&(u, v)| comp[u] == comp[v])
        .map(|&(u, _)| u)
        .collect();
    let bad = reachable(&transpose(&all), bad_starts);
    Ok((0..n)
        .map(|p| (0..n).map(|q| !bad[p * n + q]).collect())
        .collect())
}

/// Probability that `p` accepts `w`: the chance of reaching a bottom
/// component of the product chain that contains a marked transition.
pub fn pa_lasso_prob(p: &ProbAutomaton, w: &LassoWord) -> Rational {
    let len = w.len();
    let mut index = std::collections::HashMap::new();
    let mut nodes = vec![(p.initial(), 0usize)];
    index.insert((p.initial(), 0usize), 0usize);
    let mut succ: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut marked: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (q, pos) = nodes[i];
        let next = w.next_pos(pos);
        let mut out = Vec::new();
        let mut out_marked = Vec::new();
        for e in p.succ(q, w.letter(pos)) {
            let id = *index.entry((e.to, next)).or_insert_with(|| {
                nodes.push((e.to, next));
                nodes.len() - 1
            });
            out.push((id, e.prob.clone()));
            if e.marked {
                out_marked.push(id);
            }
        }
        succ.push(out);
        marked.push(out_marked);
        i += 1;
    }
    debug_assert!(len > 0);
    let n = nodes.len();
    let adj: Vec<Vec<usize>> = succ
        .iter()
        .map(|s| s.iter().map(|(v, _)| *v).collect())
        .collect();
    let (comp, count) = scc_ids(&adj);
    let mut bottom = vec![true; count];
    let mut accepting = vec![false; count];
    for u in 0..n {
        for &v in &adj[u] {
            if comp[v] != comp[u] {
                bottom[comp[u]] = false;
            }
        }
        for &v in &marked[u] {
            if comp[v] == comp[u] {
                accepting[comp[u]] = true;
            }
        }
    }
    let target: Vec<bool> = (0..n)
        .map(|u| bottom[comp[u]] && accepting[comp[u]])
        .collect();
    if !target.iter().any(|&t| t) {
        return Rational::zero();
    }
    crate::linalg::reach_probabilities(&succ, &target)[0].clone()
}
