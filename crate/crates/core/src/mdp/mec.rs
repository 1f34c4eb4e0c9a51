use crate::graph::scc_ids;

use super::product::ProductMdp;

/// A maximal end component: its states and, per state, the actions that
/// never leave it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mec {
    pub states: Vec<usize>,
    pub actions: Vec<Vec<usize>>,
    /// Some retained action has a marked successor edge.
    pub accepting: bool,
    /// No action of any member, retained or not, leaves the component.
    pub leaf: bool,
}

/// Maximal end components of an action graph, where `succ[s][a]` lists the
/// successors of action `a` in state `s`. Components are returned ordered by
/// their smallest state; states and actions are ascending.
pub fn maximal_end_components(succ: &[Vec<Vec<usize>>]) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = succ.len();
    let mut alive = vec![true; n];
    let mut allowed: Vec<Vec<bool>> = succ.iter().map(|acts| vec![true; acts.len()]).collect();
    loop {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| {
                if !alive[s] {
                    return Vec::new();
                }
                let mut out: Vec<usize> = succ[s]
                    .iter()
                    .zip(&allowed[s])
                    .filter(|(_, ok)| **ok)
                    .flat_map(|(ts, _)| ts.iter().copied())
                    .filter(|&t| alive[t])
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let (comp, _) = scc_ids(&adj);
        let mut changed = false;
        for s in 0..n {
            if !alive[s] {
                continue;
            }
            for (a, ts) in succ[s].iter().enumerate() {
                if allowed[s][a] && ts.iter().any(|&t| !alive[t] || comp[t] != comp[s]) {
                    allowed[s][a] = false;
                    changed = true;
                }
            }
            if !allowed[s].iter().any(|&ok| ok) {
                alive[s] = false;
                changed = true;
            }
        }
        if changed {
            continue;
        }
        let mut by_comp: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        for s in (0..n).filter(|&s| alive[s]) {
            let k = *slot.entry(comp[s]).or_insert_with(|| {
                by_comp.push((Vec::new(), Vec::new()));
                by_comp.len() - 1
            });
            by_comp[k].0.push(s);
            by_comp[k]
                .1
                .push((0..succ[s].len()).filter(|&a| allowed[s][a]).collect());
        }
        return by_comp;
    }
}

/// MEC decomposition of a product, with Büchi acceptance read off the marks.
pub fn mec_decompose(p: &ProductMdp) -> Vec<Mec> {
    maximal_end_components(&p.action_graph())
        .into_iter()
        .map(|(states, actions)| {
            let accepting = states.iter().zip(&actions).any(|(&s, acts)| {
                acts.iter()
                    .any(|&a| p.actions[s][a].succ.iter().any(|e| e.marked))
            });
            let leaf = states.iter().all(|&s| {
                p.actions[s]
                    .iter()
                    .flat_map(|a| &a.succ)
                    .all(|e| states.binary_search(&e.to).is_ok())
            });
            Mec {
                states,
                actions,
                accepting,
                leaf,
            }
        })
        .collect()
}
