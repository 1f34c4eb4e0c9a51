//! Small directed-graph helpers over adjacency lists.

use std::collections::VecDeque;

use petgraph::graph::{DiGraph, NodeIndex};

/// Strongly connected components of the graph with successor lists `adj`.
pub fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(adj.len(), 0);
    for _ in 0..adj.len() {
        g.add_node(());
    }
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            g.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
        }
    }
    petgraph::algo::tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// Component id per node, from [`sccs`].
pub fn scc_ids(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let comps = sccs(adj);
    let mut id = vec![usize::MAX; adj.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            id[v] = i;
        }
    }
    (id, comps.len())
}

/// Nodes reachable from `starts`.
pub fn reachable(adj: &[Vec<usize>], starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Reverses the edges of `adj`.
pub fn transpose(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    rev
}

/// Shortest path from any node in `starts` to a node satisfying `goal`,
/// following `edges(u)` which yields `(label, successor)` pairs.
/// Returns the labels along the path and the final node.
pub fn bfs_path<L: Clone>(
    n: usize,
    starts: &[usize],
    edges: impl Fn(usize) -> Vec<(L, usize)>,
    goal: impl Fn(usize) -> bool,
) -> Option<(Vec<L>, usize)> {
    let mut parent: Vec<Option<(usize, L)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in starts {
        if goal(s) {
            return Some((Vec::new(), s));
        }
        seen[s] = true;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for (label, v) in edges(u) {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            parent[v] = Some((u, label));
            if goal(v) {
                let mut labels = Vec::new();
                let mut cur = v;
                while let Some((p, l)) = parent[cur].clone() {
                    labels.push(l);
                    cur = p;
                }
                labels.reverse();
                return Some((labels, v));
            }
            queue.push_back(v);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_and_a_bridge() {
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let mut comps = sccs(&adj);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
        let r = reachable(&adj, [2]);
        assert_eq!(r, vec![false, false, true, true, false]);
    }

    #[test]
    fn bfs_finds_shortest() {
        let adj = [vec![1, 2], vec![3], vec![3], vec![]];
        let (labels, end) = bfs_path(
            4,
            &[0],
            |u| adj[u].iter().map(|&v| (v, v)).collect(),
            |v| v == 3,
        )
        .unwrap();
        assert_eq!(end, 3);
        assert_eq!(labels, vec![1, 3]);
    }
}
