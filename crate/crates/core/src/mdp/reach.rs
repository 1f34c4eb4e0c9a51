//! Maximal reachability probabilities.
//!
//! Qualitative pre-processing first splits off the states that reach the
//! target with probability 0 (no path) and 1 (almost-sure attractor). The
//! remaining states are solved either exactly, by policy iteration over
//! rationals, or approximately by value iteration.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{reachable, transpose};
use crate::linalg::reach_probabilities;
use crate::Rational;

pub type Dist = Vec<(usize, Rational)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Float,
}

/// Models up to this many product states are solved exactly by default.
pub const EXACT_LIMIT: usize = 20_000;

impl SolveMode {
    pub fn for_size(states: usize) -> SolveMode {
        if states <= EXACT_LIMIT {
            SolveMode::Exact
        } else {
            SolveMode::Float
        }
    }
}

const VI_TOLERANCE: f64 = 1e-10;
const VI_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Exact(Vec<Rational>),
    Approx(Vec<f64>),
}

impl Values {
    pub fn as_f64(&self, s: usize) -> f64 {
        match self {
            Values::Exact(v) => v[s].to_f64().unwrap_or(f64::NAN),
            Values::Approx(v) => v[s],
        }
    }

    pub fn exact(&self, s: usize) -> Option<&Rational> {
        match self {
            Values::Exact(v) => Some(&v[s]),
            Values::Approx(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reach {
    pub values: Values,
    /// An optimal action per state (lowest action where every choice is
    /// equally good, in particular where the value is 0).
    pub choice: Vec<usize>,
    pub iterations: usize,
}

fn graph(succ: &[Vec<Dist>]) -> Vec<Vec<usize>> {
    succ.iter()
        .map(|acts| {
            let mut out: Vec<usize> = acts.iter().flatten().map(|(t, _)| *t).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect()
}

/// States that reach `target` almost surely under some strategy, together
/// with an attractor strategy that achieves it.
fn almost_sure(succ: &[Vec<Dist>], target: &[bool], can_reach: &[bool]) -> (Vec<bool>, Vec<usize>) {
    let n = succ.len();
    let mut u = can_reach.to_vec();
    let mut choice = vec![0; n];
    loop {
        let mut r = target.to_vec();
        loop {
            let mut grew = false;
            for s in 0..n {
                if !u[s] || r[s] {
                    continue;
                }
                let found = succ[s]
                    .iter()
                    .position(|d| d.iter().all(|(t, _)| u[*t]) && d.iter().any(|(t, _)| r[*t]));
                if let Some(a) = found {
                    r[s] = true;
                    choice[s] = a;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if r == u {
            return (u, choice);
        }
        u = r;
    }
}

fn expectation(d: &Dist, v: &[Rational]) -> Rational {
    d.iter().map(|(t, p)| p * &v[*t]).sum()
}

fn expectation_f64(d: &[(usize, f64)], v: &[f64]) -> f64 {
    d.iter().map(|(t, p)| p * v[*t]).sum()
}

/// Maximal probability of reaching `target` from every state, where
/// `succ[s][a]` is the distribution of action `a` in state `s`. Every state
/// needs at least one action.
pub fn max_reach(succ: &[Vec<Dist>], target: &[bool], mode: SolveMode) -> Result<Reach> {
    let n = succ.len();
    assert_eq!(target.len(), n);
    let rev = transpose(&graph(succ));
    let can_reach = reachable(&rev, (0..n).filter(|&s| target[s]));
    let (one, one_choice) = almost_sure(succ, target, &can_reach);
    let maybe: Vec<usize> = (0..n).filter(|&s| can_reach[s] && !one[s]).collect();
    let mut choice = vec![0; n];
    for s in 0..n {
        if one[s] && !target[s] {
            choice[s] = one_choice[s];
        }
    }
    match mode {
        SolveMode::Exact => {
            let iterations = policy_iteration(succ, &one, &maybe, &mut choice);
            let values = evaluate(succ, &one, &choice);
            let optimal = |s: usize, d: &Dist| expectation(d, &values) == values[s];
            progress_strategy(succ, &one, &maybe, optimal, &mut choice);
            Ok(Reach {
                values: Values::Exact(values),
                choice,
                iterations,
            })
        }
        SolveMode::Float => {
            let (values, iterations) = value_iteration(succ, &one, &maybe)?;
            let slack = 1e3 * VI_TOLERANCE;
            let optimal = |s: usize, d: &Dist| {
                let q: f64 = d
                    .iter()
                    .map(|(t, p)| p.to_f64().unwrap_or(0.0) * values[*t])
                    .sum();
                q >= values[s] - slack
            };
            progress_strategy(succ, &one, &maybe, optimal, &mut choice);
            Ok(Reach {
                values: Values::Approx(values),
                choice,
                iterations,
            })
        }
    }
}

fn evaluate(succ: &[Vec<Dist>], one: &[bool], choice: &[usize]) -> Vec<Rational> {
    let chain: Vec<Dist> = (0..succ.len())
        .map(|s| {
            if one[s] {
                Vec::new()
            } else {
                succ[s][choice[s]].clone()
            }
        })
        .collect();
    reach_probabilities(&chain, one)
}

/// Switches only on strict improvement, so the values increase
/// monotonically and the loop ends in an optimal policy.
fn policy_iteration(
    succ: &[Vec<Dist>],
    one: &[bool],
    maybe: &[usize],
    choice: &mut [usize],
) -> usize {
    let mut iterations = 0;
    loop {
        iterations += 1;
        let v = evaluate(succ, one, choice);
        let mut changed = false;
        for &s in maybe {
            let current = expectation(&succ[s][choice[s]], &v);
            let mut best = current.clone();
            let mut best_a = choice[s];
            for (a, d) in succ[s].iter().enumerate() {
                let q = expectation(d, &v);
                if q > best {
                    best = q;
                    best_a = a;
                }
            }
            if best > current {
                choice[s] = best_a;
                changed = true;
            }
        }
        if !changed {
            return iterations;
        }
    }
}

fn value_iteration(succ: &[Vec<Dist>], one: &[bool], maybe: &[usize]) -> Result<(Vec<f64>, usize)> {
    let fsucc: Vec<Vec<Vec<(usize, f64)>>> = succ
        .iter()
        .map(|acts| {
            acts.iter()
                .map(|d| {
                    d.iter()
                        .map(|(t, p)| (*t, p.to_f64().unwrap_or(0.0)))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut v: Vec<f64> = one.iter().map(|&o| if o { 1.0 } else { 0.0 }).collect();
    for it in 1..=VI_CAP {
        let mut delta: f64 = 0.0;
        for &s in maybe {
            let best = fsucc[s]
                .iter()
                .map(|d| expectation_f64(d, &v))
                .fold(0.0, f64::max);
            delta = delta.max((best - v[s]).abs());
            v[s] = best;
        }
        if delta < VI_TOLERANCE {
            return Ok((v, it));
        }
        if it == VI_CAP {
            return Err(Error::IterationCap {
                iterations: it,
                residual: delta,
            });
        }
    }
    unreachable!("loop returns at the cap")
}

/// Picks, for every state with positive value, the lowest value-preserving
/// action that moves closer to the almost-sure region. Plain argmax could
/// idle forever in an end component that merely preserves the value.
fn progress_strategy(
    succ: &[Vec<Dist>],
    one: &[bool],
    maybe: &[usize],
    optimal: impl Fn(usize, &Dist) -> bool,
    choice: &mut [usize],
) {
    let candidates: Vec<(usize, Vec<usize>)> = maybe
        .iter()
        .map(|&s| {
            (
                s,
                (0..succ[s].len())
                    .filter(|&a| optimal(s, &succ[s][a]))
                    .collect(),
            )
        })
        .collect();
    let mut done = one.to_vec();
    loop {
        let mut grew = false;
        for (s, acts) in &candidates {
            if done[*s] {
                continue;
            }
            if let Some(&a) = acts
                .iter()
                .find(|&&a| succ[*s][a].iter().any(|(t, _)| done[*t]))
            {
                choice[*s] = a;
                done[*s] = true;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
}
