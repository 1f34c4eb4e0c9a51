//! Exact sparse Gaussian elimination over rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::Rational;

/// Solves the square system `A x = b`, where row `i` of `A` is given as sparse
/// `(column, coefficient)` pairs. Returns `None` if `A` is singular.
pub fn solve_sparse(
    rows: Vec<Vec<(usize, Rational)>>,
    rhs: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let n = rows.len();
    assert_eq!(rhs.len(), n);
    let mut a: Vec<BTreeMap<usize, Rational>> = Vec::with_capacity(n);
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, row) in rows.into_iter().enumerate() {
        let mut m: BTreeMap<usize, Rational> = BTreeMap::new();
        for (j, v) in row {
            assert!(j < n, "column {j} out of range");
            *m.entry(j).or_insert_with(Rational::zero) += v;
        }
        m.retain(|_, v| !v.is_zero());
        for &j in m.keys() {
            col_rows[j].insert(i);
        }
        a.push(m);
    }
    let mut b = rhs;
    let mut used = vec![false; n];
    let mut pivot_of = vec![usize::MAX; n];

    for j in 0..n {
        let p = *col_rows[j]
            .iter()
            .filter(|&&r| !used[r])
            .min_by_key(|&&r| a[r].len())?;
        used[p] = true;
        pivot_of[j] = p;
        let pivot_row = a[p].clone();
        let pivot_val = pivot_row[&j].clone();
        let others: Vec<usize> = col_rows[j].iter().copied().filter(|&r| !used[r]).collect();
        for r in others {
            let factor = &a[r][&j] / &pivot_val;
            for (&k, v) in &pivot_row {
                let entry = a[r].entry(k).or_insert_with(Rational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    a[r].remove(&k);
                    col_rows[k].remove(&r);
                } else {
                    col_rows[k].insert(r);
                }
            }
            let delta = &factor * &b[p];
            b[r] -= delta;
        }
    }

    let mut x = vec![Rational::zero(); n];
    for j in (0..n).rev() {
        let p = pivot_of[j];
        let mut acc = b[p].clone();
        for (&k, v) in &a[p] {
            if k != j {
                acc -= v * &x[k];
            }
        }
        x[j] = acc / &a[p][&j];
    }
    Some(x)
}

/// Probability of eventually reaching a target in a finite Markov chain.
///
/// `succ[i]` lists `(successor, probability)`; `target[i]` marks targets.
/// States that cannot reach a target get 0; the rest solve `x = P x + b`.
pub fn reach_probabilities(succ: &[Vec<(usize, Rational)>], target: &[bool]) -> Vec<Rational> {
    let n = succ.len();
    let adj: Vec<Vec<usize>> = succ
        .iter()
        .map(|s| s.iter().map(|(v, _)| *v).collect())
        .collect();
    let rev = crate::graph::transpose(&adj);
    let can_reach = crate::graph::reachable(&rev, (0..n).filter(|&i| target[i]));
    let unknown: Vec<usize> = (0..n).filter(|&i| can_reach[i] && !target[i]).collect();
    let mut var = vec![usize::MAX; n];
    for (k, &i) in unknown.iter().enumerate() {
        var[i] = k;
    }
    let mut rows = Vec::with_capacity(unknown.len());
    let mut rhs = Vec::with_capacity(unknown.len());
    for &i in &unknown {
        let mut row = vec![(var[i], Rational::one())];
        let mut b = Rational::zero();
        for (v, p) in &succ[i] {
            if target[*v] {
                b += p;
            } else if can_reach[*v] {
                row.push((var[*v], -p.clone()));
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let sol = solve_sparse(rows, rhs).expect("absorbing chain system is non-singular");
    (0..n)
        .map(|i| {
            if target[i] {
                Rational::one()
            } else if can_reach[i] {
                sol[var[i]].clone()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn two_by_two() {
        // x + y = 3, x - y = 1
        let rows = vec![
            vec![(0, r(1, 1)), (1, r(1, 1))],
            vec![(0, r(1, 1)), (1, r(-1, 1))],
        ];
        let x = solve_sparse(rows, vec![r(3, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(2, 1), r(1, 1)]);
    }

    #[test]
    fn singular() {
        let rows = vec![
            vec![(0, r(1, 1)), (1, r(1, 1))],
            vec![(0, r(2, 1)), (1, r(2, 1))],
        ];
        assert!(solve_sparse(rows, vec![r(1, 1), r(2, 1)]).is_none());
    }

    #[test]
    fn gamblers_ruin() {
        // states 0..=3, 0 lose, 3 win; up with 1/3, down with 2/3
        let up = r(1, 3);
        let down = r(2, 3);
        let succ = vec![
            vec![(0, r(1, 1))],
            vec![(2, up.clone()), (0, down.clone())],
            vec![(3, up.clone()), (1, down.clone())],
            vec![(3, r(1, 1))],
        ];
        let target = vec![false, false, false, true];
        let p = reach_probabilities(&succ, &target);
        // x1 = x2/3, x2 = 1/3 + 2/3 x1  =>  x1 = 1/7, x2 = 3/7
        assert_eq!(p[1], r(1, 7));
        assert_eq!(p[2], r(3, 7));
        assert_eq!(p[0], r(0, 1));
    }
}
