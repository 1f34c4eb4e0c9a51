//! One-letter unfolding ("after function") of co-safety formulas, the
//! propositional view used to quotient its residuals, and the clause
//! representation the NFA construction works on.

use std::collections::{BTreeMap, BTreeSet};

use super::formula::Ltl;
use super::nnf::{is_cosafety, is_nnf, to_nnf};
use crate::error::{Error, Result};

fn flatten_and(f: Ltl, out: &mut Vec<Ltl>) {
    match f {
        Ltl::And(l, r) => {
            flatten_and(*l, out);
            flatten_and(*r, out);
        }
        other => out.push(other),
    }
}

fn flatten_or(f: Ltl, out: &mut Vec<Ltl>) {
    match f {
        Ltl::Or(l, r) => {
            flatten_or(*l, out);
            flatten_or(*r, out);
        }
        other => out.push(other),
    }
}

fn rebuild(items: BTreeSet<Ltl>, join: fn(Ltl, Ltl) -> Ltl) -> Ltl {
    let mut it = items.into_iter().rev();
    let last = it.next().expect("non-empty");
    it.fold(last, |acc, x| join(x, acc))
}

/// Conjunction with constant absorption, flattening and duplicate removal.
pub fn mk_and(items: impl IntoIterator<Item = Ltl>) -> Ltl {
    let mut flat = Vec::new();
    for f in items {
        flatten_and(f, &mut flat);
    }
    let mut set = BTreeSet::new();
    for f in flat {
        match f {
            Ltl::True => {}
            Ltl::False => return Ltl::False,
            other => {
                set.insert(other);
            }
        }
    }
    if set.is_empty() {
        Ltl::True
    } else {
        rebuild(set, Ltl::and)
    }
}

/// Disjunction with constant absorption, flattening and duplicate removal.
pub fn mk_or(items: impl IntoIterator<Item = Ltl>) -> Ltl {
    let mut flat = Vec::new();
    for f in items {
        flatten_or(f, &mut flat);
    }
    let mut set = BTreeSet::new();
    for f in flat {
        match f {
            Ltl::False => {}
            Ltl::True => return Ltl::True,
            other => {
                set.insert(other);
            }
        }
    }
    if set.is_empty() {
        Ltl::False
    } else {
        rebuild(set, Ltl::or)
    }
}

fn af_unchecked(f: &Ltl, letter: u32) -> Ltl {
    let holds = |i: usize| letter & (1 << i) != 0;
    match f {
        Ltl::True => Ltl::True,
        Ltl::False => Ltl::False,
        Ltl::Atom(i) => {
            if holds(*i) {
                Ltl::True
            } else {
                Ltl::False
            }
        }
        Ltl::Not(g) => match g.as_ref() {
            Ltl::Atom(i) if holds(*i) => Ltl::False,
            Ltl::Atom(_) => Ltl::True,
            _ => unreachable!("input is in negation normal form"),
        },
        Ltl::And(l, r) => mk_and([af_unchecked(l, letter), af_unchecked(r, letter)]),
        Ltl::Or(l, r) => mk_or([af_unchecked(l, letter), af_unchecked(r, letter)]),
        Ltl::Next(g) => (**g).clone(),
        Ltl::Finally(g) => mk_or([af_unchecked(g, letter), f.clone()]),
        Ltl::Until(l, r) => mk_or([
            af_unchecked(r, letter),
            mk_and([af_unchecked(l, letter), f.clone()]),
        ]),
        Ltl::Globally(_) | Ltl::Release(..) => unreachable!("input is co-safety"),
    }
}

/// Residual of a co-safety formula after reading one letter (bit-vector over atoms).
pub fn af_step(f: &Ltl, letter: u32) -> Result<Ltl> {
    if !is_cosafety(f) {
        return Err(Error::NotCoSafety);
    }
    let f = if is_nnf(f) { f.clone() } else { to_nnf(f) };
    Ok(af_unchecked(&f, letter))
}

/// Residual after a finite word.
pub fn af_word(f: &Ltl, word: &[u32]) -> Result<Ltl> {
    if !is_cosafety(f) {
        return Err(Error::NotCoSafety);
    }
    let mut cur = if is_nnf(f) { f.clone() } else { to_nnf(f) };
    for &letter in word {
        cur = af_unchecked(&cur, letter);
    }
    Ok(cur)
}

fn collect_vars(f: &Ltl, vars: &mut BTreeMap<Ltl, usize>) {
    match f {
        Ltl::True | Ltl::False => {}
        Ltl::Not(g) => collect_vars(g, vars),
        Ltl::And(l, r) | Ltl::Or(l, r) => {
            collect_vars(l, vars);
            collect_vars(r, vars);
        }
        _ => {
            let n = vars.len();
            vars.entry(f.clone()).or_insert(n);
        }
    }
}

fn eval_prop(f: &Ltl, vars: &BTreeMap<Ltl, usize>, assignment: u64) -> bool {
    match f {
        Ltl::True => true,
        Ltl::False => false,
        Ltl::Not(g) => !eval_prop(g, vars, assignment),
        Ltl::And(l, r) => eval_prop(l, vars, assignment) && eval_prop(r, vars, assignment),
        Ltl::Or(l, r) => eval_prop(l, vars, assignment) || eval_prop(r, vars, assignment),
        _ => assignment & (1 << vars[f]) != 0,
    }
}

/// Propositional equivalence, treating atoms and maximal temporal subformulas
/// as independent variables. Decided by truth table.
pub fn prop_equiv(f: &Ltl, g: &Ltl) -> bool {
    let mut vars = BTreeMap::new();
    collect_vars(f, &mut vars);
    collect_vars(g, &mut vars);
    assert!(
        vars.len() <= 30,
        "truth table over {} variables",
        vars.len()
    );
    (0..(1u64 << vars.len())).all(|v| eval_prop(f, &vars, v) == eval_prop(g, &vars, v))
}

/// A conjunction of non-propositional-connective formulas (literals and
/// `X`/`F`/`U`-rooted subformulas). The empty clause is `tt`.
pub type Clause = BTreeSet<Ltl>;

fn contradictory(c: &Clause) -> bool {
    c.iter().any(|f| match f {
        Ltl::Not(g) => c.contains(g.as_ref()),
        _ => false,
    })
}

/// Drops contradictory and subsumed clauses; the result is sorted.
fn normalize(clauses: Vec<Clause>) -> Vec<Clause> {
    let mut cs: Vec<Clause> = clauses.into_iter().filter(|c| !contradictory(c)).collect();
    cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cs.dedup();
    let mut kept: Vec<Clause> = Vec::new();
    for c in cs {
        if !kept.iter().any(|k| k.is_subset(&c)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}

/// Disjunctive normal form over clause literals. `[]` is `ff`, `[{}]` is `tt`.
pub fn dnf(f: &Ltl) -> Vec<Clause> {
    match f {
        Ltl::True => vec![Clause::new()],
        Ltl::False => vec![],
        Ltl::Or(l, r) => {
            let mut out = dnf(l);
            out.extend(dnf(r));
            normalize(out)
        }
        Ltl::And(l, r) => {
            let left = dnf(l);
            let right = dnf(r);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for a in &left {
                for b in &right {
                    out.push(a.union(b).cloned().collect());
                }
            }
            normalize(out)
        }
        other => vec![Clause::from([other.clone()])],
    }
}

/// Clauses of the residual of `clause` after `letter`.
pub fn af_clause(clause: &Clause, letter: u32) -> Vec<Clause> {
    let residual = mk_and(clause.iter().map(|c| af_unchecked(c, letter)));
    dnf(&residual)
}

/// The formula denoted by a clause.
pub fn clause_formula(clause: &Clause) -> Ltl {
    mk_and(clause.iter().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse::parse;
    use crate::ltl::AtomSet;

    fn p(s: &str) -> Ltl {
        parse(s).unwrap().0
    }

    fn pa(s: &str, atoms: &AtomSet) -> Ltl {
        crate::ltl::parse::parse_with(s, atoms).unwrap()
    }

    #[test]
    fn atom_satisfied_now() {
        assert_eq!(af_step(&p("a"), 0b1).unwrap(), Ltl::True);
        assert_eq!(af_step(&p("a"), 0b0).unwrap(), Ltl::False);
        assert_eq!(af_step(&p("!a"), 0b0).unwrap(), Ltl::True);
    }

    #[test]
    fn eventuality_carries_over() {
        let fa = p("F a");
        assert_eq!(af_step(&fa, 0).unwrap(), fa);
        assert_eq!(af_step(&fa, 1).unwrap(), Ltl::True);
    }

    #[test]
    fn until_with_left_only() {
        let atoms = AtomSet::new(["a", "b"]).unwrap();
        let f = pa("a U b", &atoms);
        assert_eq!(af_step(&f, 0b01).unwrap(), f);
        assert_eq!(af_step(&f, 0b10).unwrap(), Ltl::True);
        assert_eq!(af_step(&f, 0b00).unwrap(), Ltl::False);
    }

    #[test]
    fn next_chain() {
        let atoms = AtomSet::new(["a", "b"]).unwrap();
        let f = pa("a & XXb", &atoms);
        let r1 = af_step(&f, 0b01).unwrap();
        assert_eq!(r1, pa("Xb", &atoms));
        assert_eq!(af_word(&f, &[0b01, 0b00, 0b10]).unwrap(), Ltl::True);
        assert_eq!(af_word(&f, &[0b01, 0b00, 0b00]).unwrap(), Ltl::False);
    }

    #[test]
    fn rejects_non_cosafety() {
        assert!(matches!(af_step(&p("G a"), 0), Err(Error::NotCoSafety)));
    }

    #[test]
    fn prop_equiv_examples() {
        assert!(prop_equiv(&p("a | tt"), &p("tt")));
        assert!(prop_equiv(&p("Fa & Fa"), &p("Fa")));
        let ab = AtomSet::new(["a", "b"]).unwrap();
        assert!(!prop_equiv(&pa("a U b", &ab), &pa("b U a", &ab)));
        assert!(prop_equiv(&p("a & (b | c)"), &p("(a & b) | (a & c)")));
        assert!(!prop_equiv(&p("Xa"), &p("a")));
    }

    #[test]
    fn dnf_splits_and_simplifies() {
        let atoms = AtomSet::new(["a", "b"]).unwrap();
        let f = pa("(a & Xb) | (!a & X!b)", &atoms);
        assert_eq!(dnf(&f).len(), 2);
        assert_eq!(dnf(&pa("a & !a", &atoms)), Vec::<Clause>::new());
        // tt absorbs every other clause
        assert_eq!(dnf(&pa("tt | Xa", &atoms)), vec![Clause::new()]);
        // subsumption: (Xa) | (Xa & Xb) == Xa
        assert_eq!(dnf(&pa("Xa | (Xa & Xb)", &atoms)).len(), 1);
    }
}
