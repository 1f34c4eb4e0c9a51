use super::formula::Ltl;

/// Pushes negations down to atoms. `!(a U b)` becomes `!a R !b`.
pub fn to_nnf(f: &Ltl) -> Ltl {
    nnf(f, false)
}

fn nnf(f: &Ltl, neg: bool) -> Ltl {
    match (f, neg) {
        (Ltl::True, false) | (Ltl::False, true) => Ltl::True,
        (Ltl::True, true) | (Ltl::False, false) => Ltl::False,
        (Ltl::Atom(i), false) => Ltl::Atom(*i),
        (Ltl::Atom(i), true) => Ltl::not(Ltl::Atom(*i)),
        (Ltl::Not(g), _) => nnf(g, !neg),
        (Ltl::And(l, r), false) => Ltl::and(nnf(l, false), nnf(r, false)),
        (Ltl::And(l, r), true) => Ltl::or(nnf(l, true), nnf(r, true)),
        (Ltl::Or(l, r), false) => Ltl::or(nnf(l, false), nnf(r, false)),
        (Ltl::Or(l, r), true) => Ltl::and(nnf(l, true), nnf(r, true)),
        (Ltl::Next(g), _) => Ltl::next(nnf(g, neg)),
        (Ltl::Globally(g), false) => Ltl::globally(nnf(g, false)),
        (Ltl::Globally(g), true) => Ltl::finally(nnf(g, true)),
        (Ltl::Finally(g), false) => Ltl::finally(nnf(g, false)),
        (Ltl::Finally(g), true) => Ltl::globally(nnf(g, true)),
        (Ltl::Until(l, r), false) => Ltl::until(nnf(l, false), nnf(r, false)),
        (Ltl::Until(l, r), true) => Ltl::release(nnf(l, true), nnf(r, true)),
        (Ltl::Release(l, r), false) => Ltl::release(nnf(l, false), nnf(r, false)),
        (Ltl::Release(l, r), true) => Ltl::until(nnf(l, true), nnf(r, true)),
    }
}

pub fn is_nnf(f: &Ltl) -> bool {
    match f {
        Ltl::Not(g) => matches!(**g, Ltl::Atom(_)),
        _ => f.children().into_iter().all(is_nnf),
    }
}

/// True iff the negation normal form uses neither `G` nor release.
pub fn is_cosafety(f: &Ltl) -> bool {
    fn walk(f: &Ltl) -> bool {
        match f {
            Ltl::Globally(_) | Ltl::Release(..) => false,
            _ => f.children().into_iter().all(walk),
        }
    }
    walk(&to_nnf(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse::parse;

    fn p(s: &str) -> Ltl {
        parse(s).unwrap().0
    }

    #[test]
    fn negated_until_becomes_release() {
        let a = Ltl::Atom(0);
        let b = Ltl::Atom(1);
        assert_eq!(
            to_nnf(&p("!(a U b)")),
            Ltl::release(Ltl::not(a), Ltl::not(b))
        );
    }

    #[test]
    fn double_negation() {
        assert_eq!(to_nnf(&p("!!a")), Ltl::Atom(0));
    }

    #[test]
    fn duality_chain() {
        assert_eq!(to_nnf(&p("!GFa")), p("FG!a"));
        assert_eq!(to_nnf(&p("!Xa")), p("X!a"));
    }

    #[test]
    fn cosafety_classification() {
        assert!(is_cosafety(&p("a & XXXXXXb")));
        assert!(is_cosafety(&p("a U (b & F c)")));
        assert!(!is_cosafety(&p("G a")));
        assert!(!is_cosafety(&p("!(a U b)")));
        assert!(!is_cosafety(&p("!F a")));
        assert!(is_cosafety(&p("!G a")));
    }

    #[test]
    fn nnf_is_nnf() {
        for s in ["!(a & !(b U X!c))", "!G(a -> F b)", "!(a | !b) U c"] {
            assert!(is_nnf(&to_nnf(&p(s))), "{s}");
        }
    }
}
