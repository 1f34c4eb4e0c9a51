//! Benchmark formula families.

use std::fmt;
use std::str::FromStr;

use super::formula::{AtomSet, Ltl};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Trigger with delayed response, `GF(a & X^n b)`.
    Tdr,
    /// Liveness of `n` binary signals.
    Lib,
    /// Bounded retransmission: acknowledgement received within `n` steps.
    Brp,
    /// Deeply nested eventualities.
    Ehp,
    /// Nested until chain over `n + 1` propositions.
    Nu,
    /// Nested reachability plus a recurring sequence.
    Lfr,
    /// Recurring conjunction at cumulative offsets `k1, k1+k2, ...`.
    Ncs,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Tdr,
        Family::Lib,
        Family::Brp,
        Family::Ehp,
        Family::Nu,
        Family::Lfr,
        Family::Ncs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tdr => "TDR",
            Family::Lib => "LIB",
            Family::Brp => "BRP",
            Family::Ehp => "EHP",
            Family::Nu => "NU",
            Family::Lfr => "LFR",
            Family::Ncs => "NCS",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

fn check_params(family: Family, params: &[usize]) -> Result<()> {
    let arity_ok = match family {
        Family::Ehp => params.is_empty(),
        Family::Ncs => !params.is_empty(),
        _ => params.len() == 1,
    };
    if !arity_ok {
        return Err(Error::PatternParams {
            family: family.name(),
            msg: format!("wrong number of parameters ({})", params.len()),
        });
    }
    if params.contains(&0) {
        return Err(Error::PatternParams {
            family: family.name(),
            msg: "parameters must be positive".into(),
        });
    }
    Ok(())
}

/// Builds the formula of a pattern family together with its atom set.
pub fn gen_pattern(family: Family, params: &[usize]) -> Result<(Ltl, AtomSet)> {
    check_params(family, params)?;
    let atom = Ltl::Atom;
    match family {
        Family::Tdr => {
            let atoms = AtomSet::new(["a", "b"])?;
            let f = Ltl::gf(Ltl::and(atom(0), Ltl::next_n(atom(1), params[0])));
            Ok((f, atoms))
        }
        Family::Lib => {
            let n = params[0];
            let atoms = AtomSet::new((1..=n).map(|i| format!("a{i}")))?;
            let disjuncts = (0..n).flat_map(|i| {
                [
                    Ltl::and(atom(i), Ltl::next(Ltl::not(atom(i)))),
                    Ltl::and(Ltl::not(atom(i)), Ltl::next(atom(i))),
                ]
            });
            Ok((Ltl::gf(Ltl::or_all(disjuncts)), atoms))
        }
        Family::Brp => {
            let n = params[0];
            let atoms = AtomSet::new(["msgsend", "acksend", "acKrev"])?;
            let rev = atom(2);
            let mut within = rev.clone();
            for _ in 0..n {
                within = Ltl::or(rev.clone(), Ltl::next(within));
            }
            let f = Ltl::globally(Ltl::implies(
                atom(0),
                Ltl::finally(Ltl::and(atom(1), within)),
            ));
            Ok((f, atoms))
        }
        Family::Ehp => {
            let atoms = AtomSet::new(["a", "b", "c", "d", "e", "f", "g"])?;
            let xf = |f: Ltl| Ltl::next(Ltl::finally(f));
            let inner = Ltl::and(atom(5), xf(atom(6)));
            let inner = Ltl::and(atom(4), xf(inner));
            let inner = Ltl::and(atom(3), xf(inner));
            let inner = Ltl::and(atom(2), Ltl::finally(inner));
            let inner = Ltl::and(atom(1), Ltl::next(inner));
            Ok((Ltl::until(atom(0), inner), atoms))
        }
        Family::Nu => {
            let n = params[0];
            let atoms = AtomSet::new((1..=n + 1).map(|i| format!("p{i}")))?;
            // innermost: p_n U p_{n+1}; then p_k U (p_{k+1} & inner)
            let mut phi = Ltl::until(atom(n - 1), atom(n));
            for k in (0..n - 1).rev() {
                phi = Ltl::until(atom(k), Ltl::and(atom(k + 1), phi));
            }
            Ok((Ltl::globally(Ltl::implies(atom(0), phi)), atoms))
        }
        Family::Lfr => {
            let n = params[0];
            let mut names: Vec<String> = (1..=n).map(|i| format!("b{i}")).collect();
            names.extend((1..=n).map(|i| format!("a{i}")));
            let atoms = AtomSet::new(names)?;
            let mut reach = atom(n - 1);
            for i in (0..n - 1).rev() {
                reach = Ltl::and(atom(i), Ltl::finally(reach));
            }
            let mut seq = atom(2 * n - 1);
            for i in (0..n - 1).rev() {
                seq = Ltl::and(atom(n + i), Ltl::next(seq));
            }
            Ok((Ltl::and(Ltl::finally(reach), Ltl::gf(seq)), atoms))
        }
        Family::Ncs => {
            let names: Vec<String> = (0..=params.len())
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect();
            if names.len() > 26 {
                return Err(Error::PatternParams {
                    family: family.name(),
                    msg: "too many offsets".into(),
                });
            }
            let atoms = AtomSet::new(names)?;
            let mut offset = 0;
            let mut conj = vec![atom(0)];
            for (i, k) in params.iter().enumerate() {
                offset += k;
                conj.push(Ltl::next_n(atom(i + 1), offset));
            }
            Ok((Ltl::gf(Ltl::and_all(conj)), atoms))
        }
    }
}
