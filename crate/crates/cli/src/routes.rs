use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use gfmredux::automata::{hoa_import, AcceptanceKind, Automaton, ProbAutomaton};
use gfmredux::gf_direct::{cosafety_to_nfa, ltl_to_gfm_gf, reset_subset_dba};
use gfmredux::ltl::{AtomSet, Ltl};
use gfmredux::mdp::{solve_nba, solve_pa, Mdp, Solution, SolveMode};
use gfmredux::redux::{pa_from_json, redux};

/// How an objective becomes an automaton the planner can use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    /// Good-for-MDP Büchi automaton used directly (`M × A`).
    GfDirect,
    /// Redux probabilistic automaton on the indexed MDP (`M' ⊗ P`).
    ReduxPa,
    /// Deterministic reference automaton.
    DbaOracle,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::GfDirect, Route::ReduxPa, Route::DbaOracle];

    pub fn name(self) -> &'static str {
        match self {
            Route::GfDirect => "gf-direct",
            Route::ReduxPa => "redux-pa",
            Route::DbaOracle => "dba-oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf-direct" | "direct" => Ok(Route::GfDirect),
            "redux-pa" | "redux" => Ok(Route::ReduxPa),
            "dba-oracle" | "oracle" => Ok(Route::DbaOracle),
            _ => bail!("unknown route '{s}' (expected gf-direct, redux-pa or dba-oracle)"),
        }
    }
}

/// The objective as given on the command line.
pub enum Objective {
    Formula(Ltl),
    /// A Büchi automaton from a HOA file.
    Automaton(Automaton),
    /// A probabilistic automaton from a `redux` PA file.
    Pa(ProbAutomaton),
}

pub fn read_hoa(path: &str) -> Result<Automaton> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    hoa_import(&text).with_context(|| format!("in {path}"))
}

pub fn read_pa(path: &str) -> Result<ProbAutomaton> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    pa_from_json(&text).with_context(|| format!("in {path}"))
}

fn buchi_over(a: &Automaton, atoms: &AtomSet) -> Result<Automaton> {
    if a.kind() != AcceptanceKind::Buchi {
        bail!("expected a Büchi automaton, got {}", a.kind().name());
    }
    Ok(a.over_atoms(atoms)?)
}

/// The automaton a route runs on. For `redux-pa` this is the Büchi input of
/// the reduction; callers holding a ready PA skip it.
pub fn route_automaton(route: Route, objective: &Objective, atoms: &AtomSet) -> Result<Automaton> {
    match (route, objective) {
        (_, Objective::Pa(_)) => bail!("a PA file can only be solved with the redux-pa route"),
        (Route::GfDirect | Route::ReduxPa, Objective::Formula(f)) => Ok(ltl_to_gfm_gf(f, atoms)?),
        (Route::DbaOracle, Objective::Formula(f)) => {
            let body = f.gf_body().ok_or(gfmredux::Error::NotGfCoSafety)?;
            Ok(reset_subset_dba(&cosafety_to_nfa(body, atoms)?)?)
        }
        (Route::DbaOracle, Objective::Automaton(a)) => {
            let a = buchi_over(a, atoms)?;
            if !a.is_deterministic() {
                bail!("the dba-oracle route needs a deterministic automaton");
            }
            Ok(a)
        }
        (_, Objective::Automaton(a)) => buchi_over(a, atoms),
    }
}

/// Solves the objective on `m` along `route`. For `redux-pa` the MDP is
/// indexed to match the PA; the returned MDP is the one the product was
/// built from.
pub fn solve(
    m: &Mdp,
    objective: &Objective,
    route: Route,
    mode: Option<SolveMode>,
) -> Result<(Solution, Mdp)> {
    let atoms = m.alphabet().atoms();
    if let Objective::Pa(pa) = objective {
        if route != Route::ReduxPa {
            bail!("a PA file can only be solved with the redux-pa route");
        }
        if pa.alphabet().atoms() != atoms {
            bail!("the PA's propositions differ from the MDP's");
        }
        let mi = m.indexed(pa.alphabet().index_arity());
        return Ok((solve_pa(&mi, pa, mode)?, mi));
    }
    let a = route_automaton(route, objective, atoms)?;
    match route {
        Route::GfDirect | Route::DbaOracle => Ok((solve_nba(m, &a, mode)?, m.clone())),
        Route::ReduxPa => {
            let out = redux(&a)?;
            let mi = m.indexed(out.pa.alphabet().index_arity());
            Ok((solve_pa(&mi, &out.pa, mode)?, mi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gfmredux::ltl::parse;

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert_eq!("oracle".parse::<Route>().unwrap(), Route::DbaOracle);
        assert!("owl".parse::<Route>().is_err());
    }

    #[test]
    fn oracle_route_is_deterministic() {
        let (f, atoms) = parse("GF(a & X b)").unwrap();
        let objective = Objective::Formula(f);
        let direct = route_automaton(Route::GfDirect, &objective, &atoms).unwrap();
        let oracle = route_automaton(Route::DbaOracle, &objective, &atoms).unwrap();
        assert!(!direct.is_deterministic());
        assert!(oracle.is_deterministic() && oracle.is_complete());

        let nondet = Objective::Automaton(direct);
        assert!(route_automaton(Route::DbaOracle, &nondet, &atoms).is_err());
        assert!(route_automaton(Route::ReduxPa, &nondet, &atoms).is_ok());
    }
}
