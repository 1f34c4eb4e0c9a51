//! Benchmark grid runner.
//!
//! A grid file lists formulas (pattern families or literal formulas) and the
//! constructions to measure:
//!
//! ```json
//! { "timeout_s": 300, "seed": 7,
//!   "cases": [ {"family": "TDR", "range": [6, 10], "routes": ["gf-direct"]},
//!              {"family": "NCS", "params": [1, 2]},
//!              {"formula": "GF(a | b)"} ] }
//! ```
//!
//! Counts go to a CSV and a Markdown table that depend only on the grid;
//! wall-clock times go to a separate file.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use gfmredux::automata::{lasso_member, pa_lasso_prob, LassoWord};
use gfmredux::gf_direct::{cosafety_to_nfa, ltl_to_gfm_gf, reset_subset_dba};
use gfmredux::ltl::{gen_pattern, parse, AtomSet, Family, Ltl};
use gfmredux::redux::redux;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

pub const DEFAULT_TIMEOUT_S: f64 = 300.0;

/// What a bench column measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    /// States of the direct good-for-MDP automaton.
    GfDirect,
    /// States of the deterministic reset-subset reference automaton.
    DbaOracle,
    /// States of the PA that redux makes from the direct automaton.
    Redux,
    /// States of the PA that redux makes from the reference automaton.
    ReduxDba,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::GfDirect,
        Measure::DbaOracle,
        Measure::Redux,
        Measure::ReduxDba,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::GfDirect => "gf-direct",
            Measure::DbaOracle => "dba-oracle",
            Measure::Redux => "redux",
            Measure::ReduxDba => "redux-dba",
        }
    }
}

impl FromStr for Measure {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .with_context(|| format!("unknown bench route '{s}'"))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseSpec {
    family: Option<String>,
    params: Option<Vec<usize>>,
    range: Option<[usize; 2]>,
    formula: Option<String>,
    routes: Option<Vec<String>>,
    timeout_s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    timeout_s: Option<f64>,
    #[serde(default)]
    seed: u64,
    /// Lassos per redux case for the 0/1 check against the DBA.
    #[serde(default)]
    lassos: usize,
    cases: Vec<CaseSpec>,
}

#[derive(Debug, Clone)]
pub struct BenchCase {
    pub id: String,
    pub formula: Ltl,
    pub atoms: AtomSet,
    pub routes: Vec<Measure>,
    pub timeout: Duration,
    pub seed: u64,
    pub lassos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub id: String,
    pub status: Status,
    /// State count per measured route; empty unless the status is ok.
    pub counts: Vec<(Measure, usize)>,
    /// `(route, stage, seconds)`.
    pub times: Vec<(Measure, String, f64)>,
    pub elapsed_s: f64,
    pub message: Option<String>,
}

impl BenchRow {
    pub fn count(&self, m: Measure) -> Option<usize> {
        self.counts.iter().find(|(r, _)| *r == m).map(|(_, c)| *c)
    }
}

/// Expands a grid file into cases, in file order.
pub fn parse_grid(text: &str, timeout_override: Option<f64>) -> Result<Vec<BenchCase>> {
    let grid: GridFile = serde_json::from_str(text).context("parsing grid")?;
    let mut cases = Vec::new();
    for spec in grid.cases {
        let routes = match &spec.routes {
            None => vec![Measure::GfDirect],
            Some(rs) => rs.iter().map(|r| r.parse()).collect::<Result<Vec<_>>>()?,
        };
        let timeout_s = timeout_override
            .or(spec.timeout_s)
            .or(grid.timeout_s)
            .unwrap_or(DEFAULT_TIMEOUT_S);
        if timeout_s.is_nan() || timeout_s <= 0.0 {
            bail!("timeout must be positive");
        }
        let mut push = |id: String, formula: Ltl, atoms: AtomSet| {
            cases.push(BenchCase {
                id,
                formula,
                atoms,
                routes: routes.clone(),
                timeout: Duration::from_secs_f64(timeout_s),
                seed: grid.seed,
                lassos: grid.lassos,
            });
        };
        match (&spec.family, &spec.formula) {
            (Some(fam), None) => {
                let family: Family = fam.parse()?;
                let param_sets: Vec<Vec<usize>> = match (&spec.params, spec.range) {
                    (Some(p), None) => vec![p.clone()],
                    (None, Some([lo, hi])) => (lo..=hi).map(|n| vec![n]).collect(),
                    (None, None) if family == Family::Ehp => vec![Vec::new()],
                    _ => bail!("{family}: give exactly one of \"params\" and \"range\""),
                };
                for params in param_sets {
                    let (f, atoms) = gen_pattern(family, &params)?;
                    let id = format!(
                        "{family}[{}]",
                        params
                            .iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    push(id, f, atoms);
                }
            }
            (None, Some(text)) => {
                let (f, atoms) = parse(text)?;
                push(text.clone(), f, atoms);
            }
            _ => bail!("every case needs exactly one of \"family\" and \"formula\""),
        }
    }
    Ok(cases)
}

type Measured = (Vec<(Measure, usize)>, Vec<(Measure, String, f64)>);

fn measure(case: &BenchCase) -> Result<Measured> {
    let mut counts = Vec::new();
    let mut times = Vec::new();
    for &route in &case.routes {
        let t = Instant::now();
        match route {
            Measure::GfDirect => {
                let a = ltl_to_gfm_gf(&case.formula, &case.atoms)?;
                times.push((route, "construct".to_string(), t.elapsed().as_secs_f64()));
                counts.push((route, a.num_states()));
            }
            Measure::DbaOracle => {
                let body = case
                    .formula
                    .gf_body()
                    .ok_or(gfmredux::Error::NotGfCoSafety)?;
                let d = reset_subset_dba(&cosafety_to_nfa(body, &case.atoms)?)?;
                times.push((route, "construct".to_string(), t.elapsed().as_secs_f64()));
                counts.push((route, d.num_states()));
            }
            Measure::Redux | Measure::ReduxDba => {
                let input = if route == Measure::Redux {
                    ltl_to_gfm_gf(&case.formula, &case.atoms)?
                } else {
                    let body = case
                        .formula
                        .gf_body()
                        .ok_or(gfmredux::Error::NotGfCoSafety)?;
                    reset_subset_dba(&cosafety_to_nfa(body, &case.atoms)?)?
                };
                times.push((route, "construct".to_string(), t.elapsed().as_secs_f64()));
                let out = redux(&input)?;
                for stage in &out.report.stages {
                    times.push((route, stage.name.clone(), stage.elapsed_s));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
                for _ in 0..case.lassos {
                    let w = LassoWord::random(&mut rng, out.pa.alphabet(), 4, 4);
                    let p = pa_lasso_prob(&out.pa, &w);
                    let member = lasso_member(&out.dba, &w)?;
                    if p != gfmredux::Rational::from_integer(i64::from(member).into()) {
                        bail!(
                            "PA gives {p} on {} but the DBA says {member}",
                            w.describe(out.pa.alphabet())
                        );
                    }
                }
                counts.push((route, out.pa.num_states()));
            }
        }
    }
    Ok((counts, times))
}

/// Runs one case on its own thread so that a timeout can abandon it.
pub fn run_case(case: &BenchCase) -> BenchRow {
    let started = Instant::now();
    let (tx, rx) = mpsc::channel();
    let job = case.clone();
    std::thread::spawn(move || {
        let _ = tx.send(measure(&job));
    });
    let mut row = BenchRow {
        id: case.id.clone(),
        status: Status::Ok,
        counts: Vec::new(),
        times: Vec::new(),
        elapsed_s: 0.0,
        message: None,
    };
    match rx.recv_timeout(case.timeout) {
        Ok(Ok((counts, times))) => {
            row.counts = counts;
            row.times = times;
        }
        Ok(Err(e)) => {
            row.status = Status::Error;
            row.message = Some(format!("{e:#}"));
        }
        Err(mpsc::RecvTimeoutError::Timeout) => row.status = Status::Timeout,
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            row.status = Status::Error;
            row.message = Some("worker panicked".into());
        }
    }
    row.elapsed_s = started.elapsed().as_secs_f64();
    row
}

/// Runs all cases on `jobs` workers (0 = one per core); rows keep grid order.
pub fn run_grid(cases: &[BenchCase], jobs: usize) -> Result<Vec<BenchRow>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| cases.par_iter().map(run_case).collect()))
}

fn columns(cases: &[BenchCase]) -> Vec<Measure> {
    let mut cols: Vec<Measure> = cases
        .iter()
        .flat_map(|c| c.routes.iter().copied())
        .collect();
    cols.sort();
    cols.dedup();
    cols
}

pub fn to_csv(cases: &[BenchCase], rows: &[BenchRow]) -> String {
    let cols = columns(cases);
    let mut out = String::from("case,status");
    for c in &cols {
        write!(out, ",{}", c.name()).unwrap();
    }
    out.push('\n');
    for row in rows {
        write!(out, "{},{}", csv_field(&row.id), row.status.name()).unwrap();
        for &c in &cols {
            out.push(',');
            if let Some(n) = row.count(c) {
                write!(out, "{n}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Markdown table with the smallest count of each row in bold.
pub fn to_markdown(cases: &[BenchCase], rows: &[BenchRow]) -> String {
    let cols = columns(cases);
    let mut out = String::from("| case | status |");
    for c in &cols {
        write!(out, " {} |", c.name()).unwrap();
    }
    out.push_str("\n|---|---|");
    for _ in &cols {
        out.push_str("---:|");
    }
    out.push('\n');
    for row in rows {
        let best = row.counts.iter().map(|(_, n)| *n).min();
        write!(
            out,
            "| {} | {} |",
            row.id.replace('|', "\\|"),
            row.status.name()
        )
        .unwrap();
        for &c in &cols {
            match row.count(c) {
                Some(n) if Some(n) == best => write!(out, " **{n}** |").unwrap(),
                Some(n) => write!(out, " {n} |").unwrap(),
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    out
}

/// Wall-clock times, one line per stage.
pub fn timings_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("case,route,stage,seconds\n");
    for row in rows {
        for (route, stage, s) in &row.times {
            writeln!(
                out,
                "{},{},{stage},{s:.6}",
                csv_field(&row.id),
                route.name()
            )
            .unwrap();
        }
        writeln!(
            out,
            "{},total,total,{:.6}",
            csv_field(&row.id),
            row.elapsed_s
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expands_ranges_and_literals() {
        let cases = parse_grid(
            r#"{"timeout_s": 5, "cases": [
                {"family": "TDR", "range": [2, 4], "routes": ["redux", "gf-direct"]},
                {"formula": "GF(a | b)", "timeout_s": 1}]}"#,
            None,
        )
        .unwrap();
        let ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["TDR[2]", "TDR[3]", "TDR[4]", "GF(a | b)"]);
        assert_eq!(cases[0].routes, [Measure::Redux, Measure::GfDirect]);
        assert_eq!(cases[3].routes, [Measure::GfDirect]);
        assert_eq!(cases[0].timeout, Duration::from_secs(5));
        assert_eq!(cases[3].timeout, Duration::from_secs(1));

        let overridden = parse_grid(r#"{"cases": [{"formula": "GF a"}]}"#, Some(0.5)).unwrap();
        assert_eq!(overridden[0].timeout, Duration::from_millis(500));
    }

    #[test]
    fn grid_errors() {
        for bad in [
            r#"{"cases": [{"family": "TDR"}]}"#,
            r#"{"cases": [{"family": "TDR", "params": [2], "formula": "GF a"}]}"#,
            r#"{"cases": [{"formula": "GF a", "routes": ["owl"]}]}"#,
            r#"{"cases": [{"formula": "GF a", "timeout_s": 0}]}"#,
            r#"{"cases": [{"formula": "GF a", "colour": "red"}]}"#,
        ] {
            assert!(parse_grid(bad, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn tables_mark_the_smallest_count() {
        let cases = parse_grid(
            r#"{"cases": [{"formula": "GF(a & XXX b)", "routes": ["gf-direct", "dba-oracle"]},
                          {"formula": "G a"}]}"#,
            None,
        )
        .unwrap();
        let rows: Vec<BenchRow> = cases.iter().map(run_case).collect();
        assert_eq!(rows[0].count(Measure::GfDirect), Some(4));
        assert_eq!(rows[0].count(Measure::DbaOracle), Some(8));
        assert_eq!(rows[1].status, Status::Error);
        assert_eq!(
            to_csv(&cases, &rows),
            "case,status,gf-direct,dba-oracle\nGF(a & XXX b),ok,4,8\nG a,error,,\n"
        );
        let md = to_markdown(&cases, &rows);
        assert!(md.contains("| GF(a & XXX b) | ok | **4** | 8 |"), "{md}");
        assert!(md.contains("| G a | error | - | - |"), "{md}");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("GF(a | b)"), "GF(a | b)");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    }
}
