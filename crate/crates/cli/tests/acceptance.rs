//! One test per acceptance criterion. Each prints a single line
//! `criterion N: PASS|FAIL ...`; run with `--nocapture` to see them.

use std::collections::HashMap;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use gfmredux::automata::{
    dcw_contained, lasso_member, pa_lasso_prob, AcceptanceKind, Alphabet, Automaton, LassoWord,
};
use gfmredux::gf_direct::{cosafety_to_nfa, ltl_to_gfm_gf, reset_subset_dba};
use gfmredux::gfg_min::{lift, minimize};
use gfmredux::ltl::{eval_lasso, gen_pattern, parse, AtomSet, Family, Ltl};
use gfmredux::mdp::{
    induce_mc, maximal_end_components, mdp_from_json, random_mdp, solve_nba, solve_pa, Mdp,
    Solution, SolveMode,
};
use gfmredux::redux::{dba_to_dca, redux, ReduxOutput};
use gfmredux::Rational;
use gfmredux_cli::bench::{parse_grid, run_case, Measure};
use gfmredux_cli::routes::read_hoa;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, what: &str, outcome: Result<String>) {
    match outcome {
        Ok(detail) => println!("criterion {n}: PASS {what} ({detail})"),
        Err(e) => {
            println!("criterion {n}: FAIL {what}: {e:#}");
            panic!("criterion {n} failed: {e:#}");
        }
    }
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn pattern(family: Family, n: usize) -> (String, Ltl, AtomSet) {
    let (f, atoms) = gen_pattern(family, &[n]).unwrap();
    (format!("{family}[{n}]"), f, atoms)
}

fn exact(sol: &Solution) -> Result<Rational> {
    sol.value().context("no exact value")
}

fn reference_dba(f: &Ltl, atoms: &AtomSet) -> Result<Automaton> {
    let body = f.gf_body().context("not a GF formula")?;
    Ok(reset_subset_dba(&cosafety_to_nfa(body, atoms)?)?)
}

/// Expected state counts for a bench grid, checked row by row.
fn check_grid(grid: &str, expected: &[(&str, usize)]) -> Result<String> {
    let text = std::fs::read_to_string(fixture(grid))?;
    let cases = parse_grid(&text, None)?;
    ensure!(
        cases.len() == expected.len(),
        "{grid} has {} cases",
        cases.len()
    );
    let mut slowest = Duration::ZERO;
    for (case, &(id, want)) in cases.iter().zip(expected) {
        ensure!(case.id == id, "expected case {id}, found {}", case.id);
        let row = run_case(case);
        let got = row.count(Measure::GfDirect);
        ensure!(
            got == Some(want),
            "{id}: expected {want} states, got {got:?} ({:?})",
            row.status
        );
        let elapsed = Duration::from_secs_f64(row.elapsed_s);
        ensure!(elapsed < Duration::from_secs(1), "{id} took {elapsed:?}");
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "{} cases, slowest {:.3}s",
        cases.len(),
        slowest.as_secs_f64()
    ))
}

#[test]
fn criterion_1_main_counts() {
    let expected = [
        ("TDR[6]", 7),
        ("TDR[7]", 8),
        ("TDR[8]", 9),
        ("TDR[9]", 10),
        ("TDR[10]", 11),
        ("LIB[6]", 13),
        ("LIB[7]", 15),
        ("LIB[8]", 17),
        ("LIB[9]", 19),
    ];
    report(
        1,
        "TDR[6..10] and LIB[6..9] state counts",
        check_grid("grid_main.json", &expected),
    );
}

#[test]
fn criterion_2_more_counts() {
    let ncs: Vec<String> = parse_grid(
        &std::fs::read_to_string(fixture("grid_extra.json")).unwrap(),
        None,
    )
    .unwrap()
    .into_iter()
    .map(|c| c.id)
    .filter(|id| id.starts_with("GF(a&X(b)"))
    .collect();
    let mut expected: Vec<(&str, usize)> = vec![("TDR[3]", 4), ("TDR[4]", 5), ("TDR[5]", 6)];
    for (i, id) in ncs.iter().enumerate() {
        expected.push((id, 4 + i));
    }
    expected.push(("GF(a|b)", 1));
    expected.push(("GF((a&XXXa)|(!a&XXX!a))", 7));
    expected.push(("GF((a&XXXXa)|(!a&XXXX!a))", 9));
    let outcome = if ncs.len() == 8 {
        check_grid("grid_extra.json", &expected)
    } else {
        Err(anyhow::anyhow!("expected 8 NCS rows, found {}", ncs.len()))
    };
    report(2, "remaining benchmark state counts", outcome);
}

fn criterion_3() -> Result<String> {
    let started = Instant::now();
    let m = mdp_from_json(&std::fs::read_to_string(fixture("nongfm_mdp.json"))?)?;
    let mode = Some(SolveMode::Exact);
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::from_integer(1.into());

    let guess = solve_nba(&m, &read_hoa(&fixture("nongfm_nba.hoa"))?, mode)?;
    ensure!(
        exact(&guess)? == half,
        "guessing automaton gives {}",
        exact(&guess)?
    );
    ensure!(
        induce_mc(&guess.product, &guess.strategy)? == half,
        "strategy audit of the guessing automaton"
    );

    let waiting = solve_nba(&m, &read_hoa(&fixture("nongfm_waiting.hoa"))?, mode)?;
    ensure!(
        exact(&waiting)? == one,
        "waiting automaton gives {}",
        exact(&waiting)?
    );

    let dba = read_hoa(&fixture("nongfm_dba.hoa"))?;
    ensure!(
        dba.is_deterministic(),
        "oracle fixture is not deterministic"
    );
    let oracle = solve_nba(&m, &dba, mode)?;
    ensure!(
        exact(&oracle)? == one,
        "oracle route gives {}",
        exact(&oracle)?
    );

    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("1/2, 1, 1 in {:.3}s", elapsed.as_secs_f64()))
}

#[test]
fn criterion_3_non_gfm_fixture() {
    report(3, "non-GFM fixture values", criterion_3());
}

fn route_formulas() -> Vec<(String, Ltl, AtomSet)> {
    let (gfa, atoms) = parse("GF a").unwrap();
    vec![
        ("GF a".to_string(), gfa, atoms),
        pattern(Family::Tdr, 2),
        pattern(Family::Tdr, 3),
        pattern(Family::Lib, 2),
    ]
}

fn criterion_4() -> Result<String> {
    let started = Instant::now();
    let mode = Some(SolveMode::Exact);
    let (mut cases, mut fractional) = (0, 0);
    for (name, f, atoms) in route_formulas() {
        let al = Alphabet::plain(atoms.clone())?;
        let dba = reference_dba(&f, &atoms)?;
        let gfm = ltl_to_gfm_gf(&f, &atoms)?;
        let out = redux(&gfm)?;
        let k = out.pa.alphabet().index_arity();
        for seed in 0..50u64 {
            let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(seed), &al, 6, 3);
            let mi = m.indexed(k);
            let v = exact(&solve_nba(&m, &dba, mode)?)?;
            let direct = exact(&solve_nba(&m, &gfm, mode)?)?;
            let pa = exact(&solve_pa(&mi, &out.pa, mode)?)?;
            let indexed = exact(&solve_nba(&mi, &out.dba, mode)?)?;
            ensure!(
                direct == v && pa == v && indexed == v,
                "{name}, seed {seed}: reference {v}, direct {direct}, PA {pa}, indexed DBA {indexed}"
            );
            cases += 1;
            if !v.is_integer() {
                fractional += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!(
        "{cases} cases, {fractional} with fractional values, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

#[test]
fn criterion_4_routes_agree() {
    report(
        4,
        "reference DBA, direct NBA and redux PA routes agree",
        criterion_4(),
    );
}

/// `pa_lasso_prob` is 0 or 1 and matches membership in the step-one DBA.
fn zero_one(out: &ReduxOutput, rng: &mut ChaCha8Rng, lassos: usize) -> Result<()> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    for _ in 0..lassos {
        let w = LassoWord::random(rng, out.pa.alphabet(), 6, 6);
        let p = pa_lasso_prob(&out.pa, &w);
        let member = lasso_member(&out.dba, &w)?;
        ensure!(
            p == zero || p == one,
            "probability {p} on {}",
            w.describe(out.pa.alphabet())
        );
        ensure!(
            (p == one) == member,
            "PA gives {p}, DBA says {member} on {}",
            w.describe(out.pa.alphabet())
        );
    }
    Ok(())
}

fn criterion_5() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pipelines: Vec<(String, ReduxOutput)> = Vec::new();
    for (name, f, atoms) in route_formulas() {
        pipelines.push((name, redux(&ltl_to_gfm_gf(&f, &atoms)?)?));
    }
    for n in 2..=4 {
        let (name, f, atoms) = pattern(Family::Tdr, n);
        pipelines.push((
            format!("{name} direct"),
            redux(&ltl_to_gfm_gf(&f, &atoms)?)?,
        ));
        pipelines.push((
            format!("{name} reference"),
            redux(&reference_dba(&f, &atoms)?)?,
        ));
    }
    for (name, out) in &pipelines {
        zero_one(out, &mut rng, 1000).with_context(|| name.clone())?;
    }
    Ok(format!("{} pipelines x 1000 lassos", pipelines.len()))
}

#[test]
fn criterion_5_zero_one() {
    report(
        5,
        "redux PAs are 0/1 and agree with their DBA",
        criterion_5(),
    );
}

/// Breakpoint determinisation of a co-Büchi automaton: the run set plus the
/// states reached without a marked edge since the last breakpoint. A
/// breakpoint is a marked transition, so finitely many of them means some
/// run is eventually unmarked.
fn determinise_cobuchi(n: &Automaton) -> Automaton {
    let al = n.alphabet().clone();
    let size = n.num_states();
    let start = (bitset(size, [n.initial()]), bitset(size, [n.initial()]));
    let mut d = Automaton::new(al.clone(), AcceptanceKind::CoBuchi, 1, 0);
    let mut ids: HashMap<(Vec<bool>, Vec<bool>), usize> = HashMap::from([(start.clone(), 0)]);
    let mut work = vec![start];
    while let Some((runs, fresh)) = work.pop() {
        let from = ids[&(runs.clone(), fresh.clone())];
        for l in al.letters() {
            let step = |set: &[bool], unmarked_only: bool| -> Vec<bool> {
                let mut out = vec![false; size];
                for q in (0..size).filter(|&q| set[q]) {
                    for e in n.succ(q, l) {
                        if !(unmarked_only && e.marked) {
                            out[e.to] = true;
                        }
                    }
                }
                out
            };
            let runs2 = step(&runs, false);
            let mut fresh2 = step(&fresh, true);
            let breakpoint = !fresh2.contains(&true);
            if breakpoint {
                fresh2 = step(&runs, true);
            }
            let key = (runs2, fresh2);
            let to = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = d.add_state();
                    ids.insert(key.clone(), id);
                    work.push(key);
                    id
                }
            };
            d.add_edge(from, l, to, breakpoint);
        }
    }
    d
}

fn bitset(size: usize, members: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut v = vec![false; size];
    for m in members {
        v[m] = true;
    }
    v
}

/// Language preservation and the structural checks for one redux run whose
/// input is `input`: the minimised co-Büchi automaton equals the complement
/// of the step-one DBA (exactly, both inclusions), the PA is 0/1 and agrees
/// with that DBA, the DBA agrees with the input on lassos, and minimisation
/// is idempotent.
fn check_redux(
    name: &str,
    input: &Automaton,
    out: &ReduxOutput,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let dca = dba_to_dca(&out.dba)?;
    ensure!(
        dcw_contained(&out.nca, &dca)?,
        "{name}: minimised automaton accepts too much"
    );
    ensure!(
        dcw_contained(&dca, &determinise_cobuchi(&out.nca))?,
        "{name}: minimised automaton accepts too little"
    );
    zero_one(out, rng, 1000).with_context(|| name.to_string())?;
    // The index only resolves the input's choices: an accepted indexed word
    // always projects to an accepted word, and for a deterministic input the
    // index is irrelevant.
    let pal = out.pa.alphabet();
    for _ in 0..1000 {
        let w = LassoWord::random(rng, pal, 6, 6);
        let base = w.map(|l| pal.bits(l));
        let accepted = lasso_member(input, &base)?;
        let indexed = lasso_member(&out.dba, &w)?;
        ensure!(
            accepted == indexed || (accepted && !input.is_deterministic()),
            "{name}: step-one DBA says {indexed} on {}, input says {accepted}",
            w.describe(pal)
        );
    }
    let again = minimize(&lift(&out.nca)?)?;
    ensure!(
        again.nca.num_states() == out.nca.num_states(),
        "{name}: minimising again gives {} states instead of {}",
        again.nca.num_states(),
        out.nca.num_states()
    );
    Ok(())
}

fn criterion_6() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut sizes = Vec::new();
    for n in 3..=6 {
        let (name, f, atoms) = pattern(Family::Tdr, n);
        let dba = reference_dba(&f, &atoms)?;
        let out = redux(&dba)?;
        check_redux(&name, &dba, &out, &mut rng)?;
        let (before, after) = (dba.num_states(), out.pa.num_states());
        ensure!(after <= before + 1, "{name}: {before} -> {after} states");
        sizes.push(format!("{name} {before}->{after}"));
    }
    let min3 = read_hoa(&fixture("min3.hoa"))?;
    ensure!(
        min3.kind() == AcceptanceKind::CoBuchi,
        "min3 fixture is not co-Büchi"
    );
    let reduced = minimize(&min3)?;
    ensure!(
        min3.num_states() == 3 && reduced.nca.num_states() == 2,
        "min3: {} -> {} states",
        min3.num_states(),
        reduced.nca.num_states()
    );
    ensure!(
        dcw_contained(&reduced.nca, &min3)?,
        "min3 result accepts too much"
    );
    ensure!(
        dcw_contained(&min3, &determinise_cobuchi(&reduced.nca))?,
        "min3 result accepts too little"
    );
    ensure!(
        minimize(&lift(&reduced.nca)?)?.nca.num_states() == 2,
        "min3 result is not a fixpoint"
    );
    sizes.push("min3 3->2".into());
    Ok(sizes.join(", "))
}

#[test]
fn criterion_6_reduction_soundness() {
    report(
        6,
        "redux preserves language and does not grow",
        criterion_6(),
    );
}

fn criterion_7() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sizes = Vec::new();
    for (file, text) in [
        ("dup_tdr2.hoa", "GF(a & X b)"),
        ("dup_ncs.hoa", "GF(a & X(b & X c))"),
        ("dup_xxxa.hoa", "GF((a & XXX a) | (!a & XXX !a))"),
    ] {
        let dup = read_hoa(&fixture(file))?;
        let (f, atoms) = parse(text)?;
        let original = ltl_to_gfm_gf(&f, &atoms)?;
        ensure!(
            dup.num_states() > original.num_states(),
            "{file} has no duplicated states"
        );
        let dup = dup.over_atoms(&atoms)?;
        for _ in 0..500 {
            let w = LassoWord::random(&mut rng, dup.alphabet(), 6, 6);
            ensure!(
                lasso_member(&dup, &w)? == eval_lasso(&f, &w.prefix, &w.cycle),
                "{file} disagrees with {text} on {}",
                w.describe(dup.alphabet())
            );
        }
        let out = redux(&dup)?;
        let clean = redux(&original)?;
        check_redux(file, &dup, &out, &mut rng)?;
        let got = out.pa.num_states();
        ensure!(
            got == clean.pa.num_states(),
            "{file}: {got} PA states, the undoubled automaton gives {}",
            clean.pa.num_states()
        );
        ensure!(
            got < out.dba.num_states(),
            "{file}: {got} PA states from a {}-state DBA",
            out.dba.num_states()
        );
        sizes.push(format!("{file} {}->{got}", dup.num_states()));
    }
    Ok(sizes.join(", "))
}

#[test]
fn criterion_7_duplicated_fixtures() {
    report(
        7,
        "redux removes duplicated states from GFM HOA fixtures",
        criterion_7(),
    );
}

/// Random co-safety formula in negation normal form over `atoms` atoms.
fn random_cosafety(rng: &mut ChaCha8Rng, atoms: usize, depth: u32) -> Ltl {
    if depth == 0 || rng.gen_bool(0.25) {
        let a = Ltl::atom(rng.gen_range(0..atoms));
        return if rng.gen_bool(0.5) { a } else { Ltl::not(a) };
    }
    let sub = |rng: &mut ChaCha8Rng| random_cosafety(rng, atoms, depth - 1);
    match rng.gen_range(0..5) {
        0 => Ltl::and(sub(rng), sub(rng)),
        1 => Ltl::or(sub(rng), sub(rng)),
        2 => Ltl::next(sub(rng)),
        3 => Ltl::finally(sub(rng)),
        _ => Ltl::until(sub(rng), sub(rng)),
    }
}

fn brute_force_mecs(succ: &[Vec<Vec<usize>>]) -> Vec<(Vec<usize>, Vec<Vec<usize>>)> {
    let n = succ.len();
    let mut ecs: Vec<(u32, Vec<Vec<usize>>)> = Vec::new();
    for mask in 1u32..(1 << n) {
        let inside = |s: usize| mask & (1 << s) != 0;
        let members: Vec<usize> = (0..n).filter(|&s| inside(s)).collect();
        let kept: Vec<Vec<usize>> = members
            .iter()
            .map(|&s| {
                (0..succ[s].len())
                    .filter(|&a| succ[s][a].iter().all(|&t| inside(t)))
                    .collect()
            })
            .collect();
        if kept.iter().any(Vec::is_empty) {
            continue;
        }
        let connected = members.iter().all(|&from| {
            let mut seen = bitset(n, [from]);
            let mut stack = vec![from];
            while let Some(u) = stack.pop() {
                let k = members.iter().position(|&m| m == u).unwrap();
                for &a in &kept[k] {
                    for &t in &succ[u][a] {
                        if !seen[t] {
                            seen[t] = true;
                            stack.push(t);
                        }
                    }
                }
            }
            members.iter().all(|&m| seen[m])
        });
        if connected {
            ecs.push((mask, kept));
        }
    }
    let mut out: Vec<_> = ecs
        .iter()
        .filter(|(m, _)| !ecs.iter().any(|(o, _)| o != m && o & m == *m))
        .map(|(m, kept)| {
            (
                (0..n).filter(|&s| m & (1 << s) != 0).collect(),
                kept.clone(),
            )
        })
        .collect();
    out.sort();
    out
}

fn mdp_graph(m: &Mdp) -> Vec<Vec<Vec<usize>>> {
    (0..m.num_states())
        .map(|s| {
            m.actions(s)
                .iter()
                .map(|a| a.succ.iter().map(|(t, _)| *t).collect())
                .collect()
        })
        .collect()
}

fn criterion_8() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let atoms = AtomSet::new(["a", "b", "c"])?;
    let mut lassos = 0;
    for i in 0..200 {
        let f = Ltl::gf(random_cosafety(&mut rng, 3, 4));
        let a = ltl_to_gfm_gf(&f, &atoms)
            .with_context(|| format!("formula {i}: {}", f.display(&atoms)))?;
        for _ in 0..50 {
            let w = LassoWord::random(&mut rng, a.alphabet(), 5, 5);
            let member = lasso_member(&a, &w)?;
            let truth = eval_lasso(&f, &w.prefix, &w.cycle);
            if member != truth {
                bail!(
                    "{} on {}: automaton says {member}, semantics says {truth}",
                    f.display(&atoms),
                    w.describe(a.alphabet())
                );
            }
            lassos += 1;
        }
    }

    let al = Alphabet::plain(AtomSet::new(["a", "b"])?)?;
    let mut mdps = 0;
    for seed in 0..500u64 {
        let m = random_mdp(&mut ChaCha8Rng::seed_from_u64(seed), &al, 5, 3);
        let g = mdp_graph(&m);
        let mut fast = maximal_end_components(&g);
        fast.sort();
        ensure!(fast == brute_force_mecs(&g), "MEC mismatch on seed {seed}");
        mdps += 1;
    }
    Ok(format!("200 formulas, {lassos} lassos, {mdps} MDPs"))
}

#[test]
fn criterion_8_oracle_integrity() {
    report(8, "lasso membership and MEC oracles", criterion_8());
}
