use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gfmredux"));
    c.env_remove("GFMREDUX_EXACT");
    c
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn value_line(o: &Output) -> String {
    stdout(o)
        .lines()
        .find(|l| l.starts_with("value: "))
        .unwrap_or_default()
        .to_string()
}

#[test]
fn gen_pattern_feeds_ltl2gfm_gf() {
    let gen = run(&["gen", "TDR", "6"]);
    assert!(gen.status.success());
    let mut child = bin()
        .arg("ltl2gfm-gf")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "states: 7\n");
}

#[test]
fn gen_pattern_rejects_unknown_family() {
    let out = run(&["gen-pattern", "XYZ", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown pattern family"));
}

#[test]
fn ltl2gfm_gf_exit_codes() {
    let ok = run(&["ltl2gfm-gf", "GF(a|b)"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "states: 1\n");

    let not_gf = run(&["ltl2gfm-gf", "G a"]);
    assert_eq!(not_gf.status.code(), Some(2));
    assert!(stderr(&not_gf).contains("GF body must be co-safety"));

    let bad = run(&["ltl2gfm-gf", "GF (a &"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("parse error"));
}

#[test]
fn ltl2gfm_gf_writes_hoa() {
    let dir = tempfile::tempdir().unwrap();
    let hoa = dir.path().join("a.hoa");
    let out = run(&["ltl2gfm-gf", "GF(a & X b)", "--out", p(&hoa)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&hoa).unwrap();
    assert!(text.starts_with("HOA: v1\n"));
    assert!(text.contains("States: 2"));

    let printed = run(&["ltl2gfm-gf", "GF(a & X b)", "--print-hoa"]);
    assert_eq!(stdout(&printed), text);
    assert_eq!(stderr(&printed), "states: 2\n");
}

#[test]
fn redux_outputs_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (pa, report, dba, min) = (
        dir.path().join("pa.json"),
        dir.path().join("report.json"),
        dir.path().join("dba.hoa"),
        dir.path().join("min.hoa"),
    );
    let out = run(&[
        "redux",
        "--in",
        p(&fixture("dup_ncs.hoa")),
        "--out",
        p(&pa),
        "--report",
        p(&report),
        "--dba-out",
        p(&dba),
        "--dump-min",
        p(&min),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("nca_to_pa: 4 states"));

    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let names: Vec<&str> = rep["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["gfm_to_dba", "dba_to_dca", "minimize", "nca_to_pa"]);
    assert_eq!(rep["input_states"], 5);
    assert_eq!(rep["gfm_asserted_by_caller"], true);

    let pa_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&pa).unwrap()).unwrap();
    assert_eq!(pa_json["states"], 4);
    assert_eq!(pa_json["index_arity"], 2);
    for t in pa_json["transitions"].as_array().unwrap() {
        assert!(t["prob"].is_string());
        assert!(t["letter"].is_array());
    }
    assert!(std::fs::read_to_string(&dba)
        .unwrap()
        .contains("deterministic"));
    assert!(std::fs::read_to_string(&min).unwrap().contains("Fin(0)"));

    // The written PA plugs straight into solve.
    let mdp = dir.path().join("m.json");
    std::fs::write(
        &mdp,
        r#"{"aps": ["a", "b", "c"], "states": 1, "initial": 0, "actions": [["t"]],
            "transitions": [{"from": 0, "action": "t", "to": 0, "prob": "1"}],
            "labels": [{"state": 0, "action": "t", "letter": ["a", "b", "c"]}]}"#,
    )
    .unwrap();
    let solved = run(&[
        "solve",
        "--mdp",
        p(&mdp),
        "--pa",
        p(&pa),
        "--route",
        "redux-pa",
    ]);
    assert!(solved.status.success(), "{}", stderr(&solved));
    assert_eq!(value_line(&solved), "value: 1");
}

#[test]
fn redux_on_one_state_automaton() {
    let dir = tempfile::tempdir().unwrap();
    let hoa = dir.path().join("gfa.hoa");
    assert!(run(&["ltl2gfm-gf", "GF a", "--out", p(&hoa)])
        .status
        .success());
    let report = dir.path().join("r.json");
    let out = run(&["redux", "--in", p(&hoa), "--report", p(&report)]);
    assert!(out.status.success());
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["stages"].as_array().unwrap().len(), 4);
    assert_eq!(rep["stages"][3]["states"], 1);
}

#[test]
fn redux_rejects_malformed_hoa_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hoa");
    std::fs::write(
        &bad,
        "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"a\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0\n[0 & ] 0\n--END--\n",
    )
    .unwrap();
    let out = run(&["redux", "--in", p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("line 8, column 6"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn redux_rejects_co_buchi_input() {
    let out = run(&["redux", "--in", p(&fixture("min3.hoa"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Büchi"));
}

#[test]
fn solve_non_gfm_fixture() {
    let mdp = fixture("nongfm_mdp.json");
    let guess = run(&[
        "solve",
        "--mdp",
        p(&mdp),
        "--hoa",
        p(&fixture("nongfm_nba.hoa")),
    ]);
    assert!(guess.status.success(), "{}", stderr(&guess));
    assert_eq!(value_line(&guess), "value: 1/2");
    assert!(stdout(&guess).contains("decimal: 0.500000000000"));

    let waiting = run(&[
        "solve",
        "--mdp",
        p(&mdp),
        "--hoa",
        p(&fixture("nongfm_waiting.hoa")),
    ]);
    assert_eq!(value_line(&waiting), "value: 1");

    let oracle = run(&[
        "solve",
        "--mdp",
        p(&mdp),
        "--hoa",
        p(&fixture("nongfm_dba.hoa")),
        "--route",
        "dba-oracle",
    ]);
    assert_eq!(value_line(&oracle), "value: 1");

    let nondet_oracle = run(&[
        "solve",
        "--mdp",
        p(&mdp),
        "--hoa",
        p(&fixture("nongfm_nba.hoa")),
        "--route",
        "dba-oracle",
    ]);
    assert_eq!(nondet_oracle.status.code(), Some(1));
}

#[test]
fn solve_writes_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let strat = dir.path().join("s.json");
    let out = run(&[
        "solve",
        "--mdp",
        p(&fixture("nongfm_mdp.json")),
        "--hoa",
        p(&fixture("nongfm_nba.hoa")),
        "--strategy-out",
        p(&strat),
    ]);
    assert!(out.status.success());
    let s: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&strat).unwrap()).unwrap();
    let states = s["product_states"].as_array().unwrap();
    let choice = s["choice"].as_array().unwrap();
    assert_eq!(states.len(), choice.len());
    assert_eq!(states[0], serde_json::json!([0, 0]));
    for c in choice {
        assert_eq!(c["state"].as_array().unwrap().len(), 2);
        for entry in c["dist"].as_array().unwrap() {
            assert!(entry[0].is_string() && entry[1].is_string());
        }
    }
    // The first step chooses between the two automaton successors.
    let first = choice[0]["dist"][0][0].as_str().unwrap();
    assert!(first == "go[1]" || first == "go[2]", "{first}");
}

#[test]
fn solve_formula_on_all_routes() {
    let mdp = fixture("always_a_mdp.json");
    for route in ["gf-direct", "redux-pa", "dba-oracle"] {
        let out = run(&[
            "solve",
            "--mdp",
            p(&mdp),
            "--formula",
            "GF a",
            "--route",
            route,
        ]);
        assert!(out.status.success(), "{route}: {}", stderr(&out));
        assert_eq!(value_line(&out), "value: 1", "{route}");
    }
    let unknown = run(&["solve", "--mdp", p(&mdp), "--formula", "GF z"]);
    assert_eq!(unknown.status.code(), Some(1));
    let not_gf = run(&["solve", "--mdp", p(&mdp), "--formula", "F a"]);
    assert_eq!(not_gf.status.code(), Some(2));
}

#[test]
fn float_mode_from_the_environment() {
    let out = bin()
        .args([
            "solve",
            "--mdp",
            p(&fixture("nongfm_mdp.json")),
            "--hoa",
            p(&fixture("nongfm_nba.hoa")),
        ])
        .env("GFMREDUX_EXACT", "0")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(value_line(&out), "value: ~0.500000000000");
    let bad = bin()
        .args([
            "solve",
            "--mdp",
            p(&fixture("always_a_mdp.json")),
            "--formula",
            "GF a",
        ])
        .env("GFMREDUX_EXACT", "yes")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn product_stats() {
    let out = run(&[
        "product",
        "--mdp",
        p(&fixture("nongfm_mdp.json")),
        "--hoa",
        p(&fixture("nongfm_nba.hoa")),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("product states: 7\n"), "{text}");
    assert!(text.contains("mecs: 4 (accepting 2, leaf 4)\n"), "{text}");
}

#[test]
fn bench_tables_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let grid = fixture("grid_main.json");
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let csv = dir.path().join(format!("t{i}.csv"));
        let md = dir.path().join(format!("t{i}.md"));
        let timings = dir.path().join(format!("t{i}.times.csv"));
        let out = run(&[
            "bench",
            p(&grid),
            "--csv",
            p(&csv),
            "--md",
            p(&md),
            "--timings",
            p(&timings),
            "--jobs",
            jobs,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(std::fs::read_to_string(&timings)
            .unwrap()
            .starts_with("case,route,stage,seconds\n"));
        outputs.push((
            std::fs::read_to_string(&csv).unwrap(),
            std::fs::read_to_string(&md).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(
        outputs[0].0,
        "case,status,gf-direct\nTDR[6],ok,7\nTDR[7],ok,8\nTDR[8],ok,9\nTDR[9],ok,10\nTDR[10],ok,11\n\
         LIB[6],ok,13\nLIB[7],ok,15\nLIB[8],ok,17\nLIB[9],ok,19\n"
    );
    assert!(outputs[0].1.contains("| TDR[6] | ok | **7** |"));
}

#[test]
fn bench_bolds_the_smallest_count() {
    let out = run(&["bench", p(&fixture("grid_redux.json"))]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("| TDR[3] | ok | **4** | 8 | 5 | 8 |"),
        "{text}"
    );
}

#[test]
fn bench_timeout_and_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(
        &grid,
        r#"{"cases": [{"family": "TDR", "params": [16], "routes": ["dba-oracle"]},
                      {"formula": "G a"},
                      {"formula": "GF a"}]}"#,
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&["bench", p(&grid), "--timeout", "0.05", "--csv", p(&csv)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "case,status,gf-direct,dba-oracle\nTDR[16],timeout,,\nG a,error,,\nGF a,ok,1,\n"
    );
}

#[test]
fn check_equiv_exit_codes() {
    let same = run(&[
        "check-equiv",
        p(&fixture("nongfm_nba.hoa")),
        p(&fixture("nongfm_dba.hoa")),
        "--lassos",
        "500",
        "--seed",
        "3",
    ]);
    assert_eq!(same.status.code(), Some(0), "{}", stdout(&same));
    assert!(stdout(&same).contains("no difference found on 500 lassos"));

    let differ = run(&[
        "check-equiv",
        p(&fixture("nongfm_nba.hoa")),
        p(&fixture("nongfm_waiting.hoa")),
        "--max-len",
        "4",
    ]);
    assert_eq!(differ.status.code(), Some(3));
    assert!(stdout(&differ).starts_with("languages differ on "));
}
