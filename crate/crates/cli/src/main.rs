use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gfmredux::automata::{hoa_export, lasso_member, LassoWord};
use gfmredux::gf_direct::ltl_to_gfm_gf;
use gfmredux::ltl::{gen_pattern, parse, parse_with, Family};
use gfmredux::mdp::{mdp_from_json, strategy_to_json, Mdp, SolveMode};
use gfmredux::rational::format_rational;
use gfmredux::redux::{pa_to_json, redux};
use gfmredux_cli::bench::{parse_grid, run_grid, timings_csv, to_csv, to_markdown, Status};
use gfmredux_cli::routes::{read_hoa, read_pa, solve, Objective, Route};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "gfmredux",
    version,
    about = "Good-for-MDP automata, reduction and MDP planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a benchmark formula, e.g. `gen-pattern TDR 6`.
    #[command(alias = "gen")]
    GenPattern { family: String, params: Vec<usize> },
    /// Build the direct good-for-MDP automaton of `GF φ` with `φ` co-safety.
    #[command(name = "ltl2gfm-gf")]
    Ltl2GfmGf {
        /// Formula text; read from stdin when absent.
        formula: Option<String>,
        /// Write the automaton as HOA.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the HOA on stdout (the state count then goes to stderr).
        #[arg(long)]
        print_hoa: bool,
    },
    /// Reduce a good-for-MDP Büchi automaton to a probabilistic automaton.
    Redux {
        #[arg(long = "in")]
        input: PathBuf,
        /// PA as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stage report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// The intermediate deterministic Büchi automaton as HOA.
        #[arg(long)]
        dba_out: Option<PathBuf>,
        /// The minimised co-Büchi automaton as HOA.
        #[arg(long)]
        dump_min: Option<PathBuf>,
    },
    /// Build an MDP product and print its size and end components.
    Product(ObjectiveArgs),
    /// Maximal probability of the objective, with an optimal strategy.
    Solve {
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// Strategy as JSON.
        #[arg(long)]
        strategy_out: Option<PathBuf>,
    },
    /// Run a benchmark grid.
    Bench {
        grid: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        md: Option<PathBuf>,
        /// Per-stage wall-clock times as CSV.
        #[arg(long)]
        timings: Option<PathBuf>,
        /// Per-case timeout in seconds, overriding the grid.
        #[arg(long)]
        timeout: Option<f64>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Compare two HOA automata on random lassos.
    CheckEquiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 1000)]
        lassos: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximal prefix and cycle length.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long)]
    mdp: PathBuf,
    /// `GF φ` formula over the MDP's propositions.
    #[arg(long, conflicts_with_all = ["hoa", "pa"])]
    formula: Option<String>,
    /// Büchi automaton as HOA.
    #[arg(long, conflicts_with = "pa")]
    hoa: Option<PathBuf>,
    /// PA written by `redux --out` (redux-pa route only).
    #[arg(long)]
    pa: Option<PathBuf>,
    /// gf-direct, redux-pa or dba-oracle.
    #[arg(long, default_value = "gf-direct")]
    route: Route,
    /// Force exact or float arithmetic (otherwise GFMREDUX_EXACT, then size).
    #[arg(long, value_parser = ["exact", "float"])]
    mode: Option<String>,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn path_str(p: &Path) -> Result<&str> {
    p.to_str().context("path is not valid UTF-8")
}

fn solve_mode(arg: Option<&str>) -> Result<Option<SolveMode>> {
    match arg {
        Some("exact") => return Ok(Some(SolveMode::Exact)),
        Some("float") => return Ok(Some(SolveMode::Float)),
        _ => {}
    }
    match std::env::var("GFMREDUX_EXACT").ok().as_deref() {
        None | Some("") => Ok(None),
        Some("1") => Ok(Some(SolveMode::Exact)),
        Some("0") => Ok(Some(SolveMode::Float)),
        Some(v) => bail!("GFMREDUX_EXACT must be 0 or 1, got '{v}'"),
    }
}

fn load_objective(args: &ObjectiveArgs, m: &Mdp) -> Result<Objective> {
    match (&args.formula, &args.hoa, &args.pa) {
        (Some(f), None, None) => Ok(Objective::Formula(parse_with(f, m.alphabet().atoms())?)),
        (None, Some(h), None) => Ok(Objective::Automaton(read_hoa(path_str(h)?)?)),
        (None, None, Some(p)) => Ok(Objective::Pa(read_pa(path_str(p)?)?)),
        _ => bail!("give exactly one of --formula, --hoa and --pa"),
    }
}

fn cmd_gen(family: &str, params: &[usize]) -> Result<()> {
    let family: Family = family.parse()?;
    let (f, atoms) = gen_pattern(family, params)?;
    println!("{}", f.display(&atoms));
    Ok(())
}

fn cmd_ltl2gfm(formula: Option<String>, out: Option<PathBuf>, print_hoa: bool) -> Result<()> {
    let text = match formula {
        Some(t) => t,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let (f, atoms) = parse(text.trim())?;
    let a = ltl_to_gfm_gf(&f, &atoms)?;
    let hoa = hoa_export(&a)?;
    if let Some(p) = &out {
        write_text(p, &hoa)?;
    }
    if print_hoa {
        print!("{hoa}");
        eprintln!("states: {}", a.num_states());
    } else {
        println!("states: {}", a.num_states());
    }
    Ok(())
}

fn cmd_redux(
    input: &Path,
    out: Option<PathBuf>,
    report: Option<PathBuf>,
    dba_out: Option<PathBuf>,
    dump_min: Option<PathBuf>,
) -> Result<()> {
    let a = read_hoa(path_str(input)?)?;
    let result = redux(&a)?;
    println!("input: {} states", result.report.input_states);
    for s in &result.report.stages {
        println!(
            "{}: {} states, {} marked, {:.6}s",
            s.name, s.states, s.marked, s.elapsed_s
        );
    }
    println!("index arity: {}", result.report.index_arity);
    if let Some(p) = &out {
        write_text(p, &pa_to_json(&result.pa))?;
    }
    if let Some(p) = &report {
        write_text(p, &(serde_json::to_string_pretty(&result.report)? + "\n"))?;
    }
    if let Some(p) = &dba_out {
        write_text(p, &hoa_export(&result.dba)?)?;
    }
    if let Some(p) = &dump_min {
        write_text(p, &hoa_export(&result.nca)?)?;
    }
    Ok(())
}

fn cmd_product(args: &ObjectiveArgs) -> Result<()> {
    let m = mdp_from_json(&read_text(&args.mdp)?)?;
    let objective = load_objective(args, &m)?;
    // Solving builds exactly the product the route uses, MECs included.
    let (sol, _) = solve(
        &m,
        &objective,
        args.route,
        solve_mode(args.mode.as_deref())?,
    )?;
    let p = &sol.product;
    let mecs = &sol.mecs;
    println!("route: {}", args.route);
    println!("product states: {}", p.num_states());
    println!("actions: {}", p.num_actions());
    println!("transitions: {}", p.num_edges());
    println!(
        "mecs: {} (accepting {}, leaf {})",
        mecs.len(),
        mecs.iter().filter(|m| m.accepting).count(),
        mecs.iter().filter(|m| m.leaf).count()
    );
    Ok(())
}

fn cmd_solve(args: &ObjectiveArgs, strategy_out: Option<PathBuf>) -> Result<()> {
    let m = mdp_from_json(&read_text(&args.mdp)?)?;
    let objective = load_objective(args, &m)?;
    let (sol, product_mdp) = solve(
        &m,
        &objective,
        args.route,
        solve_mode(args.mode.as_deref())?,
    )?;
    println!("route: {}", args.route);
    println!("product states: {}", sol.product.num_states());
    match sol.value() {
        Some(v) => {
            println!("value: {}", format_rational(&v));
            println!("decimal: {:.12}", sol.value_f64());
        }
        None => {
            println!("value: ~{:.12}", sol.value_f64());
            println!("decimal: {:.12}", sol.value_f64());
        }
    }
    if let Some(p) = &strategy_out {
        write_text(p, &strategy_to_json(&product_mdp, &sol))?;
    }
    Ok(())
}

fn cmd_bench(
    grid: &Path,
    csv: Option<PathBuf>,
    md: Option<PathBuf>,
    timings: Option<PathBuf>,
    timeout: Option<f64>,
    jobs: usize,
) -> Result<()> {
    let cases = parse_grid(&read_text(grid)?, timeout)?;
    let rows = run_grid(&cases, jobs)?;
    let table = to_markdown(&cases, &rows);
    print!("{table}");
    for row in rows.iter().filter(|r| r.status == Status::Error) {
        eprintln!("{}: {}", row.id, row.message.as_deref().unwrap_or("error"));
    }
    if let Some(p) = &csv {
        write_text(p, &to_csv(&cases, &rows))?;
    }
    if let Some(p) = &md {
        write_text(p, &table)?;
    }
    if let Some(p) = &timings {
        write_text(p, &timings_csv(&rows))?;
    }
    Ok(())
}

/// Returns whether the automata agreed on every sampled lasso.
fn cmd_check_equiv(
    left: &Path,
    right: &Path,
    lassos: usize,
    seed: u64,
    max_len: usize,
) -> Result<bool> {
    let a = read_hoa(path_str(left)?)?;
    let b = read_hoa(path_str(right)?)?;
    let b = if a.alphabet().atoms().names().len() == b.alphabet().atoms().names().len() {
        b.over_atoms(a.alphabet().atoms())?
    } else {
        bail!("the automata have different propositions");
    };
    if a.alphabet().index_arity() != b.alphabet().index_arity() {
        bail!("the automata have different index arities");
    }
    if max_len == 0 {
        bail!("--max-len must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..lassos {
        let w = LassoWord::random(&mut rng, a.alphabet(), max_len, max_len);
        let (x, y) = (lasso_member(&a, &w)?, lasso_member(&b, &w)?);
        if x != y {
            println!(
                "languages differ on {}: left {}, right {}",
                w.describe(a.alphabet()),
                if x { "accepts" } else { "rejects" },
                if y { "accepts" } else { "rejects" }
            );
            return Ok(false);
        }
    }
    println!("no difference found on {lassos} lassos");
    Ok(true)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenPattern { family, params } => cmd_gen(&family, &params)?,
        Command::Ltl2GfmGf {
            formula,
            out,
            print_hoa,
        } => cmd_ltl2gfm(formula, out, print_hoa)?,
        Command::Redux {
            input,
            out,
            report,
            dba_out,
            dump_min,
        } => cmd_redux(&input, out, report, dba_out, dump_min)?,
        Command::Product(args) => cmd_product(&args)?,
        Command::Solve {
            objective,
            strategy_out,
        } => cmd_solve(&objective, strategy_out)?,
        Command::Bench {
            grid,
            csv,
            md,
            timings,
            timeout,
            jobs,
        } => cmd_bench(&grid, csv, md, timings, timeout, jobs)?,
        Command::CheckEquiv {
            left,
            right,
            lassos,
            seed,
            max_len,
        } => {
            if !cmd_check_equiv(&left, &right, lassos, seed, max_len)? {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// 2 for objectives outside the supported fragment, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    let unsupported = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<gfmredux::Error>(),
            Some(gfmredux::Error::NotGfCoSafety | gfmredux::Error::NotCoSafety)
        )
    });
    if unsupported {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
