//! `polydom`: command-line front end for the solver, the reductions, the
//! sequence harness and the game service.

use std::fs;
use std::io::Read;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polydom_core::sequences::{parse_duration, run_sequence, Axis, Family, SequenceSpec};
use polydom_core::{
    build_chess_graph, check_min_max_inequality, enumerate_optima, find_claw, random_polyomino, read_board,
    solve_problem, verify, write_board, Board, Budget, Objective, Piece, Placement, Problem, Solution, Status,
};
use polydom_reduction::{
    assignment_to_placement, builtin_templates, check_gadget, generate_p3sat3, parse_sat, reduce_queens,
    reduce_queens_with_plan, reduce_rooks, QueenPlan, ReductionBundle, SatInstance,
};
use polydom_service::{ServiceConfig, DEFAULT_PORT};
use rand::SeedableRng;
use serde_json::{json, Value};
use thiserror::Error;

const BUDGET_ENV: &str = "POLYDOM_BUDGET_MS";

#[derive(Debug, Error)]
enum CliError {
    /// Bad flag values that clap cannot catch. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// The command ran and the answer is negative or unavailable. Exit code 1.
    #[error("{0}")]
    Domain(String),
}

type CliResult = Result<(), CliError>;

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Sense {
    Min,
    Max,
}

#[derive(Parser)]
#[command(name = "polydom", version, about = "Rook and queen domination on polyominoes and polycubes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Board file, JSON or `#`/`.` ASCII.
    #[arg(long)]
    board: PathBuf,
    #[arg(long)]
    piece: Piece,
    #[arg(long, value_enum, default_value = "min")]
    objective: Sense,
    /// Forbid pieces attacking each other. Implied by `--objective max`.
    #[arg(long)]
    independent: bool,
    /// Require every cell to be attacked or occupied. Implied by
    /// `--objective min`.
    #[arg(long)]
    dominating: bool,
    /// Solver time limit, e.g. `30s`. Overrides POLYDOM_BUDGET_MS.
    #[arg(long, value_parser = parse_duration)]
    budget: Option<Duration>,
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal placement.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Also write the witness as placement JSON.
        #[arg(long)]
        placement_out: Option<PathBuf>,
    },
    /// Check a placement for domination and independence.
    Verify {
        #[arg(long)]
        board: PathBuf,
        /// Placement JSON, or `-` for stdin. The JSON output of `solve` is
        /// accepted as well.
        #[arg(long)]
        placement: PathBuf,
        /// Exit 1 unless the placement dominates.
        #[arg(long)]
        require_dominating: bool,
        /// Exit 1 unless the placement is independent.
        #[arg(long)]
        require_independent: bool,
    },
    /// List every optimal placement.
    Enumerate {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Print at most this many placements.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Compile a planar 3-SAT formula into a rook or queen instance.
    Reduce {
        #[arg(long)]
        piece: Piece,
        /// DIMACS CNF file.
        #[arg(long, conflicts_with = "random_vars", required_unless_present = "random_vars")]
        sat: Option<PathBuf>,
        /// Generate a random formula over this many variables instead.
        #[arg(long)]
        random_vars: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the hand-drawn queen layout for the three-variable example.
        #[arg(long)]
        drawn: bool,
        /// Directory for board.json, bundle.json and certificate.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every built-in gadget and check its claimed optimum.
    GadgetCheck {
        /// Only this template.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_parser = parse_duration)]
        budget: Option<Duration>,
    },
    /// Hypercube value tables.
    Seq {
        #[arg(long)]
        family: String,
        /// Dimension: a number, or a range `a..b` when `--n` is fixed.
        #[arg(long)]
        d: String,
        /// Side length: a number, or a range `a..b` when `--d` is fixed.
        #[arg(long)]
        n: String,
        /// Per-point time limit, e.g. `60s`.
        #[arg(long, value_parser = parse_duration)]
        budget: Option<Duration>,
        /// Directory holding the results cache.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Claw search and the independent domination inequality on a board.
    GraphCheck {
        #[arg(long)]
        board: PathBuf,
        #[arg(long)]
        piece: Piece,
        /// Claw order to search for; defaults to directions + 1.
        #[arg(long)]
        claw: Option<usize>,
        #[arg(long, value_parser = parse_duration)]
        budget: Option<Duration>,
    },
    /// Generate a random polyomino.
    RandomBoard {
        #[arg(long, default_value_t = 50)]
        tiles: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        percolation: f64,
        /// Write here instead of stdout; `.txt` gets ASCII, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the game HTTP service.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Session lifetime.
        #[arg(long, value_parser = parse_duration, default_value = "1h")]
        ttl: Duration,
        /// Per-session solve limit.
        #[arg(long, value_parser = parse_duration, default_value = "60s")]
        budget: Duration,
        /// Allowed CORS origin; any when omitted.
        #[arg(long)]
        origin: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polydom: {e}");
            ExitCode::from(match e {
                CliError::Domain(_) => 1,
                CliError::Usage(_) => 2,
            })
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let f = cli.format;
    match cli.command {
        Command::Solve { problem, placement_out } => cmd_solve(f, &problem, placement_out.as_deref()),
        Command::Verify {
            board,
            placement,
            require_dominating,
            require_independent,
        } => cmd_verify(f, &board, &placement, require_dominating, require_independent),
        Command::Enumerate { problem, limit } => cmd_enumerate(f, &problem, limit),
        Command::Reduce {
            piece,
            sat,
            random_vars,
            seed,
            drawn,
            out,
        } => cmd_reduce(f, piece, sat.as_deref(), random_vars, seed, drawn, out.as_deref()),
        Command::GadgetCheck { name, budget } => cmd_gadgets(f, name.as_deref(), budget),
        Command::Seq {
            family,
            d,
            n,
            budget,
            cache,
            jobs,
        } => cmd_seq(f, &family, &d, &n, budget, cache.as_deref(), jobs),
        Command::GraphCheck {
            board,
            piece,
            claw,
            budget,
        } => cmd_graph(f, &board, piece, claw, budget),
        Command::RandomBoard {
            tiles,
            seed,
            percolation,
            out,
        } => cmd_random(f, tiles, seed, percolation, out.as_deref()),
        Command::Serve {
            port,
            host,
            ttl,
            budget,
            origin,
        } => cmd_serve(&host, port, ttl, budget, origin),
    }
}

/// Flag, then POLYDOM_BUDGET_MS, then the solver default.
fn budget(flag: Option<Duration>) -> Result<Budget, CliError> {
    if let Some(d) = flag {
        return Ok(Budget::with_time(d));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(ms) => ms
            .trim()
            .parse::<u64>()
            .map(|ms| Budget::with_time(Duration::from_millis(ms)))
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} must be milliseconds, got {ms:?}"))),
        Err(_) => Ok(Budget::default()),
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn load_board(path: &Path) -> Result<Board, CliError> {
    read_board(path).map_err(domain)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(domain)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

impl ProblemArgs {
    fn problem(&self) -> Result<Problem, CliError> {
        let board = load_board(&self.board)?;
        let (objective, independence, domination) = match self.objective {
            Sense::Min => (Objective::Minimize, self.independent, true),
            Sense::Max => (Objective::Maximize, true, self.dominating),
        };
        Problem::new(board, self.piece, objective, independence, domination).map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn cells_text(p: &Placement) -> String {
    p.cells
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.coords().iter().map(i32::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The board as `#`/`.` with pieces drawn as `R` or `Q`. Two dimensions only.
fn picture(board: &Board, placement: Option<&Placement>) -> Option<String> {
    let ascii = board.to_ascii().ok()?;
    let Some(p) = placement else { return Some(ascii) };
    let mark = p.piece.name().chars().next().unwrap().to_ascii_uppercase();
    let (x0, _) = board.bounds()[0];
    let (_, y1) = board.bounds()[1];
    let mut rows: Vec<Vec<char>> = ascii.lines().map(|l| l.chars().collect()).collect();
    for c in &p.cells {
        let xy = c.coords();
        rows[(y1 - xy[1]) as usize][(xy[0] - x0) as usize] = mark;
    }
    Some(rows.into_iter().map(|r| r.into_iter().collect::<String>() + "\n").collect())
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Optimal => "optimal",
        Status::Infeasible => "infeasible",
        Status::BudgetExceeded => "budget-exceeded",
    }
}

fn solution_outcome(sol: &Solution) -> CliResult {
    match sol.status {
        Status::Optimal => Ok(()),
        Status::Infeasible => Err(CliError::Domain("problem is infeasible".into())),
        Status::BudgetExceeded => Err(CliError::Domain(format!(
            "budget exhausted after {} nodes; best found {:?}, bound {:?}",
            sol.stats.nodes, sol.value, sol.bound
        ))),
    }
}

fn cmd_solve(f: Format, args: &ProblemArgs, placement_out: Option<&Path>) -> CliResult {
    let problem = args.problem()?;
    let sol = solve_problem(&problem, &budget(args.budget)?);
    if let (Some(path), Some(w)) = (placement_out, &sol.witness) {
        write_file(path, &w.to_json())?;
    }
    match f {
        Format::Json => {
            let mut v = sol.to_json();
            v["problem"] = json!(problem.label());
            v["bound"] = json!(sol.bound);
            v["placement"] = serde_json::to_value(&sol.witness).unwrap();
            print_json(&v);
        }
        Format::Human => {
            let value = sol.value.map_or("-".to_string(), |v| v.to_string());
            println!(
                "{}: {value} ({}, {} nodes, {} ms)",
                problem.label(),
                status_name(sol.status),
                sol.stats.nodes,
                sol.stats.millis
            );
            if let Some(w) = &sol.witness {
                println!("witness: {}", cells_text(w));
                if let Some(pic) = picture(&problem.board, Some(w)) {
                    print!("{pic}");
                }
            }
        }
    }
    solution_outcome(&sol)
}

fn parse_placement(text: &str) -> Result<Placement, CliError> {
    let direct = Placement::from_json(text);
    if direct.is_ok() {
        return direct.map_err(domain);
    }
    let wrapped = serde_json::from_str::<Value>(text).ok().and_then(|v| v.get("placement").cloned());
    match wrapped {
        Some(Value::Null) => Err(CliError::Domain("solve output carries no placement".into())),
        Some(inner) => Placement::from_json(&inner.to_string()).map_err(domain),
        None => direct.map_err(|e| CliError::Domain(format!("placement: {e}"))),
    }
}

fn cmd_verify(f: Format, board: &Path, placement: &Path, need_dom: bool, need_ind: bool) -> CliResult {
    let board = load_board(board)?;
    let p = parse_placement(&read_input(placement)?)?;
    let report = verify(&board, p.piece, &p.cells).map_err(domain)?;
    match f {
        Format::Json => {
            let mut v = serde_json::to_value(&report).unwrap();
            v["piece"] = json!(p.piece);
            v["count"] = json!(p.len());
            print_json(&v);
        }
        Format::Human => {
            println!("{} {}s on {} cells", p.len(), p.piece, board.len());
            println!("dominates: {} ({} unguarded)", report.dominates, report.unguarded.len());
            println!("independent: {} ({} attacking pairs)", report.independent, report.conflicts.len());
        }
    }
    if need_dom && !report.dominates {
        return Err(CliError::Domain(format!("{} cells unguarded", report.unguarded.len())));
    }
    if need_ind && !report.independent {
        return Err(CliError::Domain(format!("{} attacking pairs", report.conflicts.len())));
    }
    Ok(())
}

fn cmd_enumerate(f: Format, args: &ProblemArgs, limit: Option<usize>) -> CliResult {
    let problem = args.problem()?;
    let sol = enumerate_optima(&problem.compile(), &budget(args.budget)?);
    let optima = sol.all_optima.clone().unwrap_or_default();
    let shown = &optima[..limit.unwrap_or(optima.len()).min(optima.len())];
    match f {
        Format::Json => print_json(&json!({
            "problem": problem.label(),
            "status": sol.status,
            "value": sol.value,
            "count": optima.len(),
            "optima": shown.iter().map(|p| &p.cells).collect::<Vec<_>>(),
        })),
        Format::Human => {
            let value = sol.value.map_or("-".to_string(), |v| v.to_string());
            println!(
                "{}: {value}, {} optimal placements ({})",
                problem.label(),
                optima.len(),
                status_name(sol.status)
            );
            for p in shown {
                println!("  {}", cells_text(p));
            }
        }
    }
    solution_outcome(&sol)
}

fn cmd_reduce(
    f: Format,
    piece: Piece,
    sat: Option<&Path>,
    random_vars: Option<usize>,
    seed: u64,
    drawn: bool,
    out: Option<&Path>,
) -> CliResult {
    let inst: SatInstance = match (sat, random_vars) {
        (Some(path), _) => parse_sat(&read_input(path)?).map_err(domain)?,
        (None, Some(n)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            generate_p3sat3(n, &mut rng)
                .ok_or_else(|| CliError::Usage(format!("cannot generate a formula over {n} variables")))?
        }
        (None, None) => return Err(CliError::Usage("give --sat or --random-vars".into())),
    };
    let (board, layout) = match (piece, drawn) {
        (Piece::Queen, true) => {
            let (b, l) = reduce_queens_with_plan(&inst, &QueenPlan::drawn_example()).map_err(domain)?;
            (b, l)
        }
        (Piece::Rook, true) => return Err(CliError::Usage("--drawn applies to queens only".into())),
        (Piece::Queen, false) => reduce_queens(&inst).map(|(b, _, l)| (b, l)).map_err(domain)?,
        (Piece::Rook, false) => reduce_rooks(&inst).map(|(b, _, l)| (b, l)).map_err(domain)?,
    };
    let solution = inst.brute_force();
    let certificate = match &solution {
        Some(a) if layout.polarity_mismatches.is_empty() => Some(assignment_to_placement(&layout, a).map_err(domain)?),
        _ => None,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| CliError::Domain(format!("{}: {e}", dir.display())))?;
        write_board(&board, dir.join("board.json")).map_err(domain)?;
        if let Some(c) = &certificate {
            write_file(&dir.join("certificate.json"), &c.to_json())?;
        }
        let bundle = ReductionBundle::new(&board, layout.clone(), certificate.clone());
        write_file(&dir.join("bundle.json"), &serde_json::to_string_pretty(&bundle).unwrap())?;
    }
    match f {
        Format::Json => print_json(&json!({
            "formula": inst.to_string(),
            "piece": piece,
            "cells": board.len(),
            "height": layout.height,
            "m": layout.m,
            "target": layout.target,
            "counts": layout.counts,
            "satisfiable": solution.is_some(),
            "assignment": solution,
            "polarity_mismatches": layout.polarity_mismatches.len(),
        })),
        Format::Human => {
            println!("formula: {inst}");
            println!("{} instance: {} cells, height {}", piece, board.len(), layout.height);
            let c = &layout.counts;
            match piece {
                Piece::Rook => println!("gadgets: {} variable, {} connection", c.n_var, c.n_connect),
                Piece::Queen => println!(
                    "elements with 2/3/4 neighbours: {}/{}/{}",
                    c.n_2neigh, c.n_3neigh, c.n_4neigh
                ),
            }
            println!("clause lengths: {:?}", c.clause_lengths);
            println!(
                "target: {} (m = {}, +1 per clause); satisfiable: {}",
                layout.target,
                layout.m,
                solution.is_some()
            );
            if !layout.polarity_mismatches.is_empty() {
                println!("polarity mismatches: {:?}", layout.polarity_mismatches);
            }
            if let Some(dir) = out {
                println!("wrote {}", dir.display());
            }
        }
    }
    Ok(())
}

fn cmd_gadgets(f: Format, name: Option<&str>, flag: Option<Duration>) -> CliResult {
    let budget = budget(flag)?;
    let templates: Vec<_> = builtin_templates()
        .into_iter()
        .filter(|t| name.is_none_or(|n| n == t.name))
        .collect();
    if templates.is_empty() {
        return Err(CliError::Usage(format!("no template named {:?}", name.unwrap_or(""))));
    }
    let mut rows = Vec::new();
    let mut failed = 0;
    for t in &templates {
        match check_gadget(t, &budget) {
            Ok(r) => {
                if f == Format::Human {
                    let optima = r.optima.map_or(String::new(), |k| format!(", {k} optima"));
                    println!(
                        "ok    {:<24} {:>4} cells  optimum {}{optima}  {} scenarios  {} ms",
                        r.name,
                        r.cells,
                        r.optimum,
                        r.scenarios.len(),
                        r.millis
                    );
                }
                rows.push(json!({ "ok": true, "report": r }));
            }
            Err(e) => {
                failed += 1;
                if f == Format::Human {
                    println!("FAIL  {e}");
                }
                rows.push(json!({ "ok": false, "name": t.name, "error": e.to_string() }));
            }
        }
    }
    if f == Format::Json {
        print_json(&Value::Array(rows));
    }
    if failed > 0 {
        return Err(CliError::Domain(format!("{failed} gadget(s) failed")));
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let r = polydom_core::sequences::parse_range(s).map_err(|e| CliError::Usage(e.to_string()))?;
    if r.is_empty() {
        return Err(CliError::Usage(format!("empty range {s:?}")));
    }
    Ok((*r.start(), *r.end()))
}

fn cmd_seq(
    f: Format,
    family: &str,
    d: &str,
    n: &str,
    flag: Option<Duration>,
    cache: Option<&Path>,
    jobs: usize,
) -> CliResult {
    let family: Family = family.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    let (d0, d1) = parse_range(d)?;
    let (n0, n1) = parse_range(n)?;
    let (axis, range) = match (d0 == d1, n0 == n1) {
        (true, _) => (Axis::FixedD(d0 as usize), n0..=n1),
        (false, true) => (Axis::FixedN(n0), d0..=d1),
        (false, false) => return Err(CliError::Usage("only one of --d and --n may be a range".into())),
    };
    let spec = SequenceSpec::new(family, axis, range, budget(flag)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let table = run_sequence(&spec, cache, jobs.max(1)).map_err(domain)?;
    match f {
        Format::Json => print_json(&json!({
            "family": family.name(),
            "cached": table.cached,
            "values": table.values(),
            "rows": table.rows,
        })),
        Format::Human => {
            print!("{}", table.render());
            if table.cached > 0 {
                println!("{} of {} points from cache", table.cached, table.rows.len());
            }
        }
    }
    let open = table.rows.iter().filter(|r| r.status != Status::Optimal).count();
    if open > 0 {
        return Err(CliError::Domain(format!("{open} point(s) not solved to optimality")));
    }
    Ok(())
}

fn cmd_graph(f: Format, board: &Path, piece: Piece, claw: Option<usize>, flag: Option<Duration>) -> CliResult {
    let board = load_board(board)?;
    let g = build_chess_graph(&board, piece);
    let size = claw.unwrap_or(g.m + 1);
    let found = find_claw(&g, size).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = check_min_max_inequality(&board, piece, &budget(flag)?).map_err(domain)?;
    let claw_cells = found.as_ref().map(|c| {
        (
            board.cell(c.center).clone(),
            c.leaves.iter().map(|&l| board.cell(l).clone()).collect::<Vec<_>>(),
        )
    });
    match f {
        Format::Json => print_json(&json!({
            "vertices": g.vertex_count(),
            "edges": g.edges().len(),
            "m": g.m,
            "claw_size": size,
            "claw": claw_cells,
            "min_max": report,
        })),
        Format::Human => {
            println!("{} graph: {} vertices, {} edges, {} directions", piece, g.vertex_count(), g.edges().len(), g.m);
            match &claw_cells {
                None => println!("{size}-claw: none"),
                Some((centre, leaves)) => println!("{size}-claw: centre {centre:?}, leaves {leaves:?}"),
            }
            println!(
                "independent domination: min {}, max {}; {} * {} >= {}: {}",
                report.min, report.max, report.m, report.min, report.max, report.holds
            );
        }
    }
    if found.is_some() {
        return Err(CliError::Domain(format!("found a {size}-claw")));
    }
    if !report.holds {
        return Err(CliError::Domain("min/max inequality fails".into()));
    }
    Ok(())
}

fn cmd_random(f: Format, tiles: usize, seed: Option<u64>, percolation: f64, out: Option<&Path>) -> CliResult {
    if tiles == 0 {
        return Err(CliError::Usage("--tiles must be positive".into()));
    }
    if !(0.0..=1.0).contains(&percolation) {
        return Err(CliError::Usage("--percolation must lie in [0, 1]".into()));
    }
    let seed = seed.unwrap_or_else(rand::random);
    let board = random_polyomino(tiles, seed, percolation);
    if let Some(path) = out {
        write_board(&board, path).map_err(domain)?;
    }
    match f {
        Format::Json => {
            let mut v: Value = serde_json::from_str(&board.to_json()).unwrap();
            v["seed"] = json!(seed);
            if let Some(path) = out {
                v = json!({ "seed": seed, "tiles": tiles, "out": path });
            }
            print_json(&v);
        }
        Format::Human => {
            if out.is_none() {
                print!("{}", board.to_ascii().map_err(domain)?);
            }
            eprintln!("seed {seed}, {tiles} tiles");
        }
    }
    Ok(())
}

fn cmd_serve(host: &str, port: u16, ttl: Duration, budget: Duration, origin: Option<String>) -> CliResult {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|_| CliError::Usage(format!("bad listen address {host}:{port}")))?;
    let config = ServiceConfig {
        ttl,
        budget: Budget::with_time(budget),
        allow_origin: origin,
        ..ServiceConfig::default()
    };
    let rt = tokio::runtime::Runtime::new().map_err(domain)?;
    eprintln!("listening on http://{addr}");
    rt.block_on(polydom_service::serve(addr, config)).map_err(domain)
}
