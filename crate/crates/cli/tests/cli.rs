use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use polydom_core::{hyperboard, verify, write_board, Board, Piece, Placement};
use serde_json::Value;

const SAMPLE: &str = "c three variables, four clauses\np cnf 3 4\n1 2 3 0\n1 -2 0\n-2 3 0\n-1 -3 0\n";

fn polydom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydom"))
        .args(args)
        .env_remove("POLYDOM_BUDGET_MS")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn board_file(dir: &Path, name: &str, board: &Board) -> String {
    let p = dir.join(name);
    write_board(board, &p).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_output_verifies_for_every_variant() {
    let dir = tempfile::tempdir().unwrap();
    let b = polydom_core::random_polyomino(18, 5, 0.5);
    let path = board_file(dir.path(), "b.json", &b);
    let variants: [(&[&str], bool, bool); 4] = [
        (&["--objective", "min"], true, false),
        (&["--objective", "min", "--independent"], true, true),
        (&["--objective", "max"], false, true),
        (&["--objective", "max", "--dominating"], true, true),
    ];
    for piece in ["rook", "queen"] {
        for (flags, dom, ind) in variants {
            let mut args = vec!["--format", "json", "solve", "--board", &path, "--piece", piece];
            args.extend_from_slice(flags);
            let out = polydom(&args);
            assert!(out.status.success(), "{args:?}");
            let mut child = Command::new(env!("CARGO_BIN_EXE_polydom"))
                .args(["--format", "json", "verify", "--board", &path, "--placement", "-"])
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .spawn()
                .unwrap();
            child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
            let checked = child.wait_with_output().unwrap();
            assert!(checked.status.success());
            let report = json_of(&checked);
            if dom {
                assert_eq!(report["dominates"], true, "{piece} {flags:?}");
            }
            if ind {
                assert_eq!(report["independent"], true, "{piece} {flags:?}");
            }
            assert_eq!(report["count"], json_of(&out)["value"]);
        }
    }
}

#[test]
fn placement_out_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    let b = hyperboard(2, 5).unwrap();
    let path = board_file(dir.path(), "sq.json", &b);
    let wit = dir.path().join("w.json");
    let out = polydom(&["solve", "--board", &path, "--piece", "rook", "--placement-out", wit.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("min dominating rook: 5 (optimal"), "{text}");
    let p = Placement::from_json(&std::fs::read_to_string(&wit).unwrap()).unwrap();
    assert_eq!(p.len(), 5);
    assert!(verify(&b, Piece::Rook, &p.cells).unwrap().dominates);
}

#[test]
fn enumerate_counts_rook_optima_on_three_by_three() {
    // A rook placement of size 3 dominates iff it fills every row or every
    // column: 27 + 27 - 6 permutation placements.
    let dir = tempfile::tempdir().unwrap();
    let path = board_file(dir.path(), "sq.json", &hyperboard(2, 3).unwrap());
    let out = polydom(&["--format", "json", "enumerate", "--board", &path, "--piece", "rook", "--limit", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["value"], 3);
    assert_eq!(v["count"], 48);
    assert_eq!(v["optima"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_requirements_set_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = board_file(dir.path(), "sq.json", &hyperboard(2, 3).unwrap());
    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"piece":"queen","cells":[[0,0],[1,1]]}"#).unwrap();
    let p = p.to_str().unwrap();
    let plain = polydom(&["verify", "--board", &path, "--placement", p]);
    assert_eq!(plain.status.code(), Some(0));
    let strict = polydom(&["verify", "--board", &path, "--placement", p, "--require-independent"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn usage_and_domain_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = board_file(dir.path(), "sq.json", &hyperboard(2, 4).unwrap());
    assert_eq!(polydom(&["solve", "--board", &path, "--piece", "bishop"]).status.code(), Some(2));
    assert_eq!(polydom(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        polydom(&["seq", "--family", "max-indep-queens", "--d", "2..3", "--n", "1..4"]).status.code(),
        Some(2)
    );
    assert_eq!(polydom(&["seq", "--family", "nope", "--d", "2", "--n", "1..4"]).status.code(), Some(2));
    assert_eq!(polydom(&["solve", "--board", "/nonexistent.json", "--piece", "rook"]).status.code(), Some(1));
    assert_eq!(polydom(&["gadget-check", "--name", "no-such-gadget"]).status.code(), Some(2));

    let bad_env = Command::new(env!("CARGO_BIN_EXE_polydom"))
        .args(["solve", "--board", &path, "--piece", "rook"])
        .env("POLYDOM_BUDGET_MS", "soon")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn budget_env_var_limits_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    let path = board_file(dir.path(), "big.json", &hyperboard(2, 12).unwrap());
    let out = Command::new(env!("CARGO_BIN_EXE_polydom"))
        .args(["--format", "json", "solve", "--board", &path, "--piece", "queen", "--independent"])
        .env("POLYDOM_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["status"], "budget-exceeded");
}

#[test]
fn random_board_is_reproducible() {
    let a = polydom(&["--format", "json", "random-board", "--tiles", "30", "--seed", "11"]);
    let b = polydom(&["--format", "json", "random-board", "--tiles", "30", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let board = Board::from_json(&{
        let mut v = json_of(&a);
        v.as_object_mut().unwrap().remove("seed");
        v.to_string()
    })
    .unwrap();
    assert_eq!(board.len(), 30);
    let ascii = polydom(&["random-board", "--tiles", "30", "--seed", "11"]);
    assert_eq!(Board::from_ascii(&String::from_utf8(ascii.stdout).unwrap()).unwrap().canonical(), board.canonical());
}

#[test]
fn reduce_writes_a_checkable_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    std::fs::write(&cnf, SAMPLE).unwrap();
    let out_dir = dir.path().join("bundle");
    let out = polydom(&[
        "--format",
        "json",
        "reduce",
        "--piece",
        "rook",
        "--sat",
        cnf.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["satisfiable"], true);
    let board = polydom_core::read_board(out_dir.join("board.json")).unwrap();
    assert_eq!(v["cells"], board.len());
    let cert = Placement::from_json(&std::fs::read_to_string(out_dir.join("certificate.json")).unwrap()).unwrap();
    assert_eq!(v["target"], cert.len());
    assert!(verify(&board, Piece::Rook, &cert.cells).unwrap().independent);
    let bundle: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("bundle.json")).unwrap()).unwrap();
    assert_eq!(bundle["layout"]["target"], v["target"]);
}

#[test]
fn drawn_queen_layout_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    std::fs::write(&cnf, SAMPLE).unwrap();
    let out = polydom(&["--format", "json", "reduce", "--piece", "queen", "--drawn", "--sat", cnf.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["counts"]["n_2neigh"], 11);
    assert_eq!(v["counts"]["n_3neigh"], 38);
    assert_eq!(v["counts"]["n_4neigh"], 5);
    assert_eq!(v["counts"]["clause_lengths"], serde_json::json!([57, 13, 21, 13]));
    assert_eq!(v["m"], 380);
    assert_eq!(v["target"], 384);
    assert_eq!(polydom(&["reduce", "--piece", "rook", "--drawn", "--sat", cnf.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn random_formula_reduction_is_seeded() {
    let a = polydom(&["--format", "json", "reduce", "--piece", "rook", "--random-vars", "3", "--seed", "9"]);
    let b = polydom(&["--format", "json", "reduce", "--piece", "rook", "--random-vars", "3", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seq_uses_cache_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--format", "json", "seq", "--family", "max-indep-queens", "--d", "3", "--n", "1..4", "--cache", cache];
    let first = json_of(&polydom(&args));
    assert_eq!(first["values"], serde_json::json!([1, 1, 4, 7]));
    let second = json_of(&polydom(&args));
    assert_eq!(second["cached"], 4);
    assert_eq!(second["values"], first["values"]);
}

#[test]
fn gadget_check_single_template() {
    let out = polydom(&["--format", "json", "gadget-check", "--name", "rook-variable"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v[0]["ok"], true);
    assert_eq!(v[0]["report"]["optimum"], 6);
    assert_eq!(v[0]["report"]["optima"], 2);
}

#[test]
fn graph_check_reports_no_claw() {
    let dir = tempfile::tempdir().unwrap();
    let path = board_file(dir.path(), "sq.json", &hyperboard(2, 5).unwrap());
    let out = polydom(&["--format", "json", "graph-check", "--board", &path, "--piece", "queen"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["claw_size"], 5);
    assert_eq!(v["claw"], Value::Null);
    assert_eq!(v["min_max"]["min"], 3);
    assert_eq!(v["min_max"]["max"], 5);
    // Every queen has at most 4 pairwise non-attacking neighbours, so asking
    // for a 4-claw on a 5x5 board finds one.
    let claw4 = polydom(&["--format", "json", "graph-check", "--board", &path, "--piece", "queen", "--claw", "4"]);
    assert_eq!(claw4.status.code(), Some(1));
}
