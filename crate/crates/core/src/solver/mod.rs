//! Domination problems as 0/1 programs and an exact solver for them.
//!
//! A [`Problem`] compiles into a [`ConstraintSystem`]: one binary variable
//! per cell, a packing row `sum x_j <= 1` per maximal attack line when pieces
//! must not attack each other, and a covering row `sum x_j >= 1` per attacker
//! set when the board must be dominated. The default backend is a
//! depth-first branch and bound over those rows.

mod bitset;
mod brute;
mod search;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{AttackIndex, Piece, Placement};
use crate::board::{Board, Cell};

pub use bitset::BitSet;
pub use brute::brute_force;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("problem enables neither independence nor domination")]
    NoConstraints,
    #[error("attack index was built for a different board or piece")]
    IndexMismatch,
    #[error("board has {cells} cells, brute force is capped at {cap}")]
    TooLarge { cells: usize, cap: usize },
    #[error("backend {0} cannot enumerate optima")]
    Unsupported(String),
}

/// Board, piece and which constraint families apply.
#[derive(Debug, Clone)]
pub struct Problem {
    pub board: Board,
    pub piece: Piece,
    pub objective: Objective,
    pub independence: bool,
    pub domination: bool,
}

impl Problem {
    pub fn new(
        board: Board,
        piece: Piece,
        objective: Objective,
        independence: bool,
        domination: bool,
    ) -> Result<Problem, SolverError> {
        if !independence && !domination {
            return Err(SolverError::NoConstraints);
        }
        Ok(Problem {
            board,
            piece,
            objective,
            independence,
            domination,
        })
    }

    /// Fewest pieces that dominate, attacking allowed.
    pub fn min_domination(board: Board, piece: Piece) -> Problem {
        Problem::new(board, piece, Objective::Minimize, false, true).unwrap()
    }

    /// Fewest mutually non-attacking pieces that dominate.
    pub fn min_independent_domination(board: Board, piece: Piece) -> Problem {
        Problem::new(board, piece, Objective::Minimize, true, true).unwrap()
    }

    /// Most mutually non-attacking pieces.
    pub fn max_independent(board: Board, piece: Piece) -> Problem {
        Problem::new(board, piece, Objective::Maximize, true, false).unwrap()
    }

    /// The four nontrivial variants in a fixed order.
    pub fn variants(board: &Board, piece: Piece) -> [Problem; 4] {
        [
            Problem::min_domination(board.clone(), piece),
            Problem::min_independent_domination(board.clone(), piece),
            Problem::max_independent(board.clone(), piece),
            Problem::new(board.clone(), piece, Objective::Maximize, true, true).unwrap(),
        ]
    }

    pub fn compile(&self) -> ConstraintSystem {
        let index = AttackIndex::build(&self.board, self.piece);
        compile(self, &index).expect("index built from the problem itself")
    }

    pub fn label(&self) -> String {
        let sense = match self.objective {
            Objective::Minimize => "min",
            Objective::Maximize => "max",
        };
        let mut flags = Vec::new();
        if self.independence {
            flags.push("independent");
        }
        if self.domination {
            flags.push("dominating");
        }
        format!("{sense} {} {}", flags.join("+"), self.piece)
    }
}

/// Binary program over one variable per board cell.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub var_count: usize,
    /// Rows `sum_{j in S} x_j <= 1`.
    pub packing: Vec<Vec<usize>>,
    /// Rows `sum_{j in S} x_j >= 1`.
    pub covering: Vec<Vec<usize>>,
    pub sense: Objective,
    pub piece: Piece,
    pub cells: Vec<Cell>,
    /// Variables fixed to 1 before the search starts.
    pub forced: Vec<usize>,
}

/// Builds the constraint rows for `problem` from a prebuilt attack index.
///
/// Packing rows are the distinct maximal lines with at least two cells
/// (a one-cell line only says `x_i <= 1`). Covering rows are the attacker
/// sets `A_i`, with exact duplicates removed.
pub fn compile(problem: &Problem, index: &AttackIndex) -> Result<ConstraintSystem, SolverError> {
    if index.piece() != problem.piece || index.board() != &problem.board {
        return Err(SolverError::IndexMismatch);
    }
    let n = problem.board.len();
    let mut packing = Vec::new();
    if problem.independence {
        packing.extend(index.runs().iter().filter(|r| r.len() >= 2).map(|r| {
            let mut r = r.clone();
            r.sort_unstable();
            r
        }));
    }
    let mut covering = Vec::new();
    if problem.domination {
        let mut seen = HashSet::new();
        for i in 0..n {
            let set = index.attackers(i).to_vec();
            if seen.insert(set.clone()) {
                covering.push(set);
            }
        }
    }
    Ok(ConstraintSystem {
        var_count: n,
        packing,
        covering,
        sense: problem.objective,
        piece: problem.piece,
        cells: problem.board.cells().to_vec(),
        forced: Vec::new(),
    })
}

impl ConstraintSystem {
    /// CPLEX-LP style listing with 1-based variables `x1..xm`.
    pub fn to_lp(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Objective::Minimize => "Minimize",
            Objective::Maximize => "Maximize",
        };
        let sum = |vars: &[usize]| {
            vars.iter()
                .map(|v| format!("x{}", v + 1))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let all: Vec<usize> = (0..self.var_count).collect();
        let _ = writeln!(out, "{sense}");
        let _ = writeln!(out, " obj: {}", sum(&all));
        let _ = writeln!(out, "Subject To");
        for (k, row) in self.packing.iter().enumerate() {
            let _ = writeln!(out, " p{}: {} <= 1", k + 1, sum(row));
        }
        for (k, row) in self.covering.iter().enumerate() {
            let _ = writeln!(out, " c{}: {} >= 1", k + 1, sum(row));
        }
        let _ = writeln!(out, "Binary");
        for v in 0..self.var_count {
            let _ = writeln!(out, " x{}", v + 1);
        }
        let _ = writeln!(out, "End");
        out
    }

    /// Fixes `vars` to 1. Optima are then taken over placements containing
    /// them; forced pieces that attack each other make the system infeasible
    /// under independence.
    pub fn force(&mut self, vars: impl IntoIterator<Item = usize>) {
        self.forced.extend(vars);
        self.forced.sort_unstable();
        self.forced.dedup();
    }

    pub fn placement(&self, vars: &[usize]) -> Placement {
        Placement::new(self.piece, vars.iter().map(|&v| self.cells[v].clone()))
    }
}

/// Node and wall-clock limits; whichever runs out first stops the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(300),
        }
    }
}

impl Budget {
    pub fn with_time(max_time: Duration) -> Self {
        Budget {
            max_time,
            ..Budget::default()
        }
    }

    pub fn with_nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            ..Budget::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub millis: u64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    /// Size of the witness. For an exhausted budget this is the best
    /// incumbent, if any was found.
    pub value: Option<usize>,
    pub witness: Option<Placement>,
    /// Variable indices of the witness.
    pub witness_vars: Vec<usize>,
    /// Every optimum, when enumeration was requested. On an exhausted budget
    /// this holds the optima found so far.
    pub all_optima: Option<Vec<Placement>>,
    /// Proven bound on the optimum: lower for minimization, upper for
    /// maximization. Equal to `value` when optimal.
    pub bound: Option<usize>,
    pub stats: SolveStats,
}

impl Solution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// `{"status","value","witness","optima_count","nodes","millis"}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status,
            "value": self.value,
            "witness": self
                .witness
                .as_ref()
                .map(|w| w.cells.iter().cloned().collect::<Vec<_>>())
                .unwrap_or_default(),
            "optima_count": self.all_optima.as_ref().map(|v| v.len()),
            "nodes": self.stats.nodes,
            "millis": self.stats.millis,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub enumerate_all: bool,
}

/// Anything that can solve a [`ConstraintSystem`] exactly.
pub trait SolverBackend {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    fn solve(&self, system: &ConstraintSystem, budget: &Budget) -> Solution;

    fn enumerate_optima(&self, system: &ConstraintSystem, budget: &Budget) -> Result<Solution, SolverError> {
        let _ = (system, budget);
        Err(SolverError::Unsupported(self.name().to_string()))
    }
}

/// Depth-first branch and bound with packing propagation, covering failure
/// pruning and clique/covering bounds.
#[derive(Debug, Clone, Copy, Default)]
pub struct BranchAndBound;

impl SolverBackend for BranchAndBound {
    fn name(&self) -> &str {
        "branch-and-bound"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { enumerate_all: true }
    }

    fn solve(&self, system: &ConstraintSystem, budget: &Budget) -> Solution {
        search::solve(system, budget)
    }

    fn enumerate_optima(&self, system: &ConstraintSystem, budget: &Budget) -> Result<Solution, SolverError> {
        Ok(search::enumerate(system, budget))
    }
}

pub fn solve(system: &ConstraintSystem, budget: &Budget) -> Solution {
    BranchAndBound.solve(system, budget)
}

/// All optimal placements, found by re-solving with each found support
/// blocked until no optimum of the same value remains.
pub fn enumerate_optima(system: &ConstraintSystem, budget: &Budget) -> Solution {
    search::enumerate(system, budget)
}

/// Compiles and solves in one step.
pub fn solve_problem(problem: &Problem, budget: &Budget) -> Solution {
    solve(&problem.compile(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::verify;
    use crate::board::{hyperboard, make_board};

    fn budget() -> Budget {
        Budget::with_time(Duration::from_secs(60))
    }

    #[test]
    fn bar_packing_rows() {
        let b = make_board(2, [[0, 0], [1, 0], [2, 0]]).unwrap();
        let sys = Problem::max_independent(b, Piece::Rook).compile();
        assert_eq!(sys.packing, vec![vec![0, 1, 2]]);
        assert!(sys.covering.is_empty());
    }

    #[test]
    fn singleton_covering_row() {
        let b = make_board(2, [[0, 0]]).unwrap();
        let sys = Problem::min_domination(b, Piece::Queen).compile();
        assert_eq!(sys.covering, vec![vec![0]]);
        assert!(sys.packing.is_empty());
    }

    #[test]
    fn chessboard_queen_rows() {
        let b = hyperboard(2, 8).unwrap();
        let sys = Problem::max_independent(b, Piece::Queen).compile();
        // 8 rows, 8 columns, 13 + 13 diagonals with at least two cells.
        assert_eq!(sys.packing.len(), 42);
        let by_len = |l: usize| sys.packing.iter().filter(|r| r.len() == l).count();
        assert_eq!(by_len(8), 16 + 2);
        assert_eq!(by_len(2), 4);
    }

    #[test]
    fn rejects_empty_problem() {
        let b = hyperboard(2, 2).unwrap();
        assert_eq!(
            Problem::new(b, Piece::Rook, Objective::Minimize, false, false).unwrap_err(),
            SolverError::NoConstraints
        );
    }

    #[test]
    fn index_mismatch() {
        let p = Problem::min_domination(hyperboard(2, 3).unwrap(), Piece::Rook);
        let idx = AttackIndex::build(&hyperboard(2, 3).unwrap(), Piece::Queen);
        assert_eq!(compile(&p, &idx).unwrap_err(), SolverError::IndexMismatch);
    }

    #[test]
    fn min_rooks_on_squares() {
        for n in 1..=6 {
            let p = Problem::min_domination(hyperboard(2, n).unwrap(), Piece::Rook);
            let s = solve_problem(&p, &budget());
            assert!(s.is_optimal());
            assert_eq!(s.value, Some(n as usize));
        }
    }

    #[test]
    fn max_queens_small() {
        let s = solve_problem(&Problem::max_independent(hyperboard(2, 4).unwrap(), Piece::Queen), &budget());
        assert_eq!(s.value, Some(4));
        let s = solve_problem(&Problem::max_independent(hyperboard(3, 3).unwrap(), Piece::Queen), &budget());
        assert_eq!(s.value, Some(4));
    }

    #[test]
    fn min_independent_queens_3x3_is_center() {
        let b = hyperboard(2, 3).unwrap();
        let sys = Problem::min_independent_domination(b, Piece::Queen).compile();
        let s = enumerate_optima(&sys, &budget());
        assert_eq!(s.value, Some(1));
        let all = s.all_optima.unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].cells.contains(&Cell::from([1, 1])));
    }

    #[test]
    fn single_cell_max() {
        let b = make_board(2, [[0, 0]]).unwrap();
        let s = enumerate_optima(&Problem::max_independent(b, Piece::Rook).compile(), &budget());
        assert_eq!(s.value, Some(1));
        assert_eq!(s.all_optima.unwrap().len(), 1);
    }

    #[test]
    fn witness_verifies() {
        let b = hyperboard(2, 6).unwrap();
        for p in Problem::variants(&b, Piece::Queen) {
            let s = solve_problem(&p, &budget());
            let w = s.witness.unwrap();
            let r = verify(&b, Piece::Queen, &w.cells).unwrap();
            if p.independence {
                assert!(r.independent, "{}", p.label());
            }
            if p.domination {
                assert!(r.dominates, "{}", p.label());
            }
            assert_eq!(s.value, Some(w.len()));
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let p = Problem::min_domination(hyperboard(2, 8).unwrap(), Piece::Queen);
        let s = solve_problem(&p, &Budget::with_nodes(5));
        assert_eq!(s.status, Status::BudgetExceeded);
    }

    #[test]
    fn lp_dump() {
        let b = make_board(2, [[0, 0], [1, 0]]).unwrap();
        let sys = Problem::min_independent_domination(b, Piece::Rook).compile();
        let lp = sys.to_lp();
        assert!(lp.starts_with("Minimize\n obj: x1 + x2\n"));
        assert!(lp.contains(" p1: x1 + x2 <= 1\n"));
        assert!(lp.contains(" c1: x1 + x2 >= 1\n"));
        assert!(lp.ends_with("End\n"));
    }

    #[test]
    fn solution_json_shape() {
        let b = hyperboard(2, 2).unwrap();
        let s = solve_problem(&Problem::min_domination(b, Piece::Queen), &budget());
        let j = s.to_json();
        for key in ["status", "value", "witness", "optima_count", "nodes", "millis"] {
            assert!(j.get(key).is_some(), "missing {key}");
        }
        assert_eq!(j["status"], "optimal");
        assert_eq!(j["value"], 1);
    }
}
