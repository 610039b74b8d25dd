//! Rook and queen domination on polyominoes and d-dimensional polycubes.
//!
//! [`board`] holds the cell sets, [`attack`] the line geometry, [`solver`]
//! the exact 0/1 optimizer, [`chessgraph`] the attack-graph checks and
//! [`sequences`] the hypercube value tables.

pub mod attack;
pub mod board;
pub mod chessgraph;
pub mod sequences;
pub mod solver;

pub use attack::{attacked_set, verify, verify_placement, AttackError, AttackIndex, Piece, Placement, VerifyReport};
pub use chessgraph::{build_chess_graph, check_min_max_inequality, find_claw, ChessGraph, Claw, GraphError, MinMaxReport};
pub use board::{
    classify_convexity, fixed_polyominoes, hyperboard, make_board, random_polyomino, read_board, write_board, Board,
    BoardError, Cell, ConvexityClass, ParseError,
};
pub use solver::{
    brute_force, compile, enumerate_optima, solve, solve_problem, BranchAndBound, Budget, ConstraintSystem, Objective,
    Problem, Solution, SolverBackend, SolverError, Status,
};
