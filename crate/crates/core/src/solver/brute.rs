//! Exhaustive subset search used as a test oracle.
//!
//! Works straight from ray walks on the board, not from compiled rows.

use std::time::Instant;

use super::{Objective, Problem, SolveStats, Solution, SolverError, Status};
use crate::attack::{attacked_indices, Placement};

const CAP: usize = 25;

/// Every optimal placement of `problem`, by enumeration. Boards above 25
/// cells are rejected.
pub fn brute_force(problem: &Problem) -> Result<Solution, SolverError> {
    let board = &problem.board;
    let n = board.len();
    if n > CAP {
        return Err(SolverError::TooLarge { cells: n, cap: CAP });
    }
    let start = Instant::now();
    let reach: Vec<u32> = (0..n)
        .map(|i| {
            attacked_indices(board, problem.piece, i)
                .into_iter()
                .fold(1u32 << i, |m, j| m | (1 << j))
        })
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let dominates = |set: u32| {
        let mut seen = 0u32;
        for (i, r) in reach.iter().enumerate() {
            if set >> i & 1 == 1 {
                seen |= r;
            }
        }
        seen == full
    };

    let mut candidates: Vec<u32> = Vec::new();
    let mut nodes = 0u64;
    if problem.independence {
        // Depth-first over independent sets, adding cells in increasing order.
        let mut stack = vec![(0u32, 0usize)];
        while let Some((set, next)) = stack.pop() {
            nodes += 1;
            if !problem.domination || dominates(set) {
                candidates.push(set);
            }
            for i in next..n {
                let clash = (0..n).any(|j| set >> j & 1 == 1 && reach[j] >> i & 1 == 1);
                if !clash {
                    stack.push((set | 1 << i, i + 1));
                }
            }
        }
    } else if problem.objective == Objective::Maximize {
        candidates.push(full);
    } else {
        for k in 0..=n {
            let mut combos = Vec::new();
            subsets_of_size(n, k, &mut |s| {
                nodes += 1;
                if dominates(s) {
                    combos.push(s);
                }
            });
            if !combos.is_empty() {
                candidates = combos;
                break;
            }
        }
    }

    let best = match problem.objective {
        Objective::Minimize => candidates.iter().map(|s| s.count_ones()).min(),
        Objective::Maximize => candidates.iter().map(|s| s.count_ones()).max(),
    };
    let stats = SolveStats {
        nodes,
        millis: start.elapsed().as_millis() as u64,
    };
    let Some(best) = best else {
        return Ok(Solution {
            status: Status::Infeasible,
            value: None,
            witness: None,
            witness_vars: Vec::new(),
            all_optima: Some(Vec::new()),
            bound: None,
            stats,
        });
    };
    let mut optima: Vec<Vec<usize>> = candidates
        .into_iter()
        .filter(|s| s.count_ones() == best)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect();
    optima.sort();
    let to_placement = |vars: &Vec<usize>| Placement::from_indices(board, problem.piece, vars.iter().copied());
    Ok(Solution {
        status: Status::Optimal,
        value: Some(best as usize),
        witness: optima.first().map(to_placement),
        witness_vars: optima[0].clone(),
        all_optima: Some(optima.iter().map(to_placement).collect()),
        bound: Some(best as usize),
        stats,
    })
}

fn subsets_of_size(n: usize, k: usize, visit: &mut impl FnMut(u32)) {
    fn rec(start: usize, n: usize, k: usize, set: u32, visit: &mut impl FnMut(u32)) {
        if k == 0 {
            visit(set);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, set | 1 << i, visit);
        }
    }
    rec(0, n, k, 0, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::Piece;
    use crate::board::{hyperboard, make_board, Cell};

    #[test]
    fn center_queen() {
        let p = Problem::min_independent_domination(hyperboard(2, 3).unwrap(), Piece::Queen);
        let s = brute_force(&p).unwrap();
        assert_eq!(s.value, Some(1));
        let all = s.all_optima.unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].cells.contains(&Cell::from([1, 1])));
    }

    #[test]
    fn l_tromino_rooks() {
        let b = make_board(2, [[0, 0], [1, 0], [0, 1]]).unwrap();
        let s = brute_force(&Problem::max_independent(b, Piece::Rook)).unwrap();
        assert_eq!(s.value, Some(2));
        assert_eq!(s.all_optima.unwrap().len(), 1);
    }

    #[test]
    fn min_rooks_4x4() {
        let s = brute_force(&Problem::min_domination(hyperboard(2, 4).unwrap(), Piece::Rook)).unwrap();
        assert_eq!(s.value, Some(4));
    }

    #[test]
    fn cap() {
        let p = Problem::min_domination(hyperboard(2, 6).unwrap(), Piece::Rook);
        assert_eq!(brute_force(&p).unwrap_err(), SolverError::TooLarge { cells: 36, cap: 25 });
    }
}
