//! Chess graphs: one vertex per cell, an edge wherever a piece on one cell
//! attacks the other.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::attack::{AttackIndex, Piece};
use crate::board::Board;
use crate::solver::{solve_problem, Budget, Problem, Status};

pub const DEFAULT_VERTEX_CAP: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {vertices} vertices, cap is {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("claw size must be at least 3, got {0}")]
    ClawSize(usize),
    #[error("edge ({0}, {1}) is a self-loop or out of range")]
    BadEdge(usize, usize),
    #[error("solver stopped with status {0:?} on {1}")]
    Budget(Status, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChessGraph {
    adj: Vec<Vec<usize>>,
    /// Attack direction count of the piece that produced the graph.
    pub m: usize,
}

impl ChessGraph {
    /// Graph from an explicit edge list; used for abstract examples.
    pub fn from_edges(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<ChessGraph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(GraphError::BadEdge(a, b));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ChessGraph { adj, m })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    /// One `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    /// Brute-force isomorphism test for graphs of at most 9 vertices.
    pub fn is_isomorphic(&self, other: &ChessGraph) -> bool {
        let n = self.vertex_count();
        if n != other.vertex_count() || self.edges().len() != other.edges().len() || n > 9 {
            return n == 0 && other.vertex_count() == 0;
        }
        let mut deg_a: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut deg_b: Vec<usize> = other.adj.iter().map(Vec::len).collect();
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b {
            return false;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        self.extend_iso(other, 0, &mut perm, &mut used)
    }

    fn extend_iso(&self, other: &ChessGraph, k: usize, perm: &mut [usize], used: &mut [bool]) -> bool {
        let n = self.vertex_count();
        if k == n {
            return true;
        }
        for t in 0..n {
            if used[t] || self.adj[k].len() != other.adj[t].len() {
                continue;
            }
            let fits = (0..k).all(|j| self.adjacent(k, j) == other.adjacent(t, perm[j]));
            if fits {
                perm[k] = t;
                used[t] = true;
                if self.extend_iso(other, k + 1, perm, used) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }

    /// Independent set greedily grown from lowest-degree vertices. A baseline
    /// only; no approximation factor is claimed.
    pub fn greedy_independent_set(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut alive = vec![true; n];
        let mut out = Vec::new();
        loop {
            let pick = (0..n)
                .filter(|&v| alive[v])
                .min_by_key(|&v| (self.adj[v].iter().filter(|&&w| alive[w]).count(), v));
            let Some(v) = pick else { break };
            out.push(v);
            alive[v] = false;
            for &w in &self.adj[v] {
                alive[w] = false;
            }
        }
        out.sort_unstable();
        out
    }
}

pub fn build_chess_graph(board: &Board, piece: Piece) -> ChessGraph {
    let index = AttackIndex::build(board, piece);
    let adj = (0..board.len())
        .map(|i| index.attackers(i).iter().copied().filter(|&j| j != i).collect())
        .collect();
    ChessGraph {
        adj,
        m: piece.direction_count(board.dim()),
    }
}

/// An induced star: `center` adjacent to every leaf, leaves pairwise
/// nonadjacent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claw {
    pub center: usize,
    pub leaves: Vec<usize>,
}

pub fn find_claw(graph: &ChessGraph, size: usize) -> Result<Option<Claw>, GraphError> {
    find_claw_capped(graph, size, DEFAULT_VERTEX_CAP)
}

/// Searches every center for `size` pairwise nonadjacent neighbours.
pub fn find_claw_capped(graph: &ChessGraph, size: usize, cap: usize) -> Result<Option<Claw>, GraphError> {
    if size < 3 {
        return Err(GraphError::ClawSize(size));
    }
    if graph.vertex_count() > cap {
        return Err(GraphError::TooLarge {
            vertices: graph.vertex_count(),
            cap,
        });
    }
    for center in 0..graph.vertex_count() {
        let nbrs = graph.neighbors(center);
        let mut pick = Vec::with_capacity(size);
        if independent_subset(graph, nbrs, 0, size, &mut pick) {
            return Ok(Some(Claw { center, leaves: pick }));
        }
    }
    Ok(None)
}

fn independent_subset(g: &ChessGraph, pool: &[usize], from: usize, size: usize, pick: &mut Vec<usize>) -> bool {
    if pick.len() == size {
        return true;
    }
    for k in from..pool.len() {
        if pool.len() - k < size - pick.len() {
            return false;
        }
        let v = pool[k];
        if pick.iter().all(|&u| !g.adjacent(u, v)) {
            pick.push(v);
            if independent_subset(g, pool, k + 1, size, pick) {
                return true;
            }
            pick.pop();
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinMaxReport {
    pub piece: Piece,
    /// Attack direction count.
    pub m: usize,
    /// Smallest independent dominating set.
    pub min: usize,
    /// Largest independent dominating set.
    pub max: usize,
    /// The graph is `(m+1)`-claw-free, so `m * min >= max` must hold.
    pub holds: bool,
}

/// Solves both independent domination extremes and checks them against the
/// bound implied by `(m+1)`-claw-freeness.
pub fn check_min_max_inequality(board: &Board, piece: Piece, budget: &Budget) -> Result<MinMaxReport, GraphError> {
    let run = |p: Problem| {
        let label = p.label();
        let s = solve_problem(&p, budget);
        match (s.status, s.value) {
            (Status::Optimal, Some(v)) => Ok(v),
            (status, _) => Err(GraphError::Budget(status, label)),
        }
    };
    let min = run(Problem::min_independent_domination(board.clone(), piece))?;
    let max = run(Problem::max_independent(board.clone(), piece))?;
    let m = piece.direction_count(board.dim());
    Ok(MinMaxReport {
        piece,
        m,
        min,
        max,
        holds: m * min >= max,
    })
}
