//! Rook and queen attack geometry on polycubes.
//!
//! A piece attacks along a direction until the ray steps off the board, so
//! holes and notches block attacks. Each undirected direction through a cell
//! is stored once as a maximal run of board cells.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Board, Cell, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Piece {
    Rook,
    Queen,
}

impl Piece {
    /// Number of undirected attack directions in dimension `dim`.
    pub fn direction_count(self, dim: usize) -> usize {
        match self {
            Piece::Rook => dim,
            Piece::Queen => (3usize.pow(dim as u32) - 1) / 2,
        }
    }

    /// One representative per `±v` pair, in lexicographic order over
    /// `{-1,0,1}^dim` with the first nonzero component positive.
    pub fn directions(self, dim: usize) -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        let total = 3usize.pow(dim as u32);
        for code in 0..total {
            let mut v = vec![0i32; dim];
            let mut rest = code;
            for axis in (0..dim).rev() {
                v[axis] = (rest % 3) as i32 - 1;
                rest /= 3;
            }
            let Some(&first) = v.iter().find(|&&x| x != 0) else {
                continue;
            };
            if first < 0 {
                continue;
            }
            if self == Piece::Rook && v.iter().filter(|&&x| x != 0).count() != 1 {
                continue;
            }
            out.push(v);
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            Piece::Rook => "rook",
            Piece::Queen => "queen",
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Piece {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rook" => Ok(Piece::Rook),
            "queen" => Ok(Piece::Queen),
            _ => Err(AttackError::UnknownPiece(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("piece at {0} is not on the board")]
    OffBoardPiece(Cell),
    #[error("unknown piece {0:?}")]
    UnknownPiece(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Walks from `start` along `step` while the next lattice point is a board
/// cell, returning the indices visited (excluding `start`).
fn ray(board: &Board, start: &[i32], step: &[i32]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut pos = start.to_vec();
    loop {
        for (p, s) in pos.iter_mut().zip(step) {
            *p += s;
        }
        match board.index_of_coords(&pos) {
            Some(j) => out.push(j),
            None => return out,
        }
    }
}

/// Per-cell attack lines and attacker sets for one piece on one board.
#[derive(Debug, Clone)]
pub struct AttackIndex {
    board: Board,
    piece: Piece,
    directions: Vec<Vec<i32>>,
    runs: Vec<Vec<usize>>,
    line_of: Vec<Vec<usize>>,
    attackers: Vec<Vec<usize>>,
}

impl AttackIndex {
    pub fn build(board: &Board, piece: Piece) -> AttackIndex {
        let directions = piece.directions(board.dim());
        let n = board.len();
        let mut runs: Vec<Vec<usize>> = Vec::new();
        let mut line_of = vec![vec![usize::MAX; directions.len()]; n];
        for (d, dir) in directions.iter().enumerate() {
            let back: Vec<i32> = dir.iter().map(|x| -x).collect();
            for i in 0..n {
                if line_of[i][d] != usize::MAX {
                    continue;
                }
                let coords = board.cell(i).coords();
                let mut run = ray(board, coords, &back);
                run.reverse();
                run.push(i);
                run.extend(ray(board, coords, dir));
                let id = runs.len();
                for &j in &run {
                    line_of[j][d] = id;
                }
                runs.push(run);
            }
        }
        let mut attackers = vec![Vec::new(); n];
        for (i, set) in attackers.iter_mut().enumerate() {
            let mut s: BTreeSet<usize> = BTreeSet::new();
            for &id in &line_of[i] {
                s.extend(runs[id].iter().copied());
            }
            s.insert(i);
            *set = s.into_iter().collect();
        }
        AttackIndex {
            board: board.clone(),
            piece,
            directions,
            runs,
            line_of,
            attackers,
        }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn piece(&self) -> Piece {
        self.piece
    }

    pub fn directions(&self) -> &[Vec<i32>] {
        &self.directions
    }

    /// The maximal run through `cell` along direction number `dir`,
    /// ordered from the negative end to the positive end. Contains `cell`.
    pub fn line(&self, cell: usize, dir: usize) -> &[usize] {
        &self.runs[self.line_of[cell][dir]]
    }

    /// Every distinct maximal run, grouped by direction in direction order.
    pub fn runs(&self) -> &[Vec<usize>] {
        &self.runs
    }

    /// `cell` itself plus every cell that attacks it, sorted.
    pub fn attackers(&self, cell: usize) -> &[usize] {
        &self.attackers[cell]
    }

    pub fn attacks(&self, from: usize, to: usize) -> bool {
        from != to && self.attackers[to].binary_search(&from).is_ok()
    }
}

/// Cells attacked by a piece standing on `cell`, not including `cell`.
pub fn attacked_set(board: &Board, piece: Piece, cell: &Cell) -> Result<BTreeSet<Cell>, AttackError> {
    let i = board
        .index_of(cell)
        .ok_or_else(|| AttackError::OffBoardPiece(cell.clone()))?;
    Ok(attacked_indices(board, piece, i)
        .into_iter()
        .map(|j| board.cell(j).clone())
        .collect())
}

pub(crate) fn attacked_indices(board: &Board, piece: Piece, i: usize) -> BTreeSet<usize> {
    let coords = board.cell(i).coords();
    let mut out = BTreeSet::new();
    for dir in piece.directions(board.dim()) {
        let back: Vec<i32> = dir.iter().map(|x| -x).collect();
        out.extend(ray(board, coords, &dir));
        out.extend(ray(board, coords, &back));
    }
    out
}

/// A set of identical pieces on a board.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    pub piece: Piece,
    pub cells: BTreeSet<Cell>,
}

impl Placement {
    pub fn new(piece: Piece, cells: impl IntoIterator<Item = Cell>) -> Self {
        Placement {
            piece,
            cells: cells.into_iter().collect(),
        }
    }

    pub fn from_indices(board: &Board, piece: Piece, indices: impl IntoIterator<Item = usize>) -> Self {
        Placement::new(piece, indices.into_iter().map(|i| board.cell(i).clone()))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Board indices of the pieces; fails on the first off-board cell.
    pub fn indices(&self, board: &Board) -> Result<Vec<usize>, AttackError> {
        self.cells
            .iter()
            .map(|c| {
                board
                    .index_of(c)
                    .ok_or_else(|| AttackError::OffBoardPiece(c.clone()))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("placement serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Placement, AttackError> {
        serde_json::from_str(text).map_err(|e| ParseError::from_json(&e).into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub dominates: bool,
    pub independent: bool,
    pub unguarded: Vec<Cell>,
    pub conflicts: Vec<(Cell, Cell)>,
}

/// Checks domination and independence by walking every piece's rays.
pub fn verify(board: &Board, piece: Piece, placement: &BTreeSet<Cell>) -> Result<VerifyReport, AttackError> {
    let mut pieces = Vec::with_capacity(placement.len());
    for c in placement {
        pieces.push(
            board
                .index_of(c)
                .ok_or_else(|| AttackError::OffBoardPiece(c.clone()))?,
        );
    }
    let occupied: BTreeSet<usize> = pieces.iter().copied().collect();
    let mut guarded = vec![false; board.len()];
    let mut conflicts = BTreeSet::new();
    let mut seen: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for &p in &pieces {
        guarded[p] = true;
        let hits = attacked_indices(board, piece, p);
        for &j in &hits {
            guarded[j] = true;
            if occupied.contains(&j) {
                conflicts.insert((p.min(j), p.max(j)));
            }
        }
        seen.insert(p, hits);
    }
    let unguarded: Vec<Cell> = (0..board.len())
        .filter(|&i| !guarded[i])
        .map(|i| board.cell(i).clone())
        .collect();
    let conflicts: Vec<(Cell, Cell)> = conflicts
        .into_iter()
        .map(|(a, b)| (board.cell(a).clone(), board.cell(b).clone()))
        .collect();
    Ok(VerifyReport {
        dominates: unguarded.is_empty(),
        independent: conflicts.is_empty(),
        unguarded,
        conflicts,
    })
}

pub fn verify_placement(board: &Board, placement: &Placement) -> Result<VerifyReport, AttackError> {
    verify(board, placement.piece, &placement.cells)
}
