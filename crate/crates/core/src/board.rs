//! Polyominoes and d-dimensional polycubes.
//!
//! A [`Board`] is a finite, face-connected set of lattice cells. Cells are
//! kept in lexicographic coordinate order; that order is also the variable
//! order used by the solver, so cell `i` of a board is variable `i` of every
//! constraint system compiled from it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A unit cube centred on an integer lattice point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(pub Vec<i32>);

impl Cell {
    pub fn new(coords: impl Into<Vec<i32>>) -> Self {
        Cell(coords.into())
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn offset(&self, delta: &[i32]) -> Cell {
        Cell(self.0.iter().zip(delta).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<i32>> for Cell {
    fn from(v: Vec<i32>) -> Self {
        Cell(v)
    }
}

impl<const N: usize> From<[i32; N]> for Cell {
    fn from(v: [i32; N]) -> Self {
        Cell(v.to_vec())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board has no cells")]
    EmptyBoard,
    #[error("board is not face-connected")]
    Disconnected,
    #[error("cell {index} has {found} coordinates, expected {expected}")]
    DimMismatch {
        expected: usize,
        found: usize,
        index: usize,
    },
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("side length must be at least 1, got {0}")]
    InvalidSide(i64),
    #[error("operation requires a two-dimensional board, got dimension {0}")]
    NotTwoDimensional(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Diagnostic for malformed board or placement text. Lines and columns are
/// 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn from_json(err: &serde_json::Error) -> Self {
        ParseError::new(err.line(), err.column(), err.to_string())
    }
}

/// A face-connected polycube. Immutable once built.
#[derive(Clone, Debug)]
pub struct Board {
    dim: usize,
    cells: Vec<Cell>,
    lookup: HashMap<Cell, usize>,
    bounds: Vec<(i32, i32)>,
}

impl PartialEq for Board {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.cells == other.cells
    }
}

impl Eq for Board {}

/// Builds a board from raw coordinate tuples: duplicates are dropped,
/// connectivity is checked and the result is translated so that the
/// per-axis minimum sits at the origin.
pub fn make_board<I, C>(dim: usize, cells: I) -> Result<Board, BoardError>
where
    I: IntoIterator<Item = C>,
    C: Into<Vec<i32>>,
{
    Board::from_cells(dim, cells).map(|b| b.canonical())
}

/// The full `side^dim` hypercube.
pub fn hyperboard(dim: usize, side: i64) -> Result<Board, BoardError> {
    if dim < 2 {
        return Err(BoardError::InvalidDimension(dim));
    }
    if side < 1 {
        return Err(BoardError::InvalidSide(side));
    }
    let side = side as i32;
    let total = (side as usize).pow(dim as u32);
    let mut cells = Vec::with_capacity(total);
    let mut cur = vec![0i32; dim];
    for _ in 0..total {
        cells.push(cur.clone());
        for axis in (0..dim).rev() {
            cur[axis] += 1;
            if cur[axis] < side {
                break;
            }
            cur[axis] = 0;
        }
    }
    make_board(dim, cells)
}

impl Board {
    /// Validates cells without translating them.
    pub fn from_cells<I, C>(dim: usize, cells: I) -> Result<Board, BoardError>
    where
        I: IntoIterator<Item = C>,
        C: Into<Vec<i32>>,
    {
        if dim < 2 {
            return Err(BoardError::InvalidDimension(dim));
        }
        let mut set = BTreeSet::new();
        for (index, c) in cells.into_iter().enumerate() {
            let v: Vec<i32> = c.into();
            if v.len() != dim {
                return Err(BoardError::DimMismatch {
                    expected: dim,
                    found: v.len(),
                    index,
                });
            }
            set.insert(Cell(v));
        }
        if set.is_empty() {
            return Err(BoardError::EmptyBoard);
        }
        let board = Board::assemble(dim, set.into_iter().collect());
        if !board.is_connected() {
            return Err(BoardError::Disconnected);
        }
        Ok(board)
    }

    fn assemble(dim: usize, cells: Vec<Cell>) -> Board {
        let mut bounds = vec![(i32::MAX, i32::MIN); dim];
        for c in &cells {
            for (axis, &x) in c.0.iter().enumerate() {
                bounds[axis].0 = bounds[axis].0.min(x);
                bounds[axis].1 = bounds[axis].1.max(x);
            }
        }
        let lookup = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Board {
            dim,
            cells,
            lookup,
            bounds,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells in index order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, index: usize) -> &Cell {
        &self.cells[index]
    }

    pub fn bounds(&self) -> &[(i32, i32)] {
        &self.bounds
    }

    pub fn index_of(&self, cell: &Cell) -> Option<usize> {
        self.lookup.get(cell).copied()
    }

    pub fn index_of_coords(&self, coords: &[i32]) -> Option<usize> {
        // HashMap<Cell,_> cannot be queried by slice without an allocation.
        self.lookup.get(&Cell(coords.to_vec())).copied()
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.lookup.contains_key(cell)
    }

    /// Indices of face-adjacent cells.
    pub fn neighbors(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.dim);
        let mut probe = self.cells[index].0.clone();
        for axis in 0..self.dim {
            for step in [-1, 1] {
                probe[axis] += step;
                if let Some(&j) = self.lookup.get(&Cell(probe.clone())) {
                    out.push(j);
                }
                probe[axis] -= step;
            }
        }
        out
    }

    fn is_connected(&self) -> bool {
        if self.cells.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == self.cells.len()
    }

    /// Shifts every cell by `delta`.
    pub fn translate(&self, delta: &[i32]) -> Board {
        assert_eq!(delta.len(), self.dim, "translation vector has wrong dimension");
        Board::assemble(self.dim, self.cells.iter().map(|c| c.offset(delta)).collect())
    }

    /// Translation putting the per-axis minimum at the origin.
    pub fn canonical(&self) -> Board {
        let delta: Vec<i32> = self.bounds.iter().map(|&(lo, _)| -lo).collect();
        if delta.iter().all(|&d| d == 0) {
            return self.clone();
        }
        self.translate(&delta)
    }

    pub fn is_canonical(&self) -> bool {
        self.bounds.iter().all(|&(lo, _)| lo == 0)
    }

    /// Returns a new board with the coordinate axes permuted: axis `k` of the
    /// result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Board {
        assert_eq!(perm.len(), self.dim);
        let cells = self
            .cells
            .iter()
            .map(|c| Cell(perm.iter().map(|&a| c.0[a]).collect()))
            .collect::<BTreeSet<_>>();
        Board::assemble(self.dim, cells.into_iter().collect())
    }

    /// Adds one cell. Fails if the result would be disconnected.
    pub fn with_cell(&self, cell: Cell) -> Result<Board, BoardError> {
        let mut cells: Vec<Vec<i32>> = self.cells.iter().map(|c| c.0.clone()).collect();
        cells.push(cell.0);
        Board::from_cells(self.dim, cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BoardFile {
            dim: self.dim,
            cells: self.cells.iter().map(|c| c.0.clone()).collect(),
        })
        .expect("board serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Board, BoardError> {
        let file: BoardFile =
            serde_json::from_str(text).map_err(|e| ParseError::from_json(&e))?;
        make_board(file.dim, file.cells)
    }

    /// Parses the `#`/`.` grid format. The top text row has the largest y.
    pub fn from_ascii(text: &str) -> Result<Board, BoardError> {
        let rows: Vec<&str> = text.lines().collect();
        let height = rows.len() as i32;
        let mut cells = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let row = row.strip_suffix('\r').unwrap_or(row);
            for (c, ch) in row.chars().enumerate() {
                match ch {
                    '#' => cells.push(vec![c as i32, height - 1 - r as i32]),
                    '.' => {}
                    other => {
                        return Err(ParseError::new(
                            r + 1,
                            c + 1,
                            format!("unexpected character {other:?}, expected '#' or '.'"),
                        )
                        .into())
                    }
                }
            }
        }
        make_board(2, cells)
    }

    pub fn to_ascii(&self) -> Result<String, BoardError> {
        if self.dim != 2 {
            return Err(BoardError::NotTwoDimensional(self.dim));
        }
        let (x0, x1) = self.bounds[0];
        let (y0, y1) = self.bounds[1];
        let mut out = String::new();
        for y in (y0..=y1).rev() {
            for x in x0..=x1 {
                out.push(if self.index_of_coords(&[x, y]).is_some() {
                    '#'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoardFile {
    dim: usize,
    cells: Vec<Vec<i32>>,
}

/// Reads a board, picking JSON or ASCII by extension and falling back to
/// sniffing the first non-blank character.
pub fn read_board(path: impl AsRef<Path>) -> Result<Board, BoardError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| BoardError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let is_json = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => true,
        Some("txt") | Some("ascii") => false,
        _ => text.trim_start().starts_with('{'),
    };
    if is_json {
        Board::from_json(&text)
    } else {
        Board::from_ascii(&text)
    }
}

/// Writes ASCII for `.txt`/`.ascii` paths, JSON otherwise.
pub fn write_board(board: &Board, path: impl AsRef<Path>) -> Result<(), BoardError> {
    let path = path.as_ref();
    let text = match path.extension().and_then(|e| e.to_str()) {
        Some("txt") | Some("ascii") => board.to_ascii()?,
        _ => board.to_json(),
    };
    std::fs::write(path, text).map_err(|e| BoardError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexityClass {
    pub row_convex: bool,
    pub column_convex: bool,
    pub convex: bool,
}

/// Row and column convexity of a polyomino. Rows are lines of constant y.
pub fn classify_convexity(board: &Board) -> Result<ConvexityClass, BoardError> {
    if board.dim() != 2 {
        return Err(BoardError::NotTwoDimensional(board.dim()));
    }
    let row_convex = lines_are_runs(board, 1, 0);
    let column_convex = lines_are_runs(board, 0, 1);
    Ok(ConvexityClass {
        row_convex,
        column_convex,
        convex: row_convex && column_convex,
    })
}

fn lines_are_runs(board: &Board, fixed_axis: usize, run_axis: usize) -> bool {
    let mut lines: HashMap<i32, Vec<i32>> = HashMap::new();
    for c in board.cells() {
        lines.entry(c.0[fixed_axis]).or_default().push(c.0[run_axis]);
    }
    lines.values_mut().all(|xs| {
        xs.sort_unstable();
        xs.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

/// Random polyomino with exactly `tiles` cells.
///
/// Starts from a horizontal bar and runs `20 * tiles` moves of a
/// connectivity-preserving chain: a random non-cut cell is detached and
/// re-attached at a random empty position adjacent to the rest. A move that
/// grows the perimeter is kept with probability `percolation`; other moves
/// are always kept. Low percolation gives compact blobs, high percolation
/// gives ragged, branching shapes.
pub fn random_polyomino(tiles: usize, seed: u64, percolation: f64) -> Board {
    let tiles = tiles.max(1);
    let percolation = percolation.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: BTreeSet<(i32, i32)> = (0..tiles as i32).map(|x| (x, 0)).collect();
    if tiles > 1 {
        for _ in 0..20 * tiles {
            shuffle_step(&mut cells, &mut rng, percolation);
        }
    }
    make_board(2, cells.into_iter().map(|(x, y)| vec![x, y]))
        .expect("shuffling preserves connectivity")
}

const STEPS_2D: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

fn perimeter(cells: &BTreeSet<(i32, i32)>) -> usize {
    cells
        .iter()
        .map(|&(x, y)| {
            STEPS_2D
                .iter()
                .filter(|(dx, dy)| !cells.contains(&(x + dx, y + dy)))
                .count()
        })
        .sum()
}

fn connected_2d(cells: &BTreeSet<(i32, i32)>) -> bool {
    let Some(&start) = cells.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        for (dx, dy) in STEPS_2D {
            let n = (x + dx, y + dy);
            if cells.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == cells.len()
}

fn shuffle_step(cells: &mut BTreeSet<(i32, i32)>, rng: &mut ChaCha8Rng, percolation: f64) {
    let before = perimeter(cells);
    let list: Vec<(i32, i32)> = cells.iter().copied().collect();
    let victim = list[rng.gen_range(0..list.len())];
    cells.remove(&victim);
    if !connected_2d(cells) {
        cells.insert(victim);
        return;
    }
    let boundary: Vec<(i32, i32)> = cells
        .iter()
        .flat_map(|&(x, y)| STEPS_2D.iter().map(move |(dx, dy)| (x + dx, y + dy)))
        .filter(|p| !cells.contains(p))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let target = boundary[rng.gen_range(0..boundary.len())];
    cells.insert(target);
    let after = perimeter(cells);
    if after > before && !rng.gen_bool(percolation) {
        cells.remove(&target);
        cells.insert(victim);
    }
}

/// All fixed polyominoes (distinct up to translation) with exactly `n`
/// cells, in canonical form and sorted by cell list.
pub fn fixed_polyominoes(n: usize) -> Vec<Board> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeSet<Vec<(i32, i32)>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for shape in &level {
            let set: BTreeSet<(i32, i32)> = shape.iter().copied().collect();
            for &(x, y) in shape {
                for (dx, dy) in STEPS_2D {
                    let p = (x + dx, y + dy);
                    if set.contains(&p) {
                        continue;
                    }
                    let mut grown: Vec<(i32, i32)> = shape.clone();
                    grown.push(p);
                    let mx = grown.iter().map(|c| c.0).min().unwrap();
                    let my = grown.iter().map(|c| c.1).min().unwrap();
                    let mut canon: Vec<(i32, i32)> =
                        grown.iter().map(|&(a, b)| (a - mx, b - my)).collect();
                    canon.sort_unstable();
                    next.insert(canon);
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|shape| {
            make_board(2, shape.into_iter().map(|(x, y)| vec![x, y]))
                .expect("grown shapes are connected")
        })
        .collect()
}
