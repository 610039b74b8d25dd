//! Bookkeeping shared by both reductions: where the gadgets went, which
//! cells encode each variable, and how a truth assignment maps onto pieces.

use std::collections::BTreeSet;

use polydom_core::{Board, BoardError, Cell, Piece, Placement};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sat::{Literal, SatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("routing failed: {0}")]
    RoutingFailed(String),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("assignment has {found} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment leaves clause {0} false")]
    NotSatisfying(usize),
    #[error("placement has {found} pieces, target is {target}")]
    NotOptimal { found: usize, target: usize },
    #[error("placement does not fix a state for variable gadget {0}")]
    NoState(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Variable,
    Literal,
    Wire,
    Connection,
    Clause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetPlacement {
    pub kind: GadgetKind,
    pub label: String,
    pub position: [i32; 3],
    pub orientation: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutCounts {
    pub n_var: usize,
    pub n_connect: usize,
    pub n_2neigh: usize,
    pub n_3neigh: usize,
    pub n_4neigh: usize,
    pub clause_lengths: Vec<usize>,
}

/// The cells a variable's pieces occupy in each of its two states. For
/// queens this spans the literal gadget and every wire hanging off it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateGroup {
    /// Variable of the routed formula.
    pub var: usize,
    pub true_cells: Vec<[i32; 3]>,
    pub false_cells: Vec<[i32; 3]>,
}

/// One literal attachment of a clause gadget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    /// Literal over the routed formula's variables.
    pub literal: Literal,
    /// Base cell the connector stands on.
    pub tile: [i32; 3],
    /// Line cell that can take the extra piece when the tile is empty.
    pub extra: [i32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseWiring {
    pub clause: usize,
    /// Number of nodes and connectors.
    pub length: usize,
    /// Line cells, in order.
    pub path: Vec<[i32; 3]>,
    /// Cells holding a piece in every maximal placement: one per node and
    /// one per connector foot.
    pub fixed: Vec<[i32; 3]>,
    pub connectors: Vec<Connector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLayout {
    pub piece: Piece,
    pub gadgets: Vec<GadgetPlacement>,
    pub wiring: Vec<ClauseWiring>,
    pub groups: Vec<StateGroup>,
    pub counts: LayoutCounts,
    /// Pieces from gadgets and clause bodies, without the per-clause extra.
    pub m: usize,
    /// `m` plus one per clause; reached exactly when the formula is
    /// satisfiable.
    pub target: usize,
    /// Variables of the original formula.
    pub var_count: usize,
    /// Original variable behind each routed variable.
    pub origin: Vec<usize>,
    /// Original clauses, for checking decoded assignments.
    pub clauses: Vec<Vec<Literal>>,
    /// Original variables occurring with one sign only, with that sign.
    pub pure: Vec<(usize, bool)>,
    pub height: usize,
    /// Clause connectors sitting on a tile whose tag contradicts the literal
    /// sign. Always empty for routed layouts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polarity_mismatches: Vec<(usize, Literal)>,
}

impl ReductionLayout {
    pub(crate) fn translate(&mut self, d: [i32; 3]) {
        let mv = |c: &mut [i32; 3]| {
            for k in 0..3 {
                c[k] += d[k];
            }
        };
        for g in &mut self.gadgets {
            mv(&mut g.position);
        }
        for w in &mut self.wiring {
            w.path.iter_mut().for_each(mv);
            w.fixed.iter_mut().for_each(mv);
            for c in &mut w.connectors {
                mv(&mut c.tile);
                mv(&mut c.extra);
            }
        }
        for g in &mut self.groups {
            g.true_cells.iter_mut().for_each(mv);
            g.false_cells.iter_mut().for_each(mv);
        }
    }
}

/// Shifts every cell so each axis starts at zero, builds the board, and
/// moves the layout along with it.
pub(crate) fn finish(cells: BTreeSet<[i32; 3]>, mut layout: ReductionLayout) -> Result<(Board, ReductionLayout), ReductionError> {
    let mut lo = [i32::MAX; 3];
    for c in &cells {
        for k in 0..3 {
            lo[k] = lo[k].min(c[k]);
        }
    }
    let d = [-lo[0], -lo[1], -lo[2]];
    layout.translate(d);
    let board = Board::from_cells(3, cells.iter().map(|c| vec![c[0] + d[0], c[1] + d[1], c[2] + d[2]]))?;
    let z = board.bounds()[2];
    layout.height = (z.1 - z.0 + 1) as usize;
    Ok((board, layout))
}

fn cell(c: &[i32; 3]) -> Cell {
    Cell::from(*c)
}

/// Pieces for a satisfying assignment of the original formula: every
/// variable in its state, every clause body, and one extra per clause on
/// the first true literal.
pub fn assignment_to_placement(layout: &ReductionLayout, assignment: &[bool]) -> Result<Placement, ReductionError> {
    let n = layout.var_count;
    if assignment.len() != n {
        return Err(ReductionError::AssignmentLength {
            expected: n,
            found: assignment.len(),
        });
    }
    let routed: Vec<bool> = layout.origin.iter().map(|&v| assignment[v]).collect();
    let mut cells = BTreeSet::new();
    for g in &layout.groups {
        let src = if routed[g.var] { &g.true_cells } else { &g.false_cells };
        cells.extend(src.iter().map(cell));
    }
    for w in &layout.wiring {
        cells.extend(w.fixed.iter().map(cell));
        let hit = w
            .connectors
            .iter()
            .find(|c| c.literal.eval(&routed))
            .ok_or(ReductionError::NotSatisfying(w.clause))?;
        cells.insert(cell(&hit.extra));
    }
    Ok(Placement::new(layout.piece, cells))
}

/// Reads the variable states off a placement of `target` pieces. Pure
/// variables are reported at their sign, which keeps every clause they
/// touch true.
pub fn placement_to_assignment(layout: &ReductionLayout, placement: &Placement) -> Result<Vec<bool>, ReductionError> {
    if placement.len() != layout.target {
        return Err(ReductionError::NotOptimal {
            found: placement.len(),
            target: layout.target,
        });
    }
    let has = |cs: &[[i32; 3]]| cs.iter().all(|c| placement.cells.contains(&cell(c)));
    let mut routed = vec![None; layout.origin.len()];
    for (i, g) in layout.groups.iter().enumerate() {
        let v = match (has(&g.true_cells), has(&g.false_cells)) {
            (true, false) => true,
            (false, true) => false,
            _ => return Err(ReductionError::NoState(i)),
        };
        routed[g.var].get_or_insert(v);
    }
    let mut out = vec![false; layout.var_count];
    for (r, &v) in layout.origin.iter().enumerate().rev() {
        out[v] = routed[r].unwrap_or(false);
    }
    for &(v, sign) in &layout.pure {
        out[v] = sign;
    }
    if let Some(c) = layout.clauses.iter().position(|c| !c.iter().any(|l| l.eval(&out))) {
        return Err(ReductionError::NotSatisfying(c));
    }
    Ok(out)
}

/// Board, layout and an optional certificate placement, serialized
/// together.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionBundle {
    pub board: serde_json::Value,
    pub layout: ReductionLayout,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Placement>,
}

impl ReductionBundle {
    pub fn new(board: &Board, layout: ReductionLayout, certificate: Option<Placement>) -> ReductionBundle {
        let board = serde_json::from_str(&board.to_json()).expect("board json is valid");
        ReductionBundle {
            board,
            layout,
            certificate,
        }
    }

    pub fn board(&self) -> Result<Board, BoardError> {
        Board::from_json(&self.board.to_string())
    }
}
