//! Queen reduction. Basic elements tile the base layer z = 0 at pitch four,
//! element (X, Y) centred on (4X, 4Y + 2). Each variable owns one connected
//! group of elements whose states alternate like a checkerboard. A clause is
//! a straight line along y at z = 2 over a column of horizontal tips, with a
//! connector dropping to z = 1 on each literal's tip.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use polydom_core::{Board, Piece};
use serde::{Deserialize, Serialize};

use crate::layout::{
    finish, ClauseWiring, Connector, GadgetKind, GadgetPlacement, LayoutCounts, ReductionError, ReductionLayout,
    StateGroup,
};
use crate::rook::VAR_CELLS;
use crate::sat::{Literal, SatInstance};

/// Rows between the bottoms of consecutive variables in a routed layout.
const VAR_PITCH: i32 = 7;
/// Element columns per clause: two for the stub, one gap.
const CLAUSE_PITCH: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TipSide {
    Left,
    Right,
}

impl TipSide {
    fn dx(self) -> i32 {
        match self {
            TipSide::Left => -1,
            TipSide::Right => 1,
        }
    }
}

/// A clause connector standing on a horizontal tip of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanConnector {
    pub var: usize,
    pub element: [i32; 2],
    pub side: TipSide,
}

/// Element grid and clause attachments. Literal signs come from the formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueenPlan {
    pub elements: Vec<[i32; 2]>,
    /// Bottom-left element of each variable's literal gadget.
    pub literals: Vec<[i32; 2]>,
    pub clauses: Vec<Vec<PlanConnector>>,
}

fn centre(e: [i32; 2]) -> [i32; 2] {
    [4 * e[0], 4 * e[1] + 2]
}

const SIDES: [[i32; 2]; 4] = [[-1, 0], [1, 0], [0, -1], [0, 1]];

/// Cells an element holds in the vertical state (vertical tips, horizontal
/// inner cells) or the horizontal one, leaving out tips shared with a
/// neighbour.
fn state_cells(e: [i32; 2], vertical: bool, present: &HashSet<[i32; 2]>) -> Vec<[i32; 3]> {
    let c = centre(e);
    let (tips, inner): ([[i32; 2]; 2], [[i32; 2]; 2]) = if vertical {
        ([[0, -1], [0, 1]], [[-1, 0], [1, 0]])
    } else {
        ([[-1, 0], [1, 0]], [[0, -1], [0, 1]])
    };
    let mut out = Vec::new();
    for t in tips {
        if !present.contains(&[e[0] + t[0], e[1] + t[1]]) {
            out.push([c[0] + 2 * t[0], c[1] + 2 * t[1], 0]);
        }
    }
    for d in inner {
        out.push([c[0] + d[0], c[1] + d[1], 0]);
    }
    out
}

fn parity(e: [i32; 2]) -> bool {
    (e[0] + e[1]).rem_euclid(2) == 1
}

impl QueenPlan {
    /// Routes a formula. Variable i gets a two-row trunk at rows
    /// `1 + 7 (n - 1 - i)` starting with its literal gadget in columns 1 and
    /// 2. Clause j owns columns `3 + 3j` and `4 + 3j`; every literal of it
    /// adds a 2x2 stub on its variable's trunk there, and the connector sits
    /// on the right tip of whichever stub row has the tag the sign needs.
    pub fn route(inst: &SatInstance) -> Result<QueenPlan, ReductionError> {
        let n = inst.var_count();
        if n > 1 && !inst.incidence_connected() {
            return Err(ReductionError::RoutingFailed(
                "variable-clause incidence graph is disconnected".into(),
            ));
        }
        let row = |v: usize| 1 + VAR_PITCH * (n - 1 - v) as i32;
        let col = |j: usize| 3 + CLAUSE_PITCH * j as i32;
        let mut last = vec![2; n];
        for (j, c) in inst.clauses().iter().enumerate() {
            for l in c {
                last[l.var] = last[l.var].max(col(j) + 2);
            }
        }
        let mut elements = Vec::new();
        for v in 0..n {
            for x in 1..=last[v] {
                elements.push([x, row(v)]);
                elements.push([x, row(v) + 1]);
            }
        }
        let mut clauses = Vec::new();
        for (j, c) in inst.clauses().iter().enumerate() {
            let a = col(j);
            let mut conns = Vec::new();
            for l in c {
                let r0 = row(l.var);
                for dy in [2, 3] {
                    for dx in [0, 1] {
                        elements.push([a + dx, r0 + dy]);
                    }
                }
                // Same parity as the literal's reference element means the
                // tip is empty when the variable is true.
                let same = (a + 1 + r0 + 2 - 1 - r0).rem_euclid(2) == 0;
                let r = if same == l.positive { r0 + 2 } else { r0 + 3 };
                conns.push(PlanConnector {
                    var: l.var,
                    element: [a + 1, r],
                    side: TipSide::Right,
                });
            }
            clauses.push(conns);
        }
        Ok(QueenPlan {
            elements,
            literals: (0..n).map(|v| [1, row(v)]).collect(),
            clauses,
        })
    }

    /// The layout drawn for the three-variable, four-clause example: x3, x2
    /// and x1 bottom to top, clause x1 or x2 or x3 on the far left.
    pub fn drawn_example() -> QueenPlan {
        let mut elements = Vec::new();
        let mut rows = |ys: &[i32], xs: &[i32]| {
            for &y in ys {
                for &x in xs {
                    elements.push([x, y]);
                }
            }
        };
        let all: Vec<i32> = (1..=12).collect();
        rows(&[1, 2], &all);
        rows(&[3], &[3, 4, 10, 11]);
        rows(&[4, 5], &[3, 4, 5, 6, 7, 8, 10, 11]);
        rows(&[6], &[3, 4, 10, 11]);
        rows(&[7], &[10, 11]);
        rows(&[8, 9], &[1, 2, 3, 4, 5, 6, 7, 8, 10, 11]);
        rows(&[10, 11], &[3, 4, 10, 11]);
        rows(&[12], &[10, 11]);
        rows(&[13], &[3, 4, 10, 11]);
        rows(&[14], &[3, 4]);
        rows(&[15, 16], &all[..11]);
        let c = |var: usize, x: i32, y: i32, side: TipSide| PlanConnector {
            var,
            element: [x, y],
            side,
        };
        use TipSide::{Left, Right};
        QueenPlan {
            elements,
            literals: vec![[1, 15], [1, 8], [1, 1]],
            clauses: vec![
                vec![c(0, 1, 16, Left), c(1, 1, 9, Left), c(2, 1, 2, Left)],
                vec![c(0, 3, 13, Left), c(1, 3, 10, Left)],
                vec![c(1, 8, 9, Right), c(2, 8, 4, Right)],
                vec![c(0, 11, 16, Right), c(2, 11, 13, Right)],
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Var(usize),
    Clause(usize),
}

fn near(c: [i32; 3]) -> impl Iterator<Item = [i32; 3]> {
    (-1..=1).flat_map(move |dx| {
        (-1..=1).flat_map(move |dy| (-1..=1).map(move |dz| [c[0] + dx, c[1] + dy, c[2] + dz]))
    })
}

fn fail(msg: String) -> ReductionError {
    ReductionError::RoutingFailed(msg)
}

/// Routes `inst` and builds the queen instance. The maximum number of
/// non-attacking queens reaches `target` exactly when `inst` is satisfiable.
pub fn reduce_queens(inst: &SatInstance) -> Result<(Board, usize, ReductionLayout), ReductionError> {
    let plan = QueenPlan::route(inst)?;
    let (board, layout) = reduce_queens_with_plan(inst, &plan)?;
    if !layout.polarity_mismatches.is_empty() {
        return Err(fail(format!("router produced mismatched tips {:?}", layout.polarity_mismatches)));
    }
    Ok((board, layout.target, layout))
}

/// Builds the board for a given plan. Which state of each variable's group
/// counts as true is picked to agree with as many connector tips as
/// possible; tips that still disagree with their literal's sign are listed
/// in `polarity_mismatches`.
pub fn reduce_queens_with_plan(inst: &SatInstance, plan: &QueenPlan) -> Result<(Board, ReductionLayout), ReductionError> {
    let n = inst.var_count();
    if plan.literals.len() != n || plan.clauses.len() != inst.clauses().len() {
        return Err(fail("plan does not match the formula's shape".into()));
    }
    let present: HashSet<[i32; 2]> = plan.elements.iter().copied().collect();
    if present.len() != plan.elements.len() {
        return Err(fail("plan lists an element twice".into()));
    }
    let degree = |e: [i32; 2]| SIDES.iter().filter(|d| present.contains(&[e[0] + d[0], e[1] + d[1]])).count();

    // Element groups, one per variable.
    let mut group: HashMap<[i32; 2], usize> = HashMap::new();
    for (v, &r) in plan.literals.iter().enumerate() {
        if !present.contains(&r) {
            return Err(fail(format!("literal gadget of x{} is missing", v + 1)));
        }
        if let Some(&w) = group.get(&r) {
            return Err(fail(format!("x{} and x{} share elements", w + 1, v + 1)));
        }
        let mut stack = vec![r];
        group.insert(r, v);
        while let Some(e) = stack.pop() {
            for d in SIDES {
                let f = [e[0] + d[0], e[1] + d[1]];
                if present.contains(&f) && !group.contains_key(&f) {
                    group.insert(f, v);
                    stack.push(f);
                }
            }
        }
    }
    if let Some(e) = plan.elements.iter().find(|e| !group.contains_key(*e)) {
        return Err(fail(format!("element {e:?} belongs to no variable")));
    }
    let mut per_degree = [0usize; 5];
    for &e in &plan.elements {
        let d = degree(e);
        if d < 2 {
            return Err(fail(format!("element {e:?} has {d} neighbours")));
        }
        per_degree[d] += 1;
    }
    let base: usize = plan.elements.iter().map(|&e| 8 - degree(e)).sum::<usize>() / 2;

    // Tip checks and the labelling of each variable's states.
    let mut resolved: Vec<Vec<(PlanConnector, Literal)>> = Vec::new();
    for (j, (conns, clause)) in plan.clauses.iter().zip(inst.clauses()).enumerate() {
        if conns.len() != clause.len() {
            return Err(fail(format!("clause {} has {} literals but {} connectors", j + 1, clause.len(), conns.len())));
        }
        let mut out = Vec::new();
        for pc in conns {
            let lit = *clause
                .iter()
                .find(|l| l.var == pc.var)
                .ok_or_else(|| fail(format!("connector of clause {} names x{}", j + 1, pc.var + 1)))?;
            if group.get(&pc.element) != Some(&pc.var) {
                return Err(fail(format!("connector of clause {} is not on x{}", j + 1, pc.var + 1)));
            }
            if present.contains(&[pc.element[0] + pc.side.dx(), pc.element[1]]) {
                return Err(fail(format!("connector of clause {} stands on a shared tip", j + 1)));
            }
            out.push((*pc, lit));
        }
        resolved.push(out);
    }
    // With the reference element vertical when true, a horizontal tip is
    // empty when true exactly on elements of the reference's parity.
    let fits_sign = |pc: &PlanConnector, lit: &Literal, flip: bool| {
        let empty_when_true = (parity(pc.element) == parity(plan.literals[pc.var])) != flip;
        empty_when_true == lit.positive
    };
    let mut flip = vec![false; n];
    for (v, f) in flip.iter_mut().enumerate() {
        let bad = |fl: bool| {
            resolved
                .iter()
                .flatten()
                .filter(|(pc, l)| pc.var == v && !fits_sign(pc, l, fl))
                .count()
        };
        *f = bad(true) < bad(false);
    }
    let mut mismatches = Vec::new();
    for (j, conns) in resolved.iter().enumerate() {
        for (pc, l) in conns {
            if !fits_sign(pc, l, flip[pc.var]) {
                mismatches.push((j, *l));
            }
        }
    }

    // Base layer.
    let mut owner: HashMap<[i32; 3], Owner> = HashMap::new();
    let mut element_of: HashMap<[i32; 3], [i32; 2]> = HashMap::new();
    let mut gadgets = Vec::new();
    for &e in &plan.elements {
        let c = centre(e);
        let v = group[&e];
        for d in VAR_CELLS {
            let cell = [c[0] + d[0], c[1] + d[1], 0];
            owner.insert(cell, Owner::Var(v));
            element_of.entry(cell).or_insert(e);
        }
        let literal = plan.literals[v];
        let in_block = (0..2).contains(&(e[0] - literal[0])) && (0..2).contains(&(e[1] - literal[1]));
        if e == literal || !in_block {
            gadgets.push(GadgetPlacement {
                kind: if e == literal { GadgetKind::Literal } else { GadgetKind::Wire },
                label: if e == literal { format!("x{}", v + 1) } else { format!("x{} element", v + 1) },
                position: [c[0], c[1], 0],
                orientation: "flat".into(),
            });
        }
    }
    for (&cell, &o) in &owner {
        for nb in near(cell) {
            if matches!(owner.get(&nb), Some(&p) if p != o) {
                return Err(fail(format!("variable groups touch at {cell:?}")));
            }
        }
    }

    // Clause gadgets.
    let mut wiring = Vec::new();
    let mut lengths = Vec::new();
    for (j, conns) in resolved.iter().enumerate() {
        let side = conns[0].0.side;
        let tips: Vec<[i32; 2]> = conns
            .iter()
            .map(|(pc, _)| {
                let c = centre(pc.element);
                [c[0] + 2 * pc.side.dx(), c[1]]
            })
            .collect();
        if conns.iter().any(|(pc, _)| pc.side != side) || tips.iter().any(|t| t[0] != tips[0][0]) {
            return Err(fail(format!("connectors of clause {} are not in one column", j + 1)));
        }
        let o = side.dx();
        let x = tips[0][0];
        let at: BTreeMap<i32, (PlanConnector, Literal)> = tips.iter().map(|t| t[1]).zip(conns.iter().copied()).collect();
        if at.len() != conns.len() {
            return Err(fail(format!("two connectors of clause {} share a tip", j + 1)));
        }
        let (y0, y1) = (*at.keys().next().unwrap(), *at.keys().next_back().unwrap());
        let mut w = ClauseWiring {
            clause: j,
            length: (y1 - y0 + 1) as usize,
            path: Vec::new(),
            fixed: Vec::new(),
            connectors: Vec::new(),
        };
        // Cells hanging over the base may touch their own element only.
        let mut cells: Vec<([i32; 3], Option<[i32; 2]>)> = Vec::new();
        for y in y0..=y1 {
            let line = [x, y, 2];
            cells.push((line, None));
            w.path.push(line);
            if let Some(&(pc, lit)) = at.get(&y) {
                let foot = [x + 2 * o, y, 1];
                cells.push(([x, y, 1], Some(pc.element)));
                cells.push(([x + o, y, 1], Some(pc.element)));
                cells.push((foot, None));
                w.fixed.push(foot);
                w.connectors.push(Connector {
                    literal: lit,
                    tile: [x, y, 0],
                    extra: line,
                });
            } else if (y - y0) % 2 == 1 {
                cells.push(([x - o, y, 2], None));
                cells.push(([x - 2 * o, y, 2], None));
                w.fixed.push([x - 2 * o, y, 2]);
            } else {
                cells.push(([x, y, 3], None));
                cells.push(([x, y, 4], None));
                w.fixed.push([x, y, 4]);
            }
        }
        let own: HashSet<[i32; 3]> = cells.iter().map(|c| c.0).collect();
        for &(c, host) in &cells {
            if owner.contains_key(&c) {
                return Err(fail(format!("clause {} overlaps another gadget at {c:?}", j + 1)));
            }
            for nb in near(c) {
                if own.contains(&nb) {
                    continue;
                }
                match owner.get(&nb) {
                    None => {}
                    Some(Owner::Var(_)) if host.is_some() && element_of.get(&nb) == host.as_ref() => {}
                    Some(_) => return Err(fail(format!("clause {} touches another gadget at {c:?}", j + 1))),
                }
            }
        }
        for (c, _) in cells {
            owner.insert(c, Owner::Clause(j));
        }
        gadgets.push(GadgetPlacement {
            kind: GadgetKind::Clause,
            label: format!("c{}", j + 1),
            position: [x, y0, 2],
            orientation: format!("y-line {}", if o < 0 { "west" } else { "east" }),
        });
        lengths.push(w.length);
        wiring.push(w);
    }

    let mut groups = Vec::new();
    for v in 0..n {
        let mut t = BTreeSet::new();
        let mut f = BTreeSet::new();
        let r = plan.literals[v];
        for &e in plan.elements.iter().filter(|e| group[*e] == v) {
            let vertical_when_true = (parity(e) == parity(r)) != flip[v];
            t.extend(state_cells(e, vertical_when_true, &present));
            f.extend(state_cells(e, !vertical_when_true, &present));
        }
        groups.push(StateGroup {
            var: v,
            true_cells: t.into_iter().collect(),
            false_cells: f.into_iter().collect(),
        });
    }

    let m = base + lengths.iter().sum::<usize>();
    let layout = ReductionLayout {
        piece: Piece::Queen,
        gadgets,
        wiring,
        groups,
        counts: LayoutCounts {
            n_var: n,
            n_connect: 0,
            n_2neigh: per_degree[2] / 2,
            n_3neigh: per_degree[3] / 2,
            n_4neigh: per_degree[4] / 2,
            clause_lengths: lengths,
        },
        m,
        target: m + inst.clauses().len(),
        var_count: n,
        origin: (0..n).collect(),
        clauses: inst.clauses().to_vec(),
        pure: Vec::new(),
        height: 0,
        polarity_mismatches: mismatches,
    };
    finish(owner.into_keys().collect(), layout)
}

/// Recomputes the counts of a queen layout from the board alone: element
/// degrees on the bottom layer, one variable per group of touching
/// elements, and per clause gadget `(size - k) / 3` line cells, where `k`
/// counts its connectors (three cells each at height one).
pub fn audit(board: &Board) -> LayoutCounts {
    let z0 = board.bounds()[2].0;
    let degrees = crate::gadget::element_degrees(board, z0);
    let mut per_degree = [0usize; 5];
    for (_, d) in &degrees {
        per_degree[*d] += 1;
    }
    let centres: HashSet<[i32; 2]> = degrees.iter().map(|(c, _)| *c).collect();
    let mut seen = HashSet::new();
    let mut n_var = 0;
    for &c in &centres {
        if !seen.insert(c) {
            continue;
        }
        n_var += 1;
        let mut stack = vec![c];
        while let Some(e) = stack.pop() {
            for d in SIDES {
                let f = [e[0] + 4 * d[0], e[1] + 4 * d[1]];
                if centres.contains(&f) && seen.insert(f) {
                    stack.push(f);
                }
            }
        }
    }
    let off: Vec<usize> = (0..board.len()).filter(|&i| board.cell(i).coords()[2] != z0).collect();
    let mut done = vec![false; board.len()];
    let mut lengths = Vec::new();
    for &s in &off {
        if done[s] {
            continue;
        }
        done[s] = true;
        let mut stack = vec![s];
        let (mut size, mut low) = (0, 0);
        while let Some(u) = stack.pop() {
            size += 1;
            if board.cell(u).coords()[2] == z0 + 1 {
                low += 1;
            }
            for w in board.neighbors(u) {
                if !done[w] && board.cell(w).coords()[2] != z0 {
                    done[w] = true;
                    stack.push(w);
                }
            }
        }
        let k = low / 3;
        lengths.push((size - k) / 3);
    }
    LayoutCounts {
        n_var,
        n_connect: 0,
        n_2neigh: per_degree[2] / 2,
        n_3neigh: per_degree[3] / 2,
        n_4neigh: per_degree[4] / 2,
        clause_lengths: lengths,
    }
}
