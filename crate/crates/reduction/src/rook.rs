//! Rook reduction. Variable gadgets lie flat at z = 0. Each clause gadget is
//! a straight line two layers above or below them, running along x or y,
//! and stands on one variable tile per literal through a connector column.

use std::collections::{BTreeSet, HashMap};

use polydom_core::{Board, Piece};

use crate::layout::{
    finish, ClauseWiring, Connector, GadgetKind, GadgetPlacement, LayoutCounts, ReductionError, ReductionLayout,
    StateGroup,
};
use crate::sat::{Clause, Literal, SatInstance};

pub(crate) const VAR_CELLS: [[i32; 2]; 12] = [
    [-2, 0],
    [-1, -1],
    [-1, 0],
    [-1, 1],
    [0, -2],
    [0, -1],
    [0, 1],
    [0, 2],
    [1, -1],
    [1, 0],
    [1, 1],
    [2, 0],
];
pub(crate) const TIPS: [[i32; 2]; 4] = [[-2, 0], [0, -2], [0, 2], [2, 0]];
pub(crate) const T_TILES: [[i32; 2]; 2] = [[-1, -1], [1, 1]];
pub(crate) const F_TILES: [[i32; 2]; 2] = [[1, -1], [-1, 1]];

/// Connection gadget standing on the north-west tiles of a variable at the
/// origin.
pub(crate) const CONNECTION_CELLS: [[i32; 3]; 13] = [
    [-2, -2, 2],
    [-1, -2, 1],
    [-1, -1, 1],
    [-1, -2, 2],
    [-1, -2, 3],
    [0, -2, 1],
    [0, -2, 3],
    [0, -2, 4],
    [1, -2, 1],
    [1, -1, 1],
    [1, -2, 2],
    [1, -2, 3],
    [2, -2, 2],
];

const GAP: i32 = 6;
const ATTEMPTS: usize = 20_000;
/// Tile labellings tried before giving up.
const FLIPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

/// Variable tile used by a clause line along `axis` on side `side` (-1 for
/// north or west, +1 for south or east). Positive literals take F tiles.
fn tile(axis: Axis, side: i32, positive: bool) -> [i32; 2] {
    match (axis, side < 0, positive) {
        (Axis::X, true, true) => [1, -1],
        (Axis::X, true, false) => [-1, -1],
        (Axis::X, false, true) => [-1, 1],
        (Axis::X, false, false) => [1, 1],
        (Axis::Y, true, true) => [-1, 1],
        (Axis::Y, true, false) => [-1, -1],
        (Axis::Y, false, true) => [1, -1],
        (Axis::Y, false, false) => [1, 1],
    }
}

fn tile_id(t: [i32; 2]) -> usize {
    ((t[0] + 1) + (t[1] + 1) / 2) as usize
}

/// The formula actually laid out. Only two tiles carry each sign, so the
/// third occurrence of a pure variable `x` moves to a fresh `x'`, tied back
/// by the clause `x' or not x` (signs mirrored for negative `x`). Any model
/// of the original extends by `x' = x`; conversely a model of the routed
/// formula stays a model with `x` set to its sign.
#[derive(Clone)]
pub(crate) struct Routed {
    pub vars: usize,
    pub clauses: Vec<Clause>,
    pub origin: Vec<usize>,
    pub pure: Vec<(usize, bool)>,
}

pub(crate) fn split_pure(inst: &SatInstance) -> Result<Routed, ReductionError> {
    let n = inst.var_count();
    let mut clauses: Vec<Clause> = inst.clauses().to_vec();
    let mut origin: Vec<usize> = (0..n).collect();
    let pure = inst.pure_variables();
    for v in 0..n {
        let occ: Vec<(usize, usize)> = clauses
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.iter().enumerate().filter(|(_, l)| l.var == v).map(move |(li, _)| (ci, li)))
            .collect();
        let pos = occ.iter().filter(|&&(c, l)| clauses[c][l].positive).count();
        let neg = occ.len() - pos;
        if pos <= 2 && neg <= 2 {
            continue;
        }
        if pos > 0 && neg > 0 {
            return Err(ReductionError::RoutingFailed(format!(
                "x{} has {pos} positive and {neg} negated occurrences; a variable gadget has two tiles per sign",
                v + 1
            )));
        }
        let sign = pos > 0;
        for &(c, l) in &occ[2..] {
            let fresh = origin.len();
            clauses[c][l].var = fresh;
            origin.push(v);
            clauses.push(vec![Literal::new(fresh, sign), Literal::new(v, !sign)]);
        }
    }
    let routed = Routed {
        vars: origin.len(),
        clauses,
        origin,
        pure,
    };
    if !routed.connected() {
        return Err(ReductionError::RoutingFailed(
            "variable-clause incidence graph is disconnected".into(),
        ));
    }
    Ok(routed)
}

impl Routed {
    /// Copies of the formula with one occurrence of a variable moved to a
    /// fresh copy `x'`, held equal by `x or not x'` and `not x or x'`. Only
    /// splits that keep every variable within two tiles per sign are
    /// produced.
    fn single_splits(&self) -> Vec<Routed> {
        let mut out = Vec::new();
        for (c, clause) in self.clauses.iter().enumerate() {
            for (i, lit) in clause.iter().enumerate() {
                let v = lit.var;
                let mut r = self.clone();
                let fresh = r.vars;
                r.vars += 1;
                r.origin.push(r.origin[v]);
                r.clauses[c][i].var = fresh;
                r.clauses.push(vec![Literal::new(v, true), Literal::new(fresh, false)]);
                r.clauses.push(vec![Literal::new(v, false), Literal::new(fresh, true)]);
                if r.signs_fit() {
                    out.push(r);
                }
            }
        }
        out
    }

    fn signs_fit(&self) -> bool {
        let mut count = vec![[0usize; 2]; self.vars];
        for l in self.clauses.iter().flatten() {
            count[l.var][l.positive as usize] += 1;
        }
        count.iter().all(|c| c[0] <= 2 && c[1] <= 2)
    }

    fn connected(&self) -> bool {
        let n = self.vars + self.clauses.len();
        let mut adj = vec![Vec::new(); n];
        for (j, c) in self.clauses.iter().enumerate() {
            for l in c {
                adj[l.var].push(self.vars + j);
                adj[self.vars + j].push(l.var);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Union-find keeping `pos[v] - pos[root]` for each variable.
#[derive(Clone)]
struct Offsets {
    parent: Vec<usize>,
    off: Vec<i32>,
}

impl Offsets {
    fn new(n: usize) -> Offsets {
        Offsets {
            parent: (0..n).collect(),
            off: vec![0; n],
        }
    }

    fn find(&self, mut v: usize) -> (usize, i32) {
        let mut d = 0;
        while self.parent[v] != v {
            d += self.off[v];
            v = self.parent[v];
        }
        (v, d)
    }

    /// Records `pos[a] - pos[b] == d`; false on contradiction.
    fn join(&mut self, a: usize, b: usize, d: i32) -> bool {
        let (ra, da) = self.find(a);
        let (rb, db) = self.find(b);
        if ra == rb {
            return da - db == d;
        }
        self.parent[ra] = rb;
        self.off[ra] = d + db - da;
        true
    }

    /// Positions: components ordered by `order` and packed `GAP` apart.
    fn layout(&self, order: &[usize]) -> Vec<i32> {
        let n = self.parent.len();
        let roots = self.roots();
        let mut base = HashMap::new();
        let mut next = 0;
        for &k in order {
            let r = roots[k];
            let rel: Vec<i32> = (0..n).filter(|&v| self.find(v).0 == r).map(|v| self.find(v).1).collect();
            let (lo, hi) = (*rel.iter().min().unwrap(), *rel.iter().max().unwrap());
            base.insert(r, next - lo);
            next += hi - lo + GAP;
        }
        (0..n)
            .map(|v| {
                let (r, d) = self.find(v);
                base[&r] + d
            })
            .collect()
    }

    fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v] == v).collect()
    }
}

#[derive(Clone)]
struct Choice {
    axis: Axis,
    sides: Vec<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Var(usize),
    Clause(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Plain,
    /// Connector cell directly over the given variable tile.
    Over([i32; 3]),
}

struct ClauseBuild {
    cells: Vec<([i32; 3], Role)>,
    wiring: ClauseWiring,
}

fn neighbors(c: [i32; 3]) -> [[i32; 3]; 6] {
    let [x, y, z] = c;
    [
        [x - 1, y, z],
        [x + 1, y, z],
        [x, y - 1, z],
        [x, y + 1, z],
        [x, y, z - 1],
        [x, y, z + 1],
    ]
}

/// Cells of one clause gadget. `h` picks the layer (+1 above, -1 below) and
/// `d` the side its left nodes stick out to.
fn build_clause(
    j: usize,
    clause: &Clause,
    choice: &Choice,
    pos: &[[i32; 2]],
    flip: &[bool],
    h: i32,
    d: i32,
) -> Option<ClauseBuild> {
    let axis = choice.axis;
    let put = |along: i32, across: i32, z: i32| match axis {
        Axis::X => [along, across, z],
        Axis::Y => [across, along, z],
    };
    let mut conns: Vec<(i32, i32, Literal, [i32; 3])> = Vec::new();
    let mut line = None;
    for (lit, &s) in clause.iter().zip(&choice.sides) {
        let t = tile(axis, s, lit.positive != flip[lit.var]);
        let p = pos[lit.var];
        let abs = [p[0] + t[0], p[1] + t[1], 0];
        let (along, across) = match axis {
            Axis::X => (abs[0], abs[1]),
            Axis::Y => (abs[1], abs[0]),
        };
        if *line.get_or_insert(across) != across {
            return None;
        }
        conns.push((along, s, *lit, abs));
    }
    let l = line?;
    conns.sort_by_key(|c| c.0);
    if conns.windows(2).any(|w| w[1].0 - w[0].0 < 2) {
        return None;
    }
    let (a0, a1) = (conns[0].0, conns[conns.len() - 1].0);
    let mut cells = Vec::new();
    let mut wiring = ClauseWiring {
        clause: j,
        length: (a1 - a0 + 1) as usize,
        path: Vec::new(),
        fixed: Vec::new(),
        connectors: Vec::new(),
    };
    let mut since = 0;
    for a in a0..=a1 {
        let t = put(a, l, 2 * h);
        cells.push((t, Role::Plain));
        wiring.path.push(t);
        if let Some(&(_, e, lit, abs)) = conns.iter().find(|c| c.0 == a) {
            let foot = put(a, l + e, h);
            cells.push((put(a, l, h), Role::Over(abs)));
            cells.push((foot, Role::Plain));
            wiring.fixed.push(foot);
            wiring.connectors.push(Connector {
                literal: lit,
                tile: abs,
                extra: t,
            });
            since = 0;
        } else {
            since += 1;
            let node = if since % 2 == 1 { put(a, l, 3 * h) } else { put(a, l + d, 2 * h) };
            cells.push((node, Role::Plain));
            wiring.fixed.push(node);
        }
    }
    Some(ClauseBuild { cells, wiring })
}

struct Router<'a> {
    routed: &'a Routed,
    /// Variables whose T and F tiles swap roles.
    flip: Vec<bool>,
    attempts: usize,
}

struct Routing {
    pos: Vec<[i32; 2]>,
    choices: Vec<Choice>,
    layers: Vec<ClauseBuild>,
}

impl Router<'_> {
    fn search(
        &mut self,
        j: usize,
        used: &mut Vec<[bool; 4]>,
        ux: &Offsets,
        uy: &Offsets,
        choices: &mut Vec<Choice>,
    ) -> Option<Routing> {
        if self.attempts >= ATTEMPTS {
            return None;
        }
        let clauses = &self.routed.clauses;
        if j == clauses.len() {
            return self.place(ux, uy, choices);
        }
        let c = &clauses[j];
        for axis in [Axis::X, Axis::Y] {
            for mask in 0..(1u32 << c.len()) {
                let sides: Vec<i32> = (0..c.len()).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
                let tiles: Vec<usize> = c
                    .iter()
                    .zip(&sides)
                    .map(|(l, &s)| tile_id(tile(axis, s, l.positive != self.flip[l.var])))
                    .collect();
                if c.iter().zip(&tiles).any(|(l, &t)| used[l.var][t]) {
                    continue;
                }
                let (mut nx, mut ny) = (ux.clone(), uy.clone());
                let uf = if axis == Axis::X { &mut ny } else { &mut nx };
                let ok = (1..c.len()).all(|i| uf.join(c[0].var, c[i].var, sides[i] - sides[0]));
                if !ok {
                    continue;
                }
                for (l, &t) in c.iter().zip(&tiles) {
                    used[l.var][t] = true;
                }
                choices.push(Choice { axis, sides });
                let found = self.search(j + 1, used, &nx, &ny, choices);
                choices.pop();
                for (l, &t) in c.iter().zip(&tiles) {
                    used[l.var][t] = false;
                }
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }

    fn place(&mut self, ux: &Offsets, uy: &Offsets, choices: &[Choice]) -> Option<Routing> {
        let rx = ux.roots().len();
        let ry = uy.roots().len();
        for ox in orders(rx) {
            for oy in orders(ry) {
                self.attempts += 1;
                if self.attempts >= ATTEMPTS {
                    return None;
                }
                let xs = ux.layout(&ox);
                let ys = uy.layout(&oy);
                let pos: Vec<[i32; 2]> = xs.iter().zip(&ys).map(|(&x, &y)| [x, y]).collect();
                if let Some(r) = self.layers(&pos, choices) {
                    return Some(r);
                }
            }
        }
        None
    }

    fn layers(&self, pos: &[[i32; 2]], choices: &[Choice]) -> Option<Routing> {
        let mut occ: HashMap<[i32; 3], Owner> = HashMap::new();
        for (v, p) in pos.iter().enumerate() {
            for c in VAR_CELLS {
                let cell = [p[0] + c[0], p[1] + c[1], 0];
                if occ.contains_key(&cell) {
                    return None;
                }
                for nb in neighbors(cell) {
                    if matches!(occ.get(&nb), Some(&o) if o != Owner::Var(v)) {
                        return None;
                    }
                }
                occ.insert(cell, Owner::Var(v));
            }
        }
        let mut built = Vec::new();
        if self.stack(0, pos, choices, &mut occ, &mut built) {
            Some(Routing {
                pos: pos.to_vec(),
                choices: choices.to_vec(),
                layers: built,
            })
        } else {
            None
        }
    }

    fn stack(
        &self,
        j: usize,
        pos: &[[i32; 2]],
        choices: &[Choice],
        occ: &mut HashMap<[i32; 3], Owner>,
        built: &mut Vec<ClauseBuild>,
    ) -> bool {
        if j == choices.len() {
            return true;
        }
        for h in [1, -1] {
            for d in [1, -1] {
                let Some(b) = build_clause(j, &self.routed.clauses[j], &choices[j], pos, &self.flip, h, d) else {
                    continue;
                };
                if !fits(&b, Owner::Clause(j), occ) {
                    continue;
                }
                for &(c, _) in &b.cells {
                    occ.insert(c, Owner::Clause(j));
                }
                let cells: Vec<[i32; 3]> = b.cells.iter().map(|c| c.0).collect();
                built.push(b);
                if self.stack(j + 1, pos, choices, occ, built) {
                    return true;
                }
                built.pop();
                for c in cells {
                    occ.remove(&c);
                }
            }
        }
        false
    }
}

/// The new gadget may touch existing cells only where a connector stands on
/// its own tile.
fn fits(b: &ClauseBuild, me: Owner, occ: &HashMap<[i32; 3], Owner>) -> bool {
    let own: BTreeSet<[i32; 3]> = b.cells.iter().map(|c| c.0).collect();
    if own.len() != b.cells.len() {
        return false;
    }
    for &(c, role) in &b.cells {
        if occ.contains_key(&c) {
            return false;
        }
        for nb in neighbors(c) {
            match occ.get(&nb) {
                None => {}
                Some(&o) if o == me => {}
                Some(_) => {
                    if role != Role::Over(nb) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Identity first, then reversed, then the remaining permutations.
fn orders(k: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..k).collect();
    let mut out = vec![id.clone()];
    let rev: Vec<usize> = id.iter().rev().copied().collect();
    if rev != id {
        out.push(rev);
    }
    if k <= 5 {
        let mut all = Vec::new();
        permute(&mut id.clone(), 0, &mut all);
        for p in all {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

fn permute(a: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == a.len() {
        out.push(a.clone());
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, out);
        a.swap(k, i);
    }
}

fn var_label(routed: &Routed, v: usize) -> String {
    let o = routed.origin[v];
    if v == o {
        format!("x{}", o + 1)
    } else {
        format!("x{}'{}", o + 1, v)
    }
}

/// Searches tile labellings in Gray code order, one variable changing
/// between attempts. Returns the routing, the labelling and the number of
/// layouts tried.
fn route(routed: &Routed) -> (Option<Routing>, Vec<bool>, usize) {
    let mut tried = 0;
    let mut flip = vec![false; routed.vars];
    for mask in 0..FLIPS.min(1 << routed.vars.min(20)) {
        let g = mask ^ (mask >> 1);
        for (v, f) in flip.iter_mut().enumerate() {
            *f = g >> v & 1 == 1;
        }
        let mut router = Router {
            routed,
            flip: flip.clone(),
            attempts: 0,
        };
        let mut used = vec![[false; 4]; routed.vars];
        let found = router.search(
            0,
            &mut used,
            &Offsets::new(routed.vars),
            &Offsets::new(routed.vars),
            &mut Vec::new(),
        );
        tried += router.attempts;
        if found.is_some() {
            return (found, flip, tried);
        }
    }
    (None, flip, tried)
}

/// Compiles a formula into a rook instance whose independent domination
/// maximum reaches `target` exactly when the formula is satisfiable.
pub fn reduce_rooks(inst: &SatInstance) -> Result<(Board, usize, ReductionLayout), ReductionError> {
    let base = split_pure(inst)?;
    let mut tried = 0;
    let mut found = None;
    for routed in std::iter::once(base.clone()).chain(base.single_splits()) {
        let (r, flip, k) = route(&routed);
        tried += k;
        if let Some(r) = r {
            found = Some((routed, r, flip));
            break;
        }
    }
    let Some((routed, r, flip)) = found else {
        return Err(ReductionError::RoutingFailed(format!(
            "no clause placement found after {tried} layouts"
        )));
    };
    let mut cells = BTreeSet::new();
    let mut gadgets = Vec::new();
    let mut groups = Vec::new();
    for (v, p) in r.pos.iter().enumerate() {
        let at = |c: [i32; 2]| [p[0] + c[0], p[1] + c[1], 0];
        cells.extend(VAR_CELLS.iter().map(|&c| at(c)));
        gadgets.push(GadgetPlacement {
            kind: GadgetKind::Variable,
            label: var_label(&routed, v),
            position: [p[0], p[1], 0],
            orientation: "flat".into(),
        });
        let tips: Vec<[i32; 3]> = TIPS.iter().map(|&c| at(c)).collect();
        let (t, f) = if flip[v] { (F_TILES, T_TILES) } else { (T_TILES, F_TILES) };
        groups.push(StateGroup {
            var: v,
            true_cells: tips.iter().copied().chain(t.iter().map(|&c| at(c))).collect(),
            false_cells: tips.iter().copied().chain(f.iter().map(|&c| at(c))).collect(),
        });
    }
    let mut wiring = Vec::new();
    for (b, ch) in r.layers.into_iter().zip(&r.choices) {
        cells.extend(b.cells.iter().map(|c| c.0));
        let first = b.wiring.path[0];
        let z = first[2];
        gadgets.push(GadgetPlacement {
            kind: GadgetKind::Clause,
            label: format!("c{}", b.wiring.clause + 1),
            position: first,
            orientation: format!("{}-line z={z:+}", if ch.axis == Axis::X { "x" } else { "y" }),
        });
        wiring.push(b.wiring);
    }
    let lengths: Vec<usize> = wiring.iter().map(|w| w.length).collect();
    let m = 6 * routed.vars + lengths.iter().sum::<usize>();
    let layout = ReductionLayout {
        piece: Piece::Rook,
        gadgets,
        wiring,
        groups,
        counts: LayoutCounts {
            n_var: routed.vars,
            n_connect: 0,
            clause_lengths: lengths,
            ..LayoutCounts::default()
        },
        m,
        target: m + routed.clauses.len(),
        var_count: inst.var_count(),
        origin: routed.origin.clone(),
        clauses: inst.clauses().to_vec(),
        pure: routed.pure.clone(),
        height: 0,
        polarity_mismatches: Vec::new(),
    };
    let (board, layout) = finish(cells, layout)?;
    Ok((board, layout.target, layout))
}

/// A variable gadget with one connection gadget on its north-west tiles.
/// Target 12: six for the variable and six for the connection.
pub fn connection_stack() -> (Board, usize) {
    let cells = VAR_CELLS
        .iter()
        .map(|c| vec![c[0], c[1], 0])
        .chain(CONNECTION_CELLS.iter().map(|c| c.to_vec()));
    (Board::from_cells(3, cells).expect("connection stack is connected"), 12)
}

/// Recomputes the counts of a rook layout from the board alone: variable
/// gadgets are the twelve-cell diamonds of the base layer, and each clause
/// gadget is a component of the cells off that layer, holding two cells per
/// node, three per connector.
pub fn audit(board: &Board, base_z: i32) -> LayoutCounts {
    let has = |c: &[i32]| board.index_of_coords(c).is_some();
    let n_var = board
        .cells()
        .iter()
        .map(|c| c.coords())
        .filter(|c| c[2] == base_z && !has(&[c[0], c[1] + 2, base_z]))
        .filter(|c| {
            let (x, y) = (c[0], c[1] + 2);
            VAR_CELLS.iter().all(|d| has(&[x + d[0], y + d[1], base_z]))
        })
        .count();
    let off: Vec<usize> = (0..board.len()).filter(|&i| board.cell(i).coords()[2] != base_z).collect();
    let mut seen = vec![false; board.len()];
    let mut lengths = Vec::new();
    for &s in &off {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let (mut size, mut low) = (0, 0);
        while let Some(u) = stack.pop() {
            size += 1;
            if (board.cell(u).coords()[2] - base_z).abs() == 1 {
                low += 1;
            }
            for w in board.neighbors(u) {
                if !seen[w] && board.cell(w).coords()[2] != base_z {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let k = low / 2;
        lengths.push((size - k) / 2);
    }
    LayoutCounts {
        n_var,
        n_connect: 0,
        clause_lengths: lengths,
        ..LayoutCounts::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{assignment_to_placement, placement_to_assignment};
    use crate::sat::{generate_p3sat3, parse_sat};
    use polydom_core::{solve, verify_placement, Budget, Problem, Status};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn optimum(board: &Board) -> usize {
        let s = solve(&Problem::max_independent(board.clone(), Piece::Rook).compile(), &Budget::default());
        assert_eq!(s.status, Status::Optimal);
        s.value.unwrap()
    }

    fn check(inst: &SatInstance) {
        let (board, target, layout) = reduce_rooks(inst).unwrap();
        assert!(layout.height <= 12);
        let base = layout.gadgets.iter().find(|g| g.kind == GadgetKind::Variable).unwrap().position[2];
        let a = audit(&board, base);
        assert_eq!(a.n_var, layout.counts.n_var);
        let mut got = a.clause_lengths.clone();
        let mut want = layout.counts.clause_lengths.clone();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
        let best = optimum(&board);
        match inst.brute_force() {
            Some(s) => {
                assert_eq!(best, target, "{inst}");
                let p = assignment_to_placement(&layout, &s).unwrap();
                assert!(verify_placement(&board, &p).unwrap().independent);
                assert!(inst.satisfied_by(&placement_to_assignment(&layout, &p).unwrap()));
            }
            None => assert!(best < target, "{inst}"),
        }
    }

    #[test]
    fn single_variable() {
        let (board, target, _) = reduce_rooks(&SatInstance::relaxed(1, vec![]).unwrap()).unwrap();
        assert_eq!((board.len(), target, optimum(&board)), (12, 6, 6));
    }

    #[test]
    fn connection_stack_reaches_twelve() {
        let (board, target) = connection_stack();
        assert_eq!(optimum(&board), target);
    }

    #[test]
    fn sample_formula() {
        check(&parse_sat("p cnf 3 4\n1 2 3 0\n1 -2 0\n-2 3 0\n-1 -3 0\n").unwrap());
    }

    #[test]
    fn unsatisfiable_probe_loses_a_rook() {
        let l = |v, p| Literal::new(v, p);
        let inst = SatInstance::relaxed(
            2,
            vec![
                vec![l(0, true), l(1, true)],
                vec![l(0, true), l(1, false)],
                vec![l(0, false), l(1, true)],
                vec![l(0, false), l(1, false)],
            ],
        )
        .unwrap();
        check(&inst);
    }

    #[test]
    fn generated_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            for _ in 0..4 {
                if let Some(inst) = generate_p3sat3(n, &mut rng) {
                    check(&inst);
                }
            }
        }
    }
}
