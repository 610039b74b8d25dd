//! Branch and bound over the rows of a [`ConstraintSystem`].
//!
//! Minimization branches on the open covering row with the fewest free
//! candidates. Maximization partitions the free variables into cliques of
//! the packing conflict graph and branches in reverse clique order, using
//! the clique count as the upper bound.

use std::collections::HashSet;
use std::time::Instant;

use super::bitset::BitSet;
use super::{Budget, ConstraintSystem, Objective, SolveStats, Solution, Status};

struct Engine<'a> {
    sys: &'a ConstraintSystem,
    /// `conflict[v]`: variables sharing a packing row with `v`, including `v`.
    conflict: Vec<BitSet>,
    /// Conflict neighbours ordered by geometric closeness, used to grow cliques.
    near: Vec<Vec<usize>>,
    /// `covers[v]`: covering rows containing `v`.
    covers: Vec<BitSet>,
    row_vars: Vec<BitSet>,
    has_packing: bool,
    budget: Budget,
    start: Instant,
    nodes: u64,
    stopped: bool,
    best: Option<Vec<usize>>,
    /// When set, only supports of exactly this size are accepted.
    target: Option<usize>,
    blocked: HashSet<Vec<usize>>,
    found: Option<Vec<usize>>,
    /// Root bound; an incumbent reaching it closes the search.
    proven: Option<usize>,
    closed: bool,
}

impl<'a> Engine<'a> {
    fn new(sys: &'a ConstraintSystem, budget: Budget, start: Instant) -> Self {
        let n = sys.var_count;
        let mut conflict: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for row in &sys.packing {
            for &a in row {
                for &b in row {
                    conflict[a].insert(b);
                }
            }
        }
        for (v, c) in conflict.iter_mut().enumerate() {
            c.insert(v);
        }
        let near = (0..n)
            .map(|v| {
                let mut adj: Vec<usize> = conflict[v].iter().filter(|&w| w != v).collect();
                let here = sys.cells[v].coords();
                adj.sort_by_key(|&w| {
                    let diffs = here.iter().zip(sys.cells[w].coords()).map(|(a, b)| (a - b).unsigned_abs());
                    let cheb = diffs.clone().max().unwrap_or(0);
                    let l1: u32 = diffs.sum();
                    (cheb, l1, w)
                });
                adj
            })
            .collect();
        let rows = sys.covering.len();
        let mut covers: Vec<BitSet> = (0..n).map(|_| BitSet::new(rows)).collect();
        let mut row_vars = Vec::with_capacity(rows);
        for (r, row) in sys.covering.iter().enumerate() {
            for &v in row {
                covers[v].insert(r);
            }
            row_vars.push(BitSet::from_indices(n, row.iter().copied()));
        }
        Engine {
            sys,
            conflict,
            near,
            covers,
            row_vars,
            has_packing: !sys.packing.is_empty(),
            budget,
            start,
            nodes: 0,
            stopped: false,
            best: None,
            target: None,
            blocked: HashSet::new(),
            found: None,
            proven: None,
            closed: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes >= self.budget.max_nodes
            || (self.nodes & 1023 == 0 && self.start.elapsed() >= self.budget.max_time)
        {
            self.stopped = true;
        }
        self.stopped || self.closed || self.found.is_some()
    }

    fn root(&self) -> (BitSet, BitSet) {
        (
            BitSet::full(self.sys.var_count),
            BitSet::full(self.sys.covering.len()),
        )
    }

    fn accept(&mut self, chosen: &[usize]) {
        let mut support = chosen.to_vec();
        support.sort_unstable();
        match self.target {
            Some(t) => {
                if support.len() == t && !self.blocked.contains(&support) {
                    self.found = Some(support);
                }
            }
            None => {
                let better = match (&self.best, self.sys.sense) {
                    (None, _) => true,
                    (Some(b), Objective::Minimize) => support.len() < b.len(),
                    (Some(b), Objective::Maximize) => support.len() > b.len(),
                };
                if better {
                    self.closed = self.proven == Some(support.len());
                    self.best = Some(support);
                }
            }
        }
    }

    fn take(&self, free: &BitSet, uncovered: &BitSet, v: usize) -> (BitSet, BitSet) {
        let mut f = free.clone();
        f.remove(v);
        if self.has_packing {
            f.difference_with(&self.conflict[v]);
        }
        let mut u = uncovered.clone();
        u.difference_with(&self.covers[v]);
        (f, u)
    }

    /// Largest size a minimization leaf may still have to be worth reaching.
    fn min_limit(&self) -> usize {
        match (self.target, &self.best) {
            (Some(t), _) => t,
            (None, Some(b)) => b.len().saturating_sub(1),
            (None, None) => usize::MAX,
        }
    }

    /// Lower bound on the pieces still needed to close every open row.
    fn min_bound(&self, free: &BitSet, uncovered: &BitSet) -> usize {
        if uncovered.is_empty() {
            return 0;
        }
        let mut max_cover = 0;
        for v in free.iter() {
            max_cover = max_cover.max(self.covers[v].intersection_count(uncovered));
        }
        if max_cover == 0 {
            return usize::MAX;
        }
        let ratio = uncovered.count().div_ceil(max_cover);
        let mut rows: Vec<(usize, usize)> = uncovered
            .iter()
            .map(|r| (self.row_vars[r].intersection_count(free), r))
            .collect();
        rows.sort_unstable();
        let mut used = BitSet::new(self.sys.var_count);
        let mut disjoint = 0;
        for &(_, r) in &rows {
            let mut cand = self.row_vars[r].clone();
            cand.intersect_with(free);
            if !cand.intersects(&used) {
                disjoint += 1;
                used.union_with(&cand);
            }
        }
        ratio.max(disjoint)
    }

    fn min_search(&mut self, chosen: &mut Vec<usize>, mut free: BitSet, uncovered: BitSet) {
        if self.tick() {
            return;
        }
        if uncovered.is_empty() {
            self.accept(chosen);
            return;
        }
        if chosen.len() >= self.min_limit() {
            return;
        }
        let mut pick = None;
        for r in uncovered.iter() {
            let c = self.row_vars[r].intersection_count(&free);
            if c == 0 {
                return;
            }
            if pick.is_none_or(|(best, _)| c < best) {
                pick = Some((c, r));
            }
        }
        let lb = self.min_bound(&free, &uncovered);
        if lb == usize::MAX || chosen.len() + lb > self.min_limit() {
            return;
        }
        let (_, r) = pick.expect("uncovered is nonempty");
        let mut cands: Vec<(usize, usize)> = self.row_vars[r]
            .iter()
            .filter(|&v| free.contains(v))
            .map(|v| (usize::MAX - self.covers[v].intersection_count(&uncovered), v))
            .collect();
        cands.sort_unstable();
        for (_, v) in cands {
            let (f, u) = self.take(&free, &uncovered, v);
            chosen.push(v);
            self.min_search(chosen, f, u);
            chosen.pop();
            if self.stopped || self.closed || self.found.is_some() || chosen.len() >= self.min_limit() {
                return;
            }
            free.remove(v);
        }
    }

    /// Greedy clique partition of `free`; returns vertices with their
    /// 1-based clique number, in increasing clique order.
    fn cliques(&self, free: &BitSet) -> Vec<(usize, usize)> {
        let mut rest = free.clone();
        let mut out = Vec::with_capacity(free.count());
        let mut class = 0;
        while let Some(u) = rest.first() {
            class += 1;
            rest.remove(u);
            out.push((u, class));
            let mut common = rest.clone();
            common.intersect_with(&self.conflict[u]);
            for &w in &self.near[u] {
                if common.is_empty() {
                    break;
                }
                if common.contains(w) {
                    rest.remove(w);
                    common.remove(w);
                    common.intersect_with(&self.conflict[w]);
                    out.push((w, class));
                }
            }
        }
        out
    }

    fn max_search(&mut self, chosen: &mut Vec<usize>, mut free: BitSet, uncovered: BitSet) {
        if self.tick() {
            return;
        }
        if uncovered.is_empty() {
            self.accept(chosen);
            if self.found.is_some() {
                return;
            }
        }
        if self.target == Some(chosen.len()) || free.is_empty() {
            return;
        }
        for r in uncovered.iter() {
            if !self.row_vars[r].intersects(&free) {
                return;
            }
        }
        let order = self.cliques(&free);
        for &(v, class) in order.iter().rev() {
            let reach = chosen.len() + class;
            let hopeless = match (self.target, &self.best) {
                (Some(t), _) => reach < t,
                (None, Some(b)) => reach <= b.len(),
                (None, None) => false,
            };
            if hopeless {
                return;
            }
            let (f, u) = self.take(&free, &uncovered, v);
            chosen.push(v);
            self.max_search(chosen, f, u);
            chosen.pop();
            if self.stopped || self.closed || self.found.is_some() {
                return;
            }
            free.remove(v);
        }
    }

    /// Root state after applying forced variables; `None` if they clash.
    fn start_state(&self) -> Option<(Vec<usize>, BitSet, BitSet)> {
        let (mut free, mut uncovered) = self.root();
        let mut chosen = Vec::new();
        for &v in &self.sys.forced {
            if !free.contains(v) {
                return None;
            }
            (free, uncovered) = self.take(&free, &uncovered, v);
            chosen.push(v);
        }
        Some((chosen, free, uncovered))
    }

    fn run(&mut self) {
        if self.target.is_none() {
            self.proven = self.root_bound();
        }
        let Some((mut chosen, free, uncovered)) = self.start_state() else {
            return;
        };
        match self.sys.sense {
            Objective::Minimize => self.min_search(&mut chosen, free, uncovered),
            Objective::Maximize => self.max_search(&mut chosen, free, uncovered),
        }
    }

    /// Proven bound at the root: lower for min, upper for max.
    fn root_bound(&self) -> Option<usize> {
        let (chosen, free, uncovered) = self.start_state()?;
        match self.sys.sense {
            Objective::Minimize => {
                let b = self.min_bound(&free, &uncovered);
                (b != usize::MAX).then_some(chosen.len() + b)
            }
            Objective::Maximize => Some(chosen.len() + self.cliques(&free).last().map_or(0, |&(_, c)| c)),
        }
    }

    fn stats(&self) -> SolveStats {
        SolveStats {
            nodes: self.nodes,
            millis: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn finish(sys: &ConstraintSystem, status: Status, best: Option<Vec<usize>>, bound: Option<usize>, stats: SolveStats) -> Solution {
    let witness_vars = best.clone().unwrap_or_default();
    Solution {
        status,
        value: best.as_ref().map(Vec::len),
        witness: best.as_ref().map(|b| sys.placement(b)),
        witness_vars,
        all_optima: None,
        bound,
        stats,
    }
}

pub(super) fn solve(sys: &ConstraintSystem, budget: &Budget) -> Solution {
    let mut engine = Engine::new(sys, *budget, Instant::now());
    engine.run();
    let stats = engine.stats();
    let best = engine.best.take();
    if engine.stopped {
        let bound = engine.root_bound();
        return finish(sys, Status::BudgetExceeded, best, bound, stats);
    }
    match best {
        Some(b) => {
            let v = b.len();
            finish(sys, Status::Optimal, Some(b), Some(v), stats)
        }
        None => finish(sys, Status::Infeasible, None, None, stats),
    }
}

pub(super) fn enumerate(sys: &ConstraintSystem, budget: &Budget) -> Solution {
    let start = Instant::now();
    let first = solve(sys, budget);
    if first.status != Status::Optimal {
        let mut s = first;
        s.all_optima = Some(s.witness.iter().cloned().collect());
        return s;
    }
    let target = first.value.expect("optimal has a value");
    let mut engine = Engine::new(sys, *budget, start);
    engine.nodes = first.stats.nodes;
    engine.target = Some(target);
    let mut supports = vec![first.witness_vars.clone()];
    engine.blocked.insert(first.witness_vars.clone());
    loop {
        engine.found = None;
        engine.run();
        match engine.found.take() {
            Some(s) => {
                engine.blocked.insert(s.clone());
                supports.push(s);
            }
            None => break,
        }
        if engine.stopped {
            break;
        }
    }
    let status = if engine.stopped { Status::BudgetExceeded } else { Status::Optimal };
    supports.sort();
    let mut out = finish(sys, status, Some(first.witness_vars.clone()), Some(target), engine.stats());
    out.all_optima = Some(supports.iter().map(|s| sys.placement(s)).collect());
    out
}
