//! Planar 3-SAT instances where every variable occurs exactly three times.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("not a P3SAT3 instance: {0}")]
    NotP3SAT3(String),
    #[error("variable-clause incidence graph is not planar")]
    NonPlanar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// From a signed one-based DIMACS literal.
    pub fn from_dimacs(v: i64) -> Literal {
        Literal {
            var: v.unsigned_abs() as usize - 1,
            positive: v > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = if self.positive { "" } else { "~" };
        write!(f, "{neg}x{}", self.var + 1)
    }
}

pub type Clause = Vec<Literal>;

/// A validated instance: clause widths 2 or 3, distinct variables per clause,
/// three occurrences per variable, planar incidence graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatInstance {
    var_count: usize,
    clauses: Vec<Clause>,
}

impl SatInstance {
    pub fn new(var_count: usize, clauses: Vec<Clause>) -> Result<SatInstance, SatError> {
        let inst = SatInstance { var_count, clauses };
        inst.check_shape()?;
        if !is_planar(inst.var_count + inst.clauses.len(), &inst.incidence_edges()) {
            return Err(SatError::NonPlanar);
        }
        Ok(inst)
    }

    /// Gadget-level formula: widths 2 or 3 and distinct variables per clause
    /// as usual, but a variable may occur anywhere from zero to four times.
    /// Used for single-gadget examples and small unsatisfiable probes.
    pub fn relaxed(var_count: usize, clauses: Vec<Clause>) -> Result<SatInstance, SatError> {
        let inst = SatInstance { var_count, clauses };
        let occ = inst.check_widths()?;
        if let Some(v) = occ.iter().position(|&k| k > 4) {
            return Err(SatError::NotP3SAT3(format!("x{} occurs {} times", v + 1, occ[v])));
        }
        if !is_planar(inst.var_count + inst.clauses.len(), &inst.incidence_edges()) {
            return Err(SatError::NonPlanar);
        }
        Ok(inst)
    }

    /// Builds from signed one-based literals, as in DIMACS.
    pub fn from_dimacs_clauses(var_count: usize, clauses: &[&[i64]]) -> Result<SatInstance, SatError> {
        let cls = clauses
            .iter()
            .map(|c| c.iter().map(|&v| Literal::from_dimacs(v)).collect())
            .collect();
        SatInstance::new(var_count, cls)
    }

    fn check_shape(&self) -> Result<(), SatError> {
        let occ = self.check_widths()?;
        if let Some(v) = occ.iter().position(|&k| k != 3) {
            return Err(SatError::NotP3SAT3(format!("x{} occurs {} times", v + 1, occ[v])));
        }
        Ok(())
    }

    fn check_widths(&self) -> Result<Vec<usize>, SatError> {
        let mut occ = vec![0usize; self.var_count];
        for (i, c) in self.clauses.iter().enumerate() {
            if !(2..=3).contains(&c.len()) {
                return Err(SatError::NotP3SAT3(format!("clause {} has width {}", i + 1, c.len())));
            }
            let vars: BTreeSet<usize> = c.iter().map(|l| l.var).collect();
            if vars.len() != c.len() {
                return Err(SatError::NotP3SAT3(format!("clause {} repeats a variable", i + 1)));
            }
            for l in c {
                if l.var >= self.var_count {
                    return Err(SatError::NotP3SAT3(format!("variable x{} out of range", l.var + 1)));
                }
                occ[l.var] += 1;
            }
        }
        Ok(occ)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Variables are nodes `0..n`, clause `j` is node `n + j`.
    pub fn incidence_edges(&self) -> Vec<(usize, usize)> {
        let n = self.var_count;
        let mut e = Vec::new();
        for (j, c) in self.clauses.iter().enumerate() {
            for l in c {
                e.push((l.var, n + j));
            }
        }
        e
    }

    pub fn incidence_connected(&self) -> bool {
        let nodes = self.var_count + self.clauses.len();
        let mut dsu: Vec<usize> = (0..nodes).collect();
        fn find(d: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while d[r] != r {
                r = d[r];
            }
            d[x] = r;
            r
        }
        for (a, b) in self.incidence_edges() {
            let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
            dsu[ra] = rb;
        }
        let root = find(&mut dsu, 0);
        (0..nodes).all(|v| find(&mut dsu, v) == root)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.var_count && self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// First satisfying assignment in binary counting order, x1 as the low bit.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        assert!(self.var_count < 32, "truth table too large");
        (0u32..1 << self.var_count)
            .map(|m| (0..self.var_count).map(|v| m >> v & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.satisfied_by(a))
    }

    pub fn all_solutions(&self) -> Vec<Vec<bool>> {
        assert!(self.var_count < 32, "truth table too large");
        (0u32..1 << self.var_count)
            .map(|m| (0..self.var_count).map(|v| m >> v & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| self.satisfied_by(a))
            .collect()
    }

    /// Variables whose three occurrences share one sign, with that sign.
    pub fn pure_variables(&self) -> Vec<(usize, bool)> {
        (0..self.var_count)
            .filter_map(|v| {
                let signs: BTreeSet<bool> = self.literals_of(v).map(|(_, l)| l.positive).collect();
                (signs.len() == 1).then(|| (v, *signs.iter().next().unwrap()))
            })
            .collect()
    }

    /// `(clause index, literal)` for every occurrence of `var`.
    pub fn literals_of(&self, var: usize) -> impl Iterator<Item = (usize, Literal)> + '_ {
        self.clauses
            .iter()
            .enumerate()
            .flat_map(move |(j, c)| c.iter().filter(move |l| l.var == var).map(move |&l| (j, l)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&l.to_dimacs().to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }
}

impl fmt::Display for SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                write!(f, " & ")?;
            }
            write!(f, "(")?;
            for (i, l) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// clauses as signed integers terminated by `0`.
pub fn parse_sat(text: &str) -> Result<SatInstance, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(syntax(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let n = parts[2].parse().map_err(|_| syntax(line_no, "bad variable count"))?;
            let m = parts[3].parse().map_err(|_| syntax(line_no, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(syntax(line_no, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| syntax(line_no, &format!("bad literal `{tok}`")))?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if v.unsigned_abs() as usize > n {
                return Err(syntax(line_no, &format!("literal {v} exceeds variable count {n}")));
            }
            current.push(Literal::from_dimacs(v));
        }
    }
    let Some((n, m)) = header else {
        return Err(syntax(last_line.max(1), "missing header"));
    };
    if !current.is_empty() {
        return Err(syntax(last_line, "last clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(syntax(last_line, &format!("header promises {m} clauses, found {}", clauses.len())));
    }
    // Checked before anything is sized by `n`.
    let literals: usize = clauses.iter().map(Vec::len).sum();
    if n > literals / 3 {
        return Err(SatError::NotP3SAT3(format!(
            "{n} variables need {} occurrences, formula has {literals}",
            n.saturating_mul(3)
        )));
    }
    SatInstance::new(n, clauses)
}

fn syntax(line: usize, msg: &str) -> SatError {
    SatError::Syntax {
        line,
        msg: msg.to_string(),
    }
}

/// Random instance over `var_count >= 2` variables with a connected, planar
/// incidence graph. Rejection sampling over random occurrence orders.
pub fn generate_p3sat3<R: Rng>(var_count: usize, rng: &mut R) -> Option<SatInstance> {
    if var_count < 2 {
        return None;
    }
    for _ in 0..10_000 {
        let mut occ: Vec<usize> = (0..var_count).flat_map(|v| [v, v, v]).collect();
        occ.shuffle(rng);
        let mut clauses = Vec::new();
        let mut i = 0;
        let mut ok = true;
        while i < occ.len() {
            let rem = occ.len() - i;
            let w = match rem {
                2 | 3 => rem,
                4 => 2,
                _ => rng.gen_range(2..=3),
            };
            let vars = &occ[i..i + w];
            if vars.iter().collect::<BTreeSet<_>>().len() != w {
                ok = false;
                break;
            }
            clauses.push(vars.iter().map(|&v| Literal::new(v, rng.gen_bool(0.5))).collect());
            i += w;
        }
        if !ok {
            continue;
        }
        if let Ok(inst) = SatInstance::new(var_count, clauses) {
            if inst.incidence_connected() {
                return Some(inst);
            }
        }
    }
    None
}

/// Planarity of a simple graph, tested per biconnected block with the
/// Demoucron-Malgrange-Pertuiset face-embedding procedure.
pub fn is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    blocks(&adj).into_iter().all(|block| block_planar(&block))
}

/// Edge sets of the biconnected blocks.
fn blocks(adj: &[BTreeSet<usize>]) -> Vec<Vec<(usize, usize)>> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    let nbrs: Vec<Vec<usize>> = adj.iter().map(|s| s.iter().copied().collect()).collect();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour position)
        let mut frames = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut k)) = frames.last_mut() {
            if *k < nbrs[v].len() {
                let w = nbrs[v][*k];
                *k += 1;
                if disc[w] == usize::MAX {
                    stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, v, 0));
                } else if w != parent && disc[w] < disc[v] {
                    stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(&(u, _, _)) = frames.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = stack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

fn block_planar(block: &[(usize, usize)]) -> bool {
    let mut verts: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let nv = verts.len();
    if nv <= 4 || block.len() <= 3 {
        return true;
    }
    if block.len() > 3 * nv - 6 {
        return false;
    }
    let local = |v: usize| verts.binary_search(&v).unwrap();
    let mut adj = vec![Vec::new(); nv];
    for &(a, b) in block {
        let (a, b) = (local(a), local(b));
        adj[a].push(b);
        adj[b].push(a);
    }
    let cycle = find_cycle(&adj);
    let mut in_h = vec![false; nv];
    let mut h_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h[a] = true;
        h_edges.insert((a.min(b), a.max(b)));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    while h_edges.len() < block.len() {
        let frags = fragments(&adj, &in_h, &h_edges);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attach.iter().all(|a| faces[f].contains(a)))
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("a fragment remains while edges are missing");
        let path = fragment_path(&adj, &in_h, &frags[fi]);
        for w in path.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (a, b) = (path[0], *path.last().unwrap());
        let i = face.iter().position(|&v| v == a).unwrap();
        let j = face.iter().position(|&v| v == b).unwrap();
        let len = face.len();
        let inner = &path[1..path.len() - 1];
        let mut f1 = Vec::new();
        let mut k = i;
        loop {
            f1.push(face[k]);
            if k == j {
                break;
            }
            k = (k + 1) % len;
        }
        f1.extend(inner.iter().rev());
        let mut f2 = Vec::new();
        let mut k = j;
        loop {
            f2.push(face[k]);
            if k == i {
                break;
            }
            k = (k + 1) % len;
        }
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
    }
    true
}

fn find_cycle(adj: &[Vec<usize>]) -> Vec<usize> {
    // Depth-first search until a back edge closes a cycle; blocks with three
    // or more vertices always contain one.
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![(0usize, 0usize)];
    depth[0] = 0;
    while let Some(&mut (v, ref mut k)) = stack.last_mut() {
        if *k < adj[v].len() {
            let w = adj[v][*k];
            *k += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cyc = vec![v];
                let mut u = v;
                while u != w {
                    u = parent[u];
                    cyc.push(u);
                }
                return cyc;
            }
        } else {
            stack.pop();
        }
    }
    unreachable!("biconnected block without a cycle")
}

struct Fragment {
    /// Non-embedded vertices; empty for a single chord.
    inner: Vec<usize>,
    attach: BTreeSet<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], h_edges: &BTreeSet<(usize, usize)>) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for a in 0..n {
        for &b in &adj[a] {
            if a < b && in_h[a] && in_h[b] && !h_edges.contains(&(a, b)) {
                out.push(Fragment {
                    inner: Vec::new(),
                    attach: [a, b].into_iter().collect(),
                    chord: Some((a, b)),
                });
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        let mut attach = BTreeSet::new();
        seen[s] = true;
        let mut k = 0;
        while k < inner.len() {
            let v = inner[k];
            k += 1;
            for &w in &adj[v] {
                if in_h[w] {
                    attach.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                }
            }
        }
        out.push(Fragment {
            inner,
            attach,
            chord: None,
        });
    }
    out
}

/// Path through the fragment joining two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], frag: &Fragment) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let inner: BTreeSet<usize> = frag.inner.iter().copied().collect();
    let start = *frag.attach.iter().next().unwrap();
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    for &w in &adj[start] {
        if inner.contains(&w) && prev[w] == usize::MAX {
            prev[w] = start;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if in_h[w] && w != start {
                let mut path = vec![w, v];
                let mut u = v;
                while prev[u] != start {
                    u = prev[u];
                    path.push(u);
                }
                path.push(start);
                path.reverse();
                return path;
            }
            if inner.contains(&w) && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) const SAMPLE_CNF: &str = "c three variables, four clauses\np cnf 3 4\n1 2 3 0\n1 -2 0\n-2 3 0\n-1 -3 0\n";

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    }

    #[test]
    fn parses_sample_formula() {
        let inst = parse_sat(SAMPLE_CNF).unwrap();
        assert_eq!(inst.var_count(), 3);
        assert_eq!(inst.clauses().len(), 4);
        assert_eq!(inst.all_solutions(), vec![vec![true, false, false], vec![false, false, true]]);
        assert_eq!(inst.to_string(), "(x1 | x2 | x3) & (x1 | ~x2) & (~x2 | x3) & (~x1 | ~x3)");
        assert_eq!(parse_sat(&inst.to_dimacs()).unwrap(), inst);
    }

    #[test]
    fn huge_header_is_rejected_cheaply() {
        assert!(matches!(parse_sat("p cnf 600000072335 0\n"), Err(SatError::NotP3SAT3(_))));
        assert!(matches!(parse_sat("p cnf 4 1\n1 2 3 0\n"), Err(SatError::NotP3SAT3(_))));
        let max = format!("p cnf {} 1\n1 2 0\n", usize::MAX);
        assert!(matches!(parse_sat(&max), Err(SatError::NotP3SAT3(_))));
    }

    #[test]
    fn rejects_bad_shapes() {
        let four = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n";
        assert!(matches!(parse_sat(four), Err(SatError::NotP3SAT3(_))));
        let unit = "p cnf 2 4\n1 0\n1 2 0\n1 -2 0\n2 -2 0\n";
        assert!(matches!(parse_sat(unit), Err(SatError::NotP3SAT3(_))));
        let repeat = "p cnf 2 3\n1 2 0\n1 -2 0\n-1 -1 0\n";
        assert!(matches!(parse_sat(repeat), Err(SatError::NotP3SAT3(_))));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_sat(""), Err(SatError::Syntax { .. })));
        assert!(matches!(parse_sat("1 2 0\n"), Err(SatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_sat("p cnf 2 3\n1 x 0\n"), Err(SatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_sat("p cnf 2 3\n1 5 0\n"), Err(SatError::Syntax { .. })));
        assert!(matches!(parse_sat("p cnf 2 2\n1 2 0\n"), Err(SatError::Syntax { .. })));
        assert!(matches!(parse_sat("p cnf 2 1\n1 2\n"), Err(SatError::Syntax { .. })));
    }

    #[test]
    fn clause_split_across_lines() {
        let inst = parse_sat("p cnf 2 3\n1\n2 0 1 -2\n0\n-1 2 0\n").unwrap();
        assert_eq!(inst.clauses().len(), 3);
    }

    #[test]
    fn planarity_basics() {
        assert!(is_planar(4, &complete(4)));
        assert!(!is_planar(5, &complete(5)));
        let k33: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert!(!is_planar(6, &k33));
        // K5 minus an edge and K3,3 minus an edge are planar.
        assert!(is_planar(5, &complete(5)[1..]));
        assert!(is_planar(6, &k33[1..]));
        // Petersen graph.
        let pet = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        assert!(!is_planar(10, &pet));
        // Cube graph.
        let cube: Vec<(usize, usize)> = (0..8usize)
            .flat_map(|a| (0..3).map(move |k| (a, a ^ (1 << k))))
            .filter(|&(a, b)| a < b)
            .collect();
        assert!(is_planar(8, &cube));
    }

    #[test]
    fn triangulated_grid_subgraphs_are_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let id = |r: usize, c: usize| r * 5 + c;
        let mut tri = Vec::new();
        for r in 0..5 {
            for c in 0..5 {
                if c + 1 < 5 {
                    tri.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < 5 {
                    tri.push((id(r, c), id(r + 1, c)));
                }
                if r + 1 < 5 && c + 1 < 5 {
                    tri.push((id(r, c), id(r + 1, c + 1)));
                }
            }
        }
        assert!(is_planar(25, &tri));
        for _ in 0..200 {
            let sub: Vec<(usize, usize)> = tri.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
            assert!(is_planar(25, &sub));
        }
    }

    #[test]
    fn subdivided_kuratowski_graphs_are_not_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k33: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        for base in [complete(5), k33] {
            for _ in 0..100 {
                let mut n = 6;
                let mut edges = Vec::new();
                for &(a, b) in &base {
                    let mut prev = a;
                    for _ in 0..rng.gen_range(0..3) {
                        edges.push((prev, n));
                        prev = n;
                        n += 1;
                    }
                    edges.push((prev, b));
                }
                for _ in 0..rng.gen_range(0..4) {
                    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if a != b {
                        edges.push((a, b));
                    }
                }
                assert!(!is_planar(n, &edges), "{edges:?}");
            }
        }
    }

    #[test]
    fn three_triples_on_three_vars_is_nonplanar() {
        let c = [1i64, 2, 3];
        let err = SatInstance::from_dimacs_clauses(3, &[&c, &c, &c]).unwrap_err();
        assert_eq!(err, SatError::NonPlanar);
    }

    #[test]
    fn generator_output_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            for _ in 0..10 {
                let inst = generate_p3sat3(n, &mut rng).unwrap();
                assert_eq!(inst.var_count(), n);
                assert!(inst.incidence_connected());
                assert_eq!(parse_sat(&inst.to_dimacs()).unwrap(), inst);
            }
        }
        assert!(generate_p3sat3(1, &mut rng).is_none());
    }

    #[test]
    fn pure_variables() {
        let inst = SatInstance::from_dimacs_clauses(2, &[&[1, 2], &[1, -2], &[1, 2]]).unwrap();
        assert_eq!(inst.pure_variables(), vec![(0, true)]);
    }
}
