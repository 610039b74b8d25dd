//! Value tables over hypercubes and squares, with a resumable JSONL cache.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attack::{verify, Piece};
use crate::board::{hyperboard, Cell};
use crate::solver::{solve_problem, Budget, Problem, Status};

pub const CACHE_FILE: &str = "sequences.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Most non-attacking queens on the `n^d` hypercube.
    MaxIndepQueens,
    /// Fewest non-attacking dominating queens on the `n x n` board.
    MinIndepQueensSquare,
    /// Fewest dominating queens on the `n x n` board.
    MinAttackQueensSquare,
    /// Fewest dominating rooks on the `n x n` board.
    MinRooksSquare,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::MaxIndepQueens,
        Family::MinIndepQueensSquare,
        Family::MinAttackQueensSquare,
        Family::MinRooksSquare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MaxIndepQueens => "max-indep-queens",
            Family::MinIndepQueensSquare => "min-indep-queens-square",
            Family::MinAttackQueensSquare => "min-attack-queens-square",
            Family::MinRooksSquare => "min-rooks-square",
        }
    }

    fn problem(self, d: usize, n: u32) -> Result<Problem, SequenceError> {
        let board = hyperboard(d, n as i64).map_err(|e| SequenceError::InvalidSpec(e.to_string()))?;
        Ok(match self {
            Family::MaxIndepQueens => Problem::max_independent(board, Piece::Queen),
            Family::MinIndepQueensSquare => Problem::min_independent_domination(board, Piece::Queen),
            Family::MinAttackQueensSquare => Problem::min_domination(board, Piece::Queen),
            Family::MinRooksSquare => Problem::min_domination(board, Piece::Rook),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = SequenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SequenceError::InvalidSpec(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("invalid sequence spec: {0}")]
    InvalidSpec(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}: bad cache record: {message}")]
    Cache { path: PathBuf, line: usize, message: String },
}

/// Which coordinate the range walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Dimension fixed, side length varies.
    FixedD(usize),
    /// Side length fixed, dimension varies.
    FixedN(u32),
}

#[derive(Debug, Clone)]
pub struct SequenceSpec {
    pub family: Family,
    pub axis: Axis,
    pub range: std::ops::RangeInclusive<u32>,
    pub budget: Budget,
}

impl SequenceSpec {
    pub fn new(family: Family, axis: Axis, range: std::ops::RangeInclusive<u32>, budget: Budget) -> Result<Self, SequenceError> {
        if range.is_empty() || *range.start() == 0 {
            return Err(SequenceError::InvalidSpec(format!(
                "range {}..{} must be nonempty and start at 1 or more",
                range.start(),
                range.end()
            )));
        }
        match (family, axis) {
            (Family::MaxIndepQueens, Axis::FixedD(d)) if d < 2 => {
                return Err(SequenceError::InvalidSpec(format!("dimension {d} is below 2")))
            }
            (Family::MaxIndepQueens, Axis::FixedN(_)) if *range.start() < 2 => {
                return Err(SequenceError::InvalidSpec("dimension range must start at 2".into()))
            }
            (Family::MaxIndepQueens, _) => {}
            (_, Axis::FixedD(2)) => {}
            (f, _) => return Err(SequenceError::InvalidSpec(format!("{f} is defined on squares only (d = 2)"))),
        }
        Ok(SequenceSpec {
            family,
            axis,
            range,
            budget,
        })
    }

    /// `(d, n)` for every point in range order.
    pub fn points(&self) -> Vec<(usize, u32)> {
        self.range
            .clone()
            .map(|k| match self.axis {
                Axis::FixedD(d) => (d, k),
                Axis::FixedN(n) => (k as usize, n),
            })
            .collect()
    }
}

/// One solved point; also the cache record format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointResult {
    pub family: Family,
    pub d: usize,
    pub n: u32,
    pub status: Status,
    pub value: Option<usize>,
    pub bound: Option<usize>,
    pub nodes: u64,
    pub millis: u64,
    /// Budget the point ran under, in milliseconds.
    pub budget_ms: u64,
    /// Witness passed verification with the family's flags.
    pub verified: bool,
    pub witness: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub rows: Vec<PointResult>,
    /// Rows served from the cache rather than solved in this run.
    pub cached: usize,
}

impl SequenceTable {
    pub fn values(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.value.filter(|_| r.status == Status::Optimal)).collect()
    }

    pub fn render(&self) -> String {
        let mut s = String::from("family                    d   n  value  status           nodes       ms\n");
        for r in &self.rows {
            let value = r.value.map_or("-".to_string(), |v| v.to_string());
            let status = serde_json::to_value(r.status).unwrap();
            let _ = writeln!(
                s,
                "{:<24} {:>2} {:>3} {:>6}  {:<15} {:>7} {:>8}",
                r.family.name(),
                r.d,
                r.n,
                value,
                status.as_str().unwrap_or("?"),
                r.nodes,
                r.millis
            );
        }
        s
    }
}

pub fn solve_point(family: Family, d: usize, n: u32, budget: &Budget) -> Result<PointResult, SequenceError> {
    let problem = family.problem(d, n)?;
    let sol = solve_problem(&problem, budget);
    let witness: Vec<Cell> = sol.witness.as_ref().map(|w| w.cells.iter().cloned().collect()).unwrap_or_default();
    let verified = match &sol.witness {
        Some(w) => verify(&problem.board, problem.piece, &w.cells).is_ok_and(|r| {
            (!problem.independence || r.independent) && (!problem.domination || r.dominates)
        }),
        None => false,
    };
    Ok(PointResult {
        family,
        d,
        n,
        status: sol.status,
        value: sol.value,
        bound: sol.bound,
        nodes: sol.stats.nodes,
        millis: sol.stats.millis,
        budget_ms: budget.max_time.as_millis() as u64,
        verified,
        witness,
    })
}

/// Records in a cache directory, later lines overriding earlier ones.
pub fn load_cache(dir: &Path) -> Result<HashMap<(Family, usize, u32), PointResult>, SequenceError> {
    let path = dir.join(CACHE_FILE);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
        Err(e) => {
            return Err(SequenceError::Io {
                path,
                message: e.to_string(),
            })
        }
    };
    let mut out = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: PointResult = serde_json::from_str(line).map_err(|e| SequenceError::Cache {
            path: path.clone(),
            line: k + 1,
            message: e.to_string(),
        })?;
        out.insert((rec.family, rec.d, rec.n), rec);
    }
    Ok(out)
}

/// Appends one record as a single write on an append-mode file.
fn append_record(path: &Path, rec: &PointResult) -> Result<(), SequenceError> {
    let io = |e: std::io::Error| SequenceError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut line = serde_json::to_string(rec).expect("record serializes");
    line.push('\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    f.write_all(line.as_bytes()).map_err(io)?;
    f.sync_data().map_err(io)
}

/// A cached record is reused if it is optimal, or if it exhausted a budget at
/// least as large as the one requested now.
fn reusable(rec: &PointResult, budget: &Budget) -> bool {
    rec.status == Status::Optimal || rec.budget_ms >= budget.max_time.as_millis() as u64
}

/// Solves every point of `spec` on `jobs` worker threads. With a cache
/// directory, finished points are appended as they complete and reused on
/// the next run.
pub fn run_sequence(spec: &SequenceSpec, cache: Option<&Path>, jobs: usize) -> Result<SequenceTable, SequenceError> {
    let cached = match cache {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| SequenceError::Io {
                path: dir.to_path_buf(),
                message: e.to_string(),
            })?;
            load_cache(dir)?
        }
        None => HashMap::new(),
    };
    let points = spec.points();
    let mut rows: Vec<Option<PointResult>> = points
        .iter()
        .map(|&(d, n)| cached.get(&(spec.family, d, n)).filter(|r| reusable(r, &spec.budget)).cloned())
        .collect();
    let from_cache = rows.iter().filter(|r| r.is_some()).count();
    let todo: Vec<usize> = (0..points.len()).filter(|&k| rows[k].is_none()).collect();

    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let cache_path = cache.map(|d| d.join(CACHE_FILE));
    let write_lock = Mutex::new(());
    let first_error: Mutex<Option<SequenceError>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1).min(todo.len().max(1)) {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::SeqCst);
                let Some(&k) = todo.get(t) else { break };
                let (d, n) = points[k];
                let outcome = solve_point(spec.family, d, n, &spec.budget).and_then(|rec| {
                    if let Some(path) = &cache_path {
                        let _guard = write_lock.lock().unwrap();
                        append_record(path, &rec)?;
                    }
                    Ok(rec)
                });
                match outcome {
                    Ok(rec) => results.lock().unwrap().push((k, rec)),
                    Err(e) => {
                        first_error.lock().unwrap().get_or_insert(e);
                        break;
                    }
                }
            });
        }
    });
    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    for (k, rec) in results.into_inner().unwrap() {
        rows[k] = Some(rec);
    }
    Ok(SequenceTable {
        rows: rows.into_iter().map(|r| r.expect("every point solved")).collect(),
        cached: from_cache,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    BudgetExceeded,
    /// Below the dimensions the conjecture speaks about.
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub d: usize,
    pub expected: usize,
    pub value: Option<usize>,
    pub verdict: Verdict,
}

/// Compares most non-attacking queens on `4^d` against `2^d`; the claim is
/// made for `d >= 4` and lower dimensions are reported as out of scope.
pub fn check_conjecture_2d(dims: std::ops::RangeInclusive<usize>, budget: &Budget) -> Vec<ConjectureRow> {
    dims.map(|d| {
        let expected = 1usize << d;
        let res = solve_point(Family::MaxIndepQueens, d, 4, budget).expect("d >= 2 builds a board");
        let value = res.value.filter(|_| res.status == Status::Optimal);
        let verdict = match value {
            None => Verdict::BudgetExceeded,
            Some(_) if d < 4 => Verdict::OutOfScope,
            Some(v) if v == expected => Verdict::Match,
            Some(_) => Verdict::Mismatch,
        };
        ConjectureRow {
            d,
            expected,
            value,
            verdict,
        }
    })
    .collect()
}

/// Parses `a..b`, `a..=b` or a single integer.
pub fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, SequenceError> {
    let bad = || SequenceError::InvalidSpec(format!("bad range {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(num(a)?..=num(b)?)
        }
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

/// Parses durations like `60s`, `500ms`, `2m` or a bare number of seconds.
pub fn parse_duration(s: &str) -> Result<Duration, SequenceError> {
    let bad = || SequenceError::InvalidSpec(format!("bad duration {s:?}"));
    let s = s.trim();
    let (num, unit) = s.find(|c: char| !c.is_ascii_digit()).map_or((s, ""), |k| s.split_at(k));
    let v: u64 = num.parse().map_err(|_| bad())?;
    match unit {
        "" | "s" => Ok(Duration::from_secs(v)),
        "ms" => Ok(Duration::from_millis(v)),
        "m" | "min" => Ok(Duration::from_secs(v * 60)),
        "h" => Ok(Duration::from_secs(v * 3600)),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> Budget {
        Budget::with_time(Duration::from_secs(30))
    }

    #[test]
    fn max_queens_plane() {
        let spec = SequenceSpec::new(Family::MaxIndepQueens, Axis::FixedD(2), 1..=8, quick()).unwrap();
        let t = run_sequence(&spec, None, 2).unwrap();
        let want = [1, 1, 2, 4, 5, 6, 7, 8];
        assert_eq!(t.values(), want.iter().map(|&v| Some(v)).collect::<Vec<_>>());
        assert!(t.rows.iter().all(|r| r.verified));
    }

    #[test]
    fn min_indep_not_below_min_attack() {
        let b = quick();
        let a = run_sequence(&SequenceSpec::new(Family::MinIndepQueensSquare, Axis::FixedD(2), 1..=7, b).unwrap(), None, 1).unwrap();
        let c = run_sequence(&SequenceSpec::new(Family::MinAttackQueensSquare, Axis::FixedD(2), 1..=7, b).unwrap(), None, 1).unwrap();
        for (x, y) in a.rows.iter().zip(&c.rows) {
            assert!(x.value.unwrap() >= y.value.unwrap());
        }
    }

    #[test]
    fn cache_resumes_identically() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SequenceSpec::new(Family::MinRooksSquare, Axis::FixedD(2), 1..=4, quick()).unwrap();
        let first = run_sequence(&spec, Some(dir.path()), 3).unwrap();
        assert_eq!(first.cached, 0);
        let again = run_sequence(&spec, Some(dir.path()), 1).unwrap();
        assert_eq!(again.cached, 4);
        assert_eq!(first.rows, again.rows);
        let lines = fs::read_to_string(dir.path().join(CACHE_FILE)).unwrap();
        assert_eq!(lines.lines().count(), 4);
    }

    #[test]
    fn budget_exceeded_is_recorded() {
        let spec = SequenceSpec::new(Family::MinAttackQueensSquare, Axis::FixedD(2), 8..=8, Budget::with_nodes(3)).unwrap();
        let t = run_sequence(&spec, None, 1).unwrap();
        assert_eq!(t.rows[0].status, Status::BudgetExceeded);
        assert_eq!(t.values(), vec![None]);
    }

    #[test]
    fn invalid_specs() {
        assert!(SequenceSpec::new(Family::MinRooksSquare, Axis::FixedD(3), 1..=2, quick()).is_err());
        assert!(SequenceSpec::new(Family::MaxIndepQueens, Axis::FixedD(2), 0..=2, quick()).is_err());
        assert!("queens".parse::<Family>().is_err());
        assert_eq!("min-rooks-square".parse::<Family>().unwrap(), Family::MinRooksSquare);
    }

    #[test]
    fn conjecture_low_dims() {
        let rows = check_conjecture_2d(2..=3, &quick());
        assert_eq!(rows[0].value, Some(4));
        assert_eq!(rows[1].value, Some(7));
        assert_eq!(rows[1].expected, 8);
        assert!(rows.iter().all(|r| r.verdict == Verdict::OutOfScope));
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_range("1..5").unwrap(), 1..=5);
        assert_eq!(parse_range("3..=4").unwrap(), 3..=4);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("a..b").is_err());
        assert_eq!(parse_duration("60s").unwrap(), Duration::from_secs(60));
        assert_eq!(parse_duration("250ms").unwrap(), Duration::from_millis(250));
        assert_eq!(parse_duration("2m").unwrap(), Duration::from_secs(120));
        assert!(parse_duration("5x").is_err());
    }
}
