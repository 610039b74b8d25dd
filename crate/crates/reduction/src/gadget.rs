//! Gadget boards transcribed from the construction drawings, each with the
//! optimum it must reach, checked by exhaustive solving.

use std::collections::BTreeSet;
use std::time::Instant;

use polydom_core::{enumerate_optima, solve, Board, BoardError, Budget, Cell, Piece, Placement, Problem, Status};
use serde::{Deserialize, Serialize};
use thiserror::Error;

const SOURCES: [(&str, &str); 9] = [
    ("rook-variable", include_str!("../data/rook-variable.json")),
    ("rook-connection", include_str!("../data/rook-connection.json")),
    ("rook-clause-same-sign", include_str!("../data/rook-clause-same-sign.json")),
    ("rook-clause-mixed", include_str!("../data/rook-clause-mixed.json")),
    ("rook-clause-three", include_str!("../data/rook-clause-three.json")),
    ("queen-element", include_str!("../data/queen-element.json")),
    ("queen-literal", include_str!("../data/queen-literal.json")),
    ("queen-connection", include_str!("../data/queen-connection.json")),
    ("queen-clause", include_str!("../data/queen-clause.json")),
];

/// Cells a literal's pieces occupy in its true and false states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateLiteral {
    pub name: String,
    pub t: Vec<[i32; 3]>,
    pub f: Vec<[i32; 3]>,
}

/// Literal states forced onto the board, and the optimum that must follow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub states: Vec<bool>,
    pub optimum: usize,
    #[serde(default)]
    pub optima: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetTemplate {
    pub name: String,
    pub piece: Piece,
    pub description: String,
    pub cells: Vec<[i32; 3]>,
    /// Cells that every optimum must occupy.
    pub fixed: Vec<[i32; 3]>,
    pub literals: Vec<TemplateLiteral>,
    #[serde(default)]
    pub clause_length: Option<usize>,
    /// Elements with 2, 3 and 4 neighbouring elements, counted in pairs.
    #[serde(default)]
    pub pairs: Option<[usize; 3]>,
    pub optimum: usize,
    pub optima: Option<usize>,
    /// Every optimum must put each literal fully in one state.
    pub exclusive_states: bool,
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("{name}: {detail}")]
    LemmaViolated {
        name: String,
        detail: String,
        counterexample: Option<Placement>,
    },
    #[error("{name}: solver stopped with status {status:?}")]
    Budget { name: String, status: Status },
    #[error("{name}: {source}")]
    Board { name: String, source: BoardError },
    #[error("unknown template {0}")]
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub states: Vec<bool>,
    pub optimum: usize,
    pub optima: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetReport {
    pub name: String,
    pub cells: usize,
    pub optimum: usize,
    pub optima: Option<usize>,
    pub scenarios: Vec<ScenarioReport>,
    /// `6 n2 + 5 n3 + 4 n4` recomputed from the element geometry.
    pub pair_formula: Option<usize>,
    pub millis: u128,
}

impl GadgetTemplate {
    pub fn from_json(text: &str) -> Result<GadgetTemplate, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn board(&self) -> Result<Board, BoardError> {
        Board::from_cells(3, self.cells.iter().map(|c| c.to_vec()))
    }
}

pub fn builtin_templates() -> Vec<GadgetTemplate> {
    SOURCES
        .iter()
        .map(|(name, src)| GadgetTemplate::from_json(src).unwrap_or_else(|e| panic!("template {name}: {e}")))
        .collect()
}

pub fn template(name: &str) -> Result<GadgetTemplate, GadgetError> {
    builtin_templates()
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| GadgetError::Unknown(name.to_string()))
}

fn cell(c: &[i32; 3]) -> Cell {
    Cell::from(*c)
}

/// Solves the template and every scenario, comparing against the declared
/// optimum, optima count, fixed cells and literal states.
pub fn check_gadget(t: &GadgetTemplate, budget: &Budget) -> Result<GadgetReport, GadgetError> {
    let started = Instant::now();
    let name = t.name.clone();
    let violated = |detail: String, counterexample: Option<Placement>| GadgetError::LemmaViolated {
        name: name.clone(),
        detail,
        counterexample,
    };
    let board = t.board().map_err(|source| GadgetError::Board {
        name: name.clone(),
        source,
    })?;
    let system = Problem::max_independent(board.clone(), t.piece).compile();
    let sol = if t.optima.is_some() {
        enumerate_optima(&system, budget)
    } else {
        solve(&system, budget)
    };
    if sol.status != Status::Optimal {
        return Err(GadgetError::Budget {
            name,
            status: sol.status,
        });
    }
    let value = sol.value.unwrap_or(0);
    if value != t.optimum {
        return Err(violated(
            format!("optimum {value}, expected {}", t.optimum),
            sol.witness.clone(),
        ));
    }
    let optima = sol.all_optima.as_ref().map(Vec::len);
    if let (Some(want), Some(got)) = (t.optima, optima) {
        if want != got {
            return Err(violated(format!("{got} optimal placements, expected {want}"), sol.witness.clone()));
        }
    }
    let all: Vec<Placement> = sol.all_optima.clone().unwrap_or_else(|| sol.witness.clone().into_iter().collect());
    for p in &all {
        if let Some(c) = t.fixed.iter().find(|c| !p.cells.contains(&cell(c))) {
            return Err(violated(format!("optimum leaves fixed cell {c:?} empty"), Some(p.clone())));
        }
        if t.exclusive_states {
            for l in &t.literals {
                let on = |cs: &[[i32; 3]]| cs.iter().all(|c| p.cells.contains(&cell(c)));
                if on(&l.t) == on(&l.f) {
                    return Err(violated(format!("optimum puts {} in neither state", l.name), Some(p.clone())));
                }
            }
        }
    }
    let mut scenarios = Vec::new();
    for sc in &t.scenarios {
        let mut sys = system.clone();
        let mut forced = Vec::new();
        for (l, &s) in t.literals.iter().zip(&sc.states) {
            for c in if s { &l.t } else { &l.f } {
                let i = board.index_of_coords(c).ok_or_else(|| violated(format!("state cell {c:?} is off the board"), None))?;
                forced.push(i);
            }
        }
        sys.force(forced);
        let r = if sc.optima.is_some() {
            enumerate_optima(&sys, budget)
        } else {
            solve(&sys, budget)
        };
        if r.status != Status::Optimal {
            return Err(GadgetError::Budget { name, status: r.status });
        }
        let v = r.value.unwrap_or(0);
        let k = r.all_optima.as_ref().map(Vec::len);
        if v != sc.optimum || (sc.optima.is_some() && k != sc.optima) {
            return Err(violated(
                format!(
                    "states {:?}: optimum {v} with {k:?} placements, expected {} with {:?}",
                    sc.states, sc.optimum, sc.optima
                ),
                r.witness,
            ));
        }
        scenarios.push(ScenarioReport {
            states: sc.states.clone(),
            optimum: v,
            optima: k,
        });
    }
    let pair_formula = match t.pairs {
        Some(want) => {
            let got = element_pairs(&board);
            if got != Some(want) {
                return Err(violated(format!("element pairs {got:?}, expected {want:?}"), None));
            }
            let f = 6 * want[0] + 5 * want[1] + 4 * want[2];
            if f != value {
                return Err(violated(format!("pair count gives {f}, optimum is {value}"), None));
            }
            Some(f)
        }
        None => None,
    };
    Ok(GadgetReport {
        name,
        cells: board.len(),
        optimum: value,
        optima,
        scenarios,
        pair_formula,
        millis: started.elapsed().as_millis(),
    })
}

/// Queen elements of a flat board and how many elements touch each one.
pub(crate) fn element_degrees(board: &Board, z: i32) -> Vec<([i32; 2], usize)> {
    let has = |x: i32, y: i32| board.index_of_coords(&[x, y, z]).is_some();
    let centres: BTreeSet<[i32; 2]> = board
        .cells()
        .iter()
        .map(|c| c.coords())
        .filter(|c| c[2] == z)
        .map(|c| [c[0], c[1] + 2])
        .filter(|&[x, y]| !has(x, y) && crate::rook::VAR_CELLS.iter().all(|d| has(x + d[0], y + d[1])))
        .collect();
    centres
        .iter()
        .map(|&[x, y]| {
            let deg = [[4, 0], [-4, 0], [0, 4], [0, -4]]
                .iter()
                .filter(|d| centres.contains(&[x + d[0], y + d[1]]))
                .count();
            ([x, y], deg)
        })
        .collect()
}

/// Pairs of elements with 2, 3 and 4 neighbours; `None` if some count is
/// odd or some element has another degree.
pub(crate) fn element_pairs(board: &Board) -> Option<[usize; 3]> {
    let z = board.bounds()[2].0;
    let mut n = [0usize; 5];
    for (_, d) in element_degrees(board, z) {
        n[d] += 1;
    }
    if n[0] + n[1] > 0 || n[2] % 2 + n[3] % 2 + n[4] % 2 > 0 {
        return None;
    }
    Some([n[2] / 2, n[3] / 2, n[4] / 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_parse_and_are_boards() {
        let all = builtin_templates();
        assert_eq!(all.len(), SOURCES.len());
        for t in &all {
            let b = t.board().unwrap();
            assert_eq!(b.len(), t.cells.len(), "{} has duplicate cells", t.name);
            for l in &t.literals {
                for c in l.t.iter().chain(&l.f) {
                    assert!(b.index_of_coords(c).is_some(), "{}: {c:?}", t.name);
                }
            }
        }
    }

    #[test]
    fn rook_variable_lemma() {
        let r = check_gadget(&template("rook-variable").unwrap(), &Budget::default()).unwrap();
        assert_eq!((r.optimum, r.optima), (6, Some(2)));
    }

    #[test]
    fn queen_literal_lemma() {
        let r = check_gadget(&template("queen-literal").unwrap(), &Budget::default()).unwrap();
        assert_eq!((r.optimum, r.optima), (12, Some(2)));
    }

    #[test]
    fn wrong_expectation_is_reported_with_counterexample() {
        let mut t = template("rook-variable").unwrap();
        t.optimum = 5;
        match check_gadget(&t, &Budget::default()) {
            Err(GadgetError::LemmaViolated { counterexample, .. }) => assert_eq!(counterexample.unwrap().len(), 6),
            other => panic!("{other:?}"),
        }
        let mut t = template("rook-variable").unwrap();
        t.fixed.push([0, 1, 0]);
        assert!(matches!(check_gadget(&t, &Budget::default()), Err(GadgetError::LemmaViolated { .. })));
    }

    #[test]
    fn literal_block_counts_four_corner_elements() {
        let b = template("queen-literal").unwrap().board().unwrap();
        assert_eq!(element_pairs(&b), Some([2, 0, 0]));
        let b = template("queen-connection").unwrap().board().unwrap();
        assert_eq!(element_pairs(&b), Some([3, 2, 1]));
    }
}
