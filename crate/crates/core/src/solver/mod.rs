//! The reduced binary program: choose, for every cell, exactly one variable
//! among its diagonal (stay critical) and its admissible pairs.
//!
//! Costs are optimised as integers (`round(c · 2^40)`) so that optimality and
//! tie-breaking are exact; objectives are reported in floating point.

mod assignment;
mod branch_bound;
mod verify;

pub use branch_bound::{solve_branch_and_bound, BranchBoundOptions};
pub use verify::{
    objective_decomposition, repair, verify_arrows, verify_matching, Decomposition, RepairError, Violation,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{AdmissiblePair, CellId};
use crate::cost::CostModel;

/// Scale of the integer cost representation.
pub const COST_SCALE: f64 = (1u64 << 40) as f64;

pub fn quantize(c: f64) -> i64 {
    (c * COST_SCALE).round() as i64
}

/// One binary variable: a diagonal when `lower == upper`, otherwise an
/// admissible pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub lower: CellId,
    pub upper: CellId,
}

impl Variable {
    pub fn is_diagonal(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Clone, Debug)]
pub struct MatchingProblem {
    num_cells: usize,
    alpha: f64,
    /// Sorted by `(lower, upper)`, so each cell's diagonal precedes its pairs.
    variables: Vec<Variable>,
    costs: Vec<f64>,
    units: Vec<i64>,
    /// Variables touching each cell.
    incidence: Vec<Vec<usize>>,
    /// Index of each cell's diagonal variable.
    diagonal: Vec<usize>,
}

/// One variable per admissible pair plus one diagonal per cell.
pub fn build_problem(model: &CostModel) -> MatchingProblem {
    let n = model.num_cells();
    let mut vars: Vec<(Variable, f64)> = (0..n)
        .map(|k| (Variable { lower: k, upper: k }, model.alpha()))
        .chain(model.pairs().iter().zip(model.pair_costs()).map(|(p, &c)| {
            (
                Variable {
                    lower: p.lower,
                    upper: p.upper,
                },
                c,
            )
        }))
        .collect();
    vars.sort_by_key(|(v, _)| *v);

    let mut incidence = vec![Vec::new(); n];
    let mut diagonal = vec![0; n];
    for (i, (v, _)) in vars.iter().enumerate() {
        incidence[v.lower].push(i);
        if v.is_diagonal() {
            diagonal[v.lower] = i;
        } else {
            incidence[v.upper].push(i);
        }
    }
    MatchingProblem {
        num_cells: n,
        alpha: model.alpha(),
        costs: vars.iter().map(|(_, c)| *c).collect(),
        units: vars.iter().map(|(_, c)| quantize(*c)).collect(),
        variables: vars.into_iter().map(|(v, _)| v).collect(),
        incidence,
        diagonal,
    }
}

impl MatchingProblem {
    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn units(&self) -> &[i64] {
        &self.units
    }

    pub fn incidence(&self, cell: CellId) -> &[usize] {
        &self.incidence[cell]
    }

    pub fn diagonal(&self, cell: CellId) -> usize {
        self.diagonal[cell]
    }

    pub fn variable_index(&self, lower: CellId, upper: CellId) -> Option<usize> {
        self.variables.binary_search(&Variable { lower, upper }).ok()
    }

    /// The matching given by a set of selected variables (one per cell).
    pub fn matching_from_selection(&self, mut selected: Vec<usize>) -> Matching {
        selected.sort_unstable();
        let mut pairs = Vec::new();
        let mut critical = Vec::new();
        let mut objective = 0.0;
        let mut units = 0i64;
        for &i in &selected {
            let v = self.variables[i];
            objective += self.costs[i];
            units += self.units[i];
            if v.is_diagonal() {
                critical.push(v.lower);
            } else {
                pairs.push(AdmissiblePair {
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        Matching {
            pairs,
            critical,
            objective,
            units,
            selected,
        }
    }

    /// Every cell critical; always feasible.
    pub fn all_critical(&self) -> Matching {
        self.matching_from_selection(self.diagonal.clone())
    }
}

/// A combinatorial dynamical system: matched pairs `lower → upper` and the
/// critical cells (fixed points).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matching {
    /// Sorted by lower cell.
    pub pairs: Vec<AdmissiblePair>,
    /// Sorted.
    pub critical: Vec<CellId>,
    pub objective: f64,
    #[serde(skip)]
    pub units: i64,
    /// Selected variable indices, ascending.
    #[serde(skip)]
    pub selected: Vec<usize>,
}

impl Matching {
    /// All arrows of the map, critical cells as self-arrows.
    pub fn arrows(&self) -> Vec<(CellId, CellId)> {
        let mut out: Vec<(CellId, CellId)> = self
            .pairs
            .iter()
            .map(|p| (p.lower, p.upper))
            .chain(self.critical.iter().map(|&c| (c, c)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `V(lower)` for matched lower cells.
    pub fn image_of(&self, lower: CellId) -> Option<CellId> {
        self.pairs
            .binary_search_by_key(&lower, |p| p.lower)
            .ok()
            .map(|i| self.pairs[i].upper)
    }

    pub fn is_critical(&self, cell: CellId) -> bool {
        self.critical.binary_search(&cell).is_ok()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Minimum-cost perfect matching on the parity-doubled bipartite graph.
    #[default]
    Assignment,
    /// Depth-first branch and bound over the binary program.
    BranchAndBound,
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("branch and bound exceeded {0} nodes")]
    NodeLimit(u64),
}

/// A global minimiser. Among optima, the one whose ascending list of selected
/// variable indices is lexicographically smallest.
pub fn solve_exact(problem: &MatchingProblem) -> Matching {
    assignment::solve(problem)
}

pub fn solve_with(problem: &MatchingProblem, backend: Backend) -> Result<Matching, SolveError> {
    match backend {
        Backend::Assignment => Ok(assignment::solve(problem)),
        Backend::BranchAndBound => solve_branch_and_bound(problem, &[], &BranchBoundOptions::default()),
    }
}
