//! Exact backend: depth-first branch and bound over the binary program.
//!
//! Branches on the lowest uncovered cell, trying its variables in index
//! order, so the first optimum reached is the lexicographically smallest one.
//! The bound charges each uncovered cell `min(α, min pair cost / 2)`.
//! Optional constraints cap how many variables of a set may be selected,
//! which is how cycle-elimination rows enter.

use super::{Matching, MatchingProblem, SolveError};

#[derive(Clone, Debug)]
pub struct BranchBoundOptions {
    pub node_limit: u64,
    /// A feasible solution to prune against.
    pub incumbent: Option<Matching>,
}

impl Default for BranchBoundOptions {
    fn default() -> Self {
        Self {
            node_limit: 20_000_000,
            incumbent: None,
        }
    }
}

/// A set of variables of which at most `set.len() − 1` may be selected.
pub type Constraint = Vec<usize>;

pub fn solve_branch_and_bound(
    problem: &MatchingProblem,
    constraints: &[Constraint],
    options: &BranchBoundOptions,
) -> Result<Matching, SolveError> {
    let n = problem.num_cells();
    let units = problem.units();
    let mut h = vec![0i64; n];
    for (k, hk) in h.iter_mut().enumerate() {
        let mut best = units[problem.diagonal(k)];
        for &var in problem.incidence(k) {
            if !problem.variables()[var].is_diagonal() {
                best = best.min(units[var] / 2);
            }
        }
        *hk = best;
    }

    let mut var_constraints = vec![Vec::new(); problem.num_variables()];
    for (ci, c) in constraints.iter().enumerate() {
        for &v in c {
            var_constraints[v].push(ci);
        }
    }

    let mut search = Search {
        problem,
        h,
        var_constraints,
        limits: constraints.iter().map(|c| c.len().saturating_sub(1)).collect(),
        counts: vec![0; constraints.len()],
        covered: vec![false; n],
        chosen: Vec::with_capacity(n),
        best: options.incumbent.as_ref().map_or(i64::MAX, |m| m.units),
        best_selection: None,
        nodes: 0,
        node_limit: options.node_limit,
    };
    let remaining: i64 = search.h.iter().sum();
    search.dfs(0, 0, remaining)?;
    let selection = search
        .best_selection
        .or_else(|| options.incumbent.as_ref().map(|m| m.selected.clone()))
        .expect("the all-critical solution satisfies every constraint");
    Ok(problem.matching_from_selection(selection))
}

struct Search<'a> {
    problem: &'a MatchingProblem,
    h: Vec<i64>,
    var_constraints: Vec<Vec<usize>>,
    limits: Vec<usize>,
    counts: Vec<usize>,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    best: i64,
    best_selection: Option<Vec<usize>>,
    nodes: u64,
    node_limit: u64,
}

impl Search<'_> {
    fn pruned(&self, bound: i64) -> bool {
        // before the first solution the incumbent bound is only an upper bound,
        // and an equal-cost solution earlier in the order must still be found
        if self.best_selection.is_some() {
            bound >= self.best
        } else {
            bound > self.best
        }
    }

    fn dfs(&mut self, from: usize, committed: i64, remaining: i64) -> Result<(), SolveError> {
        let Some(k) = (from..self.covered.len()).find(|&k| !self.covered[k]) else {
            self.best = committed;
            self.best_selection = Some(self.chosen.clone());
            return Ok(());
        };
        let problem = self.problem;
        for &var in problem.incidence(k) {
            let v = problem.variables()[var];
            if v.lower != k || self.covered[v.upper] {
                continue;
            }
            let c = committed + problem.units()[var];
            let r = if v.is_diagonal() {
                remaining - self.h[k]
            } else {
                remaining - self.h[k] - self.h[v.upper]
            };
            if self.pruned(c + r) {
                continue;
            }
            if self.var_constraints[var]
                .iter()
                .any(|&ci| self.counts[ci] >= self.limits[ci])
            {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(SolveError::NodeLimit(self.node_limit));
            }
            for &ci in &self.var_constraints[var] {
                self.counts[ci] += 1;
            }
            self.covered[v.lower] = true;
            self.covered[v.upper] = true;
            self.chosen.push(var);

            let result = self.dfs(k + 1, c, r);

            self.chosen.pop();
            self.covered[v.lower] = false;
            self.covered[v.upper] = false;
            for &ci in &self.var_constraints[var] {
                self.counts[ci] -= 1;
            }
            result?;
        }
        Ok(())
    }
}
