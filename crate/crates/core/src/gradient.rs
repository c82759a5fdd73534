//! Gradient (acyclic) combinatorial dynamical systems.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{AdmissiblePair, CellComplex, CellId};
use crate::cost::{build_cost_model, CostError, CostModel};
use crate::dynamics::tarjan_scc;
use crate::solver::{
    build_problem, solve_branch_and_bound, solve_exact, BranchBoundOptions, Matching, MatchingProblem, SolveError,
};
use crate::vectors::VectorAssignment;

#[derive(Debug, Error, PartialEq)]
pub enum GradientError {
    #[error("alpha grid is empty")]
    EmptyGrid,
    #[error("alpha grid must be descending within [0, 2]; offending value {0}")]
    BadGrid(f64),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// A closed V-path `a0 → b0 → a1 → b1 → … → a0` through matched pairs
/// `(a_i, b_i)`; at most `pairs.len() − 1` of them may be selected together.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleConstraint {
    pub pairs: Vec<AdmissiblePair>,
    pub bound: usize,
}

impl CycleConstraint {
    fn new(pairs: Vec<AdmissiblePair>) -> Self {
        let bound = pairs.len() - 1;
        Self { pairs, bound }
    }

    /// The constraint as variable indices of `problem`.
    pub fn variables(&self, problem: &MatchingProblem) -> Vec<usize> {
        self.pairs
            .iter()
            .map(|p| {
                problem
                    .variable_index(p.lower, p.upper)
                    .expect("cycle pairs are admissible")
            })
            .collect()
    }

    pub fn is_violated_by(&self, matching: &Matching) -> bool {
        self.pairs.iter().all(|p| matching.image_of(p.lower) == Some(p.upper))
    }
}

/// The V-path graph on non-critical cells: a matched lower cell points to its
/// partner, a matched upper cell to its other non-critical facets.
fn vpath_graph(complex: &CellComplex, matching: &Matching) -> Vec<Vec<CellId>> {
    let n = complex.len();
    let mut partner = vec![usize::MAX; n];
    let mut is_upper = vec![false; n];
    for p in &matching.pairs {
        partner[p.lower] = p.upper;
        partner[p.upper] = p.lower;
        is_upper[p.upper] = true;
    }
    (0..n)
        .map(|c| {
            if partner[c] == usize::MAX {
                Vec::new()
            } else if is_upper[c] {
                complex
                    .facets_of(c)
                    .iter()
                    .copied()
                    .filter(|&f| f != partner[c] && partner[f] != usize::MAX)
                    .collect()
            } else {
                vec![partner[c]]
            }
        })
        .collect()
}

/// Every elementary cycle currently present: one shortest cycle (through the
/// smallest cell) per non-trivial strongly connected component of the V-path
/// graph, in component order.
pub fn find_cycles(complex: &CellComplex, matching: &Matching) -> Vec<CycleConstraint> {
    let g = vpath_graph(complex, matching);
    tarjan_scc(&g)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|comp| CycleConstraint::new(shortest_cycle(&g, &comp, matching)))
        .collect()
}

/// `None` when gradient; otherwise one elementary cycle.
pub fn is_gradient(complex: &CellComplex, matching: &Matching) -> (bool, Option<CycleConstraint>) {
    let cycle = find_cycles(complex, matching).into_iter().next();
    (cycle.is_none(), cycle)
}

fn shortest_cycle(g: &[Vec<CellId>], comp: &[CellId], matching: &Matching) -> Vec<AdmissiblePair> {
    // start at the smallest matched lower cell of the component
    let start = *comp
        .iter()
        .find(|&&c| matching.image_of(c).is_some())
        .expect("a cycle contains lower cells");
    let mut inside = vec![false; g.len()];
    for &c in comp {
        inside[c] = true;
    }
    let mut parent = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::from([start]);
    let mut last = usize::MAX;
    'bfs: while let Some(u) = queue.pop_front() {
        for &w in &g[u] {
            if !inside[w] {
                continue;
            }
            if w == start {
                last = u;
                break 'bfs;
            }
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![last];
    while *path.last().unwrap() != start {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    let mut pairs: Vec<AdmissiblePair> = path
        .iter()
        .filter_map(|&c| matching.image_of(c).map(|upper| AdmissiblePair { lower: c, upper }))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// `l / 2` for the smallest pair cost `l`. Below it, every cell is critical
/// at the optimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// Infinite when the complex has no admissible pairs.
    pub value: f64,
    /// Some pair cost is zero, so the threshold is zero.
    pub degenerate: bool,
}

pub fn all_critical_threshold(model: &CostModel) -> Threshold {
    let l = model.pair_costs().iter().copied().fold(f64::INFINITY, f64::min);
    Threshold {
        value: l / 2.0,
        degenerate: l == 0.0,
    }
}

/// The default sweep grid `2.00, 1.99, …, 0.00`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=200).rev().map(|i| f64::from(i) / 100.0).collect()
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub alpha: f64,
    pub matching: Matching,
    /// No grid value gave a gradient optimum; all-critical at the threshold.
    pub fell_back: bool,
    /// Number of grid values solved.
    pub tried: usize,
}

/// The largest grid value whose optimum is gradient.
pub fn alpha_sweep(
    complex: &CellComplex,
    vectors: &VectorAssignment,
    grid: &[f64],
) -> Result<SweepResult, GradientError> {
    if grid.is_empty() {
        return Err(GradientError::EmptyGrid);
    }
    for (i, &a) in grid.iter().enumerate() {
        if !(0.0..=2.0).contains(&a) || (i > 0 && a > grid[i - 1]) {
            return Err(GradientError::BadGrid(a));
        }
    }
    let base = build_cost_model(complex, vectors, grid[0])?;
    for (i, &alpha) in grid.iter().enumerate() {
        let problem = build_problem(&base.with_alpha(alpha)?);
        let m = solve_exact(&problem);
        if is_gradient(complex, &m).0 {
            return Ok(SweepResult {
                alpha,
                matching: m,
                fell_back: false,
                tried: i + 1,
            });
        }
    }
    let t = all_critical_threshold(&base);
    let alpha = t.value.min(2.0);
    let problem = build_problem(&base.with_alpha(alpha)?);
    Ok(SweepResult {
        alpha,
        matching: problem.all_critical(),
        fell_back: true,
        tried: grid.len(),
    })
}

#[derive(Clone, Debug)]
pub struct ConstrainedResult {
    pub matching: Matching,
    /// Constraints in the order they were generated.
    pub constraints: Vec<CycleConstraint>,
    /// Number of solves performed.
    pub rounds: usize,
}

/// Optimum of the program with every cycle forbidden, by lazy generation of
/// cycle constraints.
pub fn solve_gradient_constrained(
    problem: &MatchingProblem,
    complex: &CellComplex,
    node_limit: u64,
) -> Result<ConstrainedResult, GradientError> {
    let mut constraints: Vec<CycleConstraint> = Vec::new();
    let mut matching = solve_exact(problem);
    let mut rounds = 1;
    loop {
        let cycles = find_cycles(complex, &matching);
        if cycles.is_empty() {
            return Ok(ConstrainedResult {
                matching,
                constraints,
                rounds,
            });
        }
        for c in cycles {
            debug_assert!(c.is_violated_by(&matching));
            if !constraints.contains(&c) {
                constraints.push(c);
            }
        }
        let incumbent = break_cycles(problem, complex, &matching);
        let rows: Vec<Vec<usize>> = constraints.iter().map(|c| c.variables(problem)).collect();
        let options = BranchBoundOptions {
            node_limit,
            incumbent: Some(incumbent),
        };
        matching = solve_branch_and_bound(problem, &rows, &options)?;
        rounds += 1;
    }
}

/// A gradient matching obtained by repeatedly unpairing the most expensive
/// pair of some cycle. Dropping pairs never creates a cycle.
fn break_cycles(problem: &MatchingProblem, complex: &CellComplex, matching: &Matching) -> Matching {
    let mut selected = matching.selected.clone();
    let mut current = matching.clone();
    loop {
        let cycles = find_cycles(complex, &current);
        if cycles.is_empty() {
            return current;
        }
        for c in cycles {
            let worst = c
                .variables(problem)
                .into_iter()
                .max_by_key(|&v| (problem.units()[v], v))
                .expect("cycles are non-empty");
            let var = problem.variables()[worst];
            selected.retain(|&s| s != worst);
            selected.push(problem.diagonal(var.lower));
            selected.push(problem.diagonal(var.upper));
        }
        current = problem.matching_from_selection(selected.clone());
    }
}

/// Every elementary cycle that some matching could contain: closed paths
/// `a0 → b0 → a1 → …` with `(a_i, b_i)` admissible, `a_{i+1}` a facet of `b_i`
/// other than `a_i`, and all cells distinct. Exponential; for tiny complexes.
pub fn enumerate_potential_cycles(complex: &CellComplex) -> Vec<Vec<AdmissiblePair>> {
    let mut out = Vec::new();
    for start in 0..complex.len() {
        let mut path = vec![start];
        extend_cycle(complex, start, &mut path, &mut out);
    }
    out
}

fn extend_cycle(complex: &CellComplex, start: CellId, path: &mut Vec<CellId>, out: &mut Vec<Vec<AdmissiblePair>>) {
    let a = *path.last().unwrap();
    for &b in complex.cofacets_of(a) {
        if path.contains(&b) {
            continue;
        }
        for &next in complex.facets_of(b) {
            if next == a {
                continue;
            }
            if next == start {
                let mut cycle: Vec<CellId> = path.clone();
                cycle.push(b);
                out.push(
                    cycle
                        .chunks(2)
                        .map(|w| AdmissiblePair {
                            lower: w[0],
                            upper: w[1],
                        })
                        .collect(),
                );
            } else if next > start && !path.contains(&next) {
                path.push(b);
                path.push(next);
                extend_cycle(complex, start, path, out);
                path.pop();
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectors::assign_vertex_average;

    fn gradient_toy() -> (CellComplex, VectorAssignment) {
        let k = CellComplex::simplicial(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]], [vec![0, 1, 2]]).unwrap();
        let v = assign_vertex_average(&k, &[vec![0.05, 1.0], vec![1.0, 0.0], vec![-1.0, -1.0]]).unwrap();
        (k, v)
    }

    fn solve(k: &CellComplex, v: &VectorAssignment, alpha: f64) -> (MatchingProblem, Matching) {
        let p = build_problem(&build_cost_model(k, v, alpha).unwrap());
        let m = solve_exact(&p);
        (p, m)
    }

    #[test]
    fn toy_cycle_appears_and_disappears() {
        let (k, v) = gradient_toy();
        let (_, m) = solve(&k, &v, 0.15);
        let (grad, cycle) = is_gradient(&k, &m);
        assert!(!grad);
        let cycle = cycle.unwrap();
        assert_eq!(cycle.pairs.len(), 3);
        assert_eq!(cycle.bound, 2);
        let (_, m) = solve(&k, &v, 0.14);
        assert!(is_gradient(&k, &m).0);
    }

    #[test]
    fn sweep_picks_first_gradient_value() {
        let (k, v) = gradient_toy();
        let r = alpha_sweep(&k, &v, &[0.15, 0.14]).unwrap();
        assert_eq!(r.alpha, 0.14);
        assert!(!r.fell_back);
        let r = alpha_sweep(&k, &v, &[0.0]).unwrap();
        assert_eq!(r.matching.critical.len(), 7);
        assert_eq!(alpha_sweep(&k, &v, &[]).unwrap_err(), GradientError::EmptyGrid);
        assert!(matches!(
            alpha_sweep(&k, &v, &[0.1, 0.2]),
            Err(GradientError::BadGrid(_))
        ));
    }

    #[test]
    fn constrained_toy() {
        let (k, v) = gradient_toy();
        let (p, unconstrained) = solve(&k, &v, 0.15);
        let r = solve_gradient_constrained(&p, &k, 1_000_000).unwrap();
        assert!(is_gradient(&k, &r.matching).0);
        assert_eq!(r.constraints.len(), 1);
        assert!(r.matching.objective >= unconstrained.objective);
        assert_eq!(r.matching.critical.len(), 3);
    }

    #[test]
    fn toy_has_two_potential_cycles() {
        let (k, _) = gradient_toy();
        let cycles = enumerate_potential_cycles(&k);
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn threshold_of_toy() {
        let (k, _) = gradient_toy();
        let v = assign_vertex_average(&k, &[vec![0.0, 1.0], vec![1.0, 0.0], vec![-1.0, -1.0]]).unwrap();
        let model = build_cost_model(&k, &v, 0.75).unwrap();
        let t = all_critical_threshold(&model);
        assert!((t.value - (1.0 - 0.5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(!t.degenerate);
        let p = build_problem(&model.with_alpha(t.value * 0.99).unwrap());
        assert_eq!(solve_exact(&p).critical.len(), 7);
    }
}
