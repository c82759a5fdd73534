//! The multi-flow of a matching and its recurrent structure.

use serde::Serialize;

use crate::complex::{CellComplex, CellId};
use crate::solver::{verify_matching, Matching, Violation};

/// Which branch of the multi-flow a cell takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowRole {
    /// Maps to its closure.
    Critical,
    /// Image of a matched pair; maps to its boundary minus its partner.
    Upper,
    /// Source of a matched pair; maps to its partner only.
    Lower,
}

#[derive(Clone, Debug)]
pub struct FlowGraph {
    roles: Vec<FlowRole>,
    succ: Vec<Vec<CellId>>,
}

pub fn multiflow(complex: &CellComplex, matching: &Matching) -> Result<FlowGraph, Vec<Violation>> {
    verify_matching(complex, matching)?;
    let n = complex.len();
    let mut roles = vec![FlowRole::Critical; n];
    let mut partner = vec![usize::MAX; n];
    for p in &matching.pairs {
        roles[p.lower] = FlowRole::Lower;
        roles[p.upper] = FlowRole::Upper;
        partner[p.lower] = p.upper;
        partner[p.upper] = p.lower;
    }
    let succ = (0..n)
        .map(|id| match roles[id] {
            FlowRole::Critical => complex.closure(id).expect("valid cell").into_iter().collect(),
            FlowRole::Upper => complex
                .boundary(id)
                .expect("valid cell")
                .into_iter()
                .filter(|&f| f != partner[id])
                .collect(),
            FlowRole::Lower => vec![partner[id]],
        })
        .collect();
    Ok(FlowGraph { roles, succ })
}

impl FlowGraph {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn role(&self, cell: CellId) -> FlowRole {
        self.roles[cell]
    }

    /// Sorted successors of `cell` under the multi-flow.
    pub fn successors(&self, cell: CellId) -> &[CellId] {
        &self.succ[cell]
    }

    pub fn num_arcs(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// Strongly connected components of a digraph given by successor lists,
/// each sorted, ordered by smallest member.
pub fn tarjan_scc(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // explicit call stack of (node, next successor position)
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = calls.last() {
            if let Some(&w) = succ[v].get(pos) {
                calls.last_mut().expect("non-empty").1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("component members are on the stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// All strongly connected components of the flow graph.
pub fn strongly_connected_components(flow: &FlowGraph) -> Vec<Vec<CellId>> {
    tarjan_scc(&flow.succ)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SccReport {
    /// Position in the report (components ordered by smallest cell).
    pub id: usize,
    pub size: usize,
    /// Smallest cell dimension present; the `d` of a d-cycle.
    pub d: usize,
    /// Distinct dimensions present, ascending.
    pub dims: Vec<usize>,
    /// Cells with more than one successor inside the component.
    pub self_intersections: usize,
    /// A single critical cell (recurrent through its self-loop).
    pub critical_singleton: bool,
    /// A multi-cell component that is one simple closed path.
    pub elementary: bool,
    pub cells: Vec<CellId>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleReport {
    /// Recurrent components only: multi-cell ones and critical singletons.
    pub sccs: Vec<SccReport>,
    /// Number of critical cells of each dimension.
    pub census: Vec<usize>,
}

impl CycleReport {
    pub fn multi_cell(&self) -> impl Iterator<Item = &SccReport> {
        self.sccs.iter().filter(|s| s.size > 1)
    }
}

pub fn classify_recurrence(complex: &CellComplex, flow: &FlowGraph, matching: &Matching) -> CycleReport {
    let comps = strongly_connected_components(flow);
    let mut member = vec![usize::MAX; flow.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            member[v] = i;
        }
    }
    let mut sccs = Vec::new();
    for (i, cells) in comps.iter().enumerate() {
        let singleton_critical = cells.len() == 1 && flow.role(cells[0]) == FlowRole::Critical;
        if cells.len() == 1 && !singleton_critical {
            continue;
        }
        let mut dims: Vec<usize> = cells.iter().map(|&c| complex.dim_of(c)).collect();
        dims.sort_unstable();
        dims.dedup();
        let inside = |v: CellId| flow.successors(v).iter().filter(|&&w| member[w] == i).count();
        let self_intersections = if cells.len() > 1 {
            cells.iter().filter(|&&v| inside(v) > 1).count()
        } else {
            0
        };
        sccs.push(SccReport {
            id: sccs.len(),
            size: cells.len(),
            d: dims[0],
            dims,
            self_intersections,
            critical_singleton: singleton_critical,
            elementary: cells.len() > 1 && self_intersections == 0,
            cells: cells.clone(),
        });
    }
    let top = complex.dim().unwrap_or(0);
    let mut census = vec![0; top + 1];
    for &c in &matching.critical {
        census[complex.dim_of(c)] += 1;
    }
    CycleReport { sccs, census }
}

/// Multi-flow plus recurrence report.
pub fn analyze(complex: &CellComplex, matching: &Matching) -> Result<(FlowGraph, CycleReport), Vec<Violation>> {
    let flow = multiflow(complex, matching)?;
    let report = classify_recurrence(complex, &flow, matching);
    Ok((flow, report))
}
