//! Exact backend: minimum-cost perfect matching on a doubled bipartite graph.
//!
//! Cells are 2-coloured by the pair graph (dimension parity for any complex).
//! Both sides of the bipartite graph hold every cell. A pair `{a, b}` with `a`
//! of colour 0 contributes the edge `a → b` at cost `c` and the mirror edge
//! `b → a` at cost 0; every cell `k` has the edge `k → k` at cost `α`. Perfect
//! matchings of this graph are permutations; each one induces a matching of
//! the same cost (pair every colour-0 cell with its image) and every matching
//! arises this way, so the two minima agree.
//!
//! The optimum is found by successive shortest paths with integer potentials.
//! Optimal permutations are exactly the perfect matchings made of tight edges,
//! which gives an exact lexicographic tie-break: walk the cells in order and
//! keep the first option for which a tight perfect matching still exists.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::{Matching, MatchingProblem};

const NONE: usize = usize::MAX;

struct Graph {
    /// `adj[l]` = (right node, cost units).
    adj: Vec<Vec<(usize, i64)>>,
}

pub(super) fn solve(problem: &MatchingProblem) -> Matching {
    let n = problem.num_cells();
    if n == 0 {
        return problem.matching_from_selection(Vec::new());
    }
    let color = two_color(problem);
    let mut adj = vec![Vec::new(); n];
    for (i, v) in problem.variables().iter().enumerate() {
        let c = problem.units()[i];
        if v.is_diagonal() {
            adj[v.lower].push((v.lower, c));
        } else {
            let (a, b) = if color[v.lower] == 0 {
                (v.lower, v.upper)
            } else {
                (v.upper, v.lower)
            };
            adj[a].push((b, c));
            adj[b].push((a, 0));
        }
    }
    let graph = Graph { adj };
    let mut state = State::optimal(&graph);

    let mut covered = vec![false; n];
    let mut selected = Vec::new();
    for k in 0..n {
        if covered[k] {
            continue;
        }
        let mut fixed = false;
        for &var in problem.incidence(k) {
            let v = problem.variables()[var];
            if v.lower != k || covered[v.upper] {
                continue;
            }
            let (l, r) = if v.is_diagonal() || color[v.lower] == 0 {
                (v.lower, v.upper)
            } else {
                (v.upper, v.lower)
            };
            if state.try_fix(&graph, l, r) {
                covered[v.lower] = true;
                covered[v.upper] = true;
                selected.push(var);
                fixed = true;
                break;
            }
        }
        assert!(fixed, "some option of cell {k} lies in an optimal solution");
    }
    problem.matching_from_selection(selected)
}

fn two_color(problem: &MatchingProblem) -> Vec<u8> {
    let n = problem.num_cells();
    let mut nbrs = vec![Vec::new(); n];
    for v in problem.variables().iter().filter(|v| !v.is_diagonal()) {
        nbrs[v.lower].push(v.upper);
        nbrs[v.upper].push(v.lower);
    }
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &nbrs[u] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else {
                    assert_ne!(color[w], color[u], "pair graph must be bipartite");
                }
            }
        }
    }
    color
}

struct State {
    pl: Vec<i64>,
    pr: Vec<i64>,
    match_l: Vec<usize>,
    match_r: Vec<usize>,
    removed_l: Vec<bool>,
    removed_r: Vec<bool>,
    stamp: Vec<u32>,
    epoch: u32,
    parent: Vec<usize>,
}

impl State {
    fn optimal(g: &Graph) -> Self {
        let n = g.adj.len();
        let mut pr = vec![i64::MAX; n];
        for edges in &g.adj {
            for &(r, c) in edges {
                pr[r] = pr[r].min(c);
            }
        }
        let mut s = Self {
            pl: vec![0; n],
            pr,
            match_l: vec![NONE; n],
            match_r: vec![NONE; n],
            removed_l: vec![false; n],
            removed_r: vec![false; n],
            stamp: vec![0; n],
            epoch: 0,
            parent: vec![NONE; n],
        };
        for l in 0..n {
            if let Some(&(r, _)) = g.adj[l]
                .iter()
                .find(|&&(r, c)| s.match_r[r] == NONE && c - s.pr[r] == 0)
            {
                s.match_l[l] = r;
                s.match_r[r] = l;
            }
        }
        for root in 0..n {
            if s.match_l[root] == NONE {
                s.augment_from(g, root);
            }
        }
        s
    }

    /// One Dijkstra phase from a free left node, then augment.
    fn augment_from(&mut self, g: &Graph, root: usize) {
        let n = g.adj.len();
        let mut dist_l = vec![i64::MAX; n];
        let mut dist_r = vec![i64::MAX; n];
        let mut prev_r = vec![NONE; n];
        let mut done_l = Vec::new();
        let mut done_r = Vec::new();
        let mut seen_l = vec![false; n];
        let mut seen_r = vec![false; n];
        // node ids: left l as 2l, right r as 2r+1
        let mut heap = BinaryHeap::new();
        dist_l[root] = 0;
        heap.push(Reverse((0i64, 2 * root)));
        let (target, total) = loop {
            let Reverse((d, node)) = heap.pop().expect("a free right node is always reachable");
            if node % 2 == 0 {
                let l = node / 2;
                if seen_l[l] || d > dist_l[l] {
                    continue;
                }
                seen_l[l] = true;
                done_l.push(l);
                for &(r, c) in &g.adj[l] {
                    if r == self.match_l[l] {
                        continue;
                    }
                    let nd = d + c + self.pl[l] - self.pr[r];
                    if nd < dist_r[r] {
                        dist_r[r] = nd;
                        prev_r[r] = l;
                        heap.push(Reverse((nd, 2 * r + 1)));
                    }
                }
            } else {
                let r = node / 2;
                if seen_r[r] || d > dist_r[r] {
                    continue;
                }
                seen_r[r] = true;
                done_r.push(r);
                let l = self.match_r[r];
                if l == NONE {
                    break (r, d);
                }
                if d < dist_l[l] {
                    dist_l[l] = d;
                    heap.push(Reverse((d, 2 * l)));
                }
            }
        };
        for l in done_l {
            self.pl[l] += dist_l[l] - total;
        }
        for r in done_r {
            self.pr[r] += dist_r[r] - total;
        }
        let mut r = target;
        loop {
            let l = prev_r[r];
            let old = self.match_l[l];
            self.match_l[l] = r;
            self.match_r[r] = l;
            if l == root {
                break;
            }
            r = old;
        }
    }

    fn tight(&self, l: usize, r: usize, c: i64) -> bool {
        c + self.pl[l] - self.pr[r] == 0
    }

    /// Keeps `l → r` in the matching if a tight perfect matching containing it
    /// and every earlier fixed edge exists.
    fn try_fix(&mut self, g: &Graph, l: usize, r: usize) -> bool {
        let Some(&(_, c)) = g.adj[l].iter().find(|&&(rr, _)| rr == r) else {
            return false;
        };
        if !self.tight(l, r, c) {
            return false;
        }
        if self.match_l[l] != r {
            let r0 = self.match_l[l];
            let l0 = self.match_r[r];
            self.match_l[l] = r;
            self.match_r[r] = l;
            self.match_l[l0] = NONE;
            self.match_r[r0] = NONE;
            if !self.alternating_path(g, l0, r0, r) {
                self.match_l[l] = r0;
                self.match_r[r0] = l;
                self.match_l[l0] = r;
                self.match_r[r] = l0;
                return false;
            }
        }
        self.removed_l[l] = true;
        self.removed_r[r] = true;
        true
    }

    /// Augments along a tight alternating path from free `from` to free `to`.
    fn alternating_path(&mut self, g: &Graph, from: usize, to: usize, skip_r: usize) -> bool {
        self.epoch += 1;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &(v, c) in &g.adj[u] {
                if v == skip_r || self.removed_r[v] || self.stamp[v] == self.epoch || !self.tight(u, v, c) {
                    continue;
                }
                self.stamp[v] = self.epoch;
                self.parent[v] = u;
                if v == to {
                    let mut v = to;
                    loop {
                        let u = self.parent[v];
                        let prev = self.match_l[u];
                        self.match_l[u] = v;
                        self.match_r[v] = u;
                        if u == from {
                            return true;
                        }
                        v = prev;
                    }
                }
                let next = self.match_r[v];
                debug_assert!(next != NONE && !self.removed_l[next]);
                queue.push_back(next);
            }
        }
        false
    }
}
