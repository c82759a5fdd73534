//! Random instances and brute-force oracles shared by the integration tests.
//! Nothing here calls into the solver; costs are recomputed from scratch.

#![allow(dead_code)]

use combdyn::builders::cubical_grid;
use combdyn::complex::CellComplex;
use combdyn::vectors::VectorAssignment;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random complex with at most `max_cells` cells: the closure of random
/// edges and triangles on up to 5 planar points, or a few lattice squares.
pub fn random_complex(rng: &mut impl Rng, max_cells: usize) -> CellComplex {
    loop {
        let k = if rng.random_bool(0.2) {
            random_cubical(rng)
        } else {
            random_simplicial(rng)
        };
        if !k.is_empty() && k.len() <= max_cells {
            return k;
        }
    }
}

pub fn random_simplicial(rng: &mut impl Rng) -> CellComplex {
    let nv = rng.random_range(2..=5);
    let points: Vec<Vec<f64>> = (0..nv)
        .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
        .collect();
    let mut tops: Vec<Vec<usize>> = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            if rng.random_bool(0.35) {
                tops.push(vec![a, b]);
            }
            for c in b + 1..nv {
                if rng.random_bool(0.2) {
                    tops.push(vec![a, b, c]);
                }
            }
        }
    }
    // keep isolated vertices too
    tops.extend((0..nv).map(|v| vec![v]));
    CellComplex::simplicial(points, tops).expect("valid simplices")
}

pub fn random_cubical(rng: &mut impl Rng) -> CellComplex {
    let mut lattice: Vec<Vec<f64>> = (0..3)
        .flat_map(|i| (0..2).map(move |j| vec![f64::from(i), f64::from(j)]))
        .collect();
    lattice.shuffle(rng);
    let keep = rng.random_range(2..=lattice.len());
    lattice.truncate(keep);
    cubical_grid(&lattice, 1.0).expect("lattice points")
}

/// Random unit-scale vectors, with an occasional exact zero.
pub fn random_vectors(rng: &mut impl Rng, n: usize, dim: usize) -> VectorAssignment {
    VectorAssignment::new(
        (0..n)
            .map(|_| {
                if rng.random_bool(0.05) {
                    vec![0.0; dim]
                } else {
                    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
                }
            })
            .collect(),
    )
}

pub fn barycenter(k: &CellComplex, id: usize) -> Vec<f64> {
    let c = &k.cells()[id];
    let d = k.ambient_dim();
    let mut b = vec![0.0; d];
    for &v in &c.vertices {
        for (bi, x) in b.iter_mut().zip(&k.points()[v]) {
            *bi += x;
        }
    }
    b.iter().map(|x| x / c.vertices.len() as f64).collect()
}

/// `lower` is a codimension-1 face of `upper`, judged by vertex sets.
pub fn admissible(k: &CellComplex, lower: usize, upper: usize) -> bool {
    let (a, b) = (&k.cells()[lower], &k.cells()[upper]);
    a.dim + 1 == b.dim && a.vertices.iter().all(|v| b.vertices.contains(v))
}

/// Cosine distance between `V(lower)` and the barycenter displacement, with
/// cost 2 for a zero vector.
pub fn oracle_cost(k: &CellComplex, v: &VectorAssignment, lower: usize, upper: usize) -> f64 {
    let a = v.get(lower);
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na < 1e-12 {
        return 2.0;
    }
    let w: Vec<f64> = barycenter(k, upper)
        .iter()
        .zip(barycenter(k, lower))
        .map(|(p, q)| p - q)
        .collect();
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cos = a.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>() / (na * nw);
    (1.0 - cos).clamp(0.0, 2.0)
}

/// Oracle dense matrix: α on the diagonal, the pair cost on admissible
/// entries `(lower, upper)`, `max(2α + 1, 3)` elsewhere.
pub fn oracle_matrix(k: &CellComplex, v: &VectorAssignment, alpha: f64) -> Vec<Vec<f64>> {
    let n = k.len();
    let penalty = (2.0 * alpha + 1.0).max(3.0);
    let mut m = vec![vec![penalty; n]; n];
    for i in 0..n {
        m[i][i] = alpha;
        for j in 0..n {
            if admissible(k, i, j) {
                m[i][j] = oracle_cost(k, v, i, j);
            }
        }
    }
    m
}

/// A matching as `(pairs, critical)`, pairs as `(lower, upper)`.
pub type Arrows = (Vec<(usize, usize)>, Vec<usize>);

/// Every combinatorial dynamical system on `k`.
pub fn all_matchings(k: &CellComplex) -> Vec<Arrows> {
    fn rec(k: &CellComplex, used: &mut Vec<bool>, cur: &mut Arrows, out: &mut Vec<Arrows>) {
        let Some(c) = used.iter().position(|u| !u) else {
            let mut m = cur.clone();
            m.0.sort_unstable();
            m.1.sort_unstable();
            out.push(m);
            return;
        };
        used[c] = true;
        cur.1.push(c);
        rec(k, used, cur, out);
        cur.1.pop();
        for d in 0..k.len() {
            if used[d] {
                continue;
            }
            let pair = if admissible(k, c, d) {
                (c, d)
            } else if admissible(k, d, c) {
                (d, c)
            } else {
                continue;
            };
            used[d] = true;
            cur.0.push(pair);
            rec(k, used, cur, out);
            cur.0.pop();
            used[d] = false;
        }
        used[c] = false;
    }
    let mut out = Vec::new();
    rec(k, &mut vec![false; k.len()], &mut (Vec::new(), Vec::new()), &mut out);
    out
}

pub fn objective(m: &Arrows, matrix: &[Vec<f64>]) -> f64 {
    m.0.iter().map(|&(a, b)| matrix[a][b]).sum::<f64>() + m.1.iter().map(|&c| matrix[c][c]).sum::<f64>()
}

/// Minimum of the dense program over every feasible 0/1 matrix: each cell
/// sits in exactly one selected entry, admissible or not.
pub fn dense_minimum(matrix: &[Vec<f64>]) -> f64 {
    fn rec(m: &[Vec<f64>], used: &mut [bool], acc: f64, best: &mut f64) {
        let Some(i) = used.iter().position(|u| !u) else {
            *best = best.min(acc);
            return;
        };
        used[i] = true;
        rec(m, used, acc + m[i][i], best);
        for j in i + 1..m.len() {
            if !used[j] {
                used[j] = true;
                rec(m, used, acc + m[i][j].min(m[j][i]), best);
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut best = f64::INFINITY;
    rec(matrix, &mut vec![false; matrix.len()], 0.0, &mut best);
    best
}

/// Successor lists of the multi-flow, built from vertex sets alone.
pub fn oracle_flow(k: &CellComplex, m: &Arrows) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut partner = vec![None; n];
    let mut is_upper = vec![false; n];
    for &(a, b) in &m.0 {
        partner[a] = Some(b);
        partner[b] = Some(a);
        is_upper[b] = true;
    }
    let faces = |c: usize| -> Vec<usize> {
        let vs = &k.cells()[c].vertices;
        (0..n)
            .filter(|&f| k.cells()[f].vertices.iter().all(|v| vs.contains(v)))
            .collect()
    };
    (0..n)
        .map(|c| match partner[c] {
            None => faces(c),
            Some(p) if is_upper[c] => faces(c).into_iter().filter(|&f| f != c && f != p).collect(),
            Some(p) => vec![p],
        })
        .collect()
}

/// The flow has a cycle through two or more cells.
pub fn has_long_cycle(succ: &[Vec<usize>]) -> bool {
    // colours: 0 unseen, 1 on stack, 2 done
    fn dfs(v: usize, succ: &[Vec<usize>], colour: &mut [u8]) -> bool {
        colour[v] = 1;
        for &w in &succ[v] {
            if w == v {
                continue;
            }
            if colour[w] == 1 || (colour[w] == 0 && dfs(w, succ, colour)) {
                return true;
            }
        }
        colour[v] = 2;
        false
    }
    let mut colour = vec![0u8; succ.len()];
    (0..succ.len()).any(|v| colour[v] == 0 && dfs(v, succ, &mut colour))
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
