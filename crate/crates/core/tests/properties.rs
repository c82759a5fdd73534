mod common;

use combdyn::builders::{cubical_grid, delaunay_2d, dowker_complex, DowkerRelation};
use combdyn::complex::{barycentric_subdivision, CellComplex};
use combdyn::cost::build_cost_model;
use combdyn::gradient::all_critical_threshold;
use combdyn::solver::{build_problem, objective_decomposition, repair, solve_exact, verify_matching};
use combdyn::vectors::{assign_vertex_average, VectorAssignment};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn planar_points(max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..max).prop_map(|v| {
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for (x, y) in v {
            if !pts.iter().any(|p| p[0] == x && p[1] == y) {
                pts.push(vec![x, y]);
            }
        }
        pts
    })
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn hull_area(points: &[Vec<f64>]) -> f64 {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut hull: Vec<Vec<f64>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec<f64>>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for q in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q.clone());
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

fn in_circle(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let row = |p: &[f64]| {
        let (x, y) = (p[0] - d[0], p[1] - d[1]);
        [x, y, x * x + y * y]
    };
    let (r0, r1, r2) = (row(a), row(b), row(c));
    let det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
    det * cross(a, b, c).signum()
}

fn rotate(p: &[f64], t: f64) -> Vec<f64> {
    vec![p[0] * t.cos() - p[1] * t.sin(), p[0] * t.sin() + p[1] * t.cos()]
}

fn random_field(seed: u64, n: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut r = rng(seed);
    let pts = (0..n)
        .map(|_| vec![r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)])
        .collect();
    let vs = (0..n)
        .map(|_| vec![r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)])
        .collect();
    (pts, vs)
}

fn solve_field(points: &[Vec<f64>], data: &[Vec<f64>], alpha: f64) -> (CellComplex, combdyn::solver::Matching) {
    let k = delaunay_2d(points).unwrap();
    let v = assign_vertex_average(&k, data).unwrap();
    let m = solve_exact(&build_problem(&build_cost_model(&k, &v, alpha).unwrap()));
    (k, m)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delaunay_is_empty_circle_and_covers_the_hull(points in planar_points(30)) {
        let k = delaunay_2d(&points).unwrap();
        prop_assert!(k.validate().is_ok());
        let tris: Vec<&Vec<usize>> = k.cells().iter().filter(|c| c.dim == 2).map(|c| &c.vertices).collect();
        let scale = 400.0;
        for t in &tris {
            let (a, b, c) = (&points[t[0]], &points[t[1]], &points[t[2]]);
            for (i, d) in points.iter().enumerate() {
                if !t.contains(&i) {
                    prop_assert!(in_circle(a, b, c, d) <= 1e-9 * scale * scale, "point {} inside {:?}", i, t);
                }
            }
        }
        let area: f64 = tris.iter().map(|t| cross(&points[t[0]], &points[t[1]], &points[t[2]]).abs() / 2.0).sum();
        prop_assert!((area - hull_area(&points)).abs() <= 1e-9 * scale);
        if !tris.is_empty() {
            prop_assert_eq!(k.euler_characteristic(), 1);
        }
        // every edge borders one or two triangles
        for e in k.cells().iter().filter(|c| c.dim == 1) {
            prop_assert!(tris.is_empty() || (1..=2).contains(&k.cofacets_of(e.id).len()));
        }
    }

    #[test]
    fn rotation_leaves_the_optimum_unchanged(seed in any::<u64>(), n in 4usize..20, t in 0.0..std::f64::consts::TAU, alpha in 0.0..2.0f64) {
        let (pts, vs) = random_field(seed, n);
        let (k, m) = solve_field(&pts, &vs, alpha);
        let rp: Vec<Vec<f64>> = pts.iter().map(|p| rotate(p, t)).collect();
        let rv: Vec<Vec<f64>> = vs.iter().map(|p| rotate(p, t)).collect();
        let (rk, rm) = solve_field(&rp, &rv, alpha);
        prop_assert_eq!(k.len(), rk.len());
        prop_assert!((m.objective - rm.objective).abs() < 1e-9, "{} vs {}", m.objective, rm.objective);
    }

    #[test]
    fn scaling_the_vectors_leaves_the_optimum_unchanged(seed in any::<u64>(), n in 4usize..20, s in 0.01..100.0f64) {
        let (pts, vs) = random_field(seed, n);
        let (_, m) = solve_field(&pts, &vs, 0.8);
        let scaled: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().map(|x| x * s).collect()).collect();
        let (_, sm) = solve_field(&pts, &scaled, 0.8);
        prop_assert!((m.objective - sm.objective).abs() < 1e-9);
    }

    #[test]
    fn solver_output_is_a_dynamical_system_and_decomposes(seed in any::<u64>(), n in 3usize..25, alpha in 0.0..=2.0f64) {
        let (pts, vs) = random_field(seed, n);
        let k = delaunay_2d(&pts).unwrap();
        let v = assign_vertex_average(&k, &vs).unwrap();
        let model = build_cost_model(&k, &v, alpha).unwrap();
        let m = solve_exact(&build_problem(&model));
        prop_assert!(verify_matching(&k, &m).is_ok());
        let d = objective_decomposition(&m, &model);
        prop_assert_eq!(d.matched, m.pairs.len());
        prop_assert_eq!(d.critical, m.critical.len());
        prop_assert_eq!(2 * d.matched + d.critical, k.len());
        let direct: f64 = m.pairs.iter().map(|p| model.entry(p.lower, p.upper)).sum::<f64>()
            + m.critical.len() as f64 * alpha;
        prop_assert!((d.total() - direct).abs() < 1e-9);
        prop_assert!((m.objective - direct).abs() < 1e-9);
    }

    #[test]
    fn critical_count_falls_as_alpha_grows(seed in any::<u64>(), n in 3usize..15, a in 0.0..=2.0f64, b in 0.0..=2.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (pts, vs) = random_field(seed, n);
        let (_, m_lo) = solve_field(&pts, &vs, lo);
        let (_, m_hi) = solve_field(&pts, &vs, hi);
        prop_assert!(m_hi.critical.len() <= m_lo.critical.len());
        prop_assert!(m_hi.objective >= m_lo.objective - 1e-9);
    }

    #[test]
    fn below_the_threshold_everything_is_critical(seed in any::<u64>(), frac in 0.0..1.0f64) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, 12);
        let v = random_vectors(&mut r, k.len(), 2);
        let model = build_cost_model(&k, &v, 1.0).unwrap();
        let t = all_critical_threshold(&model);
        prop_assume!(!t.degenerate && t.value.is_finite());
        let alpha = (t.value * frac).min(2.0);
        let m = solve_exact(&build_problem(&model.with_alpha(alpha).unwrap()));
        prop_assert_eq!(m.critical.len(), k.len());
    }

    #[test]
    fn repair_removes_every_inadmissible_entry(seed in any::<u64>(), alpha in 0.0..=2.0f64) {
        let mut r = rng(seed);
        let k = random_complex(&mut r, 12);
        let v = random_vectors(&mut r, k.len(), 2);
        let model = build_cost_model(&k, &v, alpha).unwrap();
        let matrix = oracle_matrix(&k, &v, alpha);
        // a random feasible assignment: random pairing of a shuffled order
        let mut order: Vec<usize> = (0..k.len()).collect();
        order.shuffle(&mut r);
        let mut selected = Vec::new();
        let mut i = 0;
        while i < order.len() {
            if i + 1 < order.len() && r.random_bool(0.7) {
                selected.push((order[i], order[i + 1]));
                i += 2;
            } else {
                selected.push((order[i], order[i]));
                i += 1;
            }
        }
        let bad = selected.iter().filter(|&&(a, b)| a != b && !admissible(&k, a, b)).count();
        let before: f64 = selected.iter().map(|&(a, b)| matrix[a][b]).sum();
        let fixed = repair(&k, &model, &selected).unwrap();
        prop_assert!(verify_matching(&k, &fixed).is_ok());
        let after = fixed.objective;
        let step = (2.0 * alpha + 1.0).max(3.0) - 2.0 * alpha;
        prop_assert!(before - after >= bad as f64 * step - 1e-9);
        if bad > 0 {
            prop_assert!(after < before);
        }
    }

    #[test]
    fn dowker_matches_brute_force(seed in any::<u64>(), nl in 1usize..6, nd in 1usize..15, radius in 0.2..3.0f64) {
        let mut r = rng(seed);
        let mut gen = |n: usize| -> Vec<Vec<f64>> {
            (0..n).map(|_| vec![r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)]).collect()
        };
        let landmarks = gen(nl);
        let data = gen(nd);
        let d = dowker_complex(&DowkerRelation { data: data.clone(), landmarks: landmarks.clone(), radius }).unwrap();
        let near = |y: &Vec<f64>, x: &Vec<f64>| (y[0] - x[0]).hypot(y[1] - x[1]) < radius;
        let mut expected: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for mask in 1u32..(1 << nl) {
            let s: Vec<usize> = (0..nl).filter(|&j| mask & (1 << j) != 0).collect();
            let w: Vec<usize> = (0..nd).filter(|&i| s.iter().all(|&j| near(&landmarks[j], &data[i]))).collect();
            if !w.is_empty() {
                expected.push((s, w));
            }
        }
        expected.sort();
        let mut got: Vec<(Vec<usize>, Vec<usize>)> = d
            .complex
            .cells()
            .iter()
            .map(|c| (c.vertices.clone(), d.witnesses[c.id].clone()))
            .collect();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn subdivision_keeps_euler_characteristic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = random_simplicial(&mut r);
        let v = random_vectors(&mut r, k.len(), 2);
        let (s, sv) = barycentric_subdivision(&k, &v).unwrap();
        prop_assert!(s.validate().is_ok());
        prop_assert_eq!(s.euler_characteristic(), k.euler_characteristic());
        let top = k.dim().unwrap();
        prop_assert_eq!(s.dim(), Some(top));
        // every cell of dimension d splits into (d+1)! cells
        let counts = k.counts_by_dim();
        let sub = s.counts_by_dim();
        prop_assert_eq!(sub[top], counts[top] * factorial(top + 1));
        prop_assert_eq!(s.len(), (0..k.len()).map(|c| flags_below(&k, c)).sum::<usize>());
        prop_assert_eq!(sv.len(), s.len());
        // new vertices inherit the vector of the cell they are the barycenter of
        for c in s.cells().iter().filter(|c| c.dim == 0) {
            let p = &s.points()[c.vertices[0]];
            let origin = (0..k.len()).find(|&o| barycenter(&k, o) == *p).unwrap();
            prop_assert_eq!(sv.get(c.id), v.get(origin));
        }
    }

    #[test]
    fn cubical_grid_counts(a in 1usize..6, b in 1usize..6, side in 0.1..3.0f64) {
        let pts: Vec<Vec<f64>> = (0..=a)
            .flat_map(|i| (0..=b).map(move |j| vec![i as f64 * side, j as f64 * side]))
            .collect();
        let k = cubical_grid(&pts, side).unwrap();
        prop_assert_eq!(k.counts_by_dim(), vec![(a + 1) * (b + 1), a * (b + 1) + b * (a + 1), a * b]);
        prop_assert_eq!(k.euler_characteristic(), 1);
        let v = VectorAssignment::new(vec![vec![1.0, 0.5]; k.len()]);
        let m = solve_exact(&build_problem(&build_cost_model(&k, &v, 1.0).unwrap()));
        prop_assert!(verify_matching(&k, &m).is_ok());
    }
}

/// Chains `c0 < c1 < … < c` ending at `c`: the cells of the subdivision
/// whose largest element is `c`.
fn flags_below(k: &CellComplex, c: usize) -> usize {
    1 + k
        .boundary(c)
        .unwrap()
        .into_iter()
        .map(|f| flags_below(k, f))
        .sum::<usize>()
}
