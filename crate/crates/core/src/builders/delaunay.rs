//! Incremental Bowyer–Watson triangulation in the plane.
//!
//! The convex hull is closed off with ghost triangles `[a, b, GHOST]` so no
//! bounding super-triangle is needed. In-circle tests use the symbolic
//! perturbation from [`super::predicates`], which fixes one diagonal for every
//! cocircular quadruple (grids are the common case).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use super::predicates::{incircle_perturbed, orient};
use super::BuildError;
use crate::complex::CellComplex;

const GHOST: usize = usize::MAX;

/// Delaunay complex of points in the plane. All points become vertices.
/// Collinear input yields the path of edges along the line.
pub fn delaunay_2d(points: &[Vec<f64>]) -> Result<CellComplex, BuildError> {
    let pts = planar_points(points)?;
    if pts.len() < 3 {
        return Err(BuildError::TooFewPoints {
            needed: 3,
            found: pts.len(),
        });
    }
    let owned: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
    let Some(third) = (2..pts.len()).find(|&i| orient(pts[0], pts[1], pts[i]) != Ordering::Equal) else {
        return Ok(CellComplex::simplicial(owned, collinear_path(&pts))?);
    };
    let triangles = Triangulation::build(&pts, third).real_triangles();
    Ok(CellComplex::simplicial(owned, triangles)?)
}

/// Triangles of the perturbed Delaunay triangulation as sorted vertex triples.
pub fn delaunay_triangles(points: &[Vec<f64>]) -> Result<Vec<[usize; 3]>, BuildError> {
    let pts = planar_points(points)?;
    if pts.len() < 3 {
        return Ok(Vec::new());
    }
    match (2..pts.len()).find(|&i| orient(pts[0], pts[1], pts[i]) != Ordering::Equal) {
        None => Ok(Vec::new()),
        Some(third) => Ok(Triangulation::build(&pts, third)
            .real_triangles()
            .into_iter()
            .map(|t| [t[0], t[1], t[2]])
            .collect()),
    }
}

fn planar_points(points: &[Vec<f64>]) -> Result<Vec<[f64; 2]>, BuildError> {
    let mut out = Vec::with_capacity(points.len());
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if p.len() != 2 {
            return Err(BuildError::Dimension {
                index: i,
                expected: 2,
                found: p.len(),
            });
        }
        if !p.iter().all(|x| x.is_finite()) {
            return Err(BuildError::NonFinite(i));
        }
        // +0.0 and -0.0 must collide
        let key = ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits());
        if let Some(&first) = seen.get(&key) {
            return Err(BuildError::DuplicatePoint { first, second: i });
        }
        seen.insert(key, i);
        out.push([p[0], p[1]]);
    }
    Ok(out)
}

fn collinear_path(pts: &[[f64; 2]]) -> Vec<Vec<usize>> {
    let dir = [pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]];
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| {
        let pa = pts[a][0] * dir[0] + pts[a][1] * dir[1];
        let pb = pts[b][0] * dir[0] + pts[b][1] * dir[1];
        pa.total_cmp(&pb)
    });
    order.windows(2).map(|w| vec![w[0], w[1]]).collect()
}

struct Triangulation<'a> {
    pts: &'a [[f64; 2]],
    /// Counter-clockwise triples; ghosts carry `GHOST` in the last slot.
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    /// Directed edge -> triangle having it as a counter-clockwise edge.
    edges: HashMap<(usize, usize), usize>,
}

impl<'a> Triangulation<'a> {
    fn build(pts: &'a [[f64; 2]], third: usize) -> Self {
        let mut t = Self {
            pts,
            tris: Vec::new(),
            alive: Vec::new(),
            edges: HashMap::new(),
        };
        let (a, b, c) = if orient(pts[0], pts[1], pts[third]) == Ordering::Greater {
            (0, 1, third)
        } else {
            (1, 0, third)
        };
        t.add([a, b, c]);
        t.add([b, a, GHOST]);
        t.add([c, b, GHOST]);
        t.add([a, c, GHOST]);
        for p in (2..pts.len()).filter(|&p| p != third) {
            t.insert(p);
        }
        t
    }

    fn add(&mut self, tri: [usize; 3]) {
        let id = self.tris.len();
        for k in 0..3 {
            self.edges.insert((tri[k], tri[(k + 1) % 3]), id);
        }
        self.tris.push(tri);
        self.alive.push(true);
    }

    fn remove(&mut self, id: usize) {
        let tri = self.tris[id];
        for k in 0..3 {
            let e = (tri[k], tri[(k + 1) % 3]);
            if self.edges.get(&e) == Some(&id) {
                self.edges.remove(&e);
            }
        }
        self.alive[id] = false;
    }

    fn in_conflict(&self, id: usize, p: usize) -> bool {
        let [a, b, c] = self.tris[id];
        let pp = self.pts[p];
        if c == GHOST {
            // outside of the hull edge b -> a, or on the open segment
            match orient(self.pts[a], self.pts[b], pp) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let (pa, pb) = (self.pts[a], self.pts[b]);
                    let t = (pp[0] - pa[0]) * (pb[0] - pa[0]) + (pp[1] - pa[1]) * (pb[1] - pa[1]);
                    let len2 = (pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2);
                    t > 0.0 && t < len2
                }
            }
        } else {
            incircle_perturbed([self.pts[a], self.pts[b], self.pts[c], pp], [a, b, c, p]) == Ordering::Greater
        }
    }

    fn insert(&mut self, p: usize) {
        let start = (0..self.tris.len())
            .find(|&id| self.alive[id] && self.in_conflict(id, p))
            .expect("every new point conflicts with some triangle");

        let mut cavity = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            let tri = self.tris[id];
            for k in 0..3 {
                let twin = (tri[(k + 1) % 3], tri[k]);
                if let Some(&nb) = self.edges.get(&twin) {
                    if !cavity.contains(&nb) && self.in_conflict(nb, p) {
                        cavity.insert(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }

        let mut boundary = Vec::new();
        let mut ids: Vec<usize> = cavity.iter().copied().collect();
        ids.sort_unstable();
        for &id in &ids {
            let tri = self.tris[id];
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                let outside = self.edges.get(&(v, u)).is_none_or(|nb| !cavity.contains(nb));
                if outside {
                    boundary.push((u, v));
                }
            }
        }
        for id in ids {
            self.remove(id);
        }
        for (u, v) in boundary {
            let tri = if u == GHOST {
                [v, p, GHOST]
            } else if v == GHOST {
                [p, u, GHOST]
            } else {
                [u, v, p]
            };
            self.add(tri);
        }
    }

    fn real_triangles(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .tris
            .iter()
            .zip(&self.alive)
            .filter(|(t, &alive)| alive && t[2] != GHOST)
            .map(|(t, _)| {
                let mut v = t.to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort_unstable();
        out
    }
}
