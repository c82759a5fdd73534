//! Dimension-generic cell complexes.
//!
//! A [`CellComplex`] stores simplices or elementary cubes in one dense array,
//! sorted by `(dim, vertices)`, together with the codimension-1 face and
//! coface links. Everything downstream (cost model, solver, multi-flow) only
//! needs dimensions, those links and barycenters, so simplicial and cubical
//! complexes go through the same machinery.

mod subdivision;

pub use subdivision::barycentric_subdivision;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense index of a cell inside its complex.
pub type CellId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Simplex,
    Cube,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: CellId,
    pub dim: usize,
    /// Strictly increasing point indices: the `dim + 1` vertices of a simplex
    /// or the `2^dim` corners of a cube.
    pub vertices: Vec<usize>,
    pub kind: CellKind,
}

/// A pair `(lower, upper)` where `lower` is a codimension-1 face of `upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub lower: CellId,
    pub upper: CellId,
}

/// Cell description handed to [`CellComplex::from_raw_cells`]: its vertex set
/// and the vertex sets of its codimension-1 faces.
#[derive(Clone, Debug)]
pub struct RawCell {
    pub vertices: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("unknown cell id {0}")]
    UnknownCell(CellId),
    #[error("vertex index {vertex} out of range ({points} points)")]
    VertexOutOfRange { vertex: usize, points: usize },
    #[error("cell {vertices:?}: {reason}")]
    MalformedCell { vertices: Vec<usize>, reason: String },
    #[error("face {face:?} of cell {cell:?} is not in the complex")]
    MissingFace { cell: Vec<usize>, face: Vec<usize> },
    #[error("points must all have dimension {expected}, found {found}")]
    PointDimension { expected: usize, found: usize },
    #[error("barycentric subdivision is only defined for simplicial complexes")]
    UnsupportedKind,
    #[error("vector assignment covers {found} cells, complex has {expected}")]
    VectorCount { expected: usize, found: usize },
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    kind: CellKind,
    ambient_dim: usize,
    points: Vec<Vec<f64>>,
    cells: Vec<Cell>,
    faces: Vec<Vec<CellId>>,
    cofaces: Vec<Vec<CellId>>,
    index: HashMap<Vec<usize>, CellId>,
}

impl CellComplex {
    /// Closes `simplices` under taking faces and builds the complex.
    pub fn simplicial<I>(points: Vec<Vec<f64>>, simplices: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if s.len() > 20 {
                return Err(ComplexError::MalformedCell {
                    vertices: s,
                    reason: "simplex dimension too large".into(),
                });
            }
            if all.contains(&s) {
                continue;
            }
            let n = s.len();
            for mask in 1u32..(1u32 << n) {
                let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                all.insert(sub);
            }
        }
        let raws = all
            .into_iter()
            .map(|vertices| {
                let faces = if vertices.len() > 1 {
                    (0..vertices.len())
                        .map(|skip| {
                            vertices
                                .iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                RawCell { vertices, faces }
            })
            .collect();
        Self::from_raw_cells(points, CellKind::Simplex, raws)
    }

    /// Builds a complex from explicit cells. Every listed face must itself be
    /// listed; duplicate vertex sets are merged.
    pub fn from_raw_cells(points: Vec<Vec<f64>>, kind: CellKind, raws: Vec<RawCell>) -> Result<Self, ComplexError> {
        let ambient_dim = points.first().map_or(0, Vec::len);
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(ComplexError::PointDimension {
                expected: ambient_dim,
                found: p.len(),
            });
        }

        let mut by_vertices: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
        for raw in raws {
            let dim = cell_dim(kind, &raw.vertices)?;
            if let Some(&v) = raw.vertices.iter().find(|&&v| v >= points.len()) {
                return Err(ComplexError::VertexOutOfRange {
                    vertex: v,
                    points: points.len(),
                });
            }
            let expected_faces = match kind {
                CellKind::Simplex if dim > 0 => dim + 1,
                CellKind::Cube => 2 * dim,
                _ => 0,
            };
            if raw.faces.len() != expected_faces {
                return Err(ComplexError::MalformedCell {
                    vertices: raw.vertices,
                    reason: format!("expected {expected_faces} faces, got {}", raw.faces.len()),
                });
            }
            by_vertices.entry(raw.vertices).or_insert(raw.faces);
        }

        let mut order: Vec<(usize, Vec<usize>)> = by_vertices
            .keys()
            .map(|v| (cell_dim(kind, v).unwrap_or(0), v.clone()))
            .collect();
        order.sort_unstable();

        let index: HashMap<Vec<usize>, CellId> = order.iter().enumerate().map(|(id, (_, v))| (v.clone(), id)).collect();

        let mut cells = Vec::with_capacity(order.len());
        let mut faces = vec![Vec::new(); order.len()];
        let mut cofaces = vec![Vec::new(); order.len()];
        for (id, (dim, vertices)) in order.into_iter().enumerate() {
            let mut links = Vec::new();
            for face in &by_vertices[&vertices] {
                let mut face = face.clone();
                face.sort_unstable();
                let Some(&fid) = index.get(&face) else {
                    return Err(ComplexError::MissingFace { cell: vertices, face });
                };
                links.push(fid);
            }
            links.sort_unstable();
            links.dedup();
            for &f in &links {
                cofaces[f].push(id);
            }
            faces[id] = links;
            cells.push(Cell {
                id,
                dim,
                vertices,
                kind,
            });
        }
        for list in &mut cofaces {
            list.sort_unstable();
        }

        let complex = Self {
            kind,
            ambient_dim,
            points,
            cells,
            faces,
            cofaces,
            index,
        };
        complex.validate()?;
        Ok(complex)
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell, ComplexError> {
        self.cells.get(id).ok_or(ComplexError::UnknownCell(id))
    }

    pub fn dim_of(&self, id: CellId) -> usize {
        self.cells[id].dim
    }

    /// Top dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.last().map(|c| c.dim)
    }

    /// Looks a cell up by its (unsorted) vertex set.
    pub fn find(&self, vertices: &[usize]) -> Option<CellId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.index.get(&key).copied()
    }

    /// Number of cells in each dimension, index = dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            counts[c.dim] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Codimension-1 faces.
    pub fn facets_of(&self, id: CellId) -> &[CellId] {
        &self.faces[id]
    }

    /// Codimension-1 cofaces.
    pub fn cofacets_of(&self, id: CellId) -> &[CellId] {
        &self.cofaces[id]
    }

    /// All proper faces, of every codimension.
    pub fn faces(&self, id: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        self.cell(id)?;
        Ok(self.reach(id, &self.faces))
    }

    /// All cells having `id` as a proper face.
    pub fn cofaces(&self, id: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        self.cell(id)?;
        Ok(self.reach(id, &self.cofaces))
    }

    pub fn closure(&self, id: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        let mut set = self.faces(id)?;
        set.insert(id);
        Ok(set)
    }

    pub fn boundary(&self, id: CellId) -> Result<BTreeSet<CellId>, ComplexError> {
        self.faces(id)
    }

    fn reach(&self, start: CellId, links: &[Vec<CellId>]) -> BTreeSet<CellId> {
        let mut seen = BTreeSet::new();
        let mut stack = links[start].clone();
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend_from_slice(&links[c]);
            }
        }
        seen
    }

    /// Every `(face, coface)` pair with dimension difference one, sorted by
    /// `(lower, upper)`.
    pub fn admissible_pairs(&self) -> Vec<AdmissiblePair> {
        let mut pairs: Vec<AdmissiblePair> = self
            .cofaces
            .iter()
            .enumerate()
            .flat_map(|(lower, ups)| ups.iter().map(move |&upper| AdmissiblePair { lower, upper }))
            .collect();
        pairs.sort_unstable();
        pairs
    }

    pub fn is_admissible(&self, lower: CellId, upper: CellId) -> bool {
        self.faces.get(upper).is_some_and(|f| f.binary_search(&lower).is_ok())
    }

    /// Arithmetic mean of the vertex coordinates.
    pub fn barycenter(&self, id: CellId) -> Vec<f64> {
        let cell = &self.cells[id];
        let mut b = vec![0.0; self.ambient_dim];
        for &v in &cell.vertices {
            for (acc, x) in b.iter_mut().zip(&self.points[v]) {
                *acc += x;
            }
        }
        let n = cell.vertices.len() as f64;
        b.iter_mut().for_each(|x| *x /= n);
        b
    }

    pub fn barycenters(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|id| self.barycenter(id)).collect()
    }

    /// Checks the structural invariants: sorted vertex sets of the right size,
    /// face links of codimension exactly one, mutual face/coface links.
    /// Closure under faces holds by construction of the links.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for cell in &self.cells {
            if cell_dim(cell.kind, &cell.vertices)? != cell.dim {
                return Err(ComplexError::MalformedCell {
                    vertices: cell.vertices.clone(),
                    reason: "dimension does not match vertex count".into(),
                });
            }
            for &f in &self.faces[cell.id] {
                let face = &self.cells[f];
                if face.dim + 1 != cell.dim {
                    return Err(ComplexError::MalformedCell {
                        vertices: cell.vertices.clone(),
                        reason: format!("face {:?} has wrong dimension", face.vertices),
                    });
                }
                if !face.vertices.iter().all(|v| cell.vertices.binary_search(v).is_ok()) {
                    return Err(ComplexError::MalformedCell {
                        vertices: cell.vertices.clone(),
                        reason: format!("face {:?} is not a subset", face.vertices),
                    });
                }
                if self.cofaces[f].binary_search(&cell.id).is_err() {
                    return Err(ComplexError::MalformedCell {
                        vertices: cell.vertices.clone(),
                        reason: "face link without matching coface link".into(),
                    });
                }
            }
        }
        for (id, ups) in self.cofaces.iter().enumerate() {
            for &u in ups {
                if self.faces[u].binary_search(&id).is_err() {
                    return Err(ComplexError::MalformedCell {
                        vertices: self.cells[id].vertices.clone(),
                        reason: "coface link without matching face link".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn cell_dim(kind: CellKind, vertices: &[usize]) -> Result<usize, ComplexError> {
    let malformed = |reason: &str| ComplexError::MalformedCell {
        vertices: vertices.to_vec(),
        reason: reason.into(),
    };
    if vertices.is_empty() {
        return Err(malformed("empty vertex set"));
    }
    if vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(malformed("vertex ids must be strictly increasing"));
    }
    match kind {
        CellKind::Simplex => Ok(vertices.len() - 1),
        CellKind::Cube if vertices.len().is_power_of_two() => Ok(vertices.len().trailing_zeros() as usize),
        CellKind::Cube => Err(malformed("cube corner count must be a power of two")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> CellComplex {
        CellComplex::simplicial(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]], [vec![0, 1, 2]]).unwrap()
    }

    fn square() -> CellComplex {
        // corners 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1)
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let mut raws: Vec<RawCell> = (0..4)
            .map(|v| RawCell {
                vertices: vec![v],
                faces: vec![],
            })
            .collect();
        for e in [[0, 1], [2, 3], [0, 2], [1, 3]] {
            raws.push(RawCell {
                vertices: e.to_vec(),
                faces: vec![vec![e[0]], vec![e[1]]],
            });
        }
        raws.push(RawCell {
            vertices: vec![0, 1, 2, 3],
            faces: vec![vec![0, 1], vec![2, 3], vec![0, 2], vec![1, 3]],
        });
        CellComplex::from_raw_cells(pts, CellKind::Cube, raws).unwrap()
    }

    #[test]
    fn toy_indexing_follows_dim_then_vertices() {
        let k = toy();
        let verts: Vec<_> = k.cells().iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(
            verts,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn faces_of_vertex_triangle_and_square() {
        let k = toy();
        assert!(k.faces(0).unwrap().is_empty());
        assert_eq!(k.faces(6).unwrap().len(), 6);
        let sq = square();
        let f = sq.faces(8).unwrap();
        assert_eq!(f.len(), 8);
        assert_eq!(f.iter().filter(|&&c| sq.dim_of(c) == 1).count(), 4);
    }

    #[test]
    fn unknown_cell_is_an_error() {
        assert_eq!(toy().faces(99), Err(ComplexError::UnknownCell(99)));
        assert_eq!(toy().cofaces(7), Err(ComplexError::UnknownCell(7)));
    }

    #[test]
    fn cofaces_examples() {
        let k = toy();
        assert!(k.cofaces(6).unwrap().is_empty());
        assert_eq!(k.cofaces(3).unwrap().into_iter().collect::<Vec<_>>(), vec![6]);
        assert_eq!(k.cofaces(0).unwrap().into_iter().collect::<Vec<_>>(), vec![3, 4, 6]);
    }

    #[test]
    fn interior_vertex_of_grid_triangulation_has_six_edges() {
        // 8x8 vertices, every square split along the same diagonal
        let n = 8;
        let pts: Vec<Vec<f64>> = (0..n * n).map(|i| vec![(i % n) as f64, (i / n) as f64]).collect();
        let mut tris = Vec::new();
        for y in 0..n - 1 {
            for x in 0..n - 1 {
                let a = y * n + x;
                tris.push(vec![a, a + 1, a + n + 1]);
                tris.push(vec![a, a + n, a + n + 1]);
            }
        }
        let k = CellComplex::simplicial(pts, tris).unwrap();
        let v = k.find(&[3 * n + 3]).unwrap();
        let edges = k.cofaces(v).unwrap().into_iter().filter(|&c| k.dim_of(c) == 1).count();
        assert_eq!(edges, 6);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn closure_and_boundary() {
        let k = toy();
        assert_eq!(k.closure(0).unwrap().into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(k.boundary(3).unwrap().into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(k.closure(6).unwrap().len(), 7);
    }

    #[test]
    fn admissible_pairs_of_toy_square_and_vertex() {
        let pairs: Vec<(usize, usize)> = toy().admissible_pairs().iter().map(|p| (p.lower, p.upper)).collect();
        assert_eq!(
            pairs,
            vec![(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5), (3, 6), (4, 6), (5, 6)]
        );
        assert_eq!(square().admissible_pairs().len(), 12);
        let single = CellComplex::simplicial(vec![vec![0.0]], [vec![0]]).unwrap();
        assert!(single.admissible_pairs().is_empty());
    }

    #[test]
    fn barycenters() {
        let k = toy();
        assert_eq!(k.barycenter(0), vec![0.0, 0.0]);
        assert_eq!(k.barycenter(3), vec![0.5, 0.5]);
        let b = k.barycenter(6);
        assert!((b[0] - 1.0).abs() < 1e-15 && (b[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn missing_face_is_rejected() {
        let raws = vec![
            RawCell {
                vertices: vec![0],
                faces: vec![],
            },
            RawCell {
                vertices: vec![0, 1],
                faces: vec![vec![0], vec![1]],
            },
        ];
        let err = CellComplex::from_raw_cells(vec![vec![0.0], vec![1.0]], CellKind::Simplex, raws).unwrap_err();
        assert!(matches!(err, ComplexError::MissingFace { .. }));
    }

    #[test]
    fn unsorted_or_bad_cells_are_rejected() {
        let raws = vec![RawCell {
            vertices: vec![0, 1, 2],
            faces: vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0]],
        }];
        let pts = vec![vec![0.0]; 3];
        assert!(CellComplex::from_raw_cells(pts.clone(), CellKind::Cube, raws).is_err());
        let err = CellComplex::simplicial(vec![vec![0.0]], [vec![3]]).unwrap_err();
        assert_eq!(err, ComplexError::VertexOutOfRange { vertex: 3, points: 1 });
    }
}
