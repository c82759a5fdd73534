//! Per-cell vectors built from per-point samples.

use thiserror::Error;

use crate::complex::{CellComplex, CellId};

/// Norm below which a cell vector counts as the zero vector.
pub const ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum VectorError {
    #[error("no data vector for vertex {0}")]
    MissingVertex(usize),
    #[error("no data vector for witness point {0}")]
    MissingWitness(usize),
    #[error("cell {0} has an empty witness set")]
    EmptyWitnessSet(CellId),
    #[error("witness map covers {found} cells, complex has {expected}")]
    WitnessCount { expected: usize, found: usize },
    #[error("data vector {index} has dimension {found}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// The map `V`: one vector per cell, indexed by cell id.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorAssignment {
    vectors: Vec<Vec<f64>>,
}

impl VectorAssignment {
    pub fn new(vectors: Vec<Vec<f64>>) -> Self {
        Self { vectors }
    }

    pub fn get(&self, id: CellId) -> &[f64] {
        &self.vectors[id]
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn as_slice(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn is_zero(&self, id: CellId) -> bool {
        norm(&self.vectors[id]) < ZERO_TOLERANCE
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn mean<'a>(dim: usize, vectors: impl Iterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    let mut n = 0usize;
    for v in vectors {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
        n += 1;
    }
    acc.iter_mut().for_each(|a| *a /= n as f64);
    acc
}

/// `V(σ)` = mean of the data vectors at the vertices (or cube corners) of σ.
/// `data[i]` is the vector sampled at point `i` of the complex.
pub fn assign_vertex_average(complex: &CellComplex, data: &[Vec<f64>]) -> Result<VectorAssignment, VectorError> {
    let dim = complex.ambient_dim();
    for cell in complex.cells().iter().filter(|c| c.dim == 0) {
        let v = cell.vertices[0];
        let vec = data.get(v).ok_or(VectorError::MissingVertex(v))?;
        if vec.len() != dim {
            return Err(VectorError::Dimension {
                index: v,
                expected: dim,
                found: vec.len(),
            });
        }
    }
    let vectors = complex
        .cells()
        .iter()
        .map(|c| mean(dim, c.vertices.iter().map(|&v| data[v].as_slice())))
        .collect();
    Ok(VectorAssignment { vectors })
}

/// `V(σ)` = mean of the data vectors of the witnesses `w(σ)`.
pub fn assign_dowker_average(
    complex: &CellComplex,
    witnesses: &[Vec<usize>],
    data: &[Vec<f64>],
) -> Result<VectorAssignment, VectorError> {
    if witnesses.len() != complex.len() {
        return Err(VectorError::WitnessCount {
            expected: complex.len(),
            found: witnesses.len(),
        });
    }
    let dim = data.first().map_or(complex.ambient_dim(), Vec::len);
    let mut vectors = Vec::with_capacity(complex.len());
    for (id, w) in witnesses.iter().enumerate() {
        if w.is_empty() {
            return Err(VectorError::EmptyWitnessSet(id));
        }
        for &x in w {
            let vec = data.get(x).ok_or(VectorError::MissingWitness(x))?;
            if vec.len() != dim {
                return Err(VectorError::Dimension {
                    index: x,
                    expected: dim,
                    found: vec.len(),
                });
            }
        }
        vectors.push(mean(dim, w.iter().map(|&x| data[x].as_slice())));
    }
    Ok(VectorAssignment { vectors })
}
