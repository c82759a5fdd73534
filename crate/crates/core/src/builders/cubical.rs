//! Axis-aligned cubical complexes on a lattice of pitch `side`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{check_points, BuildError};
use crate::complex::{CellComplex, CellKind, RawCell};

type Lattice = Vec<i64>;

/// Cubical complex whose vertices are the given points. Every elementary
/// cube with all of its corners among the points is included, with faces.
/// Point `i` is vertex `i` of the result.
pub fn cubical_grid(points: &[Vec<f64>], side: f64) -> Result<CellComplex, BuildError> {
    let dim = check_dims(points, side)?;
    let origin = axis_minima(points, dim);

    let mut off = Vec::new();
    let mut lattice: HashMap<Lattice, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let mut q = Vec::with_capacity(dim);
        for a in 0..dim {
            let t = (p[a] - origin[a]) / side;
            if (t - t.round()).abs() > 1e-9 {
                off.push(i);
                break;
            }
            q.push(t.round() as i64);
        }
        if q.len() < dim {
            continue;
        }
        if let Some(&first) = lattice.get(&q) {
            return Err(BuildError::DuplicatePoint { first, second: i });
        }
        lattice.insert(q, i);
    }
    if !off.is_empty() {
        return Err(BuildError::OffLattice(off));
    }

    let mut raws: BTreeMap<Vec<usize>, RawCell> = BTreeMap::new();
    for anchor in lattice.keys() {
        for axes in 0u32..(1 << dim) {
            let free: Vec<usize> = (0..dim).filter(|a| axes & (1 << a) != 0).collect();
            if let Some(raw) = cube_cell(&lattice, anchor, &free) {
                raws.entry(raw.vertices.clone()).or_insert(raw);
            }
        }
    }
    Ok(CellComplex::from_raw_cells(
        points.to_vec(),
        CellKind::Cube,
        raws.into_values().collect(),
    )?)
}

/// A cubical cover of scattered points: every voxel of pitch `side` (aligned
/// at the coordinate minima) that contains a point, with all its faces.
#[derive(Clone, Debug)]
pub struct VoxelCover {
    pub complex: CellComplex,
    /// For each cell, the input points lying in a voxel that has the cell as
    /// a face (sorted).
    pub witnesses: Vec<Vec<usize>>,
}

pub fn voxel_cover(points: &[Vec<f64>], side: f64) -> Result<VoxelCover, BuildError> {
    if points.is_empty() {
        return Err(BuildError::TooFewPoints { needed: 1, found: 0 });
    }
    let dim = check_dims(points, side)?;
    let origin = axis_minima(points, dim);

    let mut voxels: BTreeMap<Lattice, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        let v: Lattice = (0..dim).map(|a| ((p[a] - origin[a]) / side).floor() as i64).collect();
        voxels.entry(v).or_default().push(i);
    }

    let mut corners: BTreeSet<Lattice> = BTreeSet::new();
    for v in voxels.keys() {
        for mask in 0u32..(1 << dim) {
            corners.insert(offset(v, mask));
        }
    }
    let lattice: HashMap<Lattice, usize> = corners.iter().cloned().zip(0..).collect();
    let coords: Vec<Vec<f64>> = corners
        .iter()
        .map(|q| (0..dim).map(|a| origin[a] + q[a] as f64 * side).collect())
        .collect();

    let mut raws: BTreeMap<Vec<usize>, RawCell> = BTreeMap::new();
    let all_axes: Vec<usize> = (0..dim).collect();
    for v in voxels.keys() {
        for mask in 0u32..(1 << dim) {
            let anchor = offset(v, mask);
            // faces of the voxel anchored at `anchor` move only along axes not in `mask`
            for sub in 0u32..(1 << dim) {
                if sub & mask != 0 {
                    continue;
                }
                let free: Vec<usize> = all_axes.iter().copied().filter(|a| sub & (1 << a) != 0).collect();
                let raw = cube_cell(&lattice, &anchor, &free).expect("voxel corners are present");
                raws.entry(raw.vertices.clone()).or_insert(raw);
            }
        }
    }
    let complex = CellComplex::from_raw_cells(coords, CellKind::Cube, raws.into_values().collect())?;

    let mut witnesses: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); complex.len()];
    for (v, members) in &voxels {
        let verts: Vec<usize> = {
            let mut c: Vec<usize> = (0u32..(1 << dim)).map(|m| lattice[&offset(v, m)]).collect();
            c.sort_unstable();
            c
        };
        let id = complex.find(&verts).expect("voxel is a cell");
        for face in complex.closure(id)? {
            witnesses[face].extend(members.iter().copied());
        }
    }
    Ok(VoxelCover {
        complex,
        witnesses: witnesses.into_iter().map(|w| w.into_iter().collect()).collect(),
    })
}

fn check_dims(points: &[Vec<f64>], side: f64) -> Result<usize, BuildError> {
    if !(side.is_finite() && side > 0.0) {
        return Err(BuildError::InvalidSide(side));
    }
    let dim = check_points(points)?;
    if !(1..=3).contains(&dim) {
        return Err(BuildError::UnsupportedDimension(dim));
    }
    Ok(dim)
}

fn axis_minima(points: &[Vec<f64>], dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|a| points.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min))
        .collect()
}

fn offset(v: &[i64], mask: u32) -> Lattice {
    v.iter()
        .enumerate()
        .map(|(a, &x)| x + i64::from(mask & (1 << a) != 0))
        .collect()
}

/// The elementary cube at `anchor` spanning `free` axes, if all corners exist.
fn cube_cell(lattice: &HashMap<Lattice, usize>, anchor: &[i64], free: &[usize]) -> Option<RawCell> {
    let corner_ids = |anchor: &[i64], free: &[usize]| -> Option<Vec<usize>> {
        let mut ids = Vec::with_capacity(1 << free.len());
        for mask in 0u32..(1 << free.len()) {
            let mut q = anchor.to_vec();
            for (k, &a) in free.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    q[a] += 1;
                }
            }
            ids.push(*lattice.get(&q)?);
        }
        ids.sort_unstable();
        Some(ids)
    };
    let vertices = corner_ids(anchor, free)?;
    let mut faces = Vec::with_capacity(2 * free.len());
    for (k, &a) in free.iter().enumerate() {
        let rest: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &b)| b)
            .collect();
        faces.push(corner_ids(anchor, &rest)?);
        let mut far = anchor.to_vec();
        far[a] += 1;
        faces.push(corner_ids(&far, &rest)?);
    }
    Some(RawCell { vertices, faces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, dim: usize, side: f64, offset: f64) -> Vec<Vec<f64>> {
        let total = n.pow(dim as u32);
        (0..total)
            .map(|mut i| {
                (0..dim)
                    .map(|_| {
                        let c = i % n;
                        i /= n;
                        offset + side * c as f64
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn one_square_and_one_cube() {
        let k = cubical_grid(&grid(2, 2, 1.0, 0.0), 1.0).unwrap();
        assert_eq!(k.counts_by_dim(), vec![4, 4, 1]);
        let k = cubical_grid(&grid(2, 3, 0.5, 3.0), 0.5).unwrap();
        assert_eq!(k.counts_by_dim(), vec![8, 12, 6, 1]);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn full_grid_counts() {
        for n in 2..6 {
            let k = cubical_grid(&grid(n, 2, 0.44, -3.3), 0.44).unwrap();
            assert_eq!(k.counts_by_dim(), vec![n * n, 2 * n * (n - 1), (n - 1) * (n - 1)]);
        }
    }

    #[test]
    fn missing_corner_drops_square() {
        let mut pts = grid(3, 2, 1.0, 0.0);
        pts.remove(8);
        let k = cubical_grid(&pts, 1.0).unwrap();
        assert_eq!(k.counts_by_dim(), vec![8, 10, 3]);
    }

    #[test]
    fn off_lattice_points_are_listed() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 1.0], vec![1.0, 1.3]];
        assert_eq!(cubical_grid(&pts, 1.0).unwrap_err(), BuildError::OffLattice(vec![2, 3]));
        assert_eq!(cubical_grid(&pts, -1.0).unwrap_err(), BuildError::InvalidSide(-1.0));
    }

    #[test]
    fn voxel_cover_of_two_points() {
        let pts = vec![vec![0.1, 0.1], vec![1.5, 0.2]];
        let cover = voxel_cover(&pts, 1.0).unwrap();
        // two voxels sharing an edge
        assert_eq!(cover.complex.counts_by_dim(), vec![6, 7, 2]);
        let shared = cover
            .complex
            .cells()
            .iter()
            .filter(|c| c.dim == 1 && cover.witnesses[c.id].len() == 2)
            .count();
        assert_eq!(shared, 1);
        assert!(cover.witnesses.iter().all(|w| !w.is_empty()));
    }
}
