use super::{CellComplex, CellId, CellKind, ComplexError};
use crate::vectors::VectorAssignment;

/// Barycentric subdivision with vector inheritance.
///
/// Vertex `i` of the result is the barycenter of cell `i` of the input, so
/// original vertices keep their position. Simplices of the result are flags
/// `σ0 < σ1 < … < σk` of input cells; each inherits the vector of its largest
/// element, the unique input cell whose interior contains it.
pub fn barycentric_subdivision(
    complex: &CellComplex,
    vectors: &VectorAssignment,
) -> Result<(CellComplex, VectorAssignment), ComplexError> {
    if complex.kind() != CellKind::Simplex {
        return Err(ComplexError::UnsupportedKind);
    }
    if vectors.len() != complex.len() {
        return Err(ComplexError::VectorCount {
            expected: complex.len(),
            found: vectors.len(),
        });
    }

    let points = complex.barycenters();
    let mut flags = Vec::new();
    for cell in complex.cells() {
        if complex.cofacets_of(cell.id).is_empty() {
            let mut chain = vec![cell.id];
            collect_flags(complex, &mut chain, &mut flags);
        }
    }

    let refined = CellComplex::simplicial(points, flags)?;
    // the largest element of a flag has the highest dimension, hence the largest id
    let inherited = refined
        .cells()
        .iter()
        .map(|c| {
            let carrier = *c.vertices.iter().max().expect("cells are non-empty");
            vectors.get(carrier).to_vec()
        })
        .collect();
    Ok((refined, VectorAssignment::new(inherited)))
}

/// Extends `chain` (ordered top-down) by codimension-1 faces until it reaches
/// a vertex, pushing each complete flag.
fn collect_flags(complex: &CellComplex, chain: &mut Vec<CellId>, out: &mut Vec<Vec<CellId>>) {
    let last = *chain.last().unwrap();
    let facets = complex.facets_of(last);
    if facets.is_empty() {
        out.push(chain.clone());
        return;
    }
    for &f in facets {
        chain.push(f);
        collect_flags(complex, chain, out);
        chain.pop();
    }
}
