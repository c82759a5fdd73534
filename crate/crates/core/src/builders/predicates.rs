//! Exact orientation and in-circle tests with a symbolic perturbation for
//! cocircular inputs.
//!
//! Each point `i` is lifted to `|p_i|^2 + ε_i` with `ε_0 ≫ ε_1 ≫ …`. The lifted
//! determinant is linear in every lifted coordinate, so when the exact test
//! returns zero the sign is that of the first non-vanishing cofactor taken in
//! point-index order. Every predicate call sees the same lifting, which makes
//! the resulting triangulation unique (a regular triangulation for generic
//! infinitesimal weights).

use std::cmp::Ordering;

use robust::Coord;

fn coord(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

/// Sign of the orientation of `(a, b, c)`: positive for counter-clockwise.
pub fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Ordering {
    sign(robust::orient2d(coord(a), coord(b), coord(c)))
}

/// Exact in-circle test: positive iff `d` is strictly inside the circle
/// through the counter-clockwise triangle `(a, b, c)`.
pub fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> Ordering {
    sign(robust::incircle(coord(a), coord(b), coord(c), coord(d)))
}

/// In-circle test under the symbolic lifting perturbation. `ids` are the
/// global point indices of `a, b, c, d`; they must be distinct.
pub fn incircle_perturbed(pts: [[f64; 2]; 4], ids: [usize; 4]) -> Ordering {
    let exact = incircle(pts[0], pts[1], pts[2], pts[3]);
    if exact != Ordering::Equal {
        return exact;
    }
    let mut rows = [0usize, 1, 2, 3];
    rows.sort_by_key(|&r| ids[r]);
    for r in rows {
        let others: Vec<[f64; 2]> = (0..4).filter(|&j| j != r).map(|j| pts[j]).collect();
        // d det / d z_r = (-1)^r * orient(remaining rows in order)
        let o = orient(others[0], others[1], others[2]);
        if o != Ordering::Equal {
            return if r % 2 == 0 { o } else { o.reverse() };
        }
    }
    Ordering::Equal
}

fn sign(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incircle_sign_convention() {
        let (a, b, c) = ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]);
        assert_eq!(orient(a, b, c), Ordering::Greater);
        assert_eq!(incircle(a, b, c, [0.25, 0.25]), Ordering::Greater);
        assert_eq!(incircle(a, b, c, [3.0, 3.0]), Ordering::Less);
        assert_eq!(incircle(a, b, c, [1.0, 1.0]), Ordering::Equal);
    }

    #[test]
    fn perturbation_matches_a_small_explicit_lift() {
        // Unit square corners are cocircular. Compare the symbolic answer with
        // an explicit lift z_i = |p|^2 + eps^(i+1) for a small eps.
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let eps: f64 = 1e-3;
        let lifted = |i: usize| {
            let p = sq[i];
            [p[0], p[1], p[0] * p[0] + p[1] * p[1] + eps.powi(i as i32 + 1)]
        };
        let det4 = |r: [usize; 4]| {
            let m: Vec<[f64; 4]> = r
                .iter()
                .map(|&i| {
                    let l = lifted(i);
                    [l[0], l[1], l[2], 1.0]
                })
                .collect();
            det4(&m)
        };
        for perm in [[0, 1, 2, 3], [1, 2, 3, 0], [0, 1, 3, 2], [2, 3, 0, 1], [0, 2, 3, 1]] {
            let pts = [sq[perm[0]], sq[perm[1]], sq[perm[2]], sq[perm[3]]];
            if orient(pts[0], pts[1], pts[2]) != Ordering::Greater {
                continue;
            }
            let numeric = sign(det4(perm));
            assert_eq!(incircle_perturbed(pts, perm), numeric, "perm {perm:?}");
        }
    }

    fn det4(m: &[[f64; 4]]) -> f64 {
        let mut total = 0.0;
        for col in 0..4 {
            let minor: Vec<[f64; 3]> = (1..4)
                .map(|r| {
                    let mut row = [0.0; 3];
                    let mut k = 0;
                    for c in 0..4 {
                        if c != col {
                            row[k] = m[r][c];
                            k += 1;
                        }
                    }
                    row
                })
                .collect();
            let d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
                - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
                + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
            let s = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += s * m[0][col] * d3;
        }
        total
    }
}
