//! Rational homology of the quotient complex relative to its vertex
//! classes. Chain spaces are spanned by oriented cell classes; a cell
//! identified to itself with reversed orientation dies in the rational
//! quotient. Ranks come from exact Gaussian elimination.

use super::quotient::quotient_cells;
use super::IdealTriangulation;
use num_rational::BigRational;
use num_traits::Zero;

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pivot);
        let inv = m[row][col].clone();
        for x in m[row][col..].iter_mut() {
            *x = &*x / &inv;
        }
        let lead = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, l) in other[col..].iter_mut().zip(&lead[col..]) {
                    *x = &*x - &f * l;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Ranks of H0..H3 of the finite chain complex of the quotient relative to
/// its vertex classes (so the degree-0 chain space is zero).
pub fn marked_homology_ranks(tri: &IdealTriangulation) -> (usize, usize, usize, usize) {
    let g = tri.tet_count();
    let q = quotient_cells(tri);

    // surviving edge generators
    let live_edges: Vec<usize> = (0..q.edge_classes.len())
        .filter(|&e| !q.edge_classes[e].orientation_reversing)
        .collect();
    let edge_index: std::collections::HashMap<usize, usize> = live_edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let dim1 = live_edges.len();
    let dim2 = q.face_classes.len();
    let dim3 = g;

    let zero = || BigRational::zero();
    let int = |n: i64| BigRational::from_integer(n.into());

    // d3: faces x tets. Dropping vertex `drop` from the ordering 0123
    // leaves the ascending-label triple of the face opposite `drop`, which
    // is that face slot's canonical instance.
    let mut d3 = vec![vec![zero(); dim3]; dim2];
    #[allow(clippy::needless_range_loop)]
    for tet in 0..g {
        for drop in 0..4 {
            let (class, s) = q.face_class_signed(tet, drop);
            let sgn = if drop % 2 == 0 { 1 } else { -1 };
            d3[class][tet] += int(sgn * s as i64);
        }
    }

    // d2: edges x faces; generator of a face class is its representative
    // slot with ascending labels (a, b, c): boundary (b,c) - (a,c) + (a,b)
    let mut d2 = vec![vec![zero(); dim2]; dim1];
    for (class, fc) in q.face_classes.iter().enumerate() {
        let (t, f) = fc.representative;
        let abc: Vec<usize> = (0..4).filter(|&v| v != f).collect();
        let (a, b, c) = (abc[0], abc[1], abc[2]);
        for (x, y, sgn) in [(b, c, 1i64), (a, c, -1), (a, b, 1)] {
            let (e, s) = q.edge_class_signed(t, x, y);
            if let Some(&row) = edge_index.get(&e) {
                d2[row][class] += int(sgn * s as i64);
            }
        }
    }

    let r3 = rank(d3);
    let r2 = rank(d2);
    // d1 is the zero map: degree-0 chains are killed by the vertex quotient
    let h0 = 0;
    let h1 = dim1 - r2;
    let h2 = dim2 - r2 - r3;
    let h3 = dim3 - r3;
    (h0, h1, h2, h3)
}
