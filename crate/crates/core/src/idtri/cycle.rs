//! The alternated ideal fundamental cycle and its verification: formal
//! rational combinations of (tetrahedron, vertex ordering) pairs, boundary
//! cancellation under the gluings, and local degrees.

use super::{all_orderings, perm_sign, IdealTriangulation, IdtriError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// One affine simplex with a chosen vertex ordering: standard-simplex vertex
/// `i` is sent to the tetrahedron vertex labeled `ordering[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleTerm {
    pub tet: usize,
    pub ordering: [usize; 4],
    pub coeff: BigRational,
}

/// A formal rational combination of ordered tetrahedra.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedCycle {
    pub terms: Vec<CycleTerm>,
}

impl MarkedCycle {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Combine duplicate (tetrahedron, ordering) pairs and drop zeros.
    pub fn reduced(&self) -> Vec<((usize, [usize; 4]), BigRational)> {
        let mut acc: HashMap<(usize, [usize; 4]), BigRational> = HashMap::new();
        for t in &self.terms {
            *acc.entry((t.tet, t.ordering)).or_insert_with(BigRational::zero) += t.coeff.clone();
        }
        let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by_key(|a| a.0);
        out
    }

    /// Sum of the absolute coefficients of the distinct terms.
    pub fn l1_norm(&self) -> BigRational {
        self.reduced()
            .into_iter()
            .map(|(_, c)| c.abs())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn scaled(&self, k: &BigRational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| CycleTerm {
                    tet: t.tet,
                    ordering: t.ordering,
                    coeff: &t.coeff * k,
                })
                .collect(),
        }
    }

    /// Drop every term of one tetrahedron.
    pub fn without_tet(&self, tet: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| t.tet != tet)
                .cloned()
                .collect(),
        }
    }
}

/// The alternation of the tautological chain: `z = (1/24) sum_j s_j
/// sum_orderings sign(ordering) (tet j, ordering)`, where `s_j` are the
/// orientation signs. Its l1-norm is exactly the tetrahedron count.
pub fn alternated_fundamental_cycle(
    tri: &IdealTriangulation,
) -> Result<MarkedCycle, IdtriError> {
    let signs = tri.orientation_signs().ok_or(IdtriError::NotOrientable)?;
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(24));
    let mut terms = Vec::with_capacity(24 * tri.tet_count());
    for (tet, &s) in signs.iter().enumerate() {
        for ordering in all_orderings() {
            let eps = perm_sign(&ordering) * s as i64;
            terms.push(CycleTerm {
                tet,
                ordering,
                coeff: &quarter * BigRational::from_integer(eps.into()),
            });
        }
    }
    Ok(MarkedCycle { terms })
}

/// Check that the formal boundary of `z` cancels under the gluings. Each
/// boundary triangle is routed through the face pairing to the
/// lexicographically smaller slot before matching; all accumulated
/// coefficients must vanish exactly. Faces of the complex always span a
/// genuine 2-cell, so no boundary term is ever supported in the vertex set
/// (the marked quotient discards such terms in general).
pub fn verify_marked_cycle(tri: &IdealTriangulation, z: &MarkedCycle) -> bool {
    let mut acc: HashMap<((usize, usize), [usize; 3]), BigRational> = HashMap::new();
    for ((tet, ordering), coeff) in z.reduced() {
        for drop in 0..4 {
            let mut tri_ord = [0usize; 3];
            let mut k = 0;
            for (i, &v) in ordering.iter().enumerate() {
                if i != drop {
                    tri_ord[k] = v;
                    k += 1;
                }
            }
            // the carrier face is opposite the one missing label
            let face = 6 - tri_ord.iter().sum::<usize>();
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            let gl = tri.gluing(tet, face);
            let (slot, ord) = if (gl.tet, gl.face) < (tet, face) {
                (
                    (gl.tet, gl.face),
                    [gl.perm[tri_ord[0]], gl.perm[tri_ord[1]], gl.perm[tri_ord[2]]],
                )
            } else {
                ((tet, face), tri_ord)
            };
            *acc.entry((slot, ord)).or_insert_with(BigRational::zero) +=
                &coeff * BigRational::from_integer(sign.into());
        }
    }
    acc.values().all(|c| c.is_zero())
}

/// Per-tetrahedron local degree of a marked chain: the signed sum of
/// coefficients weighted by the ordering signs, read in the tetrahedron's
/// global orientation. An ideal fundamental cycle has all degrees 1.
pub fn local_degrees(tri: &IdealTriangulation, z: &MarkedCycle) -> Vec<BigRational> {
    let signs = tri
        .orientation_signs()
        .unwrap_or_else(|| vec![1; tri.tet_count()]);
    let mut out = vec![BigRational::zero(); tri.tet_count()];
    for ((tet, ordering), coeff) in z.reduced() {
        let eps = perm_sign(&ordering) * signs[tet] as i64;
        out[tet] += coeff * BigRational::from_integer(eps.into());
    }
    out
}
