//! Minkowski-space linear algebra and the Klein (projective) model.
//!
//! Points of hyperbolic 3-space live on the hyperboloid `<x,x> = -1, x0 > 0`
//! in R^4 with the signature (-,+,+,+) product; hyperideal points lift to the
//! de Sitter quadric `<x,x> = +1` and carry a dual plane that truncates any
//! simplex they span. Everything here is expressed in the affine chart
//! `x0 = 1`, i.e. the open unit ball together with its exterior.

use crate::la::{self, Vec3};
use thiserror::Error;

/// Rejection band around the unit sphere: points with `||p| - 1| <= EPS_IDEAL`
/// are neither finite nor hyperideal and are refused. Ideal vertices and
/// tangent truncation planes would produce infinite volumes and zero
/// denominators in the lifts.
pub const EPS_IDEAL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum HyperlinError {
    #[error("point at distance {norm} from the origin lies in the ideal rejection band")]
    IdealPoint { norm: f64 },
    #[error("operation requires a hyperideal point")]
    NotHyperideal,
    #[error("edge endpoints coincide")]
    DegenerateEdge,
    #[error("dual truncation planes of the endpoints intersect (or are tangent)")]
    IntersectingTruncationPlanes,
    #[error("segment between the hyperideal endpoints misses the unit ball")]
    SegmentMissesBall,
}

/// A point of R^4 with the signature (-,+,+,+) scalar product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiVector {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkowskiVector {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub fn spatial(&self) -> Vec3 {
        [self.x1, self.x2, self.x3]
    }
}

/// Minkowski scalar product `-u0 v0 + u1 v1 + u2 v2 + u3 v3`.
pub fn mink_dot(u: &MinkowskiVector, v: &MinkowskiVector) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Finite,
    Hyperideal,
}

/// A classified point of the affine chart: strictly inside the unit ball
/// (`Finite`) or strictly outside (`Hyperideal`). Construction rejects the
/// band `||p| - 1| <= EPS_IDEAL`, so a `KleinPoint` always lifts cleanly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinPoint {
    p: Vec3,
    kind: VertexKind,
}

impl KleinPoint {
    pub fn new(p: Vec3) -> Result<Self, HyperlinError> {
        let n = la::norm(p);
        if (n - 1.0).abs() <= EPS_IDEAL {
            return Err(HyperlinError::IdealPoint { norm: n });
        }
        let kind = if n < 1.0 {
            VertexKind::Finite
        } else {
            VertexKind::Hyperideal
        };
        Ok(Self { p, kind })
    }

    pub fn coords(&self) -> Vec3 {
        self.p
    }

    pub fn kind(&self) -> VertexKind {
        self.kind
    }

    pub fn is_hyperideal(&self) -> bool {
        self.kind == VertexKind::Hyperideal
    }
}

/// Lift a classified chart point to the hyperboloid (finite: `<v,v> = -1`)
/// or to the de Sitter quadric (hyperideal: `<v,v> = +1`), with `x0 > 0`.
pub fn lift(p: &KleinPoint) -> MinkowskiVector {
    let q = la::norm2(p.p);
    let s = match p.kind {
        VertexKind::Finite => (1.0 - q).sqrt(),
        VertexKind::Hyperideal => (q - 1.0).sqrt(),
    };
    MinkowskiVector::new(1.0 / s, p.p[0] / s, p.p[1] / s, p.p[2] / s)
}

/// Closed half-space `{x : normal . x <= offset}` of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace3 {
    pub normal: Vec3,
    pub offset: f64,
}

impl HalfSpace3 {
    /// Signed slack `normal . x - offset`; non-positive inside.
    pub fn eval(&self, x: Vec3) -> f64 {
        la::dot(self.normal, x) - self.offset
    }

    pub fn contains(&self, x: Vec3, tol: f64) -> bool {
        self.eval(x) <= tol
    }
}

/// Chart trace of the dual half-space of a hyperideal point: `{x : x . p <= 1}`.
/// Always contains the origin.
pub fn dual_halfspace(p: &KleinPoint) -> Result<HalfSpace3, HyperlinError> {
    if !p.is_hyperideal() {
        return Err(HyperlinError::NotHyperideal);
    }
    Ok(HalfSpace3 {
        normal: p.p,
        offset: 1.0,
    })
}

/// Does the open segment (a, b) meet the open unit ball? The squared distance
/// to the origin is quadratic in the segment parameter, so the minimum is
/// solved in closed form.
pub fn segment_meets_ball(a: Vec3, b: Vec3) -> bool {
    la::segment_min_norm2(a, b) < (1.0 - EPS_IDEAL) * (1.0 - EPS_IDEAL)
}

/// Hyperbolic length attached to the pair (a, b):
///
/// * finite-finite: the distance, `cosh d = -<a^, b^>`;
/// * finite-hyperideal: the distance from the finite point to the dual plane
///   of the hyperideal one, `sinh d = |<a^, b^>|`;
/// * hyperideal-hyperideal: the length of the common perpendicular of the two
///   dual planes, i.e. of the internal edge left after truncation,
///   `cosh d = |<a^, b^>|`.
pub fn edge_length(a: &KleinPoint, b: &KleinPoint) -> Result<f64, HyperlinError> {
    if a.p == b.p {
        return Err(HyperlinError::DegenerateEdge);
    }
    let prod = mink_dot(&lift(a), &lift(b));
    match (a.kind, b.kind) {
        (VertexKind::Finite, VertexKind::Finite) => Ok((-prod).acosh()),
        (VertexKind::Hyperideal, VertexKind::Hyperideal) => {
            if prod.abs() <= 1.0 {
                return Err(HyperlinError::IntersectingTruncationPlanes);
            }
            if !segment_meets_ball(a.p, b.p) {
                return Err(HyperlinError::SegmentMissesBall);
            }
            Ok(prod.abs().acosh())
        }
        _ => Ok(prod.abs().asinh()),
    }
}
