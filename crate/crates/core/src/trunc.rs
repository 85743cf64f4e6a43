//! (Partially) truncated tetrahedra in the Klein ball: validation, the
//! truncated convex body, hyperbolic volume by quadrature, the signed
//! `algvol` cochain value, and the regular family parametrized by edge
//! length or dihedral angle.

use crate::hyperlin::{
    dual_halfspace, segment_meets_ball, HalfSpace3, HyperlinError, KleinPoint,
};
use crate::la::{self, Vec3};
use crate::specfun::{self, SpecfunError};
use std::f64::consts::PI;
use thiserror::Error;

/// Coplanarity threshold on the affine determinant of the four vertices;
/// configurations below it are degenerate and have `algvol = 0`.
pub const COPLANAR_EPS: f64 = 1e-12;

/// Tolerance for vertex enumeration and facet incidence in the chart.
const GEOM_EPS: f64 = 1e-9;

/// Subdivision budget for the volume quadrature, counted in evaluated cells.
const CELL_BUDGET: i64 = 200_000;

#[derive(Debug, Error, PartialEq)]
pub enum TruncError {
    #[error("configuration is not a valid truncated tetrahedron: {0:?}")]
    InvalidConfig(Validity),
    #[error("two enumerated polytope vertices coincide within {GEOM_EPS}")]
    NumericallyDegenerate,
    #[error("polytope touches the unit sphere")]
    TouchesSphere,
    #[error("argument outside the regular-family domain")]
    OutOfDomain,
    #[error(transparent)]
    Quadrature(#[from] SpecfunError),
    #[error(transparent)]
    Point(#[from] HyperlinError),
}

/// Four labeled Klein-model vertices; the seed of a partially truncated
/// tetrahedron. The hyperideal subset is derived from the vertex kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncTetConfig {
    v: [KleinPoint; 4],
}

impl TruncTetConfig {
    pub fn new(v: [KleinPoint; 4]) -> Self {
        Self { v }
    }

    pub fn vertices(&self) -> &[KleinPoint; 4] {
        &self.v
    }

    pub fn vertex(&self, i: usize) -> &KleinPoint {
        &self.v[i]
    }

    /// Indices of the hyperideal vertices.
    pub fn hyperideal_set(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.v[i].is_hyperideal()).collect()
    }

    pub fn coords(&self) -> [Vec3; 4] {
        [
            self.v[0].coords(),
            self.v[1].coords(),
            self.v[2].coords(),
            self.v[3].coords(),
        ]
    }

    /// The six internal edge lengths, in pair order (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    pub fn edge_lengths(&self) -> Result<[f64; 6], HyperlinError> {
        let mut out = [0.0; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                out[k] = crate::hyperlin::edge_length(&self.v[i], &self.v[j])?;
                k += 1;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    /// The four vertices are affinely dependent.
    Degenerate,
    /// A defining condition fails: 1 = some open edge segment misses the open
    /// unit ball, 2 = some finite vertex escapes the dual half-space of a
    /// hyperideal one. `pair` names the offending vertices.
    Invalid { condition: u8, pair: (usize, usize) },
}

/// Check the defining conditions of a (partially) truncated tetrahedron.
/// Never fails; inadmissible inputs come back as `Degenerate` or `Invalid`.
pub fn validate(cfg: &TruncTetConfig) -> Validity {
    let p = cfg.coords();
    if la::affine_det(p).abs() < COPLANAR_EPS {
        return Validity::Degenerate;
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if !segment_meets_ball(p[i], p[j]) {
                return Validity::Invalid {
                    condition: 1,
                    pair: (i, j),
                };
            }
        }
    }
    for i in 0..4 {
        if !cfg.v[i].is_hyperideal() {
            continue;
        }
        for j in 0..4 {
            if j == i || cfg.v[j].is_hyperideal() {
                continue;
            }
            if la::dot(p[j], p[i]) > 1.0 + 1e-12 {
                return Validity::Invalid {
                    condition: 2,
                    pair: (i, j),
                };
            }
        }
    }
    Validity::Valid
}

/// One facet of the truncated body: its supporting half-space (unit outward
/// normal) and the incident vertices in cyclic order, counterclockwise seen
/// from outside.
#[derive(Debug, Clone)]
pub struct Facet {
    pub halfspace: HalfSpace3,
    pub cycle: Vec<usize>,
}

/// Vertices and facets of the truncated body inside the unit ball.
#[derive(Debug, Clone)]
pub struct ConvexPolytope3 {
    pub vertices: Vec<Vec3>,
    pub facets: Vec<Facet>,
}

impl ConvexPolytope3 {
    /// (V, E, F) counts; E is derived from the facet cycles.
    pub fn counts(&self) -> (usize, usize, usize) {
        let e: usize = self.facets.iter().map(|f| f.cycle.len()).sum();
        (self.vertices.len(), e / 2, self.facets.len())
    }

    pub fn euler_holds(&self) -> bool {
        let (v, e, f) = self.counts();
        v + f == e + 2
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| la::norm(*v))
            .fold(0.0, f64::max)
    }

    pub fn vertex_centroid(&self) -> Vec3 {
        let mut c = [0.0; 3];
        for v in &self.vertices {
            c = la::add(c, *v);
        }
        la::scale(c, 1.0 / self.vertices.len() as f64)
    }
}

fn unit_halfspace(normal: Vec3, offset: f64) -> HalfSpace3 {
    let n = la::norm(normal);
    HalfSpace3 {
        normal: la::scale(normal, 1.0 / n),
        offset: offset / n,
    }
}

/// Intersect the Euclidean simplex spanned by the vertices with the dual
/// half-spaces of the hyperideal ones. Vertices are enumerated by solving
/// all plane triples and filtering; the truncation facets land in the dual
/// planes of their hyperideal vertices by construction.
pub fn truncation_polytope(cfg: &TruncTetConfig) -> Result<ConvexPolytope3, TruncError> {
    match validate(cfg) {
        Validity::Valid => {}
        other => return Err(TruncError::InvalidConfig(other)),
    }
    let p = cfg.coords();
    let mut planes: Vec<HalfSpace3> = Vec::with_capacity(8);
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let (a, b, c) = (p[others[0]], p[others[1]], p[others[2]]);
        let mut n = la::cross(la::sub(b, a), la::sub(c, a));
        let mut off = la::dot(n, a);
        if la::dot(n, p[i]) > off {
            n = la::scale(n, -1.0);
            off = -off;
        }
        planes.push(unit_halfspace(n, off));
    }
    for i in 0..4 {
        if cfg.v[i].is_hyperideal() {
            let h = dual_halfspace(&cfg.v[i]).expect("hyperideal by kind");
            planes.push(unit_halfspace(h.normal, h.offset));
        }
    }

    let mut vertices: Vec<Vec3> = Vec::new();
    for i in 0..planes.len() {
        for j in (i + 1)..planes.len() {
            for k in (j + 1)..planes.len() {
                let rows = [planes[i].normal, planes[j].normal, planes[k].normal];
                let rhs = [planes[i].offset, planes[j].offset, planes[k].offset];
                let Some(x) = la::solve3(rows, rhs, 1e-12) else {
                    continue;
                };
                if !planes.iter().all(|h| h.contains(x, GEOM_EPS)) {
                    continue;
                }
                if vertices.iter().any(|v| la::norm(la::sub(*v, x)) < GEOM_EPS) {
                    return Err(TruncError::NumericallyDegenerate);
                }
                vertices.push(x);
            }
        }
    }

    let interior = {
        let mut c = [0.0; 3];
        for v in &vertices {
            c = la::add(c, *v);
        }
        la::scale(c, 1.0 / vertices.len().max(1) as f64)
    };

    let mut facets = Vec::new();
    for h in &planes {
        let inc: Vec<usize> = (0..vertices.len())
            .filter(|&i| h.eval(vertices[i]).abs() <= GEOM_EPS)
            .collect();
        if inc.len() < 3 {
            continue;
        }
        // in-plane frame
        let n = h.normal;
        let mut e1 = la::cross(n, [1.0, 0.0, 0.0]);
        if la::norm(e1) < 0.1 {
            e1 = la::cross(n, [0.0, 1.0, 0.0]);
        }
        e1 = la::scale(e1, 1.0 / la::norm(e1));
        let e2 = la::cross(n, e1);
        let mut c = [0.0; 3];
        for &i in &inc {
            c = la::add(c, vertices[i]);
        }
        c = la::scale(c, 1.0 / inc.len() as f64);
        let mut order: Vec<(f64, usize)> = inc
            .iter()
            .map(|&i| {
                let d = la::sub(vertices[i], c);
                (la::dot(d, e2).atan2(la::dot(d, e1)), i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cycle: Vec<usize> = order.into_iter().map(|(_, i)| i).collect();
        // counterclockwise seen from outside == negative winding around the
        // inward direction; flip if the signed area w.r.t. n is negative
        let mut area = 0.0;
        for k in 0..cycle.len() {
            let a = la::sub(vertices[cycle[k]], c);
            let b = la::sub(vertices[cycle[(k + 1) % cycle.len()]], c);
            area += la::dot(la::cross(a, b), n);
        }
        if area < 0.0 {
            cycle.reverse();
        }
        let _ = interior;
        facets.push(Facet {
            halfspace: *h,
            cycle,
        });
    }

    Ok(ConvexPolytope3 { vertices, facets })
}

// 27-node product rule on the standard simplex, exact through degree 5:
// Gauss-Jacobi nodes absorb the Duffy-map weights (1-u)^2 and (1-v).
const AXIS_U: [(f64, f64); 3] = [
    (0.072_994_024_073_149_7, 0.15713636106488646),
    (0.347_003_766_038_351_8, 0.146_246_269_259_866_1),
    (0.705_002_209_888_498_4, 0.029950703008580715),
];
const AXIS_V: [(f64, f64); 3] = [
    (0.088_587_959_512_703_93, 0.200_931_913_738_959_6),
    (0.40946686444073477, 0.229_241_106_359_586_2),
    (0.787659461760847, 0.069_826_979_901_454_17),
];
const AXIS_W: [(f64, f64); 3] = [
    (0.1127016653792583, 5.0 / 18.0),
    (0.5, 4.0 / 9.0),
    (0.8872983346207417, 5.0 / 18.0),
];

fn simplex_nodes() -> &'static [(f64, f64, f64, f64); 27] {
    use std::sync::OnceLock;
    static NODES: OnceLock<[(f64, f64, f64, f64); 27]> = OnceLock::new();
    NODES.get_or_init(|| {
        let mut out = [(0.0, 0.0, 0.0, 0.0); 27];
        let mut i = 0;
        for (u, wu) in AXIS_U {
            for (v, wv) in AXIS_V {
                for (w, ww) in AXIS_W {
                    let x = u;
                    let y = v * (1.0 - u);
                    let z = w * (1.0 - u) * (1.0 - v);
                    out[i] = (x, y, z, wu * wv * ww);
                    i += 1;
                }
            }
        }
        out
    })
}

/// Klein-chart hyperbolic density (1 - |x|^2)^-2.
fn density(x: Vec3) -> f64 {
    let d = 1.0 - la::norm2(x);
    1.0 / (d * d)
}

/// Fixed-order rule over one tetrahedron of the decomposition.
fn tet_rule(t: &[Vec3; 4]) -> f64 {
    let e1 = la::sub(t[1], t[0]);
    let e2 = la::sub(t[2], t[0]);
    let e3 = la::sub(t[3], t[0]);
    let d = la::det3([e1, e2, e3]).abs();
    if d == 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for &(x, y, z, w) in simplex_nodes() {
        let pt = [
            t[0][0] + x * e1[0] + y * e2[0] + z * e3[0],
            t[0][1] + x * e1[1] + y * e2[1] + z * e3[1],
            t[0][2] + x * e1[2] + y * e2[2] + z * e3[2],
        ];
        s += w * density(pt);
    }
    s * d
}

fn midpoint(a: Vec3, b: Vec3) -> Vec3 {
    la::scale(la::add(a, b), 0.5)
}

/// Uniform 1-to-8 subdivision at the edge midpoints.
fn subdivide(t: &[Vec3; 4]) -> [[Vec3; 4]; 8] {
    let [p0, p1, p2, p3] = *t;
    let m01 = midpoint(p0, p1);
    let m02 = midpoint(p0, p2);
    let m03 = midpoint(p0, p3);
    let m12 = midpoint(p1, p2);
    let m13 = midpoint(p1, p3);
    let m23 = midpoint(p2, p3);
    [
        [p0, m01, m02, m03],
        [m01, p1, m12, m13],
        [m02, m12, p2, m23],
        [m03, m13, m23, p3],
        [m01, m02, m03, m13],
        [m01, m02, m12, m13],
        [m02, m03, m13, m23],
        [m02, m12, m13, m23],
    ]
}

/// A cell of the subdivision queue: the two-level estimate over `tet`
/// (its own rule value vs. the sum over its 8 children) gives the local
/// error indicator that drives refinement.
struct Cell {
    tet: [Vec3; 4],
    kid_vals: [f64; 8],
    fine: f64,
    disc: f64,
    seq: u64,
}

impl Cell {
    fn new(tet: [Vec3; 4], coarse: f64, seq: u64) -> Self {
        let kids = subdivide(&tet);
        let mut kid_vals = [0.0; 8];
        let mut fine = 0.0;
        for (i, k) in kids.iter().enumerate() {
            let v = tet_rule(k);
            kid_vals[i] = v;
            fine += v;
        }
        Cell {
            tet,
            kid_vals,
            fine,
            disc: (fine - coarse).abs(),
            seq,
        }
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on the error indicator; sequence number breaks ties so the
        // refinement order (and hence the result) is deterministic
        self.disc
            .total_cmp(&other.disc)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Hyperbolic volume of a convex body strictly inside the unit ball:
/// integral of (1 - |x|^2)^-2 over the body. The body is fan-triangulated
/// from its vertex centroid and each cell is integrated by the degree-5
/// product rule; the cell with the worst two-level disagreement is split
/// 1-to-8 until the summed estimate meets the requested relative tolerance
/// or the cell budget runs out.
pub fn volume(poly: &ConvexPolytope3, tol: f64) -> Result<f64, TruncError> {
    volume_budgeted(poly, tol, CELL_BUDGET)
}

/// Same as [`volume`] with a caller-chosen cell budget; the search uses small
/// budgets for its throwaway evaluations.
pub(crate) fn volume_budgeted(
    poly: &ConvexPolytope3,
    tol: f64,
    max_cells: i64,
) -> Result<f64, TruncError> {
    if poly.max_vertex_norm() >= 1.0 - 1e-9 {
        return Err(TruncError::TouchesSphere);
    }
    let c = poly.vertex_centroid();
    let mut tets: Vec<[Vec3; 4]> = Vec::new();
    for f in &poly.facets {
        let v0 = poly.vertices[f.cycle[0]];
        for i in 1..f.cycle.len() - 1 {
            tets.push([c, v0, poly.vertices[f.cycle[i]], poly.vertices[f.cycle[i + 1]]]);
        }
    }

    let mut heap = std::collections::BinaryHeap::with_capacity(tets.len() * 4);
    let mut seq = 0u64;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut cells = 0i64;
    for t in tets {
        let coarse = tet_rule(&t);
        let cell = Cell::new(t, coarse, seq);
        seq += 1;
        cells += 9;
        total += cell.fine;
        err += cell.disc;
        heap.push(cell);
    }

    while err > tol * total.abs() && cells < max_cells {
        let Some(worst) = heap.pop() else {
            break;
        };
        if worst.disc == 0.0 {
            heap.push(worst);
            break;
        }
        total -= worst.fine;
        err -= worst.disc;
        let kids = subdivide(&worst.tet);
        for (i, k) in kids.iter().enumerate() {
            let cell = Cell::new(*k, worst.kid_vals[i], seq);
            seq += 1;
            cells += 8;
            total += cell.fine;
            err += cell.disc;
            heap.push(cell);
        }
    }
    Ok(total)
}

/// Signed volume of the truncated simplex spanned by four chart points:
/// zero for affinely dependent tuples, otherwise the volume with the sign of
/// the orientation of the affine parametrization. The volume itself is
/// evaluated on a lexicographically sorted copy of the points, so permuted
/// inputs produce bitwise-identical magnitudes.
pub fn algvol(y: &[KleinPoint; 4]) -> Result<f64, TruncError> {
    algvol_with_tol(y, 1e-9)
}

pub fn algvol_with_tol(y: &[KleinPoint; 4], tol: f64) -> Result<f64, TruncError> {
    let coords = [
        y[0].coords(),
        y[1].coords(),
        y[2].coords(),
        y[3].coords(),
    ];
    let det = la::affine_det(coords);
    if det.abs() < COPLANAR_EPS {
        return Ok(0.0);
    }
    let mut sorted = *y;
    sorted.sort_by(|a, b| {
        a.coords()
            .iter()
            .zip(b.coords().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let cfg = TruncTetConfig::new(sorted);
    let vol = volume(&truncation_polytope(&cfg)?, tol)?;
    Ok(det.signum() * vol)
}

/// Dihedral angle of the regular truncated tetrahedron with internal edge
/// length `ell`: `arccos(cosh ell / (2 cosh ell - 1))`.
pub fn regular_theta_of_ell(ell: f64) -> Result<f64, TruncError> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(TruncError::OutOfDomain);
    }
    let c = ell.cosh();
    Ok((c / (2.0 * c - 1.0)).acos())
}

/// Inverse of [`regular_theta_of_ell`]; equals the edge-length integrand.
pub fn regular_ell_of_theta(theta: f64) -> Result<f64, TruncError> {
    if !(theta > 0.0 && theta < PI / 3.0) {
        return Err(TruncError::OutOfDomain);
    }
    Ok(specfun::edge_integrand(theta).expect("theta checked in range"))
}

/// Edge length of the regular truncated tetrahedron with dihedral angle pi/(3g).
pub fn ell_g(g: u32) -> Result<f64, TruncError> {
    if g < 2 {
        return Err(TruncError::OutOfDomain);
    }
    regular_ell_of_theta(PI / (3.0 * g as f64))
}

/// Closed-form volume of the regular truncated tetrahedron with edge length
/// `ell`: `v8 - 3 * integral_0^theta(ell) arccosh(cos t / (2 cos t - 1)) dt`.
pub fn regular_volume(ell: f64) -> Result<f64, TruncError> {
    let theta = regular_theta_of_ell(ell)?;
    let quad = specfun::integrate(
        |t| specfun::edge_integrand(t).expect("integrand domain"),
        0.0,
        theta,
        1e-9,
    )?;
    Ok(specfun::v8() - 3.0 * quad.value)
}

/// A member of the regular family: edge length, dihedral angle, volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularTruncTet {
    pub ell: f64,
    pub theta: f64,
    pub volume: f64,
}

impl RegularTruncTet {
    pub fn from_ell(ell: f64) -> Result<Self, TruncError> {
        Ok(Self {
            ell,
            theta: regular_theta_of_ell(ell)?,
            volume: regular_volume(ell)?,
        })
    }

    pub fn from_theta(theta: f64) -> Result<Self, TruncError> {
        let ell = regular_ell_of_theta(theta)?;
        Ok(Self {
            ell,
            theta,
            volume: regular_volume(ell)?,
        })
    }
}

/// Directions of the vertices of a regular Euclidean tetrahedron centered at
/// the origin (pairwise cosine -1/3), each scaled to unit length.
pub fn regular_directions() -> [Vec3; 4] {
    let s = 1.0 / 3.0_f64.sqrt();
    [
        [s, s, s],
        [s, -s, -s],
        [-s, s, -s],
        [-s, -s, s],
    ]
}

/// Radius placing four hyperideal vertices in the regular directions so that
/// all six internal edges have the length of the regular family member with
/// dihedral angle `theta`: `r^2 = (cosh ell + 1) / (cosh ell - 1/3)`.
pub fn regular_radius_of_theta(theta: f64) -> Result<f64, TruncError> {
    if !(theta > 0.0 && theta < PI / 3.0) {
        return Err(TruncError::OutOfDomain);
    }
    let c = theta.cos();
    let cosh_ell = c / (2.0 * c - 1.0);
    Ok(((cosh_ell + 1.0) / (cosh_ell - 1.0 / 3.0)).sqrt())
}

/// Build the regular fully truncated configuration with dihedral angle `theta`.
pub fn build_regular_config(theta: f64) -> Result<TruncTetConfig, TruncError> {
    let r = regular_radius_of_theta(theta)?;
    let dirs = regular_directions();
    let mk = |d: Vec3| KleinPoint::new(la::scale(d, r));
    Ok(TruncTetConfig::new([
        mk(dirs[0])?,
        mk(dirs[1])?,
        mk(dirs[2])?,
        mk(dirs[3])?,
    ]))
}
