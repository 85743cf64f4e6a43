//! Tiny fixed-size linear algebra shared by the geometry modules.

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm2(a: Vec3) -> f64 {
    dot(a, a)
}

pub fn norm(a: Vec3) -> f64 {
    norm2(a).sqrt()
}

pub fn det3(m: [Vec3; 3]) -> f64 {
    dot(m[0], cross(m[1], m[2]))
}

/// Solve the 3x3 system `rows * x = rhs` by Cramer's rule.
/// Returns `None` when the determinant is below `min_det`.
pub fn solve3(rows: [Vec3; 3], rhs: Vec3, min_det: f64) -> Option<Vec3> {
    let d = det3(rows);
    if d.abs() < min_det {
        return None;
    }
    let col = |k: usize| -> f64 {
        let mut m = rows;
        m[0][k] = rhs[0];
        m[1][k] = rhs[1];
        m[2][k] = rhs[2];
        det3(m) / d
    };
    Some([col(0), col(1), col(2)])
}

/// Determinant of the affine frame spanned by four points: det[p1-p0, p2-p0, p3-p0].
/// Six times the signed Euclidean volume of the tetrahedron they span.
pub fn affine_det(p: [Vec3; 4]) -> f64 {
    det3([sub(p[1], p[0]), sub(p[2], p[0]), sub(p[3], p[0])])
}

/// Smallest squared distance from the origin over the closed segment [a, b].
pub fn segment_min_norm2(a: Vec3, b: Vec3) -> f64 {
    let d = sub(b, a);
    let dd = norm2(d);
    if dd == 0.0 {
        return norm2(a);
    }
    let s = (-dot(a, d) / dd).clamp(0.0, 1.0);
    norm2(add(a, scale(d, s)))
}
