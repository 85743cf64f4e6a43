//! Ideal-triangulation combinatorics: face-pairing data, cell quotients,
//! vertex links, Euler characteristics, orientability, detection of the
//! one-edge minimal family, the alternated ideal fundamental cycle, and
//! marked homology ranks over the rationals.
//!
//! A triangulation is `g` tetrahedra together with a fixed-point-free
//! involution on the 4g (tetrahedron, face) slots; each gluing carries a
//! bijection of the four vertex labels sending the glued face to its
//! partner. Everything downstream of parsing is exact: the cycle and
//! homology computations use rational arithmetic, never floating point.

mod cycle;
mod homology;
mod quotient;

pub use cycle::{
    alternated_fundamental_cycle, local_degrees, verify_marked_cycle, CycleTerm, MarkedCycle,
};
pub use homology::marked_homology_ranks;
pub use quotient::{
    euler_characteristic_m, quotient_cells, vertex_links, CellQuotient, EdgeClass, FaceClass,
    LinkSurface,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IdtriError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("face {face} of tetrahedron {tet} is not glued")]
    UnpairedFace { tet: usize, face: usize },
    #[error("gluing at tetrahedron {tet}, face {face} breaks the involution")]
    InconsistentInvolution { tet: usize, face: usize },
    #[error("bad label bijection at tetrahedron {tet}, face {face}")]
    BadPermutation { tet: usize, face: usize },
    #[error("face {face} of tetrahedron {tet} is glued more than once")]
    DuplicateGluing { tet: usize, face: usize },
    #[error("triangulation is not orientable")]
    NotOrientable,
    #[error("a vertex link is not a surface")]
    NonManifoldLink,
    #[error("half the boundary Euler characteristic is not an integer")]
    NonIntegral,
}

/// One side of a face pairing: the partner slot and the label bijection
/// (`perm[v]` is the label of `v` in the partner tetrahedron; `perm[face]`
/// is the partner face).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub face: usize,
    pub perm: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    gluings: Vec<[Gluing; 4]>,
}

pub(crate) fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

pub(crate) fn invert4(p: [usize; 4]) -> [usize; 4] {
    let mut q = [0; 4];
    for (i, &pi) in p.iter().enumerate() {
        q[pi] = i;
    }
    q
}

/// All 24 orderings of the labels 0..3, in lexicographic order.
pub(crate) fn all_orderings() -> [[usize; 4]; 24] {
    let mut out = [[0; 4]; 24];
    let mut n = 0;
    for a in 0..4 {
        for b in 0..4 {
            if b == a {
                continue;
            }
            for c in 0..4 {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out[n] = [a, b, c, d];
                n += 1;
            }
        }
    }
    out
}

impl IdealTriangulation {
    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> &Gluing {
        &self.gluings[tet][face]
    }

    /// Assemble a triangulation from one record per geometric gluing:
    /// `(tet, face, partner tet, partner face, perm)`. The inverse gluings
    /// are synthesized; every slot must end up paired exactly once.
    pub fn from_gluings(
        g: usize,
        list: &[(usize, usize, usize, usize, [usize; 4])],
    ) -> Result<Self, IdtriError> {
        let mut slots: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; g];
        for &(t, f, t2, f2, perm) in list {
            if t >= g || t2 >= g || f >= 4 || f2 >= 4 {
                return Err(IdtriError::Syntax {
                    line: 0,
                    message: format!("gluing ({t},{f}) -> ({t2},{f2}) out of range"),
                });
            }
            let mut seen = [false; 4];
            for &x in &perm {
                if x >= 4 || seen[x] {
                    return Err(IdtriError::BadPermutation { tet: t, face: f });
                }
                seen[x] = true;
            }
            if perm[f] != f2 {
                return Err(IdtriError::BadPermutation { tet: t, face: f });
            }
            if (t, f) == (t2, f2) {
                return Err(IdtriError::InconsistentInvolution { tet: t, face: f });
            }
            if slots[t][f].is_some() {
                return Err(IdtriError::DuplicateGluing { tet: t, face: f });
            }
            if slots[t2][f2].is_some() {
                return Err(IdtriError::DuplicateGluing { tet: t2, face: f2 });
            }
            slots[t][f] = Some(Gluing {
                tet: t2,
                face: f2,
                perm,
            });
            slots[t2][f2] = Some(Gluing {
                tet: t,
                face: f,
                perm: invert4(perm),
            });
        }
        let mut gluings = Vec::with_capacity(g);
        for (t, row) in slots.into_iter().enumerate() {
            let mut full = [Gluing {
                tet: 0,
                face: 0,
                perm: [0; 4],
            }; 4];
            for (f, s) in row.into_iter().enumerate() {
                full[f] = s.ok_or(IdtriError::UnpairedFace { tet: t, face: f })?;
            }
            gluings.push(full);
        }
        Ok(Self { gluings })
    }

    /// Parse the line-oriented v1 format. `%` starts a comment; the header is
    /// `idtri v1` followed by `tets <g>` and one `glue` line per geometric
    /// gluing; unknown directives are rejected.
    pub fn parse(text: &str) -> Result<Self, IdtriError> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let body = raw.split('%').next().unwrap_or("").trim();
            if !body.is_empty() {
                lines.push((no + 1, body));
            }
        }
        let syntax = |line: usize, message: &str| IdtriError::Syntax {
            line,
            message: message.to_string(),
        };
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, "idtri v1")) => {}
            Some((n, _)) => return Err(syntax(n, "expected header `idtri v1`")),
            None => return Err(syntax(0, "empty file")),
        }
        let g = match it.next() {
            Some((n, l)) => {
                let mut w = l.split_whitespace();
                if w.next() != Some("tets") {
                    return Err(syntax(n, "expected `tets <g>`"));
                }
                let g: usize = w
                    .next()
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| syntax(n, "bad tetrahedron count"))?;
                if w.next().is_some() {
                    return Err(syntax(n, "trailing tokens after `tets <g>`"));
                }
                if g == 0 {
                    return Err(syntax(n, "need at least one tetrahedron"));
                }
                g
            }
            None => return Err(syntax(0, "missing `tets <g>`")),
        };
        let mut list = Vec::new();
        for (n, l) in it {
            let w: Vec<&str> = l.split_whitespace().collect();
            if w.first() != Some(&"glue") {
                return Err(syntax(n, "unknown directive"));
            }
            if w.len() != 11 || w[3] != "->" || w[6] != "perm" {
                return Err(syntax(n, "expected `glue t f -> t' f' perm p0 p1 p2 p3`"));
            }
            let num = |s: &str| -> Result<usize, IdtriError> {
                s.parse().map_err(|_| syntax(n, "bad integer"))
            };
            let (t, f, t2, f2) = (num(w[1])?, num(w[2])?, num(w[4])?, num(w[5])?);
            let perm = [num(w[7])?, num(w[8])?, num(w[9])?, num(w[10])?];
            if t >= g || t2 >= g || f >= 4 || f2 >= 4 || perm.iter().any(|&x| x >= 4) {
                return Err(syntax(n, "index out of range"));
            }
            list.push((t, f, t2, f2, perm));
        }
        Self::from_gluings(g, &list)
    }

    /// Write the v1 format back out, one line per geometric gluing.
    pub fn serialize(&self) -> String {
        let mut out = format!("idtri v1\ntets {}\n", self.tet_count());
        for t in 0..self.tet_count() {
            for f in 0..4 {
                let gl = self.gluings[t][f];
                if (gl.tet, gl.face) < (t, f) {
                    continue;
                }
                out.push_str(&format!(
                    "glue {} {} -> {} {} perm {} {} {} {}\n",
                    t, f, gl.tet, gl.face, gl.perm[0], gl.perm[1], gl.perm[2], gl.perm[3]
                ));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let g = self.tet_count();
        let mut seen = vec![false; g];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for f in 0..4 {
                let u = self.gluings[t][f].tet;
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Propagate tetrahedron orientations across the gluings: a gluing whose
    /// label bijection is an odd permutation joins tetrahedra of equal sign.
    /// Returns the signs when a consistent assignment exists.
    pub fn orientation_signs(&self) -> Option<Vec<i8>> {
        let g = self.tet_count();
        let mut signs: Vec<i8> = vec![0; g];
        for start in 0..g {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut stack = vec![start];
            while let Some(t) = stack.pop() {
                for f in 0..4 {
                    let gl = self.gluings[t][f];
                    let want = signs[t] * (-perm_sign(&gl.perm)) as i8;
                    if signs[gl.tet] == 0 {
                        signs[gl.tet] = want;
                        stack.push(gl.tet);
                    } else if signs[gl.tet] != want {
                        return None;
                    }
                }
            }
        }
        Some(signs)
    }

    pub fn orientable(&self) -> bool {
        self.orientation_signs().is_some()
    }
}

/// Outcome of the one-edge minimal-family test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MgDetection {
    pub is_mg: bool,
    pub g: Option<usize>,
}

/// A triangulation presents a member of the minimal one-edge family exactly
/// when it is orientable, connected, has one vertex class, one edge class,
/// at least two tetrahedra, and Euler characteristic 1 - g.
pub fn detect_mg(tri: &IdealTriangulation) -> MgDetection {
    let g = tri.tet_count();
    let no = MgDetection { is_mg: false, g: None };
    if g < 2 || !tri.is_connected() || !tri.orientable() {
        return no;
    }
    let q = quotient_cells(tri);
    if q.vertex_classes.len() != 1 || q.edge_classes.len() != 1 {
        return no;
    }
    let Ok(chi) = euler_characteristic_m(tri) else {
        return no;
    };
    let expect = num_rational::BigRational::from_integer((1i64 - g as i64).into());
    if chi != expect {
        return no;
    }
    MgDetection {
        is_mg: true,
        g: Some(g),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::IdealTriangulation;

    pub fn load(name: &str) -> IdealTriangulation {
        let text = match name {
            "fig8" => include_str!("../../fixtures/fig8.tri"),
            "gieseking" => include_str!("../../fixtures/gieseking.tri"),
            "m2" => include_str!("../../fixtures/m2.tri"),
            "m3" => include_str!("../../fixtures/m3.tri"),
            _ => panic!("unknown fixture {name}"),
        };
        IdealTriangulation::parse(text).unwrap()
    }
}
