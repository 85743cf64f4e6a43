//! Union-find closures of the gluing relations: vertex, edge, and face
//! classes of the quotient complex, vertex-link surfaces, and the Euler
//! characteristic identity.

use super::{IdealTriangulation, IdtriError};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Weighted union-find: every element carries a sign relative to its root,
/// and a class is flagged when a relation forces an element to equal its own
/// negation (an orientation-reversing self-identification).
struct SignedUf {
    parent: Vec<usize>,
    sign: Vec<i8>,
    flipped: Vec<bool>,
}

impl SignedUf {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            sign: vec![1; n],
            flipped: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, i8) {
        if self.parent[x] == x {
            return (x, self.sign[x]);
        }
        let (root, s) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.sign[x] *= s;
        (root, self.sign[x])
    }

    /// Impose orient(a) = rel * orient(b).
    fn union(&mut self, a: usize, b: usize, rel: i8) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa != rel * sb {
                self.flipped[ra] = true;
            }
            return;
        }
        self.parent[rb] = ra;
        self.sign[rb] = sa * rel * sb;
        self.flipped[ra] |= self.flipped[rb];
    }
}

pub(crate) const EDGE_PAIRS: [(usize, usize); 6] =
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub(crate) fn edge_slot(a: usize, b: usize) -> (usize, i8) {
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    let idx = EDGE_PAIRS.iter().position(|&(x, y)| (x, y) == (lo, hi));
    (idx.expect("distinct labels"), s)
}

/// An edge class of the quotient, with the orientation-consistency flag.
#[derive(Debug, Clone)]
pub struct EdgeClass {
    /// (tetrahedron, ordered label pair a < b)
    pub members: Vec<(usize, (usize, usize))>,
    /// Some identification maps the class generator to its own reversal.
    pub orientation_reversing: bool,
}

#[derive(Debug, Clone)]
pub struct FaceClass {
    /// The two (tetrahedron, face) slots identified by the gluing.
    pub members: Vec<(usize, usize)>,
    /// Lexicographically smallest member; carries the class generator.
    pub representative: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct CellQuotient {
    pub vertex_classes: Vec<Vec<(usize, usize)>>,
    pub edge_classes: Vec<EdgeClass>,
    pub face_classes: Vec<FaceClass>,
    vclass: Vec<usize>,
    eclass: Vec<(usize, i8)>,
    fclass: Vec<(usize, i8)>,
    germ_class: Vec<usize>,
}

impl CellQuotient {
    pub fn vertex_class(&self, tet: usize, v: usize) -> usize {
        self.vclass[4 * tet + v]
    }

    /// Class index and the sign of the oriented edge (a, b) of `tet`
    /// relative to the class generator.
    pub fn edge_class_signed(&self, tet: usize, a: usize, b: usize) -> (usize, i8) {
        let (idx, s) = edge_slot(a, b);
        let (class, cs) = self.eclass[6 * tet + idx];
        (class, cs * s)
    }

    /// Class index and orientation sign of face slot (tet, f) relative to
    /// the class generator (the representative slot with ascending labels).
    pub fn face_class_signed(&self, tet: usize, f: usize) -> (usize, i8) {
        self.fclass[4 * tet + f]
    }

    /// Class of the edge germ (tet, corner v, far end w); a vertex of the
    /// link surface of the vertex class of (tet, v).
    pub(crate) fn germ(&self, tet: usize, v: usize, w: usize) -> usize {
        self.germ_class[12 * tet + 3 * v + if w < v { w } else { w - 1 }]
    }
}

fn collect_classes(roots: &[usize]) -> (Vec<usize>, Vec<Vec<usize>>) {
    // map each root to a dense class index, in first-appearance order
    let mut class_of_root = std::collections::HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut idx = Vec::with_capacity(roots.len());
    for (i, &r) in roots.iter().enumerate() {
        let next = classes.len();
        let c = *class_of_root.entry(r).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(i);
        idx.push(c);
    }
    (idx, classes)
}

/// Union-find over the vertex, edge, face, and edge-germ instances induced
/// by the face bijections.
pub fn quotient_cells(tri: &IdealTriangulation) -> CellQuotient {
    let g = tri.tet_count();
    let mut vuf = SignedUf::new(4 * g);
    let mut euf = SignedUf::new(6 * g);
    let mut fuf = SignedUf::new(4 * g);
    let mut guf = SignedUf::new(12 * g);

    let germ_id = |t: usize, v: usize, w: usize| 12 * t + 3 * v + if w < v { w } else { w - 1 };

    for t in 0..g {
        for f in 0..4 {
            let gl = tri.gluing(t, f);
            let p = gl.perm;
            let others: Vec<usize> = (0..4).filter(|&v| v != f).collect();
            for &v in &others {
                vuf.union(4 * t + v, 4 * gl.tet + p[v], 1);
                for &w in &others {
                    if w != v {
                        guf.union(germ_id(t, v, w), germ_id(gl.tet, p[v], p[w]), 1);
                    }
                }
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let (a, b) = (others[i], others[j]);
                    let (ia, sa) = edge_slot(a, b);
                    let (ib, sb) = edge_slot(p[a], p[b]);
                    // oriented (a, b) maps to oriented (p[a], p[b])
                    euf.union(6 * t + ia, 6 * gl.tet + ib, sa * sb);
                }
            }
            // face generator: ascending labels; sign of the image sequence
            let img = [p[others[0]], p[others[1]], p[others[2]]];
            let rel = super::perm_sign(&rank3(img)) as i8;
            fuf.union(4 * t + f, 4 * gl.tet + gl.face, rel);
        }
    }

    let vroots: Vec<usize> = (0..4 * g).map(|i| vuf.find(i).0).collect();
    let (vclass, vgroups) = collect_classes(&vroots);
    let vertex_classes = vgroups
        .iter()
        .map(|grp| grp.iter().map(|&i| (i / 4, i % 4)).collect())
        .collect();

    let eroots: Vec<usize> = (0..6 * g).map(|i| euf.find(i).0).collect();
    let (eclass_idx, egroups) = collect_classes(&eroots);
    let eclass: Vec<(usize, i8)> = (0..6 * g)
        .map(|i| (eclass_idx[i], euf.find(i).1))
        .collect();
    let edge_classes = egroups
        .iter()
        .map(|grp| {
            let root_flag = {
                let first = grp[0];
                let (r, _) = euf.find(first);
                euf.flipped[r]
            };
            EdgeClass {
                members: grp.iter().map(|&i| (i / 6, EDGE_PAIRS[i % 6])).collect(),
                orientation_reversing: root_flag,
            }
        })
        .collect();

    let froots: Vec<usize> = (0..4 * g).map(|i| fuf.find(i).0).collect();
    let (fclass_idx, fgroups) = collect_classes(&froots);
    let fclass: Vec<(usize, i8)> = (0..4 * g)
        .map(|i| {
            let (class, mut s) = (fclass_idx[i], fuf.find(i).1);
            // re-anchor the sign at the representative rather than the union-find root
            let rep = *fgroups[class].iter().min().unwrap();
            s *= fuf.find(rep).1;
            (class, s)
        })
        .collect();
    let face_classes = fgroups
        .iter()
        .map(|grp| {
            let mut members: Vec<(usize, usize)> = grp.iter().map(|&i| (i / 4, i % 4)).collect();
            members.sort();
            FaceClass {
                representative: members[0],
                members,
            }
        })
        .collect();

    let groots: Vec<usize> = (0..12 * g).map(|i| guf.find(i).0).collect();
    let (germ_class, _) = collect_classes(&groots);

    CellQuotient {
        vertex_classes,
        edge_classes,
        face_classes,
        vclass,
        eclass,
        fclass,
        germ_class,
    }
}

/// Rank sequence of three distinct values: the permutation of 0..3 sorting them.
fn rank3(v: [usize; 3]) -> Vec<usize> {
    let mut idx = [0usize, 1, 2];
    idx.sort_by_key(|&i| v[i]);
    let mut rank = vec![0; 3];
    for (pos, &i) in idx.iter().enumerate() {
        rank[i] = pos;
    }
    rank
}

/// One boundary component seen as the link of a vertex class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkSurface {
    pub euler_char: i64,
    pub orientable: bool,
    /// Genus when orientable, crosscap count otherwise.
    pub genus_or_crosscaps: i64,
}

/// Build the link of every vertex class from the tetrahedron corners: one
/// triangle per corner, edges from face-corner adjacencies, vertices from
/// edge-germ classes.
pub fn vertex_links(tri: &IdealTriangulation) -> Result<Vec<LinkSurface>, IdtriError> {
    let q = quotient_cells(tri);
    vertex_links_with(tri, &q)
}

pub(crate) fn vertex_links_with(
    tri: &IdealTriangulation,
    q: &CellQuotient,
) -> Result<Vec<LinkSurface>, IdtriError> {
    let g = tri.tet_count();
    let n_classes = q.vertex_classes.len();
    let mut out = Vec::with_capacity(n_classes);

    // side (t, v, f) of the link triangle at corner (t, v) glues to
    // (t', p[v], p[f]); the involution pairs sides, two triangles per edge
    let side_partner = |t: usize, v: usize, f: usize| {
        let gl = tri.gluing(t, f);
        (gl.tet, gl.perm[v], gl.perm[f])
    };
    for t in 0..g {
        for v in 0..4 {
            for f in 0..4 {
                if f == v {
                    continue;
                }
                let (t2, v2, f2) = side_partner(t, v, f);
                if (t2, v2, f2) == (t, v, f) {
                    return Err(IdtriError::NonManifoldLink);
                }
                if side_partner(t2, v2, f2) != (t, v, f) {
                    return Err(IdtriError::NonManifoldLink);
                }
            }
        }
    }

    for class in &q.vertex_classes {
        let corners: &Vec<(usize, usize)> = class;
        let faces = corners.len() as i64;
        let edges = (corners.len() * 3 / 2) as i64;
        let mut germs = std::collections::HashSet::new();
        for &(t, v) in corners {
            for w in 0..4 {
                if w != v {
                    germs.insert(q.germ(t, v, w));
                }
            }
        }
        let chi = germs.len() as i64 - edges + faces;

        // orientation propagation over the corner triangles
        let mut orient: std::collections::HashMap<(usize, usize), i8> =
            std::collections::HashMap::new();
        let mut orientable = true;
        for &seed in corners {
            if orient.contains_key(&seed) {
                continue;
            }
            orient.insert(seed, 1);
            let mut stack = vec![seed];
            while let Some((t, v)) = stack.pop() {
                let here = orient[&(t, v)];
                let ws: Vec<usize> = (0..4).filter(|&w| w != v).collect();
                for &f in &ws {
                    let gl = tri.gluing(t, f);
                    let (t2, v2) = (gl.tet, gl.perm[v]);
                    // shared link edge: the two germs with w != v, f
                    let xy: Vec<usize> = ws.iter().copied().filter(|&w| w != f).collect();
                    let (x, y) = (xy[0], xy[1]);
                    let da = dir_parity(&ws, x, y);
                    let ws2: Vec<usize> = (0..4).filter(|&w| w != v2).collect();
                    let db = dir_parity(&ws2, gl.perm[x], gl.perm[y]);
                    // adjacent triangles traverse the shared edge oppositely
                    let want = -here * da * db;
                    match orient.get(&(t2, v2)) {
                        None => {
                            orient.insert((t2, v2), want);
                            stack.push((t2, v2));
                        }
                        Some(&s) if s != want => {
                            orientable = false;
                        }
                        _ => {}
                    }
                }
            }
        }

        let genus_or_crosscaps = if orientable { (2 - chi) / 2 } else { 2 - chi };
        out.push(LinkSurface {
            euler_char: chi,
            orientable,
            genus_or_crosscaps,
        });
    }
    Ok(out)
}

/// +1 when (x, y) is a forward edge of the triangle cycle (c0, c1, c2).
fn dir_parity(cycle: &[usize], x: usize, y: usize) -> i8 {
    let (a, b, c) = (cycle[0], cycle[1], cycle[2]);
    if (x, y) == (a, b) || (x, y) == (b, c) || (x, y) == (c, a) {
        1
    } else {
        -1
    }
}

/// Euler characteristic of the underlying manifold: half the sum of the
/// link characteristics, exact. Errors when the sum is odd, which signals a
/// non-manifold identification.
pub fn euler_characteristic_m(tri: &IdealTriangulation) -> Result<BigRational, IdtriError> {
    let links = vertex_links(tri)?;
    let total: i64 = links.iter().map(|l| l.euler_char).sum();
    if total % 2 != 0 {
        return Err(IdtriError::NonIntegral);
    }
    Ok(BigRational::new(BigInt::from(total), BigInt::from(2)))
}
