//! Quasi-simplicial ordered 3-cycles.
//!
//! A complex is a list of tetrahedra, each with four ordered vertex slots
//! 0..3 and four faces (face i opposite slot i). Every face is glued to a
//! face of some tetrahedron by a bijection of the three face slots that is
//! monotonic with respect to slot order, the ordered-cycle condition that
//! vertex orderings agree on common faces. Gluings are involutive and the
//! complex is closed.
//!
//! Derived data is computed eagerly at construction: orientation signs εᵢ
//! (vertex order versus the orientation of |K|), edge classes with their
//! cyclic incidence order, and vertex links with genus. Constructed
//! triangulations are immutable.

mod chain;
mod curves;
mod doc;
mod links;
mod pachner;

pub use chain::{cycle_from_homogeneous_chain, lens_chain};
pub use curves::{
    curve_row, dual_cycle_basis, edge_loop, edge_row, log_holonomy, normal_loop_basis,
    parity_along, NormalCurve, Pass, Row,
};
pub use doc::{parse, serialize, CuspSpec};
pub(crate) use links::{
    build_surface as links_surface, candidate_curves as links_candidates,
    cocycle_basis as links_cocycles, curve_coords as links_curve_coords,
};
pub use links::{cusp_basis, LinkClass, VertexLink};
pub use pachner::{pachner_23, pachner_32, PachnerShapes};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One tetrahedron: neighbor tet and gluing per face. `gluings[f]` lists the
/// images in the neighbor of this face's three slots in increasing slot
/// order; monotonicity means the listed triple is strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tet {
    pub neighbors: [usize; 4],
    pub gluings: [[usize; 3]; 4],
}

impl Tet {
    /// Full slot map across face `f`: slots of this tet (≠ f) to slots of
    /// the neighbor; `f` itself maps to the glued face of the neighbor.
    pub fn slot_map(&self, f: usize) -> [usize; 4] {
        let mut map = [usize::MAX; 4];
        let sources: Vec<usize> = (0..4).filter(|&s| s != f).collect();
        for (k, &s) in sources.iter().enumerate() {
            map[s] = self.gluings[f][k];
        }
        map[f] = 6 - self.gluings[f].iter().sum::<usize>();
        map
    }
}

/// A 2×2 complex matrix labeling a tetrahedron vertex (PSL(2,C) element,
/// defined up to sign).
pub type Label = [[Complex64; 2]; 2];

/// One incidence of an edge class: a tet edge together with the faces the
/// edge-circling path enters and exits through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeIncidence {
    pub tet: usize,
    pub edge: usize,
    pub enter_face: usize,
    pub exit_face: usize,
}

/// An edge class (1-simplex of the complex) with its cyclic incidences.
#[derive(Debug, Clone)]
pub struct EdgeClass {
    pub incidences: Vec<EdgeIncidence>,
}

impl EdgeClass {
    pub fn valence(&self) -> usize {
        self.incidences.len()
    }
}

/// A quasi-simplicial ordered 3-cycle with derived caches.
#[derive(Debug, Clone)]
pub struct OrderedTriangulation {
    pub name: String,
    pub tets: Vec<Tet>,
    pub labels: Option<Vec<[Label; 4]>>,
    pub cusp_specs: Vec<CuspSpec>,
    signs: Vec<i64>,
    edges: Vec<EdgeClass>,
    edge_of: Vec<[usize; 6]>,
    vertex_of: Vec<[usize; 4]>,
    num_vertices: usize,
    links: Vec<VertexLink>,
}

impl OrderedTriangulation {
    pub fn new(
        name: String,
        tets: Vec<Tet>,
        labels: Option<Vec<[Label; 4]>>,
        cusp_specs: Vec<CuspSpec>,
    ) -> Result<OrderedTriangulation> {
        Self::with_signs(name, tets, labels, cusp_specs, None)
    }

    /// Construct with externally prescribed orientation signs (used for
    /// G-labeled complexes built from chains, where the chain coefficients
    /// are the signs). Prescribed signs are checked against the gluing
    /// parity rule.
    pub fn with_signs(
        name: String,
        tets: Vec<Tet>,
        labels: Option<Vec<[Label; 4]>>,
        cusp_specs: Vec<CuspSpec>,
        prescribed_signs: Option<Vec<i64>>,
    ) -> Result<OrderedTriangulation> {
        if tets.is_empty() {
            return Err(Error::Parse("empty complex".into()));
        }
        validate_gluings(&tets)?;
        let signs = orientation_signs_impl(&tets, prescribed_signs)?;
        let (edges, edge_of) = compute_edges_impl(&tets)?;
        let (vertex_of, num_vertices) = vertex_classes(&tets);
        if let Some(l) = &labels {
            if l.len() != tets.len() {
                return Err(Error::Parse(format!(
                    "{} label entries for {} tetrahedra",
                    l.len(),
                    tets.len()
                )));
            }
        }
        let mut tri = OrderedTriangulation {
            name,
            tets,
            labels,
            cusp_specs,
            signs,
            edges,
            edge_of,
            vertex_of,
            num_vertices,
            links: Vec::new(),
        };
        tri.links = links::compute_links_impl(&tri)?;
        for spec in &tri.cusp_specs.clone() {
            curves::validate_curve(&tri, &spec.meridian)?;
            curves::validate_curve(&tri, &spec.longitude)?;
            if spec.vertex >= tri.num_vertices {
                return Err(Error::Parse(format!(
                    "cusp spec names vertex {} of {}",
                    spec.vertex, tri.num_vertices
                )));
            }
        }
        Ok(tri)
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    /// Orientation signs εᵢ ∈ {±1}: whether the vertex order of Δᵢ agrees
    /// with the orientation of |K|, normalized with ε₀ = +1.
    pub fn orientation_signs(&self) -> &[i64] {
        &self.signs
    }

    /// All signs flipped (the mirror complex uses conjugated shapes).
    pub fn flip_signs(&mut self) {
        for s in &mut self.signs {
            *s = -*s;
        }
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edges
    }

    /// Edge class index of tet edge (t, e).
    pub fn edge_class_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_of[tet][edge]
    }

    /// Vertex class (0-simplex) of a tet corner.
    pub fn vertex_class_of(&self, tet: usize, corner: usize) -> usize {
        self.vertex_of[tet][corner]
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn vertex_links(&self) -> &[VertexLink] {
        &self.links
    }

    /// Oriented cyclic order of the three slots ≠ c in the link triangle at
    /// corner (t, c), with respect to the orientation of the link surface
    /// as seen from the vertex.
    pub fn corner_cycle(&self, tet: usize, corner: usize) -> [usize; 3] {
        let s: Vec<usize> = (0..4).filter(|&x| x != corner).collect();
        let parity = if corner.is_multiple_of(2) { 1i64 } else { -1 };
        if parity * self.signs[tet] > 0 {
            [s[0], s[1], s[2]]
        } else {
            [s[0], s[2], s[1]]
        }
    }
}

fn validate_gluings(tets: &[Tet]) -> Result<()> {
    let n = tets.len();
    for (t, tet) in tets.iter().enumerate() {
        for f in 0..4 {
            let nb = tet.neighbors[f];
            if nb >= n {
                return Err(Error::Parse(format!(
                    "tet {t} face {f} glued to nonexistent tet {nb}"
                )));
            }
            let g = tet.gluings[f];
            let mut sorted = g;
            sorted.sort_unstable();
            if sorted.iter().any(|&s| s > 3) || sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!(
                    "tet {t} face {f}: gluing {g:?} is not three distinct slots"
                )));
            }
            if !(g[0] < g[1] && g[1] < g[2]) {
                return Err(Error::OrderIncompatible {
                    tet: t,
                    face: f,
                    detail: format!("image slots {g:?} are not increasing"),
                });
            }
            // Involutivity.
            let map = tet.slot_map(f);
            let f2 = map[f];
            let back = &tets[nb];
            if back.neighbors[f2] != t {
                return Err(Error::Parse(format!(
                    "tet {t} face {f} glues to tet {nb} face {f2}, which glues to tet {}",
                    back.neighbors[f2]
                )));
            }
            let back_map = back.slot_map(f2);
            for s in 0..4 {
                if back_map[map[s]] != s {
                    return Err(Error::Parse(format!(
                        "gluing of tet {t} face {f} is not involutive"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// ε propagation: across a gluing of face f of t to face f' of t', the
/// ordered faces cancel in ∂(Σ εᵢΔᵢ) iff ε_{t'} = −ε_t·(−1)^{f+f'}.
fn orientation_signs_impl(tets: &[Tet], prescribed: Option<Vec<i64>>) -> Result<Vec<i64>> {
    let n = tets.len();
    let mut signs = vec![0i64; n];
    signs[0] = 1;
    let mut queue = vec![0usize];
    while let Some(t) = queue.pop() {
        for f in 0..4 {
            let nb = tets[t].neighbors[f];
            let f2 = tets[t].slot_map(f)[f];
            let want = -signs[t] * if (f + f2).is_multiple_of(2) { 1 } else { -1 };
            if signs[nb] == 0 {
                signs[nb] = want;
                queue.push(nb);
            } else if signs[nb] != want {
                return Err(Error::Parse(
                    "complex is not orientable: no consistent orientation signs".into(),
                ));
            }
        }
    }
    if signs.contains(&0) {
        return Err(Error::Parse("complex is not connected".into()));
    }
    if let Some(pre) = prescribed {
        if pre.len() != n {
            return Err(Error::Parse("wrong number of prescribed signs".into()));
        }
        if pre == signs {
            return Ok(signs);
        }
        let flipped: Vec<i64> = signs.iter().map(|s| -s).collect();
        if pre == flipped {
            return Ok(flipped);
        }
        return Err(Error::Parse(
            "prescribed signs are inconsistent with the gluing parity rule".into(),
        ));
    }
    Ok(signs)
}

/// Walk around each 1-simplex, partitioning the 6n tet edges into classes
/// with cyclic incidence order.
fn compute_edges_impl(tets: &[Tet]) -> Result<(Vec<EdgeClass>, Vec<[usize; 6]>)> {
    use crate::flattening::EDGE_VERTS;
    let n = tets.len();
    let mut edge_of = vec![[usize::MAX; 6]; n];
    let mut classes = Vec::new();
    for t0 in 0..n {
        for e0 in 0..6 {
            if edge_of[t0][e0] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let (a0, b0) = EDGE_VERTS[e0];
            let others: Vec<usize> = (0..4).filter(|&s| s != a0 && s != b0).collect();
            let exit0 = others[0];
            let enter0 = others[1];
            let mut incidences = Vec::new();
            let (mut t, mut a, mut b, mut exit, mut enter) = (t0, a0, b0, exit0, enter0);
            loop {
                let e = crate::flattening::edge_index(a, b);
                incidences.push(EdgeIncidence {
                    tet: t,
                    edge: e,
                    enter_face: enter,
                    exit_face: exit,
                });
                if edge_of[t][e] != usize::MAX && edge_of[t][e] != id {
                    return Err(Error::Parse(format!(
                        "edge walk at tet {t} edge {e} crossed into another class"
                    )));
                }
                edge_of[t][e] = id;
                // Step across the exit face.
                let map = tets[t].slot_map(exit);
                let t2 = tets[t].neighbors[exit];
                let (a2, b2) = (map[a], map[b]);
                let enter2 = map[exit];
                let exit2 = 6 - a2 - b2 - enter2;
                (t, a, b, exit, enter) = (t2, a2, b2, exit2, enter2);
                if t == t0
                    && crate::flattening::edge_index(a, b) == e0
                    && exit == exit0
                    && enter == enter0
                {
                    break;
                }
                if incidences.len() > 6 * n {
                    return Err(Error::Parse(
                        "edge walk does not close up (corrupt gluing data)".into(),
                    ));
                }
            }
            classes.push(EdgeClass { incidences });
        }
    }
    Ok((classes, edge_of))
}

/// Union-find of tet corners into 0-simplex classes.
fn vertex_classes(tets: &[Tet]) -> (Vec<[usize; 4]>, usize) {
    let n = tets.len();
    let idx = |t: usize, c: usize| t * 4 + c;
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (t, tet) in tets.iter().enumerate() {
        for f in 0..4 {
            let map = tet.slot_map(f);
            let nb = tet.neighbors[f];
            for c in 0..4 {
                if c == f {
                    continue;
                }
                let (ra, rb) = (
                    find(&mut parent, idx(t, c)),
                    find(&mut parent, idx(nb, map[c])),
                );
                parent[ra] = rb;
            }
        }
    }
    let mut names = std::collections::HashMap::new();
    let mut vertex_of = vec![[0usize; 4]; n];
    for t in 0..n {
        for c in 0..4 {
            let r = find(&mut parent, idx(t, c));
            let next = names.len();
            let v = *names.entry(r).or_insert(next);
            vertex_of[t][c] = v;
        }
    }
    let count = names.len();
    (vertex_of, count)
}

#[cfg(test)]
pub(crate) fn pillow() -> OrderedTriangulation {
    // Two tetrahedra glued along all four faces by the identity slot maps.
    let t0 = Tet {
        neighbors: [1, 1, 1, 1],
        gluings: [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]],
    };
    let t1 = Tet {
        neighbors: [0, 0, 0, 0],
        ..t0.clone()
    };
    OrderedTriangulation::new("pillow".into(), vec![t0, t1], None, Vec::new()).unwrap()
}
