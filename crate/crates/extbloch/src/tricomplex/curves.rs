//! Normal curves and their log-parameters and parities.
//!
//! A normal curve is a closed path missing the 0- and 1-skeleton, crossing
//! 2-faces transversally. Each pass through a tetrahedron enters and leaves
//! through different faces and passes the unique tet edge between them; the
//! `corner` field names which end of that edge the curve runs around (for
//! curves in the star of a vertex, the corner at that vertex).
//!
//! The log-parameter along a star curve is Σ ± ε·l_E with the extra sign +
//! or − as the edge is passed counterclockwise or clockwise viewed from the
//! vertex; the parity is the unsigned mod-2 sum of parity parameters.

use num_complex::Complex64;

use super::links::{LinkSurface, SideRef};
use super::{EdgeClass, OrderedTriangulation};
use crate::error::{Error, Result};
use crate::flattening::{
    edge_index, edge_param, parity_param_of, ExtParam, FlatTriple, EDGE_WTYPE,
};

/// One pass of a normal curve through a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Pass {
    pub tet: usize,
    pub corner: usize,
    pub enter: usize,
    pub exit: usize,
}

impl Pass {
    /// The tet edge this pass runs around: the two slots off the entering
    /// and exiting faces.
    pub fn passed_edge(&self) -> usize {
        let other = 6 - self.enter - self.exit - self.corner;
        edge_index(self.corner, other)
    }

    pub fn wtype(&self) -> usize {
        EDGE_WTYPE[self.passed_edge()]
    }
}

/// A closed normal curve as a cyclic pass sequence.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NormalCurve {
    pub passes: Vec<Pass>,
}

pub(crate) fn validate_curve(tri: &OrderedTriangulation, curve: &NormalCurve) -> Result<()> {
    if curve.passes.is_empty() {
        return Err(Error::Parse("empty normal curve".into()));
    }
    for (k, p) in curve.passes.iter().enumerate() {
        if p.tet >= tri.num_tets()
            || p.enter > 3
            || p.exit > 3
            || p.corner > 3
            || p.enter == p.exit
            || p.corner == p.enter
            || p.corner == p.exit
        {
            return Err(Error::Parse(format!("malformed pass {k}: {p:?}")));
        }
        let map = tri.tets[p.tet].slot_map(p.exit);
        let next = &curve.passes[(k + 1) % curve.passes.len()];
        if next.tet != tri.tets[p.tet].neighbors[p.exit]
            || next.enter != map[p.exit]
            || next.corner != map[p.corner]
        {
            return Err(Error::Parse(format!(
                "passes {k} and {} of a normal curve are not glued face-to-face",
                (k + 1) % curve.passes.len()
            )));
        }
    }
    Ok(())
}

/// The counterclockwise/clockwise sign of a pass, viewed from its corner:
/// with the corner triangle's oriented vertex cycle, a pass whose
/// (enter, exit) sides follow the cycle runs clockwise around the passed
/// vertex.
pub(crate) fn pass_dir(tri: &OrderedTriangulation, p: &Pass) -> i64 {
    let cy = tri.corner_cycle(p.tet, p.corner);
    let pos = |x: usize| cy.iter().position(|&v| v == x).expect("slot in cycle");
    let (a, b) = (pos(p.enter), pos(p.exit));
    if (a + 1) % 3 == b {
        -1
    } else {
        1
    }
}

/// Signed coefficient of a pass in log-parameter sums: (ccw/cw sign) · ε.
pub(crate) fn pass_coeff(tri: &OrderedTriangulation, p: &Pass) -> i64 {
    pass_dir(tri, p) * tri.orientation_signs()[p.tet]
}

/// Log-parameter along a normal curve: Σ ±ε·l_E over passed edges.
pub fn log_holonomy(
    tri: &OrderedTriangulation,
    curve: &NormalCurve,
    flats: &[FlatTriple],
) -> Complex64 {
    curve
        .passes
        .iter()
        .map(|p| edge_param(&flats[p.tet], p.passed_edge()) * pass_coeff(tri, p) as f64)
        .sum()
}

/// Parity along a normal curve: the unsigned sum Σ δ_E mod 2.
pub fn parity_along(tri: &OrderedTriangulation, curve: &NormalCurve, params: &[ExtParam]) -> u8 {
    let _ = tri;
    curve
        .passes
        .iter()
        .map(|p| parity_param_of(&params[p.tet], p.wtype()))
        .fold(0u8, |s, v| s ^ (v & 1))
}

/// A loop once around an edge class, with corners transported along the
/// gluings so every pass views the edge from the same end.
pub fn edge_loop(tri: &OrderedTriangulation, class: &EdgeClass) -> NormalCurve {
    let first = &class.incidences[0];
    let (a, _b) = crate::flattening::EDGE_VERTS[first.edge];
    let mut corner = a;
    let mut passes = Vec::with_capacity(class.valence());
    for inc in &class.incidences {
        let verts = crate::flattening::EDGE_VERTS[inc.edge];
        assert!(
            corner == verts.0 || corner == verts.1,
            "corner transport left the edge"
        );
        passes.push(Pass {
            tet: inc.tet,
            corner,
            enter: inc.enter_face,
            exit: inc.exit_face,
        });
        let map = tri.tets[inc.tet].slot_map(inc.exit_face);
        corner = map[corner];
    }
    NormalCurve { passes }
}

/// A cycle basis of the face-pairing dual graph, lifted to normal curves.
pub fn dual_cycle_basis(tri: &OrderedTriangulation) -> Vec<NormalCurve> {
    let n = tri.num_tets();
    // Spanning tree over the dual graph; self-gluings are never tree edges.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (tet, face into parent)
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut order = vec![0usize];
    let mut tree_gluings: std::collections::HashSet<(usize, usize)> =
        std::collections::HashSet::new();
    let mut qi = 0;
    while qi < order.len() {
        let t = order[qi];
        qi += 1;
        for f in 0..4 {
            let nb = tri.tets[t].neighbors[f];
            if !seen[nb] {
                seen[nb] = true;
                let f2 = tri.tets[t].slot_map(f)[f];
                parent[nb] = Some((t, f2));
                tree_gluings.insert((t, f));
                tree_gluings.insert((nb, f2));
                order.push(nb);
            }
        }
    }

    // Face sequence from the root to a tet (faces to cross, in order).
    let path_down = |mut t: usize| -> Vec<(usize, usize)> {
        let mut segs = Vec::new();
        while let Some((up, face_back)) = parent[t] {
            let f_up = tri.tets[t].slot_map(face_back)[face_back];
            segs.push((up, f_up)); // crossing (up, f_up) lands in t
            t = up;
        }
        segs.reverse();
        segs
    };

    let mut curves = Vec::new();
    let mut used: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    for t in 0..n {
        for f in 0..4 {
            if tree_gluings.contains(&(t, f)) || used.contains(&(t, f)) {
                continue;
            }
            used.insert((t, f));
            let nb = tri.tets[t].neighbors[f];
            let f2 = tri.tets[t].slot_map(f)[f];
            used.insert((nb, f2));
            // Loop: root → t, chord (t,f), nb → root.
            let mut crossings: Vec<(usize, usize)> = path_down(t);
            crossings.push((t, f));
            let mut up = path_down(nb);
            up.reverse();
            for (tt, ff) in up {
                // Cross the tree edge in the opposite direction.
                let nb2 = tri.tets[tt].neighbors[ff];
                let f_back = tri.tets[tt].slot_map(ff)[ff];
                crossings.push((nb2, f_back));
            }
            // Cancel immediate backtracks.
            let partner = |(tt, ff): (usize, usize)| -> (usize, usize) {
                (tri.tets[tt].neighbors[ff], tri.tets[tt].slot_map(ff)[ff])
            };
            let mut stack: Vec<(usize, usize)> = Vec::new();
            for s in crossings {
                if stack.last().is_some_and(|&top| partner(top) == s) {
                    stack.pop();
                } else {
                    stack.push(s);
                }
            }
            while stack.len() >= 2 && partner(*stack.last().unwrap()) == stack[0] {
                stack.pop();
                stack.remove(0);
            }
            if stack.is_empty() {
                continue;
            }
            let m = stack.len();
            let mut passes = Vec::with_capacity(m);
            let mut ok = true;
            for k in 0..m {
                let (pt, pf) = partner(stack[k]);
                let (et, ef) = stack[(k + 1) % m];
                if pt != et || pf == ef {
                    ok = false;
                    break;
                }
                // Corner: either end of the passed edge; pick the smaller.
                let corner = (0..4).find(|&c| c != pf && c != ef).unwrap();
                passes.push(Pass {
                    tet: et,
                    corner,
                    enter: pf,
                    exit: ef,
                });
            }
            if ok {
                curves.push(NormalCurve { passes });
            }
        }
    }
    curves
}

/// Dual-graph cycles plus one loop around each edge class: parities on these
/// generate parities on all normal paths once the edge conditions hold.
pub fn normal_loop_basis(tri: &OrderedTriangulation) -> Vec<NormalCurve> {
    let mut curves = dual_cycle_basis(tri);
    for class in tri.edge_classes() {
        curves.push(edge_loop(tri, class));
    }
    curves
}

/// Pairing of a normal curve on a link surface with a cocycle (an integer
/// vector over side classes): the signed sum over side crossings.
pub(crate) fn curve_cocycle_pairing(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
    phi: &[i64],
    curve: &NormalCurve,
) -> i64 {
    let mut total = 0i64;
    for p in &curve.passes {
        let s = SideRef {
            tet: p.tet,
            corner: p.corner,
            face: p.exit,
        };
        let class = surface.side_class_of(s);
        if phi[class] == 0 {
            continue;
        }
        // Crossing sign: +1 when exiting through the side whose canonical
        // direction this triangle induces positively.
        let sign = exit_sign(tri, surface, s);
        total += sign * phi[class];
    }
    total
}

fn exit_sign(tri: &OrderedTriangulation, surface: &LinkSurface, s: SideRef) -> i64 {
    let rep = surface.side_classes[surface.side_class_of(s)];
    // Direction induced by the triangle being exited.
    let cy = tri.corner_cycle(s.tet, s.corner);
    let dirs = [
        (cy[2], (cy[0], cy[1])),
        (cy[0], (cy[1], cy[2])),
        (cy[1], (cy[2], cy[0])),
    ];
    let (mut u, mut v) = dirs
        .iter()
        .find(|(j, _)| *j == s.face)
        .map(|(_, d)| *d)
        .expect("side of triangle");
    let mut cur = s;
    if cur != rep {
        let map = tri.tets[cur.tet].slot_map(cur.face);
        u = map[u];
        v = map[v];
        cur = super::links::side_partner(tri, cur);
    }
    assert_eq!(cur, rep);
    let crep = tri.corner_cycle(rep.tet, rep.corner);
    let canon = [
        (crep[2], (crep[0], crep[1])),
        (crep[0], (crep[1], crep[2])),
        (crep[1], (crep[2], crep[0])),
    ]
    .iter()
    .find(|(j, _)| *j == rep.face)
    .map(|(_, d)| *d)
    .expect("side of rep triangle");
    if (u, v) == canon {
        1
    } else {
        -1
    }
}

/// Which w-component each pass or edge incidence contributes, with its
/// signed multiplicity; assembled into the linear rows used by both the
/// shape solver (coefficients on log z, log(1−z)) and the flattening solver
/// (coefficients on p, q).
#[derive(Debug, Clone)]
pub struct Row {
    /// (tet, wtype, signed count).
    pub entries: Vec<(usize, usize, i64)>,
    pub descriptor: String,
}

impl Row {
    fn push(&mut self, tet: usize, wtype: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        if let Some(e) = self
            .entries
            .iter_mut()
            .find(|(t, w, _)| *t == tet && *w == wtype)
        {
            e.2 += coeff;
            return;
        }
        self.entries.push((tet, wtype, coeff));
    }

    /// Coefficients on (log zᵢ, log(1−z)ᵢ) per tet:
    /// w₀ = λ, w₁ = −μ, w₂ = μ − λ.
    pub fn lambda_mu_coeffs(&self, n: usize) -> Vec<(i64, i64)> {
        let mut out = vec![(0i64, 0i64); n];
        for &(t, w, c) in &self.entries {
            match w {
                0 => out[t].0 += c,
                1 => out[t].1 -= c,
                _ => {
                    out[t].0 -= c;
                    out[t].1 += c;
                }
            }
        }
        out
    }

    /// Coefficients on (pᵢ, qᵢ) per tet: w₀ → p, w₁ → q, w₂ → −(p+q).
    pub fn pq_coeffs(&self, n: usize) -> Vec<(i64, i64)> {
        let mut out = vec![(0i64, 0i64); n];
        for &(t, w, c) in &self.entries {
            match w {
                0 => out[t].0 += c,
                1 => out[t].1 += c,
                _ => {
                    out[t].0 -= c;
                    out[t].1 -= c;
                }
            }
        }
        out
    }

    /// The signed sum of tracked log w-components.
    pub fn log_value(&self, logs: &[(Complex64, Complex64)]) -> Complex64 {
        self.entries
            .iter()
            .map(|&(t, w, c)| {
                let (lam, mu) = logs[t];
                let comp = match w {
                    0 => lam,
                    1 => -mu,
                    _ => mu - lam,
                };
                comp * c as f64
            })
            .sum()
    }

    /// Σ over w₂-entries of coeff · ε (enters the geometric target of the
    /// row: principal log z″ differs from μ−λ by ε·iπ at a geometric
    /// solution).
    pub fn w2_weight(&self, signs: &[i64]) -> i64 {
        self.entries
            .iter()
            .filter(|(_, w, _)| *w == 2)
            .map(|&(t, _, c)| c * signs[t])
            .sum()
    }
}

/// Row of an edge class: every incidence contributes ε·(its w-component).
pub fn edge_row(tri: &OrderedTriangulation, class_index: usize) -> Row {
    let class = &tri.edge_classes()[class_index];
    let mut row = Row {
        entries: Vec::new(),
        descriptor: format!("edge {class_index}"),
    };
    for inc in &class.incidences {
        row.push(
            inc.tet,
            EDGE_WTYPE[inc.edge],
            tri.orientation_signs()[inc.tet],
        );
    }
    row
}

/// Row of a normal curve: each pass contributes (±ε)·(its w-component).
pub fn curve_row(tri: &OrderedTriangulation, curve: &NormalCurve, descriptor: &str) -> Row {
    let mut row = Row {
        entries: Vec::new(),
        descriptor: descriptor.to_string(),
    };
    for p in &curve.passes {
        row.push(p.tet, p.wtype(), pass_coeff(tri, p));
    }
    row
}

#[cfg(test)]
mod tests {
    use super::super::pillow;
    use super::*;

    #[test]
    fn edge_loops_have_constant_direction() {
        let tri = pillow();
        for class in tri.edge_classes() {
            let curve = edge_loop(&tri, class);
            validate_curve(&tri, &curve).unwrap();
            let dirs: Vec<i64> = curve.passes.iter().map(|p| pass_dir(&tri, p)).collect();
            assert!(
                dirs.iter().all(|&d| d == dirs[0]),
                "edge loop changes direction: {dirs:?}"
            );
        }
    }

    #[test]
    fn dual_cycles_close_up() {
        let tri = pillow();
        let cycles = dual_cycle_basis(&tri);
        // 4 gluings, 2 tets, connected: rank 3.
        assert_eq!(cycles.len(), 3);
        for c in &cycles {
            validate_curve(&tri, c).unwrap();
        }
    }

    #[test]
    fn edge_row_of_pillow() {
        let tri = pillow();
        // Valence-2 classes, one incidence per tet, ε = (+1, −1).
        let row = edge_row(&tri, 0);
        let pq = row.pq_coeffs(2);
        assert_eq!(pq[0].0 + pq[1].0, 0);
        assert_eq!(pq[0].1 + pq[1].1, 0);
    }
}
