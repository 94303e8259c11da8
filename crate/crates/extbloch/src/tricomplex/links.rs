//! Vertex links: the surface seen by each 0-simplex, with genus detection
//! and a homology toolkit for picking cusp curves.
//!
//! The link of a vertex class is assembled from corner triangles, one per
//! incident tet corner. The corner triangle at (t, c) has its vertices and
//! sides both indexed by the slots ≠ c: vertex x sits on the tet edge
//! {c, x}, and side j (opposite vertex j) lies on face j. Crossing side j
//! applies the face-j slot map.
//!
//! Orientation bookkeeping: each triangle carries the cyclic vertex order
//! [`OrderedTriangulation::corner_cycle`]; consistency requires every glued
//! side to receive opposite boundary orientations from its two triangles,
//! which is asserted during construction.

use num_bigint::BigInt;
use num_traits::Zero;

use super::curves::{curve_cocycle_pairing, NormalCurve, Pass};
use super::{CuspSpec, OrderedTriangulation};
use crate::error::{Error, Result};
use crate::zsolve::{hermite_normal_form, solve_integer, IntMatrix};

/// Classification of a vertex link by genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkClass {
    /// Genus 0: a manifold point.
    Material,
    /// Genus 1: an ideal (cusp) vertex of an unlabeled triangulation, or a
    /// torus material vertex of a labeled one.
    Cusp,
    /// Genus ≥ 2: only supported through strong-flattening rows.
    HigherGenus,
}

/// The link surface of one 0-simplex.
#[derive(Debug, Clone)]
pub struct VertexLink {
    pub vertex: usize,
    /// Corner triangles (tet, corner).
    pub corners: Vec<(usize, usize)>,
    pub euler: i64,
    pub genus: usize,
    pub class: LinkClass,
}

/// A side of a corner triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct SideRef {
    pub tet: usize,
    pub corner: usize,
    pub face: usize,
}

pub(crate) fn side_partner(tri: &OrderedTriangulation, s: SideRef) -> SideRef {
    let map = tri.tets[s.tet].slot_map(s.face);
    SideRef {
        tet: tri.tets[s.tet].neighbors[s.face],
        corner: map[s.corner],
        face: map[s.face],
    }
}

/// Combinatorics of one link surface, used for homology computations.
pub(crate) struct LinkSurface {
    pub vertex: usize,
    pub triangles: Vec<(usize, usize)>,
    /// Side classes: canonical rep is the lexicographically smaller SideRef.
    pub side_classes: Vec<SideRef>,
    pub side_index: std::collections::HashMap<SideRef, usize>,
    /// Link-vertex orbit of each (tet, corner, x).
    pub point_index: std::collections::HashMap<(usize, usize, usize), usize>,
    pub num_points: usize,
}

impl LinkSurface {
    pub fn side_class_of(&self, s: SideRef) -> usize {
        self.side_index[&s]
    }
}

pub(crate) fn build_surface(tri: &OrderedTriangulation, vertex: usize) -> Result<LinkSurface> {
    let mut triangles = Vec::new();
    for t in 0..tri.num_tets() {
        for c in 0..4 {
            if tri.vertex_class_of(t, c) == vertex {
                triangles.push((t, c));
            }
        }
    }
    // Side classes.
    let mut side_index = std::collections::HashMap::new();
    let mut side_classes = Vec::new();
    for &(t, c) in &triangles {
        for j in 0..4 {
            if j == c {
                continue;
            }
            let s = SideRef {
                tet: t,
                corner: c,
                face: j,
            };
            if side_index.contains_key(&s) {
                continue;
            }
            let p = side_partner(tri, s);
            let id = side_classes.len();
            side_classes.push(s.min(p));
            side_index.insert(s, id);
            side_index.insert(p, id);
        }
    }
    // Link-vertex orbits: (t,c,x) crossing side j ∈ slots∖{c,x}.
    let mut pt_ids: std::collections::HashMap<(usize, usize, usize), usize> =
        std::collections::HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut id_of = |key: (usize, usize, usize), parent: &mut Vec<usize>| -> usize {
        if let Some(&i) = pt_ids.get(&key) {
            return i;
        }
        let i = parent.len();
        pt_ids.insert(key, i);
        parent.push(i);
        i
    };
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(t, c) in &triangles {
        for x in 0..4 {
            if x == c {
                continue;
            }
            let a = id_of((t, c, x), &mut parent);
            for j in 0..4 {
                if j == c || j == x {
                    continue;
                }
                let map = tri.tets[t].slot_map(j);
                let nb = tri.tets[t].neighbors[j];
                let b = id_of((nb, map[c], map[x]), &mut parent);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut canon: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut point_index = std::collections::HashMap::new();
    let keys: Vec<_> = {
        let mut v: Vec<_> = pt_ids.iter().map(|(k, v)| (*k, *v)).collect();
        v.sort();
        v
    };
    for (key, raw) in keys {
        let r = find(&mut parent, raw);
        let next = canon.len();
        let id = *canon.entry(r).or_insert(next);
        point_index.insert(key, id);
    }
    let num_points = canon.len();

    let surface = LinkSurface {
        vertex,
        triangles,
        side_classes,
        side_index,
        point_index,
        num_points,
    };
    check_side_orientations(tri, &surface)?;
    Ok(surface)
}

/// Directed boundary sides of triangle (t,c): with vertex cycle (x1,x2,x3),
/// ∂T = (x1→x2) on side x3 + (x2→x3) on side x1 + (x3→x1) on side x2.
fn boundary_sides(tri: &OrderedTriangulation, t: usize, c: usize) -> [(usize, (usize, usize)); 3] {
    let cy = tri.corner_cycle(t, c);
    [
        (cy[2], (cy[0], cy[1])),
        (cy[0], (cy[1], cy[2])),
        (cy[1], (cy[2], cy[0])),
    ]
}

/// Canonical direction (u→v slot pair, in the canonical rep's labels) of a
/// side class.
fn canonical_direction(tri: &OrderedTriangulation, rep: SideRef) -> (usize, usize) {
    boundary_sides(tri, rep.tet, rep.corner)
        .iter()
        .find(|(j, _)| *j == rep.face)
        .map(|(_, d)| *d)
        .expect("side exists")
}

/// Coefficient [s : ∂T] of a side class in the boundary of triangle (t,c),
/// accumulated over the triangle's three sides.
fn side_coefficient(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
    t: usize,
    c: usize,
    class: usize,
) -> i64 {
    let rep = surface.side_classes[class];
    let canon_dir = canonical_direction(tri, rep);
    let mut total = 0i64;
    for (j, (u, v)) in boundary_sides(tri, t, c) {
        let s = SideRef {
            tet: t,
            corner: c,
            face: j,
        };
        if surface.side_class_of(s) != class {
            continue;
        }
        // Map this side's directed pair into the canonical rep's labels.
        let (mut uu, mut vv) = (u, v);
        let mut cur = s;
        if cur != rep {
            let map = tri.tets[cur.tet].slot_map(cur.face);
            uu = map[uu];
            vv = map[vv];
            cur = side_partner(tri, cur);
        }
        assert_eq!(cur, rep, "side class transport failed");
        total += if (uu, vv) == canon_dir {
            1
        } else if (vv, uu) == canon_dir {
            -1
        } else {
            unreachable!("directed pair does not match the side")
        };
    }
    total
}

/// Every side class must receive opposite orientations from its two
/// triangle appearances; this validates the corner-cycle conventions.
fn check_side_orientations(tri: &OrderedTriangulation, surface: &LinkSurface) -> Result<()> {
    for class in 0..surface.side_classes.len() {
        let mut total = 0i64;
        for &(t, c) in &surface.triangles {
            total += side_coefficient(tri, surface, t, c, class);
        }
        if total != 0 {
            return Err(Error::Parse(format!(
                "link of vertex {} is not coherently oriented at a side (sum {total})",
                surface.vertex
            )));
        }
    }
    Ok(())
}

pub(crate) fn compute_links_impl(tri: &OrderedTriangulation) -> Result<Vec<VertexLink>> {
    let mut out = Vec::new();
    for v in 0..tri.num_vertices() {
        let surface = build_surface(tri, v)?;
        let f = surface.triangles.len() as i64;
        let e = 3 * f / 2;
        let vtx = surface.num_points as i64;
        let euler = vtx - e + f;
        if euler > 2 || euler % 2 != 0 {
            return Err(Error::Parse(format!(
                "link of vertex {v} has Euler characteristic {euler}"
            )));
        }
        let genus = ((2 - euler) / 2) as usize;
        let class = match genus {
            0 => LinkClass::Material,
            1 => LinkClass::Cusp,
            _ => LinkClass::HigherGenus,
        };
        out.push(VertexLink {
            vertex: v,
            corners: surface.triangles.clone(),
            euler,
            genus,
            class,
        });
    }
    Ok(out)
}

/// A basis of H¹ of the link surface, as integer vectors over side classes.
/// Length 2g; empty for spheres.
pub(crate) fn cocycle_basis(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
) -> Result<Vec<Vec<i64>>> {
    let n_sides = surface.side_classes.len();
    let n_tris = surface.triangles.len();
    // δ¹: C¹ → C², matrix n_tris × n_sides.
    let mut d1 = IntMatrix::zero(n_tris, n_sides);
    for (ti, &(t, c)) in surface.triangles.iter().enumerate() {
        for s in 0..n_sides {
            let coeff = side_coefficient(tri, surface, t, c, s);
            if coeff != 0 {
                d1[(ti, s)] = BigInt::from(coeff);
            }
        }
    }
    let zero = vec![BigInt::zero(); n_tris];
    let (_, kernel) = solve_integer(&d1, &zero).expect("homogeneous system");
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let m = kernel.len();
    // δ⁰: for each link vertex class w, the coboundary cochain
    // s ↦ [head(s) = w] − [tail(s) = w].
    let mut kmat = IntMatrix::zero(n_sides, m);
    for (j, k) in kernel.iter().enumerate() {
        for i in 0..n_sides {
            kmat[(i, j)] = k[i].clone();
        }
    }
    let mut b_cols: Vec<Vec<BigInt>> = Vec::new();
    for w in 0..surface.num_points {
        let mut col = vec![BigInt::zero(); n_sides];
        for (s, rep) in surface.side_classes.iter().enumerate() {
            let (u, v) = canonical_direction(tri, *rep);
            let head = surface.point_index[&(rep.tet, rep.corner, v)];
            let tail = surface.point_index[&(rep.tet, rep.corner, u)];
            let mut val = BigInt::zero();
            if head == w {
                val += 1;
            }
            if tail == w {
                val -= 1;
            }
            col[s] = val;
        }
        // Express in kernel coordinates (coboundaries are cocycles).
        let (coords, _) = solve_integer(&kmat, &col)
            .map_err(|_| Error::Parse("coboundary not a cocycle".into()))?;
        b_cols.push(coords);
    }
    // Quotient Z^m / span(b_cols): row HNF of the generator matrix.
    let mut bt = IntMatrix::zero(b_cols.len(), m);
    for (i, col) in b_cols.iter().enumerate() {
        for j in 0..m {
            bt[(i, j)] = col[j].clone();
        }
    }
    let (h, _) = hermite_normal_form(&bt);
    let mut pivots = Vec::new();
    for i in 0..h.rows {
        if let Some(j) = (0..m).find(|&j| !h[(i, j)].is_zero()) {
            if h[(i, j)] != BigInt::from(1) {
                return Err(Error::Parse("unexpected torsion in link cohomology".into()));
            }
            pivots.push(j);
        }
    }
    let free: Vec<usize> = (0..m).filter(|j| !pivots.contains(j)).collect();
    // Each free kernel coordinate direction lifts to the kernel basis vector.
    let mut basis = Vec::new();
    for j in free {
        let phi: Vec<i64> = kernel[j]
            .iter()
            .map(|v| i64::try_from(v).expect("small cocycle entries"))
            .collect();
        basis.push(phi);
    }
    Ok(basis)
}

/// H¹-pairing coordinates of a normal curve on the given link.
pub(crate) fn curve_coords(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
    basis: &[Vec<i64>],
    curve: &NormalCurve,
) -> Vec<i64> {
    basis
        .iter()
        .map(|phi| curve_cocycle_pairing(tri, surface, phi, curve))
        .collect()
}

/// Candidate simple closed normal curves on a link: smoothed fundamental
/// loops of a spanning tree of the triangle adjacency graph, sorted by
/// length then lexicographically.
pub(crate) fn candidate_curves(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
) -> Vec<NormalCurve> {
    let n = surface.triangles.len();
    let tri_id: std::collections::HashMap<(usize, usize), usize> = surface
        .triangles
        .iter()
        .enumerate()
        .map(|(i, &tc)| (tc, i))
        .collect();
    // BFS tree: parent edge = (side crossed to reach this triangle).
    let mut parent: Vec<Option<(usize, SideRef)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut tree_sides: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut qi = 0;
    while qi < order.len() {
        let cur = order[qi];
        qi += 1;
        let (t, c) = surface.triangles[cur];
        for j in 0..4 {
            if j == c {
                continue;
            }
            let s = SideRef {
                tet: t,
                corner: c,
                face: j,
            };
            let p = side_partner(tri, s);
            let other = tri_id[&(p.tet, p.corner)];
            if !seen[other] {
                seen[other] = true;
                parent[other] = Some((cur, s));
                tree_sides.insert(surface.side_class_of(s));
                order.push(other);
            }
        }
    }
    // Fundamental loops for non-tree sides.
    let mut curves = Vec::new();
    let mut used_chords: std::collections::HashSet<usize> = std::collections::HashSet::new();
    for &(t, c) in &surface.triangles {
        for j in 0..4 {
            if j == c {
                continue;
            }
            let s = SideRef {
                tet: t,
                corner: c,
                face: j,
            };
            let class = surface.side_class_of(s);
            if tree_sides.contains(&class) || used_chords.contains(&class) {
                continue;
            }
            used_chords.insert(class);
            if let Some(curve) = fundamental_loop(tri, surface, &tri_id, &parent, s) {
                curves.push(curve);
            }
        }
    }
    curves.sort_by_key(|c| {
        (
            c.passes.len(),
            c.passes
                .iter()
                .map(|p| (p.tet, p.corner, p.enter, p.exit))
                .collect::<Vec<_>>(),
        )
    });
    curves
}

/// Tree path from the root to each triangle, as a list of sides to cross.
fn path_to_root(parent: &[Option<(usize, SideRef)>], mut node: usize) -> Vec<SideRef> {
    let mut sides = Vec::new();
    while let Some((up, via)) = parent[node] {
        sides.push(via); // crossing `via` goes from `up` to `node`
        node = up;
    }
    sides
}

/// The loop: root → ... → tri(s) → cross s → tri(partner) → ... → root,
/// smoothed by cancelling immediate backtracks, returned as normal passes.
fn fundamental_loop(
    tri: &OrderedTriangulation,
    surface: &LinkSurface,
    tri_id: &std::collections::HashMap<(usize, usize), usize>,
    parent: &[Option<(usize, SideRef)>],
    chord: SideRef,
) -> Option<NormalCurve> {
    let from = tri_id[&(chord.tet, chord.corner)];
    let p = side_partner(tri, chord);
    let to = tri_id[&(p.tet, p.corner)];
    // Sides crossed in order, as refs in the triangle being exited.
    let mut crossings: Vec<SideRef> = Vec::new();
    let mut down = path_to_root(parent, from);
    down.reverse(); // root → from: cross each stored side forward
    crossings.extend(down);
    crossings.push(chord);
    // to → root: cross each parent side backwards (from the partner side).
    for s in path_to_root(parent, to) {
        crossings.push(side_partner(tri, s));
    }
    // Cancel immediate backtracks s, partner(s).
    let mut stack: Vec<SideRef> = Vec::new();
    for s in crossings {
        if let Some(top) = stack.last() {
            if side_partner(tri, *top) == s {
                stack.pop();
                continue;
            }
        }
        stack.push(s);
    }
    // Wrap-around cancellation.
    while stack.len() >= 2 && side_partner(tri, stack[stack.len() - 1]) == stack[0] {
        stack.pop();
        stack.remove(0);
    }
    if stack.is_empty() {
        return None;
    }
    // Consecutive crossings exit(k) and exit(k+1) happen in the triangle
    // entered through partner(exit(k)).
    let m = stack.len();
    let mut passes = Vec::with_capacity(m);
    for k in 0..m {
        let entered = side_partner(tri, stack[k]);
        let exit = stack[(k + 1) % m];
        if (entered.tet, entered.corner) != (exit.tet, exit.corner) || entered.face == exit.face {
            return None; // not a clean normal curve
        }
        passes.push(Pass {
            tet: exit.tet,
            corner: exit.corner,
            enter: entered.face,
            exit: exit.face,
        });
    }
    // Rotate so the lexicographically smallest pass comes first.
    let min_at = (0..passes.len())
        .min_by_key(|&i| {
            let p: &Pass = &passes[i];
            (p.tet, p.corner, p.enter, p.exit)
        })
        .unwrap();
    passes.rotate_left(min_at);
    let _ = surface;
    Some(NormalCurve { passes })
}

/// Meridian and longitude of a torus link: the user-specified curves when
/// the document carries them, otherwise a shortest-first homology basis with
/// pairing determinant ±1.
pub fn cusp_basis(
    tri: &OrderedTriangulation,
    vertex: usize,
    specs: &[CuspSpec],
) -> Result<(NormalCurve, NormalCurve)> {
    let link = tri
        .vertex_links()
        .iter()
        .find(|l| l.vertex == vertex)
        .ok_or_else(|| Error::Parse(format!("no vertex {vertex}")))?;
    if link.genus != 1 {
        return Err(Error::Unsupported(format!(
            "vertex {vertex} has genus {} link; cusp basis needs a torus",
            link.genus
        )));
    }
    if let Some(spec) = specs.iter().find(|s| s.vertex == vertex) {
        return Ok((spec.meridian.clone(), spec.longitude.clone()));
    }
    let surface = build_surface(tri, vertex)?;
    let basis = cocycle_basis(tri, &surface)?;
    if basis.len() != 2 {
        return Err(Error::Parse("torus link with H^1 rank != 2".into()));
    }
    let candidates = candidate_curves(tri, &surface);
    let with_coords: Vec<(NormalCurve, Vec<i64>)> = candidates
        .into_iter()
        .map(|c| {
            let co = curve_coords(tri, &surface, &basis, &c);
            (c, co)
        })
        .collect();
    let meridian = with_coords
        .iter()
        .find(|(_, co)| co.iter().any(|&x| x != 0))
        .ok_or_else(|| Error::Parse("no homologically nontrivial curve found".into()))?;
    for (c, co) in &with_coords {
        let det = meridian.1[0] * co[1] - meridian.1[1] * co[0];
        if det.abs() == 1 {
            return Ok((meridian.0.clone(), c.clone()));
        }
    }
    Err(Error::Parse(
        "no unimodular curve pair among candidates; supply cusp curves explicitly".into(),
    ))
}
