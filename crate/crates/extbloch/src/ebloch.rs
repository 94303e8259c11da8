//! Formal elements of the extended pre-Bloch group.
//!
//! Elements are finite Z-linear combinations of cover points [z;p,q]. The
//! defining relations (the lifted five-term relation and the transfer
//! relation) are not canonicalized away; equality is term-wise after
//! normalization, with two weaker comparators (R-congruence mod π², and
//! equality of the projections to the ordinary pre-Bloch group).
//!
//! A lifted five-term instance is parameterized by (x, y) and five branch
//! pairs constrained to the subspace V:
//!
//!   p₂ = p₁−p₀, p₃ = p₁−p₀+q₁−q₀, q₃ = q₂−q₁, p₄ = q₁−q₀, q₄ = q₂−q₁−p₀,
//!
//! equivalently by the vanishing of the ten adjusted-angle sums at the edges
//! of the five ideal simplices spanned by five boundary points.

use num_complex::Complex64;

use crate::branchlog::{mod_pi2, ModPiSquared};
use crate::error::{Error, Result};
use crate::flattening::{
    cross_ratio, edge_index, edge_param, ell, BoundaryPoint, ExtParam, FlatTriple,
};

const PI: f64 = std::f64::consts::PI;

/// A formal Z-linear combination of cover points.
#[derive(Debug, Clone, Default)]
pub struct BlochSum {
    terms: Vec<(i64, ExtParam)>,
}

fn same_param(a: &ExtParam, b: &ExtParam) -> bool {
    let (a, b) = (a.canonical(), b.canonical());
    (a.z - b.z).norm() < 1e-12 && a.p == b.p && a.q == b.q && a.side == b.side
}

impl BlochSum {
    pub fn new(terms: Vec<(i64, ExtParam)>) -> BlochSum {
        BlochSum { terms }.normalized()
    }

    pub fn empty() -> BlochSum {
        BlochSum { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(i64, ExtParam)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge identical params and drop zero coefficients.
    pub fn normalized(&self) -> BlochSum {
        let mut out: Vec<(i64, ExtParam)> = Vec::new();
        for (c, p) in &self.terms {
            if let Some(slot) = out.iter_mut().find(|(_, q)| same_param(q, p)) {
                slot.0 += c;
            } else {
                out.push((*c, *p));
            }
        }
        out.retain(|(c, _)| *c != 0);
        BlochSum { terms: out }
    }

    pub fn add(&self, other: &BlochSum) -> BlochSum {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        BlochSum::new(terms)
    }

    pub fn neg(&self) -> BlochSum {
        BlochSum {
            terms: self.terms.iter().map(|(c, p)| (-c, *p)).collect(),
        }
    }

    /// Σ coef · R(z;p,q) as a plain complex number (pre mod-π² reduction).
    pub fn r_value_raw(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, p)| p.r_value() * *c as f64)
            .sum()
    }

    /// Term-wise equality after normalization.
    pub fn eq_termwise(&self, other: &BlochSum) -> bool {
        let a = self.normalized();
        let mut b = other.normalized().terms;
        if a.terms.len() != b.len() {
            return false;
        }
        for (c, p) in &a.terms {
            match b.iter().position(|(d, q)| d == c && same_param(p, q)) {
                Some(i) => {
                    b.remove(i);
                }
                None => return false,
            }
        }
        true
    }

    /// R-congruence mod π² at tolerance `tol`.
    pub fn r_congruent(&self, other: &BlochSum, tol: f64) -> bool {
        r_of_sum(self).congruent(&r_of_sum(other), tol)
    }

    /// Equality of the projections to the ordinary pre-Bloch group
    /// (branch data forgotten).
    pub fn projects_eq(&self, other: &BlochSum) -> bool {
        let strip = |s: &BlochSum| {
            let mut out: Vec<(i64, Complex64)> = Vec::new();
            for (c, p) in &s.terms {
                if let Some(slot) = out.iter_mut().find(|(_, z)| (*z - p.z).norm() < 1e-12) {
                    slot.0 += c;
                } else {
                    out.push((*c, p.z));
                }
            }
            out.retain(|(c, _)| *c != 0);
            out
        };
        let a = strip(&self.normalized());
        let mut b = strip(&other.normalized());
        if a.len() != b.len() {
            return false;
        }
        for (c, z) in a {
            match b
                .iter()
                .position(|(d, w)| *d == c && (*w - z).norm() < 1e-12)
            {
                Some(i) => {
                    b.remove(i);
                }
                None => return false,
            }
        }
        true
    }
}

/// R evaluated on a formal sum, reduced mod π².
pub fn r_of_sum(s: &BlochSum) -> ModPiSquared {
    mod_pi2(s.r_value_raw())
}

/// χ(w) = [w;0,1] − [w;0,0]. χ(1) is the zero element (empty sum).
pub fn chi(w: Complex64) -> Result<BlochSum> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("chi(0) undefined".into()));
    }
    if w == Complex64::new(1.0, 0.0) {
        return Ok(BlochSum::empty());
    }
    Ok(BlochSum::new(vec![
        (1, ExtParam::new(w, 0, 1)?),
        (-1, ExtParam::new(w, 0, 0)?),
    ]))
}

/// Transfer normal form: [x;p,q] =
/// pq[x;1,1] − (pq−p)[x;1,0] − (pq−q)[x;0,1] + (pq−p−q+1)[x;0,0].
pub fn transfer_expand(param: &ExtParam) -> BlochSum {
    let (p, q) = (param.p, param.q);
    let pq = p * q;
    let mk = |pp: i64, qq: i64| ExtParam {
        p: pp,
        q: qq,
        ..*param
    };
    BlochSum::new(vec![
        (pq, mk(1, 1)),
        (-(pq - p), mk(1, 0)),
        (-(pq - q), mk(0, 1)),
        (pq - p - q + 1, mk(0, 0)),
    ])
}

/// A lifted five-term instance: shapes (x, y, y/x, (1−x⁻¹)/(1−y⁻¹),
/// (1−x)/(1−y)) with five branch pairs.
#[derive(Debug, Clone)]
pub struct FiveTermInstance {
    pub x: Complex64,
    pub y: Complex64,
    pub shapes: [Complex64; 5],
    pub branches: [(i64, i64); 5],
}

fn five_shapes(x: Complex64, y: Complex64) -> Result<[Complex64; 5]> {
    let one = Complex64::new(1.0, 0.0);
    if (x - y).norm() < 1e-12 {
        return Err(Error::Degenerate("five-term requires x != y".into()));
    }
    let shapes = [
        x,
        y,
        y / x,
        (one - x.inv()) / (one - y.inv()),
        (one - x) / (one - y),
    ];
    for (i, s) in shapes.iter().enumerate() {
        if s.norm() < 1e-12 || (s - one).norm() < 1e-12 {
            return Err(Error::Degenerate(format!(
                "five-term shape x{i} = {s} degenerate"
            )));
        }
    }
    Ok(shapes)
}

/// Construct the instance with branch data on the subspace V, parameterized
/// by (p₀,q₀,p₁,q₁,q₂).
pub fn five_term_instance(
    x: Complex64,
    y: Complex64,
    p0: i64,
    q0: i64,
    p1: i64,
    q1: i64,
    q2: i64,
) -> Result<FiveTermInstance> {
    let shapes = five_shapes(x, y)?;
    let branches = [
        (p0, q0),
        (p1, q1),
        (p1 - p0, q2),
        (p1 - p0 + q1 - q0, q2 - q1),
        (q1 - q0, q2 - q1 - p0),
    ];
    Ok(FiveTermInstance {
        x,
        y,
        shapes,
        branches,
    })
}

impl FiveTermInstance {
    /// Instance with hand-supplied branch pairs (not necessarily in V).
    pub fn with_branches(
        x: Complex64,
        y: Complex64,
        branches: [(i64, i64); 5],
    ) -> Result<FiveTermInstance> {
        let shapes = five_shapes(x, y)?;
        Ok(FiveTermInstance {
            x,
            y,
            shapes,
            branches,
        })
    }

    pub fn params(&self) -> Result<[ExtParam; 5]> {
        let mut out = [ExtParam::new(Complex64::new(2.0, 1.0), 0, 0)?; 5];
        for i in 0..5 {
            out[i] = ExtParam::new(self.shapes[i], self.branches[i].0, self.branches[i].1)?;
        }
        Ok(out)
    }

    /// Σ (−1)ⁱ [xᵢ;pᵢ,qᵢ].
    pub fn alternating_sum(&self) -> Result<BlochSum> {
        let params = self.params()?;
        Ok(BlochSum::new(
            params
                .iter()
                .enumerate()
                .map(|(i, p)| (if i % 2 == 0 { 1 } else { -1 }, *p))
                .collect(),
        ))
    }

    /// Flattenings of the five simplices.
    pub fn flats(&self) -> Result<[FlatTriple; 5]> {
        let params = self.params()?;
        Ok([
            ell(&params[0]),
            ell(&params[1]),
            ell(&params[2]),
            ell(&params[3]),
            ell(&params[4]),
        ])
    }

    /// Boundary positions realizing the five shapes: (0, ∞, 1, z₃, z₄) with
    /// z₃ = (1−x)/(1−y) and z₄ = (1−x⁻¹)/(1−y⁻¹).
    pub fn developing_points(&self) -> [BoundaryPoint; 5] {
        let one = Complex64::new(1.0, 0.0);
        [
            BoundaryPoint::from_complex(Complex64::new(0.0, 0.0)),
            BoundaryPoint::infinity(),
            BoundaryPoint::from_complex(one),
            BoundaryPoint::from_complex((one - self.x) / (one - self.y)),
            BoundaryPoint::from_complex((one - self.x.inv()) / (one - self.y.inv())),
        ]
    }
}

/// The five integer expressions whose vanishing characterizes membership in
/// V (the ν-vanishing criterion). Always true for instances built by
/// [`five_term_instance`]; validates hand-supplied branch tuples.
pub fn nu_vanishes(inst: &FiveTermInstance) -> bool {
    let [(p0, q0), (p1, q1), (p2, q2), (p3, q3), (p4, q4)] = inst.branches;
    let exprs = [
        q0 - p2 - q2 + p3 + q3,
        p0 - q3 + q4,
        -q1 + q2 - q3,
        -p1 + p3 + q3 - p4 - q4,
        p2 - p3 + p4,
    ];
    exprs.iter().all(|&e| e == 0)
}

/// The w-component of simplex Δₖ (omit vertex k of 0..4) at the edge
/// joining boundary vertices i and j.
fn wtype_in_omitted(k: usize, i: usize, j: usize) -> usize {
    let verts: Vec<usize> = (0..5).filter(|&v| v != k).collect();
    let a = verts.iter().position(|&v| v == i).unwrap();
    let b = verts.iter().position(|&v| v == j).unwrap();
    crate::flattening::EDGE_WTYPE[edge_index(a, b)]
}

fn check_flats_match(
    points: &[BoundaryPoint; 5],
    flats: &[FlatTriple; 5],
) -> Result<[ExtParam; 5]> {
    let mut params = Vec::with_capacity(5);
    for k in 0..5 {
        let verts: Vec<usize> = (0..5).filter(|&v| v != k).collect();
        let cr = cross_ratio(
            &points[verts[0]],
            &points[verts[1]],
            &points[verts[2]],
            &points[verts[3]],
        )?;
        let param = crate::flattening::from_triple(&flats[k])?;
        if (param.z - cr).norm() > 1e-8 * (1.0 + cr.norm()) {
            return Err(Error::Degenerate(format!(
                "flattening {k} has shape {} but the cross-ratio is {cr}",
                param.z
            )));
        }
        params.push(param);
    }
    Ok([params[0], params[1], params[2], params[3], params[4]])
}

/// Geometric five-term criterion: for each of the ten edges zᵢzⱼ the
/// alternating sum Σₖ (−1)ᵏ l_E(Δₖ) over the three incident simplices
/// vanishes within `tol`.
pub fn verify_five_term_geometric(
    points: &[BoundaryPoint; 5],
    flats: &[FlatTriple; 5],
    tol: f64,
) -> Result<bool> {
    check_flats_match(points, flats)?;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..5 {
                if k == i || k == j {
                    continue;
                }
                let verts: Vec<usize> = (0..5).filter(|&v| v != k).collect();
                let a = verts.iter().position(|&v| v == i).unwrap();
                let b = verts.iter().position(|&v| v == j).unwrap();
                let l = edge_param(&flats[k], edge_index(a, b));
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sum += l * sign;
            }
            if sum.norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Complete a partially specified five-term instance.
///
/// Known flattenings propagate along edges: an edge whose three incident
/// simplices are known on two pins one linear combination of the remaining
/// simplex's branch pair. With three or more known simplices the completion
/// is unique; with fewer, the leftover freedom is resolved to the smallest
/// branch pair (by |p|+|q|, then lexicographically).
pub fn extend_flattening(
    points: &[BoundaryPoint; 5],
    known: &[Option<FlatTriple>; 5],
) -> Result<[FlatTriple; 5]> {
    // Shapes from the positions.
    let mut shapes = [Complex64::new(0.0, 0.0); 5];
    for k in 0..5 {
        let verts: Vec<usize> = (0..5).filter(|&v| v != k).collect();
        shapes[k] = cross_ratio(
            &points[verts[0]],
            &points[verts[1]],
            &points[verts[2]],
            &points[verts[3]],
        )?;
    }
    let mut params: [Option<ExtParam>; 5] = [None; 5];
    for k in 0..5 {
        if let Some(f) = &known[k] {
            let p = crate::flattening::from_triple(f)?;
            if (p.z - shapes[k]).norm() > 1e-8 * (1.0 + shapes[k].norm()) {
                return Err(Error::Degenerate(format!(
                    "known flattening {k} does not match the cross-ratio"
                )));
            }
            params[k] = Some(p);
        }
    }

    // Branch-coefficient pattern and zero-branch log for a w-type.
    let base_log = |k: usize, wt: usize| -> Complex64 {
        let p0 = ExtParam::new(shapes[k], 0, 0).expect("non-degenerate shape");
        match wt {
            0 => p0.log_z(),
            1 => -p0.log_one_minus_z(),
            _ => p0.log_one_minus_z() - p0.log_z(),
        }
    };
    let coef = |wt: usize| -> (i64, i64) {
        match wt {
            0 => (1, 0),
            1 => (0, 1),
            _ => (-1, -1),
        }
    };

    // Accumulated linear constraints c·(p,q) = v per undetermined simplex.
    let mut constraints: Vec<Vec<((i64, i64), i64)>> = vec![Vec::new(); 5];

    let solve_two = |cs: &[((i64, i64), i64)]| -> Option<(i64, i64)> {
        for (a, (ca, va)) in cs.iter().enumerate() {
            for (cb, vb) in cs.iter().skip(a + 1) {
                let det = ca.0 * cb.1 - ca.1 * cb.0;
                if det != 0 {
                    let pnum = va * cb.1 - vb * ca.1;
                    let qnum = ca.0 * vb - cb.0 * va;
                    if pnum % det == 0 && qnum % det == 0 {
                        return Some((pnum / det, qnum / det));
                    }
                }
            }
        }
        None
    };

    for _round in 0..12 {
        let mut progressed = false;
        for i in 0..5 {
            for j in (i + 1)..5 {
                let inc: Vec<usize> = (0..5).filter(|&k| k != i && k != j).collect();
                let unknown: Vec<usize> = inc
                    .iter()
                    .copied()
                    .filter(|&k| params[k].is_none())
                    .collect();
                if unknown.len() > 1 {
                    continue;
                }
                // Signed sum of known log-parameters at this edge.
                let mut sum = Complex64::new(0.0, 0.0);
                for &k in &inc {
                    if let Some(p) = &params[k] {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        sum += edge_param(&ell(p), wedge(k, i, j)) * sign;
                    }
                }
                if unknown.is_empty() {
                    if sum.norm() > 1e-6 {
                        return Err(Error::Flattening(format!(
                            "edge z{i}z{j} of the known simplices has nonzero sum {sum}"
                        )));
                    }
                    continue;
                }
                let u = unknown[0];
                let sign = if u.is_multiple_of(2) { 1.0 } else { -1.0 };
                let wt = wtype_in_omitted(u, i, j);
                // sign·(base + πi·c·(p,q)) + sum = 0.
                let rhs = (-sum / sign - base_log(u, wt)) / Complex64::new(0.0, PI);
                let v = rhs.re.round();
                if (rhs - Complex64::new(v, 0.0)).norm() > 1e-6 {
                    return Err(Error::Flattening(format!(
                        "edge z{i}z{j}: branch residue {rhs} not an integer"
                    )));
                }
                let c = coef(wt);
                let entry = (c, v as i64);
                if !constraints[u].contains(&entry) {
                    // Contradictory constraint with the same coefficient?
                    if constraints[u]
                        .iter()
                        .any(|(cc, vv)| *cc == c && *vv != entry.1)
                    {
                        return Err(Error::Flattening(format!(
                            "inconsistent branch constraints on simplex {u}"
                        )));
                    }
                    constraints[u].push(entry);
                    progressed = true;
                }
                if let Some((p, q)) = solve_two(&constraints[u]) {
                    params[u] = Some(ExtParam::new(shapes[u], p, q)?);
                    progressed = true;
                }
            }
        }
        if params.iter().all(|p| p.is_some()) {
            break;
        }
        if !progressed {
            // Resolve the lowest undetermined simplex with minimal branches.
            let u = (0..5).find(|&k| params[k].is_none()).unwrap();
            let mut best: Option<(i64, (i64, i64))> = None;
            for p in -24i64..=24 {
                for q in -24i64..=24 {
                    if constraints[u]
                        .iter()
                        .all(|((cp, cq), v)| cp * p + cq * q == *v)
                    {
                        let score = p.abs() + q.abs();
                        let key = (score, (p, q));
                        if best.is_none_or(|b| key < b) {
                            best = Some(key);
                        }
                    }
                }
            }
            let (_, (p, q)) = best.ok_or_else(|| {
                Error::Flattening(format!("no consistent branches for simplex {u}"))
            })?;
            params[u] = Some(ExtParam::new(shapes[u], p, q)?);
        }
    }

    let mut out = Vec::with_capacity(5);
    for k in 0..5 {
        let p = params[k].ok_or_else(|| Error::Flattening("completion did not converge".into()))?;
        out.push(ell(&p));
    }
    let out: [FlatTriple; 5] = [out[0], out[1], out[2], out[3], out[4]];
    if !verify_five_term_geometric(points, &out, 1e-6)? {
        return Err(Error::Flattening(
            "completed flattenings violate an edge condition".into(),
        ));
    }
    Ok(out)
}

fn wedge(k: usize, i: usize, j: usize) -> usize {
    let verts: Vec<usize> = (0..5).filter(|&v| v != k).collect();
    let a = verts.iter().position(|&v| v == i).unwrap();
    let b = verts.iter().position(|&v| v == j).unwrap();
    edge_index(a, b)
}

/// Sample (x, y) with y in the upper half-plane and x inside the triangle
/// (0, 1, y): the region FT⁺ where the zero-branch five-term instance is
/// the canonical one.
pub fn sample_ft_plus<R: rand::Rng>(rng: &mut R) -> (Complex64, Complex64) {
    loop {
        let y = Complex64::new(rng.gen_range(-1.5..2.5), rng.gen_range(0.15..2.0));
        // Barycentric point of (0, 1, y), margins keeping shapes away from {0,1}.
        let mut a = rng.gen_range(0.08..1.0f64);
        let mut b = rng.gen_range(0.08..1.0f64);
        let mut c = rng.gen_range(0.08..1.0f64);
        let s = a + b + c;
        a /= s;
        b /= s;
        c /= s;
        let x = Complex64::new(b + c * y.re, c * y.im);
        if (x - y).norm() < 0.05 {
            continue;
        }
        if five_shapes(x, y).is_ok() {
            return (x, y);
        }
    }
}
