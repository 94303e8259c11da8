//! Integer branch adjustments: solve for (pᵢ,qᵢ) so that log-parameters
//! vanish around every edge and along the required cusp and vertex-link
//! curves, then repair parities along the normal-loop basis by kernel
//! moves, and assemble β̂ = Σ εᵢ[zᵢ;pᵢ,qᵢ].
//!
//! Every condition row is linear over Z: the flattened log-parameter of a
//! row is (w-form value of the tracked logs) + πi·(integer combination of
//! the pᵢ,qᵢ), and the condition is that it vanishes. The right-hand side
//! −(1/πi)·(w-form value) is therefore an integer whenever the shapes
//! satisfy the geometric equations; non-integral residues signal wrong
//! branches or an unconverged solve and are rejected.
//!
//! Kernel moves of the integer system change β̂ by cycle relations only, so
//! the choice of coset representative does not affect R(β̂); a deterministic
//! ℓ¹-minimal representative keeps reported term lists reproducible.

use num_bigint::BigInt;

use crate::ebloch::BlochSum;
use crate::error::{Error, Result};
use crate::flattening::parity_param_of;
use crate::shapes::{Filling, FillingSpec, ShapeAssignment};
use crate::tricomplex::{
    curve_row, cusp_basis, edge_row, normal_loop_basis, LinkClass, NormalCurve,
    OrderedTriangulation, Row,
};
use crate::zsolve::{solve_integer, solve_mod2, IntMatrix};

const PI: f64 = std::f64::consts::PI;

/// A solved flattening: branch pair per tetrahedron.
#[derive(Debug, Clone)]
pub struct FlatteningSolution {
    pub pq: Vec<(i64, i64)>,
    pub parity_enforced: bool,
    /// Descriptors of the condition rows used.
    pub conditions_used: Vec<String>,
    pub warnings: Vec<String>,
}

/// The integer condition system A·x = b on x = (p₀,q₀,p₁,q₁,…).
pub fn build_flattening_system(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    fillings: &FillingSpec,
) -> Result<(IntMatrix, Vec<BigInt>, Vec<Row>)> {
    let mut rows: Vec<Row> = Vec::new();
    for e in 0..tri.edge_classes().len() {
        rows.push(edge_row(tri, e));
    }
    for link in tri.vertex_links() {
        match link.class {
            LinkClass::Material => continue,
            LinkClass::Cusp => {
                let (mu, lambda) = cusp_basis(tri, link.vertex, &tri.cusp_specs)?;
                let mrow = curve_row(tri, &mu, &format!("cusp {} meridian", link.vertex));
                let lrow = curve_row(tri, &lambda, &format!("cusp {} longitude", link.vertex));
                match fillings.of(link.vertex) {
                    Filling::Unfilled => {
                        rows.push(mrow);
                        rows.push(lrow);
                    }
                    Filling::Filled { alpha, beta, .. } => {
                        let mut combined = Row {
                            entries: Vec::new(),
                            descriptor: format!("cusp {} filling ({alpha},{beta})", link.vertex),
                        };
                        for &(t, w, c) in &mrow.entries {
                            push_entry(&mut combined, t, w, alpha * c);
                        }
                        for &(t, w, c) in &lrow.entries {
                            push_entry(&mut combined, t, w, beta * c);
                        }
                        rows.push(combined);
                    }
                }
            }
            LinkClass::HigherGenus => {
                // Strong flattening: log-parameters vanish along a homology
                // basis of the link.
                let curves = higher_genus_basis(tri, link.vertex, 2 * link.genus)?;
                for (i, c) in curves.iter().enumerate() {
                    rows.push(curve_row(
                        tri,
                        c,
                        &format!("vertex {} link curve {i}", link.vertex),
                    ));
                }
            }
        }
    }

    let n = tri.num_tets();
    let logs = shapes.logs();
    let mut a = IntMatrix::zero(rows.len(), 2 * n);
    let mut b = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        for (i, (p, q)) in row.pq_coeffs(n).iter().enumerate() {
            a[(r, 2 * i)] = BigInt::from(*p);
            a[(r, 2 * i + 1)] = BigInt::from(*q);
        }
        let value = row.log_value(&logs) / num_complex::Complex64::new(0.0, PI);
        let rounded = value.re.round();
        if (value - num_complex::Complex64::new(rounded, 0.0)).norm() > 1e-6 {
            return Err(Error::Flattening(format!(
                "row '{}' has non-integral residue {value} (wrong branches or unconverged shapes)",
                row.descriptor
            )));
        }
        b.push(BigInt::from(-(rounded as i64)));
    }
    Ok((a, b, rows))
}

fn push_entry(row: &mut Row, t: usize, w: usize, c: i64) {
    if c == 0 {
        return;
    }
    if let Some(e) = row
        .entries
        .iter_mut()
        .find(|(tt, ww, _)| *tt == t && *ww == w)
    {
        e.2 += c;
    } else {
        row.entries.push((t, w, c));
    }
}

/// Curves whose H¹-pairing coordinates form a unimodular basis, for strong
/// flattening of a genus ≥ 2 link.
fn higher_genus_basis(
    tri: &OrderedTriangulation,
    vertex: usize,
    rank: usize,
) -> Result<Vec<NormalCurve>> {
    let surface = crate::tricomplex::links_surface(tri, vertex)?;
    let basis = crate::tricomplex::links_cocycles(tri, &surface)?;
    if basis.len() != rank {
        return Err(Error::Parse("link cohomology rank mismatch".into()));
    }
    let candidates = crate::tricomplex::links_candidates(tri, &surface);
    let mut chosen: Vec<(NormalCurve, Vec<i64>)> = Vec::new();
    for c in candidates {
        let co = crate::tricomplex::links_curve_coords(tri, &surface, &basis, &c);
        let mut trial: Vec<Vec<i64>> = chosen.iter().map(|(_, v)| v.clone()).collect();
        trial.push(co.clone());
        if lattice_rank_unimodular(&trial) {
            chosen.push((c, co));
            if chosen.len() == rank {
                return Ok(chosen.into_iter().map(|(c, _)| c).collect());
            }
        }
    }
    Err(Error::Unsupported(format!(
        "could not find a unimodular curve basis on the genus-{} link of vertex {vertex}",
        rank / 2
    )))
}

/// The rows (as vectors) span a direct summand: their HNF pivots are all 1.
fn lattice_rank_unimodular(rows: &[Vec<i64>]) -> bool {
    let m = IntMatrix::from_i64(rows);
    let (h, _) = crate::zsolve::hermite_normal_form(&m);
    let mut rank = 0;
    for i in 0..h.rows {
        if let Some(j) = (0..h.cols).find(|&j| h[(i, j)] != BigInt::from(0)) {
            if h[(i, j)] != BigInt::from(1) {
                return false;
            }
            rank += 1;
            let _ = j;
        }
    }
    rank == rows.len()
}

/// Parity of a curve as an affine-linear form over F₂ in x = (p,q)-vector:
/// constant = number of w₂ passes mod 2, linear part from the pass types.
fn parity_form(tri: &OrderedTriangulation, curve: &NormalCurve) -> (u8, Vec<u8>) {
    let n = tri.num_tets();
    let mut constant = 0u8;
    let mut linear = vec![0u8; 2 * n];
    for p in &curve.passes {
        match p.wtype() {
            0 => linear[2 * p.tet] ^= 1,
            1 => linear[2 * p.tet + 1] ^= 1,
            _ => {
                constant ^= 1;
                linear[2 * p.tet] ^= 1;
                linear[2 * p.tet + 1] ^= 1;
            }
        }
    }
    (constant, linear)
}

fn eval_parity(form: &(u8, Vec<u8>), x: &[i64]) -> u8 {
    let mut v = form.0;
    for (c, xi) in form.1.iter().zip(x) {
        v ^= c & (xi.rem_euclid(2) as u8);
    }
    v
}

/// Solve the flattening: integer log conditions, then parity repair on the
/// normal-loop basis by kernel moves, then a deterministic ℓ¹-minimal coset
/// representative (ties broken lexicographically).
pub fn solve_flattening(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    fillings: &FillingSpec,
) -> Result<FlatteningSolution> {
    let (a, b, rows) = build_flattening_system(tri, shapes, fillings)?;
    let (x0, kernel) = solve_integer(&a, &b).map_err(|_| {
        Error::Flattening(
            "the log conditions admit no integer solution (theory violation: check input)".into(),
        )
    })?;
    let mut x: Vec<i64> = x0
        .iter()
        .map(|v| i64::try_from(v).map_err(|_| Error::Flattening("oversized branch".into())))
        .collect::<Result<_>>()?;
    let kernel: Vec<Vec<i64>> = kernel
        .iter()
        .map(|k| {
            k.iter()
                .map(|v| i64::try_from(v).expect("small kernel"))
                .collect()
        })
        .collect();

    let mut warnings = Vec::new();
    // Parity defects on the normal-loop basis.
    let basis = normal_loop_basis(tri);
    let forms: Vec<(u8, Vec<u8>)> = basis.iter().map(|c| parity_form(tri, c)).collect();
    let defects: Vec<u8> = forms.iter().map(|f| eval_parity(f, &x)).collect();
    let mut parity_enforced = true;
    if defects.contains(&1) {
        // Kernel action on parities.
        let action: Vec<Vec<u8>> = forms
            .iter()
            .map(|f| {
                kernel
                    .iter()
                    .map(|k| {
                        f.1.iter()
                            .zip(k)
                            .map(|(c, ki)| c & (ki.rem_euclid(2) as u8))
                            .fold(0u8, |s, v| s ^ v)
                    })
                    .collect()
            })
            .collect();
        match solve_mod2(&action, &defects) {
            Ok(y) => {
                for (j, &yj) in y.iter().enumerate() {
                    if yj == 1 {
                        for (xi, ki) in x.iter_mut().zip(&kernel[j]) {
                            *xi += ki;
                        }
                    }
                }
            }
            Err(_) => {
                parity_enforced = false;
                warnings.push(
                    "parity could not be corrected by kernel moves; the class may be off by \
                     the element of order 2"
                        .into(),
                );
            }
        }
    }

    // Remaining freedom preserving parity: even kernel multiples plus the
    // mod-2 nullspace of the parity action.
    let mut lattice: Vec<Vec<i64>> = Vec::new();
    for k in &kernel {
        lattice.push(k.iter().map(|v| 2 * v).collect());
    }
    if parity_enforced && !kernel.is_empty() {
        let action: Vec<Vec<u8>> = forms
            .iter()
            .map(|f| {
                kernel
                    .iter()
                    .map(|k| {
                        f.1.iter()
                            .zip(k)
                            .map(|(c, ki)| c & (ki.rem_euclid(2) as u8))
                            .fold(0u8, |s, v| s ^ v)
                    })
                    .collect()
            })
            .collect();
        for null in mod2_nullspace(&action) {
            let mut v = vec![0i64; x.len()];
            for (j, &nj) in null.iter().enumerate() {
                if nj == 1 {
                    for (vi, ki) in v.iter_mut().zip(&kernel[j]) {
                        *vi += ki;
                    }
                }
            }
            if v.iter().any(|&c| c != 0) {
                lattice.push(v);
            }
        }
    }
    x = reduce_coset(&x, &lattice);

    // Post-solve audit: all rows evaluate to exactly b, parities to zero.
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    let ax = a.mul_vec(&xb);
    if ax != b {
        return Err(Error::Flattening(
            "audit failed: A·x != b after reduction".into(),
        ));
    }
    if parity_enforced {
        for (f, curve) in forms.iter().zip(&basis) {
            if eval_parity(f, &x) != 0 {
                return Err(Error::Flattening(format!(
                    "audit failed: parity along a basis curve with {} passes",
                    curve.passes.len()
                )));
            }
        }
    }

    Ok(FlatteningSolution {
        pq: x.chunks(2).map(|c| (c[0], c[1])).collect(),
        parity_enforced,
        conditions_used: rows.iter().map(|r| r.descriptor.clone()).collect(),
        warnings,
    })
}

fn mod2_nullspace(action: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let cols = action.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    // Columns j with: action·e_j solvable as 0... gather kernel of the
    // F2-matrix by Gaussian elimination.
    let mut m: Vec<Vec<u8>> = action.to_vec();
    let rows = m.len();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if let Some(pr) = (r..rows).find(|&i| m[i][c] == 1) {
            m.swap(r, pr);
            for i in 0..rows {
                if i != r && m[i][c] == 1 {
                    let (head, tail) = if i < r {
                        let (a, b) = m.split_at_mut(r);
                        (&mut a[i], &b[0])
                    } else {
                        let (a, b) = m.split_at_mut(i);
                        (&mut b[0], &a[r])
                    };
                    for (x, y) in head.iter_mut().zip(tail.iter()) {
                        *x ^= y;
                    }
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
        }
    }
    let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u8; cols];
        v[free] = 1;
        for (row_idx, &pc) in pivot_col_of_row.iter().enumerate() {
            if m[row_idx][free] == 1 {
                v[pc] = 1;
            }
        }
        out.push(v);
    }
    out
}

/// ℓ¹-minimal representative of x + lattice, ties broken lexicographically.
fn reduce_coset(x: &[i64], lattice: &[Vec<i64>]) -> Vec<i64> {
    if lattice.is_empty() {
        return x.to_vec();
    }
    let score = |v: &[i64]| -> (i64, Vec<i64>) { (v.iter().map(|c| c.abs()).sum(), v.to_vec()) };
    let dim = lattice.len();
    let mut best = x.to_vec();
    let mut best_score = score(&best);
    if dim <= 4 {
        // Exhaustive over small coefficient boxes.
        let range: Vec<i64> = (-4..=4).collect();
        let mut idx = vec![0usize; dim];
        loop {
            let mut cand = x.to_vec();
            for (j, &i) in idx.iter().enumerate() {
                let c = range[i];
                for (ci, li) in cand.iter_mut().zip(&lattice[j]) {
                    *ci += c * li;
                }
            }
            let s = score(&cand);
            if s < best_score {
                best_score = s;
                best = cand;
            }
            // Increment multi-index.
            let mut j = 0;
            loop {
                if j == dim {
                    return best;
                }
                idx[j] += 1;
                if idx[j] < range.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    } else {
        // Greedy descent.
        loop {
            let mut improved = false;
            for l in lattice {
                for sgn in [1i64, -1] {
                    let cand: Vec<i64> = best.iter().zip(l).map(|(b, li)| b + sgn * li).collect();
                    let s = score(&cand);
                    if s < best_score {
                        best_score = s;
                        best = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                return best;
            }
        }
    }
}

/// β̂ = Σ εᵢ[zᵢ;pᵢ,qᵢ] in principal-branch cover coordinates.
pub fn beta_hat(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    sol: &FlatteningSolution,
) -> Result<BlochSum> {
    let signs = tri.orientation_signs();
    let mut terms = Vec::with_capacity(shapes.len());
    for i in 0..shapes.len() {
        let (p, q) = sol.pq[i];
        terms.push((signs[i], shapes.ext_param(i, p, q, signs[i])?));
    }
    Ok(BlochSum::new(terms))
}

/// Audit helper: the log-holonomy of every condition row vanishes exactly
/// (integer residue) at the solution, and basis parities are zero.
pub fn audit(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    fillings: &FillingSpec,
    sol: &FlatteningSolution,
) -> Result<()> {
    let (a, b, _) = build_flattening_system(tri, shapes, fillings)?;
    let xb: Vec<BigInt> = sol
        .pq
        .iter()
        .flat_map(|&(p, q)| [BigInt::from(p), BigInt::from(q)])
        .collect();
    if a.mul_vec(&xb) != b {
        return Err(Error::Flattening("audit: conditions violated".into()));
    }
    let params: Vec<_> = (0..shapes.len())
        .map(|i| shapes.ext_param(i, sol.pq[i].0, sol.pq[i].1, tri.orientation_signs()[i]))
        .collect::<Result<Vec<_>>>()?;
    if sol.parity_enforced {
        for curve in normal_loop_basis(tri) {
            if crate::tricomplex::parity_along(tri, &curve, &params) != 0 {
                return Err(Error::Flattening("audit: nonzero parity".into()));
            }
        }
    }
    // Direct parity check from the parity parameters of the solved params
    // around each edge loop as well.
    for class in tri.edge_classes() {
        let loop_curve = crate::tricomplex::edge_loop(tri, class);
        let parity: u8 = loop_curve
            .passes
            .iter()
            .map(|p| parity_param_of(&params[p.tet], p.wtype()))
            .fold(0, |s, v| s ^ (v & 1));
        if sol.parity_enforced && parity != 0 {
            return Err(Error::Flattening("audit: edge-loop parity nonzero".into()));
        }
    }
    Ok(())
}
