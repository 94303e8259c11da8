//! Ideal simplex shapes with branch-tracked logarithms.
//!
//! Shapes come from two sources: cross-ratios of moved base points on a
//! G-labeled complex, or Newton solution of the gluing equations. In both
//! cases the assignment carries continuous lifts of log z and log(1−z); the
//! Newton unknowns are the log pairs (z is derived), so deforming shapes,
//! in particular Dehn-surgery continuation, tracks branches automatically.
//!
//! The gluing system is linear in the tracked logs. Each edge class
//! contributes one row (total dihedral angle 2π: the signed sum of
//! log-parameters has a fixed target), each unfilled cusp the two rows
//! u = 0, v = 0 for its basis curves, and each filled cusp the single row
//! αu + βv = 2πi. Targets are expressed in w-form, where a geometric
//! solution has principal log z″ = (log(1−z) − log z) + ε·iπ.

use num_complex::Complex64;

use crate::branchlog::Side;
use crate::error::{Error, Result};
use crate::flattening::{cross_ratio, BoundaryPoint, ExtParam};
use crate::tricomplex::{curve_row, cusp_basis, edge_row, LinkClass, OrderedTriangulation, Row};

const PI: f64 = std::f64::consts::PI;

fn ipi() -> Complex64 {
    Complex64::new(0.0, PI)
}

/// Per-tetrahedron shapes with continuous lifts of log z and log(1−z).
#[derive(Debug, Clone)]
pub struct ShapeAssignment {
    pub z: Vec<Complex64>,
    pub logz: Vec<Complex64>,
    pub log1mz: Vec<Complex64>,
}

impl ShapeAssignment {
    /// Principal-branch lifts. Real shapes take the half-plane flag from
    /// the tet's orientation sign.
    pub fn from_shapes(shapes: &[Complex64], signs: &[i64]) -> Result<ShapeAssignment> {
        let one = Complex64::new(1.0, 0.0);
        let mut logz = Vec::with_capacity(shapes.len());
        let mut log1mz = Vec::with_capacity(shapes.len());
        for (i, &z) in shapes.iter().enumerate() {
            if z.norm() < 1e-12 || (z - one).norm() < 1e-12 {
                return Err(Error::Degenerate(format!("tet {i} has shape {z}")));
            }
            let side = if signs[i] >= 0 {
                Side::Plus
            } else {
                Side::Minus
            };
            logz.push(crate::branchlog::log_with_side(z, side)?);
            log1mz.push(crate::branchlog::log_with_side(one - z, side.flip())?);
        }
        Ok(ShapeAssignment {
            z: shapes.to_vec(),
            logz,
            log1mz,
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn logs(&self) -> Vec<(Complex64, Complex64)> {
        self.logz
            .iter()
            .zip(&self.log1mz)
            .map(|(&a, &b)| (a, b))
            .collect()
    }

    /// exp-consistency defect, should stay below ~1e−10 relative.
    pub fn consistency_error(&self) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        self.z
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let e1 = (self.logz[i].exp() - z).norm() / (1.0 + z.norm());
                let e2 = (self.log1mz[i].exp() - (one - z)).norm() / (1.0 + z.norm());
                e1.max(e2)
            })
            .fold(0.0, f64::max)
    }

    /// The cover point [zᵢ; pᵢ, qᵢ] in principal-branch convention, given
    /// branch integers relative to the tracked lifts. Tracked and principal
    /// lifts differ by even multiples of πi, which fold into (p, q).
    pub fn ext_param(&self, i: usize, p: i64, q: i64, sign: i64) -> Result<ExtParam> {
        let side = if sign >= 0 { Side::Plus } else { Side::Minus };
        let z = self.z[i];
        let principal = crate::branchlog::log_with_side(z, side)?;
        let principal1m =
            crate::branchlog::log_with_side(Complex64::new(1.0, 0.0) - z, side.flip())?;
        let dp = (self.logz[i] - principal) / ipi();
        let dq = -(self.log1mz[i] - principal1m) / ipi();
        let round = |x: Complex64, what: &str| -> Result<i64> {
            let r = x.re.round();
            if (x - Complex64::new(r, 0.0)).norm() > 1e-6 {
                return Err(Error::Flattening(format!(
                    "tracked {what} of tet {i} is not an integer multiple of πi off principal: {x}"
                )));
            }
            Ok(r as i64)
        };
        let dp = round(dp, "log z")?;
        let dq = round(dq, "log(1-z)")?;
        ExtParam::with_side(z, p + dp, q + dq, side)
    }
}

/// Dehn-filling data for one cusp: either unfilled or the coprime curve
/// (α,β) together with a completing pair (γ,δ), αδ − βγ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filling {
    Unfilled,
    Filled {
        alpha: i64,
        beta: i64,
        gamma: i64,
        delta: i64,
    },
}

impl Filling {
    /// Fill along (α,β) with (γ,δ) from the extended Euclidean algorithm.
    pub fn filled(alpha: i64, beta: i64) -> Result<Filling> {
        let g = gcd(alpha.abs(), beta.abs());
        if g != 1 {
            return Err(Error::Parse(format!(
                "filling coefficients ({alpha},{beta}) are not coprime"
            )));
        }
        // αδ − βγ = 1.
        let (x, y) = ext_gcd(alpha, beta);
        // αx + βy = 1 ⇒ δ = x, γ = −y.
        Ok(Filling::Filled {
            alpha,
            beta,
            gamma: -y,
            delta: x,
        })
    }

    pub fn with_frame(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Filling> {
        if alpha * delta - beta * gamma != 1 {
            return Err(Error::Parse(format!(
                "(γ,δ) = ({gamma},{delta}) does not complete ({alpha},{beta}): αδ−βγ ≠ 1"
            )));
        }
        Ok(Filling::Filled {
            alpha,
            beta,
            gamma,
            delta,
        })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64) {
    if b == 0 {
        (a.signum(), 0)
    } else {
        let (x, y) = ext_gcd(b, a.rem_euclid(b));
        (y, x - (a.div_euclid(b)) * y)
    }
}

/// Fillings per cusp vertex; cusps not listed are unfilled.
#[derive(Debug, Clone, Default)]
pub struct FillingSpec {
    pub fillings: Vec<(usize, Filling)>,
}

impl FillingSpec {
    pub fn complete() -> FillingSpec {
        FillingSpec::default()
    }

    pub fn of(&self, vertex: usize) -> Filling {
        self.fillings
            .iter()
            .find(|(v, _)| *v == vertex)
            .map(|(_, f)| *f)
            .unwrap_or(Filling::Unfilled)
    }
}

/// Cusp bookkeeping inside a gluing system.
#[derive(Debug, Clone)]
pub struct CuspRows {
    pub vertex: usize,
    pub meridian: Row,
    pub longitude: Row,
    /// w-form values of the rows at a geometric complete structure.
    pub c_u: Complex64,
    pub c_v: Complex64,
    pub filling: Filling,
}

/// The linear system on tracked logs.
#[derive(Debug, Clone)]
pub struct GluingSystem {
    pub num_tets: usize,
    /// (row, target) pairs actually solved.
    pub rows: Vec<(Row, Complex64)>,
    pub cusps: Vec<CuspRows>,
}

/// One row per edge class plus cusp rows per torus link.
pub fn build_gluing_system(
    tri: &OrderedTriangulation,
    fillings: &FillingSpec,
) -> Result<GluingSystem> {
    let signs = tri.orientation_signs();
    let mut rows = Vec::new();
    for e in 0..tri.edge_classes().len() {
        let row = edge_row(tri, e);
        let target = ipi() * 2.0 - ipi() * row.w2_weight(signs) as f64;
        rows.push((row, target));
    }
    let mut cusps = Vec::new();
    for link in tri.vertex_links() {
        match link.class {
            LinkClass::Material => continue,
            LinkClass::HigherGenus => {
                return Err(Error::Unsupported(format!(
                    "vertex {} has a genus-{} link: geometric solving needs torus cusps",
                    link.vertex, link.genus
                )));
            }
            LinkClass::Cusp => {}
        }
        let (mu, lambda) = cusp_basis(tri, link.vertex, &tri.cusp_specs)?;
        let mrow = curve_row(tri, &mu, &format!("meridian of cusp {}", link.vertex));
        let lrow = curve_row(tri, &lambda, &format!("longitude of cusp {}", link.vertex));
        let c_u = -ipi() * mrow.w2_weight(signs) as f64;
        let c_v = -ipi() * lrow.w2_weight(signs) as f64;
        let filling = fillings.of(link.vertex);
        match filling {
            Filling::Unfilled => {
                rows.push((mrow.clone(), c_u));
                rows.push((lrow.clone(), c_v));
            }
            Filling::Filled { alpha, beta, .. } => {
                let mut combined = Row {
                    entries: Vec::new(),
                    descriptor: format!("filling ({alpha},{beta}) of cusp {}", link.vertex),
                };
                for &(t, w, c) in &mrow.entries {
                    combined.entries.push((t, w, alpha * c));
                }
                for &(t, w, c) in &lrow.entries {
                    if let Some(e) = combined
                        .entries
                        .iter_mut()
                        .find(|(tt, ww, _)| *tt == t && *ww == w)
                    {
                        e.2 += beta * c;
                    } else {
                        combined.entries.push((t, w, beta * c));
                    }
                }
                let target = ipi() * 2.0 + c_u * alpha as f64 + c_v * beta as f64;
                rows.push((combined, target));
            }
        }
        cusps.push(CuspRows {
            vertex: link.vertex,
            meridian: mrow,
            longitude: lrow,
            c_u,
            c_v,
            filling,
        });
    }
    Ok(GluingSystem {
        num_tets: tri.num_tets(),
        rows,
        cusps,
    })
}

impl GluingSystem {
    /// Residual vector at the given logs.
    pub fn residuals(&self, logs: &[(Complex64, Complex64)]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|(row, target)| row.log_value(logs) - target)
            .collect()
    }

    pub fn max_residual(&self, shapes: &ShapeAssignment) -> f64 {
        self.residuals(&shapes.logs())
            .iter()
            .map(|r| r.norm())
            .fold(0.0, f64::max)
    }

    /// True log-holonomies (u, v) of a cusp's basis curves: the w-form row
    /// values minus their complete-structure constants.
    pub fn holonomy(
        &self,
        shapes: &ShapeAssignment,
        vertex: usize,
    ) -> Result<(Complex64, Complex64)> {
        let cusp = self
            .cusps
            .iter()
            .find(|c| c.vertex == vertex)
            .ok_or_else(|| Error::Parse(format!("vertex {vertex} is not a cusp")))?;
        let logs = shapes.logs();
        Ok((
            cusp.meridian.log_value(&logs) - cusp.c_u,
            cusp.longitude.log_value(&logs) - cusp.c_v,
        ))
    }
}

/// Default initial guess: every shape at e^{iπ/3} perturbed by +0.1i and
/// renormalized to the unit circle (deterministic, positively oriented).
pub fn default_initial(n: usize) -> ShapeAssignment {
    let base = Complex64::from_polar(1.0, PI / 3.0) * Complex64::new(1.0, 0.1);
    let z = base / base.norm();
    let shapes = vec![z; n];
    ShapeAssignment::from_shapes(&shapes, &vec![1; n]).expect("generic init")
}

/// Damped Newton iteration on the tracked logs. Rows are linear in
/// (log z, log(1−z)) with d/dz = a/z − b/(1−z); the possibly redundant
/// system is solved by least squares on the linearization.
pub fn solve_newton(
    system: &GluingSystem,
    init: Option<&ShapeAssignment>,
    tol: f64,
) -> Result<ShapeAssignment> {
    let n = system.num_tets;
    let mut state = match init {
        Some(s) => s.clone(),
        None => default_initial(n),
    };
    let one = Complex64::new(1.0, 0.0);
    let m = system.rows.len();
    if m < n {
        return Err(Error::Solver(format!(
            "underdetermined gluing system: {m} rows for {n} shapes"
        )));
    }
    let max_iter = 100;
    let mut residual = system.residuals(&state.logs());
    let mut rnorm = residual.iter().map(|r| r.norm_sqr()).sum::<f64>().sqrt();
    for _iter in 0..max_iter {
        if residual.iter().all(|r| r.norm() < tol) {
            if state.consistency_error() > 1e-10 {
                return Err(Error::Solver("log lifts lost exp-consistency".into()));
            }
            return Ok(state);
        }
        // Jacobian.
        let mut jac = nalgebra::DMatrix::<Complex64>::zeros(m, n);
        for (r, (row, _)) in system.rows.iter().enumerate() {
            for (i, (a, b)) in row.lambda_mu_coeffs(n).iter().enumerate() {
                if *a == 0 && *b == 0 {
                    continue;
                }
                jac[(r, i)] = Complex64::new(*a as f64, 0.0) / state.z[i]
                    - Complex64::new(*b as f64, 0.0) / (one - state.z[i]);
            }
        }
        let f = nalgebra::DVector::<Complex64>::from_iterator(m, residual.iter().copied());
        let jh = jac.adjoint();
        let normal = &jh * &jac;
        let rhs = &jh * (-f);
        let dz = normal
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Solver("Jacobian rank-deficient beyond row redundancy".into()))?;

        // Step limiting: stay clear of the punctures z = 0, 1.
        let mut scale: f64 = 1.0;
        for i in 0..n {
            let room = 0.5 * state.z[i].norm().min((one - state.z[i]).norm());
            let step = dz[i].norm();
            if step > room {
                scale = scale.min(room / step);
            }
        }
        // Damped update with halving on residual increase.
        let mut accepted = false;
        let mut damping = scale;
        for _try in 0..12 {
            let mut cand = state.clone();
            let mut valid = true;
            for i in 0..n {
                let step = dz[i] * damping;
                let ratio = step / cand.z[i];
                let ratio1m = -step / (one - cand.z[i]);
                if (one + ratio).norm() < 1e-9 || (one + ratio1m).norm() < 1e-9 {
                    valid = false;
                    break;
                }
                cand.logz[i] += (one + ratio).ln();
                cand.log1mz[i] += (one + ratio1m).ln();
                cand.z[i] = cand.logz[i].exp();
            }
            if valid {
                let cres = system.residuals(&cand.logs());
                let cnorm = cres.iter().map(|r| r.norm_sqr()).sum::<f64>().sqrt();
                if cnorm < rnorm || cnorm < tol {
                    state = cand;
                    residual = cres;
                    rnorm = cnorm;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            return Err(Error::Solver(format!(
                "Newton stalled with residual {rnorm:.3e} (shape near a puncture or inconsistent system)"
            )));
        }
    }
    Err(Error::Solver(format!(
        "divergence after {max_iter} iterations; residual {rnorm:.3e}"
    )))
}

/// Path-continue the complete solution to the filled structure along a
/// linear homotopy of the filled-row targets, in `steps` increments with
/// adaptive halving (depth ≤ 10) on Newton failure.
pub fn continue_to_filling(
    tri: &OrderedTriangulation,
    complete: &ShapeAssignment,
    fillings: &FillingSpec,
    steps: usize,
) -> Result<ShapeAssignment> {
    let filled = build_gluing_system(tri, fillings)?;
    // At homotopy parameter t the filled rows aim at t·2πi + αc_u + βc_v;
    // the complete solution satisfies t = 0.
    let system_at = |t: f64| -> GluingSystem {
        let mut sys = filled.clone();
        for (row, target) in &mut sys.rows {
            if row.descriptor.starts_with("filling") {
                *target -= ipi() * 2.0 * (1.0 - t);
            }
        }
        sys
    };
    let mut state = complete.clone();
    let mut t = 0.0f64;
    let mut h = 1.0 / steps.max(1) as f64;
    let mut depth = 0;
    while t < 1.0 - 1e-12 {
        let target_t = (t + h).min(1.0);
        match solve_newton(&system_at(target_t), Some(&state), 1e-12) {
            Ok(next) => {
                state = next;
                t = target_t;
                if depth > 0 {
                    depth -= 1;
                    h *= 2.0;
                }
            }
            Err(e) => {
                depth += 1;
                h *= 0.5;
                if depth > 10 {
                    return Err(Error::Solver(format!(
                        "continuation failed near t = {t:.6}: {e}"
                    )));
                }
            }
        }
    }
    Ok(state)
}

/// Complex length λ = −(γu + δv) of the core geodesic added at a filled
/// cusp, from the branch-tracked holonomies.
pub fn complex_length(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    fillings: &FillingSpec,
    vertex: usize,
) -> Result<Complex64> {
    let filling = fillings.of(vertex);
    let Filling::Filled { gamma, delta, .. } = filling else {
        return Err(Error::Domain(format!("cusp {vertex} is not filled")));
    };
    let system = build_gluing_system(tri, fillings)?;
    let (u, v) = system.holonomy(shapes, vertex)?;
    Ok(-(u * gamma as f64 + v * delta as f64))
}

/// Shapes from a G-labeling and a base point per 0-simplex: tet i gets the
/// cross-ratio of (g₀z, g₁z, g₂z, g₃z) in slot order.
pub fn shapes_from_labels(
    tri: &OrderedTriangulation,
    base_points: &[BoundaryPoint],
) -> Result<ShapeAssignment> {
    let labels = tri
        .labels
        .as_ref()
        .ok_or_else(|| Error::Unsupported("complex carries no G-labels".into()))?;
    if base_points.len() != tri.num_vertices() {
        return Err(Error::Parse(format!(
            "{} base points for {} vertices",
            base_points.len(),
            tri.num_vertices()
        )));
    }
    let mut shapes = Vec::with_capacity(tri.num_tets());
    for t in 0..tri.num_tets() {
        let moved: Vec<BoundaryPoint> = (0..4)
            .map(|slot| {
                let v = tri.vertex_class_of(t, slot);
                base_points[v].moebius(&labels[t][slot])
            })
            .collect();
        let cr = cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3])
            .map_err(|e| Error::Degenerate(format!("tet {t}: {e}")))?;
        shapes.push(cr);
    }
    ShapeAssignment::from_shapes(&shapes, tri.orientation_signs())
}

/// Seeded generic base points (one per 0-simplex).
pub fn random_base_points<R: rand::Rng>(
    tri: &OrderedTriangulation,
    rng: &mut R,
) -> Vec<BoundaryPoint> {
    (0..tri.num_vertices())
        .map(|_| {
            BoundaryPoint::from_complex(Complex64::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filling_frames() {
        let f = Filling::filled(5, 1).unwrap();
        let Filling::Filled {
            alpha,
            beta,
            gamma,
            delta,
        } = f
        else {
            panic!()
        };
        assert_eq!(alpha * delta - beta * gamma, 1);
        assert!(Filling::filled(4, 2).is_err());
        assert!(Filling::with_frame(5, 1, 1, 1).is_err());
        assert!(Filling::with_frame(5, 1, 4, 1).is_ok());
    }

    #[test]
    fn coincident_base_points_are_degenerate() {
        let chain = crate::tricomplex::lens_chain(3, 0.2, 0.9).unwrap();
        let tri = crate::tricomplex::cycle_from_homogeneous_chain(&chain).unwrap();
        // All base points at a fixed point of the rotations: every moved
        // quadruple collapses.
        let fixed = BoundaryPoint::from_complex(Complex64::new(0.0, 1.0));
        let base = vec![fixed; tri.num_vertices()];
        let err = shapes_from_labels(&tri, &base);
        assert!(matches!(err, Err(Error::Degenerate(_))), "{err:?}");
    }

    #[test]
    fn ext_param_folds_tracked_branches() {
        // A tracked lift 2πi off principal folds into p.
        let z = Complex64::new(0.3, 0.7);
        let mut sa = ShapeAssignment::from_shapes(&[z], &[1]).unwrap();
        sa.logz[0] += Complex64::new(0.0, 2.0 * PI);
        let p = sa.ext_param(0, 0, 0, 1).unwrap();
        assert_eq!((p.p, p.q), (2, 0));
        sa.log1mz[0] -= Complex64::new(0.0, 2.0 * PI);
        let p = sa.ext_param(0, 1, -1, 1).unwrap();
        assert_eq!((p.p, p.q), (3, 1));
    }
}
