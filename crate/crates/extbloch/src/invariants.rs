//! Final invariants: i(vol + i·cs) mod π² from β̂ via R, the two
//! Dehn-filling formulas, the Bloch–Wigner volume cross-check, and
//! lens-space torsion classes.
//!
//! Sign convention, fixed by the m004 golden value +2V₀: with
//! i(vol + i·cs) = R(β̂) mod π², the volume is Im R(β̂) and cs = −Re R(β̂)
//! mod π². Programs following the Snap printing convention report
//! cs/(2π²), well defined modulo 1/2.

use num_complex::Complex64;

use crate::branchlog::{dilog, ModPiSquared, PI2};
use crate::ebloch::{chi, r_of_sum, BlochSum};
use crate::error::{Error, Result};
use crate::flatten_solver::{audit, beta_hat, solve_flattening, FlatteningSolution};
use crate::shapes::{
    build_gluing_system, complex_length, continue_to_filling, random_base_points,
    shapes_from_labels, solve_newton, Filling, FillingSpec, ShapeAssignment,
};
use crate::tricomplex::OrderedTriangulation;

/// Which Dehn-filling formula produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Flattening solved directly at the deformed shapes.
    Direct,
    /// Complete-structure flattening transported along the deformation,
    /// with χ(e^λ) corrections.
    Corrected,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Direct => write!(f, "direct"),
            Method::Corrected => write!(f, "corrected"),
        }
    }
}

/// A computed invariant.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub volume: f64,
    /// cs reduced into [0, π²).
    pub cs_mod_pi2: f64,
    /// cs/(2π²) reduced into [0, 1/2) (Snap printing convention).
    pub cs_over_2pi2_mod_half: f64,
    pub beta: BlochSum,
    pub r_beta: ModPiSquared,
    pub method: Method,
    pub warnings: Vec<String>,
}

/// vol and cs from β̂: i(vol + i·cs) = R(β̂).
pub fn vol_cs_direct(beta: &BlochSum) -> InvariantReport {
    report_from_beta(beta, Method::Direct, Vec::new())
}

fn report_from_beta(beta: &BlochSum, method: Method, warnings: Vec<String>) -> InvariantReport {
    let raw = beta.r_value_raw();
    let cs = (-raw.re).rem_euclid(PI2);
    InvariantReport {
        volume: raw.im,
        cs_mod_pi2: cs,
        cs_over_2pi2_mod_half: (cs / (2.0 * PI2)).rem_euclid(0.5),
        beta: beta.clone(),
        r_beta: r_of_sum(beta),
        method,
        warnings,
    }
}

/// Bloch–Wigner function D(z) = Im Li₂(z) + arg(1−z)·log|z| (0 on R).
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    dilog(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln()
}

/// Σ εᵢ·D(zᵢ): the volume of the shape assignment, independent of branches.
pub fn bloch_wigner_volume(shapes: &[Complex64], signs: &[i64]) -> f64 {
    shapes
        .iter()
        .zip(signs)
        .map(|(&z, &e)| bloch_wigner(z) * e as f64)
        .sum()
}

/// The full analysis of a triangulation: complete structure, optional
/// filling, both invariant formulas.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub complete_shapes: ShapeAssignment,
    pub shapes: ShapeAssignment,
    pub flattening: FlatteningSolution,
    pub direct: InvariantReport,
    pub corrected: Option<InvariantReport>,
}

/// Orientation normalization for unlabeled triangulations: if the first
/// non-real shape has ε·sign(Im z) = −1, mirror the complex (conjugate all
/// shapes and flip all signs).
fn normalize_orientation(tri: &mut OrderedTriangulation, shapes: &mut ShapeAssignment) {
    let signs = tri.orientation_signs().to_vec();
    for (i, z) in shapes.z.iter().enumerate() {
        if z.im != 0.0 {
            if (signs[i] as f64) * z.im.signum() < 0.0 {
                tri.flip_signs();
                for k in 0..shapes.len() {
                    shapes.z[k] = shapes.z[k].conj();
                    shapes.logz[k] = shapes.logz[k].conj();
                    shapes.log1mz[k] = shapes.log1mz[k].conj();
                }
            }
            return;
        }
    }
}

/// Solve an unlabeled cusped triangulation: Newton for the complete
/// structure, optional continuation to the filled structure, flattening,
/// and both Dehn-filling formulas.
pub fn analyze_geometric(
    tri: &OrderedTriangulation,
    fillings: &FillingSpec,
    continuation_steps: usize,
) -> Result<Analysis> {
    let mut tri = tri.clone();
    let complete_spec = FillingSpec::complete();
    let system = build_gluing_system(&tri, &complete_spec)?;
    let mut complete = solve_newton(&system, None, 1e-12)?;
    normalize_orientation(&mut tri, &mut complete);

    let any_filled = fillings
        .fillings
        .iter()
        .any(|(_, f)| matches!(f, Filling::Filled { .. }));
    if !any_filled {
        let sol = solve_flattening(&tri, &complete, &complete_spec)?;
        audit(&tri, &complete, &complete_spec, &sol)?;
        let beta = beta_hat(&tri, &complete, &sol)?;
        let mut direct = report_from_beta(&beta, Method::Direct, sol.warnings.clone());
        direct
            .warnings
            .extend(consistency_warnings(&tri, &complete, &direct));
        // With no filling the corrected formula has no correction term.
        let corrected = report_from_beta(&beta, Method::Corrected, sol.warnings.clone());
        return Ok(Analysis {
            complete_shapes: complete.clone(),
            shapes: complete,
            flattening: sol,
            direct,
            corrected: Some(corrected),
        });
    }

    // Completed flattening before deformation (for the corrected formula).
    let complete_sol = solve_flattening(&tri, &complete, &complete_spec)?;
    audit(&tri, &complete, &complete_spec, &complete_sol)?;

    let filled_shapes = continue_to_filling(&tri, &complete, fillings, continuation_steps)?;

    // Direct formula: flattening at the deformed shapes.
    let sol = solve_flattening(&tri, &filled_shapes, fillings)?;
    audit(&tri, &filled_shapes, fillings, &sol)?;
    let beta = beta_hat(&tri, &filled_shapes, &sol)?;
    let mut direct = report_from_beta(&beta, Method::Direct, sol.warnings.clone());
    direct
        .warnings
        .extend(consistency_warnings(&tri, &filled_shapes, &direct));

    // Corrected formula: β̂(M') = −Σ χ(e^{λ_j}) + Σ ε[x'; p, q] with the
    // complete flattening transported along the continuation.
    let mut beta_corr = BlochSum::empty();
    for (vertex, filling) in &fillings.fillings {
        if let Filling::Filled { .. } = filling {
            let lambda = complex_length(&tri, &filled_shapes, fillings, *vertex)?;
            beta_corr = beta_corr.add(&chi(lambda.exp())?.neg());
        }
    }
    let transported = beta_hat(&tri, &filled_shapes, &complete_sol)?;
    beta_corr = beta_corr.add(&transported);
    let corrected = report_from_beta(&beta_corr, Method::Corrected, complete_sol.warnings.clone());

    Ok(Analysis {
        complete_shapes: complete,
        shapes: filled_shapes,
        flattening: sol,
        direct,
        corrected: Some(corrected),
    })
}

/// Solve a G-labeled complex: shapes from seeded base points; retry the
/// seed on degenerate draws.
pub fn analyze_labeled(tri: &OrderedTriangulation, seed: u64) -> Result<Analysis> {
    use rand::SeedableRng;
    let mut last_err = None;
    for attempt in 0..24u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let base = random_base_points(tri, &mut rng);
        match try_labeled(tri, &base) {
            Ok(a) => return Ok(a),
            Err(e @ Error::Degenerate(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Degenerate("no generic base points found".into())))
}

fn try_labeled(
    tri: &OrderedTriangulation,
    base: &[crate::flattening::BoundaryPoint],
) -> Result<Analysis> {
    let shapes = shapes_from_labels(tri, base)?;
    let spec = FillingSpec::complete();
    let sol = solve_flattening(tri, &shapes, &spec)?;
    audit(tri, &shapes, &spec, &sol)?;
    let beta = beta_hat(tri, &shapes, &sol)?;
    let direct = report_from_beta(&beta, Method::Direct, sol.warnings.clone());
    Ok(Analysis {
        complete_shapes: shapes.clone(),
        shapes,
        flattening: sol,
        direct,
        corrected: None,
    })
}

fn consistency_warnings(
    tri: &OrderedTriangulation,
    shapes: &ShapeAssignment,
    report: &InvariantReport,
) -> Vec<String> {
    let bw = bloch_wigner_volume(&shapes.z, tri.orientation_signs());
    if (bw - report.volume).abs() > 1e-8 * (1.0 + bw.abs()) {
        vec![format!(
            "Bloch-Wigner volume {bw:.12} differs from Im R(beta) = {:.12}",
            report.volume
        )]
    } else {
        Vec::new()
    }
}

/// Flatten a shape assignment given as raw shapes (principal lifts) and
/// report the invariant: the entry point for retriangulated complexes
/// whose shapes were transported geometrically.
pub fn report_for_shapes(
    tri: &OrderedTriangulation,
    shapes: &[Complex64],
) -> Result<InvariantReport> {
    let sa = ShapeAssignment::from_shapes(shapes, tri.orientation_signs())?;
    let spec = FillingSpec::complete();
    let sol = solve_flattening(tri, &sa, &spec)?;
    audit(tri, &sa, &spec, &sol)?;
    let beta = beta_hat(tri, &sa, &sol)?;
    Ok(report_from_beta(&beta, Method::Direct, sol.warnings))
}

/// The lens space L(n,1) torsion class: builds the homogeneous chain with
/// the 2π/n rotation and seeded generic rotations h₁, h₂, runs the labeled
/// pipeline, and reports. The expected value is R(β̂) ≡ π²/n mod π².
pub fn lens_space_class(n: usize, seed: u64) -> Result<(BlochSum, InvariantReport)> {
    use rand::{Rng, SeedableRng};
    if n == 0 {
        return Err(Error::Parse("lens space needs n >= 1".into()));
    }
    if n == 1 {
        // L(1,1) = S³: the trivial class.
        let beta = BlochSum::empty();
        let report = vol_cs_direct(&beta);
        return Ok((beta, report));
    }
    let mut last_err = None;
    for attempt in 0..24u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let phi1: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let phi2: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let chain = crate::tricomplex::lens_chain(n, phi1, phi2)?;
        let tri = match crate::tricomplex::cycle_from_homogeneous_chain(&chain) {
            Ok(t) => t,
            Err(Error::Degenerate(d)) => {
                last_err = Some(Error::Degenerate(d));
                continue;
            }
            Err(e) => return Err(e),
        };
        match analyze_labeled(&tri, seed.wrapping_add(attempt)) {
            Ok(a) => return Ok((a.direct.beta.clone(), a.direct)),
            Err(e @ Error::Degenerate(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Degenerate("lens construction failed".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branchlog::mod_pi2;

    #[test]
    fn bloch_wigner_properties() {
        // D vanishes on the reals.
        assert_eq!(bloch_wigner(Complex64::new(0.3, 0.0)), 0.0);
        assert_eq!(bloch_wigner(Complex64::new(-2.0, 0.0)), 0.0);
        // D(z̄) = −D(z).
        let z = Complex64::new(0.4, 0.9);
        assert!((bloch_wigner(z.conj()) + bloch_wigner(z)).abs() < 1e-13);
        // The regular ideal simplex has volume V₀.
        let omega = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        assert!((bloch_wigner(omega) - 1.014_941_606_409_653_7).abs() < 1e-12);
        // Five-term functional equation of D.
        let (x, y) = (Complex64::new(0.31, 0.42), Complex64::new(0.12, 1.1));
        let one = Complex64::new(1.0, 0.0);
        let d = bloch_wigner(x) - bloch_wigner(y) + bloch_wigner(y / x)
            - bloch_wigner((one - x.inv()) / (one - y.inv()))
            + bloch_wigner((one - x) / (one - y));
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn lens_torsion_values() {
        for n in [2usize, 3, 5] {
            let (_beta, report) = lens_space_class(n, 0).unwrap();
            assert!(
                report.volume.abs() < 1e-9,
                "lens volume should vanish, got {}",
                report.volume
            );
            let expect = mod_pi2(Complex64::new(PI2 / n as f64, 0.0));
            assert!(
                report.r_beta.congruent(&expect, 1e-9),
                "L({n},1): R = {:?}, want π²/{n}",
                report.r_beta.value()
            );
        }
    }
}
