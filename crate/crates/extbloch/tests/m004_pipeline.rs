//! Golden checks of the m004 pipeline against its known values: shapes
//! (ω, ω⁻¹), the flattening family q = −1−2p with (r,s) = −(p,q), and
//! β̂ = [ω;0,−1] − [ω⁻¹;0,1] with R(β̂) = 2V₀·i mod π².

use num_complex::Complex64;

use extbloch::branchlog::{mod_pi2, PI2};
use extbloch::ebloch::{r_of_sum, BlochSum};
use extbloch::flatten_solver::{audit, beta_hat, solve_flattening};
use extbloch::flattening::ExtParam;
use extbloch::shapes::{build_gluing_system, solve_newton, FillingSpec};
use extbloch::tricomplex::parse;

const PI: f64 = std::f64::consts::PI;
const V0: f64 = 1.014_941_606_409_653_7;

fn m004() -> extbloch::tricomplex::OrderedTriangulation {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/m004.tri.json"
    ))
    .unwrap();
    parse(&text).unwrap()
}

#[test]
fn complete_structure_and_flattening_family() {
    let tri = m004();
    assert_eq!(tri.orientation_signs(), &[1, -1]);
    assert_eq!(tri.edge_classes().len(), 2);
    assert_eq!(tri.vertex_links().len(), 1);
    assert_eq!(tri.vertex_links()[0].genus, 1);

    let fillings = FillingSpec::complete();
    let system = build_gluing_system(&tri, &fillings).unwrap();
    let shapes = solve_newton(&system, None, 1e-12).unwrap();
    let omega = Complex64::from_polar(1.0, PI / 3.0);
    assert!((shapes.z[0] - omega).norm() < 1e-10, "z = {}", shapes.z[0]);
    assert!(
        (shapes.z[1] - omega.conj()).norm() < 1e-10,
        "y = {}",
        shapes.z[1]
    );
    assert!(system.max_residual(&shapes) < 1e-11);

    // Cusp holonomies vanish at the complete structure.
    let (u, v) = system.holonomy(&shapes, 0).unwrap();
    assert!(u.norm() < 1e-11 && v.norm() < 1e-11, "u = {u}, v = {v}");

    let sol = solve_flattening(&tri, &shapes, &fillings).unwrap();
    assert!(sol.parity_enforced);
    audit(&tri, &shapes, &fillings, &sol).unwrap();
    let (p, q) = sol.pq[0];
    let (r, s) = sol.pq[1];
    // The complete-structure family: q = −1−2p, (r,s) = −(p,q); exact.
    assert_eq!(q, -1 - 2 * p, "family: q = -1-2p");
    assert_eq!(r, -p, "family: r = -p");
    assert_eq!(s, -q, "family: s = -q");
    // Deterministic representative.
    assert_eq!((p, q, r, s), (0, -1, 0, 1));

    let beta = beta_hat(&tri, &shapes, &sol).unwrap();
    let published = BlochSum::new(vec![
        (1, ExtParam::new(omega, 0, -1).unwrap()),
        (-1, ExtParam::new(omega.conj(), 0, 1).unwrap()),
    ]);
    assert!(beta.r_congruent(&published, 1e-10));
    let r_beta = r_of_sum(&beta);
    let expected = mod_pi2(Complex64::new(0.0, 2.0 * V0));
    assert!(
        r_beta.congruent(&expected, 1e-10),
        "R(beta) = {:?}",
        r_beta.value()
    );

    // vol = Im R = 2V₀, cs = −Re R ≡ 0 mod π².
    let raw = beta.r_value_raw();
    assert!((raw.im - 2.0 * V0).abs() < 1e-10);
    let cs = (-raw.re).rem_euclid(PI2);
    assert!(cs.min(PI2 - cs) < 1e-10);
}

#[test]
fn fixture_curves_reproduce_standard_holonomies() {
    // u := log z″ + log y″ and v := 2 log z − 2 log z″ with principal logs;
    // the fixture's meridian and longitude rows must evaluate to the same
    // numbers at the complete shapes (where both vanish).
    // These are the standard log-holonomies of the m004 cusp basis.
    let tri = m004();
    let system = build_gluing_system(&tri, &FillingSpec::complete()).unwrap();
    let shapes = solve_newton(&system, None, 1e-12).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let zpp = |z: Complex64| (one - one / z).ln();
    let u_formula = zpp(shapes.z[0]) + zpp(shapes.z[1]);
    let v_formula = 2.0 * shapes.z[0].ln() - 2.0 * zpp(shapes.z[0]);
    let (u, v) = system.holonomy(&shapes, 0).unwrap();
    assert!(
        (u - u_formula).norm() < 1e-10,
        "u = {u} vs formula {u_formula}"
    );
    assert!(
        (v - v_formula).norm() < 1e-10,
        "v = {v} vs formula {v_formula}"
    );
    assert!(u.norm() < 1e-10 && v.norm() < 1e-10);

    // The flattening row coefficients of the fixture curves in the
    // standard convention: u-row −p−q−r−s, v-row 4p+2q.
    use extbloch::tricomplex::{curve_row, cusp_basis};
    let (mu, lambda) = cusp_basis(&tri, 0, &tri.cusp_specs).unwrap();
    let upq = curve_row(&tri, &mu, "u").pq_coeffs(2);
    let vpq = curve_row(&tri, &lambda, "v").pq_coeffs(2);
    assert_eq!(upq, vec![(-1, -1), (-1, -1)]);
    assert_eq!(vpq, vec![(4, 2), (0, 0)]);
}

#[test]
fn default_cusp_basis_works_without_specs() {
    // Strip the explicit cusp curves: the shortest-first homology basis
    // must still pin the complete structure.
    let tri = m004();
    let bare = extbloch::tricomplex::OrderedTriangulation::new(
        tri.name.clone(),
        tri.tets.clone(),
        None,
        Vec::new(),
    )
    .unwrap();
    let system = build_gluing_system(&bare, &FillingSpec::complete()).unwrap();
    let shapes = solve_newton(&system, None, 1e-12).unwrap();
    let omega = Complex64::from_polar(1.0, PI / 3.0);
    assert!((shapes.z[0] - omega).norm() < 1e-10);
    assert!((shapes.z[1] - omega.conj()).norm() < 1e-10);
}

#[test]
fn edge_loops_and_meridian_have_zero_log_holonomy_at_flattening() {
    use extbloch::flattening::ell;
    use extbloch::tricomplex::{cusp_basis, edge_loop, log_holonomy};
    let tri = m004();
    let spec = FillingSpec::complete();
    let system = build_gluing_system(&tri, &spec).unwrap();
    let shapes = solve_newton(&system, None, 1e-12).unwrap();
    let sol = solve_flattening(&tri, &shapes, &spec).unwrap();
    let flats: Vec<_> = (0..2)
        .map(|i| {
            ell(&shapes
                .ext_param(i, sol.pq[i].0, sol.pq[i].1, tri.orientation_signs()[i])
                .unwrap())
        })
        .collect();
    for class in tri.edge_classes() {
        let curve = edge_loop(&tri, class);
        assert!(log_holonomy(&tri, &curve, &flats).norm() < 1e-10);
    }
    let (mu, lambda) = cusp_basis(&tri, 0, &tri.cusp_specs).unwrap();
    assert!(log_holonomy(&tri, &mu, &flats).norm() < 1e-10);
    assert!(log_holonomy(&tri, &lambda, &flats).norm() < 1e-10);
}

#[test]
fn newton_edge_cases() {
    let tri = m004();
    let system = build_gluing_system(&tri, &FillingSpec::complete()).unwrap();
    // Far initial guess: either the same solution (basin) or a clean error.
    let far = extbloch::shapes::ShapeAssignment::from_shapes(
        &[Complex64::new(-3.0, 8.0), Complex64::new(-3.0, 8.0)],
        &[1, 1],
    )
    .unwrap();
    match solve_newton(&system, Some(&far), 1e-12) {
        Ok(sol) => {
            let omega = Complex64::from_polar(1.0, PI / 3.0);
            assert!(
                (sol.z[0] - omega).norm() < 1e-8 && (sol.z[1] - omega.conj()).norm() < 1e-8,
                "converged elsewhere: {:?}",
                sol.z
            );
        }
        Err(extbloch::Error::Solver(_)) => {}
        Err(e) => panic!("unexpected error class: {e}"),
    }

    // Inconsistent over-constrained system: divergence error.
    let mut broken = system.clone();
    broken.rows[0].1 += Complex64::new(0.7, 0.3);
    assert!(matches!(
        solve_newton(&broken, None, 1e-12),
        Err(extbloch::Error::Solver(_))
    ));
}

#[test]
fn trivial_filling_consistency() {
    // Killing the meridian ((1,0) in the fixture framing) gives back a
    // non-hyperbolic manifold; the gluing equations still have algebraic
    // solutions with negatively oriented simplices and the continuation may
    // land on one. Whatever branch is reached, the two Dehn-filling
    // formulas must agree on it, and with steps = 1 the adaptive-halving
    // failure path is exercised on the way.
    let tri = m004();
    let spec = FillingSpec {
        fillings: vec![(0, extbloch::shapes::Filling::filled(1, 0).unwrap())],
    };
    match extbloch::invariants::analyze_geometric(&tri, &spec, 1) {
        Ok(analysis) => {
            let corrected = analysis.corrected.unwrap();
            assert!(
                analysis.direct.r_beta.congruent(&corrected.r_beta, 1e-9),
                "branch-consistency of the two formulas"
            );
        }
        Err(extbloch::Error::Solver(_)) | Err(extbloch::Error::Flattening(_)) => {}
        Err(e) => panic!("unexpected error class: {e}"),
    }
}

#[test]
fn parity_properties_on_basis_curves() {
    use extbloch::flattening::ExtParam as EP;
    use extbloch::tricomplex::{normal_loop_basis, parity_along};
    let tri = m004();
    let system = build_gluing_system(&tri, &FillingSpec::complete()).unwrap();
    let shapes = solve_newton(&system, None, 1e-12).unwrap();

    // Geometric shapes with the zero flattening (p,q) = (0,0): parity along
    // every normal path vanishes.
    let zero: Vec<EP> = shapes
        .z
        .iter()
        .map(|&z| EP::new(z, 0, 0).unwrap())
        .collect();
    let basis = normal_loop_basis(&tri);
    // 4 gluings − 2 tets + 1 = 3 dual cycles, plus one loop per edge class.
    assert_eq!(basis.len(), 3 + 2);
    for curve in &basis {
        assert_eq!(parity_along(&tri, curve, &zero), 0);
    }

    // Adding 1 to one p flips the parity of curves passing that tet's
    // w0-edges an odd number of times, and parity is additive under
    // concatenation of pass lists.
    let bumped: Vec<EP> = shapes
        .z
        .iter()
        .enumerate()
        .map(|(i, &z)| EP::new(z, if i == 0 { 1 } else { 0 }, 0).unwrap())
        .collect();
    for curve in &basis {
        // p enters the parity parameter on w₀-edges (δ = p) and on
        // w₂-edges (δ = 1+p+q).
        let p_passes = curve
            .passes
            .iter()
            .filter(|p| p.tet == 0 && (p.wtype() == 0 || p.wtype() == 2))
            .count();
        let expect = (p_passes % 2) as u8;
        assert_eq!(parity_along(&tri, curve, &bumped), expect);
        // Concatenation doubles every pass: parity 0.
        let mut doubled = curve.clone();
        doubled.passes.extend(curve.passes.iter().copied());
        assert_eq!(parity_along(&tri, &doubled, &bumped), 0);
    }
}
