//! Dehn-filling cross-checks on m004: the direct (deformed-flattening) and
//! corrected (transported-flattening + χ(e^λ)) formulas must agree mod π²,
//! the filled flattening family must satisfy its defining relations, and
//! Im R(β̂) must equal the Bloch–Wigner volume.

use extbloch::invariants::{analyze_geometric, bloch_wigner_volume};
use extbloch::shapes::{Filling, FillingSpec};
use extbloch::tricomplex::parse;

fn m004() -> extbloch::tricomplex::OrderedTriangulation {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/m004.tri.json"
    ))
    .unwrap();
    parse(&text).unwrap()
}

#[test]
fn filled_invariants_cross_check() {
    let tri = m004();
    for (alpha, beta) in [(5i64, 1i64), (1, 2), (6, 1)] {
        let filling = Filling::filled(alpha, beta).unwrap();
        let Filling::Filled { gamma, delta, .. } = filling else {
            panic!()
        };
        let spec = FillingSpec {
            fillings: vec![(0, filling)],
        };
        let analysis = analyze_geometric(&tri, &spec, 32).unwrap();
        let direct = &analysis.direct;
        let corrected = analysis.corrected.as_ref().unwrap();

        // The two formulas agree mod π².
        assert!(
            direct.r_beta.congruent(&corrected.r_beta, 1e-9),
            "({alpha},{beta}): direct {:?} vs corrected {:?}",
            direct.r_beta.value(),
            corrected.r_beta.value()
        );

        // Volume from R matches the Bloch–Wigner sum.
        let bw = bloch_wigner_volume(&analysis.shapes.z, tri.orientation_signs());
        assert!(
            (bw - direct.volume).abs() < 1e-9,
            "({alpha},{beta}): BW volume {bw} vs Im R {}",
            direct.volume
        );
        assert!(direct.volume > 0.0, "filled volume should be positive");
        assert!(direct.volume < 2.029_883_212_819_307);

        // Filled flattening family: for some valid (γ̃,δ̃) with
        // αδ̃ − βγ̃ = 1, q = γ̃−1−2p, r = −2δ̃−p, s = −γ̃+4δ̃+1+2p.
        let (p, q) = analysis.flattening.pq[0];
        let (r, s) = analysis.flattening.pq[1];
        let gamma_t = q + 1 + 2 * p;
        assert_eq!((r + p) % 2, 0, "r + p must be even");
        let delta_t = -(r + p) / 2;
        assert_eq!(
            alpha * delta_t - beta * gamma_t,
            1,
            "({alpha},{beta}): reconstructed frame (γ̃,δ̃) = ({gamma_t},{delta_t}) not unimodular \
             [solver gave (p,q,r,s) = ({p},{q},{r},{s}), gcd frame ({gamma},{delta})]"
        );
        assert_eq!(s, -gamma_t + 4 * delta_t + 1 + 2 * p, "s relation");
    }
}

#[test]
fn trivial_framing_shift_preserves_chi() {
    // Changing (γ,δ) by (γ+α, δ+β) shifts λ by −2πi and leaves χ(e^λ)
    // invariant; both framings give the same corrected invariant.
    let tri = m004();
    let f1 = Filling::with_frame(5, 1, 4, 1).unwrap();
    let f2 = Filling::with_frame(5, 1, 9, 2).unwrap();
    let mut reports = Vec::new();
    for f in [f1, f2] {
        let spec = FillingSpec {
            fillings: vec![(0, f)],
        };
        let analysis = analyze_geometric(&tri, &spec, 32).unwrap();
        reports.push(analysis.corrected.unwrap());
    }
    assert!(reports[0].r_beta.congruent(&reports[1].r_beta, 1e-9));
}
