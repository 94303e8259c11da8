//! Ordered 3-cycles from chains of homogeneous simplices.
//!
//! A chain Σ εᵢ⟨g₀⁽ⁱ⁾: … : g₃⁽ⁱ⁾⟩ of homogeneous 3-simplices for
//! G = PSL(2,C) is a cycle when its boundary 2-faces cancel in pairs, two
//! faces canceling when they are equal as homogeneous simplices (same
//! ordered triple up to left multiplication, entries up to matrix sign).
//! Canceling faces are glued; the face pairing is the greedy deterministic
//! matching on canonical forms, a face's canonical form being the triple
//! left-translated by the inverse of its first label.

use num_complex::Complex64;

use super::{Label, OrderedTriangulation, Tet};
use crate::error::{Error, Result};

const TOL: f64 = 1e-9;

pub(crate) fn mat_mul(a: &Label, b: &Label) -> Label {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn mat_inv(a: &Label) -> Result<Label> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.norm() < 1e-14 {
        return Err(Error::Degenerate("singular G-label".into()));
    }
    Ok([
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ])
}

/// Normalize the ± ambiguity of a PSL(2,C) representative deterministically.
fn sign_normalize(a: &Label) -> Label {
    let entries = [a[0][0], a[0][1], a[1][0], a[1][1]];
    for e in entries {
        if e.norm() > 1e-9 {
            let flip = e.re < -1e-12 || (e.re.abs() <= 1e-12 && e.im < 0.0);
            if flip {
                return [[-a[0][0], -a[0][1]], [-a[1][0], -a[1][1]]];
            }
            return *a;
        }
    }
    *a
}

fn mat_close(a: &Label, b: &Label) -> bool {
    let (a, b) = (sign_normalize(a), sign_normalize(b));
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < TOL))
}

/// Canonical form of an ordered label tuple: left-translate by the inverse
/// of the first label, sign-normalize each entry.
fn canonical_tuple(labels: &[Label]) -> Result<Vec<Label>> {
    let h = mat_inv(&labels[0])?;
    Ok(labels
        .iter()
        .map(|g| sign_normalize(&mat_mul(&h, g)))
        .collect())
}

fn tuples_close(a: &[Label], b: &[Label]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| mat_close(x, y))
}

/// Build a G-labeled ordered 3-cycle from a chain of signed homogeneous
/// simplices. The chain is normalized first: identical simplices with
/// opposite signs cancel.
pub fn cycle_from_homogeneous_chain(chain: &[(i64, [Label; 4])]) -> Result<OrderedTriangulation> {
    // Normalize the formal sum.
    let mut entries: Vec<(i64, [Label; 4], Vec<Label>)> = Vec::new();
    for (sign, labels) in chain {
        if sign.abs() != 1 {
            return Err(Error::NotACycle("chain coefficients must be ±1".into()));
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if mat_close(&labels[i], &labels[j]) {
                    return Err(Error::Degenerate(format!(
                        "simplex labels {i} and {j} coincide"
                    )));
                }
            }
        }
        let canon = canonical_tuple(labels)?;
        if let Some(pos) = entries
            .iter()
            .position(|(s, _, c)| *s == -sign && tuples_close(c, &canon))
        {
            entries.remove(pos);
        } else {
            entries.push((*sign, *labels, canon));
        }
    }
    if entries.is_empty() {
        return Err(Error::NotACycle("empty complex after cancellation".into()));
    }

    // Boundary faces with canonical forms and signs ε·(−1)^k.
    struct Face {
        tet: usize,
        face: usize,
        sign: i64,
        canon: Vec<Label>,
    }
    let mut faces = Vec::new();
    for (i, (sign, labels, _)) in entries.iter().enumerate() {
        for k in 0..4 {
            let triple: Vec<Label> = (0..4).filter(|&j| j != k).map(|j| labels[j]).collect();
            faces.push(Face {
                tet: i,
                face: k,
                sign: sign * if k % 2 == 0 { 1 } else { -1 },
                canon: canonical_tuple(&triple)?,
            });
        }
    }

    // Greedy deterministic matching of canceling faces.
    let mut partner: Vec<Option<usize>> = vec![None; faces.len()];
    for a in 0..faces.len() {
        if partner[a].is_some() {
            continue;
        }
        let mut found = None;
        for b in (a + 1)..faces.len() {
            if partner[b].is_none()
                && faces[b].sign == -faces[a].sign
                && tuples_close(&faces[b].canon, &faces[a].canon)
            {
                found = Some(b);
                break;
            }
        }
        let b = found.ok_or_else(|| {
            Error::NotACycle(format!(
                "boundary face {} of simplex {} does not cancel",
                faces[a].face, faces[a].tet
            ))
        })?;
        partner[a] = Some(b);
        partner[b] = Some(a);
    }

    // Assemble gluings: ascending slots map to ascending slots.
    let n = entries.len();
    let mut tets = vec![
        Tet {
            neighbors: [usize::MAX; 4],
            gluings: [[0; 3]; 4],
        };
        n
    ];
    for (a, face) in faces.iter().enumerate() {
        let b = partner[a].unwrap();
        let other = &faces[b];
        let targets: Vec<usize> = (0..4).filter(|&j| j != other.face).collect();
        tets[face.tet].neighbors[face.face] = other.tet;
        tets[face.tet].gluings[face.face] = [targets[0], targets[1], targets[2]];
    }

    let labels: Vec<[Label; 4]> = entries.iter().map(|(_, l, _)| *l).collect();
    let signs: Vec<i64> = entries.iter().map(|(s, _, _)| *s).collect();
    OrderedTriangulation::with_signs("chain".into(), tets, Some(labels), Vec::new(), Some(signs))
}

/// The lens-space L(n,1) chain Σ_{j=0}^{n−1} ⟨h₁, g h₁, gʲh₂, gʲ⁺¹h₂⟩ with
/// g the 2π/n rotation in SO(2) ⊂ PSL(2,R) and h₁, h₂ rotations chosen so
/// all labels of each simplex are distinct.
pub fn lens_chain(n: usize, phi1: f64, phi2: f64) -> Result<Vec<(i64, [Label; 4])>> {
    if n < 2 {
        return Err(Error::Unsupported(
            "the lens chain needs n >= 2 (the rotation must be nontrivial in PSL)".into(),
        ));
    }
    let rot = |theta: f64| -> Label {
        [
            [
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(-theta.sin(), 0.0),
            ],
            [
                Complex64::new(theta.sin(), 0.0),
                Complex64::new(theta.cos(), 0.0),
            ],
        ]
    };
    // The 2π/n geometric rotation about the axis fixed by SO(2) is the
    // matrix rotation by π/n (PSL identifies θ and θ+π).
    let step = std::f64::consts::PI / n as f64;
    let h1 = rot(phi1);
    let h2 = rot(phi2);
    let mut chain = Vec::with_capacity(n);
    for j in 0..n {
        let g_j = rot(step * j as f64);
        let g_j1 = rot(step * (j + 1) as f64);
        let simplex = [
            h1,
            mat_mul(&rot(step), &h1),
            mat_mul(&g_j, &h2),
            mat_mul(&g_j1, &h2),
        ];
        chain.push((1i64, simplex));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_chain_builds_cycle() {
        for n in 2..=5 {
            let chain = lens_chain(n, 0.37, 1.01).unwrap();
            let tri = cycle_from_homogeneous_chain(&chain).unwrap();
            assert_eq!(tri.num_tets(), n);
            // One central edge class of valence n: the 01-edges all carry
            // the pair (h1, g h1).
            let central = (0..tri.edge_classes().len())
                .find(|&e| tri.edge_class_of(0, 0) == e)
                .unwrap();
            assert_eq!(tri.edge_classes()[central].valence(), n);
            // Manifold: all links are spheres.
            for l in tri.vertex_links() {
                assert_eq!(l.genus, 0, "lens space links are spheres");
            }
        }
    }

    fn omit_one_simplices() -> Vec<[Label; 4]> {
        let g = |k: usize| -> Label {
            [
                [Complex64::new(1.0, 0.0), Complex64::new(k as f64, 0.3)],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            ]
        };
        let all = [g(0), g(1), g(2), g(3), g(4)];
        (0..5)
            .map(|k| {
                let mut simplex = [all[0]; 4];
                let mut idx = 0;
                for j in 0..5 {
                    if j != k {
                        simplex[idx] = all[j];
                        idx += 1;
                    }
                }
                simplex
            })
            .collect()
    }

    #[test]
    fn unsigned_omit_one_chain_is_not_a_cycle() {
        // The five omit-one simplices with uniform +1 coefficients: faces do
        // not cancel in pairs.
        let chain: Vec<(i64, [Label; 4])> = omit_one_simplices()
            .into_iter()
            .map(|s| (1i64, s))
            .collect();
        assert!(matches!(
            cycle_from_homogeneous_chain(&chain),
            Err(Error::NotACycle(_))
        ));
    }

    #[test]
    fn signed_boundary_of_4_simplex_is_a_sphere() {
        // With the alternating boundary signs the same five simplices do
        // cancel: ∂⟨g₀..g₄⟩ triangulates S³.
        let chain: Vec<(i64, [Label; 4])> = omit_one_simplices()
            .into_iter()
            .enumerate()
            .map(|(k, s)| (if k % 2 == 0 { 1i64 } else { -1 }, s))
            .collect();
        let tri = cycle_from_homogeneous_chain(&chain).unwrap();
        assert_eq!(tri.num_tets(), 5);
        for l in tri.vertex_links() {
            assert_eq!(l.genus, 0);
        }
    }

    #[test]
    fn chain_plus_negation_is_empty() {
        let chain = lens_chain(3, 0.2, 0.9).unwrap();
        let mut doubled = chain.clone();
        for (s, labels) in &chain {
            doubled.push((-s, *labels));
        }
        let err = cycle_from_homogeneous_chain(&doubled).unwrap_err();
        assert!(matches!(err, Error::NotACycle(_)));
        assert!(err.to_string().contains("empty"));
    }
}
