//! The tri-json document format.
//!
//! ```json
//! {
//!   "name": "m004",
//!   "tetrahedra": [
//!     { "neighbors": [1,1,1,1], "gluings": [[0,1,2],[0,1,3],[0,2,3],[1,2,3]] }
//!   ],
//!   "labels": [ [ [[re,im],[re,im],[re,im],[re,im]], ... 4 slots ], ... ],
//!   "cusps": [ { "vertex": 0, "meridian": [[tet,corner,enter,exit], ...],
//!                "longitude": [...] } ]
//! }
//! ```
//!
//! The gluing entry for face i of a tet lists the image slots of the face's
//! three slots in increasing source order; order compatibility makes the
//! listed triple strictly increasing. All indices 0-based. `labels` (one
//! 2×2 complex matrix per tet per vertex slot, row-major, entries [re,im])
//! and `cusps` are optional. Canonical serialization keeps the key order
//! above and stores no floating shapes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curves::{NormalCurve, Pass};
use super::{Label, OrderedTriangulation, Tet};
use crate::error::{Error, Result};

/// User-specified cusp curves for one torus vertex.
#[derive(Debug, Clone)]
pub struct CuspSpec {
    pub vertex: usize,
    pub meridian: NormalCurve,
    pub longitude: NormalCurve,
}

#[derive(Serialize, Deserialize)]
struct TetDoc {
    neighbors: [usize; 4],
    gluings: [[usize; 3]; 4],
}

#[derive(Serialize, Deserialize)]
struct CuspDoc {
    vertex: usize,
    meridian: Vec<[usize; 4]>,
    longitude: Vec<[usize; 4]>,
}

#[derive(Serialize, Deserialize)]
struct TriDoc {
    name: String,
    tetrahedra: Vec<TetDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<[[[f64; 2]; 4]; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cusps: Option<Vec<CuspDoc>>,
}

fn curve_from_doc(doc: &[[usize; 4]]) -> NormalCurve {
    NormalCurve {
        passes: doc
            .iter()
            .map(|&[tet, corner, enter, exit]| Pass {
                tet,
                corner,
                enter,
                exit,
            })
            .collect(),
    }
}

fn curve_to_doc(curve: &NormalCurve) -> Vec<[usize; 4]> {
    curve
        .passes
        .iter()
        .map(|p| [p.tet, p.corner, p.enter, p.exit])
        .collect()
}

/// Parse and fully validate a tri-json document.
pub fn parse(text: &str) -> Result<OrderedTriangulation> {
    let doc: TriDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed tri-json: {e}")))?;
    let tets: Vec<Tet> = doc
        .tetrahedra
        .iter()
        .map(|t| Tet {
            neighbors: t.neighbors,
            gluings: t.gluings,
        })
        .collect();
    let labels: Option<Vec<[Label; 4]>> = doc.labels.map(|ls| {
        ls.iter()
            .map(|tet_labels| {
                let mut out = [[[Complex64::new(0.0, 0.0); 2]; 2]; 4];
                for (slot, m) in tet_labels.iter().enumerate() {
                    out[slot] = [
                        [
                            Complex64::new(m[0][0], m[0][1]),
                            Complex64::new(m[1][0], m[1][1]),
                        ],
                        [
                            Complex64::new(m[2][0], m[2][1]),
                            Complex64::new(m[3][0], m[3][1]),
                        ],
                    ];
                }
                out
            })
            .collect()
    });
    let cusps = doc
        .cusps
        .unwrap_or_default()
        .iter()
        .map(|c| CuspSpec {
            vertex: c.vertex,
            meridian: curve_from_doc(&c.meridian),
            longitude: curve_from_doc(&c.longitude),
        })
        .collect();
    OrderedTriangulation::new(doc.name, tets, labels, cusps)
}

/// Canonical serialization (inverse of [`parse`] on canonical form).
pub fn serialize(tri: &OrderedTriangulation) -> String {
    let doc = TriDoc {
        name: tri.name.clone(),
        tetrahedra: tri
            .tets
            .iter()
            .map(|t| TetDoc {
                neighbors: t.neighbors,
                gluings: t.gluings,
            })
            .collect(),
        labels: tri.labels.as_ref().map(|ls| {
            ls.iter()
                .map(|tet_labels| {
                    let mut out = [[[0.0f64; 2]; 4]; 4];
                    for (slot, m) in tet_labels.iter().enumerate() {
                        out[slot] = [
                            [m[0][0].re, m[0][0].im],
                            [m[0][1].re, m[0][1].im],
                            [m[1][0].re, m[1][0].im],
                            [m[1][1].re, m[1][1].im],
                        ];
                    }
                    out
                })
                .collect()
        }),
        cusps: if tri.cusp_specs.is_empty() {
            None
        } else {
            Some(
                tri.cusp_specs
                    .iter()
                    .map(|c| CuspDoc {
                        vertex: c.vertex,
                        meridian: curve_to_doc(&c.meridian),
                        longitude: curve_to_doc(&c.longitude),
                    })
                    .collect(),
            )
        },
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_serialize_roundtrip() {
        let text = r#"{
            "name": "pillow",
            "tetrahedra": [
                { "neighbors": [1,1,1,1], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]] },
                { "neighbors": [0,0,0,0], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]] }
            ]
        }"#;
        let tri = parse(text).unwrap();
        assert_eq!(tri.num_tets(), 2);
        let ser = serialize(&tri);
        let tri2 = parse(&ser).unwrap();
        assert_eq!(serialize(&tri2), ser);
    }

    #[test]
    fn parse_errors_are_located() {
        let text = r#"{
            "name": "bad",
            "tetrahedra": [
                { "neighbors": [1,1,1,1], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,2,1]] },
                { "neighbors": [0,0,0,0], "gluings": [[1,2,3],[0,2,3],[0,1,3],[0,1,2]] }
            ]
        }"#;
        let err = parse(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tet 0") && msg.contains("face 3"), "{msg}");
    }
}
