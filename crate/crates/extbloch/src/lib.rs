//! Extended Bloch group elements and the invariant i(vol + i·cs) mod π² of
//! hyperbolic 3-manifolds, computed from triangulation data.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`tricomplex`]: ordered 3-cycles (tetrahedra with order-compatible
//!    face gluings), edge classes, vertex links, normal curves.
//! 2. [`shapes`]: ideal simplex shapes, read off PSL(2,C)-labelings or
//!    Newton-solved from the gluing equations, with branch-tracked logs.
//! 3. [`flatten_solver`]: integer branch pairs (p,q) per tetrahedron
//!    making log-parameters vanish around edges and along cusp curves and
//!    parities vanish along normal paths; assembles β̂ = Σ εᵢ[zᵢ;pᵢ,qᵢ].
//! 4. [`invariants`]: evaluates the lifted Rogers dilogarithm R on β̂ to
//!    obtain i(vol + i·cs) mod π², with Dehn-filling cross-checks and
//!    lens-space torsion classes.
//!
//! Supporting kernels: [`branchlog`] (dilogarithms, R(z;p,q), arithmetic
//! mod π²), [`flattening`] (cover points and log-parameter triples),
//! [`ebloch`] (formal sums, lifted five-term instances, χ elements) and
//! [`zsolve`] (exact integer linear algebra).

// Index-parallel loops over tets and slots read better than iterator
// chains in the combinatorial kernels.
#![allow(clippy::needless_range_loop)]

pub mod branchlog;
pub mod ebloch;
pub mod error;
pub mod flatten_solver;
pub mod flattening;
pub mod invariants;
pub mod shapes;
pub mod tricomplex;
pub mod zsolve;

pub use error::{Error, Result};
