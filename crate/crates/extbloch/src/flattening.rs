//! Flattened ideal simplices.
//!
//! An ideal hyperbolic simplex with ordered vertices has a cross-ratio shape
//! z ∈ C∖{0,1}; its three edge pairs carry z, z′ = 1/(1−z), z″ = 1−1/z. A
//! point (z;p,q) of the Z×Z cover corresponds bijectively to a combinatorial
//! flattening: the log-parameter triple
//!
//!   ℓ(z;p,q) = (log z + pπi, −log(1−z) + qπi, log(1−z) − log z − (p+q)πi)
//!
//! whose components sum to zero and attach to the edge pairs {01,23},
//! {03,12}, {02,13} respectively.
//!
//! Reordering the vertices of a flattened simplex changes the represented
//! extended pre-Bloch element by an explicit χ-element; the five correction
//! formulas live in [`permute_even`] and [`permute_odd`].

use num_complex::Complex64;

use crate::branchlog::{log_with_side, Side};
use crate::error::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// A point (z;p,q) of the Z×Z cover of C∖{0,1}.
///
/// `side` resolves the half-plane for real z outside (0,1); it is ignored
/// for other z. Two flagged points are identified by the cover relations
/// (x+0i;p,q) ~ (x−0i;p+2,q) for x < 0 and (x+0i;p,q) ~ (x−0i;p,q+2) for
/// x > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtParam {
    pub z: Complex64,
    pub p: i64,
    pub q: i64,
    pub side: Side,
}

impl ExtParam {
    pub fn new(z: Complex64, p: i64, q: i64) -> Result<ExtParam> {
        Self::with_side(z, p, q, Side::Plus)
    }

    pub fn with_side(z: Complex64, p: i64, q: i64, side: Side) -> Result<ExtParam> {
        if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
            return Err(Error::Domain(format!("shape z = {z} not in C \\ {{0,1}}")));
        }
        Ok(ExtParam { z, p, q, side })
    }

    /// Branch-resolved log z.
    pub fn log_z(&self) -> Complex64 {
        log_with_side(self.z, self.side).expect("z != 0")
    }

    /// Branch-resolved log (1−z). The side of 1−z is opposite to that of z.
    pub fn log_one_minus_z(&self) -> Complex64 {
        log_with_side(Complex64::new(1.0, 0.0) - self.z, self.side.flip()).expect("z != 1")
    }

    /// Lifted Rogers value R(z;p,q) (compare mod π²).
    pub fn r_value(&self) -> Complex64 {
        crate::branchlog::r_value(self.z, self.side, self.p, self.q).expect("valid param")
    }

    /// Canonical form: real shapes are flagged `Side::Plus`, adjusting the
    /// branch index per the cover identification.
    pub fn canonical(&self) -> ExtParam {
        if self.side == Side::Minus && self.z.im == 0.0 {
            if self.z.re < 0.0 {
                return ExtParam {
                    side: Side::Plus,
                    p: self.p - 2,
                    ..*self
                };
            }
            if self.z.re > 1.0 {
                return ExtParam {
                    side: Side::Plus,
                    q: self.q - 2,
                    ..*self
                };
            }
        }
        *self
    }

    /// The conjugate cover point (z̄;−p,−q).
    pub fn conj(&self) -> ExtParam {
        ExtParam {
            z: self.z.conj(),
            p: -self.p,
            q: -self.q,
            side: self.side.flip(),
        }
    }
}

/// A combinatorial flattening (w₀,w₁,w₂) with w₀+w₁+w₂ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatTriple {
    pub w0: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
}

/// The bijection ℓ from cover points to combinatorial flattenings.
pub fn ell(param: &ExtParam) -> FlatTriple {
    let ipi = Complex64::new(0.0, PI);
    let w0 = param.log_z() + ipi * param.p as f64;
    let w1 = -param.log_one_minus_z() + ipi * param.q as f64;
    FlatTriple {
        w0,
        w1,
        w2: -w0 - w1,
    }
}

/// Inverse of [`ell`]: recovers (z;p,q) from a log-parameter triple.
///
/// z = ±e^{w₀} and 1−z = ±e^{−w₁}; the two signs are resolved by requiring
/// z + (1−z) = 1, which pins z.
pub fn from_triple(t: &FlatTriple) -> Result<ExtParam> {
    let sum = t.w0 + t.w1 + t.w2;
    if sum.norm() > 1e-9 {
        return Err(Error::InvalidTriple(format!(
            "components sum to {sum}, not 0"
        )));
    }
    let a = t.w0.exp();
    let b = (-t.w1).exp();
    // Choose signs s, u ∈ {±1} with s·a + u·b = 1.
    let mut best: Option<(f64, Complex64)> = None;
    for s in [1.0f64, -1.0] {
        for u in [1.0f64, -1.0] {
            let miss = (a * s + b * u - Complex64::new(1.0, 0.0)).norm();
            // Reconcile both exponentials into one z estimate.
            let z = (a * s + (Complex64::new(1.0, 0.0) - b * u)) * 0.5;
            if best.as_ref().is_none_or(|(m, _)| miss < *m) {
                best = Some((miss, z));
            }
        }
    }
    let (miss, z) = best.unwrap();
    if miss > 1e-6 {
        return Err(Error::InvalidTriple(format!(
            "no sign choice makes z + (1-z) = 1 (residual {miss:.2e})"
        )));
    }
    if (z - Complex64::new(1.0, 0.0)).norm() < 1e-9 || z.norm() < 1e-9 {
        return Err(Error::InvalidTriple(format!("recovered shape z = {z}")));
    }
    // Snap exactly-real-looking shapes onto the axis so the side flag governs.
    let z = if z.im.abs() < 1e-13 && (z.re < -1e-9 || z.re > 1.0 + 1e-9) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    };
    // Real shapes snap to Side::Plus canonical form; off the cuts the flag
    // is inert anyway.
    let side = Side::Plus;
    let param0 = ExtParam {
        z,
        p: 0,
        q: 0,
        side,
    };
    let pf = (t.w0 - param0.log_z()) / Complex64::new(0.0, PI);
    let qf = (t.w1 + param0.log_one_minus_z()) / Complex64::new(0.0, PI);
    let p = pf.re.round();
    let q = qf.re.round();
    if (pf - Complex64::new(p, 0.0)).norm() > 1e-6 || (qf - Complex64::new(q, 0.0)).norm() > 1e-6 {
        return Err(Error::InvalidTriple(format!(
            "branch indices not integral: p = {pf}, q = {qf}"
        )));
    }
    Ok(ExtParam {
        z,
        p: p as i64,
        q: q as i64,
        side,
    })
}

/// A point of the boundary sphere CP¹ in homogeneous coordinates (a,b);
/// the point is a/b, with ∞ = (1,0).
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub a: Complex64,
    pub b: Complex64,
}

impl BoundaryPoint {
    pub fn new(a: Complex64, b: Complex64) -> Result<BoundaryPoint> {
        if a.norm() == 0.0 && b.norm() == 0.0 {
            return Err(Error::Domain("(0,0) is not a point of CP^1".into()));
        }
        Ok(BoundaryPoint { a, b }.normalized())
    }

    pub fn from_complex(z: Complex64) -> BoundaryPoint {
        BoundaryPoint {
            a: z,
            b: Complex64::new(1.0, 0.0),
        }
        .normalized()
    }

    pub fn infinity() -> BoundaryPoint {
        BoundaryPoint {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Scale so the max-modulus coordinate is 1.
    pub fn normalized(&self) -> BoundaryPoint {
        let s = if self.a.norm() >= self.b.norm() {
            self.a
        } else {
            self.b
        };
        BoundaryPoint {
            a: self.a / s,
            b: self.b / s,
        }
    }

    /// Apply a Möbius transformation given as a 2×2 matrix [[m00,m01],[m10,m11]].
    pub fn moebius(&self, m: &[[Complex64; 2]; 2]) -> BoundaryPoint {
        BoundaryPoint {
            a: m[0][0] * self.a + m[0][1] * self.b,
            b: m[1][0] * self.a + m[1][1] * self.b,
        }
        .normalized()
    }
}

fn pdet(x: &BoundaryPoint, y: &BoundaryPoint) -> Complex64 {
    x.a * y.b - y.a * x.b
}

/// Cross-ratio [z₀:z₁:z₂:z₃] = (z₂−z₁)(z₃−z₀)/((z₂−z₀)(z₃−z₁)), computed
/// projectively so ∞ needs no special casing.
pub fn cross_ratio(
    z0: &BoundaryPoint,
    z1: &BoundaryPoint,
    z2: &BoundaryPoint,
    z3: &BoundaryPoint,
) -> Result<Complex64> {
    let pts = [z0, z1, z2, z3];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pdet(pts[i], pts[j]).norm() < 1e-12 {
                return Err(Error::Degenerate(format!(
                    "boundary points {i} and {j} coincide"
                )));
            }
        }
    }
    let num = pdet(z2, z1) * pdet(z3, z0);
    let den = pdet(z2, z0) * pdet(z3, z1);
    Ok(num / den)
}

/// Edge index 0..5 ↔ vertex pair.
pub const EDGE_VERTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Which component of the flattening each edge carries:
/// {01,23} → w₀, {03,12} → w₁, {02,13} → w₂.
pub const EDGE_WTYPE: [usize; 6] = [0, 2, 1, 1, 2, 0];

/// Edge index from an unordered slot pair.
pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTS
        .iter()
        .position(|&e| e == (a, b))
        .expect("valid slot pair")
}

/// Log-parameter l_E for a tet edge (0..5).
pub fn edge_param(t: &FlatTriple, edge: usize) -> Complex64 {
    match EDGE_WTYPE[edge] {
        0 => t.w0,
        1 => t.w1,
        _ => t.w2,
    }
}

/// Parity parameter (s mod 2) at an edge: l_E = (principal log of the edge's
/// cross-ratio shape) + sπi with the shape being z, z′ = 1/(1−z) or
/// z″ = 1−1/z as the edge dictates.
pub fn parity_param(t: &FlatTriple, edge: usize) -> Result<u8> {
    let param = from_triple(t)?;
    Ok(parity_param_of(&param, EDGE_WTYPE[edge]))
}

/// Parity parameter by w-type directly from the cover point: p, q and
/// 1+p+q mod 2 for w₀-, w₁- and w₂-edges.
pub fn parity_param_of(param: &ExtParam, wtype: usize) -> u8 {
    let s = match wtype {
        0 => param.p,
        1 => param.q,
        _ => 1 + param.p + param.q,
    };
    (s.rem_euclid(2)) as u8
}

/// One of the two vertex 3-cycles (even permutations modulo the Klein group).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenCycle {
    /// z ↦ z′ = 1/(1−z).
    ToZPrime,
    /// z ↦ z″ = 1−1/z.
    ToZDoublePrime,
}

/// One of the three transpositions (odd permutations modulo the Klein group).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddSwap {
    /// Exchange the vertices of a w₀-edge: z ↦ 1/z.
    Swap01,
    /// Exchange across a w₂-edge: z ↦ 1−z.
    Swap02,
    /// Exchange across a w₁-edge: z ↦ z/(z−1).
    Swap03,
}

fn require_nonreal(param: &ExtParam) -> Result<f64> {
    if param.z.im == 0.0 {
        return Err(Error::Unsupported(
            "permutation identities are not defined for real (flat) shapes".into(),
        ));
    }
    Ok(param.z.im.signum())
}

/// Even vertex reordering. Returns the reordered cover point together with
/// the argument w of the χ(w) element by which the represented sum changes:
/// [z;p,q] − [result] = χ(w).
pub fn permute_even(param: &ExtParam, cycle: EvenCycle) -> Result<(ExtParam, Complex64)> {
    let sgn = require_nonreal(param)?;
    let one = Complex64::new(1.0, 0.0);
    let (z, p, q) = (param.z, param.p, param.q);
    // The identities below are stated for Im z > 0; the lower-half-plane
    // versions follow by conjugating (z;p,q) ↦ (z̄;−p,−q), which shifts the
    // third-component constants by 2 and leaves the χ-argument value alone.
    let (znew, pnew, qnew, chi_arg) = match cycle {
        EvenCycle::ToZPrime => {
            let c = if sgn > 0.0 { -1 } else { 1 };
            (
                one / (one - z),
                q,
                c - p - q,
                Complex64::from_polar(1.0, PI / 3.0 + q as f64 * PI),
            )
        }
        EvenCycle::ToZDoublePrime => {
            let c = if sgn > 0.0 { -1 } else { 1 };
            (
                one - one / z,
                c - p - q,
                p,
                Complex64::from_polar(1.0, -PI / 3.0 + p as f64 * PI),
            )
        }
    };
    Ok((ExtParam::new(znew, pnew, qnew)?, chi_arg))
}

/// Odd vertex reordering. Returns the reordered cover point and the χ
/// argument w with [z;p,q] + [result] = χ(w).
pub fn permute_odd(param: &ExtParam, swap: OddSwap) -> Result<(ExtParam, Complex64)> {
    let sgn = require_nonreal(param)?;
    let one = Complex64::new(1.0, 0.0);
    let (z, p, q) = (param.z, param.p, param.q);
    let c = if sgn > 0.0 { 1 } else { -1 };
    let (znew, pnew, qnew, chi_arg) = match swap {
        OddSwap::Swap01 => (
            one / z,
            -p,
            c + p + q,
            Complex64::from_polar(1.0, p as f64 * PI),
        ),
        OddSwap::Swap02 => (one - z, -q, -p, Complex64::from_polar(1.0, PI / 3.0)),
        OddSwap::Swap03 => (
            z / (z - one),
            c + p + q,
            -q,
            Complex64::from_polar(1.0, 2.0 * PI / 3.0 + q as f64 * PI),
        ),
    };
    Ok((ExtParam::new(znew, pnew, qnew)?, chi_arg))
}
