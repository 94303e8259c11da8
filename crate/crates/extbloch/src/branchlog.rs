//! Branch-aware complex special functions.
//!
//! Everything downstream reduces to four evaluations:
//!
//!   log z            principal branch, Im ∈ (−π, π]
//!   Li₂(z)           dilogarithm, −∫₀^z log(1−t)/t dt, principal branch
//!   ℛ(z)             Rogers dilogarithm, ½ log z log(1−z) + Li₂(z)
//!   R(z;p,q)         ℛ(z) + (πi/2)(p log(1−z) + q log z) − π²/6
//!
//! R is well defined modulo π² on the Z×Z cover of C∖{0,1}; values that are
//! only meaningful mod π² are carried as [`ModPiSquared`].
//!
//! Real arguments outside [0,1] sit on the branch cuts. They are admitted
//! with a [`Side`] flag naming the half-plane the value is a limit from;
//! `Side::Plus` (limit from Im > 0) is the default for unflagged input.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// π².
pub const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// Half-plane flag for real arguments on a branch cut.
///
/// `Plus` means the value is the limit from Im > 0, `Minus` from Im < 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    #[default]
    Plus,
    Minus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Principal logarithm, Im ∈ (−π, π].
pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("log of zero".into()));
    }
    Ok(z.ln())
}

/// Principal log of a possibly-real argument, resolving the cut by `side`.
///
/// For z on the negative real axis the limit from Im > 0 has arg = +π and
/// the limit from Im < 0 has arg = −π. Off the real axis `side` is ignored.
pub fn log_with_side(z: Complex64, side: Side) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("log of zero".into()));
    }
    if z.im == 0.0 && z.re < 0.0 {
        let arg = side.sign() * std::f64::consts::PI;
        return Ok(Complex64::new(z.re.abs().ln(), arg));
    }
    Ok(z.ln())
}

/// Even Bernoulli numbers B₂, B₄, …, B₃₀ (B₀ and B₁ handled separately).
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174_611.0 / 330.0,
    854_513.0 / 138.0,
    -236_364_091.0 / 2730.0,
    8_553_103.0 / 6.0,
    -23_749_461_029.0 / 870.0,
    8_615_841_276_005.0 / 14322.0,
];

/// Power series Σ zᵏ/k², for |z| ≤ 0.5.
fn dilog_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..200u32 {
        zk *= z;
        let term = zk / ((k * k) as f64);
        sum += term;
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    sum
}

/// Series in w = −log(1−z): Li₂(z) = Σ_{k≥0} Bₖ w^{k+1}/(k+1)!.
///
/// Used on the annulus where neither the direct series nor its images under
/// the functional equations converge quickly. Callers arrange |w| ≲ 1.5.
fn dilog_bernoulli(w: Complex64) -> Complex64 {
    // k = 0 and k = 1 terms: w − w²/4.
    let mut sum = w - w * w * 0.25;
    let w2 = w * w;
    // k = 2m even terms: B_{2m} w^{2m+1}/(2m+1)!.
    let mut wpow = w;
    let mut fact = 1.0f64; // (2m+1)! built incrementally
    for (m, &b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = 2 * (m + 1);
        wpow *= w2;
        fact *= (k * (k + 1)) as f64;
        let term = wpow * (b / fact);
        sum += term;
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
    }
    sum
}

/// Dilogarithm Li₂(z) = −∫₀^z log(1−t)/t dt, principal branch.
///
/// Absolute error below 1e−13 for |z| ≤ 10. On the cut [1, ∞) the value is
/// the limit from the upper half-plane; see [`dilog_with_side`] to pick.
pub fn dilog(z: Complex64) -> Complex64 {
    dilog_with_side(z, Side::Plus)
}

/// Dilogarithm with an explicit half-plane limit for real z > 1.
pub fn dilog_with_side(z: Complex64, side: Side) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(PI2 / 6.0, 0.0);
    }
    if z.re > 0.5 {
        // Reflection: Li₂(z) = π²/6 − log z log(1−z) − Li₂(1−z).
        // 1−z has Re ≤ 1/2, so the remaining evaluation is cut-free.
        let one_m_z = Complex64::new(1.0, 0.0) - z;
        let lz = log_with_side(z, side).expect("z != 0");
        let l1z = log_with_side(one_m_z, side.flip()).expect("z != 1");
        return Complex64::new(PI2 / 6.0, 0.0) - lz * l1z - dilog_core(one_m_z);
    }
    dilog_core(z)
}

/// Li₂ on the half-plane Re z ≤ 1/2 (away from the cut; plain principal logs).
fn dilog_core(z: Complex64) -> Complex64 {
    if z.norm() > 1.0 {
        // Inversion: Li₂(z) = −π²/6 − ½ log²(−z) − Li₂(1/z).
        // Re(1/z) ≤ 1/2 still, and |1/z| < 1.
        let lmz = (-z).ln();
        return -Complex64::new(PI2 / 6.0, 0.0) - lmz * lmz * 0.5 - dilog_core(z.inv());
    }
    if z.norm() <= 0.5 {
        dilog_series(z)
    } else {
        let w = -(Complex64::new(1.0, 0.0) - z).ln();
        dilog_bernoulli(w)
    }
}

/// Rogers dilogarithm ℛ(z) = ½ log z log(1−z) + Li₂(z).
pub fn rogers(z: Complex64) -> Result<Complex64> {
    rogers_with_side(z, Side::Plus)
}

/// Rogers dilogarithm with a half-plane flag for real z outside (0,1).
pub fn rogers_with_side(z: Complex64, side: Side) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain(format!("rogers undefined at z = {z}")));
    }
    let lz = log_with_side(z, side)?;
    let l1z = log_with_side(Complex64::new(1.0, 0.0) - z, side.flip())?;
    Ok(lz * l1z * 0.5 + dilog_with_side(z, side))
}

/// The lifted Rogers function R(z;p,q) = ℛ(z) + (πi/2)(p log(1−z) + q log z) − π²/6.
///
/// Well defined modulo π² on the cover; callers reduce with [`mod_pi2`] when
/// comparing.
pub fn r_value(z: Complex64, side: Side, p: i64, q: i64) -> Result<Complex64> {
    let lz = log_with_side(z, side)?;
    let l1z = log_with_side(Complex64::new(1.0, 0.0) - z, side.flip())?;
    let rog = rogers_with_side(z, side)?;
    let half_pi_i = Complex64::new(0.0, std::f64::consts::PI / 2.0);
    Ok(rog + half_pi_i * (l1z * p as f64 + lz * q as f64) - Complex64::new(PI2 / 6.0, 0.0))
}

/// A complex number whose real part is only meaningful modulo π².
///
/// Canonical form keeps Re ∈ [0, π²); the imaginary part is untouched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModPiSquared {
    value: Complex64,
}

impl ModPiSquared {
    pub fn value(&self) -> Complex64 {
        self.value
    }

    /// Distance to `other` respecting the mod-π² wrap on real parts.
    pub fn dist(&self, other: &ModPiSquared) -> f64 {
        let dre = (self.value.re - other.value.re).rem_euclid(PI2);
        let dre = dre.min(PI2 - dre);
        let dim = (self.value.im - other.value.im).abs();
        dre.max(dim)
    }

    /// Congruence test at tolerance `tol` (compares across the wrap boundary).
    pub fn congruent(&self, other: &ModPiSquared, tol: f64) -> bool {
        self.dist(other) <= tol
    }

    pub fn zero() -> ModPiSquared {
        ModPiSquared {
            value: Complex64::new(0.0, 0.0),
        }
    }
}

impl std::ops::Add for ModPiSquared {
    type Output = ModPiSquared;
    fn add(self, rhs: ModPiSquared) -> ModPiSquared {
        mod_pi2(self.value + rhs.value)
    }
}

impl std::ops::Sub for ModPiSquared {
    type Output = ModPiSquared;
    fn sub(self, rhs: ModPiSquared) -> ModPiSquared {
        mod_pi2(self.value - rhs.value)
    }
}

/// Reduce the real part into [0, π²), leaving the imaginary part alone.
pub fn mod_pi2(c: Complex64) -> ModPiSquared {
    ModPiSquared {
        value: Complex64::new(c.re.rem_euclid(PI2), c.im),
    }
}
