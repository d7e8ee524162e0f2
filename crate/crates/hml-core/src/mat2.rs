//! Dense 2×2 complex matrices.
//!
//! Everything pointwise in this crate (Higgs-field values, gauges, metric
//! values, curvature samples) is a 2×2 complex matrix, so a bespoke value
//! type beats pulling in a matrix library.

use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use crate::{c64, C64};

/// A 2×2 complex matrix `[[a, b], [c, d]]`, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Mat2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn zero() -> Self {
        Mat2::splat(c64(0.0, 0.0))
    }

    pub fn identity() -> Self {
        Mat2::diag(c64(1.0, 0.0), c64(1.0, 0.0))
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2::new(a, c64(0.0, 0.0), c64(0.0, 0.0), d)
    }

    fn splat(v: C64) -> Self {
        Mat2::new(v, v, v, v)
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Mat2::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c64(s, 0.0))
    }

    /// Inverse; `None` when the determinant vanishes to working precision.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() < 1e-300 {
            return None;
        }
        let inv = det.finv();
        Some(Mat2::new(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv))
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Largest entry modulus; the pointwise sup norm used for residuals.
    pub fn norm_max(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    /// Entrywise maximum distance to `other`.
    pub fn dist_max(&self, other: &Mat2) -> f64 {
        (*self - *other).norm_max()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c, self.d + rhs.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_re(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

/// A Hermitian positive metric value `h = [[f1, g], [conj g, f2]]`.
///
/// `f1`, `f2` are stored as reals so Hermiticity holds by construction;
/// solver paths keep `det h = f1 f2 - |g|^2 = 1` exactly by parametrising
/// through [`HermMetric::from_eta`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermMetric {
    pub f1: f64,
    pub f2: f64,
    pub g: C64,
}

impl HermMetric {
    pub fn identity() -> Self {
        HermMetric { f1: 1.0, f2: 1.0, g: c64(0.0, 0.0) }
    }

    pub fn diag(f1: f64, f2: f64) -> Self {
        HermMetric { f1, f2, g: c64(0.0, 0.0) }
    }

    pub fn det(&self) -> f64 {
        self.f1 * self.f2 - self.g.norm_sqr()
    }

    pub fn as_mat(&self) -> Mat2 {
        Mat2::new(c64(self.f1, 0.0), self.g, self.g.conj(), c64(self.f2, 0.0))
    }

    /// Inverse of a det-1 metric (adjugate with the signs flipped).
    pub fn inv_mat_unit_det(&self) -> Mat2 {
        Mat2::new(c64(self.f2, 0.0), -self.g, -self.g.conj(), c64(self.f1, 0.0))
    }

    /// `exp([[a, b], [conj b, -a]])` in closed form: traceless Hermitian
    /// matrices square to `r^2 I`, so the exponential is
    /// `cosh(r) I + sinh(r)/r · η`. Determinant 1 up to rounding.
    pub fn from_eta(a: f64, b: C64) -> Self {
        let r2 = a * a + b.norm_sqr();
        let r = r2.sqrt();
        let (ch, shr) = if r < 1e-8 {
            // sinh(r)/r = 1 + r^2/6 + O(r^4)
            (1.0 + r2 / 2.0 + r2 * r2 / 24.0, 1.0 + r2 / 6.0)
        } else {
            (r.cosh(), r.sinh() / r)
        };
        HermMetric { f1: ch + shr * a, f2: ch - shr * a, g: b * shr }
    }

    /// Log of a det-1 positive Hermitian matrix: the inverse of
    /// [`HermMetric::from_eta`]. Returns `(a, b)` with `h = exp η`.
    pub fn to_eta(&self) -> (f64, C64) {
        // cosh r = (f1+f2)/2, sinh(r)/r recovers the traceless part.
        let ch = 0.5 * (self.f1 + self.f2);
        let ch = ch.max(1.0);
        let r = (ch + (ch * ch - 1.0).max(0.0).sqrt()).ln(); // acosh
        let shr = if r < 1e-8 { 1.0 + r * r / 6.0 } else { r.sinh() / r };
        let a = 0.5 * (self.f1 - self.f2) / shr;
        (a, self.g / shr)
    }

    /// Square root of a det-1 metric, `exp(η/2)`.
    pub fn sqrt(&self) -> HermMetric {
        let (a, b) = self.to_eta();
        HermMetric::from_eta(0.5 * a, b * 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new(c64(1.0, 2.0), c64(0.5, -1.0), c64(3.0, 0.0), c64(-1.0, 1.0));
        let inv = m.inverse().unwrap();
        assert!((m * inv).dist_max(&Mat2::identity()) < 1e-14);
    }

    #[test]
    fn exp_log_roundtrip() {
        let h = HermMetric::from_eta(0.7, c64(-0.3, 0.45));
        assert!(approx(h.det(), 1.0, 1e-14));
        let (a, b) = h.to_eta();
        assert!(approx(a, 0.7, 1e-12));
        assert!((b - c64(-0.3, 0.45)).norm() < 1e-12);
        let s = h.sqrt();
        let s2 = s.as_mat() * s.as_mat();
        assert!(s2.dist_max(&h.as_mat()) < 1e-12);
    }

    #[test]
    fn exp_small_eta_series() {
        let h = HermMetric::from_eta(1e-10, c64(2e-11, 0.0));
        assert!(approx(h.det(), 1.0, 1e-15));
        assert!(approx(h.f1, 1.0 + 1e-10, 1e-15));
    }
}
