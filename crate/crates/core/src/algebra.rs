//! Real quaternions, polar decomposition and quaternionic Möbius maps.
//!
//! [`Quat`] is generic over its component type so that the same arithmetic
//! drives plain evaluation (`f64`) and truncated Taylor jets
//! ([`crate::jet::Jet`]). Most callers only need the [`Quaternion`] alias.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;

/// Tolerance on the norms entering the Möbius determinant condition.
pub const DET_TOLERANCE: f64 = 1e-12;

/// A quaternion `x0 + x1 e1 + x2 e2 + x3 e3` with components of type `S`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quat<S> {
    pub x0: S,
    pub x1: S,
    pub x2: S,
    pub x3: S,
}

/// Double precision quaternion.
pub type Quaternion = Quat<f64>;

impl<S> Quat<S> {
    pub const fn new(x0: S, x1: S, x2: S, x3: S) -> Self {
        Quat { x0, x1, x2, x3 }
    }

    pub fn map<T>(self, mut f: impl FnMut(S) -> T) -> Quat<T> {
        Quat::new(f(self.x0), f(self.x1), f(self.x2), f(self.x3))
    }
}

impl<S: Copy> Quat<S> {
    /// Component `μ` (0 = scalar part).
    #[inline]
    pub fn component(&self, mu: usize) -> S {
        match mu {
            0 => self.x0,
            1 => self.x1,
            2 => self.x2,
            3 => self.x3,
            _ => panic!("quaternion component index {mu} out of range"),
        }
    }

    pub fn to_array(self) -> [S; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [S; 4]) -> Self {
        Quat::new(a[0], a[1], a[2], a[3])
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Quaternion = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Quaternion = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Quaternion = Quat::new(0.0, 0.0, 0.0, 1.0);

    /// Basis element `e_μ`, with `e_0 = 1`.
    pub fn basis(mu: usize) -> Quaternion {
        match mu {
            0 => Self::ONE,
            1 => Self::E1,
            2 => Self::E2,
            3 => Self::E3,
            _ => panic!("basis index {mu} out of range"),
        }
    }

    pub fn real(x: f64) -> Quaternion {
        Quat::new(x, 0.0, 0.0, 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    /// Multiplicative inverse `conj(a) / |a|²`.
    pub fn inverse(&self) -> Result<Quaternion> {
        let n2 = self.norm2();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Largest absolute component difference.
    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.x0.abs().max(self.x1.abs()).max(self.x2.abs()).max(self.x3.abs())
    }

    /// Euclidean inner product on ℝ⁴.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    /// Polar form `a0 + ω r`.
    pub fn polar(&self) -> PolarForm {
        let v = self.vec();
        let r = v.norm();
        let omega = if r > 0.0 { Some(v * (1.0 / r)) } else { None };
        PolarForm { a0: self.x0, r, omega }
    }
}

impl<S: Scalar> Quat<S> {
    /// Lift a constant quaternion into the scalar type of `like`.
    pub fn constant(q: Quaternion, like: S) -> Self {
        Quat::new(
            like.constant(q.x0),
            like.constant(q.x1),
            like.constant(q.x2),
            like.constant(q.x3),
        )
    }

    /// Scalar quaternion with scalar part `s`.
    pub fn from_scalar(s: S) -> Self {
        let z = s.constant(0.0);
        Quat::new(s, z, z, z)
    }

    pub fn conj(&self) -> Self {
        Quat::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    /// `Sc(a)`.
    pub fn sc(&self) -> S {
        self.x0
    }

    /// `Vec(a)` as a quaternion with zero scalar part.
    pub fn vec(&self) -> Self {
        Quat::new(self.x0.constant(0.0), self.x1, self.x2, self.x3)
    }

    /// `|a|² = a conj(a)`.
    pub fn norm2(&self) -> S {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn scale(&self, s: S) -> Self {
        Quat::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        Quat::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    /// Inverse without a zero check; callers guard the value part.
    pub fn inv_unchecked(&self) -> Self {
        self.conj().scale(self.norm2().recip())
    }

    /// Value part (drops any derivative information).
    pub fn value(&self) -> Quaternion {
        Quat::new(self.x0.value(), self.x1.value(), self.x2.value(), self.x3.value())
    }

    /// Left multiplication by a constant quaternion.
    pub fn lmul(c: Quaternion, q: Self) -> Self {
        Quat::new(
            q.x0 * c.x0 - q.x1 * c.x1 - q.x2 * c.x2 - q.x3 * c.x3,
            q.x1 * c.x0 + q.x0 * c.x1 + q.x3 * c.x2 - q.x2 * c.x3,
            q.x2 * c.x0 - q.x3 * c.x1 + q.x0 * c.x2 + q.x1 * c.x3,
            q.x3 * c.x0 + q.x2 * c.x1 - q.x1 * c.x2 + q.x0 * c.x3,
        )
    }

    /// Right multiplication by a constant quaternion.
    pub fn rmul(q: Self, c: Quaternion) -> Self {
        Quat::new(
            q.x0 * c.x0 - q.x1 * c.x1 - q.x2 * c.x2 - q.x3 * c.x3,
            q.x0 * c.x1 + q.x1 * c.x0 + q.x2 * c.x3 - q.x3 * c.x2,
            q.x0 * c.x2 - q.x1 * c.x3 + q.x2 * c.x0 + q.x3 * c.x1,
            q.x0 * c.x3 + q.x1 * c.x2 - q.x2 * c.x1 + q.x3 * c.x0,
        )
    }

    pub fn add_const(self, c: Quaternion) -> Self {
        self + Quat::constant(c, self.x0)
    }
}

impl<S: Scalar> Add for Quat<S> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Quat::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl<S: Scalar> AddAssign for Quat<S> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Scalar> Sub for Quat<S> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Quat::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl<S: Scalar> SubAssign for Quat<S> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<S: Scalar> Neg for Quat<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Quat::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product with `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2`.
impl<S: Scalar> Mul for Quat<S> {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Quat::new(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        self.scale_f64(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale_f64(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        self.scale_f64(1.0 / s)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e}, {:e}, {:e}, {:e})", self.x0, self.x1, self.x2, self.x3)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}e1 {:+}e2 {:+}e3", self.x0, self.x1, self.x2, self.x3)
    }
}

/// `a = a0 + ω r` with `r = |Vec a|`. `omega` is `None` on the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarForm {
    pub a0: f64,
    pub r: f64,
    pub omega: Option<Quaternion>,
}

impl PolarForm {
    pub fn reassemble(&self) -> Quaternion {
        match self.omega {
            Some(w) => Quaternion::real(self.a0) + w * self.r,
            None => Quaternion::real(self.a0),
        }
    }
}

/// Point of the one-point compactification `ℍ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtendedQuaternion {
    Finite(Quaternion),
    Infinity,
}

impl ExtendedQuaternion {
    pub fn finite(self) -> Option<Quaternion> {
        match self {
            ExtendedQuaternion::Finite(q) => Some(q),
            ExtendedQuaternion::Infinity => None,
        }
    }
}

/// The map `z ↦ (az + b)(cz + d)⁻¹`, stored as a 2×2 quaternion matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusTransform {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

impl MobiusTransform {
    pub const IDENTITY: MobiusTransform = MobiusTransform {
        a: Quaternion::ONE,
        b: Quaternion::ZERO,
        c: Quaternion::ZERO,
        d: Quaternion::ONE,
    };

    /// `z ↦ -z⁻¹`.
    pub const INVERSION: MobiusTransform = MobiusTransform {
        a: Quaternion::ZERO,
        b: Quat::new(-1.0, 0.0, 0.0, 0.0),
        c: Quaternion::ONE,
        d: Quaternion::ZERO,
    };

    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        MobiusTransform { a, b, c, d }
    }

    pub fn translation(b: Quaternion) -> Self {
        MobiusTransform { b, ..Self::IDENTITY }
    }

    /// `z ↦ (z - p)⁻¹`, which sends `p` to infinity.
    pub fn send_to_infinity(p: Quaternion) -> Self {
        MobiusTransform { a: Quaternion::ZERO, b: Quaternion::ONE, c: Quaternion::ONE, d: -p }
    }

    /// Matrix product; `self.compose(&m)` acts as `self ∘ m`.
    pub fn compose(&self, m: &MobiusTransform) -> MobiusTransform {
        MobiusTransform {
            a: self.a * m.a + self.b * m.c,
            b: self.a * m.b + self.b * m.d,
            c: self.c * m.a + self.d * m.c,
            d: self.c * m.b + self.d * m.d,
        }
    }

    /// Determinant condition `|b - a c⁻¹ d||c| ≠ 0` (c ≠ 0) or `|ad| ≠ 0` (c = 0).
    pub fn validate(&self) -> bool {
        let c_norm = self.c.norm();
        if c_norm > DET_TOLERANCE {
            let cinv = self.c.conj() * (1.0 / (c_norm * c_norm));
            (self.b - self.a * cinv * self.d).norm() * c_norm > DET_TOLERANCE
        } else {
            (self.a * self.d).norm() > DET_TOLERANCE
        }
    }

    /// `(az + b)(cz + d)⁻¹`; errors with [`Error::PoleOfMap`] where `cz + d = 0`.
    pub fn apply(&self, z: Quaternion) -> Result<Quaternion> {
        let den = self.c * z + self.d;
        if den.norm2() == 0.0 {
            return Err(Error::PoleOfMap);
        }
        Ok((self.a * z + self.b) * den.inverse()?)
    }

    /// Action on `ℍ ∪ {∞}`.
    pub fn apply_extended(&self, z: ExtendedQuaternion) -> ExtendedQuaternion {
        match z {
            ExtendedQuaternion::Finite(z) => match self.apply(z) {
                Ok(w) => ExtendedQuaternion::Finite(w),
                Err(_) => ExtendedQuaternion::Infinity,
            },
            // lim (az+b)(cz+d)^{-1} = a c^{-1} as |z| → ∞
            ExtendedQuaternion::Infinity => match self.c.inverse() {
                Ok(cinv) => ExtendedQuaternion::Finite(self.a * cinv),
                Err(_) => ExtendedQuaternion::Infinity,
            },
        }
    }

    /// Generic evaluation used by the Poincaré series; no pole check.
    pub fn apply_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let num = Quat::lmul(self.a, z).add_const(self.b);
        let den = Quat::lmul(self.c, z).add_const(self.d);
        num * den.inv_unchecked()
    }

    pub fn entries(&self) -> [Quaternion; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quat::new(a, b, c, d)
    }

    #[test]
    fn multiplication_table() {
        let (e1, e2, e3) = (Quaternion::E1, Quaternion::E2, Quaternion::E3);
        assert_eq!(e1 * e2, e3);
        assert_eq!(e2 * e3, e1);
        assert_eq!(e3 * e1, e2);
        assert_eq!(e2 * e1, -e3);
        for e in [e1, e2, e3] {
            assert_eq!(e * e, -Quaternion::ONE);
        }
        let a = q(0.3, -1.2, 2.0, 0.5);
        assert_eq!(a * Quaternion::ONE, a);
        assert_eq!((Quaternion::ONE + e1) * (Quaternion::ONE + e2), q(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Quaternion::E1.inverse().unwrap(), -Quaternion::E1);
        assert_eq!(Quaternion::real(2.0).inverse().unwrap(), Quaternion::real(0.5));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = q(s, s, 0.0, 0.0);
        assert!(u.inverse().unwrap().max_abs_diff(&u.conj()) < 1e-15);
        assert!(matches!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn inverse_within_four_ulps() {
        let a = q(0.7, -1.3, 2.9, 0.1);
        let p = a * a.inverse().unwrap();
        let tol = 4.0 * f64::EPSILON;
        assert!((p.x0 - 1.0).abs() <= tol && p.vec().max_abs() <= tol, "{p:?}");
    }

    #[test]
    fn polar_examples() {
        let p = q(3.0, 0.0, 4.0, 0.0).polar();
        assert_eq!((p.a0, p.r), (3.0, 4.0));
        assert_eq!(p.omega, Some(Quaternion::E2));
        let p = q(5.0, 0.0, 0.0, 0.0).polar();
        assert_eq!((p.a0, p.r, p.omega), (5.0, 0.0, None));
        let p = q(0.0, 1.0, 1.0, 1.0).polar();
        let s = 1.0 / 3f64.sqrt();
        assert!((p.r - 3f64.sqrt()).abs() < 1e-15);
        assert!(p.omega.unwrap().max_abs_diff(&q(0.0, s, s, s)) < 1e-15);
        let a = q(-0.4, 2.5, -1.0, 0.25);
        assert!(a.polar().reassemble().max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn mobius_examples() {
        let z = q(0.3, -0.2, 1.1, 0.7);
        assert!(MobiusTransform::IDENTITY.apply(z).unwrap().max_abs_diff(&z) < 1e-15);
        let w = MobiusTransform::INVERSION.apply(Quaternion::E1).unwrap();
        assert!(w.max_abs_diff(&Quaternion::E1) < 1e-15);
        let b = q(1.0, 2.0, -3.0, 0.5);
        let t = MobiusTransform::translation(b);
        assert!(t.apply(z).unwrap().max_abs_diff(&(z + b)) < 1e-15);
        assert!(matches!(MobiusTransform::INVERSION.apply(Quaternion::ZERO), Err(Error::PoleOfMap)));
    }

    #[test]
    fn mobius_validation() {
        assert!(MobiusTransform::IDENTITY.validate());
        assert!(MobiusTransform::INVERSION.validate());
        let zero = MobiusTransform::new(Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO);
        assert!(!zero.validate());
    }

    #[test]
    fn infinity_handling() {
        let m = MobiusTransform::send_to_infinity(Quaternion::E2);
        assert_eq!(m.apply_extended(ExtendedQuaternion::Finite(Quaternion::E2)), ExtendedQuaternion::Infinity);
        assert_eq!(
            MobiusTransform::INVERSION.apply_extended(ExtendedQuaternion::Infinity),
            ExtendedQuaternion::Finite(Quaternion::ZERO)
        );
    }
}
