//! Truncated multivariate Taylor arithmetic in the four real coordinates.
//!
//! A [`Jet`] stores the Taylor coefficients `∂^α f / α!` of a real function
//! for every multi-index `|α| ≤ order ≤ 3`. Running ordinary quaternion
//! arithmetic on `Quat<Jet>` yields exact derivatives of rational fields,
//! which is what the third-order operator `DΔ` needs.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Highest supported derivative order.
pub const MAX_ORDER: usize = 3;
/// Number of monomials of degree ≤ 3 in four variables.
pub const N_COEFFS: usize = 35;
const COUNT_BY_ORDER: [usize; 4] = [1, 5, 15, 35];

/// Component type usable inside [`crate::algebra::Quat`].
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// A constant carrying the same truncation order as `self`.
    fn constant(&self, c: f64) -> Self;
    fn value(&self) -> f64;
    fn recip(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn constant(&self, c: f64) -> f64 {
        c
    }
    #[inline]
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn recip(self) -> f64 {
        1.0 / self
    }
    #[inline]
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
}

struct Tables {
    exponents: Vec<[u8; 4]>,
    index: [u8; 256],
    products: [Vec<(u8, u8, u8)>; 4],
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exponents = Vec::with_capacity(N_COEFFS);
        for deg in 0..=MAX_ORDER as u8 {
            for a in (0..=deg).rev() {
                for b in (0..=deg - a).rev() {
                    for c in (0..=deg - a - b).rev() {
                        exponents.push([a, b, c, deg - a - b - c]);
                    }
                }
            }
        }
        debug_assert_eq!(exponents.len(), N_COEFFS);
        let mut index = [u8::MAX; 256];
        for (i, e) in exponents.iter().enumerate() {
            index[key(e)] = i as u8;
        }
        let degree = |e: &[u8; 4]| e.iter().map(|&x| x as usize).sum::<usize>();
        let products = std::array::from_fn(|order| {
            let mut v = Vec::new();
            for (i, ei) in exponents.iter().enumerate() {
                for (j, ej) in exponents.iter().enumerate() {
                    if degree(ei) + degree(ej) <= order {
                        let s = [ei[0] + ej[0], ei[1] + ej[1], ei[2] + ej[2], ei[3] + ej[3]];
                        v.push((i as u8, j as u8, index[key(&s)]));
                    }
                }
            }
            v
        });
        Tables { exponents, index, products }
    })
}

#[inline]
fn key(e: &[u8; 4]) -> usize {
    (e[0] as usize) | (e[1] as usize) << 2 | (e[2] as usize) << 4 | (e[3] as usize) << 6
}

/// Coefficient slot of the monomial with exponents `alpha`.
pub fn coeff_index(alpha: [u8; 4]) -> Option<usize> {
    if alpha.iter().map(|&a| a as usize).sum::<usize>() > MAX_ORDER {
        return None;
    }
    Some(tables().index[key(&alpha)] as usize)
}

/// Exponent vector of coefficient slot `i`.
pub fn exponents(i: usize) -> [u8; 4] {
    tables().exponents[i]
}

/// Exponents for a list of coordinate indices, e.g. `[0, 0, 2]` ↦ `(2, 0, 1, 0)`.
pub fn alpha_of(indices: &[usize]) -> [u8; 4] {
    let mut a = [0u8; 4];
    for &i in indices {
        a[i] += 1;
    }
    a
}

fn factorial(alpha: [u8; 4]) -> f64 {
    alpha.iter().map(|&a| (1..=a as u32).product::<u32>() as f64).product()
}

/// Truncated Taylor expansion of a real function of `(x0, x1, x2, x3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; N_COEFFS],
    order: u8,
}

impl Jet {
    pub fn constant_of_order(value: f64, order: usize) -> Jet {
        assert!(order <= MAX_ORDER);
        let mut c = [0.0; N_COEFFS];
        c[0] = value;
        Jet { c, order: order as u8 }
    }

    /// The coordinate function `x_mu` expanded around `value`.
    pub fn variable(value: f64, mu: usize, order: usize) -> Jet {
        let mut j = Jet::constant_of_order(value, order);
        if order >= 1 {
            j.c[1 + mu] = 1.0;
        }
        j
    }

    /// Build from raw Taylor coefficients (`∂^α f / α!`).
    pub fn from_coefficients(c: [f64; N_COEFFS], order: usize) -> Jet {
        let mut c = c;
        for x in c.iter_mut().skip(COUNT_BY_ORDER[order]) {
            *x = 0.0;
        }
        Jet { c, order: order as u8 }
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn coefficients(&self) -> &[f64; N_COEFFS] {
        &self.c
    }

    /// Partial derivative `∂^α f` at the expansion point.
    pub fn derivative(&self, alpha: [u8; 4]) -> f64 {
        let deg: usize = alpha.iter().map(|&a| a as usize).sum();
        if deg > self.order() {
            return f64::NAN;
        }
        self.c[coeff_index(alpha).expect("order checked")] * factorial(alpha)
    }

    #[inline]
    fn n(&self) -> usize {
        COUNT_BY_ORDER[self.order as usize]
    }

    fn joint_order(&self, other: &Jet) -> u8 {
        self.order.min(other.order)
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        let order = self.joint_order(&o);
        let mut r = Jet { c: [0.0; N_COEFFS], order };
        for i in 0..r.n() {
            r.c[i] = self.c[i] + o.c[i];
        }
        r
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        let order = self.joint_order(&o);
        let mut r = Jet { c: [0.0; N_COEFFS], order };
        for i in 0..r.n() {
            r.c[i] = self.c[i] - o.c[i];
        }
        r
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        let mut r = self;
        for i in 0..r.n() {
            r.c[i] = -r.c[i];
        }
        r
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        let order = self.joint_order(&o);
        let mut r = Jet { c: [0.0; N_COEFFS], order };
        if order == 0 {
            r.c[0] = self.c[0] * o.c[0];
            return r;
        }
        for &(i, j, k) in &tables().products[order as usize] {
            r.c[k as usize] += self.c[i as usize] * o.c[j as usize];
        }
        r
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, s: f64) -> Jet {
        let mut r = self;
        for i in 0..r.n() {
            r.c[i] *= s;
        }
        r
    }
}

impl Scalar for Jet {
    fn constant(&self, c: f64) -> Jet {
        Jet::constant_of_order(c, self.order())
    }

    fn value(&self) -> f64 {
        self.c[0]
    }

    fn recip(self) -> Jet {
        // 1/(a + h) = (1/a) Σ_k (-h/a)^k, h nilpotent of degree order+1
        let inv = 1.0 / self.c[0];
        let mut h = self * (-inv);
        h.c[0] = 0.0;
        let mut term = self.constant(1.0);
        let mut sum = term;
        for _ in 0..self.order() {
            term = term * h;
            sum = sum + term;
        }
        sum * inv
    }

    fn sqrt(self) -> Jet {
        let a = self.c[0];
        let s = a.sqrt();
        let mut u = self * (1.0 / a);
        u.c[0] = 0.0;
        // sqrt(1 + u) = 1 + u/2 - u²/8 + u³/16
        const COEF: [f64; 4] = [1.0, 0.5, -0.125, 0.0625];
        let mut term = self.constant(1.0);
        let mut sum = term;
        for k in 1..=self.order() {
            term = term * u;
            sum = sum + term * COEF[k];
        }
        sum * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(x: [f64; 4], order: usize) -> [Jet; 4] {
        std::array::from_fn(|mu| Jet::variable(x[mu], mu, order))
    }

    #[test]
    fn layout() {
        assert_eq!(coeff_index([0, 0, 0, 0]), Some(0));
        assert_eq!(coeff_index([1, 0, 0, 0]), Some(1));
        assert_eq!(coeff_index([0, 0, 0, 1]), Some(4));
        assert_eq!(coeff_index([2, 1, 1, 0]), None);
        for i in 0..N_COEFFS {
            assert_eq!(coeff_index(exponents(i)), Some(i));
        }
    }

    #[test]
    fn polynomial_derivatives() {
        // f = x0² x1 + 3 x2 x3
        let [x0, x1, x2, x3] = point([1.5, -2.0, 0.5, 4.0], 3);
        let f = x0 * x0 * x1 + x2 * x3 * 3.0;
        assert_eq!(f.value(), 1.5 * 1.5 * -2.0 + 3.0 * 0.5 * 4.0);
        assert_eq!(f.derivative([1, 0, 0, 0]), 2.0 * 1.5 * -2.0);
        assert_eq!(f.derivative([2, 1, 0, 0]), 2.0);
        assert_eq!(f.derivative([0, 0, 1, 1]), 3.0);
        assert_eq!(f.derivative([0, 0, 0, 3]), 0.0);
    }

    #[test]
    fn reciprocal_matches_closed_form() {
        // 1/(1 + x0 + x1²) at x = (0.2, 0.3)
        let [x0, x1, _, _] = point([0.2, 0.3, 0.0, 0.0], 3);
        let g = (x0.constant(1.0) + x0 + x1 * x1).recip();
        let d = 1.0 + 0.2 + 0.09;
        assert!((g.value() - 1.0 / d).abs() < 1e-15);
        assert!((g.derivative([1, 0, 0, 0]) + 1.0 / (d * d)).abs() < 1e-14);
        assert!((g.derivative([3, 0, 0, 0]) + 6.0 / d.powi(4)).abs() < 1e-13);
        // ∂1 = -2 x1 / d²
        assert!((g.derivative([0, 1, 0, 0]) + 0.6 / (d * d)).abs() < 1e-14);
    }

    #[test]
    fn sqrt_matches_closed_form() {
        let [x0, _, _, _] = point([2.0, 0.0, 0.0, 0.0], 3);
        let s = x0.sqrt();
        assert!((s.derivative([1, 0, 0, 0]) - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!((s.derivative([3, 0, 0, 0]) - 0.375 * 2f64.powf(-2.5)).abs() < 1e-14);
    }

    #[test]
    fn mixed_orders_truncate() {
        let a = Jet::variable(1.0, 0, 3);
        let b = Jet::variable(2.0, 1, 1);
        assert_eq!((a * b).order(), 1);
    }
}
