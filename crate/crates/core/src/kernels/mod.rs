//! Evaluable quaternion fields and the operators `D`, `D̄`, `Δ` and `DΔ`.
//!
//! A [`FueterField`] pairs a [`FieldKind`] with a [`JetMode`]. Rational
//! kinds are evaluated over [`Jet`] scalars to obtain exact derivatives up to
//! order three; everything else falls back to nested central differences.

mod field;
mod jets;

pub use field::{FieldKind, FueterField, InducedField, Pole, PoleSum};
pub use jets::{FdSteps, FieldJet, JetMode};

use crate::algebra::{Quat, Quaternion};
use crate::error::{Error, Result};
use crate::jet::{alpha_of, Jet, Scalar};

/// Distance below which a point counts as hitting a singularity.
pub const SINGULAR_TOLERANCE: f64 = 1e-8;

/// Axis tolerance for induced fields: `|v(a0, 0)|` must stay below this.
pub const AXIS_TOLERANCE: f64 = 1e-9;

/// Multi-index `(m1, m2, m3)` over the imaginary coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub struct MultiIndex {
    pub m1: u32,
    pub m2: u32,
    pub m3: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { m1: 0, m2: 0, m3: 0 };

    pub const fn new(m1: u32, m2: u32, m3: u32) -> Self {
        MultiIndex { m1, m2, m3 }
    }

    pub fn order(&self) -> usize {
        (self.m1 + self.m2 + self.m3) as usize
    }

    /// Coordinate labels, e.g. `(1, 2, 0)` ↦ `[1, 2, 2]`.
    pub fn letters(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.order());
        v.extend(std::iter::repeat(1).take(self.m1 as usize));
        v.extend(std::iter::repeat(2).take(self.m2 as usize));
        v.extend(std::iter::repeat(3).take(self.m3 as usize));
        v
    }

    /// All multi-indices with `order ≤ max`.
    pub fn up_to(max: u32) -> Vec<MultiIndex> {
        let mut v = Vec::new();
        for m1 in 0..=max {
            for m2 in 0..=max - m1 {
                for m3 in 0..=max - m1 - m2 {
                    v.push(MultiIndex::new(m1, m2, m3));
                }
            }
        }
        v
    }
}

/// `q₀(z) = conj(z) / |z|⁴`.
pub fn cauchy_kernel(z: Quaternion) -> Result<Quaternion> {
    if z.norm() < SINGULAR_TOLERANCE {
        return Err(Error::SingularPoint(z));
    }
    Ok(q0(z))
}

/// Unchecked generic `q₀`.
#[inline]
pub fn q0<S: Scalar>(z: Quat<S>) -> Quat<S> {
    let n2 = z.norm2();
    z.conj().scale((n2 * n2).recip())
}

/// `q_m = ∂^{m1+m2+m3} q₀ / ∂x1^{m1} ∂x2^{m2} ∂x3^{m3}`, exact via jets.
pub fn kernel_derivative(m: MultiIndex, z: Quaternion) -> Result<Quaternion> {
    let order = m.order();
    if order > crate::jet::MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    if z.norm() < SINGULAR_TOLERANCE {
        return Err(Error::SingularPoint(z));
    }
    let zj = jet_point(z, order);
    let alpha = alpha_of(&m.letters());
    Ok(q0(zj).map(|c| c.derivative(alpha)))
}

/// The point `z` as a jet of the coordinate functions.
pub fn jet_point(z: Quaternion, order: usize) -> Quat<Jet> {
    Quat::new(
        Jet::variable(z.x0, 0, order),
        Jet::variable(z.x1, 1, order),
        Jet::variable(z.x2, 2, order),
        Jet::variable(z.x3, 3, order),
    )
}

/// `ζ_i = x_i - x_0 e_i`.
pub fn zeta<S: Scalar>(z: Quat<S>, i: usize) -> Quat<S> {
    let zero = z.x0.constant(0.0);
    let xi = z.component(i);
    let mut v = [zero; 4];
    v[0] = xi;
    v[i] = -z.x0;
    Quat::from_array(v)
}

/// Fueter polynomial `V_m(z) = (1/|m|!) Σ_{σ ∈ S_|m|} ζ_{l_σ(1)} ⋯ ζ_{l_σ(|m|)}`
/// where `l` lists `1` m1 times, `2` m2 times and `3` m3 times.
pub fn fueter_polynomial_generic<S: Scalar>(m: MultiIndex, z: Quat<S>) -> Quat<S> {
    let letters = m.letters();
    let n = letters.len();
    if n == 0 {
        return Quat::constant(Quaternion::ONE, z.x0);
    }
    let zetas: [Quat<S>; 4] = std::array::from_fn(|i| if i == 0 { z } else { zeta(z, i) });
    let mut total = Quat::constant(Quaternion::ZERO, z.x0);
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all n! orderings
    let mut c = vec![0usize; n];
    let product = |perm: &[usize]| {
        let mut p = zetas[letters[perm[0]]];
        for &k in &perm[1..] {
            p = p * zetas[letters[k]];
        }
        p
    };
    total += product(&perm);
    let mut count = 1usize;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += product(&perm);
            count += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total.scale_f64(1.0 / count as f64)
}

pub fn fueter_polynomial(m: MultiIndex, z: Quaternion) -> Quaternion {
    fueter_polynomial_generic(m, z)
}

/// `Df = Σ e_μ ∂_μ f` (left action).
pub fn apply_d(f: &FueterField, z: Quaternion) -> Result<Quaternion> {
    Ok(f.jet(z, 1)?.d())
}

/// `D̄f = ∂_0 f - Σ e_i ∂_i f`.
pub fn apply_dbar(f: &FueterField, z: Quaternion) -> Result<Quaternion> {
    Ok(f.jet(z, 1)?.dbar())
}

/// `Δf = Σ ∂_μ² f`.
pub fn apply_delta(f: &FueterField, z: Quaternion) -> Result<Quaternion> {
    Ok(f.jet(z, 2)?.laplacian())
}

/// `DΔf`.
pub fn apply_ddelta(f: &FueterField, z: Quaternion) -> Result<Quaternion> {
    Ok(f.jet(z, 3)?.d_laplacian())
}

/// `G(a0 + ω r) = u(a0, r) + ω v(a0, r)` for the complex function carried by `g`.
pub fn induced_fueter(g: &InducedField, z: Quaternion) -> Result<Quaternion> {
    g.eval(z)
}

/// `Σ_i conj(α_i)(z + β_i)⁻¹ α_i`.
pub fn rational_pole_sum(config: &PoleSum, z: Quaternion) -> Result<Quaternion> {
    FueterField::new(FieldKind::RationalPoleSum(config.clone())).eval(z)
}

#[cfg(test)]
mod tests;
