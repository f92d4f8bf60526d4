use crate::algebra::{Quat, Quaternion};
use crate::error::Result;
use crate::jet::{alpha_of, exponents, Jet, N_COEFFS};

/// Central-difference steps for first and for second/third derivatives.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FdSteps {
    pub first: f64,
    pub higher: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps { first: 1e-4, higher: 1e-3 }
    }
}

/// How a field produces derivatives.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum JetMode {
    /// Exact Taylor arithmetic where the field supports it, finite
    /// differences otherwise.
    Analytic,
    FiniteDifference(FdSteps),
}

impl JetMode {
    /// Finite differences with a single step for every order.
    pub fn fd(h: f64) -> JetMode {
        JetMode::FiniteDifference(FdSteps { first: h, higher: h })
    }
}

impl Default for JetMode {
    fn default() -> Self {
        JetMode::Analytic
    }
}

/// Value and partial derivatives (up to the jet order) of a field at a point.
#[derive(Clone, Copy)]
pub struct FieldJet {
    q: Quat<Jet>,
}

impl FieldJet {
    pub fn from_quat(q: Quat<Jet>) -> Self {
        FieldJet { q }
    }

    pub fn order(&self) -> usize {
        self.q.x0.order()
    }

    pub fn as_quat(&self) -> &Quat<Jet> {
        &self.q
    }

    pub fn value(&self) -> Quaternion {
        self.q.map(|c| c.derivative([0; 4]))
    }

    /// `∂_{i1} ∂_{i2} ⋯ f` for coordinate labels in `0..4`.
    pub fn partial(&self, indices: &[usize]) -> Quaternion {
        let alpha = alpha_of(indices);
        self.q.map(|c| c.derivative(alpha))
    }

    pub fn d(&self) -> Quaternion {
        (0..4).map(|mu| Quaternion::basis(mu) * self.partial(&[mu])).sum()
    }

    pub fn dbar(&self) -> Quaternion {
        (0..4).map(|mu| Quaternion::basis(mu).conj() * self.partial(&[mu])).sum()
    }

    pub fn laplacian(&self) -> Quaternion {
        (0..4).map(|mu| self.partial(&[mu, mu])).sum()
    }

    /// `D(D̄f) = Σ_{μ,ν} e_μ conj(e_ν) ∂_μ ∂_ν f`.
    pub fn d_dbar(&self) -> Quaternion {
        let mut s = Quaternion::ZERO;
        for mu in 0..4 {
            for nu in 0..4 {
                s += Quaternion::basis(mu) * Quaternion::basis(nu).conj() * self.partial(&[mu, nu]);
            }
        }
        s
    }

    /// `∂_μ Δf`.
    pub fn laplacian_partial(&self, mu: usize) -> Quaternion {
        (0..4).map(|nu| self.partial(&[mu, nu, nu])).sum()
    }

    /// `DΔf`.
    pub fn d_laplacian(&self) -> Quaternion {
        (0..4).map(|mu| Quaternion::basis(mu) * self.laplacian_partial(mu)).sum()
    }

    /// `Δ(Df)`, equal to `DΔf` by commutation of the scalar Laplacian.
    pub fn laplacian_d(&self) -> Quaternion {
        let mut s = Quaternion::ZERO;
        for nu in 0..4 {
            for mu in 0..4 {
                s += Quaternion::basis(mu) * self.partial(&[nu, nu, mu]);
            }
        }
        s
    }
}

impl std::fmt::Debug for FieldJet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldJet(order {}, value {:?})", self.order(), self.value())
    }
}

/// Nested central difference `D_{i1} D_{i2} ⋯ f(z)`.
pub(crate) fn nested_difference(
    f: &dyn Fn(Quaternion) -> Result<Quaternion>,
    z: Quaternion,
    indices: &[usize],
    h: f64,
) -> Result<Quaternion> {
    match indices.split_first() {
        None => f(z),
        Some((&i, rest)) => {
            let e = Quaternion::basis(i) * h;
            let plus = nested_difference(f, z + e, rest, h)?;
            let minus = nested_difference(f, z - e, rest, h)?;
            Ok((plus - minus) * (0.5 / h))
        }
    }
}

/// Jet of order `order` assembled from nested central differences.
pub(crate) fn finite_difference_jet(
    f: &dyn Fn(Quaternion) -> Result<Quaternion>,
    z: Quaternion,
    order: usize,
    steps: FdSteps,
) -> Result<FieldJet> {
    let count = [1, 5, 15, 35][order];
    let mut comps = [[0.0; N_COEFFS]; 4];
    for slot in 0..count {
        let alpha = exponents(slot);
        let mut indices = Vec::with_capacity(3);
        for (mu, &a) in alpha.iter().enumerate() {
            indices.extend(std::iter::repeat(mu).take(a as usize));
        }
        let h = if indices.len() <= 1 { steps.first } else { steps.higher };
        let d = nested_difference(f, z, &indices, h)?;
        let fact: f64 = alpha.iter().map(|&a| (1..=a as u32).product::<u32>() as f64).product();
        for (mu, comp) in comps.iter_mut().enumerate() {
            comp[slot] = d.component(mu) / fact;
        }
    }
    Ok(FieldJet::from_quat(Quat::from_array(comps.map(|c| Jet::from_coefficients(c, order)))))
}
