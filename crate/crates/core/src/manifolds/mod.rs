//! Kernels and contour calculus on quotients `U/Γ`: cylinders and tori,
//! the Hopf manifold and the `Γ_p[N]` quotients of the half-space.

mod cotangent;
mod hopf;
mod lattice;
mod poincare;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cotangent::{CotangentKind, CotangentSeries};
pub use hopf::{ord_hopf, HopfConfig, HopfKernel, HopfKind, HopfOrder};
pub use lattice::Lattice;
pub use poincare::{
    gamma_p_ball, gamma_pn_enumerate, Generator, GroupElement, PoincareConfig, PoincareSeries, PoincareWeight,
};

use crate::algebra::Quaternion;
use crate::contour::{argument_principle, cross4, integrate_chain, CycleChain, IntegerEstimate, Resolution, SphereCycle, EIGHT_PI2, SIGMA_SCALE, ZERO_TOLERANCE};
use crate::error::{Error, Result};
use crate::gauge::{gauge_potential, GaugePotentialSample};
use crate::kernels::{FieldKind, FueterField};
use crate::quadrature::{gauss_legendre, pairwise_sum};

/// Number of successive partial sums inspected.
pub const CAUCHY_WINDOW: usize = 5;
/// Relative increment below which the window counts as converged.
pub const CAUCHY_TOLERANCE: f64 = 1e-8;

/// Convergence report for a truncated series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub partial_sums: Vec<Quaternion>,
    /// `|S_{i+1} - S_i|`.
    pub increments: Vec<f64>,
    /// Largest increment relative to `|S_last|`.
    pub relative_increment: f64,
    /// Every increment in the window is below [`CAUCHY_TOLERANCE`] relative.
    pub cauchy_satisfied: bool,
    /// Estimate of the omitted tail.
    pub tail_estimate: f64,
}

impl SeriesDiagnostics {
    /// Fails with `NonConvergent` on non-finite sums or on increments that
    /// grow monotonically across the window while above tolerance.
    pub fn from_partial_sums(sums: &[Quaternion]) -> Result<Self> {
        if let Some(bad) = sums.iter().find(|s| !s.is_finite()) {
            return Err(Error::NonConvergent(format!("non-finite partial sum {bad:?}")));
        }
        let increments: Vec<f64> = sums.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        let scale = sums.last().map(|s| s.norm()).unwrap_or(0.0).max(f64::MIN_POSITIVE);
        let largest = increments.iter().copied().fold(0.0, f64::max);
        let relative_increment = largest / scale;
        let growing = increments.len() >= 2
            && increments.windows(2).all(|w| w[1] >= w[0])
            && increments.last() > increments.first();
        if growing && relative_increment > CAUCHY_TOLERANCE {
            return Err(Error::NonConvergent(format!("partial-sum increments grow: {increments:?}")));
        }
        Ok(SeriesDiagnostics {
            partial_sums: sums.to_vec(),
            relative_increment,
            cauchy_satisfied: relative_increment <= CAUCHY_TOLERANCE,
            tail_estimate: increments.last().copied().unwrap_or(0.0),
            increments,
        })
    }
}

/// `cot_{DΔ}(z)`.
pub fn cot_ddelta(series: &CotangentSeries, z: Quaternion) -> Result<Quaternion> {
    series.value_ddelta(z)
}

/// `cot_D(z)`.
pub fn cot_d(series: &CotangentSeries, z: Quaternion) -> Result<Quaternion> {
    series.value_d(z)
}

/// Gauge potential generated by the periodic field `cot_{DΔ}`.
pub fn cylinder_instanton(series: &Arc<CotangentSeries>, z: Quaternion) -> Result<GaugePotentialSample> {
    gauge_potential(&FueterField::new(FieldKind::Cotangent(series.clone())), z)
}

type MapFn<'a> = &'a (dyn Fn(Quaternion) -> Result<Quaternion> + Sync);

/// A field in `Ker DΔ` together with `Dg` and `Δg`.
pub struct GreenData<'a> {
    pub g: MapFn<'a>,
    pub dg: MapFn<'a>,
    pub lap_g: MapFn<'a>,
}

/// Green reconstruction on the rank-one cylinder:
///
/// `(1/8π²)∮ cot_D(z-y) dσ g - (1/4π²)∮ cot_Δ(z-y) conj(dσ) Dg + (1/2π²)∮ k(z-y) dσ Δg`
///
/// with `k = -cot_{DΔ}/16`. It returns `w_Γ(y) g(y)` for `g` in `Ker DΔ`.
pub fn cylinder_green_reconstruct(series: &CotangentSeries, data: &GreenData, chain: &CycleChain, y: Quaternion) -> Result<Quaternion> {
    if series.lattice().rank() != 1 {
        return Err(Error::InvalidParameter("the Green reconstruction is implemented for rank one".into()));
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let s = integrate_chain(chain, |node| {
        let x = node.point - y;
        let ds = node.normal * (SIGMA_SCALE * node.weight);
        let map = |e: Error| match e {
            Error::SingularPoint(_) => Error::SingularOnContour(node.point),
            other => other,
        };
        let t1 = series.value_d(x).map_err(map)? * ds * (data.g)(node.point)? * (1.0 / EIGHT_PI2);
        let t2 = ds.conj() * (data.dg)(node.point)? * (series.value_delta(x).map_err(map)? / (4.0 * pi2));
        let t3 = series.value_ddelta(x).map_err(map)? * ds * (data.lap_g)(node.point)? * (-1.0 / (16.0 * 2.0 * pi2));
        Ok(t1 - t2 + t3)
    })?;
    Ok(s)
}

/// Order of an isolated zero on `ℍ/ℤ^p`, with `cot_D` as the kernel.
pub fn ord_cylinder(f: MapFn, c: Quaternion, epsilon: f64, series: &CotangentSeries, resolution: Resolution) -> Result<IntegerEstimate> {
    let fc = f(c)?;
    if fc.norm() > ZERO_TOLERANCE {
        return Err(Error::NotAZero(fc.norm()));
    }
    let cycle = SphereCycle::new(c, epsilon, resolution)?;
    let kernel = |w: Quaternion| series.value_d(w);
    Ok(IntegerEstimate::new(argument_principle(f, &kernel, &cycle)?.x0))
}

/// `(1/8π²) ∮_{∂P} dσ cot_D` over the boundary of the period cell
/// `P = {Σ t_a ω_a : |t_a| ≤ ½}` of a rank-four lattice, with `nodes`
/// Gauss-Legendre points per face axis.
pub fn period_cell_flux(series: &CotangentSeries, nodes: usize) -> Result<IntegerEstimate> {
    let basis = series.lattice().basis();
    if basis.len() != 4 {
        return Err(Error::InvalidParameter("the period cell is bounded only for rank four".into()));
    }
    if nodes < 2 {
        return Err(Error::BadResolution(format!("{nodes} nodes per face axis")));
    }
    let (x, w) = gauss_legendre(nodes);
    let mut faces = Vec::with_capacity(8);
    for a in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&b| b != a).collect();
        let mut normal = cross4(basis[others[0]], basis[others[1]], basis[others[2]]);
        if normal.dot(&basis[a]) < 0.0 {
            normal = -normal;
        }
        for side in [-1.0, 1.0] {
            let vals: Vec<Result<Quaternion>> = (0..nodes * nodes * nodes)
                .into_par_iter()
                .map(|idx| {
                    let (i, j, k) = (idx / (nodes * nodes), (idx / nodes) % nodes, idx % nodes);
                    // the face spans t ∈ [-½, ½]³, so the Jacobian of x ↦ t = x/2 is 1/8
                    let z = basis[a] * (0.5 * side)
                        + basis[others[0]] * (0.5 * x[i])
                        + basis[others[1]] * (0.5 * x[j])
                        + basis[others[2]] * (0.5 * x[k]);
                    let weight = w[i] * w[j] * w[k] / 8.0;
                    Ok(normal * (side * SIGMA_SCALE * weight) * series.value_d(z)?)
                })
                .collect();
            faces.push(pairwise_sum(&vals.into_iter().collect::<Result<Vec<_>>>()?));
        }
    }
    Ok(IntegerEstimate::new(pairwise_sum(&faces).x0 / EIGHT_PI2))
}
