//! SU(2) potentials generated by Fueter-holomorphic fields, their curvature,
//! self-duality diagnostics and the second Chern number.
//!
//! Su(2) is identified with the imaginary quaternions. A field `F` yields
//! `a_μ = ½ Vec(e_μ ΔF (DF)⁻¹)`; the resulting curvature is self-dual for
//! the orientation fixed by [`HODGE_ORIENTATION`] whenever `DΔF = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{MobiusTransform, Quaternion};
use crate::contour::{integrate_chain, residue, CycleChain, IntegerEstimate, Resolution, SphereCycle, EIGHT_PI2, SIGMA_SCALE};
use crate::error::{Error, Result};
use crate::kernels::{FueterField, PoleSum};
use crate::quadrature::{pairwise_sum_f64, simpson_weights};

/// Below this `|DF|` the potential is not formed.
pub const DF_TOLERANCE: f64 = 1e-12;
/// Sign of `ε_0123`. With `-1` the potentials built here are self-dual.
pub const HODGE_ORIENTATION: f64 = -1.0;
/// Step of the outer central differences in `f_μν`.
pub const FIELD_STRENGTH_STEP: f64 = 1e-3;

pub type Tensor = [[Quaternion; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugePotentialSample {
    pub a: [Quaternion; 4],
}

/// `a_μ = ½ Vec(e_μ (ΔF)(z) (DF)(z)⁻¹)`.
pub fn gauge_potential(f: &FueterField, z: Quaternion) -> Result<GaugePotentialSample> {
    let jet = f.jet(z, 2)?;
    let df = jet.d();
    if df.norm() < DF_TOLERANCE {
        return Err(Error::DegenerateDF(df.norm()));
    }
    let m = jet.laplacian() * df.inverse()?;
    Ok(GaugePotentialSample { a: std::array::from_fn(|mu| (Quaternion::basis(mu) * m).vec() * 0.5) })
}

fn levi_civita(i: usize, j: usize, k: usize, l: usize) -> f64 {
    let p = [i, j, k, l];
    let mut sign = 1.0;
    for x in 0..4 {
        for y in x + 1..4 {
            if p[x] == p[y] {
                return 0.0;
            }
            if p[x] > p[y] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `f̃_μν = ½ ε_μνρσ f_ρσ`.
pub fn hodge_dual(f: &Tensor) -> Tensor {
    let mut d = [[Quaternion::ZERO; 4]; 4];
    for (mu, row) in d.iter_mut().enumerate() {
        for (nu, x) in row.iter_mut().enumerate() {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let e = levi_civita(mu, nu, rho, sigma);
                    if e != 0.0 {
                        *x += f[rho][sigma] * (0.5 * e * HODGE_ORIENTATION);
                    }
                }
            }
        }
    }
    d
}

/// Curvature at a point with its dual and the `Φ = f + f̃`, `Φ′ = f - f̃` parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldStrengthSample {
    pub f: Tensor,
    pub dual: Tensor,
    pub sd: Tensor,
    pub asd: Tensor,
    /// Frobenius norm of `∂_μ a_ν`, the natural curvature scale at the point.
    pub derivative_scale: f64,
}

fn frobenius(t: &Tensor) -> f64 {
    t.iter().flatten().map(|q| q.norm2()).sum::<f64>().sqrt()
}

impl FieldStrengthSample {
    pub fn from_tensor(f: Tensor) -> Self {
        let dual = hodge_dual(&f);
        let sd = std::array::from_fn(|m| std::array::from_fn(|n| f[m][n] + dual[m][n]));
        let asd = std::array::from_fn(|m| std::array::from_fn(|n| f[m][n] - dual[m][n]));
        FieldStrengthSample { f, dual, sd, asd, derivative_scale: 0.0 }
    }

    /// `‖Φ′‖ / ‖Φ‖`; zero for a vanishing curvature.
    pub fn asd_ratio(&self) -> f64 {
        let sd = frobenius(&self.sd);
        let asd = frobenius(&self.asd);
        if sd == 0.0 {
            if asd == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            asd / sd
        }
    }

    /// `‖Φ′‖ / max(‖Φ‖, ‖∂a‖)`. Pure-gauge potentials have `f ≡ 0`, where
    /// the plain ratio only compares discretization noise; measuring against
    /// the derivative scale keeps it a relative bound there.
    pub fn asd_defect(&self) -> f64 {
        let den = frobenius(&self.sd).max(self.derivative_scale);
        if den == 0.0 {
            0.0
        } else {
            frobenius(&self.asd) / den
        }
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.f)
    }
}

/// `f_μν = ∂_μ a_ν - ∂_ν a_μ + [a_μ, a_ν]` with fourth-order central
/// differences of step `h` (samples reach `z ± 2h e_μ`).
pub fn field_strength(field: &FueterField, z: Quaternion, h: f64) -> Result<FieldStrengthSample> {
    let a = gauge_potential(field, z)?.a;
    let mut da = [[Quaternion::ZERO; 4]; 4];
    for (mu, row) in da.iter_mut().enumerate() {
        let e = Quaternion::basis(mu) * h;
        let p1 = gauge_potential(field, z + e)?.a;
        let m1 = gauge_potential(field, z - e)?.a;
        let p2 = gauge_potential(field, z + e * 2.0)?.a;
        let m2 = gauge_potential(field, z - e * 2.0)?.a;
        for (nu, x) in row.iter_mut().enumerate() {
            *x = ((p1[nu] - m1[nu]) * 8.0 - (p2[nu] - m2[nu])) * (1.0 / (12.0 * h));
        }
    }
    let mut f = [[Quaternion::ZERO; 4]; 4];
    for mu in 0..4 {
        for nu in mu + 1..4 {
            let v = da[mu][nu] - da[nu][mu] + a[mu] * a[nu] - a[nu] * a[mu];
            f[mu][nu] = v;
            f[nu][mu] = -v;
        }
    }
    let mut sample = FieldStrengthSample::from_tensor(f);
    sample.derivative_scale = frobenius(&da);
    Ok(sample)
}

/// `Π = -Σ_{μ,ν} Sc(f_μν f̃_μν)`.
pub fn chern_density(s: &FieldStrengthSample) -> f64 {
    let mut p = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            p -= (s.f[mu][nu] * s.dual[mu][nu]).x0;
        }
    }
    p
}

/// Axis-aligned box in `ℝ⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Box4 {
    pub fn cube(half: f64) -> Self {
        Box4 { lo: [-half; 4], hi: [half; 4] }
    }
}

/// `(1/8π²) ∫_box Π` by tensor-product Simpson with `nodes` points per axis (odd).
pub fn chern_number_volume(field: &FueterField, bx: Box4, nodes: usize, h: f64) -> Result<IntegerEstimate> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::BadResolution(format!("{nodes} nodes per axis: Simpson's rule needs an odd count ≥ 3")));
    }
    let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..4).map(|i| simpson_weights(bx.lo[i], bx.hi[i], nodes - 1)).collect();
    let guard = 2.0 * h + 1e-8;
    let slabs: Vec<Result<f64>> = (0..nodes * nodes)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / nodes, ij % nodes);
            let mut vals = Vec::with_capacity(nodes * nodes);
            for k in 0..nodes {
                for l in 0..nodes {
                    let z = Quaternion::new(axes[0].0[i], axes[1].0[j], axes[2].0[k], axes[3].0[l]);
                    if field.singular_distance(z) < guard {
                        return Err(Error::PoleOnGrid(z));
                    }
                    let w = axes[0].1[i] * axes[1].1[j] * axes[2].1[k] * axes[3].1[l];
                    vals.push(w * chern_density(&field_strength(field, z, h)?));
                }
            }
            Ok(pairwise_sum_f64(&vals))
        })
        .collect();
    let slabs = slabs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(IntegerEstimate::new(pairwise_sum_f64(&slabs) / EIGHT_PI2))
}

/// All contour-based evaluations of `c₂` for a pole configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernReport {
    pub poles: usize,
    /// Expected instanton number: one less than the pole count.
    pub n: i64,
    pub c2_volume: Option<IntegerEstimate>,
    pub c2_surface: IntegerEstimate,
    pub c2_residue: IntegerEstimate,
    /// Radius used around the transformed poles.
    pub transformed_radius: f64,
}

/// Sends the first pole to infinity with `z ↦ (z - β₀)⁻¹` and integrates
/// the remaining unit kernels around their images.
///
/// `c2_surface` integrates `-¼ Δ G` for `G = Σ_i (z - γ_i)⁻¹` over the
/// chain of all spheres; `c2_residue` sums the residues of each `q₀(z - γ_i)`
/// separately. Pole weights do not affect the count and are ignored.
pub fn chern_number_residues(poles: &PoleSum, epsilon: f64, resolution: Resolution) -> Result<ChernReport> {
    let locs = poles.locations();
    for i in 0..locs.len() {
        for j in i + 1..locs.len() {
            if (locs[i] - locs[j]).norm() < 2.0 * epsilon {
                return Err(Error::PoleCollision(locs[i], locs[j]));
            }
        }
    }
    let n = locs.len().saturating_sub(1) as i64;
    if locs.len() <= 1 {
        return Ok(ChernReport {
            poles: locs.len(),
            n,
            c2_volume: None,
            c2_surface: IntegerEstimate::new(0.0),
            c2_residue: IntegerEstimate::new(0.0),
            transformed_radius: 0.0,
        });
    }
    let m = MobiusTransform::send_to_infinity(locs[0]);
    let gammas = locs[1..].iter().map(|&b| m.apply(b)).collect::<Result<Vec<_>>>()?;
    let mut sep = f64::INFINITY;
    for i in 0..gammas.len() {
        for j in i + 1..gammas.len() {
            sep = sep.min((gammas[i] - gammas[j]).norm());
        }
    }
    let radius = (0.25 * sep).min(0.5);
    let g = FueterField::poles(PoleSum::at_locations(&gammas));
    let mut chain = CycleChain::default();
    for &gm in &gammas {
        chain.push(SphereCycle::new(gm, radius, resolution)?, 1.0)?;
    }
    let surface = integrate_chain(&chain, |node| {
        let lap = g.jet(node.point, 2)?.laplacian();
        Ok(node.normal * (SIGMA_SCALE * node.weight) * (lap * -0.25))
    })?;
    let mut res = 0.0;
    for &gm in &gammas {
        res += residue(&FueterField::cauchy_kernel(gm), gm, radius, resolution)?.x0;
    }
    Ok(ChernReport {
        poles: locs.len(),
        n,
        c2_volume: None,
        c2_surface: IntegerEstimate::new(surface.x0 / EIGHT_PI2),
        c2_residue: IntegerEstimate::new(res),
        transformed_radius: radius,
    })
}

#[cfg(test)]
mod tests;
