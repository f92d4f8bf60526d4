//! Discretized 3-spheres and the contour integrals built on them.
//!
//! The surface form is realized as `dσ = 4 ν dS`, outward unit normal times
//! the scalar area element. With that scale `(1/8π²) ∮ dσ q₀ = 1` on every
//! sphere around the origin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::kernels::{q0, FueterField, SINGULAR_TOLERANCE};
use crate::quadrature::{gauss_legendre, pairwise_sum, simpson_weights};

/// Ratio between the surface form and `ν dS`.
pub const SIGMA_SCALE: f64 = 4.0;
/// `8π²`, the normalization of every residue-type integral.
pub const EIGHT_PI2: f64 = 8.0 * std::f64::consts::PI * std::f64::consts::PI;
/// Threshold below which a map value counts as zero.
pub const ZERO_TOLERANCE: f64 = 1e-10;
/// Finite-difference step for Jacobians and image tangents.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Node counts along `ψ` (Simpson intervals), `cos θ` (Gauss) and `φ` (trapezoid).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub n_psi: usize,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Resolution {
    pub const fn uniform(n: usize) -> Self {
        Resolution { n_psi: n, n_theta: n, n_phi: n }
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::uniform(32)
    }
}

/// One quadrature node on a sphere.
#[derive(Clone, Copy, Debug)]
pub struct SphereNode {
    pub point: Quaternion,
    pub normal: Quaternion,
    /// Scalar area element `dS`.
    pub weight: f64,
    /// Parameters `(ψ, cos θ, φ)` and their product rule weight.
    pub params: [f64; 3],
    pub param_weight: f64,
}

#[derive(Clone, Debug)]
pub struct SphereCycle {
    center: Quaternion,
    radius: f64,
    resolution: Resolution,
    nodes: Vec<SphereNode>,
}

/// Unit-sphere point for hyperspherical parameters `(ψ, t = cos θ, φ)`.
fn sphere_point(psi: f64, t: f64, phi: f64) -> Quaternion {
    let (sp, cp) = psi.sin_cos();
    let st = (1.0 - t * t).max(0.0).sqrt();
    Quaternion::new(cp, sp * t, sp * st * phi.cos(), sp * st * phi.sin())
}

impl SphereCycle {
    pub fn new(center: Quaternion, radius: f64, resolution: Resolution) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::BadRadius(radius));
        }
        let Resolution { n_psi, n_theta, n_phi } = resolution;
        if n_psi < 4 || n_theta < 4 || n_phi < 4 {
            return Err(Error::BadResolution(format!("{n_psi}x{n_theta}x{n_phi}: every count must be at least 4")));
        }
        if n_psi % 2 == 1 {
            return Err(Error::BadResolution(format!("n_psi = {n_psi} must be even for Simpson's rule")));
        }
        let (psis, wpsi) = simpson_weights(0.0, std::f64::consts::PI, n_psi);
        let (ts, wt) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let r3 = radius.powi(3);
        let mut nodes = Vec::with_capacity((n_psi - 1) * n_theta * n_phi);
        // the ψ = 0, π endpoints carry zero area and are dropped
        for (i, &psi) in psis.iter().enumerate().take(n_psi).skip(1) {
            let s2 = psi.sin().powi(2);
            for (j, &t) in ts.iter().enumerate() {
                for k in 0..n_phi {
                    let phi = dphi * k as f64;
                    let normal = sphere_point(psi, t, phi);
                    let param_weight = wpsi[i] * wt[j] * dphi;
                    nodes.push(SphereNode {
                        point: center + normal * radius,
                        normal,
                        weight: r3 * s2 * param_weight,
                        params: [psi, t, phi],
                        param_weight,
                    });
                }
            }
        }
        Ok(SphereCycle { center, radius, resolution, nodes })
    }

    pub fn center(&self) -> Quaternion {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    /// Sum of the area weights; `2π²ε³` up to quadrature error.
    pub fn area(&self) -> f64 {
        crate::quadrature::pairwise_sum_f64(&self.nodes.iter().map(|n| n.weight).collect::<Vec<_>>())
    }

    /// Point on this sphere for raw parameters.
    pub fn point_at(&self, params: [f64; 3]) -> Quaternion {
        self.center + sphere_point(params[0], params[1], params[2]) * self.radius
    }

    fn on_contour(&self, z: Quaternion) -> bool {
        ((z - self.center).norm() - self.radius).abs() < SINGULAR_TOLERANCE.max(1e-12 * self.radius)
    }
}

/// Signed sum of spheres.
#[derive(Clone, Debug, Default)]
pub struct CycleChain {
    pub cycles: Vec<(SphereCycle, f64)>,
}

impl CycleChain {
    pub fn single(cycle: SphereCycle) -> Self {
        CycleChain { cycles: vec![(cycle, 1.0)] }
    }

    pub fn sphere(center: Quaternion, radius: f64, resolution: Resolution) -> Result<Self> {
        Ok(Self::single(SphereCycle::new(center, radius, resolution)?))
    }

    /// Appends a cycle; `sign` must be `+1` or `-1`.
    pub fn push(&mut self, cycle: SphereCycle, sign: f64) -> Result<()> {
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::InvalidParameter(format!("orientation sign {sign} is not ±1")));
        }
        self.cycles.push((cycle, sign));
        Ok(())
    }

    fn contains_on_contour(&self, z: Quaternion) -> bool {
        self.cycles.iter().any(|(c, _)| c.on_contour(z))
    }
}

/// Real estimate of an integer-valued quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerEstimate {
    pub value: f64,
    /// `|value - round(value)|`.
    pub gap: f64,
}

impl IntegerEstimate {
    pub fn new(value: f64) -> Self {
        IntegerEstimate { value, gap: (value - value.round()).abs() }
    }

    pub fn rounded(&self) -> i64 {
        self.value.round() as i64
    }
}

/// Side on which `dσ` multiplies the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureSide {
    Left,
    Right,
}

/// `Σ_cycles sign Σ_nodes term(node)`, reduced in a fixed order.
pub fn integrate_chain<F>(chain: &CycleChain, term: F) -> Result<Quaternion>
where
    F: Fn(&SphereNode) -> Result<Quaternion> + Sync,
{
    let mut total = Quaternion::ZERO;
    for (cycle, sign) in &chain.cycles {
        let values: Vec<Result<Quaternion>> = cycle.nodes.par_iter().map(&term).collect();
        let values = values.into_iter().collect::<Result<Vec<_>>>()?;
        total += pairwise_sum(&values) * *sign;
    }
    Ok(total)
}

fn on_contour_error(e: Error, node: &SphereNode) -> Error {
    match e {
        Error::SingularPoint(_) => Error::SingularOnContour(node.point),
        other => other,
    }
}

/// `∫_Γ dσ f` (left) or `∫_Γ f dσ` (right).
pub fn surface_integral(f: &FueterField, chain: &CycleChain, side: MeasureSide) -> Result<Quaternion> {
    integrate_chain(chain, |node| {
        let v = f.eval(node.point).map_err(|e| on_contour_error(e, node))?;
        let ds = node.normal * (SIGMA_SCALE * node.weight);
        Ok(match side {
            MeasureSide::Left => ds * v,
            MeasureSide::Right => v * ds,
        })
    })
}

/// `(1/8π²) ∫_Γ q₀(ζ - z) dσ(ζ) f(ζ)`, which equals `w_Γ(z) f(z)` for left-monogenic `f`.
pub fn cauchy_eval(f: &FueterField, chain: &CycleChain, z: Quaternion) -> Result<Quaternion> {
    if chain.contains_on_contour(z) {
        return Err(Error::PointOnContour);
    }
    let s = integrate_chain(chain, |node| {
        let v = f.eval(node.point).map_err(|e| on_contour_error(e, node))?;
        Ok(q0(node.point - z) * (node.normal * (SIGMA_SCALE * node.weight)) * v)
    })?;
    Ok(s * (1.0 / EIGHT_PI2))
}

/// Winding number of the chain about `z`.
pub fn winding_number(chain: &CycleChain, z: Quaternion) -> Result<IntegerEstimate> {
    let one = FueterField::constant(Quaternion::ONE);
    Ok(IntegerEstimate::new(cauchy_eval(&one, chain, z)?.x0))
}

/// `(1/8π²) ∮_{∂B(β, ε)} dσ f`.
pub fn residue(f: &FueterField, beta: Quaternion, epsilon: f64, resolution: Resolution) -> Result<Quaternion> {
    let chain = CycleChain::sphere(beta, epsilon, resolution)?;
    Ok(surface_integral(f, &chain, MeasureSide::Left)? * (1.0 / EIGHT_PI2))
}

/// Real Jacobian `J[i][j] = ∂f_i/∂x_j` by central differences.
pub fn jacobian(f: &(dyn Fn(Quaternion) -> Result<Quaternion> + Sync), z: Quaternion, h: f64) -> Result<[[f64; 4]; 4]> {
    let mut j = [[0.0; 4]; 4];
    for col in 0..4 {
        let e = Quaternion::basis(col) * h;
        let d = (f(z + e)? - f(z - e)?) * (0.5 / h);
        for (row, r) in j.iter_mut().enumerate() {
            r[col] = d.component(row);
        }
    }
    Ok(j)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(j: &[[f64; 4]; 4], row: usize, col: usize) -> f64 {
    let mut m = [[0.0; 3]; 3];
    for (r, mr) in (0..4).filter(|&r| r != row).zip(m.iter_mut()) {
        for (c, mc) in (0..4).filter(|&c| c != col).zip(mr.iter_mut()) {
            *mc = j[r][c];
        }
    }
    det3(m)
}

/// Cofactor matrix `C = adj(J)ᵀ`; it maps surface normals to image normals.
pub fn cofactor(j: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for (r, row) in c.iter_mut().enumerate() {
        for (col, x) in row.iter_mut().enumerate() {
            let s = if (r + col) % 2 == 0 { 1.0 } else { -1.0 };
            *x = s * minor(j, r, col);
        }
    }
    c
}

pub fn mat_vec(m: &[[f64; 4]; 4], v: Quaternion) -> Quaternion {
    Quaternion::from_array(std::array::from_fn(|r| (0..4).map(|c| m[r][c] * v.component(c)).sum()))
}

/// Generalized cross product of three vectors in `ℝ⁴`: the vector `N` with
/// `N·x = det[u, v, w, x]`.
pub fn cross4(u: Quaternion, v: Quaternion, w: Quaternion) -> Quaternion {
    let rows = [u.to_array(), v.to_array(), w.to_array()];
    Quaternion::from_array(std::array::from_fn(|i| {
        let mut m = [[0.0; 3]; 3];
        for (r, mr) in m.iter_mut().enumerate() {
            for (c, col) in (0..4).filter(|&c| c != i).enumerate() {
                mr[c] = rows[r][col];
            }
        }
        let s = if i % 2 == 0 { -1.0 } else { 1.0 };
        s * det3(m)
    }))
}

type MapFn<'a> = &'a (dyn Fn(Quaternion) -> Result<Quaternion> + Sync);

/// Pull-back form of the argument principle:
/// `(1/8π²) ∮ K(f(z)) · [cof(Jf)(z) (dσ(z))]`.
pub fn argument_principle(f: MapFn, kernel: MapFn, cycle: &SphereCycle) -> Result<Quaternion> {
    let s = integrate_chain(&CycleChain::single(cycle.clone()), |node| {
        let fz = f(node.point)?;
        let k = kernel(fz).map_err(|e| match e {
            Error::SingularPoint(_) => Error::ZeroOnContour(node.point),
            other => other,
        })?;
        let c = cofactor(&jacobian(f, node.point, JACOBIAN_STEP)?);
        Ok(k * mat_vec(&c, node.normal * (SIGMA_SCALE * node.weight)))
    })?;
    Ok(s * (1.0 / EIGHT_PI2))
}

/// Image-cycle form: `(1/8π²) ∫_{f(∂B)} K dσ'`, with the oriented normal of
/// the image built from parameter tangents.
pub fn image_cycle_integral(f: MapFn, kernel: MapFn, cycle: &SphereCycle) -> Result<Quaternion> {
    let h = JACOBIAN_STEP;
    let s = integrate_chain(&CycleChain::single(cycle.clone()), |node| {
        let tangents = |g: &dyn Fn([f64; 3]) -> Result<Quaternion>| -> Result<[Quaternion; 3]> {
            let mut t = [Quaternion::ZERO; 3];
            for (k, tk) in t.iter_mut().enumerate() {
                let (mut p, mut m) = (node.params, node.params);
                p[k] += h;
                m[k] -= h;
                *tk = (g(p)? - g(m)?) * (0.5 / h);
            }
            Ok(t)
        };
        let r = tangents(&|p| Ok(cycle.point_at(p)))?;
        let orientation = cross4(r[0], r[1], r[2]).dot(&node.normal).signum();
        let t = tangents(&|p| f(cycle.point_at(p)))?;
        let normal = cross4(t[0], t[1], t[2]) * (orientation * SIGMA_SCALE * node.param_weight);
        let k = kernel(f(node.point)?).map_err(|e| match e {
            Error::SingularPoint(_) => Error::ZeroOnContour(node.point),
            other => other,
        })?;
        Ok(k * normal)
    })?;
    Ok(s * (1.0 / EIGHT_PI2))
}

/// Euclidean order of an isolated zero `c` of `f`.
pub fn ord_euclidean(f: MapFn, c: Quaternion, epsilon: f64, resolution: Resolution) -> Result<IntegerEstimate> {
    let fc = f(c)?;
    if fc.norm() > ZERO_TOLERANCE {
        return Err(Error::NotAZero(fc.norm()));
    }
    let cycle = SphereCycle::new(c, epsilon, resolution)?;
    let kernel = |w: Quaternion| {
        if w.norm() < ZERO_TOLERANCE {
            Err(Error::SingularPoint(w))
        } else {
            Ok(q0(w))
        }
    };
    Ok(IntegerEstimate::new(argument_principle(f, &kernel, &cycle)?.x0))
}

#[cfg(test)]
mod tests;
