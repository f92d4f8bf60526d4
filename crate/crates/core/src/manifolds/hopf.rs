use serde::{Deserialize, Serialize};

use super::SeriesDiagnostics;
use crate::algebra::{Quat, Quaternion};
use crate::contour::{argument_principle, image_cycle_integral, IntegerEstimate, Resolution, SphereCycle, ZERO_TOLERANCE};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::kernels::{q0, SINGULAR_TOLERANCE};

/// Dilation group `{m^k}` and the truncation `|k| ≤ K` of its orbit sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfConfig {
    pub m: f64,
    pub truncation: usize,
}

impl Default for HopfConfig {
    fn default() -> Self {
        HopfConfig { m: 2.0, truncation: 30 }
    }
}

impl HopfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 1.0) || !self.m.is_finite() {
            return Err(Error::NonConvergent(format!("dilation factor m = {} must exceed 1", self.m)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HopfKind {
    /// Fundamental solution of `D`.
    D,
    /// Fundamental solution of `DΔ`.
    DDelta,
}

impl HopfKind {
    /// Automorphy weight exponent: `G(mz) = m^{-w} G(z)`.
    pub fn weight(self) -> f64 {
        match self {
            HopfKind::D => 1.5,
            HopfKind::DDelta => 0.5,
        }
    }
}

/// Dilation-periodized kernel `G(·, y)` on `ℍ \ {0}`.
///
/// Terms with `k ≤ 0` are `m^{wk} K(m^k z - y)`; terms with `k ≥ 1` are the
/// Kelvin-inverted forms `-m^{-wk} K(z) K(m^{-k}z⁻¹ - y⁻¹) K(y)` (with
/// `K(y)` written on the right). The minus sign makes each Kelvin term equal
/// to `m^{wk} K(m^k z - y)`, so the two one-sided sums join into a single
/// orbit sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfKernel {
    pub config: HopfConfig,
    pub y: Quaternion,
    pub kind: HopfKind,
}

fn kernel<S: Scalar>(kind: HopfKind, x: Quat<S>) -> Quat<S> {
    match kind {
        HopfKind::D => q0(x),
        HopfKind::DDelta => x.inv_unchecked(),
    }
}

impl HopfKernel {
    pub fn new(config: HopfConfig, y: Quaternion, kind: HopfKind) -> Result<Self> {
        config.validate()?;
        if y.norm() < SINGULAR_TOLERANCE {
            return Err(Error::SingularPoint(y));
        }
        Ok(HopfKernel { config, y, kind })
    }

    /// Single term `k` of the series.
    pub fn term<S: Scalar>(&self, k: i64, z: Quat<S>) -> Quat<S> {
        let m = self.config.m;
        let w = self.kind.weight();
        if k <= 0 {
            let mk = m.powi(k as i32);
            kernel(self.kind, z.scale_f64(mk).add_const(-self.y)).scale_f64(m.powf(w * k as f64))
        } else {
            let ky = kernel(self.kind, Quat::constant(self.y, z.x0)).value();
            let inner = kernel(
                self.kind,
                z.inv_unchecked().scale_f64(m.powi(-(k as i32))).add_const(-self.y.inv_unchecked()),
            );
            let kz = kernel(self.kind, z);
            Quat::rmul(kz * inner, ky).scale_f64(-m.powf(-w * k as f64))
        }
    }

    /// Orbit term `m^{wk} K(m^k z - y)` for any `k`.
    pub fn orbit_term(&self, k: i64, z: Quaternion) -> Quaternion {
        let m = self.config.m;
        let w = self.kind.weight();
        kernel(self.kind, z * m.powi(k as i32) - self.y) * m.powf(w * k as f64)
    }

    pub fn eval_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let k = self.config.truncation as i64;
        let mut s = Quat::constant(Quaternion::ZERO, z.x0);
        for j in -k..=k {
            s += self.term(j, z);
        }
        s
    }

    /// Distance from `z` to the nearest singular point `m^{-k} y` or `0`.
    pub fn singular_distance(&self, z: Quaternion) -> f64 {
        let k = self.config.truncation as i32;
        let m = self.config.m;
        (-k..=k)
            .map(|j| (z - self.y * m.powi(-j)).norm())
            .fold(z.norm(), f64::min)
    }

    pub fn eval(&self, z: Quaternion) -> Result<Quaternion> {
        if self.singular_distance(z) < SINGULAR_TOLERANCE {
            return Err(Error::SingularPoint(z));
        }
        Ok(self.eval_generic(z))
    }

    /// Geometric bound on the omitted terms `|k| > K`.
    pub fn tail_estimate(&self, z: Quaternion) -> f64 {
        let k = self.config.truncation as i64;
        let m = self.config.m;
        let w = self.kind.weight();
        // both one-sided tails shrink by m^{-w} per step once |m^k z| is far from |y|
        let r = m.powf(-w);
        (self.orbit_term(-k, z).norm() + self.orbit_term(k, z).norm()) * r / (1.0 - r)
    }

    /// Partial sums at truncations `K-4, …, K`.
    pub fn diagnostics(&self, z: Quaternion) -> Result<SeriesDiagnostics> {
        let k = self.config.truncation;
        let mut sums = Vec::new();
        for t in k.saturating_sub(4)..=k {
            let h = HopfKernel { config: HopfConfig { truncation: t, ..self.config }, ..*self };
            sums.push(h.eval(z)?);
        }
        let mut d = SeriesDiagnostics::from_partial_sums(&sums)?;
        d.tail_estimate = self.tail_estimate(z);
        Ok(d)
    }
}

/// Both evaluations of the Hopf argument principle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfOrder {
    pub pullback: IntegerEstimate,
    pub image_cycle: IntegerEstimate,
    /// The `a`-point whose preimages are counted.
    pub target: Quaternion,
}

/// Counts solutions of `f(z) = f(c')` inside `B(c', ε)` on the Hopf
/// manifold, through the kernel `G_D(·, f(c'))`.
///
/// The target must be nonzero: `G_D(·, y)` needs `y⁻¹`.
pub fn ord_hopf(
    f: &(dyn Fn(Quaternion) -> Result<Quaternion> + Sync),
    c: Quaternion,
    epsilon: f64,
    config: HopfConfig,
    resolution: Resolution,
) -> Result<HopfOrder> {
    config.validate()?;
    let limit = (config.m - 1.0) * c.norm();
    if 2.0 * epsilon >= limit {
        return Err(Error::BallTooLarge { epsilon, limit });
    }
    let target = f(c)?;
    if target.norm() < ZERO_TOLERANCE {
        return Err(Error::InvalidParameter("the counted value f(c') must be nonzero".into()));
    }
    let g = HopfKernel::new(config, target, HopfKind::D)?;
    let kernel = |w: Quaternion| g.eval(w);
    let cycle = SphereCycle::new(c, epsilon, resolution)?;
    let pullback = argument_principle(f, &kernel, &cycle)?;
    let image = image_cycle_integral(f, &kernel, &cycle)?;
    Ok(HopfOrder {
        pullback: IntegerEstimate::new(pullback.x0),
        image_cycle: IntegerEstimate::new(image.x0),
        target,
    })
}
