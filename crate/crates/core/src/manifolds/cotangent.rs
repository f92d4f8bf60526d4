use serde::{Deserialize, Serialize};

use super::lattice::Lattice;
use super::SeriesDiagnostics;
use crate::algebra::{Quat, Quaternion};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::kernels::{q0, SINGULAR_TOLERANCE};

/// Lattice-periodized `z⁻¹` and `q₀`.
///
/// For rank one the pairing form `Σ_n [(z - nω)⁻¹ + (z + nω)⁻¹]` is used.
/// For higher rank the sum runs over `0 < |w| ≤ K` with the convergence
/// terms `w⁻¹(zw⁻¹)^μ`, `μ ≤ q`. On a ball the terms with even `μ` cancel
/// in `±w` pairs, so only `μ = 1, 3` are accumulated, once, into tensors.
/// Ranks 2 and 3 additionally subtract the linear quasi-period part
/// `Σ_j t_j(z) η_j` so the truncated series becomes periodic as `K → ∞`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CotangentSeries {
    lattice: Lattice,
    truncation: usize,
    correction_order: usize,
    /// `Σ' w⁻¹ e_a w⁻¹`, indexed by `a`.
    t1: [Quaternion; 4],
    /// `Σ' (w⁻¹e_a)(w⁻¹e_b)(w⁻¹e_c) w⁻¹`, indexed by `16a + 4b + c`.
    t3: Vec<Quaternion>,
    /// Laplacian of the cubic correction as a linear map, indexed by coordinate.
    lap_t3: [Quaternion; 4],
    /// Quasi-periods `η_j`; empty when no regularization applies.
    eta: Vec<Quaternion>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CotangentKind {
    /// Fueter-holomorphic `cot_{DΔ}`.
    DDelta,
    /// Monogenic `cot_D = -¼ Δ cot_{DΔ}`.
    D,
}

impl CotangentSeries {
    /// `correction_order` defaults to `p - 1`.
    pub fn new(lattice: Lattice, truncation: usize, correction_order: Option<usize>) -> Result<Self> {
        let p = lattice.rank();
        let q = if p == 1 { 0 } else { correction_order.unwrap_or(p - 1) };
        if q > 3 {
            return Err(Error::InvalidParameter(format!("correction order {q} exceeds 3")));
        }
        let mut s = CotangentSeries {
            lattice,
            truncation,
            correction_order: q,
            t1: [Quaternion::ZERO; 4],
            t3: Vec::new(),
            lap_t3: [Quaternion::ZERO; 4],
            eta: Vec::new(),
        };
        if p >= 2 {
            s.build_tensors();
            if p <= 3 {
                let eta = s
                    .lattice
                    .basis()
                    .iter()
                    .map(|&w| s.raw_ddelta(w * 0.5) * 2.0)
                    .collect();
                s.eta = eta;
            }
        }
        Ok(s)
    }

    /// Standard lattice of rank `p`.
    pub fn standard(p: usize, truncation: usize) -> Result<Self> {
        Self::new(Lattice::standard(p)?, truncation, None)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn correction_order(&self) -> usize {
        self.correction_order
    }

    pub fn quasi_periods(&self) -> &[Quaternion] {
        &self.eta
    }

    /// Same lattice and correction order at another truncation.
    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(self.lattice.clone(), truncation, Some(self.correction_order))
    }

    fn build_tensors(&mut self) {
        let q = self.correction_order;
        let n = if q >= 3 { 68 } else { 4 };
        let acc = self.lattice.fold_ball(
            self.truncation as f64,
            || vec![Quaternion::ZERO; n],
            |acc, w| {
                let wi = w.inv_unchecked();
                let u: [Quaternion; 4] = std::array::from_fn(|a| wi * Quaternion::basis(a));
                for a in 0..4 {
                    acc[a] += u[a] * wi;
                }
                if q >= 3 {
                    for a in 0..4 {
                        for b in 0..4 {
                            let ab = u[a] * u[b];
                            for c in 0..4 {
                                acc[4 + 16 * a + 4 * b + c] += ab * u[c] * wi;
                            }
                        }
                    }
                }
            },
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
        self.t1.copy_from_slice(&acc[..4]);
        if q >= 3 {
            self.t3 = acc[4..].to_vec();
            for c in 0..4 {
                let mut s = Quaternion::ZERO;
                for a in 0..4 {
                    s += (self.t3[16 * a + 4 * a + c] + self.t3[16 * a + 4 * c + a] + self.t3[16 * c + 4 * a + a]) * 2.0;
                }
                self.lap_t3[c] = s;
            }
        }
    }

    fn zero<S: Scalar>(z: &Quat<S>) -> Quat<S> {
        Quat::constant(Quaternion::ZERO, z.x0)
    }

    /// `Σ_a z_a c_a` for constant quaternions `c_a`.
    fn linear<S: Scalar>(z: Quat<S>, c: &[Quaternion; 4]) -> Quat<S> {
        let mut s = Self::zero(&z);
        for (a, ca) in c.iter().enumerate() {
            s += Quat::constant(*ca, z.x0).scale(z.component(a));
        }
        s
    }

    fn cubic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut s = Self::zero(&z);
        for a in 0..4 {
            for b in 0..4 {
                let zab = z.component(a) * z.component(b);
                for c in 0..4 {
                    s += Quat::constant(self.t3[16 * a + 4 * b + c], z.x0).scale(zab * z.component(c));
                }
            }
        }
        s
    }

    fn lattice_sum<S: Scalar>(&self, z: Quat<S>, term: impl Fn(Quat<S>) -> Quat<S> + Sync) -> Quat<S> {
        if self.lattice.rank() == 1 {
            let w = self.lattice.basis()[0];
            let mut s = Self::zero(&z);
            for n in 1..=self.truncation {
                let shift = w * n as f64;
                s += term(z.add_const(-shift)) + term(z.add_const(shift));
            }
            s
        } else {
            self.lattice.fold_ball(
                self.truncation as f64,
                || Self::zero(&z),
                |acc, w| *acc += term(z.add_const(-w)),
                |a, b| a + b,
            )
        }
    }

    fn raw_ddelta<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut s = z.inv_unchecked() + self.lattice_sum(z, |x| x.inv_unchecked());
        if self.lattice.rank() >= 2 {
            s += Self::linear(z, &self.t1);
            if self.correction_order >= 3 {
                s += self.cubic(z);
            }
        }
        s
    }

    /// Generic `cot_{DΔ}`, no singularity check.
    pub fn eval_ddelta_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut s = self.raw_ddelta(z);
        if !self.eta.is_empty() {
            for (row, eta) in self.lattice.dual_rows().iter().zip(&self.eta) {
                s -= Self::linear(z, &std::array::from_fn(|mu| *eta * row[mu]));
            }
        }
        s
    }

    /// Generic `cot_D`, no singularity check.
    pub fn eval_d_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut s = q0(z) + self.lattice_sum(z, q0);
        if self.correction_order >= 3 {
            s -= Self::linear(z, &self.lap_t3).scale_f64(0.25);
        }
        s
    }

    fn check(&self, z: Quaternion) -> Result<()> {
        if self.lattice.distance_to_lattice(z) < SINGULAR_TOLERANCE {
            Err(Error::SingularPoint(z))
        } else {
            Ok(())
        }
    }

    pub fn value(&self, kind: CotangentKind, z: Quaternion) -> Result<Quaternion> {
        self.check(z)?;
        Ok(match kind {
            CotangentKind::DDelta => self.eval_ddelta_generic(z),
            CotangentKind::D => self.eval_d_generic(z),
        })
    }

    pub fn value_ddelta(&self, z: Quaternion) -> Result<Quaternion> {
        self.value(CotangentKind::DDelta, z)
    }

    pub fn value_d(&self, z: Quaternion) -> Result<Quaternion> {
        self.value(CotangentKind::D, z)
    }

    /// Rank-one periodized fundamental solution of `Δ`:
    /// `-¼ Σ_{|n| ≤ K} |z - nω|⁻²`.
    pub fn value_delta(&self, z: Quaternion) -> Result<f64> {
        if self.lattice.rank() != 1 {
            return Err(Error::InvalidParameter("the Laplacian kernel is only periodized for rank one".into()));
        }
        self.check(z)?;
        let w = self.lattice.basis()[0];
        let mut s = 1.0 / z.norm2();
        for n in 1..=self.truncation {
            let shift = w * n as f64;
            s += 1.0 / (z - shift).norm2() + 1.0 / (z + shift).norm2();
        }
        Ok(-0.25 * s)
    }

    /// Partial sums at `K/16, K/8, K/4, K/2, K` and the derived diagnostics.
    pub fn diagnostics(&self, kind: CotangentKind, z: Quaternion) -> Result<SeriesDiagnostics> {
        let mut sums = Vec::with_capacity(5);
        for shift in (0..5).rev() {
            let k = (self.truncation >> shift).max(1);
            sums.push(self.with_truncation(k)?.value(kind, z)?);
        }
        SeriesDiagnostics::from_partial_sums(&sums)
    }
}
