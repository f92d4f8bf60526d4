use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::jets::{finite_difference_jet, FdSteps, FieldJet, JetMode};
use super::{fueter_polynomial_generic, jet_point, q0, MultiIndex, AXIS_TOLERANCE, SINGULAR_TOLERANCE};
use crate::algebra::{Quat, Quaternion};
use crate::error::{Error, Result};
use crate::jet::{Scalar, MAX_ORDER};
use crate::manifolds::{CotangentSeries, HopfKernel, PoincareSeries};

/// One term `conj(α)(z + β)⁻¹ α`; the pole sits at `-β`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Pole {
    pub shift: Quaternion,
    pub conjugator: Option<Quaternion>,
}

impl Pole {
    /// Unit-weight pole located at `location`.
    pub fn at(location: Quaternion) -> Pole {
        Pole { shift: -location, conjugator: None }
    }

    /// Pole at `location` with real weight `w > 0` (conjugator `√w`).
    pub fn weighted(location: Quaternion, w: f64) -> Pole {
        Pole { shift: -location, conjugator: Some(Quaternion::real(w.sqrt())) }
    }

    pub fn location(&self) -> Quaternion {
        -self.shift
    }
}

/// Superposition of inverse-linear kernels.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PoleSum {
    pub poles: Vec<Pole>,
}

impl PoleSum {
    pub fn new(poles: Vec<Pole>) -> Self {
        PoleSum { poles }
    }

    pub fn at_locations(locations: &[Quaternion]) -> Self {
        PoleSum { poles: locations.iter().map(|&p| Pole::at(p)).collect() }
    }

    pub fn locations(&self) -> Vec<Quaternion> {
        self.poles.iter().map(Pole::location).collect()
    }

    fn eval_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut sum = Quat::constant(Quaternion::ZERO, z.x0);
        for p in &self.poles {
            let inv = z.add_const(p.shift).inv_unchecked();
            sum += match p.conjugator {
                Some(a) => Quat::rmul(Quat::lmul(a.conj(), inv), a),
                None => inv,
            };
        }
        sum
    }
}

type ComplexFn = dyn Fn(Complex64) -> std::result::Result<Complex64, String> + Send + Sync;

/// Quaternionic lift of a complex function `F = u + iv`.
#[derive(Clone)]
pub struct InducedField {
    name: String,
    f: Arc<ComplexFn>,
}

impl fmt::Debug for InducedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InducedField({})", self.name)
    }
}

impl InducedField {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(Complex64) -> std::result::Result<Complex64, String> + Send + Sync + 'static,
    ) -> Self {
        InducedField { name: name.into(), f: Arc::new(f) }
    }

    /// `F(w) = w^n`; negative powers fail at `w = 0`.
    pub fn power(n: i32) -> Self {
        InducedField::new(format!("w^{n}"), move |w: Complex64| {
            if n < 0 && w.norm() == 0.0 {
                Err("negative power at 0".into())
            } else {
                Ok(w.powi(n))
            }
        })
    }

    pub fn exp() -> Self {
        InducedField::new("exp", |w: Complex64| Ok(w.exp()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, z: Quaternion) -> Result<Quaternion> {
        let polar = z.polar();
        let w = (self.f)(Complex64::new(polar.a0, polar.r)).map_err(Error::DomainError)?;
        match polar.omega {
            Some(omega) => Ok(Quaternion::real(w.re) + omega * w.im),
            None => {
                if w.im.abs() > AXIS_TOLERANCE {
                    Err(Error::AxisSingularity(w.im))
                } else {
                    Ok(Quaternion::real(w.re))
                }
            }
        }
    }
}

type QuatFn = dyn Fn(Quaternion) -> Quaternion + Send + Sync;

/// What a [`FueterField`] evaluates.
#[derive(Clone)]
pub enum FieldKind {
    Constant(Quaternion),
    /// `z`
    Identity,
    /// `z^n`
    Power(i32),
    /// `conj(z)`; linear, hence still annihilated by `DΔ`.
    Conjugate,
    /// `q₀(z - center)`
    CauchyKernel { center: Quaternion },
    /// `q_m(z - center)`
    KernelDerivative { center: Quaternion, index: MultiIndex },
    /// `V_m(z - center)`
    FueterPolynomial { center: Quaternion, index: MultiIndex },
    RationalPoleSum(PoleSum),
    InducedFromComplex(InducedField),
    /// Periodic Fueter-holomorphic cotangent `cot_{DΔ}`.
    Cotangent(Arc<CotangentSeries>),
    /// Periodic monogenic cotangent `cot_D = -¼ Δ cot_{DΔ}`.
    CotangentD(Arc<CotangentSeries>),
    Hopf(HopfKernel),
    Poincare(Arc<PoincareSeries>),
    /// `f(z) · c`
    RightMul(Box<FieldKind>, Quaternion),
    Sum(Vec<FieldKind>),
    /// Arbitrary map; derivatives by finite differences only.
    Custom(Arc<QuatFn>),
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Constant(c) => write!(f, "Constant({c:?})"),
            FieldKind::Identity => write!(f, "Identity"),
            FieldKind::Power(n) => write!(f, "Power({n})"),
            FieldKind::Conjugate => write!(f, "Conjugate"),
            FieldKind::CauchyKernel { center } => write!(f, "CauchyKernel({center:?})"),
            FieldKind::KernelDerivative { center, index } => write!(f, "KernelDerivative({center:?}, {index:?})"),
            FieldKind::FueterPolynomial { center, index } => write!(f, "FueterPolynomial({center:?}, {index:?})"),
            FieldKind::RationalPoleSum(p) => write!(f, "RationalPoleSum({} poles)", p.poles.len()),
            FieldKind::InducedFromComplex(g) => write!(f, "{g:?}"),
            FieldKind::Cotangent(s) => write!(f, "Cotangent(p={}, K={})", s.lattice().rank(), s.truncation()),
            FieldKind::CotangentD(s) => write!(f, "CotangentD(p={}, K={})", s.lattice().rank(), s.truncation()),
            FieldKind::Hopf(h) => write!(f, "{h:?}"),
            FieldKind::Poincare(_) => write!(f, "Poincare"),
            FieldKind::RightMul(k, c) => write!(f, "RightMul({k:?}, {c:?})"),
            FieldKind::Sum(v) => write!(f, "Sum({v:?})"),
            FieldKind::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl FieldKind {
    /// Generic evaluation; `None` when the kind has no jet-capable path.
    fn eval_generic<S: Scalar>(&self, z: Quat<S>) -> Option<Quat<S>> {
        let zero = || Quat::constant(Quaternion::ZERO, z.x0);
        Some(match self {
            FieldKind::Constant(c) => Quat::constant(*c, z.x0),
            FieldKind::Identity => z,
            FieldKind::Power(n) => {
                let base = if *n < 0 { z.inv_unchecked() } else { z };
                let mut acc = Quat::constant(Quaternion::ONE, z.x0);
                for _ in 0..n.unsigned_abs() {
                    acc = acc * base;
                }
                acc
            }
            FieldKind::Conjugate => z.conj(),
            FieldKind::CauchyKernel { center } => q0(z.add_const(-*center)),
            FieldKind::FueterPolynomial { center, index } => fueter_polynomial_generic(*index, z.add_const(-*center)),
            FieldKind::RationalPoleSum(p) => p.eval_generic(z),
            FieldKind::Cotangent(s) => s.eval_ddelta_generic(z),
            FieldKind::CotangentD(s) => s.eval_d_generic(z),
            FieldKind::Hopf(h) => h.eval_generic(z),
            FieldKind::Poincare(p) => p.eval_generic(z),
            FieldKind::RightMul(k, c) => Quat::rmul(k.eval_generic(z)?, *c),
            FieldKind::Sum(v) => {
                let mut s = zero();
                for k in v {
                    s += k.eval_generic(z)?;
                }
                s
            }
            FieldKind::KernelDerivative { .. } | FieldKind::InducedFromComplex(_) | FieldKind::Custom(_) => {
                return None
            }
        })
    }

    fn has_generic(&self) -> bool {
        match self {
            FieldKind::KernelDerivative { .. } | FieldKind::InducedFromComplex(_) | FieldKind::Custom(_) => false,
            FieldKind::RightMul(k, _) => k.has_generic(),
            FieldKind::Sum(v) => v.iter().all(FieldKind::has_generic),
            _ => true,
        }
    }

    fn eval_value(&self, z: Quaternion) -> Result<Quaternion> {
        match self {
            FieldKind::KernelDerivative { center, index } => super::kernel_derivative(*index, z - *center),
            FieldKind::InducedFromComplex(g) => g.eval(z),
            FieldKind::Custom(f) => Ok(f(z)),
            FieldKind::Cotangent(s) => s.value_ddelta(z),
            FieldKind::CotangentD(s) => s.value_d(z),
            FieldKind::Poincare(p) => p.eval(z),
            FieldKind::RightMul(k, c) => Ok(k.eval_value(z)? * *c),
            FieldKind::Sum(v) => v.iter().map(|k| k.eval_value(z)).collect::<Result<Vec<_>>>().map(|v| v.into_iter().sum()),
            other => Ok(other.eval_generic(z).expect("generic path available")),
        }
    }

    /// Distance from `z` to the nearest known singularity.
    pub fn singular_distance(&self, z: Quaternion) -> f64 {
        match self {
            FieldKind::Power(n) if *n < 0 => z.norm(),
            FieldKind::CauchyKernel { center } | FieldKind::KernelDerivative { center, .. } => (z - *center).norm(),
            FieldKind::RationalPoleSum(p) => {
                p.poles.iter().map(|p| (z - p.location()).norm()).fold(f64::INFINITY, f64::min)
            }
            FieldKind::Cotangent(s) | FieldKind::CotangentD(s) => s.lattice().distance_to_lattice(z),
            FieldKind::Hopf(h) => h.singular_distance(z),
            FieldKind::Poincare(p) => p.singular_distance(z),
            FieldKind::RightMul(k, _) => k.singular_distance(z),
            FieldKind::Sum(v) => v.iter().map(|k| k.singular_distance(z)).fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        }
    }
}

/// An evaluable quaternion field with a derivative policy.
#[derive(Clone, Debug)]
pub struct FueterField {
    pub kind: FieldKind,
    pub jet_mode: JetMode,
}

impl FueterField {
    pub fn new(kind: FieldKind) -> Self {
        FueterField { kind, jet_mode: JetMode::Analytic }
    }

    pub fn with_jet_mode(mut self, mode: JetMode) -> Self {
        self.jet_mode = mode;
        self
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::new(FieldKind::Constant(c))
    }

    pub fn cauchy_kernel(center: Quaternion) -> Self {
        Self::new(FieldKind::CauchyKernel { center })
    }

    pub fn fueter_polynomial(index: MultiIndex) -> Self {
        Self::new(FieldKind::FueterPolynomial { center: Quaternion::ZERO, index })
    }

    pub fn poles(p: PoleSum) -> Self {
        Self::new(FieldKind::RationalPoleSum(p))
    }

    pub fn induced(g: InducedField) -> Self {
        Self::new(FieldKind::InducedFromComplex(g)).with_jet_mode(JetMode::FiniteDifference(FdSteps::default()))
    }

    pub fn custom(f: impl Fn(Quaternion) -> Quaternion + Send + Sync + 'static) -> Self {
        Self::new(FieldKind::Custom(Arc::new(f))).with_jet_mode(JetMode::FiniteDifference(FdSteps::default()))
    }

    /// True when derivatives come from Taylor arithmetic.
    pub fn has_analytic_jet(&self) -> bool {
        matches!(self.jet_mode, JetMode::Analytic) && self.kind.has_generic()
    }

    pub fn singular_distance(&self, z: Quaternion) -> f64 {
        self.kind.singular_distance(z)
    }

    pub fn is_regular(&self, z: Quaternion) -> bool {
        self.singular_distance(z) >= SINGULAR_TOLERANCE
    }

    fn check(&self, z: Quaternion) -> Result<()> {
        if self.is_regular(z) {
            Ok(())
        } else {
            Err(Error::SingularPoint(z))
        }
    }

    pub fn eval(&self, z: Quaternion) -> Result<Quaternion> {
        self.check(z)?;
        let v = self.kind.eval_value(z)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularPoint(z))
        }
    }

    /// Value and derivatives through `order` at `z`.
    pub fn jet(&self, z: Quaternion, order: usize) -> Result<FieldJet> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        self.check(z)?;
        let steps = match self.jet_mode {
            JetMode::Analytic if self.kind.has_generic() => {
                let q = self.kind.eval_generic(jet_point(z, order)).ok_or(Error::JetUnavailable(order))?;
                return Ok(FieldJet::from_quat(q));
            }
            JetMode::Analytic => FdSteps::default(),
            JetMode::FiniteDifference(s) => s,
        };
        finite_difference_jet(&|w| self.eval(w), z, order, steps)
    }
}
