//! Serializable field descriptors and their construction.

use std::sync::Arc;

use fueterlab_core::kernels::{FieldKind, FueterField, InducedField, JetMode, MultiIndex, Pole, PoleSum};
use fueterlab_core::manifolds::{CotangentSeries, HopfConfig, HopfKernel, HopfKind, PoincareConfig, PoincareSeries, PoincareWeight};
use fueterlab_core::Quaternion;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliResult};

pub type Q4 = [f64; 4];

pub fn quat(a: Q4) -> Quaternion {
    Quaternion::from_array(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    D,
    Ddelta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Covariant,
    HeightWeighted,
}

/// Variant plus parameters; every field the library can evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant { value: Q4 },
    Identity,
    Power { n: i32 },
    Conjugate,
    CauchyKernel { #[serde(default)] center: Q4 },
    KernelDerivative { #[serde(default)] center: Q4, index: [u32; 3] },
    FueterPolynomial { #[serde(default)] center: Q4, index: [u32; 3] },
    Poles { poles: Vec<Q4>, #[serde(default)] weights: Option<Vec<f64>> },
    InducedPower { n: i32 },
    InducedExp,
    Cotangent { p: usize, truncation_k: usize, kind: KernelKind },
    Hopf { m: f64, truncation_k: usize, y: Q4, kind: KernelKind },
    Poincare { p: usize, level: u32, word_length: usize, y: Q4, weight: WeightSpec, #[serde(default)] height_index: usize },
    /// `a z + b`; a map for the argument principle, not a kernel.
    Affine { a: Q4, #[serde(default)] b: Q4 },
    /// `conj(z)|z|²` plus unit poles: not Fueter-holomorphic.
    NonFueterControl { poles: Vec<Q4> },
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::CauchyKernel { center: [0.0; 4] }
    }
}

fn pole_sum(poles: &[Q4], weights: Option<&Vec<f64>>) -> CliResult<PoleSum> {
    if poles.is_empty() {
        return Err(config_err("pole list is empty"));
    }
    match weights {
        None => Ok(PoleSum::at_locations(&poles.iter().map(|&p| quat(p)).collect::<Vec<_>>())),
        Some(w) if w.len() != poles.len() => Err(config_err(format!("{} weights for {} poles", w.len(), poles.len()))),
        Some(w) => {
            if w.iter().any(|&x| !(x > 0.0)) {
                return Err(config_err("pole weights must be positive"));
            }
            Ok(PoleSum::new(poles.iter().zip(w).map(|(&p, &x)| Pole::weighted(quat(p), x)).collect()))
        }
    }
}

fn index(i: [u32; 3]) -> MultiIndex {
    MultiIndex::new(i[0], i[1], i[2])
}

impl FieldSpec {
    pub fn build(&self) -> CliResult<FueterField> {
        let kind = match self {
            FieldSpec::Constant { value } => FieldKind::Constant(quat(*value)),
            FieldSpec::Identity => FieldKind::Identity,
            FieldSpec::Power { n } => FieldKind::Power(*n),
            FieldSpec::Conjugate => FieldKind::Conjugate,
            FieldSpec::CauchyKernel { center } => FieldKind::CauchyKernel { center: quat(*center) },
            FieldSpec::KernelDerivative { center, index: i } => {
                return Ok(FueterField::new(FieldKind::KernelDerivative { center: quat(*center), index: index(*i) })
                    .with_jet_mode(JetMode::FiniteDifference(Default::default())))
            }
            FieldSpec::FueterPolynomial { center, index: i } => FieldKind::FueterPolynomial { center: quat(*center), index: index(*i) },
            FieldSpec::Poles { poles, weights } => FieldKind::RationalPoleSum(pole_sum(poles, weights.as_ref())?),
            FieldSpec::InducedPower { n } => return Ok(FueterField::induced(InducedField::power(*n))),
            FieldSpec::InducedExp => return Ok(FueterField::induced(InducedField::exp())),
            FieldSpec::Cotangent { p, truncation_k, kind } => {
                let s = Arc::new(CotangentSeries::standard(*p, *truncation_k)?);
                match kind {
                    KernelKind::D => FieldKind::CotangentD(s),
                    KernelKind::Ddelta => FieldKind::Cotangent(s),
                }
            }
            FieldSpec::Hopf { m, truncation_k, y, kind } => {
                let kind = match kind {
                    KernelKind::D => HopfKind::D,
                    KernelKind::Ddelta => HopfKind::DDelta,
                };
                let cfg = HopfConfig { m: *m, truncation: *truncation_k };
                FieldKind::Hopf(HopfKernel::new(cfg, quat(*y), kind)?)
            }
            FieldSpec::Poincare { p, level, word_length, y, weight, height_index } => {
                let weight = match weight {
                    WeightSpec::Covariant => PoincareWeight::Covariant,
                    WeightSpec::HeightWeighted => PoincareWeight::HeightWeighted { height_index: *height_index },
                };
                let cfg = PoincareConfig { p: *p, level: *level, word_length: *word_length, weight, height_index: *height_index };
                FieldKind::Poincare(Arc::new(PoincareSeries::new(cfg, quat(*y))?))
            }
            FieldSpec::Affine { a, b } => {
                let (a, b) = (quat(*a), quat(*b));
                FieldKind::Custom(Arc::new(move |z: Quaternion| a * z + b))
            }
            FieldSpec::NonFueterControl { poles } => {
                let control = FieldKind::Custom(Arc::new(|z: Quaternion| z.conj() * z.norm2()));
                let sum = FieldKind::Sum(vec![control, FieldKind::RationalPoleSum(pole_sum(poles, None)?)]);
                return Ok(FueterField::new(sum).with_jet_mode(JetMode::FiniteDifference(Default::default())));
            }
        };
        Ok(FueterField::new(kind))
    }

    pub fn pole_sum(&self) -> CliResult<PoleSum> {
        match self {
            FieldSpec::Poles { poles, weights } => pole_sum(poles, weights.as_ref()),
            _ => Err(config_err("this command needs a `poles` field")),
        }
    }
}
