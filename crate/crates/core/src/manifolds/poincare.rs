use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::SeriesDiagnostics;
use crate::algebra::{MobiusTransform, Quat, Quaternion};
use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::kernels::SINGULAR_TOLERANCE;

/// Generators of `Γ_p`: translations `T_i = (1, e_i; 0, 1)` and the
/// inversion `J = (0, -1; 1, 0)`, each with its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    T { axis: u8, inverse: bool },
    J { inverse: bool },
}

impl Generator {
    pub fn matrix(self) -> MobiusTransform {
        let one = Quaternion::ONE;
        let zero = Quaternion::ZERO;
        match self {
            Generator::T { axis, inverse } => {
                let b = Quaternion::basis(axis as usize) * if inverse { -1.0 } else { 1.0 };
                MobiusTransform::new(one, b, zero, one)
            }
            Generator::J { inverse: false } => MobiusTransform::new(zero, -one, one, zero),
            Generator::J { inverse: true } => MobiusTransform::new(zero, one, -one, zero),
        }
    }

    fn all(p: usize) -> Vec<Generator> {
        let mut g = Vec::with_capacity(2 * p + 2);
        for axis in 1..=p as u8 {
            g.push(Generator::T { axis, inverse: false });
            g.push(Generator::T { axis, inverse: true });
        }
        g.push(Generator::J { inverse: false });
        g.push(Generator::J { inverse: true });
        g
    }
}

/// A group element with the shortest generator word that reached it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub matrix: MobiusTransform,
    pub word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { matrix: MobiusTransform::IDENTITY, word: Vec::new() }
    }

    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    /// `a - 1, b, c, d - 1 ∈ N ℤ⁴`.
    pub fn is_level(&self, n: u32) -> bool {
        let [a, b, c, d] = self.matrix.entries();
        let nf = n as f64;
        [a - Quaternion::ONE, b, c, d - Quaternion::ONE].iter().all(|q| {
            q.to_array().iter().all(|&x| {
                let r = x / nf;
                (r - r.round()).abs() < 1e-9
            })
        })
    }
}

fn key(m: &MobiusTransform) -> [i64; 16] {
    let e = m.entries();
    std::array::from_fn(|i| (e[i / 4].component(i % 4) * 1e9).round() as i64)
}

fn check_group_params(p: usize, n: u32, l: usize) -> Result<()> {
    if !(1..=3).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p}: the modular group needs 1 ≤ p < 4")));
    }
    if n < 3 {
        return Err(Error::InvalidParameter(format!("level N = {n} must be at least 3")));
    }
    if l < 1 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    Ok(())
}

/// Distinct elements of `Γ_p` with word length `≤ L`, in breadth-first order.
pub fn gamma_p_ball(p: usize, l: usize) -> Vec<GroupElement> {
    let gens = Generator::all(p);
    let mut seen = HashSet::new();
    let id = GroupElement::identity();
    seen.insert(key(&id.matrix));
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        if g.word.len() == l {
            continue;
        }
        for &s in &gens {
            let m = g.matrix.compose(&s.matrix());
            if seen.insert(key(&m)) {
                let mut word = g.word.clone();
                word.push(s);
                let e = GroupElement { matrix: m, word };
                out.push(e.clone());
                queue.push_back(e);
            }
        }
    }
    out
}

/// Elements of `Γ_p[N]` reachable with at most `L` generators.
pub fn gamma_pn_enumerate(p: usize, n: u32, l: usize) -> Result<Vec<GroupElement>> {
    check_group_params(p, n, l)?;
    Ok(gamma_p_ball(p, l).into_iter().filter(|g| g.is_level(n)).collect())
}

/// Weight multiplying `(M⟨z⟩ - y)⁻¹` in the orbit sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoincareWeight {
    /// `x_h(z)² conj(cz + d) / |cz + d|⁶`, with `x_h` the chosen coordinate.
    HeightWeighted { height_index: usize },
    /// `(cz + d)⁻¹`, which makes every term an inverse-linear kernel.
    Covariant,
}

impl Default for PoincareWeight {
    fn default() -> Self {
        PoincareWeight::Covariant
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareConfig {
    pub p: usize,
    pub level: u32,
    pub word_length: usize,
    pub weight: PoincareWeight,
    /// Coordinate that must stay positive (the half-space height).
    pub height_index: usize,
}

impl Default for PoincareConfig {
    fn default() -> Self {
        PoincareConfig { p: 2, level: 3, word_length: 6, weight: PoincareWeight::Covariant, height_index: 0 }
    }
}

/// `Σ_{M ∈ Γ_p[N], |M| ≤ L} w(z, M) (M⟨z⟩ - y)⁻¹`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoincareSeries {
    config: PoincareConfig,
    y: Quaternion,
    elements: Vec<GroupElement>,
}

impl PoincareSeries {
    pub fn new(config: PoincareConfig, y: Quaternion) -> Result<Self> {
        if config.height_index > 3 {
            return Err(Error::InvalidParameter(format!("height index {} out of range", config.height_index)));
        }
        let elements = gamma_pn_enumerate(config.p, config.level, config.word_length)?;
        Ok(PoincareSeries { config, y, elements })
    }

    pub fn config(&self) -> &PoincareConfig {
        &self.config
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    fn term<S: Scalar>(&self, m: &MobiusTransform, z: Quat<S>) -> Quat<S> {
        let [_, _, c, d] = m.entries();
        let cz_d = Quat::lmul(c, z).add_const(d);
        let kernel = m.apply_generic(z).add_const(-self.y).inv_unchecked();
        match self.config.weight {
            PoincareWeight::Covariant => cz_d.inv_unchecked() * kernel,
            PoincareWeight::HeightWeighted { height_index } => {
                let h = z.component(height_index);
                let n2 = cz_d.norm2();
                cz_d.conj().scale(h * h * (n2 * n2 * n2).recip()) * kernel
            }
        }
    }

    pub fn eval_generic<S: Scalar>(&self, z: Quat<S>) -> Quat<S> {
        let mut s = Quat::constant(Quaternion::ZERO, z.x0);
        for g in &self.elements {
            s += self.term(&g.matrix, z);
        }
        s
    }

    pub fn singular_distance(&self, z: Quaternion) -> f64 {
        self.elements
            .iter()
            .map(|g| {
                let [_, _, c, d] = g.matrix.entries();
                let den = (c * z + d).norm();
                match g.matrix.apply(z) {
                    Ok(w) => den.min((w - self.y).norm()),
                    Err(_) => 0.0,
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn check(&self, z: Quaternion) -> Result<()> {
        if !(z.component(self.config.height_index) > 0.0) {
            return Err(Error::OutsideHalfSpace(z));
        }
        if self.singular_distance(z) < SINGULAR_TOLERANCE {
            return Err(Error::SingularPoint(z));
        }
        Ok(())
    }

    pub fn eval(&self, z: Quaternion) -> Result<Quaternion> {
        self.check(z)?;
        Ok(self.eval_generic(z))
    }

    /// Partial sums over elements of word length `≤ l` for each `l` in `lengths`.
    pub fn partial_sums(&self, z: Quaternion, lengths: &[usize]) -> Result<Vec<Quaternion>> {
        self.check(z)?;
        Ok(lengths
            .iter()
            .map(|&l| {
                self.elements
                    .iter()
                    .filter(|g| g.word_length() <= l)
                    .map(|g| self.term(&g.matrix, z))
                    .sum()
            })
            .collect())
    }

    /// Cauchy-window diagnostics over the five word lengths ending at `L`.
    pub fn diagnostics(&self, z: Quaternion) -> Result<SeriesDiagnostics> {
        let l = self.config.word_length;
        let lengths: Vec<usize> = (l.saturating_sub(4).max(1)..=l).collect();
        SeriesDiagnostics::from_partial_sums(&self.partial_sums(z, &lengths)?)
    }
}
