use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Quaternion;
use crate::error::{Error, Result};

/// Rank-`p` period lattice `{Σ n_j ω_j}` inside `ℍ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    basis: Vec<Quaternion>,
    /// Rows of the dual basis: `t_j(z) = Σ_μ dual[j][μ] z_μ` gives lattice coordinates.
    dual: Vec<[f64; 4]>,
}

impl Lattice {
    pub fn new(basis: Vec<Quaternion>) -> Result<Self> {
        let p = basis.len();
        if !(1..=4).contains(&p) {
            return Err(Error::InvalidParameter(format!("lattice rank {p} outside 1..=4")));
        }
        let gram: Vec<Vec<f64>> = basis.iter().map(|a| basis.iter().map(|b| a.dot(b)).collect()).collect();
        let inv = invert(&gram).ok_or_else(|| Error::InvalidParameter("lattice basis is linearly dependent".into()))?;
        let dual = (0..p)
            .map(|j| {
                std::array::from_fn(|mu| (0..p).map(|k| inv[j][k] * basis[k].component(mu)).sum())
            })
            .collect();
        Ok(Lattice { basis, dual })
    }

    /// `{e₀, …, e_{p-1}}`.
    pub fn standard(p: usize) -> Result<Self> {
        if !(1..=4).contains(&p) {
            return Err(Error::InvalidParameter(format!("lattice rank {p} outside 1..=4")));
        }
        Lattice::new((0..p).map(Quaternion::basis).collect())
    }

    /// `{e₁, e₂, (e₁ + e₂ + e₃)/2}`.
    pub fn reduced_hurwitz() -> Self {
        let h = Quaternion::new(0.0, 0.5, 0.5, 0.5);
        Lattice::new(vec![Quaternion::E1, Quaternion::E2, h]).expect("independent basis")
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Quaternion] {
        &self.basis
    }

    /// Lattice coordinates of the orthogonal projection of `z` onto the span.
    pub fn coordinates(&self, z: Quaternion) -> Vec<f64> {
        self.dual.iter().map(|row| (0..4).map(|mu| row[mu] * z.component(mu)).sum()).collect()
    }

    pub fn dual_rows(&self) -> &[[f64; 4]] {
        &self.dual
    }

    pub fn point(&self, n: &[i64]) -> Quaternion {
        n.iter().zip(&self.basis).map(|(&k, &w)| w * k as f64).sum()
    }

    /// Euclidean distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Quaternion) -> f64 {
        let t = self.coordinates(z);
        let base: Vec<i64> = t.iter().map(|x| x.floor() as i64).collect();
        let p = self.rank();
        let mut best = f64::INFINITY;
        // the enclosing cell plus one layer on each side
        let mut idx = vec![-1i64; p];
        loop {
            let n: Vec<i64> = base.iter().zip(&idx).map(|(b, d)| b + d).collect();
            best = best.min((z - self.point(&n)).norm());
            let mut k = 0;
            loop {
                if k == p {
                    return best;
                }
                idx[k] += 1;
                if idx[k] <= 2 {
                    break;
                }
                idx[k] = -1;
                k += 1;
            }
        }
    }

    /// Coefficient bounds `|n_j| ≤ B_j` enclosing the ball `|w| ≤ radius`.
    fn box_bounds(&self, radius: f64) -> Vec<i64> {
        self.dual
            .iter()
            .map(|row| (radius * row.iter().map(|x| x * x).sum::<f64>().sqrt()).floor() as i64)
            .collect()
    }

    /// Folds `term` over every nonzero lattice point with `|w| ≤ radius`.
    ///
    /// Work is split by the first coefficient; each slice is folded
    /// sequentially and the slice results are combined in index order, so
    /// the result does not depend on the thread count.
    pub fn fold_ball<T, F, C>(&self, radius: f64, init: impl Fn() -> T + Sync, term: F, combine: C) -> T
    where
        T: Send,
        F: Fn(&mut T, Quaternion) + Sync,
        C: Fn(T, T) -> T,
    {
        let bounds = self.box_bounds(radius);
        let r2 = radius * radius;
        let p = self.rank();
        let slices: Vec<T> = (-bounds[0]..=bounds[0])
            .into_par_iter()
            .map(|n0| {
                let mut acc = init();
                let mut n = vec![0i64; p];
                n[0] = n0;
                for k in 1..p {
                    n[k] = -bounds[k];
                }
                loop {
                    if n.iter().any(|&x| x != 0) {
                        let w = self.point(&n);
                        if w.norm2() <= r2 {
                            term(&mut acc, w);
                        }
                    }
                    let mut k = 1;
                    loop {
                        if k >= p {
                            return acc;
                        }
                        n[k] += 1;
                        if n[k] <= bounds[k] {
                            break;
                        }
                        n[k] = -bounds[k];
                        k += 1;
                    }
                }
            })
            .collect();
        let mut it = slices.into_iter();
        let first = it.next().unwrap_or_else(&init);
        it.fold(first, combine)
    }

    /// Number of nonzero lattice points in the ball.
    pub fn count_ball(&self, radius: f64) -> usize {
        self.fold_ball(radius, || 0usize, |c, _| *c += 1, |a, b| a + b)
    }
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let d = a[col][col];
        for x in a[col].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
