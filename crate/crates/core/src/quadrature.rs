//! One-dimensional rules and deterministic reductions.

use crate::algebra::Quaternion;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, refined by Newton on P_n
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Composite Simpson weights for `intervals` (even) equal steps over `[a, b]`.
pub fn simpson_weights(a: f64, b: f64, intervals: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(intervals >= 2 && intervals % 2 == 0, "Simpson needs an even interval count");
    let h = (b - a) / intervals as f64;
    let x = (0..=intervals).map(|i| a + h * i as f64).collect();
    let w = (0..=intervals)
        .map(|i| {
            let c = if i == 0 || i == intervals {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (x, w)
}

/// Fixed-tree pairwise sum; the result depends only on the input order.
pub fn pairwise_sum(v: &[Quaternion]) -> Quaternion {
    match v.len() {
        0 => Quaternion::ZERO,
        1 => v[0],
        n if n <= 8 => v.iter().copied().fold(Quaternion::ZERO, |a, b| a + b),
        n => {
            let (l, r) = v.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// Scalar counterpart of [`pairwise_sum`].
pub fn pairwise_sum_f64(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        n if n <= 8 => v.iter().sum(),
        n => {
            let (l, r) = v.split_at(n / 2);
            pairwise_sum_f64(l) + pairwise_sum_f64(r)
        }
    }
}
