//! Small numerical building blocks shared across the crate: vector helpers,
//! the standard normal CDF, Cholesky factorization, Gauss-Hermite nodes, and
//! seed derivation.

use crate::error::{Error, Result};

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `out = a + s * b`, elementwise.
pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Sample mean and standard error (sample standard deviation / sqrt(n)).
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Standard normal CDF via the Abramowitz-Stegun 26.2.17 rational
/// approximation; absolute error below 7.5e-8.
pub fn norm_cdf(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - norm_cdf(-x);
    }
    const P: f64 = 0.231_641_9;
    const B: [f64; 5] = [
        0.319_381_530,
        -0.356_563_782,
        1.781_477_937,
        -1.821_255_978,
        1.330_274_429,
    ];
    let k = 1.0 / (1.0 + P * x);
    let poly = k * (B[0] + k * (B[1] + k * (B[2] + k * (B[3] + k * B[4]))));
    let pdf = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    1.0 - pdf * poly
}

/// Lower-triangular Cholesky factor of a symmetric PSD matrix.
///
/// Semi-definite inputs are accepted (zero pivots allowed); asymmetric or
/// indefinite inputs are rejected.
pub fn cholesky(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    for i in 0..d {
        if a[i].len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: a[i].len() });
        }
        for j in 0..i {
            if (a[i][j] - a[j][i]).abs() > 1e-10 * scale {
                return Err(Error::NotPsd(format!(
                    "asymmetric entry at ({i},{j}): {} vs {}",
                    a[i][j], a[j][i]
                )));
            }
        }
    }
    let mut l = vec![vec![0.0; d]; d];
    for j in 0..d {
        let mut pivot = a[j][j];
        for k in 0..j {
            pivot -= l[j][k] * l[j][k];
        }
        if pivot < -1e-10 * scale {
            return Err(Error::NotPsd(format!("negative pivot {pivot} at column {j}")));
        }
        let piv = pivot.max(0.0).sqrt();
        l[j][j] = piv;
        for i in (j + 1)..d {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if piv > 0.0 {
                l[i][j] = s / piv;
            } else if s.abs() > 1e-8 * scale {
                return Err(Error::NotPsd(format!(
                    "rank-deficient column {j} with inconsistent entry {s}"
                )));
            }
        }
    }
    Ok(l)
}

/// Gauss-Hermite nodes and weights for `E[f(Z)]`, `Z` standard normal:
/// returns pairs `(z_i, w_i)` with `sum w_i = 1` and
/// `E[f(Z)] ≈ sum w_i f(z_i)`.
///
/// Physicists' nodes are found by Newton iteration on the Hermite recurrence
/// and then rescaled by `sqrt(2)` / `1/sqrt(pi)`.
pub fn gauss_hermite_normal(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "need at least one quadrature node");
    const EPS: f64 = 1e-14;
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0_f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= EPS {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    // Reverse so nodes come out ascending.
    (0..n).rev().map(|i| (sqrt2 * x[i], w[i] / sqrt_pi)).collect()
}

/// SplitMix64-style mixing of a base seed with a stream index, used to derive
/// independent deterministic sub-seeds (per-epoch batches, weight init, final
/// evaluation) from one run seed.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
