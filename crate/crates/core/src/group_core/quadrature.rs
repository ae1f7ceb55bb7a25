//! Haar-measure product grids and one-dimensional Gauss rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{EulerAngles, GroupTag};
use crate::error::{Error, Result};
use crate::half_int::HalfInt;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Laguerre rule for `∫₀^∞ e^{−t} f(t) dt` (Golub–Welsch).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = (2 * i + 1) as f64;
        if i + 1 < n {
            let b = (i + 1) as f64;
            jac[(i, i + 1)] = b;
            jac[(i + 1, i)] = b;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Product rule for the normalized Haar measure `dα sinβ dβ dγ / 16π²`
/// (`/8π²` on SO(3)).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub nodes: Vec<EulerAngles>,
    pub weights: Vec<f64>,
    pub group_tag: GroupTag,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub n_gamma: usize,
}

pub fn haar_grid(n_alpha: usize, n_beta: usize, n_gamma: usize, group_tag: GroupTag) -> Result<QuadratureGrid> {
    if n_alpha == 0 || n_beta == 0 || n_gamma == 0 {
        return Err(Error::Argument("grid counts must be positive".into()));
    }
    let (x, w) = gauss_legendre(n_beta);
    let period = group_tag.gamma_period();
    let mut nodes = Vec::with_capacity(n_alpha * n_beta * n_gamma);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for ia in 0..n_alpha {
        let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
        for ib in 0..n_beta {
            let beta = x[ib].clamp(-1.0, 1.0).acos();
            for ig in 0..n_gamma {
                let gamma = period * ig as f64 / n_gamma as f64;
                nodes.push(EulerAngles { alpha, beta, gamma });
                weights.push(0.5 * w[ib] / (n_alpha * n_gamma) as f64);
            }
        }
    }
    Ok(QuadratureGrid { nodes, weights, group_tag, n_alpha, n_beta, n_gamma })
}

impl QuadratureGrid {
    /// Smallest grid integrating every `D^j_{mn} D^{j'}_{m'n'}*` with `j, j' ≤ j_max` exactly.
    pub fn exact_for(j_max: HalfInt, group_tag: GroupTag) -> QuadratureGrid {
        let (n_a, n_b, n_g) = Self::exact_counts(j_max, group_tag);
        haar_grid(n_a, n_b, n_g, group_tag).expect("counts are positive")
    }

    /// Node counts of [`QuadratureGrid::exact_for`].
    pub fn exact_counts(j_max: HalfInt, group_tag: GroupTag) -> (usize, usize, usize) {
        let t = j_max.twice().max(0) as usize;
        let n_gamma = match group_tag {
            GroupTag::Su2 => 2 * t + 1,
            GroupTag::So3 => t + 1,
        };
        (t + 1, t + 1, n_gamma)
    }

    /// Whether the grid integrates products of D-functions up to `j_max` exactly.
    pub fn is_exact_for(&self, j_max: HalfInt) -> bool {
        let (a, b, g) = Self::exact_counts(j_max, self.group_tag);
        self.n_alpha >= a && self.n_beta >= b && self.n_gamma >= g
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(&EulerAngles) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (e, &w)| acc + f(e) * w)
    }
}
