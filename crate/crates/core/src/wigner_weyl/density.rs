//! Jacobian density `ρ(θ)` of the midpoint chart `(g, X) ↦ (g e^{−X/2}, g e^{X/2})`.
//!
//! With `s(g′, g″) = g` on the chart, `∫∫ dg′ dg″ F δ(g⁻¹ s(g′, g″)) = ∫ d³X ρ(|X|) F`.
//! The density is obtained from finite-difference Jacobians and normalized so that
//! `∫ ρ d³X = 1` over the ball `|X| ≤ 2π`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::Matrix6;

use crate::group_core::{exp_map, gauss_legendre, log_map, AxisAngle, Su2Element};

const FD_H: f64 = 2e-2;
const DEFAULT_NODES: usize = 48;

fn exp_vec(x: [f64; 3]) -> Su2Element {
    exp_map(&AxisAngle::from_vector(x))
}

fn log_vec(g: &Su2Element) -> [f64; 3] {
    log_map(g).expect("chart stays away from −I").vector()
}

fn chart(x0: [f64; 3], u: [f64; 3], v: [f64; 3]) -> [f64; 6] {
    let g = exp_vec(u);
    let x = [x0[0] + v[0], x0[1] + v[1], x0[2] + v[2]];
    let half = [0.5 * x[0], 0.5 * x[1], 0.5 * x[2]];
    let minus = g.compose(&exp_vec([-half[0], -half[1], -half[2]]));
    let plus = g.compose(&exp_vec(half));
    let h0 = [0.5 * x0[0], 0.5 * x0[1], 0.5 * x0[2]];
    // coordinates relative to the base points, in left-translated exponential charts
    let a = log_vec(&exp_vec(h0).compose(&minus));
    let b = log_vec(&exp_vec([-h0[0], -h0[1], -h0[2]]).compose(&plus));
    [a[0], a[1], a[2], b[0], b[1], b[2]]
}

/// `|det|` of the chart Jacobian at `(e, X)`, by central differences with two Richardson steps.
pub fn midpoint_jacobian(x: [f64; 3]) -> f64 {
    let column = |k: usize, h: f64| -> [f64; 6] {
        let mut u = [0.0; 3];
        let mut v = [0.0; 3];
        let set = |u: &mut [f64; 3], v: &mut [f64; 3], s: f64| {
            if k < 3 {
                u[k] = s;
            } else {
                v[k - 3] = s;
            }
        };
        set(&mut u, &mut v, h);
        let p = chart(x, u, v);
        set(&mut u, &mut v, -h);
        let m = chart(x, u, v);
        std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h))
    };
    let mut jac = Matrix6::<f64>::zeros();
    for k in 0..6 {
        let c1 = column(k, FD_H);
        let c2 = column(k, 0.5 * FD_H);
        let c4 = column(k, 0.25 * FD_H);
        for i in 0..6 {
            let r1 = (4.0 * c2[i] - c1[i]) / 3.0;
            let r2 = (4.0 * c4[i] - c2[i]) / 3.0;
            jac[(i, k)] = (16.0 * r2 - r1) / 15.0;
        }
    }
    jac.determinant().abs()
}

/// Tabulated `ρ(θ)` on `[0, 2π]`, interpolated barycentrically at Chebyshev points.
#[derive(Clone, Debug)]
pub struct MidpointDensity {
    nodes: Vec<f64>,
    values: Vec<f64>,
    bary: Vec<f64>,
}

impl MidpointDensity {
    pub fn compute(n_nodes: usize) -> MidpointDensity {
        let n = n_nodes.max(2) - 1;
        let nodes: Vec<f64> = (0..=n).map(|k| PI * (1.0 - (PI * k as f64 / n as f64).cos())).collect();
        let raw: Vec<f64> = nodes.iter().map(|&t| midpoint_jacobian([0.0, 0.0, t])).collect();
        let bary: Vec<f64> = (0..=n)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                if k == 0 || k == n {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        let mut out = MidpointDensity { nodes, values: raw, bary };
        let total = out.ball_integral(|_| 1.0, 64);
        for v in &mut out.values {
            *v /= total;
        }
        out
    }

    /// Shared default table.
    pub fn shared() -> &'static MidpointDensity {
        static TABLE: OnceLock<MidpointDensity> = OnceLock::new();
        TABLE.get_or_init(|| MidpointDensity::compute(DEFAULT_NODES))
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&x, &y), &w) in self.nodes.iter().zip(&self.values).zip(&self.bary) {
            let d = theta - x;
            if d == 0.0 {
                return y;
            }
            let c = w / d;
            num += c * y;
            den += c;
        }
        num / den
    }

    /// `∫_{|X| ≤ 2π} ρ(|X|) h(|X|) d³X`, Gauss–Legendre in `θ`.
    pub fn ball_integral<F: Fn(f64) -> f64>(&self, h: F, n: usize) -> f64 {
        let (x, w) = gauss_legendre(n);
        x.iter()
            .zip(&w)
            .map(|(&x, &w)| {
                let t = PI * (x + 1.0);
                PI * w * 4.0 * PI * t * t * self.eval(t) * h(t)
            })
            .sum()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Haar density in exponential coordinates, for the normalized measure on SU(2)
    fn haar_exp_density(t: f64) -> f64 {
        if t == 0.0 {
            return 1.0 / (16.0 * PI * PI);
        }
        let s = (0.5 * t).sin();
        s * s / (4.0 * PI * PI * t * t)
    }

    #[test]
    fn matches_haar_density() {
        let rho = MidpointDensity::shared();
        for k in 0..=200 {
            let t = 2.0 * PI * k as f64 / 200.0;
            let want = haar_exp_density(t);
            assert!((rho.eval(t) - want).abs() < 1e-11 * haar_exp_density(0.0), "θ={t}");
        }
        assert!((rho.ball_integral(|_| 1.0, 64) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn isotropic() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let along_z = midpoint_jacobian([0.0, 0.0, 2.3]);
        for _ in 0..5 {
            let v: [f64; 3] = std::array::from_fn(|_| rng.random::<f64>() - 0.5);
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let x = v.map(|c| 2.3 * c / n);
            assert!((midpoint_jacobian(x) - along_z).abs() < 1e-9 * along_z);
        }
    }

    #[test]
    fn table_converges() {
        let coarse = MidpointDensity::compute(32);
        let fine = MidpointDensity::shared();
        for k in 0..50 {
            let t = 0.1257 * k as f64;
            assert!((coarse.eval(t) - fine.eval(t)).abs() < 1e-11);
        }
    }
}
