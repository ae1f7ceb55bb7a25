//! Quadrature over exponential coordinates `X = θ n̂` and the transform
//!
//! ```text
//! M^J[a, b] = ∫ d³X ρ(|X|) φ(X) D^J_{ab}(e^{−X})
//! ```
//!
//! With `n̂ = (ϑ, ϕ)`, `D^J(e^{−X}) = D^J(R_n̂) diag(e^{iμθ}) D^J(R_n̂)†`, so the
//! integral splits into a θ sum, a DFT over ϕ and a contraction with `d^J(ϑ)`.
//! A kernel built from spins `j_p, j_q` has ϕ-frequencies bounded by `2(j_p + j_q)`,
//! which bounds the band `|a − b|` of every `M^J`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::group_core::{exp_map, gauss_legendre, AxisAngle};
use crate::half_int::HalfInt;
use crate::wigner::{big_d_all, little_d_ladder, CMatrix};

use super::density::MidpointDensity;
use super::momentum_wavefunctions;

/// Gap left below `θ = 2π`, where the chart degenerates.
pub const ANTIPODE_GAP: f64 = 1e-5;

/// Spherical product grid; points are ordered `(θ, ϑ, ϕ)` with ϕ fastest.
#[derive(Clone, Debug)]
pub struct XGrid {
    pub theta: Vec<f64>,
    /// Gauss–Legendre weight times `ρ(θ) θ²`.
    pub w_theta: Vec<f64>,
    pub polar: Vec<f64>,
    pub w_polar: Vec<f64>,
    pub n_phi: usize,
}

impl XGrid {
    pub fn new(n_theta: usize, n_polar: usize, n_phi: usize, density: &MidpointDensity) -> XGrid {
        let span = 2.0 * PI - ANTIPODE_GAP;
        let (xt, wt) = gauss_legendre(n_theta);
        let theta: Vec<f64> = xt.iter().map(|x| 0.5 * span * (x + 1.0)).collect();
        let w_theta = theta.iter().zip(&wt).map(|(&t, &w)| 0.5 * span * w * density.eval(t) * t * t).collect();
        let (xc, wc) = gauss_legendre(n_polar);
        let polar = xc.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
        XGrid { theta, w_theta, polar, w_polar: wc, n_phi }
    }

    pub fn len(&self) -> usize {
        self.theta.len() * self.polar.len() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self, l: usize) -> f64 {
        2.0 * PI * l as f64 / self.n_phi as f64
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        for &t in &self.theta {
            for &v in &self.polar {
                let (sv, cv) = v.sin_cos();
                for l in 0..self.n_phi {
                    let (sp, cp) = self.phi(l).sin_cos();
                    out.push([t * sv * cp, t * sv * sp, t * cv]);
                }
            }
        }
        out
    }

    /// Full product weights, aligned with [`XGrid::points`].
    pub fn weights(&self) -> Vec<f64> {
        let dphi = 2.0 * PI / self.n_phi as f64;
        let mut out = Vec::with_capacity(self.len());
        for &wt in &self.w_theta {
            for &wc in &self.w_polar {
                out.extend(std::iter::repeat_n(wt * wc * dphi, self.n_phi));
            }
        }
        out
    }
}

/// Everything needed to turn kernels of operators with `j ≤ op_j_max` into symbol blocks up to `cutoff`.
#[derive(Clone, Debug)]
pub struct SymbolEngine {
    pub op_j_max: HalfInt,
    pub cutoff: HalfInt,
    /// ϕ-band `Q = 2(j_p + j_q)` of the admissible kernels.
    pub band: usize,
    grid: XGrid,
    dcache: Vec<Vec<DMatrix<f64>>>,
    e_theta: Vec<Complex64>,
    e_phi: Vec<Complex64>,
    points: Vec<[f64; 3]>,
    v_plus: Vec<Vec<Complex64>>,
    v_minus: Vec<Vec<Complex64>>,
}

impl SymbolEngine {
    /// Default grid sizes for the given truncations.
    pub fn new(op_j_max: HalfInt, cutoff: HalfInt) -> SymbolEngine {
        let (nt, nc, np) = Self::default_sizes(op_j_max, cutoff);
        Self::with_sizes(op_j_max, cutoff, nt, nc, np)
    }

    /// `(n_θ, n_ϑ, n_ϕ)`: ϕ and ϑ sizes are exact for the band; θ is converged empirically.
    pub fn default_sizes(op_j_max: HalfInt, cutoff: HalfInt) -> (usize, usize, usize) {
        let q = 2 * op_j_max.twice().max(0) as usize;
        let t = cutoff.twice().max(0) as usize;
        (t + q / 2 + 24, (t + q + 2) / 2, 2 * q + 1)
    }

    pub fn with_sizes(op_j_max: HalfInt, cutoff: HalfInt, n_theta: usize, n_polar: usize, n_phi: usize) -> SymbolEngine {
        let density = MidpointDensity::shared();
        let grid = XGrid::new(n_theta, n_polar, n_phi, density);
        let band = 2 * op_j_max.twice().max(0) as usize;
        let t_cut = cutoff.twice().max(0) as usize;
        let dcache = grid.polar.iter().map(|&v| little_d_ladder(cutoff, v)).collect();
        let n_mu = 2 * t_cut + 1;
        let mut e_theta = Vec::with_capacity(grid.theta.len() * n_mu);
        for &t in &grid.theta {
            for u in 0..n_mu {
                let mu = 0.5 * (u as f64 - t_cut as f64);
                e_theta.push(Complex64::from_polar(1.0, mu * t));
            }
        }
        let dphi = 2.0 * PI / n_phi as f64;
        let mut e_phi = Vec::with_capacity((2 * band + 1) * n_phi);
        for qi in 0..=2 * band {
            let q = qi as f64 - band as f64;
            for l in 0..n_phi {
                e_phi.push(Complex64::from_polar(dphi, -q * grid.phi(l)));
            }
        }
        let points = grid.points();
        let wave = |sign: f64| -> Vec<Vec<Complex64>> {
            points
                .iter()
                .map(|x| {
                    let h = exp_map(&AxisAngle::from_vector(x.map(|c| 0.5 * sign * c)));
                    momentum_wavefunctions(&big_d_all(op_j_max, &h))
                })
                .collect()
        };
        let (v_plus, v_minus) = (wave(1.0), wave(-1.0));
        SymbolEngine { op_j_max, cutoff, band, grid, dcache, e_theta, e_phi, points, v_plus, v_minus }
    }

    /// Same truncations with `n_θ` and `n_ϑ` doubled.
    pub fn refined(&self) -> SymbolEngine {
        Self::with_sizes(self.op_j_max, self.cutoff, 2 * self.grid.theta.len(), 2 * self.grid.polar.len(), self.grid.n_phi)
    }

    pub fn grid(&self) -> &XGrid {
        &self.grid
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// `⟨e^{X/2}|p⟩` at every grid point.
    pub fn wave_plus(&self) -> &[Vec<Complex64>] {
        &self.v_plus
    }

    /// `⟨e^{−X/2}|q⟩` at every grid point.
    pub fn wave_minus(&self) -> &[Vec<Complex64>] {
        &self.v_minus
    }

    /// Kernel `⟨e^{X/2}|p⟩⟨q|e^{−X/2}⟩` of `|p⟩⟨q|` on the grid.
    pub fn basis_kernel(&self, p: usize, q: usize) -> Vec<Complex64> {
        self.v_plus.iter().zip(&self.v_minus).map(|(a, b)| a[p] * b[q].conj()).collect()
    }

    /// `M^J` for `J = 0, 1/2, ..., cutoff`; `φ` is given at [`SymbolEngine::points`].
    pub fn transform(&self, phi: &[Complex64]) -> Vec<CMatrix> {
        assert_eq!(phi.len(), self.grid.len(), "kernel must be sampled on the engine grid");
        let g = &self.grid;
        let (nt, nc, np) = (g.theta.len(), g.polar.len(), g.n_phi);
        let t_cut = self.cutoff.twice().max(0) as usize;
        let n_mu = 2 * t_cut + 1;
        let q = self.band;
        let nq = 2 * q + 1;
        let zero = Complex64::new(0.0, 0.0);

        let mut c = vec![zero; nc * np * n_mu];
        for i in 0..nt {
            let e = &self.e_theta[i * n_mu..(i + 1) * n_mu];
            for k in 0..nc {
                for l in 0..np {
                    let v = phi[(i * nc + k) * np + l] * g.w_theta[i];
                    if v == zero {
                        continue;
                    }
                    let row = &mut c[(k * np + l) * n_mu..(k * np + l + 1) * n_mu];
                    for (r, &eu) in row.iter_mut().zip(e) {
                        *r += v * eu;
                    }
                }
            }
        }

        let mut chat = vec![zero; nc * nq * n_mu];
        for k in 0..nc {
            for qi in 0..nq {
                let out = &mut chat[(k * nq + qi) * n_mu..(k * nq + qi + 1) * n_mu];
                for l in 0..np {
                    let f = self.e_phi[qi * np + l];
                    let src = &c[(k * np + l) * n_mu..(k * np + l + 1) * n_mu];
                    for (o, &s) in out.iter_mut().zip(src) {
                        *o += f * s;
                    }
                }
            }
        }

        (0..=t_cut)
            .map(|t| {
                let n = t + 1;
                let mut m = CMatrix::zeros(n, n);
                for k in 0..nc {
                    let d = &self.dcache[k][t];
                    let wc = g.w_polar[k];
                    for a in 0..n {
                        let lo = a.saturating_sub(q);
                        let hi = (a + q).min(t);
                        for b in lo..=hi {
                            // m_a − m_b = b − a
                            let qi = (b as isize - a as isize + q as isize) as usize;
                            let base = (k * nq + qi) * n_mu;
                            let mut s = zero;
                            for cc in 0..n {
                                let u = t + t_cut - 2 * cc;
                                s += chat[base + u] * (d[(a, cc)] * d[(b, cc)]);
                            }
                            m[(a, b)] += s * wc;
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Unbanded reference: direct quadrature of `Σ_x w φ(X) D^J(e^{−X})`.
    pub fn transform_direct(&self, phi: &[Complex64]) -> Vec<CMatrix> {
        let weights = self.grid.weights();
        let t_cut = self.cutoff.twice().max(0) as usize;
        let mut out: Vec<CMatrix> = (0..=t_cut).map(|t| CMatrix::zeros(t + 1, t + 1)).collect();
        for ((x, &w), &f) in self.points.iter().zip(&weights).zip(phi) {
            let h = exp_map(&AxisAngle::from_vector(x.map(|c| -c)));
            for (t, d) in big_d_all(self.cutoff, &h).iter().enumerate() {
                out[t] += d * (f * w);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn grid_weights_integrate_density() {
        let e = SymbolEngine::new(h(2), h(3));
        let total: f64 = e.grid().weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-11, "{total}");
        assert_eq!(e.points().len(), e.grid().len());
    }

    #[test]
    fn banded_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let e = SymbolEngine::new(h(2), h(4));
        let dim = e.wave_plus()[0].len();
        for _ in 0..3 {
            let (p, q) = (rng.random_range(0..dim), rng.random_range(0..dim));
            let phi = e.basis_kernel(p, q);
            let fast = e.transform(&phi);
            let slow = e.transform_direct(&phi);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn haar_identity_on_central_kernel() {
        // φ(X) = χ_j(e^{X}) is a class function: ∫ χ_j(h) D^J(h⁻¹) dh = δ_{jJ} 1/N_j
        let e = SymbolEngine::new(h(1), h(3));
        for t in 0..=3usize {
            let phi: Vec<Complex64> = e
                .points()
                .iter()
                .map(|x| big_d_all(h(t as i64), &exp_map(&AxisAngle::from_vector(*x)))[t].trace())
                .collect();
            for (s, m) in e.transform_direct(&phi).iter().enumerate() {
                let want = if s == t { 1.0 / (t + 1) as f64 } else { 0.0 };
                assert!((m - CMatrix::identity(s + 1, s + 1) * Complex64::new(want, 0.0)).camax() < 1e-10, "j={t} J={s} {}", (m - CMatrix::identity(s + 1, s + 1) * Complex64::new(want, 0.0)).camax());
            }
        }
    }
}
