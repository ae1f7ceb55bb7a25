//! Wigner–Weyl calculus on `L²(SU(2))` in the truncated momentum basis `|jmn⟩`.
//!
//! `⟨g|jmn⟩ = N_j^{1/2} D^j_{mn}(g)` with `N_j = 2j+1`. Operators are dense matrices
//! over all `(j, m, n)` with `j ≤ j_max`, ordered by `j`, then `m` descending, then `n`
//! descending, so each `j` block is `kron(row-space, column-space)`.

pub mod density;
pub mod engine;
pub mod symbol;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::{su2_from_angles, EulerAngles, QuadratureGrid, Su2Element};
use crate::half_int::HalfInt;
use crate::wigner::{big_d_all, CMatrix, Side};

pub use density::MidpointDensity;
pub use engine::{SymbolEngine, XGrid};
pub use symbol::{
    block_symbol, block_trace_pairing, covariance_check, symbol_direct, symbol_trace_pairing, trace_pairing_streaming,
    unweighted_trace_pairing, weyl_symbol, BlockSymbolOperator, CovarianceReport, SymbolOption, SymbolPlan,
    WeylSymbol,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn block_offset(two_j: usize) -> usize {
    (0..two_j).map(|s| (s + 1) * (s + 1)).sum()
}

/// Size of the momentum basis with `j ≤ j_max`.
pub fn momentum_dim(j_max: HalfInt) -> usize {
    block_offset(j_max.twice().max(-1) as usize + 1)
}

/// Size of the SR space `⊕_{j ≤ j_max} C^{2j+1}`.
pub fn sr_dim(j_max: HalfInt) -> usize {
    HalfInt::spins_up_to(j_max).map(|j| j.dim()).sum()
}

fn sr_offset(two_j: usize) -> usize {
    (0..two_j).map(|s| s + 1).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentumIndex {
    pub j: HalfInt,
    pub m: HalfInt,
    pub n: HalfInt,
}

impl MomentumIndex {
    pub fn new(j: HalfInt, m: HalfInt, n: HalfInt) -> Result<Self> {
        if j.twice() < 0 || !j.admits(m) || !j.admits(n) {
            return Err(Error::Range(format!("invalid momentum label ({j}, {m}, {n})")));
        }
        Ok(MomentumIndex { j, m, n })
    }

    pub fn flat(&self) -> usize {
        let t = self.j.twice() as usize;
        let a = self.j.index_of(self.m).expect("validated");
        let b = self.j.index_of(self.n).expect("validated");
        block_offset(t) + a * (t + 1) + b
    }

    pub fn from_flat(k: usize) -> MomentumIndex {
        let mut t = 0;
        while block_offset(t + 1) <= k {
            t += 1;
        }
        let r = k - block_offset(t);
        let j = HalfInt::from_twice(t as i64);
        MomentumIndex { j, m: j.projection_at(r / (t + 1)), n: j.projection_at(r % (t + 1)) }
    }
}

pub fn momentum_indices(j_max: HalfInt) -> Vec<MomentumIndex> {
    (0..momentum_dim(j_max)).map(MomentumIndex::from_flat).collect()
}

/// `⟨h|p⟩` for every momentum index `p`, from the blocks `D^j(h)`.
pub(crate) fn momentum_wavefunctions(blocks: &[CMatrix]) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(block_offset(blocks.len()));
    for (t, d) in blocks.iter().enumerate() {
        let s = ((t + 1) as f64).sqrt();
        for a in 0..=t {
            for b in 0..=t {
                v.push(d[(a, b)] * s);
            }
        }
    }
    v
}

/// Operator on the truncated momentum space.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumOperator {
    pub j_max: HalfInt,
    pub matrix: CMatrix,
}

impl MomentumOperator {
    pub fn zeros(j_max: HalfInt) -> Self {
        let n = momentum_dim(j_max);
        MomentumOperator { j_max, matrix: CMatrix::zeros(n, n) }
    }

    pub fn identity(j_max: HalfInt) -> Self {
        let n = momentum_dim(j_max);
        MomentumOperator { j_max, matrix: CMatrix::identity(n, n) }
    }

    pub fn from_matrix(j_max: HalfInt, matrix: CMatrix) -> Result<Self> {
        let n = momentum_dim(j_max);
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Argument(format!("operator must be {n}×{n} for j_max = {j_max}")));
        }
        Ok(MomentumOperator { j_max, matrix })
    }

    /// `|p⟩⟨p|`.
    pub fn rank_one(j_max: HalfInt, p: MomentumIndex) -> Result<Self> {
        if p.j.twice() > j_max.twice() {
            return Err(Error::Range(format!("label j = {} exceeds j_max = {j_max}", p.j)));
        }
        let mut op = Self::zeros(j_max);
        op.matrix[(p.flat(), p.flat())] = c(1.0);
        Ok(op)
    }

    /// Entries with independent uniform real and imaginary parts in `[−1, 1)`.
    pub fn random<R: Rng + ?Sized>(j_max: HalfInt, rng: &mut R) -> Self {
        let n = momentum_dim(j_max);
        let matrix = CMatrix::from_fn(n, n, |_, _| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0));
        MomentumOperator { j_max, matrix }
    }

    pub fn random_hermitian<R: Rng + ?Sized>(j_max: HalfInt, rng: &mut R) -> Self {
        let a = Self::random(j_max, rng).matrix;
        MomentumOperator { j_max, matrix: (&a + a.adjoint()) * c(0.5) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, row: MomentumIndex, col: MomentumIndex) -> Complex64 {
        self.matrix[(row.flat(), col.flat())]
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).camax() <= tol
    }

    /// `u A u†`.
    pub fn conjugated(&self, u: &MomentumOperator) -> MomentumOperator {
        MomentumOperator { j_max: self.j_max, matrix: &u.matrix * &self.matrix * u.matrix.adjoint() }
    }

    pub fn commutator_norm(&self, other: &MomentumOperator) -> f64 {
        (&self.matrix * &other.matrix - &other.matrix * &self.matrix).camax()
    }

    /// `Tr(AB)`.
    pub fn trace_product(&self, other: &MomentumOperator) -> Complex64 {
        let (a, b) = (&self.matrix, &other.matrix);
        let n = a.nrows();
        (0..n).flat_map(|i| (0..n).map(move |k| a[(i, k)] * b[(k, i)])).sum()
    }

    /// Block `⟨j′ · ·|A|j · ·⟩` as an `N_{j′}² × N_j²` matrix.
    pub fn block(&self, j_row: HalfInt, j_col: HalfInt) -> CMatrix {
        let (tr, tc) = (j_row.twice() as usize, j_col.twice() as usize);
        self.matrix.view((block_offset(tr), block_offset(tc)), ((tr + 1).pow(2), (tc + 1).pow(2))).into_owned()
    }
}

fn block_diagonal(j_max: HalfInt, mut block: impl FnMut(usize) -> CMatrix) -> CMatrix {
    let n = momentum_dim(j_max);
    let mut out = CMatrix::zeros(n, n);
    for t in 0..=j_max.twice() as usize {
        let b = block(t);
        let o = block_offset(t);
        out.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(&b);
    }
    out
}

/// `U(g)` (left) or `Ũ(g)` (right) on the truncated momentum space.
///
/// `U(g)|jmn⟩ = Σ D^j_{mm′}(g⁻¹)|jm′n⟩` gives blocks `conj(D^j(g)) ⊗ 1`;
/// `Ũ(g)|jmn⟩ = Σ D^j_{n′n}(g)|jmn′⟩` gives blocks `1 ⊗ D^j(g)`.
pub fn regular_matrix(side: Side, g: &Su2Element, j_max: HalfInt) -> MomentumOperator {
    let ds = big_d_all(j_max, g);
    let matrix = block_diagonal(j_max, |t| {
        let id = CMatrix::identity(t + 1, t + 1);
        match side {
            Side::Left => ds[t].map(|z| z.conj()).kronecker(&id),
            Side::Right => id.kronecker(&ds[t]),
        }
    });
    MomentumOperator { j_max, matrix }
}

/// Truncated `Tr(Ũ(g′)Ũ(g)) = Σ_{j ≤ j_max} N_j χ_j(g′g)`.
pub fn truncated_character_sum(g: &Su2Element, j_max: HalfInt) -> Complex64 {
    big_d_all(j_max, g).iter().enumerate().map(|(t, d)| d.trace() * (t + 1) as f64).sum()
}

/// Fourier coefficients `f^j_{n′n} = N_j^{1/2} ∫ f(g) D^j_{n′n}(g) dg`, block `j` indexed `[n′, n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoeffs {
    pub j_max: HalfInt,
    pub blocks: Vec<CMatrix>,
}

impl FourierCoeffs {
    pub fn new(j_max: HalfInt, blocks: Vec<CMatrix>) -> Result<Self> {
        let ok = blocks.len() as i64 == j_max.twice() + 1;
        if !ok || blocks.iter().enumerate().any(|(t, b)| b.nrows() != t + 1 || b.ncols() != t + 1) {
            return Err(Error::Argument("need one (2j+1)-square block per j ≤ j_max".into()));
        }
        Ok(FourierCoeffs { j_max, blocks })
    }

    pub fn zeros(j_max: HalfInt) -> Self {
        let blocks = (0..=j_max.twice() as usize).map(|t| CMatrix::zeros(t + 1, t + 1)).collect();
        FourierCoeffs { j_max, blocks }
    }

    pub fn random<R: Rng + ?Sized>(j_max: HalfInt, rng: &mut R) -> Self {
        let blocks = (0..=j_max.twice() as usize)
            .map(|t| CMatrix::from_fn(t + 1, t + 1, |_, _| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0)))
            .collect();
        FourierCoeffs { j_max, blocks }
    }

    /// Coefficients of the point mass at `g₀`: `f^j = N_j^{1/2} D^j(g₀)`.
    pub fn point_mass(g0: &Su2Element, j_max: HalfInt) -> Self {
        let blocks = big_d_all(j_max, g0).into_iter().enumerate().map(|(t, d)| d * c(((t + 1) as f64).sqrt())).collect();
        FourierCoeffs { j_max, blocks }
    }

    /// `f(g) = Σ N_j^{1/2} f^j_{n′n} D^j_{nn′}(g⁻¹) = Σ N_j^{1/2} tr(f^j D^j(g⁻¹))`.
    pub fn eval(&self, g: &Su2Element) -> Complex64 {
        big_d_all(self.j_max, &g.inverse())
            .iter()
            .zip(&self.blocks)
            .enumerate()
            .map(|(t, (d, f))| (f * d).trace() * ((t + 1) as f64).sqrt())
            .sum()
    }

    /// Coefficients of `f` by quadrature.
    pub fn from_function<F: Fn(&Su2Element) -> Complex64>(f: F, j_max: HalfInt, grid: &QuadratureGrid) -> Self {
        let mut out = Self::zeros(j_max);
        for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
            let g = su2_from_angles(e.alpha, e.beta, e.gamma);
            let fg = f(&g) * w;
            for (t, d) in big_d_all(j_max, &g).iter().enumerate() {
                out.blocks[t] += d * (fg * ((t + 1) as f64).sqrt());
            }
        }
        out
    }

    /// SR image `∫ f(g) D₀(g) dg`, block `j` equal to `N_j^{−1/2} f^j`.
    pub fn sr_image(&self) -> Vec<CMatrix> {
        self.blocks.iter().enumerate().map(|(t, f)| f * c(1.0 / ((t + 1) as f64).sqrt())).collect()
    }

    /// SR image by direct quadrature of `∫ f(g) D^j(g) dg`.
    pub fn sr_image_quadrature(&self, grid: &QuadratureGrid) -> Vec<CMatrix> {
        let mut out: Vec<CMatrix> = (0..=self.j_max.twice() as usize).map(|t| CMatrix::zeros(t + 1, t + 1)).collect();
        for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
            let g = su2_from_angles(e.alpha, e.beta, e.gamma);
            let fg = self.eval(&g) * w;
            for (t, d) in big_d_all(self.j_max, &g).iter().enumerate() {
                out[t] += d * fg;
            }
        }
        out
    }

    /// `Σ_j tr(f^j h^j)`.
    pub fn plancherel(&self, other: &FourierCoeffs) -> Complex64 {
        self.blocks.iter().zip(&other.blocks).map(|(f, h)| (f * h).trace()).sum()
    }

    pub fn max_abs_diff(&self, other: &FourierCoeffs) -> f64 {
        self.blocks.iter().zip(&other.blocks).map(|(a, b)| (a - b).camax()).fold(0.0, f64::max)
    }
}

/// `∫ f(g) h(g⁻¹) dg` by quadrature.
pub fn convolution_at_identity(f: &FourierCoeffs, h: &FourierCoeffs, grid: &QuadratureGrid) -> Complex64 {
    grid.integrate(|e| {
        let g = su2_from_angles(e.alpha, e.beta, e.gamma);
        f.eval(&g) * h.eval(&g.inverse())
    })
}

/// `Â = ∫ dg f(g) Ũ(g)` by quadrature.
pub fn commutant_operator(f: &FourierCoeffs, grid: &QuadratureGrid) -> MomentumOperator {
    let j_max = f.j_max;
    let mut acc: Vec<CMatrix> = (0..=j_max.twice() as usize).map(|t| CMatrix::zeros(t + 1, t + 1)).collect();
    for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
        let g = su2_from_angles(e.alpha, e.beta, e.gamma);
        let fg = f.eval(&g) * w;
        for (t, d) in big_d_all(j_max, &g).iter().enumerate() {
            acc[t] += d * fg;
        }
    }
    let matrix = block_diagonal(j_max, |t| CMatrix::identity(t + 1, t + 1).kronecker(&acc[t]));
    MomentumOperator { j_max, matrix }
}

/// `⟨j′m′n′|Â|jmn⟩ = N_j^{−1/2} δ_{jj′} δ_{mm′} f^j_{n′n}`.
pub fn commutant_closed_form(f: &FourierCoeffs) -> MomentumOperator {
    let img = f.sr_image();
    let matrix = block_diagonal(f.j_max, |t| CMatrix::identity(t + 1, t + 1).kronecker(&img[t]));
    MomentumOperator { j_max: f.j_max, matrix }
}

/// `D₀(g) = ⊕_j D^j(g)` on the SR space.
pub fn sr_matrix(g: &Su2Element, j_max: HalfInt) -> CMatrix {
    let n = sr_dim(j_max);
    let mut out = CMatrix::zeros(n, n);
    for (t, d) in big_d_all(j_max, g).iter().enumerate() {
        out.view_mut((sr_offset(t), sr_offset(t)), (t + 1, t + 1)).copy_from(d);
    }
    out
}

/// `∫ dg D₀(g) M D₀(g)⁻¹` by quadrature.
pub fn schur_average(m: &CMatrix, j_max: HalfInt, grid: &QuadratureGrid) -> Result<CMatrix> {
    let n = sr_dim(j_max);
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Argument(format!("SR operator must be {n}×{n} for j_max = {j_max}")));
    }
    let mut acc = CMatrix::zeros(n, n);
    for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
        let d = sr_matrix(&su2_from_angles(e.alpha, e.beta, e.gamma), j_max);
        acc += (&d * m * d.adjoint()) * c(w);
    }
    Ok(acc)
}

/// `⊕_j (tr M_j / N_j) 1_j`.
pub fn block_scalar_part(m: &CMatrix, j_max: HalfInt) -> CMatrix {
    let n = sr_dim(j_max);
    let mut out = CMatrix::zeros(n, n);
    for t in 0..=j_max.twice() as usize {
        let o = sr_offset(t);
        let tr: Complex64 = (0..=t).map(|a| m[(o + a, o + a)]).sum();
        for a in 0..=t {
            out[(o + a, o + a)] = tr / (t + 1) as f64;
        }
    }
    out
}

/// Max entry of `avg − ⊕ (tr M_j / N_j) 1_j`.
pub fn block_scalar_residual(avg: &CMatrix, m: &CMatrix, j_max: HalfInt) -> f64 {
    (avg - block_scalar_part(m, j_max)).camax()
}

/// `(0..n).map(f)` spread over the available cores; output order is preserved.
pub(crate) fn par_map<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    let workers = std::thread::available_parallelism().map(|w| w.get()).unwrap_or(1).min(n.max(1));
    if workers <= 1 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                s.spawn(move || (w * chunk..((w + 1) * chunk).min(n)).map(f).collect::<Vec<T>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub(crate) fn euler_to_element(e: &EulerAngles) -> Su2Element {
    su2_from_angles(e.alpha, e.beta, e.gamma)
}
