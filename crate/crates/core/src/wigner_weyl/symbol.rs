//! Weyl symbols, trace pairings, block symbols and covariance checks.
//!
//! Option II: `W(g; jnn′) = ∫ d³X ρ K(g e^{X/2}, g e^{−X/2}) D^j_{n′n}(e^{−X})`.
//! Option I:  `W(g; jmm′) = ∫ d³X ρ K(g e^{X/2}, g e^{−X/2}) D^j_{mm′}(g e^{−X} g⁻¹)`.
//!
//! Blocks are stored as matrices indexed `[n, n′]` (resp. `[m, m′]`).

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::{exp_map, AxisAngle, QuadratureGrid, Su2Element};
use crate::half_int::HalfInt;
use crate::wigner::{big_d_all, CMatrix, Side};

use super::engine::SymbolEngine;
use super::{euler_to_element, momentum_wavefunctions, par_map, regular_matrix, MomentumIndex, MomentumOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolOption {
    I,
    II,
}

impl std::str::FromStr for SymbolOption {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(SymbolOption::I),
            "II" | "2" => Ok(SymbolOption::II),
            _ => Err(Error::Argument(format!("unknown symbol option {s:?}"))),
        }
    }
}

fn check_engine(engine: &SymbolEngine, op: &MomentumOperator) -> Result<()> {
    if engine.op_j_max != op.j_max {
        return Err(Error::Argument(format!(
            "engine built for j_max = {}, operator has j_max = {}",
            engine.op_j_max, op.j_max
        )));
    }
    Ok(())
}

/// Conjugation route: `W(g) = S(U(g)⁻¹ A U(g))` (II) or `S(Ũ(g) A Ũ(g)⁻¹)` (I), with the
/// identity-node transform `S` of every basis pair in the conjugation orbit cached up front.
pub struct SymbolPlan<'e> {
    engine: &'e SymbolEngine,
    pub option: SymbolOption,
    op: MomentumOperator,
    transforms: Vec<((usize, usize), Vec<CMatrix>)>,
}

impl<'e> SymbolPlan<'e> {
    pub fn new(engine: &'e SymbolEngine, op: &MomentumOperator, option: SymbolOption) -> Result<Self> {
        check_engine(engine, op)?;
        let mut pairs = BTreeSet::new();
        let n = op.dim();
        let orbit = |p: MomentumIndex| -> Vec<usize> {
            p.j.projections()
                .map(|x| match option {
                    SymbolOption::II => MomentumIndex { m: x, ..p }.flat(),
                    SymbolOption::I => MomentumIndex { n: x, ..p }.flat(),
                })
                .collect()
        };
        for r in 0..n {
            for s in 0..n {
                if op.matrix[(r, s)] != Complex64::new(0.0, 0.0) {
                    let (pr, ps) = (orbit(MomentumIndex::from_flat(r)), orbit(MomentumIndex::from_flat(s)));
                    for &a in &pr {
                        for &b in &ps {
                            pairs.insert((a, b));
                        }
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let transforms = par_map(pairs.len(), |k| {
            let (p, q) = pairs[k];
            ((p, q), engine.transform(&engine.basis_kernel(p, q)))
        });
        Ok(SymbolPlan { engine, option, op: op.clone(), transforms })
    }

    /// Number of cached basis-pair transforms.
    pub fn orbit_size(&self) -> usize {
        self.transforms.len()
    }

    pub fn cutoff(&self) -> HalfInt {
        self.engine.cutoff
    }

    pub fn conjugated_operator(&self, g: &Su2Element) -> MomentumOperator {
        match self.option {
            SymbolOption::II => self.op.conjugated(&regular_matrix(Side::Left, &g.inverse(), self.op.j_max)),
            SymbolOption::I => self.op.conjugated(&regular_matrix(Side::Right, g, self.op.j_max)),
        }
    }

    /// Symbol blocks `W_J(g)`, `J = 0, 1/2, ..., cutoff`.
    pub fn at(&self, g: &Su2Element) -> Vec<CMatrix> {
        let b = self.conjugated_operator(g);
        let t_cut = self.engine.cutoff.twice().max(0) as usize;
        let mut out: Vec<CMatrix> = (0..=t_cut).map(|t| CMatrix::zeros(t + 1, t + 1)).collect();
        for ((p, q), ms) in &self.transforms {
            let coef = b.matrix[(*p, *q)];
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, m) in out.iter_mut().zip(ms) {
                o.zip_apply(m, |x, y| *x += coef * y);
            }
        }
        if self.option == SymbolOption::II {
            for o in &mut out {
                o.transpose_mut();
            }
        }
        out
    }
}

/// Direct route: the kernel is evaluated at the transported points `g e^{±X/2}`.
pub fn symbol_direct(engine: &SymbolEngine, op: &MomentumOperator, g: &Su2Element, option: SymbolOption) -> Result<Vec<CMatrix>> {
    check_engine(engine, op)?;
    let phi: Vec<Complex64> = engine
        .points()
        .iter()
        .map(|x| {
            let plus = g.compose(&exp_map(&AxisAngle::from_vector(x.map(|c| 0.5 * c))));
            let minus = g.compose(&exp_map(&AxisAngle::from_vector(x.map(|c| -0.5 * c))));
            let vp = momentum_wavefunctions(&big_d_all(op.j_max, &plus));
            let vm = momentum_wavefunctions(&big_d_all(op.j_max, &minus));
            let n = vp.len();
            let mut s = Complex64::new(0.0, 0.0);
            for r in 0..n {
                if vp[r] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut row = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    row += op.matrix[(r, k)] * vm[k].conj();
                }
                s += vp[r] * row;
            }
            s
        })
        .collect();
    let ms = engine.transform(&phi);
    Ok(match option {
        SymbolOption::II => ms.into_iter().map(|m| m.transpose()).collect(),
        SymbolOption::I => {
            let ds = big_d_all(engine.cutoff, g);
            ms.iter().zip(&ds).map(|(m, d)| d * m * d.adjoint()).collect()
        }
    })
}

/// Symbol values at every node of a group grid.
#[derive(Clone, Debug)]
pub struct WeylSymbol {
    pub option: SymbolOption,
    pub cutoff: HalfInt,
    pub grid: QuadratureGrid,
    pub values: Vec<Vec<CMatrix>>,
    pub warning: Option<String>,
}

pub fn weyl_symbol(engine: &SymbolEngine, op: &MomentumOperator, grid: &QuadratureGrid, option: SymbolOption) -> Result<WeylSymbol> {
    let plan = SymbolPlan::new(engine, op, option)?;
    let values = grid.nodes.iter().map(|e| plan.at(&euler_to_element(e))).collect();
    let needed = HalfInt::from_twice(2 * op.j_max.twice());
    let warning = (!grid.is_exact_for(needed)).then(|| format!("group grid is not exact for j = {needed}; pairings are approximate"));
    Ok(WeylSymbol { option, cutoff: engine.cutoff, grid: grid.clone(), values, warning })
}

fn same_layout(a: &WeylSymbol, b: &WeylSymbol) -> Result<()> {
    if a.option != b.option {
        return Err(Error::Argument("symbols use different options".into()));
    }
    if a.cutoff != b.cutoff {
        return Err(Error::Argument("symbols use different cutoffs".into()));
    }
    if a.grid.nodes != b.grid.nodes || a.grid.weights != b.grid.weights {
        return Err(Error::Argument("symbols live on different grids".into()));
    }
    Ok(())
}

fn tr_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

fn node_pairing(a: &[CMatrix], b: &[CMatrix], weighted: bool) -> Complex64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(t, (x, y))| tr_product(x, y) * if weighted { (t + 1) as f64 } else { 1.0 })
        .sum()
}

fn pairing(a: &WeylSymbol, b: &WeylSymbol, weighted: bool) -> Result<Complex64> {
    same_layout(a, b)?;
    Ok(a.grid
        .weights
        .iter()
        .zip(a.values.iter().zip(&b.values))
        .map(|(&w, (x, y))| node_pairing(x, y, weighted) * w)
        .sum())
}

/// `∫ dg Σ_j N_j Σ_{nn′} W_A(g; jnn′) W_B(g; jn′n)`.
pub fn symbol_trace_pairing(a: &WeylSymbol, b: &WeylSymbol) -> Result<Complex64> {
    pairing(a, b, true)
}

/// The pairing with the `N_j` weights dropped.
pub fn unweighted_trace_pairing(a: &WeylSymbol, b: &WeylSymbol) -> Result<Complex64> {
    pairing(a, b, false)
}

/// [`symbol_trace_pairing`] evaluated node by node without storing symbols.
pub fn trace_pairing_streaming(a: &SymbolPlan, b: &SymbolPlan, grid: &QuadratureGrid) -> Result<Complex64> {
    if a.option != b.option || a.cutoff() != b.cutoff() {
        return Err(Error::Argument("plans use different options or cutoffs".into()));
    }
    let same = std::ptr::eq(a, b);
    let per_node = par_map(grid.len(), |k| {
        let g = euler_to_element(&grid.nodes[k]);
        let wa = a.at(&g);
        let s = if same { node_pairing(&wa, &wa, true) } else { node_pairing(&wa, &b.at(&g), true) };
        s * grid.weights[k]
    });
    Ok(per_node.into_iter().sum())
}

/// `Ã(g) = ⊕_j Ã_j(g)` with `Ã_j = Σ W(g; jnn′) |jn′)(jn|`, i.e. `Ã_j = W_jᵀ`.
#[derive(Clone, Debug)]
pub struct BlockSymbolOperator {
    pub option: SymbolOption,
    pub cutoff: HalfInt,
    pub grid: QuadratureGrid,
    pub blocks: Vec<Vec<CMatrix>>,
}

pub fn block_symbol(w: &WeylSymbol) -> BlockSymbolOperator {
    let blocks = w.values.iter().map(|node| node.iter().map(|m| m.transpose()).collect()).collect();
    BlockSymbolOperator { option: w.option, cutoff: w.cutoff, grid: w.grid.clone(), blocks }
}

impl BlockSymbolOperator {
    pub fn unpack(&self) -> WeylSymbol {
        let values = self.blocks.iter().map(|node| node.iter().map(|m| m.transpose()).collect()).collect();
        WeylSymbol { option: self.option, cutoff: self.cutoff, grid: self.grid.clone(), values, warning: None }
    }

    /// The block-diagonal operator at node `k` on the SR space.
    pub fn at_node(&self, k: usize) -> CMatrix {
        let blocks = &self.blocks[k];
        let n: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut out = CMatrix::zeros(n, n);
        let mut o = 0;
        for b in blocks {
            out.view_mut((o, o), (b.nrows(), b.ncols())).copy_from(b);
            o += b.nrows();
        }
        out
    }
}

/// `∫ dg Σ_j N_j tr(Ã_j(g) B̃_j(g))`; the `N_j` stay outside the per-block trace.
pub fn block_trace_pairing(a: &BlockSymbolOperator, b: &BlockSymbolOperator) -> Result<Complex64> {
    if a.option != b.option || a.cutoff != b.cutoff || a.grid.nodes != b.grid.nodes {
        return Err(Error::Argument("block symbols have different layouts".into()));
    }
    Ok(a.grid
        .weights
        .iter()
        .zip(a.blocks.iter().zip(&b.blocks))
        .map(|(&w, (x, y))| {
            let s: Complex64 = x.iter().zip(y).enumerate().map(|(t, (p, q))| (p * q).trace() * (t + 1) as f64).sum();
            s * w
        })
        .sum())
}

/// Largest deviation from the conjugation laws, over nodes and blocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub option: SymbolOption,
    /// `A′ = Ũ(g₁) A Ũ(g₁)⁻¹`.
    pub right_residual: f64,
    /// `A″ = U(g₂)⁻¹ A U(g₂)`.
    pub left_residual: f64,
}

/// Recomputes symbols of the conjugated operators (direct route) and compares with the
/// transformed original symbol recomputed at the transported nodes.
///
/// Option II: `W′(g) = D(g₁⁻¹)ᵀ W(gg₁) D(g₁)ᵀ`, `W″(g) = W(g₂g)`.
/// Option I:  `W′(g) = W(gg₁)`, `W″(g) = D(g₂⁻¹) W(g₂g) D(g₂)`.
pub fn covariance_check(
    engine: &SymbolEngine,
    op: &MomentumOperator,
    g1: &Su2Element,
    g2: &Su2Element,
    option: SymbolOption,
    nodes: &[Su2Element],
) -> Result<CovarianceReport> {
    let j_max = op.j_max;
    let right_op = op.conjugated(&regular_matrix(Side::Right, g1, j_max));
    let left_op = op.conjugated(&regular_matrix(Side::Left, &g2.inverse(), j_max));
    let d1 = big_d_all(engine.cutoff, g1);
    let d1_inv = big_d_all(engine.cutoff, &g1.inverse());
    let d2 = big_d_all(engine.cutoff, g2);
    let d2_inv = big_d_all(engine.cutoff, &g2.inverse());
    let diff = |a: &[CMatrix], b: &[CMatrix]| a.iter().zip(b).map(|(x, y)| (x - y).camax()).fold(0.0, f64::max);
    let (mut right, mut left) = (0.0f64, 0.0f64);
    for g in nodes {
        let moved = symbol_direct(engine, op, &g.compose(g1), option)?;
        let expect: Vec<CMatrix> = match option {
            SymbolOption::II => moved.iter().enumerate().map(|(t, w)| d1_inv[t].transpose() * w * d1[t].transpose()).collect(),
            SymbolOption::I => moved,
        };
        right = right.max(diff(&symbol_direct(engine, &right_op, g, option)?, &expect));

        let moved = symbol_direct(engine, op, &g2.compose(g), option)?;
        let expect: Vec<CMatrix> = match option {
            SymbolOption::II => moved,
            SymbolOption::I => moved.iter().enumerate().map(|(t, w)| &d2_inv[t] * w * &d2[t]).collect(),
        };
        left = left.max(diff(&symbol_direct(engine, &left_op, g, option)?, &expect));
    }
    Ok(CovarianceReport { option, right_residual: right, left_residual: left })
}
