//! Batch verification of the library's invariants.
//!
//! Every check is a pure function of the configuration and its own RNG stream, seeded
//! from the global seed and the check id, so results do not depend on scheduling.

use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::{
    adjoint_rotation, haar_grid, midpoint_s, rotation_from_angles, su2_from_angles, su2_to_euler, EulerAngles, GroupTag,
    QuadratureGrid, Su2Element,
};
use crate::half_int::HalfInt;
use crate::majorana::{
    constellation_to_state, matching_distance, rotate_constellation, state_to_constellation, Constellation, SpherePoint,
};
use crate::schwinger_basis::{
    bargmann_inner_product, bargmann_inner_product_quadrature, factorial_identity_holds, left_ladder_residual, radial_weight_normalization,
    radial_weight_normalization_numeric, right_annihilation_residual, u_jm, y_jm, MonomialExpansion, SpinState,
};
use crate::sun_structure::{
    common_once_irrep, su3_dimension, su3_highest_is_maximal, su3_highest_weight, su3_multiplets, su3_singlet_count,
};
use crate::wigner::{fd_generator, generator_derivative, ln_factorial, spin_matrices, CMatrix, Side, WignerMatrix};
use crate::wigner_weyl::{
    block_scalar_residual, block_symbol, commutant_closed_form, commutant_operator, covariance_check, regular_matrix,
    schur_average, sr_dim, symbol_trace_pairing, trace_pairing_streaming, truncated_character_sum, unweighted_trace_pairing,
    weyl_symbol, FourierCoeffs, MidpointDensity, MomentumIndex, MomentumOperator, SymbolEngine, SymbolOption, SymbolPlan,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    /// `null` in JSON when the check itself failed to run.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    GroupCore,
    Wigner,
    SchwingerBasis,
    Majorana,
    SunStructure,
    WignerWeyl,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["all", "group_core", "wigner", "schwinger_basis", "majorana", "sun_structure", "wigner_weyl"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::GroupCore => "group_core",
            Suite::Wigner => "wigner",
            Suite::SchwingerBasis => "schwinger_basis",
            Suite::Majorana => "majorana",
            Suite::SunStructure => "sun_structure",
            Suite::WignerWeyl => "wigner_weyl",
        }
    }

    fn includes(self, module: &str) -> bool {
        self == Suite::All || self.name() == module
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "group_core" => Suite::GroupCore,
            "wigner" => Suite::Wigner,
            "schwinger_basis" => Suite::SchwingerBasis,
            "majorana" => Suite::Majorana,
            "sun_structure" | "sun" => Suite::SunStructure,
            "wigner_weyl" | "weyl" => Suite::WignerWeyl,
            _ => return Err(Error::Argument(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Truncation of the algebraic checks (no X-integrals).
    pub j_max: HalfInt,
    /// Group grid `(n_α, n_β, n_γ)` replacing the exactness-grade default in grid-based checks.
    pub grid: Option<(usize, usize, usize)>,
    pub workers: usize,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            j_max: HalfInt::from_int(4),
            grid: None,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            timings: false,
        }
    }
}

impl VerifyConfig {
    fn group_grid(&self, exact_for: HalfInt) -> Result<QuadratureGrid> {
        match self.grid {
            Some((a, b, c)) => haar_grid(a, b, c, GroupTag::Su2),
            None => Ok(QuadratureGrid::exact_for(exact_for, GroupTag::Su2)),
        }
    }

    fn rng(&self, id: &str) -> ChaCha8Rng {
        // FNV-1a keeps the per-check stream stable across platforms and releases
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

type CheckFn = fn(&VerifyConfig, &mut ChaCha8Rng) -> Result<f64>;

struct Check {
    id: &'static str,
    tolerance: f64,
    run: CheckFn,
}

const fn check(id: &'static str, tolerance: f64, run: CheckFn) -> Check {
    Check { id, tolerance, run }
}

fn registry() -> Vec<Check> {
    vec![
        check("group_core.group_axioms", 1e-14, group_axioms),
        check("group_core.euler_round_trip", 1e-12, euler_round_trip),
        check("group_core.composition_stays_unitary", 1e-14, composition_norm),
        check("group_core.midpoint_properties", 1e-12, midpoint_properties),
        check("group_core.haar_grid_constant", 1e-13, haar_constant),
        check("group_core.haar_grid_d_functions", 1e-12, haar_d_functions),
        check("group_core.adjoint_homomorphism", 1e-12, adjoint_homomorphism),
        check("group_core.adjoint_matches_euler_rotation", 1e-12, adjoint_matches_euler),
        check("wigner.unitarity", 1e-11, d_unitarity),
        check("wigner.homomorphism", 1e-11, d_homomorphism),
        check("wigner.spin_half_matrix", 1e-14, spin_half_matrix),
        check("wigner.orthogonality", 1e-10, d_orthogonality),
        check("wigner.completeness_weak_form", 1e-10, completeness_weak),
        check("wigner.generator_algebra", 1e-12, generator_algebra),
        check("wigner.generator_finite_differences", 1e-7, generator_fd),
        check("wigner.left_right_commute", 1e-6, left_right_commute),
        check("schwinger_basis.monomial_identity", 1e-12, monomial_identity),
        check("schwinger_basis.y_orthonormality", 1e-10, y_orthonormality),
        check("schwinger_basis.y_factorwise_selection", 1e-12, y_factorwise),
        check("schwinger_basis.right_annihilation", 1e-7, right_annihilation),
        check("schwinger_basis.ladder_coefficient", 1e-7, ladder_coefficient),
        check("schwinger_basis.bargmann_quadrature", 1e-10, bargmann_quadrature),
        check("schwinger_basis.factorial_identity_failures", 0.0, factorial_identity),
        check("schwinger_basis.radial_weight_analytic", 0.0, radial_analytic),
        check("schwinger_basis.radial_weight_numeric", 1e-12, radial_numeric),
        check("majorana.round_trip_infidelity", 1e-9, majorana_round_trip),
        check("majorana.pole_bookkeeping_mismatches", 0.0, majorana_poles),
        check("majorana.rotation_equivariance", 1e-8, majorana_equivariance),
        check("majorana.multiplicity_mismatches", 0.0, majorana_multiplicities),
        check("majorana.permutation_invariance", 0.0, majorana_permutation),
        check("sun_structure.dimension_mismatches", 0.0, su3_dimension_sum),
        check("sun_structure.singlet_count_mismatches", 0.0, su3_singlets),
        check("sun_structure.conjugation_mismatches", 0.0, su3_conjugation),
        check("sun_structure.obstruction_mismatches", 0.0, sun_obstruction),
        check("sun_structure.highest_weight_mismatches", 0.0, su3_highest),
        check("wigner_weyl.density_matches_haar", 1e-9, density_oracle),
        check("wigner_weyl.regular_trace_character_sum", 1e-10, regular_trace),
        check("wigner_weyl.fourier_round_trip", 1e-11, fourier_round_trip),
        check("wigner_weyl.commutant_commutes", 1e-10, commutant_commutes),
        check("wigner_weyl.commutant_closed_form", 1e-10, commutant_closed),
        check("wigner_weyl.commutant_symbol_constant", 1e-6, commutant_symbol),
        check("wigner_weyl.block_symbol_sr_image", 1e-6, block_symbol_image),
        check("wigner_weyl.trace_commutant_pairs", 1e-8, trace_analytic),
        check("wigner_weyl.trace_rank_one", 1e-4, trace_rank_one),
        check("wigner_weyl.covariance_commutant", 1e-8, covariance_commutant),
        check("wigner_weyl.covariance_generic", 1e-4, covariance_generic),
        check("wigner_weyl.schur_block_scalar", 1e-10, schur_averaging),
        // pass iff dropping N_j moves the trace by more than 1% (residual is the inverse relative change)
        check("wigner_weyl.unweighted_pairing_inverse_gap", 1e2, negative_control),
    ]
}

/// Ids of the checks a suite runs, in report order.
pub fn check_ids(suite: Suite) -> Vec<&'static str> {
    registry().into_iter().filter(|c| suite.includes(module_of(c.id))).map(|c| c.id).collect()
}

fn module_of(id: &str) -> &str {
    id.split('.').next().unwrap_or(id)
}

/// Runs the suite, fanning checks out over `cfg.workers` threads.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerificationReport {
    let checks: Vec<Check> = registry().into_iter().filter(|c| suite.includes(module_of(c.id))).collect();
    let results = run_checks(&checks, cfg);
    VerificationReport { suite: suite.name().to_string(), checks: results }
}

fn run_checks(checks: &[Check], cfg: &VerifyConfig) -> Vec<CheckResult> {
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<CheckResult>>> = checks.iter().map(|_| Mutex::new(None)).collect();
    let workers = cfg.workers.clamp(1, checks.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(c) = checks.get(k) else { break };
                let start = Instant::now();
                let mut rng = cfg.rng(c.id);
                let residual = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (c.run)(cfg, &mut rng))) {
                    Ok(Ok(r)) => r,
                    _ => f64::NAN,
                };
                let elapsed = start.elapsed().as_secs_f64();
                *slots[k].lock().expect("slot") = Some(CheckResult {
                    check_id: c.id.to_string(),
                    residual,
                    tolerance: c.tolerance,
                    pass: residual <= c.tolerance,
                    runtime_s: cfg.timings.then_some(elapsed),
                });
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("slot").expect("every check ran")).collect()
}

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn max_entry(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).camax()
}

fn blocks_diff(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| max_entry(x, y)).fold(0.0, f64::max)
}

fn element_of(e: &EulerAngles) -> Su2Element {
    su2_from_angles(e.alpha, e.beta, e.gamma)
}

fn d_of(j: HalfInt, g: &Su2Element) -> CMatrix {
    WignerMatrix::of(j, g).entries
}

// group_core

fn group_axioms(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let e = Su2Element::IDENTITY;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b, c) = (Su2Element::random(rng), Su2Element::random(rng), Su2Element::random(rng));
        worst = worst
            .max(a.compose(&b).compose(&c).distance(&a.compose(&b.compose(&c))))
            .max(a.compose(&a.inverse()).distance(&e))
            .max(a.inverse().compose(&a).distance(&e))
            .max(a.compose(&e).distance(&a))
            .max(e.compose(&a).distance(&a));
    }
    Ok(worst)
}

fn euler_round_trip(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g = Su2Element::random(rng);
        let e = su2_to_euler(&g);
        e.validate(GroupTag::Su2)?;
        worst = worst.max(element_of(&e).distance(&g));
    }
    Ok(worst)
}

fn composition_norm(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut g = Su2Element::IDENTITY;
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        g = g.compose(&Su2Element::random(rng));
        worst = worst.max((g.norm_sqr() - 1.0).abs());
    }
    Ok(worst)
}

fn midpoint_properties(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b, g1, g2) = (Su2Element::random(rng), Su2Element::random(rng), Su2Element::random(rng), Su2Element::random(rng));
        let m = midpoint_s(&a, &b)?;
        let moved = midpoint_s(&g1.compose(&a).compose(&g2), &g1.compose(&b).compose(&g2))?;
        worst = worst
            .max(midpoint_s(&b, &a)?.distance(&m))
            .max(midpoint_s(&a, &a)?.distance(&a))
            .max(moved.distance(&g1.compose(&m).compose(&g2)));
    }
    Ok(worst)
}

fn haar_constant(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let grid = cfg.group_grid(cfg.j_max)?;
    Ok((grid.integrate(|_| 1.0) - 1.0f64).abs())
}

fn haar_d_functions(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let grid = cfg.group_grid(cfg.j_max)?;
    let mut worst: f64 = 0.0;
    for t in 1..=cfg.j_max.twice() {
        let j = h(t);
        let mut acc = CMatrix::zeros(j.dim(), j.dim());
        for (e, &w) in grid.nodes.iter().zip(&grid.weights) {
            acc += d_of(j, &element_of(e)) * Complex64::new(w, 0.0);
        }
        worst = worst.max(acc.camax());
    }
    Ok(worst)
}

fn adjoint_homomorphism(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b) = (Su2Element::random(rng), Su2Element::random(rng));
        let lhs = adjoint_rotation(&a.compose(&b));
        worst = worst.max((lhs - adjoint_rotation(&a) * adjoint_rotation(&b)).amax());
    }
    Ok(worst)
}

fn adjoint_matches_euler(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g = Su2Element::random(rng);
        let e = su2_to_euler(&g);
        worst = worst.max((adjoint_rotation(&g) - rotation_from_angles(e.alpha, e.beta, e.gamma)).amax());
    }
    Ok(worst)
}

// wigner

fn d_unitarity(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = Su2Element::random(rng);
        for t in 0..=cfg.j_max.twice() {
            let d = d_of(h(t), &g);
            let n = d.nrows();
            worst = worst.max(max_entry(&(&d * d.adjoint()), &CMatrix::identity(n, n)));
        }
    }
    let id = Su2Element::IDENTITY;
    for t in 0..=cfg.j_max.twice() {
        let n = h(t).dim();
        worst = worst.max(max_entry(&d_of(h(t), &id), &CMatrix::identity(n, n)));
    }
    Ok(worst)
}

fn d_homomorphism(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (Su2Element::random(rng), Su2Element::random(rng));
        for t in 0..=cfg.j_max.twice() {
            let j = h(t);
            worst = worst.max(max_entry(&d_of(j, &a.compose(&b)), &(d_of(j, &a) * d_of(j, &b))));
        }
    }
    Ok(worst)
}

fn spin_half_matrix(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let e = su2_to_euler(&Su2Element::random(rng));
        let (s, c) = (0.5 * e.beta).sin_cos();
        let xi = Complex64::from_polar(c, -0.5 * (e.alpha + e.gamma));
        let eta = Complex64::from_polar(s, 0.5 * (e.alpha - e.gamma));
        let want = CMatrix::from_row_slice(2, 2, &[xi, -eta.conj(), eta, xi.conj()]);
        worst = worst.max(max_entry(&d_of(HalfInt::HALF, &element_of(&e)), &want));
    }
    Ok(worst)
}

fn d_orthogonality(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let j_top = h(4);
    let grid = cfg.group_grid(j_top)?;
    let values: Vec<Vec<CMatrix>> = grid.nodes.iter().map(|e| (0..=4).map(|t| d_of(h(t), &element_of(e))).collect()).collect();
    let mut worst: f64 = 0.0;
    for t1 in 0..=4usize {
        for t2 in 0..=4usize {
            let mut acc = CMatrix::zeros((t1 + 1) * (t1 + 1), (t2 + 1) * (t2 + 1));
            for (v, &w) in values.iter().zip(&grid.weights) {
                let a = &v[t1];
                let b = &v[t2];
                for r in 0..acc.nrows() {
                    for s in 0..acc.ncols() {
                        acc[(r, s)] += a[(r / (t1 + 1), r % (t1 + 1))] * b[(s / (t2 + 1), s % (t2 + 1))].conj() * w;
                    }
                }
            }
            if t1 == t2 {
                let want = CMatrix::identity(acc.nrows(), acc.ncols()) / Complex64::new((t1 + 1) as f64, 0.0);
                worst = worst.max(max_entry(&acc, &want));
            } else {
                worst = worst.max(acc.camax());
            }
        }
    }
    Ok(worst)
}

fn completeness_weak(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j_max = cfg.j_max;
    let grid = cfg.group_grid(j_max)?;
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let f = FourierCoeffs::random(j_max, rng);
        let back = FourierCoeffs::from_function(|g| f.eval(g), j_max, &grid);
        worst = worst.max(back.max_abs_diff(&f));
    }
    Ok(worst)
}

fn generator_algebra(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let i = Complex64::i();
    let mut worst: f64 = 0.0;
    for t in 0..=cfg.j_max.twice() {
        let j = h(t);
        let s = spin_matrices(j);
        for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let comm = s.get(a) * s.get(b) - s.get(b) * s.get(a);
            worst = worst.max(max_entry(&comm, &(s.get(c) * i)));
        }
        let cas: CMatrix = (1..=3).map(|r| s.get(r) * s.get(r)).fold(CMatrix::zeros(j.dim(), j.dim()), |acc, m| acc + m);
        let jv = j.value();
        worst = worst.max(max_entry(&cas, &(CMatrix::identity(j.dim(), j.dim()) * Complex64::new(jv * (jv + 1.0), 0.0))));
    }
    Ok(worst)
}

fn generator_fd(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in 0..=cfg.j_max.twice() {
        let j = h(t);
        for _ in 0..3 {
            let g = Su2Element::random(rng);
            for side in [Side::Left, Side::Right] {
                for r in 1..=3 {
                    let an = generator_derivative(j, side, r, &g);
                    let fd = fd_generator(side, r, &g, 1e-5, |x| d_of(j, x));
                    worst = worst.max((an.clone() - fd).camax() / an.camax().max(1.0));
                }
            }
        }
    }
    Ok(worst)
}

fn left_right_commute(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let step = 1e-4;
    let mut worst: f64 = 0.0;
    for t in 1..=3 {
        let j = h(t);
        let g = Su2Element::random(rng);
        for r in 1..=3 {
            for s in 1..=3 {
                let lr = fd_generator(Side::Left, r, &g, step, |x| fd_generator(Side::Right, s, x, step, |y| d_of(j, y)));
                let rl = fd_generator(Side::Right, s, &g, step, |x| fd_generator(Side::Left, r, x, step, |y| d_of(j, y)));
                worst = worst.max(max_entry(&lr, &rl));
            }
        }
    }
    Ok(worst)
}

// schwinger_basis

fn monomial_identity(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g = Su2Element::random(rng);
        for t in 0..=6 {
            let j = h(t);
            let d = WignerMatrix::of(j, &g);
            let scale = ln_factorial(t as usize).exp().sqrt();
            for m in j.projections() {
                worst = worst.max((d.get(m, j) - u_jm(j, m, g.xi, g.eta)? * scale).norm());
            }
        }
    }
    Ok(worst)
}

fn y_labels(t_max: i64) -> Vec<(HalfInt, HalfInt)> {
    (0..=t_max).flat_map(|t| h(t).projections().map(move |m| (h(t), m))).collect()
}

fn y_orthonormality(cfg: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let grid = cfg.group_grid(h(4))?;
    let labels = y_labels(4);
    let mut vals = Vec::with_capacity(grid.len());
    for e in &grid.nodes {
        vals.push(labels.iter().map(|&(j, m)| y_jm(j, m, e)).collect::<Result<Vec<_>>>()?);
    }
    let mut worst: f64 = 0.0;
    for a in 0..labels.len() {
        for b in 0..labels.len() {
            let s: Complex64 = vals.iter().zip(&grid.weights).map(|(v, &w)| v[a] * v[b].conj() * w).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - want).norm());
        }
    }
    Ok(worst)
}

/// The γ-average alone separates different `j`; at equal `j` the α-average alone separates `m`.
fn y_factorwise(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let labels = y_labels(4);
    let n = 17;
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (alpha, beta, gamma) = (2.0 * PI * rng.random::<f64>(), PI * rng.random::<f64>(), 4.0 * PI * rng.random::<f64>());
        for &(j1, m1) in &labels {
            for &(j2, m2) in &labels {
                if j1 != j2 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        let e = EulerAngles::new(alpha, beta, 4.0 * PI * k as f64 / n as f64);
                        s += y_jm(j1, m1, &e)? * y_jm(j2, m2, &e)?.conj() / n as f64;
                    }
                    worst = worst.max(s.norm());
                } else if m1 != m2 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        let e = EulerAngles::new(2.0 * PI * k as f64 / n as f64, beta, gamma);
                        s += y_jm(j1, m1, &e)? * y_jm(j2, m2, &e)?.conj() / n as f64;
                    }
                    worst = worst.max(s.norm());
                }
            }
        }
    }
    Ok(worst)
}

fn right_annihilation(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, m) in y_labels(4) {
        for _ in 0..20 {
            worst = worst.max(right_annihilation_residual(j, m, &Su2Element::random(rng))?);
        }
    }
    Ok(worst)
}

fn ladder_coefficient(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (j, m) in y_labels(4) {
        for _ in 0..5 {
            worst = worst.max(left_ladder_residual(j, m, &Su2Element::random(rng))?);
        }
    }
    Ok(worst)
}

fn bargmann_quadrature(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let labels = y_labels(4);
    let mut worst: f64 = 0.0;
    for &(j1, m1) in &labels {
        for &(j2, m2) in &labels {
            let p = MonomialExpansion::single(j1, m1)?;
            let q = MonomialExpansion::single(j2, m2)?;
            worst = worst.max((bargmann_inner_product_quadrature(&p, &q) - bargmann_inner_product(&p, &q)).norm());
        }
    }
    for _ in 0..5 {
        let mut p = MonomialExpansion::default();
        let mut q = MonomialExpansion::default();
        for &(j, m) in &labels {
            p.add(j, m, Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))?;
            q.add(j, m, Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))?;
        }
        worst = worst.max((bargmann_inner_product_quadrature(&p, &q) - bargmann_inner_product(&p, &q)).norm());
    }
    Ok(worst)
}

fn factorial_identity(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for t in 0..=20 {
        if !factorial_identity_holds(t)? {
            bad += 1;
        }
    }
    Ok(bad as f64)
}

fn radial_analytic(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    Ok((0..=20).map(|t| (radial_weight_normalization(h(t)) - 1.0).abs()).fold(0.0, f64::max))
}

fn radial_numeric(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    Ok((0..=20).map(|t| (radial_weight_normalization_numeric(h(t)) - 1.0).abs()).fold(0.0, f64::max))
}

// majorana

fn majorana_round_trip(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in 1..=12 {
        for _ in 0..200 {
            let psi = SpinState::random(t, rng);
            let back = constellation_to_state(&state_to_constellation(&psi)?);
            worst = worst.max(1.0 - back.fidelity(&psi));
        }
    }
    Ok(worst)
}

fn majorana_poles(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for t in 1..=12i64 {
        for top in 0..=t as usize {
            for bottom in top..=t as usize {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); t as usize + 1];
                for c in &mut coeffs[top..=bottom] {
                    *c = Su2Element::random(rng).xi;
                }
                let con = state_to_constellation(&SpinState::new(t, coeffs)?)?;
                if con.infinity_count != top || con.zero_count() < t as usize - bottom {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad as f64)
}

fn majorana_equivariance(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in 1..=12 {
        for _ in 0..20 {
            let psi = SpinState::random(t, rng);
            let g = Su2Element::random(rng);
            let lhs = state_to_constellation(&psi.rotated(&g))?;
            let rhs = rotate_constellation(&g, &state_to_constellation(&psi)?);
            worst = worst.max(lhs.distance(&rhs)?);
        }
    }
    Ok(worst)
}

fn cluster_sizes(points: &[SpherePoint]) -> Vec<usize> {
    let mut used = vec![false; points.len()];
    let mut sizes = Vec::new();
    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        let mut n = 0;
        for k in i..points.len() {
            if !used[k] && points[i].great_circle_distance(&points[k]) < 1e-9 {
                used[k] = true;
                n += 1;
            }
        }
        sizes.push(n);
    }
    sizes.sort_unstable();
    sizes
}

fn majorana_multiplicities(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for t in 2..=12i64 {
        // constellations with repeated points, including the poles
        let k = rng.random_range(1..=t as usize);
        let z = Complex64::from_polar(2.0 * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>());
        let mut roots = vec![z; k];
        let zeros = rng.random_range(0..=(t as usize - k));
        roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
        let con = Constellation::new(t, roots, t as usize - k - zeros)?;
        let g = Su2Element::random(rng);
        let moved = rotate_constellation(&g, &con);
        let r = adjoint_rotation(&g);
        let image: Vec<SpherePoint> = con.sphere_points().iter().map(|p| p.rotated(&r)).collect();
        if cluster_sizes(&moved.sphere_points()) != cluster_sizes(&con.sphere_points()) || matching_distance(&image, &moved.sphere_points())? > 1e-9 {
            bad += 1;
        }
    }
    Ok(bad as f64)
}

fn majorana_permutation(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t in 1..=12 {
        let con = state_to_constellation(&SpinState::random(t, rng))?;
        let mut roots = con.finite_roots.clone();
        for i in (1..roots.len()).rev() {
            roots.swap(i, rng.random_range(0..=i));
        }
        let shuffled = Constellation::new(con.two_j, roots, con.infinity_count)?;
        worst = worst.max(con.distance(&shuffled)?);
    }
    Ok(worst)
}

// sun_structure

fn su3_dimension_sum(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for p in 0..=6 {
        for q in 0..=6 {
            let total: u64 = su3_multiplets(p, q).iter().map(|m| m.size()).sum();
            if total != su3_dimension(p, q) {
                bad += 1;
            }
        }
    }
    Ok(bad as f64)
}

fn su3_singlets(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for p in 0..=6 {
        for q in 0..=6 {
            let singlets: Vec<_> = su3_multiplets(p, q).into_iter().filter(|m| m.two_i == 0).collect();
            if su3_singlet_count(p, q) != 1 || singlets.len() != 1 || (singlets[0].r, singlets[0].s) != (0, 0) {
                bad += 1;
            }
        }
    }
    Ok(bad as f64)
}

fn su3_conjugation(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for p in 0..=6 {
        for q in 0..=6 {
            let key = |m: &crate::sun_structure::MultipletEntry| (m.two_i, m.three_y);
            let mut a: Vec<_> = su3_multiplets(p, q).iter().map(|m| (m.two_i, -m.three_y)).collect();
            let mut b: Vec<_> = su3_multiplets(q, p).iter().map(key).collect();
            a.sort_unstable();
            b.sort_unstable();
            if a != b || su3_dimension(p, q) != su3_dimension(q, p) {
                bad += 1;
            }
        }
    }
    Ok(bad as f64)
}

fn sun_obstruction(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = usize::from(common_once_irrep(3)?.is_none());
    for n in 4..=8 {
        bad += usize::from(common_once_irrep(n)?.is_some());
    }
    Ok(bad as f64)
}

fn su3_highest(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let mut bad = 0;
    for p in 0..=6u32 {
        for q in 0..=6u32 {
            let hw = su3_highest_weight(p, q);
            let formula = hw.multiplet.two_i == p as i64 && hw.two_i3 == p as i64 && hw.multiplet.three_y == (p + 2 * q) as i64;
            if !formula || !su3_highest_is_maximal(p, q) {
                bad += 1;
            }
        }
    }
    Ok(bad as f64)
}

// wigner_weyl

const SYMBOL_J_MAX: HalfInt = HalfInt::from_twice(3);

fn density_oracle(_: &VerifyConfig, _: &mut ChaCha8Rng) -> Result<f64> {
    let rho = MidpointDensity::shared();
    let haar = |t: f64| {
        if t == 0.0 {
            1.0 / (16.0 * PI * PI)
        } else {
            (0.5 * t).sin().powi(2) / (4.0 * PI * PI * t * t)
        }
    };
    Ok((0..=100).map(|k| 2.0 * PI * k as f64 / 100.0).map(|t| (rho.eval(t) - haar(t)).abs() / haar(0.0)).fold(0.0, f64::max))
}

fn regular_trace(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (a, b) = (Su2Element::random(rng), Su2Element::random(rng));
        let tr = regular_matrix(Side::Right, &a, cfg.j_max).trace_product(&regular_matrix(Side::Right, &b, cfg.j_max));
        worst = worst.max((tr - truncated_character_sum(&a.compose(&b), cfg.j_max)).norm());
    }
    Ok(worst)
}

fn fourier_round_trip(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j_max = h(6);
    let grid = QuadratureGrid::exact_for(j_max, GroupTag::Su2);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let f = FourierCoeffs::random(j_max, rng);
        let back = FourierCoeffs::from_function(|g| f.eval(g), j_max, &grid);
        for _ in 0..10 {
            let g = Su2Element::random(rng);
            worst = worst.max((back.eval(&g) - f.eval(&g)).norm());
        }
    }
    Ok(worst)
}

fn random_fs(rng: &mut ChaCha8Rng, count: usize) -> Vec<FourierCoeffs> {
    (0..count).map(|_| FourierCoeffs::random(SYMBOL_J_MAX, rng)).collect()
}

fn commutant_commutes(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = QuadratureGrid::exact_for(SYMBOL_J_MAX, GroupTag::Su2);
    let mut worst: f64 = 0.0;
    for f in random_fs(rng, 20) {
        let a = commutant_operator(&f, &grid);
        for _ in 0..3 {
            worst = worst.max(a.commutator_norm(&regular_matrix(Side::Left, &Su2Element::random(rng), SYMBOL_J_MAX)));
        }
    }
    Ok(worst)
}

fn commutant_closed(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let grid = QuadratureGrid::exact_for(SYMBOL_J_MAX, GroupTag::Su2);
    Ok(random_fs(rng, 20)
        .iter()
        .map(|f| max_entry(&commutant_operator(f, &grid).matrix, &commutant_closed_form(f).matrix))
        .fold(0.0, f64::max))
}

fn commutant_symbol(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let engine = SymbolEngine::new(SYMBOL_J_MAX, SYMBOL_J_MAX);
    let mut worst: f64 = 0.0;
    for f in random_fs(rng, 20) {
        let plan = SymbolPlan::new(&engine, &commutant_closed_form(&f), SymbolOption::II)?;
        // W(g; jnn′) = N_j^{−1/2} f^j_{n′n}
        let want: Vec<CMatrix> = f.sr_image().iter().map(|m| m.transpose()).collect();
        for _ in 0..3 {
            worst = worst.max(blocks_diff(&plan.at(&Su2Element::random(rng)), &want));
        }
    }
    Ok(worst)
}

fn block_symbol_image(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let engine = SymbolEngine::new(SYMBOL_J_MAX, SYMBOL_J_MAX);
    let grid = haar_grid(2, 2, 2, GroupTag::Su2)?;
    let mut worst: f64 = 0.0;
    for f in random_fs(rng, 20) {
        let w = weyl_symbol(&engine, &commutant_closed_form(&f), &grid, SymbolOption::II)?;
        let image = f.sr_image();
        for node in &block_symbol(&w).blocks {
            worst = worst.max(blocks_diff(node, &image));
        }
    }
    Ok(worst)
}

fn trace_analytic(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let engine = SymbolEngine::new(SYMBOL_J_MAX, SYMBOL_J_MAX);
    let grid = QuadratureGrid::exact_for(h(2 * SYMBOL_J_MAX.twice()), GroupTag::Su2);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let (f, g) = (FourierCoeffs::random(SYMBOL_J_MAX, rng), FourierCoeffs::random(SYMBOL_J_MAX, rng));
        let (a, b) = (commutant_closed_form(&f), commutant_closed_form(&g));
        let oracle = f.plancherel(&g);
        for option in [SymbolOption::I, SymbolOption::II] {
            let tr = symbol_trace_pairing(&weyl_symbol(&engine, &a, &grid, option)?, &weyl_symbol(&engine, &b, &grid, option)?)?;
            worst = worst.max((tr - oracle).norm() / oracle.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Symbol cutoff for generic operators; their symbols are not band-limited.
const RANK_ONE_CUTOFF: HalfInt = HalfInt::from_int(32);

fn trace_rank_one(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j_max = HalfInt::ONE;
    let engine = SymbolEngine::new(j_max, RANK_ONE_CUTOFF);
    let grid = QuadratureGrid::exact_for(h(2 * j_max.twice()), GroupTag::Su2);
    let mut ops = vec![
        MomentumOperator::rank_one(j_max, MomentumIndex::new(h(2), h(2), h(0))?)?,
        MomentumOperator::rank_one(j_max, MomentumIndex::new(h(1), h(-1), h(1))?)?,
    ];
    // |ψ⟩⟨ψ| for a random unit ψ
    let n = ops[0].dim();
    let psi: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ops.push(MomentumOperator::from_matrix(j_max, CMatrix::from_fn(n, n, |r, s| psi[r] * psi[s].conj() / (norm * norm)))?);
    let mut worst: f64 = 0.0;
    for op in &ops {
        for option in [SymbolOption::II, SymbolOption::I] {
            let plan = SymbolPlan::new(&engine, op, option)?;
            let tr = trace_pairing_streaming(&plan, &plan, &grid)?;
            worst = worst.max((tr - 1.0).norm());
        }
    }
    Ok(worst)
}

fn covariance_worst(op: &MomentumOperator, rng: &mut ChaCha8Rng) -> Result<f64> {
    let engine = SymbolEngine::new(op.j_max, op.j_max);
    let nodes: Vec<Su2Element> = (0..2).map(|_| Su2Element::random(rng)).collect();
    let (g1, g2) = (Su2Element::random(rng), Su2Element::random(rng));
    let mut worst: f64 = 0.0;
    for option in [SymbolOption::I, SymbolOption::II] {
        let r = covariance_check(&engine, op, &g1, &g2, option, &nodes)?;
        worst = worst.max(r.right_residual).max(r.left_residual);
    }
    Ok(worst)
}

fn covariance_commutant(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let op = commutant_closed_form(&FourierCoeffs::random(SYMBOL_J_MAX, rng));
    covariance_worst(&op, rng)
}

fn covariance_generic(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let op = MomentumOperator::random(SYMBOL_J_MAX, rng);
    covariance_worst(&op, rng)
}

fn schur_averaging(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j_max = h(4);
    let grid = QuadratureGrid::exact_for(j_max, GroupTag::Su2);
    let n = sr_dim(j_max);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let herm = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        worst = worst.max(block_scalar_residual(&schur_average(&herm, j_max, &grid)?, &herm, j_max));
    }
    Ok(worst)
}

fn negative_control(_: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<f64> {
    let engine = SymbolEngine::new(SYMBOL_J_MAX, SYMBOL_J_MAX);
    let grid = QuadratureGrid::exact_for(h(2 * SYMBOL_J_MAX.twice()), GroupTag::Su2);
    let (f, g) = (FourierCoeffs::random(SYMBOL_J_MAX, rng), FourierCoeffs::random(SYMBOL_J_MAX, rng));
    let wa = weyl_symbol(&engine, &commutant_closed_form(&f), &grid, SymbolOption::II)?;
    let wb = weyl_symbol(&engine, &commutant_closed_form(&g), &grid, SymbolOption::II)?;
    let weighted = symbol_trace_pairing(&wa, &wb)?;
    let unweighted = unweighted_trace_pairing(&wa, &wb)?;
    Ok(weighted.norm() / (unweighted - weighted).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(Suite::from_str(name).unwrap().name(), name);
        }
        assert!(Suite::from_str("nope").is_err());
    }

    #[test]
    fn every_module_has_checks() {
        for name in &Suite::NAMES[1..] {
            assert!(!check_ids(Suite::from_str(name).unwrap()).is_empty(), "{name}");
        }
        let all = check_ids(Suite::All);
        let mut dedup = all.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn fast_suite_passes_and_is_deterministic() {
        let cfg = VerifyConfig { seed: 7, ..VerifyConfig::default() };
        let a = run_suite(Suite::SunStructure, &cfg);
        assert!(a.all_pass(), "{a:?}");
        let b = run_suite(Suite::SunStructure, &VerifyConfig { workers: 1, ..cfg });
        assert_eq!(a, b);
    }

    #[test]
    fn coarse_grid_override_is_detected() {
        let cfg = VerifyConfig { grid: Some((2, 2, 2)), ..VerifyConfig::default() };
        let r = run_suite(Suite::GroupCore, &cfg);
        let haar = r.checks.iter().find(|c| c.check_id == "group_core.haar_grid_d_functions").unwrap();
        assert!(!haar.pass);
    }
}
