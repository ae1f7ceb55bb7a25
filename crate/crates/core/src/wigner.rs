//! Wigner `d` and `D` matrices, spin generators and flow derivatives.
//!
//! Rows and columns run over `m = j, j−1, ..., −j`. Generators act on
//! functions on the group by
//!
//! ```text
//! (J_r ψ)(g) = i d/dε ψ(e^{+iεσ_r/2} g)     (left, acts on the row index)
//! (J̃_r ψ)(g) = i d/dε ψ(g e^{−iεσ_r/2})     (right, acts on the column index)
//! ```
//!
//! so that `J₃ D^j_{mn} = −m D^j_{mn}` and `J̃₃ D^j_{mn} = n D^j_{mn}`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::group_core::{adjoint_rotation, exp_map, su2_to_euler, AxisAngle, EulerAngles, Su2Element};
use crate::half_int::HalfInt;

pub type CMatrix = DMatrix<Complex64>;

/// Largest `2j` evaluated with plain floating-point factorials.
pub const DIRECT_TWO_J_MAX: i64 = 60;

/// Step used by the finite-difference flow derivatives.
pub const FD_STEP: f64 = 1e-5;

const TABLE_LEN: usize = 1024;

fn ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; TABLE_LEN];
        for k in 1..TABLE_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

fn factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![1.0; 171];
        for k in 1..171 {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

/// `ln n!` for `n < 1024`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_factorials()[n]
}

/// `n!` in floating point (`n ≤ 170`).
pub fn factorial(n: usize) -> f64 {
    factorials()[n]
}

/// Wigner little-d matrix `d^j(β)`, entry `[a, b]` for `m = j − a`, `n = j − b`.
pub fn little_d(j: HalfInt, beta: f64) -> DMatrix<f64> {
    little_d_with(j, beta, j.twice() > DIRECT_TWO_J_MAX)
}

pub(crate) fn little_d_with(j: HalfInt, beta: f64, log_space: bool) -> DMatrix<f64> {
    let t = j.twice() as usize;
    let n = t + 1;
    let (s, c) = (0.5 * beta).sin_cos();
    let mut d = DMatrix::<f64>::zeros(n, n);
    let lf = ln_factorials();
    let f = factorials();
    let (lc, ls) = (c.abs().ln(), s.abs().ln());
    for a in 0..n {
        // row m: j + m = t − a
        let (p1, q1) = (t - a, a);
        for b in 0..n {
            let (p2, q2) = (t - b, b);
            let k_lo = p2.saturating_sub(p1);
            let k_hi = p2.min(q1);
            let mut sum = 0.0;
            for k in k_lo..=k_hi {
                let cp = p2 + q1 - 2 * k;
                let sp = 2 * k + p1 - p2;
                let denom = [p2 - k, k, q1 - k, k + p1 - p2];
                let sign = if (k + p1 - p2) % 2 == 0 { 1.0 } else { -1.0 };
                let term = if log_space {
                    if (cp > 0 && c == 0.0) || (sp > 0 && s == 0.0) {
                        continue;
                    }
                    let mut l = 0.5 * (lf[p1] + lf[q1] + lf[p2] + lf[q2]) - denom.iter().map(|&x| lf[x]).sum::<f64>();
                    if cp > 0 {
                        l += cp as f64 * lc;
                    }
                    if sp > 0 {
                        l += sp as f64 * ls;
                    }
                    let base_sign = if (cp % 2 == 1 && c < 0.0) ^ (sp % 2 == 1 && s < 0.0) { -1.0 } else { 1.0 };
                    base_sign * l.exp()
                } else {
                    (f[p1] * f[q1]).sqrt() * (f[p2] * f[q2]).sqrt() / denom.iter().map(|&x| f[x]).product::<f64>()
                        * c.powi(cp as i32)
                        * s.powi(sp as i32)
                };
                sum += sign * term;
            }
            d[(a, b)] = sum;
        }
    }
    d
}

/// `d^j(β)` for every `j = 0, 1/2, ..., j_max`, by coupling one spin-½ at a time.
///
/// Each step combines `d^{j−½}` with `d^{½}` through the stretched Clebsch–Gordan
/// coefficients; the recursion has no cancellation and stays accurate to
/// machine precision at large `j`.
pub fn little_d_ladder(j_max: HalfInt, beta: f64) -> Vec<DMatrix<f64>> {
    let (q, p) = (0.5 * beta).sin_cos();
    let mut out = Vec::with_capacity(j_max.dim());
    out.push(DMatrix::from_element(1, 1, 1.0));
    for t in 1..=j_max.twice().max(0) as usize {
        let prev = &out[t - 1];
        let mut d = DMatrix::<f64>::zeros(t + 1, t + 1);
        let tf = t as f64;
        for a in 0..=t {
            for b in 0..=t {
                let (up_a, dn_a) = (((t - a) as f64).sqrt(), (a as f64).sqrt());
                let (up_b, dn_b) = (((t - b) as f64).sqrt(), (b as f64).sqrt());
                let mut v = 0.0;
                if a < t && b < t {
                    v += up_a * up_b * p * prev[(a, b)];
                }
                if a < t && b > 0 {
                    v -= up_a * dn_b * q * prev[(a, b - 1)];
                }
                if a > 0 && b < t {
                    v += dn_a * up_b * q * prev[(a - 1, b)];
                }
                if a > 0 && b > 0 {
                    v += dn_a * dn_b * p * prev[(a - 1, b - 1)];
                }
                d[(a, b)] = v / tf;
            }
        }
        out.push(d);
    }
    out
}

/// The unitary matrix `D^j(g)` in the `|jm⟩` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerMatrix {
    pub j: HalfInt,
    pub entries: CMatrix,
}

impl WignerMatrix {
    /// `D^j` at an element, through its Euler angles.
    pub fn of(j: HalfInt, g: &Su2Element) -> WignerMatrix {
        big_d(j, &su2_to_euler(g))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Entry `D^j_{mn}` by labels.
    pub fn get(&self, m: HalfInt, n: HalfInt) -> Complex64 {
        let a = self.j.index_of(m).expect("m out of range");
        let b = self.j.index_of(n).expect("n out of range");
        self.entries[(a, b)]
    }

    pub fn character(&self) -> Complex64 {
        self.entries.trace()
    }
}

/// `D^j_{mn}(α, β, γ) = e^{−imα} d^j_{mn}(β) e^{−inγ}`.
pub fn big_d(j: HalfInt, e: &EulerAngles) -> WignerMatrix {
    let d = little_d(j, e.beta);
    let n = j.dim();
    let phases = |angle: f64| -> Vec<Complex64> {
        j.projections().map(|m| Complex64::from_polar(1.0, -m.value() * angle)).collect()
    };
    let (pa, pg) = (phases(e.alpha), phases(e.gamma));
    let entries = CMatrix::from_fn(n, n, |a, b| pa[a] * d[(a, b)] * pg[b]);
    WignerMatrix { j, entries }
}

/// `D^j(g)` for every `j = 0, 1/2, ..., j_max` (ladder recursion for `d`).
pub fn big_d_all(j_max: HalfInt, g: &Su2Element) -> Vec<CMatrix> {
    let e = su2_to_euler(g);
    little_d_ladder(j_max, e.beta)
        .into_iter()
        .enumerate()
        .map(|(t, d)| {
            let phase = |a: usize, angle: f64| Complex64::from_polar(1.0, -0.5 * (t as f64 - 2.0 * a as f64) * angle);
            CMatrix::from_fn(t + 1, t + 1, |a, b| phase(a, e.alpha) * d[(a, b)] * phase(b, e.gamma))
        })
        .collect()
}

/// Spin matrices `J₁, J₂, J₃` with `J₃ = diag(m)` and `J₊` having nonnegative entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinGenerators {
    pub j: HalfInt,
    pub j1: CMatrix,
    pub j2: CMatrix,
    pub j3: CMatrix,
}

impl SpinGenerators {
    pub fn get(&self, r: usize) -> &CMatrix {
        match r {
            1 => &self.j1,
            2 => &self.j2,
            3 => &self.j3,
            _ => panic!("generator index must be 1, 2 or 3"),
        }
    }

    /// `J₊ = J₁ + iJ₂`.
    pub fn raising(&self) -> CMatrix {
        &self.j1 + &self.j2 * Complex64::i()
    }
}

pub fn spin_matrices(j: HalfInt) -> SpinGenerators {
    let n = j.dim();
    let jv = j.value();
    let mut jp = CMatrix::zeros(n, n);
    let mut j3 = CMatrix::zeros(n, n);
    for a in 0..n {
        let m = j.projection_at(a).value();
        j3[(a, a)] = Complex64::new(m, 0.0);
        if a > 0 {
            // J₊|m⟩ = √((j−m)(j+m+1)) |m+1⟩, and m+1 sits at row a−1
            jp[(a - 1, a)] = Complex64::new(((jv - m) * (jv + m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * Complex64::new(0.0, -0.5);
    SpinGenerators { j, j1, j2, j3 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `e^{−iφσ_r/2}` for `r ∈ {1, 2, 3}`.
pub fn axis_flow(r: usize, phi: f64) -> Su2Element {
    let mut axis = [0.0; 3];
    axis[r - 1] = 1.0;
    exp_map(&AxisAngle { axis, theta: phi })
}

/// Analytic generator action on `D^j` at `g`: `−𝒥_r D(g)` (left) or `D(g) 𝒥_r` (right).
pub fn generator_derivative(j: HalfInt, side: Side, r: usize, g: &Su2Element) -> CMatrix {
    let d = WignerMatrix::of(j, g).entries;
    let s = spin_matrices(j);
    match side {
        Side::Left => -(s.get(r) * d),
        Side::Right => d * s.get(r),
    }
}

/// Point reached from `g` after flowing a parameter `eps` along generator `r`.
pub fn flow(side: Side, r: usize, eps: f64, g: &Su2Element) -> Su2Element {
    match side {
        Side::Left => axis_flow(r, -eps).compose(g),
        Side::Right => g.compose(&axis_flow(r, eps)),
    }
}

/// Central-difference generator action `i d/dε F(flow(ε))` for a matrix-valued `F`.
pub fn fd_generator<F>(side: Side, r: usize, g: &Su2Element, h: f64, f: F) -> CMatrix
where
    F: Fn(&Su2Element) -> CMatrix,
{
    let plus = f(&flow(side, r, h, g));
    let minus = f(&flow(side, r, -h, g));
    (plus - minus) * Complex64::new(0.0, 0.5 / h)
}

/// Max deviation between `J̃_r D` and `Σ_s R_{sr}(g) 𝒥-action` as flow derivatives.
///
/// As actions on `D^j` the right generators satisfy `J̃_r = −R_{sr}(g) J_s`; both
/// sides are evaluated by finite differences along the respective flows.
pub fn check_adjoint_relation(j: HalfInt, g: &Su2Element) -> f64 {
    let r_mat = adjoint_rotation(g);
    let d = |x: &Su2Element| WignerMatrix::of(j, x).entries;
    let left: Vec<CMatrix> = (1..=3).map(|s| fd_generator(Side::Left, s, g, FD_STEP, d)).collect();
    let mut worst: f64 = 0.0;
    for r in 1..=3 {
        let lhs = fd_generator(Side::Right, r, g, FD_STEP, d);
        let mut rhs = CMatrix::zeros(j.dim(), j.dim());
        for s in 1..=3 {
            rhs -= &left[s - 1] * Complex64::new(r_mat[(s - 1, r - 1)], 0.0);
        }
        worst = worst.max((lhs - rhs).camax());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::su2_from_angles;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Scaling-and-squaring Taylor exponential, independent of the factorial sum.
    fn expm(a: &CMatrix) -> CMatrix {
        let norm = a.camax() * a.nrows() as f64;
        let k = (norm.max(1e-300).log2().ceil() as i32 + 1).max(0);
        let b = a / Complex64::new(2f64.powi(k), 0.0);
        let n = a.nrows();
        let mut sum = CMatrix::identity(n, n);
        let mut term = CMatrix::identity(n, n);
        for i in 1..30 {
            term = &term * &b / Complex64::new(i as f64, 0.0);
            sum += &term;
        }
        for _ in 0..k {
            sum = &sum * &sum;
        }
        sum
    }

    fn d_expm(j: HalfInt, a: f64, b: f64, g: f64) -> CMatrix {
        let s = spin_matrices(j);
        let mi = Complex64::new(0.0, -1.0);
        expm(&(&s.j3 * (mi * a))) * expm(&(&s.j2 * (mi * b))) * expm(&(&s.j3 * (mi * g)))
    }

    #[test]
    fn spin_half_matrices() {
        let d = little_d(HalfInt::HALF, 1.3);
        let (s, c) = 0.65f64.sin_cos();
        let want = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        assert!((d - want).camax() < 1e-15);
        let big = big_d(HalfInt::HALF, &EulerAngles::new(0.4, 1.3, 2.9)).entries;
        let el = su2_from_angles(0.4, 1.3, 2.9).matrix();
        for a in 0..2 {
            for b in 0..2 {
                assert!((big[(a, b)] - el[a][b]).norm() < 1e-14);
            }
        }
        let s = spin_matrices(HalfInt::HALF);
        let h = Complex64::new(0.5, 0.0);
        let sx = CMatrix::from_row_slice(2, 2, &[0.0.into(), h, h, 0.0.into()]);
        let sy = CMatrix::from_row_slice(2, 2, &[0.0.into(), Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5), 0.0.into()]);
        assert!((s.j1 - sx).camax() < 1e-15 && (s.j2 - sy).camax() < 1e-15);
    }

    #[test]
    fn small_cases() {
        for t in 0..10 {
            let j = HalfInt::from_twice(t);
            assert!((little_d(j, 0.0) - DMatrix::identity(j.dim(), j.dim())).camax() < 1e-15);
            let dj = little_d(j, 0.8);
            assert!((dj[(0, 0)] - 0.4f64.cos().powi(t as i32)).abs() < 1e-14);
        }
        assert!((little_d(HalfInt::ONE, 0.9)[(1, 1)] - 0.9f64.cos()).abs() < 1e-15);
        assert_eq!(spin_matrices(HalfInt::ZERO).j1.shape(), (1, 1));
        assert_eq!(spin_matrices(HalfInt::ZERO).j3[(0, 0)], Complex64::new(0.0, 0.0));
        let jp = spin_matrices(HalfInt::ONE).raising();
        let r2 = 2f64.sqrt();
        assert!((jp[(0, 1)].re - r2).abs() < 1e-15 && (jp[(1, 2)].re - r2).abs() < 1e-15);
    }

    #[test]
    fn matches_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..=30 {
            let j = HalfInt::from_twice(t);
            let e = su2_to_euler(&Su2Element::random(&mut rng));
            let got = big_d(j, &e).entries;
            let want = d_expm(j, e.alpha, e.beta, e.gamma);
            let tol = if t <= 8 { 1e-11 } else { 1e-9 };
            assert!((got - want).camax() < tol, "2j={t}");
        }
    }

    #[test]
    fn log_space_agrees() {
        for t in [10, 30, 50, 60] {
            let j = HalfInt::from_twice(t);
            for beta in [0.0, 0.3, 1.7, 3.0, std::f64::consts::PI] {
                let a = little_d_with(j, beta, false);
                let b = little_d_with(j, beta, true);
                // both paths carry the factorial-sum cancellation error, which grows with j
                let tol = if t <= 10 { 1e-13 } else if t <= 30 { 1e-10 } else { 1e-6 };
                assert!((a - b).camax() < tol, "2j={t} beta={beta}");
            }
        }
        let d = little_d(HalfInt::from_twice(80), 1.1);
        let o = &d * d.transpose();
        assert!((o - DMatrix::identity(81, 81)).camax() < 1e-4);
    }

    #[test]
    fn ladder_matches_sum() {
        for beta in [0.0, 0.4, 1.7, 2.9, std::f64::consts::PI] {
            let lad = little_d_ladder(HalfInt::from_twice(128), beta);
            for t in 0..=24 {
                let d = little_d(HalfInt::from_twice(t), beta);
                assert!((&lad[t as usize] - d).camax() < 1e-12, "2j={t} beta={beta}");
            }
            for t in [60usize, 100, 128] {
                let d = &lad[t];
                let o = d * d.transpose();
                assert!((o - DMatrix::identity(t + 1, t + 1)).camax() < 1e-13);
            }
        }
    }

    #[test]
    fn all_spins_at_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let g = Su2Element::random(&mut rng);
            let all = big_d_all(HalfInt::from_twice(8), &g);
            assert_eq!(all.len(), 9);
            for (t, d) in all.iter().enumerate() {
                assert!((d - WignerMatrix::of(HalfInt::from_twice(t as i64), &g).entries).camax() < 1e-13);
            }
        }
    }

    #[test]
    fn generators_algebra() {
        for t in 0..=8 {
            let j = HalfInt::from_twice(t);
            let s = spin_matrices(j);
            let i = Complex64::i();
            let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
            assert!((comm(&s.j1, &s.j2) - &s.j3 * i).camax() < 1e-12);
            assert!((comm(&s.j2, &s.j3) - &s.j1 * i).camax() < 1e-12);
            assert!((comm(&s.j3, &s.j1) - &s.j2 * i).camax() < 1e-12);
            let cas = &s.j1 * &s.j1 + &s.j2 * &s.j2 + &s.j3 * &s.j3;
            let jv = j.value();
            assert!((cas - CMatrix::identity(j.dim(), j.dim()) * Complex64::new(jv * (jv + 1.0), 0.0)).camax() < 1e-12);
        }
    }

    #[test]
    fn representation_of_axis_flows() {
        // D(e^{−iφσ_r/2}) = e^{−iφ𝒥_r}, which fixes the generator signs
        for t in 0..=4 {
            let j = HalfInt::from_twice(t);
            let s = spin_matrices(j);
            for r in 1..=3 {
                let d = WignerMatrix::of(j, &axis_flow(r, 0.77)).entries;
                let want = expm(&(s.get(r) * Complex64::new(0.0, -0.77)));
                assert!((d - want).camax() < 1e-12, "2j={t} r={r}");
            }
        }
    }

    #[test]
    fn derivatives_match_flows() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for t in 0..=4 {
            let j = HalfInt::from_twice(t);
            for _ in 0..5 {
                let g = Su2Element::random(&mut rng);
                for side in [Side::Left, Side::Right] {
                    for r in 1..=3 {
                        let an = generator_derivative(j, side, r, &g);
                        let fd = fd_generator(side, r, &g, FD_STEP, |x| WignerMatrix::of(j, x).entries);
                        let scale = an.camax().max(1.0);
                        assert!((an - fd).camax() / scale < 1e-7);
                    }
                }
            }
            let d = WignerMatrix::of(j, &Su2Element::random(&mut rng));
            let g3 = generator_derivative(j, Side::Left, 3, &Su2Element::IDENTITY);
            let g3r = generator_derivative(j, Side::Right, 3, &Su2Element::IDENTITY);
            assert!((g3 + g3r).camax() < 1e-15);
            let _ = d;
        }
        // J₃ D = −m D and J̃₃ D = n D
        let j = HalfInt::from_twice(3);
        let g = Su2Element::random(&mut rng);
        let d = WignerMatrix::of(j, &g).entries;
        let l = generator_derivative(j, Side::Left, 3, &g);
        let r = generator_derivative(j, Side::Right, 3, &g);
        for a in 0..4 {
            for b in 0..4 {
                let (m, n) = (j.projection_at(a).value(), j.projection_at(b).value());
                assert!((l[(a, b)] + d[(a, b)] * m).norm() < 1e-14);
                assert!((r[(a, b)] - d[(a, b)] * n).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn casimir_by_second_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = 1e-4;
        for t in 0..=4 {
            let j = HalfInt::from_twice(t);
            let g = Su2Element::random(&mut rng);
            let d = WignerMatrix::of(j, &g).entries;
            for side in [Side::Left, Side::Right] {
                let mut cas = CMatrix::zeros(j.dim(), j.dim());
                for r in 1..=3 {
                    let p = WignerMatrix::of(j, &flow(side, r, h, &g)).entries;
                    let m = WignerMatrix::of(j, &flow(side, r, -h, &g)).entries;
                    // (i d/dε)² = −d²/dε²
                    cas -= (p + m - &d * Complex64::new(2.0, 0.0)) / Complex64::new(h * h, 0.0);
                }
                let jv = j.value();
                assert!((cas - &d * Complex64::new(jv * (jv + 1.0), 0.0)).camax() < 1e-6, "2j={t}");
            }
        }
    }

    #[test]
    fn left_and_right_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = 1e-4;
        for t in 1..=3 {
            let j = HalfInt::from_twice(t);
            let g = Su2Element::random(&mut rng);
            for r in 1..=3 {
                for s in 1..=3 {
                    // apply left r then right s, and the reverse, by nested central differences
                    let lr = fd_generator(Side::Left, r, &g, h, |x| fd_generator(Side::Right, s, x, h, |y| WignerMatrix::of(j, y).entries));
                    let rl = fd_generator(Side::Right, s, &g, h, |x| fd_generator(Side::Left, r, x, h, |y| WignerMatrix::of(j, y).entries));
                    assert!((lr - rl).camax() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn adjoint_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(check_adjoint_relation(HalfInt::ONE, &Su2Element::IDENTITY) < 1e-9);
        assert!(check_adjoint_relation(HalfInt::HALF, &Su2Element::random(&mut rng)) < 1e-7);
        assert!(check_adjoint_relation(HalfInt::from_int(2), &Su2Element::random(&mut rng)) < 1e-6);
    }
}
