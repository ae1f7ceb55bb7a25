//! Carrier space of the Schwinger representation of SU(2).
//!
//! The highest-weight slice `D^j_{mj}` of the regular representation is spanned
//! by the monomials `u_{jm}(ξ, η) = ξ^{j+m} η^{j−m} / √((j+m)!(j−m)!)`; the basis
//! used throughout is `Y_{jm} = √((2j+1)!) u_{jm}(η, −ξ)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::{gauss_laguerre, su2_from_angles, EulerAngles, GroupTag, Su2Element};
use crate::half_int::HalfInt;
use crate::wigner::{big_d, fd_generator, ln_factorial, CMatrix, Side, WignerMatrix, FD_STEP};

/// Largest `2j` for which monomials are evaluated by plain powers.
const DIRECT_TWO_J_MAX: i64 = 40;

fn check_labels(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 || !j.admits(m) {
        return Err(Error::Argument(format!("invalid labels j = {j}, m = {m}")));
    }
    Ok(())
}

/// `e^{ln_scale} a^p b^q` with the powers taken in log-space when large.
fn scaled_monomial(a: Complex64, b: Complex64, p: usize, q: usize, ln_scale: f64, two_j: i64) -> Complex64 {
    if two_j <= DIRECT_TWO_J_MAX {
        return a.powu(p as u32) * b.powu(q as u32) * ln_scale.exp();
    }
    if (p > 0 && a == Complex64::new(0.0, 0.0)) || (q > 0 && b == Complex64::new(0.0, 0.0)) {
        return Complex64::new(0.0, 0.0);
    }
    let mut ln_mod = ln_scale;
    let mut phase = 0.0;
    if p > 0 {
        ln_mod += p as f64 * a.norm().ln();
        phase += p as f64 * a.arg();
    }
    if q > 0 {
        ln_mod += q as f64 * b.norm().ln();
        phase += q as f64 * b.arg();
    }
    Complex64::from_polar(ln_mod.exp(), phase)
}

fn powers(j: HalfInt, m: HalfInt) -> (usize, usize) {
    (((j.twice() + m.twice()) / 2) as usize, ((j.twice() - m.twice()) / 2) as usize)
}

/// `u_{jm}(a, b) = a^{j+m} b^{j−m} / √((j+m)!(j−m)!)`.
pub fn u_jm(j: HalfInt, m: HalfInt, a: Complex64, b: Complex64) -> Result<Complex64> {
    check_labels(j, m)?;
    let (p, q) = powers(j, m);
    Ok(scaled_monomial(a, b, p, q, -0.5 * (ln_factorial(p) + ln_factorial(q)), j.twice()))
}

/// Labels of one basis function `Y_{jm}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchwingerBasisFunction {
    pub j: HalfInt,
    pub m: HalfInt,
}

impl SchwingerBasisFunction {
    pub fn new(j: HalfInt, m: HalfInt) -> Result<Self> {
        check_labels(j, m)?;
        Ok(SchwingerBasisFunction { j, m })
    }

    /// `Y_{jm}(g) = √((2j+1)!) u_{jm}(η, −ξ)`.
    pub fn eval_element(&self, g: &Su2Element) -> Complex64 {
        let (p, q) = powers(self.j, self.m);
        let t = self.j.twice() as usize;
        let ln_scale = 0.5 * (ln_factorial(t + 1) - ln_factorial(p) - ln_factorial(q));
        scaled_monomial(g.eta, -g.xi, p, q, ln_scale, self.j.twice())
    }

    pub fn eval(&self, e: &EulerAngles) -> Complex64 {
        self.eval_element(&su2_from_angles(e.alpha, e.beta, e.gamma))
    }
}

/// `Y_{jm}` at Euler angles.
pub fn y_jm(j: HalfInt, m: HalfInt, e: &EulerAngles) -> Result<Complex64> {
    Ok(SchwingerBasisFunction::new(j, m)?.eval(e))
}

/// `(−1)^{j−m} √(2j+1) D^j_{−m,j}(e)`, the D-function form of `Y_{jm}`.
pub fn y_jm_from_d(j: HalfInt, m: HalfInt, e: &EulerAngles) -> Result<Complex64> {
    check_labels(j, m)?;
    let d = big_d(j, e);
    let sign = if ((j.twice() - m.twice()) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(d.get(-m, j) * (sign * (j.dim() as f64).sqrt()))
}

/// Spin coherent-state amplitude `⟨j,m|α,β⟩ = D^j_{mj}(α, β, 0)`.
pub fn coherent_overlap(j: HalfInt, m: HalfInt, alpha: f64, beta: f64) -> Result<Complex64> {
    check_labels(j, m)?;
    Ok(big_d(j, &EulerAngles::new(alpha, beta, 0.0)).get(m, j))
}

/// `|Y_{jm}(α,β,γ) − e^{−iγj} (−1)^{j−m} √(2j+1) ⟨j,−m|α,β⟩|`.
///
/// The γ-dependence of `Y_{jm}` is the single phase `e^{−iγj}`; what remains is
/// a coherent-state amplitude at the same `(α, β)`.
pub fn coherent_relation_residual(j: HalfInt, m: HalfInt, e: &EulerAngles) -> Result<f64> {
    let y = y_jm(j, m, e)?;
    let sign = if ((j.twice() - m.twice()) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = Complex64::from_polar(sign * (j.dim() as f64).sqrt(), -e.gamma * j.value())
        * coherent_overlap(j, -m, e.alpha, e.beta)?;
    Ok((y - rhs).norm())
}

fn scalar_fn(f: impl Fn(&Su2Element) -> Complex64) -> impl Fn(&Su2Element) -> CMatrix {
    move |g| CMatrix::from_element(1, 1, f(g))
}

/// `|(J̃₁ + iJ̃₂) Y_{jm}(g)| / √(2j+1)` by central differences along right flows.
///
/// `√(2j+1)` bounds `|Y_{jm}|` on the whole group.
pub fn right_annihilation_residual(j: HalfInt, m: HalfInt, g: &Su2Element) -> Result<f64> {
    let y = SchwingerBasisFunction::new(j, m)?;
    let f = scalar_fn(|x| y.eval_element(x));
    let d1 = fd_generator(Side::Right, 1, g, FD_STEP, &f)[(0, 0)];
    let d2 = fd_generator(Side::Right, 2, g, FD_STEP, &f)[(0, 0)];
    Ok((d1 + Complex64::i() * d2).norm() / (j.dim() as f64).sqrt())
}

/// Coefficient in `(J₁ + iJ₂) D^j_{mj} = −√((j+m)(j−m+1)) D^j_{m−1,j}`.
pub fn left_ladder_coefficient(j: HalfInt, m: HalfInt) -> Result<f64> {
    check_labels(j, m)?;
    let (jv, mv) = (j.value(), m.value());
    Ok(-((jv + mv) * (jv - mv + 1.0)).sqrt())
}

/// Deviation of the finite-difference `(J₁ + iJ₂) D^j_{mj}(g)` from the ladder formula.
pub fn left_ladder_residual(j: HalfInt, m: HalfInt, g: &Su2Element) -> Result<f64> {
    let c = left_ladder_coefficient(j, m)?;
    let entry = |x: &Su2Element| CMatrix::from_element(1, 1, WignerMatrix::of(j, x).get(m, j));
    let d1 = fd_generator(Side::Left, 1, g, FD_STEP, entry)[(0, 0)];
    let d2 = fd_generator(Side::Left, 2, g, FD_STEP, entry)[(0, 0)];
    let lhs = d1 + Complex64::i() * d2;
    let rhs = if m == -j {
        Complex64::new(0.0, 0.0)
    } else {
        WignerMatrix::of(j, g).get(m - HalfInt::ONE, j) * c
    };
    Ok((lhs - rhs).norm())
}

/// A point of `ℂ²` in oscillator coordinates `z₁ = ρη`, `z₂ = −ρξ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BargmannPoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl BargmannPoint {
    pub fn from_group(rho: f64, g: &Su2Element) -> Self {
        BargmannPoint { z1: g.eta * rho, z2: -g.xi * rho }
    }

    pub fn rho_sq(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }
}

/// Finite expansion `Σ c_{jm} u_{jm}(z₁, z₂)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonomialExpansion {
    pub terms: BTreeMap<(HalfInt, HalfInt), Complex64>,
}

impl MonomialExpansion {
    pub fn single(j: HalfInt, m: HalfInt) -> Result<Self> {
        let mut e = MonomialExpansion::default();
        e.add(j, m, Complex64::new(1.0, 0.0))?;
        Ok(e)
    }

    pub fn add(&mut self, j: HalfInt, m: HalfInt, c: Complex64) -> Result<()> {
        check_labels(j, m)?;
        *self.terms.entry((j, m)).or_default() += c;
        Ok(())
    }

    pub fn eval(&self, p: &BargmannPoint) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(j, m), &c)| c * u_jm(j, m, p.z1, p.z2).expect("labels checked on insert"))
            .sum()
    }

    fn max_two_j(&self) -> i64 {
        self.terms.keys().map(|(j, _)| j.twice()).max().unwrap_or(0)
    }
}

/// Gaussian inner product `∫ d²z₁ d²z₂ / π² e^{−ρ²} P Q*`, from monomial orthogonality.
pub fn bargmann_inner_product(p: &MonomialExpansion, q: &MonomialExpansion) -> Complex64 {
    p.terms
        .iter()
        .filter_map(|(k, &a)| q.terms.get(k).map(|&b| a * b.conj()))
        .sum()
}

/// The same inner product by Gauss–Laguerre in `|z_k|²` times uniform phases.
pub fn bargmann_inner_product_quadrature(p: &MonomialExpansion, q: &MonomialExpansion) -> Complex64 {
    let t = p.max_two_j().max(q.max_two_j()) as usize;
    // |z|^{2k} e^{−|z|²} with k ≤ 2j needs t + 1 Laguerre nodes; phases up to 2j need 2j + 1 points
    let (nodes, weights) = gauss_laguerre(t + 1);
    let n_phi = t + 1;
    let mut sum = Complex64::new(0.0, 0.0);
    for (i1, &t1) in nodes.iter().enumerate() {
        for (i2, &t2) in nodes.iter().enumerate() {
            let w = weights[i1] * weights[i2] / (n_phi * n_phi) as f64;
            for k1 in 0..n_phi {
                let z1 = Complex64::from_polar(t1.sqrt(), 2.0 * PI * k1 as f64 / n_phi as f64);
                for k2 in 0..n_phi {
                    let z2 = Complex64::from_polar(t2.sqrt(), 2.0 * PI * k2 as f64 / n_phi as f64);
                    let pt = BargmannPoint { z1, z2 };
                    sum += p.eval(&pt) * q.eval(&pt).conj() * w;
                }
            }
        }
    }
    sum
}

fn factorial_u128(n: u32) -> u128 {
    (1..=n as u128).product()
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact check that the sphere and Gaussian routes give the same monomial norms.
///
/// For every `a + b = 2j` the normalized S³ moment `∫ dg |ξ|^{2a} |η|^{2b} = a! b!/(2j+1)!`
/// times the radial moment `∫ dρ² ρ² (ρ²)^{2j} e^{−ρ²} = (2j+1)!` must equal the
/// Gaussian moment `a! b!`, and the radial weight must have unit mass. Valid for `2j ≤ 20`.
pub fn factorial_identity_holds(two_j: u32) -> Result<bool> {
    if two_j > 20 {
        return Err(Error::Argument("exact check limited to 2j ≤ 20".into()));
    }
    // Γ(2j+2) as a product, checked against the factorial it should equal
    let radial: u128 = (2..=two_j as u128 + 1).product();
    let full = factorial_u128(two_j + 1);
    if radial != full {
        return Ok(false);
    }
    for a in 0..=two_j {
        let gaussian = factorial_u128(a) * factorial_u128(two_j - a);
        let g = gcd(gaussian, full);
        let (num, den) = (gaussian / g, full / g);
        // (num/den) · radial == gaussian
        if num * radial != gaussian * den {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f_j(ρ²) = (ρ²)^{2j} e^{−ρ²} / (2j+1)!`.
pub fn radial_weight(j: HalfInt, rho_sq: f64) -> f64 {
    let t = j.twice() as usize;
    if rho_sq == 0.0 {
        return if t == 0 { 1.0 } else { 0.0 };
    }
    (t as f64 * rho_sq.ln() - rho_sq - ln_factorial(t + 1)).exp()
}

/// `∫ dρ² ρ² f_j(ρ²) = Γ(2j+2)/(2j+1)!`, which is 1.
pub fn radial_weight_normalization(j: HalfInt) -> f64 {
    let t = j.twice() as u32;
    if t <= 20 {
        factorial_u128(t + 1) as f64 / (2..=t as u128 + 1).product::<u128>() as f64
    } else {
        (ln_factorial(t as usize + 1) - ln_factorial(t as usize + 1)).exp()
    }
}

/// The same integral by Gauss–Laguerre (exact for this polynomial degree).
pub fn radial_weight_normalization_numeric(j: HalfInt) -> f64 {
    let t = j.twice() as usize;
    let (x, w) = gauss_laguerre(t / 2 + 2);
    x.iter()
        .zip(&w)
        .map(|(&x, &w)| w * x * x.powi(t as i32) / ln_factorial(t + 1).exp())
        .sum()
}

/// SO(3) basis function `(−1)^{ℓ−m} √(2ℓ+1) D^ℓ_{−m,ℓ}(e)`.
pub fn so3_y(l: HalfInt, m: HalfInt, e: &EulerAngles) -> Result<Complex64> {
    if !l.is_integer() || !m.is_integer() {
        return Err(Error::Argument("SO(3) admits integer labels only".into()));
    }
    e.validate(GroupTag::So3)?;
    y_jm_from_d(l, m, e)
}

/// Closed form `√((2ℓ+1)!/((ℓ+m)!(ℓ−m)!)) (e^{−i(α+γ)} cos²β/2)^ℓ (−e^{iα} tan β/2)^{ℓ+m}`.
pub fn so3_y_closed_form(l: i64, m: i64, e: &EulerAngles) -> Complex64 {
    let (p, q) = ((l + m) as usize, (l - m) as usize);
    let pref = (0.5 * (ln_factorial(2 * l as usize + 1) - ln_factorial(p) - ln_factorial(q))).exp();
    let c2 = Complex64::from_polar((0.5 * e.beta).cos().powi(2), -(e.alpha + e.gamma));
    let z = -Complex64::from_polar((0.5 * e.beta).tan(), e.alpha);
    c2.powu(l as u32) * z.powu(p as u32) * pref
}

/// Coefficients `C_m`, `m = j, ..., −j`, of a vector in the spin-`j` block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    pub two_j: i64,
    #[serde(with = "crate::serde_complex")]
    pub coeffs: Vec<Complex64>,
}

impl SpinState {
    pub fn new(two_j: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if two_j < 0 || coeffs.len() != (two_j + 1) as usize {
            return Err(Error::Argument(format!("expected {} coefficients for 2j = {two_j}", two_j + 1)));
        }
        Ok(SpinState { two_j, coeffs })
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.two_j)
    }

    /// Basis state `|j, m⟩`.
    pub fn basis(j: HalfInt, m: HalfInt) -> Result<Self> {
        check_labels(j, m)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); j.dim()];
        coeffs[j.index_of(m).expect("checked")] = Complex64::new(1.0, 0.0);
        Ok(SpinState { two_j: j.twice(), coeffs })
    }

    pub fn random<R: rand::Rng + ?Sized>(two_j: i64, rng: &mut R) -> Self {
        let coeffs = (0..=two_j)
            .map(|_| {
                let g = Su2Element::random(rng);
                g.xi
            })
            .collect();
        SpinState { two_j, coeffs }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> SpinState {
        let n = self.norm();
        SpinState { two_j: self.two_j, coeffs: self.coeffs.iter().map(|c| c / n).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Projective fidelity `|⟨ψ|φ⟩| / (‖ψ‖‖φ‖)`.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm() / (self.norm() * other.norm())
    }

    /// Coefficients after `U(g)`, i.e. `D^j(g) C`.
    pub fn rotated(&self, g: &Su2Element) -> SpinState {
        let d = WignerMatrix::of(self.j(), g).entries;
        let c = nalgebra::DVector::from_vec(self.coeffs.clone());
        SpinState { two_j: self.two_j, coeffs: (d * c).iter().copied().collect() }
    }

    /// `ψ(g) = Σ_m C_m Y_{jm}(g)`.
    pub fn eval(&self, g: &Su2Element) -> Complex64 {
        let j = self.j();
        j.projections()
            .zip(&self.coeffs)
            .map(|(m, c)| c * SchwingerBasisFunction { j, m }.eval_element(g))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_core::{su2_to_euler, QuadratureGrid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_examples() {
        let (a, b) = (c(0.3, -1.2), c(2.0, 0.7));
        assert_eq!(u_jm(h(0), h(0), a, b).unwrap(), c(1.0, 0.0));
        assert!((u_jm(h(1), h(1), a, b).unwrap() - a).norm() < 1e-15);
        assert!((u_jm(h(2), h(0), a, b).unwrap() - a * b).norm() < 1e-15);
        assert!(u_jm(h(2), h(1), a, b).is_err());
        assert!(u_jm(h(2), h(4), a, b).is_err());
    }

    #[test]
    fn monomial_identity() {
        // D^j_{mj} = √((2j)!) u_{jm}(ξ, η)
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..50 {
            let g = Su2Element::random(&mut rng);
            for t in 0..=6 {
                let j = h(t);
                let d = WignerMatrix::of(j, &g);
                let s = ln_factorial(t as usize).exp().sqrt();
                for m in j.projections() {
                    let u = u_jm(j, m, g.xi, g.eta).unwrap() * s;
                    assert!((d.get(m, j) - u).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn log_space_monomials() {
        let (a, b) = (c(0.6, 0.2), c(-0.3, 0.7));
        let j = h(44);
        for m in j.projections() {
            let (p, q) = powers(j, m);
            let direct = a.powu(p as u32) * b.powu(q as u32) * (-0.5 * (ln_factorial(p) + ln_factorial(q))).exp();
            let got = u_jm(j, m, a, b).unwrap();
            assert!((got - direct).norm() <= 1e-12 * direct.norm().max(1e-300));
        }
    }

    #[test]
    fn y_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let e = su2_to_euler(&Su2Element::random(&mut rng));
            assert!((y_jm(h(0), h(0), &e).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
            let want = Complex64::from_polar(2f64.sqrt() * (0.5 * e.beta).sin(), 0.5 * (e.alpha - e.gamma));
            assert!((y_jm(h(1), h(1), &e).unwrap() - want).norm() < 1e-14);
            for t in 0..=6 {
                let j = h(t);
                for m in j.projections() {
                    let a = y_jm(j, m, &e).unwrap();
                    let b = y_jm_from_d(j, m, &e).unwrap();
                    assert!((a - b).norm() < 1e-12);
                    assert!(coherent_relation_residual(j, m, &e).unwrap() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn literal_coherent_form_differs() {
        // Y_{jm} ≠ e^{−iγj}⟨j,m|α,β⟩ in general; the amplitude sits at −m and carries (−1)^{j−m}√(2j+1)
        let e = EulerAngles::new(0.7, 1.1, 2.3);
        let (j, m) = (h(2), h(2));
        let y = y_jm(j, m, &e).unwrap();
        let literal = Complex64::from_polar(1.0, -e.gamma) * coherent_overlap(j, m, e.alpha, e.beta).unwrap();
        assert!((y - literal).norm() > 0.1);
    }

    #[test]
    fn coherent_examples() {
        assert_eq!(coherent_overlap(h(0), h(0), 1.0, 2.0).unwrap(), c(1.0, 0.0));
        let v = coherent_overlap(h(1), h(1), 0.8, 1.4).unwrap();
        assert!((v - Complex64::from_polar(0.7f64.cos(), -0.4)).norm() < 1e-15);
        for t in 0..=6 {
            let j = h(t);
            let s: f64 = j.projections().map(|m| coherent_overlap(j, m, 0.3, 2.2).unwrap().norm_sqr()).sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn y_orthonormal() {
        let grid = QuadratureGrid::exact_for(h(4), GroupTag::Su2);
        let labels: Vec<SchwingerBasisFunction> = (0..=4)
            .flat_map(|t| h(t).projections().map(move |m| SchwingerBasisFunction { j: h(t), m }))
            .collect();
        let vals: Vec<Vec<Complex64>> = grid.nodes.iter().map(|e| labels.iter().map(|y| y.eval(e)).collect()).collect();
        for (i, _) in labels.iter().enumerate() {
            for (k, _) in labels.iter().enumerate() {
                let s: Complex64 = vals.iter().zip(&grid.weights).map(|(v, w)| v[i] * v[k].conj() * *w).sum();
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((s - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn annihilation_and_ladder() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        assert_eq!(right_annihilation_residual(h(0), h(0), &Su2Element::random(&mut rng)).unwrap(), 0.0);
        for t in 0..=4 {
            let j = h(t);
            for m in j.projections() {
                for _ in 0..20 {
                    let g = Su2Element::random(&mut rng);
                    assert!(right_annihilation_residual(j, m, &g).unwrap() < 1e-7);
                    assert!(left_ladder_residual(j, m, &g).unwrap() < 1e-7);
                }
            }
        }
        assert_eq!(left_ladder_coefficient(h(3), h(-3)).unwrap(), 0.0);
        assert_eq!(left_ladder_coefficient(h(1), h(1)).unwrap(), -1.0);
        assert!((left_ladder_coefficient(h(2), h(0)).unwrap() + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bargmann_products() {
        let one = MonomialExpansion::single(h(0), h(0)).unwrap();
        assert_eq!(bargmann_inner_product(&one, &one), c(1.0, 0.0));
        let labels: Vec<(HalfInt, HalfInt)> = (0..=4).flat_map(|t| h(t).projections().map(move |m| (h(t), m))).collect();
        for &(j, m) in &labels {
            for &(k, n) in &labels {
                let p = MonomialExpansion::single(j, m).unwrap();
                let q = MonomialExpansion::single(k, n).unwrap();
                let want = if (j, m) == (k, n) { 1.0 } else { 0.0 };
                assert_eq!(bargmann_inner_product(&p, &q), c(want, 0.0));
                assert!((bargmann_inner_product_quadrature(&p, &q) - want).norm() < 1e-10);
            }
        }
        let mut p = MonomialExpansion::default();
        p.add(h(2), h(0), c(0.5, -1.0)).unwrap();
        p.add(h(1), h(-1), c(2.0, 0.3)).unwrap();
        let mut q = MonomialExpansion::default();
        q.add(h(2), h(0), c(-0.2, 0.1)).unwrap();
        q.add(h(3), h(1), c(1.0, 1.0)).unwrap();
        let exact = bargmann_inner_product(&p, &q);
        assert!((bargmann_inner_product_quadrature(&p, &q) - exact).norm() < 1e-10);
    }

    #[test]
    fn bargmann_point_radius() {
        let g = Su2Element::normalized(c(0.3, 0.4), c(-0.5, 0.1));
        let p = BargmannPoint::from_group(1.7, &g);
        assert!((p.rho_sq() - 1.7 * 1.7).abs() < 1e-14);
    }

    #[test]
    fn factorial_identity() {
        for t in 0..=20 {
            assert!(factorial_identity_holds(t).unwrap());
        }
        assert!(factorial_identity_holds(21).is_err());
    }

    #[test]
    fn radial() {
        for t in 0..=20 {
            let j = h(t);
            assert_eq!(radial_weight_normalization(j), 1.0);
            assert!((radial_weight_normalization_numeric(j) - 1.0).abs() < 1e-12, "2j={t}");
            if t > 0 {
                assert_eq!(radial_weight(j, 0.0), 0.0);
            }
        }
        assert!((radial_weight(h(2), 1.5) - 1.5f64.powi(2) * (-1.5f64).exp() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn so3_basis() {
        let e = EulerAngles::new(0.4, 1.2, 5.0);
        assert!((so3_y(h(0), h(0), &e).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(so3_y(h(1), h(1), &e).is_err());
        assert!(so3_y(h(2), h(0), &EulerAngles::new(0.1, 0.2, 7.0)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let mut e = su2_to_euler(&Su2Element::random(&mut rng));
            e.gamma = e.gamma.rem_euclid(2.0 * PI);
            if e.beta > 3.0 {
                continue;
            }
            for l in 0..=3 {
                for m in -l..=l {
                    let a = so3_y(HalfInt::from_int(l), HalfInt::from_int(m), &e).unwrap();
                    let b = so3_y_closed_form(l, m, &e);
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
        let grid = QuadratureGrid::exact_for(HalfInt::from_int(4), GroupTag::So3);
        for l in 0..=2i64 {
            for m in -l..=l {
                for l2 in 0..=2i64 {
                    for m2 in -l2..=l2 {
                        let s: Complex64 = grid.integrate(|e| {
                            so3_y(HalfInt::from_int(l), HalfInt::from_int(m), e).unwrap()
                                * so3_y(HalfInt::from_int(l2), HalfInt::from_int(m2), e).unwrap().conj()
                        });
                        let want = if (l, m) == (l2, m2) { 1.0 } else { 0.0 };
                        assert!((s - want).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn state_json_schema() {
        let s = SpinState::new(1, vec![c(1.0, 0.0), c(0.0, -2.0)]).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"two_j":1,"coeffs":[[1.0,0.0],[0.0,-2.0]]}"#);
        let back: SpinState = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert!(SpinState::new(2, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn left_translation_acts_by_d() {
        // (U(h)ψ)(g) = ψ(h⁻¹g) has coefficients D^j(h) C
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for t in 0..=4 {
            let psi = SpinState::random(t, &mut rng);
            let hh = Su2Element::random(&mut rng);
            let g = Su2Element::random(&mut rng);
            let lhs = psi.eval(&hh.inverse().compose(&g));
            let rhs = psi.rotated(&hh).eval(&g);
            assert!((lhs - rhs).norm() < 1e-12, "2j={t}");
        }
    }
}
