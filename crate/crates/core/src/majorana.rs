//! Majorana constellations of spin-`j` states.
//!
//! A state `ψ = Σ C_m Y_{jm}` factors as `√((2j+1)!) ξ^{2j} p(ζ)` with `ζ = η/ξ` and
//!
//! ```text
//! p(ζ) = Σ_m (−1)^{j−m} C_m ζ^{j+m} / √((j+m)!(j−m)!)
//! ```
//!
//! The `2j` roots of `p` (with `2j − deg p` of them at infinity) are its constellation.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::Su2Element;
use crate::schwinger_basis::SpinState;
use crate::wigner::ln_factorial;

/// Roots beyond this modulus are candidates for the point at infinity.
pub const FAR_ROOT: f64 = 1e8;
/// Relative size of the leading coefficient below which far roots go to infinity.
pub const LEADING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(pub [f64; 3]);

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint([0.0, 0.0, 1.0]);
    pub const SOUTH: SpherePoint = SpherePoint([0.0, 0.0, -1.0]);

    pub fn great_circle_distance(&self, other: &SpherePoint) -> f64 {
        let (a, b) = (self.0, other.0);
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let s = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        let c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        s.atan2(c)
    }

    pub fn rotated(&self, r: &crate::group_core::RotationMatrix) -> SpherePoint {
        let v = r * nalgebra::Vector3::from(self.0);
        SpherePoint([v[0], v[1], v[2]])
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stereo {
    Finite(Complex64),
    Infinity,
}

/// `ζ = e^{iα} tan β/2` ↦ the point with polar angle `β` and azimuth `α`.
pub fn stereographic_to_sphere(zeta: Stereo) -> SpherePoint {
    let z = match zeta {
        Stereo::Infinity => return SpherePoint::SOUTH,
        Stereo::Finite(z) => z,
    };
    let r = z.norm();
    if r == 0.0 {
        return SpherePoint::NORTH;
    }
    // work with min(r, 1/r) to stay finite for huge roots
    let (cos_beta, sin_beta) = if r <= 1.0 {
        ((1.0 - r * r) / (1.0 + r * r), 2.0 * r / (1.0 + r * r))
    } else {
        let u = 1.0 / r;
        ((u * u - 1.0) / (u * u + 1.0), 2.0 * u / (1.0 + u * u))
    };
    let dir = z / r;
    SpherePoint([sin_beta * dir.re, sin_beta * dir.im, cos_beta])
}

pub fn sphere_to_stereographic(p: &SpherePoint) -> Stereo {
    let [x, y, z] = p.0;
    if z <= -1.0 || (1.0 + z) == 0.0 {
        return Stereo::Infinity;
    }
    if z < 0.0 {
        // (x+iy)/(1+z) = (1−z)/(x−iy), better conditioned near the South pole
        let w = Complex64::new(x, -y);
        if w.norm() == 0.0 {
            return Stereo::Infinity;
        }
        return Stereo::Finite(Complex64::new(1.0 - z, 0.0) / w);
    }
    Stereo::Finite(Complex64::new(x, y) / (1.0 + z))
}

/// Unordered multiset of `2j` points: finite roots plus a count at infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub two_j: i64,
    #[serde(with = "crate::serde_complex")]
    pub finite_roots: Vec<Complex64>,
    #[serde(rename = "points_at_infinity")]
    pub infinity_count: usize,
}

impl Constellation {
    pub fn new(two_j: i64, finite_roots: Vec<Complex64>, infinity_count: usize) -> Result<Self> {
        if two_j < 0 || finite_roots.len() + infinity_count != two_j as usize {
            return Err(Error::Argument("roots plus points at infinity must number 2j".into()));
        }
        Ok(Constellation { two_j, finite_roots, infinity_count })
    }

    pub fn sphere_points(&self) -> Vec<SpherePoint> {
        self.finite_roots
            .iter()
            .map(|&z| stereographic_to_sphere(Stereo::Finite(z)))
            .chain(std::iter::repeat_n(SpherePoint::SOUTH, self.infinity_count))
            .collect()
    }

    /// Number of roots exactly at `ζ = 0`.
    pub fn zero_count(&self) -> usize {
        self.finite_roots.iter().filter(|z| z.norm() == 0.0).count()
    }

    pub fn distance(&self, other: &Constellation) -> Result<f64> {
        matching_distance(&self.sphere_points(), &other.sphere_points())
    }

    /// Stereographic scatter: northern points in the left disk at `ζ`, southern in the right at `1/ζ̄`.
    pub fn to_svg(&self) -> String {
        let (r, pad) = (100.0, 20.0);
        let mut s = String::new();
        let w = 4.0 * r + 3.0 * pad;
        let h = 2.0 * r + 2.0 * pad;
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let centers = [(pad + r, pad + r), (2.0 * pad + 3.0 * r, pad + r)];
        for (cx, cy) in centers {
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black"/>"#);
        }
        for p in self.sphere_points() {
            let (k, plane) = match sphere_to_stereographic(&p) {
                Stereo::Finite(z) if z.norm() <= 1.0 => (0, z),
                Stereo::Finite(z) => (1, Complex64::new(1.0, 0.0) / z.conj()),
                Stereo::Infinity => (1, Complex64::new(0.0, 0.0)),
            };
            let (cx, cy) = centers[k];
            let _ = writeln!(
                s,
                r#"<circle cx="{:.6}" cy="{:.6}" r="3" fill="crimson"/>"#,
                cx + r * plane.re,
                cy - r * plane.im
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Coefficients `c_k` of `ζ^k`, `k = 0..2j`.
pub fn majorana_polynomial(psi: &SpinState) -> Vec<Complex64> {
    let t = psi.two_j as usize;
    let mut c = vec![Complex64::new(0.0, 0.0); t + 1];
    for (a, &cm) in psi.coeffs.iter().enumerate() {
        // m = j − a: j + m = t − a, j − m = a
        let k = t - a;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let scale = (-0.5 * (ln_factorial(k) + ln_factorial(a))).exp();
        c[k] = cm * (sign * scale);
    }
    c
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// Roots of `Σ c_k ζ^k` (nonzero leading and constant terms) via the companion matrix.
fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = c[n];
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    let eig = comp.schur().eigenvalues().expect("complex Schur form is triangular");
    eig.iter()
        .map(|&z| {
            let (p, dp) = horner(c, z);
            if dp.norm() > 0.0 {
                let step = p / dp;
                let polished = z - step;
                if polished.is_finite() && horner(c, polished).0.norm() <= p.norm() {
                    return polished;
                }
            }
            z
        })
        .collect()
}

pub fn state_to_constellation(psi: &SpinState) -> Result<Constellation> {
    let c = majorana_polynomial(psi);
    let t = psi.two_j as usize;
    let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return Err(Error::Argument("state must be a nonzero finite vector".into()));
    }
    let hi = (0..=t).rev().find(|&k| c[k].norm() > 0.0).expect("nonzero");
    let lo = (0..=t).find(|&k| c[k].norm() > 0.0).expect("nonzero");
    let mut infinity_count = t - hi;
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let leading_small = c[hi].norm() < LEADING_TOL * max;
    for z in polynomial_roots(&c[lo..=hi]) {
        if !z.is_finite() || (z.norm() > FAR_ROOT && leading_small) {
            infinity_count += 1;
        } else {
            roots.push(z);
        }
    }
    Constellation::new(psi.two_j, roots, infinity_count)
}

/// Unit-norm state whose first nonzero coefficient (from `m = j` down) is real positive.
pub fn constellation_to_state(c: &Constellation) -> SpinState {
    let t = c.two_j as usize;
    // ∏ (ζ − ζ_k), lowest power first
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &z in &c.finite_roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, &a) in poly.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z;
        }
        poly = next;
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); t + 1];
    for (k, &pk) in poly.iter().enumerate() {
        // ζ^k carries m with j + m = k, i.e. index a = t − k
        let a = t - k;
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let scale = (0.5 * (ln_factorial(k) + ln_factorial(a))).exp();
        coeffs[a] = pk * (sign * scale);
    }
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let first = coeffs.iter().find(|z| z.norm() > 0.0).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = first.conj() / first.norm();
    SpinState { two_j: c.two_j, coeffs: coeffs.into_iter().map(|z| z * phase / norm).collect() }
}

/// Image of the constellation under the Möbius action `ζ ↦ (η + ξ*ζ)/(ξ − η*ζ)` of `g`.
pub fn rotate_constellation(g: &Su2Element, c: &Constellation) -> Constellation {
    let (a, b) = (g.xi, g.eta);
    let mut roots = Vec::with_capacity(c.finite_roots.len() + c.infinity_count);
    let mut infinity = 0;
    let mut push = |z: Stereo| match z {
        Stereo::Finite(z) => roots.push(z),
        Stereo::Infinity => infinity += 1,
    };
    for &z in &c.finite_roots {
        let den = a - b.conj() * z;
        if den.norm() == 0.0 {
            push(Stereo::Infinity);
        } else {
            push(Stereo::Finite((b + a.conj() * z) / den));
        }
    }
    for _ in 0..c.infinity_count {
        if b.norm() == 0.0 {
            push(Stereo::Infinity);
        } else {
            push(Stereo::Finite(-a.conj() / b.conj()));
        }
    }
    Constellation { two_j: c.two_j, finite_roots: roots, infinity_count: infinity }
}

/// Total great-circle length of the minimum-weight perfect matching between two multisets.
pub fn matching_distance(a: &[SpherePoint], b: &[SpherePoint]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Argument("multisets must have equal size".into()));
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|p| b.iter().map(|q| p.great_circle_distance(q)).collect()).collect();
    Ok(min_cost_assignment(&cost))
}

/// Hungarian algorithm with potentials, `O(n³)`.
fn min_cost_assignment(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n == 0 {
        return 0.0;
    }
    // 1-based arrays; p[j] is the row matched to column j
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}
