//! SU(2) and SO(3) group arithmetic.
//!
//! Elements of SU(2) are stored as the first column `(ξ, η)` of
//!
//! ```text
//! g = ⎡ ξ  −η*⎤
//!     ⎣ η   ξ*⎦
//! ```
//!
//! Euler angles follow `g = e^{−iασ₃/2} e^{−iβσ₂/2} e^{−iγσ₃/2}`, with
//! `α ∈ [0, 2π)`, `β ∈ [0, π]` and `γ ∈ [0, 4π)` (`[0, 2π)` for SO(3)).

mod quadrature;

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadrature::{gauss_laguerre, gauss_legendre, haar_grid, QuadratureGrid};

const TWO_PI: f64 = 2.0 * PI;
const FOUR_PI: f64 = 4.0 * PI;

/// Distance from `−I` below which `log_map` and the midpoints refuse.
pub const ANTIPODE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    #[serde(rename = "SU2")]
    Su2,
    #[serde(rename = "SO3")]
    So3,
}

impl GroupTag {
    /// Length of the γ range.
    pub fn gamma_period(self) -> f64 {
        match self {
            GroupTag::Su2 => FOUR_PI,
            GroupTag::So3 => TWO_PI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        EulerAngles { alpha, beta, gamma }
    }

    pub fn validate(&self, tag: GroupTag) -> Result<()> {
        let EulerAngles { alpha, beta, gamma } = *self;
        if !(0.0..TWO_PI).contains(&alpha) {
            return Err(Error::Range(format!("alpha = {alpha} not in [0, 2π)")));
        }
        if !(0.0..=PI).contains(&beta) {
            return Err(Error::Range(format!("beta = {beta} not in [0, π]")));
        }
        if !(0.0..tag.gamma_period()).contains(&gamma) {
            return Err(Error::Range(format!("gamma = {gamma} not in [0, {})", tag.gamma_period())));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Element {
    pub xi: Complex64,
    pub eta: Complex64,
}

impl Su2Element {
    pub const IDENTITY: Su2Element = Su2Element {
        xi: Complex64::new(1.0, 0.0),
        eta: Complex64::new(0.0, 0.0),
    };

    /// Builds an element from an arbitrary nonzero pair, normalizing it.
    pub fn normalized(xi: Complex64, eta: Complex64) -> Self {
        let r = (xi.norm_sqr() + eta.norm_sqr()).sqrt();
        Su2Element { xi: xi / r, eta: eta / r }
    }

    /// Haar-distributed element (uniform on S³).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        use rand::distr::Distribution;
        let normal = StandardNormal;
        let v: [f64; 4] = std::array::from_fn(|_| normal.sample(rng));
        Su2Element::normalized(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
    }

    /// Diagonal element `e^{−iφσ₃/2}`.
    pub fn z_rotation(phi: f64) -> Self {
        Su2Element { xi: Complex64::from_polar(1.0, -0.5 * phi), eta: Complex64::new(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.xi.norm_sqr() + self.eta.norm_sqr()
    }

    /// Entries `[[a, b], [c, d]]` of the defining matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.xi, -self.eta.conj()], [self.eta, self.xi.conj()]]
    }

    /// Product `self · other`, renormalized.
    pub fn compose(&self, other: &Su2Element) -> Su2Element {
        let (x1, e1, x2, e2) = (self.xi, self.eta, other.xi, other.eta);
        Su2Element::normalized(x1 * x2 - e1.conj() * e2, e1 * x2 + x1.conj() * e2)
    }

    pub fn inverse(&self) -> Su2Element {
        Su2Element { xi: self.xi.conj(), eta: -self.eta }
    }

    pub fn neg(&self) -> Su2Element {
        Su2Element { xi: -self.xi, eta: -self.eta }
    }

    /// Largest entry difference of the defining matrices.
    pub fn distance(&self, other: &Su2Element) -> f64 {
        (self.xi - other.xi).norm().max((self.eta - other.eta).norm())
    }

    /// `(cos θ/2, sin θ/2 · n̂)` for `g = exp(−iθ n̂·σ/2)`.
    fn quaternion(&self) -> [f64; 4] {
        [self.xi.re, -self.eta.im, self.eta.re, -self.xi.im]
    }

    fn from_quaternion(q: [f64; 4]) -> Su2Element {
        Su2Element::normalized(Complex64::new(q[0], -q[3]), Complex64::new(q[2], -q[1]))
    }
}

/// Standard normal sampler (Box–Muller), kept local so `rand` alone suffices.
struct StandardNormal;

impl rand::distr::Distribution<f64> for StandardNormal {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u1: f64 = 1.0 - rng.random::<f64>();
        let u2: f64 = rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (TWO_PI * u2).cos()
    }
}

/// Exponential coordinates `g = exp(−iθ n̂·σ/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub theta: f64,
}

impl AxisAngle {
    pub fn new(axis: [f64; 3], theta: f64) -> Result<Self> {
        let r = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Argument("axis must be a nonzero finite vector".into()));
        }
        Ok(AxisAngle { axis: [axis[0] / r, axis[1] / r, axis[2] / r], theta })
    }

    /// From the vector `X = θ n̂`.
    pub fn from_vector(x: [f64; 3]) -> Self {
        let theta = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if theta == 0.0 {
            AxisAngle { axis: [0.0, 0.0, 1.0], theta: 0.0 }
        } else {
            AxisAngle { axis: [x[0] / theta, x[1] / theta, x[2] / theta], theta }
        }
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.axis[0] * self.theta, self.axis[1] * self.theta, self.axis[2] * self.theta]
    }
}

pub type RotationMatrix = Matrix3<f64>;

pub fn su2_from_euler(e: &EulerAngles) -> Result<Su2Element> {
    e.validate(GroupTag::Su2)?;
    Ok(su2_from_angles(e.alpha, e.beta, e.gamma))
}

/// Same as [`su2_from_euler`] without the range check.
pub fn su2_from_angles(alpha: f64, beta: f64, gamma: f64) -> Su2Element {
    let (s, c) = (0.5 * beta).sin_cos();
    Su2Element {
        xi: Complex64::from_polar(c, -0.5 * (alpha + gamma)),
        eta: Complex64::from_polar(s, 0.5 * (alpha - gamma)),
    }
}

/// Euler angles of `g`; at `β ∈ {0, π}` the whole phase goes into `γ`.
pub fn su2_to_euler(g: &Su2Element) -> EulerAngles {
    let (rx, re) = (g.xi.norm(), g.eta.norm());
    let beta = 2.0 * re.atan2(rx);
    let (alpha, gamma) = if re == 0.0 {
        (0.0, -2.0 * g.xi.arg())
    } else if rx == 0.0 {
        (0.0, -2.0 * g.eta.arg())
    } else {
        let alpha = wrap(g.eta.arg() - g.xi.arg(), TWO_PI);
        (alpha, -2.0 * g.xi.arg() - alpha)
    };
    EulerAngles { alpha, beta, gamma: wrap(gamma, FOUR_PI) }
}

/// Reduces `x` into `[0, period)`.
pub(crate) fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

pub fn compose(a: &Su2Element, b: &Su2Element) -> Su2Element {
    a.compose(b)
}

pub fn inverse(a: &Su2Element) -> Su2Element {
    a.inverse()
}

pub fn exp_map(x: &AxisAngle) -> Su2Element {
    let (s, c) = (0.5 * x.theta).sin_cos();
    let n = x.axis;
    Su2Element::from_quaternion([c, s * n[0], s * n[1], s * n[2]])
}

/// Inverse of [`exp_map`] with `θ ∈ [0, 2π)`; fails at `−I`.
pub fn log_map(g: &Su2Element) -> Result<AxisAngle> {
    let q = g.quaternion();
    let s = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    if s < ANTIPODE_TOL && q[0] < 0.0 {
        return Err(Error::Singularity("log_map at the antipode −I".into()));
    }
    if s == 0.0 {
        return Ok(AxisAngle { axis: [0.0, 0.0, 1.0], theta: 0.0 });
    }
    let theta = 2.0 * s.atan2(q[0]);
    Ok(AxisAngle { axis: [q[1] / s, q[2] / s, q[3] / s], theta })
}

/// Midpoint `s₀(g)` of the one-parameter subgroup through `g`, i.e. `(I + g)/‖I + g‖`.
pub fn midpoint_s0(g: &Su2Element) -> Result<Su2Element> {
    let q = g.quaternion();
    let p = [1.0 + q[0], q[1], q[2], q[3]];
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]).sqrt();
    if r < ANTIPODE_TOL {
        return Err(Error::Singularity("midpoint at the antipode −I".into()));
    }
    Ok(Su2Element::from_quaternion(p))
}

/// Geodesic midpoint `s(g₁, g₂) = g₁ s₀(g₁⁻¹ g₂)`.
pub fn midpoint_s(g1: &Su2Element, g2: &Su2Element) -> Result<Su2Element> {
    Ok(g1.compose(&midpoint_s0(&g1.inverse().compose(g2))?))
}

/// `R_z(α) R_y(β) R_z(γ)`, without range checks.
pub fn rotation_from_angles(alpha: f64, beta: f64, gamma: f64) -> RotationMatrix {
    let rz = |t: f64| {
        let (s, c) = t.sin_cos();
        Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
    };
    let (s, c) = beta.sin_cos();
    let ry = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c);
    rz(alpha) * ry * rz(gamma)
}

pub fn so3_from_euler(e: &EulerAngles) -> Result<RotationMatrix> {
    e.validate(GroupTag::So3)?;
    Ok(rotation_from_angles(e.alpha, e.beta, e.gamma))
}

/// The matrix `R(g)` with `g σ_s g⁻¹ = Σ_r R_{rs} σ_r`.
pub fn adjoint_rotation(g: &Su2Element) -> RotationMatrix {
    let [w, x, y, z] = g.quaternion();
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}
