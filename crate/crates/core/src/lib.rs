//! Schwinger representation toolkit for SU(2), SO(3) and SU(3).

pub mod error;
pub mod group_core;
pub mod half_int;
pub mod majorana;
pub mod schwinger_basis;
mod serde_complex;
pub mod sun_structure;
pub mod verify;
pub mod wigner;
pub mod wigner_weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use group_core::{AxisAngle, EulerAngles, GroupTag, QuadratureGrid, RotationMatrix, Su2Element};
pub use half_int::HalfInt;
pub use wigner::{big_d, little_d, spin_matrices, CMatrix, Side, SpinGenerators, WignerMatrix};
pub use schwinger_basis::{SchwingerBasisFunction, SpinState};
pub use majorana::{Constellation, SpherePoint};
pub use sun_structure::{FundamentalLabel, MultipletEntry, Su3Irrep};
