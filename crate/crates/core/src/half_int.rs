//! Exact half-integer labels `j`, `m`, `n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A value in `½ℤ`, stored as twice the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 * 0.5
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// `2j + 1` for a label used as a spin.
    pub const fn dim(self) -> usize {
        (self.twice + 1) as usize
    }

    /// Projections `j, j-1, ..., -j`.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let j = self.twice;
        (0..self.dim()).map(move |k| HalfInt { twice: j - 2 * k as i64 })
    }

    /// Position of projection `m` in the descending order `j, ..., -j`.
    pub fn index_of(self, m: HalfInt) -> Option<usize> {
        if m.twice.abs() > self.twice || (self.twice - m.twice) % 2 != 0 {
            return None;
        }
        Some(((self.twice - m.twice) / 2) as usize)
    }

    /// Projection at position `a` of the descending order.
    pub fn projection_at(self, a: usize) -> HalfInt {
        HalfInt { twice: self.twice - 2 * a as i64 }
    }

    /// Whether `m` is a valid projection of the spin `self`.
    pub fn admits(self, m: HalfInt) -> bool {
        self.index_of(m).is_some()
    }

    /// Spins `0, 1/2, ..., j_max`.
    pub fn spins_up_to(j_max: HalfInt) -> impl Iterator<Item = HalfInt> {
        (0..=j_max.twice).map(HalfInt::from_twice)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + o.twice }
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - o.twice }
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-1`, `3/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Argument(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = s.parse::<i64>() {
            Ok(HalfInt::from_int(n))
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * x;
            if t.fract() != 0.0 || !t.is_finite() {
                return Err(bad());
            }
            Ok(HalfInt::from_twice(t as i64))
        }
    }
}
