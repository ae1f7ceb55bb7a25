//! SU(n) fundamentals, their branching to SU(n−1), and SU(3) irrep combinatorics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half_int::HalfInt;

/// Rank-`p` antisymmetric tensor irrep of SU(n); `p = 0` is the trivial irrep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FundamentalLabel {
    pub n: u32,
    pub p: u32,
}

impl FundamentalLabel {
    pub fn new(n: u32, p: u32) -> Result<Self> {
        if n < 2 || p > n - 1 {
            return Err(Error::Argument(format!("need n ≥ 2 and 0 ≤ p ≤ n−1, got n={n}, p={p}")));
        }
        Ok(FundamentalLabel { n, p })
    }

    /// `C(n, p)`.
    pub fn dimension(&self) -> u64 {
        let (n, p) = (self.n as u64, self.p as u64);
        (0..p).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }
}

impl std::fmt::Display for FundamentalLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.dimension();
        // the conjugate of a same-dimension label gets a star
        if self.p > 0 && 2 * self.p > self.n {
            write!(f, "{d}*")
        } else {
            write!(f, "{d}")
        }
    }
}

fn check_fundamental(n: u32, p: u32) -> Result<()> {
    if n < 2 || p < 1 || p > n - 1 {
        return Err(Error::Argument(format!("need n ≥ 2 and 1 ≤ p ≤ n−1, got n={n}, p={p}")));
    }
    Ok(())
}

pub fn fundamental_conjugate(n: u32, p: u32) -> Result<FundamentalLabel> {
    check_fundamental(n, p)?;
    FundamentalLabel::new(n, n - p)
}

/// `p⁽ⁿ⁾ → p⁽ⁿ⁻¹⁾ ⊕ (p−1)⁽ⁿ⁻¹⁾`, with rank `n−1` over SU(n−1) written as the trivial label 0.
pub fn branch_fundamental(n: u32, p: u32) -> Result<Vec<FundamentalLabel>> {
    if n < 3 {
        return Err(Error::Argument(format!("branching needs n ≥ 3, got {n}")));
    }
    check_fundamental(n, p)?;
    let m = n - 1;
    let upper = if p == m { 0 } else { p };
    Ok(vec![FundamentalLabel { n: m, p: upper }, FundamentalLabel { n: m, p: p - 1 }])
}

/// SU(n−1) labels occurring exactly once in every fundamental of SU(n).
pub fn once_irrep_intersection(n: u32) -> Result<Vec<FundamentalLabel>> {
    let mut common: Option<Vec<FundamentalLabel>> = None;
    for p in 1..n {
        let mut counts: BTreeMap<FundamentalLabel, usize> = BTreeMap::new();
        for l in branch_fundamental(n, p)? {
            *counts.entry(l).or_default() += 1;
        }
        let once: Vec<FundamentalLabel> = counts.into_iter().filter(|&(_, c)| c == 1).map(|(l, _)| l).collect();
        common = Some(match common {
            None => once,
            Some(prev) => prev.into_iter().filter(|l| once.contains(l)).collect(),
        });
    }
    Ok(common.unwrap_or_default())
}

/// A witness from [`once_irrep_intersection`], preferring the trivial label.
pub fn common_once_irrep(n: u32) -> Result<Option<FundamentalLabel>> {
    Ok(once_irrep_intersection(n)?.into_iter().min_by_key(|l| l.p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Su3Irrep {
    pub p: u32,
    pub q: u32,
}

impl Su3Irrep {
    pub fn dimension(&self) -> u64 {
        su3_dimension(self.p, self.q)
    }
}

pub fn su3_dimension(p: u32, q: u32) -> u64 {
    let (p, q) = (p as u64, q as u64);
    (p + 1) * (q + 1) * (p + q + 2) / 2
}

/// One isospin multiplet; `Y = three_y / 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultipletEntry {
    pub r: u32,
    pub s: u32,
    #[serde(rename = "two_I")]
    pub two_i: i64,
    #[serde(rename = "three_Y")]
    pub three_y: i64,
}

impl MultipletEntry {
    pub fn isospin(&self) -> HalfInt {
        HalfInt::from_twice(self.two_i)
    }

    pub fn hypercharge(&self) -> f64 {
        self.three_y as f64 / 3.0
    }

    pub fn size(&self) -> u64 {
        self.two_i as u64 + 1
    }
}

fn multiplet(p: u32, q: u32, r: u32, s: u32) -> MultipletEntry {
    MultipletEntry {
        r,
        s,
        two_i: (r + s) as i64,
        three_y: 3 * (r as i64 - s as i64) + 2 * (q as i64 - p as i64),
    }
}

pub fn su3_multiplets(p: u32, q: u32) -> Vec<MultipletEntry> {
    (0..=p).flat_map(|r| (0..=q).map(move |s| multiplet(p, q, r, s))).collect()
}

/// A single weight state `(I, I₃, Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Su3State {
    #[serde(flatten)]
    pub multiplet: MultipletEntry,
    #[serde(rename = "two_I3")]
    pub two_i3: i64,
}

pub fn su3_states(p: u32, q: u32) -> Vec<Su3State> {
    su3_multiplets(p, q)
        .into_iter()
        .flat_map(|m| (0..=m.two_i).map(move |k| Su3State { multiplet: m, two_i3: m.two_i - 2 * k }))
        .collect()
}

/// `I = I₃ = p/2`, `Y = (p+2q)/3`.
pub fn su3_highest_weight(p: u32, q: u32) -> Su3State {
    let m = multiplet(p, q, p, 0);
    Su3State { multiplet: m, two_i3: m.two_i }
}

/// The highest state is the unique lexicographic maximum of `(Y, I₃)` over all states.
pub fn su3_highest_is_maximal(p: u32, q: u32) -> bool {
    let hw = su3_highest_weight(p, q);
    let key = |s: &Su3State| (s.multiplet.three_y, s.two_i3);
    let states = su3_states(p, q);
    let top = states.iter().map(key).max().expect("nonempty");
    top == key(&hw) && states.iter().filter(|s| key(s) == top).count() == 1
}

/// Number of multiplets with `I = 0`.
pub fn su3_singlet_count(p: u32, q: u32) -> usize {
    su3_multiplets(p, q).iter().filter(|m| m.two_i == 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u32, p: u32) -> FundamentalLabel {
        FundamentalLabel { n, p }
    }

    #[test]
    fn conjugates() {
        assert_eq!(fundamental_conjugate(4, 1).unwrap(), f(4, 3));
        assert_eq!(fundamental_conjugate(2, 1).unwrap(), f(2, 1));
        assert_eq!(fundamental_conjugate(5, 2).unwrap(), f(5, 3));
        assert!(fundamental_conjugate(4, 0).is_err());
        assert!(fundamental_conjugate(4, 4).is_err());
        assert!(fundamental_conjugate(1, 1).is_err());
    }

    #[test]
    fn labels_and_names() {
        let names: Vec<String> = (1..4).map(|p| f(4, p).to_string()).collect();
        assert_eq!(names, ["4", "6", "4*"]);
        assert_eq!(f(3, 0).to_string(), "1");
        assert_eq!(f(8, 4).dimension(), 70);
        assert!(FundamentalLabel::new(3, 3).is_err());
    }

    #[test]
    fn branching_examples() {
        let dims = |n, p| -> Vec<String> { branch_fundamental(n, p).unwrap().iter().map(|l| l.to_string()).collect() };
        assert_eq!(dims(4, 1), ["3", "1"]);
        assert_eq!(dims(4, 2), ["3*", "3"]);
        assert_eq!(dims(4, 3), ["1", "3*"]);
        assert_eq!(dims(3, 1), ["2", "1"]);
        assert_eq!(dims(3, 2), ["1", "2"]);
        assert_eq!(branch_fundamental(5, 2).unwrap(), vec![f(4, 2), f(4, 1)]);
        assert!(branch_fundamental(2, 1).is_err());
        assert!(branch_fundamental(4, 4).is_err());
    }

    #[test]
    fn branching_dimensions_add_up() {
        for n in 3..=12 {
            for p in 1..n {
                let total: u64 = branch_fundamental(n, p).unwrap().iter().map(|l| l.dimension()).sum();
                assert_eq!(total, f(n, p).dimension());
            }
        }
    }

    #[test]
    fn obstruction() {
        assert_eq!(once_irrep_intersection(3).unwrap(), vec![f(2, 0), f(2, 1)]);
        assert_eq!(common_once_irrep(3).unwrap(), Some(f(2, 0)));
        for n in 4..=8 {
            assert_eq!(common_once_irrep(n).unwrap(), None, "n={n}");
        }
    }

    #[test]
    fn su3_examples() {
        assert_eq!(su3_dimension(0, 0), 1);
        assert_eq!(su3_dimension(1, 1), 8);
        assert_eq!(su3_dimension(1, 0), 3);
        assert_eq!(su3_dimension(0, 1), 3);
        assert_eq!(su3_multiplets(0, 0), vec![MultipletEntry { r: 0, s: 0, two_i: 0, three_y: 0 }]);
        let m = su3_multiplets(1, 0);
        assert_eq!(m.len(), 2);
        assert!(m.contains(&MultipletEntry { r: 1, s: 0, two_i: 1, three_y: 1 }));
        assert!(m.contains(&MultipletEntry { r: 0, s: 0, two_i: 0, three_y: -2 }));
        let hw = su3_highest_weight(1, 0);
        assert_eq!((hw.multiplet.two_i, hw.two_i3, hw.multiplet.three_y), (1, 1, 1));
        let hw = su3_highest_weight(2, 3);
        assert_eq!((hw.multiplet.two_i, hw.two_i3, hw.multiplet.three_y), (2, 2, 8));
        let hw = su3_highest_weight(0, 0);
        assert_eq!((hw.multiplet.two_i, hw.two_i3, hw.multiplet.three_y), (0, 0, 0));
    }

    #[test]
    fn su3_tables() {
        for p in 0..=6 {
            for q in 0..=6 {
                let ms = su3_multiplets(p, q);
                assert_eq!(ms.iter().map(|m| m.size()).sum::<u64>(), su3_dimension(p, q));
                assert_eq!(su3_states(p, q).len() as u64, su3_dimension(p, q));
                assert_eq!(su3_singlet_count(p, q), 1);
                assert_eq!(su3_dimension(p, q), su3_dimension(q, p));
                let mut mirror: Vec<(i64, i64)> = su3_multiplets(q, p).iter().map(|m| (m.two_i, -m.three_y)).collect();
                let mut here: Vec<(i64, i64)> = ms.iter().map(|m| (m.two_i, m.three_y)).collect();
                mirror.sort();
                here.sort();
                assert_eq!(here, mirror);
                assert!(su3_highest_is_maximal(p, q));
                // hypercharge sums to zero over the irrep
                let ysum: i64 = ms.iter().map(|m| m.three_y * (m.two_i + 1)).sum();
                assert_eq!(ysum, 0);
            }
        }
    }

    #[test]
    fn highest_is_only_state_without_raisings() {
        // A¹₂ raises I₃ inside a multiplet; A²₃ moves to (r+1, s) or (r, s−1) with I₃ − ½
        for p in 0..=5 {
            for q in 0..=5 {
                let ms = su3_multiplets(p, q);
                let has = |r: i64, s: i64, two_i3: i64| {
                    ms.iter().any(|m| m.r as i64 == r && m.s as i64 == s && two_i3.abs() <= m.two_i)
                };
                let top: Vec<Su3State> = su3_states(p, q)
                    .into_iter()
                    .filter(|st| {
                        let (r, s) = (st.multiplet.r as i64, st.multiplet.s as i64);
                        st.two_i3 == st.multiplet.two_i && !has(r + 1, s, st.two_i3 - 1) && !has(r, s - 1, st.two_i3 - 1)
                    })
                    .collect();
                assert_eq!(top, vec![su3_highest_weight(p, q)]);
            }
        }
    }

    #[test]
    fn multiplet_json() {
        let js = serde_json::to_string(&su3_multiplets(1, 0)).unwrap();
        assert_eq!(js, r#"[{"r":0,"s":0,"two_I":0,"three_Y":-2},{"r":1,"s":0,"two_I":1,"three_Y":1}]"#);
        let hw = serde_json::to_string(&su3_highest_weight(1, 0)).unwrap();
        assert_eq!(hw, r#"{"r":1,"s":0,"two_I":1,"three_Y":1,"two_I3":1}"#);
    }
}
