//! Crossing counts in the mesh `M_{n,a}`.
//!
//! A mesh has `n` anchors `(0,1) .. (0,n)` on a vertical axis and `n - 2`
//! families of parallel semi-lines, one family per entry `k_i` of a
//! permutation `P` of `{2, .., n-1}`. Families `1..=a` go left, the rest go
//! right, and family `i` has a ray through every anchor except `(0, k_i)`.
//!
//! Counts come from the closed pairwise formula ([`pair_crossings`]); the
//! [`geometry`] submodule counts the same thing from explicit rays.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod geometry;

pub use geometry::{oracle_crossings, oracle_crossings_with_slopes, Crossing, Ray, RayFamily};

/// Smallest `n` a mesh is defined for.
pub const MIN_MESH_N: usize = 6;
/// Largest `n` [`exhaustive_max`] will enumerate (`9!` permutations).
pub const EXHAUSTIVE_MAX_N: usize = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct CrossingCount(pub u64);

impl CrossingCount {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for CrossingCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for CrossingCount {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sum for CrossingCount {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        Self(iter.map(|c| c.0).sum())
    }
}

/// The triple `(n, a, P)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMeshSpec", into = "RawMeshSpec")]
pub struct MeshSpec {
    n: usize,
    a: usize,
    lost: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawMeshSpec {
    n: usize,
    a: usize,
    #[serde(rename = "P")]
    p: Vec<u32>,
}

impl TryFrom<RawMeshSpec> for MeshSpec {
    type Error = Error;

    fn try_from(raw: RawMeshSpec) -> Result<Self> {
        MeshSpec::new(raw.n, raw.a, raw.p)
    }
}

impl From<MeshSpec> for RawMeshSpec {
    fn from(spec: MeshSpec) -> Self {
        RawMeshSpec {
            n: spec.n,
            a: spec.a,
            p: spec.lost,
        }
    }
}

impl MeshSpec {
    pub fn new(n: usize, a: usize, lost: Vec<u32>) -> Result<Self> {
        if n < MIN_MESH_N {
            return Err(Error::InvalidMesh(format!("n = {n} < {MIN_MESH_N}")));
        }
        if a > n - 2 {
            return Err(Error::InvalidMesh(format!("a = {a} > n - 2 = {}", n - 2)));
        }
        if lost.len() != n - 2 {
            return Err(Error::InvalidMesh(format!(
                "P has {} entries, expected {}",
                lost.len(),
                n - 2
            )));
        }
        let mut seen = vec![false; n + 1];
        for &k in &lost {
            if !(2..n as u32).contains(&k) {
                return Err(Error::InvalidMesh(format!("k = {k} outside 2..={}", n - 1)));
            }
            if std::mem::replace(&mut seen[k as usize], true) {
                return Err(Error::InvalidMesh(format!("k = {k} repeated")));
            }
        }
        Ok(Self { n, a, lost })
    }

    /// Left section and right section concatenated into `P`.
    pub fn from_sections(n: usize, left: &[u32], right: &[u32]) -> Result<Self> {
        Self::new(n, left.len(), left.iter().chain(right).copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// The full permutation `P = (k_1, .., k_{n-2})`.
    pub fn lost(&self) -> &[u32] {
        &self.lost
    }

    pub fn left(&self) -> &[u32] {
        &self.lost[..self.a]
    }

    pub fn right(&self) -> &[u32] {
        &self.lost[self.a..]
    }

    /// Side of the 0-based family `index`.
    pub fn side(&self, index: usize) -> Side {
        if index < self.a {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn is_sorted(&self) -> bool {
        self.left().is_sorted() && self.right().is_sorted()
    }

    /// Uniform `a` in `0..=n-2` and a uniformly shuffled `P`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n < MIN_MESH_N {
            return Err(Error::InvalidMesh(format!("n = {n} is below {MIN_MESH_N}")));
        }
        let a = rng.gen_range(0..=n - 2);
        let mut lost: Vec<u32> = (2..n as u32).collect();
        lost.shuffle(rng);
        Self::new(n, a, lost)
    }

    /// Every spec for `n`: each `a` in order, then each `P` lexicographically.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n > EXHAUSTIVE_MAX_N {
            return Err(Error::EnumerationGuard {
                n,
                max: EXHAUSTIVE_MAX_N,
            });
        }
        let values: Vec<u32> = (2..n as u32).collect();
        let perms: Vec<Vec<u32>> = values.iter().copied().permutations(values.len()).collect();
        (0..=n.saturating_sub(2))
            .flat_map(|a| perms.iter().map(move |p| Self::new(n, a, p.clone())))
            .collect()
    }
}

fn pair_value(n: usize, k1: u32, k2: u32) -> u64 {
    let (n, k1, k2) = (n as u64, k1 as u64, k2 as u64);
    let base = n * (n - 1) / 2 - (n - k2);
    if k1 < k2 {
        base - (k1 - 1)
    } else {
        base - (k1 - 2)
    }
}

/// Crossings between two same-side families, `k1` belonging to the
/// earlier-indexed one.
pub fn pair_crossings(n: usize, k1: u32, k2: u32) -> Result<CrossingCount> {
    if n < MIN_MESH_N {
        return Err(Error::InvalidMesh(format!("n = {n} < {MIN_MESH_N}")));
    }
    for k in [k1, k2] {
        if !(2..n as u32).contains(&k) {
            return Err(Error::InvalidMesh(format!("k = {k} outside 2..={}", n - 1)));
        }
    }
    if k1 == k2 {
        return Err(Error::InvalidMesh(format!("both families lose k = {k1}")));
    }
    Ok(CrossingCount(pair_value(n, k1, k2)))
}

fn section_total(n: usize, section: &[u32]) -> u64 {
    section
        .iter()
        .tuple_combinations()
        .map(|(&k1, &k2)| pair_value(n, k1, k2))
        .sum()
}

/// Sum of [`pair_crossings`] over same-side family pairs. Families on
/// opposite sides never meet.
pub fn total_crossings(spec: &MeshSpec) -> CrossingCount {
    CrossingCount(section_total(spec.n, spec.left()) + section_total(spec.n, spec.right()))
}

/// One adjacent-inversion swap made while sorting a mesh.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapStep {
    /// 0-based index into `P` of the first swapped entry.
    pub position: usize,
    /// `k_i` before the swap (the larger value).
    pub larger: u32,
    /// `k_{i+1}` before the swap.
    pub smaller: u32,
    pub before: CrossingCount,
    pub after: CrossingCount,
}

impl SwapStep {
    pub fn delta(&self) -> i64 {
        self.after.0 as i64 - self.before.0 as i64
    }

    /// The change predicted from the swapped pair alone: `2(k_i - k_{i+1}) - 1`.
    pub fn predicted_delta(&self) -> i64 {
        2 * (self.larger as i64 - self.smaller as i64) - 1
    }
}

#[derive(Clone, Debug)]
pub struct SortTrace {
    pub sorted: MeshSpec,
    pub swaps: Vec<SwapStep>,
}

/// Sort each section ascending by repeatedly swapping the first adjacent
/// inversion, recording the crossing total around every swap.
pub fn sort_spec(spec: &MeshSpec) -> SortTrace {
    let mut cur = spec.clone();
    let mut swaps = Vec::new();
    loop {
        let a = cur.a;
        let first = (0..cur.lost.len().saturating_sub(1))
            .find(|&i| (i + 1 != a) && cur.lost[i] > cur.lost[i + 1]);
        let Some(i) = first else { break };
        let before = total_crossings(&cur);
        let (larger, smaller) = (cur.lost[i], cur.lost[i + 1]);
        cur.lost.swap(i, i + 1);
        swaps.push(SwapStep {
            position: i,
            larger,
            smaller,
            before,
            after: total_crossings(&cur),
        });
    }
    SortTrace { sorted: cur, swaps }
}

/// The three closed-form cases for the largest mesh crossing count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshCase {
    /// `n = 2m`, `a = m - 1`.
    EvenBalanced,
    /// `n = 2m`, `a` is `m - 2` or `m`.
    EvenSkewed,
    /// `n = 2m - 1`, `a` is `m - 2` or `m - 1`.
    Odd,
}

impl MeshCase {
    /// Classify `(n, a)`, requiring `m >= 4`.
    pub fn classify(n: usize, a: usize) -> Result<Self> {
        let unsupported = Err(Error::UnsupportedMeshCase { n, a });
        if n % 2 == 0 {
            let m = n / 2;
            if m < 4 {
                return unsupported;
            }
            if a == m - 1 {
                Ok(Self::EvenBalanced)
            } else if a == m - 2 || a == m {
                Ok(Self::EvenSkewed)
            } else {
                unsupported
            }
        } else {
            let m = (n + 1) / 2;
            if m < 4 || !(a == m - 2 || a == m - 1) {
                return unsupported;
            }
            Ok(Self::Odd)
        }
    }

    /// `24 * max` as an integer polynomial in `n`.
    fn scaled_polynomial(self, n: i128) -> i128 {
        let (n2, n3, n4) = (n * n, n * n * n, n * n * n * n);
        match self {
            Self::EvenBalanced => 3 * n4 - 25 * n3 + 72 * n2 - 92 * n + 48,
            Self::EvenSkewed => 3 * n4 - 25 * n3 + 84 * n2 - 116 * n + 48,
            Self::Odd => 3 * n4 - 25 * n3 + 75 * n2 - 95 * n + 42,
        }
    }
}

fn evens(from: u32, to: u32) -> impl Iterator<Item = u32> {
    (from..=to).step_by(2)
}

/// The sorted permutation attaining the maximum in each supported case.
pub fn optimal_permutation(n: usize, a: usize) -> Result<MeshSpec> {
    MeshCase::classify(n, a)?;
    let top = n as u32 - 1;
    let (left, right): (Vec<u32>, Vec<u32>) = if n % 2 == 0 {
        let m = n / 2;
        // even values 2..n-2 and odd values 3..n-1
        let even: Vec<u32> = evens(2, top - 1).collect();
        let odd: Vec<u32> = evens(3, top).collect();
        let two_odd: Vec<u32> = std::iter::once(2).chain(odd.iter().copied()).collect();
        let even_from_four: Vec<u32> = evens(4, top - 1).collect();
        match a {
            x if x == m - 1 => (even, odd),
            x if x == m => (two_odd, even_from_four),
            _ => (even_from_four, two_odd),
        }
    } else {
        let m = (n + 1) / 2;
        let even: Vec<u32> = evens(2, top).collect();
        let odd: Vec<u32> = evens(3, top - 1).collect();
        if a == m - 1 {
            (even, odd)
        } else {
            (odd, even)
        }
    };
    MeshSpec::from_sections(n, &left, &right)
}

/// Closed-form maximum of [`total_crossings`] over all `P`, in exact
/// integer arithmetic.
pub fn mesh_max(n: usize, a: usize) -> Result<CrossingCount> {
    let case = MeshCase::classify(n, a)?;
    let scaled = case.scaled_polynomial(n as i128);
    if scaled % 24 != 0 || scaled < 0 {
        return Err(Error::NonInteger(format!(
            "mesh maximum for (n = {n}, a = {a}) evaluates to {scaled}/24"
        )));
    }
    Ok(CrossingCount((scaled / 24) as u64))
}

/// Maximum of [`total_crossings`] over every permutation of `{2, .., n-1}`,
/// with the lexicographically smallest maximising `P` as witness.
pub fn exhaustive_max(n: usize, a: usize) -> Result<(CrossingCount, MeshSpec)> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::EnumerationGuard {
            n,
            max: EXHAUSTIVE_MAX_N,
        });
    }
    if n < MIN_MESH_N || a > n - 2 {
        return Err(Error::InvalidMesh(format!("(n = {n}, a = {a})")));
    }
    let values: Vec<u32> = (2..n as u32).collect();
    let best = values
        .par_iter()
        .map(|&head| {
            let rest: Vec<u32> = values.iter().copied().filter(|&k| k != head).collect();
            let mut best: Option<(u64, Vec<u32>)> = None;
            let mut p = Vec::with_capacity(n - 2);
            // `permutations` yields lexicographic order on sorted input, so
            // keeping the first strict improvement keeps the smallest witness.
            for tail in rest.iter().copied().permutations(rest.len()) {
                p.clear();
                p.push(head);
                p.extend_from_slice(&tail);
                let total = section_total(n, &p[..a]) + section_total(n, &p[a..]);
                if best.as_ref().is_none_or(|(b, _)| total > *b) {
                    best = Some((total, p.clone()));
                }
            }
            best.expect("at least one permutation")
        })
        .reduce_with(|x, y| match x.0.cmp(&y.0) {
            std::cmp::Ordering::Greater => x,
            std::cmp::Ordering::Less => y,
            std::cmp::Ordering::Equal => {
                if x.1 <= y.1 {
                    x
                } else {
                    y
                }
            }
        })
        .expect("n >= 6");
    Ok((CrossingCount(best.0), MeshSpec::new(n, a, best.1)?))
}
