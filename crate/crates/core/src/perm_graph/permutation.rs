use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest n whose factorial fits in a `u64`.
pub const MAX_RANKABLE_N: usize = 20;

/// `n!` as a `u64`. Panics past [`MAX_RANKABLE_N`].
pub fn factorial(n: usize) -> u64 {
    assert!(n <= MAX_RANKABLE_N, "{n}! overflows u64");
    (1..=n as u64).product()
}

/// Number of pairs `i < j` with `s[i] > s[j]`.
pub fn inversions<T: Ord>(s: &[T]) -> usize {
    let mut count = 0;
    for (i, x) in s.iter().enumerate() {
        count += s[i + 1..].iter().filter(|y| x > *y).count();
    }
    count
}

/// A vertex label of the bubble-sort graph: an arrangement of the symbols `1..=n`.
///
/// Labels print as concatenated digits for `n <= 9` (`"125634"`) and as a
/// comma-separated list otherwise. Both forms parse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let n = entries.len();
        if n < 2 {
            return Err(Error::InvalidPermutation(format!(
                "length {n}; need at least 2 symbols"
            )));
        }
        if n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("length {n} too large")));
        }
        let mut seen = vec![false; n + 1];
        for &x in &entries {
            let x = x as usize;
            if x == 0 || x > n {
                return Err(Error::InvalidPermutation(format!(
                    "symbol {x} outside 1..={n}"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("symbol {x} repeated")));
            }
            seen[x] = true;
        }
        Ok(Self(entries))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    /// Swap entries at 0-based positions `i` and `i + 1`.
    pub fn swap_adjacent(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i, i + 1);
        Self(v)
    }

    /// The `n - 1` bubble-sort neighbours, ordered by swap position.
    pub fn neighbors(&self) -> Vec<Self> {
        (0..self.len() - 1).map(|i| self.swap_adjacent(i)).collect()
    }

    pub fn is_adjacent(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let diff: Vec<usize> = (0..self.len())
            .filter(|&i| self.0[i] != other.0[i])
            .collect();
        diff.len() == 2
            && diff[1] == diff[0] + 1
            && self.0[diff[0]] == other.0[diff[1]]
            && self.0[diff[1]] == other.0[diff[0]]
    }

    /// Lehmer code: entry `i` counts later entries smaller than entry `i`.
    pub fn lehmer_code(&self) -> Vec<u8> {
        let p = &self.0;
        (0..p.len())
            .map(|i| p[i + 1..].iter().filter(|&&y| y < p[i]).count() as u8)
            .collect()
    }

    /// Position in lexicographic order, starting from 0 for the identity.
    pub fn rank(&self) -> u64 {
        let n = self.len();
        self.lehmer_code()
            .iter()
            .enumerate()
            .map(|(i, &c)| c as u64 * factorial(n - 1 - i))
            .sum()
    }

    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        if !(2..=MAX_RANKABLE_N).contains(&n) {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 2,
                max: MAX_RANKABLE_N,
            });
        }
        if rank >= factorial(n) {
            return Err(Error::InvalidPermutation(format!("rank {rank} >= {n}!")));
        }
        Ok(unrank_unchecked(n, rank))
    }

    /// Ranks of [`Self::neighbors`], in the same order, without re-ranking each one.
    pub fn neighbor_ranks(&self) -> Vec<u64> {
        let n = self.len();
        let code = self.lehmer_code();
        let rank = self.rank() as i128;
        (0..n - 1)
            .map(|i| {
                let (x, y) = (self.0[i], self.0[i + 1]);
                let new_i = code[i + 1] as i128 + i128::from(x < y);
                let new_next = code[i] as i128 - i128::from(y < x);
                let delta = (new_i - code[i] as i128) * factorial(n - 1 - i) as i128
                    + (new_next - code[i + 1] as i128) * factorial(n - 2 - i) as i128;
                (rank + delta) as u64
            })
            .collect()
    }

    /// The subsequence of symbols `1..=4`, in order of appearance.
    pub fn pattern_of(&self) -> Result<[u8; 4]> {
        if self.len() < 4 {
            return Err(Error::DimensionOutOfRange {
                n: self.len(),
                min: 4,
                max: u8::MAX as usize,
            });
        }
        let mut out = [0u8; 4];
        let mut k = 0;
        for &x in &self.0 {
            if x <= 4 {
                out[k] = x;
                k += 1;
            }
        }
        Ok(out)
    }

    /// Membership in the canonical sixth `B'_n`: the symbols 1..4 appear in one
    /// of the four orders obtained by inserting 4 into `1 2 3`.
    pub fn in_bprime(&self) -> Result<bool> {
        let pattern = self.pattern_of()?;
        Ok(PatternClass::CANONICAL_PATTERNS.contains(&pattern))
    }

    /// Order of appearance of the symbols 1, 2, 3.
    pub fn order_of_123(&self) -> [u8; 3] {
        let mut out = [0u8; 3];
        let mut k = 0;
        for &x in &self.0 {
            if x <= 3 {
                out[k] = x;
                k += 1;
            }
        }
        out
    }

    /// `v^1, ..., v^{n+1}`: the symbol `n + 1` inserted before position 1, 2, ..., n + 1.
    pub fn expand(&self) -> Vec<Self> {
        let n = self.len();
        let top = (n + 1) as u8;
        (0..=n)
            .map(|i| {
                let mut v = Vec::with_capacity(n + 1);
                v.extend_from_slice(&self.0[..i]);
                v.push(top);
                v.extend_from_slice(&self.0[i..]);
                Self(v)
            })
            .collect()
    }

    /// Apply a symbol map: `map[s - 1]` replaces symbol `s`.
    pub fn relabel(&self, map: &[u8]) -> Self {
        debug_assert_eq!(map.len(), self.len());
        Self(self.0.iter().map(|&s| map[s as usize - 1]).collect())
    }
}

pub(crate) fn unrank_unchecked(n: usize, mut rank: u64) -> Permutation {
    let mut pool: Vec<u8> = (1..=n as u8).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        let digit = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(digit));
    }
    Permutation(out)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Result<Vec<u8>> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {t:?}")))
                })
                .collect()
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit {c:?}")))
                })
                .collect()
        };
        Self::new(entries?)
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<u8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// One of the six relative orders of the symbols 1, 2, 3, together with the
/// four length-4 patterns that realise it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternClass {
    order: [u8; 3],
}

impl PatternClass {
    pub const CANONICAL_PATTERNS: [[u8; 4]; 4] =
        [[1, 2, 3, 4], [1, 2, 4, 3], [1, 4, 2, 3], [4, 1, 2, 3]];

    pub fn canonical() -> Self {
        Self { order: [1, 2, 3] }
    }

    /// All six classes, ordered lexicographically by their order of 1, 2, 3.
    pub fn all() -> Vec<Self> {
        const ORDERS: [[u8; 3]; 6] = [
            [1, 2, 3],
            [1, 3, 2],
            [2, 1, 3],
            [2, 3, 1],
            [3, 1, 2],
            [3, 2, 1],
        ];
        ORDERS.iter().map(|&order| Self { order }).collect()
    }

    pub fn of(p: &Permutation) -> Self {
        Self {
            order: p.order_of_123(),
        }
    }

    pub fn order(&self) -> [u8; 3] {
        self.order
    }

    pub fn is_canonical(&self) -> bool {
        self.order == [1, 2, 3]
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.order_of_123() == self.order
    }

    /// The four patterns over {1,2,3,4}: insert 4 into each gap of the order,
    /// from the back to the front.
    pub fn member_patterns(&self) -> [[u8; 4]; 4] {
        let [a, b, c] = self.order;
        [[a, b, c, 4], [a, b, 4, c], [a, 4, b, c], [4, a, b, c]]
    }

    /// Symbol map on `1..=n` sending the canonical class onto this one:
    /// 1, 2, 3 go to the class order, everything else is fixed.
    pub fn relabeling(&self, n: usize) -> Vec<u8> {
        let mut map: Vec<u8> = (1..=n as u8).collect();
        map[..3].copy_from_slice(&self.order);
        map
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.order;
        write!(f, "{a}{b}{c}")
    }
}
