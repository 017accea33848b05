//! Exact evaluation of the crossing-count bound for `B_n`.
//!
//! Three independent routes give the same integers for every `n >= 7`:
//! iterating the per-step recurrences from `nu(D'_6) = 866`, the closed sum
//! over steps, and the factorial-squared bracket form. Nothing here touches
//! floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::mesh_max;

pub type ExactRational = BigRational;

/// Crossings in the drawing of `B_6` built by hand.
pub const NU_D6: u64 = 5196;
/// Crossings in the drawing of `B'_6`: one sixth of [`NU_D6`].
pub const NU_PRIME_D6: u64 = NU_D6 / 6;
/// Default upper limit for [`bound_table`].
pub const DEFAULT_TABLE_LIMIT: usize = 200;

/// An exact non-negative crossing count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn from_u64(v: u64) -> Self {
        Self(BigUint::from(v))
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    fn from_int(v: BigInt, what: &str) -> Result<Self> {
        v.to_biguint()
            .map(Self)
            .ok_or_else(|| Error::Invariant(format!("{what} is negative: {v}")))
    }

    fn to_int(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<BigUint>()
            .map(Self)
            .map_err(serde::de::Error::custom)
    }
}

/// Small-case constants: exact crossing numbers for `n <= 4` and the counts
/// of the hand-built drawings for `n = 5, 6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseValues {
    pub cr_b2: u64,
    pub cr_b3: u64,
    pub cr_b4: u64,
    /// Upper bound on `cr(B_5)`.
    pub cr_b5_upper: u64,
    pub nu_d6: u64,
    pub nu_prime_d6: u64,
}

impl BaseValues {
    pub fn entries(&self) -> [(&'static str, u64); 6] {
        [
            ("cr(B_2)", self.cr_b2),
            ("cr(B_3)", self.cr_b3),
            ("cr(B_4)", self.cr_b4),
            ("cr(B_5) upper", self.cr_b5_upper),
            ("nu(D_6)", self.nu_d6),
            ("nu(D'_6)", self.nu_prime_d6),
        ]
    }
}

pub fn base_values() -> BaseValues {
    BaseValues {
        cr_b2: 0,
        cr_b3: 0,
        cr_b4: 0,
        cr_b5_upper: 120,
        nu_d6: NU_D6,
        nu_prime_d6: NU_PRIME_D6,
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn exact_div(num: BigInt, den: BigInt, what: impl FnOnce() -> String) -> Result<BigInt> {
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonInteger(format!("{}: {num}/{den}", what())));
    }
    Ok(q)
}

fn poly(coeffs: &[i64], x: usize) -> BigInt {
    // highest degree first
    let x = BigInt::from(x);
    coeffs
        .iter()
        .fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
}

fn require_parity(n: usize, even: bool, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::DimensionOutOfRange {
            n,
            min,
            max: usize::MAX,
        });
    }
    if (n % 2 == 0) != even {
        return Err(Error::Parity {
            n,
            expected: if even { "even" } else { "odd" },
        });
    }
    Ok(())
}

/// Crossings added inside the replacement meshes going from even `n` to `n + 1`:
/// `n!/144 (3n^4 - 13n^3 + 18n^2 - 8n)`.
pub fn even_increment(n: usize) -> Result<BigCount> {
    require_parity(n, true, 6)?;
    let v = exact_div(
        factorial(n) * poly(&[3, -13, 18, -8, 0], n),
        BigInt::from(144),
        || format!("even increment at n = {n}"),
    )?;
    BigCount::from_int(v, "even increment")
}

/// Crossings added inside the replacement meshes going from odd `n` to `n + 1`:
/// `(n-1)!/144 (3n^5 - 13n^4 + 21n^3 - 17n^2 + 6)`.
pub fn odd_increment(n: usize) -> Result<BigCount> {
    require_parity(n, false, 7)?;
    let v = exact_div(
        factorial(n - 1) * poly(&[3, -13, 21, -17, 0, 6], n),
        BigInt::from(144),
        || format!("odd increment at n = {n}"),
    )?;
    BigCount::from_int(v, "odd increment")
}

/// The same increment rebuilt from mesh maxima: `n!/6` vertices each
/// contributing a worst-case mesh on `n + 1` anchors. At odd `n` the
/// vertices split `(n+1)/2 : (n-1)/2` between balanced and off-by-two states.
pub fn mesh_weighted_increment(n: usize) -> Result<ExactRational> {
    if n < 6 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 6,
            max: usize::MAX,
        });
    }
    let vertices = BigRational::from_integer(factorial(n)) / BigInt::from(6);
    let big = |c: crate::mesh::CrossingCount| BigRational::from_integer(BigInt::from(c.0));
    if n % 2 == 0 {
        // n + 1 = 2m - 1 with l(v) in {m - 2, m - 1}
        let m = (n + 2) / 2;
        let worst = mesh_max(n + 1, m - 1)?;
        if mesh_max(n + 1, m - 2)? != worst {
            return Err(Error::Invariant(format!(
                "odd-n mesh maxima differ at n + 1 = {}",
                n + 1
            )));
        }
        Ok(vertices * big(worst))
    } else {
        // n + 1 = 2m; balanced parents get a = m - 1, the others a in {m - 2, m}
        let m = (n + 1) / 2;
        let balanced = big(mesh_max(n + 1, m - 1)?);
        let skewed = big(mesh_max(n + 1, m)?);
        let weighted = balanced * BigInt::from((n + 1) / 2) + skewed * BigInt::from((n - 1) / 2);
        Ok(vertices * weighted / BigInt::from(n))
    }
}

fn checked_increment(n: usize, poly_value: BigCount) -> Result<BigCount> {
    let mesh = mesh_weighted_increment(n)?;
    if mesh != BigRational::from_integer(poly_value.to_int()) {
        return Err(Error::Invariant(format!(
            "increment at n = {n}: polynomial {poly_value} but mesh maxima give {mesh}"
        )));
    }
    Ok(poly_value)
}

/// `nu(D'_{n+1})` from `nu(D'_n)` for even `n`.
pub fn recurrence_even(n: usize, nu_prime: &BigCount) -> Result<BigCount> {
    let inc = checked_increment(n, even_increment(n)?)?;
    Ok(BigCount(&nu_prime.0 * BigUint::from(n * n) + inc.0))
}

/// `nu(D'_{n+1})` from `nu(D'_n)` for odd `n`.
pub fn recurrence_odd(n: usize, nu_prime: &BigCount) -> Result<BigCount> {
    let inc = checked_increment(n, odd_increment(n)?)?;
    Ok(BigCount(&nu_prime.0 * BigUint::from(n * n) + inc.0))
}

/// `nu(D'_n)`, iterating the recurrences up from `nu(D'_6)`.
pub fn nu_prime_dn(n: usize) -> Result<BigCount> {
    Ok(nu_prime_sequence(n)?.pop().expect("non-empty"))
}

/// `nu(D'_6), nu(D'_7), .., nu(D'_n)`.
pub fn nu_prime_sequence(n: usize) -> Result<Vec<BigCount>> {
    if n < 6 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 6,
            max: usize::MAX,
        });
    }
    let mut out = vec![BigCount::from_u64(NU_PRIME_D6)];
    for k in 6..n {
        let prev = out.last().expect("non-empty");
        let next = if k % 2 == 0 {
            recurrence_even(k, prev)?
        } else {
            recurrence_odd(k, prev)?
        };
        out.push(next);
    }
    Ok(out)
}

/// `nu(D_n) = 6 nu(D'_n)`.
pub fn nu_dn(n: usize) -> Result<BigCount> {
    Ok(BigCount(nu_prime_dn(n)?.0 * 6u32))
}

/// Closed sum over all steps from `D_6` to `D_n`.
pub fn closed_sum(n: usize) -> Result<BigCount> {
    if n < 7 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 7,
            max: usize::MAX,
        });
    }
    let top = factorial(n - 1);
    let lead = exact_div(top.clone(), factorial(5), || "((n-1)!/5!)".into())?;
    let mut total = &lead * &lead * BigInt::from(NU_D6);
    for i in 7..=n {
        let scale = exact_div(top.clone(), factorial(i - 1), || {
            format!("(n-1)!/(i-1)! at i = {i}")
        })?;
        let step = if i % 2 == 1 {
            factorial(i - 1) * poly(&[3, -25, 75, -95, 42], i)
        } else {
            factorial(i - 2) * poly(&[3, -28, 103, -188, 164, -48], i)
        };
        let step = exact_div(step, BigInt::from(24), || format!("step term at i = {i}"))?;
        total += &scale * &scale * step;
    }
    BigCount::from_int(total, "closed sum")
}

/// `127/300 + 5/(24 (n-4)!) + sum_{i=3}^{n-5} 1/(3 i!) +
///  sum_{even i=8}^{n} (1/(8(i-3)!) - 1/(4(i-2)!) + 1/(4(i-1)!(i-1)))`.
pub fn bracket_value(n: usize) -> Result<ExactRational> {
    if n < 7 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 7,
            max: usize::MAX,
        });
    }
    let r = |num: i64, den: BigInt| BigRational::new(BigInt::from(num), den);
    let mut b = r(127, BigInt::from(300)) + r(5, factorial(n - 4) * 24);
    for i in 3..=n.saturating_sub(5) {
        b += r(1, factorial(i) * 3);
    }
    for i in (8..=n).step_by(2) {
        b += r(1, factorial(i - 3) * 8);
        b -= r(1, factorial(i - 2) * 4);
        b += r(1, factorial(i - 1) * BigInt::from(4 * (i - 1)));
    }
    Ok(b)
}

/// `((n-1)!)^2` times [`bracket_value`]; must come out integral.
pub fn bracket_form(n: usize) -> Result<BigCount> {
    let scale = factorial(n - 1);
    let v = bracket_value(n)? * (&scale * &scale);
    if !v.is_integer() {
        return Err(Error::NonInteger(format!("bracket form at n = {n}: {v}")));
    }
    BigCount::from_int(v.to_integer(), "bracket form")
}

/// One row of the bound table: three computations of the same integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub nu_recurrence: BigCount,
    pub nu_closed_sum: BigCount,
    pub nu_bracket: BigCount,
}

impl BoundRow {
    pub fn bound(&self) -> &BigCount {
        &self.nu_recurrence
    }

    /// `bound / ((n-1)!)^2` rounded to `digits` decimal places.
    pub fn ratio_decimal(&self, digits: u32) -> String {
        let scale = factorial(self.n - 1);
        let den = &scale * &scale;
        let ten = BigInt::from(10).pow(digits);
        let num = self.bound().to_int() * &ten;
        let (q, r) = num.div_rem(&den);
        let q = if r * 2 >= den { q + 1 } else { q };
        let (int, frac) = q.div_rem(&ten);
        format!(
            "{int}.{:0>width$}",
            frac.to_string(),
            width = digits as usize
        )
    }
}

pub fn bound_table(n_max: usize) -> Result<Vec<BoundRow>> {
    bound_table_with_limit(n_max, DEFAULT_TABLE_LIMIT)
}

/// Rows for `n = 7 ..= n_max`; any disagreement between the three routes is
/// reported at the first `n` where it happens.
pub fn bound_table_with_limit(n_max: usize, limit: usize) -> Result<Vec<BoundRow>> {
    if n_max < 7 || n_max > limit {
        return Err(Error::DimensionOutOfRange {
            n: n_max,
            min: 7,
            max: limit,
        });
    }
    let seq = nu_prime_sequence(n_max)?;
    (7..=n_max)
        .map(|n| {
            let row = BoundRow {
                n,
                nu_recurrence: BigCount(&seq[n - 6].0 * 6u32),
                nu_closed_sum: closed_sum(n)?,
                nu_bracket: bracket_form(n)?,
            };
            if row.nu_recurrence != row.nu_closed_sum || row.nu_recurrence != row.nu_bracket {
                return Err(Error::TripleMismatch { n });
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigCount {
        BigCount::from_u64(v)
    }

    #[test]
    fn base_constants() {
        let b = base_values();
        assert_eq!(b.nu_d6, 5196);
        assert_eq!(b.nu_prime_d6, 866);
        assert_eq!(b.nu_prime_d6 * 6, b.nu_d6);
        assert_eq!((b.cr_b2, b.cr_b3, b.cr_b4), (0, 0, 0));
        assert_eq!(b.cr_b5_upper, 120);
    }

    #[test]
    fn first_recurrence_steps() {
        assert_eq!(even_increment(6).unwrap(), big(8400));
        assert_eq!(recurrence_even(6, &big(866)).unwrap(), big(39576));
        assert_eq!(odd_increment(7).unwrap(), big(127920));
        assert_eq!(recurrence_odd(7, &big(39576)).unwrap(), big(2067144));
    }

    #[test]
    fn parity_errors() {
        assert!(matches!(
            recurrence_even(7, &big(1)),
            Err(Error::Parity { n: 7, .. })
        ));
        assert!(matches!(
            recurrence_odd(8, &big(1)),
            Err(Error::Parity { n: 8, .. })
        ));
        assert!(recurrence_even(4, &big(1)).is_err());
    }

    #[test]
    fn totals_for_small_n() {
        assert_eq!(nu_dn(6).unwrap(), big(5196));
        assert_eq!(nu_dn(7).unwrap(), big(237456));
        assert_eq!(nu_dn(8).unwrap(), big(12402864));
        assert!(nu_dn(5).is_err());
    }

    #[test]
    fn closed_sum_first_term() {
        // (720/120)^2 * 5196 plus the single odd step term at i = 7
        assert_eq!(36 * 5196, 187056);
        assert_eq!(closed_sum(7).unwrap(), big(187056 + 50400));
        assert_eq!(closed_sum(8).unwrap(), big(12402864));
        assert!(closed_sum(6).is_err());
    }

    #[test]
    fn bracket_values() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(bracket_value(7).unwrap(), r(3298, 7200));
        assert_eq!(bracket_value(8).unwrap(), r(344524, 705600));
        assert_eq!(bracket_form(7).unwrap(), big(237456));
        assert_eq!(bracket_form(8).unwrap(), big(12402864));
    }

    #[test]
    fn table_rows() {
        let rows = bound_table(8).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].bound(), &big(237456));
        assert_eq!(rows[1].bound(), &big(12402864));
        assert_eq!(bound_table(7).unwrap().len(), 1);
        assert!(bound_table(6).is_err());
        assert!(bound_table_with_limit(40, 30).is_err());
        for row in bound_table(30).unwrap() {
            assert!((row.bound().0.clone() % 6u32).is_zero());
        }
    }

    #[test]
    fn ratio_formatting() {
        let rows = bound_table(8).unwrap();
        // 3298/7200 = 0.458055555...
        assert_eq!(rows[0].ratio_decimal(12), "0.458055555556");
        // 344524/705600 = 0.488271...
        assert!(rows[1].ratio_decimal(12).starts_with("0.48827"));
    }

    #[test]
    fn big_count_json_is_a_decimal_string() {
        let v = nu_dn(30).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, format!("\"{v}\""));
        assert_eq!(serde_json::from_str::<BigCount>(&text).unwrap(), v);
    }
}
