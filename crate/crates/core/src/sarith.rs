//! Exact rational arithmetic with p-adic valuations and S-unit machinery.
//!
//! Over the rationals a finite set of places containing the archimedean one
//! is just a finite set of primes. [`SContext`] holds those primes; the
//! archimedean place is always implicit.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision exact fraction, always reduced with positive denominator.
pub type Rational = BigRational;

/// Default output-size cap shared by every bounded enumeration.
pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SArithError {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration cap exceeded ({needed} > {cap})")]
    CapExceeded { needed: u128, cap: usize },
    #[error("zero value cannot extend S")]
    ZeroValue,
    #[error("prime factor {0} does not fit in 64 bits")]
    PrimeTooLarge(BigUint),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-5/8"` (an optional typographic minus is accepted too).
pub fn parse_rational(text: &str) -> Result<Rational, SArithError> {
    let cleaned = text.trim().replace('\u{2212}', "-");
    let err = || SArithError::Parse(text.to_string());
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (cleaned.as_str(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `num/den` string; integers print without a denominator.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter for a single rational stored as a string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a sequence of rationals stored as strings.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = xs.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

fn strip_prime(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(x: &Rational, p: u64) -> Result<i64, SArithError> {
    if x.is_zero() {
        return Err(SArithError::ValuationOfZero);
    }
    let bp = BigInt::from(p);
    let mut num = x.numer().abs();
    let mut den = x.denom().clone();
    Ok(strip_prime(&mut num, &bp) - strip_prime(&mut den, &bp))
}

/// Valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> Result<i64, SArithError> {
    if n.is_zero() {
        return Err(SArithError::ValuationOfZero);
    }
    let mut m = n.abs();
    Ok(strip_prime(&mut m, &BigInt::from(p)))
}

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>, SArithError> {
    let m = n.magnitude();
    if m.is_zero() {
        return Err(SArithError::ZeroValue);
    }
    if m.is_one() {
        return Ok(Vec::new());
    }
    if let Some(small) = m.to_u64() {
        return Ok(num_prime::nt_funcs::factorize64(small).into_keys().collect());
    }
    num_prime::nt_funcs::factorize(m.clone())
        .into_keys()
        .map(|p| p.to_u64().ok_or(SArithError::PrimeTooLarge(p)))
        .collect()
}

/// The finite primes of S. The archimedean place is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SContext {
    primes: Vec<u64>,
}

impl SContext {
    /// Sorts and deduplicates; every entry must be prime.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self, SArithError> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(SArithError::NotPrime(bad));
        }
        Ok(Self { primes: set.into_iter().collect() })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn union(&self, other: &SContext) -> SContext {
        let set: BTreeSet<u64> = self.primes.iter().chain(&other.primes).copied().collect();
        SContext { primes: set.into_iter().collect() }
    }

    /// Primes of `self` that are not in `base`.
    pub fn difference(&self, base: &SContext) -> SContext {
        SContext { primes: self.primes.iter().copied().filter(|p| !base.contains(*p)).collect() }
    }

    /// Removes every prime of S from `n`, returning the exponents and the cofactor.
    fn strip(&self, n: &BigInt) -> (Vec<i64>, BigInt) {
        let mut rest = n.clone();
        let exps = self.primes.iter().map(|&p| strip_prime(&mut rest, &BigInt::from(p))).collect();
        (exps, rest)
    }
}

impl fmt::Display for SContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SContext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.primes.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SContext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let primes = Vec::<u64>::deserialize(d)?;
        SContext::new(primes).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    NotSInteger,
    SInteger,
    SUnit,
}

/// Classifies `x` as an S-unit, an S-integer, or neither.
pub fn s_membership(x: &Rational, s: &SContext) -> Membership {
    let (_, den_rest) = s.strip(x.denom());
    if !den_rest.is_one() {
        return Membership::NotSInteger;
    }
    if x.is_zero() {
        return Membership::SInteger;
    }
    let (_, num_rest) = s.strip(x.numer());
    if num_rest.abs().is_one() {
        Membership::SUnit
    } else {
        Membership::SInteger
    }
}

pub fn is_s_unit(x: &Rational, s: &SContext) -> bool {
    s_membership(x, s) == Membership::SUnit
}

pub fn is_s_integer(x: &Rational, s: &SContext) -> bool {
    s_membership(x, s) != Membership::NotSInteger
}

/// `sign * prod p_i^{e_i}` over the primes of an [`SContext`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SUnit {
    pub sign: i8,
    pub exponents: Vec<i64>,
}

impl SUnit {
    /// Decomposes `x` over `s`; `None` if `x` is not an S-unit.
    pub fn decompose(x: &Rational, s: &SContext) -> Option<SUnit> {
        if x.is_zero() {
            return None;
        }
        let (num_exps, num_rest) = s.strip(x.numer());
        let (den_exps, den_rest) = s.strip(x.denom());
        if !num_rest.abs().is_one() || !den_rest.is_one() {
            return None;
        }
        let sign = if x.is_negative() { -1 } else { 1 };
        let exponents = num_exps.iter().zip(&den_exps).map(|(a, b)| a - b).collect();
        Some(SUnit { sign, exponents })
    }

    pub fn value(&self, s: &SContext) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, &e) in s.primes().iter().zip(&self.exponents) {
            let pe = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e >= 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        if self.sign < 0 {
            num = -num;
        }
        Rational::new(num, den)
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.exponents.iter().map(|e| e.abs()).max().unwrap_or(0)
    }
}

/// True iff `x` is an S-unit whose exponents all lie in `[-bound, bound]`.
pub fn in_unit_box(x: &Rational, s: &SContext, bound: u32) -> bool {
    SUnit::decompose(x, s).is_some_and(|u| u.max_abs_exponent() <= i64::from(bound))
}

/// Number of values `enumerate_s_units(s, bound)` would emit.
pub fn unit_box_size(s: &SContext, bound: u32) -> u128 {
    let side = 2 * u128::from(bound) + 1;
    let mut total: u128 = 2;
    for _ in 0..s.len() {
        total = total.saturating_mul(side);
    }
    total
}

/// All `±prod p_i^{e_i}` with `|e_i| <= bound`, ordered lexicographically on
/// `(sign, exponent vector)`.
pub fn enumerate_s_units(s: &SContext, bound: u32, cap: usize) -> Result<Vec<Rational>, SArithError> {
    Ok(enumerate_s_unit_reps(s, bound, cap)?.into_iter().map(|(_, v)| v).collect())
}

/// Same as [`enumerate_s_units`] but keeps the decomposition next to each value.
pub fn enumerate_s_unit_reps(
    s: &SContext,
    bound: u32,
    cap: usize,
) -> Result<Vec<(SUnit, Rational)>, SArithError> {
    let needed = unit_box_size(s, bound);
    if needed > cap as u128 {
        return Err(SArithError::CapExceeded { needed, cap });
    }
    let b = i64::from(bound);
    // powers[i][e + b] = p_i^e
    let powers: Vec<Vec<Rational>> = s
        .primes()
        .iter()
        .map(|&p| {
            let base = Rational::from_integer(BigInt::from(p));
            (-b..=b).map(|e| num_traits::pow::Pow::pow(&base, e as i32)).collect()
        })
        .collect();

    let mut out = Vec::with_capacity(needed as usize);
    for sign in [-1i8, 1] {
        let mut exps = vec![-b; s.len()];
        loop {
            let mut value = Rational::from_integer(BigInt::from(sign));
            for (i, &e) in exps.iter().enumerate() {
                value *= &powers[i][(e + b) as usize];
            }
            out.push((SUnit { sign, exponents: exps.clone() }, value));
            // odometer, last coordinate fastest
            let mut exhausted = true;
            for i in (0..exps.len()).rev() {
                if exps[i] < b {
                    exps[i] += 1;
                    exhausted = false;
                    break;
                }
                exps[i] = -b;
            }
            if exhausted {
                break;
            }
        }
    }
    Ok(out)
}

/// S enlarged by every prime dividing a numerator or denominator of `values`.
pub fn extend_s(s: &SContext, values: &[Rational]) -> Result<SContext, SArithError> {
    let mut primes: BTreeSet<u64> = s.primes().iter().copied().collect();
    for v in values {
        if v.is_zero() {
            return Err(SArithError::ZeroValue);
        }
        primes.extend(prime_divisors(v.numer())?);
        primes.extend(prime_divisors(v.denom())?);
    }
    Ok(SContext { primes: primes.into_iter().collect() })
}

/// Like [`extend_s`] but silently skips zeros (a zero quantity contributes no places).
pub fn extend_s_nonzero<'a>(
    s: &SContext,
    values: impl IntoIterator<Item = &'a Rational>,
) -> Result<SContext, SArithError> {
    let nonzero: Vec<Rational> = values.into_iter().filter(|v| !v.is_zero()).cloned().collect();
    extend_s(s, &nonzero)
}
