//! Closed intervals with exact rational endpoints.
//!
//! Arithmetic on these is exact; the only rounding is the explicit outward
//! rounding to a dyadic grid, used to keep endpoint sizes under control.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::sarith::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    /// `[c - r, c + r]`.
    pub fn ball(c: &Rational, r: &Rational) -> Self {
        Self::new(c - r, c + r)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// Whether `self` lies inside `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval::new(Rational::zero(), self.lo.abs().max(self.hi.clone()))
        } else if self.hi.is_negative() || self.hi.is_zero() {
            Interval::new(self.hi.abs(), self.lo.abs())
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, n: u32) -> Interval {
        (0..n).fold(Interval::point(Rational::one()), |acc, _| &acc * self)
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.clone().min(other.lo.clone()), self.hi.clone().min(other.hi.clone()))
    }

    /// Decisively `self <= other` (`Some(true)`), `self > other` (`Some(false)`), or undecided.
    pub fn compare_le(&self, other: &Interval) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Endpoints moved outward onto the grid `2^-bits`.
    pub fn round_out(&self, bits: u32) -> Interval {
        Interval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    pub fn to_f64_mid(&self) -> f64 {
        to_f64(&self.mid())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().cloned().expect("four products");
        let hi = c.iter().max().cloned().expect("four products");
        Interval::new(lo, hi)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal_floor(&self.lo, 12), decimal_ceil(&self.hi, 12))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Endpoints {
            lo: String,
            hi: String,
        }
        Endpoints { lo: decimal_floor(&self.lo, 20), hi: decimal_ceil(&self.hi, 20) }.serialize(s)
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

pub fn dyadic_floor(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new((x * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

pub fn dyadic_ceil(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new((x * Rational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

/// Nearest point of the grid `2^-bits`.
pub fn dyadic_round(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(bits);
    Rational::new((x * Rational::from_integer(scale.clone())).round().to_integer(), scale)
}

/// Enclosure of `sqrt(x)` for `x >= 0`, of width about `2^-bits`.
pub fn sqrt_interval(x: &Rational, bits: u32) -> Interval {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return Interval::point(Rational::zero());
    }
    let scale = pow2(2 * bits);
    let scaled = x * Rational::from_integer(scale);
    let lo_int = scaled.floor().to_integer().sqrt();
    let ceil = scaled.ceil().to_integer();
    let mut hi_int = ceil.sqrt();
    if &hi_int * &hi_int < ceil {
        hi_int += 1;
    }
    let den = pow2(bits);
    Interval::new(Rational::new(lo_int, den.clone()), Rational::new(hi_int, den))
}

pub fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    sqrt_interval(x, bits).hi
}

/// Decimal string of `x` rounded down to `digits` places.
pub fn decimal_floor(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    format_scaled((x * Rational::from_integer(scale)).floor().to_integer(), digits)
}

pub fn decimal_ceil(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    format_scaled((x * Rational::from_integer(scale)).ceil().to_integer(), digits)
}

fn format_scaled(n: BigInt, digits: u32) -> String {
    let sign = if n.is_negative() { "-" } else { "" };
    let s = n.abs().to_string();
    let d = digits as usize;
    let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (int_part, frac_part) = padded.split_at(padded.len() - d);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn arithmetic() {
        let a = Interval::new(int(-1), int(2));
        let b = Interval::new(int(3), int(4));
        assert_eq!(&a * &b, Interval::new(int(-4), int(8)));
        assert_eq!(&a - &b, Interval::new(int(-5), int(-1)));
        assert_eq!(a.abs(), Interval::new(int(0), int(2)));
        assert!(a.recip().is_none());
        assert_eq!(b.recip().unwrap(), Interval::new(frac(1, 4), frac(1, 3)));
        assert_eq!(b.compare_le(&Interval::point(int(5))), Some(true));
        assert_eq!(a.compare_le(&Interval::point(int(0))), None);
    }

    #[test]
    fn sqrt_two() {
        let s = sqrt_interval(&int(2), 40);
        assert!(&s.lo * &s.lo <= int(2) && &s.hi * &s.hi >= int(2));
        assert!(s.width() <= Rational::new(BigInt::one(), pow2(39)));
        assert_eq!(sqrt_interval(&int(9), 10), Interval::point(int(3)));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal_floor(&frac(-1, 3), 4), "-0.3334");
        assert_eq!(decimal_ceil(&frac(1, 3), 4), "0.3334");
        assert_eq!(decimal_floor(&int(12), 4), "12");
        assert_eq!(decimal_floor(&frac(1, 200), 4), "0.005");
    }

    proptest! {
        #[test]
        fn sqrt_encloses(n in 0i64..1_000_000, d in 1i64..1000, bits in 1u32..80) {
            let x = frac(n, d);
            let s = sqrt_interval(&x, bits);
            prop_assert!(&s.lo * &s.lo <= x && x <= &s.hi * &s.hi);
        }

        #[test]
        fn product_encloses(a in -50i64..50, b in -50i64..50, c in -50i64..50, e in -50i64..50) {
            let i = Interval::new(int(a.min(b)), int(a.max(b)));
            let j = Interval::new(int(c.min(e)), int(c.max(e)));
            let p = &i * &j;
            for x in [a, b] {
                for y in [c, e] {
                    prop_assert!(p.contains(&int(x * y)));
                }
            }
        }

        #[test]
        fn rounding_is_outward(n in -10_000i64..10_000, d in 1i64..997, bits in 0u32..20) {
            let x = frac(n, d);
            prop_assert!(Interval::point(x.clone()).subset_of(&Interval::point(x).round_out(bits)));
        }
    }
}
