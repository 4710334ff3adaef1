//! Brute-force enumerators for the classical finiteness families over `Z`.
//!
//! Curve families scan `|x| <= box` and test the right-hand side exactly;
//! the two-variable Thue family scans the square `|x|, |y| <= box`; the unit
//! family scans S-units with exponents in `[-box, box]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Poly;
use crate::sarith::{self, Rational, SContext};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("invalid curve: {0}")]
    Invalid(String),
    #[error("scan of {needed} candidates exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CurveSpec {
    /// `y^2 = x^3 + k`.
    Mordell { k: i64 },
    /// `y^2 = f(x)`, `f` cubic, coefficients descending.
    Elliptic { f: Vec<i64> },
    Hyperelliptic { f: Vec<i64> },
    /// `y^m = f(x)`.
    Superelliptic { m: u32, f: Vec<i64> },
    /// `(x - a_1 y) ... (x - a_n y) = k`.
    #[serde(rename = "thue")]
    ThueClassic {
        #[serde(with = "sarith::rational_vec")]
        roots: Vec<Rational>,
        #[serde(with = "sarith::rational_str")]
        k: Rational,
    },
    /// `a_1 E_1 + a_2 E_2 = 1` in S-units.
    #[serde(rename = "siegel")]
    SiegelUnits {
        #[serde(with = "sarith::rational_str")]
        a1: Rational,
        #[serde(with = "sarith::rational_str")]
        a2: Rational,
        primes: SContext,
    },
}

fn poly_of(f: &[i64]) -> Poly {
    Poly::from_int_descending(&f.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
}

fn invalid(msg: impl Into<String>) -> CurveError {
    CurveError::Invalid(msg.into())
}

impl CurveSpec {
    pub fn validate(&self) -> Result<(), CurveError> {
        match self {
            CurveSpec::Mordell { k } => {
                if *k == 0 {
                    return Err(invalid("k must be nonzero"));
                }
            }
            CurveSpec::Elliptic { f } => {
                let p = poly_of(f);
                if p.degree() != Some(3) {
                    return Err(invalid("f must be cubic"));
                }
                if !p.is_squarefree() {
                    return Err(invalid("f has a repeated root"));
                }
            }
            CurveSpec::Hyperelliptic { f } => {
                let simple: usize = poly_of(f)
                    .squarefree_decomposition()
                    .iter()
                    .filter(|(_, mult)| *mult == 1)
                    .map(|(g, _)| g.degree().unwrap_or(0))
                    .sum();
                if simple < 3 {
                    return Err(invalid("f needs at least three simple roots"));
                }
            }
            CurveSpec::Superelliptic { m, f } => {
                if *m < 3 {
                    return Err(invalid("m must be at least 3"));
                }
                let good: usize = poly_of(f)
                    .squarefree_decomposition()
                    .iter()
                    .filter(|(_, mult)| num_integer::gcd(*mult, *m as usize) == 1)
                    .map(|(g, _)| g.degree().unwrap_or(0))
                    .sum();
                if good < 2 {
                    return Err(invalid("f needs two distinct roots of multiplicity prime to m"));
                }
            }
            CurveSpec::ThueClassic { roots, k } => {
                let distinct: BTreeSet<&Rational> = roots.iter().collect();
                if distinct.len() < 3 {
                    return Err(invalid("need at least three distinct roots"));
                }
                if k.is_zero() {
                    return Err(invalid("k must be nonzero"));
                }
            }
            CurveSpec::SiegelUnits { a1, a2, .. } => {
                if a1.is_zero() || a2.is_zero() {
                    return Err(invalid("a1 a2 must be nonzero"));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            CurveSpec::Mordell { .. } => "mordell",
            CurveSpec::Elliptic { .. } => "elliptic",
            CurveSpec::Hyperelliptic { .. } => "hyperelliptic",
            CurveSpec::Superelliptic { .. } => "superelliptic",
            CurveSpec::ThueClassic { .. } => "thue",
            CurveSpec::SiegelUnits { .. } => "siegel",
        }
    }

    /// Whether `(x, y)` satisfies the equation exactly.
    pub fn satisfies(&self, x: &Rational, y: &Rational) -> bool {
        match self {
            CurveSpec::Mordell { k } => y * y == x * x * x + sarith::int(*k),
            CurveSpec::Elliptic { f } | CurveSpec::Hyperelliptic { f } => y * y == poly_of(f).eval(x),
            CurveSpec::Superelliptic { m, f } => num_traits::pow(y.clone(), *m as usize) == poly_of(f).eval(x),
            CurveSpec::ThueClassic { roots, k } => thue_value(roots, x, y) == *k,
            CurveSpec::SiegelUnits { a1, a2, primes } => {
                a1 * x + a2 * y == Rational::from_integer(1.into())
                    && sarith::is_s_unit(x, primes)
                    && sarith::is_s_unit(y, primes)
            }
        }
    }
}

fn thue_value(roots: &[Rational], x: &Rational, y: &Rational) -> Rational {
    roots.iter().map(|a| x - a * y).product()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CurvePoint {
    #[serde(with = "sarith::rational_str")]
    pub x: Rational,
    #[serde(with = "sarith::rational_str")]
    pub y: Rational,
}

impl CurvePoint {
    pub fn ints(x: i64, y: i64) -> Self {
        Self { x: sarith::int(x), y: sarith::int(y) }
    }
}

/// Exact `m`-th root of `v`, if there is one.
fn exact_root(v: &BigInt, m: u32) -> Option<BigInt> {
    if v.is_negative() {
        if m % 2 == 0 {
            return None;
        }
        return exact_root(&-v, m).map(|r| -r);
    }
    let r = v.nth_root(m);
    (num_traits::pow(r.clone(), m as usize) == *v).then_some(r)
}

fn integer_value(p: &Poly, x: i64) -> Option<BigInt> {
    let v = p.eval(&sarith::int(x));
    v.is_integer().then(|| v.to_integer())
}

fn check_cap(needed: u128, cap: usize) -> Result<(), CurveError> {
    if needed > cap as u128 {
        return Err(CurveError::CapExceeded { needed, cap });
    }
    Ok(())
}

/// All solutions in the box, sorted by `(x, y)`.
pub fn enumerate_points(spec: &CurveSpec, bx: u32, cap: usize) -> Result<Vec<CurvePoint>, CurveError> {
    spec.validate()?;
    let b = i64::from(bx);
    let width = 2 * u128::from(bx) + 1;
    let mut out = Vec::new();
    let push_roots = |x: i64, rhs: BigInt, m: u32, out: &mut Vec<CurvePoint>| {
        if let Some(r) = exact_root(&rhs, m) {
            let xr = sarith::int(x);
            out.push(CurvePoint { x: xr.clone(), y: Rational::from_integer(r.clone()) });
            if m % 2 == 0 && !r.is_zero() {
                out.push(CurvePoint { x: xr, y: Rational::from_integer(-r) });
            }
        }
    };
    match spec {
        CurveSpec::Mordell { k } => {
            check_cap(width, cap)?;
            for x in -b..=b {
                let rhs = BigInt::from(x).pow(3) + BigInt::from(*k);
                push_roots(x, rhs, 2, &mut out);
            }
        }
        CurveSpec::Elliptic { f } | CurveSpec::Hyperelliptic { f } | CurveSpec::Superelliptic { f, .. } => {
            check_cap(width, cap)?;
            let m = if let CurveSpec::Superelliptic { m, .. } = spec { *m } else { 2 };
            let p = poly_of(f);
            for x in -b..=b {
                if let Some(rhs) = integer_value(&p, x) {
                    push_roots(x, rhs, m, &mut out);
                }
            }
        }
        CurveSpec::ThueClassic { roots, k } => {
            check_cap(width * width, cap)?;
            for x in -b..=b {
                for y in -b..=b {
                    if thue_value(roots, &sarith::int(x), &sarith::int(y)) == *k {
                        out.push(CurvePoint::ints(x, y));
                    }
                }
            }
        }
        CurveSpec::SiegelUnits { a1, a2, primes } => {
            let units = sarith::enumerate_s_units(primes, bx, cap).map_err(|e| invalid(e.to_string()))?;
            let one = sarith::int(1);
            for e1 in &units {
                let e2 = (&one - a1 * e1) / a2;
                if !e2.is_zero() && sarith::in_unit_box(&e2, primes, bx) {
                    out.push(CurvePoint { x: e1.clone(), y: e2 });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}
