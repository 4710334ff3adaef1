//! Projective points and hyperplanes over the rationals.
//!
//! Points and hyperplanes share one canonical form: coprime integer entries,
//! first nonzero entry positive. Over the integers every point and every
//! hyperplane has such a representative, so S-integrality of a point on the
//! complement of a hyperplane arrangement can be tested globally: the value
//! of each normalized linear form at the normalized point must be an S-unit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::sarith::{self, Rational, SArithError, SContext};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectiveError {
    #[error("not a projective point")]
    NotProjectivePoint,
    #[error("point on removed divisor")]
    PointOnDivisor,
    #[error("empty hyperplane arrangement")]
    EmptyArrangement,
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular coordinate change")]
    SingularMatrix,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Arith(#[from] SArithError),
}

/// Coprime integer representative with first nonzero entry positive.
fn canonical_integers(raw: &[Rational]) -> Option<Vec<BigInt>> {
    if raw.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = raw.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = raw.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let first_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    for x in ints.iter_mut() {
        *x = &*x / &g;
        if first_negative {
            *x = -&*x;
        }
    }
    Some(ints)
}

fn serialize_ints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    xs.iter().map(BigInt::to_string).collect::<Vec<_>>().serialize(s)
}

fn deserialize_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|t| t.parse::<BigInt>().map_err(serde::de::Error::custom))
        .collect()
}

/// A point of P^n(Q) in canonical coprime-integer form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Projective dimension n (the point has n+1 coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn from_ints(xs: &[i64]) -> Result<Self, ProjectiveError> {
        normalize(&xs.iter().map(|&x| sarith::int(x)).collect::<Vec<_>>())
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// max |x_i|, the naive height of the canonical representative.
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_ints(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ints = deserialize_ints(d)?;
        let raw: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        normalize(&raw).map_err(serde::de::Error::custom)
    }
}

/// Clears denominators, divides by the gcd and makes the first nonzero entry positive.
pub fn normalize(raw: &[Rational]) -> Result<ProjPoint, ProjectiveError> {
    canonical_integers(raw).map(|coords| ProjPoint { coords }).ok_or(ProjectiveError::NotProjectivePoint)
}

/// The hyperplane `a_0 X_0 + ... + a_n X_n = 0`, coefficients canonical like points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    coeffs: Vec<BigInt>,
}

impl Hyperplane {
    pub fn new(coeffs: &[Rational]) -> Result<Self, ProjectiveError> {
        canonical_integers(coeffs).map(|coeffs| Hyperplane { coeffs }).ok_or(ProjectiveError::NotProjectivePoint)
    }

    pub fn from_ints(xs: &[i64]) -> Result<Self, ProjectiveError> {
        Self::new(&xs.iter().map(|&x| sarith::int(x)).collect::<Vec<_>>())
    }

    /// `X_i = 0` in P^n.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[i] = BigInt::one();
        Hyperplane { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Value of the normalized linear form at the normalized point.
    pub fn eval(&self, p: &ProjPoint) -> Result<BigInt, ProjectiveError> {
        check_dim(self.coeffs.len(), p.coords.len())?;
        Ok(self.coeffs.iter().zip(&p.coords).map(|(a, x)| a * x).sum())
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool, ProjectiveError> {
        Ok(self.eval(p)?.is_zero())
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<ResiduePoint, ProjectiveError> {
        reduce_coords_mod_p(&self.as_rationals(), p)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(BigInt::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_ints(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ints = deserialize_ints(d)?;
        let raw: Vec<Rational> = ints.into_iter().map(Rational::from_integer).collect();
        Hyperplane::new(&raw).map_err(serde::de::Error::custom)
    }
}

fn check_dim(expected: usize, got: usize) -> Result<(), ProjectiveError> {
    if expected == got {
        Ok(())
    } else {
        Err(ProjectiveError::DimensionMismatch { expected, got })
    }
}

/// A point of P^n(F_p), scaled so the first nonzero residue is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResiduePoint {
    pub modulus: u64,
    pub coords: Vec<u64>,
}

impl ResiduePoint {
    /// Incidence between a reduced point and a reduced hyperplane.
    pub fn pairs_to_zero(&self, other: &ResiduePoint) -> bool {
        let p = u128::from(self.modulus);
        let sum = self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(0u128, |acc, (&a, &b)| (acc + u128::from(a) * u128::from(b)) % p);
        sum == 0
    }
}

fn mod_p(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Scale by the coordinate of largest p-adic absolute value, then reduce.
pub fn reduce_coords_mod_p(coords: &[Rational], p: u64) -> Result<ResiduePoint, ProjectiveError> {
    if !sarith::is_prime(p) {
        return Err(ProjectiveError::NotPrime(p));
    }
    let pivot = coords
        .iter()
        .filter(|x| !x.is_zero())
        .min_by_key(|x| sarith::valuation(x, p).expect("nonzero"))
        .ok_or(ProjectiveError::NotProjectivePoint)?;
    let bp = BigInt::from(p);
    let mut residues: Vec<u64> = coords
        .iter()
        .map(|x| {
            let y = x / pivot;
            let den_inv = y.denom().modpow(&(&bp - 2u32), &bp);
            mod_p(&(y.numer() * den_inv), p)
        })
        .collect();
    let first = *residues.iter().find(|&&r| r != 0).expect("pivot reduces to 1");
    let inv = BigInt::from(first).modpow(&(&bp - 2u32), &bp).to_u64().expect("residue fits");
    for r in residues.iter_mut() {
        *r = ((u128::from(*r) * u128::from(inv)) % u128::from(p)) as u64;
    }
    Ok(ResiduePoint { modulus: p, coords: residues })
}

pub fn reduce_mod_p(point: &ProjPoint, p: u64) -> Result<ResiduePoint, ProjectiveError> {
    reduce_coords_mod_p(&point.as_rationals(), p)
}

/// Global S-integrality: every normalized form takes an S-unit value at the point.
pub fn is_s_integral(point: &ProjPoint, arrangement: &[Hyperplane], s: &SContext) -> Result<bool, ProjectiveError> {
    if arrangement.is_empty() {
        return Err(ProjectiveError::EmptyArrangement);
    }
    let mut integral = true;
    for h in arrangement {
        let value = h.eval(point)?;
        if value.is_zero() {
            return Err(ProjectiveError::PointOnDivisor);
        }
        integral &= sarith::is_s_unit(&Rational::from_integer(value), s);
    }
    Ok(integral)
}

/// Primes outside S among `candidates` at which the reduced point meets a reduced hyperplane.
pub fn local_obstructions(
    point: &ProjPoint,
    arrangement: &[Hyperplane],
    s: &SContext,
    candidates: impl IntoIterator<Item = u64>,
) -> Result<Vec<u64>, ProjectiveError> {
    let mut bad = Vec::new();
    for p in candidates {
        if s.contains(p) {
            continue;
        }
        let rp = reduce_mod_p(point, p)?;
        for h in arrangement {
            if rp.pairs_to_zero(&h.reduce_mod_p(p)?) {
                bad.push(p);
                break;
            }
        }
    }
    Ok(bad)
}

/// Result of a projective change of coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateChange {
    pub point: ProjPoint,
    /// Primes to add to S so that S-integrality is preserved.
    pub delta: SContext,
}

/// Primes dividing `det(m)` or any entry denominator of `m`.
pub fn matrix_delta(m: &[Vec<Rational>]) -> Result<SContext, ProjectiveError> {
    let det = linalg::determinant(m);
    if det.is_zero() {
        return Err(ProjectiveError::SingularMatrix);
    }
    let mut values = vec![det];
    values.extend(m.iter().flatten().filter(|x| !x.denom().is_one()).map(|x| Rational::from_integer(x.denom().clone())));
    Ok(sarith::extend_s(&SContext::empty(), &values)?)
}

pub fn change_coordinates(point: &ProjPoint, m: &[Vec<Rational>]) -> Result<CoordinateChange, ProjectiveError> {
    check_dim(point.coords.len(), m.len())?;
    let delta = matrix_delta(m)?;
    let image = normalize(&linalg::mat_vec(m, &point.as_rationals()))?;
    Ok(CoordinateChange { point: image, delta })
}

/// The hyperplane `H'` with `H'(M x) = H(x)`, i.e. coefficients `H M^{-1}`.
pub fn transform_hyperplane(h: &Hyperplane, m: &[Vec<Rational>]) -> Result<Hyperplane, ProjectiveError> {
    check_dim(h.coeffs.len(), m.len())?;
    let inv: Matrix = linalg::inverse(m).ok_or(ProjectiveError::SingularMatrix)?;
    Hyperplane::new(&linalg::vec_mat(&h.as_rationals(), &inv))
}

/// Segre-type embedding of P^1 x P^1 onto the quadric `T0 T3 = T1 T2` in P^3.
pub fn quadratic_embed(a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
    check_dim(2, a.coords.len())?;
    check_dim(2, b.coords.len())?;
    let (x0, x1) = (&a.coords[0], &a.coords[1]);
    let (y0, y1) = (&b.coords[0], &b.coords[1]);
    let raw = [x0 * y0, x1 * y0, x0 * y1, x1 * y1].map(Rational::from_integer);
    normalize(&raw)
}
