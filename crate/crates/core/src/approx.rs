//! Thue equations `F(x, y) = k` against rational approximations `|a - p/q| <= K / q^d`.
//!
//! Roots of `f` are enclosed in complex disks. Approximations come from Aberth
//! iteration, first in `f64` and then in exact dyadic arithmetic. The disks
//! use the radius `d |f(z_i)| / |a_0 prod_{j != i} (z_i - z_j)|`. When these
//! disks are pairwise disjoint, each one holds exactly one root. A disk whose
//! mirror image meets no other disk holds a real root, which is then
//! confirmed by a sign change.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::{self, Interval};
use crate::poly::Poly;
use crate::sarith::Rational;

type CQ = Complex<Rational>;

const MAX_WORKING_BITS: u32 = 1 << 14;

/// Reports refine up to this precision before giving up on a comparison.
fn refine_cap(prec: u32) -> u32 {
    (prec * 8).clamp(256, MAX_WORKING_BITS)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApproxError {
    #[error("polynomial must have degree at least 1")]
    DegreeTooSmall,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("could not separate the roots within the precision cap")]
    PrecisionExhausted,
    #[error("y = 0 has no rational approximation x/y")]
    YZero,
    #[error("k must be nonzero")]
    ZeroK,
    #[error("F({x}, {y}) = {value}, not {k}")]
    NotASolution { x: BigInt, y: BigInt, value: BigInt, k: BigInt },
    #[error("kappa must be positive")]
    NonPositiveKappa,
    #[error("need q^d >= kappa")]
    QTooSmall,
}

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&interval::decimal_floor(x, 20))
}

fn ser_ints<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    xs.iter().map(BigInt::to_string).collect::<Vec<_>>().serialize(s)
}

/// One root in the disk `|z - center| <= radius`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEnclosure {
    #[serde(serialize_with = "ser_rational")]
    pub re: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub im: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub radius: Rational,
    pub real: bool,
}

impl RootEnclosure {
    fn center(&self) -> CQ {
        Complex::new(self.re.clone(), self.im.clone())
    }

    /// For a real root, the interval `[re - radius, re + radius]`.
    pub fn real_interval(&self) -> Interval {
        Interval::ball(&self.re, &self.radius)
    }

    pub fn approx(&self) -> Complex64 {
        Complex64::new(interval::to_f64(&self.re), interval::to_f64(&self.im))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSet {
    /// `a_0, ..., a_d` with `a_0 > 0`.
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
    /// Known only when decidable cheaply: a rational root, or degree at most 3.
    pub irreducible: Option<bool>,
    pub roots: Vec<RootEnclosure>,
    pub precision: u32,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn real_roots(&self) -> impl Iterator<Item = (usize, &RootEnclosure)> {
        self.roots.iter().enumerate().filter(|(_, r)| r.real)
    }
}

fn normalize_coeffs(f: &[BigInt]) -> Result<Vec<BigInt>, ApproxError> {
    let start = f.iter().position(|c| !c.is_zero()).ok_or(ApproxError::DegreeTooSmall)?;
    let mut c = f[start..].to_vec();
    if c.len() < 2 {
        return Err(ApproxError::DegreeTooSmall);
    }
    if c[0].is_negative() {
        c.iter_mut().for_each(|x| *x = -&*x);
    }
    Ok(c)
}

fn horner(coeffs: &[BigInt], z: &CQ) -> CQ {
    coeffs.iter().fold(Complex::new(Rational::zero(), Rational::zero()), |acc, c| {
        acc * z + Complex::new(Rational::from_integer(c.clone()), Rational::zero())
    })
}

fn derivative_coeffs(coeffs: &[BigInt]) -> Vec<BigInt> {
    let d = coeffs.len() - 1;
    coeffs[..d].iter().enumerate().map(|(i, c)| c * BigInt::from(d - i)).collect()
}

fn aberth_f64(coeffs: &[BigInt]) -> Vec<Complex64> {
    let a: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::MAX)).collect();
    let d = a.len() - 1;
    let da: Vec<f64> = a[..d].iter().enumerate().map(|(i, c)| c * (d - i) as f64).collect();
    let eval = |p: &[f64], z: Complex64| p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let radius = 1.0 + a[1..].iter().map(|c| (c / a[0]).abs()).fold(0.0, f64::max).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let fz = eval(&a, z[i]);
            if fz == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = fz / eval(&da, z[i]);
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn round_complex(z: &CQ, bits: u32) -> CQ {
    Complex::new(interval::dyadic_round(&z.re, bits), interval::dyadic_round(&z.im, bits))
}

fn aberth_exact_step(coeffs: &[BigInt], deriv: &[BigInt], z: &[CQ], bits: u32) -> Vec<CQ> {
    let one = Complex::new(Rational::one(), Rational::zero());
    (0..z.len())
        .map(|i| {
            let fz = horner(coeffs, &z[i]);
            let dz = horner(deriv, &z[i]);
            if fz.is_zero() || dz.is_zero() {
                return z[i].clone();
            }
            let ratio = fz / dz;
            let mut repulsion = Complex::new(Rational::zero(), Rational::zero());
            for (j, zj) in z.iter().enumerate() {
                let diff = &z[i] - zj;
                if j != i && !diff.is_zero() {
                    repulsion = repulsion + one.clone() / diff;
                }
            }
            let denom = &one - &ratio * &repulsion;
            let step = if denom.is_zero() { ratio } else { ratio / denom };
            round_complex(&(&z[i] - step), bits)
        })
        .collect()
}

/// Upper bounds for the radii `d |W_i|`.
fn smith_radii(coeffs: &[BigInt], z: &[CQ], bits: u32) -> Vec<Rational> {
    let d = Rational::from_integer(BigInt::from(z.len()));
    let a0 = Rational::from_integer(coeffs[0].clone());
    (0..z.len())
        .map(|i| {
            let fz = horner(coeffs, &z[i]).norm_sqr();
            if fz.is_zero() {
                return Rational::zero();
            }
            let mut den = &a0 * &a0;
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den *= (&z[i] - zj).norm_sqr();
                }
            }
            if den.is_zero() {
                return Rational::from_integer(BigInt::from(1) << 64);
            }
            interval::dyadic_ceil(&(&d * interval::sqrt_upper(&(fz / den), bits + 8)), bits + 4)
        })
        .collect()
}

fn disks_disjoint(a: &CQ, ra: &Rational, b: &CQ, rb: &Rational) -> bool {
    let s = ra + rb;
    (a - b).norm_sqr() > &s * &s
}

fn sign_at(coeffs: &[BigInt], x: &Rational) -> i32 {
    let v = coeffs.iter().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

fn try_certify(coeffs: &[BigInt], z: &[CQ], radii: &[Rational], prec: u32) -> Option<Vec<RootEnclosure>> {
    let target = Rational::new(BigInt::one(), BigInt::one() << prec);
    let n = z.len();
    for i in 0..n {
        if radii[i] > target {
            return None;
        }
        for j in i + 1..n {
            if !disks_disjoint(&z[i], &radii[i], &z[j], &radii[j]) {
                return None;
            }
        }
    }
    let a0 = Rational::from_integer(coeffs[0].clone());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut root = RootEnclosure { re: z[i].re.clone(), im: z[i].im.clone(), radius: radii[i].clone(), real: false };
        if z[i].im.abs() > radii[i] {
            out.push(root);
            continue;
        }
        let mirror = z[i].conj();
        if (0..n).any(|j| j != i && !disks_disjoint(&mirror, &radii[i], &z[j], &radii[j])) {
            return None;
        }
        root.im = Rational::zero();
        root.real = true;
        // A rational root p/q has q | a_0.
        let snapped = (&root.re * &a0).round() / &a0;
        if (&snapped - &root.re).abs() <= root.radius && sign_at(coeffs, &snapped) == 0 {
            root.re = snapped;
            root.radius = Rational::zero();
        } else {
            let lo = sign_at(coeffs, &(&root.re - &root.radius));
            let hi = sign_at(coeffs, &(&root.re + &root.radius));
            if lo * hi >= 0 {
                return None;
            }
        }
        out.push(root);
    }
    Some(out)
}

/// Encloses every complex root of `f = a_0 X^d + ... + a_d` in a disk of radius at most `2^-prec`.
///
/// Roots are ordered by real part, then imaginary part.
pub fn isolate_roots(f: &[BigInt], prec: u32) -> Result<RootSet, ApproxError> {
    let coeffs = normalize_coeffs(f)?;
    let poly = Poly::from_int_descending(&coeffs);
    if !poly.is_squarefree() {
        return Err(ApproxError::NotSquarefree);
    }
    let deriv = derivative_coeffs(&coeffs);
    let start = aberth_f64(&coeffs);
    let mut z: Vec<CQ> = start
        .iter()
        .map(|w| {
            let re = Rational::from_float(w.re).unwrap_or_else(Rational::zero);
            let im = Rational::from_float(w.im).unwrap_or_else(Rational::zero);
            round_complex(&Complex::new(re, im), 60)
        })
        .collect();
    let mut bits = (prec + 32).max(64);
    while bits <= MAX_WORKING_BITS {
        let steps = 3 + (bits / 32).ilog2();
        for _ in 0..steps {
            z = aberth_exact_step(&coeffs, &deriv, &z, bits);
        }
        let radii = smith_radii(&coeffs, &z, bits);
        if let Some(mut roots) = try_certify(&coeffs, &z, &radii, prec) {
            roots.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
            let d = coeffs.len() - 1;
            let has_rational_root = roots.iter().any(|r| r.real && r.radius.is_zero());
            let irreducible = if d == 1 {
                Some(true)
            } else if has_rational_root {
                Some(false)
            } else if d <= 3 {
                Some(true)
            } else {
                None
            };
            return Ok(RootSet { coeffs, irreducible, roots, precision: prec });
        }
        bits *= 2;
    }
    Err(ApproxError::PrecisionExhausted)
}

/// `p(c + t) = sum b_k t^k`, coefficients of `p` given leading first.
fn taylor_at(coeffs: &[BigInt], c: &CQ) -> Vec<CQ> {
    let mut a: Vec<CQ> = coeffs.iter().rev().map(|x| Complex::new(Rational::from_integer(x.clone()), Rational::zero())).collect();
    let n = a.len() - 1;
    for i in 0..n {
        for j in (i..n).rev() {
            let next = a[j + 1].clone();
            a[j] = &a[j] + c * next;
        }
    }
    a
}

fn modulus(z: &CQ, bits: u32) -> Interval {
    if z.im.is_zero() {
        return Interval::point(z.re.abs());
    }
    interval::sqrt_interval(&z.norm_sqr(), bits)
}

/// `|p(a)|` for `a` anywhere in the disk of `root`.
fn abs_eval_on_disk(coeffs: &[BigInt], root: &RootEnclosure, bits: u32) -> Interval {
    let b = taylor_at(coeffs, &root.center());
    let center = modulus(&b[0], bits);
    let mut err = Rational::zero();
    let mut rk = Rational::one();
    for bk in &b[1..] {
        rk *= &root.radius;
        if rk.is_zero() {
            break;
        }
        err += modulus(bk, bits).hi() * &rk;
    }
    let lo = (center.lo() - &err).max(Rational::zero());
    Interval::new(lo, center.hi() + err).round_out(bits)
}

/// `|a - b|` for roots in two disks.
fn root_distance(a: &RootEnclosure, b: &RootEnclosure, bits: u32) -> Interval {
    let c = modulus(&(a.center() - b.center()), bits);
    let r = &a.radius + &b.radius;
    Interval::new((c.lo() - &r).max(Rational::zero()), c.hi() + r)
}

/// `|a - q|` for a root in a disk and a rational `q`.
fn distance_to_rational(a: &RootEnclosure, q: &Rational, bits: u32) -> Interval {
    let c = modulus(&(a.center() - Complex::new(q.clone(), Rational::zero())), bits);
    Interval::new((c.lo() - &a.radius).max(Rational::zero()), c.hi() + &a.radius)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaBound {
    pub root_index: usize,
    pub real: bool,
    pub abs_derivative: Interval,
    /// `2^{d-1} |k| / |f'(a)|`.
    pub kappa: Interval,
    /// `min_{s != id} |a - s(a)|`.
    pub min_separation: Interval,
    /// `2^d |k| / (a_0 min |a - s(a)|^d)`: solutions with `|y|^d` at least this satisfy the inequality.
    pub threshold: Interval,
}

fn kappa_for(rs: &RootSet, i: usize, k: &BigInt, bits: u32) -> Option<KappaBound> {
    let d = rs.degree() as u32;
    let abs_k = Rational::from_integer(k.abs());
    let deriv = derivative_coeffs(&rs.coeffs);
    let abs_derivative = abs_eval_on_disk(&deriv, &rs.roots[i], bits);
    let two = Rational::from_integer(BigInt::from(2));
    let numer = Interval::point(num_traits::pow(two.clone(), (d - 1) as usize) * &abs_k);
    let kappa = numer.div(&abs_derivative)?;
    let min_separation = (0..rs.roots.len())
        .filter(|&j| j != i)
        .map(|j| root_distance(&rs.roots[i], &rs.roots[j], bits))
        .reduce(|a, b| a.min(&b));
    let threshold = match &min_separation {
        Some(sep) => {
            let top = Interval::point(num_traits::pow(two, d as usize) * &abs_k);
            let bottom = &Interval::point(Rational::from_integer(rs.coeffs[0].clone())) * &sep.pow(d);
            top.div(&bottom)?
        }
        None => Interval::point(Rational::zero()),
    };
    let min_separation = min_separation.unwrap_or_else(|| Interval::point(Rational::zero()));
    Some(KappaBound { root_index: i, real: rs.roots[i].real, abs_derivative, kappa, min_separation, threshold })
}

/// The constant of the backward direction, for every root of `f`.
///
/// Precision is raised until `|f'(a)|` is bounded away from zero.
pub fn kappa_backward(f: &[BigInt], k: &BigInt, prec: u32) -> Result<Vec<KappaBound>, ApproxError> {
    if k.is_zero() {
        return Err(ApproxError::ZeroK);
    }
    let mut p = prec;
    while p <= refine_cap(prec) {
        let rs = isolate_roots(f, p)?;
        let bounds: Option<Vec<KappaBound>> = (0..rs.roots.len()).map(|i| kappa_for(&rs, i, k, p + 8)).collect();
        if let Some(b) = bounds {
            return Ok(b);
        }
        p *= 2;
    }
    Err(ApproxError::PrecisionExhausted)
}

pub fn eval_homogeneous(coeffs: &[BigInt], x: &BigInt, y: &BigInt) -> BigInt {
    let d = coeffs.len() - 1;
    coeffs.iter().enumerate().map(|(i, c)| c * x.pow((d - i) as u32) * y.pow(i as u32)).sum()
}

const LOW_DEGREE_BANNER: &str = "degree below 3: finiteness of either side may fail (d = 1 always fails, d = 2 depends on f)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxReport {
    pub root_index: usize,
    pub root: RootEnclosure,
    /// `|a - x/y|`.
    pub distance: Interval,
    pub kappa: Interval,
    /// `kappa / |y|^d`.
    pub bound: Interval,
    /// `None` when the comparison stayed undecided at the precision cap.
    pub holds: Option<bool>,
    /// Whether `|y|^d` reaches the threshold that makes the inequality provable.
    pub above_threshold: Option<bool>,
    /// The nearest root was not unique (conjugate pairs are always equidistant from a rational).
    pub tie: bool,
    pub precision: u32,
    pub banner: Option<String>,
}

/// Checks `|a - x/y| <= kappa / |y|^d` for a solution of `F(x, y) = k`, with `a`
/// the root of `f` nearest to `x/y`.
pub fn verify_inequality(f: &[BigInt], k: &BigInt, x: &BigInt, y: &BigInt, prec: u32) -> Result<ApproxReport, ApproxError> {
    if y.is_zero() {
        return Err(ApproxError::YZero);
    }
    let coeffs = normalize_coeffs(f)?;
    let flip = f.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
    let value = eval_homogeneous(&coeffs, x, y);
    let expected = if flip { -k } else { k.clone() };
    if value != expected {
        return Err(ApproxError::NotASolution { x: x.clone(), y: y.clone(), value, k: k.clone() });
    }
    let d = coeffs.len() - 1;
    let q = Rational::new(x.clone(), y.clone());
    let y_pow = Rational::from_integer(y.abs().pow(d as u32));
    let mut p = prec;
    let mut last = None;
    while p <= refine_cap(prec) {
        let rs = isolate_roots(&coeffs, p)?;
        let dists: Vec<Interval> = rs.roots.iter().map(|r| distance_to_rational(r, &q, p + 8)).collect();
        let best = (0..dists.len()).min_by(|&a, &b| dists[a].mid().cmp(&dists[b].mid())).expect("d >= 1");
        let conj_of_best = |j: usize| rs.roots[j].re == rs.roots[best].re && rs.roots[j].im == -&rs.roots[best].im;
        let mut tie = false;
        let mut undecided = false;
        for j in 0..dists.len() {
            if j == best {
                continue;
            }
            if dists[best].hi() < dists[j].lo() {
                continue;
            }
            let exact_tie = dists[best].width().is_zero() && dists[best] == dists[j];
            if conj_of_best(j) || exact_tie {
                tie = true;
            } else {
                undecided = true;
            }
        }
        let Some(kb) = kappa_for(&rs, best, k, p + 8) else {
            p *= 2;
            continue;
        };
        let bound = kb.kappa.div(&Interval::point(y_pow.clone())).expect("y != 0");
        let holds = dists[best].compare_le(&bound);
        let above_threshold = kb.threshold.compare_le(&Interval::point(y_pow.clone()));
        let report = ApproxReport {
            root_index: best,
            root: rs.roots[best].clone(),
            distance: dists[best].clone(),
            kappa: kb.kappa,
            bound,
            holds,
            above_threshold,
            tie,
            precision: p,
            banner: (d < 3).then(|| LOW_DEGREE_BANNER.to_string()),
        };
        if holds.is_some() && above_threshold.is_some() && !undecided {
            return Ok(report);
        }
        last = Some(report);
        p *= 2;
    }
    last.ok_or(ApproxError::PrecisionExhausted)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardReport {
    #[serde(serialize_with = "ser_bigint")]
    pub abs_value: BigInt,
    pub root_index: usize,
    /// `a_0 kappa prod_{s != id} (|a - s(a)| + 1)`.
    pub bound: Interval,
    /// Whether `|a - p/q| <= kappa / q^d` holds decisively.
    pub approximates: Option<bool>,
    pub within: Option<bool>,
    pub precision: u32,
}

fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The forward direction: `|F(p, q)|` against `a_0 kappa prod (|a - s(a)| + 1)` for the
/// root `a` nearest to `p/q`.
pub fn forward_bound(f: &[BigInt], kappa: &Rational, pq: &Rational, prec: u32) -> Result<ForwardReport, ApproxError> {
    if !kappa.is_positive() {
        return Err(ApproxError::NonPositiveKappa);
    }
    let coeffs = normalize_coeffs(f)?;
    let d = coeffs.len() - 1;
    let (p_int, q_int) = (pq.numer().clone(), pq.denom().clone());
    let q_pow = Rational::from_integer(q_int.pow(d as u32));
    if &q_pow < kappa {
        return Err(ApproxError::QTooSmall);
    }
    let abs_value = eval_homogeneous(&coeffs, &p_int, &q_int).abs();
    let exact = Rational::from_integer(abs_value.clone());
    let mut p = prec;
    let mut last = None;
    while p <= refine_cap(prec) {
        let rs = isolate_roots(&coeffs, p)?;
        let dists: Vec<Interval> = rs.roots.iter().map(|r| distance_to_rational(r, pq, p + 8)).collect();
        let best = (0..dists.len()).min_by(|&a, &b| dists[a].mid().cmp(&dists[b].mid())).expect("d >= 1");
        let one = Interval::point(Rational::one());
        let mut bound = Interval::point(Rational::from_integer(coeffs[0].clone()) * kappa);
        for j in 0..rs.roots.len() {
            if j != best {
                bound = &bound * &(&root_distance(&rs.roots[best], &rs.roots[j], p + 8) + &one);
            }
        }
        let approximates = dists[best].compare_le(&Interval::point(kappa / &q_pow));
        let within = Interval::point(exact.clone()).compare_le(&bound);
        let report = ForwardReport { abs_value: abs_value.clone(), root_index: best, bound, approximates, within, precision: p };
        if approximates.is_some() && within.is_some() {
            return Ok(report);
        }
        last = Some(report);
        p *= 2;
    }
    last.ok_or(ApproxError::PrecisionExhausted)
}

/// Continued-fraction convergents of `x`, at most `count` of them.
pub fn convergents(x: &Rational, count: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    while out.len() < count {
        let a = rest.floor().to_integer();
        (h_prev, h) = (h.clone(), &a * &h + &h_prev);
        (k_prev, k) = (k.clone(), &a * &k + &k_prev);
        out.push(Rational::new(h.clone(), k.clone()));
        let frac_part = &rest - Rational::from_integer(a);
        if frac_part.is_zero() {
            break;
        }
        rest = frac_part.recip();
    }
    out
}

/// All `(x, y)` with `max(|x|, |y|) <= height` and `F(x, y) = k`, sorted.
///
/// Evaluates in `i128`; the caller keeps `height^d` times the coefficients within range.
pub fn thue_solutions(f: &[i64], k: i64, height: i64) -> Vec<(i64, i64)> {
    let d = f.len() - 1;
    let mut out = Vec::new();
    for y in -height..=height {
        for x in -height..=height {
            let (xi, yi) = (x as i128, y as i128);
            let v: i128 = f
                .iter()
                .enumerate()
                .map(|(i, &c)| c as i128 * xi.pow((d - i) as u32) * yi.pow(i as u32))
                .sum();
            if v == k as i128 {
                out.push((x, y));
            }
        }
    }
    out.sort();
    out
}

pub fn to_bigints(f: &[i64]) -> Vec<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{frac, int};
    use proptest::prelude::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        to_bigints(xs)
    }

    fn cube_root_two() -> Vec<BigInt> {
        big(&[1, 0, 0, -2])
    }

    #[test]
    fn cube_root_of_two() {
        let rs = isolate_roots(&cube_root_two(), 64).unwrap();
        assert_eq!(rs.roots.len(), 3);
        let real: Vec<_> = rs.real_roots().collect();
        assert_eq!(real.len(), 1);
        let iv = real[0].1.real_interval();
        assert!((iv.to_f64_mid() - 1.259_921_049_894_873).abs() < 1e-12);
        // cube of the enclosure straddles 2
        assert!(iv.pow(3).contains(&int(2)));
        assert!(iv.width() <= Rational::new(BigInt::one(), BigInt::one() << 63));
        assert_eq!(rs.irreducible, Some(true));
        let complex: Vec<_> = rs.roots.iter().filter(|r| !r.real).collect();
        assert_eq!(complex.len(), 2);
        assert!(complex[0].im.is_negative());
    }

    #[test]
    fn rational_roots_are_exact() {
        let rs = isolate_roots(&big(&[1, 0, -1]), 64).unwrap();
        let roots: Vec<_> = rs.roots.iter().map(|r| (r.re.clone(), r.radius.clone(), r.real)).collect();
        assert_eq!(roots, vec![(int(-1), int(0), true), (int(1), int(0), true)]);
        assert_eq!(rs.irreducible, Some(false));
        let rs = isolate_roots(&big(&[6, -5, 1]), 32).unwrap();
        assert_eq!(rs.roots[0].re, frac(1, 3));
        assert_eq!(rs.roots[1].re, frac(1, 2));
    }

    #[test]
    fn imaginary_unit() {
        let rs = isolate_roots(&big(&[1, 0, 1]), 32).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!(rs.roots.iter().all(|r| !r.real));
        assert!(rs.roots[0].im.is_negative() && rs.roots[1].im.is_positive());
        for r in &rs.roots {
            assert!((r.im.abs() - int(1)).abs() <= r.radius.clone() + frac(1, 1 << 30));
        }
    }

    #[test]
    fn rejects_repeated_roots() {
        assert_eq!(isolate_roots(&big(&[1, -2, 1]), 32), Err(ApproxError::NotSquarefree));
        assert_eq!(isolate_roots(&big(&[0, 5]), 32), Err(ApproxError::DegreeTooSmall));
    }

    #[test]
    fn higher_degree_with_close_roots() {
        // (X - 1)(X - 1001/1000)(X^2 + 3)(X + 7) expanded times 1000
        let p = Poly::from_descending(&[int(1), frac(-2001, 1000), frac(1001, 1000)]);
        let q = Poly::from_descending(&[int(1), int(7), int(3), int(21)]);
        let mut prod = vec![Rational::zero(); 6];
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let ints: Vec<BigInt> = prod.iter().rev().map(|c| (c * int(1000)).to_integer()).collect();
        let rs = isolate_roots(&ints, 80).unwrap();
        assert_eq!(rs.real_roots().count(), 3);
        assert_eq!(rs.roots.iter().filter(|r| r.real && r.radius.is_zero()).count(), 3);
    }

    #[test]
    fn kappa_cube_root_two() {
        let kb = kappa_backward(&cube_root_two(), &BigInt::from(1), 64).unwrap();
        let real = kb.iter().find(|b| b.real).unwrap();
        assert!(real.kappa.subset_of(&Interval::new(frac(8398, 10000), frac(8400, 10000))));
        // 4 / (3 * 2^(2/3)) = 0.83994736...
        let exact = 4.0 / (3.0 * 2f64.powf(2.0 / 3.0));
        assert!((real.kappa.to_f64_mid() - exact).abs() < 1e-12);
        let doubled = kappa_backward(&cube_root_two(), &BigInt::from(2), 64).unwrap();
        let real2 = doubled.iter().find(|b| b.real).unwrap();
        assert_eq!(real2.kappa, &real.kappa * &Interval::point(int(2)));
    }

    #[test]
    fn kappa_sqrt_two() {
        let kb = kappa_backward(&big(&[1, 0, -2]), &BigInt::from(1), 64).unwrap();
        for b in &kb {
            // 1/sqrt(2)
            let sq = b.kappa.pow(2);
            assert!(sq.contains(&frac(1, 2)));
        }
    }

    #[test]
    fn verify_examples() {
        let r = verify_inequality(&cube_root_two(), &BigInt::from(1), &BigInt::from(-1), &BigInt::from(-1), 64).unwrap();
        assert_eq!(r.holds, Some(true));
        assert!(r.root.real);
        assert!((r.distance.to_f64_mid() - (2f64.cbrt() - 1.0)).abs() < 1e-12);
        assert_eq!(r.above_threshold, Some(true));
        assert!(r.banner.is_none());
        let e = verify_inequality(&cube_root_two(), &BigInt::from(1), &BigInt::from(1), &BigInt::from(0), 64);
        assert_eq!(e, Err(ApproxError::YZero));
        let r = verify_inequality(&big(&[1, 0, -2]), &BigInt::from(-1), &BigInt::from(1), &BigInt::from(1), 64).unwrap();
        assert_eq!(r.holds, Some(true));
        assert!(r.banner.is_some());
        assert!((r.bound.to_f64_mid() - 0.5f64.sqrt()).abs() < 1e-12);
        let bad = verify_inequality(&cube_root_two(), &BigInt::from(1), &BigInt::from(2), &BigInt::from(1), 64);
        assert!(matches!(bad, Err(ApproxError::NotASolution { .. })));
    }

    #[test]
    fn degree_one_family() {
        // a0 X + a1 with k = a0: x = n a1 + 1, y = -n a0 for every n.
        let (a0, a1) = (2i64, 3i64);
        let f = big(&[a0, a1]);
        for n in 1..40i64 {
            let (x, y) = (n * a1 + 1, -n * a0);
            let r = verify_inequality(&f, &BigInt::from(a0), &BigInt::from(x), &BigInt::from(y), 32).unwrap();
            assert!(r.banner.is_some());
            assert_eq!(r.holds, Some(true));
        }
    }

    #[test]
    fn forward_examples() {
        let kappa = frac(84, 100);
        let a = forward_bound(&cube_root_two(), &kappa, &frac(5, 4), 64).unwrap();
        assert_eq!(a.abs_value, BigInt::from(3));
        assert_eq!(a.approximates, Some(true));
        assert_eq!(a.within, Some(true));
        let b = forward_bound(&cube_root_two(), &kappa, &int(1), 64).unwrap();
        assert_eq!(b.abs_value, BigInt::from(1));
        assert_eq!(b.within, Some(true));
        let c = forward_bound(&big(&[1, 0, -2]), &int(1), &frac(3, 2), 64).unwrap();
        assert_eq!(c.abs_value, BigInt::from(1));
        assert_eq!(c.within, Some(true));
        assert_eq!(forward_bound(&cube_root_two(), &int(9), &frac(1, 2), 64).unwrap_err(), ApproxError::QTooSmall);
    }

    #[test]
    fn convergents_of_rational() {
        let c = convergents(&frac(415, 93), 10);
        assert_eq!(c, vec![int(4), frac(9, 2), frac(58, 13), frac(415, 93)]);
    }

    #[test]
    fn convergents_satisfy_forward_bound() {
        let f = cube_root_two();
        let rs = isolate_roots(&f, 200).unwrap();
        let alpha = rs.real_roots().next().unwrap().1.re.clone();
        let kappa = int(1);
        for pq in convergents(&alpha, 25).into_iter().skip(1) {
            let q_pow = Rational::from_integer(pq.denom().pow(3));
            if q_pow < kappa {
                continue;
            }
            let r = forward_bound(&f, &kappa, &pq, 64).unwrap();
            if r.approximates == Some(true) {
                assert_eq!(r.within, Some(true), "{pq}");
            }
        }
    }

    #[test]
    fn cube_root_two_solutions() {
        assert_eq!(thue_solutions(&[1, 0, 0, -2], 1, 60), vec![(-1, -1), (1, 0)]);
        assert_eq!(eval_homogeneous(&cube_root_two(), &BigInt::from(-1), &BigInt::from(-1)), BigInt::from(1));
    }

    #[test]
    fn intervals_shrink_with_precision() {
        let widths: Vec<Rational> = [32u32, 64, 128]
            .iter()
            .map(|&p| {
                let kb = kappa_backward(&cube_root_two(), &BigInt::from(1), p).unwrap();
                kb.iter().find(|b| b.real).unwrap().kappa.width()
            })
            .collect();
        assert!(widths[1] <= widths[0] && widths[2] <= widths[1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn roots_are_enclosed(c in prop::collection::vec(-20i64..20, 3..6)) {
            let mut f = vec![1i64];
            f.extend(c);
            let fb = big(&f);
            prop_assume!(Poly::from_int_descending(&fb).is_squarefree());
            let rs = isolate_roots(&fb, 48).unwrap();
            prop_assert_eq!(rs.roots.len(), f.len() - 1);
            let real_count = rs.real_roots().count();
            // Sign changes on a grid never outnumber the certified real roots.
            let mut changes = 0;
            let mut prev = None;
            for i in -4000..=4000 {
                let x = frac(i, 100);
                let s = sign_at(&fb, &x);
                if s != 0 {
                    if let Some(p) = prev {
                        if p != s {
                            changes += 1;
                        }
                    }
                    prev = Some(s);
                } else {
                    changes += 1;
                    prev = None;
                }
            }
            prop_assert!(changes <= real_count);
            prop_assert_eq!(real_count % 2, (f.len() - 1) % 2);
        }
    }
}
