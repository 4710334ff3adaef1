//! Thue–Mahler equations `F(x, y) = k e` whose form has three rational linear
//! factors, and the maps between their solutions and unit equations.
//!
//! A solution is a triple `(x, y, e)` with `x, y` S-integers and `e` an S-unit.
//! Two solutions are in the same class when `(x', y', e') = (h x, h y, h^m e)`
//! for an S-unit `h`; the class is the projective point `(x : y)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::projective::{self, Hyperplane, ProjPoint, ProjectiveError};
use crate::sarith::{self, Rational, SArithError, SContext};
use crate::unitsolve::{UnitSolveError, UnitTuple};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThueMahlerError {
    #[error("roots must be pairwise distinct")]
    DuplicateRoots,
    #[error("k must be nonzero")]
    ZeroK,
    #[error("cofactor must be a nonzero form")]
    ZeroCofactor,
    #[error("height bound must be at least 1")]
    InvalidHeight,
    #[error("enumeration cap exceeded after {0} candidate pairs")]
    CapExceeded(usize),
    #[error("gamma yields root of F")]
    GammaRoot,
    #[error("x = alpha_1 y")]
    BetaOneZero,
    #[error("(x, y, e) does not satisfy F(x, y) = k e")]
    NotASolution,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error(transparent)]
    Arith(#[from] SArithError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Unit(#[from] UnitSolveError),
}

/// `F(X, Y) = (X - a1 Y)(X - a2 Y)(X - a3 Y) H(X, Y)` together with the scalar `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryFormSpec {
    #[serde(with = "sarith::rational_vec")]
    roots: Vec<Rational>,
    /// Coefficients of `H`, leading `X`-power first: `[c0, c1]` is `c0 X + c1 Y`.
    #[serde(with = "sarith::rational_vec")]
    cofactor: Vec<Rational>,
    #[serde(with = "sarith::rational_str")]
    k: Rational,
}

impl BinaryFormSpec {
    pub fn new(roots: [Rational; 3], cofactor: Vec<Rational>, k: Rational) -> Result<Self, ThueMahlerError> {
        if roots[0] == roots[1] || roots[0] == roots[2] || roots[1] == roots[2] {
            return Err(ThueMahlerError::DuplicateRoots);
        }
        if k.is_zero() {
            return Err(ThueMahlerError::ZeroK);
        }
        if cofactor.iter().all(Zero::is_zero) {
            return Err(ThueMahlerError::ZeroCofactor);
        }
        Ok(Self { roots: roots.to_vec(), cofactor, k })
    }

    /// Cubic `(X - a1 Y)(X - a2 Y)(X - a3 Y) = k e` with trivial cofactor.
    pub fn cubic(roots: [Rational; 3], k: Rational) -> Result<Self, ThueMahlerError> {
        Self::new(roots, vec![Rational::one()], k)
    }

    pub fn roots(&self) -> [&Rational; 3] {
        [&self.roots[0], &self.roots[1], &self.roots[2]]
    }

    pub fn cofactor(&self) -> &[Rational] {
        &self.cofactor
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn degree(&self) -> usize {
        3 + self.cofactor.len() - 1
    }

    pub fn eval_cofactor(&self, x: &Rational, y: &Rational) -> Rational {
        homogeneous_eval(&self.cofactor, x, y)
    }

    /// Smallest positive integer `d` with `d H` integral.
    pub fn cofactor_denominator(&self) -> BigInt {
        self.cofactor.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

fn homogeneous_eval(desc: &[Rational], x: &Rational, y: &Rational) -> Rational {
    let m = desc.len() - 1;
    desc.iter()
        .enumerate()
        .map(|(i, c)| c * num_traits::pow(x.clone(), m - i) * num_traits::pow(y.clone(), i))
        .sum()
}

/// Either a split form or `XY(X - Y)`, whose third root sits at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BinaryForm {
    Split(BinaryFormSpec),
    Pivot {
        #[serde(with = "sarith::rational_str")]
        k: Rational,
    },
}

impl BinaryForm {
    pub fn pivot(k: Rational) -> Result<Self, ThueMahlerError> {
        if k.is_zero() {
            return Err(ThueMahlerError::ZeroK);
        }
        Ok(BinaryForm::Pivot { k })
    }

    pub fn k(&self) -> &Rational {
        match self {
            BinaryForm::Split(f) => f.k(),
            BinaryForm::Pivot { k } => k,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            BinaryForm::Split(f) => f.degree(),
            BinaryForm::Pivot { .. } => 3,
        }
    }
}

impl From<BinaryFormSpec> for BinaryForm {
    fn from(f: BinaryFormSpec) -> Self {
        BinaryForm::Split(f)
    }
}

/// `F(x, y)`, without the scalar `k`.
pub fn eval_form(form: &BinaryForm, x: &Rational, y: &Rational) -> Rational {
    match form {
        BinaryForm::Split(f) => {
            let linear: Rational = f.roots.iter().map(|a| x - a * y).product();
            linear * f.eval_cofactor(x, y)
        }
        BinaryForm::Pivot { .. } => x * y * (x - y),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TMSolution {
    #[serde(with = "sarith::rational_str")]
    pub x: Rational,
    #[serde(with = "sarith::rational_str")]
    pub y: Rational,
    #[serde(with = "sarith::rational_str")]
    pub eps: Rational,
    pub point: ProjPoint,
}

impl TMSolution {
    /// Builds the solution through `(x, y)`, setting `e = F(x, y) / k`.
    pub fn at(form: &BinaryForm, x: Rational, y: Rational) -> Result<Self, ThueMahlerError> {
        let eps = eval_form(form, &x, &y) / form.k();
        let point = projective::normalize(&[x.clone(), y.clone()])?;
        Ok(Self { x, y, eps, point })
    }

    pub fn new(form: &BinaryForm, x: Rational, y: Rational, eps: Rational) -> Result<Self, ThueMahlerError> {
        let sol = Self::at(form, x, y)?;
        if sol.eps != eps {
            return Err(ThueMahlerError::NotASolution);
        }
        Ok(sol)
    }

    pub fn satisfies(&self, form: &BinaryForm) -> bool {
        eval_form(form, &self.x, &self.y) == form.k() * &self.eps
    }

    /// S-integral coordinates and an S-unit `e`.
    pub fn is_valid_over(&self, form: &BinaryForm, s: &SContext) -> bool {
        self.satisfies(form)
            && sarith::is_s_integer(&self.x, s)
            && sarith::is_s_integer(&self.y, s)
            && sarith::is_s_unit(&self.eps, s)
    }
}

/// One solution per class among coprime integer pairs of height at most `height`,
/// ordered by projective point.
pub fn solve_thue_mahler(
    form: &BinaryForm,
    s: &SContext,
    height: u64,
    cap: usize,
) -> Result<Vec<TMSolution>, ThueMahlerError> {
    if height == 0 {
        return Err(ThueMahlerError::InvalidHeight);
    }
    let h = height as i64;
    let mut found = BTreeMap::new();
    let mut checked = 0usize;
    // Canonical pairs: x > 0, or (0, 1).
    let candidates = std::iter::once((0i64, 1i64)).chain((1..=h).flat_map(|x| (-h..=h).map(move |y| (x, y))));
    for (x, y) in candidates {
        if x.gcd(&y) != 1 {
            continue;
        }
        checked += 1;
        if checked > cap {
            return Err(ThueMahlerError::CapExceeded(cap));
        }
        let sol = TMSolution::at(form, sarith::int(x), sarith::int(y))?;
        if !sol.eps.is_zero() && sarith::is_s_unit(&sol.eps, s) {
            found.insert(sol.point.clone(), sol);
        }
    }
    Ok(found.into_values().collect())
}

/// Whether two solutions of a degree-`m` equation lie in the same class.
///
/// When they do, the witness `h = x'/x` (or `y'/y`) is checked to be an S-unit
/// with `e' = h^m e`; a failure there is reported as an internal error.
pub fn classes_equivalent(a: &TMSolution, b: &TMSolution, m: usize, s: &SContext) -> Result<bool, ThueMahlerError> {
    if a.point != b.point {
        return Ok(false);
    }
    let eta = if a.x.is_zero() { &b.y / &a.y } else { &b.x / &a.x };
    if !sarith::is_s_unit(&eta, s) {
        return Err(ThueMahlerError::Internal(format!(
            "witness {} is not an S-unit",
            sarith::format_rational(&eta)
        )));
    }
    if &a.x * &eta != b.x || &a.y * &eta != b.y || &a.eps * num_traits::pow(eta.clone(), m) != b.eps {
        return Err(ThueMahlerError::Internal("witness does not carry one solution to the other".into()));
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShearDirection {
    /// Pull `X(X - Y)(X + Y)` back along `X' = X - Y, Y' = X + Y` to `XY(X - Y)`.
    IToIi,
    /// Push a split form to `XY(X - Y)` along `X' = (a2 - a3)(X - a1 Y), Y' = (a1 - a3)(X - a2 Y)`.
    IiToI,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShearResult {
    pub form: BinaryForm,
    /// New coordinates as `matrix * (x, y)`.
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Matrix,
    pub solutions: Vec<TMSolution>,
    pub delta: SContext,
}

fn serialize_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(sarith::format_rational).collect()).collect();
    rows.serialize(s)
}

/// Changes variables in a Thue–Mahler instance and carries its solutions along.
///
/// Each transported solution is checked against the new form and must be valid
/// over `S` together with `delta`.
pub fn shear_transform(
    form: &BinaryForm,
    direction: ShearDirection,
    sols: &[TMSolution],
    s: &SContext,
) -> Result<ShearResult, ThueMahlerError> {
    for sol in sols {
        if !sol.satisfies(form) {
            return Err(ThueMahlerError::NotASolution);
        }
    }
    let (new_form, matrix, delta) = match direction {
        ShearDirection::Identity => (form.clone(), linalg::identity(2), SContext::empty()),
        ShearDirection::IToIi => {
            let f = split_of(form)?;
            let mut sorted: Vec<Rational> = f.roots.clone();
            sorted.sort();
            if sorted != [sarith::int(-1), sarith::int(0), sarith::int(1)] || f.cofactor.len() != 1 {
                return Err(ThueMahlerError::Precondition("expected c X(X - Y)(X + Y)".into()));
            }
            let c = &f.cofactor[0];
            // c X'(X'-Y')(X'+Y') = -4c XY(X-Y) under X' = X - Y, Y' = X + Y.
            let k = f.k() / (sarith::int(-4) * c);
            let half = sarith::frac(1, 2);
            let matrix = vec![vec![half.clone(), half.clone()], vec![-half.clone(), half]];
            let delta = sarith::extend_s(&SContext::empty(), &[sarith::int(2), c.clone(), f.k().clone()])?;
            (BinaryForm::Pivot { k }, matrix, delta)
        }
        ShearDirection::IiToI => {
            let f = split_of(form)?;
            let [a1, a2, a3] = f.roots();
            let (c1, c2) = (a2 - a3, a1 - a3);
            let matrix = vec![vec![c1.clone(), -(a1 * &c1)], vec![c2.clone(), -(a2 * &c2)]];
            let d = Rational::from_integer(f.cofactor_denominator());
            let mut quantities = vec![d.clone(), a1.clone(), a2.clone(), a3.clone(), a2 - a3, a1 - a3, a2 - a1, f.k().clone()];
            quantities.extend(f.cofactor.iter().map(|c| c * &d));
            let delta = sarith::extend_s_nonzero(&SContext::empty(), &quantities)?;
            (BinaryForm::Pivot { k: Rational::one() }, matrix, delta)
        }
    };
    let s_prime = s.union(&delta);
    let inputs_valid = sols.iter().all(|t| t.is_valid_over(form, s));
    let mut solutions = Vec::with_capacity(sols.len());
    for sol in sols {
        let image = linalg::mat_vec(&matrix, &[sol.x.clone(), sol.y.clone()]);
        let [x, y]: [Rational; 2] = image.try_into().expect("2x2 matrix");
        let moved = match direction {
            ShearDirection::IiToI => TMSolution::at(&new_form, x, y)?,
            _ => TMSolution::new(&new_form, x, y, sol.eps.clone())?,
        };
        if inputs_valid && !moved.is_valid_over(&new_form, &s_prime) {
            return Err(ThueMahlerError::Internal(format!("transported solution at {} is not S'-integral", moved.point)));
        }
        solutions.push(moved);
    }
    Ok(ShearResult { form: new_form, matrix, solutions, delta })
}

fn split_of(form: &BinaryForm) -> Result<&BinaryFormSpec, ThueMahlerError> {
    match form {
        BinaryForm::Split(f) => Ok(f),
        BinaryForm::Pivot { .. } => Err(ThueMahlerError::Precondition("expected a split form".into())),
    }
}

/// `(a1 - a2) b3 + (a2 - a3) b1 + (a3 - a1) b2` with `bi = x - ai y`; identically zero.
pub fn siegel_residue(roots: [&Rational; 3], x: &Rational, y: &Rational) -> Rational {
    let [a1, a2, a3] = roots;
    let b = |a: &Rational| x - a * y;
    (a1 - a2) * b(a3) + (a2 - a3) * b(a1) + (a3 - a1) * b(a2)
}

/// Solution of `F = k e` attached to the unit-equation datum `g = b2 / b1`, scaled by `h`.
pub fn transport_unit_to_thue(gamma: &Rational, form: &BinaryFormSpec, eta: &Rational) -> Result<TMSolution, ThueMahlerError> {
    if eta.is_zero() {
        return Err(ThueMahlerError::Precondition("eta must be nonzero".into()));
    }
    let [a1, a2, _] = form.roots();
    let diff = a1 - a2;
    let x0 = (a1 * gamma - a2) / &diff;
    let y0 = (gamma - Rational::one()) / &diff;
    let wrapped = BinaryForm::Split(form.clone());
    let base = TMSolution::at(&wrapped, x0, y0)?;
    if base.eps.is_zero() {
        return Err(ThueMahlerError::GammaRoot);
    }
    let eps = &base.eps * num_traits::pow(eta.clone(), form.degree());
    let sol = TMSolution::new(&wrapped, &base.x * eta, &base.y * eta, eps)
        .map_err(|_| ThueMahlerError::Internal("F(x, y) != k e after scaling".into()))?;
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitTransport {
    #[serde(with = "sarith::rational_vec")]
    pub betas: Vec<Rational>,
    #[serde(with = "sarith::rational_str")]
    pub gamma: Rational,
    /// `((a2 - a3) b1, (a3 - a1) b2, (a1 - a2) b3)`, a unit solution over `s_prime`.
    pub tuple: UnitTuple,
    pub s_prime: SContext,
}

/// Primes of `d`, the roots, their differences, `k` and the coefficients of `dH`.
pub fn transport_primes(form: &BinaryFormSpec, s: &SContext) -> Result<SContext, ThueMahlerError> {
    let [a1, a2, a3] = form.roots();
    let d = Rational::from_integer(form.cofactor_denominator());
    let mut quantities = vec![d.clone(), a1.clone(), a2.clone(), a3.clone(), a1 - a2, a1 - a3, a2 - a3, form.k().clone()];
    quantities.extend(form.cofactor.iter().map(|c| c * &d));
    Ok(sarith::extend_s_nonzero(s, &quantities)?)
}

/// `bi = x - ai y` and `g = b2 / b1`; the three terms of the Siegel identity are
/// checked to be units over the enlarged S.
pub fn transport_thue_to_unit(sol: &TMSolution, form: &BinaryFormSpec, s: &SContext) -> Result<UnitTransport, ThueMahlerError> {
    let wrapped = BinaryForm::Split(form.clone());
    if !sol.satisfies(&wrapped) || sol.eps.is_zero() {
        return Err(ThueMahlerError::NotASolution);
    }
    let [a1, a2, a3] = form.roots();
    let betas: Vec<Rational> = form.roots.iter().map(|a| &sol.x - a * &sol.y).collect();
    if betas[0].is_zero() {
        return Err(ThueMahlerError::BetaOneZero);
    }
    let gamma = &betas[1] / &betas[0];
    if !siegel_residue(form.roots(), &sol.x, &sol.y).is_zero() {
        return Err(ThueMahlerError::Internal("Siegel identity failed".into()));
    }
    let s_prime = transport_primes(form, s)?;
    let entries = vec![(a2 - a3) * &betas[0], (a3 - a1) * &betas[1], (a1 - a2) * &betas[2]];
    let tuple = UnitTuple::new(entries, s_prime.clone())
        .map_err(|e| ThueMahlerError::Internal(format!("Siegel terms are not S'-units: {e}")))?;
    Ok(UnitTransport { betas, gamma, tuple, s_prime })
}

/// `P^1` minus `0 = (0:1)`, `1 = (1:1)` and `inf = (1:0)`.
pub fn three_point_arrangement() -> Vec<Hyperplane> {
    vec![Hyperplane::coordinate(1, 0), Hyperplane::from_ints(&[1, -1]).expect("nonzero"), Hyperplane::coordinate(1, 1)]
}

/// Solution `e1 + e2 = 1` in S-units to the S-integral point `(e1 : 1)`.
pub fn unit_to_point(e1: &Rational, e2: &Rational, s: &SContext) -> Result<ProjPoint, ThueMahlerError> {
    if e1 + e2 != Rational::one() || !sarith::is_s_unit(e1, s) || !sarith::is_s_unit(e2, s) {
        return Err(ThueMahlerError::Precondition("need S-units with e1 + e2 = 1".into()));
    }
    Ok(projective::normalize(&[e1.clone(), Rational::one()])?)
}

/// An S-integral point of `P^1 \ {0, 1, inf}` to the unit pair `(u, 1 - u)`.
pub fn point_to_unit(point: &ProjPoint, s: &SContext) -> Result<(Rational, Rational), ThueMahlerError> {
    if point.dim() != 1 {
        return Err(ProjectiveError::DimensionMismatch { expected: 2, got: point.coords().len() }.into());
    }
    if !projective::is_s_integral(point, &three_point_arrangement(), s)? {
        return Err(ThueMahlerError::Precondition(format!("{point} is not S-integral")));
    }
    let c = point.as_rationals();
    let u = &c[0] / &c[1];
    let v = Rational::one() - &u;
    Ok((u, v))
}

/// S-integral points of `P^1 \ {0, 1, inf}` with canonical height at most `height`.
pub fn three_point_integral_points(s: &SContext, height: u64) -> Result<Vec<ProjPoint>, ThueMahlerError> {
    let h = height as i64;
    let arrangement = three_point_arrangement();
    let mut out = Vec::new();
    for a in 1..=h {
        for b in -h..=h {
            if b == 0 || b == a || a.gcd(&b) != 1 {
                continue;
            }
            let p = ProjPoint::from_ints(&[a, b])?;
            if projective::is_s_integral(&p, &arrangement, s)? {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{frac, int, DEFAULT_CAP};
    use proptest::prelude::*;

    fn ctx(ps: &[u64]) -> SContext {
        SContext::new(ps.iter().copied()).unwrap()
    }

    fn cubic() -> BinaryFormSpec {
        BinaryFormSpec::cubic([int(0), int(1), int(-1)], int(1)).unwrap()
    }

    fn pts(sols: &[TMSolution]) -> Vec<ProjPoint> {
        sols.iter().map(|s| s.point.clone()).collect()
    }

    #[test]
    fn eval_examples() {
        let f = BinaryForm::Split(cubic());
        assert_eq!(eval_form(&f, &int(2), &int(1)), int(6));
        assert_eq!(eval_form(&f, &int(1), &int(0)), int(1));
        assert_eq!(eval_form(&BinaryForm::pivot(int(1)).unwrap(), &int(2), &int(1)), int(2));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(BinaryFormSpec::cubic([int(0), int(0), int(1)], int(1)), Err(ThueMahlerError::DuplicateRoots));
        assert_eq!(BinaryFormSpec::cubic([int(0), int(2), int(1)], int(0)), Err(ThueMahlerError::ZeroK));
        assert!(BinaryForm::pivot(int(0)).is_err());
    }

    #[test]
    fn pivot_classes() {
        let f = BinaryForm::pivot(int(1)).unwrap();
        let sols = solve_thue_mahler(&f, &ctx(&[2, 3]), 10, DEFAULT_CAP).unwrap();
        let found = pts(&sols);
        for p in [[2, 1], [3, 1], [1, -1], [3, 2], [4, 1], [9, 8]] {
            assert!(found.contains(&ProjPoint::from_ints(&p).unwrap()), "{p:?}");
        }
        for s in &sols {
            assert!(s.is_valid_over(&f, &ctx(&[2, 3])));
        }
    }

    #[test]
    fn cubic_classes() {
        let f = BinaryForm::Split(cubic());
        let sols = solve_thue_mahler(&f, &ctx(&[2, 3]), 5, DEFAULT_CAP).unwrap();
        let two_one = sols.iter().find(|s| s.point == ProjPoint::from_ints(&[2, 1]).unwrap()).unwrap();
        assert_eq!(two_one.eps, int(6));
        let one_zero = sols.iter().find(|s| s.point == ProjPoint::from_ints(&[1, 0]).unwrap()).unwrap();
        assert_eq!(one_zero.eps, int(1));
    }

    #[test]
    fn k_five_matches_oracle() {
        let spec = BinaryFormSpec::cubic([int(0), int(1), int(-1)], int(5)).unwrap();
        let f = BinaryForm::Split(spec);
        let s = ctx(&[2, 3]);
        let sols = solve_thue_mahler(&f, &s, 5, DEFAULT_CAP).unwrap();
        let mut oracle = Vec::new();
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                let v = x * (x - y) * (x + y);
                if x.gcd(&y) == 1 && v != 0 && v % 5 == 0 && sarith::is_s_unit(&int(v / 5), &s) {
                    oracle.push(ProjPoint::from_ints(&[x, y]).unwrap());
                }
            }
        }
        oracle.sort();
        oracle.dedup();
        assert_eq!(pts(&sols), oracle);
    }

    #[test]
    fn class_equivalence() {
        let f = BinaryForm::Split(cubic());
        let s = ctx(&[2, 3]);
        let a = TMSolution::new(&f, int(2), int(1), int(6)).unwrap();
        let b = TMSolution::new(&f, int(4), int(2), int(48)).unwrap();
        let c = TMSolution::new(&f, int(3), int(1), int(24)).unwrap();
        assert!(classes_equivalent(&a, &b, 3, &s).unwrap());
        assert!(!classes_equivalent(&a, &c, 3, &s).unwrap());
        assert!(classes_equivalent(&a, &a, 3, &s).unwrap());
        // eta = 5 is not a {2,3}-unit.
        let d = TMSolution::new(&f, int(10), int(5), int(750)).unwrap();
        assert!(classes_equivalent(&a, &d, 3, &s).is_err());
    }

    #[test]
    fn equivalence_relation_on_solver_output() {
        let f = BinaryForm::Split(cubic());
        let s = ctx(&[2, 3]);
        let base = solve_thue_mahler(&f, &s, 20, DEFAULT_CAP).unwrap();
        let mut sample: Vec<TMSolution> = Vec::new();
        for sol in base.iter().take(6) {
            for eta in [int(1), int(-2), frac(1, 3)] {
                let x = &sol.x * &eta;
                let y = &sol.y * &eta;
                sample.push(TMSolution::at(&f, x, y).unwrap());
            }
        }
        let eq = |a: &TMSolution, b: &TMSolution| classes_equivalent(a, b, 3, &s).unwrap();
        for a in &sample {
            assert!(eq(a, a));
            for b in &sample {
                assert_eq!(eq(a, b), eq(b, a));
                for c in &sample {
                    if eq(a, b) && eq(b, c) {
                        assert!(eq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn shear_i_to_ii() {
        let f = BinaryForm::Split(cubic());
        let s = ctx(&[2, 3]);
        let sol = TMSolution::new(&f, int(2), int(1), int(6)).unwrap();
        let out = shear_transform(&f, ShearDirection::IToIi, &[sol], &s).unwrap();
        let moved = &out.solutions[0];
        assert_eq!((moved.x.clone(), moved.y.clone()), (frac(3, 2), frac(-1, 2)));
        assert_eq!(moved.point, ProjPoint::from_ints(&[3, -1]).unwrap());
        assert!(moved.satisfies(&out.form));
        assert!(out.delta.contains(2));
    }

    #[test]
    fn shear_ii_to_i() {
        let f = BinaryForm::Split(cubic());
        let s = ctx(&[2, 3]);
        let sols = solve_thue_mahler(&f, &s, 30, DEFAULT_CAP).unwrap();
        let out = shear_transform(&f, ShearDirection::IiToI, &sols, &s).unwrap();
        assert_eq!(out.matrix, vec![vec![int(2), int(0)], vec![int(1), int(-1)]]);
        assert_eq!(linalg::determinant(&out.matrix), int(-2));
        assert!(out.delta.contains(2));
        assert_eq!(out.solutions.len(), sols.len());
        for t in &out.solutions {
            assert!(t.is_valid_over(&out.form, &s.union(&out.delta)));
        }
    }

    #[test]
    fn shear_general_roots() {
        let spec = BinaryFormSpec::new([frac(1, 2), int(3), int(-5)], vec![int(1), frac(1, 3)], int(7)).unwrap();
        let f = BinaryForm::Split(spec);
        let sol = TMSolution::at(&f, int(4), int(1)).unwrap();
        let s = sarith::extend_s(&SContext::empty(), &[sol.eps.clone()]).unwrap();
        let out = shear_transform(&f, ShearDirection::IiToI, &[sol], &s).unwrap();
        assert!(out.solutions[0].satisfies(&out.form));
        assert!(out.delta.contains(3) && out.delta.contains(7) && out.delta.contains(2));
    }

    #[test]
    fn shear_identity() {
        let f = BinaryForm::Split(cubic());
        let s = ctx(&[2, 3]);
        let sols = solve_thue_mahler(&f, &s, 5, DEFAULT_CAP).unwrap();
        let out = shear_transform(&f, ShearDirection::Identity, &sols, &s).unwrap();
        assert_eq!(out.solutions, sols);
        assert!(out.delta.is_empty());
    }

    #[test]
    fn siegel_examples() {
        let r = [int(0), int(1), int(-1)];
        assert!(siegel_residue([&r[0], &r[1], &r[2]], &int(2), &int(1)).is_zero());
        assert!(siegel_residue([&r[0], &r[1], &r[2]], &int(0), &int(0)).is_zero());
        let q = [frac(1, 2), int(3), int(-5)];
        assert!(siegel_residue([&q[0], &q[1], &q[2]], &int(7), &int(2)).is_zero());
    }

    #[test]
    fn unit_to_thue_examples() {
        let f = cubic();
        let a = transport_unit_to_thue(&frac(1, 2), &f, &int(2)).unwrap();
        assert_eq!((a.x, a.y, a.eps), (int(2), int(1), int(6)));
        let b = transport_unit_to_thue(&int(1), &f, &int(1)).unwrap();
        assert_eq!((b.x, b.y, b.eps), (int(1), int(0), int(1)));
        let c = transport_unit_to_thue(&frac(3, 2), &f, &int(6)).unwrap();
        assert_eq!((c.x, c.y, c.eps), (int(6), int(-3), int(162)));
        // gamma = 2 gives (x0, y0) = (1, -1), on the line x = -y.
        assert_eq!(transport_unit_to_thue(&int(2), &f, &int(3)), Err(ThueMahlerError::GammaRoot));
        assert_eq!(transport_unit_to_thue(&int(0), &f, &int(1)), Err(ThueMahlerError::GammaRoot));
    }

    #[test]
    fn thue_to_unit_examples() {
        let f = cubic();
        let s = ctx(&[2, 3]);
        let w = BinaryForm::Split(f.clone());
        let cases = [((2, 1, 6), [2, 1, 3], frac(1, 2)), ((1, 0, 1), [1, 1, 1], int(1)), ((6, -3, 162), [6, 9, 3], frac(3, 2))];
        for ((x, y, e), betas, gamma) in cases {
            let sol = TMSolution::new(&w, int(x), int(y), int(e)).unwrap();
            let t = transport_thue_to_unit(&sol, &f, &s).unwrap();
            assert_eq!(t.betas, betas.map(int).to_vec());
            assert_eq!(t.gamma, gamma);
        }
        let zero = TMSolution::at(&w, int(0), int(1)).unwrap();
        assert!(transport_thue_to_unit(&zero, &f, &s).is_err());
    }

    #[test]
    fn dictionary_examples() {
        let s = ctx(&[2, 3]);
        let p = unit_to_point(&int(4), &int(-3), &s).unwrap();
        assert_eq!(p, ProjPoint::from_ints(&[4, 1]).unwrap());
        assert_eq!(point_to_unit(&p, &s).unwrap(), (int(4), int(-3)));
        let half = unit_to_point(&frac(1, 2), &frac(1, 2), &ctx(&[2])).unwrap();
        assert_eq!(half, ProjPoint::from_ints(&[1, 2]).unwrap());
        assert!(unit_to_point(&int(5), &int(-4), &s).is_err());
        assert!(point_to_unit(&ProjPoint::from_ints(&[5, 1]).unwrap(), &s).is_err());
    }

    #[test]
    fn round_trip_on_solver_output() {
        let f = cubic();
        let w = BinaryForm::Split(f.clone());
        let s = ctx(&[2, 3, 5]);
        for sol in solve_thue_mahler(&w, &s, 40, DEFAULT_CAP).unwrap() {
            let Ok(t) = transport_thue_to_unit(&sol, &f, &s) else {
                continue;
            };
            let back = transport_unit_to_thue(&t.gamma, &f, &t.betas[0]).unwrap();
            assert_eq!((back.x, back.y, back.eps), (sol.x.clone(), sol.y.clone(), sol.eps.clone()));
        }
    }

    proptest! {
        #[test]
        fn siegel_identity(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in 1i64..20, x in -1000i64..1000, y in -1000i64..1000, q in 1i64..100) {
            let roots = [frac(a, d), frac(b, d + 1), frac(c, 3)];
            prop_assert!(siegel_residue([&roots[0], &roots[1], &roots[2]], &frac(x, q), &frac(y, q + 1)).is_zero());
        }

        #[test]
        fn solver_output_is_valid(k in prop::sample::select(vec![1i64, -1, 2, 6]), h in 1u64..12) {
            let f = BinaryForm::Split(BinaryFormSpec::cubic([int(0), int(1), int(-1)], int(k)).unwrap());
            let s = ctx(&[2, 3]);
            for sol in solve_thue_mahler(&f, &s, h, DEFAULT_CAP).unwrap() {
                prop_assert!(sol.is_valid_over(&f, &s));
            }
        }
    }
}
