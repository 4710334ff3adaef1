//! S-unit equations `e_0 + ... + e_k = 0` and the constructions that lift
//! solutions of a short equation to solutions of a longer one.
//!
//! Solutions are counted up to the diagonal action of the S-units, so every
//! class has a unique representative with first entry 1. The solver works on
//! those representatives directly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sarith::{self, Rational, SArithError, SContext};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitSolveError {
    #[error("unit equation needs n >= 1, got {0}")]
    InvalidN(usize),
    #[error("enumeration cap exceeded after {} classes (partial result)", partial.len())]
    CapExceeded { partial: Vec<ClassRep> },
    #[error("invalid gamma: {0}")]
    InvalidGamma(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("entry {0} is not an S-unit")]
    NotSUnit(String),
    #[error("entries do not sum to zero")]
    NonzeroSum,
    #[error("a unit tuple needs at least two entries")]
    TooShort,
    #[error(transparent)]
    Arith(#[from] SArithError),
}

/// S-units summing to zero. The inhomogeneous `e1 + e2 = 1` is stored as `(e1, e2, -1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UnitTuple {
    #[serde(with = "sarith::rational_vec")]
    entries: Vec<Rational>,
    #[serde(rename = "primes")]
    context: SContext,
}

impl UnitTuple {
    pub fn new(entries: Vec<Rational>, context: SContext) -> Result<Self, UnitSolveError> {
        if entries.len() < 2 {
            return Err(UnitSolveError::TooShort);
        }
        if let Some(bad) = entries.iter().find(|e| !sarith::is_s_unit(e, &context)) {
            return Err(UnitSolveError::NotSUnit(sarith::format_rational(bad)));
        }
        if !entries.iter().sum::<Rational>().is_zero() {
            return Err(UnitSolveError::NonzeroSum);
        }
        Ok(Self { entries, context })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn context(&self) -> &SContext {
        &self.context
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        !vanishing_subsums(&self.entries, 2).is_empty()
    }
}

impl fmt::Display for UnitTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(sarith::format_rational).collect();
        write!(f, "({}) over {}", parts.join(", "), self.context)
    }
}

/// Class of a solution modulo the S-units, represented with first entry 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassRep {
    tuple: UnitTuple,
}

impl ClassRep {
    /// Divides through by the first entry.
    pub fn of(tuple: &UnitTuple) -> Self {
        let first = tuple.entries[0].clone();
        let entries = tuple.entries.iter().map(|e| e / &first).collect();
        ClassRep { tuple: UnitTuple { entries, context: tuple.context.clone() } }
    }

    pub fn tuple(&self) -> &UnitTuple {
        &self.tuple
    }

    pub fn entries(&self) -> &[Rational] {
        &self.tuple.entries
    }

    /// Builds a representative from raw entries, validating them first.
    pub fn from_entries(entries: Vec<Rational>, context: SContext) -> Result<Self, UnitSolveError> {
        Ok(Self::of(&UnitTuple::new(entries, context)?))
    }
}

impl fmt::Display for ClassRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tuple.fmt(f)
    }
}

/// Index sets `I` with `min_size <= |I| <= len - 1` whose entries sum to zero,
/// ordered by size and then lexicographically.
pub fn vanishing_subsums(t: &[Rational], min_size: usize) -> Vec<Vec<usize>> {
    let n = t.len();
    assert!(n < 64, "tuple too long for subset enumeration");
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 1u64..(1u64 << n) - 1 {
        let size = mask.count_ones() as usize;
        if size < min_size {
            continue;
        }
        let sum: Rational = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &t[i]).sum();
        if sum.is_zero() {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Full validity predicate for a solution of the generalized unit equation:
/// nonzero S-units, zero sum, no vanishing subsum of two or more (but not all) terms.
pub fn is_nondegenerate_solution(t: &[Rational], s: &SContext) -> bool {
    t.len() >= 2
        && t.iter().all(|e| sarith::is_s_unit(e, s))
        && t.iter().sum::<Rational>().is_zero()
        && vanishing_subsums(t, 2).is_empty()
}

/// Output of [`solve_unit_equation`]: non-degenerate classes and, separately, the
/// degenerate ones met in the same box.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct UnitSolutions {
    pub classes: Vec<ClassRep>,
    pub degenerate: Vec<ClassRep>,
}

/// Classes of solutions of `e_0 + e_1 + ... + e_{n+1} = 0` in S-units.
///
/// `n` is the dimension of the matching projective space: `n = 1` is the
/// equation `e_1 + e_2 = 1` written homogeneously as three terms. Every class
/// is represented with `e_0 = 1`, and all other entries must have exponents
/// in `[-bound, bound]`. The last entry is solved for rather than enumerated.
pub fn solve_unit_equation(n: usize, s: &SContext, bound: u32, cap: usize) -> Result<UnitSolutions, UnitSolveError> {
    if n == 0 {
        return Err(UnitSolveError::InvalidN(n));
    }
    let units = sarith::enumerate_s_units(s, bound, cap)?;
    let mut out = UnitSolutions::default();
    let mut indices = vec![0usize; n];
    let mut checked = 0usize;
    loop {
        checked += 1;
        if checked > cap {
            return Err(UnitSolveError::CapExceeded { partial: out.classes });
        }
        let mut entries = Vec::with_capacity(n + 2);
        entries.push(Rational::one());
        entries.extend(indices.iter().map(|&i| units[i].clone()));
        let last = -entries.iter().sum::<Rational>();
        if sarith::in_unit_box(&last, s, bound) {
            entries.push(last);
            let rep = ClassRep { tuple: UnitTuple { entries, context: s.clone() } };
            if rep.tuple.is_degenerate() {
                out.degenerate.push(rep);
            } else {
                out.classes.push(rep);
            }
        }
        let mut exhausted = true;
        for i in (0..n).rev() {
            if indices[i] + 1 < units.len() {
                indices[i] += 1;
                exhausted = false;
                break;
            }
            indices[i] = 0;
        }
        if exhausted {
            break;
        }
    }
    Ok(out)
}

/// Lifts a non-degenerate solution of length `k+1` to one of length `k+1+t`:
/// `(g e_0, ..., g e_{k-1}, (g - t) e_k, e_k, ..., e_k)` with `t` trailing copies,
/// over S enlarged by the primes of `g (g - t)`.
pub fn lift_gamma(base: &[Rational], gamma: &Rational, t: usize, s: &SContext) -> Result<UnitTuple, UnitSolveError> {
    if t == 0 {
        return Err(UnitSolveError::Precondition("t must be at least 1".into()));
    }
    if !is_nondegenerate_solution(base, s) {
        return Err(UnitSolveError::Precondition("base is not a non-degenerate S-unit solution".into()));
    }
    if !sarith::is_s_integer(gamma, s) || sarith::is_s_unit(gamma, s) {
        return Err(UnitSolveError::InvalidGamma(format!(
            "{} must be an S-integer that is not an S-unit",
            sarith::format_rational(gamma)
        )));
    }
    for r in 1..=t {
        let ratio = sarith::int(r as i64) / gamma;
        if sarith::is_s_integer(&ratio, s) {
            return Err(UnitSolveError::InvalidGamma(format!("{r}/gamma is an S-integer")));
        }
    }
    let t_rat = Rational::from_integer(BigInt::from(t));
    let shifted = gamma - &t_rat;
    let s_prime = sarith::extend_s(s, &[gamma * &shifted])?;

    let k = base.len() - 1;
    let mut entries: Vec<Rational> = base[..k].iter().map(|e| gamma * e).collect();
    entries.push(&shifted * &base[k]);
    entries.extend(std::iter::repeat(base[k].clone()).take(t));

    let lifted = UnitTuple::new(entries, s_prime).map_err(|e| UnitSolveError::Internal(e.to_string()))?;
    if lifted.is_degenerate() {
        return Err(UnitSolveError::Internal(format!("lifted tuple {lifted} has a vanishing subsum")));
    }
    Ok(lifted)
}

pub fn binomial(m: u32, j: u32) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(m - i) / BigInt::from(i + 1))
}

/// `((1-e)^m, C(m,1) e, -C(m,2) e^2, ..., (-1)^{m+1} C(m,m) e^m, -1)`.
///
/// Rearranges `(1-e)^m = sum_j (-1)^j C(m,j) e^j`, so the entries sum to zero
/// for every rational `e`.
pub fn binomial_tuple(eps: &Rational, m: u32) -> Vec<Rational> {
    let mut entries = Vec::with_capacity(m as usize + 2);
    let one = Rational::one();
    entries.push(num_traits::pow(&one - eps, m as usize));
    let mut power = one.clone();
    for j in 1..=m {
        power *= eps;
        let term = Rational::from_integer(binomial(m, j)) * &power;
        entries.push(if j % 2 == 1 { term } else { -term });
    }
    entries.push(-one);
    entries
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialLift {
    pub tuple: UnitTuple,
    pub degenerate: bool,
}

/// Lifts a solution `e + (1 - e) = 1` to an `(m+2)`-term unit equation.
pub fn lift_binomial(eps: &Rational, m: u32, s: &SContext) -> Result<BinomialLift, UnitSolveError> {
    if m == 0 {
        return Err(UnitSolveError::Precondition("m must be at least 1".into()));
    }
    let complement = Rational::one() - eps;
    if !sarith::is_s_unit(eps, s) || !sarith::is_s_unit(&complement, s) {
        return Err(UnitSolveError::Precondition("eps and 1 - eps must be S-units".into()));
    }
    let coefficients: Vec<Rational> = (1..m).map(|j| Rational::from_integer(binomial(m, j))).collect();
    let s_prime = sarith::extend_s(s, &coefficients)?;
    let tuple = UnitTuple::new(binomial_tuple(eps, m), s_prime).map_err(|e| UnitSolveError::Internal(e.to_string()))?;
    let degenerate = tuple.is_degenerate();
    Ok(BinomialLift { tuple, degenerate })
}

/// The unit pair `(e1, e2)` with `e1 + e2 = 1` encoded by a three-term class `(1, a, b)`.
pub fn class_to_unit_pair(rep: &ClassRep) -> Option<(Rational, Rational)> {
    match rep.entries() {
        [first, a, b] if first.is_one() => Some((-a, -b)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{frac, int, DEFAULT_CAP};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ctx(ps: &[u64]) -> SContext {
        SContext::new(ps.iter().copied()).unwrap()
    }

    fn r(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn class_set(sol: &UnitSolutions) -> BTreeSet<Vec<Rational>> {
        sol.classes.iter().map(|c| c.entries().to_vec()).collect()
    }

    #[test]
    fn vanishing_subsum_examples() {
        assert_eq!(vanishing_subsums(&r(&[1, -1, 2, -2]), 2), vec![vec![0, 1], vec![2, 3]]);
        assert!(vanishing_subsums(&r(&[4, 6, -9, -1]), 2).is_empty());
        assert!(vanishing_subsums(&r(&[1, 1, -2]), 2).is_empty());
        assert_eq!(vanishing_subsums(&r(&[0, 1, -1]), 1), vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn two_term_examples() {
        let sol = solve_unit_equation(1, &ctx(&[2, 3]), 4, DEFAULT_CAP).unwrap();
        let set = class_set(&sol);
        for want in [[1, 1, -2], [1, 2, -3], [1, 3, -4], [1, 8, -9], [1, -3, 2]] {
            assert!(set.contains(&r(&want)), "missing {want:?}");
        }
        assert!(sol.degenerate.is_empty());
        assert!(solve_unit_equation(1, &SContext::empty(), 0, DEFAULT_CAP).unwrap().classes.is_empty());
    }

    #[test]
    fn three_term_example() {
        let sol = solve_unit_equation(2, &ctx(&[2, 3]), 3, DEFAULT_CAP).unwrap();
        let target = ClassRep::from_entries(r(&[4, 6, -9, -1]), ctx(&[2, 3])).unwrap();
        assert!(sol.classes.contains(&target));
        assert_eq!(target.entries(), &[int(1), frac(3, 2), frac(-9, 4), frac(-1, 4)]);
        // (1, -1, t, -t) is degenerate and reported separately
        let degenerate = ClassRep::from_entries(r(&[1, -1, 2, -2]), ctx(&[2, 3])).unwrap();
        assert!(sol.degenerate.contains(&degenerate));
        assert!(!sol.classes.contains(&degenerate));
    }

    #[test]
    fn solver_rejects_zero_n_and_reports_cap() {
        assert_eq!(solve_unit_equation(0, &ctx(&[2]), 1, DEFAULT_CAP), Err(UnitSolveError::InvalidN(0)));
        match solve_unit_equation(2, &ctx(&[2, 3]), 2, 100) {
            Err(UnitSolveError::CapExceeded { .. }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn outputs_satisfy_invariants_and_grow_with_bound() {
        let s = ctx(&[2, 3]);
        let mut previous = BTreeSet::new();
        for b in 0..=5 {
            let sol = solve_unit_equation(1, &s, b, DEFAULT_CAP).unwrap();
            for c in &sol.classes {
                assert!(c.entries()[0].is_one());
                assert!(is_nondegenerate_solution(c.entries(), &s));
            }
            let set = class_set(&sol);
            assert!(previous.is_subset(&set));
            previous = set;
        }
    }

    #[test]
    fn class_normalization_is_invariant() {
        let s = ctx(&[2, 3]);
        let sol = solve_unit_equation(1, &s, 3, DEFAULT_CAP).unwrap();
        let etas = sarith::enumerate_s_units(&s, 2, DEFAULT_CAP).unwrap();
        for c in &sol.classes {
            for eta in etas.iter().step_by(7) {
                let scaled: Vec<Rational> = c.entries().iter().map(|e| e * eta).collect();
                assert_eq!(&ClassRep::from_entries(scaled, s.clone()).unwrap(), c);
            }
        }
    }

    #[test]
    fn lift_gamma_examples() {
        let out = lift_gamma(&r(&[1, -1]), &int(3), 1, &ctx(&[2])).unwrap();
        assert_eq!(out.entries(), r(&[3, -2, -1]).as_slice());
        assert_eq!(out.context(), &ctx(&[2, 3]));

        let out = lift_gamma(&r(&[1, 1, -2]), &int(5), 1, &ctx(&[2])).unwrap();
        assert_eq!(out.entries(), r(&[5, 5, -8, -2]).as_slice());
        assert_eq!(out.context(), &ctx(&[2, 5]));

        let out = lift_gamma(&r(&[1, -1]), &int(5), 2, &ctx(&[2])).unwrap();
        assert_eq!(out.entries(), r(&[5, -3, -1, -1]).as_slice());
        assert_eq!(out.context(), &ctx(&[2, 3, 5]));
    }

    #[test]
    fn lift_gamma_rejects_bad_gamma() {
        // 2 is an S-unit for S = {2}
        assert!(matches!(lift_gamma(&r(&[1, -1]), &int(2), 1, &ctx(&[2])), Err(UnitSolveError::InvalidGamma(_))));
        // 1/3 is not an S-integer
        assert!(matches!(lift_gamma(&r(&[1, -1]), &frac(1, 3), 1, &ctx(&[2])), Err(UnitSolveError::InvalidGamma(_))));
        // 2/6 = 1/3 is not an S-integer but 3/6 = 1/2 is, over S = {2}
        assert!(matches!(lift_gamma(&r(&[1, -1]), &int(6), 3, &ctx(&[2])), Err(UnitSolveError::InvalidGamma(_))));
        assert!(matches!(lift_gamma(&r(&[1, 1, -2]), &int(3), 0, &ctx(&[2])), Err(UnitSolveError::Precondition(_))));
    }

    #[test]
    fn lift_binomial_examples() {
        let out = lift_binomial(&int(3), 2, &ctx(&[2, 3])).unwrap();
        assert_eq!(out.tuple.entries(), r(&[4, 6, -9, -1]).as_slice());
        assert!(!out.degenerate);

        let out = lift_binomial(&int(2), 2, &ctx(&[2])).unwrap();
        assert_eq!(out.tuple.entries(), r(&[1, 4, -4, -1]).as_slice());
        assert!(out.degenerate);
        assert_eq!(vanishing_subsums(out.tuple.entries(), 2), vec![vec![0, 3], vec![1, 2]]);

        let out = lift_binomial(&int(-1), 1, &ctx(&[2])).unwrap();
        assert_eq!(out.tuple.entries(), r(&[2, -1, -1]).as_slice());
        assert!(!out.degenerate);

        assert!(matches!(lift_binomial(&int(5), 2, &ctx(&[2])), Err(UnitSolveError::Precondition(_))));
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(8, 0), BigInt::one());
        assert_eq!(binomial(8, 8), BigInt::one());
    }

    #[test]
    fn nondegenerate_binomial_lifts_pass_validity() {
        let s = ctx(&[2, 3]);
        let pairs = solve_unit_equation(1, &s, 4, DEFAULT_CAP).unwrap();
        for c in &pairs.classes {
            let (eps, _) = class_to_unit_pair(c).unwrap();
            for m in 1..=4 {
                let lift = lift_binomial(&eps, m, &s).unwrap();
                if !lift.degenerate {
                    assert!(is_nondegenerate_solution(lift.tuple.entries(), lift.tuple.context()));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn binomial_tuple_sums_to_zero(n in -10_000i64..10_000, d in 1i64..10_000, m in 1u32..=8) {
            let eps = frac(n, d);
            let total: Rational = binomial_tuple(&eps, m).iter().sum();
            prop_assert!(total.is_zero());
        }
    }
}
