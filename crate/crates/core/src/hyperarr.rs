//! Arrangements of `n + 2` hyperplanes in `P^n` and their S-integral points.
//!
//! The standard arrangement is `X_0, ..., X_n` together with `X_0 + ... + X_n`.
//! Its S-integral points are exactly the points `(e_0 : ... : e_n)` for which
//! `(e_0, ..., e_n, -(e_0 + ... + e_n))` solves the unit equation. Such a point
//! either lies on a hyperplane `sum_{i in I} X_i = 0` cut out by a vanishing
//! subsum, or belongs to the finite non-degenerate list.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::projective::{self, Hyperplane, ProjPoint, ProjectiveError};
use crate::sarith::{self, Rational, SContext};
use crate::unitsolve::{self, UnitSolveError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperArrError {
    #[error("expected {expected} forms, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("forms {0} and {1} define the same hyperplane")]
    Repeated(usize, usize),
    #[error("subspace is not contained in X_0 + ... + X_n = 0")]
    NotInL0,
    #[error("subspace lies inside X_{0} = 0")]
    InsideCoordinateHyperplane(usize),
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("witness is not a point of the subspace")]
    WitnessOutside,
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Unit(#[from] UnitSolveError),
}

/// `n + 2` pairwise distinct hyperplanes of `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFormSystem {
    forms: Vec<Hyperplane>,
}

impl LinearFormSystem {
    pub fn new(forms: Vec<Hyperplane>) -> Result<Self, HyperArrError> {
        let width = forms.first().map_or(0, |h| h.coeffs().len());
        if width < 2 || forms.len() != width + 1 {
            return Err(HyperArrError::WrongCount { expected: width + 1, got: forms.len() });
        }
        for (i, h) in forms.iter().enumerate() {
            if h.coeffs().len() != width {
                return Err(ProjectiveError::DimensionMismatch { expected: width, got: h.coeffs().len() }.into());
            }
            if let Some(j) = forms[..i].iter().position(|g| g == h) {
                return Err(HyperArrError::Repeated(j, i));
            }
        }
        Ok(Self { forms })
    }

    /// `X_0, ..., X_n, X_0 + ... + X_n`.
    pub fn standard(n: usize) -> Self {
        let mut forms: Vec<Hyperplane> = (0..=n).map(|i| Hyperplane::coordinate(n, i)).collect();
        forms.push(Hyperplane::from_ints(&vec![1; n + 1]).expect("nonzero"));
        Self { forms }
    }

    pub fn forms(&self) -> &[Hyperplane] {
        &self.forms
    }

    /// Projective dimension `n`.
    pub fn dim(&self) -> usize {
        self.forms.len() - 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReorder {
    /// The forms have rank `r + 1`.
    pub r: usize,
    /// `permutation[new] = old`: the reordered `L_0, ..., L_r` are independent.
    pub permutation: Vec<usize>,
    /// Nonzero `a_0, ..., a_m` with `L_{r+1} = a_0 L_0 + ... + a_m L_m` and `m <= r` minimal.
    #[serde(with = "sarith::rational_vec")]
    pub coefficients: Vec<Rational>,
}

impl RankReorder {
    pub fn m(&self) -> usize {
        self.coefficients.len() - 1
    }
}

fn rows_of(forms: &[&Hyperplane]) -> Matrix {
    forms.iter().map(|h| h.as_rationals()).collect()
}

/// Finds a smallest dependent subset (a circuit), puts its last member at
/// position `r + 1` and the others first, then completes a basis greedily.
pub fn rank_and_reorder(sys: &LinearFormSystem) -> RankReorder {
    let forms = &sys.forms;
    let count = forms.len();
    let rank = linalg::rank(&rows_of(&forms.iter().collect::<Vec<_>>()));
    let mut circuit: Option<Vec<usize>> = None;
    'search: for size in 2..=count {
        for mask in 1u32..(1 << count) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let idx: Vec<usize> = (0..count).filter(|i| mask & (1 << i) != 0).collect();
            let sub: Vec<&Hyperplane> = idx.iter().map(|&i| &forms[i]).collect();
            if linalg::rank(&rows_of(&sub)) < size {
                circuit = Some(idx);
                break 'search;
            }
        }
    }
    let circuit = circuit.expect("n + 2 vectors in dimension n + 1 are dependent");
    let (&last, head) = circuit.split_last().expect("circuit has at least two members");
    // Solve sum a_i L_i = L_last over the circuit head.
    let columns: Matrix = (0..forms[0].coeffs().len())
        .map(|c| {
            let mut row: Vec<Rational> = head.iter().map(|&i| Rational::from_integer(forms[i].coeffs()[c].clone())).collect();
            row.push(Rational::from_integer(forms[last].coeffs()[c].clone()));
            row
        })
        .collect();
    let kernel = linalg::nullspace(&columns, head.len() + 1);
    let v = &kernel[0];
    let scale = -v[head.len()].clone();
    let coefficients: Vec<Rational> = v[..head.len()].iter().map(|x| x / &scale).collect();

    let mut order: Vec<usize> = head.to_vec();
    for i in 0..count {
        if order.len() == rank {
            break;
        }
        if i == last || order.contains(&i) {
            continue;
        }
        let mut trial: Vec<&Hyperplane> = order.iter().map(|&j| &forms[j]).collect();
        trial.push(&forms[i]);
        if linalg::rank(&rows_of(&trial)) == trial.len() {
            order.push(i);
        }
    }
    order.push(last);
    order.extend((0..count).filter(|i| !order.contains(i)).collect::<Vec<_>>());
    RankReorder { r: rank - 1, permutation: order, coefficients }
}

/// The coordinate change that turns an arrangement into the standard one on `P^m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reduction {
    pub reorder: RankReorder,
    /// Rows are `Y_0 = a_0 L_0, ..., Y_m = a_m L_m`, then completing forms.
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Matrix,
    /// Primes to add to S for the change of coordinates.
    pub delta: SContext,
}

fn serialize_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(sarith::format_rational).collect()).collect();
    rows.serialize(s)
}

pub fn reduce_arrangement(sys: &LinearFormSystem) -> Result<Reduction, HyperArrError> {
    let reorder = rank_and_reorder(sys);
    let width = sys.dim() + 1;
    let mut matrix: Matrix = Vec::with_capacity(width);
    for (j, a) in reorder.coefficients.iter().enumerate() {
        let row = sys.forms[reorder.permutation[j]].as_rationals();
        matrix.push(row.iter().map(|x| x * a).collect());
    }
    let mut candidates: Vec<Vec<Rational>> =
        reorder.permutation[reorder.m() + 1..=reorder.r].iter().map(|&i| sys.forms[i].as_rationals()).collect();
    candidates.extend(linalg::identity(width));
    for row in candidates {
        if matrix.len() == width {
            break;
        }
        let mut trial = matrix.clone();
        trial.push(row.clone());
        if linalg::rank(&trial) == trial.len() {
            matrix.push(row);
        }
    }
    let delta = projective::matrix_delta(&matrix)?;
    Ok(Reduction { reorder, matrix, delta })
}

/// A linear subspace spanned by the rows of `basis`, of projective dimension `rows - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceModel {
    #[serde(serialize_with = "serialize_matrix")]
    basis: Matrix,
}

impl SubspaceModel {
    pub fn new(basis: Matrix) -> Result<Self, HyperArrError> {
        if basis.is_empty() || linalg::rank(&basis) != basis.len() {
            return Err(HyperArrError::DependentBasis);
        }
        Ok(Self { basis })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self, HyperArrError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| sarith::int(x)).collect()).collect())
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Projective dimension `s`.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.basis[0].len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut m = self.basis.clone();
        m.push(v.to_vec());
        linalg::rank(&m) == self.basis.len()
    }
}

/// Reduced echelon basis, a canonical name for the span.
fn canonical_span(rows: &Matrix) -> Matrix {
    let (r, pivots) = linalg::rref(rows);
    r.into_iter().take(pivots.len()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub s: usize,
    /// Number of distinct subspaces among `L cap H_0, ..., L cap H_n`.
    pub count: usize,
    /// Whether the witness has nonzero coordinates and no vanishing subsum of 1 to n terms.
    pub hypothesis_holds: Option<bool>,
    /// `s + 2` for `s >= 1`; for a point every trace is empty and there is nothing to count.
    pub required: Option<usize>,
}

impl TraceReport {
    /// The lower bound holds, or the hypothesis that forces it is absent.
    pub fn consistent(&self) -> bool {
        match (self.hypothesis_holds, self.required) {
            (Some(true), Some(req)) => self.count >= req,
            _ => true,
        }
    }
}

/// Counts the distinct traces `L cap H_i` of the coordinate hyperplanes on `L`,
/// where `L` must lie in `X_0 + ... + X_n = 0`.
pub fn distinct_traces(l: &SubspaceModel, witness: Option<&[Rational]>) -> Result<TraceReport, HyperArrError> {
    let width = l.ambient();
    if l.basis.iter().any(|row| !row.iter().sum::<Rational>().is_zero()) {
        return Err(HyperArrError::NotInL0);
    }
    let mut traces: BTreeSet<Matrix> = BTreeSet::new();
    for i in 0..width {
        let column: Vec<Rational> = l.basis.iter().map(|row| row[i].clone()).collect();
        if column.iter().all(Zero::is_zero) {
            return Err(HyperArrError::InsideCoordinateHyperplane(i));
        }
        let kernel = linalg::nullspace(&[column], l.basis.len());
        let vectors: Matrix = kernel.iter().map(|c| linalg::vec_mat(c, &l.basis)).collect();
        traces.insert(if vectors.is_empty() { Vec::new() } else { canonical_span(&vectors) });
    }
    let hypothesis_holds = match witness {
        None => None,
        Some(u) => {
            if u.len() != width || !l.contains(u) {
                return Err(HyperArrError::WitnessOutside);
            }
            Some(u.iter().all(|x| !x.is_zero()) && unitsolve::vanishing_subsums(u, 1).is_empty())
        }
    };
    let s = l.dim();
    Ok(TraceReport { s, count: traces.len(), hypothesis_holds, required: (s >= 1).then_some(s + 2) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    pub n: usize,
    pub primes: SContext,
    pub bound: u32,
    /// `sum_{i in I} X_i = 0` (after eliminating the last entry) for the subsums met.
    pub subsum_hyperplanes: Vec<Hyperplane>,
    /// One hyperplane through each exceptional point.
    pub point_hyperplanes: Vec<Hyperplane>,
    /// Points with no vanishing proper subsum: the finite part.
    pub exceptional: Vec<ProjPoint>,
    pub degenerate: Vec<ProjPoint>,
    pub covered: bool,
}

impl CoveringReport {
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut all: Vec<Hyperplane> = self.subsum_hyperplanes.iter().chain(&self.point_hyperplanes).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        let mut all: Vec<ProjPoint> = self.exceptional.iter().chain(&self.degenerate).cloned().collect();
        all.sort();
        all
    }
}

/// Hyperplane of `P^n` on which the subsum over `I` of `(x_0, ..., x_n, -sum x)` vanishes.
pub fn subsum_hyperplane(n: usize, subset: &[usize]) -> Result<Hyperplane, HyperArrError> {
    let has_last = subset.contains(&(n + 1));
    let coeffs: Vec<i64> = (0..=n).map(|i| i64::from(subset.contains(&i)) - i64::from(has_last)).collect();
    Ok(Hyperplane::from_ints(&coeffs)?)
}

/// A hyperplane through `p` (a point, when `n = 1`).
fn hyperplane_through(p: &ProjPoint) -> Result<Hyperplane, HyperArrError> {
    let c = p.as_rationals();
    let mut coeffs = vec![Rational::zero(); c.len()];
    // Pair the first nonzero coordinate with a neighbour: x_j X_i - x_i X_j.
    let i = c.iter().position(|x| !x.is_zero()).expect("point");
    let j = if i + 1 < c.len() { i + 1 } else { i - 1 };
    coeffs[i] = c[j].clone();
    coeffs[j] = -c[i].clone();
    if coeffs.iter().all(Zero::is_zero) {
        coeffs[j] = Rational::one();
    }
    Ok(Hyperplane::new(&coeffs)?)
}

/// Point of `P^n` attached to a unit-equation representative `(e_0, ..., e_n, e_{n+1})`.
pub fn class_point(entries: &[Rational]) -> Result<ProjPoint, HyperArrError> {
    Ok(projective::normalize(&entries[..entries.len() - 1])?)
}

/// S-integral points of `P^n` minus the standard arrangement with exponents in
/// `[-bound, bound]`, split into the exceptional and the degenerate ones, with
/// hyperplanes covering all of them.
pub fn covering_hyperplanes(n: usize, s: &SContext, bound: u32, cap: usize) -> Result<CoveringReport, HyperArrError> {
    let sols = unitsolve::solve_unit_equation(n, s, bound, cap)?;
    let mut subsum: BTreeSet<Hyperplane> = BTreeSet::new();
    let mut through: BTreeSet<Hyperplane> = BTreeSet::new();
    let mut exceptional = Vec::new();
    let mut degenerate = Vec::new();
    for rep in &sols.classes {
        let p = class_point(rep.entries())?;
        through.insert(hyperplane_through(&p)?);
        exceptional.push(p);
    }
    for rep in &sols.degenerate {
        let p = class_point(rep.entries())?;
        let first = unitsolve::vanishing_subsums(rep.entries(), 2).into_iter().next().expect("degenerate");
        subsum.insert(subsum_hyperplane(n, &first)?);
        degenerate.push(p);
    }
    exceptional.sort();
    degenerate.sort();
    let mut report = CoveringReport {
        n,
        primes: s.clone(),
        bound,
        subsum_hyperplanes: subsum.into_iter().collect(),
        point_hyperplanes: through.into_iter().collect(),
        exceptional,
        degenerate,
        covered: false,
    };
    report.covered = verify_covering(&report.points(), &report.hyperplanes());
    Ok(report)
}

/// Every point lies on at least one of the hyperplanes.
pub fn verify_covering(points: &[ProjPoint], hyperplanes: &[Hyperplane]) -> bool {
    points.iter().all(|p| hyperplanes.iter().any(|h| h.contains(p).unwrap_or(false)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrangementCover {
    pub reduction: Reduction,
    /// The cover computed on the standard arrangement of `P^m`, in the `Y` coordinates.
    pub standard: CoveringReport,
    /// The same hyperplanes pulled back to the original coordinates.
    pub hyperplanes: Vec<Hyperplane>,
}

/// Covers the S-integral points of an arbitrary arrangement by passing to the
/// standard arrangement in `Y_0, ..., Y_m` over `S` enlarged by the change of
/// coordinates.
pub fn cover_arrangement(sys: &LinearFormSystem, s: &SContext, bound: u32, cap: usize) -> Result<ArrangementCover, HyperArrError> {
    let reduction = reduce_arrangement(sys)?;
    let m = reduction.reorder.m();
    let standard = covering_hyperplanes(m, &s.union(&reduction.delta), bound, cap)?;
    let mut hyperplanes = Vec::new();
    for h in standard.hyperplanes() {
        let c = h.as_rationals();
        let pulled = linalg::vec_mat(&c, &reduction.matrix[..=m]);
        hyperplanes.push(Hyperplane::new(&pulled)?);
    }
    hyperplanes.sort();
    hyperplanes.dedup();
    Ok(ArrangementCover { reduction, standard, hyperplanes })
}

/// `(y_0 : ... : y_m)` for a point of the original space, `y = M x` truncated.
pub fn standard_image(reduction: &Reduction, p: &ProjPoint) -> Result<ProjPoint, HyperArrError> {
    let y = linalg::mat_vec(&reduction.matrix, &p.as_rationals());
    Ok(projective::normalize(&y[..=reduction.reorder.m()])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarith::{int, DEFAULT_CAP};
    use proptest::prelude::*;

    fn sys(rows: &[&[i64]]) -> LinearFormSystem {
        LinearFormSystem::new(rows.iter().map(|r| Hyperplane::from_ints(r).unwrap()).collect()).unwrap()
    }

    fn ctx(ps: &[u64]) -> SContext {
        SContext::new(ps.iter().copied()).unwrap()
    }

    fn reconstructs(sys: &LinearFormSystem, rr: &RankReorder) -> bool {
        let target = sys.forms()[rr.permutation[rr.r + 1]].as_rationals();
        let mut sum = vec![Rational::zero(); target.len()];
        for (j, a) in rr.coefficients.iter().enumerate() {
            for (acc, x) in sum.iter_mut().zip(sys.forms()[rr.permutation[j]].as_rationals()) {
                *acc += a * x;
            }
        }
        sum == target
    }

    #[test]
    fn rank_examples() {
        let a = sys(&[&[1, 0], &[0, 1], &[1, 1]]);
        let rr = rank_and_reorder(&a);
        assert_eq!((rr.r, rr.coefficients.clone()), (1, vec![int(1), int(1)]));
        assert!(reconstructs(&a, &rr));

        let b = sys(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        let rr = rank_and_reorder(&b);
        assert_eq!((rr.r, rr.m()), (2, 2));
        assert!(rr.coefficients.iter().all(|a| *a == int(1)));

        let c = sys(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        let rr = rank_and_reorder(&c);
        assert_eq!((rr.r, rr.m()), (2, 1));
        assert!(reconstructs(&c, &rr));
        assert_eq!(rr.permutation, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_repeats() {
        let forms = vec![Hyperplane::from_ints(&[1, 0]).unwrap(), Hyperplane::from_ints(&[2, 0]).unwrap(), Hyperplane::from_ints(&[1, 1]).unwrap()];
        assert_eq!(LinearFormSystem::new(forms), Err(HyperArrError::Repeated(0, 1)));
    }

    #[test]
    fn traces_examples() {
        // L_0 in P^2 is a line; the witness (1:1:-2) is valid.
        let l = SubspaceModel::from_ints(&[vec![1, -1, 0], vec![0, 1, -1]]).unwrap();
        let r = distinct_traces(&l, Some(&[int(1), int(1), int(-2)])).unwrap();
        assert_eq!(r.count, 3);
        assert_eq!(r.hypothesis_holds, Some(true));
        assert!(r.consistent());

        let m = SubspaceModel::from_ints(&[vec![1, 1, -1, -1], vec![1, -1, 0, 0]]).unwrap();
        let r = distinct_traces(&m, Some(&[int(1), int(1), int(-1), int(-1)])).unwrap();
        assert_eq!(r.hypothesis_holds, Some(false));
        assert_eq!(r.count, 3);
        assert!(r.consistent());

        let p = SubspaceModel::from_ints(&[vec![1, 1, -2]]).unwrap();
        let r = distinct_traces(&p, Some(&[int(1), int(1), int(-2)])).unwrap();
        assert_eq!((r.s, r.count, r.required), (0, 1, None));

        let outside = SubspaceModel::from_ints(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(distinct_traces(&outside, None), Err(HyperArrError::NotInL0));
        let inside = SubspaceModel::from_ints(&[vec![0, 1, -1]]).unwrap();
        assert_eq!(distinct_traces(&inside, None), Err(HyperArrError::InsideCoordinateHyperplane(0)));
    }

    #[test]
    fn covering_examples() {
        let one = covering_hyperplanes(1, &ctx(&[2, 3]), 4, DEFAULT_CAP).unwrap();
        assert!(one.degenerate.is_empty() && one.subsum_hyperplanes.is_empty());
        let sols = unitsolve::solve_unit_equation(1, &ctx(&[2, 3]), 4, DEFAULT_CAP).unwrap();
        assert_eq!(one.exceptional.len(), sols.classes.len());
        assert!(one.covered);

        let two = covering_hyperplanes(2, &ctx(&[2, 3]), 3, DEFAULT_CAP).unwrap();
        assert!(two.covered);
        assert!(two.subsum_hyperplanes.contains(&Hyperplane::from_ints(&[1, 1, 0]).unwrap()));
        assert!(two.degenerate.contains(&ProjPoint::from_ints(&[1, -1, 2]).unwrap()));
    }

    #[test]
    fn covering_tiny_case_by_hand() {
        // S empty: coordinates and their sum are +-1.
        let rep = covering_hyperplanes(2, &SContext::empty(), 1, DEFAULT_CAP).unwrap();
        let mut oracle = Vec::new();
        for a in [-1i64, 1] {
            for b in [-1i64, 1] {
                if (1 + a + b).abs() == 1 {
                    oracle.push(ProjPoint::from_ints(&[1, a, b]).unwrap());
                }
            }
        }
        oracle.sort();
        assert_eq!(rep.points(), oracle);
        assert!(rep.exceptional.is_empty());
        assert!(rep.covered);
    }

    #[test]
    fn verify_covering_examples() {
        let p = ProjPoint::from_ints(&[1, -1, 0]).unwrap();
        let h = Hyperplane::from_ints(&[1, 1, 0]).unwrap();
        assert!(verify_covering(&[p], std::slice::from_ref(&h)));
        assert!(!verify_covering(&[ProjPoint::from_ints(&[1, 1, 1]).unwrap()], &[h]));
        assert!(verify_covering(&[], &[]));
    }

    #[test]
    fn reduction_of_skew_arrangement() {
        // Four lines in P^2 with L_3 = 2 L_0 - L_1 + 3 L_2.
        let a = sys(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1], &[2, 1, 5]]);
        let red = reduce_arrangement(&a).unwrap();
        assert!(reconstructs(&a, &red.reorder));
        let cover = cover_arrangement(&a, &ctx(&[2]), 2, DEFAULT_CAP).unwrap();
        assert!(cover.standard.covered);
        // Brute force: S'-integral points of small height whose standard image lies in the box.
        let s_prime = ctx(&[2]).union(&red.delta);
        let mut checked = 0;
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                for z in 0i64..=6 {
                    let Ok(p) = ProjPoint::from_ints(&[x, y, z]) else { continue };
                    if a.forms().iter().any(|h| h.contains(&p).unwrap()) {
                        continue;
                    }
                    if !projective::is_s_integral(&p, a.forms(), &s_prime).unwrap() {
                        continue;
                    }
                    let img = standard_image(&red, &p).unwrap();
                    if !cover.standard.points().contains(&img) {
                        continue;
                    }
                    checked += 1;
                    assert!(cover.hyperplanes.iter().any(|h| h.contains(&p).unwrap()), "{p}");
                }
            }
        }
        assert!(checked > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reorder_reconstructs(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 3), 4)) {
            let hs: Option<Vec<Hyperplane>> = rows.iter().map(|r| Hyperplane::from_ints(r).ok()).collect();
            prop_assume!(hs.is_some());
            let Ok(s) = LinearFormSystem::new(hs.unwrap()) else { return Ok(()) };
            let rr = rank_and_reorder(&s);
            prop_assert!(reconstructs(&s, &rr));
            prop_assert!(rr.coefficients.iter().all(|a| !a.is_zero()));
            prop_assert!(rr.m() <= rr.r);
            let indep: Vec<&Hyperplane> = rr.permutation[..=rr.r].iter().map(|&i| &s.forms()[i]).collect();
            prop_assert_eq!(linalg::rank(&rows_of(&indep)), rr.r + 1);
        }

        #[test]
        fn lines_meet_three_traces(a in prop::collection::vec(-3i64..4, 3), b in prop::collection::vec(-3i64..4, 3)) {
            let mut u = a.clone();
            u.push(-a.iter().sum::<i64>());
            let mut v = b.clone();
            v.push(-b.iter().sum::<i64>());
            let Ok(l) = SubspaceModel::from_ints(&[u.clone(), v]) else { return Ok(()) };
            let w: Vec<Rational> = u.iter().map(|&x| int(x)).collect();
            let Ok(r) = distinct_traces(&l, Some(&w)) else { return Ok(()) };
            prop_assert!(r.consistent());
        }
    }
}
