//! Cross-module verification suites.
//!
//! Each suite is a list of named checks run in order until the time budget
//! runs out. A check passes only if every instance it covers passes.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::approx;
use crate::curves::{self, CurvePoint, CurveSpec};
use crate::hyperarr::{self, LinearFormSystem, SubspaceModel};
use crate::projective::{self, Hyperplane, ProjPoint};
use crate::sarith::{self, frac, int, Rational, SContext, DEFAULT_CAP};
use crate::thuemahler::{self, BinaryForm, BinaryFormSpec, ShearDirection};
use crate::unitsolve;

pub const SUITES: &[&str] = &["prop21", "prop51", "prop61", "potpourri"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite {0:?} (known: prop21, prop51, prop61, potpourri)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub time: Duration,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { time: Duration::from_secs(300), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub instances: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    /// Checks skipped because the budget ran out.
    pub skipped: Vec<String>,
    pub budget_exhausted: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.budget_exhausted && self.checks.iter().all(|c| c.passed)
    }
}

/// Outcome of one check: instances examined and the first failure, if any.
type Outcome = Result<usize, String>;

struct Check {
    name: &'static str,
    anchor: &'static str,
    run: fn(&mut ChaCha8Rng) -> Outcome,
}

pub fn run_verification_suite(name: &str, budget: Budget) -> Result<SuiteReport, SuiteError> {
    let checks = match name {
        "prop21" => prop21(),
        "prop51" => prop51(),
        "prop61" => prop61(),
        "potpourri" => potpourri(),
        other => return Err(SuiteError::Unknown(other.to_string())),
    };
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut report =
        SuiteReport { suite: name.to_string(), seed: budget.seed, checks: Vec::new(), skipped: Vec::new(), budget_exhausted: false };
    for check in checks {
        if start.elapsed() > budget.time {
            report.budget_exhausted = true;
            report.skipped.push(check.name.to_string());
            continue;
        }
        let outcome = (check.run)(&mut rng);
        let (passed, instances, detail) = match outcome {
            Ok(n) => (true, n, String::new()),
            Err(msg) => (false, 0, msg),
        };
        report.checks.push(CheckResult { name: check.name.into(), anchor: check.anchor.into(), passed, instances, detail });
    }
    Ok(report)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s23() -> SContext {
    SContext::new([2, 3]).expect("primes")
}

fn random_rational(rng: &mut ChaCha8Rng, size: i64) -> Rational {
    frac(rng.gen_range(-size..=size), rng.gen_range(1..=size))
}

fn prop21() -> Vec<Check> {
    vec![
        Check { name: "kappa-backward", anchor: "Thue solutions give rational approximations", run: kappa_backward_check },
        Check { name: "kappa-forward", anchor: "good approximations give Thue solutions", run: kappa_forward_check },
    ]
}

/// Forms with `F(x, y) = 1` solvable, checked at height 100.
const THUE_FORMS: &[(&[i64], i64)] = &[(&[1, 0, 0, -2], 1), (&[1, 0, -3, 1], 1), (&[1, 1, -2, -1], 1), (&[1, 0, 0, 0, -2], 1)];

fn kappa_backward_check(_: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for (f, k) in THUE_FORMS {
        let coeffs = approx::to_bigints(f);
        for (x, y) in approx::thue_solutions(f, *k, 100) {
            if y == 0 {
                continue;
            }
            let r = approx::verify_inequality(&coeffs, &BigInt::from(*k), &BigInt::from(x), &BigInt::from(y), 64)
                .map_err(|e| format!("{f:?} at ({x},{y}): {e}"))?;
            let required = r.above_threshold == Some(true);
            ensure(r.holds.is_some() && r.above_threshold.is_some(), || format!("{f:?} at ({x},{y}): undecided"))?;
            ensure(!required || r.holds == Some(true), || format!("{f:?} at ({x},{y}): inequality fails above threshold"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn kappa_forward_check(_: &mut ChaCha8Rng) -> Outcome {
    // Convergents of 2^(1/3) = [1; 3, 1, 5, 1, 1, 4, ...]: F(p, q) stays bounded.
    let coeffs = approx::to_bigints(&[1, 0, 0, -2]);
    let roots = approx::isolate_roots(&coeffs, 128).map_err(|e| e.to_string())?;
    let (_, real) = roots.real_roots().next().ok_or("no real root")?;
    let mid = real.real_interval().mid();
    let mut n = 0;
    for pq in approx::convergents(&mid, 8).into_iter().skip(1) {
        let r = match approx::forward_bound(&coeffs, &int(1), &pq, 64) {
            Ok(r) => r,
            Err(approx::ApproxError::QTooSmall) => continue,
            Err(e) => return Err(e.to_string()),
        };
        if r.approximates == Some(true) {
            ensure(r.within == Some(true), || format!("{pq}: |F| = {} above bound", r.abs_value))?;
            n += 1;
        }
    }
    ensure(n > 0, || "no convergent met the approximation hypothesis".into())?;
    Ok(n)
}

fn prop51() -> Vec<Check> {
    vec![
        Check { name: "siegel-identity", anchor: "Siegel identity for three linear factors", run: siegel_identity_check },
        Check { name: "thue-to-unit-round-trip", anchor: "Thue-Mahler solution to unit equation and back", run: transport_round_trip },
        Check { name: "unit-to-point-dictionary", anchor: "unit equation and integral points of P^1 minus three points", run: dictionary_check },
        Check { name: "shear-to-pivot", anchor: "split cubic sheared to XY(X-Y)", run: shear_check },
    ]
}

fn siegel_identity_check(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..500 {
        let roots = [random_rational(rng, 1000), random_rational(rng, 1000), random_rational(rng, 1000)];
        let (x, y) = (random_rational(rng, 1000), random_rational(rng, 1000));
        let r = thuemahler::siegel_residue([&roots[0], &roots[1], &roots[2]], &x, &y);
        ensure(r.is_zero(), || format!("residue {r} at roots {roots:?}"))?;
    }
    Ok(500)
}

fn transport_round_trip(_: &mut ChaCha8Rng) -> Outcome {
    let s = s23();
    let spec = BinaryFormSpec::cubic([int(0), int(1), int(-1)], int(1)).map_err(|e| e.to_string())?;
    let form = BinaryForm::Split(spec.clone());
    let sols = thuemahler::solve_thue_mahler(&form, &s, 40, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut n = 0;
    for sol in &sols {
        if sol.x == &sol.y * spec.roots()[0] {
            continue;
        }
        let t = thuemahler::transport_thue_to_unit(sol, &spec, &s).map_err(|e| e.to_string())?;
        let back = thuemahler::transport_unit_to_thue(&t.gamma, &spec, &t.betas[0]).map_err(|e| e.to_string())?;
        ensure(back == *sol, || format!("{sol:?} came back as {back:?}"))?;
        n += 1;
    }
    ensure(n > 0, || "no solutions found".into())?;
    Ok(n)
}

fn dictionary_check(_: &mut ChaCha8Rng) -> Outcome {
    let s = s23();
    let height = 60u64;
    let points = thuemahler::three_point_integral_points(&s, height).map_err(|e| e.to_string())?;
    // Heights up to 60 need exponents at most 6 on both primes.
    let sols = unitsolve::solve_unit_equation(1, &s, 6, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut images = Vec::new();
    for c in &sols.classes {
        let (e1, e2) = unitsolve::class_to_unit_pair(c).ok_or("class is not a triple")?;
        let p = thuemahler::unit_to_point(&e1, &e2, &s).map_err(|e| e.to_string())?;
        if p.height() <= BigInt::from(height) {
            images.push(p);
        }
    }
    images.sort();
    ensure(images == points, || format!("{} images vs {} points", images.len(), points.len()))?;
    for p in &points {
        let (u, v) = thuemahler::point_to_unit(p, &s).map_err(|e| e.to_string())?;
        ensure(thuemahler::unit_to_point(&u, &v, &s).ok().as_ref() == Some(p), || format!("{p} does not come back"))?;
    }
    Ok(points.len())
}

fn shear_check(_: &mut ChaCha8Rng) -> Outcome {
    let s = s23();
    let spec = BinaryFormSpec::cubic([int(0), int(1), int(-1)], int(1)).map_err(|e| e.to_string())?;
    let form = BinaryForm::Split(spec);
    let sols = thuemahler::solve_thue_mahler(&form, &s, 30, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let sheared = thuemahler::shear_transform(&form, ShearDirection::IToIi, &sols, &s).map_err(|e| e.to_string())?;
    let s_prime = s.union(&sheared.delta);
    for sol in &sheared.solutions {
        ensure(sol.is_valid_over(&sheared.form, &s_prime), || format!("{sol:?} is not a solution after shearing"))?;
    }
    Ok(sheared.solutions.len())
}

fn prop61() -> Vec<Check> {
    vec![
        Check { name: "rank-reorder", anchor: "rank and dependency of n+2 linear forms", run: rank_check },
        Check { name: "trace-count", anchor: "a subspace of L0 meets coordinate hyperplanes in s+2 traces", run: trace_check },
        Check { name: "covering", anchor: "integral points lie on finitely many hyperplanes", run: covering_check },
        Check { name: "arrangement-reduction", anchor: "general arrangement reduced to the standard one", run: arrangement_check },
    ]
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> Option<LinearFormSystem> {
    let forms: Option<Vec<Hyperplane>> = (0..n + 2)
        .map(|_| {
            let row: Vec<i64> = (0..=n).map(|_| rng.gen_range(-3..=3)).collect();
            Hyperplane::from_ints(&row).ok()
        })
        .collect();
    LinearFormSystem::new(forms?).ok()
}

fn rank_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for _ in 0..300 {
        let dim = rng.gen_range(1..=4);
        let Some(sys) = random_system(rng, dim) else { continue };
        let rr = hyperarr::rank_and_reorder(&sys);
        let target = sys.forms()[rr.permutation[rr.r + 1]].as_rationals();
        let mut sum = vec![Rational::zero(); target.len()];
        for (j, a) in rr.coefficients.iter().enumerate() {
            for (acc, x) in sum.iter_mut().zip(sys.forms()[rr.permutation[j]].as_rationals()) {
                *acc += a * x;
            }
        }
        ensure(sum == target, || format!("dependency does not reconstruct for {:?}", sys.forms()))?;
        n += 1;
    }
    Ok(n)
}

/// A random vector of `L0` with entries in `[-3, 3]`.
fn random_l0_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    v.push(-v.iter().sum::<i64>());
    v.into_iter().map(int).collect()
}

fn trace_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for _ in 0..2000 {
        let dim = rng.gen_range(2..=5);
        let s = rng.gen_range(1..dim);
        let basis: Vec<Vec<Rational>> = (0..=s).map(|_| random_l0_vector(rng, dim)).collect();
        let Ok(l) = SubspaceModel::new(basis.clone()) else { continue };
        let Ok(r) = hyperarr::distinct_traces(&l, Some(&basis[0])) else { continue };
        if r.hypothesis_holds != Some(true) {
            continue;
        }
        ensure(r.consistent(), || format!("{} traces on a {s}-dimensional subspace {basis:?}", r.count))?;
        n += 1;
    }
    ensure(n > 0, || "no valid witness sampled".into())?;
    Ok(n)
}

fn covering_check(_: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for (dim, bound) in [(1, 6), (2, 2), (3, 1)] {
        let r = hyperarr::covering_hyperplanes(dim, &s23(), bound, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure(r.covered, || format!("cover fails in dimension {dim}"))?;
        n += r.points().len();
    }
    Ok(n)
}

fn arrangement_check(_: &mut ChaCha8Rng) -> Outcome {
    let rows: [&[i64]; 4] = [&[1, 1, 0], &[0, 1, 1], &[1, 0, 1], &[2, 1, 5]];
    let sys = LinearFormSystem::new(rows.iter().map(|r| Hyperplane::from_ints(r).expect("nonzero")).collect())
        .map_err(|e| e.to_string())?;
    let cover = hyperarr::cover_arrangement(&sys, &SContext::new([2]).expect("prime"), 2, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(cover.standard.covered, || "standard cover fails".into())?;
    // Points of the standard model pulled back must lie on the pulled-back hyperplanes.
    let m = cover.reduction.reorder.m();
    let inv = crate::linalg::inverse(&cover.reduction.matrix).ok_or("singular reduction")?;
    let mut n = 0;
    for p in cover.standard.points() {
        let mut y = p.as_rationals();
        y.resize(cover.reduction.matrix.len(), Rational::zero());
        if m + 1 < y.len() {
            y[m + 1] = Rational::one();
        }
        let x = projective::normalize(&crate::linalg::mat_vec(&inv, &y)).map_err(|e| e.to_string())?;
        ensure(cover.hyperplanes.iter().any(|h| h.contains(&x).unwrap_or(false)), || format!("{x} uncovered"))?;
        n += 1;
    }
    Ok(n)
}

fn potpourri() -> Vec<Check> {
    vec![
        Check { name: "binomial-lift", anchor: "binomial lift of a unit to a longer unit equation", run: binomial_check },
        Check { name: "gamma-lift", anchor: "gamma lift of a non-degenerate solution", run: gamma_check },
        Check { name: "curve-goldens", anchor: "classical curves have finitely many integral points", run: curves_check },
        Check { name: "coordinate-change", anchor: "S-integrality under change of coordinates", run: coordinate_check },
    ]
}

fn binomial_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for _ in 0..50 {
        let eps = random_rational(rng, 50);
        if eps.is_zero() || eps.is_one() {
            continue;
        }
        let s = sarith::extend_s(&SContext::empty(), &[eps.clone(), Rational::one() - &eps]).map_err(|e| e.to_string())?;
        for m in 2..=8 {
            let lift = unitsolve::lift_binomial(&eps, m, &s).map_err(|e| e.to_string())?;
            ensure(lift.tuple.entries().iter().sum::<Rational>().is_zero(), || format!("eps {eps}, m {m}: nonzero sum"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn gamma_check(_: &mut ChaCha8Rng) -> Outcome {
    let s = SContext::new([2]).expect("prime");
    let sols = unitsolve::solve_unit_equation(1, &s, 6, DEFAULT_CAP).map_err(|e| e.to_string())?;
    for c in &sols.classes {
        let t = unitsolve::lift_gamma(c.entries(), &int(3), 1, &s).map_err(|e| e.to_string())?;
        ensure(!t.is_degenerate(), || format!("{:?} lifts to a degenerate tuple", c.entries()))?;
    }
    Ok(sols.classes.len())
}

fn curves_check(_: &mut ChaCha8Rng) -> Outcome {
    let goldens = [
        (CurveSpec::Mordell { k: -2 }, 500u32, vec![CurvePoint::ints(3, -5), CurvePoint::ints(3, 5)]),
        (CurveSpec::ThueClassic { roots: vec![int(0), int(1), int(-1)], k: int(1) }, 50, vec![CurvePoint::ints(1, 0)]),
    ];
    for (spec, bx, expected) in &goldens {
        for b in [*bx, 2 * bx] {
            let pts = curves::enumerate_points(spec, b, DEFAULT_CAP).map_err(|e| e.to_string())?;
            ensure(pts == *expected, || format!("{} at box {b}: {pts:?}", spec.family()))?;
        }
    }
    Ok(goldens.len())
}

fn coordinate_check(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    while n < 100 {
        match coordinate_instance(rng)? {
            Some(()) => n += 1,
            None => continue,
        }
    }
    Ok(n)
}

/// One random instance of S-integrality being preserved by `x -> Mx` over `S + delta(M)`.
pub fn coordinate_instance(rng: &mut ChaCha8Rng) -> Result<Option<()>, String> {
    let dim = rng.gen_range(1..=3);
    let s = SContext::new([2, 3, 5].into_iter().filter(|_| rng.gen_bool(0.5))).expect("primes");
    let coords: Vec<i64> = (0..=dim).map(|_| rng.gen_range(-12..=12)).collect();
    let Ok(p) = ProjPoint::from_ints(&coords) else { return Ok(None) };
    let arrangement: Option<Vec<Hyperplane>> = (0..rng.gen_range(1..=dim + 2))
        .map(|_| Hyperplane::from_ints(&(0..=dim).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>()).ok())
        .collect();
    let Some(arrangement) = arrangement else { return Ok(None) };
    if arrangement.iter().any(|h| h.contains(&p).unwrap_or(true)) {
        return Ok(None);
    }
    let m: Vec<Vec<Rational>> = (0..=dim).map(|_| (0..=dim).map(|_| frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()).collect();
    let Ok(change) = projective::change_coordinates(&p, &m) else { return Ok(None) };
    let s_prime = s.union(&change.delta);
    let moved: Vec<Hyperplane> =
        arrangement.iter().map(|h| projective::transform_hyperplane(h, &m)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let before = projective::is_s_integral(&p, &arrangement, &s_prime).map_err(|e| e.to_string())?;
    let after = projective::is_s_integral(&change.point, &moved, &s_prime).map_err(|e| e.to_string())?;
    ensure(before == after, || format!("{p} -> {} over {s_prime}: {before} vs {after}", change.point))?;
    Ok(Some(()))
}
