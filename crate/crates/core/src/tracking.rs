//! Straight-line and coefficient-parameter homotopy continuation.
//!
//! `H(x, t) = (1 - t) * gamma * G(x) + t * F(x)` is followed from `t = 0` to
//! `t = 1` with an Euler predictor on the Davidenko equation and a short
//! Newton corrector. The last stretch `t >= 1 - 1e-6` is replaced by Newton's
//! method on `F`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::supports::{SparseSystem, SupportSystem};
use crate::torus::{monomial, TorusPoint};

const DIVERGENCE_NORM: f64 = 1e8;
const ENDGAME_START: f64 = 1.0 - 1e-6;
const SINGULAR_CONDITION: f64 = 1e12;
/// Largest relative move accepted from the final Newton polish.
const ENDGAME_JUMP: f64 = 1e-4;
/// Largest relative first corrector update accepted after a prediction.
const MAX_PREDICTION_ERROR: f64 = 1e-3;
/// Required shrink factor between consecutive corrector updates.
const CONTRACTION: f64 = 0.1;
/// Relative max-norm distance below which two endpoints coincide.
pub const DEDUP_DISTANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerSettings {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative size of the last corrector update required to accept a step.
    pub newton_tolerance: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    pub success_residual: f64,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        TrackerSettings {
            initial_step: 1e-2,
            min_step: 1e-10,
            max_step: 1e-1,
            newton_tolerance: 1e-8,
            max_newton_iters: 12,
            max_steps: 50_000,
            success_residual: 1e-8,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.min_step
            && self.min_step <= self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step < 1.0
            && self.newton_tolerance > 0.0
            && self.success_residual > 0.0
            && self.max_newton_iters > 0
            && self.max_steps > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSystem(format!(
                "invalid tracker settings {self:?}"
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum PathFailure {
    #[error("step size underflow")]
    StepUnderflow,
    #[error("path diverged")]
    Divergence,
    #[error("endpoint left the torus")]
    LeftTorus,
    #[error("step budget exhausted")]
    MaxSteps,
    #[error("endpoint failed to refine")]
    Refinement,
}

/// Polynomial system given by coefficients over a fixed support system.
/// Coefficients may be zero.
#[derive(Clone, Debug)]
pub struct CoefficientSystem {
    pub supports: SupportSystem,
    pub coefficients: Vec<Vec<Complex64>>,
}

impl CoefficientSystem {
    pub fn new(supports: SupportSystem, coefficients: Vec<Vec<Complex64>>) -> Result<Self> {
        if coefficients.len() != supports.n()
            || supports
                .supports()
                .iter()
                .zip(&coefficients)
                .any(|(s, c)| s.len() != c.len())
        {
            return Err(Error::InvalidSystem(
                "coefficients do not match supports".into(),
            ));
        }
        Ok(CoefficientSystem {
            supports,
            coefficients,
        })
    }

    pub fn from_sparse(f: &SparseSystem) -> Self {
        CoefficientSystem {
            supports: f.supports().clone(),
            coefficients: f.coefficients().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.supports.n()
    }

    /// Each polynomial divided by its largest coefficient modulus. The zero
    /// set is unchanged, but a homotopy between balanced systems does not
    /// concentrate all its motion near one end.
    pub fn balanced(mut self) -> Self {
        for row in self.coefficients.iter_mut() {
            let scale = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if scale > 0.0 {
                for c in row.iter_mut() {
                    *c /= scale;
                }
            }
        }
        self
    }

    pub fn evaluate(&self, x: &[Complex64]) -> DVector<Complex64> {
        let (v, _, _) = evaluate_pair(&self.supports, &self.coefficients, None, x, None);
        v
    }

    pub fn residual(&self, x: &[Complex64]) -> f64 {
        self.evaluate(x)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Max over the polynomials of `|f_i(x)| / max(1, sum_a |c_a x^a|)`: the
    /// residual relative to the size of the terms that produced it.
    pub fn relative_residual(&self, x: &[Complex64]) -> f64 {
        let mut worst = 0.0f64;
        for (i, support) in self.supports.supports().iter().enumerate() {
            let mut value = Complex64::zero();
            let mut size = 0.0;
            for (alpha, c) in support.points().iter().zip(&self.coefficients[i]) {
                let term = c * monomial(x, alpha);
                value += term;
                size += term.norm();
            }
            let r = value.norm() / size.max(1.0);
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
        worst
    }

    pub fn value_and_jacobian(&self, x: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let (v, j, _) = evaluate_pair(&self.supports, &self.coefficients, None, x, None);
        (v, j)
    }
}

/// Evaluates `sum c x^a` and its Jacobian, and optionally a second
/// coefficient set (the `t`-derivative) on the same monomials.
fn evaluate_pair(
    supports: &SupportSystem,
    coefficients: &[Vec<Complex64>],
    secondary: Option<&[Vec<Complex64>]>,
    x: &[Complex64],
    blend: Option<(&[Vec<Complex64>], Complex64, Complex64)>,
) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
    let n = x.len();
    let rows = supports.n();
    let mut value = DVector::zeros(rows);
    let mut jac = DMatrix::zeros(rows, n);
    let mut second = DVector::zeros(rows);
    let mut factors = vec![Complex64::zero(); n];
    let mut prefix = vec![Complex64::zero(); n + 1];
    let mut suffix = vec![Complex64::zero(); n + 1];
    for (i, support) in supports.supports().iter().enumerate() {
        for (k, alpha) in support.points().iter().enumerate() {
            let c = match blend {
                Some((other, wa, wb)) => wa * coefficients[i][k] + wb * other[i][k],
                None => coefficients[i][k],
            };
            for j in 0..n {
                factors[j] = x[j].powi(alpha[j] as i32);
            }
            prefix[0] = Complex64::new(1.0, 0.0);
            for j in 0..n {
                prefix[j + 1] = prefix[j] * factors[j];
            }
            suffix[n] = Complex64::new(1.0, 0.0);
            for j in (0..n).rev() {
                suffix[j] = suffix[j + 1] * factors[j];
            }
            let mono = prefix[n];
            value[i] += c * mono;
            if let Some(sec) = secondary {
                second[i] += sec[i][k] * mono;
            }
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let a = alpha[j];
                if a == 0 {
                    continue;
                }
                let d = x[j].powi(a as i32 - 1) * a as f64;
                jac[(i, j)] += c * prefix[j] * d * suffix[j + 1];
            }
        }
    }
    (value, jac, second)
}

/// `H(t) = t F + (1 - t) gamma G` over a shared support system.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub supports: SupportSystem,
    pub start: Vec<Vec<Complex64>>,
    pub target: Vec<Vec<Complex64>>,
    pub gamma: Complex64,
    /// `F - gamma G`, the `t`-derivative of the coefficients.
    velocity: Vec<Vec<Complex64>>,
}

impl Homotopy {
    pub fn new(start: &SparseSystem, target: &SparseSystem, gamma: Complex64) -> Result<Self> {
        if start.supports() != target.supports() {
            return Err(Error::InvalidSystem(
                "start and target supports differ".into(),
            ));
        }
        Self::from_coefficients(
            CoefficientSystem::from_sparse(start),
            CoefficientSystem::from_sparse(target),
            gamma,
        )
    }

    pub fn from_coefficients(
        start: CoefficientSystem,
        target: CoefficientSystem,
        gamma: Complex64,
    ) -> Result<Self> {
        if start.supports != target.supports {
            return Err(Error::InvalidSystem(
                "start and target supports differ".into(),
            ));
        }
        let start = start.balanced();
        let target = target.balanced();
        let velocity = target
            .coefficients
            .iter()
            .zip(&start.coefficients)
            .map(|(f, g)| f.iter().zip(g).map(|(a, b)| a - gamma * b).collect())
            .collect();
        Ok(Homotopy {
            supports: start.supports,
            start: start.coefficients,
            target: target.coefficients,
            gamma,
            velocity,
        })
    }

    pub fn n(&self) -> usize {
        self.supports.n()
    }

    pub fn target_system(&self) -> CoefficientSystem {
        CoefficientSystem {
            supports: self.supports.clone(),
            coefficients: self.target.clone(),
        }
    }

    /// `(H, dH/dx, dH/dt)` at `(x, t)`.
    fn eval(
        &self,
        x: &[Complex64],
        t: f64,
    ) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
        let ws = Complex64::new(1.0 - t, 0.0) * self.gamma;
        let wt = Complex64::new(t, 0.0);
        evaluate_pair(
            &self.supports,
            &self.start,
            Some(&self.velocity),
            x,
            Some((&self.target, ws, wt)),
        )
    }
}

fn norm_inf(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// 1-norm condition number of the Jacobian in logarithmic coordinates
/// (columns scaled by `|x_j|`) with equilibrated rows, so that roots of very
/// different moduli are not mistaken for singular ones.
fn condition_estimate(j: &DMatrix<Complex64>, x: &[Complex64]) -> f64 {
    let mut j = j.clone();
    for (c, xc) in x.iter().enumerate() {
        j.column_mut(c).scale_mut(xc.norm());
    }
    for r in 0..j.nrows() {
        let s = j.row(r).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            j.row_mut(r).unscale_mut(s);
        }
    }
    let j = &j;
    let norm1 = |m: &DMatrix<Complex64>| {
        (0..m.ncols())
            .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match j.clone().try_inverse() {
        Some(inv) => {
            let c = norm1(j) * norm1(&inv);
            if c.is_finite() {
                c
            } else {
                f64::INFINITY
            }
        }
        None => f64::INFINITY,
    }
}

/// Newton's method on a coefficient system until the update is negligible
/// and the relative residual is below `success_residual`. Returns the
/// relative residual.
pub fn newton_refine_coefficients(
    f: &CoefficientSystem,
    x: &TorusPoint,
    settings: &TrackerSettings,
) -> Result<(TorusPoint, f64)> {
    let mut x = x.0.clone();
    let mut residual = f.relative_residual(&x);
    for _ in 0..settings.max_newton_iters {
        let (v, j) = f.value_and_jacobian(&x);
        let cond = condition_estimate(&j, &x);
        if cond > SINGULAR_CONDITION {
            return Err(Error::SingularJacobian { condition: cond });
        }
        let Some(dx) = j.lu().solve(&(-v)) else {
            return Err(Error::SingularJacobian {
                condition: f64::INFINITY,
            });
        };
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        residual = f.relative_residual(&x);
        if !residual.is_finite() {
            break;
        }
        if norm_inf(&dx) <= 1e-14 * max_abs(&x).max(1.0) && residual <= settings.success_residual {
            return Ok((TorusPoint(x), residual));
        }
    }
    if residual <= settings.success_residual {
        Ok((TorusPoint(x), residual))
    } else {
        Err(Error::NoConvergence { residual })
    }
}

pub fn newton_refine(
    f: &SparseSystem,
    x: &TorusPoint,
    settings: &TrackerSettings,
) -> Result<(TorusPoint, f64)> {
    newton_refine_coefficients(&CoefficientSystem::from_sparse(f), x, settings)
}

/// `dx/dt = -J^{-1} dH/dt`.
fn velocity(h: &Homotopy, x: &[Complex64], t: f64) -> Option<DVector<Complex64>> {
    let (_, j, ht) = h.eval(x, t);
    j.lu().solve(&(-ht))
}

fn offset(x: &[Complex64], v: &DVector<Complex64>, s: f64) -> Vec<Complex64> {
    x.iter().zip(v.iter()).map(|(xi, vi)| xi + vi * s).collect()
}

/// Classical Runge-Kutta step along the path.
fn predict(h: &Homotopy, x: &[Complex64], t: f64, dt: f64) -> Option<Vec<Complex64>> {
    let k1 = velocity(h, x, t)?;
    let k2 = velocity(h, &offset(x, &k1, dt / 2.0), t + dt / 2.0)?;
    let k3 = velocity(h, &offset(x, &k2, dt / 2.0), t + dt / 2.0)?;
    let k4 = velocity(h, &offset(x, &k3, dt), t + dt)?;
    let v = (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
        / Complex64::new(6.0, 0.0);
    Some(offset(x, &v, dt))
}

/// Runs at most three Newton steps on `H(., t)`; accepts only a contracting
/// sequence whose last update is below the tolerance.
fn correct(
    h: &Homotopy,
    mut x: Vec<Complex64>,
    t: f64,
    settings: &TrackerSettings,
) -> Option<Vec<Complex64>> {
    let mut last = MAX_PREDICTION_ERROR * max_abs(&x).max(1.0);
    for _ in 0..3 {
        let (v, j, _) = h.eval(&x, t);
        let dx = j.lu().solve(&(-v))?;
        let size = norm_inf(&dx);
        if !size.is_finite() || size > last {
            return None;
        }
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        let scale = max_abs(&x).max(1.0);
        if size <= settings.newton_tolerance * scale {
            return Some(x);
        }
        last = CONTRACTION * size;
    }
    None
}

/// Step control state carried across the two tracking phases.
struct Stepper {
    step: f64,
    streak: usize,
    steps: usize,
}

impl Stepper {
    /// Tracks `x` from `t` to `t_end`.
    fn advance(
        &mut self,
        h: &Homotopy,
        x: &mut Vec<Complex64>,
        mut t: f64,
        t_end: f64,
        settings: &TrackerSettings,
    ) -> std::result::Result<(), PathFailure> {
        while t < t_end {
            if self.steps >= settings.max_steps {
                return Err(PathFailure::MaxSteps);
            }
            self.steps += 1;
            let last = self.step >= t_end - t;
            let dt = if last { t_end - t } else { self.step };
            match predict(h, x, t, dt).and_then(|p| correct(h, p, t + dt, settings)) {
                Some(next) => {
                    *x = next;
                    t = if last { t_end } else { t + dt };
                    if max_abs(x) > DIVERGENCE_NORM {
                        return Err(PathFailure::Divergence);
                    }
                    self.streak += 1;
                    if self.streak >= 4 {
                        self.step = (self.step * 1.5).min(settings.max_step);
                        self.streak = 0;
                    }
                }
                None => {
                    self.step *= 0.5;
                    self.streak = 0;
                    if self.step < settings.min_step {
                        return Err(PathFailure::StepUnderflow);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Newton on the target, accepted only if it stays near the tracked point.
fn finish(
    target: &CoefficientSystem,
    x: &[Complex64],
    settings: &TrackerSettings,
) -> std::result::Result<TorusPoint, PathFailure> {
    let tracked = TorusPoint(x.to_vec());
    let (end, _) = newton_refine_coefficients(target, &tracked, settings)
        .map_err(|_| PathFailure::Refinement)?;
    if end.relative_distance(&tracked) > ENDGAME_JUMP {
        return Err(PathFailure::Refinement);
    }
    if max_abs(&end.0) > DIVERGENCE_NORM {
        return Err(PathFailure::Divergence);
    }
    if !end.on_torus() {
        return Err(PathFailure::LeftTorus);
    }
    Ok(end)
}

/// Follows one path from a start solution at `t = 0` to an endpoint at `t = 1`.
///
/// Newton on `F` takes over at `t = 1 - 1e-6`. If that lands far from the
/// tracked point (a path still moving fast, typically toward a root of large
/// modulus), tracking continues to `t = 1` and Newton is retried there.
pub fn track_path(
    h: &Homotopy,
    x0: &TorusPoint,
    settings: &TrackerSettings,
) -> std::result::Result<TorusPoint, PathFailure> {
    let mut x = x0.0.clone();
    let mut stepper = Stepper {
        step: settings.initial_step,
        streak: 0,
        steps: 0,
    };
    stepper.advance(h, &mut x, 0.0, ENDGAME_START, settings)?;
    let target = h.target_system();
    if let Ok(end) = finish(&target, &x, settings) {
        return Ok(end);
    }
    stepper.advance(h, &mut x, ENDGAME_START, 1.0, settings)?;
    finish(&target, &x, settings)
}

/// Where a solution came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Index of the start point whose path produced it, if tracked.
    pub path: Option<usize>,
    /// Chain of (node label, branch index) from the root of the solve.
    pub ancestry: Vec<(String, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub points: Vec<TorusPoint>,
    /// Per-point residuals; the solvers report the relative residual of
    /// `CoefficientSystem::relative_residual` on the input system.
    pub residuals: Vec<f64>,
    pub provenance: Vec<Provenance>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, p: TorusPoint, residual: f64, provenance: Provenance) {
        self.points.push(p);
        self.residuals.push(residual);
        self.provenance.push(provenance);
    }

    pub fn from_points(points: Vec<TorusPoint>) -> Self {
        let k = points.len();
        SolutionSet {
            points,
            residuals: vec![0.0; k],
            provenance: vec![Provenance::default(); k],
        }
    }

    pub fn extend(&mut self, other: SolutionSet) {
        self.points.extend(other.points);
        self.residuals.extend(other.residuals);
        self.provenance.extend(other.provenance);
    }

    /// Removes points within `DEDUP_DISTANCE` of an earlier point; returns the
    /// indices (in the original order) that were dropped.
    pub fn dedup(&mut self) -> Vec<usize> {
        let mut keep: Vec<usize> = Vec::new();
        let mut dropped = Vec::new();
        for i in 0..self.points.len() {
            if keep
                .iter()
                .any(|&k| self.points[k].relative_distance(&self.points[i]) < DEDUP_DISTANCE)
            {
                dropped.push(i);
            } else {
                keep.push(i);
            }
        }
        self.retain_indices(&keep);
        dropped
    }

    fn retain_indices(&mut self, keep: &[usize]) {
        self.points = keep.iter().map(|&i| self.points[i].clone()).collect();
        self.residuals = keep.iter().map(|&i| self.residuals[i]).collect();
        self.provenance = keep.iter().map(|&i| self.provenance[i].clone()).collect();
    }

    /// Deterministic order: lexicographic on rounded (re, im) coordinates.
    pub fn sort(&mut self) {
        let key = |p: &TorusPoint| -> Vec<(i64, i64)> {
            p.0.iter()
                .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
                .collect()
        };
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by_cached_key(|&i| key(&self.points[i]));
        self.retain_indices(&order);
    }
}

/// Outcome of tracking a batch of paths.
#[derive(Clone, Debug, Default)]
pub struct TrackReport {
    pub solutions: SolutionSet,
    pub failures: Vec<(usize, PathFailure)>,
    /// Paths whose endpoints coincided with an earlier endpoint.
    pub duplicates: Vec<usize>,
    pub paths: usize,
}

/// Tracks every start point; endpoints are deduplicated and sorted.
pub fn track_all(h: &Homotopy, starts: &[TorusPoint], settings: &TrackerSettings) -> TrackReport {
    let results: Vec<std::result::Result<TorusPoint, PathFailure>> = starts
        .par_iter()
        .map(|s| track_path(h, s, settings))
        .collect();
    let target = h.target_system();
    let mut report = TrackReport {
        paths: starts.len(),
        ..Default::default()
    };
    let mut path_of = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => {
                let res = target.residual(&p.0);
                report.solutions.push(
                    p,
                    res,
                    Provenance {
                        path: Some(i),
                        ancestry: Vec::new(),
                    },
                );
                path_of.push(i);
            }
            Err(e) => report.failures.push((i, e)),
        }
    }
    report.duplicates = report
        .solutions
        .dedup()
        .into_iter()
        .map(|k| path_of[k])
        .collect();
    report.solutions.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::Support;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn univariate(coeffs: &[(i64, f64)]) -> SparseSystem {
        SparseSystem::from_terms(
            1,
            vec![coeffs.iter().map(|&(e, v)| (vec![e], c(v, 0.0))).collect()],
        )
        .unwrap()
    }

    #[test]
    fn newton_on_sqrt_two() {
        let f = univariate(&[(0, -2.0), (2, 1.0)]);
        let (x, r) = newton_refine(
            &f,
            &TorusPoint(vec![c(1.4, 0.0)]),
            &TrackerSettings::default(),
        )
        .unwrap();
        assert!((x.0[0].re - 2f64.sqrt()).abs() < 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn newton_exact_root_is_fixed() {
        let f = univariate(&[(0, -4.0), (2, 1.0)]);
        let (x, r) = newton_refine(
            &f,
            &TorusPoint(vec![c(2.0, 0.0)]),
            &TrackerSettings::default(),
        )
        .unwrap();
        assert_eq!(x.0[0], c(2.0, 0.0));
        assert_eq!(r, 0.0);
    }

    #[test]
    fn newton_fails_without_real_root() {
        // Real iterates of x^2 + 1 never settle.
        let f = univariate(&[(0, 1.0), (2, 1.0)]);
        assert!(newton_refine(
            &f,
            &TorusPoint(vec![c(0.1, 0.0)]),
            &TrackerSettings::default()
        )
        .is_err());
    }

    #[test]
    fn constant_homotopy_returns_start() {
        let f = univariate(&[(0, -1.0), (3, 1.0)]);
        let h = Homotopy::new(&f, &f, c(0.6, 0.8)).unwrap();
        let x0 = TorusPoint(vec![Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI / 3.0,
        )]);
        let x = track_path(&h, &x0, &TrackerSettings::default()).unwrap();
        assert!(x.relative_distance(&x0) < 1e-12);
    }

    #[test]
    fn quadratic_continuation() {
        let g = univariate(&[(0, -1.0), (2, 1.0)]);
        let f = univariate(&[(0, -4.0), (2, 1.0)]);
        let h = Homotopy::new(&g, &f, Complex64::from_polar(1.0, 0.7)).unwrap();
        let x = track_path(
            &h,
            &TorusPoint(vec![c(1.0, 0.0)]),
            &TrackerSettings::default(),
        )
        .unwrap();
        assert!((x.0[0] - c(2.0, 0.0)).norm() < 1e-10, "{:?}", x);
        let report = track_all(
            &h,
            &[
                TorusPoint(vec![c(1.0, 0.0)]),
                TorusPoint(vec![c(-1.0, 0.0)]),
            ],
            &TrackerSettings::default(),
        );
        assert_eq!(report.solutions.len(), 2);
        assert!((report.solutions.points[0].0[0] - c(-2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn empty_and_duplicate_starts() {
        let g = univariate(&[(0, -1.0), (2, 1.0)]);
        let f = univariate(&[(0, -4.0), (2, 1.0)]);
        let h = Homotopy::new(&g, &f, Complex64::from_polar(1.0, 0.7)).unwrap();
        let s = TrackerSettings::default();
        assert!(track_all(&h, &[], &s).solutions.is_empty());
        let one = TorusPoint(vec![c(1.0, 0.0)]);
        let report = track_all(&h, &[one.clone(), one], &s);
        assert_eq!(report.solutions.len(), 1);
        assert_eq!(report.duplicates, vec![1]);
    }

    #[test]
    fn settings_validation() {
        assert!(TrackerSettings::default().validate().is_ok());
        let bad = TrackerSettings {
            max_step: 2.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let s = SupportSystem::new(vec![
            Support::new(2, vec![vec![0, 0], vec![2, -1], vec![1, 3]]).unwrap(),
            Support::new(2, vec![vec![-1, 0], vec![0, 2], vec![3, 1]]).unwrap(),
        ])
        .unwrap();
        let f = CoefficientSystem::new(
            s,
            vec![
                vec![c(1.0, 0.5), c(-2.0, 0.1), c(0.3, -0.7)],
                vec![c(0.2, 0.0), c(1.1, 1.0), c(-0.4, 0.9)],
            ],
        )
        .unwrap();
        let x = [c(0.8, 0.3), c(-0.5, 1.1)];
        let (_, j) = f.value_and_jacobian(&x);
        let h = 1e-7;
        for col in 0..2 {
            let mut xp = x;
            xp[col] += h;
            let mut xm = x;
            xm[col] -= h;
            let fd = (f.evaluate(&xp) - f.evaluate(&xm)) / c(2.0 * h, 0.0);
            for row in 0..2 {
                assert!((fd[row] - j[(row, col)]).norm() < 1e-6);
            }
        }
    }
}
