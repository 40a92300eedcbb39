//! Recursive solving of decomposable systems, the fallback solver, and
//! start systems built from vertex supports.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{
    classify, triangular_with_witness, Classification, DecompositionTree, LacunaryData, NodeKind,
    TriangularData,
};
use crate::error::{Error, Result};
use crate::geometry::mixed_volume;
use crate::intlinalg::LatticeMatrix;
use crate::random::{unit_complex, Seed};
use crate::supports::{
    compact_coordinates, normalize_sparse, Point, SparseSystem, Support, SupportSystem,
};
use crate::torus::{
    diagonal_fiber, fiber_coefficients, relabel, restrict_to_fiber, MonomialMap, TorusPoint,
};
use crate::tracking::{
    newton_refine, newton_refine_coefficients, track_all, CoefficientSystem, Homotopy, Provenance,
    SolutionSet, TrackerSettings, DEDUP_DISTANCE,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverSettings {
    pub tracker: TrackerSettings,
    /// Re-randomized attempts after a homotopy loses solutions.
    pub max_retries: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tracker: TrackerSettings::default(),
            max_retries: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub solutions: SolutionSet,
    pub tree: DecompositionTree,
    /// Paths charged by the ledger, counting a blackbox call as one path
    /// per solution and excluding retries.
    pub paths_tracked: u64,
    pub retry_paths: u64,
    pub blackbox_calls: usize,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl SolveReport {
    fn new(
        f: &SparseSystem,
        mut solutions: SolutionSet,
        tree: DecompositionTree,
        seed: Seed,
    ) -> Self {
        solutions.residuals = scaled_residuals(f, &solutions.points);
        SolveReport {
            paths_tracked: tree.total_paths(),
            retry_paths: tree.total_retry_paths(),
            blackbox_calls: tree.blackbox_calls(),
            solutions,
            tree,
            seed: seed.0,
            warnings: Vec::new(),
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.solutions.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// All isolated torus solutions of a generic system.
pub fn solve_decomposable(
    f: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    settings.tracker.validate()?;
    let (solutions, tree) = solve_node(f, seed, settings)?;
    Ok(SolveReport::new(f, solutions, tree, seed))
}

pub fn solve_lacunary(
    f: &SparseSystem,
    classification: &Classification,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    let Classification::Lacunary(data) = classification else {
        return Err(Error::InvalidSystem(format!(
            "expected a lacunary classification, got {}",
            classification.label()
        )));
    };
    let (g, _) = normalize_sparse(f);
    let (solutions, tree) = lacunary_node(&g, data, seed, settings)?;
    Ok(SolveReport::new(f, solutions, tree, seed))
}

pub fn solve_triangular(
    f: &SparseSystem,
    classification: &Classification,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    let Classification::Triangular(data) = classification else {
        return Err(Error::InvalidSystem(format!(
            "expected a triangular classification, got {}",
            classification.label()
        )));
    };
    let (g, _) = normalize_sparse(f);
    let (solutions, tree) = triangular_node(&g, data, seed, settings)?;
    Ok(SolveReport::new(f, solutions, tree, seed))
}

/// Triangular solve with a caller-chosen witness, bypassing the
/// classification order.
pub fn solve_with_witness(
    f: &SparseSystem,
    witness: &[usize],
    seed: Seed,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    let data = triangular_with_witness(f.supports(), witness)?;
    solve_triangular(f, &Classification::Triangular(data), seed, settings)
}

fn solve_node(
    f: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    let (g, _) = normalize_sparse(f);
    match classify(g.supports())? {
        Classification::Lacunary(data) => lacunary_node(&g, &data, seed, settings),
        Classification::Triangular(data) => triangular_node(&g, &data, seed, settings),
        Classification::Indecomposable => blackbox_node(&g, seed, settings),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Newton polish that never lets a point jump to a different solution.
fn polish(g: &SparseSystem, set: &mut SolutionSet, settings: &TrackerSettings) {
    for p in set.points.iter_mut() {
        if let Ok((q, _)) = newton_refine(g, p, settings) {
            if q.relative_distance(p) < DEDUP_DISTANCE {
                *p = q;
            }
        }
    }
    set.residuals = scaled_residuals(g, &set.points);
}

fn check_count(set: SolutionSet, expected: u64) -> Result<SolutionSet> {
    if set.len() as u64 == expected {
        Ok(set)
    } else {
        Err(Error::CountMismatch {
            found: set.len(),
            expected: expected as usize,
            partial: set.points,
        })
    }
}

fn lacunary_node(
    g: &SparseSystem,
    data: &LacunaryData,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    let start = Instant::now();
    let child = relabel(g, &data.preimage, &data.reindex)?;
    let (base, child_tree) = solve_node(&child, seed.child(1), settings)?;
    let psi = MonomialMap::new(data.psi.clone())?;
    let mut out = SolutionSet::default();
    for (i, (y, prov)) in base.points.iter().zip(&base.provenance).enumerate() {
        for (j, w) in diagonal_fiber(&data.factors, y).iter().enumerate() {
            let mut ancestry = vec![("lacunary".to_string(), i), ("root".to_string(), j)];
            ancestry.extend(prov.ancestry.iter().cloned());
            out.push(
                psi.apply(w),
                0.0,
                Provenance {
                    path: None,
                    ancestry,
                },
            );
        }
    }
    polish(g, &mut out, &settings.tracker);
    out.dedup();
    out.sort();
    let index = data.index();
    let mv = index * child_tree.mv;
    let out = check_count(out, mv)?;
    let mut node = DecompositionTree::leaf(
        NodeKind::Lacunary {
            factors: data.factors.clone(),
            index,
        },
        g.n(),
        mv,
    );
    node.children.push(child_tree);
    node.elapsed_ms = elapsed_ms(start);
    Ok((out, node))
}

/// The fiber polynomials over a base point, on the full image supports
/// (coefficients may vanish).
fn fiber_system(
    g: &SparseSystem,
    data: &TriangularData,
    lifted: &TorusPoint,
) -> Result<CoefficientSystem> {
    let projection = data.splitting.projection();
    let (supports, coefficients): (Vec<Support>, Vec<Vec<Complex64>>) = data
        .complement
        .iter()
        .map(|&j| {
            fiber_coefficients(
                g.supports().support(j),
                &g.coefficients()[j],
                &projection,
                lifted,
            )
        })
        .unzip();
    CoefficientSystem::new(SupportSystem::new(supports)?, coefficients)
}

fn triangular_node(
    g: &SparseSystem,
    data: &TriangularData,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    let start = Instant::now();
    let n = g.n();
    let k = data.k();
    let split = &data.splitting;

    let mut base_polys = Vec::with_capacity(k);
    for &i in &data.witness {
        let mut terms: Vec<(Point, Complex64)> = Vec::new();
        for (a, c) in g.terms(i) {
            let w = split.coords(a);
            if w[k..].iter().any(|&v| v != 0) {
                return Err(Error::NotInLattice { point: a.clone() });
            }
            terms.push((w[..k].to_vec(), *c));
        }
        base_polys.push(terms);
    }
    let base_system = SparseSystem::from_terms(k, base_polys)?;
    let (base, base_tree) = solve_node(&base_system, seed.child(1), settings)?;

    let psi = MonomialMap::new(split.psi.clone())?;
    let lift = |y: &TorusPoint| {
        let mut w = y.0.clone();
        w.resize(n, Complex64::new(1.0, 0.0));
        psi.apply(&TorusPoint(w))
    };
    let projection = split.projection();
    let embed = MonomialMap::new(projection.clone())?;
    // Any point of a fiber can anchor it. Restricting at `lift(y)` can leave
    // fiber coefficients spread over many orders of magnitude, so each
    // anchor is moved along its fiber by the balancing torus scaling.
    let lifted: Vec<TorusPoint> = base
        .points
        .par_iter()
        .map(|y| {
            let p = lift(y);
            match restrict_to_fiber(g, &data.complement, &projection, &p) {
                Ok(fi) => {
                    let w = TorusPoint(
                        torus_scaling(&fi)
                            .iter()
                            .map(|s| Complex64::new(s.exp(), 0.0))
                            .collect(),
                    );
                    p.mul(&embed.apply(&w))
                }
                Err(_) => p,
            }
        })
        .collect();

    let first = restrict_to_fiber(g, &data.complement, &projection, &lifted[0])?;
    let (fiber, fiber_tree) = solve_node(&first, seed.child(2), settings)?;
    let start_system = fiber_system(g, data, &lifted[0])?;

    let transfers: Vec<Result<(SolutionSet, u64)>> = (1..lifted.len())
        .into_par_iter()
        .map(|i| {
            let target = fiber_system(g, data, &lifted[i])?;
            let mut retries = 0;
            let mut best = SolutionSet::default();
            for attempt in 0..=settings.max_retries {
                let gamma =
                    unit_complex(&mut seed.child(100 + i as u64).child(attempt as u64).rng());
                let h = Homotopy::from_coefficients(start_system.clone(), target.clone(), gamma)?;
                let report = track_all(&h, &fiber.points, &settings.tracker);
                if report.solutions.len() == fiber.len() {
                    return Ok((report.solutions, retries));
                }
                if report.solutions.len() > best.len() {
                    best = report.solutions;
                }
                if attempt < settings.max_retries {
                    retries += fiber.len() as u64;
                }
            }
            // Transfers can lose roots whose moduli change by many orders of
            // magnitude between the two fibers; solve this fiber on its own.
            let direct =
                restrict_to_fiber(g, &data.complement, &projection, &lifted[i]).and_then(|fi| {
                    solve_node(&fi, seed.child(100 + i as u64).child(u64::MAX), settings)
                });
            if let Ok((zs, tree)) = direct {
                retries += tree.total_paths() + tree.total_retry_paths();
                if zs.len() == fiber.len() {
                    return Ok((zs, retries));
                }
                if zs.len() > best.len() {
                    best = zs;
                }
            }
            Err(Error::CountMismatch {
                found: best.len(),
                expected: fiber.len(),
                partial: best.points,
            })
        })
        .collect();

    let mut out = SolutionSet::default();
    let mut retry_paths = 0;
    let mut missing = 0;
    let push_fiber = |i: usize, zs: &SolutionSet, out: &mut SolutionSet| {
        for (j, z) in zs.points.iter().enumerate() {
            out.push(
                lifted[i].mul(&embed.apply(z)),
                0.0,
                Provenance {
                    path: None,
                    ancestry: vec![("base".to_string(), i), ("fiber".to_string(), j)],
                },
            );
        }
    };
    push_fiber(0, &fiber, &mut out);
    for (offset, r) in transfers.into_iter().enumerate() {
        match r {
            Ok((zs, retries)) => {
                retry_paths += retries;
                push_fiber(offset + 1, &zs, &mut out);
            }
            Err(Error::CountMismatch {
                found,
                expected,
                partial,
            }) => {
                missing += expected.abs_diff(found);
                retry_paths += settings.max_retries as u64 * expected as u64;
                push_fiber(offset + 1, &SolutionSet::from_points(partial), &mut out);
            }
            Err(e) => return Err(e),
        }
    }
    polish(g, &mut out, &settings.tracker);
    out.dedup();
    out.sort();
    let mv = base_tree.mv * fiber_tree.mv;
    if missing > 0 {
        return Err(Error::CountMismatch {
            found: out.len(),
            expected: mv as usize,
            partial: out.points,
        });
    }
    let out = check_count(out, mv)?;
    let transfers = base.len() as u64 - 1;
    let mut node = DecompositionTree::leaf(
        NodeKind::Triangular {
            witness: data.witness.clone(),
        },
        n,
        mv,
    );
    node.ledger.fiber_homotopies = transfers;
    node.ledger.fiber_paths = transfers * fiber.len() as u64;
    node.ledger.retry_paths = retry_paths;
    node.children = vec![base_tree, fiber_tree];
    node.elapsed_ms = elapsed_ms(start);
    Ok((out, node))
}

/// Residuals on the original system, each relative to the size of the terms
/// it sums. Absolute residuals of roots with moduli far from 1 say more about
/// floating point than about the root.
fn scaled_residuals(f: &SparseSystem, points: &[TorusPoint]) -> Vec<f64> {
    let system = CoefficientSystem::from_sparse(f);
    points
        .iter()
        .map(|p| system.relative_residual(&p.0))
        .collect()
}

/// Solves an indecomposable system directly.
pub fn blackbox(f: &SparseSystem, seed: Seed, settings: &SolverSettings) -> Result<SolutionSet> {
    let (g, _) = normalize_sparse(f);
    let (mut set, _) = blackbox_node(&g, seed, settings)?;
    set.residuals = scaled_residuals(f, &set.points);
    Ok(set)
}

/// Blackbox solve together with the number of paths it tracked and the
/// number of re-randomized attempts it needed.
pub fn blackbox_with_stats(
    f: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    let (g, _) = normalize_sparse(f);
    let (mut set, tree) = blackbox_node(&g, seed, settings)?;
    set.residuals = scaled_residuals(f, &set.points);
    Ok((set, tree))
}

/// Log-moduli `s` of the torus scaling `x = exp(s) * x'` that brings all
/// coefficient moduli of `g` as close to 1 as possible: least squares on
/// `log|c_a| + a.s + r_i = 0` with one free offset `r_i` per polynomial.
fn torus_scaling(g: &SparseSystem) -> Vec<f64> {
    let n = g.n();
    let rows: Vec<(usize, &Point, f64)> = (0..n)
        .flat_map(|i| {
            g.terms(i)
                .filter(|(_, c)| c.norm() > 0.0)
                .map(move |(a, c)| (i, a, c.norm().ln()))
        })
        .collect();
    let mut m = DMatrix::<f64>::zeros(rows.len(), 2 * n);
    let mut rhs = nalgebra::DVector::<f64>::zeros(rows.len());
    for (k, (i, a, log_c)) in rows.iter().enumerate() {
        for j in 0..n {
            m[(k, j)] = a[j] as f64;
        }
        m[(k, n + i)] = 1.0;
        rhs[k] = -log_c;
    }
    match m.svd(true, true).solve(&rhs, 1e-10) {
        Ok(sol) if sol.iter().all(|v| v.is_finite()) => sol.iter().take(n).cloned().collect(),
        _ => vec![0.0; n],
    }
}

/// Solves an indecomposable system after two changes of variables that do
/// not affect its roots on the torus but do affect how well they can be
/// computed: compact lattice coordinates and a coefficient-balancing scaling.
fn blackbox_node(
    g: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    let start = Instant::now();
    let n = g.n();
    // Lattice bases from Smith forms can shear the supports badly, which
    // inflates the total degree.
    let rows = compact_coordinates(g.supports());
    let moved: Vec<Vec<(Point, Complex64)>> = (0..n)
        .map(|i| {
            g.terms(i)
                .map(|(a, c)| {
                    (
                        rows.iter()
                            .map(|r| r.iter().zip(a).map(|(u, v)| u * v).sum())
                            .collect(),
                        *c,
                    )
                })
                .collect()
        })
        .collect();
    let (moved, _) = normalize_sparse(&SparseSystem::from_terms(n, moved)?);
    // Restricting to a fiber multiplies coefficients by monomials in the base
    // point, which can spread them over many orders of magnitude.
    let log_scale = torus_scaling(&moved);
    let scaled: Vec<Vec<(Point, Complex64)>> = (0..n)
        .map(|i| {
            let terms: Vec<(Point, Complex64)> = moved
                .terms(i)
                .map(|(a, c)| {
                    let shift: f64 = a.iter().zip(&log_scale).map(|(&e, s)| e as f64 * s).sum();
                    (a.clone(), c * shift.exp())
                })
                .collect();
            let size = terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
            terms.into_iter().map(|(a, c)| (a, c / size)).collect()
        })
        .collect();
    let scaled = SparseSystem::from_terms(n, scaled)?;
    let back = MonomialMap::new(LatticeMatrix::from_rows(&rows)?)?;
    let factors: Vec<f64> = log_scale.iter().map(|s| s.exp()).collect();
    let to_original = |p: &TorusPoint| {
        back.apply(&TorusPoint(
            p.0.iter().zip(&factors).map(|(z, f)| z * f).collect(),
        ))
    };
    let (set, mut node) = match conditioned_blackbox(&scaled, seed, settings) {
        Ok(r) => r,
        Err(Error::CountMismatch {
            found,
            expected,
            partial,
        }) => {
            return Err(Error::CountMismatch {
                found,
                expected,
                partial: partial.iter().map(to_original).collect(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut out = SolutionSet::default();
    for (p, prov) in set.points.iter().zip(set.provenance) {
        out.push(to_original(p), 0.0, prov);
    }
    polish(g, &mut out, &settings.tracker);
    out.dedup();
    out.sort();
    node.elapsed_ms = elapsed_ms(start);
    check_count(out, node.mv).map(|set| (set, node))
}

fn conditioned_blackbox(
    g: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SolutionSet, DecompositionTree)> {
    if g.n() == 1 {
        let set = univariate_roots(g, &settings.tracker)?;
        let node = DecompositionTree::leaf(NodeKind::Univariate, 1, set.len() as u64);
        return Ok((set, node));
    }
    let mv = mixed_volume(g.supports());
    let mut node = DecompositionTree::leaf(NodeKind::Blackbox, g.n(), mv);
    node.ledger.blackbox_paths = mv;
    let (set, paths) = total_degree_solve(g, seed.child(0), &settings.tracker)?;
    node.ledger.total_degree_paths = paths;
    let mut best = set;
    // A root of large modulus can sit next to the roots at infinity of the
    // total-degree compactification and be lost for every gamma. Retries
    // solve a fresh random system with the same supports instead and carry
    // its roots over by a parameter homotopy, which has no roots at infinity.
    let mut attempt = 1;
    while best.len() as u64 != mv && attempt <= settings.max_retries {
        let attempt_seed = seed.child(attempt as u64);
        let random = random_system(g.supports(), attempt_seed.child(0));
        let (starts, paths) =
            total_degree_solve(&random, attempt_seed.child(1), &settings.tracker)?;
        node.ledger.retry_paths += paths;
        if starts.len() as u64 == mv {
            let gamma = unit_complex(&mut attempt_seed.child(2).rng());
            let h = Homotopy::new(&random, g, gamma)?;
            let report = track_all(&h, &starts.points, &settings.tracker);
            node.ledger.retry_paths += mv;
            if report.solutions.len() > best.len() {
                best = report.solutions;
            }
        }
        attempt += 1;
    }
    check_count(best, mv).map(|set| (set, node))
}

/// Total-degree homotopy on the system multiplied through to nonnegative
/// exponents; endpoints are kept only if Newton converges on the Laurent
/// system itself, which discards spurious roots on the coordinate planes.
fn total_degree_solve(
    g: &SparseSystem,
    seed: Seed,
    settings: &TrackerSettings,
) -> Result<(SolutionSet, u64)> {
    let n = g.n();
    let mut rng = seed.rng();
    let mut supports = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    let mut start = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    let mut ratios = Vec::with_capacity(n);
    for i in 0..n {
        let lower: Point = (0..n)
            .map(|j| {
                g.supports()
                    .support(i)
                    .points()
                    .iter()
                    .map(|a| a[j])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        let shifted: Vec<Point> = g
            .supports()
            .support(i)
            .points()
            .iter()
            .map(|a| a.iter().zip(&lower).map(|(x, l)| x - l).collect())
            .collect();
        let d = shifted
            .iter()
            .map(|a| a.iter().sum::<i64>())
            .max()
            .unwrap_or(0);
        if d <= 0 {
            return Err(Error::InvalidSystem(format!(
                "polynomial {i} is a monomial"
            )));
        }
        let origin = vec![0; n];
        let mut pure = vec![0; n];
        pure[i] = d;
        let mut pts = shifted.clone();
        pts.push(origin.clone());
        pts.push(pure.clone());
        let support = Support::from_multiset(n, pts)?;
        let mut tc = vec![Complex64::zero(); support.len()];
        for (a, c) in shifted.iter().zip(&g.coefficients()[i]) {
            tc[support.position(a).expect("point present")] = *c;
        }
        let lead = unit_complex(&mut rng);
        let constant = unit_complex(&mut rng);
        let mut sc = vec![Complex64::zero(); support.len()];
        sc[support.position(&pure).expect("point present")] = lead;
        sc[support.position(&origin).expect("point present")] = -constant;
        supports.push(support);
        target.push(tc);
        start.push(sc);
        degrees.push(d as u64);
        ratios.push(constant / lead);
    }
    let system = SupportSystem::new(supports)?;
    let gamma = unit_complex(&mut rng);
    let h = Homotopy::from_coefficients(
        CoefficientSystem::new(system.clone(), start)?,
        CoefficientSystem::new(system, target)?,
        gamma,
    )?;
    let starts = diagonal_fiber(&degrees, &TorusPoint(ratios));
    let report = track_all(&h, &starts, settings);
    let laurent = CoefficientSystem::from_sparse(g);
    let mut kept = SolutionSet::default();
    for (p, prov) in report
        .solutions
        .points
        .iter()
        .zip(&report.solutions.provenance)
    {
        if let Ok((q, r)) = newton_refine_coefficients(&laurent, p, settings) {
            if q.on_torus() && q.relative_distance(p) < DEDUP_DISTANCE {
                kept.push(q, r, prov.clone());
            }
        }
    }
    kept.dedup();
    kept.sort();
    Ok((kept, starts.len() as u64))
}

/// Roots of a univariate Laurent polynomial via companion-matrix eigenvalues.
fn univariate_roots(g: &SparseSystem, settings: &TrackerSettings) -> Result<SolutionSet> {
    let terms: Vec<(i64, Complex64)> = g.terms(0).map(|(a, c)| (a[0], *c)).collect();
    let low = terms.iter().map(|t| t.0).min().expect("nonempty support");
    let degree = (terms.iter().map(|t| t.0).max().expect("nonempty support") - low) as usize;
    if degree == 0 {
        return Err(Error::ZeroMixedVolume { witness: vec![0] });
    }
    let mut coeffs = vec![Complex64::zero(); degree + 1];
    for (e, c) in &terms {
        coeffs[(e - low) as usize] = *c;
    }
    let lead = coeffs[degree];
    let roots: Vec<Complex64> = if degree == 1 {
        vec![-coeffs[0] / lead]
    } else {
        let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -coeffs[i] / lead;
        }
        companion
            .schur()
            .eigenvalues()
            .ok_or(Error::NoConvergence {
                residual: f64::INFINITY,
            })?
            .iter()
            .cloned()
            .collect()
    };
    let mut set = SolutionSet::default();
    for r in roots {
        let p = TorusPoint(vec![r]);
        let p = match newton_refine(g, &p, settings) {
            Ok((q, _)) if q.relative_distance(&p) < 1e-4 => q,
            _ => p,
        };
        if p.on_torus() {
            let res = g.residual(&p.0);
            set.push(p, res, Provenance::default());
        }
    }
    set.dedup();
    set.sort();
    check_count(set, degree as u64)
}

/// Random system on the vertex supports, solved by decomposition.
pub fn decomposable_start_system(
    supports: &SupportSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<(SparseSystem, SolveReport)> {
    let vertices = supports.vertex_system();
    let g = random_system(&vertices, seed.child(0));
    let report = solve_decomposable(&g, seed.child(1), settings)?;
    Ok((g, report))
}

/// Unit-modulus random coefficients on the given supports.
pub fn random_system(supports: &SupportSystem, seed: Seed) -> SparseSystem {
    let mut rng = seed.rng();
    let coefficients = supports
        .supports()
        .iter()
        .map(|s| (0..s.len()).map(|_| unit_complex(&mut rng)).collect())
        .collect();
    SparseSystem::new(supports.clone(), coefficients).expect("unit coefficients are nonzero")
}

/// Straight-line homotopy from a decomposable start system on the vertex
/// supports. Lost paths are reported as warnings, not errors.
pub fn solve_general(
    f: &SparseSystem,
    seed: Seed,
    settings: &SolverSettings,
) -> Result<SolveReport> {
    settings.tracker.validate()?;
    let start = Instant::now();
    let (g, start_report) = decomposable_start_system(f.supports(), seed.child(0), settings)?;
    let padded: Vec<Vec<Complex64>> = f
        .supports()
        .supports()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut out = vec![Complex64::zero(); s.len()];
            for (a, c) in g.terms(i) {
                out[s.position(a).expect("vertices are support points")] = *c;
            }
            out
        })
        .collect();
    let start_system = CoefficientSystem::new(f.supports().clone(), padded)?;
    let target = CoefficientSystem::from_sparse(f);
    let starts = &start_report.solutions.points;
    let mv = start_report.tree.mv;
    let mut node = DecompositionTree::leaf(NodeKind::Homotopy, f.n(), mv);
    node.ledger.homotopy_paths = starts.len() as u64;
    let mut best = None;
    let mut warnings = Vec::new();
    for attempt in 0..=settings.max_retries {
        let gamma = unit_complex(&mut seed.child(1).child(attempt as u64).rng());
        let h = Homotopy::from_coefficients(start_system.clone(), target.clone(), gamma)?;
        let report = track_all(&h, starts, &settings.tracker);
        if attempt > 0 {
            node.ledger.retry_paths += starts.len() as u64;
        }
        let complete = report.solutions.len() as u64 == mv;
        let better = best
            .as_ref()
            .is_none_or(|b: &crate::tracking::TrackReport| {
                report.solutions.len() > b.solutions.len()
            });
        if better {
            best = Some(report);
        }
        if complete {
            break;
        }
    }
    let best = best.expect("at least one attempt");
    for (path, failure) in &best.failures {
        warnings.push(format!("path {path}: {failure}"));
    }
    for path in &best.duplicates {
        warnings.push(format!("path {path}: endpoint coincides with another path"));
    }
    if (best.solutions.len() as u64) < mv {
        warnings.push(format!(
            "found {} of {} solutions",
            best.solutions.len(),
            mv
        ));
    }
    node.children.push(start_report.tree);
    node.elapsed_ms = elapsed_ms(start);
    let mut report = SolveReport::new(f, best.solutions, node, seed);
    report.warnings = warnings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_roots_of_one() {
        let f = SparseSystem::from_terms(
            1,
            vec![vec![(vec![0], c(-1.0, 0.0)), (vec![2], c(1.0, 0.0))]],
        )
        .unwrap();
        let report = solve_decomposable(&f, Seed(1), &SolverSettings::default()).unwrap();
        assert!(matches!(
            report.tree.kind,
            NodeKind::Lacunary { index: 2, .. }
        ));
        let xs: Vec<Complex64> = report.solutions.points.iter().map(|p| p.0[0]).collect();
        assert_eq!(xs.len(), 2);
        assert!((xs[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((xs[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quintic_roots() {
        let f = SparseSystem::from_terms(
            1,
            vec![(0..=5)
                .map(|e| (vec![e - 2], c(1.0 + e as f64, 0.5 * e as f64 - 1.0)))
                .collect()],
        )
        .unwrap();
        let set = blackbox(&f, Seed(3), &SolverSettings::default()).unwrap();
        assert_eq!(set.len(), 5);
        assert!(set.residuals.iter().all(|&r| r < 1e-10));
    }

    #[test]
    fn linear_system_has_one_solution() {
        let f = SparseSystem::from_terms(
            2,
            vec![
                vec![
                    (vec![0, 0], c(1.0, 0.0)),
                    (vec![1, 0], c(2.0, 1.0)),
                    (vec![0, 1], c(-1.0, 0.3)),
                ],
                vec![
                    (vec![0, 0], c(0.5, -1.0)),
                    (vec![1, 0], c(1.0, 1.0)),
                    (vec![0, 1], c(0.2, 2.0)),
                ],
            ],
        )
        .unwrap();
        let set = blackbox(&f, Seed(5), &SolverSettings::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.residuals[0] < 1e-10);
    }

    #[test]
    fn triangular_square_system() {
        // x^2 = 2, x y^2 = 3
        let f = SparseSystem::from_terms(
            2,
            vec![
                vec![(vec![0, 0], c(-2.0, 0.0)), (vec![2, 0], c(1.0, 0.0))],
                vec![
                    (vec![0, 0], c(-3.0, 0.0)),
                    (vec![1, 2], c(1.0, 0.0)),
                    (vec![1, 0], c(0.5, 0.5)),
                ],
            ],
        )
        .unwrap();
        let report = solve_decomposable(&f, Seed(9), &SolverSettings::default()).unwrap();
        assert_eq!(report.solutions.len(), 4);
        assert!(report.max_residual() < 1e-10);
    }
}
