//! Supports `A_1, ..., A_n` in `Z^n`, sparse systems over them, and the
//! lattice operations used by the decompositions.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::hull_vertices;
use crate::intlinalg::{rank, smith_normal_form, LatticeMatrix};
use crate::torus::monomial;

pub type Point = Vec<i64>;

/// Finite set of distinct lattice points, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    dim: usize,
    points: Vec<Point>,
}

impl Support {
    pub fn new(dim: usize, mut points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSupport("empty support".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::InvalidSupport(format!(
                "point {p:?} does not lie in Z^{dim}"
            )));
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSupport(format!(
                "duplicate exponent {:?}",
                w[0]
            )));
        }
        Ok(Support { dim, points })
    }

    /// Builds a support from points that may repeat.
    pub fn from_multiset(dim: usize, mut points: Vec<Point>) -> Result<Self> {
        points.sort();
        points.dedup();
        Support::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(|p| p.iter().all(|&v| v == 0))
    }

    pub fn position(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    /// The translate `A - beta`.
    pub fn translated(&self, beta: &[i64]) -> Support {
        Support {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| p.iter().zip(beta).map(|(a, b)| a - b).collect())
                .collect(),
        }
    }

    /// Translation making the origin a member: zero if it already is,
    /// otherwise the lexicographically smallest point.
    pub fn normalizing_shift(&self) -> Point {
        if self.contains_origin() {
            vec![0; self.dim]
        } else {
            self.points[0].clone()
        }
    }

    /// Differences `a - a_0` against the first point.
    pub fn differences(&self) -> Vec<Point> {
        let base = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect()
    }
}

/// Square collection of supports: `n` supports in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportSystem {
    supports: Vec<Support>,
}

impl SupportSystem {
    pub fn new(supports: Vec<Support>) -> Result<Self> {
        let n = supports.len();
        if let Some(s) = supports.iter().find(|s| s.dim != n) {
            return Err(Error::InvalidSupport(format!(
                "support of dimension {} in a system of {n} supports",
                s.dim
            )));
        }
        Ok(SupportSystem { supports })
    }

    /// Convenience constructor from raw point lists.
    pub fn from_points(points: Vec<Vec<Point>>) -> Result<Self> {
        let n = points.len();
        SupportSystem::new(
            points
                .into_iter()
                .map(|p| Support::new(n, p))
                .collect::<Result<_>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.supports.len()
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn support(&self, i: usize) -> &Support {
        &self.supports[i]
    }

    /// All points of the supports with indices in `subset`, as columns.
    pub fn difference_matrix(&self, subset: &[usize]) -> Option<LatticeMatrix> {
        let cols: Vec<Point> = subset
            .iter()
            .flat_map(|&i| self.supports[i].differences())
            .filter(|d| d.iter().any(|&v| v != 0))
            .collect();
        if cols.is_empty() {
            None
        } else {
            Some(LatticeMatrix::from_columns(&cols).expect("nonempty columns"))
        }
    }

    /// Supports replaced by their vertex sets.
    pub fn vertex_system(&self) -> SupportSystem {
        SupportSystem {
            supports: self.supports.iter().map(vertices).collect(),
        }
    }
}

/// Translation record produced by [`normalize`].
pub type Translations = Vec<Point>;

pub fn normalize(system: &SupportSystem) -> (SupportSystem, Translations) {
    let shifts: Translations = system
        .supports
        .iter()
        .map(Support::normalizing_shift)
        .collect();
    let supports = system
        .supports
        .iter()
        .zip(&shifts)
        .map(|(s, b)| s.translated(b))
        .collect();
    (SupportSystem { supports }, shifts)
}

/// Rank of the affine lattice spanned by the supports in `subset`.
pub fn span_rank(system: &SupportSystem, subset: &[usize]) -> usize {
    system.difference_matrix(subset).map_or(0, |m| rank(&m))
}

/// Rows of a unimodular `U` such that the supports `U * A_i` are compact:
/// pairwise size reduction of the standard basis under the quadratic form
/// `sum (a - mean)(a - mean)^T` over all support points. Returns the identity
/// when no reduction step shrinks a row.
pub fn compact_coordinates(system: &SupportSystem) -> Vec<Vec<i64>> {
    let n = system.n();
    let pts: Vec<&Point> = system
        .supports
        .iter()
        .flat_map(|s| s.points.iter())
        .collect();
    let mean: Vec<f64> = (0..n)
        .map(|j| pts.iter().map(|p| p[j] as f64).sum::<f64>() / pts.len() as f64)
        .collect();
    let mut form = vec![vec![0.0; n]; n];
    for p in &pts {
        for i in 0..n {
            for j in 0..n {
                form[i][j] += (p[i] as f64 - mean[i]) * (p[j] as f64 - mean[j]);
            }
        }
    }
    let inner = |u: &[i64], v: &[i64]| -> f64 {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| u[i] as f64 * form[i][j] * v[j] as f64)
                    .sum::<f64>()
            })
            .sum()
    };
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    // Norms of lattice vectors form a discrete set, so strict decreases end.
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                let norm_j = inner(&rows[j], &rows[j]);
                if i == j || norm_j <= 0.0 {
                    continue;
                }
                let mu = (inner(&rows[i], &rows[j]) / norm_j).round() as i64;
                if mu == 0 {
                    continue;
                }
                let candidate: Vec<i64> = rows[i]
                    .iter()
                    .zip(&rows[j])
                    .map(|(a, b)| a - mu * b)
                    .collect();
                if inner(&candidate, &candidate) < inner(&rows[i], &rows[i]) * (1.0 - 1e-9) {
                    rows[i] = candidate;
                    changed = true;
                }
            }
        }
    }
    rows
}

/// Extreme points of `conv(A)`.
pub fn vertices(support: &Support) -> Support {
    Support {
        dim: support.dim,
        points: hull_vertices(&support.points),
    }
}

/// For each support, the position in `B_i` of the preimage of each point of
/// `A_i`, so coefficients can follow the points.
pub type Reindex = Vec<Vec<usize>>;

/// `B_i = phi^{-1}(A_i)` for an injective `phi` whose image contains every
/// support point.
pub fn preimage_supports(
    system: &SupportSystem,
    phi: &LatticeMatrix,
) -> Result<(SupportSystem, Reindex)> {
    let n = system.n();
    if phi.rows() != n || phi.cols() != n {
        return Err(Error::Dimension(format!(
            "map must be {n}x{n}, got {}x{}",
            phi.rows(),
            phi.cols()
        )));
    }
    let inv = rational_inverse(phi)?;
    let mut supports = Vec::with_capacity(n);
    let mut reindex = Vec::with_capacity(n);
    for s in &system.supports {
        let mut pre = Vec::with_capacity(s.len());
        for a in &s.points {
            let mut b = Vec::with_capacity(n);
            for row in &inv {
                let v: BigRational = row
                    .iter()
                    .zip(a)
                    .map(|(r, &x)| r * BigRational::from_integer(x.into()))
                    .sum();
                if !v.is_integer() {
                    return Err(Error::NotInLattice { point: a.clone() });
                }
                b.push(v.to_integer().to_i64().ok_or(Error::Overflow)?);
            }
            pre.push(b);
        }
        let support = Support::new(n, pre.clone())?;
        reindex.push(
            pre.iter()
                .map(|b| support.position(b).expect("point just inserted"))
                .collect(),
        );
        supports.push(support);
    }
    Ok((SupportSystem { supports }, reindex))
}

fn rational_inverse(m: &LatticeMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(m.get(i, j).clone())
                    } else if j - n == i {
                        BigRational::from_integer(1.into())
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        let piv = (k..n)
            .find(|&i| !aug[i][k].is_zero())
            .ok_or_else(|| Error::Dimension("map is not injective".into()))?;
        aug.swap(k, piv);
        let inv = aug[k][k].recip();
        for v in aug[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != k && !aug[i][k].is_zero() {
                let f = aug[i][k].clone();
                let pivot = aug[k].clone();
                for (v, p) in aug[i].iter_mut().zip(&pivot) {
                    *v -= p * &f;
                }
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Splitting `Z^n = Z^I (+) complement` from a Smith form of the supports in
/// a triangular witness `I`. In the coordinates `psi = P^{-1}` the saturation
/// of `Z A_I` is the first `k` coordinates and the quotient `Z^n / Z^I` the
/// last `n - k`.
#[derive(Clone, Debug)]
pub struct LatticeSplitting {
    pub n: usize,
    pub k: usize,
    pub p: LatticeMatrix,
    pub psi: LatticeMatrix,
}

impl LatticeSplitting {
    pub fn new(system: &SupportSystem, subset: &[usize]) -> Result<Self> {
        let n = system.n();
        let r = span_rank(system, subset);
        if r != subset.len() {
            return Err(Error::RankCondition {
                subset: subset.to_vec(),
                rank: r,
                expected: subset.len(),
            });
        }
        let m = system.difference_matrix(subset).ok_or(Error::ZeroMatrix)?;
        let snf = smith_normal_form(&m)?;
        Ok(LatticeSplitting {
            n,
            k: r,
            p: snf.p,
            psi: snf.p_inv,
        })
    }

    /// `psi * alpha`.
    pub fn coords(&self, alpha: &[i64]) -> Point {
        self.psi
            .apply_i64(alpha)
            .iter()
            .map(|v| v.to_i64().expect("coordinate overflow"))
            .collect()
    }

    pub fn base_coords(&self, alpha: &[i64]) -> Point {
        self.coords(alpha)[..self.k].to_vec()
    }

    pub fn quotient_coords(&self, alpha: &[i64]) -> Point {
        self.coords(alpha)[self.k..].to_vec()
    }

    /// Projection `Z^n -> Z^{n-k}` onto the quotient.
    pub fn projection(&self) -> LatticeMatrix {
        self.psi.row_block(self.k, self.n)
    }

    /// Image of a support lying in the saturation, in `Z^k` coordinates.
    pub fn base_support(&self, s: &Support) -> Result<Support> {
        let pts = s
            .points()
            .iter()
            .map(|a| {
                let c = self.coords(a);
                if c[self.k..].iter().any(|&v| v != 0) {
                    Err(Error::NotInLattice { point: a.clone() })
                } else {
                    Ok(c[..self.k].to_vec())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Support::new(self.k, pts)
    }

    /// Image of a support in the quotient, duplicates merged.
    pub fn quotient_support(&self, s: &Support) -> Support {
        let pts = s.points().iter().map(|a| self.quotient_coords(a)).collect();
        Support::from_multiset(self.n - self.k, pts).expect("nonempty image")
    }
}

/// Projection onto `Z^n / Z^I` and the images of the supports outside `I`.
pub fn quotient_supports(
    system: &SupportSystem,
    subset: &[usize],
) -> Result<(LatticeMatrix, SupportSystem)> {
    let split = LatticeSplitting::new(system, subset)?;
    let images = (0..system.n())
        .filter(|i| !subset.contains(i))
        .map(|j| split.quotient_support(&system.supports[j]))
        .collect();
    Ok((split.projection(), SupportSystem::new(images)?))
}

/// A support system together with one nonzero coefficient per point.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    system: SupportSystem,
    coefficients: Vec<Vec<Complex64>>,
}

impl SparseSystem {
    pub fn new(system: SupportSystem, coefficients: Vec<Vec<Complex64>>) -> Result<Self> {
        if coefficients.len() != system.n() {
            return Err(Error::InvalidSystem(format!(
                "{} coefficient lists for {} polynomials",
                coefficients.len(),
                system.n()
            )));
        }
        for (i, (s, c)) in system.supports.iter().zip(&coefficients).enumerate() {
            if s.len() != c.len() {
                return Err(Error::InvalidSystem(format!(
                    "polynomial {i}: {} coefficients for {} points",
                    c.len(),
                    s.len()
                )));
            }
            if c.iter().any(|z| z.is_zero()) {
                return Err(Error::InvalidSystem(format!(
                    "polynomial {i} has a zero coefficient"
                )));
            }
        }
        Ok(SparseSystem {
            system,
            coefficients,
        })
    }

    /// Builds a system from `(exponent, coefficient)` lists. Zero
    /// coefficients are dropped; repeated exponents are an error.
    pub fn from_terms(n: usize, polys: Vec<Vec<(Point, Complex64)>>) -> Result<Self> {
        let mut supports = Vec::with_capacity(polys.len());
        let mut coefficients = Vec::with_capacity(polys.len());
        for mut terms in polys {
            terms.retain(|(_, c)| !c.is_zero());
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            let (pts, cs): (Vec<Point>, Vec<Complex64>) = terms.into_iter().unzip();
            supports.push(Support::new(n, pts)?);
            coefficients.push(cs);
        }
        SparseSystem::new(SupportSystem::new(supports)?, coefficients)
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn supports(&self) -> &SupportSystem {
        &self.system
    }

    pub fn coefficients(&self) -> &[Vec<Complex64>] {
        &self.coefficients
    }

    /// Terms of polynomial `i`.
    pub fn terms(&self, i: usize) -> impl Iterator<Item = (&Point, &Complex64)> {
        self.system.supports[i]
            .points
            .iter()
            .zip(&self.coefficients[i])
    }

    /// Subsystem of the polynomials in `subset` (still in `Z^n`).
    pub fn polynomials(&self, subset: &[usize]) -> Vec<(Support, Vec<Complex64>)> {
        subset
            .iter()
            .map(|&i| {
                (
                    self.system.supports[i].clone(),
                    self.coefficients[i].clone(),
                )
            })
            .collect()
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n())
            .map(|i| self.terms(i).map(|(a, c)| c * monomial(x, a)).sum())
            .collect()
    }

    /// Max-norm of `F(x)`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        self.evaluate(x)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Translates every support to contain the origin. Coefficients are kept:
/// dividing a polynomial by a monomial does not change its torus zeros.
pub fn normalize_sparse(f: &SparseSystem) -> (SparseSystem, Translations) {
    let (system, shifts) = normalize(&f.system);
    (
        SparseSystem {
            system,
            coefficients: f.coefficients.clone(),
        },
        shifts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_coordinates_unskews() {
        let skewed: Vec<Point> = vec![vec![0, 0], vec![2, 1], vec![3, 1], vec![7, 3], vec![10, 4]];
        let system = SupportSystem::from_points(vec![skewed.clone(), skewed.clone()]).unwrap();
        let u = compact_coordinates(&system);
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        assert_eq!(det.abs(), 1);
        let moved: Vec<Vec<i64>> = skewed
            .iter()
            .map(|p| u.iter().map(|r| r[0] * p[0] + r[1] * p[1]).collect())
            .collect();
        for j in 0..2 {
            let lo = moved.iter().map(|p| p[j]).min().unwrap();
            let hi = moved.iter().map(|p| p[j]).max().unwrap();
            assert!(hi - lo <= 2, "{moved:?}");
        }
        let square =
            SupportSystem::from_points(vec![columns(&[&[0, 1, 0, 1], &[0, 0, 1, 1]]); 2]).unwrap();
        assert_eq!(compact_coordinates(&square), vec![vec![1, 0], vec![0, 1]]);
    }

    pub(crate) fn columns(rows: &[&[i64]]) -> Vec<Point> {
        (0..rows[0].len())
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect()
    }

    fn lacunary_example() -> SupportSystem {
        SupportSystem::from_points(vec![
            columns(&[&[0, 0, 3, 6, 12], &[0, 4, 3, 6, 0]]),
            columns(&[&[0, 3, 6, 9, 9], &[0, 7, 2, 1, 5]]),
        ])
        .unwrap()
    }

    fn triangular_example() -> SupportSystem {
        let a = columns(&[
            &[0, 1, 1, 1, 2, 2, 2, 3],
            &[0, 0, 1, 2, 0, 1, 2, 1],
            &[0, 1, 2, 3, 2, 3, 4, 4],
        ]);
        let a3 = columns(&[
            &[0, 0, 0, 0, 1, 1],
            &[0, 0, 0, 1, 0, 1],
            &[0, 2, 4, 5, 3, 4],
        ]);
        SupportSystem::from_points(vec![a.clone(), a, a3]).unwrap()
    }

    #[test]
    fn normalize_cases() {
        let s = Support::new(2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(s.normalizing_shift(), vec![0, 0]);
        let s = Support::new(2, vec![vec![1, 0], vec![2, 0]]).unwrap();
        assert_eq!(s.normalizing_shift(), vec![1, 0]);
        assert_eq!(s.translated(&[1, 0]).points(), &[vec![0, 0], vec![1, 0]]);
        let (norm, shifts) = normalize(&lacunary_example());
        assert_eq!(norm, lacunary_example());
        assert!(shifts.iter().all(|b| b.iter().all(|&v| v == 0)));
    }

    #[test]
    fn duplicate_points_rejected() {
        assert!(Support::new(1, vec![vec![1], vec![1]]).is_err());
        assert!(Support::new(1, vec![]).is_err());
    }

    #[test]
    fn span_ranks() {
        let t = triangular_example();
        assert_eq!(span_rank(&t, &[0, 1]), 2);
        assert_eq!(span_rank(&lacunary_example(), &[0, 1]), 2);
        let s = SupportSystem::from_points(vec![
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]],
            vec![vec![0, 0, 0], vec![0, 1, 0]],
            vec![vec![0, 0, 0], vec![0, 0, 1]],
        ])
        .unwrap();
        assert_eq!(span_rank(&s, &[0]), 1);
    }

    #[test]
    fn preimage_of_lacunary_example() {
        let phi = LatticeMatrix::from_rows(&[[3, 0], [-1, 4]]).unwrap();
        let (b, reindex) = preimage_supports(&lacunary_example(), &phi).unwrap();
        let b1 = Support::new(2, columns(&[&[0, 0, 1, 2, 4], &[0, 1, 1, 2, 1]])).unwrap();
        let b2 = Support::new(2, columns(&[&[0, 1, 2, 3, 3], &[0, 2, 1, 1, 2]])).unwrap();
        assert_eq!(b.support(0), &b1);
        assert_eq!(b.support(1), &b2);
        // Forward application recovers A.
        for (i, s) in lacunary_example().supports().iter().enumerate() {
            for (j, a) in s.points().iter().enumerate() {
                let bpt = &b.support(i).points()[reindex[i][j]];
                let fwd: Vec<i64> = phi
                    .apply_i64(bpt)
                    .iter()
                    .map(|v| v.to_i64().unwrap())
                    .collect();
                assert_eq!(&fwd, a);
            }
        }
    }

    #[test]
    fn preimage_identity_and_scaling() {
        let s = lacunary_example();
        let (b, _) = preimage_supports(&s, &LatticeMatrix::identity(2)).unwrap();
        assert_eq!(b, s);
        let s = SupportSystem::from_points(vec![
            vec![vec![0, 0], vec![2, 0]],
            vec![vec![0, 0], vec![0, 2]],
        ])
        .unwrap();
        let two = LatticeMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap();
        let (b, _) = preimage_supports(&s, &two).unwrap();
        assert_eq!(b.support(0).points(), &[vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn preimage_rejects_points_outside_image() {
        let s = SupportSystem::from_points(vec![
            vec![vec![0, 0], vec![1, 0]],
            vec![vec![0, 0], vec![0, 2]],
        ])
        .unwrap();
        let two = LatticeMatrix::from_rows(&[[2, 0], [0, 2]]).unwrap();
        assert!(matches!(
            preimage_supports(&s, &two),
            Err(Error::NotInLattice { .. })
        ));
    }

    #[test]
    fn quotient_of_triangular_example() {
        let t = triangular_example();
        let (proj, q) = quotient_supports(&t, &[0, 1]).unwrap();
        assert_eq!(proj.rows(), 1);
        // The projection kills the saturation Z{(1,0,1),(0,1,1)}.
        for v in [[1i64, 0, 1], [0, 1, 1]] {
            assert!(proj.apply_i64(&v)[0].is_zero());
        }
        // Unimodular up to sign: c - a - b or its negative.
        let row: Vec<i64> = (0..3).map(|j| proj.get(0, j).to_i64().unwrap()).collect();
        assert!(row == vec![-1, -1, 1] || row == vec![1, 1, -1], "{row:?}");
        let pts: Vec<i64> = q.support(0).points().iter().map(|p| p[0]).collect();
        let mut abs: Vec<i64> = pts.iter().map(|v| v.abs()).collect();
        abs.sort();
        assert_eq!(abs, vec![0, 2, 4]);
    }

    #[test]
    fn quotient_of_coordinate_subspace() {
        let s = SupportSystem::from_points(vec![
            vec![vec![0, 0, 0], vec![1, 0, 0]],
            vec![vec![0, 0, 0], vec![1, 2, 0], vec![0, 1, 1], vec![3, 0, 5]],
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![4, 0, 0]],
        ])
        .unwrap();
        let (proj, q) = quotient_supports(&s, &[0]).unwrap();
        let split = LatticeSplitting::new(&s, &[0]).unwrap();
        // Images of a support inside Z^I collapse to the origin.
        let inside = Support::new(3, vec![vec![0, 0, 0], vec![2, 0, 0]]).unwrap();
        assert_eq!(split.quotient_support(&inside).len(), 1);
        // Z_J is a lattice of rank 2 and the images are full rank there.
        assert_eq!(proj.rows(), 2);
        assert_eq!(span_rank(&q, &[0, 1]), 2);
        assert_eq!(
            crate::intlinalg::lattice_index(&proj),
            crate::intlinalg::LatticeIndex::Finite(1.into())
        );
    }

    #[test]
    fn quotient_requires_rank_condition() {
        let t = triangular_example();
        assert!(matches!(
            quotient_supports(&t, &[0, 2]),
            Err(Error::RankCondition { .. })
        ));
    }

    #[test]
    fn vertex_extraction() {
        let simplex = Support::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(vertices(&simplex), simplex);
        let line = Support::new(3, vec![vec![0, 0, 0], vec![1, 0, 0], vec![2, 0, 0]]).unwrap();
        assert_eq!(vertices(&line).points(), &[vec![0, 0, 0], vec![2, 0, 0]]);
    }
}
