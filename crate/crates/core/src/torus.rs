//! Points of the complex torus, monomial maps between tori, fibers of
//! diagonal maps and restriction of polynomials to fibers.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::LatticeMatrix;
use crate::supports::{Point, Reindex, SparseSystem, Support, SupportSystem};

/// Coordinates with modulus at or below this are treated as off the torus.
pub const TORUS_THRESHOLD: f64 = 1e-10;

/// A merged fiber coefficient smaller than this fraction of the terms it
/// sums is treated as an exact cancellation.
const CANCELLATION: f64 = 1e-12;

/// `x^alpha` by binary exponentiation; one reciprocal per negative exponent.
pub fn monomial(x: &[Complex64], alpha: &[i64]) -> Complex64 {
    let mut acc = Complex64::one();
    for (&xi, &e) in x.iter().zip(alpha) {
        if e == 0 {
            continue;
        }
        let base = if e < 0 { xi.inv() } else { xi };
        acc *= pow_u64(base, e.unsigned_abs());
    }
    acc
}

fn pow_u64(mut base: Complex64, mut e: u64) -> Complex64 {
    let mut acc = Complex64::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint(pub Vec<Complex64>);

impl TorusPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let p = TorusPoint(coords);
        if p.on_torus() {
            Ok(p)
        } else {
            Err(Error::InvalidSystem(format!(
                "{:?} is not on the torus",
                p.0
            )))
        }
    }

    pub fn ones(n: usize) -> Self {
        TorusPoint(vec![Complex64::one(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn on_torus(&self) -> bool {
        self.0
            .iter()
            .all(|z| z.norm() > TORUS_THRESHOLD && z.is_finite())
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest coordinate-wise relative difference `|a_i - b_i| / max(|a_i|, |b_i|)`.
    /// Coordinates of a torus point can differ by many orders of magnitude,
    /// so each one is compared at its own scale.
    pub fn relative_distance(&self, other: &TorusPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let scale = a.norm().max(b.norm());
                if scale == 0.0 {
                    0.0
                } else {
                    (a - b).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }

    /// Coordinate-wise product.
    pub fn mul(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
}

/// Torus homomorphism `(C^x)^m -> (C^x)^k`, `x -> (x^{a_1}, ..., x^{a_k})`
/// where `a_i` is column `i` of the `m x k` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMap {
    matrix: LatticeMatrix,
    columns: Vec<Point>,
}

impl MonomialMap {
    pub fn new(matrix: LatticeMatrix) -> Result<Self> {
        let columns = (0..matrix.cols())
            .map(|j| matrix.column_i64(j))
            .collect::<Result<_>>()?;
        Ok(MonomialMap { matrix, columns })
    }

    pub fn matrix(&self) -> &LatticeMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn apply(&self, x: &TorusPoint) -> TorusPoint {
        assert_eq!(
            x.dim(),
            self.source_dim(),
            "monomial map dimension mismatch"
        );
        TorusPoint(self.columns.iter().map(|a| monomial(&x.0, a)).collect())
    }

    /// `self . other`, i.e. first `other`, then `self`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        MonomialMap::new(other.matrix.mul(&self.matrix)).expect("composed exponents fit")
    }
}

/// Preimage of `y` under `x -> (x_1^{d_1}, ..., x_n^{d_n})`, in polar form.
/// Branches are ordered with `j` ascending from zero, the first coordinate
/// varying slowest.
pub fn diagonal_fiber(d: &[u64], y: &TorusPoint) -> Vec<TorusPoint> {
    assert_eq!(d.len(), y.dim(), "one exponent per coordinate");
    let roots: Vec<Vec<Complex64>> = d
        .iter()
        .zip(&y.0)
        .map(|(&di, yi)| {
            if di == 1 {
                return vec![*yi];
            }
            let (rho, zeta) = yi.to_polar();
            let r = rho.powf(1.0 / di as f64);
            (0..di)
                .map(|j| Complex64::from_polar(r, (zeta + 2.0 * PI * j as f64) / di as f64))
                .collect()
        })
        .collect();
    let mut out = vec![Vec::with_capacity(d.len())];
    for choices in &roots {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(TorusPoint).collect()
}

/// Image support and merged coefficients of `f` restricted to the fiber
/// `{y0 * iota(z)}` where `iota` is dual to `projection`:
/// `c'_beta = sum_{alpha : pi(alpha) = beta} c_alpha y0^alpha`.
/// Coefficients may be zero; they are aligned with the returned support.
pub fn fiber_coefficients(
    support: &Support,
    coefficients: &[Complex64],
    projection: &LatticeMatrix,
    y0: &TorusPoint,
) -> (Support, Vec<Complex64>) {
    let (image, merged, _) = merge_on_fiber(support, coefficients, projection, y0);
    (image, merged)
}

/// `fiber_coefficients` together with `sum |c_alpha y0^alpha|` per image
/// point, the scale against which a merged coefficient counts as cancelled.
fn merge_on_fiber(
    support: &Support,
    coefficients: &[Complex64],
    projection: &LatticeMatrix,
    y0: &TorusPoint,
) -> (Support, Vec<Complex64>, Vec<f64>) {
    let images: Vec<Point> = support
        .points()
        .iter()
        .map(|a| {
            projection
                .apply_i64(a)
                .iter()
                .map(|v| v.to_i64().expect("projected exponent overflow"))
                .collect()
        })
        .collect();
    let image = Support::from_multiset(projection.rows(), images.clone()).expect("nonempty");
    let mut merged = vec![Complex64::zero(); image.len()];
    let mut mass = vec![0.0; image.len()];
    for ((a, c), beta) in support.points().iter().zip(coefficients).zip(&images) {
        let pos = image.position(beta).expect("image point present");
        let term = c * monomial(&y0.0, a);
        merged[pos] += term;
        mass[pos] += term.norm();
    }
    (image, merged, mass)
}

/// Restriction of the polynomials `subset` of `f` to the fiber through `y0`,
/// as a system on `Z^{n-k}`. Merged coefficients that cancel are dropped.
pub fn restrict_to_fiber(
    f: &SparseSystem,
    subset: &[usize],
    projection: &LatticeMatrix,
    y0: &TorusPoint,
) -> Result<SparseSystem> {
    let m = projection.rows();
    let mut polys = Vec::with_capacity(subset.len());
    for &j in subset {
        let (image, merged, mass) = merge_on_fiber(
            f.supports().support(j),
            &f.coefficients()[j],
            projection,
            y0,
        );
        let terms: Vec<(Point, Complex64)> = image
            .points()
            .iter()
            .cloned()
            .zip(merged)
            .zip(mass)
            .filter(|((_, c), mass)| c.norm() > CANCELLATION * mass && !c.is_zero())
            .map(|(term, _)| term)
            .collect();
        if terms.len() <= 1 && m > 0 {
            // A monomial (or nothing) has no zeros on the torus.
            return Err(Error::DegenerateFiber { index: j });
        }
        polys.push(terms);
    }
    SparseSystem::from_terms(m, polys)
}

/// Moves coefficients from `A_i` to the preimage supports `B_i` along the
/// reindexing returned by `preimage_supports`.
pub fn relabel(
    f: &SparseSystem,
    target: &SupportSystem,
    reindex: &Reindex,
) -> Result<SparseSystem> {
    let coefficients = f
        .coefficients()
        .iter()
        .zip(reindex)
        .map(|(cs, idx)| {
            let mut out = vec![Complex64::zero(); cs.len()];
            for (c, &pos) in cs.iter().zip(idx) {
                out[pos] = *c;
            }
            out
        })
        .collect();
    SparseSystem::new(target.clone(), coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supports::preimage_supports;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_map() {
        let m = MonomialMap::new(LatticeMatrix::identity(3)).unwrap();
        let x = TorusPoint(vec![c(1.0, 2.0), c(-0.5, 0.1), c(3.0, 0.0)]);
        assert_eq!(m.apply(&x), x);
    }

    #[test]
    fn lacunary_character_map() {
        // (x, y) -> (x^3 y^-1, y^4)
        let m = MonomialMap::new(LatticeMatrix::from_rows(&[[3, 0], [-1, 4]]).unwrap()).unwrap();
        let y = m.apply(&TorusPoint(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        assert!((y.0[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((y.0[1] - c(16.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn triangular_projection_map() {
        // (x, y, z) -> (xz, yz)
        let m =
            MonomialMap::new(LatticeMatrix::from_rows(&[[1, 0], [0, 1], [1, 1]]).unwrap()).unwrap();
        let y = m.apply(&TorusPoint::ones(3));
        assert_eq!(y, TorusPoint::ones(2));
    }

    #[test]
    fn diagonal_fiber_counts() {
        let y = TorusPoint(vec![c(0.3, -1.2), c(2.0, 0.5)]);
        assert_eq!(diagonal_fiber(&[1, 1], &y), vec![y.clone()]);
        let two = diagonal_fiber(&[2], &TorusPoint::ones(1));
        assert!((two[0].0[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((two[1].0[0] - c(-1.0, 0.0)).norm() < 1e-15);
        let six = diagonal_fiber(&[3, 2], &y);
        assert_eq!(six.len(), 6);
        for p in &six {
            assert!((p.0[0].powu(3) - y.0[0]).norm() < 1e-13);
            assert!((p.0[1].powu(2) - y.0[1]).norm() < 1e-13);
        }
        // Orbit under (eta, -1).
        let eta = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let rotated = TorusPoint(vec![six[0].0[0] * eta, -six[0].0[1]]);
        assert!(six.iter().any(|p| p.relative_distance(&rotated) < 1e-14));
    }

    #[test]
    fn relabel_binomial() {
        let f = SparseSystem::from_terms(
            1,
            vec![vec![(vec![0], c(-1.0, 0.0)), (vec![3], c(1.0, 0.0))]],
        )
        .unwrap();
        let phi = LatticeMatrix::from_rows(&[[3]]).unwrap();
        let (b, idx) = preimage_supports(f.supports(), &phi).unwrap();
        let g = relabel(&f, &b, &idx).unwrap();
        assert_eq!(g.supports().support(0).points(), &[vec![0], vec![1]]);
        assert_eq!(g.coefficients()[0], vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        let id = relabel(&f, f.supports(), &vec![vec![0, 1]]).unwrap();
        assert_eq!(id.coefficients(), f.coefficients());
    }

    #[test]
    fn monomial_negative_exponents() {
        let x = [c(2.0, 0.0), c(0.0, 1.0)];
        assert!((monomial(&x, &[-2, 3]) - c(0.0, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn fiber_at_ones_projects_support() {
        let f = SparseSystem::from_terms(
            2,
            vec![
                vec![(vec![0, 0], c(1.0, 0.0)), (vec![1, 0], c(2.0, 0.0))],
                vec![
                    (vec![0, 0], c(1.0, 0.0)),
                    (vec![0, 1], c(3.0, 0.0)),
                    (vec![0, 2], c(5.0, 0.0)),
                ],
            ],
        )
        .unwrap();
        let proj = LatticeMatrix::from_rows(&[[0, 1]]).unwrap();
        let g = restrict_to_fiber(&f, &[1], &proj, &TorusPoint::ones(2)).unwrap();
        assert_eq!(
            g.supports().support(0).points(),
            &[vec![0], vec![1], vec![2]]
        );
        assert_eq!(g.coefficients()[0], f.coefficients()[1]);
        // The first polynomial is constant along the fiber.
        assert!(matches!(
            restrict_to_fiber(&f, &[0], &proj, &TorusPoint::ones(2)),
            Err(Error::DegenerateFiber { index: 0 })
        ));
    }
}
