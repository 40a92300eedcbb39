#![allow(dead_code)]

use decomp::supports::{Point, SparseSystem, SupportSystem};
use num_complex::Complex64;

/// Points given as the columns of a matrix with rows `rows`.
pub fn columns(rows: &[&[i64]]) -> Vec<Point> {
    (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

/// Planar pair spanning a sublattice of index 12.
pub fn lacunary_pair() -> SupportSystem {
    SupportSystem::from_points(vec![
        columns(&[&[0, 0, 3, 6, 12], &[0, 4, 3, 6, 0]]),
        columns(&[&[0, 3, 6, 9, 9], &[0, 7, 2, 1, 5]]),
    ])
    .unwrap()
}

/// Its preimage under `(a, b) -> (3a, -a + 4b)`.
pub fn preimage_pair() -> SupportSystem {
    SupportSystem::from_points(vec![
        columns(&[&[0, 0, 1, 2, 4], &[0, 1, 1, 2, 1]]),
        columns(&[&[0, 1, 2, 3, 3], &[0, 2, 1, 1, 2]]),
    ])
    .unwrap()
}

/// Twelve-point planar support whose hull has five vertices.
pub fn start_support() -> Vec<Point> {
    columns(&[
        &[0, 0, 1, 1, 2, 3, 3, 3, 4, 5, 5, 6],
        &[0, 2, 0, 1, 3, 0, 1, 4, 2, 3, 4, 4],
    ])
}

pub fn start_pair() -> SupportSystem {
    SupportSystem::from_points(vec![start_support(), start_support()]).unwrap()
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Three-variable system whose first two equations only involve `xz` and `yz`.
pub fn triangular_system() -> SparseSystem {
    let base = [
        [0, 0, 0],
        [1, 0, 1],
        [1, 1, 2],
        [1, 2, 3],
        [2, 0, 2],
        [2, 1, 3],
        [2, 2, 4],
        [3, 1, 4],
    ];
    let c1 = [1., 2., 3., 4., 5., 6., 7., 8.];
    let c2 = [2., 3., 5., 7., 11., 13., 17., 19.];
    let third: [([i64; 3], f64); 6] = [
        ([0, 0, 0], 1.),
        ([0, 0, 2], 3.),
        ([0, 0, 4], 9.),
        ([0, 1, 5], 27.),
        ([1, 0, 3], 81.),
        ([1, 1, 4], 243.),
    ];
    let poly = |cs: &[f64; 8]| -> Vec<(Point, Complex64)> {
        base.iter()
            .zip(cs)
            .map(|(a, &v)| (a.to_vec(), c(v)))
            .collect()
    };
    SparseSystem::from_terms(
        3,
        vec![
            poly(&c1),
            poly(&c2),
            third.iter().map(|(a, v)| (a.to_vec(), c(*v))).collect(),
        ],
    )
    .unwrap()
}
