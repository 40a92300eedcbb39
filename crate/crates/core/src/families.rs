//! The five-variable benchmark family built from two planar systems and the
//! unit cube, embedded through a pair of lattice injections `Z^2 -> Z^5`.

use rand::Rng;

use crate::intlinalg::{rank, LatticeMatrix};
use crate::random::Seed;
use crate::supports::{Point, SupportSystem};

pub type Injection = [[i64; 5]; 2];

/// Two supports in `Z^2`.
pub type PlanarPair = [Vec<(i64, i64)>; 2];

/// The planar supports `(A_1, A_2)` and `(B_1, B_2)`.
pub fn planar_blocks() -> (PlanarPair, PlanarPair) {
    (
        [
            vec![(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)],
            vec![(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)],
        ],
        [
            vec![(0, 0), (2, 0), (0, 1), (2, 3)],
            vec![(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2)],
        ],
    )
}

fn embed(map: &Injection, pts: &[(i64, i64)]) -> Vec<Point> {
    pts.iter()
        .map(|&(a, b)| (0..5).map(|j| a * map[0][j] + b * map[1][j]).collect())
        .collect()
}

fn cube() -> Vec<Point> {
    (0..32u32)
        .map(|m| (0..5).map(|j| ((m >> j) & 1) as i64).collect())
        .collect()
}

/// `(i(A_1), i(A_2), j(B_1), j(B_2), {0,1}^5)`.
pub fn embedded_system(i: &Injection, j: &Injection) -> SupportSystem {
    let (a, b) = planar_blocks();
    SupportSystem::from_points(vec![
        embed(i, &a[0]),
        embed(i, &a[1]),
        embed(j, &b[0]),
        embed(j, &b[1]),
        cube(),
    ])
    .expect("embedded supports are valid")
}

fn unit(k: usize) -> [i64; 5] {
    let mut v = [0; 5];
    v[k] = 1;
    v
}

/// The injections given by the first four unit vectors.
pub fn unit_injections() -> (Injection, Injection) {
    ([unit(0), unit(1)], [unit(2), unit(3)])
}

/// The injections given by `e_1 - e_2, e_2 - e_3, e_3 - e_4, e_4 - e_5`.
pub fn shifted_injections() -> (Injection, Injection) {
    let d = |k: usize| {
        let mut v = unit(k);
        v[k + 1] = -1;
        v
    };
    ([d(0), d(1)], [d(2), d(3)])
}

/// Entries uniform in `[-2, 2]`, resampled until the four vectors are
/// linearly independent (so the two images meet only in zero).
pub fn random_injections(seed: Seed) -> (Injection, Injection) {
    let mut rng = seed.rng();
    loop {
        let mut v = [[0i64; 5]; 4];
        for row in v.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(-2..=2);
            }
        }
        let m = LatticeMatrix::from_rows(&v).expect("rectangular");
        if rank(&m) == 4 {
            return ([v[0], v[1]], [v[2], v[3]]);
        }
    }
}
