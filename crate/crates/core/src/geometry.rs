//! Lattice polytopes: exact convex hulls, volumes and mixed volumes.
//!
//! Hulls are built as placing triangulations with integer arithmetic. The
//! volume of a simplex spanned by a boundary facet and a new point equals the
//! facet's (unnormalized) normal evaluated at that point, so the whole
//! computation stays in `i128` with no division.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::intlinalg::{smith_normal_form, LatticeMatrix};
use crate::subsets::subsets_by_size;
use crate::supports::{span_rank, SupportSystem};

/// Determinant of a small square integer matrix (Bareiss, exact division).
fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .expect("determinant overflow");
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    sign * prev
}

/// Rank of a set of integer vectors by fraction-free elimination.
fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let m = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[r][c], a[i][c]);
            let g = x.gcd(&y);
            let (fx, fy) = (x / g, y / g);
            let pivot = a[r].clone();
            for (v, p) in a[i][c..m].iter_mut().zip(&pivot[c..m]) {
                *v = *v * fx - p * fy;
            }
            let gr = a[i].iter().fold(0i128, |acc, v| acc.gcd(v));
            if gr > 1 {
                for v in a[i].iter_mut() {
                    *v /= gr;
                }
            }
        }
        r += 1;
    }
    r
}

/// Outward-or-inward normal of the hyperplane through `d` points in `Z^d`:
/// `normal . (x - v0) = det[v1 - v0, ..., v_{d-1} - v0, x - v0]`.
fn hyperplane_normal(verts: &[&[i128]]) -> Vec<i128> {
    let d = verts[0].len();
    let diffs: Vec<Vec<i128>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = diffs
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if (d - 1 + j).is_multiple_of(2) { 1 } else { -1 };
            sign * det_i128(minor)
        })
        .collect()
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Debug)]
struct Facet {
    verts: Vec<usize>,
    normal: Vec<i128>,
    offset: i128,
}

/// Placing triangulation of a full-dimensional point set.
#[derive(Clone, Debug)]
struct Triangulation {
    dim: usize,
    points: Vec<Vec<i128>>,
    facets: Vec<Facet>,
    /// `d!` times the Euclidean volume.
    normalized_volume: i128,
}

impl Triangulation {
    /// Returns `None` when the points do not affinely span `R^d`.
    fn build(points: Vec<Vec<i128>>, dim: usize) -> Option<Self> {
        let simplex = initial_simplex(&points, dim)?;
        let interior: Vec<i128> = (0..dim)
            .map(|c| simplex.iter().map(|&i| points[i][c]).sum())
            .collect();
        let scale = (dim + 1) as i128;
        let mut tri = Triangulation {
            dim,
            points,
            facets: Vec::new(),
            normalized_volume: 0,
        };
        let base: Vec<Vec<i128>> = simplex[1..]
            .iter()
            .map(|&i| {
                (0..dim)
                    .map(|c| tri.points[i][c] - tri.points[simplex[0]][c])
                    .collect()
            })
            .collect();
        tri.normalized_volume = det_i128(base).abs();
        for skip in 0..=dim {
            let verts: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            tri.push_facet(verts, &interior, scale);
        }
        let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
        for p in 0..tri.points.len() {
            if !in_simplex.contains(&p) {
                tri.insert(p, &interior, scale);
            }
        }
        Some(tri)
    }

    fn push_facet(&mut self, mut verts: Vec<usize>, interior: &[i128], scale: i128) {
        verts.sort_unstable();
        let refs: Vec<&[i128]> = verts.iter().map(|&v| self.points[v].as_slice()).collect();
        let mut normal = hyperplane_normal(&refs);
        let mut offset = dot(&normal, &self.points[verts[0]]);
        let side = dot(&normal, interior) - scale * offset;
        debug_assert!(side != 0, "interior point on a boundary facet");
        if side > 0 {
            normal.iter_mut().for_each(|v| *v = -*v);
            offset = -offset;
        }
        self.facets.push(Facet {
            verts,
            normal,
            offset,
        });
    }

    fn insert(&mut self, p: usize, interior: &[i128], scale: i128) {
        let point = &self.points[p];
        let mut visible = Vec::new();
        for (idx, f) in self.facets.iter().enumerate() {
            let h = dot(&f.normal, point) - f.offset;
            if h > 0 {
                visible.push((idx, h));
            }
        }
        if visible.is_empty() {
            return;
        }
        let mut ridges: HashMap<Vec<usize>, u32> = HashMap::new();
        for &(idx, h) in &visible {
            self.normalized_volume += h;
            let verts = &self.facets[idx].verts;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut remove: Vec<usize> = visible.iter().map(|&(i, _)| i).collect();
        remove.sort_unstable_by(|a, b| b.cmp(a));
        for idx in remove {
            self.facets.swap_remove(idx);
        }
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort_unstable();
        for mut ridge in horizon {
            ridge.push(p);
            self.push_facet(ridge, interior, scale);
        }
    }

    /// Indices of the points that are vertices of the hull.
    fn vertex_indices(&self) -> Vec<usize> {
        // Distinct supporting hyperplanes, normalized to primitive normals.
        let mut planes: HashSet<(Vec<i128>, i128)> = HashSet::new();
        for f in &self.facets {
            let g = f.normal.iter().fold(f.offset.abs(), |acc, v| acc.gcd(v));
            let g = if g == 0 { 1 } else { g };
            planes.insert((f.normal.iter().map(|v| v / g).collect(), f.offset / g));
        }
        let planes: Vec<(Vec<i128>, i128)> = planes.into_iter().collect();
        let candidates: HashSet<usize> = self
            .facets
            .iter()
            .flat_map(|f| f.verts.iter().copied())
            .collect();
        let mut out: Vec<usize> = candidates
            .into_iter()
            .filter(|&p| {
                let tight: Vec<Vec<i128>> = planes
                    .iter()
                    .filter(|(n, b)| dot(n, &self.points[p]) == *b)
                    .map(|(n, _)| n.clone())
                    .collect();
                rank_i128(&tight) == self.dim
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Greedy choice of `dim + 1` affinely independent points.
fn initial_simplex(points: &[Vec<i128>], dim: usize) -> Option<Vec<usize>> {
    if points.is_empty() {
        return None;
    }
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<i128>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if chosen.len() == dim + 1 {
            break;
        }
        let diff: Vec<i128> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        diffs.push(diff);
        if rank_i128(&diffs) == diffs.len() {
            chosen.push(i);
        } else {
            diffs.pop();
        }
    }
    (chosen.len() == dim + 1).then_some(chosen)
}

fn dedup_points(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Affine dimension of a point set and coordinates of each point in a lattice
/// basis of its affine hull. The map is affine and injective on the hull.
pub(crate) fn affine_coordinates(points: &[Vec<i64>]) -> (usize, Vec<Vec<i64>>) {
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .filter(|d: &Vec<i64>| d.iter().any(|&v| v != 0))
        .collect();
    if diffs.is_empty() {
        return (0, vec![Vec::new(); points.len()]);
    }
    let m = LatticeMatrix::from_columns(&diffs).expect("nonempty difference matrix");
    let snf = smith_normal_form(&m).expect("nonzero difference matrix");
    let k = snf.rank();
    let coords = points
        .iter()
        .map(|p| {
            let d: Vec<i64> = p.iter().zip(base).map(|(a, b)| a - b).collect();
            snf.p_inv.apply_i64(&d)[..k]
                .iter()
                .map(|v| v.to_i64().expect("coordinate overflow"))
                .collect()
        })
        .collect();
    (k, coords)
}

fn to_i128(points: &[Vec<i64>]) -> Vec<Vec<i128>> {
    points
        .iter()
        .map(|p| p.iter().map(|&v| v as i128).collect())
        .collect()
}

/// Vertices of `conv(points)` (duplicates ignored), sorted lexicographically.
pub fn hull_vertices(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let pts = dedup_points(points);
    lower_dim_vertices(pts)
}

fn lower_dim_vertices(pts: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    if pts.len() <= 1 {
        return pts;
    }
    let (k, coords) = affine_coordinates(&pts);
    if k == 0 {
        return vec![pts[0].clone()];
    }
    if k == 1 {
        let lo = (0..pts.len()).min_by_key(|&i| coords[i][0]).unwrap();
        let hi = (0..pts.len()).max_by_key(|&i| coords[i][0]).unwrap();
        let mut out = vec![pts[lo].clone(), pts[hi].clone()];
        out.sort();
        return out;
    }
    let tri = Triangulation::build(to_i128(&coords), k).expect("full-dimensional in affine hull");
    tri.vertex_indices()
        .into_iter()
        .map(|i| pts[i].clone())
        .collect()
}

/// Normalized volume in `Z^dim` together with the hull's vertices.
fn volume_and_vertices(points: &[Vec<i64>], dim: usize) -> (BigInt, Vec<Vec<i64>>) {
    let pts = dedup_points(points);
    if pts.len() > dim {
        if let Some(tri) = Triangulation::build(to_i128(&pts), dim) {
            let verts = tri
                .vertex_indices()
                .into_iter()
                .map(|i| pts[i].clone())
                .collect();
            return (BigInt::from(tri.normalized_volume), verts);
        }
    }
    (BigInt::zero(), lower_dim_vertices(pts))
}

/// `d!` times the Euclidean volume of `conv(points)` in `Z^d`.
pub fn normalized_volume(points: &[Vec<i64>], dim: usize) -> BigInt {
    let pts = dedup_points(points);
    if pts.len() <= dim {
        return BigInt::zero();
    }
    Triangulation::build(to_i128(&pts), dim)
        .map(|t| BigInt::from(t.normalized_volume))
        .unwrap_or_else(BigInt::zero)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Convex polytope given by rational points in `Q^dim`.
#[derive(Clone, Debug)]
pub struct RationalPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<BigRational>>,
}

impl RationalPolytope {
    /// Polytope spanned by lattice points; only extreme points are kept.
    pub fn from_lattice_points(dim: usize, points: &[Vec<i64>]) -> Self {
        let vertices = hull_vertices(points)
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        RationalPolytope { dim, vertices }
    }
}

/// Exact Euclidean volume; zero when the polytope is not full-dimensional.
pub fn polytope_volume(p: &RationalPolytope) -> BigRational {
    if p.vertices.is_empty() {
        return BigRational::zero();
    }
    // Clear denominators, measure the scaled lattice polytope, rescale.
    let lcm = p
        .vertices
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<Vec<i64>> = p
        .vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|c| {
                    (c * BigRational::from_integer(lcm.clone()))
                        .to_integer()
                        .to_i64()
                        .expect("scaled coordinate overflow")
                })
                .collect()
        })
        .collect();
    let nv = normalized_volume(&scaled, p.dim);
    let denom = factorial(p.dim) * num_traits::pow(lcm, p.dim);
    BigRational::new(nv, denom)
}

/// Mixed volume normalized so that it counts generic torus solutions.
///
/// Inclusion-exclusion over subsets `S` of the supports:
/// `MV = sum_S (-1)^(n-|S|) Vol_n(sum_{i in S} conv A_i)`, with Minkowski
/// sums built incrementally from vertex sets.
pub fn mixed_volume(system: &SupportSystem) -> u64 {
    let n = system.n();
    if n == 0 {
        return 1;
    }
    if mv_zero_witness(system).is_some() {
        return 0;
    }
    let verts: Vec<Vec<Vec<i64>>> = system
        .supports()
        .iter()
        .map(|s| hull_vertices(s.points()))
        .collect();
    let mut sums: Vec<Vec<Vec<i64>>> = vec![Vec::new(); 1 << n];
    let mut total = BigInt::zero();
    for mask in 1usize..(1 << n) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask ^ (1 << top);
        let candidates: Vec<Vec<i64>> = if rest == 0 {
            verts[top].clone()
        } else {
            let mut c = Vec::with_capacity(sums[rest].len() * verts[top].len());
            for a in &sums[rest] {
                for b in &verts[top] {
                    c.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
                }
            }
            c
        };
        let (vol, vertices) = volume_and_vertices(&candidates, n);
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += &vol;
        } else {
            total -= &vol;
        }
        sums[mask] = vertices;
    }
    let (q, r) = total.div_rem(&factorial(n));
    assert!(r.is_zero(), "mixed volume is not an integer: {total}/{n}!");
    q.to_u64().expect("mixed volume exceeds u64")
}

/// Smallest subset `I` (by size, then lexicographic) with `|I| > rank Z A_I`,
/// which exists exactly when the mixed volume vanishes.
pub fn mv_zero_witness(system: &SupportSystem) -> Option<Vec<usize>> {
    let n = system.n();
    subsets_by_size(n, 1..=n).find(|subset| span_rank(system, subset) < subset.len())
}

pub fn mv_is_zero(system: &SupportSystem) -> bool {
    mv_zero_witness(system).is_some()
}
