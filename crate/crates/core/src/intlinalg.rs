//! Exact integer matrix algebra: Smith normal form, unimodular inverses and
//! lattice indices.
//!
//! Matrices hold arbitrary precision integers so no intermediate step of the
//! elimination can overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl LatticeMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LatticeMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.as_ref().len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::Dimension(
                "matrix dimensions must be positive".into(),
            ));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Ok(LatticeMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[i64]>>(columns: &[C]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map(|col| col.as_ref().len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::Dimension(
                "matrix dimensions must be positive".into(),
            ));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in columns.iter().enumerate() {
            let col = col.as_ref();
            if col.len() != r {
                return Err(Error::Dimension("ragged columns".into()));
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * c + j] = BigInt::from(v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Column `j` as machine integers, failing if an entry does not fit.
    pub fn column_i64(&self, j: usize) -> Result<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.get(i, j).to_i64().ok_or(Error::Overflow))
            .collect()
    }

    pub fn to_rows_i64(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_i64().ok_or(Error::Overflow))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(end - start, self.cols);
        for i in start..end {
            for j in 0..self.cols {
                m.set(i - start, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                m.set(i, j - start, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product with a machine-integer vector.
    pub fn apply_i64(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * BigInt::from(v[j]))
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * prev)
    }

    // Elementary operations used by the Smith form elimination.

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A factorization `A = P D Q` with unimodular `P`, `Q` and `D` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub p: LatticeMatrix,
    /// Exact inverse of `p`, accumulated alongside it.
    pub p_inv: LatticeMatrix,
    pub d: LatticeMatrix,
    pub q: LatticeMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_k`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Tracks `A = P * cur * Q` while `cur` is reduced to diagonal form.
struct Elimination {
    cur: LatticeMatrix,
    p: LatticeMatrix,
    p_inv: LatticeMatrix,
    q: LatticeMatrix,
}

impl Elimination {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.cur.swap_rows(a, b);
        self.p_inv.swap_rows(a, b);
        self.p.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.cur.swap_cols(a, b);
        self.q.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.cur.add_row(dst, src, c);
        self.p_inv.add_row(dst, src, c);
        self.p.add_col(src, dst, &-c);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.cur.add_col(dst, src, c);
        self.q.add_row(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.cur.negate_row(i);
        self.p_inv.negate_row(i);
        self.p.negate_col(i);
    }

    fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.cur.get(i, j)
    }

    /// Smallest nonzero entry in the trailing submatrix starting at `(t, t)`.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.cur.rows {
            for j in t..self.cur.cols {
                let v = self.entry(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.entry(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Smallest nonzero entry of row `t` and column `t` (from index `t` on).
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs: Option<BigInt> = None;
        let candidates = (t..self.cur.rows)
            .map(|i| (i, t))
            .chain((t + 1..self.cur.cols).map(|j| (t, j)));
        for (i, j) in candidates {
            let v = self.entry(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best_abs.as_ref().is_none_or(|b| &a < b) {
                best = (i, j);
                best_abs = Some(a);
            }
        }
        best
    }

    fn reduce(&mut self) -> Vec<BigInt> {
        let (rows, cols) = (self.cur.rows, self.cur.cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if self.entry(i, t).is_zero() {
                        continue;
                    }
                    let q = self.entry(i, t).div_floor(self.entry(t, t));
                    self.add_row(i, t, &-q);
                    if !self.entry(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    if self.entry(t, j).is_zero() {
                        continue;
                    }
                    let q = self.entry(t, j).div_floor(self.entry(t, t));
                    self.add_col(j, t, &-q);
                    if !self.entry(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (i, j) = self.smallest_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                // Row and column are clear; enforce divisibility of the block.
                let pivot = self.entry(t, t).clone();
                let offender = (t + 1..rows)
                    .find(|&i| (t + 1..cols).any(|j| !self.entry(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.entry(t, t).is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        (0..t).map(|i| self.entry(i, i).clone()).collect()
    }
}

/// Smith normal form `A = P D Q` by pivoting on the smallest entry.
pub fn smith_normal_form(a: &LatticeMatrix) -> Result<SmithForm> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let mut elim = Elimination {
        cur: a.clone(),
        p: LatticeMatrix::identity(a.rows),
        p_inv: LatticeMatrix::identity(a.rows),
        q: LatticeMatrix::identity(a.cols),
    };
    let invariant_factors = elim.reduce();
    Ok(SmithForm {
        p: elim.p,
        p_inv: elim.p_inv,
        d: elim.cur,
        q: elim.q,
        invariant_factors,
    })
}

/// Exact inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &LatticeMatrix) -> Result<LatticeMatrix> {
    if u.rows != u.cols {
        return Err(Error::Dimension("inverse of non-square matrix".into()));
    }
    let det = u.det()?;
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular {
            det: det.to_string(),
        });
    }
    let n = u.rows;
    // Gauss-Jordan over the rationals; the result is integral since |det| = 1.
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(u.get(i, j).clone())
                    } else if j - n == i {
                        BigRational::one()
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
            .expect("nonsingular matrix has a pivot");
        aug.swap(k, piv);
        let inv = aug[k][k].recip();
        for v in aug[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i == k || aug[i][k].is_zero() {
                continue;
            }
            let f = aug[i][k].clone();
            let pivot = aug[k].clone();
            for (v, p) in aug[i].iter_mut().zip(&pivot) {
                *v -= p * &f;
            }
        }
    }
    let mut out = LatticeMatrix::zeros(n, n);
    for (i, row) in aug.iter().enumerate() {
        for j in 0..n {
            let v = &row[n + j];
            debug_assert!(v.is_integer());
            out.set(i, j, v.to_integer());
        }
    }
    Ok(out)
}

/// Index of the column lattice in `Z^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

pub fn lattice_index(a: &LatticeMatrix) -> LatticeIndex {
    match smith_normal_form(a) {
        Ok(snf) if snf.rank() == a.rows => {
            LatticeIndex::Finite(snf.invariant_factors.iter().product())
        }
        _ => LatticeIndex::Infinite,
    }
}

/// Rank of the column lattice (zero for the zero matrix).
pub fn rank(a: &LatticeMatrix) -> usize {
    smith_normal_form(a).map(|s| s.rank()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_form(a: &LatticeMatrix, s: &SmithForm) {
        assert_eq!(&s.p.mul(&s.d).mul(&s.q), a);
        assert!(s.p.det().unwrap().abs().is_one());
        assert!(s.q.det().unwrap().abs().is_one());
        assert_eq!(s.p.mul(&s.p_inv), LatticeMatrix::identity(a.rows()));
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn identity_form() {
        let a = LatticeMatrix::identity(2);
        let s = smith_normal_form(&a).unwrap();
        assert_eq!(s.p, a);
        assert_eq!(s.q, a);
        assert_eq!(s.d, a);
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn small_example_factors() {
        let a = LatticeMatrix::from_rows(&[[3, 0], [-1, 4]]).unwrap();
        let s = smith_normal_form(&a).unwrap();
        check_form(&a, &s);
        assert_eq!(s.invariant_factors, vec![BigInt::from(1), BigInt::from(12)]);
    }

    #[test]
    fn zero_matrix_rejected() {
        let a = LatticeMatrix::zeros(2, 3);
        assert!(matches!(smith_normal_form(&a), Err(Error::ZeroMatrix)));
        assert_eq!(lattice_index(&a), LatticeIndex::Infinite);
    }

    #[test]
    fn inverse_of_shear() {
        let u = LatticeMatrix::from_rows(&[[1, 1], [0, 1]]).unwrap();
        let inv = unimodular_inverse(&u).unwrap();
        assert_eq!(inv, LatticeMatrix::from_rows(&[[1, -1], [0, 1]]).unwrap());
        let i = LatticeMatrix::identity(3);
        assert_eq!(unimodular_inverse(&i).unwrap(), i);
    }

    #[test]
    fn inverse_rejects_bad_input() {
        let u = LatticeMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap();
        assert!(matches!(
            unimodular_inverse(&u),
            Err(Error::NotUnimodular { .. })
        ));
        let r = LatticeMatrix::from_rows(&[[1, 0, 0], [0, 1, 0]]).unwrap();
        assert!(matches!(unimodular_inverse(&r), Err(Error::Dimension(_))));
    }

    #[test]
    fn index_cases() {
        let e = LatticeMatrix::identity(2);
        assert_eq!(lattice_index(&e), LatticeIndex::Finite(BigInt::from(1)));
        let col = LatticeMatrix::from_columns(&[[1, 2]]).unwrap();
        assert_eq!(lattice_index(&col), LatticeIndex::Infinite);
    }

    #[test]
    fn wide_and_tall_matrices() {
        let a = LatticeMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
        let s = smith_normal_form(&a).unwrap();
        check_form(&a, &s);
        assert_eq!(
            s.invariant_factors,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let t = a.row_block(0, 2).transpose();
        let s = smith_normal_form(&t).unwrap();
        check_form(&t, &s);
    }
}
