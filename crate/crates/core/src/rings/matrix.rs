//! Dense row-major matrices. Arithmetic is parameterised by a [`RingOps`]
//! so the same container serves the PID kernels and the tagged rings.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::rings::pid::RingOps;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Mat { rows, cols, data: vec![value; rows * cols] }
    }

    /// Builds a matrix from row vectors. `cols` is needed to describe `k × 0`
    /// and `0 × k` shapes unambiguously.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Mat { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn try_map<U: Clone>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<Mat<U>> {
        let data = self.data.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Ring-dependent matrix arithmetic.
pub trait MatOps<R: RingOps> {
    fn zeros(ring: &R, rows: usize, cols: usize) -> Self;
    fn identity(ring: &R, n: usize) -> Self;
    fn mul(&self, ring: &R, other: &Self) -> Result<Self>
    where
        Self: Sized;
    fn add(&self, ring: &R, other: &Self) -> Result<Self>
    where
        Self: Sized;
    fn scale(&self, ring: &R, c: &R::E) -> Self;
    fn is_zero(&self, ring: &R) -> bool;
    fn kron(&self, ring: &R, other: &Self) -> Self;
    fn apply(&self, ring: &R, v: &[R::E]) -> Vec<R::E>;
    /// row_target += c * row_source
    fn add_row_multiple(&mut self, ring: &R, target: usize, source: usize, c: &R::E);
    /// col_target += c * col_source
    fn add_col_multiple(&mut self, ring: &R, target: usize, source: usize, c: &R::E);
    fn scale_row(&mut self, ring: &R, i: usize, c: &R::E);
}

impl<R: RingOps> MatOps<R> for Mat<R::E> {
    fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Mat::filled(rows, cols, ring.zero())
    }

    fn identity(ring: &R, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    fn mul(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::filled(self.rows, other.cols, ring.zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if ring.is_zero(b) {
                        continue;
                    }
                    let t = ring.mul(a, b);
                    out[(i, j)] = ring.add(&out[(i, j)], &t);
                }
            }
        }
        Ok(out)
    }

    fn add(&self, ring: &R, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "sum of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols, |i, j| ring.add(&self[(i, j)], &other[(i, j)])))
    }

    fn scale(&self, ring: &R, c: &R::E) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    fn is_zero(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    fn kron(&self, ring: &R, other: &Self) -> Self {
        let (r2, c2) = other.shape();
        Mat::from_fn(self.rows * r2, self.cols * c2, |i, j| ring.mul(&self[(i / r2, j / c2)], &other[(i % r2, j % c2)]))
    }

    fn apply(&self, ring: &R, v: &[R::E]) -> Vec<R::E> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b))))
            .collect()
    }

    fn add_row_multiple(&mut self, ring: &R, target: usize, source: usize, c: &R::E) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let t = ring.mul(c, &self[(source, j)]);
            self[(target, j)] = ring.add(&self[(target, j)], &t);
        }
    }

    fn add_col_multiple(&mut self, ring: &R, target: usize, source: usize, c: &R::E) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let t = ring.mul(c, &self[(i, source)]);
            self[(i, target)] = ring.add(&self[(i, target)], &t);
        }
    }

    fn scale_row(&mut self, ring: &R, i: usize, c: &R::E) {
        for j in 0..self.cols {
            self[(i, j)] = ring.mul(c, &self[(i, j)]);
        }
    }
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block<T: Clone>(a: &Mat<T>, b: &Mat<T>, c: &Mat<T>, d: &Mat<T>) -> Result<Mat<T>> {
    if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
        return Err(Error::DimensionMismatch("inconsistent block shapes".into()));
    }
    let rows = a.rows + c.rows;
    let cols = a.cols + b.cols;
    Ok(Mat::from_fn(rows, cols, |i, j| match (i < a.rows, j < a.cols) {
        (true, true) => a[(i, j)].clone(),
        (true, false) => b[(i, j - a.cols)].clone(),
        (false, true) => c[(i - a.rows, j)].clone(),
        (false, false) => d[(i - a.rows, j - a.cols)].clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::pid::Integers;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Mat<BigInt> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols).unwrap()
    }

    #[test]
    fn product_and_kron() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&Integers, &b).unwrap(), m(&[&[2, 1], &[4, 3]]));
        let k = a.kron(&Integers, &m(&[&[1, -1]]));
        assert_eq!(k, m(&[&[1, -1, 2, -2], &[3, -3, 4, -4]]));
    }

    #[test]
    fn empty_shapes_multiply() {
        let a: Mat<BigInt> = Mat::filled(2, 0, BigInt::from(0));
        let b: Mat<BigInt> = Mat::filled(0, 3, BigInt::from(0));
        let p = a.mul(&Integers, &b).unwrap();
        assert_eq!(p.shape(), (2, 3));
        assert!(MatOps::<Integers>::is_zero(&p, &Integers));
    }
}
