//! Dense matrices over [`Scalar`] with unit-pivot Gauss–Jordan elimination.
//!
//! Pivots are always units. Over exact fields this is ordinary elimination;
//! over dual (local) rings a pivot must have a unit real part, so ranks are
//! the ranks of the real parts and inverses are exact in `R[ε]`. Floats use
//! partial pivoting by magnitude with the default unit tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{RingDescriptor, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of a reduction to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    /// `(row, column)` of each pivot, in row order.
    pub pivots: Vec<(usize, usize)>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix interpreted in `ring`.
    pub fn from_i64(ring: &RingDescriptor, rows: &[&[i64]]) -> Matrix {
        let c = rows.first().map(|r| r.len()).unwrap_or(0);
        Matrix::from_fn(rows.len(), c, |i, j| ring.from_i64(rows[i][j]))
    }

    pub fn zeros(ring: &RingDescriptor, rows: usize, cols: usize) -> Matrix {
        let z = ring.zero();
        Matrix { rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(ring: &RingDescriptor, n: usize) -> Matrix {
        let (z, o) = (ring.zero(), ring.one());
        Matrix::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    /// Scalar multiple of the identity.
    pub fn scalar(s: &Scalar, n: usize) -> Matrix {
        let z = s.zero_like();
        Matrix::from_fn(n, n, |i, j| if i == j { s.clone() } else { z.clone() })
    }

    /// The matrix unit `E_{ij}` of size `n`.
    pub fn unit(ring: &RingDescriptor, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        m.set(i, j, ring.one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        self.data[i * self.cols + j] = s;
    }

    /// Common ring of the entries (the deepest dual layer present).
    pub fn ring(&self) -> RingDescriptor {
        let mut ring = self.data.first().map(Scalar::ring).unwrap_or(RingDescriptor::Rational);
        for s in &self.data[1.min(self.data.len())..] {
            if s.depth() > ring.depth() {
                ring = s.ring();
            }
        }
        ring
    }

    pub fn zero_scalar(&self) -> Scalar {
        self.ring().zero()
    }

    pub fn one_scalar(&self) -> Scalar {
        self.ring().one()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn embed(&self, ring: &RingDescriptor) -> Result<Matrix> {
        self.try_map(|s| s.embed(ring))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        self.map(|x| x * s)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack row mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Shape("vstack column mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        }))
    }

    /// Assembles the block matrix `(a b; c d)` from four `n×n` blocks.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// Row-major flattening into a column vector.
    pub fn flatten(&self) -> Matrix {
        Matrix { rows: self.rows * self.cols, cols: 1, data: self.data.clone() }
    }

    /// Inverse of [`Matrix::flatten`].
    pub fn unflatten(&self, rows: usize, cols: usize) -> Result<Matrix> {
        Matrix::new(rows, cols, self.data.clone())
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.block(0, j, self.rows, 1)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Entrywise `a + bε` over the common ring.
    pub fn dual_lift(re: &Matrix, eps: &Matrix) -> Result<Matrix> {
        if re.rows != eps.rows || re.cols != eps.cols {
            return Err(Error::Shape("dual_lift shape mismatch".into()));
        }
        let ring = re.ring().join(&eps.ring())?;
        let data = re
            .data
            .iter()
            .zip(&eps.data)
            .map(|(a, b)| Scalar::dual_lift(&a.embed(&ring)?, &b.embed(&ring)?))
            .collect::<Result<_>>()?;
        Ok(Matrix { rows: re.rows, cols: re.cols, data })
    }

    /// Splits the outermost dual layer of every entry.
    pub fn dual_parts(&self) -> Result<(Matrix, Matrix)> {
        let ring = self.ring();
        if !ring.is_dual() {
            return Err(Error::NotDual);
        }
        let mut re = Vec::with_capacity(self.data.len());
        let mut eps = Vec::with_capacity(self.data.len());
        for s in &self.data {
            let (a, b) = s.embed(&ring)?.dual_parts()?;
            re.push(a);
            eps.push(b);
        }
        Ok((
            Matrix { rows: self.rows, cols: self.cols, data: re },
            Matrix { rows: self.rows, cols: self.cols, data: eps },
        ))
    }

    /// Largest entrywise distance; exact rings give `0` or `inf`.
    pub fn distance(&self, other: &Matrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Exact equality on exact rings, `distance <= tol` on floats.
    pub fn agrees(&self, other: &Matrix, tol: f64) -> bool {
        if self.ring().is_exact() && other.ring().is_exact() {
            self == other
        } else {
            self.distance(other) <= tol
        }
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.zero_scalar();
        for i in 0..self.rows.min(self.cols) {
            acc = acc + self.get(i, i);
        }
        acc
    }

    /// Reduced row echelon form with unit pivots.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = choose_pivot(&m, row, col) else { continue };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).inv().expect("pivot is a unit");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(row, j));
                    m.set(i, j, v);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.ring(), n))?;
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots.iter().any(|&(_, c)| c >= n) {
            return Err(Error::NotInvertible);
        }
        Ok(ech.reduced.block(0, n, n, n))
    }

    /// Solves `self · z = b` for square invertible `self`.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        if !self.is_square() || b.rows != self.rows {
            return Err(Error::Shape("solve: incompatible shapes".into()));
        }
        let n = self.rows;
        let ech = self.hstack(b)?.echelon();
        if ech.pivots.len() < n || ech.pivots.iter().take(n).any(|&(_, c)| c >= n) {
            return Err(Error::SingularOperator);
        }
        Ok(ech.reduced.block(0, n, n, b.cols))
    }

    /// Indices of the pivot columns, i.e. a maximal independent set of columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon().pivots.into_iter().map(|(_, c)| c).collect()
    }

    /// A maximal independent set of columns of `self`.
    pub fn column_basis(&self) -> Matrix {
        self.select_columns(&self.pivot_columns())
    }

    /// Indices of a maximal independent set of rows.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.transpose().pivot_columns()
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(&self.ring(), self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn real_magnitude(s: &Scalar) -> f64 {
    match s {
        Scalar::Dual(d) => real_magnitude(&d.re),
        other => other.magnitude(),
    }
}

fn choose_pivot(m: &Matrix, row: usize, col: usize) -> Option<usize> {
    let exact = m.ring().is_exact();
    let mut best: Option<(usize, f64)> = None;
    for i in row..m.rows {
        let s = m.get(i, col);
        if !s.is_unit() {
            continue;
        }
        if exact {
            return Some(i);
        }
        let mag = real_magnitude(s);
        if best.map_or(true, |(_, b)| mag > b) {
            best = Some((i, mag));
        }
    }
    best.map(|(i, _)| i)
}

fn zip_with(a: &Matrix, b: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "shape mismatch: {}x{} vs {}x{}",
        a.rows,
        a.cols,
        b.rows,
        b.cols
    );
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| f(x, y)).collect(),
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let zero = if self.data.is_empty() { rhs.zero_scalar() } else { self.zero_scalar() };
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + &(a * rhs.get(k, j));
            }
            acc
        })
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|x| -x)
    }
}

impl Add for Matrix {
    type Output = Matrix;
    fn add(self, rhs: Matrix) -> Matrix {
        &self + &rhs
    }
}

impl Sub for Matrix {
    type Output = Matrix;
    fn sub(self, rhs: Matrix) -> Matrix {
        &self - &rhs
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RingDescriptor {
        RingDescriptor::Rational
    }

    #[test]
    fn inverse_of_unipotent() {
        let m = Matrix::from_i64(&q(), &[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64(&q(), &[&[1, -1], &[0, 1]]));
        assert_eq!(&m * &inv, Matrix::identity(&q(), 2));
    }

    #[test]
    fn rank_one_is_singular() {
        let m = Matrix::from_i64(&q(), &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.inverse(), Err(Error::NotInvertible));
        let b = Matrix::from_i64(&q(), &[&[1], &[0]]);
        assert_eq!(m.solve(&b), Err(Error::SingularOperator));
    }

    #[test]
    fn dual_matrix_inverse_first_order() {
        let m0 = Matrix::from_i64(&q(), &[&[2, 1], &[1, 1]]);
        let m1 = Matrix::from_i64(&q(), &[&[0, 3], &[-1, 2]]);
        let m = Matrix::dual_lift(&m0, &m1).unwrap();
        let (re, eps) = m.inverse().unwrap().dual_parts().unwrap();
        let i0 = m0.inverse().unwrap();
        assert_eq!(re, i0);
        assert_eq!(eps, -&(&(&i0 * &m1) * &i0));
    }

    #[test]
    fn nilpotent_pivot_is_rejected() {
        // ε alone is not a unit, so [[ε]] has rank 0 over the dual ring.
        let z = Matrix::zeros(&q(), 1, 1);
        let o = Matrix::identity(&q(), 1);
        let eps = Matrix::dual_lift(&z, &o).unwrap();
        assert_eq!(eps.rank(), 0);
    }

    #[test]
    fn float_pivoting_solves_small_system() {
        let r = RingDescriptor::Float64;
        let m = Matrix::from_fn(2, 2, |i, j| Scalar::Float([[1e-3, 1.0], [1.0, 1.0]][i][j]));
        let b = Matrix::from_fn(2, 1, |i, _| r.from_i64([1, 2][i]));
        let z = m.solve(&b).unwrap();
        assert!((&m * &z).distance(&b) < 1e-12);
    }

    #[test]
    fn pivot_rows_and_columns() {
        let m = Matrix::from_i64(&q(), &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(m.pivot_columns(), vec![0, 2]);
        assert_eq!(m.pivot_rows(), vec![0, 2]);
        assert_eq!(m.column_basis().cols(), 2);
    }
}
