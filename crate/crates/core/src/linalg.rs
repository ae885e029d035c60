//! Dense exact vectors and matrices over ℚ(√2, √3).
//!
//! Elimination always takes the first nonzero entry of a column as pivot;
//! there is no rounding, so no pivoting strategy is needed.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::FieldElem;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<FieldElem>);

impl Vector {
    pub fn new(coords: Vec<FieldElem>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![FieldElem::zero(); dim])
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = FieldElem::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| FieldElem::from_int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElem> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FieldElem> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElem::is_zero)
    }

    pub fn scale(&self, k: &FieldElem) -> Vector {
        if k.is_zero() {
            return Vector::zeros(self.dim());
        }
        Vector(self.0.iter().map(|x| x * k).collect())
    }

    /// Euclidean pairing `Σ aᵢbᵢ` (a covector applied to a vector).
    pub fn dot(&self, other: &Vector) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc.add_mul(a, b);
            }
        }
        acc
    }

    /// `self += k·other`
    pub fn axpy(&mut self, k: &FieldElem, other: &Vector) {
        if k.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                a.add_mul(k, b);
            }
        }
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl From<Vec<FieldElem>> for Vector {
    fn from(v: Vec<FieldElem>) -> Self {
        Vector(v)
    }
}

impl Index<usize> for Vector {
    type Output = FieldElem;
    fn index(&self, i: usize) -> &FieldElem {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut FieldElem {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &'a Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &'a Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElem::one();
        }
        m
    }

    pub fn diagonal(entries: &[FieldElem]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            c.check_dim(rows)?;
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| FieldElem::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
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

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &FieldElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        v.check_dim(self.cols)?;
        Ok(self.apply(v))
    }

    /// `M·v` without a dimension check.
    pub(crate) fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() {
                    out[i].add_mul(a, x);
                }
            }
        }
        out
    }

    /// `xᵀ M y`
    pub(crate) fn bilinear(&self, x: &Vector, y: &Vector) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row_acc = FieldElem::zero();
            for (j, yj) in y.iter().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() && !yj.is_zero() {
                    row_acc.add_mul(a, yj);
                }
            }
            if !row_acc.is_zero() {
                acc.add_mul(xi, &row_acc);
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(r, j)] * &f;
                    if !v.is_zero() {
                        self[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = FieldElem::one();
        }
        let pivots = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Solves `M z = b`; `None` when the system is inconsistent. Free
    /// variables, if any, are set to zero.
    pub fn solve(&self, b: &Vector) -> Result<Option<Vector>> {
        b.check_dim(self.rows)?;
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.row_reduce();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut z = Vector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            z[c] = aug[(r, self.cols)].clone();
        }
        Ok(Some(z))
    }

    pub fn determinant(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = FieldElem::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(FieldElem::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<FieldElem>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
