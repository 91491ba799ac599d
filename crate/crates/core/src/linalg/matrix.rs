use std::fmt;

use num_traits::{Signed, Zero};

use super::rational::{format_rational, to_f64, Rational};
use crate::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row {bad} has length {}, expected {cols}", rows[bad].len())));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from integer rows.
    ///
    /// Panics if the rows are ragged.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.as_ref().iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        Matrix::from_rows(rows).expect("ragged integer rows")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::from_integer(1.into());
        }
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

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.row_iter().map(<[Rational]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.row_iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn scale(&self, k: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * k).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `m · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let entries = self.row_iter().map(|r| dot(r, v.entries())).collect();
        Ok(Vector::column(entries))
    }

    /// `v · m` for a row vector `v`.
    pub fn vec_mul(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.entries().iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                if !x.is_zero() {
                    *o += vi * x;
                }
            }
        }
        Ok(Vector::row(out))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Exact product `a · b`.
pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut entries = vec![Rational::zero(); a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut entries[i * b.cols..(i + 1) * b.cols];
        for (k, x) in a.row(i).iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(b.row(k)) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
    }
    Ok(Matrix { rows: a.rows, cols: b.cols, entries })
}

/// Sum of absolute values of all entries; for non-negative matrices this is
/// simply the sum of the entries.
pub fn one_norm(m: &Matrix) -> Rational {
    m.entries.iter().map(Signed::abs).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Row,
    Column,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    entries: Vec<Rational>,
    orientation: Orientation,
}

impl Vector {
    pub fn new(entries: Vec<Rational>, orientation: Orientation) -> Self {
        Vector { entries, orientation }
    }

    pub fn column(entries: Vec<Rational>) -> Self {
        Vector::new(entries, Orientation::Column)
    }

    pub fn row(entries: Vec<Rational>) -> Self {
        Vector::new(entries, Orientation::Row)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Vector::column(values.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn ones(n: usize) -> Self {
        Vector::from_ints(&vec![1; n])
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    /// All entries `>= 0` and at least one `> 0`.
    pub fn is_semipositive(&self) -> bool {
        self.is_nonnegative() && self.entries.iter().any(Signed::is_positive)
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn norm(&self) -> Rational {
        self.entries.iter().map(Signed::abs).sum()
    }

    pub fn dot(&self, other: &Vector) -> Result<Rational> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("dot product of lengths {} and {}", self.len(), other.len())));
        }
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(to_f64).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}
