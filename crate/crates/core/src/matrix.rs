//! Dense real matrices stored row-major, plus the plain-text matrix format.
//!
//! The text format is a header line `rows cols` followed by `rows` lines of
//! `cols` whitespace-separated decimals. Entries are written with 17
//! significant digits so that parsing the output reproduces every bit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries. Rejects empty shapes, a wrong
    /// entry count, and NaN/Inf entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        if columns.iter().any(|c| c.as_ref().len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let cols = columns.len();
        let mut data = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.as_ref().iter().enumerate() {
                data[i * cols + j] = x;
            }
        }
        Self::new(rows, cols, data)
    }

    pub(crate) fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// # Panics
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// # Panics
    /// Panics if `n == 0`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in values.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self::new(n, n, data)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub(crate) fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            let orow = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[p * m..(p + 1) * m];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Matrix {
            rows: n,
            cols: m,
            data: out,
        })
    }

    /// Entrywise sum; shapes must agree.
    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Entrywise difference; shapes must agree.
    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        // scaled to avoid overflow for large entries
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        max * self
            .data
            .iter()
            .map(|x| (x / max).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Relative Frobenius equality: `‖x−y‖ ≤ rtol·(1 + max(‖x‖, ‖y‖))`.
    /// Matrices of different shapes are never equal.
    pub fn approx_eq(&self, other: &Matrix, rtol: f64) -> bool {
        match self.try_sub(other) {
            Ok(diff) => {
                let scale = 1.0 + self.frobenius_norm().max(other.frobenius_norm());
                diff.frobenius_norm() <= rtol * scale
            }
            Err(_) => false,
        }
    }

    /// Frobenius distance to `other`; panics on shape mismatch.
    pub fn distance(&self, other: &Matrix) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Copies out the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of range"
        );
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub(crate) fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Assembles `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Result<Matrix> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(Error::DimensionMismatch(
                "2x2 block layout does not conform".into(),
            ));
        }
        let mut out = Matrix::zeros(tl.rows + bl.rows, tl.cols + tr.cols);
        out.set_block(0, 0, tl);
        out.set_block(0, tl.cols, tr);
        out.set_block(tl.rows, 0, bl);
        out.set_block(tl.rows, tl.cols, br);
        Ok(out)
    }

    /// Computes `self^(2^k)` by repeated squaring.
    pub fn pow2k(&self, k: u32) -> Result<Matrix> {
        self.ensure_square()?;
        let mut m = self.clone();
        for _ in 0..k {
            m = &m * &m;
        }
        Ok(m)
    }

    /// Serializes to the plain-text matrix format.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| format!("{x:.16e}")).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the plain-text matrix format. Blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::Parse(format!(
                "expected header `rows cols`, got `{header}`"
            )));
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad dimension `{s}`: {e}")))
        };
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if rows == 0 || cols == 0 {
            return Err(Error::Parse(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
            let before = data.len();
            for tok in line.split_whitespace() {
                let x: f64 = tok.parse().map_err(|e| {
                    Error::Parse(format!("bad entry `{tok}` in row {}: {e}", i + 1))
                })?;
                data.push(x);
            }
            if data.len() - before != cols {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    data.len() - before
                )));
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!(
                "trailing content after matrix: `{extra}`"
            )));
        }
        Matrix::new(rows, cols, data)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; the `try_*`/`matmul` methods return errors.

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(-1.0)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(Matrix::new(0, 2, vec![]).is_err());
        assert!(Matrix::new(2, 2, vec![1.0; 3]).is_err());
        assert_eq!(
            Matrix::new(2, 2, vec![1.0, 2.0, f64::NAN, 0.0]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
        assert!(Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn transpose_and_identity_product() {
        let x = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(
            x.transpose(),
            Matrix::from_rows(&[[1.0, 3.0], [2.0, 4.0]]).unwrap()
        );
        assert_eq!(&Matrix::identity(2) * &x, x);
    }

    #[test]
    fn quarter_turn_squares_to_minus_identity() {
        let j = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(&j * &j, Matrix::identity(2).scale(-1.0));
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn text_format_layout() {
        let x = Matrix::from_rows(&[[1.0, -0.5]]).unwrap();
        assert_eq!(
            x.to_text(),
            "1 2\n1.0000000000000000e0 -5.0000000000000000e-1\n"
        );
        let y = Matrix::from_text("2 2\n1 2\n\n3 4.5\n").unwrap();
        assert_eq!(y, Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.5]]).unwrap());
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(Matrix::from_text(""), Err(Error::Parse(_))));
        assert!(matches!(
            Matrix::from_text("2 2\n1 2\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Matrix::from_text("1 2\n1 2 3\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Matrix::from_text("1 1\nabc\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Matrix::from_text("1 1\n1\n2\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Matrix::from_text("1 1\nNaN\n"),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn frobenius_and_approx_eq() {
        let x = Matrix::from_rows(&[[3.0, 0.0], [0.0, 4.0]]).unwrap();
        assert_eq!(x.frobenius_norm(), 5.0);
        let y = &x + &Matrix::identity(2).scale(1e-12);
        assert!(x.approx_eq(&y, 1e-10));
        assert!(!x.approx_eq(&y, 1e-14));
        assert!(!x.approx_eq(&Matrix::zeros(2, 3), 1.0));
    }
}
