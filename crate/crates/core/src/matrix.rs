//! Dense exact matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::GaussRat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn diagonal(entries: &[GaussRat]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussRat::from_int(x)).collect())
                .collect(),
        )
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

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussRat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<GaussRat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &GaussRat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<GaussRat> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(GaussRat::zero());
        }
        let c = self.get(0, 0).clone();
        (*self == Matrix::identity(self.rows).scale(&c)).then_some(c)
    }

    pub fn apply(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussRat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row-reduces in place and returns the pivot columns together with the
    /// determinant sign/scale factor accumulated by the elimination.
    fn row_reduce(&mut self) -> (Vec<usize>, GaussRat) {
        let mut pivots = Vec::new();
        let mut factor = GaussRat::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                factor = -factor;
            }
            let pivot = self.get(r, c).clone();
            let inv = pivot.inv().expect("pivot is nonzero");
            factor = &factor * &pivot;
            for j in 0..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in 0..self.cols {
                    let v = self.get(i, j) - &(&f * self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, factor)
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().0.len()
    }

    pub fn det(&self) -> GaussRat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let (pivots, factor) = self.clone().row_reduce();
        if pivots.len() < self.rows {
            GaussRat::zero()
        } else {
            factor
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, GaussRat::one());
        }
        let (pivots, _) = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Coefficients `q_0..q_n` of `det(T*I - A) = Σ q_k T^k`, computed with
    /// the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<GaussRat> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![GaussRat::zero(); n + 1];
        coeffs[n] = GaussRat::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            m = &(self * &m) + &Matrix::identity(n).scale(&coeffs[n - k + 1]);
            let t = (self * &m).trace();
            coeffs[n - k] = -(t * GaussRat::ratio(1, k as i64));
        }
        coeffs
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = Matrix::from_int_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), GaussRat::from_int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        let sing = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.det().is_zero());
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = Matrix::diagonal(&[0.into(), 2.into(), (-2).into()]);
        // T (T - 2) (T + 2) = T^3 - 4T
        let expected: Vec<GaussRat> = vec![0.into(), (-4).into(), 0.into(), 1.into()];
        assert_eq!(m.char_poly(), expected);
    }

    #[test]
    fn char_poly_matches_determinant_at_sample_points() {
        let m = Matrix::from_rows(vec![
            vec![1.into(), GaussRat::i(), 0.into()],
            vec![2.into(), 0.into(), 3.into()],
            vec![GaussRat::ratio(1, 2), 1.into(), (-1).into()],
        ]);
        let cp = m.char_poly();
        for t in -3..4 {
            let t = GaussRat::from_int(t);
            let shifted = &Matrix::identity(3).scale(&t) - &m;
            let mut val = GaussRat::zero();
            for c in cp.iter().rev() {
                val = &(&val * &t) + c;
            }
            assert_eq!(val, shifted.det());
        }
    }
}
