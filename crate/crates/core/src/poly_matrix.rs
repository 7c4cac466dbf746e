//! Dense matrices over `Z[β]`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::ScalarPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ScalarPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![ScalarPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ScalarPoly::constant(1));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ScalarPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        PolyMatrix { rows, cols, data }
    }

    /// Builds a matrix from integer coefficient lists, row-major.
    pub fn from_rows(rows: &[Vec<ScalarPoly>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ScalarPoly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ScalarPoly) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &ScalarPoly) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[ScalarPoly] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<ScalarPoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &ScalarPoly) -> Self {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Largest entry degree, `None` if the matrix is zero.
    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(ScalarPoly::degree).max()
    }

    pub fn eval_f64(&self, beta: f64) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).eval_f64(beta))
    }

    pub fn eval_complex(&self, beta: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).eval_complex(beta))
    }

    pub fn eval_rational(&self, beta: &BigRational) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).eval_rational(beta)).collect()).collect()
    }

    pub fn eval_mod(&self, beta: u64, p: u64) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).eval_mod(beta, p)).collect()).collect()
    }

    pub fn checked_mul(&self, rhs: &PolyMatrix) -> Option<PolyMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Some(out)
    }

    fn zip_with(&self, rhs: &PolyMatrix, f: impl Fn(&ScalarPoly, &ScalarPoly) -> ScalarPoly) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Entries as coefficient-string arrays, row-major.
    pub fn to_coeff_strings(&self) -> Vec<Vec<Vec<String>>> {
        (0..self.rows).map(|r| self.row(r).iter().map(ScalarPoly::to_coeff_strings).collect()).collect()
    }
}

impl<'a> Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_mul(rhs).expect("shape mismatch in matrix product")
    }
}

impl<'a> Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            &rows.iter().map(|r| r.iter().map(|&x| ScalarPoly::constant(x)).collect()).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), m(&[&[1, 3], &[2, 4]]));
        assert!(a.checked_mul(&m(&[&[1, 2, 3]])).is_none());
        assert_eq!(&a * &PolyMatrix::identity(2), a);
    }

    #[test]
    fn polynomial_entries() {
        let b = ScalarPoly::beta();
        let a = PolyMatrix::from_fn(2, 2, |r, c| if r == c { b.clone() } else { ScalarPoly::constant(1) });
        let sq = &a * &a;
        assert_eq!(sq.get(0, 0), &ScalarPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(sq.get(0, 1), &ScalarPoly::from_i64s(&[0, 2]));
        assert!(sq.is_symmetric());
        let e = sq.eval_f64(2.0);
        assert_eq!(e[(0, 0)], 5.0);
        assert!((&sq - &sq).is_zero());
    }
}
