//! Dense matrices over exact scalars.
//!
//! One generic matrix type serves both rational representation matrices and
//! matrices over localized function rings (operators, glue matrices). The
//! nilpotent exponential and unipotent logarithm are finite sums, so
//! everything stays exact.

use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::ring::RingElem;

/// Scalars a matrix can hold. `zero_like`/`one_like` derive constants from
/// an existing element, which carries its ring context.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    fn neg_s(&self) -> Self;
    fn scale_s(&self, k: &Rat) -> Self;
    fn try_inv_s(&self) -> Result<Self>;
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_s(&self) -> Self {
        -self
    }
    fn scale_s(&self, k: &Rat) -> Self {
        self * k
    }
    fn try_inv_s(&self) -> Result<Self> {
        self.inv()
    }
}

impl Scalar for RingElem {
    fn zero_like(&self) -> Self {
        RingElem::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        RingElem::one(self.ring())
    }
    fn is_zero(&self) -> bool {
        RingElem::is_zero(self)
    }
    fn add_s(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_s(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_s(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn scale_s(&self, k: &Rat) -> Self {
        self.scale(k)
    }
    fn try_inv_s(&self) -> Result<Self> {
        self.try_inv()
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize, like: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn identity(d: usize, like: &T) -> Self {
        let mut m = Matrix::zero(d, d, like);
        for i in 0..d {
            *m.at_mut(i, i) = like.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    /// A sample element, used to derive ring context.
    pub fn witness(&self) -> &T {
        &self.data[0]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        *self.at(i, j) == self.at(i, j).one_like()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn add(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).add_s(o.at(i, j)))
    }

    pub fn sub(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).sub_s(o.at(i, j)))
    }

    pub fn neg(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).neg_s())
    }

    pub fn mul(&self, o: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        // row-major accumulation, skipping zero entries: the operator
        // matrices this library produces are sparse and triangular
        let mut out = Matrix::zero(self.rows, o.cols, self.witness());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).add_s(&a.mul_s(b));
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.witness().zero_like();
                for k in 0..self.cols {
                    if self.at(i, k).is_zero() || v[k].is_zero() {
                        continue;
                    }
                    acc = acc.add_s(&self.at(i, k).mul_s(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn scale_elem(&self, k: &T) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul_s(k))
    }

    pub fn scale_rat(&self, k: &Rat) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).scale_s(k))
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn kron(&self, o: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.at(i / o.rows, j / o.cols).mul_s(o.at(i % o.rows, j % o.cols))
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `exp(M)` for nilpotent `M`, as a finite sum.
    pub fn exp_nilpotent(&self) -> Result<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows, self.witness());
        let mut power = acc.clone();
        let mut kfact = Rat::one();
        for k in 1..=self.rows + 1 {
            power = power.mul(self);
            if power.is_zero() {
                return Ok(acc);
            }
            if k > self.rows {
                return Err(Error::NotNilpotent(k));
            }
            kfact = kfact * Rat::from_int(k as i64);
            acc = acc.add(&power.scale_rat(&kfact.inv().expect("nonzero")));
        }
        Ok(acc)
    }

    /// `log(M)` for unipotent `M` (M - I nilpotent), as a finite sum.
    pub fn log_unipotent(&self) -> Result<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let u = self.sub(&Matrix::identity(self.rows, self.witness()));
        let mut acc = Matrix::zero(self.rows, self.cols, self.witness());
        let mut power = Matrix::identity(self.rows, self.witness());
        for k in 1..=self.rows + 1 {
            power = power.mul(&u);
            if power.is_zero() {
                return Ok(acc);
            }
            if k > self.rows {
                return Err(Error::NotNilpotent(k));
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale_rat(&Rat::new(sign, k as i64)));
        }
        Ok(acc)
    }

    /// Inverse by Gauss-Jordan elimination; pivots must be units.
    pub fn try_inverse(&self) -> Result<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let d = self.rows;
        let mut work = self.clone();
        let mut inv = Matrix::identity(d, self.witness());
        for col in 0..d {
            let pivot_row = (col..d)
                .find(|&r| work.at(r, col).try_inv_s().is_ok())
                .ok_or(Error::NonInvertibleLinearPart)?;
            if pivot_row != col {
                for j in 0..d {
                    work.data.swap(pivot_row * d + j, col * d + j);
                    inv.data.swap(pivot_row * d + j, col * d + j);
                }
            }
            let scale = work.at(col, col).try_inv_s()?;
            for j in 0..d {
                *work.at_mut(col, j) = work.at(col, j).mul_s(&scale);
                *inv.at_mut(col, j) = inv.at(col, j).mul_s(&scale);
            }
            for r in 0..d {
                if r == col || work.at(r, col).is_zero() {
                    continue;
                }
                let factor = work.at(r, col).clone();
                for j in 0..d {
                    let w = work.at(r, j).sub_s(&factor.mul_s(work.at(col, j)));
                    *work.at_mut(r, j) = w;
                    let v = inv.at(r, j).sub_s(&factor.mul_s(inv.at(col, j)));
                    *inv.at_mut(r, j) = v;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by Laplace expansion; fine for the small linear parts
    /// this library meets.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => self.witness().one_like(),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = self.witness().zero_like();
                for j in 0..self.cols {
                    if self.at(0, j).is_zero() {
                        continue;
                    }
                    let minor = Matrix::from_fn(self.rows - 1, self.cols - 1, |r, c| {
                        self.at(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = self.at(0, j).mul_s(&minor.det());
                    acc = if j % 2 == 0 {
                        acc.add_s(&term)
                    } else {
                        acc.sub_s(&term)
                    };
                }
                acc
            }
        }
    }

    pub fn render(&self, render_elem: impl Fn(&T) -> String) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| render_elem(self.at(i, j))).collect();
                cells.join(", ")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|t| format!("{t:?}")))
    }
}

pub type QMatrix = Matrix<Rat>;
pub type RMatrix = Matrix<RingElem>;

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: &[&[i64]]) -> QMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn multiply_and_identity() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let id = Matrix::identity(2, &Rat::one());
        assert_eq!(a.mul(&id), a);
        let b = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), qm(&[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn exp_log_roundtrip() {
        let n = qm(&[&[0, 2], &[0, 0]]);
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(e, qm(&[&[1, 2], &[0, 1]]));
        assert_eq!(e.log_unipotent().unwrap(), n);
    }

    #[test]
    fn exp_rejects_non_nilpotent() {
        let m = qm(&[&[1, 0], &[0, 1]]);
        assert!(matches!(m.exp_nilpotent(), Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn inverse() {
        let a = qm(&[&[0, 1], &[2, 3]]);
        let inv = a.try_inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        let sing = qm(&[&[1, 2], &[2, 4]]);
        assert!(sing.try_inverse().is_err());
    }

    #[test]
    fn kronecker() {
        let a = qm(&[&[1, 2], &[0, 1]]);
        let b = qm(&[&[3]]);
        assert_eq!(a.kron(&b), qm(&[&[3, 6], &[0, 3]]));
        let c = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.kron(&c).rows(), 4);
    }

    #[test]
    fn determinant() {
        assert_eq!(qm(&[&[1, 2], &[3, 4]]).det(), Rat::from_int(-2));
        assert_eq!(
            qm(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]).det(),
            Rat::from_int(24)
        );
    }
}
