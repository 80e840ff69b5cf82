//! Dense matrices over a [`Field`]: echelon forms, kernels, images, solving,
//! and characteristic polynomials.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::field::{Field, FieldElement};
use crate::Error;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<FieldElement>]) -> Result<Matrix, Error> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows"));
            }
            for &x in row {
                data.push(field.embed(x)?);
            }
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`; every column has length `rows`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<FieldElement>]) -> Result<Matrix, Error> {
        let mut m = Matrix::zero(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch("ragged columns"));
            }
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = field.embed(x)?;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    /// Same entries, viewed in a field containing this one's prime field.
    pub fn embed(&self, field: Field) -> Result<Matrix, Error> {
        Ok(Matrix {
            field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|&x| field.embed(x))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("product"));
        }
        let mut out = Matrix::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs[(k, j)];
                    out[(i, j)] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("difference"));
        }
        let mut out = self.clone();
        for (x, &y) in out.data.iter_mut().zip(&rhs.data) {
            *x -= y;
        }
        Ok(out)
    }

    /// `self - lambda * I`.
    pub fn shift(&self, lambda: FieldElement) -> Matrix {
        assert_eq!(self.rows, self.cols, "shift of a non-square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= lambda;
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Matrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("square");
            }
        }
        acc
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix) -> Result<Matrix, Error> {
        if self.field != below.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch("vstack"));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row-echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].inverse().expect("nonzero pivot");
            for j in c..self.cols {
                self[(r, j)] *= inv;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self[(r, j)];
                    self[(i, j)] -= factor * v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel as the columns of a `cols x nullity` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zero(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = self.field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = -r[(i, fc)];
            }
        }
        k
    }

    /// Basis of the column space as the columns of a `rows x rank` matrix,
    /// in reduced echelon form.
    pub fn image(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        let mut img = Matrix::zero(self.field, self.rows, pivots.len());
        for j in 0..pivots.len() {
            for i in 0..self.rows {
                img[(i, j)] = r[(j, i)];
            }
        }
        img
    }

    /// The unique `X` with `self * X = rhs`, when `self` has full column rank
    /// and the system is consistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.field != rhs.field || self.rows != rhs.rows {
            return None;
        }
        let n = self.cols;
        let mut aug = Matrix::zero(self.field, self.rows, n + rhs.cols);
        for i in 0..self.rows {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                aug[(i, n + j)] = rhs[(i, j)];
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        if pivots.len() > n {
            return None;
        }
        let mut x = Matrix::zero(self.field, n, rhs.cols);
        for i in 0..n {
            for j in 0..rhs.cols {
                x[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(x)
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..self.cols {
            let Some(pr) = (c..self.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return self.field.zero();
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let pivot = m[(c, c)];
            det *= pivot;
            let inv = pivot.inverse().expect("nonzero pivot");
            for i in c + 1..self.rows {
                let factor = m[(i, c)] * inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = m[(c, j)];
                    m[(i, j)] -= factor * v;
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(x I - A)`, ascending and monic, via
    /// reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Vec<FieldElement> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        let f = self.field;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let inv = h[(m, m - 1)].inverse().expect("nonzero pivot");
            for i in m + 1..n {
                let u = h[(i, m - 1)] * inv;
                if u.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = h[(m, j)];
                    h[(i, j)] -= u * v;
                }
                for r in 0..n {
                    let v = h[(r, i)];
                    h[(r, m)] += u * v;
                }
            }
        }
        // polys[k] is the charpoly of the leading k x k block
        let mut polys: Vec<Vec<FieldElement>> = vec![vec![f.one()]];
        for k in 1..=n {
            let prev = &polys[k - 1];
            let mut next = vec![f.zero(); k + 1];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= h[(k - 1, k - 1)] * c;
            }
            let mut sub = f.one();
            for i in 1..k {
                sub *= h[(k - i, k - i - 1)];
                let coef = h[(k - i - 1, k - 1)] * sub;
                if coef.is_zero() {
                    continue;
                }
                for (d, &c) in polys[k - i - 1].iter().enumerate() {
                    next[d] -= coef * c;
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
