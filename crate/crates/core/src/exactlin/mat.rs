use std::fmt;
use std::ops::{Index, IndexMut};

use rand::Rng;

use super::field::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over an exact field. A matrix with `r` rows and
/// `c` columns represents a linear map k^c -> k^r acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.signed(self[(r, c)]))?;
            }
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Mat {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Mat { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Mat { field, rows: r, cols: c, data }
    }

    /// Single column from a slice.
    pub fn column(field: Field, v: &[Scalar]) -> Mat {
        Mat { field, rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Mat { field, rows, cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| self[(r, c)] == if r == c { Scalar::ONE } else { Scalar::ZERO })
            })
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = f.add(out[(i, j)], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|r| f.sum(self.row(r).iter().zip(v).map(|(a, b)| f.mul(*a, *b))))
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(*a, *b)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.field.neg(Scalar::ONE))
    }

    pub fn scale(&self, s: Scalar) -> Mat {
        let f = self.field;
        let data = self.data.iter().map(|a| f.mul(*a, s)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn add_scaled(&mut self, other: &Mat, s: Scalar) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        let f = self.field;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = f.add(*a, f.mul(*b, s));
            }
        }
    }

    /// Horizontal concatenation; all blocks need the same row count.
    pub fn hstack(field: Field, rows: usize, blocks: &[&Mat]) -> Mat {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn vstack(field: Field, cols: usize, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.set_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    pub fn block_diag(field: Field, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out[(r, c)] = self[(r0 + r, c0 + c)];
            }
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out[(r, j)] = self[(r, c)];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out[(i, c)] = self[(r, c)];
            }
        }
        out
    }

    /// Flattened row-major entries as a column vector.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m[(row, col)]).expect("nonzero pivot");
            for c in col..m.cols {
                m[(row, c)] = f.mul(m[(row, c)], inv);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m[(r, col)];
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.mul(factor, m[(row, c)]);
                    m[(r, c)] = f.sub(m[(r, c)], v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Columns form a basis of the null space.
    pub fn kernel_basis(&self) -> Mat {
        let f = self.field;
        let Echelon { mat, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = Scalar::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = f.neg(mat[(i, fc)]);
            }
        }
        k
    }

    /// A basis of the column space, taken from the columns of `self`.
    pub fn column_basis(&self) -> Mat {
        let pivots = self.echelon().pivots;
        self.select_cols(&pivots)
    }

    /// Solve `b * x = a`. Returns `None` if the column space of `a` is not
    /// contained in that of `b`.
    pub fn solve_factorization(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
        if a.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve_factorization: a has {} rows, b has {}",
                a.rows, b.rows
            )));
        }
        let f = b.field;
        let aug = Mat::hstack(f, b.rows, &[b, a]);
        let Echelon { mat, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= b.cols) {
            return Ok(None);
        }
        let mut x = Mat::zeros(f, b.cols, a.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..a.cols {
                x[(pc, j)] = mat[(i, b.cols + j)];
            }
        }
        Ok(Some(x))
    }

    /// Solve `self * x = v` for a vector.
    pub fn solve_vec(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let rhs = Mat::column(self.field, v);
        Mat::solve_factorization(&rhs, self).ok().flatten().map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let id = Mat::identity(self.field, self.rows);
        let x = Mat::solve_factorization(&id, self).ok().flatten()?;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, e: usize) -> Mat {
        let mut out = Mat::identity(self.field, self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.rows == 0 || self.pow(self.rows).is_zero()
    }

    /// Standard basis vectors that extend the columns of `self` (assumed
    /// independent) to a basis of the ambient space. Returned as columns.
    pub fn complement_basis(&self) -> Mat {
        let f = self.field;
        let n = self.rows;
        let id = Mat::identity(f, n);
        let aug = Mat::hstack(f, n, &[self, &id]);
        let piv = aug.echelon().pivots;
        let extra: Vec<usize> = piv.into_iter().filter(|&p| p >= self.cols).map(|p| p - self.cols).collect();
        id.select_cols(&extra)
    }

    /// Projection onto the quotient k^n / colspace(self), as a matrix whose
    /// kernel is exactly the column space of `self` (columns assumed independent),
    /// together with a section of it.
    pub fn quotient_map(&self) -> (Mat, Mat) {
        let f = self.field;
        let comp = self.complement_basis();
        let full = Mat::hstack(f, self.rows, &[self, &comp]);
        let inv = full.inverse().expect("basis extension is invertible");
        let proj = inv.block(self.cols, 0, comp.cols, self.rows);
        (proj, comp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let f = Field::Prime(101);
        assert_eq!(Mat::zeros(f, 0, 0).rank(), 0);
        assert_eq!(Mat::identity(f, 3).rank(), 3);
        let q = Field::Rationals;
        assert_eq!(Mat::from_rows(q, &[vec![1, 2], vec![2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Field::Prime(101);
        assert_eq!(Mat::identity(f, 4).kernel_basis().cols(), 0);
        let z = Mat::zeros(f, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let f5 = Field::Prime(5);
        let m = Mat::from_rows(f5, &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // up to scalar the kernel is spanned by (1, 4)
        let v = k.col(0);
        let s = f5.inv(v[0]).unwrap();
        assert_eq!(vec![f5.mul(v[0], s), f5.mul(v[1], s)], vec![f5.from_i64(1), f5.from_i64(4)]);
    }

    #[test]
    fn solve_examples() {
        let f = Field::Prime(101);
        let id = Mat::identity(f, 3);
        assert_eq!(Mat::solve_factorization(&id, &id).unwrap().unwrap(), id);
        let a = Mat::from_rows(f, &[vec![1], vec![0]]);
        let b = Mat::zeros(f, 2, 2);
        assert!(Mat::solve_factorization(&a, &b).unwrap().is_none());
        let q = Field::Rationals;
        let x = Mat::solve_factorization(&Mat::from_rows(q, &[vec![2]]), &Mat::from_rows(q, &[vec![1]]))
            .unwrap()
            .unwrap();
        assert_eq!(x, Mat::from_rows(q, &[vec![2]]));
        assert!(Mat::solve_factorization(&Mat::zeros(f, 2, 1), &Mat::zeros(f, 3, 1)).is_err());
    }

    #[test]
    fn quotient_map_kills_subspace() {
        let f = Field::Prime(7);
        let s = Mat::from_rows(f, &[vec![1], vec![2], vec![3]]);
        let (p, sec) = s.quotient_map();
        assert!(p.mul(&s).is_zero());
        assert!(p.mul(&sec).is_identity());
        assert_eq!(p.rows(), 2);
    }
}
