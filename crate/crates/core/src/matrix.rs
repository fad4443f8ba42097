//! Dense matrices over a [`Field`], row-vector convention (`x · A`).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for &v in row {
                data.push(field.check(v)?);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from a flat row-major buffer.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &v in &data {
            field.check(v)?;
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reinterprets the entries in another field. Every entry must be a
    /// valid element there (used to embed binary matrices into GF(2^λ)).
    pub fn embed(&self, field: &Field) -> Result<Matrix> {
        Matrix::from_vec(field, self.rows, self.cols, self.data.clone())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} times {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in v.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(coef, m));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector, returned as a plain vector.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for r in 0..self.rows {
            let row = other.vec_mul(self.row(r))?;
            out.data[r * other.cols..(r + 1) * other.cols].copy_from_slice(&row);
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols.max(other.cols),
            data,
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Matrix> {
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    limit: self.cols,
                });
            }
        }
        let mut out = Matrix::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    limit: self.rows,
                });
            }
            data.extend_from_slice(self.row(r));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        })
    }

    /// Canonical reduced row echelon form: pivots are 1, pivot columns are
    /// otherwise zero, zero rows at the bottom.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, lead);
            let inv = f.inv(m.get(lead, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(lead, j);
                m.set(lead, j, f.mul(v, inv));
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(lead, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref {
            matrix: m,
            rank: lead,
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Finds some `x` with `x · self = target`, or `None` if the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve_left(&self, target: &[u32]) -> Result<Option<Vec<u32>>> {
        if target.len() != self.cols {
            return Err(Error::Dimension(format!(
                "target of length {} for a matrix with {} columns",
                target.len(),
                self.cols
            )));
        }
        // x · A = t  <=>  A^T x^T = t^T; eliminate on [A^T | t].
        let t = Matrix::from_vec(&self.field, self.cols, 1, target.to_vec())?;
        let aug = self.transpose().hstack(&t)?;
        let red = aug.rref();
        let unknowns = self.rows;
        if red.pivots.last() == Some(&unknowns) {
            return Ok(None);
        }
        let mut x = vec![0u32; unknowns];
        for (i, &p) in red.pivots.iter().enumerate() {
            x[p] = red.matrix.get(i, unknowns);
        }
        Ok(Some(x))
    }

    /// True iff the columns indexed by `cols` are linearly independent.
    pub fn columns_independent(&self, cols: &[usize]) -> Result<bool> {
        let sub = self.select_columns(cols)?;
        Ok(sub.rank() == cols.len())
    }

    /// Rows spanning the right kernel `{x : self · x^T = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let f = &self.field;
        let red = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (i, &pc) in red.pivots.iter().enumerate() {
                out.set(k, pc, f.neg(red.matrix.get(i, fc)));
            }
        }
        out
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Matrix {
        let red = self.rref();
        red.matrix
            .select_rows(&(0..red.rank).collect::<Vec<_>>())
            .expect("rank rows exist")
    }

    /// True iff `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.solve_left(v)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf4() -> Field {
        Field::new(2, 2).unwrap()
    }

    #[test]
    fn vec_mul_basics() {
        let f = gf4();
        let m = Matrix::from_rows(&f, &[vec![1, 2, 3], vec![0, 1, 2]]).unwrap();
        assert_eq!(m.vec_mul(&[0, 1]).unwrap(), vec![0, 1, 2]);
        assert_eq!(
            Matrix::identity(&f, 3).vec_mul(&[1, 1, 1]).unwrap(),
            vec![1, 1, 1]
        );
        assert!(m.vec_mul(&[1, 1, 1]).is_err());
    }

    #[test]
    fn rref_trivial_cases() {
        let f = gf4();
        let id = Matrix::identity(&f, 4);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
        let z = Matrix::zeros(&f, 3, 5);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn solve_trivial_cases() {
        let f = gf4();
        let id = Matrix::identity(&f, 3);
        assert_eq!(id.solve_left(&[3, 0, 2]).unwrap(), Some(vec![3, 0, 2]));
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(z.solve_left(&[0, 1]).unwrap(), None);
        assert!(id.solve_left(&[1]).is_err());
    }

    #[test]
    fn column_independence() {
        let f = Field::binary();
        let m = Matrix::from_rows(&f, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(m.columns_independent(&[0]).unwrap());
        assert!(!m.columns_independent(&[0, 1]).unwrap());
        assert!(m.columns_independent(&[1, 2]).unwrap());
        assert!(m.columns_independent(&[3]).is_err());
    }

    #[test]
    fn kernel_is_orthogonal() {
        let f = Field::new(3, 1).unwrap();
        let m = Matrix::from_rows(&f, &[vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..7, 0usize..3).prop_flat_map(|(r, c, fi)| {
            let f = [
                Field::binary(),
                Field::new(2, 2).unwrap(),
                Field::new(3, 1).unwrap(),
            ][fi]
                .clone();
            let q = f.order();
            proptest::collection::vec(0..q, r * c)
                .prop_map(move |d| Matrix::from_vec(&f, r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_keeps_row_space(m in arb_matrix(), seed in any::<u64>()) {
            let r = m.rref();
            prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
            prop_assert_eq!(r.rank, r.matrix.rank());
            // each original row lies in the span of the reduced rows and vice versa
            for i in 0..m.rows() {
                prop_assert!(r.matrix.row_space_contains(m.row(i)).unwrap());
            }
            // random combination of rows stays in the span
            let f = m.field().clone();
            let coeffs: Vec<u32> = (0..m.rows()).map(|i| ((seed >> (i * 3)) as u32) % f.order()).collect();
            let v = m.vec_mul(&coeffs).unwrap();
            prop_assert!(r.matrix.row_space_contains(&v).unwrap());
        }

        #[test]
        fn solve_substitutes_back(m in arb_matrix(), seed in any::<u64>()) {
            let f = m.field().clone();
            let x: Vec<u32> = (0..m.rows()).map(|i| ((seed >> (i * 4)) as u32) % f.order()).collect();
            let target = m.vec_mul(&x).unwrap();
            let sol = m.solve_left(&target).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.vec_mul(&sol).unwrap(), target);
        }

        #[test]
        fn independence_matches_rank(m in arb_matrix(), mask in any::<u8>()) {
            let cols: Vec<usize> = (0..m.cols()).filter(|c| mask >> c & 1 == 1).collect();
            // brute force: no nontrivial combination of the chosen columns vanishes
            let f = m.field().clone();
            let q = f.order() as usize;
            let mut expected = true;
            for code in 1..q.pow(cols.len() as u32) {
                let mut rest = code;
                let mut acc = vec![0u32; m.rows()];
                for &c in &cols {
                    let a = (rest % q) as u32;
                    rest /= q;
                    for (r, slot) in acc.iter_mut().enumerate() {
                        *slot = f.add(*slot, f.mul(a, m.get(r, c)));
                    }
                }
                if acc.iter().all(|&v| v == 0) {
                    expected = false;
                    break;
                }
            }
            prop_assert_eq!(m.columns_independent(&cols).unwrap(), expected);
        }
    }
}
