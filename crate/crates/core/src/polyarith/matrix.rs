//! Dense matrices, Bareiss determinants and the column Hermite normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{Field, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a `rows x cols.len()` matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone()))
            .collect()
    }

    /// Fraction-free Bareiss elimination; exact for integral domains with exact `/`.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return T::zero();
                };
                for j in 0..n {
                    a.data.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            let pivot = a.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (pivot.clone() * a.get(i, j).clone() - a.get(i, k).clone() * a.get(k, j).clone())
                        / prev.clone();
                    a.set(i, j, v);
                }
                a.set(i, k, T::zero());
            }
            prev = pivot;
        }
        sign * a.get(n - 1, n - 1).clone()
    }
}

impl<T: Field> Matrix<T> {
    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let piv = (k..n).find(|&i| !a.get(i, k).is_zero())?;
            if piv != k {
                for j in 0..n {
                    a.data.swap(k * n + j, piv * n + j);
                    inv.data.swap(k * n + j, piv * n + j);
                }
            }
            let p = a.get(k, k).clone();
            for j in 0..n {
                a.set(k, j, a.get(k, j).clone() / p.clone());
                inv.set(k, j, inv.get(k, j).clone() / p.clone());
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j).clone() - f.clone() * a.get(k, j).clone());
                    inv.set(i, j, inv.get(i, j).clone() - f.clone() * inv.get(k, j).clone());
                }
            }
        }
        Some(inv)
    }
}

impl Matrix<BigInt> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| BigRational::from_integer(v.clone())).collect(),
        }
    }

    /// Column-style Hermite normal form of the lattice spanned by the columns.
    ///
    /// The result has the input's shape. The first `rank` columns are the basis: pivots
    /// are positive, each column's entries below its pivot are zero, pivot rows increase
    /// left to right, and every entry to the right of a pivot (in the pivot's row) lies in
    /// `[0, pivot)`. Remaining columns are zero. For a full-rank square lattice this is
    /// upper triangular.
    pub fn hnf(&self) -> Self {
        let n = self.rows;
        let mut active: Vec<Vec<BigInt>> = self
            .columns()
            .into_iter()
            .filter(|c| c.iter().any(|v| !v.is_zero()))
            .collect();
        let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
        for i in (0..n).rev() {
            loop {
                let mut nz: Vec<usize> = (0..active.len()).filter(|&j| !active[j][i].is_zero()).collect();
                if nz.is_empty() {
                    break;
                }
                nz.sort_by(|&a, &b| active[a][i].abs().cmp(&active[b][i].abs()));
                let piv = nz[0];
                if nz.len() == 1 {
                    let mut col = active.swap_remove(piv);
                    if col[i].is_negative() {
                        col.iter_mut().for_each(|v| *v = -&*v);
                    }
                    basis.push((i, col));
                    break;
                }
                let pcol = active[piv].clone();
                for &j in &nz[1..] {
                    let q = active[j][i].div_floor(&pcol[i]);
                    for (t, p) in active[j].iter_mut().zip(&pcol) {
                        *t -= &q * p;
                    }
                }
            }
        }
        basis.reverse();
        for k in 0..basis.len() {
            for j in (0..k).rev() {
                let (rj, ref cj) = basis[j];
                let q = basis[k].1[rj].div_floor(&cj[rj]);
                if q.is_zero() {
                    continue;
                }
                let cj = cj.clone();
                for (t, p) in basis[k].1.iter_mut().zip(&cj) {
                    *t -= &q * p;
                }
            }
        }
        let mut out = Self::zeros(n, self.cols);
        for (j, (_, col)) in basis.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Square HNF of the lattice spanned by the columns together with `d * Z^n`.
    ///
    /// Entries are kept reduced modulo `d` during elimination, which bounds their size.
    /// The result is the HNF basis of the lattice when the lattice already contains
    /// `d * Z^n`, as for ideals of norm dividing `d`.
    pub fn hnf_modular(&self, d: &BigInt) -> Self {
        assert!(d.is_positive(), "modulus must be positive");
        let n = self.rows;
        let mut active: Vec<Vec<BigInt>> = self
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|v| v.mod_floor(d)).collect::<Vec<_>>())
            .filter(|c| c.iter().any(|v| !v.is_zero()))
            .collect();
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for i in (0..n).rev() {
            let mut de = vec![BigInt::zero(); n];
            de[i] = d.clone();
            active.push(de);
            loop {
                let mut nz: Vec<usize> = (0..active.len()).filter(|&j| !active[j][i].is_zero()).collect();
                nz.sort_by(|&a, &b| active[a][i].abs().cmp(&active[b][i].abs()));
                let piv = nz[0];
                if nz.len() == 1 {
                    let mut col = active.swap_remove(piv);
                    if col[i].is_negative() {
                        col.iter_mut().for_each(|v| *v = -&*v);
                    }
                    basis.push(col);
                    break;
                }
                let pcol = active[piv].clone();
                for &j in &nz[1..] {
                    let q = active[j][i].div_floor(&pcol[i]);
                    for (r, (t, p)) in active[j].iter_mut().zip(&pcol).enumerate() {
                        *t -= &q * p;
                        if r < i {
                            *t = t.mod_floor(d);
                        }
                    }
                }
            }
            active.retain(|c| c.iter().any(|v| !v.is_zero()));
        }
        basis.reverse();
        for k in 0..n {
            for j in (0..k).rev() {
                let q = basis[k][j].div_floor(&basis[j][j]);
                if q.is_zero() {
                    continue;
                }
                let cj = basis[j].clone();
                for (t, p) in basis[k].iter_mut().zip(&cj) {
                    *t -= &q * p;
                }
            }
        }
        Self::from_cols(n, &basis)
    }

    /// Number of nonzero columns; equals the rank for an HNF matrix.
    pub fn nonzero_cols(&self) -> usize {
        (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero()))
            .count()
    }

    /// Keeps the first `k` columns.
    pub fn truncate_cols(&self, k: usize) -> Self {
        let cols: Vec<Vec<BigInt>> = (0..k).map(|j| self.col(j)).collect();
        Self::from_cols(self.rows, &cols)
    }

    /// Coordinates of `v` in the basis of an HNF matrix, or `None` if `v` is not in the
    /// lattice.
    pub fn hnf_solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let r = self.nonzero_cols();
        let pivot_row = |j: usize| {
            (0..self.rows)
                .rev()
                .find(|&i| !self.get(i, j).is_zero())
                .expect("nonzero col")
        };
        let mut rem = v.to_vec();
        let mut coords = vec![BigInt::zero(); r];
        for j in (0..r).rev() {
            let pr = pivot_row(j);
            if rem[pr + 1..].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, m) = rem[pr].div_rem(self.get(pr, j));
            if !m.is_zero() {
                return None;
            }
            for i in 0..=pr {
                rem[i] -= &q * self.get(i, j);
            }
            coords[j] = q;
        }
        rem.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        self.hnf_solve(v).is_some()
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::IntMatrix;

    #[test]
    fn hnf_identity_is_identity() {
        let id = IntMatrix::identity(3);
        assert_eq!(id.hnf(), id);
    }

    #[test]
    fn modular_hnf_matches_plain() {
        let m = IntMatrix::from_i64_rows(&[&[6, 4, 9, 0], &[0, 2, 3, 12], &[3, 0, 5, 6]]);
        let full = IntMatrix::from_i64_rows(&[
            &[6, 4, 9, 0, 36, 0, 0],
            &[0, 2, 3, 12, 0, 36, 0],
            &[3, 0, 5, 6, 0, 0, 36],
        ]);
        let plain = full.hnf().truncate_cols(3);
        assert_eq!(m.hnf_modular(&BigInt::from(36)), plain);
    }

    #[test]
    fn hnf_even_sum_lattice() {
        // columns (2,0), (0,2), (1,1)
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 1], &[0, 2, 1]]);
        let h = m.hnf();
        assert_eq!(h.nonzero_cols(), 2);
        let sq = h.truncate_cols(2);
        assert_eq!(sq.determinant(), BigInt::from(2));
        assert_eq!(sq, IntMatrix::from_i64_rows(&[&[2, 1], &[0, 1]]));
        assert!(h.lattice_contains(&[BigInt::from(3), BigInt::from(1)]));
        assert!(!h.lattice_contains(&[BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn hnf_zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(z.hnf(), z);
    }

    #[test]
    fn hnf_rank_deficient() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[3, 6]]);
        let h = m.hnf();
        assert_eq!(h.nonzero_cols(), 1);
        assert_eq!(h.col(0), vec![BigInt::from(2), BigInt::from(3)]);
        assert!(h.lattice_contains(&[BigInt::from(-4), BigInt::from(-6)]));
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64_rows(&[&[0, 2, 1], &[3, 1, 4], &[1, 5, 9]]);
        // 0*(9-20) - 2*(27-4) + 1*(15-1) = -46 + 14
        assert_eq!(m.determinant(), BigInt::from(-32));
    }

    #[test]
    fn rational_inverse() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).to_rational();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), crate::RatMatrix::identity(2));
        assert!(IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]])
            .to_rational()
            .inverse()
            .is_none());
    }
}
