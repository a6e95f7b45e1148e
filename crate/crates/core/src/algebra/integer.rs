//! Integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal, nonnegative,
/// each diagonal entry dividing the next. `v_inv` is the inverse of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> IntegerMatrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntegerMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row `dst` += k · row `src`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let x = self.get(src, j) * k;
            self.data[dst * self.cols + j] += x;
        }
    }

    /// column `dst` += k · column `src`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, src) * k;
            self.data[i * self.cols + dst] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

struct SmithState {
    a: IntegerMatrix,
    u: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl SmithState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
    }

    /// column `dst` += k · column `src`; the inverse gains row `src` -= k · row `dst`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
        self.v_inv.add_row(src, dst, &-k);
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = SmithState {
        a: m.clone(),
        u: IntegerMatrix::identity(rows),
        v: IntegerMatrix::identity(cols),
        v_inv: IntegerMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = s.a.get(i, j);
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < s.a.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            let pivot = s.a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = s.a.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    s.add_row(i, t, &-q);
                }
                if !s.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = s.a.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    s.add_col(j, t, &-q);
                }
                if !s.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s.a.get(i, j).is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => s.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if s.a.get(t, t).is_negative() {
            s.a.negate_row(t);
            s.u.negate_row(t);
        }
    }
    SmithForm {
        d: s.a,
        u: s.u,
        v: s.v,
        v_inv: s.v_inv,
    }
}

/// Basis of the integer kernel `{x ∈ Z^cols : m x = 0}`.
pub fn integer_kernel(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.column(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(m.cols()));
        s
    }

    #[test]
    fn diag_2_3() {
        let s = check(&IntegerMatrix::from_i64(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
        assert_eq!(s.u, IntegerMatrix::identity(3));
        assert_eq!(s.v, IntegerMatrix::identity(3));
    }

    #[test]
    fn rank_one_with_zero_row() {
        let s = check(&IntegerMatrix::from_i64(2, &[&[2, 4], &[0, 0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::zero()]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = IntegerMatrix::from_i64(3, &[&[2, 4, 6], &[1, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinant_small() {
        let m = IntegerMatrix::from_i64(3, &[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        // 2·(6 − 2) + 1·(1 − 3)
        assert_eq!(m.determinant(), BigInt::from(6));
    }
}
