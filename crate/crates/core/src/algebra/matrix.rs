//! Dense matrices over a field: rank, reduced row echelon form and kernels.
//!
//! Over `Q` and rational function fields, rows are first cleared of
//! denominators and eliminated fraction-free (Bareiss) over `Z` or `k[t]`;
//! the echelon form is then normalized in the field. Everything else uses
//! plain Gauss-Jordan elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{Field, FieldDescriptor, FieldElement};
use super::poly::UniPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Rank and echelon-normalized kernel basis of a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Vec<Vec<FieldElement>>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> FieldMatrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            for e in row {
                assert!(e.field() == field, "entry outside the matrix field");
                data.push(e);
            }
        }
        FieldMatrix {
            field: field.clone(),
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> FieldMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FieldMatrix::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
                .collect(),
        )
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

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = FieldMatrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form, fraction-free where the field allows it.
    pub fn rref(&self) -> Rref {
        match self.field.descriptor() {
            FieldDescriptor::Rationals => self.rref_bareiss_integers(),
            FieldDescriptor::RationalFunctions { .. } => self.rref_bareiss_polynomials(),
            _ => self.rref_gauss_jordan(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Kernel basis read off the reduced echelon form: one vector per free
    /// column, with a 1 there and zeros on the other free columns.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        kernel_from_rref(&self.rref(), self.cols)
    }

    /// Plain Gauss-Jordan elimination, available on every field.
    pub fn rref_gauss_jordan(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn rref_bareiss_integers(&self) -> Rref {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |l, x| {
                    l.lcm(x.as_rational().expect("rational entry").denom())
                });
                row.iter()
                    .map(|x| {
                        let r = x.as_rational().unwrap();
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect()
            })
            .collect();
        let (echelon, pivots) = bareiss(rows, self.cols);
        let field = self.field.clone();
        self.finish_from_echelon(echelon, pivots, |x| field.from_bigint(x))
    }

    fn rref_bareiss_polynomials(&self) -> Rref {
        let base = self.field.base().expect("function field").clone();
        let rows: Vec<Vec<UniPoly>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(UniPoly::one(&base), |l, x| {
                    let d = x.as_fraction().expect("fraction entry").1;
                    l.mul(d).exact_div(&l.gcd(d))
                });
                row.iter()
                    .map(|x| {
                        let (n, d) = x.as_fraction().unwrap();
                        n.mul(&lcm.exact_div(d))
                    })
                    .collect()
            })
            .collect();
        let (echelon, pivots) = bareiss(rows, self.cols);
        let field = self.field.clone();
        self.finish_from_echelon(echelon, pivots, |p| field.from_poly(p))
    }

    /// Normalizes a fraction-free echelon form into the reduced form.
    fn finish_from_echelon<T>(
        &self,
        echelon: Vec<Vec<T>>,
        pivots: Vec<usize>,
        embed: impl Fn(&T) -> FieldElement,
    ) -> Rref {
        let rows = echelon
            .iter()
            .map(|r| r.iter().map(&embed).collect())
            .collect();
        let mut m = FieldMatrix::from_rows(&self.field, self.cols, rows);
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..r {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
            }
        }
        Rref { matrix: m, pivots }
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "] over {}", self.field)
    }
}

/// Integral domain with exact division, enough for Bareiss elimination.
trait Domain: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn one_like(&self) -> Self;
    fn zero_like(&self) -> Self;
}

impl Domain for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
}

impl Domain for UniPoly {
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        UniPoly::mul(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        UniPoly::sub(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.exact_div(other)
    }
    fn one_like(&self) -> Self {
        UniPoly::one(self.field())
    }
    fn zero_like(&self) -> Self {
        UniPoly::zero(self.field())
    }
}

/// Fraction-free row echelon form. Every division is exact because each
/// entry is a minor of the input.
fn bareiss<T: Domain>(mut a: Vec<Vec<T>>, cols: usize) -> (Vec<Vec<T>>, Vec<usize>) {
    let rows = a.len();
    let mut pivots = Vec::new();
    if rows == 0 {
        return (a, pivots);
    }
    let mut prev = a[0].first().map(|x| x.one_like());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let denom = prev.clone().unwrap();
        for i in r + 1..rows {
            for j in c + 1..cols {
                let x = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j]));
                a[i][j] = x.div_exact(&denom);
            }
            a[i][c] = a[i][c].zero_like();
        }
        prev = Some(a[r][c].clone());
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Determinant of a square polynomial matrix, up to sign.
pub(crate) fn poly_determinant_up_to_sign(rows: Vec<Vec<UniPoly>>, field: &Field) -> UniPoly {
    let n = rows.len();
    if n == 0 {
        return UniPoly::one(field);
    }
    let (echelon, pivots) = bareiss(rows, n);
    if pivots.len() < n {
        UniPoly::zero(field)
    } else {
        echelon[n - 1][n - 1].clone()
    }
}

fn kernel_from_rref(rref: &Rref, cols: usize) -> Vec<Vec<FieldElement>> {
    let field = rref.matrix.field();
    let free: Vec<usize> = (0..cols).filter(|c| !rref.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &pc) in rref.pivots.iter().enumerate() {
                v[pc] = -rref.matrix.get(r, f).clone();
            }
            v
        })
        .collect()
}

/// Rank and kernel basis; `rank + kernel.len() == cols`.
pub fn matrix_rank_kernel(m: &FieldMatrix) -> RankKernel {
    let rref = m.rref();
    RankKernel {
        rank: rref.pivots.len(),
        kernel: kernel_from_rref(&rref, m.cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_row_has_full_kernel() {
        let q = Field::rationals();
        let s = q.from_int(2);
        let m = FieldMatrix::from_rows(&q, 2, vec![vec![&s - &q.from_int(2), q.zero()]]);
        let rk = matrix_rank_kernel(&m);
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel.len(), 2);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let q = Field::rationals();
        let rk = matrix_rank_kernel(&FieldMatrix::identity(&q, 2));
        assert_eq!(rk.rank, 2);
        assert!(rk.kernel.is_empty());
    }

    #[test]
    fn proportional_rows() {
        let q = Field::rationals();
        let m = FieldMatrix::from_ints(&q, &[&[1, 2], &[2, 4]]);
        let rk = matrix_rank_kernel(&m);
        assert_eq!(rk.rank, 1);
        assert_eq!(rk.kernel, vec![vec![q.from_int(-2), q.from_int(1)]]);
    }

    #[test]
    fn bareiss_matches_gauss_jordan_over_function_field() {
        let q = Field::rationals();
        let qt = Field::rational_functions(&q, "t").unwrap();
        let t = qt.generator().unwrap();
        let one = qt.one();
        let rows = vec![
            vec![&t - &one, t.clone(), one.clone()],
            vec![(&t - &one) * &t, &t * &t, t.clone()],
            vec![one.clone(), one.clone() / &t, &t + &one],
        ];
        let m = FieldMatrix::from_rows(&qt, 3, rows);
        assert_eq!(m.rref(), m.rref_gauss_jordan());
        assert_eq!(m.rank(), 2);
    }
}
