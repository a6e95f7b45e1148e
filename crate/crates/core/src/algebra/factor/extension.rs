//! Factorization over `Q[α]/(m)` by norms: shift until the norm down to `Q`
//! is squarefree, factor the norm, and pull factors back with gcds.

use super::rational;
use crate::algebra::field::Field;
#[cfg(test)]
use crate::algebra::field::FieldElement;
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

/// Largest extension degree handled by the norm determinant.
const MAX_DEGREE: usize = 4;

pub(super) fn factor_squarefree(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let k = f.field().clone();
    let m = k.modulus().expect("extension field").clone();
    let q = k.base().expect("extension field").clone();
    let d = m.degree().unwrap();
    if d > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "factorization over an extension of degree {} > {}",
            d, MAX_DEGREE
        )));
    }
    if f.degree() == Some(1) {
        return Ok(vec![f.monic()]);
    }
    let alpha = k.generator().unwrap();
    for s in shifts().take(64) {
        // g(y) = f(y - s α)
        let sa = alpha.clone() * k.from_int(s);
        let g = f.compose(&UniPoly::new(&k, vec![-sa.clone(), k.one()]));
        let norm = norm_to_base(&g, &q, &m);
        if norm.gcd(&norm.derivative()).degree() != Some(0) {
            continue;
        }
        let mut out = Vec::new();
        for ni in rational::factor_squarefree(&norm)? {
            let lifted = ni.map_coeffs(&k, |c| k.lift_base(c).expect("base element"));
            let h = g.gcd(&lifted);
            if h.degree().unwrap_or(0) == 0 {
                continue;
            }
            // undo the shift: h(y + s α)
            out.push(h.compose(&UniPoly::new(&k, vec![sa.clone(), k.one()])).monic());
        }
        return Ok(out);
    }
    Err(Error::BudgetExceeded("no shift gives a squarefree norm".into()))
}

/// `0, 1, -1, 2, -2, ...`
fn shifts() -> impl Iterator<Item = i64> {
    (0..).map(|i: i64| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}

/// Coordinates of `g` in the basis `1, α, ..., α^(d-1)` over `Q[y]`.
fn coordinates(g: &UniPoly, q: &Field, d: usize) -> Vec<UniPoly> {
    (0..d)
        .map(|i| {
            let coeffs = g
                .coeffs()
                .iter()
                .map(|c| c.as_poly().map(|p| p.coeff(i)).unwrap_or_else(|| q.zero()))
                .collect();
            UniPoly::new(q, coeffs)
        })
        .collect()
}

/// Multiplies a coordinate vector by `α`, reducing with the monic modulus.
fn times_alpha(v: &[UniPoly], m: &UniPoly) -> Vec<UniPoly> {
    let d = v.len();
    let top = v[d - 1].clone();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let prev = if i == 0 { UniPoly::zero(top.field()) } else { v[i - 1].clone() };
        out.push(prev.sub(&top.scale(&m.coeff(i))));
    }
    out
}

/// Norm of `g ∈ K[y]` down to `Q[y]`: determinant of multiplication by `g`.
fn norm_to_base(g: &UniPoly, q: &Field, m: &UniPoly) -> UniPoly {
    let d = m.degree().unwrap();
    let mut cols = Vec::with_capacity(d);
    let mut col = coordinates(g, q, d);
    for _ in 0..d {
        cols.push(col.clone());
        col = times_alpha(&col, m);
    }
    // rows[i][j] = cols[j][i]
    let mat: Vec<Vec<UniPoly>> = (0..d)
        .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
        .collect();
    laplace_det(&mat, q)
}

fn laplace_det(mat: &[Vec<UniPoly>], q: &Field) -> UniPoly {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = UniPoly::zero(q);
    for j in 0..n {
        if mat[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<UniPoly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = mat[0][j].mul(&laplace_det(&minor, q));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

#[cfg(test)]
fn element_norm(x: &FieldElement) -> FieldElement {
    let k = x.field();
    let q = k.base().unwrap();
    let g = UniPoly::constant(x.clone());
    norm_to_base(&g, q, k.modulus().unwrap()).coeff(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_sequence() {
        let s: Vec<i64> = shifts().take(5).collect();
        assert_eq!(s, vec![0, 1, -1, 2, -2]);
    }

    #[test]
    fn norm_of_gaussian_integer() {
        let q = Field::rationals();
        let k = Field::extension(&q, &UniPoly::from_ints(&q, &[1, 0, 1]), "i").unwrap();
        let x = k.generator().unwrap() + k.from_int(2);
        assert_eq!(element_norm(&x), q.from_int(5));
    }

    #[test]
    fn cube_root_of_two_field() {
        let q = Field::rationals();
        let k = Field::extension(&q, &UniPoly::from_ints(&q, &[-2, 0, 0, 1]), "a").unwrap();
        // y^3 - 2 = (y - a)(y^2 + a y + a^2)
        let f = UniPoly::from_ints(&k, &[-2, 0, 0, 1]);
        let mut fac = factor_squarefree(&f).unwrap();
        fac.sort();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].degree(), Some(1));
        assert_eq!(fac[0].mul(&fac[1]), f);
    }
}
