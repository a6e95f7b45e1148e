//! Univariate factorization over `Q`, finite fields, and simple algebraic
//! extensions of `Q` of degree at most 4.

mod extension;
mod finite;
mod rational;

use super::field::{Field, FieldDescriptor, FieldElement};
use super::poly::UniPoly;
use crate::error::{Error, Result};


/// `unit · Π factor^multiplicity` with monic irreducible factors sorted by
/// degree, then coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

pub fn poly_factorize(f: &UniPoly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let field = f.field().clone();
    let unit = f.leading().unwrap().clone();
    if f.degree() == Some(0) {
        return Ok(Factorization {
            unit,
            factors: Vec::new(),
        });
    }
    let splitter: fn(&UniPoly) -> Result<Vec<UniPoly>> = match field.descriptor() {
        FieldDescriptor::PrimeField(_) => finite::factor_squarefree,
        FieldDescriptor::Extension { base, .. } if base.is_finite() => finite::factor_squarefree,
        FieldDescriptor::Rationals => rational::factor_squarefree,
        FieldDescriptor::Extension { .. } => extension::factor_squarefree,
        FieldDescriptor::RationalFunctions { .. } => {
            return Err(Error::Unsupported(format!(
                "factorization over the function field {}",
                field
            )))
        }
    };
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for g in splitter(&part)? {
            factors.push((g, mult));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Roots in the coefficient field (without multiplicity), sorted.
pub fn roots(f: &UniPoly) -> Result<Vec<FieldElement>> {
    let fact = poly_factorize(f)?;
    let mut out: Vec<FieldElement> = fact
        .factors
        .iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeff(0))
        .collect();
    out.sort();
    Ok(out)
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime
/// squarefree parts `s_i` with `f = Π s_i^i`.
pub fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let p = f.field().characteristic();
    let mut out = if p == 0 {
        yun(f)
    } else {
        squarefree_char_p(f, p)
    };
    out.retain(|(g, _)| g.degree().unwrap_or(0) > 0);
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

fn yun(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.exact_div(&b);
    let mut d = df.exact_div(&b).sub(&c.derivative());
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let a = c.gcd(&d);
        c = c.exact_div(&a);
        d = d.exact_div(&a).sub(&c.derivative());
        out.push((a, i));
        i += 1;
    }
    out
}

fn squarefree_char_p(f: &UniPoly, p: u64) -> Vec<(UniPoly, usize)> {
    let mut out: Vec<(UniPoly, usize)> = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        let root = pth_root_poly(f, p);
        for (g, m) in squarefree_char_p(&root, p) {
            out.push((g, m * p as usize));
        }
        return merge(out);
    }
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        out.push((z, i));
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root_poly(&c, p);
        for (g, m) in squarefree_char_p(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    merge(out)
}

fn merge(parts: Vec<(UniPoly, usize)>) -> Vec<(UniPoly, usize)> {
    // parts with equal multiplicity are coprime, so multiplying them is safe
    let mut merged: Vec<(UniPoly, usize)> = Vec::new();
    for (g, m) in parts {
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        match merged.iter_mut().find(|(_, mm)| *mm == m) {
            Some(entry) => entry.0 = entry.0.mul(&g),
            None => merged.push((g, m)),
        }
    }
    merged
}

/// `g` with `g(x)^p = f(x)` for `f` a polynomial in `x^p` over a perfect field.
fn pth_root_poly(f: &UniPoly, p: u64) -> UniPoly {
    let field = f.field();
    let exp = field
        .order()
        .map(|q| q / num_bigint::BigUint::from(p))
        .expect("perfect finite field");
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p as usize)
        .map(|c| c.pow_big(&exp))
        .collect();
    UniPoly::new(field, coeffs)
}

/// Whether `f` is irreducible over its coefficient field.
pub fn is_irreducible(f: &UniPoly) -> Result<bool> {
    Ok(poly_factorize(f)?.is_irreducible())
}

/// Field used internally for residues modulo a machine prime.
pub(crate) fn prime_field(p: u64) -> Field {
    Field::prime(p).expect("prime")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn difference_of_squares_over_q() {
        let f = UniPoly::from_ints(&q(), &[-1, 0, 1]);
        let fact = poly_factorize(&f).unwrap();
        assert_eq!(fact.factors.len(), 2);
        assert_eq!(fact.factors[0].0, UniPoly::from_ints(&q(), &[-1, 1]));
        assert_eq!(fact.factors[1].0, UniPoly::from_ints(&q(), &[1, 1]));
        assert_eq!(fact.expand(), f);
    }

    #[test]
    fn cyclotomic_three_irreducible_over_q() {
        let f = UniPoly::from_ints(&q(), &[1, 1, 1]);
        assert!(poly_factorize(&f).unwrap().is_irreducible());
    }

    #[test]
    fn t2_plus_1_irreducible_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let f = UniPoly::from_ints(&f3, &[1, 0, 1]);
        // exhaustive root check
        for a in 0..3 {
            assert!(!f.eval(&f3.from_int(a)).is_zero());
        }
        assert!(poly_factorize(&f).unwrap().is_irreducible());
    }

    #[test]
    fn repeated_factors_char_p() {
        let f2 = Field::prime(2).unwrap();
        // (x+1)^4 (x^2+x+1) = x^6 + x^5 + x^4 + ... expanded via product
        let a = UniPoly::from_ints(&f2, &[1, 1]).pow(4);
        let b = UniPoly::from_ints(&f2, &[1, 1, 1]);
        let f = a.mul(&b);
        let fact = poly_factorize(&f).unwrap();
        assert_eq!(fact.factors.len(), 2);
        assert_eq!(fact.factors[0], (UniPoly::from_ints(&f2, &[1, 1]), 4));
        assert_eq!(fact.factors[1], (b, 1));
    }

    #[test]
    fn x30_minus_1_over_q() {
        let mut c = vec![0i64; 31];
        c[0] = -1;
        c[30] = 1;
        let f = UniPoly::from_ints(&q(), &c);
        let fact = poly_factorize(&f).unwrap();
        // one cyclotomic factor per divisor of 30
        assert_eq!(fact.factors.len(), 8);
        assert_eq!(fact.expand(), f);
    }

    #[test]
    fn swinnerton_dyer_like_quartic() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits mod every prime
        let f = UniPoly::from_ints(&q(), &[1, 0, -10, 0, 1]);
        assert!(poly_factorize(&f).unwrap().is_irreducible());
    }

    #[test]
    fn rational_coefficients_and_unit() {
        let half = q().from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        let f = UniPoly::new(&q(), vec![q().from_int(-2), q().zero(), half.clone()]);
        let fact = poly_factorize(&f).unwrap();
        assert_eq!(fact.unit, half);
        assert_eq!(fact.expand(), f);
        assert_eq!(fact.factors.len(), 2);
    }

    #[test]
    fn factor_over_gaussian_rationals() {
        let i_field =
            Field::extension(&q(), &UniPoly::from_ints(&q(), &[1, 0, 1]), "i").unwrap();
        let f = UniPoly::from_ints(&i_field, &[1, 0, 1]);
        let fact = poly_factorize(&f).unwrap();
        assert_eq!(fact.factors.len(), 2);
        assert_eq!(fact.expand(), f);
        let r = roots(&f).unwrap();
        assert_eq!(r.len(), 2);
        for z in r {
            assert!(f.eval(&z).is_zero());
        }
    }

    #[test]
    fn factor_over_finite_extension() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::extension(&f2, &UniPoly::from_ints(&f2, &[1, 1, 1]), "w").unwrap();
        // x^3 - 1 splits completely over F4
        let f = UniPoly::from_ints(&f4, &[-1, 0, 0, 1]);
        let fact = poly_factorize(&f).unwrap();
        assert_eq!(fact.factors.len(), 3);
        assert!(fact.factors.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
    }

    #[test]
    fn reducible_modulus_rejected() {
        let r = Field::extension(&q(), &UniPoly::from_ints(&q(), &[-1, 0, 1]), "x");
        assert!(matches!(r, Err(Error::InvalidField(_))));
    }

    #[test]
    fn function_field_unsupported() {
        let qt = Field::rational_functions(&q(), "t").unwrap();
        let f = UniPoly::from_ints(&qt, &[1, 0, 1]);
        assert!(matches!(poly_factorize(&f), Err(Error::Unsupported(_))));
    }
}
