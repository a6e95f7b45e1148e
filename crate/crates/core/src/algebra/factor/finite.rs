//! Distinct-degree and equal-degree splitting over finite fields.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::field::{Field, FieldElement};
use crate::algebra::poly::UniPoly;
use crate::error::Result;

/// Random splitting attempts before switching to the exhaustive search.
const RANDOM_TRIES: usize = 64;

/// Monic irreducible factors of a monic squarefree polynomial.
pub(super) fn factor_squarefree(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let field = f.field().clone();
    let q = field.order().expect("finite field");
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, &q) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ d as u64);
        equal_degree(&g, d, &q, &field, &mut rng, &mut out);
    }
    Ok(out)
}

fn distinct_degree(f: &UniPoly, q: &BigUint) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let x = UniPoly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(q, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

fn equal_degree(
    f: &UniPoly,
    d: usize,
    q: &BigUint,
    field: &Field,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<UniPoly>,
) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let elems = small_elements(field);
    for attempt in 0.. {
        let a = if attempt < RANDOM_TRIES {
            random_poly(field, n, rng)
        } else {
            match exhaustive_candidate(field, n, attempt - RANDOM_TRIES, &elems) {
                Some(a) => a,
                None => panic!("no splitting polynomial for {:?}", f),
            }
        };
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        if let Some(g) = split_with(f, &a, d, q) {
            let h = f.exact_div(&g);
            equal_degree(&g, d, q, field, rng, out);
            equal_degree(&h, d, q, field, rng, out);
            return;
        }
    }
}

fn split_with(f: &UniPoly, a: &UniPoly, d: usize, q: &BigUint) -> Option<UniPoly> {
    let field = f.field();
    let b = if q.bit(0) {
        // odd q: a^((q^d - 1)/2) - 1
        let e = (num_traits::pow(q.clone(), d) - BigUint::one()) >> 1;
        a.pow_mod(&e, f).sub(&UniPoly::one(field))
    } else {
        // characteristic 2: trace map a + a^2 + ... + a^(2^(k d - 1))
        let k = q.bits() as usize - 1;
        let mut acc = a.rem(f);
        let mut term = acc.clone();
        for _ in 1..k * d {
            term = term.mul(&term).rem(f);
            acc = acc.add(&term);
        }
        acc
    };
    let g = f.gcd(&b);
    let deg = g.degree().unwrap_or(0);
    if deg > 0 && deg < f.degree().unwrap() {
        Some(g)
    } else {
        None
    }
}

fn small_elements(field: &Field) -> Vec<FieldElement> {
    field.elements(1 << 16).unwrap_or_default()
}

fn random_element(field: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    match field.modulus() {
        None => {
            let p = field.characteristic();
            field.from_int(rng.gen_range(0..p) as i64)
        }
        Some(m) => {
            let base = field.base().unwrap();
            let d = m.degree().unwrap();
            let coeffs = (0..d).map(|_| random_element(base, rng)).collect();
            field.from_poly(&UniPoly::new(base, coeffs))
        }
    }
}

fn random_poly(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    let coeffs = (0..n).map(|_| random_element(field, rng)).collect();
    UniPoly::new(field, coeffs)
}

/// The `index`-th polynomial of degree below `n` in a fixed enumeration.
fn exhaustive_candidate(
    field: &Field,
    n: usize,
    index: usize,
    elems: &[FieldElement],
) -> Option<UniPoly> {
    let q = elems.len();
    let total = q.checked_pow(n as u32)?;
    if index >= total || q == 0 {
        return None;
    }
    let mut rest = index;
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        coeffs.push(elems[rest % q].clone());
        rest /= q;
    }
    Some(UniPoly::new(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_product_of_linears_mod_7() {
        let f7 = Field::prime(7).unwrap();
        let mut f = UniPoly::one(&f7);
        for r in [1, 2, 4] {
            f = f.mul(&UniPoly::from_ints(&f7, &[-r, 1]));
        }
        let mut factors = factor_squarefree(&f).unwrap();
        factors.sort();
        assert_eq!(factors.len(), 3);
    }

    #[test]
    fn ddf_separates_degrees() {
        let f3 = Field::prime(3).unwrap();
        // (x^2 + 1)(x + 1) over F3
        let f = UniPoly::from_ints(&f3, &[1, 0, 1]).mul(&UniPoly::from_ints(&f3, &[1, 1]));
        let q = f3.order().unwrap();
        let parts = distinct_degree(&f, &q);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].1, 1);
        assert_eq!(parts[1].1, 2);
    }
}
