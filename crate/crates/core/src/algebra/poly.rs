//! Dense univariate polynomials over any [`Field`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use super::field::{Field, FieldElement};

/// Coefficients in ascending order, no trailing zeros; the empty list is the
/// zero polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        let field = c.field().clone();
        UniPoly::new(&field, vec![c])
    }

    pub fn x(field: &Field) -> UniPoly {
        UniPoly::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElement, k: usize) -> UniPoly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        UniPoly::new(&field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        UniPoly::new(&self.field, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero(&self.field);
        }
        UniPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly::new(&self.field, coeffs)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut result = UniPoly::one(&self.field);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Euclidean division; panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(&self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (
            UniPoly::new(&self.field, quot),
            UniPoly::new(&self.field, rem),
        )
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        if self.degree() < divisor.degree() {
            return self.clone();
        }
        self.divrem(divisor).1
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv()),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn xgcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(f), UniPoly::zero(f));
        let (mut t0, mut t1) = (UniPoly::zero(f), UniPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.inv();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            _ => (r0, s0, t0),
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_int(i as i64))
            .collect();
        UniPoly::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &BigUint, modulus: &UniPoly) -> UniPoly {
        let mut result = UniPoly::one(&self.field).rem(modulus);
        let mut base = self.rem(modulus);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = result.mul(&base).rem(modulus);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(modulus);
            }
        }
        result
    }

    /// Maps every coefficient through `f` into polynomials over `target`.
    pub fn map_coeffs(
        &self,
        target: &Field,
        f: impl Fn(&FieldElement) -> FieldElement,
    ) -> UniPoly {
        UniPoly::new(target, self.coeffs.iter().map(f).collect())
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

fn needs_parens(s: &str) -> bool {
    s.trim_start_matches('-').contains(['+', '-', ' ', '('])
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = &self.poly.coeffs;
        if coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let negative = s.starts_with('-') && !needs_parens(&s);
            if negative {
                s.remove(0);
            }
            if needs_parens(&s) {
                s = format!("({})", s);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            if i == 0 {
                write!(f, "{}", s)?;
            } else if s == "1" {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", s, mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let q = Field::rationals();
        let f = UniPoly::from_ints(&q, &[1, 0, -3, 2, 5]);
        let g = UniPoly::from_ints(&q, &[2, 0, 3]);
        let (quot, rem) = f.divrem(&g);
        assert_eq!(quot.mul(&g).add(&rem), f);
        assert!(rem.degree() < g.degree());
    }

    #[test]
    fn xgcd_bezout() {
        let f7 = Field::prime(7).unwrap();
        let a = UniPoly::from_ints(&f7, &[1, 2, 1]);
        let b = UniPoly::from_ints(&f7, &[3, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_one());
    }

    #[test]
    fn display_is_readable() {
        let q = Field::rationals();
        let f = UniPoly::from_ints(&q, &[-1, -1, 1]);
        assert_eq!(f.display_in("x").to_string(), "x^2 - x - 1");
        let g = UniPoly::from_ints(&q, &[0, 2]);
        assert_eq!(g.display_in("t").to_string(), "2*t");
    }
}
