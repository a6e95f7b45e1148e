//! Exactly represented fields: the rationals, prime fields, simple algebraic
//! extensions of either, and rational function fields in one variable.
//!
//! Every element is kept in canonical form (reduced fractions, residues in
//! `[0, p)`, remainders modulo a monic modulus, coprime numerator and monic
//! denominator), so structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::poly_factorize;
use super::poly::UniPoly;
use crate::error::{Error, Result};

/// Shared handle to a field descriptor. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField(u64),
    /// `base[var]/(modulus)` with `modulus` monic and irreducible over `base`.
    Extension {
        base: Field,
        modulus: UniPoly,
        var: String,
    },
    /// `base(var)`.
    RationalFunctions { base: Field, var: String },
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField(p) => write!(f, "F{}", p),
            FieldDescriptor::Extension { base, modulus, var } => {
                write!(f, "{}[{}]/({})", base, var, modulus.display_in(var))
            }
            FieldDescriptor::RationalFunctions { base, var } => write!(f, "{}({})", base, var),
        }
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{} is not prime", p)));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Unsupported(format!("prime {} too large", p)));
        }
        Ok(Field(Arc::new(FieldDescriptor::PrimeField(p))))
    }

    /// Builds `base[var]/(modulus)`. The modulus is made monic and must be
    /// irreducible of degree at least 2; only single-step extensions of `Q`
    /// or a prime field are supported.
    pub fn extension(base: &Field, modulus: &UniPoly, var: &str) -> Result<Field> {
        if !matches!(
            base.descriptor(),
            FieldDescriptor::Rationals | FieldDescriptor::PrimeField(_)
        ) {
            return Err(Error::Unsupported(format!(
                "extensions are single-step over Q or F_p, got base {}",
                base
            )));
        }
        if modulus.field() != base {
            return Err(Error::FieldMismatch(
                modulus.field().to_string(),
                base.to_string(),
            ));
        }
        let deg = modulus.degree().unwrap_or(0);
        if modulus.is_zero() || deg < 2 {
            return Err(Error::InvalidField(
                "extension modulus must have degree at least 2".into(),
            ));
        }
        let modulus = modulus.monic();
        let fact = poly_factorize(&modulus)?;
        if fact.factors.len() != 1 || fact.factors[0].1 != 1 {
            return Err(Error::InvalidField(format!(
                "modulus {} is reducible over {}",
                modulus.display_in(var),
                base
            )));
        }
        Ok(Field(Arc::new(FieldDescriptor::Extension {
            base: base.clone(),
            modulus,
            var: var.to_string(),
        })))
    }

    pub fn rational_functions(base: &Field, var: &str) -> Result<Field> {
        if matches!(base.descriptor(), FieldDescriptor::RationalFunctions { .. }) {
            return Err(Error::Unsupported(
                "rational functions in more than one variable".into(),
            ));
        }
        Ok(Field(Arc::new(FieldDescriptor::RationalFunctions {
            base: base.clone(),
            var: var.to_string(),
        })))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::PrimeField(p) => *p,
            FieldDescriptor::Extension { base, .. } => base.characteristic(),
            FieldDescriptor::RationalFunctions { base, .. } => base.characteristic(),
        }
    }

    /// The field this one is built over, if any.
    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldDescriptor::Extension { base, .. }
            | FieldDescriptor::RationalFunctions { base, .. } => Some(base),
            _ => None,
        }
    }

    pub fn variable(&self) -> Option<&str> {
        match &*self.0 {
            FieldDescriptor::Extension { var, .. }
            | FieldDescriptor::RationalFunctions { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&UniPoly> {
        match &*self.0 {
            FieldDescriptor::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Degree over the prime field for finite and algebraic fields.
    pub fn absolute_degree(&self) -> Option<usize> {
        match &*self.0 {
            FieldDescriptor::Rationals | FieldDescriptor::PrimeField(_) => Some(1),
            FieldDescriptor::Extension { base, modulus, .. } => {
                Some(base.absolute_degree()? * modulus.degree().unwrap_or(0))
            }
            FieldDescriptor::RationalFunctions { .. } => None,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<BigUint> {
        match &*self.0 {
            FieldDescriptor::PrimeField(p) => Some(BigUint::from(*p)),
            FieldDescriptor::Extension { base, modulus, .. } => {
                let q = base.order()?;
                Some(num_traits::pow(q, modulus.degree().unwrap_or(0)))
            }
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> FieldElement {
        let repr = match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rat(BigRational::zero()),
            FieldDescriptor::PrimeField(_) => Repr::Mod(0),
            FieldDescriptor::Extension { base, .. } => Repr::Poly(UniPoly::zero(base)),
            FieldDescriptor::RationalFunctions { base, .. } => {
                Repr::Frac(UniPoly::zero(base), UniPoly::one(base))
            }
        };
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        let repr = match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rat(BigRational::from_integer(n.clone())),
            FieldDescriptor::PrimeField(p) => Repr::Mod(reduce_bigint(n, *p)),
            FieldDescriptor::Extension { base, .. } => {
                Repr::Poly(UniPoly::constant(base.from_bigint(n)))
            }
            FieldDescriptor::RationalFunctions { base, .. } => {
                Repr::Frac(UniPoly::constant(base.from_bigint(n)), UniPoly::one(base))
            }
        };
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    /// Image of a rational number; fails when the denominator vanishes in
    /// positive characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.checked_div(&den)
    }

    /// Embeds an element of the base field.
    pub fn lift_base(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() == self {
            return Ok(x.clone());
        }
        let repr = match &*self.0 {
            FieldDescriptor::Extension { base, .. } if base == x.field() => {
                Repr::Poly(UniPoly::constant(x.clone()))
            }
            FieldDescriptor::RationalFunctions { base, .. } if base == x.field() => {
                Repr::Frac(UniPoly::constant(x.clone()), UniPoly::one(base))
            }
            FieldDescriptor::RationalFunctions { base, .. } if base.base() == Some(x.field()) => {
                let inner = base.lift_base(x)?;
                return self.lift_base(&inner);
            }
            _ => {
                return Err(Error::FieldMismatch(
                    x.field().to_string(),
                    self.to_string(),
                ))
            }
        };
        Ok(FieldElement {
            field: self.clone(),
            repr,
        })
    }

    /// The adjoined generator of an extension or the variable of a rational
    /// function field.
    pub fn generator(&self) -> Option<FieldElement> {
        match &*self.0 {
            FieldDescriptor::Extension { base, .. } => {
                let x = UniPoly::x(base);
                Some(self.from_poly(&x))
            }
            FieldDescriptor::RationalFunctions { base, .. } => Some(FieldElement {
                field: self.clone(),
                repr: Repr::Frac(UniPoly::x(base), UniPoly::one(base)),
            }),
            _ => None,
        }
    }

    /// Class of a base-field polynomial in an extension, or the polynomial
    /// itself as a rational function.
    pub fn from_poly(&self, poly: &UniPoly) -> FieldElement {
        match &*self.0 {
            FieldDescriptor::Extension { modulus, .. } => FieldElement {
                field: self.clone(),
                repr: Repr::Poly(poly.rem(modulus)),
            },
            FieldDescriptor::RationalFunctions { base, .. } => FieldElement {
                field: self.clone(),
                repr: Repr::Frac(poly.clone(), UniPoly::one(base)),
            },
            _ => panic!("from_poly on a field without variable"),
        }
    }

    /// Builds `num/den` in a rational function field.
    pub fn fraction(&self, num: &UniPoly, den: &UniPoly) -> Result<FieldElement> {
        match &*self.0 {
            FieldDescriptor::RationalFunctions { .. } => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement {
                    field: self.clone(),
                    repr: normalize_frac(num.clone(), den.clone()),
                })
            }
            _ => Err(Error::InvalidField(format!("{} is not a function field", self))),
        }
    }

    /// All elements of a finite field in canonical order; `None` when the
    /// field is infinite or larger than `limit`.
    pub fn elements(&self, limit: u64) -> Option<Vec<FieldElement>> {
        let order = self.order()?.to_u64()?;
        if order > limit {
            return None;
        }
        match &*self.0 {
            FieldDescriptor::PrimeField(p) => Some(
                (0..*p)
                    .map(|r| FieldElement {
                        field: self.clone(),
                        repr: Repr::Mod(r),
                    })
                    .collect(),
            ),
            FieldDescriptor::Extension { base, modulus, .. } => {
                let base_elems = base.elements(limit)?;
                let d = modulus.degree().unwrap_or(0);
                let b = base_elems.len();
                let mut out = Vec::with_capacity(order as usize);
                for idx in 0..order as usize {
                    let mut rest = idx;
                    let mut coeffs = Vec::with_capacity(d);
                    for _ in 0..d {
                        coeffs.push(base_elems[rest % b].clone());
                        rest /= b;
                    }
                    out.push(FieldElement {
                        field: self.clone(),
                        repr: Repr::Poly(UniPoly::new(base, coeffs)),
                    });
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub(crate) fn prime_modulus(&self) -> Option<u64> {
        match &*self.0 {
            FieldDescriptor::PrimeField(p) => Some(*p),
            _ => None,
        }
    }
}

pub(crate) fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

/// Canonical payload of a field element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Repr {
    Rat(BigRational),
    Mod(u64),
    /// Remainder modulo the extension modulus, coefficients in the base.
    Poly(UniPoly),
    /// Coprime numerator and monic denominator over the base.
    Frac(UniPoly, UniPoly),
}

fn normalize_frac(num: UniPoly, den: UniPoly) -> Repr {
    let base = num.field().clone();
    if num.is_zero() {
        return Repr::Frac(num, UniPoly::one(&base));
    }
    let g = num.gcd(&den);
    let (mut n, mut d) = if g.degree() == Some(0) {
        (num, den)
    } else {
        (num.exact_div(&g), den.exact_div(&g))
    };
    let lc = d.leading().expect("nonzero denominator").clone();
    if !lc.is_one() {
        let inv = lc.inv();
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    Repr::Frac(n, d)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldOpResult {
    Element(FieldElement),
    Bool(bool),
}

/// Checked field arithmetic with descriptor and zero-divisor validation.
/// `b` is ignored for `Inv`.
pub fn field_ops(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldOpResult> {
    if op != FieldOp::Inv && a.field != b.field {
        return Err(Error::FieldMismatch(a.field.to_string(), b.field.to_string()));
    }
    Ok(match op {
        FieldOp::Add => FieldOpResult::Element(a + b),
        FieldOp::Sub => FieldOpResult::Element(a - b),
        FieldOp::Mul => FieldOpResult::Element(a * b),
        FieldOp::Div => FieldOpResult::Element(a.checked_div(b)?),
        FieldOp::Inv => FieldOpResult::Element(a.checked_inv()?),
        FieldOp::Eq => FieldOpResult::Bool(a == b),
    })
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_zero(),
            Repr::Mod(r) => *r == 0,
            Repr::Poly(p) => p.is_zero(),
            Repr::Frac(n, _) => n.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_one(),
            Repr::Mod(r) => *r == 1,
            Repr::Poly(p) => p.degree() == Some(0) && p.coeff(0).is_one(),
            Repr::Frac(n, d) => {
                d.degree() == Some(0) && n.degree() == Some(0) && n.coeff(0).is_one()
            }
        }
    }

    /// The rational value, when this is an element of `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Mod(r) => Some(*r),
            _ => None,
        }
    }

    /// Coefficient polynomial of an extension element.
    pub fn as_poly(&self) -> Option<&UniPoly> {
        match &self.repr {
            Repr::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_fraction(&self) -> Option<(&UniPoly, &UniPoly)> {
        match &self.repr {
            Repr::Frac(n, d) => Some((n, d)),
            _ => None,
        }
    }

    /// The element as a member of the base field, when it lies there.
    pub fn to_base(&self) -> Option<FieldElement> {
        match &self.repr {
            Repr::Poly(p) => match p.degree() {
                None => Some(p.field().zero()),
                Some(0) => Some(p.coeff(0).clone()),
                _ => None,
            },
            Repr::Frac(n, d) => {
                if d.degree() == Some(0) && n.degree().unwrap_or(0) == 0 {
                    Some(n.coeff(0).clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn same_field(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    fn with_repr(&self, repr: Repr) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self - other)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(q) => Repr::Rat(q.recip()),
            Repr::Mod(r) => {
                let p = self.field.prime_modulus().expect("prime field");
                Repr::Mod(mod_inv(*r, p).ok_or(Error::DivisionByZero)?)
            }
            Repr::Poly(a) => {
                let modulus = self.field.modulus().expect("extension");
                let (g, s, _) = a.xgcd(modulus);
                // g is a nonzero constant since the modulus is irreducible
                let ginv = g.coeff(0).inv();
                Repr::Poly(s.scale(&ginv).rem(modulus))
            }
            Repr::Frac(n, d) => normalize_frac(d.clone(), n.clone()),
        };
        Ok(self.with_repr(repr))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self * &other.checked_inv()?)
    }

    /// Panics on zero; use [`checked_inv`](Self::checked_inv) for untrusted input.
    pub fn inv(&self) -> FieldElement {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn pow(&self, e: i64) -> FieldElement {
        if e < 0 {
            return self.inv().pow_big(&BigUint::from(e.unsigned_abs()));
        }
        self.pow_big(&BigUint::from(e as u64))
    }

    pub fn pow_big(&self, e: &BigUint) -> FieldElement {
        let mut result = self.field.one();
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = &result * &base;
            }
            if i + 1 < bits {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative order for elements of a finite field.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let q = self.field.order()?.to_u64()?;
        let n = q - 1;
        let mut order = n;
        for (prime, _) in factor_u64(n) {
            while order % prime == 0 && self.pow((order / prime) as i64).is_one() {
                order /= prime;
            }
        }
        Some(order)
    }

    /// Canonical text form, readable by the field element parser.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Wire form: a decimal string in `Q` and `F_p`, the coefficient list
    /// (constant term first) in an extension, and `{num, den}` coefficient
    /// lists in a function field.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let coeffs = |p: &UniPoly| Value::Array(p.coeffs().iter().map(FieldElement::to_json).collect());
        match &self.repr {
            Repr::Rat(_) | Repr::Mod(_) => Value::String(self.to_string()),
            Repr::Poly(p) => coeffs(p),
            Repr::Frac(n, d) => json!({"num": coeffs(n), "den": coeffs(d)}),
        }
    }
}

/// Prime factorization of a machine integer by trial division.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, other: &FieldElement) -> FieldElement {
        self.same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Mod(a), Repr::Mod(b)) => {
                let p = self.field.prime_modulus().unwrap();
                Repr::Mod((a + b) % p)
            }
            (Repr::Poly(a), Repr::Poly(b)) => Repr::Poly(a.add(b)),
            (Repr::Frac(n1, d1), Repr::Frac(n2, d2)) => {
                if d1 == d2 {
                    normalize_frac(n1.add(n2), d1.clone())
                } else {
                    normalize_frac(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
                }
            }
            _ => unreachable!("representation mismatch"),
        };
        self.with_repr(repr)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, other: &FieldElement) -> FieldElement {
        self + &(-other)
    }
}

impl<'a> Neg for &'a FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Mod(a) => {
                let p = self.field.prime_modulus().unwrap();
                Repr::Mod((p - a) % p)
            }
            Repr::Poly(a) => Repr::Poly(a.neg()),
            Repr::Frac(n, d) => Repr::Frac(n.neg(), d.clone()),
        };
        self.with_repr(repr)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, other: &FieldElement) -> FieldElement {
        self.same_field(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Mod(a), Repr::Mod(b)) => {
                let p = self.field.prime_modulus().unwrap() as u128;
                Repr::Mod(((*a as u128 * *b as u128) % p) as u64)
            }
            (Repr::Poly(a), Repr::Poly(b)) => {
                let modulus = self.field.modulus().unwrap();
                Repr::Poly(a.mul(b).rem(modulus))
            }
            (Repr::Frac(n1, d1), Repr::Frac(n2, d2)) => {
                if n1.is_zero() || n2.is_zero() {
                    Repr::Frac(UniPoly::zero(n1.field()), UniPoly::one(n1.field()))
                } else {
                    normalize_frac(n1.mul(n2), d1.mul(d2))
                }
            }
            _ => unreachable!("representation mismatch"),
        };
        self.with_repr(repr)
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, other: &FieldElement) -> FieldElement {
        self * &other.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, other: FieldElement) -> FieldElement {
                (&self).$m(&other)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, other: &FieldElement) -> FieldElement {
                (&self).$m(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A fixed total order used only to make outputs deterministic.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Mod(a), Repr::Mod(b)) => a.cmp(b),
            (Repr::Poly(a), Repr::Poly(b)) => a.cmp(b),
            (Repr::Frac(n1, d1), Repr::Frac(n2, d2)) => d1.cmp(d2).then_with(|| n1.cmp(n2)),
            (a, b) => repr_rank(a).cmp(&repr_rank(b)),
        }
    }
}

fn repr_rank(r: &Repr) -> u8 {
    match r {
        Repr::Rat(_) => 0,
        Repr::Mod(_) => 1,
        Repr::Poly(_) => 2,
        Repr::Frac(..) => 3,
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Mod(r) => write!(f, "{}", r),
            Repr::Poly(p) => write!(f, "{}", p.display_in(self.field.variable().unwrap())),
            Repr::Frac(n, d) => {
                let var = self.field.variable().unwrap();
                if d.degree() == Some(0) {
                    write!(f, "{}", n.display_in(var))
                } else {
                    write!(f, "({})/({})", n.display_in(var), d.display_in(var))
                }
            }
        }
    }
}
