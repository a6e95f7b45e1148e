//! Discrete valuations: `p`-adic on `Q`, `π`-adic and degree valuations on
//! `k(t)`, with canonical representatives modulo powers of the uniformizer.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::factor::is_irreducible;
use crate::algebra::field::{is_prime_u64, Field, FieldDescriptor, FieldElement};
use crate::algebra::parse::parse_poly;
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ValuationKind {
    /// `v_p` on `Q`.
    PAdic(u64),
    /// Order of vanishing along a monic irreducible `π` on `k(t)`.
    PiAdic(UniPoly),
    /// `deg(den) - deg(num)` on `k(t)`, uniformizer `1/t`.
    Degree,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteValuation {
    field: Field,
    kind: ValuationKind,
    uniformizer: FieldElement,
}

/// A field together with a valuation and the size of its residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedField {
    pub field: Field,
    pub valuation: DiscreteValuation,
    /// `None` for an infinite residue field.
    pub residue_size: Option<BigUint>,
}

impl DiscreteValuation {
    pub fn p_adic(p: u64) -> Result<DiscreteValuation> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{} is not prime", p)));
        }
        let q = Field::rationals();
        Ok(DiscreteValuation {
            uniformizer: q.from_int(p as i64),
            field: q,
            kind: ValuationKind::PAdic(p),
        })
    }

    pub fn pi_adic(field: &Field, pi: &UniPoly) -> Result<DiscreteValuation> {
        let base = function_field_base(field)?;
        if pi.field() != base {
            return Err(Error::FieldMismatch(pi.field().to_string(), base.to_string()));
        }
        if pi.degree().unwrap_or(0) == 0 || !is_irreducible(pi)? {
            return Err(Error::InvalidInput(format!(
                "uniformizer {} is not irreducible over {}",
                pi.display_in(field.variable().unwrap()),
                base
            )));
        }
        let pi = pi.monic();
        Ok(DiscreteValuation {
            uniformizer: field.from_poly(&pi),
            field: field.clone(),
            kind: ValuationKind::PiAdic(pi),
        })
    }

    pub fn degree(field: &Field) -> Result<DiscreteValuation> {
        function_field_base(field)?;
        Ok(DiscreteValuation {
            uniformizer: field.generator().unwrap().inv(),
            field: field.clone(),
            kind: ValuationKind::Degree,
        })
    }

    /// Parses `p:<prime>`, `pi:<poly>` or `deg` on the given field.
    pub fn parse(field: &Field, text: &str) -> Result<DiscreteValuation> {
        let text = text.trim();
        if let Some(p) = text.strip_prefix("p:") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::parse(1, 3, "expected a prime after `p:`"))?;
            if field.descriptor() != &FieldDescriptor::Rationals {
                return Err(Error::Unsupported(format!("p-adic valuation on {}", field)));
            }
            return DiscreteValuation::p_adic(p);
        }
        if let Some(body) = text.strip_prefix("pi:") {
            let base = function_field_base(field)?;
            let pi = parse_poly(base, field.variable().unwrap(), body)?;
            return DiscreteValuation::pi_adic(field, &pi);
        }
        if text == "deg" {
            return DiscreteValuation::degree(field);
        }
        Err(Error::parse(1, 1, "expected `p:<prime>`, `pi:<poly>` or `deg`"))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn uniformizer(&self) -> &FieldElement {
        &self.uniformizer
    }

    /// `π^k` for any integer `k`.
    pub fn uniformizer_pow(&self, k: i64) -> FieldElement {
        self.uniformizer.pow(k)
    }

    /// Residue field size; `None` when infinite.
    pub fn residue_field_size(&self) -> Option<BigUint> {
        match &self.kind {
            ValuationKind::PAdic(p) => Some(BigUint::from(*p)),
            ValuationKind::PiAdic(pi) => {
                let q = self.field.base()?.order()?;
                Some(num_traits::pow(q, pi.degree().unwrap()))
            }
            ValuationKind::Degree => self.field.base()?.order(),
        }
    }

    pub fn valued_field(&self) -> ValuedField {
        ValuedField {
            field: self.field.clone(),
            valuation: self.clone(),
            residue_size: self.residue_field_size(),
        }
    }

    fn check(&self, x: &FieldElement) -> Result<()> {
        if x.field() != &self.field {
            Err(Error::FieldMismatch(x.field().to_string(), self.field.to_string()))
        } else {
            Ok(())
        }
    }

    /// `v(x)`, with `None` standing for `+∞` at `x = 0`.
    pub fn valuate(&self, x: &FieldElement) -> Result<Option<i64>> {
        self.check(x)?;
        if x.is_zero() {
            return Ok(None);
        }
        Ok(Some(match &self.kind {
            ValuationKind::PAdic(p) => {
                let r = x.as_rational().unwrap();
                int_val(r.numer(), *p) - int_val(r.denom(), *p)
            }
            ValuationKind::PiAdic(pi) => {
                let (n, d) = x.as_fraction().unwrap();
                poly_val(n, pi) - poly_val(d, pi)
            }
            ValuationKind::Degree => {
                let (n, d) = x.as_fraction().unwrap();
                d.degree().unwrap() as i64 - n.degree().unwrap() as i64
            }
        }))
    }

    /// `v(x)` for a nonzero element; panics at zero.
    pub fn val(&self, x: &FieldElement) -> i64 {
        self.valuate(x)
            .expect("field mismatch")
            .expect("valuation of zero")
    }

    /// Canonical representative of `u` modulo `π^n O_v`: zero when
    /// `v(u) >= n`, otherwise `π^k · r` with `k = v(u)` and `r` the least
    /// lift of the unit part modulo `π^(n-k)`.
    pub fn reduce_mod_power(&self, u: &FieldElement, n: i64) -> Result<FieldElement> {
        self.check(u)?;
        let Some(k) = self.valuate(u)? else {
            return Ok(u.clone());
        };
        if k >= n {
            return Ok(self.field.zero());
        }
        let m = (n - k) as usize;
        Ok(match &self.kind {
            ValuationKind::PAdic(p) => {
                let unit = u * &self.uniformizer_pow(-k);
                let r = unit.as_rational().unwrap();
                let modulus = num_traits::pow(BigInt::from(*p), m);
                let inv = r.denom().extended_gcd(&modulus).x;
                let lift = (r.numer() * inv).mod_floor(&modulus);
                self.field.from_bigint(&lift) * self.uniformizer_pow(k)
            }
            ValuationKind::PiAdic(pi) => {
                let unit = u * &self.uniformizer_pow(-k);
                let (num, den) = unit.as_fraction().unwrap();
                let r = unit_mod(num, den, &pi.pow(m));
                self.field.from_poly(&r) * self.uniformizer_pow(k)
            }
            ValuationKind::Degree => {
                // in s = 1/t: u = s^k · rev(num)(s) / rev(den)(s)
                let (num, den) = u.as_fraction().unwrap();
                let s_m = UniPoly::x(num.field()).pow(m);
                let r = unit_mod(&reverse(num), &reverse(den), &s_m);
                let t = self.field.generator().unwrap();
                r.coeffs()
                    .iter()
                    .enumerate()
                    .fold(self.field.zero(), |acc, (i, c)| {
                        acc + self.field.lift_base(c).unwrap() * t.pow(-(k + i as i64))
                    })
            }
        })
    }

    /// Representatives of the residue field in `O_v`, in canonical order;
    /// `None` when the residue field is infinite or larger than `limit`.
    pub fn residue_representatives(&self, limit: u64) -> Option<Vec<FieldElement>> {
        match &self.kind {
            ValuationKind::PAdic(p) => {
                (*p <= limit).then(|| (0..*p).map(|i| self.field.from_int(i as i64)).collect())
            }
            ValuationKind::PiAdic(pi) => {
                let base = self.field.base()?;
                let elems = base.elements(limit)?;
                let d = pi.degree().unwrap();
                let q = elems.len() as u64;
                let total = q.checked_pow(d as u32)?;
                if total > limit {
                    return None;
                }
                Some(
                    (0..total)
                        .map(|mut idx| {
                            let coeffs = (0..d)
                                .map(|_| {
                                    let c = elems[(idx % q) as usize].clone();
                                    idx /= q;
                                    c
                                })
                                .collect();
                            self.field.from_poly(&UniPoly::new(base, coeffs))
                        })
                        .collect(),
                )
            }
            ValuationKind::Degree => {
                let base = self.field.base()?;
                Some(
                    base.elements(limit)?
                        .iter()
                        .map(|c| self.field.lift_base(c).unwrap())
                        .collect(),
                )
            }
        }
    }
}

impl fmt::Display for DiscreteValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ValuationKind::PAdic(p) => write!(f, "p:{}", p),
            ValuationKind::PiAdic(pi) => {
                write!(f, "pi:{}", pi.display_in(self.field.variable().unwrap()))
            }
            ValuationKind::Degree => write!(f, "deg"),
        }
    }
}

fn function_field_base(field: &Field) -> Result<&Field> {
    match field.descriptor() {
        FieldDescriptor::RationalFunctions { base, .. } => Ok(base),
        _ => Err(Error::Unsupported(format!(
            "polynomial valuations need a rational function field, got {}",
            field
        ))),
    }
}

fn int_val(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

fn poly_val(f: &UniPoly, pi: &UniPoly) -> i64 {
    let mut f = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = f.divrem(pi);
        if !r.is_zero() || f.is_zero() {
            return k;
        }
        f = q;
        k += 1;
    }
}

/// `num · den⁻¹ mod modulus` for `den` coprime to the modulus.
fn unit_mod(num: &UniPoly, den: &UniPoly, modulus: &UniPoly) -> UniPoly {
    let (g, s, _) = den.xgcd(modulus);
    debug_assert!(g.is_one());
    num.mul(&s).rem(modulus)
}

fn reverse(f: &UniPoly) -> UniPoly {
    let mut c = f.coeffs().to_vec();
    c.reverse();
    UniPoly::new(f.field(), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::{parse_element, parse_field};

    fn q(s: &str) -> FieldElement {
        parse_element(&Field::rationals(), s).unwrap()
    }

    #[test]
    fn two_adic_values() {
        let v = DiscreteValuation::p_adic(2).unwrap();
        assert_eq!(v.valuate(&q("12")).unwrap(), Some(2));
        assert_eq!(v.valuate(&q("5/8")).unwrap(), Some(-3));
        assert_eq!(v.valuate(&q("0")).unwrap(), None);
    }

    #[test]
    fn t_adic_value() {
        let qt = parse_field("Q(t)").unwrap();
        let v = DiscreteValuation::parse(&qt, "pi:t").unwrap();
        let x = parse_element(&qt, "t^3/(t+1)").unwrap();
        assert_eq!(v.valuate(&x).unwrap(), Some(3));
    }

    #[test]
    fn reduce_examples() {
        let v = DiscreteValuation::p_adic(2).unwrap();
        assert_eq!(v.reduce_mod_power(&q("5/3"), 3).unwrap(), q("7"));
        assert_eq!(v.reduce_mod_power(&q("8"), 3).unwrap(), q("0"));
        let qt = parse_field("Q(t)").unwrap();
        let vt = DiscreteValuation::parse(&qt, "pi:t").unwrap();
        let u = parse_element(&qt, "t^2 + t^5").unwrap();
        assert_eq!(
            vt.reduce_mod_power(&u, 3).unwrap(),
            parse_element(&qt, "t^2").unwrap()
        );
    }

    #[test]
    fn degree_valuation_reduction() {
        let f3t = parse_field("F3(t)").unwrap();
        let v = DiscreteValuation::degree(&f3t).unwrap();
        let u = parse_element(&f3t, "t + 1 + 1/t^2").unwrap();
        assert_eq!(v.valuate(&u).unwrap(), Some(-1));
        // modulo s^1 with s = 1/t keeps t + 1
        let r = v.reduce_mod_power(&u, 1).unwrap();
        assert_eq!(r, parse_element(&f3t, "t + 1").unwrap());
        assert!(v.val(&(&u - &r)) >= 1);
    }

    #[test]
    fn residue_sizes() {
        assert_eq!(
            DiscreteValuation::p_adic(5).unwrap().residue_field_size(),
            Some(BigUint::from(5u32))
        );
        let f3t = parse_field("F3(t)").unwrap();
        let v = DiscreteValuation::parse(&f3t, "pi:t^2+1").unwrap();
        assert_eq!(v.residue_field_size(), Some(BigUint::from(9u32)));
        assert_eq!(v.residue_representatives(100).unwrap().len(), 9);
        let qt = parse_field("Q(t)").unwrap();
        assert_eq!(DiscreteValuation::parse(&qt, "pi:t").unwrap().residue_field_size(), None);
    }

    #[test]
    fn reducible_uniformizer_rejected() {
        let qt = parse_field("Q(t)").unwrap();
        assert!(DiscreteValuation::parse(&qt, "pi:t^2-1").is_err());
    }
}
