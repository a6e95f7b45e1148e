//! Factorization over `Q`: modular factorization, Hensel lifting and
//! exhaustive recombination of the lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::finite;
use super::prime_field;
use crate::algebra::field::{is_prime_u64, reduce_bigint, Field};
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

/// Largest number of modular factors handed to subset recombination.
const MAX_MODULAR_FACTORS: usize = 20;

/// Dense integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ZPoly(pub Vec<BigInt>);

impl ZPoly {
    fn trim(mut self) -> ZPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly(out).trim()
    }

    fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        ZPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .trim()
    }

    fn add_scaled(&self, other: &ZPoly, m: &BigInt) -> ZPoly {
        let n = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        ZPoly(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + m * other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .trim()
    }

    fn scale(&self, c: &BigInt) -> ZPoly {
        ZPoly(self.0.iter().map(|a| a * c).collect()).trim()
    }

    fn reduce(&self, m: &BigInt) -> ZPoly {
        ZPoly(self.0.iter().map(|a| a.mod_floor(m)).collect()).trim()
    }

    /// Coefficients in `(-m/2, m/2]`.
    fn symmetric(&self, m: &BigInt) -> ZPoly {
        let half = m / 2;
        ZPoly(
            self.0
                .iter()
                .map(|a| {
                    let r = a.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
        .trim()
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive(&self) -> ZPoly {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let sign = if self.lc().is_negative() { -BigInt::one() } else { BigInt::one() };
        ZPoly(self.0.iter().map(|a| a / &c * &sign).collect())
    }

    /// Exact quotient over `Z`, if `divisor` divides `self`.
    fn div_exact(&self, divisor: &ZPoly) -> Option<ZPoly> {
        let dd = divisor.degree()?;
        let lc = divisor.lc();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return if rem.iter().all(|c| c.is_zero()) {
                Some(ZPoly(Vec::new()))
            } else {
                None
            };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let (c, r) = rem[k + dd].div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if rem[..dd].iter().all(|c| c.is_zero()) {
            Some(ZPoly(quot).trim())
        } else {
            None
        }
    }

    fn to_fp(&self, fp: &Field) -> UniPoly {
        UniPoly::new(fp, self.0.iter().map(|c| fp.from_bigint(c)).collect())
    }

    fn from_fp(f: &UniPoly) -> ZPoly {
        ZPoly(
            f.coeffs()
                .iter()
                .map(|c| BigInt::from(c.as_residue().expect("prime field")))
                .collect(),
        )
        .trim()
    }

    pub fn to_q(&self, q: &Field) -> UniPoly {
        UniPoly::new(q, self.0.iter().map(|c| q.from_bigint(c)).collect())
    }

    /// Primitive integer polynomial proportional to a polynomial over `Q`.
    pub fn from_q(f: &UniPoly) -> ZPoly {
        let rats: Vec<&BigRational> = f
            .coeffs()
            .iter()
            .map(|c| c.as_rational().expect("rational coefficients"))
            .collect();
        let lcm = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        ZPoly(
            rats.iter()
                .map(|r| (r.numer() * &lcm) / r.denom())
                .collect(),
        )
        .trim()
        .primitive()
    }
}

pub(super) fn factor_squarefree(f: &UniPoly) -> Result<Vec<UniPoly>> {
    let q = f.field().clone();
    if f.degree() == Some(1) {
        return Ok(vec![f.monic()]);
    }
    let zf = ZPoly::from_q(f);
    let factors = zassenhaus(&zf)?;
    Ok(factors.iter().map(|g| g.to_q(&q).monic()).collect())
}

fn modular_factors(f: &ZPoly, p: u64) -> Option<Vec<UniPoly>> {
    let fp = prime_field(p);
    if reduce_bigint(f.lc(), p) == 0 {
        return None;
    }
    let fbar = f.to_fp(&fp).monic();
    if fbar.gcd(&fbar.derivative()).degree() != Some(0) {
        return None;
    }
    finite::factor_squarefree(&fbar).ok()
}

fn zassenhaus(f: &ZPoly) -> Result<Vec<ZPoly>> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    // pick the prime with the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<UniPoly>)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 6 {
        if is_prime_u64(p) {
            if let Some(fac) = modular_factors(f, p) {
                tried += 1;
                if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
                    best = Some((p, fac));
                }
            }
        }
        p += 2;
    }
    let (p, modular) = best.expect("some prime is good");
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    if modular.len() > MAX_MODULAR_FACTORS {
        return Err(Error::BudgetExceeded(format!(
            "{} modular factors exceed the recombination limit",
            modular.len()
        )));
    }

    // coefficient bound for factors, scaled by the leading coefficient
    let norm1: BigInt = f.0.iter().map(|c| c.abs()).sum();
    let bound = f.lc().abs() * (BigInt::one() << n) * norm1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= &bound * 2 {
        modulus *= &pb;
        k += 1;
    }

    let mut remaining = hensel_lift(f, &modular, p, k);
    let mut current = f.clone();
    let mut result = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        for subset in combinations(remaining.len(), size) {
            let lc = current.lc().clone();
            let mut g = ZPoly(vec![lc]);
            for &i in &subset {
                g = g.mul(&remaining[i]).reduce(&modulus);
            }
            let g = g.symmetric(&modulus).primitive();
            if let Some(quot) = current.div_exact(&g) {
                found = Some((subset, g, quot));
                break;
            }
        }
        match found {
            Some((subset, g, quot)) => {
                result.push(g);
                current = quot.primitive();
                for i in subset.into_iter().rev() {
                    remaining.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if current.degree().unwrap_or(0) > 0 {
        result.push(current);
    }
    Ok(result)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lifts `f ≡ lc(f) · Π g_i (mod p)` to monic factors modulo `p^k`.
fn hensel_lift(f: &ZPoly, factors: &[UniPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), k as usize);
    let fp = prime_field(p);
    if factors.len() == 1 {
        let inv = f
            .lc()
            .extended_gcd(&modulus)
            .x
            .mod_floor(&modulus);
        return vec![f.scale(&inv).reduce(&modulus)];
    }
    let g = &factors[0];
    let mut h = UniPoly::constant(fp.from_bigint(f.lc()));
    for r in &factors[1..] {
        h = h.mul(r);
    }
    let (gl, hl) = lift_pair(f, g, &h, p, k);
    let mut out = vec![gl];
    out.extend(hensel_lift(&hl, &factors[1..], p, k));
    out
}

fn lift_pair(f: &ZPoly, g: &UniPoly, h: &UniPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let fp = g.field().clone();
    let pb = BigInt::from(p);
    let (one, s, t) = g.xgcd(h);
    debug_assert!(one.is_one());
    let mut gz = ZPoly::from_fp(g);
    let mut hz = ZPoly::from_fp(h);
    let mut m = pb.clone();
    for _ in 1..k {
        let diff = f.sub(&gz.mul(&hz));
        let e = ZPoly(diff.0.iter().map(|c| c / &m).collect()).trim().to_fp(&fp);
        let (qt, a) = e.mul(&t).divrem(g);
        let b = e.mul(&s).add(&qt.mul(h));
        gz = gz.add_scaled(&ZPoly::from_fp(&a), &m);
        hz = hz.add_scaled(&ZPoly::from_fp(&b), &m);
        m *= &pb;
        gz = gz.reduce(&m);
        hz = hz.reduce(&m);
    }
    (gz, hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4).len(), 1);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn hensel_lift_reconstructs_modulo() {
        // x^2 - 2 = (x - 3)(x + 3) mod 7
        let f = ZPoly(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()]);
        let fp = prime_field(7);
        let facs = vec![
            UniPoly::from_ints(&fp, &[-3, 1]),
            UniPoly::from_ints(&fp, &[3, 1]),
        ];
        let lifted = hensel_lift(&f, &facs, 7, 4);
        let m = BigInt::from(7u32.pow(4));
        let prod = lifted[0].mul(&lifted[1]);
        assert_eq!(prod.reduce(&m), f.reduce(&m));
    }
}
