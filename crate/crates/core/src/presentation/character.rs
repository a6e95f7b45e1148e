//! Characters `Γ → K*` and their kernels in the abelianization.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::abelian::{abelianize, Abelianization};
use super::fox::eval_word;
use super::{GroupPresentation, Word};
use crate::algebra::field::{Field, FieldDescriptor, FieldElement};
use crate::algebra::integer::{integer_kernel, smith_normal_form, IntegerMatrix};
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

/// Largest finite field handled by discrete logarithms.
const DLOG_FIELD_LIMIT: u64 = 1_000_000;
/// Largest root-of-unity order searched in number fields.
const ROOT_OF_UNITY_LIMIT: u64 = 240;

/// A homomorphism to `K*`, given by generator images that satisfy every relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    presentation: Arc<GroupPresentation>,
    field: Field,
    images: Vec<FieldElement>,
}

impl Character {
    pub fn new(p: &GroupPresentation, field: &Field, images: Vec<FieldElement>) -> Result<Self> {
        Character::new_shared(Arc::new(p.clone()), field, images)
    }

    pub fn new_shared(
        p: Arc<GroupPresentation>,
        field: &Field,
        images: Vec<FieldElement>,
    ) -> Result<Self> {
        if images.len() != p.ngens() {
            return Err(Error::InvalidInput(format!(
                "{} images for {} generators",
                images.len(),
                p.ngens()
            )));
        }
        for (g, x) in p.generators().iter().zip(&images) {
            if x.field() != field {
                return Err(Error::FieldMismatch(x.field().to_string(), field.to_string()));
            }
            if x.is_zero() {
                return Err(Error::ZeroImage(g.clone()));
            }
        }
        for (i, r) in p.relators().iter().enumerate() {
            let v = eval_word(field, &images, r);
            if !v.is_one() {
                return Err(Error::InvalidCharacter {
                    relator: i + 1,
                    value: v.to_string(),
                });
            }
        }
        Ok(Character {
            presentation: p,
            field: field.clone(),
            images,
        })
    }

    pub fn trivial(p: &GroupPresentation, field: &Field) -> Character {
        Character {
            presentation: Arc::new(p.clone()),
            field: field.clone(),
            images: vec![field.one(); p.ngens()],
        }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn shared_presentation(&self) -> &Arc<GroupPresentation> {
        &self.presentation
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    pub fn image(&self, gen: usize) -> &FieldElement {
        &self.images[gen]
    }

    pub fn evaluate(&self, w: &Word) -> FieldElement {
        eval_word(&self.field, &self.images, w)
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|x| x.is_one())
    }

    /// Value on an element of the abelianization given in its coordinates.
    pub fn evaluate_coords(&self, ab: &Abelianization, e: &[BigInt]) -> FieldElement {
        let values = ab.coordinate_values(&self.images);
        values
            .iter()
            .zip(e)
            .fold(self.field.one(), |acc, (c, k)| {
                acc * c.pow(k.to_i64().expect("small exponent"))
            })
    }
}

/// Builds a character from `(generator name, image)` pairs covering every
/// generator exactly once.
pub fn make_character(
    p: &GroupPresentation,
    field: &Field,
    images: &[(String, FieldElement)],
) -> Result<Character> {
    let mut slots: Vec<Option<FieldElement>> = vec![None; p.ngens()];
    for (name, x) in images {
        let i = p
            .generator_index(name)
            .ok_or_else(|| Error::UndeclaredGenerator(name.clone()))?;
        if slots[i].is_some() {
            return Err(Error::InvalidInput(format!("generator `{}` assigned twice", name)));
        }
        slots[i] = Some(x.clone());
    }
    let mut out = Vec::with_capacity(p.ngens());
    for (i, s) in slots.into_iter().enumerate() {
        out.push(s.ok_or_else(|| {
            Error::InvalidInput(format!("no image for generator `{}`", p.generators()[i]))
        })?);
    }
    Character::new(p, field, out)
}

/// Sublattice of the abelianization `Z^r ⊕ ⊕ Z/d_i`, given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLattice {
    /// `0` on free coordinates, `d_i` on torsion coordinates.
    pub moduli: Vec<BigInt>,
    /// Nonzero generators, torsion entries reduced.
    pub generators: Vec<Vec<BigInt>>,
}

impl KernelLattice {
    /// Membership of a coordinate vector.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let n = self.moduli.len();
        let mut cols: Vec<Vec<BigInt>> = self.generators.clone();
        for (i, m) in self.moduli.iter().enumerate() {
            if !m.is_zero() {
                let mut e = vec![BigInt::zero(); n];
                e[i] = m.clone();
                cols.push(e);
            }
        }
        if cols.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        // solve A x = v with A = cols as columns: U A V = D
        let a = IntegerMatrix::from_rows(
            cols.len(),
            (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect(),
        );
        let snf = smith_normal_form(&a);
        let uv = snf.u.mul_vec(v);
        uv.iter().enumerate().all(|(i, x)| {
            let d = if i < snf.d.cols() { snf.d.get(i, i).clone() } else { BigInt::zero() };
            if d.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(&d)
            }
        })
    }

    /// Whether every generator maps to 1 under `chi`, i.e. the lattice lies
    /// in the kernel of `chi`.
    pub fn is_killed_by(&self, chi: &Character, ab: &Abelianization) -> bool {
        self.generators
            .iter()
            .all(|e| chi.evaluate_coords(ab, e).is_one())
    }

    pub fn is_everything(&self) -> bool {
        (0..self.moduli.len()).all(|i| {
            let mut e = vec![BigInt::zero(); self.moduli.len()];
            e[i] = BigInt::one();
            self.contains(&e)
        })
    }
}

/// Kernel of `chi` on the abelianization, as a lattice in its coordinates.
pub fn multiplicative_kernel(chi: &Character) -> Result<KernelLattice> {
    let ab = abelianize(chi.presentation());
    let moduli = ab.moduli();
    let k = ab.ncoords();
    let values = ab.coordinate_values(chi.images());
    let logs = log_vectors(chi.field(), &values)?;
    let nlog = logs.moduli.len();
    // Σ_i e_i A_i ≡ 0 (mod N) per log coordinate, slack columns for the moduli
    let slack: Vec<usize> = (0..nlog).filter(|&l| !logs.moduli[l].is_zero()).collect();
    let cols = k + slack.len();
    let rows: Vec<Vec<BigInt>> = (0..nlog)
        .map(|l| {
            let mut row: Vec<BigInt> = (0..k).map(|i| logs.vectors[i][l].clone()).collect();
            row.extend(slack.iter().map(|&s| {
                if s == l {
                    -logs.moduli[l].clone()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let m = IntegerMatrix::from_rows(cols, rows);
    let mut generators: Vec<Vec<BigInt>> = Vec::new();
    for v in integer_kernel(&m) {
        let e = ab.normalize(&v[..k]);
        if e.iter().any(|x| !x.is_zero()) && !generators.contains(&e) {
            generators.push(e);
        }
    }
    generators.sort();
    Ok(KernelLattice { moduli, generators })
}

/// Additive coordinates of multiplicative values: `c_i ↦ A_i` with
/// `Π c_i^{e_i} = 1` iff `Σ e_i A_i ≡ 0` modulo `moduli` (0 = free).
struct Logs {
    moduli: Vec<BigInt>,
    vectors: Vec<Vec<BigInt>>,
}

fn log_vectors(field: &Field, values: &[FieldElement]) -> Result<Logs> {
    match field.descriptor() {
        FieldDescriptor::PrimeField(_) => finite_logs(field, values),
        FieldDescriptor::Extension { base, .. } if base.is_finite() => finite_logs(field, values),
        FieldDescriptor::Rationals | FieldDescriptor::Extension { .. } => {
            number_field_logs(field, values)
        }
        FieldDescriptor::RationalFunctions { base, .. } => function_field_logs(base, values),
    }
}

fn finite_logs(field: &Field, values: &[FieldElement]) -> Result<Logs> {
    let q = field
        .order()
        .and_then(|q| q.to_u64())
        .filter(|&q| q <= DLOG_FIELD_LIMIT)
        .ok_or_else(|| {
            Error::Unsupported(format!("discrete logarithms in {} (size above 10^6)", field))
        })?;
    let g = primitive_element(field);
    let vectors = values
        .iter()
        .map(|x| vec![BigInt::from(discrete_log(&g, x, q - 1))])
        .collect();
    Ok(Logs {
        moduli: vec![BigInt::from(q - 1)],
        vectors,
    })
}

/// Least element of multiplicative order `q - 1` in canonical order.
pub(crate) fn primitive_element(field: &Field) -> FieldElement {
    let elems = field.elements(DLOG_FIELD_LIMIT).expect("small finite field");
    elems
        .into_iter()
        .find(|x| {
            !x.is_zero() && x.multiplicative_order() == field.order().and_then(|q| q.to_u64()).map(|q| q - 1)
        })
        .expect("cyclic unit group")
}

/// `k` with `g^k = x` for `g` of order `n`, by baby-step giant-step.
fn discrete_log(g: &FieldElement, x: &FieldElement, n: u64) -> u64 {
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut table = std::collections::HashMap::new();
    let mut cur = g.field().one();
    for j in 0..m {
        table.entry(cur.clone()).or_insert(j);
        cur = &cur * g;
    }
    let giant = g.pow(-(m as i64));
    let mut y = x.clone();
    for i in 0..=m {
        if let Some(&j) = table.get(&y) {
            return (i * m + j) % n;
        }
        y = &y * &giant;
    }
    panic!("{} is not a power of the primitive element", x)
}

/// Splits values in `Q` or a number field into a positive rational and a
/// root of unity; anything else is unsupported.
fn number_field_logs(field: &Field, values: &[FieldElement]) -> Result<Logs> {
    let mut rationals = Vec::with_capacity(values.len());
    let mut roots = Vec::with_capacity(values.len());
    for x in values {
        let base = if field.descriptor() == &FieldDescriptor::Rationals {
            Some(x.clone())
        } else {
            x.to_base()
        };
        match base {
            Some(r) => {
                let r = r.as_rational().unwrap().clone();
                let sign = if r.is_negative() { -field.one() } else { field.one() };
                rationals.push(r.abs());
                roots.push(sign);
            }
            None => {
                if root_of_unity_order(x).is_none() {
                    return Err(Error::Unsupported(format!(
                        "multiplicative relations of {} in {}",
                        x, field
                    )));
                }
                rationals.push(num_rational::BigRational::one());
                roots.push(x.clone());
            }
        }
    }
    // coprime base of all numerators and denominators
    let mut ints: Vec<BigInt> = Vec::new();
    for r in &rationals {
        ints.push(r.numer().clone());
        ints.push(r.denom().clone());
    }
    let base = coprime_base(ints, |a, b| a.gcd(b), |a| a.is_one(), |a, b| a / b);
    let mut vectors: Vec<Vec<BigInt>> = rationals
        .iter()
        .map(|r| {
            base.iter()
                .map(|b| {
                    BigInt::from(multiplicity(r.numer(), b) as i64)
                        - BigInt::from(multiplicity(r.denom(), b) as i64)
                })
                .collect()
        })
        .collect();
    let mut moduli = vec![BigInt::zero(); base.len()];
    append_cyclic_logs(&roots, &mut vectors, &mut moduli);
    Ok(Logs { moduli, vectors })
}

fn multiplicity(n: &BigInt, b: &BigInt) -> u64 {
    let mut n = n.clone();
    let mut k = 0;
    while n.is_multiple_of(b) && !n.is_zero() {
        n /= b;
        k += 1;
    }
    k
}

fn root_of_unity_order(x: &FieldElement) -> Option<u64> {
    let mut y = x.clone();
    for n in 1..=ROOT_OF_UNITY_LIMIT {
        if y.is_one() {
            return Some(n);
        }
        y = &y * x;
    }
    None
}

/// Appends one coordinate modulo `L`: the discrete log of each root of
/// unity with respect to a generator of the cyclic group they generate.
fn append_cyclic_logs(roots: &[FieldElement], vectors: &mut [Vec<BigInt>], moduli: &mut Vec<BigInt>) {
    let orders: Vec<u64> = roots
        .iter()
        .map(|z| root_of_unity_order(z).expect("root of unity"))
        .collect();
    let l = orders.iter().fold(1u64, |a, &o| a.lcm(&o));
    if l == 1 {
        return;
    }
    // the generated group is cyclic of order l; walk it to find a generator
    let field = roots[0].field().clone();
    let mut group = vec![field.one()];
    let mut frontier = vec![field.one()];
    while let Some(x) = frontier.pop() {
        for z in roots {
            let y = &x * z;
            if !group.contains(&y) {
                group.push(y.clone());
                frontier.push(y);
            }
        }
    }
    group.sort();
    let g = group
        .into_iter()
        .find(|x| root_of_unity_order(x) == Some(l))
        .expect("cyclic group has a generator");
    let powers: Vec<FieldElement> = (0..l).map(|k| g.pow(k as i64)).collect();
    for (v, z) in vectors.iter_mut().zip(roots) {
        let k = powers.iter().position(|p| p == z).expect("in the cyclic group");
        v.push(BigInt::from(k));
    }
    moduli.push(BigInt::from(l));
}

/// Values in `k(t)`: exponents over a coprime base of monic polynomials,
/// followed by the logs of the leading coefficients in `k`.
fn function_field_logs(base: &Field, values: &[FieldElement]) -> Result<Logs> {
    let mut polys: Vec<UniPoly> = Vec::new();
    let mut units = Vec::with_capacity(values.len());
    for x in values {
        let (n, d) = x.as_fraction().expect("function field element");
        units.push(n.leading().unwrap().clone());
        polys.push(n.monic());
        polys.push(d.clone());
    }
    let pbase = coprime_base(
        polys,
        |a, b| a.gcd(b),
        |a| a.degree() == Some(0),
        |a, b| a.exact_div(b),
    );
    let mut vectors: Vec<Vec<BigInt>> = values
        .iter()
        .map(|x| {
            let (n, d) = x.as_fraction().unwrap();
            pbase
                .iter()
                .map(|b| {
                    BigInt::from(poly_multiplicity(n, b) as i64)
                        - BigInt::from(poly_multiplicity(d, b) as i64)
                })
                .collect()
        })
        .collect();
    let mut moduli = vec![BigInt::zero(); pbase.len()];
    let unit_logs = log_vectors(base, &units)?;
    for (v, u) in vectors.iter_mut().zip(unit_logs.vectors) {
        v.extend(u);
    }
    moduli.extend(unit_logs.moduli);
    Ok(Logs { moduli, vectors })
}

fn poly_multiplicity(f: &UniPoly, b: &UniPoly) -> u64 {
    let mut f = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = f.divrem(b);
        if !r.is_zero() {
            return k;
        }
        f = q;
        k += 1;
    }
}

/// Pairwise coprime nonunits whose products give every input up to units.
fn coprime_base<T: Clone + PartialEq + Ord>(
    items: Vec<T>,
    gcd: impl Fn(&T, &T) -> T,
    is_unit: impl Fn(&T) -> bool,
    div: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let mut set: Vec<T> = items.into_iter().filter(|x| !is_unit(x)).collect();
    'outer: loop {
        set.sort();
        set.dedup();
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = gcd(&set[i], &set[j]);
                if !is_unit(&g) {
                    let a = div(&set[i], &g);
                    let b = div(&set[j], &g);
                    let mut next: Vec<T> = set
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, x)| x.clone())
                        .collect();
                    next.extend([g, a, b].into_iter().filter(|x| !is_unit(x)));
                    set = next;
                    continue 'outer;
                }
            }
        }
        return set;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_field;

    fn z2() -> GroupPresentation {
        GroupPresentation::parse("gens a b\nrel [a,b]").unwrap()
    }

    #[test]
    fn bs12_characters() {
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        let q = Field::rationals();
        let ok = make_character(&p, &q, &[("t".into(), q.from_int(2)), ("a".into(), q.one())]);
        assert!(ok.is_ok());
        let bad = make_character(&p, &q, &[("t".into(), q.from_int(3)), ("a".into(), q.from_int(2))]);
        assert_eq!(
            bad,
            Err(Error::InvalidCharacter {
                relator: 1,
                value: "1/2".into()
            })
        );
        let zero = make_character(&p, &q, &[("t".into(), q.zero()), ("a".into(), q.one())]);
        assert_eq!(zero, Err(Error::ZeroImage("t".into())));
    }

    #[test]
    fn kernel_of_independent_values_is_trivial() {
        let q = Field::rationals();
        let chi = Character::new(&z2(), &q, vec![q.from_int(2), q.from_int(3)]).unwrap();
        let k = multiplicative_kernel(&chi).unwrap();
        assert!(k.generators.is_empty());
    }

    #[test]
    fn kernel_of_dependent_values() {
        let q = Field::rationals();
        let chi = Character::new(&z2(), &q, vec![q.from_int(2), q.from_int(4)]).unwrap();
        let k = multiplicative_kernel(&chi).unwrap();
        assert_eq!(k.generators.len(), 1);
        let v = &k.generators[0];
        let ab = abelianize(chi.presentation());
        assert!(chi.evaluate_coords(&ab, v).is_one());
        assert!(k.contains(&[BigInt::from(2), BigInt::from(-1)]) || k.contains(&[BigInt::from(-2), BigInt::from(1)]));
    }

    #[test]
    fn trivial_character_kernel_is_everything() {
        let q = Field::rationals();
        let chi = Character::trivial(&z2(), &q);
        assert!(multiplicative_kernel(&chi).unwrap().is_everything());
    }

    #[test]
    fn finite_field_kernel_matches_enumeration() {
        let f7 = Field::prime(7).unwrap();
        let chi = Character::new(&z2(), &f7, vec![f7.from_int(2), f7.from_int(3)]).unwrap();
        let k = multiplicative_kernel(&chi).unwrap();
        let ab = abelianize(chi.presentation());
        for a in -6..6i64 {
            for b in -6..6i64 {
                let e = [BigInt::from(a), BigInt::from(b)];
                assert_eq!(k.contains(&e), chi.evaluate_coords(&ab, &e).is_one(), "{:?}", e);
            }
        }
    }

    #[test]
    fn function_field_kernel() {
        let qt = parse_field("Q(t)").unwrap();
        let t = qt.generator().unwrap();
        let chi = Character::new(&z2(), &qt, vec![t.clone(), -(&t * &t)]).unwrap();
        let k = multiplicative_kernel(&chi).unwrap();
        // (2, -1) evaluates to -1, so only its even multiples vanish
        assert!(k.contains(&[BigInt::from(4), BigInt::from(-2)]));
        assert!(!k.contains(&[BigInt::from(2), BigInt::from(-1)]));
    }

    #[test]
    fn roots_of_unity_in_number_field() {
        let k = parse_field("Q[w]/(w^2 + w + 1)").unwrap();
        let w = k.generator().unwrap();
        let chi = Character::new(&z2(), &k, vec![w.clone(), k.from_int(-1)]).unwrap();
        let lat = multiplicative_kernel(&chi).unwrap();
        assert!(lat.contains(&[BigInt::from(3), BigInt::zero()]));
        assert!(lat.contains(&[BigInt::zero(), BigInt::from(2)]));
        assert!(!lat.contains(&[BigInt::one(), BigInt::zero()]));
        let bad = Character::new(&z2(), &k, vec![&w + &k.one() + k.one(), k.one()]).unwrap();
        assert!(matches!(multiplicative_kernel(&bad), Err(Error::Unsupported(_))));
    }
}
