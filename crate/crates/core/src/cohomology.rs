//! Twisted first cohomology `H¹(Γ, χ)` by exact linear algebra.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::algebra::factor::roots;
use crate::algebra::field::{Field, FieldElement};
use crate::algebra::matrix::FieldMatrix;
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};
use crate::presentation::{abelianize, fox_row, Character, GroupPresentation, Word};

/// Largest number of characters enumerated over a finite field.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Entry `(j, i)` is `χ(∂R_j/∂x_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoxMatrix {
    pub character: Character,
    pub matrix: FieldMatrix,
}

/// Values of a 1-cocycle on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    character: Character,
    values: Vec<FieldElement>,
}

impl Cocycle {
    /// Checks the cocycle law on every relator with the affine-matrix oracle.
    pub fn new(character: &Character, values: Vec<FieldElement>) -> Result<Cocycle> {
        let p = character.presentation();
        if values.len() != p.ngens() {
            return Err(Error::InvalidInput(format!(
                "{} cocycle values for {} generators",
                values.len(),
                p.ngens()
            )));
        }
        if let Some(x) = values.iter().find(|x| x.field() != character.field()) {
            return Err(Error::FieldMismatch(
                x.field().to_string(),
                character.field().to_string(),
            ));
        }
        let theta = Cocycle {
            character: character.clone(),
            values,
        };
        for (j, r) in p.relators().iter().enumerate() {
            let v = verify_cocycle_oracle(&theta, r);
            if !v.is_zero() {
                return Err(Error::InvalidCocycle {
                    relator: j + 1,
                    value: v.to_string(),
                });
            }
        }
        Ok(theta)
    }

    /// The coboundary `g ↦ μ(χ(g) − 1)`.
    pub fn coboundary(character: &Character, mu: &FieldElement) -> Cocycle {
        let values = character
            .images()
            .iter()
            .map(|x| mu * &(x - &character.field().one()))
            .collect();
        Cocycle {
            character: character.clone(),
            values,
        }
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn value(&self, gen: usize) -> &FieldElement {
        &self.values[gen]
    }

    /// `θ(w)` via the cocycle law.
    pub fn evaluate(&self, w: &Word) -> FieldElement {
        verify_cocycle_oracle(self, w)
    }

    pub fn scale(&self, c: &FieldElement) -> Cocycle {
        Cocycle {
            character: self.character.clone(),
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle {
            character: self.character.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        named_values(self.character.presentation(), &self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Report {
    pub character: Character,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    /// Cocycles whose classes form a basis of `H¹`.
    pub basis: Vec<Cocycle>,
    pub exceptional: bool,
    pub trivial_character: bool,
}

impl H1Report {
    pub fn to_json(&self) -> Value {
        json!({
            "character": named_values(self.character.presentation(), self.character.images()),
            "dimZ1": self.dim_z1,
            "dimB1": self.dim_b1,
            "dimH1": self.dim_h1,
            "basis": self.basis.iter().map(Cocycle::to_json).collect::<Vec<_>>(),
            "exceptional": self.exceptional,
            "trivialCharacter": self.trivial_character,
        })
    }
}

pub fn named_values(p: &GroupPresentation, values: &[FieldElement]) -> Value {
    let mut m = Map::new();
    for (g, x) in p.generators().iter().zip(values) {
        m.insert(g.clone(), x.to_json());
    }
    Value::Object(m)
}

pub fn fox_matrix_at(chi: &Character) -> FoxMatrix {
    let p = chi.presentation();
    let rows = p
        .relators()
        .iter()
        .map(|r| fox_row(chi.field(), chi.images(), r))
        .collect();
    FoxMatrix {
        character: chi.clone(),
        matrix: FieldMatrix::from_rows(chi.field(), p.ngens(), rows),
    }
}

pub fn h1(chi: &Character) -> H1Report {
    let fox = fox_matrix_at(chi);
    let z1 = fox.matrix.kernel();
    let trivial = chi.is_trivial();
    let dim_b1 = usize::from(!trivial);
    let field = chi.field();
    let n = chi.presentation().ngens();

    // extend the coboundary direction greedily by kernel vectors
    let mut chosen: Vec<Vec<FieldElement>> = Vec::new();
    if !trivial {
        chosen.push(Cocycle::coboundary(chi, &field.one()).values);
    }
    let mut basis = Vec::new();
    for v in z1.iter() {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if FieldMatrix::from_rows(field, n, trial.clone()).rank() == trial.len() {
            chosen = trial;
            basis.push(Cocycle {
                character: chi.clone(),
                values: v.clone(),
            });
        }
    }
    let dim_z1 = z1.len();
    let dim_h1 = dim_z1 - dim_b1;
    debug_assert_eq!(basis.len(), dim_h1);
    H1Report {
        character: chi.clone(),
        dim_z1,
        dim_b1,
        dim_h1,
        basis,
        exceptional: dim_h1 > 0,
        trivial_character: trivial,
    }
}

/// `μ` with `θ(x) = μ(χ(x) − 1)` on every generator, when one exists.
pub fn is_coboundary(theta: &Cocycle) -> Option<FieldElement> {
    let chi = theta.character();
    let one = chi.field().one();
    let mut mu: Option<FieldElement> = None;
    for (x, t) in chi.images().iter().zip(theta.values()) {
        let d = x - &one;
        if d.is_zero() {
            if !t.is_zero() {
                return None;
            }
        } else {
            let m = t / &d;
            match &mu {
                Some(prev) if *prev != m => return None,
                _ => mu = Some(m),
            }
        }
    }
    Some(mu.unwrap_or_else(|| chi.field().zero()))
}

/// Upper-right entry of the product of the matrices `[[χ(x), θ(x)], [0, 1]]`
/// along `w`.
pub fn verify_cocycle_oracle(theta: &Cocycle, w: &Word) -> FieldElement {
    let chi = theta.character();
    let field = chi.field();
    let mut acc = Affine2::identity(field);
    for l in w.letters() {
        let g = Affine2::new(chi.image(l.gen).clone(), theta.value(l.gen).clone(), field);
        let g = if l.exp == 1 { g } else { g.inverse() };
        acc = acc.mul(&g);
    }
    debug_assert!(acc.c.is_zero() && acc.d.is_one());
    acc.b
}

/// Full 2×2 matrix, multiplied without exploiting the affine shape.
#[derive(Clone)]
struct Affine2 {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
}

impl Affine2 {
    fn identity(field: &Field) -> Affine2 {
        Affine2 {
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
        }
    }

    fn new(a: FieldElement, b: FieldElement, field: &Field) -> Affine2 {
        Affine2 {
            a,
            b,
            c: field.zero(),
            d: field.one(),
        }
    }

    fn mul(&self, o: &Affine2) -> Affine2 {
        Affine2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    fn inverse(&self) -> Affine2 {
        let det = &self.a * &self.d - &self.b * &self.c;
        let inv = det.inv();
        Affine2 {
            a: &self.d * &inv,
            b: -(&self.b * &inv),
            c: -(&self.c * &inv),
            d: &self.a * &inv,
        }
    }
}

/// `dim H¹` from the linear system whose columns are the oracle's values on
/// the unit cocycle candidates, reduced by Gauss–Jordan.
pub fn direct_h1_dimension(chi: &Character) -> usize {
    let p = chi.presentation();
    let field = chi.field();
    let n = p.ngens();
    let units: Vec<Cocycle> = (0..n)
        .map(|i| Cocycle {
            character: chi.clone(),
            values: (0..n)
                .map(|k| if k == i { field.one() } else { field.zero() })
                .collect(),
        })
        .collect();
    let rows = p
        .relators()
        .iter()
        .map(|r| units.iter().map(|e| verify_cocycle_oracle(e, r)).collect())
        .collect();
    let m = FieldMatrix::from_rows(field, n, rows);
    let rank = m.rref_gauss_jordan().pivots.len();
    n - rank - usize::from(!chi.is_trivial())
}

/// Every character of `p` into the finite field, in lexicographic order of
/// generator images.
pub fn enumerate_characters_finite(p: &GroupPresentation, field: &Field) -> Result<Vec<Character>> {
    let q = field
        .order()
        .and_then(|q| q.to_u64())
        .ok_or_else(|| Error::Precondition(format!("{} is not a small finite field", field)))?;
    let ab = abelianize(p);
    // candidate values per abelianization coordinate
    let units: Vec<FieldElement> = field
        .elements(ENUMERATION_BUDGET + 1)
        .ok_or_else(|| Error::BudgetExceeded(format!("field of size {}", q)))?
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let mut choices: Vec<Vec<FieldElement>> = Vec::new();
    for _ in 0..ab.free_rank {
        choices.push(units.clone());
    }
    for d in &ab.torsion {
        let d = d.to_usize().ok_or_else(|| Error::BudgetExceeded("torsion order".into()))?;
        let f = UniPoly::monomial(field.one(), d).sub(&UniPoly::one(field));
        choices.push(roots(&f)?);
    }
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= ENUMERATION_BUDGET)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "more than {} characters over {}",
                ENUMERATION_BUDGET, field
            ))
        })?;
    let shared = std::sync::Arc::new(p.clone());
    let mut chars: Vec<Character> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut coords = Vec::with_capacity(choices.len());
            for c in choices.iter().rev() {
                let k = c.len() as u64;
                coords.push(c[(idx % k) as usize].clone());
                idx /= k;
            }
            coords.reverse();
            let images = if coords.is_empty() {
                vec![field.one(); p.ngens()]
            } else {
                ab.generator_images(&coords)
            };
            Character::new_shared(shared.clone(), field, images)
        })
        .collect::<Result<Vec<_>>>()?;
    chars.sort_by(|a, b| a.images().cmp(b.images()));
    Ok(chars)
}

/// Characters with `H¹ ≠ 0`, each with its report, in lexicographic order.
pub fn enumerate_exceptional_finite(p: &GroupPresentation, field: &Field) -> Result<Vec<H1Report>> {
    let chars = enumerate_characters_finite(p, field)?;
    Ok(chars
        .par_iter()
        .map(h1)
        .filter(|r| r.exceptional)
        .collect())
}

/// `dim H¹(Γ, 1) = dim Hom(Γ, K⁺)`, read off the abelianization.
pub fn trivial_h1_from_abelianization(p: &GroupPresentation, field: &Field) -> usize {
    let ab = abelianize(p);
    let c = BigInt::from(field.characteristic());
    let torsion = if c.is_zero() {
        0
    } else {
        ab.torsion.iter().filter(|d| (*d % &c).is_zero()).count()
    };
    ab.free_rank + torsion
}

impl FoxMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.matrix
                .to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(FieldElement::to_json).collect()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_field;
    use crate::presentation::make_character;

    fn bs12() -> GroupPresentation {
        GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap()
    }

    fn genus2() -> GroupPresentation {
        GroupPresentation::parse("gens a1 b1 a2 b2\nrel [a1,b1] [a2,b2]").unwrap()
    }

    fn chi(p: &GroupPresentation, f: &Field, v: &[(&str, FieldElement)]) -> Character {
        let v: Vec<(String, FieldElement)> = v.iter().map(|(n, x)| (n.to_string(), x.clone())).collect();
        make_character(p, f, &v).unwrap()
    }

    #[test]
    fn bs12_fox_matrix_is_symbolic() {
        let qs = parse_field("Q(s)").unwrap();
        let s = qs.generator().unwrap();
        let c = chi(&bs12(), &qs, &[("a", qs.one()), ("t", s.clone())]);
        let m = fox_matrix_at(&c).matrix;
        assert_eq!(*m.get(0, 0), &s - &qs.from_int(2));
        assert!(m.get(0, 1).is_zero());
    }

    #[test]
    fn power_relator_is_geometric_sum() {
        let p = GroupPresentation::parse("gens x\nrel x^5").unwrap();
        let f11 = Field::prime(11).unwrap();
        // 3 has order 5 mod 11
        let c = chi(&p, &f11, &[("x", f11.from_int(3))]);
        assert!(fox_matrix_at(&c).matrix.get(0, 0).is_zero());
        let t = Character::trivial(&p, &f11);
        assert_eq!(*fox_matrix_at(&t).matrix.get(0, 0), f11.from_int(5));
    }

    #[test]
    fn bs12_dimensions() {
        let q = Field::rationals();
        for (t, d) in [(2, 1), (3, 0), (5, 0), (-1, 0)] {
            let c = chi(&bs12(), &q, &[("a", q.one()), ("t", q.from_int(t))]);
            assert_eq!(h1(&c).dim_h1, d, "t = {}", t);
        }
        assert_eq!(h1(&Character::trivial(&bs12(), &q)).dim_h1, 1);
    }

    #[test]
    fn genus2_dimensions() {
        let q = Field::rationals();
        let c = chi(
            &genus2(),
            &q,
            &[("a1", q.from_int(2)), ("b1", q.one()), ("a2", q.from_int(-3)), ("b2", q.one())],
        );
        assert_eq!(h1(&c).dim_h1, 2);
        assert_eq!(h1(&Character::trivial(&genus2(), &q)).dim_h1, 4);
    }

    #[test]
    fn coboundary_detection() {
        let q = Field::rationals();
        let c = chi(&bs12(), &q, &[("a", q.one()), ("t", q.from_int(2))]);
        let theta = Cocycle::new(&c, vec![q.one(), q.zero()]).unwrap();
        assert_eq!(is_coboundary(&theta), None);
        assert_eq!(verify_cocycle_oracle(&theta, &c.presentation().relators()[0]), q.zero());
        let b = Cocycle::coboundary(&c, &q.one());
        assert_eq!(is_coboundary(&b), Some(q.one()));
        let zero = Cocycle::new(&c, vec![q.zero(), q.zero()]).unwrap();
        assert_eq!(is_coboundary(&zero), Some(q.zero()));
    }

    #[test]
    fn invalid_cocycle_is_rejected() {
        let q = Field::rationals();
        let c = chi(&bs12(), &q, &[("a", q.one()), ("t", q.from_int(3))]);
        assert!(matches!(
            Cocycle::new(&c, vec![q.one(), q.zero()]),
            Err(Error::InvalidCocycle { relator: 1, .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let f5 = Field::prime(5).unwrap();
        let ex = enumerate_exceptional_finite(&bs12(), &f5).unwrap();
        let t_values: Vec<FieldElement> = ex.iter().map(|r| r.character.image(1).clone()).collect();
        assert_eq!(t_values, vec![f5.one(), f5.from_int(2)]);

        let f2 = Field::prime(2).unwrap();
        let ex = enumerate_exceptional_finite(&bs12(), &f2).unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex[0].trivial_character);

        let f3 = Field::prime(3).unwrap();
        let free = GroupPresentation::free_group(&["a", "b"]);
        let ex = enumerate_exceptional_finite(&free, &f3).unwrap();
        assert_eq!(ex.len(), 4);
        for r in ex {
            assert_eq!(r.dim_h1, if r.trivial_character { 2 } else { 1 });
        }
    }

    #[test]
    fn direct_system_agrees() {
        let f5 = Field::prime(5).unwrap();
        for c in enumerate_characters_finite(&genus2(), &f5).unwrap() {
            assert_eq!(direct_h1_dimension(&c), h1(&c).dim_h1);
        }
    }

    #[test]
    fn trivial_character_matches_abelianization() {
        let p = GroupPresentation::parse("gens a b x y\nrel x^2\nrel y^2\nrel [a,b] x y").unwrap();
        for f in [Field::rationals(), Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
            let r = h1(&Character::trivial(&p, &f));
            assert_eq!(r.dim_h1, trivial_h1_from_abelianization(&p, &f), "{}", f);
        }
    }
}
