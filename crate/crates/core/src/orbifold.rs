//! Closed 2-orbifolds given by genus and cone orders: Euler characteristic,
//! orbifold fundamental group, its character group, the predicted shape of
//! the exceptional set, and a harness checking that prediction.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::factor::roots;
use crate::algebra::field::{Field, FieldDescriptor, FieldElement};
use crate::algebra::poly::UniPoly;
use crate::cohomology::{enumerate_characters_finite, h1, named_values, H1Report, ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::metabelian::{alexander_matrix, generically_exceptional, TorsionBranch};
use crate::presentation::{abelianize, Abelianization, Character, GroupPresentation, Word};

/// Free-part sample values used over infinite fields.
pub const SAMPLE_POOL: [i64; 4] = [2, 3, 5, 1];
/// Contradicting reports kept per cell.
pub const REPORT_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbifoldSignature {
    genus: u32,
    cones: Vec<u64>,
}

impl OrbifoldSignature {
    pub fn new(genus: u32, cones: Vec<u64>) -> Result<Self> {
        if let Some(m) = cones.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidInput(format!("cone order {} is below 2", m)));
        }
        Ok(OrbifoldSignature { genus, cones })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn cones(&self) -> &[u64] {
        &self.cones
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cones: Vec<String> = self.cones.iter().map(|m| m.to_string()).collect();
        write!(f, "({}, [{}])", self.genus, cones.join(","))
    }
}

/// `2 − 2g − Σ (1 − 1/m_i)`.
pub fn orbifold_euler_char(sig: &OrbifoldSignature) -> BigRational {
    let one = BigRational::one();
    sig.cones.iter().fold(
        BigRational::from_integer(BigInt::from(2) - BigInt::from(2 * sig.genus as u64)),
        |acc, &m| acc - (&one - BigRational::new(BigInt::one(), BigInt::from(m))),
    )
}

/// Strictly negative Euler characteristic.
pub fn is_hyperbolic(sig: &OrbifoldSignature) -> bool {
    orbifold_euler_char(sig).is_negative()
}

/// `⟨a_i, b_i, x_j | x_j^{m_j}, Π[a_i,b_i] · Π x_j⟩`; a single handle is
/// named `a, b` and a single cone point `x`.
pub fn orbifold_presentation(sig: &OrbifoldSignature) -> GroupPresentation {
    let g = sig.genus as usize;
    let n = sig.cones.len();
    let mut names = Vec::with_capacity(2 * g + n);
    for i in 1..=g {
        if g == 1 {
            names.extend(["a".to_string(), "b".to_string()]);
        } else {
            names.extend([format!("a{}", i), format!("b{}", i)]);
        }
    }
    for j in 1..=n {
        names.push(if n == 1 { "x".to_string() } else { format!("x{}", j) });
    }
    let mut relators: Vec<Word> = sig
        .cones
        .iter()
        .enumerate()
        .map(|(j, &m)| Word::gen_pow(2 * g + j, m as i64))
        .collect();
    let mut long = Word::identity();
    for i in 0..g {
        long = long.mul(&Word::commutator(&Word::gen_pow(2 * i, 1), &Word::gen_pow(2 * i + 1, 1)));
    }
    for j in 0..n {
        long = long.mul(&Word::gen_pow(2 * g + j, 1));
    }
    if !long.is_empty() {
        relators.push(long);
    }
    GroupPresentation::new(&format!("orbifold{}", sig), names, relators).expect("well-formed by construction")
}

/// `Hom(π, K*) = (K*)^{2g} × Φ` with `Φ` the characters of the torsion of
/// the abelianization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomStructure {
    pub field: Field,
    pub free_rank: usize,
    /// Orders of the cyclic factors of `Φ`, one per torsion invariant.
    pub phi_orders: Vec<u64>,
    /// Generators of `Φ` as characters trivial on the free part.
    pub phi_generators: Vec<Character>,
}

impl HomStructure {
    pub fn phi_order(&self) -> u64 {
        self.phi_orders.iter().product()
    }

    pub fn describe(&self) -> String {
        let phi: Vec<String> = self
            .phi_orders
            .iter()
            .filter(|&&d| d > 1)
            .map(|d| format!("Z/{}", d))
            .collect();
        let phi = if phi.is_empty() { "trivial".to_string() } else { phi.join(" x ") };
        format!("({}*)^{} x {}", self.field, self.free_rank, phi)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_string(),
            "freeRank": self.free_rank,
            "phi": self.phi_orders,
            "phiGenerators": self.phi_generators.iter()
                .map(|c| named_values(c.presentation(), c.images()))
                .collect::<Vec<_>>(),
            "description": self.describe(),
        })
    }
}

fn check_root_field(field: &Field) -> Result<()> {
    match field.descriptor() {
        FieldDescriptor::RationalFunctions { .. } => Err(Error::Unsupported(format!(
            "roots of unity in {} are not enumerated",
            field
        ))),
        _ => Ok(()),
    }
}

/// Roots of `x^d − 1` in `field`.
fn roots_of_unity(field: &Field, d: &BigInt) -> Result<Vec<FieldElement>> {
    let d = d
        .to_usize()
        .ok_or_else(|| Error::BudgetExceeded(format!("torsion order {}", d)))?;
    roots(&UniPoly::monomial(field.one(), d).sub(&UniPoly::one(field)))
}

fn images_from_coords(ab: &Abelianization, field: &Field, coords: &[FieldElement]) -> Vec<FieldElement> {
    if coords.is_empty() {
        vec![field.one(); ab.ngens]
    } else {
        ab.generator_images(coords)
    }
}

pub fn hom_group_structure(sig: &OrbifoldSignature, field: &Field) -> Result<HomStructure> {
    check_root_field(field)?;
    let p = std::sync::Arc::new(orbifold_presentation(sig));
    let ab = abelianize(&p);
    let mut phi_orders = Vec::new();
    let mut phi_generators = Vec::new();
    for (i, d) in ab.torsion.iter().enumerate() {
        let rs = roots_of_unity(field, d)?;
        let k = rs.len() as u64;
        phi_orders.push(k);
        // μ_d(K) is cyclic; a generator is a root of exact order k
        let z = rs
            .iter()
            .find(|z| (1..k).all(|j| !z.pow(j as i64).is_one()))
            .cloned()
            .expect("cyclic group has a generator");
        let mut coords = vec![field.one(); ab.ncoords()];
        coords[ab.free_rank + i] = z;
        phi_generators.push(Character::new_shared(p.clone(), field, images_from_coords(&ab, field, &coords))?);
    }
    Ok(HomStructure {
        field: field.clone(),
        free_rank: ab.free_rank,
        phi_orders,
        phi_generators,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    AllOfHom,
    FiniteTorsion,
    UnsupportedGenusZero,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AllOfHom => "all-of-Hom",
            Verdict::FiniteTorsion => "finite-torsion",
            Verdict::UnsupportedGenusZero => "unsupported-genus-zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Prediction {
    pub signature: OrbifoldSignature,
    pub verdict: Verdict,
    pub hom: HomStructure,
    pub rationale: Vec<&'static str>,
}

impl E1Prediction {
    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.signature.to_string(),
            "eulerCharacteristic": orbifold_euler_char(&self.signature).to_string(),
            "verdict": self.verdict.as_str(),
            "hom": self.hom.to_json(),
            "rationale": self.rationale,
        })
    }
}

pub fn predict_e1(sig: &OrbifoldSignature, field: &Field) -> Result<E1Prediction> {
    let chi = orbifold_euler_char(sig);
    if !chi.is_negative() {
        let shape = if chi.is_zero() { "euclidean" } else { "spherical" };
        return Err(Error::Precondition(format!(
            "signature {} has Euler characteristic {} ({}, not hyperbolic)",
            sig, chi, shape
        )));
    }
    let p = field.characteristic();
    let divisible = p > 0 && sig.cones.iter().any(|m| m % p == 0);
    let (verdict, rationale) = match sig.genus {
        0 => (Verdict::UnsupportedGenusZero, vec!["genus-zero"]),
        1 if divisible => (Verdict::AllOfHom, vec!["genus-one", "cone-order-divisible-by-characteristic"]),
        1 => (Verdict::FiniteTorsion, vec!["genus-one", "cone-orders-prime-to-characteristic"]),
        _ => (Verdict::AllOfHom, vec!["genus-at-least-two"]),
    };
    Ok(E1Prediction {
        signature: sig.clone(),
        verdict,
        hom: hom_group_structure(sig, field)?,
        rationale,
    })
}

/// Comparison of a prediction with direct cohomology on one field.
#[derive(Debug, Clone)]
pub struct CellReport {
    pub prediction: E1Prediction,
    pub sampled: bool,
    pub checked: usize,
    pub exceptional: usize,
    /// Exceptional characters all of whose values are roots of unity.
    pub torsion_exceptional: Vec<H1Report>,
    /// Torsion values whose whole free-part family is exceptional.
    pub generic_families: Vec<String>,
    pub contradictions: Vec<H1Report>,
    pub contradiction_count: usize,
    pub agrees: bool,
}

impl CellReport {
    pub fn to_json(&self) -> Value {
        json!({
            "signature": self.prediction.signature.to_string(),
            "field": self.prediction.hom.field.to_string(),
            "verdict": self.prediction.verdict.as_str(),
            "sampled": self.sampled,
            "checked": self.checked,
            "exceptional": self.exceptional,
            "torsionExceptional": self.torsion_exceptional.iter().map(H1Report::to_json).collect::<Vec<_>>(),
            "genericFamilies": self.generic_families,
            "contradictionCount": self.contradiction_count,
            "contradictions": self.contradictions.iter().map(H1Report::to_json).collect::<Vec<_>>(),
            "agrees": self.agrees,
        })
    }
}

/// Characters checked in a cell: all of them over a finite field, the
/// free part drawn from [`SAMPLE_POOL`] otherwise. Torsion is enumerated.
fn cell_characters(p: &GroupPresentation, field: &Field, budget: usize) -> Result<(bool, Vec<Character>)> {
    if field.is_finite() {
        let chars = enumerate_characters_finite(p, field)?;
        if chars.len() > budget {
            return Err(Error::BudgetExceeded(format!("{} characters over {}", chars.len(), field)));
        }
        return Ok((false, chars));
    }
    let ab = abelianize(p);
    let pool: Vec<FieldElement> = SAMPLE_POOL.iter().map(|&v| field.from_int(v)).collect();
    let mut choices: Vec<Vec<FieldElement>> = vec![pool; ab.free_rank];
    for d in &ab.torsion {
        choices.push(roots_of_unity(field, d)?);
    }
    let total = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .filter(|&t| t <= budget.min(ENUMERATION_BUDGET as usize))
        .ok_or_else(|| Error::BudgetExceeded(format!("more than {} samples", budget)))?;
    let shared = std::sync::Arc::new(p.clone());
    let chars = (0..total)
        .map(|mut idx| {
            let mut coords = Vec::with_capacity(choices.len());
            for c in choices.iter().rev() {
                coords.push(c[idx % c.len()].clone());
                idx /= c.len();
            }
            coords.reverse();
            Character::new_shared(shared.clone(), field, images_from_coords(&ab, field, &coords))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((true, chars))
}

fn is_torsion_value(x: &FieldElement) -> bool {
    x.field().is_finite() || (1..=24).any(|n| x.pow(n).is_one())
}

/// Checks one signature over one field. An all-of-Hom verdict is
/// contradicted by any non-exceptional character; a finite-torsion verdict
/// by an exceptional character with a non-torsion value, or by a torsion
/// value over which the free-part family is generically exceptional.
pub fn crosscheck_cell(sig: &OrbifoldSignature, field: &Field, budget: usize) -> Result<CellReport> {
    let prediction = predict_e1(sig, field)?;
    let p = orbifold_presentation(sig);
    let (sampled, chars) = cell_characters(&p, field, budget)?;
    let reports: Vec<H1Report> = chars.par_iter().map(h1).collect();

    let alex = alexander_matrix(&p, field.characteristic())?;
    let ab = alex.abelianization();
    let mut generic_families = Vec::new();
    let mut branches: Vec<Vec<FieldElement>> = vec![Vec::new()];
    for d in &ab.torsion {
        let rs = roots_of_unity(field, d)?;
        branches = branches
            .iter()
            .flat_map(|b| {
                rs.iter().map(move |r| {
                    let mut v = b.clone();
                    v.push(r.clone());
                    v
                })
            })
            .collect();
    }
    for values in branches {
        let branch = TorsionBranch {
            field: field.clone(),
            values,
        };
        if generically_exceptional(&alex, &branch)? {
            generic_families.push(branch.describe());
        }
    }

    let contradicts = |r: &H1Report| match prediction.verdict {
        Verdict::AllOfHom => !r.exceptional,
        Verdict::FiniteTorsion => r.exceptional && !r.character.images().iter().all(is_torsion_value),
        Verdict::UnsupportedGenusZero => false,
    };
    let mut contradictions: Vec<H1Report> = reports.iter().filter(|r| contradicts(r)).cloned().collect();
    let contradiction_count = contradictions.len();
    contradictions.truncate(REPORT_LIMIT);
    let torsion_exceptional: Vec<H1Report> = if field.is_finite() {
        Vec::new()
    } else {
        reports
            .iter()
            .filter(|r| r.exceptional && r.character.images().iter().all(is_torsion_value))
            .cloned()
            .collect()
    };
    let family_conflict = prediction.verdict == Verdict::FiniteTorsion && !generic_families.is_empty();
    Ok(CellReport {
        sampled,
        checked: reports.len(),
        exceptional: reports.iter().filter(|r| r.exceptional).count(),
        torsion_exceptional,
        agrees: contradiction_count == 0 && !family_conflict,
        generic_families,
        contradictions,
        contradiction_count,
        prediction,
    })
}

/// Cells in row-major order of `(signature, field)`.
pub fn crosscheck_grid(sigs: &[OrbifoldSignature], fields: &[Field], budget: usize) -> Result<Vec<CellReport>> {
    let cells: Vec<(&OrbifoldSignature, &Field)> =
        sigs.iter().flat_map(|s| fields.iter().map(move |f| (s, f))).collect();
    cells
        .into_par_iter()
        .map(|(s, f)| crosscheck_cell(s, f, budget))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::enumerate_characters_finite;

    fn sig(g: u32, cones: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(g, cones.to_vec()).unwrap()
    }

    #[test]
    fn euler_characteristics() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(orbifold_euler_char(&sig(0, &[2, 3, 7])), r(-1, 42));
        assert_eq!(orbifold_euler_char(&sig(1, &[2])), r(-1, 2));
        assert_eq!(orbifold_euler_char(&sig(0, &[2, 2])), r(1, 1));
        assert!(!is_hyperbolic(&sig(0, &[2, 2])));
        assert!(!is_hyperbolic(&sig(1, &[])));
        assert!(OrbifoldSignature::new(1, vec![1]).is_err());
    }

    #[test]
    fn presentations() {
        assert_eq!(orbifold_presentation(&sig(1, &[2])).to_text().lines().skip(1).collect::<Vec<_>>(), vec![
            "gens a b x",
            "rel x^2",
            "rel a b a^-1 b^-1 x"
        ]);
        let p = orbifold_presentation(&sig(0, &[2, 3, 7]));
        assert_eq!(p.generators(), &["x1", "x2", "x3"]);
        assert_eq!(p.relators().len(), 4);
        assert_eq!(orbifold_presentation(&sig(2, &[])).relators().len(), 1);
    }

    #[test]
    fn hom_structures() {
        let q = Field::rationals();
        let f3 = Field::prime(3).unwrap();
        let h = hom_group_structure(&sig(1, &[2, 2]), &q).unwrap();
        assert_eq!((h.free_rank, h.phi_orders.clone()), (2, vec![2]));
        let h = hom_group_structure(&sig(1, &[2, 2]), &f3).unwrap();
        assert_eq!(h.describe(), "(F3*)^2 x Z/2");
        let h = hom_group_structure(&sig(2, &[]), &q).unwrap();
        assert_eq!((h.free_rank, h.phi_order()), (4, 1));
    }

    #[test]
    fn hom_cardinality_matches_enumeration() {
        for s in [sig(1, &[2, 2]), sig(1, &[3, 3]), sig(0, &[2, 4, 4])] {
            for q in [2u64, 3, 5, 7] {
                let f = Field::prime(q).unwrap();
                let h = hom_group_structure(&s, &f).unwrap();
                let expect = (q - 1).pow(h.free_rank as u32) * h.phi_order();
                let got = enumerate_characters_finite(&orbifold_presentation(&s), &f).unwrap().len() as u64;
                assert_eq!(got, expect, "{} over F{}", s, q);
            }
        }
    }

    #[test]
    fn predictions() {
        let q = Field::rationals();
        let f2 = Field::prime(2).unwrap();
        assert_eq!(predict_e1(&sig(2, &[]), &q).unwrap().verdict, Verdict::AllOfHom);
        assert_eq!(predict_e1(&sig(1, &[2, 2]), &q).unwrap().verdict, Verdict::FiniteTorsion);
        assert_eq!(predict_e1(&sig(1, &[2]), &f2).unwrap().verdict, Verdict::AllOfHom);
        assert_eq!(
            predict_e1(&sig(0, &[2, 3, 7]), &q).unwrap().verdict,
            Verdict::UnsupportedGenusZero
        );
        assert!(predict_e1(&sig(1, &[]), &q).is_err());
    }

    #[test]
    fn genus_two_over_f5_agrees() {
        let c = crosscheck_cell(&sig(2, &[]), &Field::prime(5).unwrap(), 1 << 20).unwrap();
        assert_eq!((c.checked, c.exceptional), (256, 256));
        assert!(c.agrees);
    }

    #[test]
    fn one_two_over_f2_agrees() {
        let c = crosscheck_cell(&sig(1, &[2]), &Field::prime(2).unwrap(), 1 << 20).unwrap();
        assert_eq!(c.checked, c.exceptional);
        assert!(c.agrees);
    }

    #[test]
    fn one_two_two_over_q_has_a_family() {
        let c = crosscheck_cell(&sig(1, &[2, 2]), &Field::rationals(), 1 << 20).unwrap();
        let q = Field::rationals();
        let target = vec![q.one(), q.one(), q.from_int(-1), q.from_int(-1)];
        let hit = c
            .torsion_exceptional
            .iter()
            .find(|r| r.character.images() == target.as_slice())
            .expect("torsion character found");
        assert_eq!(hit.dim_h1, 2);
        // the whole sign-(-1) family is exceptional, so the prediction fails
        assert_eq!(c.generic_families.len(), 1);
        assert!(!c.agrees);
    }
}
