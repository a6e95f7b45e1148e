//! Alexander matrices over the group ring of the abelianization, their
//! minimal primes as characters, integrality of those characters, the
//! commutator cocycle, and the integral BNS rays they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::factor::{poly_factorize, roots};
use crate::algebra::field::{is_prime_u64, Field, FieldDescriptor, FieldElement};
use crate::algebra::matrix::{poly_determinant_up_to_sign, FieldMatrix};
use crate::algebra::poly::UniPoly;
use crate::bruhat_tits::{classify_affine_action, ActionKind};
use crate::cohomology::{h1, is_coboundary, named_values, Cocycle, H1Report};
use crate::error::{Error, Result};
use crate::presentation::{abelianize, fox_derivative, Abelianization, Character, GroupPresentation, Word};
use crate::valuation::DiscreteValuation;

/// Largest number of torsion branches explored.
pub const BRANCH_LIMIT: usize = 4096;
/// Largest number of minors taken for the rank-one ideal.
pub const MINOR_LIMIT: usize = 20_000;
/// Largest degree of a root-of-unity extension adjoined for torsion.
pub const ROOT_EXTENSION_LIMIT: usize = 8;

/// Element `Σ c_q · q` of `Z[Q]` or `F_p[Q]`, keyed by abelianization
/// coordinates with torsion entries reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Vec<BigInt>, BigInt>,
}

impl GroupRingElement {
    fn add_term(&mut self, key: Vec<BigInt>, c: BigInt, p: u64) {
        let e = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *e += c;
        if p > 0 {
            *e = e.mod_floor(&BigInt::from(p));
        }
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigInt>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image under `q ↦ Π values_i^{q_i}`.
    pub fn evaluate(&self, field: &Field, values: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(field.zero(), |acc, (k, c)| {
            let m = k.iter().zip(values).fold(field.one(), |m, (e, x)| {
                m * x.pow(e.to_i64().expect("small exponent"))
            });
            acc + field.from_bigint(c) * m
        })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> GroupRingDisplay<'a> {
        GroupRingDisplay { elem: self, names }
    }
}

pub struct GroupRingDisplay<'a> {
    elem: &'a GroupRingElement,
    names: &'a [String],
}

impl fmt::Display for GroupRingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.elem.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mono: Vec<String> = k
                .iter()
                .zip(self.names)
                .filter(|(e, _)| !e.is_zero())
                .map(|(e, n)| if e.is_one() { n.clone() } else { format!("{}^{}", n, e) })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Fox matrix pushed into the group ring of the abelianization.
#[derive(Debug, Clone)]
pub struct AlexanderData {
    presentation: Arc<GroupPresentation>,
    abelianization: Abelianization,
    characteristic: u64,
    /// Rows are relators, columns generators.
    matrix: Vec<Vec<GroupRingElement>>,
}

impl AlexanderData {
    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.abelianization
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn matrix(&self) -> &[Vec<GroupRingElement>] {
        &self.matrix
    }

    /// `Q` or `F_p`.
    pub fn base_field(&self) -> Field {
        if self.characteristic == 0 {
            Field::rationals()
        } else {
            Field::prime(self.characteristic).expect("prime checked at construction")
        }
    }

    /// `T` (or `T1..Tr`) for free coordinates, `S1..` for torsion ones.
    pub fn variable_names(&self) -> Vec<String> {
        let r = self.abelianization.free_rank;
        let mut names: Vec<String> = if r == 1 {
            vec!["T".to_string()]
        } else {
            (1..=r).map(|i| format!("T{}", i)).collect()
        };
        names.extend((1..=self.abelianization.torsion.len()).map(|i| format!("S{}", i)));
        names
    }

    /// The matrix evaluated at a character of the same presentation.
    pub fn specialize(&self, chi: &Character) -> FieldMatrix {
        let values = self.abelianization.coordinate_values(chi.images());
        let rows = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(chi.field(), &values)).collect())
            .collect();
        FieldMatrix::from_rows(chi.field(), self.presentation.ngens(), rows)
    }

    pub fn to_json(&self) -> Value {
        let names = self.variable_names();
        json!({
            "characteristic": self.characteristic,
            "freeRank": self.abelianization.free_rank,
            "torsion": self.abelianization.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "variables": names,
            "matrix": self.matrix.iter().map(|row| {
                row.iter().map(|e| e.display(&names).to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

pub fn alexander_matrix(p: &GroupPresentation, characteristic: u64) -> Result<AlexanderData> {
    if characteristic != 0 && !is_prime_u64(characteristic) {
        return Err(Error::InvalidInput(format!(
            "characteristic {} is neither 0 nor prime",
            characteristic
        )));
    }
    let ab = abelianize(p);
    let matrix = p
        .relators()
        .iter()
        .map(|r| {
            (0..p.ngens())
                .map(|i| {
                    let mut e = GroupRingElement::default();
                    for (w, c) in fox_derivative(r, i).terms() {
                        e.add_term(ab.project_word(w), c.clone(), characteristic);
                    }
                    e
                })
                .collect()
        })
        .collect();
    Ok(AlexanderData {
        presentation: Arc::new(p.clone()),
        abelianization: ab,
        characteristic,
        matrix,
    })
}

/// `Φ_n` with coefficients mapped into `field`.
pub fn cyclotomic(field: &Field, n: u64) -> UniPoly {
    let q = Field::rationals();
    let mut f = UniPoly::monomial(q.one(), n as usize).sub(&UniPoly::one(&q));
    for d in 1..n {
        if n % d == 0 {
            f = f.exact_div(&cyclotomic(&q, d));
        }
    }
    let coeffs = f
        .coeffs()
        .iter()
        .map(|c| field.from_bigint(c.as_rational().unwrap().numer()))
        .collect();
    UniPoly::new(field, coeffs)
}

fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// A character of the torsion subgroup with values in `field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionBranch {
    pub field: Field,
    pub values: Vec<FieldElement>,
}

impl TorsionBranch {
    pub fn describe(&self) -> String {
        if self.values.is_empty() {
            "no torsion".to_string()
        } else {
            let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
            format!("torsion values ({}) in {}", v.join(", "), self.field)
        }
    }
}

/// All torsion characters, valued in the base field extended by the roots
/// of unity of order the prime-to-`p` torsion exponent.
pub fn torsion_branches(ab: &Abelianization, base: &Field) -> Result<Vec<TorsionBranch>> {
    let p = base.characteristic();
    let mut e = BigInt::one();
    for d in &ab.torsion {
        let mut d = d.clone();
        if p > 0 {
            while (&d % p).is_zero() {
                d /= p;
            }
        }
        e = e.lcm(&d);
    }
    let e = e
        .to_u64()
        .ok_or_else(|| Error::Unsupported("torsion exponent too large".into()))?;
    let field = root_of_unity_field(base, e)?;
    let mut branches = vec![Vec::new()];
    for d in &ab.torsion {
        let d = d.to_usize().unwrap();
        let f = UniPoly::monomial(field.one(), d).sub(&UniPoly::one(&field));
        let rs = roots(&f)?;
        let mut next = Vec::new();
        for b in &branches {
            for r in &rs {
                let mut v: Vec<FieldElement> = b.clone();
                v.push(r.clone());
                next.push(v);
            }
        }
        if next.len() > BRANCH_LIMIT {
            return Err(Error::BudgetExceeded(format!(
                "more than {} torsion branches",
                BRANCH_LIMIT
            )));
        }
        branches = next;
    }
    // a branch whose values already lie in the base field stays there
    Ok(branches
        .into_iter()
        .map(|values| {
            let lowered: Option<Vec<FieldElement>> = if field == *base {
                None
            } else {
                values.iter().map(|x| x.to_base()).collect()
            };
            match lowered {
                Some(values) => TorsionBranch {
                    field: base.clone(),
                    values,
                },
                None => TorsionBranch {
                    field: field.clone(),
                    values,
                },
            }
        })
        .collect())
}

fn root_of_unity_field(base: &Field, e: u64) -> Result<Field> {
    let p = base.characteristic();
    let contained = match p {
        0 => e <= 2,
        _ => (p - 1) % e == 0,
    };
    if contained {
        return Ok(base.clone());
    }
    let phi = cyclotomic(base, e);
    let f = if p == 0 {
        phi
    } else {
        poly_factorize(&phi)?.factors[0].0.clone()
    };
    let deg = f.degree().unwrap();
    if deg > ROOT_EXTENSION_LIMIT {
        return Err(Error::Unsupported(format!(
            "roots of unity of order {} need an extension of degree {} over {}",
            e, deg, base
        )));
    }
    Field::extension(base, &f, "z")
}

/// Substitutes `T_i ↦ t^{w_i}` and the branch values, then clears each row
/// of negative powers of `t`.
fn substituted_rows(alex: &AlexanderData, branch: &TorsionBranch, weights: &[i64]) -> Vec<Vec<UniPoly>> {
    let ab = &alex.abelianization;
    let r = ab.free_rank;
    let k = &branch.field;
    let base = alex.base_field();
    alex.matrix
        .iter()
        .map(|row| {
            let laurent: Vec<BTreeMap<i64, FieldElement>> = row
                .iter()
                .map(|e| {
                    let mut m: BTreeMap<i64, FieldElement> = BTreeMap::new();
                    for (key, c) in e.terms() {
                        let z: i64 = (0..r).map(|i| weights[i] * key[i].to_i64().unwrap()).sum();
                        let tors = branch.values.iter().zip(&key[r..]).fold(k.one(), |acc, (x, e)| {
                            acc * x.pow(e.to_i64().unwrap())
                        });
                        let coeff = k.lift_base(&base.from_bigint(c)).unwrap_or_else(|_| k.from_bigint(c)) * tors;
                        let slot = m.entry(z).or_insert_with(|| k.zero());
                        *slot = &*slot + &coeff;
                    }
                    m.retain(|_, c| !c.is_zero());
                    m
                })
                .collect();
            let min = laurent.iter().flat_map(|m| m.keys().copied()).min().unwrap_or(0);
            laurent
                .iter()
                .map(|m| {
                    m.iter().fold(UniPoly::zero(k), |acc, (z, c)| {
                        acc.add(&UniPoly::monomial(c.clone(), (z - min) as usize))
                    })
                })
                .collect()
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Monic gcd of all `(n−1)`-minors with powers of `t` removed; zero when
/// every minor vanishes.
fn minor_gcd(rows: &[Vec<UniPoly>], n: usize, field: &Field) -> Result<UniPoly> {
    let m = rows.len();
    if n == 0 || m + 1 < n {
        return Ok(UniPoly::zero(field));
    }
    let row_sets = combinations(m, n - 1);
    if row_sets.len().saturating_mul(n) > MINOR_LIMIT {
        return Err(Error::BudgetExceeded(format!("more than {} minors", MINOR_LIMIT)));
    }
    let mut g = UniPoly::zero(field);
    for rs in &row_sets {
        for skip in 0..n {
            let sub: Vec<Vec<UniPoly>> = rs
                .iter()
                .map(|&i| (0..n).filter(|&j| j != skip).map(|j| rows[i][j].clone()).collect())
                .collect();
            let d = poly_determinant_up_to_sign(sub, field);
            g = g.gcd(&d);
            if g.degree() == Some(0) {
                return Ok(UniPoly::one(field));
            }
        }
    }
    if g.is_zero() {
        return Ok(g);
    }
    while g.coeff(0).is_zero() {
        g = g.exact_div(&UniPoly::x(field));
    }
    Ok(g.monic())
}

/// Generator of the ideal of `(n−1)`-minors in one torsion branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchIdeal {
    pub branch: TorsionBranch,
    /// Zero when every minor vanishes.
    pub generator: UniPoly,
}

pub fn alexander_ideal_rank1(alex: &AlexanderData) -> Result<Vec<BranchIdeal>> {
    let r = alex.abelianization.free_rank;
    if r != 1 {
        return Err(Error::Unsupported(format!(
            "ideal extraction needs free rank 1, found {}; use finite-field enumeration",
            r
        )));
    }
    let n = alex.presentation.ngens();
    torsion_branches(&alex.abelianization, &alex.base_field())?
        .into_iter()
        .map(|branch| {
            let rows = substituted_rows(alex, &branch, &[1]);
            let generator = minor_gcd(&rows, n, &branch.field)?;
            Ok(BranchIdeal { branch, generator })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecordKind {
    /// An irreducible factor of the rank-one ideal generator.
    Factor,
    /// The generic point of a branch whose minors all vanish.
    Generic,
    /// A torsion character of a group with finite abelianization.
    Torsion,
}

impl RecordKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecordKind::Factor => "factor",
            RecordKind::Generic => "generic",
            RecordKind::Torsion => "torsion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Integrality {
    pub integral_unit: bool,
    pub torsion: bool,
    pub order: Option<u64>,
}

impl Integrality {
    pub fn to_json(&self) -> Value {
        json!({"integralUnit": self.integral_unit, "torsion": self.torsion, "order": self.order})
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalCharacterRecord {
    pub kind: RecordKind,
    pub field: Field,
    pub character: Character,
    pub branch: TorsionBranch,
    /// The irreducible factor, for factor records.
    pub generator: Option<UniPoly>,
    pub h1: H1Report,
    pub integrality: Option<Integrality>,
}

impl ExceptionalCharacterRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "field": self.field.to_string(),
            "character": named_values(self.character.presentation(), self.character.images()),
            "generator": self.generator.as_ref().map(|g| g.display_in("T").to_string()),
            "branch": self.branch.describe(),
            "dimH1": self.h1.dim_h1,
            "integralUnit": self.integrality.map(|i| i.integral_unit),
            "torsion": self.integrality.map(|i| i.torsion),
            "order": self.integrality.and_then(|i| i.order),
        })
    }
}

/// Records plus the factors that failed the `H¹` test and the branches the
/// univariate method cannot resolve.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinimalPrimes {
    pub records: Vec<ExceptionalCharacterRecord>,
    pub rejected: Vec<String>,
    pub unresolved: Vec<String>,
}

/// `r` distinct monic irreducible polynomials over `k`, lowest degree first.
fn distinct_irreducibles(k: &Field, r: usize) -> Result<Vec<UniPoly>> {
    let mut out = Vec::new();
    if !k.is_finite() {
        for c in 0..r {
            out.push(UniPoly::x(k).add(&UniPoly::constant(k.from_int(c as i64))));
        }
        return Ok(out);
    }
    let elems = k.elements(1 << 16).ok_or_else(|| Error::Unsupported(format!("base field {}", k)))?;
    let q = elems.len();
    let mut deg = 1;
    while out.len() < r {
        let total = q.checked_pow(deg as u32).ok_or_else(|| Error::BudgetExceeded("irreducibles".into()))?;
        for mut idx in 0..total {
            let mut coeffs: Vec<FieldElement> = (0..deg)
                .map(|_| {
                    let c = elems[idx % q].clone();
                    idx /= q;
                    c
                })
                .collect();
            coeffs.push(k.one());
            let f = UniPoly::new(k, coeffs);
            if crate::algebra::factor::is_irreducible(&f)? {
                out.push(f);
                if out.len() == r {
                    break;
                }
            }
        }
        deg += 1;
    }
    Ok(out)
}

/// Characters `ξ_ν` attached to the minimal primes of the Alexander ideal,
/// branch by branch over the torsion characters.
pub fn minimal_prime_characters(alex: &AlexanderData) -> Result<MinimalPrimes> {
    let ab = &alex.abelianization;
    let r = ab.free_rank;
    let n = alex.presentation.ngens();
    let mut out = MinimalPrimes::default();
    for branch in torsion_branches(ab, &alex.base_field())? {
        let k = branch.field.clone();
        if r == 0 {
            let chi = character_from_coords(alex, &k, &[], &branch)?;
            push_record(&mut out, RecordKind::Torsion, chi, &branch, None)?;
            continue;
        }
        let generic = if r == 1 {
            let rows = substituted_rows(alex, &branch, &[1]);
            let g = minor_gcd(&rows, n, &k)?;
            if !g.is_zero() {
                factor_records(alex, &mut out, &branch, &g)?;
                continue;
            }
            true
        } else {
            generically_exceptional(alex, &branch)?
        };
        if generic {
            let kt = Field::rational_functions(&k, "t")?;
            let values: Vec<FieldElement> = distinct_irreducibles(&k, r)?
                .iter()
                .map(|f| kt.fraction(f, &UniPoly::one(&k)).unwrap())
                .collect();
            let chi = character_from_coords(alex, &kt, &values, &branch)?;
            push_record(&mut out, RecordKind::Generic, chi, &branch, None)?;
        } else {
            out.unresolved.push(format!(
                "free rank {} branch with {}: generic H1 vanishes, special primes need multivariate factorization",
                r,
                branch.describe()
            ));
        }
    }
    Ok(out)
}

/// Whether the characters of a branch have `H¹ ≠ 0` at the generic point of
/// the free part. Decided via `T_i ↦ t^{D^i}`, with `D` exceeding every
/// exponent spread a minor can have so no monomials collide.
pub fn generically_exceptional(alex: &AlexanderData, branch: &TorsionBranch) -> Result<bool> {
    let r = alex.abelianization.free_rank;
    if r == 0 {
        return Ok(false);
    }
    let n = alex.presentation.ngens();
    let mut width = vec![0i64; r];
    for row in &alex.matrix {
        for (i, w) in width.iter_mut().enumerate() {
            let exps: Vec<i64> = row
                .iter()
                .flat_map(|e| e.terms().map(move |(k, _)| k[i].to_i64().unwrap()))
                .collect();
            if let (Some(lo), Some(hi)) = (exps.iter().min(), exps.iter().max()) {
                *w += hi - lo;
            }
        }
    }
    let d = width.iter().copied().max().unwrap_or(0) + 1;
    let weights: Vec<i64> = (0..r as u32).map(|i| d.pow(i)).collect();
    let rows = substituted_rows(alex, branch, &weights);
    let kt = Field::rational_functions(&branch.field, "t")?;
    let m = FieldMatrix::from_rows(
        &kt,
        n,
        rows.iter()
            .map(|row| row.iter().map(|p| kt.from_poly(p)).collect())
            .collect(),
    );
    Ok(m.rank() + 2 <= n)
}

fn factor_records(
    alex: &AlexanderData,
    out: &mut MinimalPrimes,
    branch: &TorsionBranch,
    g: &UniPoly,
) -> Result<()> {
    if g.degree() == Some(0) {
        return Ok(());
    }
    let k = &branch.field;
    let simple = matches!(k.descriptor(), FieldDescriptor::Rationals | FieldDescriptor::PrimeField(_));
    for (f, _) in poly_factorize(g)?.factors {
        let (field, value) = if f.degree() == Some(1) {
            (k.clone(), -f.coeff(0))
        } else if simple {
            let e = Field::extension(k, &f, "x")?;
            let x = e.generator().unwrap();
            (e, x)
        } else {
            out.unresolved.push(format!(
                "factor {} over {} needs a tower of extensions",
                f.display_in("T"),
                k
            ));
            continue;
        };
        let chi = character_from_coords(alex, &field, &[value], branch)?;
        push_record(out, RecordKind::Factor, chi, branch, Some(f))?;
    }
    Ok(())
}

fn character_from_coords(
    alex: &AlexanderData,
    field: &Field,
    free: &[FieldElement],
    branch: &TorsionBranch,
) -> Result<Character> {
    let mut coords: Vec<FieldElement> = free.to_vec();
    for x in &branch.values {
        coords.push(if x.field() == field { x.clone() } else { field.lift_base(x)? });
    }
    let images = if coords.is_empty() {
        vec![field.one(); alex.presentation.ngens()]
    } else {
        alex.abelianization.generator_images(&coords)
    };
    Character::new_shared(alex.presentation.clone(), field, images)
}

fn push_record(
    out: &mut MinimalPrimes,
    kind: RecordKind,
    chi: Character,
    branch: &TorsionBranch,
    generator: Option<UniPoly>,
) -> Result<()> {
    let report = h1(&chi);
    if report.dim_h1 == 0 {
        out.rejected.push(format!(
            "{} record over {} at {}: H1 vanishes",
            kind.as_str(),
            chi.field(),
            named_values(chi.presentation(), chi.images())
        ));
        return Ok(());
    }
    let integrality = character_integrality(&chi).ok();
    out.records.push(ExceptionalCharacterRecord {
        kind,
        field: chi.field().clone(),
        character: chi,
        branch: branch.clone(),
        generator,
        h1: report,
        integrality,
    });
    Ok(())
}

pub fn integrality_and_torsion(rec: &ExceptionalCharacterRecord) -> Result<Integrality> {
    character_integrality(&rec.character)
}

/// Every image an algebraic unit, every image a root of unity, and the
/// lcm of their orders.
pub fn character_integrality(chi: &Character) -> Result<Integrality> {
    let mut acc = Integrality {
        integral_unit: true,
        torsion: true,
        order: Some(1),
    };
    for x in chi.images() {
        let i = element_integrality(x)?;
        acc.integral_unit &= i.integral_unit;
        acc.torsion &= i.torsion;
        acc.order = match (acc.order, i.order) {
            (Some(a), Some(b)) if acc.torsion => Some(a.lcm(&b)),
            _ => None,
        };
    }
    Ok(acc)
}

pub fn element_integrality(x: &FieldElement) -> Result<Integrality> {
    let field = x.field();
    if field.is_finite() {
        return Ok(Integrality {
            integral_unit: true,
            torsion: true,
            order: x.multiplicative_order(),
        });
    }
    let f = minimal_polynomial_over_q(x)?;
    let torsion = root_integrality(&f)?;
    let order = if torsion.torsion {
        let bound = torsion_order_bound(f.degree().unwrap() as u64);
        (1..=bound).find(|&n| x.pow(n as i64).is_one())
    } else {
        None
    };
    Ok(Integrality { order, ..torsion })
}

/// Monic minimal polynomial over `Q` of an element of `Q` or `Q[x]/(f)`.
pub fn minimal_polynomial_over_q(x: &FieldElement) -> Result<UniPoly> {
    let field = x.field();
    let q = Field::rationals();
    match field.descriptor() {
        FieldDescriptor::Rationals => Ok(UniPoly::new(&q, vec![-x.clone(), q.one()])),
        FieldDescriptor::Extension { base, modulus, .. } if *base == q => {
            let n = modulus.degree().unwrap();
            let coords = |y: &FieldElement| -> Vec<FieldElement> {
                let p = y.as_poly().unwrap();
                (0..n).map(|i| p.coeff(i)).collect()
            };
            let mut powers = vec![field.one()];
            loop {
                let k = powers.len();
                let rows: Vec<Vec<FieldElement>> = (0..n)
                    .map(|i| powers.iter().map(|p| coords(p)[i].clone()).collect())
                    .collect();
                let kernel = FieldMatrix::from_rows(&q, k, rows).kernel();
                if let Some(v) = kernel.first() {
                    return Ok(UniPoly::new(&q, v.clone()).monic());
                }
                let next = powers.last().unwrap() * x;
                powers.push(next);
            }
        }
        _ => Err(Error::Unsupported(format!("integrality over {}", field))),
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Largest `N` with `φ(N) ≤ d` is below `2d² + 2`.
fn torsion_order_bound(d: u64) -> u64 {
    2 * d * d + 2
}

/// Integrality and torsion of a root of an irreducible monic `f ∈ Q[x]`.
/// Torsion follows Kronecker: the Graeffe iterates `f_{2^k}` of a unit all
/// of whose conjugates lie on the unit circle have bounded coefficients and
/// therefore repeat.
pub fn root_integrality(f: &UniPoly) -> Result<Integrality> {
    let d = f.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))? as u64;
    let f = f.monic();
    let mut z: Vec<BigInt> = Vec::with_capacity(d as usize + 1);
    for c in f.coeffs() {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::Unsupported("integrality needs rational coefficients".into()))?;
        if !r.is_integer() {
            return Ok(Integrality {
                integral_unit: false,
                torsion: false,
                order: None,
            });
        }
        z.push(r.to_integer());
    }
    if !z[0].abs().is_one() {
        return Ok(Integrality {
            integral_unit: false,
            torsion: false,
            order: None,
        });
    }
    let bounds: Vec<BigInt> = (0..=d).map(|i| binomial(d, i)).collect();
    let mut seen: Vec<Vec<BigInt>> = vec![z.clone()];
    let mut g = z;
    let torsion = loop {
        g = graeffe(&g);
        if g.iter().zip(&bounds).any(|(c, b)| c.abs() > *b) {
            break false;
        }
        if seen.contains(&g) {
            break true;
        }
        seen.push(g.clone());
        if seen.len() > 4096 {
            return Err(Error::BudgetExceeded("Graeffe iteration did not repeat".into()));
        }
    };
    let order = if torsion { cyclotomic_division_order(&f) } else { None };
    Ok(Integrality {
        integral_unit: true,
        torsion,
        order,
    })
}

/// Monic polynomial whose roots are the squares of the roots of `g`.
fn graeffe(g: &[BigInt]) -> Vec<BigInt> {
    let d = g.len() - 1;
    let neg: Vec<BigInt> = g
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    let mut prod = vec![BigInt::zero(); 2 * d + 1];
    for (i, a) in g.iter().enumerate() {
        for (j, b) in neg.iter().enumerate() {
            prod[i + j] += a * b;
        }
    }
    let sign = if d % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    (0..=d).map(|i| &prod[2 * i] * &sign).collect()
}

/// Least `N` with `f | x^N − 1` among `N` with `φ(N) ≤ deg f`.
pub fn cyclotomic_division_order(f: &UniPoly) -> Option<u64> {
    let d = f.degree()? as u64;
    let field = f.field();
    (1..=torsion_order_bound(d))
        .filter(|&n| euler_phi(n) <= d)
        .find(|&n| {
            let xn = UniPoly::monomial(field.one(), n as usize).sub(&UniPoly::one(field));
            f.divides(&xn)
        })
}

/// `c(g) = θ([g₀, g])` for the first `H¹` representative `θ`.
pub fn commutator_cocycle(rec: &ExceptionalCharacterRecord, g0: &Word) -> Result<Cocycle> {
    let chi = &rec.character;
    if chi.evaluate(g0).is_one() {
        return Err(Error::Precondition(format!(
            "the character is 1 on {}",
            g0.display(chi.presentation().generators())
        )));
    }
    let theta = rec
        .h1
        .basis
        .first()
        .ok_or_else(|| Error::Precondition("record has vanishing H1".into()))?;
    let values = (0..chi.presentation().ngens())
        .map(|j| theta.evaluate(&Word::commutator(g0, &Word::gen_pow(j, 1))))
        .collect();
    let c = Cocycle::new(chi, values)?;
    if is_coboundary(&c).is_some() {
        return Err(Error::Precondition("commutator cocycle is a coboundary".into()));
    }
    Ok(c)
}

/// An integral class `v_p ∘ ξ` certified by the tree action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnsRay {
    pub record: usize,
    pub prime: u64,
    /// Values on the generators.
    pub omega: Vec<i64>,
    pub g0: Word,
    pub classification: ActionKind,
}

impl BnsRay {
    pub fn to_json(&self, names: &[String]) -> Value {
        let omega: serde_json::Map<String, Value> = names
            .iter()
            .zip(&self.omega)
            .map(|(n, w)| (n.clone(), json!(w)))
            .collect();
        json!({
            "record": self.record,
            "prime": self.prime,
            "omega": omega,
            "g0": self.g0.display(names).to_string(),
            "classification": self.classification.as_str(),
        })
    }
}

fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Unsupported(format!("factoring {}", n)))?;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    Ok(out)
}

/// One ray per rational prime dividing a generator image of a record over
/// `Q`; records over other fields carry no rational places and are skipped.
pub fn bns_rays(recs: &[ExceptionalCharacterRecord]) -> Result<Vec<BnsRay>> {
    let mut out = Vec::new();
    for (idx, rec) in recs.iter().enumerate() {
        if rec.field.descriptor() != &FieldDescriptor::Rationals {
            continue;
        }
        let chi = &rec.character;
        let Some(g) = chi.images().iter().position(|x| !x.is_one()) else {
            continue;
        };
        let g0 = Word::gen_pow(g, 1);
        let mut primes: Vec<u64> = Vec::new();
        for x in chi.images() {
            let r = x.as_rational().unwrap();
            primes.extend(prime_divisors(r.numer())?);
            primes.extend(prime_divisors(r.denom())?);
        }
        primes.sort();
        primes.dedup();
        if primes.is_empty() {
            continue;
        }
        let c = commutator_cocycle(rec, &g0)?;
        for p in primes {
            let v = DiscreteValuation::p_adic(p)?;
            let report = classify_affine_action(chi, &c, &v)?;
            let omega = chi.presentation().generators().iter().map(|n| report.busemann[n]).collect();
            out.push(BnsRay {
                record: idx,
                prime: p,
                omega,
                g0: g0.clone(),
                classification: report.kind,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::{parse_field, parse_poly};
    use crate::cohomology::fox_matrix_at;
    use crate::presentation::make_character;

    fn bs(n: i64) -> GroupPresentation {
        GroupPresentation::parse(&format!("gens a t\nrel t a t^-1 a^-{}", n)).unwrap()
    }

    #[test]
    fn alexander_matrix_examples() {
        let a = alexander_matrix(&bs(2), 0).unwrap();
        let names = a.variable_names();
        let row: Vec<String> = a.matrix()[0].iter().map(|e| e.display(&names).to_string()).collect();
        assert_eq!(row, vec!["T - 2", "0"]);
        let a3 = alexander_matrix(&bs(3), 0).unwrap();
        let names3 = a3.variable_names();
        assert_eq!(names3, vec!["T", "S1"]);
        assert_eq!(a3.matrix()[0][0].display(&names3).to_string(), "T - S1 - 2");
        let a2 = alexander_matrix(&bs(2), 2).unwrap();
        assert_eq!(a2.matrix()[0][0].display(&names).to_string(), "T");
    }

    #[test]
    fn specialization_matches_fox_matrix() {
        let p = GroupPresentation::parse("gens a b x y\nrel x^2\nrel y^2\nrel [a,b] x y").unwrap();
        let alex = alexander_matrix(&p, 0).unwrap();
        let q = Field::rationals();
        let chi = make_character(
            &p,
            &q,
            &[
                ("a".into(), q.from_int(2)),
                ("b".into(), q.from_int(-3)),
                ("x".into(), q.from_int(-1)),
                ("y".into(), q.from_int(-1)),
            ],
        )
        .unwrap();
        assert_eq!(alex.specialize(&chi), fox_matrix_at(&chi).matrix);
    }

    #[test]
    fn rank_one_ideals() {
        let g = alexander_ideal_rank1(&alexander_matrix(&bs(2), 0).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].generator.display_in("T").to_string(), "T - 2");
        let free = GroupPresentation::free_group(&["a", "b"]);
        assert!(alexander_ideal_rank1(&alexander_matrix(&free, 0).unwrap()).is_err());
        let z2 = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-1").unwrap();
        assert!(alexander_ideal_rank1(&alexander_matrix(&z2, 0).unwrap()).is_err());
    }

    #[test]
    fn bs12_record_and_cocycle() {
        let mp = minimal_prime_characters(&alexander_matrix(&bs(2), 0).unwrap()).unwrap();
        assert_eq!(mp.records.len(), 1);
        let rec = &mp.records[0];
        let q = Field::rationals();
        assert_eq!(rec.field, q);
        assert_eq!(rec.character.image(1), &q.from_int(2));
        assert_eq!(rec.h1.dim_h1, 1);
        let i = rec.integrality.unwrap();
        assert!(!i.integral_unit && !i.torsion);
        let c = commutator_cocycle(rec, &Word::gen_pow(1, 1)).unwrap();
        assert_eq!(c.values(), &[q.one(), q.zero()]);
        assert!(c.evaluate(&Word::gen_pow(1, 1)).is_zero());
        assert!(commutator_cocycle(rec, &Word::gen_pow(0, 1)).is_err());
        let rays = bns_rays(&mp.records).unwrap();
        assert_eq!(rays.len(), 1);
        assert_eq!((rays[0].prime, rays[0].omega.clone()), (2, vec![0, 1]));
        assert_eq!(rays[0].classification, ActionKind::Exceptional);
    }

    #[test]
    fn bs16_two_rays() {
        let mp = minimal_prime_characters(&alexander_matrix(&bs(6), 0).unwrap()).unwrap();
        let rays = bns_rays(&mp.records).unwrap();
        let primes: Vec<u64> = rays.iter().map(|r| r.prime).collect();
        assert_eq!(primes, vec![2, 3]);
        assert!(rays.iter().all(|r| r.omega == vec![0, 1]));
        assert!(bns_rays(&[]).unwrap().is_empty());
    }

    #[test]
    fn unit_ideal_has_no_records() {
        let z = GroupPresentation::free_group(&["t"]);
        let alex = alexander_matrix(&z, 0).unwrap();
        assert!(alexander_ideal_rank1(&alex).unwrap()[0].generator.is_one());
        assert!(minimal_prime_characters(&alex).unwrap().records.is_empty());
    }

    #[test]
    fn integrality_examples() {
        let q = Field::rationals();
        let golden = parse_poly(&q, "x", "x^2 - x - 1").unwrap();
        let i = root_integrality(&golden).unwrap();
        assert!(i.integral_unit && !i.torsion);
        let cyc = parse_poly(&q, "x", "x^2 + x + 1").unwrap();
        let i = root_integrality(&cyc).unwrap();
        assert!(i.torsion);
        assert_eq!(i.order, Some(3));
        let lin = parse_poly(&q, "x", "x - 2").unwrap();
        assert!(!root_integrality(&lin).unwrap().integral_unit);
        let k = parse_field("Q[x]/(x^2 + x + 1)").unwrap();
        let x = k.generator().unwrap();
        assert_eq!(element_integrality(&x).unwrap().order, Some(3));
        assert_eq!(minimal_polynomial_over_q(&x).unwrap(), cyc);
    }

    #[test]
    fn cyclotomic_polynomials() {
        let q = Field::rationals();
        assert_eq!(cyclotomic(&q, 6).display_in("x").to_string(), "x^2 - x + 1");
        assert_eq!(cyclotomic(&q, 12).degree(), Some(4));
    }

    #[test]
    fn genus2_generic_record() {
        let p = GroupPresentation::parse("gens a1 b1 a2 b2\nrel [a1,b1] [a2,b2]").unwrap();
        let mp = minimal_prime_characters(&alexander_matrix(&p, 5).unwrap()).unwrap();
        assert_eq!(mp.records.len(), 1);
        assert_eq!(mp.records[0].kind, RecordKind::Generic);
        assert!(mp.records[0].h1.dim_h1 >= 1);
    }

    #[test]
    fn golden_ratio_record() {
        // the ideal generator T^2 - T - 1 yields a quadratic field
        let p = GroupPresentation::parse("gens a b t\nrel t a t^-1 b^-1\nrel t b t^-1 b^-1 a^-1\nrel [a,b]").unwrap();
        let mp = minimal_prime_characters(&alexander_matrix(&p, 0).unwrap()).unwrap();
        let quad: Vec<_> = mp
            .records
            .iter()
            .filter(|r| r.field.absolute_degree() == Some(2))
            .collect();
        assert_eq!(quad.len(), 1, "{:?}", mp);
        let i = quad[0].integrality.unwrap();
        assert!(i.integral_unit && !i.torsion);
    }
}
