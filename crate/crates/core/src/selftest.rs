//! The acceptance criteria as runnable checks, shared by the `acceptance`
//! test target and the `selftest` subcommand.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::field::{Field, FieldElement};
use crate::algebra::parse::parse_poly;
use crate::algebra::poly::UniPoly;
use crate::bruhat_tits::{
    busemann_cocycle, busemann_limit, classification_matches_survey, classify_affine_action,
    classify_isometry, descend_displacement, lattice_distance, survey_displacement, ActionKind, BorelEnd, IsometryKind,
    LatticeClass, TreeIsometry,
};
use crate::cohomology::{
    direct_h1_dimension, enumerate_characters_finite, enumerate_exceptional_finite, h1, verify_cocycle_oracle,
    Cocycle,
};
use crate::metabelian::{
    alexander_ideal_rank1, alexander_matrix, bns_rays, commutator_cocycle, cyclotomic_division_order,
    minimal_prime_characters, root_integrality, MinimalPrimes,
};
use crate::orbifold::{crosscheck_grid, OrbifoldSignature, Verdict};
use crate::presentation::{abelianize, make_character, multiplicative_kernel, Character, GroupPresentation, Letter, Word};
use crate::valuation::DiscreteValuation;

/// Seed shared by every randomized criterion.
pub const SEED: u64 = 0x5eed_2024;

type Check = fn() -> std::result::Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit: Duration,
    run: Check,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {} ({:.2}s, limit {}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": self.elapsed.as_secs_f64(),
            "limitSeconds": self.limit.as_secs(),
        })
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, secs, run| Criterion {
        id,
        name,
        limit: Duration::from_secs(secs),
        run,
    };
    vec![
        c(1, "tree fixtures", 5, tree_fixtures as Check),
        c(2, "affine action on the tree", 1, affine_action),
        c(3, "cohomology ground truth", 10, cohomology_ground_truth),
        c(4, "oracle equivalence", 30, oracle_equivalence),
        c(5, "Alexander pipeline", 5, alexander_pipeline),
        c(6, "records cover exceptional characters", 60, records_cover),
        c(7, "orbifold prediction grid", 60, orbifold_grid),
        c(8, "isometry classification vs brute force", 60, isometry_brute_force),
        c(9, "integrality and torsion", 1, integrality),
    ]
}

impl Criterion {
    /// A criterion fails when its check fails or it overruns its limit.
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let result = std::panic::catch_unwind(self.run).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if elapsed > self.limit {
            passed = false;
            detail = format!("over time limit; {}", detail);
        }
        Outcome {
            id: self.id,
            name: self.name,
            passed,
            detail,
            elapsed,
            limit: self.limit,
        }
    }
}

pub fn run_all() -> Vec<Outcome> {
    criteria().iter().map(Criterion::run).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn bs(n: i64) -> GroupPresentation {
    GroupPresentation::parse(&format!("group BS(1,{n})\ngens a t\nrel t a t^-1 a^-{n}")).expect("valid")
}

fn genus2() -> GroupPresentation {
    GroupPresentation::parse("gens a1 b1 a2 b2\nrel [a1,b1] [a2,b2]").expect("valid")
}

fn q_v2() -> DiscreteValuation {
    DiscreteValuation::p_adic(2).expect("2 is prime")
}

fn f3t_vt() -> DiscreteValuation {
    let f3 = Field::prime(3).expect("3 is prime");
    let f = Field::rational_functions(&f3, "t").expect("valid");
    DiscreteValuation::parse(&f, "pi:t").expect("valid")
}

fn random_poly(f: &Field, deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    let p = f.characteristic() as i64;
    loop {
        let coeffs = (0..=deg).map(|_| f.from_int(rng.gen_range(0..p))).collect();
        let g = UniPoly::new(f, coeffs);
        if !g.is_zero() {
            return g;
        }
    }
}

/// A random element of valuation zero.
fn random_unit(v: &DiscreteValuation, rng: &mut ChaCha8Rng) -> FieldElement {
    let f = v.field();
    loop {
        let x = match f.base() {
            Some(k) => f
                .fraction(&random_poly(k, 3, rng), &random_poly(k, 2, rng))
                .expect("nonzero denominator"),
            None => {
                let n = rng.gen_range(1..=25) * if rng.gen_bool(0.5) { 1 } else { -1 };
                f.from_int(n) / f.from_int(rng.gen_range(1..=25))
            }
        };
        if v.val(&x) == 0 {
            return x;
        }
    }
}

fn random_with_valuation(v: &DiscreteValuation, k: i64, rng: &mut ChaCha8Rng) -> FieldElement {
    v.uniformizer_pow(k) * random_unit(v, rng)
}

fn tree_fixtures() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let v = q_v2();
    let d = ok(lattice_distance(&LatticeClass::standard(&v, 0), &LatticeClass::standard(&v, 3)))?;
    ensure(d == 3, || format!("d(L0, L3) = {}", d))?;

    let mut checked = 0;
    for v in [q_v2(), f3t_vt()] {
        let f = v.field().clone();
        let u = v.uniformizer_pow(2);
        let g = ok(TreeIsometry::new(&v, [f.one(), u, f.zero(), f.one()]))?;
        for n in -3..=5 {
            let x = LatticeClass::standard(&v, n);
            let fixed = ok(crate::bruhat_tits::apply_isometry(&g, &x))? == x;
            ensure(fixed == (n <= 2), || format!("[[1,u],[0,1]] with v(u)=2 on L{}: fixed = {}", n, fixed))?;
        }
        for vu in 0..=4 {
            let u = random_with_valuation(&v, vu, &mut rng);
            for n in -3..=3 {
                let g = ok(TreeIsometry::new(&v, [v.uniformizer_pow(n), u.clone(), f.zero(), f.one()]))?;
                for m in -3..=3 {
                    let image = ok(crate::bruhat_tits::apply_isometry(&g, &LatticeClass::standard(&v, m)))?;
                    let expected = LatticeClass::standard(&v, m + n);
                    ensure((image == expected) == (m + n <= vu), || {
                        format!("[[pi^{n},u],[0,1]] with v(u)={vu} sends L{m} to {image}")
                    })?;
                    checked += 1;
                }
            }
        }
    }

    let mut busemann = 0;
    for v in [q_v2(), DiscreteValuation::p_adic(3).expect("prime"), f3t_vt()] {
        let f = v.field().clone();
        for _ in 0..50 {
            let k = rng.gen_range(-3..=3);
            let alpha = random_with_valuation(&v, k, &mut rng);
            let beta = if rng.gen_bool(0.2) {
                f.zero()
            } else {
                random_with_valuation(&v, rng.gen_range(-3..=3), &mut rng)
            };
            let g = ok(TreeIsometry::new(&v, [alpha, beta, f.zero(), f.one()]))?;
            let b = ok(busemann_cocycle(&g, BorelEnd))?;
            let lim = ok(busemann_limit(&g))?;
            ensure(b == k && lim == k, || format!("Busemann {} / limit {} for v(alpha) = {} over {}", b, lim, k, v))?;
            busemann += 1;
        }
    }
    Ok(format!(
        "d(L0,L3)=3; {} translation cases; {} Busemann values equal v(alpha)",
        checked, busemann
    ))
}

fn affine_action() -> std::result::Result<String, String> {
    let p = bs(2);
    let q = Field::rationals();
    let v = q_v2();
    let chi = ok(make_character(&p, &q, &[("a".into(), q.one()), ("t".into(), q.from_int(2))]))?;
    let theta = ok(Cocycle::new(&chi, vec![q.one(), q.zero()]))?;
    let r = ok(classify_affine_action(&chi, &theta, &v))?;
    ensure(r.kind == ActionKind::Exceptional, || format!("classified {}", r.kind.as_str()))?;
    ensure(r.busemann["t"] == 1 && r.busemann["a"] == 0, || format!("busemann {:?}", r.busemann))?;
    let cob = Cocycle::coboundary(&chi, &q.one());
    let k = ok(classify_affine_action(&chi, &cob, &v))?.kind;
    ensure(k == ActionKind::Axial, || format!("coboundary classified {}", k.as_str()))?;
    let unit = ok(make_character(&p, &q, &[("a".into(), q.one()), ("t".into(), q.from_int(3))]))?;
    let theta = ok(Cocycle::new(&unit, vec![q.zero(), q.one()]))?;
    let k = ok(classify_affine_action(&unit, &theta, &v))?.kind;
    ensure(k == ActionKind::BoundedOrbit, || format!("unit character classified {}", k.as_str()))?;
    Ok("exceptional with omega(t)=1, omega(a)=0; axial; bounded-orbit".into())
}

fn cohomology_ground_truth() -> std::result::Result<String, String> {
    let q = Field::rationals();
    let p = bs(2);
    let at = |t: FieldElement| -> std::result::Result<usize, String> {
        Ok(h1(&ok(make_character(&p, &q, &[("a".into(), q.one()), ("t".into(), t)]))?).dim_h1)
    };
    for (t, want) in [
        (q.from_int(2), 1),
        (q.one(), 1),
        (q.from_int(3), 0),
        (q.from_int(5), 0),
        (q.from_int(-1), 0),
        (q.one() / q.from_int(2), 0),
    ] {
        let got = at(t.clone())?;
        ensure(got == want, || format!("BS(1,2) at t={}: dim H1 = {}", t.to_text(), got))?;
    }

    let g2 = genus2();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sampled = 0;
    while sampled < 10 {
        let images: Vec<FieldElement> = (0..4)
            .map(|_| q.from_int(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }) / q.from_int(rng.gen_range(1..=9)))
            .collect();
        let chi = ok(Character::new(&g2, &q, images))?;
        if chi.is_trivial() {
            continue;
        }
        let d = h1(&chi).dim_h1;
        ensure(d == 2, || format!("genus 2 over Q: dim H1 = {} at a nontrivial character", d))?;
        sampled += 1;
    }
    let f5 = Field::prime(5).expect("prime");
    let chars = ok(enumerate_characters_finite(&g2, &f5))?;
    for chi in &chars {
        let d = h1(chi).dim_h1;
        let want = if chi.is_trivial() { 4 } else { 2 };
        ensure(d == want, || format!("genus 2 over F5: dim H1 = {}, expected {}", d, want))?;
    }
    let d = h1(&Character::trivial(&g2, &q)).dim_h1;
    ensure(d == 4, || format!("genus 2 trivial character over Q: dim H1 = {}", d))?;
    Ok(format!("BS(1,2) values; genus 2: 10 samples over Q, {} characters over F5", chars.len()))
}

/// A presentation with at most 3 generators and 2 relators of length at
/// most 8 after free reduction.
pub fn random_presentation(rng: &mut ChaCha8Rng) -> GroupPresentation {
    let names = ["x", "y", "z"];
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=2);
    let relators = (0..m)
        .map(|_| loop {
            let len = rng.gen_range(1..=8);
            let w = Word::from_letters((0..len).map(|_| Letter {
                gen: rng.gen_range(0..n),
                exp: if rng.gen_bool(0.5) { 1 } else { -1 },
            }));
            if !w.is_empty() {
                break w;
            }
        })
        .collect();
    GroupPresentation::new("random", names[..n].iter().map(|s| s.to_string()).collect(), relators)
        .expect("nonempty relators")
}

fn oracle_equivalence() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f5 = Field::prime(5).expect("prime");
    let mut characters = 0;
    let mut cocycles = 0;
    for _ in 0..20 {
        let p = random_presentation(&mut rng);
        for chi in ok(enumerate_characters_finite(&p, &f5))? {
            let r = h1(&chi);
            let direct = direct_h1_dimension(&chi);
            ensure(r.dim_h1 == direct, || {
                format!("{}: Fox {} vs direct {}", p.to_text().replace('\n', "; "), r.dim_h1, direct)
            })?;
            for theta in &r.basis {
                for (i, rel) in p.relators().iter().enumerate() {
                    let v = verify_cocycle_oracle(theta, rel);
                    ensure(v.is_zero(), || format!("basis cocycle fails relator {}", i + 1))?;
                }
                cocycles += 1;
            }
            characters += 1;
        }
    }
    Ok(format!("{} characters, {} basis cocycles", characters, cocycles))
}

/// Record checks for BS(1,n) with `n` prime: one record `t ↦ n` over `Q`
/// that is not an integral unit nor torsion, with one ray at `n`.
pub fn check_bs_prime(n: i64, mp: &MinimalPrimes) -> std::result::Result<(), String> {
    let q = Field::rationals();
    ensure(mp.records.len() == 1, || format!("BS(1,{}): {} records", n, mp.records.len()))?;
    let rec = &mp.records[0];
    ensure(rec.field == q, || format!("BS(1,{}): record over {}", n, rec.field))?;
    ensure(rec.character.image(1) == &q.from_int(n), || {
        format!("BS(1,{}): xi(t) = {}", n, rec.character.image(1).to_text())
    })?;
    ensure(rec.h1.dim_h1 > 0, || "vanishing H1".into())?;
    let i = rec.integrality.ok_or("no integrality")?;
    ensure(!i.integral_unit && !i.torsion, || format!("BS(1,{}): integrality {:?}", n, i))?;
    let rays = ok(bns_rays(&mp.records))?;
    ensure(
        rays.len() == 1 && rays[0].prime == n as u64 && rays[0].omega == vec![0, 1],
        || format!("BS(1,{}): rays {:?}", n, rays.iter().map(|r| (r.prime, r.omega.clone())).collect::<Vec<_>>()),
    )
}

fn alexander_pipeline() -> std::result::Result<String, String> {
    for n in [2i64, 3] {
        let alex = ok(alexander_matrix(&bs(n), 0))?;
        let ideals = ok(alexander_ideal_rank1(&alex))?;
        let trivial_branch = ideals
            .iter()
            .find(|b| b.branch.values.iter().all(|x| x.is_one()))
            .ok_or("no trivial torsion branch")?;
        let g = trivial_branch.generator.display_in("T").to_string();
        ensure(g == format!("T - {}", n), || format!("BS(1,{}): ideal generator {}", n, g))?;
        check_bs_prime(n, &ok(minimal_prime_characters(&alex))?)?;
    }
    let mp6 = ok(minimal_prime_characters(&ok(alexander_matrix(&bs(6), 0))?))?;
    let rays = ok(bns_rays(&mp6.records))?;
    let primes: Vec<u64> = rays.iter().map(|r| r.prime).collect();
    ensure(primes == vec![2, 3], || format!("BS(1,6) rays at {:?}", primes))?;

    let mp2 = ok(minimal_prime_characters(&ok(alexander_matrix(&bs(2), 0))?))?;
    let rec = &mp2.records[0];
    let c = ok(commutator_cocycle(rec, &Word::gen_pow(1, 1)))?;
    let q = Field::rationals();
    ensure(c.values() == [q.one(), q.zero()], || {
        format!("commutator cocycle {:?}", c.values().iter().map(|x| x.to_text()).collect::<Vec<_>>())
    })?;
    ensure(crate::cohomology::is_coboundary(&c).is_none(), || "commutator cocycle is a coboundary".into())?;
    for r in rec.character.presentation().relators() {
        ensure(verify_cocycle_oracle(&c, r).is_zero(), || "commutator cocycle fails the oracle".into())?;
    }
    Ok("T-2 and T-3 with rays at 2 and 3; BS(1,6) rays at 2, 3; c(a)=1, c(t)=0".into())
}

fn orbifold_1_22() -> GroupPresentation {
    crate::orbifold::orbifold_presentation(&OrbifoldSignature::new(1, vec![2, 2]).expect("valid"))
}

fn records_cover() -> std::result::Result<String, String> {
    let groups = [bs(2), bs(3), genus2(), orbifold_1_22()];
    let mut covered = 0;
    for p in [5u64, 7, 11] {
        let field = Field::prime(p).expect("prime");
        for g in &groups {
            let ab = abelianize(g);
            let mp = ok(minimal_prime_characters(&ok(alexander_matrix(g, p))?))?;
            let kernels = mp
                .records
                .iter()
                .map(|r| ok(multiplicative_kernel(&r.character)))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            for r in ok(enumerate_exceptional_finite(g, &field))? {
                ensure(kernels.iter().any(|k| k.is_killed_by(&r.character, &ab)), || {
                    format!(
                        "{} over F{}: no record below {}",
                        g.name(),
                        p,
                        crate::cohomology::named_values(g, r.character.images())
                    )
                })?;
                covered += 1;
            }
        }
    }
    Ok(format!("{} exceptional characters covered", covered))
}

fn orbifold_grid() -> std::result::Result<String, String> {
    let sigs: Vec<OrbifoldSignature> = [(1, vec![2]), (1, vec![2, 2]), (1, vec![3]), (1, vec![2, 3]), (2, vec![]), (2, vec![2])]
        .into_iter()
        .map(|(g, c)| OrbifoldSignature::new(g, c).expect("valid"))
        .collect();
    let fields: Vec<Field> = std::iter::once(Field::rationals())
        .chain([2u64, 3, 5].map(|p| Field::prime(p).expect("prime")))
        .collect();
    let cells = ok(crosscheck_grid(&sigs, &fields, 1 << 20))?;
    let q = Field::rationals();
    let target = [q.one(), q.one(), q.from_int(-1), q.from_int(-1)];
    let mut problems = Vec::new();
    for c in &cells {
        let sig = &c.prediction.signature;
        let field = &c.prediction.hom.field;
        if sig.genus() == 1 && sig.cones() == [2, 2] && *field == q {
            let found = c
                .torsion_exceptional
                .iter()
                .any(|r| r.character.images() == target && r.dim_h1 == 2);
            if !found {
                problems.push("(1,[2,2])/Q: torsion character (1,1,-1,-1) with dim H1 = 2 not found".to_string());
            }
        }
        if sig.genus() == 1 && sig.cones() == [2] && field.characteristic() == 2 && c.exceptional != c.checked {
            problems.push("(1,[2])/F2: not every character exceptional".to_string());
        }
        if !c.agrees {
            let why = if c.generic_families.is_empty() {
                format!("{} contradicting characters", c.contradiction_count)
            } else {
                format!("exceptional families at {}", c.generic_families.join("; "))
            };
            problems.push(format!("{} over {}: verdict {} disagrees ({})", sig, field, c.prediction.verdict.as_str(), why));
        }
    }
    let agreeing = cells.iter().filter(|c| c.agrees).count();
    let finite_torsion = cells.iter().filter(|c| c.prediction.verdict == Verdict::FiniteTorsion).count();
    if problems.is_empty() {
        Ok(format!("{} cells agree ({} finite-torsion verdicts)", agreeing, finite_torsion))
    } else {
        Err(format!("{}/{} cells agree; {}", agreeing, cells.len(), problems.join(" | ")))
    }
}

fn isometry_brute_force() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut counts = [0usize; 3];
    let mut matrices = 0;
    for v in [q_v2(), f3t_vt()] {
        let mut done = 0;
        while done < 100 {
            let entries: [FieldElement; 4] =
                std::array::from_fn(|_| random_with_valuation(&v, rng.gen_range(-2..=2), &mut rng));
            let Ok(g) = TreeIsometry::new(&v, entries) else {
                continue;
            };
            let class = classify_isometry(&g);
            let center = ok(descend_displacement(&g, &LatticeClass::standard(&v, 0)))?;
            let survey = ok(survey_displacement(&g, &center, class.length + 3))?;
            ensure(classification_matches_survey(class, &survey), || {
                format!("{} classified {:?}, survey {:?}", g, class, survey)
            })?;
            counts[match class.kind {
                IsometryKind::Elliptic => 0,
                IsometryKind::Inversion => 1,
                IsometryKind::Hyperbolic => 2,
            }] += 1;
            done += 1;
            matrices += 1;
        }
    }
    Ok(format!(
        "{} matrices; elliptic {}, inversion {}, hyperbolic {}",
        matrices, counts[0], counts[1], counts[2]
    ))
}

fn integrality() -> std::result::Result<String, String> {
    let q = Field::rationals();
    let poly = |s: &str| parse_poly(&q, "x", s).expect("valid polynomial");
    let i = ok(root_integrality(&poly("x^2 + x + 1")))?;
    ensure(i.torsion && i.order == Some(3), || format!("x^2+x+1: {:?}", i))?;
    let i = ok(root_integrality(&poly("x^2 - x - 1")))?;
    ensure(i.integral_unit && !i.torsion, || format!("x^2-x-1: {:?}", i))?;
    let i = ok(root_integrality(&poly("x - 2")))?;
    ensure(!i.integral_unit, || format!("x-2: {:?}", i))?;
    let pool = [
        "x^2 + x + 1",
        "x^2 - x - 1",
        "x - 2",
        "x + 1",
        "x - 1",
        "x^2 + 1",
        "x^4 + 1",
        "x^4 - x^2 + 1",
        "x^2 - 2",
        "x^3 - x - 1",
        "x^4 + x^3 + x^2 + x + 1",
        "x^2 - x + 1",
        "x^6 + x^3 + 1",
    ];
    for s in pool {
        let f = poly(s);
        let i = ok(root_integrality(&f))?;
        let d = cyclotomic_division_order(&f);
        ensure(i.torsion == d.is_some() && i.order == d, || {
            format!("{}: Graeffe {:?} vs division {:?}", s, i, d)
        })?;
    }
    Ok(format!("{} polynomials agree with cyclotomic division", pool.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metabelian::ExceptionalCharacterRecord;

    #[test]
    fn corrupted_record_fails_the_pipeline_check() {
        let mut mp = minimal_prime_characters(&alexander_matrix(&bs(2), 0).unwrap()).unwrap();
        assert!(check_bs_prime(2, &mp).is_ok());
        let q = Field::rationals();
        let rec: &mut ExceptionalCharacterRecord = &mut mp.records[0];
        rec.character = make_character(rec.character.presentation(), &q, &[("a".into(), q.one()), ("t".into(), q.from_int(5))]).unwrap();
        assert!(check_bs_prime(2, &mp).is_err());
        mp.records.clear();
        assert!(check_bs_prime(2, &mp).is_err());
    }

    #[test]
    fn random_presentations_are_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_presentation(&mut rng);
            assert!(p.ngens() <= 3 && p.relators().len() <= 2);
            assert!(p.relators().iter().all(|r| !r.is_empty() && r.len() <= 8));
        }
    }
}
