//! Subcommand bodies. Each returns the text for standard output; errors are
//! rendered as JSON on standard error by the caller.

use std::fs;
use std::path::Path;

use jumploci_core::algebra::field::{Field, FieldElement};
use jumploci_core::algebra::parse::{parse_element, parse_field};
use jumploci_core::bruhat_tits::{
    ball, busemann_cocycle, busemann_limit, canonical_lattice, classify_affine_action, classify_isometry,
    vertex_neighbors, BorelEnd, LatticeClass, TreeIsometry,
};
use jumploci_core::cohomology::{enumerate_characters_finite, h1 as h1_report, named_values, Cocycle};
use jumploci_core::metabelian::{
    alexander_ideal_rank1, alexander_matrix, bns_rays, commutator_cocycle, minimal_prime_characters,
};
use jumploci_core::orbifold::{crosscheck_cell, predict_e1, OrbifoldSignature};
use jumploci_core::presentation::{make_character, Character, GroupPresentation};
use jumploci_core::selftest::criteria;
use jumploci_core::valuation::DiscreteValuation;
use jumploci_core::Error;
use serde_json::{json, Value};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn json(v: Value) -> Result<Output, CliError> {
        Ok(Output {
            text: format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
            code: 0,
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 1 for a mathematical rejection, 2 for a malformed request.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_mathematical() || matches!(e, Error::Unsupported(_)) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Core(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::Usage(m) => json!({"error": "usage", "message": m}),
        }
    }
}

fn read_presentation(path: &Path) -> Result<GroupPresentation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e)))?;
    Ok(GroupPresentation::parse(&text)?)
}

/// `name=value` pairs separated by commas.
fn assignments(text: &str) -> Result<Vec<(String, String)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected name=value, found `{}`", s)))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_character(p: &GroupPresentation, field: &Field, text: &str) -> Result<Character, CliError> {
    let images = assignments(text)?
        .into_iter()
        .map(|(k, v)| Ok((k, parse_element(field, &v)?)))
        .collect::<Result<Vec<(String, FieldElement)>, Error>>()?;
    Ok(make_character(p, field, &images)?)
}

fn parse_cocycle(chi: &Character, text: &str) -> Result<Cocycle, CliError> {
    let p = chi.presentation();
    let mut values: Vec<Option<FieldElement>> = vec![None; p.ngens()];
    for (k, v) in assignments(text)? {
        let i = p.generator_index(&k).ok_or(Error::UndeclaredGenerator(k.clone()))?;
        values[i] = Some(parse_element(chi.field(), &v)?);
    }
    let values = values
        .into_iter()
        .zip(p.generators())
        .map(|(v, g)| v.ok_or_else(|| CliError::Usage(format!("no cocycle value for `{}`", g))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cocycle::new(chi, values)?)
}

fn parse_matrix(v: &DiscreteValuation, text: &str) -> Result<TreeIsometry, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!("--matrix needs 4 entries, found {}", parts.len())));
    }
    let e = parts
        .iter()
        .map(|s| parse_element(v.field(), s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d]: [FieldElement; 4] = e.try_into().expect("four entries");
    Ok(TreeIsometry::new(v, [a, b, c, d])?)
}

fn valued_matrix(field: &str, val: &str, matrix: &str) -> Result<TreeIsometry, CliError> {
    let f = parse_field(field)?;
    let v = DiscreteValuation::parse(&f, val)?;
    parse_matrix(&v, matrix)
}

pub fn h1(file: &Path, field: &str, character: &str) -> Result<Output, CliError> {
    let p = read_presentation(file)?;
    let f = parse_field(field)?;
    let chi = parse_character(&p, &f, character)?;
    Output::json(h1_report(&chi).to_json())
}

pub fn jumplocus(file: &Path, field: &str) -> Result<Output, CliError> {
    let p = read_presentation(file)?;
    let f = parse_field(field)?;
    let chars = enumerate_characters_finite(&p, &f)?;
    let reports: Vec<Value> = chars
        .iter()
        .map(h1_report)
        .filter(|r| r.exceptional)
        .map(|r| r.to_json())
        .collect();
    Output::json(json!({
        "group": p.name(),
        "field": f.to_string(),
        "characters": chars.len(),
        "exceptionalCount": reports.len(),
        "exceptional": reports,
    }))
}

pub fn alexander(file: &Path, char_p: u64, g0: Option<&str>) -> Result<Output, CliError> {
    let p = read_presentation(file)?;
    let alex = alexander_matrix(&p, char_p)?;
    let ideals = match alexander_ideal_rank1(&alex) {
        Ok(ideals) => json!(ideals
            .iter()
            .map(|b| json!({"branch": b.branch.describe(), "generator": b.generator.display_in("T").to_string()}))
            .collect::<Vec<_>>()),
        Err(Error::Unsupported(m)) => json!({"unsupported": m}),
        Err(e) => return Err(e.into()),
    };
    let mp = minimal_prime_characters(&alex)?;
    let mut report = json!({
        "group": p.name(),
        "characteristic": char_p,
        "alexander": alex.to_json(),
        "ideals": ideals,
        "records": mp.records.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "rejected": mp.rejected,
        "unresolved": mp.unresolved,
    });
    if let Some(text) = g0 {
        let w = p.parse_word(text)?;
        let cocycles: Vec<Value> = mp
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| match commutator_cocycle(r, &w) {
                Ok(c) => json!({"record": i, "values": named_values(&p, c.values())}),
                Err(e) => json!({"record": i, "error": e.to_string()}),
            })
            .collect();
        report["commutatorCocycles"] = json!(cocycles);
    }
    let rays = bns_rays(&mp.records)?;
    report["bnsRays"] = json!(rays.iter().map(|r| r.to_json(p.generators())).collect::<Vec<_>>());
    Output::json(report)
}

pub fn tree_classify(field: &str, val: &str, matrix: &str) -> Result<Output, CliError> {
    let g = valued_matrix(field, val, matrix)?;
    let c = classify_isometry(&g);
    Output::json(json!({"kind": c.kind.as_str(), "length": c.length}))
}

pub fn tree_canonical(field: &str, val: &str, matrix: &str) -> Result<Output, CliError> {
    let g = valued_matrix(field, val, matrix)?;
    let x = canonical_lattice(&g)?;
    let mut v = x.to_json();
    v["label"] = json!(x.to_string());
    Output::json(v)
}

pub fn tree_busemann(field: &str, val: &str, matrix: &str) -> Result<Output, CliError> {
    let g = valued_matrix(field, val, matrix)?;
    Output::json(json!({
        "busemann": busemann_cocycle(&g, BorelEnd)?,
        "limit": busemann_limit(&g)?,
    }))
}

pub fn tree_ball(field: &str, val: &str, matrix: &str, radius: u64, dot: bool) -> Result<Output, CliError> {
    let g = valued_matrix(field, val, matrix)?;
    let b = ball(&canonical_lattice(&g)?, radius)?;
    if dot {
        Ok(Output {
            text: b.to_dot(),
            code: 0,
        })
    } else {
        Output::json(b.to_json())
    }
}

pub fn tree_neighbors(field: &str, val: &str, matrix: &str) -> Result<Output, CliError> {
    let g = valued_matrix(field, val, matrix)?;
    let x = canonical_lattice(&g)?;
    let ns: Vec<LatticeClass> = vertex_neighbors(&x)?;
    Output::json(json!({
        "vertex": x.to_string(),
        "neighbors": ns.iter().map(|y| y.to_string()).collect::<Vec<_>>(),
    }))
}

pub fn affine_action(file: &Path, field: &str, character: &str, cocycle: &str, val: &str) -> Result<Output, CliError> {
    let p = read_presentation(file)?;
    let f = parse_field(field)?;
    let chi = parse_character(&p, &f, character)?;
    let theta = parse_cocycle(&chi, cocycle)?;
    let v = DiscreteValuation::parse(&f, val)?;
    let r = classify_affine_action(&chi, &theta, &v)?;
    Output::json(r.to_json(p.generators()))
}

pub fn orbifold(genus: u32, cones: Vec<u64>, field: &str, check: bool, budget: usize) -> Result<Output, CliError> {
    let sig = OrbifoldSignature::new(genus, cones)?;
    let f = parse_field(field)?;
    if check {
        let cell = crosscheck_cell(&sig, &f, budget)?;
        Output::json(json!({
            "verdict": cell.prediction.verdict.as_str(),
            "agrees": cell.agrees,
            "prediction": cell.prediction.to_json(),
            "check": cell.to_json(),
        }))
    } else {
        let pred = predict_e1(&sig, &f)?;
        Output::json(json!({
            "verdict": pred.verdict.as_str(),
            "prediction": pred.to_json(),
        }))
    }
}

pub fn selftest(only: &[u32], lines: bool) -> Result<Output, CliError> {
    let all = criteria();
    if let Some(id) = only.iter().find(|id| !all.iter().any(|c| c.id == **id)) {
        return Err(CliError::Usage(format!("no criterion {}", id)));
    }
    let outcomes: Vec<_> = all
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(|c| c.run())
        .collect();
    let passed = outcomes.iter().all(|o| o.passed);
    let text = if lines {
        let mut s: String = outcomes.iter().map(|o| format!("{}\n", o.line())).collect();
        s.push_str(&format!(
            "{}/{} criteria passed\n",
            outcomes.iter().filter(|o| o.passed).count(),
            outcomes.len()
        ));
        s
    } else {
        let v = json!({
            "passed": passed,
            "criteria": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        });
        format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
    };
    Ok(Output {
        text,
        code: if passed { 0 } else { 1 },
    })
}
