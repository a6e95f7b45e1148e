//! The Bruhat–Tits tree of `GL(2)` over a discretely valued field.
//!
//! Vertices are homothety classes of lattices, each written as the column
//! span of `[[π^n, u], [0, 1]]` with `u` reduced modulo `π^n O_v`. The Borel
//! end is reached as `n → −∞`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::field::FieldElement;
use crate::cohomology::Cocycle;
use crate::error::{Error, Result};
use crate::presentation::{Character, Word};
use crate::valuation::DiscreteValuation;

/// Largest residue field whose neighbors are enumerated.
pub const NEIGHBOR_LIMIT: u64 = 1 << 16;

/// A vertex `[[π^n, u], [0, 1]]` with `u = 0` or `v(u) < n`.
#[derive(Debug, Clone)]
pub struct LatticeClass {
    valuation: DiscreteValuation,
    n: i64,
    u: FieldElement,
}

impl PartialEq for LatticeClass {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.u == other.u
    }
}

impl Eq for LatticeClass {}

impl Hash for LatticeClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.u.hash(state);
    }
}

impl PartialOrd for LatticeClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticeClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.u).cmp(&(other.n, &other.u))
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.n, self.u)
    }
}

impl LatticeClass {
    /// `Λ_n`, spanned by `π^n e_1` and `e_2`.
    pub fn standard(v: &DiscreteValuation, n: i64) -> LatticeClass {
        LatticeClass {
            valuation: v.clone(),
            n,
            u: v.field().zero(),
        }
    }

    pub fn new(v: &DiscreteValuation, n: i64, u: &FieldElement) -> Result<LatticeClass> {
        Ok(LatticeClass {
            valuation: v.clone(),
            n,
            u: v.reduce_mod_power(u, n)?,
        })
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    pub fn offset(&self) -> &FieldElement {
        &self.u
    }

    pub fn valuation(&self) -> &DiscreteValuation {
        &self.valuation
    }

    /// The basis matrix `[[π^n, u], [0, 1]]`.
    pub fn matrix(&self) -> TreeIsometry {
        let f = self.valuation.field();
        TreeIsometry {
            valuation: self.valuation.clone(),
            m: [
                self.valuation.uniformizer_pow(self.n),
                self.u.clone(),
                f.zero(),
                f.one(),
            ],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "u": self.u.to_json()})
    }
}

/// An invertible 2×2 matrix `[[a, b], [c, d]]` acting on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeIsometry {
    valuation: DiscreteValuation,
    m: [FieldElement; 4],
}

impl TreeIsometry {
    pub fn new(v: &DiscreteValuation, entries: [FieldElement; 4]) -> Result<TreeIsometry> {
        for x in &entries {
            if x.field() != v.field() {
                return Err(Error::FieldMismatch(x.field().to_string(), v.field().to_string()));
            }
        }
        let g = TreeIsometry {
            valuation: v.clone(),
            m: entries,
        };
        if g.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(g)
    }

    pub fn from_ints(v: &DiscreteValuation, e: [i64; 4]) -> Result<TreeIsometry> {
        let f = v.field();
        TreeIsometry::new(v, e.map(|x| f.from_int(x)))
    }

    pub fn entries(&self) -> &[FieldElement; 4] {
        &self.m
    }

    pub fn valuation(&self) -> &DiscreteValuation {
        &self.valuation
    }

    pub fn det(&self) -> FieldElement {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn trace(&self) -> FieldElement {
        &self.m[0] + &self.m[3]
    }

    pub fn mul(&self, o: &TreeIsometry) -> TreeIsometry {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &o.m;
        TreeIsometry {
            valuation: self.valuation.clone(),
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    pub fn inverse(&self) -> TreeIsometry {
        let inv = self.det().inv();
        let [a, b, c, d] = &self.m;
        TreeIsometry {
            valuation: self.valuation.clone(),
            m: [d * &inv, -(b * &inv), -(c * &inv), a * &inv],
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.m[2].is_zero()
    }
}

impl fmt::Display for TreeIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Elliptic,
    Inversion,
    Hyperbolic,
}

impl IsometryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IsometryKind::Elliptic => "elliptic",
            IsometryKind::Inversion => "inversion",
            IsometryKind::Hyperbolic => "hyperbolic",
        }
    }
}

/// `length > 0` iff the kind is hyperbolic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    pub length: u64,
}

/// The end fixed by upper-triangular matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BorelEnd;

fn val_or_inf(v: &DiscreteValuation, x: &FieldElement) -> Option<i64> {
    v.valuate(x).expect("same field")
}

/// Column reduction of the basis matrix to `[[π^n, u], [0, 1]]`.
pub fn canonical_lattice(m: &TreeIsometry) -> Result<LatticeClass> {
    let v = m.valuation();
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let [a, b, c, d] = m.m.clone();
    // the column whose bottom entry has least valuation goes second
    let (a, b, c, d) = match (val_or_inf(v, &c), val_or_inf(v, &d)) {
        (Some(vc), Some(vd)) if vc < vd => (b, a, d, c),
        (Some(_), None) => (b, a, d, c),
        _ => (a, b, c, d),
    };
    let r = &c / &d;
    let a = &a - &(&r * &b);
    // homothety by 1/d, then a unit rescaling of the first column
    let u = &b / &d;
    let n = v.val(&a) - v.val(&d);
    LatticeClass::new(v, n, &u)
}

/// `v(det(A⁻¹B)) − 2·min v(entries of A⁻¹B)`.
pub fn lattice_distance(x: &LatticeClass, y: &LatticeClass) -> Result<u64> {
    if x.valuation != y.valuation {
        return Err(Error::FieldMismatch(
            x.valuation.to_string(),
            y.valuation.to_string(),
        ));
    }
    let v = &x.valuation;
    let m = x.matrix().inverse().mul(&y.matrix());
    let min = m
        .m
        .iter()
        .filter_map(|e| val_or_inf(v, e))
        .min()
        .expect("invertible");
    Ok((v.val(&m.det()) - 2 * min) as u64)
}

pub fn apply_isometry(g: &TreeIsometry, x: &LatticeClass) -> Result<LatticeClass> {
    if g.valuation != x.valuation {
        return Err(Error::FieldMismatch(
            g.valuation.to_string(),
            x.valuation.to_string(),
        ));
    }
    canonical_lattice(&g.mul(&x.matrix()))
}

/// `ℓ = max(0, v(det) − 2 v(tr))`; with `ℓ = 0` the parity of `v(det)`
/// separates elliptic elements from inversions.
pub fn classify_isometry(g: &TreeIsometry) -> IsometryClass {
    let v = g.valuation();
    let vdet = v.val(&g.det());
    let length = match val_or_inf(v, &g.trace()) {
        Some(vt) => (vdet - 2 * vt).max(0) as u64,
        None => 0,
    };
    let kind = if length > 0 {
        IsometryKind::Hyperbolic
    } else if vdet.rem_euclid(2) == 0 {
        IsometryKind::Elliptic
    } else {
        IsometryKind::Inversion
    };
    IsometryClass { kind, length }
}

/// `ω(g) = v(a/d)` for upper-triangular `g`.
pub fn busemann_cocycle(g: &TreeIsometry, _end: BorelEnd) -> Result<i64> {
    if !g.is_upper_triangular() {
        return Err(Error::Precondition(format!("{} is not upper triangular", g)));
    }
    let v = g.valuation();
    let closed = v.val(&g.m[0]) - v.val(&g.m[3]);
    debug_assert_eq!(Some(closed), busemann_limit(g).ok());
    Ok(closed)
}

/// `lim d(gΛ₀, Λ_m) − d(Λ₀, Λ_m)` as `m → −∞`, evaluated at two levels past
/// the stabilization bound `m ≤ min(0, n, v(u)) − 1`.
pub fn busemann_limit(g: &TreeIsometry) -> Result<i64> {
    if !g.is_upper_triangular() {
        return Err(Error::Precondition(format!("{} is not upper triangular", g)));
    }
    let v = g.valuation();
    let base = LatticeClass::standard(v, 0);
    let image = apply_isometry(g, &base)?;
    let vu = val_or_inf(v, image.offset()).unwrap_or(i64::MAX);
    let bound = 0.min(image.level()).min(vu) - 1;
    let at = |m: i64| -> Result<i64> {
        let lm = LatticeClass::standard(v, m);
        Ok(lattice_distance(&image, &lm)? as i64 - lattice_distance(&base, &lm)? as i64)
    };
    let b = at(bound)?;
    if at(bound - 1)? != b {
        return Err(Error::Precondition("Busemann limit did not stabilize".into()));
    }
    Ok(b)
}

/// The `q + 1` vertices adjacent to `x`.
pub fn vertex_neighbors(x: &LatticeClass) -> Result<Vec<LatticeClass>> {
    let v = x.valuation();
    let reps = v.residue_representatives(NEIGHBOR_LIMIT).ok_or_else(|| {
        Error::Unsupported(format!("neighbors for {}: residue field too large or infinite", v))
    })?;
    let f = v.field();
    let pi = v.uniformizer().clone();
    let a = x.matrix();
    let mut out = Vec::with_capacity(reps.len() + 1);
    for r in reps {
        let step = TreeIsometry {
            valuation: v.clone(),
            m: [pi.clone(), r, f.zero(), f.one()],
        };
        out.push(canonical_lattice(&a.mul(&step))?);
    }
    let down = TreeIsometry {
        valuation: v.clone(),
        m: [f.one(), f.zero(), f.zero(), pi],
    };
    out.push(canonical_lattice(&a.mul(&down))?);
    Ok(out)
}

/// Vertices within `radius` of `center` with their distances, and the edges
/// between them, in breadth-first order.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: LatticeClass,
    pub radius: u64,
    pub vertices: Vec<(LatticeClass, u64)>,
    pub edges: Vec<(usize, usize)>,
}

pub fn ball(center: &LatticeClass, radius: u64) -> Result<Ball> {
    let mut index: HashMap<LatticeClass, usize> = HashMap::new();
    let mut vertices = vec![(center.clone(), 0)];
    let mut edges = Vec::new();
    index.insert(center.clone(), 0);
    let mut layer = 0..1;
    for d in 0..radius {
        // neighbors are computed in parallel and merged in layer order
        let found: Vec<Vec<LatticeClass>> = vertices[layer.clone()]
            .par_iter()
            .map(|(x, _)| vertex_neighbors(x))
            .collect::<Result<_>>()?;
        let start = vertices.len();
        for (i, ys) in layer.zip(found) {
            for y in ys {
                if index.contains_key(&y) {
                    continue;
                }
                let j = vertices.len();
                index.insert(y.clone(), j);
                vertices.push((y, d + 1));
                edges.push((i, j));
            }
        }
        layer = start..vertices.len();
    }
    Ok(Ball {
        center: center.clone(),
        radius,
        vertices,
        edges,
    })
}

impl Ball {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ball {\n");
        for (x, _) in &self.vertices {
            s.push_str(&format!("  \"{}\";\n", x));
        }
        for (i, j) in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                self.vertices[*i].0, self.vertices[*j].0
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "center": self.center.to_json(),
            "radius": self.radius,
            "vertices": self.vertices.iter().map(|(x, d)| {
                json!({"label": x.to_string(), "n": x.level(), "u": x.offset().to_json(), "depth": d})
            }).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
        })
    }
}

pub fn displacement(g: &TreeIsometry, x: &LatticeClass) -> Result<u64> {
    lattice_distance(x, &apply_isometry(g, x)?)
}

/// Walks to a neighbor with smaller displacement until none exists; by
/// convexity of displacement the endpoint lies in the minimal set.
pub fn descend_displacement(g: &TreeIsometry, start: &LatticeClass) -> Result<LatticeClass> {
    let mut x = start.clone();
    let mut d = displacement(g, &x)?;
    loop {
        let mut moved = false;
        for y in vertex_neighbors(&x)? {
            let dy = displacement(g, &y)?;
            if dy < d {
                x = y;
                d = dy;
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok(x);
        }
    }
}

/// Minimum displacement over a ball and whether a fixed vertex occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisplacementSurvey {
    pub minimum: u64,
    pub has_fixed_vertex: bool,
    pub vertices: usize,
}

pub fn survey_displacement(g: &TreeIsometry, center: &LatticeClass, radius: u64) -> Result<DisplacementSurvey> {
    let b = ball(center, radius)?;
    let minimum = b
        .vertices
        .par_iter()
        .map(|(x, _)| displacement(g, x))
        .try_reduce(|| u64::MAX, |a, b| Ok(a.min(b)))?;
    Ok(DisplacementSurvey {
        minimum,
        has_fixed_vertex: minimum == 0,
        vertices: b.vertices.len(),
    })
}

/// Whether the classification agrees with brute force around `center`.
pub fn classification_matches_survey(class: IsometryClass, s: &DisplacementSurvey) -> bool {
    match class.kind {
        IsometryKind::Hyperbolic => s.minimum == class.length,
        IsometryKind::Elliptic => s.has_fixed_vertex,
        IsometryKind::Inversion => s.minimum == 1 && !s.has_fixed_vertex,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Exceptional,
    Axial,
    BoundedOrbit,
}

impl ActionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::Exceptional => "exceptional",
            ActionKind::Axial => "axial",
            ActionKind::BoundedOrbit => "bounded-orbit",
        }
    }
}

/// Why no `μ` with `θ(x) = μ(χ(x) − 1)` exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MuCertificate {
    /// `χ(x) = 1` but `θ(x) ≠ 0`.
    FixedGenerator { generator: String, theta: FieldElement },
    /// Two generators force different values of `μ`.
    Conflict {
        first: String,
        mu_first: FieldElement,
        second: String,
        mu_second: FieldElement,
    },
}

impl MuCertificate {
    pub fn to_json(&self) -> Value {
        match self {
            MuCertificate::FixedGenerator { generator, theta } => json!({
                "kind": "fixed-generator",
                "generator": generator,
                "theta": theta.to_json(),
            }),
            MuCertificate::Conflict {
                first,
                mu_first,
                second,
                mu_second,
            } => json!({
                "kind": "conflict",
                "first": first,
                "muFirst": mu_first.to_json(),
                "second": second,
                "muSecond": mu_second.to_json(),
            }),
        }
    }
}

/// The affine action `g ↦ [[χ(g), θ(g)], [0, 1]]` on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineActionReport {
    pub kind: ActionKind,
    /// `ω(x) = v(χ(x))` per generator, in generator order.
    pub busemann: BTreeMap<String, i64>,
    /// A generator acting hyperbolically.
    pub hyperbolic_witness: Option<(Word, IsometryClass)>,
    pub mu: Option<FieldElement>,
    pub mu_certificate: Option<MuCertificate>,
}

impl AffineActionReport {
    pub fn to_json(&self, names: &[String]) -> Value {
        let busemann: serde_json::Map<String, Value> = names
            .iter()
            .map(|n| (n.clone(), json!(self.busemann[n])))
            .collect();
        json!({
            "classification": self.kind.as_str(),
            "busemann": busemann,
            "hyperbolicWitness": self.hyperbolic_witness.as_ref().map(|(w, c)| json!({
                "word": w.display(names).to_string(),
                "translationLength": c.length,
            })),
            "mu": self.mu.as_ref().map(|m| m.to_json()),
            "muCertificate": self.mu_certificate.as_ref().map(MuCertificate::to_json),
        })
    }
}

fn solve_mu(theta: &Cocycle) -> std::result::Result<FieldElement, MuCertificate> {
    let chi = theta.character();
    let names = chi.presentation().generators();
    let one = chi.field().one();
    let mut found: Option<(usize, FieldElement)> = None;
    for (i, (x, t)) in chi.images().iter().zip(theta.values()).enumerate() {
        let d = x - &one;
        if d.is_zero() {
            if !t.is_zero() {
                return Err(MuCertificate::FixedGenerator {
                    generator: names[i].clone(),
                    theta: t.clone(),
                });
            }
            continue;
        }
        let mu = t / &d;
        match &found {
            Some((j, m)) if *m != mu => {
                return Err(MuCertificate::Conflict {
                    first: names[*j].clone(),
                    mu_first: m.clone(),
                    second: names[i].clone(),
                    mu_second: mu,
                })
            }
            Some(_) => {}
            None => found = Some((i, mu)),
        }
    }
    Ok(found.map(|(_, m)| m).unwrap_or_else(|| chi.field().zero()))
}

pub fn classify_affine_action(
    chi: &Character,
    theta: &Cocycle,
    v: &DiscreteValuation,
) -> Result<AffineActionReport> {
    if chi.field() != v.field() {
        return Err(Error::FieldMismatch(chi.field().to_string(), v.field().to_string()));
    }
    if theta.character() != chi {
        return Err(Error::InvalidInput("cocycle belongs to a different character".into()));
    }
    let names = chi.presentation().generators();
    let f = chi.field();
    let mut busemann = BTreeMap::new();
    let mut witness = None;
    for (i, name) in names.iter().enumerate() {
        let g = TreeIsometry::new(v, [chi.image(i).clone(), theta.value(i).clone(), f.zero(), f.one()])?;
        busemann.insert(name.clone(), busemann_cocycle(&g, BorelEnd)?);
        let class = classify_isometry(&g);
        if witness.is_none() && class.kind == IsometryKind::Hyperbolic {
            witness = Some((Word::gen_pow(i, 1), class));
        }
    }
    let mu = solve_mu(theta);
    let kind = if busemann.values().all(|&w| w == 0) {
        ActionKind::BoundedOrbit
    } else if mu.is_ok() {
        ActionKind::Axial
    } else {
        ActionKind::Exceptional
    };
    let (mu, mu_certificate) = match mu {
        Ok(m) => (Some(m), None),
        Err(c) => (None, Some(c)),
    };
    Ok(AffineActionReport {
        kind,
        busemann,
        hyperbolic_witness: witness,
        mu,
        mu_certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::parse::parse_field;
    use crate::presentation::{make_character, GroupPresentation};

    fn v2() -> DiscreteValuation {
        DiscreteValuation::p_adic(2).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let v = v2();
        let q = v.field().clone();
        let x = canonical_lattice(&TreeIsometry::from_ints(&v, [4, 6, 0, 1]).unwrap()).unwrap();
        assert_eq!((x.level(), x.offset().clone()), (2, q.from_int(2)));
        let id = canonical_lattice(&TreeIsometry::from_ints(&v, [1, 0, 0, 1]).unwrap()).unwrap();
        assert_eq!(id, LatticeClass::standard(&v, 0));
        let h = canonical_lattice(&TreeIsometry::from_ints(&v, [2, 0, 0, 2]).unwrap()).unwrap();
        assert_eq!(h, LatticeClass::standard(&v, 0));
        assert!(TreeIsometry::from_ints(&v, [1, 2, 2, 4]).is_err());
    }

    #[test]
    fn distances() {
        let v = v2();
        let l = |n| LatticeClass::standard(&v, n);
        assert_eq!(lattice_distance(&l(0), &l(3)).unwrap(), 3);
        assert_eq!(lattice_distance(&l(1), &l(-1)).unwrap(), 2);
        assert_eq!(lattice_distance(&l(1), &l(1)).unwrap(), 0);
    }

    #[test]
    fn classification_examples() {
        let v = v2();
        let c = |e| classify_isometry(&TreeIsometry::from_ints(&v, e).unwrap());
        assert_eq!(c([2, 0, 0, 1]), IsometryClass { kind: IsometryKind::Hyperbolic, length: 1 });
        assert_eq!(c([1, 1, 0, 1]).kind, IsometryKind::Elliptic);
        assert_eq!(c([0, 1, 2, 0]).kind, IsometryKind::Inversion);
    }

    #[test]
    fn busemann_examples() {
        let v = v2();
        let q = v.field().clone();
        let g = TreeIsometry::from_ints(&v, [2, 5, 0, 1]).unwrap();
        assert_eq!(busemann_cocycle(&g, BorelEnd).unwrap(), 1);
        assert_eq!(busemann_limit(&g).unwrap(), 1);
        let h = TreeIsometry::new(&v, [q.one() / q.from_int(2), q.from_int(3), q.zero(), q.one()]).unwrap();
        assert_eq!(busemann_cocycle(&h, BorelEnd).unwrap(), -1);
        assert_eq!(busemann_limit(&h).unwrap(), -1);
        let id = TreeIsometry::from_ints(&v, [1, 0, 0, 1]).unwrap();
        assert_eq!(busemann_limit(&id).unwrap(), 0);
        assert!(busemann_cocycle(&TreeIsometry::from_ints(&v, [1, 0, 1, 1]).unwrap(), BorelEnd).is_err());
    }

    #[test]
    fn neighbor_counts() {
        let v = v2();
        let base = LatticeClass::standard(&v, 0);
        let ns = vertex_neighbors(&base).unwrap();
        assert_eq!(ns.len(), 3);
        for y in &ns {
            assert_eq!(lattice_distance(&base, y).unwrap(), 1);
        }
        let f3t = parse_field("F3(t)").unwrap();
        let vt = DiscreteValuation::parse(&f3t, "pi:t").unwrap();
        assert_eq!(vertex_neighbors(&LatticeClass::standard(&vt, 0)).unwrap().len(), 4);
        let qt = parse_field("Q(t)").unwrap();
        let vq = DiscreteValuation::parse(&qt, "pi:t").unwrap();
        assert!(vertex_neighbors(&LatticeClass::standard(&vq, 0)).is_err());
    }

    #[test]
    fn ball_sizes_and_dot() {
        let v = v2();
        let b = ball(&LatticeClass::standard(&v, 0), 2).unwrap();
        // 1 + 3 + 3·2
        assert_eq!(b.vertices.len(), 10);
        assert_eq!(b.edges.len(), 9);
        assert!(b.to_dot().contains("\"(0; 0)\" -- \"(1; 0)\";"));
    }

    #[test]
    fn affine_action_verdicts() {
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        let q = Field::rationals();
        let v = v2();
        let chi = make_character(&p, &q, &[("a".into(), q.one()), ("t".into(), q.from_int(2))]).unwrap();
        let theta = Cocycle::new(&chi, vec![q.one(), q.zero()]).unwrap();
        let r = classify_affine_action(&chi, &theta, &v).unwrap();
        assert_eq!(r.kind, ActionKind::Exceptional);
        assert_eq!(r.busemann["t"], 1);
        assert_eq!(r.busemann["a"], 0);
        assert!(r.mu_certificate.is_some());
        let cob = Cocycle::coboundary(&chi, &q.one());
        assert_eq!(classify_affine_action(&chi, &cob, &v).unwrap().kind, ActionKind::Axial);
        let unit = make_character(&p, &q, &[("a".into(), q.one()), ("t".into(), q.one())]).unwrap();
        let theta = Cocycle::new(&unit, vec![q.zero(), q.one()]).unwrap();
        assert_eq!(classify_affine_action(&unit, &theta, &v).unwrap().kind, ActionKind::BoundedOrbit);
    }
}
