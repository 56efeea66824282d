//! Seeded property batteries over random spaces.
//!
//! Every property draws its own random stream from the seed, so results do
//! not depend on how properties are scheduled across workers. A property
//! stops at its first failing trial and reports that trial as a
//! counterexample.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::constructions::{discrete_witness, normalize_basis, projection_split, quotient_witness, BasisSpace};
use crate::doubling::{covering_number, greedy_covering_number, scale_grid};
use crate::error::Result;
use crate::exec::Exec;
use crate::free::{
    delta, four_point_norm, free_norm, free_norm_dual, free_norm_flow, support, FlowSolution, FreeVector,
};
use crate::io::{coeffs_to_value, function_to_value, space_to_value, witness_to_value};
use crate::lip::{lipschitz_number, mcshane_extend, pairing, separating_function};
use crate::metric::{distance_to_set, quotient, subspace, sum, sum_with_embeddings, MetricSpace, PointMap, SpaceRef};
use crate::random::{self, TestRng};
use crate::rational::{self, ratio, Rational};
use crate::witness::{operator_norm_with, validate_witness_with, LinearWitness};

/// Deliberate corruption used to check that the batteries can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The flow solver sees every distance stretched by `11/10`.
    PerturbDistances,
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Spaces have between the property's minimum and this many points.
    pub max_points: usize,
    /// Random spaces per property.
    pub spaces: usize,
    pub fault: Option<Fault>,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0, max_points: 8, spaces: 200, fault: None, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub battery: &'static str,
    pub name: &'static str,
    pub trials: usize,
    pub passed: bool,
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub max_points: usize,
    pub spaces: usize,
    pub fault: Option<Fault>,
    pub results: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn result(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn to_value(&self) -> Value {
        let properties: Vec<Value> = self
            .results
            .iter()
            .map(|r| {
                json!({
                    "battery": r.battery,
                    "name": r.name,
                    "trials": r.trials,
                    "passed": r.passed,
                    "counterexample": r.counterexample,
                })
            })
            .collect();
        json!({
            "seed": self.seed,
            "max_points": self.max_points,
            "spaces": self.spaces,
            "fault": self.fault.map(|_| "perturb-distances"),
            "passed": self.passed(),
            "properties": properties,
        })
    }
}

/// `Ok(None)` is a pass; `Ok(Some(details))` a counterexample.
type Check = fn(&mut TestRng, &SpaceRef, &SuiteConfig) -> Result<Option<Value>>;

struct Property {
    battery: &'static str,
    name: &'static str,
    min_points: usize,
    max_points: usize,
    check: Check,
}

const fn prop(battery: &'static str, name: &'static str, min_points: usize, check: Check) -> Property {
    Property { battery, name, min_points, max_points: usize::MAX, check }
}

const PROPERTIES: &[Property] = &[
    prop("metric", "QUOTIENT VALID", 1, quotient_valid),
    prop("metric", "QUOTIENT NONEXPANSIVE", 1, quotient_nonexpansive),
    prop("metric", "SUBSPACE VALID", 1, subspace_valid),
    prop("metric", "SUM ASSOCIATIVE", 1, sum_associative),
    prop("metric", "SUM NEUTRAL", 1, sum_neutral),
    prop("lipschitz", "SEPARATING FUNCTION", 2, separating),
    prop("lipschitz", "MCSHANE EXTENSION", 1, mcshane),
    prop("lipschitz", "DUALITY INEQUALITY", 1, duality_inequality),
    prop("free", "ISOMETRY", 2, isometry),
    prop("free", "STRONG DUALITY", 1, strong_duality),
    prop("free", "FOUR-POINT", 1, four_point),
    prop("free", "NORM AXIOMS", 1, norm_axioms),
    prop("free", "CERTIFICATE CONSISTENCY", 1, certificates),
    prop("free", "SUPPORT", 1, support_matches),
    prop("witness", "QUOTIENT WITNESS", 1, quotient_witness_check),
    prop("witness", "PROJECTION SPLIT", 2, projection_split_check),
    prop("witness", "NORMALIZATION", 2, normalization),
    prop("witness", "DISCRETE WITNESS", 2, discrete),
    Property { battery: "witness", name: "OPERATOR NORM", min_points: 2, max_points: 6, check: operator_norm_check },
    prop("doubling", "COVERING MONOTONE", 1, covering_monotone),
    prop("doubling", "GREEDY BOUND", 1, greedy_bound),
];

pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|p| p.name).collect()
}

pub fn run(cfg: &SuiteConfig) -> SuiteReport {
    let indexed: Vec<(usize, &Property)> = PROPERTIES.iter().enumerate().collect();
    let results = cfg.exec.map(&indexed, |&(i, p)| run_property(i, p, cfg));
    SuiteReport { seed: cfg.seed, max_points: cfg.max_points, spaces: cfg.spaces, fault: cfg.fault, results }
}

fn run_property(index: usize, p: &Property, cfg: &SuiteConfig) -> PropertyResult {
    let mut rng = random::rng(cfg.seed);
    rng.set_stream(index as u64);
    let hi = cfg.max_points.min(p.max_points);
    let mut trials = 0;
    let mut counterexample = None;
    if hi >= p.min_points {
        for trial in 0..cfg.spaces {
            let n = rng.gen_range(p.min_points..=hi);
            let space: SpaceRef = Arc::new(random::space(&mut rng, n));
            trials += 1;
            let details = match (p.check)(&mut rng, &space, cfg) {
                Ok(None) => continue,
                Ok(Some(d)) => d,
                Err(e) => json!({ "error": e.to_string() }),
            };
            counterexample = Some(json!({ "trial": trial, "space": space_to_value(&space), "details": details }));
            break;
        }
    }
    PropertyResult { battery: p.battery, name: p.name, trials, passed: counterexample.is_none(), counterexample }
}

fn q(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn fail_if(bad: bool, details: impl FnOnce() -> Value) -> Result<Option<Value>> {
    Ok(if bad { Some(details()) } else { None })
}

/// Flow norm as seen through the configured fault.
fn flow_norm(m: &FreeVector, cfg: &SuiteConfig) -> (Rational, FlowSolution) {
    match cfg.fault {
        None => free_norm_flow(m),
        Some(Fault::PerturbDistances) => {
            let s = m.space();
            let stretch = ratio(11, 10);
            let dist = s.distances().iter().map(|row| row.iter().map(|d| d * &stretch).collect()).collect();
            let bent: SpaceRef =
                Arc::new(MetricSpace::from_parts(s.labels().to_vec(), s.base(), dist).expect("same shape"));
            let moved = FreeVector::new(bent, m.coeffs().clone()).expect("same indices");
            free_norm_flow(&moved)
        }
    }
}

fn random_subset_with_base(rng: &mut TestRng, s: &MetricSpace) -> Vec<usize> {
    let mut set: Vec<usize> = (0..s.len()).filter(|&i| i == s.base() || rng.gen_bool(0.5)).collect();
    set.sort_unstable();
    set
}

// ----- metric -----

fn quotient_valid(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let c = random::nonempty_subset(rng, s.len());
    let (qs, _) = quotient(s, &c, None)?;
    let violations: Vec<String> = qs.validate().iter().map(|v| v.describe(&qs)).collect();
    fail_if(!violations.is_empty(), || json!({ "collapse": c, "violations": violations }))
}

fn quotient_nonexpansive(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let c = random::nonempty_subset(rng, s.len());
    let (_, map) = quotient(s, &c, None)?;
    let lip = map.lipschitz_number().clone();
    fail_if(lip > rational::one(), || json!({ "collapse": c, "lipschitz": q(&lip) }))
}

fn subspace_valid(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let set = random_subset_with_base(rng, s);
    let sub = subspace(s, &set)?;
    fail_if(!sub.is_valid(), || json!({ "subset": set }))
}

fn sum_associative(rng: &mut TestRng, a: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let (nb, nc) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let b = random::space(rng, nb);
    let c = random::space(rng, nc);
    let left = sum(&sum(a, &b), &c);
    let right = sum(a, &sum(&b, &c));
    let same = left.len() == right.len() && left.base() == right.base() && left.distances() == right.distances();
    fail_if(
        !same || !left.is_valid(),
        || json!({ "b": space_to_value(&b), "c": space_to_value(&c), "left": space_to_value(&left), "right": space_to_value(&right) }),
    )
}

fn sum_neutral(_: &mut TestRng, a: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let point = MetricSpace::path(0);
    for s in [sum_with_embeddings(a, &point), sum_with_embeddings(&point, a)] {
        let emb = if s.left.len() == a.len() { &s.left } else { &s.right };
        let isometric = (0..a.len()).all(|i| (0..a.len()).all(|j| s.space.d(emb[i], emb[j]) == a.d(i, j)));
        if s.space.len() != a.len() || !isometric || emb[a.base()] != s.space.base() {
            return Ok(Some(json!({ "sum": space_to_value(&s.space) })));
        }
    }
    Ok(None)
}

// ----- lipschitz -----

fn separating(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let base = s.base();
    let set: Vec<usize> = (0..s.len()).filter(|&i| i != base && rng.gen_bool(0.3)).collect();
    let free: Vec<usize> = s.non_base().filter(|i| !set.contains(i)).collect();
    let Some(&x) = free.choose(rng) else { return Ok(None) };
    let f = separating_function(s, &set, x)?;
    let mut zero_set = set.clone();
    zero_set.push(base);
    let stated = rational::one() / distance_to_set(s, x, &zero_set)?;
    let ok = zero_set.iter().all(|&a| f.value(a).is_zero())
        && f.value(x) == &rational::one()
        && f.lipschitz_number() == stated;
    fail_if(!ok, || json!({ "set": set, "x": x, "function": function_to_value(&f), "stated_lipschitz": q(&stated) }))
}

fn mcshane(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let set = random_subset_with_base(rng, s);
    let sub: SpaceRef = Arc::new(subspace(s, &set)?);
    let f = random::lip_function(rng, &sub);
    let g = mcshane_extend(&f, s)?;
    let restricts = set.iter().enumerate().all(|(i, &x)| g.value(x) == f.value(i));
    let same_lip = g.lipschitz_number() == f.lipschitz_number();
    fail_if(
        !restricts || !same_lip,
        || json!({ "function": function_to_value(&f), "extension": function_to_value(&g) }),
    )
}

fn duality_inequality(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let m = random::free_vector(rng, s, 5);
    let f = random::lip_function(rng, s);
    let lhs = pairing(&m, &f)?.abs();
    let rhs = free_norm(&m) * lipschitz_number(&f);
    fail_if(lhs > rhs, || json!({ "vector": coeffs_to_value(&m), "function": function_to_value(&f) }))
}

// ----- free -----

fn isometry(_: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    for x in 0..s.len() {
        for y in (x + 1)..s.len() {
            let v = free_norm_dual(&delta(s, x)?.sub(&delta(s, y)?)?).0;
            if &v != s.d(x, y) {
                return Ok(Some(json!({ "x": s.label(x), "y": s.label(y), "norm": q(&v), "distance": q(s.d(x, y)) })));
            }
        }
    }
    Ok(None)
}

fn strong_duality(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    for _ in 0..3 {
        let m = random::free_vector(rng, s, 5);
        let dual = free_norm_dual(&m).0;
        let flow = flow_norm(&m, cfg).0;
        if dual != flow {
            return Ok(Some(json!({ "vector": coeffs_to_value(&m), "dual": q(&dual), "flow": q(&flow) })));
        }
    }
    Ok(None)
}

fn four_point(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let n = s.len();
    for _ in 0..10 {
        let [a, b, c, d] = [0; 4].map(|_| rng.gen_range(0..n));
        let formula = four_point_norm(s, a, b, c, d)?;
        let m = FreeVector::new(
            s.clone(),
            [(a, rational::one()), (b, -rational::one()), (c, rational::one()), (d, -rational::one())],
        )?;
        let lp = free_norm_dual(&m).0;
        if formula != lp {
            return Ok(Some(json!({ "tuple": [a, b, c, d], "formula": q(&formula), "lp": q(&lp) })));
        }
    }
    Ok(None)
}

fn norm_axioms(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let m = random::free_vector(rng, s, 5);
    let k = random::free_vector(rng, s, 5);
    let t = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4));
    let (nm, nk) = (free_norm(&m), free_norm(&k));
    let homogeneous = free_norm(&m.scale(&t)) == t.abs() * &nm;
    let triangle = free_norm(&m.add(&k)?) <= &nm + &nk;
    let definite = nm.is_zero() == m.is_zero() && free_norm(&FreeVector::zero(s.clone())).is_zero();
    fail_if(!(homogeneous && triangle && definite), || {
        json!({ "m": coeffs_to_value(&m), "k": coeffs_to_value(&k), "t": q(&t),
                "homogeneous": homogeneous, "triangle": triangle, "definite": definite })
    })
}

fn certificates(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let m = random::free_vector(rng, s, 5);
    let (dv, f) = free_norm_dual(&m);
    let (fv, flow) = free_norm_flow(&m);
    let paired = pairing(&m, &f)?;
    let transport: Rational =
        flow.edges.iter().map(|e| &e.amount * s.d(e.from, e.to)).fold(rational::zero(), |a, b| a + b);
    let ok = paired == dv
        && f.lipschitz_number() <= rational::one()
        && flow.cost == fv
        && transport == fv
        && flow.certifies(&m);
    fail_if(!ok, || json!({ "vector": coeffs_to_value(&m), "dual": q(&dv), "pairing": q(&paired), "flow": q(&fv) }))
}

fn support_matches(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    // repeated and cancelling terms exercise canonicalization
    let mut terms: Vec<(usize, Rational)> = Vec::new();
    for _ in 0..(2 * s.len()) {
        let x = rng.gen_range(0..s.len());
        let c = rational::int(rng.gen_range(-2..=2));
        terms.push((x, c.clone()));
        if rng.gen_bool(0.3) {
            terms.push((x, -c));
        }
    }
    let m = FreeVector::new(s.clone(), terms.clone())?;
    let mut dense = vec![rational::zero(); s.len()];
    for (x, c) in &terms {
        dense[*x] += c;
    }
    let expected: BTreeSet<usize> = (0..s.len()).filter(|&x| x != s.base() && !dense[x].is_zero()).collect();
    fail_if(support(&m) != expected, || json!({ "vector": coeffs_to_value(&m), "expected": expected }))
}

// ----- witness -----

fn round_trip(t: &LinearWitness, inv: &LinearWitness, m: &FreeVector) -> Result<bool> {
    Ok(&inv.apply(&t.apply(m)?)? == m)
}

fn quotient_witness_check(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    let image = random::retraction(rng, s.len(), s.base());
    let phi = PointMap::new(s.clone(), s.clone(), image.clone())?;
    let qw = quotient_witness(&phi)?;
    let report = validate_witness_with(&qw.witness, cfg.exec);
    let Some(inv) = report.inverse.clone() else {
        return Ok(Some(json!({ "retraction": image, "reason": report.reason })));
    };
    for _ in 0..3 {
        let m = random::free_vector(rng, s, 5);
        if !round_trip(&qw.witness, &inv, &m)? {
            return Ok(Some(json!({ "retraction": image, "vector": coeffs_to_value(&m) })));
        }
        let f = random::lip_function(rng, qw.witness.target());
        let pulled = qw.witness.pullback(&f)?;
        let bound = f.lipschitz_number() * (&qw.retraction_lipschitz + rational::one());
        if pulled.lipschitz_number() > bound {
            return Ok(Some(json!({ "retraction": image, "function": function_to_value(&f), "bound": q(&bound) })));
        }
    }
    Ok(None)
}

/// Fixes a random nonempty set of basis indices and sends the others to a
/// fixed index or to zero.
fn random_projection(rng: &mut TestRng, k: usize) -> Vec<Option<usize>> {
    let fixed: Vec<usize> = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
    (0..k)
        .map(|i| {
            if fixed.contains(&i) {
                Some(i)
            } else if fixed.is_empty() || rng.gen_bool(0.3) {
                None
            } else {
                fixed.choose(rng).copied()
            }
        })
        .collect()
}

fn projection_split_check(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    let basis = if rng.gen_bool(0.5) { BasisSpace::canonical(s) } else { normalize_basis(s)?.basis };
    let proj = random_projection(rng, basis.vectors().len());
    let split = projection_split(&basis, &proj)?;
    let report = validate_witness_with(&split.witness, cfg.exec);
    if !report.valid || !split.is_idempotent() {
        return Ok(Some(json!({ "projection": proj, "reason": report.reason })));
    }
    for _ in 0..3 {
        let f = random::lip_function(rng, split.target.space());
        let check = split.check_extension_bound(&f)?;
        if !check.holds {
            return Ok(Some(json!({
                "projection": proj,
                "function": function_to_value(&f),
                "extension_lipschitz": q(&check.extension_lipschitz),
                "bound": q(&check.bound),
            })));
        }
    }
    Ok(None)
}

fn normalization(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    let n = normalize_basis(s)?;
    let unit = n.basis.vectors().iter().all(|v| free_norm(v) == rational::one());
    let distinct: BTreeSet<Vec<Rational>> = n.basis.vectors().iter().map(|v| v.to_dense()).collect();
    let injective = distinct.len() == n.basis.vectors().len();
    let report = validate_witness_with(&n.witness, cfg.exec);
    let inverts = match &report.inverse {
        Some(inv) => round_trip(&n.witness, inv, &random::free_vector(rng, s, 5))?,
        None => false,
    };
    fail_if(
        !(unit && injective && report.valid && inverts),
        || json!({ "unit": unit, "injective": injective, "valid": report.valid, "inverts": inverts }),
    )
}

fn discrete(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    let d = discrete_witness(s)?;
    let report = validate_witness_with(&d.witness, cfg.exec);
    let inverts = match &report.inverse {
        Some(inv) => round_trip(&d.witness, inv, &random::free_vector(rng, s, 5))?,
        None => false,
    };
    fail_if(
        !(report.valid && inverts && report.condition_number().is_some()),
        || json!({ "valid": report.valid, "inverts": inverts, "reason": report.reason }),
    )
}

/// Random image table with small integer coefficients into a random target
/// of the same size.
fn random_witness(rng: &mut TestRng, s: &SpaceRef) -> Result<LinearWitness> {
    let target: SpaceRef = Arc::new(random::space(rng, s.len()));
    let images = s.non_base().map(|x| (x, random::free_vector(rng, &target, 2))).collect();
    LinearWitness::new(s.clone(), target, images)
}

fn operator_norm_check(rng: &mut TestRng, s: &SpaceRef, cfg: &SuiteConfig) -> Result<Option<Value>> {
    let t = random_witness(rng, s)?;
    let (norm, _) = operator_norm_with(&t, cfg.exec);
    // dual route over every molecule
    let mut dual_best = rational::zero();
    for x in 0..s.len() {
        for y in (x + 1)..s.len() {
            let img = t.apply(&delta(s, x)?.sub(&delta(s, y)?)?)?;
            let v = free_norm_dual(&img).0 / s.d(x, y);
            if v > dual_best {
                dual_best = v;
            }
        }
    }
    // sampled vectors never beat the maximum
    let mut sampled_ok = true;
    for _ in 0..10 {
        let m = random::free_vector(rng, s, 5);
        if !m.is_zero() && free_norm(&t.apply(&m)?) > &norm * free_norm(&m) {
            sampled_ok = false;
        }
    }
    fail_if(
        dual_best != norm || !sampled_ok,
        || json!({ "witness": witness_to_value(&t), "molecule_norm": q(&norm), "dual_norm": q(&dual_best), "sampled_ok": sampled_ok }),
    )
}

// ----- doubling -----

fn pick_pair(rng: &mut TestRng, grid: &[Rational]) -> (Rational, Rational) {
    let a = grid.choose(rng).expect("nonempty grid").clone();
    let b = grid.choose(rng).expect("nonempty grid").clone();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn covering_monotone(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let grid = scale_grid(s);
    if grid.is_empty() {
        return Ok(None);
    }
    let x = rng.gen_range(0..s.len());
    let (r1, r2) = pick_pair(rng, &grid);
    let (big1, big2) = pick_pair(rng, &grid);
    let big = std::cmp::max(big2.clone(), r2.clone());
    let n = |r: &Rational, rr: &Rational| covering_number(s, x, rr, r, usize::MAX).map(|c| c.count);
    let in_r = n(&r1, &big)? >= n(&r2, &big)?;
    let small = r1.clone();
    let (lo, hi) = (std::cmp::max(big1, small.clone()), std::cmp::max(big2, small.clone()));
    let in_big = n(&small, &lo)? <= n(&small, &hi)?;
    fail_if(
        !(in_r && in_big),
        || json!({ "x": s.label(x), "r": [q(&r1), q(&r2)], "R": [q(&lo), q(&hi)], "monotone_in_r": in_r, "monotone_in_R": in_big }),
    )
}

fn greedy_bound(rng: &mut TestRng, s: &SpaceRef, _: &SuiteConfig) -> Result<Option<Value>> {
    let grid = scale_grid(s);
    if grid.is_empty() {
        return Ok(None);
    }
    let x = rng.gen_range(0..s.len());
    let (r, big) = pick_pair(rng, &grid);
    let exact = covering_number(s, x, &big, &r, usize::MAX)?;
    let greedy = greedy_covering_number(s, x, &big, &r)?;
    fail_if(
        !exact.exact || greedy < exact.count || exact.lower_bound > exact.count,
        || json!({ "x": s.label(x), "R": q(&big), "r": q(&r), "greedy": greedy, "exact": exact.count }),
    )
}
