//! Acceptance gate: one line per criterion, exit status 1 if any fails.
//!
//! Every comparison is exact rational equality or inequality; the only
//! tolerance is the per-criterion wall-clock budget.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use lipfree::constructions::{
    discrete_witness, normalize_basis, projection_split, quotient_witness, BasisSpace, ProjectionSplit,
};
use lipfree::doubling::{doubling_constant, DoublingOptions};
use lipfree::free::{delta, four_point_norm, free_norm_dual, free_norm_flow, support};
use lipfree::lip::separating_function;
use lipfree::metric::{distance_to_set, MetricSpace, PointMap, SpaceRef};
use lipfree::random::{self, TestRng};
use lipfree::rational::{self, int, Rational};
use lipfree::simplex::LinearProgram;
use lipfree::witness::{operator_norm, validate_witness, LinearWitness};
use lipfree::{linalg, FreeVector, LipFunction};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(failures: &[String], detail: String) -> Verdict {
    match failures.first() {
        None => Verdict { ok: true, detail },
        Some(first) => Verdict { ok: false, detail: format!("{} failure(s), first: {first}", failures.len()) },
    }
}

fn arc(s: MetricSpace) -> SpaceRef {
    Arc::new(s)
}

fn rng_for(criterion: u64) -> TestRng {
    random::rng(0xACCE_0000 + criterion)
}

fn sized_space(rng: &mut TestRng, lo: usize, hi: usize) -> SpaceRef {
    let n = rng.gen_range(lo..=hi);
    arc(random::space(rng, n))
}

// 1. ISOMETRY
fn isometry() -> Verdict {
    let mut rng = rng_for(1);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for _ in 0..200 {
        let s = sized_space(&mut rng, 1, 8);
        for x in 0..s.len() {
            for y in (x + 1)..s.len() {
                pairs += 1;
                let m = delta(&s, x).unwrap().sub(&delta(&s, y).unwrap()).unwrap();
                let v = free_norm_dual(&m).0;
                if &v != s.d(x, y) {
                    failures.push(format!("‖δ{x}−δ{y}‖ = {v} ≠ {} in {s}", s.d(x, y)));
                }
            }
        }
    }
    verdict(&failures, format!("200 spaces n≤8, {pairs} pairs"))
}

// 2. FOUR-POINT FORMULA
fn four_point() -> Verdict {
    let mut rng = rng_for(2);
    let mut failures = Vec::new();
    let mut tuples = 0;
    for _ in 0..50 {
        let s = sized_space(&mut rng, 1, 6);
        let n = s.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        tuples += 1;
                        let formula = four_point_norm(&s, a, b, c, d).unwrap();
                        let one = rational::one();
                        let m = FreeVector::new(s.clone(), [(a, one.clone()), (b, -&one), (c, one.clone()), (d, -one)])
                            .unwrap();
                        let lp = free_norm_dual(&m).0;
                        if formula != lp {
                            failures.push(format!("({a},{b},{c},{d}): formula {formula} ≠ LP {lp}"));
                        }
                    }
                }
            }
        }
    }
    verdict(&failures, format!("50 spaces n≤6, {tuples} tuples"))
}

// 3. STRONG DUALITY
fn strong_duality() -> Verdict {
    let mut rng = rng_for(3);
    let mut failures = Vec::new();
    for _ in 0..500 {
        let s = sized_space(&mut rng, 1, 10);
        let m = random::free_vector(&mut rng, &s, 5);
        let (dual, f) = free_norm_dual(&m);
        let (flow, plan) = free_norm_flow(&m);
        if dual != flow || !plan.certifies(&m) || f.lipschitz_number() > rational::one() {
            failures.push(format!("{m}: dual {dual}, flow {flow}"));
        }
    }
    verdict(&failures, "500 vectors n≤10, coefficients in [−5,5]".into())
}

// 4. QUOTIENT WITNESS
fn quotient_witnesses() -> Verdict {
    let mut rng = rng_for(4);
    let mut failures = Vec::new();
    for _ in 0..50 {
        let s = sized_space(&mut rng, 1, 7);
        let image = random::retraction(&mut rng, s.len(), s.base());
        let phi = PointMap::new(s.clone(), s.clone(), image.clone()).unwrap();
        let qw = quotient_witness(&phi).unwrap();
        let report = validate_witness(&qw.witness);
        let Some(inv) = report.inverse else {
            failures.push(format!("retraction {image:?}: {:?}", report.reason));
            continue;
        };
        for _ in 0..20 {
            let m = random::free_vector(&mut rng, &s, 5);
            if inv.apply(&qw.witness.apply(&m).unwrap()).unwrap() != m {
                failures.push(format!("retraction {image:?}: T⁻¹T({m}) ≠ {m}"));
            }
        }
        let target = qw.witness.target().clone();
        for _ in 0..20 {
            let f = random::lip_function(&mut rng, &target);
            // x ↦ f(φ(x)) + f([x]) evaluated directly on the sum
            let fixed: Vec<usize> = (0..s.len()).filter(|&x| image[x] == x).collect();
            let direct: Vec<Rational> = (0..s.len())
                .map(|x| {
                    let p = fixed.binary_search(&image[x]).unwrap();
                    let on_retract = f.value(qw.retract_embedding[p]);
                    let on_quotient = f.value(qw.quotient_embedding[qw.quotient_map.image(x)]);
                    on_retract + on_quotient
                })
                .collect();
            let pulled = qw.witness.pullback(&f).unwrap();
            let bound = f.lipschitz_number() * (&qw.retraction_lipschitz + rational::one());
            if pulled.values() != direct.as_slice() || pulled.lipschitz_number() > bound {
                failures.push(format!("retraction {image:?}: pullback bound fails for {:?}", f.values()));
            }
        }
    }
    verdict(&failures, "50 retractions × (20 round trips + 20 pullbacks)".into())
}

/// `max ⟨v, g⟩` over `g(e) = 0`, `|g(u) − g(w)| ≤ d(u, w)`, with `g = p − q`
/// split into nonnegative parts; written independently of the library's
/// shifted formulation.
fn lp_pair_norm(v: &FreeVector) -> Rational {
    let s = v.space();
    let pts: Vec<usize> = s.non_base().collect();
    let k = pts.len();
    let mut obj = vec![rational::zero(); 2 * k];
    for (i, &u) in pts.iter().enumerate() {
        obj[i] = v.coeff(u);
        obj[k + i] = -v.coeff(u);
    }
    let mut lp = LinearProgram::maximize(obj);
    let row = |pos: &[(usize, i64)]| {
        let mut r = vec![rational::zero(); 2 * k];
        for &(i, sign) in pos {
            r[i] = int(sign);
            r[k + i] = int(-sign);
        }
        r
    };
    for (i, &u) in pts.iter().enumerate() {
        lp.less_eq(row(&[(i, 1)]), s.d(u, s.base()).clone());
        lp.less_eq(row(&[(i, -1)]), s.d(u, s.base()).clone());
        for (j, &w) in pts.iter().enumerate() {
            if i != j {
                lp.less_eq(row(&[(i, 1), (j, -1)]), s.d(u, w).clone());
            }
        }
    }
    lp.solve().expect("bounded and feasible").value
}

/// `‖T‖` through the adjoint: the largest `L(T*g)` over `L(g) ≤ 1`,
/// evaluated pair by pair with [`lp_pair_norm`].
fn oracle_operator_norm(t: &LinearWitness) -> Rational {
    let s = t.source();
    let mut best = rational::zero();
    for x in 0..s.len() {
        for y in (x + 1)..s.len() {
            let img = t.apply(&delta(s, x).unwrap().sub(&delta(s, y).unwrap()).unwrap()).unwrap();
            let v = lp_pair_norm(&img) / s.d(x, y);
            if v > best {
                best = v;
            }
        }
    }
    best
}

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

fn split_instance(rng: &mut TestRng, s: &SpaceRef) -> (BasisSpace, Vec<Option<usize>>, ProjectionSplit) {
    let basis = if rng.gen_bool(0.5) { BasisSpace::canonical(s) } else { normalize_basis(s).unwrap().basis };
    let proj = random_projection(rng, basis.vectors().len());
    let split = projection_split(&basis, &proj).unwrap();
    (basis, proj, split)
}

// 5. PROJECTION SPLIT
fn projection_splits() -> Verdict {
    let mut rng = rng_for(5);
    let mut failures = Vec::new();
    let mut instances = Vec::new();
    // line {0,1,2,3}: π fixes δ1, sends δ2 to δ1 and δ3 to zero
    let line = arc(MetricSpace::path(3));
    let canonical = BasisSpace::canonical(&line);
    let proj = vec![Some(0), Some(0), None];
    instances.push((canonical.clone(), proj.clone(), projection_split(&canonical, &proj).unwrap()));
    for _ in 0..20 {
        let s = sized_space(&mut rng, 2, 6);
        instances.push(split_instance(&mut rng, &s));
    }
    for (basis, proj, split) in &instances {
        let ambient = basis.ambient();
        let dim = ambient.len() - 1;
        let coords: linalg::Matrix =
            ambient.non_base().map(|y| split.target.vectors().iter().map(|v| v.coeff(y)).collect()).collect();
        let spans =
            ambient.non_base().all(|x| linalg::solve(&coords, &delta(ambient, x).unwrap().to_dense()).is_some());
        if linalg::rank(&coords) != dim || !spans {
            failures.push(format!("{proj:?}: new basis is not a basis"));
            continue;
        }
        let pi = oracle_operator_norm(&split.projection);
        let sigma = oracle_operator_norm(&split.complement);
        if pi != split.projection_norm || sigma != split.complement_norm {
            failures.push(format!(
                "{proj:?}: ‖π‖,‖σ‖ = {pi},{sigma} vs reported {},{}",
                split.projection_norm, split.complement_norm
            ));
        }
        let target = split.target.space();
        for _ in 0..50 {
            let f = random::lip_function(&mut rng, target);
            // linear extension h(bᵢ) = Σⱼ cᵢⱼ f(newⱼ) from coordinates in the new basis
            let mut h = vec![rational::zero(); basis.space().len()];
            for (i, b) in basis.vectors().iter().enumerate() {
                let c = linalg::solve(&coords, &b.to_dense()).unwrap();
                h[basis.point_of(i)] = c
                    .iter()
                    .enumerate()
                    .fold(rational::zero(), |acc, (j, cj)| acc + cj * f.value(split.target.point_of(j)));
            }
            let h = LipFunction::new(basis.space().clone(), h).unwrap();
            let bound = f.lipschitz_number() * (&pi + &sigma);
            let check = split.check_extension_bound(&f).unwrap();
            if h.lipschitz_number() > bound || check.extension_lipschitz != h.lipschitz_number() || !check.holds {
                failures.push(format!("{proj:?}: L(h) = {} > {bound}", h.lipschitz_number()));
            }
        }
    }
    verdict(&failures, format!("{} instances × 50 functions", instances.len()))
}

// 6. NORMALIZATION
fn normalization() -> Verdict {
    let mut rng = rng_for(6);
    let mut failures = Vec::new();
    let mut worst = rational::zero();
    for _ in 0..50 {
        let s = sized_space(&mut rng, 2, 8);
        let n = normalize_basis(&s).unwrap();
        for (v, x) in n.basis.vectors().iter().zip(s.non_base()) {
            if free_norm_dual(v).0 != rational::one() {
                failures.push(format!("‖μ({})‖ ≠ 1 in {s}", s.label(x)));
            }
        }
        let distinct: BTreeSet<Vec<Rational>> = n.basis.vectors().iter().map(|v| v.to_dense()).collect();
        if distinct.len() != s.len() - 1 {
            failures.push(format!("μ not injective on {s}"));
        }
        match validate_witness(&n.witness).condition_number() {
            Some(c) => worst = worst.max(c),
            None => failures.push(format!("normalization witness of {s} not invertible")),
        }
    }
    verdict(&failures, format!("50 spaces, largest condition number {}", rational::format(&worst)))
}

// 7. OPERATOR-NORM ORACLE
fn operator_norm_oracle() -> Verdict {
    let mut rng = rng_for(7);
    let mut spaces: Vec<SpaceRef> = Vec::new();
    for n in 1..=5 {
        spaces.push(arc(MetricSpace::path(n)));
        spaces.push(arc(MetricSpace::equilateral(n + 1)));
    }
    for _ in 0..20 {
        spaces.push(sized_space(&mut rng, 2, 6));
    }
    let mut witnesses: Vec<LinearWitness> = Vec::new();
    for s in &spaces {
        let image = random::retraction(&mut rng, s.len(), s.base());
        let phi = PointMap::new(s.clone(), s.clone(), image).unwrap();
        let built = [
            quotient_witness(&phi).unwrap().witness,
            normalize_basis(s).unwrap().witness,
            discrete_witness(s).unwrap().witness,
        ];
        for t in built {
            witnesses.push(t.inverse().unwrap());
            witnesses.push(t);
        }
        let (basis, _, split) = split_instance(&mut rng, s);
        witnesses.push(basis.extension_map());
        witnesses.push(split.witness);
        witnesses.push(split.projection);
        witnesses.push(split.complement);
        let target = arc(random::space(&mut rng, s.len()));
        let images = s.non_base().map(|x| (x, random::free_vector(&mut rng, &target, 2))).collect();
        witnesses.push(LinearWitness::new(s.clone(), target, images).unwrap());
    }
    let mut failures = Vec::new();
    for t in &witnesses {
        let molecule = operator_norm(t);
        let oracle = oracle_operator_norm(t);
        if molecule != oracle {
            failures.push(format!("molecule {molecule} ≠ oracle {oracle} on {} → {}", t.source(), t.target()));
        }
        // sampled directions never exceed the maximum
        for _ in 0..10 {
            let m = random::free_vector(&mut rng, t.source(), 4);
            if m.is_zero() {
                continue;
            }
            let ratio = lp_pair_norm(&t.apply(&m).unwrap()) / lp_pair_norm(&m);
            if ratio > oracle {
                failures.push(format!("sampled ratio {ratio} exceeds {oracle}"));
            }
        }
    }
    verdict(&failures, format!("{} witnesses on {} spaces n≤6", witnesses.len(), spaces.len()))
}

// 8. DOUBLING DIVERGENCE
fn doubling_divergence() -> Verdict {
    let mut failures = Vec::new();
    let opts = DoublingOptions { assouad: false, ..Default::default() };
    let mut rows = Vec::new();
    for n in [4usize, 8, 16, 32] {
        let path = doubling_constant(&MetricSpace::path(n), &opts).unwrap();
        if path.max_count > 3 {
            failures.push(format!("path {{0..{n}}}: doubling max {}", path.max_count));
        }
        let eq = arc(MetricSpace::equilateral(n));
        let eq_report = doubling_constant(&eq, &opts).unwrap();
        if eq_report.max_count != n || !eq_report.exact {
            failures
                .push(format!("equilateral n={n}: doubling max {} (exact {})", eq_report.max_count, eq_report.exact));
        }
        let d = discrete_witness(&eq).unwrap();
        let report = validate_witness(&d.witness);
        let bound = d.conditioning_bound();
        match report.condition_number() {
            Some(c) if c <= bound => rows.push(format!(
                "n={n}: path {}{} eq {} cond {}≤{}",
                path.max_count,
                if path.exact { "" } else { "(greedy)" },
                eq_report.max_count,
                rational::format(&c),
                rational::format(&bound)
            )),
            other => failures.push(format!("equilateral n={n}: condition {other:?} vs bound {bound}")),
        }
    }
    verdict(&failures, rows.join("; "))
}

// 9. SUPPORT & SEPARATION
fn support_and_separation() -> Verdict {
    let mut rng = rng_for(9);
    let mut failures = Vec::new();
    let mut triples = 0;
    while triples < 200 {
        let s = sized_space(&mut rng, 2, 8);
        let base = s.base();
        let set: Vec<usize> = s.non_base().filter(|_| rng.gen_bool(0.3)).collect();
        let free: Vec<usize> = s.non_base().filter(|x| !set.contains(x)).collect();
        let Some(&x) = free.choose(&mut rng) else { continue };
        triples += 1;
        let f = separating_function(&s, &set, x).unwrap();
        let mut zero_set = set.clone();
        zero_set.push(base);
        let gap = zero_set.iter().map(|&a| s.d(x, a).clone()).min().unwrap();
        let expected: Vec<Rational> = (0..s.len())
            .map(|y| {
                let dy = zero_set.iter().map(|&a| s.d(y, a).clone()).min().unwrap();
                (dy / &gap).min(rational::one())
            })
            .collect();
        let conditions = zero_set.iter().all(|&a| f.value(a).is_zero()) && f.value(x) == &rational::one();
        let stated = rational::one() / distance_to_set(&s, x, &zero_set).unwrap();
        if !conditions || f.values() != expected.as_slice() || f.lipschitz_number() != stated {
            failures.push(format!("A={set:?}, x={x} in {s}"));
        }
    }
    for _ in 0..200 {
        let s = sized_space(&mut rng, 1, 8);
        let mut terms = Vec::new();
        let mut dense = vec![rational::zero(); s.len()];
        for _ in 0..(2 * s.len()) {
            let y = rng.gen_range(0..s.len());
            let c = int(rng.gen_range(-3..=3));
            dense[y] += &c;
            terms.push((y, c));
        }
        let m = FreeVector::new(s.clone(), terms).unwrap();
        let enumerated: BTreeSet<usize> = (0..s.len()).filter(|&y| y != s.base() && !dense[y].is_zero()).collect();
        if support(&m) != enumerated || m.coeffs().values().any(|c| c.is_zero()) {
            failures.push(format!("support of {m} ≠ {enumerated:?}"));
        }
    }
    verdict(&failures, "200 triples, 200 canonicalized vectors".into())
}

/// Name, time budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("ISOMETRY", 30, isometry),
        ("FOUR-POINT FORMULA", 60, four_point),
        ("STRONG DUALITY", 60, strong_duality),
        ("QUOTIENT WITNESS", 120, quotient_witnesses),
        ("PROJECTION SPLIT", 120, projection_splits),
        ("NORMALIZATION", 120, normalization),
        ("OPERATOR-NORM ORACLE", 120, operator_norm_oracle),
        ("DOUBLING DIVERGENCE", 120, doubling_divergence),
        ("SUPPORT & SEPARATION", 60, support_and_separation),
    ];
    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let ok = v.ok && in_time;
        all &= ok;
        println!(
            "criterion {} {name}: {} [exact; {:.2}s of {budget}s] {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {}", if all { "all criteria pass" } else { "FAILED" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
