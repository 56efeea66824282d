//! `lipfree` command-line front end.
//!
//! Exit status: 0 on success, 1 when a check fails (metric violations,
//! solver disagreement, invalid witness, failing property), 2 on unusable
//! input.

mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde_json::{json, Map, Value};

use lipfree::constructions::{discrete_witness, normalize_basis, projection_split, quotient_witness, BasisSpace};
use lipfree::doubling::{doubling_constant, DoublingOptions};
use lipfree::free::{free_norm_dual, free_norm_flow};
use lipfree::io::{self, Render};
use lipfree::metric::{quotient, sum_with_embeddings, MetricSpace, PointMap, SpaceRef};
use lipfree::rational;
use lipfree::suite::{self, Fault, SuiteConfig};
use lipfree::witness::{operator_norm_with, validate_witness_with, LinearWitness};
use lipfree::Exec;

use args::{Cli, Command, Construct, DoublingArgs, Mode, SuiteArgs, WitnessAction};

struct Outcome {
    report: Value,
    ok: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, ok: true }
    }
}

struct Ctx {
    render: Render,
    exec: Exec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        render: match cli.mode {
            Mode::Exact => Render::Exact,
            Mode::Float => Render::Float,
        },
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    let outcome = match dispatch(&cli.command, &ctx) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = io::to_pretty(&outcome.report);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Command::Validate { space } => validate(space),
        Command::Norm { space, coeffs } => norm(space, coeffs, ctx),
        Command::Construct(c) => construct(c, ctx),
        Command::Witness { action, witness } => witness_cmd(*action, witness, ctx),
        Command::BasisConstant { basis } => basis_constant(basis, ctx),
        Command::Doubling(a) => doubling(a, ctx),
        Command::Suite(a) => suite_cmd(a, ctx),
    }
}

fn read_value(path: &Path) -> Result<(Value, PathBuf)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value = io::parse_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((value, dir))
}

/// `doc[key]` when present, else the whole document.
fn entry<'a>(doc: &'a Value, key: &str) -> &'a Value {
    doc.get(key).filter(|v| v.is_object()).unwrap_or(doc)
}

fn load_space(path: &Path) -> Result<SpaceRef> {
    let (v, _) = read_value(path)?;
    let space = io::space_from_value(&v).with_context(|| format!("reading space {}", path.display()))?;
    Ok(io::require_valid(space)?)
}

fn load_witness(path: &Path) -> Result<LinearWitness> {
    let (v, dir) = read_value(path)?;
    io::witness_from_value(entry(&v, "witness"), &dir).with_context(|| format!("reading witness {}", path.display()))
}

fn load_basis(path: &Path) -> Result<BasisSpace> {
    let (v, dir) = read_value(path)?;
    let doc = entry(&v, "basis");
    if doc.get("vectors").is_some() {
        return io::basis_from_value(doc, &dir).with_context(|| format!("reading basis {}", path.display()));
    }
    let space = io::require_valid(io::space_from_value(doc)?)?;
    Ok(BasisSpace::canonical(&space))
}

fn labels_of(space: &MetricSpace, spec: &str) -> Result<Vec<usize>> {
    spec.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|l| Ok(space.index_of(l)?)).collect()
}

fn pairs_of(space: &MetricSpace, spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let Some((a, b)) = t.split_once(':') else {
                bail!("expected `label:label`, got `{t}`");
            };
            Ok((space.index_of(a.trim())?, space.index_of(b.trim())?))
        })
        .collect()
}

/// Emitted witnesses must validate; otherwise the report explains why.
fn checked(t: &LinearWitness, ctx: &Ctx) -> Option<Outcome> {
    let report = validate_witness_with(t, ctx.exec);
    (!report.valid).then(|| Outcome { report: io::witness_report(&report, ctx.render), ok: false })
}

fn validate(path: &Path) -> Result<Outcome> {
    let (v, _) = read_value(path)?;
    let space = io::space_from_value(&v).with_context(|| format!("reading space {}", path.display()))?;
    let violations: Vec<String> = space.validate().iter().map(|v| v.describe(&space)).collect();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    Ok(Outcome {
        ok: violations.is_empty(),
        report: json!({ "points": space.len(), "valid": violations.is_empty(), "violations": violations }),
    })
}

fn norm(path: &Path, coeffs: &str, ctx: &Ctx) -> Result<Outcome> {
    let space = load_space(path)?;
    let m = io::parse_coeff_spec(&space, coeffs)?;
    let dual = free_norm_dual(&m);
    let flow = free_norm_flow(&m);
    let agree = ctx.render.agree(&dual.0, &flow.0);
    if !agree {
        eprintln!("error: dual and flow norms disagree");
    }
    Ok(Outcome { report: io::norm_report(&m, &dual, &flow, ctx.render), ok: agree })
}

fn label_map(from: &MetricSpace, to: &MetricSpace, image: impl Fn(usize) -> usize) -> Value {
    Value::Object(
        (0..from.len()).map(|x| (from.label(x).to_string(), json!(to.label(image(x))))).collect::<Map<_, _>>(),
    )
}

fn construct(c: &Construct, ctx: &Ctx) -> Result<Outcome> {
    let r = ctx.render;
    match c {
        Construct::Sum { left, right } => {
            let (a, b) = (load_space(left)?, load_space(right)?);
            let s = sum_with_embeddings(&a, &b);
            Ok(Outcome::ok(json!({
                "space": io::space_to_value(&s.space),
                "left": label_map(&a, &s.space, |x| s.left[x]),
                "right": label_map(&b, &s.space, |x| s.right[x]),
            })))
        }
        Construct::Quotient { space, collapse, retraction, class_label } => {
            let m = load_space(space)?;
            if let Some(spec) = collapse {
                let set = labels_of(&m, spec)?;
                let (q, map) = quotient(&m, &set, class_label.as_deref())?;
                return Ok(Outcome::ok(json!({
                    "space": io::space_to_value(&q),
                    "map": label_map(&m, &q, |x| map.image(x)),
                    "lipschitz": r.num(map.lipschitz_number()),
                })));
            }
            let spec = retraction.as_deref().unwrap_or_default();
            let mut image: Vec<usize> = (0..m.len()).collect();
            for (x, y) in pairs_of(&m, spec)? {
                image[x] = y;
            }
            let phi = PointMap::new(m.clone(), m.clone(), image)?;
            let qw = quotient_witness(&phi)?;
            if let Some(bad) = checked(&qw.witness, ctx) {
                return Ok(bad);
            }
            Ok(Outcome::ok(json!({
                "space": io::space_to_value(qw.witness.target()),
                "retract": io::space_to_value(&qw.retract),
                "quotient": io::space_to_value(&qw.quotient),
                "retraction_lipschitz": r.num(&qw.retraction_lipschitz),
                "witness": io::witness_to_value(&qw.witness),
            })))
        }
        Construct::Normalize { space } => {
            let n = normalize_basis(&load_space(space)?)?;
            if let Some(bad) = checked(&n.witness, ctx) {
                return Ok(bad);
            }
            Ok(Outcome::ok(json!({
                "basis": io::basis_to_value(&n.basis),
                "witness": io::witness_to_value(&n.witness),
            })))
        }
        Construct::Project { basis, projection } => {
            let b = load_basis(basis)?;
            let bs = b.space();
            let mut images: Vec<Option<usize>> = (0..b.vectors().len()).map(Some).collect();
            for (x, y) in pairs_of(bs, projection)? {
                if x == bs.base() {
                    bail!("the base point stands for zero and has no image");
                }
                images[x - 1] = (y != bs.base()).then(|| y - 1);
            }
            let split = projection_split(&b, &images)?;
            if let Some(bad) = checked(&split.witness, ctx) {
                return Ok(bad);
            }
            Ok(Outcome::ok(json!({
                "basis": io::basis_to_value(&split.target),
                "witness": io::witness_to_value(&split.witness),
                "projection_norm": r.num(&split.projection_norm),
                "complement_norm": r.num(&split.complement_norm),
                "idempotent": split.is_idempotent(),
            })))
        }
        Construct::Discrete { space } => {
            let d = discrete_witness(&load_space(space)?)?;
            if let Some(bad) = checked(&d.witness, ctx) {
                return Ok(bad);
            }
            Ok(Outcome::ok(json!({
                "separation": r.num(&d.separation),
                "diameter": r.num(&d.diameter),
                "conditioning_bound": r.num(&d.conditioning_bound()),
                "witness": io::witness_to_value(&d.witness),
            })))
        }
    }
}

fn attained(space: &MetricSpace, pair: Option<(usize, usize)>) -> Value {
    pair.map_or(Value::Null, |(x, y)| json!([space.label(x), space.label(y)]))
}

fn witness_cmd(action: WitnessAction, path: &Path, ctx: &Ctx) -> Result<Outcome> {
    let t = load_witness(path)?;
    let r = ctx.render;
    match action {
        WitnessAction::Check => {
            let report = validate_witness_with(&t, ctx.exec);
            if let Some(reason) = &report.reason {
                eprintln!("invalid witness: {reason}");
            }
            Ok(Outcome { ok: report.valid, report: io::witness_report(&report, r) })
        }
        WitnessAction::Opnorm => {
            let (norm, pair) = operator_norm_with(&t, ctx.exec);
            Ok(Outcome::ok(json!({
                "mode": r.name(),
                "norm": r.num(&norm),
                "attained": attained(t.source(), pair),
            })))
        }
        WitnessAction::Condition => {
            let report = validate_witness_with(&t, ctx.exec);
            let Some(cond) = report.condition_number() else {
                eprintln!("invalid witness: {}", report.reason.as_deref().unwrap_or("not invertible"));
                return Ok(Outcome { ok: false, report: io::witness_report(&report, r) });
            };
            Ok(Outcome::ok(json!({
                "mode": r.name(),
                "forward_norm": r.num(&report.forward_norm),
                "inverse_norm": report.inverse_norm.as_ref().map(|v| r.num(v)),
                "condition": r.num(&cond),
            })))
        }
    }
}

fn basis_constant(path: &Path, ctx: &Ctx) -> Result<Outcome> {
    let b = load_basis(path)?;
    let (k, pair) = operator_norm_with(&b.extension_map(), ctx.exec);
    Ok(Outcome::ok(json!({
        "mode": ctx.render.name(),
        "constant": ctx.render.num(&k),
        "attained": attained(b.ambient(), pair),
        "basis": io::basis_to_value(&b),
    })))
}

fn doubling(a: &DoublingArgs, ctx: &Ctx) -> Result<Outcome> {
    let space = load_space(&a.space)?;
    let scales = a
        .scales
        .as_deref()
        .map(|s| s.split(',').map(|t| rational::parse(t.trim())).collect::<lipfree::Result<Vec<_>>>())
        .transpose()?;
    let opts = DoublingOptions { scales, exact_threshold: a.exact_threshold, assouad: !a.no_assouad, exec: ctx.exec };
    let report = doubling_constant(&space, &opts)?;
    if let Some(path) = &a.csv {
        std::fs::write(path, io::doubling_csv(&report, ctx.render))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::ok(io::doubling_to_value(&space, &report, a.exact_threshold, ctx.render)))
}

fn suite_cmd(a: &SuiteArgs, ctx: &Ctx) -> Result<Outcome> {
    let cfg = SuiteConfig {
        seed: a.seed,
        max_points: a.sizes,
        spaces: a.spaces,
        fault: a.inject_fault.then_some(Fault::PerturbDistances),
        exec: ctx.exec,
    };
    let report = suite::run(&cfg);
    for r in &report.results {
        eprintln!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
    }
    Ok(Outcome { ok: report.passed(), report: report.to_value() })
}
