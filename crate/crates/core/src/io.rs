//! JSON formats for spaces, functions, vectors, witnesses, bases and reports.
//!
//! Object keys are written in a fixed order and rationals as `"p/q"`
//! strings, so equal inputs produce byte-identical output. Wherever a
//! document embeds a space (`"space"`, `"source"`, `"target"`, `"ambient"`)
//! it may be given inline or as a path relative to the document's directory.
//! Float rendering is confined to reports and labelled by their `"mode"` key.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::constructions::BasisSpace;
use crate::doubling::{Cover, DoublingReport};
use crate::error::{Error, Result};
use crate::free::{FlowSolution, FreeVector};
use crate::lip::LipFunction;
use crate::metric::{MetricSpace, SpaceRef};
use crate::rational::{self, Rational};
use crate::witness::{LinearWitness, WitnessReport};

/// Absolute tolerance used when comparing floats in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Render {
    #[default]
    Exact,
    Float,
}

impl Render {
    pub fn name(self) -> &'static str {
        match self {
            Render::Exact => "exact",
            Render::Float => "float",
        }
    }

    pub fn num(self, r: &Rational) -> Value {
        match self {
            Render::Exact => Value::String(rational::format(r)),
            Render::Float => json!(rational::to_f64(r)),
        }
    }

    /// Exact equality, or agreement within [`FLOAT_TOLERANCE`] in float mode.
    pub fn agree(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Render::Exact => a == b,
            Render::Float => (rational::to_f64(a) - rational::to_f64(b)).abs() <= FLOAT_TOLERANCE,
        }
    }
}

fn exact(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn parse_number(v: &Value) -> Result<Rational> {
    rational::Q::deserialize(v).map(|q| q.0).map_err(|e| Error::Parse(e.to_string()))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

/// Parses JSON text, reporting syntax errors as [`Error::Json`].
pub fn parse_json(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

// ----- spaces -----

pub fn space_to_value(space: &MetricSpace) -> Value {
    serde_json::to_value(space).expect("spaces always serialize")
}

/// Shape-checked only; see [`require_valid`].
pub fn space_from_value(v: &Value) -> Result<MetricSpace> {
    MetricSpace::deserialize(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_space(text: &str) -> Result<MetricSpace> {
    space_from_value(&parse_json(text)?)
}

pub fn read_space(path: &Path) -> Result<MetricSpace> {
    parse_space(&std::fs::read_to_string(path)?)
}

/// Rejects spaces violating a metric axiom, naming every violation.
pub fn require_valid(space: MetricSpace) -> Result<SpaceRef> {
    let violations = space.validate();
    if violations.is_empty() {
        return Ok(Arc::new(space));
    }
    let listed: Vec<String> = violations.iter().map(|v| v.describe(&space)).collect();
    Err(Error::InvalidSpace(listed.join(", ")))
}

/// A space given inline or as a path relative to `dir`; always validated.
pub fn resolve_space(v: &Value, dir: &Path) -> Result<SpaceRef> {
    let space = match v {
        Value::String(p) => read_space(&dir.join(p))?,
        other => space_from_value(other)?,
    };
    require_valid(space)
}

// ----- functions and vectors -----

pub fn function_to_value(f: &LipFunction) -> Value {
    json!({
        "space": space_to_value(f.space()),
        "values": f.values().iter().map(exact).collect::<Vec<_>>(),
    })
}

pub fn function_from_value(v: &Value, dir: &Path) -> Result<LipFunction> {
    let space = resolve_space(field(v, "space")?, dir)?;
    let values = field(v, "values")?
        .as_array()
        .ok_or_else(|| Error::Parse("`values` must be an array".into()))?
        .iter()
        .map(parse_number)
        .collect::<Result<Vec<_>>>()?;
    LipFunction::new(space, values)
}

/// `{"label": rational}` in point order, base omitted.
pub fn coeffs_to_value(m: &FreeVector) -> Value {
    let space = m.space();
    Value::Object(m.coeffs().iter().map(|(&x, c)| (space.label(x).to_string(), exact(c))).collect())
}

pub fn coeffs_from_value(space: &SpaceRef, v: &Value) -> Result<FreeVector> {
    let terms = object(v, "coefficients")?
        .iter()
        .map(|(l, c)| Ok((space.index_of(l)?, parse_number(c)?)))
        .collect::<Result<Vec<_>>>()?;
    FreeVector::new(space.clone(), terms)
}

pub fn vector_to_value(m: &FreeVector) -> Value {
    json!({ "space": space_to_value(m.space()), "coeffs": coeffs_to_value(m) })
}

pub fn vector_from_value(v: &Value, dir: &Path) -> Result<FreeVector> {
    let space = resolve_space(field(v, "space")?, dir)?;
    coeffs_from_value(&space, field(v, "coeffs")?)
}

/// `"a:1,b:-1/2"`; the empty string is the zero vector and repeated labels add up.
pub fn parse_coeff_spec(space: &SpaceRef, spec: &str) -> Result<FreeVector> {
    let terms = spec
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (label, c) =
                t.rsplit_once(':').ok_or_else(|| Error::Parse(format!("expected `label:rational`, got `{t}`")))?;
            Ok((space.index_of(label.trim())?, rational::parse(c)?))
        })
        .collect::<Result<Vec<_>>>()?;
    FreeVector::new(space.clone(), terms)
}

// ----- witnesses and bases -----

pub fn witness_to_value(t: &LinearWitness) -> Value {
    let source = t.source();
    let images: Map<String, Value> =
        t.images().iter().map(|(&x, v)| (source.label(x).to_string(), coeffs_to_value(v))).collect();
    json!({
        "source": space_to_value(source),
        "target": space_to_value(t.target()),
        "images": images,
    })
}

/// Source points missing from `"images"` are sent to zero.
pub fn witness_from_value(v: &Value, dir: &Path) -> Result<LinearWitness> {
    let source = resolve_space(field(v, "source")?, dir)?;
    let target = resolve_space(field(v, "target")?, dir)?;
    let given = object(field(v, "images")?, "`images`")?;
    let mut images: BTreeMap<usize, FreeVector> =
        source.non_base().map(|x| (x, FreeVector::zero(target.clone()))).collect();
    for (label, img) in given {
        let x = source.index_of(label)?;
        if x == source.base() {
            return Err(Error::Parse(format!("base point `{label}` cannot carry an image")));
        }
        images.insert(x, coeffs_from_value(&target, img)?);
    }
    LinearWitness::new(source, target, images)
}

pub fn parse_witness(text: &str, dir: &Path) -> Result<LinearWitness> {
    witness_from_value(&parse_json(text)?, dir)
}

/// Vectors in `δ`-coordinates of the ambient space, plus the inherited metric.
pub fn basis_to_value(b: &BasisSpace) -> Value {
    let labels = &b.space().labels()[1..];
    let vectors: Map<String, Value> =
        labels.iter().zip(b.vectors()).map(|(l, v)| (l.clone(), coeffs_to_value(v))).collect();
    json!({
        "ambient": space_to_value(b.ambient()),
        "vectors": vectors,
        "space": space_to_value(b.space()),
    })
}

/// The `"space"` entry is derived data and is recomputed, not trusted.
pub fn basis_from_value(v: &Value, dir: &Path) -> Result<BasisSpace> {
    let ambient = resolve_space(field(v, "ambient")?, dir)?;
    let given = object(field(v, "vectors")?, "`vectors`")?;
    let mut labels = Vec::with_capacity(given.len());
    let mut vectors = Vec::with_capacity(given.len());
    for (l, c) in given {
        labels.push(l.clone());
        vectors.push(coeffs_from_value(&ambient, c)?);
    }
    BasisSpace::new(&ambient, vectors, labels)
}

// ----- reports -----

pub fn function_values(f: &LipFunction, render: Render) -> Value {
    let space = f.space();
    Value::Object((0..space.len()).map(|x| (space.label(x).to_string(), render.num(f.value(x)))).collect())
}

pub fn flow_to_value(space: &MetricSpace, flow: &FlowSolution, render: Render) -> Value {
    let edges: Vec<Value> = flow
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": space.label(e.from),
                "to": space.label(e.to),
                "amount": render.num(&e.amount),
            })
        })
        .collect();
    json!({ "cost": render.num(&flow.cost), "edges": edges })
}

pub fn norm_report(
    m: &FreeVector,
    dual: &(Rational, LipFunction),
    flow: &(Rational, FlowSolution),
    render: Render,
) -> Value {
    let coeffs: Map<String, Value> =
        m.coeffs().iter().map(|(&x, c)| (m.space().label(x).to_string(), render.num(c))).collect();
    json!({
        "mode": render.name(),
        "coeffs": coeffs,
        "dual": { "value": render.num(&dual.0), "function": function_values(&dual.1, render) },
        "flow": { "value": render.num(&flow.0), "plan": flow_to_value(m.space(), &flow.1, render) },
        "agree": render.agree(&dual.0, &flow.0),
    })
}

pub fn witness_report(r: &WitnessReport, render: Render) -> Value {
    let opt = |x: Option<&Rational>| x.map_or(Value::Null, |v| render.num(v));
    json!({
        "mode": render.name(),
        "valid": r.valid,
        "reason": r.reason,
        "forward_norm": render.num(&r.forward_norm),
        "inverse_norm": opt(r.inverse_norm.as_ref()),
        "condition": opt(r.condition_number().as_ref()),
        "inverse": r.inverse.as_ref().map_or(Value::Null, witness_to_value),
    })
}

pub fn cover_to_value(space: &MetricSpace, c: &Cover) -> Value {
    json!({
        "count": c.count,
        "lower_bound": c.lower_bound,
        "exact": c.exact,
        "centers": c.centers.iter().map(|&x| space.label(x)).collect::<Vec<_>>(),
    })
}

pub fn doubling_to_value(space: &MetricSpace, r: &DoublingReport, exact_threshold: usize, render: Render) -> Value {
    let scales: Vec<Value> = r
        .scales
        .iter()
        .map(|s| {
            json!({
                "r": render.num(&s.r),
                "count": s.count,
                "lower_bound": s.lower_bound,
                "exact": s.exact,
                "worst_center": space.label(s.worst_center),
            })
        })
        .collect();
    let assouad = r.assouad.as_ref().map_or(Value::Null, |a| {
        json!({
            "kind": "estimate",
            "value": a.value,
            "center": space.label(a.center),
            "R": render.num(&a.big),
            "r": render.num(&a.small),
            "count": a.count,
        })
    });
    json!({
        "mode": render.name(),
        "exact_threshold": exact_threshold,
        "doubling_max": r.max_count,
        "lower_bound": r.max_lower_bound,
        "exact": r.exact,
        "scales": scales,
        "assouad": assouad,
    })
}

/// `scale,count,exact` with one row per scale.
pub fn doubling_csv(r: &DoublingReport, render: Render) -> String {
    let mut out = String::from("scale,count,exact\n");
    for s in &r.scales {
        let scale = match render {
            Render::Exact => rational::format(&s.r),
            Render::Float => rational::to_f64(&s.r).to_string(),
        };
        out.push_str(&format!("{scale},{},{}\n", s.count, s.exact));
    }
    out
}
