//! The JSON input document: named rays, maximal cones and their monoids.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde_json::{Map, Value};
use thiserror::Error;
use tfr_core::lattice::IntVector;
use tfr_core::moncomplex::{ComplexError, MonoidalComplex};
use tfr_core::polyhedral::{Cone, Fan};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Field { field: field.into(), message: message.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub name: String,
    pub rays: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidSpec {
    Stanley,
    /// Generators per maximal cone name, with ray names already resolved.
    PerCone(BTreeMap<String, Vec<IntVector>>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seminormal_bound: Option<u64>,
    pub oracle_bound: Option<u64>,
    pub presentation_bound: Option<u32>,
    pub box_radius: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputDocument {
    pub dimension: usize,
    pub rays: BTreeMap<String, IntVector>,
    pub cones: Vec<ConeSpec>,
    pub monoids: MonoidSpec,
    pub options: Options,
}

fn integer(v: &Value, field: &str) -> Result<BigInt, InputError> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            s.parse::<BigInt>().map_err(|_| field_err(field, format!("malformed integer {s}")))
        }
        _ => Err(field_err(field, "expected an integer")),
    }
}

fn small(v: &Value, field: &str) -> Result<u64, InputError> {
    let n = integer(v, field)?;
    u64::try_from(&n).map_err(|_| field_err(field, format!("{n} is not a nonnegative machine integer")))
}

fn vector(v: &Value, d: usize, field: &str) -> Result<IntVector, InputError> {
    let Value::Array(xs) = v else { return Err(field_err(field, "expected an array of integers")) };
    if xs.len() != d {
        return Err(field_err(field, format!("vector has length {}, expected {d}", xs.len())));
    }
    let entries = xs.iter().enumerate().map(|(i, x)| integer(x, &format!("{field}[{i}]"))).collect::<Result<_, _>>()?;
    Ok(IntVector::new(entries))
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object().ok_or_else(|| field_err(field, "expected an object"))
}

fn string(v: &Value, field: &str) -> Result<String, InputError> {
    v.as_str().map(str::to_owned).ok_or_else(|| field_err(field, "expected a string"))
}

pub fn parse_input(text: &str) -> Result<InputDocument, InputError> {
    let root: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let top = object(&root, "document")?;
    const KNOWN: [&str; 6] = ["dimension", "rays", "cones", "monoids", "stanley", "options"];
    if let Some(k) = top.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(field_err(k.as_str(), "unknown field"));
    }

    let dimension = small(top.get("dimension").ok_or_else(|| field_err("dimension", "missing"))?, "dimension")?;
    let dimension = usize::try_from(dimension).map_err(|_| field_err("dimension", "too large"))?;
    if dimension == 0 {
        return Err(field_err("dimension", "must be positive"));
    }

    let mut rays = BTreeMap::new();
    let ray_obj = object(top.get("rays").ok_or_else(|| field_err("rays", "missing"))?, "rays")?;
    for (name, v) in ray_obj {
        rays.insert(name.clone(), vector(v, dimension, &format!("rays.{name}"))?);
    }

    let Some(Value::Array(cone_list)) = top.get("cones") else { return Err(field_err("cones", "expected an array")) };
    if cone_list.is_empty() {
        return Err(field_err("cones", "no cones given"));
    }
    let mut cones = Vec::new();
    let mut names = BTreeSet::new();
    for (i, c) in cone_list.iter().enumerate() {
        let f = format!("cones[{i}]");
        let o = object(c, &f)?;
        let name = string(o.get("name").ok_or_else(|| field_err(format!("{f}.name"), "missing"))?, &format!("{f}.name"))?;
        if !names.insert(name.clone()) {
            return Err(field_err(format!("{f}.name"), format!("duplicate cone name {name}")));
        }
        let Some(Value::Array(rs)) = o.get("rays") else { return Err(field_err(format!("{f}.rays"), "expected an array")) };
        let mut cone_rays = Vec::new();
        for (j, r) in rs.iter().enumerate() {
            let rf = format!("{f}.rays[{j}]");
            let r = string(r, &rf)?;
            if !rays.contains_key(&r) {
                return Err(field_err(rf, format!("unknown ray {r}")));
            }
            cone_rays.push(r);
        }
        cones.push(ConeSpec { name, rays: cone_rays });
    }

    let stanley = match top.get("stanley") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(field_err("stanley", "expected a boolean")),
    };
    let monoids = match (stanley, top.get("monoids")) {
        (true, Some(_)) => return Err(field_err("monoids", "not allowed together with \"stanley\": true")),
        (true, None) => MonoidSpec::Stanley,
        (false, None) => return Err(field_err("monoids", "missing (or set \"stanley\": true)")),
        (false, Some(m)) => {
            let o = object(m, "monoids")?;
            let mut per = BTreeMap::new();
            for (name, gens) in o {
                let f = format!("monoids.{name}");
                if !names.contains(name) {
                    return Err(field_err(f, format!("unknown cone {name}")));
                }
                let Value::Array(gs) = gens else { return Err(field_err(f, "expected an array")) };
                let mut out = Vec::new();
                for (j, g) in gs.iter().enumerate() {
                    let gf = format!("{f}[{j}]");
                    out.push(match g {
                        Value::String(r) => rays.get(r).cloned().ok_or_else(|| field_err(&gf, format!("unknown ray {r}")))?,
                        _ => vector(g, dimension, &gf)?,
                    });
                }
                per.insert(name.clone(), out);
            }
            if let Some(c) = cones.iter().find(|c| !per.contains_key(&c.name)) {
                return Err(field_err("monoids", format!("no generators for cone {}", c.name)));
            }
            MonoidSpec::PerCone(per)
        }
    };

    let mut options = Options::default();
    if let Some(o) = top.get("options") {
        let o = object(o, "options")?;
        for (k, v) in o {
            let f = format!("options.{k}");
            match k.as_str() {
                "seminormal_bound" => options.seminormal_bound = Some(small(v, &f)?),
                "oracle_bound" => options.oracle_bound = Some(small(v, &f)?),
                "presentation_bound" => {
                    let b = small(v, &f)?;
                    options.presentation_bound = Some(u32::try_from(b).map_err(|_| field_err(&f, "too large"))?);
                }
                "box" => options.box_radius = Some(small(v, &f)?),
                _ => return Err(field_err(f, "unknown option")),
            }
        }
    }

    Ok(InputDocument { dimension, rays, cones, monoids, options })
}

pub fn int_json(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse().expect("decimal integers are JSON numbers"))
}

pub fn vector_json(v: &IntVector) -> Value {
    Value::Array(v.entries().iter().map(int_json).collect())
}

/// Canonical JSON text of a document; [`parse_input`] reads it back unchanged.
pub fn render_input(doc: &InputDocument) -> String {
    let mut top = Map::new();
    top.insert("dimension".into(), Value::from(doc.dimension));
    top.insert("rays".into(), Value::Object(doc.rays.iter().map(|(k, v)| (k.clone(), vector_json(v))).collect()));
    let cones = doc
        .cones
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), Value::from(c.name.clone()));
            o.insert("rays".into(), Value::Array(c.rays.iter().cloned().map(Value::from).collect()));
            Value::Object(o)
        })
        .collect();
    top.insert("cones".into(), Value::Array(cones));
    match &doc.monoids {
        MonoidSpec::Stanley => {
            top.insert("stanley".into(), Value::Bool(true));
        }
        MonoidSpec::PerCone(per) => {
            let m = per.iter().map(|(k, gs)| (k.clone(), Value::Array(gs.iter().map(vector_json).collect()))).collect();
            top.insert("monoids".into(), Value::Object(m));
        }
    }
    let o = &doc.options;
    let mut opts = Map::new();
    if let Some(b) = o.seminormal_bound {
        opts.insert("seminormal_bound".into(), Value::from(b));
    }
    if let Some(b) = o.oracle_bound {
        opts.insert("oracle_bound".into(), Value::from(b));
    }
    if let Some(b) = o.presentation_bound {
        opts.insert("presentation_bound".into(), Value::from(b));
    }
    if let Some(b) = o.box_radius {
        opts.insert("box".into(), Value::from(b));
    }
    if !opts.is_empty() {
        top.insert("options".into(), Value::Object(opts));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("values serialize");
    s.push('\n');
    s
}

/// The complex described by a document, with human-readable cone labels.
pub struct Built {
    pub complex: MonoidalComplex,
    /// Label per fan cone index.
    pub labels: Vec<String>,
}

impl Built {
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels_of(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub fn cone_label(&self, c: &Cone) -> String {
        match self.complex.fan().index_of(c) {
            Some(i) => self.labels[i].clone(),
            None => c.to_string(),
        }
    }
}

pub fn build_complex(doc: &InputDocument, seminormal_bound: Option<u64>) -> Result<Built, InputError> {
    let d = doc.dimension;
    let mut cones = Vec::new();
    for (i, c) in doc.cones.iter().enumerate() {
        let gens: Vec<IntVector> = c.rays.iter().map(|r| doc.rays[r].clone()).collect();
        let cone = Cone::new(d, &gens).map_err(|e| field_err(format!("cones[{i}]"), e.to_string()))?;
        cones.push(cone);
    }
    let fan = Fan::new(d, &cones).map_err(ComplexError::from)?;
    let mut maximal_gens = BTreeMap::new();
    for (spec, cone) in doc.cones.iter().zip(&cones) {
        let i = fan.index_of(cone).expect("input cones are in the fan");
        if !fan.maximal().contains(&i) {
            return Err(field_err("cones", format!("{} is a face of another cone; list maximal cones only", spec.name)));
        }
        if let MonoidSpec::PerCone(per) = &doc.monoids {
            if maximal_gens.insert(i, per[&spec.name].clone()).is_some() {
                return Err(field_err("cones", format!("{} repeats an earlier cone", spec.name)));
            }
        }
    }
    let stanley = doc.monoids == MonoidSpec::Stanley;
    let complex = MonoidalComplex::build(fan, &maximal_gens, stanley, seminormal_bound)?;
    let labels = cone_labels(doc, &complex, &cones);
    Ok(Built { complex, labels })
}

/// Maximal cones keep their input names; other cones are written by the
/// names of their rays, e.g. `cone(x,z)`.
fn cone_labels(doc: &InputDocument, mc: &MonoidalComplex, inputs: &[Cone]) -> Vec<String> {
    let mut ray_names: BTreeMap<IntVector, String> = BTreeMap::new();
    for (name, v) in &doc.rays {
        if !v.is_zero() {
            ray_names.entry(v.primitive()).or_insert_with(|| name.clone());
        }
    }
    let fan = mc.fan();
    (0..fan.len())
        .map(|i| {
            if let Some(k) = inputs.iter().position(|c| c == fan.cone(i)) {
                return doc.cones[k].name.clone();
            }
            let parts: Vec<String> =
                fan.cone(i).rays().iter().map(|r| ray_names.get(r).cloned().unwrap_or_else(|| r.to_string())).collect();
            format!("cone({})", parts.join(","))
        })
        .collect()
}
