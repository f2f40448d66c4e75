//! Command dispatch and report assembly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tfr_core::cech::{cech_degree, confirm_by_search, frobenius_check};
use tfr_core::cohomology::{cohomology_report, depth, Characteristic, CohomologyError, CohomologyTable, StarContext};
use tfr_core::frobenius::{excluded_primes, weak_f_regular, FrobeniusError, WeakFRegularReason};
use tfr_core::lattice::{is_prime, IntVector};
use tfr_core::moncomplex::{ComplexError, MonoidalComplex};
use tfr_core::monoid::MonoidError;

use crate::input::{build_complex, int_json, parse_input, vector_json, Built, InputDocument, InputError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CommandKind {
    Validate,
    Normalize,
    Seminormalize,
    Check,
    Presentation,
    Cohomology,
    Depth,
    Fpure,
    Oracle,
    Frobenius,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::Normalize => "normalize",
            CommandKind::Seminormalize => "seminormalize",
            CommandKind::Check => "check",
            CommandKind::Presentation => "presentation",
            CommandKind::Cohomology => "cohomology",
            CommandKind::Depth => "depth",
            CommandKind::Fpure => "fpure",
            CommandKind::Oracle => "oracle",
            CommandKind::Frobenius => "frobenius",
        }
    }

    pub fn parse(s: &str) -> Option<CommandKind> {
        use CommandKind::*;
        [Validate, Normalize, Seminormalize, Check, Presentation, Cohomology, Depth, Fpure, Oracle, Frobenius]
            .into_iter()
            .find(|c| c.name() == s)
    }
}

/// Field characteristics to report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CharSel {
    #[default]
    Zero,
    Prime(u64),
    /// Zero together with every prime at which some dimension differs.
    All,
}

impl std::str::FromStr for CharSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "0" => Ok(CharSel::Zero),
            "all" => Ok(CharSel::All),
            _ => match s.parse::<u64>() {
                Ok(p) if is_prime(p) => Ok(CharSel::Prime(p)),
                _ => Err(format!("characteristic must be 0, a prime or \"all\", got {s}")),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub degree: Option<IntVector>,
    pub report: bool,
    pub chars: CharSel,
    pub box_radius: Option<u64>,
    pub bound: Option<u64>,
    pub prime: Option<u64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    BoundExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Complete => "complete",
            Status::BoundExhausted => "bound-exhausted",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Complete => 0,
            Status::BoundExhausted => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    pub json: Value,
}

impl Report {
    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn parse_degree(s: &str, d: usize) -> Result<IntVector, CliError> {
    let entries: Result<Vec<BigInt>, _> = s.split(',').map(|x| x.trim().parse::<BigInt>()).collect();
    let entries = entries.map_err(|_| CliError::Usage(format!("malformed degree {s}")))?;
    if entries.len() != d {
        return Err(CliError::Usage(format!("degree {s} has {} entries, expected {d}", entries.len())));
    }
    Ok(IntVector::new(entries))
}

fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Outcome of a command body: a payload, or an exhausted bound.
enum Outcome {
    Done(Value),
    Exhausted { partial: Value, warning: String },
}

struct Ctx<'a> {
    doc: &'a InputDocument,
    opts: &'a RunOptions,
    bounds: Map<String, Value>,
}

fn bound_exhausted(e: &ComplexError) -> Option<String> {
    match e {
        ComplexError::Monoid(MonoidError::BoundTooSmall { .. }) => Some(e.to_string()),
        _ => None,
    }
}

/// Parses `text` and runs one command on it.
pub fn run(text: &str, command: CommandKind, opts: &RunOptions) -> Result<Report, CliError> {
    let doc = parse_input(text)?;
    run_command(&doc, text, command, opts)
}

pub fn run_command(doc: &InputDocument, text: &str, command: CommandKind, opts: &RunOptions) -> Result<Report, CliError> {
    check_options(command, opts)?;
    let mut ctx = Ctx { doc, opts, bounds: Map::new() };
    let outcome = dispatch(&mut ctx, command)?;
    let (status, result, warnings) = match outcome {
        Outcome::Done(v) => (Status::Complete, v, Vec::new()),
        Outcome::Exhausted { partial, warning } => (Status::BoundExhausted, partial, vec![Value::from(warning)]),
    };
    let mut args = Map::new();
    if let Some(a) = &opts.degree {
        args.insert("degree".into(), vector_json(a));
    }
    if opts.report {
        args.insert("report".into(), Value::Bool(true));
    }
    if let Some(p) = opts.prime {
        args.insert("p".into(), Value::from(p));
    }
    args.insert(
        "char".into(),
        Value::from(match opts.chars {
            CharSel::Zero => "0".to_string(),
            CharSel::Prime(p) => p.to_string(),
            CharSel::All => "all".to_string(),
        }),
    );
    let json = json!({
        "artifact": { "name": "tfr", "version": VERSION },
        "bounds": Value::Object(ctx.bounds),
        "command": { "name": command.name(), "args": Value::Object(args) },
        "input_sha256": sha256_hex(text),
        "result": result,
        "status": status.as_str(),
        "warnings": warnings,
    });
    Ok(Report { status, json })
}

fn check_options(command: CommandKind, o: &RunOptions) -> Result<(), CliError> {
    let usage = |m: &str| Err(CliError::Usage(format!("{}: {m}", command.name())));
    match command {
        CommandKind::Cohomology => {
            if o.degree.is_some() == o.report {
                return usage("give exactly one of --degree and --report");
            }
        }
        CommandKind::Oracle if o.degree.is_none() => return usage("--degree is required"),
        CommandKind::Frobenius if o.degree.is_none() || o.prime.is_none() => {
            return usage("--degree and -p are required")
        }
        _ => {}
    }
    if command != CommandKind::Cohomology && o.report {
        return usage("--report only applies to cohomology");
    }
    if !matches!(command, CommandKind::Cohomology | CommandKind::Oracle | CommandKind::Frobenius) && o.degree.is_some() {
        return usage("--degree does not apply");
    }
    if command != CommandKind::Frobenius && o.prime.is_some() {
        return usage("-p only applies to frobenius");
    }
    if let Some(p) = o.prime {
        if !is_prime(p) {
            return usage(&format!("{p} is not prime"));
        }
    }
    if command == CommandKind::Frobenius && !matches!(o.chars, CharSel::Zero) {
        return usage("--char does not apply; the field is F_p");
    }
    Ok(())
}

fn dispatch(ctx: &mut Ctx, command: CommandKind) -> Result<Outcome, CliError> {
    let semi_bound = match command {
        CommandKind::Validate | CommandKind::Seminormalize | CommandKind::Check => {
            ctx.opts.bound.or(ctx.doc.options.seminormal_bound)
        }
        _ => ctx.doc.options.seminormal_bound,
    };
    if let Some(b) = semi_bound {
        ctx.bounds.insert("seminormal".into(), Value::from(b));
    }
    let built = match build_complex(ctx.doc, semi_bound) {
        Ok(b) => b,
        Err(InputError::Complex(e)) => match bound_exhausted(&e) {
            Some(w) => return Ok(Outcome::Exhausted { partial: Value::Null, warning: w }),
            None => return Err(InputError::Complex(e).into()),
        },
        Err(e) => return Err(e.into()),
    };
    match command {
        CommandKind::Validate => Ok(Outcome::Done(validate(&built))),
        CommandKind::Normalize => Ok(Outcome::Done(normalize(&built))),
        CommandKind::Seminormalize => seminormalize(&built),
        CommandKind::Check => Ok(Outcome::Done(check(&built))),
        CommandKind::Presentation => presentation(ctx, &built),
        CommandKind::Cohomology => cohomology(ctx, &built),
        CommandKind::Depth => depth_cmd(ctx, &built),
        CommandKind::Fpure => fpure(ctx, &built),
        CommandKind::Oracle => oracle(ctx, &built),
        CommandKind::Frobenius => frobenius(ctx, &built),
    }
}

fn vectors_json(vs: &[IntVector]) -> Value {
    Value::Array(vs.iter().map(vector_json).collect())
}

fn opt_vector(v: &Option<IntVector>) -> Value {
    v.as_ref().map_or(Value::Null, vector_json)
}

fn maximal_map(b: &Built, f: impl Fn(usize) -> Value) -> Value {
    Value::Object(b.complex.fan().maximal().iter().map(|&i| (b.label(i).to_string(), f(i))).collect())
}

fn validate(b: &Built) -> Value {
    let mc = &b.complex;
    let fan = mc.fan();
    let cones: Vec<Value> = (0..fan.len())
        .map(|i| {
            json!({
                "label": b.label(i),
                "dim": fan.cone(i).dim(),
                "rays": vectors_json(fan.cone(i).rays()),
                "maximal": fan.maximal().contains(&i),
            })
        })
        .collect();
    json!({
        "ambient_dim": mc.ambient_dim(),
        "dim": mc.dim(),
        "cones": cones,
        "monoids": maximal_map(b, |i| vectors_json(mc.monoid(i).generators())),
        "stanley": mc.is_stanley(),
        "seminormal": mc.is_seminormal(),
        "normal": mc.has_normal_monoids(),
    })
}

fn normalize(b: &Built) -> Value {
    let mc = &b.complex;
    json!({
        "cones": maximal_map(b, |i| {
            let m = mc.monoid(i);
            json!({
                "hilbert_basis": vectors_json(&m.hilbert_basis().elements),
                "normal": m.hilbert_basis().elements.iter().all(|h| m.contains(h)),
            })
        }),
        "normal": mc.has_normal_monoids(),
    })
}

fn seminormalize(b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let mut out = Map::new();
    for &i in mc.fan().maximal() {
        match mc.monoid(i).seminormalize(mc.seminormal_bound()) {
            Ok(s) => {
                out.insert(
                    b.label(i).to_string(),
                    json!({
                        "generators": vectors_json(s.monoid.generators()),
                        "bound": s.bound,
                        "verified_bound": s.verified_bound,
                        "witness": opt_vector(&s.witness),
                    }),
                );
            }
            Err(e @ MonoidError::BoundTooSmall { .. }) => {
                return Ok(Outcome::Exhausted {
                    partial: json!({ "cones": Value::Object(out) }),
                    warning: format!("{}: {e}", b.label(i)),
                })
            }
            Err(e) => return Err(CliError::Unsupported(e.to_string())),
        }
    }
    Ok(Outcome::Done(json!({ "cones": Value::Object(out), "seminormal": mc.is_seminormal() })))
}

fn check(b: &Built) -> Value {
    let mc = &b.complex;
    let cones: Map<String, Value> = mc
        .checks()
        .iter()
        .map(|(i, c)| {
            (
                b.label(*i).to_string(),
                json!({
                    "seminormal": c.seminormal,
                    "normal": c.normal,
                    "seminormal_witness": opt_vector(&c.seminormal_witness),
                    "normal_witness": opt_vector(&c.normal_witness),
                    "verified_bound": c.verified_bound,
                }),
            )
        })
        .collect();
    json!({ "cones": cones, "seminormal": mc.is_seminormal(), "normal": mc.has_normal_monoids() })
}

fn presentation(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let bound = match ctx.opts.bound.or(ctx.doc.options.presentation_bound.map(u64::from)) {
        Some(n) => u32::try_from(n).map_err(|_| CliError::Usage("presentation bound too large".into()))?,
        None => 6,
    };
    ctx.bounds.insert("presentation_degree".into(), Value::from(bound));
    let ideal = b.complex.presentation(bound).map_err(|e| CliError::Unsupported(e.to_string()))?;
    let names: Vec<String> = ideal
        .variables
        .iter()
        .enumerate()
        .map(|(k, v)| {
            ctx.doc.rays.iter().find(|(_, r)| *r == v).map_or_else(|| format!("X{}", k + 1), |(n, _)| n.clone())
        })
        .collect();
    let text = |e: &[u32]| -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(&names)
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    };
    let variables: Vec<Value> =
        ideal.variables.iter().zip(&names).map(|(v, n)| json!({ "name": n, "degree": vector_json(v) })).collect();
    let binomials: Vec<Value> = ideal
        .binomials
        .iter()
        .map(|(u, w)| json!({ "lhs": u, "rhs": w, "text": format!("{} - {}", text(u), text(w)) }))
        .collect();
    let monomials: Vec<Value> = ideal.monomials.iter().map(|u| json!({ "exponents": u, "text": text(u) })).collect();
    Ok(Outcome::Done(json!({
        "variables": variables,
        "binomials": binomials,
        "monomials": monomials,
        "degree_bound": ideal.degree_bound,
        "verified_degrees": ideal.verified_degrees,
    })))
}

fn chars_for(sel: CharSel, primes: impl IntoIterator<Item = u64>) -> Vec<Characteristic> {
    match sel {
        CharSel::Zero => vec![Characteristic::Zero],
        CharSel::Prime(p) => vec![Characteristic::Prime(p)],
        CharSel::All => {
            let ps: BTreeSet<u64> = primes.into_iter().collect();
            std::iter::once(Characteristic::Zero).chain(ps.into_iter().map(Characteristic::Prime)).collect()
        }
    }
}

fn table_json(t: &CohomologyTable, sel: CharSel) -> Value {
    let chars = chars_for(sel, t.bad_primes());
    Value::Object(chars.into_iter().map(|ch| (ch.to_string(), json!(t.dims(ch)))).collect())
}

fn cohomology(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let sc = StarContext::new(mc);
    let sel = ctx.opts.chars;
    if let Some(a) = &ctx.opts.degree {
        check_dim(a, mc)?;
        let r = sc.local_cohomology_degree(a);
        let steps: Vec<Value> = r
            .steps
            .iter()
            .map(|s| {
                json!({
                    "maximal": s.maximal.iter().map(|c| b.cone_label(c)).collect::<Vec<_>>(),
                    "star": s.star.iter().map(|c| b.cone_label(c)).collect::<Vec<_>>(),
                    "star_dims": table_json(&s.star_table, sel),
                    "oracle_dims": s.oracle_table.as_ref().map_or(Value::Null, |t| table_json(t, sel)),
                })
            })
            .collect();
        return Ok(Outcome::Done(json!({
            "degree": vector_json(a),
            "dims": table_json(&r.table, sel),
            "oracle_computed": r.oracle_computed,
            "seminormal": mc.is_seminormal(),
            "steps": steps,
        })));
    }
    let report = cohomology_report(mc).map_err(cohomology_error)?;
    let classes: Vec<Value> = report
        .classes
        .iter()
        .map(|(c, t)| {
            json!({
                "carrier": c.carrier.map_or(Value::Null, |i| Value::from(b.label(i))),
                "representative": vector_json(&c.coset_rep),
                "class_lattice": vectors_json(c.class_lattice.basis()),
                "classes_in_carrier": c.class_count_within_carrier,
                "star": b.labels_of(&c.star),
                "dims": table_json(t, sel),
            })
        })
        .collect();
    let mut out = json!({
        "classes": classes,
        "class_count": report.classes.len(),
        "vanishing_holds": report.vanishing_holds(),
    });
    if let Some(r) = ctx.opts.box_radius.or(ctx.doc.options.box_radius) {
        ctx.bounds.insert("box".into(), Value::from(r));
        out["box_check"] = box_check(&sc, &report.classes, r)?;
    }
    Ok(Outcome::Done(out))
}

/// Every degree of `[-r, r]^d` against the oracle.
fn box_check(
    sc: &StarContext,
    classes: &[(tfr_core::cohomology::StarClass, CohomologyTable)],
    r: u64,
) -> Result<Value, CliError> {
    let mc = sc.mc;
    let r = i64::try_from(r).map_err(|_| CliError::Usage("box radius too large".into()))?;
    let plain: Vec<_> = classes.iter().map(|(c, _)| c.clone()).collect();
    let len = mc.dim() + 1;
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..mc.ambient_dim() {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut mismatches = Vec::new();
    for p in &points {
        let a = IntVector::from_i64(p);
        let k = sc.class_of(&plain, &-&a);
        let predicted = &classes[k].1;
        let oracle = cech_degree(mc, &sc.cells, &a).table.resized(len);
        if predicted != &oracle {
            mismatches.push(vector_json(&a));
        }
    }
    Ok(json!({ "radius": r, "degrees": points.len(), "mismatches": mismatches }))
}

fn cohomology_error(e: CohomologyError) -> CliError {
    match e {
        CohomologyError::NotSeminormal => CliError::Unsupported(
            "the complex is not seminormal; the class report needs a seminormal complex (use --degree)".into(),
        ),
        e => CliError::Unsupported(e.to_string()),
    }
}

fn check_dim(a: &IntVector, mc: &MonoidalComplex) -> Result<(), CliError> {
    if a.dim() != mc.ambient_dim() {
        return Err(CliError::Usage(format!("degree {a} has {} entries, expected {}", a.dim(), mc.ambient_dim())));
    }
    Ok(())
}

fn depth_cmd(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let primes: Vec<u64> = if ctx.opts.chars == CharSel::All {
        let report = cohomology_report(mc).map_err(cohomology_error)?;
        report.classes.iter().flat_map(|(_, t)| t.bad_primes()).collect()
    } else {
        Vec::new()
    };
    let mut out = Map::new();
    for ch in chars_for(ctx.opts.chars, primes) {
        let d = depth(mc, ch).map_err(cohomology_error)?;
        out.insert(
            ch.to_string(),
            json!({ "depth": d.depth, "dim": d.dim, "cohen_macaulay": d.is_cm, "skeleton_cm": d.skeleton_cm }),
        );
    }
    Ok(Outcome::Done(json!({ "by_char": out })))
}

fn fpure(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let report = excluded_primes(mc).map_err(|e| match e {
        FrobeniusError::NotSeminormal { .. } => {
            CliError::Unsupported(format!("{e}; no prime makes a non-seminormal complex F-pure"))
        }
        e => CliError::Unsupported(e.to_string()),
    })?;
    let witnesses: Vec<Value> = report
        .excluded
        .values()
        .map(|w| {
            json!({
                "prime": w.prime,
                "maximal": b.label(w.maximal),
                "face": b.label(w.face),
                "divisor": int_json(&w.divisor),
            })
        })
        .collect();
    let wf = weak_f_regular(mc);
    let reason = match &wf.reason {
        WeakFRegularReason::SingleNormalCone => json!({ "kind": "single-normal-cone" }),
        WeakFRegularReason::MultipleMaximalCones(n) => json!({ "kind": "multiple-maximal-cones", "count": n }),
        WeakFRegularReason::NonNormalMonoid { cone, witness } => {
            json!({ "kind": "non-normal-monoid", "cone": b.cone_label(cone), "witness": opt_vector(witness) })
        }
    };
    let mut out = json!({
        "excluded_primes": report.excluded_primes(),
        "witnesses": witnesses,
        "weak_f_regular": { "possible": wf.possible, "reason": reason },
    });
    if let CharSel::Prime(p) = ctx.opts.chars {
        let v = report.verdict(p);
        out["verdict"] = json!({ "p": p, "f_pure": v.f_pure, "f_split": v.f_split });
    }
    Ok(Outcome::Done(out))
}

/// `8 ×` the largest grading value of a maximal-cone monoid generator.
fn default_oracle_bound(mc: &MonoidalComplex) -> u64 {
    let max = mc
        .fan()
        .maximal()
        .iter()
        .flat_map(|&i| {
            let m = mc.monoid(i);
            m.generators().iter().map(|g| m.degree(g)).collect::<Vec<_>>()
        })
        .max()
        .unwrap_or_default();
    8 * u64::try_from(max).expect("generator degrees fit in u64")
}

fn oracle(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let a = ctx.opts.degree.as_ref().expect("checked");
    check_dim(a, mc)?;
    let sc = StarContext::new(mc);
    let r = cech_degree(mc, &sc.cells, a);
    let t = ctx.opts.bound.or(ctx.doc.options.oracle_bound).unwrap_or_else(|| default_oracle_bound(mc));
    ctx.bounds.insert("oracle_search".into(), Value::from(t));
    let pieces: Vec<Value> = r
        .slice
        .pieces
        .iter()
        .flatten()
        .map(|p| {
            json!({
                "cone": b.label(p.cone),
                "dim": mc.fan().cone(p.cone).dim(),
                "z": vector_json(&p.witness.z),
                "y": vector_json(&p.witness.y),
                "refuge": b.label(p.witness.refuge),
            })
        })
        .collect();
    let confirmed = confirm_by_search(mc, &r.slice, t);
    let out = json!({
        "degree": vector_json(a),
        "dims": table_json(&r.table.clone().resized(mc.dim() + 1), ctx.opts.chars),
        "pieces": pieces,
        "search_confirmed": confirmed.is_ok(),
    });
    match confirmed {
        Ok(()) => Ok(Outcome::Done(out)),
        Err(c) => Ok(Outcome::Exhausted {
            partial: out,
            warning: format!("piece on {} not reached by the monotone search within {t} steps", b.label(c)),
        }),
    }
}

fn frobenius(ctx: &mut Ctx, b: &Built) -> Result<Outcome, CliError> {
    let mc = &b.complex;
    let a = ctx.opts.degree.as_ref().expect("checked");
    let p = ctx.opts.prime.expect("checked");
    check_dim(a, mc)?;
    let sc = StarContext::new(mc);
    let statuses: Vec<Value> = frobenius_check(mc, &sc.cells, a, p)
        .into_iter()
        .map(|s| {
            json!({
                "index": s.index,
                "source_dim": s.source_dim,
                "target_dim": s.target_dim,
                "rank": s.rank,
                "injective": s.injective,
                "bijective": s.bijective,
            })
        })
        .collect();
    Ok(Outcome::Done(json!({
        "degree": vector_json(a),
        "target_degree": vector_json(&a.scale_i64(i64::try_from(p).expect("small prime"))),
        "p": p,
        "statuses": statuses,
    })))
}
