use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use skcc::allocation::{run_allocation, AllocationStatus};
use skcc::capacity::{
    club_relation, conditional_sk_value, lambda_tilde, lp_capacity, sk_capacity, verify_lambda, CapacityOptions,
    LambdaVector, LP_TOLERANCE,
};
use skcc::generators::{generate, Instance};
use skcc::model::{FunctionObservable, JointDistribution};
use skcc::typecheck::{conditional_lower_bound, lemma2_check, rsk_uniform_pin, type_s_verdict, TypeSVerdict};
use skcc::Error;

use crate::source::{hypergraph, load, load_file, materialize, oracle};
use crate::{Kind, SourceArgs};

/// A command failure and its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input, or a cap violation (exit 2).
    Input(String),
    /// A precondition of the analysis does not hold (exit 3).
    Precondition(String),
    /// An internal consistency check failed (exit 4).
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) => Failure::Precondition(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Output of a command in both renderings. A nonzero `code` with a
/// `failure` message reports a verification failure after printing.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: u8,
    pub failure: Option<String>,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0, failure: None }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn render_lambda(lambda: &LambdaVector) -> String {
    let mut out = String::new();
    for (b, w) in lambda.weights() {
        let _ = writeln!(out, "  {{{b}}}: {}", skcc::bits::rational_string(w));
    }
    out
}

pub fn analyze(args: &SourceArgs, lp: bool, limit: Option<usize>, uncapped: bool) -> Result<Report, Failure> {
    let inst = load(args)?;
    let src = oracle(&inst);
    let m = src.terminal_count();
    let mut report = sk_capacity(src.as_ref(), &CapacityOptions { minimizer_limit: limit, uncapped })?;
    let mut failure = None;
    if lp {
        report = report.with_lp(lp_capacity(src.as_ref())?);
        let lp_value = report.lp_value.as_ref().expect("just set");
        let agree = if src.is_exact() {
            lp_value.as_exact() == report.i_capacity.as_exact()
        } else {
            lp_value.cmp_with(&report.i_capacity, LP_TOLERANCE) == Ordering::Equal
        };
        if !agree {
            failure = Some(format!(
                "duality mismatch: LP gives {} but partition minimization gives {}",
                lp_value.render(),
                report.i_capacity.render()
            ));
        }
    }

    let mut text = String::new();
    let _ = writeln!(text, "terminals = {m}");
    let _ = writeln!(text, "H(X_M) = {}", report.total_entropy.render());
    let _ = writeln!(text, "i_capacity = {}", report.i_capacity.render());
    let _ = writeln!(text, "r_co = {}", report.r_co.render());
    let _ = writeln!(text, "minimizers ({} of {}):", report.minimizers.len(), report.minimizer_count);
    for p in &report.minimizers {
        let _ = writeln!(text, "  {p}");
    }
    if report.truncated {
        let _ = writeln!(text, "  ... (use --all-minimizers to list all)");
    }
    if let (Some(v), Some(lambda)) = (&report.lp_value, &report.lambda) {
        let _ = writeln!(text, "lp_value = {}", v.render());
        let _ = writeln!(text, "lambda:");
        text.push_str(&render_lambda(lambda));
    }

    let mut json = to_json(&report);
    json["terminals"] = json!(m);
    json["h_total"] = to_json(&report.total_entropy);
    let code = if failure.is_some() { 4 } else { 0 };
    Ok(Report { text, json, code, failure })
}

fn render_verdict(v: &TypeSVerdict, m: usize) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "is_minimizer = {}", v.is_minimizer);
    let _ = writeln!(text, "is_unique = {}", v.is_unique);
    let _ = writeln!(text, "delta_S = {}", v.delta_s.render());
    match &v.min_gap {
        Some(g) => {
            let _ = writeln!(text, "min_gap = {}", g.render());
        }
        None => {
            let _ = writeln!(text, "min_gap = none (m = {m}: decided from the minimizing partitions)");
        }
    }
    match v.worst_b {
        Some(b) => {
            let _ = writeln!(text, "worst_B = {{{b}}}");
        }
        None => {
            let _ = writeln!(text, "worst_B = none");
        }
    }
    text
}

pub fn typecheck(args: &SourceArgs) -> Result<Report, Failure> {
    let inst = load(args)?;
    let src = oracle(&inst);
    let m = src.terminal_count();
    let verdict = type_s_verdict(src.as_ref())?;
    let mut json = to_json(&verdict);
    json["terminals"] = json!(m);
    Ok(Report::ok(render_verdict(&verdict, m), json))
}

pub fn rsk(args: &SourceArgs) -> Result<Report, Failure> {
    let inst = load(args)?;
    let h = hypergraph(&inst)?;
    let r = rsk_uniform_pin(h)?;
    let mut text = String::new();
    let _ = writeln!(text, "r_sk = {}", r.r_sk.render());
    let _ = writeln!(text, "r_co = {}", r.r_co.render());
    let _ = writeln!(text, "m = {}, t = {}, |E| = {}", r.m, r.t, r.edge_count);
    Ok(Report::ok(text, to_json(&r)))
}

pub fn lp(args: &SourceArgs) -> Result<Report, Failure> {
    let inst = load(args)?;
    let src = oracle(&inst);
    let m = src.terminal_count();
    let lp = lp_capacity(src.as_ref())?;
    let check = verify_lambda(src.as_ref(), &lambda_tilde(m)?)?;
    let mut text = String::new();
    let _ = writeln!(text, "lp_value = {}", lp.value.render());
    let _ = writeln!(text, "lambda:");
    text.push_str(&render_lambda(&lp.witness));
    let _ = writeln!(text, "lambda_tilde feasible = {}", check.feasible);
    let _ = writeln!(text, "lambda_tilde objective = {}", check.objective.render());
    let _ = writeln!(text, "lambda_tilde optimal = {}", check.optimal);
    let json = json!({
        "terminals": m,
        "lp_value": to_json(&lp.value),
        "lambda": to_json(&lp.witness),
        "lambda_tilde": to_json(&check),
    });
    Ok(Report::ok(text, json))
}

/// Dense labels for the tuples produced by `key`.
fn dense_labels<K: std::hash::Hash + Eq>(joint: &JointDistribution, key: impl Fn(usize) -> K) -> Vec<u64> {
    let mut ids: HashMap<K, u64> = HashMap::new();
    (0..joint.outcomes().len())
        .map(|k| {
            let next = ids.len() as u64;
            *ids.entry(key(k)).or_insert(next)
        })
        .collect()
}

fn parse_indices(list: &str, what: &str, max: usize) -> Result<Vec<usize>, Failure> {
    let values: Vec<usize> = list
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| Failure::Input(format!("bad {what} index {s:?}"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() || values.iter().any(|&v| v == 0 || v > max) {
        return Err(Failure::Input(format!("{what} indices must lie in 1..={max}")));
    }
    Ok(values)
}

fn observable_labels(inst: &Instance, joint: &JointDistribution, spec: &str, seed: u64) -> Result<Vec<u64>, Failure> {
    let outcomes = joint.outcomes();
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "identity" => Ok(dense_labels(joint, |k| outcomes[k].key)),
        "constant" => Ok(vec![0; outcomes.len()]),
        "edges" => {
            let h = hypergraph(inst)?;
            let edges = parse_indices(arg, "edge", h.edge_count())?;
            Ok(dense_labels(joint, |k| edges.iter().map(|&e| (outcomes[k].key >> (e - 1)) & 1).collect::<Vec<_>>()))
        }
        "terminals" => {
            let terms = parse_indices(arg, "terminal", joint_terminals(joint))?;
            Ok(dense_labels(joint, |k| terms.iter().map(|&i| outcomes[k].symbols[i - 1]).collect::<Vec<_>>()))
        }
        "random" => {
            let count: u64 = arg
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| Failure::Input(format!("random observable needs a label count >= 1, got {arg:?}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..outcomes.len()).map(|_| rng.gen_range(0..count)).collect())
        }
        _ => Err(Failure::Input(format!(
            "unknown observable {spec:?}; expected identity, constant, edges:J,..., terminals:I,... or random:K"
        ))),
    }
}

fn joint_terminals(joint: &JointDistribution) -> usize {
    joint.outcomes().first().map_or(0, |o| o.symbols.len())
}

pub fn conditional(args: &SourceArgs, spec: &str, seed: u64) -> Result<Report, Failure> {
    let inst = load(args)?;
    let src = oracle(&inst);
    let joint = Arc::new(materialize(&inst)?);
    let labels = observable_labels(&inst, &joint, spec, seed)?;
    let obs = FunctionObservable::from_labels(src.clone(), joint, labels)?;
    let value = conditional_sk_value(&obs)?;
    let h_l = obs.label_entropy();

    // the lower bound applies to Type-S uniform PIN models
    let bound = match &inst {
        Instance::Pin(h) => match h.uniformity() {
            Some(t) if t >= 2 && type_s_verdict(src.as_ref()).is_ok_and(|v| v.is_minimizer) => {
                Some(conditional_lower_bound(h.terminal_count(), t, h.edge_count(), h_l))
            }
            _ => None,
        },
        Instance::Tabular(_) => None,
    };
    let mut text = String::new();
    let _ = writeln!(text, "H(L) = {h_l:.9}");
    let _ = writeln!(text, "conditional_value = {}", value.render());
    if let Some(b) = bound {
        let _ = writeln!(text, "lower_bound = {b:.9}");
    }
    let json = json!({
        "observable": spec,
        "label_entropy": h_l,
        "conditional_value": to_json(&value),
        "lower_bound": bound,
    });
    let mut report = Report::ok(text, json);
    if let Some(b) = bound {
        if value.to_f64() < b - skcc::bits::TOLERANCE {
            report.code = 4;
            report.failure = Some(format!("conditional value {} is below the bound {b:.9}", value.render()));
        }
    }
    if value.is_negative_tol() {
        report.code = 4;
        report.failure = Some(format!("negative conditional value {}", value.render()));
    }
    Ok(report)
}

pub fn club(files: &[PathBuf], gens: &[String], kind: Option<Kind>) -> Result<Report, Failure> {
    if files.len() + gens.len() != 2 {
        return Err(Failure::Input("club needs exactly two sources (files and/or --gen specs)".into()));
    }
    let mut sources = Vec::new();
    for f in files {
        sources.push(load_file(f, kind)?);
    }
    for g in gens {
        sources.push(generate(g)?);
    }
    let r = club_relation(oracle(&sources[0]), oracle(&sources[1]))?;
    let mut text = String::new();
    let _ = writeln!(text, "i_x = {}", r.i_x.render());
    let _ = writeln!(text, "i_y = {}", r.i_y.render());
    let _ = writeln!(text, "i_z = {}", r.i_z.render());
    let _ = writeln!(text, "equality = {}", r.equality);
    let _ = writeln!(text, "shared_minimizer = {}", r.shared_minimizer);
    let mut report = Report::ok(text, to_json(&r));
    if !r.consistent() {
        report.code = 4;
        report.failure = Some("clubbing relation violated: equality must hold exactly when a minimizer is shared".into());
    }
    Ok(report)
}

pub fn alloc(m: usize, t: usize, trace: bool, tables: bool) -> Result<Report, Failure> {
    let state = run_allocation(m, t)?;
    let claims = state.verify_claims();
    let mut text = String::new();
    if tables {
        let _ = writeln!(text, "initial table:");
        text.push_str(&state.render_table(state.initial_table()));
    }
    for (a, snap) in state.allocations().iter().zip(state.snapshots()) {
        if trace || tables {
            let _ = writeln!(text, "{}", state.trace_line(a));
        }
        if tables {
            text.push_str(&state.render_table(&snap));
        }
    }
    let status = match state.status() {
        AllocationStatus::Done => "done".to_string(),
        AllocationStatus::Error { i, j } => format!("error at R({i}), edge {}", state.order().label(*j)),
    };
    let _ = writeln!(text, "allocations = {}", state.allocations().len());
    let _ = writeln!(text, "status = {status}");
    let _ = writeln!(text, "claim1_ok = {}", claims.claim1_ok);
    let _ = writeln!(text, "claim2_ok = {}", claims.claim2_ok);

    let allocations: Vec<Value> = state
        .allocations()
        .iter()
        .map(|a| {
            json!({
                "edge_index": a.edge_index,
                "edge": a.edge,
                "label": state.order().label(a.edge_index),
                "source": a.source,
                "target": a.target,
            })
        })
        .collect();
    let json = json!({
        "m": m,
        "t": t,
        "status": to_json(state.status()),
        "allocations": allocations,
        "claims": to_json(&claims),
    });
    let mut report = Report::ok(text, json);
    if !(claims.claim1_ok && claims.claim2_ok) {
        report.code = 4;
        report.failure = Some(format!("allocation claims failed: {status}"));
    }
    Ok(report)
}

pub fn lemma2(args: &SourceArgs, trials: usize, seed: u64, structured: bool) -> Result<Report, Failure> {
    let inst = load(args)?;
    let h = hypergraph(&inst)?;
    let r = lemma2_check(h, trials, seed, structured)?;
    let mut text = String::new();
    let _ = writeln!(text, "t = {}", r.t);
    let _ = writeln!(text, "trials = {}", r.trials);
    let _ = writeln!(text, "informative = {}", r.informative);
    match r.max_ratio {
        Some(x) => {
            let _ = writeln!(text, "max_ratio = {x:.9}");
        }
        None => {
            let _ = writeln!(text, "max_ratio = none");
        }
    }
    let _ = writeln!(text, "violations = {}", r.violations);
    for c in &r.structured {
        let _ = writeln!(
            text,
            "  {}: sum I(X_i;L) = {:.9}, t*H(L) = {:.9}",
            c.name, c.sum_mutual_information, c.bound
        );
    }
    let mut report = Report::ok(text, to_json(&r));
    if r.violations > 0 {
        report.code = 4;
        report.failure = Some(format!("{} violations of sum I(X_i;L) <= t*H(L)", r.violations));
    }
    Ok(report)
}

pub fn gen(spec: &str, output: Option<&Path>) -> Result<Report, Failure> {
    let inst = generate(spec)?;
    let body = inst.to_text();
    let json = json!({ "kind": inst.extension(), "content": body });
    match output {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(Report::ok(format!("wrote {}\n", path.display()), json))
        }
        None => Ok(Report::ok(body, json)),
    }
}
