use std::collections::BTreeSet;
use std::time::Instant;

use qf2_core::expr::{parse_place, parse_ratfunc};
use qf2_core::funcfield::{global_as_test, global_square_test};
use qf2_core::globaldec::{
    global_anisotropic_dimension, global_isotropic, isometric, similar_decide_with, FactorSearch, DEFAULT_DEGREE_BOUND,
};
use qf2_core::localinv::{local_clifford_class, local_profile, schmid_symbol};
use qf2_core::qform::{clifford_symbol_list, invariants, normalize, support_places};
use qf2_core::selftest::run_selftest;
use qf2_core::{Decision, FactorStatus, Gf2k, GramInput, Place, QuadraticForm, SymbolPair};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::job::{Command, FormSpec, JobSpec};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Adds per-place local profiles to decision reports.
    pub verbose: bool,
    /// Adds wall-clock time; reports are then no longer reproducible.
    pub timing: bool,
    /// Exit code for a negative verdict.
    pub negative_exit: i32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            verbose: false,
            timing: false,
            negative_exit: EXIT_NEGATIVE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub exit_code: i32,
    pub json: Value,
}

struct Outcome {
    status: Status,
    result: Value,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Info,
    Positive,
    Negative,
    NotFound,
}

fn form_from_spec(field: Gf2k, spec: &FormSpec) -> Result<(QuadraticForm, Option<GramInput>), CliError> {
    let expr = |s: &String| parse_ratfunc(field, s).map_err(CliError::from);
    if let Some(rows) = &spec.gram {
        let coeffs = rows
            .iter()
            .map(|row| row.iter().map(expr).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let gram = GramInput::new(field, coeffs)?;
        return Ok((normalize(&gram)?, Some(gram)));
    }
    let odd = spec.odd.as_ref().map(expr).transpose()?;
    let binaries = spec
        .binaries
        .iter()
        .map(|[a, b]| Ok((expr(a)?, expr(b)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((QuadraticForm::new(field, odd, binaries)?, None))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::String(x.to_string())).collect())
}

fn profiles(q: &QuadraticForm, places: &BTreeSet<Place>) -> Result<Value, CliError> {
    let list = places
        .iter()
        .map(|v| local_profile(q, v).map(|p| to_value(&p)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Array(list))
}

fn invariants_report(q: &QuadraticForm) -> Result<Value, CliError> {
    let (n, d) = invariants(q);
    let (kind, trivial) = if n % 2 == 1 {
        ("square_class", global_square_test(&d)?.is_some())
    } else {
        ("arf", global_as_test(&d).is_some())
    };
    let support = support_places(q, q);
    let nonsplit: Vec<&Place> = support.iter().filter(|v| local_clifford_class(q, v) == 1).collect();
    Ok(json!({
        "form": q.to_string(),
        "rank": n,
        "discriminant": {"kind": kind, "value": d.to_string(), "trivial": trivial},
        "clifford": {
            "symbols": clifford_symbol_list(q).symbols.iter()
                .map(|p| [p.as_slot.to_string(), p.mult_slot.to_string()]).collect::<Vec<_>>(),
            "nonsplit_places": strings(nonsplit),
        },
        "support": strings(&support),
        "anisotropic_dimension": global_anisotropic_dimension(q)?,
    }))
}

fn decision_outcome(d: &Decision) -> Outcome {
    Outcome {
        status: if d.verdict { Status::Positive } else { Status::Negative },
        result: to_value(d),
    }
}

fn with_profiles(mut out: Outcome, opts: &RunOptions, forms: &[QuadraticForm]) -> Result<Outcome, CliError> {
    if opts.verbose {
        let places = match forms {
            [f] => support_places(f, f),
            [f, g, ..] => support_places(f, g),
            [] => BTreeSet::new(),
        };
        let list = forms
            .iter()
            .map(|q| profiles(q, &places))
            .collect::<Result<Vec<_>, _>>()?;
        out.result["profiles"] = Value::Array(list);
    }
    Ok(out)
}

fn reciprocity_report(field: Gf2k, job: &JobSpec, forms: &[QuadraticForm]) -> Result<Outcome, CliError> {
    let mut pairs: Vec<(String, SymbolPair)> = Vec::new();
    for [x, y] in &job.symbols {
        let p = SymbolPair::new(parse_ratfunc(field, x)?, parse_ratfunc(field, y)?)?;
        pairs.push((format!("({}, {}]", p.as_slot, p.mult_slot), p));
    }
    for (i, q) in forms.iter().enumerate() {
        for p in clifford_symbol_list(q).symbols {
            pairs.push((format!("forms[{i}]: ({}, {}]", p.as_slot, p.mult_slot), p));
        }
    }
    let mut all = true;
    let mut entries = Vec::new();
    for (label, p) in &pairs {
        let mut places: BTreeSet<Place> = p.mult_slot.finite_support();
        if !p.as_slot.is_zero() {
            places.extend(p.as_slot.finite_support());
        }
        places.insert(Place::Infinity);
        let mut total = 0;
        let mut nonsplit = Vec::new();
        for v in &places {
            let c = schmid_symbol(p, v)?;
            total ^= c;
            if c == 1 {
                nonsplit.push(v.to_string());
            }
        }
        all &= total == 0;
        entries.push(json!({"symbol": label, "nonsplit_places": nonsplit, "sum": total}));
    }
    Ok(Outcome {
        status: if all { Status::Positive } else { Status::Negative },
        result: json!({"verdict": all, "symbols": entries}),
    })
}

fn dispatch(job: &JobSpec, opts: &RunOptions) -> Result<Outcome, CliError> {
    let field = Gf2k::new(job.field.k).map_err(|_| CliError::UnsupportedField(job.field.k))?;
    let mut forms = Vec::new();
    let mut normalized = Vec::new();
    for spec in &job.forms {
        let (q, gram) = form_from_spec(field, spec)?;
        if gram.is_some() {
            normalized.push(q.to_string());
        }
        forms.push(q);
    }
    let search = FactorSearch {
        degree_bound: job.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND),
        ..FactorSearch::default()
    };
    let mut out = match job.command {
        Command::Invariants => Outcome {
            status: Status::Info,
            result: invariants_report(&forms[0])?,
        },
        Command::Localize => {
            let q = &forms[0];
            let places: BTreeSet<Place> = if job.places.is_empty() {
                support_places(q, q)
            } else {
                job.places
                    .iter()
                    .map(|p| parse_place(field, p))
                    .collect::<Result<_, _>>()?
            };
            Outcome {
                status: Status::Info,
                result: json!({"form": q.to_string(), "profiles": profiles(q, &places)?}),
            }
        }
        Command::Isometric => with_profiles(decision_outcome(&isometric(&forms[0], &forms[1])?), opts, &forms)?,
        Command::Similar => {
            let d = similar_decide_with(&forms[0], &forms[1], search)?;
            with_profiles(decision_outcome(&d), opts, &forms)?
        }
        Command::Isotropic => with_profiles(decision_outcome(&global_isotropic(&forms[0])?), opts, &forms)?,
        Command::Factor => {
            let d = similar_decide_with(&forms[0], &forms[1], search)?;
            let mut out = decision_outcome(&d);
            if let FactorStatus::NotFoundWithinBound { .. } = d.factor_status {
                out.status = Status::NotFound;
            }
            with_profiles(out, opts, &forms)?
        }
        Command::Reciprocity => reciprocity_report(field, job, &forms)?,
        Command::Selftest => {
            let report = run_selftest(job.seed.unwrap_or(DEFAULT_SEED), job.trials.unwrap_or(DEFAULT_TRIALS));
            Outcome {
                status: if report.passed {
                    Status::Positive
                } else {
                    Status::Negative
                },
                result: to_value(&report),
            }
        }
    };
    if !normalized.is_empty() {
        out.result["normalized_forms"] = strings(normalized);
    }
    Ok(out)
}

fn status_code(status: Status, opts: &RunOptions) -> (&'static str, i32) {
    match status {
        Status::Info => ("ok", EXIT_DECIDED),
        Status::Positive => ("decided", EXIT_DECIDED),
        Status::Negative => ("decided", opts.negative_exit),
        Status::NotFound => ("not_found_within_bound", EXIT_NOT_FOUND),
    }
}

fn envelope(job: &JobSpec) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(job.command.name()));
    m.insert("field".into(), json!({"k": job.field.k}));
    m
}

/// Runs a parsed job. Identical jobs and options give identical reports
/// unless `timing` is set.
pub fn run_job(job: &JobSpec, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let mut m = envelope(job);
    let exit_code = match dispatch(job, opts) {
        Ok(out) => {
            let (status, code) = status_code(out.status, opts);
            m.insert("status".into(), json!(status));
            m.insert("result".into(), out.result);
            code
        }
        Err(e) => {
            m.insert("status".into(), json!("error"));
            m.insert("error".into(), error_value(&e));
            EXIT_ERROR
        }
    };
    m.insert("exit_code".into(), json!(exit_code));
    if opts.timing {
        m.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1000.0));
    }
    Report {
        exit_code,
        json: Value::Object(m),
    }
}

pub fn error_value(e: &CliError) -> Value {
    let mut v = json!({"code": e.code(), "message": e.to_string()});
    match e {
        CliError::Parse { line, column, .. } => {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        CliError::Expression { path, position, .. } => {
            v["path"] = json!(path);
            v["position"] = json!(position);
        }
        _ => {}
    }
    v
}

/// Report for a document that failed to parse.
pub fn error_report(e: &CliError) -> Report {
    Report {
        exit_code: EXIT_ERROR,
        json: json!({"status": "error", "error": error_value(e), "exit_code": EXIT_ERROR}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::job::parse_job;

    #[test]
    fn exit_codes_follow_status() {
        let opts = RunOptions::default();
        assert_eq!(status_code(Status::Info, &opts).1, EXIT_DECIDED);
        assert_eq!(status_code(Status::Positive, &opts).1, EXIT_DECIDED);
        assert_eq!(status_code(Status::Negative, &opts).1, EXIT_NEGATIVE);
        assert_eq!(
            status_code(Status::NotFound, &opts),
            ("not_found_within_bound", EXIT_NOT_FOUND)
        );
        let lenient = RunOptions {
            negative_exit: 0,
            ..opts
        };
        assert_eq!(status_code(Status::Negative, &lenient).1, 0);
    }

    #[test]
    fn rank_five_is_isotropic_by_rank() {
        let job = parse_job("field 1\ncommand isotropic\nform <t> [1, 1/t] [t + 1, t]\n").unwrap();
        let report = run_job(&job, &RunOptions::default());
        assert_eq!(report.exit_code, 0);
        assert_eq!(report.json["result"]["verdict"], true);
        assert_eq!(report.json["result"]["reason"], "rank > 4");
    }

    #[test]
    fn core_errors_surface_with_codes() {
        let job = parse_job("field 1\ncommand invariants\ngram [0, 1, 0] [0, 0] [0]\n").unwrap();
        let report = run_job(&job, &RunOptions::default());
        assert_eq!(report.exit_code, EXIT_ERROR);
        assert_eq!(report.json["error"]["code"], "DegenerateForm");
    }

    #[test]
    fn timing_is_opt_in() {
        let job = parse_job("field 1\ncommand invariants\nform [1, 1/t]\n").unwrap();
        let plain = run_job(&job, &RunOptions::default());
        assert!(plain.json.get("elapsed_ms").is_none());
        let timed = run_job(
            &job,
            &RunOptions {
                timing: true,
                ..RunOptions::default()
            },
        );
        assert!(timed.json.get("elapsed_ms").is_some());
    }
}
