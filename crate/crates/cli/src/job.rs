//! Job documents. Two syntaxes are accepted: a JSON object, and a line-based
//! text format
//!
//! ```text
//! # comments run to the end of the line
//! field 2
//! command similar
//! form <t> [1, 1/t] [g*t, t + 1]
//! gram [1, t, 0] [t + 1, 1] [t]
//! place t^2 + t + g
//! symbol [1/t, t + 1]
//! degree-bound 4
//! seed 7
//! trials 50
//! ```
//!
//! A `form` line holds an optional odd part in angle brackets followed by
//! binary blocks; a `gram` line holds the upper-triangular rows of a Gram
//! matrix. Both syntaxes parse to the same [`JobSpec`], whose expressions are
//! rewritten in canonical printed form.

use std::fmt;
use std::str::FromStr;

use qf2_core::expr::{parse_place, parse_ratfunc};
use qf2_core::Gf2k;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Invariants,
    Localize,
    Isometric,
    Similar,
    Isotropic,
    Factor,
    Reciprocity,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Invariants,
        Command::Localize,
        Command::Isometric,
        Command::Similar,
        Command::Isotropic,
        Command::Factor,
        Command::Reciprocity,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Localize => "localize",
            Command::Isometric => "isometric",
            Command::Similar => "similar",
            Command::Isotropic => "isotropic",
            Command::Factor => "factor",
            Command::Reciprocity => "reciprocity",
            Command::Selftest => "selftest",
        }
    }

    /// Number of forms the command consumes; `None` for "any".
    pub fn arity(self) -> Option<usize> {
        match self {
            Command::Invariants | Command::Localize | Command::Isotropic => Some(1),
            Command::Isometric | Command::Similar | Command::Factor => Some(2),
            Command::Selftest => Some(0),
            Command::Reciprocity => None,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
            format!("unknown command {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub k: u32,
}

/// A form as an odd part plus binary blocks, or as a Gram triangle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub binaries: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub field: FieldSpec,
    pub command: Command,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<FormSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub places: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl JobSpec {
    pub fn new(k: u32, command: Command) -> Self {
        JobSpec {
            field: FieldSpec { k },
            command,
            forms: Vec::new(),
            places: Vec::new(),
            symbols: Vec::new(),
            degree_bound: None,
            seed: None,
            trials: None,
        }
    }

    /// Canonical JSON document for this job.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job specs serialize")
    }
}

/// Values from the command line; each one overrides the document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub k: Option<u32>,
    pub command: Option<Command>,
    pub degree_bound: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    field: Option<FieldSpec>,
    command: Option<Command>,
    #[serde(default)]
    forms: Vec<FormSpec>,
    #[serde(default)]
    places: Vec<String>,
    #[serde(default)]
    symbols: Vec<[String; 2]>,
    degree_bound: Option<usize>,
    seed: Option<u64>,
    trials: Option<usize>,
}

pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    parse_job_with(text, &Overrides::default())
}

pub fn parse_job_with(text: &str, over: &Overrides) -> Result<JobSpec, CliError> {
    let declared = over
        .k
        .map(|k| Gf2k::new(k).map_err(|_| CliError::UnsupportedField(k)))
        .transpose()?;
    let raw = if text.trim().is_empty() {
        if over.command.and_then(Command::arity) != Some(0) {
            return Err(CliError::parse(1, 1, "empty document"));
        }
        RawJob::default()
    } else if text.trim_start().starts_with('{') {
        serde_json::from_str::<RawJob>(text).map_err(|e| CliError::parse(e.line(), e.column(), e.to_string()))?
    } else {
        parse_text(text, declared)?
    };
    let k = over.k.or(raw.field.map(|f| f.k)).unwrap_or(1);
    let field = Gf2k::new(k).map_err(|_| CliError::UnsupportedField(k))?;
    let command = over
        .command
        .or(raw.command)
        .ok_or_else(|| CliError::Invalid("missing command".into()))?;
    let mut job = JobSpec {
        field: FieldSpec { k },
        command,
        forms: raw.forms,
        places: raw.places,
        symbols: raw.symbols,
        degree_bound: over.degree_bound.or(raw.degree_bound),
        seed: over.seed.or(raw.seed),
        trials: over.trials.or(raw.trials),
    };
    canonicalize(&mut job, field)?;
    check_arity(&job)?;
    Ok(job)
}

fn check_arity(job: &JobSpec) -> Result<(), CliError> {
    let n = job.forms.len();
    match job.command.arity() {
        Some(want) if want != n => Err(CliError::Invalid(format!(
            "{} takes {want} form{}, got {n}",
            job.command,
            if want == 1 { "" } else { "s" }
        ))),
        None if n == 0 && job.symbols.is_empty() => Err(CliError::Invalid(format!(
            "{} needs at least one symbol or form",
            job.command
        ))),
        _ => Ok(()),
    }
}

fn canonical_expr(field: Gf2k, path: &str, s: &str) -> Result<String, CliError> {
    parse_ratfunc(field, s)
        .map(|u| u.to_string())
        .map_err(|e| CliError::expression(path, e))
}

fn canonicalize(job: &mut JobSpec, field: Gf2k) -> Result<(), CliError> {
    for (i, form) in job.forms.iter_mut().enumerate() {
        if form.gram.is_some() && (form.odd.is_some() || !form.binaries.is_empty()) {
            return Err(CliError::Invalid(format!(
                "forms[{i}]: give either a Gram triangle or odd/binary parts"
            )));
        }
        if form.gram.is_none() && form.odd.is_none() && form.binaries.is_empty() {
            return Err(CliError::Invalid(format!("forms[{i}]: empty form")));
        }
        if let Some(odd) = &mut form.odd {
            *odd = canonical_expr(field, &format!("forms[{i}].odd"), odd)?;
        }
        for (j, pair) in form.binaries.iter_mut().enumerate() {
            for (s, slot) in pair.iter_mut().enumerate() {
                *slot = canonical_expr(field, &format!("forms[{i}].binaries[{j}][{s}]"), slot)?;
            }
        }
        if let Some(rows) = &mut form.gram {
            for (r, row) in rows.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    *entry = canonical_expr(field, &format!("forms[{i}].gram[{r}][{c}]"), entry)?;
                }
            }
        }
    }
    for (i, p) in job.places.iter_mut().enumerate() {
        *p = parse_place(field, p)
            .map_err(|e| CliError::expression(&format!("places[{i}]"), e))?
            .to_string();
    }
    for (i, pair) in job.symbols.iter_mut().enumerate() {
        for (s, slot) in pair.iter_mut().enumerate() {
            *slot = canonical_expr(field, &format!("symbols[{i}][{s}]"), slot)?;
        }
    }
    Ok(())
}

/// Cursor over one line of the text format; columns are 1-based characters.
struct LineCursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn column(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn error(&self, byte: usize, message: impl Into<String>) -> CliError {
        CliError::parse(self.line, self.column(byte), message)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, ch: char) -> Result<(), CliError> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += c.len_utf8();
                Ok(())
            }
            other => Err(self.error(
                self.pos,
                format!(
                    "expected '{ch}', found {}",
                    other.map_or("end of line".into(), |c| format!("'{c}'"))
                ),
            )),
        }
    }

    /// Text up to (not including) the first of `stops`, validated as an
    /// expression over `field` with errors mapped to this line.
    fn expr_until(&mut self, stops: &[char], field: Gf2k) -> Result<String, CliError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c| stops.contains(&c))
            .unwrap_or(self.text.len() - start);
        self.pos = start + len;
        let body = &self.text[start..start + len];
        match parse_ratfunc(field, body) {
            Ok(_) => Ok(body.trim().to_string()),
            Err(qf2_core::Error::Parse { position, message }) => Err(self.error(start + position, message)),
            Err(e) => Err(self.error(start, e.to_string())),
        }
    }

    /// `[e, e, ...]`
    fn bracket_list(&mut self, field: Gf2k) -> Result<Vec<String>, CliError> {
        self.expect('[')?;
        let mut items = vec![self.expr_until(&[',', ']'], field)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            items.push(self.expr_until(&[',', ']'], field)?);
        }
        self.expect(']')?;
        Ok(items)
    }
}

fn parse_number<T: FromStr>(cur: &mut LineCursor, what: &str) -> Result<T, CliError> {
    cur.skip_ws();
    let start = cur.pos;
    let word = cur.text[start..].trim_end();
    cur.pos = cur.text.len();
    word.parse()
        .map_err(|_| cur.error(start, format!("expected {what}, found {word:?}")))
}

/// `field` is the command-line field, if any; a `field` line replaces it.
fn parse_text(text: &str, mut field: Option<Gf2k>) -> Result<RawJob, CliError> {
    let mut raw = RawJob::default();
    for (n, full) in text.lines().enumerate() {
        let line = full.split('#').next().unwrap_or("");
        let mut cur = LineCursor {
            line: n + 1,
            text: line,
            pos: 0,
        };
        if cur.at_end() {
            continue;
        }
        let start = cur.pos;
        let keyword_len = line[start..].find(char::is_whitespace).unwrap_or(line.len() - start);
        let keyword = &line[start..start + keyword_len];
        cur.pos = start + keyword_len;
        let current = |cur: &LineCursor, field: Option<Gf2k>| {
            field.ok_or_else(|| cur.error(start, "no field declared; add a 'field' line or pass --field"))
        };
        match keyword {
            "field" => {
                let k: u32 = parse_number(&mut cur, "a field degree")?;
                field = Some(Gf2k::new(k).map_err(|_| CliError::UnsupportedField(k))?);
                raw.field = Some(FieldSpec { k });
            }
            "command" => {
                cur.skip_ws();
                let at = cur.pos;
                let name = line[at..].trim_end();
                raw.command = Some(name.parse().map_err(|e: String| cur.error(at, e))?);
                cur.pos = line.len();
            }
            "degree-bound" => raw.degree_bound = Some(parse_number(&mut cur, "a degree bound")?),
            "seed" => raw.seed = Some(parse_number(&mut cur, "a seed")?),
            "trials" => raw.trials = Some(parse_number(&mut cur, "a trial count")?),
            "form" => {
                let f = current(&cur, field)?;
                let mut form = FormSpec::default();
                if cur.peek() == Some('<') {
                    cur.pos += 1;
                    form.odd = Some(cur.expr_until(&['>'], f)?);
                    cur.expect('>')?;
                }
                while !cur.at_end() {
                    let at = cur.pos;
                    let items = cur.bracket_list(f)?;
                    let [a, b]: [String; 2] = items
                        .try_into()
                        .map_err(|_| cur.error(at, "a binary block has exactly two entries"))?;
                    form.binaries.push([a, b]);
                }
                raw.forms.push(form);
            }
            "gram" => {
                let f = current(&cur, field)?;
                let mut rows = Vec::new();
                while !cur.at_end() {
                    rows.push(cur.bracket_list(f)?);
                }
                raw.forms.push(FormSpec {
                    gram: Some(rows),
                    ..FormSpec::default()
                });
            }
            "place" => {
                let f = current(&cur, field)?;
                cur.skip_ws();
                let at = cur.pos;
                let body = line[at..].trim_end();
                parse_place(f, body).map_err(|e| match e {
                    qf2_core::Error::Parse { position, message } => cur.error(at + position, message),
                    other => cur.error(at, other.to_string()),
                })?;
                raw.places.push(body.to_string());
                cur.pos = line.len();
            }
            "symbol" => {
                let f = current(&cur, field)?;
                let at = cur.pos;
                let items = cur.bracket_list(f)?;
                let pair: [String; 2] = items
                    .try_into()
                    .map_err(|_| cur.error(at, "a symbol has exactly two entries"))?;
                raw.symbols.push(pair);
            }
            other => {
                return Err(cur.error(
                    start,
                    format!(
                        "unknown directive {other:?}; expected field, command, form, gram, place, symbol, degree-bound, seed or trials"
                    ),
                ))
            }
        }
        if !cur.at_end() {
            return Err(cur.error(cur.pos, "unexpected trailing input"));
        }
    }
    Ok(raw)
}
