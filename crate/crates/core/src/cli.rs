//! Command-line front end. The binary only forwards its arguments to [`run`].
//!
//! Exit codes: 0 success, 1 malformed input, 2 domain violation, 3 search
//! budget exhausted.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::blowup::{blowdown, blowup, FilteredLattice};
use crate::classify::{classify, invariants, ClassTag, Verdict, TRIVIAL_NOTE};
use crate::diophantine::{enumerate_rank4, markov_reduce, markov_value, rank4_values, Rank3Coeffs, Rank4Coeffs};
use crate::error::Error;
use crate::lattice::{Element, GramMatrix, SerreLattice};
use crate::linalg::{IntMatrix, Integer};
use crate::mutation::{apply_word, orbit_bfs, BraidWord, OrbitSearch, DEFAULT_MAX_ENTRY, DEFAULT_MAX_NODES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "slk", version, about = "Serre lattices, exceptional bases and their mutations")]
pub struct Cli {
    /// Emit JSON (integers as decimal strings).
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report exceptionality, unipotency, equation values, surface type, degree and parity.
    Check {
        /// Matrix text, a file path, or `-` for stdin.
        input: String,
    },
    /// Apply a braid word such as `s1 S2 e4` to a Gram matrix.
    Mutate {
        input: String,
        word: String,
        /// Read the word as a composition: rightmost token acts first.
        #[arg(long)]
        display_order: bool,
    },
    /// Classify a rank-3 or rank-4 solution and print the verdict.
    Classify { input: String },
    /// List all rank-4 solutions with entries in [-bound, bound].
    Enumerate {
        bound: u32,
        /// Classify each solution and append a histogram.
        #[arg(long)]
        classify: bool,
    },
    /// Search for a word mapping one Gram matrix to another.
    Orbit {
        input: String,
        target: String,
        /// Maximum number of visited states (default: SLK_MAX_NODES or 10^7).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_ENTRY)]
        max_entry: i64,
    },
    /// Blow up a surface* lattice at an element z of F^2 (coordinates in the input basis).
    Blowup { input: String, z: String },
    /// Blow down a surface* lattice along an exceptional element f of F^1.
    Blowdown { input: String, f: String },
    /// Reduce a solution of a^2 + b^2 + c^2 = abc to (3, 3, 3).
    Markov {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
}

/// A matrix as read from JSON input.
#[derive(Deserialize, Debug)]
pub struct MatrixDocument {
    pub gram: Vec<Vec<Value>>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub source: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { EXIT_MALFORMED } else { EXIT_DOMAIN };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_MALFORMED, message: msg.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

fn parse_integer(tok: &str) -> Result<Integer, Error> {
    tok.parse().map_err(|_| Error::Parse(format!("not an integer: {tok:?}")))
}

fn json_integer(v: &Value) -> Result<Integer, Error> {
    match v {
        Value::Number(n) => parse_integer(&n.to_string()),
        Value::String(s) => parse_integer(s.trim()),
        _ => Err(Error::Parse(format!("not an integer: {v}"))),
    }
}

/// Parses `1 2 2 4; 0 1 0 2; ...` (rows split by `;` or newlines) or a JSON
/// document `{"gram": [[...]]}`.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, Error> {
    let trimmed = text.trim();
    let rows: Vec<Vec<Integer>> = if trimmed.starts_with('{') {
        let doc: MatrixDocument =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("bad JSON matrix: {e}")))?;
        doc.gram.iter().map(|r| r.iter().map(json_integer).collect()).collect::<Result<_, _>>()?
    } else {
        trimmed
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| r.split_whitespace().map(parse_integer).collect())
            .collect::<Result<_, _>>()?
    };
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    let m = IntMatrix::from_rows(rows).map_err(|_| Error::Parse("rows have different lengths".into()))?;
    if !m.is_square() {
        return Err(Error::Parse(format!("matrix is {}x{}, expected square", m.rows(), m.cols())));
    }
    Ok(m)
}

fn parse_element(text: &str) -> Result<Element, Error> {
    let coords = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(parse_integer)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Element(coords))
}

fn render_matrix_text(m: &IntMatrix) -> String {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

fn element_json(v: &Element) -> Value {
    Value::Array(v.coords().iter().map(|x| Value::String(x.to_string())).collect())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    let mut obj = json!({
        "class": match v.class.tag {
            ClassTag::Trivial => "Trivial",
            ClassTag::P2 => "P2",
            ClassTag::Quadric => "Quadric",
            ClassTag::NumBlowup(_) => "NumBlowup",
        },
        "delta": v.class.delta.to_string(),
        "s_parity": v.class.s_parity,
        "witness": v.witness.to_string(),
        "canonical": matrix_json(v.canonical_gram.matrix()),
        "route": format!("{:?}", v.route),
    });
    if let ClassTag::NumBlowup(n) = &v.class.tag {
        obj["n"] = Value::String(n.to_string());
    }
    if v.class.tag == ClassTag::Trivial {
        obj["note"] = Value::String(TRIVIAL_NOTE.into());
    }
    obj
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn read_input(&mut self, arg: &str) -> Result<String, Failure> {
        if arg == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| malformed(format!("reading stdin: {e}")))?;
            Ok(s)
        } else if Path::new(arg).is_file() {
            std::fs::read_to_string(arg).map_err(|e| malformed(format!("reading {arg}: {e}")))
        } else {
            Ok(arg.to_string())
        }
    }

    fn matrix(&mut self, arg: &str) -> Result<IntMatrix, Failure> {
        let text = self.read_input(arg)?;
        Ok(parse_matrix(&text)?)
    }

    fn gram(&mut self, arg: &str) -> Result<GramMatrix, Failure> {
        let m = self.matrix(arg)?;
        Ok(GramMatrix::new(m)?)
    }

    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn emit_json(&mut self, v: &Value) {
        let text = serde_json::to_string_pretty(v).expect("serializable");
        self.line(text);
    }
}

fn cmd_check(io: &mut Io, input: &str) -> CmdResult {
    let m = io.matrix(input)?;
    let lattice = SerreLattice::new(m.clone())?;
    let gram = GramMatrix::new(m.clone()).ok();
    let unipotent = lattice.is_unipotent();
    let surface = lattice.surface_type();
    let delta = lattice.degree().ok();
    let mut report = json!({
        "rank": m.rows().to_string(),
        "exceptional": gram.is_some(),
        "unipotent": unipotent,
        "surface_type": surface.to_string(),
        "delta": delta.as_ref().map(|d| Value::String(d.to_string())).unwrap_or(Value::Null),
    });
    let mut solves = None;
    if let Some(g) = &gram {
        report["s_parity"] = Value::Bool(invariants(g).s_parity);
        match g.rank() {
            3 => {
                let v = markov_value(&Rank3Coeffs::from_gram(g)?);
                solves = Some(v.is_zero());
                report["markov_value"] = Value::String(v.to_string());
            }
            4 => {
                let (q1, q2) = rank4_values(&Rank4Coeffs::from_gram(g)?);
                solves = Some(q1.is_zero() && q2.is_zero());
                report["q1"] = Value::String(q1.to_string());
                report["q2"] = Value::String(q2.to_string());
            }
            _ => {}
        }
    }
    if io.json {
        io.emit_json(&report);
    } else {
        io.line(format!("rank: {}", m.rows()));
        io.line(format!("exceptional: {}", yes_no(gram.is_some())));
        if let Some(v) = report.get("markov_value") {
            io.line(format!("a^2+b^2+c^2-abc: {}", v.as_str().unwrap_or_default()));
        }
        if let (Some(q1), Some(q2)) = (report.get("q1"), report.get("q2")) {
            io.line(format!("q1: {}", q1.as_str().unwrap_or_default()));
            io.line(format!("q2: {}", q2.as_str().unwrap_or_default()));
        }
        io.line(format!("unipotent: {}", yes_no(unipotent)));
        io.line(format!("surface type: {surface}"));
        if let Some(d) = &delta {
            io.line(format!("delta: {d}"));
        }
        if let Some(p) = report.get("s_parity").and_then(Value::as_bool) {
            io.line(format!("s = 1 mod 2: {p}"));
        }
    }
    Ok(if unipotent && solves != Some(false) { EXIT_OK } else { EXIT_DOMAIN })
}

fn cmd_mutate(io: &mut Io, input: &str, word: &str, display_order: bool) -> CmdResult {
    let g = io.gram(input)?;
    let w = if display_order { BraidWord::from_display_order(word)? } else { word.parse()? };
    let out = apply_word(&g, &w)?;
    if io.json {
        io.emit_json(&json!({ "gram": matrix_json(out.matrix()), "word": w.to_string() }));
    } else {
        io.line(render_matrix_text(out.matrix()));
    }
    Ok(EXIT_OK)
}

fn cmd_classify(io: &mut Io, input: &str) -> CmdResult {
    let g = io.gram(input)?;
    let v = classify(&g)?;
    io.emit_json(&verdict_json(&v));
    Ok(EXIT_OK)
}

fn cmd_enumerate(io: &mut Io, bound: u32, with_classes: bool) -> CmdResult {
    let sols = enumerate_rank4(bound);
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows = Vec::new();
    for t in &sols {
        let text = t.map(|x| x.to_string()).join(" ");
        let class = if with_classes {
            let v = classify(&Rank4Coeffs::from_i64(*t).gram())?;
            let tag = v.class.tag.to_string();
            *hist.entry(tag.clone()).or_default() += 1;
            Some(tag)
        } else {
            None
        };
        if io.json {
            let mut row = json!({ "coeffs": t.map(|x| x.to_string()) });
            if let Some(c) = &class {
                row["class"] = Value::String(c.clone());
            }
            rows.push(row);
        } else {
            match class {
                Some(c) => io.line(format!("{text}\t{c}")),
                None => io.line(text),
            }
        }
    }
    if io.json {
        let mut doc = json!({ "bound": bound.to_string(), "total": sols.len().to_string(), "solutions": rows });
        if with_classes {
            doc["histogram"] = hist.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect();
        }
        io.emit_json(&doc);
    } else {
        for (k, v) in &hist {
            io.line(format!("# {k}: {v}"));
        }
        io.line(format!("# total: {}", sols.len()));
    }
    Ok(EXIT_OK)
}

fn default_budget() -> usize {
    std::env::var("SLK_MAX_NODES").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_NODES)
}

fn cmd_orbit(io: &mut Io, input: &str, target: &str, budget: Option<usize>, max_entry: i64) -> CmdResult {
    let (a, b) = (io.gram(input)?, io.gram(target)?);
    let budget = budget.unwrap_or_else(default_budget);
    match orbit_bfs(&a, &b, max_entry, budget)? {
        OrbitSearch::Found(w) => {
            if io.json {
                io.emit_json(&json!({ "found": true, "word": w.to_string(), "length": w.len().to_string() }));
            } else {
                io.line(w.to_string());
            }
            Ok(EXIT_OK)
        }
        OrbitSearch::NotFound { explored } => {
            if io.json {
                io.emit_json(&json!({ "found": false, "explored": explored.to_string() }));
            } else {
                io.line(format!("not found after {explored} states"));
            }
            Ok(EXIT_BUDGET)
        }
    }
}

fn cmd_blowup(io: &mut Io, input: &str, z: &str) -> CmdResult {
    let m = io.matrix(input)?;
    let fl = FilteredLattice::canonical(SerreLattice::new(m)?)?;
    let z = parse_element(z)?;
    let up = blowup(&fl, &z)?;
    let delta = up.degree()?;
    if io.json {
        io.emit_json(&json!({ "gram": matrix_json(up.lattice.gram()), "delta": delta.to_string() }));
    } else {
        io.line(render_matrix_text(up.lattice.gram()));
        io.line(format!("delta: {delta}"));
    }
    Ok(EXIT_OK)
}

fn cmd_blowdown(io: &mut Io, input: &str, f: &str) -> CmdResult {
    let m = io.matrix(input)?;
    let fl = FilteredLattice::canonical(SerreLattice::new(m)?)?;
    let f = parse_element(f)?;
    let down = blowdown(&fl, &f)?;
    let gram = down.lattice.lattice.gram();
    if io.json {
        io.emit_json(&json!({
            "gram": matrix_json(gram),
            "z": element_json(&down.z),
            "basis": down.basis.iter().map(element_json).collect::<Vec<_>>(),
        }));
    } else {
        io.line(render_matrix_text(gram));
        io.line(format!("z: {}", down.z));
        let basis: Vec<String> = down.basis.iter().map(ToString::to_string).collect();
        io.line(format!("basis: {}", basis.join(" ")));
    }
    Ok(EXIT_OK)
}

fn cmd_markov(io: &mut Io, a: &str, b: &str, c: &str) -> CmdResult {
    let t = Rank3Coeffs { a: parse_integer(a)?, b: parse_integer(b)?, c: parse_integer(c)? };
    let (canon, w) = markov_reduce(&t)?;
    let class = if canon.is_zero() { "Trivial" } else { "P2" };
    if io.json {
        io.emit_json(&json!({
            "class": class,
            "canonical": [canon.a.to_string(), canon.b.to_string(), canon.c.to_string()],
            "witness": w.to_string(),
        }));
    } else {
        io.line(format!("{class} {canon}"));
        io.line(format!("witness: {w}"));
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, io: &mut Io) -> CmdResult {
    match &cli.command {
        Command::Check { input } => cmd_check(io, input),
        Command::Mutate { input, word, display_order } => cmd_mutate(io, input, word, *display_order),
        Command::Classify { input } => cmd_classify(io, input),
        Command::Enumerate { bound, classify } => cmd_enumerate(io, *bound, *classify),
        Command::Orbit { input, target, budget, max_entry } => cmd_orbit(io, input, target, *budget, *max_entry),
        Command::Blowup { input, z } => cmd_blowup(io, input, z),
        Command::Blowdown { input, f } => cmd_blowdown(io, input, f),
        Command::Markov { a, b, c } => cmd_markov(io, a, b, c),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut io = Io { stdin, out, json: cli.json };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
