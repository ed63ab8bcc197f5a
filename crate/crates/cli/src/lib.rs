//! Command-line front end for the hyperfocused arc toolkit.
//!
//! Every subcommand produces a [`report::RunReport`]. Exit status is 0 when
//! no verdict failed, 1 when one did, and 2 for usage or input errors.

pub mod io;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperfocus_core::arcs::{
    build_complete_translation_arc, check_hyperoval_containment, check_subplane_bound, example_n1,
    example_n2, example_n3, example_n3_candidates, extend_double, gf2_basis, hyperfocused_lines,
    splits_across_conics, uncovered_affine, Arc, ArcError, DoubledConic, HyperovalVerdict, SubplaneVerdict,
};
use hyperfocus_core::blocking::{
    example_otto, ghf_construct, is_fano_subplane, min_blocking_sets, octagon_parameters,
    projective_canonical_form, triangle_collinearity, unit_square_group, BlockingError, BlockingSet,
};
use hyperfocus_core::gf2::{FieldElement, FieldSpec};
use hyperfocus_core::onefact::{
    classify_ghf, closure, closure_report, embed_search, enumerate_factorizations, OneFactError,
};
use hyperfocus_core::projplane::{Plane, ProjLine, ProjPoint};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::io::{
    arc_json, blocking_json, field_json, hex, line_json, load_arc, load_catalog, load_points, parse_hex,
    point_json, projectivity_json, IoError,
};
use crate::report::{RunReport, Table, Verdict};

#[derive(Debug, Parser)]
#[command(name = "hyperfocus", version, about = "Hyperfocused arcs and 1-factorizations in PG(2, 2^r)")]
pub struct Cli {
    /// Write the report here instead of stdout (`onefact enumerate`: the catalog).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; changes running time only.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Reserved; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a field description.
    Field(FieldArgs),
    /// Build, complete and verify translation arcs.
    #[command(subcommand)]
    Arc(ArcCommand),
    /// Minimum blocking sets of the secants of an arc.
    #[command(subcommand)]
    Blocking(BlockingCommand),
    /// Generalized hyperfocused 8-arc with a Fano blocking set.
    #[command(subcommand)]
    Ghf(GhfCommand),
    /// 1-factorizations: enumeration, closure and embeddings.
    #[command(subcommand)]
    Onefact(OnefactCommand),
    /// Classify arcs with non-linear minimum blocking sets, k <= max-k.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub r: u32,
    /// Reduction polynomial in hex, leading bit included.
    #[arg(long)]
    pub poly: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    N1,
    N2,
    N3,
}

#[derive(Debug, Subcommand)]
pub enum ArcCommand {
    /// Build one of the translation arc examples.
    Build {
        #[arg(long, value_enum)]
        example: Example,
        #[command(flatten)]
        field: FieldArgs,
        /// H = GF(2^s) for n1 and n2 (default: the whole field).
        #[arg(long)]
        s: Option<u32>,
        /// Frobenius exponent for n2.
        #[arg(long)]
        i: Option<u32>,
        /// Doubling parameters for n3 (default: first valid pair).
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
    /// Complete a conic over GF(2^s) to an affinely complete translation arc.
    Complete {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
    },
    /// Check an arc file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum BlockingCommand {
    /// Minimum blocking sets of the secants of an arc.
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report every set rather than the first.
        #[arg(long)]
        all: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum GhfCommand {
    /// The 8-arc with a non-linear 7-point blocking set.
    Build {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        a1: Option<String>,
        #[arg(long)]
        a2: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OnefactCommand {
    /// 1-factorizations of K_2n up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Triple closure of every factorization in a catalog.
    Closure {
        #[arg(long)]
        catalog: PathBuf,
        /// Same as --format.
        #[arg(long, value_enum)]
        report: Option<Format>,
    },
    /// Embeddings of every factorization in a catalog.
    Embed {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = 10)]
    pub max_k: usize,
    /// Stop each embedding search after this many embeddings.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Everything a command contributes to its report.
#[derive(Default)]
struct Outcome {
    field: Option<FieldSpec>,
    inputs: Value,
    verdicts: BTreeMap<String, Verdict>,
    witnesses: BTreeMap<String, Value>,
    result: Value,
    table: Option<Table>,
    /// Catalog text destined for `--out`.
    catalog: Option<String>,
}

impl Outcome {
    fn new(inputs: Value) -> Self {
        Outcome {
            inputs,
            result: Value::Null,
            ..Default::default()
        }
    }

    fn verdict(&mut self, name: &str, v: Verdict, witness: Option<Value>) {
        self.verdicts.insert(name.into(), v);
        if let Some(w) = witness {
            self.witnesses.insert(name.into(), w);
        }
    }

    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> Value) {
        let w = (!ok).then(witness);
        self.verdict(name, Verdict::from_bool(ok), w);
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists in this process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = RunReport {
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        field: outcome.field.as_ref().map(field_json),
        inputs: outcome.inputs,
        verdicts: outcome.verdicts,
        witnesses: outcome.witnesses,
        result: outcome.result,
        duration_us: start.elapsed().as_micros() as u64,
    };
    let format = match &cli.command {
        Command::Onefact(OnefactCommand::Closure { report: Some(f), .. }) => *f,
        _ => cli.format,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Csv => match &outcome.table {
            Some(t) => t.to_csv(),
            None => {
                let mut t = Table::new(&["verdict", "value"]);
                for (k, v) in &report.verdicts {
                    t.push(vec![k.clone(), serde_json::to_value(v).unwrap().as_str().unwrap().to_string()]);
                }
                t.to_csv()
            }
        },
    };
    let emitted = match (&outcome.catalog, &cli.out) {
        (Some(cat), Some(path)) => io::write_text(path, cat).map(|_| print!("{text}")),
        (None, Some(path)) => io::write_text(path, &text),
        (_, None) => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = emitted {
        eprintln!("error: {e}");
        return 2;
    }
    if report.passed() {
        0
    } else {
        1
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Field(a) => field_cmd(a),
        Command::Arc(ArcCommand::Build { example, field, s, i, eta, b }) => {
            arc_build(*example, field, *s, *i, eta.as_deref(), b.as_deref())
        }
        Command::Arc(ArcCommand::Complete { r, s }) => arc_complete(*r, *s),
        Command::Arc(ArcCommand::Verify { input }) => arc_verify(input),
        Command::Blocking(BlockingCommand::Find { input, all }) => blocking_find(input, *all),
        Command::Ghf(GhfCommand::Build { q, lambda, a1, a2 }) => {
            ghf_build(*q, lambda.as_deref(), a1.as_deref(), a2.as_deref())
        }
        Command::Onefact(OnefactCommand::Enumerate { n }) => onefact_enumerate(*n),
        Command::Onefact(OnefactCommand::Closure { catalog, .. }) => onefact_closure(catalog),
        Command::Onefact(OnefactCommand::Embed { catalog, q, limit }) => onefact_embed(catalog, *q, *limit),
        Command::Classify(a) => classify(a),
    }
    .map(|mut o| {
        if let Value::Object(m) = &mut o.inputs {
            m.insert("seed".into(), json!(cli.seed));
        }
        o
    })
}

fn spec_from(r: u32, poly: Option<&str>) -> Result<FieldSpec, CliError> {
    let poly = poly.map(parse_hex).transpose().map_err(usage)?;
    FieldSpec::new(r, poly).map_err(usage)
}

fn spec_for_order(q: usize) -> Result<FieldSpec, CliError> {
    if !q.is_power_of_two() || q < 2 {
        return Err(usage(format!("q = {q} is not a power of two larger than 1")));
    }
    FieldSpec::with_degree(q.trailing_zeros()).map_err(usage)
}

fn element(spec: &FieldSpec, s: &str) -> Result<FieldElement, CliError> {
    let v = parse_hex(s).map_err(usage)?;
    spec.element(v).map_err(usage)
}

fn points_json(pts: &[ProjPoint]) -> Value {
    json!(pts.iter().map(point_json).collect::<Vec<_>>())
}

fn lines_json(ls: &[ProjLine]) -> Value {
    json!(ls.iter().map(line_json).collect::<Vec<_>>())
}

fn field_cmd(a: &FieldArgs) -> Result<Outcome, CliError> {
    let spec = spec_from(a.r, a.poly.as_deref())?;
    let mut o = Outcome::new(json!({ "r": a.r, "poly": a.poly }));
    o.result = json!({ "order": spec.order(), "poly": format!("{:#x}", spec.poly()) });
    o.verdict("irreducible", Verdict::Pass, None);
    o.field = Some(spec);
    Ok(o)
}

fn arc_failure(o: &mut Outcome, name: &str, e: ArcError) -> Result<(), CliError> {
    match e {
        ArcError::Collinear(a, b, c) => o.verdict(name, Verdict::Fail, Some(points_json(&[a, b, c]))),
        ArcError::OnSecant(p) | ArcError::DuplicatePoint(p) => {
            o.verdict(name, Verdict::Fail, Some(points_json(&[p])))
        }
        other => return Err(usage(other)),
    }
    Ok(())
}

fn arc_build(
    example: Example,
    field: &FieldArgs,
    s: Option<u32>,
    i: Option<u32>,
    eta: Option<&str>,
    b: Option<&str>,
) -> Result<Outcome, CliError> {
    let spec = spec_from(field.r, field.poly.as_deref())?;
    let mut o = Outcome::new(json!({
        "example": format!("{example:?}").to_lowercase(),
        "r": field.r, "poly": field.poly, "s": s, "i": i, "eta": eta, "b": b,
    }));
    o.field = Some(spec);
    let h_basis = |s: u32| -> Result<Vec<FieldElement>, CliError> {
        let sub = spec.subfield(s).map_err(usage)?;
        Ok(gf2_basis(&spec, &sub))
    };
    let mut extra = serde_json::Map::new();
    let built = match example {
        Example::N1 => example_n1(spec, &h_basis(s.unwrap_or(field.r))?),
        Example::N2 => {
            let i = i.ok_or_else(|| usage("--i is required for n2"))?;
            example_n2(spec, &h_basis(s.unwrap_or(field.r))?, i)
        }
        Example::N3 => {
            let d: Result<DoubledConic, ArcError> = match (eta, b) {
                (Some(e), Some(b)) => example_n3(spec, element(&spec, e)?, element(&spec, b)?),
                (None, None) => {
                    let all = example_n3_candidates(spec).map_err(usage)?;
                    extra.insert("candidates".into(), json!(all.len()));
                    extra.insert(
                        "candidate_pairs".into(),
                        json!(all.iter().map(|d| [hex(d.eta), hex(d.b)]).collect::<Vec<_>>()),
                    );
                    match all.into_iter().next() {
                        Some(d) => Ok(d),
                        None => {
                            o.verdict("doubled_arc", Verdict::Fail, Some(json!("no (eta, b) passes the doubling test")));
                            o.result = Value::Object(extra);
                            return Ok(o);
                        }
                    }
                }
                _ => return Err(usage("--eta and --b go together")),
            };
            match d {
                Ok(d) => {
                    extra.insert("eta".into(), json!(hex(d.eta)));
                    extra.insert("b".into(), json!(hex(d.b)));
                    let split = splits_across_conics(&d);
                    o.check("two_conics", split, || json!("points do not split evenly across the two conics"));
                    o.verdict("doubled_arc", Verdict::Pass, None);
                    Ok(d.arc)
                }
                Err(e) => Err(e),
            }
        }
    };
    let arc = match built {
        Ok(a) => a,
        Err(e) => {
            arc_failure(&mut o, "arc", e)?;
            o.result = Value::Object(extra);
            return Ok(o);
        }
    };
    o.verdict("arc", Verdict::Pass, None);
    let lines = hyperfocused_lines(&arc);
    o.check("hyperfocused_at_infinity", lines.contains(&ProjLine::INFINITY), || {
        lines_json(&lines)
    });
    if example == Example::N2 && s.unwrap_or(field.r) == field.r {
        match check_hyperoval_containment(&arc) {
            Ok(HyperovalVerdict::Contained(h)) => {
                extra.insert("hyperoval".into(), points_json(h.points()));
                o.verdict("in_hyperoval", Verdict::Pass, None);
            }
            Ok(HyperovalVerdict::NotContained) => o.verdict("in_hyperoval", Verdict::Fail, None),
            Err(_) => o.verdict("in_hyperoval", Verdict::Inconclusive, None),
        }
    }
    extra.insert("size".into(), json!(arc.len()));
    extra.insert("arc".into(), serde_json::to_value(arc_json(&arc)).unwrap());
    extra.insert("hyperfocused_lines".into(), lines_json(&lines));
    o.result = Value::Object(extra);
    Ok(o)
}

fn arc_complete(r: u32, s: u32) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({ "r": r, "s": s }));
    let cert = build_complete_translation_arc(r, s).map_err(usage)?;
    o.field = Some(*cert.arc.plane().field());
    // Replay the doubling steps.
    let mut g = cert.base.clone();
    let mut replay = Ok(());
    for &a in &cert.extensions {
        match extend_double(&g, a) {
            Ok(next) => g = next,
            Err(e) => {
                replay = Err(e.to_string());
                break;
            }
        }
    }
    o.check("extensions_valid", replay.is_ok(), || json!(replay.clone().unwrap_err()));
    let uncovered = uncovered_affine(&cert.arc);
    o.check("affinely_complete", uncovered.is_empty(), || points_json(&uncovered[..1]));
    match &cert.hyperoval {
        Some(HyperovalVerdict::NotContained) => o.verdict("hyperoval_not_contained", Verdict::Pass, None),
        Some(HyperovalVerdict::Contained(h)) => {
            o.verdict("hyperoval_not_contained", Verdict::Fail, Some(points_json(h.points())))
        }
        None => o.verdict("hyperoval_not_contained", Verdict::Inconclusive, None),
    }
    o.verdict(
        "subplane_not_contained",
        match cert.subplane {
            SubplaneVerdict::NotContained => Verdict::Pass,
            SubplaneVerdict::Inconclusive => Verdict::Inconclusive,
        },
        None,
    );
    let bound = (r / s) as usize;
    o.check("superarc_bound", cert.superarcs.len() <= bound, || json!(cert.superarcs.len()));
    o.result = json!({
        "base_size": cert.base.len(),
        "superarcs": cert.superarcs.len(),
        "extensions": cert.extensions.iter().map(|&(a, b)| [hex(a), hex(b)]).collect::<Vec<_>>(),
        "size": cert.arc.len(),
        "arc": arc_json(&cert.arc),
    });
    Ok(o)
}

fn arc_verify(input: &PathBuf) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({ "in": input }));
    let (spec, points) = load_points(input)?;
    o.field = Some(spec);
    let arc = match Arc::new(Plane::new(spec), points) {
        Ok(a) => a,
        Err(e) => {
            arc_failure(&mut o, "arc", e)?;
            return Ok(o);
        }
    };
    o.verdict("arc", Verdict::Pass, None);
    let lines = if arc.len() >= 3 { hyperfocused_lines(&arc) } else { Vec::new() };
    let uncovered = uncovered_affine(&arc);
    let hyperoval = match check_hyperoval_containment(&arc) {
        Ok(HyperovalVerdict::Contained(_)) => "contained",
        Ok(HyperovalVerdict::NotContained) => "not_contained",
        Err(_) => "not_affinely_complete",
    };
    let subplane = match check_subplane_bound(&arc) {
        SubplaneVerdict::NotContained => "not_contained",
        SubplaneVerdict::Inconclusive => "inconclusive",
    };
    o.result = json!({
        "size": arc.len(),
        "hyperfocused_lines": lines_json(&lines),
        "uncovered_affine": uncovered.len(),
        "hyperoval": hyperoval,
        "subplane": subplane,
    });
    Ok(o)
}

/// Checks shared by every minimum blocking set report.
fn check_blocking_sets(o: &mut Outcome, sets: &[BlockingSet]) {
    let mut triangle_witness = None;
    for (i, b) in sets.iter().enumerate() {
        match triangle_collinearity(b) {
            Ok(t) if t.holds() => {}
            Ok(t) => {
                triangle_witness.get_or_insert(json!({ "set": i, "triple": t.violation }));
            }
            Err(e) => {
                triangle_witness.get_or_insert(json!({ "set": i, "error": e.to_string() }));
            }
        }
    }
    o.check("triangle_collinearity", triangle_witness.is_none(), || triangle_witness.unwrap());
}

fn blocking_find(input: &PathBuf, all: bool) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({ "in": input, "all": all }));
    let arc = load_arc(input)?;
    o.field = Some(*arc.plane().field());
    let sets = min_blocking_sets(&arc);
    check_blocking_sets(&mut o, &sets);
    let shown: Vec<_> = sets.iter().take(if all { sets.len() } else { 1 }).map(blocking_json).collect();
    let mut t = Table::new(&["index", "linear", "points"]);
    for (i, b) in shown.iter().enumerate() {
        let pts: Vec<String> = b.points.iter().map(|p| format!("({})", p.join(":"))).collect();
        t.push(vec![i.to_string(), b.linear.to_string(), pts.join(" ")]);
    }
    o.table = Some(t);
    o.result = json!({
        "k": arc.len(),
        "count": sets.len(),
        "linear": sets.iter().filter(|b| b.is_linear()).count(),
        "sets": shown,
    });
    Ok(o)
}

fn ghf_build(q: usize, lambda: Option<&str>, a1: Option<&str>, a2: Option<&str>) -> Result<Outcome, CliError> {
    let spec = spec_for_order(q)?;
    let mut o = Outcome::new(json!({ "q": q, "lambda": lambda, "a1": a1, "a2": a2 }));
    o.field = Some(spec);
    let scanned = octagon_parameters(&spec);
    let params = match (lambda, a1, a2) {
        (Some(l), Some(x), Some(y)) => (element(&spec, l)?, element(&spec, x)?, element(&spec, y)?),
        (None, None, None) => match scanned.first() {
            Some(&p) => p,
            None => {
                o.verdict(
                    "parameters",
                    Verdict::Fail,
                    Some(json!(format!(
                        "no (lambda, a1, a2) in GF({q}) has {{a1, a2, a1+a2}} disjoint from {{0, 1, lambda, lambda+1}}"
                    ))),
                );
                o.result = json!({ "valid_parameters": 0 });
                return Ok(o);
            }
        },
        _ => return Err(usage("--lambda, --a1 and --a2 go together")),
    };
    let (l, x, y) = params;
    let (arc, b) = match example_otto(spec, l, x, y) {
        Ok(pair) => pair,
        Err(e @ (BlockingError::BadParameters(_) | BlockingError::Arc(_) | BlockingError::CenterOnArc(_))) => {
            o.verdict("parameters", Verdict::Fail, Some(json!(e.to_string())));
            o.result = json!({ "valid_parameters": scanned.len() });
            return Ok(o);
        }
        Err(e) => return Err(usage(e)),
    };
    o.verdict("parameters", Verdict::Pass, None);
    let plane = Plane::new(spec);
    let per_secant = hyperfocus_core::arcs::secants(&arc)
        .lines()
        .iter()
        .all(|s| b.points().iter().filter(|p| plane.incident(p, s)).count() == 1);
    o.check("one_blocker_per_secant", per_secant, || Value::Null);
    o.check("non_linear", !b.is_linear(), || points_json(b.points()));
    o.check("fano_subplane", is_fano_subplane(&plane, b.points()), || points_json(b.points()));
    check_blocking_sets(&mut o, std::slice::from_ref(&b));
    let phi = plane.homology(l, x, y).map_err(usage)?;
    let same = ghf_construct(&unit_square_group(spec), &phi).is_ok_and(|g| g == (arc.clone(), b.clone()));
    o.check("matches_general_construction", same, || Value::Null);
    o.result = json!({
        "lambda": hex(l), "a1": hex(x), "a2": hex(y),
        "valid_parameters": scanned.len(),
        "homology": projectivity_json(&phi),
        "arc": arc_json(&arc),
        "blocking_set": blocking_json(&b),
    });
    Ok(o)
}

/// Class counts for K_2n, n = 2..=5.
const KNOWN_COUNTS: [(usize, usize); 4] = [(2, 1), (3, 1), (4, 6), (5, 396)];

fn onefact_enumerate(n: usize) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({ "n": n }));
    let classes = enumerate_factorizations(n).map_err(|e: OneFactError| usage(e))?;
    match KNOWN_COUNTS.iter().find(|(m, _)| *m == n) {
        Some(&(_, want)) => o.check("count", classes.len() == want, || json!({ "expected": want })),
        None => o.verdict("count", Verdict::Inconclusive, None),
    }
    let lines: Vec<String> = classes.iter().map(|f| f.to_catalog_line()).collect();
    let mut t = Table::new(&["index", "factorization"]);
    for (i, l) in lines.iter().enumerate() {
        t.push(vec![i.to_string(), l.clone()]);
    }
    o.table = Some(t);
    o.catalog = Some(hyperfocus_core::onefact::format_catalog(&classes));
    o.result = json!({ "n": n, "order": 2 * n, "classes": classes.len(), "catalog": lines });
    Ok(o)
}

fn onefact_closure(catalog: &PathBuf) -> Result<Outcome, CliError> {
    let mut o = Outcome::new(json!({ "catalog": catalog }));
    let classes = load_catalog(catalog)?;
    let rep = closure_report(&classes);
    let first_failure = rep.entries.iter().find(|e| !e.contains_all).map(|e| e.index);
    o.check("contains_all", rep.all_pass(), || {
        let i = first_failure.unwrap();
        json!({ "index": i, "line": classes[i].to_catalog_line() })
    });
    let mut t = Table::new(&["index", "contains_all", "depth"]);
    for e in &rep.entries {
        t.push(vec![e.index.to_string(), e.contains_all.to_string(), e.depth.to_string()]);
    }
    o.table = Some(t);
    o.result = json!({
        "classes": classes.len(),
        "failures": rep.failures,
        "max_depth": rep.max_depth,
        "entries": rep.entries.iter().map(|e| json!({
            "index": e.index, "contains_all": e.contains_all, "depth": e.depth,
        })).collect::<Vec<_>>(),
    });
    Ok(o)
}

fn onefact_embed(catalog: &PathBuf, q: usize, limit: Option<usize>) -> Result<Outcome, CliError> {
    let spec = spec_for_order(q)?;
    let plane = Plane::new(spec);
    let mut o = Outcome::new(json!({ "catalog": catalog, "q": q, "limit": limit }));
    o.field = Some(spec);
    let classes = load_catalog(catalog)?;
    let rows: Vec<(usize, usize, bool, bool, bool)> = classes
        .par_iter()
        .map(|f| {
            let found = embed_search(f, spec, limit);
            let linear = found.iter().filter(|e| e.is_linear(&plane)).count();
            let valid = found.iter().all(|e| e.is_valid(&plane, f));
            let sound = !closure(f).contains_all || linear == found.len();
            (found.len(), linear, valid, sound, limit.is_some_and(|l| found.len() >= l))
        })
        .collect();
    let bad_valid = rows.iter().position(|r| !r.2);
    let bad_sound = rows.iter().position(|r| !r.3);
    o.check("embeddings_valid", bad_valid.is_none(), || json!({ "index": bad_valid }));
    o.check("closure_sound", bad_sound.is_none(), || json!({ "index": bad_sound }));
    let mut t = Table::new(&["index", "embeddings", "linear", "nonlinear", "budget_hit"]);
    let mut entries = Vec::new();
    for (i, &(n, lin, _, _, hit)) in rows.iter().enumerate() {
        t.push(vec![i.to_string(), n.to_string(), lin.to_string(), (n - lin).to_string(), hit.to_string()]);
        entries.push(json!({ "index": i, "embeddings": n, "linear": lin, "nonlinear": n - lin, "budget_hit": hit }));
    }
    o.table = Some(t);
    o.result = json!({ "classes": classes.len(), "entries": entries });
    Ok(o)
}

fn classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let spec = spec_for_order(a.q)?;
    let plane = Plane::new(spec);
    let mut o = Outcome::new(json!({ "q": a.q, "max_k": a.max_k, "budget": a.budget }));
    o.field = Some(spec);
    let rep = classify_ghf(spec, a.max_k, a.budget).map_err(usage)?;
    let ks: Vec<usize> = rep.nonlinear.iter().map(|c| c.k).collect();
    o.check("nonlinear_only_at_k8", ks.iter().all(|&k| k == 8), || json!(ks));
    o.check("single_nonlinear_class", rep.nonlinear.len() == 1, || json!({ "classes": rep.nonlinear.len() }));
    let reference = octagon_parameters(&spec).first().map(|&(l, x, y)| {
        let (arc, _) = example_otto(spec, l, x, y).expect("scanned parameters are valid");
        projective_canonical_form(&plane, arc.points())
    });
    match &reference {
        Some(r) => o.check(
            "matches_octagon",
            rep.nonlinear.len() == 1 && &rep.nonlinear[0].canonical_arc == r,
            || points_json(r),
        ),
        None => o.verdict(
            "matches_octagon",
            Verdict::Fail,
            Some(json!(format!("GF({}) has no parameters for the octagon example", a.q))),
        ),
    }
    o.verdict(
        "exhaustive",
        if rep.exhaustive { Verdict::Pass } else { Verdict::Inconclusive },
        None,
    );
    let mut t = Table::new(&["n", "index", "contains_all", "embeddings", "nonlinear", "budget_hit"]);
    for e in &rep.entries {
        t.push(vec![
            e.n.to_string(),
            e.index.to_string(),
            e.contains_all.to_string(),
            e.embeddings.map_or("-".into(), |n| n.to_string()),
            e.nonlinear_embeddings.to_string(),
            e.budget_hit.to_string(),
        ]);
    }
    o.table = Some(t);
    o.result = json!({
        "q": rep.q,
        "max_k": rep.max_k,
        "exhaustive": rep.exhaustive,
        "classes_checked": rep.entries.len(),
        "forced_linear": rep.entries.iter().filter(|e| e.contains_all).count(),
        "nonlinear": rep.nonlinear.iter().map(|c| json!({
            "k": c.k,
            "arc": points_json(&c.canonical_arc),
            "sources": c.sources.iter().map(|&(n, i)| json!({ "n": n, "index": i })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "entries": rep.entries.iter().map(|e| json!({
            "n": e.n, "index": e.index, "catalog_line": e.catalog_line,
            "contains_all": e.contains_all, "embeddings": e.embeddings,
            "nonlinear_embeddings": e.nonlinear_embeddings, "budget_hit": e.budget_hit,
        })).collect::<Vec<_>>(),
    });
    Ok(o)
}
