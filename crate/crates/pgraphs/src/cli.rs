//! Command dispatch and deterministic report emission.
//!
//! Exit codes: 0 on pass, 1 on fail (with witnesses) or inconclusive, 2 on
//! usage or parse errors. `--json` emits a machine-readable report with
//! schema version 1; text output is byte-deterministic.

use crate::cones::{Cone, Element};
use crate::filters::ultrafilters;
use crate::parse::{builtin_fixture, parse_cone_spec, parse_graph_file, parse_hom_spec};
use crate::pgraph::Graph;
use crate::reductions::{
    catalog_hom, catalog_names, check_hereditary, check_reduction, CheckMode, Hom,
};
use crate::rep::{
    build_rep, check_relators, grading_check, is_faithful, is_tight, is_tight_with_mode, span_dim,
    Rep, RepKind, SpanMode, TightMode,
};
use crate::report::{Report, Status};
use crate::semilattice::{is_e_tight, ETightMode};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

const USAGE: &str = "\
usage: pgraphs <command> [args]

commands:
  validate FILE                       check the graph laws
  ultrafilters FILE                   list all ultrafilters
  rep FILE --kind K [--json]          print the representation matrices
  relators FILE --kind K              verify T1-T4 exactly
  tight FILE --kind K [--all-subsets] bolt-tightness check
  etight FILE --kind K [--full]       semilattice tightness check
  span FILE --kind K [--balanced]     dimension of the generated algebra
  grading FILE --kind K               graded-basis check (gauge coaction)
  reduce --hom SPEC --depth N [--strong|--criteria]
                                      bounded-depth reduction check
  hereditary --cone SPEC --sub S --depth N
                                      hereditary-subset check (S: identity,
                                      diag, axis<i>)
  demo m5                             the five-ultrafilter worked example

K is `ultrafilter` or `leftregular`. SPEC is a hom file path or a built-in
name. All commands accept --json. Exit codes: 0 pass, 1 fail or
inconclusive, 2 usage/parse error.
";

#[derive(Serialize)]
struct JsonOut<'a> {
    schema: u32,
    command: &'a str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<u64>,
    witnesses: &'a [String],
    stats: &'a BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    items: Option<&'a [String]>,
}

struct Output {
    command: String,
    report: Report,
    items: Vec<String>,
}

impl Output {
    fn new(command: &str, report: Report) -> Output {
        Output {
            command: command.to_string(),
            report,
            items: Vec::new(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self.report.status {
            Status::Pass => 0,
            Status::Fail | Status::Inconclusive => 1,
        }
    }

    fn render(&self, json: bool) -> String {
        if json {
            let out = JsonOut {
                schema: 1,
                command: &self.command,
                status: self.report.status,
                depth: self.report.depth,
                witnesses: &self.report.witnesses,
                stats: &self.report.stats,
                items: if self.items.is_empty() {
                    None
                } else {
                    Some(&self.items)
                },
            };
            let mut s = serde_json::to_string_pretty(&out).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for item in &self.items {
                s.push_str(item);
                s.push('\n');
            }
            s.push_str(&self.report.render_text());
            s
        }
    }
}

/// Run one command; returns the exit code and the full output text.
pub fn run(args: &[String]) -> (i32, String) {
    match dispatch(args) {
        Ok((out, json)) => (out.exit_code(), out.render(json)),
        Err(UsageOr::Usage(msg)) => (2, format!("{}\n{}", msg, USAGE)),
        Err(UsageOr::Real(err)) => (2, format!("error: {}\n", err)),
    }
}

enum UsageOr {
    Usage(String),
    Real(Error),
}

impl From<Error> for UsageOr {
    fn from(e: Error) -> Self {
        UsageOr::Real(e)
    }
}

fn usage(msg: impl Into<String>) -> UsageOr {
    UsageOr::Usage(msg.into())
}

struct Parsed {
    positional: Vec<String>,
    flags: Vec<String>,
    options: BTreeMap<String, String>,
}

fn parse_args(args: &[String]) -> std::result::Result<Parsed, UsageOr> {
    let mut positional = Vec::new();
    let mut flags = Vec::new();
    let mut options = BTreeMap::new();
    let mut i = 0;
    let value_opts = ["--kind", "--hom", "--depth", "--cone", "--sub"];
    while i < args.len() {
        let a = &args[i];
        if value_opts.contains(&a.as_str()) {
            let v = args
                .get(i + 1)
                .ok_or_else(|| usage(format!("{} needs a value", a)))?;
            options.insert(a.clone(), v.clone());
            i += 2;
        } else if a.starts_with("--") {
            flags.push(a.clone());
            i += 1;
        } else {
            positional.push(a.clone());
            i += 1;
        }
    }
    for f in &flags {
        if ![
            "--json",
            "--full",
            "--balanced",
            "--strong",
            "--criteria",
            "--all-subsets",
        ]
        .contains(&f.as_str())
        {
            return Err(usage(format!("unknown flag {}", f)));
        }
    }
    Ok(Parsed {
        positional,
        flags,
        options,
    })
}

fn load_graph(path: &str) -> Result<Graph> {
    let p = Path::new(path);
    let name = p
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string();
    let text = std::fs::read_to_string(p).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {}", path, e),
    })?;
    parse_graph_file(&name, &text)
}

fn load_hom(spec: &str) -> Result<Hom> {
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("cannot read {}: {}", spec, e),
        })?;
        parse_hom_spec(&text)
    } else if catalog_names().contains(&spec) {
        catalog_hom(spec)
    } else {
        Err(Error::Parse {
            line: 0,
            msg: format!("{} is neither a file nor a catalog hom", spec),
        })
    }
}

fn parse_kind(p: &Parsed) -> std::result::Result<RepKind, UsageOr> {
    match p.options.get("--kind").map(|s| s.as_str()) {
        Some("ultrafilter") => Ok(RepKind::Ultrafilter),
        Some("leftregular") => Ok(RepKind::LeftRegular),
        Some(other) => Err(usage(format!("unknown kind {}", other))),
        None => Err(usage("--kind is required")),
    }
}

fn graph_rep(p: &Parsed) -> std::result::Result<(Graph, Rep), UsageOr> {
    let file = p
        .positional
        .get(1)
        .ok_or_else(|| usage("missing graph file"))?;
    let kind = parse_kind(p)?;
    let g = load_graph(file)?;
    let rep = build_rep(&g, kind);
    Ok((g, rep))
}

fn render_matrix_line(rep: &Rep, g: &Graph, p: crate::pgraph::PathId) -> String {
    let m = rep.matrix(p);
    if let Some((r, c)) = m.as_unit() {
        format!("t[{}] = E({},{})", g.id(p), r + 1, c + 1)
    } else if m.is_zero() {
        format!("t[{}] = 0", g.id(p))
    } else {
        // row col num/den triples, sorted
        let triples: Vec<String> = m
            .entries()
            .map(|(&(r, c), v)| format!("{} {} {}/{}", r + 1, c + 1, v.numer(), v.denom()))
            .collect();
        format!("t[{}] = [{}]", g.id(p), triples.join("; "))
    }
}

fn dispatch(args: &[String]) -> std::result::Result<(Output, bool), UsageOr> {
    let p = parse_args(args)?;
    let json = p.flags.iter().any(|f| f == "--json");
    let command = p
        .positional
        .first()
        .ok_or_else(|| usage("missing command"))?
        .as_str();
    let out = match command {
        "validate" => {
            let file = p
                .positional
                .get(1)
                .ok_or_else(|| usage("missing graph file"))?;
            let pth = Path::new(file);
            let name = pth
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("graph")
                .to_string();
            let text = std::fs::read_to_string(pth).map_err(|e| Error::Parse {
                line: 0,
                msg: format!("cannot read {}: {}", file, e),
            })?;
            // parse fully, then report validation outcome
            let report = match parse_graph_file(&name, &text) {
                Ok(g) => {
                    let mut r = Report::pass();
                    r.record("paths", g.len() as u64);
                    r.record("vertices", g.vertices().len() as u64);
                    r
                }
                Err(Error::ValidationFailed(msg)) => Report::fail(msg),
                Err(other) => return Err(other.into()),
            };
            Output::new("validate", report)
        }
        "ultrafilters" => {
            let file = p
                .positional
                .get(1)
                .ok_or_else(|| usage("missing graph file"))?;
            let g = load_graph(file)?;
            let ultras = ultrafilters(&g);
            let mut out = Output::new("ultrafilters", Report::pass());
            for u in &ultras {
                out.items
                    .push(format!("U_{} = {}", g.id(u.top(&g)), u.render(&g)));
            }
            out.report.record("ultrafilters", ultras.len() as u64);
            out
        }
        "rep" => {
            let (g, rep) = graph_rep(&p)?;
            let mut out = Output::new("rep", Report::pass());
            out.items
                .push(format!("basis: {}", rep.basis_labels().to_vec().join(" ")));
            for &path in g.paths_sorted() {
                out.items.push(render_matrix_line(&rep, &g, path));
            }
            out.report.record("dimension", rep.dim() as u64);
            out
        }
        "relators" => {
            let (_, rep) = graph_rep(&p)?;
            Output::new("relators", check_relators(&rep))
        }
        "tight" => {
            let (_, rep) = graph_rep(&p)?;
            let mode = if p.flags.iter().any(|f| f == "--all-subsets") {
                TightMode::AllSubsets
            } else {
                TightMode::Minimal
            };
            Output::new("tight", is_tight_with_mode(&rep, mode))
        }
        "etight" => {
            let (_, rep) = graph_rep(&p)?;
            let mode = if p.flags.iter().any(|f| f == "--full") {
                ETightMode::Full
            } else {
                ETightMode::Restricted
            };
            Output::new("etight", is_e_tight(&rep, mode, 2)?)
        }
        "span" => {
            let (_, rep) = graph_rep(&p)?;
            let mode = if p.flags.iter().any(|f| f == "--balanced") {
                SpanMode::Balanced
            } else {
                SpanMode::Full
            };
            let dim = span_dim(&rep, mode);
            let mut out = Output::new("span", Report::pass());
            out.items.push(format!("span dimension: {}", dim));
            out.report.record("span dimension", dim as u64);
            out
        }
        "grading" => {
            let (_, rep) = graph_rep(&p)?;
            let ok = grading_check(&rep, rep.builtin_grading())?;
            let report = if ok {
                Report::pass()
            } else {
                Report::fail("built-in grading violated")
            };
            Output::new("grading", report)
        }
        "reduce" => {
            let spec = p
                .options
                .get("--hom")
                .ok_or_else(|| usage("--hom is required"))?;
            let depth: usize = p
                .options
                .get("--depth")
                .ok_or_else(|| usage("--depth is required"))?
                .parse()
                .map_err(|_| usage("--depth must be a number"))?;
            let mode = if p.flags.iter().any(|f| f == "--strong") {
                CheckMode::Strong
            } else if p.flags.iter().any(|f| f == "--criteria") {
                CheckMode::Criteria
            } else {
                CheckMode::Reduction
            };
            let hom = load_hom(spec)?;
            Output::new("reduce", check_reduction(&hom, depth, mode)?)
        }
        "hereditary" => {
            let cone_spec = p
                .options
                .get("--cone")
                .ok_or_else(|| usage("--cone is required"))?;
            let subname = p
                .options
                .get("--sub")
                .ok_or_else(|| usage("--sub is required"))?;
            let depth: usize = p
                .options
                .get("--depth")
                .ok_or_else(|| usage("--depth is required"))?
                .parse()
                .map_err(|_| usage("--depth must be a number"))?;
            let cone = parse_cone_spec(cone_spec)?;
            let sub = subset_predicate(&cone, subname)
                .ok_or_else(|| usage(format!("unknown subset {}", subname)))?;
            Output::new("hereditary", check_hereditary(&cone, &sub, depth)?)
        }
        "demo" => match p.positional.get(1).map(|s| s.as_str()) {
            Some("m5") => demo_m5(),
            _ => return Err(usage("demo takes the argument: m5")),
        },
        other => return Err(usage(format!("unknown command {}", other))),
    };
    Ok((out, json))
}

fn subset_predicate(cone: &Cone, name: &str) -> Option<Box<dyn Fn(&Element) -> bool>> {
    let identity = cone.identity();
    match name {
        "identity" => Some(Box::new(move |e: &Element| *e == identity)),
        "diag" => Some(Box::new(|e: &Element| match e {
            Element::AbelianVec(v) => v.windows(2).all(|w| w[0] == w[1]),
            _ => false,
        })),
        _ => {
            let i: usize = name.strip_prefix("axis")?.parse().ok()?;
            Some(Box::new(move |e: &Element| match e {
                Element::AbelianVec(v) => v.iter().enumerate().all(|(j, &x)| j == i || x == 0),
                _ => false,
            }))
        }
    }
}

fn demo_m5() -> Output {
    let g = parse_graph_file("m5", builtin_fixture("m5")).expect("fixture validates");
    let mut out = Output::new("demo", Report::pass());
    let mut text = String::new();
    writeln!(
        text,
        "p-graph m5 over {}: {} paths, {} vertices",
        g.cone().spec_string(),
        g.len(),
        g.vertices().len()
    )
    .unwrap();
    let ultras = ultrafilters(&g);
    writeln!(text, "ultrafilters ({}):", ultras.len()).unwrap();
    for u in &ultras {
        writeln!(text, "  U_{} = {}", g.id(u.top(&g)), u.render(&g)).unwrap();
    }
    let rep = build_rep(&g, RepKind::Ultrafilter);
    writeln!(
        text,
        "ultrafilter representation on basis: {}",
        rep.basis_labels().to_vec().join(" ")
    )
    .unwrap();
    for u in &ultras {
        let top = u.top(&g);
        writeln!(text, "  f[{}] = {}", g.id(top), unit_name(&rep, top)).unwrap();
    }
    writeln!(text, "all paths as matrix units:").unwrap();
    for &path in g.paths_sorted() {
        writeln!(text, "  f[{}] = {}", g.id(path), unit_name(&rep, path)).unwrap();
    }
    let relators = check_relators(&rep);
    writeln!(text, "relators: {}", relators.status).unwrap();
    writeln!(text, "faithful: {}", is_faithful(&rep)).unwrap();
    let tight = is_tight(&rep);
    writeln!(text, "tight: {}", tight.status).unwrap();
    let grading = grading_check(&rep, rep.builtin_grading()).expect("grades total");
    writeln!(text, "grading: {}", if grading { "pass" } else { "fail" }).unwrap();
    let dim = span_dim(&rep, SpanMode::Full);
    writeln!(text, "span dim (full): {}", dim).unwrap();

    for line in text.lines() {
        out.items.push(line.to_string());
    }
    out.report.record("ultrafilters", ultras.len() as u64);
    out.report.record("span dimension", dim as u64);
    let ok = relators.status == Status::Pass
        && is_faithful(&rep)
        && tight.status == Status::Pass
        && grading
        && dim == 25
        && ultras.len() == 5;
    if !ok {
        out.report.add_witness("demo expectations violated");
    }
    out
}

fn unit_name(rep: &Rep, p: crate::pgraph::PathId) -> String {
    match rep.matrix(p).as_unit() {
        Some((r, c)) => format!("E({},{})", r + 1, c + 1),
        None => "not a matrix unit".to_string(),
    }
}
