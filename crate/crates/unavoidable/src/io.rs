//! Text formats, certificate JSON, and the command-line interface.
//!
//! Graph files start with `graph n m` followed by `m` lines `u v` (0-based).
//! Ladder files start with `ladder nW nX r` followed by `r` lines `i j` giving
//! a rung between W position `i` and X position `j`; W gets ids `0..nW` and X
//! gets `nW..nW+nX`. Lines starting with `#` are comments in both formats.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::driver::{find_unavoidable, nobigcycle_enumerate, Enumeration};
use crate::families::{check_certificate, Certificate, FamilyTag};
use crate::graph::{Graph, Vertex};
use crate::ladder::{clean_ladder_report, Ladder};
use crate::oracle::{brute_force_find, random_family_member, random_messy_ladder, random_two_connected, OracleFamily, OracleQuery, MAX_LIMIT};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("certificate JSON: {0}")]
    Json(String),
}

fn perr(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str, count: usize) -> Result<Vec<usize>, ParseError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != count {
        return Err(perr(line, format!("expected {count} fields, found {}", parts.len())));
    }
    parts.iter().map(|p| p.parse::<usize>().map_err(|_| perr(line, format!("not a non-negative integer: {p}")))).collect()
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let rest = header.strip_prefix("graph").filter(|r| r.starts_with(char::is_whitespace)).ok_or_else(|| perr(hl, "header must be `graph n m`"))?;
    let hm = numbers(hl, rest, 2)?;
    let (n, m) = (hm[0], hm[1]);
    let mut seen = BTreeSet::new();
    let mut warnings = Vec::new();
    for (ln, l) in lines {
        let uv = numbers(ln, l, 2)?;
        let (u, v) = (uv[0], uv[1]);
        if u >= n || v >= n {
            return Err(perr(ln, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(perr(ln, format!("loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            warnings.push(format!("line {ln}: duplicate edge {u} {v} ignored"));
        }
    }
    if seen.len() != m {
        return Err(perr(hl, format!("header declares {m} edges, found {}", seen.len())));
    }
    let edges: Vec<(Vertex, Vertex)> = seen.into_iter().collect();
    let graph = Graph::from_edge_list(n, &edges).map_err(|e| perr(hl, e.to_string()))?;
    Ok(ParsedGraph { graph, warnings })
}

pub fn emit_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("graph {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

pub fn parse_ladder(text: &str) -> Result<Ladder, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
    let rest = header.strip_prefix("ladder").filter(|r| r.starts_with(char::is_whitespace)).ok_or_else(|| perr(hl, "header must be `ladder nW nX r`"))?;
    let h = numbers(hl, rest, 3)?;
    let mut rungs = Vec::new();
    for (ln, l) in lines {
        let ij = numbers(ln, l, 2)?;
        if ij[0] >= h[0] || ij[1] >= h[1] {
            return Err(perr(ln, "rung position outside the rails"));
        }
        rungs.push((ij[0], ij[1]));
    }
    if rungs.len() != h[2] {
        return Err(perr(hl, format!("header declares {} rungs, found {}", h[2], rungs.len())));
    }
    Ladder::from_positions(h[0], h[1], &rungs).map_err(|e| perr(hl, e.to_string()))
}

pub fn emit_ladder(l: &Ladder) -> String {
    let mut pos = l.rung_positions();
    pos.sort_unstable();
    let mut s = format!("ladder {} {} {}\n", l.rail_w().len(), l.rail_x().len(), pos.len());
    for (i, j) in pos {
        s.push_str(&format!("{i} {j}\n"));
    }
    s
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "certificate": cert })).expect("certificates serialize")
}

/// Accepts the versioned wrapper or a bare certificate object.
pub fn certificate_from_json(text: &str) -> Result<Certificate, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let inner = match v.get("certificate") {
        Some(c) => {
            match v.get("schema").and_then(Value::as_u64) {
                Some(s) if s == u64::from(SCHEMA) => {}
                other => return Err(ParseError::Json(format!("unsupported schema {other:?}"))),
            }
            c.clone()
        }
        None => v,
    };
    serde_json::from_value(inner).map_err(|e| ParseError::Json(e.to_string()))
}

#[derive(Parser, Debug)]
#[command(name = "unavoidable", version, about = "Find and certify unavoidable induced subgraphs of 2-connected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a family member and its certificate.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix; writes PREFIX.graph and PREFIX.cert.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Search for a clique, theta or lambda of order r.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        scale: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a certificate against a graph.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Resolve crosses of a messy ladder.
    CleanLadder {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertex ordering with 2-connected prefixes, or a long induced cycle.
    EnumOrder {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Exhaustive search for one family (graphs up to 14 vertices).
    Oracle {
        #[arg(long)]
        input: PathBuf,
        /// A family name, or `cycle` for an induced cycle of at least the order.
        #[arg(long)]
        family: String,
        #[arg(long)]
        order: usize,
    },
    /// Time a built-in workload.
    Bench {
        #[arg(long)]
        suite: String,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ABSENT: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path, err: &mut dyn Write) -> Result<Graph, Failure> {
    let parsed = parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed.graph)
}

fn family(name: &str) -> Result<FamilyTag, Failure> {
    FamilyTag::parse(name).ok_or_else(|| {
        let names: Vec<&str> = FamilyTag::ALL.iter().map(|t| t.name()).collect();
        usage(format!("unknown family `{name}`; expected one of {}", names.join(", ")))
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| usage(e.to_string());
    match cmd {
        Command::Gen { family: name, order, seed, out: prefix } => {
            let tag = family(&name)?;
            let (g, cert) = random_family_member(tag, order, seed).map_err(|e| usage(e.to_string()))?;
            let gp = prefix.with_extension("graph");
            let cp = prefix.with_extension("cert.json");
            write_file(&gp, &emit_graph(&g))?;
            write_file(&cp, &certificate_to_json(&cert))?;
            let v = json!({ "schema": SCHEMA, "graph": gp, "certificate": cp, "n": g.n(), "order": cert.order });
            writeln!(out, "{}", pretty(&v)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Find { input, r, scale, json: path } => {
            let g = load_graph(&input, err)?;
            let report = find_unavoidable(&g, r, scale.unwrap_or(r)).map_err(|e| usage(e.to_string()))?;
            let text = pretty(&json!({ "schema": SCHEMA, "report": report }));
            match path {
                Some(p) => write_file(&p, &text)?,
                None => writeln!(out, "{text}").map_err(io)?,
            }
            Ok(if report.reduced.is_some() { EXIT_OK } else { EXIT_ABSENT })
        }
        Command::Certify { input, cert } => {
            let g = load_graph(&input, err)?;
            let c = match certificate_from_json(&read(&cert)?) {
                Ok(c) => c,
                Err(e) => {
                    let _ = writeln!(err, "invalid: {e}");
                    return Ok(EXIT_INVALID);
                }
            };
            match check_certificate(&g, &c) {
                Ok(()) => {
                    writeln!(out, "{}", pretty(&json!({ "schema": SCHEMA, "valid": true, "tag": c.tag, "order": c.order })))
                        .map_err(io)?;
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    let _ = writeln!(err, "invalid: clause ({}) {v}", v.clause());
                    Ok(EXIT_INVALID)
                }
            }
        }
        Command::CleanLadder { input, out: path } => {
            let l = parse_ladder(&read(&input)?).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let rep = clean_ladder_report(&l).map_err(|e| usage(e.to_string()))?;
            let stats = json!({
                "schema": SCHEMA,
                "crosses_resolved": rep.crosses_resolved,
                "vertices_deleted": rep.deleted.len(),
                "rounds": rep.rounds,
            });
            match path {
                Some(p) => {
                    write_file(&p, &emit_ladder(&rep.ladder))?;
                    writeln!(out, "{}", pretty(&stats)).map_err(io)?;
                }
                None => {
                    writeln!(out, "# crosses resolved: {}", rep.crosses_resolved).map_err(io)?;
                    writeln!(out, "# vertices deleted: {}", rep.deleted.len()).map_err(io)?;
                    write!(out, "{}", emit_ladder(&rep.ladder)).map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::EnumOrder { input, c } => {
            let g = load_graph(&input, err)?;
            let e = nobigcycle_enumerate(&g, c).map_err(|e| usage(e.to_string()))?;
            let code = if matches!(e, Enumeration::Ordering { .. }) { EXIT_OK } else { EXIT_ABSENT };
            let witness = e.lambda_witness();
            writeln!(out, "{}", pretty(&json!({ "schema": SCHEMA, "result": e, "lambda": witness }))).map_err(io)?;
            Ok(code)
        }
        Command::Oracle { input, family: name, order } => {
            let g = load_graph(&input, err)?;
            if g.n() > MAX_LIMIT {
                return Err(usage(format!("oracle is limited to {MAX_LIMIT} vertices, input has {}", g.n())));
            }
            let fam = if name.eq_ignore_ascii_case("cycle") {
                OracleFamily::InducedCycleAtLeast(order)
            } else {
                OracleFamily::Family(family(&name)?)
            };
            let q = OracleQuery::new(fam, order, MAX_LIMIT).map_err(|e| usage(e.to_string()))?;
            let found = brute_force_find(&g, &q).map_err(|e| usage(e.to_string()))?;
            let code = if found.is_some() { EXIT_OK } else { EXIT_ABSENT };
            writeln!(out, "{}", pretty(&json!({ "schema": SCHEMA, "certificate": found }))).map_err(io)?;
            Ok(code)
        }
        Command::Bench { suite } => {
            let rows = bench(&suite)?;
            writeln!(out, "{:<28} {:>8} {:>12}", "case", "runs", "ms").map_err(io)?;
            for (name, runs, ms) in rows {
                writeln!(out, "{name:<28} {runs:>8} {ms:>12.2}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn timed(name: &str, runs: usize, mut f: impl FnMut(usize)) -> (String, usize, f64) {
    let t = Instant::now();
    for i in 0..runs {
        f(i);
    }
    (name.to_string(), runs, t.elapsed().as_secs_f64() * 1e3)
}

fn bench(suite: &str) -> Result<Vec<(String, usize, f64)>, Failure> {
    match suite {
        "families" => Ok(FamilyTag::ALL
            .iter()
            .map(|&tag| {
                timed(tag.name(), 200, |i| {
                    let (g, c) = random_family_member(tag, 6, i as u64).expect("valid spec");
                    assert!(crate::families::verify_certificate(&g, &c));
                })
            })
            .collect()),
        "ladder" => Ok(vec![
            timed("clean 60-rail ladders", 50, |i| {
                let l = random_messy_ladder(60, 0.05, i as u64);
                clean_ladder_report(&l).expect("valid ladder");
            }),
            timed("clean 300-rail ladders", 5, |i| {
                let l = random_messy_ladder(300, 0.01, i as u64);
                clean_ladder_report(&l).expect("valid ladder");
            }),
        ]),
        "driver" => Ok([30usize, 100, 200]
            .iter()
            .map(|&n| {
                timed(&format!("find r=3 n={n}"), 20, |i| {
                    let g = random_two_connected(n, i as u64, n / 10);
                    find_unavoidable(&g, 3, 3).expect("2-connected input");
                })
            })
            .collect()),
        other => Err(usage(format!("unknown suite `{other}`; expected families, ladder or driver"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn graph_examples() {
        let p = parse_graph("graph 3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(p.graph, named::cycle(3));
        assert!(p.warnings.is_empty());
        let p = parse_graph("# one edge\ngraph 2 1\n0 1\n0 1").unwrap();
        assert_eq!(p.graph.edge_count(), 1);
        assert_eq!(p.warnings.len(), 1);
        assert!(matches!(parse_graph("graph 2 1\n0 2"), Err(ParseError::Line { line: 2, .. })));
        assert!(matches!(parse_graph("grph 2 1\n0 1"), Err(ParseError::Line { line: 1, .. })));
        assert!(parse_graph("graph 3 2\n0 1").is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = named::petersen();
        assert_eq!(parse_graph(&emit_graph(&g)).unwrap().graph, g);
    }

    #[test]
    fn ladder_round_trip() {
        let l = Ladder::from_positions(4, 3, &[(0, 0), (2, 1), (3, 2)]).unwrap();
        let text = emit_ladder(&l);
        assert_eq!(text, "ladder 4 3 3\n0 0\n2 1\n3 2\n");
        assert_eq!(emit_ladder(&parse_ladder(&text).unwrap()), text);
        assert!(parse_ladder("ladder 2 2 1\n0 5").is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let (_, c) = random_family_member(FamilyTag::Theta, 4, 7).unwrap();
        let text = certificate_to_json(&c);
        let back = certificate_from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(certificate_to_json(&back), text);
        assert!(text.contains("\"schema\": 1"));
        assert!(certificate_from_json("{\"schema\": 2, \"certificate\": {}}").is_err());
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_cli(["unavoidable", "find", "--bogus"], &mut out, &mut err), EXIT_USAGE);
        assert!(!err.is_empty());
        assert_eq!(run_cli(["unavoidable", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
    }
}
