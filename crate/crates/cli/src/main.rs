//! Command-line front end: knot-expression parsing, homology and invariant
//! computations, distance bounds, certificates, quotient models, and
//! metric-graph diagnostics. Every subcommand accepts `--json` and emits a
//! report with the fixed top-level fields command / inputs / provenance /
//! results / verdict (keys are always serialized in alphabetical order).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse errors.

mod parser;

use clap::{Parser, Subcommand};
use knotgraph::abelian::FiniteAbelianGroup;
use knotgraph::bounds::{best_lower_d_n, concordance_lower, quasi_isometry_constants};
use knotgraph::brieskorn::{homology, BrieskornWeights};
use knotgraph::knots::{self, InvariantInterval};
use knotgraph::metricgraph::{verify_quasi_isometry, LinkDiameter, MetricGraph};
use knotgraph::witness::{
    build_witness, certify, noncompatible_model, quotient_model, quotient_two_invariant_model,
    Family, K11Variant, QuotientInvariant,
};
use knotgraph::Rational;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "knotgraph", version, about = "Knot-graph computations and certificates")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Atlas extension file adding named knots (see README for the format).
    #[arg(long, global = true)]
    atlas: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// First homology of the Brieskorn manifold Sigma(w1, w2, w3).
    Brieskorn { w1: u64, w2: u64, w3: u64 },
    /// Concordance invariants and genus intervals of a knot expression.
    Invariants { expr: String },
    /// Homology of the degree-m cyclic branched cover.
    Cover {
        expr: String,
        #[arg(long)]
        degree: i64,
    },
    /// Certified lower bound on the distance between two knots.
    Dist {
        /// Which graph metric: h2, hn:<n>, or cc (concordance).
        #[arg(long)]
        graph: String,
        expr1: String,
        expr2: String,
        /// Cover degrees searched by the homology bound.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,9")]
        covers: Vec<i64>,
    },
    /// Build and certify a non-thin geodesic triangle witness.
    Certify {
        /// Witness family: h2, hn, or cc.
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: i64,
        /// Move index for the hn family (n >= 3).
        #[arg(long)]
        n: Option<i64>,
        /// Order-one generator for the cc family: trefoil or mirror-trefoil.
        #[arg(long, default_value = "trefoil")]
        k11: String,
    },
    /// Verified quotient metric models.
    Quotient {
        /// g4, u, gamma4, tau, shalf, g4xu, or noncompat.
        #[arg(long)]
        model: String,
        #[arg(long)]
        size: i64,
    },
    /// Four-point hyperbolicity constant of a graph file.
    Hyperbolicity { graphfile: PathBuf },
    /// Link of a vertex and its diameter.
    Link { graphfile: PathBuf, vertex: String },
    /// Check a vertex map for the quasi-isometry inequalities.
    QiCheck {
        graphfile_x: PathBuf,
        graphfile_y: PathBuf,
        /// Lines `xlabel ylabel`.
        mapfile: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long = "C")]
        c: String,
    },
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<knotgraph::Error> for Failure {
    fn from(e: knotgraph::Error) -> Failure {
        use knotgraph::Error::*;
        let code = match e {
            NotPrime(_) | InvalidWeights(..) | InvalidTorusKnot(..) | UnknownNamedKnot(_)
            | InvalidCoverDegree(_) | InvalidMoveIndex(_) | QiConstantsRange(_)
            | GraphParse { .. } | AtlasParse { .. } | WitnessParameter(_) | UnknownVertex(_) => 2,
            _ => 1,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

impl From<parser::ParseError> for Failure {
    fn from(e: parser::ParseError) -> Failure {
        Failure::usage(e.to_string())
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn rat(r: Rational) -> Value {
    Value::String(r.to_string())
}

fn parse_rational(text: &str) -> Result<Rational, Failure> {
    let bad = || Failure::usage(format!("invalid rational {text:?}: expected p or p/q"));
    match text.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            );
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            text.trim().parse::<i64>().map_err(|_| bad())?,
        )),
    }
}

fn interval_json(iv: InvariantInterval) -> Value {
    json!({ "lower": iv.lower, "upper": iv.upper, "exact": iv.exact() })
}

fn group_json(g: &FiniteAbelianGroup) -> Value {
    json!({
        "display": g.to_string(),
        "free_rank": g.free_rank(),
        "torsion_orders": g.torsion_orders().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

struct Report {
    command: &'static str,
    inputs: Value,
    results: Value,
    provenance: Value,
    verdict: String,
    text: Vec<String>,
    exit: u8,
}

impl Report {
    fn print(self, as_json: bool) -> u8 {
        if as_json {
            let report = json!({
                "command": self.command,
                "inputs": self.inputs,
                "provenance": self.provenance,
                "results": self.results,
                "verdict": self.verdict,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        } else {
            for line in &self.text {
                println!("{line}");
            }
            println!("{}", self.verdict);
        }
        self.exit
    }
}

fn provenance_json(certs: &[knotgraph::bounds::BoundCertificate]) -> Value {
    Value::Array(
        certs
            .iter()
            .map(|c| json!({ "rule": c.rule, "detail": c.detail }))
            .collect(),
    )
}

fn parse_family(family: &str, n: Option<i64>, k11: &str) -> Result<Family, Failure> {
    match family {
        "h2" => Ok(Family::H2),
        "hn" => {
            let n = n.ok_or_else(|| Failure::usage("--family hn requires --n"))?;
            Ok(Family::Hn(n))
        }
        "cc" => {
            let variant = match k11 {
                "trefoil" => K11Variant::Trefoil,
                "mirror-trefoil" => K11Variant::MirrorTrefoil,
                other => {
                    return Err(Failure::usage(format!(
                        "invalid --k11 {other:?}: expected trefoil or mirror-trefoil"
                    )))
                }
            };
            Ok(Family::Concordance(variant))
        }
        other => Err(Failure::usage(format!(
            "invalid --family {other:?}: expected h2, hn, or cc"
        ))),
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    if let Some(path) = &cli.atlas {
        let entries = knots::parse_extension_file(&read_file(path)?)?;
        knots::load_extensions(entries)?;
    }
    match cli.cmd {
        Cmd::Brieskorn { w1, w2, w3 } => {
            let w = BrieskornWeights::new(w1, w2, w3)?;
            let group = homology(&w)?;
            Ok(Report {
                command: "brieskorn",
                inputs: json!({ "weights": [w1, w2, w3] }),
                results: json!({ "group": group_json(&group) }),
                provenance: json!([{ "rule": "orlik", "detail": "subset kappa/c computation" }]),
                verdict: format!("H_1({w}) = {group}"),
                text: vec![],
                exit: 0,
            })
        }
        Cmd::Invariants { expr } => {
            let k = parser::parse_knot(&expr)?;
            let (g4, u, g4n) = (k.g4_interval(), k.u_interval(), k.gamma4_interval());
            Ok(Report {
                command: "invariants",
                inputs: json!({ "expr": expr }),
                results: json!({
                    "g4": interval_json(g4),
                    "gamma4": interval_json(g4n),
                    "knot": k.to_string(),
                    "s_half": k.s_half(),
                    "tau": k.tau(),
                    "u": interval_json(u),
                }),
                provenance: json!([
                    { "rule": "additivity", "detail": "tau and s' are additive over connected sums" },
                    { "rule": "genus-bounds", "detail": "lower via |tau|, |s'|, e_2; upper via summand genera" },
                ]),
                verdict: format!("{k}: tau = {}, s' = {}, g4 = {g4}, u = {u}, gamma4 = {g4n}", k.tau(), k.s_half()),
                text: vec![],
                exit: 0,
            })
        }
        Cmd::Cover { expr, degree } => {
            let k = parser::parse_knot(&expr)?;
            let group = k.branched_cover_homology(degree)?;
            Ok(Report {
                command: "cover",
                inputs: json!({ "degree": degree, "expr": expr }),
                results: json!({
                    "e": group.min_generators(),
                    "group": group_json(&group),
                    "knot": k.to_string(),
                }),
                provenance: json!([
                    { "rule": "brieskorn", "detail": "torus summands via Sigma(p, q, m)" },
                    { "rule": "atlas", "detail": "named summands via tabulated covers" },
                ]),
                verdict: format!("H_1 of the degree-{degree} cyclic branched cover of {k} = {group}"),
                text: vec![],
                exit: 0,
            })
        }
        Cmd::Dist {
            graph,
            expr1,
            expr2,
            covers,
        } => {
            let k1 = parser::parse_knot(&expr1)?;
            let k2 = parser::parse_knot(&expr2)?;
            let (metric, bound) = match graph.as_str() {
                "cc" => {
                    let v = concordance_lower(&k1, &k2);
                    let mut b = knotgraph::bounds::DistanceBound::default();
                    b.improve_lower(
                        Rational::from_integer(v),
                        knotgraph::bounds::BoundCertificate::new(
                            "tau/s-prime",
                            "max of |tau| and |s'| differences",
                        ),
                    )?;
                    ("concordance crossing-change".to_string(), b)
                }
                "h2" => ("H(2)-Gordian".to_string(), best_lower_d_n(&k1, &k2, 2, &covers)?),
                other => {
                    let n: i64 = other
                        .strip_prefix("hn:")
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| {
                            Failure::usage(format!(
                                "invalid --graph {other:?}: expected h2, hn:<n>, or cc"
                            ))
                        })?;
                    (format!("H({n})-Gordian"), best_lower_d_n(&k1, &k2, n, &covers)?)
                }
            };
            Ok(Report {
                command: "dist",
                inputs: json!({ "covers": covers, "expr1": expr1, "expr2": expr2, "graph": graph }),
                results: json!({
                    "lower": rat(bound.lower_rational()),
                    "lower_integer": bound.lower_integer(),
                    "metric": metric,
                }),
                provenance: provenance_json(bound.provenance()),
                verdict: format!(
                    "d({k1}, {k2}) >= {} in the {metric} graph",
                    bound.lower_rational()
                ),
                text: vec![],
                exit: 0,
            })
        }
        Cmd::Certify { family, k, n, k11 } => {
            let fam = parse_family(&family, n, &k11)?;
            let witness = build_witness(fam, k)?;
            let cert = certify(&witness)?;
            let edges: Vec<Value> = cert
                .edges
                .iter()
                .map(|e| {
                    json!({
                        "geodesic": e.geodesic,
                        "length": e.length,
                        "lower": rat(e.lower),
                        "rule": e.rule,
                    })
                })
                .collect();
            let mut results = json!({
                "edges": edges,
                "family": cert.family.to_string(),
                "k": cert.k,
                "midpoint": witness.midpoint().to_string(),
                "separation_lower": rat(cert.separation),
            });
            if let Some(lift) = &cert.gordian_lift {
                results["gordian_lift"] = Value::String(lift.clone());
            }
            let mut extra = Vec::new();
            if let Family::Hn(n) = fam {
                let qi = quasi_isometry_constants(n)?;
                extra.push(json!({
                    "rule": "quasi-isometry",
                    "detail": format!("a = {}, b = {}; {}", qi.a, qi.b, qi.derivation),
                }));
            }
            let mut provenance: Vec<Value> = cert
                .provenance
                .iter()
                .map(|c| json!({ "rule": c.rule, "detail": c.detail }))
                .collect();
            provenance.extend(extra);
            Ok(Report {
                command: "certify",
                inputs: json!({ "family": family, "k": k, "k11": k11, "n": n }),
                results,
                provenance: Value::Array(provenance),
                verdict: cert.verdict,
                text: vec![format!(
                    "family {}, k = {}: separation >= {}, edges geodesic: {}",
                    cert.family,
                    cert.k,
                    cert.separation,
                    cert.edges.iter().map(|e| e.geodesic.to_string()).collect::<Vec<_>>().join(", ")
                )],
                exit: 0,
            })
        }
        Cmd::Quotient { model, size } => quotient_report(&model, size),
        Cmd::Hyperbolicity { graphfile } => {
            let g = MetricGraph::parse(&read_file(&graphfile)?)?;
            let delta = g.delta_four_point()?;
            Ok(Report {
                command: "hyperbolicity",
                inputs: json!({ "graphfile": graphfile.display().to_string() }),
                results: json!({
                    "delta_four_point": rat(delta),
                    "edges": g.edge_count(),
                    "vertices": g.vertex_count(),
                }),
                provenance: json!([{
                    "rule": "four-point",
                    "detail": "max over vertex quadruples of (largest pair-sum - second)/2",
                }]),
                verdict: format!("four-point delta = {delta}"),
                text: vec![],
                exit: 0,
            })
        }
        Cmd::Link { graphfile, vertex } => {
            let g = MetricGraph::parse(&read_file(&graphfile)?)?;
            let link = g.link_of_vertex(&vertex)?;
            let diameter = g.link_diameter(&vertex)?;
            Ok(Report {
                command: "link",
                inputs: json!({ "graphfile": graphfile.display().to_string(), "vertex": vertex }),
                results: json!({
                    "diameter": diameter.to_string(),
                    "link_edges": link.edge_count(),
                    "link_vertices": link.labels(),
                }),
                provenance: json!([{
                    "rule": "link",
                    "detail": "induced subgraph on the unit sphere around the vertex",
                }]),
                verdict: match diameter {
                    LinkDiameter::Finite(d) => format!("link of {vertex}: diameter {d}"),
                    LinkDiameter::Disconnected => format!("link of {vertex}: disconnected"),
                },
                text: vec![],
                exit: 0,
            })
        }
        Cmd::QiCheck {
            graphfile_x,
            graphfile_y,
            mapfile,
            a,
            b,
            c,
        } => {
            let x = MetricGraph::parse(&read_file(&graphfile_x)?)?;
            let y = MetricGraph::parse(&read_file(&graphfile_y)?)?;
            let mut map = std::collections::BTreeMap::new();
            for (lineno, raw) in read_file(&mapfile)?.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(Failure::usage(format!(
                        "map file line {}: expected two labels",
                        lineno + 1
                    )));
                }
                map.insert(fields[0].to_string(), fields[1].to_string());
            }
            let (a, b, c) = (parse_rational(&a)?, parse_rational(&b)?, parse_rational(&c)?);
            if a < Rational::from_integer(1)
                || b < Rational::from_integer(0)
                || c < Rational::from_integer(0)
            {
                return Err(Failure::usage("need a >= 1, b >= 0, C >= 0"));
            }
            let violation = verify_quasi_isometry(&x, &y, &map, a, b, c)?;
            let ok = violation.is_none();
            Ok(Report {
                command: "qi-check",
                inputs: json!({
                    "C": c.to_string(),
                    "a": a.to_string(),
                    "b": b.to_string(),
                    "graphfile_x": graphfile_x.display().to_string(),
                    "graphfile_y": graphfile_y.display().to_string(),
                    "mapfile": mapfile.display().to_string(),
                }),
                results: json!({
                    "ok": ok,
                    "violation": violation.as_ref().map(|v| v.to_string()),
                }),
                provenance: json!([{
                    "rule": "quasi-isometry",
                    "detail": "double inequality on all pairs plus C-density of the image",
                }]),
                verdict: match &violation {
                    None => "map satisfies the quasi-isometry inequalities".to_string(),
                    Some(v) => format!("quasi-isometry check failed: {v}"),
                },
                text: vec![],
                exit: if ok { 0 } else { 1 },
            })
        }
    }
}

fn quotient_report(model: &str, size: i64) -> Result<Report, Failure> {
    match model {
        "noncompat" => {
            let g = noncompatible_model(size)?;
            let diameter = g.diameter()?;
            let embeddable =
                knotgraph::metricgraph::embeds_in_line(&g, &["0", "1", "2", "3"])?;
            Ok(Report {
                command: "quotient",
                inputs: json!({ "model": model, "size": size }),
                results: json!({
                    "diameter": diameter,
                    "edges": g.edge_count(),
                    "line_embeddable_first_four": embeddable,
                    "vertices": g.vertex_count(),
                }),
                provenance: json!([{
                    "rule": "noncompatible",
                    "detail": "edges {n,0} for n >= 1 and {n,m} for |n-m| = 4",
                }]),
                verdict: format!(
                    "non-compatible model: diameter {diameter}, not a subspace of the line: {}",
                    !embeddable
                ),
                text: vec![],
                exit: 0,
            })
        }
        "g4xu" => {
            let two = quotient_two_invariant_model(size)?;
            let points: Vec<Value> = two
                .points
                .iter()
                .map(|(m, n, k)| json!({ "g4": m, "knot": k.to_string(), "u": n }))
                .collect();
            let mut pairs = Vec::new();
            for (i, a) in two.points.iter().enumerate() {
                for b in &two.points[i + 1..] {
                    let bound = two.pair_bound((a.0, a.1), (b.0, b.1))?;
                    pairs.push(json!({
                        "from": [a.0, a.1],
                        "lower": bound.lower_integer(),
                        "to": [b.0, b.1],
                        "upper": bound.upper(),
                    }));
                }
            }
            Ok(Report {
                command: "quotient",
                inputs: json!({ "model": model, "size": size }),
                results: json!({ "pair_bounds": pairs, "points": points }),
                provenance: json!([
                    { "rule": "l-infinity", "detail": "per-move change of (g4, u) is at most (1, 1)" },
                    { "rule": "l1", "detail": "axis-aligned catalog paths" },
                ]),
                verdict: format!(
                    "two-invariant model on {} classes: intervals [l-infinity, l1] certified",
                    two.points.len()
                ),
                text: vec![],
                exit: 0,
            })
        }
        single => {
            let invariant = match single {
                "g4" => QuotientInvariant::G4,
                "u" => QuotientInvariant::U,
                "gamma4" => QuotientInvariant::Gamma4,
                "tau" => QuotientInvariant::Tau,
                "shalf" => QuotientInvariant::SHalf,
                other => {
                    return Err(Failure::usage(format!(
                        "invalid --model {other:?}: expected g4, u, gamma4, tau, shalf, g4xu, or noncompat"
                    )))
                }
            };
            let q = quotient_model(invariant, size)?;
            let classes: Vec<Value> = q
                .witnesses
                .iter()
                .map(|(n, k)| json!({ "class": n, "witness": k.to_string() }))
                .collect();
            let zero_link = q.graph.link_diameter("0")?;
            Ok(Report {
                command: "quotient",
                inputs: json!({ "model": model, "size": size }),
                results: json!({
                    "classes": classes,
                    "link_of_zero": zero_link.to_string(),
                    "vertices": q.graph.vertex_count(),
                }),
                provenance: json!([
                    { "rule": "witness", "detail": "invariant of each class witness equals its class" },
                    { "rule": "catalog", "detail": "consecutive witnesses are one move apart" },
                ]),
                verdict: format!("{invariant} quotient model is isometric to a path metric"),
                text: vec![],
                exit: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => ExitCode::from(report.print(json)),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
