//! `homcolor`: Hom complexes, homology, Stiefel-Whitney heights and chromatic
//! lower bounds from the command line.

mod cache;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use homcolor_core::bounds::{
    chrom_lower_bound, complete_graph_bound, f_closed_form, f_oracle, hom_height, BoundOptions, HeightCache,
    MemoryCache, TestGraphSpec,
};
use homcolor_core::complex::{
    barycentric, build_hom, build_hom_plus, build_independence, build_neighborhood, ProdComplex, SimplicialComplex,
    DEFAULT_CELL_BUDGET,
};
use homcolor_core::graph::{
    chromatic_number_exact, enumerate_homs, fold_reduce, make_named_graph, rational_chromatic_search, winding_number,
    GraphHom, StateFamily,
};
use homcolor_core::homology::{betti_gf2, euler_characteristic, integer_homology, BettiVector, CellComplex};
use homcolor_core::spectral::spectral_report;
use homcolor_core::sw::DEFAULT_BD_BUDGET;
use homcolor_core::{Error, Graph};
use num_bigint::BigInt;
use serde_json::{json, Value};

use cache::DiskCache;

#[derive(Parser)]
#[command(name = "homcolor", version, about = "Topological lower bounds on chromatic numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Maximum number of cells in a Hom complex.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET, value_parser = positive, global = true)]
    cell_budget: usize,
    /// Maximum number of simplices in a barycentric subdivision.
    #[arg(long, default_value_t = DEFAULT_BD_BUDGET, value_parser = positive, global = true)]
    bd_budget: usize,
    /// Directory for cached reference heights.
    #[arg(long, env = "HOMCOLOR_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rational {
    Fractional,
    Circular,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["hom", "homplus", "ind", "nbhd"])))]
struct Source {
    /// Hom(T,G).
    #[arg(long, num_args = 2, value_names = ["T", "G"])]
    hom: Option<Vec<String>>,
    /// Hom₊(T,G).
    #[arg(long, num_args = 2, value_names = ["T", "G"])]
    homplus: Option<Vec<String>>,
    /// Independence complex of G.
    #[arg(long, value_name = "G")]
    ind: Option<String>,
    /// Neighborhood complex of G.
    #[arg(long, value_name = "G")]
    nbhd: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build Hom(T,G) and report its shape.
    Hom {
        t: String,
        g: String,
        /// Print the cells instead of the summary.
        #[arg(long)]
        dump: bool,
    },
    /// Build Hom₊(T,G) and report its shape.
    Homplus {
        t: String,
        g: String,
        #[arg(long)]
        dump: bool,
    },
    /// Betti numbers over GF(2).
    Betti(Source),
    /// Integral homology (Hom complexes are subdivided first).
    HomologyInt(Source),
    /// Stiefel-Whitney height of Hom(T,G) under the test involution.
    Height {
        /// Test graph with involution, e.g. `complete:2` or `cycle:5+reflection`.
        #[arg(long)]
        test: String,
        g: String,
        #[arg(long, value_parser = positive)]
        k_max: Option<usize>,
    },
    /// Chromatic lower bound from heights.
    Bound {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        test: String,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        m_cap: usize,
        #[arg(long, value_parser = positive)]
        k_max: Option<usize>,
        /// Also compute the exact chromatic number up to this many colors.
        #[arg(long, value_parser = positive)]
        exact_cap: Option<usize>,
        /// Use the closed-form references of a complete test graph.
        #[arg(long)]
        analytic: bool,
    },
    /// Greedy fold reduction.
    Fold { g: String },
    /// Exact chromatic number with the clique baseline.
    Chromatic {
        g: String,
        #[arg(long, default_value_t = 12, value_parser = positive)]
        cap: usize,
        /// Also search for a fractional or circular coloring.
        #[arg(long, value_enum)]
        rational: Option<Rational>,
        #[arg(long, default_value_t = 10, value_parser = positive)]
        rational_cap: usize,
    },
    /// Winding numbers of homomorphisms C_m -> K_3.
    Winding {
        m: usize,
        /// A single map given as comma separated colors.
        #[arg(long, value_delimiter = ',')]
        map: Option<Vec<usize>>,
    },
    /// E₁ and E₂ pages of the support filtration of Hom₊(T,G).
    Spectral { t: String, g: String },
    /// Number of top spheres of Hom(K_m,K_n).
    OracleF { m: usize, n: usize },
    /// Cells of Hom(T,G), one per line.
    Dump {
        t: String,
        g: String,
        #[arg(long)]
        plus: bool,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure of a command: a library error, or a report that ran out of budget.
enum Failure {
    Lib(Error),
    Io(String),
    Partial(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Output {
    json: Value,
    text: Option<String>,
}

impl Output {
    fn new(json: Value) -> Self {
        Output { json, text: None }
    }

    fn with_text(json: Value, text: String) -> Self {
        Output { json, text: Some(text) }
    }
}

/// Reads a graph file when the argument names one, otherwise a named spec.
fn load_graph(arg: &str) -> Result<Graph, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))?;
        return Graph::parse_text(&text).map_err(|e| Failure::Io(format!("{arg}: {e}")));
    }
    Ok(make_named_graph(arg)?)
}

fn graph_json(g: &Graph) -> Value {
    let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
    json!({ "n": g.vertex_count(), "edges": edges })
}

fn bigint_json(b: &BigInt) -> Value {
    match u64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

fn complex_summary(x: &ProdComplex, kind: &str, t: &str, g: &str) -> Value {
    json!({
        "kind": kind,
        "source": t,
        "target": g,
        "dim": x.dim(),
        "f_vector": x.f_vector(),
        "cells": x.len(),
        "euler": euler_characteristic(x),
    })
}

fn dump_json(x: &ProdComplex) -> Value {
    let cells: Vec<Value> = (0..x.len())
        .map(|id| {
            let lists: Vec<Vec<usize>> = x.eta(id).iter().map(|s| s.iter().collect()).collect();
            json!({ "dim": x.dim_of(id), "lists": lists })
        })
        .collect();
    json!({ "cells": cells })
}

enum Built {
    Prod(ProdComplex),
    Simp(SimplicialComplex),
}

fn build_source(src: &Source, c: &Common) -> Result<(String, Built), Failure> {
    if let Some(v) = &src.hom {
        let x = build_hom(&load_graph(&v[0])?, &load_graph(&v[1])?, c.cell_budget)?;
        return Ok((format!("Hom({}, {})", v[0], v[1]), Built::Prod(x)));
    }
    if let Some(v) = &src.homplus {
        let x = build_hom_plus(&load_graph(&v[0])?, &load_graph(&v[1])?, c.cell_budget)?;
        return Ok((format!("Hom+({}, {})", v[0], v[1]), Built::Prod(x)));
    }
    if let Some(g) = &src.ind {
        return Ok((format!("Ind({g})"), Built::Simp(build_independence(&load_graph(g)?))));
    }
    let g = src.nbhd.as_ref().expect("clap enforces one source");
    Ok((format!("N({g})"), Built::Simp(build_neighborhood(&load_graph(g)?))))
}

fn betti_output(name: String, x: &dyn CellComplex) -> Result<Output, Failure> {
    let b = betti_gf2(x)?;
    let json = json!({
        "complex": name,
        "cells": x.cell_counts(),
        "euler": euler_characteristic(x),
        "betti": b,
    });
    Ok(Output::with_text(json, b.to_string()))
}

fn integer_output(name: String, y: &SimplicialComplex) -> Result<Output, Failure> {
    let groups = integer_homology(y)?;
    let b: BettiVector = betti_gf2(y)?;
    let mut text: Vec<String> = groups.iter().enumerate().map(|(d, h)| format!("H{d} = {h}")).collect();
    text.push(b.to_string());
    let json = json!({
        "complex": name,
        "cells": y.f_vector(),
        "euler": euler_characteristic(y),
        "betti_gf2": b,
        "integer": groups,
    });
    Ok(Output::with_text(json, text.join("\n")))
}

fn run(cmd: &Cmd, c: &Common) -> Result<Output, Failure> {
    match cmd {
        Cmd::Hom { t, g, dump } | Cmd::Homplus { t, g, dump } => {
            let plus = matches!(cmd, Cmd::Homplus { .. });
            let (tg, gg) = (load_graph(t)?, load_graph(g)?);
            let x = if plus {
                build_hom_plus(&tg, &gg, c.cell_budget)?
            } else {
                build_hom(&tg, &gg, c.cell_budget)?
            };
            if *dump {
                return Ok(Output::with_text(dump_json(&x), x.dump().trim_end().to_string()));
            }
            Ok(Output::new(complex_summary(
                &x,
                if plus { "hom_plus" } else { "hom" },
                t,
                g,
            )))
        }
        Cmd::Dump { t, g, plus } => {
            let (tg, gg) = (load_graph(t)?, load_graph(g)?);
            let x = if *plus {
                build_hom_plus(&tg, &gg, c.cell_budget)?
            } else {
                build_hom(&tg, &gg, c.cell_budget)?
            };
            Ok(Output::with_text(dump_json(&x), x.dump().trim_end().to_string()))
        }
        Cmd::Betti(src) => match build_source(src, c)? {
            (name, Built::Prod(x)) => betti_output(name, &x),
            (name, Built::Simp(y)) => betti_output(name, &y),
        },
        Cmd::HomologyInt(src) => match build_source(src, c)? {
            (name, Built::Prod(x)) => integer_output(format!("Bd {name}"), &barycentric(&x, c.bd_budget)?),
            (name, Built::Simp(y)) => integer_output(name, &y),
        },
        Cmd::Height { test, g, k_max } => {
            let spec = TestGraphSpec::parse(test)?;
            let r = hom_height(&spec, &load_graph(g)?, c.cell_budget, c.bd_budget, *k_max)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["test"] = json!(spec.name());
            v["graph"] = json!(g);
            Ok(Output::new(v))
        }
        Cmd::Bound {
            graph,
            test,
            m_cap,
            k_max,
            exact_cap,
            analytic,
        } => {
            let g = load_graph(graph)?;
            let opts = BoundOptions {
                m_cap: *m_cap,
                cell_budget: c.cell_budget,
                bd_budget: c.bd_budget,
                k_max: *k_max,
                exact_cap: *exact_cap,
            };
            let rep = if *analytic {
                let n = test
                    .strip_prefix("complete:")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parameter("--analytic needs a test graph complete:n".into()))?;
                complete_graph_bound(n, &g, graph, &opts)?
            } else {
                let spec = TestGraphSpec::parse(test)?;
                let mut disk;
                let mut mem = MemoryCache::new();
                let cache: &mut dyn HeightCache = match &c.cache_dir {
                    Some(dir) => {
                        disk = DiskCache::open(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                        &mut disk
                    }
                    None => &mut mem,
                };
                chrom_lower_bound(&spec, &g, graph, &opts, cache)?
            };
            let v = serde_json::to_value(&rep).expect("serializable");
            if rep.is_partial() {
                return Err(Failure::Partial(v));
            }
            Ok(Output::new(v))
        }
        Cmd::Fold { g } => {
            let gg = load_graph(g)?;
            let tr = fold_reduce(&gg);
            let removed: Vec<[usize; 2]> = tr.removed.iter().map(|&(v, u)| [v, u]).collect();
            let json = json!({
                "graph": g,
                "removed": removed,
                "survivors": tr.survivors,
                "result": graph_json(&tr.result),
            });
            let text = format!(
                "removed: {}\nsurvivors: {}\n{}",
                serde_json::to_string(&removed).expect("serializable"),
                serde_json::to_string(&tr.survivors).expect("serializable"),
                tr.result.to_text().trim_end()
            );
            Ok(Output::with_text(json, text))
        }
        Cmd::Chromatic {
            g,
            cap,
            rational,
            rational_cap,
        } => {
            let gg = load_graph(g)?;
            let mut v = json!({
                "graph": g,
                "chromatic": chromatic_number_exact(&gg, *cap),
                "cap": cap,
                "clique": homcolor_core::bounds::clique_bound(&gg),
            });
            if let Some(r) = rational {
                let family = match r {
                    Rational::Fractional => StateFamily::Fractional,
                    Rational::Circular => StateFamily::Circular,
                };
                let b = rational_chromatic_search(&gg, family, *rational_cap)?;
                v["rational"] = json!({
                    "family": family,
                    "n": b.n,
                    "k": b.k,
                    "reduced": [b.reduced.0, b.reduced.1],
                    "cap": b.cap,
                    "capped": b.capped,
                    "witness": b.witness,
                });
            }
            Ok(Output::new(v))
        }
        Cmd::Winding { m, map } => {
            let cyc = make_named_graph(&format!("cycle:{m}"))?;
            let k3 = Graph::complete(3);
            if let Some(f) = map {
                let w = winding_number(&GraphHom::new(&cyc, &k3, f.clone())?)?;
                return Ok(Output::with_text(
                    json!({ "m": m, "map": f, "winding": w }),
                    w.to_string(),
                ));
            }
            let mut hist = std::collections::BTreeMap::<i64, usize>::new();
            let homs = enumerate_homs(&cyc, &k3, None).maps;
            for f in &homs {
                *hist
                    .entry(winding_number(&GraphHom::new(&cyc, &k3, f.clone())?)?)
                    .or_default() += 1;
            }
            let windings: Vec<Value> = hist.iter().map(|(w, n)| json!({ "winding": w, "maps": n })).collect();
            let text = hist
                .iter()
                .map(|(w, n)| format!("winding {w}: {n} maps"))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output::with_text(
                json!({ "m": m, "homs": homs.len(), "windings": windings }),
                text,
            ))
        }
        Cmd::Spectral { t, g } => {
            let r = spectral_report(&load_graph(t)?, &load_graph(g)?, c.cell_budget, c.bd_budget)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["consistent"] = json!(r.consistent());
            v["source"] = json!(t);
            v["target"] = json!(g);
            Ok(Output::new(v))
        }
        Cmd::OracleF { m, n } => {
            let f = f_oracle(*m, *n);
            let closed = f_closed_form(*m, *n);
            let json = json!({ "m": m, "n": n, "f": bigint_json(&f), "closed_form_agrees": f == closed });
            Ok(Output::with_text(json, f.to_string()))
        }
    }
}

/// `key: value` lines; nested objects use dotted keys, other values are
/// compact JSON, so every number matches the JSON rendering.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn render(format: Format, json: &Value, text: Option<&str>) -> String {
    match (format, text) {
        (Format::Json, _) => serde_json::to_string_pretty(json).expect("serializable"),
        (Format::Text, Some(t)) => t.to_string(),
        (Format::Text, None) => {
            let mut lines = Vec::new();
            flatten("", json, &mut lines);
            lines.join("\n")
        }
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Budget { stage, count, budget } => json!({
            "error": e.to_string(),
            "partial": true,
            "stage": stage,
            "count": count,
            "budget": budget,
        }),
        _ => json!({ "error": e.to_string() }),
    }
}

/// Writes one report; a closed pipe is not an error.
fn emit(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let format = cli.common.format;
    match run(&cli.cmd, &cli.common) {
        Ok(out) => {
            emit(&render(format, &out.json, out.text.as_deref()));
            ExitCode::SUCCESS
        }
        Err(Failure::Partial(v)) => {
            emit(&render(format, &v, None));
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            let code = if e.is_budget() { 2 } else { 1 };
            if format == Format::Json {
                emit(&render(format, &error_json(&e), None));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
        Err(Failure::Io(msg)) => {
            if format == Format::Json {
                emit(&render(format, &json!({ "error": msg }), None));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
