//! `lcw`: command-line front end for lcw-core.
//!
//! Exit codes: 0 success, 1 negative verification, 2 input error,
//! 3 budget or size cap exceeded.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use lcw_core::canon::iso_classes_up_to;
use lcw_core::corpus::{random_substitution_graph, seeded_rng};
use lcw_core::decomp::{brute_force_maximal_strong_modules, decompose_one_stage};
use lcw_core::embed::{coqt_avoidance_index, induced_embed, qt_avoidance_index, EmbeddingWitness};
use lcw_core::exact::{exact_lcw, naive_lcw, DEFAULT_BUDGET_CAP, NAIVE_LIMIT};
use lcw_core::expr::{verify, LcwExpression};
use lcw_core::io::{from_edge_list, from_graph6, to_edge_list, to_graph6};
use lcw_core::pipeline::{
    build_expression, flat_bound, prime_bound, theorem_check_capped, ExactOracle, NodeKind, PROFILE_LIMIT,
};
use lcw_core::qt::{gen_coq, gen_q, is_quasi_threshold, universal_embed};
use lcw_core::{Error, Graph};

#[derive(Parser)]
#[command(name = "lcw", version, about = "Linear clique-width toolkit")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Format of graph inputs and of `gen` output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Graph6)]
    format: Format,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest label budget tried by the exact solver.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_CAP)]
    budget: usize,
    /// Largest prime induced subgraph considered by theorem-check.
    #[arg(long, global = true)]
    size_cap: Option<usize>,
    /// Seed for randomized corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Single-threaded, byte-reproducible output.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Append-only memo file for exact prime expressions.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Graph6,
    Edgelist,
}

#[derive(Subcommand)]
enum Command {
    /// Print a universal graph.
    Gen {
        #[arg(value_enum)]
        family: Family,
        index: usize,
    },
    /// One stage of modular decomposition.
    Decompose { graph: Option<String> },
    /// Exact linear clique-width with a witness expression.
    LcwExact { graph: Option<String> },
    /// Expression built by recursive decomposition, with per-node audit.
    BuildExpr { graph: Option<String> },
    /// Check that an expression evaluates to a graph.
    VerifyExpr {
        /// Expression file (text or JSON), `-` for stdin.
        #[arg(long)]
        expr: String,
        graph: Option<String>,
    },
    /// Find an induced copy of a pattern in a host.
    Embed { pattern: String, host: String },
    /// Avoidance indices `t` and `s`.
    Avoid { graph: Option<String> },
    /// Compare lcw against (m+2)(t+s).
    TheoremCheck { graph: Option<String> },
    /// Run the checks over an exhaustive and a sampled corpus.
    Sweep {
        /// Exhaustive corpus: all graphs up to isomorphism on 1..=max-n vertices.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Number of sampled substitution graphs.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Vertex count of the sampled graphs.
        #[arg(long, default_value_t = 16)]
        sample_n: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Qt,
    Coqt,
}

enum Outcome {
    Ok,
    Negative,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::SizeLimit { .. } | Error::Oracle { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read_source(arg: Option<&str>) -> Result<String, Error> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
        Some(a) if Path::new(a).is_file() => Ok(std::fs::read_to_string(a)?),
        Some(a) => Ok(a.to_string()),
    }
}

/// A graph from a file, a literal argument, or stdin.
fn read_graph(arg: Option<&str>, format: Format) -> Result<Graph, Error> {
    let text = read_source(arg)?;
    match format {
        Format::Graph6 => from_graph6(&text),
        Format::Edgelist => from_edge_list(&text),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn oracle(config: &Config) -> Result<ExactOracle, Error> {
    match &config.cache {
        Some(path) => ExactOracle::with_cache_file(config.budget, path),
        None => Ok(ExactOracle::new(config.budget)),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let c = &cli.config;
    match &cli.command {
        Command::Gen { family, index } => {
            let g = match family {
                Family::Qt => gen_q(*index)?,
                Family::Coqt => gen_coq(*index)?,
            };
            if c.json {
                print_json(&json!({ "n": g.n(), "graph6": to_graph6(&g), "edges": g.edges() }))?;
            } else if c.format == Format::Edgelist {
                print!("{}", to_edge_list(&g));
            } else {
                println!("{}", to_graph6(&g));
            }
        }
        Command::Decompose { graph } => {
            let g = read_graph(graph.as_deref(), c.format)?;
            print_json(&decompose_one_stage(&g)?.to_serial())?;
        }
        Command::LcwExact { graph } => {
            let g = read_graph(graph.as_deref(), c.format)?;
            let r = exact_lcw(&g, c.budget)?;
            if c.json {
                print_json(&json!({ "k": r.k, "witness": r.witness }))?;
            } else {
                println!("# lcw {}", r.k);
                print!("{}", r.witness.to_text());
            }
        }
        Command::BuildExpr { graph } => {
            let g = read_graph(graph.as_deref(), c.format)?;
            let b = build_expression(&g, &oracle(c)?)?;
            if c.json {
                print_json(&b)?;
            } else {
                println!("# width {}", b.width);
                for node in &b.audit {
                    println!(
                        "# node depth={} kind={:?} vertices={} bound={} width={}",
                        node.depth,
                        node.kind,
                        node.vertices.len(),
                        node.bound,
                        node.width
                    );
                }
                print!("{}", b.expression.to_text());
            }
        }
        Command::VerifyExpr { expr, graph } => {
            if expr == "-" && graph.as_deref().is_none_or(|g| g == "-") {
                return Err(Error::InvalidArgument("expression and graph cannot both come from stdin".into()));
            }
            let e = LcwExpression::parse_any(&read_source(Some(expr))?)?;
            let g = read_graph(graph.as_deref(), c.format)?;
            let ok = verify(&e, &g)?;
            if c.json {
                print_json(&json!({ "verified": ok, "width": e.width() }))?;
            } else {
                println!("{ok}");
            }
            if !ok {
                return Ok(Outcome::Negative);
            }
        }
        Command::Embed { pattern, host } => {
            let p = read_graph(Some(pattern), c.format)?;
            let h = read_graph(Some(host), c.format)?;
            match induced_embed(&p, &h) {
                Some(e) if c.json => print_json(&EmbeddingWitness::new(&p, &h, &e))?,
                Some(e) => {
                    let map: Vec<String> = e.map.iter().map(usize::to_string).collect();
                    println!("{}", map.join(" "));
                }
                None if c.json => print_json(&json!({ "absent": true }))?,
                None => println!("absent"),
            }
        }
        Command::Avoid { graph } => {
            let g = read_graph(graph.as_deref(), c.format)?;
            let (t, s) = (qt_avoidance_index(&g), coqt_avoidance_index(&g));
            if c.json {
                print_json(&json!({ "t": t, "s": s }))?;
            } else {
                println!("{t} {s}");
            }
        }
        Command::TheoremCheck { graph } => {
            let g = read_graph(graph.as_deref(), c.format)?;
            let cap = c.size_cap.unwrap_or(g.n());
            let r = theorem_check_capped(&g, cap, &oracle(c)?)?;
            print_json(&r)?;
            if r.lcw_exact && !r.holds {
                return Ok(Outcome::Negative);
            }
        }
        Command::Sweep { max_n, samples, sample_n } => {
            return sweep(c, *max_n, *samples, *sample_n);
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Clone, Copy, Default, Serialize)]
struct Tally {
    checked: usize,
    failed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failed += usize::from(!ok);
    }

    fn add(self, o: Tally) -> Tally {
        Tally { checked: self.checked + o.checked, failed: self.failed + o.failed }
    }
}

const CHECKS: [&str; 5] = ["naive-agreement", "decomposition", "builder", "theorem", "qt-embedding"];

/// Runs every applicable check on one graph.
fn check_graph(g: &Graph, oracle: &ExactOracle, budget: usize, exhaustive: bool) -> Result<[Tally; 5], Error> {
    let mut t = [Tally::default(); 5];
    let n = g.n();
    if n <= NAIVE_LIMIT {
        t[0].record(naive_lcw(g)? == exact_lcw(g, budget)?.k);
    }
    if n >= 2 {
        let d = decompose_one_stage(g)?;
        let mut ok = d.reconstruct(&d.parts(g)?)? == *g;
        if exhaustive {
            ok &= brute_force_maximal_strong_modules(g)? == d.modules;
        }
        t[1].record(ok);
    }
    let b = build_expression(g, oracle)?;
    let audits_ok = b.audit.iter().all(|node| {
        let expected = match node.kind {
            NodeKind::Leaf => 1,
            NodeKind::Complete | NodeKind::AntiComplete => flat_bound(&node.part_widths),
            NodeKind::Prime => match (node.skeleton_width, node.x) {
                (Some(w), Some(x)) => prime_bound(w, &node.part_widths, x),
                _ => return false,
            },
        };
        node.bound == expected && node.width <= node.bound
    });
    t[2].record(verify(&b.expression, g)? && audits_ok);
    if n <= PROFILE_LIMIT.min(12) {
        let r = theorem_check_capped(g, n, oracle)?;
        t[3].record(!r.lcw_exact || r.holds);
    }
    if is_quasi_threshold(g) {
        let e = universal_embed(g)?;
        t[4].record(e.is_valid_for(g) && e.t.get() <= n);
    }
    Ok(t)
}

fn sweep(c: &Config, max_n: usize, samples: usize, sample_n: usize) -> Result<Outcome, Error> {
    let start = Instant::now();
    let oracle = oracle(c)?;
    let classes = iso_classes_up_to(max_n.min(9))?;
    let exhaustive: Vec<Graph> = classes.into_iter().skip(1).flatten().collect();
    let mut rng = seeded_rng(c.seed);
    let sampled: Vec<Graph> = (0..samples).map(|_| random_substitution_graph(&mut rng, sample_n.max(1), 6)).collect();

    let run_all = |graphs: &[Graph], exhaustive: bool| -> Result<[Tally; 5], Error> {
        let zero = [Tally::default(); 5];
        let merge = |a: [Tally; 5], b: [Tally; 5]| std::array::from_fn(|i| a[i].add(b[i]));
        if c.deterministic {
            graphs.iter().try_fold(zero, |acc, g| Ok(merge(acc, check_graph(g, &oracle, c.budget, exhaustive)?)))
        } else {
            graphs
                .par_iter()
                .map(|g| check_graph(g, &oracle, c.budget, exhaustive))
                .try_reduce(|| zero, |a, b| Ok(merge(a, b)))
        }
    };
    let ex = run_all(&exhaustive, true)?;
    let sa = run_all(&sampled, false)?;
    let failed: usize = ex.iter().chain(&sa).map(|t| t.failed).sum();

    if c.json {
        let rows: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, name)| json!({ "check": name, "exhaustive": ex[i], "sampled": sa[i] }))
            .collect();
        print_json(&json!({
            "max_n": max_n.min(9),
            "exhaustive_graphs": exhaustive.len(),
            "samples": samples,
            "sample_n": sample_n,
            "seed": c.seed,
            "checks": rows,
            "failed": failed,
        }))?;
    } else {
        println!("corpus: {} graphs on 1..={} vertices, {} samples on {} vertices (seed {})",
            exhaustive.len(), max_n.min(9), samples, sample_n, c.seed);
        println!("{:<16} {:>10} {:>8} {:>10} {:>8}", "check", "exhaustive", "failed", "sampled", "failed");
        for (i, name) in CHECKS.iter().enumerate() {
            println!("{:<16} {:>10} {:>8} {:>10} {:>8}", name, ex[i].checked, ex[i].failed, sa[i].checked, sa[i].failed);
        }
        if !c.deterministic {
            println!("elapsed: {:.1}s", start.elapsed().as_secs_f64());
        }
    }
    Ok(if failed == 0 { Outcome::Ok } else { Outcome::Negative })
}
