//! `fgraph`: command-line front end for the exact Thompson's group F graph
//! toolkit. Every number printed or read is exact (`k/2^e`, `a+b*sqrt2`);
//! there is no decimal output anywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use thompson_graphs::amenability::{
    boundary, cheeger_ratio, doubling_check, gamma_p_boundary_test,
};
use thompson_graphs::dyadic::Dyadic;
use thompson_graphs::forest::word_to_forest;
use thompson_graphs::gamma_s::{build_gamma_s, check_structure, gamma_s_doubling_witness};
use thompson_graphs::graph::{graph_from_json, LabeledGraph, Truncation, VertexKey};
use thompson_graphs::haar::{
    apply_pi, hilbert_schreier_graph, verify_action_equations, verify_exceptional_tables, HaarIndex,
};
use thompson_graphs::report::{Report, REPORT_OPS};
use thompson_graphs::schreier::{
    dyadic_orbit_graph, find_transporter, folner_ratio, tuple_orbit_graph, verify_dyadic_structure,
    word_length_lower_bound, DyadicTuple,
};
use thompson_graphs::word::Word;

/// Exact Schreier/Cayley graph computations for Thompson's group F.
#[derive(Parser)]
#[command(name = "fgraph", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for graphs.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; defaults to stdout (or FGRAPH_OUT_DIR/<name> when that
    /// variable is set).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a generator word at a dyadic point.
    Eval {
        /// Word such as "x0 x1^-1 x2".
        #[arg(long)]
        word: String,
        /// Dyadic point of [0,1], e.g. 1/2.
        #[arg(long)]
        at: String,
    },
    /// Print the canonical breakpoint form of a generator word.
    Compose {
        #[arg(long)]
        word: String,
    },
    /// Print the binary forest of a positive generator word.
    Forest {
        #[arg(long)]
        word: String,
    },
    /// Build a truncation of the Schreier graph of the dyadic action.
    Schreier {
        /// Seed: a dyadic like 1/2 or an increasing tuple like 1/4,1/2.
        #[arg(long, default_value = "1/2")]
        seed: String,
        /// Breadth-first depth bound.
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact Folner boundary ratio |dS_m|/|S_m| for the tuple action.
    Folner {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        tuple_size: usize,
    },
    /// Geodesic word carrying one dyadic point to another.
    Transporter {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Schreier-graph lower bound for the word length of an element.
    LengthBound {
        #[arg(long)]
        word: String,
        /// Depth of the supporting truncation.
        #[arg(long, default_value_t = 16)]
        depth: u32,
    },
    /// Haar-basis action: exact coefficients, graphs, matrix slices.
    Haar {
        #[command(subcommand)]
        command: HaarCommand,
    },
    /// Build or test the induced Cayley subgraph on the x_n u vertices.
    GammaS {
        /// Optional action: "doubling" runs the non-amenability witness.
        action: Option<String>,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact Cheeger ratio |boundary(S)|/|S| of a vertex set in a graph file.
    Cheeger {
        /// Graph in the JSON format produced by the graph commands.
        #[arg(long)]
        graph: PathBuf,
        /// JSON array of vertex keys.
        #[arg(long)]
        set: PathBuf,
    },
    /// Doubling-condition check for two injective maps on a graph file.
    Doubling {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// JSON object mapping vertex keys to vertex keys.
        #[arg(long)]
        f_map: PathBuf,
        #[arg(long)]
        g_map: PathBuf,
        /// JSON array of vertex keys; defaults to the domain of f.
        #[arg(long)]
        region: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every verification report at desk scale; nonzero exit on failure.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HaarCommand {
    /// Exact expansion of the image of a basis function.
    Apply {
        /// Generator word, e.g. "x0" or "x1^-1 x0".
        #[arg(long)]
        gen: String,
        /// Basis index: "const" or "(i,j)".
        #[arg(long)]
        index: String,
    },
    /// The Hilbert-space Schreier graph up to a level bound.
    Graph {
        #[arg(long, default_value_t = 5)]
        imax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// JSON slice of the representation matrix: coefficient of each basis
    /// pair under one generator word.
    Matrix {
        #[arg(long)]
        gen: String,
        #[arg(long, default_value_t = 4)]
        imax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn emit(output: &OutputArgs, default_name: &str, dot: String, json: String) -> Result<()> {
    let text = match output.format {
        Format::Dot => dot,
        Format::Json => json,
    };
    let path = output.out.clone().or_else(|| {
        std::env::var_os("FGRAPH_OUT_DIR").map(|dir| PathBuf::from(dir).join(default_name))
    });
    match path {
        Some(p) => {
            fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn graph_outputs<V: VertexKey>(g: &LabeledGraph<V>, name: &str) -> (String, String) {
    (g.to_dot(name), g.to_json())
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse::<Word>().map_err(|e| anyhow!(e))
}

fn read_key_array(path: &PathBuf) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn keys_to_ids(g: &LabeledGraph<String>, keys: &[String]) -> Result<BTreeSet<usize>> {
    keys.iter()
        .map(|k| {
            g.vertex_id(k)
                .ok_or_else(|| anyhow!("vertex {k:?} is not in the graph"))
        })
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval { word, at } => {
            let w = parse_word(&word)?;
            let t: Dyadic = at.parse().map_err(|e| anyhow!("{e}"))?;
            let image = w.to_plhomeo().evaluate(&t).map_err(|e| anyhow!("{e}"))?;
            println!("{image}");
        }
        Command::Compose { word } => {
            let w = parse_word(&word)?;
            println!("{}", w.to_plhomeo());
        }
        Command::Forest { word } => {
            let w = parse_word(&word)?;
            let f = word_to_forest(&w).map_err(|e| anyhow!("{e}"))?;
            println!("{f}");
        }
        Command::Schreier {
            seed,
            depth,
            output,
        } => {
            if seed.contains(',') {
                let t: DyadicTuple = seed.parse().map_err(|e| anyhow!("{e}"))?;
                let g = tuple_orbit_graph(&t, Truncation::Depth(depth));
                let (dot, json) = graph_outputs(&g, "schreier");
                emit(&output, "schreier.json", dot, json)?;
            } else {
                let d: Dyadic = seed.parse().map_err(|e| anyhow!("{e}"))?;
                let g = dyadic_orbit_graph(&d, Truncation::Depth(depth));
                let (dot, json) = graph_outputs(&g, "schreier");
                emit(&output, "schreier.json", dot, json)?;
            }
        }
        Command::Folner { m, tuple_size } => {
            if m < 1 || tuple_size < 1 {
                bail!("m and tuple-size must be at least 1");
            }
            println!("{}", folner_ratio(m, tuple_size));
        }
        Command::Transporter { from, to } => {
            let a: Dyadic = from.parse().map_err(|e| anyhow!("{e}"))?;
            let b: Dyadic = to.parse().map_err(|e| anyhow!("{e}"))?;
            let w = find_transporter(&a, &b);
            if w.is_empty() {
                println!("(empty word)");
            } else {
                println!("{w}");
            }
        }
        Command::LengthBound { word, depth } => {
            let w = parse_word(&word)?;
            let f = w.to_plhomeo();
            let g = dyadic_orbit_graph(&Dyadic::half(), Truncation::Depth(depth));
            let bound = word_length_lower_bound(&f, &g).map_err(|e| anyhow!("{e}"))?;
            println!("{bound}");
        }
        Command::Haar { command } => match command {
            HaarCommand::Apply { gen, index } => {
                let w = parse_word(&gen)?;
                let h: HaarIndex = index.parse().map_err(|e| anyhow!("{e}"))?;
                let comb = apply_pi(&w.to_plhomeo(), &h);
                for (idx, c) in comb.iter() {
                    println!("{idx}: {c}");
                }
            }
            HaarCommand::Graph { imax, output } => {
                let g = hilbert_schreier_graph(imax);
                let (dot, json) = graph_outputs(&g, "haar");
                emit(&output, "haar-graph.json", dot, json)?;
            }
            HaarCommand::Matrix { gen, imax, out } => {
                let w = parse_word(&gen)?;
                let h = w.to_plhomeo();
                let mut indices = vec![HaarIndex::Constant];
                for level in 0..=imax {
                    for pos in 1..=(1u64 << level) {
                        indices.push(HaarIndex::wavelet(level, pos));
                    }
                }
                // entries keyed "input -> output" with (a, b) coefficient
                // pairs meaning a + b*sqrt2
                let mut entries: BTreeMap<String, (String, String)> = BTreeMap::new();
                for input in &indices {
                    for (output, c) in apply_pi(&h, input).iter() {
                        entries.insert(
                            format!("{input} -> {output}"),
                            (c.rational_part().to_string(), c.sqrt2_part().to_string()),
                        );
                    }
                }
                let json = serde_json::to_string_pretty(&entries)?;
                match out {
                    Some(p) => {
                        fs::write(&p, json).with_context(|| format!("writing {}", p.display()))?;
                        eprintln!("wrote {}", p.display());
                    }
                    None => println!("{json}"),
                }
            }
        },
        Command::GammaS {
            action,
            nmax,
            depth,
            samples,
            seed,
            output,
        } => {
            let gs = build_gamma_s(nmax, depth);
            match action.as_deref() {
                None | Some("build") => {
                    let (dot, json) = graph_outputs(&gs.graph, "gamma_s");
                    emit(&output, "gamma-s.json", dot, json)?;
                }
                Some("doubling") => {
                    let report =
                        gamma_s_doubling_witness(&gs, samples, seed).map_err(|e| anyhow!("{e}"))?;
                    println!("{}", report.to_json());
                    if !report.passed {
                        return Ok(ExitCode::FAILURE);
                    }
                }
                Some("structure") => {
                    let report = check_structure(&gs);
                    println!("{}", report.to_json());
                    if !report.passed {
                        return Ok(ExitCode::FAILURE);
                    }
                }
                Some(other) => bail!("unknown gamma-s action {other:?} (build|structure|doubling)"),
            }
        }
        Command::Cheeger { graph, set } => {
            let g = graph_from_json(
                &fs::read_to_string(&graph)
                    .with_context(|| format!("reading {}", graph.display()))?,
            )
            .map_err(|e| anyhow!(e))?;
            let keys = read_key_array(&set)?;
            let ids = keys_to_ids(&g, &keys)?;
            let b = boundary(&g, &ids).map_err(|e| anyhow!("{e}"))?;
            let ratio = cheeger_ratio(&g, &ids).map_err(|e| anyhow!("{e}"))?;
            let boundary_keys: Vec<&String> = b.iter().map(|&v| g.vertex(v)).collect();
            println!("boundary size: {}", b.len());
            println!("boundary: {:?}", boundary_keys);
            println!("ratio: {ratio}");
        }
        Command::Doubling {
            graph,
            k,
            f_map,
            g_map,
            region,
            samples,
            seed,
        } => {
            let g = graph_from_json(
                &fs::read_to_string(&graph)
                    .with_context(|| format!("reading {}", graph.display()))?,
            )
            .map_err(|e| anyhow!(e))?;
            let read_map = |path: &PathBuf| -> Result<BTreeMap<usize, usize>> {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let raw: BTreeMap<String, String> = serde_json::from_str(&text)?;
                raw.iter()
                    .map(|(a, b)| {
                        let from = g
                            .vertex_id(a)
                            .ok_or_else(|| anyhow!("vertex {a:?} is not in the graph"))?;
                        let to = g
                            .vertex_id(b)
                            .ok_or_else(|| anyhow!("vertex {b:?} is not in the graph"))?;
                        Ok((from, to))
                    })
                    .collect()
            };
            let f = read_map(&f_map)?;
            let gm = read_map(&g_map)?;
            let region_ids = match region {
                Some(path) => keys_to_ids(&g, &read_key_array(&path)?)?,
                None => f.keys().copied().collect(),
            };
            let report = doubling_check(&g, k, &f, &gm, &region_ids, samples, seed)
                .map_err(|e| anyhow!("{e}"))?;
            println!("{}", report.to_json());
            if !report.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::VerifyAll { seed, out } => {
            return verify_all(seed, out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The report operations `verify-all` runs; kept in lockstep with the
/// library registry by a test.
const VERIFY_ALL_OPS: &[&str] = &[
    "verify-dyadic-structure",
    "verify-action-equations",
    "verify-exceptional-tables",
    "gamma-p-boundary-test",
    "gamma-s-structure",
    "gamma-s-doubling-witness",
    "doubling-check",
];

/// Desk-scale parameters for `verify-all`: every report-producing operation
/// in the library runs once, in seconds, with reproducible sampling.
fn verify_all(seed: u64, out: Option<PathBuf>) -> Result<ExitCode> {
    let mut reports: Vec<Report> = Vec::new();

    let dyadic_graph = dyadic_orbit_graph(&Dyadic::half(), Truncation::Depth(12));
    reports.push(verify_dyadic_structure(&dyadic_graph, 10));
    reports.push(verify_action_equations(6));
    reports.push(verify_exceptional_tables());
    reports.push(gamma_p_boundary_test(25, 4, seed));

    let gs = build_gamma_s(5, 8);
    reports.push(check_structure(&gs));
    reports.push(gamma_s_doubling_witness(&gs, 50, seed).map_err(|e| anyhow!("{e}"))?);

    // standalone doubling check on the same witness data
    let region = gs.witness_region();
    let (mut f_img, mut g_img) = (BTreeMap::new(), BTreeMap::new());
    for &v in &region {
        let base = gs.forest(v).add_caret(1);
        f_img.insert(v, gs.id_of(&base.add_caret(0)).expect("margin"));
        g_img.insert(v, gs.id_of(&base.add_caret(1)).expect("margin"));
    }
    reports.push(
        doubling_check(&gs.graph, 2, &f_img, &g_img, &region, 25, seed)
            .map_err(|e| anyhow!("{e}"))?,
    );

    reports.sort_by(|a, b| a.op.cmp(&b.op));
    let passed = reports.iter().all(|r| r.passed);
    let covered: BTreeSet<&str> = reports.iter().map(|r| r.op.as_str()).collect();
    let planned: BTreeSet<&str> = VERIFY_ALL_OPS.iter().copied().collect();
    if covered != planned {
        bail!("verify-all ran {covered:?} but plans {planned:?}");
    }
    for op in REPORT_OPS {
        if !covered.contains(op) {
            bail!("verify-all does not cover the registered report op {op:?}");
        }
    }
    let summary = serde_json::json!({
        "passed": passed,
        "seed": seed,
        "reports": reports,
    });
    let text = serde_json::to_string_pretty(&summary)?;
    match out {
        Some(p) => {
            fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => println!("{text}"),
    }
    for r in &reports {
        eprintln!(
            "{}: {} ({} checks)",
            r.op,
            if r.passed { "pass" } else { "FAIL" },
            r.items.len()
        );
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn verify_all_covers_every_registered_report_op() {
        let planned: BTreeSet<&str> = VERIFY_ALL_OPS.iter().copied().collect();
        let registered: BTreeSet<&str> = REPORT_OPS.iter().copied().collect();
        assert_eq!(planned, registered);
    }
}
