use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cuttree::expander::{decompose_with, parse_phi, DecomposeOptions};
use cuttree::harness::{gen_clustered, gen_erdos_renyi, gen_star_of_triples, gen_two_star_hard, WeightProfile};
use cuttree::io::{parse_edge_list, parse_tree, write_edge_list, write_tree};
use cuttree::subcubic::build_tree_metered;
use cuttree::{gomory_hu, verify_tree, AlgoParams, CapGraph, GHTree, Meter, PathMinIndex, Profile};

#[derive(Parser)]
#[command(name = "cuttree", version, about = "Exact cut-equivalent (Gomory-Hu) trees")]
struct Cli {
    /// Worker threads (falls back to CUTTREE_THREADS, then 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph in edge-list format.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Build a cut-equivalent tree.
    Build {
        #[arg(long, value_enum, default_value_t = Algo::Subcubic)]
        algo: Algo,
        #[arg(long, value_enum, default_value_t = ProfileArg::Bound1)]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        gamma: u32,
        /// Skip the repair pass (the tree may then be wrong).
        #[arg(long)]
        no_repair: bool,
        /// Write the instrumentation report here as key=value lines.
        #[arg(long)]
        report: Option<PathBuf>,
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimum cut value between two nodes.
    Query { tree: PathBuf, u: usize, v: usize },
    /// The full value matrix.
    Allpairs { tree: PathBuf },
    /// Check every tree edge against a max-flow.
    Verify { graph: PathBuf, tree: PathBuf },
    /// Expander decomposition of a graph.
    Decompose {
        /// Conductance target, as `0.2` or `1/5`.
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        graph: PathBuf,
    },
    /// Flow-call counts and wall times on random graphs, as CSV.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "classic,subcubic")]
        algos: Vec<Algo>,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        seeds: Vec<u64>,
        /// Edge probability of the Erdős–Rényi graphs.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Connected Erdős–Rényi graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dense blocks joined by a few edges.
    Clustered {
        #[arg(long)]
        clusters: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0.7)]
        p_in: f64,
        #[arg(long, default_value_t = 2)]
        links: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Star of triples; the expected tree goes to `<output>.expected`.
    Triples {
        #[arg(long)]
        n_triples: usize,
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Two stars joined by a weight-`w` edge; the structure goes to
    /// `<output>.expected`.
    TwoStar {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Classic,
    Gusfield,
    Subcubic,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Classic => "classic",
            Algo::Gusfield => "gusfield",
            Algo::Subcubic => "subcubic",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Bound1,
    Bound2,
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<cuttree::Error> for Failure {
    fn from(e: cuttree::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<CapGraph, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<GHTree, Failure> {
    parse_tree(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Outcome {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sidecar(output: &Option<PathBuf>, text: &str) -> Outcome {
    match output {
        Some(p) => {
            let mut s = p.clone().into_os_string();
            s.push(".expected");
            write(Path::new(&s), text)
        }
        None => Ok(()),
    }
}

fn build(
    g: &CapGraph,
    algo: Algo,
    params: &AlgoParams,
    meter: &Meter,
) -> Result<(GHTree, Option<cuttree::BuildReport>), Failure> {
    Ok(match algo {
        Algo::Classic => (gomory_hu::gomory_hu_classic_metered(g, meter)?, None),
        Algo::Gusfield => (gomory_hu::gusfield_metered(g, meter)?, None),
        Algo::Subcubic => {
            let (t, r) = build_tree_metered(g, params, meter)?;
            (t, Some(r))
        }
    })
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Gen { family } => match family {
            Family::Er { n, p, seed, output } => emit(&output, &write_edge_list(&gen_erdos_renyi(n, p, seed)?)),
            Family::Clustered {
                clusters,
                size,
                p_in,
                links,
                seed,
                output,
            } => emit(
                &output,
                &write_edge_list(&gen_clustered(clusters, size, p_in, links, seed)?),
            ),
            Family::Triples {
                n_triples,
                weighted,
                seed,
                output,
            } => {
                let profile = if weighted {
                    WeightProfile::Weighted
                } else {
                    WeightProfile::Unit
                };
                let (g, s) = gen_star_of_triples(n_triples, profile, seed)?;
                emit(&output, &write_edge_list(&g))?;
                sidecar(&output, &write_tree(&s.tree))
            }
            Family::TwoStar { n, w, seed, output } => {
                let (g, s) = gen_two_star_hard(n, w, seed)?;
                emit(&output, &write_edge_list(&g))?;
                let left: Vec<String> = s.left.iter().map(|v| v.to_string()).collect();
                sidecar(
                    &output,
                    &format!(
                        "c_left {}\nc_right {}\nlambda {}\nleft {}\n",
                        s.c_left,
                        s.c_right,
                        s.lambda,
                        left.join(" ")
                    ),
                )
            }
        },
        Cmd::Build {
            algo,
            profile,
            seed,
            gamma,
            no_repair,
            report,
            input,
            output,
        } => {
            let g = load_graph(&input)?;
            let params = AlgoParams {
                gamma,
                profile: match profile {
                    ProfileArg::Bound1 => Profile::Bound1,
                    ProfileArg::Bound2 => Profile::Bound2,
                },
                repair: !no_repair,
                seed,
                ..Default::default()
            };
            let (t, rep) = build(&g, algo, &params, &Meter::new())?;
            write(&output, &write_tree(&t))?;
            if let (Some(path), Some(rep)) = (report, rep) {
                write(&path, &rep.to_string())?;
            }
            Ok(())
        }
        Cmd::Query { tree, u, v } => {
            let t = load_tree(&tree)?;
            println!("{}", PathMinIndex::new(&t).query(u, v)?);
            Ok(())
        }
        Cmd::Allpairs { tree } => {
            let t = load_tree(&tree)?;
            let mut out = String::new();
            for row in t.value_matrix() {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
            print!("{out}");
            Ok(())
        }
        Cmd::Verify { graph, tree } => {
            let g = load_graph(&graph)?;
            let t = load_tree(&tree)?;
            let verdict = verify_tree(&g, &t)?;
            if verdict.accepted() {
                println!("ok");
                return Ok(());
            }
            let mut msg = String::new();
            for f in &verdict.failures {
                let lambda = f.lambda.map_or(format!("> {}", f.weight), |l| l.to_string());
                writeln!(
                    msg,
                    "edge ({}, {}) weight {}: bipartition {}, flow {}",
                    f.u, f.v, f.weight, f.bipartition, lambda
                )
                .unwrap();
            }
            Err(Failure::Verification(msg))
        }
        Cmd::Decompose { phi, seed, graph } => {
            let phi = parse_phi(&phi).ok_or_else(|| Failure::Input(format!("invalid phi `{phi}`")))?;
            let g = load_graph(&graph)?;
            let d = decompose_with(
                &g,
                phi,
                &DecomposeOptions {
                    seed,
                    ..Default::default()
                },
            )?;
            let mut out = format!("# clusters {} crossing_edges {}\n", d.clusters.len(), d.crossing_edges);
            for c in &d.clusters {
                let cells: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
            print!("{out}");
            Ok(())
        }
        Cmd::Bench {
            algos,
            sizes,
            seeds,
            density,
        } => {
            println!("algo,n,m,seed,flow_calls,repair_calls,depth,wall_ms");
            for &n in &sizes {
                for &seed in &seeds {
                    let g = gen_erdos_renyi(n, density, seed)?;
                    for &algo in &algos {
                        let meter = Meter::new();
                        let params = AlgoParams {
                            seed,
                            ..Default::default()
                        };
                        let start = Instant::now();
                        let (_, rep) = build(&g, algo, &params, &meter)?;
                        let ms = start.elapsed().as_millis();
                        let (repair, depth) = rep.map_or((0, 0), |r| (r.flow_calls_repair, r.recursion_depth));
                        println!(
                            "{},{},{},{},{},{},{},{}",
                            algo.name(),
                            g.n(),
                            g.m(),
                            seed,
                            meter.snapshot().flow_calls,
                            repair,
                            depth,
                            ms
                        );
                    }
                }
            }
            Ok(())
        }
    }
}

fn threads(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(t) = flag {
        return Ok(t.max(1));
    }
    match std::env::var("CUTTREE_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(|t| t.max(1))
            .map_err(|_| Failure::Input(format!("CUTTREE_THREADS: invalid value `{s}`"))),
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads(cli.threads).and_then(|t| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
        run(cli.cmd)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprint!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
