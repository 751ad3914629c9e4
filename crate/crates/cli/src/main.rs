use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spcube::constructions::{
    density_lower_bound, edge_density_lower_bound, f2_edge_set, f2_vertex_set, mean_edge_density, mean_vertex_density,
};
use spcube::embeddings::{
    contains_pattern, density_t, ex_cube, ex_cube_exhaustive, ex_layer, ex_layer_exhaustive, CubeMode, Extremal,
};
use spcube::operators::{duplicate, Duplication};
use spcube::patterns::{
    dual_pattern, h_graph, named_pattern, phi, product_join, psi, x_pattern, y_pattern, NamedSpec, PatternGraph,
};
use spcube::search::{
    m_table_with, max_spanning_trees_with, rows_to_csv, rows_to_markdown, witness_chain, TableRow, MAX_TREE_SEARCH,
};
use spcube::{verify, Error, Exec, Multigraph, Pattern};

/// Spanning-tree patterns of series-parallel graphs in the hypercube.
#[derive(Parser)]
#[command(name = "spcube", version)]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pattern from a graph or by name.
    #[command(subcommand)]
    Pattern(PatternCmd),
    /// Apply an operator to a pattern.
    #[command(subcommand)]
    Op(OpCmd),
    /// Exact density t(small, big) as num/den.
    Density {
        #[arg(long)]
        small: PathBuf,
        #[arg(long)]
        big: PathBuf,
    },
    /// Whether `big` contains a copy of `small`, with the first witness map.
    Contains {
        #[arg(long)]
        small: PathBuf,
        #[arg(long)]
        big: PathBuf,
    },
    /// Largest subset of a layer avoiding a pattern.
    ExLayer {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        pattern: PathBuf,
        /// Use the plain exhaustive search (small layers only).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Largest subset of a cube avoiding a pattern.
    ExCube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum, default_value = "face")]
        mode: ModeArg,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Random GF(2) construction of a set in a layer.
    F2 {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "vertex")]
        mode: KindArg,
        /// Trials for the mean density, with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Reproduce the extremal tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Run every invariant suite.
    Verify {
        /// Larger parameters, as used for the reference runs.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// JSON graph file, or inline JSON.
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct MarkedArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// 1-based distinguished edge; defaults to the one in the file.
    #[arg(long)]
    edge: Option<usize>,
}

#[derive(Subcommand)]
enum PatternCmd {
    /// Spanning trees X(G).
    X(GraphArgs),
    /// Edge pattern Y(G, e).
    Y(MarkedArgs),
    /// The bipartite graph H(G, e).
    H(MarkedArgs),
    /// A named pattern: alon:1,2 partite:2,2 x16 y18 x_k4 y_k4.
    Named {
        #[arg(long)]
        name: String,
    },
}

#[derive(Args)]
struct CoordArgs {
    #[arg(long)]
    pattern: PathBuf,
    /// 1-based coordinate.
    #[arg(long)]
    coord: usize,
}

#[derive(Subcommand)]
enum OpCmd {
    /// Duplication D at a coordinate.
    Dup(CoordArgs),
    /// Coduplication D' at a coordinate.
    Codup(CoordArgs),
    /// Swap 0 and 1.
    Dual {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Vertex pattern from an edge pattern.
    Phi {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Edge pattern from a vertex pattern, starring a coordinate.
    Psi(CoordArgs),
    /// Product-join of H(G1, e1) and H(G2, e2).
    ProductJoin {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        graph2: String,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// Maximum number of spanning trees.
    Fib {
        #[arg(long)]
        max_d: usize,
        /// Only evaluate the explicit witness chain (fast for large d).
        #[arg(long)]
        witness_only: bool,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
    /// Maximum edge-pattern size m(d).
    M {
        #[arg(long)]
        max_d: usize,
        #[arg(long, value_enum, default_value = "csv")]
        emit: Emit,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Oriented,
    Face,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Vertex,
    Edge,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Md,
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Res<T> = Result<T, Failure>;

fn read_text(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_pattern(path: &Path) -> Res<Pattern> {
    Ok(Pattern::from_file_string(&read_text(path)?)?)
}

fn read_graph(arg: &str) -> Res<Multigraph> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read_text(Path::new(arg))? };
    Ok(Multigraph::from_json(&text)?)
}

fn zero_based(i: usize, what: &str) -> Res<usize> {
    i.checked_sub(1).ok_or_else(|| Failure::Domain(Error::InvalidParameters(format!("{what} is 1-based"))))
}

fn marked(args: &MarkedArgs) -> Res<(Multigraph, usize)> {
    let g = read_graph(&args.graph.graph)?;
    let e = match args.edge {
        Some(e) => zero_based(e, "--edge")?,
        None => g.distinguished().ok_or(Error::NoDistinguishedEdge)?,
    };
    Ok((g, e))
}

fn pattern_graph_text(h: &PatternGraph) -> String {
    let mut s = format!("{}\n", h.summary());
    for &(l, u) in &h.edges {
        s.push_str(&format!("{} {}\n", h.lower[l], h.upper[u]));
    }
    s
}

fn extremal_report(r: &Extremal) -> Option<String> {
    Some(format!("ex = {}", r.value))
}

fn table_text(rows: &[TableRow], emit: Emit) -> String {
    match emit {
        Emit::Csv => rows_to_csv(rows),
        Emit::Md => rows_to_markdown(rows),
    }
}

/// Main output and an optional report for stderr (or stdout when `--out` is set).
fn run(cmd: Command, exec: Exec) -> Res<(String, Option<String>, bool)> {
    let done = |s: String| Ok((s, None, true));
    match cmd {
        Command::Pattern(p) => {
            match p {
                PatternCmd::X(g) => done(x_pattern(&read_graph(&g.graph)?)?.to_file_string()),
                PatternCmd::Y(m) => {
                    let (g, e) = marked(&m)?;
                    done(y_pattern(&g, e)?.to_file_string())
                }
                PatternCmd::H(m) => {
                    let (g, e) = marked(&m)?;
                    done(pattern_graph_text(&h_graph(&g, e)?))
                }
                PatternCmd::Named { name } => {
                    let named = named_pattern(&name.parse::<NamedSpec>()?)?;
                    let note = named
                    .extension
                    .then(|| format!("note: {name} comes from K4, which is not series-parallel; outside the series-parallel theory"));
                    Ok((named.pattern.to_file_string(), note, true))
                }
            }
        }
        Command::Op(op) => {
            let out = match op {
                OpCmd::Dup(c) => {
                    duplicate(&read_pattern(&c.pattern)?, zero_based(c.coord, "--coord")?, Duplication::D)?
                }
                OpCmd::Codup(c) => {
                    duplicate(&read_pattern(&c.pattern)?, zero_based(c.coord, "--coord")?, Duplication::DPrime)?
                }
                OpCmd::Dual { pattern } => dual_pattern(&read_pattern(&pattern)?),
                OpCmd::Phi { pattern } => phi(&read_pattern(&pattern)?)?,
                OpCmd::Psi(c) => psi(&read_pattern(&c.pattern)?, zero_based(c.coord, "--coord")?)?,
                OpCmd::ProductJoin { graph, graph2 } => {
                    let (g1, g2) = (read_graph(&graph)?, read_graph(&graph2)?);
                    let h1 = h_graph(&g1, g1.distinguished().ok_or(Error::NoDistinguishedEdge)?)?;
                    let h2 = h_graph(&g2, g2.distinguished().ok_or(Error::NoDistinguishedEdge)?)?;
                    return done(pattern_graph_text(&product_join(&h1, &h2)?));
                }
            };
            done(out.to_file_string())
        }
        Command::Density { small, big } => {
            let t = density_t(&read_pattern(&small)?, &read_pattern(&big)?)?;
            done(format!("{}/{}\n", t.numer(), t.denom()))
        }
        Command::Contains { small, big } => match contains_pattern(&read_pattern(&big)?, &read_pattern(&small)?)? {
            Some(map) => done(format!("contained via {map}\n")),
            None => done("not contained\n".into()),
        },
        Command::ExLayer { a, b, pattern, exhaustive } => {
            let x = read_pattern(&pattern)?;
            let r = if exhaustive { ex_layer_exhaustive(a, b, &x)? } else { ex_layer(a, b, &x)? };
            let witness = Pattern::new(x.kind(), a, b, r.witness.iter().cloned())?;
            Ok((witness.to_file_string(), extremal_report(&r), true))
        }
        Command::ExCube { n, pattern, mode, exhaustive } => {
            let x = read_pattern(&pattern)?;
            let mode = match mode {
                ModeArg::Oriented => CubeMode::Oriented,
                ModeArg::Face => CubeMode::Face,
            };
            let r = if exhaustive { ex_cube_exhaustive(n, &x, mode)? } else { ex_cube(n, &x, mode)? };
            let words: String = r.witness.iter().map(|w| format!("{w}\n")).collect();
            Ok((words, extremal_report(&r), true))
        }
        Command::F2 { a, b, seed, mode, trials } => {
            let (set, mean, bound) = match mode {
                KindArg::Vertex => {
                    (f2_vertex_set(a, b, seed)?, mean_vertex_density(a, b, seed, trials, exec)?, density_lower_bound(b))
                }
                KindArg::Edge => (
                    f2_edge_set(a, b, seed)?,
                    mean_edge_density(a, b, seed, trials, exec)?,
                    edge_density_lower_bound(b),
                ),
            };
            let layer = Pattern::full_layer(set.kind(), a, b)?.len();
            let report = format!(
                "size {} of {layer}; mean density over {trials} seeds from {seed}: {mean:.6}; bound {}/{}",
                set.len(),
                bound.numer(),
                bound.denom()
            );
            Ok((set.to_file_string(), Some(report), true))
        }
        Command::Table(t) => match t {
            TableCmd::Fib { max_d, witness_only, emit } => {
                let rows = if witness_only {
                    witness_chain(max_d)?
                } else {
                    if max_d > MAX_TREE_SEARCH {
                        return Err(Error::SizeGuard(format!(
                            "exhaustive search is limited to d <= {MAX_TREE_SEARCH}"
                        ))
                        .into());
                    }
                    (0..=max_d).map(|d| max_spanning_trees_with(d, exec)).collect::<Result<Vec<_>, _>>()?
                };
                done(table_text(&rows, emit))
            }
            TableCmd::M { max_d, emit } => done(table_text(&m_table_with(max_d, exec)?, emit)),
        },
        Command::Verify { full } => {
            let reports = verify::run_all(full, exec);
            let ok = reports.iter().all(|r| r.passed());
            let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
            for r in reports.iter().filter(|r| !r.passed()) {
                for v in r.violations.iter().take(5) {
                    s.push_str(&format!("  {}: {v}\n", r.name));
                }
            }
            Ok((s, None, ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    eprintln!("# {}", std::env::args().collect::<Vec<_>>().join(" "));
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let exec = if Exec::parallel_available() && cli.threads != Some(1) { Exec::Parallel } else { Exec::Sequential };
    match run(cli.command, exec) {
        Ok((main, report, ok)) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &main) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                    if let Some(r) = report {
                        println!("{r}");
                    }
                }
                None => {
                    print!("{main}");
                    if let Some(r) = report {
                        eprintln!("{r}");
                    }
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeGuard(_)) { 2 } else { 1 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
