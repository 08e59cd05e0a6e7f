use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperdiffusion::diffusion::{diffuse, MinNormOptions};
use hyperdiffusion::experiments::{
    bench_manifold, bench_resolvent, random_hypergraph, trial_rng, BenchConfig, ManifoldConfig, ManifoldKind,
};
use hyperdiffusion::hypergraph::{bipartite_to_hypergraph, knn_graph, knn_hypergraph};
use hyperdiffusion::io;
use hyperdiffusion::partition::{local_partition_with, sweep_cut};
use hyperdiffusion::resolvent::{ppr_with, resolvent_solve, OracleChoice, PprOptions, ProxChoice, ResolventProblem};
use hyperdiffusion::{CliqueScaling, EdgeNorm, Error, Hypergraph, PotentialModel, Result};

/// Heat diffusion, resolvents and local partitioning on hypergraphs.
#[derive(Parser)]
#[command(name = "hyperdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bipartite edge list to hypergraph file.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Drop right nodes with more neighbours than this.
        #[arg(long)]
        max_edge_size: Option<usize>,
    },
    /// Clique expansion of a hypergraph file.
    Clique {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Scaling::Unit)]
        scaling: Scaling,
    },
    /// k-nearest-neighbour hypergraph (or graph) of a point CSV.
    Knn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Emit the k-NN graph instead of the hypergraph.
        #[arg(long)]
        graph: bool,
    },
    /// Discrete-time heat diffusion.
    Diffuse {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolvent problem `U(x) + lambda/2 ||x||_D^2 - <s, x>`.
    Resolvent {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Personalized PageRank.
    Ppr {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Local partition around a vertex, or a sweep cut of a given vector.
    Partition {
        #[command(flatten)]
        model: ModelArgs,
        /// Seed vertex for the diffusion.
        #[arg(long, conflicts_with = "vector")]
        vertex: Option<usize>,
        /// Sweep this vector directly.
        #[arg(long)]
        vector: Option<PathBuf>,
        /// Target conductance.
        #[arg(long, default_value_t = 0.1)]
        phi: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Averaged output versus last iterate over random vertex seeds.
    BenchResolvent {
        #[arg(long, conflicts_with = "random_vertices")]
        hypergraph: Option<PathBuf>,
        /// Generate a random connected hypergraph with this many vertices.
        #[arg(long)]
        random_vertices: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        random_edges: usize,
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
        #[arg(long, default_value = "linf")]
        norm: String,
        #[arg(long, default_value_t = 0.12)]
        lambda: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long, default_value_t = 20)]
        seeds: usize,
        #[arg(long, value_enum, default_value_t = Prox::Degree)]
        prox: Prox,
        #[arg(long, value_enum, default_value_t = Oracle::Any)]
        oracle: Oracle,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Graph versus hypergraph diffusion for semi-supervised labelling.
    BenchManifold {
        #[arg(long, default_value = "two-spirals")]
        generator: String,
        #[arg(long, default_value_t = 300)]
        per_community: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 30)]
        revealed: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Comma-separated step counts.
        #[arg(long, default_value = "30", value_delimiter = ',')]
        steps: Vec<usize>,
        #[arg(long, default_value = "linf")]
        norm: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    /// linf, l2 or lovasz:<cut function file>.
    #[arg(long, default_value = "linf")]
    norm: String,
}

#[derive(Args)]
struct StartArgs {
    /// Start from (or seed at) the indicator of this vertex.
    #[arg(long, conflicts_with = "seed_file")]
    seed_vertex: Option<usize>,
    /// Vector file: one value per line or `vertex,value` rows.
    #[arg(long)]
    seed_file: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Lower bound on the Poincaré constant.
    #[arg(long)]
    lambda_lower: Option<f64>,
    /// Override the iteration budget.
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    early_stop: bool,
    #[arg(long, value_enum, default_value_t = Prox::Degree)]
    prox: Prox,
    #[arg(long, value_enum, default_value_t = Oracle::Any)]
    oracle: Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    Unit,
    Degree,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prox {
    Degree,
    Clique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Any,
    Minnorm,
}

impl From<Prox> for ProxChoice {
    fn from(p: Prox) -> Self {
        match p {
            Prox::Degree => ProxChoice::Degree,
            Prox::Clique => ProxChoice::Clique,
        }
    }
}

impl From<Oracle> for OracleChoice {
    fn from(o: Oracle) -> Self {
        match o {
            Oracle::Any => OracleChoice::Any,
            Oracle::Minnorm => OracleChoice::MinNorm,
        }
    }
}

fn parse_norm(spec: &str) -> Result<EdgeNorm> {
    match spec {
        "linf" => Ok(EdgeNorm::LInf),
        "l2" => Ok(EdgeNorm::L2),
        other => match other.strip_prefix("lovasz:") {
            Some(path) => Ok(EdgeNorm::lovasz(io::read_cut_function_file(Path::new(path))?)),
            None => Err(Error::InvalidParameter(format!(
                "unknown norm '{other}' (expected linf, l2 or lovasz:<file>)"
            ))),
        },
    }
}

fn load_model(args: &ModelArgs) -> Result<PotentialModel> {
    let graph = io::read_hypergraph_file(&args.hypergraph)?;
    PotentialModel::uniform(graph, parse_norm(&args.norm)?)
}

fn start_vector(args: &StartArgs, n: usize) -> Result<Vec<f64>> {
    match (&args.seed_vertex, &args.seed_file) {
        (Some(v), _) => {
            if *v >= n {
                return Err(Error::VertexOutOfRange { vertex: *v, n });
            }
            let mut x = vec![0.0; n];
            x[*v] = 1.0;
            Ok(x)
        }
        (None, Some(path)) => io::read_vector_file(path, n),
        (None, None) => Err(Error::InvalidParameter("give --seed-vertex or --seed-file".into())),
    }
}

fn prepare(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

fn write_meta(dir: &Path, entries: &[(&str, String)]) -> Result<()> {
    io::write_file(&dir.join("meta.txt"), |w| io::write_metadata(w, entries))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Convert {
            input,
            output,
            max_edge_size,
        } => {
            let edges = io::read_bipartite_file(&input)?;
            let conv = bipartite_to_hypergraph(edges.num_left, &edges.right_adjacency, max_edge_size)?;
            io::write_hypergraph_file(&output, &conv.hypergraph)?;
            eprintln!(
                "{} vertices, {} hyperedges ({} degenerate and {} oversize right nodes skipped)",
                conv.hypergraph.num_vertices(),
                conv.hypergraph.num_edges(),
                conv.skipped_degenerate,
                conv.skipped_oversize
            );
        }
        Command::Clique { input, output, scaling } => {
            let graph = io::read_hypergraph_file(&input)?;
            let scaling = match scaling {
                Scaling::Unit => CliqueScaling::Unit,
                Scaling::Degree => CliqueScaling::DegreePreserving,
            };
            io::write_hypergraph_file(&output, &graph.clique_expansion(scaling))?;
        }
        Command::Knn { input, output, k, graph } => {
            let points = io::read_points_file(&input)?;
            let built = if graph { knn_graph(&points, k)? } else { knn_hypergraph(&points, k)? };
            io::write_hypergraph_file(&output, &built)?;
        }
        Command::Diffuse {
            model,
            start,
            steps,
            tol,
            out,
        } => {
            let m = load_model(&model)?;
            if !m.graph().connected() {
                eprintln!("warning: hypergraph is disconnected; heat stays within components");
            }
            let x0 = start_vector(&start, m.num_vertices())?;
            prepare(&out)?;
            let (trace, failure) = match diffuse(&m, &x0, steps, &MinNormOptions::with_tol(tol)) {
                Ok(t) => (t, None),
                Err(f) => (f.trace, Some(f.error)),
            };
            io::write_file(&out.join("trace.csv"), |w| io::write_trace(w, &trace))?;
            io::write_file(&out.join("iterates.csv"), |w| io::write_iterates(w, &trace))?;
            io::write_file(&out.join("final.csv"), |w| io::write_vector(w, trace.last()))?;
            write_meta(
                &out,
                &[
                    ("command", "diffuse".into()),
                    ("norm", model.norm.clone()),
                    ("steps", trace.steps().to_string()),
                    ("tol", tol.to_string()),
                    ("pi0", trace.pi0.to_string()),
                ],
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
        }
        Command::Resolvent {
            model,
            start,
            lambda,
            solver,
            out,
        } => {
            let m = load_model(&model)?;
            let s = start_vector(&start, m.num_vertices())?;
            let mut problem = ResolventProblem::new(&m, lambda, &s, solver.epsilon)?;
            problem.lambda_lower = solver.lambda_lower;
            problem.iterations = solver.iterations;
            problem.early_stop = solver.early_stop;
            problem.prox = solver.prox.into();
            problem.oracle = solver.oracle.into();
            problem.history = true;
            if solver.lambda_lower.is_none() && solver.iterations.is_none() {
                eprintln!("note: iteration budget uses the heuristic Poincaré lower bound");
            }
            let sol = resolvent_solve(&problem)?;
            prepare(&out)?;
            io::write_file(&out.join("solution.csv"), |w| io::write_vector(w, &sol.x))?;
            io::write_file(&out.join("objective.csv"), |w| io::write_objective(w, &sol.history))?;
            write_meta(
                &out,
                &[
                    ("command", "resolvent".into()),
                    ("norm", model.norm.clone()),
                    ("lambda", lambda.to_string()),
                    ("epsilon", solver.epsilon.to_string()),
                    ("iterations", sol.iterations.to_string()),
                    ("eta", sol.eta.to_string()),
                    ("lower", sol.lower.map_or("unused".into(), |l| l.to_string())),
                    ("upper", sol.upper.to_string()),
                    ("prox", problem.prox.to_string()),
                    ("oracle", problem.oracle.to_string()),
                    ("stopped_early", sol.stopped_early.to_string()),
                    ("objective", sol.objective.to_string()),
                ],
            )?;
        }
        Command::Ppr {
            model,
            start,
            alpha,
            solver,
            out,
        } => {
            let m = load_model(&model)?;
            let s = start_vector(&start, m.num_vertices())?;
            let options = PprOptions {
                lambda_lower: solver.lambda_lower,
                iterations: solver.iterations,
                oracle: solver.oracle.into(),
                prox: solver.prox.into(),
            };
            let r = ppr_with(&m, alpha, &s, solver.epsilon, &options)?;
            prepare(&out)?;
            io::write_file(&out.join("solution.csv"), |w| io::write_vector(w, &r.p))?;
            io::write_file(&out.join("residual.csv"), |w| io::write_vector(w, &r.residual.residual))?;
            io::write_file(&out.join("certificate.csv"), |w| {
                io::write_certificate(w, m.graph(), &r.residual.certificate)
            })?;
            write_meta(
                &out,
                &[
                    ("command", "ppr".into()),
                    ("norm", model.norm.clone()),
                    ("alpha", alpha.to_string()),
                    ("epsilon", solver.epsilon.to_string()),
                    ("iterations", r.solution.iterations.to_string()),
                    ("eta", r.solution.eta.to_string()),
                    ("prox", options.prox.to_string()),
                    ("oracle", options.oracle.to_string()),
                    ("residual_norm", r.residual.norm.to_string()),
                ],
            )?;
        }
        Command::Partition {
            model,
            vertex,
            vector,
            phi,
            tol,
            out,
        } => {
            let m = load_model(&model)?;
            let (sweep, extra) = match (vertex, vector) {
                (Some(v), _) => {
                    let lp = local_partition_with(&m, v, phi, &MinNormOptions::with_tol(tol))?;
                    let extra = vec![("steps", lp.steps.to_string()), ("t_star", lp.t_star.to_string())];
                    (lp.sweep, extra)
                }
                (None, Some(path)) => {
                    let x = io::read_vector_file(&path, m.num_vertices())?;
                    (sweep_cut(m.graph(), &x)?, Vec::new())
                }
                (None, None) => return Err(Error::InvalidParameter("give --vertex or --vector".into())),
            };
            prepare(&out)?;
            io::write_file(&out.join("profile.csv"), |w| io::write_sweep_profile(w, &sweep))?;
            io::write_file(&out.join("cut.txt"), |w| {
                for v in &sweep.set {
                    writeln!(w, "{v}")?;
                }
                Ok(())
            })?;
            let mut meta = vec![
                ("command", "partition".to_string()),
                ("norm", model.norm.clone()),
                ("phi_target", phi.to_string()),
                ("conductance", sweep.conductance.to_string()),
                ("cut_size", sweep.set.len().to_string()),
            ];
            meta.extend(extra);
            write_meta(&out, &meta)?;
            println!("{}", sweep.conductance);
        }
        Command::BenchResolvent {
            hypergraph,
            random_vertices,
            random_edges,
            max_rank,
            norm,
            lambda,
            epsilon,
            iterations,
            seeds,
            prox,
            oracle,
            seed,
            out,
        } => {
            let (graph, source): (Hypergraph, String) = match (hypergraph, random_vertices) {
                (Some(path), _) => (io::read_hypergraph_file(&path)?, path.display().to_string()),
                (None, Some(n)) => (
                    random_hypergraph(n, random_edges, max_rank, &mut trial_rng(seed, u64::MAX))?,
                    format!("random n={n} m={random_edges} max_rank={max_rank}"),
                ),
                (None, None) => {
                    return Err(Error::InvalidParameter("give --hypergraph or --random-vertices".into()))
                }
            };
            let m = PotentialModel::uniform(graph, parse_norm(&norm)?)?;
            let config = BenchConfig {
                lambda,
                epsilon,
                iterations,
                seeds,
                seed,
                prox: prox.into(),
                oracle: oracle.into(),
                ..BenchConfig::default()
            };
            let report = bench_resolvent(&m, &config)?;
            prepare(&out)?;
            io::write_file(&out.join("report.csv"), |w| report.write_csv(w))?;
            io::write_file(&out.join("timing.csv"), |w| report.write_timing_csv(w))?;
            let mut meta = config.entries();
            meta.push(("hypergraph", source));
            meta.push(("norm", norm));
            meta.push(("median_improvement", report.median_improvement().to_string()));
            write_meta(&out, &meta)?;
            for r in report.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("seed {} failed: {}", r.index, r.error.as_deref().unwrap_or(""));
            }
        }
        Command::BenchManifold {
            generator,
            per_community,
            k,
            revealed,
            trials,
            steps,
            norm,
            tol,
            seed,
            out,
        } => {
            let config = ManifoldConfig {
                kind: generator.parse::<ManifoldKind>()?,
                per_community,
                k,
                revealed,
                trials,
                steps: steps.clone(),
                norm: parse_norm(&norm)?,
                tol,
                seed,
            };
            let report = bench_manifold(&config)?;
            prepare(&out)?;
            io::write_file(&out.join("report.csv"), |w| report.write_csv(w))?;
            io::write_file(&out.join("summary.csv"), |w| report.write_summary(w, &steps))?;
            write_meta(&out, &config.entries())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
