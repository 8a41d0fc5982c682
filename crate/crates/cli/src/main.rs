use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mrcsp::bench::{append_csv, parse_problem, run_suite, summary, write_csv, BenchRow, ConfigSpec, SuiteSpec};
use mrcsp::generate::{generate_graph, generate_instance, GraphFamily};
use mrcsp::io::AnyInstance;
use mrcsp::oracle::{oracle_solve_any, DEFAULT_PATH_CAP};
use mrcsp::pipeline::run_any;

#[derive(Parser)]
#[command(name = "mrcsp", version, about = "Resource constrained shortest paths over lattice ordered monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Generate(GenerateArgs),
    /// Preprocess and solve an instance file.
    Solve(SolveArgs),
    /// Run a TOML benchmark suite and write CSV.
    Bench(BenchArgs),
    /// Solve a small instance by exhaustive path enumeration.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    Rand,
    Acyc,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemKind {
    Rcsp,
    Cvar,
    Probcon,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Grid layers.
    #[arg(long, default_value_t = 0)]
    layers: usize,
    /// Grid width.
    #[arg(long, default_value_t = 0)]
    width: usize,
    /// Vertex count (rand, acyc).
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Arc count (rand, acyc).
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// DIMACS graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    origin: Option<usize>,
    #[arg(long)]
    destination: Option<usize>,
    #[arg(long, value_enum, default_value = "rcsp")]
    problem: ProblemKind,
    /// Number of resource constraints.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long, default_value_t = 0.2)]
    tau_quantile: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "cor", value_parser = ["astar", "cor", "dom"])]
    algo: String,
    /// Bound source for the lower bound test.
    #[arg(long, value_parser = ["none", "low", "con", "clu"])]
    test: Option<String>,
    #[arg(long, value_parser = ["with-bound", "cost-only"])]
    key: Option<String>,
    #[arg(long)]
    candidate_paths: bool,
    /// Buckets per vertex for conditional and clustered bounds.
    #[arg(long, default_value_t = 16)]
    kappa: usize,
    /// Frontier cap; 1e5 for vector, 1e4 for distribution instances by default.
    #[arg(long)]
    max_frontier: Option<usize>,
    /// Append a result row to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    suite: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override the suite's worker thread count.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    /// Maximum number of elementary paths to enumerate.
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    path_cap: usize,
}

enum Failure {
    Usage(String),
    Io(String),
    Run(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Run(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Run(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn read_instance(path: &Path) -> Result<AnyInstance, Failure> {
    AnyInstance::read_file(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn generate(a: GenerateArgs) -> Result<(), Failure> {
    let family = match a.family {
        Family::Grid => GraphFamily::Grid {
            layers: a.layers,
            width: a.width,
        },
        Family::Rand => GraphFamily::Random { n: a.n, m: a.m },
        Family::Acyc => GraphFamily::Acyclic { n: a.n, m: a.m },
        Family::Dimacs => GraphFamily::Dimacs {
            path: a
                .graph
                .ok_or_else(|| Failure::Usage("--family dimacs needs --graph <file>".into()))?,
            origin: a.origin,
            destination: a.destination,
        },
    };
    let problem = match a.problem {
        ProblemKind::Rcsp => "rcsp",
        ProblemKind::Cvar => "cvar",
        ProblemKind::Probcon => "probcon",
    };
    let problem = parse_problem(problem, a.k, a.lambda, a.beta, a.tau_quantile).map_err(Failure::Usage)?;
    let classify = |e: mrcsp::generate::GenerateError| match e {
        mrcsp::generate::GenerateError::Io(_) | mrcsp::generate::GenerateError::Graph(mrcsp::graph::GraphError::Parse { .. }) => {
            Failure::Io(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    };
    let base = generate_graph(&family, a.seed).map_err(classify)?;
    let inst = generate_instance(&base, problem, a.seed).map_err(classify)?;
    match a.out {
        Some(path) => inst
            .write_file(&path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", inst.to_text());
            Ok(())
        }
    }
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.instance)?;
    let spec = ConfigSpec {
        algo: a.algo,
        test: a.test,
        key: a.key,
        candidate_paths: a.candidate_paths,
        kappa: a.kappa,
        max_frontier: a.max_frontier,
    };
    let options = spec.to_options(&inst).map_err(Failure::Usage)?;
    let report = run_any(&inst, &options).map_err(|e| Failure::Run(e.to_string()))?;
    let s = &report.solve;
    println!("problem {}", inst.problem_name());
    println!("algorithm {}", options.config.tag());
    println!("status {}", s.status.as_str());
    println!("cost {}", s.upper_bound);
    println!("lower_bound {}", s.lower_bound);
    println!("gap {}", s.gap);
    if let Some(p) = &s.path {
        let v: Vec<String> = p.vertices(inst.graph()).iter().map(usize::to_string).collect();
        println!("path {}", v.join(" "));
    }
    println!("extended {}", s.extended);
    println!("cut {} (low {}, dom {})", s.cut, s.cut_by_low, s.cut_by_dom);
    if let Some(g) = report.gamma {
        println!("gamma {g:.3}");
    }
    let (fb, fc) = report.preprocessing_fractions();
    println!("preprocessing {:.1}% bounds, {:.1}% candidates", 100.0 * fb, 100.0 * fc);
    println!("seconds {:.6}", report.total_seconds());
    if let Some(path) = a.csv {
        let name = a.instance.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
        let row = BenchRow::from_run(&name, Some(&inst), &options.config, Some(&report));
        append_csv(&path, &[row]).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<(), Failure> {
    let mut spec = SuiteSpec::read(&a.suite).map_err(|e| match e {
        mrcsp::bench::BenchError::Io(_) | mrcsp::bench::BenchError::Toml(_) => {
            Failure::Io(format!("{}: {e}", a.suite.display()))
        }
        _ => Failure::Usage(e.to_string()),
    })?;
    if a.threads.is_some() {
        spec.threads = a.threads;
    }
    let dir = a.suite.parent().unwrap_or(Path::new("."));
    let (rows, errors) = run_suite(&spec, dir);
    for e in &errors {
        eprintln!("run failed: {e}");
    }
    let io = |e: mrcsp::bench::BenchError| Failure::Io(e.to_string());
    match &a.csv {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            write_csv(&rows, file).map_err(io)?;
        }
        None => write_csv(&rows, std::io::stdout().lock()).map_err(io)?,
    }
    eprintln!("{}", summary(&rows));
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.instance)?;
    match oracle_solve_any(&inst, a.path_cap).map_err(|e| Failure::Run(e.to_string()))? {
        Some((cost, path)) => {
            let v: Vec<String> = path.vertices(inst.graph()).iter().map(usize::to_string).collect();
            println!("optimal {cost}");
            println!("path {}", v.join(" "));
        }
        None => println!("infeasible"),
    }
    Ok(())
}
