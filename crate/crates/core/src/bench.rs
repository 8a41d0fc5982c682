//! Benchmark suites: TOML suite files, parallel runner and the
//! twelve-column CSV report.

use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{Algorithm, BoundKind, KeyKind, SolverConfig, Status};
use crate::generate::{generate_graph, generate_instance, GraphFamily, ProblemSpec};
use crate::io::AnyInstance;
use crate::pipeline::{default_frontier_cap, run_any, RunOptions, RunReport};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid suite: {0}")]
    Spec(String),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const CSV_HEADER: [&str; 12] = [
    "instance", "V", "A", "alg", "gamma", "preproc", "ext", "cut", "dom", "len", "gap", "cpu",
];

/// One run. Every field is already formatted; `-` marks a value that does
/// not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    #[serde(rename = "V")]
    pub vertices: String,
    #[serde(rename = "A")]
    pub arcs: String,
    pub alg: String,
    pub gamma: String,
    /// Percent of the total time in bound computation, then `+` candidate
    /// paths when those are on.
    pub preproc: String,
    pub ext: String,
    pub cut: String,
    /// Percent of cuts made by the dominance test (label correcting only).
    pub dom: String,
    pub len: String,
    /// `opt`, `infeasible`, a relative gap, `inf`, or `error`.
    pub gap: String,
    pub cpu: String,
}

const NA: &str = "-";

impl BenchRow {
    /// A row for a run; `None` marks a failed run.
    pub fn from_run(name: &str, inst: Option<&AnyInstance>, config: &SolverConfig, run: Option<&RunReport<()>>) -> Self {
        let (vertices, arcs) = match inst {
            Some(i) => (i.graph().vertex_count().to_string(), i.graph().arc_count().to_string()),
            None => (NA.into(), NA.into()),
        };
        let mut row = BenchRow {
            instance: name.into(),
            vertices,
            arcs,
            alg: config.tag(),
            gamma: NA.into(),
            preproc: NA.into(),
            ext: NA.into(),
            cut: NA.into(),
            dom: NA.into(),
            len: NA.into(),
            gap: "error".into(),
            cpu: NA.into(),
        };
        let Some(r) = run else { return row };
        let s = &r.solve;
        row.gamma = r.gamma.map_or(NA.into(), |g| format!("{g:.1}"));
        let (fb, fc) = r.preprocessing_fractions();
        row.preproc = if config.use_candidate_paths {
            format!("{:.0}%+{:.0}%", 100.0 * fb, 100.0 * fc)
        } else {
            format!("{:.0}%", 100.0 * fb)
        };
        row.ext = s.extended.to_string();
        row.cut = s.cut.to_string();
        if config.algorithm == Algorithm::Correcting {
            row.dom = format!("{:.0}%", 100.0 * s.dominance_cut_fraction);
        }
        if s.path.is_some() {
            row.len = s.path_length.to_string();
        }
        row.gap = match s.status {
            Status::Optimal => "opt".into(),
            Status::Infeasible => "infeasible".into(),
            Status::Capped if s.gap.is_finite() => format!("{:.4}", s.gap),
            Status::Capped => "inf".into(),
        };
        row.cpu = format!("{:.2e}", r.total_seconds());
        row
    }

    pub fn is_capped(&self) -> bool {
        self.gap != "opt" && self.gap != "infeasible" && self.gap != "error"
    }

    /// The row without its timing columns.
    pub fn without_timing(&self) -> BenchRow {
        BenchRow {
            preproc: NA.into(),
            cpu: NA.into(),
            ..self.clone()
        }
    }
}

pub fn write_csv<W: std::io::Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows, writing the header only when the file is new or empty.
pub fn append_csv(path: &FsPath, rows: &[BenchRow]) -> Result<(), BenchError> {
    let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchRow>, BenchError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(BenchError::Spec(format!("unexpected CSV header {header:?}")));
    }
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// `N runs: a optimal, b infeasible, c capped, d errors`, followed by the
/// capped and failed runs.
pub fn summary(rows: &[BenchRow]) -> String {
    let count = |f: &dyn Fn(&BenchRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let mut s = format!(
        "{} runs: {} optimal, {} infeasible, {} capped, {} errors",
        rows.len(),
        count(&|r| r.gap == "opt"),
        count(&|r| r.gap == "infeasible"),
        count(&|r| r.is_capped()),
        count(&|r| r.gap == "error"),
    );
    for r in rows.iter().filter(|r| r.is_capped() || r.gap == "error") {
        s.push_str(&format!("\n  {} {}: gap {}", r.instance, r.alg, r.gap));
    }
    s
}

fn default_k() -> usize {
    1
}
fn default_lambda() -> f64 {
    0.5
}
fn default_beta() -> f64 {
    0.05
}
fn default_tau_quantile() -> f64 {
    0.2
}
fn default_kappa() -> usize {
    16
}

/// One instance of a suite: a generator family with its parameters, or an
/// instance file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: String,
    /// `grid`, `rand`, `acyc`, `dimacs` or `file`.
    pub family: String,
    #[serde(default)]
    pub layers: usize,
    #[serde(default)]
    pub width: usize,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    pub path: Option<PathBuf>,
    pub origin: Option<usize>,
    pub destination: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// `rcsp`, `cvar` or `probcon`; ignored for files.
    #[serde(default)]
    pub problem: String,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_tau_quantile")]
    pub tau_quantile: f64,
}

impl InstanceSpec {
    /// Generates or reads the instance; relative paths resolve against `dir`.
    pub fn build(&self, dir: &FsPath) -> Result<AnyInstance, String> {
        let path = || {
            self.path
                .as_ref()
                .map(|p| dir.join(p))
                .ok_or_else(|| format!("{}: family {} needs a path", self.name, self.family))
        };
        let family = match self.family.as_str() {
            "grid" => GraphFamily::Grid {
                layers: self.layers,
                width: self.width,
            },
            "rand" => GraphFamily::Random { n: self.n, m: self.m },
            "acyc" => GraphFamily::Acyclic { n: self.n, m: self.m },
            "dimacs" => GraphFamily::Dimacs {
                path: path()?,
                origin: self.origin,
                destination: self.destination,
            },
            "file" => return AnyInstance::read_file(&path()?).map_err(|e| e.to_string()),
            other => return Err(format!("unknown family `{other}`")),
        };
        let problem = parse_problem(&self.problem, self.k, self.lambda, self.beta, self.tau_quantile)?;
        let base = generate_graph(&family, self.seed).map_err(|e| e.to_string())?;
        generate_instance(&base, problem, self.seed).map_err(|e| e.to_string())
    }
}

pub fn parse_problem(name: &str, k: usize, lambda: f64, beta: f64, tau_quantile: f64) -> Result<ProblemSpec, String> {
    match name {
        "rcsp" => Ok(ProblemSpec::Rcsp { k, lambda }),
        "cvar" => Ok(ProblemSpec::Cvar { beta }),
        "probcon" => Ok(ProblemSpec::ProbCon { tau_quantile }),
        other => Err(format!("unknown problem `{other}`")),
    }
}

/// A solver configuration in suite and command-line form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    /// `astar`, `cor` or `dom`.
    pub algo: String,
    /// Bound source: `none`, `low`, `con` or `clu`. Defaults by algorithm.
    pub test: Option<String>,
    /// `with-bound` or `cost-only`. Defaults by algorithm.
    pub key: Option<String>,
    #[serde(default)]
    pub candidate_paths: bool,
    #[serde(default = "default_kappa")]
    pub kappa: usize,
    pub max_frontier: Option<usize>,
}

impl ConfigSpec {
    pub fn new(algo: &str) -> Self {
        ConfigSpec {
            algo: algo.into(),
            test: None,
            key: None,
            candidate_paths: false,
            kappa: default_kappa(),
            max_frontier: None,
        }
    }

    pub fn to_options(&self, inst: &AnyInstance) -> Result<RunOptions, String> {
        let algorithm = match self.algo.as_str() {
            "astar" => Algorithm::AStar,
            "cor" => Algorithm::Correcting,
            "dom" => Algorithm::Dominance,
            other => return Err(format!("unknown algorithm `{other}`")),
        };
        let mut config = SolverConfig::new(algorithm)
            .with_candidates(self.candidate_paths)
            .with_frontier_cap(self.max_frontier.unwrap_or_else(|| default_frontier_cap(inst)));
        if let Some(t) = &self.test {
            config = config.with_bounds(match t.as_str() {
                "none" => BoundKind::None,
                "low" => BoundKind::Plain,
                "con" => BoundKind::Conditional,
                "clu" => BoundKind::Clustered,
                other => return Err(format!("unknown test `{other}`")),
            });
            if config.bound_source == BoundKind::None {
                config = config.with_key(KeyKind::CostOnly);
            }
        }
        if let Some(k) = &self.key {
            config = config.with_key(match k.as_str() {
                "with-bound" => KeyKind::WithBound,
                "cost-only" => KeyKind::CostOnly,
                other => return Err(format!("unknown key `{other}`")),
            });
        }
        config.validate().map_err(|e| e.to_string())?;
        if self.kappa == 0 {
            return Err("kappa must be >= 1".into());
        }
        let mut options = RunOptions::new(config);
        options.kappa = self.kappa;
        Ok(options)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    /// Worker threads; defaults to the available parallelism.
    pub threads: Option<usize>,
    #[serde(rename = "instance")]
    pub instances: Vec<InstanceSpec>,
    #[serde(rename = "config")]
    pub configs: Vec<ConfigSpec>,
}

impl SuiteSpec {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let spec: SuiteSpec = toml::from_str(text)?;
        if spec.instances.is_empty() || spec.configs.is_empty() {
            return Err(BenchError::Spec("a suite needs at least one instance and one config".into()));
        }
        Ok(spec)
    }

    pub fn read(path: &FsPath) -> Result<Self, BenchError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Applies `f` to every item on `threads` workers. Results come back
/// through a channel and are returned in item order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, items.len().max(1)) {
            let tx = tx.clone();
            let (next, f) = (&next, &f);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                if tx.send((i, f(item))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut out: Vec<(usize, R)> = rx.into_iter().collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}

/// Runs every (instance, configuration) pair. Failures become rows with
/// gap `error`; the message goes to `errors` in row order.
pub fn run_suite(spec: &SuiteSpec, dir: &FsPath) -> (Vec<BenchRow>, Vec<String>) {
    let threads = spec
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let instances = parallel_map(&spec.instances, threads, |s| s.build(dir));
    let jobs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..spec.configs.len()).map(move |c| (i, c)))
        .collect();
    let results = parallel_map(&jobs, threads, |&(i, c)| {
        let name = &spec.instances[i].name;
        let cfg = &spec.configs[c];
        let inst = match &instances[i] {
            Ok(inst) => inst,
            Err(e) => {
                let row = BenchRow::from_run(name, None, &fallback_config(cfg), None);
                return (row, Some(format!("{name}: {e}")));
            }
        };
        match cfg.to_options(inst) {
            Ok(options) => {
                let run = run_any(inst, &options);
                let err = run.as_ref().err().map(|e| format!("{name} {}: {e}", options.config.tag()));
                (BenchRow::from_run(name, Some(inst), &options.config, run.as_ref().ok()), err)
            }
            Err(e) => {
                let row = BenchRow::from_run(name, Some(inst), &fallback_config(cfg), None);
                (row, Some(format!("{name}: {e}")))
            }
        }
    });
    let mut errors = Vec::new();
    let rows = results
        .into_iter()
        .map(|(row, e)| {
            errors.extend(e);
            row
        })
        .collect();
    (rows, errors)
}

fn fallback_config(cfg: &ConfigSpec) -> SolverConfig {
    let algorithm = match cfg.algo.as_str() {
        "cor" => Algorithm::Correcting,
        "dom" => Algorithm::Dominance,
        _ => Algorithm::AStar,
    };
    SolverConfig::new(algorithm).with_candidates(cfg.candidate_paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SUITE: &str = r#"
threads = 3

[[instance]]
name = "acyc"
family = "acyc"
n = 8
m = 20
seed = 1
problem = "rcsp"

[[instance]]
name = "rand"
family = "rand"
n = 8
m = 24
seed = 2
problem = "rcsp"
k = 2

[[instance]]
name = "grid"
family = "grid"
layers = 3
width = 4
seed = 3
problem = "cvar"

[[config]]
algo = "astar"

[[config]]
algo = "cor"
candidate_paths = true

[[config]]
algo = "dom"
"#;

    #[test]
    fn three_by_three_suite_gives_nine_rows() {
        let spec = SuiteSpec::parse(SUITE).unwrap();
        let (rows, errors) = run_suite(&spec, FsPath::new("."));
        assert!(errors.is_empty(), "{errors:?}");
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.gap == "opt"));
        assert_eq!(rows[0].instance, "acyc");
        assert_eq!(rows[4].alg, "cor. CP");
        assert_eq!(rows[8].gamma, "-");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap().split(',').count(), 12);
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn failures_become_rows() {
        let text = SUITE.replace("n = 8\nm = 20", "n = 8\nm = 2");
        let spec = SuiteSpec::parse(&text).unwrap();
        let (rows, errors) = run_suite(&spec, FsPath::new("."));
        assert_eq!(rows.len(), 9);
        assert_eq!(errors.len(), 3);
        assert!(rows[..3].iter().all(|r| r.gap == "error" && r.vertices == "-"));
        assert!(summary(&rows).contains("3 errors"));
    }

    #[test]
    fn bad_suites_are_rejected() {
        assert!(SuiteSpec::parse("threads = 1\n").is_err());
        assert!(SuiteSpec::parse(&SUITE.replace("seed = 1", "sed = 1")).is_err());
    }

    #[test]
    fn parallel_map_preserves_order() {
        let items: Vec<u64> = (0..100).collect();
        assert_eq!(parallel_map(&items, 7, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
