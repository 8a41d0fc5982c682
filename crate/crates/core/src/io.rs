//! Line-oriented instance text format.
//!
//! ```text
//! mrcsp 1
//! graph <n> <m>
//! od <o> <d>
//! problem rcsp <k> <W1> … <Wk>
//!       | cvar <beta>
//!       | probcon <tau> <alpha>
//!       | scencvar <N> <beta>
//!       | utility <points> <t1> <f1> … <tp> <fp>
//! a <tail> <head> vec <w0> … <wk>
//! a <tail> <head> dist <offset> <len> <p0> … <p_{len-1}>
//! a <tail> <head> pair <w> dist <offset> <len> <p0> …
//! a <tail> <head> scen <N> <v1> … <vN>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use thiserror::Error;

use crate::algebra::Vector;
use crate::graph::Digraph;
use crate::instance::{
    CvarProblem, Instance, InstanceError, ProbCon, Problem, Rcsp, ScenarioCvar, UtilityProblem,
};
use crate::stochastic::{DiscreteDistribution, ScenarioVector, UtilityFunction};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An instance of any problem in the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInstance {
    Rcsp(Instance<Rcsp>),
    Cvar(Instance<CvarProblem>),
    ProbCon(Instance<ProbCon>),
    Scenario(Instance<ScenarioCvar>),
    Utility(Instance<UtilityProblem>),
}

impl AnyInstance {
    pub fn graph(&self) -> &Digraph {
        match self {
            AnyInstance::Rcsp(i) => &i.graph,
            AnyInstance::Cvar(i) => &i.graph,
            AnyInstance::ProbCon(i) => &i.graph,
            AnyInstance::Scenario(i) => &i.graph,
            AnyInstance::Utility(i) => &i.graph,
        }
    }

    pub fn problem_name(&self) -> &'static str {
        match self {
            AnyInstance::Rcsp(i) => i.problem.name(),
            AnyInstance::Cvar(i) => i.problem.name(),
            AnyInstance::ProbCon(i) => i.problem.name(),
            AnyInstance::Scenario(i) => i.problem.name(),
            AnyInstance::Utility(i) => i.problem.name(),
        }
    }

    /// Whether arc resources are distributions (smaller default frontier cap).
    pub fn is_distributional(&self) -> bool {
        matches!(self, AnyInstance::Cvar(_) | AnyInstance::ProbCon(_) | AnyInstance::Utility(_))
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyInstance::Rcsp(i) => write_instance(i, &format_problem_rcsp(&i.problem), |x, out| {
                out.push_str("vec");
                for c in &x.0 {
                    let _ = write!(out, " {c}");
                }
            }),
            AnyInstance::Cvar(i) => write_instance(i, &format!("cvar {}", i.problem.beta()), write_dist),
            AnyInstance::ProbCon(i) => write_instance(
                i,
                &format!("probcon {} {}", i.problem.tau(), i.problem.alpha()),
                |x, out| {
                    let _ = write!(out, "pair {} ", x.0);
                    write_dist(&x.1, out);
                },
            ),
            AnyInstance::Scenario(i) => write_instance(
                i,
                &format!("scencvar {} {}", i.problem.scenarios(), i.problem.beta()),
                |x, out| {
                    let _ = write!(out, "scen {}", x.len());
                    for v in &x.0 {
                        let _ = write!(out, " {v}");
                    }
                },
            ),
            AnyInstance::Utility(i) => {
                let pts = i.problem.utility().points();
                let mut head = format!("utility {}", pts.len());
                for (t, f) in pts {
                    let _ = write!(head, " {t} {f}");
                }
                write_instance(i, &head, write_dist)
            }
        }
    }

    pub fn write_file(&self, path: &FsPath) -> Result<(), IoError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &FsPath) -> Result<Self, IoError> {
        parse_instance(&std::fs::read_to_string(path)?)
    }
}

fn format_problem_rcsp(p: &Rcsp) -> String {
    let mut s = format!("rcsp {}", p.k());
    for w in p.thresholds() {
        let _ = write!(s, " {w}");
    }
    s
}

fn write_dist(x: &DiscreteDistribution, out: &mut String) {
    let _ = write!(out, "dist {} {}", x.offset(), x.len());
    for p in x.probabilities() {
        let _ = write!(out, " {p}");
    }
}

fn write_instance<P: Problem>(
    inst: &Instance<P>,
    problem_line: &str,
    arc: impl Fn(&crate::instance::Elem<P>, &mut String),
) -> String {
    let g = &inst.graph;
    let mut out = String::new();
    let _ = writeln!(out, "mrcsp 1");
    let _ = writeln!(out, "graph {} {}", g.vertex_count(), g.arc_count());
    let _ = writeln!(out, "od {} {}", inst.origin, inst.destination);
    let _ = writeln!(out, "problem {problem_line}");
    for (a, &(t, h)) in g.arcs().iter().enumerate() {
        let _ = write!(out, "a {t} {h} ");
        arc(&inst.resources[a], &mut out);
        out.push('\n');
    }
    out
}

struct Tokens<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn err(&self, message: impl Into<String>) -> IoError {
        IoError::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str, IoError> {
        self.it.next().ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn expect(&mut self, kw: &str) -> Result<(), IoError> {
        let w = self.word(kw)?;
        if w != kw {
            return Err(self.err(format!("expected `{kw}`, found `{w}`")));
        }
        Ok(())
    }

    fn num<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, IoError> {
        let w = self.word(what)?;
        w.parse().map_err(|_| self.err(format!("invalid {what} `{w}`")))
    }

    fn floats(&mut self, count: usize, what: &str) -> Result<Vec<f64>, IoError> {
        (0..count).map(|_| self.num::<f64>(what)).collect()
    }

    fn end(&mut self) -> Result<(), IoError> {
        match self.it.next() {
            Some(w) => Err(self.err(format!("unexpected trailing token `{w}`"))),
            None => Ok(()),
        }
    }

    fn dist(&mut self) -> Result<DiscreteDistribution, IoError> {
        self.expect("dist")?;
        let offset = self.num::<i64>("offset")?;
        let len = self.num::<usize>("support length")?;
        if len == 0 {
            return Err(self.err("empty support"));
        }
        let p = self.floats(len, "probability")?;
        DiscreteDistribution::from_probabilities(offset, &p)
            .map_err(|e| self.err(e.to_string()))
    }
}

enum ProblemLine {
    Rcsp(Vec<f64>),
    Cvar(f64),
    ProbCon(f64, f64),
    Scen(usize, f64),
    Utility(Vec<(f64, f64)>),
}

/// Parses the instance text format. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<AnyInstance, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| {
        lines.next().map(|(line, l)| Tokens { line, it: l.split_whitespace() }).ok_or_else(|| IoError::Parse {
            line: text.lines().count(),
            message: format!("missing {what} line"),
        })
    };
    let mut t = next("header")?;
    t.expect("mrcsp")?;
    if t.num::<u32>("version")? != 1 {
        return Err(t.err("unsupported version"));
    }
    t.end()?;
    let mut t = next("graph")?;
    t.expect("graph")?;
    let n = t.num::<usize>("vertex count")?;
    let m = t.num::<usize>("arc count")?;
    t.end()?;
    let mut t = next("od")?;
    t.expect("od")?;
    let o = t.num::<usize>("origin")?;
    let d = t.num::<usize>("destination")?;
    t.end()?;
    let mut t = next("problem")?;
    t.expect("problem")?;
    let problem = match t.word("problem kind")? {
        "rcsp" => {
            let k = t.num::<usize>("k")?;
            ProblemLine::Rcsp(t.floats(k, "threshold")?)
        }
        "cvar" => ProblemLine::Cvar(t.num("beta")?),
        "probcon" => ProblemLine::ProbCon(t.num("tau")?, t.num("alpha")?),
        "scencvar" => ProblemLine::Scen(t.num("scenario count")?, t.num("beta")?),
        "utility" => {
            let p = t.num::<usize>("point count")?;
            let v = t.floats(2 * p, "utility breakpoint")?;
            ProblemLine::Utility(v.chunks(2).map(|c| (c[0], c[1])).collect())
        }
        other => return Err(t.err(format!("unknown problem `{other}`"))),
    };
    let problem_line = t.line;
    t.end()?;

    let mut arcs = Vec::with_capacity(m);
    let mut arc_lines = Vec::with_capacity(m);
    for _ in 0..m {
        let mut t = next("arc")?;
        t.expect("a")?;
        let tail = t.num::<usize>("tail")?;
        let head = t.num::<usize>("head")?;
        if tail >= n || head >= n {
            return Err(t.err(format!("arc ({tail}, {head}) out of range for {n} vertices")));
        }
        arcs.push((tail, head));
        arc_lines.push(t);
    }
    if let Ok(t) = next("extra") {
        return Err(t.err(format!("more than the declared {m} arcs")));
    }
    let graph = Digraph::new(n, arcs).map_err(InstanceError::from)?;
    let wrap = |e: InstanceError| match e {
        InstanceError::Invalid(_) | InstanceError::Algebra(_) => IoError::Parse {
            line: problem_line,
            message: e.to_string(),
        },
        other => other.into(),
    };
    Ok(match problem {
        ProblemLine::Rcsp(w) => {
            let k = w.len();
            let res = read_arcs(arc_lines, |t| {
                t.expect("vec")?;
                let v = t.floats(k + 1, "weight")?;
                Ok(Vector(v))
            })?;
            AnyInstance::Rcsp(Instance::new(graph, o, d, res, Rcsp::new(w)).map_err(wrap)?)
        }
        ProblemLine::Cvar(beta) => {
            let res = read_arcs(arc_lines, |t| t.dist())?;
            let p = CvarProblem::new(beta).map_err(wrap)?;
            AnyInstance::Cvar(Instance::new(graph, o, d, res, p).map_err(wrap)?)
        }
        ProblemLine::ProbCon(tau, alpha) => {
            let res = read_arcs(arc_lines, |t| {
                t.expect("pair")?;
                let w = t.num::<f64>("weight")?;
                Ok((w, t.dist()?))
            })?;
            let p = ProbCon::new(tau, alpha).map_err(wrap)?;
            AnyInstance::ProbCon(Instance::new(graph, o, d, res, p).map_err(wrap)?)
        }
        ProblemLine::Scen(count, beta) => {
            let res = read_arcs(arc_lines, |t| {
                t.expect("scen")?;
                let c = t.num::<usize>("scenario count")?;
                if c != count {
                    return Err(t.err(format!("{c} scenarios, expected {count}")));
                }
                Ok(ScenarioVector(t.floats(c, "scenario value")?))
            })?;
            let p = ScenarioCvar::new(count, beta).map_err(wrap)?;
            AnyInstance::Scenario(Instance::new(graph, o, d, res, p).map_err(wrap)?)
        }
        ProblemLine::Utility(points) => {
            let f = UtilityFunction::new(points).map_err(|e| IoError::Parse {
                line: problem_line,
                message: e.to_string(),
            })?;
            let res = read_arcs(arc_lines, |t| t.dist())?;
            AnyInstance::Utility(Instance::new(graph, o, d, res, UtilityProblem::new(f)).map_err(wrap)?)
        }
    })
}

fn read_arcs<E>(
    lines: Vec<Tokens<'_>>,
    mut f: impl FnMut(&mut Tokens<'_>) -> Result<E, IoError>,
) -> Result<Vec<E>, IoError> {
    lines
        .into_iter()
        .map(|mut t| {
            let x = f(&mut t)?;
            t.end()?;
            Ok(x)
        })
        .collect()
}
