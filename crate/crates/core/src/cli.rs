//! Command-line front end: chart loading, suite dispatch and report output.
//! The binary is a thin wrapper around [`run`].

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::geometry::{
    builtin_chart, decompose_curvature, load_chart_file, random_connection_matrices, Builtin, BuiltinKind,
};
use crate::heisenberg::cohomology;
use crate::induced::RepDesc;
use crate::report::{Check, Report};
use crate::rumin::{lemma1_complex, tau_connection, verify_rs_complex, BundleConnection};
use crate::suites::{geometry_checks, kahler_checks};
use crate::tractor::{a1_example_checks, tractor_checks, TractorConnection};

/// Largest representation the cohomology command will build.
pub const MAX_REP_DIM: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "sympcalc",
    version,
    about = "Exact checks of symplectic differential complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite on a chart.
    Verify {
        target: Target,
        #[command(flatten)]
        opts: Opts,
    },
    /// Heisenberg cohomology of a representation: CE against BGG, and the
    /// Kostant prediction where it applies.
    Cohomology {
        #[command(flatten)]
        opts: Opts,
    },
    /// Validate a chart file and summarise its curvature.
    ChartLint {
        path: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Rs,
    Tractor,
    Lemma1,
    Lemma3,
    Kahler,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Args)]
pub struct Opts {
    /// `builtin:flat`, `builtin:fubini_study`, `builtin:random` or a chart
    /// file path.
    #[arg(long, default_value = "builtin:flat")]
    pub chart: String,
    /// Half the dimension. Taken from the file for chart files.
    #[arg(long)]
    pub n: Option<usize>,
    /// Representation descriptor. For `verify rs` and `verify lemma1` it
    /// selects the coupling bundle: a descriptor induced from the tractor
    /// bundle, `tau` for the rank-one twist, or `random` for a seeded
    /// connection that is not symplectically flat.
    #[arg(long)]
    pub rep: Option<String>,
    /// Polynomial degree bound for symbolic test sections.
    #[arg(long, default_value_t = 2)]
    pub deg_bound: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeded random instances (random charts, random Kähler
    /// potentials).
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn from_report(report: Report) -> Self {
        let exit_code = if report.passed { 0 } else { 1 };
        Outcome { report, exit_code }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Text => self.report.to_text(),
        }
    }
}

enum ChartSource {
    Builtin(BuiltinKind),
    Random,
    File(PathBuf),
}

fn chart_source(s: &str) -> Result<ChartSource, Error> {
    match s.strip_prefix("builtin:") {
        Some("flat") => Ok(ChartSource::Builtin(BuiltinKind::Flat)),
        Some("fubini_study") => Ok(ChartSource::Builtin(BuiltinKind::FubiniStudy)),
        Some("random") => Ok(ChartSource::Random),
        Some(other) => Err(Error::Config(format!(
            "unknown builtin chart {other:?} (expected flat, fubini_study or random)"
        ))),
        None => Ok(ChartSource::File(PathBuf::from(s))),
    }
}

/// The structures a verify run covers: one chart, or `trials` seeded random
/// structures for `builtin:random`.
fn load_structures(opts: &Opts) -> Result<Vec<(String, Builtin)>, Error> {
    match chart_source(&opts.chart)? {
        ChartSource::Builtin(kind) => {
            let n = opts.n.unwrap_or(1);
            Ok(vec![(opts.chart.clone(), builtin_chart(kind, n)?)])
        }
        ChartSource::Random => {
            let n = opts.n.unwrap_or(1);
            if opts.trials == 0 {
                return Err(Error::Config("--trials must be at least 1 for random charts".into()));
            }
            (0..opts.trials as u64)
                .map(|t| {
                    let seed = opts.seed.wrapping_add(t);
                    Ok((
                        format!("builtin:random(seed={seed})"),
                        builtin_chart(BuiltinKind::Random { seed }, n)?,
                    ))
                })
                .collect()
        }
        ChartSource::File(path) => {
            let b = load_chart_file(&path)?;
            if let Some(n) = opts.n {
                if n != b.fedosov.n() {
                    return Err(Error::Config(format!(
                        "--n {n} does not match the chart file (n = {})",
                        b.fedosov.n()
                    )));
                }
            }
            Ok(vec![(path.display().to_string(), b)])
        }
    }
}

fn base_report(command: &str, opts: &Opts) -> Report {
    Report::new(command)
        .config("chart", opts.chart.clone())
        .config(
            "n",
            opts.n.map(serde_json::Value::from).unwrap_or(serde_json::Value::Null),
        )
        .config("rep", opts.rep.clone().unwrap_or_else(|| "trivial".into()))
        .config("deg_bound", opts.deg_bound)
        .config("seed", opts.seed)
        .config("trials", opts.trials)
}

fn tag(checks: Vec<Check>, chart: &str, multiple: bool) -> Vec<Check> {
    if !multiple {
        return checks;
    }
    checks.into_iter().map(|c| c.with("chart", chart.to_string())).collect()
}

/// Coupling bundle for the RS and two-row complexes.
fn coupling(b: &Builtin, rep: &str, seed: u64) -> Result<BundleConnection, Error> {
    let f = &b.fedosov;
    match rep {
        "tau" => tau_connection(f),
        "random" => BundleConnection::new(f, random_connection_matrices(f.ring(), f.n(), 2, seed), "random"),
        _ => {
            let desc: RepDesc = rep.parse()?;
            if desc == RepDesc::Trivial {
                return Ok(BundleConnection::trivial(f, 1));
            }
            let tc = TractorConnection::new(f)?;
            if desc == RepDesc::Standard {
                return Ok(tc.conn);
            }
            tc.induced(&desc, MAX_REP_DIM)
        }
    }
}

pub fn cmd_verify(target: Target, opts: &Opts) -> Result<Outcome, Error> {
    if opts.deg_bound == 0 {
        return Err(Error::Config("--deg-bound must be at least 1".into()));
    }
    if opts.rep.is_some() && !matches!(target, Target::Rs | Target::Lemma1) {
        return Err(Error::Config(format!("--rep is not used by verify {target}")));
    }
    let structures = load_structures(opts)?;
    let multiple = structures.len() > 1;
    let mut report = base_report(&format!("verify {target}"), opts);
    let rep = opts.rep.as_deref().unwrap_or("trivial");
    for (label, b) in &structures {
        let checks = match target {
            Target::Rs => verify_rs_complex(&coupling(b, rep, opts.seed)?, opts.deg_bound),
            Target::Lemma1 => lemma1_complex(&coupling(b, rep, opts.seed)?, opts.deg_bound),
            Target::Lemma3 => geometry_checks(&b.fedosov, opts.deg_bound),
            Target::Tractor => {
                let tc = TractorConnection::new(&b.fedosov)?;
                let mut cs = tractor_checks(&tc, b.kahler.as_ref().map(|k| &k.data), opts.deg_bound);
                cs.extend(a1_example_checks(&b.fedosov, opts.deg_bound));
                cs
            }
            Target::Kahler => {
                let k = b
                    .kahler
                    .as_ref()
                    .ok_or_else(|| Error::Config(format!("chart {label} carries no Kähler metric")))?;
                kahler_checks(k, opts.seed, opts.trials)
            }
        };
        report.extend(tag(checks, label, multiple));
    }
    Ok(Outcome::from_report(report))
}

pub fn cmd_cohomology(opts: &Opts) -> Result<Outcome, Error> {
    let n = opts.n.unwrap_or(1);
    if n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    let desc: RepDesc = opts.rep.as_deref().unwrap_or("trivial").parse()?;
    let (coh, checks) = cohomology(&desc, n, MAX_REP_DIM)?;
    let mut report = Report::new("cohomology").config("rep", desc.to_string()).config("n", n);
    report.extend(checks);
    report.passed &= coh.matched;
    report.results.insert("cohomology".into(), serde_json::to_value(&coh)?);
    Ok(Outcome::from_report(report))
}

pub fn cmd_chart_lint(path: &Path) -> Result<Outcome, Error> {
    const S: &str = "chart_lint";
    let mut report = Report::new("chart-lint").config("path", path.display().to_string());
    let b = match load_chart_file(path) {
        Ok(b) => b,
        Err(Error::Invariant(msg)) => {
            report.push(Check::pass(S, "grammar"));
            report.push(Check::fail(S, "invariants", msg));
            return Ok(Outcome::from_report(report));
        }
        Err(e) => return Err(e),
    };
    report.push(Check::pass(S, "grammar"));
    report.push(Check::pass(S, "invariants").with("checked", "dJ = 0, torsion free, nabla J = 0"));
    let f = &b.fedosov;
    let dc = decompose_curvature(f);
    let d = f.dim();
    let phi: Vec<Vec<String>> = (0..d)
        .map(|a| (0..d).map(|c| dc.phi.get(&[a, c]).to_string()).collect())
        .collect();
    let s: Vec<String> = (0..d).map(|a| dc.s.get(&[a]).to_string()).collect();
    report.results.insert("name".into(), f.chart.name.clone().into());
    report.results.insert("n".into(), f.n().into());
    report.results.insert("kahler".into(), b.kahler.is_some().into());
    report.results.insert("v_zero".into(), dc.v.is_zero().into());
    report.results.insert("phi".into(), serde_json::to_value(phi)?);
    report.results.insert("s".into(), serde_json::to_value(s)?);
    Ok(Outcome::from_report(report))
}

/// Dispatches a parsed command line. Errors carry their own exit code.
pub fn execute(cli: &Cli) -> Result<(Outcome, &Opts), Error> {
    match &cli.command {
        Command::Verify { target, opts } => Ok((cmd_verify(*target, opts)?, opts)),
        Command::Cohomology { opts } => Ok((cmd_cohomology(opts)?, opts)),
        Command::ChartLint { path, opts } => Ok((cmd_chart_lint(path)?, opts)),
    }
}

/// Runs the command line and writes the report. Returns the process exit
/// code.
pub fn run(cli: &Cli) -> i32 {
    let (outcome, opts) = match execute(cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = outcome.render(opts.format);
    match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: writing {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    outcome.exit_code
}
