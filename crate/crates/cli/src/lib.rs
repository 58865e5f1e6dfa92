//! Command-line front-end: instance generation, proving, verification, tampering and
//! size benchmarks.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mstcert::any;
use mstcert::gen::{gen_instance, GenError};
use mstcert::harness::{MutationKind, MutationOutcome};
use mstcert::{
    parse_graph, CertDump, DumpError, FieldClass, GraphError, ProveError, ProveMode, SchemeTag, VerdictReport, Weight,
    WeightedGraph,
};
use thiserror::Error;

pub const EXIT_ACCEPT: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mstcert", version, about = "Local certification of minimum spanning trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a connected instance with its MST selected.
    Gen(GenArgs),
    /// Write the honest certificates of an instance.
    Prove(ProveArgs),
    /// Verify certificates; exit 0 on global accept, 1 on reject.
    Verify(VerifyArgs),
    /// Certificate sizes and verdicts over generated instances, as CSV.
    Bench(BenchArgs),
    /// Tamper with certificates or mutate the instance and report detection.
    Tamper(TamperArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Maximum edge weight.
    #[arg(long)]
    pub w: Weight,
    /// Fraction of all node pairs that become edges; at least a spanning tree.
    #[arg(long, default_value_t = 0.1)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub scheme: SchemeTag,
    /// Label the selection even when it is not an MST.
    #[arg(long)]
    pub best_effort: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub scheme: SchemeTag,
    /// Certificate dump to verify.
    #[arg(long, conflicts_with = "prove", required_unless_present = "prove")]
    pub certs: Option<PathBuf>,
    /// Run the prover instead of reading a dump.
    #[arg(long)]
    pub prove: bool,
    /// With --prove: label the selection even when it is not an MST.
    #[arg(long, requires = "prove")]
    pub best_effort: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated scheme tags.
    #[arg(long, value_delimiter = ',', default_value = "st,universal,kruskal,boruvka,ancestors,kk")]
    pub schemes: Vec<SchemeTag>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub w_list: Vec<Weight>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge density; defaults to about three edges per node.
    #[arg(long)]
    pub density: Option<f64>,
    /// Write 0 in the wall_ms column so output is byte-for-byte reproducible.
    #[arg(long)]
    pub no_time: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    FieldReplace,
    InstanceMutate,
}

#[derive(Debug, Args)]
pub struct TamperArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub scheme: SchemeTag,
    #[arg(long, value_enum)]
    pub strategy: Strategy,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// field-replace: field classes to tamper with (root, dist, m, id, weight, counter, name, flag, bit).
    #[arg(long, value_delimiter = ',')]
    pub fields: Vec<String>,
    /// instance-mutate: mutation seeds tried per kind.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Graph { path: PathBuf, source: GraphError },
    #[error("{path}: {source}")]
    Dump { path: PathBuf, source: DumpError },
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_ACCEPT };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut impl Write) -> Result<i32, CliError> {
    match command {
        Command::Gen(a) => {
            let g = gen_instance(a.n, a.w, a.density, a.seed)?;
            emit(a.out.as_deref(), &g.to_text(), out)?;
            Ok(EXIT_ACCEPT)
        }
        Command::Prove(a) => {
            let g = read_graph(&a.graph)?;
            let dump = any::prove(a.scheme, &g, mode(a.best_effort))?;
            emit(a.out.as_deref(), &dump.to_text(), out)?;
            Ok(EXIT_ACCEPT)
        }
        Command::Verify(a) => verify(a, out),
        Command::Bench(a) => {
            let csv = bench(&a)?;
            emit(a.out.as_deref(), &csv, out)?;
            Ok(EXIT_ACCEPT)
        }
        Command::Tamper(a) => tamper(a, out),
    }
}

fn mode(best_effort: bool) -> ProveMode {
    if best_effort {
        ProveMode::BestEffort
    } else {
        ProveMode::Strict
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn read_graph(path: &Path) -> Result<WeightedGraph, CliError> {
    parse_graph(&read_file(path)?).map_err(|source| CliError::Graph { path: path.to_owned(), source })
}

fn emit(path: Option<&Path>, text: &str, out: &mut impl Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_owned(), source }),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn verify(a: VerifyArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let g = read_graph(&a.graph)?;
    let report = match &a.certs {
        Some(path) => {
            let dump =
                CertDump::parse(&read_file(path)?).map_err(|source| CliError::Dump { path: path.clone(), source })?;
            if dump.scheme != a.scheme {
                return Err(CliError::Usage(format!("dump is for scheme {}, not {}", dump.scheme, a.scheme)));
            }
            any::verify(&g, &dump).map_err(|source| CliError::Dump { path: path.clone(), source })?
        }
        None => any::prove_and_run(a.scheme, &g, mode(a.best_effort))?,
    };
    out.write_all(render_report(a.scheme, &report).as_bytes())?;
    Ok(if report.accepted { EXIT_ACCEPT } else { EXIT_REJECT })
}

/// Summary line, then one line per rejecting node.
pub fn render_report(scheme: SchemeTag, report: &VerdictReport) -> String {
    let mut text = format!(
        "scheme={scheme} nodes={} accepted={} rejecting={} max_bits={} mean_bits={:.2}\n",
        report.verdicts.len(),
        report.accepted,
        report.rejection_count(),
        report.max_bits,
        report.mean_bits
    );
    for (id, v) in report.rejecting() {
        let reasons: Vec<&str> = v.reasons().iter().map(|r| r.as_str()).collect();
        let _ = writeln!(text, "reject {id} {}", reasons.join(","));
    }
    text
}

pub const BENCH_HEADER: &str = "scheme,n,W,seed,max_bits,mean_bits,accepted,wall_ms";

/// Instance seed for one (n, W, trial) cell, independent of the scheme list.
fn instance_seed(base: u64, n: usize, w: Weight, trial: usize) -> u64 {
    let mut h = base ^ 0x9e37_79b9_7f4a_7c15;
    for x in [n as u64, w, trial as u64] {
        h = (h ^ x).wrapping_mul(0x0100_0000_01b3).rotate_left(29);
    }
    h
}

fn default_density(n: usize) -> f64 {
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs == 0 {
        0.0
    } else {
        ((3 * n) as f64 / pairs as f64).min(1.0)
    }
}

fn bench(a: &BenchArgs) -> Result<String, CliError> {
    let mut csv = format!("{BENCH_HEADER}\n");
    for &n in &a.n_list {
        for &w in &a.w_list {
            for trial in 0..a.trials {
                let seed = instance_seed(a.seed, n, w, trial);
                let g = gen_instance(n, w, a.density.unwrap_or_else(|| default_density(n)), seed)?;
                for &tag in &a.schemes {
                    let start = Instant::now();
                    let report = any::prove_and_run(tag, &g, ProveMode::Strict)?;
                    let ms = if a.no_time { 0.0 } else { start.elapsed().as_secs_f64() * 1e3 };
                    let _ = writeln!(
                        csv,
                        "{tag},{n},{w},{seed},{},{:.3},{},{ms:.3}",
                        report.max_bits, report.mean_bits, report.accepted
                    );
                }
            }
        }
    }
    Ok(csv)
}

fn field_class(name: &str) -> Result<FieldClass, CliError> {
    Ok(match name {
        "root" => FieldClass::RootId,
        "dist" => FieldClass::Dist,
        "m" => FieldClass::MaxWeight,
        "id" => FieldClass::Id,
        "weight" => FieldClass::Weight,
        "counter" => FieldClass::Counter,
        "name" => FieldClass::NameNumber,
        "flag" => FieldClass::Flag,
        "bit" => FieldClass::Bit,
        other => return Err(CliError::Usage(format!("unknown field class {other:?}"))),
    })
}

fn tamper(a: TamperArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let g = read_graph(&a.graph)?;
    match a.strategy {
        Strategy::FieldReplace => {
            let classes = a.fields.iter().map(|f| field_class(f)).collect::<Result<Vec<_>, _>>()?;
            let report = any::field_replace(a.scheme, &g, |c| classes.is_empty() || classes.contains(&c), a.seed)?;
            let mut text = format!(
                "strategy=field-replace scheme={} trials={} detected={} rate={:.4}\n",
                a.scheme,
                report.trials,
                report.detected,
                report.rate()
            );
            let soft =
                classes.is_empty() || classes.iter().any(|c| matches!(c, FieldClass::NameNumber | FieldClass::Flag));
            if soft && a.scheme == SchemeTag::Kk {
                text.push_str("note: name and flag fields carry no detection guarantee; rate is informational\n");
            }
            for u in &report.undetected {
                let _ = writeln!(text, "undetected node={} field={} old={} new={}", u.node, u.field, u.old, u.new);
            }
            out.write_all(text.as_bytes())?;
            Ok(if report.undetected.is_empty() { EXIT_ACCEPT } else { EXIT_REJECT })
        }
        Strategy::InstanceMutate => {
            let mut text = String::new();
            let (mut trials, mut detected, mut missed) = (0, 0, Vec::new());
            for kind in MutationKind::ALL {
                if !a.scheme.certifies_minimality() && kind.keeps_spanning_tree() {
                    let _ = writeln!(text, "{kind}: skipped, {} does not certify minimality", a.scheme);
                    continue;
                }
                let (mut k_detected, mut k_trials, mut skipped) = (0, 0, 0);
                for s in 0..a.trials {
                    let seed = a.seed.wrapping_add(s);
                    match any::mutation_trial(a.scheme, &g, kind, seed) {
                        MutationOutcome::Detected => {
                            k_trials += 1;
                            k_detected += 1;
                        }
                        MutationOutcome::Undetected(m) => {
                            k_trials += 1;
                            missed.push((kind, seed, m));
                        }
                        MutationOutcome::Inapplicable(_) => skipped += 1,
                        MutationOutcome::ProverRefused(e) => return Err(e.into()),
                    }
                }
                let _ = writeln!(text, "{kind}: trials={k_trials} detected={k_detected} inapplicable={skipped}");
                trials += k_trials;
                detected += k_detected;
            }
            let rate = if trials == 0 { 1.0 } else { detected as f64 / trials as f64 };
            let head = format!(
                "strategy=instance-mutate scheme={} trials={trials} detected={detected} rate={rate:.4}\n",
                a.scheme
            );
            text.insert_str(0, &head);
            for (kind, seed, m) in &missed {
                let _ = write!(text, "undetected kind={kind} seed={seed}\n{}", m.to_text());
            }
            out.write_all(text.as_bytes())?;
            Ok(if missed.is_empty() { EXIT_ACCEPT } else { EXIT_REJECT })
        }
    }
}
