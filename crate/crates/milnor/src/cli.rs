use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use milnor_core::curvature::Signature;
use milnor_core::derivations::{derivation_basis, pattern_check, pattern_dimension};
use milnor_core::reduction::{reduce, representative};
use milnor_core::{
    classify_metric, ricci_operator, sample_metric, Family, GramMatrix, LieAlgebra, RandomMetricSpec,
    DEFAULT_TOL,
};
use thiserror::Error;

use crate::format::{self, FormatError};
use crate::report::{
    CurvatureReport, DerivationsReport, ReduceReport, Report, SignatureCount, SolitonReport, SweepEntry,
    SweepReport,
};
use crate::verify::{self, VerifyConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<milnor_core::Error> for CliError {
    fn from(e: milnor_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "milnor",
    version,
    about = "Milnor-type frames, Ricci curvature and solvsoliton checks for left-invariant metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a metric to its Milnor-type frame and report λ, k and the frame
    Reduce(ReduceArgs),
    /// Ricci operator, eigenvalues and signature of a metric
    Curvature(CurvatureArgs),
    /// Basis of the derivation algebra
    Derivations(DerivationsArgs),
    /// Decide whether Ric = cI + D for a derivation D
    Solvsoliton(SolitonArgs),
    /// Histogram of Ricci signatures over random metrics
    SignatureSweep(SweepArgs),
    /// Run the built-in consistency checks for both families
    VerifyPaper(VerifyArgs),
}

fn parse_family(s: &str) -> Result<Family, String> {
    match Family::from_name(s) {
        Some(f) if f.is_solvable_family() => Ok(f),
        _ => Err(format!("unknown family `{s}` (expected rh2+abelian or rh-line)")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Tolerance for residual checks
    #[arg(long, env = "MILNOR_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// rh2+abelian or rh-line
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct MetricSource {
    /// Gram matrix file, one row per line
    #[arg(long, value_name = "FILE")]
    pub metric: Option<PathBuf>,
    /// Seed for a random metric
    #[arg(long, value_name = "SEED")]
    pub random: Option<u64>,
    /// Use the representative metric with this parameter
    #[arg(long, value_name = "L")]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub source: MetricSource,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[arg(long, value_parser = parse_family, conflicts_with = "algebra")]
    pub family: Option<Family>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Structure-constants file instead of a family
    #[arg(long, value_name = "FILE")]
    pub algebra: Option<PathBuf>,
    #[arg(long, value_name = "FILE", group = "src")]
    pub metric: Option<PathBuf>,
    #[arg(long, value_name = "SEED", group = "src")]
    pub random: Option<u64>,
    #[arg(long, value_name = "L", group = "src")]
    pub lambda: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DerivationsArgs {
    #[arg(long, value_parser = parse_family, conflicts_with = "algebra")]
    pub family: Option<Family>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Structure-constants file instead of a family
    #[arg(long, value_name = "FILE")]
    pub algebra: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub source: MetricSource,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one family
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Restrict to one dimension (default 3 to 6)
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random metrics per family and dimension
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

/// Rendered output plus exit code; a nonzero code here means the command
/// ran but its checks failed.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

fn emit<R: Report>(report: &R, output: &Output, code: u8) -> Outcome {
    Outcome {
        stdout: if output.json { report.to_json() } else { report.to_text() },
        code,
    }
}

fn check_tol(output: &Output) -> Result<(), CliError> {
    if output.tol.is_finite() && output.tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!("tolerance must be positive, got {}", output.tol)))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn read_metric(path: &Path, dim: usize) -> Result<GramMatrix, CliError> {
    let m = format::parse_matrix(&read_file(path)?)?;
    if m.rows() != dim {
        return Err(FormatError::Dimension {
            expected: dim,
            found: m.rows(),
        }
        .into());
    }
    Ok(GramMatrix::new(m)?)
}

fn metric_from(
    metric: Option<&Path>,
    random: Option<u64>,
    lambda: Option<f64>,
    dim: usize,
) -> Result<GramMatrix, CliError> {
    if let Some(path) = metric {
        read_metric(path, dim)
    } else if let Some(seed) = random {
        Ok(sample_metric(&RandomMetricSpec::new(seed), dim)?)
    } else if let Some(lam) = lambda {
        if !(lam >= 0.0 && lam.is_finite()) {
            return Err(CliError::Validation(format!("λ must be a nonnegative number, got {lam}")));
        }
        if dim < 3 {
            return Err(milnor_core::Error::Dimension { dim, min: 3 }.into());
        }
        Ok(GramMatrix::from_group_element(&representative(dim, lam))?)
    } else {
        Ok(GramMatrix::identity(dim))
    }
}

fn source_metric(src: &MetricSource, dim: usize) -> Result<GramMatrix, CliError> {
    metric_from(src.metric.as_deref(), src.random, src.lambda, dim)
}

fn family_algebra(args: &FamilyArgs) -> Result<LieAlgebra, CliError> {
    Ok(LieAlgebra::build_family(args.family, args.dim)?)
}

/// Algebra from `--algebra FILE` or `--family` with `--dim`.
fn select_algebra(
    family: Option<Family>,
    dim: Option<usize>,
    algebra: Option<&Path>,
) -> Result<LieAlgebra, CliError> {
    match (family, algebra) {
        (_, Some(path)) => {
            let alg = format::read_algebra(&read_file(path)?)?;
            if let Some(d) = dim.filter(|&d| d != alg.dim()) {
                return Err(FormatError::Dimension {
                    expected: d,
                    found: alg.dim(),
                }
                .into());
            }
            Ok(alg)
        }
        (Some(f), None) => {
            let n = dim.ok_or_else(|| CliError::Validation("--dim is required with --family".into()))?;
            Ok(LieAlgebra::build_family(f, n)?)
        }
        (None, None) => Err(CliError::Validation("give --family and --dim, or --algebra".into())),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Reduce(a) => run_reduce(a),
        Command::Curvature(a) => run_curvature(a),
        Command::Derivations(a) => run_derivations(a),
        Command::Solvsoliton(a) => run_solvsoliton(a),
        Command::SignatureSweep(a) => run_sweep(a),
        Command::VerifyPaper(a) => run_verify(a),
    }
}

fn run_reduce(a: &ReduceArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let alg = family_algebra(&a.family)?;
    let gram = source_metric(&a.source, a.family.dim)?;
    let r = reduce(&alg, &gram)?;
    let code = if r.residuals.within(a.output.tol) { 0 } else { 2 };
    Ok(emit(&ReduceReport::new(&r), &a.output, code))
}

fn run_curvature(a: &CurvatureArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let alg = select_algebra(a.family, a.dim, a.algebra.as_deref())?;
    let gram = metric_from(a.metric.as_deref(), a.random, a.lambda, alg.dim())?;
    let ricci = ricci_operator(&alg, &gram)?;
    let (family, lambda) = if alg.family().is_solvable_family() {
        (Some(alg.family().name().to_string()), Some(reduce(&alg, &gram)?.lambda))
    } else {
        (None, None)
    };
    Ok(emit(&CurvatureReport::new(family, lambda, &ricci), &a.output, 0))
}

fn run_derivations(a: &DerivationsArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let alg = select_algebra(a.family, a.dim, a.algebra.as_deref())?;
    let basis = derivation_basis(&alg)?;
    let (family, expected, pattern) = if alg.family().is_solvable_family() {
        (
            Some(alg.family().name().to_string()),
            Some(pattern_dimension(alg.dim())),
            Some(pattern_check(&alg, &basis)?),
        )
    } else {
        (None, None, None)
    };
    let code = match (expected, pattern) {
        (Some(e), Some(p)) if e != basis.len() || !p => 2,
        _ => 0,
    };
    let report = DerivationsReport::new(family, alg.dim(), basis.matrices(), expected, pattern);
    Ok(emit(&report, &a.output, code))
}

fn run_solvsoliton(a: &SolitonArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let alg = family_algebra(&a.family)?;
    let gram = source_metric(&a.source, a.family.dim)?;
    let cl = classify_metric(&alg, &gram, a.output.tol)?;
    let der = milnor_core::derivations::conjugated_derivation_basis(&derivation_basis(&alg)?, cl.lambda())?;
    let report = SolitonReport {
        family: alg.family().name().to_string(),
        dim: alg.dim(),
        lambda: cl.lambda(),
        k: cl.reduction.scale_k,
        is_solvsoliton: cl.verdict.is_solvsoliton,
        c: cl.verdict.c,
        c_unnormalized: cl.unnormalized_c(),
        derivation: format::matrix_rows(&cl.verdict.derivation(&der)),
        derivation_coeffs: cl.verdict.derivation_coeffs.clone(),
        residual: cl.verdict.residual,
        is_einstein: cl.verdict.is_einstein,
        einstein_residual: cl.verdict.einstein_residual,
        condition_number: cl.reduction.residuals.condition_number,
        ill_conditioned: cl.reduction.residuals.ill_conditioned,
    };
    Ok(emit(&report, &a.output, 0))
}

fn sweep_entry(f: Family, n: usize, samples: usize, seed: u64) -> Result<SweepEntry, CliError> {
    let alg = LieAlgebra::build_family(f, n)?;
    let (degenerate, generic) = Signature::family_pair(f, n)?;
    let mut counts = std::collections::BTreeMap::new();
    let mut outside = 0;
    for i in 0..samples {
        let gram = sample_metric(&RandomMetricSpec::new(seed.wrapping_add(i as u64)), n)?;
        let sig = ricci_operator(&alg, &gram)?.signature;
        if sig != degenerate && sig != generic {
            outside += 1;
        }
        *counts.entry(crate::report::SignatureTriple::from(sig)).or_insert(0) += 1;
    }
    Ok(SweepEntry {
        family: f.name().to_string(),
        dim: n,
        expected: [degenerate.into(), generic.into()],
        histogram: counts
            .into_iter()
            .map(|(signature, count)| SignatureCount { signature, count })
            .collect(),
        outside_expected: outside,
    })
}

fn run_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let families: Vec<Family> = match a.family {
        Some(f) => vec![f],
        None => Family::SOLVABLE.to_vec(),
    };
    let dims: Vec<usize> = match a.dim {
        Some(n) => vec![n],
        None => (3..=6).collect(),
    };
    let jobs: Vec<(Family, usize)> = families
        .iter()
        .flat_map(|&f| dims.iter().map(move |&n| (f, n)))
        .collect();
    let entries = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(f, n)| s.spawn(move || sweep_entry(f, n, a.samples, a.seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CliError::Numerical("sweep worker panicked".into()))))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let code = if entries.iter().any(|e| e.outside_expected > 0) { 2 } else { 0 };
    let report = SweepReport {
        seed: a.seed,
        samples: a.samples,
        entries,
    };
    Ok(emit(&report, &a.output, code))
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    check_tol(&a.output)?;
    let report = verify::run(&VerifyConfig {
        samples: a.samples,
        seed: a.seed,
        tol: a.output.tol,
    });
    let code = if report.passed { 0 } else { 2 };
    Ok(emit(&report, &a.output, code))
}
