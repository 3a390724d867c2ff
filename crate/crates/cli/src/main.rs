use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sparse_svm::bounds::default_lambda;
use sparse_svm::datagen::{MarginProblemSpec, ProblemSpec, SubgaussianProblemSpec};
use sparse_svm::experiments::io::{read_dataset, spec_path, write_csv, write_dataset, write_json, SpecFile};
use sparse_svm::experiments::sweep::{resolve_jobs, run_sweep, SweepFamily, SweepSpec, JOBS_ENV, SWEEP_HEADER};
use sparse_svm::experiments::train::{train, SolverKind, TrainConfig};
use sparse_svm::experiments::verify::{all_mandatory_pass, run_check, Check, CHECK_HEADER};
use sparse_svm::{Error, SparseSvmConfig};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "sparse-svm", version, about = "Sparse SVM training through linear programming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset CSV and its sidecar spec JSON.
    Gen(GenArgs),
    /// Train on a dataset CSV and write a JSON report.
    Train(TrainArgs),
    /// Check closed-form bounds against measurements; one CSV row per (instance, quantity).
    VerifyBounds(VerifyArgs),
    /// Measure norms, iterations and oracle queries over a (p, m, eps) grid.
    Sweep(SweepArgs),
}

/// Comma-separated list; the empty string is the empty list.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

fn parse_list<T: FromStr>(s: &str) -> Result<List<T>, String>
where
    T::Err: std::fmt::Display,
{
    if s.trim().is_empty() {
        return Ok(List(Vec::new()));
    }
    s.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|e| format!("bad list entry {v:?}: {e}")))
        .collect::<Result<Vec<T>, String>>()
        .map(List)
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Margin,
    Subgaussian,
    Xor,
    Paired,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "p-prime")]
    p_prime: Option<usize>,
    /// Margin of the margin family.
    #[arg(long)]
    nu: Option<f64>,
    /// Per-feature mean shift of the subgaussian family.
    #[arg(long)]
    c: Option<f64>,
    /// Truncation radius of the subgaussian family; defaults to 2 ln p.
    #[arg(long)]
    delta: Option<f64>,
    /// Projected mean of the subgaussian family; defaults to c sqrt(p').
    #[arg(long)]
    mu: Option<f64>,
    /// Point shared by every pair of the paired family.
    #[arg(long, value_parser = parse_list::<f64>)]
    x: Option<List<f64>>,
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    solver: Solver,
    /// Defaults to 1/sqrt(1 + 2 ln p).
    #[arg(long, conflicts_with = "hard")]
    lambda: Option<f64>,
    /// Hard-margin program (no slack variables).
    #[arg(long)]
    hard: bool,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// L1 bound on the primal solution for the MWU solver.
    #[arg(long)]
    primal_bound: Option<f64>,
    /// L1 bound on the dual solution for the MWU solver.
    #[arg(long)]
    dual_bound: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Solver {
    Exact,
    Mwu,
}

impl From<Solver> for SolverKind {
    fn from(s: Solver) -> Self {
        match s {
            Solver::Exact => SolverKind::Exact,
            Solver::Mwu => SolverKind::Mwu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Paired,
    Xor,
    #[value(alias = "margin")]
    HardMargin,
    Moments,
    Domination,
    Bernstein,
    #[value(alias = "subgaussian")]
    NormBounds,
    SolverAgreement,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckKind,
    #[arg(long, value_parser = parse_list::<usize>, default_value = "16,64,256")]
    p: List<usize>,
    #[arg(long = "p-prime", value_parser = parse_list::<usize>, default_value = "1,2,4")]
    p_prime: List<usize>,
    #[arg(long, value_parser = parse_list::<f64>, default_value = "0.25,0.5,1")]
    nu: List<f64>,
    /// Sample-size cap of the margin grid.
    #[arg(long, default_value_t = 500)]
    m_cap: usize,
    /// Sample size (bernstein).
    #[arg(long, default_value_t = 200)]
    m: usize,
    #[arg(long, default_value_t = 1.5)]
    c: f64,
    #[arg(long, value_parser = parse_list::<f64>, default_value = "1.5,2,3,5")]
    mu: List<f64>,
    /// Truncation radius (domination).
    #[arg(long, default_value_t = 10.0)]
    delta_trunc: f64,
    /// Confidence parameter of the probabilistic bounds.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0.001)]
    significance: f64,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 1_000_000)]
    draws: usize,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, value_parser = parse_list::<f64>, default_value = "0.1,0.25,1")]
    lambda: List<f64>,
    #[arg(long, value_parser = parse_list::<usize>, default_value = "1,5,50")]
    copies: List<usize>,
    #[arg(long, value_parser = parse_list::<f64>, default_value = "0.7,-1.3,2")]
    x: List<f64>,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the core count.
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamilyArg {
    Subgaussian,
    Paired,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "subgaussian")]
    family: SweepFamilyArg,
    #[arg(long, value_enum, default_value = "exact")]
    solver: Solver,
    #[arg(long, value_parser = parse_list::<usize>)]
    p: List<usize>,
    /// Defaults to m = p/2.
    #[arg(long, value_parser = parse_list::<usize>)]
    m: Option<List<usize>>,
    #[arg(long, value_parser = parse_list::<f64>, default_value = "0.05")]
    eps: List<f64>,
    #[arg(long, default_value_t = 1)]
    replicates: usize,
    /// Defaults to 1/sqrt(1 + 2 ln p).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "p-prime", default_value_t = 5)]
    p_prime: usize,
    #[arg(long, default_value_t = 1.5)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = JOBS_ENV)]
    jobs: Option<usize>,
    /// Fill the wall_ms column (makes the CSV run-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(short, long)]
    output: PathBuf,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Violation(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for the {family} family")))
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let (spec, m) = match args.family {
        Family::Margin => {
            let p = require(args.p, "p", "margin")?;
            let pp = require(args.p_prime, "p-prime", "margin")?;
            let nu = require(args.nu, "nu", "margin")?;
            let m = require(args.m, "m", "margin")?;
            (ProblemSpec::Margin(MarginProblemSpec::new(p, pp, nu)?), m)
        }
        Family::Subgaussian => {
            let p = require(args.p, "p", "subgaussian")?;
            let pp = require(args.p_prime, "p-prime", "subgaussian")?;
            let c = require(args.c, "c", "subgaussian")?;
            let m = require(args.m, "m", "subgaussian")?;
            let delta = args.delta.unwrap_or(2.0 * (p as f64).ln());
            let mut spec = SubgaussianProblemSpec::new(p, pp, c, delta)?;
            if let Some(mu) = args.mu {
                spec = spec.with_mu(mu)?;
            }
            (ProblemSpec::Subgaussian(spec), m)
        }
        Family::Xor => (ProblemSpec::Xor, 4),
        Family::Paired => {
            let x = require(args.x, "x", "paired")?.0;
            let copies = require(args.copies, "copies", "paired")?;
            (ProblemSpec::Paired { x, copies }, 2 * copies)
        }
    };
    let file = SpecFile { spec, m, seed: args.seed };
    let d = file.generate()?;
    write_dataset(&d, &args.output)?;
    write_json(&file, &spec_path(&args.output))?;
    eprintln!("wrote {} rows x {} features to {}", d.m(), d.p(), args.output.display());
    Ok(())
}

fn train_cmd(args: TrainArgs) -> Result<(), Failure> {
    let d = read_dataset(&args.input)?;
    let svm = if args.hard {
        SparseSvmConfig::hard()
    } else {
        SparseSvmConfig::soft(args.lambda.unwrap_or_else(|| default_lambda(d.p())))
    };
    let cfg = TrainConfig {
        solver: args.solver.into(),
        epsilon: args.eps,
        primal_bound: args.primal_bound,
        dual_bound: args.dual_bound,
        seed: args.seed,
        ..TrainConfig::exact(svm)
    };
    let report = train(&d, &cfg)?;
    write_json(&report, &args.output)?;
    eprintln!(
        "objective {:.6}  R {:.6}  r {:.6}  gap {:.2e}  iterations {}",
        report.objective, report.primal_norm, report.dual_norm, report.duality_gap, report.iterations
    );
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let check = match args.check {
        CheckKind::Paired => Check::Paired {
            x: args.x.0,
            copies: args.copies.0,
            lambda: args.lambda.0.first().copied().unwrap_or(0.1),
        },
        CheckKind::Xor => Check::Xor { lambdas: args.lambda.0 },
        CheckKind::HardMargin => Check::HardMargin {
            p: args.p.0,
            p_prime: args.p_prime.0,
            nu: args.nu.0,
            instances: args.instances,
            m_cap: args.m_cap,
        },
        CheckKind::Moments => Check::Moments { points: args.points, lo: -8.0, hi: 8.0 },
        CheckKind::Domination => {
            Check::Domination { mu: args.mu.0, delta_trunc: args.delta_trunc, draws: args.draws }
        }
        CheckKind::Bernstein => Check::Bernstein {
            p: single(&args.p, "p")?,
            p_prime: single(&args.p_prime, "p-prime")?,
            c: args.c,
            m: args.m,
            trials: args.instances,
            delta: args.delta,
            significance: args.significance,
        },
        CheckKind::NormBounds => Check::NormBounds {
            p: args.p.0,
            p_prime: single(&args.p_prime, "p-prime")?,
            c: args.c,
            instances: args.instances,
            delta: args.delta,
        },
        CheckKind::SolverAgreement => Check::SolverAgreement {
            instances: args.instances,
            epsilon: args.eps,
            max_m: 30,
            max_p: 30,
        },
    };
    let rows = run_check(&check, args.seed, resolve_jobs(args.jobs))?;
    write_csv(&rows, &CHECK_HEADER, &args.output)?;
    let failed = rows.iter().filter(|r| r.mandatory && !r.pass).count();
    eprintln!("{}: {} rows, {} mandatory failures", check.name(), rows.len(), failed);
    if all_mandatory_pass(&rows) {
        Ok(())
    } else {
        Err(Failure::Violation(failed))
    }
}

fn single(list: &List<usize>, flag: &str) -> Result<usize, Failure> {
    match list.0.as_slice() {
        [v] => Ok(*v),
        _ => Err(Failure::Usage(format!("--{flag} takes exactly one value for this check"))),
    }
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let spec = SweepSpec {
        family: match args.family {
            SweepFamilyArg::Subgaussian => SweepFamily::Subgaussian { p_prime: args.p_prime, c: args.c },
            SweepFamilyArg::Paired => SweepFamily::Paired,
        },
        solver: args.solver.into(),
        p: args.p.0,
        m: args.m.map(|l| l.0),
        eps: args.eps.0,
        replicates: args.replicates,
        lambda: args.lambda,
        seed: args.seed,
        timing: args.timing,
    };
    let rows = run_sweep(&spec, resolve_jobs(args.jobs))?;
    write_csv(&rows, &SWEEP_HEADER, &args.output)?;
    eprintln!("{} cells written to {}", rows.len(), args.output.display());
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible
        | Error::Unbounded
        | Error::IterationLimit(_)
        | Error::NoFeasibleSolutionWithinBounds
        | Error::Numerical(_)
        | Error::RejectionCap(_) => EXIT_SOLVER,
        _ => EXIT_USAGE,
    }
}

fn report(result: Result<(), Failure>, output: &Path) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Violation(n)) => {
            eprintln!("{n} mandatory checks failed; see {}", output.display());
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(a) => {
            let out = a.output.clone();
            report(gen(a), &out)
        }
        Command::Train(a) => {
            let out = a.output.clone();
            report(train_cmd(a), &out)
        }
        Command::VerifyBounds(a) => {
            let out = a.output.clone();
            report(verify(a), &out)
        }
        Command::Sweep(a) => {
            let out = a.output.clone();
            report(sweep(a), &out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_parsing() {
        assert!(parse_list::<usize>("").unwrap().0.is_empty());
        assert!(parse_list::<usize>("  ").unwrap().0.is_empty());
        assert_eq!(parse_list::<usize>("1, 2,3").unwrap().0, vec![1, 2, 3]);
        assert_eq!(parse_list::<f64>("0.5,-1").unwrap().0, vec![0.5, -1.0]);
        assert!(parse_list::<usize>("1,,2").is_err());
        assert!(parse_list::<usize>("a").is_err());
    }

    #[test]
    fn solver_errors_map_to_their_own_code() {
        assert_eq!(exit_code(&Error::Infeasible), EXIT_SOLVER);
        assert_eq!(exit_code(&Error::Io("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::InvalidParameter("x".into())), EXIT_USAGE);
    }
}
