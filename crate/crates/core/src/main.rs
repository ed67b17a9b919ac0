use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fairmsr::bench::{run_bench, threads_from_env, BenchConfig, Suite};
use fairmsr::gen::{generate, parse_ratio, ConstraintKind, GenParams, Geometry};
use fairmsr::instance::{read_instance, read_solution, write_instance, Instance, Rational, SolutionFile, SolutionMeta};
use fairmsr::oracle::{exact_msr_limited, OracleError, MAX_EXACT_N};
use fairmsr::search::{solve, SolveError, SolveOptions};
use fairmsr::{clustering_feasible, CenterRule, Mode};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BOUND_VIOLATED: u8 = 3;

#[derive(Parser)]
#[command(name = "fairmsr", version, about = "k-min-sum-radii clustering under mergeable constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate an instance and write the solution JSON.
    Solve(SolveArgs),
    /// Solve an instance exactly by enumeration.
    Exact(ExactArgs),
    /// Check an instance file, and optionally a solution for it.
    Validate(ValidateArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run the seeded approximation-ratio sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Components,
    OneOne,
    LowerBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum CenterRuleArg {
    LargestBall,
    OneCenter,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Square,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    None,
    ExactFairness,
    RatioBalance,
    ExactBalance,
    LuFairness,
    LowerBound,
}

#[derive(Args)]
struct SolverFlags {
    /// Override the instance's epsilon.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Center choice for the connected-components strategy.
    #[arg(long, value_enum, default_value = "largest-ball")]
    center_rule: CenterRuleArg,
}

impl SolverFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            mode: match self.mode {
                ModeArg::Auto => Mode::Auto,
                ModeArg::Components => Mode::Components,
                ModeArg::OneOne => Mode::OneOne,
                ModeArg::LowerBound => Mode::LowerBound,
            },
            center_rule: match self.center_rule {
                CenterRuleArg::LargestBall => CenterRule::LargestBall,
                CenterRuleArg::OneCenter => CenterRule::OneCenter,
            },
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Solution path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recorded in the solution metadata.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverFlags,
    /// Record wall-clock time instead of 0.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = MAX_EXACT_N)]
    max_exact_n: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Solution to check against the instance.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    colors: usize,
    /// Relative color sizes such as `2:1`; equal sizes when absent.
    #[arg(long)]
    ratio: Option<String>,
    #[arg(long, value_enum, default_value = "exact-fairness")]
    constraint: ConstraintArg,
    #[arg(long, value_enum, default_value = "square")]
    geometry: GeometryArg,
    #[arg(long)]
    ell: Option<usize>,
    /// Balance threshold as `num/den`.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Instances per suite.
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// Suites to run (repeatable); all when absent.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "largest-ball")]
    center_rule: CenterRuleArg,
    #[arg(long, default_value_t = MAX_EXACT_N)]
    max_exact_n: usize,
    #[arg(long)]
    timing: bool,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(path: &Path, eps: Option<f64>) -> Result<Instance> {
    let inst = read_instance(path)?;
    Ok(match eps {
        Some(e) => inst.with_epsilon(e)?,
        None => inst,
    })
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let inst = load(&args.input, args.solver.eps)?;
    let start = Instant::now();
    let result = solve(&inst, &args.solver.options());
    let elapsed_ms = if args.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let mut meta = SolutionMeta { elapsed_ms, seed: args.seed, ..SolutionMeta::default() };
    let (file, code) = match result {
        Ok(rep) => {
            meta.profiles_tried = rep.profiles_tried;
            meta.tuples_tried = rep.tuples_tried;
            let feasible = clustering_feasible(inst.constraint(), &inst, &rep.clustering);
            (SolutionFile::new(&rep.clustering, feasible, meta), 0)
        }
        Err(SolveError::Mode(e)) => bail!(e),
        Err(e @ SolveError::Infeasible(_)) => {
            eprintln!("fairmsr: {e}");
            (SolutionFile::infeasible(meta), EXIT_INFEASIBLE)
        }
        Err(e @ SolveError::NoFeasibleCover { profiles_tried, tuples_tried }) => {
            eprintln!("fairmsr: {e}");
            meta.profiles_tried = profiles_tried;
            meta.tuples_tried = tuples_tried;
            (SolutionFile::infeasible(meta), EXIT_INFEASIBLE)
        }
    };
    emit(args.out.as_deref(), &(file.to_json() + "\n"))?;
    Ok(code)
}

fn cmd_exact(args: &ExactArgs) -> Result<u8> {
    let inst = read_instance(&args.input)?;
    match exact_msr_limited(&inst, args.max_exact_n) {
        Ok(sol) => {
            let file = SolutionFile::new(&sol.clustering, true, SolutionMeta::default());
            emit(args.out.as_deref(), &(file.to_json() + "\n"))?;
            Ok(0)
        }
        Err(OracleError::Infeasible) => {
            eprintln!("fairmsr: {}", OracleError::Infeasible);
            let file = SolutionFile::infeasible(SolutionMeta::default());
            emit(args.out.as_deref(), &(file.to_json() + "\n"))?;
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => bail!(e),
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8> {
    let inst = read_instance(&args.input)?;
    println!("instance ok: n={} k={} colors={} constraint={}", inst.n(), inst.k(), inst.num_colors(), inst.constraint().kind_name());
    if let Some(path) = &args.solution {
        let file = read_solution(path)?;
        if !file.feasible {
            println!("solution marks itself infeasible");
            return Ok(EXIT_INFEASIBLE);
        }
        let clustering = file.to_clustering(&inst)?;
        if !clustering_feasible(inst.constraint(), &inst, &clustering) {
            bail!("solution violates the {} constraint", inst.constraint().kind_name());
        }
        println!("solution ok: {} clusters, cost {}", clustering.num_clusters(), clustering.cost());
    }
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> Result<u8> {
    let ratio = match &args.ratio {
        Some(r) => Some(parse_ratio(r).ok_or_else(|| anyhow!("cannot parse ratio {r:?}"))?),
        None => None,
    };
    let b = match &args.b {
        Some(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s, "1"));
            let parsed = num.trim().parse().ok().zip(den.trim().parse().ok()).and_then(|(n, d)| Rational::new(n, d));
            Some(parsed.ok_or_else(|| anyhow!("cannot parse b {s:?}"))?)
        }
        None => None,
    };
    let params = GenParams {
        n: args.n,
        k: args.k,
        colors: args.colors,
        ratio,
        constraint: match args.constraint {
            ConstraintArg::None => ConstraintKind::None,
            ConstraintArg::ExactFairness => ConstraintKind::ExactFairness,
            ConstraintArg::RatioBalance => ConstraintKind::RatioBalance,
            ConstraintArg::ExactBalance => ConstraintKind::ExactBalance,
            ConstraintArg::LuFairness => ConstraintKind::LuFairness,
            ConstraintArg::LowerBound => ConstraintKind::LowerBound,
        },
        geometry: match args.geometry {
            GeometryArg::Square => Geometry::Square,
            GeometryArg::Graph => Geometry::Graph,
        },
        ell: args.ell,
        b,
        epsilon: args.eps,
    };
    let inst = generate(&params, args.seed)?;
    match &args.out {
        Some(path) => write_instance(path, &inst)?,
        None => println!("{}", inst.to_json()),
    }
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let suites = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites
            .iter()
            .map(|s| Suite::parse(s).ok_or_else(|| anyhow!("unknown suite {s:?}")))
            .collect::<Result<_>>()?
    };
    let flags = SolverFlags { eps: None, mode: args.mode, center_rule: args.center_rule };
    let cfg = BenchConfig {
        suites,
        instances: args.instances,
        seed: args.seed,
        eps: args.eps,
        opts: flags.options(),
        max_exact_n: args.max_exact_n,
        timing: args.timing,
        threads: threads_from_env(),
    };
    let report = run_bench(&cfg)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    emit(args.out.as_deref(), &String::from_utf8(csv)?)?;
    eprint!("{}", report.summary());
    for suite in report.suites.iter().filter(|s| s.skipped > 0) {
        eprintln!("note: {} instances of {} exceeded the exact-solver limit and were skipped", suite.skipped, suite.name);
    }
    if report.violations() > 0 {
        eprintln!("fairmsr: {} bound violations", report.violations());
        return Ok(EXIT_BOUND_VIOLATED);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fairmsr: {e:#}");
            ExitCode::from(1)
        }
    }
}
