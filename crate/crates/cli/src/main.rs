//! `mirrorpair`: solve, verify and generate two-reflector design problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mirrorpair::io::{
    load_problem_file, read_solution, to_json_string, write_json, write_report, write_solution, ProblemFile,
    TypeSelection,
};
use mirrorpair::ot::{CostMatrix, Method};
use mirrorpair::verify::{verify_designs, ReportMetadata, VerifyOptions};
use mirrorpair::{design_with_cost, Demo, Error, Gauge};

#[derive(Parser)]
#[command(name = "mirrorpair", version, about = "Two-reflector beam shaper design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Print nothing on success.
    #[arg(long, global = true, conflicts_with = "json")]
    quiet: bool,
    /// Print the summary or report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Design reflector pair(s) for a problem file.
    Solve {
        problem: PathBuf,
        /// Overrides the problem file's solver type.
        #[arg(long = "type", value_enum)]
        kind: Option<TypeArg>,
        /// Overrides the problem file's solver method.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, default_value = "solution")]
        out: PathBuf,
        /// Overrides the problem file's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Mesh nodes per axis; by default grid supports are meshed at
        /// their points.
        #[arg(long)]
        mesh_nodes: Option<usize>,
    },
    /// Check a solution directory written by `solve`.
    Verify {
        dir: PathBuf,
        /// Refinement levels for the Monge-Ampère study (needs an analytic
        /// problem).
        #[arg(long)]
        refinements: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random feasible plans per design for the optimality certificate.
        #[arg(long, default_value_t = 100)]
        random_plans: usize,
        /// Pushforward bins per axis.
        #[arg(long, default_value_t = 4)]
        bins: usize,
        /// Report path; defaults to `report.json` inside the directory.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write the problem file of a canonical instance.
    Demo {
        name: String,
        /// Cells per axis.
        #[arg(long)]
        cells: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    A,
    B,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Entropic,
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CHECKS_FAILED: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Solver(_) | Error::Internal(_) => EXIT_SOLVER,
        Error::InvalidArgument(_)
        | Error::Unsolvable(_)
        | Error::BalanceViolation { .. }
        | Error::ProblemTooLarge { .. }
        | Error::Parse { .. } => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            problem,
            kind,
            method,
            out,
            seed,
            mesh_nodes,
        } => solve(&problem, kind, method, &out, seed, mesh_nodes, &cli.output),
        Command::Verify {
            dir,
            refinements,
            seed,
            random_plans,
            bins,
            report,
        } => verify(&dir, refinements, seed, random_plans, bins, report, &cli.output),
        Command::Demo { name, cells, out } => demo(&name, cells, out.as_deref(), &cli.output),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn solve(
    path: &Path,
    kind: Option<TypeArg>,
    method: Option<MethodArg>,
    out: &Path,
    seed: Option<u64>,
    mesh_nodes: Option<usize>,
    output: &OutputArgs,
) -> Result<u8, Error> {
    if mesh_nodes.is_some_and(|n| n < 2) {
        return Err(Error::InvalidArgument("--mesh-nodes must be at least 2".into()));
    }
    let mut loaded = load_problem_file(path)?;
    let solver = &mut loaded.file.solver;
    if let Some(k) = kind {
        solver.kind = match k {
            TypeArg::A => TypeSelection::A,
            TypeArg::B => TypeSelection::B,
            TypeArg::Both => TypeSelection::Both,
        };
    }
    if let Some(m) = method {
        solver.method = match m {
            MethodArg::Exact => Method::ExactLp,
            MethodArg::Entropic => Method::Entropic,
        };
    }
    if let Some(s) = seed {
        solver.seed = s;
    }
    let settings = solver.settings();
    let spec = &loaded.spec;
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, settings.exact.exec);
    let designs = solver
        .kind
        .kinds()
        .into_iter()
        .map(|k| design_with_cost(spec, &cost, k, &settings))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = write_solution(out, &loaded, &designs, mesh_nodes)?;
    if output.json {
        print!("{}", to_json_string(&summary)?);
    } else if !output.quiet {
        println!(
            "solved {} source x {} target points (beta {}, rescale factor {})",
            summary.source_points, summary.target_points, summary.beta, summary.rescale_factor
        );
        for d in &summary.designs {
            println!(
                "type {}: cost {:e}, F {:e} (expected {:e}), {} iterations, marginal error {:e}",
                d.kind.label(),
                d.cost,
                d.functional_f,
                d.expected_f,
                d.iterations,
                d.marginal_error
            );
        }
        if let (Some(a), Some(b)) = (summary.cost_a, summary.cost_b) {
            println!("cost_A {a:e} <= cost_B {b:e}: {}", a <= b);
        }
        println!("wrote {}", out.display());
    }
    Ok(0)
}

fn verify(
    dir: &Path,
    refinements: Option<usize>,
    seed: Option<u64>,
    random_plans: usize,
    bins: usize,
    report_path: Option<PathBuf>,
    output: &OutputArgs,
) -> Result<u8, Error> {
    let stored = read_solution(dir)?;
    let problem = &stored.problem;
    let mut opts = VerifyOptions::new(problem.spec.beta);
    opts.front_offset = problem.d;
    opts.random_plans = random_plans;
    opts.bins_per_axis = bins.max(1);
    opts.seed = seed.unwrap_or(problem.file.solver.seed);
    opts.settings = problem.file.solver.settings();
    if let Some(k) = refinements {
        if k < 2 {
            return Err(Error::InvalidArgument("--refinements needs at least 2 levels".into()));
        }
        let model = problem.model.clone().ok_or_else(|| {
            Error::InvalidArgument("--refinements needs a problem with an analytic model".into())
        })?;
        opts.monge_ampere = Some((model, k));
    }
    let metadata = ReportMetadata {
        method: Some(to_label(stored.summary.method)),
        rescale_factor: Some(stored.summary.rescale_factor),
        ..Default::default()
    };
    let designs: Vec<_> = stored.designs.iter().map(|(p, plan)| (p, Some(plan))).collect();
    let report = verify_designs(&problem.spec, &designs, &opts, metadata)?;
    let path = report_path.unwrap_or_else(|| dir.join("report.json"));
    write_report(&report, &path)?;
    if output.json {
        print!("{}", to_json_string(&report)?);
    } else if !output.quiet {
        let flag = |b: Option<bool>| match b {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "skipped",
        };
        let num = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:e}"));
        let p = report.passed;
        println!("optical path       {:<8} {}", flag(p.opl), num(report.opl_max_abs_dev));
        println!("reflection law     {:<8} {}", flag(p.reflection), num(report.reflection_first_surface_residual));
        println!("pushforward        {:<8} {}", flag(p.pushforward), num(report.pushforward_l1_error));
        println!("energy balance     {:<8} {}", flag(p.energy_balance), num(report.energy_balance_rel_error));
        println!("certificate        {:<8} {}", flag(p.certificate), num(report.certificate_slackness_violation));
        let ma = report.monge_ampere_residuals.as_ref().map(|r| {
            r.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ")
        });
        println!("Monge-Ampère       {:<8} {}", flag(p.monge_ampere), ma.unwrap_or_else(|| "-".into()));
        println!("wrote {}", path.display());
    }
    Ok(if report.all_passed { 0 } else { EXIT_CHECKS_FAILED })
}

fn to_label(m: Method) -> String {
    match m {
        Method::ExactLp => "exact".into(),
        Method::Entropic => "entropic".into(),
    }
}

fn demo(name: &str, cells: Option<usize>, out: Option<&Path>, output: &OutputArgs) -> Result<u8, Error> {
    let demo: Demo = name.parse()?;
    let cells = cells.unwrap_or(demo.default_cells());
    if cells == 0 {
        return Err(Error::InvalidArgument("--cells must be positive".into()));
    }
    let mut file = ProblemFile::from_synthetic(&demo.problem_with_cells(cells));
    if demo == Demo::Identity {
        // flat mirrors at heights beta/2 and 0
        file.solver.gauge = Gauge::MinSecondZero;
    }
    match out {
        Some(path) => {
            write_json(path, &file)?;
            if !output.quiet {
                println!("wrote {}", path.display());
            }
        }
        None => print!("{}", to_json_string(&file)?),
    }
    Ok(0)
}
