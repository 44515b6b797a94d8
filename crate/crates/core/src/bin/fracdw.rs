//! `fracdw`: solve, verify and study fractional diffusion-wave problems.
//!
//! Exit codes: 0 success, 1 a report or study failed, 2 bad input or a
//! violated hypothesis, 3 numerical failure, 4 I/O failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracdw::energy_monitor::{
    calibrate, check_auxiliary, check_theorem, check_theorem3_printed, norms, EstimateReport,
    MonitorError, TOL_REL,
};
use fracdw::numeric::observed_order;
use fracdw::problem_spec::{
    manufactured, parse_problem, validate, ProblemSpec, SpaceTimeFn, Theorem,
};
use fracdw::solver::{solve_with, SolutionField, SolverError, SolverOptions};
use fracdw::suite::{row_id, run_suite, SuiteConfig, ROWS};
use fracdw::{Execution, FracOrder};

#[derive(Parser)]
#[command(
    name = "fracdw",
    version,
    about = "Fractional diffusion-wave solvers and a priori estimate checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem and write the field and its norms as CSV.
    Solve(ProblemArgs),
    /// Solve, then check the matching a priori estimate and auxiliary inequalities.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Constant for the estimate (default: explicit for Theorem 1, calibrated otherwise).
        #[arg(long)]
        constant: Option<f64>,
        /// Multiplier on the report tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
    },
    /// Error table against the exact solution under simultaneous refinement.
    Converge {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Number of grids, each twice as fine as the last.
        #[arg(long, default_value_t = 4, value_parser = parse_levels)]
        levels: usize,
        /// Smallest acceptable observed order between the two finest grids.
        #[arg(long, default_value_t = 1.0)]
        min_order: f64,
    },
    /// Run the verification battery and print a pass/fail matrix.
    Suite {
        /// Multiplier on every tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        /// Rows to run, by key or number (comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, env = "FRACDW_OUT", default_value = "fracdw-out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// Built-in manufactured problem.
    #[arg(
        long,
        conflicts_with = "problem_file",
        required_unless_present = "problem_file"
    )]
    catalog: Option<String>,
    /// Problem description file.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Fractional order in (0, 1); required with --catalog.
    #[arg(long, value_parser = parse_alpha)]
    alpha: Option<f64>,
    /// Spatial intervals (power of two, at least 4).
    #[arg(long, value_parser = parse_size)]
    nx: Option<usize>,
    /// Time steps (power of two, at least 4).
    #[arg(long, value_parser = parse_size)]
    nt: Option<usize>,
    #[arg(long, env = "FRACDW_OUT", default_value = "fracdw-out")]
    out: PathBuf,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    FracOrder::new(a)
        .map(FracOrder::value)
        .map_err(|e| e.to_string())
}

fn parse_size(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n >= 4 && n.is_power_of_two() {
        Ok(n)
    } else {
        Err(format!(
            "grid sizes must be powers of two and at least 4, got {n}"
        ))
    }
}

fn parse_levels(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (2..=6).contains(&n) {
        Ok(n)
    } else {
        Err(format!("levels must lie in [2, 6], got {n}"))
    }
}

/// Failure carrying its exit code.
struct Fail(u8, String);

impl From<SolverError> for Fail {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::NonFinite { .. } | SolverError::ZeroPivot { .. } => 3,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

impl From<MonitorError> for Fail {
    fn from(e: MonitorError) -> Self {
        match e {
            MonitorError::Solver(s) => s.into(),
            other => Fail(2, other.to_string()),
        }
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Fail {
    Fail(4, format!("{}: {e}", path.display()))
}

struct Loaded {
    stem: String,
    spec: ProblemSpec,
    exact: Option<SpaceTimeFn>,
}

fn load(p: &ProblemArgs) -> Result<Loaded, Fail> {
    if let Some(name) = &p.catalog {
        let alpha = p
            .alpha
            .ok_or_else(|| Fail(2, "--alpha is required with --catalog".to_string()))?;
        let alpha = FracOrder::new(alpha).map_err(|e| Fail(2, e.to_string()))?;
        let m = manufactured(name, alpha).map_err(|e| Fail(2, e.to_string()))?;
        return Ok(Loaded {
            stem: name.clone(),
            spec: m.spec,
            exact: Some(m.exact),
        });
    }
    let path = p.problem_file.as_ref().expect("clap requires one source");
    let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    let file =
        parse_problem(&text, p.alpha).map_err(|e| Fail(2, format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().map_or_else(
        || "problem".to_string(),
        |s| s.to_string_lossy().into_owned(),
    );
    Ok(Loaded {
        stem,
        spec: file.spec,
        exact: file.exact,
    })
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf, Fail> {
    std::fs::create_dir_all(dir).map_err(|e| io_fail(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| io_fail(&path, e))?;
    Ok(path)
}

fn run_solve(loaded: &Loaded, nx: usize, nt: usize) -> Result<SolutionField, Fail> {
    let grid = loaded
        .spec
        .grid(nx, nt)
        .map_err(|e| Fail(2, e.to_string()))?;
    let report = validate(&loaded.spec, &grid);
    if !report.passed() {
        return Err(Fail(
            2,
            format!(
                "hypotheses of {} not satisfied: {}",
                report.theorem.name(),
                report.summary()
            ),
        ));
    }
    Ok(solve_with(&loaded.spec, &grid, &SolverOptions::default())?)
}

fn cmd_solve(p: &ProblemArgs) -> Result<u8, Fail> {
    let loaded = load(p)?;
    let field = run_solve(&loaded, p.nx.unwrap_or(64), p.nt.unwrap_or(64))?;
    let a = write(
        &p.out,
        &format!("{}_field.csv", loaded.stem),
        &field.to_csv(),
    )?;
    let b = write(
        &p.out,
        &format!("{}_norms.csv", loaded.stem),
        &norms(&field).to_csv(),
    )?;
    println!("{field}");
    if let Some(exact) = &loaded.exact {
        let (max, l2) = field.errors_against(exact);
        println!("max error {max:.16e}  L2 error {l2:.16e}");
    }
    println!("wrote {}", a.display());
    println!("wrote {}", b.display());
    Ok(0)
}

fn cmd_verify(p: &ProblemArgs, constant: Option<f64>, tol: f64) -> Result<u8, Fail> {
    let loaded = load(p)?;
    let field = run_solve(&loaded, p.nx.unwrap_or(64), p.nt.unwrap_or(64))?;
    let theorem = loaded.spec.theorem();
    let constant = match (constant, theorem) {
        (Some(c), _) => Some(c),
        (None, Theorem::DiffusionDirichlet) => None,
        (None, t) => {
            let alpha = FracOrder::new(0.5).expect("valid order");
            calibrate(alpha, 128, Execution::default())?.get(t)
        }
    };
    let mut reports: Vec<EstimateReport> = vec![check_theorem(&field, &loaded.spec, constant)?];
    reports.extend(check_auxiliary(&field)?);
    let mut informational = Vec::new();
    if theorem == Theorem::WaveDirichlet {
        informational.push(check_theorem3_printed(
            &field,
            &loaded.spec,
            reports[0].constant_used,
        )?);
    }
    let mut all_pass = true;
    for r in reports.iter_mut().chain(informational.iter_mut()) {
        r.retolerance(TOL_REL * tol);
    }
    for r in &reports {
        all_pass &= r.holds();
        println!("{}", r.summary_line());
        let name = format!("{}_{}.csv", loaded.stem, r.name.replace([' ', '='], "_"));
        write(&p.out, &name, &r.to_csv())?;
    }
    for r in &informational {
        println!("{} (informational)", r.summary_line());
        write(
            &p.out,
            &format!("{}_{}.csv", loaded.stem, r.name),
            &r.to_csv(),
        )?;
    }
    println!(
        "{}",
        if all_pass {
            "all checks pass"
        } else {
            "some checks failed"
        }
    );
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_converge(p: &ProblemArgs, levels: usize, min_order: f64) -> Result<u8, Fail> {
    let loaded = load(p)?;
    let exact = loaded
        .exact
        .clone()
        .ok_or_else(|| Fail(2, "convergence study needs an exact solution".to_string()))?;
    let (nx0, nt0) = (p.nx.unwrap_or(8), p.nt.unwrap_or(8));

    let grid0 = loaded
        .spec
        .grid(nx0, nt0)
        .map_err(|e| Fail(2, e.to_string()))?;
    let sanity = SolutionField::sampled(&loaded.spec, &grid0, &exact).errors_against(&exact);

    let mut rows: Vec<(usize, usize, f64, f64)> = Vec::new();
    for k in 0..levels {
        let (nx, nt) = (nx0 << k, nt0 << k);
        let field = run_solve(&loaded, nx, nt)?;
        let (max, l2) = field.errors_against(&exact);
        rows.push((nx, nt, max, l2));
    }
    let mut table = String::new();
    let _ = writeln!(table, "## problem = {}", loaded.spec.label);
    let _ = writeln!(table, "# nx, nt, max_error, l2_error, order_max, order_l2");
    let _ = writeln!(
        table,
        "{nx0}, {nt0}, {:.16e}, {:.16e}, exact, exact",
        sanity.0, sanity.1
    );
    for (i, &(nx, nt, max, l2)) in rows.iter().enumerate() {
        let (om, ol) = if i == 0 {
            (String::from("-"), String::from("-"))
        } else {
            (
                format!("{:.16e}", observed_order(rows[i - 1].2, max)),
                format!("{:.16e}", observed_order(rows[i - 1].3, l2)),
            )
        };
        let _ = writeln!(table, "{nx}, {nt}, {max:.16e}, {l2:.16e}, {om}, {ol}");
    }
    print!("{table}");
    let path = write(&p.out, &format!("{}_converge.csv", loaded.stem), &table)?;
    println!("wrote {}", path.display());
    let last = observed_order(rows[levels - 2].2, rows[levels - 1].2);
    if last >= min_order {
        Ok(0)
    } else {
        println!("final observed order {last:.16e} is below {min_order}");
        Ok(1)
    }
}

fn cmd_suite(tol: f64, only: &[String], out: &Path) -> Result<u8, Fail> {
    let mut ids = Vec::new();
    for sel in only {
        let id = row_id(sel.trim()).ok_or_else(|| {
            let keys: Vec<&str> = ROWS.iter().map(|r| r.1).collect();
            Fail(
                2,
                format!("unknown suite row '{sel}'; available: {}", keys.join(", ")),
            )
        })?;
        ids.push(id);
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Fail(
            2,
            format!("--tol must be a nonnegative number, got {tol}"),
        ));
    }
    let cfg = SuiteConfig {
        tol_scale: tol,
        exec: Execution::default(),
    };
    let outcome = run_suite(&cfg, &ids);
    print!("{}", outcome.matrix());
    outcome.write(out).map_err(|e| io_fail(out, e))?;
    println!("wrote {}", out.display());
    Ok(if outcome.pass() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(p) => cmd_solve(p),
        Command::Verify {
            problem,
            constant,
            tol,
        } => cmd_verify(problem, *constant, *tol),
        Command::Converge {
            problem,
            levels,
            min_order,
        } => cmd_converge(problem, *levels, *min_order),
        Command::Suite { tol, only, out } => cmd_suite(*tol, only, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
