//! Thin command-line front end over the `hallmatch` library.
//!
//! Exit codes: 0 feasible-and-validated (or plain success), 1 infeasible
//! with a certificate, 2 input error, 3 internal invariant violation
//! (including a failed re-validation of a solver verdict).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hallmatch::allocate::AllocationOutcome;
use hallmatch::emulate;
use hallmatch::generate::{generate, GenMode};
use hallmatch::instance::Certificate;
use hallmatch::rational::parse_rational;
use hallmatch::textio::{self, InstanceFile};
use hallmatch::{allocate_exact, check_exhaustive, check_flow, oracle, validate, Rational};

const EXIT_FEASIBLE: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hallmatch",
    about = "Exact Hall matching on interval measure spaces",
    version
)]
struct Cli {
    /// Print only the verdict line.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Max-flow/min-cut route (any n up to the cap).
    Flow,
    /// 2^n enumeration over the atom table (n ≤ 8).
    Exhaustive,
    /// Flow, cross-checked against the enumeration when n ≤ 8.
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Feasible,
    Infeasible,
    Boundary,
}

impl From<ModeArg> for GenMode {
    fn from(m: ModeArg) -> GenMode {
        match m {
            ModeArg::Feasible => GenMode::Feasible,
            ModeArg::Infeasible => GenMode::Infeasible,
            ModeArg::Boundary => GenMode::Boundary,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide feasibility and print a certificate.
    Check {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
    },
    /// Construct an exact allocation (or a violating certificate).
    Solve { instance: PathBuf },
    /// Build (and solve, when possible) one discretization stage.
    Emulate {
        instance: PathBuf,
        /// Step size, a rational like 1/20.
        #[arg(long)]
        xi: String,
    },
    /// Run the nested refinement xi, xi/2, ..., xi/2^steps.
    Refine {
        instance: PathBuf,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        steps: usize,
    },
    /// Solve a discrete (cardinality-demand) instance.
    Discrete {
        instance: PathBuf,
        /// Optional uniform weight; the verdict is invariant in it.
        #[arg(long)]
        xi: Option<String>,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 64)]
        denom_cap: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive set-algebra-only feasibility check (n ≤ 8).
    Oracle { instance: PathBuf },
    /// Re-validate an allocation report against an instance.
    Validate {
        instance: PathBuf,
        allocation: PathBuf,
    },
    /// Solve and validate several instances.
    Batch { instances: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CmdResult = Result<u8, (u8, String)>;

fn input_err(msg: impl ToString) -> (u8, String) {
    (EXIT_INPUT, msg.to_string())
}

fn read_file(path: &PathBuf) -> Result<String, (u8, String)> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_instance(path: &PathBuf) -> Result<InstanceFile, (u8, String)> {
    textio::parse_instance(&read_file(path)?)
        .map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn parse_xi(text: &str) -> Result<Rational, (u8, String)> {
    parse_rational(text).map_err(input_err)
}

fn emit(quiet: bool, full: &str, verdict: &str, elapsed: Option<Instant>) {
    if quiet {
        println!("{verdict}");
    } else {
        print!("{full}");
        if let Some(start) = elapsed {
            println!("time_ms {}", start.elapsed().as_millis());
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Check { instance, method } => cmd_check(&instance, method, cli.quiet),
        Cmd::Solve { instance } => cmd_solve(&instance, cli.quiet),
        Cmd::Emulate { instance, xi } => cmd_emulate(&instance, &xi, cli.quiet),
        Cmd::Refine {
            instance,
            xi,
            steps,
        } => cmd_refine(&instance, &xi, steps, cli.quiet),
        Cmd::Discrete { instance, xi } => cmd_discrete(&instance, xi.as_deref(), cli.quiet),
        Cmd::Gen {
            seed,
            n,
            mode,
            denom_cap,
            out,
        } => cmd_gen(seed, n, mode, denom_cap, out),
        Cmd::Oracle { instance } => cmd_oracle(&instance, cli.quiet),
        Cmd::Validate {
            instance,
            allocation,
        } => cmd_validate(&instance, &allocation, cli.quiet),
        Cmd::Batch { instances } => cmd_batch(&instances, cli.quiet),
    }
}

/// Cross-check a violating certificate through the independent set-algebra
/// path before trusting it.
fn certify(
    file: &InstanceFile,
    cert: &Certificate,
) -> Result<(), (u8, String)> {
    if let Some(v) = cert.violation() {
        if !v.holds_for(&file.instance) {
            return Err((
                EXIT_INVARIANT,
                format!("certificate for {} fails re-evaluation", v.i_set),
            ));
        }
    }
    Ok(())
}

fn cmd_check(path: &PathBuf, method: Method, quiet: bool) -> CmdResult {
    let file = load_instance(path)?;
    let start = Instant::now();
    let cert = match method {
        Method::Flow => check_flow(&file.instance),
        Method::Exhaustive => check_exhaustive(&file.instance),
        Method::Both => check_flow(&file.instance),
    }
    .map_err(input_err)?;
    if matches!(method, Method::Both) && file.instance.n() <= 8 {
        let other = check_exhaustive(&file.instance).map_err(input_err)?;
        if other.is_feasible() != cert.is_feasible() {
            return Err((
                EXIT_INVARIANT,
                "flow and exhaustive checks disagree".to_string(),
            ));
        }
    }
    certify(&file, &cert)?;
    if cert.is_feasible() {
        // back a feasible verdict with a constructed, validated allocation
        match allocate_exact(&file.instance).map_err(input_err)? {
            AllocationOutcome::Allocated(alloc) => {
                if !validate(&file.instance, &alloc).pass() {
                    return Err((
                        EXIT_INVARIANT,
                        "feasible verdict but allocation failed validation".to_string(),
                    ));
                }
            }
            AllocationOutcome::Infeasible(_) => {
                return Err((
                    EXIT_INVARIANT,
                    "feasible verdict but allocator disagrees".to_string(),
                ));
            }
        }
    }
    let report = textio::print_certificate(&file, &cert);
    let verdict = if cert.is_feasible() { "feasible" } else { "infeasible" };
    emit(quiet, &report, verdict, Some(start));
    Ok(if cert.is_feasible() {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_solve(path: &PathBuf, quiet: bool) -> CmdResult {
    let file = load_instance(path)?;
    let start = Instant::now();
    let outcome = allocate_exact(&file.instance).map_err(input_err)?;
    match outcome {
        AllocationOutcome::Allocated(alloc) => {
            let report = validate(&file.instance, &alloc);
            if !report.pass() {
                return Err((
                    EXIT_INVARIANT,
                    format!("allocation failed validation: {:?}", report.failures),
                ));
            }
            let text = textio::print_allocation_report(&file, &alloc);
            emit(quiet, &text, "feasible", Some(start));
            Ok(EXIT_FEASIBLE)
        }
        AllocationOutcome::Infeasible(v) => {
            let cert = Certificate::Violating(v);
            certify(&file, &cert)?;
            let text = textio::print_certificate(&file, &cert);
            emit(quiet, &text, "infeasible", Some(start));
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn cmd_oracle(path: &PathBuf, quiet: bool) -> CmdResult {
    let file = load_instance(path)?;
    let start = Instant::now();
    let cert = oracle(&file.instance).map_err(input_err)?;
    certify(&file, &cert)?;
    let flow_verdict = check_flow(&file.instance).map_err(input_err)?;
    if flow_verdict.is_feasible() != cert.is_feasible() {
        return Err((
            EXIT_INVARIANT,
            "oracle and flow check disagree".to_string(),
        ));
    }
    let text = textio::print_certificate(&file, &cert);
    let verdict = if cert.is_feasible() { "feasible" } else { "infeasible" };
    emit(quiet, &text, verdict, Some(start));
    Ok(if cert.is_feasible() {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_emulate(path: &PathBuf, xi: &str, quiet: bool) -> CmdResult {
    let file = load_instance(path)?;
    let xi = parse_xi(xi)?;
    let start = Instant::now();
    // Solving a stage only makes sense on feasible instances; check first.
    let cert = check_flow(&file.instance).map_err(input_err)?;
    if let Certificate::Violating(_) = &cert {
        certify(&file, &cert)?;
        let text = textio::print_certificate(&file, &cert);
        emit(quiet, &text, "infeasible", Some(start));
        return Ok(EXIT_INFEASIBLE);
    }
    let stage = emulate::discretize(&file.instance, &xi).map_err(input_err)?;
    let stage = if stage.demands_positive() {
        emulate::solve_stage(&file.instance, &stage)
            .map_err(|e| (EXIT_INVARIANT, e.to_string()))?
    } else {
        stage
    };
    let text = textio::print_stage_report(&file, &stage);
    emit(quiet, &text, "feasible", Some(start));
    Ok(EXIT_FEASIBLE)
}

fn cmd_refine(path: &PathBuf, xi: &str, steps: usize, quiet: bool) -> CmdResult {
    let file = load_instance(path)?;
    let xi = parse_xi(xi)?;
    let start = Instant::now();
    let run = match emulate::refine(&file.instance, &xi, steps) {
        Ok(run) => run,
        Err(hallmatch::Error::Infeasible {
            i_set,
            union_measure,
            demand_sum,
        }) => {
            let cert = Certificate::Violating(hallmatch::Violation {
                i_set,
                union_measure,
                demand_sum,
            });
            certify(&file, &cert)?;
            let text = textio::print_certificate(&file, &cert);
            emit(quiet, &text, "infeasible", Some(start));
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e @ hallmatch::Error::NestingInfeasible { .. })
        | Err(e @ hallmatch::Error::InvariantViolation(_)) => {
            return Err((EXIT_INVARIANT, e.to_string()));
        }
        Err(e) => return Err(input_err(e)),
    };
    let exact = allocate_exact(&file.instance)
        .map_err(input_err)?;
    let alloc = exact
        .allocation()
        .ok_or((EXIT_INVARIANT, "refine succeeded but solve did not".to_string()))?;
    if !validate(&file.instance, alloc).pass() {
        return Err((
            EXIT_INVARIANT,
            "reference allocation failed validation".to_string(),
        ));
    }
    let limit = emulate::compare_limit(&file.instance, &run, alloc)
        .map_err(|e| (EXIT_INVARIANT, e.to_string()))?;
    if !limit.all_ok() {
        return Err((
            EXIT_INVARIANT,
            "limit comparison failed its bound checks".to_string(),
        ));
    }
    let text = textio::print_run_report(&file, &run, &limit);
    emit(quiet, &text, "feasible", Some(start));
    Ok(EXIT_FEASIBLE)
}

fn cmd_discrete(path: &PathBuf, xi: Option<&str>, quiet: bool) -> CmdResult {
    let text = read_file(path)?;
    let file =
        textio::parse_discrete(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    let start = Instant::now();
    let (solution, scaled) = match xi {
        Some(xi) => {
            let xi = parse_xi(xi)?;
            let scaled = hallmatch::solve_scaled(&file.instance, &xi).map_err(input_err)?;
            (scaled.solution.clone(), Some(scaled))
        }
        None => (hallmatch::solve_discrete(&file.instance), None),
    };
    let report = textio::print_discrete_solution(&file, &solution, scaled.as_ref());
    let verdict = if solution.is_feasible() { "feasible" } else { "infeasible" };
    emit(quiet, &report, verdict, Some(start));
    Ok(if solution.is_feasible() {
        EXIT_FEASIBLE
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_gen(seed: u64, n: usize, mode: ModeArg, denom_cap: u64, out: Option<PathBuf>) -> CmdResult {
    let generated = generate(seed, n, mode.into(), denom_cap).map_err(input_err)?;
    let file = InstanceFile::with_default_names(generated.instance);
    let text = textio::print_instance(&file);
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| input_err(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(EXIT_FEASIBLE)
}

fn cmd_validate(instance: &PathBuf, allocation: &PathBuf, quiet: bool) -> CmdResult {
    let file = load_instance(instance)?;
    let alloc_text = read_file(allocation)?;
    let alloc = textio::parse_allocation(&alloc_text, &file)
        .map_err(|e| input_err(format!("{}: {e}", allocation.display())))?;
    let report = validate(&file.instance, &alloc);
    let text = textio::print_validation(&report);
    emit(quiet, &text, if report.pass() { "pass" } else { "fail" }, None);
    Ok(if report.pass() {
        EXIT_FEASIBLE
    } else {
        EXIT_INVARIANT
    })
}

fn cmd_batch(paths: &[PathBuf], quiet: bool) -> CmdResult {
    if paths.is_empty() {
        return Err(input_err("batch needs at least one instance file"));
    }
    let mut worst = EXIT_FEASIBLE;
    for path in paths {
        let file = load_instance(path)?;
        let outcome = allocate_exact(&file.instance).map_err(input_err)?;
        match outcome {
            AllocationOutcome::Allocated(alloc) => {
                if !validate(&file.instance, &alloc).pass() {
                    return Err((
                        EXIT_INVARIANT,
                        format!("{}: allocation failed validation", path.display()),
                    ));
                }
                println!("{} feasible", path.display());
            }
            AllocationOutcome::Infeasible(v) => {
                let cert = Certificate::Violating(v.clone());
                certify(&file, &cert)?;
                if quiet {
                    println!("{} infeasible", path.display());
                } else {
                    println!("{} infeasible violating {}", path.display(), v.i_set);
                }
                worst = worst.max(EXIT_INFEASIBLE);
            }
        }
    }
    Ok(worst)
}
