//! `ikep`: command-line front end for the kidney-exchange library.
//!
//! Exit status is 0 on success, 1 when the library reports a domain error
//! (infeasible request, exceeded budget) and 2 for usage errors, including
//! unreadable or malformed input files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ikep_core::enumeration::CycleCatalog;
use ikep_core::enumeration::InstanceStats;
use ikep_core::generator::{gen_instance, GenConfig};
use ikep_core::mechanisms::{
    expected_utilities, Consecutive, International, Mechanism, National, Order, OrderMechanism, OrderMode,
    PackingDistribution,
};
use ikep_core::simharness::{run_experiment, ExperimentConfig};
use ikep_core::solver::{brute_force_opt, classify_gamma, max_gamma_packing_exact, solve_auto};
use ikep_core::verification::fixtures::{build_fixture, Fixture};
use ikep_core::verification::{check_approx_bound, check_ic, check_ir, has_perfect_packing};
use ikep_core::{Config, Execution, GammaParams, Instance};

#[derive(Parser)]
#[command(name = "ikep", version, about = "International kidney-exchange cycle packing and mechanisms")]
struct Cli {
    /// Maximum number of cycles one enumeration may produce.
    #[arg(long, global = true)]
    budget_cycles: Option<usize>,
    /// Maximum number of orderings an exact order-mechanism distribution may cover.
    #[arg(long, global = true)]
    budget_perms: Option<u64>,
    /// Maximum branch-and-bound nodes per solve.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Run library calls on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethodArg {
    Exact,
    Auto,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechArg {
    Nat,
    Con,
    Int,
    Order,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Ir,
    Ic,
    Approx,
    Perfect,
}

#[derive(Subcommand)]
enum Command {
    /// Count feasible cycles and report c_nat, c_int and d*.
    Enumerate {
        #[arg(long)]
        input: PathBuf,
        /// Also list every cycle.
        #[arg(long)]
        full: bool,
    },
    /// Maximum cycle packing.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: SolveMethodArg,
    },
    /// Complexity class of a parameter tuple.
    Classify {
        /// Inline JSON or a path to a JSON file.
        #[arg(long)]
        gamma: String,
    },
    /// Run a mechanism and report expected utilities.
    Mech {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mechanism: MechArg,
        /// `exact` or `sample:K` (order mechanism only).
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Seed for sampled runs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Segments per country allowed in a substitute (order mechanism).
        #[arg(long, default_value_t = 1)]
        substitute_segments: usize,
    },
    /// Check a property of a mechanism on an instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, value_enum, default_value = "order")]
        mechanism: MechArg,
    },
    /// Write one of the built-in constructions.
    Fixture {
        #[arg(long)]
        name: String,
        /// Comma-separated `key=value` pairs, e.g. `n=3,L=10`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch experiment and write a CSV.
    Sim {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to the config's output_path, then standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

type CliResult<T> = std::result::Result<T, Failure>;

fn domain(e: ikep_core::Error) -> Failure {
    use ikep_core::Error as E;
    match e {
        E::Io(_) | E::Json(_) | E::InvalidConfig(_) | E::InvalidFixture(_) => Failure::Usage(e.to_string()),
        e => Failure::Domain(e.to_string()),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    Instance::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
            Ok(())
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> CliResult<()> {
    emit(&serde_json::to_string_pretty(v).expect("report serializes"), None)
}

fn mechanism(arg: MechArg, substitute_segments: usize) -> Box<dyn Mechanism> {
    match arg {
        MechArg::Nat => Box::new(National),
        MechArg::Con => Box::new(Consecutive::default()),
        MechArg::Int => Box::new(International),
        MechArg::Order => Box::new(Order(OrderMechanism::with_substitute_segments(substitute_segments))),
    }
}

fn parse_mode(mode: &str, seed: u64) -> CliResult<OrderMode> {
    if mode == "exact" {
        return Ok(OrderMode::Exact);
    }
    let runs = mode
        .strip_prefix("sample:")
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k > 0)
        .ok_or_else(|| Failure::Usage(format!("mode must be `exact` or `sample:K` with K > 0, got {mode:?}")))?;
    Ok(OrderMode::Sampled { runs, seed })
}

fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = Config::default();
    if let Some(b) = cli.budget_cycles {
        cfg.max_cycles = b;
    }
    if let Some(b) = cli.budget_perms {
        cfg.max_permutations = b;
    }
    if let Some(b) = cli.budget_nodes {
        cfg.max_search_nodes = b;
    }
    if cli.sequential {
        cfg.execution = Execution::Sequential;
    }

    match cli.command {
        Command::Enumerate { input, full } => {
            let inst = load_instance(&input)?;
            let catalog = CycleCatalog::build(&inst, &cfg).map_err(domain)?;
            let stats = InstanceStats::from_catalog(&catalog);
            let mut report = json!({
                "vertices": inst.vertex_count(),
                "countries": inst.country_count(),
                "national_gamma_cycles": catalog.national_gamma.iter().map(Vec::len).collect::<Vec<_>>(),
                "international_cycles": catalog.international_all.len(),
                "international_gamma_cycles": catalog.international_gamma().len(),
                "c_nat": stats.c_nat,
                "c_int": stats.c_int,
                "d_star": stats.d_star,
            });
            if full {
                let international: Vec<Value> = catalog
                    .international_all
                    .iter()
                    .zip(&catalog.is_gamma)
                    .map(|(c, g)| json!({"cycle": c, "gamma": g}))
                    .collect();
                report["national"] = json!(catalog.national_gamma);
                report["international"] = json!(international);
            }
            print_json(&report)
        }
        Command::Solve { input, method } => {
            let inst = load_instance(&input)?;
            let result = match method {
                SolveMethodArg::Exact => max_gamma_packing_exact(&inst, &cfg),
                SolveMethodArg::Auto => solve_auto(&inst, &cfg),
                SolveMethodArg::Brute => brute_force_opt(&inst, &cfg),
            }
            .map_err(domain)?;
            print_json(&json!({
                "opt": result.opt_value,
                "packing": result.packing,
                "method": result.method,
                "node_count": result.node_count,
            }))
        }
        Command::Classify { gamma } => {
            let text = if gamma.trim_start().starts_with('{') { gamma } else { read(Path::new(&gamma))? };
            let g: GammaParams =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("parameters: {e}")))?;
            g.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            print_json(&classify_gamma(&g))
        }
        Command::Mech { input, mechanism: which, mode, seed, substitute_segments } => {
            let inst = load_instance(&input)?;
            let mode = parse_mode(&mode, seed)?;
            let (dist, mode_name): (PackingDistribution, String) = match (which, mode) {
                (MechArg::Order, m) => {
                    let name = match m {
                        OrderMode::Exact => "exact".to_string(),
                        OrderMode::Sampled { runs, .. } => format!("sample:{runs}"),
                    };
                    let mech = OrderMechanism::with_substitute_segments(substitute_segments);
                    (mech.distribution(&inst, m, &cfg).map_err(domain)?, name)
                }
                (other, OrderMode::Exact) => {
                    (mechanism(other, substitute_segments).distribution(&inst, &cfg).map_err(domain)?, "exact".into())
                }
                (_, OrderMode::Sampled { .. }) => {
                    return Err(Failure::Usage("sampling applies to the order mechanism only".into()));
                }
            };
            let report = expected_utilities(&dist, &inst, &cfg).map_err(domain)?;
            let mut out = json!({
                "mechanism": mechanism(which, substitute_segments).name(),
                "mode": mode_name,
                "seed": seed,
                "report": report,
            });
            if matches!(mode, OrderMode::Exact) {
                out["distribution"] = json!(dist);
            }
            print_json(&out)
        }
        Command::Verify { input, check, mechanism: which } => {
            let inst = load_instance(&input)?;
            let mech = mechanism(which, 1);
            let report = match check {
                CheckArg::Ir => json!(check_ir(mech.as_ref(), &inst, &cfg).map_err(domain)?),
                CheckArg::Ic => {
                    let r = check_ic(mech.as_ref(), &inst, &cfg).map_err(domain)?;
                    json!({"is_ic": r.is_ic(), "report": r})
                }
                CheckArg::Approx => json!(check_approx_bound(&inst, &cfg).map_err(domain)?),
                CheckArg::Perfect => {
                    let p = has_perfect_packing(&inst, &cfg).map_err(domain)?;
                    json!({"exists": p.is_some(), "packing": p})
                }
            };
            print_json(&report)
        }
        Command::Fixture { name, params, out } => {
            let f = Fixture::parse(&name, &params).map_err(domain)?;
            let inst = build_fixture(&f).map_err(domain)?;
            emit(&inst.to_json(), out.as_deref())
        }
        Command::Gen { config, seed, out } => {
            let mut g: GenConfig = serde_json::from_str(&read(&config)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            if let Some(s) = seed {
                g.seed = s;
            }
            let inst = gen_instance(&g).map_err(domain)?;
            emit(&inst.to_json(), out.as_deref())
        }
        Command::Sim { config, out } => {
            let exp = ExperimentConfig::load(&config).map_err(domain)?;
            let result = run_experiment(&exp, &cfg).map_err(domain)?;
            let csv = result.csv_string().map_err(domain)?;
            let target = out.or_else(|| exp.output_path.clone());
            match &target {
                Some(p) => emit(&csv, Some(p))?,
                None => emit(&csv, None)?,
            }
            if target.is_some() {
                print_json(&result.summary)?;
            }
            if !result.summary.invariant_violations.is_empty() {
                return Err(Failure::Domain(format!(
                    "welfare ordering violated:\n{}",
                    result.summary.invariant_violations.join("\n")
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
