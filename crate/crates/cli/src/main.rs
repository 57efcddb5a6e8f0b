//! `realqe` — decide and quantifier-eliminate formulas of the first-order
//! theory of the reals, build sign tables, run the problem reductions, and
//! compute arrangement combinatorics. All arithmetic is exact.
//!
//! Exit codes: 0 ok/TRUE, 1 FALSE, 2 budget exhausted, 3 input error,
//! 4 internal error.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use realqe::error::Error;
use realqe::formula::{parse, sample_equiv, to_prenex, Equivalence};
use realqe::geom::{
    arrangement_description, check_description_consistency, cross_ratio, dualize, order_type,
    order_type_to_arrangement, parse_points, ArrangementDescription, CombinatorialOrderType,
};
use realqe::par::Strategy;
use realqe::poly::DEFAULT_MONOMIAL_BUDGET;
use realqe::qe::{decide_sentence, eliminate_all, EliminationOptions};
use realqe::reduce::{
    default_k_l, encode_seg, to_feasible, to_strictineq, FeasibleInstance, Graph, TseitinOptions,
};
use realqe::signtable::{atom_polynomials, build_sign_table, count_components, human_format, machine_format};

#[derive(Parser)]
#[command(name = "realqe", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Input file; stdin when omitted
    #[arg(long, global = true)]
    r#in: Option<PathBuf>,
    /// Optional `key = value` config file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Branch-node cap per eliminated variable
    /// (default from REALQE_BUDGET_NODES, else 100000)
    #[arg(long, global = true)]
    budget_nodes: Option<usize>,
    /// Monomial cap for polynomial expansion (default 2^20)
    #[arg(long, global = true)]
    budget_monomials: Option<usize>,
    /// Worker threads for branch exploration; 1 = sequential.
    /// Output is identical for every thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampling subcommands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, global = true, value_parser = ["human", "machine"])]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence; prints TRUE or FALSE
    Decide,
    /// Eliminate all quantifiers; prints a quantifier-free formula
    Eliminate,
    /// Print the sign table of the atom polynomials of a univariate formula
    Table {
        /// Restrict columns to the input polynomials (drop closure-only rows)
        #[arg(long)]
        restrict: bool,
    },
    /// Count connected components of a univariate solution set
    Components,
    /// Compile formulas into restricted-form instances
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Encode combinatorial objects as sentences
    #[command(subcommand)]
    Encode(EncodeCommand),
    /// Order type of a point sequence (points file: `x y` per line)
    OrderType,
    /// Combinatorial description of a line arrangement
    Arrangement {
        /// Lines file: `slope offset` per line (line y = slope·x − offset)
        #[arg(long, conflicts_with = "order_type")]
        lines: Option<PathBuf>,
        /// Order-type file (machine format); uses the combinatorial
        /// reduction with the last point taken below all others
        #[arg(long)]
        order_type: Option<PathBuf>,
        /// Check the stated consistency conditions instead of printing
        #[arg(long)]
        check: bool,
    },
    /// Cross-ratio (a,b;c,d) of four collinear points
    CrossRatio,
    /// Compare two quantifier-free formulas by seeded sampling
    Equiv {
        /// Formula to compare against
        #[arg(long)]
        against: PathBuf,
        /// Number of sampled assignments
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Compile an existential formula to a single-equation instance
    Feasible {
        /// Keep the systematic truth-variable scaffolding everywhere
        #[arg(long)]
        no_peephole: bool,
    },
    /// Compile a single-equation instance to strict inequalities
    Strict {
        /// Bounding chain length (default ⌈c·L·log₂L⌉)
        #[arg(long)]
        k: Option<usize>,
        /// Tolerance chain length (default ⌈c₁·L·(log₂L)²⌉)
        #[arg(long)]
        l: Option<usize>,
        /// Constant factor for the default k
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Constant factor for the default l
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
    },
}

#[derive(Subcommand)]
enum EncodeCommand {
    /// Segment-representability sentence of a graph
    Seg {
        /// Graph file: `n m` header then `i j` edge lines (1-based)
        #[arg(long)]
        graph: PathBuf,
    },
}

struct Config {
    budget_nodes: usize,
    budget_monomials: usize,
    threads: usize,
    seed: u64,
    machine: bool,
}

fn read_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {}", path.display(), e)))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            col: 1,
            msg: "expected key = value".into(),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn resolve_config(common: &Common) -> Result<Config, Error> {
    let file = match &common.config {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    let file_usize = |key: &str| -> Option<usize> { file.get(key).and_then(|v| v.parse().ok()) };
    let env_nodes = std::env::var("REALQE_BUDGET_NODES")
        .ok()
        .and_then(|v| v.parse().ok());
    let budget_nodes = common
        .budget_nodes
        .or(file_usize("budget_nodes"))
        .or(env_nodes)
        .unwrap_or(100_000);
    let budget_monomials = common
        .budget_monomials
        .or(file_usize("budget_monomials"))
        .unwrap_or(DEFAULT_MONOMIAL_BUDGET);
    let threads = common.threads.or(file_usize("threads")).unwrap_or(0);
    let seed = common
        .seed
        .or(file.get("seed").and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let format = common
        .format
        .clone()
        .or_else(|| file.get("format").cloned())
        .unwrap_or_else(|| "human".into());
    if budget_nodes == 0 || budget_monomials == 0 {
        return Err(Error::Input("budgets must be positive".into()));
    }
    Ok(Config {
        budget_nodes,
        budget_monomials,
        threads,
        seed,
        machine: format == "machine",
    })
}

fn read_input(common: &Common) -> Result<String, Error> {
    match &common.r#in {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {}", path.display(), e))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Input(format!("cannot read stdin: {}", e)))?;
            Ok(buf)
        }
    }
}

fn elimination_options(cfg: &Config) -> EliminationOptions {
    EliminationOptions {
        node_budget: cfg.budget_nodes,
        monomial_budget: cfg.budget_monomials,
        strategy: if cfg.threads == 1 {
            Strategy::Sequential
        } else {
            Strategy::auto()
        },
        collect_leaves: false,
    }
}

/// TRUE/FALSE outcomes map to exit codes 0/1.
enum Outcome {
    Ok,
    False,
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = resolve_config(&cli.common)?;
    match &cli.command {
        Command::Decide => {
            let f = parse(&read_input(&cli.common)?)?;
            let verdict = decide_sentence(&f, &elimination_options(&cfg))?;
            println!("{}", if verdict { "TRUE" } else { "FALSE" });
            Ok(if verdict { Outcome::Ok } else { Outcome::False })
        }
        Command::Eliminate => {
            let f = parse(&read_input(&cli.common)?)?;
            let out = eliminate_all(&f, &elimination_options(&cfg))?;
            println!("{}", out);
            Ok(Outcome::Ok)
        }
        Command::Table { restrict } => {
            let f = parse(&read_input(&cli.common)?)?;
            let inputs = atom_polynomials(&f, cfg.budget_monomials)?;
            let (_, table) = build_sign_table(&inputs)?;
            let table = if *restrict {
                let rows: Vec<usize> = inputs
                    .iter()
                    .map(|p| table.row_index(p).expect("input in closure"))
                    .collect();
                table.restrict(&rows)
            } else {
                table
            };
            if cfg.machine {
                print!("{}", machine_format(&table));
            } else {
                print!("{}", human_format(&table));
            }
            Ok(Outcome::Ok)
        }
        Command::Components => {
            let f = parse(&read_input(&cli.common)?)?;
            let n = count_components(&f, cfg.budget_monomials)?;
            println!("{}", n);
            Ok(Outcome::Ok)
        }
        Command::Reduce(ReduceCommand::Feasible { no_peephole }) => {
            let f = parse(&read_input(&cli.common)?)?;
            let prenexed = if f.prenex_split().1.is_quantifier_free() {
                f
            } else {
                to_prenex(&f)
            };
            let inst = to_feasible(
                &prenexed,
                &TseitinOptions {
                    peephole: !no_peephole,
                    monomial_budget: cfg.budget_monomials,
                },
            )?;
            println!("{}", inst.as_sentence());
            Ok(Outcome::Ok)
        }
        Command::Reduce(ReduceCommand::Strict { k, l, c, c1 }) => {
            let f = parse(&read_input(&cli.common)?)?;
            let inst = FeasibleInstance::from_formula(&f, cfg.budget_monomials)?;
            let (dk, dl) = default_k_l(inst.length(), *c, *c1);
            let out = to_strictineq(&inst, k.unwrap_or(dk), l.unwrap_or(dl))?;
            println!("{}", out.as_sentence());
            Ok(Outcome::Ok)
        }
        Command::Encode(EncodeCommand::Seg { graph }) => {
            let text = std::fs::read_to_string(graph)
                .map_err(|e| Error::Input(format!("cannot read {}: {}", graph.display(), e)))?;
            let g = Graph::parse(&text)?;
            println!("{}", encode_seg(&g)?);
            Ok(Outcome::Ok)
        }
        Command::OrderType => {
            let pts = parse_points(&read_input(&cli.common)?)?;
            let t = order_type(&pts)?;
            if cfg.machine {
                print!("{}", t.machine_format());
            } else {
                print!("{}", t.machine_format());
                println!("simple: {}", t.is_simple());
            }
            Ok(Outcome::Ok)
        }
        Command::Arrangement {
            lines,
            order_type: ot,
            check,
        } => {
            let d: ArrangementDescription = match (lines, ot) {
                (Some(path), None) => {
                    let pts = parse_points(&std::fs::read_to_string(path).map_err(|e| {
                        Error::Input(format!("cannot read {}: {}", path.display(), e))
                    })?)?;
                    let duals: Vec<_> = pts.iter().map(dualize).collect();
                    arrangement_description(&duals)?
                }
                (None, Some(path)) => {
                    let t = CombinatorialOrderType::parse(&std::fs::read_to_string(path)
                        .map_err(|e| {
                            Error::Input(format!("cannot read {}: {}", path.display(), e))
                        })?)?;
                    order_type_to_arrangement(&t)?
                }
                _ => {
                    let d = ArrangementDescription::parse(&read_input(&cli.common)?)?;
                    if !check {
                        return Err(Error::Input(
                            "pass --lines or --order-type to build, or --check to verify stdin"
                                .into(),
                        ));
                    }
                    d
                }
            };
            if *check {
                let report = check_description_consistency(&d);
                if report.is_empty() {
                    println!("consistent");
                    return Ok(Outcome::Ok);
                }
                for v in report {
                    println!("{}", v);
                }
                return Ok(Outcome::False);
            }
            print!("{}", d);
            Ok(Outcome::Ok)
        }
        Command::CrossRatio => {
            let pts = parse_points(&read_input(&cli.common)?)?;
            if pts.len() != 4 {
                return Err(Error::Input(format!(
                    "cross-ratio needs exactly 4 points, got {}",
                    pts.len()
                )));
            }
            let v = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3])?;
            println!("{}", v);
            Ok(Outcome::Ok)
        }
        Command::Equiv { against, trials } => {
            let f = parse(&read_input(&cli.common)?)?;
            let g = parse(&std::fs::read_to_string(against).map_err(|e| {
                Error::Input(format!("cannot read {}: {}", against.display(), e))
            })?)?;
            let mut vars: Vec<String> = f.free_vars().into_iter().collect();
            for v in g.free_vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            match sample_equiv(&f, &g, &vars, *trials, cfg.seed)? {
                Equivalence::NoCounterexample => {
                    println!("no-counterexample");
                    Ok(Outcome::Ok)
                }
                Equivalence::Counterexample(a) => {
                    let parts: Vec<String> =
                        a.iter().map(|(k, v)| format!("{} = {}", k, v)).collect();
                    println!("counterexample: {}", parts.join(", "));
                    Ok(Outcome::False)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg_threads = cli
        .common
        .threads
        .or_else(|| {
            cli.common
                .config
                .as_ref()
                .and_then(|p| read_config_file(p).ok())
                .and_then(|m| m.get("threads").and_then(|v| v.parse().ok()))
        })
        .unwrap_or(0);

    let body = || match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::from(0),
        Ok(Outcome::False) => ExitCode::from(1),
        Err(e @ Error::NodeBudget { .. }) | Err(e @ Error::ExpansionBudget { .. }) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
        Err(e @ Error::Internal(_)) => {
            eprintln!("error: {}", e);
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(3)
        }
    };

    #[cfg(feature = "parallel")]
    if cfg_threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg_threads)
            .build();
        match pool {
            Ok(pool) => return pool.install(body),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {}", e);
                return ExitCode::from(3);
            }
        }
    }
    let _ = cfg_threads;
    body()
}
