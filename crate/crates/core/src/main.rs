use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use srkbench::bounds;
use srkbench::counting;
use srkbench::graph::{self, Budgets, OrderPolicy, PowerGraphSpec};
use srkbench::ramsey::{self, ChainFile, RamseyTable};
use srkbench::sweep::{self, DistanceSpec, Format, Pattern, SweepConfig};
use srkbench::verify::{self, Suite, VerifyOptions};
use srkbench::{Error, Result, SrkParams};

#[derive(Parser)]
#[command(name = "srkbench", version, about = "Exact bounds and graph statistics for sum-rank-metric codes")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Largest vertex count for explicit graphs (solver, greedy codes, partitions).
    #[arg(long, global = true, env = "SRK_MAX_VERTICES")]
    max_vertices: Option<u64>,
    /// Largest ball volume for neighbourhood statistics.
    #[arg(long, global = true)]
    max_ball: Option<u64>,
    /// Search-node limit of the independence-number solver.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = graph::DEFAULT_SEED)]
    seed: u64,
}

impl GlobalArgs {
    /// `base` with every limit given on the command line (or environment) replaced.
    fn apply(&self, base: Budgets) -> Result<Budgets> {
        let b = Budgets {
            max_vertices: self.max_vertices.unwrap_or(base.max_vertices),
            max_ball: self.max_ball.unwrap_or(base.max_ball),
            max_nodes: self.max_nodes.unwrap_or(base.max_nodes),
        };
        if b.max_vertices == 0 || b.max_ball == 0 || b.max_nodes == 0 {
            return Err(Error::InvalidParams("budgets must be positive".into()));
        }
        Ok(b)
    }

    fn budgets(&self) -> Result<Budgets> {
        self.apply(Budgets::default())
    }
}

#[derive(Args, Clone)]
struct ParamsArgs {
    /// Field order, a prime power.
    #[arg(short = 'q', long)]
    q: u32,
    /// Block row counts, e.g. 2,1,1.
    #[arg(short = 'n', long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Block column counts, e.g. 2,2,2.
    #[arg(short = 'm', long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
}

impl ParamsArgs {
    fn build(&self) -> Result<SrkParams> {
        SrkParams::with_order(self.q, self.n.clone(), self.m.clone())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    WeightThenLex,
}

impl From<Order> for OrderPolicy {
    fn from(o: Order) -> Self {
        match o {
            Order::Lex => OrderPolicy::Lex,
            Order::WeightThenLex => OrderPolicy::WeightThenLex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Number of elements of sum-rank weight at most k.
    Volume {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(short = 'k', long)]
        k: usize,
    },
    /// Weight distribution of the space (rank distribution for one block).
    Count {
        #[command(flatten)]
        params: ParamsArgs,
        /// Print only the count for this weight.
        #[arg(short = 'w', long)]
        weight: Option<usize>,
    },
    /// Closed-form Q(i, j, c) table for n × n matrices, as CSV.
    Qtable {
        #[arg(short = 'q', long)]
        q: u32,
        /// Matrix size n.
        #[arg(long)]
        size: u32,
    },
    /// D, T, Delta and eps* of the k-th power graph, as JSON.
    GraphStats {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(short = 'k', long)]
        k: usize,
    },
    /// Exact independence number of the k-th power graph with an optimal code.
    Alpha {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(short = 'k', long)]
        k: usize,
    },
    /// Greedy partition of the space into codes of minimum distance d.
    Partition {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(short = 'd', long)]
        d: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: Order,
    },
    /// GV bound and the greedy code for minimum distance d.
    Gv {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(short = 'd', long)]
        d: usize,
        #[arg(long, value_enum, default_value = "lex")]
        order: Order,
    },
    /// Bound table for a sweep file or a single space.
    Report(ReportArgs),
    /// Runs a verification suite; exit status 0 iff every check passes.
    Verify {
        /// Suite name, or "all".
        suite: String,
        /// Largest space used by the graph suites.
        #[arg(long, default_value_t = 1024)]
        max_space: u64,
        /// Random pairs in the Marsaglia suite.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Evaluates Ramsey inequality chains against a table of known values.
    Ramsey {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep configuration (JSON).
    #[arg(long, conflicts_with_all = ["q", "n", "m", "d"])]
    config: Option<PathBuf>,
    #[arg(short = 'q', long, requires_all = ["n", "m"])]
    q: Option<u32>,
    #[arg(short = 'n', long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(short = 'm', long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Distances; all feasible ones when omitted.
    #[arg(short = 'd', long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    order: Option<Order>,
    /// User-supplied eps for the improved GV column.
    #[arg(long)]
    eps: Option<f64>,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn report_config(args: &ReportArgs, global: &GlobalArgs) -> Result<SweepConfig> {
    let mut config = match (&args.config, args.q) {
        (Some(path), _) => SweepConfig::load(path)?,
        (None, Some(q)) => {
            let spec = srkbench::space::ParamsSpec {
                q,
                n: args.n.clone().unwrap_or_default(),
                m: args.m.clone().unwrap_or_default(),
            };
            spec.build()?;
            SweepConfig {
                patterns: vec![Pattern::Explicit(spec)],
                d: args.d.clone().map_or_else(DistanceSpec::default, DistanceSpec::List),
                budgets: Budgets::default(),
                order: OrderPolicy::Lex,
                eps: None,
                format: Format::Csv,
                output: None,
            }
        }
        (None, None) => return Err(Error::InvalidParams("report needs --config or -q/-n/-m".into())),
    };
    config.budgets = global.apply(config.budgets)?;
    if let Some(f) = args.format {
        config.format = match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        };
    }
    if let Some(o) = &args.output {
        config.output = Some(o.clone());
    }
    if let Some(o) = args.order {
        config.order = o.into();
    }
    if args.eps.is_some() {
        config.eps = args.eps;
    }
    config.validate()?;
    Ok(config)
}

/// `Ok(false)` means the command ran but found a failure.
fn run(cli: Cli) -> Result<bool> {
    let global = &cli.global;
    match cli.command {
        Command::Volume { params, k } => {
            println!("{}", counting::ball_volume(&params.build()?, k));
        }
        Command::Count { params, weight } => {
            let dist = counting::weight_distribution(&params.build()?);
            match weight {
                Some(w) => println!("{}", dist.get(w).cloned().unwrap_or_default()),
                None => {
                    for (w, c) in dist.iter().enumerate() {
                        println!("{w} {c}");
                    }
                }
            }
        }
        Command::Qtable { q, size } => {
            if srkbench::gf::factor_prime_power(q).is_none() {
                return Err(Error::NotPrimePower(q));
            }
            let q = q as u64;
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["i", "j", "c", "Q", "M_j"])?;
            for i in 0..=size {
                for j in 0..=size {
                    let m = counting::square_rank_count(size, j, q);
                    for c in 0..=j {
                        let value = counting::q_closed(i, j, c, size, q)?;
                        w.write_record([i.to_string(), j.to_string(), c.to_string(), value.to_string(), m.to_string()])?;
                    }
                }
            }
            w.flush()?;
        }
        Command::GraphStats { params, k } => {
            let spec = PowerGraphSpec::new(params.build()?, k);
            print_json(&graph::graph_stats(&spec, &global.budgets()?)?)?;
        }
        Command::Alpha { params, k } => {
            let params = params.build()?;
            let spec = PowerGraphSpec::new(params.clone(), k);
            let r = graph::max_independent_set(&spec, &global.budgets()?)?;
            print_json(&json!({
                "params": params.to_spec(),
                "k": k,
                "d": k + 1,
                "alpha": r.size,
                "nodes": r.nodes,
                "witness": r.witness.to_file(),
            }))?;
        }
        Command::Partition { params, d, order } => {
            let params = params.build()?;
            if d == 0 {
                return Err(Error::InvalidParams("d must be at least 1".into()));
            }
            let spec = PowerGraphSpec::new(params.clone(), d - 1);
            let classes = graph::greedy_partition(&spec, order.into(), &global.budgets()?)?;
            let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
            let distances: Vec<Option<usize>> = classes.iter().map(|c| c.cached_min_distance()).collect();
            print_json(&json!({
                "params": params.to_spec(),
                "d": d,
                "order": OrderPolicy::from(order).to_string(),
                "num_classes": classes.len(),
                "class_sizes": sizes,
                "class_min_distances": distances,
            }))?;
        }
        Command::Gv { params, d, order } => {
            let params = params.build()?;
            let (num, den) = bounds::gv_ratio(&params, d)?;
            let gv = bounds::gv_lower(&params, d)?;
            let spec = PowerGraphSpec::new(params.clone(), d - 1);
            let code = graph::greedy_gv_code(&spec, order.into(), &global.budgets()?)?;
            print_json(&json!({
                "params": params.to_spec(),
                "d": d,
                "gv": gv.to_string(),
                "gv_exact_ratio": format!("{num}/{den}"),
                "greedy_code_size": code.len(),
                "greedy_min_distance": code.cached_min_distance(),
                "code": code.to_file(),
            }))?;
        }
        Command::Report(args) => {
            let config = report_config(&args, global)?;
            let rows = sweep::run_sweep(&config)?;
            match &config.output {
                Some(path) => sweep::write_reports(&config, &rows, io::BufWriter::new(std::fs::File::create(path)?))?,
                None => sweep::write_reports(&config, &rows, io::stdout().lock())?,
            }
        }
        Command::Verify { suite, max_space, samples } => {
            let suites: Vec<Suite> =
                if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>()?] };
            let options =
                VerifyOptions { budgets: global.budgets()?, seed: global.seed, max_space, marsaglia_samples: samples };
            let mut all_passed = true;
            for s in suites {
                let report = verify::run_suite(s, &options)?;
                let status = if report.passed() { "pass" } else { "FAIL" };
                eprintln!("{s}: {status} ({} checks, {} failures)", report.checks, report.failures);
                all_passed &= report.passed();
                print_json(&report)?;
            }
            return Ok(all_passed);
        }
        Command::Ramsey { chain, table } => {
            let file = ChainFile::load(&chain)?;
            let table = match table {
                Some(path) => RamseyTable::load(&path)?,
                None => RamseyTable::default(),
            };
            print_json(&ramsey::run_chains(&file, &table, &global.budgets()?)?)?;
        }
    }
    Ok(true)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotPrime(_)
        | Error::NotPrimePower(_)
        | Error::FieldTooLarge { .. }
        | Error::ShapeMismatch(_)
        | Error::InvalidParams(_)
        | Error::Io(_)
        | Error::Json(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Error::Json(e)) if e.io_error_kind() == Some(io::ErrorKind::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
