//! `rdpda` command-line front end: sampling, counting, reachability,
//! simulation and experiment tables.

use std::fs;
use std::io::{Read as _, Write as _};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rdpda::counting::{self, Lambda};
use rdpda::io::{rdpda_from_json, rdpda_to_dot, rdpda_to_json_pretty};
use rdpda::reachability::{analyze, analyze_post_star, Reachability};
use rdpda::rng::stream_rng;
use rdpda::samplers::{
    collect_table, parse_ratio, DfaStrategy, Metric, OutputSize, Pipeline, PipelineConfig,
    TableStats, DEFAULT_MAX_REJECTS,
};
use rdpda::{AcceptanceMode, Alphabets, Error};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "rdpda", version, about = "Random real-time deterministic pushdown automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a uniform accessible complete RDPDA.
    Gen(GenArgs),
    /// Exact and asymptotic counts.
    Count(CountArgs),
    /// Reachable and empty-stack-reachable states of a JSON automaton.
    Reach(ReachArgs),
    /// Run a word under an acceptance condition.
    Accept(AcceptArgs),
    /// Reproduce an experiment table as TSV or JSON.
    Xp(XpArgs),
}

#[derive(Args, Debug, Clone)]
struct SizeArgs {
    /// Number of states.
    #[arg(short, long)]
    n: usize,
    /// Input alphabet size.
    #[arg(short, long, default_value_t = 2)]
    alpha: usize,
    /// Stack alphabet size.
    #[arg(short, long, default_value_t = 2)]
    beta: usize,
    /// Average output length per transition (m = lambda * alpha * beta * n).
    #[arg(short, long, value_parser = lambda_arg, conflicts_with = "m")]
    lambda: Option<Lambda>,
    /// Total output size.
    #[arg(short, long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Condition {
    None,
    Nonempty,
    Reachable,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DfaSampler {
    Rejection,
    Recursive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AutomatonFormat {
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    size: SizeArgs,
    #[arg(long)]
    seed: u64,
    /// Acceptance condition used by `--condition nonempty`.
    #[arg(long, value_parser = mode_arg, default_value = "final-state")]
    mode: AcceptanceMode,
    /// Reject until the sample satisfies this condition.
    #[arg(long, value_enum, default_value = "none")]
    condition: Condition,
    /// Force at least ceil(fraction * s) pop transitions.
    #[arg(long, value_parser = lambda_arg)]
    min_pop_fraction: Option<Ratio<u64>>,
    #[arg(long, default_value_t = DEFAULT_MAX_REJECTS)]
    max_rejects: u64,
    #[arg(long, value_enum, default_value = "rejection")]
    dfa_sampler: DfaSampler,
    #[arg(long, value_enum, default_value = "json")]
    format: AutomatonFormat,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    size: SizeArgs,
    /// Constant of the structure asymptotics; estimated from exact counts
    /// at this n when absent.
    #[arg(long)]
    gamma_rho: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Summary,
    PostStar,
}

#[derive(Args, Debug)]
struct ReachArgs {
    /// Automaton JSON file, `-` for stdin.
    input: String,
    #[arg(long, value_enum, default_value = "summary")]
    engine: Engine,
}

#[derive(Args, Debug)]
struct AcceptArgs {
    /// Automaton JSON file, `-` for stdin.
    input: String,
    /// Input word: letters concatenated, or separated by spaces.
    #[arg(short, long, default_value = "", allow_hyphen_values = true)]
    word: String,
    #[arg(long, value_parser = mode_arg, default_value = "final-state")]
    mode: AcceptanceMode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Table {
    Xp2,
    Xp3,
    Xp4,
    Xp5,
    Xp6,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Reachable,
    EmptyStackReachable,
    Rejects,
    NonemptyFraction,
    PopCount,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Reachable => Metric::Reachable,
            MetricArg::EmptyStackReachable => Metric::EmptyStackReachable,
            MetricArg::Rejects => Metric::Rejects,
            MetricArg::NonemptyFraction => Metric::NonemptyFraction,
            MetricArg::PopCount => Metric::PopCount,
        }
    }
}

#[derive(Args, Debug)]
struct XpArgs {
    table: Table,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Comma-separated λ values (default: the table's rows).
    #[arg(long, value_delimiter = ',', value_parser = lambda_arg)]
    lambdas: Option<Vec<Lambda>>,
    /// Comma-separated state counts (default: the table's columns).
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    /// Restrict to one alphabet pair (xp5 has three by default).
    #[arg(long, requires = "beta")]
    alpha: Option<usize>,
    #[arg(long, requires = "alpha")]
    beta: Option<usize>,
    /// Override the table's metric.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long, value_parser = mode_arg, default_value = "final-state")]
    mode: AcceptanceMode,
    #[arg(long, default_value_t = DEFAULT_MAX_REJECTS)]
    max_rejects: u64,
    #[arg(long, value_enum, default_value = "rejection")]
    dfa_sampler: DfaSampler,
    #[arg(long, value_enum, default_value = "tsv")]
    format: TableFormat,
}

fn lambda_arg(s: &str) -> Result<Ratio<u64>, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

fn mode_arg(s: &str) -> Result<AcceptanceMode, String> {
    s.parse::<AcceptanceMode>().map_err(|e| e.to_string())
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (3, "parse"),
            Error::GaveUp(_) => (4, "gave-up"),
            _ => (2, "parameter"),
        };
        let mut body = json!({ "error": kind, "message": e.to_string() });
        if let Error::GaveUp(report) = e {
            body["rejects"] = json!(report.rejects);
        }
        Failure { code, body }
    }
}

fn parameter_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        body: json!({ "error": "parameter", "message": message.into() }),
    }
}

type CliResult = Result<String, Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| parameter_error(format!("cannot read '{path}': {e}")))?;
    Ok(text)
}

fn size_of(args: &SizeArgs) -> Result<OutputSize, Failure> {
    match (args.lambda, args.m) {
        (Some(l), None) => Ok(OutputSize::Lambda(l)),
        (None, Some(m)) => Ok(OutputSize::Explicit(m)),
        _ => Err(parameter_error("exactly one of --lambda and --m is required")),
    }
}

fn strategy(s: DfaSampler) -> DfaStrategy {
    match s {
        DfaSampler::Rejection => DfaStrategy::Rejection,
        DfaSampler::Recursive => DfaStrategy::Recursive,
    }
}

fn gen(args: GenArgs) -> CliResult {
    let alphabets = Alphabets::generic(args.size.alpha, args.size.beta)?;
    let mut cfg = PipelineConfig::new(args.size.n, alphabets, size_of(&args.size)?);
    cfg.mode = args.mode;
    cfg.min_pop_fraction = args.min_pop_fraction;
    cfg.max_rejects = args.max_rejects;
    cfg.seed = args.seed;
    cfg.dfa_strategy = strategy(args.dfa_sampler);
    let pipeline = Pipeline::new(cfg)?;
    let mut rng = stream_rng(args.seed, 0);
    let a = match args.condition {
        Condition::None => pipeline.sample_rdpda(&mut rng),
        Condition::Nonempty => pipeline.sample_nonempty(&mut rng)?.0,
        Condition::Reachable => pipeline.sample_reachable(&mut rng)?.0,
    };
    Ok(match args.format {
        AutomatonFormat::Json => rdpda_to_json_pretty(&a),
        AutomatonFormat::Dot => rdpda_to_dot(&a),
    })
}

fn ratio_json(r: Ratio<u64>) -> Value {
    json!({
        "exact": format!("{r}"),
        "value": *r.numer() as f64 / *r.denom() as f64,
    })
}

fn count(args: CountArgs) -> CliResult {
    let alphabets = Alphabets::generic(args.size.alpha, args.size.beta)?;
    let n = args.size.n;
    if n == 0 {
        return Err(parameter_error("n must be positive"));
    }
    let rho = alphabets.rho();
    let s = (rho * n) as u64;
    let m = PipelineConfig::new(n, alphabets.clone(), size_of(&args.size)?).output_size()? as u64;
    let beta = alphabets.beta() as u64;
    let classes = counting::count_accessible_dfa_classes(n, rho);
    let decorations = counting::count_decorations(s, m, beta);
    let total = &classes * &decorations;

    let asymptotic = if m == 0 {
        Value::Null
    } else {
        let lambda = Ratio::new(m, s);
        let (gamma, source) = match args.gamma_rho {
            Some(g) => (g, "given".to_string()),
            None => (
                counting::estimate_gamma_rho(n, rho),
                format!("estimated from exact counts at n={n}"),
            ),
        };
        let dec = counting::asymptotic_decorations(lambda, s, beta)?;
        let all = counting::asymptotic_rdpda(lambda, n, &alphabets, gamma)?;
        json!({
            "lambda": format!("{lambda}"),
            "zeta": dec.zeta,
            "xi": dec.xi,
            "decorations": dec.scientific(),
            "rdpda": all.scientific(),
            "gamma_rho": gamma,
            "gamma_rho_source": source,
            "regime": dec.regime,
        })
    };
    let out = json!({
        "n": n,
        "alpha": alphabets.alpha(),
        "beta": beta,
        "s": s,
        "m": m,
        "accessible_dfa_classes": classes.to_string(),
        "decorations": decorations.to_string(),
        "rdpda": total.to_string(),
        "asymptotic": asymptotic,
        "avg_pop_transitions": ratio_json(counting::avg_pop_transitions(s, m)),
        "nonempty_lower_bound": ratio_json(counting::nonempty_lower_bound(s, m, beta)),
    });
    Ok(serde_json::to_string_pretty(&out).unwrap())
}

fn reach(args: ReachArgs) -> CliResult {
    let a = rdpda_from_json(&read_input(&args.input)?)?;
    let r: Reachability = match args.engine {
        Engine::Summary => analyze(&a),
        Engine::PostStar => analyze_post_star(&a),
    };
    let emptiness: serde_json::Map<String, Value> = AcceptanceMode::ALL
        .iter()
        .map(|&mode| (mode.name().to_string(), json!(r.is_language_empty(&a, mode))))
        .collect();
    let out = json!({
        "reachable": r.reachable_list(),
        "empty_stack_reachable": r.empty_stack_list(),
        "language_empty": emptiness,
    });
    Ok(serde_json::to_string_pretty(&out).unwrap())
}

fn accept(args: AcceptArgs) -> CliResult {
    let a = rdpda_from_json(&read_input(&args.input)?)?;
    Ok(a.accepts_str(&args.word, args.mode)?.to_string())
}

struct Grid {
    metric: Metric,
    lambdas: Vec<Lambda>,
    ns: Vec<usize>,
    alphabets: Vec<(usize, usize)>,
    min_pop_fraction: Option<Ratio<u64>>,
}

fn grid(table: Table) -> Grid {
    let l = |v: &[(u64, u64)]| v.iter().map(|&(a, b)| Ratio::new(a, b)).collect::<Vec<_>>();
    let wide = vec![5, 10, 15, 20, 30, 40, 60, 100];
    let tall = vec![10, 20, 30, 40, 50, 60, 80, 100];
    let es_lambdas = l(&[(1, 2), (1, 1), (3, 2), (2, 1), (3, 1), (5, 1)]);
    match table {
        Table::Xp2 => Grid {
            metric: Metric::EmptyStackReachable,
            lambdas: es_lambdas,
            ns: wide,
            alphabets: vec![(2, 2)],
            min_pop_fraction: None,
        },
        Table::Xp3 | Table::Xp4 => Grid {
            metric: Metric::Reachable,
            lambdas: l(&[(1, 1), (2, 1), (3, 1), (5, 1)]),
            ns: tall,
            alphabets: vec![if matches!(table, Table::Xp3) { (2, 2) } else { (3, 5) }],
            min_pop_fraction: None,
        },
        Table::Xp5 => Grid {
            metric: Metric::Rejects,
            lambdas: l(&[(1, 1), (3, 2), (2, 1), (3, 1), (5, 1)]),
            ns: tall,
            alphabets: vec![(2, 2), (4, 2), (2, 4)],
            min_pop_fraction: None,
        },
        Table::Xp6 => Grid {
            metric: Metric::EmptyStackReachable,
            lambdas: es_lambdas,
            ns: wide,
            alphabets: vec![(2, 2)],
            min_pop_fraction: Some(Ratio::new(2, 5)),
        },
    }
}

fn xp(args: XpArgs) -> CliResult {
    let mut g = grid(args.table);
    if let Some(l) = args.lambdas {
        g.lambdas = l;
    }
    if let Some(ns) = args.ns {
        g.ns = ns;
    }
    if let (Some(a), Some(b)) = (args.alpha, args.beta) {
        g.alphabets = vec![(a, b)];
    }
    if let Some(m) = args.metric {
        g.metric = m.into();
    }
    if g.lambdas.is_empty() || g.ns.is_empty() || args.samples == 0 {
        return Err(parameter_error("empty grid or zero samples"));
    }
    if g.ns.contains(&0) {
        return Err(parameter_error("n must be positive"));
    }
    let mut tables: Vec<TableStats> = Vec::new();
    for &(alpha, beta) in &g.alphabets {
        let alphabets = Alphabets::generic(alpha, beta)?;
        if alphabets.rho() < 2 {
            return Err(Error::Unsupported("alpha*beta must be at least 2".into()).into());
        }
        let mut defaults = PipelineConfig::new(1, alphabets, OutputSize::Lambda(g.lambdas[0]));
        defaults.mode = args.mode;
        defaults.max_rejects = args.max_rejects;
        defaults.seed = args.seed;
        defaults.dfa_strategy = strategy(args.dfa_sampler);
        defaults.min_pop_fraction = g.min_pop_fraction;
        tables.push(collect_table(g.metric, &g.lambdas, &g.ns, args.samples, &defaults));
    }
    Ok(match args.format {
        TableFormat::Json => serde_json::to_string_pretty(&tables).unwrap(),
        TableFormat::Tsv => {
            let mut out = String::new();
            for t in &tables {
                out.push_str(&format!(
                    "# metric={} alpha={} beta={}\n",
                    t.metric.name(),
                    t.alpha,
                    t.beta
                ));
                out.push_str(&t.to_tsv());
            }
            out.trim_end().to_string()
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let body = json!({ "error": "parameter", "message": e.to_string().trim() });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Count(a) => count(a),
        Command::Reach(a) => reach(a),
        Command::Accept(a) => accept(a),
        Command::Xp(a) => xp(a),
    };
    match result {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
