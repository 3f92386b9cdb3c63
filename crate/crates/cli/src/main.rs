use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mre_core::eval::{read_cases, write_cases};
use mre_core::scoring::{boundary_of, odds_gbf, update_ratio};
use mre_core::{
    cbf, generate_test_cases, parse_network, posterior_probability, prior_probability, run_grid, solve_kmre,
    Assignment, CaseOptions, DedupKey, Error, Method, Network, PoolRule, Score, SolverOptions, VarId,
    DEFAULT_CANDIDATE_BUDGET, DEFAULT_TABLE_BUDGET,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "mre", version, about = "Most Relevant Explanation over discrete Bayesian networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the top-K minimal explanations of the evidence
    Solve(SolveArgs),
    /// Score one explanation against the evidence
    Score(ScoreArgs),
    /// Sample test cases as JSON lines
    Cases(CasesArgs),
    /// Run every method over sampled test cases and report precision/recall
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct NetArgs {
    /// Network file
    #[arg(long)]
    net: PathBuf,
}

#[derive(Args, Debug, Clone, Copy)]
struct Budgets {
    /// Largest number of candidate explanations to enumerate
    #[arg(long, default_value_t = DEFAULT_CANDIDATE_BUDGET)]
    budget_candidates: usize,
    /// Largest joint table inference may build
    #[arg(long, default_value_t = DEFAULT_TABLE_BUDGET)]
    budget_table: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule {
    /// Admit only explanations minimal in the whole lattice
    Lattice,
    /// Check dominance against pool members only
    Members,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dedup {
    Evidence,
    Case,
    Sample,
}

impl From<Dedup> for DedupKey {
    fn from(d: Dedup) -> Self {
        match d {
            Dedup::Evidence => DedupKey::Evidence,
            Dedup::Case => DedupKey::Case,
            Dedup::Sample => DedupKey::Sample,
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    net: NetArgs,
    /// Observed bindings, `Var=state,...`
    #[arg(long)]
    evidence: String,
    /// Target variables; defaults to every variable with role=target
    #[arg(long, value_delimiter = ',')]
    targets: Vec<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Rule::Lattice)]
    rule: Rule,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[command(flatten)]
    net: NetArgs,
    #[arg(long)]
    evidence: String,
    /// Explanation to score, `Var=state,...`
    #[arg(long)]
    explanation: String,
    /// Existing explanation to condition on; adds the conditional Bayes factor
    #[arg(long)]
    given: Option<String>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    format: TextFormat,
}

#[derive(Args, Debug)]
struct CaseGen {
    /// Number of distinct test cases to sample
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// What makes two sampled cases the same
    #[arg(long, value_enum, default_value_t = Dedup::Case)]
    dedup: Dedup,
    /// Sampling attempts before giving up
    #[arg(long, default_value_t = 1_000_000)]
    attempts: u64,
}

#[derive(Args, Debug)]
struct CasesArgs {
    #[command(flatten)]
    net: NetArgs,
    #[command(flatten)]
    gen: CaseGen,
    #[arg(long, default_value_t = 1)]
    min_faults: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    net: NetArgs,
    #[command(flatten)]
    gen: CaseGen,
    /// Read test cases from a JSON-lines file instead of sampling
    #[arg(long, conflicts_with_all = ["cases", "seed", "dedup", "attempts"])]
    case_file: Option<PathBuf>,
    /// Solutions generated per method
    #[arg(long, value_delimiter = ',', default_value = "1")]
    k: Vec<usize>,
    /// Minimum faulty targets per case
    #[arg(long, value_delimiter = ',', default_value = "1")]
    min_faults: Vec<usize>,
    /// Methods to compare [default: marginal,p_map,f_map,mre; marginal only runs at K=1]
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[command(flatten)]
    budgets: Budgets,
}

fn load(path: &Path) -> anyhow::Result<Network> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_network(&text).with_context(|| format!("parsing {}", path.display()))
}

fn bindings(net: &Network, what: &str, text: &str) -> anyhow::Result<Assignment> {
    net.parse_assignment(text).with_context(|| format!("--{what}"))
}

fn solver_options(b: Budgets, jobs: usize, rule: PoolRule) -> anyhow::Result<SolverOptions> {
    if jobs == 0 {
        bail!(Error::InvalidArgument("--jobs must be at least 1".into()));
    }
    Ok(SolverOptions {
        candidate_budget: b.budget_candidates,
        table_budget: b.budget_table,
        jobs,
        rule,
    })
}

fn score_json(s: Score) -> Value {
    if s.is_infinite() {
        json!("inf")
    } else {
        json!(s.value())
    }
}

fn solve(args: SolveArgs) -> anyhow::Result<String> {
    let net = load(&args.net.net)?;
    let evidence = bindings(&net, "evidence", &args.evidence)?;
    if args.k == 0 {
        bail!(Error::InvalidArgument("--k must be at least 1".into()));
    }
    let targets: Vec<VarId> = if args.targets.is_empty() {
        net.targets()
    } else {
        args.targets
            .iter()
            .map(|t| {
                net.var_id(t.trim())
                    .ok_or_else(|| Error::UnknownVariable(t.trim().to_string()))
            })
            .collect::<mre_core::Result<_>>()
            .context("--targets")?
    };
    let rule = match args.rule {
        Rule::Lattice => PoolRule::Lattice,
        Rule::Members => PoolRule::MembersOnly,
    };
    let opts = solver_options(args.budgets, args.jobs, rule)?;
    let pool = solve_kmre(&net, &targets, &evidence, args.k, &opts)?;
    let mut out = String::new();
    match args.format {
        TextFormat::Text => {
            for (rank, e) in pool.members().iter().enumerate() {
                let s = &e.scores;
                out.push_str(&format!(
                    "{}\t{}\tgbf={}\tprior={}\tposterior={}\tupdate_ratio={}\n",
                    rank + 1,
                    net.format_assignment(&e.assignment),
                    s.gbf,
                    s.prior,
                    s.posterior,
                    s.belief_update_ratio
                ));
            }
        }
        TextFormat::Json => {
            let rows: Vec<Value> = pool
                .members()
                .iter()
                .enumerate()
                .map(|(rank, e)| {
                    json!({
                        "rank": rank + 1,
                        "explanation": net.named_bindings(&e.assignment),
                        "gbf": score_json(e.scores.gbf),
                        "prior": e.scores.prior.value(),
                        "posterior": e.scores.posterior.value(),
                        "belief_update_ratio": e.scores.belief_update_ratio,
                    })
                })
                .collect();
            out = serde_json::to_string_pretty(&rows)? + "\n";
        }
    }
    Ok(out)
}

fn score(args: ScoreArgs) -> anyhow::Result<String> {
    let net = load(&args.net.net)?;
    let evidence = bindings(&net, "evidence", &args.evidence)?;
    let x = bindings(&net, "explanation", &args.explanation)?;
    let given = args.given.as_deref().map(|g| bindings(&net, "given", g)).transpose()?;
    if x.is_empty() {
        bail!(Error::EmptyAssignment("--explanation"));
    }
    let prior = prior_probability(&net, &x)?.value();
    let posterior = posterior_probability(&net, &x, &evidence)?.value();
    let gbf = odds_gbf(prior, posterior)?;
    let ratio = update_ratio(prior, posterior);
    let boundary = match boundary_of(prior, posterior) {
        Ok(b) => Some(b),
        Err(Error::InfiniteBoundary) => None,
        Err(e) => return Err(e.into()),
    };
    let conditional = given.as_ref().map(|g| cbf(&net, &x, g, &evidence)).transpose()?;
    Ok(match args.format {
        TextFormat::Text => {
            let mut out = format!(
                "gbf\t{gbf}\nprior\t{prior}\nposterior\t{posterior}\nbelief_update_ratio\t{ratio}\ninclusion_boundary\t{}\n",
                boundary.map_or("inf".to_string(), |b| b.to_string())
            );
            if let Some(c) = conditional {
                out.push_str(&format!("cbf\t{c}\n"));
            }
            out
        }
        TextFormat::Json => {
            let mut v = json!({
                "explanation": net.named_bindings(&x),
                "gbf": score_json(gbf),
                "prior": prior,
                "posterior": posterior,
                "belief_update_ratio": ratio,
                "inclusion_boundary": boundary.map_or(json!("inf"), |b| json!(b)),
            });
            if let (Some(c), Some(g)) = (conditional, &given) {
                v["cbf"] = score_json(c);
                v["given"] = json!(net.named_bindings(g));
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    })
}

fn sample(net: &Network, gen: &CaseGen, min_faults: usize) -> anyhow::Result<Vec<mre_core::TestCase>> {
    let opts = CaseOptions {
        attempt_budget: gen.attempts,
        dedup: gen.dedup.into(),
    };
    let cases = generate_test_cases(net, gen.cases, min_faults, gen.seed, &opts)?;
    if cases.len() < gen.cases {
        eprintln!("note: {} of {} requested cases exist within the attempt budget", cases.len(), gen.cases);
    }
    Ok(cases)
}

fn cases(args: CasesArgs) -> anyhow::Result<String> {
    let net = load(&args.net.net)?;
    let cases = sample(&net, &args.gen, args.min_faults)?;
    Ok(write_cases(&net, &cases))
}

fn bench(args: BenchArgs) -> anyhow::Result<String> {
    let net = load(&args.net.net)?;
    if args.k.contains(&0) {
        bail!(Error::InvalidArgument("--k values must be at least 1".into()));
    }
    let methods: Vec<Method> = match &args.methods {
        None => vec![Method::Marginal, Method::PMap, Method::FMap, Method::Mre],
        Some(names) => {
            let methods: Vec<Method> = names
                .iter()
                .map(|m| m.trim().parse())
                .collect::<mre_core::Result<_>>()
                .context("--methods")?;
            // an explicit single-solution method cannot honour K > 1
            if let Some(m) = methods.iter().find(|m| !m.supports_top_k()) {
                if args.k.iter().any(|&k| k > 1) {
                    bail!(Error::SingleSolutionMethod(m.as_str()));
                }
            }
            methods
        }
    };
    let opts = solver_options(args.budgets, 1, PoolRule::Lattice)?;
    if args.jobs == 0 {
        bail!(Error::InvalidArgument("--jobs must be at least 1".into()));
    }
    let cases = match &args.case_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            read_cases(&net, &text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => {
            let floor = args.min_faults.iter().copied().min().unwrap_or(1);
            sample(&net, &args.gen, floor)?
        }
    };
    let report = run_grid(&net, &cases, &methods, &args.k, &args.min_faults, &opts, args.jobs)?;
    Ok(match args.format {
        TableFormat::Csv => report.to_csv(),
        TableFormat::Json => report.to_json() + "\n",
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let Some(e) = err.chain().find_map(|c| c.downcast_ref::<Error>()) else {
        return 1;
    };
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::CasesExhausted { .. } => 4,
        Error::ZeroProbabilityEvidence
        | Error::ImpossibleExplanation
        | Error::CertainExplanation
        | Error::DegenerateConditional(_)
        | Error::InfiniteBoundary
        | Error::NoCandidates
        | Error::InvalidProbability(_)
        | Error::UnboundVariable(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Score(a) => score(a),
        Command::Cases(a) => cases(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
