use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdreg::counting::{count_structured, count_unstructured_detailed, verify_counting, Hypothesis, DEFAULT_BUDGET};
use mdreg::partition::BlockPartition;
use mdreg::patterns::{
    build_counterexample, check_pattern, check_pattern_relative, hadamard_regular_matrix, random_tensor,
    HadamardVariant, PatternConfig, PatternMode, PatternVerdict,
};
use mdreg::rational::{format_rational, parse_rational, rat, Rational};
use mdreg::szemeredi::{decompose, DecompositionConfig};
use mdreg::{check_regularity, Alphabet, CheckConfig, CheckMode, Delta, Epsilon, Error, Tensor};
use serde::Serialize;
use serde_json::json;

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "mdreg", version, about = "Regularity, decomposition and counting for d-dimensional matrices")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a matrix.
    #[command(subcommand)]
    Gen(Gen),
    /// Check a matrix for ε-regularity.
    CheckRegularity(CheckRegularityArgs),
    /// Run the regularity decomposition, printing one JSON line per round.
    Decompose(DecomposeArgs),
    /// Count occurrences of a target matrix.
    Count(CountArgs),
    /// Check the counting lower bound on a block grid.
    VerifyBound(VerifyBoundArgs),
    /// Certify a matrix as an ε-regular pattern.
    CheckPattern(CheckPatternArgs),
    /// Build the 3D matrix with regular blocks that avoids the 2×2×2 target.
    Counterexample(CounterexampleArgs),
}

#[derive(Subcommand)]
enum Gen {
    /// I.i.d. entries with exact symbol densities.
    Random {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        alphabet: Vec<String>,
        /// One "num/den" per symbol; uniform when omitted.
        #[arg(long, value_delimiter = ',')]
        densities: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Binary Sylvester–Hadamard matrix of order 2^k.
    Hadamard {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "balanced")]
        variant: HadamardVariant,
        /// Also check interval-mode regularity at this ε; the report goes to --report.
        #[arg(long)]
        eps: Option<Epsilon>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// The 3D matrix built from a balanced Hadamard matrix of order 2^k.
    Counterexample {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "subsets")]
    mode: CheckMode,
    /// Random boxes in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = CheckConfig::DEFAULT_CAP)]
    cap: u64,
}

impl CheckArgs {
    fn config(&self) -> CheckConfig {
        CheckConfig { mode: self.mode, budget: self.budget, seed: self.seed, cap: self.cap }
    }
}

#[derive(Args)]
struct CheckRegularityArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: Epsilon,
    #[command(flatten)]
    check: CheckArgs,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: Epsilon,
    #[arg(long, default_value = "intervals")]
    mode: CheckMode,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = CheckConfig::DEFAULT_CAP)]
    cap: u64,
    /// Initial grid order; the smallest valid one by default.
    #[arg(long)]
    t0: Option<usize>,
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Write the final partition here.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Grid partition for the structured count; unstructured when omitted.
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum HypothesisKind {
    Regular,
    Pattern,
    RelativePattern,
}

#[derive(Args)]
struct PatternArgs {
    #[arg(long = "pattern-mode", default_value = "exhaustive")]
    pattern_mode: PatternMode,
    #[arg(long, default_value_t = 50)]
    probes: usize,
    #[arg(long, default_value_t = 8)]
    inner_probes: usize,
    #[arg(long = "pattern-seed", default_value_t = PatternConfig::DEFAULT_SEED)]
    pattern_seed: u64,
    #[arg(long = "pattern-cap", default_value_t = PatternConfig::DEFAULT_CAP)]
    pattern_cap: usize,
}

impl PatternArgs {
    fn config(&self) -> PatternConfig {
        PatternConfig {
            mode: self.pattern_mode,
            probes: self.probes,
            inner_probes: self.inner_probes,
            seed: self.pattern_seed,
            cap: self.pattern_cap,
            ..PatternConfig::exhaustive()
        }
    }
}

#[derive(Args)]
struct VerifyBoundArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    delta: Delta,
    #[arg(long)]
    eps: Epsilon,
    #[arg(long, value_enum, default_value = "regular")]
    hypothesis: HypothesisKind,
    #[command(flatten)]
    check: CheckArgs,
    #[command(flatten)]
    pattern: PatternArgs,
}

#[derive(Args)]
struct CheckPatternArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: Epsilon,
    #[arg(long, default_value = "exhaustive")]
    mode: PatternMode,
    #[arg(long, default_value_t = 50)]
    probes: usize,
    #[arg(long, default_value_t = 8)]
    inner_probes: usize,
    #[arg(long, default_value_t = PatternConfig::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = PatternConfig::DEFAULT_CAP)]
    cap: usize,
    /// Take probes from the blocks of this partition over --source.
    #[arg(long, requires = "source")]
    partition: Option<PathBuf>,
    #[arg(long, requires = "partition")]
    source: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    out_dir: PathBuf,
}

/// Successful run: the text to emit and whether the verdict was negative.
struct Output {
    text: String,
    negative: bool,
}

impl Output {
    fn positive(text: String) -> Self {
        Output { text, negative: false }
    }
}

fn load_tensor(path: &Path) -> Result<Tensor, Error> {
    Tensor::load(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path) -> Result<BlockPartition, Error> {
    BlockPartition::load(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn report(config: serde_json::Value, result: impl Serialize) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(&json!({ "config": config, "result": result }))?)
}

fn gen(g: Gen) -> Result<Output, Error> {
    let t = match g {
        Gen::Random { dims, alphabet, densities, seed } => {
            let alphabet = Alphabet::new(alphabet)?;
            let densities: Vec<Rational> = if densities.is_empty() {
                vec![rat(1, alphabet.len() as i64); alphabet.len()]
            } else {
                densities.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?
            };
            random_tensor(&dims, &alphabet, &densities, seed)?
        }
        Gen::Hadamard { k, variant, eps, report: path } => {
            let h = hadamard_regular_matrix(k, variant, eps)?;
            if let Some(path) = path {
                fs::write(path, serde_json::to_string_pretty(&h)? + "\n")?;
            }
            h.tensor
        }
        Gen::Counterexample { k } => {
            let h = hadamard_regular_matrix(k, HadamardVariant::Balanced, None)?;
            build_counterexample(&h.tensor)?.tensor
        }
    };
    Ok(Output::positive(t.to_json()?))
}

fn check_regularity_cmd(a: CheckRegularityArgs) -> Result<Output, Error> {
    let t = load_tensor(&a.input)?;
    let cfg = a.check.config();
    let cert = check_regularity(&t, a.eps, &cfg)?;
    let config = json!({ "input": a.input, "eps": a.eps, "check": cfg });
    Ok(Output { negative: !cert.is_regular(), text: report(config, &cert)? })
}

fn decompose_cmd(a: DecomposeArgs) -> Result<Output, Error> {
    let t = load_tensor(&a.input)?;
    let check = CheckConfig { mode: a.mode, budget: a.budget, seed: a.seed, cap: a.cap };
    let mut cfg = DecompositionConfig::new(a.eps, t.ndim())?.with_check(check);
    if let Some(t0) = a.t0 {
        cfg = cfg.with_initial_order(t0);
    }
    if let Some(r) = a.max_rounds {
        cfg.max_rounds = r;
    }
    let dec = decompose(&t, &cfg)?;
    if let Some(path) = &a.partition_out {
        dec.partition.partition().save(path)?;
    }
    let summary = json!({
        "config": { "input": a.input, "decomposition": cfg },
        "result": {
            "rounds": dec.trace.rounds(),
            "round_bound": dec.trace.round_bound,
            "regular": dec.final_check.regular,
            "certified": dec.certified,
            "order": dec.partition.order(),
            "block_order": dec.partition.block_order(),
            "cardinality": dec.partition.partition().cardinality(),
            "exceptional_volume": dec.partition.partition().exceptional_volume(),
        }
    });
    let mut text = dec.trace.to_json_lines()?;
    text.push_str(&serde_json::to_string(&summary)?);
    Ok(Output::positive(text))
}

fn count_cmd(a: CountArgs) -> Result<Output, Error> {
    let t = load_tensor(&a.input)?;
    let c = load_tensor(&a.target)?;
    let config = json!({ "input": a.input, "target": a.target, "partition": a.partition, "budget": a.budget });
    let result = match &a.partition {
        Some(path) => {
            let p = load_partition(path)?;
            json!({ "kind": "structured", "count": count_structured(&t, &p, &c)?.to_string() })
        }
        None => {
            let u = count_unstructured_detailed(&t, &c, a.budget)?;
            json!({
                "kind": "unstructured",
                "count": u.distinct_locations.to_string(),
                "placements": u.placements.to_string(),
            })
        }
    };
    Ok(Output::positive(report(config, result)?))
}

fn verify_bound_cmd(a: VerifyBoundArgs) -> Result<Output, Error> {
    let t = load_tensor(&a.input)?;
    let p = load_partition(&a.partition)?;
    let c = load_tensor(&a.target)?;
    let (hyp, hyp_config) = match a.hypothesis {
        HypothesisKind::Regular => {
            let cfg = a.check.config();
            (Hypothesis::Regular(cfg), json!({ "regular": cfg }))
        }
        HypothesisKind::Pattern => {
            let cfg = a.pattern.config();
            (Hypothesis::Pattern(cfg), json!({ "pattern": cfg }))
        }
        HypothesisKind::RelativePattern => {
            let cfg = a.pattern.config();
            (Hypothesis::RelativePattern(cfg), json!({ "relative-pattern": cfg }))
        }
    };
    let r = verify_counting(&t, &p, &c, a.delta, &hyp, a.eps)?;
    let config = json!({
        "input": a.input,
        "partition": a.partition,
        "target": a.target,
        "delta": a.delta,
        "eps": a.eps,
        "hypothesis": hyp_config,
    });
    Ok(Output { negative: !r.satisfied, text: report(config, &r)? })
}

fn check_pattern_cmd(a: CheckPatternArgs) -> Result<Output, Error> {
    let t = load_tensor(&a.input)?;
    let cfg = PatternConfig {
        mode: a.mode,
        probes: a.probes,
        inner_probes: a.inner_probes,
        seed: a.seed,
        cap: a.cap,
        ..PatternConfig::exhaustive()
    };
    let cert = match (&a.partition, &a.source) {
        (Some(pp), Some(sp)) => check_pattern_relative(&t, a.eps, &load_tensor(sp)?, &load_partition(pp)?, &cfg)?,
        _ => check_pattern(&t, a.eps, &cfg)?,
    };
    let config = json!({
        "input": a.input,
        "eps": a.eps,
        "pattern": cfg,
        "partition": a.partition,
        "source": a.source,
    });
    Ok(Output { negative: cert.verdict == PatternVerdict::NotPattern, text: report(config, &cert)? })
}

fn counterexample_cmd(a: CounterexampleArgs) -> Result<Output, Error> {
    let h = hadamard_regular_matrix(a.k, HadamardVariant::Balanced, None)?;
    let ce = build_counterexample(&h.tensor)?;
    fs::create_dir_all(&a.out_dir)?;
    let path = |name: &str| a.out_dir.join(name);
    ce.tensor.save(path("A.json"))?;
    ce.partition.save(path("partition.json"))?;
    ce.target.save(path("U.json"))?;
    let densities: Vec<String> = ce
        .partition
        .blocks()
        .iter()
        .map(|b| ce.tensor.density(&b.axes, "1").map(|d| format_rational(&d.to_rational())))
        .collect::<Result<_, _>>()?;
    let u = count_unstructured_detailed(&ce.tensor, &ce.target, DEFAULT_BUDGET)?;
    let config = json!({ "k": a.k, "out_dir": a.out_dir, "variant": HadamardVariant::Balanced });
    let result = json!({
        "order": ce.tensor.dims()[0],
        "files": [path("A.json"), path("partition.json"), path("U.json")],
        "block_densities": densities,
        "target_count": u.distinct_locations.to_string(),
        "target_placements": u.placements.to_string(),
    });
    Ok(Output::positive(report(config, result)?))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let out = match cli.command {
        Command::Gen(g) => gen(g)?,
        Command::CheckRegularity(a) => check_regularity_cmd(a)?,
        Command::Decompose(a) => decompose_cmd(a)?,
        Command::Count(a) => count_cmd(a)?,
        Command::VerifyBound(a) => verify_bound_cmd(a)?,
        Command::CheckPattern(a) => check_pattern_cmd(a)?,
        Command::Counterexample(a) => counterexample_cmd(a)?,
    };
    emit(&out.text, cli.out.as_deref())?;
    Ok(out.negative)
}

fn main() -> ExitCode {
    // usage errors exit 1: code 2 is reserved for negative verdicts
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("mdreg: {e}");
            ExitCode::from(1)
        }
    }
}
