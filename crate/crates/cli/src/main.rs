//! `answersum` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use answersum::dump::NegativePool;
use answersum::pipeline::DEFAULT_TOP_K;
use answersum::scoring::DEFAULT_BATCH_SIZE;
use answersum::{AblationMode, PipelineError, ScoringError};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const ENDPOINT_ENV: &str = "ANSWERSUM_SCORER_ENDPOINT";

#[derive(Parser, Debug)]
#[command(name = "answersum", version, about = "Query-focused extractive summaries of multi-answer Q&A threads")]
struct Cli {
    /// Worker threads for data-parallel work; 1 runs sequentially, 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize one annotation unit.
    Summarize(SummarizeArgs),
    /// Summarize every benchmark entry and report ROUGE-1/2/L.
    Evaluate(EvaluateArgs),
    /// Mine annotation units from Posts.xml and PostLinks.xml.
    ExtractUnits(ExtractArgs),
    /// Mine (anchor, positive, negative) title triplets from duplicate links.
    BuildTriplets(TripletArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScorerMode {
    /// Query-token overlap usefulness, per-unit TF-IDF embeddings.
    Lexical,
    /// TF-IDF cosine usefulness, per-unit TF-IDF embeddings.
    Tfidf,
    /// A scorer service for both usefulness and embeddings.
    Remote,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Ablation {
    /// Usefulness ranking only.
    Stage1,
    /// Usefulness ranking, then centrality.
    Stage12,
    /// All three stages.
    Full,
}

impl From<Ablation> for AblationMode {
    fn from(a: Ablation) -> Self {
        match a {
            Ablation::Stage1 => AblationMode::UsefulnessOnly,
            Ablation::Stage12 => AblationMode::UsefulnessCentrality,
            Ablation::Full => AblationMode::Full,
        }
    }
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value_t = ScorerMode::Lexical)]
    scorer: ScorerMode,

    /// Scorer service base URL (http://host:port); required with --scorer remote.
    #[arg(long, env = ENDPOINT_ENV)]
    endpoint: Option<String>,

    /// Sentences per request to the scorer service.
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    batch_size: usize,

    /// Sentences kept by usefulness ranking.
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    top_k: usize,

    /// Cosine similarity above which a sentence counts as redundant.
    #[arg(long, default_value_t = 0.8)]
    threshold: f64,

    /// Summary length in sentences.
    #[arg(long, default_value_t = 5)]
    budget: usize,

    /// TextRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,

    /// TextRank stops once no score moves by this much.
    #[arg(long, default_value_t = 0.0001)]
    convergence: f64,

    #[arg(long, default_value_t = 1000)]
    max_iterations: usize,

    #[arg(long, value_enum, default_value_t = Ablation::Full)]
    ablation: Ablation,
}

#[derive(Args, Debug)]
struct SummarizeArgs {
    /// Annotation unit JSON (a single unit or {"units": [...]}).
    unit: PathBuf,

    /// Query text; defaults to the unit's own question title.
    #[arg(long)]
    query: Option<String>,

    /// Which unit to summarize when the file holds several.
    #[arg(long, default_value_t = 0)]
    unit_index: usize,

    /// Write the full result, with stage trace, as JSON.
    #[arg(long)]
    out: Option<PathBuf>,

    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Benchmark JSON file.
    benchmark: PathBuf,

    /// Write the ROUGE report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,

    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long)]
    posts: PathBuf,

    #[arg(long)]
    postlinks: PathBuf,

    /// Language tags a question must carry.
    #[arg(long, value_delimiter = ',', default_value = "java,python")]
    languages: Vec<String>,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[command(flatten)]
    dump: DumpArgs,

    /// Output units JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pool {
    /// Questions tagged with a requested language.
    Languages,
    /// Every question in the dump.
    All,
}

#[derive(Args, Debug)]
struct TripletArgs {
    #[command(flatten)]
    dump: DumpArgs,

    /// Seed for negative sampling.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Where negatives are drawn from.
    #[arg(long, value_enum, default_value_t = Pool::Languages)]
    negative_pool: Pool,

    /// Output JSON-lines file.
    #[arg(long)]
    out: PathBuf,
}

impl From<Pool> for NegativePool {
    fn from(p: Pool) -> Self {
        match p {
            Pool::Languages => NegativePool::Languages,
            Pool::All => NegativePool::All,
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let scorer_failure = err.chain().any(|cause| {
        cause.downcast_ref::<PipelineError>().is_some_and(PipelineError::is_remote)
            || cause.downcast_ref::<ScoringError>().is_some_and(ScoringError::is_remote)
    });
    if scorer_failure {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
