use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use answersum::centrality::TextRankConfig;
use answersum::corpus::{load_benchmark, load_units, save_units};
use answersum::dump::{
    build_contrastive_triplets, extract_annotation_units, parse_postlinks, parse_posts, write_triplets_jsonl,
    DuplicateLink, PostStore, PostType,
};
use answersum::pipeline::{summarize_sentences, EmbedderSource};
use answersum::rouge::evaluate_outcomes;
use answersum::scoring::{LexicalScorer, RemoteClient, TfIdfScorer};
use answersum::{summarize_benchmark, Execution, PipelineConfig, RedundancyConfig, TechnicalQuery};
use anyhow::{anyhow, Context, Result};

use crate::{
    Cli, Command, DumpArgs, EvaluateArgs, ExtractArgs, PipelineArgs, ScorerMode, SummarizeArgs, TripletArgs,
    ENDPOINT_ENV,
};

pub fn run(cli: Cli) -> Result<()> {
    let exec = execution(cli.jobs)?;
    match cli.command {
        Command::Summarize(args) => summarize(args, exec),
        Command::Evaluate(args) => evaluate(args, exec),
        Command::ExtractUnits(args) => extract_units(args, exec),
        Command::BuildTriplets(args) => build_triplets(args),
    }
}

fn execution(jobs: usize) -> Result<Execution> {
    if jobs == 1 {
        return Ok(Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("starting worker pool")?;
    }
    Ok(Execution::Parallel)
}

fn pipeline_config(args: &PipelineArgs, exec: Execution) -> Result<PipelineConfig> {
    let mut config = match args.scorer {
        ScorerMode::Lexical => PipelineConfig::new(Arc::new(LexicalScorer)),
        ScorerMode::Tfidf => PipelineConfig::new(Arc::new(TfIdfScorer)),
        ScorerMode::Remote => {
            let endpoint = args
                .endpoint
                .as_deref()
                .ok_or_else(|| anyhow!("--scorer remote needs --endpoint or {ENDPOINT_ENV}"))?;
            let client = Arc::new(RemoteClient::new(endpoint)?.with_batch_size(args.batch_size));
            let mut config = PipelineConfig::new(client.clone());
            config.embedder = EmbedderSource::Shared(client);
            config
        }
    };
    config.top_k = args.top_k;
    config.textrank = TextRankConfig {
        damping: args.damping,
        convergence_threshold: args.convergence,
        max_iterations: args.max_iterations,
    };
    config.redundancy = RedundancyConfig { threshold: args.threshold, budget: args.budget };
    config.mode = args.ablation.into();
    config.execution = exec;
    config.validate()?;
    Ok(config)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush().with_context(|| format!("writing {}", path.display()))
}

fn summarize(args: SummarizeArgs, exec: Execution) -> Result<()> {
    let config = pipeline_config(&args.pipeline, exec)?;
    let units = load_units(&args.unit)?;
    let unit = units
        .get(args.unit_index)
        .ok_or_else(|| anyhow!("{} holds {} units; no index {}", args.unit.display(), units.len(), args.unit_index))?;
    let query = match &args.query {
        Some(text) => TechnicalQuery::new(text.as_str(), unit.query().tags().iter().cloned())?,
        None => unit.query().clone(),
    };
    let result = summarize_sentences(&query, unit.sentences(), &config)?;
    if result.centrality.as_ref().is_some_and(|c| !c.converged) {
        eprintln!("warning: TextRank did not converge within {} iterations", config.textrank.max_iterations);
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for sentence in &result.sentences {
        writeln!(out, "{}\t{}", sentence.id(), sentence.text())?;
    }
    if let Some(path) = &args.out {
        write_json(path, &result)?;
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs, exec: Execution) -> Result<()> {
    let config = pipeline_config(&args.pipeline, exec)?;
    let entries = load_benchmark(&args.benchmark)?;
    let outcomes = summarize_benchmark(&entries, &config);
    let report = evaluate_outcomes(&outcomes, &entries, exec)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_table());
    }
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    let failures: Vec<_> = outcomes.into_iter().enumerate().filter_map(|(i, o)| o.err().map(|e| (i, e))).collect();
    for (i, e) in &failures {
        eprintln!("entry {i} failed in the {} stage: {e}", e.stage());
    }
    match failures.into_iter().next() {
        Some((i, e)) => Err(anyhow::Error::new(e).context(format!("benchmark entry {i}"))),
        None => Ok(()),
    }
}

fn languages(args: &DumpArgs) -> BTreeSet<String> {
    args.languages.iter().map(|l| l.trim().to_lowercase()).filter(|l| !l.is_empty()).collect()
}

fn read_links(path: &Path) -> Result<Vec<DuplicateLink>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut parser = parse_postlinks(file);
    let links =
        parser.by_ref().collect::<Result<Vec<_>, _>>().with_context(|| format!("parsing {}", path.display()))?;
    let stats = parser.stats();
    println!(
        "links read: {} duplicate, {} other type, {} self",
        stats.yielded, stats.other_link_type, stats.self_links
    );
    Ok(links)
}

fn read_posts(path: &Path, keep: impl Fn(PostType) -> bool) -> Result<PostStore> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut parser = parse_posts(file);
    let mut store = PostStore::new();
    for post in parser.by_ref() {
        let post = post.with_context(|| format!("parsing {}", path.display()))?;
        if keep(post.post_type) {
            store.insert(post);
        }
    }
    let stats = parser.stats();
    println!(
        "posts read: {} kept, {} without body, {} incomplete, {} other type",
        stats.yielded, stats.missing_body, stats.incomplete, stats.other_type
    );
    Ok(store)
}

fn extract_units(args: ExtractArgs, exec: Execution) -> Result<()> {
    let store = read_posts(&args.dump.posts, |_| true)?;
    let links = read_links(&args.dump.postlinks)?;
    let (units, stats) = extract_annotation_units(links, &store, &languages(&args.dump), exec);
    save_units(&args.out, &units)?;
    println!("originals: {}", stats.originals);
    println!("units kept: {}", stats.units_kept);
    println!(
        "units dropped: {} too few answers, {} too many answers, {} wrong language, {} invalid",
        stats.units_too_few, stats.units_too_many, stats.wrong_language, stats.units_invalid
    );
    println!(
        "answers: {} seen, {} without votes, {} without text",
        stats.answers_seen, stats.dropped_no_vote, stats.dropped_no_text
    );
    println!("missing posts: {}", stats.missing_posts);
    Ok(())
}

fn build_triplets(args: TripletArgs) -> Result<()> {
    let store = read_posts(&args.dump.posts, |t| t == PostType::Question)?;
    let links = read_links(&args.dump.postlinks)?;
    let (triplets, stats) =
        build_contrastive_triplets(links, &store, &languages(&args.dump), args.seed, args.negative_pool.into());
    let mut out = create(&args.out)?;
    write_triplets_jsonl(&mut out, &triplets).with_context(|| format!("writing {}", args.out.display()))?;
    println!("triplets written: {}", stats.emitted);
    println!("pairs skipped: {} missing posts, {} wrong language", stats.missing_posts, stats.wrong_language);
    if stats.no_negative > 0 {
        eprintln!("warning: {} pairs had no tag-disjoint negative", stats.no_negative);
    }
    Ok(())
}
