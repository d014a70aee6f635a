//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any failed.

use std::collections::{BTreeSet, HashMap};
use std::io::Read;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use answersum::centrality::{textrank_scores, SentenceGraph, TextRankConfig};
use answersum::corpus::{load_benchmark, load_units, parse_benchmark, save_benchmark, CorpusError};
use answersum::dump::{
    build_contrastive_triplets, extract_annotation_units, parse_postlinks, parse_posts, write_triplets_jsonl,
    NegativePool, PostStore,
};
use answersum::pipeline::summarize_sentences;
use answersum::redundancy::greedy_select;
use answersum::scoring::{lexical_usefulness, LexicalScorer};
use answersum::{
    cosine_similarity, rouge_l, rouge_n, summarize, AblationMode, AnswerSentence, Execution, PipelineConfig,
    RedundancyConfig, SentenceEmbedding, SentenceId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn sequential(scorer_config: PipelineConfig) -> PipelineConfig {
    PipelineConfig { execution: Execution::Sequential, ..scorer_config }
}

// ROUGE ------------------------------------------------------------------

fn oracle_ngrams(tokens: &[u32], n: usize) -> Vec<Vec<u32>> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n).map(|i| tokens[i..i + n].to_vec()).collect()
}

/// Brute-force clipped overlap: for each distinct reference n-gram, count its
/// occurrences on both sides by linear scan.
fn oracle_rouge_n(cand: &[u32], reference: &[u32], n: usize) -> (f64, f64, f64) {
    let c = oracle_ngrams(cand, n);
    let r = oracle_ngrams(reference, n);
    let mut distinct: Vec<&Vec<u32>> = r.iter().collect();
    distinct.sort();
    distinct.dedup();
    let overlap: usize = distinct
        .iter()
        .map(|g| {
            let in_c = c.iter().filter(|x| x == g).count();
            let in_r = r.iter().filter(|x| x == g).count();
            in_c.min(in_r)
        })
        .sum();
    prf(overlap, r.len(), c.len())
}

/// Full-table LCS.
fn oracle_lcs(a: &[u32], b: &[u32]) -> usize {
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            table[i][j] =
                if a[i - 1] == b[j - 1] { table[i - 1][j - 1] + 1 } else { table[i - 1][j].max(table[i][j - 1]) };
        }
    }
    table[a.len()][b.len()]
}

fn prf(overlap: usize, ref_total: usize, cand_total: usize) -> (f64, f64, f64) {
    let r = if ref_total == 0 { 0.0 } else { overlap as f64 / ref_total as f64 };
    let p = if cand_total == 0 { 0.0 } else { overlap as f64 / cand_total as f64 };
    let f = if r + p == 0.0 { 0.0 } else { 2.0 * r * p / (r + p) };
    (r, p, f)
}

fn mean3(xs: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    (
        xs.iter().map(|x| x.0).sum::<f64>() / n,
        xs.iter().map(|x| x.1).sum::<f64>() / n,
        xs.iter().map(|x| x.2).sum::<f64>() / n,
    )
}

fn rouge_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let cases = 1500;
    for _ in 0..cases {
        let alphabet = rng.random_range(1..=10u32);
        let list = |rng: &mut ChaCha8Rng| -> Vec<u32> {
            let len = rng.random_range(0..=20);
            (0..len).map(|_| rng.random_range(0..alphabet)).collect()
        };
        let cand = list(&mut rng);
        let refs: Vec<Vec<u32>> = (0..rng.random_range(1..=3)).map(|_| list(&mut rng)).collect();
        for n in [1, 2] {
            let got = rouge_n(&cand, &refs, n).map_err(|e| e.to_string())?;
            let want = mean3(&refs.iter().map(|r| oracle_rouge_n(&cand, r, n)).collect::<Vec<_>>());
            worst =
                worst.max((got.recall - want.0).abs()).max((got.precision - want.1).abs()).max((got.f1 - want.2).abs());
        }
        let got = rouge_l(&cand, &refs).map_err(|e| e.to_string())?;
        let want = mean3(&refs.iter().map(|r| prf(oracle_lcs(&cand, r), r.len(), cand.len())).collect::<Vec<_>>());
        worst = worst.max((got.recall - want.0).abs()).max((got.precision - want.1).abs()).max((got.f1 - want.2).abs());
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{cases} cases, max deviation {worst:e}, {:?}", start.elapsed()))
}

// TextRank ---------------------------------------------------------------

fn nodes(n: u32) -> Vec<AnswerSentence> {
    (1..=n).map(|i| AnswerSentence::new(SentenceId::new(0, i), format!("node {i}")).unwrap()).collect()
}

/// Hand-picked symmetric weights with no two nodes structurally alike.
fn asymmetric_five() -> SentenceGraph {
    let w = [
        [0.0, 2.0, 0.5, 0.0, 1.0],
        [2.0, 0.0, 1.5, 0.2, 0.0],
        [0.5, 1.5, 0.0, 3.0, 0.0],
        [0.0, 0.2, 3.0, 0.0, 0.7],
        [1.0, 0.0, 0.0, 0.7, 0.0],
    ];
    SentenceGraph::from_weights(nodes(5), w.concat()).unwrap()
}

/// Plain matrix power iteration of the same recursion for a fixed number of
/// steps, with the transition matrix built explicitly.
fn power_iteration(weights: &[Vec<f64>], damping: f64, steps: usize) -> Vec<f64> {
    let n = weights.len();
    let degree: Vec<f64> = weights.iter().map(|row| row.iter().sum()).collect();
    let transition: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if degree[j] > 0.0 { weights[i][j] / degree[j] } else { 0.0 }).collect())
        .collect();
    let mut r = vec![1.0; n];
    for _ in 0..steps {
        r = transition
            .iter()
            .map(|row| (1.0 - damping) + damping * row.iter().zip(&r).map(|(m, x)| m * x).sum::<f64>())
            .collect();
    }
    r
}

fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    idx
}

fn textrank_fixed_points() -> Outcome {
    let start = Instant::now();
    let config = TextRankConfig::default();
    let exec = Execution::Sequential;

    let triangle = SentenceGraph::from_weights(nodes(3), vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
    let (scores, _, converged, _) = textrank_scores(&triangle, &config, exec).map_err(|e| e.to_string())?;
    ensure(converged && scores.iter().all(|s| (s - 1.0).abs() <= 1e-4), || format!("triangle scores {scores:?}"))?;

    let mut with_isolated = vec![0.0; 16];
    for (i, j, w) in [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 0.5)] {
        with_isolated[i * 4 + j] = w;
        with_isolated[j * 4 + i] = w;
    }
    let graph = SentenceGraph::from_weights(nodes(4), with_isolated).unwrap();
    let (scores, _, _, _) = textrank_scores(&graph, &config, exec).map_err(|e| e.to_string())?;
    ensure((scores[3] - 0.15).abs() <= 1e-9, || format!("isolated node scored {}", scores[3]))?;

    let graph = asymmetric_five();
    let (scores, iterations, converged, _) = textrank_scores(&graph, &config, exec).map_err(|e| e.to_string())?;
    let dense: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| graph.weight(i, j)).collect()).collect();
    let oracle = power_iteration(&dense, config.damping, 10_000);
    ensure(ranking(&scores) == ranking(&oracle), || {
        format!("ranking {:?} vs oracle {:?}", ranking(&scores), ranking(&oracle))
    })?;
    ensure(converged && iterations <= 200, || format!("converged={converged} after {iterations} iterations"))?;
    let gap = scores.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("5-node ranking {:?}, {iterations} iterations, max gap to oracle {gap:.2e}", ranking(&scores)))
}

fn textrank_scaling_invariance() -> Outcome {
    let config = TextRankConfig::default();
    let mut worst: f64 = 0.0;
    let mut graphs = vec![asymmetric_five()];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.random_range(2..12usize);
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.6) {
                    let v = rng.random_range(0.01..5.0);
                    w[i * n + j] = v;
                    w[j * n + i] = v;
                }
            }
        }
        graphs.push(SentenceGraph::from_weights(nodes(n as u32), w).unwrap());
    }
    for graph in &graphs {
        let (base, _, c1, _) = textrank_scores(graph, &config, Execution::Sequential).map_err(|e| e.to_string())?;
        let (scaled, _, c2, _) =
            textrank_scores(&graph.scaled(7.3), &config, Execution::Sequential).map_err(|e| e.to_string())?;
        ensure(c1 && c2, || "a run did not converge".to_string())?;
        worst = base.iter().zip(&scaled).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    ensure(worst < 1e-9, || format!("max score change {worst:e}"))?;
    Ok(format!("{} graphs, max score change {worst:e}", graphs.len()))
}

// Redundancy -------------------------------------------------------------

fn redundancy_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let config = RedundancyConfig::default();
    let mut redundant_seen = 0;
    for case in 0..500 {
        let dim = rng.random_range(2..9usize);
        let len = rng.random_range(1..30u32);
        // perturbations of a few centres, so near-duplicates are common
        let centres: Vec<Vec<f64>> =
            (0..rng.random_range(1..5)).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let ranked: Vec<(AnswerSentence, SentenceEmbedding)> = (1..=len)
            .map(|i| {
                let c = &centres[rng.random_range(0..centres.len())];
                let noise = rng.random_range(0.0..0.6);
                let v: Vec<f64> = c.iter().map(|x| x + noise * rng.random_range(-1.0..1.0)).collect();
                let id = SentenceId::new(rng.random_range(0..20), i);
                (AnswerSentence::new(id, format!("s{i}")).unwrap(), SentenceEmbedding::new(v).unwrap())
            })
            .collect();
        let selection = greedy_select(&ranked, &config).map_err(|e| e.to_string())?;
        let out = &selection.summary;
        redundant_seen += ranked.len() - out.len();
        ensure(out.len() <= 5, || format!("case {case}: {} sentences", out.len()))?;
        ensure(out[0] == ranked[0].0, || format!("case {case}: top sentence dropped"))?;
        let positions: Vec<usize> =
            out.iter().map(|s| ranked.iter().position(|(r, _)| r == s).expect("extractive")).collect();
        ensure(positions.windows(2).all(|w| w[0] < w[1]), || format!("case {case}: order {positions:?}"))?;
        for (a, &i) in positions.iter().enumerate() {
            for &j in &positions[a + 1..] {
                let sim = cosine_similarity(&ranked[i].1, &ranked[j].1).map_err(|e| e.to_string())?;
                ensure(sim <= 0.8, || format!("case {case}: pair ({i}, {j}) similarity {sim}"))?;
            }
        }
    }
    Ok(format!("500 instances, {redundant_seen} candidates dropped"))
}

// Pipeline ---------------------------------------------------------------

fn end_to_end_determinism() -> Outcome {
    let start = Instant::now();
    let unit = load_units(fixture("unit_hashmap.json")).map_err(|e| e.to_string())?.remove(0);
    ensure(unit.answers().len() == 12, || format!("fixture unit has {} answers", unit.answers().len()))?;
    let render = || -> Result<String, String> {
        let config = sequential(PipelineConfig::new(Arc::new(LexicalScorer)));
        let result = summarize(unit.query(), &unit, &config).map_err(|e| e.to_string())?;
        Ok(serde_json::to_string_pretty(&result).map_err(|e| e.to_string())? + "\n")
    };
    let first = render()?;
    let second = render()?;
    ensure(first == second, || "two runs differ".into())?;
    let parallel = {
        let config = PipelineConfig::new(Arc::new(LexicalScorer));
        serde_json::to_string_pretty(&summarize(unit.query(), &unit, &config).map_err(|e| e.to_string())?).unwrap()
            + "\n"
    };
    ensure(first == parallel, || "parallel run differs".into())?;
    let golden = std::fs::read_to_string(fixture("golden/summary_hashmap.json")).map_err(|e| e.to_string())?;
    ensure(first == golden, || "output differs from golden file".into())?;
    within(start.elapsed(), Duration::from_secs(2))?;
    Ok(format!("{} bytes identical to golden, {:?}", golden.len(), start.elapsed()))
}

fn is_subsequence(short: &[SentenceId], long: &[SentenceId]) -> bool {
    let mut it = long.iter();
    short.iter().all(|s| it.any(|l| l == s))
}

fn ablation_structure() -> Outcome {
    let entries = load_benchmark(fixture("benchmark_mini.json")).map_err(|e| e.to_string())?;
    let base = sequential(PipelineConfig::new(Arc::new(LexicalScorer)));
    let mode = |mode| PipelineConfig { mode, ..base.clone() };
    for (i, entry) in entries.iter().enumerate() {
        let run = |config: &PipelineConfig| {
            summarize_sentences(entry.query(), entry.candidates(), config).map_err(|e| format!("entry {i}: {e}"))
        };
        let stage1 = run(&mode(AblationMode::UsefulnessOnly))?;
        let stage12 = run(&mode(AblationMode::UsefulnessCentrality))?;
        let full = run(&mode(AblationMode::Full))?;

        let ranking = stage12.final_stage_ranking();
        ensure(is_subsequence(&full.ids(), &ranking), || {
            format!("entry {i}: full not a subsequence of stage-2 ranking")
        })?;
        ensure(stage12.ids() == ranking[..ranking.len().min(5)], || {
            format!("entry {i}: stage12 is not the top of its ranking")
        })?;

        let texts: Vec<&str> = entry.candidates().iter().map(AnswerSentence::text).collect();
        let scores = lexical_usefulness(entry.query().text(), &texts).map_err(|e| e.to_string())?;
        let mut by_usefulness: Vec<(f64, SentenceId)> =
            scores.iter().zip(entry.candidates()).map(|(s, c)| (s.value(), c.id())).collect();
        by_usefulness.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let expected: Vec<SentenceId> = by_usefulness.iter().take(5).map(|x| x.1).collect();
        ensure(stage1.ids() == expected, || format!("entry {i}: stage1 {:?} vs {:?}", stage1.ids(), expected))?;
        for r in [&stage1, &stage12, &full] {
            ensure(r.replay() == r.ids(), || format!("entry {i}: trace replay disagrees in {}", r.config.mode))?;
        }
    }
    Ok(format!("{} entries checked in three modes", entries.len()))
}

// Dump ingestion ---------------------------------------------------------

fn load_store(path: &Path) -> Result<PostStore, String> {
    let file = std::fs::File::open(path).map_err(|e| e.to_string())?;
    parse_posts(file).collect::<Result<PostStore, _>>().map_err(|e| e.to_string())
}

fn rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

/// A synthetic `Posts.xml` of at least `target` bytes, generated on the fly.
struct SyntheticPosts {
    target: usize,
    produced: usize,
    next_id: u64,
    chunk: Vec<u8>,
    pos: usize,
    finished: bool,
}

impl SyntheticPosts {
    fn new(target: usize) -> Self {
        let header = b"<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>\n".to_vec();
        Self { target, produced: 0, next_id: 1, chunk: header, pos: 0, finished: false }
    }

    fn refill(&mut self) {
        self.pos = 0;
        self.chunk.clear();
        if self.produced >= self.target {
            if !self.finished {
                self.chunk.extend_from_slice(b"</posts>\n");
                self.finished = true;
            }
            return;
        }
        let id = self.next_id;
        self.next_id += 1;
        let row = if id % 4 == 1 {
            format!(
                "  <row Id=\"{id}\" PostTypeId=\"1\" Score=\"{}\" Title=\"How do I use feature {id} in Java?\" Tags=\"&lt;java&gt;&lt;t{}&gt;\" Body=\"&lt;p&gt;I tried &lt;code&gt;thing{id}()&lt;/code&gt; but it fails. {}&lt;/p&gt;\" />\n",
                id % 17,
                id % 101,
                "Some more words about the problem. ".repeat(8)
            )
        } else {
            format!(
                "  <row Id=\"{id}\" PostTypeId=\"2\" ParentId=\"{}\" Score=\"{}\" Body=\"&lt;p&gt;Call &lt;code&gt;fix{id}()&lt;/code&gt; first. {}&lt;/p&gt;&lt;pre&gt;&lt;code&gt;x = {id};&lt;/code&gt;&lt;/pre&gt;\" />\n",
                id - id % 4 + 1,
                id % 9,
                "It works because the state is reset. ".repeat(8)
            )
        };
        self.chunk.extend_from_slice(row.as_bytes());
    }
}

impl Read for SyntheticPosts {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        if self.pos >= self.chunk.len() {
            self.refill();
        }
        let n = buf.len().min(self.chunk.len() - self.pos);
        buf[..n].copy_from_slice(&self.chunk[self.pos..self.pos + n]);
        self.pos += n;
        self.produced += n;
        Ok(n)
    }
}

fn dump_ingestion() -> Outcome {
    let start = Instant::now();
    let store = load_store(&fixture("dump/Posts.xml"))?;
    let links_file = std::fs::File::open(fixture("dump/PostLinks.xml")).map_err(|e| e.to_string())?;
    let links = parse_postlinks(links_file).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let languages: BTreeSet<String> = ["java", "python"].map(String::from).into();

    let (units, stats) = extract_annotation_units(links.clone(), &store, &languages, Execution::Sequential);
    ensure(units.len() == 1 && units[0].answers().len() == 12, || {
        format!("units: {:?}", units.iter().map(|u| u.answers().len()).collect::<Vec<_>>())
    })?;
    ensure(units[0].answers().iter().all(|a| a.vote_score > 0), || "unvoted answer kept".into())?;
    ensure(stats.units_too_few == 2, || format!("expected the 9-answer and empty originals to be dropped: {stats:?}"))?;
    let mut shuffled = links.clone();
    shuffled.reverse();
    let (again, _) = extract_annotation_units(shuffled, &store, &languages, Execution::Parallel);
    ensure(again == units, || "link order changed the units".into())?;

    let render = || {
        let (triplets, _) = build_contrastive_triplets(links.clone(), &store, &languages, 42, NegativePool::Languages);
        let mut buf = Vec::new();
        write_triplets_jsonl(&mut buf, &triplets).unwrap();
        (triplets, buf)
    };
    let (triplets, first) = render();
    let (_, second) = render();
    ensure(first == second, || "seed 42 runs differ".into())?;
    ensure(triplets.len() == 3, || format!("{} triplets", triplets.len()))?;
    let tags_by_title: HashMap<&str, &BTreeSet<String>> =
        store.questions().map(|q| (q.title.as_deref().unwrap(), &q.tags)).collect();
    for t in &triplets {
        let (a, n) = (tags_by_title[t.anchor.as_str()], tags_by_title[t.negative.as_str()]);
        ensure(a.is_disjoint(n), || format!("negative {:?} shares a tag with {:?}", t.negative, t.anchor))?;
    }

    let target = 100 * 1024 * 1024;
    let mut parser = parse_posts(SyntheticPosts::new(target));
    let mut samples = Vec::new();
    let mut count = 0u64;
    for post in parser.by_ref() {
        post.map_err(|e| e.to_string())?;
        count += 1;
        if count.is_multiple_of(20_000) {
            samples.extend(rss_kib());
        }
    }
    ensure(parser.stats().yielded == count, || "stats disagree with yielded count".into())?;
    ensure(samples.len() >= 4, || format!("only {} RSS samples", samples.len()))?;
    let settled = samples[samples.len() / 4];
    let peak = *samples.iter().max().unwrap();
    let growth = peak.saturating_sub(settled);
    ensure(growth < 8 * 1024, || format!("RSS grew {growth} KiB after the first quarter ({samples:?})"))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "1 unit of 12 answers, 3 tag-disjoint triplets, {count} synthetic posts with RSS {settled}..{peak} KiB, {:?}",
        start.elapsed()
    ))
}

// Benchmark loader -------------------------------------------------------

fn benchmark_loader() -> Outcome {
    let path = fixture("benchmark_mini.json");
    let entries = load_benchmark(&path).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let copy = dir.path().join("copy.json");
    save_benchmark(&copy, &entries).map_err(|e| e.to_string())?;
    let back = load_benchmark(&copy).map_err(|e| e.to_string())?;
    ensure(back == entries, || "round trip changed the entries".into())?;

    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["entries"][1]["references"][2].as_array_mut().unwrap().pop();
    match parse_benchmark(&doc.to_string()) {
        Err(CorpusError::InvalidEntry { index: 1, message }) => {
            Ok(format!("{} entries round-trip; short reference rejected: {message}", entries.len()))
        }
        other => Err(format!("4-sentence reference gave {other:?}")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("rouge-oracle-equivalence", rouge_oracle_equivalence),
        ("textrank-fixed-points", textrank_fixed_points),
        ("textrank-weight-scaling", textrank_scaling_invariance),
        ("redundancy-guarantee", redundancy_guarantee),
        ("end-to-end-determinism", end_to_end_determinism),
        ("ablation-structure", ablation_structure),
        ("dump-ingestion", dump_ingestion),
        ("benchmark-loader", benchmark_loader),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg =
                panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
