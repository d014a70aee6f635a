//! Sequential vs rayon throughput for the data-parallel stages.

use std::path::Path;
use std::sync::Arc;

use answersum::centrality::build_graph;
use answersum::corpus::{load_benchmark, load_units};
use answersum::scoring::LexicalScorer;
use answersum::{evaluate_benchmark, summarize_benchmark, BenchmarkEntry, Execution, PipelineConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn fixture(rel: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

/// The mini benchmark repeated until it has `n` entries.
fn entries(n: usize) -> Vec<BenchmarkEntry> {
    let base = load_benchmark(fixture("benchmark_mini.json")).unwrap();
    base.iter().cycle().take(n).cloned().collect()
}

fn graph(c: &mut Criterion) {
    let unit = load_units(fixture("unit_hashmap.json")).unwrap().remove(0);
    let sentences = unit.sentences();
    let mut group = c.benchmark_group("build_graph");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, sentences.len()), &exec, |b, &exec| {
            b.iter(|| build_graph(sentences, exec).unwrap())
        });
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let entries = entries(60);
    let mut group = c.benchmark_group("summarize_benchmark");
    group.sample_size(20);
    for (name, exec) in MODES {
        let config = PipelineConfig { execution: exec, ..PipelineConfig::new(Arc::new(LexicalScorer)) };
        group.bench_with_input(BenchmarkId::new(name, entries.len()), &config, |b, config| {
            b.iter(|| summarize_benchmark(&entries, config))
        });
    }
    group.finish();
}

fn rouge(c: &mut Criterion) {
    let entries = entries(60);
    let config = PipelineConfig::new(Arc::new(LexicalScorer));
    let results: Vec<_> = summarize_benchmark(&entries, &config).into_iter().map(Result::unwrap).collect();
    let mut group = c.benchmark_group("evaluate");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, entries.len()), &exec, |b, &exec| {
            b.iter(|| evaluate_benchmark(&results, &entries, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, graph, pipeline, rouge);
criterion_main!(benches);
