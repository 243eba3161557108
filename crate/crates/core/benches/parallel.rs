use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use clinrel::corpus::{generate_synthetic, SynthConfig};
use clinrel::exec::Execution;
use clinrel::features::build_index;
use clinrel::harness::{run_cv, CvConfig};
use clinrel::learners::{ova_train, Algorithm, Hyperparameters};
use clinrel::pipeline::corpus_instances;
use clinrel::sparse::SparseVec;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn training_data(n_docs: usize) -> (Vec<SparseVec>, Vec<clinrel::corpus::RelationType>) {
    let corpus = generate_synthetic(&SynthConfig { n_docs, ..SynthConfig::default() });
    let cfg = CvConfig::default();
    let docs = corpus_instances(&corpus, &cfg.pipeline.features, cfg.pipeline.max_crossings, Execution::Sequential);
    let index = build_index(docs.iter().flat_map(|d| d.features.iter()));
    let xs = docs.iter().flat_map(|d| d.features.iter().map(|f| index.vectorize(f))).collect();
    let ys = docs.iter().flat_map(|d| d.labels.iter().copied()).collect();
    (xs, ys)
}

fn ova_svm(c: &mut Criterion) {
    let (xs, ys) = training_data(20);
    let hp = Hyperparameters::default();
    let mut group = c.benchmark_group("ova_svm_train");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| ova_train(&xs, &ys, Algorithm::Svm, &hp, exec).unwrap())
        });
    }
    group.finish();
}

fn cross_validation(c: &mut Criterion) {
    let corpus = generate_synthetic(&SynthConfig { n_docs: 20, ..SynthConfig::default() });
    let mut cfg = CvConfig { folds: 5, ..CvConfig::default() };
    cfg.pipeline.algorithm = Algorithm::Paum;
    let mut group = c.benchmark_group("cv_paum");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_cv(&corpus, &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn knn_batch(c: &mut Criterion) {
    let (xs, ys) = training_data(40);
    let hp = Hyperparameters::default();
    let model = ova_train(&xs, &ys, Algorithm::Knn, &hp, Execution::Sequential).unwrap();
    let mut group = c.benchmark_group("knn_classify_batch");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| model.classify_batch(&xs, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, ova_svm, cross_validation, knn_batch);
criterion_main!(benches);
