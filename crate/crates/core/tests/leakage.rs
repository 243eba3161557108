use std::collections::BTreeSet;
use std::sync::Mutex;

use clinrel::corpus::synth::{build_document, TEMPLATES};
use clinrel::corpus::Corpus;
use clinrel::exec::Execution;
use clinrel::features::FeatureKey;
use clinrel::harness::{run_cv_taus, CvConfig, FoldView};
use clinrel::learners::Algorithm;
use clinrel::pipeline::document_instances;

/// Every document mentions a condition no other document uses.
fn corpus() -> Corpus {
    let docs = (0..6)
        .map(|d| {
            let unique = format!("lesion{d}");
            build_document(
                &format!("doc{d}"),
                &[
                    (&TEMPLATES[2], vec!["CT scan", unique.as_str(), "liver"]),
                    (&TEMPLATES[3], vec!["tamoxifen", "carcinoma"]),
                    (&TEMPLATES[0], vec!["breast", "mammogram", "normal"]),
                ],
            )
        })
        .collect();
    Corpus::new(docs)
}

#[test]
fn fold_index_holds_only_training_keys() {
    let corpus = corpus();
    let mut cfg = CvConfig { folds: 3, ..CvConfig::default() };
    cfg.pipeline.algorithm = Algorithm::Paum;
    let keys_of = |d: usize| -> BTreeSet<FeatureKey> {
        let inst = document_instances(&corpus.documents[d], &cfg.pipeline.features, cfg.pipeline.max_crossings);
        inst.features.iter().flat_map(|f| f.keys().cloned()).collect()
    };
    let checked = Mutex::new(0usize);
    let observer = |view: &FoldView<'_>| {
        let train: BTreeSet<FeatureKey> = view.train_docs.iter().flat_map(|&d| keys_of(d)).collect();
        let test: BTreeSet<FeatureKey> = view.test_docs.iter().flat_map(|&d| keys_of(d)).collect();
        let index: BTreeSet<FeatureKey> = view.extractor.index().keys().iter().cloned().collect();
        assert_eq!(index, train, "fold {}", view.fold);
        let test_only: Vec<&FeatureKey> = test.difference(&train).collect();
        assert!(!test_only.is_empty(), "fold {} has no test-only keys to leak", view.fold);
        assert!(test_only.iter().all(|k| !index.contains(*k)));
        assert!(view.train_docs.iter().all(|d| !view.test_docs.contains(d)));
        *checked.lock().unwrap() += 1;
    };
    run_cv_taus(&corpus, &cfg, &[1.0], Execution::Sequential, Some(&observer)).unwrap();
    assert_eq!(*checked.lock().unwrap(), 3);
}
