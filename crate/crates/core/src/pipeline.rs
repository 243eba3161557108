//! End-to-end relation extraction: candidate pairs, features, index and a
//! one-against-all model, trained and applied as one unit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, RelationInstance, RelationType};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::features::{build_index, extract, FeatureConfig, FeatureIndex, FeatureVector};
use crate::learners::{ova_train, Algorithm, Hyperparameters, OvaModel};
use crate::pairing::{labeled_instances, EntityPair, DEFAULT_MAX_CROSSINGS};
use crate::sparse::SparseVec;

pub const MODEL_FORMAT: &str = "clinrel-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub algorithm: Algorithm,
    pub hyperparameters: Hyperparameters,
    pub features: FeatureConfig,
    pub max_crossings: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            algorithm: Algorithm::Svm,
            hyperparameters: Hyperparameters::default(),
            features: FeatureConfig::default(),
            max_crossings: DEFAULT_MAX_CROSSINGS,
        }
    }
}

/// Candidate pairs of one document with gold labels and features.
#[derive(Debug, Clone)]
pub struct DocumentInstances {
    pub pairs: Vec<EntityPair>,
    pub labels: Vec<RelationType>,
    pub features: Vec<FeatureVector>,
    pub unreachable_gold: usize,
}

pub fn document_instances(doc: &Document, features: &FeatureConfig, max_crossings: usize) -> DocumentInstances {
    let labeling = labeled_instances(doc, max_crossings);
    let mut pairs = Vec::with_capacity(labeling.instances.len());
    let mut labels = Vec::with_capacity(labeling.instances.len());
    let mut vectors = Vec::with_capacity(labeling.instances.len());
    for inst in labeling.instances {
        vectors.push(extract(&inst.pair, doc, features));
        labels.push(inst.label);
        pairs.push(inst.pair);
    }
    DocumentInstances { pairs, labels, features: vectors, unreachable_gold: labeling.unreachable_gold }
}

pub fn corpus_instances(
    corpus: &Corpus,
    features: &FeatureConfig,
    max_crossings: usize,
    exec: Execution,
) -> Vec<DocumentInstances> {
    exec.map(&corpus.documents, |d| document_instances(d, features, max_crossings))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationExtractor {
    config: PipelineConfig,
    index: FeatureIndex,
    model: OvaModel,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRecord {
    format: String,
    version: u32,
    algorithm: Algorithm,
    hyperparameters: Hyperparameters,
    features: FeatureConfig,
    max_crossings: usize,
    index: FeatureIndex,
    model: OvaModel,
}

impl RelationExtractor {
    pub fn train(corpus: &Corpus, config: &PipelineConfig, exec: Execution) -> Result<Self> {
        let docs = corpus_instances(corpus, &config.features, config.max_crossings, exec);
        Self::train_on(&docs.iter().collect::<Vec<_>>(), config, exec)
    }

    /// Trains on precomputed instances. The index only sees these
    /// documents.
    pub fn train_on(docs: &[&DocumentInstances], config: &PipelineConfig, exec: Execution) -> Result<Self> {
        let index = build_index(docs.iter().flat_map(|d| d.features.iter()));
        let xs: Vec<SparseVec> = docs.iter().flat_map(|d| d.features.iter()).map(|f| index.vectorize(f)).collect();
        let ys: Vec<RelationType> = docs.iter().flat_map(|d| d.labels.iter().copied()).collect();
        let model = ova_train(&xs, &ys, config.algorithm, &config.hyperparameters, exec)?;
        Ok(RelationExtractor { config: config.clone(), index, model })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn index(&self) -> &FeatureIndex {
        &self.index
    }

    pub fn model(&self) -> &OvaModel {
        &self.model
    }

    /// Same trained models with another SVM margin ratio.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        let mut out = self.clone();
        out.model = self.model.with_tau(tau)?;
        out.config.hyperparameters.svm.tau = tau;
        Ok(out)
    }

    /// Predicted relations for precomputed instances, sorted and unique.
    pub fn predict_instances(&self, inst: &DocumentInstances) -> Vec<RelationInstance> {
        let mut out: Vec<RelationInstance> = inst
            .pairs
            .iter()
            .zip(&inst.features)
            .filter_map(|(pair, fv)| {
                let label = self.model.classify(&self.index.vectorize(fv));
                (label != RelationType::Null).then(|| RelationInstance {
                    rtype: label,
                    arg1: pair.arg1.clone(),
                    arg2: pair.arg2.clone(),
                })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn predict(&self, doc: &Document) -> Vec<RelationInstance> {
        self.predict_instances(&document_instances(doc, &self.config.features, self.config.max_crossings))
    }

    /// Copy of `corpus` with every document's relations replaced by
    /// predictions.
    pub fn annotate(&self, corpus: &Corpus, exec: Execution) -> Corpus {
        let predicted = exec.map(&corpus.documents, |d| self.predict(d));
        let documents = corpus
            .documents
            .iter()
            .zip(predicted)
            .map(|(d, relations)| Document { relations, ..d.clone() })
            .collect();
        Corpus::new(documents)
    }

    pub fn to_json(&self) -> Result<String> {
        let record = ModelRecord {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            algorithm: self.config.algorithm,
            hyperparameters: self.config.hyperparameters.clone(),
            features: self.config.features.clone(),
            max_crossings: self.config.max_crossings,
            index: self.index.clone(),
            model: self.model.clone(),
        };
        serde_json::to_string(&record).map_err(|e| Error::Model(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    pub fn read(reader: impl Read) -> Result<Self> {
        let record: ModelRecord = serde_json::from_reader(reader).map_err(|e| Error::Model(e.to_string()))?;
        if record.format != MODEL_FORMAT {
            return Err(Error::Model(format!("unexpected format `{}`", record.format)));
        }
        if record.version != MODEL_VERSION {
            return Err(Error::Model(format!("unsupported version {}", record.version)));
        }
        if record.algorithm != record.model.algorithm() || &record.hyperparameters != record.model.hyperparameters() {
            return Err(Error::Model("model body disagrees with its header".into()));
        }
        let config = PipelineConfig {
            algorithm: record.algorithm,
            hyperparameters: record.hyperparameters,
            features: record.features,
            max_crossings: record.max_crossings,
        };
        Ok(RelationExtractor { config, index: record.index, model: record.model })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(self.to_json()?.as_bytes())?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read(BufReader::new(File::open(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, SynthConfig};

    fn small() -> Corpus {
        generate_synthetic(&SynthConfig { n_docs: 6, ..SynthConfig::default() })
    }

    #[test]
    fn learns_its_training_corpus() {
        let corpus = small();
        let x = RelationExtractor::train(&corpus, &PipelineConfig::default(), Execution::Sequential).unwrap();
        let mut hits = 0;
        let mut gold = 0;
        for d in &corpus.documents {
            let predicted = x.predict(d);
            gold += d.relations.len();
            hits += d.relations.iter().filter(|r| predicted.contains(r)).count();
        }
        assert!(hits as f64 >= 0.9 * gold as f64, "{hits}/{gold}");
    }

    #[test]
    fn json_round_trip_preserves_decisions() {
        let corpus = small();
        for algorithm in Algorithm::ALL {
            let cfg = PipelineConfig { algorithm, ..Default::default() };
            let x = RelationExtractor::train(&corpus, &cfg, Execution::Sequential).unwrap();
            let back = RelationExtractor::from_json(&x.to_json().unwrap()).unwrap();
            assert_eq!(back, x);
            let inst = document_instances(&corpus.documents[0], &cfg.features, cfg.max_crossings);
            for fv in &inst.features {
                let v = x.index().vectorize(fv);
                for (a, b) in x.model().scores(&v).iter().zip(back.model().scores(&v)) {
                    assert!((a - b).abs() <= 1e-12 || (a.is_infinite() && a == &b));
                }
            }
        }
    }

    #[test]
    fn rejects_foreign_records() {
        assert!(matches!(RelationExtractor::from_json("{}"), Err(Error::Model(_))));
        let corpus = small();
        let x = RelationExtractor::train(&corpus, &PipelineConfig::default(), Execution::Sequential).unwrap();
        let tampered = x.to_json().unwrap().replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(RelationExtractor::from_json(&tampered), Err(Error::Model(_))));
    }
}
