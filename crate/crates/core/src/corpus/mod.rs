//! Annotated narratives: tokens, sentences, entity mentions, gold relations
//! and dependency edges, plus the relation schema and corpus file I/O.

mod io;
mod schema;
pub mod synth;

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

pub use io::{load_corpus, read_corpus, save_corpus, write_corpus};
pub use schema::{compatible_relation_types, is_compatible, EntityType, RelationType};
pub use synth::{generate_synthetic, SynthConfig};

/// A token span. Offsets count Unicode code points, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Token {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub pos: String,
    pub root: String,
}

/// Inclusive token range of one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sentence {
    pub first_token: usize,
    pub last_token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityMention {
    pub id: String,
    #[serde(rename = "type")]
    pub etype: EntityType,
    pub first_token: usize,
    pub last_token: usize,
}

impl EntityMention {
    /// Representative token of the mention: its last token.
    pub fn head(&self) -> usize {
        self.last_token
    }

    pub fn tokens(&self) -> std::ops::RangeInclusive<usize> {
        self.first_token..=self.last_token
    }
}

/// Directed, typed link between two mentions, by mention id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationInstance {
    #[serde(rename = "type")]
    pub rtype: RelationType,
    pub arg1: String,
    pub arg2: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependencyEdge {
    pub head: usize,
    pub dependent: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub sentences: Vec<Sentence>,
    pub entities: Vec<EntityMention>,
    pub relations: Vec<RelationInstance>,
    pub deps: Vec<DependencyEdge>,
}

impl Document {
    pub fn entity(&self, id: &str) -> Option<&EntityMention> {
        self.entities.iter().find(|e| e.id == id)
    }

    pub fn entity_index(&self) -> HashMap<&str, usize> {
        self.entities
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), i))
            .collect()
    }

    /// Index of the sentence containing `token`.
    pub fn sentence_of(&self, token: usize) -> Option<usize> {
        let idx = self
            .sentences
            .partition_point(|s| s.last_token < token);
        (idx < self.sentences.len() && self.sentences[idx].first_token <= token).then_some(idx)
    }

    /// Checks every structural invariant, naming the first one that fails.
    pub fn validate(&self) -> Result<(), String> {
        let n_chars = self.text.chars().count();
        let chars: Vec<char> = self.text.chars().collect();
        let mut prev_end = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.start >= t.end {
                return Err(format!("token {i}: start must be < end"));
            }
            if t.start < prev_end {
                return Err(format!("token {i}: tokens must be sorted and non-overlapping"));
            }
            if t.end > n_chars {
                return Err(format!("token {i}: span ends past the text"));
            }
            let covered: String = chars[t.start..t.end].iter().collect();
            if covered != t.surface {
                return Err(format!(
                    "token {i}: surface `{}` does not match text `{covered}`",
                    t.surface
                ));
            }
            prev_end = t.end;
        }

        let mut next = 0;
        for (i, s) in self.sentences.iter().enumerate() {
            if s.first_token > s.last_token {
                return Err(format!("sentence {i}: first_token must be <= last_token"));
            }
            if s.first_token != next {
                return Err(format!("sentence {i}: sentences must partition the tokens"));
            }
            next = s.last_token + 1;
        }
        if next != self.tokens.len() {
            return Err("sentences must partition the tokens".to_string());
        }

        let mut ids = HashSet::new();
        for e in &self.entities {
            if !ids.insert(e.id.as_str()) {
                return Err(format!("entity id `{}` is not unique", e.id));
            }
            if e.first_token > e.last_token || e.last_token >= self.tokens.len() {
                return Err(format!("entity `{}`: token span out of range", e.id));
            }
        }

        for r in &self.relations {
            if r.rtype == RelationType::Null {
                return Err("relation of type null".to_string());
            }
            if r.arg1 == r.arg2 {
                return Err(format!("relation {}: arg1 equals arg2", r.rtype));
            }
            let a1 = self
                .entity(&r.arg1)
                .ok_or_else(|| format!("relation {}: unknown mention `{}`", r.rtype, r.arg1))?;
            let a2 = self
                .entity(&r.arg2)
                .ok_or_else(|| format!("relation {}: unknown mention `{}`", r.rtype, r.arg2))?;
            if !r.rtype.admits(a1.etype, a2.etype) {
                return Err(format!(
                    "relation {} does not admit arguments ({}, {})",
                    r.rtype, a1.etype, a2.etype
                ));
            }
        }

        let mut has_head = vec![false; self.tokens.len()];
        for (i, d) in self.deps.iter().enumerate() {
            if d.head >= self.tokens.len() || d.dependent >= self.tokens.len() {
                return Err(format!("dependency {i}: token index out of range"));
            }
            if d.head == d.dependent {
                return Err(format!("dependency {i}: head equals dependent"));
            }
            if std::mem::replace(&mut has_head[d.dependent], true) {
                return Err(format!("dependency {i}: token {} has two heads", d.dependent));
            }
        }
        Ok(())
    }

    /// Fills empty POS and root fields from the rule-based tagger. Existing
    /// annotations are left untouched.
    pub fn fill_missing_annotations(&mut self) {
        let surfaces: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        let tags = crate::preprocess::pos_tag(&surfaces);
        for (tok, tag) in self.tokens.iter_mut().zip(tags) {
            if tok.pos.is_empty() {
                tok.pos = tag;
            }
            if tok.root.is_empty() {
                tok.root = crate::preprocess::lemmatize(&tok.surface, &tok.pos);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Corpus { documents }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn relation_count(&self) -> usize {
        self.documents.iter().map(|d| d.relations.len()).sum()
    }

    /// First `n` documents, in corpus order.
    pub fn prefix(&self, n: usize) -> Corpus {
        Corpus::new(self.documents.iter().take(n).cloned().collect())
    }
}
