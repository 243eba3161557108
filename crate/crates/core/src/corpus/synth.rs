//! Seeded generator of annotated clinical narratives.
//!
//! Each sentence comes from a template whose slots are filled from per-type
//! lexicons. Templates carry their gold relations, and every relation type
//! is tied to a small set of trigger words ("shows", "to treat", "of the",
//! ...), so relations are learnable from lexical context. Several templates
//! hold type-compatible mention pairs that are *not* related and are
//! separated by other mentions, which gives the intervening-mention
//! features something to pick up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Corpus, DependencyEdge, Document, EntityMention, EntityType, RelationInstance, RelationType, Sentence, Token};
use crate::preprocess::{generalize_pos, lemmatize, pos_tag, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_docs: usize,
    pub min_sentences: usize,
    pub max_sentences: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_docs: 40,
            min_sentences: 5,
            max_sentences: 9,
            seed: 42,
        }
    }
}

/// One piece of a template: literal text or an entity slot.
#[derive(Debug, Clone, Copy)]
pub enum Piece {
    Word(&'static str),
    Slot(EntityType),
}

#[derive(Debug, Clone, Copy)]
pub struct Template {
    pub pieces: &'static [Piece],
    /// Gold relations as (type, arg1 slot, arg2 slot); slots are numbered
    /// in order of appearance.
    pub relations: &'static [(RelationType, usize, usize)],
}

use EntityType::*;
use Piece::{Slot as S, Word as W};
use RelationType as R;

pub const TEMPLATES: &[Template] = &[
    Template {
        pieces: &[W("A"), S(Locus), S(Investigation), W("was"), S(Result), W(".")],
        relations: &[(R::HasTarget, 1, 0), (R::HasFinding, 1, 2)],
    },
    Template {
        pieces: &[W("This"), W("patient"), W("has"), W("had"), W("a"), S(Locus), S(Investigation), W(".")],
        relations: &[(R::HasTarget, 1, 0)],
    },
    Template {
        pieces: &[W("The"), S(Investigation), W("shows"), S(Condition), W("in"), W("the"), S(Locus), W(".")],
        relations: &[(R::HasFinding, 0, 1), (R::HasLocation, 1, 2)],
    },
    Template {
        pieces: &[W("She"), W("was"), W("given"), S(DrugOrDevice), W("to"), W("treat"), W("the"), S(Condition), W(".")],
        relations: &[(R::HasIndication, 0, 1)],
    },
    Template {
        pieces: &[W("There"), W("was"), S(NegationSignal), W("sign"), W("of"), W("the"), S(Condition), W(".")],
        relations: &[(R::NegationModifies, 0, 1)],
    },
    Template {
        pieces: &[W("Examination"), W("of"), W("her"), S(LateralitySignal), S(Locus), W("was"), S(Result), W(".")],
        relations: &[(R::LateralityModifies, 0, 1)],
    },
    Template {
        pieces: &[W("A"), S(LateralitySignal), S(Intervention), W("was"), W("performed"), W(".")],
        relations: &[(R::LateralityModifies, 0, 1)],
    },
    Template {
        pieces: &[W("This"), W("patient"), W("suffers"), W("from"), S(SubLocationSignal), S(Locus), S(Condition), W(".")],
        relations: &[(R::SubLocationModifies, 0, 1), (R::HasLocation, 2, 1)],
    },
    Template {
        pieces: &[W("The"), S(Condition), W("on"), W("her"), S(Locus), W("was"), W("treated"), W("with"), S(Intervention), W(".")],
        relations: &[(R::HasLocation, 0, 1), (R::HasIndication, 2, 0)],
    },
    Template {
        pieces: &[W("The"), S(Investigation), W("was"), W("requested"), W("for"), W("suspected"), S(Condition), W(".")],
        relations: &[(R::HasIndication, 0, 1)],
    },
    Template {
        pieces: &[S(Condition), W("of"), W("the"), S(Locus), W("and"), S(Condition), W("of"), W("the"), S(Locus), W("were"), W("noted"), W(".")],
        relations: &[(R::HasLocation, 0, 1), (R::HasLocation, 2, 3)],
    },
    Template {
        pieces: &[S(Intervention), W("of"), W("the"), S(Locus), W("was"), W("planned"), W("after"), W("the"), S(Investigation), W("showed"), S(Condition), W(".")],
        relations: &[(R::HasTarget, 0, 1), (R::HasFinding, 2, 3)],
    },
    Template {
        pieces: &[W("The"), S(Investigation), W("was"), S(Result), W("and"), W("there"), W("was"), S(NegationSignal), W("evidence"), W("of"), S(Condition), W(".")],
        relations: &[(R::HasFinding, 0, 1), (R::NegationModifies, 2, 3)],
    },
    Template {
        pieces: &[S(DrugOrDevice), W("was"), W("started"), W("and"), W("the"), S(SubLocationSignal), S(Locus), W("was"), S(Result), W(".")],
        relations: &[(R::SubLocationModifies, 1, 2)],
    },
    Template {
        pieces: &[W("There"), W("was"), S(NegationSignal), W("evidence"), W("of"), S(SubLocationSignal), S(Locus), S(Condition), W(".")],
        relations: &[(R::NegationModifies, 0, 3), (R::SubLocationModifies, 1, 2), (R::HasLocation, 3, 2)],
    },
    Template {
        pieces: &[W("The"), S(Investigation), W("of"), W("the"), S(Locus), W("showed"), S(Condition), W(".")],
        relations: &[(R::HasTarget, 0, 1), (R::HasFinding, 0, 2)],
    },
];

pub fn lexicon(etype: EntityType) -> &'static [&'static str] {
    match etype {
        Investigation => &["X-ray", "CT scan", "ultrasound", "MRI", "biopsy", "mammogram", "bone scan", "endoscopy", "angiogram"],
        Intervention => &["mastectomy", "resection", "radiotherapy", "excision", "lumpectomy", "surgery", "nephrectomy", "stent insertion"],
        Condition => &["cancer", "tumour", "cyst", "hydronephrosis", "obstruction", "metastases", "lesion", "effusion", "carcinoma", "abdominal pain"],
        Locus => &["chest", "bowel", "lung", "thyroid", "breast", "abdomen", "liver", "prostate", "brain", "kidney", "pelvis", "spine"],
        DrugOrDevice => &["tamoxifen", "morphine", "cisplatin", "chemotherapy", "paracetamol", "antibiotics", "stent"],
        Result => &["normal", "abnormal", "clear", "unremarkable", "positive", "negative", "inconclusive"],
        NegationSignal => &["no", "no obvious", "no-evidence", "no definite"],
        LateralitySignal => &["left", "right", "bilateral"],
        SubLocationSignal => &["upper", "lower", "inner", "outer", "distal", "proximal"],
    }
}

/// Builds one document from already-chosen templates and slot fillers.
pub fn build_document(id: &str, sentences: &[(&Template, Vec<&str>)]) -> Document {
    let mut text = String::new();
    let mut text_len = 0usize;
    let mut tokens: Vec<Token> = Vec::new();
    let mut sents = Vec::new();
    let mut entities = Vec::new();
    let mut relations = Vec::new();

    for (template, fillers) in sentences {
        let first_token = tokens.len();
        let mut slot_ids = Vec::new();
        let mut fillers = fillers.iter();
        for piece in template.pieces {
            let (word, etype) = match *piece {
                Piece::Word(w) => (w, None),
                Piece::Slot(t) => (*fillers.next().expect("filler per slot"), Some(t)),
            };
            let attach = word.chars().all(|c| !c.is_alphanumeric());
            if text_len > 0 && !attach {
                text.push(' ');
                text_len += 1;
            }
            let mention_first = tokens.len();
            for span in tokenize(word) {
                tokens.push(Token {
                    start: text_len + span.start,
                    end: text_len + span.end,
                    surface: span.surface,
                    pos: String::new(),
                    root: String::new(),
                });
            }
            text.push_str(word);
            text_len += word.chars().count();
            if let Some(etype) = etype {
                let mention_id = format!("T{}", entities.len() + 1);
                entities.push(EntityMention {
                    id: mention_id.clone(),
                    etype,
                    first_token: mention_first,
                    last_token: tokens.len() - 1,
                });
                slot_ids.push(mention_id);
            }
        }
        for &(rtype, a, b) in template.relations {
            relations.push(RelationInstance {
                rtype,
                arg1: slot_ids[a].clone(),
                arg2: slot_ids[b].clone(),
            });
        }
        sents.push(Sentence { first_token, last_token: tokens.len() - 1 });
    }

    let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
    let tags = pos_tag(&surfaces);
    for (tok, tag) in tokens.iter_mut().zip(tags) {
        tok.root = lemmatize(&tok.surface, &tag);
        tok.pos = tag;
    }

    // Each token depends on its right neighbour; the last token of a
    // sentence is the root.
    let deps = sents
        .iter()
        .flat_map(|s| s.first_token..s.last_token)
        .map(|i| DependencyEdge {
            head: i + 1,
            dependent: i,
            label: generalize_pos(&tokens[i].pos).to_lowercase(),
        })
        .collect();

    Document {
        id: id.to_string(),
        text,
        tokens,
        sentences: sents,
        entities,
        relations,
        deps,
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len() as u32) as usize]
}

/// Deterministic for a fixed configuration, on every platform.
pub fn generate_synthetic(cfg: &SynthConfig) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lo = cfg.min_sentences.min(cfg.max_sentences) as u32;
    let hi = cfg.max_sentences.max(cfg.min_sentences) as u32;
    let documents = (0..cfg.n_docs)
        .map(|d| {
            let n_sent = rng.gen_range(lo..=hi);
            let sentences: Vec<(&Template, Vec<&str>)> = (0..n_sent)
                .map(|_| {
                    let template = pick(&mut rng, TEMPLATES);
                    let fillers = template
                        .pieces
                        .iter()
                        .filter_map(|p| match p {
                            Piece::Slot(t) => Some(*pick(&mut rng, lexicon(*t))),
                            Piece::Word(_) => None,
                        })
                        .collect();
                    (template, fillers)
                })
                .collect();
            build_document(&format!("doc{:03}", d + 1), &sentences)
        })
        .collect();
    Corpus::new(documents)
}
