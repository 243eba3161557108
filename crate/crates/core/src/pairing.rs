//! Candidate entity pairs under the sentence-window and argument-type
//! constraints, and their labels against gold relations.

use std::collections::{HashMap, HashSet};

use crate::corpus::{is_compatible, Document, RelationInstance, RelationType};

/// Default number of sentence boundaries a pair may cross.
pub const DEFAULT_MAX_CROSSINGS: usize = 1;

/// An ordered candidate: `arg1` plays the schema's first-argument role.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntityPair {
    pub doc: String,
    pub arg1: String,
    pub arg2: String,
    /// Positions of the arguments in `Document::entities`.
    pub arg1_index: usize,
    pub arg2_index: usize,
    pub sentence_crossings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub pair: EntityPair,
    pub label: RelationType,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labeling {
    pub instances: Vec<LabeledInstance>,
    /// Gold relations whose argument pair was never generated.
    pub unreachable_gold: usize,
}

/// All type-compatible ordered mention pairs within `max_crossings`
/// sentence boundaries, sorted by arg1 then arg2 token position.
pub fn generate_pairs(doc: &Document, max_crossings: usize) -> Vec<EntityPair> {
    let sentence_span: Vec<(usize, usize)> = doc
        .entities
        .iter()
        .map(|e| {
            (
                doc.sentence_of(e.first_token).unwrap_or(0),
                doc.sentence_of(e.last_token).unwrap_or(0),
            )
        })
        .collect();

    let mut order: Vec<usize> = (0..doc.entities.len()).collect();
    order.sort_by_key(|&i| (doc.entities[i].first_token, doc.entities[i].last_token, i));

    let mut pairs = Vec::new();
    for &i in &order {
        for &j in &order {
            if i == j {
                continue;
            }
            let (m1, m2) = (&doc.entities[i], &doc.entities[j]);
            if !is_compatible(m1.etype, m2.etype) {
                continue;
            }
            let crossings = if m1.first_token <= m2.first_token {
                sentence_span[j].0.saturating_sub(sentence_span[i].1)
            } else {
                sentence_span[i].0.saturating_sub(sentence_span[j].1)
            };
            if crossings > max_crossings {
                continue;
            }
            pairs.push(EntityPair {
                doc: doc.id.clone(),
                arg1: m1.id.clone(),
                arg2: m2.id.clone(),
                arg1_index: i,
                arg2_index: j,
                sentence_crossings: crossings,
            });
        }
    }
    pairs
}

/// Labels each pair with the gold relation on the same (arg1, arg2), or
/// `Null` when there is none.
pub fn label_pairs(pairs: Vec<EntityPair>, gold: &[RelationInstance]) -> Labeling {
    let mut by_args: HashMap<(&str, &str), RelationType> = HashMap::new();
    for r in gold {
        by_args
            .entry((r.arg1.as_str(), r.arg2.as_str()))
            .and_modify(|t| *t = (*t).min(r.rtype))
            .or_insert(r.rtype);
    }
    let generated: HashSet<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.arg1.as_str(), p.arg2.as_str()))
        .collect();
    let unreachable_gold = gold
        .iter()
        .filter(|r| !generated.contains(&(r.arg1.as_str(), r.arg2.as_str())))
        .count();

    let instances = pairs
        .into_iter()
        .map(|pair| {
            let label = by_args
                .get(&(pair.arg1.as_str(), pair.arg2.as_str()))
                .copied()
                .unwrap_or(RelationType::Null);
            LabeledInstance { pair, label }
        })
        .collect();
    Labeling { instances, unreachable_gold }
}

/// Pairs of one document labeled against its own gold relations.
pub fn labeled_instances(doc: &Document, max_crossings: usize) -> Labeling {
    label_pairs(generate_pairs(doc, max_crossings), &doc.relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synth::{build_document, TEMPLATES};
    use crate::corpus::{compatible_relation_types, generate_synthetic, SynthConfig};
    use proptest::prelude::*;

    fn chest_xray() -> Document {
        build_document("d", &[(&TEMPLATES[0], vec!["chest", "X-ray", "normal"])])
    }

    fn ids(pairs: &[EntityPair]) -> Vec<(&str, &str)> {
        pairs.iter().map(|p| (p.arg1.as_str(), p.arg2.as_str())).collect()
    }

    #[test]
    fn chest_xray_pairs() {
        let doc = chest_xray();
        let pairs = generate_pairs(&doc, 0);
        // T1 chest, T2 X-ray, T3 normal
        assert_eq!(ids(&pairs), vec![("T2", "T1"), ("T2", "T3")]);
        let labeled = label_pairs(pairs, &doc.relations);
        assert_eq!(labeled.instances[0].label, RelationType::HasTarget);
        assert_eq!(labeled.instances[1].label, RelationType::HasFinding);
        assert_eq!(labeled.unreachable_gold, 0);
    }

    #[test]
    fn empty_gold_labels_null() {
        let doc = chest_xray();
        let labeled = label_pairs(generate_pairs(&doc, 0), &[]);
        assert!(labeled.instances.iter().all(|i| i.label == RelationType::Null));
    }

    fn three_sentences() -> Document {
        // condition in sentence 1, locus in sentence 3
        build_document(
            "d",
            &[
                (&TEMPLATES[4], vec!["no", "cancer"]),
                (&TEMPLATES[6], vec!["left", "mastectomy"]),
                (&TEMPLATES[1], vec!["lung", "X-ray"]),
            ],
        )
    }

    #[test]
    fn window_excludes_two_crossings() {
        let mut doc = three_sentences();
        // cancer (T2) -> lung (T5)
        doc.relations.push(RelationInstance {
            rtype: RelationType::HasLocation,
            arg1: "T2".into(),
            arg2: "T5".into(),
        });
        doc.validate().unwrap();
        let pairs = generate_pairs(&doc, 1);
        assert!(!ids(&pairs).contains(&("T2", "T5")));
        let labeled = label_pairs(pairs, &doc.relations);
        assert_eq!(labeled.unreachable_gold, 1);

        let wide = generate_pairs(&doc, 2);
        let pair = wide.iter().find(|p| p.arg1 == "T2" && p.arg2 == "T5").unwrap();
        assert_eq!(pair.sentence_crossings, 2);
    }

    #[test]
    fn single_mention_has_no_pairs() {
        let doc = build_document("d", &[(&TEMPLATES[1], vec!["lung", "X-ray"])]);
        let mut doc = doc;
        doc.entities.truncate(1);
        doc.relations.clear();
        assert!(generate_pairs(&doc, 1).is_empty());
    }

    #[test]
    fn reverse_direction_needs_legal_roles() {
        // LateralitySignal -> Intervention is legal; the reverse is not
        let doc = build_document("d", &[(&TEMPLATES[6], vec!["left", "mastectomy"])]);
        assert_eq!(ids(&generate_pairs(&doc, 0)), vec![("T1", "T2")]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn pairs_are_compatible_and_labels_account_for_gold(seed in 0u64..1000, n in 0usize..3) {
            let corpus = generate_synthetic(&SynthConfig { n_docs: 3, seed, ..SynthConfig::default() });
            for doc in &corpus.documents {
                let labeling = labeled_instances(doc, n);
                let non_null = labeling.instances.iter().filter(|i| i.label != RelationType::Null).count();
                prop_assert_eq!(non_null, doc.relations.len() - labeling.unreachable_gold);
                for inst in &labeling.instances {
                    let (a, b) = (&doc.entities[inst.pair.arg1_index], &doc.entities[inst.pair.arg2_index]);
                    let compat = compatible_relation_types(a.etype, b.etype);
                    prop_assert!(!compat.is_empty());
                    prop_assert!(inst.pair.sentence_crossings <= n);
                    prop_assert!(inst.label == RelationType::Null || compat.contains(&inst.label));
                }
                let wide = labeled_instances(doc, doc.sentences.len());
                prop_assert_eq!(wide.unreachable_gold, 0);
            }
        }
    }
}
