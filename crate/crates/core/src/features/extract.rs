use super::deppath::dependency_path;
use super::{FeatureConfig, FeatureSet, FeatureVector};
use crate::corpus::{Document, EntityMention, Token};
use crate::pairing::EntityPair;
use crate::preprocess::generalize_pos;

/// Feature vector of `pair` in the context of `doc`, restricted to the
/// sets enabled in `cfg`.
pub fn extract(pair: &EntityPair, doc: &Document, cfg: &FeatureConfig) -> FeatureVector {
    let arg1 = &doc.entities[pair.arg1_index];
    let arg2 = &doc.entities[pair.arg2_index];
    let ctx = Context::new(doc, arg1, arg2);
    let mut fv = FeatureVector::new();

    for set in &cfg.enabled {
        match set {
            FeatureSet::Tok => ctx.window(&mut fv, *set, cfg.window, &[("str", surface), ("pos", full_pos)]),
            FeatureSet::GenTok => ctx.window(&mut fv, *set, cfg.window, &[("root", root), ("gpos", gen_pos)]),
            FeatureSet::Atype => fv.flag(*set, &format!("{}-{}", arg1.etype, arg2.etype)),
            FeatureSet::Dir => fv.flag(*set, if ctx.forward { "fwd" } else { "bwd" }),
            FeatureSet::Str => ctx.structure(&mut fv, *set, surface),
            FeatureSet::Pos => ctx.structure(&mut fv, *set, full_pos),
            FeatureSet::Root => ctx.structure(&mut fv, *set, root),
            FeatureSet::GenPos => ctx.structure(&mut fv, *set, gen_pos),
            FeatureSet::Inter => ctx.intervening(&mut fv),
            FeatureSet::Event => ctx.events(&mut fv),
            FeatureSet::Dep => ctx.dependency(&mut fv),
            FeatureSet::Syndist => ctx.distances(&mut fv),
        }
    }
    fv
}

fn surface(t: &Token) -> String {
    t.surface.clone()
}

fn full_pos(t: &Token) -> String {
    t.pos.clone()
}

fn root(t: &Token) -> String {
    t.root.clone()
}

fn gen_pos(t: &Token) -> String {
    generalize_pos(&t.pos)
}

struct Context<'a> {
    doc: &'a Document,
    arg1: &'a EntityMention,
    arg2: &'a EntityMention,
    left: &'a EntityMention,
    right: &'a EntityMention,
    forward: bool,
}

impl<'a> Context<'a> {
    fn new(doc: &'a Document, arg1: &'a EntityMention, arg2: &'a EntityMention) -> Self {
        let forward = arg1.first_token < arg2.first_token;
        let (left, right) = if forward { (arg1, arg2) } else { (arg2, arg1) };
        Context { doc, arg1, arg2, left, right, forward }
    }

    fn between(&self) -> std::ops::Range<usize> {
        let start = self.left.last_token + 1;
        start..self.right.first_token.max(start)
    }

    fn tokens(&self, range: impl IntoIterator<Item = usize>) -> impl Iterator<Item = &'a Token> {
        let doc = self.doc;
        range.into_iter().filter_map(move |i| doc.tokens.get(i))
    }

    /// Tokens at offsets -N..-1 before and +1..+N after each argument,
    /// skipping positions inside the other argument.
    fn window(&self, fv: &mut FeatureVector, set: FeatureSet, n: usize, views: &[(&str, fn(&Token) -> String)]) {
        let len = self.doc.tokens.len() as isize;
        for (tag, arg, other) in [("a1", self.arg1, self.arg2), ("a2", self.arg2, self.arg1)] {
            for o in 1..=n as isize {
                for (offset, idx) in [(-o, arg.first_token as isize - o), (o, arg.last_token as isize + o)] {
                    if idx < 0 || idx >= len || other.tokens().contains(&(idx as usize)) {
                        continue;
                    }
                    let tok = &self.doc.tokens[idx as usize];
                    for (name, view) in views {
                        fv.flag(set, &format!("{tag}:{offset}:{name}={}", view(tok)));
                    }
                }
            }
        }
    }

    /// Argument bags, heads, head pair, between-tokens and the two tokens
    /// on either side of the pair, all in one token view.
    fn structure(&self, fv: &mut FeatureVector, set: FeatureSet, view: fn(&Token) -> String) {
        for t in self.tokens(self.arg1.tokens()) {
            fv.flag(set, &format!("m1={}", view(t)));
        }
        for t in self.tokens(self.arg2.tokens()) {
            fv.flag(set, &format!("m2={}", view(t)));
        }
        let hm1 = view(&self.doc.tokens[self.arg1.head()]);
        let hm2 = view(&self.doc.tokens[self.arg2.head()]);
        fv.flag(set, &format!("hm1={hm1}"));
        fv.flag(set, &format!("hm2={hm2}"));
        fv.flag(set, &format!("hm12={hm1}_{hm2}"));

        let between: Vec<&Token> = self.tokens(self.between()).collect();
        if let (Some(first), Some(last)) = (between.first(), between.last()) {
            fv.flag(set, &format!("bf={}", view(first)));
            fv.flag(set, &format!("bl={}", view(last)));
            if between.len() > 2 {
                for t in &between[1..between.len() - 1] {
                    fv.flag(set, &format!("bo={}", view(t)));
                }
            }
        }

        for (k, name) in [(1, "lb1"), (2, "lb2")] {
            if let Some(i) = self.left.first_token.checked_sub(k) {
                fv.flag(set, &format!("{name}={}", view(&self.doc.tokens[i])));
            }
        }
        for (k, name) in [(1, "ra1"), (2, "ra2")] {
            if let Some(t) = self.doc.tokens.get(self.right.last_token + k) {
                fv.flag(set, &format!("{name}={}", view(t)));
            }
        }
    }

    fn intervening_mentions(&self) -> impl Iterator<Item = &'a EntityMention> {
        let (lo, hi) = (self.left.last_token, self.right.first_token);
        let (a1, a2) = (self.arg1.id.as_str(), self.arg2.id.as_str());
        self.doc
            .entities
            .iter()
            .filter(move |m| m.first_token > lo && m.last_token < hi && m.id != a1 && m.id != a2)
    }

    fn intervening(&self, fv: &mut FeatureVector) {
        let mut per_type = std::collections::BTreeMap::new();
        for m in self.intervening_mentions() {
            *per_type.entry(m.etype.name()).or_insert(0usize) += 1;
        }
        fv.count(FeatureSet::Inter, "count", per_type.values().sum());
        for (name, k) in per_type {
            fv.count(FeatureSet::Inter, &format!("count:{name}"), k);
            fv.flag(FeatureSet::Inter, &format!("has={name}"));
        }
    }

    fn events(&self, fv: &mut FeatureVector) {
        let mark = |m: &EntityMention| if m.etype.is_event() { 'E' } else { 'N' };
        fv.flag(FeatureSet::Event, &format!("args={}{}", mark(self.arg1), mark(self.arg2)));
        let (mut ev, mut non) = (false, false);
        for m in self.intervening_mentions() {
            if m.etype.is_event() {
                ev = true;
            } else {
                non = true;
            }
        }
        if ev {
            fv.flag(FeatureSet::Event, "between=event");
        }
        if non {
            fv.flag(FeatureSet::Event, "between=nonevent");
        }
    }

    fn dependency(&self, fv: &mut FeatureVector) {
        let Some(path) = dependency_path(self.doc, self.arg1, self.arg2) else {
            return;
        };
        fv.flag(FeatureSet::Dep, &format!("path={}", path.render()));
        if path.tokens.len() > 2 {
            for &t in &path.tokens[1..path.tokens.len() - 1] {
                fv.flag(FeatureSet::Dep, &format!("root={}", self.doc.tokens[t].root));
            }
        }
    }

    fn distances(&self, fv: &mut FeatureVector) {
        fv.count(FeatureSet::Syndist, "tokens", self.between().len());
        if let Some(path) = dependency_path(self.doc, self.arg1, self.arg2) {
            fv.count(FeatureSet::Syndist, "deplinks", path.len());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::synth::{build_document, TEMPLATES};
    use crate::corpus::{generate_synthetic, SynthConfig};
    use crate::pairing::generate_pairs;
    use proptest::prelude::*;
    use FeatureSet::*;

    fn pair_of<'a>(pairs: &'a [EntityPair], a1: &str, a2: &str) -> &'a EntityPair {
        pairs.iter().find(|p| p.arg1 == a1 && p.arg2 == a2).unwrap()
    }

    fn only(sets: &[FeatureSet]) -> FeatureConfig {
        FeatureConfig::new(sets.iter().copied())
    }

    #[test]
    fn atype_in_role_order() {
        let doc = build_document("d", &[(&TEMPLATES[0], vec!["chest", "X-ray", "normal"])]);
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T2", "T1"), &doc, &only(&[Atype]));
        assert_eq!(fv.to_golden(), "atype=Investigation-Locus\t1\n");
    }

    #[test]
    fn chest_xray_is_backward() {
        let doc = build_document("d", &[(&TEMPLATES[0], vec!["chest", "X-ray", "normal"])]);
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T2", "T1"), &doc, &only(&[Dir]));
        assert_eq!(fv.to_golden(), "dir=bwd\t1\n");
    }

    #[test]
    fn adjacent_arguments_have_no_between_features() {
        let doc = build_document("d", &[(&TEMPLATES[0], vec!["chest", "X-ray", "normal"])]);
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T2", "T1"), &doc, &only(&[Str, Syndist]));
        assert!(fv.keys().all(|k| !k.as_str().starts_with("str:b")));
        assert_eq!(fv.get("syndist:tokens=0"), Some(1.0));
        assert_eq!(fv.get("syndist:deplinks"), Some(1.0));
    }

    #[test]
    fn window_skips_partner_and_document_edges() {
        let doc = build_document("d", &[(&TEMPLATES[0], vec!["chest", "X-ray", "normal"])]);
        let pairs = generate_pairs(&doc, 0);
        // A chest X-ray was normal .
        let fv = extract(pair_of(&pairs, "T2", "T1"), &doc, &FeatureConfig::parse("tok2").unwrap());
        assert!(fv.contains("tokN:a1:-2:str=A"));
        assert!(!fv.contains("tokN:a1:-1:str=chest"));
        assert!(fv.contains("tokN:a1:1:str=was"));
        assert!(fv.contains("tokN:a1:2:pos=JJ"));
        assert!(fv.contains("tokN:a2:-1:str=A"));
        assert!(!fv.keys().any(|k| k.as_str().starts_with("tokN:a2:-2")));
        assert!(!fv.keys().any(|k| k.as_str().starts_with("tokN:a2:1:")));
        assert!(fv.contains("tokN:a2:2:str=was"));
    }

    #[test]
    fn intervening_and_event_features() {
        // cancer of the lung and cyst of the liver were noted .
        let doc = build_document("d", &[(&TEMPLATES[10], vec!["cancer", "lung", "cyst", "liver"])]);
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T1", "T4"), &doc, &only(&[Inter, Event]));
        assert_eq!(fv.get("inter:count"), Some(2.0));
        assert_eq!(fv.get("inter:count:Locus"), Some(1.0));
        assert_eq!(fv.get("inter:count:Condition"), Some(1.0));
        assert!(fv.contains("inter:has=Locus"));
        assert!(fv.contains("event:args=NN"));
        assert!(fv.contains("event:between=nonevent"));
        assert!(!fv.contains("event:between=event"));

        let near = extract(pair_of(&pairs, "T1", "T2"), &doc, &only(&[Inter]));
        assert_eq!(near.to_golden(), "inter:count=0\t1\n");
    }

    #[test]
    fn dep_features_follow_chain() {
        // The X-ray shows cancer in the lung .
        let doc = build_document("d", &[(&TEMPLATES[2], vec!["X-ray", "cancer", "lung"])]);
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T1", "T3"), &doc, &only(&[Dep, Syndist]));
        let path = dependency_path(&doc, &doc.entities[0], &doc.entities[2]).unwrap();
        assert_eq!(fv.get("syndist:deplinks"), Some(path.len() as f64));
        assert_eq!(path.len(), 5);
        assert!(fv.contains(&format!("dep:path={}", path.render())));
        for r in ["show", "cancer", "in", "the"] {
            assert!(fv.contains(&format!("dep:root={r}")), "{r}");
        }
        assert_eq!(fv.get("syndist:tokens"), Some(4.0));
    }

    #[test]
    fn missing_deps_drop_dep_features_only() {
        let mut doc = build_document("d", &[(&TEMPLATES[2], vec!["X-ray", "cancer", "lung"])]);
        doc.deps.clear();
        let pairs = generate_pairs(&doc, 0);
        let fv = extract(pair_of(&pairs, "T1", "T3"), &doc, &only(&[Dep, Syndist]));
        assert_eq!(fv.to_golden(), "syndist:tokens\t4\n");
    }

    #[test]
    fn allgen_and_notok_exclude_raw_sets() {
        let corpus = generate_synthetic(&SynthConfig { n_docs: 2, ..SynthConfig::default() });
        for doc in &corpus.documents {
            for pair in generate_pairs(doc, 1) {
                let gen = extract(&pair, doc, &FeatureConfig::allgen());
                assert!(gen.keys().all(|k| !matches!(k.set_name(), "tokN" | "str" | "pos")));
                let notok = extract(&pair, doc, &FeatureConfig::notok());
                assert!(notok.keys().all(|k| k.set_name() != "tokN"));
            }
        }
    }

    fn any_config() -> impl Strategy<Value = FeatureConfig> {
        (prop::collection::btree_set(prop::sample::select(FeatureSet::ALL.to_vec()), 0..12), 1usize..8)
            .prop_map(|(enabled, window)| FeatureConfig { enabled, window })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn superset_config_gives_superset_keys(seed in 0u64..500, small in any_config(), extra in any_config()) {
            let corpus = generate_synthetic(&SynthConfig { n_docs: 1, seed, ..SynthConfig::default() });
            let doc = &corpus.documents[0];
            let big = FeatureConfig { enabled: small.enabled.union(&extra.enabled).copied().collect(), window: small.window };
            for pair in generate_pairs(doc, 1) {
                let a = extract(&pair, doc, &small);
                let b = extract(&pair, doc, &big);
                prop_assert_eq!(&a, &extract(&pair, doc, &small));
                for (k, v) in a.iter() {
                    prop_assert_eq!(b.get(k.as_str()), Some(v));
                }
                for (k, v) in b.iter() {
                    prop_assert!(v != 0.0);
                    if v > 1.0 {
                        prop_assert!(matches!(k.set_name(), "syndist" | "inter"), "{}", k);
                    }
                }
            }
        }
    }
}
