//! Sparse features for a candidate entity pair.
//!
//! Keys render as `set:detail` when the detail carries its own `name=value`
//! part (`str:hm1=cancer`, `tokN:a1:-1:pos=NN`), and as `set=value` for the
//! single-valued sets (`atype=Investigation-Locus`, `dir=fwd`). Counts and
//! distances are numeric: the key is emitted with the count as its value,
//! and a zero count is emitted as the flag `key=0` since zero values are
//! never stored.

mod deppath;
mod extract;
mod index;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use deppath::{dependency_path, DepPath, DepStep};
pub use extract::extract;
pub use index::{build_index, FeatureIndex};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureSet {
    #[serde(rename = "tokN")]
    Tok,
    #[serde(rename = "gentokN")]
    GenTok,
    #[serde(rename = "atype")]
    Atype,
    #[serde(rename = "dir")]
    Dir,
    #[serde(rename = "str")]
    Str,
    #[serde(rename = "pos")]
    Pos,
    #[serde(rename = "root")]
    Root,
    #[serde(rename = "genpos")]
    GenPos,
    #[serde(rename = "inter")]
    Inter,
    #[serde(rename = "event")]
    Event,
    #[serde(rename = "dep")]
    Dep,
    #[serde(rename = "syndist")]
    Syndist,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 12] = [
        FeatureSet::Tok,
        FeatureSet::GenTok,
        FeatureSet::Atype,
        FeatureSet::Dir,
        FeatureSet::Str,
        FeatureSet::Pos,
        FeatureSet::Root,
        FeatureSet::GenPos,
        FeatureSet::Inter,
        FeatureSet::Event,
        FeatureSet::Dep,
        FeatureSet::Syndist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::Tok => "tokN",
            FeatureSet::GenTok => "gentokN",
            FeatureSet::Atype => "atype",
            FeatureSet::Dir => "dir",
            FeatureSet::Str => "str",
            FeatureSet::Pos => "pos",
            FeatureSet::Root => "root",
            FeatureSet::GenPos => "genpos",
            FeatureSet::Inter => "inter",
            FeatureSet::Event => "event",
            FeatureSet::Dep => "dep",
            FeatureSet::Syndist => "syndist",
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rendered feature key. Case-sensitive; `:` only ever separates the set
/// name from its detail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureKey(String);

impl FeatureKey {
    pub fn new(set: FeatureSet, detail: &str) -> Self {
        let sep = if detail.contains('=') { ':' } else { '=' };
        FeatureKey(format!("{}{sep}{detail}", set.name()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn set_name(&self) -> &str {
        let end = self.0.find([':', '=']).unwrap_or(self.0.len());
        &self.0[..end]
    }

    pub fn set(&self) -> Option<FeatureSet> {
        FeatureSet::ALL.into_iter().find(|s| s.name() == self.set_name())
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Sparse, sorted map from feature key to value. Zero values are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector(BTreeMap<FeatureKey, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn flag(&mut self, set: FeatureSet, detail: &str) {
        self.0.insert(FeatureKey::new(set, detail), 1.0);
    }

    /// Numeric feature; zero becomes the flag `name=0`.
    pub fn count(&mut self, set: FeatureSet, name: &str, value: usize) {
        if value == 0 {
            self.flag(set, &format!("{name}=0"));
        } else {
            self.0
                .insert(FeatureKey(format!("{}:{name}", set.name())), value as f64);
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(&FeatureKey(key.to_string())).copied()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeatureKey, f64)> {
        self.0.iter().map(|(k, &v)| (k, v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &FeatureKey> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Golden-file rendering: sorted `key<TAB>value` lines.
    pub fn to_golden(&self) -> String {
        self.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect()
    }
}

pub const DEFAULT_WINDOW: usize = 6;

/// Which feature sets to extract, and the token window for tokN/gentokN.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub enabled: BTreeSet<FeatureSet>,
    pub window: usize,
}

impl FeatureConfig {
    pub fn new(sets: impl IntoIterator<Item = FeatureSet>) -> Self {
        FeatureConfig {
            enabled: sets.into_iter().collect(),
            window: DEFAULT_WINDOW,
        }
    }

    /// gentokN + atype + dir + root + genpos + inter + event
    pub fn allgen() -> Self {
        use FeatureSet::*;
        Self::new([GenTok, Atype, Dir, Root, GenPos, Inter, Event])
    }

    /// atype + dir + str + pos + inter + event
    pub fn notok() -> Self {
        use FeatureSet::*;
        Self::new([Atype, Dir, Str, Pos, Inter, Event])
    }

    /// The full non-syntactic cumulative set: tok6 + atype + dir + str +
    /// pos + inter + event.
    pub fn non_syntactic() -> Self {
        use FeatureSet::*;
        Self::new([Tok, Atype, Dir, Str, Pos, Inter, Event])
    }

    pub fn with(mut self, set: FeatureSet) -> Self {
        self.enabled.insert(set);
        self
    }

    pub fn is_enabled(&self, set: FeatureSet) -> bool {
        self.enabled.contains(&set)
    }

    /// Comma- or `+`-separated list of set names and the aliases `allgen`
    /// and `notok`. `tok6`/`gentok4` style names also set the window.
    pub fn parse(list: &str) -> Result<Self, Error> {
        let mut cfg = FeatureConfig::new([]);
        for raw in list.split([',', '+']).map(str::trim).filter(|s| !s.is_empty()) {
            let name = raw.to_lowercase();
            match name.as_str() {
                "allgen" => cfg.enabled.extend(Self::allgen().enabled),
                "notok" => cfg.enabled.extend(Self::notok().enabled),
                _ => {
                    let (base, window) = split_window(&name);
                    let set = match base {
                        "tok" => FeatureSet::Tok,
                        "gentok" => FeatureSet::GenTok,
                        other => FeatureSet::ALL
                            .into_iter()
                            .find(|s| s.name() == other)
                            .ok_or_else(|| Error::config(format!("unknown feature set `{raw}`")))?,
                    };
                    if let Some(w) = window {
                        cfg.window = w;
                    }
                    cfg.enabled.insert(set);
                }
            }
        }
        Ok(cfg)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.enabled.iter().map(|s| s.name()).collect()
    }
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self::non_syntactic()
    }
}

impl FromStr for FeatureConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

fn split_window(name: &str) -> (&str, Option<usize>) {
    for base in ["gentok", "tok"] {
        if let Some(rest) = name.strip_prefix(base) {
            return match rest {
                "" | "n" => (base, None),
                digits => match digits.parse() {
                    Ok(w) => (base, Some(w)),
                    Err(_) => (name, None),
                },
            };
        }
    }
    (name, None)
}
