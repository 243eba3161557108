use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Semantic type of an annotated entity mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityType {
    Investigation,
    Intervention,
    Condition,
    Locus,
    DrugOrDevice,
    Result,
    NegationSignal,
    LateralitySignal,
    SubLocationSignal,
}

impl EntityType {
    pub const ALL: [EntityType; 9] = [
        EntityType::Investigation,
        EntityType::Intervention,
        EntityType::Condition,
        EntityType::Locus,
        EntityType::DrugOrDevice,
        EntityType::Result,
        EntityType::NegationSignal,
        EntityType::LateralitySignal,
        EntityType::SubLocationSignal,
    ];

    /// Investigations and interventions are events; everything else is not.
    pub fn is_event(self) -> bool {
        matches!(self, EntityType::Investigation | EntityType::Intervention)
    }

    pub fn name(self) -> &'static str {
        match self {
            EntityType::Investigation => "Investigation",
            EntityType::Intervention => "Intervention",
            EntityType::Condition => "Condition",
            EntityType::Locus => "Locus",
            EntityType::DrugOrDevice => "DrugOrDevice",
            EntityType::Result => "Result",
            EntityType::NegationSignal => "NegationSignal",
            EntityType::LateralitySignal => "LateralitySignal",
            EntityType::SubLocationSignal => "SubLocationSignal",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relation label assigned to an ordered entity pair. `Null` marks pairs
/// that take part in no relation.
///
/// Ordering is lexicographic on [`RelationType::name`], which is the order
/// used for every tie-break in the learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationType {
    HasTarget,
    HasFinding,
    HasIndication,
    HasLocation,
    NegationModifies,
    LateralityModifies,
    SubLocationModifies,
    Null,
}

use EntityType as E;

impl RelationType {
    /// The seven relation types, in the row order of the report tables.
    pub const RELATIONS: [RelationType; 7] = [
        RelationType::HasFinding,
        RelationType::HasIndication,
        RelationType::HasLocation,
        RelationType::HasTarget,
        RelationType::LateralityModifies,
        RelationType::NegationModifies,
        RelationType::SubLocationModifies,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationType::HasTarget => "has_target",
            RelationType::HasFinding => "has_finding",
            RelationType::HasIndication => "has_indication",
            RelationType::HasLocation => "has_location",
            RelationType::NegationModifies => "negation_modifies",
            RelationType::LateralityModifies => "laterality_modifies",
            RelationType::SubLocationModifies => "sub_location_modifies",
            RelationType::Null => "null",
        }
    }

    /// Row label used in report tables.
    pub fn table_label(self) -> &'static str {
        match self {
            RelationType::HasTarget => "Has_target",
            RelationType::HasFinding => "Has_finding",
            RelationType::HasIndication => "Has_indication",
            RelationType::HasLocation => "Has_location",
            RelationType::NegationModifies => "Negation_modifies",
            RelationType::LateralityModifies => "Laterality_modifies",
            RelationType::SubLocationModifies => "Sub-location_modifies",
            RelationType::Null => "Null",
        }
    }

    /// Legal (first argument, second argument) types. Empty for `Null`.
    pub fn argument_types(self) -> (&'static [EntityType], &'static [EntityType]) {
        match self {
            RelationType::HasTarget => (&[E::Investigation, E::Intervention], &[E::Locus]),
            RelationType::HasFinding => (&[E::Investigation], &[E::Condition, E::Result]),
            RelationType::HasIndication => (
                &[E::DrugOrDevice, E::Intervention, E::Investigation],
                &[E::Condition],
            ),
            RelationType::HasLocation => (&[E::Condition], &[E::Locus]),
            RelationType::NegationModifies => (&[E::NegationSignal], &[E::Condition]),
            RelationType::LateralityModifies => {
                (&[E::LateralitySignal], &[E::Locus, E::Intervention])
            }
            RelationType::SubLocationModifies => (&[E::SubLocationSignal], &[E::Locus]),
            RelationType::Null => (&[], &[]),
        }
    }

    pub fn admits(self, arg1: EntityType, arg2: EntityType) -> bool {
        let (first, second) = self.argument_types();
        first.contains(&arg1) && second.contains(&arg2)
    }
}

impl Ord for RelationType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name().cmp(other.name())
    }
}

impl PartialOrd for RelationType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationType::RELATIONS
            .iter()
            .chain(std::iter::once(&RelationType::Null))
            .find(|r| r.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown relation type `{s}`"))
    }
}

/// Non-null relation types whose argument columns admit `(arg1, arg2)`, in
/// name order. Role order matters, text order does not.
pub fn compatible_relation_types(arg1: EntityType, arg2: EntityType) -> Vec<RelationType> {
    RelationType::RELATIONS
        .iter()
        .copied()
        .filter(|r| r.admits(arg1, arg2))
        .collect()
}

pub fn is_compatible(arg1: EntityType, arg2: EntityType) -> bool {
    RelationType::RELATIONS.iter().any(|r| r.admits(arg1, arg2))
}
