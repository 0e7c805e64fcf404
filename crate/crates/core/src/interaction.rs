//! Interaction sets between artifact pairs and the per-pair datasets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::deps::{DependencyEdge, DependencyGraph, DependencyType};
use crate::model::{ArtifactIdx, ArtifactKind, ArtifactTable, Site};
use crate::smells::{SmellKind, SmellSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelativeLocation {
    Same,
    Different,
}

impl RelativeLocation {
    pub const ALL: [RelativeLocation; 2] = [RelativeLocation::Same, RelativeLocation::Different];

    pub fn as_str(self) -> &'static str {
        match self {
            RelativeLocation::Same => "Same",
            RelativeLocation::Different => "Different",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FlowDirection {
    Forward,
    Backward,
}

impl FlowDirection {
    pub const ALL: [FlowDirection; 2] = [FlowDirection::Forward, FlowDirection::Backward];

    pub fn flip(self) -> Self {
        match self {
            FlowDirection::Forward => FlowDirection::Backward,
            FlowDirection::Backward => FlowDirection::Forward,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlowDirection::Forward => "Forward",
            FlowDirection::Backward => "Backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InteractionType {
    #[serde(rename = "CS1-CS2")]
    Cs1Cs2,
    #[serde(rename = "CS1-nonCS2")]
    Cs1NonCs2,
    #[serde(rename = "nonCS1-CS2")]
    NonCs1Cs2,
}

impl InteractionType {
    pub const ALL: [InteractionType; 3] =
        [InteractionType::Cs1Cs2, InteractionType::Cs1NonCs2, InteractionType::NonCs1Cs2];
    pub const BASELINES: [InteractionType; 2] = [InteractionType::Cs1NonCs2, InteractionType::NonCs1Cs2];

    pub fn as_str(self) -> &'static str {
        match self {
            InteractionType::Cs1Cs2 => "CS1-CS2",
            InteractionType::Cs1NonCs2 => "CS1-nonCS2",
            InteractionType::NonCs1Cs2 => "nonCS1-CS2",
        }
    }
}

/// An ordered pair of distinct smells; the order fixes the flow direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SmellPair(pub SmellKind, pub SmellKind);

impl SmellPair {
    /// The ten unordered pairs, each in report order.
    pub fn all() -> Vec<SmellPair> {
        let k = SmellKind::ALL;
        let mut out = Vec::with_capacity(10);
        for i in 0..k.len() {
            for j in i + 1..k.len() {
                out.push(SmellPair(k[i], k[j]));
            }
        }
        out
    }

    pub fn first(self) -> SmellKind {
        self.0
    }

    pub fn second(self) -> SmellKind {
        self.1
    }
}

impl fmt::Display for SmellPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl FromStr for SmellPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(['-', ',', '/']).ok_or_else(|| format!("expected `CS1-CS2`, got `{s}`"))?;
        let (a, b): (SmellKind, SmellKind) = (a.trim().parse()?, b.trim().parse()?);
        if a == b {
            return Err(format!("pair `{s}` repeats a smell"));
        }
        Ok(SmellPair(a, b))
    }
}

/// One edge of an interaction set, with ids so records stand alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordEdge {
    pub dep_type: DependencyType,
    pub direction: FlowDirection,
    pub source: String,
    pub target: String,
    pub site: Site,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub project: String,
    pub pair: SmellPair,
    pub interaction_type: InteractionType,
    pub location: RelativeLocation,
    pub a1: String,
    pub a2: String,
    pub edges: Vec<RecordEdge>,
}

impl InteractionRecord {
    pub fn count(&self, dep_type: DependencyType, direction: FlowDirection) -> usize {
        self.edges.iter().filter(|e| e.dep_type == dep_type && e.direction == direction).count()
    }
}

/// The artifacts an interaction set is taken over: a type with its members, or a singleton.
pub fn closure(table: &ArtifactTable, a: ArtifactIdx) -> BTreeSet<ArtifactIdx> {
    table.closure(a).into_iter().collect()
}

fn split_closures(
    table: &ArtifactTable,
    a1: ArtifactIdx,
    a2: ArtifactIdx,
) -> (BTreeSet<ArtifactIdx>, BTreeSet<ArtifactIdx>) {
    let mut c1 = closure(table, a1);
    let mut c2 = closure(table, a2);
    // a member and its own members stay on their side only
    if c2.contains(&a1) {
        c2.retain(|x| !c1.contains(x));
    } else if c1.contains(&a2) {
        c1.retain(|x| !c2.contains(x));
    }
    (c1, c2)
}

/// Edges connecting the closures of `a1` and `a2`, in graph order, each with
/// its direction relative to `a1`.
pub fn interaction_set<'g>(
    graph: &'g DependencyGraph,
    table: &ArtifactTable,
    a1: ArtifactIdx,
    a2: ArtifactIdx,
) -> Vec<(&'g DependencyEdge, FlowDirection)> {
    assert_ne!(a1, a2, "an artifact does not interact with itself");
    let (c1, c2) = split_closures(table, a1, a2);
    let mut out: Vec<(usize, FlowDirection)> = Vec::new();
    for (from, to, dir) in [(&c1, &c2, FlowDirection::Forward), (&c2, &c1, FlowDirection::Backward)] {
        for &s in from {
            for i in graph.source_indices(s) {
                if to.contains(&graph.edges()[i].target) {
                    out.push((i, dir));
                }
            }
        }
    }
    out.sort_unstable();
    out.into_iter().map(|(i, d)| (&graph.edges()[i], d)).collect()
}

/// Same iff both artifacts belong to the same class.
pub fn relative_location(table: &ArtifactTable, a1: ArtifactIdx, a2: ArtifactIdx) -> RelativeLocation {
    if table.owner_class(a1) == table.owner_class(a2) {
        RelativeLocation::Same
    } else {
        RelativeLocation::Different
    }
}

/// Artifacts of `kind` whose closure shares an edge with the closure of `a`.
fn neighbors(
    graph: &DependencyGraph,
    table: &ArtifactTable,
    a: ArtifactIdx,
    kind: ArtifactKind,
) -> BTreeSet<ArtifactIdx> {
    let lift = |x: ArtifactIdx| -> Option<ArtifactIdx> {
        if kind == ArtifactKind::Class {
            let c = table.owner_class(x);
            (table.get(c).kind == ArtifactKind::Class).then_some(c)
        } else {
            (table.get(x).kind == kind).then_some(x)
        }
    };
    let mut out = BTreeSet::new();
    for m in table.closure(a) {
        for e in graph.from_source(m).chain(graph.to_target(m)) {
            out.extend(lift(e.source));
            out.extend(lift(e.target));
        }
    }
    out.remove(&a);
    out
}

fn make_record(
    project: &str,
    table: &ArtifactTable,
    graph: &DependencyGraph,
    pair: SmellPair,
    interaction_type: InteractionType,
    a1: ArtifactIdx,
    a2: ArtifactIdx,
) -> Option<InteractionRecord> {
    let set = interaction_set(graph, table, a1, a2);
    if set.is_empty() {
        return None;
    }
    let edges = set
        .into_iter()
        .map(|(e, direction)| RecordEdge {
            dep_type: e.dep_type,
            direction,
            source: table.get(e.source).id.clone(),
            target: table.get(e.target).id.clone(),
            site: e.site.clone(),
        })
        .collect();
    Some(InteractionRecord {
        project: project.to_string(),
        pair,
        interaction_type,
        location: relative_location(table, a1, a2),
        a1: table.get(a1).id.clone(),
        a2: table.get(a2).id.clone(),
        edges,
    })
}

/// All CS1-CS2, CS1-nonCS2 and nonCS1-CS2 records of one project for `pair`.
///
/// An unordered artifact pair appears at most once per interaction type, and
/// never in a baseline type when it already forms a CS1-CS2 record.
pub fn build_pair_dataset(
    project: &str,
    table: &ArtifactTable,
    graph: &DependencyGraph,
    smells: &SmellSet,
    pair: SmellPair,
) -> Vec<InteractionRecord> {
    let (k1, k2) = (pair.first().artifact_kind(), pair.second().artifact_kind());
    let (s1, s2) = (smells.of(pair.first()), smells.of(pair.second()));

    // (type, a1, a2) candidates in deterministic order
    let mut candidates: BTreeSet<(InteractionType, ArtifactIdx, ArtifactIdx)> = BTreeSet::new();
    for &a1 in s1 {
        for a2 in neighbors(graph, table, a1, k2) {
            let t = if s2.contains(&a2) { InteractionType::Cs1Cs2 } else { InteractionType::Cs1NonCs2 };
            candidates.insert((t, a1, a2));
        }
    }
    for &a2 in s2 {
        for a1 in neighbors(graph, table, a2, k1) {
            if !s1.contains(&a1) {
                candidates.insert((InteractionType::NonCs1Cs2, a1, a2));
            }
        }
    }

    let unordered = |a: ArtifactIdx, b: ArtifactIdx| if a < b { (a, b) } else { (b, a) };
    let smelly: BTreeSet<(ArtifactIdx, ArtifactIdx)> =
        candidates.iter().filter(|(t, ..)| *t == InteractionType::Cs1Cs2).map(|&(_, a, b)| unordered(a, b)).collect();
    let mut seen: BTreeSet<(InteractionType, ArtifactIdx, ArtifactIdx)> = BTreeSet::new();
    let mut records = Vec::new();
    for (t, a1, a2) in candidates {
        let key = unordered(a1, a2);
        if t != InteractionType::Cs1Cs2 && smelly.contains(&key) {
            continue;
        }
        if !seen.insert((t, key.0, key.1)) {
            continue;
        }
        records.extend(make_record(project, table, graph, pair, t, a1, a2));
    }
    records.sort_by(|a, b| (a.interaction_type, &a.a1, &a.a2).cmp(&(b.interaction_type, &b.a1, &b.a2)));
    records
}

/// Datasets of the given pairs for one project.
pub fn build_datasets(
    project: &str,
    table: &ArtifactTable,
    graph: &DependencyGraph,
    smells: &SmellSet,
    pairs: &[SmellPair],
) -> BTreeMap<SmellPair, Vec<InteractionRecord>> {
    pairs.iter().map(|&p| (p, build_pair_dataset(project, table, graph, smells, p))).collect()
}

/// Distinct CS1 artifacts interacting with at least one CS2 artifact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub interacting: usize,
    pub total: usize,
}

impl Frequency {
    /// Percentage, absent when there are no CS1 artifacts.
    pub fn percent(&self) -> Option<f64> {
        (self.total > 0).then(|| 100.0 * self.interacting as f64 / self.total as f64)
    }

    pub fn merge(self, other: Frequency) -> Frequency {
        Frequency { interacting: self.interacting + other.interacting, total: self.total + other.total }
    }
}

pub fn interaction_frequency(
    table: &ArtifactTable,
    graph: &DependencyGraph,
    smells: &SmellSet,
    cs1: SmellKind,
    cs2: SmellKind,
) -> Frequency {
    let s1 = smells.of(cs1);
    let s2 = smells.of(cs2);
    let interacting = s1
        .iter()
        .filter(|&&a1| {
            neighbors(graph, table, a1, cs2.artifact_kind())
                .into_iter()
                .any(|a2| s2.contains(&a2) && !interaction_set(graph, table, a1, a2).is_empty())
        })
        .count();
    Frequency { interacting, total: s1.len() }
}
