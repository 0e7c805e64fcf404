//! Metric-based detection of the five smells.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::ThresholdConfig;
use crate::metrics::{ClassMetrics, MethodMetrics, MetricSet};
use crate::model::{ArtifactIdx, ArtifactKind, ArtifactTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SmellKind {
    BC,
    GC,
    BM,
    FE,
    DC,
}

impl SmellKind {
    /// Report order.
    pub const ALL: [SmellKind; 5] = [SmellKind::BC, SmellKind::GC, SmellKind::BM, SmellKind::FE, SmellKind::DC];

    pub fn as_str(self) -> &'static str {
        match self {
            SmellKind::BC => "BC",
            SmellKind::GC => "GC",
            SmellKind::BM => "BM",
            SmellKind::FE => "FE",
            SmellKind::DC => "DC",
        }
    }

    /// The only artifact kind this smell can bind to.
    pub fn artifact_kind(self) -> ArtifactKind {
        match self {
            SmellKind::FE | SmellKind::BM => ArtifactKind::FunctionalMethod,
            SmellKind::GC | SmellKind::BC | SmellKind::DC => ArtifactKind::Class,
        }
    }

    pub fn is_class_level(self) -> bool {
        self.artifact_kind() == ArtifactKind::Class
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SmellKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SmellKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown smell `{s}`"))
    }
}

pub type Evidence = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct SmellInstance {
    pub kind: SmellKind,
    pub artifact: ArtifactIdx,
    /// Every metric the rule reads, with its value.
    pub evidence: Evidence,
}

pub fn feature_envy_rule(m: &MethodMetrics, t: &ThresholdConfig) -> bool {
    f64::from(m.atfd) > t.few_upper && m.laa < t.one_third && f64::from(m.fdp) <= t.few_lower
}

pub fn brain_method_rule(m: &MethodMetrics, t: &ThresholdConfig) -> bool {
    f64::from(m.loc) > t.high_method_loc
        && m.cyclo_per_loc() >= t.high_cyclo_ratio
        && f64::from(m.maxnesting) >= t.several
        && f64::from(m.noav) > t.many
}

pub fn god_class_rule(c: &ClassMetrics, t: &ThresholdConfig) -> bool {
    f64::from(c.atfd) > t.few_upper && f64::from(c.wmc) >= t.very_high_wmc && c.tcc < t.one_third
}

/// `((BM > 1 ∧ LOC ≥ 3·HIGH_METHOD_LOC) ∨ (BM = 1 ∧ LOC ≥ 6·HIGH_METHOD_LOC ∧ WMC ≥ 2·VERY_HIGH_WMC)) ∧ WMC ≥ VERY_HIGH_WMC ∧ TCC < HALF`
pub fn brain_class_rule(c: &ClassMetrics, t: &ThresholdConfig) -> bool {
    let loc = f64::from(c.loc);
    let wmc = f64::from(c.wmc);
    let size = (c.bm_count > 1 && loc >= t.brain_class_loc())
        || (c.bm_count == 1 && loc >= 2.0 * t.brain_class_loc() && wmc >= 2.0 * t.very_high_wmc);
    size && wmc >= t.very_high_wmc && c.tcc < t.half
}

pub fn data_class_rule(c: &ClassMetrics, t: &ThresholdConfig) -> bool {
    let exposed = f64::from(c.noap + c.noam);
    let wmc = f64::from(c.wmc);
    c.woc < t.one_third
        && ((exposed > t.few_upper && wmc < t.high_wmc) || (exposed > t.many_attr && wmc < t.very_high_wmc))
}

fn method_evidence(m: &MethodMetrics, keys: &[&str]) -> Evidence {
    let all = [
        ("LOC", f64::from(m.loc)),
        ("CYCLO", f64::from(m.cyclo)),
        ("CYCLO/LOC", m.cyclo_per_loc()),
        ("MAXNESTING", f64::from(m.maxnesting)),
        ("NOAV", f64::from(m.noav)),
        ("ATFD", f64::from(m.atfd)),
        ("LAA", m.laa),
        ("FDP", f64::from(m.fdp)),
    ];
    all.iter().filter(|(k, _)| keys.contains(k)).map(|(k, v)| (k.to_string(), *v)).collect()
}

fn class_evidence(c: &ClassMetrics, keys: &[&str]) -> Evidence {
    let all = [
        ("WMC", f64::from(c.wmc)),
        ("TCC", c.tcc),
        ("ATFD", f64::from(c.atfd)),
        ("LOC", f64::from(c.loc)),
        ("NOAP", f64::from(c.noap)),
        ("NOAM", f64::from(c.noam)),
        ("WOC", c.woc),
        ("BM_count", f64::from(c.bm_count)),
    ];
    all.iter().filter(|(k, _)| keys.contains(k)).map(|(k, v)| (k.to_string(), *v)).collect()
}

fn detect_methods(
    table: &ArtifactTable,
    metrics: &MetricSet,
    kind: SmellKind,
    rule: fn(&MethodMetrics, &ThresholdConfig) -> bool,
    keys: &[&str],
    t: &ThresholdConfig,
) -> Vec<SmellInstance> {
    table
        .of_kind(ArtifactKind::FunctionalMethod)
        .filter_map(|i| {
            let m = metrics.methods.get(&i)?;
            rule(m, t).then(|| SmellInstance { kind, artifact: i, evidence: method_evidence(m, keys) })
        })
        .collect()
}

fn detect_classes(
    table: &ArtifactTable,
    metrics: &MetricSet,
    kind: SmellKind,
    rule: fn(&ClassMetrics, &ThresholdConfig) -> bool,
    keys: &[&str],
    t: &ThresholdConfig,
) -> Vec<SmellInstance> {
    table
        .of_kind(ArtifactKind::Class)
        .filter_map(|i| {
            let c = metrics.classes.get(&i)?;
            rule(c, t).then(|| SmellInstance { kind, artifact: i, evidence: class_evidence(c, keys) })
        })
        .collect()
}

pub fn detect_feature_envy(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> Vec<SmellInstance> {
    detect_methods(table, metrics, SmellKind::FE, feature_envy_rule, &["ATFD", "LAA", "FDP"], t)
}

pub fn detect_brain_method(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> Vec<SmellInstance> {
    let keys = ["LOC", "CYCLO", "CYCLO/LOC", "MAXNESTING", "NOAV"];
    detect_methods(table, metrics, SmellKind::BM, brain_method_rule, &keys, t)
}

pub fn detect_god_class(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> Vec<SmellInstance> {
    detect_classes(table, metrics, SmellKind::GC, god_class_rule, &["ATFD", "WMC", "TCC"], t)
}

pub fn detect_brain_class(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> Vec<SmellInstance> {
    detect_classes(table, metrics, SmellKind::BC, brain_class_rule, &["BM_count", "LOC", "WMC", "TCC"], t)
}

pub fn detect_data_class(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> Vec<SmellInstance> {
    detect_classes(table, metrics, SmellKind::DC, data_class_rule, &["WOC", "NOAP", "NOAM", "WMC"], t)
}

/// All detected instances of one project.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SmellSet {
    instances: Vec<SmellInstance>,
    by_kind: BTreeMap<SmellKind, BTreeSet<ArtifactIdx>>,
}

impl SmellSet {
    pub fn new(mut instances: Vec<SmellInstance>) -> Self {
        instances.sort_by_key(|s| (s.kind, s.artifact));
        instances.dedup_by_key(|s| (s.kind, s.artifact));
        let mut by_kind: BTreeMap<SmellKind, BTreeSet<ArtifactIdx>> = BTreeMap::new();
        for s in &instances {
            by_kind.entry(s.kind).or_default().insert(s.artifact);
        }
        SmellSet { instances, by_kind }
    }

    pub fn instances(&self) -> &[SmellInstance] {
        &self.instances
    }

    pub fn of(&self, kind: SmellKind) -> &BTreeSet<ArtifactIdx> {
        static EMPTY: BTreeSet<ArtifactIdx> = BTreeSet::new();
        self.by_kind.get(&kind).unwrap_or(&EMPTY)
    }

    pub fn has(&self, kind: SmellKind, artifact: ArtifactIdx) -> bool {
        self.of(kind).contains(&artifact)
    }

    pub fn kinds_of(&self, artifact: ArtifactIdx) -> Vec<SmellKind> {
        SmellKind::ALL.into_iter().filter(|&k| self.has(k, artifact)).collect()
    }
}

pub fn detect_all(table: &ArtifactTable, metrics: &MetricSet, t: &ThresholdConfig) -> SmellSet {
    let mut all = detect_feature_envy(table, metrics, t);
    all.extend(detect_brain_method(table, metrics, t));
    all.extend(detect_god_class(table, metrics, t));
    all.extend(detect_brain_class(table, metrics, t));
    all.extend(detect_data_class(table, metrics, t));
    SmellSet::new(all)
}

/// Artifacts of `kind`'s artifact type not flagged with `kind` (other smells allowed).
pub fn non_smell_counterparts(table: &ArtifactTable, smells: &SmellSet, kind: SmellKind) -> BTreeSet<ArtifactIdx> {
    let flagged = smells.of(kind);
    table.of_kind(kind.artifact_kind()).filter(|a| !flagged.contains(a)).collect()
}
