//! CSV report bundle rendered from analysis results.
//!
//! Every matrix cell carries a status: `value` (tested), `masked` (ruled out by
//! smell semantics) or `absent` (no records on one side).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, TypologyMode};
use crate::deps::{DependencyType, Relation};
use crate::error::{Error, Result};
use crate::interaction::{FlowDirection, Frequency, InteractionType, RelativeLocation, SmellPair};
use crate::model::ArtifactKind;
use crate::smells::SmellKind;
use crate::study::{ContrastSpec, Dependent, Outcome, PerSystemSummary, StudyResults};

/// Per-project and pooled interaction frequencies for every ordered smell pair.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub projects: BTreeMap<String, Vec<FrequencyCell>>,
    pub union: Vec<FrequencyCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCell {
    pub cs1: SmellKind,
    pub cs2: SmellKind,
    #[serde(flatten)]
    pub frequency: Frequency,
}

impl FrequencyTable {
    pub fn from_projects(projects: BTreeMap<String, Vec<FrequencyCell>>) -> Self {
        let mut pooled: BTreeMap<(SmellKind, SmellKind), Frequency> = BTreeMap::new();
        for cells in projects.values() {
            for c in cells {
                let f = pooled.entry((c.cs1, c.cs2)).or_insert(Frequency { interacting: 0, total: 0 });
                *f = f.merge(c.frequency);
            }
        }
        let union = ordered_pairs()
            .map(|(cs1, cs2)| FrequencyCell {
                cs1,
                cs2,
                frequency: pooled.get(&(cs1, cs2)).copied().unwrap_or(Frequency { interacting: 0, total: 0 }),
            })
            .collect();
        FrequencyTable { projects, union }
    }
}

/// The 20 ordered pairs of distinct smells.
pub fn ordered_pairs() -> impl Iterator<Item = (SmellKind, SmellKind)> {
    SmellKind::ALL.into_iter().flat_map(|a| SmellKind::ALL.into_iter().filter(move |&b| b != a).map(move |b| (a, b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Value,
    Masked,
    Absent,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Value => "value",
            CellStatus::Masked => "masked",
            CellStatus::Absent => "absent",
        }
    }

    /// Status of a union outcome; contrasts that were not run count as absent.
    pub fn of(outcome: Option<&Outcome>) -> Self {
        match outcome {
            Some(Outcome::Tested(_)) => CellStatus::Value,
            Some(Outcome::Impossible) => CellStatus::Masked,
            Some(Outcome::AbsentInData) | None => CellStatus::Absent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Consumer,
    Provider,
}

impl Role {
    pub const ALL: [Role; 2] = [Role::Consumer, Role::Provider];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Consumer => "consumer",
            Role::Provider => "provider",
        }
    }
}

/// The contrast that compares smell `x` against its non-smelly counterpart
/// when `x` interacts with smell `y` in `role` through `dep_type`.
///
/// `None` on the diagonal.
pub fn specific_spec(
    x: SmellKind,
    y: SmellKind,
    dep_type: DependencyType,
    location: RelativeLocation,
    role: Role,
) -> Option<ContrastSpec> {
    if x == y {
        return None;
    }
    let canonical = SmellPair::all().contains(&SmellPair(x, y));
    let (pair, baseline, consumer) = if canonical {
        (SmellPair(x, y), InteractionType::NonCs1Cs2, FlowDirection::Forward)
    } else {
        (SmellPair(y, x), InteractionType::Cs1NonCs2, FlowDirection::Backward)
    };
    let direction = match role {
        Role::Consumer => consumer,
        Role::Provider => consumer.flip(),
    };
    Some(ContrastSpec { pair, baseline, location, dependent: Dependent::Specific { dep_type, direction } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Data,
    #[serde(rename = "FM")]
    Fm,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Data, Family::Fm];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Data => "Data",
            Family::Fm => "FM",
        }
    }

    pub fn dep_types(self) -> Vec<DependencyType> {
        use ArtifactKind::*;
        match self {
            Family::Data => vec![
                DependencyType::new(Relation::Call, FunctionalMethod, Accessor),
                DependencyType::new(Relation::Use, FunctionalMethod, Field),
            ],
            Family::Fm => vec![DependencyType::new(Relation::Call, FunctionalMethod, FunctionalMethod)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Strong,
    Weak,
    NotApplicable,
    /// Signs tie, or no cell qualified.
    Unclassified,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Strong => "S",
            Classification::Weak => "W",
            Classification::NotApplicable => "NA",
            Classification::Unclassified => "U",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypologyEntry {
    pub smell: SmellKind,
    pub family: Family,
    pub role: Role,
    pub location: RelativeLocation,
    pub classification: Classification,
    pub positive: usize,
    pub negative: usize,
    /// Cells not ruled out by smell semantics.
    pub possible: usize,
    pub tested: usize,
}

/// Classifies each smell by the sign of δ across its row of specific contrasts.
pub fn classify_typology(results: &StudyResults, mode: TypologyMode, location: RelativeLocation) -> Vec<TypologyEntry> {
    let mut out = Vec::new();
    for smell in SmellKind::ALL {
        for family in Family::ALL {
            for role in Role::ALL {
                let mut e = TypologyEntry {
                    smell,
                    family,
                    role,
                    location,
                    classification: Classification::Unclassified,
                    positive: 0,
                    negative: 0,
                    possible: 0,
                    tested: 0,
                };
                for other in SmellKind::ALL {
                    for dep_type in family.dep_types() {
                        let Some(spec) = specific_spec(smell, other, dep_type, location, role) else { continue };
                        if spec.is_impossible() {
                            continue;
                        }
                        e.possible += 1;
                        let Some(Outcome::Tested(t)) = results.union_outcome(&spec) else { continue };
                        e.tested += 1;
                        if mode == TypologyMode::Majority && !t.significant {
                            continue;
                        }
                        if t.delta > 0.0 {
                            e.positive += 1;
                        } else if t.delta < 0.0 {
                            e.negative += 1;
                        }
                    }
                }
                e.classification = if e.possible == 0 {
                    Classification::NotApplicable
                } else if e.positive > e.negative {
                    Classification::Strong
                } else if e.negative > e.positive {
                    Classification::Weak
                } else {
                    Classification::Unclassified
                };
                out.push(e);
            }
        }
    }
    out
}

fn contrast_label(baseline: InteractionType) -> String {
    format!("{} vs {}", InteractionType::Cs1Cs2.as_str(), baseline.as_str())
}

fn dependent_columns(d: Dependent) -> [String; 5] {
    match d {
        Dependent::General => ["general".into(), String::new(), String::new(), String::new(), String::new()],
        Dependent::Specific { dep_type, direction } => [
            "specific".into(),
            dep_type.relation.as_str().into(),
            dep_type.source_kind.as_str().into(),
            dep_type.target_kind.as_str().into(),
            direction.as_str().into(),
        ],
    }
}

fn spec_columns(spec: &ContrastSpec) -> Vec<String> {
    let mut row = vec![
        spec.pair.first().as_str().to_string(),
        spec.pair.second().as_str().to_string(),
        contrast_label(spec.baseline),
        spec.location.as_str().to_string(),
    ];
    row.extend(dependent_columns(spec.dependent));
    row
}

const SPEC_HEADER: [&str; 9] =
    ["cs1", "cs2", "contrast", "location", "variable", "relation", "source_kind", "target_kind", "direction"];

const TEST_HEADER: [&str; 11] =
    ["status", "U", "p", "p_method", "delta", "band", "median1", "median2", "n1", "n2", "significant"];

fn outcome_columns(outcome: Option<&Outcome>) -> Vec<String> {
    let mut row = vec![CellStatus::of(outcome).as_str().to_string()];
    match outcome.and_then(Outcome::tested) {
        Some(t) => row.extend([
            fmt_f(t.u),
            fmt_f(t.p),
            match t.p_method {
                csi_stats::PValueMethod::Exact => "exact".into(),
                csi_stats::PValueMethod::Normal => "normal".into(),
            },
            fmt_f(t.delta),
            t.band.as_str().to_string(),
            fmt_f(t.median1),
            fmt_f(t.median2),
            t.n1.to_string(),
            t.n2.to_string(),
            t.significant.to_string(),
        ]),
        None => row.extend(std::iter::repeat_n(String::new(), TEST_HEADER.len() - 1)),
    }
    row
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

struct Csv {
    path: PathBuf,
    w: csv::Writer<std::fs::File>,
}

impl Csv {
    fn create(path: PathBuf, header: &[&str]) -> Result<Self> {
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
        w.write_record(header).map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
        Ok(Csv { path, w })
    }

    fn row<I: IntoIterator<Item = S>, S: AsRef<[u8]>>(&mut self, row: I) -> Result<()> {
        self.w.write_record(row).map_err(|e| Error::io(&self.path, std::io::Error::other(e)))
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.w.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

fn header(parts: &[&[&'static str]]) -> Vec<&'static str> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

pub fn write_frequency(dir: &Path, table: &FrequencyTable) -> Result<PathBuf> {
    let mut csv = Csv::create(dir.join("frequency.csv"), &["scope", "cs1", "cs2", "interacting", "total", "percent"])?;
    let scopes =
        std::iter::once(("union", &table.union)).chain(table.projects.iter().map(|(id, cells)| (id.as_str(), cells)));
    for (scope, cells) in scopes {
        for c in cells {
            csv.row([
                scope.to_string(),
                c.cs1.as_str().into(),
                c.cs2.as_str().into(),
                c.frequency.interacting.to_string(),
                c.frequency.total.to_string(),
                fmt_opt(c.frequency.percent()),
            ])?;
        }
    }
    csv.finish()
}

/// Union results of every contrast, in analysis order.
pub fn write_contrasts(dir: &Path, results: &StudyResults) -> Result<PathBuf> {
    let mut csv = Csv::create(dir.join("contrasts.csv"), &header(&[&SPEC_HEADER, &TEST_HEADER]))?;
    for r in &results.union {
        let mut row = spec_columns(&r.spec);
        row.extend(outcome_columns(Some(&r.outcome)));
        csv.row(row)?;
    }
    csv.finish()
}

/// Pair × contrast matrix of the interaction-set size.
pub fn write_heatmap_general(dir: &Path, results: &StudyResults) -> Result<PathBuf> {
    let mut csv = Csv::create(
        dir.join("heatmap_general.csv"),
        &["pair", "contrast", "location", "status", "delta", "significant", "p"],
    )?;
    for pair in pairs_of(results) {
        for baseline in InteractionType::BASELINES {
            for location in RelativeLocation::ALL {
                let spec = ContrastSpec { pair, baseline, location, dependent: Dependent::General };
                let outcome = results.union_outcome(&spec);
                let t = outcome.and_then(Outcome::tested);
                csv.row([
                    pair.to_string(),
                    contrast_label(baseline),
                    location.as_str().into(),
                    CellStatus::of(outcome).as_str().into(),
                    t.map(|t| fmt_f(t.delta)).unwrap_or_default(),
                    t.map(|t| t.significant.to_string()).unwrap_or_default(),
                    t.map(|t| fmt_f(t.p)).unwrap_or_default(),
                ])?;
            }
        }
    }
    csv.finish()
}

/// Smell × smell matrices per dependency type, location and role.
pub fn write_heatmap_specific(dir: &Path, results: &StudyResults) -> Result<PathBuf> {
    let mut csv = Csv::create(
        dir.join("heatmap_specific.csv"),
        &[
            "relation",
            "source_kind",
            "target_kind",
            "location",
            "role",
            "row",
            "col",
            "status",
            "delta",
            "significant",
            "p",
            "pair",
            "contrast",
            "direction",
        ],
    )?;
    let pairs = pairs_of(results);
    for dep_type in crate::deps::all_valid_triples() {
        for location in RelativeLocation::ALL {
            for role in Role::ALL {
                for x in SmellKind::ALL {
                    for y in SmellKind::ALL {
                        let mut row = vec![
                            dep_type.relation.as_str().to_string(),
                            dep_type.source_kind.as_str().into(),
                            dep_type.target_kind.as_str().into(),
                            location.as_str().into(),
                            role.as_str().into(),
                            x.as_str().into(),
                            y.as_str().into(),
                        ];
                        let spec = specific_spec(x, y, dep_type, location, role).filter(|s| pairs.contains(&s.pair));
                        let Some(spec) = spec else {
                            let status = if x == y { CellStatus::Masked } else { CellStatus::Absent };
                            row.push(status.as_str().into());
                            row.extend(std::iter::repeat_n(String::new(), 6));
                            csv.row(row)?;
                            continue;
                        };
                        let outcome = results.union_outcome(&spec);
                        let t = outcome.and_then(Outcome::tested);
                        let Dependent::Specific { direction, .. } = spec.dependent else { unreachable!() };
                        row.extend([
                            CellStatus::of(outcome).as_str().to_string(),
                            t.map(|t| fmt_f(t.delta)).unwrap_or_default(),
                            t.map(|t| t.significant.to_string()).unwrap_or_default(),
                            t.map(|t| fmt_f(t.p)).unwrap_or_default(),
                            spec.pair.to_string(),
                            contrast_label(spec.baseline),
                            direction.as_str().into(),
                        ]);
                        csv.row(row)?;
                    }
                }
            }
        }
    }
    csv.finish()
}

fn pairs_of(results: &StudyResults) -> Vec<SmellPair> {
    let mut pairs: Vec<SmellPair> = results.union.iter().map(|r| r.spec.pair).collect();
    pairs.dedup();
    pairs
}

/// Significance rate and consistency score of every contrast across projects.
pub fn write_per_system(dir: &Path, results: &StudyResults) -> Result<PathBuf> {
    let mut csv = Csv::create(
        dir.join("per_system.csv"),
        &header(&[
            &SPEC_HEADER,
            &["status", "included_projects", "significant_projects", "significance_rate", "consistency_score"],
        ]),
    )?;
    let summaries: BTreeMap<&ContrastSpec, &PerSystemSummary> =
        results.per_system.iter().map(|s| (&s.spec, s)).collect();
    for r in &results.union {
        let mut row = spec_columns(&r.spec);
        match summaries.get(&r.spec) {
            Some(s) if s.included_projects > 0 => row.extend([
                CellStatus::Value.as_str().to_string(),
                s.included_projects.to_string(),
                s.significant_projects.to_string(),
                fmt_opt(s.significance_rate),
                fmt_opt(s.consistency_score),
            ]),
            other => {
                let status = if other.is_none() { CellStatus::Masked } else { CellStatus::Absent };
                row.push(status.as_str().into());
                row.push("0".into());
                row.push("0".into());
                row.extend([String::new(), String::new()]);
            }
        }
        csv.row(row)?;
    }
    csv.finish()
}

pub fn write_rejections(dir: &Path, results: &StudyResults) -> Result<PathBuf> {
    let mut csv = Csv::create(
        dir.join("rejection_counts.csv"),
        &["relation", "source_kind", "target_kind", "conducted", "rejected", "rejected_with_effect"],
    )?;
    for r in &results.rejections {
        csv.row([
            r.dep_type.relation.as_str().to_string(),
            r.dep_type.source_kind.as_str().into(),
            r.dep_type.target_kind.as_str().into(),
            r.conducted.to_string(),
            r.rejected.to_string(),
            r.rejected_with_effect.to_string(),
        ])?;
    }
    csv.finish()
}

pub fn write_typology(dir: &Path, entries: &[TypologyEntry]) -> Result<PathBuf> {
    let mut csv = Csv::create(
        dir.join("typology.csv"),
        &["smell", "family", "role", "location", "classification", "positive", "negative", "possible", "tested"],
    )?;
    for e in entries {
        csv.row([
            e.smell.as_str().to_string(),
            e.family.as_str().into(),
            e.role.as_str().into(),
            e.location.as_str().into(),
            e.classification.as_str().into(),
            e.positive.to_string(),
            e.negative.to_string(),
            e.possible.to_string(),
            e.tested.to_string(),
        ])?;
    }
    csv.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportIndex {
    pub format: String,
    pub version: u32,
    pub config: AnalysisConfig,
    pub projects: Vec<String>,
    pub tests_conducted: usize,
    pub files: Vec<String>,
}

/// Renders every report file into `dir` and writes `index.json` last.
pub fn write_report(
    dir: &Path,
    config: &AnalysisConfig,
    results: &StudyResults,
    frequency: &FrequencyTable,
) -> Result<ReportIndex> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut typology = classify_typology(results, config.typology_mode, RelativeLocation::Different);
    if config.same_class_typology {
        typology.extend(classify_typology(results, config.typology_mode, RelativeLocation::Same));
    }
    let written = [
        write_frequency(dir, frequency)?,
        write_contrasts(dir, results)?,
        write_heatmap_general(dir, results)?,
        write_heatmap_specific(dir, results)?,
        write_per_system(dir, results)?,
        write_rejections(dir, results)?,
        write_typology(dir, &typology)?,
    ];
    let index = ReportIndex {
        format: crate::facts::FORMAT.into(),
        version: crate::facts::VERSION,
        config: config.clone(),
        projects: results.projects.clone(),
        tests_conducted: results.tests_conducted(),
        files: written.iter().filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned())).collect(),
    };
    write_json(&dir.join("index.json"), &index)?;
    Ok(index)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Facts {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}
