//! Newline-delimited JSON fact files.
//!
//! Every file starts with a header line naming the record kind, the format
//! version and the active configuration. Records refer to artifacts by id, so
//! each stage can be rerun from the files of the previous one.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::deps::{DependencyEdge, DependencyGraph, DependencyType, Relation};
use crate::error::{Error, Result};
use crate::metrics::{ClassMetrics, MethodMetrics, MetricSet};
use crate::model::{
    Artifact, ArtifactKind, ArtifactTable, CodeModel, Diagnostic, Location, ModelCounts, Modifiers, Site,
};
use crate::smells::{Evidence, SmellInstance, SmellKind, SmellSet};

pub const FORMAT: &str = "csi-facts";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactHeader {
    pub format: String,
    pub version: u32,
    pub kind: String,
    pub config: AnalysisConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactFact {
    pub project: String,
    pub id: String,
    pub kind: ArtifactKind,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declaring_type: Option<String>,
    pub file: String,
    pub start_line: u32,
    pub end_line: u32,
    pub modifiers: Modifiers,
    pub anonymous: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method_metrics: Option<MethodMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_metrics: Option<ClassMetrics>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyFact {
    pub project: String,
    pub relation: Relation,
    pub source_kind: ArtifactKind,
    pub target_kind: ArtifactKind,
    pub source: String,
    pub target: String,
    pub site: Site,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmellFact {
    pub project: String,
    pub kind: SmellKind,
    pub artifact: String,
    pub evidence: Evidence,
}

/// Extraction outcome of one project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectFact {
    pub project: String,
    pub status: ProjectStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub counts: ModelCounts,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectStatus {
    Ok,
    Skipped,
}

pub fn header(kind: &str, config: &AnalysisConfig) -> FactHeader {
    FactHeader { format: FORMAT.into(), version: VERSION, kind: kind.into(), config: config.clone() }
}

pub fn write_jsonl<T: Serialize>(path: &Path, kind: &str, config: &AnalysisConfig, records: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    put(&mut w, &header(kind, config)).map_err(|e| Error::io(path, e))?;
    for r in records {
        put(&mut w, r).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn put<W: Write, T: Serialize + ?Sized>(w: &mut W, value: &T) -> std::io::Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    w.write_all(b"\n")
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<(FactHeader, Vec<T>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, message: String| Error::Facts { path: path.to_path_buf(), line, message };
    let mut lines = BufReader::new(file).lines();
    let first = lines.next().ok_or_else(|| bad(1, "missing header".into()))?.map_err(|e| Error::io(path, e))?;
    let head: FactHeader = serde_json::from_str(&first).map_err(|e| bad(1, e.to_string()))?;
    if head.format != FORMAT || head.version != VERSION || head.kind != kind {
        return Err(bad(
            1,
            format!("expected {FORMAT} v{VERSION} `{kind}`, found {} v{} `{}`", head.format, head.version, head.kind),
        ));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| bad(i + 2, e.to_string()))?);
    }
    Ok((head, out))
}

pub fn artifact_facts(model: &CodeModel, metrics: &MetricSet) -> Vec<ArtifactFact> {
    let table = &model.artifacts;
    table
        .iter()
        .map(|(i, a)| ArtifactFact {
            project: model.project_id.clone(),
            id: a.id.clone(),
            kind: a.kind,
            name: a.name.clone(),
            declaring_type: a.declaring_type.map(|d| table.get(d).id.clone()),
            file: a.location.file.clone(),
            start_line: a.location.start_line,
            end_line: a.location.end_line,
            modifiers: a.modifiers,
            anonymous: a.anonymous,
            method_metrics: metrics.methods.get(&i).copied(),
            class_metrics: metrics.classes.get(&i).copied(),
        })
        .collect()
}

/// Rebuilds a project's artifact table; `facts` must be in their written order.
pub fn table_from_facts(facts: &[&ArtifactFact], path: &Path) -> Result<ArtifactTable> {
    let position: HashMap<&str, u32> = facts.iter().enumerate().map(|(i, f)| (f.id.as_str(), i as u32)).collect();
    let mut items = Vec::with_capacity(facts.len());
    for (line, f) in facts.iter().enumerate() {
        let declaring_type = match &f.declaring_type {
            None => None,
            Some(d) => Some(crate::model::ArtifactIdx(*position.get(d.as_str()).ok_or_else(|| Error::Facts {
                path: path.to_path_buf(),
                line: line + 2,
                message: format!("unknown declaring type `{d}`"),
            })?)),
        };
        items.push(Artifact {
            id: f.id.clone(),
            kind: f.kind,
            name: f.name.clone(),
            declaring_type,
            location: Location { file: f.file.clone(), start_line: f.start_line, end_line: f.end_line },
            modifiers: f.modifiers,
            anonymous: f.anonymous,
        });
    }
    Ok(ArtifactTable::from_artifacts(items))
}

pub fn metrics_from_facts(table: &ArtifactTable, facts: &[&ArtifactFact]) -> MetricSet {
    let mut set = MetricSet::default();
    for f in facts {
        let Some(i) = table.lookup(&f.id) else { continue };
        if let Some(m) = f.method_metrics {
            set.methods.insert(i, m);
        }
        if let Some(c) = f.class_metrics {
            set.classes.insert(i, c);
        }
    }
    set
}

pub fn dependency_facts(project: &str, table: &ArtifactTable, graph: &DependencyGraph) -> Vec<DependencyFact> {
    graph
        .edges()
        .iter()
        .map(|e| DependencyFact {
            project: project.to_string(),
            relation: e.dep_type.relation,
            source_kind: e.dep_type.source_kind,
            target_kind: e.dep_type.target_kind,
            source: table.get(e.source).id.clone(),
            target: table.get(e.target).id.clone(),
            site: e.site.clone(),
        })
        .collect()
}

pub fn graph_from_facts(table: &ArtifactTable, facts: &[&DependencyFact], path: &Path) -> Result<DependencyGraph> {
    let mut edges = Vec::with_capacity(facts.len());
    for (line, f) in facts.iter().enumerate() {
        let bad = |message: String| Error::Facts { path: path.to_path_buf(), line: line + 2, message };
        let source = table.lookup(&f.source).ok_or_else(|| bad(format!("unknown artifact `{}`", f.source)))?;
        let target = table.lookup(&f.target).ok_or_else(|| bad(format!("unknown artifact `{}`", f.target)))?;
        let dep_type = DependencyType::new(f.relation, f.source_kind, f.target_kind);
        if !crate::deps::validate_triple(dep_type) {
            return Err(bad(format!("invalid dependency type {dep_type}")));
        }
        edges.push(DependencyEdge { dep_type, source, target, site: f.site.clone() });
    }
    Ok(DependencyGraph::new(edges, table))
}

pub fn smell_facts(project: &str, table: &ArtifactTable, smells: &SmellSet) -> Vec<SmellFact> {
    smells
        .instances()
        .iter()
        .map(|s| SmellFact {
            project: project.to_string(),
            kind: s.kind,
            artifact: table.get(s.artifact).id.clone(),
            evidence: s.evidence.clone(),
        })
        .collect()
}

pub fn smells_from_facts(table: &ArtifactTable, facts: &[&SmellFact], path: &Path) -> Result<SmellSet> {
    let mut out = Vec::with_capacity(facts.len());
    for (line, f) in facts.iter().enumerate() {
        let artifact = table.lookup(&f.artifact).ok_or_else(|| Error::Facts {
            path: path.to_path_buf(),
            line: line + 2,
            message: format!("unknown artifact `{}`", f.artifact),
        })?;
        out.push(SmellInstance { kind: f.kind, artifact, evidence: f.evidence.clone() });
    }
    Ok(SmellSet::new(out))
}

const METRIC_COLUMNS: [&str; 19] = [
    "project",
    "id",
    "kind",
    "LOC",
    "CYCLO",
    "MAXNESTING",
    "NOAV",
    "ATFD_m",
    "LAA",
    "FDP",
    "WMC",
    "TCC",
    "ATFD_c",
    "LOC_c",
    "NOAP",
    "NOAM",
    "WOC",
    "NOM",
    "BM_count",
];

/// One row per measured artifact; columns that do not apply stay empty.
pub fn write_metrics_csv(path: &Path, facts: &[ArtifactFact]) -> Result<()> {
    let csv_err = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(METRIC_COLUMNS).map_err(csv_err)?;
    for f in facts {
        if f.method_metrics.is_none() && f.class_metrics.is_none() {
            continue;
        }
        let mut row = vec![f.project.clone(), f.id.clone(), f.kind.as_str().to_string()];
        match f.method_metrics {
            Some(m) => row.extend([
                m.loc.to_string(),
                m.cyclo.to_string(),
                m.maxnesting.to_string(),
                m.noav.to_string(),
                m.atfd.to_string(),
                m.laa.to_string(),
                m.fdp.to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 7)),
        }
        match f.class_metrics {
            Some(c) => row.extend([
                c.wmc.to_string(),
                c.tcc.to_string(),
                c.atfd.to_string(),
                c.loc.to_string(),
                c.noap.to_string(),
                c.noam.to_string(),
                c.woc.to_string(),
                c.nom.to_string(),
                c.bm_count.to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 9)),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
