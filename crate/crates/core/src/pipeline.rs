//! Stage orchestration over a corpus manifest.
//!
//! Each stage reads the files written by the previous one, so any stage can be
//! rerun on its own. Layout under the output directory:
//!
//! ```text
//! facts/projects.jsonl      facts/artifacts.jsonl    facts/dependencies.jsonl
//! facts/smells.jsonl        facts/interactions.jsonl facts/metrics.csv
//! analysis/frequency.json   analysis/results.json
//! report/*.csv              report/index.json
//! samples/samples.jsonl     samples/plan.json
//! run_summary.json
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, CorpusManifest, ProjectEntry};
use crate::deps::{extract_dependencies, DependencyGraph};
use crate::error::{Error, Result};
use crate::facts::{self, ArtifactFact, DependencyFact, FactHeader, ProjectFact, ProjectStatus, SmellFact};
use crate::interaction::{build_datasets, interaction_frequency, InteractionRecord, SmellPair};
use crate::metrics::{compute_metrics, MetricSet};
use crate::model::{build_code_model, ArtifactTable, ModelCounts};
use crate::report::{self, FrequencyCell, FrequencyTable, ReportIndex};
use crate::smells::{detect_all, SmellKind, SmellSet};
use crate::study::{run_study, StudyResults, TestOptions};

pub const PROJECTS: &str = "projects";
pub const ARTIFACTS: &str = "artifacts";
pub const DEPENDENCIES: &str = "dependencies";
pub const SMELLS: &str = "smells";
pub const INTERACTIONS: &str = "interactions";
pub const SAMPLES: &str = "samples";

/// Paths of every file the pipeline reads or writes.
#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn fact(&self, kind: &str) -> PathBuf {
        self.root.join("facts").join(format!("{kind}.jsonl"))
    }

    pub fn metrics_csv(&self) -> PathBuf {
        self.root.join("facts").join("metrics.csv")
    }

    pub fn frequency(&self) -> PathBuf {
        self.root.join("analysis").join("frequency.json")
    }

    pub fn results(&self) -> PathBuf {
        self.root.join("analysis").join("results.json")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.root.join("report")
    }

    pub fn samples(&self) -> PathBuf {
        self.root.join("samples").join("samples.jsonl")
    }

    pub fn sample_plan(&self) -> PathBuf {
        self.root.join("samples").join("plan.json")
    }

    pub fn run_summary(&self) -> PathBuf {
        self.root.join("run_summary.json")
    }
}

/// Outcome of one or more stages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageOutcome {
    pub skipped_projects: Vec<String>,
}

impl StageOutcome {
    pub fn is_partial(&self) -> bool {
        !self.skipped_projects.is_empty()
    }
}

type ProjectFacts = (ProjectFact, Vec<ArtifactFact>, Vec<DependencyFact>);
type ProjectFrequency = (String, Vec<FrequencyCell>);

#[derive(Debug, Clone)]
pub struct Pipeline {
    pub manifest: CorpusManifest,
    pub config: AnalysisConfig,
    pub layout: Layout,
    /// Restricts every stage to these project ids.
    pub projects: Option<BTreeSet<String>>,
    pub pairs: Vec<SmellPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisFile<T> {
    pub header: FactHeader,
    pub data: T,
}

impl Pipeline {
    pub fn new(manifest: CorpusManifest, config: AnalysisConfig) -> Result<Self> {
        config.validate()?;
        let layout = Layout::new(config.out_dir.clone());
        Ok(Pipeline { manifest, config, layout, projects: None, pairs: SmellPair::all() })
    }

    pub fn restrict_projects(&mut self, ids: &[String]) -> Result<()> {
        if ids.is_empty() {
            return Ok(());
        }
        for id in ids {
            if !self.manifest.projects.iter().any(|p| &p.id == id) {
                return Err(Error::Config(format!("unknown project `{id}`")));
            }
        }
        self.projects = Some(ids.iter().cloned().collect());
        Ok(())
    }

    pub fn restrict_pairs(&mut self, pairs: &[SmellPair]) {
        if !pairs.is_empty() {
            self.pairs = SmellPair::all().into_iter().filter(|p| pairs.contains(p)).collect();
        }
    }

    fn selected(&self, id: &str) -> bool {
        self.projects.as_ref().is_none_or(|s| s.contains(id))
    }

    fn entries(&self) -> Vec<&ProjectEntry> {
        self.manifest.projects.iter().filter(|p| self.selected(&p.id)).collect()
    }

    /// Parses each project, computes metrics and writes artifact, dependency and project facts.
    pub fn extract(&self) -> Result<StageOutcome> {
        self.manifest.validate()?;
        let extracted: Vec<Result<ProjectFacts>> = self
            .entries()
            .par_iter()
            .map(|p| match build_code_model(&p.id, &p.root, &self.manifest, &self.config) {
                Ok(model) => {
                    let metrics = compute_metrics(&model, &self.config.thresholds);
                    let graph = extract_dependencies(&model);
                    info!("{}: {} artifacts, {} dependencies", p.id, model.artifacts.len(), graph.len());
                    let project = ProjectFact {
                        project: p.id.clone(),
                        status: ProjectStatus::Ok,
                        reason: None,
                        counts: model.counts,
                        diagnostics: model.diagnostics.clone(),
                    };
                    Ok((
                        project,
                        facts::artifact_facts(&model, &metrics),
                        facts::dependency_facts(&p.id, &model.artifacts, &graph),
                    ))
                }
                Err(e @ Error::Config(_)) => Err(e),
                Err(e) => {
                    warn!("{}: skipped: {e}", p.id);
                    let project = ProjectFact {
                        project: p.id.clone(),
                        status: ProjectStatus::Skipped,
                        reason: Some(e.to_string()),
                        counts: ModelCounts::default(),
                        diagnostics: Vec::new(),
                    };
                    Ok((project, Vec::new(), Vec::new()))
                }
            })
            .collect();
        let mut projects = Vec::new();
        let mut artifacts = Vec::new();
        let mut dependencies = Vec::new();
        for r in extracted {
            let (p, a, d) = r?;
            projects.push(p);
            artifacts.extend(a);
            dependencies.extend(d);
        }
        let outcome = StageOutcome {
            skipped_projects: projects
                .iter()
                .filter(|p| p.status == ProjectStatus::Skipped)
                .map(|p| p.project.clone())
                .collect(),
        };
        facts::write_jsonl(&self.layout.fact(PROJECTS), PROJECTS, &self.config, &projects)?;
        facts::write_jsonl(&self.layout.fact(ARTIFACTS), ARTIFACTS, &self.config, &artifacts)?;
        facts::write_jsonl(&self.layout.fact(DEPENDENCIES), DEPENDENCIES, &self.config, &dependencies)?;
        facts::write_metrics_csv(&self.layout.metrics_csv(), &artifacts)?;
        Ok(outcome)
    }

    fn read_projects(&self) -> Result<(Vec<ProjectFact>, StageOutcome)> {
        let (_, projects): (_, Vec<ProjectFact>) = facts::read_jsonl(&self.layout.fact(PROJECTS), PROJECTS)?;
        let projects: Vec<ProjectFact> = projects.into_iter().filter(|p| self.selected(&p.project)).collect();
        let skipped =
            projects.iter().filter(|p| p.status == ProjectStatus::Skipped).map(|p| p.project.clone()).collect();
        Ok((projects, StageOutcome { skipped_projects: skipped }))
    }

    fn ok_projects(projects: &[ProjectFact]) -> Vec<String> {
        projects.iter().filter(|p| p.status == ProjectStatus::Ok).map(|p| p.project.clone()).collect()
    }

    /// Artifact tables and metrics of the selected, successfully extracted projects.
    fn load_tables(&self, ids: &[String]) -> Result<BTreeMap<String, (ArtifactTable, MetricSet)>> {
        let path = self.layout.fact(ARTIFACTS);
        let (_, artifacts): (_, Vec<ArtifactFact>) = facts::read_jsonl(&path, ARTIFACTS)?;
        let grouped = group(&artifacts, |a| &a.project);
        let mut out = BTreeMap::new();
        for id in ids {
            let rows = grouped.get(id.as_str()).map(Vec::as_slice).unwrap_or_default();
            let table = facts::table_from_facts(rows, &path)?;
            let metrics = facts::metrics_from_facts(&table, rows);
            out.insert(id.clone(), (table, metrics));
        }
        Ok(out)
    }

    /// Applies the detection strategies to the persisted metrics.
    pub fn detect(&self) -> Result<StageOutcome> {
        let (projects, outcome) = self.read_projects()?;
        let tables = self.load_tables(&Self::ok_projects(&projects))?;
        let mut smells = Vec::new();
        for (id, (table, metrics)) in &tables {
            let set = detect_all(table, metrics, &self.config.thresholds);
            info!("{id}: {} smell instances", set.instances().len());
            smells.extend(facts::smell_facts(id, table, &set));
        }
        facts::write_jsonl(&self.layout.fact(SMELLS), SMELLS, &self.config, &smells)?;
        Ok(outcome)
    }

    /// Builds interaction records and frequencies from dependencies and smells.
    pub fn interact(&self) -> Result<StageOutcome> {
        let (projects, outcome) = self.read_projects()?;
        let ids = Self::ok_projects(&projects);
        let tables = self.load_tables(&ids)?;
        let dep_path = self.layout.fact(DEPENDENCIES);
        let (_, deps): (_, Vec<DependencyFact>) = facts::read_jsonl(&dep_path, DEPENDENCIES)?;
        let smell_path = self.layout.fact(SMELLS);
        let (_, smells): (_, Vec<SmellFact>) = facts::read_jsonl(&smell_path, SMELLS)?;
        let deps = group(&deps, |d| &d.project);
        let smells = group(&smells, |s| &s.project);

        let mut inputs: Vec<(&String, &ArtifactTable, DependencyGraph, SmellSet)> = Vec::new();
        for (id, (table, _)) in &tables {
            let d = deps.get(id.as_str()).map(Vec::as_slice).unwrap_or_default();
            let s = smells.get(id.as_str()).map(Vec::as_slice).unwrap_or_default();
            inputs.push((
                id,
                table,
                facts::graph_from_facts(table, d, &dep_path)?,
                facts::smells_from_facts(table, s, &smell_path)?,
            ));
        }
        let built: Vec<(Vec<InteractionRecord>, ProjectFrequency)> = inputs
            .par_iter()
            .map(|(id, table, graph, smells)| {
                let records: Vec<InteractionRecord> =
                    build_datasets(id, table, graph, smells, &self.pairs).into_values().flatten().collect();
                let cells = report::ordered_pairs()
                    .map(|(cs1, cs2)| FrequencyCell {
                        cs1,
                        cs2,
                        frequency: interaction_frequency(table, graph, smells, cs1, cs2),
                    })
                    .collect();
                (records, ((*id).clone(), cells))
            })
            .collect();
        let mut records = Vec::new();
        let mut cells = BTreeMap::new();
        for (r, (id, c)) in built {
            records.extend(r);
            cells.insert(id, c);
        }
        facts::write_jsonl(&self.layout.fact(INTERACTIONS), INTERACTIONS, &self.config, &records)?;
        let frequency = AnalysisFile {
            header: facts::header("frequency", &self.config),
            data: FrequencyTable::from_projects(cells),
        };
        report::write_json(&self.layout.frequency(), &frequency)?;
        Ok(outcome)
    }

    /// Runs every contrast over the union of projects and per project.
    pub fn analyze(&self) -> Result<StageOutcome> {
        let (projects, outcome) = self.read_projects()?;
        let ids = Self::ok_projects(&projects);
        let (_, records): (_, Vec<InteractionRecord>) =
            facts::read_jsonl(&self.layout.fact(INTERACTIONS), INTERACTIONS)?;
        let mut by_project: BTreeMap<String, Vec<InteractionRecord>> =
            ids.iter().map(|id| (id.clone(), Vec::new())).collect();
        for r in records {
            if !self.pairs.contains(&r.pair) {
                continue;
            }
            if let Some(v) = by_project.get_mut(&r.project) {
                v.push(r);
            }
        }
        let results = run_study(&by_project, &self.pairs, &TestOptions::from_config(&self.config))?;
        info!("{} tests conducted", results.tests_conducted());
        let file = AnalysisFile { header: facts::header("results", &self.config), data: results };
        report::write_json(&self.layout.results(), &file)?;
        Ok(outcome)
    }

    pub fn read_results(&self) -> Result<StudyResults> {
        let file: AnalysisFile<StudyResults> = report::read_json(&self.layout.results())?;
        Ok(file.data)
    }

    pub fn read_frequency(&self) -> Result<FrequencyTable> {
        let file: AnalysisFile<FrequencyTable> = report::read_json(&self.layout.frequency())?;
        Ok(file.data)
    }

    /// Renders the report bundle and the run summary from persisted results.
    pub fn report(&self) -> Result<StageOutcome> {
        let (projects, outcome) = self.read_projects()?;
        let results = self.read_results()?;
        let frequency = self.read_frequency()?;
        let index = report::write_report(&self.layout.report_dir(), &self.config, &results, &frequency)?;
        let (_, smells): (_, Vec<SmellFact>) = facts::read_jsonl(&self.layout.fact(SMELLS), SMELLS)?;
        let summary = RunSummary::new(&self.config, &projects, &smells, &results, &index);
        report::write_json(&self.layout.run_summary(), &summary)?;
        Ok(outcome)
    }

    /// Draws the stratified validation sample of each smell.
    pub fn sample(&self) -> Result<StageOutcome> {
        let (_, outcome) = self.read_projects()?;
        let (_, smells): (_, Vec<SmellFact>) = facts::read_jsonl(&self.layout.fact(SMELLS), SMELLS)?;
        let mut chosen = Vec::new();
        let mut plan = Vec::new();
        for (i, kind) in SmellKind::ALL.into_iter().enumerate() {
            let mut strata: BTreeMap<String, Vec<&SmellFact>> = BTreeMap::new();
            for s in smells.iter().filter(|s| s.kind == kind && self.selected(&s.project)) {
                strata.entry(s.project.clone()).or_default().push(s);
            }
            let counts: BTreeMap<String, usize> = strata.iter().map(|(k, v)| (k.clone(), v.len())).collect();
            let population: usize = counts.values().sum();
            let size = if population == 0 {
                0
            } else {
                csi_stats::sample_size(population as u64, self.config.sample_confidence, self.config.sample_margin)?
                    as usize
            };
            let picks = csi_stats::stratified_sample(&counts, size, self.config.seed.wrapping_add(i as u64))?;
            for (project, indices) in &picks {
                chosen.extend(indices.iter().map(|&j| strata[project][j].clone()));
            }
            plan.push(SamplePlan {
                smell: kind,
                population,
                sample_size: size,
                allocation: picks.into_iter().map(|(k, v)| (k, v.len())).collect(),
            });
        }
        facts::write_jsonl(&self.layout.samples(), SAMPLES, &self.config, &chosen)?;
        let file = AnalysisFile { header: facts::header("sample-plan", &self.config), data: plan };
        report::write_json(&self.layout.sample_plan(), &file)?;
        Ok(outcome)
    }

    pub fn run_all(&self) -> Result<StageOutcome> {
        let outcome = self.extract()?;
        self.detect()?;
        self.interact()?;
        self.analyze()?;
        self.report()?;
        self.sample()?;
        Ok(outcome)
    }
}

fn group<'a, T>(items: &'a [T], key: impl Fn(&'a T) -> &'a String) -> BTreeMap<&'a str, Vec<&'a T>> {
    let mut out: BTreeMap<&str, Vec<&T>> = BTreeMap::new();
    for item in items {
        out.entry(key(item).as_str()).or_default().push(item);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub smell: SmellKind,
    pub population: usize,
    pub sample_size: usize,
    pub allocation: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: AnalysisConfig,
    pub projects_ok: usize,
    pub projects_skipped: Vec<SkippedProject>,
    pub totals: ModelCounts,
    pub smells: BTreeMap<SmellKind, usize>,
    pub contrasts: ContrastCounts,
    pub report_files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedProject {
    pub project: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContrastCounts {
    pub tested: usize,
    pub impossible: usize,
    pub absent_in_data: usize,
}

impl RunSummary {
    fn new(
        config: &AnalysisConfig,
        projects: &[ProjectFact],
        smells: &[SmellFact],
        results: &StudyResults,
        index: &ReportIndex,
    ) -> Self {
        let mut totals = ModelCounts::default();
        let mut skipped = Vec::new();
        for p in projects {
            match p.status {
                ProjectStatus::Ok => {
                    totals.noc += p.counts.noc;
                    totals.nom += p.counts.nom;
                    totals.loc += p.counts.loc;
                }
                ProjectStatus::Skipped => skipped
                    .push(SkippedProject { project: p.project.clone(), reason: p.reason.clone().unwrap_or_default() }),
            }
        }
        let included: BTreeSet<&str> = projects.iter().map(|p| p.project.as_str()).collect();
        let mut counts: BTreeMap<SmellKind, usize> = SmellKind::ALL.into_iter().map(|k| (k, 0)).collect();
        for s in smells.iter().filter(|s| included.contains(s.project.as_str())) {
            *counts.entry(s.kind).or_default() += 1;
        }
        let mut contrasts = ContrastCounts::default();
        for r in &results.union {
            match r.outcome {
                crate::study::Outcome::Tested(_) => contrasts.tested += 1,
                crate::study::Outcome::Impossible => contrasts.impossible += 1,
                crate::study::Outcome::AbsentInData => contrasts.absent_in_data += 1,
            }
        }
        RunSummary {
            config: config.clone(),
            projects_ok: projects.len() - skipped.len(),
            projects_skipped: skipped,
            totals,
            smells: counts,
            contrasts,
            report_files: index.files.clone(),
        }
    }
}
