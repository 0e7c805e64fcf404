//! Contrasts between CS1-CS2 records and a baseline interaction type.

use std::collections::BTreeMap;

use csi_stats::{
    cliffs_delta, consistency_score, mann_whitney_u_with, median, significance_rate, EffectBand, MannWhitneyOptions,
    PValueMethod,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::AnalysisConfig;
use crate::deps::{all_valid_triples, DependencyType};
use crate::interaction::{FlowDirection, InteractionRecord, InteractionType, RelativeLocation, SmellPair};
use crate::model::ArtifactKind;
use crate::smells::SmellKind;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "variable", rename_all = "snake_case")]
pub enum Dependent {
    /// Interaction-set size.
    General,
    /// Edges of one dependency type in one direction.
    Specific { dep_type: DependencyType, direction: FlowDirection },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContrastSpec {
    pub pair: SmellPair,
    pub baseline: InteractionType,
    pub location: RelativeLocation,
    pub dependent: Dependent,
}

impl ContrastSpec {
    /// General contrast plus one specific contrast per valid triple and direction.
    pub fn all_for(pair: SmellPair) -> Vec<ContrastSpec> {
        let mut dependents = vec![Dependent::General];
        for dep_type in all_valid_triples() {
            for direction in FlowDirection::ALL {
                dependents.push(Dependent::Specific { dep_type, direction });
            }
        }
        let mut out = Vec::new();
        for baseline in InteractionType::BASELINES {
            for location in RelativeLocation::ALL {
                for &dependent in &dependents {
                    out.push(ContrastSpec { pair, baseline, location, dependent });
                }
            }
        }
        out
    }

    /// Whether no corpus could ever produce data for this contrast.
    ///
    /// Two distinct classes never share a class, and a method-level side can
    /// only be a functional method, so some triples cannot connect the sides.
    pub fn is_impossible(&self) -> bool {
        let (a, b) = (self.pair.first(), self.pair.second());
        if self.location == RelativeLocation::Same && a.is_class_level() && b.is_class_level() {
            return true;
        }
        match self.dependent {
            Dependent::General => false,
            Dependent::Specific { dep_type, direction } => {
                let (from, to) = match direction {
                    FlowDirection::Forward => (a, b),
                    FlowDirection::Backward => (b, a),
                };
                !side_kinds(from).contains(&dep_type.source_kind) || !side_kinds(to).contains(&dep_type.target_kind)
            }
        }
    }
}

/// Artifact kinds that can appear in the closure of a smell's artifact.
fn side_kinds(smell: SmellKind) -> &'static [ArtifactKind] {
    use ArtifactKind::*;
    if smell.is_class_level() {
        &[Class, FunctionalMethod, Accessor, Constructor, Field]
    } else {
        &[FunctionalMethod]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub u: f64,
    pub p: f64,
    pub p_method: PValueMethod,
    pub delta: f64,
    pub band: EffectBand,
    pub median1: f64,
    pub median2: f64,
    pub n1: usize,
    pub n2: usize,
    pub significant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Tested(TestResult),
    /// Ruled out by smell semantics.
    Impossible,
    /// One of the two samples has no records.
    AbsentInData,
}

impl Outcome {
    pub fn tested(&self) -> Option<&TestResult> {
        match self {
            Outcome::Tested(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOptions {
    pub alpha: f64,
    pub mann_whitney: MannWhitneyOptions,
}

impl TestOptions {
    pub fn from_config(cfg: &AnalysisConfig) -> Self {
        TestOptions {
            alpha: cfg.alpha,
            mann_whitney: MannWhitneyOptions {
                exact_cutoff: cfg.exact_cutoff,
                continuity_correction: cfg.continuity_correction,
            },
        }
    }
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions { alpha: 0.05, mann_whitney: MannWhitneyOptions::default() }
    }
}

/// The dependent variable of one record.
pub fn measure(record: &InteractionRecord, dependent: Dependent) -> f64 {
    match dependent {
        Dependent::General => record.edges.len() as f64,
        Dependent::Specific { dep_type, direction } => record.count(dep_type, direction) as f64,
    }
}

/// Two-sample comparison of `x` (CS1-CS2) against `y` (baseline).
pub fn compare(x: &[f64], y: &[f64], opts: &TestOptions) -> Result<Outcome> {
    if x.is_empty() || y.is_empty() {
        return Ok(Outcome::AbsentInData);
    }
    let mw = mann_whitney_u_with(x, y, opts.mann_whitney)?;
    let cd = cliffs_delta(x, y)?;
    Ok(Outcome::Tested(TestResult {
        u: mw.u,
        p: mw.p,
        p_method: mw.method,
        delta: cd.delta,
        band: cd.band,
        median1: median(x).unwrap_or(f64::NAN),
        median2: median(y).unwrap_or(f64::NAN),
        n1: x.len(),
        n2: y.len(),
        significant: mw.p < opts.alpha,
    }))
}

/// Records of one pair and location, split by interaction type.
#[derive(Debug, Default)]
struct Groups<'r> {
    by_key: BTreeMap<(SmellPair, RelativeLocation, InteractionType), Vec<&'r InteractionRecord>>,
}

impl<'r> Groups<'r> {
    fn new(records: impl IntoIterator<Item = &'r InteractionRecord>) -> Self {
        let mut by_key: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for r in records {
            by_key.entry((r.pair, r.location, r.interaction_type)).or_default().push(r);
        }
        Groups { by_key }
    }

    fn values(&self, spec: &ContrastSpec, t: InteractionType) -> Vec<f64> {
        self.by_key
            .get(&(spec.pair, spec.location, t))
            .map(|rs| rs.iter().map(|r| measure(r, spec.dependent)).collect())
            .unwrap_or_default()
    }

    fn run(&self, spec: &ContrastSpec, opts: &TestOptions) -> Result<Outcome> {
        if spec.is_impossible() {
            return Ok(Outcome::Impossible);
        }
        compare(&self.values(spec, InteractionType::Cs1Cs2), &self.values(spec, spec.baseline), opts)
    }
}

/// Runs one contrast over `records` (any mix of pairs and projects).
pub fn run_contrast<'r>(
    records: impl IntoIterator<Item = &'r InteractionRecord>,
    spec: &ContrastSpec,
    opts: &TestOptions,
) -> Result<Outcome> {
    Groups::new(records).run(spec, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastResult {
    pub spec: ContrastSpec,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerSystemSummary {
    pub spec: ContrastSpec,
    /// Projects where the contrast could be tested.
    pub included_projects: usize,
    pub significant_projects: usize,
    pub significance_rate: Option<f64>,
    pub consistency_score: Option<f64>,
}

/// Tests rejecting the null hypothesis for one dependency type (union perspective).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionCount {
    pub dep_type: DependencyType,
    pub conducted: usize,
    pub rejected: usize,
    /// Rejections with at least a small effect.
    pub rejected_with_effect: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResults {
    pub alpha: f64,
    pub exact_cutoff: usize,
    pub continuity_correction: bool,
    pub projects: Vec<String>,
    pub union: Vec<ContrastResult>,
    pub per_system: Vec<PerSystemSummary>,
    pub rejections: Vec<RejectionCount>,
}

impl StudyResults {
    pub fn union_outcome(&self, spec: &ContrastSpec) -> Option<&Outcome> {
        self.union.iter().find(|r| r.spec == *spec).map(|r| &r.outcome)
    }

    pub fn tests_conducted(&self) -> usize {
        self.union.iter().filter(|r| r.outcome.tested().is_some()).count()
    }
}

pub fn rejection_counts(union: &[ContrastResult]) -> Vec<RejectionCount> {
    let mut counts: BTreeMap<DependencyType, RejectionCount> = all_valid_triples()
        .into_iter()
        .map(|t| (t, RejectionCount { dep_type: t, conducted: 0, rejected: 0, rejected_with_effect: 0 }))
        .collect();
    for r in union {
        let (Dependent::Specific { dep_type, .. }, Outcome::Tested(t)) = (r.spec.dependent, &r.outcome) else {
            continue;
        };
        let c = counts.get_mut(&dep_type).expect("specific contrasts use valid triples");
        c.conducted += 1;
        if t.significant {
            c.rejected += 1;
            if t.band != EffectBand::Negligible {
                c.rejected_with_effect += 1;
            }
        }
    }
    counts.into_values().collect()
}

/// Union and per-system analysis over the records of every project.
pub fn run_study(
    projects: &BTreeMap<String, Vec<InteractionRecord>>,
    pairs: &[SmellPair],
    opts: &TestOptions,
) -> Result<StudyResults> {
    let specs: Vec<ContrastSpec> = pairs.iter().flat_map(|&p| ContrastSpec::all_for(p)).collect();
    let union_groups = Groups::new(projects.values().flatten());
    let per_project: Vec<(&String, Groups<'_>)> =
        projects.iter().map(|(id, rs)| (id, Groups::new(rs.iter()))).collect();

    let rows: Vec<(ContrastResult, Option<PerSystemSummary>)> = specs
        .par_iter()
        .map(|spec| -> Result<_> {
            let outcome = union_groups.run(spec, opts)?;
            if outcome == Outcome::Impossible {
                return Ok((ContrastResult { spec: *spec, outcome }, None));
            }
            let mut significant = Vec::new();
            let mut deltas = Vec::new();
            for (_, g) in &per_project {
                if let Outcome::Tested(t) = g.run(spec, opts)? {
                    significant.push(t.significant);
                    deltas.push(t.delta);
                }
            }
            let summary = PerSystemSummary {
                spec: *spec,
                included_projects: deltas.len(),
                significant_projects: significant.iter().filter(|&&s| s).count(),
                significance_rate: significance_rate(&significant),
                consistency_score: consistency_score(&deltas),
            };
            Ok((ContrastResult { spec: *spec, outcome }, Some(summary)))
        })
        .collect::<Result<_>>()?;

    let (union, per_system): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let rejections = rejection_counts(&union);
    Ok(StudyResults {
        alpha: opts.alpha,
        exact_cutoff: opts.mann_whitney.exact_cutoff,
        continuity_correction: opts.mann_whitney.continuity_correction,
        projects: projects.keys().cloned().collect(),
        union,
        per_system: per_system.into_iter().flatten().collect(),
        rejections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deps::Relation;

    fn spec(pair: SmellPair, location: RelativeLocation, dependent: Dependent) -> ContrastSpec {
        ContrastSpec { pair, baseline: InteractionType::Cs1NonCs2, location, dependent }
    }

    #[test]
    fn contrast_count_per_pair() {
        // 2 baselines x 2 locations x (1 general + 31 triples x 2 directions)
        assert_eq!(ContrastSpec::all_for(SmellPair(SmellKind::GC, SmellKind::DC)).len(), 4 * 63);
    }

    #[test]
    fn impossible_cells() {
        use ArtifactKind::*;
        let gc_dc = SmellPair(SmellKind::GC, SmellKind::DC);
        assert!(spec(gc_dc, RelativeLocation::Same, Dependent::General).is_impossible());
        assert!(!spec(gc_dc, RelativeLocation::Different, Dependent::General).is_impossible());

        let use_fm_field = DependencyType::new(Relation::Use, FunctionalMethod, Field);
        let gc_bm = SmellPair(SmellKind::GC, SmellKind::BM);
        let fwd = Dependent::Specific { dep_type: use_fm_field, direction: FlowDirection::Forward };
        let bwd = Dependent::Specific { dep_type: use_fm_field, direction: FlowDirection::Backward };
        assert!(spec(gc_bm, RelativeLocation::Different, fwd).is_impossible());
        assert!(!spec(gc_bm, RelativeLocation::Different, bwd).is_impossible());

        let call_fm_fm = DependencyType::new(Relation::Call, FunctionalMethod, FunctionalMethod);
        let bm_fe = SmellPair(SmellKind::BM, SmellKind::FE);
        let d = Dependent::Specific { dep_type: call_fm_fm, direction: FlowDirection::Forward };
        assert!(!spec(bm_fe, RelativeLocation::Same, d).is_impossible());
        let ctor = DependencyType::new(Relation::Call, Constructor, FunctionalMethod);
        let d = Dependent::Specific { dep_type: ctor, direction: FlowDirection::Forward };
        assert!(spec(bm_fe, RelativeLocation::Different, d).is_impossible());
    }

    #[test]
    fn compare_marks_absent_and_significance() {
        let opts = TestOptions::default();
        assert_eq!(compare(&[], &[1.0], &opts).unwrap(), Outcome::AbsentInData);
        let x = vec![5.0; 12];
        let y = vec![1.0; 12];
        let t = *compare(&x, &y, &opts).unwrap().tested().unwrap();
        assert_eq!(t.delta, 1.0);
        assert!(t.significant);
        assert_eq!((t.median1, t.median2, t.n1, t.n2), (5.0, 1.0, 12, 12));
        let t = *compare(&x, &x, &opts).unwrap().tested().unwrap();
        assert_eq!(t.delta, 0.0);
        assert!(!t.significant);
        let zeros = vec![0.0; 4];
        let t = *compare(&zeros, &zeros, &opts).unwrap().tested().unwrap();
        assert_eq!((t.delta, t.significant), (0.0, false));
    }
}
