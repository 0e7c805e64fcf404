//! Thresholds, analysis settings and the corpus manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of a threshold range a rule compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// The metric must be below the threshold (`<`, `<=`).
    Below,
    /// The metric must exceed the threshold (`>`, `>=`).
    Above,
}

/// Picks the stricter end of a threshold range: the lower bound for
/// "must be below" rules, the upper bound for "must exceed" rules.
pub fn stricter_bound(low: f64, high: f64, comparison: Comparison) -> f64 {
    let (lo, hi) = if low <= high { (low, high) } else { (high, low) };
    match comparison {
        Comparison::Below => lo,
        Comparison::Above => hi,
    }
}

/// Named detection thresholds. Defaults follow the published metric-based
/// detection strategies; every value can be overridden from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    #[serde(rename = "FEW_upper")]
    pub few_upper: f64,
    #[serde(rename = "FEW_lower")]
    pub few_lower: f64,
    #[serde(rename = "ONE_THIRD")]
    pub one_third: f64,
    #[serde(rename = "HALF")]
    pub half: f64,
    #[serde(rename = "HIGH_WMC")]
    pub high_wmc: f64,
    #[serde(rename = "VERY_HIGH_WMC")]
    pub very_high_wmc: f64,
    #[serde(rename = "HIGH_METHOD_LOC")]
    pub high_method_loc: f64,
    #[serde(rename = "HIGH_CYCLO_RATIO")]
    pub high_cyclo_ratio: f64,
    #[serde(rename = "SEVERAL")]
    pub several: f64,
    #[serde(rename = "MANY")]
    pub many: f64,
    #[serde(rename = "MANY_ATTR")]
    pub many_attr: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            few_upper: 5.0,
            few_lower: 2.0,
            one_third: 0.33,
            half: 0.5,
            high_wmc: 31.0,
            very_high_wmc: 47.0,
            high_method_loc: 65.0,
            high_cyclo_ratio: 0.24,
            several: 5.0,
            many: 7.0,
            many_attr: 10.0,
        }
    }
}

/// A threshold as written in a config file: a single number or a `[low, high]` range.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ThresholdValue {
    Single(f64),
    Range([f64; 2]),
}

impl ThresholdValue {
    fn resolve(self, comparison: Comparison) -> f64 {
        match self {
            ThresholdValue::Single(v) => v,
            ThresholdValue::Range([a, b]) => stricter_bound(a, b, comparison),
        }
    }
}

impl ThresholdConfig {
    /// Comparison direction of each key, used to resolve ranges.
    const KEYS: [(&'static str, Comparison); 11] = [
        ("FEW_upper", Comparison::Above),
        ("FEW_lower", Comparison::Below),
        ("ONE_THIRD", Comparison::Below),
        ("HALF", Comparison::Below),
        ("HIGH_WMC", Comparison::Below),
        ("VERY_HIGH_WMC", Comparison::Above),
        ("HIGH_METHOD_LOC", Comparison::Above),
        ("HIGH_CYCLO_RATIO", Comparison::Above),
        ("SEVERAL", Comparison::Above),
        ("MANY", Comparison::Above),
        ("MANY_ATTR", Comparison::Above),
    ];

    /// Applies overrides on top of the defaults. `FEW = [lo, hi]` sets both
    /// `FEW_lower` and `FEW_upper` by the stricter-bound rule.
    pub fn with_overrides(entries: &BTreeMap<String, ThresholdValue>) -> Result<Self> {
        let mut cfg = ThresholdConfig::default();
        for (key, value) in entries {
            if key == "FEW" {
                cfg.few_upper = value.resolve(Comparison::Above);
                cfg.few_lower = value.resolve(Comparison::Below);
                continue;
            }
            let Some(&(_, comparison)) = Self::KEYS.iter().find(|(k, _)| k == key) else {
                return Err(Error::Config(format!("unknown threshold `{key}`")));
            };
            *cfg.slot_mut(key) = value.resolve(comparison);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn slot_mut(&mut self, key: &str) -> &mut f64 {
        match key {
            "FEW_upper" => &mut self.few_upper,
            "FEW_lower" => &mut self.few_lower,
            "ONE_THIRD" => &mut self.one_third,
            "HALF" => &mut self.half,
            "HIGH_WMC" => &mut self.high_wmc,
            "VERY_HIGH_WMC" => &mut self.very_high_wmc,
            "HIGH_METHOD_LOC" => &mut self.high_method_loc,
            "HIGH_CYCLO_RATIO" => &mut self.high_cyclo_ratio,
            "SEVERAL" => &mut self.several,
            "MANY" => &mut self.many,
            "MANY_ATTR" => &mut self.many_attr,
            _ => unreachable!("key checked against KEYS"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            self.few_upper,
            self.few_lower,
            self.one_third,
            self.half,
            self.high_wmc,
            self.very_high_wmc,
            self.high_method_loc,
            self.high_cyclo_ratio,
            self.several,
            self.many,
            self.many_attr,
        ];
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("all thresholds must be positive".into()));
        }
        if self.few_lower > self.few_upper {
            return Err(Error::Config("FEW_lower must not exceed FEW_upper".into()));
        }
        Ok(())
    }

    /// Class size gate of the multi-brain-method branch of Brain Class.
    pub fn brain_class_loc(&self) -> f64 {
        3.0 * self.high_method_loc
    }
}

/// How the typology aggregates the signs of a smell's row of contrasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypologyMode {
    /// Majority sign over significant cells only.
    #[default]
    Majority,
    /// Majority sign over every tested cell.
    AllCells,
}

/// Settings for a whole run. Serialized into fact headers and the report index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub thresholds: ThresholdConfig,
    /// Extra exclusion globs, matched against paths relative to a project root.
    pub exclude: Vec<String>,
    pub alpha: f64,
    /// Largest `n1 + n2` for which Mann-Whitney uses the exact distribution.
    pub exact_cutoff: usize,
    pub continuity_correction: bool,
    pub seed: u64,
    pub sample_confidence: f64,
    pub sample_margin: f64,
    pub typology_mode: TypologyMode,
    /// Also classify the typology from same-class contrasts.
    pub same_class_typology: bool,
    /// Output location; kept out of serialized outputs so runs are relocatable.
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            thresholds: ThresholdConfig::default(),
            exclude: Vec::new(),
            alpha: 0.05,
            exact_cutoff: csi_stats::DEFAULT_EXACT_CUTOFF,
            continuity_correction: true,
            seed: 0,
            sample_confidence: 0.95,
            sample_margin: 0.10,
            typology_mode: TypologyMode::Majority,
            same_class_typology: false,
            out_dir: PathBuf::from("csi-out"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    thresholds: BTreeMap<String, ThresholdValue>,
    exclude: Vec<String>,
    alpha: Option<f64>,
    exact_cutoff: Option<usize>,
    continuity_correction: Option<bool>,
    seed: Option<u64>,
    sample_confidence: Option<f64>,
    sample_margin: Option<f64>,
    typology_mode: Option<TypologyMode>,
    same_class_typology: Option<bool>,
    out: Option<PathBuf>,
}

impl AnalysisConfig {
    /// Loads a TOML (or, by `.json` extension, JSON) config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: RawConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        };
        Self::from_raw(raw)
    }

    /// Parses config text in TOML form.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let defaults = AnalysisConfig::default();
        let cfg = AnalysisConfig {
            thresholds: ThresholdConfig::with_overrides(&raw.thresholds)?,
            exclude: raw.exclude,
            alpha: raw.alpha.unwrap_or(defaults.alpha),
            exact_cutoff: raw.exact_cutoff.unwrap_or(defaults.exact_cutoff),
            continuity_correction: raw.continuity_correction.unwrap_or(defaults.continuity_correction),
            seed: raw.seed.unwrap_or(defaults.seed),
            sample_confidence: raw.sample_confidence.unwrap_or(defaults.sample_confidence),
            sample_margin: raw.sample_margin.unwrap_or(defaults.sample_margin),
            typology_mode: raw.typology_mode.unwrap_or_default(),
            same_class_typology: raw.same_class_typology.unwrap_or(false),
            out_dir: raw.out.unwrap_or(defaults.out_dir),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.thresholds.validate()?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} not in (0, 1)", self.alpha)));
        }
        for glob in &self.exclude {
            globset::Glob::new(glob).map_err(|e| Error::Config(format!("bad glob `{glob}`: {e}")))?;
        }
        Ok(())
    }
}

/// One project of a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectEntry {
    pub id: String,
    pub root: PathBuf,
}

/// The list of projects to analyze plus exclusion globs for tests,
/// examples and vendored code.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub projects: Vec<ProjectEntry>,
    #[serde(default)]
    pub exclude: Vec<String>,
}

impl CorpusManifest {
    /// Reads a JSON manifest; relative roots resolve against the manifest's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut manifest: CorpusManifest =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for project in &mut manifest.projects {
            if project.root.is_relative() {
                project.root = base.join(&project.root);
            }
        }
        manifest.check_ids()?;
        Ok(manifest)
    }

    fn check_ids(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.projects {
            if p.id.is_empty() {
                return Err(Error::Config("project id must not be empty".into()));
            }
            if !seen.insert(p.id.as_str()) {
                return Err(Error::Config(format!("duplicate project id `{}`", p.id)));
            }
        }
        Ok(())
    }

    /// Pipeline-start validation: at least one project, unique ids, existing roots.
    pub fn validate(&self) -> Result<()> {
        if self.projects.is_empty() {
            return Err(Error::Config("manifest lists no projects".into()));
        }
        self.check_ids()?;
        for p in &self.projects {
            if !p.root.is_dir() {
                return Err(Error::Config(format!(
                    "root of project `{}` is not a readable directory: {}",
                    p.id,
                    p.root.display()
                )));
            }
        }
        for glob in &self.exclude {
            globset::Glob::new(glob).map_err(|e| Error::Config(format!("bad glob `{glob}`: {e}")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stricter_bound_rule() {
        assert_eq!(stricter_bound(2.0, 5.0, Comparison::Above), 5.0);
        assert_eq!(stricter_bound(2.0, 5.0, Comparison::Below), 2.0);
        assert_eq!(stricter_bound(5.0, 2.0, Comparison::Below), 2.0);
    }

    #[test]
    fn ranges_resolve_by_direction() {
        let cfg = AnalysisConfig::from_toml_str(
            "seed = 7\n[thresholds]\nFEW = [2, 5]\nONE_THIRD = [0.3, 0.4]\nMANY = [5, 8]\n",
        )
        .unwrap();
        assert_eq!(cfg.thresholds.few_upper, 5.0);
        assert_eq!(cfg.thresholds.few_lower, 2.0);
        assert_eq!(cfg.thresholds.one_third, 0.3);
        assert_eq!(cfg.thresholds.many, 8.0);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_bad_thresholds() {
        assert!(AnalysisConfig::from_toml_str("[thresholds]\nHALF = 0\n").is_err());
        assert!(AnalysisConfig::from_toml_str("[thresholds]\nFEW_lower = 9\n").is_err());
        assert!(AnalysisConfig::from_toml_str("[thresholds]\nNOPE = 1\n").is_err());
        assert!(AnalysisConfig::from_toml_str("alpha = 2.0\n").is_err());
    }

    #[test]
    fn out_dir_not_serialized() {
        let cfg = AnalysisConfig { out_dir: "/somewhere".into(), ..Default::default() };
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(!json.contains("somewhere"));
        assert!(json.contains("\"FEW_upper\":5.0"));
    }

    #[test]
    fn manifest_requires_projects_and_unique_ids() {
        assert!(CorpusManifest::default().validate().is_err());
        let m = CorpusManifest {
            projects: vec![
                ProjectEntry { id: "a".into(), root: ".".into() },
                ProjectEntry { id: "a".into(), root: ".".into() },
            ],
            exclude: vec![],
        };
        assert!(m.validate().is_err());
    }
}
