//! Method and class metrics used by the detection strategies.
//!
//! CYCLO is one plus the number of decision points: `if`, `for`, enhanced
//! `for`, `while`, `do`, each `case` label, `catch`, `?:`, `&&` and `||`.
//! A method body is nesting level 1; every nested block, `switch` block or
//! unbraced control body adds one. `else if` chains stay at the level of the
//! first `if`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ThresholdConfig;
use crate::deps::Relation;
use crate::model::{ArtifactIdx, ArtifactKind, CodeModel, Visibility};
use crate::smells;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub struct MethodMetrics {
    pub loc: u32,
    pub cyclo: u32,
    pub maxnesting: u32,
    pub noav: u32,
    #[serde(rename = "ATFD_m")]
    pub atfd: u32,
    pub laa: f64,
    pub fdp: u32,
}

impl MethodMetrics {
    pub fn cyclo_per_loc(&self) -> f64 {
        if self.loc == 0 {
            0.0
        } else {
            f64::from(self.cyclo) / f64::from(self.loc)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub struct ClassMetrics {
    pub wmc: u32,
    pub tcc: f64,
    #[serde(rename = "ATFD_c")]
    pub atfd: u32,
    #[serde(rename = "LOC_c")]
    pub loc: u32,
    pub noap: u32,
    pub noam: u32,
    pub woc: f64,
    pub nom: u32,
    #[serde(rename = "BM_count")]
    pub bm_count: u32,
}

/// Metrics of every callable and class of one project.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricSet {
    pub methods: BTreeMap<ArtifactIdx, MethodMetrics>,
    pub classes: BTreeMap<ArtifactIdx, ClassMetrics>,
}

/// Fields read or written by a callable, directly or through accessor calls.
pub fn accessed_fields(model: &CodeModel, idx: ArtifactIdx) -> BTreeSet<ArtifactIdx> {
    model
        .body(idx)
        .references
        .iter()
        .filter_map(|r| match r.relation {
            Relation::Use => Some(r.target),
            Relation::Call => model.accessor_fields.get(&r.target).copied(),
            _ => None,
        })
        .filter(|&f| model.artifacts.get(f).kind == ArtifactKind::Field)
        .collect()
}

/// Accessed fields declared outside the callable's class hierarchy.
pub fn foreign_fields(model: &CodeModel, idx: ArtifactIdx) -> BTreeSet<ArtifactIdx> {
    let own = model.ancestors_and_self(model.artifacts.owner_class(idx));
    accessed_fields(model, idx).into_iter().filter(|&f| !own.contains(&model.artifacts.owner_class(f))).collect()
}

pub fn compute_method_metrics(model: &CodeModel, method: ArtifactIdx) -> MethodMetrics {
    debug_assert!(model.artifacts.get(method).kind.is_callable());
    let body = model.body(method);
    let accessed = accessed_fields(model, method);
    let foreign = foreign_fields(model, method);
    let providers: BTreeSet<ArtifactIdx> = foreign.iter().map(|&f| model.artifacts.owner_class(f)).collect();
    let laa = if accessed.is_empty() { 1.0 } else { (accessed.len() - foreign.len()) as f64 / accessed.len() as f64 };
    MethodMetrics {
        loc: body.loc,
        cyclo: body.cyclo,
        maxnesting: body.max_nesting,
        noav: body.variables.len() as u32,
        atfd: foreign.len() as u32,
        laa,
        fdp: providers.len() as u32,
    }
}

/// Tight class cohesion over non-private, concrete, named methods sharing own fields.
fn tight_class_cohesion(model: &CodeModel, cls: ArtifactIdx) -> f64 {
    let table = &model.artifacts;
    let uses: Vec<BTreeSet<ArtifactIdx>> = table
        .members(cls)
        .iter()
        .filter(|&&m| {
            let a = table.get(m);
            a.kind.is_method()
                && !a.anonymous
                && a.modifiers.visibility != Visibility::Private
                && !a.modifiers.is_abstract
        })
        .map(|&m| accessed_fields(model, m).into_iter().filter(|&f| table.get(f).declaring_type == Some(cls)).collect())
        .collect();
    let n = uses.len();
    if n < 2 {
        return 1.0;
    }
    let mut connected = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if !uses[i].is_disjoint(&uses[j]) {
                connected += 1;
            }
        }
    }
    connected as f64 / (n * (n - 1) / 2) as f64
}

/// Class metrics; `methods` must hold the metrics of the class's callables.
pub fn compute_class_metrics(
    model: &CodeModel,
    cls: ArtifactIdx,
    methods: &BTreeMap<ArtifactIdx, MethodMetrics>,
    thresholds: &ThresholdConfig,
) -> ClassMetrics {
    let table = &model.artifacts;
    let members = table.members(cls);
    let mut m = ClassMetrics {
        wmc: 0,
        tcc: tight_class_cohesion(model, cls),
        atfd: 0,
        loc: model.body(cls).loc,
        noap: 0,
        noam: 0,
        woc: 0.0,
        nom: 0,
        bm_count: 0,
    };
    let mut foreign = BTreeSet::new();
    let (mut public_fm, mut public_methods) = (0u32, 0u32);
    for &idx in members {
        let a = table.get(idx);
        let public = a.modifiers.visibility == Visibility::Public && !a.anonymous;
        if a.kind.is_callable() {
            m.wmc += model.body(idx).cyclo;
            foreign.extend(foreign_fields(model, idx));
        }
        match a.kind {
            ArtifactKind::FunctionalMethod => {
                m.nom += 1;
                if public {
                    public_fm += 1;
                    public_methods += 1;
                }
                let mm = methods.get(&idx).copied().unwrap_or_else(|| compute_method_metrics(model, idx));
                if smells::brain_method_rule(&mm, thresholds) {
                    m.bm_count += 1;
                }
            }
            ArtifactKind::Accessor => {
                m.nom += 1;
                if public {
                    m.noam += 1;
                    public_methods += 1;
                }
            }
            ArtifactKind::Field if public && !(a.modifiers.is_static && a.modifiers.is_final) => m.noap += 1,
            _ => {}
        }
    }
    m.atfd = foreign.len() as u32;
    let denom = public_methods + m.noap;
    if denom > 0 {
        m.woc = f64::from(public_fm) / f64::from(denom);
    }
    m
}

/// Metrics for every callable and every class of `model`.
pub fn compute_metrics(model: &CodeModel, thresholds: &ThresholdConfig) -> MetricSet {
    let callables: Vec<ArtifactIdx> =
        model.artifacts.iter().filter(|(_, a)| a.kind.is_callable()).map(|(i, _)| i).collect();
    let methods: BTreeMap<_, _> = callables.par_iter().map(|&i| (i, compute_method_metrics(model, i))).collect();
    let classes: Vec<ArtifactIdx> = model.artifacts.of_kind(ArtifactKind::Class).collect();
    let classes = classes.par_iter().map(|&c| (c, compute_class_metrics(model, c, &methods, thresholds))).collect();
    MetricSet { methods, classes }
}
