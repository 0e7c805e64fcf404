//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use csi_core::config::{AnalysisConfig, ThresholdConfig};
use csi_core::deps::{extract_dependencies, DependencyType, Relation};
use csi_core::interaction::{interaction_set, FlowDirection, InteractionType, RelativeLocation, SmellPair};
use csi_core::metrics::compute_metrics;
use csi_core::model::{build_code_model, build_from_sources, ArtifactKind, CodeModel};
use csi_core::pipeline::Pipeline;
use csi_core::smells::{detect_all, SmellKind, SmellSet};
use csi_core::study::{ContrastSpec, Dependent, Outcome};
use csi_stats::{cliffs_delta, mann_whitney_u_with, sample_size, EffectBand, MannWhitneyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_CLASSES: &str = r#"
  class C1 {
    public void m1(C2 c2) { c2.m2(); }
  }
  class C2 {
    public void m2() { System.out.println("m2"); }
    public void m3() { new C1().m1(this); }
  }
"#;

const SNIPPET_LIMIT: Duration = Duration::from_secs(1);
const STATS_LIMIT: Duration = Duration::from_secs(30);
const STUDY_LIMIT: Duration = Duration::from_secs(120);
const EXACT_TOL: f64 = 1e-9;
const APPROX_TOL: f64 = 0.02;
const STAT_PAIRS: usize = 1000;

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { id, pass, detail: detail.into() }
}

fn two_classes() -> Verdict {
    let start = Instant::now();
    let m = build_from_sources("two", vec![("TwoClasses.java".into(), TWO_CLASSES.into())]);
    let g = extract_dependencies(&m);
    let id = |i| m.artifacts.get(i).id.clone();
    let edges: BTreeSet<String> =
        g.edges().iter().map(|e| format!("{} {} -> {}", e.dep_type, id(e.source), id(e.target))).collect();
    let want_edges: BTreeSet<String> = [
        "(call, FM, FM) C1#m1(C2) -> C2#m2()",
        "(parameter, FM, Class) C1#m1(C2) -> C2",
        "(call, FM, FM) C2#m3() -> C1#m1(C2)",
        "(create, FM, Class) C2#m3() -> C1",
    ]
    .map(String::from)
    .into();

    let (m1, c2) = (m.artifacts.lookup("C1#m1(C2)").unwrap(), m.artifacts.lookup("C2").unwrap());
    let set = interaction_set(&g, &m.artifacts, m1, c2);
    let mut dirs: Vec<FlowDirection> = set.iter().map(|(_, d)| *d).collect();
    dirs.sort_by_key(|d| d.as_str() != "Forward");
    let no_create = set.iter().all(|(e, _)| e.dep_type.relation != Relation::Create);
    let elapsed = start.elapsed();

    let pass = g.len() == 4
        && edges == want_edges
        && set.len() == 3
        && dirs == [FlowDirection::Forward, FlowDirection::Forward, FlowDirection::Backward]
        && no_create
        && elapsed < SNIPPET_LIMIT;
    verdict(
        "1",
        pass,
        format!("edges={} set={} dirs={:?} no_create={no_create} time={elapsed:.2?}", g.len(), set.len(), dirs),
    )
}

fn sample_sizes() -> Verdict {
    let got: Vec<u64> = [737, 2348, 3093, 3540, 5260].iter().map(|&n| sample_size(n, 0.95, 0.10).unwrap()).collect();
    verdict("2", got == [86, 93, 94, 94, 95], format!("{got:?}"))
}

/// Doubled U of `x` against `y`: 2 per win, 1 per tie.
fn doubled_u(x: &[f64], y: &[f64]) -> i64 {
    x.iter()
        .flat_map(|a| {
            y.iter().map(move |b| {
                if a > b {
                    2
                } else if a == b {
                    1
                } else {
                    0
                }
            })
        })
        .sum()
}

/// Two-sided permutation p over every split of the pooled values.
fn brute_exact_p(x: &[f64], y: &[f64]) -> f64 {
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let (n, n1) = (pooled.len(), x.len());
    let mean2 = (x.len() * y.len()) as i64;
    let observed = (doubled_u(x, y) - mean2).abs();
    let (mut extreme, mut all) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let a: Vec<f64> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| pooled[i]).collect();
        let b: Vec<f64> = (0..n).filter(|i| mask & (1 << i) == 0).map(|i| pooled[i]).collect();
        all += 1;
        if (doubled_u(&a, &b) - mean2).abs() >= observed {
            extreme += 1;
        }
    }
    extreme as f64 / all as f64
}

fn brute_delta(x: &[f64], y: &[f64]) -> f64 {
    let d: i64 = x.iter().flat_map(|a| y.iter().map(move |b| (a > b) as i64 - (a < b) as i64)).sum();
    d as f64 / (x.len() * y.len()) as f64
}

fn count_vector<R: Rng>(rng: &mut R) -> Vec<f64> {
    let len = rng.random_range(1..=8);
    let top = rng.random_range(1..=10);
    (0..len).map(|_| rng.random_range(0..=top) as f64).collect()
}

fn statistics() -> (Verdict, Verdict) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_401);
    let exact = MannWhitneyOptions { exact_cutoff: 16, continuity_correction: true };
    let approx = MannWhitneyOptions { exact_cutoff: 0, continuity_correction: true };
    let (mut worst_exact, mut worst_delta, mut worst_u) = (0f64, 0f64, 0f64);
    let (mut worst_approx, mut within) = (0f64, 0usize);
    for _ in 0..STAT_PAIRS {
        let (x, y) = (count_vector(&mut rng), count_vector(&mut rng));
        let oracle = brute_exact_p(&x, &y);
        let e = mann_whitney_u_with(&x, &y, exact).unwrap();
        worst_exact = worst_exact.max((e.p - oracle).abs());
        worst_u = worst_u.max((2.0 * e.u - doubled_u(&x, &y) as f64).abs());
        worst_delta = worst_delta.max((cliffs_delta(&x, &y).unwrap().delta - brute_delta(&x, &y)).abs());
        let gap = (mann_whitney_u_with(&x, &y, approx).unwrap().p - oracle).abs();
        worst_approx = worst_approx.max(gap);
        within += (gap <= APPROX_TOL) as usize;
    }
    let elapsed = start.elapsed();
    let in_time = elapsed < STATS_LIMIT;
    let a = verdict(
        "3a",
        worst_exact <= EXACT_TOL && worst_delta <= EXACT_TOL && worst_u == 0.0 && in_time,
        format!(
            "exact p vs enumeration max={worst_exact:.1e}, delta vs pairwise max={worst_delta:.1e} (tol {EXACT_TOL:e}) \
             over {STAT_PAIRS} pairs, time={elapsed:.2?}"
        ),
    );
    let b = verdict(
        "3b",
        worst_approx <= APPROX_TOL && in_time,
        format!(
            "normal approximation vs exact max={worst_approx:.4} (tol {APPROX_TOL}), {within}/{STAT_PAIRS} pairs within"
        ),
    );
    (a, b)
}

fn effect_bands() -> Verdict {
    let got = [0.45, -0.18, -0.05].map(EffectBand::from_delta);
    let want = [EffectBand::Medium, EffectBand::Small, EffectBand::Negligible];
    verdict("4", got == want, format!("{:?}", got.map(EffectBand::as_str)))
}

fn detect(model: &CodeModel) -> SmellSet {
    let t = ThresholdConfig::default();
    detect_all(&model.artifacts, &compute_metrics(model, &t), &t)
}

/// Names of artifacts breaking the BC, GC and DC rules.
fn invariant_breaches(model: &CodeModel, smells: &SmellSet) -> Vec<String> {
    let mut out = Vec::new();
    for &c in smells.of(SmellKind::BC) {
        if !model.artifacts.members(c).iter().any(|m| smells.has(SmellKind::BM, *m)) {
            out.push(format!("BC without BM {}", model.artifacts.get(c).id));
        }
    }
    for kind in [SmellKind::BC, SmellKind::GC] {
        for &c in smells.of(kind) {
            if smells.has(SmellKind::DC, c) {
                out.push(format!("{kind} and DC {}", model.artifacts.get(c).id));
            }
        }
    }
    out
}

fn detection() -> Verdict {
    let manifest = common::fixture_manifest();
    let labels = common::fixture_labels();
    let cfg = AnalysisConfig::default();
    let (mut tp, mut fp, mut fn_) = ([0usize; 5], 0usize, 0usize);
    let mut min_clean = usize::MAX;
    let mut breaches = Vec::new();
    for p in &manifest.projects {
        let model = build_code_model(&p.id, &p.root, &manifest, &cfg).unwrap();
        let smells = detect(&model);
        let expected = &labels[&p.id];
        for (k, kind) in SmellKind::ALL.into_iter().enumerate() {
            let want = expected.get(kind.as_str()).cloned().unwrap_or_default();
            let got: BTreeSet<String> = smells.of(kind).iter().map(|&i| model.artifacts.get(i).id.clone()).collect();
            tp[k] += got.intersection(&want).count();
            fp += got.difference(&want).count();
            fn_ += want.difference(&got).count();
        }
        let labelled: BTreeSet<&String> = expected.values().flatten().collect();
        for kind in [ArtifactKind::Class, ArtifactKind::FunctionalMethod] {
            let clean =
                model.artifacts.of_kind(kind).filter(|&i| !labelled.contains(&model.artifacts.get(i).id)).count();
            min_clean = min_clean.min(clean);
        }
        breaches.extend(invariant_breaches(&model, &smells));
    }
    let random = common::random_project(7, 100);
    let random_smells = detect(&random);
    breaches.extend(invariant_breaches(&random, &random_smells));
    let random_kinds = SmellKind::ALL.iter().filter(|k| !random_smells.of(**k).is_empty()).count();

    let min_tp = *tp.iter().min().unwrap();
    let pass = fp == 0 && fn_ == 0 && min_tp >= 3 && min_clean >= 10 && breaches.is_empty() && random_kinds == 5;
    verdict(
        "5",
        pass,
        format!(
            "tp per kind={tp:?} fp={fp} fn={fn_} min clean={min_clean} breaches={} random kinds seen={random_kinds}/5",
            breaches.len()
        ),
    )
}

fn determinism() -> Verdict {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let config = AnalysisConfig { out_dir: dir.path().to_path_buf(), ..Default::default() };
        Pipeline::new(common::fixture_manifest(), config).unwrap().run_all().unwrap();
        (common::snapshot(&dir.path().join("facts")), common::snapshot(&dir.path().join("report")), dir)
    };
    let (fa, ra, _a) = run();
    let (fb, rb, _b) = run();
    let files = fa.len() + ra.len();
    verdict("6", files > 0 && fa == fb && ra == rb, format!("{files} fact and report files compared"))
}

fn synthetic_study() -> Verdict {
    let start = Instant::now();
    let results = common::synthetic_study(2024, 5);
    let elapsed = start.elapsed();
    let spec = ContrastSpec {
        pair: SmellPair(SmellKind::GC, SmellKind::DC),
        baseline: InteractionType::NonCs1Cs2,
        location: RelativeLocation::Different,
        dependent: Dependent::Specific {
            dep_type: DependencyType::new(Relation::Call, ArtifactKind::FunctionalMethod, ArtifactKind::Accessor),
            direction: FlowDirection::Forward,
        },
    };
    let tested = results.union_outcome(&spec).and_then(Outcome::tested).copied();
    let summary = results.per_system.iter().find(|s| s.spec == spec);
    let pass = tested.is_some_and(|t| t.delta > 0.0 && t.significant)
        && summary.is_some_and(|s| s.included_projects == 5 && s.consistency_score == Some(1.0))
        && elapsed < STUDY_LIMIT;
    verdict(
        "7",
        pass,
        format!(
            "delta={:?} significant={:?} included={:?} consistency={:?} time={elapsed:.2?}",
            tested.map(|t| t.delta),
            tested.map(|t| t.significant),
            summary.map(|s| s.included_projects),
            summary.and_then(|s| s.consistency_score),
        ),
    )
}

fn main() {
    let (stats_exact, stats_approx) = statistics();
    let verdicts = [
        two_classes(),
        sample_sizes(),
        stats_exact,
        stats_approx,
        effect_bands(),
        detection(),
        determinism(),
        synthetic_study(),
    ];
    for v in &verdicts {
        println!("{} criterion {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.detail);
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    println!("{} of {} criteria passed", verdicts.len() - failed, verdicts.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
