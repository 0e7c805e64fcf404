#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use csi_core::config::{AnalysisConfig, CorpusManifest, ProjectEntry};
use csi_core::interaction::SmellPair;
use csi_core::model::{build_from_sources, CodeModel};
use csi_core::pipeline::Pipeline;
use csi_core::smells::SmellKind;
use csi_core::study::StudyResults;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/corpus")
}

/// project -> smell -> artifact ids
pub type Labels = BTreeMap<String, BTreeMap<String, BTreeSet<String>>>;

pub fn fixture_labels() -> Labels {
    let text = std::fs::read_to_string(fixture_corpus().join("labels.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn fixture_manifest() -> CorpusManifest {
    CorpusManifest::load(&fixture_corpus().join("manifest.json")).unwrap()
}

/// A method with deep nesting, many locals and one decision per filler line.
pub fn brain_method(name: &str, nested: usize, filler: usize) -> String {
    let mut s = format!("    public int {name}(int a, int b, int c) {{\n");
    for (i, init) in ["a", "b", "c", "0", "1", "2", "3", "4", "5"].iter().enumerate() {
        writeln!(s, "        int x{i} = {init};").unwrap();
    }
    let conds = ["a > 0", "b > 0", "c > 0", "x0 > x1", "x2 > x3", "x4 > x5"];
    for (k, c) in conds.iter().take(nested).enumerate() {
        writeln!(s, "        {}if ({c}) {{", "    ".repeat(k)).unwrap();
    }
    writeln!(s, "        {}x4 = x5 + x6;", "    ".repeat(nested)).unwrap();
    for k in (0..nested).rev() {
        writeln!(s, "        {}}}", "    ".repeat(k)).unwrap();
    }
    for i in 0..filler {
        writeln!(s, "        if (x{} > {i}) {{ x{} += {i}; }}", i % 9, (i + 1) % 9).unwrap();
    }
    s.push_str("        return x0 + x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8;\n    }\n");
    s
}

/// `ifs` decisions; each branch optionally touches an own field.
pub fn small_method(name: &str, ifs: usize, field: Option<&str>) -> String {
    let mut s = format!("    public int {name}(int v) {{\n        int s = 0;\n");
    for i in 0..ifs {
        writeln!(s, "        if (v > {i}) {{\n            s += {};\n        }}", i + 1).unwrap();
    }
    if let Some(f) = field {
        writeln!(s, "        {f} += s;").unwrap();
    }
    s.push_str("        return s;\n    }\n");
    s
}

/// A class with private fields and one getter per field.
pub fn holder(pkg: &str, name: &str, fields: usize) -> String {
    let mut s = format!("package {pkg};\n\npublic class {name} {{\n");
    for i in 0..fields {
        writeln!(s, "    private int f{i};").unwrap();
    }
    for i in 0..fields {
        writeln!(s, "\n    public int getF{i}() {{\n        return f{i};\n    }}").unwrap();
    }
    s.push_str("}\n");
    s
}

/// Calls `getters` on a parameter of type `target`, repeating each call `times` times.
pub fn consumer_method(name: &str, target: &str, getters: &[usize], times: usize, ifs: usize) -> String {
    let mut s = format!("    public int {name}({target} h, int v) {{\n        int s = 0;\n");
    for &g in getters {
        for _ in 0..times {
            writeln!(s, "        s += h.getF{g}();").unwrap();
        }
    }
    for i in 0..ifs {
        writeln!(s, "        if (v > {i}) {{\n            s++;\n        }}").unwrap();
    }
    s.push_str("        return s;\n    }\n");
    s
}

/// A random class mixing fields, accessors, small, brain and consumer methods.
pub fn random_class<R: Rng>(rng: &mut R, pkg: &str, name: &str, holders: &[(String, usize)]) -> String {
    let mut s = format!("package {pkg};\n\npublic class {name} {{\n");
    let fields = rng.random_range(0..6usize);
    for i in 0..fields {
        writeln!(s, "    private int p{i};").unwrap();
    }
    for i in 0..rng.random_range(0..8usize) {
        writeln!(s, "    public int q{i};").unwrap();
    }
    for i in 0..fields {
        if rng.random_bool(0.6) {
            writeln!(s, "\n    public int getP{i}() {{\n        return p{i};\n    }}").unwrap();
        }
    }
    let methods = rng.random_range(0..14usize);
    for m in 0..methods {
        s.push('\n');
        let roll = rng.random_range(0..10u32);
        if roll < 2 {
            let nested = rng.random_range(3..7usize);
            let filler = rng.random_range(20..75usize);
            s.push_str(&brain_method(&format!("m{m}"), nested, filler));
        } else if roll < 5 && !holders.is_empty() {
            let (target, size) = &holders[rng.random_range(0..holders.len())];
            let k = rng.random_range(1..=*size);
            let getters: Vec<usize> = rand::seq::index::sample(rng, *size, k).into_vec();
            s.push_str(&consumer_method(&format!("m{m}"), target, &getters, 1, rng.random_range(0..6usize)));
        } else {
            let field = (fields > 0 && rng.random_bool(0.5)).then(|| format!("p{}", rng.random_range(0..fields)));
            s.push_str(&small_method(&format!("m{m}"), rng.random_range(0..8usize), field.as_deref()));
        }
    }
    s.push_str("}\n");
    s
}

/// Sources of one project of a synthetic GC-DC study.
///
/// God classes call six or more distinct getters of a data class, twice each;
/// plain consumers call at most two getters once.
pub fn synthetic_study_project<R: Rng>(rng: &mut R, pkg: &str) -> Vec<(String, String)> {
    let mut files = Vec::new();
    let dir = pkg.replace('.', "/");
    let holders = ["Account", "Profile"];
    for h in holders {
        files.push((format!("{dir}/{h}.java"), holder(pkg, h, 8)));
    }
    for g in 0..rng.random_range(3..6usize) {
        let name = format!("Manager{g}");
        let mut s = format!("package {pkg};\n\npublic class {name} {{\n");
        for (j, h) in holders.iter().enumerate() {
            let k = rng.random_range(6..=8usize);
            let getters: Vec<usize> = (0..k).collect();
            s.push_str(&consumer_method(&format!("use{j}"), h, &getters, 2, 1));
            s.push('\n');
        }
        for m in 0..10 {
            s.push_str(&small_method(&format!("work{m}"), 5, None));
            s.push('\n');
        }
        s.push_str("}\n");
        files.push((format!("{dir}/{name}.java"), s));
    }
    for c in 0..rng.random_range(4..8usize) {
        let name = format!("Helper{c}");
        let h = holders[c % holders.len()];
        let k = rng.random_range(1..=2usize);
        let getters: Vec<usize> = (0..k).collect();
        let mut s = format!("package {pkg};\n\npublic class {name} {{\n");
        s.push_str(&consumer_method("read", h, &getters, 1, 1));
        s.push('\n');
        s.push_str(&small_method("tick", 2, None));
        s.push_str("}\n");
        files.push((format!("{dir}/{name}.java"), s));
    }
    files
}

/// Writes `(relative path, source)` files under `root/<id>` and returns the manifest.
pub fn write_corpus(root: &Path, projects: &[(String, Vec<(String, String)>)]) -> CorpusManifest {
    let mut entries = Vec::new();
    for (id, files) in projects {
        let base = root.join(id);
        for (rel, text) in files {
            let path = base.join(rel);
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(path, text).unwrap();
        }
        entries.push(ProjectEntry { id: id.clone(), root: base });
    }
    CorpusManifest { projects: entries, exclude: vec![] }
}

/// Every regular file under `dir`, relative path to bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for e in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let e = e.unwrap();
        if e.file_type().is_file() {
            let rel = e.path().strip_prefix(dir).unwrap().to_string_lossy().into_owned();
            out.insert(rel, std::fs::read(e.path()).unwrap());
        }
    }
    out
}

/// A project of `classes` random classes reading three holder classes.
pub fn random_project(seed: u64, classes: usize) -> CodeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let holders: Vec<(String, usize)> = (0..3).map(|i| (format!("Holder{i}"), 8)).collect();
    let mut files: Vec<(String, String)> =
        holders.iter().map(|(h, n)| (format!("gen/{h}.java"), holder("gen", h, *n))).collect();
    for i in 0..classes {
        let name = format!("Gen{i}");
        files.push((format!("gen/{name}.java"), random_class(&mut rng, "gen", &name, &holders)));
    }
    build_from_sources("gen", files)
}

/// Runs the planted GC-DC corpus end to end and returns the study results.
pub fn synthetic_study(seed: u64, projects: usize) -> StudyResults {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus: Vec<(String, Vec<(String, String)>)> =
        (0..projects).map(|i| (format!("s{i}"), synthetic_study_project(&mut rng, &format!("s{i}.app")))).collect();
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_corpus(&dir.path().join("corpus"), &corpus);
    let config = AnalysisConfig { out_dir: dir.path().join("out"), ..Default::default() };
    let mut p = Pipeline::new(manifest, config).unwrap();
    p.restrict_pairs(&[SmellPair(SmellKind::GC, SmellKind::DC)]);
    p.run_all().unwrap();
    p.read_results().unwrap()
}
