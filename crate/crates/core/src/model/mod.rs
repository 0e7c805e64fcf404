//! Resolved artifact model of one Java project.

mod filter;
mod java;
mod loc;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::{AnalysisConfig, CorpusManifest};
use crate::deps::Relation;
use crate::error::{Error, Result};

pub use filter::{filter_production_code, ExclusionFilter, DEFAULT_EXCLUSIONS};

/// Leaf kind of an artifact. Kinds are mutually exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArtifactKind {
    Class,
    Interface,
    #[serde(rename = "FM")]
    FunctionalMethod,
    Accessor,
    Constructor,
    Field,
}

impl ArtifactKind {
    pub const ALL: [ArtifactKind; 6] = [
        ArtifactKind::Class,
        ArtifactKind::Interface,
        ArtifactKind::FunctionalMethod,
        ArtifactKind::Accessor,
        ArtifactKind::Constructor,
        ArtifactKind::Field,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArtifactKind::Class => "Class",
            ArtifactKind::Interface => "Interface",
            ArtifactKind::FunctionalMethod => "FM",
            ArtifactKind::Accessor => "Accessor",
            ArtifactKind::Constructor => "Constructor",
            ArtifactKind::Field => "Field",
        }
    }

    pub fn is_type(self) -> bool {
        matches!(self, ArtifactKind::Class | ArtifactKind::Interface)
    }

    pub fn is_method(self) -> bool {
        matches!(self, ArtifactKind::FunctionalMethod | ArtifactKind::Accessor)
    }

    pub fn is_callable(self) -> bool {
        self.is_method() || self == ArtifactKind::Constructor
    }
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of an artifact inside its [`ArtifactTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArtifactIdx(pub u32);

impl ArtifactIdx {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    #[default]
    Package,
    Private,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Modifiers {
    pub visibility: Visibility,
    #[serde(rename = "static")]
    pub is_static: bool,
    #[serde(rename = "final")]
    pub is_final: bool,
    #[serde(rename = "abstract")]
    pub is_abstract: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    /// Path relative to the project root, `/`-separated.
    pub file: String,
    pub start_line: u32,
    pub end_line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub id: String,
    pub kind: ArtifactKind,
    pub name: String,
    /// Owning named type; `None` only for top-level types.
    pub declaring_type: Option<ArtifactIdx>,
    pub location: Location,
    pub modifiers: Modifiers,
    /// Declared inside an anonymous or local class and attributed to the enclosing named class.
    pub anonymous: bool,
}

/// All artifacts of one project, addressable by index or id.
#[derive(Debug, Clone, Default)]
pub struct ArtifactTable {
    items: Vec<Artifact>,
    by_id: HashMap<String, ArtifactIdx>,
    members: BTreeMap<ArtifactIdx, Vec<ArtifactIdx>>,
}

impl ArtifactTable {
    pub fn from_artifacts(items: Vec<Artifact>) -> Self {
        let mut table = ArtifactTable::default();
        for a in items {
            table.push(a);
        }
        table
    }

    /// Appends an artifact; ids that collide get a `~N` suffix.
    pub(crate) fn push(&mut self, mut artifact: Artifact) -> ArtifactIdx {
        if self.by_id.contains_key(&artifact.id) {
            let base = artifact.id.clone();
            let mut n = 2;
            while self.by_id.contains_key(&format!("{base}~{n}")) {
                n += 1;
            }
            artifact.id = format!("{base}~{n}");
        }
        let idx = ArtifactIdx(self.items.len() as u32);
        self.by_id.insert(artifact.id.clone(), idx);
        if let Some(owner) = artifact.declaring_type {
            if !artifact.kind.is_type() {
                self.members.entry(owner).or_default().push(idx);
            }
        }
        self.items.push(artifact);
        idx
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, idx: ArtifactIdx) -> &Artifact {
        &self.items[idx.index()]
    }

    pub fn lookup(&self, id: &str) -> Option<ArtifactIdx> {
        self.by_id.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArtifactIdx, &Artifact)> {
        self.items.iter().enumerate().map(|(i, a)| (ArtifactIdx(i as u32), a))
    }

    pub fn of_kind(&self, kind: ArtifactKind) -> impl Iterator<Item = ArtifactIdx> + '_ {
        self.iter().filter(move |(_, a)| a.kind == kind).map(|(i, _)| i)
    }

    /// Methods, constructors and fields declared by a type (nested types excluded).
    pub fn members(&self, ty: ArtifactIdx) -> &[ArtifactIdx] {
        self.members.get(&ty).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The class an artifact belongs to: itself for types, the declaring type for members.
    pub fn owner_class(&self, idx: ArtifactIdx) -> ArtifactIdx {
        let a = self.get(idx);
        if a.kind.is_type() {
            idx
        } else {
            a.declaring_type.expect("members always have a declaring type")
        }
    }

    /// The type plus its members; a singleton for non-type artifacts.
    pub fn closure(&self, idx: ArtifactIdx) -> Vec<ArtifactIdx> {
        let mut out = vec![idx];
        if self.get(idx).kind.is_type() {
            out.extend_from_slice(self.members(idx));
        }
        out
    }
}

/// Line and column (both 1-based) of a reference.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
}

/// A resolved reference from a source artifact to an in-corpus target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub relation: Relation,
    pub target: ArtifactIdx,
    pub site: Site,
}

/// A variable touched by a body, for NOAV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    /// Parameter or local, keyed by the byte offset of its declaration.
    Local(usize),
    Field(ArtifactIdx),
}

/// What the frontend learned about one artifact's code.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BodyFacts {
    pub references: Vec<Reference>,
    pub cyclo: u32,
    pub max_nesting: u32,
    pub loc: u32,
    pub variables: BTreeSet<VarKey>,
    pub unresolved: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModelCounts {
    /// Classes and interfaces.
    pub noc: usize,
    /// Functional methods and accessors.
    pub nom: usize,
    /// Code lines over all retained files.
    pub loc: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file: String,
    pub message: String,
}

/// Resolved, immutable model of one project.
#[derive(Debug, Clone, Default)]
pub struct CodeModel {
    pub project_id: String,
    pub artifacts: ArtifactTable,
    /// Indexed like `artifacts`.
    pub bodies: Vec<BodyFacts>,
    /// Field exposed by each accessor.
    pub accessor_fields: HashMap<ArtifactIdx, ArtifactIdx>,
    /// Direct in-corpus supertypes of each type.
    pub supertypes: HashMap<ArtifactIdx, Vec<ArtifactIdx>>,
    pub counts: ModelCounts,
    pub diagnostics: Vec<Diagnostic>,
}

impl CodeModel {
    pub fn body(&self, idx: ArtifactIdx) -> &BodyFacts {
        &self.bodies[idx.index()]
    }

    /// `ty` and all of its in-corpus ancestors.
    pub fn ancestors_and_self(&self, ty: ArtifactIdx) -> BTreeSet<ArtifactIdx> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![ty];
        while let Some(t) = stack.pop() {
            if seen.insert(t) {
                if let Some(sup) = self.supertypes.get(&t) {
                    stack.extend(sup.iter().copied());
                }
            }
        }
        seen
    }
}

/// Parses every production Java file under `project_root` into a resolved model.
pub fn build_code_model(
    project_id: &str,
    project_root: &Path,
    manifest: &CorpusManifest,
    config: &AnalysisConfig,
) -> Result<CodeModel> {
    if !project_root.is_dir() {
        return Err(Error::Config(format!("project root is not a readable directory: {}", project_root.display())));
    }
    let mut globs = manifest.exclude.clone();
    globs.extend(config.exclude.iter().cloned());
    let filter = ExclusionFilter::new(&globs)?;
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(project_root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(project_root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() || entry.path().extension().is_none_or(|e| e != "java") {
            continue;
        }
        let rel = entry.path().strip_prefix(project_root).expect("walkdir yields paths under the root");
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        if filter.keeps(&rel) {
            files.push(rel);
        }
    }
    if files.is_empty() {
        return Err(Error::NoProductionCode { project: project_id.to_string() });
    }
    let mut sources = Vec::with_capacity(files.len());
    for rel in files {
        let path = project_root.join(&rel);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        sources.push((rel, String::from_utf8_lossy(&bytes).into_owned()));
    }
    Ok(build_from_sources(project_id, sources))
}

/// Builds a model from in-memory `(relative path, source)` pairs.
pub fn build_from_sources(project_id: &str, sources: Vec<(String, String)>) -> CodeModel {
    java::build(project_id, sources)
}
