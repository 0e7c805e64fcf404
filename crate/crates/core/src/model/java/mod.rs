//! tree-sitter based Java frontend: declaration collection, name resolution
//! and body walking.

mod accessor;
mod collect;
mod resolve;
mod walk;

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use tree_sitter::{Node, Parser, Tree};

use super::loc::CodeLines;
use super::{ArtifactIdx, ArtifactKind, ArtifactTable, BodyFacts, CodeModel, Diagnostic, ModelCounts};

pub(super) struct SourceFile {
    rel: Arc<str>,
    text: String,
    tree: Tree,
    lines: CodeLines,
}

/// Package and imports of one compilation unit.
#[derive(Debug, Default)]
struct FileScope {
    package: String,
    single_imports: HashMap<String, String>,
    on_demand: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct TypeId(u32);

impl TypeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flavor {
    Class,
    Interface,
    Enum,
    Record,
    Annotation,
}

impl Flavor {
    fn artifact_kind(self) -> ArtifactKind {
        match self {
            Flavor::Class | Flavor::Enum | Flavor::Record => ArtifactKind::Class,
            Flavor::Interface | Flavor::Annotation => ArtifactKind::Interface,
        }
    }
}

/// One entry of a type body, in source order.
#[derive(Debug, Clone, Copy)]
enum Slot<'t> {
    Member(ArtifactIdx),
    Initializer(Node<'t>),
    Nested(TypeId),
}

struct TypeDecl<'t> {
    file: usize,
    node: Node<'t>,
    name: String,
    fqn: String,
    flavor: Flavor,
    /// Lexically enclosing type.
    outer: Option<TypeId>,
    /// Anonymous or local class: members are attributed to the enclosing named class.
    pseudo: bool,
    artifact: Option<ArtifactIdx>,
    owner: ArtifactIdx,
    type_params: Vec<String>,
    super_class_node: Option<Node<'t>>,
    interface_nodes: Vec<Node<'t>>,
    super_class: Option<TypeId>,
    interfaces: Vec<TypeId>,
    nested: HashMap<String, TypeId>,
    fields: Vec<(String, ArtifactIdx)>,
    methods: Vec<ArtifactIdx>,
    ctors: Vec<ArtifactIdx>,
    slots: Vec<Slot<'t>>,
}

impl TypeDecl<'_> {
    fn supers(&self) -> impl Iterator<Item = TypeId> + '_ {
        self.super_class.into_iter().chain(self.interfaces.iter().copied())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MemberKind {
    Method,
    Constructor,
    Field,
    EnumConstant,
}

struct Param<'t> {
    name: String,
    node: Node<'t>,
    type_node: Option<Node<'t>>,
}

/// A resolved type: either an in-corpus declaration or a named external/primitive type.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    Decl(TypeId, u8),
    Named(String, u8),
}

impl Ty {
    fn dims(&self) -> u8 {
        match self {
            Ty::Decl(_, d) | Ty::Named(_, d) => *d,
        }
    }

    fn with_dims(self, dims: u8) -> Ty {
        match self {
            Ty::Decl(t, _) => Ty::Decl(t, dims),
            Ty::Named(n, _) => Ty::Named(n, dims),
        }
    }

    fn named(name: &str) -> Ty {
        Ty::Named(name.to_string(), 0)
    }
}

struct MemberDecl<'t> {
    ty: TypeId,
    node: Node<'t>,
    kind: MemberKind,
    params: Vec<Param<'t>>,
    varargs: bool,
    type_params: Vec<String>,
    /// Return type of a method, declared type of a field.
    type_node: Option<Node<'t>>,
    /// Extra array dimensions written after a field's name.
    extra_dims: u8,
    throws: Vec<Node<'t>>,
    body: Option<Node<'t>>,
    param_tys: Vec<Option<Ty>>,
    value_ty: Option<Ty>,
}

/// Everything collected from a project's files, borrowed from the parse trees.
struct Frontend<'t> {
    files: &'t [SourceFile],
    scopes: Vec<FileScope>,
    types: Vec<TypeDecl<'t>>,
    by_fqn: HashMap<String, TypeId>,
    /// Anonymous and local classes keyed by `(file, node id)`.
    pseudo_at: HashMap<(usize, usize), TypeId>,
    members: Vec<MemberDecl<'t>>,
    member_of: HashMap<ArtifactIdx, usize>,
    artifacts: ArtifactTable,
    accessor_fields: HashMap<ArtifactIdx, ArtifactIdx>,
    anon_counter: HashMap<ArtifactIdx, u32>,
}

impl<'t> Frontend<'t> {
    fn src(&self, file: usize) -> &'t str {
        let files = self.files;
        &files[file].text
    }

    fn text(&self, file: usize, node: Node<'_>) -> &'t str {
        &self.src(file)[node.byte_range()]
    }

    fn member(&self, idx: ArtifactIdx) -> &MemberDecl<'t> {
        &self.members[self.member_of[&idx]]
    }

    fn decl(&self, t: TypeId) -> &TypeDecl<'t> {
        &self.types[t.index()]
    }
}

fn parse_all(sources: Vec<(String, String)>, diagnostics: &mut Vec<Diagnostic>) -> Vec<SourceFile> {
    let parsed: Vec<(String, String, Option<Tree>)> = sources
        .into_par_iter()
        .map_init(
            || {
                let mut p = Parser::new();
                p.set_language(&tree_sitter_java::LANGUAGE.into())
                    .expect("bundled Java grammar matches the tree-sitter ABI");
                p
            },
            |parser, (rel, text)| {
                let tree = parser.parse(&text, None);
                (rel, text, tree)
            },
        )
        .collect();
    let mut files = Vec::with_capacity(parsed.len());
    for (rel, text, tree) in parsed {
        match tree {
            Some(tree) if !tree.root_node().has_error() => {
                let lines = CodeLines::of_tree(tree.root_node(), text.lines().count());
                files.push(SourceFile { rel: Arc::from(rel), text, tree, lines });
            }
            _ => {
                log::warn!("skipping {rel}: syntax errors");
                diagnostics.push(Diagnostic { file: rel, message: "syntax error; file skipped".into() });
            }
        }
    }
    files
}

pub(super) fn build(project_id: &str, mut sources: Vec<(String, String)>) -> CodeModel {
    sources.sort_by(|a, b| a.0.cmp(&b.0));
    let mut diagnostics = Vec::new();
    let files = parse_all(sources, &mut diagnostics);

    let mut fe = Frontend {
        files: &files,
        scopes: Vec::new(),
        types: Vec::new(),
        by_fqn: HashMap::new(),
        pseudo_at: HashMap::new(),
        members: Vec::new(),
        member_of: HashMap::new(),
        artifacts: ArtifactTable::default(),
        accessor_fields: HashMap::new(),
        anon_counter: HashMap::new(),
    };
    for i in 0..files.len() {
        fe.collect_file(i);
    }
    fe.resolve_supertypes();
    fe.resolve_signatures();

    let mut bodies = vec![BodyFacts::default(); fe.artifacts.len()];
    fe.walk_all(&mut bodies);

    let mut supertypes = HashMap::new();
    for d in &fe.types {
        if let Some(a) = d.artifact {
            let sup: Vec<ArtifactIdx> = d.supers().filter_map(|s| fe.decl(s).artifact).collect();
            if !sup.is_empty() {
                supertypes.insert(a, sup);
            }
        }
    }
    let counts = ModelCounts {
        noc: fe.artifacts.iter().filter(|(_, a)| a.kind.is_type()).count(),
        nom: fe.artifacts.iter().filter(|(_, a)| a.kind.is_method()).count(),
        loc: files.iter().map(|f| f.lines.total()).sum(),
    };
    let unresolved: u32 = bodies.iter().map(|b| b.unresolved).sum();
    log::debug!("{project_id}: {} artifacts, {unresolved} unresolved references", fe.artifacts.len());

    CodeModel {
        project_id: project_id.to_string(),
        artifacts: fe.artifacts,
        bodies,
        accessor_fields: fe.accessor_fields,
        supertypes,
        counts,
        diagnostics,
    }
}
