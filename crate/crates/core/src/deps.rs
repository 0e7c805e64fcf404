//! Dependency relations, the closed triple alphabet, and graph extraction.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{ArtifactIdx, ArtifactKind, ArtifactTable, CodeModel, Site};

use ArtifactKind::{Accessor, Class, Constructor, Field, FunctionalMethod as FM, Interface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Call,
    Create,
    Contain,
    Cast,
    Use,
    Throws,
    Return,
    Parameter,
    Extend,
    Implement,
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::Call,
        Relation::Create,
        Relation::Contain,
        Relation::Cast,
        Relation::Use,
        Relation::Throws,
        Relation::Return,
        Relation::Parameter,
        Relation::Extend,
        Relation::Implement,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Call => "call",
            Relation::Create => "create",
            Relation::Contain => "contain",
            Relation::Cast => "cast",
            Relation::Use => "use",
            Relation::Throws => "throws",
            Relation::Return => "return",
            Relation::Parameter => "parameter",
            Relation::Extend => "extend",
            Relation::Implement => "implement",
        }
    }

    /// Allowed source kinds.
    pub fn sources(self) -> &'static [ArtifactKind] {
        match self {
            Relation::Call | Relation::Create | Relation::Contain | Relation::Cast => &[FM, Constructor, Field],
            Relation::Use => &[FM, Accessor, Constructor, Field],
            Relation::Throws => &[FM, Constructor],
            Relation::Return => &[FM, Accessor],
            Relation::Parameter => &[FM, Accessor, Constructor],
            Relation::Extend | Relation::Implement => &[Class],
        }
    }

    /// Allowed target kinds.
    pub fn targets(self) -> &'static [ArtifactKind] {
        match self {
            Relation::Call => &[FM, Accessor, Constructor],
            Relation::Use => &[Field],
            Relation::Implement => &[Interface],
            _ => &[Class],
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(relation, source kind, target kind)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DependencyType {
    pub relation: Relation,
    pub source_kind: ArtifactKind,
    pub target_kind: ArtifactKind,
}

impl DependencyType {
    pub const fn new(relation: Relation, source_kind: ArtifactKind, target_kind: ArtifactKind) -> Self {
        DependencyType { relation, source_kind, target_kind }
    }
}

impl fmt::Display for DependencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.relation, self.source_kind, self.target_kind)
    }
}

impl FromStr for DependencyType {
    type Err = String;

    /// Parses `(call, FM, Accessor)`; parentheses and spaces are optional.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> =
            s.trim().trim_start_matches('(').trim_end_matches(')').split(',').map(str::trim).collect();
        let [rel, src, dst] = parts.as_slice() else {
            return Err(format!("expected a triple, got `{s}`"));
        };
        let relation = Relation::ALL
            .into_iter()
            .find(|r| r.as_str() == *rel)
            .ok_or_else(|| format!("unknown relation `{rel}`"))?;
        let kind = |k: &str| {
            ArtifactKind::ALL
                .into_iter()
                .find(|a| a.as_str() == k)
                .ok_or_else(|| format!("unknown artifact kind `{k}`"))
        };
        let t = DependencyType::new(relation, kind(src)?, kind(dst)?);
        if !validate_triple(t) {
            return Err(format!("{t} is not a valid dependency type"));
        }
        Ok(t)
    }
}

/// True iff the triple's kinds belong to the relation's source and target sets.
pub fn validate_triple(t: DependencyType) -> bool {
    t.relation.sources().contains(&t.source_kind) && t.relation.targets().contains(&t.target_kind)
}

/// Every valid triple, in relation order then source/target table order.
pub fn all_valid_triples() -> Vec<DependencyType> {
    let mut out = Vec::new();
    for r in Relation::ALL {
        for &s in r.sources() {
            for &t in r.targets() {
                out.push(DependencyType::new(r, s, t));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyEdge {
    pub dep_type: DependencyType,
    pub source: ArtifactIdx,
    pub target: ArtifactIdx,
    pub site: Site,
}

/// Edge multiset of one project with lookup indexes.
#[derive(Debug, Clone, Default)]
pub struct DependencyGraph {
    edges: Vec<DependencyEdge>,
    by_source: HashMap<ArtifactIdx, Vec<usize>>,
    by_target: HashMap<ArtifactIdx, Vec<usize>>,
    by_class: HashMap<ArtifactIdx, Vec<usize>>,
}

impl DependencyGraph {
    /// Sorts edges by site (then source, relation, target) and builds the indexes.
    pub fn new(mut edges: Vec<DependencyEdge>, artifacts: &ArtifactTable) -> Self {
        edges.sort_by(|a, b| {
            (&a.site, a.source, a.dep_type.relation, a.target).cmp(&(&b.site, b.source, b.dep_type.relation, b.target))
        });
        let mut graph = DependencyGraph { edges, ..Default::default() };
        for (i, e) in graph.edges.iter().enumerate() {
            graph.by_source.entry(e.source).or_default().push(i);
            graph.by_target.entry(e.target).or_default().push(i);
            let (cs, ct) = (artifacts.owner_class(e.source), artifacts.owner_class(e.target));
            graph.by_class.entry(cs).or_default().push(i);
            if ct != cs {
                graph.by_class.entry(ct).or_default().push(i);
            }
        }
        graph
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn pick<'a>(&'a self, idx: Option<&'a Vec<usize>>) -> impl Iterator<Item = &'a DependencyEdge> + 'a {
        idx.into_iter().flatten().map(move |&i| &self.edges[i])
    }

    /// Positions in [`edges`](Self::edges) of the edges leaving `a`.
    pub fn source_indices(&self, a: ArtifactIdx) -> impl Iterator<Item = usize> + '_ {
        self.by_source.get(&a).into_iter().flatten().copied()
    }

    pub fn from_source(&self, a: ArtifactIdx) -> impl Iterator<Item = &DependencyEdge> + '_ {
        self.pick(self.by_source.get(&a))
    }

    pub fn to_target(&self, a: ArtifactIdx) -> impl Iterator<Item = &DependencyEdge> + '_ {
        self.pick(self.by_target.get(&a))
    }

    /// Edges with an endpoint whose owner class is `class`.
    pub fn touching_class(&self, class: ArtifactIdx) -> impl Iterator<Item = &DependencyEdge> + '_ {
        self.pick(self.by_class.get(&class))
    }
}

/// Turns every resolved reference into an edge, keeping only valid, non-self triples.
pub fn extract_dependencies(model: &CodeModel) -> DependencyGraph {
    let table = &model.artifacts;
    let mut edges = Vec::new();
    for (src, artifact) in table.iter() {
        for r in &model.body(src).references {
            if r.target == src {
                continue;
            }
            let dep_type = DependencyType::new(r.relation, artifact.kind, table.get(r.target).kind);
            if !validate_triple(dep_type) {
                log::trace!("dropping {dep_type} from {}", artifact.id);
                continue;
            }
            edges.push(DependencyEdge { dep_type, source: src, target: r.target, site: r.site.clone() });
        }
    }
    DependencyGraph::new(edges, table)
}
