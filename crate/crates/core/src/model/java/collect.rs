//! First pass: packages, imports, type declarations and member artifacts.

use std::collections::{HashMap, HashSet};

use tree_sitter::Node;

use super::accessor::classify_method;
use super::{FileScope, Flavor, Frontend, MemberDecl, MemberKind, Param, Slot, TypeDecl, TypeId};
use crate::model::loc::is_comment;
use crate::model::{Artifact, ArtifactIdx, ArtifactKind, Location, Modifiers, Visibility};

pub(super) fn named_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).filter(|c| !is_comment(c.kind())).collect()
}

pub(super) fn flavor_of(kind: &str) -> Option<Flavor> {
    Some(match kind {
        "class_declaration" => Flavor::Class,
        "interface_declaration" => Flavor::Interface,
        "enum_declaration" => Flavor::Enum,
        "record_declaration" => Flavor::Record,
        "annotation_type_declaration" => Flavor::Annotation,
        _ => return None,
    })
}

fn location(rel: &str, node: Node<'_>) -> Location {
    Location {
        file: rel.to_string(),
        start_line: node.start_position().row as u32 + 1,
        end_line: node.end_position().row as u32 + 1,
    }
}

/// Type text without generic arguments, annotations or whitespace.
pub(super) fn erased_type_text(node: Node<'_>, src: &str) -> String {
    let raw = &src[node.byte_range()];
    let mut out = String::with_capacity(raw.len());
    let mut depth = 0usize;
    let mut chars = raw.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            '@' if depth == 0 => {
                // drop the annotation name
                while chars.peek().is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '.') {
                    chars.next();
                }
            }
            c if c.is_whitespace() => {}
            c if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

fn modifiers_of(node: Node<'_>, src: &str) -> Modifiers {
    let mut m = Modifiers::default();
    let Some(mods) = named_children(node).into_iter().find(|c| c.kind() == "modifiers") else {
        return m;
    };
    let mut cursor = mods.walk();
    for tok in mods.children(&mut cursor) {
        match &src[tok.byte_range()] {
            "public" => m.visibility = Visibility::Public,
            "protected" => m.visibility = Visibility::Protected,
            "private" => m.visibility = Visibility::Private,
            "static" => m.is_static = true,
            "final" => m.is_final = true,
            "abstract" => m.is_abstract = true,
            _ => {}
        }
    }
    m
}

fn type_param_names(node: Node<'_>, src: &str) -> Vec<String> {
    node.child_by_field_name("type_parameters")
        .map(|tp| {
            named_children(tp)
                .into_iter()
                .filter(|p| p.kind() == "type_parameter")
                .filter_map(|p| {
                    named_children(p)
                        .into_iter()
                        .find(|c| c.kind() == "type_identifier" || c.kind() == "identifier")
                        .map(|n| src[n.byte_range()].to_string())
                })
                .collect()
        })
        .unwrap_or_default()
}

fn list_types<'t>(holder: Option<Node<'t>>) -> Vec<Node<'t>> {
    let Some(holder) = holder else { return Vec::new() };
    named_children(holder)
        .into_iter()
        .flat_map(|c| if c.kind() == "type_list" { named_children(c) } else { vec![c] })
        .collect()
}

fn params_of<'t>(node: Node<'t>, src: &str) -> (Vec<Param<'t>>, bool) {
    let mut params = Vec::new();
    let mut varargs = false;
    let Some(list) = node.child_by_field_name("parameters") else {
        return (params, varargs);
    };
    for p in named_children(list) {
        match p.kind() {
            "formal_parameter" => {
                let name = p.child_by_field_name("name").map(|n| src[n.byte_range()].to_string());
                params.push(Param {
                    name: name.unwrap_or_default(),
                    node: p,
                    type_node: p.child_by_field_name("type"),
                });
            }
            "spread_parameter" => {
                varargs = true;
                let children = named_children(p);
                let ty = children.iter().copied().find(|c| {
                    !matches!(c.kind(), "modifiers" | "annotation" | "marker_annotation" | "variable_declarator")
                });
                let name = children
                    .iter()
                    .find(|c| c.kind() == "variable_declarator")
                    .and_then(|d| d.child_by_field_name("name"))
                    .map(|n| src[n.byte_range()].to_string());
                params.push(Param { name: name.unwrap_or_default(), node: p, type_node: ty });
            }
            _ => {}
        }
    }
    (params, varargs)
}

fn dims_of(node: Option<Node<'_>>, src: &str) -> u8 {
    node.map(|d| src[d.byte_range()].matches('[').count() as u8).unwrap_or(0)
}

/// Member declaration nodes of a type body, flattening enum body declarations.
fn body_entries<'t>(body: Node<'t>) -> Vec<Node<'t>> {
    let mut out = Vec::new();
    for c in named_children(body) {
        if c.kind() == "enum_body_declarations" {
            out.extend(named_children(c));
        } else {
            out.push(c);
        }
    }
    out
}

impl<'t> Frontend<'t> {
    pub(super) fn collect_file(&mut self, file: usize) {
        let root = self.files[file].tree.root_node();
        let src = self.src(file);
        let mut scope = FileScope::default();
        for child in named_children(root) {
            match child.kind() {
                "package_declaration" => {
                    if let Some(name) = named_children(child)
                        .into_iter()
                        .find(|c| matches!(c.kind(), "scoped_identifier" | "identifier"))
                    {
                        scope.package = src[name.byte_range()].to_string();
                    }
                }
                "import_declaration" => {
                    let text = &src[child.byte_range()];
                    let body = text.trim_start_matches("import").trim_end_matches(';').trim();
                    if body.starts_with("static ") {
                        continue;
                    }
                    let path: String = body.chars().filter(|c| !c.is_whitespace()).collect();
                    if let Some(prefix) = path.strip_suffix(".*") {
                        scope.on_demand.push(prefix.to_string());
                    } else if let Some((_, simple)) = path.rsplit_once('.') {
                        scope.single_imports.insert(simple.to_string(), path.clone());
                    }
                }
                _ => {}
            }
        }
        self.scopes.push(scope);
        for child in named_children(root) {
            if let Some(flavor) = flavor_of(child.kind()) {
                self.collect_type(file, child, flavor, None, false);
            }
        }
    }

    fn new_type(
        &mut self,
        file: usize,
        node: Node<'t>,
        flavor: Flavor,
        name: String,
        outer: Option<TypeId>,
        pseudo: bool,
    ) -> TypeId {
        let src = self.src(file);
        let rel = self.files[file].rel.clone();
        let (fqn, artifact, owner) = if pseudo {
            let outer = outer.expect("anonymous and local classes have an enclosing type");
            let owner = self.types[outer.index()].owner;
            let counter = self.anon_counter.entry(owner).or_insert(0);
            *counter += 1;
            let fqn = format!("{}${}{}", self.artifacts.get(owner).id, counter, name);
            (fqn, None, owner)
        } else {
            let fqn = match outer {
                Some(o) => format!("{}.{}", self.types[o.index()].fqn, name),
                None if self.scopes[file].package.is_empty() => name.clone(),
                None => format!("{}.{}", self.scopes[file].package, name),
            };
            let mut modifiers = modifiers_of(node, src);
            if flavor == Flavor::Interface || flavor == Flavor::Annotation {
                modifiers.is_abstract = true;
            }
            let idx = self.artifacts.push(Artifact {
                id: fqn.clone(),
                kind: flavor.artifact_kind(),
                name: name.clone(),
                declaring_type: outer.map(|o| self.types[o.index()].owner),
                location: location(&rel, node),
                modifiers,
                anonymous: false,
            });
            (fqn, Some(idx), idx)
        };
        let id = TypeId(self.types.len() as u32);
        let (super_class_node, interface_nodes) = match flavor {
            Flavor::Interface => {
                let ext = named_children(node).into_iter().find(|c| c.kind() == "extends_interfaces");
                (None, list_types(ext))
            }
            _ => (
                node.child_by_field_name("superclass").and_then(|s| named_children(s).into_iter().next()),
                list_types(node.child_by_field_name("interfaces")),
            ),
        };
        if !pseudo {
            self.by_fqn.entry(fqn.clone()).or_insert(id);
        } else {
            self.pseudo_at.insert((file, node.id()), id);
        }
        if let (Some(o), false) = (outer, pseudo) {
            self.types[o.index()].nested.entry(name.clone()).or_insert(id);
        }
        self.types.push(TypeDecl {
            file,
            node,
            name,
            fqn,
            flavor,
            outer,
            pseudo,
            artifact,
            owner,
            type_params: type_param_names(node, src),
            super_class_node,
            interface_nodes,
            super_class: None,
            interfaces: Vec::new(),
            nested: HashMap::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            ctors: Vec::new(),
            slots: Vec::new(),
        });
        id
    }

    fn collect_type(
        &mut self,
        file: usize,
        node: Node<'t>,
        flavor: Flavor,
        outer: Option<TypeId>,
        pseudo: bool,
    ) -> TypeId {
        let src = self.src(file);
        let name = node.child_by_field_name("name").map(|n| src[n.byte_range()].to_string()).unwrap_or_default();
        let id = self.new_type(file, node, flavor, name, outer, pseudo);
        if flavor == Flavor::Record {
            for p in params_of(node, src).0 {
                self.add_record_component(id, p);
            }
        }
        if let Some(body) = node.child_by_field_name("body") {
            self.collect_body(id, body);
        }
        id
    }

    /// Anonymous class body: `new Base(..) { .. }` or an enum constant body.
    fn collect_anonymous(
        &mut self,
        file: usize,
        node: Node<'t>,
        body: Node<'t>,
        base: Option<Node<'t>>,
        outer: TypeId,
    ) {
        let id = self.new_type(file, node, Flavor::Class, String::new(), Some(outer), true);
        self.types[id.index()].super_class_node = base;
        self.collect_body(id, body);
    }

    fn push_member(&mut self, ty: TypeId, artifact: Artifact, decl: MemberDecl<'t>) -> ArtifactIdx {
        let idx = self.artifacts.push(artifact);
        self.member_of.insert(idx, self.members.len());
        self.members.push(decl);
        self.types[ty.index()].slots.push(Slot::Member(idx));
        idx
    }

    fn member_artifact(
        &self,
        ty: TypeId,
        id: String,
        kind: ArtifactKind,
        name: &str,
        node: Node<'_>,
        modifiers: Modifiers,
    ) -> Artifact {
        let d = &self.types[ty.index()];
        Artifact {
            id,
            kind,
            name: name.to_string(),
            declaring_type: Some(d.owner),
            location: location(&self.files[d.file].rel, node),
            modifiers,
            anonymous: d.pseudo,
        }
    }

    fn add_record_component(&mut self, ty: TypeId, p: Param<'t>) {
        let d = &self.types[ty.index()];
        let id = format!("{}#{}", d.fqn, p.name);
        let modifiers = Modifiers { visibility: Visibility::Private, is_final: true, ..Default::default() };
        let artifact = self.member_artifact(ty, id, ArtifactKind::Field, &p.name, p.node, modifiers);
        let name = p.name.clone();
        let decl = MemberDecl {
            ty,
            node: p.node,
            kind: MemberKind::Field,
            params: Vec::new(),
            varargs: false,
            type_params: Vec::new(),
            type_node: p.type_node,
            extra_dims: 0,
            throws: Vec::new(),
            body: None,
            param_tys: Vec::new(),
            value_ty: None,
        };
        let idx = self.push_member(ty, artifact, decl);
        self.types[ty.index()].fields.push((name, idx));
    }

    fn collect_body(&mut self, ty: TypeId, body: Node<'t>) {
        let file = self.types[ty.index()].file;
        let src = self.src(file);
        let flavor = self.types[ty.index()].flavor;
        let in_interface = matches!(flavor, Flavor::Interface | Flavor::Annotation);
        let entries = body_entries(body);

        let mut field_names: HashSet<String> = self.types[ty.index()].fields.iter().map(|(n, _)| n.clone()).collect();
        for e in &entries {
            match e.kind() {
                "field_declaration" | "constant_declaration" => {
                    let mut cursor = e.walk();
                    for d in e.children_by_field_name("declarator", &mut cursor) {
                        if let Some(n) = d.child_by_field_name("name") {
                            field_names.insert(src[n.byte_range()].to_string());
                        }
                    }
                }
                "enum_constant" => {
                    if let Some(n) = e.child_by_field_name("name") {
                        field_names.insert(src[n.byte_range()].to_string());
                    }
                }
                _ => {}
            }
        }

        let mut pending_accessors = Vec::new();
        for e in entries {
            match e.kind() {
                "field_declaration" | "constant_declaration" => {
                    let mut modifiers = modifiers_of(e, src);
                    if in_interface {
                        modifiers = Modifiers {
                            visibility: Visibility::Public,
                            is_static: true,
                            is_final: true,
                            is_abstract: false,
                        };
                    }
                    let type_node = e.child_by_field_name("type");
                    let mut cursor = e.walk();
                    let declarators: Vec<Node<'t>> = e.children_by_field_name("declarator", &mut cursor).collect();
                    for d in declarators {
                        let Some(name_node) = d.child_by_field_name("name") else { continue };
                        let name = src[name_node.byte_range()].to_string();
                        let id = format!("{}#{}", self.types[ty.index()].fqn, name);
                        let artifact = self.member_artifact(ty, id, ArtifactKind::Field, &name, e, modifiers);
                        let value = d.child_by_field_name("value");
                        let decl = MemberDecl {
                            ty,
                            node: d,
                            kind: MemberKind::Field,
                            params: Vec::new(),
                            varargs: false,
                            type_params: Vec::new(),
                            type_node,
                            extra_dims: dims_of(d.child_by_field_name("dimensions"), src),
                            throws: Vec::new(),
                            body: value,
                            param_tys: Vec::new(),
                            value_ty: None,
                        };
                        let idx = self.push_member(ty, artifact, decl);
                        self.types[ty.index()].fields.push((name, idx));
                        if let Some(v) = value {
                            self.scan(file, v, ty);
                        }
                    }
                }
                "enum_constant" => {
                    let Some(name_node) = e.child_by_field_name("name") else { continue };
                    let name = src[name_node.byte_range()].to_string();
                    let id = format!("{}#{}", self.types[ty.index()].fqn, name);
                    let modifiers = Modifiers {
                        visibility: Visibility::Public,
                        is_static: true,
                        is_final: true,
                        is_abstract: false,
                    };
                    let artifact = self.member_artifact(ty, id, ArtifactKind::Field, &name, e, modifiers);
                    let decl = MemberDecl {
                        ty,
                        node: e,
                        kind: MemberKind::EnumConstant,
                        params: Vec::new(),
                        varargs: false,
                        type_params: Vec::new(),
                        type_node: None,
                        extra_dims: 0,
                        throws: Vec::new(),
                        body: e.child_by_field_name("arguments"),
                        param_tys: Vec::new(),
                        value_ty: None,
                    };
                    let idx = self.push_member(ty, artifact, decl);
                    self.types[ty.index()].fields.push((name, idx));
                    if let Some(args) = e.child_by_field_name("arguments") {
                        self.scan(file, args, ty);
                    }
                    if let Some(cb) = e.child_by_field_name("body") {
                        self.collect_anonymous(file, e, cb, None, ty);
                    }
                }
                "method_declaration" | "annotation_type_element_declaration" => {
                    let name =
                        e.child_by_field_name("name").map(|n| src[n.byte_range()].to_string()).unwrap_or_default();
                    let (params, varargs) = params_of(e, src);
                    let sig: Vec<String> = params
                        .iter()
                        .map(|p| {
                            let t = p.type_node.map(|t| erased_type_text(t, src)).unwrap_or_default();
                            let extra = p
                                .node
                                .child_by_field_name("dimensions")
                                .map(|d| erased_type_text(d, src))
                                .unwrap_or_default();
                            if p.node.kind() == "spread_parameter" {
                                format!("{t}...")
                            } else {
                                format!("{t}{extra}")
                            }
                        })
                        .collect();
                    let id = format!("{}#{}({})", self.types[ty.index()].fqn, name, sig.join(","));
                    let (kind, field) = classify_method(e, src, &field_names);
                    let mut modifiers = modifiers_of(e, src);
                    let body = e.child_by_field_name("body");
                    if in_interface {
                        if modifiers.visibility != Visibility::Private {
                            modifiers.visibility = Visibility::Public;
                        }
                        if body.is_none() && !modifiers.is_static {
                            modifiers.is_abstract = true;
                        }
                    }
                    let artifact = self.member_artifact(ty, id, kind, &name, e, modifiers);
                    let mut throws_holder = None;
                    for c in named_children(e) {
                        if c.kind() == "throws" {
                            throws_holder = Some(c);
                        }
                    }
                    let decl = MemberDecl {
                        ty,
                        node: e,
                        kind: MemberKind::Method,
                        params,
                        varargs,
                        type_params: type_param_names(e, src),
                        type_node: e.child_by_field_name("type"),
                        extra_dims: dims_of(e.child_by_field_name("dimensions"), src),
                        throws: list_types(throws_holder),
                        body,
                        param_tys: Vec::new(),
                        value_ty: None,
                    };
                    let idx = self.push_member(ty, artifact, decl);
                    self.types[ty.index()].methods.push(idx);
                    if let Some(f) = field {
                        pending_accessors.push((idx, f.to_string()));
                    }
                    if let Some(b) = body {
                        self.scan(file, b, ty);
                    }
                    if let Some(v) = e.child_by_field_name("value") {
                        self.scan(file, v, ty);
                    }
                }
                "constructor_declaration" | "compact_constructor_declaration" => {
                    let name =
                        e.child_by_field_name("name").map(|n| src[n.byte_range()].to_string()).unwrap_or_default();
                    let (params, varargs) = if e.kind() == "compact_constructor_declaration" {
                        // canonical signature: the record components
                        let record = self.types[ty.index()].node;
                        params_of(record, src)
                    } else {
                        params_of(e, src)
                    };
                    let sig: Vec<String> = params
                        .iter()
                        .map(|p| {
                            let t = p.type_node.map(|t| erased_type_text(t, src)).unwrap_or_default();
                            if p.node.kind() == "spread_parameter" {
                                format!("{t}...")
                            } else {
                                t
                            }
                        })
                        .collect();
                    let id = format!("{}#<init>({})", self.types[ty.index()].fqn, sig.join(","));
                    let modifiers = modifiers_of(e, src);
                    let artifact = self.member_artifact(ty, id, ArtifactKind::Constructor, &name, e, modifiers);
                    let throws_holder = named_children(e).into_iter().find(|c| c.kind() == "throws");
                    let body = e.child_by_field_name("body");
                    let compact = e.kind() == "compact_constructor_declaration";
                    let decl = MemberDecl {
                        ty,
                        node: e,
                        kind: MemberKind::Constructor,
                        // compact constructors declare no parameter nodes of their own
                        params: if compact { Vec::new() } else { params },
                        varargs,
                        type_params: type_param_names(e, src),
                        type_node: None,
                        extra_dims: 0,
                        throws: list_types(throws_holder),
                        body,
                        param_tys: Vec::new(),
                        value_ty: None,
                    };
                    let idx = self.push_member(ty, artifact, decl);
                    self.types[ty.index()].ctors.push(idx);
                    if let Some(b) = body {
                        self.scan(file, b, ty);
                    }
                }
                "static_initializer" | "block" => {
                    self.types[ty.index()].slots.push(Slot::Initializer(e));
                    self.scan(file, e, ty);
                }
                kind => {
                    if let Some(flavor) = flavor_of(kind) {
                        let pseudo = self.types[ty.index()].pseudo;
                        let nested = self.collect_type(file, e, flavor, Some(ty), pseudo);
                        self.types[ty.index()].slots.push(Slot::Nested(nested));
                    }
                }
            }
        }
        for (accessor, field) in pending_accessors {
            let target = self.types[ty.index()].fields.iter().find(|(n, _)| *n == field).map(|(_, i)| *i);
            if let Some(f) = target {
                self.accessor_fields.insert(accessor, f);
            }
        }
    }

    /// Finds anonymous and local classes inside executable code.
    fn scan(&mut self, file: usize, node: Node<'t>, ty: TypeId) {
        if let Some(flavor) = flavor_of(node.kind()) {
            self.collect_type(file, node, flavor, Some(ty), true);
            return;
        }
        if node.kind() == "object_creation_expression" {
            let children = named_children(node);
            let body = children.iter().copied().find(|c| c.kind() == "class_body");
            for c in &children {
                if Some(*c) != body {
                    self.scan(file, *c, ty);
                }
            }
            if let Some(body) = body {
                let base = node.child_by_field_name("type");
                self.collect_anonymous(file, node, body, base, ty);
            }
            return;
        }
        for c in named_children(node) {
            self.scan(file, c, ty);
        }
    }
}
