//! Second pass: walks executable code, binding references to artifacts and
//! measuring complexity, nesting and variable use.
//!
//! Lambdas are folded into the enclosing callable. Anonymous and local class
//! members are walked where they appear so captured locals stay in scope.
//! Instance and static initializer blocks have no source artifact; references
//! inside them are discarded.

use tree_sitter::Node;

use super::collect::{flavor_of, named_children};
use super::resolve::TypeCtx;
use super::{Frontend, MemberKind, Slot, Ty, TypeId};
use crate::deps::Relation;
use crate::model::{ArtifactIdx, BodyFacts, Reference, Site, VarKey};

struct Frame {
    source: Option<ArtifactIdx>,
    ty: TypeId,
    type_params: Vec<String>,
    facts: BodyFacts,
    depth: u32,
}

struct Local {
    name: String,
    ty: Option<Ty>,
    key: usize,
}

enum Receiver {
    Static(TypeId),
    Value(Option<Ty>),
}

struct Walker<'f, 't> {
    fe: &'f Frontend<'t>,
    file: usize,
    frames: Vec<Frame>,
    locals: Vec<Local>,
    local_types: Vec<(String, TypeId)>,
    marks: Vec<(usize, usize)>,
    out: &'f mut [BodyFacts],
}

fn literal_type(kind: &str, text: &str) -> Option<Ty> {
    let name = match kind {
        "decimal_integer_literal" | "hex_integer_literal" | "octal_integer_literal" | "binary_integer_literal" => {
            if text.ends_with(['l', 'L']) {
                "long"
            } else {
                "int"
            }
        }
        "decimal_floating_point_literal" | "hex_floating_point_literal" => {
            if text.ends_with(['f', 'F']) {
                "float"
            } else {
                "double"
            }
        }
        "true" | "false" => "boolean",
        "character_literal" => "char",
        "string_literal" | "text_block" => "String",
        _ => return None,
    };
    Some(Ty::named(name))
}

/// Nodes never walked as code.
fn is_inert(kind: &str) -> bool {
    matches!(
        kind,
        "line_comment"
            | "block_comment"
            | "modifiers"
            | "annotation"
            | "marker_annotation"
            | "type_arguments"
            | "type_parameters"
            | "dimensions"
            | "type_identifier"
            | "scoped_type_identifier"
            | "generic_type"
            | "array_type"
            | "integral_type"
            | "floating_point_type"
            | "boolean_type"
            | "void_type"
            | "class_literal"
            | "break_statement"
            | "continue_statement"
            | "scoped_identifier"
            | "super"
            | "null_literal"
    )
}

impl<'f, 't> Walker<'f, 't> {
    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("walker always has a frame")
    }

    fn ctx(&self) -> TypeCtx<'_> {
        let f = self.frames.last().expect("walker always has a frame");
        TypeCtx { file: self.file, ty: Some(f.ty), type_params: &f.type_params, local_types: &self.local_types }
    }

    fn text(&self, n: Node<'_>) -> &'t str {
        self.fe.text(self.file, n)
    }

    fn push_frame(&mut self, source: Option<ArtifactIdx>, ty: TypeId, type_params: Vec<String>, cyclo: u32) {
        let facts = BodyFacts { cyclo, ..Default::default() };
        self.frames.push(Frame { source, ty, type_params, facts, depth: 0 });
    }

    fn pop_frame(&mut self) {
        let f = self.frames.pop().expect("balanced frames");
        if let Some(src) = f.source {
            self.out[src.index()] = f.facts;
        }
    }

    fn push_scope(&mut self) {
        self.marks.push((self.locals.len(), self.local_types.len()));
    }

    fn pop_scope(&mut self) {
        let (l, t) = self.marks.pop().expect("balanced scopes");
        self.locals.truncate(l);
        self.local_types.truncate(t);
    }

    fn declare(&mut self, name_node: Node<'_>, ty: Option<Ty>, key: usize) {
        let name = self.text(name_node).to_string();
        self.locals.push(Local { name, ty, key });
    }

    fn local(&self, name: &str) -> Option<&Local> {
        self.locals.iter().rev().find(|l| l.name == name)
    }

    fn mark(&mut self, key: VarKey) {
        self.frame().facts.variables.insert(key);
    }

    fn emit(&mut self, relation: Relation, target: ArtifactIdx, at: Node<'_>) {
        let file = self.fe.files[self.file].rel.clone();
        let f = self.frame();
        if f.source.is_none() {
            return;
        }
        let pos = at.start_position();
        let site = Site { file, line: pos.row as u32 + 1, column: pos.column as u32 + 1 };
        f.facts.references.push(Reference { relation, target, site });
    }

    fn emit_type(&mut self, relation: Relation, ty: &Option<Ty>, at: Node<'_>) {
        if let Some(Ty::Decl(t, _)) = ty {
            if let Some(a) = self.fe.decl(*t).artifact {
                self.emit(relation, a, at);
            }
        }
    }

    fn unresolved(&mut self) {
        self.frame().facts.unresolved += 1;
    }

    fn add_cyclo(&mut self) {
        self.frame().facts.cyclo += 1;
    }

    fn nested<R>(&mut self, f: impl FnOnce(&mut Self) -> R) -> R {
        let frame = self.frame();
        frame.depth += 1;
        frame.facts.max_nesting = frame.facts.max_nesting.max(frame.depth);
        let r = f(self);
        self.frame().depth -= 1;
        r
    }

    fn resolve_type(&self, n: Node<'_>) -> Option<Ty> {
        self.fe.resolve_type_node(self.ctx(), n)
    }

    fn super_class(&self) -> Option<TypeId> {
        let t = self.frames.last().expect("frame").ty;
        self.fe.decl(t).super_class
    }

    // ---- members and types ----

    fn walk_type(&mut self, t: TypeId) {
        let slots = self.fe.decl(t).slots.clone();
        for slot in slots {
            match slot {
                Slot::Member(a) => self.walk_member(a),
                Slot::Initializer(n) => {
                    self.push_frame(None, t, Vec::new(), 0);
                    self.visit(n);
                    self.pop_frame();
                }
                Slot::Nested(n) if self.fe.decl(n).pseudo => self.walk_type(n),
                Slot::Nested(_) => {}
            }
        }
    }

    fn walk_member(&mut self, a: ArtifactIdx) {
        let fe = self.fe;
        let m = fe.member(a);
        let callable = matches!(m.kind, MemberKind::Method | MemberKind::Constructor);
        self.push_frame(Some(a), m.ty, m.type_params.clone(), u32::from(callable));
        self.push_scope();
        match m.kind {
            MemberKind::Method | MemberKind::Constructor => {
                if let Some(tn) = m.type_node {
                    self.emit_type(Relation::Return, &m.value_ty, tn);
                }
                for (p, pty) in m.params.iter().zip(&m.param_tys) {
                    if let Some(tn) = p.type_node {
                        self.emit_type(Relation::Parameter, pty, tn);
                    }
                    if let Some(name) = p.node.child_by_field_name("name").or_else(|| {
                        named_children(p.node)
                            .into_iter()
                            .find(|c| c.kind() == "variable_declarator")
                            .and_then(|d| d.child_by_field_name("name"))
                    }) {
                        self.declare(name, pty.clone(), p.node.start_byte());
                    }
                }
                if m.node.kind() == "compact_constructor_declaration" {
                    // record components act as the implicit parameters
                    let record = fe.decl(m.ty);
                    for &slot in &record.slots {
                        if let Slot::Member(f) = slot {
                            let fm = fe.member(f);
                            if fm.kind == MemberKind::Field && fm.node.kind() == "formal_parameter" {
                                if let Some(name) = fm.node.child_by_field_name("name") {
                                    self.declare(name, fm.value_ty.clone(), fm.node.start_byte());
                                }
                            }
                        }
                    }
                }
                for &tn in &m.throws {
                    let ty = self.resolve_type(tn);
                    self.emit_type(Relation::Throws, &ty, tn);
                }
                if let Some(body) = m.body {
                    self.visit(body);
                }
            }
            MemberKind::Field => {
                if let Some(tn) = m.type_node {
                    self.emit_type(Relation::Contain, &m.value_ty, tn);
                }
                if let Some(v) = m.body {
                    self.visit(v);
                }
            }
            MemberKind::EnumConstant => {
                if let Some(args) = m.body {
                    self.visit(args);
                }
                if let Some(&anon) = fe.pseudo_at.get(&(self.file, m.node.id())) {
                    self.walk_type(anon);
                }
            }
        }
        let rows = (m.node.start_position().row, m.node.end_position().row);
        self.frame().facts.loc = fe.files[self.file].lines.count(rows.0, rows.1);
        self.pop_scope();
        self.pop_frame();
    }

    // ---- code ----

    fn children(&mut self, n: Node<'_>) {
        for c in named_children(n) {
            self.visit(c);
        }
    }

    fn stmt_body(&mut self, n: Option<Node<'_>>) {
        let Some(n) = n else { return };
        if n.kind() == "block" {
            self.visit(n);
        } else {
            self.nested(|w| w.visit(n));
        }
    }

    fn visit(&mut self, n: Node<'_>) -> Option<Ty> {
        let kind = n.kind();
        if is_inert(kind) {
            return None;
        }
        if let Some(t) = literal_type(kind, self.text(n)) {
            return Some(t);
        }
        if flavor_of(kind).is_some() {
            if let Some(&t) = self.fe.pseudo_at.get(&(self.file, n.id())) {
                let name = self.fe.decl(t).name.clone();
                self.local_types.push((name, t));
                self.walk_type(t);
            }
            return None;
        }
        match kind {
            "block" | "constructor_body" => {
                self.nested(|w| {
                    w.push_scope();
                    w.children(n);
                    w.pop_scope();
                });
                None
            }
            "switch_block" => {
                self.nested(|w| {
                    w.push_scope();
                    w.children(n);
                    w.pop_scope();
                });
                None
            }
            "switch_label" => {
                if self.text(n).starts_with("case") {
                    self.add_cyclo();
                }
                None
            }
            "local_variable_declaration" => {
                self.local_declaration(n);
                None
            }
            "if_statement" => {
                self.add_cyclo();
                if let Some(c) = n.child_by_field_name("condition") {
                    self.visit(c);
                }
                self.stmt_body(n.child_by_field_name("consequence"));
                if let Some(alt) = n.child_by_field_name("alternative") {
                    if alt.kind() == "if_statement" {
                        self.visit(alt);
                    } else {
                        self.stmt_body(Some(alt));
                    }
                }
                None
            }
            "while_statement" | "do_statement" => {
                self.add_cyclo();
                if let Some(c) = n.child_by_field_name("condition") {
                    self.visit(c);
                }
                self.stmt_body(n.child_by_field_name("body"));
                None
            }
            "for_statement" => {
                self.add_cyclo();
                self.push_scope();
                let mut cursor = n.walk();
                let inits: Vec<Node<'_>> = n.children_by_field_name("init", &mut cursor).collect();
                for c in inits {
                    self.visit(c);
                }
                if let Some(c) = n.child_by_field_name("condition") {
                    self.visit(c);
                }
                let mut cursor = n.walk();
                let updates: Vec<Node<'_>> = n.children_by_field_name("update", &mut cursor).collect();
                for c in updates {
                    self.visit(c);
                }
                self.stmt_body(n.child_by_field_name("body"));
                self.pop_scope();
                None
            }
            "enhanced_for_statement" => {
                self.add_cyclo();
                self.push_scope();
                if let Some(v) = n.child_by_field_name("value") {
                    self.visit(v);
                }
                if let (Some(tn), Some(name)) = (n.child_by_field_name("type"), n.child_by_field_name("name")) {
                    let ty = self.resolve_type(tn);
                    self.emit_type(Relation::Contain, &ty, tn);
                    self.declare(name, ty, n.start_byte());
                    self.mark(VarKey::Local(n.start_byte()));
                }
                self.stmt_body(n.child_by_field_name("body"));
                self.pop_scope();
                None
            }
            "catch_clause" => {
                self.add_cyclo();
                self.push_scope();
                for c in named_children(n) {
                    if c.kind() == "catch_formal_parameter" {
                        let mut first = None;
                        for ct in named_children(c).into_iter().filter(|x| x.kind() == "catch_type") {
                            for tn in named_children(ct) {
                                let ty = self.resolve_type(tn);
                                self.emit_type(Relation::Contain, &ty, tn);
                                first = first.or(ty);
                            }
                        }
                        if let Some(name) = c.child_by_field_name("name") {
                            self.declare(name, first, c.start_byte());
                            self.mark(VarKey::Local(c.start_byte()));
                        }
                    } else {
                        self.visit(c);
                    }
                }
                self.pop_scope();
                None
            }
            "try_with_resources_statement" => {
                self.push_scope();
                for c in named_children(n) {
                    if c.kind() == "resource_specification" {
                        for r in named_children(c) {
                            self.resource(r);
                        }
                    } else {
                        self.visit(c);
                    }
                }
                self.pop_scope();
                None
            }
            "labeled_statement" => {
                for c in named_children(n).into_iter().filter(|c| c.kind() != "identifier") {
                    self.visit(c);
                }
                None
            }
            "throw_statement" => {
                let ty = named_children(n).into_iter().next().and_then(|e| self.visit(e));
                self.emit_type(Relation::Throws, &ty, n);
                None
            }
            "ternary_expression" => {
                self.add_cyclo();
                if let Some(c) = n.child_by_field_name("condition") {
                    self.visit(c);
                }
                let a = n.child_by_field_name("consequence").and_then(|c| self.visit(c));
                let b = n.child_by_field_name("alternative").and_then(|c| self.visit(c));
                a.or(b)
            }
            "binary_expression" => self.binary(n),
            "lambda_expression" => {
                self.lambda(n);
                None
            }
            "method_invocation" => self.invocation(n),
            "object_creation_expression" => self.creation(n),
            "explicit_constructor_invocation" => {
                self.constructor_call(n);
                None
            }
            "method_reference" => {
                self.method_reference(n);
                None
            }
            "field_access" => self.field_access(n),
            "identifier" => self.name_ref(n),
            "this" => Some(Ty::Decl(self.frames.last().expect("frame").ty, 0)),
            "cast_expression" => {
                let mut cursor = n.walk();
                let types: Vec<Node<'_>> = n.children_by_field_name("type", &mut cursor).collect();
                let mut result = None;
                for tn in types {
                    let ty = self.resolve_type(tn);
                    self.emit_type(Relation::Cast, &ty, tn);
                    result = result.or(ty);
                }
                if let Some(v) = n.child_by_field_name("value") {
                    self.visit(v);
                }
                result
            }
            "instanceof_expression" => {
                if let Some(l) = n.child_by_field_name("left") {
                    self.visit(l);
                }
                if let (Some(tn), Some(name)) = (n.child_by_field_name("right"), n.child_by_field_name("name")) {
                    let ty = self.resolve_type(tn);
                    self.emit_type(Relation::Contain, &ty, tn);
                    self.declare(name, ty, name.start_byte());
                    self.mark(VarKey::Local(name.start_byte()));
                }
                Some(Ty::named("boolean"))
            }
            "array_access" => {
                let arr = n.child_by_field_name("array").and_then(|a| self.visit(a));
                if let Some(i) = n.child_by_field_name("index") {
                    self.visit(i);
                }
                arr.filter(|t| t.dims() > 0).map(|t| {
                    let d = t.dims() - 1;
                    t.with_dims(d)
                })
            }
            "array_creation_expression" => {
                let base = n.child_by_field_name("type").and_then(|t| self.resolve_type(t));
                let mut dims = 0u8;
                let mut cursor = n.walk();
                let parts: Vec<Node<'_>> = n.children_by_field_name("dimensions", &mut cursor).collect();
                for d in parts {
                    if d.kind() == "dimensions_expr" {
                        dims += 1;
                        self.children(d);
                    } else {
                        dims += self.text(d).matches('[').count() as u8;
                    }
                }
                if let Some(v) = n.child_by_field_name("value") {
                    self.visit(v);
                }
                base.map(|t| {
                    let total = t.dims() + dims;
                    t.with_dims(total)
                })
            }
            "assignment_expression" => {
                let left = n.child_by_field_name("left").and_then(|l| self.visit(l));
                if let Some(r) = n.child_by_field_name("right") {
                    self.visit(r);
                }
                left
            }
            "parenthesized_expression" | "update_expression" | "unary_expression" => {
                let mut result = None;
                for c in named_children(n) {
                    let t = self.visit(c);
                    result = result.or(t);
                }
                result
            }
            _ => {
                self.children(n);
                None
            }
        }
    }

    fn binary(&mut self, n: Node<'_>) -> Option<Ty> {
        let op = n.child_by_field_name("operator").map(|o| self.text(o)).unwrap_or("");
        if op == "&&" || op == "||" {
            self.add_cyclo();
        }
        let l = n.child_by_field_name("left").and_then(|c| self.visit(c));
        let r = n.child_by_field_name("right").and_then(|c| self.visit(c));
        match op {
            "&&" | "||" | "==" | "!=" | "<" | ">" | "<=" | ">=" => Some(Ty::named("boolean")),
            "+" if [&l, &r].iter().any(|t| matches!(t, Some(Ty::Named(s, 0)) if s == "String")) => {
                Some(Ty::named("String"))
            }
            _ => l.or(r),
        }
    }

    fn local_declaration(&mut self, n: Node<'_>) {
        let Some(tn) = n.child_by_field_name("type") else { return };
        let is_var = self.text(tn) == "var";
        let declared = if is_var { None } else { self.resolve_type(tn) };
        let mut cursor = n.walk();
        let declarators: Vec<Node<'_>> = n.children_by_field_name("declarator", &mut cursor).collect();
        for d in declarators {
            let value_ty = d.child_by_field_name("value").and_then(|v| self.visit(v));
            let extra =
                d.child_by_field_name("dimensions").map(|x| self.text(x).matches('[').count() as u8).unwrap_or(0);
            let ty = if is_var {
                value_ty
            } else {
                self.emit_type(Relation::Contain, &declared, tn);
                declared.clone().map(|t| {
                    let dims = t.dims() + extra;
                    t.with_dims(dims)
                })
            };
            if let Some(name) = d.child_by_field_name("name") {
                self.declare(name, ty, d.start_byte());
                self.mark(VarKey::Local(d.start_byte()));
            }
        }
    }

    fn resource(&mut self, r: Node<'_>) {
        let (Some(tn), Some(name)) = (r.child_by_field_name("type"), r.child_by_field_name("name")) else {
            self.children(r);
            return;
        };
        let value_ty = r.child_by_field_name("value").and_then(|v| self.visit(v));
        let ty = if self.text(tn) == "var" {
            value_ty
        } else {
            let ty = self.resolve_type(tn);
            self.emit_type(Relation::Contain, &ty, tn);
            ty
        };
        self.declare(name, ty, r.start_byte());
        self.mark(VarKey::Local(r.start_byte()));
    }

    fn lambda(&mut self, n: Node<'_>) {
        self.push_scope();
        if let Some(params) = n.child_by_field_name("parameters") {
            match params.kind() {
                "identifier" => self.declare(params, None, params.start_byte()),
                _ => {
                    for p in named_children(params) {
                        match p.kind() {
                            "identifier" => self.declare(p, None, p.start_byte()),
                            "formal_parameter" => {
                                let ty = p.child_by_field_name("type").and_then(|t| self.resolve_type(t));
                                if let Some(name) = p.child_by_field_name("name") {
                                    self.declare(name, ty, p.start_byte());
                                }
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        if let Some(body) = n.child_by_field_name("body") {
            self.visit(body);
        }
        self.pop_scope();
    }

    /// Whether a simple name denotes a variable or a field in scope.
    fn is_value_name(&self, name: &str) -> bool {
        if self.local(name).is_some() {
            return true;
        }
        let ty = self.frames.last().expect("frame").ty;
        self.fe.chain(Some(ty)).any(|t| self.fe.find_field(t, name).is_some())
    }

    fn leftmost_identifier(&self, n: Node<'_>) -> Option<&'t str> {
        match n.kind() {
            "identifier" => Some(self.text(n)),
            "field_access" => {
                let f = n.child_by_field_name("field")?;
                if f.kind() != "identifier" {
                    return None;
                }
                self.leftmost_identifier(n.child_by_field_name("object")?)
            }
            _ => None,
        }
    }

    fn receiver(&mut self, o: Node<'_>) -> Receiver {
        if let Some(first) = self.leftmost_identifier(o) {
            if !self.is_value_name(first) {
                let dotted: String = self.text(o).chars().filter(|c| !c.is_whitespace()).collect();
                return match self.fe.resolve_name(self.ctx(), &dotted) {
                    Some(t) => Receiver::Static(t),
                    None => Receiver::Value(self.visit(o)),
                };
            }
        }
        Receiver::Value(self.visit(o))
    }

    fn receiver_type(&mut self, o: Node<'_>) -> Option<TypeId> {
        match o.kind() {
            "super" => self.super_class(),
            "this" => Some(self.frames.last().expect("frame").ty),
            _ => match self.receiver(o) {
                Receiver::Static(t) => Some(t),
                Receiver::Value(Some(Ty::Decl(t, 0))) => Some(t),
                Receiver::Value(_) => None,
            },
        }
    }

    fn name_ref(&mut self, n: Node<'_>) -> Option<Ty> {
        let name = self.text(n);
        if let Some(l) = self.local(name) {
            let (key, ty) = (l.key, l.ty.clone());
            self.mark(VarKey::Local(key));
            return ty;
        }
        let ty = self.frames.last().expect("frame").ty;
        let field = self.fe.chain(Some(ty)).find_map(|t| self.fe.find_field(t, name));
        match field {
            Some(f) => self.use_field(f, n),
            None => None,
        }
    }

    fn use_field(&mut self, f: ArtifactIdx, at: Node<'_>) -> Option<Ty> {
        self.emit(Relation::Use, f, at);
        self.mark(VarKey::Field(f));
        self.fe.member(f).value_ty.clone()
    }

    fn field_access(&mut self, n: Node<'_>) -> Option<Ty> {
        let (Some(obj), Some(field)) = (n.child_by_field_name("object"), n.child_by_field_name("field")) else {
            self.children(n);
            return None;
        };
        if field.kind() == "this" {
            // Outer.this
            let dotted: String = self.text(obj).chars().filter(|c| !c.is_whitespace()).collect();
            return self.fe.resolve_name(self.ctx(), &dotted).map(|t| Ty::Decl(t, 0));
        }
        let name = self.text(field);
        let base = match obj.kind() {
            "super" => self.super_class(),
            "this" => Some(self.frames.last().expect("frame").ty),
            _ => match self.receiver(obj) {
                Receiver::Static(t) => Some(t),
                Receiver::Value(Some(Ty::Decl(t, 0))) => Some(t),
                Receiver::Value(Some(t)) if t.dims() > 0 && name == "length" => return Some(Ty::named("int")),
                Receiver::Value(_) => None,
            },
        };
        match base.and_then(|t| self.fe.find_field(t, name)) {
            Some(f) => self.use_field(f, field),
            None => {
                self.unresolved();
                None
            }
        }
    }

    fn invocation(&mut self, n: Node<'_>) -> Option<Ty> {
        let name_node = n.child_by_field_name("name")?;
        let name = self.text(name_node);
        let candidates = match n.child_by_field_name("object") {
            None => {
                let ty = self.frames.last().expect("frame").ty;
                self.fe
                    .chain(Some(ty))
                    .map(|t| self.fe.methods_named(t, name))
                    .find(|c| !c.is_empty())
                    .unwrap_or_default()
            }
            Some(o) => self.receiver_type(o).map(|t| self.fe.methods_named(t, name)).unwrap_or_default(),
        };
        let args: Vec<Option<Ty>> = match n.child_by_field_name("arguments") {
            Some(a) => named_children(a).into_iter().map(|c| self.visit(c)).collect(),
            None => Vec::new(),
        };
        match self.fe.choose_overload(&candidates, &args) {
            Some(m) => {
                self.emit(Relation::Call, m, name_node);
                self.fe.member(m).value_ty.clone()
            }
            None => {
                self.unresolved();
                None
            }
        }
    }

    fn creation(&mut self, n: Node<'_>) -> Option<Ty> {
        let tn = n.child_by_field_name("type");
        let mut body = None;
        for c in named_children(n) {
            match c.kind() {
                "class_body" => body = Some(c),
                "argument_list" | "type_arguments" | "annotation" | "marker_annotation" => {}
                _ if Some(c) == tn => {}
                // qualified creation: `outer.new Inner()`
                _ => {
                    self.visit(c);
                }
            }
        }
        let ty = tn.and_then(|t| self.resolve_type(t));
        let args: Vec<Option<Ty>> = match n.child_by_field_name("arguments") {
            Some(a) => named_children(a).into_iter().map(|c| self.visit(c)).collect(),
            None => Vec::new(),
        };
        if let (Some(Ty::Decl(t, 0)), Some(tn)) = (&ty, tn) {
            self.emit_type(Relation::Create, &ty, tn);
            let ctors = &self.fe.decl(*t).ctors;
            if !ctors.is_empty() {
                match self.fe.choose_overload(ctors, &args) {
                    Some(c) => self.emit(Relation::Call, c, tn),
                    None => self.unresolved(),
                }
            }
        }
        if body.is_some() {
            if let Some(&anon) = self.fe.pseudo_at.get(&(self.file, n.id())) {
                self.walk_type(anon);
            }
        }
        ty
    }

    fn constructor_call(&mut self, n: Node<'_>) {
        if let Some(o) = n.child_by_field_name("object") {
            self.visit(o);
        }
        let args: Vec<Option<Ty>> = match n.child_by_field_name("arguments") {
            Some(a) => named_children(a).into_iter().map(|c| self.visit(c)).collect(),
            None => Vec::new(),
        };
        let Some(which) = n.child_by_field_name("constructor") else { return };
        let target =
            if which.kind() == "this" { Some(self.frames.last().expect("frame").ty) } else { self.super_class() };
        if let Some(t) = target {
            let ctors = &self.fe.decl(t).ctors;
            if !ctors.is_empty() {
                match self.fe.choose_overload(ctors, &args) {
                    Some(c) => self.emit(Relation::Call, c, which),
                    None => self.unresolved(),
                }
            }
        }
    }

    fn method_reference(&mut self, n: Node<'_>) {
        let named = named_children(n);
        let Some(&recv) = named.first() else { return };
        let mut cursor = n.walk();
        let is_new = n.children(&mut cursor).last().is_some_and(|c| c.kind() == "new");
        let recv_ty = match recv.kind() {
            "type_identifier" | "scoped_type_identifier" | "generic_type" | "array_type" => {
                match self.resolve_type(recv) {
                    Some(Ty::Decl(t, 0)) => Some(t),
                    _ => None,
                }
            }
            _ => self.receiver_type(recv),
        };
        let Some(t) = recv_ty else {
            self.unresolved();
            return;
        };
        if is_new {
            self.emit_type(Relation::Create, &Some(Ty::Decl(t, 0)), recv);
            if let Some(&c) = self.fe.decl(t).ctors.first() {
                self.emit(Relation::Call, c, recv);
            }
            return;
        }
        let Some(name_node) = named.last().copied().filter(|x| x.kind() == "identifier" && named.len() > 1) else {
            return;
        };
        match self.fe.methods_named(t, self.text(name_node)).first() {
            Some(&m) => self.emit(Relation::Call, m, name_node),
            None => self.unresolved(),
        }
    }
}

impl<'t> Frontend<'t> {
    /// Walks every named type, filling `bodies` (indexed by artifact).
    pub(super) fn walk_all(&self, bodies: &mut [BodyFacts]) {
        for (i, d) in self.types.iter().enumerate() {
            let Some(art) = d.artifact else { continue };
            let t = TypeId(i as u32);
            let rows = (d.node.start_position().row, d.node.end_position().row);
            let lines = &self.files[d.file].lines;
            let site_of = |n: Node<'_>| {
                let p = n.start_position();
                Site { file: self.files[d.file].rel.clone(), line: p.row as u32 + 1, column: p.column as u32 + 1 }
            };
            let mut facts = BodyFacts { loc: lines.count(rows.0, rows.1), ..Default::default() };
            if let (Some(sup), Some(node)) = (d.super_class, d.super_class_node) {
                if let Some(target) = self.decl(sup).artifact {
                    facts.references.push(Reference { relation: Relation::Extend, target, site: site_of(node) });
                }
            }
            // interfaces resolve in declaration order, so pair them by position
            let iface_nodes: Vec<Node<'t>> = if d.super_class.is_none() && d.super_class_node.is_some() {
                d.super_class_node.into_iter().chain(d.interface_nodes.iter().copied()).collect()
            } else {
                d.interface_nodes.clone()
            };
            let ctx = TypeCtx { file: d.file, ty: d.outer, type_params: &d.type_params, local_types: &[] };
            for node in iface_nodes {
                if let Some(Ty::Decl(it, 0)) = self.resolve_type_node(ctx, node) {
                    if it == t || !d.interfaces.contains(&it) {
                        continue;
                    }
                    if let Some(target) = self.decl(it).artifact {
                        let relation = if d.flavor.artifact_kind() == crate::model::ArtifactKind::Interface {
                            Relation::Extend
                        } else {
                            Relation::Implement
                        };
                        facts.references.push(Reference { relation, target, site: site_of(node) });
                    }
                }
            }
            bodies[art.index()] = facts;

            let mut w = Walker {
                fe: self,
                file: d.file,
                frames: Vec::new(),
                locals: Vec::new(),
                local_types: Vec::new(),
                marks: Vec::new(),
                out: bodies,
            };
            w.walk_type(t);
        }
    }
}
