//! Name resolution: type names, supertypes, member lookup and overloads.

use std::collections::{HashSet, VecDeque};

use tree_sitter::Node;

use super::collect::{erased_type_text, named_children};
use super::{Flavor, Frontend, MemberKind, Ty, TypeId};
use crate::model::ArtifactIdx;

const PRIMITIVES: [&str; 8] = ["int", "long", "short", "byte", "char", "float", "double", "boolean"];
const BOXES: [&str; 8] = ["Integer", "Long", "Short", "Byte", "Character", "Float", "Double", "Boolean"];

fn is_primitive(name: &str) -> bool {
    PRIMITIVES.contains(&name)
}

fn boxes(prim: &str, other: &str) -> bool {
    PRIMITIVES.iter().zip(BOXES).any(|(p, b)| *p == prim && b == other)
}

/// Lexical context for resolving a type name.
#[derive(Clone, Copy)]
pub(super) struct TypeCtx<'a> {
    pub file: usize,
    pub ty: Option<TypeId>,
    pub type_params: &'a [String],
    /// Local and anonymous class names in scope, innermost last.
    pub local_types: &'a [(String, TypeId)],
}

impl<'t> Frontend<'t> {
    /// `t` and its lexically enclosing types, innermost first.
    pub(super) fn chain(&self, t: Option<TypeId>) -> impl Iterator<Item = TypeId> + '_ {
        std::iter::successors(t, move |&x| self.decl(x).outer)
    }

    /// `t` followed by its transitive in-corpus supertypes, breadth first.
    pub(super) fn hierarchy(&self, t: TypeId) -> Vec<TypeId> {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            if seen.insert(x) {
                order.push(x);
                queue.extend(self.decl(x).supers());
            }
        }
        order
    }

    pub(super) fn is_subtype(&self, a: TypeId, b: TypeId) -> bool {
        a == b || self.hierarchy(a).contains(&b)
    }

    fn member_type(&self, t: TypeId, name: &str) -> Option<TypeId> {
        self.hierarchy(t).into_iter().find_map(|x| self.decl(x).nested.get(name).copied())
    }

    fn is_type_param(&self, ctx: TypeCtx<'_>, name: &str) -> bool {
        ctx.type_params.iter().any(|p| p == name)
            || self.chain(ctx.ty).any(|t| self.decl(t).type_params.iter().any(|p| p == name))
    }

    pub(super) fn resolve_simple(&self, ctx: TypeCtx<'_>, name: &str) -> Option<TypeId> {
        if let Some((_, t)) = ctx.local_types.iter().rev().find(|(n, _)| n == name) {
            return Some(*t);
        }
        if self.is_type_param(ctx, name) {
            return None;
        }
        for t in self.chain(ctx.ty) {
            let d = self.decl(t);
            if !d.name.is_empty() && d.name == name {
                return Some(t);
            }
            if let Some(m) = self.member_type(t, name) {
                return Some(m);
            }
        }
        let scope = &self.scopes[ctx.file];
        if let Some(fqn) = scope.single_imports.get(name) {
            // an import of an out-of-corpus type shadows everything below
            return self.lookup_qualified(fqn);
        }
        let same_package =
            if scope.package.is_empty() { name.to_string() } else { format!("{}.{}", scope.package, name) };
        if let Some(&t) = self.by_fqn.get(&same_package) {
            return Some(t);
        }
        scope.on_demand.iter().find_map(|prefix| self.lookup_qualified(&format!("{prefix}.{name}")))
    }

    /// A dotted name as a fully qualified name, where trailing segments may be nested types.
    fn lookup_qualified(&self, dotted: &str) -> Option<TypeId> {
        let segments: Vec<&str> = dotted.split('.').collect();
        for split in (1..=segments.len()).rev() {
            if let Some(&t) = self.by_fqn.get(&segments[..split].join(".")) {
                return segments[split..].iter().try_fold(t, |acc, seg| self.member_type(acc, seg));
            }
        }
        None
    }

    /// A possibly qualified type name in a lexical context.
    pub(super) fn resolve_name(&self, ctx: TypeCtx<'_>, dotted: &str) -> Option<TypeId> {
        let mut segments = dotted.split('.');
        let first = segments.next()?;
        let rest: Vec<&str> = segments.collect();
        if let Some(t) = self.resolve_simple(ctx, first) {
            if let Some(found) = rest.iter().try_fold(t, |acc, seg| self.member_type(acc, seg)) {
                return Some(found);
            }
        }
        if rest.is_empty() {
            return None;
        }
        self.lookup_qualified(dotted)
    }

    pub(super) fn resolve_type_node(&self, ctx: TypeCtx<'_>, node: Node<'_>) -> Option<Ty> {
        let text = || self.text(ctx.file, node);
        match node.kind() {
            "type_identifier" => {
                let name = text();
                if name == "var" {
                    return None;
                }
                Some(match self.resolve_simple(ctx, name) {
                    Some(t) => Ty::Decl(t, 0),
                    None => Ty::named(name),
                })
            }
            "scoped_type_identifier" => {
                let name = erased_type_text(node, self.src(ctx.file));
                Some(match self.resolve_name(ctx, &name) {
                    Some(t) => Ty::Decl(t, 0),
                    None => Ty::named(name.rsplit('.').next().unwrap_or(&name)),
                })
            }
            "generic_type" => named_children(node)
                .into_iter()
                .find(|c| matches!(c.kind(), "type_identifier" | "scoped_type_identifier"))
                .and_then(|c| self.resolve_type_node(ctx, c)),
            "array_type" => {
                let element = self.resolve_type_node(ctx, node.child_by_field_name("element")?)?;
                let dims = node
                    .child_by_field_name("dimensions")
                    .map(|d| self.text(ctx.file, d).matches('[').count() as u8)
                    .unwrap_or(1);
                let total = element.dims() + dims;
                Some(element.with_dims(total))
            }
            "integral_type" | "floating_point_type" | "boolean_type" => Some(Ty::named(text())),
            "annotated_type" => named_children(node)
                .into_iter()
                .rev()
                .find(|c| !matches!(c.kind(), "annotation" | "marker_annotation"))
                .and_then(|c| self.resolve_type_node(ctx, c)),
            _ => None,
        }
    }

    pub(super) fn resolve_supertypes(&mut self) {
        for i in 0..self.types.len() {
            let id = TypeId(i as u32);
            let d = self.decl(id);
            let ctx = TypeCtx { file: d.file, ty: d.outer, type_params: &d.type_params, local_types: &[] };
            let mut super_class = None;
            let mut interfaces = Vec::new();
            if let Some(node) = d.super_class_node {
                if let Some(Ty::Decl(t, 0)) = self.resolve_type_node(ctx, node) {
                    if t != id {
                        match self.decl(t).flavor {
                            Flavor::Interface | Flavor::Annotation => interfaces.push(t),
                            _ => super_class = Some(t),
                        }
                    }
                }
            }
            for &node in &d.interface_nodes {
                if let Some(Ty::Decl(t, 0)) = self.resolve_type_node(ctx, node) {
                    if t != id {
                        interfaces.push(t);
                    }
                }
            }
            let d = &mut self.types[i];
            d.super_class = super_class;
            d.interfaces = interfaces;
        }
    }

    pub(super) fn resolve_signatures(&mut self) {
        for i in 0..self.members.len() {
            let m = &self.members[i];
            let file = self.decl(m.ty).file;
            let ctx = TypeCtx { file, ty: Some(m.ty), type_params: &m.type_params, local_types: &[] };
            let param_tys: Vec<Option<Ty>> = m
                .params
                .iter()
                .map(|p| {
                    let base = p.type_node.and_then(|t| self.resolve_type_node(ctx, t))?;
                    let extra = p
                        .node
                        .child_by_field_name("dimensions")
                        .map(|d| self.text(file, d).matches('[').count() as u8)
                        .unwrap_or(0);
                    let spread = u8::from(p.node.kind() == "spread_parameter");
                    let dims = base.dims() + extra + spread;
                    Some(base.with_dims(dims))
                })
                .collect();
            let value_ty = match m.kind {
                MemberKind::EnumConstant => Some(Ty::Decl(m.ty, 0)),
                MemberKind::Constructor => None,
                MemberKind::Method | MemberKind::Field => m.type_node.and_then(|t| {
                    let base = self.resolve_type_node(ctx, t)?;
                    let dims = base.dims() + m.extra_dims;
                    Some(base.with_dims(dims))
                }),
            };
            let m = &mut self.members[i];
            m.param_tys = param_tys;
            m.value_ty = value_ty;
        }
    }

    /// Field `name` visible in `t`, searching supertypes.
    pub(super) fn find_field(&self, t: TypeId, name: &str) -> Option<ArtifactIdx> {
        self.hierarchy(t).into_iter().find_map(|x| self.decl(x).fields.iter().find(|(n, _)| n == name).map(|(_, i)| *i))
    }

    /// Methods called `name` in `t` and its supertypes, most derived first.
    pub(super) fn methods_named(&self, t: TypeId, name: &str) -> Vec<ArtifactIdx> {
        self.hierarchy(t)
            .into_iter()
            .flat_map(|x| self.decl(x).methods.iter().copied())
            .filter(|&m| self.artifacts.get(m).name == name)
            .collect()
    }

    fn compat(&self, arg: &Option<Ty>, param: &Option<Ty>) -> Option<i32> {
        let (Some(arg), Some(param)) = (arg, param) else { return Some(0) };
        match (arg, param) {
            (Ty::Decl(a, da), Ty::Decl(p, dp)) => {
                if da != dp {
                    None
                } else if a == p {
                    Some(2)
                } else if self.is_subtype(*a, *p) {
                    Some(1)
                } else {
                    None
                }
            }
            (Ty::Decl(..), Ty::Named(n, d)) => (!(is_primitive(n) && *d == 0)).then_some(0),
            (Ty::Named(..), Ty::Decl(..)) => None,
            (Ty::Named(a, da), Ty::Named(p, dp)) => {
                if a == p && da == dp {
                    Some(2)
                } else if da != dp {
                    (p == "Object" && *dp == 0).then_some(0)
                } else if is_primitive(a) && is_primitive(p) {
                    (a != "boolean" && p != "boolean").then_some(1)
                } else if boxes(a, p) || boxes(p, a) {
                    Some(1)
                } else if is_primitive(a) || is_primitive(p) {
                    let other = if is_primitive(a) { p } else { a };
                    matches!(other.as_str(), "Object" | "Number" | "Comparable" | "Serializable").then_some(0)
                } else {
                    Some(0)
                }
            }
        }
    }

    /// Best-effort overload choice by arity and argument types; ties go to the
    /// first candidate in lookup order.
    pub(super) fn choose_overload(&self, candidates: &[ArtifactIdx], args: &[Option<Ty>]) -> Option<ArtifactIdx> {
        let mut best: Option<(i32, ArtifactIdx)> = None;
        let mut tied = false;
        for &c in candidates {
            let m = self.member(c);
            let n = m.param_tys.len();
            let arity_ok = args.len() == n || (m.varargs && args.len() + 1 >= n);
            if !arity_ok {
                continue;
            }
            let mut score = 0;
            let mut compatible = true;
            for (i, a) in args.iter().enumerate() {
                let mut p = m.param_tys[i.min(n - 1)].clone();
                if m.varargs && i + 1 >= n {
                    let spread_elem = p.clone().map(|t| {
                        let d = t.dims().saturating_sub(1);
                        t.with_dims(d)
                    });
                    // `f(T... xs)` accepts either an array or individual elements
                    if a.as_ref().map(Ty::dims) != p.as_ref().map(Ty::dims) {
                        p = spread_elem;
                    }
                }
                match self.compat(a, &p) {
                    Some(s) => score += s,
                    None => {
                        compatible = false;
                        break;
                    }
                }
            }
            if !compatible {
                continue;
            }
            match best {
                Some((s, _)) if s > score => {}
                Some((s, _)) if s == score => tied = true,
                _ => {
                    best = Some((score, c));
                    tied = false;
                }
            }
        }
        if tied {
            if let Some((_, c)) = best {
                log::debug!("ambiguous call bound to {}", self.artifacts.get(c).id);
            }
        }
        best.map(|(_, c)| c)
    }
}
