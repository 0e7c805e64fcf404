//! Getter/setter recognition by body shape.

use std::collections::HashSet;

use tree_sitter::Node;

use crate::model::loc::is_comment;
use crate::model::ArtifactKind;

fn code_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).filter(|c| !is_comment(c.kind())).collect()
}

fn parameter_names<'s>(method: Node<'_>, src: &'s str) -> HashSet<&'s str> {
    let mut names = HashSet::new();
    if let Some(params) = method.child_by_field_name("parameters") {
        for p in code_children(params) {
            if let Some(name) = p.child_by_field_name("name").or_else(|| {
                // spread_parameter nests its name in a variable_declarator
                code_children(p)
                    .into_iter()
                    .find(|c| c.kind() == "variable_declarator")
                    .and_then(|d| d.child_by_field_name("name"))
            }) {
                names.insert(&src[name.byte_range()]);
            }
        }
    }
    names
}

/// The field named by `expr` if it is `f` (not shadowed by a parameter) or `this.f`.
fn field_ref<'s>(expr: Node<'_>, src: &'s str, fields: &HashSet<String>, params: &HashSet<&str>) -> Option<&'s str> {
    let name = match expr.kind() {
        "identifier" => {
            let n = &src[expr.byte_range()];
            if params.contains(n) {
                return None;
            }
            n
        }
        "field_access" => {
            let object = expr.child_by_field_name("object")?;
            let field = expr.child_by_field_name("field")?;
            if object.kind() != "this" || field.kind() != "identifier" {
                return None;
            }
            &src[field.byte_range()]
        }
        _ => return None,
    };
    fields.contains(name).then_some(name)
}

/// Classifies a method declaration: `Accessor` with the exposed field name when
/// its body is a single field return or a single parameter-to-field assignment,
/// `FunctionalMethod` otherwise. Names play no role.
pub(crate) fn classify_method<'s>(
    method: Node<'_>,
    src: &'s str,
    declaring_fields: &HashSet<String>,
) -> (ArtifactKind, Option<&'s str>) {
    let not_accessor = (ArtifactKind::FunctionalMethod, None);
    let Some(body) = method.child_by_field_name("body") else {
        return not_accessor;
    };
    let stmts = code_children(body);
    let [stmt] = stmts.as_slice() else {
        return not_accessor;
    };
    let params = parameter_names(method, src);
    let field = match stmt.kind() {
        "return_statement" => match code_children(*stmt).as_slice() {
            [expr] => field_ref(*expr, src, declaring_fields, &params),
            _ => None,
        },
        "expression_statement" => {
            let assign = code_children(*stmt).into_iter().next();
            assign.filter(|a| a.kind() == "assignment_expression").and_then(|a| {
                let op = a.child_by_field_name("operator")?;
                let right = a.child_by_field_name("right")?;
                let is_param = right.kind() == "identifier" && params.contains(&src[right.byte_range()]);
                if &src[op.byte_range()] != "=" || !is_param {
                    return None;
                }
                field_ref(a.child_by_field_name("left")?, src, declaring_fields, &params)
            })
        }
        _ => None,
    };
    match field {
        Some(f) => (ArtifactKind::Accessor, Some(f)),
        None => not_accessor,
    }
}
