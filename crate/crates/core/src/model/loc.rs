//! Code-line counting: physical lines holding at least one non-comment token.

use tree_sitter::Node;

/// Per-row flags marking rows that carry code.
#[derive(Debug, Clone)]
pub(crate) struct CodeLines {
    rows: Vec<bool>,
}

impl CodeLines {
    pub(crate) fn of_tree(root: Node<'_>, source_rows: usize) -> Self {
        let mut rows = vec![false; source_rows.max(root.end_position().row + 1)];
        let mut cursor = root.walk();
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if is_comment(node.kind()) {
                continue;
            }
            if node.child_count() == 0 {
                if node.start_byte() < node.end_byte() {
                    rows[node.start_position().row..=node.end_position().row].fill(true);
                }
                continue;
            }
            stack.extend(node.children(&mut cursor));
        }
        CodeLines { rows }
    }

    /// Code lines within the inclusive zero-based row range.
    pub(crate) fn count(&self, first_row: usize, last_row: usize) -> u32 {
        let last = last_row.min(self.rows.len().saturating_sub(1));
        if first_row > last {
            return 0;
        }
        self.rows[first_row..=last].iter().filter(|&&b| b).count() as u32
    }

    pub(crate) fn total(&self) -> usize {
        self.rows.iter().filter(|&&b| b).count()
    }
}

pub(crate) fn is_comment(kind: &str) -> bool {
    matches!(kind, "line_comment" | "block_comment" | "comment")
}
