//! Strict Newick serialization: branch lengths as plain decimals,
//! semicolon-terminated, children in canonical order (by the smallest
//! leaf label of each subtree) so export is a fixed point under
//! re-parsing.

use super::{StyleTree, TreeEdge, TreeError};
use crate::scalar::Real;

impl<R: Real> StyleTree<R> {
    /// Serialize from the designated root with canonical child ordering.
    pub fn to_newick(&self) -> String {
        let adj = self.adjacency();
        let mut out = String::new();
        write_subtree(self, &adj, self.root(), None, &mut out);
        out.push(';');
        out
    }
}

fn write_subtree<R: Real>(
    tree: &StyleTree<R>,
    adj: &[Vec<(usize, usize)>],
    node: usize,
    parent: Option<usize>,
    out: &mut String,
) {
    let mut children: Vec<(usize, usize)> = adj[node]
        .iter()
        .copied()
        .filter(|&(c, _)| Some(c) != parent)
        .collect();
    if children.is_empty() {
        out.push_str(&quote_label(tree.label(node).unwrap_or("")));
        return;
    }
    children.sort_by(|&(a, _), &(b, _)| {
        tree.min_leaf_label(adj, a, Some(node))
            .cmp(tree.min_leaf_label(adj, b, Some(node)))
    });
    out.push('(');
    for (i, (child, edge_idx)) in children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_subtree(tree, adj, *child, Some(node), out);
        out.push(':');
        out.push_str(&format!("{}", tree.edges()[*edge_idx].length));
    }
    out.push(')');
    if let Some(label) = tree.label(node) {
        out.push_str(&quote_label(label));
    }
}

fn quote_label(label: &str) -> String {
    let needs_quotes = label
        .chars()
        .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | ';' | '\'' | '"' | '[' | ']'));
    if needs_quotes {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}

/// Parse a semicolon-terminated Newick string with branch lengths.
pub fn parse_newick<R: Real>(text: &str) -> Result<StyleTree<R>, TreeError> {
    let mut parser = Parser {
        bytes: text.trim().as_bytes(),
        pos: 0,
        labels: Vec::new(),
        edges: Vec::new(),
    };
    let root = parser.subtree()?;
    parser.expect(b';')?;
    parser.skip_whitespace();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing content after ';'"));
    }
    let tree = StyleTree::new(parser.labels, parser.edges, root, 0);
    tree.validate()?;
    Ok(tree)
}

struct Parser<'a, R: Real> {
    bytes: &'a [u8],
    pos: usize,
    labels: Vec<Option<String>>,
    edges: Vec<TreeEdge<R>>,
}

impl<'a, R: Real> Parser<'a, R> {
    fn error(&self, message: &str) -> TreeError {
        TreeError::NewickParse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), TreeError> {
        self.skip_whitespace();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn new_node(&mut self, label: Option<String>) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    fn subtree(&mut self) -> Result<usize, TreeError> {
        self.skip_whitespace();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let node = self.new_node(None);
            loop {
                let child = self.subtree()?;
                let length = self.branch_length()?;
                self.edges.push(TreeEdge {
                    a: node,
                    b: child,
                    length,
                });
                self.skip_whitespace();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
            // optional internal label, kept only if present
            if let Some(label) = self.label()? {
                self.labels[node] = Some(label);
            }
            Ok(node)
        } else {
            let label = self
                .label()?
                .ok_or_else(|| self.error("expected a leaf label"))?;
            Ok(self.new_node(Some(label)))
        }
    }

    fn label(&mut self) -> Result<Option<String>, TreeError> {
        self.skip_whitespace();
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut out = String::new();
                loop {
                    match self.peek() {
                        Some(b'\'') => {
                            self.pos += 1;
                            if self.peek() == Some(b'\'') {
                                out.push('\'');
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                        Some(c) => {
                            out.push(c as char);
                            self.pos += 1;
                        }
                        None => return Err(self.error("unterminated quoted label")),
                    }
                }
                Ok(Some(out))
            }
            Some(c) if !matches!(c, b'(' | b')' | b',' | b':' | b';') => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if matches!(c, b'(' | b')' | b',' | b':' | b';') || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..self.pos])
                    .map_err(|_| self.error("label is not UTF-8"))?;
                Ok(Some(text.to_string()))
            }
            _ => Ok(None),
        }
    }

    fn branch_length(&mut self) -> Result<R, TreeError> {
        self.skip_whitespace();
        if self.peek() != Some(b':') {
            return Ok(R::zero());
        }
        self.pos += 1;
        self.skip_whitespace();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if matches!(c, b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| self.error("branch length is not UTF-8"))?;
        let value: f64 = text
            .parse()
            .map_err(|_| self.error(&format!("invalid branch length '{text}'")))?;
        Ok(R::c(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::DistanceMatrix;
    use crate::tree::neighbor_joining;

    #[test]
    fn star_newick() {
        // dyadic distances keep the three-point formulas exact in f64
        let values = vec![
            0.0, 0.25, 0.375, //
            0.25, 0.0, 0.5, //
            0.375, 0.5, 0.0,
        ];
        let m = DistanceMatrix::from_values(
            vec!["A".to_string(), "B".to_string(), "C".to_string()],
            values,
        );
        let tree = neighbor_joining(&m).unwrap();
        assert_eq!(tree.to_newick(), "(A:0.0625,B:0.1875,C:0.3125);");
    }

    #[test]
    fn parse_round_trip() {
        let text = "(A:0.05,B:0.15,C:0.25);";
        let tree: StyleTree = parse_newick(text).unwrap();
        assert_eq!(tree.leaf_count(), 3);
        assert_eq!(tree.to_newick(), text);
    }

    #[test]
    fn nested_round_trip() {
        let text = "((A:0.1,B:0.2):0.05,(C:0.3,D:0.4):0.07,E:0.5);";
        let tree: StyleTree = parse_newick(text).unwrap();
        assert_eq!(tree.leaf_count(), 5);
        assert_eq!(tree.node_count(), 8);
        assert_eq!(tree.to_newick(), text);
    }

    #[test]
    fn quoted_labels_round_trip() {
        let text = "('R. Reagan':0.1,'B. O''Neill':0.2,C:0.3);";
        let tree: StyleTree = parse_newick(text).unwrap();
        assert!(tree.leaf_labels().contains(&"B. O'Neill"));
        // children re-sort canonically; a second pass is a fixed point
        let canonical = tree.to_newick();
        assert_eq!(canonical, "('B. O''Neill':0.2,C:0.3,'R. Reagan':0.1);");
        let reparsed: StyleTree = parse_newick(&canonical).unwrap();
        assert_eq!(reparsed.to_newick(), canonical);
    }

    #[test]
    fn canonical_ordering_applied_on_export() {
        let shuffled = "(C:0.25,A:0.05,B:0.15);";
        let tree: StyleTree = parse_newick(shuffled).unwrap();
        assert_eq!(tree.to_newick(), "(A:0.05,B:0.15,C:0.25);");
    }

    #[test]
    fn malformed_inputs_rejected() {
        for bad in ["", "(A:0.1,B:0.2", "(A:0.1,B:bad);", "(A,B));", "(A:1,B:2); junk"] {
            assert!(
                parse_newick::<f64>(bad).is_err(),
                "should reject: {bad}"
            );
        }
    }

    #[test]
    fn preserves_lengths_exactly() {
        let text = "(A:0.123456789012345,B:1e-9,C:12345.6789);";
        let tree: StyleTree = parse_newick(text).unwrap();
        let total: f64 = tree.total_branch_length();
        assert!((total - (0.123456789012345 + 1e-9 + 12345.6789)).abs() < 1e-12);
    }
}
