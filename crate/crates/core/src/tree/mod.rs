//! Unrooted weighted trees built from distance matrices, with a 2D
//! layout and Newick/DOT/SVG export.

mod export;
mod layout;
mod newick;
mod nj;

pub use export::{to_dot, to_svg, SvgOptions};
pub use layout::layout_equal_angle;
pub use newick::parse_newick;
pub use nj::neighbor_joining;

use crate::distance::DistanceMatrix;
use crate::scalar::Real;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("neighbor joining needs at least 3 labels, got {0}")]
    TooFewLabels(usize),
    #[error("svg export needs a layout; run the equal-angle layout first")]
    MissingLayout,
    #[error("newick parse error at byte {position}: {message}")]
    NewickParse { position: usize, message: String },
    #[error("invalid tree: {0}")]
    Invalid(String),
}

/// One weighted, undirected edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge<R: Real = f64> {
    pub a: usize,
    pub b: usize,
    pub length: R,
}

/// An unrooted weighted tree over labeled leaves. A designated root node
/// anchors serialization and layout; it carries no semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleTree<R: Real = f64> {
    labels: Vec<Option<String>>,
    edges: Vec<TreeEdge<R>>,
    root: usize,
    layout: Option<Vec<(R, R)>>,
    clamped_branches: usize,
}

impl<R: Real> StyleTree<R> {
    pub(crate) fn new(
        labels: Vec<Option<String>>,
        edges: Vec<TreeEdge<R>>,
        root: usize,
        clamped_branches: usize,
    ) -> Self {
        StyleTree {
            labels,
            edges,
            root,
            layout: None,
            clamped_branches,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Leaf labels in sorted order.
    pub fn leaf_labels(&self) -> Vec<&str> {
        let mut labels: Vec<&str> = self
            .labels
            .iter()
            .filter_map(|l| l.as_deref())
            .collect();
        labels.sort_unstable();
        labels
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels.get(node).and_then(|l| l.as_deref())
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.label(node).is_some()
    }

    pub fn edges(&self) -> &[TreeEdge<R>] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Node coordinates when a layout has been computed.
    pub fn coordinates(&self) -> Option<&[(R, R)]> {
        self.layout.as_deref()
    }

    pub(crate) fn set_layout(&mut self, layout: Vec<(R, R)>) {
        debug_assert_eq!(layout.len(), self.node_count());
        self.layout = Some(layout);
    }

    /// Number of negative branch-length estimates clamped to zero during
    /// construction; recorded in exported metadata.
    pub fn clamped_branch_count(&self) -> usize {
        self.clamped_branches
    }

    /// Total branch length over all edges.
    pub fn total_branch_length(&self) -> R {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Per-node `(neighbor, edge index)` adjacency.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (idx, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, idx));
            adj[e.b].push((e.a, idx));
        }
        adj
    }

    /// Check connectivity, acyclicity, and nonnegative edge lengths.
    pub fn validate(&self) -> Result<(), TreeError> {
        let n = self.node_count();
        if n == 0 {
            return Err(TreeError::Invalid("no nodes".to_string()));
        }
        if self.edges.len() != n - 1 {
            return Err(TreeError::Invalid(format!(
                "{} nodes need {} edges, got {}",
                n,
                n - 1,
                self.edges.len()
            )));
        }
        for e in &self.edges {
            if e.a >= n || e.b >= n {
                return Err(TreeError::Invalid("edge endpoint out of range".to_string()));
            }
            if e.length < R::zero() {
                return Err(TreeError::Invalid("negative edge length".to_string()));
            }
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(TreeError::Invalid("tree is not connected".to_string()));
        }
        Ok(())
    }

    /// Sum of branch lengths along the unique path between two leaves.
    pub fn leaf_path_length(&self, from: &str, to: &str) -> Option<R> {
        let start = self.labels.iter().position(|l| l.as_deref() == Some(from))?;
        let goal = self.labels.iter().position(|l| l.as_deref() == Some(to))?;
        if start == goal {
            return Some(R::zero());
        }
        let adj = self.adjacency();
        let mut dist = vec![None; self.node_count()];
        dist[start] = Some(R::zero());
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let dv = dist[v].expect("visited nodes carry a distance");
            for &(w, e) in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + self.edges[e].length);
                    stack.push(w);
                }
            }
        }
        dist[goal]
    }

    /// The matrix of leaf-to-leaf path lengths, over sorted leaf labels.
    pub fn induced_leaf_matrix(&self) -> DistanceMatrix<R> {
        let labels: Vec<String> = self.leaf_labels().iter().map(|s| s.to_string()).collect();
        let n = labels.len();
        let mut values = vec![R::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self
                    .leaf_path_length(&labels[i], &labels[j])
                    .expect("labels come from this tree");
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        DistanceMatrix::from_values(labels, values)
    }

    /// Smallest leaf label in the subtree seen from `node` walking away
    /// from `parent`; drives canonical child ordering.
    pub(crate) fn min_leaf_label(
        &self,
        adj: &[Vec<(usize, usize)>],
        node: usize,
        parent: Option<usize>,
    ) -> &str {
        if let Some(label) = self.label(node) {
            return label;
        }
        let mut best: Option<&str> = None;
        for &(child, _) in &adj[node] {
            if Some(child) == parent {
                continue;
            }
            let candidate = self.min_leaf_label(adj, child, Some(node));
            best = Some(match best {
                Some(b) if b <= candidate => b,
                _ => candidate,
            });
        }
        best.unwrap_or("")
    }
}
