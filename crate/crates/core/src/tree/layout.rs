//! Equal-angle layout for unrooted trees: every subtree receives an
//! angular wedge proportional to its leaf count, and each edge is drawn
//! at its branch length (zero-length edges get a vanishing floor so
//! distinct leaves never share coordinates).

use super::StyleTree;
use crate::scalar::Real;

const ZERO_EDGE_FLOOR: f64 = 1e-12;

/// Compute node coordinates in place and return the tree.
pub fn layout_equal_angle<R: Real>(mut tree: StyleTree<R>) -> StyleTree<R> {
    let n = tree.node_count();
    let adj = tree.adjacency();
    let mut coords = vec![(R::zero(), R::zero()); n];
    if n > 1 {
        let mut leaf_share = vec![0usize; n];
        count_leaves(&tree, &adj, tree.root(), None, &mut leaf_share);
        let two_pi = R::c(2.0 * std::f64::consts::PI);
        place(
            &tree,
            &adj,
            tree.root(),
            None,
            (R::zero(), R::zero()),
            R::zero(),
            two_pi,
            &leaf_share,
            &mut coords,
        );
    }
    tree.set_layout(coords);
    tree
}

fn count_leaves<R: Real>(
    tree: &StyleTree<R>,
    adj: &[Vec<(usize, usize)>],
    node: usize,
    parent: Option<usize>,
    out: &mut [usize],
) -> usize {
    let mut total = usize::from(tree.is_leaf(node));
    for &(child, _) in &adj[node] {
        if Some(child) != parent {
            total += count_leaves(tree, adj, child, Some(node), out);
        }
    }
    out[node] = total.max(1);
    total.max(1)
}

#[allow(clippy::too_many_arguments)]
fn place<R: Real>(
    tree: &StyleTree<R>,
    adj: &[Vec<(usize, usize)>],
    node: usize,
    parent: Option<usize>,
    position: (R, R),
    wedge_lo: R,
    wedge_hi: R,
    leaf_share: &[usize],
    coords: &mut [(R, R)],
) {
    coords[node] = position;
    // canonical child order: by smallest leaf label in the child's subtree
    let mut children: Vec<(usize, usize)> = adj[node]
        .iter()
        .copied()
        .filter(|&(c, _)| Some(c) != parent)
        .collect();
    children.sort_by(|&(a, _), &(b, _)| {
        tree.min_leaf_label(adj, a, Some(node))
            .cmp(tree.min_leaf_label(adj, b, Some(node)))
    });

    let span = wedge_hi - wedge_lo;
    let subtree_total: usize = children.iter().map(|&(c, _)| leaf_share[c]).sum();
    let denom = R::from_count(subtree_total.max(1));
    let mut lo = wedge_lo;
    for (child, edge_idx) in children {
        let share = span * R::from_count(leaf_share[child]) / denom;
        let hi = lo + share;
        let mid = (lo + hi) / R::c(2.0);
        let length = tree.edges()[edge_idx].length.max(R::c(ZERO_EDGE_FLOOR));
        let next = (
            position.0 + length * mid.cos(),
            position.1 + length * mid.sin(),
        );
        place(
            tree,
            adj,
            child,
            Some(node),
            next,
            lo,
            hi,
            leaf_share,
            coords,
        );
        lo = hi;
    }
}
