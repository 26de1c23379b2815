//! Neighbor-joining agglomeration over a distance matrix.

use super::{StyleTree, TreeEdge, TreeError};
use crate::distance::DistanceMatrix;
use crate::scalar::Real;

/// Build an unrooted tree by repeatedly joining the pair minimizing the
/// Q-criterion, until three nodes remain and meet at a final internal
/// node. Exact on additive matrices. Q-ties break on the
/// lexicographically smallest label pair (internal nodes carry the
/// smallest leaf label of their subtree), so the output is deterministic.
/// Negative branch-length estimates are clamped to zero with the deficit
/// moved to the sibling branch, preserving the joined pair's distance.
pub fn neighbor_joining<R: Real>(matrix: &DistanceMatrix<R>) -> Result<StyleTree<R>, TreeError> {
    let n = matrix.len();
    if n < 3 {
        return Err(TreeError::TooFewLabels(n));
    }
    let cap = 2 * n;
    let mut d = vec![R::zero(); cap * cap];
    for i in 0..n {
        for j in 0..n {
            d[i * cap + j] = matrix.get(i, j);
        }
    }
    let mut labels: Vec<Option<String>> = matrix.labels().iter().map(|l| Some(l.clone())).collect();
    let mut sort_key: Vec<String> = matrix.labels().to_vec();
    let mut edges: Vec<TreeEdge<R>> = Vec::with_capacity(2 * n - 3);
    let mut active: Vec<usize> = (0..n).collect();
    let mut next_node = n;
    let mut clamped = 0usize;

    let two = R::c(2.0);
    while active.len() > 3 {
        let m = active.len();
        let mut row_sum = vec![R::zero(); next_node];
        for &i in &active {
            row_sum[i] = active
                .iter()
                .filter(|&&k| k != i)
                .map(|&k| d[i * cap + k])
                .sum();
        }

        let m_minus_2 = R::from_count(m - 2);
        let mut best_q = R::infinity();
        let mut best_pair = (active[0], active[1]);
        let mut best_key: Option<(&str, &str)> = None;
        for (ai, &i) in active.iter().enumerate() {
            for &j in &active[ai + 1..] {
                let q = m_minus_2 * d[i * cap + j] - row_sum[i] - row_sum[j];
                let key = ordered_key(&sort_key[i], &sort_key[j]);
                let better = match best_key {
                    None => true,
                    Some(bk) => q < best_q || (q == best_q && key < bk),
                };
                if better {
                    best_q = q;
                    best_pair = (i, j);
                    best_key = Some(key);
                }
            }
        }

        let (i, j) = best_pair;
        let dij = d[i * cap + j];
        let delta = (row_sum[i] - row_sum[j]) / (m_minus_2 * two);
        let mut li = dij / two + delta;
        let mut lj = dij - li;
        if li < R::zero() {
            li = R::zero();
            lj = dij;
            clamped += 1;
        } else if lj < R::zero() {
            lj = R::zero();
            li = dij;
            clamped += 1;
        }

        let u = next_node;
        next_node += 1;
        labels.push(None);
        let key_u = sort_key[i].clone().min(sort_key[j].clone());
        sort_key.push(key_u);
        edges.push(TreeEdge { a: u, b: i, length: li });
        edges.push(TreeEdge { a: u, b: j, length: lj });

        for &k in &active {
            if k != i && k != j {
                let duk = (d[i * cap + k] + d[j * cap + k] - dij) / two;
                d[u * cap + k] = duk;
                d[k * cap + u] = duk;
            }
        }
        active.retain(|&x| x != i && x != j);
        active.push(u);
    }

    // final three-way join at the center node
    let (a, b, c) = (active[0], active[1], active[2]);
    let (dab, dac, dbc) = (d[a * cap + b], d[a * cap + c], d[b * cap + c]);
    let center = next_node;
    labels.push(None);
    let mut attach = |node: usize, length: R| {
        if length < R::zero() {
            clamped += 1;
            edges.push(TreeEdge { a: center, b: node, length: R::zero() });
        } else {
            edges.push(TreeEdge { a: center, b: node, length });
        }
    };
    attach(a, (dab + dac - dbc) / two);
    attach(b, (dab + dbc - dac) / two);
    attach(c, (dac + dbc - dab) / two);

    Ok(StyleTree::new(labels, edges, center, clamped))
}

fn ordered_key<'a>(x: &'a str, y: &'a str) -> (&'a str, &'a str) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}
