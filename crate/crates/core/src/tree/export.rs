//! Graphviz DOT and standalone SVG renderings of a laid-out tree.

use super::{StyleTree, TreeError};
use crate::scalar::Real;

/// DOT with length-labeled edges; leaves keep their labels, internal
/// nodes are drawn as points.
pub fn to_dot<R: Real>(tree: &StyleTree<R>) -> String {
    let mut out = String::from("graph styletree {\n  layout=neato;\n");
    for node in 0..tree.node_count() {
        match tree.label(node) {
            Some(label) => {
                out.push_str(&format!(
                    "  n{node} [label=\"{}\", shape=plaintext];\n",
                    dot_escape(label)
                ));
            }
            None => {
                out.push_str(&format!("  n{node} [label=\"\", shape=point];\n"));
            }
        }
    }
    for e in tree.edges() {
        out.push_str(&format!(
            "  n{} -- n{} [label=\"{}\", len={}];\n",
            e.a, e.b, e.length, e.length
        ));
    }
    out.push_str("}\n");
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// SVG rendering options.
#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    pub font_size: f64,
    /// Draw a dot on every internal node (cluster starting points).
    pub highlight_internal: bool,
    pub highlight_color: String,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 900.0,
            height: 700.0,
            font_size: 12.0,
            highlight_internal: true,
            highlight_color: "#cc3333".to_string(),
        }
    }
}

/// Standalone SVG with edges, leaf labels, and optional internal-node
/// dots. Requires a layout.
pub fn to_svg<R: Real>(tree: &StyleTree<R>, options: &SvgOptions) -> Result<String, TreeError> {
    let coords = tree.coordinates().ok_or(TreeError::MissingLayout)?;
    let points: Vec<(f64, f64)> = coords
        .iter()
        .map(|&(x, y)| (x.to_f64().unwrap_or(0.0), y.to_f64().unwrap_or(0.0)))
        .collect();

    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let margin = 0.12 * options.width.min(options.height);
    let span_x = (max_x - min_x).max(f64::EPSILON);
    let span_y = (max_y - min_y).max(f64::EPSILON);
    let scale = ((options.width - 2.0 * margin) / span_x)
        .min((options.height - 2.0 * margin) / span_y);
    let tx = |x: f64| (x - min_x) * scale + margin;
    let ty = |y: f64| (y - min_y) * scale + margin;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        options.width, options.height, options.width, options.height
    ));
    out.push_str("  <g stroke=\"#444444\" stroke-width=\"1.5\" fill=\"none\">\n");
    for e in tree.edges() {
        let (xa, ya) = points[e.a];
        let (xb, yb) = points[e.b];
        out.push_str(&format!(
            "    <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>\n",
            tx(xa),
            ty(ya),
            tx(xb),
            ty(yb)
        ));
    }
    out.push_str("  </g>\n");

    if options.highlight_internal {
        out.push_str(&format!("  <g fill=\"{}\">\n", options.highlight_color));
        for (node, &(x, y)) in points.iter().enumerate() {
            if !tree.is_leaf(node) {
                out.push_str(&format!(
                    "    <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>\n",
                    tx(x),
                    ty(y)
                ));
            }
        }
        out.push_str("  </g>\n");
    }

    out.push_str(&format!(
        "  <g font-family=\"sans-serif\" font-size=\"{}\" fill=\"#000000\">\n",
        options.font_size
    ));
    let adj = tree.adjacency();
    for (node, &(x, y)) in points.iter().enumerate() {
        if let Some(label) = tree.label(node) {
            // push the label outward, away from the single neighbor
            let (dx, dy) = adj[node]
                .first()
                .map(|&(nb, _)| {
                    let (nx, ny) = points[nb];
                    let (vx, vy) = (x - nx, y - ny);
                    let norm = (vx * vx + vy * vy).sqrt();
                    if norm > 0.0 {
                        (vx / norm, vy / norm)
                    } else {
                        (1.0, 0.0)
                    }
                })
                .unwrap_or((1.0, 0.0));
            let anchor = if dx >= 0.0 { "start" } else { "end" };
            out.push_str(&format!(
                "    <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"{}\">{}</text>\n",
                tx(x) + dx * options.font_size * 0.5,
                ty(y) + dy * options.font_size * 0.5 + options.font_size * 0.35,
                anchor,
                xml_escape(label)
            ));
        }
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
