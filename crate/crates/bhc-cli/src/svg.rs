//! Deterministic SVG rendering of dendrograms.
//!
//! Leaves sit on the x axis in dendrogram order; each merge draws the usual
//! bracket at its height. Coordinates are formatted with fixed precision, so
//! the same dendrogram always produces byte-identical output.

use std::fmt::Write as _;

use bhc_core::Dendrogram;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Render a dendrogram as a standalone SVG document.
pub fn plot_dendrogram(d: &Dendrogram, leaf_names: Option<&[String]>) -> String {
    let n = d.n_leaves;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let baseline = MARGIN_TOP + plot_h;

    let max_height = d
        .heights()
        .iter()
        .fold(0.0_f64, |acc, h| acc.max(*h))
        .max(f64::MIN_POSITIVE);
    let y_of = |h: f64| MARGIN_TOP + plot_h * (1.0 - h / max_height);

    // x position per node: leaves at their slot, internal nodes midway
    // between their children.
    let order = d.leaf_order();
    let mut x = vec![0.0_f64; n + d.merges.len()];
    for (slot, &leaf) in order.iter().enumerate() {
        x[leaf] = MARGIN_LEFT + (slot as f64 + 0.5) * plot_w / n as f64;
    }
    let mut y = vec![baseline; n + d.merges.len()];
    for m in &d.merges {
        x[m.new_node] = (x[m.left] + x[m.right]) / 2.0;
        y[m.new_node] = y_of(m.index);
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    // y axis with ticks
    let _ = writeln!(
        svg,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
        MARGIN_LEFT, MARGIN_TOP, MARGIN_LEFT, baseline
    );
    for tick in 0..=4 {
        let h = max_height * tick as f64 / 4.0;
        let ty = y_of(h);
        let _ = writeln!(
            svg,
            "  <line x1=\"{:.2}\" y1=\"{ty:.2}\" x2=\"{:.2}\" y2=\"{ty:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{h:.3}</text>",
            MARGIN_LEFT - 8.0,
            ty + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "  <text x=\"14\" y=\"{:.2}\" font-size=\"12\" transform=\"rotate(-90 14 {:.2})\" text-anchor=\"middle\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        d.index_kind.name()
    );

    // merge brackets, in merge order
    for m in &d.merges {
        let top = y[m.new_node];
        let _ = writeln!(
            svg,
            "  <path d=\"M {:.2} {:.2} L {:.2} {top:.2} L {:.2} {top:.2} L {:.2} {:.2}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>",
            x[m.left], y[m.left], x[m.left], x[m.right], x[m.right], y[m.right]
        );
    }

    // leaf labels
    for &leaf in &order {
        let label = match leaf_names {
            Some(names) => names[leaf].clone(),
            None => leaf.to_string(),
        };
        let _ = writeln!(
            svg,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{label}</text>",
            x[leaf],
            baseline + 16.0
        );
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use bhc_core::{IndexKind, Merge};

    #[test]
    fn two_leaf_plot_has_one_bracket() {
        let d = Dendrogram {
            n_leaves: 2,
            merges: vec![Merge {
                left: 0,
                right: 1,
                index: 2.0,
                new_node: 2,
            }],
            index_kind: IndexKind::Distance,
        };
        let svg = plot_dendrogram(&d, None);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("distance"));
        // determinism
        assert_eq!(svg, plot_dendrogram(&d, None));
    }
}
