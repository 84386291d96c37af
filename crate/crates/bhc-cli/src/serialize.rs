//! Dendrogram serialization: a JSON document that round-trips, and Newick
//! with branch lengths derived from the (monotone) merge heights.

use anyhow::{bail, Context};
use bhc_core::{Dendrogram, IndexKind, Merge, MergeTrace, MergeTraceRow};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Serialize, Deserialize)]
struct DendrogramDoc {
    n_leaves: usize,
    index_kind: String,
    merges: Vec<MergeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MergeDoc {
    left: usize,
    right: usize,
    index: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw_index: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    betp_factors: Option<[f64; 2]>,
}

/// Serialize a dendrogram (and, for belief runs, its merge trace) to JSON.
/// Field order is fixed, so equal inputs give byte-identical output.
pub fn dendrogram_to_json(d: &Dendrogram, trace: Option<&MergeTrace>) -> String {
    let doc = DendrogramDoc {
        n_leaves: d.n_leaves,
        index_kind: d.index_kind.name().to_string(),
        merges: d
            .merges
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let row = trace.and_then(|t| t.rows.get(i));
                MergeDoc {
                    left: m.left,
                    right: m.right,
                    index: m.index,
                    raw_index: row.map(|r| r.raw_index),
                    betp_factors: row.map(|r| [r.betp_a_of_b, r.betp_b_of_a]),
                }
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    json.push('\n');
    json
}

/// Parse a dendrogram JSON document, returning the trace when the belief
/// fields are present.
pub fn dendrogram_from_json(text: &str) -> anyhow::Result<(Dendrogram, Option<MergeTrace>)> {
    let doc: DendrogramDoc = serde_json::from_str(text).context("invalid dendrogram JSON")?;
    let index_kind = IndexKind::from_name(&doc.index_kind)
        .with_context(|| format!("unknown index_kind '{}'", doc.index_kind))?;
    let n = doc.n_leaves;
    if doc.merges.len() + 1 != n && !(doc.merges.is_empty() && n == 0) {
        bail!(
            "dendrogram with {n} leaves must have {} merges, found {}",
            n.saturating_sub(1),
            doc.merges.len()
        );
    }
    let mut used = vec![false; 2 * n.max(1)];
    let mut merges = Vec::with_capacity(doc.merges.len());
    let mut trace_rows = Vec::new();
    for (i, m) in doc.merges.iter().enumerate() {
        let new_node = n + i;
        for child in [m.left, m.right] {
            if child >= new_node {
                bail!("merge {i} references node {child} before it exists");
            }
            if used[child] {
                bail!("node {child} appears as a child twice");
            }
            used[child] = true;
        }
        merges.push(Merge {
            left: m.left,
            right: m.right,
            index: m.index,
            new_node,
        });
        if let (Some(raw), Some([fa, fb])) = (m.raw_index, m.betp_factors) {
            trace_rows.push(MergeTraceRow {
                cluster_a: m.left,
                cluster_b: m.right,
                betp_a_of_b: fa,
                betp_b_of_a: fb,
                product: fa * fb,
                raw_index: raw,
                monotone_index: m.index,
            });
        }
    }
    let trace = if trace_rows.len() == merges.len() && !trace_rows.is_empty() {
        Some(MergeTrace { rows: trace_rows })
    } else {
        None
    };
    Ok((
        Dendrogram {
            n_leaves: n,
            merges,
            index_kind,
        },
        trace,
    ))
}

/// Newick serialization of an ultrametric dendrogram.
///
/// A child hanging from a parent at height `H` gets branch length
/// `(H - h_child) / 2` (leaves sit at height zero), so the path length
/// between two leaves equals the height of the merge joining them. A
/// two-leaf tree at height `h` reads `(0:h/2,1:h/2);`.
pub fn dendrogram_to_newick(d: &Dendrogram, leaf_names: Option<&[String]>) -> String {
    fn node_height(d: &Dendrogram, node: usize) -> f64 {
        if node < d.n_leaves {
            0.0
        } else {
            d.merges[node - d.n_leaves].index
        }
    }
    fn emit(d: &Dendrogram, node: usize, names: Option<&[String]>, out: &mut String) {
        if node < d.n_leaves {
            match names {
                Some(names) => out.push_str(&names[node]),
                None => {
                    let _ = write!(out, "{node}");
                }
            }
        } else {
            let m = &d.merges[node - d.n_leaves];
            out.push('(');
            for (i, child) in [m.left, m.right].into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                emit(d, child, names, out);
                let length = (m.index - node_height(d, child)) / 2.0;
                let _ = write!(out, ":{length}");
            }
            out.push(')');
        }
    }

    if d.merges.is_empty() {
        // degenerate single-leaf tree
        return match leaf_names {
            Some(names) if !names.is_empty() => format!("{};", names[0]),
            _ => "0;".to_string(),
        };
    }
    let mut out = String::new();
    let root = d.merges.last().unwrap().new_node;
    emit(d, root, leaf_names, &mut out);
    out.push(';');
    out
}
