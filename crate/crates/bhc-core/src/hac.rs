//! Classical ascendant (agglomerative) hierarchical clustering with a
//! distance-indexed dendrogram.
//!
//! Leaves are numbered `0..n`, internal nodes `n..2n-1` in merge order. Ties
//! on the merge criterion are broken by the lexicographically smallest
//! `(min_node_id, max_node_id)` pair, which makes the merge sequence
//! deterministic even on equidistant data.

use crate::dataset::Dataset;
use crate::distance::{euclidean_matrix, linkage_distance, ClusterSummary, Linkage};
use crate::error::{Error, Result};

/// What the height of each dendrogram merge means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// Linkage distance at the merge.
    Distance,
    /// Sum of the two pignistic probabilities at the merge.
    BetpRaw,
    /// Running maximum of the pignistic sum, monotone by construction.
    BetpMonotone,
}

impl IndexKind {
    pub fn name(&self) -> &'static str {
        match self {
            IndexKind::Distance => "distance",
            IndexKind::BetpRaw => "betp_raw",
            IndexKind::BetpMonotone => "betp_monotone",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "distance" => Some(IndexKind::Distance),
            "betp_raw" => Some(IndexKind::BetpRaw),
            "betp_monotone" => Some(IndexKind::BetpMonotone),
            _ => None,
        }
    }
}

/// One agglomeration step: two nodes merged into a new node at a height.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub index: f64,
    pub new_node: usize,
}

/// An ordered merge trace over `n_leaves` items.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
    pub index_kind: IndexKind,
}

impl Dendrogram {
    /// Merge heights in step order.
    pub fn heights(&self) -> Vec<f64> {
        self.merges.iter().map(|m| m.index).collect()
    }

    /// Leaf ids in plotting order: left subtree before right subtree,
    /// starting from the root.
    pub fn leaf_order(&self) -> Vec<usize> {
        if self.n_leaves == 0 {
            return Vec::new();
        }
        if self.merges.is_empty() {
            return (0..self.n_leaves).collect();
        }
        let mut order = Vec::with_capacity(self.n_leaves);
        let root = self.merges.last().unwrap().new_node;
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            if node < self.n_leaves {
                order.push(node);
            } else {
                let m = &self.merges[node - self.n_leaves];
                // push right first so left is visited first
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        order
    }

    /// Height of the lowest merge joining leaves `a` and `b` (their
    /// cophenetic distance). Zero when `a == b`.
    pub fn cophenetic(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        // Walk the merge list once, tracking which cluster each leaf sits in.
        let mut holder_a = a;
        let mut holder_b = b;
        for m in &self.merges {
            if m.left == holder_a || m.right == holder_a {
                holder_a = m.new_node;
            }
            if m.left == holder_b || m.right == holder_b {
                holder_b = m.new_node;
            }
            if holder_a == holder_b {
                return m.index;
            }
        }
        f64::NAN
    }
}

/// A hard assignment of `n` items to disjoint, nonempty clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cluster_of: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl Partition {
    /// Build from per-item cluster labels. Labels are relabeled to the dense
    /// range `0..k` in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::TooFewObjects { needed: 1, got: 0 });
        }
        let mut remap: Vec<(usize, usize)> = Vec::new();
        let mut cluster_of = Vec::with_capacity(labels.len());
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (item, &lab) in labels.iter().enumerate() {
            let id = match remap.iter().find(|(orig, _)| *orig == lab) {
                Some(&(_, id)) => id,
                None => {
                    let id = clusters.len();
                    remap.push((lab, id));
                    clusters.push(Vec::new());
                    id
                }
            };
            cluster_of.push(id);
            clusters[id].push(item);
        }
        Ok(Self {
            cluster_of,
            clusters,
        })
    }

    /// Build from explicit member lists; they must partition `0..n`.
    pub fn from_clusters(n: usize, clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut cluster_of = vec![usize::MAX; n];
        for (id, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidMass(format!("cluster {id} is empty")));
            }
            for &m in members {
                if m >= n || cluster_of[m] != usize::MAX {
                    return Err(Error::InvalidMass(format!(
                        "item {m} is missing or assigned twice"
                    )));
                }
                cluster_of[m] = id;
            }
        }
        if cluster_of.contains(&usize::MAX) {
            return Err(Error::InvalidMass("not every item is assigned".into()));
        }
        Ok(Self {
            cluster_of,
            clusters,
        })
    }

    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_of(&self, item: usize) -> usize {
        self.cluster_of[item]
    }

    pub fn labels(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// Canonical form: clusters ordered by smallest member, members sorted.
    pub fn canonical(&self) -> Self {
        let mut clusters: Vec<Vec<usize>> = self
            .clusters
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        clusters.sort_by_key(|c| c[0]);
        Self::from_clusters(self.n(), clusters).expect("canonicalizing a valid partition")
    }
}

// Mutable clustering state shared by the classical and belief drivers.
pub(crate) struct ActiveCluster {
    pub node_id: usize,
    pub members: Vec<usize>,
    pub summary: ClusterSummary,
}

pub(crate) fn initial_clusters(data: &Dataset, initial: Option<&Partition>) -> Vec<ActiveCluster> {
    match initial {
        None => (0..data.n())
            .map(|i| ActiveCluster {
                node_id: i,
                members: vec![i],
                summary: ClusterSummary::from_members(data, &[i]),
            })
            .collect(),
        Some(p) => p
            .clusters()
            .iter()
            .enumerate()
            .map(|(id, members)| {
                let mut members = members.clone();
                members.sort_unstable();
                ActiveCluster {
                    node_id: id,
                    summary: ClusterSummary::from_members(data, &members),
                    members,
                }
            })
            .collect(),
    }
}

pub(crate) fn merge_active(clusters: &mut Vec<ActiveCluster>, a: usize, b: usize, node_id: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let right = clusters.remove(hi);
    let left = clusters.remove(lo);
    let mut members = left.members;
    members.extend(right.members);
    members.sort_unstable();
    let summary = left.summary.merged(&right.summary);
    clusters.push(ActiveCluster {
        node_id,
        members,
        summary,
    });
}

/// Agglomerative clustering of a dataset under a linkage rule, starting from
/// singletons.
pub fn hac_cluster(data: &Dataset, link: Linkage) -> Result<Dendrogram> {
    hac_cluster_from(data, link, None)
}

/// Agglomerative clustering starting from an existing partition (for
/// example a k-means pre-clustering). Leaves of the resulting dendrogram are
/// the clusters of `initial`, in order; with `None` it starts from
/// singletons.
pub fn hac_cluster_from(
    data: &Dataset,
    link: Linkage,
    initial: Option<&Partition>,
) -> Result<Dendrogram> {
    let base = euclidean_matrix(data)?;
    let mut clusters = initial_clusters(data, initial);
    let n_leaves = clusters.len();
    if n_leaves < 2 {
        return Err(Error::TooFewObjects {
            needed: 2,
            got: n_leaves,
        });
    }

    let pair_distance = |a: &ActiveCluster, b: &ActiveCluster| -> Result<f64> {
        linkage_distance(
            link,
            &a.members,
            &b.members,
            &base,
            Some((&a.summary, &b.summary)),
        )
    };

    // Cached distances between active clusters, indexed by position; rows
    // for a merged cluster are recomputed, the rest are kept.
    let mut dist: Vec<Vec<f64>> = vec![vec![0.0; n_leaves]; n_leaves];
    for i in 0..n_leaves {
        for j in (i + 1)..n_leaves {
            let d = pair_distance(&clusters[i], &clusters[j])?;
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    let mut merges = Vec::with_capacity(n_leaves - 1);
    let mut next_node = n_leaves;
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let d = dist[i][j];
                let (lo, hi) = ordered_ids(clusters[i].node_id, clusters[j].node_id);
                let better = match &best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => {
                        d < *bd || (d == *bd && (lo, hi) < (*blo, *bhi))
                    }
                };
                if better {
                    best = Some((d, lo, hi, i, j));
                }
            }
        }
        let (d, lo, hi, i, j) = best.expect("at least one pair");
        merges.push(Merge {
            left: lo,
            right: hi,
            index: d,
            new_node: next_node,
        });

        merge_active(&mut clusters, i, j, next_node);
        next_node += 1;

        // Drop the two old rows/columns and recompute the new cluster's row.
        let (lo_pos, hi_pos) = if i < j { (i, j) } else { (j, i) };
        for row in &mut dist {
            row.remove(hi_pos);
            row.remove(lo_pos);
        }
        dist.remove(hi_pos);
        dist.remove(lo_pos);
        let new_pos = clusters.len() - 1;
        let mut new_row = vec![0.0; clusters.len()];
        for (pos, cluster) in clusters.iter().enumerate().take(new_pos) {
            new_row[pos] = pair_distance(cluster, &clusters[new_pos])?;
        }
        for (pos, row) in dist.iter_mut().enumerate() {
            row.push(new_row[pos]);
        }
        dist.push(new_row);
    }

    Ok(Dendrogram {
        n_leaves,
        merges,
        index_kind: IndexKind::Distance,
    })
}

pub(crate) fn ordered_ids(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undo the last `k - 1` merges: the partition present when `k` clusters
/// existed. Items of the partition are the dendrogram's leaves.
pub fn cut(dendrogram: &Dendrogram, k: usize) -> Result<Partition> {
    let n = dendrogram.n_leaves;
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n_leaves: n });
    }
    let steps = n - k;
    if steps > dendrogram.merges.len() {
        return Err(Error::InvalidK { k, n_leaves: n });
    }
    // Replay merges over explicit member lists keyed by node id.
    let mut alive: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    for m in dendrogram.merges.iter().take(steps) {
        let pos_l = alive
            .iter()
            .position(|(id, _)| *id == m.left)
            .expect("left child is alive");
        let pos_r = alive
            .iter()
            .position(|(id, _)| *id == m.right)
            .expect("right child is alive");
        let (first, second) = if pos_l < pos_r {
            (pos_l, pos_r)
        } else {
            (pos_r, pos_l)
        };
        let (_, mut right_members) = alive.remove(second);
        let (_, left_members) = alive.remove(first);
        let mut members = left_members;
        members.append(&mut right_members);
        members.sort_unstable();
        alive.push((m.new_node, members));
    }
    let mut clusters: Vec<Vec<usize>> = alive.into_iter().map(|(_, m)| m).collect();
    clusters.sort_by_key(|c| c[0]);
    Partition::from_clusters(n, clusters)
}
