//! Belief hierarchical clustering: agglomeration driven by pignistic
//! probabilities instead of raw distances.
//!
//! Each item (object, then cluster) carries a mass function over the frame of
//! all *other* items, built from exponentially decayed distances. The pair to
//! merge maximizes the product of the two pignistic probabilities each side
//! assigns to the other, and the dendrogram is indexed by their sum.
//!
//! Two cluster-level constructions are provided: variant A decays a classical
//! linkage distance between clusters, variant B multiplies per-object decays
//! over cluster members and fuses member masses with Dempster's rule.

use crate::belief::{dempster_combine, pignistic, Frame, MassFunction, PignisticDistribution, Subset};
use crate::dataset::Dataset;
use crate::distance::{euclidean_matrix, linkage_distance, DistanceMatrix, Linkage};
use crate::error::{Error, Result};
use crate::hac::{initial_clusters, merge_active, ActiveCluster, Dendrogram, IndexKind, Merge, Partition};

/// Decay parameters of the mass construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MassParams {
    pub alpha: f64,
    pub gamma: Gamma,
}

/// The distance-decay rate: fixed, or derived from the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    /// 1 / median of the nonzero pairwise squared distances among the items
    /// being clustered, resolved once at the start of a run.
    Auto,
    /// A positive multiple of the [`Auto`](Gamma::Auto) rate, keeping the
    /// decay scale-adaptive while allowing sharper or softer masses.
    AutoScaled(f64),
    Fixed(f64),
}

impl MassParams {
    pub fn new(alpha: f64, gamma: Gamma) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidMass(format!("alpha {alpha} outside (0, 1]")));
        }
        match gamma {
            Gamma::Fixed(g) if g.is_nan() || g <= 0.0 => {
                return Err(Error::InvalidMass(format!("gamma {g} must be positive")));
            }
            Gamma::AutoScaled(m) if m.is_nan() || m <= 0.0 => {
                return Err(Error::InvalidMass(format!(
                    "gamma multiplier {m} must be positive"
                )));
            }
            _ => {}
        }
        Ok(Self { alpha, gamma })
    }
}

impl Default for MassParams {
    fn default() -> Self {
        Self {
            alpha: 0.95,
            gamma: Gamma::Auto,
        }
    }
}

/// Which cluster-level mass construction drives the merge loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// Decay of a classical linkage distance between clusters.
    A(Linkage),
    /// Per-object products over cluster members, fused by Dempster's rule.
    B,
}

/// One merge decision with the pignistic values behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeTraceRow {
    pub cluster_a: usize,
    pub cluster_b: usize,
    pub betp_a_of_b: f64,
    pub betp_b_of_a: f64,
    pub product: f64,
    pub raw_index: f64,
    pub monotone_index: f64,
}

/// Per-step record of a belief clustering run, parallel to the dendrogram's
/// merge list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MergeTrace {
    pub rows: Vec<MergeTraceRow>,
}

/// The winning pair of a selection step and its two pignistic factors
/// (`a < b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSelection {
    pub a: u32,
    pub b: u32,
    pub betp_a_of_b: f64,
    pub betp_b_of_a: f64,
}

impl PairSelection {
    pub fn product(&self) -> f64 {
        self.betp_a_of_b * self.betp_b_of_a
    }
}

/// Resolve the decay rate over the squared distances of the items at hand.
///
/// `Auto` maps to 1 / median of the nonzero values; if every pairwise
/// distance is zero the rate falls back to 1 (all decays equal anyway).
pub fn resolve_gamma<I: IntoIterator<Item = f64>>(params: &MassParams, squared_distances: I) -> f64 {
    let multiplier = match params.gamma {
        Gamma::Fixed(g) => return g,
        Gamma::Auto => 1.0,
        Gamma::AutoScaled(m) => m,
    };
    let mut nonzero: Vec<f64> = squared_distances
        .into_iter()
        .filter(|d| *d > 0.0)
        .collect();
    if nonzero.is_empty() {
        return multiplier;
    }
    nonzero.sort_by(|a, b| a.partial_cmp(b).expect("no NaN distances"));
    let mid = nonzero.len() / 2;
    let median = if nonzero.len() % 2 == 1 {
        nonzero[mid]
    } else {
        0.5 * (nonzero[mid - 1] + nonzero[mid])
    };
    multiplier / median
}

// Simple mass over `frame` with the given singleton values; when they sum to
// more than one they are rescaled proportionally and the frame mass is zero.
fn simple_mass_capped(frame: Frame, entries: &[(u32, f64)]) -> MassFunction {
    let sum: f64 = entries.iter().map(|(_, v)| v).sum();
    let scale = if sum > 1.0 { 1.0 / sum } else { 1.0 };
    let universe = frame.len();
    let mut focal: Vec<(Subset, f64)> = Vec::with_capacity(entries.len() + 1);
    for &(e, v) in entries {
        let scaled = v * scale;
        if scaled > 0.0 {
            let pos = frame.position(e).expect("entry element in frame");
            focal.push((Subset::singleton(pos, universe), scaled));
        }
    }
    let remainder = (1.0 - sum).max(0.0);
    if remainder > 0.0 {
        focal.push((Subset::full(universe), remainder));
    }
    if focal.is_empty() {
        return MassFunction::vacuous(frame);
    }
    MassFunction::new(frame, focal).expect("capped simple mass is a valid bba")
}

/// Mass function of object `i` over the frame of all other objects: each
/// other object receives `alpha · exp(-gamma · d²)`, the rest stays on the
/// frame.
pub fn object_mass(
    i: usize,
    data: &Dataset,
    dist: &DistanceMatrix,
    params: &MassParams,
) -> Result<MassFunction> {
    let n = data.n();
    if n < 2 {
        return Err(Error::TooFewObjects { needed: 2, got: n });
    }
    let gamma = resolve_gamma(params, dist.upper_triangle().map(|(_, _, d)| d * d));
    let frame = Frame::new((0..n as u32).filter(|&j| j as usize != i).collect())?;
    let entries: Vec<(u32, f64)> = frame
        .elements()
        .iter()
        .map(|&j| {
            let d = dist.get(i, j as usize);
            (j, params.alpha * (-gamma * d * d).exp())
        })
        .collect();
    Ok(simple_mass_capped(frame, &entries))
}

// Argmax of the pignistic product over all unordered pairs, ties broken by
// the lexicographically smallest (min id, max id).
fn best_pair(ids: &[u32], betps: &[PignisticDistribution]) -> PairSelection {
    let mut best: Option<PairSelection> = None;
    for p in 0..ids.len() {
        for q in (p + 1)..ids.len() {
            let (lo_pos, hi_pos) = if ids[p] < ids[q] { (p, q) } else { (q, p) };
            let (lo, hi) = (ids[lo_pos], ids[hi_pos]);
            let cand = PairSelection {
                a: lo,
                b: hi,
                betp_a_of_b: betps[lo_pos].prob(hi),
                betp_b_of_a: betps[hi_pos].prob(lo),
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    cand.product() > b.product()
                        || (cand.product() == b.product() && (cand.a, cand.b) < (b.a, b.b))
                }
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best.expect("at least two items")
}

/// The two objects to merge first: the pair maximizing
/// `BetP_i(x_j) · BetP_j(x_i)` over the object-level masses.
pub fn select_object_pair(data: &Dataset, params: &MassParams) -> Result<(usize, usize)> {
    let dist = euclidean_matrix(data)?;
    let sel = select_object_pair_in(data, &dist, params)?;
    Ok((sel.a as usize, sel.b as usize))
}

fn select_object_pair_in(
    data: &Dataset,
    dist: &DistanceMatrix,
    params: &MassParams,
) -> Result<PairSelection> {
    let n = data.n();
    if n < 2 {
        return Err(Error::TooFewObjects { needed: 2, got: n });
    }
    let ids: Vec<u32> = (0..n as u32).collect();
    let mut betps = Vec::with_capacity(n);
    for i in 0..n {
        betps.push(pignistic(&object_mass(i, data, dist, params)?)?);
    }
    Ok(best_pair(&ids, &betps))
}

/// Variant-A mass of one cluster: decays of the linkage distance to every
/// other cluster, over the frame of the other clusters.
pub fn cluster_mass_variant_a(
    cluster: usize,
    partition: &Partition,
    link: Linkage,
    params: &MassParams,
    data: &Dataset,
    dist: &DistanceMatrix,
) -> Result<MassFunction> {
    let state = partition_state(data, partition)?;
    let gamma = resolve_gamma(params, linkage_squares(&state, link, dist)?);
    variant_a_mass(cluster, &state, link, params.alpha, gamma, dist)
}

/// Variant-B mass of one cluster: per-member masses whose value for another
/// cluster is the product of decays over that cluster's members, fused with
/// Dempster's rule.
pub fn cluster_mass_variant_b(
    cluster: usize,
    partition: &Partition,
    dist: &DistanceMatrix,
    params: &MassParams,
) -> Result<MassFunction> {
    let state: Vec<ClusterView> = partition
        .clusters()
        .iter()
        .enumerate()
        .map(|(id, members)| ClusterView {
            id: id as u32,
            members: members.clone(),
        })
        .collect();
    if state.len() < 2 {
        return Err(Error::SingleCluster);
    }
    let gamma = resolve_gamma(params, dist.upper_triangle().map(|(_, _, d)| d * d));
    variant_b_mass(cluster, &state, params.alpha, gamma, dist)
}

/// The two clusters to merge: argmax of the pignistic product over the given
/// per-cluster masses. Returns the pair and both pignistic factors.
pub fn select_cluster_pair(masses: &[(u32, MassFunction)]) -> Result<PairSelection> {
    if masses.len() < 2 {
        return Err(Error::SingleCluster);
    }
    let ids: Vec<u32> = masses.iter().map(|(id, _)| *id).collect();
    let mut betps = Vec::with_capacity(masses.len());
    for (_, m) in masses {
        betps.push(pignistic(m)?);
    }
    Ok(best_pair(&ids, &betps))
}

// Lightweight member-list view used by the variant-B construction, which
// never needs centers.
struct ClusterView {
    id: u32,
    members: Vec<usize>,
}

fn partition_state(data: &Dataset, partition: &Partition) -> Result<Vec<ActiveCluster>> {
    if partition.k() < 2 {
        return Err(Error::SingleCluster);
    }
    Ok(initial_clusters(data, Some(partition)))
}

// Squared linkage values over all current cluster pairs.
fn linkage_squares(
    state: &[ActiveCluster],
    link: Linkage,
    dist: &DistanceMatrix,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(state.len() * (state.len() - 1) / 2);
    for p in 0..state.len() {
        for q in (p + 1)..state.len() {
            let d = linkage_distance(
                link,
                &state[p].members,
                &state[q].members,
                dist,
                Some((&state[p].summary, &state[q].summary)),
            )?;
            out.push(d * d);
        }
    }
    Ok(out)
}

fn variant_a_mass(
    cluster: usize,
    state: &[ActiveCluster],
    link: Linkage,
    alpha: f64,
    gamma: f64,
    dist: &DistanceMatrix,
) -> Result<MassFunction> {
    let mut others: Vec<u32> = Vec::with_capacity(state.len() - 1);
    let mut entries: Vec<(u32, f64)> = Vec::with_capacity(state.len() - 1);
    for (pos, other) in state.iter().enumerate() {
        if pos == cluster {
            continue;
        }
        let d = linkage_distance(
            link,
            &state[cluster].members,
            &other.members,
            dist,
            Some((&state[cluster].summary, &other.summary)),
        )?;
        others.push(other.node_id as u32);
        entries.push((other.node_id as u32, alpha * (-gamma * d * d).exp()));
    }
    others.sort_unstable();
    let frame = Frame::new(others)?;
    Ok(simple_mass_capped(frame, &entries))
}

fn variant_b_mass(
    cluster: usize,
    state: &[ClusterView],
    alpha: f64,
    gamma: f64,
    dist: &DistanceMatrix,
) -> Result<MassFunction> {
    let mut others: Vec<u32> = state
        .iter()
        .enumerate()
        .filter(|(pos, _)| *pos != cluster)
        .map(|(_, c)| c.id)
        .collect();
    others.sort_unstable();
    let ln_alpha = alpha.ln();

    let mut combined: Option<MassFunction> = None;
    for &xi in &state[cluster].members {
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(others.len());
        for (pos, other) in state.iter().enumerate() {
            if pos == cluster {
                continue;
            }
            // Product over the other cluster's members, in log space so long
            // products underflow gracefully instead of losing proportions.
            let sum_d2: f64 = other
                .members
                .iter()
                .map(|&xm| {
                    let d = dist.get(xi, xm);
                    d * d
                })
                .sum();
            let ln_value = other.members.len() as f64 * ln_alpha - gamma * sum_d2;
            entries.push((other.id, ln_value.exp()));
        }
        let frame = Frame::new(others.clone())?;
        let member_mass = simple_mass_capped(frame, &entries);
        combined = Some(match combined {
            None => member_mass,
            Some(acc) => dempster_combine(&acc, &member_mass)?,
        });
    }
    combined.ok_or(Error::SingleCluster)
}

/// Run the full belief hierarchical clustering.
///
/// Without an initial partition the run starts from singletons and the first
/// merge is decided at the object level; with an initial partition (for
/// example a k-means pre-clustering) every step works at the cluster level
/// per the chosen variant. The dendrogram heights are the running maximum of
/// the per-merge pignistic sums; the trace carries the raw values.
pub fn bhc_cluster(
    data: &Dataset,
    params: &MassParams,
    variant: Variant,
    initial: Option<&Partition>,
) -> Result<(Dendrogram, MergeTrace)> {
    let dist = euclidean_matrix(data)?;
    let mut clusters = initial_clusters(data, initial);
    let n_leaves = clusters.len();
    if n_leaves < 2 {
        return Err(Error::TooFewObjects {
            needed: 2,
            got: n_leaves,
        });
    }
    let singleton_start = initial.is_none();

    // The decay rate is resolved once over the starting items: object
    // distances for a singleton start and for variant B, linkage distances
    // between the initial clusters for variant A.
    let gamma = match (singleton_start, variant) {
        (true, _) | (false, Variant::B) => {
            resolve_gamma(params, dist.upper_triangle().map(|(_, _, d)| d * d))
        }
        (false, Variant::A(link)) => resolve_gamma(params, linkage_squares(&clusters, link, &dist)?),
    };
    let alpha = params.alpha;

    let mut merges = Vec::with_capacity(n_leaves - 1);
    let mut trace = MergeTrace::default();
    let mut next_node = n_leaves;
    let mut monotone = f64::NEG_INFINITY;
    let mut step = 0usize;

    while clusters.len() > 1 {
        let object_level = singleton_start && step == 0;
        let mut ids = Vec::with_capacity(clusters.len());
        let mut betps = Vec::with_capacity(clusters.len());
        for (pos, c) in clusters.iter().enumerate() {
            let mass = if object_level {
                // All clusters are singletons; decay the raw point distance.
                let mut others: Vec<u32> = Vec::with_capacity(clusters.len() - 1);
                let mut entries: Vec<(u32, f64)> = Vec::with_capacity(clusters.len() - 1);
                for (qos, other) in clusters.iter().enumerate() {
                    if qos == pos {
                        continue;
                    }
                    let d = dist.get(c.members[0], other.members[0]);
                    others.push(other.node_id as u32);
                    entries.push((other.node_id as u32, alpha * (-gamma * d * d).exp()));
                }
                others.sort_unstable();
                simple_mass_capped(Frame::new(others)?, &entries)
            } else {
                match variant {
                    Variant::A(link) => variant_a_mass(pos, &clusters, link, alpha, gamma, &dist)?,
                    Variant::B => {
                        let views: Vec<ClusterView> = clusters
                            .iter()
                            .map(|c| ClusterView {
                                id: c.node_id as u32,
                                members: c.members.clone(),
                            })
                            .collect();
                        variant_b_mass(pos, &views, alpha, gamma, &dist)?
                    }
                }
            };
            ids.push(c.node_id as u32);
            betps.push(pignistic(&mass)?);
        }

        let sel = best_pair(&ids, &betps);
        let raw = sel.betp_a_of_b + sel.betp_b_of_a;
        monotone = monotone.max(raw);
        merges.push(Merge {
            left: sel.a as usize,
            right: sel.b as usize,
            index: monotone,
            new_node: next_node,
        });
        trace.rows.push(MergeTraceRow {
            cluster_a: sel.a as usize,
            cluster_b: sel.b as usize,
            betp_a_of_b: sel.betp_a_of_b,
            betp_b_of_a: sel.betp_b_of_a,
            product: sel.product(),
            raw_index: raw,
            monotone_index: monotone,
        });

        let pos_a = clusters
            .iter()
            .position(|c| c.node_id == sel.a as usize)
            .expect("selected cluster is active");
        let pos_b = clusters
            .iter()
            .position(|c| c.node_id == sel.b as usize)
            .expect("selected cluster is active");
        merge_active(&mut clusters, pos_a, pos_b, next_node);
        next_node += 1;
        step += 1;
    }

    Ok((
        Dendrogram {
            n_leaves,
            merges,
            index_kind: IndexKind::BetpMonotone,
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(points: &[f64]) -> Dataset {
        Dataset::new(points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    fn fixed(alpha: f64, gamma: f64) -> MassParams {
        MassParams::new(alpha, Gamma::Fixed(gamma)).unwrap()
    }

    #[test]
    fn object_mass_at_zero_distance() {
        let data = one_d(&[1.0, 1.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let m = object_mass(0, &data, &dist, &MassParams::default()).unwrap();
        // with n = 2 the frame is {x1}, so the 0.95 decay and the 0.05
        // remainder land on the same subset
        assert!((m.mass_of_elements(&[1]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(m.focal_count(), 1);

        // with a third, distant object the two parts are distinguishable
        let data = one_d(&[1.0, 1.0, 1e9]);
        let dist = euclidean_matrix(&data).unwrap();
        let params = MassParams::new(0.95, Gamma::Fixed(1.0)).unwrap();
        let m = object_mass(0, &data, &dist, &params).unwrap();
        assert!((m.mass_of_elements(&[1]).unwrap() - 0.95).abs() < 1e-12);
        assert!((m.mass_of_elements(&[1, 2]).unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn object_mass_vacuous_at_huge_distance() {
        let data = one_d(&[0.0, 1e9, 2e9]);
        let dist = euclidean_matrix(&data).unwrap();
        let m = object_mass(0, &data, &dist, &fixed(1.0, 1.0)).unwrap();
        assert!((m.mass_of_elements(&[1, 2]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn object_mass_matches_direct_formula() {
        // d²(0,1) = 1, d²(0,2) = 4, alpha 0.9, gamma 1
        let data = one_d(&[0.0, 1.0, 2.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let m = object_mass(0, &data, &dist, &fixed(0.9, 1.0)).unwrap();
        assert!((m.mass_of_elements(&[1]).unwrap() - 0.3310914970542981).abs() < 1e-12);
        assert!((m.mass_of_elements(&[2]).unwrap() - 0.01648407499986076).abs() < 1e-12);
        assert!((m.mass_of_elements(&[1, 2]).unwrap() - 0.6524244279458411).abs() < 1e-12);
    }

    #[test]
    fn object_mass_caps_overflowing_singletons() {
        // alpha 1 and three coincident points: singleton masses sum to 2
        let data = one_d(&[0.0, 0.0, 0.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let m = object_mass(0, &data, &dist, &fixed(1.0, 1.0)).unwrap();
        assert!((m.mass_of_elements(&[1]).unwrap() - 0.5).abs() < 1e-12);
        assert!((m.mass_of_elements(&[2]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(m.mass_of_elements(&[1, 2]).unwrap(), 0.0);
    }

    #[test]
    fn pair_of_two_objects() {
        let data = one_d(&[0.0, 3.0]);
        let pair = select_object_pair(&data, &MassParams::default()).unwrap();
        assert_eq!(pair, (0, 1));
    }

    #[test]
    fn nearest_collinear_pair_wins() {
        let data = one_d(&[0.0, 1.0, 100.0]);
        let pair = select_object_pair(&data, &MassParams::default()).unwrap();
        assert_eq!(pair, (0, 1));
    }

    #[test]
    fn exact_ties_break_to_smallest_pair() {
        // (0,1) and (1,2) produce bitwise-identical pignistic products
        let data = one_d(&[0.0, 1.0, 2.0]);
        let pair = select_object_pair(&data, &MassParams::default()).unwrap();
        assert_eq!(pair, (0, 1));
    }

    #[test]
    fn variant_a_two_cluster_structure() {
        let data = one_d(&[0.0, 0.1, 4.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 0, 1]).unwrap();
        let m =
            cluster_mass_variant_a(0, &p, Linkage::Single, &fixed(0.8, 0.1), &data, &dist).unwrap();
        // frame is the single other cluster; remainder folds onto it
        assert_eq!(m.frame().elements(), &[1]);
        assert!((m.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variant_a_certainty_at_zero_distance() {
        let data = one_d(&[0.0, 0.0, 9.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 1, 2]).unwrap();
        let m =
            cluster_mass_variant_a(0, &p, Linkage::Single, &fixed(1.0, 1.0), &data, &dist).unwrap();
        assert_eq!(m.mass_of_elements(&[1]).unwrap(), 1.0);
    }

    #[test]
    fn variant_a_matches_object_level_formula() {
        // singleton clusters at 0, 1, 2: same numbers as the object mass
        let data = one_d(&[0.0, 1.0, 2.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 1, 2]).unwrap();
        let m =
            cluster_mass_variant_a(0, &p, Linkage::Single, &fixed(0.9, 1.0), &data, &dist).unwrap();
        assert!((m.mass_of_elements(&[1]).unwrap() - 0.3310914970542981).abs() < 1e-12);
        assert!((m.mass_of_elements(&[2]).unwrap() - 0.01648407499986076).abs() < 1e-12);
    }

    #[test]
    fn variant_b_on_singletons_equals_variant_a_single_link() {
        let data = one_d(&[0.0, 0.7, 2.2, 5.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 1, 2, 3]).unwrap();
        let params = fixed(0.9, 0.3);
        for k in 0..4 {
            let a = cluster_mass_variant_a(k, &p, Linkage::Single, &params, &data, &dist).unwrap();
            let b = cluster_mass_variant_b(k, &p, &dist, &params).unwrap();
            for (set, mass) in a.focal_iter() {
                assert!((b.mass_of(set) - mass).abs() < 1e-12);
            }
            assert_eq!(a.focal_count(), b.focal_count());
        }
    }

    #[test]
    fn variant_b_vacuous_members_combine_to_vacuous() {
        // cluster {0, 1} far from everything: member masses are vacuous
        let data = one_d(&[0.0, 0.1, 1e8, 2e8]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 0, 1, 2]).unwrap();
        let m = cluster_mass_variant_b(0, &p, &dist, &fixed(1.0, 1.0)).unwrap();
        assert!((m.mass_of_elements(&[1, 2]).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn variant_b_is_dempster_of_member_masses() {
        let data = one_d(&[0.0, 1.0, 3.0, 3.5, 7.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 0, 1, 1, 2]).unwrap();
        let params = fixed(0.85, 0.2);
        let combined = cluster_mass_variant_b(0, &p, &dist, &params).unwrap();

        // hand-build the two member masses and combine them
        let frame = Frame::new(vec![1, 2]).unwrap();
        let member = |xi: usize| {
            let value = |members: &[usize]| {
                members
                    .iter()
                    .map(|&xm| {
                        let d = dist.get(xi, xm);
                        0.85 * (-0.2 * d * d).exp()
                    })
                    .product::<f64>()
            };
            let entries = vec![(1u32, value(&[2, 3])), (2u32, value(&[4]))];
            simple_mass_capped(frame.clone(), &entries)
        };
        let expected = dempster_combine(&member(0), &member(1)).unwrap();
        for (set, mass) in expected.focal_iter() {
            assert!((combined.mass_of(set) - mass).abs() < 1e-12);
        }
    }

    #[test]
    fn select_cluster_pair_two_clusters() {
        let frame1 = Frame::new(vec![1]).unwrap();
        let frame0 = Frame::new(vec![0]).unwrap();
        let m0 = simple_mass_capped(frame1, &[(1, 0.4)]);
        let m1 = simple_mass_capped(frame0, &[(0, 0.7)]);
        let sel = select_cluster_pair(&[(0, m0), (1, m1)]).unwrap();
        assert_eq!((sel.a, sel.b), (0, 1));
        // single-element frames pin both pignistic factors to one
        assert_eq!(sel.betp_a_of_b, 1.0);
        assert_eq!(sel.betp_b_of_a, 1.0);
    }

    #[test]
    fn zero_distance_pair_dominates_selection() {
        // clusters 0 and 1 coincide; the others are far enough that their
        // decays underflow to zero, so the winning product is exactly one
        let data = one_d(&[0.0, 0.0, 200.0, 400.0]);
        let dist = euclidean_matrix(&data).unwrap();
        let p = Partition::from_labels(&[0, 1, 2, 3]).unwrap();
        let params = fixed(1.0, 0.05);
        let masses: Vec<(u32, MassFunction)> = (0..4)
            .map(|k| {
                (
                    k as u32,
                    cluster_mass_variant_a(k, &p, Linkage::Single, &params, &data, &dist).unwrap(),
                )
            })
            .collect();
        let sel = select_cluster_pair(&masses).unwrap();
        assert_eq!((sel.a, sel.b), (0, 1));
        assert!((sel.product() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_objects_make_one_merge() {
        let data = one_d(&[0.0, 2.0]);
        let (dend, trace) = bhc_cluster(&data, &MassParams::default(), Variant::B, None).unwrap();
        assert_eq!(dend.merges.len(), 1);
        assert_eq!(trace.rows.len(), 1);
        assert_eq!(dend.index_kind, IndexKind::BetpMonotone);
        // the only pair: both frames are single-element, so the index is 2
        assert!((trace.rows[0].raw_index - 2.0).abs() < 1e-12);
    }

    #[test]
    fn three_points_merge_near_pair_first() {
        let data = one_d(&[0.0, 1.0, 10.0]);
        let params = MassParams::default();
        for variant in [Variant::A(Linkage::Single), Variant::B] {
            let (dend, trace) = bhc_cluster(&data, &params, variant, None).unwrap();
            assert_eq!((dend.merges[0].left, dend.merges[0].right), (0, 1));
            assert_eq!((dend.merges[1].left, dend.merges[1].right), (2, 3));
            for row in &trace.rows {
                assert!((row.product - row.betp_a_of_b * row.betp_b_of_a).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monotone_index_never_decreases() {
        let data = Dataset::new(
            (0..9)
                .map(|i| vec![(i as f64 * 1.7).sin() * 4.0, (i as f64 * 0.9).cos() * 4.0])
                .collect(),
        )
        .unwrap();
        let (dend, trace) =
            bhc_cluster(&data, &MassParams::default(), Variant::A(Linkage::Average), None).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for (m, row) in dend.merges.iter().zip(&trace.rows) {
            assert!(m.index >= prev);
            assert_eq!(m.index, row.monotone_index);
            assert!(row.monotone_index >= row.raw_index - 1e-15);
            prev = m.index;
        }
    }

    #[test]
    fn starts_from_initial_partition_at_cluster_level() {
        let data = one_d(&[0.0, 0.2, 5.0, 5.2, 20.0, 20.2]);
        let initial = Partition::from_labels(&[0, 0, 1, 1, 2, 2]).unwrap();
        let (dend, _) = bhc_cluster(
            &data,
            &MassParams::default(),
            Variant::A(Linkage::Average),
            Some(&initial),
        )
        .unwrap();
        assert_eq!(dend.n_leaves, 3);
        assert_eq!((dend.merges[0].left, dend.merges[0].right), (0, 1));
    }

    #[test]
    fn params_validation() {
        assert!(MassParams::new(0.0, Gamma::Auto).is_err());
        assert!(MassParams::new(1.1, Gamma::Auto).is_err());
        assert!(MassParams::new(0.5, Gamma::Fixed(0.0)).is_err());
        assert!(MassParams::new(0.5, Gamma::AutoScaled(-1.0)).is_err());
        assert!(MassParams::new(1.0, Gamma::Fixed(2.0)).is_ok());
    }

    #[test]
    fn auto_gamma_is_median_reciprocal() {
        let params = MassParams::default();
        let g = resolve_gamma(&params, vec![4.0, 1.0, 9.0]);
        assert!((g - 0.25).abs() < 1e-12);
        let g_even = resolve_gamma(&params, vec![1.0, 3.0, 0.0, 5.0, 7.0]);
        assert!((g_even - 0.25).abs() < 1e-12);
        assert_eq!(resolve_gamma(&params, vec![0.0, 0.0]), 1.0);

        let scaled = MassParams::new(0.95, Gamma::AutoScaled(4.0)).unwrap();
        assert!((resolve_gamma(&scaled, vec![4.0, 1.0, 9.0]) - 1.0).abs() < 1e-12);
    }
}
