//! Exhaustive reference implementations used by the test suites.
//!
//! Everything here trades speed for obviousness: dense enumeration over all
//! 2^|Ω| subsets, full recomputation at every clustering step, closed-form
//! pignistic values. None of it shares code with the production paths it is
//! used to check.

use crate::belief::MassFunction;
use crate::dataset::Dataset;
use crate::distance::{DistanceMatrix, Linkage};

/// A mass function stored densely: `masses[s]` is the mass of the subset
/// whose bitmask over the frame positions is `s`. Limited to small frames.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMass {
    pub universe: usize,
    pub masses: Vec<f64>,
}

impl DenseMass {
    pub fn new(universe: usize) -> Self {
        assert!(universe <= 20, "dense enumeration is for small frames");
        Self {
            universe,
            masses: vec![0.0; 1 << universe],
        }
    }

    /// Densify a sparse mass function (positions follow the frame order).
    pub fn from_mass_function(m: &MassFunction) -> Self {
        let universe = m.frame().len();
        let mut dense = Self::new(universe);
        for (set, mass) in m.focal_iter() {
            let mut bits = 0usize;
            for p in set.positions() {
                bits |= 1 << p;
            }
            dense.masses[bits] += mass;
        }
        dense
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Largest absolute per-subset difference against a sparse mass function
    /// over the same frame.
    pub fn max_abs_diff(&self, m: &MassFunction) -> f64 {
        let other = Self::from_mass_function(m);
        self.masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Conjunctive combination by enumerating every pair of subsets.
pub fn conjunctive_dense(m1: &DenseMass, m2: &DenseMass) -> DenseMass {
    assert_eq!(m1.universe, m2.universe);
    let mut out = DenseMass::new(m1.universe);
    for (a, &ma) in m1.masses.iter().enumerate() {
        if ma == 0.0 {
            continue;
        }
        for (b, &mb) in m2.masses.iter().enumerate() {
            if mb == 0.0 {
                continue;
            }
            out.masses[a & b] += ma * mb;
        }
    }
    out
}

/// Dempster combination via the dense conjunctive rule; `None` on total
/// conflict.
pub fn dempster_dense(m1: &DenseMass, m2: &DenseMass) -> Option<DenseMass> {
    let mut conj = conjunctive_dense(m1, m2);
    let conflict = conj.masses[0];
    if conflict >= 1.0 - 1e-12 {
        return None;
    }
    conj.masses[0] = 0.0;
    for m in &mut conj.masses {
        *m /= 1.0 - conflict;
    }
    Some(conj)
}

/// Pignistic probabilities of a dense mass, one value per frame position;
/// `None` on total conflict.
pub fn pignistic_dense(m: &DenseMass) -> Option<Vec<f64>> {
    let conflict = m.masses[0];
    if conflict >= 1.0 - 1e-12 {
        return None;
    }
    let mut probs = vec![0.0; m.universe];
    for (set, &mass) in m.masses.iter().enumerate().skip(1) {
        if mass == 0.0 {
            continue;
        }
        let card = set.count_ones() as f64;
        for (p, prob) in probs.iter_mut().enumerate() {
            if set & (1 << p) != 0 {
                *prob += mass / card;
            }
        }
    }
    for p in &mut probs {
        *p /= 1.0 - conflict;
    }
    Some(probs)
}

/// Hierarchical clustering by brute force: at every step recompute the
/// linkage distance of every cluster pair directly from the member lists and
/// take the argmin, ties broken by the smallest (min id, max id). Returns
/// the merge list as (left, right, distance) with the same node numbering as
/// the production dendrogram.
pub fn hac_naive(data: &Dataset, base: &DistanceMatrix, link: Linkage) -> Vec<(usize, usize, f64)> {
    let n = data.n();
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    let mut next = n;
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for p in 0..clusters.len() {
            for q in (p + 1)..clusters.len() {
                let d = naive_linkage(link, &clusters[p].1, &clusters[q].1, data, base);
                let (lo, hi) = if clusters[p].0 < clusters[q].0 {
                    (clusters[p].0, clusters[q].0)
                } else {
                    (clusters[q].0, clusters[p].0)
                };
                let better = match best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => d < bd || (d == bd && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((d, lo, hi, p, q));
                }
            }
        }
        let (d, lo, hi, p, q) = best.unwrap();
        merges.push((lo, hi, d));
        let members_q = clusters.remove(q).1;
        let mut members = clusters.remove(p).1;
        members.extend(members_q);
        members.sort_unstable();
        clusters.push((next, members));
        next += 1;
    }
    merges
}

fn naive_linkage(
    link: Linkage,
    a: &[usize],
    b: &[usize],
    data: &Dataset,
    base: &DistanceMatrix,
) -> f64 {
    match link {
        Linkage::Single => a
            .iter()
            .flat_map(|&i| b.iter().map(move |&j| base.get(i, j)))
            .fold(f64::INFINITY, f64::min),
        Linkage::Complete => a
            .iter()
            .flat_map(|&i| b.iter().map(move |&j| base.get(i, j)))
            .fold(0.0, f64::max),
        Linkage::Average => {
            let sum: f64 = a
                .iter()
                .flat_map(|&i| b.iter().map(move |&j| base.get(i, j)))
                .sum();
            sum / (a.len() * b.len()) as f64
        }
        Linkage::Ward => {
            let mean = |members: &[usize]| -> Vec<f64> {
                let mut c = vec![0.0; data.dim()];
                for &m in members {
                    for (ci, x) in c.iter_mut().zip(data.row(m)) {
                        *ci += x;
                    }
                }
                for ci in &mut c {
                    *ci /= members.len() as f64;
                }
                c
            };
            let (ca, cb) = (mean(a), mean(b));
            let d2: f64 = ca.iter().zip(&cb).map(|(x, y)| (x - y) * (x - y)).sum();
            (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64 * d2
        }
    }
}

/// Closed-form pignistic value a simple mass (singletons plus frame) assigns
/// to one element: the singleton mass plus an equal share of the frame mass,
/// with the same proportional rescaling when singleton masses overflow one.
pub fn simple_betp(singleton_values: &[f64], target: usize) -> f64 {
    let sum: f64 = singleton_values.iter().sum();
    let frame_size = singleton_values.len() as f64;
    if sum > 1.0 {
        singleton_values[target] / sum
    } else {
        singleton_values[target] + (1.0 - sum) / frame_size
    }
}

/// Exhaustive argmax of the pignistic pair product at the object level:
/// every mass value is recomputed from the decay formula and the pignistic
/// values are taken in closed form.
pub fn best_object_pair_naive(dist: &DistanceMatrix, alpha: f64, gamma: f64) -> (usize, usize) {
    let n = dist.n();
    let betp = |i: usize, j: usize| -> f64 {
        // frame of i: all objects but i, in ascending order
        let mut values = Vec::with_capacity(n - 1);
        let mut target = usize::MAX;
        for o in 0..n {
            if o == i {
                continue;
            }
            if o == j {
                target = values.len();
            }
            let d = dist.get(i, o);
            values.push(alpha * (-gamma * d * d).exp());
        }
        simple_betp(&values, target)
    };
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    for i in 0..n {
        for j in (i + 1)..n {
            let p = betp(i, j) * betp(j, i);
            if p > best.0 {
                best = (p, i, j);
            }
        }
    }
    (best.1, best.2)
}

/// Exhaustive argmax of the pignistic pair product at the cluster level,
/// given each cluster's singleton mass values for every other cluster.
/// `values[i]` holds `(other_id, mass_value)` rows for cluster `ids[i]`.
pub fn best_cluster_pair_naive(ids: &[u32], values: &[Vec<(u32, f64)>]) -> (u32, u32) {
    let betp = |holder: usize, about: u32| -> f64 {
        // elements of the holder's frame are sorted ascending by id
        let mut rows = values[holder].clone();
        rows.sort_by_key(|(id, _)| *id);
        let vals: Vec<f64> = rows.iter().map(|(_, v)| *v).collect();
        let target = rows.iter().position(|(id, _)| *id == about).unwrap();
        simple_betp(&vals, target)
    };
    let mut best: Option<(f64, u32, u32)> = None;
    for p in 0..ids.len() {
        for q in (p + 1)..ids.len() {
            let (lo, hi) = if ids[p] < ids[q] {
                (ids[p], ids[q])
            } else {
                (ids[q], ids[p])
            };
            let prod = betp(p, ids[q]) * betp(q, ids[p]);
            let better = match best {
                None => true,
                Some((bp, blo, bhi)) => prod > bp || (prod == bp && (lo, hi) < (blo, bhi)),
            };
            if better {
                best = Some((prod, lo, hi));
            }
        }
    }
    let (_, lo, hi) = best.unwrap();
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::{make_simple_mass, Frame};

    #[test]
    fn dense_roundtrip_preserves_masses() {
        let frame = Frame::new(vec![0, 1, 2]).unwrap();
        let m = make_simple_mass(frame, &[(0, 0.5), (2, 0.2)]).unwrap();
        let dense = DenseMass::from_mass_function(&m);
        assert!((dense.total() - 1.0).abs() < 1e-12);
        assert_eq!(dense.max_abs_diff(&m), 0.0);
    }

    #[test]
    fn simple_betp_shares_frame_mass_evenly() {
        // three singletons at 0.2 each, frame mass 0.4 split three ways
        let v = [0.2, 0.2, 0.2];
        assert!((simple_betp(&v, 1) - (0.2 + 0.4 / 3.0)).abs() < 1e-12);
    }
}
