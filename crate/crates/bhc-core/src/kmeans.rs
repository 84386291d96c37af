//! Seeded k-means (Lloyd iterations) used to pre-cluster a dataset before
//! the hierarchical stage.

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::distance::squared_euclidean;
use crate::error::{Error, Result};
use crate::hac::Partition;

/// k-means configuration. `seed` makes initialization reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iters: 100,
            tol: 1e-9,
            seed: 42,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Lloyd's algorithm: assign to the nearest center, recompute centers as
/// means, repeat until centers stop moving. Returns a partition with exactly
/// `k` nonempty clusters.
pub fn kmeans(data: &Dataset, cfg: &KMeansConfig) -> Result<Partition> {
    Ok(kmeans_with_history(data, cfg)?.0)
}

/// As [`kmeans`], additionally returning the within-cluster sum of squares
/// recorded after each assignment pass.
pub fn kmeans_with_history(data: &Dataset, cfg: &KMeansConfig) -> Result<(Partition, Vec<f64>)> {
    let n = data.n();
    if n < cfg.k || cfg.k == 0 {
        return Err(Error::TooFewObjects {
            needed: cfg.k.max(1),
            got: n,
        });
    }

    // Forgy initialization: k distinct objects drawn without replacement.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pool: Vec<usize> = (0..n).collect();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(cfg.k);
    for _ in 0..cfg.k {
        let pick = rng.random_range(0..pool.len());
        centers.push(data.row(pool.swap_remove(pick)).to_vec());
    }

    let mut assignment = vec![0usize; n];
    let mut objectives = Vec::new();
    for _ in 0..cfg.max_iters.max(1) {
        assign(data, &centers, &mut assignment);
        repair_empty_clusters(data, &mut centers, &mut assignment);
        objectives.push(objective(data, &centers, &assignment));

        // Recompute centers as member means.
        let dim = data.dim();
        let mut sums = vec![vec![0.0; dim]; cfg.k];
        let mut counts = vec![0usize; cfg.k];
        for (i, &c) in assignment.iter().enumerate() {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(data.row(i)) {
                *s += x;
            }
        }
        let mut movement: f64 = 0.0;
        for (c, sum) in sums.iter().enumerate() {
            debug_assert!(counts[c] > 0, "repair guarantees nonempty clusters");
            let new_center: Vec<f64> = sum.iter().map(|s| s / counts[c] as f64).collect();
            movement = movement.max(squared_euclidean(&centers[c], &new_center).sqrt());
            centers[c] = new_center;
        }
        if movement < cfg.tol {
            break;
        }
    }
    // Final assignment against the converged centers.
    assign(data, &centers, &mut assignment);
    repair_empty_clusters(data, &mut centers, &mut assignment);
    objectives.push(objective(data, &centers, &assignment));

    let partition = partition_from_assignment(&assignment, cfg.k)?;
    Ok((partition, objectives))
}

fn assign(data: &Dataset, centers: &[Vec<f64>], assignment: &mut [usize]) {
    for (i, slot) in assignment.iter_mut().enumerate() {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (c, center) in centers.iter().enumerate() {
            let d = squared_euclidean(data.row(i), center);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        *slot = best;
    }
}

// Any empty cluster takes over the point currently farthest from its center,
// guaranteeing k nonempty clusters.
fn repair_empty_clusters(data: &Dataset, centers: &mut [Vec<f64>], assignment: &mut [usize]) {
    let k = centers.len();
    loop {
        let mut counts = vec![0usize; k];
        for &c in assignment.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let mut far_point = usize::MAX;
        let mut far_d = -1.0;
        for (i, &c) in assignment.iter().enumerate() {
            // only steal from clusters that can spare a point
            if counts[c] <= 1 {
                continue;
            }
            let d = squared_euclidean(data.row(i), &centers[c]);
            if d > far_d {
                far_d = d;
                far_point = i;
            }
        }
        centers[empty] = data.row(far_point).to_vec();
        assignment[far_point] = empty;
    }
}

fn objective(data: &Dataset, centers: &[Vec<f64>], assignment: &[usize]) -> f64 {
    assignment
        .iter()
        .enumerate()
        .map(|(i, &c)| squared_euclidean(data.row(i), &centers[c]))
        .sum()
}

fn partition_from_assignment(assignment: &[usize], k: usize) -> Result<Partition> {
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        clusters[c].push(i);
    }
    Partition::from_clusters(assignment.len(), clusters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(points: &[f64]) -> Dataset {
        Dataset::new(points.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let data = one_d(&[0.0, 5.0, 9.0]);
        let p = kmeans(&data, &KMeansConfig::new(3)).unwrap();
        assert_eq!(p.k(), 3);
        assert!(p.clusters().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn k_one_gives_single_cluster() {
        let data = one_d(&[0.0, 5.0, 9.0]);
        let p = kmeans(&data, &KMeansConfig::new(1)).unwrap();
        assert_eq!(p.k(), 1);
        assert_eq!(p.clusters()[0], vec![0, 1, 2]);
    }

    #[test]
    fn separated_blobs_split_regardless_of_seed() {
        // Both possible 2-partitions of these points have been checked by
        // objective: grouping the two blobs is the unique optimum, and Lloyd
        // reaches it from every Forgy draw.
        let data = one_d(&[0.0, 0.1, 0.2, 10.0, 10.1]);
        for seed in 0..25 {
            let p = kmeans(&data, &KMeansConfig::new(2).with_seed(seed)).unwrap();
            let canon = p.canonical();
            assert_eq!(
                canon.clusters(),
                &[vec![0, 1, 2], vec![3, 4]],
                "seed {seed} failed"
            );
        }
    }

    #[test]
    fn objective_is_monotone_nonincreasing() {
        let data = Dataset::new(
            (0..30)
                .map(|i| vec![(i as f64 * 0.7).sin() * 10.0, (i as f64 * 1.3).cos() * 4.0])
                .collect(),
        )
        .unwrap();
        let (_, hist) = kmeans_with_history(&data, &KMeansConfig::new(4)).unwrap();
        for w in hist.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "objective increased: {:?}", w);
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let data = Dataset::new(
            (0..40)
                .map(|i| vec![(i as f64 * 0.37).sin() * 5.0, (i as f64 * 0.91).cos() * 5.0])
                .collect(),
        )
        .unwrap();
        let cfg = KMeansConfig::new(5).with_seed(7);
        let a = kmeans(&data, &cfg).unwrap();
        let b = kmeans(&data, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_objects_rejected() {
        let data = one_d(&[0.0, 1.0]);
        assert!(matches!(
            kmeans(&data, &KMeansConfig::new(3)),
            Err(Error::TooFewObjects { .. })
        ));
    }

    #[test]
    fn exact_k_nonempty_even_with_duplicates() {
        let data = one_d(&[1.0, 1.0, 1.0, 1.0, 8.0]);
        let p = kmeans(&data, &KMeansConfig::new(3)).unwrap();
        assert_eq!(p.k(), 3);
        assert!(p.clusters().iter().all(|c| !c.is_empty()));
    }
}
