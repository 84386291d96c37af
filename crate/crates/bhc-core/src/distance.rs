//! Pairwise object distances and linkage distances between clusters.

use std::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// A symmetric matrix of nonnegative dissimilarities with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Build from a symmetric distance function over item indices.
    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, mut dist: F) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist(i, j);
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Iterator over the strict upper triangle: (i, j, d) with i < j.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }
}

/// Squared Euclidean distance between two feature vectors.
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance between two feature vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Pairwise Euclidean distance matrix over a dataset.
pub fn euclidean_matrix(data: &Dataset) -> Result<DistanceMatrix> {
    let dim = data.dim();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            row: 0,
            expected: 1,
            got: 0,
        });
    }
    // Dataset construction guarantees equal row widths.
    Ok(DistanceMatrix::from_fn(data.n(), |i, j| {
        euclidean(data.row(i), data.row(j))
    }))
}

/// The rule extending point distances to cluster distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Minimum distance over cross pairs.
    Single,
    /// Maximum distance over cross pairs.
    Complete,
    /// Mean distance over cross pairs.
    Average,
    /// Size-weighted squared distance between cluster centers.
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 4] = [
        Linkage::Single,
        Linkage::Complete,
        Linkage::Average,
        Linkage::Ward,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
            Linkage::Ward => "ward",
        }
    }
}

impl FromStr for Linkage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            "average" => Ok(Linkage::Average),
            "ward" => Ok(Linkage::Ward),
            other => Err(format!("unknown linkage '{other}'")),
        }
    }
}

/// Center and size of a cluster, required by Ward linkage.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub center: Vec<f64>,
    pub size: usize,
}

impl ClusterSummary {
    /// Summary of a cluster given its member rows.
    pub fn from_members(data: &Dataset, members: &[usize]) -> Self {
        let dim = data.dim();
        let mut center = vec![0.0; dim];
        for &m in members {
            for (c, x) in center.iter_mut().zip(data.row(m)) {
                *c += x;
            }
        }
        for c in &mut center {
            *c /= members.len() as f64;
        }
        Self {
            center,
            size: members.len(),
        }
    }

    /// Size-weighted average of two summaries, used when clusters merge.
    pub fn merged(&self, other: &Self) -> Self {
        let total = (self.size + other.size) as f64;
        let center = self
            .center
            .iter()
            .zip(&other.center)
            .map(|(a, b)| (a * self.size as f64 + b * other.size as f64) / total)
            .collect();
        Self {
            center,
            size: self.size + other.size,
        }
    }
}

/// Distance between two clusters under a linkage rule.
///
/// `members_a` and `members_b` index into `base`; Ward additionally needs the
/// two cluster summaries and ignores the member lists.
pub fn linkage_distance(
    link: Linkage,
    members_a: &[usize],
    members_b: &[usize],
    base: &DistanceMatrix,
    summaries: Option<(&ClusterSummary, &ClusterSummary)>,
) -> Result<f64> {
    if members_a.is_empty() || members_b.is_empty() {
        return Err(Error::TooFewObjects { needed: 1, got: 0 });
    }
    match link {
        Linkage::Single => {
            let mut best = f64::INFINITY;
            for &i in members_a {
                for &j in members_b {
                    best = best.min(base.get(i, j));
                }
            }
            Ok(best)
        }
        Linkage::Complete => {
            let mut worst: f64 = 0.0;
            for &i in members_a {
                for &j in members_b {
                    worst = worst.max(base.get(i, j));
                }
            }
            Ok(worst)
        }
        Linkage::Average => {
            let mut sum = 0.0;
            for &i in members_a {
                for &j in members_b {
                    sum += base.get(i, j);
                }
            }
            Ok(sum / (members_a.len() * members_b.len()) as f64)
        }
        Linkage::Ward => {
            let (sa, sb) = summaries.ok_or(Error::MissingSummaries)?;
            let (ma, mb) = (sa.size as f64, sb.size as f64);
            Ok(ma * mb / (ma + mb) * squared_euclidean(&sa.center, &sb.center))
        }
    }
}
