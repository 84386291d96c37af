//! Pairwise clustering quality measures: precision, recall and Rand index.
//!
//! Two partitions are compared over all unordered object pairs, counting
//! whether each pair is grouped together or apart in each partition. This
//! needs no matching between cluster labels, so both partitions may use
//! arbitrary ids.

use crate::error::{Error, Result};
use crate::hac::Partition;

/// Pair agreement counts between a predicted and a reference partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Together in both partitions.
    pub true_pos: u64,
    /// Together in the prediction, apart in the reference.
    pub false_pos: u64,
    /// Apart in the prediction, together in the reference.
    pub false_neg: u64,
    /// Apart in both partitions.
    pub true_neg: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// Precision, recall and Rand index derived from pair counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub rand_index: f64,
}

/// Count pair agreements between two partitions of the same objects.
pub fn pair_counts(predicted: &Partition, truth: &Partition) -> Result<PairCounts> {
    if predicted.n() != truth.n() {
        return Err(Error::SizeMismatch {
            left: predicted.n(),
            right: truth.n(),
        });
    }
    let n = predicted.n();
    let mut counts = PairCounts {
        true_pos: 0,
        false_pos: 0,
        false_neg: 0,
        true_neg: 0,
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let same_pred = predicted.cluster_of(i) == predicted.cluster_of(j);
            let same_true = truth.cluster_of(i) == truth.cluster_of(j);
            match (same_pred, same_true) {
                (true, true) => counts.true_pos += 1,
                (true, false) => counts.false_pos += 1,
                (false, true) => counts.false_neg += 1,
                (false, false) => counts.true_neg += 1,
            }
        }
    }
    Ok(counts)
}

/// Precision, recall and Rand index from pair counts. Empty denominators
/// yield 1 (a vacuous claim is never wrong).
pub fn metrics(counts: &PairCounts) -> Metrics {
    let ratio = |num: u64, den: u64| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    Metrics {
        precision: ratio(counts.true_pos, counts.true_pos + counts.false_pos),
        recall: ratio(counts.true_pos, counts.true_pos + counts.false_neg),
        rand_index: ratio(counts.true_pos + counts.true_neg, counts.total()),
    }
}

/// Convenience: metrics straight from two partitions.
pub fn evaluate(predicted: &Partition, truth: &Partition) -> Result<Metrics> {
    Ok(metrics(&pair_counts(predicted, truth)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels).unwrap()
    }

    #[test]
    fn perfect_agreement() {
        // {{a,b},{c}} versus itself
        let p = part(&[0, 0, 1]);
        let c = pair_counts(&p, &p).unwrap();
        assert_eq!(
            c,
            PairCounts {
                true_pos: 1,
                false_pos: 0,
                false_neg: 0,
                true_neg: 2
            }
        );
        let m = metrics(&c);
        assert_eq!((m.precision, m.recall, m.rand_index), (1.0, 1.0, 1.0));
    }

    #[test]
    fn crossed_pair_example() {
        // truth {{a,b},{c}}, predicted {{a},{b,c}}
        let truth = part(&[0, 0, 1]);
        let predicted = part(&[0, 1, 1]);
        let c = pair_counts(&predicted, &truth).unwrap();
        assert_eq!(
            c,
            PairCounts {
                true_pos: 0,
                false_pos: 1,
                false_neg: 1,
                true_neg: 1
            }
        );
        let m = metrics(&c);
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.recall, 0.0);
        assert!((m.rand_index - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn all_singletons_predict_nothing_together() {
        let truth = part(&[0, 0, 1, 1]);
        let predicted = part(&[0, 1, 2, 3]);
        let c = pair_counts(&predicted, &truth).unwrap();
        assert_eq!(c.true_pos, 0);
        assert_eq!(c.false_pos, 0);
        // empty precision denominator reads as 1
        assert_eq!(metrics(&c).precision, 1.0);
    }

    #[test]
    fn counts_cover_all_pairs() {
        let truth = part(&[0, 1, 0, 1, 2, 2, 0]);
        let predicted = part(&[1, 1, 0, 0, 2, 0, 1]);
        let c = pair_counts(&predicted, &truth).unwrap();
        assert_eq!(c.total(), 7 * 6 / 2);
    }

    #[test]
    fn size_mismatch_rejected() {
        let a = part(&[0, 1]);
        let b = part(&[0, 1, 1]);
        assert!(matches!(pair_counts(&a, &b), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn swapping_arguments_swaps_precision_and_recall() {
        let truth = part(&[0, 0, 1, 1, 2]);
        let predicted = part(&[0, 0, 0, 1, 1]);
        let m1 = evaluate(&predicted, &truth).unwrap();
        let m2 = evaluate(&truth, &predicted).unwrap();
        assert_eq!(m1.precision, m2.recall);
        assert_eq!(m1.recall, m2.precision);
        assert_eq!(m1.rand_index, m2.rand_index);
    }
}
