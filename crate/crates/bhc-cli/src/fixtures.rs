//! In-repo fixture datasets.

use bhc_core::Dataset;

/// A 12-point 2-D fixture: eleven points in two tight diamond-shaped groups
/// plus one distant outlier (the last point). The outlier should only join
/// the rest at the final merge, with a visible gap in the dendrogram index.
///
/// Ground-truth labels: 0 for the left diamond, 1 for the right diamond,
/// 2 for the outlier. The same points are shipped as `data/diamond.csv`.
pub fn diamond() -> Dataset {
    let points = vec![
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![0.0, -1.0],
        vec![-1.0, 0.0],
        vec![0.0, 0.0],
        vec![3.0, 0.0],
        vec![4.0, 1.0],
        vec![5.0, 0.0],
        vec![4.0, -1.0],
        vec![4.0, 0.0],
        vec![4.0, 0.5],
        vec![10.0, 8.0],
    ];
    let labels = vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2];
    Dataset::new(points)
        .expect("fixture rows are rectangular")
        .with_labels(labels)
        .expect("one label per point")
}
