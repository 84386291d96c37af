use crate::error::{Error, Result};

/// A set of objects described by numeric feature vectors, with optional
/// ground-truth class labels and per-object names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
    names: Option<Vec<String>>,
}

impl Dataset {
    /// Build a dataset from feature rows. All rows must have the same width.
    pub fn new(features: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = features.first() {
            let dim = first.len();
            for (row, f) in features.iter().enumerate() {
                if f.len() != dim {
                    return Err(Error::DimensionMismatch {
                        row,
                        expected: dim,
                        got: f.len(),
                    });
                }
            }
        }
        Ok(Self {
            features,
            labels: None,
            names: None,
        })
    }

    /// Attach ground-truth class labels (one per object).
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Attach per-object names (one per object).
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Number of objects.
    pub fn n(&self) -> usize {
        self.features.len()
    }

    /// Feature dimension (0 for an empty dataset).
    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// Feature vector of object `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    /// All feature rows.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Copy of the dataset with every feature standardized to zero mean and
    /// unit variance. Constant features are centered and left at zero.
    pub fn standardized(&self) -> Self {
        let n = self.n();
        let d = self.dim();
        if n == 0 || d == 0 {
            return self.clone();
        }
        let mut mean = vec![0.0; d];
        for row in &self.features {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut var = vec![0.0; d];
        for row in &self.features {
            for ((v, x), m) in var.iter_mut().zip(row).zip(&mean) {
                *v += (x - m) * (x - m);
            }
        }
        let std: Vec<f64> = var
            .iter()
            .map(|v| {
                let s = (v / n as f64).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        let features = self
            .features
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&mean)
                    .zip(&std)
                    .map(|((x, m), s)| (x - m) / s)
                    .collect()
            })
            .collect();
        Self {
            features,
            labels: self.labels.clone(),
            names: self.names.clone(),
        }
    }
}
