//! End-to-end runs: optional standardization, optional k-means
//! pre-clustering, the chosen hierarchical algorithm, dendrogram cut and
//! evaluation, plus the full evaluation grid behind `reproduce`.

use anyhow::Context;
use bhc_core::{
    bhc_cluster, cut, evaluate, hac_cluster_from, kmeans, Dataset, Dendrogram, Gamma,
    KMeansConfig, Linkage, MassParams, MergeTrace, Metrics, Partition, Variant,
};

use crate::io::MetricsRow;

/// Which hierarchical algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Hac,
    BhcA,
    BhcB,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Hac => "hac",
            Algorithm::BhcA => "bhc-a",
            Algorithm::BhcB => "bhc-b",
        }
    }

    /// Whether the linkage setting matters for this algorithm.
    pub fn uses_linkage(&self) -> bool {
        !matches!(self, Algorithm::BhcB)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hac" => Ok(Algorithm::Hac),
            "bhc-a" => Ok(Algorithm::BhcA),
            "bhc-b" => Ok(Algorithm::BhcB),
            other => Err(format!("unknown algorithm '{other}' (expected hac, bhc-a or bhc-b)")),
        }
    }
}

/// Parse a gamma argument: `auto`, `auto:<multiplier>` or a positive number.
pub fn parse_gamma(s: &str) -> Result<Gamma, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Gamma::Auto);
    }
    if let Some(mult) = s.strip_prefix("auto:") {
        return match mult.parse::<f64>() {
            Ok(m) if m > 0.0 => Ok(Gamma::AutoScaled(m)),
            _ => Err(format!("gamma multiplier must be positive, got '{mult}'")),
        };
    }
    match s.parse::<f64>() {
        Ok(g) if g > 0.0 => Ok(Gamma::Fixed(g)),
        _ => Err(format!(
            "gamma must be 'auto', 'auto:<multiplier>' or a positive number, got '{s}'"
        )),
    }
}

/// Human-readable gamma setting, the inverse of [`parse_gamma`].
pub fn gamma_label(gamma: Gamma) -> String {
    match gamma {
        Gamma::Auto => "auto".to_string(),
        Gamma::AutoScaled(m) => format!("auto:{m}"),
        Gamma::Fixed(g) => format!("{g}"),
    }
}

/// A fully specified run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub linkage: Linkage,
    pub alpha: f64,
    pub gamma: Gamma,
    pub k_init: Option<usize>,
    pub f_c: Option<usize>,
    pub seed: u64,
    pub standardize: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Hac,
            linkage: Linkage::Single,
            alpha: 0.95,
            gamma: Gamma::Auto,
            k_init: None,
            f_c: None,
            seed: 42,
            standardize: false,
        }
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub dendrogram: Dendrogram,
    pub trace: Option<MergeTrace>,
    /// Objects → dendrogram leaves, present when k-means pre-clustering ran.
    pub pre_partition: Option<Partition>,
    /// Objects → final clusters, present when a cut target was given.
    pub object_partition: Option<Partition>,
    /// Present when the dataset has labels and a cut target was given.
    pub metrics: Option<Metrics>,
}

/// Map a dendrogram cut back to object level through the pre-clustering.
pub fn object_partition(
    dendrogram: &Dendrogram,
    pre: Option<&Partition>,
    f_c: usize,
) -> anyhow::Result<Partition> {
    let leaf_partition = cut(dendrogram, f_c)?;
    match pre {
        None => Ok(leaf_partition),
        Some(p0) => {
            let labels: Vec<usize> = (0..p0.n())
                .map(|o| leaf_partition.cluster_of(p0.cluster_of(o)))
                .collect();
            Ok(Partition::from_labels(&labels)?)
        }
    }
}

/// Run the configured pipeline on a dataset.
pub fn run_pipeline(cfg: &RunConfig, data: &Dataset) -> anyhow::Result<PipelineOutput> {
    let data = if cfg.standardize {
        data.standardized()
    } else {
        data.clone()
    };

    let pre = match cfg.k_init {
        Some(k) => Some(
            kmeans(
                &data,
                &KMeansConfig {
                    k,
                    max_iters: 100,
                    tol: 1e-9,
                    seed: cfg.seed,
                },
            )
            .context("k-means pre-clustering failed")?,
        ),
        None => None,
    };

    let (dendrogram, trace) = match cfg.algorithm {
        Algorithm::Hac => (hac_cluster_from(&data, cfg.linkage, pre.as_ref())?, None),
        Algorithm::BhcA => {
            let params = MassParams::new(cfg.alpha, cfg.gamma)?;
            let (d, t) = bhc_cluster(&data, &params, Variant::A(cfg.linkage), pre.as_ref())?;
            (d, Some(t))
        }
        Algorithm::BhcB => {
            let params = MassParams::new(cfg.alpha, cfg.gamma)?;
            let (d, t) = bhc_cluster(&data, &params, Variant::B, pre.as_ref())?;
            (d, Some(t))
        }
    };

    let objects = match cfg.f_c {
        Some(f_c) => Some(object_partition(&dendrogram, pre.as_ref(), f_c)?),
        None => None,
    };
    let metrics = match (&objects, data.labels()) {
        (Some(p), Some(labels)) => Some(evaluate(p, &Partition::from_labels(labels)?)?),
        _ => None,
    };

    Ok(PipelineOutput {
        dendrogram,
        trace,
        pre_partition: pre,
        object_partition: objects,
        metrics,
    })
}

/// The grid a `reproduce` run sweeps: every algorithm (all linkages where
/// applicable), a set of seeds, a range of final cluster counts and, for
/// the belief variants only, a set of decay rates, all at a fixed
/// pre-clustering size.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub k_init: usize,
    pub seeds: Vec<u64>,
    pub f_c_min: usize,
    pub f_c_max: usize,
    pub alpha: f64,
    /// Decay rates swept for the belief variants. The decay rate is an
    /// exposed tuning parameter with no single canonical value, so the grid
    /// tries scale-adaptive multiples of the median-based rate.
    pub bhc_gammas: Vec<Gamma>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            k_init: 13,
            seeds: vec![42, 1, 2, 3, 4],
            f_c_min: 2,
            f_c_max: 6,
            alpha: 0.95,
            bhc_gammas: vec![
                Gamma::AutoScaled(0.25),
                Gamma::Auto,
                Gamma::AutoScaled(4.0),
                Gamma::AutoScaled(16.0),
                Gamma::AutoScaled(64.0),
            ],
        }
    }
}

/// Every (algorithm, linkage) combination the grid evaluates.
pub fn grid_algorithms() -> Vec<(Algorithm, Linkage)> {
    let mut out = Vec::new();
    for link in Linkage::ALL {
        out.push((Algorithm::Hac, link));
    }
    for link in Linkage::ALL {
        out.push((Algorithm::BhcA, link));
    }
    out.push((Algorithm::BhcB, Linkage::Single));
    out
}

/// Evaluate the whole grid on a labeled dataset. Each (algorithm, linkage,
/// seed) clusters once and is cut at every requested cluster count.
pub fn reproduce_grid(
    dataset_name: &str,
    data: &Dataset,
    spec: &GridSpec,
) -> anyhow::Result<Vec<MetricsRow>> {
    let labels = data
        .labels()
        .with_context(|| format!("dataset '{dataset_name}' has no ground-truth labels"))?;
    let truth = Partition::from_labels(labels)?;

    let mut rows = Vec::new();
    for (algorithm, linkage) in grid_algorithms() {
        let gammas: &[Gamma] = if algorithm == Algorithm::Hac {
            &[Gamma::Auto] // unused by the classical baseline
        } else {
            &spec.bhc_gammas
        };
        for &gamma in gammas {
            for &seed in &spec.seeds {
                let cfg = RunConfig {
                    algorithm,
                    linkage,
                    alpha: spec.alpha,
                    gamma,
                    k_init: Some(spec.k_init),
                    f_c: None,
                    seed,
                    standardize: false,
                };
                let out = run_pipeline(&cfg, data)?;
                for f_c in spec.f_c_min..=spec.f_c_max {
                    let partition =
                        object_partition(&out.dendrogram, out.pre_partition.as_ref(), f_c)?;
                    let metrics = evaluate(&partition, &truth)?;
                    rows.push(MetricsRow {
                        dataset: dataset_name.to_string(),
                        algorithm: algorithm.name().to_string(),
                        linkage: if algorithm.uses_linkage() {
                            linkage.name().to_string()
                        } else {
                            "-".to_string()
                        },
                        k_init: Some(spec.k_init),
                        f_c,
                        seed,
                        gamma: if algorithm == Algorithm::Hac {
                            "-".to_string()
                        } else {
                            gamma_label(gamma)
                        },
                        metrics,
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// Reference evaluation scores for the two-cluster split of Iris (one
/// species against the other two): the target of the reproduction report.
pub const IRIS_FC2_REFERENCE: Metrics = Metrics {
    precision: 0.5951,
    recall: 1.0,
    rand_index: 0.7763,
};

/// Largest absolute difference across the three scores.
pub fn max_abs_deviation(got: &Metrics, reference: &Metrics) -> f64 {
    (got.precision - reference.precision)
        .abs()
        .max((got.recall - reference.recall).abs())
        .max((got.rand_index - reference.rand_index).abs())
}

/// The row with the highest Rand index among those matching a predicate.
pub fn best_row(
    rows: &[MetricsRow],
    mut keep: impl FnMut(&MetricsRow) -> bool,
) -> Option<&MetricsRow> {
    rows.iter()
        .filter(|r| keep(r))
        .max_by(|a, b| {
            a.metrics
                .rand_index
                .partial_cmp(&b.metrics.rand_index)
                .expect("metrics are finite")
        })
}
