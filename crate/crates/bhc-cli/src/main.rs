use std::path::PathBuf;

use anyhow::Context;
use bhc_cli::io::{
    self, load_csv, metrics_to_csv, partition_from_csv, partition_to_csv, ColumnSelector,
    LoadOptions, MetricsRow,
};
use bhc_cli::pipeline::{
    best_row, gamma_label, max_abs_deviation, parse_gamma, reproduce_grid, run_pipeline,
    Algorithm, GridSpec, RunConfig, IRIS_FC2_REFERENCE,
};
use bhc_cli::serialize::{dendrogram_from_json, dendrogram_to_json, dendrogram_to_newick};
use bhc_cli::svg::plot_dendrogram;
use bhc_core::{evaluate, Gamma, Linkage, Partition};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bhc",
    version,
    about = "Hierarchical clustering of uncertain data with belief functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a CSV dataset and write dendrogram, partition and metrics files
    Cluster(ClusterArgs),
    /// Evaluate a partition file against ground truth
    Eval(EvalArgs),
    /// Render a dendrogram JSON file as a deterministic SVG
    Plot(PlotArgs),
    /// Run the full evaluation grid over the bundled datasets
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Column holding ground-truth labels (header name or 0-based index)
    #[arg(long)]
    label_column: Option<String>,
    /// Field delimiter
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// Treat the first row as data, not as a header
    #[arg(long)]
    no_header: bool,
}

impl InputArgs {
    fn load(&self) -> anyhow::Result<bhc_core::Dataset> {
        let opts = LoadOptions {
            delimiter: self.delimiter as u8,
            has_header: !self.no_header,
            label_column: self.label_column.as_deref().map(ColumnSelector::parse),
        };
        Ok(load_csv(&self.input, &opts)?)
    }

    fn stem(&self) -> String {
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string())
    }
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    /// hac, bhc-a or bhc-b
    #[arg(long, default_value = "hac")]
    algorithm: Algorithm,
    /// single, complete, average or ward
    #[arg(long, default_value = "single")]
    linkage: Linkage,
    /// Mass decay scale in (0, 1]
    #[arg(long, default_value_t = 0.95)]
    alpha: f64,
    /// Mass decay rate: 'auto', 'auto:<multiplier>' or a positive number
    #[arg(long, default_value = "auto", value_parser = parse_gamma)]
    gamma: Gamma,
    /// Pre-cluster with k-means to this many clusters first
    #[arg(long)]
    k_init: Option<usize>,
    /// Cut the dendrogram to this many final clusters
    #[arg(long)]
    fc: Option<usize>,
    /// Seed for all randomness (k-means initialization)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Standardize features to zero mean and unit variance first
    #[arg(long)]
    standardize: bool,
    /// Dendrogram output format: json, newick or both
    #[arg(long, default_value = "json")]
    format: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicted partition CSV (object,cluster)
    #[arg(long)]
    pred: PathBuf,
    /// Reference partition CSV; alternative to --input/--label-column
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Dataset CSV providing ground-truth labels
    #[arg(long)]
    input: Option<PathBuf>,
    /// Label column of --input (header name or 0-based index)
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, default_value = ",")]
    delimiter: char,
    #[arg(long)]
    no_header: bool,
    /// Also write the scores as a metrics CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Dendrogram JSON produced by `cluster`
    #[arg(long)]
    dendrogram: PathBuf,
    /// SVG output path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Directory holding iris.csv and house_votes_84.csv
    #[arg(long, default_value = "data")]
    data_dir: PathBuf,
    /// Where the grid CSV files go
    #[arg(long, default_value = "reproduction")]
    out_dir: PathBuf,
    /// k-means pre-clustering size
    #[arg(long, default_value_t = 13)]
    k_init: usize,
    /// Comma-separated k-means seeds to sweep
    #[arg(long, default_value = "42,1,2,3,4", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    fc_min: usize,
    #[arg(long, default_value_t = 6)]
    fc_max: usize,
    #[arg(long, default_value_t = 0.95)]
    alpha: f64,
    /// Decay rates swept for the belief variants (comma-separated)
    #[arg(
        long,
        default_value = "auto:0.25,auto,auto:4,auto:16,auto:64",
        value_delimiter = ',',
        value_parser = parse_gamma
    )]
    gammas: Vec<Gamma>,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Cluster(args) => cluster(args),
        Command::Eval(args) => eval(args),
        Command::Plot(args) => plot(args),
        Command::Reproduce(args) => reproduce(args),
    }
}

fn cluster(args: ClusterArgs) -> anyhow::Result<()> {
    let data = args.input.load()?;
    let cfg = RunConfig {
        algorithm: args.algorithm,
        linkage: args.linkage,
        alpha: args.alpha,
        gamma: args.gamma,
        k_init: args.k_init,
        f_c: args.fc,
        seed: args.seed,
        standardize: args.standardize,
    };
    let out = run_pipeline(&cfg, &data)?;

    let write_json = matches!(args.format.as_str(), "json" | "both");
    let write_newick = matches!(args.format.as_str(), "newick" | "both");
    anyhow::ensure!(
        write_json || write_newick,
        "--format must be json, newick or both"
    );
    if write_json {
        io::write_text(
            &args.out.join("dendrogram.json"),
            &dendrogram_to_json(&out.dendrogram, out.trace.as_ref()),
        )?;
    }
    if write_newick {
        let mut newick = dendrogram_to_newick(&out.dendrogram, None);
        newick.push('\n');
        io::write_text(&args.out.join("dendrogram.nwk"), &newick)?;
    }
    if let Some(partition) = &out.object_partition {
        io::write_text(&args.out.join("partition.csv"), &partition_to_csv(partition))?;
    }
    if let Some(metrics) = out.metrics {
        let row = MetricsRow {
            dataset: args.input.stem(),
            algorithm: args.algorithm.name().to_string(),
            linkage: if args.algorithm.uses_linkage() {
                args.linkage.name().to_string()
            } else {
                "-".to_string()
            },
            k_init: args.k_init,
            f_c: args.fc.expect("metrics require a cut"),
            seed: args.seed,
            gamma: match args.algorithm {
                Algorithm::Hac => "-".to_string(),
                _ => gamma_label(args.gamma),
            },
            metrics,
        };
        io::write_text(&args.out.join("metrics.csv"), &metrics_to_csv(&[row]))?;
        println!(
            "precision={:.4} recall={:.4} rand_index={:.4}",
            metrics.precision, metrics.recall, metrics.rand_index
        );
    }
    println!(
        "wrote {} ({} leaves, {} merges)",
        args.out.join("dendrogram.*").display(),
        out.dendrogram.n_leaves,
        out.dendrogram.merges.len()
    );
    Ok(())
}

fn eval(args: EvalArgs) -> anyhow::Result<()> {
    let pred_text = std::fs::read_to_string(&args.pred)
        .with_context(|| format!("cannot read {}", args.pred.display()))?;
    let predicted = partition_from_csv(&pred_text)?;

    let truth = if let Some(truth_path) = &args.truth {
        let text = std::fs::read_to_string(truth_path)
            .with_context(|| format!("cannot read {}", truth_path.display()))?;
        partition_from_csv(&text)?
    } else {
        let input = args
            .input
            .as_ref()
            .context("provide either --truth or --input with --label-column")?;
        let label_column = args
            .label_column
            .as_ref()
            .context("--input requires --label-column")?;
        let opts = LoadOptions {
            delimiter: args.delimiter as u8,
            has_header: !args.no_header,
            label_column: Some(ColumnSelector::parse(label_column)),
        };
        let data = load_csv(input, &opts)?;
        let labels = data.labels().context("label column produced no labels")?;
        Partition::from_labels(labels)?
    };

    let metrics = evaluate(&predicted, &truth)?;
    println!(
        "precision={:.4} recall={:.4} rand_index={:.4}",
        metrics.precision, metrics.recall, metrics.rand_index
    );
    if let Some(out) = args.out {
        let row = MetricsRow {
            dataset: args.pred.display().to_string(),
            algorithm: "-".into(),
            linkage: "-".into(),
            k_init: None,
            f_c: predicted.k(),
            seed: 0,
            gamma: "-".into(),
            metrics,
        };
        io::write_text(&out, &metrics_to_csv(&[row]))?;
    }
    Ok(())
}

fn plot(args: PlotArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.dendrogram)
        .with_context(|| format!("cannot read {}", args.dendrogram.display()))?;
    let (dendrogram, _) = dendrogram_from_json(&text)?;
    io::write_text(&args.out, &plot_dendrogram(&dendrogram, None))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn reproduce(args: ReproduceArgs) -> anyhow::Result<()> {
    let spec = GridSpec {
        k_init: args.k_init,
        seeds: args.seeds.clone(),
        f_c_min: args.fc_min,
        f_c_max: args.fc_max,
        alpha: args.alpha,
        bhc_gammas: args.gammas.clone(),
    };

    let datasets: [(&str, &str, &str); 2] = [
        ("iris", "iris.csv", "species"),
        ("voting", "house_votes_84.csv", "class"),
    ];
    for (name, file, label) in datasets {
        let path = args.data_dir.join(file);
        if !path.exists() {
            println!("{name}: {} not found, skipping (see scripts/fetch_data.sh)", path.display());
            continue;
        }
        let opts = LoadOptions {
            label_column: Some(ColumnSelector::Name(label.to_string())),
            ..Default::default()
        };
        let data = load_csv(&path, &opts)?;
        let rows = reproduce_grid(name, &data, &spec)?;
        let out_path = args.out_dir.join(format!("reproduce_{name}.csv"));
        io::write_text(&out_path, &metrics_to_csv(&rows))?;
        println!("{name}: {} grid rows -> {}", rows.len(), out_path.display());
        print_summary(name, &rows, &spec);
    }
    Ok(())
}

fn print_summary(name: &str, rows: &[MetricsRow], spec: &GridSpec) {
    println!("  best rows by Rand index:");
    for f_c in spec.f_c_min..=spec.f_c_max {
        let hac = best_row(rows, |r| r.f_c == f_c && r.algorithm == "hac");
        let bhc = best_row(rows, |r| r.f_c == f_c && r.algorithm.starts_with("bhc"));
        if let (Some(h), Some(b)) = (hac, bhc) {
            println!(
                "    fc={f_c}: hac {} seed {} RI {:.4} | bhc {}/{} gamma {} seed {} RI {:.4}",
                h.linkage,
                h.seed,
                h.metrics.rand_index,
                b.algorithm,
                b.linkage,
                b.gamma,
                b.seed,
                b.metrics.rand_index,
            );
        }
    }
    if name == "iris" {
        // reference comparison for the two-cluster split
        let mut best: Option<(f64, &MetricsRow)> = None;
        for row in rows.iter().filter(|r| r.f_c == 2 && r.algorithm == "hac") {
            let dev = max_abs_deviation(&row.metrics, &IRIS_FC2_REFERENCE);
            if best.as_ref().is_none_or(|(b, _)| dev < *b) {
                best = Some((dev, row));
            }
        }
        if let Some((dev, row)) = best {
            println!(
                "  iris fc=2 reference ({:.4}/{:.4}/{:.4}): closest hac config {} seed {} deviates by {:.4}",
                IRIS_FC2_REFERENCE.precision,
                IRIS_FC2_REFERENCE.recall,
                IRIS_FC2_REFERENCE.rand_index,
                row.linkage,
                row.seed,
                dev
            );
        }
    }
}
