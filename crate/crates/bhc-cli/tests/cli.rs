//! End-to-end checks of the `bhc` binary: determinism of every emitted file,
//! partition coverage, format options and error reporting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bhc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bhc"))
}

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bhc_cli_{}_{}", std::process::id(), name));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn cluster_diamond(out_dir: &Path, extra: &[&str]) -> Output {
    let mut cmd = bhc();
    cmd.args([
        "cluster",
        "--input",
        repo_path("data/diamond.csv").to_str().unwrap(),
        "--label-column",
        "group",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    cmd.args(extra);
    run_ok(&mut cmd)
}

#[test]
fn identical_flags_produce_byte_identical_outputs() {
    let args = [
        "--algorithm",
        "bhc-b",
        "--k-init",
        "5",
        "--fc",
        "3",
        "--seed",
        "7",
        "--format",
        "both",
    ];
    let dir1 = temp_dir("det1");
    let dir2 = temp_dir("det2");
    cluster_diamond(&dir1, &args);
    cluster_diamond(&dir2, &args);
    for file in ["dendrogram.json", "dendrogram.nwk", "partition.csv", "metrics.csv"] {
        let a = fs::read(dir1.join(file)).unwrap_or_else(|_| panic!("{file} written"));
        let b = fs::read(dir2.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn partition_covers_every_object_exactly_once() {
    let dir = temp_dir("coverage");
    cluster_diamond(&dir, &["--fc", "4"]);
    let text = fs::read_to_string(dir.join("partition.csv")).unwrap();
    let mut objects: Vec<usize> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    objects.sort_unstable();
    assert_eq!(objects, (0..12).collect::<Vec<_>>());
}

#[test]
fn newick_output_for_two_points() {
    let dir = temp_dir("newick");
    let input = dir.join("two.csv");
    fs::write(&input, "x\n0\n4\n").unwrap();
    run_ok(bhc().args([
        "cluster",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "newick",
        "--out",
        dir.to_str().unwrap(),
    ]));
    let nwk = fs::read_to_string(dir.join("dendrogram.nwk")).unwrap();
    assert_eq!(nwk.trim(), "(0:2,1:2);");
}

#[test]
fn plot_is_deterministic_and_labeled() {
    let dir = temp_dir("plot");
    cluster_diamond(&dir, &["--algorithm", "bhc-a"]);
    let dendro = dir.join("dendrogram.json");
    let svg1 = dir.join("a.svg");
    let svg2 = dir.join("b.svg");
    for out in [&svg1, &svg2] {
        run_ok(bhc().args([
            "plot",
            "--dendrogram",
            dendro.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]));
    }
    let a = fs::read_to_string(&svg1).unwrap();
    assert_eq!(a, fs::read_to_string(&svg2).unwrap());
    assert!(a.contains("betp_monotone"));
    assert!(a.starts_with("<svg"));
}

#[test]
fn eval_agrees_with_cluster_metrics() {
    let dir = temp_dir("eval");
    let out = cluster_diamond(&dir, &["--algorithm", "hac", "--fc", "3"]);
    let printed = String::from_utf8_lossy(&out.stdout);
    let eval_out = run_ok(bhc().args([
        "eval",
        "--pred",
        dir.join("partition.csv").to_str().unwrap(),
        "--input",
        repo_path("data/diamond.csv").to_str().unwrap(),
        "--label-column",
        "group",
    ]));
    let eval_printed = String::from_utf8_lossy(&eval_out.stdout);
    let metrics_line = printed.lines().find(|l| l.starts_with("precision=")).unwrap();
    assert_eq!(eval_printed.trim(), metrics_line.trim());
}

#[test]
fn missing_input_fails_with_diagnostic() {
    let out = bhc()
        .args(["cluster", "--input", "/nonexistent/nope.csv"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.csv"), "stderr was: {stderr}");
}

#[test]
fn oversized_fc_fails() {
    let dir = temp_dir("badfc");
    let out = bhc()
        .args([
            "cluster",
            "--input",
            repo_path("data/diamond.csv").to_str().unwrap(),
            "--label-column",
            "group",
            "--fc",
            "40",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn bad_gamma_is_rejected_at_parse_time() {
    let out = bhc()
        .args([
            "cluster",
            "--input",
            repo_path("data/diamond.csv").to_str().unwrap(),
            "--gamma",
            "-2",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
