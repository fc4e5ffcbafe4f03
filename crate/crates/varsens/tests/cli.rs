use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn varsens(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varsens")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = varsens(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

fn column(path: &Path, name: &str) -> Vec<(String, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[j].parse().unwrap())
        })
        .collect()
}

// 3 x1² + x2 x3 − 2 x4 with the same operation order as the built-in
const POLYNOMIAL_AWK: &str = "awk -F, 'NR > 1 { printf \"%.17g\\n\", 3 * $1 * $1 + $2 * $3 - 2 * $4 }'";

#[test]
fn design_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["design", "--model", "polynomial", "--n", "5000", "--out", "p"]);
    assert_eq!(data_rows(&d.join("p/design.csv")), 30_000);
    ok(d, &["design", "--model", "ishigami", "--n", "5000", "--out", "i"]);
    assert_eq!(data_rows(&d.join("i/design.csv")), 25_000);
    let report =
        ok(d, &["design", "--model", "additive_uniform", "--dim", "1", "--n", "1", "--sampler", "mc", "--out", "a"]);
    assert_eq!(data_rows(&d.join("a/design.csv")), 3);
    assert!(report.contains("Total number of model runs: 3"));
    assert!(d.join("a/manifest.json").exists());
}

#[test]
fn file_round_trip_matches_in_process_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["sobol", "--model", "polynomial", "--n", "1000", "--R", "200", "--out", "direct"]);
    ok(d, &["design", "--model", "polynomial", "--n", "1000", "--out", "design"]);
    ok(d, &["evaluate", "--design", "design/design.csv", "--model", "polynomial", "--out", "eval"]);
    ok(
        d,
        &[
            "sobol",
            "--model",
            "polynomial",
            "--n",
            "1000",
            "--R",
            "200",
            "--responses",
            "eval/responses.csv",
            "--out",
            "files",
        ],
    );
    for f in ["indices.csv", "indices.json", "summary.txt"] {
        assert_eq!(fs::read(d.join("direct").join(f)).unwrap(), fs::read(d.join("files").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn external_adapter_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("spec.json"),
        r#"{"names": ["x1", "x2", "x3", "x4"], "marginals": [
            {"kind": "uniform", "a": 0.0, "b": 1.0}, {"kind": "uniform", "a": 0.0, "b": 1.0},
            {"kind": "uniform", "a": 0.0, "b": 1.0}, {"kind": "uniform", "a": 0.0, "b": 1.0}]}"#,
    )
    .unwrap();
    ok(d, &["sobol", "--model", "polynomial", "--n", "500", "--R", "100", "--out", "builtin"]);
    ok(d, &["sobol", "--spec", "spec.json", "--exec", POLYNOMIAL_AWK, "--n", "500", "--R", "100", "--out", "external"]);
    ok(
        d,
        &[
            "sobol",
            "--spec",
            "spec.json",
            "--exec",
            POLYNOMIAL_AWK,
            "--jobs",
            "4",
            "--n",
            "500",
            "--R",
            "100",
            "--out",
            "parallel",
        ],
    );
    let builtin = fs::read(d.join("builtin/indices.csv")).unwrap();
    assert_eq!(builtin, fs::read(d.join("external/indices.csv")).unwrap());
    assert_eq!(builtin, fs::read(d.join("parallel/indices.csv")).unwrap());
}

#[test]
fn constant_model_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["design", "--model", "polynomial", "--n", "64", "--out", "design"]);
    ok(d, &["evaluate", "--design", "design/design.csv", "--exec", "awk 'NR > 1 { print 4.2 }'", "--out", "eval"]);
    let out =
        varsens(d, &["sobol", "--model", "polynomial", "--n", "64", "--responses", "eval/responses.csv", "--out", "s"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["design", "--model", "polynomial", "--n", "8", "--out", "design"]);
    let failing = varsens(d, &["evaluate", "--design", "design/design.csv", "--exec", "exit 7", "--out", "e"]);
    assert_eq!(failing.status.code(), Some(4));
    let short = varsens(d, &["evaluate", "--design", "design/design.csv", "--exec", "echo 1", "--out", "e"]);
    assert_eq!(short.status.code(), Some(4));
    let missing = varsens(d, &["sobol", "--spec", "nope.json", "--exec", "cat", "--out", "s"]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = varsens(d, &["sobol", "--model", "rosenbrock", "--out", "s"]);
    assert_eq!(unknown.status.code(), Some(2));
    let usage = varsens(d, &["sobol", "--n", "many"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn shapley_of_symmetric_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["shapley", "--model", "linear_gaussian", "--rho", "0.5", "--m", "2000", "--out", "sh"]);
    let phi = column(&d.join("sh/shapley.csv"), "phi");
    let se = column(&d.join("sh/shapley.csv"), "std_error");
    assert_eq!(phi.len(), 2);
    for ((_, p), (_, s)) in phi.iter().zip(&se) {
        assert!((p - 0.5).abs() <= 3.0 * s, "{p} ± {s}");
    }
    assert!((phi[0].1 + phi[1].1 - 1.0).abs() < 1e-12);
}

#[test]
fn shapley_with_external_model_and_gaussian_spec() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("spec.json"),
        r#"{"names": ["a", "b"],
            "marginals": [{"kind": "gaussian", "mu": 0.0, "sigma": 1.0}, {"kind": "gaussian", "mu": 0.0, "sigma": 1.0}],
            "dependence": {"mean": [0.0, 0.0], "cov": [[1.0, 0.5], [0.5, 1.0]]}}"#,
    )
    .unwrap();
    let sum = "awk -F, 'NR > 1 { printf \"%.17g\\n\", $1 + $2 }'";
    ok(d, &["shapley", "--spec", "spec.json", "--exec", sum, "--m", "300", "--n-var", "500", "--out", "ext"]);
    ok(d, &["shapley", "--model", "linear_gaussian", "--m", "300", "--n-var", "500", "--out", "builtin"]);
    let e = column(&d.join("ext/shapley.csv"), "phi");
    let b = column(&d.join("builtin/shapley.csv"), "phi");
    assert_eq!(e.iter().map(|p| p.1).collect::<Vec<_>>(), b.iter().map(|p| p.1).collect::<Vec<_>>());
    assert_eq!(e[0].0, "a");
}

#[test]
fn ishigami_scatter_bins_flat_in_x3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["design", "--model", "ishigami", "--n", "20000", "--sampler", "mc", "--out", "design"]);
    ok(d, &["evaluate", "--design", "design/design.csv", "--model", "ishigami", "--out", "eval"]);
    ok(
        d,
        &[
            "plotdata",
            "scatterbins",
            "--design",
            "design/design.csv",
            "--responses",
            "eval/responses.csv",
            "--out",
            "plot",
        ],
    );
    let bins = column(&d.join("plot/scatterbins.csv"), "mean");
    let x3: Vec<f64> = bins.iter().filter(|(p, _)| p == "x3").map(|b| b.1).collect();
    let x2: Vec<f64> = bins.iter().filter(|(p, _)| p == "x2").map(|b| b.1).collect();
    assert_eq!(x3.len(), 20);
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread(&x3) < 0.5, "x3 bin means spread {}", spread(&x3));
    assert!(spread(&x2) > 5.0);

    let y: Vec<f64> = column(&d.join("eval/responses.csv"), "y").into_iter().map(|p| p.1).collect();
    let m = y.iter().sum::<f64>() / y.len() as f64;
    let sd = (y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (y.len() - 1) as f64).sqrt();
    assert!(sd > 3.0);

    ok(d, &["plotdata", "histogram", "--responses", "eval/responses.csv", "--out", "plot"]);
    let counts = column(&d.join("plot/histogram.csv"), "count");
    assert_eq!(counts.len(), 30);
    assert_eq!(counts.iter().map(|c| c.1 as usize).sum::<usize>(), y.len());
}

#[test]
fn stochsa_reports_seed_variable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let table = ok(
        d,
        &["stochsa", "--model", "sine_hetero", "--sites", "40", "--replicates", "10", "--R", "50", "--out", "st"],
    );
    assert!(table.contains("X_eps"));
    let rows = column(&d.join("st/indices.csv"), "original");
    let eps = rows.iter().find(|r| r.0 == "X_eps").unwrap().1;
    // exact value E[τ] / (V(sin X) + E[τ]) is about 0.187
    assert!((eps - 0.187).abs() < 0.05, "{eps}");
    let small = varsens(d, &["stochsa", "--model", "sine_hetero", "--n", "500", "--out", "x"]);
    assert_eq!(small.status.code(), Some(2));
}

#[test]
fn replay_detects_changed_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["plotdata", "discrepancy-compare", "--n", "32", "--seeds", "3", "--out", "disc"]);
    let report = ok(d, &["replay", "disc/manifest.json", "--out", "again"]);
    assert!(report.contains("identical discrepancy.csv"));
    assert_eq!(fs::read(d.join("disc/discrepancy.csv")).unwrap(), fs::read(d.join("again/discrepancy.csv")).unwrap());

    let path = d.join("disc/manifest.json");
    let text = fs::read_to_string(&path).unwrap();
    let digest_start = text.find("\"sha256\": \"").unwrap() + 11;
    let mut tampered = text.clone();
    tampered.replace_range(digest_start..digest_start + 4, "0000");
    fs::write(&path, tampered).unwrap();
    let out = varsens(d, &["replay", "disc/manifest.json", "--out", "third"]);
    assert_eq!(out.status.code(), Some(1));
}
