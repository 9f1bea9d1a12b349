use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ddqc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddqc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_stdout(dir: &Path, args: &[&str]) -> String {
    let out = ddqc(dir, args);
    assert!(
        out.status.success(),
        "ddqc {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn write_fixtures(dir: &Path) {
    fs::write(dir.join("k3.edges"), "0 1\n0 2\n1 2\n").unwrap();
    fs::write(dir.join("k4.edges"), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    fs::write(dir.join("s4.edges"), "0 1\n0 2\n0 3\n0 4\n").unwrap();
}

#[test]
fn quantify_triangle_golden_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let json = ok_stdout(dir.path(), &["quantify", "k3.edges", "--beta", "0"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["idp"], serde_json::json!([0.0, 0.0, 0.0, 1.0]));
    assert_eq!(doc["alpha"], 1.0);
    assert_eq!(doc["beta"], 0);
    assert_eq!(doc["stats"]["n_nodes"], 3);
    assert_eq!(doc["stats"]["mean"], 2.0);
    assert_eq!(doc["stats"]["std"], 0.0);
    assert_eq!(doc["stats"]["min_degree"], 2);
    assert_eq!(doc["stats"]["max_degree"], 2);

    let csv = ok_stdout(dir.path(), &["quantify", "k3.edges", "--beta", "0", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,beta,n_nodes,mean,std,min_degree,max_degree,idp_0,idp_1,idp_2,idp_3"
    );
    assert_eq!(lines.next().unwrap(), "1,0,3,2,0,2,2,0,0,0,1");
}

#[test]
fn quantify_missing_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ddqc(dir.path(), &["quantify", "nope.edges"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.edges"));
}

#[test]
fn quantify_beta_one_pairs_sum_to_beta_zero() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let idp = |beta: &str| -> Vec<f64> {
        let json = ok_stdout(dir.path(), &["quantify", "s4.edges", "--beta", beta]);
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        doc["idp"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect()
    };
    let fine = idp("1");
    let coarse = idp("0");
    assert_eq!(fine.len(), 8);
    assert_eq!(coarse.len(), 4);
    for (pair, &c) in fine.chunks_exact(2).zip(&coarse) {
        assert!((pair[0] + pair[1] - c).abs() < 1e-12);
    }
}

#[test]
fn compare_goldens() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let run = |a: &str, b: &str, method: &str, extra: &[&str]| -> String {
        let mut args = vec!["compare", a, b, "--method", method];
        args.extend_from_slice(extra);
        ok_stdout(dir.path(), &args)
    };
    assert_eq!(run("k3.edges", "s4.edges", "ddqc", &["--beta", "0", "--gamma", "0.8"]), "1.6\n");
    assert_eq!(run("k3.edges", "k4.edges", "ks", &[]), "1\n");
    assert_eq!(run("k3.edges", "k4.edges", "ddqc", &[]), "0\n");
}

#[test]
fn compare_file_with_itself_is_zero_for_every_method() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    // The star has two distinct degrees, so even the power-law fit works.
    for method in ["ddqc", "ks", "powerlaw", "percentiles"] {
        let out = ok_stdout(dir.path(), &["compare", "s4.edges", "s4.edges", "--method", method]);
        assert_eq!(out, "0\n", "method {method}");
    }
    let json = ok_stdout(dir.path(), &["compare", "s4.edges", "s4.edges", "--method", "all"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    for method in ["ddqc", "ks", "powerlaw", "percentiles"] {
        assert_eq!(doc[method], 0.0, "method {method}");
    }
}

#[test]
fn compare_powerlaw_on_regular_graphs_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let out = ddqc(dir.path(), &["compare", "k3.edges", "k4.edges", "--method", "powerlaw"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn generate_regular_graph_quantifies_to_last_interval() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(
        dir.path(),
        &["generate", "--model", "rg", "--n", "6", "--k", "2", "--seed", "1", "--out", "g.edges"],
    );
    let json = ok_stdout(dir.path(), &["quantify", "g.edges"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let idp: Vec<f64> =
        doc["idp"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(idp.len(), 32);
    let (last, rest) = idp.split_last().unwrap();
    assert_eq!(*last, 1.0);
    assert!(rest.iter().all(|&v| v == 0.0));
}

#[test]
fn generate_requires_model_parameters_unless_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let out = ddqc(dir.path(), &["generate", "--model", "ba", "--n", "30"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--k"));

    let sampled = ok_stdout(
        dir.path(),
        &["generate", "--model", "ba", "--sample", "--n-range", "20,30", "--seed", "3"],
    );
    assert!(sampled.starts_with("# nodes: "));

    let overridden = ok_stdout(
        dir.path(),
        &["generate", "--model", "er", "--sample", "--n-range", "50,60", "--n", "55", "--seed", "3"],
    );
    assert!(overridden.starts_with("# nodes: 55\n"));
}

#[test]
fn generate_dataset_writes_manifest_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str| -> String {
        ok_stdout(
            dir.path(),
            &["generate", "--dataset", "--n-range", "50,100", "--seed", "11", "--out", out],
        )
    };
    let manifest_path = run("c1");
    assert_eq!(manifest_path.trim_end(), "c1/manifest.csv");
    let manifest = fs::read_to_string(dir.path().join("c1/manifest.csv")).unwrap();
    let rows: Vec<&str> = manifest.lines().skip(1).collect();
    assert_eq!(rows.len(), 40, "8 models x default 5 per model");
    for model in ["ba", "cm", "er", "ff", "kg", "rp", "ws", "rg"] {
        let count = rows.iter().filter(|r| r.split(',').nth(1) == Some(model)).count();
        assert_eq!(count, 5, "label {model}");
    }
    let files: Vec<String> = rows.iter().map(|r| r.split(',').next().unwrap().to_string()).collect();
    for f in &files {
        assert!(dir.path().join("c1").join(f).exists(), "{f} written");
    }

    run("c2");
    assert_eq!(manifest, fs::read_to_string(dir.path().join("c2/manifest.csv")).unwrap());
    for f in &files {
        assert_eq!(
            fs::read(dir.path().join("c1").join(f)).unwrap(),
            fs::read(dir.path().join("c2").join(f)).unwrap(),
            "{f} identical across reruns"
        );
    }
}

/// Two graphs with identical degree distributions plus one distant outlier:
/// leave-one-out 1NN classifies the pair correctly and the outlier wrongly.
fn write_ring_star_corpus(dir: &Path) {
    let ring = "0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n0 7\n";
    let ring_shuffled = "4 5\n0 1\n6 7\n2 3\n0 7\n1 2\n5 6\n3 4\n";
    let star = "0 1\n0 2\n0 3\n0 4\n0 5\n0 6\n0 7\n0 8\n";
    fs::write(dir.join("c8a.edges"), ring).unwrap();
    fs::write(dir.join("c8b.edges"), ring_shuffled).unwrap();
    fs::write(dir.join("s8.edges"), star).unwrap();
    fs::write(
        dir.join("manifest.csv"),
        "path,label\nc8a.edges,ring\nc8b.edges,ring\ns8.edges,star\n",
    )
    .unwrap();
}

#[test]
fn evaluate_knn_matches_hand_run() {
    let dir = tempfile::tempdir().unwrap();
    write_ring_star_corpus(dir.path());
    let json = ok_stdout(
        dir.path(),
        &["evaluate", "manifest.csv", "--experiment", "knn", "--method", "ddqc", "--k", "1"],
    );
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let acc = doc["methods"]["ddqc"]["knn_accuracy"]["1"].as_f64().unwrap();
    assert!((acc - 2.0 / 3.0).abs() < 1e-12);

    let csv = ok_stdout(
        dir.path(),
        &[
            "evaluate", "manifest.csv", "--experiment", "knn", "--method", "ks", "--k", "1",
            "--format", "csv",
        ],
    );
    assert_eq!(csv.lines().next().unwrap(), "experiment,method,param,value");
    assert_eq!(csv.lines().nth(1).unwrap(), format!("knn,ks,K=1,{}", 2.0 / 3.0));
}

#[test]
fn evaluate_knn_with_powerlaw_aborts_on_regular_instances() {
    let dir = tempfile::tempdir().unwrap();
    write_ring_star_corpus(dir.path());
    let out = ddqc(
        dir.path(),
        &["evaluate", "manifest.csv", "--experiment", "knn", "--method", "powerlaw", "--k", "1"],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("power-law"));
}

#[test]
fn evaluate_interintra_reports_both_statistics() {
    let dir = tempfile::tempdir().unwrap();
    write_ring_star_corpus(dir.path());
    let json = ok_stdout(
        dir.path(),
        &["evaluate", "manifest.csv", "--experiment", "interintra", "--method", "ddqc"],
    );
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let intra = doc["methods"]["ddqc"]["intra"].as_f64().unwrap();
    let inter = doc["methods"]["ddqc"]["inter"].as_f64().unwrap();
    // The ring pair is the only intra pair and the closest pair overall.
    assert!(intra < 0.0 && inter > 0.0 && intra < inter);
}

fn write_temporal_corpus(dir: &Path) {
    let gen = |args: &[&str]| {
        ok_stdout(dir, args);
    };
    gen(&["generate", "--model", "er", "--n", "60", "--density", "0.1", "--seed", "1", "--out", "g1.edges"]);
    gen(&["generate", "--model", "er", "--n", "60", "--density", "0.1", "--seed", "2", "--out", "g2.edges"]);
    gen(&["generate", "--model", "ba", "--n", "60", "--k", "2", "--seed", "3", "--out", "g3.edges"]);
    gen(&["generate", "--model", "ba", "--n", "60", "--k", "2", "--seed", "4", "--out", "g4.edges"]);
    gen(&["generate", "--model", "ws", "--n", "60", "--k", "4", "--seed", "5", "--out", "g5.edges"]);
    fs::write(
        dir.join("manifest.csv"),
        "path,label,timestamp\n\
         g1.edges,er,\n\
         g2.edges,er,\n\
         g3.edges,snap,10\n\
         g4.edges,snap,20\n\
         g5.edges,ws,\n",
    )
    .unwrap();
}

#[test]
fn evaluate_temporal_series_covers_timestamped_rows_in_order() {
    let dir = tempfile::tempdir().unwrap();
    write_temporal_corpus(dir.path());
    let json = ok_stdout(
        dir.path(),
        &["evaluate", "manifest.csv", "--experiment", "temporal", "--method", "ddqc"],
    );
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let series = doc["temporal"].as_array().unwrap();
    assert_eq!(series.len(), 2);
    assert_eq!(series[0]["id"], "g3.edges");
    assert_eq!(series[1]["id"], "g4.edges");
    // The two snapshots share a model and parameters, so they sit far below
    // the corpus-wide mean pairwise distance.
    for point in series {
        assert!(point["mean_neighbor_distance"].as_f64().unwrap() < 0.0);
    }

    let all = ddqc(dir.path(), &["evaluate", "manifest.csv", "--experiment", "temporal", "--method", "all"]);
    assert_eq!(code(&all), 1);
}

#[test]
fn evaluate_sweep_grid_shape() {
    let dir = tempfile::tempdir().unwrap();
    write_ring_star_corpus(dir.path());
    let args = [
        "evaluate", "manifest.csv", "--experiment", "sweep", "--alphas", "0.5,1", "--gammas",
        "0.4,0.8",
    ];
    let json = ok_stdout(dir.path(), &args);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let cells = doc["sweep"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    let grid: Vec<(f64, f64)> = cells
        .iter()
        .map(|c| (c["alpha"].as_f64().unwrap(), c["gamma"].as_f64().unwrap()))
        .collect();
    assert_eq!(grid, vec![(0.5, 0.4), (0.5, 0.8), (1.0, 0.4), (1.0, 0.8)]);

    let mut csv_args = args.to_vec();
    csv_args.extend_from_slice(&["--format", "csv"]);
    let csv = ok_stdout(dir.path(), &csv_args);
    assert_eq!(csv.lines().count(), 1 + 8, "header plus intra+inter per cell");
}

#[test]
fn evaluate_stability_reports_each_size() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(
        dir.path(),
        &[
            "generate", "--dataset", "--models", "er,ba", "--per-model", "5", "--n-range",
            "50,100", "--seed", "2", "--out", "corpus",
        ],
    );
    let json = ok_stdout(
        dir.path(),
        &[
            "evaluate", "corpus/manifest.csv", "--experiment", "stability", "--sizes", "6,8",
            "--iterations", "10", "--method", "ddqc",
        ],
    );
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let points = doc["stability"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert_eq!(points[0]["size"], 6);
    assert_eq!(points[1]["size"], 8);
    for p in points {
        assert!(p["intra"].as_f64().unwrap().is_finite());
        assert!(p["inter"].as_f64().unwrap().is_finite());
    }

    let missing = ddqc(
        dir.path(),
        &["evaluate", "corpus/manifest.csv", "--experiment", "stability", "--method", "ddqc"],
    );
    assert_eq!(code(&missing), 1);
}

#[test]
fn evaluate_report_files_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(
        dir.path(),
        &[
            "generate", "--dataset", "--models", "er,ba,ws", "--per-model", "4", "--n-range",
            "50,100", "--seed", "5", "--out", "corpus",
        ],
    );
    let run = |base: &str| {
        ok_stdout(
            dir.path(),
            &[
                "evaluate", "corpus/manifest.csv", "--experiment", "knn", "--method", "ddqc",
                "--k", "3", "--subset-size", "8", "--iterations", "5", "--seed", "9", "--out",
                base,
            ],
        );
    };
    run("r1");
    run("r2");
    assert_eq!(
        fs::read(dir.path().join("r1.json")).unwrap(),
        fs::read(dir.path().join("r2.json")).unwrap()
    );
    assert_eq!(
        fs::read(dir.path().join("r1.csv")).unwrap(),
        fs::read(dir.path().join("r2.csv")).unwrap()
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("r1.json")).unwrap()).unwrap();
    let acc = json["methods"]["ddqc"]["knn_accuracy"]["3"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));
}

#[test]
fn evaluate_single_item_corpus_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    fs::write(dir.path().join("one.csv"), "path,label\nk3.edges,k\n").unwrap();
    let out = ddqc(dir.path(), &["evaluate", "one.csv", "--experiment", "knn", "--k", "1"]);
    assert_eq!(code(&out), 1);
}
