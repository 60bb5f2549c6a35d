use std::path::Path;

use gyrolab::cli::run;
use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn gyrolab(args: &[&str], out: &Path) -> i32 {
    let mut argv = vec!["gyrolab".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    run(argv)
}

fn read_json(dir: &TempDir, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn axioms_on_a_group_table() {
    let dir = TempDir::new().unwrap();
    let spec = format!("group:{}", fixture("z4.json"));
    assert_eq!(gyrolab(&["axioms", "--instance", &spec], dir.path()), 0);
    assert_eq!(read_json(&dir, "axioms.json")["passed"], true);
    let manifest = read_json(&dir, "manifest.json");
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["command"], "axioms");
}

#[test]
fn axioms_on_the_disk_sample_budget() {
    let dir = TempDir::new().unwrap();
    let code = gyrolab(
        &["axioms", "--instance", "mobius", "--samples", "2000"],
        dir.path(),
    );
    assert_eq!(code, 0);
    let reports = read_json(&dir, "axioms.json")["reports"].clone();
    assert!(reports.as_array().unwrap().len() >= 5);
}

#[test]
fn malformed_table_is_a_format_error() {
    let dir = TempDir::new().unwrap();
    let spec = format!("table:{}", fixture("bad.json"));
    assert_eq!(gyrolab(&["axioms", "--instance", &spec], dir.path()), 3);
    let manifest = read_json(&dir, "manifest.json");
    assert_eq!(manifest["exit_code"], 3);
    assert!(manifest["error"].is_string());
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        gyrolab(&["axioms", "--instance", "hyperbolic"], dir.path()),
        2
    );
    assert_eq!(gyrolab(&["words", "--eval", "((0 ⊕ 1"], dir.path()), 2);
    assert_eq!(
        gyrolab(
            &["suitable", "--instance", "mobius", "--method", "finite"],
            dir.path()
        ),
        2
    );
    assert_eq!(
        gyrolab(
            &["suitable", "--instance", "integers", "--method", "magic"],
            dir.path()
        ),
        2
    );
}

#[test]
fn words_listing_and_evaluation() {
    let dir = TempDir::new().unwrap();
    assert_eq!(gyrolab(&["words", "--n", "4", "--list"], dir.path()), 0);
    let words = read_json(&dir, "words.json");
    assert_eq!(words["tree_count"], 5);
    assert_eq!(words["trees"].as_array().unwrap().len(), 5);

    let code = gyrolab(
        &[
            "words",
            "--eval",
            "(0 ⊕ 1) ⊕ 2",
            "--instance",
            "mobius",
            "--leaves",
            "0.5,0.5i,-0.5",
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    let eval = read_json(&dir, "words.json")["evaluation"].clone();
    assert_eq!(eval["r_set_size"], 2);
    assert!((eval["gap"].as_f64().unwrap() - 0.20180).abs() < 1e-4);
}

#[test]
fn suitable_on_tables() {
    let dir = TempDir::new().unwrap();
    let z4 = format!("group:{}", fixture("z4.json"));
    let code = gyrolab(
        &["suitable", "--instance", &z4, "--method", "finite"],
        dir.path(),
    );
    assert_eq!(code, 0);
    let result = read_json(&dir, "suitable.json");
    assert_eq!(result["points"], serde_json::json!([1]));
    assert_eq!(result["verified"], true);
    assert!(dir.path().join("points.csv").exists());

    let code = gyrolab(
        &[
            "suitable",
            "--instance",
            &z4,
            "--method",
            "extend",
            "--subgroup",
            "0,2",
            "--subgroup-generators",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(
        read_json(&dir, "suitable.json")["points"],
        serde_json::json!([2, 1])
    );
}

#[test]
fn nonprecompact_on_the_disk_points_elsewhere() {
    let dir = TempDir::new().unwrap();
    let code = gyrolab(
        &[
            "suitable",
            "--instance",
            "mobius",
            "--method",
            "nonprecompact",
            "--cloud",
            "500",
        ],
        dir.path(),
    );
    assert_eq!(code, 1);
    let error = read_json(&dir, "manifest.json")["error"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(error.contains("precompact construction"), "{error}");
}

#[test]
fn integers_nonprecompact_passes() {
    let dir = TempDir::new().unwrap();
    let code = gyrolab(
        &[
            "suitable",
            "--instance",
            "integers",
            "--method",
            "nonprecompact",
            "--budget",
            "40",
        ],
        dir.path(),
    );
    assert_eq!(code, 0);
    assert_eq!(read_json(&dir, "suitable.json")["method"], "nonprecompact");
}

#[test]
fn cover_sizes() {
    let dir = TempDir::new().unwrap();
    let z4 = format!("group:{}", fixture("z4.json"));
    assert_eq!(
        gyrolab(&["cover", "--instance", &z4, "--radius", "0"], dir.path()),
        0
    );
    assert_eq!(
        read_json(&dir, "cover.json")["F"].as_array().unwrap().len(),
        4
    );

    assert_eq!(
        gyrolab(
            &["cover", "--instance", "mobius", "--radius", "2"],
            dir.path()
        ),
        0
    );
    let f = read_json(&dir, "cover.json")["F"].clone();
    assert_eq!(f.as_array().unwrap().len(), 1);
}

#[test]
fn suitable_runs_are_reproducible() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = [
        "suitable",
        "--instance",
        "mobius",
        "--method",
        "precompact",
        "--radii",
        "0.4,0.2,0.1",
        "--word-cap",
        "6",
        "--cloud",
        "300",
        "--seed",
        "3",
    ];
    assert_eq!(gyrolab(&args, a.path()), 0);
    assert_eq!(gyrolab(&args, b.path()), 0);
    let read = |d: &TempDir| std::fs::read(d.path().join("suitable.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}
