use std::process::{Command, Output};

fn kerovlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerovlab"))
        .args(args)
        .env("KEROVLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_identities_passes_every_suite() {
    let o = kerovlab(&["verify-identities", "--max-size", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6, "{out}");
    for suite in ["change-of-basis", "sigma-products", "hypergeometric-1", "hypergeometric-2", "partition-sums", "y-orthogonality"] {
        assert!(lines.iter().any(|l| l.starts_with(&format!("PASS {suite} "))), "{out}");
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"max_size\":10"));
}

#[test]
fn observables_of_figure_diagram() {
    let o = kerovlab(&["observables", "--lambda", "5,4,4,1", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda"], serde_json::json!([5, 4, 4, 1]));
    // p̃_2 = 2|λ| and h̃_2 = R_2 = |λ|.
    assert_eq!(v["p"][2], 28);
    assert_eq!(v["h"][2], 14);
    assert_eq!(v["R"][2], 14);
    assert_eq!(v["h"].as_array().unwrap().len(), 7);
}

#[test]
fn limit_shape_grid_hits_four_over_pi() {
    let o = kerovlab(&["limit-shape", "--c", "0", "--grid", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("s,omega"));
    let row = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .find(|r| r[0] == 0.0)
        .expect("row at s = 0");
    assert!((row[1] - 4.0 / std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn sample_is_reproducible_and_thread_independent() {
    let a = kerovlab(&["sample", "--n", "500", "--c", "0.5", "--count", "6", "--seed", "9"]);
    let b = kerovlab(&["--threads", "1", "sample", "--n", "500", "--c", "0.5", "--count", "6", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        let parts: Vec<u32> = serde_json::from_str(line).unwrap();
        assert_eq!(parts.iter().sum::<u32>(), 500);
    }
}

#[test]
fn pmf_sums_to_one() {
    let o = kerovlab(&["pmf", "--n", "5", "--N", "3"]);
    let total: f64 = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["pmf_f64"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn fluct_prints_both_routes() {
    let o = kerovlab(&["fluct", "--n", "4", "--c", "1", "--k", "2", "--lambda", "2,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["exact"].is_f64() && v["asymptotic"].is_f64());
    let bad = kerovlab(&["fluct", "--n", "5", "--k", "2", "--lambda", "2,1,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn experiment_from_config_file_writes_report_and_csv() {
    let dir = std::env::temp_dir().join(format!("kerovlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"n": 200, "c": 1.0, "samples": 12, "x_order": 3, "seed": 5}"#).unwrap();
    let (report, csv) = (dir.join("r.json"), dir.join("cov.csv"));
    let o = kerovlab(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--cov-csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["config"]["alphabet"], 14);
    assert_eq!(v["config"]["workers"], 2);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("name,S2,X2,X3,Y2,Y3\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(kerovlab(&["observables", "--lambda", "1,2"]).status.code(), Some(2));
    assert_eq!(kerovlab(&["observables", "--lambda", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(kerovlab(&["experiment", "--n", "10", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(kerovlab(&["experiment", "--n", "10", "--x-order", "9"]).status.code(), Some(2));
    assert_eq!(kerovlab(&["limit-process", "--c", "1", "--terms", "1"]).status.code(), Some(2));
}
