//! Exit codes, config handling and output files of the binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite-mixnorm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "hecke-bochner", "--n", "2", "--m-max", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&dir.path().join("report.json"));
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["hecke-bochner.constant.n2", "hecke-bochner.end-to-end.n2"]);
    let c = &r["checks"][0];
    assert!((c["bound_or_reference"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    for key in ["id", "paper_ref", "params", "observed", "bound_or_reference", "tolerance", "pass"] {
        assert!(c.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["config_echo"]["config"]["m_max"], 6);
    assert!(r["config_echo"]["config"].get("out").is_none());
}

#[test]
fn exp_coefficients_in_four_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--suite", "exp-coefficients", "--n", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // an impossible tolerance makes the checks fail
    assert_eq!(
        run(&["verify", "--suite", "mehler", "--tol", "1e-30"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(run(&["verify", "--suite", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "mehler", "--radial-nodes", "3"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--suite", "cz", "--n", "4"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["riesz-scan", "--p", "0.5"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["gfun", "--k", "0"], dir.path()).status.code(), Some(2));
}

#[test]
fn config_file_overrides_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "seed = 9\n").unwrap();
    let o = run(
        &["verify", "--suite", "mehler", "--seed", "3", "--config", good.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&dir.path().join("report.json"))["config_echo"]["config"]["seed"], 9);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 9\nbogus = 1\n").unwrap();
    let o = run(&["verify", "--suite", "mehler", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn riesz_scan_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["riesz-scan", "--n", "2", "--delta", "1,0", "--p", "2,4", "--radius", "4,8,16"];
    let o = run(&args, dir.path());
    assert_eq!(o.status.code(), Some(0));
    let path = dir.path().join("riesz_scan.csv");
    let first = std::fs::read(&path).unwrap();
    let mut rd = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        rd.headers().unwrap().iter().collect::<Vec<_>>(),
        ["n", "delta", "p", "R", "norm_lower_bound", "trial_id_of_max"]
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2 * 2 * 3 + 4);
    for r in rows.iter().filter(|r| &r[1] == "0" && &r[2] == "2" && !r[4].is_empty()) {
        assert!(r[4].parse::<f64>().unwrap() <= 1.0 + 1e-12);
    }
    let window: Vec<(&str, &str)> = rows
        .iter()
        .filter(|r| &r[1] == "0" && r[4].is_empty())
        .map(|r| (&r[2], &r[5]))
        .collect();
    assert_eq!(
        window,
        [("1.3333333333333333", "conjecture_window_lower"), ("4", "conjecture_window_upper")]
    );

    run(&args, dir.path());
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn multiplier_files() {
    let dir = tempfile::tempdir().unwrap();
    let ip = dir.path().join("ip.toml");
    std::fs::write(&ip, "n = 2\nfamily = \"imaginary_power\"\ntau = 1.0\n").unwrap();
    let o = run(
        &[
            "multiplier",
            "--spec",
            ip.to_str().unwrap(),
            "--p",
            "2",
            "--require-condition",
            "--probe-levels",
            "12",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&dir.path().join("multiplier.json"));
    assert_eq!(j["condition"]["pass"], true);
    assert!((j["probes"][0]["max_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!(dir.path().join("multiplier_probes.csv").exists());

    let sg = dir.path().join("sg.json");
    std::fs::write(&sg, r#"{"n": 2, "family": "semigroup", "t": 1.0}"#).unwrap();
    run(
        &["multiplier", "--spec", sg.to_str().unwrap(), "--p", "2", "--probe-levels", "12"],
        dir.path(),
    );
    let j = read_json(&dir.path().join("multiplier.json"));
    assert!(j["probes"][0]["max_ratio"].as_f64().unwrap() <= (-2.0f64).exp() + 1e-12);

    // bounded but with no decay of the first difference
    let tab = dir.path().join("tab.toml");
    std::fs::write(&tab, "n = 2\nfamily = \"tabulated\"\nvalues = [1.0, -0.3, 0.8, 0.1, -0.9, 0.5, -0.2, 0.7, -0.6, 0.4, -1.0, 0.9, -0.4, 0.2, -0.8, 0.6, 0.0, -0.5, 0.3, -0.7]\n").unwrap();
    let o = run(
        &[
            "multiplier",
            "--spec",
            tab.to_str().unwrap(),
            "--k-scan",
            "16",
            "--require-condition",
            "--probe-levels",
            "12",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["multiplier", "--spec", ip.to_str().unwrap(), "--n", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gfun_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gfun", "--k", "1", "--p", "3", "--n", "2", "--functions", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let j = read_json(&dir.path().join("gfun.json"));
    let r = &j["results"][0];
    assert!((r["l2_ratio_min"].as_f64().unwrap() - 0.5).abs() < 1e-7);
    assert!((r["l2_ratio_max"].as_f64().unwrap() - 0.5).abs() < 1e-7);
    assert!(r["brackets"][0][1].as_f64().unwrap() > 0.0);
}
