use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavestab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wavestab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn wave_writes_profile_csv() {
    let o = bin(&["wave", "--family", "dn", "--k", "0.5", "--n", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,phi");
    assert_eq!(rows.len(), 33);
    let peak: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((peak - 2f64.sqrt()).abs() < 1e-10);
    assert!(String::from_utf8_lossy(&o.stderr).contains("c=1.75"));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(
        bin(&["wave", "--family", "cn", "--k", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["wave", "--family", "cn"]).status.code(), Some(2));
    assert_eq!(
        bin(&["index", "--family", "dn", "--k", "0.5", "--n", "15"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["scan", "--family", "cn", "--from", "0.9", "--to", "0.5", "--steps", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["bogus"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));

    let dir = scratch("config");
    let cfg = dir.join("bad.json");
    std::fs::write(&cfg, r#"{"family": "dn", "k": 0.5, "unknown": 1}"#).unwrap();
    assert_eq!(
        bin(&["index", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn index_report_and_spectrum() {
    let dir = scratch("index");
    let (report, spectrum) = (dir.join("r.json"), dir.join("s.csv"));
    let o = bin(&[
        "index",
        "--family",
        "cn",
        "--k",
        "0.95",
        "--n",
        "64",
        "-o",
        report.to_str().unwrap(),
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--dump-operators",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in [
        "classification",
        "n_L",
        "n0",
        "n_D",
        "lhs",
        "rhs",
        "pass",
        "tolerances",
        "cluster_sizes",
        "config",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["lhs"], 1);
    assert_eq!(json["classification"]["N_r"], 1);
    assert_eq!(json["config"]["k"], 0.95);

    let csv = std::fs::read_to_string(&spectrum).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,residual,krein,class"));
    assert_eq!(lines.count(), 64);

    for name in ["L.csv", "M.csv"] {
        let dump = std::fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(dump.lines().count(), 64);
        assert_eq!(dump.lines().next().unwrap().split(',').count(), 64);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_reports_numerical_errors() {
    let o = bin(&["verify", "--family", "cn", "--k", "0.98", "--n", "32"]);
    assert_eq!(o.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["pass"], false);
    assert!(json["error"].is_string());
}

#[test]
fn scan_csv_rows() {
    let o = bin(&[
        "scan", "--family", "cn", "--n", "64", "--from", "0.5", "--to", "0.98", "--steps", "4",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("parameter,n_L,n_D,F,N_r,N_c,N_i_minus,pass,error")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let f: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(f[0] < 0.0 && f[3] > 0.0);
    assert!(rows.iter().all(|r| r[7] == "true"));
}

#[test]
fn kstar_json() {
    let o = bin(&["kstar", "--n", "128"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let k = json["k_star"].as_f64().unwrap();
    assert!((0.89..0.93).contains(&k), "{k}");
}
