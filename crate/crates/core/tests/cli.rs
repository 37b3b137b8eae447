use std::process::{Command, Output};

fn rmdirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmdirac")).args(args).output().expect("binary runs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

const DEEP_WELL: [&str; 4] = ["--v1", "1", "--v2=-4", "--alpha=0.5"];

#[test]
fn spectrum_sample_well_matches_oracle() {
    let out = rmdirac(&["spectrum", "--branch", "spin", "--kappa=-1..-3", "--n", "0..2", "--validate"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let e = header.iter().position(|h| h == "energy").unwrap();
    let o = header.iter().position(|h| h == "oracle_energy").unwrap();
    assert!(!rows.is_empty(), "no analytic levels reported for the sample well");
    for row in rows {
        let (e, o): (f64, f64) = (row[e].parse().unwrap(), row[o].parse().unwrap());
        assert!((e - o).abs() <= 1e-6 * o.abs(), "{e} vs oracle {o}");
    }
}

#[test]
fn spectrum_csv_and_json_carry_identical_values() {
    let mut args = vec!["spectrum", "--kappa=-1,-2,1", "--n", "0..3"];
    args.extend(DEEP_WELL);
    let csv = String::from_utf8(rmdirac(&args).stdout).unwrap();
    args.extend(["--format", "json"]);
    let json: Vec<serde_json::Value> = serde_json::from_slice(&rmdirac(&args).stdout).unwrap();
    let (header, rows) = csv_rows(&csv);
    assert!(!rows.is_empty());
    assert_eq!(rows.len(), json.len());
    for (row, obj) in rows.iter().zip(&json) {
        for (k, cell) in header.iter().zip(row) {
            match &obj[k] {
                serde_json::Value::Number(v) => assert_eq!(cell.parse::<f64>().unwrap(), v.as_f64().unwrap(), "{k}"),
                serde_json::Value::String(s) => assert_eq!(cell, s),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn spectrum_is_ordered_and_deterministic() {
    let mut args = vec!["spectrum", "--kappa=-1,-3,-2,2,1", "--n", "2,0,1", "--grid-points", "3000"];
    args.extend(DEEP_WELL);
    let a = rmdirac(&args).stdout;
    assert_eq!(a, rmdirac(&args).stdout);
    let (_, rows) = csv_rows(&String::from_utf8(a).unwrap());
    let keys: Vec<(i32, u32)> = rows.iter().map(|r| (r[1].parse().unwrap(), r[0].parse().unwrap())).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]), "{keys:?}");
    for r in &rows {
        let mantissa = r[4].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "17 significant digits in {}", r[4]);
    }
}

#[test]
fn wavefunction_output_is_normalized_on_its_grid() {
    let mut args = vec!["wavefunction", "--kappa=-1", "--n", "1"];
    args.extend(DEEP_WELL);
    let out = rmdirac(&args);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["r", "F", "G"]);
    let r: Vec<f64> = rows.iter().map(|x| x[0].parse().unwrap()).collect();
    let f: Vec<f64> = rows.iter().map(|x| x[1].parse().unwrap()).collect();
    assert!(r[0] > 0.0 && r.windows(2).all(|w| w[1] > w[0]));
    let norm: f64 = (1..r.len()).map(|i| 0.5 * (r[i] - r[i - 1]) * (f[i] * f[i] + f[i - 1] * f[i - 1])).sum();
    assert!((norm - 1.0).abs() <= 1e-4, "trapezoid norm {norm}");
}

#[test]
fn first_excited_state_has_one_node() {
    let mut args = vec!["wavefunction", "--kappa=-1", "--n", "1"];
    args.extend(DEEP_WELL);
    let (_, rows) = csv_rows(&String::from_utf8(rmdirac(&args).stdout).unwrap());
    let f: Vec<f64> = rows.iter().map(|x| x[1].parse().unwrap()).collect();
    let changes = f.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 1);
}

#[test]
fn missing_state_exits_3() {
    let out = rmdirac(&["wavefunction", "--kappa=-1", "--n", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_with_flag_override_and_bad_key() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("well.cfg");
    std::fs::write(&good, "# deep well\nv1 = 1\nv2 = -4\nalpha = 0.5\nkappa = -1\nn = 0\n").unwrap();
    let out = rmdirac(&["spectrum", "--config", good.to_str().unwrap(), "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1");

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "v1 = 1\nwell_depth = 4\n").unwrap();
    let out = rmdirac(&["spectrum", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("well_depth"));

    let out = rmdirac(&["spectrum", "--alpha=-1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rmdirac(&["spectrum", "--kappa", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pekeris.json");
    let out = rmdirac(&["pekeris", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["source"], "contact_matched");
    assert!(rows[1]["residual_value"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn injected_fault_fails_validation() {
    let out = rmdirac(&["validate", "--fault-delta-scale", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("[FAIL] criterion  4"), "{err}");
}
