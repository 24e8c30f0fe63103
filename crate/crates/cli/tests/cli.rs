use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .output()
        .expect("spawn casimir")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn value(out: &Output) -> f64 {
    json(out)["value"].as_f64().unwrap()
}

fn drude_table(path: &Path) {
    let (wp, g) = (9.0f64, 0.035f64);
    let mut s = String::from("# omega_eV eps_imag\n");
    for i in 0..=250 {
        let w = 10f64.powf(-3.0 + 5.0 * i as f64 / 250.0);
        s.push_str(&format!("{w:e} {:e}\n", wp * wp * g / (w * (w * w + g * g))));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn compute_ideal_metal_zero_temperature() {
    let out = casimir(&["compute", "--model", "ideal-metal", "--a", "1e-6", "--T", "0", "--quantity", "pressure"]);
    let j = json(&out);
    let v = j["value"].as_f64().unwrap();
    assert!((v / -1.3001e-3 - 1.0).abs() < 1e-4, "{v}");
    assert_eq!(j["units"], "N/m^2");
    assert!(j["truncation_error"].as_f64().unwrap() >= 0.0);
    assert!(j["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn compute_drude_large_separation() {
    let v = value(&casimir(&["compute", "--model", "drude:au", "--a", "6e-6", "--T", "300", "--quantity", "pressure"]));
    // half the ideal-metal classical limit -ζ(3) k_B T / (8π a³)
    let classical = -1.2020569 * 1.380649e-23 * 300.0 / (8.0 * std::f64::consts::PI * 6e-6f64.powi(3));
    assert!(v < 0.0);
    assert!((v / classical - 1.0).abs() < 0.02, "{v} vs {classical}");
}

#[test]
fn usage_errors_exit_one() {
    let out = casimir(&["compute", "--quantity", "pressure", "--a", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["compute", "--model", "ideal-metal", "--quantity", "pressure", "--a", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["compute", "--model", "ideal-metal", "--a", "1e-6", "--T", "0", "--quantity", "entropy"]);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["compute", "--model", "no-such-metal", "--a", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["scan", "--model", "plasma:au", "--min", "1e-6", "--max", "1e-6", "--count", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = casimir(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "model = ideal-metal\nT = 0\nquantity = free_energy\na = 2e-6\n").unwrap();
    let c = cfg.to_str().unwrap();
    let e = value(&casimir(&["compute", "--config", c]));
    let p = value(&casimir(&["compute", "--config", c, "--quantity", "pressure"]));
    // E = P a / 3 for the ideal metal at T = 0
    assert!((e / (p * 2e-6 / 3.0) - 1.0).abs() < 1e-6);
}

#[test]
fn custom_materials_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    std::fs::write(&m, "[mygold]\nmodel = plasma\nomega_p_ev = 9.0\n").unwrap();
    let a = value(&casimir(&["compute", "--materials", m.to_str().unwrap(), "--model", "mygold", "--a", "1e-6", "--T", "300"]));
    let b = value(&casimir(&["compute", "--model", "plasma:au", "--a", "1e-6", "--T", "300"]));
    assert!((a / b - 1.0).abs() < 1e-9, "{a} {b}");
}

#[test]
fn scan_csv_round_trips_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let out = casimir(&[
        "scan", "--model", "plasma:au", "--quantity", "pressure", "--variable", "separation", "--min", "5e-7",
        "--max", "4e-6", "--count", "5", "--spacing", "log", "--T", "300", "--output",
        csv_path.to_str().unwrap(), "--plot",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header[0], "a [m]");
    assert_eq!(header[2], "pressure [N/m^2]");
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    let a: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(a.windows(2).all(|w| w[0] < w[1]));
    assert!((a[0] - 5e-7).abs() < 1e-20 && (a[4] - 4e-6).abs() < 1e-18);
    for (r, &ai) in rows.iter().zip(&a) {
        let p: f64 = r[2].parse().unwrap();
        let single = value(&casimir(&["compute", "--model", "plasma:au", "--a", &format!("{ai:e}"), "--T", "300"]));
        assert_eq!(p, single);
        assert!(r[4].is_empty());
    }
    let gp = std::fs::read_to_string(dir.path().join("scan.gp")).unwrap();
    assert!(gp.contains("scan.csv") && gp.contains("logscale"));

    let again = casimir(&[
        "scan", "--model", "plasma:au", "--variable", "separation", "--min", "5e-7", "--max", "4e-6", "--count",
        "5", "--spacing", "log", "--T", "300",
    ]);
    assert_eq!(again.stdout, std::fs::read(&csv_path).unwrap());
}

#[test]
fn scan_row_errors_are_reported_and_fail() {
    // a linear separation sweep starting at zero: first row fails, the rest succeed
    let out = casimir(&["scan", "--model", "plasma:au", "--min", "0", "--max", "2e-6", "--count", "3", "--T", "300"]);
    assert!(!out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(!rows[0][4].is_empty() && rows[0][2].is_empty());
    assert!(rows[1][4].is_empty() && rows[2][4].is_empty());
}

fn band_rows(args: &[&str]) -> Vec<(f64, f64)> {
    let out = casimir(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (r[2].parse().unwrap(), r[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn band_is_ordered_and_collapses_for_fixed_parameter() {
    let rows = band_rows(&[
        "band", "--model", "drude:au", "--quantity", "gradient", "--variable", "separation", "--min", "3e-7",
        "--max", "6e-7", "--count", "2", "--T", "300", "--param", "omega_p", "--param-min", "6.85", "--param-max",
        "9.0", "--param-steps", "3",
    ]);
    for &(lo, hi) in &rows {
        assert!(lo > 0.0 && lo < hi, "{lo} {hi}");
    }
    let rows = band_rows(&[
        "band", "--model", "drude:au", "--quantity", "gradient", "--min", "3e-7", "--max", "6e-7", "--count", "2",
        "--T", "300", "--param-min", "9.0", "--param-max", "9.0",
    ]);
    for &(lo, hi) in &rows {
        assert_eq!(lo, hi);
    }
}

#[test]
fn nonlocal_band_lies_between_drude_and_plasma() {
    let common = ["--quantity", "gradient", "--min", "5e-7", "--max", "1e-6", "--count", "2", "--T", "300", "--param-min", "8.9", "--param-max", "9.1", "--param-steps", "2"];
    let run = |m: &str| {
        let mut args = vec!["band", "--model", m];
        args.extend(common);
        band_rows(&args)[0]
    };
    let (nl, nh) = run("nonlocal:au");
    let (pl, ph) = run("plasma:au");
    let (dl, dh) = run("drude:au");
    assert!(dh < nl && nh < pl, "drude {dl}..{dh} nonlocal {nl}..{nh} plasma {pl}..{ph}");
}

#[test]
fn ingest_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("drude.txt");
    drude_table(&table);
    let cache = dir.path().join("cache");
    let args = [
        "ingest", "--input", table.to_str().unwrap(), "--ext", "drude", "--omega-p", "9.0", "--gamma", "0.035",
        "--T", "300", "--l-max", "50", "--cache-dir", cache.to_str().unwrap(),
    ];
    let first = json(&casimir(&args));
    let path = first["cache_path"].as_str().unwrap().to_string();
    let bytes = std::fs::read(&path).unwrap();
    let xi1 = first["xi_1"].as_f64().unwrap();
    let exact = 1.0 + 81.0 / (xi1 * (xi1 + 0.035));
    let eps1 = first["eps_xi_1"].as_f64().unwrap();
    assert!((eps1 / exact - 1.0).abs() < 5e-3, "{eps1} {exact}");
    assert_eq!(first["rows"].as_u64(), Some(50));

    std::fs::remove_file(&path).unwrap();
    let second = json(&casimir(&args));
    assert_eq!(second["digest"], first["digest"]);
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
    let third = json(&casimir(&args));
    assert_eq!(third["from_cache"], true);

    let cached = value(&casimir(&["compute", "--model", &format!("cache:{path}"), "--a", "1e-6", "--T", "300"]));
    let direct = value(&casimir(&["compute", "--model", "drude:au", "--a", "1e-6", "--T", "300"]));
    assert!((cached / direct - 1.0).abs() < 5e-3);
}

#[test]
fn ingest_cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("drude.txt");
    drude_table(&table);
    let out = Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(["ingest", "--input", table.to_str().unwrap(), "--ext", "plasma", "--omega-p", "9.0", "--l-max", "10"])
        .env("CASIMIR_CACHE_DIR", dir.path().join("env-cache"))
        .output()
        .unwrap();
    let j = json(&out);
    assert!(j["cache_path"].as_str().unwrap().contains("env-cache"));
}

#[test]
fn ingest_rejects_negative_absorption_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("bad.txt");
    let mut s = String::new();
    for i in 0..30 {
        let w = 10f64.powf(-2.0 + 0.1 * i as f64);
        let e = if i == 17 { -0.5 } else { 1.0 };
        s.push_str(&format!("{w} {e}\n"));
    }
    std::fs::write(&table, s).unwrap();
    let out = casimir(&[
        "ingest", "--input", table.to_str().unwrap(), "--ext", "plasma", "--omega-p", "9.0", "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 18"));
}

fn nernst(model: &str) -> Value {
    json(&casimir(&["nernst", "--model", model, "--a", "1e-6"]))
}

#[test]
fn nernst_plasma_satisfied() {
    let r = nernst("plasma:au");
    assert_eq!(r["verdict"], "satisfied");
    assert!(r["samples"].as_array().unwrap().len() >= 6);
}

#[test]
fn nernst_drude_violated_negative() {
    let r = nernst("drude:au-perfect");
    assert_eq!(r["verdict"], "violated");
    assert!(r["limit_estimate"].as_f64().unwrap() < 0.0);
}

#[test]
fn nernst_real_dielectric_violated_positive() {
    let r = nernst("real-dielectric:silica");
    assert_eq!(r["verdict"], "violated");
    assert!(r["limit_estimate"].as_f64().unwrap() > 0.0);
}

#[test]
fn nernst_rejects_short_grid() {
    let out = casimir(&["nernst", "--model", "plasma:au", "--a", "1e-6", "--grid", "10,5,1"]);
    assert_eq!(out.status.code(), Some(1));
}
