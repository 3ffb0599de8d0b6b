use std::collections::HashMap;
use std::process::{Command, Output};

fn qring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qring"))
        .args(args)
        .env_remove("QRING_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<HashMap<String, String>> {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    csv_records(&stdout(o))
}

fn csv_records(text: &str) -> Vec<HashMap<String, String>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn num(r: &HashMap<String, String>, k: &str) -> f64 {
    r[k].parse().unwrap_or_else(|_| panic!("{k} = {:?}", r[k]))
}

#[test]
fn levels_reproduce_ring_row() {
    let o = qring(&[
        "levels", "--m", "0,1,2", "--v", "400", "--a", "1", "--b", "1", "--ri", "0.5", "--n", "2",
    ]);
    let e0: Vec<String> = records(&o).iter().map(|r| r["e0"].clone()).collect();
    assert_eq!(e0, ["26.4059", "106.878", "30.3106", "110.949", "37.9733", "119.165"]);
}

#[test]
fn levels_reproduce_dot_row() {
    let o = qring(&["levels", "--m", "0,1,2", "--ri", "0", "--n", "2"]);
    let e0: Vec<String> = records(&o).iter().map(|r| r["e0"].clone()).collect();
    assert_eq!(e0, ["4.48334", "26.952", "14.677", "45.9308", "27.3538", "67.4988"]);
}

#[test]
fn zero_spin_orbit_gives_unit_overlap() {
    let o = qring(&[
        "levels",
        "--m",
        "-2,0,3",
        "--a",
        "0",
        "--b",
        "2",
        "--ri",
        "0.3",
        "--n",
        "3",
        "--full-precision",
    ]);
    let rows = records(&o);
    assert_eq!(rows.len(), 9);
    for r in &rows {
        assert_eq!(num(r, "delta"), 1.0);
        assert!((num(r, "e_prime") / (4.0 * -0.00737 * 2.0) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn zeeman_column_is_arithmetic_on_overlap() {
    let o = qring(&[
        "levels",
        "--m",
        "0,1",
        "--a",
        "2.5",
        "--b",
        "0.7",
        "--n",
        "3",
        "--full-precision",
        "--mass-ratio",
        "0.023",
        "--g-factor",
        "-14.9",
    ]);
    let s = -14.9 * 0.023 / 4.0;
    for r in records(&o) {
        let expected = 4.0 * s * 0.7 * num(&r, "delta");
        assert!((num(&r, "e_prime") - expected).abs() <= 1e-12 * expected.abs());
        assert!((num(&r, "e_plus") + num(&r, "e_minus") - 2.0 * num(&r, "e0")).abs() <= 1e-12 * num(&r, "e0"));
        assert!(r.contains_key("E0_meV"));
    }
}

#[test]
fn physical_columns_only_with_material() {
    let plain = records(&qring(&["levels"]));
    assert!(!plain[0].contains_key("E0_meV"));
    let with = records(&qring(&["levels", "--rho-o", "30"]));
    assert!((num(&with[0], "E0_meV") / (26.4059 * 0.631933) - 1.0).abs() < 1e-5);
}

#[test]
fn output_is_byte_stable_across_runs_and_threads() {
    let args = [
        "sweep", "--over", "b", "--start", "0.5", "--stop", "2", "--step", "0.25", "--m", "-1,0,1", "--n", "2",
    ];
    let one = qring(&[&args[..], &["--threads", "1"]].concat());
    let many = qring(&[&args[..], &["--threads", "4"]].concat());
    let again = qring(&args);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qring"))
        .args(["levels"])
        .env("QRING_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_qring"))
        .args(["levels"])
        .env("QRING_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_mirrors_csv_columns() {
    let csv = records(&qring(&["levels", "--m", "0,1", "--n", "2"]));
    let o = qring(&["levels", "--m", "0,1", "--n", "2", "--format", "json"]);
    let json: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json.len(), csv.len());
    for (j, c) in json.iter().zip(&csv) {
        let mut jk: Vec<&String> = j.keys().collect();
        let mut ck: Vec<&String> = c.keys().collect();
        jk.sort();
        ck.sort();
        assert_eq!(jk, ck);
        assert_eq!(j["e0"].as_f64().unwrap(), num(c, "e0"));
    }
}

#[test]
fn out_of_envelope_is_usage_error() {
    for (args, needle) in [
        (vec!["levels", "--m", "11"], "|m|"),
        (vec!["levels", "--v", "2e4"], "v must"),
        (vec!["levels", "--a", "11"], "a must"),
        (vec!["levels", "--b", "1e-4"], "b must"),
        (vec!["levels", "--ri", "0.995"], "r_i must"),
        (vec!["levels", "--n", "21"], "n must"),
    ] {
        let o = qring(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(needle), "{args:?}");
    }
}

#[test]
fn a_sweep_is_exact_shift() {
    let rows = records(&qring(&[
        "sweep",
        "--over",
        "a",
        "--start",
        "0",
        "--stop",
        "3",
        "--step",
        "0.25",
        "--m",
        "0",
        "--n",
        "1",
        "--full-precision",
    ]));
    let base = num(&rows[0], "e0");
    for r in &rows {
        let a = num(r, "swept_value");
        assert!((num(r, "e0") - (base - a * a)).abs() <= 1e-6, "a={a}");
    }
}

#[test]
fn b_sweep_spacing_between_opposite_m() {
    let rows = records(&qring(&[
        "sweep",
        "--over",
        "b",
        "--start",
        "0.5",
        "--stop",
        "3",
        "--step",
        "0.5",
        "--m",
        "-1,1",
        "--full-precision",
    ]));
    for pair in rows.chunks(2) {
        let b = num(&pair[0], "swept_value");
        assert_eq!((pair[0]["m"].as_str(), pair[1]["m"].as_str()), ("-1", "1"));
        assert!(
            (num(&pair[1], "e0") - num(&pair[0], "e0") - 4.0 * b).abs() <= 1e-6,
            "b={b}"
        );
    }
}

#[test]
fn b_sweep_passes_through_table_value() {
    let rows = records(&qring(&[
        "sweep", "--over", "b", "--start", "0.5", "--stop", "1.5", "--step", "0.25",
    ]));
    let at_one = rows.iter().find(|r| r["swept_value"] == "1").unwrap();
    assert!((num(at_one, "neg_eprime_over_e0") / 5.6869e-4 - 1.0).abs() < 1e-3);
    assert!(at_one["error"].is_empty());
}

#[test]
fn sweep_records_failures_and_continues() {
    // |s| = 1.25 is rejected per point
    let o = qring(&[
        "sweep",
        "--over",
        "b",
        "--start",
        "1",
        "--stop",
        "2",
        "--step",
        "0.5",
        "--mass-ratio",
        "1",
        "--g-factor",
        "-5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let rows = csv_records(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["error"].contains("Zeeman scale")));
}

#[test]
fn convert_examples_and_round_trip() {
    let value = |args: &[&str]| num(&records(&qring(args))[0], "output");
    assert!((value(&["convert", "1", "--quantity", "energy"]) / 0.631933 - 1.0).abs() < 1e-5);
    assert!((value(&["convert", "1", "--quantity", "soi-strength"]) / 18.9579 - 1.0).abs() < 1e-5);
    assert!((value(&["convert", "400", "--quantity", "depth"]) / 252.772 - 1.0).abs() < 1e-5);
    let phys = value(&["convert", "2.75", "--quantity", "field", "--full-precision"]);
    let back = value(&[
        "convert",
        &phys.to_string(),
        "--quantity",
        "field",
        "--direction",
        "to-dimensionless",
        "--full-precision",
    ]);
    assert!((back / 2.75 - 1.0).abs() <= 1e-12);
    let s = num(&records(&qring(&["convert", "1", "--quantity", "energy"]))[0], "s");
    assert_eq!(s, -0.00737);
    assert_eq!(qring(&["convert", "1", "--quantity", "mass"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("qring-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inas.conf");
    std::fs::write(&path, "# InAs\nmass_ratio = 0.023\ng_factor = -14.9\nrho_o = 50\n").unwrap();
    let p = path.to_str().unwrap();
    let from_file = num(
        &records(&qring(&["convert", "1", "--quantity", "energy", "--config", p]))[0],
        "output",
    );
    let overridden = num(
        &records(&qring(&[
            "convert",
            "1",
            "--quantity",
            "energy",
            "--config",
            p,
            "--rho-o",
            "25",
        ]))[0],
        "output",
    );
    assert!((overridden / from_file - 4.0).abs() < 1e-4, "{from_file} {overridden}");
    std::fs::write(&path, "mass = 1\n").unwrap();
    assert_eq!(
        qring(&["convert", "1", "--quantity", "energy", "--config", p])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qring-out-{}.csv", std::process::id()));
    let o = qring(&["levels", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("m,n,e0,"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn wavefunction_is_normalized() {
    let rows = records(&qring(&[
        "wavefunction",
        "--m",
        "1",
        "--level",
        "2",
        "--points",
        "10000",
        "--full-precision",
    ]));
    let (r, u): (Vec<f64>, Vec<f64>) = rows.iter().map(|x| (num(x, "r"), num(x, "u"))).unzip();
    let h = r[1] - r[0];
    let f: Vec<f64> = r.iter().zip(&u).map(|(r, u)| u * u * r).collect();
    let trap = h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[f.len() - 1]));
    assert!(
        (trap * 2.0 * std::f64::consts::PI - 1.0).abs() < 1e-4 * 2.0 * std::f64::consts::PI,
        "{trap}"
    );
}

#[test]
fn wavefunction_vanishes_at_origin_for_nonzero_m() {
    let rows = records(&qring(&[
        "wavefunction",
        "--m",
        "2",
        "--ri",
        "0.3",
        "--r-max",
        "0.3",
        "--points",
        "31",
        "--full-precision",
    ]));
    let u: Vec<f64> = rows.iter().map(|x| num(x, "u").abs()).collect();
    assert_eq!(u[0], 0.0);
    assert!(u.windows(2).skip(1).all(|w| w[1] > w[0]));
}

#[test]
fn wavefunction_oracle_column_tracks_solution() {
    let rows = records(&qring(&[
        "wavefunction",
        "--points",
        "400",
        "--oracle",
        "--full-precision",
    ]));
    let worst = rows
        .iter()
        .map(|x| (num(x, "u") - num(x, "u_fd")).abs())
        .fold(0.0, f64::max);
    let peak = rows.iter().map(|x| num(x, "u").abs()).fold(0.0, f64::max);
    assert!(worst < 1e-2 * peak, "{worst} vs {peak}");
}

#[test]
fn missing_level_is_error() {
    let o = qring(&["wavefunction", "--level", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn levels_oracle_columns() {
    let rows = records(&qring(&["levels", "--n", "2", "--oracle"]));
    for r in &rows {
        assert!(num(r, "fd_deviation").abs() < 5e-3);
        assert!(num(r, "l2_error") < 1e-3);
    }
}

#[test]
fn table_reproduction_succeeds() {
    let o = qring(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = records(&o);
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r["status"] == "PASS"));
    let cell = |r_i: &str, m: &str, n: &str| {
        rows.iter()
            .find(|r| r["r_i"] == r_i && r["m"] == m && r["n"] == n)
            .unwrap()
    };
    assert_eq!(cell("0.9", "0", "2")["e0"], "404.788");
    assert!(num(cell("0.9", "0", "2"), "e0") > 400.0);
    let c = cell("0.1", "2", "1");
    assert_eq!(c["e0"], "27.3612");
    assert!((num(c, "ratio") / 6.5331e-4 - 1.0).abs() < 1e-2);
}
