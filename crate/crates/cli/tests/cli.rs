use std::process::{Command, Output};

use halfspace_qed::dirac::FourMomentum;
use halfspace_qed::kinematics::MediumParams;
use halfspace_qed::selfenergy::{total_shift, Moments};

fn hsqed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsqed")).args(args).output().expect("run hsqed")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parse commented CSV into headers and raw string rows.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (headers, rows)
}

fn column(headers: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = headers.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn fresnel_rows() {
    let o = hsqed(&["fresnel", "--n", "1,2", "--kpar", "0,1", "--kz", "1"]);
    assert!(o.status.success());
    let (h, mut rows) = parse_csv(&stdout(&o));
    let o = hsqed(&["fresnel", "--n", "2", "--kpar", "1", "--kz", "1", "--kappa", "0.5"]);
    assert!(o.status.success());
    rows.extend(parse_csv(&stdout(&o)).1);
    let n = column(&h, &rows, "n[1]");
    let kp = column(&h, &rows, "k_par[1]");
    let ev = column(&h, &rows, "evanescent[bool]");
    let rl_te = column(&h, &rows, "rl_TE_re[1]");
    let tl_tm = column(&h, &rows, "tl_TM_re[1]");
    let rr_abs = column(&h, &rows, "rr_TM_abs[1]");
    for i in 0..rows.len() {
        if n[i] == 1.0 && ev[i] == 0.0 {
            assert_eq!(rl_te[i], 0.0);
            assert_eq!(tl_tm[i], 1.0);
        }
        if n[i] == 2.0 && kp[i] == 0.0 && ev[i] == 0.0 {
            assert!((rl_te[i] + 1.0 / 3.0).abs() < 1e-15);
        }
        if n[i] == 2.0 && kp[i] == 1.0 && ev[i] == 1.0 {
            assert!((rr_abs[i] - 1.0).abs() < 1e-14);
        }
    }
    assert!(ev.contains(&1.0));
}

#[test]
fn csv_and_json_round_trip() {
    let dir = std::env::temp_dir().join(format!("hsqed-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("s.csv");
    let json_path = dir.join("s.json");
    let args = ["shift", "--n", "1.5,2", "--pz", "0.3", "--ppar", "0.7", "--p0a", "37.1,100"];
    let o = hsqed(&[&args[..], &["--out", csv_path.to_str().unwrap()]].concat());
    assert!(o.status.success());
    let o = hsqed(&[&args[..], &["--format", "json", "--out", json_path.to_str().unwrap()]].concat());
    assert!(o.status.success());

    let (h, rows) = parse_csv(&std::fs::read_to_string(&csv_path).unwrap());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), rows.len());
    let lower = column(&h, &rows, "delta_e_lower[m]");
    for (i, obj) in arr.iter().enumerate() {
        let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
        assert_eq!(keys, h.iter().collect::<Vec<_>>());
        for (j, name) in h.iter().enumerate() {
            let a: f64 = rows[i][j].parse().unwrap();
            let b = obj[name].as_f64().unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{name}");
        }
    }
    // and both agree bit for bit with the library
    let n = column(&h, &rows, "n[1]");
    let a = column(&h, &rows, "a[1/m]");
    for i in 0..rows.len() {
        let p = FourMomentum::on_shell([0.7, 0.0, 0.3], 1.0).unwrap();
        let s = total_shift(&MediumParams::new(n[i]).unwrap(), a[i], &p, &Moments::sharp(&p)).unwrap();
        assert_eq!(s.delta_e[0].to_bits(), lower[i].to_bits());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shift_rows() {
    let o = hsqed(&["shift", "--n", "1,2", "--a", "3"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    let coul = column(&h, &rows, "coulomb[m]");
    let lo = column(&h, &rows, "delta_e_lower[m]");
    let hi = column(&h, &rows, "delta_e_upper[m]");
    let total = column(&h, &rows, "total[m]");
    assert_eq!(total[0], 0.0);
    assert_eq!(lo[0], 0.0);
    let want = -(4.0 * std::f64::consts::PI / 137.0) * 0.6 / (16.0 * std::f64::consts::PI * 3.0);
    assert!((coul[1] - want).abs() < 1e-15);
    assert!((lo[1] - coul[1]).abs() < 1e-15 && (hi[1] - coul[1]).abs() < 1e-15);
}

#[test]
fn shift_moments_split_spins() {
    let o = hsqed(&["shift", "--n", "2", "--a", "50", "--pz", "0.2", "--ppar", "0.1", "--moments", "0.05,0.02,0.01,0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = parse_csv(&stdout(&o));
    assert!(column(&h, &rows, "delta_e_lower[m]")[0] < column(&h, &rows, "delta_e_upper[m]")[0]);
    let bad = hsqed(&["shift", "--pz", "0.2", "--moments", "0.01,0,0,0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn asympt_convergence_orders() {
    let o = hsqed(&["asympt", "--n", "1,2", "--sweep", "p0a=100:400:3:log"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    let degenerate = column(&h, &rows, "degenerate[bool]");
    assert_eq!(degenerate, vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    for name in ["c_par_order_lead[1]", "c_z_order_lead[1]"] {
        let o = column(&h, &rows, name)[3];
        assert!((o - 1.0).abs() < 0.1, "{name} {o}");
    }
    for name in ["c_par_order_nlo[1]", "c_z_order_nlo[1]"] {
        assert!(column(&h, &rows, name)[3] > 1.5);
    }
    assert_eq!(hsqed(&["asympt", "--p0a", "100,200"]).status.code(), Some(1));
}

#[test]
fn limits_table() {
    let o = hsqed(&["limits", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let get = |case: &str, n: f64| {
        let r = v.as_array().unwrap().iter().find(|r| r["case"] == case && r["n[1]"].as_f64() == Some(n)).unwrap();
        [r["c_par[1]"].as_f64().unwrap(), r["c_z[1]"].as_f64().unwrap(), r["c0_total[1]"].as_f64().unwrap()]
    };
    assert_eq!(get("lim_n_inf", 0.0), [1.0, 4.0, 2.0]);
    assert_eq!(get("perfect", 0.0), [-1.0, 2.0, 2.0]);
    assert_eq!(get("ratio", 0.0), [-1.0, 2.0, 1.0]);
    let big = get("finite_n", 1e6);
    assert!((big[0] - 1.0).abs() < 1e-5 && (big[1] - 4.0).abs() < 1e-5 && (big[2] - 2.0).abs() < 1e-5);
}

#[test]
fn greens_tables() {
    let o = hsqed(&["greens", "--n", "1.5,2", "--a", "0.5,2"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    let num = column(&h, &rows, "g_numeric[m]");
    let closed = column(&h, &rows, "g_closed[m]");
    for (a, b) in num.iter().zip(&closed) {
        assert!(((a - b) / b).abs() < 1e-8);
    }
    let o = hsqed(&["greens", "--kind", "kernel", "--n", "1"]);
    assert!(o.status.success());
    let (h, rows) = parse_csv(&stdout(&o));
    assert!(column(&h, &rows, "kernel_te[1]").iter().all(|v| *v == 0.0));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = hsqed(&["verify", "--seed", "7"]);
    let b = hsqed(&["verify", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_negative_control_fails() {
    let o = hsqed(&["verify", "--inject-bug"]);
    assert_eq!(o.status.code(), Some(3));
    let (h, rows) = parse_csv(&stdout(&o));
    let passed = column(&h, &rows, "passed[bool]");
    assert_eq!(passed.iter().filter(|p| **p == 0.0).count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(hsqed(&["shift", "--n", "0.5"]).status.code(), Some(1));
    assert_eq!(hsqed(&["fresnel", "--kz", "nope"]).status.code(), Some(1));
    assert_eq!(hsqed(&["fresnel", "--kpar", "0", "--kappa", "0.5"]).status.code(), Some(1));
    assert_eq!(hsqed(&["shift", "--moments", "1,2"]).status.code(), Some(1));
    assert_eq!(hsqed(&["asympt", "--tol", "1e-17"]).status.code(), Some(2));
    assert_eq!(hsqed(&["--help"]).status.code(), Some(0));
}
