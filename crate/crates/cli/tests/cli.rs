use std::process::{Command, Output};

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_owned).collect()).collect()
}

#[test]
fn potential_marks_the_pole() {
    let o = darboux(&["potential", "--family", "32", "--n", "1", "--range", "-3,4", "--samples", "71"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    let pole = rows.iter().find(|r| r[3] == "1").expect("pole row");
    assert!((pole[0].parse::<f64>().unwrap() + 1.0).abs() < 1e-12);
    assert!(pole[1].is_empty());
}

#[test]
fn centrifugal_zero_vanishes() {
    let o = darboux(&["potential", "--family", "37", "--n", "0", "--range", "0.5,3", "--samples", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for r in csv_rows(&stdout(&o)) {
        assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn spectrum_agrees_with_numerov() {
    let o = darboux(&["spectrum", "--n", "2", "--count", "10"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert!(r[5].parse::<f64>().unwrap().abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn phaseshift_is_flat_for_n2_right() {
    let o = darboux(&["phaseshift", "--family", "32", "--n", "2", "--side", "right", "--kmin", "0.5", "--kmax", "8", "--count", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 6);
    for r in rows {
        let d: f64 = r[3].parse().unwrap();
        assert!((d + std::f64::consts::FRAC_PI_2).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn kdv_check_reports_exact_solution() {
    let o = darboux(&["kdv-check", "--candidate", "eqB3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], serde_json::Value::Bool(true));
}

#[test]
fn bad_parameters_exit_with_two() {
    for args in [
        vec!["potential", "--family", "32", "--n", "1", "--mu", "-2"],
        vec!["potential", "--family", "nope"],
        vec!["potential", "--range", "4,1"],
        vec!["spectrum", "--n", "1"],
        vec!["kdv-check", "--candidate", "unknown"],
    ] {
        let o = darboux(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--n", "3", "--count", "4", "--form", "constructed", "--mu", "5/3"];
    let a = darboux(&args);
    let b = darboux(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_subset_passes() {
    let o = darboux(&["verify-all", "--criteria", "1,7"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(0), "{err}");
    assert!(err.contains("pass"), "{err}");
}
