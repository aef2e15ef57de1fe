use std::process::{Command, Output};

use serde_json::Value;

fn anharmonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anharmonic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect::<Vec<_>>();
    let rows = lines.map(|l| l.split(',').map(String::from).collect::<Vec<_>>()).collect::<Vec<_>>();
    for r in &rows {
        assert_eq!(r.len(), header.len(), "ragged row {r:?}");
    }
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<Option<f64>> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| (!r[i].is_empty()).then(|| r[i].parse().unwrap())).collect()
}

#[test]
fn measure_json_is_one_document() {
    let o = anharmonic(&["measure", "--potential", "harmonic:omega=1", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
    assert!(v["eta_b"].as_f64().unwrap() <= 1e-6);
    assert!((v["det_sigma"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    assert_eq!(v["moments"], "quadrature");
}

#[test]
fn absent_reference_serializes_as_empty_or_null() {
    let csv = anharmonic(&["measure", "--potential", "fs:p=-0.6"]);
    let (header, rows) = csv_rows(&stdout(&csv));
    assert_eq!(column(&header, &rows, "eta_b"), vec![None]);
    assert!(column(&header, &rows, "eta_ng")[0].unwrap() > 0.0);
    let json = anharmonic(&["measure", "--potential", "fs:p=-0.6", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(v["eta_b"].is_null() && v["omega_r"].is_null());
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    for args in [
        &["measure", "--potential", "morse:D=1,alpha=3"][..],
        &["measure", "--potential", "mio:a=-1"],
        &["scatter", "--eps4", "-0.6,0.1"],
        &["sweep", "--potential", "morse:D=1,alpha=1", "--axis", "a", "--from", "0.1", "--to", "1"],
    ] {
        let o = anharmonic(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(stdout(&o).is_empty());
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
    let o = anharmonic(&["measure", "--potential", "morse:D=1,alpha=3"]);
    assert!(stderr(&o).contains("bound-state constraint"));
}

#[test]
fn morse_sweep_is_increasing() {
    let o = anharmonic(&[
        "sweep",
        "--potential",
        "morse:D=1,alpha=1",
        "--axis",
        "alpha",
        "--from",
        "0.05",
        "--to",
        "2.7",
        "--points",
        "50",
    ]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 50);
    assert_eq!(header.last().unwrap(), "error");
    for name in ["eta_b", "eta_ng"] {
        let v: Vec<f64> = column(&header, &rows, name).into_iter().map(Option::unwrap).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "{name}");
    }
    // the last points lie beyond the grid cap and use closed-form moments
    assert!(stderr(&o).contains("closed-form"));
}

#[test]
fn mio_log_sweep_has_interior_maximum() {
    let o = anharmonic(&[
        "sweep",
        "--potential",
        "mio:a=1",
        "--axis",
        "a",
        "--from",
        "0.2",
        "--to",
        "50",
        "--points",
        "40",
        "--log-spacing",
    ]);
    let (header, rows) = csv_rows(&stdout(&o));
    let a: Vec<f64> = column(&header, &rows, "a").into_iter().map(Option::unwrap).collect();
    assert_eq!((a[0], a[39]), (0.2, 50.0));
    let ng: Vec<f64> = column(&header, &rows, "eta_ng").into_iter().map(Option::unwrap).collect();
    let peak = ng.iter().cloned().enumerate().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap().0;
    assert!(peak > 0 && peak < 39);
}

#[test]
fn fellows_smith_sweep_region_rule() {
    let o = anharmonic(&[
        "sweep",
        "--potential",
        "fs:p=0",
        "--axis",
        "p",
        "--from",
        "-0.98",
        "--to",
        "0",
        "--points",
        "30",
    ]);
    let (header, rows) = csv_rows(&stdout(&o));
    let p_plus = -0.5 + 2f64.sqrt() / 4.0;
    for (p, eb) in column(&header, &rows, "p").into_iter().zip(column(&header, &rows, "eta_b")) {
        assert_eq!(eb.is_none(), p.unwrap() < p_plus, "{p:?}");
    }
}

#[test]
fn scatter_rows_and_determinism() {
    let o = anharmonic(&["scatter", "--n", "3", "--seed", "7"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("eps3,eps4,eta_b,eta_ng\n") && text.ends_with('\n'));
    let args = ["scatter", "--n", "500", "--seed", "42", "--format", "json"];
    assert_eq!(anharmonic(&args).stdout, anharmonic(&args).stdout);
}

#[test]
fn wider_cubic_range_spreads_further_from_the_curve() {
    let spread = |eps3: &str| {
        let o = anharmonic(&["scatter", "--n", "2000", "--seed", "1", "--eps3", eps3]);
        let (header, rows) = csv_rows(&stdout(&o));
        let eb = column(&header, &rows, "eta_b");
        let ng = column(&header, &rows, "eta_ng");
        eb.iter()
            .zip(&ng)
            .map(|(b, n)| {
                let c = anharmonic::perturbation::parametric_curve(b.unwrap()).unwrap().corrected;
                (n.unwrap() - c).abs()
            })
            .fold(0.0, f64::max)
    };
    assert!(spread("-0.2,0.2") > 2.0 * spread("-0.1,0.1"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("anharmonic-cli-{}.json", std::process::id()));
    let o = anharmonic(&["curve", "--points", "5", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[0]["eta_ng_printed"] == 0.0 && rows[1]["eta_ng_printed"].is_null());
}

#[test]
fn oracle_check_examples() {
    let check = |spec: &str| {
        let o = anharmonic(&["oracle-check", "--potential", spec, "--format", "json"]);
        (o.status.success(), serde_json::from_str::<Value>(&stdout(&o)).unwrap())
    };
    let (ok, v) = check("mpt:D=1,alpha=1");
    assert!(ok && v["energy_difference"].as_f64().unwrap().abs() <= 1e-5);
    assert!((v["analytic_energy"].as_f64().unwrap() + 0.5).abs() < 1e-12);
    let (ok, v) = check("mio:a=8");
    assert!(ok && v["fd_energy"].as_f64().unwrap().abs() <= 1e-5);
    let (ok, v) = check("morse:D=1,alpha=1.5");
    assert!(ok && v["energy_difference"].as_f64().unwrap().abs() <= 1e-4);
    assert!(v["printed_alpha_difference"].as_f64().unwrap().abs() > 0.05);
}
