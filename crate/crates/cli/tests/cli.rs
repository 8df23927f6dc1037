use std::f64::consts::PI;
use std::process::{Command, Output};

fn paretail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paretail"))
        .args(args)
        .env_remove("PARETAIL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Data rows of the first CSV table, after the schema line and header.
fn rows(text: &str) -> Vec<Vec<String>> {
    let body: String = text
        .lines()
        .skip(1)
        .take_while(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.expect("valid csv").iter().map(String::from).collect())
        .collect()
}

fn field(row: &[String], k: usize) -> f64 {
    row[k].parse().expect("numeric field")
}

#[test]
fn list_distributions_golden() {
    let out = paretail(&["list-distributions"]);
    assert!(out.status.success());
    let expected = "# paretail/1 list-distributions\n\
        name,spec,tail_index,exact_quantile,numeric_quantile,sampler\r\n\
        pareto,\"pareto(1,1)\",1.0,true,false,true\r\n\
        cauchy,cauchy,1.0,true,false,true\r\n\
        student_t,student_t(3),3.0,false,true,true\r\n\
        f_dist,\"f_dist(4,6)\",3.0,false,true,true\r\n\
        stable,\"stable(0.5,-0.5)\",0.5,false,false,true\r\n\
        frechet,frechet(1),1.0,true,false,true\r\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn invert_cauchy_matches_closed_form() {
    let out = paretail(&["invert", "--dist", "cauchy", "--order", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# paretail/1 invert\ni,exponent,coefficient\r\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 4);
    let expected = [1.0 / PI, -PI / 3.0, -PI.powi(3) / 45.0, -2.0 * PI.powi(5) / 945.0];
    for (i, row) in r.iter().enumerate() {
        assert_eq!(field(row, 0), i as f64);
        assert_eq!(field(row, 1), 2.0 * i as f64 - 1.0);
        assert!((field(row, 2) - expected[i]).abs() < 1e-12 * expected[i].abs(), "row {i}: {row:?}");
    }
}

#[test]
fn invert_explicit_tail_matches_catalog() {
    let from_dist = stdout(&paretail(&["invert", "--dist", "pareto(2,3)", "--order", "2"]));
    let from_tail = stdout(&paretail(&["invert", "--tail", "2,2,3,0,0", "--order", "2"]));
    assert_eq!(rows(&from_dist), rows(&from_tail));
}

#[test]
fn moments_pareto_evaluation_is_exact() {
    let out = paretail(&["moments", "--dist", "pareto", "--s", "2", "--imax", "3", "--jmax", "2", "--n", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let eval = text.split("# evaluation\n").nth(1).expect("evaluation section");
    let mut rdr = csv::Reader::from_reader(eval.as_bytes());
    let rec = rdr.records().next().expect("one row").expect("valid csv");
    let value: f64 = rec[1].parse().unwrap();
    let truncation: f64 = rec[2].parse().unwrap();
    assert!((value - 2.5).abs() < 1e-12);
    assert_eq!(truncation, 0.0);
}

#[test]
fn json_output_carries_schema() {
    let out = paretail(&["--format", "json", "typos"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema"], "paretail/1");
    assert_eq!(v["command"], "typos");
    let entries = v["entries"].as_array().expect("entries");
    assert!(entries.iter().any(|e| e["id"] == "f3s-definition"));
}

#[test]
fn verify_frechet_covariance_slope() {
    let out = paretail(&["verify", "--dist", "frechet(1)", "--s", "2,1", "--n", "50,100,200,400"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 4);
    let fitted = field(&r[0], 6);
    let predicted = field(&r[0], 7);
    assert_eq!(predicted, -2.0);
    assert!((fitted + 2.0).abs() < 0.05, "fitted slope {fitted}");
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 3] = [
        &["invert", "--dist", "student_t(3)", "--order", "5"],
        &["--format", "json", "moments", "--dist", "cauchy", "--s", "3,1", "--n", "100"],
        &["verify", "--dist", "pareto", "--s", "3", "--n", "100,200,400", "--oracle", "mc", "--reps", "20000"],
    ];
    for args in runs {
        let a = paretail(args);
        let b = paretail(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn seed_changes_monte_carlo_output() {
    let args = ["verify", "--dist", "cauchy", "--s", "2", "--n", "100,200,400", "--oracle", "mc", "--reps", "20000"];
    let a = paretail(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_paretail"))
        .args(args)
        .env("PARETAIL_SEED", "12345")
        .output()
        .expect("binary runs");
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["invert"][..],
        &["invert", "--dist", "bogus"],
        &["moments", "--dist", "cauchy", "--s", "2,1", "--theta", "1"],
        &["invert", "--tail", "1,0"],
    ] {
        let out = paretail(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn infinite_moment_exits_three() {
    let out = paretail(&["moments", "--dist", "cauchy", "--s", "1", "--theta", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
    assert!(out.stdout.is_empty());
}
