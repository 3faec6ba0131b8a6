use serde_json::Value;
use std::process::{Command, Output};

fn origami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origami")).args(args).env_remove("ORIGAMI_DIGITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = origami(&a);
    (serde_json::from_str(&stdout(&o)).unwrap(), o.status.code().unwrap())
}

#[test]
fn find_kappa_reproduces_iterates() {
    let o = origami(&["find-kappa", "--seed", "2", "--target", "3", "--digits", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for (k, s) in ["8.7404", "33.2055", "85.3301", "139.6842", "159.9489", "161.4910", "161.4984"].iter().enumerate() {
        assert!(text.contains(&format!("s_{} = {s} ", k + 1)), "{text}");
    }
    assert!(text.contains("kappa = 161.4984471899924290707"), "{text}");
}

#[test]
fn find_kappa_exit_codes() {
    assert_eq!(origami(&["find-kappa", "--digits", "5"]).status.code(), Some(1));
    assert_eq!(origami(&["find-kappa", "--seed", "500", "--target", "3", "--max-iter", "3"]).status.code(), Some(2));
    assert_eq!(origami(&["find-kappa", "--seed", "two"]).status.code(), Some(1));
    assert_eq!(origami(&["find-kappa", "--bogus"]).status.code(), Some(1));
    assert_eq!(origami(&["--help"]).status.code(), Some(0));
}

#[test]
fn digits_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_origami"))
        .args(["find-kappa"])
        .env("ORIGAMI_DIGITS", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn find_kappa_json() {
    let (v, code) = json(&["find-kappa", "--digits", "40"]);
    assert_eq!(code, 0);
    assert_eq!(v["converged"], Value::Bool(true));
    assert!(v["kappa"].as_str().unwrap().starts_with("161.49844718999242907073"));
    assert_eq!(v["iterates"].as_array().unwrap().len(), v["residuals"].as_array().unwrap().len());
}

#[test]
fn recognize_examples() {
    let (v, code) = json(&["recognize", "1.88372093"]);
    assert_eq!(code, 0);
    assert_eq!(v["rational"], "81/43");
    let (v, _) = json(&["recognize", "161.49844718999242907073", "--max-deg", "2"]);
    assert_eq!(v["min_poly"], "x^2 - 162*x + 81");
    assert_eq!(v["quadratic"], "81 + 36*sqrt(5)");
    let (v, _) = json(&["recognize", "0.333333333333"]);
    assert_eq!(v["rational"], "1/3");
    let (v, code) = json(&["recognize", "3.14159265358979"]);
    assert_eq!(code, 0);
    assert_eq!(v["recognized"], Value::Bool(false));
    assert!(stdout(&origami(&["recognize", "3.14159265358979"])).contains("no recognition"));
}

#[test]
fn verify_builtin_and_perturbed() {
    let o = origami(&["verify", "--builtin"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);
    let golden = include_str!("../../core/data/cover5.txt");
    let path = std::env::temp_dir().join(format!("origami-perturbed-{}.txt", std::process::id()));
    std::fs::write(&path, golden.replace("b1 = 208656000", "b1 = 208656001")).unwrap();
    let o = origami(&["verify", "--coefficients", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    std::fs::write(&path, "kappa = nonsense").unwrap();
    assert_eq!(origami(&["verify", "--coefficients", path.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(origami(&["verify"]).status.code(), Some(1));
}

#[test]
fn fit_map_writes_golden_coefficients() {
    let path = std::env::temp_dir().join(format!("origami-fit-{}.txt", std::process::id()));
    let o = origami(&["fit-map", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let golden: String = include_str!("../../core/data/cover5.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn fit_map_wrong_kappa_fails() {
    let o = origami(&["fit-map", "--kappa", "80 + 36*sqrt(5)", "--digits", "40"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn pipeline_certificate() {
    let (v, code) = json(&["pipeline"]);
    assert_eq!(code, 0);
    assert_eq!(v["kappa_exact"], "81 + 36*sqrt(5)");
    assert_eq!(v["map"]["coefficients"]["d"], "491045000 + 219602000*sqrt(5)");
    assert_eq!(v["map"]["identity"], Value::Bool(true));
}

#[test]
fn count_classes_command() {
    let o = origami(&["count-classes", "--n", "5", "--commutator", "3-cycle", "--transitive"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("classes: 27"));
    let (v, _) = json(&["count-classes", "--n", "5", "--commutator", "3-cycle", "--transitive", "--list"]);
    assert_eq!(v["count"], 27);
    assert_eq!(v["classes"].as_array().unwrap().len(), 27);
    let (v, _) = json(&["count-classes", "--n", "5", "--commutator", "3-cycle", "--transitive", "--convention", "inverse-last"]);
    assert_eq!(v["count"], 27);
    assert_eq!(origami(&["count-classes", "--n", "9"]).status.code(), Some(1));
    assert_eq!(origami(&["count-classes", "--n", "4", "--commutator", "x"]).status.code(), Some(1));
}

#[test]
fn periods_command() {
    let (v, code) = json(&["periods", "--kappa", "161.49844719", "--digits", "30"]);
    assert_eq!(code, 0);
    let re = |k: &str, i: usize| v[k][i].as_str().unwrap().parse::<f64>().unwrap();
    assert!((re("ratio_i3_i1", 0) - 3.0).abs() < 1e-8);
    assert!(re("ratio_i3_i1", 1).abs() < 1e-8);
    assert!(re("ratio_i4_i1", 0).abs() < 1e-8);
    assert!((re("ratio_i4_i1", 1) - 1.0).abs() < 1e-8);
    assert_eq!(origami(&["periods", "--kappa", "0.5", "--digits", "30"]).status.code(), Some(1));

    let (v, code) = json(&["periods", "--kappa", "81 + 36*sqrt(5)", "--digits", "30"]);
    assert_eq!(code, 0);
    let re = |k: &str, i: usize| v[k][i].as_str().unwrap().parse::<f64>().unwrap();
    assert!((re("ratio_i3_i1", 0) - 3.0).abs() < 1e-20);
}
