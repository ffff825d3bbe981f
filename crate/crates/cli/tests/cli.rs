use std::process::{Command, Output};

fn curves(name: &str) -> String {
    format!("{}/../../curves/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcurve")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_lists_catalan_numbers() {
    let c = curves("catalan.curve");
    let o = run(&["expand", "0", "1", "--depth", "9", "--curve", &c]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1, 0, 1, 0, 2, 0, 5, 0, 14"));
}

#[test]
fn invalid_index_is_a_usage_error() {
    let o = run(&["omega", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("usage"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn guards_exit_with_three() {
    assert_eq!(run(&["oracle", "dessin", "1", "6"]).status.code(), Some(3));
    assert_eq!(run(&["wave", "--k", "40"]).status.code(), Some(3));
}

#[test]
fn failed_check_exits_with_one() {
    let op = curves("gw.op");
    let o = run(&["--curve", "gw", "wkb-check", "--op", &op, "--k", "2", "--t", "1/3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("residual hbar^1: 1/6"));
}

#[test]
fn wkb_check_on_both_flavours() {
    let o = run(&["wkb-check", "--op", &curves("catalan.op"), "--k", "3", "--curve", &curves("catalan.curve")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["wkb-check", "--op", &curves("gw.op"), "--k", "3", "--curve", &curves("gw.curve")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn quantize_recovers_the_operator() {
    let o = run(&["quantize", "--k", "2", "--bounds", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hbar^0 : -x*y + y^2 + 1"));
}

#[test]
fn omega_json_sidecar_uses_exact_strings() {
    let dir = std::env::temp_dir().join(format!("qcurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("omega.json");
    let o = run(&["omega", "0", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let coeffs: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["coeff"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1/2", "-1/2"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["certify", "--only", "1,2,7,9"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    assert!(text.lines().all(|l| l.contains('[')), "every row names its provenance");
}

#[test]
fn oracle_subcommands() {
    assert!(stdout(&run(&["oracle", "catalan", "4"])).starts_with("14"));
    assert!(stdout(&run(&["oracle", "belyi", "0", "4"])).contains("1/2"));
    let o = run(&["oracle", "gw-ratio", "1"]);
    assert!(stdout(&o).contains("solvers agree: true"));
    assert_eq!(run(&["oracle", "toda", "2"]).status.code(), Some(0));
    assert_eq!(run(&["oracle", "catalan"]).status.code(), Some(2));
}
