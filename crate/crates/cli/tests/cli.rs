use std::process::{Command, Output};

use cotype_zeta::exact::{rat_equal, vars, MPoly};
use cotype_zeta::{CountTable, FormulaId, LaurentQ, RatFun};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cotype-zeta"))
        .args(args)
        .env_remove("COTYPE_ZETA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    v
}

#[test]
fn closed_counts_for_n2() {
    let o = run(&[
        "count", "--ring", "zp:2", "--n", "2", "--max-e", "3", "--closed",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1,3,4,6"), "{}", stdout(&o));
}

#[test]
fn count_json_round_trips() {
    let v = json(&[
        "count", "--ring", "zp:3", "--n", "3", "--max-e", "3", "--closed", "--json",
    ]);
    let t = CountTable::from_json(&v).unwrap();
    assert_eq!(t.ring, "zp:3");
    let idx: Vec<String> = t.by_index(3).iter().map(u64::to_string).collect();
    let listed: Vec<String> = v["by_index"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert_eq!(idx, listed);
    assert_eq!(CountTable::from_json(&t.to_json()).unwrap(), t);
}

#[test]
fn count_over_power_series_ring() {
    let a = json(&[
        "count", "--ring", "zp:2", "--n", "3", "--max-e", "3", "--closed", "--json",
    ]);
    let b = json(&[
        "count", "--ring", "fq:2:1", "--n", "3", "--max-e", "3", "--closed", "--json",
    ]);
    assert_eq!(a["entries"], b["entries"]);
}

#[test]
fn theta_example() {
    let o = run(&["theta", "--n", "2", "--iota", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
    let v = json(&[
        "theta", "--n", "5", "--iota", "2", "--direct", "--q", "3", "--json",
    ]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["theta"], v["direct"]["value"]);
}

#[test]
fn formula_json_round_trips() {
    let v = json(&["formula", "--id", "xi12P", "--json"]);
    assert_eq!(v["id"], "xi12P");
    let f = RatFun::from_json(&v).unwrap();
    assert!(rat_equal(&f, &FormulaId::Xi12P.resolve().unwrap()));
}

#[test]
fn expand_cotype_o4() {
    let v = json(&[
        "expand",
        "--id",
        "cotypeO4",
        "--max-total",
        "7",
        "--q",
        "2",
        "--json",
    ]);
    let poly = MPoly::from_json(&vars(&["x", "y", "z"]), &v["terms"]).unwrap();
    assert_eq!(poly.coeff(&[1, 0, 0]), LaurentQ::constant(6));
    let at = |m: [u32; 3]| {
        v["values"]
            .as_array()
            .unwrap()
            .iter()
            .find(|t| t["m"] == serde_json::json!(m))
            .map(|t| t["value"].as_str().unwrap().to_string())
    };
    assert_eq!(at([0, 0, 0]).as_deref(), Some("1"));
    assert_eq!(at([1, 0, 0]).as_deref(), Some("6"));
    // non-descending exponents are not cotypes
    assert_eq!(at([0, 1, 0]), None);
    let text = stdout(&run(&[
        "expand",
        "--id",
        "cotypeO4",
        "--max-total",
        "7",
        "--q",
        "2",
    ]));
    assert!(text.contains("[1, 0, 0]\t6\t= 6"), "{text}");
}

#[test]
fn verify_identities() {
    let o = run(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("[PASS]").count(), 5, "{text}");
    assert!(!text.contains("[FAIL]"));
    let v = json(&["verify", "--suite", "poles", "--json"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_s_lemma_with_parameters() {
    let v = json(&[
        "verify",
        "--suite",
        "s-lemma",
        "--p",
        "2",
        "--max-val",
        "2",
        "--json",
    ]);
    assert_eq!(v["pass"], true);
    let label = v["suites"][0]["checks"][0]["label"].as_str().unwrap();
    assert!(label.contains("p=2") && label.contains("v_i<=2"), "{label}");
    let o = run(&["verify", "--suite", "identities", "--max-val", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn poles_json() {
    let v = json(&["poles", "--n", "7", "--json"]);
    let r = &v["reports"][0];
    assert_eq!(
        (r["argmax"].as_u64(), r["max"].as_str()),
        (Some(3), Some("6/5"))
    );
    let v = json(&["poles", "--n", "7", "--to", "100", "--json"]);
    assert_eq!(v["reports"].as_array().unwrap().len(), 94);
    assert_eq!(v["asymptote"]["within"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn flag_commands() {
    let v = json(&["tau", "--n", "3", "--I", "1,2", "--q", "2", "--json"]);
    assert_eq!(
        (v["sum"].as_str(), v["pass"].as_bool()),
        (Some("21"), Some(true))
    );
    let o = run(&["tau", "--n", "3", "--I", "1,2", "--q", "3", "--table"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&[
        "reduced-count",
        "--n",
        "4",
        "--I",
        "1,3",
        "--q",
        "4",
        "--json",
    ]);
    assert_eq!(v["count"], v["multinomial"]);
}

#[test]
fn slemma_with_oracle() {
    let v = json(&[
        "slemma", "--q", "2", "--res", "0,0,0", "--vals", "0,0,2,0", "--oracle", "--p", "2",
        "--json",
    ]);
    assert_eq!(
        (v["case"].as_u64(), v["value"].as_str()),
        (Some(1), Some("1/16"))
    );
    assert_eq!(v["oracle"], v["value"]);
    assert_eq!(
        LaurentQ::from_json(&v["closed"]).unwrap(),
        LaurentQ::q_pow(-4)
    );
    let v = json(&[
        "slemma", "--q", "4", "--res", "1,2,3", "--vals", "1,2,3,1", "--oracle", "--json",
    ]);
    assert_eq!(v["pass"], true);
}

#[test]
fn recursion_small() {
    let v = json(&[
        "recursion",
        "--ring",
        "zp:3",
        "--n",
        "3",
        "--max-e",
        "3",
        "--json",
    ]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["count", "--n", "2", "--max-e", "2", "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["count", "--ring", "zp:4", "--n", "2", "--max-e", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["formula", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(
        run(&["slemma", "--q", "2", "--res", "0,0,0", "--vals", "0,0,0,0"])
            .status
            .code(),
        Some(2)
    );
    let o = run(&["--max-work", "1000", "count", "--n", "4", "--max-e", "9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("max-work"));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn threads_flag_and_env() {
    let o = run(&[
        "--threads",
        "2",
        "count",
        "--n",
        "2",
        "--max-e",
        "3",
        "--closed",
    ]);
    assert!(stdout(&o).contains("1,3,4,6"));
    let o = Command::new(env!("CARGO_BIN_EXE_cotype-zeta"))
        .args(["count", "--n", "2", "--max-e", "3", "--closed"])
        .env("COTYPE_ZETA_THREADS", "1")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("1,3,4,6"));
    let o = Command::new(env!("CARGO_BIN_EXE_cotype-zeta"))
        .args(["theta", "--n", "2", "--iota", "1"])
        .env("COTYPE_ZETA_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
