use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const P1: &str = r#"{"props":["p","q"],
 "worlds":[{"id":"w1","assign":{"p":true}},{"id":"w2","assign":{"p":true,"q":true}},{"id":"w3"}],
 "measure":{"type":"credal","measures":[["1/3","2/3","0"],["0","1/3","2/3"],["2/3","0","1/3"]]}}"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.stdout))
    }
}

fn expecta(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_expecta")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_reports_credal_bounds() {
    let model = temp_file("p1.json", P1);
    let run = expecta(&["eval", "--model", model.to_str().unwrap(), "--gamble", "1*p + 1*q"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json();
    assert_eq!(v["lower"], "2/3");
    assert_eq!(v["upper"], "5/3");
    assert_eq!(v["semantics"], "lowerprob");
}

#[test]
fn eval_reports_formula_truth() {
    let model = temp_file("p1-formula.json", P1);
    let m = model.to_str().unwrap();
    assert_eq!(expecta(&["eval", "--model", m, "2*E(p + q) > 1"]).json()["holds"], true);
    assert_eq!(expecta(&["eval", "--model", m, "2*E(p + q) < 1"]).json()["holds"], false);
    assert_eq!(expecta(&["eval", "--model", m, "--language", "qu", "L(p) >= 1/3"]).json()["holds"], true);
}

#[test]
fn sat_witnesses_round_trip_through_eval() {
    let cases = [
        ("lowerprob", "2*E(p + q) > 1"),
        ("lowerprob", "2*E(p + q) < 1 & E(p) > 0"),
        ("prob", "E(p) >= 1/2 & E(q) <= 1/4"),
        ("belief", "E(p|q) >= 1 & E(p) <= 0 & E(q) <= 0"),
        ("possibility", "E(p) + E(!p) > 3/2"),
    ];
    for (i, (sem, formula)) in cases.iter().enumerate() {
        let run = expecta(&["sat", "--semantics", sem, "--oracle", formula]);
        assert_eq!(run.code, 0, "{}", run.stderr);
        let v = run.json();
        assert_eq!(v["result"], "SAT", "{formula} under {sem}");
        let witness = temp_file(&format!("witness-{i}.json"), &v["witness"].to_string());
        let check = expecta(&["eval", "--model", witness.to_str().unwrap(), formula]);
        assert_eq!(check.code, 0, "{}", check.stderr);
        assert_eq!(check.json()["holds"], true, "{formula} under {sem}");
        assert_eq!(check.json()["semantics"], *sem);
    }
}

#[test]
fn unsat_and_validity() {
    assert_eq!(expecta(&["sat", "--semantics", "possibility", "E(p|q) >= 1 & E(p) <= 0 & E(q) <= 0"]).json()["result"], "UNSAT");
    assert_eq!(expecta(&["valid", "--semantics", "prob", "E(true) = 1"]).json()["result"], "VALID");
    let invalid = expecta(&["valid", "--semantics", "lowerprob", "E(p + q) - E(p) - E(q) <= 0"]).json();
    assert_eq!(invalid["result"], "INVALID");
    assert!(invalid["countermodel"]["measure"].is_object());
}

#[test]
fn gamble_and_function_formulas() {
    assert_eq!(expecta(&["gamble-sat", "!(p >= 0)"]).json()["result"], "UNSAT");
    let v = expecta(&["gamble-sat", "!(2*p - q >= 0)"]).json();
    assert_eq!(v["result"], "SAT");
    assert_eq!(v["witness"]["worlds"].as_array().unwrap().len(), 1);
    let f = expecta(&["func-sat", "!(v <= 0) & !(v >= 0)"]).json();
    assert_eq!(f["result"], "SAT");
    assert_eq!(f["witness"]["domain_size"], 2);
    assert_eq!(expecta(&["func-sat", "--as-reals", "!(v <= 0) & !(v >= 0)"]).json()["result"], "UNSAT");
}

#[test]
fn coherence_and_extension() {
    let doc = r#"{"model_space":{"props":["a","b"],"worlds":[{"id":"w1","assign":{"a":true}},{"id":"w2","assign":{"b":true}},{"id":"w3"}]},
                  "assessments":[{"gamble":"1*a + 2*b + 3*(!a & !b)","lower":"13/8"}]}"#;
    let path = temp_file("assessment.json", doc);
    let p = path.to_str().unwrap();
    assert_eq!(expecta(&["coherent", "--file", p]).json()["result"], "COHERENT");
    assert_eq!(expecta(&["extend", "--file", p, "--gamble", "1*a + 2*b + 3*(!a & !b)"]).json()["lower"], "13/8");

    let bad = r#"{"model_space":{"props":["a"]},"assessments":[{"gamble":"0*true","lower":1}]}"#;
    let path = temp_file("sure-loss.json", bad);
    let v = expecta(&["coherent", "--file", path.to_str().unwrap()]).json();
    assert_eq!(v["result"], "INCOHERENT");
    // The sure loss shows up at the 0̃ anchor, which the assessed item undercuts.
    assert_eq!(v["index"], 1);
    let ext = expecta(&["extend", "--file", path.to_str().unwrap(), "--gamble", "a"]);
    assert_eq!(ext.code, 1);
}

#[test]
fn translations() {
    assert_eq!(expecta(&["translate", "--form", "t1", "2*E(p + 3*q) >= 1"]).json()["formula"], "2*E(1*p) + 6*E(1*q) >= 1");
    assert_eq!(expecta(&["translate", "--form", "qu", "L(p) - L(q) > 0"]).json()["formula"], "1*E(1*p) - 1*E(1*q) > 0");
    let t2 = expecta(&["translate", "--form", "t2", "E(2*p + 1*true) >= 2"]).json();
    assert_eq!(t2["formula"], "2*E(1*p) >= 1");
}

#[test]
fn model_validation() {
    let bad = r#"{"props":["p"],"measure":{"type":"probability","values":["1/2","1/3"]}}"#;
    let path = temp_file("bad.json", bad);
    let run = expecta(&["validate-model", "--model", path.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    let v = run.json();
    assert_eq!(v["valid"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["axiom"] == "sum ≠ 1"));
    let good = temp_file("good.json", P1);
    assert_eq!(expecta(&["validate-model", "--model", good.to_str().unwrap()]).json()["valid"], true);
    // Evaluating against an invalid model is an input error.
    assert_eq!(expecta(&["eval", "--model", path.to_str().unwrap(), "--gamble", "p"]).code, 1);
}

#[test]
fn exit_codes_and_text_output() {
    assert_eq!(expecta(&["sat", "--semantics", "prob", "E(p >= 1"]).code, 1);
    assert_eq!(expecta(&["sat", "--semantics", "prob", "L(p) >= 1"]).code, 1);
    assert_eq!(expecta(&["sat", "E(p) >= 1"]).code, 1);
    assert_eq!(expecta(&["bogus"]).code, 1);
    assert_eq!(expecta(&["sat", "--semantics", "prob", "E(a+b+c+d+e) >= 1"]).code, 1);
    assert_eq!(expecta(&["--help"]).code, 0);
    let text = expecta(&["--text", "gamble-sat", "p + !p >= 1"]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.lines().any(|l| l == "result: SAT"));
}

#[test]
fn formulas_from_files_and_dumps() {
    let path = temp_file("formula.txt", "E(p) >= 1/2 & E(!p) >= 1/2\n");
    let v = expecta(&["sat", "--semantics", "prob", "--dump-lp", "--file", path.to_str().unwrap()]).json();
    assert_eq!(v["result"], "SAT");
    assert_eq!(v["systems"].as_array().unwrap().len(), v["systems_solved"].as_u64().unwrap() as usize);
}

#[test]
fn output_is_deterministic() {
    let args = ["sat", "--semantics", "belief", "E(p|q) >= 1 & E(p) <= 0 & E(q) <= 0"];
    assert_eq!(expecta(&args).stdout, expecta(&args).stdout);
}
