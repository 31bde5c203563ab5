use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

const PATH3: &str = r#"{"m":1,"lists":[[1,2,3,4],[3,4,5,6],[5,6,7,8]]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listchrom"))
        .args(args)
        .env("LISTCHROM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    let line = stdout.lines().next().unwrap_or_else(|| panic!("no stdout; stderr: {}", String::from_utf8_lossy(&out.stderr)));
    serde_json::from_str(line).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("listchrom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_spec_reports_case() {
    let out = run(&["classify", "--spec", r#"{"theta":[2,4,4]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "classify");
    assert_eq!(r["outcome"], "ok");
    assert_eq!(r["payload"]["classification"]["kind"], "threeChoiceCritical");
    assert_eq!(r["payload"]["vertices"], 9);
    assert_eq!(r["inputDigest"].as_str().unwrap().len(), 64);
}

#[test]
fn classify_explicit_instance() {
    // C4 given by adjacency
    let file = temp_file(
        "c4.json",
        r#"{"graph":{"adjacency":[[1,3],[0,2],[1,3],[0,2]]},"lists":{"0":[1,2],"1":[1,2],"2":[1,2],"3":[1,2]}}"#,
    );
    let out = run(&["classify", "--instance", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["payload"]["edges"], 4);
}

#[test]
fn path_check_colours_when_possible() {
    let out = run(&["path-check", "--path", PATH3, "--colour"]);
    assert_eq!(out.status.code(), Some(0));
    let p = &report(&out)["payload"];
    assert_eq!(p["colourable"], true);
    assert_eq!(p["profile"]["sL"], 8);
    assert_eq!(p["demand"], 6);
    let chosen: Vec<Vec<u32>> = serde_json::from_value(p["colouring"].clone()).unwrap();
    assert_eq!(chosen.len(), 3);
    assert!(chosen.iter().all(|c| c.len() == 2));
}

#[test]
fn path_check_large_ids_round_trip() {
    let path = r#"{"m":1,"lists":[[100,200,300,400],[300,400,500,600],[500,600,700,800]]}"#;
    let out = run(&["path-check", "--path", path, "--colour"]);
    assert_eq!(out.status.code(), Some(0));
    let chosen: Vec<Vec<u32>> = serde_json::from_value(report(&out)["payload"]["colouring"].clone()).unwrap();
    assert!(chosen[0].iter().all(|c| [100, 200, 300, 400].contains(c)));
    assert!(chosen[2].iter().all(|c| [500, 600, 700, 800].contains(c)));
}

#[test]
fn path_check_from_file_matches_inline() {
    let file = temp_file("path3.json", PATH3);
    let a = report(&run(&["path-check", "--file", file.to_str().unwrap()]));
    let b = report(&run(&["path-check", "--path", PATH3]));
    assert_eq!(a["payload"], b["payload"]);
}

#[test]
fn colour_spec_is_valid_and_deterministic() {
    let args = ["colour", "--spec", r#"{"twoCyclesJoined":{"p":4,"q":4,"pathLen":2}}"#, "--m", "1", "--seed", "11"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let r1 = report(&first);
    let r2 = report(&run(&args));
    assert_eq!(r1["payload"]["valid"], true);
    assert_eq!(r1["payload"]["colouring"], r2["payload"]["colouring"]);
    assert_eq!(r1["inputDigest"], r2["inputDigest"]);
}

#[test]
fn colour_instance_file() {
    let lists: serde_json::Map<String, Value> =
        (0..7).map(|v| (v.to_string(), json!([1, 2, 3, 4]))).collect();
    let contents = json!({"graph": {"twoCyclesShared": {"p": 4, "q": 4}}, "a": 4, "lists": lists}).to_string();
    let file = temp_file("shared.json", &contents);
    let out = run(&["colour", "--instance", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let chosen = &report(&out)["payload"]["colouring"]["chosen"];
    assert_eq!(chosen.as_object().unwrap().len(), 7);
}

#[test]
fn unsupported_family_exits_two() {
    let out = run(&["colour", "--spec", r#"{"theta":[3,3,3]}"#, "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported"));
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(run(&["path-check", "--path", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--spec", r#"{"theta":[1]}"#]).status.code(), Some(2));
    assert_eq!(run(&["verify", "lemma99"]).status.code(), Some(2));
}

#[test]
fn dam_routes_agree() {
    let out = run(&["dam", "--path", PATH3, "--s", "[1,2]", "--t", "[7,8]"]);
    assert_eq!(out.status.code(), Some(0));
    let p = &report(&out)["payload"];
    assert_eq!(p["damage"], 4);
    assert_eq!(p["closedForm"], 4);
}

#[test]
fn bad_sets_outcomes() {
    let out = run(&["bad-sets", "--path", PATH3, "--w", "[1,2,3,4]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"], "ok");
    assert_eq!(r["payload"]["bound"], 3);

    // short interior list: S_L equals the demand, so every 2-set is bad,
    // but the bound does not apply to lists narrower than 4m
    let narrow = r#"{"m":1,"lists":[[1,2,3,4],[1,2],[1,2,3,4]]}"#;
    let out = run(&["bad-sets", "--path", narrow, "--w", "[1,2,3,4]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"], "inconclusive");
}

#[test]
fn verify_small_run() {
    let out = run(&["verify", "lemma8", "--seed", "3", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"], "ok");
    assert_eq!(r["payload"]["violations"], 0);
    assert_eq!(r["payload"]["trials"], 200);
    let again = report(&run(&["verify", "lemma8", "--seed", "3", "--trials", "200"]));
    assert_eq!(r["payload"], again["payload"]);
}
