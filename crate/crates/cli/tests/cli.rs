use std::collections::BTreeSet;
use std::process::{Command, Output};

fn tlaction(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlaction")).args(args).env_remove("TLACTION_FUEL").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn act_on_z_is_injective() {
    let o = tlaction(&["act", "--group", "Z", "--steps", "3"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 7);
    let words: BTreeSet<&str> = lines.iter().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(words.len(), 7);
}

#[test]
fn act_zero_steps_is_identity() {
    let o = tlaction(&["act", "--group", "Z2", "--steps", "0"]);
    assert_eq!(stdout(&o), "0\t1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(tlaction(&["act", "--group", "NoSuchGroup"]).status.code(), Some(2));
    assert_eq!(tlaction(&["act", "--J", "0"]).status.code(), Some(2));
    assert_eq!(tlaction(&["verify", "--group", "Z2", "--suite", "stallings"]).status.code(), Some(2));
    assert_eq!(tlaction(&["act", "--fuel", "5", "--steps", "3"]).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_tlaction")).args(["act", "--steps", "3"]).env("TLACTION_FUEL", "5").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(tlaction(&["psi", "--range", "1", "--radius", "3"]).status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let o = tlaction(&["verify", "--suite", "paths"]);
    assert!(o.status.success());
    let r = json(&o);
    assert_eq!(r["failures"], 0);
    assert!(r["passes"].as_u64().unwrap() > 0);
    let o = tlaction(&["verify", "--suite", "all", "--group", "Z2"]);
    assert!(o.status.success());
    let r = json(&o);
    let names: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"thm-t2-bound-3"));
    for key in ["checks", "passes", "failures", "runtime"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "all", "--group", "Z2", "--seed", "17"];
    let (a, b) = (tlaction(&args), tlaction(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, tlaction(&["verify", "--suite", "all", "--group", "Z2", "--seed", "18"]).stdout);
}

#[test]
fn exports() {
    let dot = stdout(&tlaction(&["export", "dot", "--group", "Z2", "--radius", "2"]));
    assert_eq!(dot.lines().filter(|l| l.contains("label=")).count(), 13);
    let visited = json(&tlaction(&["export", "visited", "--stages", "10"]));
    assert!(visited.as_array().unwrap().len() >= 11);
    let patch = json(&tlaction(&["export", "patch", "--radius", "0"]));
    assert_eq!(patch["domain"], serde_json::json!(["1"]));
    assert_eq!(patch["B"].as_array().unwrap().len(), 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("tlaction-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("act.txt");
    let o = tlaction(&["act", "--steps", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn psi_then_subshift_check() {
    let dir = std::env::temp_dir().join(format!("tlaction-psi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("psi.json");
    let o = tlaction(&["psi", "--range", "10", "--radius", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let r = json(&tlaction(&["subshift-check", path.to_str().unwrap()]));
    assert_eq!(r["verdict"], "false-so-far");

    let mut patch: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let n = patch["A"].as_array().unwrap().len();
    patch["A"] = serde_json::json!(vec!["circle"; n]);
    std::fs::write(&path, patch.to_string()).unwrap();
    assert_eq!(json(&tlaction(&["subshift-check", path.to_str().unwrap()]))["forbidden"], true);

    patch.as_object_mut().unwrap().remove("A");
    patch["B"][0] = serde_json::json!(["1", "1"]);
    std::fs::write(&path, patch.to_string()).unwrap();
    let r = json(&tlaction(&["subshift-check", path.to_str().unwrap()]));
    assert_eq!((r["shift"].as_str(), r["forbidden"].as_bool()), (Some("X_J"), Some(true)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn group_from_config_file() {
    let dir = std::env::temp_dir().join(format!("tlaction-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z.json");
    std::fs::write(
        &path,
        r#"{"name": "line", "generators": ["x"], "strategy": {"kind": "abelian", "rank": 1}, "ends": "two",
            "certificate": {"separator": ["1"], "side_a": ["x"], "side_b": ["X"]}}"#,
    )
    .unwrap();
    let o = tlaction(&["act", "--group", path.to_str().unwrap(), "--steps", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 5);
    std::fs::remove_dir_all(&dir).unwrap();
}
