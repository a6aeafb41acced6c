use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GRADINGS: &str = include_str!("../../core/data/local_gradings.csv");

fn knotwidth(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotwidth"))
        .env("KNOTWIDTH_CACHE_DIR", cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn without_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn report_8_19() {
    let dir = TempDir::new().unwrap();
    let out = knotwidth(dir.path(), &["report", "8_19"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["width"], 2);
    assert_eq!(r["genus"], 1);
    assert_eq!(r["state_count"], 27);
    assert_eq!(
        (r["V"].as_i64(), r["E"].as_i64(), r["F"].as_i64()),
        (Some(3), Some(8), Some(5))
    );
    assert_eq!(r["chi"], 0);
}

#[test]
fn report_small_diagrams() {
    let dir = TempDir::new().unwrap();
    let kink = json(&knotwidth(dir.path(), &["report", "PD[X(1,1,2,2)]"]));
    assert_eq!(
        (kink["width"].as_i64(), kink["genus"].as_i64()),
        (Some(1), Some(0))
    );
    assert_eq!(kink["state_count"], 1);
    let fig8 = json(&knotwidth(dir.path(), &["report", "4_1"]));
    assert_eq!(
        (fig8["width"].as_i64(), fig8["genus"].as_i64()),
        (Some(1), Some(0))
    );
}

#[test]
fn json_keys_are_sorted() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&knotwidth(dir.path(), &["report", "3_1"]));
    let keys: Vec<&str> = out
        .lines()
        .filter_map(|l| l.trim().strip_prefix('"'))
        .filter_map(|l| l.split_once('"').map(|(k, _)| k))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn cached_report_replays_identically() {
    let dir = TempDir::new().unwrap();
    let first = stdout(&knotwidth(dir.path(), &["report", "5_2"]));
    let second = stdout(&knotwidth(dir.path(), &["report", "5_2"]));
    assert_eq!(first, second);
    let results = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(results.lines().count(), 1);
    // A relabeled copy has the same canonical form and hits the same record.
    let relabeled = json(&knotwidth(
        dir.path(),
        &["report", "PD[X(2,6,3,5),X(4,2,5,1),X(6,4,1,3)]"],
    ));
    let trefoil = json(&knotwidth(dir.path(), &["report", "3_1"]));
    assert_eq!(without_timestamp(relabeled), without_timestamp(trefoil));
}

#[test]
fn marked_edge_report_agrees() {
    let dir = TempDir::new().unwrap();
    let plain = json(&knotwidth(dir.path(), &["report", "8_19"]));
    let marked = json(&knotwidth(
        dir.path(),
        &["report", "8_19", "--marked-edge", "7"],
    ));
    assert_eq!(plain["width"], marked["width"]);
    assert_eq!(plain["state_count"], marked["state_count"]);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["report", "PD[X(1,2,3)]"][..],
        &["report", "PD[X(1,1,2,3)]"],
        &["report", "no_such_knot"],
        &["table", "U"],
        &["report", "3_1", "--marked-edge", "99"],
        &["skein", "3_1", "--site", "3"],
        &["ingest", "/nonexistent/catalog.csv"],
    ] {
        let out = knotwidth(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unknot_table_explains_itself() {
    let dir = TempDir::new().unwrap();
    let out = knotwidth(dir.path(), &["table", "U"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no crossings"), "{err}");
    assert!(err.contains("A = M = 0"), "{err}");
}

#[test]
fn table_8_19_text() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&knotwidth(dir.path(), &["table", "8_19", "--text"]));
    let expected = [
        "A\\M | -6 | -5 | -4 | -3 | -2 | -1 | 0",
        " -3 |  1 |    |    |    |    |    |",
        " -2 |    |  2 |  1 |    |    |    |",
        " -1 |    |    |  3 |  3 |    |    |",
        "  0 |    |    |    |  3 |  4 |    |",
        "  1 |    |    |    |    |  3 |  3 |",
        "  2 |    |    |    |    |    |  2 | 1",
        "  3 |    |    |    |    |    |    | 1",
    ];
    assert_eq!(out.lines().collect::<Vec<_>>(), expected);
}

#[test]
fn table_3_1_is_one_diagonal() {
    let dir = TempDir::new().unwrap();
    let t = json(&knotwidth(dir.path(), &["table", "3_1"]));
    let cells = t["table"].as_array().unwrap();
    assert_eq!(cells.len(), 3);
    let diagonals: Vec<f64> = cells
        .iter()
        .map(|c| c["A"].as_f64().unwrap() - c["M"].as_f64().unwrap())
        .collect();
    assert!(diagonals.iter().all(|&d| d == diagonals[0]));
    assert_eq!(t["width"], 1);
}

#[test]
fn verify_everything() {
    let dir = TempDir::new().unwrap();
    let out = knotwidth(dir.path(), &["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["entries"], 84);
    let checks = v["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 8);
    for (name, c) in checks {
        assert_eq!(c["failed"], 0, "{name}");
        assert_eq!(c["passed"], 84, "{name}");
    }
}

#[test]
fn verify_selected_checks() {
    let dir = TempDir::new().unwrap();
    let out = knotwidth(
        dir.path(),
        &["verify", "--checks", "skein,width-genus", "--text"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("skein: 84 passed, 0 failed"));
    assert!(text.contains("width-genus: 84 passed, 0 failed"));
    assert!(!text.contains("eta-identity"));

    let bad = knotwidth(dir.path(), &["verify", "--checks", "not-a-check"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn corrupted_gradings_fail_the_eta_self_check() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, GRADINGS.replace("+,front,1,0", "+,front,2,0")).unwrap();
    let out = knotwidth(
        dir.path(),
        &["verify", "--gradings", path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["failures"][0]["check"], "eta-identity");
}

#[test]
fn failing_checks_name_a_reproduction() {
    // Consistent with the eta identity but not with the graded Euler
    // characteristic, so the failure surfaces per diagram.
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("shifted.csv");
    std::fs::write(&path, GRADINGS.replace("+,front,1,0", "+,front,3,2")).unwrap();
    let catalog = dir.path().join("one.csv");
    std::fs::write(
        &catalog,
        "name,pd,alternating\n3_1,\"PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]\",true\n",
    )
    .unwrap();
    let out = knotwidth(
        dir.path(),
        &[
            "verify",
            catalog.to_str().unwrap(),
            "--gradings",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    let f = &v["failures"][0];
    assert_eq!(f["check"], "euler-char-symmetry");
    assert_eq!(f["name"], "3_1");
    assert!(f["pd"].as_str().unwrap().starts_with("PD["));
}

#[test]
fn ingest_is_idempotent() {
    let dir = TempDir::new().unwrap();
    let first = json(&knotwidth(dir.path(), &["ingest"]));
    assert_eq!(first["entries"], 84);
    assert_eq!(first["new_records"], 84);
    let catalog = std::fs::read_to_string(dir.path().join("catalog.json")).unwrap();

    let second = json(&knotwidth(dir.path(), &["ingest"]));
    assert_eq!(second["new_records"], 0);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("catalog.json")).unwrap(),
        catalog
    );
    let results = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(results.lines().count(), 84);
}

#[test]
fn ingest_keeps_valid_rows() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("mixed.csv");
    std::fs::write(
        &path,
        "name,pd,alternating\n\
         kink,\"PD[X(1,1,2,2)]\",true\n\
         broken,\"PD[X(1,2,3,4)]\",false\n\
         trefoil,\"PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]\",yes\n",
    )
    .unwrap();
    let out = knotwidth(dir.path(), &["ingest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ingested"], 2);
    assert_eq!(v["rejected"].as_array().unwrap().len(), 1);
    assert_eq!(v["rejected"][0]["name"], "broken");
    assert!(String::from_utf8(out.stderr).unwrap().contains("broken"));

    // Ingested names resolve in later commands.
    let r = json(&knotwidth(dir.path(), &["report", "trefoil"]));
    assert_eq!(r["width"], 1);
}

#[test]
fn ingest_json_catalog() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(
        &path,
        r#"[{"name": "t", "pd": "PD[X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)]", "alternating": true, "known_width": 1}]"#,
    )
    .unwrap();
    let v = json(&knotwidth(dir.path(), &["ingest", path.to_str().unwrap()]));
    assert_eq!(v["ingested"], 1);
    assert_eq!(v["new_records"], 1);
}

#[test]
fn skein_kink_chain() {
    let dir = TempDir::new().unwrap();
    let out = knotwidth(
        dir.path(),
        &[
            "skein",
            "PD[X(1,5,2,4),X(2,4,3,3),X(6,6,1,5)]",
            "--site",
            "0",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["width_via_skein"], 1);
    assert_eq!(v["exact"], true);
    let r = &v["reports"][0];
    for (name, w) in [("L+", 1), ("L-", 1), ("L0", 0), ("Linf", 1)] {
        assert_eq!(r["diagrams"][name]["w_bar"], w, "{name}");
        assert!(r["diagrams"][name]["pd"]
            .as_str()
            .unwrap()
            .starts_with("PD["));
    }
    for k in ["chi", "g", "w"] {
        assert_eq!(r["residuals"][k], 0);
    }
}

#[test]
fn skein_all_sites() {
    let dir = TempDir::new().unwrap();
    let v = json(&knotwidth(dir.path(), &["skein", "8_19"]));
    assert_eq!(v["reports"].as_array().unwrap().len(), 8);
    assert_eq!(v["exact"], true);
    assert_eq!(v["width_via_skein"], 2);
}

#[test]
fn export_dot_graphs() {
    let dir = TempDir::new().unwrap();
    for graph in ["t1", "t2", "ribbon-a", "ribbon-b"] {
        let out = knotwidth(dir.path(), &["export-dot", "8_19", "--graph", graph]);
        assert_eq!(out.status.code(), Some(0), "{graph}");
        let dot = stdout(&out);
        assert!(dot.starts_with("graph \"8_19\" {"), "{dot}");
        assert_eq!(dot.matches(" -- ").count(), 8, "{graph}");
    }
    let path = dir.path().join("t.dot");
    let out = knotwidth(
        dir.path(),
        &[
            "export-dot",
            "3_1",
            "--graph",
            "t2",
            "-o",
            path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(path).unwrap().contains("--"));
}

#[test]
fn cache_dir_flag_overrides_environment() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let out = knotwidth(
        env_dir.path(),
        &[
            "report",
            "3_1",
            "--cache-dir",
            flag_dir.path().to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_dir.path().join("results.jsonl").exists());
    assert!(!env_dir.path().join("results.jsonl").exists());
}
