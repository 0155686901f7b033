//! End-to-end runs of the compiled binary: documented examples, exit-code
//! contract, JSON round-trips, and the tampered-certificate path.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn interlace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interlace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn dist_examples() {
    let v = stdout_json(&interlace(&["dist", "--a", "1,3", "--b", "2,4"]));
    assert_eq!(v["d"], 1);
    assert_eq!(v["adjacent"], true);

    // The empty set neighbors every singleton.
    let v = stdout_json(&interlace(&["dist", "--a", "", "--b", "5"]));
    assert_eq!(v["d"], 1);
    assert_eq!(v["adjacent"], true);

    let v = stdout_json(&interlace(&["dist", "--a", "1,2", "--b", "1,2"]));
    assert_eq!(v["d"], 0);
    assert_eq!(v["adjacent"], false);
}

#[test]
fn dist_oracle_adds_the_bfs_route() {
    let v = stdout_json(&interlace(&["dist", "--a", "1,3,4", "--b", "2", "--oracle"]));
    assert_eq!(v["d"], v["bfs"]);
}

#[test]
fn malformed_set_is_a_usage_error() {
    let out = interlace(&["dist", "--a", "3,2", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = interlace(&["dist", "--a", "0", "--b", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geodesic_stays_in_cardinality() {
    let v = stdout_json(&interlace(&["geodesic", "--a", "1,2,3", "--b", "2,3,4"]));
    assert_eq!(v["length"], 1);
    let path = v["path"].as_array().unwrap();
    assert_eq!(path.first().unwrap(), &serde_json::json!([1, 2, 3]));
    assert_eq!(path.last().unwrap(), &serde_json::json!([2, 3, 4]));
    for vertex in path {
        assert_eq!(vertex.as_array().unwrap().len(), 3);
    }
}

fn two_point_metric_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"labels":["p","q"],"dist":[["0","2"],["2","0"]]}}"#).unwrap();
    f
}

#[test]
fn embed_two_point_space() {
    let metric = two_point_metric_file();
    let v = stdout_json(&interlace(&[
        "embed",
        "--metric",
        metric.path().to_str().unwrap(),
        "--epsilon",
        "1/2",
        "--verify",
    ]));
    assert_eq!(v["k"], 7);
    assert_eq!(v["scale"], 2);
    assert_eq!(v["distortion"], "1");
    assert_eq!(v["bound_k"], 17);
    assert_eq!(v["certified"], true);
    assert_eq!(v["sets"]["p"].as_array().unwrap().len(), 7);
}

#[test]
fn embed_rejects_epsilon_out_of_range() {
    let metric = two_point_metric_file();
    let out = interlace(&[
        "embed",
        "--metric",
        metric.path().to_str().unwrap(),
        "--epsilon",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EPSILON_OUT_OF_RANGE"));
}

#[test]
fn verify_round_trip_and_tampering() {
    let metric = two_point_metric_file();
    let result = tempfile::NamedTempFile::new().unwrap();
    let out = interlace(&[
        "embed",
        "--metric",
        metric.path().to_str().unwrap(),
        "--epsilon",
        "1/4",
        "--output",
        result.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let out = interlace(&[
        "verify",
        "--metric",
        metric.path().to_str().unwrap(),
        "--result",
        result.path().to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["certified"], true);

    // Shift one set far to the right. Cardinality and the ratio spread
    // survive, but the set distance blows past scale times the metric
    // distance, so the recomputed certificate must fail and the exit code
    // must say so.
    let text = std::fs::read_to_string(result.path()).unwrap();
    let mut stored: Value = serde_json::from_str(&text).unwrap();
    let set = stored["sets"]["p"].as_array_mut().unwrap();
    for e in set.iter_mut() {
        *e = Value::from(e.as_u64().unwrap() + 1000);
    }
    std::fs::write(result.path(), stored.to_string()).unwrap();

    let out = interlace(&[
        "verify",
        "--metric",
        metric.path().to_str().unwrap(),
        "--result",
        result.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certified"], false);
    assert!(!v["errors"].as_array().unwrap().is_empty());
}

#[test]
fn verify_parallel_matches_serial() {
    let metric = {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            r#"{{"labels":["a","b","c","d"],"dist":[["0","2","3","4"],["2","0","2","3"],["3","2","0","2"],["4","3","2","0"]]}}"#
        )
        .unwrap();
        f
    };
    let result = tempfile::NamedTempFile::new().unwrap();
    let out = interlace(&[
        "embed",
        "--metric",
        metric.path().to_str().unwrap(),
        "--epsilon",
        "1/10",
        "--output",
        result.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let serial = stdout_json(&interlace(&[
        "verify",
        "--metric",
        metric.path().to_str().unwrap(),
        "--result",
        result.path().to_str().unwrap(),
    ]));
    let parallel = stdout_json(&interlace(&[
        "verify",
        "--metric",
        metric.path().to_str().unwrap(),
        "--result",
        result.path().to_str().unwrap(),
        "--jobs",
        "4",
    ]));
    assert_eq!(serial, parallel);
}

#[test]
fn schreier_member_example() {
    let v = stdout_json(&interlace(&[
        "schreier", "member", "--alpha", "w", "--set", "3,4,5",
    ]));
    assert_eq!(v["member"], true);
    // min {1,2} = 1 allows only S_1, which caps the size at one.
    let v = stdout_json(&interlace(&[
        "schreier", "member", "--alpha", "w", "--set", "1,2",
    ]));
    assert_eq!(v["member"], false);
}

#[test]
fn schreier_noncanonical_ordinal_warns() {
    let out = interlace(&["schreier", "member", "--alpha", "1+w", "--set", "2,3"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not in canonical form"), "stderr: {err}");
}

#[test]
fn schreier_enum_and_spread() {
    let v = stdout_json(&interlace(&["schreier", "enum", "--alpha", "1", "--n", "4"]));
    assert_eq!(v["count"], 8);

    let v = stdout_json(&interlace(&[
        "schreier", "spread", "--alpha", "1", "--beta", "2", "--n", "3",
    ]));
    assert_eq!(v["valid"], true);

    let v = stdout_json(&interlace(&[
        "schreier", "spread", "--alpha", "1", "--beta", "2", "--n", "3", "--list", "1,2,3",
    ]));
    assert_eq!(v["valid"], true);
}

#[test]
fn rank_of_a_two_node_tree() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "[[],[1]]").unwrap();
    let v = stdout_json(&interlace(&["rank", "--tree", f.path().to_str().unwrap()]));
    assert_eq!(v["rank"], 2);

    let out = interlace(&["rank"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn glue_demo_is_clean_and_reproducible() {
    let args = [
        "glue-demo", "--dim", "2", "--ladder", "12", "--samples", "60", "--seed", "11",
    ];
    let first = interlace(&args);
    let v = stdout_json(&first);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 60);
    let second = interlace(&args);
    assert_eq!(first.stdout, second.stdout);

    let mut parallel_args: Vec<&str> = args.to_vec();
    parallel_args.extend(["--jobs", "3"]);
    let parallel = interlace(&parallel_args);
    assert_eq!(first.stdout, parallel.stdout);
}

#[test]
fn points_at_level_zero() {
    let v = stdout_json(&interlace(&["points", "--alpha", "0", "--n", "2", "--m", "1"]));
    assert_eq!(v["count"], 5);
    // The zero point serializes as the empty object.
    assert!(v["points"].as_array().unwrap().contains(&serde_json::json!({})));
}

#[test]
fn pretty_output_is_text() {
    let out = interlace(&["--pretty", "dist", "--a", "1,3", "--b", "2,4"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("adjacent"), "got: {text}");
    assert!(serde_json::from_str::<Value>(&text).is_err(), "pretty must not be JSON");
}
