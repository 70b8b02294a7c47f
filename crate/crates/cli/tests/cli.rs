use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gridlab::graph::make_diag_cube;
use serde_json::Value;

fn gridlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect()
}

fn generate_to(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = gridlab(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generated_cubes() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = read_json(&generate_to(dir.path(), "q3.json", &["cube", "--n", "3"]));
    assert_eq!(q3["n"], 27);
    assert_eq!(q3["coords"].as_array().unwrap().len(), 27);

    let d2 = read_json(&generate_to(dir.path(), "d2.json", &["diagcube", "--n", "2"]));
    let edges: Vec<[usize; 2]> = serde_json::from_value(d2["edges"].clone()).unwrap();
    let expected: Vec<[usize; 2]> = make_diag_cube(2).unwrap().graph.edges().map(|(u, v)| [u, v]).collect();
    assert_eq!(edges.len(), 19);
    assert_eq!(edges, expected);
}

#[test]
fn flipped_cube_replays_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["flipped-cube", "--n", "4", "--k", "2", "--seed", "7"];
    let a = generate_to(dir.path(), "a.json", &args);
    let b = generate_to(dir.path(), "b.json", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let input = a.to_str().unwrap();
    for lemma in ["small-dist", "connected", "component-diameter", "diameter-bound"] {
        let out = gridlab(&["verify", lemma, "--input", input]);
        assert_eq!(code(&out), 0, "{lemma}: {}", String::from_utf8_lossy(&out.stderr));
        for rec in lines(&out) {
            assert_eq!(rec["status"], "pass", "{lemma}");
            assert_eq!(rec["config"]["seed"], 0);
            assert!(rec.get("realized_bound").is_some());
        }
    }
}

#[test]
fn cube_extraction_checks() {
    let dir = tempfile::tempdir().unwrap();
    // small parts: two parts of Q_9 with the first one tiny
    let f = generate_to(
        dir.path(),
        "f.json",
        &[
            "flipped-cube",
            "--n",
            "9",
            "--k",
            "2",
            "--min-part",
            "1",
            "--isolated",
            "2",
            "--seed",
            "3",
        ],
    );
    let mut doc = read_json(&f);
    let part_of = doc["part_of"].as_array_mut().unwrap();
    for (v, p) in part_of.iter_mut().enumerate() {
        *p = Value::from(if v < 5 { 1 } else { 2 });
    }
    std::fs::write(&f, doc.to_string()).unwrap();
    let out = gridlab(&["verify", "avoid-subcube", "--input", f.to_str().unwrap(), "--part", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[0]["notes"]["side"], 3);

    // both parts isolated, so the whole cube is unaffected
    let out = gridlab(&[
        "verify",
        "induced-subgrid",
        "--input",
        f.to_str().unwrap(),
        "--vertex",
        "40",
        "--radius",
        "6",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[0]["notes"]["side"], 2);
}

#[test]
fn condition_i_violation_on_transduced_cube() {
    let dir = tempfile::tempdir().unwrap();
    let q4 = generate_to(dir.path(), "q4.json", &["cube", "--n", "4", "--mod3-colors"]);
    let d4 = dir.path().join("d4.json");
    let out = gridlab(&[
        "transduce",
        "--input",
        q4.to_str().unwrap(),
        "--diag",
        "--out",
        d4.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let d4s = d4.to_str().unwrap();

    let out = gridlab(&[
        "verify",
        "condition-i",
        "--input",
        d4s,
        "--cube-embedding",
        "layering",
        "--d",
        "1",
    ]);
    assert_eq!(code(&out), 1);
    let rec = &lines(&out)[0];
    assert_eq!(rec["status"], "fail");
    assert_eq!(rec["witness"]["kind"], "edge");

    let out = gridlab(&[
        "verify",
        "condition-i",
        "--input",
        d4s,
        "--cube-embedding",
        "layering",
        "--d",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let out = gridlab(&[
        "verify",
        "condition-i",
        "--input",
        d4s,
        "--cube-embedding",
        "fiber",
        "--d",
        "1",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn product_slices() {
    let dir = tempfile::tempdir().unwrap();
    let emb = dir.path().join("emb.json");
    let g = generate_to(
        dir.path(),
        "g.json",
        &[
            "product",
            "--h",
            "cycle:4",
            "--p",
            "6",
            "--embedding-out",
            emb.to_str().unwrap(),
        ],
    );
    let (g, emb) = (g.to_str().unwrap(), emb.to_str().unwrap());
    let out = gridlab(&[
        "verify",
        "locality-window",
        "--input",
        g,
        "--embedding",
        emb,
        "--formula",
        "dist(x,y)<=2 & !(x=y)",
        "--d",
        "2",
        "--r",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out).len(), 6);

    let out = gridlab(&["verify", "condition-ii", "--input", g, "--embedding", emb, "--k", "2"]);
    assert_eq!(code(&out), 0);
    let recs = lines(&out);
    assert_eq!(recs.len(), 5);
    assert!(recs.iter().all(|r| r["notes"]["tw"] == serde_json::json!([5, 5])));

    let out = gridlab(&["verify", "tw-product", "--input", g, "--k", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn experiments() {
    let out = gridlab(&["experiment", "diag-pipeline", "--n-min", "3", "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    let rec = &lines(&out)[0];
    assert_eq!(rec["status"], "pass");
    assert_eq!(rec["realized_bound"]["finite"], 3);

    let out = gridlab(&["experiment", "slice-split", "--n", "2", "--d", "2"]);
    let recs = lines(&out);
    let summary = recs.last().unwrap();
    assert_eq!(summary["notes"]["a1"], 0);
    assert_eq!(summary["notes"]["tw_a2"], recs[0]["notes"]["tw"]);

    let out = gridlab(&["experiment", "bipartition-sample", "--n", "2"]);
    let recs = lines(&out);
    assert_eq!(recs.len(), 257);
    assert_eq!(recs[256]["exhaustive"], true);
    let again = gridlab(&["--jobs", "2", "experiment", "bipartition-sample", "--n", "2"]);
    let strip = |v: &Vec<Value>| -> Vec<Value> {
        v.iter()
            .map(|r| {
                let mut r = r.clone();
                r.as_object_mut().unwrap().remove("config");
                r
            })
            .collect()
    };
    assert_eq!(strip(&recs), strip(&lines(&again)));
}

#[test]
fn width_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = generate_to(dir.path(), "k4.json", &["product", "--h", "complete:4", "--p", "1"]);
    let out = gridlab(&["width", "--input", k4.to_str().unwrap()]);
    let rec = &lines(&out)[0];
    assert_eq!((rec["lower"].clone(), rec["upper"].clone()), (3.into(), 3.into()));
    assert_eq!(rec["certificate"]["type"], "tree_decomposition");
    let out = gridlab(&["width", "--input", k4.to_str().unwrap(), "--kind", "cw"]);
    let rec = &lines(&out)[0];
    assert_eq!(rec["upper"], 2);
    assert_eq!(rec["exact"], true);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"edges\": [[0,1]").unwrap();
    let out = gridlab(&["verify", "connected", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
    assert_eq!(code(&gridlab(&["verify", "no-such-lemma", "--input", "x"])), 2);
    assert_eq!(code(&gridlab(&["generate", "cube", "--n", "0"])), 2);
    assert_eq!(code(&gridlab(&["width", "--input", "/nonexistent.json"])), 2);
}
