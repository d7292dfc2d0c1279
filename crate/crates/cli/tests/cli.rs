use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], cwd: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_treequiver"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().expect("exit code"),
        report,
        stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn a2() -> Value {
    json!({"vertices": ["a", "b"], "edges": [["a", "b"]]})
}

fn star() -> Value {
    json!({"base": a2(), "tree": {"vertices": ["r"], "edges": []}, "labeling": {"r": "b"}})
}

fn t1() -> Value {
    json!({"base": a2(), "tree": {"vertices": ["x", "r"], "edges": [["x", "r"]]}, "labeling": {"x": "a", "r": "b"}})
}

fn t2() -> Value {
    json!({
        "base": a2(),
        "tree": {"vertices": ["x", "y", "r"], "edges": [["x", "r"], ["y", "r"]]},
        "labeling": {"x": "a", "y": "a", "r": "b"}
    })
}

fn t2_filtration() -> Value {
    json!({
        "quiver": a2(),
        "graph": {"vertices": ["u", "w"], "edges": [["u", "w"]]},
        "vertex_values": {"u": "a", "w": "a"},
        "edge_values": [["u", "w", "b"]]
    })
}

fn path_quiver(n: usize) -> Value {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let edges: Vec<(String, String)> = (1..n).map(|i| (i.to_string(), (i + 1).to_string())).collect();
    json!({"vertices": vertices, "edges": edges})
}

fn v_shape() -> Value {
    json!({"vertices": ["a", "c", "r"], "edges": [["a", "r"], ["c", "r"]]})
}

fn summary(result: &Value) -> Vec<(String, String, u64)> {
    result["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["apex"].as_str().unwrap().to_string(),
                s["key"].as_str().unwrap().to_string(),
                s["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect()
}

fn t2_summary() -> Vec<(String, String, u64)> {
    vec![("a".into(), "(a)".into(), 1), ("b".into(), "(b(a))".into(), 1)]
}

#[test]
fn report_envelope() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "q.json", &a2());
    let r = run(&["validate", "q.json"], dir.path());
    assert_eq!(r.code, 0);
    let report = &r.report;
    assert_eq!(report["command"]["name"], "validate");
    assert_eq!(report["command"]["args"], json!(["validate", "q.json"]));
    assert_eq!(report["status"], "ok");
    assert_eq!(report["result"], json!({"kind": "quiver", "valid": true}));
    assert!(report["elapsed_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["inputs"][0]["path"], "q.json");
    assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(report["warnings"].as_array().unwrap().is_empty());
    assert!(report["error"].is_null());
    assert_eq!(r.stdout.lines().count(), 1);
}

#[test]
fn digests_follow_the_bytes() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, "{\"vertices\":[\"a\"],\"edges\":[]}").unwrap();
    let first = run(&["validate", "q.json"], dir.path()).report["inputs"][0]["sha256"].clone();
    assert_eq!(
        first,
        "84e11b986ebcc58e67831737fdf5b3ba4cea1d608c0f03911c296d2286a9f1f2"
    );
    std::fs::write(&path, "{\"vertices\": [\"a\"], \"edges\": []}").unwrap();
    let second = run(&["validate", "q.json"], dir.path()).report["inputs"][0]["sha256"].clone();
    assert_ne!(first, second);
}

#[test]
fn validate_reports_kinds_and_witnesses() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t.json", &t2());
    write(dir.path(), "f.json", &t2_filtration());
    assert_eq!(
        run(&["validate", "t.json"], dir.path()).report["result"]["kind"],
        "tree"
    );
    assert_eq!(
        run(&["validate", "f.json"], dir.path()).report["result"]["kind"],
        "filtration"
    );

    write(
        dir.path(),
        "cyc.json",
        &json!({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}),
    );
    let r = run(&["validate", "cyc.json"], dir.path());
    assert_eq!(r.code, 1);
    assert_eq!(r.report["status"], "invalid_input");
    assert_eq!(r.report["error"]["kind"], "cycle");
    let message = r.report["error"]["message"].as_str().unwrap();
    assert!(message.contains('a') && message.contains('b'), "{message}");
    assert!(r.stderr.contains("cycle"));

    let mut bad = t2_filtration();
    bad["edge_values"] = json!([["u", "w", "a"]]);
    bad["vertex_values"]["w"] = json!("b");
    write(dir.path(), "nonmono.json", &bad);
    let r = run(&["validate", "nonmono.json"], dir.path());
    assert_eq!(r.code, 1);
    assert_eq!(r.report["error"]["kind"], "non_monotone");
    let message = r.report["error"]["message"].as_str().unwrap();
    assert!(message.contains("u") && message.contains("w"), "{message}");
}

#[test]
fn exit_codes_on_error_corpus() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(d.join("malformed.json"), "{\"vertices\": [").unwrap();
    std::fs::write(d.join("array.json"), "[1, 2]").unwrap();
    write(
        d,
        "unknown_key.json",
        &json!({"vertices": ["a"], "edges": [], "colour": 1}),
    );
    write(d, "two_roots.json", &json!({"vertices": ["a", "b"], "edges": []}));
    write(d, "bad_id.json", &json!({"vertices": ["a b"], "edges": []}));
    write(d, "dup.json", &json!({"vertices": ["a", "a"], "edges": []}));
    write(d, "undeclared.json", &json!({"vertices": ["a"], "edges": [["a", "z"]]}));
    let mut off_base = t1();
    off_base["labeling"]["x"] = json!("b");
    write(d, "off_base.json", &off_base);
    write(d, "q.json", &a2());
    write(d, "t.json", &t2());

    let cases: &[(&[&str], &str)] = &[
        (&["validate", "missing.json"], "io"),
        (&["validate", "malformed.json"], "parse"),
        (&["validate", "array.json"], "parse"),
        (&["validate", "unknown_key.json"], "parse"),
        (&["validate", "two_roots.json"], "sink_count"),
        (&["validate", "bad_id.json"], "invalid_id"),
        (&["validate", "dup.json"], "duplicate_vertex"),
        (&["validate", "undeclared.json"], "undeclared_endpoint"),
        (&["validate", "off_base.json"], "edge_not_in_base"),
        (&["decompose", "q.json"], "wrong_kind"),
        (&["decompose", "t.json", "--kind", "filtration"], "wrong_kind"),
        (&["reduced", "t.json"], "wrong_kind"),
        (&["oracle", "t.json", "--prime", "4"], "unsupported_prime"),
        (&["oracle", "t.json", "--prime", "101"], "unsupported_prime"),
        (&["merge-invariant", "t.json"], "wrong_kind"),
    ];
    for (args, kind) in cases {
        let r = run(args, d);
        assert_eq!(r.code, 1, "{args:?}: {}", r.stdout);
        assert_eq!(r.report["error"]["kind"], *kind, "{args:?}");
    }
    for args in [
        &["frobnicate"][..],
        &["decompose"],
        &["gen", "--kind", "tree", "--size", "0"],
        &["--json", "--pretty", "validate", "q.json"],
    ] {
        assert_eq!(run(args, d).code, 1, "{args:?}");
    }
    assert_eq!(run(&["--help"], d).code, 0);
}

#[test]
fn decompose_examples() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "t2.json", &t2());
    write(d, "star.json", &star());
    write(d, "f.json", &t2_filtration());

    let r = run(&["decompose", "t2.json", "--kind", "tree"], d);
    assert_eq!(r.code, 0);
    assert_eq!(summary(&r.report["result"]), t2_summary());
    assert_eq!(r.report["result"]["dims"], json!({"a": 2, "b": 1}));

    let r = run(&["decompose", "star.json"], d);
    assert_eq!(
        summary(&r.report["result"]),
        vec![("b".to_string(), "(b)".to_string(), 1)]
    );

    let r = run(&["decompose", "f.json", "--kind", "filtration"], d);
    assert_eq!(r.code, 0);
    assert_eq!(summary(&r.report["result"]), t2_summary());
    assert_eq!(r.report["result"]["dims"], json!({"a": 2, "b": 1}));
}

#[test]
fn decompose_ignores_names_and_child_order() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let tree = json!({
        "base": {"vertices": ["p", "q", "r"], "edges": [["p", "q"], ["q", "r"]]},
        "tree": {"vertices": ["root", "m1", "m2", "l1", "l2", "l3"],
                 "edges": [["m1", "root"], ["m2", "root"], ["l1", "m1"], ["l2", "m1"], ["l3", "m2"]]},
        "labeling": {"root": "r", "m1": "q", "m2": "q", "l1": "p", "l2": "p", "l3": "p"}
    });
    let renamed = json!({
        "base": {"vertices": ["r", "q", "p"], "edges": [["q", "r"], ["p", "q"]]},
        "tree": {"vertices": ["z5", "z4", "z3", "z2", "z1", "z0"],
                 "edges": [["z5", "z3"], ["z4", "z2"], ["z3", "z0"], ["z1", "z2"], ["z2", "z0"]]},
        "labeling": {"z0": "r", "z2": "q", "z3": "q", "z1": "p", "z4": "p", "z5": "p"}
    });
    write(d, "a.json", &tree);
    write(d, "b.json", &renamed);
    let a = run(&["decompose", "a.json"], d).report;
    let b = run(&["decompose", "b.json"], d).report;
    assert_eq!(summary(&a["result"]), summary(&b["result"]));
    assert_eq!(a["result"]["dims"], b["result"]["dims"]);
    let expected: Vec<(String, String, u64)> = [("p", "(p)"), ("q", "(q(p))"), ("r", "(r(q(p)))")]
        .iter()
        .map(|&(apex, key)| (apex.to_string(), key.to_string(), 1))
        .collect();
    assert_eq!(summary(&a["result"]), expected);
    assert_eq!(a["result"]["dims"], json!({"p": 3, "q": 2, "r": 1}));
}

#[test]
fn emitted_summand_trees_round_trip() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "t2.json", &t2());
    let result = run(&["decompose", "t2.json"], d).report["result"].clone();
    for (i, s) in result["summands"].as_array().unwrap().iter().enumerate() {
        let name = format!("s{i}.json");
        write(d, &name, &s["tree"]);
        let r = run(&["decompose", &name], d);
        assert_eq!(r.code, 0);
        let back = summary(&r.report["result"]);
        assert_eq!(
            back,
            vec![(s["apex"].as_str().unwrap().into(), s["key"].as_str().unwrap().into(), 1)]
        );
    }
}

#[test]
fn reduced_counts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "a2.json", &path_quiver(2));
    write(d, "a4.json", &path_quiver(4));
    write(d, "v.json", &v_shape());
    let count = |args: &[&str]| run(args, d).report["result"]["count"].as_u64().unwrap();
    assert_eq!(count(&["reduced", "a2.json"]), 2);
    assert_eq!(count(&["reduced", "a2.json", "--with-downsets"]), 3);
    assert_eq!(count(&["reduced", "a4.json", "--with-downsets"]), 10);
    assert_eq!(count(&["reduced", "v.json"]), 4);
    let r = run(&["reduced", "v.json", "--with-downsets"], d);
    assert_eq!(r.report["result"]["count"], 6);
    assert_eq!(r.report["result"]["by_apex"], json!({"a": 1, "c": 1, "r": 4}));
}

#[test]
fn compare_examples() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "star.json", &star());
    write(d, "t1.json", &t1());
    write(d, "t2.json", &t2());

    let r = run(&["compare", "star.json", "t1.json"], d).report["result"].clone();
    assert_eq!(r["s_leq_t"], true);
    assert_eq!(r["t_leq_s"], false);
    assert_eq!(r["hom_count_s_t"], "1");
    assert_eq!(r["hom_count_t_s"], "0");

    let r = run(&["compare", "t1.json", "t2.json"], d).report["result"].clone();
    assert_eq!(
        (r["s_leq_t"].clone(), r["t_leq_s"].clone(), r["iso"].clone()),
        (json!(true), json!(true), json!(false))
    );
    assert_eq!(
        (r["hom_count_s_t"].clone(), r["hom_count_t_s"].clone()),
        (json!("2"), json!("1"))
    );

    let r = run(&["compare", "t2.json", "t2.json"], d).report["result"].clone();
    assert_eq!(r["iso"], true);
    assert_eq!(r["hom_count_s_t"], "4");

    let mut other = t2();
    other["base"] = v_shape();
    other["labeling"] = json!({"x": "a", "y": "c", "r": "r"});
    write(d, "other.json", &other);
    let r = run(&["compare", "t2.json", "other.json"], d);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["error"]["kind"], "ambient_mismatch");
}

#[test]
fn compare_accepts_reordered_bases() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let mut reordered = t1();
    reordered["base"] = json!({"vertices": ["b", "a"], "edges": [["a", "b"]]});
    write(d, "t1.json", &reordered);
    write(d, "t2.json", &t2());
    let r = run(&["compare", "t1.json", "t2.json"], d);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.report["result"]["hom_count_s_t"], "2");
}

#[test]
fn oracle_verdicts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "t2.json", &t2());
    write(d, "star.json", &star());
    write(d, "f.json", &t2_filtration());
    for file in ["t2.json", "star.json", "f.json"] {
        for prime in ["2", "3", "65521", "2147483647"] {
            let r = run(&["oracle", file, "--prime", prime], d);
            assert_eq!(r.code, 0, "{file} {prime}: {}", r.stdout);
            assert_eq!(r.report["result"]["verdict"], "MATCH");
            assert_eq!(r.report["result"]["prime"].to_string(), prime);
        }
    }
    let r = run(&["oracle", "t2.json"], d);
    assert_eq!(r.report["result"]["prime"], 2);

    let r = run(&["oracle", "t2.json", "--corrupt"], d);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["status"], "internal");
    assert_eq!(r.report["result"]["verdict"], "MISMATCH");
    assert_eq!(r.report["error"]["kind"], "oracle_mismatch");
}

/// Vertex values and edge values of one linear filtration.
type Values<'a> = (&'a [(&'a str, u32)], &'a [(&'a str, &'a str, u32)]);

fn merge_file(f: Values, g: Values, vertices: &[&str], n: u32) -> Value {
    let edges: Vec<(&str, &str)> = f.1.iter().map(|&(a, b, _)| (a, b)).collect();
    let map = |vs: &[(&str, u32)]| {
        vs.iter()
            .map(|&(v, x)| (v.to_string(), json!(x)))
            .collect::<serde_json::Map<_, _>>()
    };
    json!({
        "graph": {"vertices": vertices, "edges": edges},
        "n": n,
        "f_vertices": map(f.0), "f_edges": f.1,
        "g_vertices": map(g.0), "g_edges": g.1,
    })
}

#[test]
fn merge_invariant_examples() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let f = (&[("u", 1), ("w", 1)][..], &[("u", "w", 1)][..]);
    let g = (&[("u", 1), ("w", 1)][..], &[("u", "w", 2)][..]);
    write(d, "same.json", &merge_file(f, f, &["u", "w"], 2));
    write(d, "two.json", &merge_file(f, g, &["u", "w"], 2));

    let r = run(&["merge-invariant", "same.json"], d);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.report["result"]["total_summands"], 1);

    let r = run(&["merge-invariant", "two.json"], d);
    assert_eq!(r.code, 0);
    assert_eq!(r.report["result"]["total_summands"], 2);
    let decomposition = &r.report["result"]["components"][0]["decomposition"];
    let keys: Vec<String> = summary(decomposition).into_iter().map(|s| s.1).collect();
    assert_eq!(keys.len(), 2);
    assert!(keys.iter().any(|k| k.matches('(').count() == 1), "{keys:?}");
    assert!(keys.iter().any(|k| k.matches('(').count() == 2), "{keys:?}");

    write(d, "bad.json", &merge_file(g, f, &["u", "w"], 2));
    let r = run(&["merge-invariant", "bad.json"], d);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["error"]["kind"], "not_dominated");
}

#[test]
fn merge_invariant_splits_components() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let f = (&[("u", 1), ("w", 1), ("z", 1)][..], &[("u", "w", 1)][..]);
    let g = (&[("u", 1), ("w", 1), ("z", 2)][..], &[("u", "w", 2)][..]);
    write(d, "split.json", &merge_file(f, g, &["u", "w", "z"], 2));
    let r = run(&["merge-invariant", "split.json"], d);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let components = r.report["result"]["components"].as_array().unwrap();
    assert_eq!(components.len(), 2);
    assert_eq!(components[0]["vertices"], json!(["u", "w"]));
    assert_eq!(components[1]["vertices"], json!(["z"]));
    assert_eq!(r.report["result"]["total_summands"], 3);
    assert_eq!(r.report["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn gen_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for kind in ["quiver", "tree", "filtration"] {
        let args = |out: &'static str| ["gen", "--kind", kind, "--size", "12", "--seed", "42", "--out", out];
        let a = run(&args("a.json"), d);
        let b = run(&args("b.json"), d);
        assert_eq!(a.code, 0);
        assert_eq!(a.report["result"], b.report["result"]);
        let (fa, fb) = (
            std::fs::read(d.join("a.json")).unwrap(),
            std::fs::read(d.join("b.json")).unwrap(),
        );
        assert_eq!(fa, fb, "{kind}");
        let parsed: Value = serde_json::from_slice(&fa).unwrap();
        assert_eq!(parsed, a.report["result"]);
        let c = run(&["gen", "--kind", kind, "--size", "12", "--seed", "43"], d);
        assert_ne!(c.report["result"], a.report["result"], "{kind}");
    }
}

#[test]
fn gen_size_one_tree_is_the_star() {
    let dir = TempDir::new().unwrap();
    let r = run(&["gen", "--kind", "tree", "--size", "1", "--seed", "9"], dir.path());
    let tree = &r.report["result"]["tree"];
    assert_eq!(tree["vertices"].as_array().unwrap().len(), 1);
    assert!(tree["edges"].as_array().unwrap().is_empty());
}

#[test]
fn generated_files_validate_and_decompose() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for seed in 0..15u64 {
        let seed = seed.to_string();
        for (kind, size) in [("quiver", "9"), ("tree", "20"), ("filtration", "15")] {
            run(
                &[
                    "gen", "--kind", kind, "--size", size, "--seed", &seed, "--out", "g.json",
                ],
                d,
            );
            let r = run(&["validate", "g.json"], d);
            assert_eq!(r.code, 0, "{kind} seed {seed}: {}", r.stdout);
            if kind != "quiver" {
                let r = run(&["decompose", "g.json"], d);
                assert_eq!(r.code, 0, "{kind} seed {seed}: {}", r.stdout);
            }
        }
    }
}

#[test]
fn pretty_mode_prints_a_table() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "t2.json", &t2());
    let r = run(&["--pretty", "decompose", "t2.json"], dir.path());
    assert_eq!(r.code, 0);
    assert!(serde_json::from_str::<Value>(&r.stdout).is_err());
    assert!(r.stdout.contains("apex"));
    assert!(r.stdout.lines().any(|l| l.contains("(b(a))") && l.contains('b')));
    let r = run(&["decompose", "t2.json", "--json"], dir.path());
    assert_eq!(r.report["status"], "ok");
}

#[test]
fn bifiltration_restricted_to_a_chain() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let mut bi = json!({
        "graph": {"vertices": ["u", "w"], "edges": [["u", "w"]]},
        "grid": [2, 1],
        "vertex_values": {"u": [0, 0], "w": [0, 0]},
        "edge_values": [["u", "w", [1, 0]]],
        "restriction": {
            "poset": {"elements": ["p0", "p1"], "relations": [["p0", "p1"]]},
            "embedding": {"p0": [0, 0], "p1": [1, 0]}
        }
    });
    write(d, "bi.json", &bi);
    let r = run(&["decompose", "bi.json", "--kind", "bifiltration"], d);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let expected: Vec<(String, String, u64)> =
        vec![("p0".into(), "(p0)".into(), 1), ("p1".into(), "(p1(p0))".into(), 1)];
    assert_eq!(summary(&r.report["result"]), expected);
    assert_eq!(run(&["oracle", "bi.json"], d).report["result"]["verdict"], "MATCH");

    bi.as_object_mut().unwrap().remove("restriction");
    write(d, "bare.json", &bi);
    let r = run(&["decompose", "bare.json"], d);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["error"]["kind"], "missing_restriction");
}
