use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, value: &Value) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
        path
    }

    fn raw(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromsym")).args(args).output().unwrap()
}

fn run_paths(cmd: &str, args: &[(&str, &PathBuf)], extra: &[&str]) -> Output {
    let mut v: Vec<String> = vec![cmd.into()];
    for (flag, p) in args {
        v.push((*flag).into());
        v.push(p.display().to_string());
    }
    v.extend(extra.iter().map(|s| s.to_string()));
    Command::new(env!("CARGO_BIN_EXE_chromsym")).args(&v).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn unit_graph(ids: &[&str], edges: &[(&str, &str)]) -> Value {
    labelled(&[ids], edges)
}

fn labelled(blocks: &[&[&str]], edges: &[(&str, &str)]) -> Value {
    let k = blocks.len();
    let vertices: Vec<Value> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| {
            b.iter().map(move |id| {
                let mut w = vec![0; k];
                w[i] = 1;
                json!({"id": id, "weight": w})
            })
        })
        .collect();
    json!({"k": k, "vertices": vertices, "edges": edges})
}

fn terms(v: &Value) -> Vec<(Value, String)> {
    v["terms"].as_array().unwrap().iter().map(|t| (t["index"].clone(), t["coeff"].as_str().unwrap().to_owned())).collect()
}

#[test]
fn version_mentions_format() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("chromsym/1"));
}

#[test]
fn compute_k2_in_power_sums() {
    let s = Sandbox::new();
    let g = s.file("k2.json", &unit_graph(&["a", "b"], &[("a", "b")]));
    for algo in ["auto", "colorings", "subsets", "delcon", "verify"] {
        let v = stdout_json(&run_paths("compute", &[("--graph", &g)], &["--basis", "p", "--algo", algo]));
        assert_eq!(v["format"], "chromsym/1");
        assert_eq!(v["basis"], "p");
        assert_eq!(terms(&v), vec![(json!([[2]]), "-1/1".into()), (json!([[1], [1]]), "1/1".into())], "{algo}");
    }
}

#[test]
fn compute_loop_and_edgeless() {
    let s = Sandbox::new();
    let looped = s.file("loop.json", &unit_graph(&["a", "b"], &[("a", "a")]));
    let v = stdout_json(&run_paths("compute", &[("--graph", &looped)], &[]));
    assert!(terms(&v).is_empty());

    let edgeless = json!({"k": 2, "vertices": [{"id": "x", "weight": [0, 2]}, {"id": "y", "weight": [1, 0]}], "edges": []});
    let g = s.file("edgeless.json", &edgeless);
    let v = stdout_json(&run_paths("compute", &[("--graph", &g)], &["--basis", "p"]));
    assert_eq!(terms(&v), vec![(json!([[1, 0], [0, 2]]), "1/1".into())]);
}

#[test]
fn compute_other_bases_round_trip_through_json() {
    let s = Sandbox::new();
    let p3 = s.file("p3.json", &unit_graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]));
    for basis in ["m", "mtilde", "e", "r"] {
        let v = stdout_json(&run_paths("compute", &[("--graph", &p3)], &["--basis", basis]));
        assert_eq!(v["basis"], basis);
        let text = serde_json::to_string(&v).unwrap();
        let parsed: chromsym::io::MultiSymJson = serde_json::from_str(&text).unwrap();
        let f = parsed.to_multisym().unwrap();
        assert_eq!(chromsym::io::MultiSymJson::from_multisym(&f), parsed);
    }
}

#[test]
fn exit_codes() {
    let s = Sandbox::new();
    let bad = s.raw("bad.json", "{ not json");
    let out = run_paths("compute", &[("--graph", &bad)], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let missing = s.path("missing.json");
    assert_eq!(run_paths("compute", &[("--graph", &missing)], &[]).status.code(), Some(2));

    let k4 = s.file("k4.json", &unit_graph(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]));
    let out = run_paths("compute", &[("--graph", &k4)], &["--algo", "subsets", "--max-subset-edges", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));

    assert_eq!(run(&["compute"]).status.code(), Some(2));
}

fn two_block_swap() -> Value {
    let blocks: &[&[&str]] = &[&["u", "z"], &["v", "w"]];
    json!({"k": 2, "terms": [
        {"coeff": "1", "graph": labelled(blocks, &[("u", "z"), ("z", "w"), ("v", "w"), ("u", "w")])},
        {"coeff": "-1", "graph": labelled(blocks, &[("u", "z"), ("v", "z"), ("v", "w"), ("w", "z")])},
    ]})
}

#[test]
fn kernel_two_block_swap_is_certified() {
    let s = Sandbox::new();
    let combo = s.file("swap.json", &two_block_swap());
    let cert = s.path("cert.json");
    let v = stdout_json(&run_paths("kernel", &[("--combo", &combo), ("--certificate", &cert)], &[]));
    assert_eq!(v["member"], true);
    assert!(terms(&v["residual"]).is_empty());
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["format"], "chromsym/1");
    assert_eq!(c["os_terms"].as_array().unwrap().len(), 2);
    assert_eq!(c["iso_terms"].as_array().unwrap().len(), 1);
    assert_eq!(c["residual"], json!([]));
    assert_eq!(c["sufficient_set"], json!([[{"u": "z", "z": "u"}, {"v": "w", "w": "v"}]]));
}

#[test]
fn kernel_non_member_and_zero() {
    let s = Sandbox::new();
    let single = json!({"k": 1, "terms": [{"coeff": "2/3", "graph": unit_graph(&["a", "b"], &[("a", "b")])}]});
    let v = stdout_json(&run_paths("kernel", &[("--combo", &s.file("one.json", &single))], &[]));
    assert_eq!(v["member"], false);
    assert!(!terms(&v["residual"]).is_empty());

    let empty = json!({"k": 2, "terms": []});
    let v = stdout_json(&run_paths("kernel", &[("--combo", &s.file("empty.json", &empty))], &[]));
    assert_eq!(v["member"], true);
}

#[test]
fn lift_routes() {
    let s = Sandbox::new();
    // The new block {a, b} is complete to {u, z} and anticomplete to {v, w}.
    let combo = s.file("swap.json", &two_block_swap());
    let h_star = labelled(&[&["u", "z"], &["v", "w"], &["a", "b"]], &[("a", "u"), ("a", "z"), ("b", "u"), ("b", "z")]);
    let aug = s.file("aug.json", &h_star);
    let v = stdout_json(&run_paths("lift", &[("--combo", &combo), ("--augmentation", &aug)], &[]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["route"], "homogeneity");
    assert_eq!(v["combination"]["terms"].as_array().unwrap().len(), 2);

    // ℓ_iso(G, (u z)) with a third vertex in the first block.
    let blocks: &[&[&str]] = &[&["u", "z", "y"], &["v"]];
    let iso = json!({"k": 2, "terms": [
        {"coeff": "1", "graph": labelled(blocks, &[("u", "v")])},
        {"coeff": "-1", "graph": labelled(blocks, &[("z", "v")])},
    ]});
    let combo = s.file("iso.json", &iso);
    let set = s.file("set.json", &json!([[{"u": "z", "z": "u"}, {}]]));
    let three: &[&[&str]] = &[&["u", "z", "y"], &["v"], &["n"]];
    let fixed = s.file("fixed.json", &labelled(three, &[("n", "u"), ("n", "z")]));
    let v = stdout_json(&run_paths(
        "lift",
        &[("--combo", &combo), ("--augmentation", &fixed), ("--sufficient-set", &set)],
        &[],
    ));
    assert_eq!((v["valid"].clone(), v["route"].clone()), (json!(true), json!("fixed-by-S")));
    assert_eq!(v["homogeneous"], false);

    let moved = s.file("moved.json", &labelled(three, &[("n", "u")]));
    let v = stdout_json(&run_paths(
        "lift",
        &[("--combo", &combo), ("--augmentation", &moved), ("--sufficient-set", &set)],
        &[],
    ));
    assert_eq!(v["route"], "direct-evaluation");
    assert_eq!(v["valid"], v["evaluates_to_zero"]);
    let v = stdout_json(&run_paths("lift", &[("--combo", &combo), ("--augmentation", &moved)], &[]));
    assert_eq!(v["route"], "direct-evaluation");

    let bad = s.file("bad.json", &labelled(&[&["u"], &["v"], &["n"]], &[]));
    let out = run_paths("lift", &[("--combo", &combo), ("--augmentation", &bad)], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lift_accepts_a_certificate_as_sufficient_set() {
    let s = Sandbox::new();
    let combo = s.file("swap.json", &two_block_swap());
    let cert = s.path("cert.json");
    stdout_json(&run_paths("kernel", &[("--combo", &combo), ("--certificate", &cert)], &[]));
    let h_star = labelled(&[&["u", "z"], &["v", "w"], &["a"]], &[("a", "u"), ("a", "z"), ("a", "v"), ("a", "w")]);
    let aug = s.file("aug.json", &h_star);
    let v = stdout_json(&run_paths(
        "lift",
        &[("--combo", &combo), ("--augmentation", &aug), ("--sufficient-set", &cert)],
        &[],
    ));
    assert_eq!(v["valid"], true);
}

fn poset(elements: &[&str], less: &[(&str, &str)]) -> Value {
    json!({"elements": elements, "less_than": less})
}

#[test]
fn gp_reduce_two_plus_two() {
    let s = Sandbox::new();
    let p = s.file("p.json", &poset(&["a", "b", "c", "d"], &[("a", "c"), ("b", "d")]));
    let trace = s.path("trace.json");
    let v = stdout_json(&run_paths("gp-reduce", &[("--poset", &p), ("--trace", &trace)], &[]));
    let coeffs: Vec<&str> = v["leaves"].as_array().unwrap().iter().map(|l| l["coeff"].as_str().unwrap()).collect();
    assert_eq!(coeffs, vec!["1/2", "1/2"]);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    let step = &t["steps"][0];
    assert_eq!(step["witness"], json!(["a", "b", "c", "d"]));
    assert_eq!(step["v1"], json!(["a", "b"]));
    assert_eq!(step["coefficients"], json!(["1/2", "0/1", "1/2"]));
    assert_eq!(step["children"].as_array().unwrap().len(), 3);
}

#[test]
fn gp_reduce_chain_and_three_plus_one() {
    let s = Sandbox::new();
    let chain = s.file("chain.json", &poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]));
    let v = stdout_json(&run_paths("gp-reduce", &[("--poset", &chain)], &[]));
    assert_eq!(v["leaves"].as_array().unwrap().len(), 1);
    assert_eq!(v["leaves"][0]["coeff"], "1/1");
    assert_eq!(v["leaves"][0]["poset"]["less_than"], json!([["a", "b"], ["a", "c"], ["b", "c"]]));

    let tpo = s.file("tpo.json", &poset(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c")]));
    let out = run_paths("gp-reduce", &[("--poset", &tpo)], &[]);
    assert_eq!(out.status.code(), Some(5));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("a < b < c, d"));

    let cyclic = s.file("cyc.json", &poset(&["a", "b"], &[("a", "b"), ("b", "a")]));
    assert_eq!(run_paths("gp-reduce", &[("--poset", &cyclic)], &[]).status.code(), Some(2));
}

#[test]
fn epos_verdicts() {
    let s = Sandbox::new();
    let p3 = s.file("p3.json", &unit_graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]));
    let v = stdout_json(&run_paths("epos", &[("--graph", &p3)], &[]));
    assert_eq!(v["positive"], true);
    assert_eq!(v["witness"], Value::Null);

    let claw = s.file("claw.json", &unit_graph(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")]));
    let v = stdout_json(&run_paths("epos", &[("--graph", &claw)], &[]));
    assert_eq!(v["positive"], false);
    assert_eq!(v["witness"], json!({"index": [[2], [2]], "coeff": "-1/2"}));

    let one = s.file("one.json", &unit_graph(&["a"], &[]));
    assert_eq!(stdout_json(&run_paths("epos", &[("--graph", &one)], &[]))["positive"], true);
}

#[test]
fn outputs_are_deterministic() {
    let s = Sandbox::new();
    let combo = s.file("swap.json", &two_block_swap());
    let a = run_paths("kernel", &[("--combo", &combo)], &[]);
    let b = run_paths("kernel", &[("--combo", &combo)], &[]);
    assert_eq!(a.stdout, b.stdout);
    let p = s.file("p.json", &poset(&["a", "b", "c", "d", "e"], &[("a", "c"), ("b", "d"), ("e", "d")]));
    let a = run_paths("gp-reduce", &[("--poset", &p)], &[]);
    let b = run_paths("gp-reduce", &[("--poset", &p)], &[]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
