use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use pairham::format::{parse_cycle, parse_graph, parse_pairing, write_cycle};
use pairham::graph::build_rook;

fn pairham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairham")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn certify_cut_pairings() {
    for m2 in ["3", "5"] {
        let out = pairham(&["certify-cut", "--m2", m2]);
        assert_eq!(code(&out), 0);
        let cert = json(&out);
        assert_eq!(cert["outcome"], "nonextendable");
        assert_eq!(cert["instance"]["graph"], format!("rook 2 {m2}"));
    }
    assert_eq!(code(&pairham(&["certify-cut", "--m2", "4"])), 2);
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    assert_eq!(code(&pairham(&["gen", "graph", "--family", "rook", "--m1", "4", "--m2", "3", "--out", p(&g)])), 0);
    let graph = parse_graph(&fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(graph, build_rook(4, 3).unwrap());

    let m = dir.path().join("m.txt");
    assert_eq!(code(&pairham(&["gen", "pairing", "--graph", p(&g), "--random", "--seed", "11", "--out", p(&m)])), 0);
    let pairing = parse_pairing(&fs::read_to_string(&m).unwrap()).unwrap();
    let again = pairham(&["gen", "pairing", "--graph", p(&g), "--random", "--seed", "11"]);
    assert_eq!(again.stdout, fs::read(&m).unwrap());

    let c = dir.path().join("c.txt");
    assert_eq!(code(&pairham(&["extend", "--graph", p(&g), "--pairing", p(&m), "--out", p(&c)])), 0);
    let text = fs::read_to_string(&c).unwrap();
    let cycle = parse_cycle(&text).unwrap();
    assert_eq!(write_cycle(&cycle, Some(&pairing)), text);
}

#[test]
fn construct_then_verify_over_every_pairing_of_rook_4_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let all = dir.path().join("all");
    pairham(&["gen", "graph", "--family", "rook", "--m1", "4", "--m2", "3", "--out", p(&g)]);
    assert_eq!(code(&pairham(&["gen", "pairing", "--graph", p(&g), "--all", "--out", p(&all)])), 0);
    let mut files: Vec<_> = fs::read_dir(&all).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 10395);
    let c = dir.path().join("c.txt");
    for m in &files {
        let ext = pairham(&["extend", "--graph", p(&g), "--pairing", p(m), "--method", "construct", "--out", p(&c)]);
        assert_eq!(code(&ext), 0, "{}", m.display());
        let ver = pairham(&["verify", "--graph", p(&g), "--pairing", p(m), "--cycle", p(&c)]);
        assert_eq!(code(&ver), 0, "{}", m.display());
    }
}

#[test]
fn tampered_cycle_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let (g, m, c) = (dir.path().join("g"), dir.path().join("m"), dir.path().join("c"));
    pairham(&["gen", "graph", "--family", "rook", "--m1", "4", "--m2", "3", "--out", p(&g)]);
    pairham(&["gen", "pairing", "--graph", p(&g), "--random", "--seed", "3", "--out", p(&m)]);
    assert_eq!(code(&pairham(&["extend", "--graph", p(&g), "--pairing", p(&m), "--out", p(&c)])), 0);
    let text = fs::read_to_string(&c).unwrap();
    let pairing = parse_pairing(&fs::read_to_string(&m).unwrap()).unwrap();
    let mut labels: Vec<&str> = text.lines().next().unwrap().split(' ').collect();
    // move the second vertex of some pair one step on, separating the pair
    let i = (0..labels.len() - 2)
        .find(|&i| pairing.contains_pair(labels[i].parse().unwrap(), labels[i + 1].parse().unwrap()))
        .unwrap();
    labels.swap(i + 1, i + 2);
    fs::write(&c, labels.join(" ")).unwrap();
    assert_eq!(code(&pairham(&["verify", "--graph", p(&g), "--pairing", p(&m), "--cycle", p(&c)])), 1);
}

#[test]
fn nonextendable_pairing_yields_certificate_and_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let (g, m) = (dir.path().join("g"), dir.path().join("m"));
    pairham(&["gen", "graph", "--family", "rook", "--m1", "2", "--m2", "3", "--out", p(&g)]);
    fs::write(&m, "0.0 1.0\n0.1 1.1\n0.2 1.2\n").unwrap();
    for method in ["construct", "search"] {
        let out = pairham(&["extend", "--graph", p(&g), "--pairing", p(&m), "--method", method]);
        assert_eq!(code(&out), 1);
        assert_eq!(json(&out)["outcome"], "nonextendable");
    }
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    pairham(&["gen", "graph", "--family", "rook", "--m1", "4", "--m2", "5", "--out", p(&g)]);
    let run = |workers: &str| {
        let out = pairham(&["check-ph", "--graph", p(&g), "--sample", "200", "--seed", "9", "--workers", workers]);
        assert_eq!(code(&out), 0);
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let report: serde_json::Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(report["extended"], 200);
    assert_eq!(report["verdict"]["kind"], "sampled_no_counterexample");
}

#[test]
fn check_ph_exhaustive_and_explorer() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    pairham(&["gen", "graph", "--family", "hypercube", "--m1", "3", "--out", p(&g)]);
    let out = pairham(&["check-ph", "--graph", p(&g), "--exhaustive", "--extender", "search"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"]["kind"], "ph_confirmed_at_scope");
    assert_eq!(json(&out)["pairings_tested"], 105);

    let out = pairham(&["explore-bor", "--max-order", "8"]);
    assert_eq!(code(&out), 0);
    let reports = json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 13);
    let k33 = reports.as_array().unwrap().iter().find(|r| r["graph"] == "bor 2 3").unwrap();
    assert_eq!(k33["verdict"]["kind"], "ph_confirmed_at_scope");
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (g, m) = (dir.path().join("g"), dir.path().join("m"));
    pairham(&["gen", "graph", "--family", "rook", "--m1", "2", "--m2", "3", "--out", p(&g)]);
    fs::write(&m, "0.0 1.0\n0.1 1.1\n0.2 1.2\n").unwrap();
    assert_eq!(code(&pairham(&["--budget", "1", "extend", "--graph", p(&g), "--pairing", p(&m), "--method", "search"])), 3);
    let out = pairham(&["check-ph", "--graph", p(&g), "--exhaustive", "--extender", "search", "--budget", "1"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["verdict"]["kind"], "inconclusive");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    assert_eq!(code(&pairham(&["frobnicate"])), 2);
    assert_eq!(code(&pairham(&["gen", "graph", "--family", "rook", "--m1", "2"])), 2);
    fs::write(&g, "graph rook 1 2\nv 0.0\nv nope\n").unwrap();
    let out = pairham(&["check-ph", "--graph", p(&g), "--exhaustive"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&pairham(&["verify", "--graph", "/nonexistent", "--pairing", "x", "--cycle", "y"])), 2);
}
