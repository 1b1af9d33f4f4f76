use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use distsketch::codec::SketchSet;

fn bin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distsketch")).args(args).current_dir(cwd).output().unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("distsketch-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn gen_shapes() {
    let dir = scratch("gen");
    let out = bin(&["gen", "path", "4"], &dir);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 1 1\n1 2 1\n2 3 1\n");
    let out = bin(&["gen", "grid", "3", "3"], &dir);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 12);
    let out = bin(&["gen", "er", "20", "0.3", "--seed", "4", "--weights", "2..5"], &dir);
    let text = String::from_utf8(out.stdout).unwrap();
    let g = distsketch::load_edge_list(&text).unwrap();
    assert_eq!(g.node_count(), 20);
    assert!(g.edges().iter().all(|e| (2..=5).contains(&e.w)));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn query_and_verify_roundtrip() {
    let dir = scratch("query");
    assert!(bin(&["gen", "path", "5", "--out", "p5.txt"], &dir).status.success());
    let out = bin(&["build", "--graph", "p5.txt", "--scheme", "tz", "--k", "1", "--out", "s.bin"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin(&["query", "--sketches", "s.bin", "0", "4"], &dir);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "4");
    let out = bin(&["verify", "--graph", "p5.txt", "--sketches", "s.bin"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.join("s.bin.metrics.json")).unwrap()).unwrap();
    assert_eq!(metrics["n"], 5);
    assert_eq!(metrics["scheme"], "tz");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn tampered_sketches_are_rejected() {
    let dir = scratch("tamper");
    assert!(bin(&["gen", "grid", "3", "4", "--weights", "1..9", "--out", "g.txt"], &dir).status.success());
    assert!(bin(&["build", "--graph", "g.txt", "--scheme", "tz", "--k", "2", "--out", "s.bin"], &dir).status.success());

    // A well-formed file whose stored distance is off by one.
    let mut set = SketchSet::decode(&std::fs::read(dir.join("s.bin")).unwrap()).unwrap();
    let SketchSet::Tz(labels) = &mut set else { panic!("expected tz") };
    labels[5].bunch[0].dist += 1;
    std::fs::write(dir.join("bad.bin"), set.encode()).unwrap();
    let out = bin(&["verify", "--graph", "g.txt", "--sketches", "bad.bin"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invariant violated"));

    // Truncation is a codec error.
    let bytes = std::fs::read(dir.join("s.bin")).unwrap();
    std::fs::write(dir.join("cut.bin"), &bytes[..bytes.len() - 3]).unwrap();
    let out = bin(&["query", "--sketches", "cut.bin", "0", "1"], &dir);
    assert_eq!(out.status.code(), Some(6));

    let out = bin(&["query", "--sketches", "s.bin", "0", "99"], &dir);
    assert_ne!(out.status.code(), Some(0));
    let out = bin(&["build", "--graph", "missing.txt", "--scheme", "tz", "--out", "x.bin"], &dir);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}
