use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn theta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_theta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_random_points(path: &Path, n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::from("x,y\n");
    for _ in 0..n {
        let (x, y): (f64, f64) = (rng.gen(), rng.gen());
        s.push_str(&format!("{x},{y}\n"));
    }
    fs::write(path, s).unwrap();
}

#[test]
fn build_then_query() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    let graph = dir.path().join("g.json");
    write_random_points(&pts, 40, 1);
    let p = pts.to_str().unwrap();
    let g = graph.to_str().unwrap();
    assert!(theta(&["build", "--k", "5", "--points", p, "--out", g])
        .status
        .success());

    let r = json(&theta(&["ratio", "--graph", g]));
    assert_eq!(r["n"], 40);
    assert_eq!(r["bound_satisfied"], true);
    let from_points = json(&theta(&["ratio", "--points", p, "--k", "5"]));
    assert_eq!(r["ratio"], from_points["ratio"]);

    let c = json(&theta(&[
        "path", "--graph", g, "--source", "0", "--dest", "7",
    ]));
    let s = json(&theta(&[
        "path",
        "--graph",
        g,
        "--source",
        "0",
        "--dest",
        "7",
        "--shortest",
    ]));
    assert!(c["length"].as_f64().unwrap() >= s["length"].as_f64().unwrap() - 1e-12);
    assert!(!c["case_trace"].as_array().unwrap().is_empty());

    let route = json(&theta(&[
        "route", "--graph", g, "--source", "3", "--dest", "9",
    ]));
    assert_eq!(route["path"]["vertices"][0], 3);
    let capped = json(&theta(&[
        "route",
        "--graph",
        g,
        "--source",
        "3",
        "--dest",
        "9",
        "--step-cap",
        "1",
    ]));
    assert!(capped["steps"].as_u64().unwrap() <= 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    write_random_points(&pts, 30, 2);
    let p = pts.to_str().unwrap();
    let mut bytes = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("g{i}.dot"));
        assert!(theta(&[
            "build",
            "--k",
            "6",
            "--points",
            p,
            "--out",
            out.to_str().unwrap(),
            "--format",
            "dot"
        ])
        .status
        .success());
        bytes.push(fs::read(out).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let a = theta(&["ratio", "--points", p, "--k", "5"]).stdout;
    let b = theta(&["ratio", "--points", p, "--k", "5"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn verify_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let pts = dir.path().join(format!("p{seed}.csv"));
        write_random_points(&pts, 60, 100 + seed);
        let out = theta(&["verify", "--points", pts.to_str().unwrap(), "--k", "5"]);
        let report = json(&out);
        assert!(report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["passed"] == true));
    }
}

#[test]
fn gen_round_trips_through_build() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("app.csv");
    let svg = dir.path().join("app.svg");
    assert!(theta(&[
        "gen",
        "appendix",
        "--epsilon",
        "1e-6",
        "--out",
        pts.to_str().unwrap()
    ])
    .status
    .success());
    let r = json(&theta(&[
        "ratio",
        "--points",
        pts.to_str().unwrap(),
        "--k",
        "5",
    ]));
    let ratio = r["ratio"]["finite"].as_f64().unwrap();
    assert!((ratio - 3.798374).abs() < 1e-3);
    let built = theta(&[
        "build",
        "--k",
        "5",
        "--points",
        pts.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--format",
        "svg",
        "--highlight",
        "0,22,9,5,3,1",
    ]);
    assert!(built.status.success());
    let s = fs::read_to_string(svg).unwrap();
    assert_eq!(s.matches("class=\"vertex\"").count(), 31);
    assert_eq!(s.matches("<polyline").count(), 1);

    let stdout = theta(&["gen", "theorem3", "--epsilon", "1e-9"]);
    assert!(stdout.status.success());
    assert_eq!(String::from_utf8(stdout.stdout).unwrap().lines().count(), 7);

    let adv = dir.path().join("adv.csv");
    let out = theta(&[
        "gen",
        "adversary",
        "--epsilon",
        "1e-7",
        "--cycles",
        "3",
        "--out",
        adv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let note = String::from_utf8(out.stderr).unwrap();
    let tol = note.trim().rsplit(' ').next().unwrap();
    let route = json(&theta(&[
        "route",
        "--points",
        adv.to_str().unwrap(),
        "--k",
        "5",
        "--tolerance",
        tol,
        "--source",
        "1",
        "--dest",
        "0",
    ]));
    assert_eq!(route["reached"], true);
    assert_eq!(route["steps"], 25);
}

#[test]
fn errors_exit_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,0\n0,abc\n").unwrap();
    let out = theta(&["ratio", "--points", bad.to_str().unwrap(), "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let dup = dir.path().join("dup.csv");
    fs::write(&dup, "0,0\n0,0\n").unwrap();
    let out = theta(&["verify", "--points", dup.to_str().unwrap(), "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));

    let ok = dir.path().join("ok.csv");
    fs::write(&ok, "0,0\n0,1\n").unwrap();
    let out = theta(&[
        "path",
        "--points",
        ok.to_str().unwrap(),
        "--k",
        "6",
        "--source",
        "0",
        "--dest",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = theta(&[
        "route",
        "--points",
        ok.to_str().unwrap(),
        "--k",
        "5",
        "--source",
        "0",
        "--dest",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
