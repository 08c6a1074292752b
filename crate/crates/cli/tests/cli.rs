use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jlt_cli::format::VectorFile;
use tempfile::TempDir;

fn jlt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jlt")).args(args).output().expect("spawn jlt")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_vectors(path: &Path) -> VectorFile {
    VectorFile::from_bytes(&fs::read(path).unwrap()).unwrap()
}

#[test]
fn gen_sphere_layout_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (p(&dir, "a.jlv"), p(&dir, "b.jlv"));
    for out in [&a, &b] {
        let o = jlt(&["gen", "--d", "4", "--count", "2", "--dist", "sphere", "--seed", "1", "--out", s(out)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes.len(), 16 + 64);
    assert_eq!(bytes, fs::read(&b).unwrap());
    for row in read_vectors(&a).rows {
        let n: f64 = row.iter().map(|v| v * v).sum();
        assert!((n - 1.0).abs() < 1e-12);
    }
}

#[test]
fn gen_binary_k_delegates_to_hard_instance() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "x.jlv");
    assert_eq!(
        code(&jlt(&["gen", "--d", "10", "--count", "3", "--dist", "binary-k", "--k", "3", "--out", s(&out)])),
        0
    );
    let expected = jlt_core::sparse::fh_hard_instance(3, 10).unwrap();
    assert!(read_vectors(&out).rows.iter().all(|r| *r == expected));
    assert_eq!(code(&jlt(&["gen", "--d", "10", "--count", "3", "--dist", "binary-k", "--out", s(&out)])), 2);
}

#[test]
fn usage_and_io_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&jlt(&["gen", "--d", "4"])), 2);
    assert_eq!(code(&jlt(&["gen", "--d", "4", "--count", "1", "--dist", "cauchy", "--out", "x"])), 2);
    let bad_out = dir.path().join("missing").join("x.jlv");
    assert_eq!(code(&jlt(&["gen", "--d", "4", "--count", "1", "--dist", "sphere", "--out", s(&bad_out)])), 3);
    let o = jlt(&["embed", "--transform", "nope", "--in", "a", "--out", "b"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rademacher"));
    assert_eq!(code(&jlt(&["embed", "--transform", "srht", "--in", s(&p(&dir, "none")), "--out", "b"])), 3);
}

#[test]
fn embed_round_trip() {
    let dir = TempDir::new().unwrap();
    let (x, y) = (p(&dir, "x.jlv"), p(&dir, "y.jlv"));
    jlt(&["gen", "--d", "32", "--count", "5", "--dist", "gaussian", "--seed", "2", "--out", s(&x)]);
    let args = [
        "embed",
        "--transform",
        "rademacher",
        "--d",
        "32",
        "--m",
        "8",
        "--seed",
        "3",
        "--in",
        s(&x),
        "--out",
        s(&y),
    ];
    assert_eq!(code(&jlt(&args)), 0);
    let out = read_vectors(&y);
    assert_eq!((out.dim, out.count()), (8, 5));
    let first = fs::read(&y).unwrap();
    assert_eq!(code(&jlt(&args)), 0);
    assert_eq!(first, fs::read(&y).unwrap());

    // wrong --d
    assert_eq!(
        code(&jlt(&["embed", "--transform", "srht", "--d", "31", "--m", "8", "--in", s(&x), "--out", s(&y)])),
        4
    );
    // flag that does not belong to the kind
    assert_eq!(
        code(&jlt(&["embed", "--transform", "srht", "--s", "2", "--m", "8", "--in", s(&x), "--out", s(&y)])),
        2
    );
    assert_eq!(
        code(&jlt(&["embed", "--transform", "dks", "--s", "2", "--m", "8", "--in", s(&x), "--out", s(&y)])),
        0
    );
    // corrupt input
    fs::write(&x, b"JLV1garbage").unwrap();
    assert_eq!(code(&jlt(&["embed", "--transform", "srht", "--m", "8", "--in", s(&x), "--out", s(&y)])), 5);
}

#[test]
fn embed_zero_row_and_csv() {
    let dir = TempDir::new().unwrap();
    let (x, y) = (p(&dir, "x.csv"), p(&dir, "y.jlv"));
    fs::write(&x, "0,0,0,0,0,0,0,0\n1,2,3,4,5,6,7,8\n").unwrap();
    for kind in ["gaussian", "fh", "fjlt", "toeplitz", "kacjl"] {
        let o = jlt(&[
            "embed",
            "--transform",
            kind,
            "--m",
            "4",
            "--format",
            "csv",
            "--in",
            s(&x),
            "--out",
            s(&y),
        ]);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let out = read_vectors(&y);
        assert!(out.rows[0].iter().all(|&v| v == 0.0), "{kind}");
        assert!(out.rows[1].iter().any(|&v| v != 0.0), "{kind}");
    }
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = TempDir::new().unwrap();
    let json = p(&dir, "r.json");
    let o = jlt(&[
        "verify",
        "--transform",
        "rademacher",
        "--d",
        "256",
        "--auto-m",
        "--eps",
        "0.25",
        "--delta",
        "0.05",
        "--trials",
        "10000",
        "--seed",
        "11",
        "--json",
        s(&json),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in [
        "kind",
        "d",
        "m",
        "eps",
        "delta",
        "trials",
        "failures",
        "failure_rate",
        "ci95",
        "mean_sq_ratio",
        "seed",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["trials"], 10_000);
    assert_eq!(v["kind"], "rademacher");

    let o = jlt(&[
        "verify",
        "--transform",
        "gaussian",
        "--d",
        "64",
        "--m",
        "1",
        "--eps",
        "0.25",
        "--delta",
        "0.05",
        "--trials",
        "500",
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["failure_rate"].as_f64().unwrap() > 0.5);

    // reproducible to the bit
    let again = jlt(&[
        "verify",
        "--transform",
        "gaussian",
        "--d",
        "64",
        "--m",
        "1",
        "--eps",
        "0.25",
        "--delta",
        "0.05",
        "--trials",
        "500",
    ]);
    assert_eq!(o.stdout, again.stdout);

    assert_eq!(
        code(&jlt(&["verify", "--transform", "srht", "--d", "64", "--eps", "0.25", "--delta", "0.05"])),
        2
    );
    assert_eq!(
        code(&jlt(&[
            "verify",
            "--transform",
            "srht",
            "--d",
            "64",
            "--m",
            "8",
            "--eps",
            "0.25",
            "--delta",
            "0.05",
            "--trials",
            "10"
        ])),
        2
    );
}

fn write_stream(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = p(dir, name);
    fs::write(&path, body).unwrap();
    path
}

fn stdout_of(args: &[&str]) -> String {
    let o = jlt(args);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn sketch_single_item_is_exact() {
    let dir = TempDir::new().unwrap();
    let one = write_stream(&dir, "one.txt", "#d=100 M=1000\n42,-7\n");
    for kind in ["ams", "cs"] {
        let f2: f64 = stdout_of(&["sketch", "--kind", kind, "--stream", s(&one), "--query", "f2"])
            .trim()
            .parse()
            .unwrap();
        assert_eq!(f2, 49.0);
    }
    let pq: f64 = stdout_of(&["sketch", "--kind", "cs", "--stream", s(&one), "--query", "point:42"])
        .trim()
        .parse()
        .unwrap();
    assert_eq!(pq, -7.0);
    assert_eq!(code(&jlt(&["sketch", "--kind", "ams", "--stream", s(&one), "--query", "point:42"])), 2);
}

#[test]
fn sketch_shards_merge_like_concatenation() {
    let dir = TempDir::new().unwrap();
    let mut a = String::from("#d=1000\n");
    let mut b = String::new();
    for i in 0..400u64 {
        let line = format!("{},{}\n", (i * 37) % 1000, (i % 9) as i64 - 3);
        if i % 3 == 0 {
            a.push_str(&line)
        } else {
            b.push_str(&line)
        }
    }
    let pa = write_stream(&dir, "a.txt", &a);
    let pb = write_stream(&dir, "b.txt", &b);
    let both = write_stream(&dir, "ab.txt", &(a.clone() + &b));
    for q in ["f2", "point:37", "topk:5"] {
        for kind in ["ams", "cs"] {
            if kind == "ams" && q != "f2" {
                continue;
            }
            let merged = stdout_of(&[
                "sketch",
                "--kind",
                kind,
                "--seed",
                "5",
                "--stream",
                s(&pa),
                "--stream",
                s(&pb),
                "--query",
                q,
            ]);
            let single =
                stdout_of(&["sketch", "--kind", kind, "--seed", "5", "--stream", s(&both), "--query", q]);
            assert_eq!(merged, single, "{kind} {q}");
        }
    }
}

#[test]
fn sketch_topk_finds_heavy_items() {
    let dir = TempDir::new().unwrap();
    let mut body = String::from("#d=5000 M=100\n");
    for i in 0..3000u64 {
        body.push_str(&format!("{},1\n", (i * 7919) % 5000));
    }
    for (item, w) in [(17u64, 90), (4000, 70), (999, 50)] {
        for _ in 0..10 {
            body.push_str(&format!("{item},{w}\n"));
        }
    }
    let path = write_stream(&dir, "z.txt", &body);
    let out =
        stdout_of(&["sketch", "--kind", "cs", "--eps", "0.05", "--stream", s(&path), "--query", "topk:3"]);
    let rows: Vec<(u64, f64)> = out
        .lines()
        .map(|l| {
            let (i, e) = l.split_once(',').unwrap();
            (i.parse().unwrap(), e.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![17, 4000, 999]);
    assert!(rows.windows(2).all(|w| w[0].1 >= w[1].1));
}

#[test]
fn sketch_rejects_bad_streams() {
    let dir = TempDir::new().unwrap();
    let bad = write_stream(&dir, "bad.txt", "#d=10\n1,2\nthree,4\n");
    assert_eq!(code(&jlt(&["sketch", "--kind", "cs", "--stream", s(&bad), "--query", "f2"])), 5);
    let big = write_stream(&dir, "big.txt", "#d=10 M=3\n1,4\n");
    assert_eq!(code(&jlt(&["sketch", "--kind", "cs", "--stream", s(&big), "--query", "f2"])), 5);
    let oob = write_stream(&dir, "oob.txt", "5,1\n");
    assert_eq!(code(&jlt(&["sketch", "--kind", "cs", "--d", "5", "--stream", s(&oob), "--query", "f2"])), 4);
    assert_eq!(code(&jlt(&["sketch", "--kind", "cs", "--stream", s(&oob), "--query", "f2"])), 2);
    let other = write_stream(&dir, "other.txt", "#d=11\n1,1\n");
    let ok = write_stream(&dir, "ok.txt", "#d=10\n1,1\n");
    assert_eq!(
        code(&jlt(&["sketch", "--kind", "cs", "--stream", s(&ok), "--stream", s(&other), "--query", "f2"])),
        4
    );
    assert_eq!(code(&jlt(&["sketch", "--kind", "cs", "--stream", s(&ok), "--query", "median"])), 2);
}

#[test]
fn kmeans_reports() {
    let dir = TempDir::new().unwrap();
    let x = p(&dir, "x.jlv");
    jlt(&["gen", "--d", "16", "--count", "6", "--dist", "gaussian", "--seed", "4", "--out", s(&x)]);

    let v: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "kmeans",
        "--k",
        "6",
        "--eps",
        "0.3",
        "--transform",
        "gaussian",
        "--in",
        s(&x),
        "--seed",
        "1",
    ]))
    .unwrap();
    assert_eq!(v["kappa_m"], 0.0);
    assert_eq!(v["kappa_d_lifted"], 0.0);
    assert_eq!(v["kappa_d_direct"], 0.0);
    assert!(v["distances_preserved"].is_boolean());

    let json = p(&dir, "k.json");
    let o = jlt(&[
        "kmeans",
        "--k",
        "2",
        "--eps",
        "0.3",
        "--transform",
        "identity",
        "--in",
        s(&x),
        "--json",
        s(&json),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["m"], 16);
    assert_eq!(v["kappa_m"], v["kappa_d_lifted"]);
    assert_eq!(v["distances_preserved"], true);

    assert_eq!(code(&jlt(&["kmeans", "--k", "7", "--eps", "0.3", "--transform", "srht", "--in", s(&x)])), 2);
}

#[test]
fn bench_csv() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "b.csv");
    let o = jlt(&[
        "bench",
        "--kinds",
        "srht,fh,rademacher",
        "--d-list",
        "64,128",
        "--m",
        "16",
        "--reps",
        "5",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,d,m,median_ns");
    assert_eq!(lines.len(), 1 + 6);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 4);
        assert_eq!(f[2], "16");
        f[3].parse::<f64>().unwrap();
    }
    assert_eq!(code(&jlt(&["bench", "--kinds", "srht", "--d-list", "64", "--m", "16", "--reps", "2"])), 2);
}
