use std::path::Path;
use std::process::{Command, Output};

fn orientlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orientlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn run_on_empty_sequence_reports_zero_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    std::fs::write(&s, "").unwrap();
    let out = orientlab(&["run", "--algo", "bf", "--delta", "4", "--seq", p(&s)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["t", "f", "resets", "peak_outdeg", "peak_outdeg_steady", "rounds", "messages", "peak_mem_entries"] {
        assert_eq!(v[key], 0, "{key}");
    }
}

#[test]
fn run_is_byte_identical_across_invocations() {
    let args = ["run", "--algo", "antireset", "--delta", "10", "--alpha", "2", "--gen", "random:alpha=2,n=300,t=3000,deletes=0.3,hubs=0.6", "--seed", "5"];
    let a = orientlab(&args);
    let b = orientlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["peak_outdeg"].as_u64().unwrap() <= 11);
    assert!(v["t"].as_u64().unwrap() >= 3000);
}

#[test]
fn gadget_file_feeds_run_and_flipgame_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let out = orientlab(&["gadget", "random", "--n", "200", "--t", "2000", "--alpha", "2", "--seed", "9", "--deletes", "0.2", "--out", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let out = orientlab(&["run", "--algo", "flipgame-threshold", "--delta-prime", "5", "--seq", p(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["c", "f_cost", "free_flips", "outdeg_charges", "r"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let per_op = dir.path().join("per-op.jsonl");
    let out = orientlab(&["run", "--algo", "matching-local", "--seq", p(&g), "--stream-metrics", p(&per_op)]);
    assert_eq!(out.status.code(), Some(0));
    let lines = std::fs::read_to_string(&per_op).unwrap();
    let seq_len = std::fs::read_to_string(&g).unwrap().lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count();
    assert_eq!(lines.lines().count(), seq_len);
}

#[test]
fn gadgets_write_directed_triggers() {
    let out = orientlab(&["gadget", "gi", "--i", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l.starts_with("ied ")));
    let out = orientlab(&["gadget", "random", "--n", "10", "--t", "10"]);
    assert_eq!(out.status.code(), Some(2), "random gadgets need a seed");
}

#[test]
fn verify_reports_pass_fail_and_skip() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.txt");
    std::fs::write(&tri, "iv 0\niv 1\niv 2\nie 0 1\nie 1 2\nie 0 2\n").unwrap();
    let out = orientlab(&["verify", "--check", "forests", "--single-class", "--seq", p(&tri)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("cycle"), "{}", stdout(&out));

    let out = orientlab(&["verify", "--check", "arboricity", "--gen", "random:alpha=1,n=12,t=40", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("α = 1"), "{}", stdout(&out));

    let out = orientlab(&[
        "verify", "--check", "arboricity,minmaxoutdeg,matching,forests,representation",
        "--delta", "4", "--alpha", "2", "--gen", "random:alpha=2,n=150,t=1500,deletes=0.3", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("arboricity: skip"));
    assert!(text.contains("minmaxoutdeg: pass"));
}

#[test]
fn bench_usage_errors_and_csv() {
    assert_eq!(orientlab(&["bench", "--suite", ""]).status.code(), Some(2));
    assert_eq!(orientlab(&["bench", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(orientlab(&["bench"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let plot = dir.path().join("b.dat");
    let out = orientlab(&["bench", "--suite", "scaling-bf", "--out", p(&csv), "--plot", p(&plot)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 7);
    let f: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(f.windows(2).all(|w| w[0] <= w[1]), "{f:?}");
    assert!(std::fs::read_to_string(&plot).unwrap().starts_with("series,x,y"));

    let out = orientlab(&["bench", "--suite", "competitive", "--quick"]);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio <= 2.0, "{line}");
    }
}

#[test]
fn aborts_exit_3_with_op_index() {
    let out = orientlab(&["run", "--algo", "bf", "--delta", "1", "--gen", "blowup:delta=3,height=4", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("op "));
    let out = orientlab(&["run", "--algo", "bf", "--delta", "4", "--delta-prime", "3", "--gen", "farflip:n=64", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sim_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let out = orientlab(&[
        "sim", "--engine", "matching-dist", "--alpha", "2", "--gen", "random:alpha=2,n=60,t=500,hubs=0.6",
        "--seed", "3", "--round-limit", "1000", "--trace", p(&trace), "--audit",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read_to_string(&trace).unwrap();
    let line: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert!(line["tag"].is_string());
    let out = orientlab(&["sim", "--engine", "antireset-dist", "--alpha", "2", "--gen", "random:alpha=2,n=60,t=500,hubs=0.6", "--seed", "3", "--round-limit", "1"]);
    assert_eq!(out.status.code(), Some(3));
}
