use std::path::Path;
use std::process::{Command, Output};

fn c2lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_c2lab")).args(args).output().expect("run c2lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangle_polynomial_infix() {
    let o = c2lab(&["poly", "--builtin", "C3", "--infix"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "x1 + x2 + x3");
}

#[test]
fn k4_has_sixteen_spanning_trees() {
    let o = c2lab(&["poly", "--builtin", "K4", "--spanning-tree-check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let terms = stdout(&o).lines().filter(|l| l.starts_with("1 x")).count();
    assert_eq!(terms, 16);
}

#[test]
fn k4_c2_is_minus_one() {
    let o = c2lab(&["c2", "--builtin", "K4", "--method", "both", "--primes", "2,3,5,7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let q: u32 = r[0].parse().unwrap();
        assert_eq!(r[1].parse::<u32>().unwrap(), q - 1);
        assert_eq!(r[2], "1");
    }
}

#[test]
fn i101_small_primes() {
    let o = c2lab(&["i101", "--max-prime", "7"]);
    assert!(o.status.success());
    let col: Vec<String> =
        stdout(&o).lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().to_string()).collect();
    assert_eq!(col, ["1", "0", "1", "4"]);
}

fn pipeline(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["pipeline", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    c2lab(&args)
}

#[test]
fn pipeline_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--builtin", "K5", "--builtin", "O3", "--builtin", "K5K5", "--primes", "2,3,5,7,11,13"];
    let first = pipeline(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let tsv = std::fs::read_to_string(dir.path().join("report.tsv")).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(json.is_object());

    let rows: Vec<&str> = tsv.lines().collect();
    assert_eq!(rows[0], "graph\tancestor\tlabel\t-c2@2\t-c2@3\t-c2@5\t-c2@7\t-c2@11\t-c2@13");
    // K5 and O3 share the K5 ancestor, so one result file covers both
    let k5 = rows.iter().find(|r| r.starts_with("K5\t")).unwrap();
    assert!(k5.ends_with("\t1\t1\t1\t1\t1\t1\t1"), "{k5}");
    let glued = rows.iter().find(|r| r.starts_with("K5K5\t")).unwrap();
    assert!(glued.ends_with("\t0\t0\t0\t0\t0\t0\t0"), "{glued}");

    let files = || std::fs::read_dir(dir.path().join("results")).unwrap().count();
    let before = files();
    let second = pipeline(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(files(), before);
    assert_eq!(std::fs::read_to_string(dir.path().join("report.tsv")).unwrap(), tsv);
}

#[test]
fn pipeline_config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [&["--builtin", "K5", "--primes", "3,2"][..], &["--builtin", "K5", "--primes", "4"], &[]] {
        let o = pipeline(dir.path(), bad);
        assert_eq!(o.status.code(), Some(3), "{bad:?}");
    }
}

#[test]
fn generated_files_feed_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("graphs");
    let o = c2lab(&["generate", "5", "--out", g.to_str().unwrap()]);
    assert!(o.status.success());
    let files: Vec<_> = std::fs::read_dir(&g).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 2);
    let mut args: Vec<&str> = Vec::new();
    for f in &files {
        args.extend(["--file", f.to_str().unwrap()]);
    }
    args.extend(["--primes", "2,3,5"]);
    let o = pipeline(&dir.path().join("out"), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn classify_quasi_constant() {
    let o = c2lab(&["classify", "--minus-c2", "0,1,1,1,1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "-z2");
}
