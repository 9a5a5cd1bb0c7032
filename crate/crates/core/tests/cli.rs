use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use dirflag::cli::{run, EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_USAGE};
use dirflag::digraph::Digraph;
use dirflag::homotopy::{MultiStepWitness, SystemKind, WitnessDoc};
use dirflag::io::{parse_graph, to_flag};

const SUSPENDED_PAIR: &str = "# W E N S\ndim 0\n0 0 0 0\ndim 1\n0 1\n1 0\n2 0\n2 1\n3 0\n3 1\n";
const WEIGHTED_PAIR: &str = "edgelist\na b 1\nb a 1\n";
const APPENDAGE: &str = "edgelist\na b 1\nb a 1\nc a 1\n";
const RECIPROCAL: &str = "dim 0\n0 0\ndim 1\n0 1\n1 0\n";

fn temp_file(contents: &str) -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir().join(format!(
        "dirflag-cli-{}-{}.txt",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::write(&path, contents).unwrap();
    path
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn dirflag(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dirflag").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn homology_of_suspended_pair() {
    let f = temp_file(SUSPENDED_PAIR);
    let r = dirflag(&["homology", path_str(&f)]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "1 0 1\n"));
    let r = dirflag(&["homology", path_str(&f), "--complex", "allowed"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "1 0 0\n"));
    let r = dirflag(&["homology", path_str(&f), "--json", "--field", "3"]);
    let doc: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(doc["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn homology_of_empty_graph() {
    let f = temp_file("dim 0\n\ndim 1\n");
    let r = dirflag(&["homology", path_str(&f)]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "0 0 0\n"));
}

#[test]
fn barcodes() {
    let f = temp_file(WEIGHTED_PAIR);
    let r = dirflag(&["barcode", path_str(&f)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.lines().any(|l| l == "1,1,inf"), "{}", r.out);

    let f = temp_file(APPENDAGE);
    let r = dirflag(&["barcode", path_str(&f)]);
    assert!(r.out.lines().any(|l| l == "1,1,2"), "{}", r.out);

    let f = temp_file("edgelist\nv\n");
    let r = dirflag(&["barcode", path_str(&f), "--max-degree", "2"]);
    assert_eq!(r.out, "degree,birth,death\n0,0,inf\n");

    let f = temp_file(WEIGHTED_PAIR);
    let r = dirflag(&["barcode", path_str(&f), "--pipeline", "grounded-h1", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!(doc.is_object());
}

#[test]
fn homotopy_verdicts() {
    let f = temp_file(RECIPROCAL);
    let p = path_str(&f);
    let r = dirflag(&["homotopy", p, "--map-f", "0 1", "--map-g", "0 0"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("absent (exhausted"), "{}", r.out);

    let out = temp_file("");
    let r = dirflag(&["homotopy", p, "--map-f", "0,1", "--map-g", "0,0", "--system", "A", "--witness-out", path_str(&out)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("witness ("), "{}", r.out);
    let doc: WitnessDoc = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w = MultiStepWitness::from_doc(&doc).unwrap();
    let g = Digraph::complete(2);
    w.verify(&SystemKind::A, &g, &g).unwrap();
    assert_eq!(w.source().image(), &[0, 1]);
    assert_eq!(w.target().image(), &[0, 0]);

    let r = dirflag(&["homotopy", p, "--map-f", "1 0", "--map-g", "1 0"]);
    assert_eq!(r.out, "equal\n");
}

#[test]
fn homotopy_budget_exhaustion() {
    let f = temp_file(RECIPROCAL);
    let r = dirflag(&["homotopy", path_str(&f), "--map-f", "0 1", "--map-g", "0 0", "--budget", "1"]);
    assert_eq!(r.code, EXIT_BUDGET);
    assert!(r.out.starts_with("inconclusive"), "{}", r.out);
}

#[test]
fn malformed_input_fails_without_output() {
    let f = temp_file("dim 0\n0 0\ndim 1\n0 1\n0 7\n");
    for args in [vec!["homology"], vec!["barcode"]] {
        let mut a = args.clone();
        a.push(path_str(&f));
        let r = dirflag(&a);
        assert_eq!(r.code, EXIT_PARSE);
        assert!(r.out.is_empty());
        assert!(r.err.contains("line 5"), "{}", r.err);
    }
    let f = temp_file("edgelist\na b -1\n");
    let r = dirflag(&["barcode", path_str(&f)]);
    assert_eq!(r.code, EXIT_PARSE);
    assert!(r.out.is_empty() && r.err.contains("line 2"), "{}", r.err);

    let f = temp_file("hello\n");
    let r = dirflag(&["homology", path_str(&f)]);
    assert_eq!(r.code, EXIT_PARSE);
    assert!(r.err.contains("line 1"));

    let g = temp_file(RECIPROCAL);
    let r = dirflag(&["homotopy", path_str(&g), "--map-f", "0", "--map-g", "0 0"]);
    assert_eq!(r.code, EXIT_PARSE);
    assert!(r.out.is_empty());
}

#[test]
fn usage_errors() {
    let r = dirflag(&["homology"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.out.is_empty());
    let r = dirflag(&["homology", "/nonexistent/graph.flag"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = dirflag(&["experiment", "nope"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.out.is_empty());
    let r = dirflag(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("homology"));
}

#[test]
fn experiment_reports_are_reproducible() {
    let a = dirflag(&["experiment", "subdiv-dag", "--seed", "7", "--trials", "6"]);
    let b = dirflag(&["experiment", "subdiv-dag", "--seed", "7", "--trials", "6"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
    let doc: serde_json::Value = serde_json::from_str(&a.out).unwrap();
    assert_eq!(doc["status"], "pass");

    for name in ["subdiv-nondag", "appendage"] {
        let r = dirflag(&["experiment", name]);
        let doc: serde_json::Value = serde_json::from_str(&r.out).unwrap();
        assert_eq!(doc["status"], "instability reproduced");
    }
    let r = dirflag(&["experiment", "derangement"]);
    assert!(r.out.contains("44"), "{}", r.out);
    let r = dirflag(&["experiment", "cylinder-k2"]);
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn flag_round_trip() {
    for text in [SUSPENDED_PAIR, WEIGHTED_PAIR, APPENDAGE, "dim 0\n0 1/2 3\ndim 1\n0 2 5/3\n2 1 inf\n1 0\n"] {
        let a = parse_graph(text).unwrap();
        let b = parse_graph(&to_flag(&a)).unwrap();
        let c = parse_graph(&to_flag(&b)).unwrap();
        assert_eq!(b, c);
        assert_eq!(a.edges, b.edges);
        assert_eq!(a.vertex_values, b.vertex_values);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dirflag");
    let f = temp_file(SUSPENDED_PAIR);
    let out = Command::new(bin).args(["homology", path_str(&f)]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 0 1\n");
    let bad = temp_file("dim 0\n0\ndim 1\n0 0\n");
    let out = Command::new(bin).args(["homology", path_str(&bad)]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = Command::new(bin).env("DIRFLAG_THREADS", "1").args(["experiment", "appendage"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
