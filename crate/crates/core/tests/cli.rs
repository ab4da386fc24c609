use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dnalex::codefile::CodeFile;

fn dnalex(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dnalex")).args(args).env("DNALEX_OUT", out).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_writes_default_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["construct", "-n", "8", "-P", "gc>=4&lee>=6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=8 size=64 dH=4 minGC=4 gens=3\n");
    let file = CodeFile::parse(&fs::read_to_string(dir.path().join("code-n8.txt")).unwrap()).unwrap();
    assert_eq!(file.codewords.len(), 64);
    assert_eq!(file.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(), ["21111000", "13210100", "32310010"]);
}

#[test]
fn construct_to_stdout_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["construct", "-n", "4", "-P", "gc>=4", "-o", "-", "--dna"]);
    let text = stdout(&o);
    assert!(text.starts_with("n=4 size=16 dH=1 minGC=4 gens=4\n# dnalex code n=4"));
    assert!(text.lines().any(|l| l == "CCCC"));
    let o = dnalex(dir.path(), &["--json", "construct", "-n", "3", "-P", "gc>=3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 8);
    assert_eq!(v["verified"], true);
}

#[test]
fn basis_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let basis = dir.path().join("basis.txt");
    fs::write(&basis, "0010\n0100\n1000\n0001\n").unwrap();
    let o = dnalex(dir.path(), &["construct", "-n", "4", "-b", basis.to_str().unwrap(), "-P", "gc>=4", "-o", "-"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("size=16"));
    let o = dnalex(dir.path(), &["construct", "-n", "5", "-b", basis.to_str().unwrap(), "-P", "gc>=4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn distances() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stdout(&dnalex(dir.path(), &["distance", "GGGG", "GCGC"])), "2\n");
    assert_eq!(stdout(&dnalex(dir.path(), &["distance", "", "ACG"])), "3\n");
    assert_eq!(stdout(&dnalex(dir.path(), &["distance", "0000", "GCGC", "--metric", "hamming"])), "2\n");
    let o = dnalex(dir.path(), &["distance", "ACTA", "CTCG", "--transcript"]);
    assert_eq!(stdout(&o).lines().next(), Some("3"));
    assert_eq!(dnalex(dir.path(), &["distance", "AC", "ACG", "--metric", "hamming"]).status.code(), Some(2));
    let costs = dir.path().join("costs.txt");
    fs::write(&costs, "insertion = 2 2 2 2\ndeletion = 2 2 2 2\n").unwrap();
    let o = dnalex(dir.path(), &["distance", "AC", "CA", "--cost-file", costs.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dnalex(dir.path(), &["construct", "-n", "4", "-P", "gc>>4"]).status.code(), Some(2));
    assert_eq!(dnalex(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(dnalex(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(dnalex(dir.path(), &["bounds", "-n", "x"]).status.code(), Some(2));
    let o = dnalex(dir.path(), &["bounds", "-n", "7", "-d", "5", "-w", "3", "--metric", "hamming"]);
    assert_eq!(o.status.code(), Some(3));
    let o = dnalex(dir.path(), &["bounds", "-n", "7", "-d", "5", "-w", "3", "--metric", "hamming", "--allow-gap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gap"));
}

#[test]
fn bounds_persist_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["bounds", "-n", "2", "-d", "1", "-w", "1", "--metric", "hamming"]);
    assert_eq!(stdout(&o), "A[plain](n=2, d=1, w=1; hamming) = 8 exact [exhaustive-clique]\n");
    let record = dir.path().join("bounds/plain-hamming-n2-d1-w1.json");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(record).unwrap()).unwrap();
    assert_eq!(v["lower"], 8);
    assert_eq!(v["runtime_ms"], serde_json::Value::Null);
    let o = dnalex(dir.path(), &["bounds", "export", "--table"]);
    assert!(stdout(&o).contains("hamming plain n=2"), "{}", stdout(&o));
}

#[test]
fn timings_go_to_a_side_log() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["bounds", "-n", "2", "-d", "1", "-w", "0..1", "--timings"]);
    assert_eq!(o.status.code(), Some(0));
    let log = fs::read_to_string(dir.path().join("bounds/timings.log")).unwrap();
    assert_eq!(log.lines().count(), 2);
}

#[test]
fn relations_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["bounds", "-n", "1..3", "-d", "1..3", "-w", "all", "--metric", "edit", "--check-relations"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let symmetry = text.lines().find(|l| l.starts_with("gc-symmetry")).unwrap();
    assert!(symmetry.contains("finding=0") && !symmetry.contains("pass=0"), "{symmetry}");
    assert!(!text.lines().any(|l| l.contains("FINDING gc-symmetry")));
    assert!(text.contains("FINDING half-weight-four       edit    n=2 d=1 w=1  lhs=8 rhs=4"));
}

#[test]
fn convert_words_and_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stdout(&dnalex(dir.path(), &["convert", "21111000", "--to", "dna"])), "CAAAAGGG\n");
    assert_eq!(stdout(&dnalex(dir.path(), &["convert", "CAAAAGGG", "--to", "z4"])), "21111000\n");
    dnalex(dir.path(), &["construct", "-n", "6", "-P", "gc>=3", "--dna"]);
    let dna = dir.path().join("code-n6.txt");
    let z4 = stdout(&dnalex(dir.path(), &["convert", dna.to_str().unwrap(), "--to", "z4"]));
    let fasta = stdout(&dnalex(dir.path(), &["convert", dna.to_str().unwrap(), "--to", "fasta"]));
    let original = CodeFile::parse(&fs::read_to_string(&dna).unwrap()).unwrap();
    assert_eq!(CodeFile::parse(&z4).unwrap(), original);
    assert_eq!(CodeFile::parse(&fasta).unwrap(), original);
    assert_eq!(dnalex(dir.path(), &["convert", "ACGX", "--to", "z4"]).status.code(), Some(2));
}

#[test]
fn verify_reports_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("words.txt");
    fs::write(&file, "GGGG\nCCCC\nGCGC\nCGCG\n").unwrap();
    let o = dnalex(dir.path(), &["verify", file.to_str().unwrap(), "gc>=4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verification: PASS\n"), "{}", stdout(&o));
    fs::write(&file, "GGGG\nAGGG\n").unwrap();
    let o = dnalex(dir.path(), &["verify", file.to_str().unwrap(), "gc>=4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("verification: FAIL\n"));
}

#[test]
fn table_findings_do_not_change_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = dnalex(dir.path(), &["tables", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FINDING"));
    assert_eq!(dnalex(dir.path(), &["tables", "5"]).status.code(), Some(2));
}
