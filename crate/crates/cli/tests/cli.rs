use std::path::Path;
use std::process::Command;

use ote_decoder::format::Section;
use ote_decoder::Header;

fn ote(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ote")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_and_query_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let (pts, enc) = (dir.path().join("tri.txt"), dir.path().join("tri.ote"));
    std::fs::write(&pts, "0 0\n1 0\n0 1\n").unwrap();
    let (ok, out, _) = ote(&["encode", s(&pts), "-o", s(&enc)]);
    assert!(ok);
    assert!(out.contains("total_bits="));
    assert_eq!(ote(&["query", s(&enc), "1", "2", "3"]).1, "+\n");
    assert_eq!(ote(&["query", s(&enc), "2", "1", "3"]).1, "-\n");
    assert_eq!(ote(&["query", s(&enc), "1", "1", "2"]).1, "0\n");
    let (ok, _, err) = ote(&["query", s(&enc), "1", "2", "4"]);
    assert!(!ok && err.contains("index 4 out of range"), "{err}");
    let (ok, out, _) = ote(&["query", s(&enc), "1", "2", "3", "--trace"]);
    assert!(ok && out.contains("steps"));
}

#[test]
fn garbage_line_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("bad.txt");
    std::fs::write(&pts, "0 0\n1 1\nx\n").unwrap();
    let (ok, _, err) = ote(&["encode", s(&pts), "-o", s(&dir.path().join("bad.ote"))]);
    assert!(!ok);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.txt");
    std::fs::write(&pts, "0 0\n1 0\n0 1\n").unwrap();
    let out = s(&dir.path().join("p.ote")).to_string();
    assert!(!ote(&["encode", s(&pts), "-o", &out, "--r", "1"]).0);
    assert!(!ote(&["encode", s(&pts), "-o", &out, "--t", "2"]).0);
}

#[test]
fn wiring_round_trip_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let (w, enc) = (dir.path().join("w.txt"), dir.path().join("w.ote"));
    std::fs::write(&w, "n=4\n0\n1\n2\n0\n1\n0\n").unwrap();
    assert!(ote(&["encode", s(&w), "-o", s(&enc)]).0);
    let (ok, out, _) = ote(&["verify", s(&w), s(&enc), "--all"]);
    assert!(ok && out.contains("4 triples checked, 0 zero, 0 mismatches"), "{out}");
    let (ok, out, _) = ote(&["verify", s(&w), s(&enc), "--samples", "50"]);
    assert!(ok && out.contains("50 triples checked"), "{out}");
}

#[test]
fn tampered_slope_order_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/random_50.txt");
    let enc = dir.path().join("r.ote");
    assert!(ote(&["encode", s(&corpus), "-o", s(&enc)]).0);
    let mut bytes = std::fs::read(&enc).unwrap();
    let range = Header::parse(&bytes).unwrap().section_range(Section::SlopeOrder, bytes.len());
    // past the count and width fields, inside the packed ranks
    bytes[range.start + 20] ^= 0xff;
    std::fs::write(&enc, &bytes).unwrap();
    let (ok, out, err) = ote(&["verify", s(&corpus), s(&enc), "--all"]);
    assert!(!ok, "{out}{err}");
    assert!(out.contains("mismatch (") || err.contains("malformed"), "{out}{err}");
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    assert!(ote(&["bench", "--sizes", "16,32", "--queries", "100", "-o", s(&csv)]).0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("n,mode,r,t,seed,encode_ms,bits_total,bits_per_section,"));
    assert!(!ote(&["bench", "--sizes", "4"]).0);
}
