//! Answers the stored corpus encodings from their bytes alone.

use std::path::PathBuf;

use ote_decoder::{DecodeError, Encoding};

fn fixtures() -> Vec<(String, Vec<u8>, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.unwrap().file_name().into_string().ok())
        .filter_map(|f| f.strip_suffix(".ote").map(str::to_string))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let bytes = std::fs::read(dir.join(format!("{name}.ote"))).unwrap();
            let ans = std::fs::read_to_string(dir.join(format!("{name}.answers"))).unwrap();
            (name, bytes, ans)
        })
        .collect()
}

#[test]
fn corpus_answers_from_bytes() {
    let cases = fixtures();
    assert_eq!(cases.len(), 12);
    for (name, bytes, ans) in cases {
        let enc = Encoding::parse(&bytes).unwrap();
        let n = enc.n();
        let mut expected = ans.chars().filter(|c| !c.is_whitespace());
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let got = enc.query(a, b, c).unwrap().symbol();
                    assert_eq!(Some(got.chars().next().unwrap()), expected.next(), "{name} ({a},{b},{c})");
                }
            }
        }
        assert_eq!(expected.next(), None, "{name}: answer count");
    }
}

#[test]
fn labels_out_of_range() {
    let (_, bytes, _) = fixtures().into_iter().find(|f| f.0 == "grid_3x3").unwrap();
    let enc = Encoding::parse(&bytes).unwrap();
    assert!(matches!(enc.query(0, 1, 9), Err(DecodeError::IndexOutOfRange { index: 9, n: 9 })));
}

#[test]
fn truncated_files_are_rejected() {
    let (_, bytes, _) = fixtures().into_iter().find(|f| f.0 == "pappus").unwrap();
    for len in [0, 7, 40, bytes.len() / 2, bytes.len() - 1] {
        assert!(Encoding::parse(&bytes[..len]).is_err(), "prefix of {len} bytes parsed");
    }
}
