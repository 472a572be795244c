use std::collections::HashSet;
use std::io::Write;

use icll_core::automata::minimize_dfa;
use icll_core::corpus::{build_benchmark, read_corpus, write_corpus, write_corpus_to, BenchmarkParams};
use icll_core::rng::seeded;
use icll_core::Error;

fn bench(n_train: usize, n_test: usize, seed: u64) -> icll_core::corpus::Benchmark {
    let mut rng = seeded(seed);
    build_benchmark(&BenchmarkParams::default(), n_train, n_test, seed, &mut rng).unwrap().0
}

#[test]
fn file_round_trip() {
    let b = bench(30, 10, 61);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    write_corpus(&b, &path).unwrap();
    let back = read_corpus(&path).unwrap();
    assert_eq!(back.train.len(), 30);
    assert_eq!(back.test.len(), 10);
    for (x, y) in b.train.iter().chain(&b.test).zip(back.train.iter().chain(&back.test)) {
        assert_eq!(x.strings, y.strings);
        assert_eq!(x.tokens, y.tokens);
        assert_eq!(x.dfa(), y.dfa());
    }
    let mut again = Vec::new();
    write_corpus_to(&back, &mut again).unwrap();
    assert_eq!(again, std::fs::read(&path).unwrap());
}

#[test]
fn languages_are_distinct_and_instances_well_formed() {
    let b = bench(200, 50, 62);
    let forms: HashSet<_> = b.train.iter().chain(&b.test).map(|i| minimize_dfa(i.dfa())).collect();
    assert_eq!(forms.len(), 250);
    for inst in b.train.iter().chain(&b.test) {
        assert!((10..=20).contains(&inst.strings.len()));
        for s in &inst.strings {
            assert!((1..=50).contains(&s.len()));
            assert!(inst.dfa().accepts(s));
        }
    }
}

#[test]
fn same_seed_same_bytes() {
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_corpus_to(&bench(20, 5, 63), &mut a).unwrap();
    write_corpus_to(&bench(20, 5, 63), &mut b).unwrap();
    assert_eq!(a, b);
    let mut c = Vec::new();
    write_corpus_to(&bench(20, 5, 64), &mut c).unwrap();
    assert_ne!(a, c);
}

fn corrupt(edit: impl FnOnce(&mut Vec<String>)) -> Error {
    let mut buf = Vec::new();
    write_corpus_to(&bench(2, 1, 65), &mut buf).unwrap();
    let mut lines: Vec<String> = String::from_utf8(buf).unwrap().lines().map(String::from).collect();
    edit(&mut lines);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all((lines.join("\n") + "\n").as_bytes()).unwrap();
    read_corpus(f.path()).unwrap_err()
}

#[test]
fn version_mismatch_is_reported() {
    let e = corrupt(|l| l[0] = l[0].replace("\"version\":\"1\"", "\"version\":\"9\""));
    assert!(matches!(e, Error::VersionMismatch { .. }), "{e}");
}

#[test]
fn malformed_record_names_its_line() {
    let e = corrupt(|l| l[2] = "{not json".into());
    assert!(matches!(e, Error::MalformedRecord { line: 3, .. }), "{e}");
}

#[test]
fn invalid_strings_are_rejected() {
    let e = corrupt(|l| {
        let mut rec: serde_json::Value = serde_json::from_str(&l[1]).unwrap();
        rec["strings"][0] = serde_json::json!([]);
        l[1] = rec.to_string();
    });
    assert!(matches!(e, Error::MalformedRecord { line: 2, .. }), "{e}");
    let e = corrupt(|l| {
        let mut rec: serde_json::Value = serde_json::from_str(&l[1]).unwrap();
        let first = rec["strings"][0][0].as_u64().unwrap();
        // repeating the first symbol needs a self-loop, which sampled automata lack
        rec["strings"][0] = serde_json::json!([first, first]);
        l[1] = rec.to_string();
    });
    assert!(matches!(e, Error::MalformedRecord { line: 2, .. }), "{e}");
}

#[test]
fn missing_record_is_rejected() {
    let e = corrupt(|l| {
        l.pop();
    });
    assert!(matches!(e, Error::MalformedRecord { .. } | Error::InvalidParams(_)), "{e}");
}
