use std::path::{Path, PathBuf};
use std::process::Command;

use cinf::cli::{AlgebraFile, AlgebraRef, MorphismFile, TableEntry};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn cinf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cinf")).args(args).output().expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().expect("exit code"), text)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cinf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_exit_codes() {
    let (code, out) = cinf(&["check", path(&data("s2s2s5_p1_q1.json")), "--max-degree", "12"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = cinf(&["check", path(&data("s2s2s5_bad_xxx.json")), "--max-degree", "12"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("shuffle"), "{out}");
    let (code, out) = cinf(&["check", path(&data("malformed_rational.json")), "--max-degree", "4"]);
    assert_eq!(code, 2, "{out}");
    let (code, _) = cinf(&["check", "/nonexistent.json", "--max-degree", "4"]);
    assert_eq!(code, 2);
    let (code, _) = cinf(&["check", path(&data("sphere_2.json"))]);
    assert_eq!(code, 2, "degree bound is mandatory");
}

#[test]
fn invariant_reports() {
    let (code, out) = cinf(&["invariants", "pi", path(&data("s2s2s5_x.json")), "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("PI_RANKS: π²:2 π³:3 π⁴:2"), "{out}");
    let (_, out) = cinf(&["invariants", "pi", path(&data("s2s2s5_y.json")), "--max-degree", "4"]);
    assert!(out.contains("π⁴:1"), "{out}");
    let (_, out) = cinf(&["invariants", "classify-example", "--p", "1", "--q", "0", "--p2", "0", "--q2", "0"]);
    assert!(out.contains("CLASSIFICATION: different-type"), "{out}");
    let (_, out) = cinf(&["invariants", "classify-example", "--p", "1", "--q", "0", "--p2", "-1/2", "--q2", "3"]);
    assert!(out.contains("same-type"), "{out}");
    let (_, out) = cinf(&["invariants", "formality", path(&data("s2s2s5_y.json")), "--max-arity", "4"]);
    assert!(out.contains("FORMALITY: nonformal"), "{out}");
    let (_, out) = cinf(&["invariants", "bar", path(&data("sphere_3.json")), "--max-degree", "4", "--json"]);
    assert!(out.contains("BAR_HOMOLOGY: H⁰:1 H¹:0 H²:1 H³:0 H⁴:1"), "{out}");
    assert!(out.contains("\"bar_homology\""), "{out}");
    let (code, out) = cinf(&["invariants", "realize", path(&data("y_to_s5.json")), "--max-arity", "4"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("OBSTRUCTION_ARITY: 3"), "{out}");
    let (code, _) = cinf(&["invariants", "realize", path(&data("x_to_s5.json")), "--max-arity", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn shipped_corpus_is_canonical() {
    for entry in std::fs::read_dir(data("")).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_name().unwrap().to_str().unwrap().to_string();
        if name.starts_with("malformed") {
            continue;
        }
        let text = std::fs::read_to_string(&p).unwrap();
        let again = if text.contains("\"components\"") {
            MorphismFile::from_json(&text).unwrap().to_json()
        } else {
            let f = AlgebraFile::from_json(&text).unwrap();
            f.load().unwrap_or_else(|e| panic!("{name}: {e}"));
            f.to_json()
        };
        assert_eq!(again, text, "{name}");
    }
}

#[test]
fn transfer_round_trip_and_determinism() {
    let (s1, m1, s2) = (scratch("m1.json"), scratch("mm1.json"), scratch("m2.json"));
    let args = |out: &PathBuf, extra: &[&str]| {
        let mut v = vec!["transfer".to_string(), path(&data("massey_dga.json")).to_string()];
        v.extend(["--max-arity", "4", "--max-degree", "6", "--cinf", "--seed", "3", "--out", path(out)].map(String::from));
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let run = |a: Vec<String>| cinf(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let (code, out) = run(args(&s1, &["--morphism-out", path(&m1)]));
    assert_eq!(code, 0, "{out}");
    let (code, _) = run(args(&s2, &[]));
    assert_eq!(code, 0);
    let a = std::fs::read_to_string(&s1).unwrap();
    assert_eq!(a, std::fs::read_to_string(&s2).unwrap(), "same seed, same bytes");
    assert!(a.contains("\"3\""), "Massey triple yields an arity-3 table");
    let reparsed = AlgebraFile::from_json(&a).unwrap();
    assert_eq!(reparsed.to_json(), a);
    let (code, out) = cinf(&["check", path(&m1), "--max-degree", "6"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn transfers_with_different_seeds_are_isomorphic() {
    let outs: Vec<PathBuf> = [1, 2].iter().map(|s| scratch(&format!("r{s}.json"))).collect();
    for (seed, out) in [1, 2].iter().zip(&outs) {
        let (code, text) = cinf(&[
            "transfer",
            path(&data("random_cdga_7.json")),
            "--max-arity",
            "4",
            "--max-degree",
            "12",
            "--cinf",
            "--seed",
            &seed.to_string(),
            "--out",
            path(out),
        ]);
        assert_eq!(code, 0, "{text}");
    }
    let (a, b) = (std::fs::read_to_string(&outs[0]).unwrap(), std::fs::read_to_string(&outs[1]).unwrap());
    assert_ne!(a, b, "the splittings should give different tables");
    let src = AlgebraFile::read(&outs[0]).unwrap();
    let tgt = AlgebraFile::read(&outs[1]).unwrap();
    // identity on classes, matched by position
    let f1: Vec<TableEntry> = src
        .generators
        .iter()
        .zip(&tgt.generators)
        .filter(|(g, _)| Some(&g.name) != src.unit.as_ref())
        .map(|(g, h)| TableEntry { on: vec![g.name.clone()], value: vec![(h.name.clone(), "1".into())] })
        .collect();
    let m = MorphismFile {
        source: AlgebraRef::Inline(Box::new(src)),
        target: AlgebraRef::Inline(Box::new(tgt)),
        components: [("1".to_string(), f1)].into(),
    };
    let mf = scratch("id.json");
    std::fs::write(&mf, m.to_json()).unwrap();
    let (code, out) = cinf(&["invariants", "realize", path(&mf), "--max-arity", "4"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("REALIZATION: extended"), "{out}");
}
