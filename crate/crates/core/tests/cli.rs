use std::path::PathBuf;
use std::process::Command;

use g2torsion::cli::*;
use serde_json::{json, Value};

fn req(mode: Mode) -> Request {
    Request { mode: Some(mode), ..Default::default() }
}

fn analyze(p: u64, a: u32, s: i64, t: i64, ell: u64, m: u32) -> Envelope {
    run(&Request { p: Some(p), a: Some(a), s: Some(s), t: Some(t), ell: Some(ell), m: Some(m), ..req(Mode::Analyze) })
}

fn ss(p: u64, a: u32, s: i64, t: i64, ell: Option<u64>) -> Envelope {
    run(&Request { p: Some(p), a: Some(a), s: Some(s), t: Some(t), ell, ..req(Mode::Ss) })
}

fn write_curve(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2torsion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const EX9: &str = r#"{"p":3,"a":1,"model":"sextic","f":[[1],[0],[2],[1],[2],[0],[1]]}"#;

fn bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_g2torsion")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn analyze_examples() {
    let e = analyze(3, 1, 2, 7, 5, 1);
    assert_eq!(e.exit, EXIT_OK);
    let t = &e.json["torsion"];
    assert_eq!((&t["shape"], &t["rank"], &t["kappa"], &t["theorem"]), (&json!("bicyclic"), &json!(2), &json!(4), &json!("Thm7-case2")));
    assert_eq!(e.json["weil"]["order"], 25);

    let e = analyze(3, 1, 0, 0, 5, 1);
    assert_eq!((&e.json["torsion"]["shape"], &e.json["torsion"]["kappa"]), (&json!("cyclic"), &json!(4)));
    let e = analyze(3, 1, 0, 0, 5, 4);
    assert_eq!((&e.json["torsion"]["shape"], &e.json["torsion"]["rank"]), (&json!("full"), &json!(4)));
    assert_eq!(e.json["weil"]["m"], 4);
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(analyze(4, 1, 1, 1, 3, 1).exit, EXIT_INVALID);
    assert_eq!(analyze(7, 1, 0, 0, 3, 1).exit, EXIT_INVALID);
    // (2, 2) over 𝔽₃, ℓ = 5: 5 | 4τ and ℓ is not unramified
    let e = analyze(3, 1, 2, 2, 5, 1);
    assert_eq!(e.exit, EXIT_INCONCLUSIVE);
    assert_eq!(e.json["torsion"]["theorem"], "oracle-needed");
    assert!(!e.json["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn ss_examples() {
    let e = ss(3, 1, 0, 3, None);
    assert_eq!((e.exit, &e.json["supersingular"]["case"]), (EXIT_OK, &json!("II")));
    let e = ss(3, 1, 0, 3, Some(13));
    let cong = e.json["supersingular"]["congruences"].as_array().unwrap();
    assert!(cong.iter().any(|c| c["statement"] == "q^3 ≡ 1 (mod 13)" && c["holds"] == true));
    let e = ss(17, 2, 0, 0, None);
    assert_eq!((e.exit, &e.json["supersingular"]["case"]), (EXIT_OK, &Value::Null));
    // q = 19², case IV with ℓ = 5: the stated congruence fails
    assert_eq!(ss(19, 2, -19, 361, Some(5)).exit, EXIT_MISMATCH);
}

#[test]
fn search_examples() {
    let e = run(&Request { p: Some(3), a: Some(1), s: Some(2), t: Some(7), limit: Some(1), ..req(Mode::Search) });
    let curves = e.json["oracle"]["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 1);
    let e = run(&Request { p: Some(3), a: Some(1), s: Some(0), t: Some(0), limit: Some(5), ..req(Mode::Search) });
    assert_eq!(e.json["oracle"]["curves"].as_array().unwrap().len(), 5);
    let e = run(&Request { p: Some(13), a: Some(2), s: Some(0), t: Some(0), limit: Some(5), ..req(Mode::Search) });
    assert_eq!(e.exit, EXIT_INVALID);
}

#[test]
fn curve_and_pairing_modes() {
    let path = write_curve("ex9.json", EX9);
    let file = Some(path.to_string_lossy().into_owned());
    let e = run(&Request { file: file.clone(), ell: Some(5), max_ext: Some(4), ..req(Mode::Curve) });
    assert_eq!(e.exit, EXIT_OK);
    assert_eq!(e.json["agreement"], "agree");
    let ranks: Vec<_> = e.json["torsion"].as_array().unwrap().iter().map(|t| t["rank"].clone()).collect();
    assert_eq!(ranks, vec![json!(2), json!(2), json!(2), json!(4)]);

    let e = run(&Request { file: file.clone(), ell: Some(5), degree: Some(4), ..req(Mode::Pairing) });
    assert_eq!(e.exit, EXIT_OK);
    assert_eq!(e.json["pairing"]["nondegenerate"], true);
    assert!(e.json["pairing"]["witness"].is_array());
    let e = run(&Request { file, ell: Some(5), degree: Some(3), ..req(Mode::Pairing) });
    assert_eq!(e.exit, EXIT_INVALID);

    let bad = write_curve("bad.json", r#"{"p":3"#);
    let e = run(&Request { file: Some(bad.to_string_lossy().into_owned()), ..req(Mode::Curve) });
    assert_eq!(e.exit, EXIT_INVALID);
}

#[test]
fn auto_ell_curve_report() {
    // y² = x⁵ + 1 over 𝔽₃: P(1) = 10
    let path = write_curve("x5p1.json", r#"{"p":3,"a":1,"model":"quintic","f":[[1],[0],[0],[0],[0],[1]]}"#);
    let e = run(&Request { file: Some(path.to_string_lossy().into_owned()), max_ext: Some(2), ..req(Mode::Curve) });
    assert_eq!(e.exit, EXIT_OK, "{}", e.to_json_string());
    assert!(e.json["torsion"].as_array().unwrap().iter().all(|t| t["ell"] == 5));
}

#[test]
fn example9_is_deterministic_and_round_trips() {
    let a = cmd_example9(&req(Mode::Example9));
    let b = cmd_example9(&req(Mode::Example9));
    assert_eq!(a.exit, EXIT_OK);
    let text = a.to_json_string();
    assert_eq!(text, b.to_json_string());
    let parsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), text);
    assert!(a.json["oracle"]["curve"]["f"].is_array());
}

#[test]
fn binary_exit_codes() {
    assert_eq!(bin(&["analyze", "--p", "3", "--s", "2", "--t", "7", "--ell", "5"]).0, 0);
    assert_eq!(bin(&["analyze", "--p", "3", "--s", "-3", "--t", "7", "--ell", "5", "--json"]).0, 2);
    assert_eq!(bin(&["bogus"]).0, 1);
    assert_eq!(bin(&["analyze", "--p", "x"]).0, 1);
    assert_eq!(bin(&["--help"]).0, 0);
    let (code, out) = bin(&["ss", "--p", "3", "--s", "0", "--t", "3", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["request"]["mode"], "ss");
    let (_, table) = bin(&["ss", "--p", "3", "--s", "0", "--t", "3"]);
    assert!(table.lines().any(|l| l.starts_with("supersingular.case") && l.ends_with("\"II\"")));
}
