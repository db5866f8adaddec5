use std::path::Path;
use std::process::{Command, Output};

fn patchwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patchwork")).args(args).output().expect("binary runs")
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(format!("{name}.json"));
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["construct", name];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &p]);
    let out = patchwork(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lemma56_euler_characteristic() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "lemma56", &[]);
    let out = patchwork(&["analyze", &f, "--chi"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("euler           -18"));
    let json = patchwork(&["analyze", &f, "--chi", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["euler"], -18);
}

#[test]
fn prop53_and_prop51_components() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "prop53", &["--m", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&patchwork(&["analyze", &f, "--betti", "--json"]).stdout).unwrap();
    assert_eq!(v["topology"]["components"], 16);
    let f = construct(dir.path(), "prop51", &["--n", "2", "--m", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&patchwork(&["analyze", &f, "--betti", "--json"]).stdout).unwrap();
    assert_eq!(v["topology"]["betti"], serde_json::json!([1, 1]));
    let f = construct(dir.path(), "prop51", &["--n", "3", "--m", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&patchwork(&["analyze", &f, "--betti", "--json"]).stdout).unwrap();
    assert_eq!(v["topology"]["betti"], serde_json::json!([2, 0, 2]));
}

#[test]
fn construct_is_byte_deterministic() {
    let a = patchwork(&["construct", "prop57", "--k", "2,1,1"]);
    let b = patchwork(&["construct", "prop57:2,1,1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn all_plus_signs_give_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "prop51", &["--n", "2", "--m", "4"]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    for s in v["signs"].as_array_mut().unwrap() {
        *s = "+".into();
    }
    std::fs::write(&f, v.to_string()).unwrap();
    let out = patchwork(&["analyze", &f, "--betti", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["topology"]["betti"], serde_json::json!([0, 0]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // invalid parameters
    assert_eq!(patchwork(&["construct", "prop53", "--m", "3"]).status.code(), Some(2));
    assert_eq!(patchwork(&["construct", "nonsense"]).status.code(), Some(2));
    // schema errors
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"format":"patchwork-problem/9"}"#).unwrap();
    assert_eq!(patchwork(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    // unsupported dimension
    let f = construct(dir.path(), "lemma56", &[]);
    assert_eq!(patchwork(&["render", &f, "--svg"]).status.code(), Some(2));
    // a violated exact check: heights that do not certify convexity
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    for h in v["heights"].as_array_mut().unwrap() {
        let x: i64 = h.as_str().unwrap().parse().unwrap();
        *h = (-x).to_string().into();
    }
    std::fs::write(&f, v.to_string()).unwrap();
    assert_eq!(patchwork(&["analyze", &f, "--chi"]).status.code(), Some(3));
}

#[test]
fn render_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "prop53", &["--m", "8"]);
    let svg = dir.path().join("f.svg");
    let out = patchwork(&["render", &f, "--svg", "--base", "-o", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    // one oval of three segments around each of the 16 interior - vertices
    let curve = text.split(r#"<g id="curve""#).nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(curve.matches("<line").count(), 48);
    assert_eq!(text.matches(r##"fill="#ffffff""##).count(), 16);
    let again = patchwork(&["render", &f, "--svg", "--base"]);
    assert_eq!(again.stdout, text.as_bytes());

    let l = construct(dir.path(), "lemma56", &[]);
    let off = patchwork(&["render", &l, "--off"]);
    assert_eq!(off.status.code(), Some(0));
    assert!(stdout(&off).starts_with("OFF\n"));
}

#[test]
fn verify_small_suite() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct(dir.path(), "prop51", &["--n", "3", "--m", "4"]);
    let out = patchwork(&["verify", "--instances", "8", &f]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("built-in constructions: ok"));
    let seq = patchwork(&["--sequential", "verify", "--instances", "8", "--json", &f]);
    let par = patchwork(&["verify", "--instances", "8", "--json", &f]);
    assert_eq!(seq.stdout, par.stdout);
}
