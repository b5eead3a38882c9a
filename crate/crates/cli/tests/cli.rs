use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn golden(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn wallcross(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wallcross"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(cmd: &str, file: &str, extra: &[&str]) -> Value {
    let path = fixture(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, out, err) = wallcross(&args);
    assert_eq!(code, 0, "{cmd} {file}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn goldens_match() {
    for cmd in ["chambers", "wallcross", "fan", "fixed-points", "fm", "monodromy", "ifunction"] {
        assert_eq!(
            report(cmd, "tstar_p12.json", &[]),
            golden(&format!("tstar_p12.{cmd}.json")),
            "{cmd}"
        );
    }
    assert_eq!(report("wallcross", "atiyah.json", &[]), golden("atiyah.wallcross.json"));
    assert_eq!(report("fm", "atiyah.json", &[]), golden("atiyah.fm.json"));
    assert_eq!(
        report("monodromy", "shared_chamber.json", &[]),
        golden("shared_chamber.monodromy.json")
    );
}

#[test]
fn wallcross_tstar_values() {
    let r = report("wallcross", "tstar_p12.json", &[]);
    let res = &r["results"];
    assert_eq!(res["e"], serde_json::json!([1]));
    assert_eq!(res["m_plus"], serde_json::json!([1, 2]));
    assert_eq!(res["m_minus"], serde_json::json!([3, 4]));
    assert_eq!(
        res["tilde"]["characters"],
        serde_json::json!([[1, -1], [2, -2], [-1, 0], [-2, 0], [0, 1]])
    );
}

#[test]
fn fm_tstar_shape() {
    let r = report("fm", "tstar_p12.json", &[]);
    let m = &r["results"]["matrix"];
    assert_eq!(m["entries"].as_array().unwrap().len(), 3);
    assert_eq!(m["columns"], serde_json::json!(["{3}:(0)", "{4}:(0)", "{4}:(1)"]));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn reports_are_deterministic() {
    let path = fixture("rank2_flop.json");
    let p = path.to_str().unwrap();
    for cmd in ["fm", "ifunction", "verify"] {
        let a = wallcross(&[cmd, p]).1;
        let b = wallcross(&[cmd, p]).1;
        assert_eq!(a, b, "{cmd}");
    }
    let a = Command::new(env!("CARGO_BIN_EXE_wallcross"))
        .args(["fm", p])
        .env("WALLCROSS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(a.stdout).unwrap(), wallcross(&["fm", p]).1);
}

#[test]
fn keys_are_sorted() {
    let (_, out, _) = wallcross(&["chambers", fixture("tstar_p12.json").to_str().unwrap()]);
    let keys: Vec<usize> = ["\"checks\"", "\"command\"", "\"input_digest\"", "\"results\"", "\"version\""]
        .iter()
        .map(|k| out.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn exit_codes() {
    let non_cy = fixture("non_cy.json");
    let (code, out, _) = wallcross(&["validate", non_cy.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    let failed = v["results"]["theta_plus"]["failed"].as_array().unwrap();
    assert!(failed.iter().any(|x| x == "plus.calabi_yau"));

    let (code, _, err) = wallcross(&["fm", non_cy.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("violate"));

    let (code, _, err) = wallcross(&["chambers", fixture("float_theta.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("p/q"));

    let (code, _, _) = wallcross(&["chambers", "/nonexistent.json"]);
    assert_eq!(code, 2);

    // a single chamber has no crossing
    let dir = std::env::temp_dir().join(format!("wallcross-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let single = dir.join("single.json");
    std::fs::write(&single, r#"{"rank":1,"n":2,"characters":[[1],[2],[-1],[-2]],"theta_plus":[1]}"#).unwrap();
    let (code, _, _) = wallcross(&["fm", single.to_str().unwrap()]);
    assert_eq!(code, 3);
    let (code, _, _) = wallcross(&["chambers", single.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn verify_passes_on_fixtures() {
    for f in ["tstar_p12.json", "atiyah.json", "rank2_flop.json", "shared_chamber.json"] {
        let r = report("verify", f, &[]);
        assert_eq!(r["results"]["checks_failed"], 0, "{f}");
    }
}

#[test]
fn ifunction_flags() {
    let r = report("ifunction", "tstar_p12.json", &["--side", "minus", "--bound", "1", "--sector-sign", "plus"]);
    let res = &r["results"];
    assert_eq!(res["side"], "minus");
    assert_eq!(res["sector_sign"], "plus");
    let degrees: Vec<&Value> = res["terms"].as_array().unwrap().iter().map(|t| &t["degree"]).collect();
    assert_eq!(degrees, vec![&serde_json::json!(["-1/2"]), &serde_json::json!(["0"]), &serde_json::json!(["1/2"])]);
}

#[test]
fn text_output_and_out_file() {
    let dir = std::env::temp_dir().join(format!("wallcross-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.txt");
    let (code, stdout, _) = wallcross(&[
        "wallcross",
        fixture("tstar_p12.json").to_str().unwrap(),
        "--text",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("results.m_plus: [1, 2]"));
}
