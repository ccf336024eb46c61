use std::path::PathBuf;
use std::process::{Command, Output};

use cmodlab_core::invariants::InvariantReport;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cmodlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmodlab")).args(args).env_remove("CMODLAB_SEED").output().expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn report_triple_fiber_product() {
    let o = cmodlab(&["report", data("triple.cm").to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], "cmodlab/1");
    for (k, want) in [("phi", 2), ("psi", 1), ("eta_val", 1), ("rank", 1), ("defect", 1)] {
        assert_eq!(v[k], want, "{k}");
    }
}

#[test]
fn report_json_round_trips() {
    let o = cmodlab(&["report", data("bmx22.cm").to_str().unwrap(), "--json"]);
    let v = json(&o);
    let r: InvariantReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&r).unwrap(), v["report"]);
    assert_eq!((r.phi_length, r.psi_length, r.defect), (2, 2, 0));
    let again = cmodlab(&["report", data("bmx22.cm").to_str().unwrap(), "--json"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn report_lambda_one_is_all_zero() {
    let v = json(&cmodlab(&["report", data("lambda1.cm").to_str().unwrap(), "--json"]));
    assert_eq!((v["phi"].as_u64(), v["psi"].as_u64(), v["defect"].as_i64()), (Some(0), Some(0), Some(0)));
}

#[test]
fn report_selects_modules() {
    let f = data("modules.cm");
    let all = json(&cmodlab(&["report", f.to_str().unwrap(), "--json"]));
    assert_eq!(all["results"].as_array().unwrap().len(), 3);
    let p = json(&cmodlab(&["report", f.to_str().unwrap(), "--module", "P", "--json"]));
    assert_eq!((p["psi"].as_u64(), p["rank"].as_u64()), (Some(0), Some(0)));
    assert_eq!(code(&cmodlab(&["report", f.to_str().unwrap(), "--module", "Q"])), 2);
    let table = stdout(&cmodlab(&["report", f.to_str().unwrap()]));
    assert!(table.starts_with("module"));
    assert_eq!(table.lines().filter(|l| l.ends_with("C0Direct")).count(), 3);
}

#[test]
fn report_error_codes() {
    let o = cmodlab(&["report", data("bad_aug.cm").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("BadAugmentationForm"));
    assert_eq!(code(&cmodlab(&["report", "/nonexistent/file.cm"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dual.cm");
    std::fs::write(&path, "p=3; fiber y; rel y^2\n[lambda-structure]\nbasis 1, y\nmult y*y = [0, 0]\n").unwrap();
    let o = cmodlab(&["report", path.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("NotInCategory"));

    let path = dir.path().join("garbage.cm");
    std::fs::write(&path, "p=3; fiber x; rel x^^2\n").unwrap();
    assert_eq!(code(&cmodlab(&["report", path.to_str().unwrap()])), 2);
}

#[test]
fn deform_by_p_cubed_t() {
    let o = cmodlab(&["deform", data("bmx22.cm").to_str().unwrap(), "--elem", "8t", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["orders"][0], 3);
    assert_eq!((v["before"]["phi"].as_u64(), v["before"]["psi"].as_u64()), (Some(2), Some(2)));
    assert_eq!((v["after"]["phi"].as_u64(), v["after"]["psi"].as_u64()), (Some(5), Some(5)));
    assert_eq!((v["before"]["defect"].as_i64(), v["after"]["defect"].as_i64()), (Some(0), Some(0)));
    assert_eq!(v["identities"]["psi"], true);

    let text = stdout(&cmodlab(&["deform", data("bmx22.cm").to_str().unwrap(), "--elem", "t"]));
    assert!(text.contains("ord(t) = 0"));
    assert_eq!(text.matches("holds").count(), 3);
}

#[test]
fn deform_errors() {
    let f = data("bmx22.cm");
    let o = cmodlab(&["deform", f.to_str().unwrap(), "--elem", "x"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("TorsionResidue"));
    let o = cmodlab(&["deform", f.to_str().unwrap(), "--elem", "t", "--elem", "2t"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("DependentResidues"));
    assert_eq!(code(&cmodlab(&["deform", f.to_str().unwrap(), "--elem", "z"])), 2);
}

#[test]
fn sweep_examples() {
    let o = cmodlab(&["sweep", data("bmx21.cm").to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!((v["psi"].as_u64(), v["stabilized"].as_bool(), v["agrees"].as_bool()), (Some(1), Some(true), Some(true)));

    let o = cmodlab(&["sweep", data("lambda1.cm").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("stabilized: true"));

    let o = cmodlab(&["sweep", data("steep.cm").to_str().unwrap()]);
    assert_eq!(code(&o), 6);
    assert!(stderr(&o).contains("PrecisionExhausted"));

    assert_eq!(code(&cmodlab(&["sweep", data("triple.cm").to_str().unwrap()])), 2);
}

#[test]
fn verify_laws() {
    let o = cmodlab(&["verify", "L9", "--seed", "7", "--samples", "10", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["laws"][0]["samples"], 10);
    assert_eq!(v["laws"][0]["seed"], 7);
    assert_eq!(v["laws"][0]["status"], "Pass");

    let o = cmodlab(&["verify", "L99"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown law"));

    let o = cmodlab(&["verify", "L1-L12", "--samples", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().filter(|l| l.contains(" pass ")).count(), 12);
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cmodlab"))
        .args(["verify", "L2", "--samples", "3", "--json"])
        .env("CMODLAB_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&o)["laws"][0]["seed"], 99);
    let o = Command::new(env!("CARGO_BIN_EXE_cmodlab")).args(["verify", "L2", "--samples", "3"]).env("CMODLAB_SEED", "x").output().unwrap();
    assert_eq!(code(&o), 2);
}
