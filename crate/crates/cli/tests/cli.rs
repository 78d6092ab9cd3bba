use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn multiloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiloc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("multiloc-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

fn read_report(path: &Path) -> Vec<Value> {
    serde_json::from_str::<Value>(&std::fs::read_to_string(path).unwrap()).unwrap().as_array().unwrap().clone()
}

#[test]
fn ope_prints_canonical_text() {
    for (lhs, rhs, want) in [
        ("chi(e^0 z)", "chi(e^0 z)", "1/(z+w) * Id"),
        ("<beta_chi>", "<gamma_chi>", "1/(z^2-w^2) * Id"),
        ("<h_chi_tw>", "<h_chi_tw>", "-(z^2+w^2)/(2*(z^2-w^2)^2) * Id"),
    ] {
        let out = multiloc(&["ope", "chi2", lhs, rhs]);
        assert!(out.status.success());
        assert_eq!(stdout(&out).lines().next(), Some(want));
    }
    let out = multiloc(&["ope", "chi2", "chi(e^0 z)", "chi(e^1 z)"]);
    assert!(stdout(&out).contains("locality (1, 0)"));
}

#[test]
fn ope_reports_parse_errors_with_position() {
    let out = multiloc(&["ope", "chi2", "chi(e^0 z", "chi(e^0 z)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at"));
    let wrong_system = multiloc(&["ope", "betagamma", "<beta_chi>", "beta(e^0 z)"]);
    assert_eq!(wrong_system.status.code(), Some(2));
}

#[test]
fn appendix_for_one_n() {
    let out = multiloc(&["verify", "appendix", "--n", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS appendix.n4.")).count(), 8);
    assert!(text.contains("appendix: 8 passed, 0 failed, 0 errors"));
}

#[test]
fn virasoro_l1_reports_c_four() {
    let dir = scratch("virasoro");
    let path = dir.join("report.json");
    let out = multiloc(&["verify", "virasoro", "--family", "L1", "--a", "1/2", "--b", "1/3", "--report", path.to_str().unwrap()]);
    assert!(out.status.success());
    let reports = read_report(&path);
    let main = reports.iter().find(|r| r["id"] == "virasoro.L1").unwrap();
    assert_eq!(main["status"], "pass");
    assert!(main["computed"].as_str().unwrap().starts_with("c = 4"));
    assert_eq!(main["parameters"]["a"], "1/2");
    assert_eq!(main["parameters"]["b"], "1/3");
    assert_eq!(main["schema"], 1);
}

#[test]
fn fock_untwisted_heisenberg() {
    let out = multiloc(&["verify", "fock", "--field", "h_chi_utw", "--cutoff-e", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS fock.h_chi_utw.modes: [h_m, h_n] = -m delta(m+n), |m|, |n| <= 3: 49 brackets"));
    assert!(text.contains("PASS fock.oracle.h_chi_utw.h_chi_utw"));
}

#[test]
fn suite_flag_and_positional_agree() {
    let a = multiloc(&["verify", "ope"]);
    let b = multiloc(&["verify", "--suite", "ope"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn golden_corpus_matches_and_mismatches_fail() {
    let golden = golden_dir();
    let out = multiloc(&["verify", "ope", "--golden", golden.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));

    let dir = scratch("golden");
    std::fs::write(dir.join("ope.chi.chi.txt"), "1/(z-w) * Id\n").unwrap();
    let out = multiloc(&["verify", "ope", "--golden", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL ope.chi.chi"));

    let blessed = scratch("bless");
    assert!(multiloc(&["verify", "ope", "--golden", blessed.to_str().unwrap(), "--bless"]).status.success());
    for entry in std::fs::read_dir(&blessed).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), std::fs::read_to_string(golden.join(name)).unwrap());
    }
}

#[test]
fn iso_fails_only_on_the_solitary_identification() {
    let dir = scratch("iso");
    let path = dir.join("iso.json");
    let out = multiloc(&["verify", "iso", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let reports = read_report(&path);
    let failing: Vec<&str> = reports.iter().filter(|r| r["status"] != "pass").map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(failing, ["iso.solitary_identification"]);
    let ids: Vec<&str> = reports.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn reports_are_deterministic() {
    let dir = scratch("determinism");
    let strip = |path: &Path| -> Vec<Value> {
        read_report(path)
            .into_iter()
            .map(|mut r| {
                r.as_object_mut().unwrap().remove("wall_time_ms");
                r
            })
            .collect()
    };
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&a, &b] {
        assert!(multiloc(&["verify", "symplectic", "--n", "2", "--report", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(multiloc(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(multiloc(&["verify", "virasoro", "--family", "L9"]).status.code(), Some(2));
    assert_eq!(multiloc(&["verify", "virasoro", "--a", "x/"]).status.code(), Some(2));
    let out = multiloc(&["verify", "appendix", "--n", "1", "--report", "/nonexistent-dir/r.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write report"));
}
