use std::path::PathBuf;
use std::process::{Command, Output};

fn kplanar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kplanar")).args(args).output().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kplanar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn generate_then_check() {
    let f = tmp("star5.kpd");
    let f = f.to_str().unwrap();
    let out = kplanar(&["generate", "--family", "star", "--k", "5", "--out", f]);
    assert!(out.status.success());
    for cmd in ["validate", "check-tight", "check-saturated", "check-style", "check-filled"] {
        let out = kplanar(&[cmd, f]);
        assert_eq!(out.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    // star is not tight at a larger k
    assert_eq!(kplanar(&["check-tight", "--k", "6", f]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(kplanar(&["generate", "--family", "nope", "--k", "4"]).status.code(), Some(2));
    assert_eq!(kplanar(&["validate", "/nonexistent/file.kpd"]).status.code(), Some(2));
    let f = tmp("garbage.kpd");
    std::fs::write(&f, "not a drawing\n").unwrap();
    assert_eq!(kplanar(&["stats", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_report_and_svg() {
    let out = kplanar(&["generate", "--family", "weave", "--k", "4", "--format", "json-report"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
    let out = kplanar(&["generate", "--family", "weave", "--k", "4", "--format", "svg"]);
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.contains("<svg") && svg.contains("data-edge"));
}

#[test]
fn table_small_range() {
    let out = kplanar(&["table", "--k-min", "4", "--k-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}
