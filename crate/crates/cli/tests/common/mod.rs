use std::path::PathBuf;
use std::process::Command;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[allow(dead_code)]
pub fn schema(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name)
}

pub fn omnicap(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_omnicap"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Runs the binary, asserts success, and parses the JSON document.
pub fn run_json(args: &[&str]) -> serde_json::Value {
    let out = omnicap(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

/// Runs the binary expecting failure; returns the exit code.
#[allow(dead_code)]
pub fn run_fail(args: &[&str]) -> i32 {
    let out = omnicap(args);
    assert!(!out.status.success(), "command {args:?} unexpectedly succeeded");
    out.status.code().expect("exit code")
}
