#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use hydrogenic_se::dataset::{parse_constants, BUNDLED_CONSTANTS};
use hydrogenic_se::ConstantsSet;

pub fn constants() -> ConstantsSet {
    parse_constants(BUNDLED_CONSTANTS).expect("bundled constants parse")
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Runs the binary and returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hydrogenic-se"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// Direct Lagrange sum; returns the value and Σ|L_i(t) y_i|.
pub fn lagrange(nodes: &[f64], values: &[f64], t: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (i, (&xi, &yi)) in nodes.iter().zip(values).enumerate() {
        let mut w = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if j != i {
                w *= (t - xj) / (xi - xj);
            }
        }
        sum += w * yi;
        scale += (w * yi).abs();
    }
    (sum, scale)
}
