//! Golden CLI cases shared by the golden-file tests and the acceptance run.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub fixture: &'static str,
    pub code: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "derive_product_weight1", fixture: "free_nc", args: &["derive", "--expr", "x*y", "--n", "1"], code: 0 },
    Case { name: "derive_square_weight0", fixture: "free_c", args: &["derive", "--expr", "x*x", "--n", "2"], code: 0 },
    Case { name: "derive_echo", fixture: "free_c", args: &["derive", "--expr", "x*x", "--n", "0"], code: 0 },
    Case { name: "reduce_polyp", fixture: "polyp", args: &["reduce", "--expr", "x^(2)"], code: 0 },
    Case { name: "reduce_cube_lex", fixture: "dual_lex", args: &["reduce", "--expr", "x^(1)^3"], code: 0 },
    Case { name: "reduce_cyclic3", fixture: "cyclic3", args: &["reduce", "--expr", "x^(2)*x^3"], code: 0 },
    Case { name: "member_polyp_derivative", fixture: "polyp", args: &["member", "--expr", "d^3(x+y+1)"], code: 0 },
    Case { name: "member_polyp_y5", fixture: "polyp", args: &["member", "--expr", "y^(5)"], code: 1 },
    Case { name: "member_dual_cube", fixture: "dual_deglex", args: &["member", "--expr", "x^(1)^3"], code: 1 },
    Case { name: "compose_dual_2_1", fixture: "dual_deglex", args: &["compose", "--i", "2", "--j", "1"], code: 1 },
    Case { name: "compose_cyclic3_1_0", fixture: "cyclic3", args: &["compose", "--i", "1", "--j", "0"], code: 1 },
    Case { name: "check_dual_deglex", fixture: "dual_deglex", args: &["check-gs", "--max-order", "2"], code: 1 },
    Case { name: "check_dual_lex", fixture: "dual_lex", args: &["check-gs", "--max-order", "4"], code: 0 },
    Case { name: "check_dual_weight1", fixture: "dual_weight1", args: &["check-gs", "--max-order", "4"], code: 0 },
    Case { name: "check_polyp", fixture: "polyp", args: &["check-gs"], code: 0 },
    Case { name: "check_weyl", fixture: "weyl", args: &["check-gs", "--max-order", "4"], code: 0 },
    Case { name: "check_cyclic2", fixture: "cyclic2", args: &["check-gs"], code: 1 },
    Case { name: "check_not_classical", fixture: "not_classical", args: &["check-gs"], code: 2 },
    Case { name: "complete_cyclic2", fixture: "cyclic2", args: &["complete"], code: 0 },
    Case { name: "complete_cyclic3", fixture: "cyclic3", args: &["complete"], code: 0 },
    Case { name: "complete_cyclic4", fixture: "cyclic4", args: &["complete"], code: 0 },
    Case { name: "complete_dual_deglex", fixture: "dual_deglex", args: &["complete", "--max-order", "2", "--rounds", "2"], code: 1 },
    Case { name: "basis_cyclic3_weight1", fixture: "cyclic3_weight1", args: &["basis", "--max-degree", "4", "--max-order", "2", "--verify"], code: 0 },
    Case { name: "basis_polyp", fixture: "polyp", args: &["basis", "--max-degree", "2", "--max-order", "2", "--verify"], code: 0 },
    Case { name: "basis_polyp_d1m1", fixture: "polyp", args: &["basis", "--max-degree", "1", "--max-order", "1", "--verify"], code: 0 },
    Case { name: "basis_dual_weight1", fixture: "dual_weight1", args: &["basis", "--max-degree", "2", "--max-order", "1", "--verify"], code: 0 },
    Case { name: "basis_dual_lex", fixture: "dual_lex", args: &["basis", "--max-degree", "4", "--max-order", "4", "--verify"], code: 0 },
];

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn run(case: &Case) -> (String, i32) {
    let fixture = dir().join("fixtures").join(format!("{}.toml", case.fixture));
    let out = Command::new(env!("CARGO_BIN_EXE_diffgsb"))
        .args(case.args)
        .arg("--file")
        .arg(&fixture)
        .arg("--json")
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    (stdout, out.status.code().expect("exit code"))
}


/// Compares every case against its golden file; returns the names that differ.
pub fn golden_mismatches() -> Vec<&'static str> {
    let mut out = Vec::new();
    for case in CASES {
        let (json, code) = run(case);
        let path = dir().join("golden").join(format!("{}.json", case.name));
        match std::fs::read_to_string(&path) {
            Ok(want) if want == json && code == case.code => {}
            _ => out.push(case.name),
        }
    }
    out
}
