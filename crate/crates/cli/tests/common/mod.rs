//! Shared helpers for the binary-level tests: the golden cases and a
//! runner for the `motivic` binary.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_motivic");

pub fn motivic(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("MOTIVIC_EXT_MEM_BUDGET")
        .output()
        .expect("binary runs")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Golden cases: file name and arguments.
pub const CASES: &[(&str, &[&str])] = &[
    (
        "milnor_q5_degree2.tsv",
        &["--q", "5", "milnor", "--degree", "2"],
    ),
    (
        "milnor_q3_products.json",
        &["--q", "3", "milnor", "--products", "--format", "json"],
    ),
    (
        "hstar_q5.txt",
        &[
            "--q",
            "5",
            "hstar",
            "--window",
            "-1:4,-5:1",
            "--format",
            "txt",
        ],
    ),
    (
        "ext_q3_cobar.tsv",
        &["--q", "3", "ext", "--window", "-1:5,-6:1", "--smax", "4"],
    ),
    (
        "ext_q5_closed.json",
        &[
            "--q", "5", "ext", "--oracle", "closed", "--window", "0:4,-5:0", "--smax", "3",
            "--format", "json",
        ],
    ),
    (
        "ass_q3_kgl_towers.tsv",
        &[
            "--q",
            "3",
            "ass",
            "--spectrum",
            "kgl",
            "--towers",
            "--window",
            "0:5,-6:0",
        ],
    ),
    (
        "ass_q5_bpgl_e3.tsv",
        &[
            "--q",
            "5",
            "ass",
            "--spectrum",
            "bpgl",
            "--page",
            "3",
            "--window",
            "0:3,-4:0",
            "--smax",
            "4",
        ],
    ),
    (
        "ass_q9_bpgl0_einf.json",
        &[
            "--q",
            "9",
            "ass",
            "--spectrum",
            "bpgl0",
            "--window",
            "0:4,-5:0",
            "--format",
            "json",
        ],
    ),
    (
        "coeff_q3_kgl_3.json",
        &[
            "--q",
            "3",
            "coeff",
            "--spectrum",
            "kgl",
            "--degree",
            "3,0",
            "--format",
            "json",
        ],
    ),
    (
        "coeff_q5_bpgl_window.tsv",
        &[
            "--q",
            "5",
            "coeff",
            "--spectrum",
            "bpgl",
            "--window",
            "0:4,-4:0",
        ],
    ),
    (
        "kdeg_q3_m3.txt",
        &["--q", "3", "kdeg", "--m", "3", "--format", "txt"],
    ),
    (
        "chart_q5_hstar.svg",
        &[
            "--q",
            "5",
            "chart",
            "--spectrum",
            "hstar",
            "--window",
            "-1:6,-6:1",
        ],
    ),
    (
        "chart_q3_kgl_einf.svg",
        &[
            "--q",
            "3",
            "chart",
            "--spectrum",
            "kgl",
            "--window",
            "0:4,-5:0",
        ],
    ),
    (
        "chart_q5_bpgl0_e2.svg",
        &[
            "--q",
            "5",
            "chart",
            "--spectrum",
            "bpgl0",
            "--page",
            "2",
            "--window",
            "0:4,-5:0",
            "--smax",
            "3",
        ],
    ),
];

pub fn with_threads(args: &[&str], threads: &'static str) -> Vec<String> {
    let mut v = vec!["--threads".to_string(), threads.to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    v
}
