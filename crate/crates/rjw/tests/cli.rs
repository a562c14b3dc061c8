use std::path::Path;
use std::process::{Command, Output};

use rjw::cli::compute_pages;
use rjw::config::PageSel;
use rjw_core::bss::Space;

fn rjw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rjw")).args(args).env("RJW_THREADS", "4").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    rjw(args).status.code().expect("exit code")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&["verify", "--n", "0"]), 2);
    assert_eq!(code(&["verify", "--n", "1", "--u-prec", "8", "--w-prec", "16"]), 2);
    assert_eq!(code(&["verify", "--n", "1", "--suite", "nonsense"]), 2);
    assert_eq!(code(&["bss", "--n", "1", "--space", "torus"]), 2);
    assert_eq!(code(&["bss", "--n", "1", "--box", "1,2"]), 2);
    assert_eq!(code(&["fgl", "--frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn runtime_failures_exit_with_one() {
    assert_eq!(code(&["bss", "--n", "1", "--page", "99"]), 1);
}

#[test]
fn xi_at_height_one_starts_with_minus_w() {
    let out = rjw(&["xi", "--n", "1", "--w-prec", "16", "--out", "json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["xi"]["coefficients"][0], "0");
    assert_eq!(v["xi"]["coefficients"][1], "-1");
    assert_eq!(v["xi"]["prec"], 16);
}

#[test]
fn verify_reports_follow_the_schema() {
    let out = rjw(&["verify", "--n", "1", "--suite", "landweber", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], "landweber");
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        assert_eq!(c["status"], "pass");
        assert!(c.get("witness").is_some());
    }
}

#[test]
fn verify_all_at_height_two_passes() {
    assert_eq!(code(&["verify", "--n", "2", "--suite", "all"]), 0);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["verify", "--n", "1", "--suite", "completion", "--seed", "7", "--json"][..],
        &["bss", "--n", "1", "--space", "pt", "--out", "json"][..],
        &["fgl", "--n", "2", "--u-prec", "10", "--w-prec", "5", "--series", "law", "--out", "json"][..],
    ] {
        let a = rjw(args);
        let b = rjw(args);
        assert!(a.status.success(), "{:?}", args);
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}

#[test]
fn pages_json_has_cell_schema() {
    let v = json_of(&rjw(&["bss", "--n", "1", "--space", "pt", "--page", "2", "--out", "json"]));
    assert_eq!(v["r"], 2);
    let cell = v["cells"].as_array().unwrap().iter().find(|c| c["i"] == 0 && c["j"] == 0).unwrap();
    assert_eq!(cell["safe"], true);
    assert_eq!(cell["invariantFactors"], serde_json::json!([0]));
    assert!(cell["generators"].is_array());
}

fn svg_dots(path: &Path) -> (usize, Vec<String>) {
    let text = std::fs::read_to_string(path).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("valid xml");
    let circles: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("circle")).collect();
    let labels = circles
        .iter()
        .filter_map(|c| c.children().find(|t| t.has_tag_name("title")).and_then(|t| t.text()).map(String::from))
        .collect();
    (circles.len(), labels)
}

#[test]
fn chart_is_valid_svg_with_one_dot_per_nonzero_safe_cell() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pt1.svg");
    let status = rjw(&["bss", "--space", "pt", "--n", "1", "--page", "all", "--out", "svg", "--file", file.to_str().unwrap()]);
    assert!(status.status.success());
    let pages = compute_pages(1, Space::Pt, None, PageSel::All).unwrap();
    let want: usize = pages.iter().map(|p| p.cells.iter().filter(|c| c.safe && !c.invariants.is_zero()).count()).sum();
    let (dots, labels) = svg_dots(&file);
    assert_eq!(dots, want);
    assert!(labels.iter().any(|l| l == "(0, 0) Z_(2)"));
    // the temporary file is renamed away
    let leftovers: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 1);
}

#[test]
fn chart_subcommand_forces_svg() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cp1.svg");
    let out = rjw(&["chart", "--space", "cp", "--n", "1", "--page", "2", "--file", file.to_str().unwrap()]);
    assert!(out.status.success());
    let (dots, _) = svg_dots(&file);
    assert!(dots > 0);
}

#[test]
fn csv_lists_every_cell() {
    let out = rjw(&["bss", "--n", "1", "--space", "pt", "--page", "1", "--out", "csv"]);
    assert!(out.status.success());
    let pages = compute_pages(1, Space::Pt, None, PageSel::One(1)).unwrap();
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["r", "i", "j", "safe", "invariant_factors", "generators"]);
    assert_eq!(rdr.records().count(), pages[0].cells.len());
}
