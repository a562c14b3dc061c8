//! Expected structures shipped with the binary.

use serde::Deserialize;

use rjw_core::structure::{AlgebraPresentation, RelationKind};

/// The height-one presentation: KO_(2)^*(CP^∞).
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct KoFixture {
    pub n: u32,
    pub algebra_generators: Vec<String>,
    pub x_annihilates: Vec<String>,
    pub redundant: Vec<String>,
    pub right_term: String,
}

pub const KO_N1: &str = include_str!("../fixtures/ko_n1.json");

pub fn ko_fixture() -> KoFixture {
    serde_json::from_str(KO_N1).expect("bundled fixture parses")
}

/// Differences between a presentation and the fixture, empty on a match.
pub fn compare_ko(p: &AlgebraPresentation, fx: &KoFixture) -> Vec<String> {
    let mut diffs = Vec::new();
    if p.n != fx.n {
        diffs.push(format!("height {} vs {}", p.n, fx.n));
    }
    let mut got: Vec<String> = p.algebra_generators().into_iter().map(String::from).collect();
    let mut want = fx.algebra_generators.clone();
    got.sort();
    want.sort();
    if got != want {
        diffs.push(format!("generators {:?} vs {:?}", got, want));
    }
    let mut killed: Vec<String> = p
        .relations
        .iter()
        .filter(|r| r.kind == RelationKind::XAnnihilates)
        .filter_map(|r| r.text.strip_prefix("x * ").and_then(|t| t.strip_suffix(" = 0")).map(String::from))
        .collect();
    let mut want_killed = fx.x_annihilates.clone();
    killed.sort();
    want_killed.sort();
    if killed != want_killed {
        diffs.push(format!("x-annihilated {:?} vs {:?}", killed, want_killed));
    }
    if p.redundant != fx.redundant {
        diffs.push(format!("redundant {:?} vs {:?}", p.redundant, fx.redundant));
    }
    if p.ses.right != fx.right_term {
        diffs.push(format!("right term {} vs {}", p.ses.right, fx.right_term));
    }
    diffs
}
