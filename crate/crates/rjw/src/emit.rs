//! JSON, CSV and SVG renderings of pages and reports.

use std::io;
use std::path::Path;

use serde_json::{json, Value};

use rjw_core::bss::Page;
use rjw_core::report::Report;

pub fn report_json(r: &Report) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "status": c.status.as_str(), "witness": c.witness}))
        .collect();
    json!({"suite": r.suite, "checks": checks})
}

pub fn report_text(r: &Report) -> String {
    let mut out = String::new();
    for c in &r.checks {
        out.push_str(&format!("[{}] {}: {}", r.suite, c.status.as_str().to_uppercase(), c.name));
        if let Some(w) = &c.witness {
            out.push_str(&format!(" ({})", w));
        }
        out.push('\n');
    }
    out
}

pub fn page_json(p: &Page) -> Value {
    let cells: Vec<Value> = p
        .cells
        .iter()
        .map(|c| {
            json!({
                "i": c.bidegree.i,
                "j": c.bidegree.j,
                "safe": c.safe,
                "invariantFactors": c.invariants.factors(),
                "generators": c.generators,
            })
        })
        .collect();
    json!({"r": p.r, "cells": cells})
}

/// Flat listing; invariant factors are joined with ';', 0 meaning Z_(2).
pub fn pages_csv(pages: &[Page]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "i", "j", "safe", "invariant_factors", "generators"]).expect("in-memory write");
    for p in pages {
        for c in &p.cells {
            let factors: Vec<String> = c.invariants.factors().iter().map(|f| f.to_string()).collect();
            w.write_record([
                p.r.to_string(),
                c.bidegree.i.to_string(),
                c.bidegree.j.to_string(),
                c.safe.to_string(),
                factors.join(";"),
                c.generators.join(";"),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Group label like "Z_(2)+Z/2".
pub fn group_label(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|&f| if f == 0 { "Z_(2)".to_string() } else { format!("Z/{}", f) })
        .collect::<Vec<_>>()
        .join("+")
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const PAD: f64 = 40.0;

/// One panel per page: filtration i across, internal degree j up; one dot
/// per nonzero safe cell.
pub fn pages_svg(title: &str, pages: &[Page]) -> String {
    let height = PAD + pages.len() as f64 * (PANEL_H + PAD);
    let width = PANEL_W + 2.0 * PAD;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        width, height, width, height
    );
    s.push_str(&format!("<title>{}</title>\n", escape(title)));
    for (k, p) in pages.iter().enumerate() {
        let top = PAD + k as f64 * (PANEL_H + PAD);
        let cells: Vec<_> = p.cells.iter().filter(|c| c.safe && !c.invariants.is_zero()).collect();
        let imax = p.cells.iter().map(|c| c.bidegree.i).max().unwrap_or(0).max(1) as f64;
        let jmin = p.cells.iter().map(|c| c.bidegree.j).min().unwrap_or(0) as f64;
        let jmax = p.cells.iter().map(|c| c.bidegree.j).max().unwrap_or(0) as f64;
        let jspan = (jmax - jmin).max(1.0);
        s.push_str(&format!("<g class=\"page\" data-r=\"{}\">\n", p.r));
        s.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
            PAD, top, PANEL_W, PANEL_H
        ));
        s.push_str(&format!("<text x=\"{}\" y=\"{}\" font-size=\"12\">E_{}</text>\n", PAD, top - 6.0, p.r));
        for c in cells {
            let x = PAD + 10.0 + (c.bidegree.i as f64 / imax) * (PANEL_W - 20.0);
            let y = top + PANEL_H - 10.0 - ((c.bidegree.j as f64 - jmin) / jspan) * (PANEL_H - 20.0);
            let label = format!("({}, {}) {}", c.bidegree.i, c.bidegree.j, group_label(&c.invariants.factors()));
            s.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" data-i=\"{}\" data-j=\"{}\"><title>{}</title></circle>\n",
                x,
                y,
                c.bidegree.i,
                c.bidegree.j,
                escape(&label)
            ));
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{}.tmp", name));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
