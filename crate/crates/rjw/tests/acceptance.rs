//! One line per acceptance criterion. Exits non-zero when a criterion fails
//! that is not listed in `KNOWN_FAILURES`, or when a listed one starts passing.

use std::time::{Duration, Instant};

use rjw::fixtures::{compare_ko, ko_fixture};
use rjw::suites::completion_suite;
use rjw_core::bss::{cp, pt, zero_line, TruncationBox};
use rjw_core::cpbasis::{self, CpContext};
use rjw_core::fgl::{build_fgl, verify_construction};
use rjw_core::report::Report;
use rjw_core::structure::{self, degree_uniqueness_check, emit_presentation, relation_suite};

/// Height one: the law fixed by the 2-series normalization is not the
/// multiplicative one, so xi has a nonzero w^2 coefficient.
const KNOWN_FAILURES: &[u32] = &[3];

type Outcome = Result<(), String>;

/// (id, label, runtime budget in seconds, check)
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn need(rep: &Report, label: &str) -> Outcome {
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {} ({})", label, c.name, c.witness.as_deref().unwrap_or("-"))),
    }
}

fn boxed(n: u32, spec: &str) -> Result<TruncationBox, String> {
    TruncationBox::parse(n, spec).map_err(|e| e.to_string())
}

fn fgl_consistency() -> Outcome {
    for n in 1..=3 {
        let f = build_fgl(n, 20).map_err(|e| e.to_string())?;
        need(&verify_construction(&f), &format!("n={}", n))?;
    }
    Ok(())
}

fn conjugation_congruences() -> Outcome {
    for n in 2..=3 {
        let ctx = CpContext::new(n, 20).map_err(|e| e.to_string())?;
        let rep = cpbasis::congruence_suite(&ctx).map_err(|e| e.to_string())?;
        need(&rep, &format!("n={}", n))?;
    }
    Ok(())
}

fn xi_extraction() -> Outcome {
    let mut errs = Vec::new();
    for n in 1..=3 {
        let ctx = CpContext::new(n, 32).map_err(|e| e.to_string())?;
        let xi = ctx.xi().map_err(|e| e.to_string())?;
        if let Some(d) = cpbasis::xi_identity_holds(&ctx, &xi) {
            errs.push(format!("n={}: xi(uh uh*) differs from uh + uh* at uh^{}", n, d));
        }
        if let Err((l, c)) = cpbasis::in_vhat_subring(&xi) {
            errs.push(format!("n={}: w^{} coefficient {} outside Z_(2)[vh]", n, l, c));
        }
        let lead = structure::completion_report(n, xi.series(), 8);
        let name = format!("xi = vh{} w^{} mod (w^{}, I)", n, 1 << (n - 1), (1 << (n - 1)) + 1);
        match lead.get(&name) {
            Some(c) if c.status == rjw_core::report::Status::Pass => {}
            Some(c) => errs.push(format!("n={}: {} ({})", n, name, c.witness.as_deref().unwrap_or("-"))),
            None => errs.push(format!("n={}: leading term check missing", n)),
        }
        if n == 1 {
            if let Some((l, c)) = cpbasis::xi_is_minus_w(&xi) {
                errs.push(format!("n=1: xi != -w, coefficient of w^{} is {}", l, c));
            }
        }
    }
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs.join("; "))
    }
}

fn pt_pages() -> Outcome {
    for n in 1..=2 {
        let run = pt::pt_pages(n, &boxed(n, &format!("2,{},1", 1 << (n + 3)))?).map_err(|e| e.to_string())?;
        need(&run.report, &format!("n={}", n))?;
    }
    Ok(())
}

fn cp_e2() -> Outcome {
    for n in 1..=2 {
        let run = cp::cp_e2(n, &boxed(n, &format!("2,{},12", 1 << (n + 2)))?).map_err(|e| e.to_string())?;
        need(&run.report, &format!("n={}", n))?;
    }
    Ok(())
}

fn landweber() -> Outcome {
    for n in 1..=3 {
        let rep = structure::regular_sequence_check(n, 16).map_err(|e| e.to_string())?;
        need(&rep, &format!("n={}", n))?;
    }
    Ok(())
}

fn einf_assembly() -> Outcome {
    for n in 1..=2 {
        let core = boxed(n, "1,8,8")?;
        let pages = cp::cp_pages(n, &core).map_err(|e| e.to_string())?;
        need(&pages.report, &format!("n={} pages", n))?;
        let zl = zero_line::einf_zero_line(n, &core, &pages).map_err(|e| e.to_string())?;
        need(&zl.report, &format!("n={} zero line", n))?;
        if zl.report.get("rank additivity").is_none() {
            return Err(format!("n={}: rank additivity not checked", n));
        }
    }
    Ok(())
}

fn relations() -> Outcome {
    for n in 1..=6 {
        need(&degree_uniqueness_check(n), &format!("degrees n={}", n))?;
    }
    for n in 1..=2 {
        let rep = relation_suite(n, 32).map_err(|e| e.to_string())?;
        need(&rep, &format!("relations n={}", n))?;
    }
    Ok(())
}

fn completion() -> Outcome {
    for n in 1..=3 {
        let rep = completion_suite(n, 16, 8, 0).map_err(|e| e.to_string())?;
        need(&rep, &format!("n={}", n))?;
    }
    Ok(())
}

fn ko_cross_check() -> Outcome {
    let p = emit_presentation(1).map_err(|e| e.to_string())?;
    let diffs = compare_ko(&p, &ko_fixture());
    if diffs.is_empty() {
        Ok(())
    } else {
        Err(diffs.join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "FGL self-consistency, n=1..3, uh-precision 20", 10, fgl_consistency),
        (2, "conjugation congruences, n=2,3", 5, conjugation_congruences),
        (3, "xi extraction, n=1..3, uh-precision 32", 30, xi_extraction),
        (4, "pt pages match closed forms, n=1,2", 60, pt_pages),
        (5, "CP^inf E_2 brute force = closed form, n=1,2", 120, cp_e2),
        (6, "regular sequence on M, n=1..3, w-precision 16", 30, landweber),
        (7, "E_infinity assembly and rank additivity, n=1,2", 120, einf_assembly),
        (8, "degree uniqueness n<=6, relation families n=1,2", 60, relations),
        (9, "Weierstrass division at I-depth 8, n=1..3", 30, completion),
        (10, "height-one presentation matches fixture", 5, ko_cross_check),
    ];
    let mut unexpected = Vec::new();
    let mut total = Duration::ZERO;
    for (id, label, budget, run) in criteria {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        total += dt;
        let timing = format!("{:.1} s of {} s", dt.as_secs_f64(), budget);
        let over = if dt.as_secs() > budget { ", over budget" } else { "" };
        let known = KNOWN_FAILURES.contains(&id);
        match &out {
            Ok(()) => println!("criterion {:2}: PASS  {} [{}{}]", id, label, timing, over),
            Err(e) => println!("criterion {:2}: FAIL  {} [{}{}]: {}", id, label, timing, over, e),
        }
        if out.is_ok() == known {
            unexpected.push(id);
        }
    }
    println!("total {:.1} s", total.as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {:?}", unexpected);
        std::process::exit(1);
    }
}
