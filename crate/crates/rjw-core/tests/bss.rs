use rjw_core::bss::{cp, pt, zero_line, Bidegree, TruncationBox};

fn boxed(n: u32, spec: &str) -> TruncationBox {
    TruncationBox::parse(n, spec).unwrap()
}

#[test]
fn point_pages_at_height_one() {
    let run = pt::pt_pages(1, &boxed(1, "2,16,1")).unwrap();
    assert!(run.report.passed(), "{:?}", run.report.first_failure());
    assert_eq!(run.pages.len() as u32, pt::last_page(1));
    // the unit survives every page
    for page in &run.pages {
        let cell = page.cells.iter().find(|c| c.bidegree == Bidegree::new(0, 0)).unwrap();
        assert!(cell.safe);
        assert_eq!(cell.invariants.factors(), vec![0]);
    }
}

#[test]
fn quotient_pages_at_height_one() {
    let e2 = cp::cp_e2(1, &boxed(1, "2,8,12")).unwrap();
    assert!(e2.report.passed(), "{:?}", e2.report.first_failure());
    let pages = cp::cp_pages(1, &boxed(1, "1,8,8")).unwrap();
    assert!(pages.report.passed(), "{:?}", pages.report.first_failure());
    let zl = zero_line::einf_zero_line(1, &boxed(1, "1,8,8"), &pages).unwrap();
    assert!(zl.report.passed(), "{:?}", zl.report.first_failure());
    assert!(zl.report.get("rank additivity").is_some());
}

#[test]
fn box_spec_is_validated() {
    assert!(TruncationBox::parse(1, "2,16").is_err());
    assert!(TruncationBox::parse(1, "2,-1,3").is_err());
    assert!(TruncationBox::parse(0, "2,1,3").is_err());
    let b = boxed(2, "2,32,1");
    assert_eq!((b.a_max, b.b_max, b.prec, b.s_max), (2, 32, 1, 7));
}
