use proptest::prelude::*;
use rjw::config::{default_pt_box, PageSel, RunConfig, Suite};
use rjw::emit::{group_label, pages_svg, report_json, report_text};
use rjw_core::report::Report;

proptest! {
    #[test]
    fn group_labels_list_each_factor(fs in prop::collection::vec(prop::sample::select(vec![0u64, 2, 4, 8, 16]), 0..5)) {
        let label = group_label(&fs);
        if fs.is_empty() {
            prop_assert_eq!(label, "0");
        } else {
            prop_assert_eq!(label.split('+').count(), fs.len());
            prop_assert_eq!(label.matches("Z_(2)").count(), fs.iter().filter(|&&f| f == 0).count());
        }
    }

    #[test]
    fn svg_titles_are_escaped(title in "[ -~]{0,40}") {
        let svg = pages_svg(&title, &[]);
        let doc = roxmltree::Document::parse(&svg).expect("valid xml");
        let t = doc.descendants().find(|n| n.has_tag_name("title")).unwrap();
        prop_assert_eq!(t.text().unwrap_or(""), title.as_str());
    }

    #[test]
    fn report_json_round_trips_names(names in prop::collection::vec("[a-z <>&\"]{1,20}", 1..6), mask in any::<u8>()) {
        let mut rep = Report::new("xi");
        for (k, n) in names.iter().enumerate() {
            rep.push(n.clone(), mask & (1 << k) == 0, (k % 2 == 0).then(|| format!("w^{}", k)));
        }
        let v = report_json(&rep);
        let text = serde_json::to_string(&v).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &v);
        let checks = back["checks"].as_array().unwrap();
        prop_assert_eq!(checks.len(), names.len());
        for (c, n) in checks.iter().zip(&names) {
            prop_assert_eq!(c["name"].as_str().unwrap(), n.as_str());
        }
        prop_assert_eq!(report_text(&rep).lines().count(), names.len());
    }
}

#[test]
fn config_validation() {
    let mut cfg = RunConfig { n: 1, ..RunConfig::default() };
    assert!(cfg.validate().is_ok());
    cfg.bx = Some(default_pt_box(1));
    assert!(cfg.validate().is_ok());
    cfg.w_prec = 17;
    assert!(cfg.validate().is_err());
    cfg.w_prec = 16;
    cfg.n = 0;
    assert!(cfg.validate().is_err());
    assert_eq!(Suite::parse_selection("all").unwrap().len(), 6);
    assert_eq!("3".parse::<PageSel>().unwrap(), PageSel::One(3));
    assert!("x".parse::<PageSel>().is_err());
}
