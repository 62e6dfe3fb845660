use tpp_core::bounds::{omega_bound_for_certificate, OmegaOutcome};
use tpp_core::constructions::{catalog, construct};
use tpp_core::group::parse_descriptor;
use tpp_core::report::{certificate_to_json, full_report, load_certificate, render_text, report_row};
use tpp_core::search::{search, SearchConfig, SearchMode};
use tpp_core::tpp::{lift_direct_product, reverify};

#[test]
fn certificates_round_trip_through_json() {
    for entry in catalog().iter().filter(|e| e.family != "wreath" || e.params[0] <= 4) {
        let cert = entry.build().unwrap();
        let json = certificate_to_json(&cert);
        let back = load_certificate(&json).unwrap().certificate().unwrap();
        assert_eq!(back.subsets, cert.subsets, "{}", entry.label());
        assert_eq!(back.construction, cert.construction);
        assert_eq!(report_row(&entry.label(), &back, 0, false), report_row(&entry.label(), &cert, 0, false));
    }
}

#[test]
fn report_is_deterministic() {
    let a = full_report(0, false);
    let b = full_report(0, false);
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(render_text(&a), render_text(&b));
    assert_eq!(a.len(), catalog().len());
    assert!(a.iter().all(|r| r.verified));
}

#[test]
fn product_of_realizations() {
    let s3 = construct("s3", &[]).unwrap();
    let d5 = construct("d5", &[]).unwrap();
    let lifted = lift_direct_product(&s3, &d5).unwrap();
    assert_eq!(lifted.shape(), [4, 4, 6]);
    assert_eq!(lifted.group.order(), 60);
    assert!(reverify(&lifted).unwrap().is_verified());
    let json = certificate_to_json(&lifted);
    assert!(load_certificate(&json).unwrap().is_verified());
}

#[test]
fn searched_triples_feed_bounds() {
    for desc in ["sym:3", "dihedral:5", "dihedral:6"] {
        let g = parse_descriptor(desc).unwrap();
        let best = search(&SearchConfig::new(g.clone(), SearchMode::Subsets)).unwrap().best.unwrap();
        let deg = tpp_core::report::degrees_for(&g, 0).unwrap();
        let bound = omega_bound_for_certificate(&best, &deg).unwrap();
        assert_eq!(bound.outcome, OmegaOutcome::Trivial, "{desc}");
    }
}

#[test]
fn d5_optimum_is_two_two_three() {
    let r = search(&SearchConfig::new(parse_descriptor("dihedral:5").unwrap(), SearchMode::Subsets)).unwrap();
    assert!(r.exhaustive);
    assert_eq!(r.nmp(), 12);
    assert_eq!(r.best.unwrap().shape(), [2, 2, 3]);
}

#[test]
fn frob_subgroup_search_matches_construction() {
    let r = search(&SearchConfig::new(parse_descriptor("frob80").unwrap(), SearchMode::Subgroups)).unwrap();
    let best = r.best.unwrap();
    let built = construct("frob80", &[]).unwrap();
    assert_eq!(best.shape(), built.shape());
    assert!((best.alpha_upper().unwrap() - built.alpha_upper().unwrap()).abs() < 1e-12);
}
