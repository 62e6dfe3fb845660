use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn g(desc: &str) -> FiniteGroup {
    parse_descriptor(desc).unwrap()
}

const SMALL: &[&str] = &[
    "cyclic:1",
    "cyclic:7",
    "dihedral:1",
    "dihedral:4",
    "dihedral:5",
    "sym:4",
    "sl2:2",
    "sl2:3",
    "add:8",
    "units:16:5",
    "prod(cyclic:2,sym:3)",
    "power(dihedral:3,2)",
    "wreath:c2:2",
    "wreath:3:2",
    "bilinear:3:1",
    "frob80",
];

const LARGE: &[&str] = &[
    "sym:9",
    "sl2:49",
    "sl2:8",
    "wreath:c8:4",
    "wreath:c12:6",
    "bilinear:3:2",
    "bilinear:5:2",
    "bilinear:3:3",
    "power(dihedral:4,6)",
    "prod(sl2:5,frob80)",
];

#[test]
fn orders() {
    let cases = [
        ("dihedral:4", 8),
        ("sym:5", 120),
        ("sl2:3", 24),
        ("sl2:4", 60),
        ("sl2:9", 720),
        ("sl2:49", 117_600),
        ("wreath:c8:4", 24 * 4096),
        ("wreath:c12:6", 720 * 2_985_984),
        ("bilinear:3:2", 243),
        ("frob80", 80),
        ("power(dihedral:3,3)", 216),
    ];
    for (d, n) in cases {
        assert_eq!(g(d).order(), n, "{d}");
    }
}

#[test]
fn dihedral_relations() {
    let d = g("dihedral:5");
    let x = d.parse_elem("x").unwrap();
    let y = d.parse_elem("y").unwrap();
    assert_eq!(d.mul(&d.mul(&y, &x), &y), d.inv(&x));
    let mut p = d.identity();
    for _ in 0..5 {
        p = d.mul(&p, &x);
    }
    assert!(d.is_identity(&p));
    assert_eq!(d.format_elem(&d.mul(&y, &x)), "yx^1");
    assert_eq!(d.format_elem(&d.mul(&x, &y)), "yx^4");
}

#[test]
fn permutations_compose_as_functions() {
    let s = g("sym:3");
    // (0 1) then (1 2) applied right to left: 0 -> 0 -> 1, 1 -> 2 -> 2, 2 -> 1 -> 0.
    let a = s.parse_elem("[1,0,2]").unwrap();
    let b = s.parse_elem("[0,2,1]").unwrap();
    assert_eq!(s.format_elem(&s.mul(&a, &b)), "[1,2,0]");
    assert_eq!(s.format_elem(&s.mul(&b, &a)), "[2,0,1]");
}

#[test]
fn sl2_small_facts() {
    let s = g("sl2:2");
    assert!(!s.is_abelian());
    let minus_one = g("sl2:5").parse_elem("[4;0;0;4]").unwrap();
    let t = g("sl2:5");
    assert!(t.is_identity(&t.mul(&minus_one, &minus_one)));
    assert!(t.parse_elem("[1;1;1;1]").is_err());
}

#[test]
fn codec_is_a_bijection() {
    for d in SMALL {
        let grp = g(d);
        let elems: Vec<Element> = grp.elements().unwrap().collect();
        assert_eq!(elems.len() as u64, grp.order(), "{d}");
        let mut sorted = elems.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), elems.len(), "{d} repeats elements");
        for (r, e) in elems.iter().enumerate() {
            assert!(grp.contains(e), "{d}: {e:?}");
            assert_eq!(grp.rank(e), r as u64, "{d}");
        }
    }
}

#[test]
fn exhaustive_axioms_small_groups() {
    for d in SMALL {
        let grp = g(d);
        let t = GroupTable::new(&grp).unwrap();
        let n = t.len() as u32;
        let e = t.identity();
        for a in 0..n {
            assert_eq!(t.mul(a, e), a);
            assert_eq!(t.mul(e, a), a);
            assert_eq!(t.mul(a, t.inv(a)), e, "{d}");
            for b in 0..n {
                let ab = t.mul(a, b);
                for c in 0..n.min(24) {
                    assert_eq!(t.mul(ab, c), t.mul(a, t.mul(b, c)), "{d}");
                }
            }
        }
        let commutative = (0..n).all(|a| (0..n).all(|b| t.mul(a, b) == t.mul(b, a)));
        assert_eq!(commutative, grp.is_abelian(), "{d}");
    }
}

#[test]
fn random_axioms_large_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in LARGE {
        let grp = g(d);
        for _ in 0..2000 {
            let (a, b, c) = (
                grp.random_element(&mut rng),
                grp.random_element(&mut rng),
                grp.random_element(&mut rng),
            );
            assert!(grp.contains(&a));
            assert_eq!(grp.mul(&grp.mul(&a, &b), &c), grp.mul(&a, &grp.mul(&b, &c)), "{d}");
            assert!(grp.is_identity(&grp.mul(&a, &grp.inv(&a))), "{d}");
            assert_eq!(grp.mul(&a, &grp.identity()), a);
        }
    }
}

#[test]
fn random_codec_large_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in LARGE {
        let grp = g(d);
        for _ in 0..500 {
            let r = rng.gen_range(0..grp.order());
            let e = grp.unrank(r);
            assert!(grp.contains(&e), "{d}");
            assert_eq!(grp.rank(&e), r, "{d}");
        }
    }
}

#[test]
fn text_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in SMALL.iter().chain(LARGE) {
        let grp = g(d);
        for _ in 0..200 {
            let e = grp.random_element(&mut rng);
            let s = grp.format_elem(&e);
            assert_eq!(grp.parse_elem(&s).unwrap(), e, "{d}: {s}");
        }
    }
}

#[test]
fn element_strings() {
    let w = g("wreath:c8:2");
    let e = w.parse_elem("[[1,0];(3,4)]").unwrap();
    assert_eq!(e.words(), &[1, 0, 3, 4]);
    let b = g("bilinear:3:2");
    let e = b.parse_elem("[1 2;0 1;2]").unwrap();
    assert_eq!(e.words(), &[1, 2, 0, 1, 2]);
    let p = g("prod(dihedral:3,cyclic:4)");
    assert_eq!(p.parse_elem("(yx^2, 3)").unwrap().words(), &[1, 2, 3]);
    assert!(p.parse_elem("(yx^3, 3)").is_err());
    assert!(g("sym:3").parse_elem("[0,0,1]").is_err());
}

#[test]
fn descriptor_round_trip() {
    for d in SMALL.iter().chain(LARGE).chain(&["bilinear:3:2:1", "wreath:5:3"]) {
        let grp = g(d);
        let again = parse_descriptor(grp.descriptor()).unwrap();
        assert_eq!(again.descriptor(), grp.descriptor());
        assert_eq!(again.order(), grp.order());
    }
    assert_eq!(g("wreath:8:4").descriptor(), "wreath:c8:4");
    for bad in ["cyclic:0", "sym", "sl2:6", "nonsense:3", "power(cyclic:2)", "bilinear:4:2"] {
        assert!(parse_descriptor(bad).is_err(), "{bad}");
    }
}

#[test]
fn mismatched_elements_are_rejected() {
    let d = g("dihedral:4");
    let s = g("sym:3");
    let a = s.identity();
    assert!(matches!(d.try_mul(&a, &d.identity()), Err(GroupError::ElementMismatch { .. })));
    assert!(d.try_inv(&Element::from_words(&[0, 9])).is_err());
}

#[test]
fn enumeration_cap() {
    assert!(matches!(g("sym:11").elements().err(), Some(GroupError::TooLarge { .. })));
    assert!(g("wreath:c12:6").elements().is_err());
    assert!(GroupTable::new(&g("sym:7")).is_err());
}

#[test]
fn class_counts() {
    for (d, k) in [
        ("sym:3", 3),
        ("sym:4", 5),
        ("dihedral:4", 5),
        ("dihedral:5", 4),
        ("sl2:3", 7),
        ("sl2:5", 9),
        ("frob80", 8),
        ("cyclic:6", 6),
        ("bilinear:3:1", 11),
    ] {
        let t = GroupTable::new(&g(d)).unwrap();
        let classes = conjugacy_classes(&t);
        assert_eq!(classes.len(), k, "{d}");
        assert_eq!(classes[0], vec![t.identity()]);
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), t.len());
    }
}

#[test]
fn semidirect_rejects_non_automorphisms() {
    let top = g("cyclic:2");
    let base = g("cyclic:5");
    // a -> a + 1 is not additive.
    let bad = Action::new("shift", |h, a| Element::from_words(&[(a[0] + h[0]) % 5]));
    assert!(FiniteGroup::semidirect(&top, &base, bad, 1).is_err());
    let neg = Action::new("neg", |h, a| Element::from_words(&[if h[0] == 1 { (5 - a[0]) % 5 } else { a[0] }]));
    let d5 = FiniteGroup::semidirect(&top, &base, neg, 1).unwrap();
    assert_eq!(d5.order(), 10);
    assert!(!d5.is_abelian());
}

#[test]
fn trivial_action_matches_direct_product() {
    let top = g("sym:3");
    let base = g("cyclic:4");
    let trivial = Action::new("trivial", |_, a| Element::from_words(a));
    let sd = FiniteGroup::semidirect(&top, &base, trivial, 2).unwrap();
    let dp = FiniteGroup::direct_product(&[top, base]).unwrap();
    assert!(sd.is_abelian() == dp.is_abelian());
    let elems: Vec<Element> = dp.elements().unwrap().collect();
    assert_eq!(sd.elements().unwrap().collect::<Vec<_>>(), elems);
    for a in &elems {
        for b in &elems {
            assert_eq!(sd.mul(a, b), dp.mul(a, b));
        }
    }
}

#[test]
fn coordinate_permutation_semidirect() {
    let top = g("sym:2");
    let base = g("power(cyclic:4,2)");
    let swap = Action::new("swap", |h, a| if h[0] == 1 { Element::from_words(&[a[1], a[0]]) } else { Element::from_words(a) });
    let sd = FiniteGroup::semidirect(&top, &base, swap, 0).unwrap();
    assert_eq!(sd.order(), 32);
    assert!(!sd.is_abelian());
    assert_eq!(g("wreath:c4:2").order(), 32);
    assert_eq!(g("wreath:c6:3").order(), 1296);
    let w1 = g("wreath:c5:1");
    assert!(w1.is_abelian());
    assert_eq!(w1.order(), 5);
}

proptest! {
    #[test]
    fn wreath_group_axioms(r1 in 0u64..98304, r2 in 0u64..98304, r3 in 0u64..98304) {
        let w = g("wreath:c8:4");
        let (a, b, c) = (w.unrank(r1), w.unrank(r2), w.unrank(r3));
        prop_assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
        prop_assert_eq!(w.inv(&w.mul(&a, &b)), w.mul(&w.inv(&b), &w.inv(&a)));
    }

    #[test]
    fn sl2_group_axioms(r1 in 0u64..117_600, r2 in 0u64..117_600) {
        let s = g("sl2:49");
        let (a, b) = (s.unrank(r1), s.unrank(r2));
        let ab = s.mul(&a, &b);
        prop_assert!(s.contains(&ab));
        prop_assert_eq!(s.inv(&ab), s.mul(&s.inv(&b), &s.inv(&a)));
    }

    #[test]
    fn bilinear_group_axioms(r1 in 0u64..3125, r2 in 0u64..3125, r3 in 0u64..3125) {
        let b = g("bilinear:5:2");
        let (x, y, z) = (b.unrank(r1), b.unrank(r2), b.unrank(r3));
        prop_assert_eq!(b.mul(&b.mul(&x, &y), &z), b.mul(&x, &b.mul(&y, &z)));
        prop_assert!(b.is_identity(&b.mul(&b.inv(&x), &x)));
    }
}
