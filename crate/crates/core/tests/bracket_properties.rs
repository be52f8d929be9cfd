mod common;

use bbq_core::*;
use common::*;
use proptest::prelude::*;

fn kauffman() -> BiquandleBracket {
    bracket("kauffman.bracket", &biquandle("trivial1.bq"))
}

fn kauffman_value(d: &LinkDiagram, norm: Normalization) -> RingElement {
    let br = kauffman();
    let c = vec![0; d.semiarc_count() + d.free_loops()];
    evaluate_bracket(d, &c, &br, norm).unwrap()
}

/// (name, bracket) pairs over their own biquandles.
fn brackets() -> Vec<(&'static str, BiquandleBracket)> {
    vec![
        ("hopf4_z3", bracket("hopf4_z3.bracket", &biquandle("hopf4.bq"))),
        ("link4_z6", bracket("link4_z6.bracket", &biquandle("link4.bq"))),
        ("knot4_q", bracket("knot4_q.bracket", &biquandle("knot4.bq"))),
        ("kauffman", kauffman()),
    ]
}

fn weight_multiset(d: &LinkDiagram, br: &BiquandleBracket, norm: Normalization) -> FormalSum {
    build_quiver(d, br, &[], norm).unwrap().weight_sum()
}

#[test]
fn kauffman_bracket_matches_state_sum_oracle() {
    let mut n = 0;
    for (name, d) in all_diagrams() {
        if d.crossings().len() > 8 || d.is_empty() {
            continue;
        }
        assert_eq!(to_laurent(&kauffman_value(&d, Normalization::Reduced)), kauffman_oracle(&d), "{name}");
        n += 1;
    }
    assert!(n >= 40, "{n}");
}

#[test]
fn kauffman_constants() {
    let br = kauffman();
    assert!(br.is_certified());
    let q = RingSpec::laurent("q").unwrap();
    assert_eq!(br.delta(), &q.parse_element("-q^2-q^-2").unwrap());
    assert_eq!(br.w(), &q.parse_element("-q^3").unwrap());
    let u = LinkDiagram::parse("U").unwrap();
    assert!(kauffman_value(&u, Normalization::Reduced).is_one());
    assert_eq!(&kauffman_value(&u, Normalization::Unreduced), br.delta());
}

#[test]
fn mirror_conjugates_kauffman_bracket() {
    for (name, d) in diagrams("knots_upto8.pd").into_iter().chain(diagrams("links_upto7.pd")) {
        let v = kauffman_value(&d, Normalization::Reduced);
        assert_eq!(kauffman_value(&d.mirror(), Normalization::Reduced), v.bar(), "{name}");
    }
    let t = kauffman_value(&diagram("knots_upto8.pd", "3_1"), Normalization::Reduced);
    assert_ne!(t, t.bar(), "trefoil is chiral");
}

#[test]
fn reidemeister_pairs_have_equal_weight_multisets() {
    for base in ["trefoil", "unknot", "hopf"] {
        let a = diagram("reidemeister.pd", &format!("{base}_a"));
        let b = diagram("reidemeister.pd", &format!("{base}_b"));
        // Override constants carry no invariance guarantee.
        for (bn, br) in brackets().into_iter().filter(|(_, br)| br.is_certified()) {
            for norm in [Normalization::Unreduced, Normalization::Reduced] {
                assert_eq!(weight_multiset(&a, &br, norm), weight_multiset(&b, &br, norm), "{base} / {bn} / {norm:?}");
            }
        }
    }
}

#[test]
fn reduced_is_unreduced_over_delta_when_delta_is_a_unit() {
    for (bn, br) in brackets() {
        let Ok(inv) = br.delta().inverse() else { continue };
        for (name, d) in diagrams("knots_upto8.pd").into_iter().take(12) {
            for c in enumerate_colorings(&d, br.biquandle()) {
                let u = evaluate_bracket(&d, &c, &br, Normalization::Unreduced).unwrap();
                let r = evaluate_bracket(&d, &c, &br, Normalization::Reduced).unwrap();
                assert_eq!(u.mul(&inv).unwrap(), r, "{name} / {bn}");
            }
        }
    }
}

#[test]
fn constant_cocycle_bracket() {
    for n in 3..8u64 {
        let r = RingSpec::modular(n).unwrap();
        let x = Biquandle::dihedral_quandle(3).unwrap();
        let phi = vec![vec![r.one(); 3]; 3];
        let br = cocycle_bracket(&x, &r, phi).unwrap();
        assert_eq!(br.delta(), &r.int(-2));
        assert_eq!(br.w(), &r.int(-1));
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let br = kauffman();
    let d = diagram("knots_upto8.pd", "3_1");
    let bad = vec![1; d.semiarc_count()];
    assert!(matches!(evaluate_bracket(&d, &bad, &br, Normalization::Unreduced), Err(BracketError::InvalidColoring)));
    let empty = LinkDiagram::parse("").unwrap();
    assert!(matches!(evaluate_bracket(&empty, &[], &br, Normalization::Unreduced), Err(BracketError::EmptyLink)));
    // knot4 constants are overrides; the raw matrices fail validation.
    assert!(bracket_data("knot4_q.bracket").validate(&biquandle("knot4.bq")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weights_survive_relabelling(which in 0usize..64, offset in 1u64..500, stride in 1u64..5) {
        let ds: Vec<_> = diagrams("knots_upto8.pd").into_iter().chain(diagrams("links_upto7.pd")).collect();
        let (name, d) = &ds[which % ds.len()];
        let e = d.relabel(|l| offset + stride * l).unwrap();
        for (bn, br) in brackets() {
            prop_assert_eq!(
                weight_multiset(&e, &br, Normalization::Unreduced),
                weight_multiset(d, &br, Normalization::Unreduced),
                "{} / {}", name, bn
            );
        }
    }
}
