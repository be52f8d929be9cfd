mod common;

use bbq_core::*;
use common::*;

struct Setup {
    name: &'static str,
    br: BiquandleBracket,
    endos: Vec<BqMap>,
}

fn setups() -> Vec<Setup> {
    let hopf4 = biquandle("hopf4.bq");
    let link4 = biquandle("link4.bq");
    let knot4 = biquandle("knot4.bq");
    vec![
        Setup { name: "hopf4_z3/phi", br: bracket("hopf4_z3.bracket", &hopf4), endos: endos("hopf4_phi.endo", 4) },
        Setup { name: "hopf4_z3/all", endos: hopf4.endomorphisms(), br: bracket("hopf4_z3.bracket", &hopf4) },
        Setup { name: "link4_z6/phi", br: bracket("link4_z6.bracket", &link4), endos: endos("link4_phi.endo", 4) },
        Setup { name: "knot4_q/all", endos: knot4.endomorphisms(), br: bracket("knot4_q.bracket", &knot4) },
    ]
}

fn sample() -> Vec<(String, LinkDiagram)> {
    let mut ds = diagrams("knots_upto8.pd");
    ds.truncate(10);
    ds.extend(diagrams("links_upto7.pd"));
    ds.extend(diagrams("virtual.pd"));
    ds
}

fn quiver(d: &LinkDiagram, s: &Setup) -> BracketQuiver {
    build_quiver(d, &s.br, &s.endos, Normalization::Unreduced).unwrap()
}

#[test]
fn handshake() {
    for s in setups() {
        for (name, d) in sample() {
            let q = quiver(&d, &s);
            let total = q.vertex_count() * s.endos.len();
            assert_eq!(q.edges.len(), total, "{name} / {}", s.name);
            assert_eq!(q.in_degrees().iter().sum::<usize>(), total);
            assert!(q.out_degrees().iter().all(|&k| k == s.endos.len()));
            assert_eq!(q.indegree_polynomial().total() as usize, q.vertex_count());
            assert_eq!(q.two_variable_polynomial().total() as usize, total);
        }
    }
}

#[test]
fn forgetting_degrees_gives_the_weight_multiset() {
    for s in setups() {
        for (name, d) in sample() {
            let q = quiver(&d, &s);
            assert_eq!(q.indegree_polynomial().forget(1), q.weight_sum(), "{name} / {}", s.name);
        }
    }
}

#[test]
fn identity_only_quiver_is_diagonal() {
    for s in setups() {
        let id = [BqMap::identity(s.br.biquandle().size())];
        for (name, d) in sample() {
            let q = build_quiver(&d, &s.br, &id, Normalization::Unreduced).unwrap();
            let mut diag = FormalSum::new();
            for (k, c) in q.weight_sum().iter() {
                diag.insert(vec![k[0].clone(), k[0].clone()], c);
            }
            assert_eq!(q.two_variable_polynomial(), diag, "{name} / {}", s.name);
            assert!(q.in_degrees().iter().all(|&k| k == 1));
        }
    }
}

#[test]
fn edges_follow_endomorphisms() {
    for s in setups() {
        for (name, d) in sample() {
            let q = quiver(&d, &s);
            for e in &q.edges {
                assert_eq!(q.colorings[e.target], apply_endomorphism(&s.endos[e.endo], &q.colorings[e.source]), "{name}");
            }
        }
    }
}

fn permuted(q: &BracketQuiver, shift: usize) -> BracketQuiver {
    let n = q.vertex_count();
    let p = |i: usize| (i * 5 + shift) % n;
    let mut inv = vec![0; n];
    for i in 0..n {
        inv[p(i)] = i;
    }
    let mut r = q.clone();
    r.colorings = (0..n).map(|j| q.colorings[inv[j]].clone()).collect();
    r.weights = (0..n).map(|j| q.weights[inv[j]].clone()).collect();
    r.edges = q.edges.iter().rev().map(|e| Edge { source: p(e.source), target: p(e.target), endo: e.endo }).collect();
    r
}

#[test]
fn isomorphism_is_reflexive_and_ignores_vertex_order() {
    for s in setups() {
        for (name, d) in sample() {
            let q = quiver(&d, &s);
            // the permutation i -> 5i + k is a bijection whenever gcd(5, n) = 1
            if q.vertex_count().is_multiple_of(5) {
                continue;
            }
            assert!(quivers_isomorphic(&q, &q).unwrap(), "{name}");
            assert!(quivers_isomorphic(&q, &permuted(&q, 3)).unwrap(), "{name} / {}", s.name);
        }
    }
}

#[test]
fn reidemeister_pairs_give_isomorphic_quivers() {
    for s in setups().into_iter().filter(|s| s.br.is_certified()) {
        for base in ["trefoil", "unknot", "hopf"] {
            let a = quiver(&diagram("reidemeister.pd", &format!("{base}_a")), &s);
            let b = quiver(&diagram("reidemeister.pd", &format!("{base}_b")), &s);
            assert!(quivers_isomorphic(&a, &b).unwrap(), "{base} / {}", s.name);
        }
    }
}

#[test]
fn distinct_knots_give_distinct_quivers() {
    let s = &setups()[3];
    let a = quiver(&diagram("knots_upto8.pd", "3_1"), s);
    let b = quiver(&diagram("knots_upto8.pd", "4_1"), s);
    assert!(!quivers_isomorphic(&a, &b).unwrap());
}

#[test]
fn isomorphism_refuses_large_or_mixed_inputs() {
    let setups = setups();
    let d = diagram("knots_upto8.pd", "3_1");
    let z3 = quiver(&d, &setups[1]);
    let q = quiver(&d, &setups[3]);
    assert!(matches!(quivers_isomorphic(&z3, &q), Err(QuiverError::RingMismatch)));
    let big = build_quiver(&LinkDiagram::parse("U U U U").unwrap(), &setups[0].br, &[], Normalization::Unreduced).unwrap();
    assert_eq!(big.vertex_count(), 256);
    assert!(matches!(quivers_isomorphic(&big, &big), Err(QuiverError::TooLarge(256))));
}

#[test]
fn dot_lists_every_vertex_and_arc() {
    let s = &setups()[1];
    let q = quiver(&diagram("links_upto7.pd", "L2a1"), s);
    let dot = q.to_dot();
    assert!(dot.starts_with("digraph quiver {\n") && dot.ends_with("}\n"));
    assert_eq!(dot.matches(" -> ").count(), q.edges.len());
    for i in 0..q.vertex_count() {
        assert!(dot.contains(&format!("  v{i} [label=\"{i}: {}\"];", q.weights[i])));
    }
}
