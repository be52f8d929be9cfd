//! Shared loaders and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use bbq_core::{parse_diagram_file, Biquandle, BiquandleBracket, BqMap, BracketData, LinkDiagram, Sign};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn read_data(name: &str) -> String {
    let p = data_dir().join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn biquandle(name: &str) -> Biquandle {
    Biquandle::parse(&read_data(name)).unwrap()
}

pub fn bracket_data(name: &str) -> BracketData {
    BracketData::parse(&read_data(name)).unwrap()
}

/// Validated bracket, or the file's constant overrides when it has any.
pub fn bracket(name: &str, x: &Biquandle) -> BiquandleBracket {
    let data = bracket_data(name);
    if data.has_overrides() {
        data.with_overrides(x).unwrap()
    } else {
        data.validate(x).unwrap()
    }
}

pub fn endos(name: &str, n: usize) -> Vec<BqMap> {
    BqMap::parse_list(&read_data(name), n).unwrap()
}

pub fn diagrams(file: &str) -> Vec<(String, LinkDiagram)> {
    parse_diagram_file(&read_data(file)).unwrap().into_iter().map(|n| (n.name, n.diagram)).collect()
}

pub fn diagram(file: &str, name: &str) -> LinkDiagram {
    diagrams(file).into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no diagram {name}")).1
}

/// All bundled diagrams.
pub fn all_diagrams() -> Vec<(String, LinkDiagram)> {
    ["knots_upto8.pd", "links_upto7.pd", "virtual.pd", "reidemeister.pd"].iter().flat_map(|f| diagrams(f)).collect()
}

/// Every assignment of colors to semiarcs (then free loops) that satisfies the
/// crossing relations, in lexicographic order, by exhaustive search.
pub fn brute_force_colorings(d: &LinkDiagram, x: &Biquandle) -> Vec<Vec<usize>> {
    let m = d.semiarc_count() + d.free_loops();
    let n = x.size();
    let total = n.checked_pow(m as u32).expect("search space too large");
    let mut out = Vec::new();
    for code in 0..total {
        let mut col = vec![0; m];
        let mut c = code;
        for slot in col.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let ok = d.crossings().iter().all(|cr| match cr.sign {
            Sign::Positive => {
                col[cr.under_out] == x.under(col[cr.under_in], col[cr.over_out])
                    && col[cr.over_in] == x.over(col[cr.over_out], col[cr.under_in])
            }
            Sign::Negative => {
                col[cr.under_in] == x.under(col[cr.under_out], col[cr.over_in])
                    && col[cr.over_out] == x.over(col[cr.over_in], col[cr.under_out])
            }
        });
        if ok {
            out.push(col);
        }
    }
    out
}

pub type Laurent = BTreeMap<i64, i64>;

fn lmul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn ladd(a: &mut Laurent, b: &Laurent) {
    for (e, c) in b {
        *a.entry(*e).or_insert(0) += c;
    }
    a.retain(|_, c| *c != 0);
}

fn mono(c: i64, e: i64) -> Laurent {
    Laurent::from([(e, c)])
}

/// Writhe-normalized Kauffman bracket `(-q^3)^{-w} <D>` with `<O> = 1`,
/// computed from the planar (counterclockwise) endpoint order of each crossing.
pub fn kauffman_oracle(d: &LinkDiagram) -> Laurent {
    let m = d.semiarc_count();
    // Endpoint 2s is the head of semiarc s (where it enters a crossing), 2s+1 its tail.
    let head = |s: usize| 2 * s;
    let tail = |s: usize| 2 * s + 1;
    let ccw: Vec<[usize; 4]> = d
        .crossings()
        .iter()
        .map(|c| match c.sign {
            Sign::Positive => [head(c.under_in), tail(c.over_out), tail(c.under_out), head(c.over_in)],
            Sign::Negative => [head(c.under_in), head(c.over_in), tail(c.under_out), tail(c.over_out)],
        })
        .collect();
    let delta = {
        let mut d = mono(-1, 2);
        ladd(&mut d, &mono(-1, -2));
        d
    };
    let k = ccw.len();
    let mut total = Laurent::new();
    for state in 0..1u64 << k {
        let mut partner = vec![usize::MAX; 2 * m];
        let mut coeff = mono(1, 0);
        for (i, e) in ccw.iter().enumerate() {
            let a_type = state >> i & 1 == 1;
            let (p, q) = if a_type { ((e[0], e[1]), (e[2], e[3])) } else { ((e[0], e[3]), (e[1], e[2])) };
            for (u, v) in [p, q] {
                partner[u] = v;
                partner[v] = u;
            }
            coeff = lmul(&coeff, &mono(1, if a_type { 1 } else { -1 }));
        }
        // Walk: from an endpoint cross the semiarc, then jump through the smoothing.
        let mut seen = vec![false; 2 * m];
        let mut circles = 0;
        for start in 0..2 * m {
            if seen[start] {
                continue;
            }
            circles += 1;
            let mut e = start;
            while !seen[e] {
                seen[e] = true;
                let other_end = e ^ 1;
                seen[other_end] = true;
                e = partner[other_end];
            }
        }
        circles += d.free_loops();
        let mut term = coeff;
        for _ in 1..circles {
            term = lmul(&term, &delta);
        }
        ladd(&mut total, &term);
    }
    let w = d.writhe();
    let norm = mono(if w % 2 == 0 { 1 } else { -1 }, -3 * w);
    lmul(&total, &norm)
}

pub fn to_laurent(e: &bbq_core::RingElement) -> Laurent {
    e.terms().expect("Laurent element").iter().map(|(k, c)| (*k, i64::try_from(c).unwrap())).collect()
}
