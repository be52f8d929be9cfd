//! Biquandle bracket quivers and their decategorifications.
//!
//! Vertices are colorings weighted by bracket values; every `(coloring, φ)`
//! pair contributes one edge `f → φ∘f`, so parallel edges and loops are kept.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::biquandle::BqMap;
use crate::bracket::{evaluate_with_table, state_table, BiquandleBracket, BracketError, Normalization};
use crate::coloring::{apply_endomorphism, enumerate_colorings, Coloring};
use crate::diagram::LinkDiagram;
use crate::rings::{FormalSum, KeyPart, RingElement};

/// Largest quiver [`quivers_isomorphic`] will attempt.
pub const ISOMORPHISM_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("map {index} ({map}) is not an endomorphism of the coloring biquandle")]
    NotAnEndomorphism { index: usize, map: String },
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error("quiver with {0} vertices exceeds the isomorphism limit of {ISOMORPHISM_LIMIT}")]
    TooLarge(usize),
    #[error("quiver weights lie in different rings")]
    RingMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub endo: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketQuiver {
    pub colorings: Vec<Coloring>,
    pub weights: Vec<RingElement>,
    pub edges: Vec<Edge>,
    pub endos: Vec<BqMap>,
}

/// Builds the quiver of `d` for the maps `endos` and bracket `br`.
pub fn build_quiver(
    d: &LinkDiagram,
    br: &BiquandleBracket,
    endos: &[BqMap],
    norm: Normalization,
) -> Result<BracketQuiver, QuiverError> {
    let x = br.biquandle();
    if let Some((index, phi)) = endos.iter().enumerate().find(|(_, f)| !f.is_homomorphism(x, x)) {
        return Err(QuiverError::NotAnEndomorphism { index, map: phi.to_string() });
    }
    let colorings = enumerate_colorings(d, x);
    let table = state_table(d);
    let weights = colorings
        .par_iter()
        .map(|c| evaluate_with_table(d, &table, c, br, norm))
        .collect::<Result<Vec<_>, _>>()?;
    let index: HashMap<&Coloring, usize> = colorings.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = Vec::with_capacity(colorings.len() * endos.len());
    for (source, c) in colorings.iter().enumerate() {
        for (endo, phi) in endos.iter().enumerate() {
            let target = index[&apply_endomorphism(phi, c)];
            edges.push(Edge { source, target, endo });
        }
    }
    Ok(BracketQuiver { colorings, weights, edges, endos: endos.to_vec() })
}

impl BracketQuiver {
    pub fn vertex_count(&self) -> usize {
        self.colorings.len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.colorings.len()];
        for e in &self.edges {
            deg[e.target] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.colorings.len()];
        for e in &self.edges {
            deg[e.source] += 1;
        }
        deg
    }

    /// `Σ_v u^{β(v)} v^{deg⁺(v)}` with `deg⁺` the in-degree.
    pub fn indegree_polynomial(&self) -> FormalSum {
        let mut p = FormalSum::new();
        for (w, deg) in self.weights.iter().zip(self.in_degrees()) {
            p.insert(vec![KeyPart::Ring(w.canonical_key()), KeyPart::Int(deg as i64)], 1);
        }
        p
    }

    /// `Σ_e s^{β(s(e))} t^{β(t(e))}`.
    pub fn two_variable_polynomial(&self) -> FormalSum {
        let keys: Vec<String> = self.weights.iter().map(RingElement::canonical_key).collect();
        let mut p = FormalSum::new();
        for e in &self.edges {
            p.insert(vec![KeyPart::Ring(keys[e.source].clone()), KeyPart::Ring(keys[e.target].clone())], 1);
        }
        p
    }

    /// Multiset of vertex weights as a one-variable formal sum.
    pub fn weight_sum(&self) -> FormalSum {
        let mut p = FormalSum::new();
        for w in &self.weights {
            p.insert(vec![KeyPart::Ring(w.canonical_key())], 1);
        }
        p
    }

    /// Graphviz text. Nodes are `v<i>` labelled with index and weight; one arc per edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for (i, w) in self.weights.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{i}: {}\"];", escape(&w.canonical_key()));
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.source, e.target, e.endo);
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Weight-preserving directed multigraph isomorphism; endomorphism labels are ignored.
pub fn quivers_isomorphic(q1: &BracketQuiver, q2: &BracketQuiver) -> Result<bool, QuiverError> {
    let n = q1.vertex_count();
    for q in [q1, q2] {
        if q.vertex_count() > ISOMORPHISM_LIMIT {
            return Err(QuiverError::TooLarge(q.vertex_count()));
        }
    }
    if let (Some(a), Some(b)) = (q1.weights.first(), q2.weights.first()) {
        if a.spec() != b.spec() {
            return Err(QuiverError::RingMismatch);
        }
    }
    if n != q2.vertex_count() || q1.edges.len() != q2.edges.len() {
        return Ok(false);
    }
    let g1 = Multigraph::new(q1);
    let g2 = Multigraph::new(q2);
    let Some((c1, c2)) = refine(&g1, &g2) else {
        return Ok(false);
    };
    let order = search_order(&g1, &c1);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ctx = Search { g1: &g1, g2: &g2, c1: &c1, c2: &c2, order: &order };
    Ok(ctx.extend(0, &mut map, &mut used))
}

struct Multigraph {
    mult: Vec<Vec<u32>>,
    // weight key and loop count
    labels: Vec<(String, u32)>,
}

impl Multigraph {
    fn new(q: &BracketQuiver) -> Self {
        let n = q.vertex_count();
        let mut mult = vec![vec![0u32; n]; n];
        for e in &q.edges {
            mult[e.source][e.target] += 1;
        }
        let labels = (0..n).map(|v| (q.weights[v].canonical_key(), mult[v][v])).collect();
        Multigraph { mult, labels }
    }

    fn len(&self) -> usize {
        self.mult.len()
    }
}

type Signature = (usize, Vec<(usize, u32)>, Vec<(usize, u32)>);

/// Joint colour refinement of both graphs. Colours are shared ids, so equal
/// colours are comparable across graphs. `None` when the colour histograms differ.
fn refine(g1: &Multigraph, g2: &Multigraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g1.len();
    let mut ids: HashMap<(String, u32), usize> = HashMap::new();
    let mut initial = |g: &Multigraph| -> Vec<usize> {
        g.labels.iter().map(|l| { let k = ids.len(); *ids.entry(l.clone()).or_insert(k) }).collect()
    };
    let mut c1 = initial(g1);
    let mut c2 = initial(g2);
    let mut classes = ids.len();
    loop {
        let mut sigs: HashMap<Signature, usize> = HashMap::new();
        let mut step = |g: &Multigraph, c: &[usize]| -> Vec<usize> {
            (0..n)
                .map(|v| {
                    let mut out: Vec<(usize, u32)> = (0..n).filter(|&u| g.mult[v][u] > 0).map(|u| (c[u], g.mult[v][u])).collect();
                    let mut inn: Vec<(usize, u32)> = (0..n).filter(|&u| g.mult[u][v] > 0).map(|u| (c[u], g.mult[u][v])).collect();
                    out.sort_unstable();
                    inn.sort_unstable();
                    let k = sigs.len();
                    *sigs.entry((c[v], out, inn)).or_insert(k)
                })
                .collect()
        };
        let n1 = step(g1, &c1);
        let n2 = step(g2, &c2);
        let (mut h1, mut h2) = (n1.clone(), n2.clone());
        h1.sort_unstable();
        h2.sort_unstable();
        if h1 != h2 {
            return None;
        }
        c1 = n1;
        c2 = n2;
        if sigs.len() == classes {
            return Some((c1, c2));
        }
        classes = sigs.len();
    }
}

/// Rarest colour first, then grow along edges so each new vertex is
/// constrained by already-mapped neighbours.
fn search_order(g: &Multigraph, colour: &[usize]) -> Vec<usize> {
    let n = g.len();
    let mut freq: HashMap<usize, usize> = HashMap::new();
    for &c in colour {
        *freq.entry(c).or_default() += 1;
    }
    let mut placed = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| g.mult[u][v] + g.mult[v][u] > 0).count();
                (links, std::cmp::Reverse(freq[&colour[v]]), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Search<'a> {
    g1: &'a Multigraph,
    g2: &'a Multigraph,
    c1: &'a [usize],
    c2: &'a [usize],
    order: &'a [usize],
}

impl Search<'_> {
    fn extend(&self, k: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        for cand in 0..map.len() {
            if used[cand] || self.c1[v] != self.c2[cand] {
                continue;
            }
            let consistent = self.order[..k].iter().all(|&u| {
                let mu = map[u];
                self.g1.mult[v][u] == self.g2.mult[cand][mu] && self.g1.mult[u][v] == self.g2.mult[mu][cand]
            });
            if !consistent {
                continue;
            }
            map[v] = cand;
            used[cand] = true;
            if self.extend(k + 1, map, used) {
                return true;
            }
            used[cand] = false;
            map[v] = usize::MAX;
        }
        false
    }
}
