//! Biquandle colorings of semiarcs, i.e. the homset `Hom(B(L), X)`.
//!
//! Crossing relations. Write `(x, y)` for the *sideways pair* of a crossing:
//!
//! * positive: `x = under_in`, `y = over_out`, and then
//!   `under_out = x ⊳̲ y`, `over_in = y ⊳̄ x`;
//! * negative: `x = under_out`, `y = over_in`, and then
//!   `under_in = x ⊳̲ y`, `over_out = y ⊳̄ x`.
//!
//! In both cases the two remaining semiarcs are `S(x, y)`, so the kink
//! relation is exactly the diagonal axiom `x ⊳̲ x = x ⊳̄ x`. Bracket
//! coefficients are indexed by the same pair.

use crate::biquandle::{Biquandle, BqMap};
use crate::diagram::{Crossing, LinkDiagram, Sign};

/// Semiarc colors followed by one color per free loop.
pub type Coloring = Vec<usize>;

/// Slots of a crossing as `[x, y, x ⊳̲ y, y ⊳̄ x]`.
#[inline]
pub(crate) fn relation_slots(c: &Crossing) -> [usize; 4] {
    match c.sign {
        Sign::Positive => [c.under_in, c.over_out, c.under_out, c.over_in],
        Sign::Negative => [c.under_out, c.over_in, c.under_in, c.over_out],
    }
}

/// The sideways pair `(x, y)` of a crossing under a coloring.
#[inline]
pub fn crossing_pair(c: &Crossing, coloring: &[usize]) -> (usize, usize) {
    let [p, q, _, _] = relation_slots(c);
    (coloring[p], coloring[q])
}

/// Whether `coloring` satisfies every crossing relation.
pub fn is_valid_coloring(d: &LinkDiagram, x: &Biquandle, coloring: &[usize]) -> bool {
    coloring.len() == d.semiarc_count() + d.free_loops()
        && coloring.iter().all(|&v| v < x.size())
        && d.crossings().iter().all(|c| {
            let [p, q, r, s] = relation_slots(c);
            coloring[r] == x.under(coloring[p], coloring[q]) && coloring[s] == x.over(coloring[q], coloring[p])
        })
}

const UNSET: usize = usize::MAX;

struct Solver<'a> {
    x: &'a Biquandle,
    rels: Vec<[usize; 4]>,
    // crossings touching each semiarc
    touching: Vec<Vec<usize>>,
    order: Vec<usize>,
}

impl Solver<'_> {
    /// Assigns `v` to `s` and propagates; false on contradiction.
    fn assign(&self, colors: &mut [usize], trail: &mut Vec<usize>, s: usize, v: usize) -> bool {
        if colors[s] != UNSET {
            return colors[s] == v;
        }
        colors[s] = v;
        trail.push(s);
        let mut queue = vec![s];
        while let Some(a) = queue.pop() {
            for &ci in &self.touching[a] {
                let [p, q, r, t] = self.rels[ci];
                let (cp, cq, cr, ct) = (colors[p], colors[q], colors[r], colors[t]);
                let mut forced: [(usize, usize); 2] = [(UNSET, UNSET); 2];
                if cp != UNSET && cq != UNSET {
                    forced = [(r, self.x.under(cp, cq)), (t, self.x.over(cq, cp))];
                } else if cr != UNSET && ct != UNSET {
                    let (xp, xq) = self.x.sideways_inv(ct, cr);
                    forced = [(p, xp), (q, xq)];
                } else if cp != UNSET && ct != UNSET {
                    forced[0] = (q, self.x.over_inv(ct, cp));
                } else if cq != UNSET && cr != UNSET {
                    forced[0] = (p, self.x.under_inv(cr, cq));
                }
                for (slot, val) in forced {
                    if slot == UNSET {
                        continue;
                    }
                    if colors[slot] == UNSET {
                        colors[slot] = val;
                        trail.push(slot);
                        queue.push(slot);
                    } else if colors[slot] != val {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn search(&self, colors: &mut Vec<usize>, k: usize, out: &mut Vec<Coloring>) {
        let mut k = k;
        while k < self.order.len() && colors[self.order[k]] != UNSET {
            k += 1;
        }
        if k == self.order.len() {
            out.push(colors.clone());
            return;
        }
        let s = self.order[k];
        let mut trail = Vec::new();
        for v in 0..self.x.size() {
            if self.assign(colors, &mut trail, s, v) {
                self.search(colors, k + 1, out);
            }
            for t in trail.drain(..) {
                colors[t] = UNSET;
            }
        }
    }
}

/// All colorings of `d` by `x`, sorted lexicographically.
pub fn enumerate_colorings(d: &LinkDiagram, x: &Biquandle) -> Vec<Coloring> {
    let m = d.semiarc_count();
    let rels: Vec<[usize; 4]> = d.crossings().iter().map(relation_slots).collect();
    let mut touching = vec![Vec::new(); m];
    for (ci, r) in rels.iter().enumerate() {
        for &s in r {
            if !touching[s].contains(&ci) {
                touching[s].push(ci);
            }
        }
    }
    let order: Vec<usize> = d.component_cycles().into_iter().flatten().collect();
    let solver = Solver { x, rels, touching, order };
    let mut arcs = Vec::new();
    solver.search(&mut vec![UNSET; m], 0, &mut arcs);

    let loops = d.free_loops();
    let mut out = Vec::with_capacity(arcs.len() * x.size().pow(loops as u32));
    for base in arcs {
        let mut tail = vec![0; loops];
        loop {
            let mut c = base.clone();
            c.extend_from_slice(&tail);
            out.push(c);
            let Some(i) = (0..loops).rev().find(|&i| tail[i] + 1 < x.size()) else { break };
            tail[i] += 1;
            for t in &mut tail[i + 1..] {
                *t = 0;
            }
        }
    }
    out.sort_unstable();
    out
}

/// `|Hom(B(L), X)|`.
pub fn counting_invariant(d: &LinkDiagram, x: &Biquandle) -> usize {
    enumerate_colorings(d, x).len()
}

/// Post-composition `φ ∘ c`.
pub fn apply_endomorphism(phi: &BqMap, c: &[usize]) -> Coloring {
    c.iter().map(|&v| phi.apply(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> LinkDiagram {
        LinkDiagram::parse("X-(4,1,2,3) X-(2,3,4,1)").unwrap()
    }

    fn hopf4() -> Biquandle {
        Biquandle::parse("4\n1 1 2 2\n2 2 1 1\n3 3 4 4\n4 4 3 3\n\n1 1 1 1\n2 2 2 2\n4 4 4 4\n3 3 3 3\n").unwrap()
    }

    #[test]
    fn hopf_counts() {
        assert_eq!(counting_invariant(&hopf(), &Biquandle::trivial(2).unwrap()), 4);
        assert_eq!(counting_invariant(&hopf(), &hopf4()), 8);
    }

    #[test]
    fn unknot_counts() {
        let u = LinkDiagram::parse("U").unwrap();
        assert_eq!(counting_invariant(&u, &hopf4()), 4);
        let uu = LinkDiagram::parse("U U").unwrap();
        assert_eq!(enumerate_colorings(&uu, &Biquandle::trivial(3).unwrap()).len(), 9);
    }

    #[test]
    fn fox_colorings_of_trefoil() {
        let t = LinkDiagram::parse("X-(1,4,5,2) X-(3,6,1,4) X-(5,2,3,6)").unwrap();
        assert_eq!(counting_invariant(&t, &Biquandle::dihedral_quandle(3).unwrap()), 9);
        assert_eq!(counting_invariant(&t, &Biquandle::trivial(5).unwrap()), 5);
    }

    #[test]
    fn phi_permutes_hopf_colorings() {
        let (d, x) = (hopf(), hopf4());
        let cs = enumerate_colorings(&d, &x);
        let phi = BqMap::parse("2 1 3 4", 4).unwrap();
        let mut imgs: Vec<Coloring> = cs.iter().map(|c| apply_endomorphism(&phi, c)).collect();
        assert!(imgs.iter().all(|c| is_valid_coloring(&d, &x, c)));
        imgs.sort();
        assert_eq!(imgs, cs);
    }
}
