//! Biquandle brackets `[A | B]`: axiom checking and state-sum evaluation.
//!
//! At a crossing with sideways pair `(x, y)` (see [`crate::coloring`]) the
//! A-smoothing is the oriented one and contributes `A_{x,y}`; the B-smoothing
//! contributes `B_{x,y}`. Negative crossings use the inverses.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::biquandle::Biquandle;
use crate::coloring::{crossing_pair, is_valid_coloring};
use crate::diagram::{LinkDiagram, Sign};
use crate::rings::{RingElement, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("bracket axioms violated ({} instances, first: {})", .0.len(), .0[0])]
    Violations(Vec<BracketViolation>),
    #[error("empty link")]
    EmptyLink,
    #[error("not a valid coloring of this diagram")]
    InvalidColoring,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Matrix {
    A,
    B,
}

/// A failed bracket axiom instance. Indices are 0-based, displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketViolation {
    NotAUnit { matrix: Matrix, x: usize, y: usize },
    /// `-A_{x,x}^2 B_{x,x}^{-1}` differs between two diagonal entries.
    W { x0: usize, w0: RingElement, x: usize, w: RingElement },
    /// `-A^{-1}B - AB^{-1}` differs between two pairs.
    Delta { at0: (usize, usize), d0: RingElement, at: (usize, usize), d: RingElement },
    /// One of the five triple equations.
    Equation { k: u8, x: usize, y: usize, z: usize },
}

impl fmt::Display for BracketViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketViolation::NotAUnit { matrix, x, y } => write!(f, "axiom=unit {matrix:?} x={} y={}", x + 1, y + 1),
            BracketViolation::W { x0, w0, x, w } => write!(f, "axiom=i x={} w={w0} x'={} w'={w}", x0 + 1, x + 1),
            BracketViolation::Delta { at0, d0, at, d } => write!(
                f,
                "axiom=ii x={} y={} delta={d0} x'={} y'={} delta'={d}",
                at0.0 + 1,
                at0.1 + 1,
                at.0 + 1,
                at.1 + 1
            ),
            BracketViolation::Equation { k, x, y, z } => write!(f, "axiom=iii.{k} x={} y={} z={}", x + 1, y + 1, z + 1),
        }
    }
}

/// How the circle count enters the state sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `δ^{circles}`: the unknot evaluates to `δ`.
    #[default]
    Unreduced,
    /// `δ^{circles − 1}`: the unknot evaluates to 1.
    Reduced,
}

/// A biquandle bracket over a biquandle `X`.
///
/// `certified` is true only for values produced by [`validate_bracket`];
/// [`BiquandleBracket::with_constants`] builds uncertified ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquandleBracket {
    x: Biquandle,
    spec: RingSpec,
    a: Vec<RingElement>,
    b: Vec<RingElement>,
    a_inv: Vec<RingElement>,
    b_inv: Vec<RingElement>,
    delta: RingElement,
    w: RingElement,
    certified: bool,
}

fn check_shape(x: &Biquandle, spec: &RingSpec, a: &[Vec<RingElement>], b: &[Vec<RingElement>]) -> Result<(), BracketError> {
    let n = x.size();
    for (name, m) in [("A", a), ("B", b)] {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(BracketError::Shape(format!("{name} must be {n}x{n}")));
        }
        if let Some(e) = m.iter().flatten().find(|e| e.spec() != spec) {
            return Err(BracketError::Ring(RingError::Mismatch(spec.clone(), e.spec().clone())));
        }
    }
    Ok(())
}

fn unit_violations(a: &[Vec<RingElement>], b: &[Vec<RingElement>]) -> Vec<BracketViolation> {
    let mut out = Vec::new();
    for (matrix, m) in [(Matrix::A, a), (Matrix::B, b)] {
        for (x, row) in m.iter().enumerate() {
            for (y, e) in row.iter().enumerate() {
                if !e.is_unit() {
                    out.push(BracketViolation::NotAUnit { matrix, x, y });
                }
            }
        }
    }
    out
}

/// Checks every axiom and returns the certified bracket, or every violated instance.
pub fn validate_bracket(
    x: &Biquandle,
    spec: &RingSpec,
    a: Vec<Vec<RingElement>>,
    b: Vec<Vec<RingElement>>,
) -> Result<BiquandleBracket, BracketError> {
    check_shape(x, spec, &a, &b)?;
    let units = unit_violations(&a, &b);
    if !units.is_empty() {
        return Err(BracketError::Violations(units));
    }
    let mut br = BiquandleBracket::assemble(x, spec, a, b)?;
    let n = x.size();
    let mut bad = Vec::new();

    let w0 = br.w_at(0);
    for i in 1..n {
        let w = br.w_at(i);
        if w != w0 {
            bad.push(BracketViolation::W { x0: 0, w0: w0.clone(), x: i, w });
        }
    }

    let delta0 = br.delta_at(0, 0);
    for i in 0..n {
        for j in 0..n {
            let d = br.delta_at(i, j);
            if d != delta0 {
                bad.push(BracketViolation::Delta { at0: (0, 0), d0: delta0.clone(), at: (i, j), d });
            }
        }
    }

    for xx in 0..n {
        for y in 0..n {
            for z in 0..n {
                for k in br.failed_equations(&delta0, xx, y, z) {
                    bad.push(BracketViolation::Equation { k, x: xx, y, z });
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(BracketError::Violations(bad));
    }
    br.delta = delta0;
    br.w = w0;
    br.certified = true;
    Ok(br)
}

impl BiquandleBracket {
    fn assemble(x: &Biquandle, spec: &RingSpec, a: Vec<Vec<RingElement>>, b: Vec<Vec<RingElement>>) -> Result<Self, BracketError> {
        let a: Vec<RingElement> = a.into_iter().flatten().collect();
        let b: Vec<RingElement> = b.into_iter().flatten().collect();
        let a_inv = a.iter().map(RingElement::inverse).collect::<Result<Vec<_>, _>>()?;
        let b_inv = b.iter().map(RingElement::inverse).collect::<Result<Vec<_>, _>>()?;
        Ok(BiquandleBracket {
            x: x.clone(),
            spec: spec.clone(),
            a,
            b,
            a_inv,
            b_inv,
            delta: spec.zero(),
            w: spec.one(),
            certified: false,
        })
    }

    /// Uses the given `δ` and `w` without checking the axioms. Entries must
    /// still be units and `w` must be a unit.
    pub fn with_constants(
        x: &Biquandle,
        spec: &RingSpec,
        a: Vec<Vec<RingElement>>,
        b: Vec<Vec<RingElement>>,
        delta: RingElement,
        w: RingElement,
    ) -> Result<Self, BracketError> {
        check_shape(x, spec, &a, &b)?;
        let units = unit_violations(&a, &b);
        if !units.is_empty() {
            return Err(BracketError::Violations(units));
        }
        if delta.spec() != spec || w.spec() != spec {
            return Err(BracketError::Ring(RingError::Mismatch(spec.clone(), w.spec().clone())));
        }
        w.inverse()?;
        let mut br = Self::assemble(x, spec, a, b)?;
        br.delta = delta;
        br.w = w;
        Ok(br)
    }

    pub fn biquandle(&self) -> &Biquandle {
        &self.x
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn delta(&self) -> &RingElement {
        &self.delta
    }

    pub fn w(&self) -> &RingElement {
        &self.w
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn a(&self, x: usize, y: usize) -> &RingElement {
        &self.a[x * self.x.size() + y]
    }

    pub fn b(&self, x: usize, y: usize) -> &RingElement {
        &self.b[x * self.x.size() + y]
    }

    fn a_inv(&self, x: usize, y: usize) -> &RingElement {
        &self.a_inv[x * self.x.size() + y]
    }

    fn b_inv(&self, x: usize, y: usize) -> &RingElement {
        &self.b_inv[x * self.x.size() + y]
    }

    pub fn a_matrix(&self) -> Vec<Vec<RingElement>> {
        self.a.chunks(self.x.size()).map(<[RingElement]>::to_vec).collect()
    }

    pub fn b_matrix(&self) -> Vec<Vec<RingElement>> {
        self.b.chunks(self.x.size()).map(<[RingElement]>::to_vec).collect()
    }

    /// `-A_{x,x}^2 B_{x,x}^{-1}`.
    pub fn w_at(&self, x: usize) -> RingElement {
        self.a(x, x).mul(self.a(x, x)).unwrap().mul(self.b_inv(x, x)).unwrap().neg()
    }

    /// `-A_{x,y}^{-1} B_{x,y} - A_{x,y} B_{x,y}^{-1}`.
    pub fn delta_at(&self, x: usize, y: usize) -> RingElement {
        let t1 = self.a_inv(x, y).mul(self.b(x, y)).unwrap();
        let t2 = self.a(x, y).mul(self.b_inv(x, y)).unwrap();
        t1.add(&t2).unwrap().neg()
    }

    /// Indices (1..=5) of the triple equations failing at `(x, y, z)`.
    fn failed_equations(&self, delta: &RingElement, x: usize, y: usize, z: usize) -> Vec<u8> {
        let q = &self.x;
        let p1 = (q.under(x, y), q.over(z, y));
        let p2 = (q.over(y, x), q.over(z, x));
        let p3 = (q.under(x, z), q.under(y, z));
        let a = |p: (usize, usize)| self.a(p.0, p.1);
        let b = |p: (usize, usize)| self.b(p.0, p.1);
        let prod = |fs: &[&RingElement]| fs.iter().skip(1).fold(fs[0].clone(), |acc, f| acc.mul(f).unwrap());
        let sum = |ts: Vec<RingElement>| ts.iter().skip(1).fold(ts[0].clone(), |acc, t| acc.add(t).unwrap());
        let (xy, yz, xz) = ((x, y), (y, z), (x, z));

        let checks = [
            (prod(&[a(xy), a(yz), a(p1)]), prod(&[a(xz), a(p2), a(p3)])),
            (prod(&[a(xy), b(yz), b(p1)]), prod(&[b(xz), b(p2), a(p3)])),
            (prod(&[b(xy), a(yz), b(p1)]), prod(&[b(xz), a(p2), b(p3)])),
            (
                prod(&[a(xy), a(yz), b(p1)]),
                sum(vec![
                    prod(&[a(xz), b(p2), a(p3)]),
                    prod(&[a(xz), a(p2), b(p3)]),
                    prod(&[delta, a(xz), b(p2), b(p3)]),
                    prod(&[b(xz), b(p2), b(p3)]),
                ]),
            ),
            (
                sum(vec![
                    prod(&[b(xy), a(yz), a(p1)]),
                    prod(&[a(xy), b(yz), a(p1)]),
                    prod(&[delta, b(xy), b(yz), a(p1)]),
                    prod(&[b(xy), b(yz), b(p1)]),
                ]),
                prod(&[b(xz), a(p2), a(p3)]),
            ),
        ];
        checks
            .iter()
            .enumerate()
            .filter(|(_, (l, r))| l != r)
            .map(|(i, _)| i as u8 + 1)
            .collect()
    }

    /// Coefficient of crossing `c` in the given smoothing.
    fn coefficient(&self, sign: Sign, pair: (usize, usize), a_type: bool) -> &RingElement {
        let (x, y) = pair;
        match (sign, a_type) {
            (Sign::Positive, true) => self.a(x, y),
            (Sign::Positive, false) => self.b(x, y),
            (Sign::Negative, true) => self.a_inv(x, y),
            (Sign::Negative, false) => self.b_inv(x, y),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Circles in the state where crossing `i` takes the A-smoothing iff `a_type[i]`.
/// Free loops are not counted.
pub fn state_circles(d: &LinkDiagram, a_type: &[bool]) -> usize {
    let mut uf = UnionFind::new(d.semiarc_count());
    let mut comps = d.semiarc_count();
    for (c, &a) in d.crossings().iter().zip(a_type) {
        let joins = if a {
            [(c.under_in, c.over_out), (c.over_in, c.under_out)]
        } else {
            [(c.under_in, c.over_in), (c.under_out, c.over_out)]
        };
        for (p, q) in joins {
            if uf.union(p, q) {
                comps -= 1;
            }
        }
    }
    comps
}

/// Circle counts for all `2^n` states, indexed by the bitmask of A-smoothings.
pub fn state_table(d: &LinkDiagram) -> Vec<usize> {
    let n = d.crossings().len();
    assert!(n < usize::BITS as usize - 1, "too many crossings for a state sum");
    (0..1usize << n)
        .map(|mask| {
            let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            state_circles(d, &a)
        })
        .collect()
}

/// The bracket value `β(c)` of a colored diagram.
pub fn evaluate_bracket(
    d: &LinkDiagram,
    coloring: &[usize],
    br: &BiquandleBracket,
    norm: Normalization,
) -> Result<RingElement, BracketError> {
    evaluate_with_table(d, &state_table(d), coloring, br, norm)
}

/// As [`evaluate_bracket`] with a precomputed [`state_table`].
pub fn evaluate_with_table(
    d: &LinkDiagram,
    table: &[usize],
    coloring: &[usize],
    br: &BiquandleBracket,
    norm: Normalization,
) -> Result<RingElement, BracketError> {
    if d.is_empty() {
        return Err(BracketError::EmptyLink);
    }
    if !is_valid_coloring(d, &br.x, coloring) {
        return Err(BracketError::InvalidColoring);
    }
    let coeffs: Vec<[&RingElement; 2]> = d
        .crossings()
        .iter()
        .map(|c| {
            let pair = crossing_pair(c, coloring);
            [br.coefficient(c.sign, pair, false), br.coefficient(c.sign, pair, true)]
        })
        .collect();

    let mut by_circles: BTreeMap<usize, RingElement> = BTreeMap::new();
    for (mask, &circles) in table.iter().enumerate() {
        let mut term = br.spec.one();
        for (i, c) in coeffs.iter().enumerate() {
            term = term.mul(c[mask >> i & 1])?;
        }
        let slot = by_circles.entry(circles + d.free_loops()).or_insert_with(|| br.spec.zero());
        *slot = slot.add(&term)?;
    }

    let mut total = br.spec.zero();
    for (k, s) in by_circles {
        let e = match norm {
            Normalization::Unreduced => k,
            Normalization::Reduced => k - 1,
        };
        total = total.add(&s.mul(&br.delta.pow(e as u32))?)?;
    }
    Ok(total.mul(&br.w.pow_signed(-d.writhe())?)?)
}

/// Entrywise product of two brackets over the same biquandle, validated.
pub fn hadamard_product(b1: &BiquandleBracket, b2: &BiquandleBracket) -> Result<BiquandleBracket, BracketError> {
    if b1.x != b2.x {
        return Err(BracketError::Shape("brackets are over different biquandles".into()));
    }
    if b1.spec != b2.spec {
        return Err(BracketError::Ring(RingError::Mismatch(b1.spec.clone(), b2.spec.clone())));
    }
    let n = b1.x.size();
    let prod = |m1: &[RingElement], m2: &[RingElement]| -> Vec<Vec<RingElement>> {
        (0..n).map(|i| (0..n).map(|j| m1[i * n + j].mul(&m2[i * n + j]).unwrap()).collect()).collect()
    };
    validate_bracket(&b1.x, &b1.spec, prod(&b1.a, &b2.a), prod(&b1.b, &b2.b))
}

/// The bracket with `A = B = φ`, validated.
pub fn cocycle_bracket(x: &Biquandle, spec: &RingSpec, phi: Vec<Vec<RingElement>>) -> Result<BiquandleBracket, BracketError> {
    validate_bracket(x, spec, phi.clone(), phi)
}

/// Contents of a bracket file before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketData {
    pub spec: RingSpec,
    pub a: Vec<Vec<RingElement>>,
    pub b: Vec<Vec<RingElement>>,
    pub delta: Option<RingElement>,
    pub w: Option<RingElement>,
}

impl BracketData {
    /// Parses: ring spec line; size line; `n` rows of `2n` literals (`|` separators
    /// allowed); optional `delta = <lit>` and `w = <lit>` lines. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, BracketError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, msg: String| BracketError::Parse { line, msg };
        let (ln, spec_line) = lines.next().ok_or_else(|| perr(1, "missing ring spec".into()))?;
        let spec = RingSpec::parse(spec_line).map_err(|e| perr(ln, e.to_string()))?;
        let (ln, size_line) = lines.next().ok_or_else(|| perr(ln, "missing size".into()))?;
        let n: usize = size_line.parse().map_err(|_| perr(ln, format!("expected size, got {size_line:?}")))?;
        let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
        let (mut delta, mut w) = (None, None);
        for (ln, line) in lines {
            if let Some((key, val)) = line.split_once('=') {
                let v = spec.parse_element(val).map_err(|e| perr(ln, e.to_string()))?;
                match key.trim() {
                    "delta" => delta = Some(v),
                    "w" => w = Some(v),
                    other => return Err(perr(ln, format!("unknown setting {other:?}"))),
                }
                continue;
            }
            if a.len() == n {
                return Err(perr(ln, format!("more than {n} matrix rows")));
            }
            let cells = line
                .split_whitespace()
                .filter(|t| *t != "|")
                .map(|t| spec.parse_element(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| perr(ln, e.to_string()))?;
            if cells.len() != 2 * n {
                return Err(perr(ln, format!("expected {} entries, found {}", 2 * n, cells.len())));
            }
            let mut cells = cells;
            b.push(cells.split_off(n));
            a.push(cells);
        }
        if a.len() != n {
            return Err(perr(0, format!("expected {n} matrix rows, found {}", a.len())));
        }
        Ok(BracketData { spec, a, b, delta, w })
    }

    pub fn has_overrides(&self) -> bool {
        self.delta.is_some() || self.w.is_some()
    }

    pub fn validate(&self, x: &Biquandle) -> Result<BiquandleBracket, BracketError> {
        validate_bracket(x, &self.spec, self.a.clone(), self.b.clone())
    }

    /// Uncertified bracket using the file's overrides; a missing constant is taken
    /// from the first entry (`w` from `(1,1)`, `δ` from `(1,1)`).
    pub fn with_overrides(&self, x: &Biquandle) -> Result<BiquandleBracket, BracketError> {
        let probe = BiquandleBracket::with_constants(x, &self.spec, self.a.clone(), self.b.clone(), self.spec.zero(), self.spec.one())?;
        let delta = self.delta.clone().unwrap_or_else(|| probe.delta_at(0, 0));
        let w = self.w.clone().unwrap_or_else(|| probe.w_at(0));
        BiquandleBracket::with_constants(x, &self.spec, self.a.clone(), self.b.clone(), delta, w)
    }
}
