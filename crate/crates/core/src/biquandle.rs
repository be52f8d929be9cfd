//! Finite biquandles given by operation tables, their axioms, and maps between them.
//!
//! Elements are `0..n` internally. Text formats are 1-indexed.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::rings::{RingElement, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiquandleError {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("biquandle axioms violated ({} instances, first: {})", .0.len(), .0[0])]
    Axioms(Vec<Violation>),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Which axiom instance failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `x ⊳̲ x = x ⊳̄ x`.
    Diagonal,
    /// `α_y : x ↦ x ⊳̄ y` is not a bijection.
    Alpha,
    /// `β_y : x ↦ x ⊳̲ y` is not a bijection.
    Beta,
    /// `S(x, y) = (y ⊳̄ x, x ⊳̲ y)` is not a bijection.
    Sideways,
    /// Exchange law 1, 2 or 3.
    Exchange(u8),
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Diagonal => f.write_str("i"),
            Axiom::Alpha => f.write_str("ii.alpha"),
            Axiom::Beta => f.write_str("ii.beta"),
            Axiom::Sideways => f.write_str("ii.S"),
            Axiom::Exchange(k) => write!(f, "iii.{k}"),
        }
    }
}

/// A violated axiom instance; witnesses are 0-indexed, displayed 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub axiom: Axiom,
    pub witnesses: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom={}", self.axiom)?;
        for (name, w) in ["x", "y", "z", "t"].iter().zip(&self.witnesses) {
            write!(f, " {name}={}", w + 1)?;
        }
        Ok(())
    }
}

/// A validated finite biquandle.
///
/// Besides the two operation tables this caches the inverses of `α_y`, `β_y`
/// and `S`, which the coloring solver uses to propagate colors backwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biquandle {
    n: usize,
    under: Vec<usize>,
    over: Vec<usize>,
    // alpha_inv[y * n + r] = x with x ⊳̄ y = r
    alpha_inv: Vec<usize>,
    beta_inv: Vec<usize>,
    // s_inv[a * n + b] = (x, y) with S(x, y) = (a, b)
    s_inv: Vec<(usize, usize)>,
}

/// Checks table shape and runs every axiom; an empty result means valid.
pub fn validate_biquandle(under: &[Vec<usize>], over: &[Vec<usize>]) -> Result<Vec<Violation>, BiquandleError> {
    let n = under.len();
    if n == 0 {
        return Err(BiquandleError::Malformed("empty table".into()));
    }
    if over.len() != n {
        return Err(BiquandleError::Malformed(format!("under table has {n} rows, over table {}", over.len())));
    }
    for (name, t) in [("under", under), ("over", over)] {
        for (i, row) in t.iter().enumerate() {
            if row.len() != n {
                return Err(BiquandleError::Malformed(format!("{name} row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            if let Some(v) = row.iter().find(|&&v| v >= n) {
                return Err(BiquandleError::Malformed(format!("{name} row {} entry {} out of range", i + 1, v + 1)));
            }
        }
    }
    let u = |x: usize, y: usize| under[x][y];
    let o = |x: usize, y: usize| over[x][y];
    let mut out = Vec::new();

    for x in 0..n {
        if u(x, x) != o(x, x) {
            out.push(Violation { axiom: Axiom::Diagonal, witnesses: vec![x] });
        }
    }

    for y in 0..n {
        let mut seen_a = vec![false; n];
        let mut seen_b = vec![false; n];
        let mut bad_a = false;
        let mut bad_b = false;
        for x in 0..n {
            bad_a |= std::mem::replace(&mut seen_a[o(x, y)], true);
            bad_b |= std::mem::replace(&mut seen_b[u(x, y)], true);
        }
        if bad_a {
            out.push(Violation { axiom: Axiom::Alpha, witnesses: vec![y] });
        }
        if bad_b {
            out.push(Violation { axiom: Axiom::Beta, witnesses: vec![y] });
        }
    }

    let mut seen = vec![None; n * n];
    for x in 0..n {
        for y in 0..n {
            let img = o(y, x) * n + u(x, y);
            match seen[img] {
                Some((px, py)) => out.push(Violation { axiom: Axiom::Sideways, witnesses: vec![px, py, x, y] }),
                None => seen[img] = Some((x, y)),
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if u(u(x, y), u(z, y)) != u(u(x, z), o(y, z)) {
                    out.push(Violation { axiom: Axiom::Exchange(1), witnesses: vec![x, y, z] });
                }
                if o(u(x, y), u(z, y)) != u(o(x, z), o(y, z)) {
                    out.push(Violation { axiom: Axiom::Exchange(2), witnesses: vec![x, y, z] });
                }
                if o(o(x, y), o(z, y)) != o(o(x, z), u(y, z)) {
                    out.push(Violation { axiom: Axiom::Exchange(3), witnesses: vec![x, y, z] });
                }
            }
        }
    }
    Ok(out)
}

impl Biquandle {
    /// Builds from 0-indexed tables (`under[x][y] = x ⊳̲ y`), rejecting any axiom violation.
    pub fn new(under: Vec<Vec<usize>>, over: Vec<Vec<usize>>) -> Result<Self, BiquandleError> {
        let violations = validate_biquandle(&under, &over)?;
        if !violations.is_empty() {
            return Err(BiquandleError::Axioms(violations));
        }
        let n = under.len();
        let under: Vec<usize> = under.into_iter().flatten().collect();
        let over: Vec<usize> = over.into_iter().flatten().collect();
        let mut alpha_inv = vec![0; n * n];
        let mut beta_inv = vec![0; n * n];
        let mut s_inv = vec![(0, 0); n * n];
        for x in 0..n {
            for y in 0..n {
                alpha_inv[y * n + over[x * n + y]] = x;
                beta_inv[y * n + under[x * n + y]] = x;
                s_inv[over[y * n + x] * n + under[x * n + y]] = (x, y);
            }
        }
        Ok(Biquandle { n, under, over, alpha_inv, beta_inv, s_inv })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `x ⊳̲ y`.
    #[inline]
    pub fn under(&self, x: usize, y: usize) -> usize {
        self.under[x * self.n + y]
    }

    /// `x ⊳̄ y`.
    #[inline]
    pub fn over(&self, x: usize, y: usize) -> usize {
        self.over[x * self.n + y]
    }

    /// The `x` with `x ⊳̄ y = r`.
    #[inline]
    pub fn over_inv(&self, r: usize, y: usize) -> usize {
        self.alpha_inv[y * self.n + r]
    }

    /// The `x` with `x ⊳̲ y = r`.
    #[inline]
    pub fn under_inv(&self, r: usize, y: usize) -> usize {
        self.beta_inv[y * self.n + r]
    }

    /// `S(x, y) = (y ⊳̄ x, x ⊳̲ y)`.
    #[inline]
    pub fn sideways(&self, x: usize, y: usize) -> (usize, usize) {
        (self.over(y, x), self.under(x, y))
    }

    #[inline]
    pub fn sideways_inv(&self, a: usize, b: usize) -> (usize, usize) {
        self.s_inv[a * self.n + b]
    }

    pub fn under_table(&self) -> Vec<Vec<usize>> {
        self.under.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn over_table(&self) -> Vec<Vec<usize>> {
        self.over.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// `x ⊳̲ y = 2y − x (mod n)`, `x ⊳̄ y = x`.
    pub fn dihedral_quandle(n: usize) -> Result<Self, BiquandleError> {
        if n < 2 {
            return Err(BiquandleError::Parameter(format!("dihedral quandle needs n >= 2, got {n}")));
        }
        let under = (0..n).map(|x| (0..n).map(|y| (2 * y + n - x) % n).collect()).collect();
        Self::new(under, Self::projection(n))
    }

    /// `x ⊳̲ y = tx + (s − t)y`, `x ⊳̄ y = sx` over `Z_n` with units `t`, `s`.
    pub fn alexander_biquandle(t: &RingElement, s: &RingElement) -> Result<Self, BiquandleError> {
        let RingSpec::Modular(m) = *t.spec() else {
            return Err(BiquandleError::Parameter("Alexander biquandle needs a modular ring".into()));
        };
        if t.spec() != s.spec() {
            return Err(BiquandleError::Parameter("t and s lie in different rings".into()));
        }
        for (name, e) in [("t", t), ("s", s)] {
            if !e.is_unit() {
                return Err(BiquandleError::Parameter(format!("{name} = {e} is not a unit")));
            }
        }
        let n = m as usize;
        let (t, s) = (t.residue().unwrap() as usize, s.residue().unwrap() as usize);
        let under = (0..n).map(|x| (0..n).map(|y| (t * x + (s + n - t) * y) % n).collect()).collect();
        let over = (0..n).map(|x| (0..n).map(|_| s * x % n).collect()).collect();
        Self::new(under, over)
    }

    /// Both operations are the left projection.
    pub fn trivial(n: usize) -> Result<Self, BiquandleError> {
        if n == 0 {
            return Err(BiquandleError::Parameter("trivial biquandle needs n >= 1".into()));
        }
        Self::new(Self::projection(n), Self::projection(n))
    }

    /// Conjugation quandle `x ⊳̲ y = y^{-1} x y` of a finite group given by its
    /// multiplication table (`mul[a][b] = ab`), `x ⊳̄ y = x`.
    pub fn conjugation_quandle(mul: &[Vec<usize>]) -> Result<Self, BiquandleError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(BiquandleError::Malformed("group table must be square with entries in range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a))
            .ok_or_else(|| BiquandleError::Parameter("group table has no identity".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a][b] == e)
                .ok_or_else(|| BiquandleError::Parameter(format!("element {} has no inverse", a + 1)))?;
        }
        let under = (0..n).map(|x| (0..n).map(|y| mul[mul[inv[y]][x]][y]).collect()).collect();
        Self::new(under, Self::projection(n))
    }

    fn projection(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|x| vec![x; n]).collect()
    }

    /// Parses `n`, then `n` rows of `⊳̲`, a blank line, then `n` rows of `⊳̄`; entries 1-indexed.
    /// Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, BiquandleError> {
        let (under, over) = parse_tables(text)?;
        Self::new(under, over)
    }

    /// Text form accepted by [`Biquandle::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (i, t) in [&self.under, &self.over].into_iter().enumerate() {
            if i == 1 {
                s.push('\n');
            }
            for row in t.chunks(self.n) {
                let cells: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
                s.push_str(&cells.join(" "));
                s.push('\n');
            }
        }
        s
    }

    /// All endomorphisms in lexicographic order of their image lists.
    pub fn endomorphisms(&self) -> Vec<BqMap> {
        let n = self.n;
        (0..n)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut found = Vec::new();
                let mut img = vec![usize::MAX; n];
                img[0] = first;
                if self.partial_ok(&img, 0) {
                    self.extend_endo(&mut img, 1, &mut found);
                }
                found
            })
            .collect()
    }

    fn extend_endo(&self, img: &mut Vec<usize>, k: usize, found: &mut Vec<BqMap>) {
        if k == self.n {
            found.push(BqMap { source: self.n, target: self.n, images: img.clone() });
            return;
        }
        for v in 0..self.n {
            img[k] = v;
            if self.partial_ok(img, k) {
                self.extend_endo(img, k + 1, found);
            }
        }
        img[k] = usize::MAX;
    }

    /// Checks every operation instance whose three elements are all among `0..=k`
    /// and involve `k`.
    fn partial_ok(&self, img: &[usize], k: usize) -> bool {
        let known = |v: usize| v <= k;
        for a in 0..=k {
            for (x, y) in [(a, k), (k, a)] {
                for (r, fr) in [(self.under(x, y), self.under(img[x], img[y])), (self.over(x, y), self.over(img[x], img[y]))] {
                    if known(r) && img[r] != fr {
                        return false;
                    }
                }
            }
        }
        // Instances whose result is k but whose arguments were fixed earlier.
        for x in 0..k {
            for y in 0..k {
                for (r, fr) in [(self.under(x, y), self.under(img[x], img[y])), (self.over(x, y), self.over(img[x], img[y]))] {
                    if r == k && img[r] != fr {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Operation table rows, 0-indexed.
pub type Table = Vec<Vec<usize>>;

/// Parses a table file without checking the axioms; entries become 0-indexed.
pub fn parse_tables(text: &str) -> Result<(Table, Table), BiquandleError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .skip_while(|(_, l)| l.is_empty());
    let (ln, first) = lines.next().ok_or(BiquandleError::Parse { line: 1, msg: "empty input".into() })?;
    let n: usize = first.parse().map_err(|_| BiquandleError::Parse { line: ln, msg: format!("expected size, got {first:?}") })?;
    if n == 0 {
        return Err(BiquandleError::Parse { line: ln, msg: "size must be positive".into() });
    }
    let rows: Vec<(usize, &str)> = lines.filter(|(_, l)| !l.is_empty()).collect();
    if rows.len() != 2 * n {
        return Err(BiquandleError::Parse {
            line: rows.last().map_or(ln, |r| r.0),
            msg: format!("expected {} table rows, found {}", 2 * n, rows.len()),
        });
    }
    let mut tables = Vec::with_capacity(2);
    for chunk in rows.chunks(n) {
        let mut t = Vec::with_capacity(n);
        for &(line, row) in chunk {
            t.push(parse_index_row(row, n, line)?);
        }
        tables.push(t);
    }
    let over = tables.pop().unwrap();
    let under = tables.pop().unwrap();
    Ok((under, over))
}

fn parse_index_row(row: &str, n: usize, line: usize) -> Result<Vec<usize>, BiquandleError> {
    let vals = row
        .split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
            _ => Err(BiquandleError::Parse { line, msg: format!("entry {t:?} not in 1..={n}") }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != n {
        return Err(BiquandleError::Parse { line, msg: format!("expected {n} entries, found {}", vals.len()) });
    }
    Ok(vals)
}

/// A map between finite biquandles, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BqMap {
    source: usize,
    target: usize,
    images: Vec<usize>,
}

impl BqMap {
    pub fn new(images: Vec<usize>, target: usize) -> Result<Self, BiquandleError> {
        if let Some(v) = images.iter().find(|&&v| v >= target) {
            return Err(BiquandleError::Malformed(format!("image {} outside target of size {target}", v + 1)));
        }
        Ok(BqMap { source: images.len(), target, images })
    }

    pub fn identity(n: usize) -> Self {
        BqMap { source: n, target: n, images: (0..n).collect() }
    }

    pub fn constant(n: usize, a: usize) -> Self {
        BqMap { source: n, target: n, images: vec![a; n] }
    }

    pub fn source_size(&self) -> usize {
        self.source
    }

    pub fn target_size(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &BqMap) -> Option<BqMap> {
        (inner.target == self.source).then(|| BqMap {
            source: inner.source,
            target: self.target,
            images: inner.images.iter().map(|&v| self.images[v]).collect(),
        })
    }

    pub fn is_homomorphism(&self, x: &Biquandle, y: &Biquandle) -> bool {
        if self.source != x.size() || self.target != y.size() {
            return false;
        }
        let f = |v: usize| self.images[v];
        (0..x.size()).all(|a| {
            (0..x.size()).all(|b| f(x.under(a, b)) == y.under(f(a), f(b)) && f(x.over(a, b)) == y.over(f(a), f(b)))
        })
    }

    /// Parses a 1-indexed image list such as `2 1 3 4`.
    pub fn parse(line: &str, target: usize) -> Result<Self, BiquandleError> {
        let images = line
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 && v <= target => Ok(v - 1),
                _ => Err(BiquandleError::Parse { line: 1, msg: format!("image {t:?} not in 1..={target}") }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BqMap { source: images.len(), target, images })
    }

    /// Parses one image list per non-empty, non-comment line.
    pub fn parse_list(text: &str, target: usize) -> Result<Vec<Self>, BiquandleError> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            out.push(Self::parse(line, target).map_err(|e| match e {
                BiquandleError::Parse { msg, .. } => BiquandleError::Parse { line: i + 1, msg },
                other => other,
            })?);
        }
        Ok(out)
    }
}

impl fmt::Display for BqMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.images.iter().map(|v| (v + 1).to_string()).collect();
        f.write_str(&cells.join(" "))
    }
}
