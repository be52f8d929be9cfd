//! Oriented link diagrams as signed PD codes over semiarcs.
//!
//! A crossing is written `X±(ui,oi,oo,uo)`: under-in, over-in, over-out,
//! under-out semiarc labels, with an explicit sign. `U` adds a crossingless
//! component. Virtual crossings are not recorded; semiarcs simply pass
//! through them, so any abstract code with consistent orientation is accepted.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error("dangling semiarc {label}: used {count} time(s)")]
    DanglingSemiarc { label: u64, count: usize },
    #[error("orientation conflict on semiarc {label}: used twice as {direction}")]
    OrientationConflict { label: u64, direction: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// One classical crossing. Labels index the owning diagram's semiarcs (`0..semiarc_count`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub under_in: usize,
    pub over_in: usize,
    pub over_out: usize,
    pub under_out: usize,
}

impl Crossing {
    pub fn slots(&self) -> [usize; 4] {
        [self.under_in, self.over_in, self.over_out, self.under_out]
    }
}

/// A validated oriented diagram.
///
/// Semiarc labels are compacted to `0..semiarc_count` in increasing order of the
/// original labels, which are kept for display.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    labels: Vec<u64>,
    free_loops: usize,
}

/// A crossing with its original (uncompacted) labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawCrossing {
    pub sign: Sign,
    pub slots: [u64; 4],
}

impl LinkDiagram {
    /// Validates the twice-used rule (once inbound, once outbound) and compacts labels.
    pub fn new(raw: &[RawCrossing], free_loops: usize) -> Result<Self, DiagramError> {
        let mut uses: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
        for c in raw {
            for (k, &l) in c.slots.iter().enumerate() {
                let e = uses.entry(l).or_insert((0, 0));
                if k < 2 {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        for (&label, &(ins, outs)) in &uses {
            if ins + outs != 2 {
                return Err(DiagramError::DanglingSemiarc { label, count: ins + outs });
            }
            if ins == 2 {
                return Err(DiagramError::OrientationConflict { label, direction: "inbound" });
            }
            if outs == 2 {
                return Err(DiagramError::OrientationConflict { label, direction: "outbound" });
            }
        }
        let labels: Vec<u64> = uses.keys().copied().collect();
        let idx = |l: u64| labels.binary_search(&l).unwrap();
        let crossings = raw
            .iter()
            .map(|c| Crossing {
                sign: c.sign,
                under_in: idx(c.slots[0]),
                over_in: idx(c.slots[1]),
                over_out: idx(c.slots[2]),
                under_out: idx(c.slots[3]),
            })
            .collect();
        Ok(LinkDiagram { crossings, labels, free_loops })
    }

    /// Parses one diagram: whitespace-separated `X+(a,b,c,d)`, `X-(a,b,c,d)` and `U` tokens.
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        parse_tokens(text, 1, 1)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn semiarc_count(&self) -> usize {
        self.labels.len()
    }

    /// Original label of compacted semiarc `i`.
    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.free_loops == 0
    }

    /// `n₊ − n₋`.
    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    /// For each semiarc, the semiarc that follows it along its strand.
    pub fn successors(&self) -> Vec<usize> {
        let mut next = vec![usize::MAX; self.labels.len()];
        for c in &self.crossings {
            next[c.under_in] = c.under_out;
            next[c.over_in] = c.over_out;
        }
        next
    }

    /// Link components, as the semiarc cycles in traversal order.
    pub fn component_cycles(&self) -> Vec<Vec<usize>> {
        let next = self.successors();
        let mut seen = vec![false; next.len()];
        let mut out = Vec::new();
        for start in 0..next.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cyc.push(s);
                s = next[s];
            }
            out.push(cyc);
        }
        out
    }

    /// Number of link components, free loops included.
    pub fn components(&self) -> usize {
        self.component_cycles().len() + self.free_loops
    }

    /// Reflection through the projection plane: every crossing changes sign, slots stay.
    pub fn mirror(&self) -> Self {
        let mut m = self.clone();
        for c in &mut m.crossings {
            c.sign = c.sign.flip();
        }
        m
    }

    /// Renames original labels through `f`, which must be injective.
    pub fn relabel(&self, f: impl Fn(u64) -> u64) -> Result<Self, DiagramError> {
        let raw: Vec<RawCrossing> = self.raw_crossings().into_iter().map(|c| RawCrossing { sign: c.sign, slots: c.slots.map(&f) }).collect();
        LinkDiagram::new(&raw, self.free_loops)
    }

    pub fn raw_crossings(&self) -> Vec<RawCrossing> {
        self.crossings
            .iter()
            .map(|c| RawCrossing { sign: c.sign, slots: c.slots().map(|s| self.labels[s]) })
            .collect()
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in self.raw_crossings() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let s = if c.sign == Sign::Positive { '+' } else { '-' };
            let [a, b, cc, d] = c.slots;
            write!(f, "X{s}({a},{b},{cc},{d})")?;
        }
        for _ in 0..self.free_loops {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str("U")?;
        }
        Ok(())
    }
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Scanner {
    fn err(&self, msg: impl Into<String>) -> DiagramError {
        DiagramError::Parse { line: self.line, column: self.col0 + self.pos, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), DiagramError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{ch}'")))
        }
    }

    fn number(&mut self) -> Result<u64, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a semiarc label"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| DiagramError::Parse { line: self.line, column: self.col0 + start, msg: "label out of range".into() })
    }
}

fn parse_tokens(text: &str, line: usize, col0: usize) -> Result<LinkDiagram, DiagramError> {
    let mut sc = Scanner { chars: text.chars().collect(), pos: 0, line, col0 };
    let mut raw = Vec::new();
    let mut loops = 0;
    loop {
        sc.skip_ws();
        match sc.peek() {
            None => break,
            Some('U') => {
                sc.pos += 1;
                loops += 1;
            }
            Some('X') => {
                sc.pos += 1;
                let sign = match sc.peek() {
                    Some('+') => Sign::Positive,
                    Some('-') => Sign::Negative,
                    _ => return Err(sc.err("expected crossing sign '+' or '-'")),
                };
                sc.pos += 1;
                sc.expect('(')?;
                let mut slots = [0u64; 4];
                for (k, slot) in slots.iter_mut().enumerate() {
                    if k > 0 {
                        sc.expect(',')?;
                    }
                    *slot = sc.number()?;
                }
                sc.expect(')')?;
                raw.push(RawCrossing { sign, slots });
            }
            Some(c) => return Err(sc.err(format!("unexpected character {c:?}"))),
        }
        if sc.peek().is_some_and(|c| !c.is_whitespace()) {
            return Err(sc.err("expected whitespace between tokens"));
        }
    }
    LinkDiagram::new(&raw, loops)
}

/// A diagram with its name from a diagram file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedDiagram {
    pub name: String,
    pub diagram: LinkDiagram,
}

/// Parses `name : tokens` lines; blank lines and `#` comments are skipped.
pub fn parse_diagram_file(text: &str) -> Result<Vec<NamedDiagram>, DiagramError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(DiagramError::Parse { line: i + 1, column: 1, msg: "expected 'name : code'".into() });
        };
        let name = line[..colon].trim();
        if name.is_empty() {
            return Err(DiagramError::Parse { line: i + 1, column: 1, msg: "empty diagram name".into() });
        }
        let col0 = line[..colon + 1].chars().count() + 1;
        let diagram = parse_tokens(&line[colon + 1..], i + 1, col0)?;
        out.push(NamedDiagram { name: name.to_string(), diagram });
    }
    Ok(out)
}
