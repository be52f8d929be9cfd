//! Exact coefficient rings: `Z_n` and integer Laurent polynomials `Z[q, q^-1]`.
//!
//! Elements carry their [`RingSpec`]; binary operations between elements of
//! different rings fail with [`RingError::Mismatch`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(RingSpec, RingSpec),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("invalid ring spec: {0}")]
    BadSpec(String),
    #[error("cannot parse ring element {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Which ring an element lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// `Z_n`, `n >= 2`.
    Modular(u64),
    /// `Z[v, v^-1]` for the named variable `v`.
    Laurent(Arc<str>),
}

impl RingSpec {
    pub fn modular(n: u64) -> Result<Self, RingError> {
        if n < 2 {
            return Err(RingError::BadSpec(format!("modulus {n} < 2")));
        }
        Ok(RingSpec::Modular(n))
    }

    pub fn laurent(var: &str) -> Result<Self, RingError> {
        let mut chars = var.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(RingError::BadSpec(format!("bad variable name {var:?}")));
        }
        Ok(RingSpec::Laurent(Arc::from(var)))
    }

    /// Parses `Zn <n>` or `laurent <var>`.
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        match parts.as_slice() {
            ["Zn", n] => {
                let n = n
                    .parse::<u64>()
                    .map_err(|_| RingError::BadSpec(text.to_string()))?;
                RingSpec::modular(n)
            }
            ["laurent", v] => RingSpec::laurent(v),
            _ => Err(RingError::BadSpec(text.to_string())),
        }
    }

    pub fn zero(&self) -> RingElement {
        let value = match self {
            RingSpec::Modular(_) => Value::Residue(0),
            RingSpec::Laurent(_) => Value::Terms(BTreeMap::new()),
        };
        RingElement { spec: self.clone(), value }
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    /// Image of an integer.
    pub fn int(&self, k: i64) -> RingElement {
        match self {
            RingSpec::Modular(n) => RingElement {
                spec: self.clone(),
                value: Value::Residue(reduce_i128(k as i128, *n)),
            },
            RingSpec::Laurent(_) => self.monomial(k, 0),
        }
    }

    /// `c * v^e`; over `Z_n` the exponent is ignored (there is no variable), so
    /// callers should only use it for Laurent rings.
    pub fn monomial(&self, c: i64, e: i64) -> RingElement {
        match self {
            RingSpec::Modular(_) => self.int(c),
            RingSpec::Laurent(_) => {
                let mut t = BTreeMap::new();
                if c != 0 {
                    t.insert(e, BigInt::from(c));
                }
                RingElement { spec: self.clone(), value: Value::Terms(t) }
            }
        }
    }

    /// Parses a literal in this ring; accepts everything [`RingElement::canonical_key`] emits.
    pub fn parse_element(&self, text: &str) -> Result<RingElement, RingError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: &str| RingError::Parse { text: text.to_string(), reason: reason.to_string() };
        if compact.is_empty() {
            return Err(fail("empty literal"));
        }
        match self {
            RingSpec::Modular(n) => {
                let v: BigInt = compact.parse().map_err(|_| fail("expected an integer"))?;
                let r = v.mod_floor(&BigInt::from(*n));
                Ok(RingElement { spec: self.clone(), value: Value::Residue(r.to_u64().unwrap()) })
            }
            RingSpec::Laurent(var) => {
                let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
                for (sign, body) in split_signed_terms(&compact).map_err(|r| fail(&r))? {
                    let (c, e) = parse_laurent_term(body, var).map_err(|r| fail(&r))?;
                    let c = if sign { -c } else { c };
                    add_term(&mut terms, e, c);
                }
                Ok(RingElement { spec: self.clone(), value: Value::Terms(terms) })
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Modular(n) => write!(f, "Zn {n}"),
            RingSpec::Laurent(v) => write!(f, "laurent {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    /// Always in `[0, n)`.
    Residue(u64),
    /// Exponent to coefficient; never stores a zero coefficient.
    Terms(BTreeMap<i64, BigInt>),
}

/// An exact element of a [`RingSpec`] ring in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    spec: RingSpec,
    value: Value,
}

fn reduce_i128(k: i128, n: u64) -> u64 {
    k.rem_euclid(n as i128) as u64
}

fn add_term(terms: &mut BTreeMap<i64, BigInt>, e: i64, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let slot = terms.entry(e).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&e);
    }
}

/// Splits `a-b+c` into `(negative?, body)` pairs without splitting inside `^{..}` or after `^`.
fn split_signed_terms(s: &str) -> Result<Vec<(bool, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut neg = false;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                neg = !neg;
            }
            i += 1;
        }
        let start = i;
        let mut depth = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'{' => depth += 1,
                b'}' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => break,
                _ => {}
            }
            i += 1;
        }
        if start == i {
            return Err("dangling sign".into());
        }
        out.push((neg, &s[start..i]));
    }
    Ok(out)
}

fn parse_laurent_term(body: &str, var: &str) -> Result<(BigInt, i64), String> {
    let Some(pos) = body.find(var) else {
        let c: BigInt = body.parse().map_err(|_| format!("bad term {body:?}"))?;
        return Ok((c, 0));
    };
    let coeff = body[..pos].trim_end_matches('*');
    let c = if coeff.is_empty() {
        BigInt::one()
    } else {
        coeff.parse::<BigInt>().map_err(|_| format!("bad coefficient {coeff:?}"))?
    };
    let rest = &body[pos + var.len()..];
    let e = if rest.is_empty() {
        1
    } else if let Some(exp) = rest.strip_prefix('^') {
        let exp = exp.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(exp);
        exp.parse::<i64>().map_err(|_| format!("bad exponent {exp:?}"))?
    } else {
        return Err(format!("bad term {body:?}"));
    };
    Ok((c, e))
}

impl RingElement {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.spec != other.spec {
            return Err(RingError::Mismatch(self.spec.clone(), other.spec.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let value = match (&self.value, &other.value, &self.spec) {
            (Value::Residue(a), Value::Residue(b), RingSpec::Modular(n)) => {
                Value::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (Value::Terms(a), Value::Terms(b), _) => {
                let mut t = a.clone();
                for (e, c) in b {
                    add_term(&mut t, *e, c.clone());
                }
                Value::Terms(t)
            }
            _ => unreachable!("value kind follows spec"),
        };
        Ok(RingElement { spec: self.spec.clone(), value })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let value = match (&self.value, &other.value, &self.spec) {
            (Value::Residue(a), Value::Residue(b), RingSpec::Modular(n)) => {
                Value::Residue(((*a as u128 * *b as u128) % *n as u128) as u64)
            }
            (Value::Terms(a), Value::Terms(b), _) => {
                let mut t = BTreeMap::new();
                for (ea, ca) in a {
                    for (eb, cb) in b {
                        add_term(&mut t, ea + eb, ca * cb);
                    }
                }
                Value::Terms(t)
            }
            _ => unreachable!("value kind follows spec"),
        };
        Ok(RingElement { spec: self.spec.clone(), value })
    }

    pub fn neg(&self) -> Self {
        let value = match (&self.value, &self.spec) {
            (Value::Residue(a), RingSpec::Modular(n)) => Value::Residue((n - a) % n),
            (Value::Terms(t), _) => Value::Terms(t.iter().map(|(e, c)| (*e, -c)).collect()),
            _ => unreachable!("value kind follows spec"),
        };
        RingElement { spec: self.spec.clone(), value }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Residue(a) => *a == 0,
            Value::Terms(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec.one()
    }

    /// Units: residues coprime to `n`; Laurent monomials `±v^k`.
    pub fn is_unit(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn inverse(&self) -> Result<Self, RingError> {
        let not_unit = || RingError::NotAUnit(self.canonical_key());
        let value = match (&self.value, &self.spec) {
            (Value::Residue(a), RingSpec::Modular(n)) => {
                let g = (*a as i128).extended_gcd(&(*n as i128));
                if g.gcd != 1 {
                    return Err(not_unit());
                }
                Value::Residue(reduce_i128(g.x, *n))
            }
            (Value::Terms(t), _) => {
                if t.len() != 1 {
                    return Err(not_unit());
                }
                let (e, c) = t.iter().next().unwrap();
                if c.abs() != BigInt::one() {
                    return Err(not_unit());
                }
                let mut inv = BTreeMap::new();
                inv.insert(-e, c.clone());
                Value::Terms(inv)
            }
            _ => unreachable!("value kind follows spec"),
        };
        Ok(RingElement { spec: self.spec.clone(), value })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.spec.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    pub fn pow_signed(&self, e: i64) -> Result<Self, RingError> {
        let mag = u32::try_from(e.unsigned_abs())
            .map_err(|_| RingError::BadSpec(format!("exponent {e} out of range")))?;
        if e >= 0 {
            Ok(self.pow(mag))
        } else {
            Ok(self.inverse()?.pow(mag))
        }
    }

    /// The residue, for `Z_n` elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::Residue(a) => Some(*a),
            Value::Terms(_) => None,
        }
    }

    /// Exponent to coefficient map, for Laurent elements.
    pub fn terms(&self) -> Option<&BTreeMap<i64, BigInt>> {
        match &self.value {
            Value::Terms(t) => Some(t),
            Value::Residue(_) => None,
        }
    }

    /// Replaces `v` by `v^-1`; identity on `Z_n`.
    pub fn bar(&self) -> Self {
        match &self.value {
            Value::Residue(_) => self.clone(),
            Value::Terms(t) => RingElement {
                spec: self.spec.clone(),
                value: Value::Terms(t.iter().map(|(e, c)| (-e, c.clone())).collect()),
            },
        }
    }

    /// Canonical text: decimal residue, or Laurent terms by strictly decreasing
    /// exponent (`-q^8-q^6-q^4+1`); zero is `0`.
    pub fn canonical_key(&self) -> String {
        match (&self.value, &self.spec) {
            (Value::Residue(a), _) => a.to_string(),
            (Value::Terms(t), RingSpec::Laurent(var)) => {
                if t.is_empty() {
                    return "0".into();
                }
                let mut s = String::new();
                for (e, c) in t.iter().rev() {
                    if c.is_negative() {
                        s.push('-');
                    } else if !s.is_empty() {
                        s.push('+');
                    }
                    let mag = c.abs();
                    if *e == 0 {
                        s.push_str(&mag.to_string());
                        continue;
                    }
                    if !mag.is_one() {
                        s.push_str(&mag.to_string());
                    }
                    s.push_str(var);
                    if *e != 1 {
                        s.push('^');
                        s.push_str(&e.to_string());
                    }
                }
                s
            }
            _ => unreachable!("value kind follows spec"),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

/// One component of a [`FormalSum`] key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KeyPart {
    Ring(String),
    Int(i64),
}

impl fmt::Display for KeyPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyPart::Ring(s) => f.write_str(s),
            KeyPart::Int(k) => write!(f, "{k}"),
        }
    }
}

/// How [`FormalSum::parse`] should read the exponent of each variable.
#[derive(Debug, Clone)]
pub enum ExponentKind {
    Ring(RingSpec),
    Int,
}

/// A formal sum `Σ c · x1^{k1} x2^{k2} …` whose exponents are key parts.
/// Coefficients are positive; equal keys merge.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<Vec<KeyPart>, u64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: Vec<KeyPart>, coeff: u64) {
        if coeff == 0 {
            return;
        }
        *self.terms.entry(key).or_insert(0) += coeff;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<KeyPart>, u64)> {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn coefficient(&self, key: &[KeyPart]) -> u64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    /// Drops key position `idx` and merges terms.
    pub fn forget(&self, idx: usize) -> FormalSum {
        let mut out = FormalSum::new();
        for (k, c) in &self.terms {
            let mut k = k.clone();
            k.remove(idx);
            out.insert(k, *c);
        }
        out
    }

    /// Renders `4u^{2}v^{1} + 4u^{1}v^{1}`, terms in decreasing key order.
    pub fn render(&self, vars: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (key, c) in self.terms.iter().rev() {
            let mut s = c.to_string();
            for (v, e) in vars.iter().zip(key) {
                s.push_str(&format!("{v}^{{{e}}}"));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    /// Parses `c x^{e} y^{f} + …`. Exponents may be braced or a bare token;
    /// an absent exponent means 1 and an absent coefficient means 1.
    pub fn parse(text: &str, vars: &[(&str, ExponentKind)]) -> Result<FormalSum, RingError> {
        let fail = |reason: String| RingError::Parse { text: text.to_string(), reason };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = FormalSum::new();
        for term in split_top_level_plus(&compact) {
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let coeff = if digits == 0 { 1 } else { term[..digits].parse::<u64>().map_err(|e| fail(e.to_string()))? };
            let mut rest = &term[digits..];
            let mut key = Vec::with_capacity(vars.len());
            for (name, kind) in vars {
                rest = rest
                    .strip_prefix(name)
                    .ok_or_else(|| fail(format!("expected variable {name} in {term:?}")))?;
                let exp;
                if let Some(r) = rest.strip_prefix("^{") {
                    let close = matching_brace(r).ok_or_else(|| fail("unbalanced brace".into()))?;
                    exp = &r[..close];
                    rest = &r[close + 1..];
                } else if let Some(r) = rest.strip_prefix('^') {
                    let len = bare_exponent_len(r);
                    exp = &r[..len];
                    rest = &r[len..];
                } else {
                    exp = "1";
                }
                key.push(match kind {
                    ExponentKind::Int => KeyPart::Int(exp.parse().map_err(|_| fail(format!("bad exponent {exp:?}")))?),
                    ExponentKind::Ring(spec) => KeyPart::Ring(spec.parse_element(exp)?.canonical_key()),
                });
            }
            if !rest.is_empty() {
                return Err(fail(format!("trailing text {rest:?}")));
            }
            out.insert(key, coeff);
        }
        Ok(out)
    }
}

fn split_top_level_plus(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

fn matching_brace(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, ch) in s.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// A bare exponent is an optional sign followed by digits.
fn bare_exponent_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = usize::from(b.first() == Some(&b'-'));
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    i
}
