//! Signed pointer strings and the three intramolecular operations.
//!
//! A [`LegalString`] is a sequence of signed pointers in which every value
//! present occurs exactly twice. The three operations act on pointer pairs:
//!
//! - loop, direct-repeat excision: an adjacent same-orientation pair is
//!   deleted and the (pointer-free) interior leaves as a circular product;
//! - hairpin, inverted-repeat excision: an opposite-orientation pair is
//!   deleted and everything between is reversed with all signs flipped;
//! - double-loop, alternating direct-repeat excision/reinsertion: two
//!   interleaved same-orientation pairs `p..q..p..q` are deleted and the
//!   pattern `u1 p u2 q u3 p u4 q u5` becomes `u1 u4 u3 u2 u5`.
//!
//! Rules carry their binding positions so traces replay bit-exactly.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("pointer value {0} is below 2")]
    ValueBelowTwo(u32),
    #[error("pointer {value} occurs {count} times, expected exactly 2")]
    OccurrenceCount { value: u32, count: usize },
    #[error("cannot parse `{token}` as a signed pointer")]
    BadPointerToken { token: String },
    #[error("rule {rule:?} is not applicable to `{string}`")]
    NotApplicable { rule: RewriteRule, string: String },
    #[error("interval {start}..{end} out of range for length {len}")]
    IntervalOutOfRange { start: usize, end: usize, len: usize },
}

/// One occurrence of a pointer: its value (>= 2) and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pointer {
    pub value: u32,
    pub inverted: bool,
}

impl Pointer {
    pub fn direct(value: u32) -> Self {
        Pointer { value, inverted: false }
    }

    pub fn inverted(value: u32) -> Self {
        Pointer { value, inverted: true }
    }

    /// The same pointer with the opposite orientation.
    pub fn flipped(self) -> Self {
        Pointer { value: self.value, inverted: !self.inverted }
    }
}

impl fmt::Display for Pointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "-{}", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

impl FromStr for Pointer {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<Self, RewriteError> {
        let (inverted, digits) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let value: u32 = digits.parse().map_err(|_| RewriteError::BadPointerToken {
            token: s.to_string(),
        })?;
        if value < 2 {
            return Err(RewriteError::ValueBelowTwo(value));
        }
        Ok(Pointer { value, inverted })
    }
}

/// A double-occurrence string: every pointer value present occurs exactly
/// twice. The canonical textual form is space-separated signed integers,
/// e.g. `3 4 -2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LegalString(Vec<Pointer>);

impl LegalString {
    pub fn empty() -> Self {
        LegalString(Vec::new())
    }

    pub fn new(pointers: Vec<Pointer>) -> Result<Self, RewriteError> {
        validate(&pointers)?;
        Ok(LegalString(pointers))
    }

    /// Parses the canonical textual form. Whitespace-only input is the
    /// empty string.
    pub fn parse(text: &str) -> Result<Self, RewriteError> {
        let pointers = text
            .split_whitespace()
            .map(Pointer::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pointers)
    }

    /// Internal constructor for strings valid by construction.
    pub(crate) fn from_vec(pointers: Vec<Pointer>) -> Self {
        debug_assert!(validate(&pointers).is_ok());
        LegalString(pointers)
    }

    pub fn pointers(&self) -> &[Pointer] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct pointer values, ascending.
    pub fn values(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.0.iter().map(|p| p.value).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// The two occurrence positions of `value`, in string order.
    pub fn pair_positions(&self, value: u32) -> Option<(usize, usize)> {
        let mut it = self.0.iter().enumerate().filter(|(_, p)| p.value == value);
        let first = it.next()?.0;
        let second = it.next()?.0;
        Some((first, second))
    }
}

impl fmt::Display for LegalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for LegalString {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<Self, RewriteError> {
        Self::parse(s)
    }
}

fn validate(pointers: &[Pointer]) -> Result<(), RewriteError> {
    let mut counts: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for p in pointers {
        if p.value < 2 {
            return Err(RewriteError::ValueBelowTwo(p.value));
        }
        *counts.entry(p.value).or_insert(0) += 1;
    }
    for (value, count) in counts {
        if count != 2 {
            return Err(RewriteError::OccurrenceCount { value, count });
        }
    }
    Ok(())
}

/// A rule instance with its binding positions. The derived ordering is the
/// canonical enumeration order: loop before hairpin before double-loop,
/// then ascending pointer value, then leftmost binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RewriteRule {
    /// Adjacent same-orientation pair at positions `at`, `at + 1`.
    Loop { pointer: u32, at: usize },
    /// Opposite-orientation pair at `first < second`.
    Hairpin { pointer: u32, first: usize, second: usize },
    /// Interleaved same-orientation pairs; `positions` are the four
    /// occurrences in string order: `first`, `second`, `first`, `second`.
    DoubleLoop { first: u32, second: u32, positions: [usize; 4] },
}

impl RewriteRule {
    pub fn name(&self) -> &'static str {
        match self {
            RewriteRule::Loop { .. } => "loop",
            RewriteRule::Hairpin { .. } => "hairpin",
            RewriteRule::DoubleLoop { .. } => "double-loop",
        }
    }

    pub fn pointer_values(&self) -> Vec<u32> {
        match self {
            RewriteRule::Loop { pointer, .. } | RewriteRule::Hairpin { pointer, .. } => {
                vec![*pointer]
            }
            RewriteRule::DoubleLoop { first, second, .. } => vec![*first, *second],
        }
    }

    pub fn positions(&self) -> Vec<usize> {
        match self {
            RewriteRule::Loop { at, .. } => vec![*at, *at + 1],
            RewriteRule::Hairpin { first, second, .. } => vec![*first, *second],
            RewriteRule::DoubleLoop { positions, .. } => positions.to_vec(),
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.pointer_values().iter().map(u32::to_string).collect();
        let positions: Vec<String> = self.positions().iter().map(usize::to_string).collect();
        write!(f, "{}({}) @ [{}]", self.name(), values.join(","), positions.join(","))
    }
}

/// What left the main molecule (or was rearranged in place) when a rule
/// fired. Circular records arise only from loop excision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExcisionKind {
    Circular,
    InvertedInPlace,
    Translocated,
}

impl fmt::Display for ExcisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExcisionKind::Circular => "circular",
            ExcisionKind::InvertedInPlace => "inverted-in-place",
            ExcisionKind::Translocated => "translocated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExcisionRecord {
    pub kind: ExcisionKind,
    pub pointers: Vec<u32>,
}

/// Every rule instance applicable to `s`, in canonical order.
pub fn applicable_rules(s: &LegalString) -> Vec<RewriteRule> {
    let ptrs = s.pointers();
    let mut rules = Vec::new();
    let values = s.values();
    let mut same_orientation_pairs: Vec<(u32, usize, usize)> = Vec::new();
    for &v in &values {
        let (i, j) = s.pair_positions(v).expect("value present");
        if ptrs[i].inverted != ptrs[j].inverted {
            rules.push(RewriteRule::Hairpin { pointer: v, first: i, second: j });
        } else {
            if j == i + 1 {
                rules.push(RewriteRule::Loop { pointer: v, at: i });
            }
            same_orientation_pairs.push((v, i, j));
        }
    }
    for (a, &(v, vi, vj)) in same_orientation_pairs.iter().enumerate() {
        for &(w, wi, wj) in &same_orientation_pairs[a + 1..] {
            if vi < wi && wi < vj && vj < wj {
                rules.push(RewriteRule::DoubleLoop {
                    first: v,
                    second: w,
                    positions: [vi, wi, vj, wj],
                });
            } else if wi < vi && vi < wj && wj < vj {
                rules.push(RewriteRule::DoubleLoop {
                    first: w,
                    second: v,
                    positions: [wi, vi, wj, vj],
                });
            }
        }
    }
    rules.sort_unstable();
    rules
}

fn check_applicable(s: &LegalString, rule: &RewriteRule) -> Result<(), RewriteError> {
    let ptrs = s.pointers();
    let reject = || RewriteError::NotApplicable { rule: *rule, string: s.to_string() };
    match *rule {
        RewriteRule::Loop { pointer, at } => {
            if at + 1 >= ptrs.len()
                || ptrs[at].value != pointer
                || ptrs[at + 1].value != pointer
                || ptrs[at].inverted != ptrs[at + 1].inverted
            {
                return Err(reject());
            }
        }
        RewriteRule::Hairpin { pointer, first, second } => {
            if first >= second
                || second >= ptrs.len()
                || ptrs[first].value != pointer
                || ptrs[second].value != pointer
                || ptrs[first].inverted == ptrs[second].inverted
            {
                return Err(reject());
            }
        }
        RewriteRule::DoubleLoop { first, second, positions: [a, b, c, d] } => {
            if !(a < b && b < c && c < d)
                || d >= ptrs.len()
                || ptrs[a].value != first
                || ptrs[c].value != first
                || ptrs[b].value != second
                || ptrs[d].value != second
                || ptrs[a].inverted != ptrs[c].inverted
                || ptrs[b].inverted != ptrs[d].inverted
            {
                return Err(reject());
            }
        }
    }
    Ok(())
}

/// Applies `rule` to `s`, returning the shortened string and the record of
/// what the operation did molecularly. Errors if the binding is stale.
pub fn apply_rule(
    s: &LegalString,
    rule: &RewriteRule,
) -> Result<(LegalString, ExcisionRecord), RewriteError> {
    check_applicable(s, rule)?;
    let ptrs = s.pointers();
    let (result, kind) = match *rule {
        RewriteRule::Loop { at, .. } => {
            let mut v = ptrs.to_vec();
            v.drain(at..at + 2);
            (v, ExcisionKind::Circular)
        }
        RewriteRule::Hairpin { first, second, .. } => {
            let mut v = Vec::with_capacity(ptrs.len() - 2);
            v.extend_from_slice(&ptrs[..first]);
            v.extend(ptrs[first + 1..second].iter().rev().map(|p| p.flipped()));
            v.extend_from_slice(&ptrs[second + 1..]);
            (v, ExcisionKind::InvertedInPlace)
        }
        RewriteRule::DoubleLoop { positions: [a, b, c, d], .. } => {
            let mut v = Vec::with_capacity(ptrs.len() - 4);
            v.extend_from_slice(&ptrs[..a]);
            v.extend_from_slice(&ptrs[c + 1..d]);
            v.extend_from_slice(&ptrs[b + 1..c]);
            v.extend_from_slice(&ptrs[a + 1..b]);
            v.extend_from_slice(&ptrs[d + 1..]);
            (v, ExcisionKind::Translocated)
        }
    };
    let record = ExcisionRecord { kind, pointers: rule.pointer_values() };
    Ok((LegalString::from_vec(result), record))
}

/// Reverses the half-open interval `start..end` and flips every
/// orientation inside it. Applying twice is the identity.
pub fn invert_interval(
    s: &LegalString,
    start: usize,
    end: usize,
) -> Result<LegalString, RewriteError> {
    if start > end || end > s.len() {
        return Err(RewriteError::IntervalOutOfRange { start, end, len: s.len() });
    }
    let ptrs = s.pointers();
    let mut v = ptrs[..start].to_vec();
    v.extend(ptrs[start..end].iter().rev().map(|p| p.flipped()));
    v.extend_from_slice(&ptrs[end..]);
    Ok(LegalString::from_vec(v))
}
