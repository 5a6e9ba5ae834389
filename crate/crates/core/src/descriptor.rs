//! Micronuclear gene descriptors.
//!
//! The textual form is whitespace-separated tokens: `Mi` for MDS number
//! `i`, `-Mi` for an inverted MDS, and optionally `I` for an explicit IES.
//! When no `I` token appears, one IES is assumed between every pair of
//! MDS tokens (the alternating micronuclear arrangement). `kappa` is
//! inferred as the largest MDS index and coverage of `1..=kappa` is
//! checked.
//!
//! Compilation to the pointer substrate follows the repeat structure: MDS
//! `i` carries the incoming pointer `i` and the outgoing pointer `i + 1`;
//! the begin marker of MDS 1 and the end marker of MDS `kappa` are not
//! pointers and are dropped. An inverted segment emits its pointers in
//! reversed order with flipped signs.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::rewrite::{LegalString, Pointer};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("empty descriptor")]
    Empty,
    #[error("syntax error at byte {offset}: unrecognized token `{token}`")]
    Syntax { offset: usize, token: String },
    #[error("MDS index 0 at byte {offset}: indices start at 1")]
    ZeroIndex { offset: usize },
    #[error("duplicate MDS index {index}")]
    DuplicateIndex { index: u32 },
    #[error("missing MDS index {index}: indices must cover 1..={kappa}")]
    MissingIndex { index: u32, kappa: u32 },
    #[error("descriptor contains no MDS")]
    NoMds,
    #[error("invalid MDS span {lo}..{hi}")]
    InvalidSpan { lo: u32, hi: u32 },
    #[error("adjacent IES segments must be coalesced")]
    AdjacentIes,
    #[error("kappa must be at least 1")]
    InvalidKappa,
    #[error("inversion probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

/// A macronuclear-destined segment covering the orthodox MDS indices
/// `lo..=hi`. Freshly parsed genes have `lo == hi`; wider spans arise when
/// assembly merges consecutive MDSs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MdsSegment {
    pub lo: u32,
    pub hi: u32,
    pub inverted: bool,
}

impl MdsSegment {
    pub fn single(index: u32, inverted: bool) -> Self {
        MdsSegment { lo: index, hi: index, inverted }
    }

    /// True when the segment covers the whole gene.
    pub fn spans_all(&self, kappa: u32) -> bool {
        self.lo == 1 && self.hi == kappa
    }
}

impl fmt::Display for MdsSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            f.write_str("-")?;
        }
        if self.lo == self.hi {
            write!(f, "M{}", self.lo)
        } else {
            write!(f, "M{}..{}", self.lo, self.hi)
        }
    }
}

/// An internal eliminated segment. Labels are assigned left to right at
/// parse time and survive excision so circular products stay identifiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IesSegment {
    pub label: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Segment {
    Mds(MdsSegment),
    Ies(IesSegment),
}

impl Segment {
    /// Descriptor token, without IES labels (`M3`, `-M2`, `I`).
    pub fn token(&self) -> String {
        match self {
            Segment::Mds(m) => m.to_string(),
            Segment::Ies(_) => "I".to_string(),
        }
    }

    /// Report form with IES labels (`M3`, `-M2..5`, `I4`).
    pub fn labeled(&self) -> String {
        match self {
            Segment::Mds(m) => m.to_string(),
            Segment::Ies(i) => format!("I{}", i.label),
        }
    }
}

/// A validated micronuclear gene: an ordered arrangement of MDS and IES
/// segments whose MDS spans cover `1..=kappa` exactly once each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicronuclearGene {
    segments: Vec<Segment>,
    kappa: u32,
}

impl MicronuclearGene {
    pub fn new(segments: Vec<Segment>) -> Result<Self, DescriptorError> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        let mut prev_was_ies = false;
        for seg in &segments {
            match seg {
                Segment::Mds(m) => {
                    if m.lo == 0 || m.lo > m.hi {
                        return Err(DescriptorError::InvalidSpan { lo: m.lo, hi: m.hi });
                    }
                    for i in m.lo..=m.hi {
                        *counts.entry(i).or_insert(0) += 1;
                    }
                    prev_was_ies = false;
                }
                Segment::Ies(_) => {
                    if prev_was_ies {
                        return Err(DescriptorError::AdjacentIes);
                    }
                    prev_was_ies = true;
                }
            }
        }
        let kappa = match counts.keys().next_back() {
            Some(&max) => max,
            None => return Err(DescriptorError::NoMds),
        };
        for i in 1..=kappa {
            match counts.get(&i) {
                None => return Err(DescriptorError::MissingIndex { index: i, kappa }),
                Some(1) => {}
                Some(_) => return Err(DescriptorError::DuplicateIndex { index: i }),
            }
        }
        Ok(MicronuclearGene { segments, kappa })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn mds_count(&self) -> usize {
        self.segments.iter().filter(|s| matches!(s, Segment::Mds(_))).count()
    }

    pub fn ies_count(&self) -> usize {
        self.segments.iter().filter(|s| matches!(s, Segment::Ies(_))).count()
    }

    /// True when IESs sit exactly between consecutive MDS tokens with none
    /// at the ends, i.e. the layout the implicit grammar produces.
    fn has_default_ies_layout(&self) -> bool {
        let n = self.segments.len();
        self.segments.iter().enumerate().all(|(k, seg)| match seg {
            Segment::Mds(_) => k % 2 == 0,
            Segment::Ies(_) => k % 2 == 1,
        }) && n % 2 == 1
    }
}

enum RawToken {
    Mds { index: u32, inverted: bool },
    Ies,
}

fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_token(offset: usize, token: &str) -> Result<RawToken, DescriptorError> {
    if token == "I" {
        return Ok(RawToken::Ies);
    }
    let (inverted, rest) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let digits = rest.strip_prefix('M').ok_or_else(|| DescriptorError::Syntax {
        offset,
        token: token.to_string(),
    })?;
    let index: u32 = digits.parse().map_err(|_| DescriptorError::Syntax {
        offset,
        token: token.to_string(),
    })?;
    if index == 0 {
        return Err(DescriptorError::ZeroIndex { offset });
    }
    Ok(RawToken::Mds { index, inverted })
}

/// Parses a descriptor string into a validated gene.
pub fn parse_gene(text: &str) -> Result<MicronuclearGene, DescriptorError> {
    let mut raw = Vec::new();
    for (offset, token) in tokenize(text) {
        raw.push(parse_token(offset, token)?);
    }
    if raw.is_empty() {
        return Err(DescriptorError::Empty);
    }
    let explicit_ies = raw.iter().any(|t| matches!(t, RawToken::Ies));
    let mut segments: Vec<Segment> = Vec::new();
    let mut next_label = 0u32;
    for tok in raw {
        match tok {
            RawToken::Mds { index, inverted } => {
                if !explicit_ies && matches!(segments.last(), Some(Segment::Mds(_))) {
                    next_label += 1;
                    segments.push(Segment::Ies(IesSegment { label: next_label }));
                }
                segments.push(Segment::Mds(MdsSegment::single(index, inverted)));
            }
            RawToken::Ies => {
                // adjacent explicit IESs are observationally one
                if matches!(segments.last(), Some(Segment::Ies(_))) {
                    continue;
                }
                next_label += 1;
                segments.push(Segment::Ies(IesSegment { label: next_label }));
            }
        }
    }
    MicronuclearGene::new(segments)
}

/// Prints the canonical descriptor. `parse_gene(format_gene(g))` equals `g`
/// for every parseable gene.
pub fn format_gene(gene: &MicronuclearGene) -> String {
    let tokens: Vec<String> = if gene.has_default_ies_layout() {
        gene.segments
            .iter()
            .filter(|s| matches!(s, Segment::Mds(_)))
            .map(Segment::token)
            .collect()
    } else {
        gene.segments.iter().map(Segment::token).collect()
    };
    tokens.join(" ")
}

/// The signed pointers emitted by a segment arrangement, in molecule order.
pub(crate) fn segment_pointers(segments: &[Segment], kappa: u32) -> Vec<Pointer> {
    let mut out = Vec::new();
    for seg in segments {
        if let Segment::Mds(m) = seg {
            if !m.inverted {
                if m.lo > 1 {
                    out.push(Pointer::direct(m.lo));
                }
                if m.hi < kappa {
                    out.push(Pointer::direct(m.hi + 1));
                }
            } else {
                if m.hi < kappa {
                    out.push(Pointer::inverted(m.hi + 1));
                }
                if m.lo > 1 {
                    out.push(Pointer::inverted(m.lo));
                }
            }
        }
    }
    out
}

/// Compiles a gene to its pointer string. A single-MDS gene compiles to
/// the empty string: no repeats exist to act on.
pub fn to_legal_string(gene: &MicronuclearGene) -> LegalString {
    LegalString::new(segment_pointers(gene.segments(), gene.kappa()))
        .expect("a valid gene projects to a double-occurrence string")
}

/// A uniformly random permutation of `1..=kappa` with independent per-MDS
/// inversion, IESs between consecutive MDSs. Deterministic for a fixed
/// seed.
pub fn random_scrambled_gene(
    kappa: u32,
    inversion_prob: f64,
    seed: u64,
) -> Result<MicronuclearGene, DescriptorError> {
    if kappa < 1 {
        return Err(DescriptorError::InvalidKappa);
    }
    if !(0.0..=1.0).contains(&inversion_prob) || inversion_prob.is_nan() {
        return Err(DescriptorError::InvalidProbability(inversion_prob));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (1..=kappa).collect();
    order.shuffle(&mut rng);
    let mut segments = Vec::with_capacity(2 * kappa as usize - 1);
    for (k, &index) in order.iter().enumerate() {
        if k > 0 {
            segments.push(Segment::Ies(IesSegment { label: k as u32 }));
        }
        let inverted = rng.gen_bool(inversion_prob);
        segments.push(Segment::Mds(MdsSegment::single(index, inverted)));
    }
    MicronuclearGene::new(segments)
}

pub const ACTIN_I_DESCRIPTOR: &str = "M3 M4 M6 M5 M7 M9 -M2 M1 M8";
