//! Molecular-level simulation layered over string reduction.
//!
//! The main molecule is a segment arrangement; applying a rule merges the
//! MDSs flanking the rule's pointer(s) into a composite span, and a loop
//! excision ships the interior IES run to a circular product. The pointer
//! projection of the molecule commutes with string-level rule application,
//! which is the correctness law the tests lean on.
//!
//! Each pointer occurrence in the projection is emitted by a specific end
//! of a specific MDS segment, so rule application becomes cut-and-rejoin
//! surgery: cut the segment list at the bound occurrences, rearrange the
//! chunks exactly as the string rule rearranges its blocks, then fuse the
//! MDS pair sharing each eliminated pointer.

use std::fmt;

use crate::descriptor::{segment_pointers, MdsSegment, MicronuclearGene, Segment};
use crate::rewrite::{apply_rule, LegalString, Pointer, RewriteError, RewriteRule};
use crate::strategy::{search, ReductionTrace, SearchError, SearchPolicy, TraceStep};

/// The main linear molecule, the excised circular products, and the trace
/// of operations applied so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyState {
    linear: Vec<Segment>,
    circles: Vec<Vec<Segment>>,
    trace: ReductionTrace,
    kappa: u32,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Left,
    Right,
}

struct Emission {
    segment: usize,
    end: End,
}

/// Which segment end emits each pointer of the projection, in order.
fn emissions(linear: &[Segment], kappa: u32) -> Vec<Emission> {
    let mut out = Vec::new();
    for (k, seg) in linear.iter().enumerate() {
        if let Segment::Mds(m) = seg {
            if !m.inverted {
                if m.lo > 1 {
                    out.push(Emission { segment: k, end: End::Left });
                }
                if m.hi < kappa {
                    out.push(Emission { segment: k, end: End::Right });
                }
            } else {
                if m.hi < kappa {
                    out.push(Emission { segment: k, end: End::Left });
                }
                if m.lo > 1 {
                    out.push(Emission { segment: k, end: End::Right });
                }
            }
        }
    }
    out
}

fn flip_segment(seg: &Segment) -> Segment {
    match seg {
        Segment::Mds(m) => Segment::Mds(MdsSegment { inverted: !m.inverted, ..*m }),
        // inverting noncoding material is unobservable; keep the label
        Segment::Ies(i) => Segment::Ies(*i),
    }
}

/// Merges the two MDS segments now adjacent at eliminated pointer `p`.
fn fuse_at(linear: &mut Vec<Segment>, p: u32) {
    let at = linear
        .windows(2)
        .position(|w| match (&w[0], &w[1]) {
            (Segment::Mds(a), Segment::Mds(b)) if a.inverted == b.inverted => {
                if a.inverted {
                    a.lo == p && b.hi + 1 == p
                } else {
                    a.hi + 1 == p && b.lo == p
                }
            }
            _ => false,
        })
        .expect("eliminated pointer leaves a fusable MDS junction");
    let (a, b) = match (&linear[at], &linear[at + 1]) {
        (Segment::Mds(a), Segment::Mds(b)) => (*a, *b),
        _ => unreachable!(),
    };
    let merged = MdsSegment { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi), inverted: a.inverted };
    linear.splice(at..at + 2, [Segment::Mds(merged)]);
}

/// Circular molecules have no distinguished origin; store the
/// lexicographically least rotation.
fn canonical_rotation(circle: Vec<Segment>) -> Vec<Segment> {
    if circle.len() < 2 {
        return circle;
    }
    (0..circle.len())
        .map(|k| {
            let mut rot = circle[k..].to_vec();
            rot.extend_from_slice(&circle[..k]);
            rot
        })
        .min()
        .unwrap()
}

impl AssemblyState {
    /// The starting state: the gene's own arrangement, no circles, empty
    /// trace.
    pub fn init_state(gene: &MicronuclearGene) -> Self {
        let linear = gene.segments().to_vec();
        let kappa = gene.kappa();
        let initial = LegalString::new(segment_pointers(&linear, kappa))
            .expect("a valid gene projects to a double-occurrence string");
        AssemblyState {
            linear,
            circles: Vec::new(),
            trace: ReductionTrace::empty(initial),
            kappa,
        }
    }

    pub fn linear(&self) -> &[Segment] {
        &self.linear
    }

    pub fn circles(&self) -> &[Vec<Segment>] {
        &self.circles
    }

    pub fn trace(&self) -> &ReductionTrace {
        &self.trace
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// The pointer-string projection of the linear molecule.
    pub fn project(&self) -> LegalString {
        LegalString::new(segment_pointers(&self.linear, self.kappa))
            .expect("reachable states project to double-occurrence strings")
    }

    /// True when a single composite MDS spans the whole gene (in either
    /// orientation) with only IES material around it.
    pub fn is_assembled(&self) -> bool {
        let mut mds = self.linear.iter().filter_map(|s| match s {
            Segment::Mds(m) => Some(m),
            Segment::Ies(_) => None,
        });
        match (mds.next(), mds.next()) {
            (Some(m), None) => m.spans_all(self.kappa),
            _ => false,
        }
    }

    /// Applies `rule` at the molecular level. The projection of the result
    /// equals string-level application on the projection.
    pub fn apply_molecular(&self, rule: &RewriteRule) -> Result<AssemblyState, RewriteError> {
        let projection = self.project();
        let (expected, excision) = apply_rule(&projection, rule)?;
        let ems = emissions(&self.linear, self.kappa);
        let cut = |pos: usize| match ems[pos].end {
            End::Left => ems[pos].segment,
            End::Right => ems[pos].segment + 1,
        };
        let mut circles = self.circles.clone();
        let mut linear: Vec<Segment>;
        match *rule {
            RewriteRule::Loop { at, .. } => {
                // adjacency means no pointers between the occurrences, so
                // only IES material separates the two flanking MDSs; it
                // leaves as the circular product and the MDSs merge. The
                // occurrences may face inward (right end of the first
                // segment, left end of the second) or outward when the
                // begin/end markers are dropped; either way the junction
                // is the same pointer, so the merge is segment-based.
                let (sa, sb) = (ems[at].segment, ems[at + 1].segment);
                debug_assert!(sa < sb);
                let interior = self.linear[sa + 1..sb].to_vec();
                debug_assert!(interior.iter().all(|s| matches!(s, Segment::Ies(_))));
                let merged = match (&self.linear[sa], &self.linear[sb]) {
                    (Segment::Mds(a), Segment::Mds(b)) => {
                        debug_assert_eq!(a.inverted, b.inverted);
                        debug_assert!(a.hi + 1 == b.lo || b.hi + 1 == a.lo);
                        MdsSegment {
                            lo: a.lo.min(b.lo),
                            hi: a.hi.max(b.hi),
                            inverted: a.inverted,
                        }
                    }
                    _ => unreachable!("pointer occurrences are emitted by MDS segments"),
                };
                linear = self.linear[..sa].to_vec();
                linear.push(Segment::Mds(merged));
                linear.extend_from_slice(&self.linear[sb + 1..]);
                if !interior.is_empty() {
                    circles.push(canonical_rotation(interior));
                }
            }
            RewriteRule::Hairpin { pointer, first, second } => {
                let (c1, c2) = (cut(first), cut(second));
                debug_assert!(c1 <= c2);
                linear = self.linear[..c1].to_vec();
                linear.extend(self.linear[c1..c2].iter().rev().map(flip_segment));
                linear.extend_from_slice(&self.linear[c2..]);
                fuse_at(&mut linear, pointer);
            }
            RewriteRule::DoubleLoop { first, second, positions } => {
                let cuts = positions.map(cut);
                debug_assert!(cuts.windows(2).all(|w| w[0] <= w[1]));
                linear = self.linear[..cuts[0]].to_vec();
                linear.extend_from_slice(&self.linear[cuts[2]..cuts[3]]);
                linear.extend_from_slice(&self.linear[cuts[1]..cuts[2]]);
                linear.extend_from_slice(&self.linear[cuts[0]..cuts[1]]);
                linear.extend_from_slice(&self.linear[cuts[3]..]);
                fuse_at(&mut linear, first);
                fuse_at(&mut linear, second);
            }
        }
        let actual: Vec<Pointer> = segment_pointers(&linear, self.kappa);
        debug_assert_eq!(actual, expected.pointers(), "projection commutation violated");
        let mut trace = self.trace.clone();
        trace.steps.push(TraceStep { rule: *rule, result: expected, excision });
        Ok(AssemblyState { linear, circles, trace, kappa: self.kappa })
    }
}

/// The final macronuclear arrangement: success iff one composite MDS spans
/// the whole gene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyResult {
    pub success: bool,
    pub macronuclear: Vec<Segment>,
    pub circles: Vec<Vec<Segment>>,
    pub trace: ReductionTrace,
}

impl fmt::Display for AssemblyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "success: {}", self.success)?;
        let tokens: Vec<String> = self.macronuclear.iter().map(Segment::labeled).collect();
        writeln!(f, "linear: {}", tokens.join(" "))?;
        writeln!(f, "circles: {}", format_circles(&self.circles))?;
        write!(f, "steps: {}", self.trace.steps.len())
    }
}

pub(crate) fn format_circles(circles: &[Vec<Segment>]) -> String {
    if circles.is_empty() {
        return "none".to_string();
    }
    let parts: Vec<String> = circles
        .iter()
        .map(|c| {
            let tokens: Vec<String> = c.iter().map(Segment::labeled).collect();
            format!("({})", tokens.join(" "))
        })
        .collect();
    parts.join(" ")
}

/// Searches for a strategy and replays it molecularly. On failure the
/// longest partial trace found is replayed instead.
pub fn assemble(
    gene: &MicronuclearGene,
    policy: &SearchPolicy,
) -> Result<AssemblyResult, SearchError> {
    let initial = AssemblyState::init_state(gene);
    let outcome = search(&initial.project(), policy)?;
    let steps = match &outcome.trace {
        Some(trace) => &trace.steps,
        None => &outcome.deepest.steps,
    };
    let mut state = initial;
    for step in steps {
        state = state.apply_molecular(&step.rule)?;
    }
    Ok(AssemblyResult {
        success: outcome.trace.is_some() && state.is_assembled(),
        macronuclear: state.linear,
        circles: state.circles,
        trace: state.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{parse_gene, ACTIN_I_DESCRIPTOR};

    fn mds(lo: u32, hi: u32, inverted: bool) -> Segment {
        Segment::Mds(MdsSegment { lo, hi, inverted })
    }

    #[test]
    fn init_state_of_actin() {
        let gene = parse_gene(ACTIN_I_DESCRIPTOR).unwrap();
        let state = AssemblyState::init_state(&gene);
        assert_eq!(state.linear().len(), 17);
        assert!(state.circles().is_empty());
        assert_eq!(state.project().to_string(), "3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9");
        assert!(!state.is_assembled());
    }

    #[test]
    fn single_mds_gene_is_already_assembled() {
        let state = AssemblyState::init_state(&parse_gene("M1").unwrap());
        assert!(state.is_assembled());
        assert!(state.project().is_empty());
    }

    #[test]
    fn loop_merges_and_circularizes_the_ies() {
        let gene = parse_gene("M1 M2").unwrap();
        let state = AssemblyState::init_state(&gene);
        let next = state.apply_molecular(&RewriteRule::Loop { pointer: 2, at: 0 }).unwrap();
        assert_eq!(next.linear(), &[mds(1, 2, false)]);
        assert_eq!(next.circles().len(), 1);
        assert!(matches!(next.circles()[0][..], [Segment::Ies(_)]));
        assert!(next.is_assembled());
    }

    #[test]
    fn hairpin_merges_after_interior_inversion() {
        // projection "2 -2": hairpin on 2 reinserts the inverted MDS
        let gene = parse_gene("M1 -M2").unwrap();
        let state = AssemblyState::init_state(&gene);
        let next =
            state.apply_molecular(&RewriteRule::Hairpin { pointer: 2, first: 0, second: 1 }).unwrap();
        assert!(next.is_assembled());
        // the IES ends up linear, not circular: hairpin excises nothing
        assert!(next.circles().is_empty());
        assert_eq!(next.linear().len(), 2);
        assert_eq!(next.linear()[0], mds(1, 2, false));
    }

    #[test]
    fn inverted_composite_counts_as_assembled() {
        let gene = parse_gene("-M2 -M1").unwrap();
        let state = AssemblyState::init_state(&gene);
        // projection "-2 -2" is a direct repeat of two flipped occurrences
        let next = state.apply_molecular(&RewriteRule::Loop { pointer: 2, at: 0 }).unwrap();
        assert_eq!(next.linear()[0], mds(1, 2, true));
        assert!(next.is_assembled());
    }

    #[test]
    fn stale_rule_is_rejected() {
        let state = AssemblyState::init_state(&parse_gene("M1 M2").unwrap());
        assert!(state.apply_molecular(&RewriteRule::Loop { pointer: 3, at: 0 }).is_err());
    }

    #[test]
    fn assemble_two_mds_gene() {
        let result = assemble(&parse_gene("M1 M2").unwrap(), &SearchPolicy::default()).unwrap();
        assert!(result.success);
        assert_eq!(result.trace.steps.len(), 1);
        assert_eq!(result.macronuclear, vec![mds(1, 2, false)]);
        assert_eq!(result.circles.len(), 1);
    }

    #[test]
    fn assemble_single_mds_gene() {
        let result = assemble(&parse_gene("M1").unwrap(), &SearchPolicy::default()).unwrap();
        assert!(result.success);
        assert!(result.trace.steps.is_empty());
    }

    #[test]
    fn assemble_actin_gene() {
        let gene = parse_gene(ACTIN_I_DESCRIPTOR).unwrap();
        let result = assemble(&gene, &SearchPolicy::default()).unwrap();
        assert!(result.success);
        assert!(result.trace.steps.len() <= 8);
        let spans: Vec<&MdsSegment> = result
            .macronuclear
            .iter()
            .filter_map(|s| match s {
                Segment::Mds(m) => Some(m),
                Segment::Ies(_) => None,
            })
            .collect();
        assert_eq!(spans.len(), 1);
        assert!(spans[0].spans_all(9));
    }

    #[test]
    fn conservation_holds_along_the_actin_replay() {
        let gene = parse_gene(ACTIN_I_DESCRIPTOR).unwrap();
        let mut state = AssemblyState::init_state(&gene);
        let trace = search(&state.project(), &SearchPolicy::default())
            .unwrap()
            .trace
            .unwrap();
        for step in &trace.steps {
            state = state.apply_molecular(&step.rule).unwrap();
            let mut covered: Vec<u32> = state
                .linear()
                .iter()
                .filter_map(|s| match s {
                    Segment::Mds(m) => Some(m.lo..=m.hi),
                    Segment::Ies(_) => None,
                })
                .flatten()
                .collect();
            covered.sort_unstable();
            assert_eq!(covered, (1..=9).collect::<Vec<u32>>());
            for circle in state.circles() {
                assert!(circle.iter().all(|s| matches!(s, Segment::Ies(_))));
            }
        }
        assert!(state.is_assembled());
    }

    #[test]
    fn projection_commutes_on_every_actin_step() {
        let gene = parse_gene(ACTIN_I_DESCRIPTOR).unwrap();
        let mut state = AssemblyState::init_state(&gene);
        while !state.project().is_empty() {
            let rules = crate::rewrite::applicable_rules(&state.project());
            for rule in &rules {
                let molecular = state.apply_molecular(rule).unwrap();
                let (string_level, _) = apply_rule(&state.project(), rule).unwrap();
                assert_eq!(molecular.project(), string_level);
            }
            state = state.apply_molecular(&rules[0]).unwrap();
        }
    }
}
