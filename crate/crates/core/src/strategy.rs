//! Reduction-graph search over legal strings.
//!
//! A strategy is an ordered sequence of rule applications taking a string
//! to the empty string. Search is depth-first in the canonical rule order,
//! with reducibility memoized per state, so first-success mode returns the
//! lexicographically least strategy and results are stable across runs.
//!
//! [`oracle_reduce`] is the independent verification path: a plain
//! recursive enumeration with its own rule scan, no memoization, and no
//! pruning. It is deliberately not built on [`applicable_rules`] or
//! [`apply_rule`] so the two routes can be compared against each other.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::rewrite::{
    applicable_rules, apply_rule, ExcisionRecord, LegalString, Pointer, RewriteError, RewriteRule,
};

/// Longest string the brute-force oracle accepts, in symbols.
pub const ORACLE_CUTOFF: usize = 12;

/// Largest pointer-alphabet size for exhaustive universe enumeration.
pub const MAX_UNIVERSE_POINTERS: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("state limit {limit} exceeded")]
    StateLimitExceeded { limit: usize },
    #[error("oracle cutoff exceeded: {len} symbols, cutoff {cutoff}")]
    OracleCutoff { len: usize, cutoff: usize },
    #[error("strategy enumeration requires an exhaustive policy")]
    NotExhaustive,
    #[error("universe enumeration is limited to {max} pointers, got {got}")]
    UniverseTooLarge { got: u32, max: u32 },
    #[error("policy limits must be positive")]
    InvalidLimits,
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    FirstSuccess,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchPolicy {
    pub mode: SearchMode,
    /// Distinct states the search may expand.
    pub max_states: usize,
    /// Successful traces enumeration may report.
    pub max_traces: usize,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy { mode: SearchMode::FirstSuccess, max_states: 1_000_000, max_traces: 10_000 }
    }
}

impl SearchPolicy {
    pub fn exhaustive() -> Self {
        SearchPolicy { mode: SearchMode::Exhaustive, ..Default::default() }
    }

    fn check(&self) -> Result<(), SearchError> {
        if self.max_states == 0 || self.max_traces == 0 {
            return Err(SearchError::InvalidLimits);
        }
        Ok(())
    }
}

/// One applied rule together with the state it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RewriteRule,
    pub result: LegalString,
    pub excision: ExcisionRecord,
}

/// An assembly strategy (or a partial one): the initial string and every
/// applied rule with its intermediate state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: LegalString,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn empty(initial: LegalString) -> Self {
        ReductionTrace { initial, steps: Vec::new() }
    }

    pub fn final_string(&self) -> &LegalString {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.initial)
    }

    /// A successful trace ends in the empty string.
    pub fn is_successful(&self) -> bool {
        self.final_string().is_empty()
    }

    /// Re-applies every rule from the initial string and checks each
    /// recorded intermediate.
    pub fn replay_check(&self) -> Result<(), RewriteError> {
        let mut current = self.initial.clone();
        for step in &self.steps {
            let (next, excision) = apply_rule(&current, &step.rule)?;
            if next != step.result || excision != step.excision {
                return Err(RewriteError::NotApplicable {
                    rule: step.rule,
                    string: current.to_string(),
                });
            }
            current = next;
        }
        Ok(())
    }
}

impl fmt::Display for ReductionTrace {
    /// One step per line: step index, rule name, pointer(s), binding
    /// positions, and the resulting canonical string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "initial {}", quoted(&self.initial))?;
        for (k, step) in self.steps.iter().enumerate() {
            let values: Vec<String> =
                step.rule.pointer_values().iter().map(u32::to_string).collect();
            let positions: Vec<String> =
                step.rule.positions().iter().map(usize::to_string).collect();
            writeln!(
                f,
                "{} {} pointers={} positions={} result={}",
                k + 1,
                step.rule.name(),
                values.join(","),
                positions.join(","),
                quoted(&step.result),
            )?;
        }
        Ok(())
    }
}

fn quoted(s: &LegalString) -> String {
    format!("\"{s}\"")
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// A successful trace, when one exists within limits.
    pub trace: Option<ReductionTrace>,
    /// The longest reduction path seen (equals `trace` on success).
    pub deepest: ReductionTrace,
    pub states_explored: usize,
}

#[derive(Debug, Clone)]
pub struct StrategyEnumeration {
    pub traces: Vec<ReductionTrace>,
    /// True when `max_traces` stopped the enumeration early.
    pub truncated: bool,
    pub states_explored: usize,
}

struct Memo {
    reducible: HashSet<LegalString>,
    irreducible: HashSet<LegalString>,
    explored: usize,
    max_states: usize,
}

impl Memo {
    fn new(max_states: usize) -> Self {
        Memo {
            reducible: HashSet::new(),
            irreducible: HashSet::new(),
            explored: 0,
            max_states,
        }
    }

    fn is_reducible(&mut self, s: &LegalString) -> Result<bool, SearchError> {
        if s.is_empty() {
            return Ok(true);
        }
        if self.reducible.contains(s) {
            return Ok(true);
        }
        if self.irreducible.contains(s) {
            return Ok(false);
        }
        self.explored += 1;
        if self.explored > self.max_states {
            return Err(SearchError::StateLimitExceeded { limit: self.max_states });
        }
        let mut found = false;
        for rule in applicable_rules(s) {
            let (next, _) = apply_rule(s, &rule).expect("enumerated rule applies");
            if self.is_reducible(&next)? {
                found = true;
                break;
            }
        }
        if found {
            self.reducible.insert(s.clone());
        } else {
            self.irreducible.insert(s.clone());
        }
        Ok(found)
    }
}

/// Whether some rule sequence reduces `s` to the empty string.
pub fn is_reducible(s: &LegalString, policy: &SearchPolicy) -> Result<bool, SearchError> {
    policy.check()?;
    Memo::new(policy.max_states).is_reducible(s)
}

/// Depth-first search in canonical order; returns the successful trace and
/// the deepest partial path seen.
pub fn search(s: &LegalString, policy: &SearchPolicy) -> Result<SearchOutcome, SearchError> {
    policy.check()?;
    let mut memo = Memo::new(policy.max_states);
    if memo.is_reducible(s)? {
        // walk the memoized graph along the first-success branch
        let mut steps = Vec::new();
        let mut current = s.clone();
        while !current.is_empty() {
            let mut advanced = false;
            for rule in applicable_rules(&current) {
                let (next, excision) = apply_rule(&current, &rule).expect("enumerated rule applies");
                if memo.is_reducible(&next)? {
                    steps.push(TraceStep { rule, result: next.clone(), excision });
                    current = next;
                    advanced = true;
                    break;
                }
            }
            assert!(advanced, "reducible state must have a reducible successor");
        }
        let trace = ReductionTrace { initial: s.clone(), steps };
        Ok(SearchOutcome {
            deepest: trace.clone(),
            trace: Some(trace),
            states_explored: memo.explored,
        })
    } else {
        let mut path = Vec::new();
        let mut deepest = Vec::new();
        deepest_path(s, &mut path, &mut deepest);
        Ok(SearchOutcome {
            trace: None,
            deepest: ReductionTrace { initial: s.clone(), steps: deepest },
            states_explored: memo.explored,
        })
    }
}

fn deepest_path(current: &LegalString, path: &mut Vec<TraceStep>, deepest: &mut Vec<TraceStep>) {
    if path.len() > deepest.len() {
        *deepest = path.clone();
    }
    for rule in applicable_rules(current) {
        let (next, excision) = apply_rule(current, &rule).expect("enumerated rule applies");
        path.push(TraceStep { rule, result: next.clone(), excision });
        deepest_path(&next, path, deepest);
        path.pop();
    }
}

/// The canonically first successful trace, if any exists within limits.
pub fn find_strategy(
    s: &LegalString,
    policy: &SearchPolicy,
) -> Result<Option<ReductionTrace>, SearchError> {
    Ok(search(s, policy)?.trace)
}

/// All distinct successful traces in canonical order, up to
/// `policy.max_traces`. Distinctness is by the sequence of bound rules;
/// branches through states known irreducible are pruned, so the count is
/// exact whenever `truncated` is false.
pub fn enumerate_strategies(
    s: &LegalString,
    policy: &SearchPolicy,
) -> Result<StrategyEnumeration, SearchError> {
    policy.check()?;
    if policy.mode != SearchMode::Exhaustive {
        return Err(SearchError::NotExhaustive);
    }
    let mut memo = Memo::new(policy.max_states);
    let mut out = StrategyEnumeration { traces: Vec::new(), truncated: false, states_explored: 0 };
    let mut path = Vec::new();
    enumerate_rec(s, s, &mut path, &mut memo, policy.max_traces, &mut out)?;
    out.states_explored = memo.explored;
    Ok(out)
}

fn enumerate_rec(
    initial: &LegalString,
    current: &LegalString,
    path: &mut Vec<TraceStep>,
    memo: &mut Memo,
    max_traces: usize,
    out: &mut StrategyEnumeration,
) -> Result<(), SearchError> {
    if out.truncated {
        return Ok(());
    }
    if current.is_empty() {
        if out.traces.len() == max_traces {
            out.truncated = true;
        } else {
            out.traces.push(ReductionTrace { initial: initial.clone(), steps: path.clone() });
        }
        return Ok(());
    }
    for rule in applicable_rules(current) {
        let (next, excision) = apply_rule(current, &rule).expect("enumerated rule applies");
        if !memo.is_reducible(&next)? {
            continue;
        }
        path.push(TraceStep { rule, result: next.clone(), excision });
        enumerate_rec(initial, &next, path, memo, max_traces, out)?;
        path.pop();
        if out.truncated {
            return Ok(());
        }
    }
    Ok(())
}

/// Plain recursive enumeration with no memoization and no pruning: returns
/// whether `s` is reducible and the exact count of successful strategies.
pub fn oracle_reduce(s: &LegalString) -> Result<(bool, u64), SearchError> {
    if s.len() > ORACLE_CUTOFF {
        return Err(SearchError::OracleCutoff { len: s.len(), cutoff: ORACLE_CUTOFF });
    }
    let count = oracle_count(s.pointers());
    Ok((count > 0, count))
}

fn oracle_count(p: &[Pointer]) -> u64 {
    if p.is_empty() {
        return 1;
    }
    let n = p.len();
    let mut total = 0u64;
    // loop: adjacent same-orientation pair
    for i in 0..n - 1 {
        if p[i].value == p[i + 1].value && p[i].inverted == p[i + 1].inverted {
            let next = [&p[..i], &p[i + 2..]].concat();
            total += oracle_count(&next);
        }
    }
    // hairpin: opposite-orientation pair, interior reversed and flipped
    for i in 0..n {
        for j in i + 1..n {
            if p[i].value == p[j].value && p[i].inverted != p[j].inverted {
                let mut next = p[..i].to_vec();
                next.extend(p[i + 1..j].iter().rev().map(|q| q.flipped()));
                next.extend_from_slice(&p[j + 1..]);
                total += oracle_count(&next);
            }
        }
    }
    // double-loop: interleaved same-orientation pairs, block reorder
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if p[a].value == p[c].value
                        && p[b].value == p[d].value
                        && p[a].inverted == p[c].inverted
                        && p[b].inverted == p[d].inverted
                    {
                        let next =
                            [&p[..a], &p[c + 1..d], &p[b + 1..c], &p[a + 1..b], &p[d + 1..]]
                                .concat();
                        total += oracle_count(&next);
                    }
                }
            }
        }
    }
    total
}

/// Every double-occurrence string over pointer values
/// `2..=max_pointers + 1` with every sign pattern, each exactly once, in
/// canonical order (arrangements lexicographic, then sign patterns with
/// the leftmost position most significant and direct before inverted).
pub fn enumerate_legal_strings(
    max_pointers: u32,
) -> Result<impl Iterator<Item = LegalString>, SearchError> {
    if max_pointers > MAX_UNIVERSE_POINTERS {
        return Err(SearchError::UniverseTooLarge { got: max_pointers, max: MAX_UNIVERSE_POINTERS });
    }
    let values: Vec<u32> = (2..=max_pointers + 1).collect();
    let mut arrangements = Vec::new();
    let mut remaining: Vec<(u32, u8)> = values.iter().map(|&v| (v, 2u8)).collect();
    let mut prefix = Vec::new();
    collect_arrangements(&mut remaining, &mut prefix, &mut arrangements);
    let len = 2 * max_pointers as usize;
    Ok(arrangements.into_iter().flat_map(move |arr: Vec<u32>| {
        (0u32..(1u32 << len)).map(move |mask| {
            let pointers = arr
                .iter()
                .enumerate()
                .map(|(k, &v)| Pointer { value: v, inverted: mask >> (len - 1 - k) & 1 == 1 })
                .collect();
            LegalString::from_vec(pointers)
        })
    }))
}

fn collect_arrangements(
    remaining: &mut Vec<(u32, u8)>,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if remaining.iter().all(|&(_, c)| c == 0) {
        out.push(prefix.clone());
        return;
    }
    for k in 0..remaining.len() {
        if remaining[k].1 == 0 {
            continue;
        }
        remaining[k].1 -= 1;
        prefix.push(remaining[k].0);
        collect_arrangements(remaining, prefix, out);
        prefix.pop();
        remaining[k].1 += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(text: &str) -> LegalString {
        LegalString::parse(text).unwrap()
    }

    fn policy() -> SearchPolicy {
        SearchPolicy::default()
    }

    #[test]
    fn empty_string_is_reducible() {
        assert_eq!(is_reducible(&LegalString::empty(), &policy()), Ok(true));
    }

    #[test]
    fn single_pair_is_reducible() {
        assert_eq!(is_reducible(&ls("2 2"), &policy()), Ok(true));
    }

    #[test]
    fn actin_string_is_reducible() {
        let actin = ls("3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9");
        assert_eq!(is_reducible(&actin, &policy()), Ok(true));
    }

    #[test]
    fn find_single_loop_strategy() {
        let trace = find_strategy(&ls("2 2"), &policy()).unwrap().unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].rule, RewriteRule::Loop { pointer: 2, at: 0 });
        assert!(trace.is_successful());
    }

    #[test]
    fn hairpin_then_loop_strategy() {
        // hairpin on 2 flips the interior 3, leaving an adjacent direct pair
        let trace = find_strategy(&ls("2 3 -2 -3"), &policy()).unwrap().unwrap();
        let rules: Vec<RewriteRule> = trace.steps.iter().map(|s| s.rule).collect();
        assert_eq!(
            rules,
            vec![
                RewriteRule::Hairpin { pointer: 2, first: 0, second: 2 },
                RewriteRule::Loop { pointer: 3, at: 0 },
            ]
        );
        assert!(trace.is_successful());
    }

    #[test]
    fn hairpin_then_hairpin_strategy() {
        let trace = find_strategy(&ls("2 3 -2 3"), &policy()).unwrap().unwrap();
        let names: Vec<&str> = trace.steps.iter().map(|s| s.rule.name()).collect();
        assert_eq!(names, vec!["hairpin", "hairpin"]);
        assert!(trace.is_successful());
    }

    #[test]
    fn double_loop_strategy() {
        let trace = find_strategy(&ls("2 3 2 3"), &policy()).unwrap().unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].rule.name(), "double-loop");
        assert!(trace.is_successful());
    }

    #[test]
    fn traces_replay_exactly() {
        for text in ["2 2", "2 3 -2 -3", "2 3 2 3", "3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9"] {
            let trace = find_strategy(&ls(text), &policy()).unwrap().unwrap();
            trace.replay_check().unwrap();
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = find_strategy(&ls("2 2 3 3"), &policy()).unwrap();
        let b = find_strategy(&ls("2 2 3 3"), &policy()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn enumerate_empty_string() {
        let e = enumerate_strategies(&LegalString::empty(), &SearchPolicy::exhaustive()).unwrap();
        assert_eq!(e.traces.len(), 1);
        assert!(e.traces[0].steps.is_empty());
        assert!(!e.truncated);
    }

    #[test]
    fn enumerate_two_independent_loops() {
        let e = enumerate_strategies(&ls("2 2 3 3"), &SearchPolicy::exhaustive()).unwrap();
        assert_eq!(e.traces.len(), 2);
    }

    #[test]
    fn enumerate_single_hairpin() {
        let e = enumerate_strategies(&ls("2 -2"), &SearchPolicy::exhaustive()).unwrap();
        assert_eq!(e.traces.len(), 1);
        assert_eq!(e.traces[0].steps[0].rule.name(), "hairpin");
    }

    #[test]
    fn enumerate_requires_exhaustive_mode() {
        assert_eq!(
            enumerate_strategies(&ls("2 2"), &policy()).unwrap_err(),
            SearchError::NotExhaustive
        );
    }

    #[test]
    fn enumeration_truncates_at_max_traces() {
        let mut p = SearchPolicy::exhaustive();
        p.max_traces = 1;
        let e = enumerate_strategies(&ls("2 2 3 3"), &p).unwrap();
        assert_eq!(e.traces.len(), 1);
        assert!(e.truncated);
    }

    #[test]
    fn state_limit_is_reported() {
        let mut p = policy();
        p.max_states = 1;
        let actin = ls("3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9");
        assert_eq!(
            is_reducible(&actin, &p),
            Err(SearchError::StateLimitExceeded { limit: 1 })
        );
    }

    #[test]
    fn zero_limits_are_rejected() {
        let mut p = policy();
        p.max_states = 0;
        assert_eq!(is_reducible(&ls("2 2"), &p), Err(SearchError::InvalidLimits));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_reduce(&ls("2 2")).unwrap(), (true, 1));
        assert_eq!(oracle_reduce(&ls("2 2 3 3")).unwrap(), (true, 2));
        assert_eq!(oracle_reduce(&ls("2 3 2 3")).unwrap(), (true, 1));
        assert_eq!(oracle_reduce(&LegalString::empty()).unwrap(), (true, 1));
    }

    #[test]
    fn oracle_rejects_long_strings() {
        let actin = ls("3 4 4 5 6 7 5 6 7 8 9 -3 -2 2 8 9");
        assert_eq!(
            oracle_reduce(&actin),
            Err(SearchError::OracleCutoff { len: 16, cutoff: ORACLE_CUTOFF })
        );
    }

    #[test]
    fn universe_of_one_pointer() {
        let all: Vec<String> =
            enumerate_legal_strings(1).unwrap().map(|s| s.to_string()).collect();
        assert_eq!(all, vec!["2 2", "2 -2", "-2 2", "-2 -2"]);
    }

    #[test]
    fn universe_of_two_pointers_has_ninety_six_strings() {
        let all: Vec<LegalString> = enumerate_legal_strings(2).unwrap().collect();
        assert_eq!(all.len(), 96);
        let distinct: HashSet<LegalString> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 96);
    }

    #[test]
    fn universe_rejects_large_alphabets() {
        assert!(matches!(
            enumerate_legal_strings(5).map(|_| ()),
            Err(SearchError::UniverseTooLarge { got: 5, max: 4 })
        ));
    }

    #[test]
    fn depth_is_bounded_by_half_length() {
        for s in enumerate_legal_strings(3).unwrap().take(500) {
            let trace = find_strategy(&s, &policy()).unwrap().unwrap();
            assert!(trace.steps.len() <= s.len() / 2);
        }
    }
}
