//! Simulation and analysis of ciliate gene assembly.
//!
//! A micronuclear gene is a permuted (and possibly partially inverted)
//! arrangement of coding fragments (MDSs) separated by noncoding fragments
//! (IESs). Assembly removes the IESs and restores the orthodox MDS order
//! through three intramolecular recombination operations, each keyed on a
//! pair of identical repeat sequences (pointers).
//!
//! The crate is layered bottom-up:
//!
//! - [`descriptor`]: the gene data model, its textual form, and compilation
//!   to the signed pointer-string substrate.
//! - [`rewrite`]: legal strings (every pointer occurs exactly twice) and the
//!   three operations as position-bound rewriting rules.
//! - [`strategy`]: reduction-graph search, strategy enumeration, and the
//!   independent brute-force oracle.
//! - [`assembly`]: the molecular-level view layered over string reduction,
//!   tracking merged composite MDSs and excised circular products.

pub mod assembly;
pub mod descriptor;
pub mod rewrite;
pub mod strategy;

pub use assembly::{assemble, AssemblyResult, AssemblyState};
pub use descriptor::{
    format_gene, parse_gene, random_scrambled_gene, to_legal_string, DescriptorError, IesSegment,
    MdsSegment, MicronuclearGene, Segment,
};
pub use rewrite::{
    applicable_rules, apply_rule, invert_interval, ExcisionKind, ExcisionRecord, LegalString,
    Pointer, RewriteError, RewriteRule,
};
pub use strategy::{
    enumerate_legal_strings, enumerate_strategies, find_strategy, is_reducible, oracle_reduce,
    ReductionTrace, SearchError, SearchMode, SearchOutcome, SearchPolicy, StrategyEnumeration,
    TraceStep, ORACLE_CUTOFF,
};
