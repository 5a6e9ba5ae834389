//! JSON report builders. The trace schema is documented in the README;
//! every state is serialized in its canonical textual form so reports can
//! be re-parsed and replayed.

use serde_json::{json, Value};

use ciliate::{
    AssemblyResult, AssemblyState, LegalString, MicronuclearGene, ReductionTrace, Segment,
    StrategyEnumeration,
};

fn step_json(index: usize, step: &ciliate::TraceStep) -> Value {
    json!({
        "step": index + 1,
        "rule": step.rule.name(),
        "pointers": step.rule.pointer_values(),
        "positions": step.rule.positions(),
        "excision": step.excision.kind.to_string(),
        "result": step.result.to_string(),
    })
}

pub fn trace_json(trace: &ReductionTrace) -> Value {
    json!({
        "initial": trace.initial.to_string(),
        "steps": trace.steps.iter().enumerate().map(|(k, s)| step_json(k, s)).collect::<Vec<_>>(),
        "success": trace.is_successful(),
    })
}

pub fn parse_json(gene: &MicronuclearGene, legal: &LegalString) -> Value {
    json!({
        "descriptor": ciliate::format_gene(gene),
        "legal_string": legal.to_string(),
        "kappa": gene.kappa(),
        "mds_count": gene.mds_count(),
        "ies_count": gene.ies_count(),
    })
}

fn segments_json(segments: &[Segment]) -> Value {
    Value::Array(segments.iter().map(|s| Value::String(s.labeled())).collect())
}

fn circles_json(circles: &[Vec<Segment>]) -> Value {
    Value::Array(circles.iter().map(|c| segments_json(c)).collect())
}

/// The strategy trace extended with per-step segment snapshots, obtained
/// by replaying the trace molecularly.
pub fn assembly_json(gene: &MicronuclearGene, result: &AssemblyResult) -> Value {
    let mut state = AssemblyState::init_state(gene);
    let mut steps = Vec::new();
    for (k, step) in result.trace.steps.iter().enumerate() {
        state = state.apply_molecular(&step.rule).expect("recorded trace replays");
        let mut v = step_json(k, step);
        v["linear"] = segments_json(state.linear());
        v["circles"] = circles_json(state.circles());
        steps.push(v);
    }
    json!({
        "descriptor": ciliate::format_gene(gene),
        "initial": result.trace.initial.to_string(),
        "steps": steps,
        "success": result.success,
        "macronuclear": segments_json(&result.macronuclear),
        "circles": circles_json(&result.circles),
    })
}

pub fn strategies_json(initial: &LegalString, enumeration: &StrategyEnumeration) -> Value {
    json!({
        "initial": initial.to_string(),
        "count": enumeration.traces.len(),
        "truncated": enumeration.truncated,
        "strategies": enumeration.traces.iter().map(trace_json).collect::<Vec<_>>(),
    })
}

pub fn verify_json(
    max_pointers: u32,
    total: usize,
    reducible: usize,
    histogram: &std::collections::BTreeMap<u64, usize>,
    counterexample: Option<(&str, &str)>,
) -> Value {
    json!({
        "max_pointers": max_pointers,
        "total": total,
        "reducible": reducible,
        "histogram": histogram.iter().map(|(k, v)| json!({ "strategies": k, "strings": v })).collect::<Vec<_>>(),
        "agreement": counterexample.is_none(),
        "counterexample": counterexample.map(|(s, why)| json!({ "string": s, "reason": why })),
    })
}
