//! Consistency and soundness of code sets, and the least-fixed-point
//! iteration of the grounding operator.
//!
//! A set is consistent when it never contains a sentence code together
//! with the code of its negation, and sound when the operator
//! regenerates it: `V ⊆ G(V)`. From a consistent sound seed the chain
//! `U₀ = V, U_{n+1} = G(Uₙ)` increases strictly inside a finite code
//! domain, so it stabilizes at a fixed point `U = G(U)`; seeded at or
//! below the true base sentences it stabilizes at the least fixed point.
//! Limit stages of the general transfinite chain collapse to finite
//! iteration here, but the limit union is exposed on its own so its
//! consistency can be exercised directly.

use thiserror::Error;

use crate::operator::TruthOperator;
use crate::universe::{CodeSet, Universe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixpointError {
    #[error("seed rejected: {}", seed_rejection_msg(*inconsistent, *unsound))]
    SeedRejected { inconsistent: bool, unsound: bool },
    #[error("stage sets are not totally ordered by inclusion")]
    NotAChain,
    #[error("chain stage {0} is inconsistent")]
    InconsistentChainMember(usize),
}

fn seed_rejection_msg(inconsistent: bool, unsound: bool) -> &'static str {
    match (inconsistent, unsound) {
        (true, true) => "inconsistent and unsound",
        (true, false) => "contains a sentence together with its negation",
        (false, true) => "not regenerated by the operator (V is not a subset of G(V))",
        (false, false) => "rejected",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageOrigin {
    Seed,
    GStep,
    LimitUnion,
}

impl StageOrigin {
    pub fn label(self) -> &'static str {
        match self {
            StageOrigin::Seed => "seed",
            StageOrigin::GStep => "G-step",
            StageOrigin::LimitUnion => "limit-union",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub index: usize,
    pub set: CodeSet,
    pub origin: StageOrigin,
}

/// The iteration history: strictly increasing stages up to (and
/// excluding) the first repeat.
#[derive(Debug, Clone)]
pub struct FixpointTrace {
    pub stages: Vec<Stage>,
    pub final_set: CodeSet,
    pub reached_fixed_point: bool,
}

/// No sentence and its negation are both in the set.
pub fn is_consistent(set: &CodeSet, u: &Universe) -> bool {
    for code in set {
        if let Some(i) = u.index_of_code(code) {
            if set.contains(u.neg_code_at(i)) {
                return false;
            }
        }
    }
    true
}

/// `V ⊆ G(V)`: the operator regenerates every member.
pub fn is_sound(set: &CodeSet, u: &Universe) -> bool {
    is_sound_with(&TruthOperator::new(u), set)
}

pub fn is_sound_with(op: &TruthOperator<'_>, set: &CodeSet) -> bool {
    set.is_subset(&op.g(set).g)
}

/// Iterates the operator from a consistent sound seed to the fixed
/// point above it.
pub fn lfp(seed: &CodeSet, u: &Universe) -> Result<FixpointTrace, FixpointError> {
    lfp_with(&TruthOperator::new(u), seed)
}

pub fn lfp_with(op: &TruthOperator<'_>, seed: &CodeSet) -> Result<FixpointTrace, FixpointError> {
    let inconsistent = !is_consistent(seed, op.universe());
    let first = op.g(seed).g;
    let unsound = !seed.is_subset(&first);
    if inconsistent || unsound {
        return Err(FixpointError::SeedRejected {
            inconsistent,
            unsound,
        });
    }

    let mut stages = vec![Stage {
        index: 0,
        set: seed.clone(),
        origin: StageOrigin::Seed,
    }];
    let mut current = seed.clone();
    let mut next = first;
    loop {
        if next == current {
            break;
        }
        assert!(
            current.is_subset(&next),
            "iteration from a sound seed must increase"
        );
        stages.push(Stage {
            index: stages.len(),
            set: next.clone(),
            origin: StageOrigin::GStep,
        });
        current = next;
        next = op.g(&current).g;
    }

    Ok(FixpointTrace {
        stages,
        final_set: current,
        reached_fixed_point: true,
    })
}

/// The limit-stage union `⋃ G(U_λ)` over a consistent chain. The result
/// is asserted consistent.
pub fn union_stage(stages: &[CodeSet], u: &Universe) -> Result<CodeSet, FixpointError> {
    let mut order: Vec<&CodeSet> = stages.iter().collect();
    order.sort_by_key(|s| s.len());
    for w in order.windows(2) {
        if !w[0].is_subset(w[1]) {
            return Err(FixpointError::NotAChain);
        }
    }
    for (i, s) in stages.iter().enumerate() {
        if !is_consistent(s, u) {
            return Err(FixpointError::InconsistentChainMember(i));
        }
    }
    let op = TruthOperator::new(u);
    let mut union = CodeSet::new();
    for s in stages {
        union.union_with(&op.g(s).g);
    }
    assert!(
        is_consistent(&union, u),
        "limit union of a consistent chain must stay consistent"
    );
    Ok(union)
}

/// One line per stage: `stage<TAB>origin<TAB>added codes` (comma-separated
/// decimals, ascending; the delta against the previous stage).
pub fn export_fixpoint_trace(trace: &FixpointTrace) -> String {
    let mut out = String::new();
    let mut prev: Option<&CodeSet> = None;
    for stage in &trace.stages {
        let added: Vec<String> = stage
            .set
            .sorted()
            .into_iter()
            .filter(|c| prev.map(|p| !p.contains(c)).unwrap_or(true))
            .map(|c| c.to_string())
            .collect();
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            stage.index,
            stage.origin.label(),
            added.join(",")
        ));
        prev = Some(&stage.set);
    }
    out
}
