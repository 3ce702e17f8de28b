//! Three-way classification of sentences against an operator result.
//!
//! A sentence is true when its code is in the truth set, false when it is
//! in the falsity set, and undefined otherwise. The classified sentences
//! form the grounded sublanguage; `Undefined` is a first-class verdict
//! for everything whose grounding the truncation (or the seed set) does
//! not settle.

use std::fmt;

use thiserror::Error;

use crate::operator::OperatorResult;
use crate::syntax::{code_of, iff, render, GodelNumber, Sentence};
use crate::universe::Universe;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Undefined => "undefined",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("code {0} is not assigned in the universe")]
    UnknownCode(GodelNumber),
    #[error("sentence `{0}` is not in the universe")]
    NotInUniverse(String),
}

/// Membership in the grounded sublanguage: the code lies in `G(U) ∪ F(U)`.
pub fn in_l0(code: &GodelNumber, r: &OperatorResult, u: &Universe) -> Result<bool, ClassifyError> {
    if !u.contains_code(code) {
        return Err(ClassifyError::UnknownCode(code.clone()));
    }
    Ok(r.g.contains(code) || r.f.contains(code))
}

pub fn classify(s: &Sentence, r: &OperatorResult, u: &Universe) -> Result<Verdict, ClassifyError> {
    let code = code_of(s);
    if !u.contains_code(&code) {
        return Err(ClassifyError::NotInUniverse(render(s)));
    }
    Ok(if r.g.contains(&code) {
        Verdict::True
    } else if r.f.contains(&code) {
        Verdict::False
    } else {
        Verdict::Undefined
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TBiconditional {
    Holds,
    Fails,
    /// The sentence is outside the grounded sublanguage, or the
    /// biconditional is not expressible inside the truncation.
    NotApplicable,
}

/// Whether `A <-> T(⌈A⌉)` is true at the given operator result.
///
/// When the syntactic compound is a universe member its own verdict
/// decides. When only the truth atom fits inside the truncation, the
/// semantic surrogate decides: the verdicts of `A` and `T(⌈A⌉)` must
/// agree (both true or both false), which is what the biconditional's
/// truth comes down to under the classification rules.
pub fn t_biconditional_holds(
    a: &Sentence,
    r: &OperatorResult,
    u: &Universe,
) -> Result<TBiconditional, ClassifyError> {
    let verdict = classify(a, r, u)?;
    if verdict == Verdict::Undefined {
        return Ok(TBiconditional::NotApplicable);
    }
    let t_atom = Sentence::TAtom(code_of(a));
    let compound = iff(a.clone(), t_atom.clone());
    if u.contains(&compound) {
        return Ok(match classify(&compound, r, u)? {
            Verdict::True => TBiconditional::Holds,
            _ => TBiconditional::Fails,
        });
    }
    if u.contains(&t_atom) {
        let tv = classify(&t_atom, r, u)?;
        return Ok(if tv == verdict {
            TBiconditional::Holds
        } else {
            TBiconditional::Fails
        });
    }
    Ok(TBiconditional::NotApplicable)
}

#[derive(Debug, Clone, Default)]
pub struct BaseAgreementReport {
    pub checked: usize,
    /// False base sentences whose negation exceeds the truncation; their
    /// falsity has no witness inside the universe, so they are skipped
    /// rather than counted against agreement.
    pub boundary_skipped: usize,
    pub violations: Vec<String>,
}

impl BaseAgreementReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Agreement between the base-language interpretation and the
/// classification: every true base sentence classifies true, and every
/// false base sentence whose negation the universe contains classifies
/// false.
pub fn base_agreement(r: &OperatorResult, u: &Universe) -> BaseAgreementReport {
    let mut report = BaseAgreementReport::default();
    for (i, s) in u.sentences().iter().enumerate() {
        if !u.is_t_free_at(i) {
            continue;
        }
        let truth = u.w().contains(u.code_at(i));
        let verdict = classify(s, r, u).expect("universe member");
        match (truth, verdict) {
            (true, Verdict::True) | (false, Verdict::False) => report.checked += 1,
            (false, Verdict::Undefined) if u.neg_index_at(i).is_none() => {
                report.boundary_skipped += 1;
            }
            (truth, verdict) => {
                report.violations.push(format!(
                    "`{}` evaluates {} but classifies {}",
                    render(s),
                    if truth { "true" } else { "false" },
                    verdict
                ));
            }
        }
    }
    report
}

/// Negation stays inside the grounded sublanguage. A classified `¬A`
/// always classifies `A` too. The converse direction needs the falsity
/// of `¬A` to be witnessable, i.e. `¬¬A` inside the truncation, so it is
/// only required where that witness exists.
pub fn l0_closed_under_negation(r: &OperatorResult, u: &Universe) -> bool {
    for (i, _) in u.sentences().iter().enumerate() {
        if let Some(ni) = u.neg_index_at(i) {
            let a = in_l0(u.code_at(i), r, u).expect("member");
            let na = in_l0(u.code_at(ni), r, u).expect("member");
            if na && !a {
                return false;
            }
            if u.neg_index_at(ni).is_some() && a != na {
                return false;
            }
        }
    }
    true
}
