//! Finite sentence universes.
//!
//! A universe is the finite truncation of the sentence language that the
//! grounding operator ranges over: an ordered set of sentences, the
//! bijective index between sentences and their Gödel codes, the numeral
//! domain `X` (the codes of all universe sentences), and the set `W` of
//! codes of true base-language sentences.
//!
//! Construction runs in stages. The seed layer holds the enumerated base
//! sentences (with all of their sentence-level subtrees) plus the four
//! quantified truth sentences. Truth atoms `T(⌈A⌉)` are injected for
//! every sentence of the seed layer's connective closure up to the
//! source depth, together with their single negations, so that negated
//! truth facts stay representable. The full universe is the connective
//! closure of all admitted atoms up to the total depth, followed by one
//! negation pass that admits `¬s` for every member: falsity of a sentence
//! is witnessed by its negation's truth, so the pass keeps falsity
//! representable for everything the closure built. Every subtree of
//! every member is itself a member, which keeps each grounding rule
//! applicable to every compound the universe contains.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::collections::HashSet;

use thiserror::Error;

use crate::base_lang::{enumerate_base, eval_base, BaseConfig, BaseError};
use crate::syntax::{code_of, lift_base, lower_to_base, not, parse, render, GodelNumber, Sentence};

pub const DEFAULT_BUDGET: usize = 200_000;

/// A finite set of Gödel codes drawn from one universe.
///
/// Plays every set role in the construction: `U`, `G(U)`, `F(U)`, `W`,
/// and the intermediate rule sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeSet {
    inner: HashSet<GodelNumber>,
}

impl CodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(code: GodelNumber) -> Self {
        let mut s = Self::new();
        s.insert(code);
        s
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn contains(&self, code: &GodelNumber) -> bool {
        self.inner.contains(code)
    }

    /// Returns true when the code was not already present.
    pub fn insert(&mut self, code: GodelNumber) -> bool {
        self.inner.insert(code)
    }

    pub fn remove(&mut self, code: &GodelNumber) -> bool {
        self.inner.remove(code)
    }

    pub fn union_with(&mut self, other: &CodeSet) {
        for c in &other.inner {
            self.inner.insert(c.clone());
        }
    }

    pub fn is_subset(&self, other: &CodeSet) -> bool {
        self.inner.is_subset(&other.inner)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GodelNumber> {
        self.inner.iter()
    }

    /// Codes in ascending order; the canonical order for export.
    pub fn sorted(&self) -> Vec<GodelNumber> {
        let mut v: Vec<GodelNumber> = self.inner.iter().cloned().collect();
        v.sort();
        v
    }
}

impl FromIterator<GodelNumber> for CodeSet {
    fn from_iter<I: IntoIterator<Item = GodelNumber>>(iter: I) -> Self {
        CodeSet {
            inner: iter.into_iter().collect(),
        }
    }
}

impl Extend<GodelNumber> for CodeSet {
    fn extend<I: IntoIterator<Item = GodelNumber>>(&mut self, iter: I) {
        self.inner.extend(iter)
    }
}

impl<'a> IntoIterator for &'a CodeSet {
    type Item = &'a GodelNumber;
    type IntoIter = std::collections::hash_set::Iter<'a, GodelNumber>;
    fn into_iter(self) -> Self::IntoIter {
        self.inner.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildParams {
    pub base: BaseConfig,
    /// Total connective-closure depth over the admitted atoms. At least 1.
    pub depth: u32,
    /// Closure depth of the seed layer up to which truth atoms are
    /// injected. At most `depth`.
    pub t_depth: u32,
    pub budget: usize,
}

impl BuildParams {
    pub fn new(base: BaseConfig, depth: u32, t_depth: u32) -> Self {
        BuildParams {
            base,
            depth,
            t_depth,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Enumerated base sentences plus the four quantified truth sentences
    /// (after subtree completion).
    pub seed_layer: usize,
    /// Seed layer plus injected truth atoms and their negations.
    pub atom_layer: usize,
    pub total: usize,
}

/// Structural classification of a member with the member indices of its
/// parts. Subtree completeness makes every part a member, and numeral
/// domain completeness does the same for truth-atom sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    BaseLeaf,
    TAtom { source: usize },
    ExistsT,
    ForallT,
    ExistsNotT,
    ForallNotT,
    Not { inner: usize },
    Or { l: usize, r: usize },
    And { l: usize, r: usize },
    Implies { l: usize, r: usize },
    Iff { l: usize, r: usize },
}

#[derive(Debug, Error)]
pub enum UniverseError {
    #[error("universe budget exceeded: more than {cap} sentences")]
    Budget { cap: usize },
    #[error("invalid build parameters: {0}")]
    InvalidParams(String),
    #[error("seed rejected: {0}")]
    Seed(#[from] BaseError),
    #[error("invalid universe: {0}")]
    Invalid(String),
}

pub struct Universe {
    /// Sorted by code, ascending.
    sentences: Vec<Sentence>,
    codes: Vec<GodelNumber>,
    by_code: HashMap<GodelNumber, usize>,
    /// `code_of(Not(s))` per member, whether or not the negation is a member.
    neg_codes: Vec<GodelNumber>,
    /// Index of `Not(s)` when it is itself a member.
    neg_index: Vec<Option<usize>>,
    shapes: Vec<Shape>,
    t_free: Vec<bool>,
    w: CodeSet,
    all: CodeSet,
    params: Option<BuildParams>,
    stats: BuildStats,
}

impl Universe {
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn codes(&self) -> &[GodelNumber] {
        &self.codes
    }

    pub fn sentence_at(&self, idx: usize) -> &Sentence {
        &self.sentences[idx]
    }

    pub fn code_at(&self, idx: usize) -> &GodelNumber {
        &self.codes[idx]
    }

    pub fn index_of_code(&self, code: &GodelNumber) -> Option<usize> {
        self.by_code.get(code).copied()
    }

    pub fn index_of(&self, s: &Sentence) -> Option<usize> {
        self.index_of_code(&code_of(s))
    }

    pub fn contains_code(&self, code: &GodelNumber) -> bool {
        self.by_code.contains_key(code)
    }

    pub fn contains(&self, s: &Sentence) -> bool {
        self.contains_code(&code_of(s))
    }

    /// The unique sentence with the given code, if the code is assigned.
    pub fn decode(&self, code: &GodelNumber) -> Option<&Sentence> {
        self.index_of_code(code).map(|i| &self.sentences[i])
    }

    /// The numeral domain: codes of all universe sentences.
    pub fn x(&self) -> &CodeSet {
        &self.all
    }

    /// Codes of the true base-language sentences.
    pub fn w(&self) -> &CodeSet {
        &self.w
    }

    pub fn neg_code_at(&self, idx: usize) -> &GodelNumber {
        &self.neg_codes[idx]
    }

    pub fn neg_index_at(&self, idx: usize) -> Option<usize> {
        self.neg_index[idx]
    }

    pub fn shape_at(&self, idx: usize) -> Shape {
        self.shapes[idx]
    }

    pub fn is_t_free_at(&self, idx: usize) -> bool {
        self.t_free[idx]
    }

    pub fn is_full(&self, set: &CodeSet) -> bool {
        set.len() == self.len()
    }

    pub fn params(&self) -> Option<&BuildParams> {
        self.params.as_ref()
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    pub fn build(params: BuildParams) -> Result<Universe, UniverseError> {
        build_with(params)
    }

    /// Assembles a universe from an explicit sentence set, validating the
    /// structural invariants the builder normally guarantees: subtree
    /// completeness, negations alongside every truth atom, and numeral
    /// domain completeness (`T(n)` only for assigned codes `n`).
    pub fn from_sentences(
        sentences: impl IntoIterator<Item = Sentence>,
    ) -> Result<Universe, UniverseError> {
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for s in sentences {
            if seen.insert(code_of(&s)) {
                members.push(s);
            }
        }
        let codes: HashSet<GodelNumber> = seen;
        for s in &members {
            for sub in s.subtrees() {
                if !codes.contains(&code_of(sub)) {
                    return Err(UniverseError::Invalid(format!(
                        "subtree `{}` of `{}` is not a member",
                        render(sub),
                        render(s)
                    )));
                }
            }
            if let Sentence::TAtom(n) = s {
                if !codes.contains(n) {
                    return Err(UniverseError::Invalid(format!(
                        "truth atom `{}` refers to an unassigned code",
                        render(s)
                    )));
                }
                if !codes.contains(&code_of(&not(s.clone()))) {
                    return Err(UniverseError::Invalid(format!(
                        "truth atom `{}` has no negation in the universe",
                        render(s)
                    )));
                }
            }
        }
        Ok(assemble(members, None, BuildStats::default()))
    }
}

fn build_with(params: BuildParams) -> Result<Universe, UniverseError> {
    if params.depth < 1 {
        return Err(UniverseError::InvalidParams(
            "connective depth must be at least 1".into(),
        ));
    }
    if params.t_depth > params.depth {
        return Err(UniverseError::InvalidParams(
            "truth-atom source depth cannot exceed the connective depth".into(),
        ));
    }

    let base = enumerate_base(&params.base)?;

    // Seed layer: lifted base sentences with all their subtrees, then the
    // four quantified truth sentences.
    let mut seen = HashSet::new();
    let mut seed_sentences: Vec<Sentence> = Vec::new();
    for f in &base {
        let lifted = lift_base(f);
        for sub in lifted.subtrees() {
            if seen.insert(code_of(sub)) {
                seed_sentences.push(sub.clone());
            }
        }
    }
    for q in [
        Sentence::ExistsT,
        Sentence::ForallT,
        Sentence::ExistsNotT,
        Sentence::ForallNotT,
    ] {
        if seen.insert(code_of(&q)) {
            seed_sentences.push(q);
        }
    }

    // Truth-atom sources: the seed layer closed to the source depth,
    // computed apart from the main pool so the injected atoms still take
    // part in the full closure below. Injected atoms are excluded from
    // further injection, so the chain T(⌈T(⌈A⌉)⌉), ... never starts and
    // the build stays finite.
    let mut source_pool = Pool::new(params.budget);
    for s in &seed_sentences {
        source_pool.admit(s.clone(), 0)?;
    }
    source_pool.close_to(params.t_depth)?;
    let sources: Vec<GodelNumber> = source_pool.codes_in_order();

    let mut pool: Pool = Pool::new(params.budget);
    for s in seed_sentences {
        pool.admit(s, 0)?;
    }
    let seed_layer = pool.len();
    for code in sources {
        let t = Sentence::TAtom(code);
        let nt = not(t.clone());
        pool.admit(t, 0)?;
        pool.admit(nt, 0)?;
    }
    let atom_layer = pool.len();

    pool.close_to(params.depth)?;
    pool.negation_pass()?;

    let stats = BuildStats {
        seed_layer,
        atom_layer,
        total: pool.len(),
    };
    Ok(assemble(pool.into_sentences(), Some(params), stats))
}

/// Growing sentence pool with per-member closure levels.
struct Pool {
    budget: usize,
    members: Vec<(Sentence, GodelNumber, u32)>,
    level_of: HashMap<GodelNumber, u32>,
    closed_to: u32,
}

impl Pool {
    fn new(budget: usize) -> Self {
        Pool {
            budget,
            members: Vec::new(),
            level_of: HashMap::new(),
            closed_to: 0,
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    fn admit(&mut self, s: Sentence, level: u32) -> Result<(), UniverseError> {
        let code = code_of(&s);
        match self.level_of.entry(code.clone()) {
            Entry::Occupied(_) => Ok(()),
            Entry::Vacant(e) => {
                e.insert(level);
                self.members.push((s, code, level));
                if self.members.len() > self.budget {
                    return Err(UniverseError::Budget { cap: self.budget });
                }
                Ok(())
            }
        }
    }

    fn codes_in_order(&self) -> Vec<GodelNumber> {
        let mut v: Vec<GodelNumber> = self.members.iter().map(|(_, c, _)| c.clone()).collect();
        v.sort();
        v
    }

    /// Extends the connective closure up to the given level. New members
    /// appear exactly at one plus the maximum level of their parts.
    fn close_to(&mut self, depth: u32) -> Result<(), UniverseError> {
        for level in (self.closed_to + 1)..=depth {
            let mut frontier: Vec<Sentence> = Vec::new();
            let mut lower: Vec<Sentence> = Vec::new();
            let mut lower_levels: Vec<u32> = Vec::new();
            let mut ordered: Vec<(GodelNumber, Sentence, u32)> = self
                .members
                .iter()
                .filter(|(_, _, l)| *l < level)
                .map(|(s, c, l)| (c.clone(), s.clone(), *l))
                .collect();
            ordered.sort_by(|a, b| a.0.cmp(&b.0));
            for (_, s, l) in ordered {
                if l == level - 1 {
                    frontier.push(s.clone());
                }
                lower.push(s);
                lower_levels.push(l);
            }
            for s in &frontier {
                self.admit(not(s.clone()), level)?;
            }
            for (i, l) in lower.iter().enumerate() {
                for (j, r) in lower.iter().enumerate() {
                    if lower_levels[i].max(lower_levels[j]) != level - 1 {
                        continue;
                    }
                    for mk in [
                        crate::syntax::or,
                        crate::syntax::and,
                        crate::syntax::implies,
                        crate::syntax::iff,
                    ] {
                        self.admit(mk(l.clone(), r.clone()), level)?;
                    }
                }
            }
        }
        self.closed_to = self.closed_to.max(depth);
        Ok(())
    }

    /// Admits the single negation of every member.
    fn negation_pass(&mut self) -> Result<(), UniverseError> {
        let mut ordered: Vec<(GodelNumber, Sentence)> = self
            .members
            .iter()
            .map(|(s, c, _)| (c.clone(), s.clone()))
            .collect();
        ordered.sort_by(|a, b| a.0.cmp(&b.0));
        let level = self.closed_to + 1;
        for (_, s) in ordered {
            self.admit(not(s), level)?;
        }
        Ok(())
    }

    fn into_sentences(self) -> Vec<Sentence> {
        self.members.into_iter().map(|(s, _, _)| s).collect()
    }
}

fn assemble(members: Vec<Sentence>, params: Option<BuildParams>, stats: BuildStats) -> Universe {
    let mut paired: Vec<(GodelNumber, Sentence)> =
        members.into_iter().map(|s| (code_of(&s), s)).collect();
    paired.sort_by(|a, b| a.0.cmp(&b.0));

    let codes: Vec<GodelNumber> = paired.iter().map(|(c, _)| c.clone()).collect();
    let sentences: Vec<Sentence> = paired.into_iter().map(|(_, s)| s).collect();
    let by_code: HashMap<GodelNumber, usize> = codes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    let neg_codes: Vec<GodelNumber> = sentences.iter().map(|s| code_of(&not(s.clone()))).collect();
    let neg_index: Vec<Option<usize>> = neg_codes.iter().map(|c| by_code.get(c).copied()).collect();
    let t_free: Vec<bool> = sentences.iter().map(Sentence::is_t_free).collect();

    let member = |s: &Sentence| -> usize {
        by_code
            .get(&code_of(s))
            .copied()
            .expect("parts of members are members")
    };
    let shapes: Vec<Shape> = sentences
        .iter()
        .map(|s| match s {
            Sentence::BaseAtom(_) => Shape::BaseLeaf,
            Sentence::TAtom(n) => Shape::TAtom {
                source: by_code.get(n).copied().expect("numeral domain is complete"),
            },
            Sentence::ExistsT => Shape::ExistsT,
            Sentence::ForallT => Shape::ForallT,
            Sentence::ExistsNotT => Shape::ExistsNotT,
            Sentence::ForallNotT => Shape::ForallNotT,
            Sentence::Not(a) => Shape::Not { inner: member(a) },
            Sentence::Or(l, r) => Shape::Or {
                l: member(l),
                r: member(r),
            },
            Sentence::And(l, r) => Shape::And {
                l: member(l),
                r: member(r),
            },
            Sentence::Implies(l, r) => Shape::Implies {
                l: member(l),
                r: member(r),
            },
            Sentence::Iff(l, r) => Shape::Iff {
                l: member(l),
                r: member(r),
            },
        })
        .collect();

    let mut w = CodeSet::new();
    for (i, s) in sentences.iter().enumerate() {
        if t_free[i] {
            let f = lower_to_base(s).expect("t-free sentence lowers");
            if eval_base(&f).expect("universe sentences are closed") {
                w.insert(codes[i].clone());
            }
        }
    }
    let all: CodeSet = codes.iter().cloned().collect();

    let total = sentences.len();
    Universe {
        sentences,
        codes,
        by_code,
        neg_codes,
        neg_index,
        shapes,
        t_free,
        w,
        all,
        params,
        stats: BuildStats { total, ..stats },
    }
}

/// Builds a universe with the default budget.
pub fn build_universe(
    cfg: &BaseConfig,
    depth: u32,
    t_depth: u32,
) -> Result<Universe, UniverseError> {
    Universe::build(BuildParams::new(cfg.clone(), depth, t_depth))
}

/// Recomputes `W` from the evaluator: exactly the codes of the base
/// (truth-free) universe sentences that evaluate true.
pub fn compute_w(u: &Universe) -> CodeSet {
    let mut w = CodeSet::new();
    for (i, s) in u.sentences().iter().enumerate() {
        if u.is_t_free_at(i) {
            let f = lower_to_base(s).expect("t-free sentence lowers");
            if eval_base(&f).expect("universe sentences are closed") {
                w.insert(u.code_at(i).clone());
            }
        }
    }
    w
}

// ---------------------------------------------------------------------------
// Text artifacts

/// One line per sentence: `<decimal code><TAB><canonical text>`, sorted
/// by code.
pub fn export_universe(u: &Universe) -> String {
    let mut out = String::new();
    for (i, s) in u.sentences().iter().enumerate() {
        out.push_str(&u.code_at(i).to_string());
        out.push('\t');
        out.push_str(&render(s));
        out.push('\n');
    }
    out
}

/// Reads a universe export back, verifying that every line's code matches
/// the sentence's code under the fixed numbering and that the invariants
/// hold.
pub fn parse_universe_export(text: &str) -> Result<Universe, UniverseError> {
    let mut members = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (code_txt, sent_txt) = line.split_once('\t').ok_or_else(|| {
            UniverseError::Invalid(format!("line {}: expected <code>\\t<sentence>", lineno + 1))
        })?;
        let code = GodelNumber::from_decimal(code_txt).ok_or_else(|| {
            UniverseError::Invalid(format!("line {}: bad code `{code_txt}`", lineno + 1))
        })?;
        let s = parse(sent_txt)
            .map_err(|e| UniverseError::Invalid(format!("line {}: {e}", lineno + 1)))?;
        if code_of(&s) != code {
            return Err(UniverseError::Invalid(format!(
                "line {}: code {} does not match `{}`",
                lineno + 1,
                code,
                sent_txt
            )));
        }
        members.push(s);
    }
    Universe::from_sentences(members)
}

/// Sorted decimal codes, one per line.
pub fn export_codeset(set: &CodeSet) -> String {
    let mut out = String::new();
    for c in set.sorted() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_codeset(text: &str) -> Result<CodeSet, UniverseError> {
    let mut set = CodeSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let code = GodelNumber::from_decimal(line).ok_or_else(|| {
            UniverseError::Invalid(format!("line {}: bad code `{line}`", lineno + 1))
        })?;
        set.insert(code);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{and, iff, implies, or};

    fn f1() -> Universe {
        build_universe(&BaseConfig::with_seeds(["0=0", "0<0"]), 1, 0).unwrap()
    }

    fn ba(text: &str) -> Sentence {
        Sentence::BaseAtom(crate::base_lang::parse_base(text).unwrap())
    }

    #[test]
    fn fixture_f1_layer_counts() {
        let u = f1();
        let stats = u.stats();
        // 2 base + 4 quantified truth sentences.
        assert_eq!(stats.seed_layer, 6);
        // plus a truth atom and its negation per seed-layer sentence.
        assert_eq!(stats.atom_layer, 18);
        // One level of connective closure over the atom layer adds 12 new
        // negations and 4 * 18 * 18 binaries; the negation pass then adds
        // one negation for each of those.
        let closure = 18 + 12 + 4 * 18 * 18;
        assert_eq!(stats.total, closure + 4 * 18 * 18 + 12);
        assert_eq!(u.len(), stats.total);
    }

    #[test]
    fn w_contains_exactly_the_true_base_sentences() {
        let u = f1();
        assert!(u.w().contains(&code_of(&ba("0=0"))));
        assert!(!u.w().contains(&code_of(&ba("0<0"))));
        // false -> false is true
        assert!(u.w().contains(&code_of(&implies(ba("0<0"), ba("0<0")))));
        // not a base sentence
        assert!(!u.w().contains(&code_of(&Sentence::ExistsT)));
        // 2 atoms -> 1 true; 2 negations -> 1 true; 16 binaries -> 9 true;
        // the negation pass adds 7 negated false binaries and one double
        // negation of a true atom.
        assert_eq!(u.w().len(), 11 + 8);
        assert_eq!(&compute_w(&u), u.w());
    }

    #[test]
    fn empty_seed_universe_still_has_quantified_sentences_and_their_atoms() {
        let u = build_universe(&BaseConfig::default(), 1, 0).unwrap();
        assert!(u.contains(&Sentence::ExistsT));
        assert!(u.contains(&Sentence::ForallNotT));
        let c = code_of(&Sentence::ExistsT);
        assert!(u.contains(&Sentence::TAtom(c.clone())));
        assert!(u.contains(&not(Sentence::TAtom(c))));
        assert!(u.w().is_empty());
    }

    #[test]
    fn build_is_deterministic() {
        let a = f1();
        let b = f1();
        assert_eq!(a.codes(), b.codes());
        assert_eq!(export_universe(&a), export_universe(&b));
    }

    #[test]
    fn x_is_all_codes_and_truth_atoms_point_into_x() {
        let u = f1();
        assert_eq!(u.x().len(), u.len());
        for s in u.sentences() {
            if let Sentence::TAtom(n) = s {
                assert!(u.x().contains(n), "dangling numeral in {}", render(s));
            }
        }
    }

    #[test]
    fn truth_atom_negation_closure() {
        let u = f1();
        for s in u.sentences() {
            if matches!(s, Sentence::TAtom(_)) {
                assert!(u.contains(&not(s.clone())));
            }
        }
    }

    #[test]
    fn subtree_completeness() {
        let u = f1();
        for s in u.sentences() {
            for sub in s.subtrees() {
                assert!(u.contains(sub), "missing subtree of {}", render(s));
            }
        }
    }

    #[test]
    fn w_is_consistent() {
        let u = f1();
        for (i, _) in u.sentences().iter().enumerate() {
            if u.w().contains(u.code_at(i)) {
                assert!(
                    !u.w().contains(u.neg_code_at(i)),
                    "W contains a sentence and its negation"
                );
            }
        }
    }

    #[test]
    fn no_sentence_contains_its_own_code() {
        let u = f1();
        for (i, s) in u.sentences().iter().enumerate() {
            let host = u.code_at(i);
            for sub in s.subtrees() {
                if let Sentence::TAtom(n) = sub {
                    assert!(n < host, "self-referential code in {}", render(s));
                }
            }
        }
    }

    #[test]
    fn codes_pairwise_distinct() {
        let u = f1();
        let set: HashSet<_> = u.codes().iter().collect();
        assert_eq!(set.len(), u.len());
    }

    #[test]
    fn decode_round_trip_and_absent_codes() {
        let u = f1();
        for (i, s) in u.sentences().iter().enumerate() {
            assert_eq!(u.decode(u.code_at(i)), Some(s));
            assert_eq!(u.decode(&code_of(s)), Some(s));
        }
        // 0 and 1 are never assigned: the pairing map's least value is 2.
        assert_eq!(u.decode(&GodelNumber::from(0)), None);
        assert_eq!(u.decode(&GodelNumber::from(1)), None);
        assert_eq!(u.decode(&code_of(&ba("0=0"))), Some(&ba("0=0")));
    }

    #[test]
    fn budget_is_enforced() {
        let params = BuildParams {
            base: BaseConfig::with_seeds(["0=0", "0<0"]),
            depth: 1,
            t_depth: 0,
            budget: 100,
        };
        assert!(matches!(
            Universe::build(params),
            Err(UniverseError::Budget { cap: 100 })
        ));
    }

    #[test]
    fn deeper_source_depth_requires_t_depth_leq_depth() {
        assert!(matches!(
            build_universe(&BaseConfig::default(), 1, 2),
            Err(UniverseError::InvalidParams(_))
        ));
        assert!(matches!(
            build_universe(&BaseConfig::default(), 0, 0),
            Err(UniverseError::InvalidParams(_))
        ));
    }

    #[test]
    fn compound_seeds_bring_their_subtrees() {
        let u = build_universe(&BaseConfig::with_seeds(["!(0=0)"]), 1, 0).unwrap();
        assert!(u.contains(&ba("0=0")));
        assert!(u.contains(&not(ba("0=0"))));
    }

    #[test]
    fn deeper_source_depth_reflects_on_compounds() {
        let u = build_universe(&BaseConfig::default(), 1, 1).unwrap();
        let stats = u.stats();
        assert_eq!(stats.seed_layer, 4);
        // Sources: the 4 quantified sentences, their 4 negations, and
        // 4 * 16 binaries; a truth atom and its negation for each.
        assert_eq!(stats.atom_layer, 4 + 2 * 72);

        // Depth-1 compounds over the seed layer now carry truth atoms...
        let compound = or(Sentence::ExistsT, Sentence::ForallT);
        let t = Sentence::TAtom(code_of(&compound));
        assert!(u.contains(&compound));
        assert!(u.contains(&t));
        assert!(u.contains(&not(t.clone())));
        assert!(u.contains(&Sentence::TAtom(code_of(&not(Sentence::ExistsT)))));

        // ...and those truth atoms take part in the closure themselves.
        assert!(u.contains(&or(t.clone(), Sentence::ExistsT)));
        assert!(u.contains(&not(or(t, Sentence::ExistsT))));

        // Injection does not cascade: no truth atoms of truth atoms.
        let t0 = Sentence::TAtom(code_of(&Sentence::ExistsT));
        assert!(u.contains(&t0));
        assert!(!u.contains(&Sentence::TAtom(code_of(&t0))));
    }

    #[test]
    fn universe_export_round_trips() {
        let u = f1();
        let text = export_universe(&u);
        let back = parse_universe_export(&text).unwrap();
        assert_eq!(back.codes(), u.codes());
        assert_eq!(export_universe(&back), text);
        assert_eq!(back.w(), u.w());
    }

    #[test]
    fn codeset_export_round_trips() {
        let u = f1();
        let text = export_codeset(u.w());
        let back = parse_codeset(&text).unwrap();
        assert_eq!(&back, u.w());
        assert_eq!(export_codeset(&back), text);
    }

    #[test]
    fn from_sentences_validates_invariants() {
        // Missing subtree.
        let bad = Universe::from_sentences([or(ba("0=0"), ba("0<0"))]);
        assert!(matches!(bad, Err(UniverseError::Invalid(_))));
        // Truth atom with unassigned code.
        let bad = Universe::from_sentences([Sentence::TAtom(GodelNumber::from(5))]);
        assert!(matches!(bad, Err(UniverseError::Invalid(_))));
        // Truth atom without its negation.
        let c = code_of(&ba("0=0"));
        let bad = Universe::from_sentences([ba("0=0"), Sentence::TAtom(c.clone())]);
        assert!(matches!(bad, Err(UniverseError::Invalid(_))));
        // All invariants satisfied.
        let ok = Universe::from_sentences([
            ba("0=0"),
            Sentence::TAtom(c.clone()),
            not(Sentence::TAtom(c)),
        ])
        .unwrap();
        assert_eq!(ok.len(), 3);
        assert_eq!(ok.w().len(), 1);
    }

    #[test]
    fn binary_shapes_all_present_at_depth_one() {
        let u = f1();
        for mk in [or, and, implies, iff] {
            assert!(u.contains(&mk(ba("0=0"), ba("0<0"))));
            assert!(u.contains(&mk(Sentence::ExistsT, ba("0=0"))));
        }
        assert!(u.contains(&not(not(Sentence::TAtom(code_of(&ba("0=0")))))));
    }
}
