//! The grounding operator.
//!
//! From a code set `U` the operator produces the truth set `G(U)` and the
//! falsity set `F(U)`. The base step puts in the true base sentences `W`,
//! the truth atoms induced by members of `U` (and negated truth atoms
//! induced by negated members), and the quantified truth sentences that
//! the shape of `U` already settles. Nine connective rules then close the
//! set round by round: a disjunction enters when a disjunct is in, a
//! negated conjunction when a negated conjunct is in, a double negation
//! when the kernel is in, and so on. On a finite universe the rounds
//! stabilize exactly at the operator's closure, and
//! `F(U) = { #A : #[¬A] ∈ G(U) }`.
//!
//! Rules are evaluated by scanning the universe's compounds and testing
//! their parts' membership, never by constructing new sentences, so the
//! operator is a self-map on subsets of the universe's codes and each
//! round costs one pass over the rule tables.

use rayon::prelude::*;
use thiserror::Error;

use crate::syntax::GodelNumber;
use crate::universe::{CodeSet, Shape, Universe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("connective rule index {0} is outside 1..=9")]
    InvalidRule(u8),
}

/// Codes added in one closure round, tagged with the rule that fired.
/// Rule 0 is the base step.
#[derive(Debug, Clone)]
pub struct RoundDelta {
    pub round: usize,
    pub additions: Vec<(GodelNumber, u8)>,
}

#[derive(Debug, Clone)]
pub struct OperatorResult {
    pub g: CodeSet,
    pub f: CodeSet,
    /// Closure rounds run until stabilization, the final empty round
    /// included; at least 1.
    pub rounds: usize,
    pub per_round: Option<Vec<RoundDelta>>,
}

/// Membership condition of one rule-table entry. Absent parts (negations
/// the universe does not contain) never hold.
#[derive(Debug, Clone, Copy)]
enum Cond {
    Any(Option<u32>, Option<u32>),
    All(Option<u32>, Option<u32>),
    EitherPair([Option<u32>; 2], [Option<u32>; 2]),
    One(u32),
}

impl Cond {
    fn holds(&self, marks: &[bool]) -> bool {
        let m = |o: &Option<u32>| o.map(|i| marks[i as usize]).unwrap_or(false);
        match self {
            Cond::Any(a, b) => m(a) || m(b),
            Cond::All(a, b) => m(a) && m(b),
            Cond::EitherPair(p, q) => (m(&p[0]) && m(&p[1])) || (m(&q[0]) && m(&q[1])),
            Cond::One(i) => marks[*i as usize],
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    target: u32,
    cond: Cond,
}

struct Quantified {
    exists_t: Option<u32>,
    forall_t: Option<u32>,
    exists_not_t: Option<u32>,
    forall_not_t: Option<u32>,
    not_exists_t: Option<u32>,
    not_forall_t: Option<u32>,
    not_exists_not_t: Option<u32>,
    not_forall_not_t: Option<u32>,
}

pub struct TruthOperator<'u> {
    u: &'u Universe,
    w_indices: Vec<u32>,
    /// Per member `A`: index of `T(⌈A⌉)` when the universe contains it.
    t_atom_of: Vec<Option<u32>>,
    /// Per member shaped `¬A`: index of `¬T(⌈A⌉)` when present.
    neg_t_atom_of: Vec<Option<u32>>,
    /// Per member shaped `¬A`: index of the kernel `A`.
    not_inner: Vec<Option<u32>>,
    q: Quantified,
    rules: [Vec<Entry>; 9],
}

impl<'u> TruthOperator<'u> {
    pub fn new(u: &'u Universe) -> Self {
        let n = u.len();
        let neg = |i: usize| u.neg_index_at(i).map(|x| x as u32);

        let mut t_atom_of = vec![None; n];
        let mut neg_t_atom_of = vec![None; n];
        let mut not_inner = vec![None; n];
        let mut rules: [Vec<Entry>; 9] = Default::default();
        let mut q = Quantified {
            exists_t: None,
            forall_t: None,
            exists_not_t: None,
            forall_not_t: None,
            not_exists_t: None,
            not_forall_t: None,
            not_exists_not_t: None,
            not_forall_not_t: None,
        };

        for i in 0..n {
            if let Shape::TAtom { source } = u.shape_at(i) {
                t_atom_of[source] = Some(i as u32);
            }
        }

        for i in 0..n {
            let target = i as u32;
            match u.shape_at(i) {
                Shape::Or { l, r } => rules[0].push(Entry {
                    target,
                    cond: Cond::Any(Some(l as u32), Some(r as u32)),
                }),
                Shape::And { l, r } => rules[1].push(Entry {
                    target,
                    cond: Cond::All(Some(l as u32), Some(r as u32)),
                }),
                Shape::Implies { l, r } => rules[2].push(Entry {
                    target,
                    cond: Cond::Any(neg(l), Some(r as u32)),
                }),
                Shape::Iff { l, r } => rules[3].push(Entry {
                    target,
                    cond: Cond::EitherPair([Some(l as u32), Some(r as u32)], [neg(l), neg(r)]),
                }),
                Shape::Not { inner } => {
                    not_inner[i] = Some(inner as u32);
                    neg_t_atom_of[i] = t_atom_of[inner].and_then(|t| neg(t as usize));
                    match u.shape_at(inner) {
                        Shape::Or { l, r } => rules[4].push(Entry {
                            target,
                            cond: Cond::All(neg(l), neg(r)),
                        }),
                        Shape::And { l, r } => rules[5].push(Entry {
                            target,
                            cond: Cond::Any(neg(l), neg(r)),
                        }),
                        Shape::Implies { l, r } => rules[6].push(Entry {
                            target,
                            cond: Cond::All(Some(l as u32), neg(r)),
                        }),
                        Shape::Iff { l, r } => rules[7].push(Entry {
                            target,
                            cond: Cond::EitherPair(
                                [Some(l as u32), neg(r)],
                                [neg(l), Some(r as u32)],
                            ),
                        }),
                        Shape::Not { inner: kernel } => rules[8].push(Entry {
                            target,
                            cond: Cond::One(kernel as u32),
                        }),
                        _ => {}
                    }
                }
                Shape::ExistsT => q.exists_t = Some(i as u32),
                Shape::ForallT => q.forall_t = Some(i as u32),
                Shape::ExistsNotT => q.exists_not_t = Some(i as u32),
                Shape::ForallNotT => q.forall_not_t = Some(i as u32),
                Shape::BaseLeaf | Shape::TAtom { .. } => {}
            }
        }
        q.not_exists_t = q.exists_t.and_then(|i| neg(i as usize));
        q.not_forall_t = q.forall_t.and_then(|i| neg(i as usize));
        q.not_exists_not_t = q.exists_not_t.and_then(|i| neg(i as usize));
        q.not_forall_not_t = q.forall_not_t.and_then(|i| neg(i as usize));

        let w_indices: Vec<u32> = (0..n)
            .filter(|&i| u.w().contains(u.code_at(i)))
            .map(|i| i as u32)
            .collect();

        TruthOperator {
            u,
            w_indices,
            t_atom_of,
            neg_t_atom_of,
            not_inner,
            q,
            rules,
        }
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    fn to_marks(&self, set: &CodeSet) -> Vec<bool> {
        let mut marks = vec![false; self.u.len()];
        for code in set {
            if let Some(i) = self.u.index_of_code(code) {
                marks[i] = true;
            } else {
                debug_assert!(false, "code {code} is not in the universe");
            }
        }
        marks
    }

    fn to_codeset(&self, marks: &[bool]) -> CodeSet {
        marks
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| self.u.code_at(i).clone())
            .collect()
    }

    /// Truth atoms induced by members: `{ #T(n) : n ∈ U, T(n) in the universe }`.
    pub fn d1(&self, set: &CodeSet) -> CodeSet {
        let marks = self.to_marks(set);
        let mut out = CodeSet::new();
        for (i, &m) in marks.iter().enumerate() {
            if m {
                if let Some(t) = self.t_atom_of[i] {
                    out.insert(self.u.code_at(t as usize).clone());
                }
            }
        }
        out
    }

    /// Negated truth atoms induced by negated members:
    /// `{ #[¬T(⌈A⌉)] : #[¬A] ∈ U, ¬T(⌈A⌉) in the universe }`.
    pub fn d2(&self, set: &CodeSet) -> CodeSet {
        let marks = self.to_marks(set);
        let mut out = CodeSet::new();
        for (i, &m) in marks.iter().enumerate() {
            if m {
                if let Some(t) = self.neg_t_atom_of[i] {
                    out.insert(self.u.code_at(t as usize).clone());
                }
            }
        }
        out
    }

    fn g0_marks(&self, u_marks: &[bool], additions: &mut Vec<(u32, u8)>) -> Vec<bool> {
        let n = self.u.len();
        let u_count = u_marks.iter().filter(|&&m| m).count();
        let mut g = vec![false; n];
        let add = |i: u32, additions: &mut Vec<(u32, u8)>, g: &mut Vec<bool>| {
            if !g[i as usize] {
                g[i as usize] = true;
                additions.push((i, 0));
            }
        };
        for &i in &self.w_indices {
            add(i, additions, &mut g);
        }
        if u_count == 0 {
            return g;
        }

        let mut d1_targets: Vec<u32> = Vec::new();
        let mut d2_targets: Vec<u32> = Vec::new();
        for (i, &m) in u_marks.iter().enumerate() {
            if m {
                if let Some(t) = self.t_atom_of[i] {
                    d1_targets.push(t);
                }
                if let Some(t) = self.neg_t_atom_of[i] {
                    d2_targets.push(t);
                }
            }
        }
        for &t in &d1_targets {
            add(t, additions, &mut g);
        }

        if u_count == n {
            // The whole code domain: every quantified truth sentence and
            // its negation enters at once.
            for &t in &d2_targets {
                add(t, additions, &mut g);
            }
            for t in [
                self.q.exists_t,
                self.q.not_exists_t,
                self.q.forall_t,
                self.q.not_forall_t,
                self.q.forall_not_t,
                self.q.not_forall_not_t,
                self.q.exists_not_t,
                self.q.not_exists_not_t,
            ]
            .into_iter()
            .flatten()
            {
                add(t, additions, &mut g);
            }
            return g;
        }

        // Proper nonempty U: something is taken true, so `Ex T(x)` holds
        // and `Ax !T(x)` fails.
        for t in [self.q.exists_t, self.q.not_forall_not_t]
            .into_iter()
            .flatten()
        {
            add(t, additions, &mut g);
        }
        if !d2_targets.is_empty() {
            // Something is taken false as well: `Ax T(x)` fails and
            // `Ex !T(x)` holds.
            for &t in &d2_targets {
                add(t, additions, &mut g);
            }
            for t in [self.q.not_forall_t, self.q.exists_not_t]
                .into_iter()
                .flatten()
            {
                add(t, additions, &mut g);
            }
        }
        g
    }

    /// The base step, dispatching on the shape of `U`.
    pub fn g0(&self, set: &CodeSet) -> CodeSet {
        let u_marks = self.to_marks(set);
        let mut adds = Vec::new();
        let g = self.g0_marks(&u_marks, &mut adds);
        self.to_codeset(&g)
    }

    /// The k-th connective rule set over `gn`, k in 1..=9.
    pub fn connective_step(&self, gn: &CodeSet, k: u8) -> Result<CodeSet, OperatorError> {
        if !(1..=9).contains(&k) {
            return Err(OperatorError::InvalidRule(k));
        }
        let marks = self.to_marks(gn);
        let mut out = CodeSet::new();
        for e in &self.rules[(k - 1) as usize] {
            if e.cond.holds(&marks) {
                out.insert(self.u.code_at(e.target as usize).clone());
            }
        }
        Ok(out)
    }

    /// One closure round: `gn` united with all nine rule sets over `gn`.
    pub fn g_next(&self, gn: &CodeSet) -> CodeSet {
        let marks = self.to_marks(gn);
        let mut out = gn.clone();
        for table in &self.rules {
            for e in table {
                if e.cond.holds(&marks) {
                    out.insert(self.u.code_at(e.target as usize).clone());
                }
            }
        }
        out
    }

    fn run(&self, set: &CodeSet, trace: bool) -> OperatorResult {
        let u_marks = self.to_marks(set);
        let mut adds0 = Vec::new();
        let mut g = self.g0_marks(&u_marks, &mut adds0);
        let mut per_round: Vec<RoundDelta> = Vec::new();
        if trace {
            // Member indices follow code order, so index order is the
            // canonical export order.
            adds0.sort();
            per_round.push(RoundDelta {
                round: 0,
                additions: self.describe(&adds0),
            });
        }
        let mut rounds = 0;
        loop {
            rounds += 1;
            // Rule conditions read the round-start snapshot; the nine
            // scans are independent and their target shapes disjoint.
            let deltas: Vec<Vec<(u32, u8)>> = self
                .rules
                .par_iter()
                .enumerate()
                .map(|(ki, table)| {
                    let mut hits = Vec::new();
                    for e in table {
                        if !g[e.target as usize] && e.cond.holds(&g) {
                            hits.push((e.target, (ki + 1) as u8));
                        }
                    }
                    hits
                })
                .collect();
            let mut round_adds: Vec<(u32, u8)> = deltas.into_iter().flatten().collect();
            if round_adds.is_empty() {
                break;
            }
            round_adds.sort_by_key(|&(t, k)| (k, t));
            for &(t, _) in &round_adds {
                g[t as usize] = true;
            }
            if trace {
                per_round.push(RoundDelta {
                    round: rounds,
                    additions: self.describe(&round_adds),
                });
            }
        }

        let mut f = vec![false; self.u.len()];
        for (i, &m) in g.iter().enumerate() {
            if m {
                if let Some(inner) = self.not_inner[i] {
                    f[inner as usize] = true;
                }
            }
        }

        OperatorResult {
            g: self.to_codeset(&g),
            f: self.to_codeset(&f),
            rounds,
            per_round: trace.then_some(per_round),
        }
    }

    fn describe(&self, adds: &[(u32, u8)]) -> Vec<(GodelNumber, u8)> {
        adds.iter()
            .map(|&(i, k)| (self.u.code_at(i as usize).clone(), k))
            .collect()
    }

    /// The full closure `G(U)` together with `F(U)` and the round count.
    pub fn g(&self, set: &CodeSet) -> OperatorResult {
        self.run(set, false)
    }

    /// Like [`TruthOperator::g`] but records per-round additions.
    pub fn g_traced(&self, set: &CodeSet) -> OperatorResult {
        self.run(set, true)
    }

    /// `F(U) = { #A : #[¬A] ∈ G(U) }`, restricted to the universe.
    pub fn f(&self, set: &CodeSet) -> CodeSet {
        self.run(set, false).f
    }
}

/// Machine-readable trace: `round<TAB>rule<TAB>code` per addition.
pub fn export_operator_trace(r: &OperatorResult) -> String {
    let mut out = String::new();
    if let Some(rounds) = &r.per_round {
        for rd in rounds {
            for (code, k) in &rd.additions {
                out.push_str(&format!("{}\t{}\t{}\n", rd.round, k, code));
            }
        }
    }
    out
}
