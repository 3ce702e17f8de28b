//! The interpreted arithmetic base language.
//!
//! Terms are built from numerals, variables, successor, addition and
//! multiplication; atomic formulas are `t=t` and `t<t`; formulas close
//! under the five classical connectives and the bounded quantifiers
//! `(Ax<t)φ` and `(Ex<t)φ`. Every sentence (closed formula) is decided
//! by finite search below the quantifier bounds, so the evaluator is
//! total and the set of true base sentences is computable.
//!
//! The evaluator is one instance of the pluggable base-language
//! interface the rest of the crate is parametric in: anything providing
//! a bivalent `eval` plus a deterministic enumeration would do.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::coding::{pair, pair_tag};
use crate::lex::{lex, LexError, Lexed, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseTerm {
    Num(u64),
    Var(char),
    Succ(Box<BaseTerm>),
    Add(Box<BaseTerm>, Box<BaseTerm>),
    Mul(Box<BaseTerm>, Box<BaseTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseFormula {
    Eq(BaseTerm, BaseTerm),
    Lt(BaseTerm, BaseTerm),
    Not(Box<BaseFormula>),
    Or(Box<BaseFormula>, Box<BaseFormula>),
    And(Box<BaseFormula>, Box<BaseFormula>),
    Implies(Box<BaseFormula>, Box<BaseFormula>),
    Iff(Box<BaseFormula>, Box<BaseFormula>),
    /// `(Ax<t)φ`: every value of the variable below `t` satisfies the body.
    ForallLt(char, BaseTerm, Box<BaseFormula>),
    /// `(Ex<t)φ`: some value of the variable below `t` satisfies the body.
    ExistsLt(char, BaseTerm, Box<BaseFormula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("formula is not a sentence: variable `{var}` occurs free")]
    OpenFormula { var: char },
    #[error("numeral {value} exceeds the configured bound {bound}")]
    NumeralTooLarge { value: u64, bound: u64 },
}

type BinaryCtor = fn(Box<BaseFormula>, Box<BaseFormula>) -> BaseFormula;

impl From<LexError> for BaseError {
    fn from(e: LexError) -> Self {
        BaseError::Parse {
            pos: e.pos,
            msg: e.msg,
        }
    }
}

/// Parameters for building the base fragment of a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseConfig {
    /// Concrete-syntax seed sentences, one formula each.
    pub seed_sentences: Vec<String>,
    /// How many rounds of connective compounding to run over the seeds.
    pub generate_depth: u32,
    /// Largest numeral literal admitted in seed formulas.
    pub numeric_bound: u64,
}

impl Default for BaseConfig {
    fn default() -> Self {
        BaseConfig {
            seed_sentences: Vec::new(),
            generate_depth: 0,
            numeric_bound: 16,
        }
    }
}

impl BaseConfig {
    pub fn with_seeds<S: Into<String>>(seeds: impl IntoIterator<Item = S>) -> Self {
        BaseConfig {
            seed_sentences: seeds.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Default)]
struct Env {
    vals: [Option<u64>; 26],
}

impl Env {
    fn get(&self, v: char) -> Option<u64> {
        self.vals[(v as u8 - b'a') as usize]
    }
    fn set(&mut self, v: char, n: Option<u64>) -> Option<u64> {
        std::mem::replace(&mut self.vals[(v as u8 - b'a') as usize], n)
    }
}

fn eval_term(t: &BaseTerm, env: &Env) -> Result<u64, BaseError> {
    Ok(match t {
        BaseTerm::Num(n) => *n,
        BaseTerm::Var(v) => env.get(*v).ok_or(BaseError::OpenFormula { var: *v })?,
        BaseTerm::Succ(t) => eval_term(t, env)?.saturating_add(1),
        BaseTerm::Add(l, r) => eval_term(l, env)?.saturating_add(eval_term(r, env)?),
        BaseTerm::Mul(l, r) => eval_term(l, env)?.saturating_mul(eval_term(r, env)?),
    })
}

fn eval_in(f: &BaseFormula, env: &mut Env) -> Result<bool, BaseError> {
    Ok(match f {
        BaseFormula::Eq(l, r) => eval_term(l, env)? == eval_term(r, env)?,
        BaseFormula::Lt(l, r) => eval_term(l, env)? < eval_term(r, env)?,
        BaseFormula::Not(g) => !eval_in(g, env)?,
        BaseFormula::Or(l, r) => eval_in(l, env)? | eval_in(r, env)?,
        BaseFormula::And(l, r) => eval_in(l, env)? & eval_in(r, env)?,
        BaseFormula::Implies(l, r) => !eval_in(l, env)? | eval_in(r, env)?,
        BaseFormula::Iff(l, r) => eval_in(l, env)? == eval_in(r, env)?,
        BaseFormula::ForallLt(v, t, body) => {
            let bound = eval_term(t, env)?;
            let mut all = true;
            let saved = env.set(*v, None);
            for i in 0..bound {
                env.set(*v, Some(i));
                if !eval_in(body, env)? {
                    all = false;
                    break;
                }
            }
            env.set(*v, saved);
            all
        }
        BaseFormula::ExistsLt(v, t, body) => {
            let bound = eval_term(t, env)?;
            let mut some = false;
            let saved = env.set(*v, None);
            for i in 0..bound {
                env.set(*v, Some(i));
                if eval_in(body, env)? {
                    some = true;
                    break;
                }
            }
            env.set(*v, saved);
            some
        }
    })
}

/// Classical truth value of a closed base formula.
///
/// Total on sentences; open formulas are rejected up front.
pub fn eval_base(f: &BaseFormula) -> Result<bool, BaseError> {
    if let Some(v) = free_vars(f).into_iter().next() {
        return Err(BaseError::OpenFormula { var: v });
    }
    eval_in(f, &mut Env::default())
}

fn term_vars(t: &BaseTerm, out: &mut BTreeSet<char>) {
    match t {
        BaseTerm::Num(_) => {}
        BaseTerm::Var(v) => {
            out.insert(*v);
        }
        BaseTerm::Succ(t) => term_vars(t, out),
        BaseTerm::Add(l, r) | BaseTerm::Mul(l, r) => {
            term_vars(l, out);
            term_vars(r, out);
        }
    }
}

/// Free variables of a formula, in alphabetical order.
pub fn free_vars(f: &BaseFormula) -> BTreeSet<char> {
    fn walk(f: &BaseFormula, bound: &mut Vec<char>, out: &mut BTreeSet<char>) {
        match f {
            BaseFormula::Eq(l, r) | BaseFormula::Lt(l, r) => {
                let mut vs = BTreeSet::new();
                term_vars(l, &mut vs);
                term_vars(r, &mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            BaseFormula::Not(g) => walk(g, bound, out),
            BaseFormula::Or(l, r)
            | BaseFormula::And(l, r)
            | BaseFormula::Implies(l, r)
            | BaseFormula::Iff(l, r) => {
                walk(l, bound, out);
                walk(r, bound, out);
            }
            BaseFormula::ForallLt(v, t, body) | BaseFormula::ExistsLt(v, t, body) => {
                // The bound term is outside the binder's scope.
                let mut vs = BTreeSet::new();
                term_vars(t, &mut vs);
                out.extend(vs.into_iter().filter(|w| !bound.contains(w)));
                bound.push(*v);
                walk(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(f, &mut Vec::new(), &mut out);
    out
}

/// Substitute `val` for free occurrences of `var`.
pub fn subst(f: &BaseFormula, var: char, val: u64) -> BaseFormula {
    fn in_term(t: &BaseTerm, var: char, val: u64) -> BaseTerm {
        match t {
            BaseTerm::Num(n) => BaseTerm::Num(*n),
            BaseTerm::Var(v) if *v == var => BaseTerm::Num(val),
            BaseTerm::Var(v) => BaseTerm::Var(*v),
            BaseTerm::Succ(t) => BaseTerm::Succ(Box::new(in_term(t, var, val))),
            BaseTerm::Add(l, r) => BaseTerm::Add(
                Box::new(in_term(l, var, val)),
                Box::new(in_term(r, var, val)),
            ),
            BaseTerm::Mul(l, r) => BaseTerm::Mul(
                Box::new(in_term(l, var, val)),
                Box::new(in_term(r, var, val)),
            ),
        }
    }
    match f {
        BaseFormula::Eq(l, r) => BaseFormula::Eq(in_term(l, var, val), in_term(r, var, val)),
        BaseFormula::Lt(l, r) => BaseFormula::Lt(in_term(l, var, val), in_term(r, var, val)),
        BaseFormula::Not(g) => BaseFormula::Not(Box::new(subst(g, var, val))),
        BaseFormula::Or(l, r) => {
            BaseFormula::Or(Box::new(subst(l, var, val)), Box::new(subst(r, var, val)))
        }
        BaseFormula::And(l, r) => {
            BaseFormula::And(Box::new(subst(l, var, val)), Box::new(subst(r, var, val)))
        }
        BaseFormula::Implies(l, r) => {
            BaseFormula::Implies(Box::new(subst(l, var, val)), Box::new(subst(r, var, val)))
        }
        BaseFormula::Iff(l, r) => {
            BaseFormula::Iff(Box::new(subst(l, var, val)), Box::new(subst(r, var, val)))
        }
        BaseFormula::ForallLt(v, t, body) => {
            let t = in_term(t, var, val);
            let body = if *v == var {
                body.clone() // shadowed
            } else {
                Box::new(subst(body, var, val))
            };
            BaseFormula::ForallLt(*v, t, body)
        }
        BaseFormula::ExistsLt(v, t, body) => {
            let t = in_term(t, var, val);
            let body = if *v == var {
                body.clone()
            } else {
                Box::new(subst(body, var, val))
            };
            BaseFormula::ExistsLt(*v, t, body)
        }
    }
}

// ---------------------------------------------------------------------------
// Enumeration

/// Deterministic finite list of base sentences: the seeds first, then the
/// connective compounds of each generation round in code order.
pub fn enumerate_base(cfg: &BaseConfig) -> Result<Vec<BaseFormula>, BaseError> {
    let mut all: Vec<BaseFormula> = Vec::new();
    for line in &cfg.seed_sentences {
        let f = parse_base(line)?;
        check_numeric_bound(&f, cfg.numeric_bound)?;
        if let Some(v) = free_vars(&f).into_iter().next() {
            return Err(BaseError::OpenFormula { var: v });
        }
        if !all.contains(&f) {
            all.push(f);
        }
    }
    for _ in 0..cfg.generate_depth {
        let pool = all.clone();
        let mut level: Vec<BaseFormula> = Vec::new();
        let push = |f: BaseFormula, all: &[BaseFormula], level: &mut Vec<BaseFormula>| {
            if !all.contains(&f) && !level.contains(&f) {
                level.push(f);
            }
        };
        for f in &pool {
            push(BaseFormula::Not(Box::new(f.clone())), &all, &mut level);
        }
        for l in &pool {
            for r in &pool {
                for mk in [
                    BaseFormula::Or,
                    BaseFormula::And,
                    BaseFormula::Implies,
                    BaseFormula::Iff,
                ] {
                    push(
                        mk(Box::new(l.clone()), Box::new(r.clone())),
                        &all,
                        &mut level,
                    );
                }
            }
        }
        level.sort_by_key(base_code);
        all.extend(level);
    }
    Ok(all)
}

fn check_numeric_bound(f: &BaseFormula, bound: u64) -> Result<(), BaseError> {
    fn in_term(t: &BaseTerm, bound: u64) -> Result<(), BaseError> {
        match t {
            BaseTerm::Num(n) if *n > bound => Err(BaseError::NumeralTooLarge { value: *n, bound }),
            BaseTerm::Num(_) | BaseTerm::Var(_) => Ok(()),
            BaseTerm::Succ(t) => in_term(t, bound),
            BaseTerm::Add(l, r) | BaseTerm::Mul(l, r) => {
                in_term(l, bound)?;
                in_term(r, bound)
            }
        }
    }
    match f {
        BaseFormula::Eq(l, r) | BaseFormula::Lt(l, r) => {
            in_term(l, bound)?;
            in_term(r, bound)
        }
        BaseFormula::Not(g) => check_numeric_bound(g, bound),
        BaseFormula::Or(l, r)
        | BaseFormula::And(l, r)
        | BaseFormula::Implies(l, r)
        | BaseFormula::Iff(l, r) => {
            check_numeric_bound(l, bound)?;
            check_numeric_bound(r, bound)
        }
        BaseFormula::ForallLt(_, t, body) | BaseFormula::ExistsLt(_, t, body) => {
            in_term(t, bound)?;
            check_numeric_bound(body, bound)
        }
    }
}

// ---------------------------------------------------------------------------
// Classical-semantics self-check

/// Outcome of [`check_classical_properties`].
#[derive(Debug, Clone, Default)]
pub struct ClassicalReport {
    pub pairs_checked: usize,
    pub quantifier_checks: usize,
    pub violations: Vec<String>,
}

impl ClassicalReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `eval_base` respects the five classical truth tables on
/// every sampled pair and, for bounded-quantified sentences, that the
/// quantifiers agree with direct finite search by substitution. The
/// substitution route shares no state with the environment-based
/// evaluator, so it acts as an independent oracle.
pub fn check_classical_properties(
    sample: &[(BaseFormula, BaseFormula)],
) -> Result<ClassicalReport, BaseError> {
    let mut report = ClassicalReport::default();
    let violate = |report: &mut ClassicalReport, what: String| {
        report.violations.push(what);
    };
    for (a, b) in sample {
        let va = eval_base(a)?;
        let vb = eval_base(b)?;
        let cases: [(&str, BaseFormula, bool); 5] = [
            ("negation", BaseFormula::Not(Box::new(a.clone())), !va),
            (
                "disjunction",
                BaseFormula::Or(Box::new(a.clone()), Box::new(b.clone())),
                va || vb,
            ),
            (
                "conjunction",
                BaseFormula::And(Box::new(a.clone()), Box::new(b.clone())),
                va && vb,
            ),
            (
                "implication",
                BaseFormula::Implies(Box::new(a.clone()), Box::new(b.clone())),
                !va || vb,
            ),
            (
                "biconditional",
                BaseFormula::Iff(Box::new(a.clone()), Box::new(b.clone())),
                va == vb,
            ),
        ];
        for (name, compound, want) in cases {
            if eval_base(&compound)? != want {
                violate(
                    &mut report,
                    format!("{name} truth table fails on `{}`", render_base(&compound)),
                );
            }
        }
        report.pairs_checked += 1;
        for f in [a, b] {
            match f {
                BaseFormula::ForallLt(v, t, body) => {
                    let bound = eval_term(t, &Env::default())?;
                    let want = (0..bound)
                        .map(|i| eval_base(&subst(body, *v, i)))
                        .collect::<Result<Vec<_>, _>>()?
                        .into_iter()
                        .all(|x| x);
                    if eval_base(f)? != want {
                        violate(
                            &mut report,
                            format!("universal quantifier rule fails on `{}`", render_base(f)),
                        );
                    }
                    report.quantifier_checks += 1;
                }
                BaseFormula::ExistsLt(v, t, body) => {
                    let bound = eval_term(t, &Env::default())?;
                    let want = (0..bound)
                        .map(|i| eval_base(&subst(body, *v, i)))
                        .collect::<Result<Vec<_>, _>>()?
                        .into_iter()
                        .any(|x| x);
                    if eval_base(f)? != want {
                        violate(
                            &mut report,
                            format!("existential quantifier rule fails on `{}`", render_base(f)),
                        );
                    }
                    report.quantifier_checks += 1;
                }
                _ => {}
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Structural code

/// Injective structural code of a base formula; stable across runs.
pub(crate) fn base_code(f: &BaseFormula) -> BigUint {
    fn term_code(t: &BaseTerm) -> BigUint {
        match t {
            BaseTerm::Num(n) => pair_tag(0, &BigUint::from(*n)),
            BaseTerm::Var(v) => pair_tag(1, &BigUint::from((*v as u8 - b'a') as u32)),
            BaseTerm::Succ(t) => pair_tag(2, &term_code(t)),
            BaseTerm::Add(l, r) => pair_tag(3, &pair(&term_code(l), &term_code(r))),
            BaseTerm::Mul(l, r) => pair_tag(4, &pair(&term_code(l), &term_code(r))),
        }
    }
    match f {
        BaseFormula::Eq(l, r) => pair_tag(0, &pair(&term_code(l), &term_code(r))),
        BaseFormula::Lt(l, r) => pair_tag(1, &pair(&term_code(l), &term_code(r))),
        BaseFormula::Not(g) => pair_tag(2, &base_code(g)),
        BaseFormula::Or(l, r) => pair_tag(3, &pair(&base_code(l), &base_code(r))),
        BaseFormula::And(l, r) => pair_tag(4, &pair(&base_code(l), &base_code(r))),
        BaseFormula::Implies(l, r) => pair_tag(5, &pair(&base_code(l), &base_code(r))),
        BaseFormula::Iff(l, r) => pair_tag(6, &pair(&base_code(l), &base_code(r))),
        BaseFormula::ForallLt(v, t, body) => pair_tag(
            7,
            &pair(
                &BigUint::from((*v as u8 - b'a') as u32),
                &pair(&term_code(t), &base_code(body)),
            ),
        ),
        BaseFormula::ExistsLt(v, t, body) => pair_tag(
            8,
            &pair(
                &BigUint::from((*v as u8 - b'a') as u32),
                &pair(&term_code(t), &base_code(body)),
            ),
        ),
    }
}

/// True when the formula's top constructor is not one of the five
/// connectives shared with the sentence language, i.e. when it stays a
/// single leaf after lifting.
pub fn is_base_atomic(f: &BaseFormula) -> bool {
    matches!(
        f,
        BaseFormula::Eq(..)
            | BaseFormula::Lt(..)
            | BaseFormula::ForallLt(..)
            | BaseFormula::ExistsLt(..)
    )
}

// ---------------------------------------------------------------------------
// Concrete syntax

pub fn render_base(f: &BaseFormula) -> String {
    fn term(t: &BaseTerm) -> String {
        match t {
            BaseTerm::Num(n) => n.to_string(),
            BaseTerm::Var(v) => v.to_string(),
            BaseTerm::Succ(t) => format!("S({})", term(t)),
            BaseTerm::Add(l, r) => format!("({}+{})", term(l), term(r)),
            BaseTerm::Mul(l, r) => format!("({}*{})", term(l), term(r)),
        }
    }
    match f {
        BaseFormula::Eq(l, r) => format!("{}={}", term(l), term(r)),
        BaseFormula::Lt(l, r) => format!("{}<{}", term(l), term(r)),
        BaseFormula::Not(g) => format!("!({})", render_base(g)),
        BaseFormula::Or(l, r) => format!("({} | {})", render_base(l), render_base(r)),
        BaseFormula::And(l, r) => format!("({} & {})", render_base(l), render_base(r)),
        BaseFormula::Implies(l, r) => format!("({} -> {})", render_base(l), render_base(r)),
        BaseFormula::Iff(l, r) => format!("({} <-> {})", render_base(l), render_base(r)),
        BaseFormula::ForallLt(v, t, body) => {
            format!("(A{}<{})({})", v, term(t), render_base(body))
        }
        BaseFormula::ExistsLt(v, t, body) => {
            format!("(E{}<{})({})", v, term(t), render_base(body))
        }
    }
}

impl fmt::Display for BaseFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_base(self))
    }
}

pub fn parse_base(text: &str) -> Result<BaseFormula, BaseError> {
    let lexed = lex(text)?;
    let mut p = BaseParser::new(&lexed);
    let f = p.formula_toplevel()?;
    p.expect_eof()?;
    Ok(f)
}

pub(crate) struct BaseParser<'a> {
    lexed: &'a Lexed,
    pub(crate) idx: usize,
}

impl<'a> BaseParser<'a> {
    pub(crate) fn new(lexed: &'a Lexed) -> Self {
        BaseParser { lexed, idx: 0 }
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T, BaseError> {
        Err(BaseError::Parse {
            pos: self.lexed.offsets[self.idx.min(self.lexed.offsets.len() - 1)],
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<Tok> {
        self.lexed.toks.get(self.idx).cloned()
    }

    fn peek2(&self) -> Option<Tok> {
        self.lexed.toks.get(self.idx + 1).cloned()
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, t: Tok) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), BaseError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), BaseError> {
        if self.idx == self.lexed.toks.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn binary_op(&self) -> Option<BinaryCtor> {
        match self.peek()? {
            Tok::Pipe => Some(BaseFormula::Or),
            Tok::Amp => Some(BaseFormula::And),
            Tok::Arrow => Some(BaseFormula::Implies),
            Tok::DArrow => Some(BaseFormula::Iff),
            _ => None,
        }
    }

    /// One formula, then optionally a bare top-level binary connective.
    pub(crate) fn formula_toplevel(&mut self) -> Result<BaseFormula, BaseError> {
        let l = self.formula_unit()?;
        if let Some(mk) = self.binary_op() {
            self.bump();
            let r = self.formula_unit()?;
            return Ok(mk(Box::new(l), Box::new(r)));
        }
        Ok(l)
    }

    pub(crate) fn formula_unit(&mut self) -> Result<BaseFormula, BaseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(BaseFormula::Not(Box::new(self.formula_unit()?)))
            }
            Some(Tok::LParen) => self.paren_form(),
            Some(_) => self.atom(),
            None => self.err("expected a formula"),
        }
    }

    fn paren_form(&mut self) -> Result<BaseFormula, BaseError> {
        match self.peek2() {
            Some(Tok::Forall(v)) | Some(Tok::Exists(v)) => {
                let existential = matches!(self.peek2(), Some(Tok::Exists(_)));
                self.bump(); // (
                self.bump(); // quantifier
                self.expect(Tok::Lt, "`<` after the quantified variable")?;
                let bound = self.term()?;
                self.expect(Tok::RParen, "`)` closing the quantifier")?;
                let body = Box::new(self.formula_unit()?);
                return Ok(if existential {
                    BaseFormula::ExistsLt(v, bound, body)
                } else {
                    BaseFormula::ForallLt(v, bound, body)
                });
            }
            _ => {}
        }
        // A `(` may also open a parenthesized term of an atomic formula.
        let save = self.idx;
        if let Ok(f) = self.atom() {
            return Ok(f);
        }
        self.idx = save;
        self.bump(); // (
        let l = self.formula_unit()?;
        if self.eat(Tok::RParen) {
            return Ok(l);
        }
        match self.binary_op() {
            Some(mk) => {
                self.bump();
                let r = self.formula_unit()?;
                self.expect(Tok::RParen, "`)` closing the compound")?;
                Ok(mk(Box::new(l), Box::new(r)))
            }
            None => self.err("expected `)` or a binary connective"),
        }
    }

    fn atom(&mut self) -> Result<BaseFormula, BaseError> {
        let l = self.term()?;
        match self.bump() {
            Some(Tok::Eq) => Ok(BaseFormula::Eq(l, self.term()?)),
            Some(Tok::Lt) => Ok(BaseFormula::Lt(l, self.term()?)),
            _ => self.err("expected `=` or `<`"),
        }
    }

    /// Entry point for embedding atomic base formulas in a host grammar.
    pub(crate) fn formula_atom_entry(&mut self) -> Result<BaseFormula, BaseError> {
        self.atom()
    }

    pub(crate) fn term(&mut self) -> Result<BaseTerm, BaseError> {
        match self.bump() {
            Some(Tok::Num(n)) => match u64::try_from(&n) {
                Ok(n) => Ok(BaseTerm::Num(n)),
                Err(_) => {
                    self.idx -= 1;
                    self.err("numeral too large for a base term")
                }
            },
            Some(Tok::Var(v)) => Ok(BaseTerm::Var(v)),
            Some(Tok::Succ) => {
                self.expect(Tok::LParen, "`(` after `S`")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)` closing `S(`")?;
                Ok(BaseTerm::Succ(Box::new(t)))
            }
            Some(Tok::LParen) => {
                let l = self.term()?;
                let mk = match self.bump() {
                    Some(Tok::Plus) => BaseTerm::Add,
                    Some(Tok::Star) => BaseTerm::Mul,
                    _ => return self.err("expected `+` or `*`"),
                };
                let r = self.term()?;
                self.expect(Tok::RParen, "`)` closing the term")?;
                Ok(mk(Box::new(l), Box::new(r)))
            }
            _ => self.err("expected a term"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(s: &str) -> BaseFormula {
        parse_base(s).unwrap()
    }

    #[test]
    fn eval_trivial_atoms() {
        assert!(eval_base(&bf("0=0")).unwrap());
        assert!(!eval_base(&bf("0<0")).unwrap());
    }

    #[test]
    fn eval_bounded_universal_by_finite_search() {
        // x ranges over {0,1,2}, each below 5.
        assert!(eval_base(&bf("(Ax<3)(x<5)")).unwrap());
        assert!(!eval_base(&bf("(Ax<3)(x<2)")).unwrap());
        assert!(eval_base(&bf("(Ex<3)(x=2)")).unwrap());
        assert!(!eval_base(&bf("(Ex<3)(x=3)")).unwrap());
    }

    #[test]
    fn eval_empty_range_quantifiers() {
        assert!(eval_base(&bf("(Ax<0)(0<0)")).unwrap());
        assert!(!eval_base(&bf("(Ex<0)(0=0)")).unwrap());
    }

    #[test]
    fn eval_nested_quantifiers_and_arithmetic() {
        assert!(eval_base(&bf("(Ax<3)(Ey<4)(y=(x+1))")).unwrap());
        assert!(eval_base(&bf("(S(0)*S(S(0)))=S(S(0))")).unwrap());
        assert!(eval_base(&bf("(Ax<4)((x*x)<16)")).unwrap());
    }

    #[test]
    fn open_formula_is_an_error() {
        assert_eq!(
            eval_base(&bf("x=0")),
            Err(BaseError::OpenFormula { var: 'x' })
        );
    }

    #[test]
    fn shadowed_binder_is_not_free() {
        let f = bf("(Ax<2)(Ex<3)(x=2)");
        assert!(free_vars(&f).is_empty());
        assert!(eval_base(&f).unwrap());
    }

    #[test]
    fn parse_render_round_trip() {
        for s in [
            "0=0",
            "0<0",
            "(Ax<3)(x<5)",
            "!(0=0)",
            "(0=0 | 0<0)",
            "((0+1)=1 & S(0)<2)",
            "(Ax<3)(Ey<x)(y<x)",
            "(0=0 <-> 0=0)",
            "(0=0 -> 0<0)",
        ] {
            let f = bf(s);
            assert_eq!(bf(&render_base(&f)), f, "round trip through `{s}`");
        }
    }

    #[test]
    fn parse_error_carries_position() {
        match parse_base("0=") {
            Err(BaseError::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_depth_zero_is_seeds_only() {
        let cfg = BaseConfig::with_seeds(["0=0", "0<0"]);
        let out = enumerate_base(&cfg).unwrap();
        assert_eq!(out, vec![bf("0=0"), bf("0<0")]);
        // Determinism: same config, same list.
        assert_eq!(enumerate_base(&cfg).unwrap(), out);
    }

    #[test]
    fn enumerate_depth_one_count() {
        // 2 seeds + 2 negations + 4 connectives over 4 ordered pairs = 20.
        let mut cfg = BaseConfig::with_seeds(["0=0", "0<0"]);
        cfg.generate_depth = 1;
        let out = enumerate_base(&cfg).unwrap();
        assert_eq!(out.len(), 20);
        let set: std::collections::HashSet<_> = out.iter().collect();
        assert_eq!(set.len(), 20, "duplicates removed");
    }

    #[test]
    fn enumerate_rejects_out_of_bound_numerals() {
        let mut cfg = BaseConfig::with_seeds(["17=17"]);
        cfg.numeric_bound = 16;
        assert!(matches!(
            enumerate_base(&cfg),
            Err(BaseError::NumeralTooLarge { value: 17, .. })
        ));
    }

    #[test]
    fn classical_properties_hold_on_a_mixed_sample() {
        let sample = vec![
            (bf("0=0"), bf("0<0")),
            (bf("(Ax<3)(x<5)"), bf("(Ex<3)(x=3)")),
            (bf("(Ex<3)(x=2)"), bf("0=0")),
            (bf("(Ax<0)(0<0)"), bf("(Ex<4)((x*x)=4)")),
        ];
        let report = check_classical_properties(&sample).unwrap();
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        assert_eq!(report.pairs_checked, 4);
        assert!(report.quantifier_checks >= 5);
    }

    #[test]
    fn base_code_injective_on_enumeration() {
        let mut cfg = BaseConfig::with_seeds(["0=0", "0<0", "(Ax<3)(x<5)"]);
        cfg.generate_depth = 1;
        let out = enumerate_base(&cfg).unwrap();
        let codes: std::collections::HashSet<_> = out.iter().map(base_code).collect();
        assert_eq!(codes.len(), out.len());
    }
}
