//! Sentence trees for the truth-predicate language, their concrete syntax,
//! and the fixed Gödel numbering.
//!
//! A sentence is a base-language sentence, a truth atom `T(n)` over a
//! decimal code, one of the four quantified truth sentences, or a
//! connective compound. Sentences of the base language appear as
//! connective trees over atomic leaves, so every sentence has exactly one
//! tree and the numbering is injective on sentences rather than on trees.
//!
//! The numbering pairs a constructor tag with the codes of the parts
//! through a strictly dominating pairing map, so the code of a compound
//! strictly exceeds the code of every proper subsentence and the code of
//! `T(n)` strictly exceeds `n`. In particular no sentence can contain its
//! own code, which rules out directly self-referential truth atoms; the
//! fixed-point construction never needs them.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::base_lang::{
    base_code, free_vars, is_base_atomic, render_base, BaseError, BaseFormula, BaseParser,
};
use crate::coding::{pair, pair_tag};
use crate::lex::{lex, Lexed, Tok};

/// A natural number deterministically coding a sentence. Doubles as the
/// numeral denoting that number inside `T(...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GodelNumber(BigUint);

impl GodelNumber {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn from_decimal(s: &str) -> Option<GodelNumber> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Some(GodelNumber(s.parse().ok()?))
    }
}

impl fmt::Display for GodelNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for GodelNumber {
    fn from(n: u64) -> Self {
        GodelNumber(BigUint::from(n))
    }
}

impl From<BigUint> for GodelNumber {
    fn from(n: BigUint) -> Self {
        GodelNumber(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sentence {
    /// A leaf sentence of the base language. Invariant: the formula is
    /// closed and its top constructor is not a connective (connectives
    /// are represented at the sentence level).
    BaseAtom(BaseFormula),
    /// `T(n)` for the numeral of the given code.
    TAtom(GodelNumber),
    /// `Ex T(x)`
    ExistsT,
    /// `Ax T(x)`
    ForallT,
    /// `Ex !T(x)`
    ExistsNotT,
    /// `Ax !T(x)`
    ForallNotT,
    Not(Box<Sentence>),
    Or(Box<Sentence>, Box<Sentence>),
    And(Box<Sentence>, Box<Sentence>),
    Implies(Box<Sentence>, Box<Sentence>),
    Iff(Box<Sentence>, Box<Sentence>),
}

pub fn not(s: Sentence) -> Sentence {
    Sentence::Not(Box::new(s))
}

pub fn or(l: Sentence, r: Sentence) -> Sentence {
    Sentence::Or(Box::new(l), Box::new(r))
}

pub fn and(l: Sentence, r: Sentence) -> Sentence {
    Sentence::And(Box::new(l), Box::new(r))
}

pub fn implies(l: Sentence, r: Sentence) -> Sentence {
    Sentence::Implies(Box::new(l), Box::new(r))
}

pub fn iff(l: Sentence, r: Sentence) -> Sentence {
    Sentence::Iff(Box::new(l), Box::new(r))
}

impl Sentence {
    /// A sentence of the base language: no truth atom and no quantified
    /// truth sentence anywhere in the tree.
    pub fn is_t_free(&self) -> bool {
        match self {
            Sentence::BaseAtom(_) => true,
            Sentence::TAtom(_)
            | Sentence::ExistsT
            | Sentence::ForallT
            | Sentence::ExistsNotT
            | Sentence::ForallNotT => false,
            Sentence::Not(s) => s.is_t_free(),
            Sentence::Or(l, r)
            | Sentence::And(l, r)
            | Sentence::Implies(l, r)
            | Sentence::Iff(l, r) => l.is_t_free() && r.is_t_free(),
        }
    }

    /// All subtrees including the sentence itself, parents before children.
    pub fn subtrees(&self) -> Vec<&Sentence> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            out.push(s);
            match s {
                Sentence::Not(a) => stack.push(a),
                Sentence::Or(l, r)
                | Sentence::And(l, r)
                | Sentence::Implies(l, r)
                | Sentence::Iff(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                _ => {}
            }
        }
        out
    }
}

/// Lifts a base sentence into the sentence language: connectives become
/// sentence-level connectives, everything else becomes an atomic leaf.
pub fn lift_base(f: &BaseFormula) -> Sentence {
    match f {
        BaseFormula::Not(g) => not(lift_base(g)),
        BaseFormula::Or(l, r) => or(lift_base(l), lift_base(r)),
        BaseFormula::And(l, r) => and(lift_base(l), lift_base(r)),
        BaseFormula::Implies(l, r) => implies(lift_base(l), lift_base(r)),
        BaseFormula::Iff(l, r) => iff(lift_base(l), lift_base(r)),
        atomic => {
            debug_assert!(is_base_atomic(atomic));
            Sentence::BaseAtom(atomic.clone())
        }
    }
}

/// Inverse of [`lift_base`]; `None` when the sentence mentions `T`.
pub fn lower_to_base(s: &Sentence) -> Option<BaseFormula> {
    match s {
        Sentence::BaseAtom(f) => Some(f.clone()),
        Sentence::Not(a) => Some(BaseFormula::Not(Box::new(lower_to_base(a)?))),
        Sentence::Or(l, r) => Some(BaseFormula::Or(
            Box::new(lower_to_base(l)?),
            Box::new(lower_to_base(r)?),
        )),
        Sentence::And(l, r) => Some(BaseFormula::And(
            Box::new(lower_to_base(l)?),
            Box::new(lower_to_base(r)?),
        )),
        Sentence::Implies(l, r) => Some(BaseFormula::Implies(
            Box::new(lower_to_base(l)?),
            Box::new(lower_to_base(r)?),
        )),
        Sentence::Iff(l, r) => Some(BaseFormula::Iff(
            Box::new(lower_to_base(l)?),
            Box::new(lower_to_base(r)?),
        )),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Gödel coding

fn code_big(s: &Sentence) -> BigUint {
    match s {
        Sentence::BaseAtom(f) => pair_tag(0, &base_code(f)),
        Sentence::TAtom(n) => pair_tag(1, &n.0),
        Sentence::ExistsT => pair_tag(2, &BigUint::from(0u32)),
        Sentence::ForallT => pair_tag(3, &BigUint::from(0u32)),
        Sentence::ExistsNotT => pair_tag(4, &BigUint::from(0u32)),
        Sentence::ForallNotT => pair_tag(5, &BigUint::from(0u32)),
        Sentence::Not(a) => pair_tag(6, &code_big(a)),
        Sentence::Or(l, r) => pair_tag(7, &pair(&code_big(l), &code_big(r))),
        Sentence::And(l, r) => pair_tag(8, &pair(&code_big(l), &code_big(r))),
        Sentence::Implies(l, r) => pair_tag(9, &pair(&code_big(l), &code_big(r))),
        Sentence::Iff(l, r) => pair_tag(10, &pair(&code_big(l), &code_big(r))),
    }
}

/// The fixed Gödel numbering: deterministic, injective on sentences, and
/// strictly monotone: compounds code above their parts, `T(n)` above `n`.
pub fn code_of(s: &Sentence) -> GodelNumber {
    GodelNumber(code_big(s))
}

// ---------------------------------------------------------------------------
// Concrete syntax

/// Canonical text of a sentence; `parse(render(s)) = s`.
pub fn render(s: &Sentence) -> String {
    match s {
        Sentence::BaseAtom(f) => render_base(f),
        Sentence::TAtom(n) => format!("T({n})"),
        Sentence::ExistsT => "Ex T(x)".to_string(),
        Sentence::ForallT => "Ax T(x)".to_string(),
        Sentence::ExistsNotT => "Ex !T(x)".to_string(),
        Sentence::ForallNotT => "Ax !T(x)".to_string(),
        Sentence::Not(a) => format!("!({})", render(a)),
        Sentence::Or(l, r) => format!("({} | {})", render(l), render(r)),
        Sentence::And(l, r) => format!("({} & {})", render(l), render(r)),
        Sentence::Implies(l, r) => format!("({} -> {})", render(l), render(r)),
        Sentence::Iff(l, r) => format!("({} <-> {})", render(l), render(r)),
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("malformed base formula at byte {pos}: {msg}")]
    UnknownBaseFormula { pos: usize, msg: String },
}

/// Parses the documented concrete grammar.
///
/// Binary compounds are written `(A op B)` with `op` one of `|`, `&`,
/// `->`, `<->` (one bare binary is accepted at top level), negation is
/// `!A`, truth atoms are `T(<decimal>)`, and the four quantified truth
/// sentences are the keywords `Ex T(x)`, `Ax T(x)`, `Ex !T(x)`,
/// `Ax !T(x)`. Everything else is handed to the base-language grammar.
pub fn parse(text: &str) -> Result<Sentence, ParseError> {
    let lexed = lex(text).map_err(|e| ParseError::Syntax {
        pos: e.pos,
        msg: e.msg,
    })?;
    let mut p = SentenceParser {
        lexed: &lexed,
        idx: 0,
    };
    let s = p.sentence_toplevel()?;
    p.expect_eof()?;
    Ok(s)
}

struct SentenceParser<'a> {
    lexed: &'a Lexed,
    idx: usize,
}

impl<'a> SentenceParser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.lexed.offsets[self.idx.min(self.lexed.offsets.len() - 1)],
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.idx)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.lexed.toks.get(self.idx + n)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.idx == self.lexed.toks.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn binary_op(&self) -> Option<fn(Sentence, Sentence) -> Sentence> {
        match self.peek()? {
            Tok::Pipe => Some(or),
            Tok::Amp => Some(and),
            Tok::Arrow => Some(implies),
            Tok::DArrow => Some(iff),
            _ => None,
        }
    }

    fn sentence_toplevel(&mut self) -> Result<Sentence, ParseError> {
        let l = self.sentence_unit()?;
        if let Some(mk) = self.binary_op() {
            self.idx += 1;
            let r = self.sentence_unit()?;
            return Ok(mk(l, r));
        }
        Ok(l)
    }

    fn sentence_unit(&mut self) -> Result<Sentence, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.idx += 1;
                Ok(not(self.sentence_unit()?))
            }
            Some(Tok::Forall(_)) | Some(Tok::Exists(_)) => self.quantified_keyword(),
            Some(Tok::TPred) => self.t_atom(),
            Some(Tok::LParen) => self.paren_form(),
            Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Succ) => self.base_atom_committed(),
            Some(_) => self.err("expected a sentence"),
            None => self.err("expected a sentence, found end of input"),
        }
    }

    /// `Ex T(x)`, `Ax T(x)`, `Ex !T(x)`, `Ax !T(x)`: fixed keywords.
    fn quantified_keyword(&mut self) -> Result<Sentence, ParseError> {
        let (universal, v) = match self.peek() {
            Some(Tok::Forall(v)) => (true, *v),
            Some(Tok::Exists(v)) => (false, *v),
            _ => unreachable!(),
        };
        if v != 'x' {
            return self.err("the quantified truth sentences use the variable `x`");
        }
        self.idx += 1;
        let negated = self.eat(&Tok::Bang);
        self.expect(Tok::TPred, "`T` after the quantifier")?;
        self.expect(Tok::LParen, "`(` after `T`")?;
        self.expect(Tok::Var('x'), "`x` inside `T(...)`")?;
        self.expect(Tok::RParen, "`)` closing `T(x)`")?;
        Ok(match (universal, negated) {
            (true, false) => Sentence::ForallT,
            (true, true) => Sentence::ForallNotT,
            (false, false) => Sentence::ExistsT,
            (false, true) => Sentence::ExistsNotT,
        })
    }

    fn t_atom(&mut self) -> Result<Sentence, ParseError> {
        self.idx += 1; // T
        self.expect(Tok::LParen, "`(` after `T`")?;
        let n = match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.idx += 1;
                n
            }
            _ => return self.err("`T` takes a decimal code"),
        };
        self.expect(Tok::RParen, "`)` closing `T(...)`")?;
        Ok(Sentence::TAtom(GodelNumber(n)))
    }

    /// The next tokens can only start a base atom; base-grammar failures
    /// surface as unknown-base-formula errors.
    fn base_atom_committed(&mut self) -> Result<Sentence, ParseError> {
        let f = self.run_base(|p| p.formula_atom_entry())?;
        self.finish_base_atom(f)
    }

    fn run_base<T>(
        &mut self,
        f: impl FnOnce(&mut BaseParser<'a>) -> Result<T, BaseError>,
    ) -> Result<T, ParseError> {
        let mut bp = BaseParser::new(self.lexed);
        bp.idx = self.idx;
        match f(&mut bp) {
            Ok(v) => {
                self.idx = bp.idx;
                Ok(v)
            }
            Err(e) => Err(base_to_parse(e)),
        }
    }

    fn finish_base_atom(&self, f: BaseFormula) -> Result<Sentence, ParseError> {
        if let Some(v) = free_vars(&f).into_iter().next() {
            return Err(ParseError::UnknownBaseFormula {
                pos: self.lexed.offsets[self.idx.min(self.lexed.offsets.len() - 1)],
                msg: format!("variable `{v}` occurs free"),
            });
        }
        debug_assert!(is_base_atomic(&f));
        Ok(Sentence::BaseAtom(f))
    }

    fn paren_form(&mut self) -> Result<Sentence, ParseError> {
        // `(Ax<...` / `(Ex<...` opens a bounded quantifier of the base
        // language; `(Ax T...` is a grouped quantified-truth keyword.
        if matches!(
            (self.peek_at(1), self.peek_at(2)),
            (Some(Tok::Forall(_)), Some(Tok::Lt)) | (Some(Tok::Exists(_)), Some(Tok::Lt))
        ) {
            let f = self.run_base(|p| p.formula_unit())?;
            return self.finish_base_atom(f);
        }
        // `(0+1)=1` style: an atomic base formula whose left term is
        // parenthesized. Speculative; fall back to sentence grouping.
        {
            let mut bp = BaseParser::new(self.lexed);
            bp.idx = self.idx;
            if let Ok(f) = bp.formula_atom_entry() {
                self.idx = bp.idx;
                return self.finish_base_atom(f);
            }
        }
        self.idx += 1; // (
        let l = self.sentence_unit()?;
        if self.eat(&Tok::RParen) {
            return Ok(l);
        }
        match self.binary_op() {
            Some(mk) => {
                self.idx += 1;
                let r = self.sentence_unit()?;
                self.expect(Tok::RParen, "`)` closing the compound")?;
                Ok(mk(l, r))
            }
            None => self.err("expected `)` or a binary connective"),
        }
    }
}

fn base_to_parse(e: BaseError) -> ParseError {
    match e {
        BaseError::Parse { pos, msg } => ParseError::UnknownBaseFormula { pos, msg },
        other => ParseError::UnknownBaseFormula {
            pos: 0,
            msg: other.to_string(),
        },
    }
}
