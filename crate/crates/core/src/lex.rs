//! Tokenizer shared by the sentence grammar and its arithmetic base fragment.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Unbounded decimal numeral; Gödel codes in `T(...)` can be huge.
    Num(BigUint),
    Var(char),
    /// `A` immediately followed by a lowercase variable, e.g. `Ax`.
    Forall(char),
    /// `E` immediately followed by a lowercase variable, e.g. `Ex`.
    Exists(char),
    Succ,
    TPred,
    LParen,
    RParen,
    Eq,
    Lt,
    Plus,
    Star,
    Bang,
    Pipe,
    Amp,
    Arrow,
    DArrow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub pos: usize,
    pub msg: String,
}

pub(crate) struct Lexed {
    pub toks: Vec<Tok>,
    /// Byte offset of each token, plus one trailing end-of-input offset.
    pub offsets: Vec<usize>,
}

pub(crate) fn lex(text: &str) -> Result<Lexed, LexError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut offsets = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigUint = text[i..j].parse().expect("digit run parses");
                i = j;
                Tok::Num(n)
            }
            'a'..='z' => {
                i += 1;
                Tok::Var(c)
            }
            'A' | 'E' if i + 1 < bytes.len() && bytes[i + 1].is_ascii_lowercase() => {
                let v = bytes[i + 1] as char;
                i += 2;
                if c == 'A' {
                    Tok::Forall(v)
                } else {
                    Tok::Exists(v)
                }
            }
            'S' => {
                i += 1;
                Tok::Succ
            }
            'T' => {
                i += 1;
                Tok::TPred
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '<' => {
                if text[i..].starts_with("<->") {
                    i += 3;
                    Tok::DArrow
                } else {
                    i += 1;
                    Tok::Lt
                }
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '!' => {
                i += 1;
                Tok::Bang
            }
            '|' => {
                i += 1;
                Tok::Pipe
            }
            '&' => {
                i += 1;
                Tok::Amp
            }
            '-' => {
                if text[i..].starts_with("->") {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(LexError {
                        pos: start,
                        msg: "stray `-` (did you mean `->`?)".to_string(),
                    });
                }
            }
            other => {
                return Err(LexError {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        };
        toks.push(tok);
        offsets.push(start);
    }
    offsets.push(bytes.len());
    Ok(Lexed { toks, offsets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_quantifier_and_arrows() {
        let l = lex("(Ax<3)(x <-> y) -> z").unwrap();
        assert_eq!(l.toks[1], Tok::Forall('x'));
        assert!(l.toks.contains(&Tok::DArrow));
        assert!(l.toks.contains(&Tok::Arrow));
    }

    #[test]
    fn lexes_numerals_beyond_u64() {
        let big = "123456789012345678901234567890";
        let l = lex(big).unwrap();
        assert_eq!(l.toks, vec![Tok::Num(big.parse().unwrap())]);
    }

    #[test]
    fn rejects_stray_minus() {
        assert!(lex("0 - 1").is_err());
    }
}
