//! Parser for the word grammar used on the command line and in link files.
//!
//! ```text
//! word   := factor+
//! factor := atom [ "^" ( "-1" | atom ) ]
//! atom   := NAME | "[" word ("," word)+ "]" | "(" word ")"
//! NAME   := letter [digits]
//! ```
//!
//! `u^-1` is inversion, `u^c` is conjugation `c⁻¹uc`, and brackets with two
//! or more entries are left-normed commutators. A NAME with digits denotes
//! the generator with that index regardless of the letter (`x3`, `m3` and
//! `a3` all mean generator 3). The bare letters `x y z w u v` abbreviate
//! generators 1–6; other letters require an explicit index.
//!
//! ```
//! use milnor::parse::parse_word;
//! use milnor::words::Word;
//! let w = parse_word("[x, y, z]").unwrap();
//! let xyz = [Word::gen(1), Word::gen(2), Word::gen(3)];
//! assert_eq!(w, Word::left_normed(&xyz).unwrap());
//! ```

use thiserror::Error;

use crate::words::Word;

/// A syntax error, with the byte offset where parsing failed.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.err(format!("expected '{}', found '{}'", c as char, got as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut out = self.factor()?;
        while let Some(c) = self.peek() {
            if matches!(c, b',' | b']' | b')') {
                break;
            }
            out = out.mul(&self.factor()?);
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                self.pos += 1;
                match self.bump() {
                    Some(b'1') => return Ok(base.inverse()),
                    _ => return self.err("expected '1' after '^-'"),
                }
            }
            let conj = self.atom()?;
            return Ok(base.conjugate(&conj));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut entries = vec![self.word()?];
                self.expect(b',')?;
                entries.push(self.word()?);
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    entries.push(self.word()?);
                }
                self.expect(b']')?;
                // Arity is at least 2 by construction.
                Ok(Word::left_normed(&entries).expect("bracket arity"))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.word()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            Some(c) => self.err(format!("expected a name, '[' or '(', found '{}'", c as char)),
            None => self.err("expected a name, '[' or '(', found end of input"),
        }
    }

    fn name(&mut self) -> Result<Word, ParseError> {
        let letter = self.bump().expect("caller checked") as char;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos > start {
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let index: u32 = match digits.parse() {
                Ok(i) if i >= 1 => i,
                _ => return self.err(format!("invalid generator index '{digits}'")),
            };
            return Ok(Word::gen(index));
        }
        match letter {
            'x' => Ok(Word::gen(1)),
            'y' => Ok(Word::gen(2)),
            'z' => Ok(Word::gen(3)),
            'w' => Ok(Word::gen(4)),
            'u' => Ok(Word::gen(5)),
            'v' => Ok(Word::gen(6)),
            _ => self.err(format!(
                "bare name '{letter}' has no index; use {letter}1, {letter}2, … (only x y z w u v may omit it)"
            )),
        }
    }
}

/// Parses a word in the grammar above. The whole input must be consumed.
pub fn parse_word(input: &str) -> Result<Word, ParseError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let w = p.word()?;
    if p.peek().is_some() {
        return p.err("trailing input after word");
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    #[test]
    fn names_with_and_without_indices() {
        assert_eq!(parse_word("x1").unwrap(), Word::gen(1));
        assert_eq!(parse_word("m7").unwrap(), Word::gen(7));
        assert_eq!(parse_word("w").unwrap(), Word::gen(4));
        assert!(parse_word("m").is_err());
        assert!(parse_word("x0").is_err());
    }

    #[test]
    fn juxtaposition_multiplies() {
        assert_eq!(
            parse_word("x1 x2 x1^-1").unwrap(),
            Word::from_letters([
                (crate::words::Gen::new(1), 1),
                (crate::words::Gen::new(2), 1),
                (crate::words::Gen::new(1), -1),
            ])
        );
    }

    #[test]
    fn caret_is_inverse_or_conjugation() {
        let x = Word::gen(1);
        let y = Word::gen(2);
        assert_eq!(parse_word("x^-1").unwrap(), x.inverse());
        assert_eq!(parse_word("x^y").unwrap(), x.conjugate(&y));
        assert_eq!(
            parse_word("x^(y z)").unwrap(),
            x.conjugate(&y.mul(&Word::gen(3)))
        );
    }

    #[test]
    fn brackets_are_left_normed() {
        let (x, y, z, w) = (Word::gen(1), Word::gen(2), Word::gen(3), Word::gen(4));
        assert_eq!(parse_word("[x,y]").unwrap(), Word::commutator(&x, &y));
        assert_eq!(
            parse_word("[x,y,z,w]").unwrap(),
            Word::left_normed(&[x.clone(), y.clone(), z, w]).unwrap()
        );
        assert!(parse_word("[x]").is_err());
    }

    #[test]
    fn nested_structure_parses() {
        let l1 = parse_word("[[m2,m3],[m4,m5]]").unwrap();
        let want = Word::commutator(
            &Word::commutator(&Word::gen(2), &Word::gen(3)),
            &Word::commutator(&Word::gen(4), &Word::gen(5)),
        );
        assert_eq!(l1, want);
    }

    #[test]
    fn error_positions_point_at_the_problem() {
        let e = parse_word("[x,y").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_word("x )").unwrap_err();
        assert!(e.message.contains("trailing"));
    }

    #[test]
    fn print_then_parse_round_trips() {
        for src in ["x1x2^-1x3", "[x,y]", "[x1,x2,x3]^-1 x4"] {
            let w = parse_word(src).unwrap();
            if w.is_identity() {
                continue;
            }
            assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        }
    }
}
