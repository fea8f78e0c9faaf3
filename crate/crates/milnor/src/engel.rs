//! Constructive certificates expressing deep commutators as products of
//! elementary ones, plus the Engel words and kinky-handle relation words.
//!
//! An elementary commutator is left-normed with two equal entries, each a
//! product of two distinct generators, and single distinct generators
//! everywhere else. The doubled pair sits inside the first four positions;
//! its location classifies the term as type `a` (positions 2,3), `b`
//! (positions 3,4), or `c` (positions 2,4).
//!
//! [`engel_decompose`] writes any word of lower-central degree at least 4
//! as a product of such terms: a fixed six-term script per basic
//! commutator, three of type `a`, two of type `b`, one of type `c`. The
//! script is exact in the free Milnor group and the decomposition ends
//! with a hard triviality check of the residual.
//!
//! ```
//! use milnor::{engel::engel_decompose, milnor::MilnorContext, parse::parse_word};
//! let ctx = MilnorContext::new(4);
//! let cert = engel_decompose(&parse_word("[x1,x2,x3,x4]").unwrap(), &ctx).unwrap();
//! assert_eq!(cert.terms().len(), 6);
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::magnus::MagnusError;
use crate::milnor::MilnorContext;
use crate::parse::parse_word;
use crate::words::Word;

/// Errors from certificate construction and parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngelError {
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error("word is not in the fourth lower-central term: degree-{degree} witness {witness}")]
    BelowFourthTerm { degree: usize, witness: String },
    #[error("order must be at least 1, got {0}")]
    OrderTooSmall(u32),
    #[error("elementary commutator needs at least 4 entries, got {0}")]
    TooFewEntries(usize),
    #[error("doubled positions ({j},{m}) out of range: need 1 <= j < m <= 4")]
    InvalidDoubledPositions { j: usize, m: usize },
    #[error("entry {index} must be {expected}")]
    BadEntryShape { index: usize, expected: &'static str },
    #[error("generators must be distinct across entries")]
    RepeatedGenerator,
    #[error("exponent must be +1 or -1, got {0}")]
    BadExponent(i8),
    #[error("term {index} does not match an elementary type (a/b/c)")]
    UnclassifiableTerm { index: usize },
    #[error("scripted terms leave a non-trivial residual at degree {degree}")]
    ResidualNotTrivial { degree: usize },
    #[error("degree-{degree} part not eliminated by the straightening step")]
    GradedMismatch { degree: usize },
    #[error("certificate parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Position pattern of the doubled entry pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum TermType {
    /// Doubled at positions (2,3).
    A,
    /// Doubled at positions (3,4).
    B,
    /// Doubled at positions (2,4).
    C,
}

impl TermType {
    pub fn doubled_positions(self) -> (usize, usize) {
        match self {
            TermType::A => (2, 3),
            TermType::B => (3, 4),
            TermType::C => (2, 4),
        }
    }

    pub fn label(self) -> char {
        match self {
            TermType::A => 'a',
            TermType::B => 'b',
            TermType::C => 'c',
        }
    }

    pub fn from_label(c: char) -> Option<TermType> {
        match c {
            'a' => Some(TermType::A),
            'b' => Some(TermType::B),
            'c' => Some(TermType::C),
            _ => None,
        }
    }

    fn from_positions(j: usize, m: usize) -> Option<TermType> {
        match (j, m) {
            (2, 3) => Some(TermType::A),
            (3, 4) => Some(TermType::B),
            (2, 4) => Some(TermType::C),
            _ => None,
        }
    }
}

impl fmt::Display for TermType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A left-normed commutator with one doubled two-generator entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryCommutator {
    entries: Vec<Word>,
    exponent: i8,
    doubled: (usize, usize),
}

fn single_generator(w: &Word) -> Option<u32> {
    match w.letters() {
        [(g, 1)] => Some(g.index()),
        _ => None,
    }
}

fn two_generator_product(w: &Word) -> Option<(u32, u32)> {
    match w.letters() {
        [(g, 1), (h, 1)] if g != h => Some((g.index(), h.index())),
        _ => None,
    }
}

impl ElementaryCommutator {
    /// Validates the entry shapes: positions `doubled.0` and `doubled.1`
    /// hold the same product of two distinct generators, every other
    /// position a single generator, and no generator repeats across the
    /// distinct entries.
    pub fn new(
        entries: Vec<Word>,
        doubled: (usize, usize),
        exponent: i8,
    ) -> Result<ElementaryCommutator, EngelError> {
        if entries.len() < 4 {
            return Err(EngelError::TooFewEntries(entries.len()));
        }
        let (j, m) = doubled;
        if !(1 <= j && j < m && m <= 4) {
            return Err(EngelError::InvalidDoubledPositions { j, m });
        }
        if exponent != 1 && exponent != -1 {
            return Err(EngelError::BadExponent(exponent));
        }
        let pair = two_generator_product(&entries[j - 1]).ok_or(EngelError::BadEntryShape {
            index: j,
            expected: "a product of two distinct generators",
        })?;
        if entries[m - 1] != entries[j - 1] {
            return Err(EngelError::BadEntryShape {
                index: m,
                expected: "equal to the other doubled entry",
            });
        }
        let mut used = vec![pair.0, pair.1];
        for (k, entry) in entries.iter().enumerate() {
            let pos = k + 1;
            if pos == j || pos == m {
                continue;
            }
            let g = single_generator(entry).ok_or(EngelError::BadEntryShape {
                index: pos,
                expected: "a single generator",
            })?;
            used.push(g);
        }
        let mut sorted = used.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(EngelError::RepeatedGenerator);
        }
        Ok(ElementaryCommutator {
            entries,
            exponent,
            doubled,
        })
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    pub fn exponent(&self) -> i8 {
        self.exponent
    }

    pub fn doubled(&self) -> (usize, usize) {
        self.doubled
    }

    /// Type label when the doubled pair matches one of the three patterns.
    pub fn term_type(&self) -> Option<TermType> {
        TermType::from_positions(self.doubled.0, self.doubled.1)
    }

    /// The group word this term stands for: the left-normed commutator of
    /// the entries, raised to the exponent.
    pub fn realized(&self) -> Word {
        let w = Word::left_normed(&self.entries).expect("at least 4 entries");
        w.pow(self.exponent as i64)
    }
}

impl fmt::Display for ElementaryCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]^{}", if self.exponent > 0 { "+1" } else { "-1" })
    }
}

/// A product decomposition into elementary commutators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EngelCertificate {
    gens: u32,
    target: Word,
    terms: Vec<ElementaryCommutator>,
}

impl EngelCertificate {
    /// Every term must classify as one of the three elementary types.
    pub fn new(
        gens: u32,
        target: Word,
        terms: Vec<ElementaryCommutator>,
    ) -> Result<EngelCertificate, EngelError> {
        for (i, t) in terms.iter().enumerate() {
            if t.term_type().is_none() {
                return Err(EngelError::UnclassifiableTerm { index: i + 1 });
            }
        }
        Ok(EngelCertificate {
            gens,
            target,
            terms,
        })
    }

    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn terms(&self) -> &[ElementaryCommutator] {
        &self.terms
    }

    /// Counts per type label, with all three keys always present.
    pub fn type_counts(&self) -> BTreeMap<char, usize> {
        let mut counts = BTreeMap::from([('a', 0), ('b', 0), ('c', 0)]);
        for t in &self.terms {
            let label = t.term_type().expect("validated on construction").label();
            *counts.get_mut(&label).expect("keys preseeded") += 1;
        }
        counts
    }

    /// `target * (product of realized terms)^-1`, the word that must be
    /// trivial for the certificate to be valid.
    pub fn residual(&self) -> Word {
        let mut product = Word::identity();
        for t in &self.terms {
            product = product.mul(&t.realized());
        }
        self.target.mul(&product.inverse())
    }

    /// Human-readable serialization; [`parse_certificate`] reads it back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("gens = {}\n", self.gens));
        out.push_str(&format!("target = {}\n", self.target.display_with("x")));
        for t in &self.terms {
            let ty = t.term_type().expect("validated on construction");
            let sign = if t.exponent() > 0 { "+1" } else { "-1" };
            let entries = t
                .entries()
                .iter()
                .map(|e| e.display_with("x"))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("term {ty} {sign} [{entries}]\n"));
        }
        out
    }
}

/// Reads the text form produced by [`EngelCertificate::to_text`].
///
/// Lines starting with `#` and blank lines are skipped.
pub fn parse_certificate(text: &str) -> Result<EngelCertificate, EngelError> {
    let mut gens: Option<u32> = None;
    let mut target: Option<Word> = None;
    let mut terms = Vec::new();
    let fail = |line: usize, message: String| EngelError::Parse { line, message };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gens") {
            let rest = rest.trim_start();
            let value = rest
                .strip_prefix('=')
                .ok_or_else(|| fail(line_no, "expected 'gens = <count>'".into()))?;
            let n: u32 = value
                .trim()
                .parse()
                .map_err(|_| fail(line_no, "generator count is not a number".into()))?;
            if n == 0 {
                return Err(fail(line_no, "generator count must be at least 1".into()));
            }
            gens = Some(n);
        } else if let Some(rest) = line.strip_prefix("target") {
            let rest = rest.trim_start();
            let value = rest
                .strip_prefix('=')
                .ok_or_else(|| fail(line_no, "expected 'target = <word>'".into()))?
                .trim();
            let word = if value.is_empty() {
                Word::identity()
            } else {
                parse_word(value).map_err(|e| fail(line_no, e.to_string()))?
            };
            target = Some(word);
        } else if let Some(rest) = line.strip_prefix("term") {
            let mut parts = rest.trim().splitn(3, ' ');
            let ty = parts
                .next()
                .and_then(|s| s.chars().next())
                .and_then(TermType::from_label)
                .ok_or_else(|| fail(line_no, "expected a type label a, b, or c".into()))?;
            let exponent = match parts.next() {
                Some("+1") => 1,
                Some("-1") => -1,
                _ => return Err(fail(line_no, "expected exponent +1 or -1".into())),
            };
            let bracket = parts
                .next()
                .map(str::trim)
                .ok_or_else(|| fail(line_no, "expected [entries]".into()))?;
            let inner = bracket
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| fail(line_no, "entries must be bracketed".into()))?;
            let entries = inner
                .split(',')
                .map(|chunk| parse_word(chunk.trim()).map_err(|e| fail(line_no, e.to_string())))
                .collect::<Result<Vec<Word>, EngelError>>()?;
            let term = ElementaryCommutator::new(entries, ty.doubled_positions(), exponent)
                .map_err(|e| fail(line_no, e.to_string()))?;
            terms.push(term);
        } else {
            return Err(fail(line_no, format!("unrecognized line: {line}")));
        }
    }
    let gens = gens.ok_or_else(|| fail(0, "missing 'gens = <count>' line".into()))?;
    let target = target.ok_or_else(|| fail(0, "missing 'target = <word>' line".into()))?;
    EngelCertificate::new(gens, target, terms)
}

/// A signed left-normed commutator of distinct generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasicTerm {
    pub indices: Vec<u32>,
    pub exponent: i8,
}

impl BasicTerm {
    pub fn word(&self) -> Word {
        let gens: Vec<Word> = self.indices.iter().map(|&g| Word::gen(g)).collect();
        Word::left_normed(&gens).expect("basic terms have at least 2 entries")
    }
}

impl fmt::Display for BasicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]^{}",
            self.indices
                .iter()
                .map(|g| format!("x{g}"))
                .collect::<Vec<_>>()
                .join(","),
            if self.exponent > 0 { "+1" } else { "-1" }
        )
    }
}

/// Writes `u` as a product of signed basic commutators, exact in the
/// Milnor group.
///
/// Round by round the leading graded part is read off the reduced
/// expansion: per support subset, the coefficients of the monomials
/// starting with the subset's smallest index are the coordinates over the
/// left-normed basis. The realized basics are divided out and the
/// procedure recurses on the residual until it is trivial, so the full
/// returned product equals `u` in the Milnor group. Rounds are emitted in
/// ascending degree; within a round, terms follow monomial order.
pub fn basic_decompose(u: &Word, ctx: &MilnorContext) -> Result<Vec<BasicTerm>, EngelError> {
    let mut out = Vec::new();
    let mut residual = u.clone();
    loop {
        let series = ctx.expand(&residual)?;
        let Some(k) = series.lowest_degree() else {
            return Ok(out);
        };
        let mut round = Vec::new();
        for (mono, c) in series.degree_part(k) {
            let indices = mono.indices();
            let min = *indices.iter().min().expect("degree >= 1");
            if indices[0] != min {
                continue;
            }
            let exponent: i8 = if c.is_negative() { -1 } else { 1 };
            let copies = c.abs().to_string().parse::<usize>().unwrap_or(usize::MAX);
            for _ in 0..copies {
                round.push(BasicTerm {
                    indices: indices.to_vec(),
                    exponent,
                });
            }
        }
        let mut product = Word::identity();
        for term in &round {
            product = product.mul(&term.word().pow(term.exponent as i64));
        }
        residual = residual.mul(&product.inverse());
        let next = ctx.expand(&residual)?.lowest_degree();
        if next.is_some_and(|d| d <= k) {
            return Err(EngelError::GradedMismatch { degree: k });
        }
        out.extend(round);
    }
}

/// The six-term script for one basic commutator `[c1,c2,c3,c4,...]`.
///
/// The first four letters produce two type-`b`, three type-`a`, and one
/// type-`c` term; letters past the fourth are appended to every term as
/// trailing single entries. The product of the realized terms equals the
/// signed basic commutator exactly in the Milnor group.
fn script_terms(indices: &[u32], exponent: i8) -> Vec<ElementaryCommutator> {
    assert!(indices.len() >= 4, "script needs a 4-fold commutator");
    let c = |i: usize| Word::gen(indices[i - 1]);
    let pair = |i: usize, j: usize| c(i).mul(&c(j));
    let tail: Vec<Word> = indices[4..].iter().map(|&g| Word::gen(g)).collect();
    let spec: [(Vec<Word>, (usize, usize), i8); 6] = [
        (vec![c(1), c(2), pair(3, 4), pair(3, 4)], (3, 4), 1),
        (vec![c(3), c(4), pair(1, 2), pair(1, 2)], (3, 4), 1),
        (vec![c(2), pair(1, 3), pair(1, 3), c(4)], (2, 3), 1),
        (vec![c(3), pair(2, 4), c(1), pair(2, 4)], (2, 4), 1),
        (vec![c(4), pair(3, 1), pair(3, 1), c(2)], (2, 3), 1),
        (vec![c(3), pair(4, 1), pair(4, 1), c(2)], (2, 3), -1),
    ];
    spec.into_iter()
        .map(|(mut entries, doubled, sign)| {
            entries.extend(tail.iter().cloned());
            ElementaryCommutator::new(entries, doubled, sign * exponent)
                .expect("scripted terms are well-shaped")
        })
        .collect()
}

/// Decomposes a word of lower-central degree at least 4 into elementary
/// commutators.
///
/// The basic decomposition runs first; each signed basic commutator then
/// expands through the fixed six-term script, so the certificate is
/// deterministic. A trivial word gets an empty certificate. The residual
/// of the assembled certificate is checked trivial; failure of that check
/// is an internal error, never silently absorbed.
pub fn engel_decompose(u: &Word, ctx: &MilnorContext) -> Result<EngelCertificate, EngelError> {
    let series = ctx.expand(u)?;
    if let Some(k) = series.lowest_degree() {
        if k < 4 {
            let (mono, value) = series
                .degree_part(k)
                .next()
                .expect("lowest_degree found a term");
            return Err(EngelError::BelowFourthTerm {
                degree: k,
                witness: format!("{value}*{mono}"),
            });
        }
    }
    let basics = basic_decompose(u, ctx)?;
    let mut terms = Vec::new();
    for basic in &basics {
        terms.extend(script_terms(&basic.indices, basic.exponent));
    }
    let cert = EngelCertificate::new(ctx.gens(), u.clone(), terms)?;
    let residual = cert.residual();
    if !ctx.is_trivial(&residual)? {
        let degree = ctx.lcs_degree(&residual)?.unwrap_or(0);
        return Err(EngelError::ResidualNotTrivial { degree });
    }
    Ok(cert)
}

/// Validity check: the target divided by the realized terms must be
/// trivial in the Milnor group.
pub fn verify_certificate(cert: &EngelCertificate, ctx: &MilnorContext) -> Result<bool, EngelError> {
    Ok(ctx.is_trivial(&cert.residual())?)
}

/// The order-`e` Engel word `[y, x, x, ..., x]` with `e` copies of `x`.
pub fn n_engel_word(e: u32, x: &Word, y: &Word) -> Result<Word, EngelError> {
    if e < 1 {
        return Err(EngelError::OrderTooSmall(e));
    }
    let mut entries = vec![y.clone()];
    entries.extend(std::iter::repeat_with(|| x.clone()).take(e as usize));
    Ok(Word::left_normed(&entries).expect("at least 2 entries"))
}

/// Meridian relation of an order-`k` kinky handle, in generators `x1, x2`.
///
/// Order 1 is `[x, x^y]`. Higher orders iterate the Whitney-circle
/// meridian construction `W_1 = [y,x]`, `W_k = [x^y, [x, W_{k-1}]]` and
/// return `[W_k, x]`; the order-`k` word lies in the `(2k+1)`-st
/// lower-central term.
pub fn kinky_relation(order: u32) -> Result<Word, EngelError> {
    if order < 1 {
        return Err(EngelError::OrderTooSmall(order));
    }
    let x = Word::gen(1);
    let y = Word::gen(2);
    if order == 1 {
        return Ok(Word::commutator(&x, &x.conjugate(&y)));
    }
    let mut w = Word::commutator(&y, &x);
    for _ in 2..=order {
        w = Word::commutator(&x.conjugate(&y), &Word::commutator(&x, &w));
    }
    Ok(Word::commutator(&w, &x))
}
