//! Truncated non-commutative power series and the repeated-index-free
//! reduction used for Milnor-group computations.
//!
//! The expansion sends generator `xᵢ` to `1 + Xᵢ` and its inverse to the
//! truncated geometric series `1 − Xᵢ + Xᵢ² − …`, so every word maps to a
//! series with constant term 1. Coefficients are arbitrary-precision
//! integers: inverse letters make coefficients grow combinatorially with
//! the truncation degree, and silent wraparound here would corrupt every
//! computation downstream.
//!
//! [`reduce`](Series::reduce) discards monomials in which some variable
//! repeats. Working in the reduced quotient turns equality of group
//! elements modulo the relations `[xᵢ, xᵢ^c] = 1` into comparison of
//! finitely many coefficients.
//!
//! ```
//! use milnor::{magnus::expand, parse::parse_word};
//! let series = expand(&parse_word("[x1,x2]").unwrap(), 2, 2).unwrap();
//! assert_eq!(series.to_string(), "1 + x1x2 - x2x1");
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::Word;

/// A product of variables, stored as the sequence of their indices.
///
/// Monomials order by degree first, then lexicographically, so iteration
/// over a series visits low-degree terms first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// The empty product.
    pub fn unit() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn from_indices(indices: impl Into<Vec<u32>>) -> Monomial {
        Monomial(indices.into())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// True iff no variable occurs twice.
    pub fn is_repetition_free(&self) -> bool {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    fn concat(&self, rhs: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Monomial(v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for i in &self.0 {
            write!(f, "x{i}")?;
        }
        Ok(())
    }
}

/// Errors from series construction and arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MagnusError {
    /// A word used a generator outside the declared alphabet.
    #[error("generator x{index} out of range: series context has {gens} generators")]
    GeneratorOutOfRange { index: u32, gens: u32 },
    /// Arithmetic between series with different alphabets or truncations.
    #[error("series context mismatch: ({0} gens, degree {1}) vs ({2} gens, degree {3})")]
    ContextMismatch(u32, usize, u32, usize),
}

/// An integer power series in non-commuting variables, truncated above
/// `max_degree`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    gens: u32,
    max_degree: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Series {
    /// The series `1`.
    pub fn one(gens: u32, max_degree: usize) -> Series {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::unit(), BigInt::one());
        Series {
            gens,
            max_degree,
            terms,
        }
    }

    /// The zero series.
    pub fn zero(gens: u32, max_degree: usize) -> Series {
        Series {
            gens,
            max_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in degree-then-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// Smallest degree `d ≥ 1` carrying a non-zero term, if any.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .find(|&d| d >= 1)
    }

    /// All terms of one fixed degree.
    pub fn degree_part(&self, d: usize) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().filter(move |(m, _)| m.degree() == d)
    }

    fn insert(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() || m.degree() > self.max_degree {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_context(&self, rhs: &Series) -> Result<(), MagnusError> {
        if self.gens != rhs.gens || self.max_degree != rhs.max_degree {
            return Err(MagnusError::ContextMismatch(
                self.gens,
                self.max_degree,
                rhs.gens,
                rhs.max_degree,
            ));
        }
        Ok(())
    }

    /// Sum of two series over the same context.
    pub fn add(&self, rhs: &Series) -> Result<Series, MagnusError> {
        self.check_context(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product of two series over the same context, truncated.
    pub fn mul(&self, rhs: &Series) -> Result<Series, MagnusError> {
        self.check_context(rhs)?;
        let mut out = Series::zero(self.gens, self.max_degree);
        for (m1, c1) in &self.terms {
            if m1.degree() > self.max_degree {
                continue;
            }
            for (m2, c2) in &rhs.terms {
                if m1.degree() + m2.degree() > self.max_degree {
                    continue;
                }
                out.insert(m1.concat(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Negation.
    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -(c.clone());
        }
        out
    }

    /// Drops every monomial with a repeated variable.
    pub fn reduce(&self) -> ReducedSeries {
        let mut out = Series::zero(self.gens, self.max_degree.min(self.gens as usize));
        for (m, c) in &self.terms {
            if m.is_repetition_free() {
                out.insert(m.clone(), c.clone());
            }
        }
        ReducedSeries(out)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A series with no repeated-variable monomials.
///
/// Arithmetic re-reduces, so the invariant is closed under `add`/`mul`.
/// The truncation degree never exceeds the alphabet size: every longer
/// repetition-free monomial would need more variables than exist.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedSeries(Series);

impl ReducedSeries {
    pub fn one(gens: u32) -> ReducedSeries {
        Series::one(gens, gens as usize).reduce()
    }

    pub fn as_series(&self) -> &Series {
        &self.0
    }

    pub fn gens(&self) -> u32 {
        self.0.gens
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.0.coefficient(m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.terms()
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.0.lowest_degree()
    }

    pub fn degree_part(&self, d: usize) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.degree_part(d)
    }

    /// True iff the series is the constant 1.
    pub fn is_one(&self) -> bool {
        self.0.terms.len() == 1 && self.0.coefficient(&Monomial::unit()).is_one()
    }

    pub fn add(&self, rhs: &ReducedSeries) -> Result<ReducedSeries, MagnusError> {
        Ok(self.0.add(&rhs.0)?.reduce())
    }

    pub fn mul(&self, rhs: &ReducedSeries) -> Result<ReducedSeries, MagnusError> {
        Ok(self.0.mul(&rhs.0)?.reduce())
    }
}

impl fmt::Display for ReducedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Series of a single signed letter.
fn letter_series(index: u32, sign: i8, gens: u32, max_degree: usize) -> Series {
    let mut s = Series::one(gens, max_degree);
    if sign > 0 {
        s.insert(Monomial(vec![index]), BigInt::one());
        return s;
    }
    let mut c = BigInt::one();
    let mut m = Vec::new();
    for _ in 1..=max_degree {
        c = -c;
        m.push(index);
        s.insert(Monomial(m.clone()), c.clone());
    }
    s
}

/// Expands a word into the truncated series ring on `gens` variables.
///
/// Fails if the word mentions a generator with index above `gens`.
pub fn expand(word: &Word, gens: u32, max_degree: usize) -> Result<Series, MagnusError> {
    for &(g, _) in word.letters() {
        if g.index() > gens {
            return Err(MagnusError::GeneratorOutOfRange {
                index: g.index(),
                gens,
            });
        }
    }
    let mut acc = Series::one(gens, max_degree);
    for &(g, s) in word.letters() {
        acc = acc.mul(&letter_series(g.index(), s, gens, max_degree))?;
    }
    Ok(acc)
}

/// Expands and reduces in one step, with truncation at the alphabet size.
///
/// Repeated-index monomials span a two-sided ideal (a repeat survives
/// concatenation on either side), so reducing after every letter gives the
/// same result as reducing once at the end. Folding inside the reduced
/// ring keeps intermediate series small: a letter contributes at most two
/// terms after reduction, against exponentially many unreduced ones.
pub fn expand_reduced(word: &Word, gens: u32) -> Result<ReducedSeries, MagnusError> {
    let max_degree = gens as usize;
    for &(g, _) in word.letters() {
        if g.index() > gens {
            return Err(MagnusError::GeneratorOutOfRange {
                index: g.index(),
                gens,
            });
        }
    }
    let mut acc = ReducedSeries::one(gens);
    for &(g, s) in word.letters() {
        acc = acc.mul(&letter_series(g.index(), s, gens, max_degree).reduce())?;
    }
    Ok(acc)
}
