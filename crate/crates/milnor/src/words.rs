//! Freely reduced words in a free group with 1-based indexed generators.
//!
//! A [`Word`] is a sequence of signed letters with no adjacent cancelling
//! pair. All constructors and operations maintain that invariant, so two
//! words are equal in the free group iff they are equal as values.
//!
//! The commutator convention is `[u, v] = u⁻¹ v⁻¹ u v` and conjugation is
//! `u^c = c⁻¹ u c`. Under this convention the expected product identities
//! hold verbatim as free-group identities (see the crate tests):
//!
//! ```
//! use milnor::words::Word;
//! let (x, y, z) = (Word::gen(1), Word::gen(2), Word::gen(3));
//! let lhs = Word::commutator(&x, &y.mul(&z));
//! let rhs = Word::commutator(&x, &z).mul(&Word::commutator(&x, &y).conjugate(&z));
//! assert_eq!(lhs, rhs);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A generator of the free group, identified by a 1-based index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gen(u32);

impl Gen {
    /// Creates the generator with the given 1-based index.
    ///
    /// # Panics
    ///
    /// Panics if `index` is zero.
    pub fn new(index: u32) -> Gen {
        assert!(index >= 1, "generator indices are 1-based");
        Gen(index)
    }

    /// The 1-based index of this generator.
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A single signed letter: a generator or its inverse.
pub type Letter = (Gen, i8);

/// Errors from word-level operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    /// `left_normed` needs at least two arguments.
    #[error("left-normed commutator needs at least 2 entries, got {0}")]
    Arity(usize),
    /// `substitute` found a generator with no assigned image.
    #[error("no substitution image for generator x{}", .0.index())]
    MissingImage(Gen),
}

/// A freely reduced word over indexed generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The empty word.
    pub fn identity() -> Word {
        Word::default()
    }

    /// The one-letter word for generator `index` (1-based).
    pub fn gen(index: u32) -> Word {
        Word {
            letters: vec![(Gen::new(index), 1)],
        }
    }

    /// Builds a word from signed letters, freely reducing.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, (g, s): Letter) {
        debug_assert!(s == 1 || s == -1);
        match self.letters.last() {
            Some(&(h, t)) if h == g && t == -s => {
                self.letters.pop();
            }
            _ => self.letters.push((g, s)),
        }
    }

    /// The reduced letters of this word.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Reduced word length. The emptiness test is spelled
    /// [`Word::is_identity`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// True iff this is the empty word.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product `self · rhs`, reduced at the seam.
    pub fn mul(&self, rhs: &Word) -> Word {
        let mut out = self.clone();
        for &l in &rhs.letters {
            out.push(l);
        }
        out
    }

    /// The inverse word.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(g, s)| (g, -s)).collect(),
        }
    }

    /// Integer power of this word.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Conjugate `self^c = c⁻¹ · self · c`.
    pub fn conjugate(&self, c: &Word) -> Word {
        c.inverse().mul(self).mul(c)
    }

    /// Commutator `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// Left-normed commutator `[w₁, w₂, …, w_k] = [[…[w₁, w₂], …], w_k]`.
    ///
    /// Needs `k ≥ 2`; shorter argument lists are an arity error.
    pub fn left_normed(entries: &[Word]) -> Result<Word, WordError> {
        if entries.len() < 2 {
            return Err(WordError::Arity(entries.len()));
        }
        let mut acc = Word::commutator(&entries[0], &entries[1]);
        for e in &entries[2..] {
            acc = Word::commutator(&acc, e);
        }
        Ok(acc)
    }

    /// Replaces every generator by its image and reduces.
    ///
    /// Every generator occurring in the word must have an image.
    pub fn substitute(&self, images: &BTreeMap<Gen, Word>) -> Result<Word, WordError> {
        let mut out = Word::identity();
        for &(g, s) in &self.letters {
            let img = images.get(&g).ok_or(WordError::MissingImage(g))?;
            let img = if s < 0 { img.inverse() } else { img.clone() };
            out = out.mul(&img);
        }
        Ok(out)
    }

    /// Net exponent of `g` in this word.
    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.letters
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, s)| s as i64)
            .sum()
    }

    /// The set of generators occurring in this word.
    pub fn support(&self) -> BTreeSet<Gen> {
        self.letters.iter().map(|&(g, _)| g).collect()
    }

    /// Largest generator index occurring, or 0 for the identity.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|&(g, _)| g.index()).max().unwrap_or(0)
    }

    /// Renders the word with a custom generator prefix (`x` gives `x1x2^-1`).
    ///
    /// The identity renders as the empty string.
    pub fn display_with(&self, prefix: &str) -> String {
        let mut s = String::new();
        for &(g, sign) in &self.letters {
            s.push_str(prefix);
            s.push_str(&g.index().to_string());
            if sign < 0 {
                s.push_str("^-1");
            }
        }
        s
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}
