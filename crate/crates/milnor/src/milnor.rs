//! Decision procedures in the free Milnor group on `n` generators.
//!
//! The free Milnor group is the quotient of the free group by the relations
//! making each generator commute with all of its conjugates. The reduced
//! expansion ([`crate::magnus`]) is injective on this quotient, so equality
//! and triviality are decided by comparing finitely many integer
//! coefficients. No rewriting system is involved.
//!
//! ```
//! use milnor::{milnor::MilnorContext, parse::parse_word};
//! let ctx = MilnorContext::new(2);
//! // x1 commutes with its conjugates: the defining relation maps to 1.
//! let relator = parse_word("[x1,x1^x2]").unwrap();
//! assert!(ctx.is_trivial(&relator).unwrap());
//! ```

use crate::magnus::{expand_reduced, MagnusError, ReducedSeries};
use crate::words::Word;

/// A fixed alphabet size for Milnor-group computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MilnorContext {
    n: u32,
}

impl MilnorContext {
    /// Panics if `n` is zero.
    pub fn new(n: u32) -> MilnorContext {
        assert!(n >= 1, "Milnor context needs at least one generator");
        MilnorContext { n }
    }

    pub fn gens(&self) -> u32 {
        self.n
    }

    /// Reduced expansion of a word, truncated at degree `n`.
    pub fn expand(&self, u: &Word) -> Result<ReducedSeries, MagnusError> {
        expand_reduced(u, self.n)
    }

    /// Equality in the free Milnor group, via injectivity of the reduced
    /// expansion.
    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool, MagnusError> {
        Ok(self.expand(u)? == self.expand(v)?)
    }

    /// Triviality in the free Milnor group.
    pub fn is_trivial(&self, u: &Word) -> Result<bool, MagnusError> {
        Ok(self.expand(u)?.is_one())
    }

    /// Leading degree of `u` in the lower-central filtration, read off the
    /// reduced expansion. `None` means `u` is trivial in the Milnor group.
    ///
    /// For a non-trivial `u` this is the largest `k` with `u` in the `k`-th
    /// lower central series term.
    pub fn lcs_degree(&self, u: &Word) -> Result<Option<usize>, MagnusError> {
        Ok(self.expand(u)?.lowest_degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn defining_relation_is_trivial() {
        let ctx = MilnorContext::new(2);
        assert!(ctx.is_trivial(&w("[x1,x1^x2]")).unwrap());
        assert!(ctx.equal(&Word::identity(), &w("[x1,x1^x2]")).unwrap());
    }

    #[test]
    fn distinct_generators_are_distinct() {
        let ctx = MilnorContext::new(2);
        assert!(!ctx.equal(&w("x1"), &w("x2")).unwrap());
    }

    #[test]
    fn repeated_index_basic_commutator_is_trivial() {
        let ctx = MilnorContext::new(3);
        assert!(ctx.is_trivial(&w("[x1,x2,x1]")).unwrap());
        assert!(!ctx.is_trivial(&w("[x1,x2,x3]")).unwrap());
    }

    #[test]
    fn class_is_exactly_three_on_three_generators() {
        let ctx = MilnorContext::new(3);
        assert_eq!(ctx.lcs_degree(&w("[x1,x2,x3]")).unwrap(), Some(3));
        // Any fourth entry forces a repeated index.
        for g in 1..=3 {
            let extended = Word::commutator(&w("[x1,x2,x3]"), &Word::gen(g));
            assert!(ctx.is_trivial(&extended).unwrap());
        }
    }

    #[test]
    fn lcs_degrees_of_small_words() {
        let ctx = MilnorContext::new(4);
        assert_eq!(ctx.lcs_degree(&w("x1")).unwrap(), Some(1));
        assert_eq!(ctx.lcs_degree(&w("[x1,x2]")).unwrap(), Some(2));
        assert_eq!(ctx.lcs_degree(&Word::identity()).unwrap(), None);
    }

    #[test]
    fn conjugation_is_invisible_at_top_degree() {
        let ctx = MilnorContext::new(3);
        let top = w("[x1,x2,x3]");
        for c in ["x1", "x2x3", "[x1,x2]x3^-1"] {
            let conj = top.conjugate(&w(c));
            assert!(ctx.equal(&conj, &top).unwrap());
        }
        // One degree below the top this fails: pin the counterexample.
        let sub = w("[x1,x2]");
        let conj = sub.conjugate(&Word::gen(3));
        assert!(!ctx.equal(&conj, &sub).unwrap());
    }
}
