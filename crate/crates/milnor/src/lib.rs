//! Commutator calculus in free Milnor groups.
//!
//! The free Milnor group on `n` generators is the quotient of the free
//! group by the relations making each generator commute with all of its
//! conjugates. This crate decides equality there through truncated
//! power-series expansions, measures lower-central depth, certifies that
//! deep commutators are products of elementary ones, and applies the
//! same machinery to link-homotopy: invariants of links presented by
//! longitudes, generalized Borromean links built by Bing doubling and
//! ramification, and the band-sum moves that untie them.
//!
//! ```
//! use milnor::milnor::MilnorContext;
//! use milnor::parse::parse_word;
//!
//! let ctx = MilnorContext::new(3);
//! // A generator commutes with its own conjugates.
//! let w = parse_word("[x1,x1^x2]").unwrap();
//! assert!(ctx.is_trivial(&w).unwrap());
//! // It does not commute with the other generators.
//! let v = parse_word("[x1,x2]").unwrap();
//! assert_eq!(ctx.lcs_degree(&v).unwrap(), Some(2));
//! ```
//!
//! The binary `milnor` exposes the same operations as subcommands; see
//! [`cli`] or the book under `book/` for a walkthrough.

pub mod cli;
pub mod engel;
pub mod lie;
pub mod links;
pub mod magnus;
pub mod milnor;
pub mod parse;
pub mod words;

/// The book chapters, compiled as documentation so that every Rust
/// example in the guide runs under `cargo test`.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    pub mod words {}
    #[doc = include_str!("../../../book/src/expansion.md")]
    pub mod expansion {}
    #[doc = include_str!("../../../book/src/milnor-groups.md")]
    pub mod milnor_groups {}
    #[doc = include_str!("../../../book/src/engel-quotients.md")]
    pub mod engel_quotients {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    pub mod certificates {}
    #[doc = include_str!("../../../book/src/links.md")]
    pub mod links {}
    #[doc = include_str!("../../../book/src/untying.md")]
    pub mod untying {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
