//! Virtual knot groups: virtual braid representations, group presentations,
//! lower central quotients and free-by-cyclic structure.

pub mod braid;
pub mod catalog;
pub mod error;
pub mod fbc;
pub mod lcs;
pub mod magnus;
pub mod presentation;
pub mod report;
pub mod words;
pub mod zlattice;

pub use braid::{BraidLetter, BraidWord, Rep};
pub use error::{Error, Result};
pub use lcs::{compare_with_free, lcs_quotients, LcsReport, MAX_CLASS};
pub use magnus::{leading_weight, magnus, witt_rank, LeadingTerm, LieVector, TruncSeries};
pub use presentation::{group_from_braid, group_from_diagram, Diagram, Presentation};
pub use words::{Alphabet, Endo, GenId, Word};
pub use zlattice::{AbelianInvariants, IntMatrix};
pub use catalog::{KnotId, Settings};
pub use fbc::{FbcDecomposition, ShiftedRelator, ShiftedWord, Verdict};
pub use report::Source;
