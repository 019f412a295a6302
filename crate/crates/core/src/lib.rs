//! Succinct index of maximal palindromes.
//!
//! [`PalIndex`] stores the maximal even palindrome at every center of a
//! string in `O(n)` bits and answers a center query in constant time. In
//! general mode it indexes the doubled string, which makes odd palindromes
//! answerable too. [`LpqIndex`] adds range-maximum structures on top and
//! returns the longest palindrome inside any substring in `O(log n)`.

pub mod bits;
pub mod cli;
pub mod error;
pub mod format;
pub mod internal_lpq;
pub mod lepal_encoding;
pub mod long_index;
pub mod mepal_index;
pub mod pal_core;
pub mod rmq;
pub mod short_index;

pub use error::{Error, Result};
pub use internal_lpq::LpqIndex;
pub use mepal_index::{default_tau, IndexParams, PalIndex, SpaceReport};
pub use pal_core::{MaxPalArray, SymbolString};
pub use rmq::{Rmq, RmqMode};
pub use short_index::ShortMode;
