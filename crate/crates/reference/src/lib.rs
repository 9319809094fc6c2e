//! Slow, independently written oracles and input generators for testing `pdz`.
//!
//! Nothing here shares code with the library under test: probabilities are
//! plain `BigRational`s or `f64`s, codewords are `Vec<bool>`, trees are
//! explicitly linked nodes built one trie bit at a time.

pub mod corpus;
pub mod measures;
pub mod tree;
pub mod trie;

pub use tree::LinkedTree;
