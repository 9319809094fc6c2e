//! Lossy compression of probability distributions with relative-entropy guarantees.
//!
//! Given `P = p_1, ..., p_n`, the codecs here build a distribution `Q` that
//! can be stored in very few bits and whose relative entropy `D(P || Q)` is
//! provably small:
//!
//! | codec | stored size | guarantee |
//! |-------|-------------|-----------|
//! | [`treecode`] | `2n - 2` bits | `max p_i/q_i < 4`, `D < 2` |
//! | [`refine`] | `kn - 2` bits | `max p_i/q_i < 2 + 2^(3-k)` |
//! | [`sparse`] | `t (floor(log2 n) + 1)` bits, `t <= n^(1/(c+1))` | `D <= c H(P) + log2(pi^2/3)` |
//!
//! The tree codecs rest on [`mehlhorn::mehlhorn_tree`], which builds a strict
//! ordered binary tree with leaf depths `d_i < log2(1/p_i) + 2`; `Q` is then
//! `q_i = 2^-d_i`. [`succinct::SuccinctTreeIndex`] answers single `q_i`
//! queries straight from the stored tree, and [`succinct::smooth`] makes
//! distributions with zero entries usable by bounding every leaf depth.
//!
//! All probabilities are exact rationals except the sparse codec's output.

pub mod bits;
pub mod container;
pub mod dist;
pub mod error;
pub mod mehlhorn;
pub mod refine;
pub mod shape;
pub mod sparse;
pub mod succinct;
pub mod treecode;

pub use bits::BitVec;
pub use container::{Container, Method};
pub use dist::{entropy, max_ratio, parse_distribution, relative_entropy, Probabilities, ProbabilityDistribution};
pub use error::{Error, Result};
pub use mehlhorn::{codeword, contract_to_strict, mehlhorn_tree, midpoints, Codeword, PrefixMidpoints};
pub use refine::{compress_refined, decompress_refined, query_refined, refine_step, RefinePayload};
pub use shape::StrictTreeShape;
pub use sparse::{
    build_query_table, compress_sparse, decompress_sparse, select_heavy, SparsePayload, SparseQueryTable, Sparsity,
};
pub use succinct::{build_index, build_smoothed, smooth, NodeHandle, SuccinctTreeIndex};
pub use treecode::{compress_t2, decode_tree, encode_tree, implied_distribution, DyadicDistribution, TreePayload};
