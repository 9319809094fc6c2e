//! Storing a strict ordered tree in exactly `2n - 2` bits.
//!
//! The tree is written as its preorder flag string (`1` for an internal node,
//! `0` for a leaf). A strict tree on `n` leaves has `2n - 1` nodes and the last
//! node in preorder is always a leaf, so that final `0` is left implicit.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::bits::BitVec;
use crate::dist::{Probabilities, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::mehlhorn::mehlhorn_tree;
use crate::shape::StrictTreeShape;

/// The stored form of a strict tree: its preorder flags minus the final leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreePayload {
    bits: BitVec,
}

impl TreePayload {
    /// Wraps raw payload bits; validity is checked by [`decode_tree`].
    pub fn from_bits(bits: BitVec) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    pub fn bit_len(&self) -> usize {
        self.bits.len()
    }

    /// Leaf count implied by the payload length.
    pub fn leaf_count(&self) -> usize {
        self.bits.len() / 2 + 1
    }
}

/// A distribution whose probabilities are `q_i = 2^-d_i` for the leaf depths of a strict tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicDistribution {
    depths: Vec<u32>,
}

impl DyadicDistribution {
    pub fn depth_exponents(&self) -> &[u32] {
        &self.depths
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    /// `2^-d_i`, exactly.
    pub fn prob(&self, i: usize) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.depths[i])
    }

    /// The same distribution as integer weights `2^(max_depth - d_i)`.
    pub fn to_distribution(&self) -> ProbabilityDistribution {
        let max = self.depths.iter().copied().max().unwrap_or(0);
        ProbabilityDistribution::from_weights(self.depths.iter().map(|&d| BigUint::one() << (max - d)))
            .expect("a strict tree has at least one leaf")
    }
}

impl Probabilities for DyadicDistribution {
    fn len(&self) -> usize {
        self.depths.len()
    }

    fn log2_prob(&self, i: usize) -> Option<f64> {
        Some(-f64::from(self.depths[i]))
    }
}

pub fn encode_tree(shape: &StrictTreeShape) -> TreePayload {
    let bits = shape.preorder();
    let last = bits.len() - 1;
    debug_assert!(!bits.get(last));
    let bits: BitVec = bits.iter().take(last).collect();
    TreePayload { bits }
}

/// Rebuilds the tree, filling the single open slot left at the end with the implicit leaf.
pub fn decode_tree(payload: &TreePayload) -> Result<StrictTreeShape> {
    if payload.bits.len() % 2 != 0 {
        return Err(Error::MalformedTree("odd payload length"));
    }
    let mut pending = vec![0u32];
    let mut depths = Vec::with_capacity(payload.leaf_count());
    for flag in payload.bits.iter() {
        let depth = pending
            .pop()
            .ok_or(Error::MalformedTree("tree closes before the payload ends"))?;
        if flag {
            pending.push(depth + 1);
            pending.push(depth + 1);
        } else {
            depths.push(depth);
        }
    }
    match pending.as_slice() {
        [last] => depths.push(*last),
        _ => return Err(Error::MalformedTree("payload does not end one leaf short of a complete tree")),
    }
    Ok(StrictTreeShape::from_depths_unchecked(depths))
}

/// Compresses a strictly positive distribution to `2n - 2` bits.
pub fn compress_t2(p: &ProbabilityDistribution) -> Result<TreePayload> {
    Ok(encode_tree(&mehlhorn_tree(p)?))
}

pub fn implied_distribution(shape: &StrictTreeShape) -> DyadicDistribution {
    DyadicDistribution {
        depths: shape.depths().to_vec(),
    }
}
