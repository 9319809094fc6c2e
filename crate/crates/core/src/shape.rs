//! Strict ordered binary trees described by their left-to-right leaf depths.

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// A strict ordered binary tree on `n` leaves, stored as leaf depths `d_1, ..., d_n`.
///
/// A depth sequence is accepted only if some strict ordered tree has exactly
/// these leaves from left to right: the Kraft sum `sum 2^-d_i` is exactly 1
/// and each running prefix sum is a multiple of the next leaf's `2^-d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrictTreeShape {
    depths: Vec<u32>,
}

impl StrictTreeShape {
    pub fn from_depths(depths: Vec<u32>) -> Result<Self> {
        walk_preorder(&depths, |_| {})?;
        Ok(Self { depths })
    }

    pub(crate) fn from_depths_unchecked(depths: Vec<u32>) -> Self {
        debug_assert!(walk_preorder(&depths, |_| {}).is_ok());
        Self { depths }
    }

    /// The single-leaf tree.
    pub fn single_leaf() -> Self {
        Self { depths: vec![0] }
    }

    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn into_depths(self) -> Vec<u32> {
        self.depths
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// The full preorder flag string: `1` per internal node, `0` per leaf, `2n - 1` bits.
    pub fn preorder(&self) -> BitVec {
        let mut bits = BitVec::with_capacity(2 * self.len() - 1);
        walk_preorder(&self.depths, |b| bits.push(b)).expect("validated on construction");
        bits
    }

    /// Rebuilds a shape from a complete preorder flag string.
    pub fn from_preorder(flags: impl IntoIterator<Item = bool>) -> Result<Self> {
        let mut pending = vec![0u32];
        let mut depths = Vec::new();
        for flag in flags {
            let depth = pending.pop().ok_or(Error::MalformedTree("extra symbols after the last leaf"))?;
            if flag {
                pending.push(depth + 1);
                pending.push(depth + 1);
            } else {
                depths.push(depth);
            }
        }
        if !pending.is_empty() {
            return Err(Error::MalformedTree("tree is incomplete"));
        }
        Ok(Self { depths })
    }
}

/// Lays out the leaves left to right, reporting each preorder flag to `emit`.
///
/// `pending` holds the depths of open child slots, nearest slot on top. Each
/// leaf takes the top slot and splits it until the requested depth is reached.
fn walk_preorder(depths: &[u32], mut emit: impl FnMut(bool)) -> Result<()> {
    if depths.is_empty() {
        return Err(Error::InvalidShape);
    }
    let mut pending = vec![0u32];
    let mut internal_budget = depths.len() - 1;
    for &depth in depths {
        let mut slot = pending.pop().ok_or(Error::InvalidShape)?;
        if slot > depth {
            return Err(Error::InvalidShape);
        }
        while slot < depth {
            internal_budget = internal_budget.checked_sub(1).ok_or(Error::InvalidShape)?;
            emit(true);
            slot += 1;
            pending.push(slot);
        }
        emit(false);
    }
    if pending.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidShape)
    }
}
