//! A navigable `2n + o(n)`-bit index over a strict ordered tree.
//!
//! Nodes are identified by their preorder position in the flag string
//! (`1` = internal, `0` = leaf). Reading internal nodes as `+1` and leaves as
//! `-1`, let `E(q)` be the running excess before position `q`. The subtree of
//! `v` ends just before the first `q > v` with `E(q) = E(v) - 1`, so all
//! navigation reduces to searching for the first position, forward or
//! backward, whose excess drops to a target.
//!
//! The flag string is cut into blocks of `B = ceil(log2(2n)^2)` positions. For
//! each block the index keeps the excess at its start (which doubles as the
//! rank directory) and the minimum excess inside it. Block minima are
//! summarized again in groups of `L = ceil(log2(2n))`, level by level, so a
//! search scans at most one block at each end plus `L` summaries per level.
//!
//! The index also supports the probability query of the dyadic tree
//! distribution: descending from the root to the `i`-th leaf takes exactly
//! `d_i = log2(1/q_i)` steps.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::bits::{bit_width, BitVec, PackedInts};
use crate::dist::ProbabilityDistribution;
use crate::error::{Error, Result};
use crate::mehlhorn::mehlhorn_tree;
use crate::shape::StrictTreeShape;
use crate::treecode::{decode_tree, TreePayload};

/// For each byte of flags (lowest bit first): the smallest excess change seen
/// before any of its 8 positions, and the change over the whole byte.
const BYTE_MIN: [i8; 256] = byte_tables().0;
const BYTE_SUM: [i8; 256] = byte_tables().1;

const fn byte_tables() -> ([i8; 256], [i8; 256]) {
    let mut min = [0i8; 256];
    let mut sum = [0i8; 256];
    let mut b = 0;
    while b < 256 {
        let (mut e, mut low, mut j) = (0i8, 0i8, 0);
        while j < 8 {
            if e < low {
                low = e;
            }
            e += if (b >> j) & 1 == 1 { 1 } else { -1 };
            j += 1;
        }
        min[b] = low;
        sum[b] = e;
        b += 1;
    }
    (min, sum)
}

/// A node, named by its preorder position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeHandle(pub usize);

#[derive(Clone, Debug)]
pub struct SuccinctTreeIndex {
    leaves: usize,
    flags: BitVec,
    block_len: usize,
    fanout: usize,
    /// `E + 1` at the first position of each block.
    block_start: PackedInts,
    /// `levels[0][b]` is `min E + 1` over block `b`; `levels[h]` summarizes groups of `fanout` entries of `levels[h - 1]`.
    levels: Vec<PackedInts>,
}

impl SuccinctTreeIndex {
    pub fn from_shape(shape: &StrictTreeShape) -> Self {
        Self::from_flags(shape.preorder())
    }

    /// Loads the persistent form; the auxiliary directories are rebuilt in `O(n)`.
    pub fn from_payload(payload: &TreePayload) -> Result<Self> {
        decode_tree(payload)?;
        let mut flags = payload.bits().clone();
        flags.push(false);
        Ok(Self::from_flags(flags))
    }

    fn from_flags(flags: BitVec) -> Self {
        let leaves = flags.len().div_ceil(2);
        let log = ((2 * leaves) as f64).log2();
        let block_len = ((log * log).ceil() as usize).max(1);
        let fanout = (log.ceil() as usize).max(2);
        let width = bit_width(leaves as u64);

        // Positions 0..=flags.len() carry an excess value.
        let positions = flags.len() + 1;
        let blocks = positions.div_ceil(block_len);
        let mut starts = Vec::with_capacity(blocks);
        let mut minima = Vec::with_capacity(blocks);
        let mut excess: i64 = 0;
        for b in 0..blocks {
            starts.push((excess + 1) as u64);
            let mut low = excess;
            let end = ((b + 1) * block_len).min(positions);
            for q in b * block_len..end {
                // excess currently holds E(q)
                low = low.min(excess);
                if q < flags.len() {
                    excess += if flags.get(q) { 1 } else { -1 };
                }
            }
            minima.push((low + 1) as u64);
        }
        debug_assert_eq!(excess, -1);

        let mut levels = vec![PackedInts::from_values(width, &minima)];
        let mut current = minima;
        while current.len() > 1 {
            current = current.chunks(fanout).map(|c| *c.iter().min().unwrap()).collect();
            levels.push(PackedInts::from_values(width, &current));
        }

        Self {
            leaves,
            flags,
            block_len,
            fanout,
            block_start: PackedInts::from_values(width, &starts),
            levels,
        }
    }

    /// Number of leaves `n`.
    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// Number of nodes `2n - 1`.
    pub fn node_count(&self) -> usize {
        self.flags.len()
    }

    pub fn root(&self) -> NodeHandle {
        NodeHandle(0)
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Bits in the preorder flag string, `2n - 1`.
    pub fn shape_bits(&self) -> usize {
        self.flags.len()
    }

    /// Bits in the rank directory and the excess summaries.
    pub fn aux_bits(&self) -> usize {
        self.block_start.bit_len() + self.levels.iter().map(PackedInts::bit_len).sum::<usize>()
    }

    pub fn total_bits(&self) -> usize {
        self.shape_bits() + self.aux_bits()
    }

    /// The tree shape, decoded from the flag string.
    pub fn shape(&self) -> StrictTreeShape {
        StrictTreeShape::from_preorder(self.flags.iter()).expect("index holds a valid tree")
    }

    fn check(&self, v: NodeHandle) -> Result<()> {
        if v.0 < self.flags.len() {
            Ok(())
        } else {
            Err(Error::NoSuchNode(v.0))
        }
    }

    pub fn is_leaf(&self, v: NodeHandle) -> Result<bool> {
        self.check(v)?;
        Ok(!self.flags.get(v.0))
    }

    /// Number of internal nodes strictly before position `q`.
    pub fn rank_internal(&self, q: usize) -> usize {
        let excess = self.excess(q);
        ((q as i64 + excess) / 2) as usize
    }

    /// `E(q)` for `0 <= q <= 2n - 1`.
    fn excess(&self, q: usize) -> i64 {
        let b = q / self.block_len;
        let start = b * self.block_len;
        let ones = self.flags.count_ones_in(start, q) as i64;
        self.block_start.get(b) as i64 - 1 + 2 * ones - (q - start) as i64
    }

    fn step(&self, q: usize) -> i64 {
        if self.flags.get(q) {
            1
        } else {
            -1
        }
    }

    fn block_min(&self, level: usize, idx: usize) -> i64 {
        self.levels[level].get(idx) as i64 - 1
    }

    /// Smallest `q >= from` with `E(q) <= target`.
    fn forward_search(&self, from: usize, target: i64) -> Option<usize> {
        let positions = self.flags.len() + 1;
        let block = from / self.block_len;
        let end = ((block + 1) * self.block_len).min(positions);
        if let Some(q) = self.first_in(from, end, self.excess(from), target) {
            return Some(q);
        }
        let next = self.next_block(block, target)?;
        let start = next * self.block_len;
        let end = (start + self.block_len).min(positions);
        let found = self.first_in(start, end, self.block_start.get(next) as i64 - 1, target);
        debug_assert!(found.is_some(), "block summary promised a position at or below the target");
        found
    }

    /// Largest `q <= from` with `E(q) <= target`.
    fn backward_search(&self, from: usize, target: i64) -> Option<usize> {
        let block = from / self.block_len;
        let start = block * self.block_len;
        if let Some(q) = self.last_in_block(start, from + 1, target) {
            return Some(q);
        }
        let prev = self.prev_block(block, target)?;
        let start = prev * self.block_len;
        let found = self.last_in_block(start, start + self.block_len, target);
        debug_assert!(found.is_some(), "block summary promised a position at or below the target");
        found
    }

    /// Whether the whole byte at `q` can be summarized in one table lookup.
    #[inline]
    fn full_byte(&self, q: usize, end: usize) -> bool {
        q % 8 == 0 && q + 8 <= end && q + 8 <= self.flags.len()
    }

    /// First `q` in `from..end` with `E(q) <= target`, given `excess = E(from)`.
    fn first_in(&self, from: usize, end: usize, mut excess: i64, target: i64) -> Option<usize> {
        let mut q = from;
        while q < end {
            if self.full_byte(q, end) {
                let b = self.flags.byte(q) as usize;
                if excess + (BYTE_MIN[b] as i64) > target {
                    excess += BYTE_SUM[b] as i64;
                    q += 8;
                    continue;
                }
            }
            if excess <= target {
                return Some(q);
            }
            if q < self.flags.len() {
                excess += self.step(q);
            }
            q += 1;
        }
        None
    }

    /// Last position in `start..end` (within one block) whose excess is at most `target`.
    fn last_in_block(&self, start: usize, end: usize, target: i64) -> Option<usize> {
        let end = end.min(self.flags.len() + 1);
        let mut excess = self.block_start.get(start / self.block_len) as i64 - 1;
        let mut found = None;
        let mut q = start;
        while q < end {
            if self.full_byte(q, end) {
                let b = self.flags.byte(q) as usize;
                if excess + (BYTE_MIN[b] as i64) > target {
                    excess += BYTE_SUM[b] as i64;
                    q += 8;
                    continue;
                }
            }
            if excess <= target {
                found = Some(q);
            }
            if q < self.flags.len() {
                excess += self.step(q);
            }
            q += 1;
        }
        found
    }

    /// First block after `block` whose minimum is at most `target`.
    fn next_block(&self, block: usize, target: i64) -> Option<usize> {
        let mut idx = block;
        for level in 0..self.levels.len() {
            let len = self.levels[level].len();
            let group_end = ((idx / self.fanout + 1) * self.fanout).min(len);
            if let Some(hit) = (idx + 1..group_end).find(|&s| self.block_min(level, s) <= target) {
                return Some(self.descend(level, hit, target, true));
            }
            idx /= self.fanout;
        }
        None
    }

    /// Last block before `block` whose minimum is at most `target`.
    fn prev_block(&self, block: usize, target: i64) -> Option<usize> {
        let mut idx = block;
        for level in 0..self.levels.len() {
            let group_start = idx / self.fanout * self.fanout;
            if let Some(hit) = (group_start..idx).rev().find(|&s| self.block_min(level, s) <= target) {
                return Some(self.descend(level, hit, target, false));
            }
            idx /= self.fanout;
        }
        None
    }

    fn descend(&self, mut level: usize, mut idx: usize, target: i64, leftmost: bool) -> usize {
        while level > 0 {
            level -= 1;
            let first = idx * self.fanout;
            let children = first..(first + self.fanout).min(self.levels[level].len());
            let mut hits = children.filter(|&c| self.block_min(level, c) <= target);
            idx = if leftmost { hits.next() } else { hits.last() }
                .expect("summary minimum comes from one of its children");
        }
        idx
    }

    /// Last position of the subtree rooted at `v`.
    fn subtree_end(&self, v: usize) -> usize {
        let target = self.excess(v) - 1;
        self.forward_search(v + 1, target).expect("every subtree closes") - 1
    }

    pub fn left_child(&self, v: NodeHandle) -> Result<NodeHandle> {
        if self.is_leaf(v)? {
            return Err(Error::LeafNode(v.0));
        }
        Ok(NodeHandle(v.0 + 1))
    }

    pub fn right_child(&self, v: NodeHandle) -> Result<NodeHandle> {
        let left = self.left_child(v)?;
        Ok(NodeHandle(self.subtree_end(left.0) + 1))
    }

    pub fn parent(&self, v: NodeHandle) -> Result<NodeHandle> {
        self.check(v)?;
        if v.0 == 0 {
            return Err(Error::RootNode);
        }
        if self.flags.get(v.0 - 1) {
            return Ok(NodeHandle(v.0 - 1));
        }
        // v is a right child: its parent is the nearest earlier position at the same excess.
        let target = self.excess(v.0);
        let u = self.backward_search(v.0 - 1, target).expect("a right child has a parent");
        Ok(NodeHandle(u))
    }

    /// Number of nodes in the subtree rooted at `v`, counting `v` itself.
    pub fn num_descendants(&self, v: NodeHandle) -> Result<usize> {
        self.check(v)?;
        Ok(self.subtree_end(v.0) - v.0 + 1)
    }

    fn check_leaf_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.leaves {
            Err(Error::IndexOutOfRange(i as u64, self.leaves as u64))
        } else {
            Ok(())
        }
    }

    /// Depth of the `i`-th leaf (1-based) and the number of descent steps taken to find it.
    pub fn leaf_depth_counted(&self, i: usize) -> Result<(u32, usize)> {
        self.check_leaf_index(i)?;
        let mut remaining = i;
        let mut v = 0;
        let mut steps = 0;
        while self.flags.get(v) {
            let left = v + 1;
            let left_size = if self.flags.get(left) {
                self.subtree_end(left) - left + 1
            } else {
                1
            };
            debug_assert!(left_size % 2 == 1);
            let left_leaves = left_size.div_ceil(2);
            if remaining <= left_leaves {
                v = left;
            } else {
                remaining -= left_leaves;
                v = left + left_size;
            }
            steps += 1;
        }
        debug_assert_eq!(remaining, 1);
        Ok((steps as u32, steps))
    }

    pub fn leaf_depth(&self, i: usize) -> Result<u32> {
        self.leaf_depth_counted(i).map(|(d, _)| d)
    }

    /// Leaf depths left to right in one pass over the flags, keeping only a
    /// stack of pending right-child depths.
    pub fn leaf_depths(&self) -> impl Iterator<Item = u32> + '_ {
        let mut pending: Vec<u32> = Vec::new();
        let mut depth = 0u32;
        self.flags.iter().filter_map(move |internal| {
            if internal {
                pending.push(depth + 1);
                depth += 1;
                None
            } else {
                let d = depth;
                depth = pending.pop().unwrap_or(0);
                Some(d)
            }
        })
    }

    /// `q_i = 2^-d_i` for the `i`-th leaf, exactly.
    pub fn query_prob(&self, i: usize) -> Result<BigRational> {
        let depth = self.leaf_depth(i)?;
        Ok(BigRational::new(BigInt::one(), BigInt::one() << depth))
    }
}

/// Builds the index for the Mehlhorn tree of a strictly positive distribution.
pub fn build_index(p: &ProbabilityDistribution) -> Result<SuccinctTreeIndex> {
    Ok(SuccinctTreeIndex::from_shape(&mehlhorn_tree(p)?))
}

/// Mixes `P` with the uniform distribution: `p'_i = (p_i + (eps/4)/n) / (1 + eps/4)`.
pub fn smooth(p: &ProbabilityDistribution, epsilon: &BigRational) -> Result<ProbabilityDistribution> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidEpsilon);
    }
    // With eps = a/b and p_i = w_i/W: p'_i = (4 b n w_i + a W) / (n W (4b + a)).
    let a = epsilon.numer().magnitude();
    let b = epsilon.denom().magnitude();
    let scale: BigUint = (b << 2u32) * BigUint::from(p.len());
    let floor = a * p.total();
    ProbabilityDistribution::from_weights(p.weights().iter().map(|w| w * &scale + &floor))
}

/// Builds the index over `smooth(P, eps)`; accepts distributions with zero entries.
pub fn build_smoothed(p: &ProbabilityDistribution, epsilon: &BigRational) -> Result<SuccinctTreeIndex> {
    build_index(&smooth(p, epsilon)?)
}
