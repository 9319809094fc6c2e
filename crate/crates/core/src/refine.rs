//! Trading `n` extra bits per level for a tighter worst-case ratio.
//!
//! Starting from the dyadic tree distribution (`max p_i / q_i < 4`), each level
//! `k = 3, 4, ...` stores one flag per symbol. Flagged symbols are those still
//! underweighted by a factor of at least `1 + 2^(3-k)`; their weight is doubled
//! and the whole vector renormalized. After level `k` the ratio is below
//! `2 + 2^(3-k)`, at a total cost of `kn - 2` bits.
//!
//! Intermediate distributions are kept as integer weights over a common
//! denominator, so doubling and renormalizing is exact and cheap.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitVec;
use crate::dist::{max_ratio, ProbabilityDistribution};
use crate::error::{Error, Result};
use crate::succinct::SuccinctTreeIndex;
use crate::treecode::{compress_t2, decode_tree, implied_distribution, TreePayload};

/// Base tree plus one flag vector per refinement level (`k = 3` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinePayload {
    k: u32,
    base: TreePayload,
    levels: Vec<BitVec>,
}

impl RefinePayload {
    /// Assembles a payload from its parts, checking the level count and lengths.
    pub fn new(k: u32, base: TreePayload, levels: Vec<BitVec>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        if levels.len() != (k - 2) as usize {
            return Err(Error::Corrupt(format!(
                "refinement with k = {k} needs {} levels, found {}",
                k - 2,
                levels.len()
            )));
        }
        let n = base.leaf_count();
        for (level, bits) in levels.iter().enumerate() {
            if bits.len() != n {
                return Err(Error::LevelLength {
                    level: level + 3,
                    found: bits.len(),
                    expected: n,
                });
            }
        }
        Ok(Self { k, base, levels })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn base(&self) -> &TreePayload {
        &self.base
    }

    pub fn levels(&self) -> &[BitVec] {
        &self.levels
    }

    pub fn leaf_count(&self) -> usize {
        self.base.leaf_count()
    }

    /// `kn - 2`.
    pub fn bit_len(&self) -> usize {
        self.base.bit_len() + self.levels.iter().map(BitVec::len).sum::<usize>()
    }

    /// Base bits followed by each level's flags in symbol order.
    pub fn to_bits(&self) -> BitVec {
        let mut bits = self.base.bits().clone();
        for level in &self.levels {
            bits.extend_from(level);
        }
        bits
    }

    /// Splits a `kn - 2` bit string back into base and levels.
    pub fn from_bits(k: u32, n: usize, bits: &BitVec) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        if n == 0 || bits.len() != k as usize * n - 2 {
            return Err(Error::Corrupt(format!(
                "refinement payload has {} bits, expected k*n - 2 = {}",
                bits.len(),
                (k as usize * n).saturating_sub(2)
            )));
        }
        let base_len = 2 * n - 2;
        let base = TreePayload::from_bits(bits.iter().take(base_len).collect());
        let levels = (0..(k - 2) as usize)
            .map(|l| {
                let start = base_len + l * n;
                (start..start + n).map(|i| bits.get(i)).collect()
            })
            .collect();
        Self::new(k, base, levels)
    }
}

/// The ratio guarantee after refining to parameter `k`: 4 for `k = 2`, else `2 + 2^(3-k)`.
pub fn ratio_bound(k: u32) -> BigRational {
    assert!(k >= 2);
    let two = BigRational::from_integer(2.into());
    if k == 2 {
        two.clone() + two
    } else {
        two + BigRational::new(BigInt::one(), BigInt::one() << (k - 3))
    }
}

/// Upper bound `(2^(k-2) + 1) / (2^(k-3) + 1)` on the renormalizer at level `k >= 3`.
pub fn normalizer_bound(k: u32) -> BigRational {
    assert!(k >= 3);
    BigRational::new(
        (BigInt::one() << (k - 2)) + 1,
        (BigInt::one() << (k - 3)) + 1,
    )
}

/// One refinement level: the flags, the exact normalizer and the refined distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefineStep {
    pub marks: BitVec,
    pub normalizer: BigRational,
    pub refined: ProbabilityDistribution,
}

/// Doubles flagged entries of `q` and renormalizes. Returns the normalizer
/// `sum_{marked} 2 q_i + sum_{unmarked} q_i` and the new distribution.
pub fn apply_level(q: &ProbabilityDistribution, marks: &BitVec) -> Result<(BigRational, ProbabilityDistribution)> {
    if marks.len() != q.len() {
        return Err(Error::LengthMismatch(q.len(), marks.len()));
    }
    let weights: Vec<BigUint> = q
        .weights()
        .iter()
        .zip(marks.iter())
        .map(|(w, m)| if m { w << 1u32 } else { w.clone() })
        .collect();
    let new_total: BigUint = weights.iter().sum();
    let normalizer = BigRational::new(new_total.into(), q.total().clone().into());
    Ok((normalizer, ProbabilityDistribution::from_weights(weights)?))
}

/// Flags every `i` with `p_i / q_i >= 1 + 2^(3-k)` and applies the level.
///
/// Requires `max p_i / q_i < ratio_bound(k - 1)`, which is what the previous
/// level guarantees.
pub fn refine_step(p: &ProbabilityDistribution, q_prev: &ProbabilityDistribution, k: u32) -> Result<RefineStep> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    if p.len() != q_prev.len() {
        return Err(Error::LengthMismatch(p.len(), q_prev.len()));
    }
    if !q_prev.strictly_positive() {
        return Err(Error::RefinePrecondition("previous distribution has a zero entry"));
    }
    if max_ratio(p, q_prev)? >= ratio_bound(k - 1) {
        return Err(Error::RefinePrecondition("previous level's ratio bound does not hold"));
    }
    let marks = level_marks(p, q_prev, k);
    let (normalizer, refined) = apply_level(q_prev, &marks)?;
    Ok(RefineStep {
        marks,
        normalizer,
        refined,
    })
}

/// `w_i / W >= (1 + 2^-s) a_i / A` rewritten as `2^s w_i A >= (2^s + 1) a_i W` with `s = k - 3`.
fn level_marks(p: &ProbabilityDistribution, q: &ProbabilityDistribution, k: u32) -> BitVec {
    let s = k - 3;
    let lhs_scale = q.total() << s;
    let rhs_scale = ((BigUint::one() << s) + 1u32) * p.total();
    p.weights()
        .iter()
        .zip(q.weights())
        .map(|(w, a)| !w.is_zero() && w * &lhs_scale >= a * &rhs_scale)
        .collect()
}

/// Compresses a strictly positive distribution to `kn - 2` bits.
pub fn compress_refined(p: &ProbabilityDistribution, k: u32) -> Result<RefinePayload> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let base = compress_t2(p)?;
    // Rebuild Q from the stored base exactly as the decoder will.
    let mut q = implied_distribution(&decode_tree(&base)?).to_distribution();
    let mut levels = Vec::with_capacity((k - 2) as usize);
    for level in 3..=k {
        let step = refine_step(p, &q, level)?;
        levels.push(step.marks);
        q = step.refined;
    }
    RefinePayload::new(k, base, levels)
}

/// Reconstructs the refined distribution from the payload alone.
pub fn decompress_refined(payload: &RefinePayload) -> Result<ProbabilityDistribution> {
    let mut q = implied_distribution(&decode_tree(payload.base())?).to_distribution();
    for marks in payload.levels() {
        q = apply_level(&q, marks)?.1;
    }
    Ok(q)
}

/// `q_i` of the refined distribution, read from the tree index and the mark
/// levels without expanding `Q`.
///
/// Every level doubles the marked weights, so with `c_j` marks on symbol `j`
/// the result is `q_j = 2^(c_j - d_j) / Z` where `Z = sum_j 2^(c_j - d_j)`.
/// `Z` is accumulated in a single streaming pass.
pub fn query_refined(index: &SuccinctTreeIndex, levels: &[BitVec], i: usize) -> Result<BigRational> {
    let n = index.leaf_count();
    if let Some((l, bits)) = levels.iter().enumerate().find(|(_, b)| b.len() != n) {
        return Err(Error::LevelLength {
            level: l + 3,
            found: bits.len(),
            expected: n,
        });
    }
    let exponent = |j: usize, d: u32| levels.iter().filter(|b| b.get(j)).count() as i64 - d as i64;
    let x_i = exponent(i - 1, index.leaf_depth(i)?);

    // Z = num / 2^scale, with scale large enough to keep every term integral
    let mut num = BigUint::zero();
    let mut scale = 0i64;
    for (j, d) in index.leaf_depths().enumerate() {
        let x = exponent(j, d);
        if x + scale < 0 {
            num <<= (-x - scale) as u64;
            scale = -x;
        }
        num += BigUint::one() << (x + scale) as u64;
    }
    let numer = BigUint::one() << (x_i + scale) as u64;
    Ok(BigRational::new(numer.into(), num.into()))
}
