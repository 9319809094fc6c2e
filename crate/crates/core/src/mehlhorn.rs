//! Linear-time alphabetic tree construction from interval midpoints.
//!
//! Symbol `i` is assigned the first `ceil(log2(2 / p_i))` bits of the binary
//! expansion of `S_i = p_i / 2 + sum_{j<i} p_j`. These codewords are
//! prefix-free and increasing, so their trie is an ordered binary tree whose
//! `i`-th leaf has depth below `log2(1 / p_i) + 2`. Contracting the trie's
//! unary nodes turns it into a strict tree without increasing any depth.
//!
//! The contraction never builds the trie. In a sorted prefix-free code, the
//! branching nodes are exactly the points where neighbouring codewords
//! diverge, at string depth `lcp(c_i, c_{i+1})`, and after contraction the
//! depth of a leaf is the number of branching nodes above it. Those nodes form
//! the min-Cartesian tree of the LCP array, which a stack builds in `O(n)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dist::ProbabilityDistribution;
use crate::error::{Error, Result};
use crate::shape::StrictTreeShape;

/// The midpoints `S_1 < ... < S_n` of the cumulative intervals of a distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixMidpoints {
    midpoints: Vec<BigRational>,
}

impl PrefixMidpoints {
    pub fn as_slice(&self) -> &[BigRational] {
        &self.midpoints
    }

    pub fn into_vec(self) -> Vec<BigRational> {
        self.midpoints
    }
}

/// A finite bit string, most significant bit first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    value: BigUint,
    len: u64,
}

impl Codeword {
    /// The low `len` bits of `value`. Panics if `value` has more bits.
    pub fn new(value: BigUint, len: u64) -> Self {
        assert!(value.bits() <= len, "value does not fit in {len} bits");
        Self { value, len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).rev().map(move |i| self.value.bit(i))
    }

    /// Length of the common prefix, plus whether `self` sorts before `other`
    /// at the first differing bit. `None` means one is a prefix of the other.
    fn divergence(&self, other: &Codeword) -> Option<(u64, bool)> {
        let common = self.len.min(other.len);
        let a = &self.value >> (self.len - common);
        let b = &other.value >> (other.len - common);
        if a == b {
            return None;
        }
        let differing = (&a ^ &b).bits();
        Some((common - differing, a < b))
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.bits() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codeword(\"{self}\")")
    }
}

impl std::str::FromStr for Codeword {
    type Err = char;

    fn from_str(s: &str) -> std::result::Result<Self, char> {
        let mut value = BigUint::zero();
        for c in s.chars() {
            value <<= 1u32;
            match c {
                '0' => {}
                '1' => value += 1u32,
                other => return Err(other),
            }
        }
        Ok(Self {
            value,
            len: s.chars().count() as u64,
        })
    }
}

fn require_positive(p: &ProbabilityDistribution) -> Result<()> {
    match p.first_zero() {
        Some(i) => Err(Error::ZeroProbability(i)),
        None => Ok(()),
    }
}

/// `S_i = p_i / 2 + sum_{j<i} p_j` for every symbol, exactly.
pub fn midpoints(p: &ProbabilityDistribution) -> Result<PrefixMidpoints> {
    require_positive(p)?;
    let denom = BigInt::from(p.total() << 1u32);
    let mut prefix = BigUint::zero();
    let midpoints = p
        .weights()
        .iter()
        .map(|w| {
            let numer = (&prefix << 1u32) + w;
            prefix += w;
            BigRational::new(numer.into(), denom.clone())
        })
        .collect();
    Ok(PrefixMidpoints { midpoints })
}

/// Smallest `len` with `2^len * numer >= 2 * denom`, i.e. `ceil(log2(2 / p))` for `p = numer / denom`.
fn codeword_len(numer: &BigUint, denom: &BigUint) -> u64 {
    let target = denom << 1u32;
    let guess = target.bits().saturating_sub(numer.bits());
    if (numer << guess) >= target {
        guess
    } else {
        guess + 1
    }
}

/// The first `ceil(log2(2 / p))` bits of the binary expansion of `s`.
///
/// Panics unless `0 < p <= 1` and `0 <= s < 1`.
pub fn codeword(s: &BigRational, p: &BigRational) -> Codeword {
    assert!(p.is_positive() && *p <= BigRational::one(), "p must lie in (0, 1]");
    assert!(!s.is_negative() && *s < BigRational::one(), "s must lie in [0, 1)");
    let len = codeword_len(p.numer().magnitude(), p.denom().magnitude());
    let value = (s.numer().magnitude() << len) / s.denom().magnitude();
    Codeword::new(value, len)
}

fn codewords_of(p: &ProbabilityDistribution) -> Vec<Codeword> {
    let denom = p.total() << 1u32;
    let mut prefix = BigUint::zero();
    p.weights()
        .iter()
        .map(|w| {
            let len = codeword_len(w, p.total());
            let numer = (&prefix << 1u32) + w;
            prefix += w;
            Codeword::new((numer << len) / &denom, len)
        })
        .collect()
}

/// The Mehlhorn codewords of a strictly positive distribution, in symbol order.
pub fn codewords(p: &ProbabilityDistribution) -> Result<Vec<Codeword>> {
    require_positive(p)?;
    Ok(codewords_of(p))
}

/// Contracts the trie of sorted prefix-free codewords into a strict tree.
///
/// Unary trie nodes are removed until every internal node has two children;
/// leaf order is preserved. Fails if the codewords are not strictly increasing
/// or if one is a prefix of another.
pub fn contract_to_strict(codewords: &[Codeword]) -> Result<StrictTreeShape> {
    if codewords.is_empty() {
        return Err(Error::Empty);
    }
    let mut lcp = Vec::with_capacity(codewords.len() - 1);
    for (i, pair) in codewords.windows(2).enumerate() {
        match pair[0].divergence(&pair[1]) {
            None => return Err(Error::NotPrefixFree(i, i + 1)),
            Some((_, false)) => return Err(Error::NotIncreasing(i, i + 1)),
            Some((common, true)) => lcp.push(common),
        }
    }
    Ok(StrictTreeShape::from_depths_unchecked(depths_from_lcp(&lcp)))
}

/// Leaf depths of the strict tree whose internal nodes are the divergence
/// points between neighbouring leaves, `lcp[j]` being the string depth of the
/// node separating leaf `j` from leaf `j + 1`.
fn depths_from_lcp(lcp: &[u64]) -> Vec<u32> {
    const NONE: usize = usize::MAX;
    let m = lcp.len();
    let mut parent = vec![NONE; m];
    let mut stack: Vec<usize> = Vec::new();
    for j in 0..m {
        let mut last = NONE;
        while let Some(&top) = stack.last() {
            if lcp[top] <= lcp[j] {
                break;
            }
            last = stack.pop().unwrap();
        }
        debug_assert!(stack.last().is_none_or(|&top| lcp[top] < lcp[j]));
        if last != NONE {
            parent[last] = j;
        }
        if let Some(&top) = stack.last() {
            parent[j] = top;
        }
        stack.push(j);
    }

    // Node depths, resolved by climbing to the nearest already-known ancestor.
    let mut depth = vec![u32::MAX; m];
    let mut path = Vec::new();
    for j in 0..m {
        let mut v = j;
        while depth[v] == u32::MAX && parent[v] != NONE {
            path.push(v);
            v = parent[v];
        }
        if depth[v] == u32::MAX {
            depth[v] = 0;
        }
        let mut d = depth[v];
        while let Some(u) = path.pop() {
            d += 1;
            depth[u] = d;
        }
    }

    (0..=m)
        .map(|i| {
            let left = i.checked_sub(1);
            let right = (i < m).then_some(i);
            match (left, right) {
                (None, None) => 0,
                (Some(a), None) => depth[a] + 1,
                (None, Some(b)) => depth[b] + 1,
                (Some(a), Some(b)) => {
                    if lcp[a] > lcp[b] {
                        depth[a] + 1
                    } else {
                        depth[b] + 1
                    }
                }
            }
        })
        .collect()
}

/// Builds the strict ordered tree whose `i`-th leaf has depth below `log2(1 / p_i) + 2`.
pub fn mehlhorn_tree(p: &ProbabilityDistribution) -> Result<StrictTreeShape> {
    require_positive(p)?;
    if p.len() == 1 {
        return Ok(StrictTreeShape::single_leaf());
    }
    contract_to_strict(&codewords_of(p))
}
