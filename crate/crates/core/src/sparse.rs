//! Sublinear storage that keeps only the indices of the heavy symbols.
//!
//! With parameter `c >= 1`, a symbol is heavy when `p_i >= n^(-1/(c+1))`, so
//! there are at most `n^(1/(c+1))` of them. Ranking the heavy symbols by
//! decreasing probability, the `j`-th one is assigned `3 / (pi j)^2` and every
//! other symbol shares what is left evenly. Because `sum 1/j^2 = pi^2/6`, the
//! heavy mass stays below 1/2 and each light symbol gets more than `1/(2n)`.
//! The relative entropy is then at most `c H(P) + log2(pi^2 / 3)`.
//!
//! The reconstructed probabilities are irrational, so this is the one codec
//! that hands back `f64` values.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::{bit_width, BitVec};
use crate::dist::{log2_biguint, ProbabilityDistribution};
use crate::error::{Error, Result};

/// Largest accepted `numerator + denominator` of the sparsity parameter; the
/// heavy-symbol test raises probabilities to this power.
pub const MAX_SPARSITY_TERMS: u64 = 2048;

/// The parameter `c = num / den >= 1`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sparsity {
    num: u64,
    den: u64,
}

impl Sparsity {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        let invalid = || Error::InvalidSparsity(format!("{num}/{den}"));
        if den == 0 || num < den {
            return Err(invalid());
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        if num + den > MAX_SPARSITY_TERMS {
            return Err(invalid());
        }
        Ok(Self { num, den })
    }

    pub fn integer(c: u64) -> Result<Self> {
        Self::new(c, 1)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `c + 1 = exponent / den`.
    fn exponent(&self) -> u32 {
        (self.num + self.den) as u32
    }
}

impl fmt::Display for Sparsity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Sparsity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidSparsity(s.to_owned());
        let (num, den) = s.split_once('/').unwrap_or((s, "1"));
        let num = num.trim().parse().map_err(|_| invalid())?;
        let den = den.trim().parse().map_err(|_| invalid())?;
        Self::new(num, den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `3 / (pi j)^2`, the probability given to the heavy symbol of rank `j`.
pub fn heavy_prob(rank: u64) -> f64 {
    let j = rank as f64;
    3.0 / (PI * PI * j * j)
}

/// Width `floor(log2 n) + 1` of a serialized symbol index.
pub fn index_width(n: u64) -> u32 {
    bit_width(n)
}

/// Width `floor(log2(n) / (c + 1)) + 1` of a serialized rank.
pub fn rank_width(n: u64, c: Sparsity) -> u32 {
    // Largest m with 2^(m (c+1)) <= n, i.e. 2^(m * exponent) <= n^den.
    let bound = BigUint::from(n).pow(c.den as u32);
    let mut m = 0u32;
    while (BigUint::one() << ((m as u64 + 1) * c.exponent() as u64)) <= bound {
        m += 1;
    }
    m + 1
}

/// `floor(n^(1/(c+1)))`, the most heavy symbols any distribution on `n` symbols can have.
pub fn max_heavy(n: u64, c: Sparsity) -> u64 {
    let bound = BigUint::from(n).pow(c.den as u32);
    let fits = |m: u64| BigUint::from(m).pow(c.exponent()) <= bound;
    let mut m = (n as f64).powf(c.den as f64 / c.exponent() as f64).floor() as u64;
    while m > 0 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// Whether `w / total >= n^(-1/(c+1))`, i.e. `w^e * n^den >= total^e` with `e = num + den`.
fn is_heavy(w: &BigUint, total: &BigUint, n: u64, c: Sparsity) -> bool {
    if w.is_zero() {
        return false;
    }
    let e = c.exponent();
    let margin = e as f64 * (log2_biguint(w) - log2_biguint(total)) + c.den as f64 * (n as f64).log2();
    if margin > 1e-6 {
        return true;
    }
    if margin < -1e-6 {
        return false;
    }
    w.pow(e) * BigUint::from(n).pow(c.den as u32) >= total.pow(e)
}

/// The stored form: `n`, `c` and the heavy symbol indices (1-based) by decreasing probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePayload {
    n: u64,
    c: Sparsity,
    heavy: Vec<u64>,
}

impl SparsePayload {
    /// Checks that the indices are distinct and lie in `1..=n`.
    pub fn new(n: u64, c: Sparsity, heavy: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        check_indices(n, &heavy)?;
        Ok(Self { n, c, heavy })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> Sparsity {
        self.c
    }

    pub fn t(&self) -> u64 {
        self.heavy.len() as u64
    }

    /// Heavy indices `r_1, ..., r_t`, largest probability first.
    pub fn heavy_indices(&self) -> &[u64] {
        &self.heavy
    }

    /// `t (floor(log2 n) + 1)`.
    pub fn bit_len(&self) -> usize {
        self.heavy.len() * index_width(self.n) as usize
    }

    /// Each `r_j - 1` in `floor(log2 n) + 1` bits, in rank order.
    pub fn to_bits(&self) -> BitVec {
        let width = index_width(self.n);
        let mut bits = BitVec::with_capacity(self.bit_len());
        for &r in &self.heavy {
            bits.push_int(r - 1, width);
        }
        bits
    }

    pub fn from_bits(n: u64, c: Sparsity, t: u64, bits: &BitVec) -> Result<Self> {
        let width = index_width(n) as usize;
        if bits.len() as u64 != t * width as u64 {
            return Err(Error::Corrupt(format!(
                "sparse payload has {} bits, expected t*(floor(log2 n)+1) = {}",
                bits.len(),
                t * width as u64
            )));
        }
        let heavy = (0..t as usize)
            .map(|j| bits.read_int(j * width, width as u32) + 1)
            .collect();
        Self::new(n, c, heavy)
    }
}

fn check_indices(n: u64, heavy: &[u64]) -> Result<()> {
    if heavy.len() as u64 > n {
        return Err(Error::Corrupt(format!("{} heavy symbols among {n}", heavy.len())));
    }
    let mut seen = BitVec::zeros(n as usize);
    for &r in heavy {
        if r == 0 || r > n {
            return Err(Error::IndexOutOfRange(r, n));
        }
        if seen.get(r as usize - 1) {
            return Err(Error::DuplicateIndex(r));
        }
        seen.set(r as usize - 1, true);
    }
    Ok(())
}

/// Collects the symbols with `p_i >= n^(-1/(c+1))`, ordered by decreasing
/// probability with ties broken by the smaller index.
pub fn select_heavy(p: &ProbabilityDistribution, c: Sparsity) -> Result<SparsePayload> {
    let n = p.len() as u64;
    let mut heavy: Vec<usize> = (0..p.len())
        .filter(|&i| is_heavy(p.weight(i), p.total(), n, c))
        .collect();
    heavy.sort_by(|&a, &b| p.weight(b).cmp(p.weight(a)).then(a.cmp(&b)));
    SparsePayload::new(n, c, heavy.into_iter().map(|i| i as u64 + 1).collect())
}

/// Same as [`select_heavy`]; the payload is exactly the heavy index list.
pub fn compress_sparse(p: &ProbabilityDistribution, c: Sparsity) -> Result<SparsePayload> {
    select_heavy(p, c)
}

/// Probability of each heavy rank and of each light symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Assignment {
    heavy_scale: f64,
    light: f64,
}

impl Assignment {
    fn new(n: u64, t: u64) -> Self {
        let heavy_mass: f64 = (1..=t).map(heavy_prob).sum();
        if t < n {
            Self {
                heavy_scale: 1.0,
                light: (1.0 - heavy_mass) / (n - t) as f64,
            }
        } else {
            // Every symbol is heavy (only possible for n = 1): renormalize the heavy values.
            Self {
                heavy_scale: 1.0 / heavy_mass,
                light: 0.0,
            }
        }
    }

    fn heavy(&self, rank: u64) -> f64 {
        heavy_prob(rank) * self.heavy_scale
    }
}

/// Expands the payload into all `n` probabilities.
pub fn decompress_sparse(payload: &SparsePayload) -> Result<Vec<f64>> {
    check_indices(payload.n, &payload.heavy)?;
    let assignment = Assignment::new(payload.n, payload.t());
    let mut q = vec![assignment.light; payload.n as usize];
    for (j, &r) in payload.heavy.iter().enumerate() {
        q[r as usize - 1] = assignment.heavy(j as u64 + 1);
    }
    Ok(q)
}

/// Heavy `(index, rank)` pairs sorted by index, answering single-symbol queries by binary search.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseQueryTable {
    n: u64,
    c: Sparsity,
    pairs: Vec<(u64, u64)>,
    assignment: Assignment,
}

pub fn build_query_table(payload: &SparsePayload) -> SparseQueryTable {
    let mut pairs: Vec<(u64, u64)> = payload
        .heavy
        .iter()
        .enumerate()
        .map(|(j, &r)| (r, j as u64 + 1))
        .collect();
    pairs.sort_unstable();
    SparseQueryTable {
        n: payload.n,
        c: payload.c,
        assignment: Assignment::new(payload.n, payload.t()),
        pairs,
    }
}

impl SparseQueryTable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn c(&self) -> Sparsity {
        self.c
    }

    pub fn t(&self) -> u64 {
        self.pairs.len() as u64
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// `t (floor(log2 n) + floor(log2(n)/(c+1)) + 2)`.
    pub fn bit_len(&self) -> usize {
        self.pairs.len() * (index_width(self.n) + rank_width(self.n, self.c)) as usize
    }

    /// Each pair as `r - 1` then `j - 1`, in index order.
    pub fn to_bits(&self) -> BitVec {
        let (iw, rw) = (index_width(self.n), rank_width(self.n, self.c));
        let mut bits = BitVec::with_capacity(self.bit_len());
        for &(r, j) in &self.pairs {
            bits.push_int(r - 1, iw);
            bits.push_int(j - 1, rw);
        }
        bits
    }

    pub fn from_bits(n: u64, c: Sparsity, t: u64, bits: &BitVec) -> Result<Self> {
        let (iw, rw) = (index_width(n) as usize, rank_width(n, c) as usize);
        if n == 0 {
            return Err(Error::Empty);
        }
        if bits.len() as u64 != t * (iw + rw) as u64 {
            return Err(Error::Corrupt(format!(
                "query table has {} bits, expected {}",
                bits.len(),
                t * (iw + rw) as u64
            )));
        }
        let pairs: Vec<(u64, u64)> = (0..t as usize)
            .map(|k| {
                let at = k * (iw + rw);
                (bits.read_int(at, iw as u32) + 1, bits.read_int(at + iw, rw as u32) + 1)
            })
            .collect();
        if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Corrupt("query table indices are not increasing".into()));
        }
        if let Some(&(r, _)) = pairs.iter().find(|&&(r, _)| r > n) {
            return Err(Error::IndexOutOfRange(r, n));
        }
        let mut ranks: Vec<u64> = pairs.iter().map(|&(_, j)| j).collect();
        ranks.sort_unstable();
        if ranks.iter().zip(1..).any(|(&j, expect)| j != expect) {
            return Err(Error::InvalidRanks(t));
        }
        Ok(Self {
            n,
            c,
            assignment: Assignment::new(n, t),
            pairs,
        })
    }

    /// The heavy indices back in rank order.
    pub fn to_payload(&self) -> SparsePayload {
        let mut by_rank = self.pairs.clone();
        by_rank.sort_unstable_by_key(|&(_, j)| j);
        SparsePayload {
            n: self.n,
            c: self.c,
            heavy: by_rank.into_iter().map(|(r, _)| r).collect(),
        }
    }

    /// `q_i` for a 1-based symbol index.
    pub fn query(&self, i: u64) -> Result<f64> {
        self.query_counted(i).map(|(q, _)| q)
    }

    /// `q_i` together with the number of table probes the binary search made.
    pub fn query_counted(&self, i: u64) -> Result<(f64, usize)> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange(i, self.n));
        }
        let (mut lo, mut hi) = (0, self.pairs.len());
        let mut probes = 0;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            probes += 1;
            let (r, j) = self.pairs[mid];
            match r.cmp(&i) {
                std::cmp::Ordering::Equal => return Ok((self.assignment.heavy(j), probes)),
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
            }
        }
        Ok((self.assignment.light, probes))
    }
}
