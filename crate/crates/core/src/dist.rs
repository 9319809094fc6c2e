//! Exact probability distributions and the logarithmic measures defined on them.
//!
//! A [`ProbabilityDistribution`] stores non-negative integer weights over a
//! common denominator (their sum), so every probability is an exact rational
//! and the entries sum to exactly one by construction. Entropy and relative
//! entropy are reported in bits as `f64`; logarithms of big integers are taken
//! from their leading 64 bits, which keeps them finite for probabilities far
//! below `f64::MIN_POSITIVE`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A distribution `p_1, ..., p_n` with `p_i = weight_i / total`.
///
/// Weights are kept reduced by their greatest common divisor, so two values
/// compare equal exactly when they describe the same distribution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbabilityDistribution {
    weights: Vec<BigUint>,
    total: BigUint,
}

impl ProbabilityDistribution {
    /// Normalizes non-negative weights by their exact sum.
    pub fn from_weights<W: Into<BigUint>>(weights: impl IntoIterator<Item = W>) -> Result<Self> {
        let mut weights: Vec<BigUint> = weights.into_iter().map(Into::into).collect();
        if weights.is_empty() {
            return Err(Error::Empty);
        }
        let mut gcd = BigUint::zero();
        for w in &weights {
            if !gcd.is_one() {
                gcd = gcd.gcd(w);
            }
        }
        if gcd.is_zero() {
            return Err(Error::ZeroTotal);
        }
        if !gcd.is_one() {
            for w in &mut weights {
                *w /= &gcd;
            }
        }
        let total = weights.iter().sum();
        Ok(Self { weights, total })
    }

    /// Accepts exact probabilities, which must be non-negative and sum to exactly 1.
    pub fn from_probabilities(probs: &[BigRational]) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = probs.iter().position(|p| p.is_negative()) {
            return Err(Error::Negative {
                line: i + 1,
                token: probs[i].to_string(),
            });
        }
        let sum: BigRational = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized(sum.to_string()));
        }
        let denom = probs
            .iter()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let weights = probs.iter().map(|p| {
            (p.numer() * (&denom / p.denom()))
                .to_biguint()
                .expect("checked non-negative")
        });
        Self::from_weights(weights)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_weights(std::iter::repeat_n(1u32, n))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &BigUint {
        &self.weights[i]
    }

    /// The common denominator, equal to the sum of the weights.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// The exact probability of symbol `i` (0-based).
    pub fn prob(&self, i: usize) -> BigRational {
        BigRational::new(
            BigInt::from(self.weights[i].clone()),
            BigInt::from(self.total.clone()),
        )
    }

    pub fn probs(&self) -> impl Iterator<Item = BigRational> + '_ {
        (0..self.len()).map(|i| self.prob(i))
    }

    pub fn prob_f64(&self, i: usize) -> f64 {
        if self.weights[i].is_zero() {
            0.0
        } else {
            (log2_biguint(&self.weights[i]) - log2_biguint(&self.total)).exp2()
        }
    }

    pub fn strictly_positive(&self) -> bool {
        self.weights.iter().all(|w| !w.is_zero())
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.weights.iter().position(Zero::is_zero)
    }
}

/// Read access to probabilities through their binary logarithms.
pub trait Probabilities {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `log2(q_i)`, or `None` if `q_i` is zero.
    fn log2_prob(&self, i: usize) -> Option<f64>;
}

impl Probabilities for ProbabilityDistribution {
    fn len(&self) -> usize {
        self.weights.len()
    }

    fn log2_prob(&self, i: usize) -> Option<f64> {
        let w = &self.weights[i];
        (!w.is_zero()).then(|| log2_biguint(w) - log2_biguint(&self.total))
    }
}

impl Probabilities for [f64] {
    fn len(&self) -> usize {
        <[f64]>::len(self)
    }

    fn log2_prob(&self, i: usize) -> Option<f64> {
        (self[i] > 0.0).then(|| self[i].log2())
    }
}

/// Binary logarithm of a positive big integer, accurate to about 1e-16 relative.
pub fn log2_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 64 {
        x.to_u64().expect("fits in 64 bits").to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_u64().expect("fits in 64 bits");
        (top as f64).log2() + shift as f64
    }
}

/// Binary logarithm of a positive rational.
pub fn log2_rational(x: &BigRational) -> f64 {
    debug_assert!(x.is_positive());
    let numer = x.numer().magnitude();
    let denom = x.denom().magnitude();
    log2_biguint(numer) - log2_biguint(denom)
}

/// Shannon entropy `H(P) = sum p_i log2(1/p_i)` in bits, with `0 log 0 = 0`.
pub fn entropy(p: &ProbabilityDistribution) -> f64 {
    let log_total = log2_biguint(p.total());
    p.weights()
        .iter()
        .filter(|w| !w.is_zero())
        .map(|w| {
            let log_p = log2_biguint(w) - log_total;
            -log_p.exp2() * log_p
        })
        .sum()
}

/// Relative entropy `D(P || Q) = sum p_i log2(p_i / q_i)` in bits.
///
/// Terms with `p_i = 0` contribute nothing. A positive `p_i` against a zero
/// `q_i` is reported as [`Error::InfiniteDivergence`].
pub fn relative_entropy<Q>(p: &ProbabilityDistribution, q: &Q) -> Result<f64>
where
    Q: Probabilities + ?Sized,
{
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let mut sum = 0.0;
    for i in 0..p.len() {
        let Some(log_p) = Probabilities::log2_prob(p, i) else {
            continue;
        };
        let log_q = q.log2_prob(i).ok_or(Error::InfiniteDivergence(i))?;
        sum += log_p.exp2() * (log_p - log_q);
    }
    Ok(sum)
}

/// `max_i p_i / q_i` over symbols with `p_i > 0`, in exact arithmetic.
pub fn max_ratio(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<BigRational> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    // p_i / q_i = (w_i / v_i) * (Q.total / P.total); compare w_i / v_i by cross-multiplying.
    let mut best: Option<(&BigUint, &BigUint)> = None;
    for (i, (w, v)) in p.weights().iter().zip(q.weights()).enumerate() {
        if w.is_zero() {
            continue;
        }
        if v.is_zero() {
            return Err(Error::InfiniteDivergence(i));
        }
        match best {
            Some((bw, bv)) if w * bv <= bw * v => {}
            _ => best = Some((w, v)),
        }
    }
    let (w, v) = best.expect("a distribution has at least one positive entry");
    Ok(BigRational::new(
        BigInt::from(w * q.total()),
        BigInt::from(v * p.total()),
    ))
}

/// Parses newline-delimited non-negative numbers into an exactly normalized distribution.
///
/// Each line holds an integer count, a decimal numeral (optionally with an
/// exponent such as `2.5e-3`) or a fraction `a/b`. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_distribution(text: &str) -> Result<ProbabilityDistribution> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        let line = lineno + 1;
        if let Some(rest) = token.strip_prefix('-') {
            return Err(if parse_number(rest).is_some() {
                Error::Negative {
                    line,
                    token: token.to_owned(),
                }
            } else {
                Error::Unparsable {
                    line,
                    token: token.to_owned(),
                }
            });
        }
        let value = parse_number(token.strip_prefix('+').unwrap_or(token)).ok_or_else(|| {
            Error::Unparsable {
                line,
                token: token.to_owned(),
            }
        })?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let denom = values
        .iter()
        .fold(BigUint::one(), |acc, (_, d)| acc.lcm(d));
    ProbabilityDistribution::from_weights(values.into_iter().map(|(n, d)| n * (&denom / d)))
}

/// Parses an unsigned decimal or fraction into `(numerator, denominator)`.
fn parse_number(token: &str) -> Option<(BigUint, BigUint)> {
    if let Some((a, b)) = token.split_once('/') {
        let numer = parse_digits(a.trim())?;
        let denom = parse_digits(b.trim())?;
        return (!denom.is_zero()).then_some((numer, denom));
    }
    let (mantissa, exponent) = match token.find(['e', 'E']) {
        Some(at) => (&token[..at], token[at + 1..].parse::<i32>().ok()?),
        None => (token, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = parse_digits(&digits)?;
    let scale = exponent - i32::try_from(frac_part.len()).ok()?;
    let ten = BigUint::from(10u32);
    if scale >= 0 {
        Some((numer * ten.pow(scale as u32), BigUint::one()))
    } else {
        Some((numer, ten.pow(scale.unsigned_abs())))
    }
}

fn parse_digits(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}
