//! Entropy and divergence by direct floating-point summation.

use num_rational::BigRational;
use num_traits::ToPrimitive;

pub fn to_f64(p: &[BigRational]) -> Vec<f64> {
    p.iter().map(|x| x.to_f64().expect("finite probability")).collect()
}

/// `sum p_i log2(1/p_i)`, skipping zero terms.
pub fn naive_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// `sum p_i log2(p_i / q_i)`, infinite if some `q_i = 0` while `p_i > 0`.
pub fn naive_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            d += a * (a / b).log2();
        }
    }
    d
}

/// Largest `p_i / q_i` over symbols with `p_i > 0`.
pub fn naive_max_ratio(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, b)| a / b)
        .fold(0.0, f64::max)
}

/// `log2(pi^2 / 3)` from the series `sum 1/j^2 = pi^2/6`, summed smallest
/// term first with an Euler-Maclaurin tail correction.
pub fn log2_pi_squared_over_three() -> f64 {
    let n = 100_000u32;
    let head: f64 = (1..=n).rev().map(|j| 1.0 / (j as f64 * j as f64)).sum();
    let nf = n as f64;
    let tail = 1.0 / nf - 1.0 / (2.0 * nf * nf) + 1.0 / (6.0 * nf * nf * nf);
    (2.0 * (head + tail)).log2()
}
