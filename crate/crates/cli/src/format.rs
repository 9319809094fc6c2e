//! Text forms of probabilities and rationals.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `2^-d` as an exact decimal.
pub fn dyadic(d: u32) -> String {
    if d == 0 {
        return "1".to_owned();
    }
    // 2^-d = 5^d / 10^d
    let digits = BigUint::from(5u32).pow(d).to_string();
    format!("0.{}{}", "0".repeat(d as usize - digits.len()), digits)
}

/// Exact decimal when the reduced denominator is `2^a 5^b`, otherwise `p/q`.
pub fn exact(x: &BigRational) -> String {
    let mut den = x.denom().magnitude().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let places = twos.max(fives);
    let scaled: BigInt = x.numer() * BigInt::from(10u32).pow(places) / x.denom();
    decimal_from_scaled(&scaled, places as usize)
}

fn decimal_from_scaled(scaled: &BigInt, places: usize) -> String {
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = scaled.magnitude().to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// `x` rounded to `digits` significant digits, written without an exponent.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let places = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{x:.places$}");
    if s.contains('.') {
        let s = s.trim_end_matches('0');
        s.trim_end_matches('.').to_owned()
    } else {
        s
    }
}

/// A float for reports: enough digits to reproduce the value.
pub fn measure(x: f64) -> String {
    if x.is_infinite() {
        return "inf".to_owned();
    }
    format!("{x}")
}

pub fn rational_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Parses `a/b`, an integer, or a plain decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).ok()?;
        let b = BigInt::from_str(b.trim()).ok()?;
        return (!b.is_zero()).then(|| BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let int = if int.is_empty() || int == "-" || int == "+" { format!("{int}0") } else { int.to_owned() };
    let whole = BigInt::from_str(&int).ok()?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let frac_val = if frac.is_empty() { BigInt::zero() } else { BigInt::from_str(frac).ok()? };
    let frac_val = if int.starts_with('-') { -frac_val } else { frac_val };
    Some(BigRational::new(whole * &scale + frac_val, scale))
}
