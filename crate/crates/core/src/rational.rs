//! Small helpers around `BigRational` that the num crates do not provide.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parses `12`, `0.375` or `3/8` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = parse_unsigned(num)?;
        let den: BigInt = parse_unsigned(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    match text.split_once('.') {
        Some((int, frac)) => {
            if int.is_empty() || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let int: BigInt = parse_unsigned(int)?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac: BigInt = parse_unsigned(frac)?;
            Some(BigRational::new(int * &scale + frac, scale))
        }
        None => parse_unsigned(text).map(BigRational::from_integer),
    }
}

fn parse_unsigned(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Renders a terminating decimal (`0.3`) when the denominator allows it, else `p/q`.
pub fn format_weight(value: &BigRational) -> String {
    let mut den = value.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return value.to_string();
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return value.numer().to_string();
    }
    let scaled = value * BigRational::from_integer(BigInt::from(10).pow(digits));
    let scaled = scaled.to_integer();
    let text = format!("{:0>width$}", scaled.abs(), width = digits as usize + 1);
    let (int, frac) = text.split_at(text.len() - digits as usize);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

/// Rounds to `digits` decimal places, half away from zero.
pub fn format_decimal(value: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = value.abs() * BigRational::from_integer(scale);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = (scaled + half).floor().to_integer();
    let sign = if value.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{rounded}");
    }
    let text = format!("{:0>width$}", rounded, width = digits + 1);
    let (int, frac) = text.split_at(text.len() - digits);
    format!("{sign}{int}.{frac}")
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fall back through logarithms when either part overflows f64.
        let sign = if value.is_negative() { -1.0 } else { 1.0 };
        sign * ln(&value.abs()).exp()
    })
}

fn ln_bigint(value: &BigInt) -> f64 {
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = value >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational without overflowing f64.
pub fn ln(value: &BigRational) -> f64 {
    ln_bigint(value.numer()) - ln_bigint(value.denom())
}
