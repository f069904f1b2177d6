//! Checked integer helpers for exact combinatorics.

use crate::error::{Error, Result};

pub fn checked_mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or_else(|| Error::Overflow(format!("{a} * {b}")))
}

pub fn checked_imul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| Error::Overflow(format!("{a} * {b}")))
}

pub fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, checked_mul)
}

/// Divides exactly, failing if `den` does not divide `num`.
pub fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if den == 0 || num % den != 0 {
        return Err(Error::NumericalDegeneracy(format!("{what}: {num} is not divisible by {den}")));
    }
    Ok(num / den)
}
