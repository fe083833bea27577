//! Exact rational parsing and rendering.

use std::fmt::Display;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parses `p` or `p/q` (no decimals, no exponents).
pub fn parse_fraction(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::NonExactInteraction(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

/// Parses `p`, `p/q` or a terminating decimal such as `1.0001`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if let Some((int, frac)) = trimmed.split_once('.') {
        let bad = || Error::InvalidRational(text.to_string());
        let negative = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && digits.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 17
        {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let whole: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = whole
            .checked_mul(den)
            .and_then(|w| w.checked_add(part))
            .ok_or_else(bad)?;
        return Ok(Ratio::new(if negative { -num } else { num }, den));
    }
    parse_fraction(trimmed).map_err(|_| Error::InvalidRational(text.to_string()))
}

/// Renders integers as `p` and everything else as `p/q`.
pub fn render<T: Clone + Integer + Display>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_zero<T: Clone + Integer>(r: &Ratio<T>) -> bool {
    r.numer().is_zero()
}
