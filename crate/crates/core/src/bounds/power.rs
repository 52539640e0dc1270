//! Products of integer bases raised to rational exponents, floored exactly.
//!
//! `prod b_k^{e_k}` with `e_k = n_k / d_k` is floored as
//! `floor((prod b_k^{n_k D / d_k})^{1/D})` for the common denominator `D`,
//! using an exact integer `D`-th root. No floating point is involved, so
//! every floored value is a true lower bound.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Ratio<i64>;

/// Parses a decimal such as `0`, `-0.25` or `1.125` into an exact exponent.
pub fn parse_exponent(s: &str) -> Result<Exponent> {
    let bad = || Error::Parameter(format!("cannot read {s:?} as a decimal number"));
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || frac.len() > 6 {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i64 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = 10i64.pow(frac.len() as u32);
    let r = Ratio::new(num, den);
    Ok(if neg { -r } else { r })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PowerProduct {
    factors: BTreeMap<u64, Exponent>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn power(base: u64, exp: Exponent) -> Self {
        Self::one().times(base, exp)
    }

    /// Multiplies in `base^exp`. Bases must be at least 2.
    pub fn times(mut self, base: u64, exp: Exponent) -> Self {
        assert!(base >= 2, "base {base} must be at least 2");
        let e = self.factors.entry(base).or_insert_with(Exponent::zero);
        *e += exp;
        if e.is_zero() {
            self.factors.remove(&base);
        }
        self
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.factors.iter().map(|(&b, &e)| (b, e))
    }

    pub fn log2(&self) -> f64 {
        self.factors
            .iter()
            .map(|(&b, e)| (b as f64).log2() * (*e.numer() as f64 / *e.denom() as f64))
            .sum()
    }

    /// `floor` of the exact real value.
    pub fn floor(&self) -> BigUint {
        let d = self
            .factors
            .values()
            .fold(1i64, |acc, e| acc.lcm(e.denom()));
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (&b, e) in &self.factors {
            let k = (e * Exponent::from_integer(d)).to_integer();
            let p = BigUint::from(b).pow(k.unsigned_abs() as u32);
            if k >= 0 {
                num *= p;
            } else {
                den *= p;
            }
        }
        let ratio = num / den;
        if d == 1 {
            ratio
        } else {
            ratio.nth_root(d as u32)
        }
    }
}

impl Mul for PowerProduct {
    type Output = PowerProduct;

    fn mul(self, rhs: PowerProduct) -> PowerProduct {
        rhs.factors
            .into_iter()
            .fold(self, |acc, (b, e)| acc.times(b, e))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (b, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if e.is_integer() && !e.is_negative() {
                write!(f, "{b}^{}", e.numer())?;
            } else {
                write!(f, "{b}^({}/{})", e.numer(), e.denom())?;
            }
        }
        Ok(())
    }
}

/// log2 of a big integer, accurate to double precision; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits").to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits") as f64;
    top.log2() + shift as f64
}
