//! Lower-bound formulas for r(t; l), evaluated exactly.
//!
//! Each formula family is a [`BoundFormula`] registered under its tag. A
//! formula produces a [`PowerProduct`] for `r(t; l) - 1`; the record's value
//! is its exact floor, taken once at the outermost level.
//!
//! The `slack` argument stands in for the lower-order term attached to every
//! use of the isotropic (q+1)-color bound `2^{t/2} q^{3t/8 + slack}`. At
//! `slack = 0` the tables are conservative.

mod power;

pub use power::{log2_biguint, parse_exponent, Exponent, PowerProduct};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::is_prime;

/// Values above this are shown as `-` in tables.
pub const PRINT_LIMIT_DIGITS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub t: u64,
    pub colors: u64,
    pub tag: &'static str,
    pub expression: PowerProduct,
    pub value: BigUint,
    pub log2: f64,
}

impl BoundRecord {
    fn from_expression(t: u64, colors: u64, tag: &'static str, expression: PowerProduct) -> Self {
        let value = expression.floor();
        let log2 = log2_biguint(&value);
        BoundRecord {
            t,
            colors,
            tag,
            expression,
            value,
            log2,
        }
    }

    /// `value^{1/t}`.
    pub fn growth_rate(&self) -> f64 {
        if self.t == 0 {
            return f64::NAN;
        }
        (self.log2 / self.t as f64).exp2()
    }

    /// The exact value when it has at most [`PRINT_LIMIT_DIGITS`] digits.
    pub fn printable_value(&self) -> Option<String> {
        let s = self.value.to_string();
        (s.len() <= PRINT_LIMIT_DIGITS).then_some(s)
    }
}

fn frac(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

fn int(n: u64) -> i64 {
    i64::try_from(n).expect("parameter fits in i64")
}

/// `2^{t/2}`: the two-color probabilistic bound.
pub fn two_color_expr(t: u64) -> PowerProduct {
    PowerProduct::power(2, frac(int(t), 2))
}

/// `2^{t/2} q^{3t/8 + slack}`.
pub fn isotropic_expr(t: u64, q: u64, slack: Exponent) -> PowerProduct {
    PowerProduct::power(2, frac(int(t), 2)).times(q, frac(3 * int(t), 8) + slack)
}

/// A family of lower bounds selected by tag.
pub trait BoundFormula: Send + Sync {
    fn tag(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// `None` when the formula does not apply to `colors`.
    fn expression(&self, t: u64, colors: u64, slack: Exponent) -> Option<PowerProduct>;

    fn evaluate(&self, t: u64, colors: u64, slack: Exponent) -> Option<BoundRecord> {
        self.expression(t, colors, slack)
            .map(|e| BoundRecord::from_expression(t, colors, self.tag(), e))
    }
}

pub struct ClassicalTwoColor;

impl BoundFormula for ClassicalTwoColor {
    fn tag(&self) -> &'static str {
        "classical-2color"
    }
    fn summary(&self) -> &'static str {
        "2^{t/2}"
    }
    fn expression(&self, t: u64, colors: u64, _: Exponent) -> Option<PowerProduct> {
        (colors == 2).then(|| two_color_expr(t))
    }
}

pub struct ClassicalThreeColor;

impl BoundFormula for ClassicalThreeColor {
    fn tag(&self) -> &'static str {
        "classical-3color"
    }
    fn summary(&self) -> &'static str {
        "3^{t/2}"
    }
    fn expression(&self, t: u64, colors: u64, _: Exponent) -> Option<PowerProduct> {
        (colors == 3).then(|| PowerProduct::power(3, frac(int(t), 2)))
    }
}

/// Products of the classical two- and three-color bounds.
pub struct LefmannComposite;

impl BoundFormula for LefmannComposite {
    fn tag(&self) -> &'static str {
        "lefmann-composite"
    }
    fn summary(&self) -> &'static str {
        "3^{kt/2} | 2^t 3^{(k-1)t/2} | 2^{t/2} 3^{kt/2} for l = 3k, 3k+1, 3k+2"
    }
    fn expression(&self, t: u64, colors: u64, _: Exponent) -> Option<PowerProduct> {
        if colors < 4 {
            return None;
        }
        let (k, r) = (int(colors / 3), colors % 3);
        let t = int(t);
        Some(match r {
            0 => PowerProduct::power(3, frac(k * t, 2)),
            1 => PowerProduct::power(2, frac(t, 1)).times(3, frac((k - 1) * t, 2)),
            _ => PowerProduct::power(2, frac(t, 2)).times(3, frac(k * t, 2)),
        })
    }
}

/// The direct (q+1)-color bound for prime q.
pub struct IsotropicDirect;

impl BoundFormula for IsotropicDirect {
    fn tag(&self) -> &'static str {
        "isotropic"
    }
    fn summary(&self) -> &'static str {
        "2^{t/2} q^{3t/8} for l = q+1, q prime"
    }
    fn expression(&self, t: u64, colors: u64, slack: Exponent) -> Option<PowerProduct> {
        let q = colors.checked_sub(1)?;
        is_prime(q).then(|| isotropic_expr(t, q, slack))
    }
}

/// Products of the 3- and 4-color isotropic bounds with the two-color bound.
pub struct IsotropicComposite;

impl IsotropicComposite {
    pub fn family(t: u64, colors: u64, slack: Exponent) -> Option<PowerProduct> {
        if colors < 2 {
            return None;
        }
        let three = isotropic_expr(t, 2, slack);
        let four = isotropic_expr(t, 3, slack);
        let k = colors / 3;
        let pow =
            |p: &PowerProduct, m: u64| (0..m).fold(PowerProduct::one(), |acc, _| acc * p.clone());
        Some(match colors % 3 {
            0 => pow(&three, k),
            1 => pow(&three, k - 1) * four,
            _ => pow(&three, k) * two_color_expr(t),
        })
    }
}

impl BoundFormula for IsotropicComposite {
    fn tag(&self) -> &'static str {
        "isotropic-composite"
    }
    fn summary(&self) -> &'static str {
        "2^{7kt/8} | 2^{7(k-1)t/8 + t/2} 3^{3t/8} | 2^{7kt/8 + t/2} for l = 3k, 3k+1, 3k+2"
    }
    fn expression(&self, t: u64, colors: u64, slack: Exponent) -> Option<PowerProduct> {
        if colors < 5 {
            return None;
        }
        Self::family(t, colors, slack)
    }
}

pub struct FormulaRegistry {
    entries: BTreeMap<&'static str, Box<dyn BoundFormula>>,
    order: Vec<&'static str>,
}

impl FormulaRegistry {
    pub fn empty() -> Self {
        FormulaRegistry {
            entries: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(ClassicalTwoColor));
        r.register(Box::new(ClassicalThreeColor));
        r.register(Box::new(LefmannComposite));
        r.register(Box::new(IsotropicDirect));
        r.register(Box::new(IsotropicComposite));
        r
    }

    /// Later registrations under an existing tag replace the earlier one in place.
    pub fn register(&mut self, f: Box<dyn BoundFormula>) {
        let tag = f.tag();
        if self.entries.insert(tag, f).is_none() {
            self.order.push(tag);
        }
    }

    pub fn get(&self, tag: &str) -> Result<&dyn BoundFormula> {
        self.entries
            .get(tag)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Parameter(format!("unknown bound formula {tag:?}")))
    }

    pub fn tags(&self) -> &[&'static str] {
        &self.order
    }

    /// Every applicable formula at `(t, colors)`, in registration order.
    pub fn table(&self, t: u64, colors: u64, slack: Exponent) -> Vec<BoundRecord> {
        self.order
            .iter()
            .filter_map(|tag| self.entries[tag].evaluate(t, colors, slack))
            .collect()
    }
}

impl Default for FormulaRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

fn check_colors(colors: u64) -> Result<()> {
    if colors < 2 {
        Err(Error::Parameter(format!(
            "need at least 2 colors, got {colors}"
        )))
    } else {
        Ok(())
    }
}

/// The classical bound for `colors`: two-color, three-color, or their products.
pub fn baseline_bound(t: u64, colors: u64) -> Result<BoundRecord> {
    check_colors(colors)?;
    let f: &dyn BoundFormula = match colors {
        2 => &ClassicalTwoColor,
        3 => &ClassicalThreeColor,
        _ => &LefmannComposite,
    };
    Ok(f.evaluate(t, colors, Exponent::zero())
        .expect("formula applies"))
}

/// The isotropic bound for `colors`: direct for 3 and 4 colors, composite beyond.
pub fn new_bound(t: u64, colors: u64, slack: Exponent) -> Result<BoundRecord> {
    check_colors(colors)?;
    let f: &dyn BoundFormula = match colors {
        2 => &ClassicalTwoColor,
        3 | 4 => &IsotropicDirect,
        _ => &IsotropicComposite,
    };
    Ok(f.evaluate(t, colors, slack).expect("formula applies"))
}

/// The direct `2^{t/2} q^{3t/8 + slack}` form for `colors = q + 1`, q prime.
pub fn direct_bound(t: u64, colors: u64, slack: Exponent) -> Option<BoundRecord> {
    IsotropicDirect.evaluate(t, colors, slack)
}

pub fn growth_rate(record: &BoundRecord) -> f64 {
    record.growth_rate()
}

/// Smallest `t0 <= t_max` with `new_bound >= baseline_bound` for every `t` in `t0..=t_max`.
pub fn crossover(colors: u64, slack: Exponent, t_max: u64) -> Result<Option<u64>> {
    check_colors(colors)?;
    let mut t0 = None;
    for t in (1..=t_max).rev() {
        if new_bound(t, colors, slack)?.value >= baseline_bound(t, colors)?.value {
            t0 = Some(t);
        } else {
            break;
        }
    }
    Ok(t0)
}
