//! Scalar abstraction for model coefficients.
//!
//! Formulations and QUBO models are built over any [`Scalar`]. The exact
//! rational instantiation ([`num_rational::Rational64`]) is the default used
//! throughout the crate: the zero-vs-positive distinction of QUBO minima
//! drives binary searches and must not suffer floating drift. The `f64`
//! instantiation exists for hot loops (simulated annealing) where models are
//! converted once and candidate energies are re-checked exactly afterwards.

use num_rational::Rational64;
use num_traits::{Num, NumAssign, Signed};
use std::fmt::{Debug, Display};
use std::ops::Neg;

pub trait Scalar:
    Num + NumAssign + Signed + Neg<Output = Self> + PartialOrd + Clone + Debug + Display
{
    fn from_int(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Nearest integer (ties away from zero).
    fn round_to_i64(&self) -> i64;

    /// Exact decimal rendering when one exists (denominator of the form
    /// 2^a * 5^b), `None` otherwise.
    fn exact_decimal(&self) -> Option<String>;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn round_to_i64(&self) -> i64 {
        self.round() as i64
    }

    fn exact_decimal(&self) -> Option<String> {
        // The shortest round-trip representation is exact for f64.
        Some(format!("{self}"))
    }
}

impl Scalar for Rational64 {
    fn from_int(v: i64) -> Self {
        Rational64::from_integer(v)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn round_to_i64(&self) -> i64 {
        self.round().to_integer()
    }

    fn exact_decimal(&self) -> Option<String> {
        rational_decimal(self)
    }
}

/// Renders a rational as an exact decimal string if its reduced denominator
/// has only factors 2 and 5.
pub fn rational_decimal(r: &Rational64) -> Option<String> {
    let mut den = *r.denom();
    debug_assert!(den > 0);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return None;
    }
    let digits = twos.max(fives);
    // numer / denom = numer * (10^digits / denom) / 10^digits
    let scale = 10i128.pow(digits) / *r.denom() as i128;
    let scaled = *r.numer() as i128 * scale;
    if digits == 0 {
        return Some(scaled.to_string());
    }
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let pow = 10u128.pow(digits);
    let int = abs / pow;
    let frac = abs % pow;
    let mut frac_str = format!("{:0width$}", frac, width = digits as usize);
    while frac_str.ends_with('0') {
        frac_str.pop();
    }
    if frac_str.is_empty() {
        Some(format!("{sign}{int}"))
    } else {
        Some(format!("{sign}{int}.{frac_str}"))
    }
}

/// Renders a scalar for file emission: exact decimal when possible,
/// `num/den` fraction otherwise (rationals with non-regular denominators).
pub fn emit_value<S: Scalar>(v: &S) -> String {
    match v.exact_decimal() {
        Some(d) => d,
        None => format!("{v}"),
    }
}
