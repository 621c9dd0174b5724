//! Exact arithmetic: big rationals, Laurent polynomials in pi, and the
//! combinatorial and Beta-integral primitives.

mod comb;
mod pi;

pub use comb::{
    bernoulli, beta_j, binomial, double_factorial, factorial, incomplete_beta_ratio, multinomial, zeta_even,
};
pub use pi::PiValue;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`]. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for a possibly negative exponent.
pub fn pow2(e: i64) -> Rational {
    let mag = Rational::from_integer(BigInt::one() << e.unsigned_abs());
    if e >= 0 {
        mag
    } else {
        mag.recip()
    }
}

/// Renders a rational as `num/den`, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer. Rejects a zero denominator.
///
/// With `strict` set the input must be `num/den` already in lowest terms
/// with a positive denominator.
pub fn parse_rational(s: &str, strict: bool) -> Result<Rational> {
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None if strict => return Err(bad()),
        None => (s, None),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = match d {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    let r = Rational::new(n.clone(), d.clone());
    if strict && (d.is_negative() || r.numer() != &n || r.denom() != &d) {
        return Err(Error::Parse(format!("`{s}` is not in lowest terms")));
    }
    Ok(r)
}

/// Floating-point view of a rational, for display only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Formats `x` with `sig` significant digits.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{:.*e}", sig.saturating_sub(1), x);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
