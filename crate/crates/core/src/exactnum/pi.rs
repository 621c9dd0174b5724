use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, format_sig, parse_rational, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// A finite Laurent polynomial in pi with exact rational coefficients.
///
/// Zero coefficients are never stored, so the zero value is the empty map and
/// structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiValue {
    terms: BTreeMap<i32, Rational>,
}

impl PiValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `coeff * pi^exp`.
    pub fn monomial(coeff: Rational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn rational(r: Rational) -> Self {
        Self::monomial(r, 0)
    }

    pub fn pi_pow(exp: i32) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `pi^exp` (zero when absent).
    pub fn coeff(&self, exp: i32) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in descending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(coeff, exp)` when the value is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(&Rational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    /// Rational coefficient of `pi^exp`, failing if the value has any other shape.
    pub fn expect_degree(&self, exp: i32) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        match self.as_monomial() {
            Some((c, e)) if e == exp => Ok(c.clone()),
            _ => Err(Error::Domain(format!("expected a multiple of pi^{exp}, got {self}"))),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect() }
    }

    /// Division by a nonzero monomial. Any other divisor is rejected.
    pub fn checked_div(&self, divisor: &PiValue) -> Result<Self> {
        let (c, e) =
            divisor.as_monomial().ok_or_else(|| Error::Domain(format!("cannot divide by non-monomial {divisor}")))?;
        let inv = c.recip();
        Ok(Self { terms: self.terms.iter().map(|(k, v)| (k - e, v * &inv)).collect() })
    }

    /// Floating-point evaluation, display only.
    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(e, c)| rational_to_f64(c) * std::f64::consts::PI.powi(*e)).sum()
    }

    /// Decimal rendering with `sig` significant digits.
    pub fn approx_string(&self, sig: usize) -> String {
        format_sig(self.to_f64(), sig)
    }

    fn add_term(&mut self, exp: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

impl From<Rational> for PiValue {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

impl Add for &PiValue {
    type Output = PiValue;
    fn add(self, rhs: &PiValue) -> PiValue {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for PiValue {
    type Output = PiValue;
    fn add(self, rhs: PiValue) -> PiValue {
        &self + &rhs
    }
}

impl Neg for &PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        PiValue { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for PiValue {
    type Output = PiValue;
    fn neg(self) -> PiValue {
        -&self
    }
}

impl Sub for &PiValue {
    type Output = PiValue;
    fn sub(self, rhs: &PiValue) -> PiValue {
        self + &(-rhs)
    }
}

impl Sub for PiValue {
    type Output = PiValue;
    fn sub(self, rhs: PiValue) -> PiValue {
        &self - &rhs
    }
}

impl Mul for &PiValue {
    type Output = PiValue;
    fn mul(self, rhs: &PiValue) -> PiValue {
        let mut out = PiValue::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for PiValue {
    type Output = PiValue;
    fn mul(self, rhs: PiValue) -> PiValue {
        &self * &rhs
    }
}

impl std::iter::Sum for PiValue {
    fn sum<I: Iterator<Item = PiValue>>(iter: I) -> Self {
        iter.fold(PiValue::zero(), |a, b| a + b)
    }
}

fn render_term(c: &Rational, e: i32) -> String {
    match e {
        0 => format_rational(c),
        1 => format!("{}*pi", format_rational(c)),
        _ => format!("{}*pi^{}", format_rational(c), e),
    }
}

impl fmt::Display for PiValue {
    /// Canonical text: descending exponents, `<num>/<den>*pi^<exp>`, joined by ` + ` / ` - `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i == 0 {
                f.write_str(&render_term(c, e))?;
            } else if c.is_negative() {
                write!(f, " - {}", render_term(&-c, e))?;
            } else {
                write!(f, " + {}", render_term(c, e))?;
            }
        }
        Ok(())
    }
}

fn parse_term(t: &str) -> Result<(Rational, i32)> {
    let bad = || Error::Parse(format!("malformed pi term `{t}`"));
    let (coeff, pi) = match t.find("pi") {
        None => (t, None),
        Some(idx) => {
            let head = t[..idx].trim_end_matches('*');
            (head, Some(&t[idx + 2..]))
        }
    };
    let c = match coeff {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        s => parse_rational(s, false)?,
    };
    let e = match pi {
        None => 0,
        Some("") => 1,
        Some(rest) => rest.strip_prefix('^').ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?,
    };
    Ok((c, e))
}

impl FromStr for PiValue {
    type Err = Error;

    /// Accepts the canonical text plus small conveniences (`pi^4`, `3`, `-pi`).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty pi value".into()));
        }
        let bytes = compact.as_bytes();
        let mut starts = vec![0usize];
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if (bytes[i] == b'+' || bytes[i] == b'-') && prev != b'^' && prev != b'/' && prev != b'*' {
                starts.push(i);
            }
        }
        starts.push(bytes.len());
        let mut out = PiValue::zero();
        for w in starts.windows(2) {
            let (c, e) = parse_term(&compact[w[0]..w[1]])?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

impl Serialize for PiValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PiValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn canonical_text() {
        assert_eq!(PiValue::monomial(rat(47, 22), -2).to_string(), "47/22*pi^-2");
        assert_eq!(PiValue::monomial(rat(1, 1), 4).to_string(), "1/1*pi^4");
        assert_eq!(PiValue::monomial(rat(2, 1), 1).to_string(), "2/1*pi");
        assert_eq!(PiValue::rational(rat(3, 4)).to_string(), "3/4");
        assert_eq!(PiValue::zero().to_string(), "0");
        let v = PiValue::monomial(rat(1, 2), 2) - PiValue::rational(rat(1, 3));
        assert_eq!(v.to_string(), "1/2*pi^2 - 1/3");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["47/22*pi^-2", "1/1*pi^4", "2/1*pi", "3/4", "0", "1/2*pi^2 - 1/3", "-5/7*pi^3 + 1/1"] {
            let v: PiValue = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("pi^4".parse::<PiValue>().unwrap(), PiValue::pi_pow(4));
        assert_eq!("11/60pi^6".parse::<PiValue>().unwrap(), PiValue::monomial(rat(11, 60), 6));
        assert!("1/0*pi".parse::<PiValue>().is_err());
        assert!("pi4".parse::<PiValue>().is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = PiValue::monomial(rat(1, 3), 2);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).len(), 0);
    }

    #[test]
    fn monomial_division() {
        let v = PiValue::monomial(rat(11, 60), 6);
        let w = PiValue::monomial(rat(47, 120), 4);
        assert_eq!(w.checked_div(&v).unwrap(), PiValue::monomial(rat(47, 22), -2));
        let two_terms = PiValue::pi_pow(2) + PiValue::one();
        assert!(v.checked_div(&two_terms).is_err());
        assert!(v.checked_div(&PiValue::zero()).is_err());
    }

    #[test]
    fn approx_display() {
        let v = PiValue::monomial(rat(47, 22), -2);
        assert_eq!(v.approx_string(12), "0.216458892327");
        assert_eq!(PiValue::monomial(rat(11, 60), 6).approx_string(12), "176.254685489");
    }
}
