use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{int, PiValue, Rational};
use crate::error::{Error, Result};

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `n!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial undefined for {n}")));
    }
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `top! / prod(parts_i!)`.
pub fn multinomial(top: u32, parts: &[u32]) -> Result<BigInt> {
    let sum: u64 = parts.iter().map(|&p| p as u64).sum();
    if sum != top as u64 {
        return Err(Error::Domain(format!("multinomial parts sum to {sum}, expected {top}")));
    }
    let den = parts.iter().fold(BigInt::one(), |acc, &p| acc * factorial(p));
    Ok(factorial(top) / den)
}

/// `J(a, q) = integral_0^1 r^(2a+1) (1-r^2)^q dr = q! a! / (2 (a+q+1)!)`.
pub fn beta_j(a: u32, q: u32) -> Rational {
    let num = factorial(q) * factorial(a);
    let den = BigInt::from(2) * factorial(a + q + 1);
    Rational::new(num, den)
}

/// `B(1-p; n, q) / B(n, q)` via the binomial-sum identity at `x = 1-p`.
pub fn incomplete_beta_ratio(p: &Rational, n: u32, q: u32) -> Result<Rational> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    if n == 0 || q == 0 {
        return Err(Error::Domain("incomplete beta needs n, q >= 1".into()));
    }
    let x = Rational::one() - p;
    let y = p.clone();
    let top = n + q - 1;
    let mut sum = Rational::zero();
    for k in n..=top {
        let term = Rational::from_integer(binomial(top, k))
            * num_traits::pow(x.clone(), k as usize)
            * num_traits::pow(y.clone(), (top - k) as usize);
        sum += term;
    }
    Ok(sum)
}

/// Bernoulli number `B_n` with `B_1 = +1/2` (only even indices are used).
pub fn bernoulli(n: u32) -> Rational {
    // Akiyama-Tanigawa
    let mut a: Vec<Rational> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m as usize).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * int(j as i64);
        }
    }
    a[0].clone()
}

/// `zeta(2k)` as a rational multiple of `pi^(2k)`.
pub fn zeta_even(two_k: u32) -> Result<PiValue> {
    if two_k == 0 || !two_k.is_multiple_of(2) {
        return Err(Error::Domain(format!("zeta_even needs a positive even argument, got {two_k}")));
    }
    let k = two_k / 2;
    let sign = if k % 2 == 1 { int(1) } else { int(-1) };
    let coeff = sign * bernoulli(two_k) * Rational::from_integer(BigInt::one() << two_k)
        / Rational::from_integer(BigInt::from(2) * factorial(two_k));
    Ok(PiValue::monomial(coeff, two_k as i32))
}
