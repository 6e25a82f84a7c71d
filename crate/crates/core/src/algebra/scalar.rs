//! Exact rational scalars.
//!
//! `Scalar` is an arbitrary-precision rational kept in lowest terms with a
//! positive denominator, so structural equality is field equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`; rejects a zero denominator.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = |message: &str| Error::Parse {
        path: String::new(),
        message: format!("{message}: {text:?}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid rational numerator"))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| bad("invalid rational denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Scalar::new(num, den))
}

/// Formats as `"p/q"`, omitting `q` when it is 1.
pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// `base^exp` by repeated squaring; `0^0 = 1`.
pub fn pow(base: &Scalar, mut exp: u32) -> Scalar {
    let mut acc = Scalar::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &sq;
        }
        exp >>= 1;
        if exp > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Bits needed for numerator plus denominator.
pub fn bit_length(value: &Scalar) -> u64 {
    value.numer().abs().bits() + value.denom().bits()
}

/// Binomial coefficient as a big integer scalar.
pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    Scalar::from_integer(acc)
}

/// Multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[u32]) -> Scalar {
    let mut total = 0u32;
    let mut acc = Scalar::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
