//! Exact rational helpers: parsing and printing of `num/den` tokens, the
//! exponent type used for the asymmetric normalizers, and big-integer
//! comparison of products of powers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Parses an integer, `a/b`, or a plain decimal such as `0.125` into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::invalid("empty rational token"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::invalid(format!("bad numerator in {t:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::invalid(format!("bad denominator in {t:?}")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..]
                .parse()
                .map_err(|_| Error::invalid(format!("bad exponent in {t:?}")))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::invalid(format!("bad number {t:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::invalid(format!("bad number {t:?}")));
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).unwrap();
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Canonical `num/den` form, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Short form used in text files: `3` for integers, `3/4` otherwise.
pub fn format_rational_short(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators or denominators: fall back to a log-space quotient.
        let n = r.numer().abs().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        let v = n / d;
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

pub fn rational_from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A rational exponent `p = num/den > 1`, stored in lowest terms.
///
/// The normalizer `|A|^{1/p} |B|^{1/q}` raised to the power `num` becomes
/// `|A|^den |B|^(num-den)`, which is what makes exact comparisons possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponent {
    num: u32,
    den: u32,
}

impl Exponent {
    pub const TWO: Exponent = Exponent { num: 2, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("exponent denominator is zero"));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g.max(1), den / g.max(1));
        if num <= den {
            return Err(Error::invalid(format!("p must be > 1, got {num}/{den}")));
        }
        Ok(Exponent { num, den })
    }

    pub fn parse(token: &str) -> Result<Self> {
        let r = parse_rational(token)?;
        if r.is_negative() || r.is_zero() {
            return Err(Error::invalid(format!("p must be > 1, got {token}")));
        }
        let num = r
            .numer()
            .to_u32()
            .ok_or_else(|| Error::invalid(format!("exponent {token} too large")))?;
        let den = r
            .denom()
            .to_u32()
            .ok_or_else(|| Error::invalid(format!("exponent {token} too large")))?;
        Exponent::new(num, den)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn is_two(&self) -> bool {
        self.num == 2 && self.den == 1
    }

    /// Whether `p` is a whole number.
    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn as_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// The Hölder conjugate `q = p/(p-1)`.
    pub fn conjugate(&self) -> Exponent {
        Exponent {
            num: self.num,
            den: self.num - self.den,
        }
    }

    /// Power of `|A|` in `ratio^num`.
    pub fn a_power(&self) -> u32 {
        self.den
    }

    /// Power of `|B|` in `ratio^num`.
    pub fn b_power(&self) -> u32 {
        self.num - self.den
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Exponent::parse(s)
    }
}

/// Product of `base^exp` factors, evaluated in `u128` when possible.
fn product_u128(factors: &[(u128, u32)]) -> Option<u128> {
    let mut acc: u128 = 1;
    for &(b, e) in factors {
        let p = b.checked_pow(e)?;
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn product_big(factors: &[(u128, u32)]) -> BigUint {
    let mut acc = BigUint::one();
    for &(b, e) in factors {
        acc *= num_traits::pow(BigUint::from(b), e as usize);
    }
    acc
}

/// Compares `Π lhs[i].0^lhs[i].1` with `Π rhs[j].0^rhs[j].1` exactly.
pub fn cmp_power_products(lhs: &[(u128, u32)], rhs: &[(u128, u32)]) -> Ordering {
    match (product_u128(lhs), product_u128(rhs)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => product_big(lhs).cmp(&product_big(rhs)),
    }
}

pub fn power_product_big(factors: &[(u128, u32)]) -> BigUint {
    product_big(factors)
}
