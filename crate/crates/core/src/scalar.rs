//! Exact ground fields.
//!
//! Everything above this module is generic over [`Scalar`]. Two fields are
//! provided: the rationals and the Gaussian rationals `a + b i`.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field of characteristic zero.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_gaussian(&self) -> Complex<BigRational>;
    /// Canonical text form, e.g. `-3/4` or `1/2+3i`.
    fn to_text(&self) -> String;
    fn parse_text(s: &str) -> Option<Self>;

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

pub fn rational_text(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_gaussian(&self) -> Complex<BigRational> {
        Complex::new(self.clone(), BigRational::zero())
    }

    fn to_text(&self) -> String {
        rational_text(self)
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

impl Scalar for Complex<BigRational> {
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_i64(n), BigRational::zero())
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }

    fn to_gaussian(&self) -> Complex<BigRational> {
        self.clone()
    }

    fn to_text(&self) -> String {
        let (re, im) = (&self.re, &self.im);
        if im.is_zero() {
            return rational_text(re);
        }
        let im_part = if im.is_one() {
            "i".to_string()
        } else if (-im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", rational_text(im))
        };
        if re.is_zero() {
            im_part
        } else if im.is_negative() {
            format!("{}{}", rational_text(re), im_part)
        } else {
            format!("{}+{}", rational_text(re), im_part)
        }
    }

    fn parse_text(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(|re| Complex::new(re, BigRational::zero()));
        };
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (re, im) = match split {
            Some(i) => (parse_rational(&body[..i])?, &body[i..]),
            None => (BigRational::zero(), body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Some(Complex::new(re, im))
    }
}

/// Display adapter for any scalar.
pub struct ScalarDisplay<'a, F: Scalar>(pub &'a F);

impl<F: Scalar> Display for ScalarDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_text())
    }
}

/// `n!` as a scalar.
pub fn factorial<F: Scalar>(n: usize) -> F {
    (1..=n as i64).fold(F::one(), |acc, k| acc * F::from_i64(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;
    type G = Complex<BigRational>;

    #[test]
    fn rationals_are_reduced() {
        let q = Q::parse_text("6/-4").unwrap();
        assert_eq!(q.to_text(), "-3/2");
        assert_eq!(Q::parse_text("0/5").unwrap().to_text(), "0");
        assert!(Q::parse_text("1/0").is_none());
        assert!(Q::parse_text("").is_none());
    }

    #[test]
    fn gaussian_text_round_trip() {
        for s in ["0", "-1", "i", "-i", "1/2+3i", "2-i", "-3/4i", "5"] {
            let g = G::parse_text(s).unwrap();
            assert_eq!(G::parse_text(&g.to_text()).unwrap(), g, "{s}");
        }
        let i = G::parse_text("i").unwrap();
        assert_eq!((i.clone() * i).to_text(), "-1");
    }

    #[test]
    fn gaussian_division_is_exact() {
        let a = G::parse_text("1+2i").unwrap();
        let b = G::parse_text("3-i").unwrap();
        assert_eq!((a.clone() / b.clone()) * b, a);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial::<Q>(5), Q::from_i64(120));
        assert_eq!(factorial::<Q>(0), Q::one());
    }
}
