//! Exact scalars, verified intervals and circle distances.
//!
//! Every game quantity is a [`Rational`]. [`RealScalar`] exists for
//! lacunary terms `bⁿ` with an irrational base, which are carried as
//! outward-rounded rational enclosures and refined on demand.

mod circle;
mod exponent;
mod fractions;
mod interval;
mod real;

pub use circle::{circle_dist, min_circle_dist_over, CirclePoint};
pub use exponent::Exponent;
pub use fractions::{convergents, fractions_in, simplest_between};
pub use interval::RatInterval;
pub use real::{compare, compare_refining, Decision, RealScalar};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("malformed rational {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("circle distance undecided at current precision")]
    PrecisionExhausted,
    #[error("comparison still undecided after {0} refinements")]
    PrecisionCapExceeded(u32),
}

/// Parses `"p"` or `"p/q"` (optional leading sign, surrounding whitespace
/// ignored).
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| NumericsError::Parse(s.to_string()))?;
    let d: BigInt = den.parse().map_err(|_| NumericsError::Parse(s.to_string()))?;
    if d.is_zero() {
        return Err(NumericsError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Canonical `"p/q"` text; integers print without a denominator.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_int(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - Rational::from_integer(floor_int(r))
}

pub fn pow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale through the bit lengths.
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = nb - db;
        let scaled = if shift > 0 {
            r / Rational::from_integer(BigInt::one() << (shift as usize))
        } else {
            r * Rational::from_integer(BigInt::one() << ((-shift) as usize))
        };
        scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
    })
}

/// Natural log of a positive rational, accurate for very large or small
/// magnitudes.
pub fn ln(r: &Rational) -> f64 {
    debug_assert!(r.is_positive());
    ln_int(r.numer()) - ln_int(r.denom())
}

fn ln_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Rational as the string `"p/q"` in serde documents.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_rational_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_opt {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Smallest integer `m ≥ 0` with `m² ≥ a` (for `a ≥ 0`).
pub fn ceil_sqrt(a: &Rational) -> BigInt {
    if !a.is_positive() {
        return BigInt::zero();
    }
    let mut m = ceil_int(a).sqrt();
    while Rational::from_integer(&m * &m) < *a {
        m += 1;
    }
    while m > BigInt::zero() {
        let d = &m - 1;
        if Rational::from_integer(&d * &d) >= *a {
            m = d;
        } else {
            break;
        }
    }
    m
}

/// Largest integer `m ≥ 0` with `m² < a`, or `None` when `a ≤ 0`.
pub fn floor_sqrt_strict(a: &Rational) -> Option<BigInt> {
    if !a.is_positive() {
        return None;
    }
    let m = ceil_sqrt(a) - 1;
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("2/6").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert_eq!(parse_rational("3/-4").unwrap(), ratio(-3, 4));
        assert!(matches!(
            parse_rational("1/0"),
            Err(NumericsError::ZeroDenominator(_))
        ));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format_rational(&ratio(4, 6)), "2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn floor_ceil_frac() {
        assert_eq!(floor_int(&ratio(-1, 3)), BigInt::from(-1));
        assert_eq!(ceil_int(&ratio(-1, 3)), BigInt::zero());
        assert_eq!(frac(&ratio(-1, 3)), ratio(2, 3));
        assert_eq!(frac(&ratio(7, 3)), ratio(1, 3));
    }

    #[test]
    fn sqrt_bounds() {
        assert_eq!(ceil_sqrt(&int(36)), BigInt::from(6));
        assert_eq!(ceil_sqrt(&int(37)), BigInt::from(7));
        assert_eq!(floor_sqrt_strict(&int(36)), Some(BigInt::from(5)));
        assert_eq!(floor_sqrt_strict(&ratio(1, 4)), Some(BigInt::zero()));
    }

    #[test]
    fn ln_of_huge() {
        let r = pow(&int(3), 2000);
        assert!((ln(&r) - 2000.0 * 3f64.ln()).abs() < 1e-9 * 2000.0);
        assert!((ln(&pow(&ratio(1, 2), 1500)) + 1500.0 * 2f64.ln()).abs() < 1e-6);
    }
}
