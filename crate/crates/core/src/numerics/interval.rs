use super::{ceil_int, floor_int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Closed interval `[lo, hi]` with rational endpoints, `lo ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatInterval {
    #[serde(with = "super::serde_rational")]
    pub lo: Rational,
    #[serde(with = "super::serde_rational")]
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// Builds from two endpoints in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rational) -> Self {
        RatInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn ball(center: &Rational, radius: &Rational) -> Self {
        RatInterval::new(center - radius, center + radius)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| RatInterval::new(lo.clone(), hi.clone()))
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn dist_to(&self, x: &Rational) -> Rational {
        if *x < self.lo {
            &self.lo - x
        } else if *x > self.hi {
            x - &self.hi
        } else {
            Rational::zero()
        }
    }

    /// Widens to the enclosing grid of mesh `2^-bits`: `lo` rounds down,
    /// `hi` rounds up.
    pub fn round_outward(&self, bits: u32) -> RatInterval {
        let scale = Rational::from_integer(BigInt::one() << bits as usize);
        let lo = Rational::new(floor_int(&(&self.lo * &scale)), scale.to_integer());
        let hi = Rational::new(ceil_int(&(&self.hi * &scale)), scale.to_integer());
        RatInterval { lo, hi }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }
}

impl Mul<&Rational> for &RatInterval {
    type Output = RatInterval;
    fn mul(self, k: &Rational) -> RatInterval {
        RatInterval::spanning(&self.lo * k, &self.hi * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn outward_rounding_encloses() {
        let i = RatInterval::new(r(1, 3), r(2, 3));
        let o = i.round_outward(4);
        assert_eq!(o.lo, r(5, 16));
        assert_eq!(o.hi, r(11, 16));
        assert!(o.contains_interval(&i));
    }

    #[test]
    fn intersection_and_distance() {
        let a = RatInterval::new(r(0, 1), r(1, 2));
        let b = RatInterval::new(r(1, 2), r(1, 1));
        assert_eq!(a.intersection(&b), Some(RatInterval::point(r(1, 2))));
        assert_eq!(a.dist_to(&r(3, 4)), r(1, 4));
        assert_eq!(a.dist_to(&r(1, 4)), r(0, 1));
    }

    proptest! {
        #[test]
        fn ops_are_conservative(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20) {
            let x = r(a, b);
            let y = r(c, d);
            let ix = RatInterval::point(x.clone());
            let iy = RatInterval::point(y.clone());
            prop_assert!((&ix + &iy).contains(&(&x + &y)));
            prop_assert!((&ix - &iy).contains(&(&x - &y)));
            prop_assert!((&ix * &iy).contains(&(&x * &y)));
            let wide_x = ix.round_outward(3);
            let wide_y = iy.round_outward(5);
            prop_assert!((&wide_x * &wide_y).contains(&(&x * &y)));
            prop_assert!((&wide_x - &wide_y).contains(&(&x - &y)));
        }
    }
}
