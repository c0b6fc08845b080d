use super::{ceil_int, floor_int, frac, NumericsError, RatInterval, Rational, RealScalar};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A point of the circle ℝ/ℤ, stored by its representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(#[serde(with = "super::serde_rational")] Rational);

impl CirclePoint {
    /// Reduces any rational modulo 1.
    pub fn new(r: Rational) -> Self {
        CirclePoint(frac(&r))
    }

    pub fn zero() -> Self {
        CirclePoint(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn exact_dist(v: &Rational) -> Rational {
    let f = frac(v);
    let g = Rational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// Distance on ℝ/ℤ between `π(u)` and `y`, i.e. `min_m |u − y − m|`.
///
/// For an enclosure the nearest integer `m` must be the same across the
/// whole enclosure; otherwise `PrecisionExhausted` asks the caller to refine.
pub fn circle_dist(u: &RealScalar, y: &CirclePoint) -> Result<RealScalar, NumericsError> {
    match u {
        RealScalar::Exact(r) => Ok(RealScalar::Exact(exact_dist(&(r - &y.0)))),
        RealScalar::Approx { lo, hi, precision } => {
            let lo = lo - &y.0;
            let hi = hi - &y.0;
            // nearest integer is ambiguous iff a half-integer lies inside
            let h = half();
            let k_lo = floor_int(&(&lo + &h));
            let k_hi = floor_int(&(&hi + &h));
            if k_lo != k_hi {
                return Err(NumericsError::PrecisionExhausted);
            }
            let m = Rational::from_integer(k_lo);
            let a = (&lo - &m).abs();
            let b = (&hi - &m).abs();
            let (dmin, dmax) = if lo <= m && m <= hi {
                (Rational::zero(), a.max(b))
            } else if a <= b {
                (a, b)
            } else {
                (b, a)
            };
            Ok(if dmin == dmax {
                RealScalar::Exact(dmin)
            } else {
                RealScalar::Approx {
                    lo: dmin,
                    hi: dmax,
                    precision: *precision,
                }
            })
        }
    }
}

/// Exact minimum of the circle distance to `y` over every real in `range`.
/// Zero iff `range` meets `y + ℤ`.
pub fn min_circle_dist_over(range: &RatInterval, y: &CirclePoint) -> Rational {
    let lo = &range.lo - &y.0;
    let hi = &range.hi - &y.0;
    if ceil_int(&lo) <= floor_int(&hi) {
        return Rational::zero();
    }
    exact_dist(&lo).min(exact_dist(&hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, pow, ratio};
    use proptest::prelude::*;

    fn d(u: Rational, y: Rational) -> Rational {
        circle_dist(&RealScalar::Exact(u), &CirclePoint::new(y))
            .unwrap()
            .exact()
            .unwrap()
            .clone()
    }

    #[test]
    fn examples() {
        assert_eq!(d(ratio(7, 3), int(0)), ratio(1, 3));
        assert_eq!(d(ratio(1, 2), ratio(1, 2)), int(0));
        assert_eq!(d(pow(&int(2), 5) * ratio(1, 3), int(0)), ratio(1, 3));
    }

    #[test]
    fn powers_of_two_over_three() {
        // 2ⁿ/3 mod 1 alternates between 2/3 and 1/3
        for n in 1..40 {
            assert_eq!(d(pow(&int(2), n) * ratio(1, 3), int(0)), ratio(1, 3));
        }
    }

    #[test]
    fn enclosure_distance() {
        let u = RealScalar::Approx {
            lo: ratio(21, 10),
            hi: ratio(22, 10),
            precision: 4,
        };
        let r = circle_dist(&u, &CirclePoint::zero()).unwrap();
        assert_eq!(r.enclosure(), RatInterval::new(ratio(1, 10), ratio(2, 10)));
        let straddle = RealScalar::Approx {
            lo: ratio(24, 10),
            hi: ratio(26, 10),
            precision: 4,
        };
        assert_eq!(
            circle_dist(&straddle, &CirclePoint::zero()),
            Err(NumericsError::PrecisionExhausted)
        );
    }

    #[test]
    fn min_over_range() {
        let y = CirclePoint::new(ratio(1, 2));
        assert_eq!(
            min_circle_dist_over(&RatInterval::new(ratio(1, 10), ratio(2, 10)), &y),
            ratio(3, 10)
        );
        assert_eq!(
            min_circle_dist_over(&RatInterval::new(ratio(4, 10), ratio(17, 10)), &y),
            int(0)
        );
    }

    proptest! {
        #[test]
        fn period_one(n in -1000i64..1000, dd in 1i64..500, k in -50i64..50, yn in 0i64..7) {
            let u = ratio(n, dd);
            let y = ratio(yn, 7);
            let a = d(u.clone(), y.clone());
            let b = d(u + int(k), y);
            prop_assert_eq!(&a, &b);
            prop_assert!(a >= int(0) && a <= ratio(1, 2));
        }
    }
}
