use super::{NumericsError, RatInterval, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// A real number known either exactly or through a rational enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealScalar {
    Exact(Rational),
    Approx {
        lo: Rational,
        hi: Rational,
        precision: u32,
    },
}

/// Outcome of comparing two scalars.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Decision {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Decision::Less => Some(Ordering::Less),
            Decision::Equal => Some(Ordering::Equal),
            Decision::Greater => Some(Ordering::Greater),
            Decision::Undecided => None,
        }
    }
}

impl From<Ordering> for Decision {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Decision::Less,
            Ordering::Equal => Decision::Equal,
            Ordering::Greater => Decision::Greater,
        }
    }
}

impl From<Rational> for RealScalar {
    fn from(r: Rational) -> Self {
        RealScalar::Exact(r)
    }
}

impl RealScalar {
    pub fn enclosure(&self) -> RatInterval {
        match self {
            RealScalar::Exact(r) => RatInterval::point(r.clone()),
            RealScalar::Approx { lo, hi, .. } => RatInterval::new(lo.clone(), hi.clone()),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RealScalar::Exact(r) => Some(r),
            RealScalar::Approx { .. } => None,
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            RealScalar::Exact(_) => None,
            RealScalar::Approx { precision, .. } => Some(*precision),
        }
    }

    fn from_enclosure(i: RatInterval, precision: u32) -> Self {
        if i.is_point() {
            RealScalar::Exact(i.lo)
        } else {
            RealScalar::Approx {
                lo: i.lo,
                hi: i.hi,
                precision,
            }
        }
    }

    /// Enclosure of `√a` on the dyadic mesh `2^-bits`; exact when `a` is a
    /// perfect square of a rational.
    pub fn sqrt(a: &Rational, bits: u32) -> RealScalar {
        assert!(!a.is_negative(), "square root of a negative rational");
        let (n, d) = (a.numer(), a.denom());
        let (sn, sd) = (n.sqrt(), d.sqrt());
        if &(&sn * &sn) == n && &(&sd * &sd) == d {
            return RealScalar::Exact(Rational::new(sn, sd));
        }
        // floor(√a · 2^bits) = floor(√(a · 4^bits)) computed on integers.
        let scale = BigInt::one() << (2 * bits as usize);
        let m = (n * scale / d).sqrt();
        let den = BigInt::one() << bits as usize;
        let lo = Rational::new(m.clone(), den.clone());
        let hi = Rational::new(m + 1, den);
        RealScalar::Approx {
            lo,
            hi,
            precision: bits,
        }
    }

    /// `self^e` with outward rounding of every intermediate product to
    /// `bits + guard` bits.
    pub fn powi(&self, e: u32, bits: u32) -> RealScalar {
        match self {
            RealScalar::Exact(r) => RealScalar::Exact(num_traits::pow(r.clone(), e as usize)),
            RealScalar::Approx { lo, hi, precision } => {
                assert!(!lo.is_negative(), "powi expects a non-negative enclosure");
                let guard = bits + 2 * (32 - e.leading_zeros()) + 8;
                let base = RatInterval::new(lo.clone(), hi.clone());
                let mut acc = RatInterval::point(Rational::one());
                let mut b = base;
                let mut k = e;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = (&acc * &b).round_outward(guard);
                    }
                    k >>= 1;
                    if k > 0 {
                        b = (&b * &b).round_outward(guard);
                    }
                }
                RealScalar::from_enclosure(acc, (*precision).min(bits))
            }
        }
    }

    pub fn mul_rational(&self, k: &Rational) -> RealScalar {
        match self {
            RealScalar::Exact(r) => RealScalar::Exact(r * k),
            RealScalar::Approx { precision, .. } => {
                RealScalar::from_enclosure(&self.enclosure() * k, *precision)
            }
        }
    }

    pub fn add_rational(&self, k: &Rational) -> RealScalar {
        match self {
            RealScalar::Exact(r) => RealScalar::Exact(r + k),
            RealScalar::Approx { lo, hi, precision } => RealScalar::Approx {
                lo: lo + k,
                hi: hi + k,
                precision: *precision,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RealScalar::Exact(r) if r.is_zero())
    }
}

/// Exact for rational pairs; for enclosures, `Undecided` whenever the two
/// enclosures overlap.
pub fn compare(a: &RealScalar, b: &RealScalar) -> Decision {
    if let (RealScalar::Exact(x), RealScalar::Exact(y)) = (a, b) {
        return x.cmp(y).into();
    }
    let (ia, ib) = (a.enclosure(), b.enclosure());
    if ia.hi < ib.lo {
        Decision::Less
    } else if ia.lo > ib.hi {
        Decision::Greater
    } else {
        Decision::Undecided
    }
}

/// Compares `a(bits)` and `b(bits)`, doubling the working precision from
/// `start_bits` until the comparison is decided or `cap` refinements have
/// been spent.
pub fn compare_refining<A, B>(
    a: A,
    b: B,
    start_bits: u32,
    cap: u32,
) -> Result<Ordering, NumericsError>
where
    A: Fn(u32) -> RealScalar,
    B: Fn(u32) -> RealScalar,
{
    let mut bits = start_bits.max(1);
    for _ in 0..=cap {
        if let Some(o) = compare(&a(bits), &b(bits)).ordering() {
            return Ok(o);
        }
        bits = bits.saturating_mul(2);
    }
    Err(NumericsError::PrecisionCapExceeded(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    fn approx(lo: Rational, hi: Rational) -> RealScalar {
        RealScalar::Approx {
            lo,
            hi,
            precision: 8,
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            compare(&ratio(1, 3).into(), &ratio(2, 6).into()),
            Decision::Equal
        );
        let a = approx(ratio(141, 100), ratio(142, 100));
        assert_eq!(compare(&a, &ratio(3, 2).into()), Decision::Less);
        let b = approx(ratio(1415, 1000), ratio(143, 100));
        assert_eq!(compare(&a, &b), Decision::Undecided);
    }

    #[test]
    fn sqrt_enclosure_shrinks() {
        let two = int(2);
        let mut last = None::<Rational>;
        for bits in [4, 8, 16, 32] {
            let s = RealScalar::sqrt(&two, bits).enclosure();
            assert!(&s.lo * &s.lo < two && two < &s.hi * &s.hi);
            if let Some(w) = last {
                assert!(s.width() < w);
            }
            last = Some(s.width());
        }
        assert_eq!(RealScalar::sqrt(&ratio(9, 4), 4), RealScalar::Exact(ratio(3, 2)));
    }

    #[test]
    fn refining_decides_sqrt2_squared_vs_rational() {
        // (√2)^7 = 8√2 ≈ 11.3137 against 11.3 and 11.32
        let a = |bits| RealScalar::sqrt(&int(2), bits).powi(7, bits);
        let lower = |_| RealScalar::Exact(ratio(113, 10));
        let upper = |_| RealScalar::Exact(ratio(1132, 100));
        assert_eq!(compare_refining(a, lower, 4, 6).unwrap(), Ordering::Greater);
        assert_eq!(compare_refining(a, upper, 4, 6).unwrap(), Ordering::Less);
        // An exact tie with a genuinely irrational quantity can never be
        // decided, so the cap is reported.
        let wide = |_| approx(int(0), int(100));
        assert!(matches!(
            compare_refining(wide, lower, 4, 3),
            Err(NumericsError::PrecisionCapExceeded(3))
        ));
    }
}
