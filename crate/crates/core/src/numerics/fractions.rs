use super::{floor_int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Fraction with the smallest denominator in an interval whose endpoints
/// are each open or closed; `hi = None` means `+∞`. The interval must be
/// non-empty.
pub fn simplest_between(
    lo: &Rational,
    lo_closed: bool,
    hi: Option<&Rational>,
    hi_closed: bool,
) -> Rational {
    let n = floor_int(lo);
    let k = if lo.is_integer() && lo_closed {
        n.clone()
    } else {
        &n + 1
    };
    let kq = Rational::from_integer(k);
    let fits = match hi {
        None => true,
        Some(h) => kq < *h || (kq == *h && hi_closed),
    };
    if fits {
        return kq;
    }
    // no integer inside: lo, hi ∈ [n, n+1] and x = n + 1/y
    let h = hi.expect("bounded when no integer fits");
    let nq = Rational::from_integer(n);
    let y_lo = (h - &nq).recip();
    let y_hi = if *lo == nq {
        None
    } else {
        Some((lo - &nq).recip())
    };
    let y = simplest_between(&y_lo, hi_closed, y_hi.as_ref(), lo_closed);
    nq + y.recip()
}

fn nonempty(lo: &Rational, lo_closed: bool, hi: &Rational, hi_closed: bool) -> bool {
    lo < hi || (lo == hi && lo_closed && hi_closed)
}

fn collect(
    lo: &Rational,
    lo_closed: bool,
    hi: &Rational,
    hi_closed: bool,
    qmax: &BigInt,
    out: &mut Vec<Rational>,
) {
    if !nonempty(lo, lo_closed, hi, hi_closed) {
        return;
    }
    let f = simplest_between(lo, lo_closed, Some(hi), hi_closed);
    if f.denom() > qmax {
        return;
    }
    collect(lo, lo_closed, &f, false, qmax, out);
    out.push(f.clone());
    collect(&f, false, hi, hi_closed, qmax, out);
}

/// Every reduced fraction in the closed interval `[lo, hi]` whose
/// denominator is at most `qmax`, in increasing order.
pub fn fractions_in(lo: &Rational, hi: &Rational, qmax: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    if qmax >= &BigInt::one() {
        collect(lo, true, hi, true, qmax, &mut out);
    }
    out
}

/// Partial quotients of the (finite) continued fraction of `x`.
pub fn continued_fraction(x: &Rational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut v = x.clone();
    loop {
        let a = floor_int(&v);
        out.push(a.clone());
        let f = v - Rational::from_integer(a);
        if f.is_zero() {
            return out;
        }
        v = f.recip();
    }
}

/// Convergents `p_k/q_k` of `x`, together with those of the alternative
/// expansion ending in `…, a_n − 1, 1`.
pub fn convergents(x: &Rational) -> Vec<Rational> {
    let cf = continued_fraction(x);
    let mut out = from_quotients(&cf);
    if let Some(last) = cf.last() {
        if cf.len() > 1 && *last > BigInt::one() {
            let mut alt = cf.clone();
            *alt.last_mut().unwrap() -= 1;
            alt.push(BigInt::one());
            for c in from_quotients(&alt) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn from_quotients(cf: &[BigInt]) -> Vec<Rational> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (cf[0].clone(), BigInt::one());
    let mut out = vec![Rational::new(p1.clone(), q1.clone())];
    for a in &cf[1..] {
        let p2 = a * &p1 + &p0;
        let q2 = a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        out.push(Rational::new(p1.clone(), q1.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn simplest_examples() {
        assert_eq!(simplest_between(&ratio(3, 10), true, Some(&ratio(4, 10)), true), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(1, 3), false, Some(&ratio(1, 2)), false), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(1, 2), true, Some(&ratio(1, 2)), true), ratio(1, 2));
        assert_eq!(simplest_between(&int(2), false, Some(&int(3)), true), int(3));
        assert_eq!(simplest_between(&ratio(-7, 5), true, Some(&ratio(-13, 10)), true), ratio(-4, 3));
    }

    #[test]
    fn convergents_of_ratio() {
        // 13/21 = [0; 1, 1, 1, 1, 1, 2]
        let c = convergents(&ratio(13, 21));
        assert!(c.contains(&ratio(8, 13)));
        assert!(c.contains(&ratio(13, 21)));
        assert_eq!(continued_fraction(&ratio(13, 21)).len(), 7);
    }

    proptest! {
        #[test]
        fn fractions_in_matches_enumeration(a in -40i64..40, w in 1i64..30, d in 1i64..40, qmax in 1i64..25) {
            let lo = ratio(a, d);
            let hi = &lo + ratio(w, 4 * d);
            let got = fractions_in(&lo, &hi, &BigInt::from(qmax));
            let mut want = Vec::new();
            for q in 1..=qmax {
                let pmin = super::super::ceil_int(&(&lo * int(q)));
                let pmax = floor_int(&(&hi * int(q)));
                let mut p = pmin;
                while p <= pmax {
                    let f = Rational::new(p.clone(), BigInt::from(q));
                    if f.denom() == &BigInt::from(q) {
                        want.push(f);
                    }
                    p += 1;
                }
            }
            want.sort();
            prop_assert_eq!(got, want);
        }
    }
}
