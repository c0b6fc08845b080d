use super::{ln, parse_rational, pow, to_f64, NumericsError, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Largest denominator tried while bracketing an irrational exponent.
const BRACKET_MAX_DEN: i64 = 4096;

/// A positive real exponent that is either rational or a rational multiple
/// of a ratio of logarithms `coeff · log a / log b`.
///
/// `a` and `b` are stored as distinct rationals `> 1` that are not perfect
/// powers, which makes the representation canonical: two exponents are
/// equal iff their fields are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exponent {
    Rational(Rational),
    LogRatio {
        coeff: Rational,
        a: Rational,
        b: Rational,
    },
}

/// Writes `r > 1` as `root^e` with `e` maximal.
fn primitive_root(r: &Rational) -> (Rational, u64) {
    debug_assert!(*r > Rational::one());
    let mut n = r.numer().clone();
    let mut d = r.denom().clone();
    let mut e: u64 = 1;
    let mut p: u32 = 2;
    loop {
        let limit = n.bits().max(d.bits());
        if (p as u64) > limit {
            break;
        }
        let rn = n.nth_root(p);
        let rd = d.nth_root(p);
        if num_traits::pow(rn.clone(), p as usize) == n
            && num_traits::pow(rd.clone(), p as usize) == d
        {
            n = rn;
            d = rd;
            e *= p as u64;
        } else {
            p = next_prime(p);
        }
    }
    (Rational::new(n, d), e)
}

fn next_prime(p: u32) -> u32 {
    let mut q = p + 1;
    while (2..q).take_while(|k| k * k <= q).any(|k| q % k == 0) {
        q += 1;
    }
    q
}

/// `|log r|` as `(root, e, sign)` with `r = root^{±e}`.
fn log_parts(r: &Rational) -> (Rational, u64, i64) {
    let one = Rational::one();
    if *r > one {
        let (root, e) = primitive_root(r);
        (root, e, 1)
    } else {
        let (root, e) = primitive_root(&r.recip());
        (root, e, -1)
    }
}

/// Compares `a^e1` with `b^e2` exactly (`a, b > 0`).
fn cmp_powers(a: &Rational, e1: &BigInt, b: &Rational, e2: &BigInt) -> Ordering {
    let e1 = e1.to_i64().expect("exponent too large");
    let e2 = e2.to_i64().expect("exponent too large");
    pow(a, e1).cmp(&pow(b, e2))
}

impl Exponent {
    pub fn rational(r: Rational) -> Self {
        Exponent::Rational(r)
    }

    /// `log x / log y` for positive `x, y ≠ 1`.
    pub fn log_ratio(x: &Rational, y: &Rational) -> Self {
        assert!(x.is_positive() && y.is_positive(), "logarithm of a non-positive rational");
        assert!(!y.is_one(), "log 1 in the denominator");
        if x.is_one() {
            return Exponent::Rational(Rational::zero());
        }
        let (ra, ea, sa) = log_parts(x);
        let (rb, eb, sb) = log_parts(y);
        let coeff = Rational::new(BigInt::from(sa * sb) * BigInt::from(ea), BigInt::from(eb));
        if ra == rb {
            Exponent::Rational(coeff)
        } else {
            Exponent::LogRatio {
                coeff,
                a: ra,
                b: rb,
            }
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Exponent::Rational(r) => Some(r),
            Exponent::LogRatio { .. } => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Rational(r) => to_f64(r),
            Exponent::LogRatio { coeff, a, b } => to_f64(coeff) * ln(a) / ln(b),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Exponent::Rational(r) => r.is_positive(),
            Exponent::LogRatio { coeff, .. } => coeff.is_positive(),
        }
    }

    pub fn mul_rational(&self, k: &Rational) -> Exponent {
        match self {
            Exponent::Rational(r) => Exponent::Rational(r * k),
            Exponent::LogRatio { coeff, a, b } => Exponent::LogRatio {
                coeff: coeff * k,
                a: a.clone(),
                b: b.clone(),
            },
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match self {
            Exponent::Rational(r) => r.cmp(q),
            Exponent::LogRatio { coeff, a, b } => {
                // coeff·ln a vs q·ln b  ⟺  a^{cn·qd} vs b^{qn·cd}
                let e1 = coeff.numer() * q.denom();
                let e2 = q.numer() * coeff.denom();
                cmp_powers(a, &e1, b, &e2)
            }
        }
    }

    /// Exact comparison between two exponents; `None` when equality of two
    /// distinct log-ratios cannot be excluded within the bracketing budget.
    pub fn cmp_exponent(&self, other: &Exponent) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        match (self, other) {
            (_, Exponent::Rational(q)) => Some(self.cmp_rational(q)),
            (Exponent::Rational(q), _) => Some(other.cmp_rational(q).reverse()),
            _ => {
                let (lo, hi) = self.bracket_until(|lo, hi| {
                    other.cmp_rational(lo) == Ordering::Less
                        || other.cmp_rational(hi) == Ordering::Greater
                })?;
                if other.cmp_rational(&lo) == Ordering::Less {
                    Some(Ordering::Greater)
                } else if other.cmp_rational(&hi) == Ordering::Greater {
                    Some(Ordering::Less)
                } else {
                    None
                }
            }
        }
    }

    /// `base^self` when it is rational.
    pub fn pow_exact(&self, base: &Rational) -> Option<Rational> {
        assert!(base.is_positive());
        if base.is_one() {
            return Some(Rational::one());
        }
        match self {
            Exponent::Rational(r) => {
                let p = r.numer().to_i64()?;
                let q = r.denom().to_u32()?;
                let raised = pow(base, p);
                let n = raised.numer().nth_root(q);
                let d = raised.denom().nth_root(q);
                let root = Rational::new(n, d);
                (num_traits::pow(root.clone(), q as usize) == raised).then_some(root)
            }
            Exponent::LogRatio { coeff, a, b } => {
                // base = b^{s·e}  ⟹  base^{coeff·log a/log b} = a^{coeff·s·e}
                let (root, e, s) = log_parts(base);
                if &root != b {
                    return None;
                }
                let k = coeff * Rational::from_integer(BigInt::from(s) * BigInt::from(e));
                k.is_integer().then(|| pow(a, k.to_integer().to_i64().unwrap()))
            }
        }
    }

    /// Stern–Brocot brackets `lo < self < hi` until `done(lo, hi)` or the
    /// denominator budget runs out. Only meaningful for `LogRatio`.
    fn bracket_until<F>(&self, mut done: F) -> Option<(Rational, Rational)>
    where
        F: FnMut(&Rational, &Rational) -> bool,
    {
        let negative = !self.is_positive();
        let target = if negative {
            self.mul_rational(&-Rational::one())
        } else {
            self.clone()
        };
        let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
        let (mut hn, mut hd) = (BigInt::one(), BigInt::zero());
        let mut lo = Rational::zero();
        let mut hi: Option<Rational> = None;
        loop {
            if let Some(h) = &hi {
                let (l, h) = if negative {
                    (-h.clone(), -lo.clone())
                } else {
                    (lo.clone(), h.clone())
                };
                if done(&l, &h) {
                    return Some((l, h));
                }
            }
            let mn = &ln + &hn;
            let md = &ld + &hd;
            if md > BigInt::from(BRACKET_MAX_DEN) || mn > BigInt::from(BRACKET_MAX_DEN * 64) {
                return None;
            }
            let m = Rational::new(mn.clone(), md.clone());
            match target.cmp_rational(&m) {
                Ordering::Greater => {
                    ln = mn;
                    ld = md;
                    lo = m;
                }
                Ordering::Less => {
                    hn = mn;
                    hd = md;
                    hi = Some(m);
                }
                Ordering::Equal => {
                    // only reachable for a rational exponent
                    let l = m.clone();
                    return Some((l.clone(), l));
                }
            }
        }
    }

    /// Compares `base^self` with `u` (`base, u > 0`), exactly when the power
    /// is rational and otherwise by bracketing the exponent between
    /// rationals `p/q` and comparing `base^p` with `u^q`.
    pub fn cmp_pow(&self, base: &Rational, u: &Rational) -> Option<Ordering> {
        assert!(base.is_positive() && u.is_positive());
        if let Some(v) = self.pow_exact(base) {
            return Some(v.cmp(u));
        }
        let one = Rational::one();
        // base^{p/q} vs u  ⟺  base^p vs u^q
        let pow_cmp = |e: &Rational| -> Ordering {
            let p = e.numer().to_i64().unwrap();
            let q = e.denom().to_i64().unwrap();
            pow(base, p).cmp(&pow(u, q))
        };
        let increasing = *base > one;
        let decide = |lo: &Rational, hi: &Rational| -> Option<Ordering> {
            let at_lo = pow_cmp(lo);
            let at_hi = pow_cmp(hi);
            if increasing {
                // base^lo < base^γ < base^hi
                if at_lo != Ordering::Less {
                    return Some(Ordering::Greater);
                }
                if at_hi != Ordering::Greater {
                    return Some(Ordering::Less);
                }
            } else {
                if at_lo != Ordering::Greater {
                    return Some(Ordering::Less);
                }
                if at_hi != Ordering::Less {
                    return Some(Ordering::Greater);
                }
            }
            None
        };
        match self {
            Exponent::Rational(r) => {
                // base^{p/q} irrational: compare base^p with u^q directly
                let o = pow_cmp(r);
                Some(o)
            }
            Exponent::LogRatio { .. } => {
                let (lo, hi) = self.bracket_until(|lo, hi| decide(lo, hi).is_some())?;
                decide(&lo, &hi)
            }
        }
    }

    /// A rational `u ≥ base^self`, equal to it whenever the power is
    /// rational. Irrational powers are bounded on the dyadic mesh `2^-bits`.
    pub fn pow_upper_bound(&self, base: &Rational, bits: u32) -> Rational {
        assert!(base.is_positive());
        if let Some(v) = self.pow_exact(base) {
            return v;
        }
        let e = match self {
            Exponent::Rational(r) => r.clone(),
            Exponent::LogRatio { .. } => {
                let tol = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
                let (lo, hi) = self
                    .bracket_until(|lo, hi| hi - lo <= tol)
                    .unwrap_or_else(|| {
                        let f = self.to_f64();
                        let ceil = Rational::from_integer(BigInt::from(f.ceil() as i64 + 1));
                        let floor = Rational::from_integer(BigInt::from(f.floor() as i64 - 1));
                        (floor, ceil)
                    });
                if *base > Rational::one() {
                    hi
                } else {
                    lo
                }
            }
        };
        // base^{p/q} ≤ (⌊(A·2^{q·bits})^{1/q}⌋ + 1)/2^bits with A = base^p
        let p = e.numer().to_i64().expect("exponent numerator too large");
        let q = e.denom().to_u32().expect("exponent denominator too large");
        let a = pow(base, p);
        let scaled = a.numer() * (BigInt::one() << (q as usize * bits as usize)) / a.denom();
        let root = scaled.nth_root(q) + 1;
        Rational::new(root, BigInt::one() << bits as usize)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => write!(f, "{r}"),
            Exponent::LogRatio { coeff, a, b } => {
                if coeff.is_one() {
                    write!(f, "log({a})/log({b})")
                } else {
                    write!(f, "{coeff}*log({a})/log({b})")
                }
            }
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = NumericsError;

    /// Accepts `"p/q"`, `"log(a)/log(b)"` and `"k*log(a)/log(b)"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if !t.contains("log(") {
            return parse_rational(&t).map(Exponent::Rational);
        }
        let (coeff, rest) = match t.split_once('*') {
            Some((c, r)) => (parse_rational(c)?, r.to_string()),
            None => (Rational::one(), t.clone()),
        };
        let bad = || NumericsError::Parse(s.to_string());
        let body = rest.strip_prefix("log(").ok_or_else(bad)?;
        let (a, rest) = body.split_once(")/log(").ok_or_else(bad)?;
        let b = rest.strip_suffix(')').ok_or_else(bad)?;
        let (a, b) = (parse_rational(a)?, parse_rational(b)?);
        if !a.is_positive() || !b.is_positive() || b.is_one() {
            return Err(bad());
        }
        Ok(Exponent::log_ratio(&a, &b).mul_rational(&coeff))
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
