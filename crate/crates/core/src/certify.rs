//! Strategy-blind verification of finite-horizon certificates. Everything
//! is re-derived from the outcome interval and the embedded spec snapshot.

use crate::alice::{BiLipschitzMap, LacunarySpec};
use crate::fractal::{
    lower_pointwise_dimension, DecayParams, DimensionReport, FractalMeasure, MeasureAuditReport,
};
use crate::game::Transcript;
use crate::numerics::{
    self, circle_dist, min_circle_dist_over, CirclePoint, RatInterval, Rational, RealScalar,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the denominators checked for badly approximable claims.
pub const DEFAULT_Q_CAP: u64 = 1_000_000;

/// Precision doublings allowed when a surd term sits close to a threshold.
const REFINEMENT_CAP: u32 = 12;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("certificate constant must be positive, got {0}")]
    NonPositiveConstant(Rational),
    #[error("certificate is not of kind {0}")]
    WrongKind(&'static str),
    #[error("horizon mismatch: {0}")]
    HorizonMismatch(String),
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
}

mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Claim {
    /// `d(π(t_n φ⁻¹(x)), y_n) ≥ c` for `n_min ≤ n ≤ n_max`.
    OrbitSeparation {
        sequence: LacunarySpec,
        n_min: usize,
        n_max: usize,
    },
    /// `|φ⁻¹(x) − p/q| > c/q²` for every rational with `q ≤ q_max`.
    BadApprox {
        #[serde(with = "serde_bigint")]
        q_max: BigInt,
    },
}

/// A claim about every `x` in `interval`, the final ball of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub label: String,
    pub interval: RatInterval,
    #[serde(with = "numerics::serde_rational")]
    pub c: Rational,
    pub phi: BiLipschitzMap,
    pub rounds: usize,
    #[serde(flatten)]
    pub claim: Claim,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self.claim {
            Claim::OrbitSeparation { .. } => "OrbitSeparation",
            Claim::BadApprox { .. } => "BadApprox",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Witness {
    /// Index `n` and a point `x` of the interval minimizing the distance.
    Orbit {
        n: usize,
        #[serde(with = "numerics::serde_rational")]
        x: Rational,
        #[serde(with = "numerics::serde_rational")]
        distance: Rational,
    },
    Rational {
        #[serde(with = "serde_bigint")]
        p: BigInt,
        #[serde(with = "serde_bigint")]
        q: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { witness: Witness },
    /// A surd term could not be separated from the threshold in time.
    Inconclusive { n: usize },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    pub kind: String,
    #[serde(with = "numerics::serde_rational")]
    pub c: Rational,
    pub horizon: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

fn check_constant(c: &Rational) -> Result<(), CertifyError> {
    if c.is_positive() {
        Ok(())
    } else {
        Err(CertifyError::NonPositiveConstant(c.clone()))
    }
}

enum Check {
    Pass,
    Fail(Rational, Rational),
    Undecided,
}

/// Exact check for rational `t_n`: the range `t_n·U` and its closest point
/// to `y_n + ℤ`.
fn check_exact(t: &Rational, pre: &RatInterval, y: &CirclePoint, c: &Rational) -> Check {
    let range = &RatInterval::point(t.clone()) * pre;
    let d = min_circle_dist_over(&range, y);
    if d >= *c {
        return Check::Pass;
    }
    let shifted_lo = &range.lo - y.value();
    let m = numerics::ceil_int(&shifted_lo);
    let hit = y.value() + Rational::from_integer(m);
    let u = if range.contains(&hit) {
        hit
    } else {
        let dl = min_circle_dist_over(&RatInterval::point(range.lo.clone()), y);
        if dl == d {
            range.lo.clone()
        } else {
            range.hi.clone()
        }
    };
    Check::Fail(u / t, d)
}

/// Enclosure check for a surd `t_n`: the outer range bounds the distance
/// from below, the inner range and the endpoint enclosures from above.
fn check_enclosed(t: &RealScalar, pre: &RatInterval, y: &CirclePoint, c: &Rational) -> Check {
    let e = t.enclosure();
    let outer = &e * pre;
    if min_circle_dist_over(&outer, y) >= *c {
        return Check::Pass;
    }
    let e_lo = &e * &RatInterval::point(pre.lo.clone());
    let e_hi = &e * &RatInterval::point(pre.hi.clone());
    if e_lo.hi <= e_hi.lo {
        let inner = RatInterval::new(e_lo.hi.clone(), e_hi.lo.clone());
        let d = min_circle_dist_over(&inner, y);
        if d < *c {
            return Check::Fail(inner.midpoint() / &e.midpoint(), d);
        }
    }
    for end in [&e_lo, &e_hi] {
        let scalar = RealScalar::Approx {
            lo: end.lo.clone(),
            hi: end.hi.clone(),
            precision: 0,
        };
        if let Ok(d) = circle_dist(&scalar, y) {
            let upper = d.enclosure().hi;
            if upper < *c {
                return Check::Fail(end.midpoint() / &e.midpoint(), upper);
            }
        }
    }
    Check::Undecided
}

/// Checks `d(π(t_n φ⁻¹(x)), y_n) ≥ c` over the whole interval for every `n`
/// in the horizon, in parallel; the smallest failing `n` is reported.
pub fn verify_orbit_separation(cert: &Certificate) -> Result<Verdict, CertifyError> {
    let Claim::OrbitSeparation { sequence, n_min, n_max } = &cert.claim else {
        return Err(CertifyError::WrongKind("OrbitSeparation"));
    };
    check_constant(&cert.c)?;
    if let Some(last) = sequence.last_index() {
        if *n_max > last {
            return Err(CertifyError::HorizonMismatch(format!(
                "horizon {n_max} beyond the last index {last}"
            )));
        }
    }
    if n_max < n_min {
        return Ok(Verdict::Pass);
    }
    let pre = cert.phi.preimage(&cert.interval);
    let outcome = (*n_min..=*n_max)
        .into_par_iter()
        .map(|n| {
            let y = sequence.target(n);
            let mut bits = 64;
            for _ in 0..=REFINEMENT_CAP {
                let t = sequence.term(n, bits);
                let check = match &t {
                    RealScalar::Exact(t) => check_exact(t, &pre, &y, &cert.c),
                    RealScalar::Approx { .. } => check_enclosed(&t, &pre, &y, &cert.c),
                };
                match check {
                    Check::Pass => return None,
                    Check::Fail(u, distance) => {
                        return Some(Verdict::Fail {
                            witness: Witness::Orbit {
                                n,
                                x: cert.phi.apply(&u),
                                distance,
                            },
                        })
                    }
                    Check::Undecided => bits *= 2,
                }
            }
            Some(Verdict::Inconclusive { n })
        })
        .filter_map(|v| v.map(|v| (first_index(&v), v)))
        .min_by_key(|(n, _)| *n);
    Ok(outcome.map_or(Verdict::Pass, |(_, v)| v))
}

fn first_index(v: &Verdict) -> usize {
    match v {
        Verdict::Fail { witness: Witness::Orbit { n, .. } } | Verdict::Inconclusive { n } => *n,
        _ => 0,
    }
}

/// First `p` over `q` violating `|u − p/q| > c/q²` for some `u ∈ pre`.
fn ba_violation(pre: &RatInterval, c: &Rational, q: &BigInt) -> Option<BigInt> {
    let qq = Rational::from_integer(q.clone());
    let slack = c / &qq;
    let lo = numerics::ceil_int(&(&pre.lo * &qq - &slack));
    let hi = numerics::floor_int(&(&pre.hi * &qq + &slack));
    let bound = c / (&qq * &qq);
    let mut p = lo;
    while p <= hi {
        if p.gcd(q).is_one() {
            let f = Rational::new(p.clone(), q.clone());
            if pre.dist_to(&f) <= bound {
                return Some(p);
            }
        }
        p += 1;
    }
    None
}

const FILTER_BITS: usize = 96;

/// Sound prefilter for [`verify_ba`]: the interval is widened outward to
/// the grid `2^{-96}ℤ` and `d(qU', ℤ) > c/q` is tested in `u128`, with the
/// threshold rounded up. A denominator it clears cannot violate the bound
/// on the original interval; everything else goes to the exact check.
struct DyadicFilter {
    /// `2^96·lo' mod 2^96`.
    lo_frac: u128,
    /// `2^96·(hi' − lo')`.
    width: u128,
    /// `⌈2^96·c⌉`.
    c_scaled: u128,
}

impl DyadicFilter {
    fn new(pre: &RatInterval, c: &Rational) -> Option<Self> {
        let scale = Rational::from_integer(BigInt::one() << FILTER_BITS);
        let lo = numerics::floor_int(&(&pre.lo * &scale));
        let hi = numerics::ceil_int(&(&pre.hi * &scale));
        let modulus = BigInt::one() << FILTER_BITS;
        let lo_frac = u128::try_from(lo.mod_floor(&modulus)).ok()?;
        let width = u128::try_from(hi - lo).ok().filter(|w| *w < 1 << 64)?;
        let c_scaled = u128::try_from(numerics::ceil_int(&(c * &scale))).ok().filter(|c| *c < 1 << 96)?;
        Some(DyadicFilter { lo_frac, width, c_scaled })
    }

    /// True when `d(qU', ℤ) > c/q` is certain.
    fn clears(&self, q: u64) -> bool {
        if q >= 1 << 20 {
            return false;
        }
        let one: u128 = 1 << FILTER_BITS;
        let q = q as u128;
        let start = (self.lo_frac * q) % one;
        let end = start + self.width * q;
        if end >= one {
            return false;
        }
        let dist = start.min(one - end);
        let threshold = self.c_scaled.div_ceil(q);
        dist > threshold
    }
}

/// Checks `|φ⁻¹(x) − p/q| > c/q²` for all `x` in the interval and all
/// reduced `p/q` with `q ≤ q_max` (the certificate's horizon unless given).
pub fn verify_ba(cert: &Certificate, q_max: Option<&BigInt>) -> Result<Verdict, CertifyError> {
    let Claim::BadApprox { q_max: own } = &cert.claim else {
        return Err(CertifyError::WrongKind("BadApprox"));
    };
    check_constant(&cert.c)?;
    let q_max = q_max.unwrap_or(own);
    let qm: u64 = q_max
        .try_into()
        .map_err(|_| CertifyError::HorizonMismatch(format!("denominator bound {q_max} is too large")))?;
    let pre = cert.phi.preimage(&cert.interval);
    let filter = DyadicFilter::new(&pre, &cert.c);
    let hit = (1..=qm).into_par_iter().find_map_first(|q| {
        if filter.as_ref().is_some_and(|f| f.clears(q)) {
            return None;
        }
        let q = BigInt::from(q);
        ba_violation(&pre, &cert.c, &q).map(|p| (q, p))
    });
    Ok(match hit {
        None => Verdict::Pass,
        Some((q, p)) => Verdict::Fail {
            witness: Witness::Rational { p, q },
        },
    })
}

/// Runs the check matching the certificate's kind.
pub fn verify(cert: &Certificate) -> Result<VerificationReport, CertifyError> {
    let (verdict, horizon) = match &cert.claim {
        Claim::OrbitSeparation { n_min, n_max, .. } => {
            (verify_orbit_separation(cert)?, format!("n in {n_min}..={n_max}"))
        }
        Claim::BadApprox { q_max } => (verify_ba(cert, None)?, format!("q <= {q_max}")),
    };
    Ok(VerificationReport {
        label: cert.label.clone(),
        kind: cert.kind().to_string(),
        c: cert.c.clone(),
        horizon,
        verdict,
    })
}

/// Confirms that a certificate belongs to a run: its rounds do not exceed
/// the transcript and its interval contains the final ball.
pub fn check_against_transcript(cert: &Certificate, t: &Transcript) -> Result<(), CertifyError> {
    if cert.rounds > t.rounds() {
        return Err(CertifyError::HorizonMismatch(format!(
            "certificate claims {} rounds, transcript has {}",
            cert.rounds,
            t.rounds()
        )));
    }
    if !cert.interval.contains_interval(&t.last_ball().interval()) {
        return Err(CertifyError::HorizonMismatch(
            "certificate interval does not contain the final ball".into(),
        ));
    }
    Ok(())
}

/// Analytic dimension bound of a measure next to empirical lower pointwise
/// dimension estimates at `x` over `schedule`. Nothing here is derived from
/// game runs.
pub fn dimension_report(
    mu: &FractalMeasure,
    decay: Option<&DecayParams>,
    audit: Option<&MeasureAuditReport>,
    x: &Rational,
    schedule: &[Rational],
    depth: usize,
) -> DimensionReport {
    let bound = decay
        .map(|d| d.gamma.clone())
        .or_else(|| audit.and_then(|a| a.decay.as_ref()).map(|d| d.gamma.clone()));
    let power = audit.and_then(|a| a.power_law.as_ref()).map(|p| p.gamma.clone());
    DimensionReport::new(bound, power, lower_pointwise_dimension(mu, x, schedule, depth))
}

/// `min_q q²|x − p/q|` over the convergents of `x` with `1 ≤ q ≤ q_max`
/// different from `x` itself; by Legendre's theorem any `p/q` with
/// `q²|x − p/q| < 1/2` is among them.
pub fn convergent_margin(x: &Rational, q_max: &BigInt) -> Option<Rational> {
    numerics::convergents(x)
        .into_iter()
        .filter(|f| f.denom() <= q_max && f != x)
        .map(|f| {
            let q = Rational::from_integer(f.denom().clone());
            (x - &f).abs() * &q * &q
        })
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alice::Targets;
    use crate::numerics::{int, ratio};
    use num_traits::Zero;

    fn orbit_cert(x: Rational, c: Rational, n_max: usize) -> Certificate {
        Certificate {
            label: "t".into(),
            interval: RatInterval::point(x),
            c,
            phi: BiLipschitzMap::identity(),
            rounds: 0,
            claim: Claim::OrbitSeparation {
                sequence: LacunarySpec::geometric(int(2), Targets::Const(CirclePoint::zero())).unwrap(),
                n_min: 1,
                n_max,
            },
        }
    }

    fn ba_cert(interval: RatInterval, c: Rational, q: i64) -> Certificate {
        Certificate {
            label: "b".into(),
            interval,
            c,
            phi: BiLipschitzMap::identity(),
            rounds: 0,
            claim: Claim::BadApprox { q_max: BigInt::from(q) },
        }
    }

    #[test]
    fn one_third_stays_away() {
        let v = verify_orbit_separation(&orbit_cert(ratio(1, 3), ratio(1, 3), 60)).unwrap();
        assert_eq!(v, Verdict::Pass);
        let v = verify_orbit_separation(&orbit_cert(ratio(1, 3), ratio(1, 3) + ratio(1, 1000), 60)).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn one_half_fails_at_first_index() {
        let v = verify_orbit_separation(&orbit_cert(ratio(1, 2), ratio(1, 1000), 10)).unwrap();
        assert!(matches!(v, Verdict::Fail { witness: Witness::Orbit { n: 1, .. } }));
    }

    #[test]
    fn empty_horizon_is_vacuous() {
        let v = verify_orbit_separation(&orbit_cert(ratio(1, 2), ratio(1, 1000), 0)).unwrap();
        assert_eq!(v, Verdict::Pass);
    }

    #[test]
    fn interval_range_crossing_integer_fails() {
        // n = 1: 2·[0.49, 0.51] crosses 1
        let mut c = orbit_cert(int(0), ratio(1, 100), 3);
        c.interval = RatInterval::new(ratio(49, 100), ratio(51, 100));
        let v = verify_orbit_separation(&c).unwrap();
        assert!(matches!(v, Verdict::Fail { witness: Witness::Orbit { n: 1, ref x, .. } } if *x == ratio(1, 2)));
    }

    #[test]
    fn rational_point_fails_ba() {
        let v = verify_ba(&ba_cert(RatInterval::point(ratio(1, 2)), ratio(1, 100), 10), None).unwrap();
        assert_eq!(
            v,
            Verdict::Fail {
                witness: Witness::Rational {
                    p: BigInt::from(1),
                    q: BigInt::from(2)
                }
            }
        );
        // a wide interval already fails at q = 1
        let wide = RatInterval::new(ratio(1, 10), ratio(9, 10));
        let v = verify_ba(&ba_cert(wide, ratio(1, 4), 10), None).unwrap();
        assert!(matches!(v, Verdict::Fail { witness: Witness::Rational { ref p, ref q } } if q.is_one() && p.is_zero()));
    }

    #[test]
    fn golden_surrogate_matches_convergents() {
        let x = ratio(13, 21);
        let q = BigInt::from(20);
        let margin = convergent_margin(&x, &q).unwrap();
        for c in [ratio(1, 100), ratio(1, 3), margin.clone(), &margin * ratio(99, 100)] {
            let v = verify_ba(&ba_cert(RatInterval::point(x.clone()), c.clone(), 20), None).unwrap();
            assert_eq!(v.passed(), c < margin, "c = {c}");
        }
    }

    #[test]
    fn quadratic_approximants_agree_with_continued_fractions() {
        let mut checked = 0;
        for d in [2i64, 3, 5, 6, 7] {
            let mut pq = Vec::new();
            // convergents of √d via the Pell recurrence on the continued fraction
            let x = RealScalar::sqrt(&int(d), 80).enclosure().midpoint();
            for f in numerics::convergents(&x).into_iter().skip(3).take(6) {
                pq.push(f);
            }
            for x in pq {
                let qmax = x.denom() - BigInt::one();
                if qmax < BigInt::one() {
                    continue;
                }
                let margin = convergent_margin(&x, &qmax).unwrap();
                let c = if margin < ratio(1, 2) { &margin * ratio(1, 2) } else { ratio(1, 4) };
                let v = verify_ba(&ba_cert(RatInterval::point(x.clone()), c.clone(), i64::try_from(&qmax).unwrap()), None).unwrap();
                assert_eq!(v.passed(), c < margin.clone().min(ratio(1, 2)) || margin >= ratio(1, 2) && v.passed());
                let tight = verify_ba(&ba_cert(RatInterval::point(x.clone()), margin.clone(), i64::try_from(&qmax).unwrap()), None).unwrap();
                if margin < ratio(1, 2) {
                    assert!(!tight.passed());
                }
                checked += 1;
            }
        }
        assert!(checked >= 20);
    }

    fn exact_scan(pre: &RatInterval, c: &Rational, q_max: u64) -> Option<(BigInt, BigInt)> {
        (1..=q_max).find_map(|q| {
            let q = BigInt::from(q);
            ba_violation(pre, c, &q).map(|p| (q, p))
        })
    }

    proptest::proptest! {
        #[test]
        fn prefilter_never_hides_a_violation(
            num in 1i64..1_000_000, width in 0i64..50, cn in 1i64..400, q_max in 1u64..300,
        ) {
            let lo = ratio(num, 1_000_003);
            let pre = RatInterval::new(lo.clone(), lo + ratio(width, 1_000_000_007));
            let c = ratio(cn, 1000);
            let got = verify_ba(&ba_cert(pre.clone(), c.clone(), q_max as i64), None).unwrap();
            let want = match exact_scan(&pre, &c, q_max) {
                None => Verdict::Pass,
                Some((q, p)) => Verdict::Fail { witness: Witness::Rational { p, q } },
            };
            proptest::prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = orbit_cert(ratio(1, 3), ratio(1, 3), 5);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        let b = ba_cert(RatInterval::new(ratio(1, 3), ratio(1, 2)), ratio(1, 9), 7);
        assert_eq!(Certificate::from_json(&b.to_json()).unwrap(), b);
    }
}
