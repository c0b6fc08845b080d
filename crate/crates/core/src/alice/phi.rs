use crate::numerics::{self, RatInterval, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A strictly monotone piecewise-linear homeomorphism of ℝ with rational
/// data: linear interpolation between the knots `(x_i, φ(x_i))` and affine
/// extension with the given slopes outside them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiLipschitzMap {
    knots: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
}

impl Default for BiLipschitzMap {
    fn default() -> Self {
        BiLipschitzMap::identity()
    }
}

impl BiLipschitzMap {
    pub fn identity() -> Self {
        BiLipschitzMap {
            knots: vec![(Rational::zero(), Rational::zero())],
            left_slope: Rational::one(),
            right_slope: Rational::one(),
        }
    }

    /// Fails unless the knots are strictly increasing in `x` and every
    /// piece has a nonzero slope of one common sign.
    pub fn new(
        knots: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<Self, String> {
        if knots.is_empty() {
            return Err("a piecewise-linear map needs at least one knot".into());
        }
        let map = BiLipschitzMap {
            knots,
            left_slope,
            right_slope,
        };
        if map.knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("knot abscissae must be strictly increasing".into());
        }
        let slopes = map.slopes();
        let positive = slopes[0].is_positive();
        if slopes.iter().any(|s| s.is_zero() || s.is_positive() != positive) {
            return Err("slopes must be nonzero and of one sign".into());
        }
        Ok(map)
    }

    pub fn is_identity(&self) -> bool {
        self.slopes().iter().all(|s| s.is_one()) && self.knots[0].0 == self.knots[0].1
    }

    /// Slopes of all pieces, left extension first.
    pub fn slopes(&self) -> Vec<Rational> {
        let mut out = vec![self.left_slope.clone()];
        for w in self.knots.windows(2) {
            out.push((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0));
        }
        out.push(self.right_slope.clone());
        out
    }

    /// The certified constant `L = max(|s|, 1/|s|)` over all pieces.
    pub fn lipschitz(&self) -> Rational {
        self.slopes()
            .iter()
            .map(|s| {
                let a = s.abs();
                let inv = a.recip();
                if a > inv {
                    a
                } else {
                    inv
                }
            })
            .max()
            .expect("at least one piece")
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        let first = &self.knots[0];
        if *x <= first.0 {
            return &first.1 + &self.left_slope * (x - &first.0);
        }
        for w in self.knots.windows(2) {
            if *x <= w[1].0 {
                let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                return &w[0].1 + s * (x - &w[0].0);
            }
        }
        let last = self.knots.last().expect("non-empty");
        &last.1 + &self.right_slope * (x - &last.0)
    }

    fn increasing(&self) -> bool {
        self.left_slope.is_positive()
    }

    pub fn inverse(&self, v: &Rational) -> Rational {
        let inc = self.increasing();
        // position of v relative to a knot value along the direction of φ
        let before = |kv: &Rational| if inc { v <= kv } else { v >= kv };
        let first = &self.knots[0];
        if before(&first.1) {
            return &first.0 + (v - &first.1) / &self.left_slope;
        }
        for w in self.knots.windows(2) {
            if before(&w[1].1) {
                let s = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                return &w[0].0 + (v - &w[0].1) / s;
            }
        }
        let last = self.knots.last().expect("non-empty");
        &last.0 + (v - &last.1) / &self.right_slope
    }

    /// Exact image of an interval (monotonicity makes the endpoints extremal).
    pub fn image(&self, i: &RatInterval) -> RatInterval {
        RatInterval::spanning(self.apply(&i.lo), self.apply(&i.hi))
    }

    pub fn preimage(&self, i: &RatInterval) -> RatInterval {
        RatInterval::spanning(self.inverse(&i.lo), self.inverse(&i.hi))
    }
}

#[derive(Serialize, Deserialize)]
struct PiecewiseDoc {
    knots: Vec<(String, String)>,
    left_slope: String,
    right_slope: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PhiDoc {
    Named(String),
    Piecewise(PiecewiseDoc),
}

impl Serialize for BiLipschitzMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_identity() && self.knots.len() == 1 {
            return PhiDoc::Named("identity".into()).serialize(s);
        }
        let f = numerics::format_rational;
        PhiDoc::Piecewise(PiecewiseDoc {
            knots: self.knots.iter().map(|(x, v)| (f(x), f(v))).collect(),
            left_slope: f(&self.left_slope),
            right_slope: f(&self.right_slope),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiLipschitzMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match PhiDoc::deserialize(d)? {
            PhiDoc::Named(n) if n == "identity" => Ok(BiLipschitzMap::identity()),
            PhiDoc::Named(n) => Err(D::Error::custom(format!("unknown map {n:?}"))),
            PhiDoc::Piecewise(p) => {
                let parse = |s: &str| numerics::parse_rational(s).map_err(D::Error::custom);
                let knots = p
                    .knots
                    .iter()
                    .map(|(x, v)| Ok((parse(x)?, parse(v)?)))
                    .collect::<Result<Vec<_>, D::Error>>()?;
                BiLipschitzMap::new(knots, parse(&p.left_slope)?, parse(&p.right_slope)?)
                    .map_err(D::Error::custom)
            }
        }
    }
}
