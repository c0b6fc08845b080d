use super::AliceError;
use crate::numerics::{self, CirclePoint, RatInterval, Rational, RealScalar};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Ratio of a geometric sequence `t_n = bⁿ`: a rational `b` or `b = √a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LacunaryBase {
    Rational(Rational),
    Sqrt(Rational),
}

impl LacunaryBase {
    pub fn parse(s: &str) -> Result<Self, AliceError> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let a = numerics::parse_rational(inner)?;
            if !a.is_positive() {
                return Err(AliceError::InvalidSpec(format!("sqrt of non-positive {a}")));
            }
            return Ok(match RealScalar::sqrt(&a, 1) {
                RealScalar::Exact(b) => LacunaryBase::Rational(b),
                RealScalar::Approx { .. } => LacunaryBase::Sqrt(a),
            });
        }
        Ok(LacunaryBase::Rational(numerics::parse_rational(s)?))
    }

    /// `b²`, always rational.
    pub fn square(&self) -> Rational {
        match self {
            LacunaryBase::Rational(b) => b * b,
            LacunaryBase::Sqrt(a) => a.clone(),
        }
    }
}

impl std::fmt::Display for LacunaryBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LacunaryBase::Rational(b) => write!(f, "{}", numerics::format_rational(b)),
            LacunaryBase::Sqrt(a) => write!(f, "sqrt({})", numerics::format_rational(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terms {
    Geometric(LacunaryBase),
    /// `t_1, t_2, …` listed explicitly.
    Explicit(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Targets {
    Const(CirclePoint),
    /// `y_n = list[(n − 1) mod len]`.
    Periodic(Vec<CirclePoint>),
    /// `y_1, y_2, …`; the sequence ends with the list.
    Explicit(Vec<CirclePoint>),
}

/// Lacunary terms `t_n`, targets `y_n` and the certified constant `M` with
/// `t_{n+1}/t_n ≥ M > 1`. Indices start at 1. Terms `t_n ≤ 1` at the start
/// of the sequence are dropped from play (see [`LacunarySpec::first_index`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LacunaryDoc", into = "LacunaryDoc")]
pub struct LacunarySpec {
    terms: Terms,
    m: Rational,
    targets: Targets,
    n_max: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct LacunaryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<String>>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    m: Option<String>,
    targets: Targets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_max: Option<usize>,
}

impl TryFrom<LacunaryDoc> for LacunarySpec {
    type Error = AliceError;

    fn try_from(d: LacunaryDoc) -> Result<Self, AliceError> {
        let terms = match (d.base, d.terms) {
            (Some(b), None) => Terms::Geometric(LacunaryBase::parse(&b)?),
            (None, Some(list)) => Terms::Explicit(
                list.iter()
                    .map(|s| numerics::parse_rational(s))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(AliceError::InvalidSpec("give exactly one of base and terms".into())),
        };
        let m = d.m.map(|s| numerics::parse_rational(&s)).transpose()?;
        LacunarySpec::new(terms, m, d.targets, d.n_max)
    }
}

impl From<LacunarySpec> for LacunaryDoc {
    fn from(s: LacunarySpec) -> Self {
        let (base, terms) = match &s.terms {
            Terms::Geometric(b) => (Some(b.to_string()), None),
            Terms::Explicit(v) => (None, Some(v.iter().map(numerics::format_rational).collect())),
        };
        LacunaryDoc {
            base,
            terms,
            m: Some(numerics::format_rational(&s.m)),
            targets: s.targets,
            n_max: s.n_max,
        }
    }
}

impl LacunarySpec {
    /// Validates lacunarity with the given `M`, or with the largest `M` the
    /// terms admit when `m` is `None`.
    pub fn new(terms: Terms, m: Option<Rational>, targets: Targets, n_max: Option<usize>) -> Result<Self, AliceError> {
        let best = match &terms {
            Terms::Geometric(LacunaryBase::Rational(b)) => Some(b.clone()),
            Terms::Geometric(LacunaryBase::Sqrt(_)) => None,
            Terms::Explicit(v) => {
                if v.len() < 2 {
                    return Err(AliceError::InvalidSpec("need at least two explicit terms".into()));
                }
                if v.iter().any(|t| !t.is_positive()) {
                    return Err(AliceError::InvalidSpec("terms must be positive".into()));
                }
                v.windows(2).map(|w| &w[1] / &w[0]).min()
            }
        };
        let m = match (m, best) {
            (Some(m), _) => m,
            (None, Some(b)) => b,
            (None, None) => {
                return Err(AliceError::InvalidSpec("irrational base needs an explicit M".into()))
            }
        };
        if m <= Rational::one() {
            return Err(AliceError::InvalidSpec(format!("lacunarity constant M = {m} must exceed 1")));
        }
        let ok = match &terms {
            Terms::Geometric(b) => b.square() >= &m * &m,
            Terms::Explicit(v) => v.windows(2).all(|w| &w[1] / &w[0] >= m),
        };
        if !ok {
            return Err(AliceError::InvalidSpec(format!("terms are not lacunary with M = {m}")));
        }
        if let Targets::Periodic(v) | Targets::Explicit(v) = &targets {
            if v.is_empty() {
                return Err(AliceError::InvalidSpec("empty target list".into()));
            }
        }
        Ok(LacunarySpec { terms, m, targets, n_max })
    }

    pub fn geometric(base: Rational, targets: Targets) -> Result<Self, AliceError> {
        LacunarySpec::new(Terms::Geometric(LacunaryBase::Rational(base)), None, targets, None)
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn lacunarity(&self) -> &Rational {
        &self.m
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    /// Last index of the sequence, if it is finite.
    pub fn last_index(&self) -> Option<usize> {
        let mut last = self.n_max;
        let mut cap = |n: usize| last = Some(last.map_or(n, |l| l.min(n)));
        if let Terms::Explicit(v) = &self.terms {
            cap(v.len());
        }
        if let Targets::Explicit(v) = &self.targets {
            cap(v.len());
        }
        last
    }

    pub fn exists(&self, n: usize) -> bool {
        n >= 1 && self.last_index().is_none_or(|l| n <= l)
    }

    /// First index with `t_n > 1`; earlier terms are dropped from play.
    pub fn first_index(&self) -> usize {
        let mut n = 1;
        while self.exists(n) && self.cmp_term(n, &Rational::one()) != Ordering::Greater {
            n += 1;
        }
        n
    }

    /// `t_n`, exact when rational and otherwise enclosed on the mesh `2^-bits`.
    pub fn term(&self, n: usize, bits: u32) -> RealScalar {
        match &self.terms {
            Terms::Explicit(v) => RealScalar::Exact(v[n - 1].clone()),
            Terms::Geometric(LacunaryBase::Rational(b)) => RealScalar::Exact(numerics::pow(b, n as i64)),
            Terms::Geometric(LacunaryBase::Sqrt(a)) => {
                let even = numerics::pow(a, (n / 2) as i64);
                if n % 2 == 0 {
                    RealScalar::Exact(even)
                } else {
                    // keep the absolute error below 2^-bits
                    let extra = (numerics::ln(&even) / std::f64::consts::LN_2).max(0.0).ceil() as u32;
                    RealScalar::sqrt(a, bits + extra + 2).mul_rational(&even)
                }
            }
        }
    }

    /// Exact comparison of `t_n` with a positive rational, through squares
    /// when `t_n` is a surd.
    pub fn cmp_term(&self, n: usize, bound: &Rational) -> Ordering {
        match &self.terms {
            Terms::Geometric(LacunaryBase::Sqrt(a)) => numerics::pow(a, n as i64).cmp(&(bound * bound)),
            _ => self
                .term(n, 0)
                .exact()
                .expect("rational terms are exact")
                .cmp(bound),
        }
    }

    pub fn target(&self, n: usize) -> CirclePoint {
        match &self.targets {
            Targets::Const(y) => y.clone(),
            Targets::Periodic(v) => v[(n - 1) % v.len()].clone(),
            Targets::Explicit(v) => v[n - 1].clone(),
        }
    }

    /// Exact or enclosed range of `t_n · u` for `u ∈ i`.
    pub fn scaled_range(&self, n: usize, i: &RatInterval, bits: u32) -> RatInterval {
        &self.term(n, bits).enclosure() * i
    }
}
