use super::lacunary::{check_params, first_small_turn};
use super::lemma::avoidance_step;
use super::{AliceError, BiLipschitzMap, CertifyingAlice, StrategySummary};
use crate::certify::{Certificate, Claim, DEFAULT_Q_CAP};
use crate::fractal::{DecayParams, FractalSupport};
use crate::game::{AliceStrategy, Ball, GameParams, Position};
use crate::numerics::{self, fractions_in, RatInterval, Rational, RealScalar};
use num_bigint::BigInt;
use serde::Serialize;

/// Constants of the badly-approximable strategy. `R = (αβ)^{-1/2}` enters
/// only through `R² = 1/(αβ)`, so no surd arithmetic is needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaPlan {
    pub k0: usize,
    #[serde(with = "numerics::serde_rational")]
    pub rho: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub r_squared: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub lipschitz: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub round_ratio: Rational,
    /// `c = R²αρ/L`, the constant claimed for the strategy.
    #[serde(with = "numerics::serde_rational")]
    pub c: Rational,
    /// `αρ/L`, the constant the avoidance distances actually support.
    #[serde(with = "numerics::serde_rational")]
    pub c_sound: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub opening_radius: Rational,
}

impl BaPlan {
    /// `R`, exact when `1/(αβ)` is a rational square.
    pub fn r(&self, bits: u32) -> RealScalar {
        RealScalar::sqrt(&self.r_squared, bits)
    }

    /// Largest `q` with `q < R^k`, i.e. `q² < (αβ)^{-k}`.
    pub fn q_below(&self, k: usize) -> BigInt {
        numerics::floor_sqrt_strict(&numerics::pow(&self.r_squared, k as i64)).expect("R > 1")
    }
}

pub fn plan_ba(phi: &BiLipschitzMap, params: &GameParams, decay: &DecayParams, opening: &Ball) -> Result<BaPlan, AliceError> {
    check_params(params, decay)?;
    let ab = params.round_ratio();
    let lip = phi.lipschitz();
    let bound = (&ab / (numerics::int(2) * &lip)).min(decay.rho0.clone());
    let (k0, rho) = first_small_turn(&ab, &opening.radius, &bound);
    let r_squared = ab.recip();
    let c_sound = &params.alpha * &rho / &lip;
    Ok(BaPlan {
        k0,
        c: &r_squared * &c_sound,
        c_sound,
        rho,
        r_squared,
        lipschitz: lip,
        alpha: params.alpha.clone(),
        round_ratio: ab,
        opening_radius: opening.radius.clone(),
    })
}

/// The rational `p/q` with `R^{k−1} ≤ q < R^k` whose image lies in `ball`,
/// if any. Every fraction with `q < R^k` in `φ^{-1}(ball)` is enumerated
/// and at most one may exist.
pub fn ba_candidate(plan: &BaPlan, phi: &BiLipschitzMap, k: usize, ball: &Ball) -> Result<Option<Rational>, AliceError> {
    let pre = phi.preimage(&ball.interval());
    let qmax = plan.q_below(k);
    let found = fractions_in(&pre.lo, &pre.hi, &qmax);
    if found.len() > 1 {
        return Err(AliceError::Invariant(format!(
            "turn {k}: {} rationals with q < R^{k} in {ball}",
            found.len()
        )));
    }
    let lower = numerics::pow(&plan.r_squared, k as i64 - 1);
    Ok(found
        .into_iter()
        .next()
        .filter(|f| Rational::from_integer(f.denom() * f.denom()) >= lower))
}

pub struct BaStrategy {
    support: FractalSupport,
    phi: BiLipschitzMap,
    params: GameParams,
    decay: DecayParams,
    plan: Option<BaPlan>,
    turns: usize,
    /// Strategy turns after the warm-up that were played.
    processed: usize,
    avoided: usize,
    boundary_hits: usize,
    q_cap: BigInt,
    label: String,
}

impl BaStrategy {
    pub fn new(support: FractalSupport, phi: BiLipschitzMap, params: GameParams, decay: DecayParams) -> Result<Self, AliceError> {
        check_params(&params, &decay)?;
        Ok(BaStrategy {
            support,
            phi,
            params,
            decay,
            plan: None,
            turns: 0,
            processed: 0,
            avoided: 0,
            boundary_hits: 0,
            q_cap: BigInt::from(DEFAULT_Q_CAP),
            label: "ba".into(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_q_cap(mut self, cap: BigInt) -> Self {
        self.q_cap = cap;
        self
    }

    pub fn plan(&self) -> Option<&BaPlan> {
        self.plan.as_ref()
    }

    /// Denominator horizon `min(⌊R^k⌋, cap)` over the processed turns,
    /// restricted to `q < R^k`.
    pub fn q_horizon(&self) -> Option<BigInt> {
        let plan = self.plan.as_ref()?;
        (self.processed > 0).then(|| plan.q_below(self.processed).min(self.q_cap.clone()))
    }

    fn respond_inner(&mut self, pos: &Position<'_>) -> Result<Ball, AliceError> {
        if self.plan.is_none() {
            self.plan = Some(plan_ba(&self.phi, &self.params, &self.decay, pos.ball)?);
        }
        let plan = self.plan.clone().expect("planned");
        self.turns += 1;
        let expected = &plan.opening_radius * numerics::pow(&plan.round_ratio, self.turns as i64 - 1);
        if pos.ball.radius != expected {
            return Err(AliceError::Precondition(format!(
                "turn {}: radius {} differs from the scheduled {}",
                self.turns, pos.ball.radius, expected
            )));
        }
        if self.turns < plan.k0 {
            return Ok(Ball::new(pos.ball.center.clone(), &pos.ball.radius * &plan.alpha));
        }
        let k = self.turns + 1 - plan.k0;
        let candidate = ba_candidate(&plan, &self.phi, k, pos.ball)?;
        let points: Vec<Rational> = candidate.iter().map(|f| self.phi.apply(f)).collect();
        let step = avoidance_step(&self.support, pos.ball, &plan.alpha, &points)?;
        if step.cleared < points.len() {
            return Err(AliceError::Invariant(format!("turn {k}: rational {} not avoided", points[0])));
        }
        self.avoided += points.len();
        self.boundary_hits += step.boundary_hits;
        self.processed = k;
        Ok(step.ball)
    }
}

impl AliceStrategy for BaStrategy {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        self.respond_inner(pos).map_err(|e| e.to_string())
    }

    fn targets(&self, pos: &Position<'_>) -> Vec<Rational> {
        let Some(plan) = &self.plan else {
            return Vec::new();
        };
        let next = self.turns + 1;
        if next < plan.k0 {
            return Vec::new();
        }
        // Alice's ball is wider than the next Bob ball, so it may hold more
        // than one candidate
        let k = next + 1 - plan.k0;
        let pre = self.phi.preimage(&pos.ball.interval());
        let lower = numerics::pow(&plan.r_squared, k as i64 - 1);
        fractions_in(&pre.lo, &pre.hi, &plan.q_below(k))
            .into_iter()
            .filter(|f| Rational::from_integer(f.denom() * f.denom()) >= lower)
            .map(|f| self.phi.apply(&f))
            .collect()
    }
}

impl CertifyingAlice for BaStrategy {
    fn certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        let (Some(plan), Some(q)) = (&self.plan, self.q_horizon()) else {
            return Vec::new();
        };
        vec![Certificate {
            label: self.label.clone(),
            interval: outcome.clone(),
            c: plan.c.clone(),
            phi: self.phi.clone(),
            rounds,
            claim: Claim::BadApprox { q_max: q },
        }]
    }

    fn summary(&self) -> StrategySummary {
        let mut s = StrategySummary::new(&self.label);
        if let Some(p) = &self.plan {
            s.constant("k0", p.k0.to_string());
            s.constant("rho", numerics::format_rational(&p.rho));
            s.constant("R^2", numerics::format_rational(&p.r_squared));
            s.constant("c", numerics::format_rational(&p.c));
            s.constant("c_sound", numerics::format_rational(&p.c_sound));
        }
        s.completed = self.processed;
        s.boundary_hits = self.boundary_hits;
        s
    }

    /// The constant `αρ/L` replaces `R²αρ/L`.
    fn sound_certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        let mut certs = self.certificates(outcome, rounds);
        if let Some(p) = &self.plan {
            for c in &mut certs {
                c.c = p.c_sound.clone();
                c.label = format!("{}-sound", self.label);
            }
        }
        certs
    }

    fn corrupt_constant(&mut self, factor: &Rational) {
        if let Some(p) = &mut self.plan {
            p.c *= factor;
            p.c_sound *= factor;
        }
    }
}
