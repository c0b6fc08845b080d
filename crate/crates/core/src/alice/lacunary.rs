use super::lemma::avoidance_step;
use super::{AliceError, BiLipschitzMap, CertifyingAlice, LacunarySpec, StrategySummary};
use crate::certify::{Certificate, Claim};
use crate::fractal::{DecayParams, FractalSupport};
use crate::game::{AliceStrategy, Ball, GameParams, Position};
use crate::numerics::{self, RatInterval, Rational, RealScalar};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use std::cmp::Ordering;

/// Constants of the lacunary avoidance strategy, all exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LacunaryPlan {
    /// Largest number of terms in one index block.
    #[serde(rename = "N")]
    pub n: usize,
    /// Clearing turns per block, `⌊log₂ N⌋ + 1`.
    pub r: u32,
    /// Turn from which the strategy counts its own rounds.
    pub k0: usize,
    #[serde(with = "numerics::serde_rational")]
    pub rho: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub c: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub lipschitz: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub alpha: Rational,
    /// `αβ`.
    #[serde(with = "numerics::serde_rational")]
    pub round_ratio: Rational,
    /// Block ratio `(αβ)^{-r}`.
    #[serde(with = "numerics::serde_rational")]
    pub theta: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub opening_radius: Rational,
}

fn bit_length(n: usize) -> u32 {
    usize::BITS - n.leading_zeros()
}

/// Smallest `N` with `(αβ)^{-r} ≤ M^N` for `r = ⌊log₂ N⌋ + 1`.
pub fn minimal_block_size(round_ratio: &Rational, m: &Rational) -> Result<(usize, u32), AliceError> {
    let inv = round_ratio.recip();
    let mut m_pow = m.clone();
    for n in 1..=1_000_000usize {
        let r = bit_length(n);
        if numerics::pow(&inv, r as i64) <= m_pow {
            return Ok((n, r));
        }
        m_pow *= m;
    }
    Err(AliceError::InvalidSpec("no block size up to 10^6 satisfies the lacunarity bound".into()))
}

/// Smallest `k₀ ≥ 1` with `(αβ)^{k₀−1} ρ' < bound`, and that radius.
pub(crate) fn first_small_turn(round_ratio: &Rational, opening: &Rational, bound: &Rational) -> (usize, Rational) {
    let mut k0 = 1;
    let mut rho = opening.clone();
    while rho >= *bound {
        rho *= round_ratio;
        k0 += 1;
    }
    (k0, rho)
}

pub(crate) fn check_params(params: &GameParams, decay: &DecayParams) -> Result<(), AliceError> {
    if !params.variant.eq(&crate::game::Variant::Classical) {
        return Err(AliceError::Unsupported(
            "the constructive strategies are implemented for the classical game only".into(),
        ));
    }
    if !decay.admits_alpha(&params.alpha) {
        return Err(AliceError::InvalidAlpha(format!(
            "alpha = {} exceeds 1/4(1/(3C))^{{1/γ}} for C = {}, γ = {}",
            params.alpha, decay.c, decay.gamma
        )));
    }
    Ok(())
}

pub fn plan_lacunary(
    spec: &LacunarySpec,
    phi: &BiLipschitzMap,
    params: &GameParams,
    decay: &DecayParams,
    opening: &Ball,
) -> Result<LacunaryPlan, AliceError> {
    check_params(params, decay)?;
    let ab = params.round_ratio();
    let (n, r) = minimal_block_size(&ab, spec.lacunarity())?;
    let lip = phi.lipschitz();
    let diam_bound = numerics::pow(&ab, 1 - r as i64) / (numerics::int(2) * &lip);
    let bound = diam_bound.min(decay.rho0.clone());
    let (k0, rho) = first_small_turn(&ab, &opening.radius, &bound);
    let c = &rho / &lip * numerics::pow(&ab, 3 * r as i64);
    Ok(LacunaryPlan {
        n,
        r,
        k0,
        rho,
        c,
        lipschitz: lip,
        alpha: params.alpha.clone(),
        theta: numerics::pow(&ab, -(r as i64)),
        round_ratio: ab,
        opening_radius: opening.radius.clone(),
    })
}

/// First index `n ≥ spec.first_index()` with `t_n ≥ bound`, or one past the
/// last index when the sequence ends first. Terms increase, so exponential
/// then binary search applies.
fn first_at_least(spec: &LacunarySpec, bound: &Rational) -> usize {
    let start = spec.first_index();
    let reached = |n: usize| !spec.exists(n) || spec.cmp_term(n, bound) != Ordering::Less;
    if reached(start) {
        return start;
    }
    let mut lo = start;
    let mut step = 1;
    let mut hi = start + 1;
    while !reached(hi) {
        lo = hi;
        step *= 2;
        hi = lo + step;
    }
    // reached(hi), !reached(lo)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reached(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    match spec.last_index() {
        Some(l) if hi > l => l + 1,
        _ => hi,
    }
}

/// `I_k = {n : θ^{k−1} ≤ t_n < θ^k}`, `θ = (αβ)^{-r}`.
pub fn index_block(plan: &LacunaryPlan, spec: &LacunarySpec, k: usize) -> Vec<usize> {
    assert!(k >= 1, "blocks are numbered from 1");
    let lo = first_at_least(spec, &numerics::pow(&plan.theta, k as i64 - 1));
    let hi = first_at_least(spec, &numerics::pow(&plan.theta, k as i64));
    (lo..hi).collect()
}

/// Last index covered by blocks `1..=k` (zero when none).
pub fn horizon_of_blocks(plan: &LacunaryPlan, spec: &LacunarySpec, k: usize) -> usize {
    first_at_least(spec, &numerics::pow(&plan.theta, k as i64)) - 1
}

/// A translate `z = φ((y_n + m)/t_n)`. For surd terms `z` is the midpoint of
/// an enclosure of half-width `halfwidth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DangerPoint {
    pub n: usize,
    pub m: BigInt,
    pub z: Rational,
    pub halfwidth: Rational,
}

fn translates(
    spec: &LacunarySpec,
    phi: &BiLipschitzMap,
    n: usize,
    ball: &RatInterval,
    pre: &RatInterval,
    tol: &Rational,
) -> Vec<DangerPoint> {
    let y = spec.target(n).value().clone();
    let mut bits = 64u32;
    loop {
        let t = spec.term(n, bits);
        let range = spec.scaled_range(n, pre, bits);
        let m_lo = numerics::ceil_int(&(&range.lo - &y));
        let m_hi = numerics::floor_int(&(&range.hi - &y));
        let mut out = Vec::new();
        let mut m = m_lo;
        let mut refine = false;
        while m <= m_hi {
            let num = &y + Rational::from_integer(m.clone());
            let point = match &t {
                RealScalar::Exact(t) => {
                    let z = phi.apply(&(&num / t));
                    ball.contains(&z).then(|| (z, Rational::from_integer(0.into())))
                }
                RealScalar::Approx { lo, hi, .. } => {
                    let u = RatInterval::spanning(&num / lo, &num / hi);
                    let img = phi.image(&u);
                    if img.width() > *tol {
                        refine = true;
                        break;
                    }
                    let mid = img.midpoint();
                    ball.contains(&mid).then(|| (mid, img.width() / numerics::int(2)))
                }
            };
            if let Some((z, halfwidth)) = point {
                out.push(DangerPoint {
                    n,
                    m: m.clone(),
                    z,
                    halfwidth,
                });
            }
            m += 1;
        }
        if !refine {
            return out;
        }
        bits *= 2;
    }
}

/// Translates of block `k` inside `ball`, the Bob ball opening that block's
/// clearing. At most one translate per index and at most `N` in total.
pub fn danger_set(
    plan: &LacunaryPlan,
    spec: &LacunarySpec,
    phi: &BiLipschitzMap,
    k: usize,
    ball: &Ball,
) -> Result<Vec<DangerPoint>, AliceError> {
    let iv = ball.interval();
    let pre = phi.preimage(&iv);
    let r = plan.r as i64;
    let tol = numerics::pow(&plan.round_ratio, r * (k as i64 + 2)) * &plan.rho;
    let mut out = Vec::new();
    for n in index_block(plan, spec, k) {
        let z = translates(spec, phi, n, &iv, &pre, &tol);
        if z.len() > 1 {
            return Err(AliceError::Invariant(format!(
                "{} translates of index {n} in {ball}",
                z.len()
            )));
        }
        out.extend(z);
    }
    if out.len() > plan.n {
        return Err(AliceError::Invariant(format!(
            "{} danger points exceed N = {}",
            out.len(),
            plan.n
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRecord {
    pub k: usize,
    pub danger: usize,
    /// Danger sizes after each clearing step.
    pub trace: Vec<usize>,
}

/// Alice's lacunary orbit-avoidance strategy. Its constants are fixed at
/// the first ball it answers, which is taken as the opening.
pub struct LacunaryStrategy {
    support: FractalSupport,
    spec: LacunarySpec,
    phi: BiLipschitzMap,
    params: GameParams,
    decay: DecayParams,
    plan: Option<LacunaryPlan>,
    turns: usize,
    danger: Vec<DangerPoint>,
    remaining: Vec<usize>,
    trace: Vec<usize>,
    completed: Vec<BlockRecord>,
    boundary_hits: usize,
    label: String,
}

impl LacunaryStrategy {
    pub fn new(
        support: FractalSupport,
        spec: LacunarySpec,
        phi: BiLipschitzMap,
        params: GameParams,
        decay: DecayParams,
    ) -> Result<Self, AliceError> {
        check_params(&params, &decay)?;
        Ok(LacunaryStrategy {
            support,
            spec,
            phi,
            params,
            decay,
            plan: None,
            turns: 0,
            danger: Vec::new(),
            remaining: Vec::new(),
            trace: Vec::new(),
            completed: Vec::new(),
            boundary_hits: 0,
            label: "lacunary".into(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn plan(&self) -> Option<&LacunaryPlan> {
        self.plan.as_ref()
    }

    pub fn completed(&self) -> &[BlockRecord] {
        &self.completed
    }

    /// Block and step of strategy turn `t`, if the turn is a clearing turn.
    fn schedule(&self, plan: &LacunaryPlan, t: usize) -> Option<(usize, usize)> {
        let j = (t + 1).checked_sub(plan.k0)?;
        let r = plan.r as usize;
        if j < 2 * r {
            return None;
        }
        let k = j / r - 1;
        Some((k, j - r * (k + 1)))
    }

    fn clear(&mut self, pos: &Position<'_>, k: usize, s: usize) -> Result<Ball, AliceError> {
        let plan = self.plan.clone().expect("planned");
        let r = plan.r as usize;
        if s == 0 {
            let premise = numerics::pow(&plan.round_ratio, (r * k) as i64) / &plan.lipschitz;
            let diam = &pos.ball.radius * numerics::int(2);
            if diam >= premise {
                return Err(AliceError::Invariant(format!(
                    "block {k}: ball diameter {diam} is not below (αβ)^(rk)/L"
                )));
            }
            self.danger = danger_set(&plan, &self.spec, &self.phi, k, pos.ball)?;
            self.remaining = (0..self.danger.len()).collect();
            self.trace = vec![self.danger.len()];
        }
        let points: Vec<Rational> = self.remaining.iter().map(|&i| self.danger[i].z.clone()).collect();
        let step = avoidance_step(&self.support, pos.ball, &plan.alpha, &points)?;
        self.boundary_hits += step.boundary_hits;
        let reach = &step.ball.radius * numerics::int(2);
        let before = self.remaining.len();
        let center = step.ball.center.clone();
        self.remaining
            .retain(|&i| (&self.danger[i].z - &center).abs() <= reach);
        if 2 * self.remaining.len() > before {
            return Err(AliceError::Invariant(format!(
                "block {k} step {s}: {} of {before} points remain",
                self.remaining.len()
            )));
        }
        self.trace.push(self.remaining.len());
        if s + 1 == r {
            if !self.remaining.is_empty() {
                return Err(AliceError::Invariant(format!(
                    "block {k}: {} danger points survive clearing",
                    self.remaining.len()
                )));
            }
            let target = numerics::pow(&plan.round_ratio, (r * (k + 2)) as i64) * &plan.rho;
            for d in &self.danger {
                let dist = step.ball.dist_to(&d.z);
                if dist < &target + &d.halfwidth {
                    return Err(AliceError::Invariant(format!(
                        "block {k}: translate {} of index {} only {} away",
                        d.z, d.n, dist
                    )));
                }
            }
            self.completed.push(BlockRecord {
                k,
                danger: self.danger.len(),
                trace: std::mem::take(&mut self.trace),
            });
            self.danger.clear();
        }
        Ok(step.ball)
    }

    fn respond_inner(&mut self, pos: &Position<'_>) -> Result<Ball, AliceError> {
        if self.plan.is_none() {
            self.plan = Some(plan_lacunary(&self.spec, &self.phi, &self.params, &self.decay, pos.ball)?);
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
        match self.schedule(&plan, self.turns) {
            None => Ok(Ball::new(pos.ball.center.clone(), &pos.ball.radius * &plan.alpha)),
            Some((k, s)) => self.clear(pos, k, s),
        }
    }
}

impl AliceStrategy for LacunaryStrategy {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        self.respond_inner(pos).map_err(|e| e.to_string())
    }

    /// The points the next clearing turn works on: the next block's
    /// translates when a block starts, otherwise the uncleared ones.
    fn targets(&self, pos: &Position<'_>) -> Vec<Rational> {
        let Some(plan) = &self.plan else {
            return Vec::new();
        };
        match self.schedule(plan, self.turns + 1) {
            Some((k, 0)) => danger_set(plan, &self.spec, &self.phi, k, pos.ball)
                .map(|d| d.into_iter().map(|p| p.z).collect())
                .unwrap_or_default(),
            Some(_) if !self.remaining.is_empty() => {
                self.remaining.iter().map(|&i| self.danger[i].z.clone()).collect()
            }
            Some(_) => self.danger.iter().map(|d| d.z.clone()).collect(),
            None => Vec::new(),
        }
    }
}

impl CertifyingAlice for LacunaryStrategy {
    fn certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        let (Some(plan), Some(last)) = (&self.plan, self.completed.last()) else {
            return Vec::new();
        };
        vec![Certificate {
            label: self.label.clone(),
            interval: outcome.clone(),
            c: plan.c.clone(),
            phi: self.phi.clone(),
            rounds,
            claim: Claim::OrbitSeparation {
                sequence: self.spec.clone(),
                n_min: self.spec.first_index(),
                n_max: horizon_of_blocks(plan, &self.spec, last.k),
            },
        }]
    }

    fn summary(&self) -> StrategySummary {
        let mut s = StrategySummary::new(&self.label);
        if let Some(p) = &self.plan {
            s.constant("N", p.n.to_string());
            s.constant("r", p.r.to_string());
            s.constant("k0", p.k0.to_string());
            s.constant("rho", numerics::format_rational(&p.rho));
            s.constant("c", numerics::format_rational(&p.c));
        }
        s.completed = self.completed.len();
        s.boundary_hits = self.boundary_hits;
        s
    }

    fn corrupt_constant(&mut self, factor: &Rational) {
        if let Some(p) = &mut self.plan {
            p.c *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alice::Targets;
    use crate::numerics::{int, ratio, CirclePoint};

    fn powers_of_two(y: Rational) -> LacunarySpec {
        LacunarySpec::geometric(int(2), Targets::Const(CirclePoint::new(y))).unwrap()
    }

    fn quarter_plan(spec: &LacunarySpec) -> LacunaryPlan {
        let params = GameParams::classical(ratio(1, 4), ratio(1, 4)).unwrap();
        let decay = DecayParams::lebesgue();
        let decay = DecayParams { c: ratio(1, 1000), ..decay };
        plan_lacunary(spec, &BiLipschitzMap::identity(), &params, &decay, &Ball::new(int(0), int(1))).unwrap()
    }

    #[test]
    fn block_size_examples() {
        assert_eq!(minimal_block_size(&ratio(1, 16), &int(2)).unwrap(), (20, 5));
        assert_eq!(minimal_block_size(&ratio(1, 16), &int(16)).unwrap(), (1, 1));
        // enumeration oracle
        for n in 1..20usize {
            let r = bit_length(n) as u32;
            assert!(num_traits::pow(num_bigint::BigInt::from(16), r as usize) > num_bigint::BigInt::from(2).pow(n as u32));
        }
    }

    #[test]
    fn k0_from_bound() {
        let spec = powers_of_two(int(0));
        let plan = quarter_plan(&spec);
        assert_eq!((plan.n, plan.r), (20, 5));
        // bound min(16⁴/2, 1/4) = 1/4: (1/16)^{k₀−1} < 1/4 first at k₀ = 2
        assert_eq!(plan.k0, 2);
        assert_eq!(plan.rho, ratio(1, 16));
        assert_eq!(plan.c, ratio(1, 16) * numerics::pow(&ratio(1, 16), 15));
    }

    #[test]
    fn index_blocks_of_powers_of_two() {
        let spec = powers_of_two(int(0));
        let plan = quarter_plan(&spec);
        assert_eq!(index_block(&plan, &spec, 1), (1..=19).collect::<Vec<_>>());
        assert_eq!(index_block(&plan, &spec, 2), (20..=39).collect::<Vec<_>>());
        assert_eq!(horizon_of_blocks(&plan, &spec, 2), 39);
        let sixteen = LacunarySpec::geometric(int(16), Targets::Const(CirclePoint::zero())).unwrap();
        let mut p1 = plan.clone();
        p1.r = 1;
        p1.theta = int(16);
        assert_eq!(index_block(&p1, &sixteen, 3), vec![2]);
    }

    #[test]
    fn danger_translates() {
        let spec = powers_of_two(int(0)).with_n_max(5);
        let mut plan = quarter_plan(&spec);
        plan.theta = int(64);
        let d = danger_set(&plan, &spec, &BiLipschitzMap::identity(), 1, &Ball::new(ratio(1, 3), ratio(1, 64))).unwrap();
        let fives: Vec<_> = d.iter().filter(|p| p.n == 5).map(|p| p.z.clone()).collect();
        assert_eq!(fives, vec![ratio(11, 32)]);
        // y = 1/2, t_5 = 32: translate (1/2 + m)/32 near 0 is ±1/64, both outside radius 1/100
        let half = powers_of_two(ratio(1, 2)).with_n_max(5);
        let d = danger_set(&plan, &half, &BiLipschitzMap::identity(), 1, &Ball::new(int(0), ratio(1, 100))).unwrap();
        assert!(d.iter().all(|p| p.n != 5));
        let n4: Vec<_> = d.iter().filter(|p| p.n == 4).collect();
        assert!(n4.is_empty());
    }
}
