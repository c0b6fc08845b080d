use super::lemma::avoidance_step;
use super::{AliceError, CertifyingAlice, StrategySummary};
use crate::certify::Certificate;
use crate::fractal::FractalSupport;
use crate::game::{AliceStrategy, Ball, Position};
use crate::numerics::{self, RatInterval, Rational};

/// Removes finitely many points from Alice's target: once the radius is at
/// most `ρ₀`, each turn runs the avoidance step on the next listed point
/// until the list is exhausted, then plays canonically.
pub struct ExcludeStrategy {
    support: FractalSupport,
    alpha: Rational,
    rho0: Rational,
    points: Vec<Rational>,
    next: usize,
    /// `(y, d(ω', y))` for each point handled so far.
    pub excluded: Vec<(Rational, Rational)>,
    label: String,
}

impl ExcludeStrategy {
    pub fn new(support: FractalSupport, alpha: Rational, rho0: Rational, points: Vec<Rational>) -> Self {
        ExcludeStrategy {
            support,
            alpha,
            rho0,
            points,
            next: 0,
            excluded: Vec::new(),
            label: "exclude".into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn done(&self) -> bool {
        self.next == self.points.len()
    }

    fn respond_inner(&mut self, pos: &Position<'_>) -> Result<Ball, AliceError> {
        let canonical = Ball::new(pos.ball.center.clone(), &pos.ball.radius * &self.alpha);
        if self.done() || pos.ball.radius > self.rho0 {
            return Ok(canonical);
        }
        let y = self.points[self.next].clone();
        let step = avoidance_step(&self.support, pos.ball, &self.alpha, std::slice::from_ref(&y))?;
        if step.cleared != 1 {
            return Err(AliceError::Invariant(format!("point {y} not excluded")));
        }
        self.excluded.push((y.clone(), step.ball.dist_to(&y)));
        self.next += 1;
        Ok(step.ball)
    }
}

impl AliceStrategy for ExcludeStrategy {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        self.respond_inner(pos).map_err(|e| e.to_string())
    }

    fn targets(&self, _: &Position<'_>) -> Vec<Rational> {
        self.points.get(self.next).cloned().into_iter().collect()
    }
}

impl CertifyingAlice for ExcludeStrategy {
    fn certificates(&self, _: &RatInterval, _: usize) -> Vec<Certificate> {
        Vec::new()
    }

    fn summary(&self) -> StrategySummary {
        let mut s = StrategySummary::new(&self.label);
        s.constant("points", self.points.len().to_string());
        if let Some(min) = self.excluded.iter().map(|(_, d)| d).min() {
            s.constant("min_distance", numerics::format_rational(min));
        }
        s.completed = self.next;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_game, GameParams, TrivialBob};
    use crate::numerics::{int, ratio};

    #[test]
    fn empty_list_is_canonical() {
        let k = FractalSupport::cantor();
        let p = GameParams::classical(ratio(1, 1024), ratio(1, 4)).unwrap();
        let mut alice = ExcludeStrategy::new(k.clone(), p.alpha.clone(), ratio(1, 3), vec![]);
        let mut bob = TrivialBob { opening: Ball::new(int(0), int(1)) };
        let t = run_game(&k, &p, &mut alice, &mut bob, 4).unwrap();
        assert!(t.moves.iter().all(|m| m.ball.center == int(0)));
    }

    #[test]
    fn excludes_current_center() {
        let k = FractalSupport::cantor();
        let p = GameParams::classical(ratio(1, 1024), ratio(1, 4)).unwrap();
        let mut alice = ExcludeStrategy::new(k.clone(), p.alpha.clone(), ratio(1, 3), vec![int(0), ratio(2, 3)]);
        let mut bob = TrivialBob { opening: Ball::new(int(0), int(1)) };
        let t = run_game(&k, &p, &mut alice, &mut bob, 6).unwrap();
        assert!(alice.done());
        let last = t.last_ball();
        for (y, d) in &alice.excluded {
            assert!(last.dist_to(y) >= *d);
        }
        // the first turn is played at radius 1 > ρ₀, the exclusion at ρ = αβ
        assert!(alice.excluded[0].1 > &p.alpha * p.round_ratio());
    }
}
