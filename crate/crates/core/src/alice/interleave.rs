use super::{AliceError, CertifyingAlice, StrategySummary};
use crate::certify::Certificate;
use crate::game::{AliceStrategy, Ball, GameParams, Position};
use crate::numerics::{self, RatInterval, Rational};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Alice turns `t ≡ residue (mod modulus)`, `1 ≤ residue ≤ modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub modulus: usize,
    pub residue: usize,
}

impl Progression {
    pub fn owns(&self, t: usize) -> bool {
        t % self.modulus == self.residue % self.modulus
    }

    pub fn intersects(&self, other: &Progression) -> bool {
        let g = self.modulus.gcd(&other.modulus);
        self.residue % g == other.residue % g
    }

    /// What a strategy playing only these turns sees: Alice still shrinks
    /// by `α`, the rest of the round by `β(αβ)^{d−1}`.
    pub fn effective_params(&self, params: &GameParams) -> GameParams {
        let beta = &params.beta * numerics::pow(&params.round_ratio(), self.modulus as i64 - 1);
        GameParams::new(params.alpha.clone(), beta, params.variant).expect("effective beta lies in (0, 1)")
    }
}

/// Runs several strategies on disjoint progressions of Alice's turns.
/// Turns owned by no progression are played canonically.
pub struct Interleave {
    parts: Vec<(Progression, Box<dyn CertifyingAlice>)>,
    alpha: Rational,
    turns: usize,
}

impl Interleave {
    pub fn new(parts: Vec<(Progression, Box<dyn CertifyingAlice>)>, alpha: Rational) -> Result<Self, AliceError> {
        for (i, (p, _)) in parts.iter().enumerate() {
            if p.modulus == 0 || p.residue == 0 || p.residue > p.modulus {
                return Err(AliceError::InvalidSpec(format!(
                    "progression {}·j + {} is malformed",
                    p.modulus, p.residue
                )));
            }
            for (q, _) in &parts[..i] {
                if p.intersects(q) {
                    return Err(AliceError::ScheduleOverlap(format!(
                        "turns {} mod {} and {} mod {} overlap",
                        p.residue, p.modulus, q.residue, q.modulus
                    )));
                }
            }
        }
        Ok(Interleave { parts, alpha, turns: 0 })
    }

    fn owner(&self, t: usize) -> Option<usize> {
        self.parts.iter().position(|(p, _)| p.owns(t))
    }

    pub fn parts(&self) -> impl Iterator<Item = &dyn CertifyingAlice> {
        self.parts.iter().map(|(_, s)| s.as_ref())
    }
}

impl AliceStrategy for Interleave {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        self.turns += 1;
        match self.owner(self.turns) {
            Some(i) => self.parts[i].1.respond(pos),
            None => Ok(Ball::new(pos.ball.center.clone(), &pos.ball.radius * &self.alpha)),
        }
    }

    fn targets(&self, pos: &Position<'_>) -> Vec<Rational> {
        match self.owner(self.turns + 1) {
            Some(i) => self.parts[i].1.targets(pos),
            None => Vec::new(),
        }
    }
}

impl CertifyingAlice for Interleave {
    fn certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        self.parts
            .iter()
            .flat_map(|(_, s)| s.certificates(outcome, rounds))
            .collect()
    }

    fn summary(&self) -> StrategySummary {
        let mut s = StrategySummary::new("interleave");
        for (p, part) in &self.parts {
            let mut sub = part.summary();
            sub.constant("schedule", format!("{} mod {}", p.residue, p.modulus));
            s.boundary_hits += sub.boundary_hits;
            s.parts.push(sub);
        }
        s
    }

    fn sound_certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        self.parts
            .iter()
            .flat_map(|(_, s)| s.sound_certificates(outcome, rounds))
            .collect()
    }

    fn corrupt_constant(&mut self, factor: &Rational) {
        for (_, s) in &mut self.parts {
            s.corrupt_constant(factor);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alice::ExcludeStrategy;
    use crate::fractal::FractalSupport;
    use crate::numerics::{int, ratio};

    fn dummy() -> Box<dyn CertifyingAlice> {
        Box::new(ExcludeStrategy::new(FractalSupport::cantor(), ratio(1, 8), int(1), vec![]))
    }

    #[test]
    fn overlap_detected() {
        let a = Progression { modulus: 2, residue: 1 };
        let b = Progression { modulus: 4, residue: 3 };
        let c = Progression { modulus: 4, residue: 2 };
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        assert!(matches!(
            Interleave::new(vec![(a, dummy()), (b, dummy())], ratio(1, 8)),
            Err(AliceError::ScheduleOverlap(_))
        ));
        assert!(Interleave::new(vec![(a, dummy()), (c, dummy())], ratio(1, 8)).is_ok());
    }

    #[test]
    fn effective_beta() {
        let p = GameParams::classical(ratio(1, 4), ratio(1, 2)).unwrap();
        let e = Progression { modulus: 3, residue: 1 }.effective_params(&p);
        assert_eq!(e.beta, ratio(1, 2) * ratio(1, 64));
        assert!(Progression { modulus: 3, residue: 3 }.owns(6));
    }
}
