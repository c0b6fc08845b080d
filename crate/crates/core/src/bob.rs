//! Adversaries for Alice: an informed greedy Bob, a seeded random Bob and
//! replay.

use crate::fractal::{nearest_point, FractalSupport};
use crate::game::{Ball, BobStrategy, GameParams, Player, Position, Replay, Transcript, Variant};
use crate::numerics::{self, RatInterval, Rational};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AdversaryKind {
    Greedy,
    Random { seed: u64 },
    /// Moves are taken from a recorded transcript and re-refereed.
    Replay,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryConfig {
    #[serde(flatten)]
    pub kind: AdversaryKind,
    /// Additional points the greedy Bob aims at besides Alice's own targets.
    #[serde(default, with = "numerics::serde_rational_vec")]
    pub target_points: Vec<Rational>,
}

/// Radius of Bob's answer: classical `βρ'`, or under strong rules a value
/// in `[βρ', (1+β)ρ'/2]` picked by `u ∈ [0, 1]`.
fn bob_radius(pos: &Position<'_>, u: &Rational) -> Rational {
    let min = pos.classical_radius(Player::Bob);
    match pos.params.variant {
        Variant::Classical => min,
        Variant::Strong => {
            let slack = (&pos.ball.radius - &min) * numerics::ratio(1, 2);
            min + slack * u
        }
    }
}

/// Centers `x` with `B(x, radius) ≤_s pos.ball`.
fn legal_window(pos: &Position<'_>, radius: &Rational) -> RatInterval {
    RatInterval::ball(&pos.ball.center, &(&pos.ball.radius - radius))
}

/// Moves towards the target nearest to Alice's center as far as legality
/// and the support allow.
pub fn greedy_move(support: &FractalSupport, pos: &Position<'_>, targets: &[Rational]) -> Ball {
    let radius = bob_radius(pos, &Rational::from_integer(0.into()));
    let keep = Ball::new(pos.ball.center.clone(), radius.clone());
    let c = &pos.ball.center;
    let Some(z) = targets.iter().min_by(|a, b| (*a - c).abs().cmp(&(*b - c).abs())) else {
        return keep;
    };
    let window = legal_window(pos, &radius);
    let aim = if *z < window.lo {
        window.lo.clone()
    } else if *z > window.hi {
        window.hi.clone()
    } else {
        z.clone()
    };
    let tol = &radius * numerics::ratio(1, 64);
    match nearest_point(support, &aim, &window, &tol) {
        Some(x) if (&x - z).abs() < (c - z).abs() => Ball::new(x, radius),
        _ => keep,
    }
}

/// A cylinder point drawn by random descent through the cylinders meeting
/// the legal window, so heavier regions of `K` are likelier.
pub fn random_move(support: &FractalSupport, pos: &Position<'_>, rng: &mut ChaCha8Rng) -> Ball {
    let u = numerics::ratio(rng.gen_range(0..=4), 4);
    let radius = bob_radius(pos, &u);
    let window = legal_window(pos, &radius);
    let keep = Ball::new(pos.ball.center.clone(), radius.clone());
    let mut c = support.root();
    for _ in 0..256 {
        if window.contains_interval(&c.interval) {
            break;
        }
        let kids: Vec<_> = support
            .children(&c)
            .into_iter()
            .filter(|k| k.interval.intersects(&window))
            .collect();
        if kids.is_empty() {
            return keep;
        }
        c = kids[rng.gen_range(0..kids.len())].clone();
    }
    let x = support.cylinder_point(&c);
    if window.contains(&x) {
        Ball::new(x, radius)
    } else {
        keep
    }
}

pub struct GreedyBob {
    pub opening: Ball,
    pub extra_targets: Vec<Rational>,
}

impl BobStrategy for GreedyBob {
    fn open(&mut self, _: &FractalSupport, _: &GameParams) -> Result<Ball, String> {
        Ok(self.opening.clone())
    }

    fn respond(&mut self, pos: &Position<'_>, targets: &[Rational]) -> Result<Ball, String> {
        let mut all = targets.to_vec();
        all.extend(self.extra_targets.iter().cloned());
        Ok(greedy_move(pos.support, pos, &all))
    }
}

pub struct RandomBob {
    pub opening: Ball,
    rng: ChaCha8Rng,
}

impl RandomBob {
    pub fn new(opening: Ball, seed: u64) -> Self {
        RandomBob {
            opening,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl BobStrategy for RandomBob {
    fn open(&mut self, _: &FractalSupport, _: &GameParams) -> Result<Ball, String> {
        Ok(self.opening.clone())
    }

    fn respond(&mut self, pos: &Position<'_>, _: &[Rational]) -> Result<Ball, String> {
        Ok(random_move(pos.support, pos, &mut self.rng))
    }
}

/// Builds the Bob described by `config`. Replay needs the transcript to
/// draw from.
pub fn build_bob(config: &AdversaryConfig, opening: Ball, replay: Option<&Transcript>) -> Result<Box<dyn BobStrategy>, String> {
    Ok(match &config.kind {
        AdversaryKind::Greedy => Box::new(GreedyBob {
            opening,
            extra_targets: config.target_points.clone(),
        }),
        AdversaryKind::Random { seed } => Box::new(RandomBob::new(opening, *seed)),
        AdversaryKind::Replay => {
            let t = replay.ok_or("replay Bob needs a transcript")?;
            Box::new(Replay::new(t, Player::Bob))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_legal, run_game, Referee, TrivialAlice};
    use crate::numerics::{int, ratio};

    fn setup() -> (FractalSupport, GameParams) {
        (
            FractalSupport::cantor(),
            GameParams::classical(ratio(1, 3), ratio(1, 3)).unwrap(),
        )
    }

    #[test]
    fn greedy_without_targets_keeps_center() {
        let (k, p) = setup();
        let ball = Ball::new(ratio(2, 9), ratio(1, 9));
        let pos = Position { support: &k, params: &p, k: 1, ball: &ball };
        assert_eq!(greedy_move(&k, &pos, &[]).center, ratio(2, 9));
    }

    #[test]
    fn greedy_heads_for_left_endpoint() {
        let (k, p) = setup();
        let ball = Ball::new(ratio(8, 9), ratio(1, 3));
        let pos = Position { support: &k, params: &p, k: 1, ball: &ball };
        let target = ratio(1, 3);
        let next = greedy_move(&k, &pos, &[target.clone()]);
        assert!(is_legal(&ball, &next, Player::Bob, &p).is_legal());
        assert!(k.contains(&next.center));
        let moved = &ball.center - &next.center;
        assert!(moved.is_positive());
        assert!(moved <= (int(1) - &p.beta) * &ball.radius);
        assert!((&next.center - &target).abs() < (&ball.center - &target).abs());
    }

    #[test]
    fn random_is_seed_deterministic_and_legal() {
        let (k, p) = setup();
        let opening = Ball::new(int(0), int(1));
        let run = |seed| {
            let mut bob = RandomBob::new(opening.clone(), seed);
            run_game(&k, &p, &mut TrivialAlice, &mut bob, 12).unwrap()
        };
        let a = run(7);
        assert_eq!(a, run(7));
        assert!(Referee { support: &k, params: &p }.check_transcript(&a).is_ok());
    }

    #[test]
    fn random_fuzz_ten_thousand_moves() {
        let (k, _) = setup();
        for (variant, seed) in [(Variant::Classical, 1u64), (Variant::Strong, 2)] {
            let p = GameParams::new(ratio(1, 2), ratio(1, 2), variant).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut moves = 0;
            while moves < 5000 {
                let mut ball = Ball::new(int(0), int(1));
                for d in 0..25 {
                    let pos = Position { support: &k, params: &p, k: d + 1, ball: &ball };
                    let next = random_move(&k, &pos, &mut rng);
                    let mover_ok = Referee { support: &k, params: &p }.check(&ball, &next, Player::Bob);
                    assert!(mover_ok.is_legal(), "{mover_ok:?}");
                    ball = next;
                    moves += 1;
                }
            }
        }
    }
}
