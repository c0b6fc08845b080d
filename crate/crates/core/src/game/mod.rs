//! The Schmidt game on a closed set `K ⊂ ℝ`: balls, the legality referee for
//! classical and strong rules, transcripts and the game loop.

mod transcript;

pub use transcript::{Move, Transcript, TranscriptStatus};

use crate::fractal::{FractalSupport, Membership};
use crate::numerics::{self, RatInterval, Rational};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Closed ball `B(x, ρ) = [x − ρ, x + ρ]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ball {
    #[serde(with = "numerics::serde_rational")]
    pub center: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub radius: Rational,
}

impl Ball {
    pub fn new(center: Rational, radius: Rational) -> Self {
        Ball { center, radius }
    }

    pub fn interval(&self) -> RatInterval {
        RatInterval::ball(&self.center, &self.radius)
    }

    /// `self ≤_s outer`: `ρ₂ + |x₁ − x₂| ≤ ρ₁`.
    pub fn nested_in(&self, outer: &Ball) -> bool {
        &self.radius + (&self.center - &outer.center).abs() <= outer.radius
    }

    /// Distance from the ball to a point (zero inside).
    pub fn dist_to(&self, y: &Rational) -> Rational {
        self.interval().dist_to(y)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "alice",
            Player::Bob => "bob",
        })
    }
}

/// Classical rules fix the radii exactly; strong rules only bound them
/// from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Classical,
    Strong,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameParams {
    #[serde(with = "numerics::serde_rational")]
    pub alpha: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub beta: Rational,
    #[serde(default)]
    pub variant: Variant,
}

impl GameParams {
    pub fn new(alpha: Rational, beta: Rational, variant: Variant) -> Result<Self, GameError> {
        let one = Rational::one();
        for (name, v) in [("alpha", &alpha), ("beta", &beta)] {
            if !v.is_positive() || *v >= one {
                return Err(GameError::InvalidParams(format!("{name} = {v} is not in (0, 1)")));
            }
        }
        Ok(GameParams { alpha, beta, variant })
    }

    pub fn classical(alpha: Rational, beta: Rational) -> Result<Self, GameError> {
        GameParams::new(alpha, beta, Variant::Classical)
    }

    /// `αβ`, the radius ratio over one full round.
    pub fn round_ratio(&self) -> Rational {
        &self.alpha * &self.beta
    }

    /// Ratio of the player's radius to the previous radius.
    pub fn ratio_for(&self, player: Player) -> &Rational {
        match player {
            Player::Alice => &self.alpha,
            Player::Bob => &self.beta,
        }
    }
}

/// Referee verdict with the reason for a rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Legality {
    Legal,
    Illegal(String),
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal)
    }
}

/// Nesting plus the radius rule of the variant. Membership of the center
/// in `K` is checked separately by [`Referee`].
pub fn is_legal(prev: &Ball, next: &Ball, mover: Player, params: &GameParams) -> Legality {
    if !next.radius.is_positive() {
        return Legality::Illegal(format!("radius {} is not positive", next.radius));
    }
    if !next.nested_in(prev) {
        return Legality::Illegal(format!(
            "{next} is not nested in {prev}: {} + |{} - {}| > {}",
            next.radius, next.center, prev.center, prev.radius
        ));
    }
    let required = prev.radius.clone() * params.ratio_for(mover);
    match params.variant {
        Variant::Classical if next.radius != required => Legality::Illegal(format!(
            "radius {} differs from the required {required}",
            next.radius
        )),
        Variant::Strong if next.radius < required => Legality::Illegal(format!(
            "radius {} is below the required {required}",
            next.radius
        )),
        _ => Legality::Legal,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid game parameters: {0}")]
    InvalidParams(String),
    #[error("illegal move by {player} at turn {k}: {ball}: {reason}")]
    IllegalMove {
        player: Player,
        k: usize,
        ball: Ball,
        reason: String,
    },
    #[error("{player} could not move at turn {k}: {reason}")]
    StrategyFailure {
        player: Player,
        k: usize,
        reason: String,
    },
}

/// Checks every move against the rules and the support.
pub struct Referee<'a> {
    pub support: &'a FractalSupport,
    pub params: &'a GameParams,
}

impl Referee<'_> {
    pub fn check_center(&self, ball: &Ball) -> Legality {
        match self.support.membership(&ball.center) {
            Membership::Member => Legality::Legal,
            Membership::NotMember => Legality::Illegal(format!("center {} is not in K", ball.center)),
            Membership::Unknown => Legality::Illegal(format!(
                "membership of center {} in K could not be established",
                ball.center
            )),
        }
    }

    pub fn check_opening(&self, ball: &Ball) -> Legality {
        if !ball.radius.is_positive() {
            return Legality::Illegal("opening radius must be positive".into());
        }
        self.check_center(ball)
    }

    pub fn check(&self, prev: &Ball, next: &Ball, mover: Player) -> Legality {
        match is_legal(prev, next, mover, self.params) {
            Legality::Legal => self.check_center(next),
            bad => bad,
        }
    }

    /// Re-validates a whole transcript: opening, alternation and every
    /// move.
    pub fn check_transcript(&self, t: &Transcript) -> Result<(), GameError> {
        let Some(first) = t.moves.first() else {
            return Ok(());
        };
        let illegal = |m: &Move, reason: String| GameError::IllegalMove {
            player: m.player,
            k: m.k,
            ball: m.ball.clone(),
            reason,
        };
        if first.player != Player::Bob || first.k != 1 {
            return Err(illegal(first, "the game must open with Bob's move 1".into()));
        }
        if let Legality::Illegal(r) = self.check_opening(&first.ball) {
            return Err(illegal(first, r));
        }
        for w in t.moves.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            let expected = match prev.player {
                Player::Bob => (Player::Alice, prev.k),
                Player::Alice => (Player::Bob, prev.k + 1),
            };
            if (next.player, next.k) != expected {
                return Err(illegal(next, "moves do not alternate".into()));
            }
            if let Legality::Illegal(r) = self.check(&prev.ball, &next.ball, next.player) {
                return Err(illegal(next, r));
            }
        }
        Ok(())
    }
}

/// Everything a strategy may look at when choosing a ball.
pub struct Position<'a> {
    pub support: &'a FractalSupport,
    pub params: &'a GameParams,
    /// Round index `k`: Alice answers `ω_k` with `ω'_k`, Bob answers `ω'_k`
    /// with `ω_{k+1}`.
    pub k: usize,
    /// The ball being answered.
    pub ball: &'a Ball,
}

impl Position<'_> {
    /// Radius a classical answer must have.
    pub fn classical_radius(&self, mover: Player) -> Rational {
        &self.ball.radius * self.params.ratio_for(mover)
    }
}

/// Alice's side. `targets` exposes the points she is currently steering
/// away from so that an informed Bob can aim at them.
pub trait AliceStrategy {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String>;

    fn targets(&self, _pos: &Position<'_>) -> Vec<Rational> {
        Vec::new()
    }
}

pub trait BobStrategy {
    fn open(&mut self, support: &FractalSupport, params: &GameParams) -> Result<Ball, String>;

    /// `targets` are Alice's current targets (white-box adversary).
    fn respond(&mut self, pos: &Position<'_>, targets: &[Rational]) -> Result<Ball, String>;
}

/// Plays `rounds` rounds (Bob opens, so `2·rounds + 1` moves), refereeing
/// every move. The first illegal move or strategy failure aborts the game
/// and is reported as an error charged to that player.
pub fn run_game(
    support: &FractalSupport,
    params: &GameParams,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
    rounds: usize,
) -> Result<Transcript, GameError> {
    let referee = Referee { support, params };
    let mut t = Transcript::new(params.clone());
    let opening = bob.open(support, params).map_err(|reason| GameError::StrategyFailure {
        player: Player::Bob,
        k: 1,
        reason,
    })?;
    if let Legality::Illegal(reason) = referee.check_opening(&opening) {
        return Err(GameError::IllegalMove {
            player: Player::Bob,
            k: 1,
            ball: opening,
            reason,
        });
    }
    t.push(1, Player::Bob, opening);
    for k in 1..=rounds {
        let current = t.last_ball().clone();
        let pos = Position {
            support,
            params,
            k,
            ball: &current,
        };
        let answer = alice.respond(&pos).map_err(|reason| GameError::StrategyFailure {
            player: Player::Alice,
            k,
            reason,
        })?;
        if let Legality::Illegal(reason) = referee.check(&current, &answer, Player::Alice) {
            return Err(GameError::IllegalMove {
                player: Player::Alice,
                k,
                ball: answer,
                reason,
            });
        }
        t.push(k, Player::Alice, answer.clone());
        let pos = Position {
            support,
            params,
            k,
            ball: &answer,
        };
        let targets = alice.targets(&pos);
        let reply = bob.respond(&pos, &targets).map_err(|reason| GameError::StrategyFailure {
            player: Player::Bob,
            k: k + 1,
            reason,
        })?;
        if let Legality::Illegal(reason) = referee.check(&answer, &reply, Player::Bob) {
            return Err(GameError::IllegalMove {
                player: Player::Bob,
                k: k + 1,
                ball: reply,
                reason,
            });
        }
        t.push(k + 1, Player::Bob, reply);
    }
    t.status = TranscriptStatus::Finished;
    Ok(t)
}

/// The last ball as an interval; every point of `K` in it lies within
/// `2ρ_last` of `x_∞`.
pub fn outcome_interval(t: &Transcript) -> RatInterval {
    t.last_ball().interval()
}

/// Keeps the center and takes the classical radius (or the minimal one
/// under strong rules). Used for warm-up turns.
pub fn canonical_move(pos: &Position<'_>, mover: Player) -> Ball {
    Ball::new(pos.ball.center.clone(), pos.classical_radius(mover))
}

/// Alice always keeping the center.
#[derive(Debug, Default, Clone)]
pub struct TrivialAlice;

impl AliceStrategy for TrivialAlice {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        Ok(canonical_move(pos, Player::Alice))
    }
}

/// Bob opening at a fixed ball and then always keeping the center.
#[derive(Debug, Clone)]
pub struct TrivialBob {
    pub opening: Ball,
}

impl BobStrategy for TrivialBob {
    fn open(&mut self, _: &FractalSupport, _: &GameParams) -> Result<Ball, String> {
        Ok(self.opening.clone())
    }

    fn respond(&mut self, pos: &Position<'_>, _: &[Rational]) -> Result<Ball, String> {
        Ok(canonical_move(pos, Player::Bob))
    }
}

/// Replays recorded moves of one player.
#[derive(Debug, Clone)]
pub struct Replay {
    moves: Vec<Ball>,
    next: usize,
}

impl Replay {
    pub fn new(t: &Transcript, player: Player) -> Self {
        Replay {
            moves: t.moves.iter().filter(|m| m.player == player).map(|m| m.ball.clone()).collect(),
            next: 0,
        }
    }

    fn take(&mut self) -> Result<Ball, String> {
        let b = self.moves.get(self.next).cloned().ok_or("replay exhausted")?;
        self.next += 1;
        Ok(b)
    }
}

impl AliceStrategy for Replay {
    fn respond(&mut self, _: &Position<'_>) -> Result<Ball, String> {
        self.take()
    }
}

impl BobStrategy for Replay {
    fn open(&mut self, _: &FractalSupport, _: &GameParams) -> Result<Ball, String> {
        self.take()
    }

    fn respond(&mut self, _: &Position<'_>, _: &[Rational]) -> Result<Ball, String> {
        self.take()
    }
}

/// Alice that returns a fixed (possibly illegal) ball on one turn and
/// plays canonically otherwise; exercises the referee.
#[derive(Debug, Clone)]
pub struct RogueAlice {
    pub at: usize,
    pub ball: Ball,
}

impl AliceStrategy for RogueAlice {
    fn respond(&mut self, pos: &Position<'_>) -> Result<Ball, String> {
        if pos.k == self.at {
            Ok(self.ball.clone())
        } else {
            Ok(canonical_move(pos, Player::Alice))
        }
    }
}
