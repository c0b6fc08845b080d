use super::{Ball, GameParams, Player};
use serde::{Deserialize, Serialize};

/// One move; serialized as a JSONL line
/// `{"k":3,"player":"alice","center":"2/27","radius":"1/81"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub k: usize,
    pub player: Player,
    #[serde(flatten)]
    pub ball: Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TranscriptStatus {
    InProgress,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub params: GameParams,
    pub moves: Vec<Move>,
    pub status: TranscriptStatus,
}

#[derive(Debug, thiserror::Error)]
pub enum TranscriptError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

impl Transcript {
    pub fn new(params: GameParams) -> Self {
        Transcript {
            params,
            moves: Vec::new(),
            status: TranscriptStatus::InProgress,
        }
    }

    pub fn push(&mut self, k: usize, player: Player, ball: Ball) {
        self.moves.push(Move { k, player, ball });
    }

    pub fn last_ball(&self) -> &Ball {
        &self.moves.last().expect("transcript has no moves").ball
    }

    /// Bob's ball `ω_k`.
    pub fn bob_ball(&self, k: usize) -> Option<&Ball> {
        self.moves.get(2 * (k - 1)).map(|m| &m.ball)
    }

    /// Alice's ball `ω'_k`.
    pub fn alice_ball(&self, k: usize) -> Option<&Ball> {
        self.moves.get(2 * k - 1).map(|m| &m.ball)
    }

    /// Completed rounds (Alice moves).
    pub fn rounds(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for m in &self.moves {
            out.push_str(&serde_json::to_string(m).expect("moves serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(params: GameParams, text: &str) -> Result<Self, TranscriptError> {
        let mut t = Transcript::new(params);
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let m: Move = serde_json::from_str(line).map_err(|source| TranscriptError::Json { line: i + 1, source })?;
            t.moves.push(m);
        }
        t.status = TranscriptStatus::Finished;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn jsonl_line_shape() {
        let m = Move {
            k: 3,
            player: Player::Alice,
            ball: Ball::new(ratio(2, 27), ratio(1, 81)),
        };
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"k":3,"player":"alice","center":"2/27","radius":"1/81"}"#
        );
    }

    #[test]
    fn jsonl_round_trip_and_errors() {
        let p = GameParams::classical(ratio(1, 3), ratio(1, 3)).unwrap();
        let text = "{\"k\":1,\"player\":\"bob\",\"center\":\"0\",\"radius\":\"1\"}\n";
        let t = Transcript::from_jsonl(p.clone(), text).unwrap();
        assert_eq!(t.to_jsonl(), text);
        let bad = "{\"k\":1,\"player\":\"bob\",\"center\":\"0\",\"radius\":\"1/0\"}\n";
        assert!(Transcript::from_jsonl(p, bad).is_err());
    }
}
