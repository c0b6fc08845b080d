//! Alice's constructive strategies: the halving avoidance step, lacunary
//! orbit avoidance, badly approximable numbers, finite exclusions, the
//! turn scheduler that intersects winning sets and the affine reduction.

mod affine;
mod ba;
mod exclude;
mod interleave;
mod lacunary;
mod lemma;
mod phi;
mod sequence;

pub use affine::{affine_targets, affine_to_sequence, iterate_affine};
pub use ba::{ba_candidate, plan_ba, BaPlan, BaStrategy};
pub use exclude::ExcludeStrategy;
pub use interleave::{Interleave, Progression};
pub use lacunary::{
    danger_set, horizon_of_blocks, index_block, minimal_block_size, plan_lacunary, BlockRecord,
    DangerPoint, LacunaryPlan, LacunaryStrategy,
};
pub use lemma::{avoidance_step, Avoidance, Branch};
pub use phi::BiLipschitzMap;
pub use sequence::{LacunaryBase, LacunarySpec, Targets, Terms};

use crate::certify::Certificate;
use crate::fractal::{DecayParams, FractalSupport};
use crate::game::{AliceStrategy, GameParams, TrivialAlice};
use crate::numerics::{self, CirclePoint, NumericsError, RatInterval, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AliceError {
    #[error("{0}")]
    InvalidAlpha(String),
    #[error("invalid strategy spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no point found: {0}")]
    NoPointFound(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("schedule overlap: {0}")]
    ScheduleOverlap(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Constants and counters a strategy reports after a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StrategySummary {
    pub strategy: String,
    pub constants: BTreeMap<String, String>,
    /// Finished blocks or processed turns.
    pub completed: usize,
    /// Avoidance steps that ended at distance exactly `αρ` from a point.
    pub boundary_hits: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<StrategySummary>,
}

impl StrategySummary {
    pub fn new(name: &str) -> Self {
        StrategySummary {
            strategy: name.to_string(),
            ..Default::default()
        }
    }

    pub fn constant(&mut self, key: &str, value: String) {
        self.constants.insert(key.to_string(), value);
    }
}

/// A strategy that can state, after a run, which finite-horizon properties
/// of the outcome it vouches for.
pub trait CertifyingAlice: AliceStrategy {
    fn certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate>;

    /// Certificates restated with the constants the avoidance distances
    /// support, where these differ from the claimed ones.
    fn sound_certificates(&self, outcome: &RatInterval, rounds: usize) -> Vec<Certificate> {
        self.certificates(outcome, rounds)
    }

    fn summary(&self) -> StrategySummary;

    /// Scales the internal separation constant (mutation experiments).
    fn corrupt_constant(&mut self, _factor: &Rational) {}
}

impl CertifyingAlice for TrivialAlice {
    fn certificates(&self, _: &RatInterval, _: usize) -> Vec<Certificate> {
        Vec::new()
    }

    fn summary(&self) -> StrategySummary {
        StrategySummary::new("trivial")
    }
}

/// One entry of an interleave schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledConfig {
    pub modulus: usize,
    pub residue: usize,
    pub strategy: AliceConfig,
}

/// Strategy section of a game spec, e.g.
/// `{"strategy":"lacunary","base":"2","targets":{"const":"0"},"phi":"identity"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum AliceConfig {
    Lacunary {
        #[serde(flatten)]
        sequence: LacunarySpec,
        #[serde(default)]
        phi: BiLipschitzMap,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Ba {
        #[serde(default)]
        phi: BiLipschitzMap,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Affine {
        b: u64,
        c: CirclePoint,
        y: CirclePoint,
        n_max: usize,
        #[serde(default)]
        phi: BiLipschitzMap,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Exclude {
        #[serde(with = "numerics::serde_rational_vec")]
        points: Vec<Rational>,
    },
    Interleave {
        parts: Vec<ScheduledConfig>,
    },
    Trivial,
}

/// Builds the strategy described by `config` for the game `params`.
pub fn build_alice(
    config: &AliceConfig,
    support: &FractalSupport,
    params: &GameParams,
    decay: &DecayParams,
) -> Result<Box<dyn CertifyingAlice>, AliceError> {
    Ok(match config {
        AliceConfig::Lacunary { sequence, phi, label } => {
            let s = LacunaryStrategy::new(support.clone(), sequence.clone(), phi.clone(), params.clone(), decay.clone())?;
            Box::new(match label {
                Some(l) => s.with_label(l.clone()),
                None => s,
            })
        }
        AliceConfig::Affine { b, c, y, n_max, phi, label } => {
            let sequence = affine_to_sequence(*b, c, y, *n_max)?;
            let s = LacunaryStrategy::new(support.clone(), sequence, phi.clone(), params.clone(), decay.clone())?;
            Box::new(s.with_label(label.clone().unwrap_or_else(|| "affine".into())))
        }
        AliceConfig::Ba { phi, label } => {
            let s = BaStrategy::new(support.clone(), phi.clone(), params.clone(), decay.clone())?;
            Box::new(match label {
                Some(l) => s.with_label(l.clone()),
                None => s,
            })
        }
        AliceConfig::Exclude { points } => Box::new(ExcludeStrategy::new(
            support.clone(),
            params.alpha.clone(),
            decay.rho0.clone(),
            points.clone(),
        )),
        AliceConfig::Interleave { parts } => {
            let mut built = Vec::new();
            for p in parts {
                let prog = Progression {
                    modulus: p.modulus,
                    residue: p.residue,
                };
                if prog.modulus == 0 {
                    return Err(AliceError::InvalidSpec("zero modulus".into()));
                }
                let eff = prog.effective_params(params);
                built.push((prog, build_alice(&p.strategy, support, &eff, decay)?));
            }
            Box::new(Interleave::new(built, params.alpha.clone())?)
        }
        AliceConfig::Trivial => Box::new(TrivialAlice),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json() {
        let text = r#"{"strategy":"lacunary","base":"2","targets":{"const":"0"},"phi":"identity"}"#;
        let c: AliceConfig = serde_json::from_str(text).unwrap();
        let AliceConfig::Lacunary { sequence, phi, .. } = &c else {
            panic!("wrong variant")
        };
        assert!(phi.is_identity());
        assert_eq!(sequence.lacunarity(), &numerics::int(2));
        let back: AliceConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let tri = r#"{"strategy":"interleave","parts":[
            {"modulus":3,"residue":1,"strategy":{"strategy":"ba"}},
            {"modulus":3,"residue":2,"strategy":{"strategy":"lacunary","base":"3","targets":{"const":"1/2"}}}]}"#;
        let t: AliceConfig = serde_json::from_str(tri).unwrap();
        assert!(matches!(t, AliceConfig::Interleave { ref parts } if parts.len() == 2));
    }
}
