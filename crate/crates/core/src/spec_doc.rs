//! The JSON game-spec document and the pipelines driven from it: play a
//! game, collect and verify certificates, audit the measure, pin digits.

use crate::alice::{build_alice, AliceConfig, AliceError, StrategySummary};
use crate::bob::{build_bob, AdversaryConfig, AdversaryKind};
use crate::certify::{verify, CertifyError, Certificate, Claim, VerificationReport};
use crate::fractal::{AuditPlan, DecayParams, FractalError, FractalSupport, IfsDocument};
use crate::game::{outcome_interval, run_game, Ball, GameError, GameParams, Transcript, Variant};
use crate::numerics::{self, NumericsError, RatInterval, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Bits of the dyadic grid used when `alpha` is given as `"max"`.
pub const MAX_ALPHA_BITS: u32 = 16;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Fractal(#[from] FractalError),
    #[error(transparent)]
    Alice(#[from] AliceError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

impl SpecError {
    /// Input and validation problems, as opposed to failed runs.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, SpecError::Game(_) | SpecError::Certify(CertifyError::HorizonMismatch(_)))
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, SpecError> {
    std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), SpecError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| SpecError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| SpecError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSection {
    /// A rational, or `"max"` for the largest `m/2^16` the decay bound admits.
    pub alpha: String,
    pub beta: String,
    #[serde(default)]
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSection {
    #[serde(default = "default_transcript")]
    pub transcript: String,
    #[serde(default = "default_certificates")]
    pub certificates: String,
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_audit")]
    pub audit: String,
}

fn default_transcript() -> String {
    "transcript.jsonl".into()
}

fn default_certificates() -> String {
    "certificates.json".into()
}

fn default_report() -> String {
    "report.json".into()
}

fn default_audit() -> String {
    "audit.csv".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            transcript: default_transcript(),
            certificates: default_certificates(),
            report: default_report(),
            audit: default_audit(),
        }
    }
}

/// A game spec as written on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameSpecDocument {
    #[serde(default)]
    pub name: Option<String>,
    pub support: IfsDocument,
    pub decay: DecayParams,
    pub game: GameSection,
    /// Bob's opening ball; defaults to the canonical point with the hull width.
    #[serde(default)]
    pub opening: Option<Ball>,
    pub alice: AliceConfig,
    pub bob: AdversaryConfig,
    pub rounds: usize,
    /// Transcript replayed by a `replay` Bob, relative to the spec file.
    #[serde(default)]
    pub replay: Option<String>,
    #[serde(default)]
    pub audit: Option<AuditPlan>,
    #[serde(default)]
    pub max_q: Option<u64>,
    #[serde(default)]
    pub output: OutputSection,
}

/// A validated spec with every constant parsed.
#[derive(Debug, Clone)]
pub struct GameSpec {
    pub name: String,
    pub support: FractalSupport,
    pub decay: DecayParams,
    pub params: GameParams,
    pub opening: Ball,
    pub alice: AliceConfig,
    pub bob: AdversaryConfig,
    pub rounds: usize,
    pub replay: Option<Transcript>,
    pub audit: Option<AuditPlan>,
    pub max_q: Option<BigInt>,
    pub output: OutputSection,
}

impl GameSpecDocument {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parses and validates; relative paths resolve against `base`.
    pub fn resolve(&self, base: Option<&Path>) -> Result<GameSpec, SpecError> {
        let support = FractalSupport::from_document(&self.support)?;
        let alpha = if self.game.alpha.trim() == "max" {
            self.decay
                .max_alpha(MAX_ALPHA_BITS)
                .ok_or_else(|| SpecError::Invalid("no dyadic alpha satisfies the decay bound".into()))?
        } else {
            numerics::parse_rational(&self.game.alpha)?
        };
        let beta = numerics::parse_rational(&self.game.beta)?;
        let params = GameParams::new(alpha, beta, self.game.variant)?;
        if !self.decay.admits_alpha(&params.alpha) {
            return Err(SpecError::Alice(AliceError::InvalidAlpha(format!(
                "alpha = {} exceeds 1/4(1/(3C))^{{1/γ}} for C = {}, γ = {}",
                params.alpha, self.decay.c, self.decay.gamma
            ))));
        }
        let opening = self.opening.clone().unwrap_or_else(|| {
            let hull = support.hull();
            Ball::new(support.canonical_point().clone(), hull.width())
        });
        if !opening.radius.is_positive() {
            return Err(SpecError::Invalid("opening radius must be positive".into()));
        }
        if self.rounds == 0 {
            return Err(SpecError::Invalid("rounds must be positive".into()));
        }
        let replay = match (&self.bob.kind, &self.replay) {
            (AdversaryKind::Replay, None) => {
                return Err(SpecError::Invalid("a replay Bob needs a transcript path".into()))
            }
            (_, Some(p)) => {
                let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
                Some(Transcript::from_jsonl(params.clone(), &read_file(&path)?).map_err(|e| SpecError::Invalid(e.to_string()))?)
            }
            _ => None,
        };
        Ok(GameSpec {
            name: self.name.clone().unwrap_or_else(|| "game".into()),
            support,
            decay: self.decay.clone(),
            params,
            opening,
            alice: self.alice.clone(),
            bob: self.bob.clone(),
            rounds: self.rounds,
            replay,
            audit: self.audit.clone(),
            max_q: self.max_q.map(BigInt::from),
            output: self.output.clone(),
        })
    }
}

impl GameSpec {
    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let doc = GameSpecDocument::from_json(&read_file(path)?)?;
        doc.resolve(path.parent())
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        GameSpecDocument::from_json(text)?.resolve(None)
    }

    /// Seeds a random Bob from `seed`, keeping every other setting.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let AdversaryKind::Random { seed: s } = &mut self.bob.kind {
            *s = seed;
        }
        self
    }
}

/// Everything a run produces.
pub struct PlayOutcome {
    pub transcript: Transcript,
    pub outcome: RatInterval,
    pub certificates: Vec<Certificate>,
    /// Certificates with the constants the strategy's distances support.
    pub sound_certificates: Vec<Certificate>,
    pub summary: StrategySummary,
}

impl PlayOutcome {
    pub fn verify_all(&self) -> Result<Vec<VerificationReport>, CertifyError> {
        self.certificates.iter().map(verify).collect()
    }

    pub fn verify_sound(&self) -> Result<Vec<VerificationReport>, CertifyError> {
        self.sound_certificates.iter().map(verify).collect()
    }
}

fn cap_denominators(certs: &mut [Certificate], cap: Option<&BigInt>) {
    let Some(cap) = cap else { return };
    for c in certs {
        if let Claim::BadApprox { q_max } = &mut c.claim {
            if *q_max > *cap {
                *q_max = cap.clone();
            }
        }
    }
}

/// Plays the spec's game for `rounds` rounds (the spec's own by default).
/// `mutate` scales the strategies' certified constants before they are read.
pub fn play(spec: &GameSpec, rounds: Option<usize>, mutate: Option<&Rational>) -> Result<PlayOutcome, SpecError> {
    let rounds = rounds.unwrap_or(spec.rounds);
    let mut alice = build_alice(&spec.alice, &spec.support, &spec.params, &spec.decay)?;
    let mut bob = build_bob(&spec.bob, spec.opening.clone(), spec.replay.as_ref()).map_err(SpecError::Invalid)?;
    let transcript = run_game(&spec.support, &spec.params, alice.as_mut(), bob.as_mut(), rounds)?;
    if let Some(f) = mutate {
        alice.corrupt_constant(f);
    }
    let outcome = outcome_interval(&transcript);
    let mut certificates = alice.certificates(&outcome, rounds);
    let mut sound_certificates = alice.sound_certificates(&outcome, rounds);
    cap_denominators(&mut certificates, spec.max_q.as_ref());
    cap_denominators(&mut sound_certificates, spec.max_q.as_ref());
    Ok(PlayOutcome {
        transcript,
        outcome,
        certificates,
        sound_certificates,
        summary: alice.summary(),
    })
}

/// The word shared by every depth-`depth` cylinder meeting `window`, if
/// there is exactly one such cylinder at each level.
pub fn pinned_word(support: &FractalSupport, window: &RatInterval, depth: usize) -> Option<Vec<usize>> {
    let mut c = support.root();
    for _ in 0..depth {
        let mut kids = support.children(&c).into_iter().filter(|k| k.interval.intersects(window));
        let only = kids.next()?;
        if kids.next().is_some() {
            return None;
        }
        c = only;
    }
    Some(c.word)
}

/// Digit of map `x ↦ x/b + a` in base `b` (`a·b`), or the map index when
/// the map is not of that form.
pub fn word_digits(support: &FractalSupport, word: &[usize]) -> Vec<BigInt> {
    word.iter()
        .map(|&i| {
            let m = &support.ifs().maps[i];
            let b = m.r.recip();
            let d = &m.a * &b;
            if b.is_integer() && d.is_integer() && !m.r.is_negative() {
                d.to_integer()
            } else {
                BigInt::from(i)
            }
        })
        .collect()
}

/// Rounds needed before the last ball is narrower than every gap between
/// depth-`depth` cylinders, when the IFS has such gaps.
pub fn rounds_to_pin(spec: &GameSpec, depth: usize) -> Option<usize> {
    let cylinders = spec.support.cylinders(depth);
    let gap = cylinders
        .windows(2)
        .map(|w| &w[1].interval.lo - &w[0].interval.hi)
        .min()?;
    if !gap.is_positive() {
        return None;
    }
    let ab = spec.params.round_ratio();
    let mut radius = spec.opening.radius.clone() * &spec.params.alpha;
    let mut rounds = 1;
    while &radius * numerics::int(2) >= gap {
        radius *= &ab;
        rounds += 1;
    }
    Some(rounds)
}

pub struct Construction {
    pub play: PlayOutcome,
    pub digits: Vec<BigInt>,
}

/// Plays long enough to pin `digits` symbols of the outcome.
pub fn construct(spec: &GameSpec, digits: usize) -> Result<Construction, SpecError> {
    let needed = rounds_to_pin(spec, digits)
        .ok_or_else(|| SpecError::Invalid("the IFS has touching cylinders; digits cannot be pinned".into()))?;
    let play = play(spec, Some(needed.max(spec.rounds)), None)?;
    let word = pinned_word(&spec.support, &play.outcome, digits)
        .ok_or_else(|| SpecError::Invalid(format!("outcome {} does not pin {digits} digits", play.outcome)))?;
    Ok(Construction {
        digits: word_digits(&spec.support, &word),
        play,
    })
}

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub name: &'a str,
    pub rounds: usize,
    pub outcome: &'a RatInterval,
    pub summary: &'a StrategySummary,
    pub verification: &'a [VerificationReport],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub sound_verification: &'a [VerificationReport],
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"{
        "support": {"maps":[{"r":"1/3","a":"0"},{"r":"1/3","a":"2/3"}],"weights":["1/2","1/2"],"hull":["0","1"]},
        "decay": {"C":"8","gamma":"log(2)/log(3)","rho0":"1/3"},
        "game": {"alpha":"max","beta":"1/4"},
        "alice": {"strategy":"lacunary","base":"2","targets":{"const":"0"}},
        "bob": {"kind":"greedy"},
        "rounds": 30
    }"#;

    #[test]
    fn resolves_defaults() {
        let s = GameSpec::from_json(SPEC).unwrap();
        assert_eq!(s.opening, Ball::new(numerics::int(0), numerics::int(1)));
        assert_eq!(s.params.alpha, numerics::ratio(53, 32768));
        assert_eq!(s.output.transcript, "transcript.jsonl");
    }

    #[test]
    fn rejects_large_alpha() {
        let text = SPEC.replace(r#""alpha":"max""#, r#""alpha":"1/8""#);
        let e = GameSpec::from_json(&text).unwrap_err();
        assert!(e.to_string().contains("exceeds 1/4(1/(3C))^{1/γ}"), "{e}");
        assert!(e.is_input_error());
    }

    #[test]
    fn rejects_zero_denominator() {
        let text = SPEC.replace(r#""beta":"1/4""#, r#""beta":"1/0""#);
        assert!(GameSpec::from_json(&text).unwrap_err().is_input_error());
    }

    #[test]
    fn pins_cantor_digits() {
        let k = FractalSupport::cantor();
        let w = pinned_word(&k, &RatInterval::point(numerics::ratio(1, 4)), 6).unwrap();
        // 1/4 = 0.020202…₃
        assert_eq!(word_digits(&k, &w), [0, 2, 0, 2, 0, 2].map(BigInt::from));
        assert!(pinned_word(&k, &RatInterval::new(numerics::ratio(1, 4), numerics::ratio(3, 4)), 1).is_none());
    }
}
