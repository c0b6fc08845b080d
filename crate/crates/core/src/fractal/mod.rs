//! IFS attractors, their self-similar measures and grid audits of the decay
//! conditions the game strategies depend on.

mod audit;
mod dimension;
mod gap;
mod ifs;
mod measure;

pub use audit::{
    check_absolute_decay, check_efd, check_federer, check_power_law, decay_from_federer_efd,
    efd_to_exponent, federer_to_exponent, run_audit, AuditOutcome, AuditPlan, AuditRow, GridSpec,
    MeasureAuditReport, PowerLawConstants, RatioConstants, RatioReport, Witness,
};
pub use dimension::{lower_pointwise_dimension, DimensionEstimate, DimensionReport};
pub use gap::{find_point_in_gap, nearest_point};
pub use ifs::{Cylinder, FractalMeasure, FractalSupport, Ifs, IfsDocument, Membership, Similarity};
pub use measure::{ball_mass, interval_mass};

use crate::numerics::{self, Exponent, NumericsError, Rational};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractalError {
    #[error("invalid IFS: {0}")]
    InvalidIfs(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid audit grid: {0}")]
    InvalidGrid(String),
}

/// Constants `(C, γ, ρ₀)` of absolute decay:
/// `μ(B(x,ρ) ∩ B(y,ερ)) < C ε^γ μ(B(x,ρ))` for `0 < ρ ≤ ρ₀`, `0 < ε < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecayParams {
    #[serde(rename = "C", with = "numerics::serde_rational")]
    pub c: Rational,
    pub gamma: Exponent,
    #[serde(with = "numerics::serde_rational")]
    pub rho0: Rational,
}

impl DecayParams {
    pub fn new(c: Rational, gamma: Exponent, rho0: Rational) -> Result<Self, FractalError> {
        if !c.is_positive() || !gamma.is_positive() || !rho0.is_positive() {
            return Err(FractalError::InvalidGrid(
                "decay constants must be positive".into(),
            ));
        }
        Ok(DecayParams { c, gamma, rho0 })
    }

    /// Constants proved for the Cantor coin-flip measure: Federer and efd
    /// with `(ε₀, δ) = (1/3, 1/2)` on `ρ ≤ 1` combine to `C = 8`,
    /// `γ = log 2/log 3`, `ρ₀ = 1/3`.
    pub fn cantor() -> Self {
        let (c1, g1) = federer_to_exponent(&numerics::ratio(1, 3), &numerics::ratio(1, 2));
        let (c2, g2) = efd_to_exponent(&numerics::ratio(1, 3), &numerics::ratio(1, 2));
        decay_from_federer_efd(&c1, &g1, &c2, &g2, &Rational::one())
    }

    /// Lebesgue measure away from the hull endpoints.
    pub fn lebesgue() -> Self {
        DecayParams {
            c: numerics::int(2),
            gamma: Exponent::rational(Rational::one()),
            rho0: numerics::ratio(1, 4),
        }
    }

    /// Whether `α ≤ ¼·(1/(3C))^{1/γ}`, decided exactly as
    /// `(4α)^γ ≤ 1/(3C)`. An undecidable comparison counts as inadmissible.
    pub fn admits_alpha(&self, alpha: &Rational) -> bool {
        if !alpha.is_positive() || *alpha >= Rational::one() {
            return false;
        }
        let four_alpha = alpha * numerics::int(4);
        let bound = (numerics::int(3) * &self.c).recip();
        matches!(
            self.gamma.cmp_pow(&four_alpha, &bound),
            Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
        )
    }

    /// Largest `m/2^bits` admitted by [`Self::admits_alpha`].
    pub fn max_alpha(&self, bits: u32) -> Option<Rational> {
        let den = num_bigint::BigInt::one() << bits as usize;
        let at = |m: &num_bigint::BigInt| Rational::new(m.clone(), den.clone());
        let mut lo = num_bigint::BigInt::from(0);
        let mut hi = den.clone();
        // invariant: lo admitted (or zero), hi not admitted
        while &hi - &lo > num_bigint::BigInt::one() {
            let mid: num_bigint::BigInt = (&lo + &hi) >> 1;
            if self.admits_alpha(&at(&mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo > num_bigint::BigInt::from(0)).then(|| at(&lo))
    }
}
