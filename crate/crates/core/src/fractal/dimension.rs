use super::{ball_mass, FractalMeasure};
use crate::numerics::{self, Exponent, Rational};
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

/// `log μ(B(x,ρ)) / log ρ` at one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    #[serde(with = "numerics::serde_rational")]
    pub rho: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub mass_lower: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub mass_upper: Rational,
    /// Exact log-ratio when the mass is known exactly.
    pub exact: Option<Exponent>,
    /// Floating-point range implied by the mass bounds.
    pub low: f64,
    pub high: f64,
}

/// Estimates along a decreasing schedule of radii `ρ < 1`.
pub fn lower_pointwise_dimension(
    mu: &FractalMeasure,
    x: &Rational,
    schedule: &[Rational],
    depth: usize,
) -> Vec<DimensionEstimate> {
    schedule
        .iter()
        .map(|rho| {
            assert!(rho.is_positive() && *rho < Rational::one(), "radius must lie in (0, 1)");
            let (lo, hi) = ball_mass(mu, x, rho, depth);
            let lr = numerics::ln(rho);
            // log ρ < 0, so the larger mass gives the smaller ratio
            let high = if lo.is_positive() { numerics::ln(&lo) / lr } else { f64::INFINITY };
            let low = numerics::ln(&hi) / lr;
            let exact = (lo == hi && lo.is_positive()).then(|| Exponent::log_ratio(&lo, rho));
            DimensionEstimate {
                rho: rho.clone(),
                mass_lower: lo,
                mass_upper: hi,
                exact,
                low,
                high,
            }
        })
        .collect()
}

/// Analytic lower bound next to the empirical estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    /// `γ` of the decay constants: `d_μ(x) ≥ γ` on the support.
    pub analytic_bound: Option<Exponent>,
    pub power_law_gamma: Option<Exponent>,
    pub estimates: Vec<DimensionEstimate>,
    /// Smallest lower end among the estimates.
    pub min_estimate: f64,
    /// How far the smallest estimate falls below the analytic bound (zero
    /// when consistent).
    pub shortfall: f64,
    pub flagged: bool,
}

impl DimensionReport {
    pub fn new(
        analytic_bound: Option<Exponent>,
        power_law_gamma: Option<Exponent>,
        estimates: Vec<DimensionEstimate>,
    ) -> Self {
        let min_estimate = estimates.iter().map(|e| e.low).fold(f64::INFINITY, f64::min);
        let shortfall = analytic_bound
            .as_ref()
            .map(|g| (g.to_f64() - min_estimate).max(0.0))
            .unwrap_or(0.0);
        DimensionReport {
            analytic_bound,
            power_law_gamma,
            estimates,
            min_estimate,
            shortfall,
            flagged: shortfall > 0.0,
        }
    }
}
