use super::{ball_mass, interval_mass, DecayParams, FractalError, FractalMeasure};
use crate::numerics::{self, Exponent, RatInterval, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::io::Write;

/// Finite sample of the quantifiers in a decay condition. Reports built
/// from it are "checked on grid", never proofs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Centers are the cylinder points `w_u(p₀)` for words of this length.
    pub center_depth: usize,
    /// Optional restriction of the centers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<RatInterval>,
    #[serde(with = "numerics::serde_rational_vec")]
    pub radii: Vec<Rational>,
    #[serde(default, with = "numerics::serde_rational_vec")]
    pub epsilons: Vec<Rational>,
    /// Second centers `y = x + t·ρ` for each listed `t`.
    #[serde(default, with = "numerics::serde_rational_vec")]
    pub offsets: Vec<Rational>,
    /// Cylinder depth used for the mass bounds.
    pub depth: usize,
}

impl GridSpec {
    /// `first·ratioⁱ` for `i < count`.
    pub fn geometric(first: &Rational, ratio: &Rational, count: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(count);
        let mut v = first.clone();
        for _ in 0..count {
            out.push(v.clone());
            v *= ratio;
        }
        out
    }

    pub fn centers(&self, mu: &FractalMeasure) -> Vec<Rational> {
        let mut pts: Vec<Rational> = mu
            .cylinders(self.center_depth)
            .iter()
            .map(|c| mu.cylinder_point(c))
            .filter(|x| self.window.as_ref().is_none_or(|w| w.contains(x)))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

/// A grid tuple `(x, ρ, y, ε)`; single-ball checks set `y = x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "numerics::serde_rational")]
    pub x: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub rho: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub y: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub eps: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuditOutcome {
    Pass,
    Fail(Witness),
    /// Mass bounds at the grid depth could not decide this tuple.
    Inconclusive(Witness),
}

impl AuditOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AuditOutcome::Pass)
    }
}

/// One CSV line: check, parameters, grid point, verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub check: String,
    pub params: String,
    pub x: String,
    pub rho: String,
    pub y: String,
    pub eps: String,
    pub verdict: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    Undecided,
}

/// Evaluates every tuple in parallel and keeps the grid order.
fn run_grid<F>(check: &str, params: String, points: Vec<Witness>, eval: F) -> (AuditOutcome, Vec<AuditRow>)
where
    F: Fn(&Witness) -> Verdict + Sync,
{
    let verdicts: Vec<Verdict> = points.par_iter().map(&eval).collect();
    let mut outcome = AuditOutcome::Pass;
    let mut rows = Vec::with_capacity(points.len());
    for (w, v) in points.iter().zip(&verdicts) {
        match (v, &outcome) {
            (Verdict::Fail, AuditOutcome::Pass | AuditOutcome::Inconclusive(_)) => {
                outcome = AuditOutcome::Fail(w.clone())
            }
            (Verdict::Undecided, AuditOutcome::Pass) => outcome = AuditOutcome::Inconclusive(w.clone()),
            _ => {}
        }
        rows.push(AuditRow {
            check: check.to_string(),
            params: params.clone(),
            x: w.x.to_string(),
            rho: w.rho.to_string(),
            y: w.y.to_string(),
            eps: w.eps.to_string(),
            verdict: match v {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Undecided => "inconclusive",
            }
            .to_string(),
        });
    }
    (outcome, rows)
}

fn validate_scales(grid: &GridSpec, rho0: Option<&Rational>) -> Result<(), FractalError> {
    if grid.radii.is_empty() {
        return Err(FractalError::InvalidGrid("no radii".into()));
    }
    for r in &grid.radii {
        if !r.is_positive() {
            return Err(FractalError::InvalidGrid(format!("radius {r} is not positive")));
        }
        if let Some(r0) = rho0 {
            if r > r0 {
                return Err(FractalError::InvalidGrid(format!("radius {r} exceeds rho0 = {r0}")));
            }
        }
    }
    for e in &grid.epsilons {
        if !e.is_positive() || *e >= Rational::one() {
            return Err(FractalError::InvalidGrid(format!("epsilon {e} not in (0, 1)")));
        }
    }
    Ok(())
}

/// `base^γ` against `u`, with `u ≤ 0` below every positive power.
fn cmp_pow(gamma: &Exponent, base: &Rational, u: &Rational) -> Option<Ordering> {
    if !u.is_positive() {
        return Some(Ordering::Greater);
    }
    gamma.cmp_pow(base, u)
}

/// Grid check of `μ(B(x,ρ) ∩ B(y,ερ)) < C ε^γ μ(B(x,ρ))`. Equality is a
/// failure.
pub fn check_absolute_decay(
    mu: &FractalMeasure,
    params: &DecayParams,
    grid: &GridSpec,
) -> Result<(AuditOutcome, Vec<AuditRow>), FractalError> {
    validate_scales(grid, Some(&params.rho0))?;
    if grid.epsilons.is_empty() {
        return Err(FractalError::InvalidGrid("no epsilons".into()));
    }
    let offsets = if grid.offsets.is_empty() {
        vec![Rational::zero()]
    } else {
        grid.offsets.clone()
    };
    let mut points = Vec::new();
    for x in grid.centers(mu) {
        for rho in &grid.radii {
            for t in &offsets {
                let y = &x + t * rho;
                for eps in &grid.epsilons {
                    points.push(Witness {
                        x: x.clone(),
                        rho: rho.clone(),
                        y: y.clone(),
                        eps: eps.clone(),
                    });
                }
            }
        }
    }
    let depth = grid.depth;
    let label = format!("C={} gamma={} rho0={}", params.c, params.gamma, params.rho0);
    Ok(run_grid("absolute_decay", label, points, |w| {
        let big = RatInterval::ball(&w.x, &w.rho);
        let small = RatInterval::ball(&w.y, &(&w.eps * &w.rho));
        let (l_lo, l_hi) = match big.intersection(&small) {
            Some(i) => interval_mass(mu, &i, depth),
            None => (Rational::zero(), Rational::zero()),
        };
        if l_hi.is_zero() {
            return Verdict::Pass;
        }
        let (m_lo, m_hi) = interval_mass(mu, &big, depth);
        // left < C ε^γ m  ⟺  ε^γ > left/(C m)
        if m_lo.is_positive() {
            if let Some(Ordering::Greater) = cmp_pow(&params.gamma, &w.eps, &(&l_hi / (&params.c * &m_lo))) {
                return Verdict::Pass;
            }
        }
        if l_lo.is_positive() {
            let u = &l_lo / (&params.c * &m_hi);
            if matches!(cmp_pow(&params.gamma, &w.eps, &u), Some(Ordering::Less | Ordering::Equal)) {
                return Verdict::Fail;
            }
        }
        Verdict::Undecided
    }))
}

fn ratio_points(mu: &FractalMeasure, grid: &GridSpec, eps0: &Rational) -> Vec<Witness> {
    let mut points = Vec::new();
    for x in grid.centers(mu) {
        for rho in &grid.radii {
            points.push(Witness {
                x: x.clone(),
                rho: rho.clone(),
                y: x.clone(),
                eps: eps0.clone(),
            });
        }
    }
    points
}

/// Grid check of `μ(B(x,ε₀ρ)) ≥ δ μ(B(x,ρ))`.
pub fn check_federer(
    mu: &FractalMeasure,
    eps0: &Rational,
    delta: &Rational,
    grid: &GridSpec,
) -> Result<(AuditOutcome, Vec<AuditRow>), FractalError> {
    validate_scales(grid, None)?;
    let depth = grid.depth;
    let label = format!("eps0={eps0} delta={delta}");
    Ok(run_grid("federer", label, ratio_points(mu, grid, eps0), |w| {
        let (s_lo, s_hi) = ball_mass(mu, &w.x, &(&w.rho * eps0), depth);
        let (b_lo, b_hi) = ball_mass(mu, &w.x, &w.rho, depth);
        if s_lo >= delta * &b_hi {
            Verdict::Pass
        } else if s_hi < delta * &b_lo {
            Verdict::Fail
        } else {
            Verdict::Undecided
        }
    }))
}

/// Grid check of `μ(B(x,ε₀ρ)) ≤ δ μ(B(x,ρ))`.
pub fn check_efd(
    mu: &FractalMeasure,
    eps0: &Rational,
    delta: &Rational,
    grid: &GridSpec,
) -> Result<(AuditOutcome, Vec<AuditRow>), FractalError> {
    validate_scales(grid, None)?;
    let depth = grid.depth;
    let label = format!("eps0={eps0} delta={delta}");
    Ok(run_grid("efd", label, ratio_points(mu, grid, eps0), |w| {
        let (s_lo, s_hi) = ball_mass(mu, &w.x, &(&w.rho * eps0), depth);
        let (b_lo, b_hi) = ball_mass(mu, &w.x, &w.rho, depth);
        if s_hi <= delta * &b_lo {
            Verdict::Pass
        } else if s_lo > delta * &b_hi {
            Verdict::Fail
        } else {
            Verdict::Undecided
        }
    }))
}

/// Grid check of `k₁ρ^γ ≤ μ(B(x,ρ)) ≤ k₂ρ^γ`.
pub fn check_power_law(
    mu: &FractalMeasure,
    k1: &Rational,
    k2: &Rational,
    gamma: &Exponent,
    grid: &GridSpec,
) -> Result<(AuditOutcome, Vec<AuditRow>), FractalError> {
    validate_scales(grid, None)?;
    let depth = grid.depth;
    let label = format!("k1={k1} k2={k2} gamma={gamma}");
    let one = Rational::one();
    Ok(run_grid("power_law", label, ratio_points(mu, grid, &one), |w| {
        let (m_lo, m_hi) = ball_mass(mu, &w.x, &w.rho, depth);
        // upper: ρ^γ ≥ m/k₂;  lower: ρ^γ ≤ m/k₁
        let up_ok = matches!(
            cmp_pow(gamma, &w.rho, &(&m_hi / k2)),
            Some(Ordering::Greater | Ordering::Equal)
        );
        let up_bad = m_lo.is_positive()
            && matches!(cmp_pow(gamma, &w.rho, &(&m_lo / k2)), Some(Ordering::Less));
        let low_ok = m_lo.is_positive()
            && matches!(cmp_pow(gamma, &w.rho, &(&m_lo / k1)), Some(Ordering::Less | Ordering::Equal));
        let low_bad = !m_hi.is_positive()
            || matches!(cmp_pow(gamma, &w.rho, &(&m_hi / k1)), Some(Ordering::Greater));
        if up_bad || low_bad {
            Verdict::Fail
        } else if up_ok && low_ok {
            Verdict::Pass
        } else {
            Verdict::Undecided
        }
    }))
}

/// Federer constants `(ε₀, δ)` as `(c, γ) = (δ, log δ/log ε₀)`.
pub fn federer_to_exponent(eps0: &Rational, delta: &Rational) -> (Rational, Exponent) {
    (delta.clone(), Exponent::log_ratio(delta, eps0))
}

/// Efd constants `(ε₀, δ)` as `(c, γ) = (1/δ, log δ/log ε₀)`.
pub fn efd_to_exponent(eps0: &Rational, delta: &Rational) -> (Rational, Exponent) {
    (delta.recip(), Exponent::log_ratio(delta, eps0))
}

/// Absolute decay from Federer `(c₁, γ₁)` and efd `(c₂, γ₂)` holding on
/// `ρ ≤ ρ₀`: `C = c₂c₁⁻¹3^{γ₁}`, `γ = γ₂`, valid for `ρ ≤ ρ₀/3`. When
/// `3^{γ₁}` is irrational `C` is a certified rational upper bound.
pub fn decay_from_federer_efd(
    c1: &Rational,
    gamma1: &Exponent,
    c2: &Rational,
    gamma2: &Exponent,
    rho0: &Rational,
) -> DecayParams {
    let three = numerics::int(3);
    let p = gamma1.pow_upper_bound(&three, 32);
    DecayParams {
        c: c2 / c1 * p,
        gamma: gamma2.clone(),
        rho0: rho0 / three,
    }
}

/// `(ε₀, δ)` constants of a ratio condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioConstants {
    #[serde(with = "numerics::serde_rational")]
    pub eps0: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub delta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerLawConstants {
    #[serde(with = "numerics::serde_rational")]
    pub k1: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub k2: Rational,
    pub gamma: Exponent,
}

/// A passed ratio condition with its exponent form `(c, γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    #[serde(flatten)]
    pub constants: RatioConstants,
    #[serde(with = "numerics::serde_rational")]
    pub c: Rational,
    pub gamma: Exponent,
}

/// Which checks to run and on which grids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditPlan {
    #[serde(default)]
    pub federer: Option<RatioConstants>,
    #[serde(default)]
    pub efd: Option<RatioConstants>,
    #[serde(default)]
    pub power_law: Option<PowerLawConstants>,
    #[serde(default)]
    pub decay: Option<DecayParams>,
    /// Grid for the absolute-decay check.
    pub grid: GridSpec,
    /// Grid for the ratio and power-law checks; defaults to `grid`.
    #[serde(default)]
    pub ratio_grid: Option<GridSpec>,
    /// `ρ₀` of the ratio conditions, used when decay constants are derived.
    #[serde(default, with = "numerics::serde_rational_opt")]
    pub ratio_rho0: Option<Rational>,
}

/// Constants that passed, with the CSV evidence and any witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureAuditReport {
    pub federer: Option<RatioReport>,
    pub efd: Option<RatioReport>,
    pub power_law: Option<PowerLawConstants>,
    pub decay: Option<DecayParams>,
    pub witnesses: Vec<(String, Witness)>,
    pub inconclusive: Vec<(String, Witness)>,
    #[serde(skip)]
    pub rows: Vec<AuditRow>,
}

impl MeasureAuditReport {
    /// True when every requested check passed on its grid.
    pub fn all_passed(&self) -> bool {
        self.witnesses.is_empty() && self.inconclusive.is_empty()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn record(name: &str, outcome: AuditOutcome, rows: Vec<AuditRow>, report: &mut MeasureAuditReport) -> bool {
    report.rows.extend(rows);
    match outcome {
        AuditOutcome::Pass => true,
        AuditOutcome::Fail(w) => {
            report.witnesses.push((name.to_string(), w));
            false
        }
        AuditOutcome::Inconclusive(w) => {
            report.inconclusive.push((name.to_string(), w));
            false
        }
    }
}

/// Runs the checks of `plan`. If Federer and efd pass and no decay
/// constants are given, the derived ones are audited as well.
pub fn run_audit(mu: &FractalMeasure, plan: &AuditPlan) -> Result<MeasureAuditReport, FractalError> {
    let ratio_grid = plan.ratio_grid.as_ref().unwrap_or(&plan.grid);
    let mut report = MeasureAuditReport {
        federer: None,
        efd: None,
        power_law: None,
        decay: None,
        witnesses: Vec::new(),
        inconclusive: Vec::new(),
        rows: Vec::new(),
    };
    let mut fed = None;
    if let Some(f) = &plan.federer {
        let (o, rows) = check_federer(mu, &f.eps0, &f.delta, ratio_grid)?;
        if record("federer", o, rows, &mut report) {
            let (c, g) = federer_to_exponent(&f.eps0, &f.delta);
            report.federer = Some(RatioReport {
                constants: f.clone(),
                c: c.clone(),
                gamma: g.clone(),
            });
            fed = Some((c, g));
        }
    }
    let mut efd = None;
    if let Some(f) = &plan.efd {
        let (o, rows) = check_efd(mu, &f.eps0, &f.delta, ratio_grid)?;
        if record("efd", o, rows, &mut report) {
            let (c, g) = efd_to_exponent(&f.eps0, &f.delta);
            report.efd = Some(RatioReport {
                constants: f.clone(),
                c: c.clone(),
                gamma: g.clone(),
            });
            efd = Some((c, g));
        }
    }
    if let Some(p) = &plan.power_law {
        let (o, rows) = check_power_law(mu, &p.k1, &p.k2, &p.gamma, ratio_grid)?;
        if record("power_law", o, rows, &mut report) {
            report.power_law = Some(p.clone());
        }
    }
    let decay = match (&plan.decay, fed, efd) {
        (Some(d), _, _) => Some(d.clone()),
        (None, Some((c1, g1)), Some((c2, g2))) => {
            let rho0 = plan.ratio_rho0.clone().unwrap_or_else(|| mu.hull().width());
            Some(decay_from_federer_efd(&c1, &g1, &c2, &g2, &rho0))
        }
        _ => None,
    };
    if let Some(d) = decay {
        let (o, rows) = check_absolute_decay(mu, &d, &plan.grid)?;
        if record("absolute_decay", o, rows, &mut report) {
            report.decay = Some(d);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::FractalSupport;
    use crate::numerics::{int, ratio};

    fn dyadic(count: usize, first: Rational) -> Vec<Rational> {
        GridSpec::geometric(&first, &ratio(1, 2), count)
    }

    pub(crate) fn lebesgue_grid() -> GridSpec {
        GridSpec {
            center_depth: 4,
            window: Some(RatInterval::new(ratio(1, 4), ratio(3, 4))),
            radii: dyadic(5, ratio(1, 4)),
            epsilons: dyadic(5, ratio(3, 4)),
            offsets: vec![ratio(-1, 1), ratio(-1, 2), int(0), ratio(1, 3), ratio(7, 8)],
            depth: 12,
        }
    }

    fn triadic_grid() -> GridSpec {
        GridSpec {
            center_depth: 4,
            window: None,
            radii: GridSpec::geometric(&int(1), &ratio(1, 3), 6),
            epsilons: vec![],
            offsets: vec![],
            depth: 12,
        }
    }

    #[test]
    fn conversions() {
        assert_eq!(
            federer_to_exponent(&ratio(1, 2), &ratio(1, 4)),
            (ratio(1, 4), Exponent::rational(int(2)))
        );
        assert_eq!(
            federer_to_exponent(&ratio(1, 2), &ratio(1, 2)),
            (ratio(1, 2), Exponent::rational(int(1)))
        );
        assert_eq!(efd_to_exponent(&ratio(1, 2), &ratio(1, 4)), (int(4), Exponent::rational(int(2))));
        let d = decay_from_federer_efd(
            &ratio(1, 4),
            &Exponent::rational(int(2)),
            &int(4),
            &Exponent::rational(int(1)),
            &int(1),
        );
        assert_eq!((d.c, d.gamma, d.rho0), (int(144), Exponent::rational(int(1)), ratio(1, 3)));
        let d = decay_from_federer_efd(&int(1), &Exponent::rational(int(1)), &int(1), &Exponent::rational(int(1)), &int(3));
        assert_eq!((d.c, d.rho0), (int(3), int(1)));
    }

    #[test]
    fn irrational_three_power_is_bounded_above() {
        let d = decay_from_federer_efd(
            &int(1),
            &Exponent::rational(ratio(1, 2)),
            &int(1),
            &Exponent::rational(int(1)),
            &int(1),
        );
        assert!(&d.c * &d.c > int(3));
        assert!(numerics::to_f64(&d.c) < 1.7321);
    }

    #[test]
    fn lebesgue_checks() {
        let l = FractalSupport::lebesgue_unit();
        let (o, rows) = check_absolute_decay(&l, &DecayParams::lebesgue(), &lebesgue_grid()).unwrap();
        assert_eq!(o, AuditOutcome::Pass);
        assert!(!rows.is_empty());
        let g = lebesgue_grid();
        assert!(check_federer(&l, &ratio(1, 2), &ratio(1, 2), &g).unwrap().0.passed());
        assert!(check_efd(&l, &ratio(1, 2), &ratio(3, 4), &g).unwrap().0.passed());
        assert!(check_power_law(&l, &int(1), &int(2), &Exponent::rational(int(1)), &g).unwrap().0.passed());
    }

    #[test]
    fn lebesgue_endpoint_reaches_equality() {
        // at x = 0 the ball is half outside the hull and the bound is attained
        let l = FractalSupport::lebesgue_unit();
        let g = GridSpec {
            center_depth: 0,
            window: None,
            radii: vec![ratio(1, 4)],
            epsilons: vec![ratio(1, 4)],
            offsets: vec![ratio(1, 2)],
            depth: 8,
        };
        let (o, _) = check_absolute_decay(&l, &DecayParams::lebesgue(), &g).unwrap();
        assert!(matches!(o, AuditOutcome::Fail(ref w) if w.x == int(0)));
    }

    #[test]
    fn cantor_ratio_conditions_on_triadic_scales() {
        let k = FractalSupport::cantor();
        let g = triadic_grid();
        assert!(check_federer(&k, &ratio(1, 3), &ratio(1, 2), &g).unwrap().0.passed());
        assert!(check_efd(&k, &ratio(1, 3), &ratio(1, 2), &g).unwrap().0.passed());
        let gamma = Exponent::log_ratio(&int(2), &int(3));
        assert!(check_power_law(&k, &ratio(1, 4), &int(4), &gamma, &g).unwrap().0.passed());
        let (o, _) = check_power_law(&k, &ratio(1, 4), &int(4), &Exponent::rational(int(1)), &g).unwrap();
        assert!(matches!(o, AuditOutcome::Fail(_)));
    }

    #[test]
    fn small_constant_fails() {
        let k = FractalSupport::cantor();
        let mut d = DecayParams::cantor();
        d.c = ratio(1, 10);
        let g = GridSpec {
            center_depth: 2,
            window: None,
            radii: vec![ratio(1, 3), ratio(1, 9)],
            epsilons: vec![ratio(1, 2)],
            offsets: vec![int(0)],
            depth: 10,
        };
        let (o, _) = check_absolute_decay(&k, &d, &g).unwrap();
        assert!(matches!(o, AuditOutcome::Fail(_)));
    }

    #[test]
    fn rejects_radius_above_rho0() {
        let k = FractalSupport::cantor();
        let mut g = triadic_grid();
        g.epsilons = vec![ratio(1, 2)];
        assert!(check_absolute_decay(&k, &DecayParams::cantor(), &g).is_err());
    }

    #[test]
    fn csv_rows() {
        let l = FractalSupport::lebesgue_unit();
        let plan = AuditPlan {
            federer: None,
            efd: None,
            power_law: None,
            decay: Some(DecayParams::lebesgue()),
            grid: lebesgue_grid(),
            ratio_grid: None,
            ratio_rho0: None,
        };
        let report = run_audit(&l, &plan).unwrap();
        assert!(report.all_passed());
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check,params,x,rho,y,eps,verdict"));
        assert!(text.lines().skip(1).all(|l| l.starts_with("absolute_decay,") && l.ends_with(",pass")));
    }
}
