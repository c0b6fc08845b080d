use super::AliceError;
use crate::fractal::{find_point_in_gap, FractalSupport};
use crate::game::Ball;
use crate::numerics::{self, RatInterval, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// At most half of the points are near the center, which is kept.
    KeepCenter,
    /// The center moved into a gap away from the crowded middle.
    Moved,
}

#[derive(Debug, Clone)]
pub struct Avoidance {
    pub ball: Ball,
    pub branch: Branch,
    /// Points with `d(ball, y) > αρ`.
    pub cleared: usize,
    /// Points at distance exactly `αρ`, which the strict bound misses.
    pub boundary_hits: usize,
}

/// One application of the halving lemma: Alice answers `ball = B(x, ρ)` with
/// `B(x', αρ)`, `x' ∈ K`, such that at least half of `points` end at distance
/// more than `αρ` from her ball. Points outside `ball` are always cleared.
///
/// The caller is responsible for `ρ ≤ ρ₀` and for `α` satisfying the decay
/// bound of `K`; when they fail the gap search may come back empty.
pub fn avoidance_step(
    k: &FractalSupport,
    ball: &Ball,
    alpha: &Rational,
    points: &[Rational],
) -> Result<Avoidance, AliceError> {
    if !k.contains(&ball.center) {
        return Err(AliceError::Precondition(format!("center {} is not in K", ball.center)));
    }
    let rho = &ball.radius;
    let a_rho = alpha * rho;
    let two = &a_rho * numerics::int(2);
    let four = &a_rho * numerics::int(4);
    let crowded = points.iter().filter(|y| (*y - &ball.center).abs() <= two).count();
    let (center, branch) = if 2 * crowded <= points.len() {
        (ball.center.clone(), Branch::KeepCenter)
    } else {
        let forbidden = [
            RatInterval::ball(&(&ball.center - rho), &four),
            RatInterval::ball(&ball.center, &four),
            RatInterval::ball(&(&ball.center + rho), &four),
        ];
        let x = find_point_in_gap(k, &ball.interval(), &forbidden).ok_or_else(|| {
            AliceError::NoPointFound(format!("no point of K in {} outside the forbidden balls", ball))
        })?;
        (x, Branch::Moved)
    };
    let out = Ball::new(center, a_rho);
    check_post(ball, &out, points, branch, &two)
}

fn check_post(
    outer: &Ball,
    out: &Ball,
    points: &[Rational],
    branch: Branch,
    two: &Rational,
) -> Result<Avoidance, AliceError> {
    if !out.nested_in(outer) {
        return Err(AliceError::Postcondition(format!("{out} is not inside {outer}")));
    }
    let mut cleared = 0;
    let mut boundary_hits = 0;
    for y in points {
        let d = (y - &out.center).abs();
        if d > *two {
            cleared += 1;
        } else if d == *two {
            boundary_hits += 1;
        }
    }
    if 2 * cleared < points.len() {
        return Err(AliceError::Postcondition(format!(
            "only {cleared} of {} points cleared by {out}",
            points.len()
        )));
    }
    Ok(Avoidance {
        ball: out.clone(),
        branch,
        cleared,
        boundary_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    #[test]
    fn nothing_to_avoid() {
        let k = FractalSupport::cantor();
        let b = Ball::new(ratio(1, 3), ratio(1, 9));
        let a = avoidance_step(&k, &b, &ratio(1, 12), &[]).unwrap();
        assert_eq!(a.ball, Ball::new(ratio(1, 3), ratio(1, 108)));
    }

    #[test]
    fn far_point_keeps_center() {
        let k = FractalSupport::cantor();
        let b = Ball::new(int(0), ratio(1, 9));
        let a = avoidance_step(&k, &b, &ratio(1, 12), &[int(10)]).unwrap();
        assert_eq!(a.branch, Branch::KeepCenter);
        assert_eq!(a.ball.center, int(0));
    }

    #[test]
    fn center_point_is_avoided() {
        let k = FractalSupport::cantor();
        let b = Ball::new(ratio(1, 3), ratio(1, 9));
        let alpha = ratio(1, 1024);
        let a = avoidance_step(&k, &b, &alpha, &[ratio(1, 3)]).unwrap();
        assert_eq!(a.branch, Branch::Moved);
        let x = &a.ball.center;
        assert!(k.contains(x));
        assert!((x - ratio(1, 3)).abs() > ratio(4, 9 * 1024));
        assert!(a.ball.nested_in(&b));
        assert_eq!(a.cleared, 1);
    }

    #[test]
    fn oversized_alpha_leaves_no_gap() {
        // with α = 1/12 the admissible part of B(1/3, 1/9) is
        // (7/27, 8/27) ∪ (10/27, 11/27), which misses K
        let k = FractalSupport::cantor();
        let b = Ball::new(ratio(1, 3), ratio(1, 9));
        assert!(matches!(
            avoidance_step(&k, &b, &ratio(1, 12), &[ratio(1, 3)]),
            Err(AliceError::NoPointFound(_))
        ));
    }

    #[test]
    fn center_outside_k_is_rejected() {
        let k = FractalSupport::cantor();
        let b = Ball::new(ratio(1, 2), ratio(1, 9));
        assert!(matches!(
            avoidance_step(&k, &b, &ratio(1, 12), &[]),
            Err(AliceError::Precondition(_))
        ));
    }
}
