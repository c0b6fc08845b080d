use super::{Cylinder, FractalMeasure};
use crate::numerics::{RatInterval, Rational};
use num_traits::Zero;

/// Two-sided exact bounds on `μ(window)` from cylinders of depth at most
/// `depth`: cylinders inside the window count towards both bounds, cylinders
/// still straddling its boundary at `depth` count towards the upper bound
/// only. Cylinders meeting the window in a single point are skipped: a
/// self-similar measure with at least two maps has no atoms.
pub fn interval_mass(mu: &FractalMeasure, window: &RatInterval, depth: usize) -> (Rational, Rational) {
    let mut lower = Rational::zero();
    let mut upper = Rational::zero();
    let mut stack: Vec<(Cylinder, usize)> = vec![(mu.root(), 0)];
    while let Some((c, d)) = stack.pop() {
        match c.interval.intersection(window) {
            Some(part) if !part.is_point() => {}
            _ => continue,
        }
        if window.contains_interval(&c.interval) {
            lower += &c.mass;
            upper += &c.mass;
        } else if d >= depth {
            upper += &c.mass;
        } else {
            for child in mu.children(&c) {
                stack.push((child, d + 1));
            }
        }
    }
    (lower, upper)
}

/// Bounds on `μ(B(center, radius))`; see [`interval_mass`].
pub fn ball_mass(mu: &FractalMeasure, center: &Rational, radius: &Rational, depth: usize) -> (Rational, Rational) {
    assert!(radius > &Rational::zero(), "ball radius must be positive");
    interval_mass(mu, &RatInterval::ball(center, radius), depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::FractalSupport;
    use crate::numerics::{int, pow, ratio};
    use proptest::prelude::*;

    #[test]
    fn cantor_examples() {
        let k = FractalSupport::cantor();
        assert_eq!(ball_mass(&k, &int(0), &ratio(1, 3), 2), (ratio(1, 2), ratio(1, 2)));
        let (lo, hi) = ball_mass(&k, &ratio(1, 2), &ratio(1, 6), 4);
        assert_eq!(lo, int(0));
        assert!(hi <= ratio(1, 8));
        let (_, hi8) = ball_mass(&k, &ratio(1, 2), &ratio(1, 6), 8);
        assert!(hi8 <= hi);
        assert_eq!(ball_mass(&k, &ratio(1, 2), &int(1), 1), (int(1), int(1)));
    }

    #[test]
    fn triadic_balls_are_exact() {
        // x ∈ K and ρ = 3^{-j}: the ball holds exactly the level-j cylinder of x
        let k = FractalSupport::cantor();
        for c in k.cylinders(4) {
            let x = k.cylinder_point(&c);
            for j in 0..4 {
                let rho = pow(&ratio(1, 3), j);
                let (lo, hi) = ball_mass(&k, &x, &rho, 8);
                assert_eq!(lo, hi);
                assert_eq!(lo, pow(&ratio(1, 2), j));
            }
        }
    }

    #[test]
    fn lebesgue_lengths() {
        let l = FractalSupport::lebesgue_unit();
        let w = RatInterval::new(ratio(3, 16), ratio(11, 16));
        assert_eq!(interval_mass(&l, &w, 4), (ratio(1, 2), ratio(1, 2)));
        let (lo, hi) = interval_mass(&l, &RatInterval::new(ratio(1, 3), ratio(2, 3)), 10);
        assert!(lo <= ratio(1, 3) && ratio(1, 3) <= hi);
    }

    proptest! {
        #[test]
        fn bounds_monotone_in_depth(n in 0i64..81, w in 1i64..40, d in 1usize..7) {
            let k = FractalSupport::cantor();
            let x = ratio(n, 81);
            let rho = ratio(w, 97);
            let (l1, u1) = ball_mass(&k, &x, &rho, d);
            let (l2, u2) = ball_mass(&k, &x, &rho, d + 1);
            prop_assert!(l1 <= l2);
            prop_assert!(u2 <= u1);
            prop_assert!(l2 <= u2);
        }
    }
}
