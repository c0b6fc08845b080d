use super::{AliceError, LacunaryBase, LacunarySpec, Targets, Terms};
use crate::numerics::{self, CirclePoint, Rational};
use num_traits::One;

/// Targets `y_n = y − c(bⁿ − 1)/(b − 1) mod 1`, for which
/// `π(f^n(x)) = y` with `f(x) = bx + c` is equivalent to `π(bⁿx) = y_n`.
pub fn affine_targets(b: u64, c: &CirclePoint, y: &CirclePoint, n_max: usize) -> Vec<CirclePoint> {
    let bq = Rational::from_integer(b.into());
    let mut geometric = Rational::one();
    (1..=n_max)
        .map(|_| {
            geometric *= &bq;
            let sum = (&geometric - Rational::one()) / (&bq - Rational::one());
            CirclePoint::new(y.value() - c.value() * sum)
        })
        .collect()
}

/// The lacunary data `(bⁿ)`, `(y_n)` of the affine orbit `x ↦ bx + c mod 1`
/// with target `y`, up to index `n_max`.
pub fn affine_to_sequence(b: u64, c: &CirclePoint, y: &CirclePoint, n_max: usize) -> Result<LacunarySpec, AliceError> {
    if b < 2 {
        return Err(AliceError::InvalidSpec(format!("affine base {b} must be at least 2")));
    }
    if n_max == 0 {
        return Err(AliceError::InvalidSpec("affine horizon must be positive".into()));
    }
    LacunarySpec::new(
        Terms::Geometric(LacunaryBase::Rational(numerics::int(b as i64))),
        None,
        Targets::Explicit(affine_targets(b, c, y, n_max)),
        Some(n_max),
    )
}

/// `f^n(x) mod 1` for `f(x) = bx + c`, by direct iteration.
pub fn iterate_affine(b: u64, c: &CirclePoint, x: &Rational, n: usize) -> CirclePoint {
    let bq = Rational::from_integer(b.into());
    let mut v = CirclePoint::new(x.clone());
    for _ in 0..n {
        v = CirclePoint::new(&bq * v.value() + c.value());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    #[test]
    fn examples() {
        let zero = CirclePoint::zero();
        let y = CirclePoint::new(ratio(1, 5));
        assert!(affine_targets(2, &zero, &y, 6).iter().all(|t| *t == y));
        let half = CirclePoint::new(ratio(1, 2));
        assert!(affine_targets(2, &half, &zero, 20).iter().all(|t| *t == half));
        let t = affine_targets(3, &CirclePoint::new(ratio(1, 3)), &zero, 2);
        assert_eq!(t[1], CirclePoint::new(ratio(2, 3)));
        assert_eq!(iterate_affine(3, &CirclePoint::new(ratio(1, 3)), &int(0), 2), CirclePoint::new(ratio(4, 3)));
    }

    #[test]
    fn base_one_rejected() {
        assert!(affine_to_sequence(1, &CirclePoint::zero(), &CirclePoint::zero(), 5).is_err());
    }
}
