use super::{FractalSupport, Membership};
use crate::numerics::{RatInterval, Rational};
use num_traits::Signed;

/// Levels searched beyond the depth at which cylinders become shorter than a
/// quarter of the shortest admissible piece.
const EXTRA_LEVELS: usize = 24;
/// Frontier size at which the search gives up.
const MAX_FRONTIER: usize = 1 << 16;

/// Open pieces of `inside` not covered by the closed `forbidden` intervals.
fn admissible_pieces(inside: &RatInterval, forbidden: &[RatInterval]) -> Vec<(Rational, Rational)> {
    let mut cuts: Vec<&RatInterval> = forbidden.iter().filter(|f| f.intersects(inside)).collect();
    cuts.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut pieces = Vec::new();
    let mut cursor = inside.lo.clone();
    for f in cuts {
        if f.lo > cursor {
            pieces.push((cursor.clone(), f.lo.clone().min(inside.hi.clone())));
        }
        if f.hi > cursor {
            cursor = f.hi.clone();
        }
    }
    if cursor < inside.hi {
        pieces.push((cursor, inside.hi.clone()));
    }
    pieces
}

fn allowed(x: &Rational, inside: &RatInterval, forbidden: &[RatInterval]) -> bool {
    inside.contains(x) && !forbidden.iter().any(|f| f.contains(x))
}

/// A point of `K` inside `inside` and outside every closed interval of
/// `forbidden`. Points come from cylinder images `w_u(p₀)` of the canonical
/// point, so membership is constructive.
pub fn find_point_in_gap(
    k: &FractalSupport,
    inside: &RatInterval,
    forbidden: &[RatInterval],
) -> Option<Rational> {
    if inside.is_point() {
        let x = &inside.lo;
        return (allowed(x, inside, forbidden) && k.membership(x) == Membership::Member)
            .then(|| x.clone());
    }
    let pieces = admissible_pieces(inside, forbidden);
    let shortest = pieces.iter().map(|(a, b)| b - a).min()?;
    // first depth with cylinder diameter below shortest/4
    let ratio = k.max_ratio();
    let mut diam = k.hull().width();
    let mut needed = 0usize;
    let quarter = &shortest / Rational::from_integer(4.into());
    while diam >= quarter {
        diam *= &ratio;
        needed += 1;
    }
    let max_depth = needed + EXTRA_LEVELS;
    let mut frontier = vec![k.root()];
    for _ in 0..=max_depth {
        let mut next = Vec::new();
        for c in &frontier {
            let p = k.cylinder_point(c);
            if allowed(&p, inside, forbidden) {
                return Some(p);
            }
        }
        for c in &frontier {
            for child in k.children(c) {
                let Some(part) = child.interval.intersection(inside) else {
                    continue;
                };
                if forbidden.iter().any(|f| f.contains_interval(&part)) {
                    continue;
                }
                next.push(child);
            }
        }
        if next.is_empty() || next.len() > MAX_FRONTIER {
            return None;
        }
        frontier = next;
    }
    None
}

/// A cylinder point of `K` in `window` as close to `target` as the search
/// resolution `tol` allows, or `None` when no cylinder point of `window` is
/// found.
pub fn nearest_point(
    k: &FractalSupport,
    target: &Rational,
    window: &RatInterval,
    tol: &Rational,
) -> Option<Rational> {
    let mut best: Option<(Rational, Rational)> = None;
    let mut stack = vec![k.root()];
    let mut visited = 0usize;
    while let Some(c) = stack.pop() {
        visited += 1;
        if visited > MAX_FRONTIER {
            break;
        }
        let Some(part) = c.interval.intersection(window) else {
            continue;
        };
        let bound = part.dist_to(target);
        if let Some((d, _)) = &best {
            if bound >= *d {
                continue;
            }
        }
        let p = k.cylinder_point(&c);
        if window.contains(&p) {
            let d = (&p - target).abs();
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, p));
            }
        }
        if c.diameter() > *tol {
            // visit the child nearest to the target last so it pops first
            let mut kids = k.children(&c);
            kids.sort_by(|a, b| b.interval.dist_to(target).cmp(&a.interval.dist_to(target)));
            stack.extend(kids);
        }
    }
    best.map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};
    use proptest::prelude::*;

    fn iv(a: Rational, b: Rational) -> RatInterval {
        RatInterval::new(a, b)
    }

    #[test]
    fn examples() {
        let k = FractalSupport::cantor();
        let p = find_point_in_gap(&k, &iv(int(0), int(1)), &[iv(ratio(2, 5), ratio(3, 5))]).unwrap();
        assert_eq!(k.membership(&p), Membership::Member);
        assert!(!(ratio(2, 5) <= p && p <= ratio(3, 5)));
        let q = find_point_in_gap(&k, &iv(int(0), ratio(1, 3)), &[]).unwrap();
        assert!(q <= ratio(1, 3) && k.contains(&q));
        assert_eq!(find_point_in_gap(&k, &iv(ratio(2, 5), ratio(3, 5)), &[]), None);
    }

    #[test]
    fn gap_oracle_depth_ten() {
        // no depth-10 cylinder meets (0.4, 0.6)
        let k = FractalSupport::cantor();
        let window = iv(ratio(2, 5), ratio(3, 5));
        assert!(k.cylinders(10).iter().all(|c| !c.interval.intersects(&window)));
    }

    #[test]
    fn squeezed_gap() {
        let k = FractalSupport::cantor();
        // only K ∩ [0.24, 0.26] survives; 1/4 ∈ K is there
        let p = find_point_in_gap(
            &k,
            &iv(int(0), int(1)),
            &[iv(int(0), ratio(24, 100)), iv(ratio(26, 100), int(1))],
        )
        .unwrap();
        assert!(ratio(24, 100) < p && p < ratio(26, 100));
        assert!(k.contains(&p));
    }

    proptest! {
        #[test]
        fn returned_points_are_members(a in 0i64..200, w in 1i64..100, f in 0i64..200, fw in 0i64..30) {
            let k = FractalSupport::cantor();
            let inside = iv(ratio(a, 200), ratio(a + w, 200));
            let forb = [RatInterval::ball(&ratio(f, 200), &ratio(fw, 400))];
            if let Some(p) = find_point_in_gap(&k, &inside, &forb) {
                prop_assert!(inside.contains(&p));
                prop_assert!(!forb[0].contains(&p));
                prop_assert_eq!(k.membership(&p), Membership::Member);
            }
        }
    }

    #[test]
    fn pieces() {
        let p = admissible_pieces(&iv(int(0), int(1)), &[iv(ratio(1, 4), ratio(1, 2)), iv(ratio(1, 3), ratio(3, 4))]);
        assert_eq!(p, vec![(int(0), ratio(1, 4)), (ratio(3, 4), int(1))]);
    }

    #[test]
    fn nearest_point_approaches_target() {
        let k = FractalSupport::cantor();
        let w = iv(int(0), int(1));
        let p = nearest_point(&k, &ratio(1, 2), &w, &ratio(1, 1000)).unwrap();
        assert_eq!(p, ratio(2, 3));
        let q = nearest_point(&k, &ratio(1, 4), &w, &ratio(1, 100000)).unwrap();
        assert!((q - ratio(1, 4)).abs() < ratio(1, 10000));
        assert_eq!(nearest_point(&k, &int(0), &iv(ratio(2, 5), ratio(3, 5)), &ratio(1, 100)), None);
    }
}
