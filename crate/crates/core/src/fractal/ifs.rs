use super::FractalError;
use crate::numerics::{self, parse_rational, RatInterval, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Contracting similarity `x ↦ r·x + a` with `0 < |r| < 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Similarity {
    #[serde(with = "numerics::serde_rational")]
    pub r: Rational,
    #[serde(with = "numerics::serde_rational")]
    pub a: Rational,
}

impl Similarity {
    pub fn new(r: Rational, a: Rational) -> Self {
        Similarity { r, a }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.r * x + &self.a
    }

    pub fn preimage(&self, x: &Rational) -> Rational {
        (x - &self.a) / &self.r
    }

    pub fn fixed_point(&self) -> Rational {
        &self.a / (Rational::one() - &self.r)
    }

    pub fn image(&self, i: &RatInterval) -> RatInterval {
        RatInterval::spanning(self.apply(&i.lo), self.apply(&i.hi))
    }
}

/// Finite system of similarities with probability weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ifs {
    pub maps: Vec<Similarity>,
    #[serde(with = "numerics::serde_rational_vec")]
    pub weights: Vec<Rational>,
}

/// The attractor `K` of an IFS, a hull interval with `w_i(hull) ⊆ hull`, and
/// the self-similar measure given by the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractalSupport {
    ifs: Ifs,
    hull: RatInterval,
    canonical: Rational,
}

/// The measure lives on the same object as its support.
pub type FractalMeasure = FractalSupport;

/// JSON shape: `{"maps":[{"r":"1/3","a":"0"},…],"weights":[…],"hull":["0","1"]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IfsDocument {
    pub maps: Vec<Similarity>,
    pub weights: Vec<String>,
    pub hull: [String; 2],
}

/// Image of the hull under a finite word of maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub word: Vec<usize>,
    pub interval: RatInterval,
    pub mass: Rational,
    // composite map w_word(x) = slope·x + offset
    slope: Rational,
    offset: Rational,
}

impl Cylinder {
    pub fn map(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    pub fn diameter(&self) -> Rational {
        self.interval.width()
    }
}

/// Result of an exact membership search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotMember,
    Unknown,
}

const MEMBERSHIP_STEPS: usize = 20_000;

impl FractalSupport {
    pub fn new(ifs: Ifs, hull: RatInterval) -> Result<Self, FractalError> {
        if ifs.maps.is_empty() {
            return Err(FractalError::InvalidIfs("no maps".into()));
        }
        if ifs.maps.len() != ifs.weights.len() {
            return Err(FractalError::InvalidIfs("one weight per map required".into()));
        }
        if ifs.weights.iter().any(|w| !w.is_positive()) {
            return Err(FractalError::InvalidIfs("weights must be positive".into()));
        }
        let total: Rational = ifs.weights.iter().sum();
        if !total.is_one() {
            return Err(FractalError::InvalidIfs(format!("weights sum to {total}, not 1")));
        }
        for m in &ifs.maps {
            if m.r.is_zero() || m.r.abs() >= Rational::one() {
                return Err(FractalError::InvalidIfs(format!("ratio {} is not contracting", m.r)));
            }
            if !hull.contains_interval(&m.image(&hull)) {
                return Err(FractalError::InvalidIfs("hull is not mapped into itself".into()));
            }
        }
        // open set condition spot check on the open hull
        let images: Vec<RatInterval> = ifs.maps.iter().map(|m| m.image(&hull)).collect();
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                let (a, b) = (&images[i], &images[j]);
                if a.lo < b.hi && b.lo < a.hi {
                    return Err(FractalError::InvalidIfs(format!(
                        "images of maps {i} and {j} overlap"
                    )));
                }
            }
        }
        if ifs.maps.len() > 1 {
            let p = ifs.maps[0].fixed_point();
            if ifs.maps.iter().all(|m| m.fixed_point() == p) {
                return Err(FractalError::InvalidIfs("maps share a fixed point".into()));
            }
        } else {
            return Err(FractalError::InvalidIfs("a single map has a one-point attractor".into()));
        }
        let canonical = ifs.maps[0].fixed_point();
        Ok(FractalSupport {
            ifs,
            hull,
            canonical,
        })
    }

    pub fn from_document(doc: &IfsDocument) -> Result<Self, FractalError> {
        let weights = doc
            .weights
            .iter()
            .map(|w| parse_rational(w))
            .collect::<Result<Vec<_>, _>>()?;
        let hull = RatInterval::spanning(parse_rational(&doc.hull[0])?, parse_rational(&doc.hull[1])?);
        FractalSupport::new(
            Ifs {
                maps: doc.maps.clone(),
                weights,
            },
            hull,
        )
    }

    pub fn to_document(&self) -> IfsDocument {
        IfsDocument {
            maps: self.ifs.maps.clone(),
            weights: self.ifs.weights.iter().map(numerics::format_rational).collect(),
            hull: [self.hull.lo.to_string(), self.hull.hi.to_string()],
        }
    }

    /// Middle-third Cantor set with the coin-flipping measure.
    pub fn cantor() -> Self {
        let third = numerics::ratio(1, 3);
        let half = numerics::ratio(1, 2);
        FractalSupport::new(
            Ifs {
                maps: vec![
                    Similarity::new(third.clone(), Rational::zero()),
                    Similarity::new(third, numerics::ratio(2, 3)),
                ],
                weights: vec![half.clone(), half],
            },
            RatInterval::new(Rational::zero(), Rational::one()),
        )
        .expect("cantor system is valid")
    }

    /// Lebesgue measure on `[0, 1]` as the two-halves system.
    pub fn lebesgue_unit() -> Self {
        let half = numerics::ratio(1, 2);
        FractalSupport::new(
            Ifs {
                maps: vec![
                    Similarity::new(half.clone(), Rational::zero()),
                    Similarity::new(half.clone(), half.clone()),
                ],
                weights: vec![half.clone(), half],
            },
            RatInterval::new(Rational::zero(), Rational::one()),
        )
        .expect("unit interval system is valid")
    }

    pub fn ifs(&self) -> &Ifs {
        &self.ifs
    }

    pub fn hull(&self) -> &RatInterval {
        &self.hull
    }

    /// Fixed point of the first map; every constructed point of `K` is an
    /// image of it under a cylinder word.
    pub fn canonical_point(&self) -> &Rational {
        &self.canonical
    }

    /// Largest `|r_i|`.
    pub fn max_ratio(&self) -> Rational {
        self.ifs.maps.iter().map(|m| m.r.abs()).max().unwrap()
    }

    pub fn root(&self) -> Cylinder {
        Cylinder {
            word: Vec::new(),
            interval: self.hull.clone(),
            mass: Rational::one(),
            slope: Rational::one(),
            offset: Rational::zero(),
        }
    }

    pub fn children(&self, c: &Cylinder) -> Vec<Cylinder> {
        self.ifs
            .maps
            .iter()
            .zip(&self.ifs.weights)
            .enumerate()
            .map(|(i, (m, w))| {
                let slope = &c.slope * &m.r;
                let offset = &c.slope * &m.a + &c.offset;
                let interval = RatInterval::spanning(
                    &slope * &self.hull.lo + &offset,
                    &slope * &self.hull.hi + &offset,
                );
                let mut word = c.word.clone();
                word.push(i);
                Cylinder {
                    word,
                    interval,
                    mass: &c.mass * w,
                    slope,
                    offset,
                }
            })
            .collect()
    }

    pub fn cylinder(&self, word: &[usize]) -> Cylinder {
        let mut c = self.root();
        for &i in word {
            c = self.children(&c).swap_remove(i);
        }
        c
    }

    /// All cylinders of the given depth, in word order.
    pub fn cylinders(&self, depth: usize) -> Vec<Cylinder> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            level = level.iter().flat_map(|c| self.children(c)).collect();
        }
        level
    }

    /// The point `w_word(p₀)` of `K`.
    pub fn cylinder_point(&self, c: &Cylinder) -> Rational {
        c.map(&self.canonical)
    }

    /// Cylinders meeting `window`, refined until each has diameter at most
    /// `max_diam`.
    pub fn cover(&self, window: &RatInterval, max_diam: &Rational) -> Vec<Cylinder> {
        let mut out = Vec::new();
        let mut frontier = vec![self.root()];
        while let Some(c) = frontier.pop() {
            if !c.interval.intersects(window) {
                continue;
            }
            if c.diameter() <= *max_diam {
                out.push(c);
            } else {
                let mut kids = self.children(&c);
                kids.reverse();
                frontier.extend(kids);
            }
        }
        out.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
        out
    }

    /// Decides `x ∈ K` by following inverse branches. A return to an earlier
    /// point of the current branch exhibits `x` as the image of a periodic
    /// point, which proves membership.
    pub fn membership(&self, x: &Rational) -> Membership {
        if !self.hull.contains(x) {
            return Membership::NotMember;
        }
        let mut path: Vec<(Rational, usize)> = vec![(x.clone(), 0)];
        let mut on_path: HashSet<Rational> = HashSet::from([x.clone()]);
        let mut dead: HashSet<Rational> = HashSet::new();
        let mut steps = 0;
        let images: Vec<RatInterval> = self.ifs.maps.iter().map(|m| m.image(&self.hull)).collect();
        while let Some((point, next)) = path.last_mut() {
            steps += 1;
            if steps > MEMBERSHIP_STEPS {
                return Membership::Unknown;
            }
            let point = point.clone();
            let mut advanced = false;
            while *next < images.len() {
                let i = *next;
                *next += 1;
                if images[i].contains(&point) {
                    let pre = self.ifs.maps[i].preimage(&point);
                    if on_path.contains(&pre) {
                        return Membership::Member;
                    }
                    if dead.contains(&pre) {
                        continue;
                    }
                    on_path.insert(pre.clone());
                    path.push((pre, 0));
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                let (p, _) = path.pop().unwrap();
                on_path.remove(&p);
                dead.insert(p);
            }
        }
        Membership::NotMember
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.membership(x) == Membership::Member
    }

    /// Depth-`depth` cylinders whose interval contains `x` (two at shared
    /// endpoints).
    pub fn address_cylinders(&self, x: &Rational, depth: usize) -> Vec<Cylinder> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            level = level
                .iter()
                .flat_map(|c| self.children(c))
                .filter(|c| c.interval.contains(x))
                .collect();
        }
        level.retain(|c| c.interval.contains(x));
        level
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, ratio};

    #[test]
    fn cantor_cylinders() {
        let k = FractalSupport::cantor();
        let c = k.cylinder(&[0, 1]);
        assert_eq!(c.interval, RatInterval::new(ratio(2, 9), ratio(1, 3)));
        assert_eq!(c.mass, ratio(1, 4));
        assert_eq!(k.cylinder_point(&c), ratio(2, 9));
        for d in 0..6 {
            let total: Rational = k.cylinders(d).iter().map(|c| c.mass.clone()).sum();
            assert_eq!(total, int(1));
        }
    }

    #[test]
    fn cylinder_length_invariant() {
        let k = FractalSupport::cantor();
        for c in k.cylinders(5) {
            let expect = numerics::pow(&ratio(1, 3), 5) * k.hull().width();
            assert_eq!(c.diameter(), expect);
            assert!(c.mass > int(0));
        }
    }

    #[test]
    fn membership_cases() {
        let k = FractalSupport::cantor();
        assert_eq!(k.membership(&ratio(1, 4)), Membership::Member);
        assert_eq!(k.membership(&ratio(3, 4)), Membership::Member);
        assert_eq!(k.membership(&ratio(2, 3)), Membership::Member);
        assert_eq!(k.membership(&ratio(1, 2)), Membership::NotMember);
        assert_eq!(k.membership(&ratio(2, 5)), Membership::NotMember);
        assert_eq!(k.membership(&int(2)), Membership::NotMember);
        let deep = k.cylinder_point(&k.cylinder(&[1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0]));
        assert_eq!(k.membership(&deep), Membership::Member);
        let l = FractalSupport::lebesgue_unit();
        assert_eq!(l.membership(&ratio(1, 2)), Membership::Member);
        assert_eq!(l.membership(&ratio(1, 3)), Membership::Member);
    }

    #[test]
    fn rejects_bad_systems() {
        let half = ratio(1, 2);
        let doc = |r: &str, w: [&str; 2]| IfsDocument {
            maps: vec![
                Similarity::new(parse_rational(r).unwrap(), int(0)),
                Similarity::new(parse_rational(r).unwrap(), int(1) - parse_rational(r).unwrap()),
            ],
            weights: w.iter().map(|s| s.to_string()).collect(),
            hull: ["0".into(), "1".into()],
        };
        assert!(FractalSupport::from_document(&doc("1/3", ["1/2", "1/2"])).is_ok());
        assert!(FractalSupport::from_document(&doc("2/3", ["1/2", "1/2"])).is_err());
        assert!(FractalSupport::from_document(&doc("1/3", ["1/2", "1/3"])).is_err());
        assert!(FractalSupport::from_document(&doc("1", ["1/2", "1/2"])).is_err());
        let _ = half;
    }

    #[test]
    fn parses_reference_json() {
        let json = r#"{"maps":[{"r":"1/3","a":"0"},{"r":"1/3","a":"2/3"}],"weights":["1/2","1/2"],"hull":["0","1"]}"#;
        let doc: IfsDocument = serde_json::from_str(json).unwrap();
        assert_eq!(FractalSupport::from_document(&doc).unwrap(), FractalSupport::cantor());
    }
}
