//! Periodic points, minimal periods, the Sharkovskii order and L-schemes.

use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::{PLMap, Side, SidedPoint};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoint {
    pub x: Rat,
    pub minimal_period: usize,
    pub reversing: bool,
}

/// An interval on which `f^n` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicContinuum {
    pub interval: Interval,
    /// Least `d` with `f^d` the identity on the whole interval.
    pub minimal_period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PeriodicPoints {
    pub points: Vec<PeriodicPoint>,
    pub continua: Vec<PeriodicContinuum>,
}

impl PeriodicPoints {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Where `f^m` sends a one-sided neighbourhood of a periodic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalImage {
    /// No neighbourhood on that side (the point is an endpoint of [0,1]).
    Missing,
    /// `f^m` is constant on the neighbourhood.
    Collapsed,
    /// The image lies on this side of the point.
    Onto(Side),
}

/// The one-sided image of `W_side(z)` under `f^m`, found by iterating pairs.
pub fn local_image(map: &PLMap, z: &Rat, m: usize, side: Side) -> LocalImage {
    if (side == Side::L && z.is_zero()) || (side == Side::R && z == &rat::one()) {
        return LocalImage::Missing;
    }
    let mut p = SidedPoint::new(z.clone(), side);
    for _ in 0..m {
        match map.pair_image(&p) {
            Some(q) => p = q,
            None => return LocalImage::Collapsed,
        }
    }
    LocalImage::Onto(p.side)
}

/// Product of one-sided slopes of `f^m` at `z` along its orbit.
pub fn one_sided_slope(map: &PLMap, z: &Rat, m: usize, side: Side) -> Option<Rat> {
    let mut p = SidedPoint::new(z.clone(), side);
    let mut prod = rat::one();
    for _ in 0..m {
        let s = map.slope_on_side(&p.x, p.side)?;
        prod *= &s;
        match map.pair_image(&p) {
            Some(q) => p = q,
            None => return Some(Rat::zero()),
        }
    }
    Some(prod)
}

/// True iff `f^m` maps the right side of `z` into `[0,z]` and the left side into `[z,1]`.
pub fn is_reversing(map: &PLMap, z: &Rat, m: usize) -> Result<bool> {
    if m == 0 || !rat::in_unit(z) || map.iterate(z, m) != *z {
        return Err(Error::pre(format!("{} is not {m}-periodic", rat::show(z))));
    }
    Ok(reversing_at(map, z, m))
}

fn reversing_at(map: &PLMap, z: &Rat, m: usize) -> bool {
    let right_goes_left = !matches!(local_image(map, z, m, Side::R), LocalImage::Onto(Side::R));
    let left_goes_right = !matches!(local_image(map, z, m, Side::L), LocalImage::Onto(Side::L));
    right_goes_left && left_goes_right
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn minimal_period(map: &PLMap, x: &Rat, n: usize) -> Option<usize> {
    let mut y = x.clone();
    for k in 1..=n {
        y = map.at(&y);
        if &y == x {
            return n.is_multiple_of(k).then_some(k);
        }
    }
    None
}

/// Fixed points of a power `g = f^n` given by its knots, before labelling.
pub(crate) fn raw_fixed_knots(knots: &[(Rat, Rat)]) -> (Vec<Rat>, Vec<Interval>) {
    let mut pts: BTreeSet<Rat> = BTreeSet::new();
    let mut cont: Vec<Interval> = Vec::new();
    let one = Rat::one();
    if let [(x, y)] = knots {
        if x == y {
            pts.insert(x.clone());
        }
    }
    for w in knots.windows(2) {
        let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
        let s = (y1 - y0) / (x1 - x0);
        if s == one {
            if y0 == x0 {
                cont.push(Interval::new(x0.clone(), x1.clone()));
            }
            continue;
        }
        let x = (y0 - &s * x0) / (&one - &s);
        if &x >= x0 && &x <= x1 {
            pts.insert(x);
        }
    }
    let cont = IntervalSet::from_intervals(cont).into_components();
    let pts = pts.into_iter().filter(|p| !cont.iter().any(|c| c.contains(p))).collect();
    (pts, cont)
}

fn raw_fixed(g: &PLMap) -> (Vec<Rat>, Vec<Interval>) {
    let knots: Vec<(Rat, Rat)> = g.knots().map(|(x, y)| (x.clone(), y.clone())).collect();
    raw_fixed_knots(&knots)
}

/// Fills `powers` so that `powers[d - 1] = f^d` for every `d <= n`.
pub(crate) fn ensure_powers(map: &PLMap, powers: &mut Vec<PLMap>, n: usize, cap: usize) -> Result<()> {
    if powers.is_empty() {
        powers.push(map.clone());
    }
    while powers.len() < n {
        let next = map.compose(powers.last().unwrap(), cap)?;
        powers.push(next);
    }
    Ok(())
}

fn label(
    map: &PLMap,
    n: usize,
    (pts, cont): (Vec<Rat>, Vec<Interval>),
    mut identity_on: impl FnMut(usize, &Interval) -> Result<bool>,
) -> Result<PeriodicPoints> {
    let mut out = PeriodicPoints::default();
    for x in pts {
        let m = minimal_period(map, &x, n).expect("fixed point of f^n");
        let reversing = reversing_at(map, &x, m);
        out.points.push(PeriodicPoint { x, minimal_period: m, reversing });
    }
    for c in cont {
        let mut mp = n;
        for d in divisors(n) {
            if identity_on(d, &c)? {
                mp = d;
                break;
            }
        }
        out.continua.push(PeriodicContinuum { interval: c, minimal_period: mp });
    }
    Ok(out)
}

/// All solutions of `f^n(x) = x`, labelled with minimal periods; identity stretches of `f^n`
/// come back as continua.
pub fn periodic_points(map: &PLMap, n: usize, cap: usize) -> Result<PeriodicPoints> {
    let g = map.power(n, cap)?;
    let mut powers = Vec::new();
    label(map, n, raw_fixed(&g), |d, c| {
        ensure_powers(map, &mut powers, d, cap)?;
        Ok(powers[d - 1].is_identity_on(c))
    })
}

/// Solutions of `f^n(x) = x` inside `j`, computed from the iterate on `j` alone.
pub fn periodic_points_within(map: &PLMap, n: usize, j: &Interval, cap: usize) -> Result<PeriodicPoints> {
    let knots = map.power_on(j, n, cap)?;
    label(map, n, raw_fixed_knots(&knots), |d, c| Ok(map.power_on(c, d, cap)?.iter().all(|(x, y)| x == y)))
}

/// Minimal periods up to `max` realized by the map.
pub fn period_set(map: &PLMap, max: usize, cap: usize) -> Result<BTreeSet<usize>> {
    let mut set = BTreeSet::new();
    let mut powers = Vec::new();
    for n in 1..=max {
        ensure_powers(map, &mut powers, n, cap)?;
        let (pts, cont) = raw_fixed(&powers[n - 1]);
        if pts.iter().any(|x| minimal_period(map, x, n) == Some(n)) {
            set.insert(n);
            continue;
        }
        for c in cont {
            if divisors(n).iter().take_while(|&&d| d < n).all(|&d| !powers[d - 1].is_identity_on(&c)) {
                set.insert(n);
                break;
            }
        }
    }
    Ok(set)
}

/// Periodic points whose minimal period passes `keep`, for periods up to `max`.
pub fn points_with_periods_in(
    map: &PLMap,
    keep: impl Fn(usize) -> bool,
    max: usize,
    cap: usize,
) -> Result<Vec<PeriodicPoint>> {
    let mut out = Vec::new();
    for n in (1..=max).filter(|&n| keep(n)) {
        out.extend(periodic_points(map, n, cap)?.points.into_iter().filter(|p| p.minimal_period == n));
    }
    out.sort_by(|a, b| a.x.cmp(&b.x));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharkovskiiClass {
    /// `n = 2^a (2b + 1)`.
    Finite {
        a: u32,
        b: u64,
    },
    TwoInfinity,
}

impl SharkovskiiClass {
    pub fn of(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("periods start at 1"));
        }
        let a = n.trailing_zeros();
        Ok(SharkovskiiClass::Finite { a, b: ((n >> a) - 1) / 2 })
    }

    pub fn value(&self) -> Option<u64> {
        match *self {
            SharkovskiiClass::Finite { a, b } => Some((2 * b + 1) << a),
            SharkovskiiClass::TwoInfinity => None,
        }
    }
}

/// Smaller key means earlier in the order (3 first, 1 last).
fn shark_key(n: u64) -> (u8, i64, u64) {
    let a = n.trailing_zeros();
    let m = n >> a;
    if m > 1 {
        (0, a as i64, m)
    } else {
        (1, -(a as i64), 0)
    }
}

/// `Greater` when `p` precedes `q`, so `compare(3, 5) == Greater`.
pub fn sharkovskii_compare(p: u64, q: u64) -> Result<Ordering> {
    if p == 0 || q == 0 {
        return Err(Error::domain("periods start at 1"));
    }
    Ok(shark_key(q).cmp(&shark_key(p)))
}

/// Downward closure within `1..=range`: each present period forces every later one.
pub fn sharkovskii_consistent(periods: &BTreeSet<usize>, range: usize) -> bool {
    periods
        .iter()
        .filter(|&&p| p <= range)
        .all(|&p| (1..=range).all(|q| shark_key(p as u64) >= shark_key(q as u64) || periods.contains(&q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LOrientation {
    /// `f²y ≤ x < y < fy`
    Up,
    /// `fy < y < x ≤ f²y`
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LScheme {
    pub x: Rat,
    pub y: Rat,
    pub orientation: LOrientation,
}

impl LScheme {
    pub fn holds(&self, map: &PLMap) -> bool {
        let (x, y) = (&self.x, &self.y);
        let fy = map.at(y);
        let f2y = map.at(&fy);
        map.at(x) == *x
            && match self.orientation {
                LOrientation::Up => &f2y <= x && x < y && y < &fy,
                LOrientation::Down => &fy < y && y < x && x <= &f2y,
            }
    }
}

/// Exact search: for each fixed point, test the finitely many boundary points and midpoints of
/// the region cut out by `fy = y` and `f²y = x`.
pub fn has_l_scheme(map: &PLMap, cap: usize) -> Result<Option<LScheme>> {
    let fixed = periodic_points(map, 1, cap)?;
    let f2 = map.power(2, cap)?;
    let mut xs: BTreeSet<Rat> = fixed.points.iter().map(|p| p.x.clone()).collect();
    let mut fix_bounds: BTreeSet<Rat> = xs.clone();
    for c in &fixed.continua {
        xs.insert(c.interval.lo.clone());
        xs.insert(c.interval.hi.clone());
        fix_bounds.insert(c.interval.lo.clone());
        fix_bounds.insert(c.interval.hi.clone());
    }
    for x in &xs {
        let mut bounds: BTreeSet<Rat> = fix_bounds.clone();
        bounds.insert(x.clone());
        bounds.insert(Rat::zero());
        bounds.insert(Rat::one());
        for c in f2.preimages(x).components() {
            bounds.insert(c.lo.clone());
            bounds.insert(c.hi.clone());
        }
        let b: Vec<Rat> = bounds.into_iter().collect();
        let mut cands: Vec<Rat> = b.clone();
        cands.extend(b.windows(2).map(|w| rat::mid(&w[0], &w[1])));
        cands.sort();
        for orientation in [LOrientation::Up, LOrientation::Down] {
            let order: Box<dyn Iterator<Item = &Rat>> = match orientation {
                LOrientation::Up => Box::new(cands.iter()),
                LOrientation::Down => Box::new(cands.iter().rev()),
            };
            for y in order {
                let w = LScheme { x: x.clone(), y: y.clone(), orientation };
                if w.holds(map) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// For each `k ≤ k_max`, looks for a multiple of `k` in `A ∩ [1, bound]`.
pub fn multiples_condition(member: impl Fn(u64) -> bool, bound: u64, k_max: u64) -> bool {
    (1..=k_max).all(|k| (1..=bound / k).any(|j| member(j * k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::map::DEFAULT_KNOT_CAP as CAP;
    use crate::rat::frac;

    fn xs(p: &PeriodicPoints) -> Vec<Rat> {
        p.points.iter().map(|q| q.x.clone()).collect()
    }

    #[test]
    fn tent_fixed_and_period_two() {
        let t = fixtures::tent();
        let p1 = periodic_points(&t, 1, CAP).unwrap();
        assert_eq!(xs(&p1), vec![rat::zero(), frac(2, 3)]);
        let p2 = periodic_points(&t, 2, CAP).unwrap();
        assert_eq!(xs(&p2), vec![rat::zero(), frac(2, 5), frac(2, 3), frac(4, 5)]);
        let periods: Vec<usize> = p2.points.iter().map(|p| p.minimal_period).collect();
        assert_eq!(periods, vec![1, 2, 1, 2]);
    }

    #[test]
    fn identity_gives_a_continuum() {
        let p = periodic_points(&fixtures::identity(), 3, CAP).unwrap();
        assert!(p.points.is_empty());
        assert_eq!(p.continua, vec![PeriodicContinuum { interval: Interval::unit(), minimal_period: 1 }]);
    }

    #[test]
    fn reversing_examples() {
        let t = fixtures::tent();
        assert!(is_reversing(&t, &frac(2, 3), 1).unwrap());
        assert!(!is_reversing(&t, &rat::zero(), 1).unwrap());
        assert!(!is_reversing(&fixtures::identity(), &frac(1, 5), 1).unwrap());
        assert!(is_reversing(&t, &frac(1, 3), 1).is_err());
    }

    #[test]
    fn period_sets() {
        let s: Vec<usize> = period_set(&fixtures::tent(), 3, CAP).unwrap().into_iter().collect();
        assert_eq!(s, vec![1, 2, 3]);
        let s: Vec<usize> = period_set(&fixtures::identity(), 10, CAP).unwrap().into_iter().collect();
        assert_eq!(s, vec![1]);
        let s: Vec<usize> = period_set(&fixtures::swap(), 5, CAP).unwrap().into_iter().collect();
        assert_eq!(s, vec![1, 2]);
    }

    #[test]
    fn sharkovskii_examples() {
        assert_eq!(sharkovskii_compare(3, 5).unwrap(), Ordering::Greater);
        assert_eq!(sharkovskii_compare(2, 1).unwrap(), Ordering::Greater);
        assert_eq!(sharkovskii_compare(6, 12).unwrap(), Ordering::Greater);
        assert_eq!(sharkovskii_compare(8, 3).unwrap(), Ordering::Less);
        assert_eq!(sharkovskii_compare(7, 7).unwrap(), Ordering::Equal);
        assert!(sharkovskii_compare(0, 1).is_err());
        let one: BTreeSet<usize> = [1].into();
        assert!(sharkovskii_consistent(&one, 10));
        let all: BTreeSet<usize> = (1..=9).collect();
        assert!(sharkovskii_consistent(&all, 9));
        let bad: BTreeSet<usize> = [1, 3].into();
        assert!(!sharkovskii_consistent(&bad, 5));
        assert_eq!(SharkovskiiClass::of(12).unwrap(), SharkovskiiClass::Finite { a: 2, b: 1 });
        assert_eq!(SharkovskiiClass::of(12).unwrap().value(), Some(12));
    }

    #[test]
    fn l_scheme_examples() {
        let w = has_l_scheme(&fixtures::tent(), CAP).unwrap().unwrap();
        assert_eq!((w.x.clone(), w.y.clone(), w.orientation), (rat::zero(), frac(1, 2), LOrientation::Up));
        assert!(has_l_scheme(&fixtures::identity(), CAP).unwrap().is_none());
        assert!(has_l_scheme(&fixtures::swap(), CAP).unwrap().is_none());
    }

    #[test]
    fn multiples_examples() {
        assert!(multiples_condition(|n| n % 2 == 0, 1000, 7));
        let is_prime = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        assert!(!multiples_condition(is_prime, 1000, 4));
        let facts: Vec<u64> = (1..=10u64)
            .scan(1u64, |acc, k| {
                *acc *= k;
                Some(*acc)
            })
            .collect();
        assert!(multiples_condition(|n| facts.contains(&n), 3_628_800, 10));
    }
}
