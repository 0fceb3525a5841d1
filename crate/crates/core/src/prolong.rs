//! One-sided prolongation sets, source sides and the set of points with a source side.

use num_traits::{One, Signed};
use std::borrow::Cow;
use std::collections::BTreeSet;

use crate::basic::{basic_set, BasicSetApprox};
use crate::cycle::{weakly_periodic_closure, Closure, CycleOfIntervals};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::{PLMap, Side, SidedPoint};
use crate::markov::MarkovSystem;
use crate::orbit::periodic_points;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    L,
    R,
    Both,
}

impl Sides {
    fn list(self) -> Vec<Side> {
        match self {
            Sides::L => vec![Side::L],
            Sides::R => vec![Side::R],
            Sides::Both => vec![Side::L, Side::R],
        }
    }
}

impl From<Side> for Sides {
    fn from(s: Side) -> Self {
        match s {
            Side::L => Sides::L,
            Side::R => Sides::R,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProlongationKind {
    /// Some neighbourhood has pairwise disjoint iterates.
    ZeroDim,
    PeriodicOrbit(Vec<Rat>),
    /// Periods of the shrinking closures kept growing; evidence, not proof.
    Solenoidal(Vec<usize>),
    Cycle(CycleOfIntervals),
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prolongation {
    pub kind: ProlongationKind,
    /// Exact for Markov inputs; otherwise the last closure in the shrinking family.
    pub set: IntervalSet,
    pub depth: usize,
}

fn undecided(depth: usize) -> Prolongation {
    Prolongation { kind: ProlongationKind::Undecided, set: IntervalSet::empty(), depth }
}

/// Sides of `x` that point into the cycle.
fn sides_in(m: &CycleOfIntervals, x: &Rat) -> Vec<Side> {
    [Side::L, Side::R]
        .into_iter()
        .filter(|&s| m.orbit.iter().any(|piece| SidedPoint::new(x.clone(), s).valid_in(piece) && !piece.is_point()))
        .collect()
}

/// Eventual cycle of the orbit of `x`, sorted.
fn eventual_cycle(map: &PLMap, x: &Rat, budget: usize) -> Option<Vec<Rat>> {
    let mut seen: Vec<Rat> = Vec::new();
    let mut y = x.clone();
    for _ in 0..=budget {
        if let Some(k) = seen.iter().position(|s| s == &y) {
            let mut c = seen.split_off(k);
            c.sort();
            return Some(c);
        }
        seen.push(y.clone());
        y = map.at(&y);
    }
    None
}

/// Exact prolongation set for a Markov system, read off the cover graph.
pub fn prolongation_set(
    ms: &MarkovSystem,
    m: &CycleOfIntervals,
    x: &Rat,
    sides: Sides,
    budget: usize,
) -> Result<Prolongation> {
    if !m.contains(x) {
        return Err(Error::pre(format!("{} is not in the cycle", rat::show(x))));
    }
    let inside = sides_in(m, x);
    let wanted: Vec<Side> = sides.list().into_iter().filter(|s| inside.contains(s)).collect();
    if wanted.is_empty() {
        return Err(Error::pre(format!("no requested side of {} lies in the cycle", rat::show(x))));
    }
    let mut pts: Vec<Rat> = m.orbit.iter().flat_map(|i| [i.lo.clone(), i.hi.clone()]).collect();
    pts.push(x.clone());
    let aug: Cow<MarkovSystem> = if pts.iter().all(|p| ms.is_point(p)) {
        Cow::Borrowed(ms)
    } else {
        match ms.with_orbits(&pts, budget) {
            Some(a) => Cow::Owned(a),
            None => return Ok(undecided(0)),
        }
    };
    let mut set = IntervalSet::empty();
    let mut kinds = Vec::new();
    for side in wanted {
        let Some((s, kind)) = one_side(&aug, x, side, budget)? else { return Ok(undecided(0)) };
        set = set.union(&s);
        kinds.push(kind);
    }
    let kind = if kinds.len() == 1 { kinds.pop().unwrap() } else { kind_of_set(&aug, &set)? };
    Ok(Prolongation { kind, set, depth: 0 })
}

fn kind_of_set(ms: &MarkovSystem, set: &IntervalSet) -> Result<ProlongationKind> {
    if set.is_finite() {
        return Ok(ProlongationKind::PeriodicOrbit(set.components().iter().map(|c| c.lo.clone()).collect()));
    }
    let solid = set.solid();
    let hint = solid.components()[0].clone();
    Ok(ProlongationKind::Cycle(CycleOfIntervals::from_components(ms.map(), &solid, &hint)?))
}

fn one_side(ms: &MarkovSystem, x: &Rat, side: Side, budget: usize) -> Result<Option<(IntervalSet, ProlongationKind)>> {
    let map = ms.map();
    let mut trail: Vec<SidedPoint> = Vec::new();
    let mut p = SidedPoint::new(x.clone(), side);
    let start = loop {
        if let Some(k) = trail.iter().position(|q| q == &p) {
            break k;
        }
        if trail.len() > budget {
            return Ok(None);
        }
        trail.push(p.clone());
        match map.pair_image(&p) {
            Some(q) => p = q,
            None => {
                let Some(orbit) = eventual_cycle(map, &map.at(&p.x), budget) else { return Ok(None) };
                let set = IntervalSet::from_points(orbit.iter().cloned());
                return Ok(Some((set, ProlongationKind::PeriodicOrbit(orbit))));
            }
        }
    };
    let cycle = &trail[start..];
    let stretch =
        cycle.iter().fold(Rat::one(), |acc, q| acc * map.slope_on_side(&q.x, q.side).expect("side inside [0,1]").abs());
    if stretch <= Rat::one() {
        let pts: BTreeSet<Rat> = cycle.iter().map(|q| q.x.clone()).collect();
        let orbit: Vec<Rat> = pts.into_iter().collect();
        return Ok(Some((IntervalSet::from_points(orbit.iter().cloned()), ProlongationKind::PeriodicOrbit(orbit))));
    }
    let seeds: Vec<usize> = cycle.iter().map(|q| ms.cell_on_side(&q.x, q.side).expect("side inside [0,1]")).collect();
    let Some(set) = limit_set(ms, &seeds, budget) else { return Ok(None) };
    let solid = set.solid();
    let hint = ms.cell(seeds[0]);
    let cyc = CycleOfIntervals::from_components(map, &solid, &hint)?;
    Ok(Some((set, ProlongationKind::Cycle(cyc))))
}

/// Points visited by the images of `seeds` infinitely often.
pub fn limit_set(ms: &MarkovSystem, seeds: &[usize], budget: usize) -> Option<IntervalSet> {
    let map = ms.map();
    let r = ms.reach(seeds.iter().copied());
    let on_cycle = ms.on_cycle();
    let recurrent = ms.reach((0..ms.n_cells()).filter(|&i| r[i] && on_cycle[i]));
    let mut pts: BTreeSet<Rat> = BTreeSet::new();
    for d in (0..ms.n_cells()).filter(|&d| r[d] && ms.is_degenerate(d)) {
        let y = map.at(&ms.cell(d).lo);
        if recurrent[d] {
            let mut z = y;
            let mut steps = 0;
            while pts.insert(z.clone()) {
                z = map.at(&z);
                steps += 1;
                if steps > budget {
                    return None;
                }
            }
        } else {
            pts.extend(eventual_cycle(map, &y, budget)?);
        }
    }
    let cells = ms.union_of((0..ms.n_cells()).filter(|&i| recurrent[i]));
    Some(cells.union(&IntervalSet::from_points(pts)))
}

/// Shrinking-neighbourhood prolongation for maps without a usable Markov partition.
pub fn prolongation_approx(
    map: &PLMap,
    m: &CycleOfIntervals,
    x: &Rat,
    side: Side,
    depth: usize,
    budget: usize,
) -> Result<Prolongation> {
    if !sides_in(m, x).contains(&side) {
        return Err(Error::pre(format!("side {side} of {} is not in the cycle", rat::show(x))));
    }
    let piece = m.orbit.iter().find(|p| SidedPoint::new(x.clone(), side).valid_in(p)).unwrap().clone();
    let room = match side {
        Side::L => x - &piece.lo,
        Side::R => &piece.hi - x,
    };
    let mut periods: Vec<usize> = Vec::new();
    let mut last: Option<CycleOfIntervals> = None;
    let mut lens: Vec<Rat> = Vec::new();
    for k in 1..=depth {
        let w = &room / Rat::from_integer(num_bigint::BigInt::one() << k);
        let nb = match side {
            Side::L => Interval::new(x - &w, x.clone()),
            Side::R => Interval::new(x.clone(), x + &w),
        };
        match weakly_periodic_closure(map, &nb, budget)? {
            Closure::Disjoint => {
                // the set is ω(x); known exactly only when the orbit is eventually periodic
                let set = IntervalSet::from_points(eventual_cycle(map, x, budget).unwrap_or_default());
                return Ok(Prolongation { kind: ProlongationKind::ZeroDim, set, depth: k });
            }
            Closure::Undecided => return Ok(undecided(k)),
            Closure::Cycle(c) => {
                periods.push(c.period);
                lens.push(c.union().total_length());
                last = Some(c);
            }
        }
        let n = periods.len();
        if n >= 4 && periods[n - 4..].windows(2).all(|w| w[1] > w[0]) {
            let set = last.unwrap().union();
            return Ok(Prolongation { kind: ProlongationKind::Solenoidal(periods), set, depth: k });
        }
        if n >= 3 && periods[n - 1] == periods[n - 2] && periods[n - 2] == periods[n - 3] {
            let c = last.clone().unwrap();
            if lens[n - 1] == lens[n - 2] {
                return Ok(Prolongation { kind: ProlongationKind::Cycle(c.clone()), set: c.union(), depth: k });
            }
            // closures keep shrinking: look for the periodic orbit inside
            let pp = periodic_points(map, c.period, crate::map::DEFAULT_KNOT_CAP)?;
            let inside: Vec<Rat> = pp.points.into_iter().map(|p| p.x).filter(|p| c.base.contains(p)).collect();
            if let Some(p) = inside.first() {
                let orbit = eventual_cycle(map, p, c.period + 1).unwrap_or_default();
                let set = IntervalSet::from_points(orbit.iter().cloned());
                return Ok(Prolongation { kind: ProlongationKind::PeriodicOrbit(orbit), set, depth: k });
            }
        }
    }
    let set = last.map(|c| c.union()).unwrap_or_else(IntervalSet::empty);
    Ok(Prolongation { kind: ProlongationKind::Undecided, set, depth })
}

/// Sides of `x` whose prolongation set is the whole cycle.
pub fn source_sides(ms: &MarkovSystem, m: &CycleOfIntervals, x: &Rat, budget: usize) -> Result<Vec<Side>> {
    let whole = m.union();
    let mut out = Vec::new();
    for side in sides_in(m, x) {
        let p = prolongation_set(ms, m, x, side.into(), budget)?;
        if p.set == whole {
            out.push(side);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ESet {
    Infinite(Box<BasicSetApprox>),
    /// A single periodic orbit, with the shape it has relative to the cycle (1 to 3).
    FiniteCycle {
        orbit: Vec<Rat>,
        case: Option<u8>,
    },
    Empty,
}

/// The points of the cycle with a source side.
pub fn e_set(ms: &MarkovSystem, m: &CycleOfIntervals, depth: usize, budget: usize) -> Result<ESet> {
    let b = basic_set(ms, m, depth)?;
    if b.is_basic() {
        return Ok(ESet::Infinite(Box::new(b)));
    }
    let map = ms.map();
    let whole = m.union();
    let mut cands: BTreeSet<Rat> = b.system.points().iter().filter(|p| whole.contains(p)).cloned().collect();
    // a permutation class with expansion can hold one repelling periodic point inside a cell
    for scc in b.system.cyclic_sccs().into_iter().filter(|s| b.system.scc_is_permutation(s)) {
        let q = scc.len();
        for p in periodic_points(map, q, crate::map::DEFAULT_KNOT_CAP)?.points {
            if scc.iter().any(|&c| b.system.cell(c).contains_interior(&p.x)) {
                cands.insert(p.x);
            }
        }
    }
    let mut e: Vec<Rat> = Vec::new();
    for x in cands {
        if !source_sides(ms, m, &x, budget)?.is_empty() {
            e.push(x);
        }
    }
    if e.is_empty() {
        return Ok(ESet::Empty);
    }
    let case = finite_case(map, m, &e);
    Ok(ESet::FiniteCycle { orbit: e, case })
}

fn finite_case(map: &PLMap, m: &CycleOfIntervals, e: &[Rat]) -> Option<u8> {
    let (s, k) = (m.period, e.len());
    let x = e.iter().find(|x| m.base.contains(x))?;
    let (a, b) = (&m.base.lo, &m.base.hi);
    if k == 2 * s {
        return Some(3);
    }
    if k != s {
        return None;
    }
    if x == a || x == b {
        return Some(2);
    }
    let left = map.image_n(&Interval::new(a.clone(), x.clone()), s);
    let right = map.image_n(&Interval::new(x.clone(), b.clone()), s);
    (left == Interval::new(x.clone(), b.clone()) && right == Interval::new(a.clone(), x.clone())).then_some(1)
}
