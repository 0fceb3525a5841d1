//! Limit sets, ω-classification of points, o-extrema, wandering intervals and the spectral
//! decomposition report.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

use num_traits::{One, Signed, Zero};

use crate::basic::{basic_set, basic_sets, BasicSetApprox};
use crate::cycle::{cycle_of_cells, weakly_periodic_closure, Closure, CycleOfIntervals};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::{PLMap, Side, DEFAULT_KNOT_CAP};
use crate::markov::{markovize, MarkovSystem};
use crate::orbit::{ensure_powers, one_sided_slope, periodic_points};
use crate::prolong::prolongation_set;
use crate::rat::{self, Rat};

/// Refinements applied before reading limit sets off the cover graph.
pub const DEFAULT_LIMIT_DEPTH: usize = 2;
/// Largest period searched for periodic points when sampling intervals for wandering.
pub const WANDER_MAX_PERIOD: usize = 12;

const MARKOV_STEPS: usize = 200;
const BASIN_MAX_PERIOD: usize = 8;
const NEST_PROBES: usize = 40;
const TRACE_LEN: usize = 32;
const BASIC_DEPTH: usize = 3;
const GENUS0_MAX_PERIOD: usize = 4;

/// Orbit of `x` until a value repeats, with the index where the cycle starts.
fn orbit_to_cycle(map: &PLMap, x: &Rat, budget: usize) -> (Vec<Rat>, Option<usize>) {
    let mut seen: HashMap<Rat, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut y = x.clone();
    for i in 0..=budget {
        if let Some(&k) = seen.get(&y) {
            return (orbit, Some(k));
        }
        seen.insert(y.clone(), i);
        orbit.push(y.clone());
        y = map.at(&y);
    }
    (orbit, None)
}

fn sorted_cycle(map: &PLMap, p: &Rat, period: usize) -> Vec<Rat> {
    let mut v = Vec::with_capacity(period);
    let mut y = p.clone();
    for _ in 0..period {
        v.push(y.clone());
        y = map.at(&y);
    }
    v.sort();
    v.dedup();
    v
}

/// `g(J) ⊆ J` with every piece of `g` meeting `J` a contraction.
fn contracts_into(g: &PLMap, j: &Interval) -> bool {
    j.contains_interval(&g.image(j))
        && (0..g.num_pieces()).all(|i| {
            let (dom, s) = g.piece(i);
            !dom.overlaps(j) || s.abs() < Rat::one()
        })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OExtremum {
    pub point: Rat,
    /// Far end of the plateau `[point, companion]`; `None` for a turning point.
    pub companion: Option<Rat>,
    pub maximum: bool,
}

impl OExtremum {
    /// 1 for a plateau edge, 2 for a turning point.
    pub fn case(&self) -> u8 {
        if self.companion.is_some() {
            1
        } else {
            2
        }
    }

    pub fn ends(&self) -> Vec<Rat> {
        std::iter::once(self.point.clone()).chain(self.companion.clone()).collect()
    }
}

/// Interior turning points, and interior plateaus whose two ends are extrema of the same kind.
pub fn o_extrema(map: &PLMap) -> Vec<OExtremum> {
    let bp = map.breakpoints();
    let slopes: Vec<Rat> = (0..map.num_pieces()).map(|i| map.slope(i)).collect();
    let n = slopes.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i < n {
        let left = &slopes[i - 1];
        if left.is_zero() {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < n && slopes[j].is_zero() {
            j += 1;
        }
        if j == n {
            break;
        }
        if left.is_positive() != slopes[j].is_positive() {
            let companion = (j > i).then(|| bp[j].clone());
            out.push(OExtremum { point: bp[i].clone(), companion, maximum: left.is_positive() });
        }
        i = if j > i { j } else { i + 1 };
    }
    out
}

/// An end of an o-extremum `c` and `n > 0` with `f^n c = x`.
pub fn extremum_preimage(map: &PLMap, x: &Rat, budget: usize) -> Option<(Rat, usize)> {
    for e in o_extrema(map) {
        for c in e.ends() {
            let mut y = c.clone();
            for n in 1..=budget {
                y = map.at(&y);
                if &y == x {
                    return Some((c, n));
                }
            }
        }
    }
    None
}

fn has_exit(ms: &MarkovSystem, scc: &[usize]) -> bool {
    scc.iter().any(|&c| ms.succ(c).iter().any(|d| scc.binary_search(d).is_err()))
}

/// Cells of a permutation class in the order the map visits them.
fn cycle_order(ms: &MarkovSystem, scc: &[usize]) -> Vec<usize> {
    let mut order = vec![scc[0]];
    loop {
        let last = *order.last().unwrap();
        let next = *ms.succ(last).iter().find(|d| scc.binary_search(d).is_ok()).unwrap();
        if next == order[0] {
            return order;
        }
        order.push(next);
    }
}

/// `(slope, offset)` of the first return of a permutation class to its first cell.
fn return_branch(ms: &MarkovSystem, order: &[usize]) -> (Rat, Rat) {
    let map = ms.map();
    let (mut a, mut b) = (Rat::one(), Rat::zero());
    for &c in order {
        let lo = ms.cell(c).lo;
        let s = map.slope_on_side(&lo, Side::R).expect("cell has a right side");
        let t = map.at(&lo) - &s * &lo;
        a = &s * &a;
        b = &s * &b + t;
    }
    (a, b)
}

/// Permutation classes without exits: every point is periodic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicBand {
    pub cells: Vec<Interval>,
    /// Period of every point other than a flip centre.
    pub period: usize,
}

fn bands(ms: &MarkovSystem) -> Vec<PeriodicBand> {
    ms.cyclic_sccs()
        .into_iter()
        .filter(|s| ms.scc_is_permutation(s) && !has_exit(ms, s))
        .map(|s| {
            let order = cycle_order(ms, &s);
            let (a, _) = return_branch(ms, &order);
            let period = if a.is_positive() { order.len() } else { 2 * order.len() };
            PeriodicBand { cells: order.iter().map(|&c| ms.cell(c)).collect(), period }
        })
        .collect()
}

/// Cell-level ω: non-permutation classes and bands, plus periodic points of expanding
/// permutation classes and periodic partition points.
fn recurrence(ms: &MarkovSystem) -> (IntervalSet, BTreeSet<Rat>) {
    let map = ms.map();
    let mut cells = Vec::new();
    let mut pts = BTreeSet::new();
    for scc in ms.cyclic_sccs() {
        if !ms.scc_is_permutation(&scc) || !has_exit(ms, &scc) {
            cells.extend(scc.iter().copied());
            continue;
        }
        let order = cycle_order(ms, &scc);
        let (a, b) = return_branch(ms, &order);
        let x = b / (Rat::one() - a);
        let orbit = sorted_cycle(map, &x, order.len());
        pts.extend(orbit);
    }
    pts.extend(ms.periodic_partition_points().into_iter().map(|(p, _)| p));
    (ms.union_of(cells), pts)
}

/// Minimal periods up to `max`, read off the graph. Exact when every cyclic class is a
/// permutation; `None` otherwise, since a branching class carries infinitely many periods.
pub fn permutation_periods(ms: &MarkovSystem, max: usize) -> Option<BTreeSet<usize>> {
    let map = ms.map();
    let mut periods = BTreeSet::new();
    let mut add = |x: &Rat, n: usize| {
        if let Some(m) = crate::orbit::minimal_period(map, x, n) {
            periods.insert(m);
        }
    };
    for scc in ms.cyclic_sccs() {
        if !ms.scc_is_permutation(&scc) {
            return None;
        }
        let order = cycle_order(ms, &scc);
        let q = order.len();
        let (a, b) = return_branch(ms, &order);
        if has_exit(ms, &scc) {
            add(&(b / (Rat::one() - a)), q);
        } else if a.is_positive() {
            add(&ms.cell(order[0]).midpoint(), q);
        } else {
            let c = ms.cell(order[0]);
            add(&c.midpoint(), q);
            add(&rat::mid(&c.lo, &c.midpoint()), 2 * q);
        }
    }
    let mut out: BTreeSet<usize> = periods.into_iter().filter(|&m| m <= max).collect();
    out.extend(ms.periodic_partition_points().into_iter().map(|(_, q)| q).filter(|&q| q <= max));
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitSets {
    pub depth: usize,
    pub per_closure: IntervalSet,
    pub omega: IntervalSet,
    pub nonwandering: IntervalSet,
    /// `X_0 = Ω`, `X_{n+1} = f(X_n) ∩ Ω` until it stabilises.
    pub chain: Vec<IntervalSet>,
    pub chain_limit_is_omega: bool,
}

impl LimitSets {
    /// Points of `Ω \ ω`; finite at cell level.
    pub fn excess(&self) -> Vec<Rat> {
        self.nonwandering
            .components()
            .iter()
            .filter(|c| c.is_point() && !self.omega.contains(&c.lo))
            .map(|c| c.lo.clone())
            .collect()
    }
}

/// Per-closure, ω and Ω read off the graph of the `depth`-fold refinement. A partition point
/// outside ω is non-wandering when it lies in one of its one-sided prolongation sets.
pub fn limit_sets(ms: &MarkovSystem, depth: usize, budget: usize) -> Result<LimitSets> {
    let r = ms.refine_n(depth);
    let map = r.map();
    let (cells, pts) = recurrence(&r);
    let omega = cells.union(&IntervalSet::from_points(pts));
    let whole = CycleOfIntervals::whole();
    let mut extra = Vec::new();
    for p in r.points().iter().filter(|p| !omega.contains(p)) {
        for side in [Side::L, Side::R] {
            if (side == Side::L && p.is_zero()) || (side == Side::R && p.is_one()) {
                continue;
            }
            if prolongation_set(&r, &whole, p, side.into(), budget)?.set.contains(p) {
                extra.push(p.clone());
                break;
            }
        }
    }
    let nonwandering = omega.union(&IntervalSet::from_points(extra));
    let mut chain = vec![nonwandering.clone()];
    for _ in 0..=r.points().len() {
        let next = map.image_set(chain.last().unwrap()).intersect(&nonwandering);
        if &next == chain.last().unwrap() {
            break;
        }
        chain.push(next);
    }
    let chain_limit_is_omega = chain.last() == Some(&omega);
    Ok(LimitSets { depth, per_closure: omega.clone(), omega, nonwandering, chain, chain_limit_is_omega })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmegaEvidence {
    /// The orbit lands on this cycle (`exact`) or enters a contracting trap around it.
    Cycle {
        orbit: Vec<Rat>,
        exact: bool,
    },
    /// Nested cycles of intervals with these periods close around the orbit.
    Tower {
        periods: Vec<usize>,
    },
    /// The orbit settles in a cycle of intervals equal to its basic set.
    Transitive(CycleOfIntervals),
    /// The orbit settles in a cycle whose basic set is strictly smaller.
    Cantor {
        ambient: CycleOfIntervals,
        outer: IntervalSet,
    },
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaVerdict {
    pub evidence: OmegaEvidence,
    /// The first iterates of the point.
    pub trace: Vec<Rat>,
}

impl OmegaVerdict {
    pub fn case(&self) -> Option<u8> {
        match self.evidence {
            OmegaEvidence::Cycle { .. } => Some(1),
            OmegaEvidence::Tower { .. } => Some(2),
            OmegaEvidence::Transitive(_) => Some(3),
            OmegaEvidence::Cantor { .. } => Some(4),
            OmegaEvidence::Undecided => None,
        }
    }
}

/// Periods of the closures of shrinking neighbourhoods of `y` that strictly divide each other.
fn nested_periods(map: &PLMap, y: &Rat, budget: usize) -> Result<Vec<usize>> {
    let (z, o) = (rat::zero(), rat::one());
    let mut chain: Vec<usize> = Vec::new();
    let mut w = rat::half();
    for _ in 0..NEST_PROBES {
        let u = Interval::new(rat::max(&z, &(y - &w)), rat::min(&o, &(y + &w)));
        w /= rat::int(2);
        let Closure::Cycle(c) = weakly_periodic_closure(map, &u, budget)? else { break };
        let p = c.period;
        match chain.last() {
            Some(&l) if p > l && p % l == 0 => chain.push(p),
            None if p > 1 => chain.push(p),
            _ => {}
        }
        if c.base == u && !c.weak {
            break;
        }
    }
    Ok(chain)
}

fn attracting_cycle(map: &PLMap, y: &Rat) -> Result<Option<Vec<Rat>>> {
    for k in 1..=BASIN_MAX_PERIOD {
        let g = match map.power(k, DEFAULT_KNOT_CAP) {
            Ok(g) => g,
            Err(e) if e.is_resource() => break,
            Err(e) => return Err(e),
        };
        for p in periodic_points(map, k, DEFAULT_KNOT_CAP)?.points.into_iter().filter(|p| p.minimal_period == k) {
            if contracts_into(&g, &Interval::hull(y.clone(), p.x.clone())) {
                return Ok(Some(sorted_cycle(map, &p.x, k)));
            }
        }
    }
    Ok(None)
}

/// Which of the four shapes of ω-limit sets the orbit of `x` shows. Cases 3 and 4 need a
/// Markov partition; without one they come back undecided.
pub fn classify_omega(map: &PLMap, x: &Rat, budget: usize) -> Result<OmegaVerdict> {
    let ms = markovize(map, MARKOV_STEPS);
    classify_omega_in(map, ms.as_ref(), x, budget)
}

pub fn classify_omega_in(map: &PLMap, ms: Option<&MarkovSystem>, x: &Rat, budget: usize) -> Result<OmegaVerdict> {
    if !rat::in_unit(x) {
        return Err(Error::domain(format!("{} is outside [0,1]", rat::show(x))));
    }
    let (orbit, start) = orbit_to_cycle(map, x, budget);
    let trace: Vec<Rat> = orbit.iter().take(TRACE_LEN).cloned().collect();
    let verdict = |evidence| Ok(OmegaVerdict { evidence, trace: trace.clone() });
    if let Some(k) = start {
        let y = &orbit[k];
        let periods = nested_periods(map, y, budget)?;
        if periods.len() >= 3 {
            return verdict(OmegaEvidence::Tower { periods });
        }
        let mut cyc = orbit[k..].to_vec();
        cyc.sort();
        return verdict(OmegaEvidence::Cycle { orbit: cyc, exact: true });
    }
    let y = orbit.last().unwrap();
    if let Some(cyc) = attracting_cycle(map, y)? {
        return verdict(OmegaEvidence::Cycle { orbit: cyc, exact: false });
    }
    let Some(ms) = ms else { return verdict(OmegaEvidence::Undecided) };
    let Some(c) = ms.cell_on_side(y, Side::R).filter(|&c| ms.cell(c).contains_interior(y)) else {
        return verdict(OmegaEvidence::Undecided);
    };
    let scc = ms.sccs().into_iter().find(|s| s.contains(&c)).unwrap();
    let cyclic = scc.len() > 1 || ms.succ(c).contains(&c);
    if !cyclic || ms.scc_is_permutation(&scc) {
        return verdict(OmegaEvidence::Undecided);
    }
    let cycle = cycle_of_cells(ms, &scc)?;
    let b = basic_set(ms, &cycle, BASIC_DEPTH)?;
    if b.outer == cycle.union() {
        verdict(OmegaEvidence::Transitive(cycle))
    } else {
        verdict(OmegaEvidence::Cantor { ambient: cycle, outer: b.outer })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZEvidence {
    /// `f^step(G)` contains this periodic point.
    ReachesPeriodic { step: usize, point: Rat },
    /// `f^step(G)` is a point with an eventually periodic orbit.
    Collapses { step: usize },
    /// `f^step(G)` lies in a contracting trap around this periodic point.
    Attracted { step: usize, point: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WanderingReport {
    /// Intervals meeting the set of points whose ω-limit is a cycle.
    pub z_evidence: Vec<(Interval, ZEvidence)>,
    /// Intervals whose iterates stayed pairwise disjoint through the budget.
    pub candidates: Vec<Interval>,
    pub undecided: Vec<Interval>,
}

struct PeriodicData {
    points: Vec<(Rat, usize)>,
    continua: Vec<Interval>,
    powers: Vec<PLMap>,
}

impl PeriodicData {
    fn collect(map: &PLMap, max_period: usize) -> Result<Self> {
        let mut points = Vec::new();
        let mut continua = Vec::new();
        for n in 1..=max_period {
            let pp = periodic_points(map, n, DEFAULT_KNOT_CAP)?;
            points.extend(pp.points.into_iter().filter(|p| p.minimal_period == n).map(|p| (p.x, n)));
            continua.extend(pp.continua.into_iter().map(|c| c.interval));
        }
        let mut powers = Vec::new();
        ensure_powers(map, &mut powers, max_period, DEFAULT_KNOT_CAP)?;
        Ok(PeriodicData { points, continua, powers })
    }

    fn hit(&self, i: &Interval) -> Option<Rat> {
        self.points
            .iter()
            .map(|(p, _)| p)
            .find(|p| i.contains(p))
            .cloned()
            .or_else(|| self.continua.iter().find_map(|c| c.intersect(i)).map(|j| j.lo))
    }

    fn trap(&self, i: &Interval) -> Option<Rat> {
        self.points.iter().find_map(|(p, n)| {
            let g = &self.powers[n - 1];
            let side = if &i.hi <= p { Side::L } else { Side::R };
            if g.slope_on_side(p, side).is_none_or(|s| s.abs() >= Rat::one()) {
                return None;
            }
            let j = Interval::new(rat::min(&i.lo, p), rat::max(&i.hi, p));
            contracts_into(g, &j).then(|| p.clone())
        })
    }
}

fn overlaps_any(seen: &BTreeMap<Rat, Rat>, i: &Interval) -> bool {
    let before = seen.range(..=i.lo.clone()).next_back().is_some_and(|(lo, hi)| hi > &i.lo || lo == &i.lo);
    let after = seen.range((Bound::Excluded(i.lo.clone()), Bound::Unbounded)).next().is_some_and(|(lo, _)| lo < &i.hi);
    before || after
}

/// Splits [0,1] into `grid` equal intervals and checks each for wandering.
pub fn wandering_check(map: &PLMap, grid: usize, budget: usize) -> Result<WanderingReport> {
    if grid == 0 {
        return Err(Error::domain("grid must be positive"));
    }
    let g = grid as i64;
    let intervals: Vec<Interval> = (0..g).map(|i| Interval::new(rat::frac(i, g), rat::frac(i + 1, g))).collect();
    wandering_check_intervals(map, &intervals, budget, budget.clamp(1, WANDER_MAX_PERIOD))
}

pub fn wandering_check_intervals(
    map: &PLMap,
    intervals: &[Interval],
    budget: usize,
    max_period: usize,
) -> Result<WanderingReport> {
    if max_period == 0 {
        return Err(Error::domain("max_period must be positive"));
    }
    let per = PeriodicData::collect(map, max_period)?;
    let mut report = WanderingReport::default();
    'outer: for g in intervals {
        if g.is_point() {
            return Err(Error::pre(format!("{g} is degenerate")));
        }
        let mut seen: BTreeMap<Rat, Rat> = BTreeMap::new();
        let mut disjoint = true;
        let mut cur = g.clone();
        for step in 0..=budget {
            if let Some(point) = per.hit(&cur) {
                report.z_evidence.push((g.clone(), ZEvidence::ReachesPeriodic { step, point }));
                continue 'outer;
            }
            if cur.is_point() {
                if orbit_to_cycle(map, &cur.lo, budget).1.is_some() {
                    report.z_evidence.push((g.clone(), ZEvidence::Collapses { step }));
                } else {
                    report.undecided.push(g.clone());
                }
                continue 'outer;
            }
            if step == 0 || step.is_power_of_two() {
                if let Some(point) = per.trap(&cur) {
                    report.z_evidence.push((g.clone(), ZEvidence::Attracted { step, point }));
                    continue 'outer;
                }
            }
            if disjoint {
                if overlaps_any(&seen, &cur) {
                    disjoint = false;
                } else {
                    seen.insert(cur.lo.clone(), cur.hi.clone());
                }
            }
            cur = map.image(&cur);
        }
        if disjoint {
            report.candidates.push(g.clone());
        } else {
            report.undecided.push(g.clone());
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Neutral,
    Repelling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicOrbit {
    pub orbit: Vec<Rat>,
    pub period: usize,
    pub stability: Stability,
}

/// Periodic data outside the basic sets: isolated orbits and bands of periodic points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Genus0 {
    pub orbits: Vec<PeriodicOrbit>,
    pub bands: Vec<PeriodicBand>,
}

/// Nested cycles of intervals with strictly dividing periods around a band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolenoidEvidence {
    pub levels: Vec<CycleOfIntervals>,
}

impl SolenoidEvidence {
    pub fn periods(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.period).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub basic_sets: Vec<BasicSetApprox>,
    pub solenoids: Vec<SolenoidEvidence>,
    pub genus0: Genus0,
    /// Cell midpoints with their ω-verdicts.
    pub per_point: Vec<(Rat, OmegaVerdict)>,
    /// Distinct basic-set approximations share at most finitely many points.
    pub intersections_finite: bool,
}

fn stability(map: &PLMap, x: &Rat, period: usize) -> Stability {
    let mults: Vec<Rat> = [Side::L, Side::R]
        .into_iter()
        .filter(|&s| !(s == Side::L && x.is_zero()) && !(s == Side::R && x.is_one()))
        .filter_map(|s| one_sided_slope(map, x, period, s).map(|m| m.abs()))
        .collect();
    if mults.iter().all(|m| m < &Rat::one()) {
        Stability::Attracting
    } else if mults.iter().all(|m| m > &Rat::one()) {
        Stability::Repelling
    } else {
        Stability::Neutral
    }
}

fn solenoid_chains(ms: &MarkovSystem, bands: &[PeriodicBand]) -> Vec<SolenoidEvidence> {
    let cycles: Vec<CycleOfIntervals> =
        ms.cyclic_sccs().iter().filter_map(|s| cycle_of_cells(ms, s).ok()).filter(|c| c.period > 1).collect();
    let mut out: Vec<SolenoidEvidence> = Vec::new();
    for band in bands {
        let core = IntervalSet::from_intervals(band.cells.iter().cloned());
        let mut widest: BTreeMap<usize, CycleOfIntervals> = BTreeMap::new();
        for c in cycles.iter().filter(|c| core.is_subset(&c.union())) {
            let keep = widest.get(&c.period).is_none_or(|w| c.union().total_length() > w.union().total_length());
            if keep {
                widest.insert(c.period, c.clone());
            }
        }
        let mut levels: Vec<CycleOfIntervals> = Vec::new();
        for c in widest.into_values() {
            let fits = levels.last().is_none_or(|l| c.period % l.period == 0 && c.union().is_subset(&l.union()));
            if fits {
                levels.push(c);
            }
        }
        if levels.len() >= 3 && !out.iter().any(|e| e.levels == levels) {
            out.push(SolenoidEvidence { levels });
        }
    }
    out
}

/// Basic sets, solenoid evidence, genus-0 periodic data and per-cell ω-verdicts.
pub fn spectral_decomposition(ms: &MarkovSystem, depth: usize, budget: usize) -> Result<DecompositionReport> {
    let map = ms.map();
    let basic = basic_sets(ms, depth)?;
    let bands = bands(ms);
    let solenoids = solenoid_chains(ms, &bands);
    let in_band = |x: &Rat| bands.iter().any(|b| b.cells.iter().any(|c| c.contains(x)));
    let in_basic = |x: &Rat| basic.iter().any(|b| b.outer.contains(x));
    let mut orbits: Vec<PeriodicOrbit> = Vec::new();
    let mut seen: BTreeSet<Rat> = BTreeSet::new();
    for n in 1..=GENUS0_MAX_PERIOD {
        let pp = match periodic_points(map, n, DEFAULT_KNOT_CAP) {
            Ok(pp) => pp,
            Err(e) if e.is_resource() => break,
            Err(e) => return Err(e),
        };
        for p in pp.points.into_iter().filter(|p| p.minimal_period == n) {
            if seen.contains(&p.x) || in_band(&p.x) || in_basic(&p.x) {
                continue;
            }
            let orbit = sorted_cycle(map, &p.x, n);
            seen.extend(orbit.iter().cloned());
            orbits.push(PeriodicOrbit { stability: stability(map, &p.x, n), orbit, period: n });
        }
    }
    orbits.sort_by(|a, b| a.orbit[0].cmp(&b.orbit[0]));
    let mut per_point = Vec::new();
    for c in ms.cells() {
        let x = c.midpoint();
        let v = classify_omega_in(map, Some(ms), &x, budget)?;
        per_point.push((x, v));
    }
    let intersections_finite =
        basic.iter().enumerate().all(|(i, a)| basic[i + 1..].iter().all(|b| a.outer.intersect(&b.outer).is_finite()));
    Ok(DecompositionReport {
        basic_sets: basic,
        solenoids,
        genus0: Genus0 { orbits, bands },
        per_point,
        intersections_finite,
    })
}
