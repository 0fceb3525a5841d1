//! Cycles of intervals, orbit closures of intervals and nested kernels.

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::PLMap;
use crate::markov::MarkovSystem;
use crate::orbit::periodic_points;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleOfIntervals {
    pub base: Interval,
    pub period: usize,
    /// `orbit[i] = f^i(base)`.
    pub orbit: Vec<Interval>,
    /// Set unless the pieces have disjoint interiors and `f^n(base) = base`.
    pub weak: bool,
}

impl CycleOfIntervals {
    /// Builds the cycle generated by `base` under `f^period`, checking the shape.
    pub fn generated(map: &PLMap, base: Interval, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::domain("period must be positive"));
        }
        let mut orbit = vec![base.clone()];
        for _ in 1..period {
            let next = map.image(orbit.last().unwrap());
            orbit.push(next);
        }
        let back = map.image(orbit.last().unwrap());
        if !base.contains_interval(&back) {
            return Err(Error::pre(format!("{base} is not weakly {period}-periodic")));
        }
        let mut sorted = orbit.clone();
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        let disjoint = sorted.windows(2).all(|w| w[0].hi <= w[1].lo);
        Ok(CycleOfIntervals { weak: !(disjoint && back == base), base, period, orbit })
    }

    pub fn whole() -> Self {
        CycleOfIntervals { base: Interval::unit(), period: 1, orbit: vec![Interval::unit()], weak: false }
    }

    pub fn union(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.orbit.iter().cloned())
    }

    pub fn contains(&self, x: &crate::Rat) -> bool {
        self.orbit.iter().any(|i| i.contains(x))
    }

    /// The orbit piece containing `x`, preferring the base.
    pub fn piece_of(&self, x: &crate::Rat) -> Option<usize> {
        (0..self.period).find(|&i| self.orbit[i].contains(x))
    }

    /// `f(orbit[i]) ⊆ orbit[i+1]` for every piece.
    pub fn is_invariant(&self, map: &PLMap) -> bool {
        (0..self.period).all(|i| self.orbit[(i + 1) % self.period].contains_interval(&map.image(&self.orbit[i])))
    }

    /// The cycle formed by the components of a forward-invariant union of cells.
    pub fn from_components(map: &PLMap, set: &IntervalSet, base_hint: &Interval) -> Result<Self> {
        let comps = set.components();
        let start = comps
            .iter()
            .position(|c| c.contains_interval(base_hint))
            .ok_or_else(|| Error::pre("hint not inside the set"))?;
        let mut order = vec![start];
        loop {
            let img = map.image(&comps[*order.last().unwrap()]);
            let next = comps
                .iter()
                .position(|c| c.contains_interval(&img))
                .ok_or_else(|| Error::pre(format!("image {img} leaves the set")))?;
            if next == start {
                break;
            }
            if order.contains(&next) || order.len() > comps.len() {
                return Err(Error::pre("components do not form a single cycle"));
            }
            order.push(next);
        }
        Self::generated(map, comps[start].clone(), order.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    Cycle(CycleOfIntervals),
    /// No iterate of `U` meets `U`, certified by a trapping interval.
    Disjoint,
    Undecided,
}

/// Orbit closure of a non-degenerate interval as a cycle of intervals.
pub fn weakly_periodic_closure(map: &PLMap, u: &Interval, budget: usize) -> Result<Closure> {
    if u.is_point() {
        return Err(Error::pre("interval must be non-degenerate"));
    }
    let mut imgs = vec![u.clone()];
    let mut first_return = None;
    for m in 1..=budget {
        let next = map.image(imgs.last().unwrap());
        if next.overlaps(u) {
            imgs.push(next);
            first_return = Some(m);
            break;
        }
        imgs.push(next);
        if trapped(map, &imgs[m], u) {
            return Ok(Closure::Disjoint);
        }
    }
    let Some(mut period) = first_return else { return Ok(Closure::Undecided) };
    let mut base = u.clone();
    let mut steps = 0;
    loop {
        // grow the base under f^period until it stops changing
        loop {
            let img = map.image_n(&base, period);
            let grown = Interval::new(crate::rat::min(&base.lo, &img.lo), crate::rat::max(&base.hi, &img.hi));
            if grown == base {
                break;
            }
            base = grown;
            steps += 1;
            if steps > budget {
                return Ok(Closure::Undecided);
            }
        }
        let mut orbit = vec![base.clone()];
        for _ in 1..period {
            let next = map.image(orbit.last().unwrap());
            orbit.push(next);
        }
        let merged = merge_overlapping(orbit);
        if merged.len() == period {
            return Ok(Closure::Cycle(CycleOfIntervals::generated(map, base, period)?));
        }
        // pieces overlap: the merged pieces form a shorter cycle
        base = merged.iter().find(|c| c.contains_interval(&base)).unwrap().clone();
        period = merged.len();
    }
}

/// Merges intervals whose interiors meet; intervals that only touch stay apart.
fn merge_overlapping(mut v: Vec<Interval>) -> Vec<Interval> {
    v.sort_by(|a, b| a.lo.cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::new();
    for i in v {
        match out.last_mut() {
            Some(last) if i.lo < last.hi || (i.lo == last.hi && (i.is_point() || last.is_point())) => {
                if i.hi > last.hi {
                    last.hi = i.hi;
                }
            }
            _ => out.push(i),
        }
    }
    out
}

fn trapped(map: &PLMap, img: &Interval, u: &Interval) -> bool {
    let mut cands: Vec<Interval> = Vec::new();
    let next = map.image(img);
    cands.push(Interval::new(crate::rat::min(&img.lo, &next.lo), crate::rat::max(&img.hi, &next.hi)));
    if let Ok(fixed) = periodic_points(map, 1, crate::map::DEFAULT_KNOT_CAP) {
        for p in fixed.points {
            cands.push(Interval::new(crate::rat::min(&img.lo, &p.x), crate::rat::max(&img.hi, &p.x)));
        }
    }
    cands.into_iter().any(|j| !j.overlaps(u) && j.contains_interval(&map.image(&j)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    /// Contains the nested intersection; equal to it when `exact`.
    pub interval: Interval,
    pub exact: bool,
    pub steps: usize,
}

/// `⋂ f^{il} J` for a weakly `l`-periodic `J`.
pub fn kernel_interval(map: &PLMap, j: &Interval, l: usize, budget: usize) -> Result<Kernel> {
    if l == 0 {
        return Err(Error::domain("l must be positive"));
    }
    if !j.contains_interval(&map.image_n(j, l)) {
        return Err(Error::pre(format!("{j} is not weakly {l}-periodic")));
    }
    let mut k = j.clone();
    for steps in 0..budget {
        let next = map.image_n(&k, l);
        if next == k {
            return Ok(Kernel { interval: k, exact: true, steps });
        }
        k = next;
    }
    Ok(Kernel { interval: k, exact: false, steps: budget })
}

/// The cycle carried by a set of cells: the components of everything they reach.
pub fn cycle_of_cells(ms: &MarkovSystem, cells: &[usize]) -> Result<CycleOfIntervals> {
    let reach = ms.reach(cells.iter().copied());
    let set = ms.union_of((0..ms.n_cells()).filter(|&i| reach[i]));
    let first = cells.first().ok_or_else(|| Error::pre("no cells"))?;
    CycleOfIntervals::from_components(ms.map(), &set, &ms.cell(*first))
}
