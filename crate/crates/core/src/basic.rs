//! Basic sets of Markov systems as nested outer approximations, and the gap-collapsing quotient.

use std::collections::BTreeMap;

use crate::cycle::{cycle_of_cells, CycleOfIntervals};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::PLMap;
use crate::markov::MarkovSystem;
use crate::rat::{self, Rat};

/// Orbit budget used when cycle endpoints are added to a partition.
const ENDPOINT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicSetApprox {
    pub ambient: CycleOfIntervals,
    pub depth: usize,
    /// Contains the basic set; empty when the ambient cycle carries none.
    pub outer: IntervalSet,
    pub gaps: Vec<Interval>,
    /// The refined system the approximation was read from.
    pub system: MarkovSystem,
    /// Cells of `system` making up `outer`.
    pub kept: Vec<usize>,
}

impl BasicSetApprox {
    pub fn is_basic(&self) -> bool {
        !self.outer.is_empty()
    }

    /// No gap cell maps over a kept cell.
    pub fn gaps_invariant(&self) -> bool {
        let map = self.system.map();
        self.gaps.iter().all(|g| {
            let img = IntervalSet::from_interval(map.image(g));
            img.intersect(&self.outer).solid().is_empty()
        })
    }
}

/// Refines `depth` times and keeps the cells of the cycle from which every cell of the cycle is reachable.
pub fn basic_set(ms: &MarkovSystem, cycle: &CycleOfIntervals, depth: usize) -> Result<BasicSetApprox> {
    if !cycle.is_invariant(ms.map()) {
        return Err(Error::pre("cycle of intervals is not invariant"));
    }
    let ends: Vec<Rat> = cycle.orbit.iter().flat_map(|i| [i.lo.clone(), i.hi.clone()]).collect();
    let base = ms
        .with_orbits(&ends, ENDPOINT_BUDGET)
        .ok_or_else(|| Error::resource("cycle endpoints are not eventually periodic within budget"))?;
    let system = base.refine_n(depth);
    let m = cycle.union();
    let m_cells = system.cells_within(&m);
    let kept: Vec<usize> = m_cells
        .iter()
        .copied()
        .filter(|&c| {
            let r = system.reach([c]);
            m_cells.iter().all(|&d| r[d])
        })
        .collect();
    let basic = match kept.first() {
        Some(&k) => {
            let scc = system.sccs().into_iter().find(|s| s.contains(&k)).unwrap();
            !system.scc_is_permutation(&scc) && (scc.len() > 1 || system.succ(k).contains(&k))
        }
        None => false,
    };
    let (outer, kept) =
        if basic { (system.union_of(kept.iter().copied()), kept) } else { (IntervalSet::empty(), vec![]) };
    let gaps =
        cycle.orbit.iter().flat_map(|piece| outer.closed_complement_in(piece).solid().into_components()).collect();
    Ok(BasicSetApprox { ambient: cycle.clone(), depth, outer, gaps, system, kept })
}

/// One approximation per cycle carried by a non-permutation recurrent class of the graph.
pub fn basic_sets(ms: &MarkovSystem, depth: usize) -> Result<Vec<BasicSetApprox>> {
    let mut out: Vec<BasicSetApprox> = Vec::new();
    for scc in ms.cyclic_sccs() {
        if ms.scc_is_permutation(&scc) {
            continue;
        }
        let cycle = cycle_of_cells(ms, &scc)?;
        let b = basic_set(ms, &cycle, depth)?;
        if b.is_basic() && !out.iter().any(|o| o.ambient == b.ambient) {
            out.push(b);
        }
    }
    out.sort_by(|a, b| a.outer.components()[0].lo.cmp(&b.outer.components()[0].lo));
    Ok(out)
}

/// Collapses every gap to a point. The quotient is linear on each kept cell and agrees with the
/// collapse at cell endpoints; its cover graph is the graph induced on the kept cells.
pub fn collapse_map(b: &BasicSetApprox) -> Result<MarkovSystem> {
    if !b.is_basic() {
        return Err(Error::pre("ambient cycle carries no basic set"));
    }
    let total = b.outer.total_length();
    let comps = b.outer.components().to_vec();
    let phi = |x: &Rat| -> Rat {
        let mut acc = rat::zero();
        for c in &comps {
            if &c.hi <= x {
                acc += c.len();
            } else if &c.lo < x {
                acc += x - &c.lo;
            }
        }
        acc / &total
    };
    let map = b.system.map();
    let mut knots: BTreeMap<Rat, Rat> = BTreeMap::new();
    for &k in &b.kept {
        let cell = b.system.cell(k);
        for p in [&cell.lo, &cell.hi] {
            let (u, v) = (phi(p), phi(&map.at(p)));
            if let Some(prev) = knots.insert(u.clone(), v.clone()) {
                if prev != v {
                    return Err(Error::pre(format!("gap at {} overlaps the outer set", rat::show(p))));
                }
            }
        }
    }
    let g = PLMap::new(knots.into_iter().collect())?;
    let pts: Vec<Rat> = g.breakpoints().to_vec();
    MarkovSystem::from_points(&g, pts)
}
