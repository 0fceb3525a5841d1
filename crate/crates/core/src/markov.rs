//! Markov systems: a map plus a forward-invariant finite partition and its cover graph.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::map::{PLMap, Side};
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovSystem {
    map: PLMap,
    points: Vec<Rat>,
    succ: Vec<Vec<usize>>,
    cyclic: Vec<bool>,
}

/// Follows breakpoint images until no new point appears. `None` means not Markov within the budget.
pub fn markovize(map: &PLMap, max_steps: usize) -> Option<MarkovSystem> {
    let mut seen: BTreeSet<Rat> = map.breakpoints().iter().cloned().collect();
    let mut frontier: Vec<Rat> = seen.iter().cloned().collect();
    for _ in 0..max_steps {
        let mut next = Vec::new();
        for p in &frontier {
            let y = map.at(p);
            if seen.insert(y.clone()) {
                next.push(y);
            }
        }
        if next.is_empty() {
            return Some(MarkovSystem::build(map.clone(), seen.into_iter().collect()));
        }
        frontier = next;
    }
    None
}

impl MarkovSystem {
    fn build(map: PLMap, points: Vec<Rat>) -> Self {
        let cells: Vec<Interval> = points.windows(2).map(|w| Interval::new(w[0].clone(), w[1].clone())).collect();
        let succ = cells
            .iter()
            .map(|c| {
                let img = map.image(c);
                if img.is_point() {
                    return Vec::new();
                }
                let a = points.partition_point(|p| p < &img.lo);
                let b = points.partition_point(|p| p < &img.hi);
                (a..b).collect()
            })
            .collect();
        let mut ms = MarkovSystem { map, points, succ, cyclic: Vec::new() };
        let mut cyclic = vec![false; ms.n_cells()];
        for c in ms.cyclic_sccs() {
            for i in c {
                cyclic[i] = true;
            }
        }
        ms.cyclic = cyclic;
        ms
    }

    /// Uses the given points as the partition after checking forward invariance.
    pub fn from_points(map: &PLMap, pts: impl IntoIterator<Item = Rat>) -> Result<Self> {
        let mut set: BTreeSet<Rat> = pts.into_iter().collect();
        set.extend(map.breakpoints().iter().cloned());
        for p in &set {
            if !rat::in_unit(p) {
                return Err(Error::domain(format!("partition point {} outside [0,1]", rat::show(p))));
            }
            if !set.contains(&map.at(p)) {
                return Err(Error::pre(format!(
                    "partition not forward invariant: f({}) = {}",
                    rat::show(p),
                    rat::show(&map.at(p))
                )));
            }
        }
        Ok(Self::build(map.clone(), set.into_iter().collect()))
    }

    /// Adds the forward orbits of `xs`; `None` if some orbit is not eventually periodic within `budget`.
    pub fn with_orbits(&self, xs: &[Rat], budget: usize) -> Option<MarkovSystem> {
        let mut set: BTreeSet<Rat> = self.points.iter().cloned().collect();
        for x in xs {
            let mut y = x.clone();
            let mut steps = 0;
            while set.insert(y.clone()) {
                steps += 1;
                if steps > budget {
                    return None;
                }
                y = self.map.at(&y);
            }
        }
        if set.len() == self.points.len() {
            return Some(self.clone());
        }
        Some(Self::build(self.map.clone(), set.into_iter().collect()))
    }

    /// One backward refinement step: the partition becomes `P ∪ f⁻¹(P)`.
    pub fn refine(&self) -> MarkovSystem {
        let mut set: BTreeSet<Rat> = self.points.iter().cloned().collect();
        // constant pieces give whole cells, whose ends are already points
        for p in &self.points {
            for comp in self.map.preimages(p).components() {
                set.insert(comp.lo.clone());
                set.insert(comp.hi.clone());
            }
        }
        Self::build(self.map.clone(), set.into_iter().collect())
    }

    pub fn refine_n(&self, n: usize) -> MarkovSystem {
        (0..n).fold(self.clone(), |ms, _| ms.refine())
    }

    pub fn map(&self) -> &PLMap {
        &self.map
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn n_cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn cell(&self, i: usize) -> Interval {
        Interval::new(self.points[i].clone(), self.points[i + 1].clone())
    }

    pub fn cells(&self) -> Vec<Interval> {
        (0..self.n_cells()).map(|i| self.cell(i)).collect()
    }

    pub fn succ(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn cover(&self) -> Vec<Vec<bool>> {
        let n = self.n_cells();
        self.succ
            .iter()
            .map(|s| {
                let mut row = vec![false; n];
                s.iter().for_each(|&j| row[j] = true);
                row
            })
            .collect()
    }

    /// A cell on which the map is constant.
    pub fn is_degenerate(&self, i: usize) -> bool {
        self.succ[i].is_empty()
    }

    pub fn is_point(&self, x: &Rat) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// The cell adjacent to `x` on `side`, for any `x` in [0,1].
    pub fn cell_on_side(&self, x: &Rat, side: Side) -> Option<usize> {
        match side {
            Side::L => {
                let k = self.points.partition_point(|p| p < x);
                (k >= 1 && k <= self.n_cells()).then(|| k - 1)
            }
            Side::R => {
                let k = self.points.partition_point(|p| p <= x);
                (k >= 1 && k <= self.n_cells()).then(|| k - 1)
            }
        }
    }

    /// Cells inside the closed set `s`.
    pub fn cells_within(&self, s: &IntervalSet) -> Vec<usize> {
        (0..self.n_cells()).filter(|&i| s.contains_interval(&self.cell(i))).collect()
    }

    pub fn union_of(&self, cells: impl IntoIterator<Item = usize>) -> IntervalSet {
        IntervalSet::from_intervals(cells.into_iter().map(|i| self.cell(i)))
    }

    /// Cells reachable from `from` in zero or more steps.
    pub fn reach(&self, from: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n_cells()];
        let mut q: VecDeque<usize> = VecDeque::new();
        for i in from {
            if !seen[i] {
                seen[i] = true;
                q.push_back(i);
            }
        }
        while let Some(i) = q.pop_front() {
            for &j in &self.succ[i] {
                if !seen[j] {
                    seen[j] = true;
                    q.push_back(j);
                }
            }
        }
        seen
    }

    /// Cells reachable in one or more steps.
    pub fn reach_plus(&self, from: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let starts: Vec<usize> = from.into_iter().flat_map(|i| self.succ[i].iter().copied()).collect();
        self.reach(starts)
    }

    /// Strongly connected components, each sorted, in reverse topological order.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..self.n_cells()).map(|_| g.add_node(())).collect();
        for (i, s) in self.succ.iter().enumerate() {
            for &j in s {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
        tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Components that carry a cycle (a self-loop or more than one cell).
    pub fn cyclic_sccs(&self) -> Vec<Vec<usize>> {
        self.sccs().into_iter().filter(|c| c.len() > 1 || self.succ[c[0]].contains(&c[0])).collect()
    }

    /// A cyclic component whose internal edges form a single permutation cycle carries only a periodic orbit.
    pub fn scc_is_permutation(&self, scc: &[usize]) -> bool {
        scc.iter().all(|&i| self.succ[i].iter().filter(|j| scc.binary_search(j).is_ok()).count() == 1)
    }

    /// Cells lying on some cycle of the cover graph.
    pub fn on_cycle(&self) -> &[bool] {
        &self.cyclic
    }

    /// Periodic partition points with their periods, found on the functional graph `p ↦ f(p)`.
    pub fn periodic_partition_points(&self) -> Vec<(Rat, usize)> {
        let n = self.points.len();
        let next: Vec<usize> = self
            .points
            .iter()
            .map(|p| self.points.binary_search(&self.map.at(p)).expect("partition is forward invariant"))
            .collect();
        // 0 unvisited, 1 on the current path, 2 finished
        let mut state = vec![0u8; n];
        let mut period = vec![0usize; n];
        for s in 0..n {
            let mut path = Vec::new();
            let mut i = s;
            while state[i] == 0 {
                state[i] = 1;
                path.push(i);
                i = next[i];
            }
            if state[i] == 1 {
                let k = path.iter().position(|&j| j == i).unwrap();
                let q = path.len() - k;
                for &j in &path[k..] {
                    period[j] = q;
                }
            }
            for j in path {
                state[j] = 2;
            }
        }
        (0..n).filter(|&i| period[i] > 0).map(|i| (self.points[i].clone(), period[i])).collect()
    }

    /// True if the graph is one strongly connected component covering every cell.
    pub fn is_irreducible(&self) -> bool {
        let s = self.sccs();
        s.len() == 1 && (self.n_cells() > 1 || self.succ[0].contains(&0))
    }

    /// gcd of cycle lengths of an irreducible graph, from BFS levels.
    pub fn period(&self) -> usize {
        let n = self.n_cells();
        let mut level: Vec<Option<usize>> = vec![None; n];
        level[0] = Some(0);
        let mut q = VecDeque::from([0usize]);
        let mut g = 0usize;
        while let Some(i) = q.pop_front() {
            let li = level[i].unwrap();
            for &j in &self.succ[i] {
                match level[j] {
                    None => {
                        level[j] = Some(li + 1);
                        q.push_back(j);
                    }
                    Some(lj) => g = gcd(g, li + 1 - lj),
                }
            }
        }
        g
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
