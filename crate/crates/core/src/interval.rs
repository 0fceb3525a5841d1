//! Closed rational intervals and normalized finite unions of them.

use std::fmt;

use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Interval { lo, hi }
    }

    /// Interval spanned by two points in either order.
    pub fn hull(a: Rat, b: Rat) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn unit() -> Self {
        Interval { lo: rat::zero(), hi: rat::one() }
    }

    pub fn len(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interior(&self, x: &Rat) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn intersect(&self, o: &Interval) -> Option<Interval> {
        let lo = rat::max(&self.lo, &o.lo);
        let hi = rat::min(&self.hi, &o.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// True when the interiors overlap (positive-length intersection).
    pub fn overlaps(&self, o: &Interval) -> bool {
        rat::max(&self.lo, &o.lo) < rat::min(&self.hi, &o.hi)
    }

    pub fn midpoint(&self) -> Rat {
        rat::mid(&self.lo, &self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", rat::show(&self.lo))
        } else {
            write!(f, "[{}, {}]", rat::show(&self.lo), rat::show(&self.hi))
        }
    }
}

/// Sorted, disjoint, non-adjacent closed intervals. Points are degenerate components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    comps: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { comps: Vec::new() }
    }

    pub fn unit() -> Self {
        IntervalSet { comps: vec![Interval::unit()] }
    }

    pub fn from_interval(i: Interval) -> Self {
        IntervalSet { comps: vec![i] }
    }

    pub fn from_points<I: IntoIterator<Item = Rat>>(pts: I) -> Self {
        Self::from_intervals(pts.into_iter().map(Interval::point))
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(it: I) -> Self {
        let mut v: Vec<Interval> = it.into_iter().collect();
        v.sort();
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { comps: out }
    }

    pub fn components(&self) -> &[Interval] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Interval> {
        self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Every component is a single point.
    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(Interval::is_point)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        // components are sorted; binary search on lo
        let idx = self.comps.partition_point(|c| &c.lo <= x);
        idx > 0 && self.comps[idx - 1].contains(x)
    }

    pub fn contains_interval(&self, i: &Interval) -> bool {
        self.comps.iter().any(|c| c.contains_interval(i))
    }

    pub fn is_subset(&self, o: &IntervalSet) -> bool {
        self.comps.iter().all(|c| o.contains_interval(c))
    }

    pub fn union(&self, o: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.comps.iter().chain(o.comps.iter()).cloned())
    }

    pub fn intersect(&self, o: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.comps.len() && j < o.comps.len() {
            let (a, b) = (&self.comps[i], &o.comps[j]);
            if let Some(x) = a.intersect(b) {
                out.push(x);
            }
            if a.hi < b.hi {
                i += 1
            } else {
                j += 1
            }
        }
        Self::from_intervals(out)
    }

    pub fn intersect_interval(&self, i: &Interval) -> IntervalSet {
        self.intersect(&IntervalSet::from_interval(i.clone()))
    }

    /// Closure of `within \ self`, restricted to `within`.
    pub fn closed_complement_in(&self, within: &Interval) -> IntervalSet {
        let mut out = Vec::new();
        let mut cur = within.lo.clone();
        for c in &self.comps {
            if c.hi < within.lo || c.lo > within.hi {
                continue;
            }
            if c.lo > cur {
                out.push(Interval::new(cur.clone(), c.lo.clone()));
            }
            if c.hi > cur {
                cur = c.hi.clone();
            }
        }
        if cur < within.hi {
            out.push(Interval::new(cur, within.hi.clone()));
        }
        Self::from_intervals(out)
    }

    pub fn total_length(&self) -> Rat {
        self.comps.iter().fold(rat::zero(), |acc, c| acc + c.len())
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.comps.first()?.lo.clone(), self.comps.last()?.hi.clone()))
    }

    /// The components of positive length.
    pub fn solid(&self) -> IntervalSet {
        IntervalSet { comps: self.comps.iter().filter(|c| !c.is_point()).cloned().collect() }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}
