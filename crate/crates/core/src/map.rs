//! Continuous piecewise-linear self-maps of [0,1] with rational knots.

use num_traits::{Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::rat::{self, Rat};

pub const DEFAULT_KNOT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

/// A point together with a side, optionally relative to an ambient interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SidedPoint {
    pub x: Rat,
    pub side: Side,
}

impl SidedPoint {
    pub fn new(x: Rat, side: Side) -> Self {
        SidedPoint { x, side }
    }

    /// Checks the side points into `ambient` (and into [0,1]).
    pub fn valid_in(&self, ambient: &Interval) -> bool {
        ambient.contains(&self.x)
            && !(self.x == ambient.lo && self.side == Side::L)
            && !(self.x == ambient.hi && self.side == Side::R)
    }
}

impl fmt::Display for SidedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", rat::show(&self.x), self.side)
    }
}

/// A knot `(x, y)` written as `((p, q), (r, s))` for `x = p/q`, `y = r/s`.
pub type FracKnot = ((i64, i64), (i64, i64));

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PLMap {
    xs: Vec<Rat>,
    ys: Vec<Rat>,
    slopes: Vec<Rat>,
}

impl PLMap {
    /// Builds a map from knots `(x, f(x))`. Collinear interior knots are dropped.
    pub fn new(knots: Vec<(Rat, Rat)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("a map needs at least two knots"));
        }
        if !knots[0].0.is_zero() || knots[knots.len() - 1].0 != rat::one() {
            return Err(Error::domain("first knot must be at x = 0 and last at x = 1"));
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain(format!("knots not strictly increasing at x = {}", rat::show(&w[1].0))));
            }
        }
        if let Some((x, _)) = knots.iter().find(|(_, y)| !rat::in_unit(y)) {
            return Err(Error::domain(format!("value at x = {} outside [0,1]", rat::show(x))));
        }
        let (xs, ys) = knots.into_iter().unzip();
        Ok(Self::canonical(xs, ys))
    }

    /// Convenience constructor from small integer pairs `((p, q), (r, s))`.
    pub fn from_fracs(knots: &[FracKnot]) -> Result<Self> {
        Self::new(knots.iter().map(|&((a, b), (c, d))| (rat::frac(a, b), rat::frac(c, d))).collect())
    }

    pub fn identity() -> Self {
        Self::canonical(vec![rat::zero(), rat::one()], vec![rat::zero(), rat::one()])
    }

    fn canonical(xs: Vec<Rat>, ys: Vec<Rat>) -> Self {
        let (ox, oy) = Self::simplify(xs, ys);
        let slopes = (0..ox.len() - 1).map(|i| (&oy[i + 1] - &oy[i]) / (&ox[i + 1] - &ox[i])).collect();
        PLMap { xs: ox, ys: oy, slopes }
    }

    /// Drops interior knots collinear with their neighbours.
    fn simplify(xs: Vec<Rat>, ys: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
        let mut ox: Vec<Rat> = Vec::with_capacity(xs.len());
        let mut oy: Vec<Rat> = Vec::with_capacity(ys.len());
        for (x, y) in xs.into_iter().zip(ys) {
            if ox.len() >= 2 {
                let n = ox.len();
                let lhs = (&oy[n - 1] - &oy[n - 2]) * (&x - &ox[n - 1]);
                let rhs = (&y - &oy[n - 1]) * (&ox[n - 1] - &ox[n - 2]);
                if lhs == rhs {
                    ox.pop();
                    oy.pop();
                }
            }
            ox.push(x);
            oy.push(y);
        }
        (ox, oy)
    }

    pub fn knots(&self) -> impl Iterator<Item = (&Rat, &Rat)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.xs
    }

    pub fn values(&self) -> &[Rat] {
        &self.ys
    }

    pub fn num_pieces(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn piece(&self, i: usize) -> (Interval, Rat) {
        (Interval::new(self.xs[i].clone(), self.xs[i + 1].clone()), self.slope(i))
    }

    pub fn slope(&self, i: usize) -> Rat {
        self.slopes[i].clone()
    }

    /// Index of the piece whose closed domain contains `x`, preferring the left piece at knots.
    fn piece_at(&self, x: &Rat) -> usize {
        let idx = self.xs.partition_point(|k| k < x);
        idx.saturating_sub(1).min(self.num_pieces() - 1)
    }

    /// Index of the piece adjacent to `x` on the given side, if any.
    pub fn piece_on_side(&self, x: &Rat, side: Side) -> Option<usize> {
        match side {
            Side::L => {
                if x.is_zero() || x.is_negative() {
                    return None;
                }
                Some(self.xs.partition_point(|k| k < x) - 1)
            }
            Side::R => {
                if x >= &rat::one() {
                    return None;
                }
                Some(self.xs.partition_point(|k| k <= x) - 1)
            }
        }
    }

    pub fn slope_on_side(&self, x: &Rat, side: Side) -> Option<Rat> {
        self.piece_on_side(x, side).map(|i| self.slope(i))
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if !rat::in_unit(x) {
            return Err(Error::domain(format!("x = {} outside [0,1]", rat::show(x))));
        }
        Ok(self.at(x))
    }

    /// `eval` without the domain check; callers guarantee `x` in [0,1].
    pub fn at(&self, x: &Rat) -> Rat {
        let i = self.piece_at(x);
        if &self.xs[i] == x {
            return self.ys[i].clone();
        }
        if &self.xs[i + 1] == x {
            return self.ys[i + 1].clone();
        }
        &self.ys[i] + &self.slopes[i] * (x - &self.xs[i])
    }

    pub fn iterate(&self, x: &Rat, n: usize) -> Rat {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.at(&y);
        }
        y
    }

    /// `self ∘ inner`, splitting each piece of `inner` at preimages of our knots.
    pub fn compose(&self, inner: &PLMap, cap: usize) -> Result<PLMap> {
        let (xs, ys) = self.compose_knots(&inner.xs, &inner.ys, cap)?;
        Ok(Self::canonical(xs, ys))
    }

    /// Applies the map after the piecewise-linear function with knots `(ixs, iys)` on any domain.
    fn compose_knots(&self, ixs: &[Rat], iys: &[Rat], cap: usize) -> Result<(Vec<Rat>, Vec<Rat>)> {
        let mut xs: Vec<Rat> = Vec::with_capacity(ixs.len() * 2);
        let mut ys: Vec<Rat> = Vec::with_capacity(ixs.len() * 2);
        xs.push(ixs[0].clone());
        ys.push(self.at(&iys[0]));
        for i in 0..ixs.len() - 1 {
            let (y0, y1) = (&iys[i], &iys[i + 1]);
            if y0 != y1 {
                let (lo, hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
                let a = self.xs.partition_point(|k| k <= lo);
                let b = self.xs.partition_point(|k| k < hi);
                let (x0, x1) = (&ixs[i], &ixs[i + 1]);
                let scale = (x1 - x0) / (y1 - y0);
                let mut push = |k: usize| {
                    xs.push(x0 + (&self.xs[k] - y0) * &scale);
                    ys.push(self.ys[k].clone());
                };
                if y0 < y1 {
                    (a..b).for_each(&mut push);
                } else {
                    (a..b).rev().for_each(&mut push);
                }
            }
            xs.push(ixs[i + 1].clone());
            ys.push(self.at(&iys[i + 1]));
            if xs.len() > cap {
                return Err(Error::resource(format!("composition exceeds knot cap {cap}")));
            }
        }
        Ok(Self::simplify(xs, ys))
    }

    /// Knots `(x, f^n(x))` of the `n`-th iterate on `j` alone.
    pub fn power_on(&self, j: &Interval, n: usize, cap: usize) -> Result<Vec<(Rat, Rat)>> {
        if n == 0 {
            return Err(Error::domain("power_on needs n >= 1"));
        }
        if !rat::in_unit(&j.lo) || !rat::in_unit(&j.hi) {
            return Err(Error::domain(format!("{j} is not inside [0,1]")));
        }
        let mut xs: Vec<Rat> = vec![j.lo.clone()];
        xs.extend(self.xs.iter().filter(|k| j.contains_interior(k)).cloned());
        if !j.is_point() {
            xs.push(j.hi.clone());
        }
        let mut ys: Vec<Rat> = xs.clone();
        for _ in 0..n {
            if xs.len() == 1 {
                ys[0] = self.at(&ys[0]);
                continue;
            }
            (xs, ys) = self.compose_knots(&xs, &ys, cap)?;
        }
        Ok(xs.into_iter().zip(ys).collect())
    }

    pub fn power(&self, n: usize, cap: usize) -> Result<PLMap> {
        if n == 0 {
            return Err(Error::domain("power_map needs n >= 1"));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc, cap)?;
        }
        Ok(acc)
    }

    /// Full preimage of `y`; constant pieces contribute intervals.
    pub fn preimages(&self, y: &Rat) -> IntervalSet {
        self.preimages_within(y, &Interval::unit())
    }

    pub fn preimages_within(&self, y: &Rat, within: &Interval) -> IntervalSet {
        let mut out = Vec::new();
        for i in 0..self.num_pieces() {
            let (x0, x1) = (&self.xs[i], &self.xs[i + 1]);
            if x1 < &within.lo || x0 > &within.hi {
                continue;
            }
            let (y0, y1) = (&self.ys[i], &self.ys[i + 1]);
            let hit = if y0 == y1 {
                (y0 == y).then(|| Interval::new(x0.clone(), x1.clone()))
            } else if (y0 <= y && y <= y1) || (y1 <= y && y <= y0) {
                Some(Interval::point(x0 + (y - y0) * (x1 - x0) / (y1 - y0)))
            } else {
                None
            };
            if let Some(h) = hit.and_then(|h| h.intersect(within)) {
                out.push(h);
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn image(&self, i: &Interval) -> Interval {
        let mut lo = self.at(&i.lo);
        let mut hi = lo.clone();
        let fhi = self.at(&i.hi);
        let a = self.xs.partition_point(|k| k <= &i.lo);
        let b = self.xs.partition_point(|k| k < &i.hi).max(a);
        for v in self.ys[a..b].iter().chain(std::iter::once(&fhi)) {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }

    pub fn image_set(&self, s: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(s.components().iter().map(|c| self.image(c)))
    }

    /// Image of `i` under `f^n`.
    pub fn image_n(&self, i: &Interval, n: usize) -> Interval {
        let mut cur = i.clone();
        for _ in 0..n {
            cur = self.image(&cur);
        }
        cur
    }

    /// The one-sided image of a pair; `None` when `f` is constant on that side.
    pub fn pair_image(&self, p: &SidedPoint) -> Option<SidedPoint> {
        let s = self.slope_on_side(&p.x, p.side)?;
        let y = self.at(&p.x);
        if s.is_zero() {
            None
        } else if s.is_positive() {
            Some(SidedPoint::new(y, p.side))
        } else {
            Some(SidedPoint::new(y, p.side.flip()))
        }
    }

    /// Closed `K ⊂ J` with `f(K) = I`, assuming `I ⊆ f(J)`.
    pub fn pullback(&self, target: &Interval, within: &Interval) -> Option<Interval> {
        if !self.image(within).contains_interval(target) {
            return None;
        }
        let lo = self.preimages_within(&target.lo, within);
        if target.is_point() {
            let c = lo.components().first()?;
            return Some(Interval::point(c.lo.clone()));
        }
        let hi = self.preimages_within(&target.hi, within);
        let mut marks: Vec<(Rat, bool)> = Vec::new();
        for c in lo.components() {
            marks.push((c.lo.clone(), false));
            marks.push((c.hi.clone(), false));
        }
        for c in hi.components() {
            marks.push((c.lo.clone(), true));
            marks.push((c.hi.clone(), true));
        }
        marks.sort();
        marks.dedup();
        marks.windows(2).find(|w| w[0].1 != w[1].1).map(|w| Interval::new(w[0].0.clone(), w[1].0.clone()))
    }

    /// All pullbacks of `target` inside `within`, one per adjacent crossing pair.
    pub fn pullbacks(&self, target: &Interval, within: &Interval) -> Vec<Interval> {
        if target.is_point() {
            return self
                .preimages_within(&target.lo, within)
                .components()
                .iter()
                .map(|c| Interval::point(c.lo.clone()))
                .collect();
        }
        let mut marks: Vec<(Rat, bool)> = Vec::new();
        for (v, tag) in [(&target.lo, false), (&target.hi, true)] {
            for c in self.preimages_within(v, within).components() {
                marks.push((c.lo.clone(), tag));
                marks.push((c.hi.clone(), tag));
            }
        }
        marks.sort();
        marks.dedup();
        marks.windows(2).filter(|w| w[0].1 != w[1].1).map(|w| Interval::new(w[0].0.clone(), w[1].0.clone())).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.xs.len() == 2 && self.ys[0].is_zero() && self.ys[1] == rat::one()
    }

    /// True when `f` agrees with the identity on all of `i`.
    pub fn is_identity_on(&self, i: &Interval) -> bool {
        if self.at(&i.lo) != i.lo || self.at(&i.hi) != i.hi {
            return false;
        }
        let a = self.xs.partition_point(|k| k <= &i.lo);
        let b = self.xs.partition_point(|k| k < &i.hi);
        (a..b).all(|k| self.ys[k] == self.xs[k])
    }

    /// The map `t ↦ (f(lo + t(hi-lo)) - lo)/(hi-lo)`, for an interval with `f(I) ⊆ I`.
    pub fn restrict_rescaled(&self, i: &Interval) -> Result<PLMap> {
        if i.is_point() {
            return Err(Error::domain("cannot rescale onto a point"));
        }
        if !i.contains_interval(&self.image(i)) {
            return Err(Error::pre(format!("{i} is not invariant")));
        }
        let w = i.len();
        let mut knots = vec![(rat::zero(), (self.at(&i.lo) - &i.lo) / &w)];
        for (x, y) in self.knots() {
            if i.contains_interior(x) {
                knots.push(((x - &i.lo) / &w, (y - &i.lo) / &w));
            }
        }
        knots.push((rat::one(), (self.at(&i.hi) - &i.lo) / &w));
        PLMap::new(knots)
    }

    /// Text format: one `x y` knot per line, `#` comments.
    pub fn parse_text(text: &str) -> Result<PLMap> {
        let mut knots = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse { line: line_no, msg: format!("expected `x y`, got {line:?}") });
            }
            let at =
                |s: &str| rat::parse(s).map_err(|_| Error::Parse { line: line_no, msg: format!("bad rational {s:?}") });
            knots.push((at(parts[0])?, at(parts[1])?, line_no));
        }
        if knots.is_empty() {
            return Err(Error::Parse { line: 0, msg: "no knots".into() });
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::Parse { line: w[1].2, msg: "x values must be strictly increasing".into() });
            }
        }
        if let Some(k) = knots.iter().find(|k| !rat::in_unit(&k.0) || !rat::in_unit(&k.1)) {
            return Err(Error::Parse { line: k.2, msg: "knot outside the unit square".into() });
        }
        if !knots[0].0.is_zero() {
            return Err(Error::Parse { line: knots[0].2, msg: "first knot must have x = 0".into() });
        }
        let last = &knots[knots.len() - 1];
        if last.0 != rat::one() {
            return Err(Error::Parse { line: last.2, msg: "last knot must have x = 1".into() });
        }
        PLMap::new(knots.into_iter().map(|(x, y, _)| (x, y)).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (x, y) in self.knots() {
            s.push_str(&format!("{} {}\n", rat::show(x), rat::show(y)));
        }
        s
    }
}
