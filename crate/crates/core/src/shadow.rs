//! Interval shrinking, the covering margin, and periodic points shadowing prescribed orbit pieces.
//!
//! A request asks for `z` with `f^p z = z`, `f^p` non-reversing at `z`, `f^{a_i} z ∈ U_i`
//! and `|f^t z - f^{t-a_i} x_i| ≤ ε` for `a_i ≤ t ≤ b_i`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::{PLMap, DEFAULT_KNOT_CAP};
use crate::markov::MarkovSystem;
use crate::orbit::{is_reversing, raw_fixed_knots};
use crate::rat::{self, Rat};
use crate::transit::{classify_transitivity, Transitivity};

/// Refinements tried before `spec_margin` gives up on making cells short enough.
const MAX_REFINE: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shrunk {
    pub interval: Interval,
    /// First `j` with `λ(f^j V) = ε`.
    pub reached_at: usize,
}

fn lerp(s: &Rat, s0: &Rat, s1: &Rat, v0: &Rat, v1: &Rat) -> Rat {
    v0 + (v1 - v0) * (s - s0) / (s1 - s0)
}

/// `V ∋ x` inside `U`, grown linearly from `x` towards both ends of `U` as far as all of
/// `λ(f^i V) ≤ ε`, `i ≤ n`, allow. Some image then has length exactly `ε`.
pub fn shrink_interval(map: &PLMap, u: &Interval, x: &Rat, eps: &Rat, n: usize) -> Result<Shrunk> {
    if !eps.is_positive() || u.len() < *eps {
        return Err(Error::pre("need 0 < eps <= length of U"));
    }
    if !u.contains(x) || !rat::in_unit(&u.lo) || !rat::in_unit(&u.hi) {
        return Err(Error::pre("U must lie in [0,1] and contain x"));
    }
    let (dl, dr) = (x - &u.lo, &u.hi - x);
    let at = |s: &Rat| Interval::new(x - s * &dl, x + s * &dr);
    let mut s = rat::one();
    for i in 0..=n {
        let h = |s: &Rat| map.image_n(&at(s), i).len();
        if h(&s) <= *eps {
            continue;
        }
        let mut events = vec![rat::zero(), s.clone()];
        if i > 0 {
            for (k, _) in map.power_on(&at(&s), i, DEFAULT_KNOT_CAP)? {
                if &k < x && dl.is_positive() {
                    events.push((x - &k) / &dl);
                } else if &k > x && dr.is_positive() {
                    events.push((&k - x) / &dr);
                }
            }
        }
        events.retain(|e| e <= &s);
        events.sort();
        events.dedup();
        let k = events.iter().position(|e| h(e) > *eps).expect("h(s) > eps");
        let (e0, e1) = (&events[k - 1], &events[k]);
        // f^i is linear on the parts added between e0 and e1
        let img0 = map.image_n(&at(e0), i);
        let (l0, l1) = (map.iterate(&at(e0).lo, i), map.iterate(&at(e1).lo, i));
        let (r0, r1) = (map.iterate(&at(e0).hi, i), map.iterate(&at(e1).hi, i));
        let lin = |s: &Rat| (lerp(s, e0, e1, &l0, &l1), lerp(s, e0, e1, &r0, &r1));
        let hs = |s: &Rat| {
            let (l, r) = lin(s);
            let top = rat::max(&img0.hi, &rat::max(&l, &r));
            let bot = rat::min(&img0.lo, &rat::min(&l, &r));
            top - bot
        };
        let mut cands = vec![e0.clone(), e1.clone()];
        let mut cross = |a0: &Rat, a1: &Rat, b0: &Rat, b1: &Rat| {
            let (d0, d1) = (a0 - b0, a1 - b1);
            if d0 != d1 {
                let t = e0 + (e1 - e0) * &d0 / (&d0 - &d1);
                if &t > e0 && &t < e1 {
                    cands.push(t);
                }
            }
        };
        for (a0, a1) in [(&l0, &l1), (&r0, &r1)] {
            cross(a0, a1, &img0.hi, &img0.hi);
            cross(a0, a1, &img0.lo, &img0.lo);
        }
        cross(&l0, &l1, &r0, &r1);
        cands.sort();
        cands.dedup();
        let c = cands.iter().position(|c| hs(c) > *eps).expect("hs(e1) > eps");
        let (c0, c1) = (&cands[c - 1], &cands[c]);
        let (h0, h1) = (hs(c0), hs(c1));
        s = c0 + (eps - &h0) * (c1 - c0) / (h1 - h0);
    }
    let v = at(&s);
    let reached_at = (0..=n)
        .find(|&j| map.image_n(&v, j).len() == *eps)
        .ok_or_else(|| Error::pre("no image reaches eps; U is shorter than eps"))?;
    Ok(Shrunk { interval: v, reached_at })
}

/// Least `M` such that `f^m U = [0,1]` for all `m ≥ M` and every interval `U` longer than `ε/2`.
/// Certified on a refinement whose cells are at most `ε/4` long, so may exceed the true minimum.
pub fn spec_margin(ms: &MarkovSystem, eps: &Rat) -> Result<usize> {
    if !eps.is_positive() {
        return Err(Error::domain("eps must be positive"));
    }
    if classify_transitivity(ms) != Transitivity::Mixing {
        return Err(Error::pre("system is not mixing"));
    }
    let quarter = eps / rat::int(4);
    let mut sys = ms.clone();
    let mut rounds = 0;
    while sys.cells().iter().any(|c| c.len() > quarter) {
        if rounds == MAX_REFINE {
            return Err(Error::resource(format!("cells still longer than eps/4 after {MAX_REFINE} refinements")));
        }
        sys = sys.refine();
        rounds += 1;
    }
    let n = sys.n_cells();
    // Wielandt's bound for primitive matrices
    let bound = (n - 1) * (n - 1) + 1;
    let mut worst = 0;
    for c in 0..n {
        let mut cur = vec![false; n];
        cur[c] = true;
        let mut m = 0;
        while !cur.iter().all(|&b| b) {
            if m > bound {
                return Err(Error::pre("cell never covers [0,1]"));
            }
            let mut next = vec![false; n];
            for (i, _) in cur.iter().enumerate().filter(|(_, &b)| b) {
                for &j in sys.succ(i) {
                    next[j] = true;
                }
            }
            cur = next;
            m += 1;
        }
        worst = worst.max(m);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecTarget {
    pub x: Rat,
    /// Closed neighbourhood of `x` (usually one-sided) of length `ε`.
    pub u: Interval,
    pub window: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecRequest {
    pub targets: Vec<SpecTarget>,
    pub period: usize,
    pub epsilon: Rat,
}

impl SpecRequest {
    /// Checks the request against a margin `m`; the error names the first failing condition.
    pub fn validate(&self, m: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::pre(format!("infeasible request: {msg}")));
        if !self.epsilon.is_positive() || self.epsilon > rat::one() {
            return bad("epsilon must lie in (0,1]".into());
        }
        let Some(first) = self.targets.first() else { return bad("no targets".into()) };
        for (i, t) in self.targets.iter().enumerate() {
            if !rat::in_unit(&t.u.lo) || !rat::in_unit(&t.u.hi) || !t.u.contains(&t.x) {
                return bad(format!("U_{i} must lie in [0,1] and contain x_{i}"));
            }
            if t.u.len() != self.epsilon {
                return bad(format!("U_{i} must have length epsilon"));
            }
            if t.window.0 > t.window.1 {
                return bad(format!("window {i} is reversed"));
            }
            if i > 0 {
                let prev = self.targets[i - 1].window.1;
                if t.window.0 <= prev || t.window.0 - prev < m {
                    return bad(format!("gap before window {i} is shorter than the margin {m}"));
                }
            }
        }
        let last = self.targets.last().unwrap().window.1;
        if self.period < m + last - first.window.0 || self.period == 0 {
            return bad(format!("period must be at least {}", m + last - first.window.0));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecCheck {
    pub periodic: bool,
    pub non_reversing: bool,
    /// Largest `|f^t z - f^{t-a_i} x_i|` over each window.
    pub deviations: Vec<Rat>,
    /// `f^{a_i} z ∈ U_i`.
    pub entries: Vec<bool>,
    /// First clause that fails.
    pub violated: Option<String>,
}

impl SpecCheck {
    pub fn ok(&self) -> bool {
        self.violated.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecResult {
    pub z: Rat,
    pub check: SpecCheck,
}

/// Re-checks every clause of the request at `z` with exact arithmetic.
pub fn verify_spec(map: &PLMap, req: &SpecRequest, z: &Rat) -> SpecCheck {
    let mut check =
        SpecCheck { periodic: false, non_reversing: false, deviations: vec![], entries: vec![], violated: None };
    if !rat::in_unit(z) {
        check.violated = Some("domain: z outside [0,1]".into());
        return check;
    }
    let p = req.period;
    check.periodic = p > 0 && map.iterate(z, p) == *z;
    check.non_reversing = check.periodic && !is_reversing(map, z, p).unwrap_or(true);
    let horizon = req.targets.iter().map(|t| t.window.1).max().unwrap_or(0);
    let mut orbit = Vec::with_capacity(horizon + 1);
    let mut y = z.clone();
    for _ in 0..=horizon {
        let next = map.at(&y);
        orbit.push(y);
        y = next;
    }
    for t in &req.targets {
        let (a, b) = t.window;
        let mut xi = t.x.clone();
        let mut dev = rat::zero();
        for zt in &orbit[a..=b] {
            dev = rat::max(&dev, &(zt - &xi).abs());
            xi = map.at(&xi);
        }
        check.deviations.push(dev);
        check.entries.push(t.u.contains(&orbit[a]));
    }
    check.violated = if !check.periodic {
        Some(format!("period: f^{p}(z) != z"))
    } else if !check.non_reversing {
        Some(format!("non-reversing: f^{p} is reversing at z"))
    } else if let Some(i) = check.deviations.iter().position(|d| d > &req.epsilon) {
        Some(format!("window {i}: deviation {} > epsilon", rat::show(&check.deviations[i])))
    } else {
        check.entries.iter().position(|e| !e).map(|i| format!("entry {i}: f^a(z) not in U_{i}"))
    };
    check
}

/// `imgs[t] = f^t W` for `t ≤ len`.
fn extend(map: &PLMap, imgs: &mut Vec<Interval>, len: usize) {
    while imgs.len() <= len {
        let next = map.image(imgs.last().unwrap());
        imgs.push(next);
    }
}

/// Shrinks `W` so that `f^t W = target`, keeping `imgs` the exact image chain up to `t`.
fn pull(map: &PLMap, imgs: &mut Vec<Interval>, t: usize, target: &Interval) -> Result<()> {
    imgs.truncate(t + 1);
    if !imgs[t].contains_interval(target) {
        return Err(Error::pre(format!("f^{t} W does not cover {target}")));
    }
    imgs[t] = target.clone();
    for j in (0..t).rev() {
        imgs[j] =
            map.pullback(&imgs[j + 1], &imgs[j]).ok_or_else(|| Error::pre(format!("pullback failed at step {j}")))?;
    }
    Ok(())
}

pub fn spec_point(ms: &MarkovSystem, req: &SpecRequest) -> Result<SpecResult> {
    let m = spec_margin(ms, &req.epsilon)?;
    req.validate(m)?;
    let map = ms.map();
    let eps = &req.epsilon;
    let a1 = req.targets[0].window.0;
    let shifted: Vec<(usize, usize)> = req.targets.iter().map(|t| (t.window.0 - a1, t.window.1 - a1)).collect();
    let mut imgs: Vec<Interval> = Vec::new();
    for (i, (t, &(a, b))) in req.targets.iter().zip(&shifted).enumerate() {
        if i == 0 {
            imgs.push(Interval::unit());
        } else {
            extend(map, &mut imgs, a);
            pull(map, &mut imgs, a, &t.u)?;
        }
        let v = shrink_interval(map, &t.u, &t.x, eps, b - a)?;
        pull(map, &mut imgs, a, &v.interval)?;
        extend(map, &mut imgs, b);
    }
    let p = req.period;
    extend(map, &mut imgs, p);
    if imgs[p] != Interval::unit() {
        return Err(Error::pre("f^p W is not [0,1]; margin too small"));
    }
    let w = imgs[0].clone();
    let knots = map.power_on(&w, p, DEFAULT_KNOT_CAP)?;
    let (pts, _) = raw_fixed_knots(&knots);
    let back = (p - a1 % p) % p;
    for zs in pts {
        let z = map.iterate(&zs, back);
        let check = verify_spec(map, req, &z);
        if check.ok() {
            return Ok(SpecResult { z, check });
        }
    }
    Err(Error::pre("no non-reversing periodic point in W"))
}

/// A point of `[e,1]` whose orbit stays within `d` of the orbit of `x` for `horizon` steps.
/// Needs fixed points `0 < e < d` with `f[0,e] ⊆ [0,d]`.
pub fn core_approximant(map: &PLMap, e: &Rat, d: &Rat, x: &Rat, horizon: usize) -> Result<Rat> {
    if !(e.is_positive() && e < d && rat::in_unit(d)) || map.at(e) != *e || map.at(d) != *d {
        return Err(Error::pre("need fixed points 0 < e < d"));
    }
    let low = Interval::new(rat::zero(), e.clone());
    if !Interval::new(rat::zero(), d.clone()).contains_interval(&map.image(&low)) {
        return Err(Error::pre("f[0,e] is not inside [0,d]"));
    }
    if !rat::in_unit(x) {
        return Err(Error::domain("x outside [0,1]"));
    }
    if x > e {
        return Ok(x.clone());
    }
    let mut y = x.clone();
    let mut exit = None;
    for n in 1..=horizon {
        y = map.at(&y);
        if &y > e {
            exit = Some(n);
            break;
        }
    }
    let Some(n) = exit else { return Ok(e.clone()) };
    let band = Interval::new(e.clone(), d.clone());
    for _ in 0..n {
        let pre = map.preimages_within(&y, &band);
        y = pre.components().first().map(|c| c.lo.clone()).ok_or_else(|| Error::pre("f[e,d] does not cover [e,d]"))?;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::markov::markovize;
    use crate::rat::frac;

    fn ms(m: PLMap) -> MarkovSystem {
        markovize(&m, 50).unwrap()
    }

    #[test]
    fn shrink_examples() {
        let id = fixtures::identity();
        let v = shrink_interval(&id, &Interval::unit(), &rat::half(), &frac(1, 4), 3).unwrap();
        assert_eq!(v.interval, Interval::new(frac(3, 8), frac(5, 8)));
        assert_eq!(v.reached_at, 0);
        let t = fixtures::tent();
        let v = shrink_interval(&t, &Interval::unit(), &frac(1, 4), &frac(1, 8), 4).unwrap();
        assert!(v.interval.contains(&frac(1, 4)));
        assert_eq!(t.image_n(&v.interval, v.reached_at).len(), frac(1, 8));
        for i in 0..=4 {
            assert!(t.image_n(&v.interval, i).len() <= frac(1, 8));
        }
        // maximal within the family: growing V by a thousandth breaks the bound
        let grow = |r: &Rat| frac(1, 4) + (r - frac(1, 4)) * frac(1001, 1000);
        let wider = Interval::new(grow(&v.interval.lo), grow(&v.interval.hi));
        assert!((0..=4).any(|i| t.image_n(&wider, i).len() > frac(1, 8)));
        // the fold at 1/2 caps the last image
        let v = shrink_interval(&t, &Interval::new(frac(1, 4), frac(3, 4)), &frac(1, 2), &frac(1, 4), 2).unwrap();
        for i in 0..=2 {
            assert!(t.image_n(&v.interval, i).len() <= frac(1, 4));
        }
        assert!(shrink_interval(&t, &Interval::new(rat::zero(), frac(1, 8)), &rat::zero(), &frac(1, 4), 2).is_err());
    }

    #[test]
    fn margins() {
        let s = ms(fixtures::tent());
        let m = spec_margin(&s, &frac(1, 4)).unwrap();
        assert!(m >= 3);
        assert!(spec_margin(&s, &rat::one()).unwrap() <= 2);
        assert!(spec_margin(&s, &frac(1, 16)).unwrap() >= m);
        assert!(spec_margin(&ms(fixtures::identity()), &frac(1, 4)).is_err());
    }

    #[test]
    fn single_target() {
        let s = ms(fixtures::tent());
        let eps = frac(1, 4);
        let m = spec_margin(&s, &eps).unwrap();
        let x = frac(1, 3);
        let req = SpecRequest {
            targets: vec![SpecTarget { x: x.clone(), u: Interval::new(x.clone(), &x + &eps), window: (0, 0) }],
            period: m,
            epsilon: eps.clone(),
        };
        let r = spec_point(&s, &req).unwrap();
        assert!(r.check.ok());
        assert!(r.z >= x && r.z <= &x + &eps);
        assert_eq!(s.map().iterate(&r.z, m), r.z);
        let off = &r.z + &eps + frac(1, 1000);
        assert!(verify_spec(s.map(), &req, &off).violated.is_some());
        let bad = verify_spec(s.map(), &req, &frac(1, 7));
        assert!(bad.violated.unwrap().starts_with("period"));
    }

    #[test]
    fn two_targets_and_shift() {
        let s = ms(fixtures::skew3());
        let eps = frac(1, 5);
        let m = spec_margin(&s, &eps).unwrap();
        let req = SpecRequest {
            targets: vec![
                SpecTarget { x: frac(1, 10), u: Interval::new(frac(1, 10), frac(3, 10)), window: (2, 4) },
                SpecTarget { x: frac(9, 10), u: Interval::new(frac(7, 10), frac(9, 10)), window: (4 + m, 6 + m) },
            ],
            period: 2 * m + 6,
            epsilon: eps,
        };
        let r = spec_point(&s, &req).unwrap();
        assert!(verify_spec(s.map(), &req, &r.z).ok());
        let mut short = req.clone();
        short.period = 2 * m + 1;
        assert!(spec_point(&s, &short).is_err());
    }

    #[test]
    fn whole_space_request() {
        let s = ms(fixtures::tent());
        let m = spec_margin(&s, &rat::one()).unwrap().max(1);
        let req = SpecRequest {
            targets: vec![SpecTarget { x: rat::zero(), u: Interval::unit(), window: (0, 0) }],
            period: m,
            epsilon: rat::one(),
        };
        assert!(spec_point(&s, &req).unwrap().check.non_reversing);
    }

    #[test]
    fn approximants_follow_the_orbit() {
        let f = PLMap::from_fracs(&[
            ((0, 1), (0, 1)),
            ((1, 40), (3, 40)),
            ((1, 20), (1, 20)),
            ((3, 40), (1, 40)),
            ((1, 10), (1, 10)),
            ((1, 2), (1, 1)),
            ((1, 1), (0, 1)),
        ])
        .unwrap();
        let (e, d) = (frac(1, 20), frac(1, 10));
        for k in 0..=40 {
            let x = frac(k, 800);
            let y = core_approximant(&f, &e, &d, &x, 30).unwrap();
            assert!(y >= e);
            let (mut a, mut b) = (x.clone(), y.clone());
            for _ in 0..30 {
                assert!((&a - &b).abs() <= d);
                a = f.at(&a);
                b = f.at(&b);
            }
        }
        assert_eq!(core_approximant(&f, &e, &d, &frac(1, 2), 5).unwrap(), frac(1, 2));
        assert!(core_approximant(&fixtures::tent(), &e, &d, &rat::zero(), 5).is_err());
    }
}
