//! Transitivity and mixing of Markov systems, with the witnesses that come with them.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::{PLMap, Side};
use crate::markov::{markovize, MarkovSystem};
use crate::orbit::periodic_points;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transitivity {
    Mixing,
    /// Transitive with the halves around the fixed point `a` exchanged.
    TransitiveNotMixing(Rat),
    NotTransitive,
}

impl Transitivity {
    pub fn is_transitive(&self) -> bool {
        !matches!(self, Transitivity::NotTransitive)
    }
}

/// Irreducible, not a single permutation cycle, and no constant cell.
fn graph_transitive(ms: &MarkovSystem) -> bool {
    let all: Vec<usize> = (0..ms.n_cells()).collect();
    ms.is_irreducible() && !ms.scc_is_permutation(&all) && (0..ms.n_cells()).all(|i| !ms.is_degenerate(i))
}

pub fn classify_transitivity(ms: &MarkovSystem) -> Transitivity {
    if !graph_transitive(ms) {
        return Transitivity::NotTransitive;
    }
    if ms.period() == 1 {
        return Transitivity::Mixing;
    }
    match swap_point(ms.map(), ms.points()) {
        Some(a) => Transitivity::TransitiveNotMixing(a),
        // impossible for interval maps; reported rather than assumed
        None => Transitivity::NotTransitive,
    }
}

fn swap_point(map: &PLMap, candidates: &[Rat]) -> Option<Rat> {
    candidates.iter().find(|a| is_swap(map, a)).cloned()
}

/// `f[0,a] = [a,1]` and `f[a,1] = [0,a]` with `a` interior and fixed.
pub fn is_swap(map: &PLMap, a: &Rat) -> bool {
    let (z, o) = (rat::zero(), rat::one());
    a > &z
        && a < &o
        && map.at(a) == *a
        && map.image(&Interval::new(z.clone(), a.clone())) == Interval::new(a.clone(), o.clone())
        && map.image(&Interval::new(a.clone(), o)) == Interval::new(z, a.clone())
}

/// The second iterate restricted to `[0,a]` and `[a,1]`, each rescaled to [0,1].
pub fn half_systems(ms: &MarkovSystem, a: &Rat, cap: usize, budget: usize) -> Result<(MarkovSystem, MarkovSystem)> {
    let f2 = ms.map().power(2, cap)?;
    let mk = |i: Interval| -> Result<MarkovSystem> {
        let g = f2.restrict_rescaled(&i)?;
        markovize(&g, budget).ok_or_else(|| Error::resource("half system not Markov within budget"))
    };
    Ok((mk(Interval::new(rat::zero(), a.clone()))?, mk(Interval::new(a.clone(), rat::one()))?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingWitness {
    pub fixed_point: Rat,
    pub period2_point: Rat,
    /// `x ∈ U ⊂ f(U)` and `U ⊂ [x-η, x+η]`.
    pub expanding: Interval,
    /// `U_i = f^i(U)`, nested increasing.
    pub ladder: Vec<Interval>,
}

/// Interior fixed point with an expanding neighbourhood, a nearby period-2 point and the ladder `f^i U`.
pub fn mixing_structures(ms: &MarkovSystem, eta: &Rat, ladder_len: usize, cap: usize) -> Result<MixingWitness> {
    if !classify_transitivity(ms).is_transitive() {
        return Err(Error::pre("system is not transitive"));
    }
    if !eta.is_positive() {
        return Err(Error::domain("eta must be positive"));
    }
    let map = ms.map();
    let fixed = periodic_points(map, 1, cap)?;
    let p2: Vec<Rat> =
        periodic_points(map, 2, cap)?.points.into_iter().filter(|p| p.minimal_period == 2).map(|p| p.x).collect();
    for x in fixed.points.iter().map(|p| &p.x).filter(|x| !x.is_zero() && !x.is_one()) {
        let Some(u) = expanding_neighbourhood(map, x, eta) else { continue };
        let Some(y) = p2.iter().min_by_key(|y| (*y - x).abs()).cloned() else { continue };
        let mut ladder = vec![u.clone()];
        for _ in 1..ladder_len {
            let next = map.image(ladder.last().unwrap());
            ladder.push(next);
        }
        return Ok(MixingWitness { fixed_point: x.clone(), period2_point: y, expanding: u, ladder });
    }
    Err(Error::pre("no interior fixed point with an expanding neighbourhood"))
}

fn expanding_neighbourhood(map: &PLMap, x: &Rat, eta: &Rat) -> Option<Interval> {
    let sl = map.slope_on_side(x, Side::L)?.abs();
    let sr = map.slope_on_side(x, Side::R)?.abs();
    let outer = Interval::new(rat::max(&rat::zero(), &(x - eta)), rat::min(&rat::one(), &(x + eta)));
    let mut d = eta / rat::int(2);
    for _ in 0..40 {
        let shapes = [
            (rat::zero(), d.clone()),
            (d.clone(), rat::zero()),
            (d.clone(), d.clone()),
            (d.clone(), &d * &sl),
            (&d * &sr, d.clone()),
        ];
        for (l, r) in shapes {
            if l.is_zero() && r.is_zero() {
                continue;
            }
            let u = Interval::new(x - &l, x + &r);
            if outer.contains_interval(&u) && map.image(&u).contains_interval(&u) {
                return Some(u);
            }
        }
        d /= rat::int(2);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryA {
    /// Endpoints of [0,1] without preimages in (0,1).
    pub a_set: Vec<Rat>,
    /// Which of the five admissible shapes `A` has; `None` if it matches none of them.
    pub case: Option<u8>,
    /// Distinct periodic points converging to a fixed (or 2-periodic) point of `A`.
    pub approach: Vec<Rat>,
}

pub fn boundary_a_set(ms: &MarkovSystem, approach_len: usize, cap: usize) -> Result<BoundaryA> {
    if classify_transitivity(ms) != Transitivity::Mixing {
        return Err(Error::pre("system is not mixing"));
    }
    let map = ms.map();
    let (z, o) = (rat::zero(), rat::one());
    let open = Interval::new(z.clone(), o.clone());
    let a_set: Vec<Rat> = [z.clone(), o.clone()]
        .into_iter()
        .filter(|e| {
            map.preimages(e)
                .components()
                .iter()
                .all(|c| !open.contains_interior(&c.lo) && !open.contains_interior(&c.hi))
        })
        .collect();
    let (f0, f1) = (map.at(&z), map.at(&o));
    let case = match a_set.as_slice() {
        [] => Some(1),
        [a] if a.is_zero() && f0.is_zero() => Some(2),
        [a] if a.is_one() && f1.is_one() => Some(3),
        [_, _] if f0.is_zero() && f1.is_one() => Some(4),
        [_, _] if f0.is_one() && f1.is_zero() => Some(5),
        _ => None,
    };
    let target = match case {
        Some(2) | Some(4) | Some(5) => Some(z.clone()),
        Some(3) => Some(o.clone()),
        _ => None,
    };
    let approach = match target {
        Some(a) => approach_points(map, &a, approach_len, cap)?,
        None => Vec::new(),
    };
    Ok(BoundaryA { a_set, case, approach })
}

/// For growing `n`, the `f^n`-fixed point nearest `a`; keeps the strictly improving ones.
fn approach_points(map: &PLMap, a: &Rat, len: usize, cap: usize) -> Result<Vec<Rat>> {
    let mut out: Vec<Rat> = Vec::new();
    let mut best: Option<Rat> = None;
    let mut g = map.clone();
    for n in 1..=64 {
        if out.len() >= len {
            break;
        }
        if n > 1 {
            g = match map.compose(&g, cap) {
                Ok(next) => next,
                Err(e) if e.is_resource() => break,
                Err(e) => return Err(e),
            };
        }
        let near = fixed_of(&g).into_iter().filter(|x| x != a).min_by_key(|x| (x - a).abs());
        if let Some(x) = near {
            let d = (&x - a).abs();
            if best.as_ref().is_none_or(|b| &d < b) {
                best = Some(d);
                out.push(x);
            }
        }
    }
    Ok(out)
}

fn fixed_of(g: &PLMap) -> Vec<Rat> {
    let one = Rat::one();
    (0..g.num_pieces())
        .filter_map(|i| {
            let (dom, s) = g.piece(i);
            if s == one {
                return None;
            }
            let x = (&g.values()[i] - &s * &dom.lo) / (&one - &s);
            dom.contains(&x).then_some(x)
        })
        .collect()
}
