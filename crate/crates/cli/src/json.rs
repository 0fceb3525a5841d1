//! JSON views of core results. Rationals are "p/q" strings.

use serde_json::{json, Value};

use intervaldyn_core::basic::BasicSetApprox;
use intervaldyn_core::cycle::CycleOfIntervals;
use intervaldyn_core::decomp::{DecompositionReport, OmegaEvidence, OmegaVerdict, Stability};
use intervaldyn_core::prolong::{Prolongation, ProlongationKind};
use intervaldyn_core::rat::{self, Rat};
use intervaldyn_core::shadow::{SpecCheck, SpecRequest, SpecTarget};
use intervaldyn_core::{Error, Interval, IntervalSet, Result};

pub fn r(x: &Rat) -> Value {
    Value::String(rat::show(x))
}

pub fn rats<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Value {
    Value::Array(xs.into_iter().map(r).collect())
}

pub fn interval(i: &Interval) -> Value {
    json!([r(&i.lo), r(&i.hi)])
}

pub fn set(s: &IntervalSet) -> Value {
    Value::Array(s.components().iter().map(interval).collect())
}

pub fn cycle(c: &CycleOfIntervals) -> Value {
    json!({
        "period": c.period,
        "orbit": c.orbit.iter().map(interval).collect::<Vec<_>>(),
        "weak": c.weak,
    })
}

pub fn basic(b: &BasicSetApprox) -> Value {
    json!({
        "ambient": cycle(&b.ambient),
        "depth": b.depth,
        "outer": set(&b.outer),
        "gaps": b.gaps.iter().map(interval).collect::<Vec<_>>(),
        "gaps_invariant": b.gaps_invariant(),
    })
}

pub fn prolongation(p: &Prolongation) -> Value {
    let kind = match &p.kind {
        ProlongationKind::ZeroDim => json!({"type": "zero_dim"}),
        ProlongationKind::PeriodicOrbit(o) => json!({"type": "periodic_orbit", "orbit": rats(o)}),
        ProlongationKind::Solenoidal(ps) => json!({"type": "solenoidal", "periods": ps}),
        ProlongationKind::Cycle(c) => json!({"type": "cycle", "cycle": cycle(c)}),
        ProlongationKind::Undecided => json!({"type": "undecided"}),
    };
    json!({"kind": kind, "set": set(&p.set), "depth": p.depth})
}

fn stability(s: Stability) -> &'static str {
    match s {
        Stability::Attracting => "attracting",
        Stability::Neutral => "neutral",
        Stability::Repelling => "repelling",
    }
}

pub fn verdict(v: &OmegaVerdict) -> Value {
    let evidence = match &v.evidence {
        OmegaEvidence::Cycle { orbit, exact } => json!({"type": "cycle", "orbit": rats(orbit), "exact": exact}),
        OmegaEvidence::Tower { periods } => json!({"type": "tower", "periods": periods}),
        OmegaEvidence::Transitive(c) => json!({"type": "transitive", "cycle": cycle(c)}),
        OmegaEvidence::Cantor { ambient, outer } => {
            json!({"type": "cantor", "ambient": cycle(ambient), "outer": set(outer)})
        }
        OmegaEvidence::Undecided => json!({"type": "undecided"}),
    };
    json!({"case": v.case(), "undecided": v.case().is_none(), "evidence": evidence, "trace": rats(&v.trace)})
}

pub fn decomposition(d: &DecompositionReport) -> Value {
    json!({
        "basic_sets": d.basic_sets.iter().map(basic).collect::<Vec<_>>(),
        "solenoids": d.solenoids.iter().map(|s| json!({
            "periods": s.periods(),
            "levels": s.levels.iter().map(cycle).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "genus0": {
            "orbits": d.genus0.orbits.iter().map(|o| json!({
                "orbit": rats(&o.orbit),
                "period": o.period,
                "stability": stability(o.stability),
            })).collect::<Vec<_>>(),
            "bands": d.genus0.bands.iter().map(|b| json!({
                "cells": b.cells.iter().map(interval).collect::<Vec<_>>(),
                "period": b.period,
            })).collect::<Vec<_>>(),
        },
        "per_point": d.per_point.iter().map(|(x, v)| json!({"x": r(x), "verdict": verdict(v)})).collect::<Vec<_>>(),
        "intersections_finite": d.intersections_finite,
    })
}

pub fn spec_check(c: &SpecCheck) -> Value {
    json!({
        "ok": c.ok(),
        "periodic": c.periodic,
        "non_reversing": c.non_reversing,
        "deviations": rats(&c.deviations),
        "entries": c.entries,
        "violated": c.violated,
    })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::domain(format!("request is missing {key:?}")))
}

fn rat_of(v: &Value) -> Result<Rat> {
    let s = v.as_str().ok_or_else(|| Error::domain(format!("expected a \"p/q\" string, got {v}")))?;
    rat::parse(s)
}

fn usize_of(v: &Value) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| Error::domain(format!("expected a count, got {v}")))
}

fn pair(v: &Value) -> Result<(&Value, &Value)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(Error::domain(format!("expected a pair, got {v}"))),
    }
}

/// `{"epsilon": "1/4", "period": 5, "targets": [{"x": "1/3", "u": ["1/3", "7/12"], "window": [0, 0]}]}`
pub fn spec_request(v: &Value) -> Result<SpecRequest> {
    let epsilon = rat_of(field(v, "epsilon")?)?;
    let period = usize_of(field(v, "period")?)?;
    let list = field(v, "targets")?.as_array().ok_or_else(|| Error::domain("targets must be a list"))?;
    let mut targets = Vec::new();
    for t in list {
        let (lo, hi) = pair(field(t, "u")?)?;
        let (a, b) = pair(field(t, "window")?)?;
        let (lo, hi) = (rat_of(lo)?, rat_of(hi)?);
        if lo > hi {
            return Err(Error::domain("u must be an interval [lo, hi]"));
        }
        targets.push(SpecTarget {
            x: rat_of(field(t, "x")?)?,
            u: Interval::new(lo, hi),
            window: (usize_of(a)?, usize_of(b)?),
        });
    }
    Ok(SpecRequest { targets, period, epsilon })
}
